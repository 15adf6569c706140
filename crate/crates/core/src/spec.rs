//! Textual matrix specifications.
//!
//! ```text
//! spec := "fourier:" INT
//!       | "fouriergroup:" INT ("x" INT)*
//!       | "tensor(" spec "," spec ")"
//!       | "dita(" INT "," INT ";" qsrc ")"
//!       | "conj(" spec ")" | "transpose(" spec ")" | "adjoint(" spec ")"
//!       | "file=" PATH
//! qsrc := "seed=" UINT64 | "file=" PATH
//! ```
//!
//! Whitespace between tokens is ignored. A `PATH` runs until the next `,`,
//! `;` or `)` and is trimmed.

use std::fmt;
use std::path::PathBuf;

use crate::config::Config;
use crate::hadamard::{dita, fourier, fourier_group, tensor, HadamardMatrix};
use crate::io::{load_hadamard, load_matrix, load_phases};
use crate::matrix::ComplexMatrix;
use crate::phases::PhaseParameterMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhaseSpec {
    Seed(u64),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixSpec {
    Fourier(usize),
    FourierGroup(Vec<usize>),
    Tensor(Box<MatrixSpec>, Box<MatrixSpec>),
    Dita { m: usize, n: usize, phases: PhaseSpec },
    Conj(Box<MatrixSpec>),
    Transpose(Box<MatrixSpec>),
    Adjoint(Box<MatrixSpec>),
    File(PathBuf),
}

impl fmt::Display for PhaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseSpec::Seed(s) => write!(f, "seed={s}"),
            PhaseSpec::File(p) => write!(f, "file={}", p.display()),
        }
    }
}

impl fmt::Display for MatrixSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixSpec::Fourier(n) => write!(f, "fourier:{n}"),
            MatrixSpec::FourierGroup(orders) => {
                let parts: Vec<String> = orders.iter().map(|o| o.to_string()).collect();
                write!(f, "fouriergroup:{}", parts.join("x"))
            }
            MatrixSpec::Tensor(a, b) => write!(f, "tensor({a},{b})"),
            MatrixSpec::Dita { m, n, phases } => write!(f, "dita({m},{n};{phases})"),
            MatrixSpec::Conj(a) => write!(f, "conj({a})"),
            MatrixSpec::Transpose(a) => write!(f, "transpose({a})"),
            MatrixSpec::Adjoint(a) => write!(f, "adjoint({a})"),
            MatrixSpec::File(p) => write!(f, "file={}", p.display()),
        }
    }
}

impl std::str::FromStr for MatrixSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_matrix_spec(s)
    }
}

pub fn parse_matrix_spec(text: &str) -> Result<MatrixSpec> {
    let mut p = Parser { src: text, pos: 0 };
    let spec = p.spec()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(Error::syntax(p.pos, "trailing input"));
    }
    Ok(spec)
}

/// Parses a bare phase source (`seed=...` or `file=...`).
pub fn parse_phase_spec(text: &str) -> Result<PhaseSpec> {
    let mut p = Parser { src: text, pos: 0 };
    let q = p.qsrc()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(Error::syntax(p.pos, "trailing input"));
    }
    Ok(q)
}

impl PhaseSpec {
    pub fn build(&self, m: usize, n: usize) -> Result<PhaseParameterMatrix> {
        let q = match self {
            PhaseSpec::Seed(seed) => PhaseParameterMatrix::seeded(m, n, *seed)?,
            PhaseSpec::File(path) => load_phases(path)?,
        };
        if q.m() != m || q.n() != n {
            return Err(Error::ShapeMismatch {
                expected: format!("{m}x{n} phase matrix"),
                found: format!("{}x{}", q.m(), q.n()),
            });
        }
        Ok(q)
    }
}

impl MatrixSpec {
    pub fn build(&self, config: &Config) -> Result<HadamardMatrix> {
        match self {
            MatrixSpec::Fourier(n) => fourier(*n),
            MatrixSpec::FourierGroup(orders) => fourier_group(orders),
            MatrixSpec::Tensor(a, b) => Ok(tensor(&a.build(config)?, &b.build(config)?)),
            MatrixSpec::Dita { m, n, phases } => dita(*m, *n, &phases.build(*m, *n)?),
            MatrixSpec::Conj(a) => Ok(a.build(config)?.conjugate()),
            MatrixSpec::Transpose(a) => Ok(a.build(config)?.transpose()),
            MatrixSpec::Adjoint(a) => Ok(a.build(config)?.adjoint()),
            MatrixSpec::File(path) => load_hadamard(path, config),
        }
    }

    /// The matrix the spec describes, without Hadamard validation of files.
    pub fn build_unchecked(&self) -> Result<ComplexMatrix> {
        Ok(match self {
            MatrixSpec::Fourier(_) | MatrixSpec::FourierGroup(_) | MatrixSpec::Dita { .. } => {
                self.build(&Config::default())?.matrix().clone()
            }
            MatrixSpec::Tensor(a, b) => {
                let (a, b) = (a.build_unchecked()?, b.build_unchecked()?);
                let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
                ComplexMatrix::from_fn(ar * br, ac * bc, |i, j| a.get(i / br, j / bc) * b.get(i % br, j % bc))
            }
            MatrixSpec::Conj(a) => a.build_unchecked()?.conjugate(),
            MatrixSpec::Transpose(a) => a.build_unchecked()?.transpose(),
            MatrixSpec::Adjoint(a) => a.build_unchecked()?.adjoint(),
            MatrixSpec::File(path) => load_matrix(path)?,
        })
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(Error::syntax(self.pos, format!("expected `{token}`")))
        }
    }

    fn uint(&mut self) -> Result<(u64, usize)> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(Error::syntax(start, "expected an unsigned integer"));
        }
        self.pos += digits;
        let value = self.src[start..self.pos]
            .parse::<u64>()
            .map_err(|_| Error::syntax(start, "integer out of range"))?;
        Ok((value, start))
    }

    fn order(&mut self) -> Result<usize> {
        let (v, at) = self.uint()?;
        if v == 0 {
            return Err(Error::NonPositiveOrder { offset: at });
        }
        usize::try_from(v).map_err(|_| Error::syntax(at, "integer out of range"))
    }

    fn path(&mut self) -> Result<PathBuf> {
        self.skip_ws();
        let start = self.pos;
        let len = self.rest().find([',', ';', ')']).unwrap_or(self.rest().len());
        let raw = self.src[start..start + len].trim();
        if raw.is_empty() {
            return Err(Error::syntax(start, "empty file path"));
        }
        self.pos += len;
        Ok(PathBuf::from(raw))
    }

    fn qsrc(&mut self) -> Result<PhaseSpec> {
        if self.eat("seed=") {
            Ok(PhaseSpec::Seed(self.uint()?.0))
        } else if self.eat("file=") {
            Ok(PhaseSpec::File(self.path()?))
        } else {
            Err(Error::syntax(self.pos, "expected `seed=` or `file=`"))
        }
    }

    fn spec(&mut self) -> Result<MatrixSpec> {
        self.skip_ws();
        let start = self.pos;
        // Longer keywords first: `fouriergroup:` shares a prefix with `fourier:`.
        if self.eat("fouriergroup:") {
            let mut orders = vec![self.order()?];
            while self.eat("x") {
                orders.push(self.order()?);
            }
            return Ok(MatrixSpec::FourierGroup(orders));
        }
        if self.eat("fourier:") {
            return Ok(MatrixSpec::Fourier(self.order()?));
        }
        if self.eat("file=") {
            return Ok(MatrixSpec::File(self.path()?));
        }
        if self.eat("tensor(") {
            let a = self.spec()?;
            self.expect(",")?;
            let b = self.spec()?;
            self.expect(")")?;
            return Ok(MatrixSpec::Tensor(Box::new(a), Box::new(b)));
        }
        if self.eat("dita(") {
            let m = self.order()?;
            self.expect(",")?;
            let n = self.order()?;
            self.expect(";")?;
            let phases = self.qsrc()?;
            self.expect(")")?;
            return Ok(MatrixSpec::Dita { m, n, phases });
        }
        for (kw, wrap) in [
            ("conj(", MatrixSpec::Conj as fn(Box<MatrixSpec>) -> MatrixSpec),
            ("transpose(", MatrixSpec::Transpose),
            ("adjoint(", MatrixSpec::Adjoint),
        ] {
            if self.eat(kw) {
                let inner = self.spec()?;
                self.expect(")")?;
                return Ok(wrap(Box::new(inner)));
            }
        }

        let name_len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        if name_len == 0 {
            return Err(Error::syntax(start, "expected a matrix constructor"));
        }
        Err(Error::UnknownConstructor {
            offset: start,
            name: self.rest()[..name_len].to_owned(),
        })
    }
}
