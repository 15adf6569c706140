use std::fs;
use std::io::Write;

use hopf_trunc::dita::bench_structured_vs_dense;
use hopf_trunc::duality::{dita_selfduality_residual, duality_residual, DualityReport};
use hopf_trunc::io::{matrix_to_json, to_json_15, write_matrix};
use hopf_trunc::spec::parse_phase_spec;
use hopf_trunc::spectra::{cesaro_moments, haar_moment_estimate, moment_table, truncated_law, CesaroSequence, HaarEstimate};
use hopf_trunc::{parse_matrix_spec, validate_with, Error, HadamardMatrix, Result, ValidationReport};
use serde::Serialize;

use crate::render::{cesaro_csv, measure_csv, measure_svg, moments_csv};
use crate::{Cli, Command, Format, Status};

#[derive(Serialize)]
struct ValidateOutput<'a> {
    matrix: &'a str,
    #[serde(flatten)]
    report: ValidationReport,
}

#[derive(Serialize)]
struct CesaroOutput {
    matrix: String,
    #[serde(flatten)]
    sequence: CesaroSequence,
    haar: HaarEstimate,
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}")
                .and_then(|_| out.flush())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn require_format(cli: &Cli, allowed: &[Format]) -> Result<()> {
    if allowed.contains(&cli.format) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "--format {:?} is not available for this subcommand",
            cli.format
        )))
    }
}

fn build(cli: &Cli, spec: &str) -> Result<HadamardMatrix> {
    parse_matrix_spec(spec)?.build(&cli.config())
}

fn status(pass: bool) -> Status {
    if pass {
        Status::Pass
    } else {
        Status::CheckFailed
    }
}

fn emit_duality(cli: &Cli, report: &DualityReport) -> Result<Status> {
    emit(cli, &to_json_15(report))?;
    Ok(status(report.pass))
}

pub fn run(cli: &Cli) -> Result<Status> {
    let config = cli.config();
    match &cli.command {
        Command::Validate { spec, dump } => {
            require_format(cli, &[Format::Json])?;
            let parsed = parse_matrix_spec(spec)?;
            let matrix = parsed.build_unchecked()?;
            let report = validate_with(&matrix, &config)?;
            if let Some(path) = dump {
                write_matrix(path, &matrix)?;
            }
            let label = parsed.to_string();
            emit(cli, &to_json_15(&ValidateOutput { matrix: &label, report }))?;
            Ok(status(report.pass))
        }
        Command::Measure { spec, r } => {
            let law = truncated_law(&build(cli, spec)?, *r, &config)?;
            let text = match cli.format {
                Format::Json => to_json_15(&law),
                Format::Csv => measure_csv(&law),
                Format::Svg => measure_svg(&law),
            };
            emit(cli, &text)?;
            Ok(Status::Pass)
        }
        Command::Moments { spec, p_max, r_max } => {
            require_format(cli, &[Format::Json, Format::Csv])?;
            let table = moment_table(&build(cli, spec)?, *p_max as usize, *r_max, &config)?;
            let text = match cli.format {
                Format::Csv => moments_csv(&table),
                _ => to_json_15(&table),
            };
            emit(cli, &text)?;
            Ok(Status::Pass)
        }
        Command::Cesaro {
            spec,
            p,
            k_max,
            haar_tol,
        } => {
            require_format(cli, &[Format::Json, Format::Csv])?;
            let h = build(cli, spec)?;
            let (p, k_max) = (*p as usize, *k_max as usize);
            let sequence = cesaro_moments(&h, p, k_max, &config)?;
            let text = match cli.format {
                Format::Csv => cesaro_csv(&sequence),
                _ => {
                    let haar = haar_moment_estimate(&h, p, k_max, *haar_tol, &config)?;
                    to_json_15(&CesaroOutput {
                        matrix: h.provenance().to_string(),
                        sequence,
                        haar,
                    })
                }
            };
            emit(cli, &text)?;
            Ok(Status::Pass)
        }
        Command::Duality { spec, p_max, r_max } => {
            require_format(cli, &[Format::Json])?;
            let report = duality_residual(&build(cli, spec)?, *p_max as usize, *r_max as usize, &config)?;
            emit_duality(cli, &report)
        }
        Command::DitaCheck {
            m,
            n,
            phases,
            p_max,
            r_max,
        } => {
            require_format(cli, &[Format::Json])?;
            let q = parse_phase_spec(phases)?.build(*m as usize, *n as usize)?;
            let report = dita_selfduality_residual(&q, *p_max as usize, *r_max as usize, &config)?;
            emit_duality(cli, &report)
        }
        Command::Bench {
            m,
            n,
            phases,
            p,
            r,
            reps,
        } => {
            require_format(cli, &[Format::Json])?;
            let q = parse_phase_spec(phases)?.build(*m as usize, *n as usize)?;
            let report = bench_structured_vs_dense(&q, *p as usize, *r as usize, *reps as usize, &config)?;
            emit(cli, &to_json_15(&report))?;
            Ok(status(report.verified))
        }
        Command::Gen { spec } => {
            require_format(cli, &[Format::Json])?;
            let h = build(cli, spec)?;
            emit(cli, &matrix_to_json(h.matrix())?)?;
            Ok(Status::Pass)
        }
    }
}
