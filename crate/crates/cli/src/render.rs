use std::fmt::Write;

use hopf_trunc::io::sig15;
use hopf_trunc::spectra::{CesaroSequence, MomentTable, SpectralMeasure};

pub fn measure_csv(law: &SpectralMeasure) -> String {
    let mut s = String::from("x,w");
    for a in &law.atoms {
        write!(s, "\n{},{}", sig15(a.x), sig15(a.w)).unwrap();
    }
    s
}

pub fn moments_csv(table: &MomentTable) -> String {
    let mut s = String::from("p,r,c,gamma");
    for p in 1..=table.p_max {
        for r in 0..=table.r_max {
            write!(s, "\n{p},{r},{},{}", sig15(table.c(p, r)), sig15(table.gamma(p, r))).unwrap();
        }
    }
    s
}

pub fn cesaro_csv(seq: &CesaroSequence) -> String {
    let mut s = String::from("k,c,s");
    for (k, (c, avg)) in seq.moments.iter().zip(&seq.averages).enumerate() {
        write!(s, "\n{},{},{}", k + 1, sig15(*c), sig15(*avg)).unwrap();
    }
    s
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

/// Static bar chart: one bar per atom, linear x-axis on `[0, N]`, bar height
/// equal to the weight on a `[0, 1]` y-axis.
pub fn measure_svg(law: &SpectralMeasure) -> String {
    let n = law.n as f64;
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let x_of = |x: f64| MARGIN + plot_w * x / n;
    let y_of = |w: f64| HEIGHT - MARGIN - plot_h * w;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14">truncated law, N = {}, r = {}</text>"#,
        WIDTH / 2.0,
        MARGIN / 2.0,
        law.n,
        law.r
    )
    .unwrap();
    let (x0, y0) = (x_of(0.0), y_of(0.0));
    writeln!(
        s,
        r#"<path d="M{x0} {} V{y0} H{}" stroke="black" fill="none"/>"#,
        y_of(1.0),
        x_of(n)
    )
    .unwrap();
    let step = (law.n / 10).max(1);
    for k in (0..=law.n).step_by(step) {
        let x = x_of(k as f64);
        writeln!(
            s,
            r#"<line x1="{x}" y1="{y0}" x2="{x}" y2="{}" stroke="black"/><text x="{x}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{k}</text>"#,
            y0 + 5.0,
            y0 + 18.0
        )
        .unwrap();
    }
    for k in 0..=4 {
        let w = k as f64 / 4.0;
        let y = y_of(w);
        writeln!(
            s,
            r#"<line x1="{}" y1="{y}" x2="{x0}" y2="{y}" stroke="black"/><text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="11">{w}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            y + 4.0
        )
        .unwrap();
    }
    let bar = (plot_w / (4.0 * n.max(1.0))).clamp(2.0, 12.0);
    for a in &law.atoms {
        let top = y_of(a.w);
        writeln!(
            s,
            r##"<rect class="atom" x="{:.3}" y="{top:.3}" width="{bar:.3}" height="{:.3}" fill="#3366aa" data-x="{}" data-w="{}"/>"##,
            x_of(a.x) - bar / 2.0,
            y0 - top,
            sig15(a.x),
            sig15(a.w)
        )
        .unwrap();
    }
    s.push_str("</svg>");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use hopf_trunc::spectra::Atom;

    fn law() -> SpectralMeasure {
        SpectralMeasure {
            n: 3,
            r: 2,
            atoms: vec![Atom { x: 0.0, w: 2.0 / 3.0 }, Atom { x: 3.0, w: 1.0 / 3.0 }],
            cluster_tol: 3e-6,
        }
    }

    #[test]
    fn csv_rows() {
        assert_eq!(measure_csv(&law()), "x,w\n0,0.666666666666667\n3,0.333333333333333");
    }

    #[test]
    fn svg_has_one_bar_per_atom() {
        let svg = measure_svg(&law());
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>"));
        assert_eq!(svg.matches(r#"class="atom""#).count(), 2);
        assert!(svg.contains(r#"data-x="3""#));
    }
}
