//! File output: header blocks, CSV, JSON and minimal SVG line plots.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::profiles::SolitaryWaveProfile;
use crate::spectra::SpectrumReport;
use crate::stability::StabilityScanRecord;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance written at the top of every output file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub config_sha256: String,
    pub checks: Vec<String>,
}

impl Header {
    pub fn new(config_sha256: &str, checks: &[&str]) -> Self {
        Self {
            tool: "soliton-spectra".into(),
            version: TOOL_VERSION.into(),
            config_sha256: config_sha256.into(),
            checks: checks.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn comment_block(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# tool: {} {}", self.tool, self.version);
        let _ = writeln!(s, "# config_sha256: {}", self.config_sha256);
        let _ = writeln!(s, "# checks: {}", self.checks.join(" "));
        s
    }
}

/// Scientific notation with 16 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.15e}")
    } else {
        format!("{x}")
    }
}

pub struct CsvTable {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        Self { meta: Vec::new(), columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn render(&self, header: &Header) -> String {
        let mut s = header.comment_block();
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k}: {v}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }
}

/// `{"header": …, "data": …}` with two-space indentation.
pub fn render_json(header: &Header, data: &impl Serialize) -> Result<String> {
    #[derive(Serialize)]
    struct Doc<'a, T: Serialize> {
        header: &'a Header,
        data: &'a T,
    }
    let mut s = serde_json::to_string_pretty(&Doc { header, data })?;
    s.push('\n');
    Ok(s)
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

pub fn profile_csv(profile: &SolitaryWaveProfile) -> CsvTable {
    let names: &[&str] = match profile.components.len() {
        1 => &["x", "component_1"],
        _ => &["x", "component_1", "component_2"],
    };
    let mut t = CsvTable::new(names)
        .meta("equation", profile.equation.as_str())
        .meta("omega", fmt_num(profile.omega))
        .meta("m", fmt_num(profile.mass()))
        .meta("family", profile.family_label());
    for (j, x) in profile.nodes().iter().enumerate() {
        let mut row = vec![fmt_num(*x)];
        row.extend(profile.components.iter().map(|c| fmt_num(c[j])));
        t.rows.push(row);
    }
    t
}

pub fn spectrum_csv(report: &SpectrumReport) -> CsvTable {
    let mut t = CsvTable::new(&["index", "re", "im", "classification", "localization", "residual", "sector"])
        .meta("operator", &report.meta.label)
        .meta("omega", fmt_num(report.meta.omega))
        .meta("m", fmt_num(report.meta.mass));
    for (i, z) in report.eigenvalues.iter().enumerate() {
        t.rows.push(vec![
            i.to_string(),
            fmt_num(z.re),
            fmt_num(z.im),
            report.classifications.get(i).map_or("", |c| c.as_str()).to_string(),
            report.localization.as_ref().map_or(String::new(), |l| fmt_num(l[i])),
            report.residuals[i].map_or(String::new(), fmt_num),
            report.sectors.as_ref().map_or(String::new(), |s| s[i].to_string()),
        ]);
    }
    t
}

/// Eigenvalues as `[re, im]` pairs plus per-eigenvalue fields.
pub fn spectrum_json(report: &SpectrumReport) -> Value {
    json!({
        "operator": report.meta.label,
        "omega": report.meta.omega,
        "m": report.meta.mass,
        "grid": report.meta.grid,
        "eigenvalues": report.eigenvalues.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        "classifications": report.classifications.iter().map(|c| c.as_str()).collect::<Vec<_>>(),
        "localization": report.localization,
        "residuals": report.residuals,
        "sectors": report.sectors,
        "essential_bands": report.essential_bands,
    })
}

pub fn scan_csv(rows: &[StabilityScanRecord]) -> CsvTable {
    let mut t = CsvTable::new(&[
        "omega",
        "Q",
        "dQ_domega",
        "real_pair_count",
        "max_real",
        "nullspace_dim",
        "projector_radius",
        "virial_residual_1",
        "virial_residual_2",
        "vk_verdict",
        "L",
        "N",
        "notes",
        "error",
    ]);
    for r in rows {
        t.rows.push(vec![
            fmt_num(r.omega),
            fmt_num(r.q),
            fmt_num(r.dq_domega),
            r.real_pair_count.to_string(),
            fmt_num(r.max_real),
            r.nullspace_dim.to_string(),
            fmt_num(r.projector_radius),
            r.virial_residuals.map_or(String::new(), |v| fmt_num(v.identity)),
            r.virial_residuals.map_or(String::new(), |v| fmt_num(v.kinetic)),
            r.vk_verdict.map_or("", |v| v.as_str()).to_string(),
            fmt_num(r.half_width),
            r.n_points.to_string(),
            r.notes.join("; "),
            r.error.clone().unwrap_or_default().replace(',', ";"),
        ]);
    }
    t
}

/// Whitespace-separated two-column file.
pub fn two_column(header: &Header, names: (&str, &str), points: &[(f64, f64)]) -> String {
    let mut s = header.comment_block();
    let _ = writeln!(s, "# {} {}", names.0, names.1);
    for (x, y) in points {
        let _ = writeln!(s, "{} {}", fmt_num(*x), fmt_num(*y));
    }
    s
}

/// A single-series line plot.
pub fn svg_line_plot(title: &str, x_label: &str, y_label: &str, series: &[(f64, f64)]) -> String {
    let (w, h, pad) = (640.0, 400.0, 60.0);
    let pts: Vec<(f64, f64)> = series.iter().copied().filter(|(x, y)| x.is_finite() && y.is_finite()).collect();
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{}</text>"#, w / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#,
        w / 2.0,
        h - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" font-size="13" transform="rotate(-90 16 {})">{}</text>"#,
        h / 2.0,
        h / 2.0,
        escape(y_label)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    if !pts.is_empty() {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in &pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x1 == x0 {
            x1 = x0 + 1.0;
        }
        if y1 == y0 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
        let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ =
            writeln!(s, r#"<polyline fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#, path.join(" "));
        for (v, anchor, x, y) in [(x0, "start", pad, h - pad + 16.0), (x1, "end", w - pad, h - pad + 16.0)] {
            let _ = writeln!(s, r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-size="11">{v:.4}</text>"#);
        }
        for (v, y) in [(y0, h - pad), (y1, pad + 10.0)] {
            let _ = writeln!(s, r#"<text x="{}" y="{y}" text-anchor="end" font-size="11">{v:.4e}</text>"#, pad - 4.0);
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_sixteen_digits() {
        assert_eq!(fmt_num(1.0 / 3.0), "3.333333333333333e-1");
        assert_eq!(fmt_num(f64::NAN), "NaN");
    }

    #[test]
    fn csv_layout() {
        let mut t = CsvTable::new(&["a", "b"]).meta("omega", "0.5");
        t.rows.push(vec!["1".into(), "2".into()]);
        let s = t.render(&Header::new("abc", &["charge"]));
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], format!("# tool: soliton-spectra {TOOL_VERSION}"));
        assert_eq!(lines[1], "# config_sha256: abc");
        assert_eq!(lines[3], "# omega: 0.5");
        assert_eq!(lines[4], "a,b");
        assert_eq!(lines[5], "1,2");
    }

    #[test]
    fn json_header_first() {
        let s = render_json(&Header::new("h", &[]), &json!({"z": 1, "a": 2})).unwrap();
        assert!(s.find("\"header\"").unwrap() < s.find("\"data\"").unwrap());
        // object keys come out sorted
        assert!(s.find("\"a\"").unwrap() < s.find("\"z\"").unwrap());
    }

    #[test]
    fn svg_is_well_formed() {
        let s = svg_line_plot("Q", "omega", "Q", &[(0.1, 1.0), (0.2, 2.0), (0.3, f64::NAN)]);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("polyline"));
    }
}
