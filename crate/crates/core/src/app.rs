//! Command dispatch behind the `soliton-spectra` binary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::config::{Command, Format, RunConfig};
use crate::derrick::derrick_instability;
use crate::error::{Error, Result};
use crate::io::{
    fmt_num, profile_csv, render_json, scan_csv, spectrum_csv, spectrum_json, svg_line_plot, two_column, write_file,
    CsvTable, Header,
};
use crate::nonlinearity::WaveNonlinearity;
use crate::operators::{jl_pair, nls_kernel_vectors, nls_pair, write_matrix_text};
use crate::profiles::{domega_profile, solve_nlw_stationary, Equation, SolitaryWaveProfile};
use crate::spectra::{
    axis_dichotomy_defect, classify, detect_real_pairs, hamiltonian_spectrum, projector_rank_with_retry, verify_pairs,
    Classification,
};
use crate::stability::{
    alpha0_residual, bifurcation_scan, charge_closed_form, charge_q, dirac_chain_residuals, energy_parts,
    locate_omega_star, scan_row, sided_check, sign_change_brackets, solve_on_spec, virial_check, virial_pairing,
    SidedCheck, VkVerdict,
};

#[derive(Debug, Default)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    /// Scan rows or verify checks that failed; nonzero makes the exit status nonzero.
    pub failures: usize,
    /// Text printed to stdout.
    pub report: String,
}

struct Writer<'a> {
    dir: &'a Path,
    cfg: &'a RunConfig,
    hash: String,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    fn header(&self, checks: &[&str]) -> Header {
        Header::new(&self.hash, checks)
    }

    fn csv(&mut self, name: &str, table: &CsvTable, checks: &[&str]) -> Result<()> {
        if self.cfg.output.wants(Format::Csv) {
            let h = self.header(checks);
            self.files.push(write_file(self.dir, name, &table.render(&h))?);
        }
        Ok(())
    }

    fn json(&mut self, name: &str, data: &impl Serialize, checks: &[&str]) -> Result<()> {
        if self.cfg.output.wants(Format::Json) {
            let h = self.header(checks);
            self.files.push(write_file(self.dir, name, &render_json(&h, data)?)?);
        }
        Ok(())
    }

    fn svg(&mut self, name: &str, title: &str, labels: (&str, &str), pts: &[(f64, f64)]) -> Result<()> {
        if self.cfg.output.wants(Format::Svg) {
            let h = self.header(&[]);
            let mut s = svg_line_plot(title, labels.0, labels.1, pts);
            let comment = format!("<!-- {} {} config_sha256 {} -->\n", h.tool, h.version, h.config_sha256);
            s.insert_str(s.find('\n').map_or(0, |i| i + 1), &comment);
            self.files.push(write_file(self.dir, name, &s)?);
        }
        Ok(())
    }

    fn raw(&mut self, name: &str, contents: &str) -> Result<()> {
        self.files.push(write_file(self.dir, name, contents)?);
        Ok(())
    }
}

/// Runs `command` on an already validated effective config, writing into
/// `dir`. The effective config is echoed first as `effective_config.json`.
pub fn run(cfg: &RunConfig, dir: &Path) -> Result<RunOutcome> {
    let command = cfg.command.ok_or_else(|| Error::Config("command: missing".into()))?;
    let mut echoed = cfg.clone();
    echoed.output.dir = dir.display().to_string();
    let hash = echoed.hash();
    let mut w = Writer { dir, cfg, hash, files: Vec::new() };
    echoed.header = Some(serde_json::to_value(w.header(&[]))?);
    let mut text = serde_json::to_string_pretty(&echoed)?;
    text.push('\n');
    w.raw("effective_config.json", &text)?;

    let mut out = RunOutcome::default();
    match command {
        Command::Profile => run_profile(cfg, &mut w, &mut out)?,
        Command::Spectrum => run_spectrum(cfg, &mut w, &mut out)?,
        Command::Scan => run_scan(cfg, &mut w, &mut out)?,
        Command::Virial => run_virial(cfg, &mut w, &mut out)?,
        Command::Derrick => run_derrick(cfg, &mut w, &mut out)?,
        Command::Verify => run_verify(cfg, &mut w, &mut out)?,
    }
    out.files = w.files;
    Ok(out)
}

fn omega(cfg: &RunConfig) -> Result<f64> {
    cfg.omega.ok_or_else(|| Error::Config("omega: required".into()))
}

fn profile_at(cfg: &RunConfig) -> Result<SolitaryWaveProfile> {
    let model = cfg.scalar_model()?;
    solve_on_spec(cfg.equation, &model, omega(cfg)?, &cfg.grid, &cfg.tolerances.scan.solver)
}

fn nlw_theta(cfg: &RunConfig) -> Result<(WaveNonlinearity, crate::grid::Grid1D)> {
    let model = cfg.wave_model.clone().unwrap_or_default();
    let slope = model.f_prime(0.0);
    if slope <= 0.0 {
        return Err(Error::InvalidModel(format!("f'(0) = {slope} gives no decaying solution")));
    }
    let grid = cfg.grid.resolve(slope.sqrt())?;
    Ok((model, grid))
}

fn profile_summary(p: &SolitaryWaveProfile) -> serde_json::Value {
    json!({
        "equation": p.equation.as_str(),
        "omega": p.omega,
        "m": p.mass(),
        "family": p.family_label(),
        "Q": charge_q(p),
        "residual": p.residual,
        "tail_ratio": p.tail_ratio,
        "decay_rate": p.decay_rate,
        "newton_iterations": p.newton_iterations,
        "parity_defect": p.parity_defect(),
        "L": p.grid.half_width,
        "N": p.grid.n_points,
    })
}

fn run_profile(cfg: &RunConfig, w: &mut Writer, out: &mut RunOutcome) -> Result<()> {
    let p = match cfg.equation {
        Equation::Nlw => {
            let (model, grid) = nlw_theta(cfg)?;
            solve_nlw_stationary(&model, &grid, &cfg.tolerances.scan.solver)?
        }
        _ => profile_at(cfg)?,
    };
    let tags = ["stationary-residual"];
    w.csv("profile.csv", &profile_csv(&p), &tags)?;
    let summary = profile_summary(&p);
    w.json("profile.json", &summary, &tags)?;
    let x = p.nodes();
    for (c, comp) in p.components.iter().enumerate() {
        let pts: Vec<(f64, f64)> = x.iter().copied().zip(comp.iter().copied()).collect();
        let name = format!("profile_component_{}.svg", c + 1);
        w.svg(&name, &format!("{} profile, component {}", p.equation.as_str(), c + 1), ("x", "value"), &pts)?;
    }
    out.report = format!(
        "profile {} omega={} residual={:.3e} Q={:.12e}\n",
        p.equation.as_str(),
        p.omega,
        p.residual,
        charge_q(&p)
    );
    Ok(())
}

fn run_spectrum(cfg: &RunConfig, w: &mut Writer, out: &mut RunOutcome) -> Result<()> {
    let opts = &cfg.tolerances.scan;
    let p = profile_at(cfg)?;
    let pair = jl_pair(&p)?;
    if cfg.output.write_matrix {
        let mut buf = Vec::new();
        write_matrix_text(&pair.to_operator(), &mut buf)?;
        w.raw("jl_matrix.txt", &String::from_utf8_lossy(&buf))?;
    }
    let mut report = hamiltonian_spectrum(&pair, true, opts.max_size)?;
    verify_pairs(&mut report, &pair);
    let report = classify(report, &pair.essential_bands, &opts.classify)?;
    let reals = detect_real_pairs(&report, opts.re_tol, opts.im_tol);
    let radius = opts.zero_radius.unwrap_or(opts.zero_radius_factor * (p.mass() - p.omega));
    let (rank, used) = projector_rank_with_retry(&report, faer::c64::new(0.0, 0.0), radius)?;
    let max_residual = report.residuals.iter().flatten().fold(0.0f64, |m, r| m.max(*r));
    let counts: serde_json::Map<String, serde_json::Value> = [
        Classification::EssentialArtifact,
        Classification::IsolatedPoint,
        Classification::EmbeddedCandidate,
        Classification::NearZero,
    ]
    .iter()
    .map(|c| (c.as_str().to_string(), json!(report.count(*c))))
    .collect();
    let summary = json!({
        "size": report.len(),
        "conjugation_defect": report.conjugation_defect(),
        "reflection_defect": report.reflection_defect(),
        "axis_dichotomy_defect": axis_dichotomy_defect(&report),
        "max_eigenpair_residual": max_residual,
        "real_pairs": reals,
        "nullspace_dim": rank,
        "projector_radius": used,
        "classification_counts": counts,
    });
    let tags = ["conjugation-symmetry", "reflection-symmetry", "eigenpair-residual"];
    w.csv("spectrum.csv", &spectrum_csv(&report), &tags)?;
    w.json("spectrum.json", &json!({"spectrum": spectrum_json(&report), "summary": summary}), &tags)?;
    out.report = format!(
        "spectrum {} omega={} size={} real_eigenvalues={} nullspace_dim={} conj_defect={:.3e} refl_defect={:.3e}\n",
        p.equation.as_str(),
        p.omega,
        report.len(),
        reals.len(),
        rank,
        report.conjugation_defect(),
        report.reflection_defect()
    );
    Ok(())
}

fn run_scan(cfg: &RunConfig, w: &mut Writer, out: &mut RunOutcome) -> Result<()> {
    let model = cfg.scalar_model()?;
    let opts = &cfg.tolerances.scan;
    let omegas = cfg.omegas();
    let rows = bifurcation_scan(cfg.equation, &model, &omegas, &cfg.grid, opts);
    out.failures = rows.iter().filter(|r| !r.ok()).count();

    let mut stars: Vec<std::result::Result<SidedCheck, String>> = Vec::new();
    for bracket in sign_change_brackets(&rows) {
        let r = locate_omega_star(cfg.equation, &model, bracket, &cfg.grid, opts, cfg.tolerances.omega_star)
            .and_then(|s| sided_check(cfg.equation, &model, s, cfg.tolerances.side_offset, &cfg.grid, opts));
        stars.push(r.map_err(|e| e.to_string()));
    }

    let mut tags = vec!["vk-biconditional", "projector-rank"];
    if cfg.equation == Equation::Dirac1d {
        tags.push("virial-identity");
    }
    w.csv("scan.csv", &scan_csv(&rows), &tags)?;
    let star_json: Vec<serde_json::Value> = stars
        .iter()
        .map(|s| match s {
            Ok(c) => serde_json::to_value(c).unwrap_or_default(),
            Err(e) => json!({ "error": e }),
        })
        .collect();
    w.json("scan.json", &json!({"rows": rows, "omega_star": star_json}), &tags)?;

    let ok: Vec<_> = rows.iter().filter(|r| r.ok()).collect();
    let charge: Vec<(f64, f64)> = ok.iter().map(|r| (r.omega, r.q)).collect();
    let maxre: Vec<(f64, f64)> = ok.iter().map(|r| (r.omega, r.max_real)).collect();
    let h = w.header(&tags);
    w.raw("charge.dat", &two_column(&h, ("omega", "Q"), &charge))?;
    w.raw("max_real.dat", &two_column(&h, ("omega", "max_real"), &maxre))?;
    w.svg("charge.svg", "charge", ("omega", "Q"), &charge)?;
    w.svg("max_real.svg", "largest real eigenvalue", ("omega", "max Re lambda"), &maxre)?;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>12} {:>14} {:>14} {:>5} {:>12} {:>4}  verdict",
        "omega", "Q", "dQ/domega", "reals", "max_real", "rank"
    );
    for r in &rows {
        match &r.error {
            None => {
                let _ = writeln!(
                    s,
                    "{:>12.6} {:>14.6e} {:>14.6e} {:>5} {:>12.6e} {:>4}  {}",
                    r.omega,
                    r.q,
                    r.dq_domega,
                    r.real_pair_count,
                    r.max_real,
                    r.nullspace_dim,
                    r.vk_verdict.map_or("", VkVerdict::as_str)
                );
            }
            Some(e) => {
                let _ = writeln!(s, "{:>12.6} FAILED: {e}", r.omega);
            }
        }
    }
    for st in stars.iter().flatten() {
        let _ = writeln!(
            s,
            "omega* = {:.6} (bracket {:.6}..{:.6}), sided = {}, rank at {:.6} = {}",
            st.omega_star.omega,
            st.omega_star.bracket.0,
            st.omega_star.bracket.1,
            st.sided,
            st.bracket_omega,
            st.bracket_rank
        );
    }
    out.report = s;
    Ok(())
}

fn run_virial(cfg: &RunConfig, w: &mut Writer, out: &mut RunOutcome) -> Result<()> {
    let p = profile_at(cfg)?;
    let model = cfg.scalar_model()?;
    let solver = &cfg.tolerances.scan.solver;
    let res = virial_check(&p)?;
    let parts = energy_parts(&p)?;
    let pairing = virial_pairing(&p)?;
    let dw = domega_profile(p.equation, &model, p.omega, &p.grid, cfg.tolerances.scan.domega_step, solver)?;
    let chain = dirac_chain_residuals(&p, &dw)?;
    let q = charge_q(&p);
    let tags = ["virial-identity", "kernel", "chain"];
    let mut t = CsvTable::new(&["quantity", "value"]);
    for (k, v) in [
        ("Q", q),
        ("kinetic", parts.kinetic),
        ("potential", parts.potential),
        ("virial_residual_1", res.identity),
        ("virial_residual_2", res.kinetic),
        ("pairing", pairing),
        ("pairing_minus_T_plus_omega_Q", pairing - (parts.kinetic + p.omega * q)),
        ("l_j_phi", chain.l_j_phi),
        ("l_dx_phi", chain.l_dx_phi),
        ("l_domega_phi", chain.l_domega_phi),
        ("l_virial", chain.l_virial),
    ] {
        t.rows.push(vec![k.to_string(), fmt_num(v)]);
    }
    w.csv("virial.csv", &t, &tags)?;
    w.json(
        "virial.json",
        &json!({
            "profile": profile_summary(&p),
            "energy": parts,
            "virial_residuals": res,
            "pairing": pairing,
            "chain": chain,
        }),
        &tags,
    )?;
    out.report = format!(
        "virial omega={} residual_1={:.3e} residual_2={:.3e} T={:.12e} V={:.12e} Q={:.12e}\n",
        p.omega, res.identity, res.kinetic, parts.kinetic, parts.potential, q
    );
    Ok(())
}

fn run_derrick(cfg: &RunConfig, w: &mut Writer, out: &mut RunOutcome) -> Result<()> {
    let (model, grid) = nlw_theta(cfg)?;
    let r = derrick_instability(&model, &grid, &cfg.tolerances.scan.solver)?;
    let tags = ["derrick-instability"];
    w.json("derrick.json", &r, &tags)?;
    let mut t = CsvTable::new(&["x", "theta", "chi"]);
    let x = grid.nodes();
    for (j, xj) in x.iter().enumerate() {
        t.rows.push(vec![fmt_num(*xj), fmt_num(r.theta.components[0][j]), fmt_num(r.chi[j])]);
    }
    w.csv("derrick.csv", &t, &tags)?;
    let pts: Vec<(f64, f64)> = x.iter().copied().zip(r.chi.iter().copied()).collect();
    w.svg("derrick_chi.svg", "unstable mode", ("x", "chi"), &pts)?;
    out.report = format!(
        "derrick lambda_min={:.12e} growth_rate={:.12e} sign_changes={}\n",
        r.lambda_min_l, r.growth_rate, r.ground_state_sign_changes
    );
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyRow {
    pub check: String,
    pub tag: &'static str,
    pub value: f64,
    pub threshold: String,
    /// `None` when the check does not apply to this configuration.
    pub pass: Option<bool>,
}

impl VerifyRow {
    fn at_most(check: &str, tag: &'static str, value: f64, tol: f64) -> Self {
        Self { check: check.into(), tag, value, threshold: format!("<= {tol:e}"), pass: Some(value <= tol) }
    }

    fn flag(check: &str, tag: &'static str, value: bool, pass: bool) -> Self {
        Self {
            check: check.into(),
            tag,
            value: f64::from(u8::from(value)),
            threshold: "consistent".into(),
            pass: Some(pass),
        }
    }

    fn skipped(check: &str, tag: &'static str) -> Self {
        Self { check: check.into(), tag, value: f64::NAN, threshold: "n/a".into(), pass: None }
    }
}

/// The verification suite for the configured equation and frequency.
pub fn verify_rows(cfg: &RunConfig) -> Result<Vec<VerifyRow>> {
    let tol = cfg.tolerances.verify;
    let mut rows = Vec::new();
    if cfg.equation == Equation::Nlw {
        let (model, grid) = nlw_theta(cfg)?;
        let r = derrick_instability(&model, &grid, &cfg.tolerances.scan.solver)?;
        rows.push(VerifyRow::flag(
            "negative direction of the Hessian",
            "derrick-instability",
            r.lambda_min_l < 0.0,
            r.lambda_min_l < 0.0,
        ));
        rows.push(VerifyRow::at_most(
            "ground state sign changes",
            "derrick-instability",
            r.ground_state_sign_changes as f64,
            0.0,
        ));
        rows.push(VerifyRow::at_most(
            "growing mode eigenpair residual",
            "derrick-instability",
            r.block_residuals[0].max(r.block_residuals[1]),
            tol.kernel,
        ));
        return Ok(rows);
    }

    let model = cfg.scalar_model()?;
    let p = profile_at(cfg)?;
    match cfg.equation {
        Equation::Dirac1d => {
            let pair = jl_pair(&p)?;
            let v = crate::operators::dirac_vectors(&p)?;
            let (lp, lm) = crate::operators::assemble_dirac_blocks(&p)?;
            let apply = |x: &[f64]| {
                let h = x.len() / 2;
                let mut y = crate::grid::matvec(&lp, &x[..h]);
                y.extend(crate::grid::matvec(&lm, &x[h..]));
                y.iter().fold(0.0f64, |m, z| m.max(z.abs()))
            };
            rows.push(VerifyRow::at_most("kernel: L J Phi = 0", "kernel", apply(&v.j_phi), tol.kernel));
            rows.push(VerifyRow::at_most("kernel: L dx Phi = 0", "kernel", apply(&v.dx_phi), tol.kernel));
            rows.push(VerifyRow::at_most(
                "alpha0 Phi eigenvector at -2 omega",
                "alpha0-eigenvector",
                alpha0_residual(&p)?,
                tol.alpha0,
            ));
            let target = 2.0 * p.omega.abs();
            let in_band =
                pair.essential_bands.iter().any(|b| b.contains(0.0, target, 0.0) && b.lo != target && b.hi != target);
            let flag = crate::operators::alpha0_embedded(p.mass(), p.omega);
            rows.push(VerifyRow::flag(
                "+-2 omega i embedded in essential spectrum",
                "alpha0-embedding",
                flag,
                flag == in_band,
            ));
            let vr = virial_check(&p)?;
            rows.push(VerifyRow::at_most("virial identity", "virial-identity", vr.identity, tol.virial));
            rows.push(VerifyRow::at_most("virial kinetic relation", "virial-identity", vr.kinetic, tol.virial));
        }
        _ => {
            let pair = nls_pair(&p)?;
            let (k0, k1) = nls_kernel_vectors(&p)?;
            let norm = |x: &[f64]| pair.apply(x).iter().fold(0.0f64, |m, z| m.max(z.abs()));
            rows.push(VerifyRow::at_most("kernel: JL (0, phi) = 0", "kernel", norm(&k0), tol.kernel));
            rows.push(VerifyRow::at_most("kernel: JL (dx phi, 0) = 0", "kernel", norm(&k1), tol.kernel));
        }
    }
    match charge_closed_form(p.equation, &model, p.omega) {
        Some(q) => rows.push(VerifyRow::at_most(
            "charge vs closed form: |dQ|",
            "charge-closed-form",
            (charge_q(&p) - q).abs(),
            tol.charge,
        )),
        None => rows.push(VerifyRow::skipped("charge vs closed form: |dQ|", "charge-closed-form")),
    }
    let row = scan_row(p.equation, &model, p.omega, &cfg.grid, &cfg.tolerances.scan);
    let vk = match (&row.error, row.vk_verdict) {
        (Some(_), _) | (None, None) => {
            VerifyRow::flag("VK: real pair <=> dQ/domega > 0", "vk-biconditional", false, false)
        }
        (None, Some(VkVerdict::Critical)) => VerifyRow::skipped("VK: real pair <=> dQ/domega > 0", "vk-biconditional"),
        (None, Some(v)) => {
            let has = row.real_pair_count > 0;
            VerifyRow::flag(
                "VK: real pair <=> dQ/domega > 0",
                "vk-biconditional",
                has,
                has == (v == VkVerdict::VkUnstableSign),
            )
        }
    };
    rows.push(vk);
    Ok(rows)
}

fn run_verify(cfg: &RunConfig, w: &mut Writer, out: &mut RunOutcome) -> Result<()> {
    let rows = verify_rows(cfg)?;
    let mut passed: Vec<&str> = rows.iter().filter(|r| r.pass == Some(true)).map(|r| r.tag).collect();
    passed.dedup();
    let mut t = CsvTable::new(&["check", "tag", "value", "threshold", "result"]);
    let mut s = String::new();
    for r in &rows {
        let result = match r.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "SKIP",
        };
        t.rows.push(vec![r.check.clone(), r.tag.into(), fmt_num(r.value), r.threshold.clone(), result.into()]);
        let _ = writeln!(s, "{:<48} {:>12.3e} {:>12}  {result}", r.check, r.value, r.threshold);
    }
    out.failures = rows.iter().filter(|r| r.pass == Some(false)).count();
    w.csv("verify.csv", &t, &passed)?;
    w.json("verify.json", &rows, &passed)?;
    out.report = s;
    Ok(())
}

/// Reads, validates and runs a config file.
pub fn run_file(command: Command, config: &Path, output_dir: Option<&Path>) -> Result<RunOutcome> {
    let cfg = RunConfig::load(config)?.effective(command)?;
    let dir = output_dir.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(&cfg.output.dir));
    run(&cfg, &dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_serialize_with_nan_as_null() {
        let r = VerifyRow::skipped("x", "kernel");
        let v = serde_json::to_value(&r).unwrap();
        assert!(v["value"].is_null());
        assert_eq!(v["pass"], serde_json::Value::Null);
    }
}
