//! Subcommand implementations. Every command resolves the configuration,
//! computes, then writes its primary outputs atomically plus a
//! `run_metadata.txt` reproducibility block.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use rydmol::analysis::binding::{binding_energy, zeeman_correction, BindingEnergyDatum};
use rydmol::analysis::lifetime::fit_lifetime;
use rydmol::analysis::linefit::{fit_line, LineFit};
use rydmol::analysis::scattering_fit::fit_scattering_length;
use rydmol::analysis::stark::fit_stark;
use rydmol::pipeline::{model_binding_energies, ModelContext};
use rydmol::potential::Well;
use rydmol::solver::VibrationalLevel;
use rydmol::spectra::parse_spectrum_csv;
use rydmol::textfmt::{sci9, sci9_opt};

use crate::config::RunConfig;
use crate::inputs;
use crate::output::{metadata_block, Format, OutDir};

fn context(cfg: &RunConfig) -> Result<ModelContext> {
    ModelContext::new(cfg.model_params()?).map_err(|e| anyhow!("{e}"))
}

fn write_metadata(out: &mut OutDir, cfg: &RunConfig) -> Result<()> {
    out.write("run_metadata.txt", &metadata_block(cfg))?;
    Ok(())
}

pub fn cmd_wavefunction(cfg: &RunConfig, out_dir: &Path, _format: Format) -> Result<()> {
    let ctx = context(cfg)?;
    let mut out = OutDir::create(out_dir)?;
    for &n in &cfg.n_list {
        let wf = ctx.wavefunction(n).map_err(|e| anyhow!("{e}"))?;
        let mut buf = Vec::new();
        wf.write_table(&mut buf, true).map_err(|e| anyhow!("{e}"))?;
        out.write(&format!("wavefunction_n{n}.csv"), &String::from_utf8(buf)?)?;
    }
    write_metadata(&mut out, cfg)
}

pub fn cmd_potential(cfg: &RunConfig, out_dir: &Path, _format: Format) -> Result<()> {
    let ctx = context(cfg)?;
    let mut out = OutDir::create(out_dir)?;
    for &n in &cfg.n_list {
        let curve = ctx
            .potential(n, cfg.a_atom_bohr)
            .map_err(|e| anyhow!("{e}"))?;
        let mut buf = Vec::new();
        curve
            .write_table(&mut buf, &cfg.constants)
            .map_err(|e| anyhow!("{e}"))?;
        out.write(&format!("potential_n{n}.csv"), &String::from_utf8(buf)?)?;
    }
    write_metadata(&mut out, cfg)
}

#[derive(Serialize)]
struct LevelRow {
    v: usize,
    e_mhz: f64,
    r_expect_bohr: f64,
    b_rot_khz: f64,
    nodes: usize,
    well_span_bohr: (f64, f64),
}

impl LevelRow {
    fn from_level(lv: &VibrationalLevel) -> Self {
        Self {
            v: lv.v,
            e_mhz: lv.energy_mhz,
            r_expect_bohr: lv.r_expect,
            b_rot_khz: lv.b_rot_mhz * 1e3,
            nodes: lv.n_nodes,
            well_span_bohr: lv.well_span,
        }
    }

    fn text_row(&self, n: u32) -> String {
        format!(
            "{n}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.v,
            sci9(self.e_mhz),
            sci9(self.r_expect_bohr),
            sci9(self.b_rot_khz),
            self.nodes,
            sci9(self.well_span_bohr.0),
            sci9(self.well_span_bohr.1),
        )
    }
}

#[derive(Serialize)]
struct WellRow {
    r_lo_bohr: f64,
    r_hi_bohr: f64,
    r_at_min_bohr: f64,
    v_min_mhz: f64,
}

#[derive(Serialize)]
struct BoundstatesEntry {
    n: u32,
    levels_in_window: usize,
    outer_well: Option<WellRow>,
    outer_levels: Vec<LevelRow>,
    diagnostics: Vec<String>,
}

#[derive(Serialize)]
struct BoundstatesReport {
    constants_vintage: String,
    entries: Vec<BoundstatesEntry>,
}

pub fn cmd_boundstates(cfg: &RunConfig, out_dir: &Path, format: Format) -> Result<()> {
    let ctx = context(cfg)?;
    let mut entries = Vec::new();
    for &n in &cfg.n_list {
        let (_curve, levels, sel) = ctx
            .solve_n(n, cfg.a_atom_bohr)
            .map_err(|e| anyhow!("{e}"))?;
        let outer_levels: Vec<LevelRow> = [sel.v0.as_ref(), sel.v1.as_ref()]
            .into_iter()
            .flatten()
            .map(LevelRow::from_level)
            .collect();
        entries.push(BoundstatesEntry {
            n,
            levels_in_window: levels.len(),
            outer_well: sel.well.map(|w: Well| WellRow {
                r_lo_bohr: w.r_lo,
                r_hi_bohr: w.r_hi,
                r_at_min_bohr: w.r_at_min,
                v_min_mhz: cfg.constants.energy_au_to_mhz(w.v_min),
            }),
            outer_levels,
            diagnostics: sel.diagnostics,
        });
    }
    let report = BoundstatesReport {
        constants_vintage: cfg.constants.vintage.clone(),
        entries,
    };
    let mut out = OutDir::create(out_dir)?;
    match format {
        Format::Json => {
            out.write("boundstates.json", &to_json(&report)?)?;
        }
        Format::Table => {
            let mut s = metadata_block(cfg);
            s.push_str("# outer-well vibrational levels\n");
            s.push_str("# n\tv\te_mhz\tr_expect_bohr\tb_rot_khz\tnodes\twell_lo_bohr\twell_hi_bohr\n");
            for e in &report.entries {
                for row in &e.outer_levels {
                    s.push_str(&row.text_row(e.n));
                    s.push('\n');
                }
                for d in &e.diagnostics {
                    s.push_str(&format!("# n={} diagnostic: {d}\n", e.n));
                }
            }
            out.write("boundstates.txt", &s)?;
        }
    }
    write_metadata(&mut out, cfg)
}

#[derive(Serialize)]
struct ModelCurveRow {
    n: u32,
    e_v0_mhz: Option<f64>,
    e_v1_mhz: Option<f64>,
}

pub fn cmd_model_curve(cfg: &RunConfig, out_dir: &Path, format: Format) -> Result<()> {
    let ctx = context(cfg)?;
    let map = model_binding_energies(&ctx, &cfg.n_list).map_err(|e| anyhow!("{e}"))?;
    let rows: Vec<ModelCurveRow> = map
        .values()
        .map(|o| ModelCurveRow {
            n: o.n,
            e_v0_mhz: o.e0_mhz,
            e_v1_mhz: o.e1_mhz,
        })
        .collect();
    let mut out = OutDir::create(out_dir)?;
    match format {
        Format::Json => {
            out.write("model_curve.json", &to_json(&rows)?)?;
        }
        Format::Table => {
            let mut s = String::from("n,e_v0_mhz,e_v1_mhz\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{}\n",
                    r.n,
                    sci9_opt(r.e_v0_mhz),
                    sci9_opt(r.e_v1_mhz)
                ));
            }
            out.write("model_curve.csv", &s)?;
        }
    }
    write_metadata(&mut out, cfg)
}

#[derive(Serialize)]
struct ScatteringFitReport {
    constants_vintage: String,
    input_files: Vec<String>,
    n_data: usize,
    n_excluded_unassigned: usize,
    a_best_bohr: f64,
    a_interval_bohr: (f64, f64),
    chi2: f64,
    unimodal: bool,
    scan_points: usize,
    residuals: Vec<ResidualReportRow>,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct ResidualReportRow {
    n: u32,
    v: String,
    e_obs_mhz: f64,
    sigma_mhz: f64,
    e_model_mhz: f64,
    residual: f64,
}

pub fn cmd_fit_scattering_length(
    cfg: &RunConfig,
    out_dir: &Path,
    format: Format,
    input_paths: &[std::path::PathBuf],
) -> Result<()> {
    if input_paths.is_empty() {
        bail!("fit-scattering-length needs at least one input file");
    }
    let mut seen = std::collections::BTreeSet::new();
    for p in input_paths {
        if !seen.insert(p) {
            bail!("input file {} given twice", p.display());
        }
    }
    let ctx = context(cfg)?;
    let mut data: Vec<BindingEnergyDatum> = Vec::new();
    let mut errors: Vec<String> = Vec::new();
    for path in input_paths {
        let result = (|| -> Result<Vec<BindingEnergyDatum>> {
            if inputs::is_manifest(path)? {
                let rows = inputs::parse_manifest_csv(path)?;
                reduce_manifest(cfg, &rows)
            } else {
                inputs::parse_binding_csv(path)
            }
        })();
        match result {
            Ok(mut rows) => data.append(&mut rows),
            Err(e) => errors.push(format!("{e:#}")),
        }
    }
    if !errors.is_empty() {
        bail!("input errors:\n  {}", errors.join("\n  "));
    }
    let fit = fit_scattering_length(
        &ctx,
        &data,
        cfg.a_scan_range_bohr,
        cfg.a_scan_step_bohr,
        cfg.a_golden_tol_bohr,
    )
    .map_err(|e| anyhow!("{e}"))?;

    let report = ScatteringFitReport {
        constants_vintage: cfg.constants.vintage.clone(),
        input_files: input_paths
            .iter()
            .map(|p| p.display().to_string())
            .collect(),
        n_data: fit.n_data,
        n_excluded_unassigned: fit.n_excluded_unassigned,
        a_best_bohr: fit.a_best,
        a_interval_bohr: fit.a_interval,
        chi2: fit.chi2,
        unimodal: fit.unimodal,
        scan_points: fit.scan_points,
        residuals: fit
            .residuals
            .iter()
            .map(|r| ResidualReportRow {
                n: r.n,
                v: r.v.to_string(),
                e_obs_mhz: r.e_obs_mhz,
                sigma_mhz: r.sigma_mhz,
                e_model_mhz: r.e_model_mhz,
                residual: r.residual,
            })
            .collect(),
        warnings: fit.warnings.clone(),
    };

    let mut out = OutDir::create(out_dir)?;
    match format {
        Format::Json => {
            out.write("fit_scattering_length.json", &to_json(&report)?)?;
        }
        Format::Table => {
            let mut s = metadata_block(cfg);
            s.push_str(&format!("a_best_bohr = {}\n", sci9(report.a_best_bohr)));
            s.push_str(&format!(
                "a_interval_bohr = {},{}\n",
                sci9(report.a_interval_bohr.0),
                sci9(report.a_interval_bohr.1)
            ));
            s.push_str(&format!("chi2 = {}\n", sci9(report.chi2)));
            s.push_str(&format!("n_data = {}\n", report.n_data));
            s.push_str(&format!(
                "n_excluded_unassigned = {}\n",
                report.n_excluded_unassigned
            ));
            s.push_str(&format!("unimodal = {}\n", report.unimodal));
            s.push_str(&format!("scan_points = {}\n", report.scan_points));
            s.push_str("# residuals: n\tv\te_obs_mhz\tsigma_mhz\te_model_mhz\tresidual\n");
            for r in &report.residuals {
                s.push_str(&format!(
                    "residual\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    r.n,
                    r.v,
                    sci9(r.e_obs_mhz),
                    sci9(r.sigma_mhz),
                    sci9(r.e_model_mhz),
                    sci9(r.residual)
                ));
            }
            for w in &report.warnings {
                s.push_str(&format!("# warning: {w}\n"));
            }
            out.write("fit_scattering_length.txt", &s)?;
        }
    }
    write_metadata(&mut out, cfg)
}

/// Reduces manifest spectra to binding-energy data: atomic line from the
/// config window, molecular line from the row window, Zeeman correction from
/// the spectrum metadata (falling back to the configured offset field).
fn reduce_manifest(cfg: &RunConfig, rows: &[inputs::ManifestRow]) -> Result<Vec<BindingEnergyDatum>> {
    let mut data = Vec::new();
    let mut errors = Vec::new();
    for row in rows {
        let step = (|| -> Result<Option<BindingEnergyDatum>> {
            let spectrum =
                parse_spectrum_csv(&row.spectrum_path).map_err(|e| anyhow!("{e}"))?;
            let atomic = fit_line(&spectrum, cfg.atomic_window_mhz, cfg.line_shape)
                .map_err(|e| anyhow!("atomic line: {e}"))?;
            let molecular = fit_line(&spectrum, row.window_mhz, cfg.line_shape)
                .map_err(|e| anyhow!("molecular line: {e}"))?;
            let b0 = spectrum.meta.b0_gauss.unwrap_or(cfg.b0_gauss);
            let delta_b = zeeman_correction(b0, cfg.g_eff, &cfg.constants)
                .map_err(|e| anyhow!("{e}"))?;
            let res = binding_energy(&atomic, &molecular, delta_b);
            if !res.is_molecular {
                return Ok(None);
            }
            Ok(Some(BindingEnergyDatum {
                n: row.n,
                v: row.v,
                e_b_mhz: res.e_b_mhz,
                sigma_mhz: res.sigma_mhz,
            }))
        })();
        match step {
            Ok(Some(d)) => data.push(d),
            Ok(None) => errors.push(format!(
                "{}: line separation came out non-molecular (e_b >= 0)",
                row.spectrum_path.display()
            )),
            Err(e) => errors.push(format!("{}: {e:#}", row.spectrum_path.display())),
        }
    }
    if !errors.is_empty() {
        bail!("{}", errors.join("\n  "));
    }
    Ok(data)
}

#[derive(Serialize)]
struct StarkReport {
    constants_vintage: String,
    input_file: String,
    alpha_au: f64,
    alpha_sigma_au: f64,
    zero_field_center_mhz: f64,
    zero_field_center_sigma_mhz: f64,
    chi2: f64,
    n_data: usize,
}

pub fn cmd_fit_stark(cfg: &RunConfig, out_dir: &Path, format: Format, input: &Path) -> Result<()> {
    let series = inputs::parse_stark_csv(input)?;
    let fit = fit_stark(&series, &cfg.constants).map_err(|e| anyhow!("{e}"))?;
    let report = StarkReport {
        constants_vintage: cfg.constants.vintage.clone(),
        input_file: input.display().to_string(),
        alpha_au: fit.alpha_au,
        alpha_sigma_au: fit.alpha_sigma_au,
        zero_field_center_mhz: fit.zero_field_center_mhz,
        zero_field_center_sigma_mhz: fit.zero_field_center_sigma_mhz,
        chi2: fit.chi2,
        n_data: fit.n_data,
    };
    let mut out = OutDir::create(out_dir)?;
    match format {
        Format::Json => {
            out.write("fit_stark.json", &to_json(&report)?)?;
        }
        Format::Table => {
            let mut s = metadata_block(cfg);
            s.push_str(&format!("alpha_au = {}\n", sci9(report.alpha_au)));
            s.push_str(&format!("alpha_sigma_au = {}\n", sci9(report.alpha_sigma_au)));
            s.push_str(&format!(
                "zero_field_center_mhz = {}\n",
                sci9(report.zero_field_center_mhz)
            ));
            s.push_str(&format!(
                "zero_field_center_sigma_mhz = {}\n",
                sci9(report.zero_field_center_sigma_mhz)
            ));
            s.push_str(&format!("chi2 = {}\n", sci9(report.chi2)));
            s.push_str(&format!("n_data = {}\n", report.n_data));
            out.write("fit_stark.txt", &s)?;
        }
    }
    write_metadata(&mut out, cfg)
}

#[derive(Serialize)]
struct LifetimeReport {
    constants_vintage: String,
    input_file: String,
    tau_us: f64,
    tau_sigma_us: f64,
    amplitude: f64,
    amplitude_sigma: f64,
    baseline: f64,
    baseline_sigma: f64,
    chi2: f64,
}

pub fn cmd_fit_lifetime(
    cfg: &RunConfig,
    out_dir: &Path,
    format: Format,
    input: &Path,
) -> Result<()> {
    let points = inputs::parse_decay_csv(input)?;
    let fit = fit_lifetime(&points).map_err(|e| anyhow!("{e}"))?;
    let report = LifetimeReport {
        constants_vintage: cfg.constants.vintage.clone(),
        input_file: input.display().to_string(),
        tau_us: fit.tau_us,
        tau_sigma_us: fit.tau_sigma_us,
        amplitude: fit.amplitude,
        amplitude_sigma: fit.amplitude_sigma,
        baseline: fit.baseline,
        baseline_sigma: fit.baseline_sigma,
        chi2: fit.chi2,
    };
    let mut out = OutDir::create(out_dir)?;
    match format {
        Format::Json => {
            out.write("fit_lifetime.json", &to_json(&report)?)?;
        }
        Format::Table => {
            let mut s = metadata_block(cfg);
            s.push_str(&format!("tau_us = {}\n", sci9(report.tau_us)));
            s.push_str(&format!("tau_sigma_us = {}\n", sci9(report.tau_sigma_us)));
            s.push_str(&format!("amplitude = {}\n", sci9(report.amplitude)));
            s.push_str(&format!(
                "amplitude_sigma = {}\n",
                sci9(report.amplitude_sigma)
            ));
            s.push_str(&format!("baseline = {}\n", sci9(report.baseline)));
            s.push_str(&format!(
                "baseline_sigma = {}\n",
                sci9(report.baseline_sigma)
            ));
            s.push_str(&format!("chi2 = {}\n", sci9(report.chi2)));
            out.write("fit_lifetime.txt", &s)?;
        }
    }
    write_metadata(&mut out, cfg)
}

#[derive(Serialize)]
struct LineFitReport {
    center_mhz: f64,
    center_sigma_mhz: f64,
    fwhm_mhz: f64,
    fwhm_sigma_mhz: f64,
    amplitude: f64,
    amplitude_sigma: f64,
    baseline: f64,
    baseline_sigma: f64,
}

impl LineFitReport {
    fn from_fit(f: &LineFit) -> Self {
        Self {
            center_mhz: f.center,
            center_sigma_mhz: f.center_sigma,
            fwhm_mhz: f.fwhm,
            fwhm_sigma_mhz: f.fwhm_sigma,
            amplitude: f.amplitude,
            amplitude_sigma: f.amplitude_sigma,
            baseline: f.baseline,
            baseline_sigma: f.baseline_sigma,
        }
    }

    fn text(&self, prefix: &str) -> String {
        format!(
            "{prefix}_center_mhz = {}\n{prefix}_center_sigma_mhz = {}\n{prefix}_fwhm_mhz = {}\n{prefix}_amplitude = {}\n{prefix}_baseline = {}\n",
            sci9(self.center_mhz),
            sci9(self.center_sigma_mhz),
            sci9(self.fwhm_mhz),
            sci9(self.amplitude),
            sci9(self.baseline),
        )
    }
}

#[derive(Serialize)]
struct SpectrumAnalysisReport {
    constants_vintage: String,
    input_file: String,
    n: Option<u32>,
    b0_gauss: f64,
    g_eff: f64,
    delta_b_mhz: f64,
    atomic: LineFitReport,
    molecular: LineFitReport,
    e_b_mhz: f64,
    e_b_sigma_mhz: f64,
    is_molecular: bool,
}

pub fn cmd_analyze_spectrum(
    cfg: &RunConfig,
    out_dir: &Path,
    format: Format,
    input: &Path,
) -> Result<()> {
    let spectrum = parse_spectrum_csv(input).map_err(|e| anyhow!("{e}"))?;
    let atomic =
        fit_line(&spectrum, cfg.atomic_window_mhz, cfg.line_shape).map_err(|e| anyhow!("atomic line: {e}"))?;
    let molecular = fit_line(&spectrum, cfg.molecular_window_mhz, cfg.line_shape)
        .map_err(|e| anyhow!("molecular line: {e}"))?;
    let b0 = spectrum.meta.b0_gauss.unwrap_or(cfg.b0_gauss);
    let delta_b = zeeman_correction(b0, cfg.g_eff, &cfg.constants).map_err(|e| anyhow!("{e}"))?;
    let res = binding_energy(&atomic, &molecular, delta_b);

    let report = SpectrumAnalysisReport {
        constants_vintage: cfg.constants.vintage.clone(),
        input_file: input.display().to_string(),
        n: spectrum.meta.n,
        b0_gauss: b0,
        g_eff: cfg.g_eff,
        delta_b_mhz: delta_b,
        atomic: LineFitReport::from_fit(&atomic),
        molecular: LineFitReport::from_fit(&molecular),
        e_b_mhz: res.e_b_mhz,
        e_b_sigma_mhz: res.sigma_mhz,
        is_molecular: res.is_molecular,
    };
    let mut out = OutDir::create(out_dir)?;
    match format {
        Format::Json => {
            out.write("spectrum_analysis.json", &to_json(&report)?)?;
        }
        Format::Table => {
            let mut s = metadata_block(cfg);
            s.push_str(&report.atomic.text("atomic"));
            s.push_str(&report.molecular.text("molecular"));
            s.push_str(&format!("delta_b_mhz = {}\n", sci9(report.delta_b_mhz)));
            s.push_str(&format!("e_b_mhz = {}\n", sci9(report.e_b_mhz)));
            s.push_str(&format!("e_b_sigma_mhz = {}\n", sci9(report.e_b_sigma_mhz)));
            s.push_str(&format!("is_molecular = {}\n", report.is_molecular));
            out.write("spectrum_analysis.txt", &s)?;
        }
    }
    write_metadata(&mut out, cfg)
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).context("json serialization")?;
    s.push('\n');
    Ok(s)
}
