//! Flat `key = value` run configuration with `#` comments. Every default is
//! echoed into the run metadata so outputs are self-describing.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rydmol::analysis::linefit::LineShape;
use rydmol::pipeline::ModelParams;
use rydmol::potential::PotentialOptions;
use rydmol::scattering::{MomentumConvention, ScatteringModel};
use rydmol::solver::SolverOptions;
use rydmol::wavefunction::WavefunctionConfig;
use rydmol::{PhysicalConstants, QuantumDefectModel};

#[derive(Debug, Clone)]
pub struct RunConfig {
    // model
    pub a_atom_bohr: f64,
    pub alpha_au: f64,
    pub defect_delta0: f64,
    pub defect_delta2: f64,
    pub defect_delta4: f64,
    pub defect_source: String,
    pub n_list: Vec<u32>,
    pub momentum_convention: MomentumConvention,
    pub validity_threshold: f64,
    // mesh
    pub x_step: f64,
    pub r_min_wavefunction_bohr: f64,
    pub r_min_potential_bohr: f64,
    pub r_out_bohr: Option<f64>,
    // solver
    pub e_window_mhz: Option<(f64, f64)>,
    pub max_levels: usize,
    pub eig_tol_mhz: f64,
    pub well_depth_fraction: f64,
    pub localization_threshold: f64,
    pub outer_region_lobes: usize,
    pub solver_grid_check: bool,
    pub solver_grid_tol_mhz: f64,
    // experiment
    pub b0_gauss: f64,
    pub g_eff: f64,
    pub atomic_window_mhz: (f64, f64),
    pub molecular_window_mhz: (f64, f64),
    pub line_shape: LineShape,
    // scattering-length fit
    pub a_scan_range_bohr: (f64, f64),
    pub a_scan_step_bohr: f64,
    pub a_golden_tol_bohr: f64,
    // constants
    pub constants: PhysicalConstants,
}

impl Default for RunConfig {
    fn default() -> Self {
        let defect = QuantumDefectModel::default();
        Self {
            a_atom_bohr: -18.5,
            alpha_au: 319.0,
            defect_delta0: defect.delta0,
            defect_delta2: defect.delta2,
            defect_delta4: defect.delta4,
            defect_source: defect.source,
            n_list: vec![34, 35, 36, 37, 38, 39, 40],
            momentum_convention: MomentumConvention::Effective,
            validity_threshold: 10.0,
            x_step: 0.01,
            r_min_wavefunction_bohr: 2.0,
            r_min_potential_bohr: 100.0,
            r_out_bohr: None,
            e_window_mhz: None,
            max_levels: 64,
            eig_tol_mhz: 1e-4,
            well_depth_fraction: 0.005,
            localization_threshold: 0.9,
            outer_region_lobes: 3,
            solver_grid_check: false,
            solver_grid_tol_mhz: 0.05,
            b0_gauss: 0.8,
            // calibrated so the 0.8 G offset field shifts by 3.0 MHz
            g_eff: 2.679,
            atomic_window_mhz: (-1.5, 1.5),
            molecular_window_mhz: (-29.0, -24.0),
            line_shape: LineShape::Gaussian,
            a_scan_range_bohr: (-30.0, -5.0),
            a_scan_step_bohr: 0.1,
            a_golden_tol_bohr: 1e-3,
            constants: PhysicalConstants::default(),
        }
    }
}

fn parse_pair(field: &str, v: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        bail!("field `{field}`: expected `lo,hi`, got `{v}`");
    }
    let lo: f64 = parts[0]
        .parse()
        .with_context(|| format!("field `{field}`: bad number `{}`", parts[0]))?;
    let hi: f64 = parts[1]
        .parse()
        .with_context(|| format!("field `{field}`: bad number `{}`", parts[1]))?;
    Ok((lo, hi))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let mut cfg = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("{}:{}: expected `key = value`, got `{raw}`", path.display(), idx + 1);
            };
            cfg.set(key.trim(), value.trim())
                .with_context(|| format!("{}:{}", path.display(), idx + 1))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad =
            |k: &str, v: &str| anyhow!("field `{k}`: cannot parse `{v}`");
        match key {
            "a_atom_bohr" => self.a_atom_bohr = value.parse().map_err(|_| bad(key, value))?,
            "alpha_au" => self.alpha_au = value.parse().map_err(|_| bad(key, value))?,
            "defect_delta0" => self.defect_delta0 = value.parse().map_err(|_| bad(key, value))?,
            "defect_delta2" => self.defect_delta2 = value.parse().map_err(|_| bad(key, value))?,
            "defect_delta4" => self.defect_delta4 = value.parse().map_err(|_| bad(key, value))?,
            "defect_source" => self.defect_source = value.to_string(),
            "n_list" => {
                let mut list = Vec::new();
                if !value.trim().is_empty() {
                    for tok in value.split(',') {
                        list.push(tok.trim().parse().map_err(|_| bad(key, tok))?);
                    }
                }
                self.n_list = list;
            }
            "momentum_convention" => {
                self.momentum_convention = match value {
                    "effective" => MomentumConvention::Effective,
                    "bare" => MomentumConvention::Bare,
                    _ => bail!("field `momentum_convention`: must be `effective` or `bare`"),
                }
            }
            "validity_threshold" => {
                self.validity_threshold = value.parse().map_err(|_| bad(key, value))?
            }
            "x_step" => self.x_step = value.parse().map_err(|_| bad(key, value))?,
            "r_min_wavefunction_bohr" => {
                self.r_min_wavefunction_bohr = value.parse().map_err(|_| bad(key, value))?
            }
            "r_min_potential_bohr" => {
                self.r_min_potential_bohr = value.parse().map_err(|_| bad(key, value))?
            }
            "r_out_bohr" => {
                self.r_out_bohr = if value == "auto" {
                    None
                } else {
                    Some(value.parse().map_err(|_| bad(key, value))?)
                }
            }
            "e_window_mhz" => {
                self.e_window_mhz = if value == "auto" {
                    None
                } else {
                    Some(parse_pair(key, value)?)
                }
            }
            "max_levels" => self.max_levels = value.parse().map_err(|_| bad(key, value))?,
            "eig_tol_mhz" => self.eig_tol_mhz = value.parse().map_err(|_| bad(key, value))?,
            "well_depth_fraction" => {
                self.well_depth_fraction = value.parse().map_err(|_| bad(key, value))?
            }
            "localization_threshold" => {
                self.localization_threshold = value.parse().map_err(|_| bad(key, value))?
            }
            "outer_region_lobes" => {
                self.outer_region_lobes = value.parse().map_err(|_| bad(key, value))?
            }
            "solver_grid_check" => {
                self.solver_grid_check = value.parse().map_err(|_| bad(key, value))?
            }
            "solver_grid_tol_mhz" => {
                self.solver_grid_tol_mhz = value.parse().map_err(|_| bad(key, value))?
            }
            "b0_gauss" => self.b0_gauss = value.parse().map_err(|_| bad(key, value))?,
            "g_eff" => self.g_eff = value.parse().map_err(|_| bad(key, value))?,
            "atomic_window_mhz" => self.atomic_window_mhz = parse_pair(key, value)?,
            "molecular_window_mhz" => self.molecular_window_mhz = parse_pair(key, value)?,
            "line_shape" => {
                self.line_shape = match value {
                    "gaussian" => LineShape::Gaussian,
                    "lorentzian" => LineShape::Lorentzian,
                    _ => bail!("field `line_shape`: must be `gaussian` or `lorentzian`"),
                }
            }
            "a_scan_range_bohr" => self.a_scan_range_bohr = parse_pair(key, value)?,
            "a_scan_step_bohr" => {
                self.a_scan_step_bohr = value.parse().map_err(|_| bad(key, value))?
            }
            "a_golden_tol_bohr" => {
                self.a_golden_tol_bohr = value.parse().map_err(|_| bad(key, value))?
            }
            "hartree_to_mhz" => {
                self.constants.hartree_to_mhz = value.parse().map_err(|_| bad(key, value))?
            }
            "bohr_magneton_mhz_per_gauss" => {
                self.constants.bohr_magneton_mhz_per_gauss =
                    value.parse().map_err(|_| bad(key, value))?
            }
            "amu_to_me" => self.constants.amu_to_me = value.parse().map_err(|_| bad(key, value))?,
            "mass_rb87_amu" => {
                self.constants.mass_rb87_amu = value.parse().map_err(|_| bad(key, value))?
            }
            "field_au_to_v_per_cm" => {
                self.constants.field_au_to_v_per_cm = value.parse().map_err(|_| bad(key, value))?
            }
            "constants_vintage" => self.constants.vintage = value.to_string(),
            other => bail!("unknown config field `{other}`"),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for &n in &self.n_list {
            if !(20..=80).contains(&n) {
                bail!("field `n_list`: n = {n} outside [20, 80]");
            }
        }
        for (name, v) in [
            ("x_step", self.x_step),
            ("r_min_wavefunction_bohr", self.r_min_wavefunction_bohr),
            ("r_min_potential_bohr", self.r_min_potential_bohr),
            ("eig_tol_mhz", self.eig_tol_mhz),
            ("a_scan_step_bohr", self.a_scan_step_bohr),
            ("a_golden_tol_bohr", self.a_golden_tol_bohr),
        ] {
            if !(v.is_finite() && v > 0.0) {
                bail!("field `{name}`: must be positive, got {v}");
            }
        }
        if let Some(r) = self.r_out_bohr {
            if !(r.is_finite() && r > self.r_min_potential_bohr) {
                bail!("field `r_out_bohr`: must exceed r_min_potential_bohr, got {r}");
            }
        }
        for (name, (lo, hi)) in [
            ("atomic_window_mhz", self.atomic_window_mhz),
            ("molecular_window_mhz", self.molecular_window_mhz),
            ("a_scan_range_bohr", self.a_scan_range_bohr),
        ] {
            if lo >= hi {
                bail!("field `{name}`: lo must be < hi, got {lo},{hi}");
            }
        }
        if let Some((lo, hi)) = self.e_window_mhz {
            if !(lo < hi && hi < 0.0) {
                bail!("field `e_window_mhz`: need lo < hi < 0, got {lo},{hi}");
            }
        }
        if self.b0_gauss < 0.0 {
            bail!("field `b0_gauss`: must be non-negative");
        }
        self.constants
            .validate()
            .map_err(|e| anyhow!("{e}"))?;
        self.defect_model()
            .validate()
            .map_err(|e| anyhow!("{e}"))?;
        self.scattering_model()
            .map_err(|e| anyhow!("{e}"))?;
        Ok(())
    }

    pub fn defect_model(&self) -> QuantumDefectModel {
        QuantumDefectModel {
            delta0: self.defect_delta0,
            delta2: self.defect_delta2,
            delta4: self.defect_delta4,
            source: self.defect_source.clone(),
        }
    }

    pub fn scattering_model(&self) -> rydmol::Result<ScatteringModel> {
        ScatteringModel::new(self.a_atom_bohr, self.alpha_au)
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        let scattering = self.scattering_model().map_err(|e| anyhow!("{e}"))?;
        Ok(ModelParams {
            defect: self.defect_model(),
            scattering,
            constants: self.constants.clone(),
            wf_config: WavefunctionConfig {
                x_step: self.x_step,
                r_min: self.r_min_wavefunction_bohr,
                r_out: self.r_out_bohr,
                divergence_factor: 10.0,
            },
            potential_opts: PotentialOptions {
                r_min: self.r_min_potential_bohr,
                momentum: self.momentum_convention,
            },
            solver_opts: SolverOptions {
                e_window_au: self
                    .e_window_mhz
                    .map(|(lo, hi)| {
                        (
                            self.constants.energy_mhz_to_au(lo),
                            self.constants.energy_mhz_to_au(hi),
                        )
                    }),
                max_levels: self.max_levels,
                eig_tol_au: self.constants.energy_mhz_to_au(self.eig_tol_mhz),
                well_depth_fraction: self.well_depth_fraction,
                localization: self.localization_threshold,
                outer_region_lobes: self.outer_region_lobes,
                check_grid: self.solver_grid_check,
                grid_tol_mhz: self.solver_grid_tol_mhz,
            },
            validity_threshold: self.validity_threshold,
        })
    }

    /// Deterministic `key = value` echo of the fully resolved configuration.
    pub fn echo(&self) -> String {
        let mut map = BTreeMap::new();
        let s9 = rydmol::textfmt::sci9;
        map.insert("a_atom_bohr", s9(self.a_atom_bohr));
        map.insert("alpha_au", s9(self.alpha_au));
        map.insert("defect_delta0", s9(self.defect_delta0));
        map.insert("defect_delta2", s9(self.defect_delta2));
        map.insert("defect_delta4", s9(self.defect_delta4));
        map.insert("defect_source", self.defect_source.clone());
        map.insert(
            "n_list",
            self.n_list
                .iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        map.insert(
            "momentum_convention",
            match self.momentum_convention {
                MomentumConvention::Effective => "effective".to_string(),
                MomentumConvention::Bare => "bare".to_string(),
            },
        );
        map.insert("validity_threshold", s9(self.validity_threshold));
        map.insert("x_step", s9(self.x_step));
        map.insert(
            "r_min_wavefunction_bohr",
            s9(self.r_min_wavefunction_bohr),
        );
        map.insert("r_min_potential_bohr", s9(self.r_min_potential_bohr));
        map.insert(
            "r_out_bohr",
            self.r_out_bohr.map_or("auto".to_string(), s9),
        );
        map.insert(
            "e_window_mhz",
            self.e_window_mhz
                .map_or("auto".to_string(), |(lo, hi)| format!("{},{}", s9(lo), s9(hi))),
        );
        map.insert("max_levels", self.max_levels.to_string());
        map.insert("eig_tol_mhz", s9(self.eig_tol_mhz));
        map.insert("well_depth_fraction", s9(self.well_depth_fraction));
        map.insert(
            "localization_threshold",
            s9(self.localization_threshold),
        );
        map.insert("outer_region_lobes", self.outer_region_lobes.to_string());
        map.insert("solver_grid_check", self.solver_grid_check.to_string());
        map.insert("solver_grid_tol_mhz", s9(self.solver_grid_tol_mhz));
        map.insert("b0_gauss", s9(self.b0_gauss));
        map.insert("g_eff", s9(self.g_eff));
        map.insert(
            "atomic_window_mhz",
            format!("{},{}", s9(self.atomic_window_mhz.0), s9(self.atomic_window_mhz.1)),
        );
        map.insert(
            "molecular_window_mhz",
            format!(
                "{},{}",
                s9(self.molecular_window_mhz.0),
                s9(self.molecular_window_mhz.1)
            ),
        );
        map.insert(
            "line_shape",
            match self.line_shape {
                LineShape::Gaussian => "gaussian".to_string(),
                LineShape::Lorentzian => "lorentzian".to_string(),
            },
        );
        map.insert(
            "a_scan_range_bohr",
            format!(
                "{},{}",
                s9(self.a_scan_range_bohr.0),
                s9(self.a_scan_range_bohr.1)
            ),
        );
        map.insert("a_scan_step_bohr", s9(self.a_scan_step_bohr));
        map.insert("a_golden_tol_bohr", s9(self.a_golden_tol_bohr));
        map.insert("hartree_to_mhz", s9(self.constants.hartree_to_mhz));
        map.insert(
            "bohr_magneton_mhz_per_gauss",
            s9(self.constants.bohr_magneton_mhz_per_gauss),
        );
        map.insert("amu_to_me", s9(self.constants.amu_to_me));
        map.insert("mass_rb87_amu", s9(self.constants.mass_rb87_amu));
        map.insert(
            "field_au_to_v_per_cm",
            s9(self.constants.field_au_to_v_per_cm),
        );
        map.insert("constants_vintage", self.constants.vintage.clone());
        let mut out = String::new();
        for (k, v) in map {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}
