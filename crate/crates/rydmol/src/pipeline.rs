//! End-to-end model: wavefunction -> mean-field potential -> bound states ->
//! outer-well selection, with caching so scattering-length scans only pay for
//! the eigenvalue solves.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::PhysicalConstants;
use crate::defect::QuantumDefectModel;
use crate::error::{Error, Result};
use crate::potential::{build_potential, PotentialCurve, PotentialOptions};
use crate::scattering::{validity_check, ScatteringModel};
use crate::solver::{
    select_outer_well_levels, solve_bound_states, OuterWellSelection, SolverOptions,
    VibrationalLevel,
};
use crate::wavefunction::{compute_wavefunction, RadialWavefunction, WavefunctionConfig};

#[derive(Debug, Clone)]
pub struct ModelParams {
    pub defect: QuantumDefectModel,
    pub scattering: ScatteringModel,
    pub constants: PhysicalConstants,
    pub wf_config: WavefunctionConfig,
    pub potential_opts: PotentialOptions,
    pub solver_opts: SolverOptions,
    pub validity_threshold: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            defect: QuantumDefectModel::default(),
            scattering: ScatteringModel {
                a_atom: -18.5,
                alpha: 319.0,
            },
            constants: PhysicalConstants::default(),
            wf_config: WavefunctionConfig::default(),
            potential_opts: PotentialOptions::default(),
            solver_opts: SolverOptions::default(),
            validity_threshold: 10.0,
        }
    }
}

/// Outer-well summary for one n.
#[derive(Debug, Clone, Serialize)]
pub struct OuterLevels {
    pub n: u32,
    pub e0_mhz: Option<f64>,
    pub e1_mhz: Option<f64>,
    /// Second-lowest eigenvalue of the full window, regardless of
    /// localization. Scattering-length scans fall back on it when the
    /// excited outer level briefly fails the localization test at some trial
    /// scattering length; eigenvalues move continuously where localization
    /// fractions do not.
    pub e1_fallback_mhz: Option<f64>,
    pub r0_expect: Option<f64>,
    pub r1_expect: Option<f64>,
    pub b0_rot_mhz: Option<f64>,
    pub diagnostics: Vec<String>,
}

/// Caches wavefunctions (independent of the scattering length) and outer-well
/// summaries keyed by (n, a_atom bits). Cheap to share across fit scans.
pub struct ModelContext {
    params: ModelParams,
    mu: f64,
    wf_cache: Mutex<HashMap<u32, Arc<RadialWavefunction>>>,
    outer_cache: Mutex<HashMap<(u32, u64), OuterLevels>>,
}

impl ModelContext {
    pub fn new(params: ModelParams) -> Result<Self> {
        params.constants.validate()?;
        params.defect.validate()?;
        params.scattering.validate()?;
        let mu = params.constants.reduced_mass_rb2();
        Ok(Self {
            params,
            mu,
            wf_cache: Mutex::new(HashMap::new()),
            outer_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.params.constants
    }

    fn check_validity(&self, n: u32) -> Result<()> {
        let n_star = self.params.defect.n_star(n)?;
        let rep = validity_check(n_star, self.params.scattering.alpha, self.params.validity_threshold)?;
        if !rep.ok {
            return Err(Error::ValidityFailed {
                n,
                ratio: rep.ratio,
                threshold: rep.threshold,
            });
        }
        Ok(())
    }

    pub fn wavefunction(&self, n: u32) -> Result<Arc<RadialWavefunction>> {
        if let Some(wf) = self.wf_cache.lock().unwrap().get(&n) {
            return Ok(wf.clone());
        }
        let wf = Arc::new(
            compute_wavefunction(n, 0, &self.params.defect, &self.params.wf_config)
                .map_err(|e| e.at_n(n))?,
        );
        self.wf_cache.lock().unwrap().insert(n, wf.clone());
        Ok(wf)
    }

    pub fn potential(&self, n: u32, a_atom: f64) -> Result<PotentialCurve> {
        let wf = self.wavefunction(n)?;
        let model = ScatteringModel {
            a_atom,
            alpha: self.params.scattering.alpha,
        };
        build_potential(&wf, &model, &self.params.potential_opts, None).map_err(|e| e.at_n(n))
    }

    /// Full solve for one n: potential curve, every level in the window and
    /// the outer-well selection. Uncached; reports use it directly.
    pub fn solve_n(
        &self,
        n: u32,
        a_atom: f64,
    ) -> Result<(PotentialCurve, Vec<VibrationalLevel>, OuterWellSelection)> {
        self.check_validity(n)?;
        let curve = self.potential(n, a_atom)?;
        let levels = solve_bound_states(&curve, self.mu, &self.params.solver_opts, self.constants())
            .map_err(|e| e.at_n(n))?;
        let selection = select_outer_well_levels(&levels, &curve, &self.params.solver_opts);
        Ok((curve, levels, selection))
    }

    /// Cached outer-well summary at an explicit scattering length.
    pub fn outer_levels(&self, n: u32, a_atom: f64) -> Result<OuterLevels> {
        let key = (n, a_atom.to_bits());
        if let Some(hit) = self.outer_cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let (_, levels, sel) = self.solve_n(n, a_atom)?;
        let out = OuterLevels {
            n,
            e0_mhz: sel.v0.as_ref().map(|l| l.energy_mhz),
            e1_mhz: sel.v1.as_ref().map(|l| l.energy_mhz),
            e1_fallback_mhz: levels.get(1).map(|l| l.energy_mhz),
            r0_expect: sel.v0.as_ref().map(|l| l.r_expect),
            r1_expect: sel.v1.as_ref().map(|l| l.r_expect),
            b0_rot_mhz: sel.v0.as_ref().map(|l| l.b_rot_mhz),
            diagnostics: sel.diagnostics,
        };
        self.outer_cache
            .lock()
            .unwrap()
            .insert(key, out.clone());
        Ok(out)
    }
}

/// Outer-well binding energies for each requested n at the context's default
/// scattering length. Parallel across n; the map order is fixed by n, so the
/// result is independent of the worker count.
pub fn model_binding_energies(
    ctx: &ModelContext,
    n_list: &[u32],
) -> Result<BTreeMap<u32, OuterLevels>> {
    let mut unique: Vec<u32> = n_list.to_vec();
    unique.sort_unstable();
    unique.dedup();
    let a = ctx.params().scattering.a_atom;
    let rows: Vec<Result<OuterLevels>> = unique
        .par_iter()
        .map(|&n| ctx.outer_levels(n, a))
        .collect();
    let mut out = BTreeMap::new();
    for row in rows {
        let row = row?;
        out.insert(row.n, row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_scattering_length_binds_nothing() {
        let params = ModelParams {
            scattering: ScatteringModel {
                a_atom: 0.0,
                alpha: 319.0,
            },
            ..ModelParams::default()
        };
        let ctx = ModelContext::new(params).unwrap();
        let map = model_binding_energies(&ctx, &[34, 35]).unwrap();
        for (_, row) in map {
            assert!(row.e0_mhz.is_none() && row.e1_mhz.is_none());
        }
    }

    #[test]
    fn validity_rejected_for_tiny_n_star() {
        // a defect model pushing n* below the validity threshold
        let params = ModelParams {
            defect: QuantumDefectModel {
                delta0: 5.0,
                delta2: 0.0,
                delta4: 0.0,
                source: "test".to_string(),
            },
            validity_threshold: 100.0,
            ..ModelParams::default()
        };
        let ctx = ModelContext::new(params).unwrap();
        let err = ctx.solve_n(10, -18.5).unwrap_err();
        assert!(matches!(err, Error::ValidityFailed { n: 10, .. }), "{err}");
    }

    #[test]
    fn wavefunction_cache_returns_same_instance() {
        let ctx = ModelContext::new(ModelParams::default()).unwrap();
        let a = ctx.wavefunction(34).unwrap();
        let b = ctx.wavefunction(34).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
