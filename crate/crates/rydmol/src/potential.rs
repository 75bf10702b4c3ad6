//! Born-Oppenheimer mean-field potential for the nuclei,
//! V(R) = 2 pi a(k(R)) |Psi(R)|^2, tabulated on the wavefunction mesh.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::scattering::{local_momentum, MomentumConvention, ScatteringModel};
use crate::wavefunction::RadialWavefunction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialOptions {
    /// Inner edge of the tabulated curve; the region below is numerically
    /// noisy and irrelevant to the outer wells.
    pub r_min: f64,
    pub momentum: MomentumConvention,
}

impl Default for PotentialOptions {
    fn default() -> Self {
        Self {
            r_min: 100.0,
            momentum: MomentumConvention::Effective,
        }
    }
}

/// Optional tabulated a(k) replacing the linear expansion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AkTable {
    /// Momenta in a.u., strictly increasing.
    pub k: Vec<f64>,
    /// Scattering lengths in bohr.
    pub a: Vec<f64>,
    pub table_id: String,
}

impl AkTable {
    fn validate(&self) -> Result<()> {
        if self.k.len() != self.a.len() || self.k.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a(k) table `{}` needs matching k/a columns with >= 2 rows",
                self.table_id
            )));
        }
        if self.k.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(format!(
                "a(k) table `{}` must have strictly increasing k",
                self.table_id
            )));
        }
        Ok(())
    }

    fn eval(&self, k: f64) -> Option<f64> {
        if k < self.k[0] || k > *self.k.last().unwrap() {
            return None;
        }
        let j = match self.k.binary_search_by(|v| v.partial_cmp(&k).unwrap()) {
            Ok(j) => return Some(self.a[j]),
            Err(j) => j.clamp(1, self.k.len() - 1),
        };
        let t = (k - self.k[j - 1]) / (self.k[j] - self.k[j - 1]);
        Some(self.a[j - 1] + t * (self.a[j] - self.a[j - 1]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialMeta {
    pub n: u32,
    pub n_star: f64,
    pub defect_source: String,
    pub scattering: ScatteringModel,
    pub momentum: MomentumConvention,
    pub wavefunction_mesh_id: String,
    pub ak_table_id: Option<String>,
}

/// One negative lobe of the potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Well {
    pub i_lo: usize,
    pub i_hi: usize,
    pub r_lo: f64,
    pub r_hi: f64,
    pub r_at_min: f64,
    pub v_min: f64,
}

#[derive(Debug, Clone)]
pub struct PotentialCurve {
    grid: RadialGrid,
    v: Vec<f64>,
    meta: PotentialMeta,
}

impl PotentialCurve {
    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn meta(&self) -> &PotentialMeta {
        &self.meta
    }

    /// Assembles a curve from explicit samples on a sqrt mesh. Used by the
    /// solver oracles, which need analytic wells on the production grid type.
    pub fn from_samples(grid: RadialGrid, v: Vec<f64>, meta: PotentialMeta) -> Result<Self> {
        if grid.len() != v.len() {
            return Err(Error::GridMismatch {
                left: grid.mesh_id(),
                right: format!("values[len={}]", v.len()),
            });
        }
        Ok(Self { grid, v, meta })
    }

    pub fn global_min(&self) -> (f64, f64) {
        let mut vmin = f64::INFINITY;
        let mut rmin = self.grid.r_first();
        for (i, &v) in self.v.iter().enumerate() {
            if v < vmin {
                vmin = v;
                rmin = self.grid.r(i);
            }
        }
        (rmin, vmin)
    }

    /// Negative lobes deeper than `depth_fraction` of the global depth,
    /// ordered by radius. Splitting at the near-zero saddle points between
    /// antinodes keeps the wells of the oscillatory curve apart even though
    /// the tabulated values never hit zero exactly.
    pub fn wells(&self, depth_fraction: f64) -> Vec<Well> {
        let (_, vmin) = self.global_min();
        if vmin >= 0.0 {
            return Vec::new();
        }
        let threshold = vmin * depth_fraction.clamp(1e-6, 1.0);
        let mut wells = Vec::new();
        let mut start: Option<usize> = None;
        for i in 0..=self.v.len() {
            let below = i < self.v.len() && self.v[i] < threshold;
            match (below, start) {
                (true, None) => start = Some(i),
                (false, Some(s)) => {
                    let lobe = &self.v[s..i];
                    let (off, &v_min) = lobe
                        .iter()
                        .enumerate()
                        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                        .unwrap();
                    wells.push(Well {
                        i_lo: s,
                        i_hi: i - 1,
                        r_lo: self.grid.r(s),
                        r_hi: self.grid.r(i - 1),
                        r_at_min: self.grid.r(s + off),
                        v_min,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        wells
    }

    pub fn outermost_well(&self, depth_fraction: f64) -> Option<Well> {
        self.wells(depth_fraction).into_iter().last()
    }

    /// Curve restricted to every other mesh point, for convergence checks.
    pub fn decimated(&self) -> PotentialCurve {
        let grid = self.grid.decimated();
        let mut v: Vec<f64> = self.v.iter().step_by(2).copied().collect();
        v.truncate(grid.len());
        PotentialCurve {
            grid,
            v,
            meta: self.meta.clone(),
        }
    }

    /// Two-column (R in bohr, V in MHz) table.
    pub fn write_table(&self, out: &mut impl Write, constants: &PhysicalConstants) -> Result<()> {
        writeln!(out, "r_bohr,v_mhz")?;
        for (i, &v) in self.v.iter().enumerate() {
            writeln!(
                out,
                "{},{}",
                crate::textfmt::sci9(self.grid.r(i)),
                crate::textfmt::sci9(constants.energy_au_to_mhz(v))
            )?;
        }
        Ok(())
    }
}

/// Tabulates V(R) = 2 pi a(k(R)) |Psi(R)|^2 on the wavefunction mesh
/// restricted to r >= opts.r_min. The optional a(k) table must cover the
/// momentum range of the restricted mesh.
pub fn build_potential(
    wf: &RadialWavefunction,
    model: &ScatteringModel,
    opts: &PotentialOptions,
    ak_table: Option<&AkTable>,
) -> Result<PotentialCurve> {
    model.validate()?;
    if let Some(t) = ak_table {
        t.validate()?;
    }
    let q = match opts.momentum {
        MomentumConvention::Effective => wf.meta().n_star,
        MomentumConvention::Bare => wf.meta().n as f64,
    };
    let (i0, grid) = wf.grid().tail_from(opts.r_min);
    if grid.len() < 16 {
        return Err(Error::InvalidInput(format!(
            "potential window [{}, {}] leaves only {} mesh points",
            opts.r_min,
            wf.grid().r_last(),
            grid.len()
        )));
    }
    let mut v = Vec::with_capacity(grid.len());
    for j in 0..grid.len() {
        let r = grid.r(j);
        let k = local_momentum(q, r)?;
        let a = match ak_table {
            Some(t) => t.eval(k).ok_or_else(|| Error::GridMismatch {
                left: format!(
                    "a(k) table `{}` covering k in [{:.3e}, {:.3e}]",
                    t.table_id,
                    t.k[0],
                    t.k.last().unwrap()
                ),
                right: format!("{} needing k = {:.3e}", wf.meta().mesh_id, k),
            })?,
            None => model.scattering_length(k)?,
        };
        let u = wf.u_values()[i0 + j];
        // 2 pi a |Psi|^2 with |Psi|^2 = (u/r)^2 / (4 pi)
        v.push(a * u * u / (2.0 * r * r));
    }
    let meta = PotentialMeta {
        n: wf.meta().n,
        n_star: wf.meta().n_star,
        defect_source: wf.meta().defect_source.clone(),
        scattering: *model,
        momentum: opts.momentum,
        wavefunction_mesh_id: wf.meta().mesh_id.clone(),
        ak_table_id: ak_table.map(|t| t.table_id.clone()),
    };
    Ok(PotentialCurve { grid, v, meta })
}
