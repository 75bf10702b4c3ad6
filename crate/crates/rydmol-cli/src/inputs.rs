//! Input file readers for the fit commands.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use rydmol::analysis::binding::{Assignment, BindingEnergyDatum};
use rydmol::analysis::lifetime::DecayPoint;
use rydmol::analysis::stark::StarkPoint;

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// `n,v,e_b_mhz,sigma_mhz` rows; `v` is `0`, `1` or `unassigned`.
pub fn parse_binding_csv(path: &Path) -> Result<Vec<BindingEnergyDatum>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (lineno, line) in data_lines(&text) {
        if !saw_header {
            if line != "n,v,e_b_mhz,sigma_mhz" {
                bail!(
                    "{}:{lineno}: expected header `n,v,e_b_mhz,sigma_mhz`, got `{line}`",
                    path.display()
                );
            }
            saw_header = true;
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 4 {
            bail!("{}:{lineno}: expected 4 columns, got `{line}`", path.display());
        }
        let n: u32 = cols[0]
            .parse()
            .with_context(|| format!("{}:{lineno}: bad n `{}`", path.display(), cols[0]))?;
        let v = Assignment::parse(cols[1])
            .map_err(|e| anyhow!("{}:{lineno}: {e}", path.display()))?;
        let e_b_mhz: f64 = cols[2]
            .parse()
            .with_context(|| format!("{}:{lineno}: bad e_b `{}`", path.display(), cols[2]))?;
        let sigma_mhz: f64 = cols[3]
            .parse()
            .with_context(|| format!("{}:{lineno}: bad sigma `{}`", path.display(), cols[3]))?;
        let datum = BindingEnergyDatum {
            n,
            v,
            e_b_mhz,
            sigma_mhz,
        };
        datum
            .validate()
            .map_err(|e| anyhow!("{}:{lineno}: {e}", path.display()))?;
        rows.push(datum);
    }
    if !saw_header {
        bail!("{}: missing header `n,v,e_b_mhz,sigma_mhz`", path.display());
    }
    if rows.is_empty() {
        bail!("{}: no data rows", path.display());
    }
    Ok(rows)
}

/// One spectrum to reduce to a binding-energy datum.
#[derive(Debug, Clone)]
pub struct ManifestRow {
    pub spectrum_path: PathBuf,
    pub n: u32,
    pub v: Assignment,
    pub window_mhz: (f64, f64),
}

/// `spectrum_path,n,v,window_lo_mhz,window_hi_mhz` rows; paths resolve
/// relative to the manifest location.
pub fn parse_manifest_csv(path: &Path) -> Result<Vec<ManifestRow>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (lineno, line) in data_lines(&text) {
        if !saw_header {
            if line != "spectrum_path,n,v,window_lo_mhz,window_hi_mhz" {
                bail!(
                    "{}:{lineno}: expected header `spectrum_path,n,v,window_lo_mhz,window_hi_mhz`",
                    path.display()
                );
            }
            saw_header = true;
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 5 {
            bail!("{}:{lineno}: expected 5 columns, got `{line}`", path.display());
        }
        let n: u32 = cols[1]
            .parse()
            .with_context(|| format!("{}:{lineno}: bad n `{}`", path.display(), cols[1]))?;
        let v = Assignment::parse(cols[2])
            .map_err(|e| anyhow!("{}:{lineno}: {e}", path.display()))?;
        let lo: f64 = cols[3]
            .parse()
            .with_context(|| format!("{}:{lineno}: bad window `{}`", path.display(), cols[3]))?;
        let hi: f64 = cols[4]
            .parse()
            .with_context(|| format!("{}:{lineno}: bad window `{}`", path.display(), cols[4]))?;
        rows.push(ManifestRow {
            spectrum_path: base.join(cols[0]),
            n,
            v,
            window_mhz: (lo, hi),
        });
    }
    if rows.is_empty() {
        bail!("{}: no manifest rows", path.display());
    }
    Ok(rows)
}

/// Sniffs whether a fit input file is direct binding data or a manifest.
pub fn is_manifest(path: &Path) -> Result<bool> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let first = data_lines(&text)
        .next()
        .map(|(_, line)| line.starts_with("spectrum_path,"));
    match first {
        Some(is_manifest) => Ok(is_manifest),
        None => bail!("{}: empty input file", path.display()),
    }
}

/// `field_v_per_cm,center_mhz[,sigma_mhz]` rows.
pub fn parse_stark_csv(path: &Path) -> Result<Vec<StarkPoint>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (lineno, line) in data_lines(&text) {
        if !saw_header {
            if !(line == "field_v_per_cm,center_mhz,sigma_mhz"
                || line == "field_v_per_cm,center_mhz")
            {
                bail!(
                    "{}:{lineno}: expected header `field_v_per_cm,center_mhz[,sigma_mhz]`",
                    path.display()
                );
            }
            saw_header = true;
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 2 && cols.len() != 3 {
            bail!("{}:{lineno}: expected 2 or 3 columns", path.display());
        }
        let field: f64 = cols[0]
            .parse()
            .with_context(|| format!("{}:{lineno}: bad field `{}`", path.display(), cols[0]))?;
        let center: f64 = cols[1]
            .parse()
            .with_context(|| format!("{}:{lineno}: bad center `{}`", path.display(), cols[1]))?;
        let sigma = if cols.len() == 3 {
            Some(cols[2].parse::<f64>().with_context(|| {
                format!("{}:{lineno}: bad sigma `{}`", path.display(), cols[2])
            })?)
        } else {
            None
        };
        rows.push(StarkPoint {
            field_v_per_cm: field,
            center_mhz: center,
            sigma_mhz: sigma,
        });
    }
    if rows.is_empty() {
        bail!("{}: no data rows", path.display());
    }
    Ok(rows)
}

/// `delay_us,counts` rows.
pub fn parse_decay_csv(path: &Path) -> Result<Vec<DecayPoint>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (lineno, line) in data_lines(&text) {
        if !saw_header {
            if line != "delay_us,counts" {
                bail!("{}:{lineno}: expected header `delay_us,counts`", path.display());
            }
            saw_header = true;
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 2 {
            bail!("{}:{lineno}: expected 2 columns", path.display());
        }
        let delay: f64 = cols[0]
            .parse()
            .with_context(|| format!("{}:{lineno}: bad delay `{}`", path.display(), cols[0]))?;
        let counts: f64 = cols[1]
            .parse()
            .with_context(|| format!("{}:{lineno}: bad counts `{}`", path.display(), cols[1]))?;
        rows.push(DecayPoint {
            delay_us: delay,
            counts,
        });
    }
    if rows.is_empty() {
        bail!("{}: no data rows", path.display());
    }
    Ok(rows)
}
