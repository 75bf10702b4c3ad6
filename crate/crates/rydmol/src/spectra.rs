//! Measured spectra: detuning vs ion signal, plus the CSV reader.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMeta {
    pub n: Option<u32>,
    pub b0_gauss: Option<f64>,
    pub averages: Option<u32>,
}

/// One spectrum with detuning in MHz relative to the atomic line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub detuning_mhz: Vec<f64>,
    pub signal: Vec<f64>,
    pub meta: SpectrumMeta,
}

impl Spectrum {
    pub fn new(detuning_mhz: Vec<f64>, signal: Vec<f64>, meta: SpectrumMeta) -> Result<Self> {
        let s = Self {
            detuning_mhz,
            signal,
            meta,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.detuning_mhz.len() != self.signal.len() {
            return Err(Error::InvalidInput(format!(
                "detuning and signal lengths differ: {} vs {}",
                self.detuning_mhz.len(),
                self.signal.len()
            )));
        }
        if self.detuning_mhz.len() < 8 {
            return Err(Error::InvalidInput(format!(
                "spectrum has {} points; need >= 8",
                self.detuning_mhz.len()
            )));
        }
        if self.detuning_mhz.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(
                "detuning must be strictly increasing".to_string(),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.detuning_mhz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detuning_mhz.is_empty()
    }
}

/// Reads `detuning_mhz,signal` CSV. Leading `# key = value` comments may set
/// the metadata fields n, b0_gauss and averages.
pub fn parse_spectrum_csv(path: &Path) -> Result<Spectrum> {
    let text = std::fs::read_to_string(path)?;
    let pathstr = path.display().to_string();
    let mut meta = SpectrumMeta::default();
    let mut detuning = Vec::new();
    let mut signal = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((k, v)) = comment.split_once('=') {
                let (k, v) = (k.trim(), v.trim());
                let parsed = match k {
                    "n" => v.parse::<u32>().map(|x| meta.n = Some(x)).is_ok(),
                    "b0_gauss" => v.parse::<f64>().map(|x| meta.b0_gauss = Some(x)).is_ok(),
                    "averages" => v.parse::<u32>().map(|x| meta.averages = Some(x)).is_ok(),
                    _ => true,
                };
                if !parsed {
                    return Err(Error::CsvParse {
                        path: pathstr,
                        line: lineno,
                        message: format!("bad metadata value for `{k}`: `{v}`"),
                    });
                }
            }
            continue;
        }
        if !saw_header {
            if line != "detuning_mhz,signal" {
                return Err(Error::CsvParse {
                    path: pathstr,
                    line: lineno,
                    message: format!("expected header `detuning_mhz,signal`, got `{line}`"),
                });
            }
            saw_header = true;
            continue;
        }
        let mut cols = line.split(',');
        let (Some(dcol), Some(scol), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(Error::CsvParse {
                path: pathstr,
                line: lineno,
                message: format!("expected 2 columns, got `{line}`"),
            });
        };
        let d: f64 = dcol.trim().parse().map_err(|_| Error::CsvParse {
            path: pathstr.clone(),
            line: lineno,
            message: format!("non-numeric detuning `{dcol}`"),
        })?;
        let s: f64 = scol.trim().parse().map_err(|_| Error::CsvParse {
            path: pathstr.clone(),
            line: lineno,
            message: format!("non-numeric signal `{scol}`"),
        })?;
        if !d.is_finite() || !s.is_finite() {
            return Err(Error::CsvParse {
                path: pathstr,
                line: lineno,
                message: "NaN or infinite value".to_string(),
            });
        }
        if let Some(&last) = detuning.last() {
            if d <= last {
                return Err(Error::CsvParse {
                    path: pathstr,
                    line: lineno,
                    message: format!("detuning not strictly increasing: {d} after {last}"),
                });
            }
        }
        detuning.push(d);
        signal.push(s);
    }
    if !saw_header {
        return Err(Error::CsvParse {
            path: pathstr,
            line: 1,
            message: "missing header `detuning_mhz,signal`".to_string(),
        });
    }
    Spectrum::new(detuning, signal, meta)
}
