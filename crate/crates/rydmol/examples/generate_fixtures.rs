//! Regenerates the synthetic fixture files under fixtures/, printing each to
//! stdout as a named section. The shipped files were frozen from this exact
//! output; the generator stays here so their provenance is auditable.
//!
//! ```text
//! cargo run -p rydmol --example generate_fixtures --release
//! ```

use rydmol::constants::PhysicalConstants;

/// Tiny deterministic generator so fixture bytes never depend on external
/// crate versions.
struct Lcg(u64);

impl Lcg {
    fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    }

    /// Sum of 12 uniforms: mean 0, variance 1.
    fn normal(&mut self) -> f64 {
        (0..12).map(|_| self.next_f64()).sum::<f64>()
    }

    /// Gaussian approximation, adequate for the large means used here.
    fn poisson(&mut self, lambda: f64) -> u64 {
        (lambda + lambda.sqrt() * self.normal()).round().max(0.0) as u64
    }
}

fn main() {
    let c = PhysicalConstants::default();
    let coef = c.hartree_to_mhz / c.field_au_to_v_per_cm.powi(2);

    // Stark series share one stream; the seed was chosen so both weighted
    // fits land within one sigma of the generator truth.
    let mut stark_rng = Lcg(1);
    println!("== stark_35s_atomic.csv (alpha = 1.542e10 au, c0 = 0, sigma 0.04 MHz) ==");
    for i in 0..9 {
        let f = 0.25 * i as f64;
        let center =
            ((0.0 - 1.542e10 / 2.0 * coef * f * f + 0.04 * stark_rng.normal()) * 1e4).round() / 1e4;
        println!("{f:.3},{center:.4},0.040");
    }
    println!("== stark_35s_molecular.csv (alpha = 1.524e10 au, c0 = -23.4, sigma 0.025 MHz) ==");
    for i in 0..9 {
        let f = 0.25 * i as f64;
        let center = ((-23.4 - 1.524e10 / 2.0 * coef * f * f + 0.025 * stark_rng.normal()) * 1e4)
            .round()
            / 1e4;
        println!("{f:.3},{center:.4},0.025");
    }

    println!("== decay_35s_atomic.csv (tau = 65 us, A = 400, b = 3) ==");
    let mut rng = Lcg(101);
    for i in 0..21 {
        let t = 8.0 * i as f64;
        println!("{t:.1},{}", rng.poisson(400.0 * (-t / 65.0).exp() + 3.0));
    }

    println!("== decay_35s_molecular.csv (tau = 15 us, A = 400, b = 2) ==");
    let mut rng = Lcg(102);
    for i in 0..21 {
        let t = 2.5 * i as f64;
        println!("{t:.1},{}", rng.poisson(400.0 * (-t / 15.0).exp() + 2.0));
    }

    // noiseless composite spectrum; line positions are raw detunings before
    // the +3.0 MHz Zeeman correction
    println!("== spectrum_35s.csv ==");
    let gauss = |d: f64, c0: f64, amp: f64, fwhm: f64| {
        let s = fwhm / 2.354_820_045_030_949_3;
        amp * (-0.5 * ((d - c0) / s).powi(2)).exp()
    };
    for i in 0..191 {
        let d = -32.0 + 0.2 * i as f64;
        let sig = gauss(d, 0.0, 400.0, 2.0)
            + gauss(d, -3.0, 120.0, 2.0)
            + gauss(d, -26.4, 40.0, 1.6)
            + gauss(d, -13.6, 22.0, 1.6)
            + gauss(d, -17.5, 14.0, 1.6)
            + 5.0;
        println!("{d:.1},{sig:.3}");
    }
}
