//! Prints the outer-well binding energies and rotational constants for
//! n = 34..40 at the default model parameters.
//!
//! ```text
//! cargo run -p rydmol --example model_summary --release
//! ```

use rydmol::pipeline::{model_binding_energies, ModelContext, ModelParams};

fn main() {
    let ctx = ModelContext::new(ModelParams::default()).unwrap();
    let map = model_binding_energies(&ctx, &[34, 35, 36, 37, 38, 39, 40]).unwrap();
    println!("n    E(v0)/MHz   E(v1)/MHz   <R0>/bohr   B0/kHz");
    for (n, row) in &map {
        println!(
            "{n}   {:>9}   {:>9}   {:>9}   {:>6}",
            row.e0_mhz.map_or("-".to_string(), |e| format!("{e:.2}")),
            row.e1_mhz.map_or("-".to_string(), |e| format!("{e:.2}")),
            row.r0_expect.map_or("-".to_string(), |r| format!("{r:.0}")),
            row.b0_rot_mhz
                .map_or("-".to_string(), |b| format!("{:.2}", b * 1e3)),
        );
        for d in &row.diagnostics {
            println!("     note: {d}");
        }
    }
}
