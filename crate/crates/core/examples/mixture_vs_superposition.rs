//! Computes the mixture and superposition intensity surfaces on the default
//! grid, checks both against their closed forms, and writes them as CSV.
//!
//! ```text
//! cargo run --release --example mixture_vs_superposition -- [out_dir]
//! ```

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use delayed_choice::experiments::{
    oracle_mixture, oracle_superposition, oracle_surface, surface, surface_alpha_grid, surface_theta_grid, ScenarioId, DEFAULT_ALPHA_STEPS,
    DEFAULT_THETA_STEPS,
};
use delayed_choice::state::Polarization;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir = std::env::args().nth(1).map(PathBuf::from);
    let thetas = surface_theta_grid(DEFAULT_THETA_STEPS);
    let alphas = surface_alpha_grid(DEFAULT_ALPHA_STEPS);

    let mut surfaces = Vec::new();
    let cases: [(ScenarioId, fn(f64, f64) -> f64); 2] = [
        (ScenarioId::Fig2Mixture, oracle_mixture),
        (ScenarioId::Fig2Superposition, oracle_superposition),
    ];
    for (id, oracle) in cases {
        let sim = surface(id, Polarization::H, None, &thetas, &alphas)?;
        let expected = oracle_surface(&thetas, &alphas, oracle);
        let worst = (0..alphas.len())
            .flat_map(|i| sim.row(i).iter().zip(&expected[i]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        println!("{id}: {} points, max |sim - closed form| = {worst:.2e}", thetas.len() * alphas.len());
        if let Some(dir) = &out_dir {
            let path = dir.join(format!("{id}.csv"));
            sim.write_csv(BufWriter::new(File::create(&path)?))?;
            println!("  wrote {}", path.display());
        }
        surfaces.push(sim);
    }
    println!("max |mixture - superposition| = {:.4}", surfaces[0].max_abs_diff(&surfaces[1]));
    Ok(())
}
