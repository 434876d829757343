//! Samples detector clicks from the mixture scenario with a seeded generator.
//!
//! ```text
//! cargo run --example photon_counting -- [shots] [seed]
//! ```

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use delayed_choice::experiments::{Scenario, ScenarioId};
use delayed_choice::measurement::{mixture_path_probabilities, outcome_probabilities, sample_shots};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let shots: u64 = args.next().map_or(Ok(1_000_000), |s| s.parse())?;
    let seed: u64 = args.next().map_or(Ok(0), |s| s.parse())?;

    let state = Scenario::new(ScenarioId::Fig2Mixture, FRAC_PI_4, FRAC_PI_2).evaluate()?.state;

    let paths = mixture_path_probabilities(&state);
    for (mode, n) in sample_shots(&paths, shots, seed)? {
        let p = paths.get(&mode).unwrap();
        let sigma = (p * (1.0 - p) / shots as f64).sqrt();
        let f = n as f64 / shots as f64;
        println!("mode {mode}: {n:>8} clicks, f = {f:.6}, p = {p:.6}, {:.2} sigma", (f - p) / sigma);
    }

    for (label, n) in sample_shots(&outcome_probabilities(&state), shots, seed)? {
        if n > 0 {
            println!("  {label}: {n}");
        }
    }
    Ok(())
}
