//! Fringe visibility of each detector in the four-detector layout, and of the
//! postselected detector for a few source angles.

use std::f64::consts::{FRAC_PI_4, PI};

use delayed_choice::experiments::{linspace, Scenario, ScenarioId};
use delayed_choice::measurement::visibility;

fn series(id: ScenarioId, alpha: f64, det: &str) -> delayed_choice::Result<Vec<f64>> {
    linspace(0.0, 2.0 * PI, 721)
        .into_iter()
        .map(|t| Ok(Scenario::new(id, alpha, t).evaluate()?.intensity(det).unwrap()))
        .collect()
}

fn main() -> delayed_choice::Result<()> {
    let alpha = 0.6;
    println!("particle/wave layout, alpha = {alpha}");
    for det in ["D1", "D2", "D3", "D4"] {
        let v = visibility(&series(ScenarioId::Fig2ParticleWave, alpha, det)?)?;
        println!("  {det}: V = {v:.6}");
    }

    println!("superposition, D2 given H");
    for alpha in [0.0, 0.3, FRAC_PI_4, 1.2, 1.5] {
        let v = visibility(&series(ScenarioId::Fig2Superposition, alpha, "D2")?)?;
        println!("  alpha = {alpha:.4}: V = {v:.6}");
    }
    Ok(())
}
