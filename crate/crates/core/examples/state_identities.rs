//! Builds the two-mode states by running the optical network and compares
//! them with the closed-form reference states.
//!
//! ```text
//! cargo run --example state_identities -- [alpha] [theta]
//! ```

use std::f64::consts::FRAC_PI_4;

use delayed_choice::experiments::{Scenario, ScenarioId};
use delayed_choice::measurement::postselect;
use delayed_choice::state::{
    hyperentangled_state, particle_state, rotated_hyperentangled_state, superposition_state, wave_state,
    Polarization,
};

fn arg(n: usize, default: f64) -> f64 {
    std::env::args().nth(n).map_or(default, |s| s.parse().expect("angle in radians"))
}

fn main() -> delayed_choice::Result<()> {
    let alpha = arg(1, FRAC_PI_4);
    let theta = arg(2, 1.0);

    let overlap = particle_state(theta, 2)?.inner(&wave_state(theta, 2)?)?;
    println!("<particle|wave> = {:.6} (cos θ/√2 = {:.6})", overlap.re, theta.cos() / 2f64.sqrt());

    let base = Scenario::new(ScenarioId::Fig2Mixture, alpha, theta).evaluate()?.state;
    let rotated = Scenario::new(ScenarioId::Fig2Superposition, alpha, theta).evaluate()?.state;
    let (kept, p) = postselect(&rotated, Polarization::H)?;

    println!("after q-BS:        |overlap| = {:.15}", base.overlap(&hyperentangled_state(alpha, theta)?)?);
    println!("after half-waves:  |overlap| = {:.15}", rotated.overlap(&rotated_hyperentangled_state(alpha, theta)?)?);
    println!("H postselected:    |overlap| = {:.15}  (P(H) = {p:.6})", kept.overlap(&superposition_state(alpha, theta)?)?);

    let rho = base.to_density().partial_trace_pol()?;
    println!("path purity after tracing out polarization: {:.6}", rho.purity());
    Ok(())
}
