//! The classic delayed-choice interferometer: with the second beam splitter
//! the detectors see fringes, without it each fires half the time.

use std::f64::consts::PI;

use delayed_choice::experiments::{linspace, oracle_particle, oracle_wave, Scenario, ScenarioId};

fn main() -> delayed_choice::Result<()> {
    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "theta", "D1 closed", "D1 open", "wave", "particle");
    for theta in linspace(0.0, 2.0 * PI, 9) {
        let closed = Scenario::new(ScenarioId::WheelerWithBs2, 0.0, theta).evaluate()?;
        let open = Scenario::new(ScenarioId::WheelerWithoutBs2, 0.0, theta).evaluate()?;
        println!(
            "{theta:>8.4} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            closed.intensity("D1").unwrap(),
            open.intensity("D1").unwrap(),
            oracle_wave(theta),
            oracle_particle(),
        );
    }
    Ok(())
}
