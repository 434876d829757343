//! Parses a bench file (or a built-in one), prints its canonical form and the
//! detector readings.
//!
//! ```text
//! cargo run --example bench_file -- scenarios/fig2_superposition.bench
//! ```

use delayed_choice::bench::{parse_bench, serialize};
use delayed_choice::experiments::evaluate;

const BUILTIN: &str = "\
# q-BS with a postselected polarization
modes 2
source alpha=pi/4 mode=0
bs 0 1
phase 1 1.0
qbs 0 1
hwp 0 22.5
hwp 1 22.5
detect D1 mode=0 pol=V
detect D2 mode=0 pol=H
postselect pol=H
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => BUILTIN.to_string(),
    };
    let circuit = parse_bench(&text)?;
    print!("{}", serialize(&circuit));

    let eval = evaluate(&circuit)?;
    if let Some((pol, p)) = eval.postselection {
        println!("# postselection on {pol}: probability {p:.6}");
    }
    for r in &eval.readings {
        println!("# {} probability {:.6} intensity {:?}", r.name, r.probability, r.intensity);
    }

    let broken = text.replacen("bs 0 1", "bs 0 x", 1);
    if let Err(e) = parse_bench(&broken) {
        println!("# corrupted copy: {e}");
    }
    Ok(())
}
