//! Shows that a PBS/BS/PBS network with two ancilla modes acts like the
//! polarization-controlled beam splitter on inputs in the system modes.

use delayed_choice::elements::{compose, element_unitary, qbs_decomposition, Element};

fn main() -> delayed_choice::Result<()> {
    let network = qbs_decomposition(0, 1, 2, 3)?;
    for e in &network {
        println!("  {} {:?}", e.keyword(), e.modes_used());
    }
    let u = compose(&network, 4)?;
    let qbs = element_unitary(&Element::Qbs(0, 1), 4)?;

    // Columns 0..4 are |0H>, |0V>, |1H>, |1V>.
    let labels = ["0H", "0V", "1H", "1V"];
    let mut worst = 0.0f64;
    for (col, label) in labels.iter().enumerate() {
        let d = (0..8)
            .map(|row| (u.matrix()[(row, col)] - qbs.matrix()[(row, col)]).norm())
            .fold(0.0, f64::max);
        println!("input {label}: max deviation {d:.2e}");
        worst = worst.max(d);
    }
    println!("network matches q-BS on system inputs: {}", worst < 1e-12);
    Ok(())
}
