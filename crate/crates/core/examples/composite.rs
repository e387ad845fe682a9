//! Minimal library walkthrough: build a composite and inspect a state.

use jordanc_core::{JordanError, Session};

fn main() -> Result<(), JordanError> {
    let mut session = Session::new(0, 1e-8);
    let a = session.object("R2")?;
    let b = session.object("V4")?;
    let result = session.product(&a, &b)?;
    let composite = &result.product;
    println!("dim {} over {} ⊗ {}", composite.dim(), a.label, b.label);

    let mut rng = session.rng_for("demo");
    let rho = composite.random_density(&mut rng);
    let dec = composite.spectral(&rho, &mut rng)?;
    println!("spectrum {:?}, residual {:.2e}", dec.values, dec.residual);
    Ok(())
}
