//! Prints the Wigner function of an odd cat after 20% loss on a grid, as
//! `x,p,w` CSV rows.

use catshield::{lossy_channel, CatState, LossyStage, PhasePoint, TransformedWigner};

fn main() -> catshield::Result<()> {
    let state = CatState::odd(3.0, 0.0)?;
    let ch = lossy_channel(&LossyStage::pure_loss(0.8)?)?;
    let w = TransformedWigner::new(&state, &ch);

    println!("x,p,w");
    for i in 0..=40 {
        for j in 0..=20 {
            let pt = PhasePoint::new(-5.0 + 0.25 * i as f64, -2.5 + 0.25 * j as f64);
            println!("{},{},{:.6e}", pt.x, pt.p, w.eval(pt));
        }
    }
    Ok(())
}
