//! Which lossy channels can keep the negativity of a cat state, and the
//! central value they leave.

use catshield::{
    central_negativity, feasible_region, lossy_channel, negativity_possible, CatState, LossyStage,
};

fn main() -> catshield::Result<()> {
    let odd = CatState::odd(3.0, 0.0)?;

    for v in [0.5, 1.0, 1.5, 2.0] {
        let r = feasible_region(v);
        println!("V = {v}: negativity survives for {:.4} < eta <= {}", r.eta_min, r.eta_max);
    }

    println!("\n  eta    V   possible   W(0,0)");
    for (eta, v) in [(0.9, 0.5), (0.8, 0.5), (0.5, 0.5), (0.4, 0.5), (0.7, 1.0), (0.6, 1.0)] {
        let ch = lossy_channel(&LossyStage::new(eta, 0.0, v, 0.0)?)?;
        let cn = central_negativity(&odd, &ch)?;
        println!("{eta:5.2} {v:4.1} {:>10} {cn:+.6}", negativity_possible(&ch));
    }
    Ok(())
}
