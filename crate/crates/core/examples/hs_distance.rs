//! How well the even and odd cats stay distinguishable after loss, with and
//! without the distance-maximizing pre-squeezing.

use catshield::{nats_to_db, optimize_presqueeze_hs};

fn main() -> catshield::Result<()> {
    println!("  eta    V   bare     optimal  gamma_opt [dB]");
    for v in [0.5, 1.0, 2.0] {
        for eta in [0.3, 0.5, 0.7, 0.9, 1.0] {
            let r = optimize_presqueeze_hs(3.0, 0.0, eta, v)?;
            println!(
                "{eta:5.2} {v:4.1}   {:.4}   {:.4}   {:8.3}",
                r.baseline,
                r.objective,
                nats_to_db(r.gamma_opt)
            );
        }
    }
    Ok(())
}
