//! Optimal pre-squeezing against a squeezed thermal environment. The best
//! rate moves by exactly the environment squeezing, and the protected
//! central value does not change.

use catshield::{db_to_nats, nats_to_db, optimize_presqueeze_cn, CatState};

fn main() -> catshield::Result<()> {
    let odd = CatState::odd(3.0, 0.0)?;
    let eta = 0.8;
    let v = 1.0;

    println!("gamma_t [dB]  gamma_opt [dB]  W(0,0) bare  W(0,0) protected");
    for db in [0.0, 1.0, 3.0, 5.0, 6.0] {
        let r = optimize_presqueeze_cn(&odd, eta, v, db_to_nats(db))?;
        println!(
            "{db:12.1}  {:14.4}  {:11.6}  {:16.6}",
            nats_to_db(r.gamma_opt),
            r.baseline,
            r.objective
        );
    }
    Ok(())
}
