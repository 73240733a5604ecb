//! Two lossy stages with different environments, protected by pre- and
//! mid-squeezing, compared with the equivalent single stage.

use catshield::{
    central_negativity, db_to_nats, effective_single, lossy_channel, nats_to_db, optimize_composite,
    optimize_presqueeze_cn, CatState, CompositeSpec, LossyStage,
};

fn main() -> catshield::Result<()> {
    let odd = CatState::odd(3.0, 0.0)?;
    let eta = 0.9;
    let second = LossyStage::new(eta, 0.0, 2.0, db_to_nats(1.0))?;

    for db in [-2.0, -1.0, 1.0, 2.0] {
        let first = LossyStage::new(eta, 0.0, 1.0, db_to_nats(db))?;
        let spec = CompositeSpec::new(vec![first, second])?;
        let joint = optimize_composite(&odd, &spec)?;
        let eff = effective_single(&spec)?;
        let single = optimize_presqueeze_cn(&odd, eff.eta, eff.v, 0.0)?;
        let check = central_negativity(&odd, &lossy_channel(&eff.stage(single.gamma_opt)?)?)?;
        println!(
            "gamma_t = {db:+.0} dB: pre {:+.4} dB, mid {:+.4} dB, W(0,0) {:.8} (effective stage {:.8})",
            nats_to_db(joint.gamma_opt),
            nats_to_db(joint.gamma_mid_opt.unwrap_or(0.0)),
            joint.objective,
            check,
        );
    }
    Ok(())
}
