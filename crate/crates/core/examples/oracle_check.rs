//! Closed forms against direct quadrature of the channel integral.

use catshield::oracle::{hs_distance_numeric, purity_numeric, wigner_numeric, QuadratureSpec};
use catshield::{hs_distance, lossy_channel, purity, wigner_transformed, CatState, LossyStage, PhasePoint};

fn main() -> catshield::Result<()> {
    let spec = QuadratureSpec::default();
    let state = CatState::odd(2.0, 1.5)?;
    let ch = lossy_channel(&LossyStage::new(0.75, 0.3, 1.0, 0.1)?)?;

    for (x, p) in [(0.0, 0.0), (0.5, -0.2), (1.7, 1.3)] {
        let pt = PhasePoint::new(x, p);
        let num = wigner_numeric(&state, &ch, pt, &spec)?;
        println!(
            "W({x}, {p}): closed {:+.12}  quadrature {:+.12}  (resolution change {:.1e})",
            wigner_transformed(&state, &ch, pt),
            num.value,
            num.error_estimate
        );
    }
    let p = purity_numeric(&state, &ch, &spec)?;
    println!("purity:   closed {:.12}  quadrature {:.12}", purity(&state, &ch), p.value);
    let d = hs_distance_numeric(state.x0(), state.p0(), &ch, &spec)?;
    println!(
        "distance: closed {:.12}  quadrature {:.12}",
        hs_distance(state.x0(), state.p0(), &ch).distance,
        d.value
    );
    Ok(())
}
