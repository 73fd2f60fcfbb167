//! Exceptional points of the three-parameter PT5 family along μ7 (μ3 = 1, μ4 = 3),
//! next to the closed-form predictions from the coth condition.

use euclid_pt::dyson::{ep_predictions_pt5, Pt5Axis};
use euclid_pt::spectral::{find_exceptional_points, sweep, Axis, Family, SweepOptions, SweepTemplate};

fn main() -> anyhow::Result<()> {
    let t = SweepTemplate::new(Family::Pt5ThreeParam { mu3: 1.0, mu4: 3.0, mu7: 0.0 }).with_truncation(64);
    let r = sweep(&t, Axis::Mu(7), 0.0, 20.0, 201, SweepOptions::default())?;
    for ep in find_exceptional_points(&r, 1e-9)? {
        println!("mu7 = {:.6}  E = {:+.6}", ep.parameter_value, ep.energy);
    }
    println!("predicted boundaries: {:?}", ep_predictions_pt5(1.0, 3.0, 0.0, Pt5Axis::Mu7));
    Ok(())
}
