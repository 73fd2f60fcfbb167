//! Tracks the lowest levels of the three-parameter PT5 family along μ3 (μ4 = 1, μ7 = 4)
//! and locates the exceptional points where pairs turn complex.

use euclid_pt::spectral::{find_exceptional_points, sweep, Axis, Family, SweepOptions, SweepTemplate};

fn main() -> anyhow::Result<()> {
    let t = SweepTemplate::new(Family::Pt5ThreeParam { mu3: 0.0, mu4: 1.0, mu7: 4.0 }).with_truncation(64);
    let r = sweep(&t, Axis::Mu(3), -4.0, 4.0, 161, SweepOptions::default())?;
    for ep in find_exceptional_points(&r, 1e-9)? {
        println!(
            "mu3 = {:+.6}  E = {:.6}  levels {:?}",
            ep.parameter_value, ep.energy, ep.level_pair
        );
    }
    println!("max |Im E| along the sweep: {:.3e}", r.max_abs_im());
    Ok(())
}
