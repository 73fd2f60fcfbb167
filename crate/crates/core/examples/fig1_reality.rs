//! Lowest even/odd levels of the three-parameter PT5 family along μ4 (μ3 = 1/2, μ7 = 0),
//! for bosonic and fermionic sectors. Prints CSV: statistics,parity,mu4,level,re,im.

use euclid_pt::cli::fmt_e;
use euclid_pt::error::Error;
use euclid_pt::mathieu::{pt5_mathieu_levels, Parity};
use euclid_pt::spectral::Statistics;

fn main() -> anyhow::Result<()> {
    println!("statistics,parity,mu4,level,re,im");
    for (stats, sname) in [(Statistics::Bosonic, "bosonic"), (Statistics::Fermionic, "fermionic")] {
        for (parity, pname) in [(Parity::Even, "even"), (Parity::Odd, "odd")] {
            for k in 0..=120 {
                let mu4 = -3.0 + 6.0 * k as f64 / 120.0;
                // |μ4| = μ3 makes the reduction singular
                let levels = match pt5_mathieu_levels(0.5, mu4, 0.0, stats, Some(parity), 7) {
                    Err(Error::MapUndefined { .. }) => continue,
                    other => other?,
                };
                for (l, e) in levels.iter().enumerate() {
                    println!("{sname},{pname},{},{l},{},{}", fmt_e(mu4), fmt_e(e.re), fmt_e(e.im));
                }
            }
        }
    }
    Ok(())
}
