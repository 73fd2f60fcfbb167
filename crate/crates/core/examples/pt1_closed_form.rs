//! PT1 spectra from the Fourier eigenproblem against the closed-form bosonic and fermionic levels
//! of the constrained Hamiltonian.

use euclid_pt::algebra::PtSymmetryE2;
use euclid_pt::dyson::{free_params, hermitize};
use euclid_pt::spectral::{eigen_spectrum, pt1_closed_spectrum, SpectralProblem, Statistics};

fn main() -> anyhow::Result<()> {
    let (mu1, mu3) = (1.3, 0.7);
    let r = hermitize(PtSymmetryE2::PT1, &free_params([("lambda", 0.4), ("mu1", mu1), ("mu3", mu3), ("mu4", -0.5)]))?;
    println!("constrained mu = {:?}", r.constrained_mu);
    for stats in [Statistics::Bosonic, Statistics::Fermionic] {
        let sp = eigen_spectrum(&SpectralProblem::new(r.original(), stats.sector(), 32))?;
        let mut closed = Vec::new();
        for n in 0..=4i64 {
            let e = pt1_closed_spectrum(mu1, mu3, n, stats)?;
            // k = ±n (±(n + ½)) give the same level
            let copies = if stats == Statistics::Bosonic && n == 0 { 1 } else { 2 };
            closed.extend(std::iter::repeat_n(e, copies));
        }
        closed.sort_by(f64::total_cmp);
        println!("{stats:?}");
        for (k, e) in sp.lowest(8).iter().enumerate() {
            println!("  {k}: numeric {:+.10} {:+.1e}i   closed form {:+.10}", e.re, e.im, closed[k]);
        }
    }
    Ok(())
}
