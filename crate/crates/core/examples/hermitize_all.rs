//! Solves the hermiticity constraints for each of the five antilinear symmetries at a sample
//! parameter point and checks that the Dyson partner is Hermitian and isospectral.

use euclid_pt::algebra::PtSymmetryE2;
use euclid_pt::dyson::{free_params, hermitize};
use euclid_pt::spectral::{eigen_spectrum, SpectralProblem};

fn main() -> anyhow::Result<()> {
    let samples: [(PtSymmetryE2, &[(&str, f64)]); 5] = [
        (PtSymmetryE2::PT1, &[("lambda", 0.3), ("mu1", 1.0), ("mu3", 0.4), ("mu4", 0.7)]),
        (PtSymmetryE2::PT2, &[("lambda", -0.2), ("mu1", 1.0), ("mu3", 0.5), ("mu4", -0.3)]),
        (
            PtSymmetryE2::PT3,
            &[("mu1", 1.0), ("mu2", 0.2), ("mu3", 0.3), ("mu4", 0.1), ("mu5", 0.2), ("mu6", -0.1), ("mu7", 0.4), ("mu8", 0.6)],
        ),
        (PtSymmetryE2::PT4, &[("mu1", 1.0), ("mu2", 0.1), ("mu4", 0.3), ("mu5", 0.2), ("mu6", 0.1), ("mu7", 2.0), ("mu8", 0.5)]),
        (PtSymmetryE2::PT5, &[("mu1", 1.0), ("mu2", 0.1), ("mu4", 0.3), ("mu5", 0.2), ("mu6", 0.1), ("mu7", 2.0), ("mu8", 0.5)]),
    ];
    for (s, free) in samples {
        match hermitize(s, &free_params(free.iter().copied())) {
            Ok(r) => {
                let a = eigen_spectrum(&SpectralProblem::new(r.original(), 0.0, 32))?;
                let b = eigen_spectrum(&SpectralProblem::new(r.h.clone(), 0.0, 32))?;
                let gap = a.lowest(8).iter().zip(b.lowest(8)).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
                println!("{s}: lambda = {:+.6}, residual {:.1e}, spectral gap {:.1e}", r.params.lambda, r.residual, gap);
                println!("    constrained mu = {:?}", r.constrained_mu.map(|m| (m * 1e6).round() / 1e6));
            }
            Err(e) => println!("{s}: {e}"),
        }
    }
    Ok(())
}
