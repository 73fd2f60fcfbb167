//! Eigenproblems of E2 elements in the circle representation
//! `J = −i∂θ`, `u = sin θ`, `v = cos θ`, on modes `e^{ikθ}` with `k = n + s/2`.

mod sweep;
mod wave;

pub use sweep::{
    find_exceptional_points, pt5_complex_mathieu_mu, sweep, Axis, ExceptionalPoint, Family, SweepOptions, SweepResult, SweepTemplate,
};
pub use wave::{intensity, pt1_closed_wavefunction, pt_eigenstate_check, wavefunction, Pt1Part, PtParity, WavefunctionSpec};

use faer::Mat;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::algebra::{E2Element, Monomial};
use crate::error::{Error, Result};

pub const DEFAULT_TRUNCATION: usize = 64;
pub const DEFAULT_RTOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Statistics {
    Bosonic,
    Fermionic,
}

impl Statistics {
    pub fn sector(self) -> f64 {
        match self {
            Statistics::Bosonic => 0.0,
            Statistics::Fermionic => 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralProblem {
    pub element: E2Element,
    /// Boundary phase ψ(θ + 2π) = e^{iπs} ψ(θ).
    pub sector: f64,
    /// Modes n = −N..N.
    pub truncation: usize,
}

impl SpectralProblem {
    pub fn new(element: E2Element, sector: f64, truncation: usize) -> Self {
        Self { element, sector, truncation }
    }

    pub fn dim(&self) -> usize {
        2 * self.truncation + 1
    }

    pub fn wavenumber(&self, index: usize) -> f64 {
        index as f64 - self.truncation as f64 + self.sector / 2.0
    }

    /// Number of eigenvalues treated as converged: 2N + 1 − 4⌈√N⌉.
    pub fn trusted_count(&self) -> usize {
        let n = self.truncation;
        let cut = 4 * (n as f64).sqrt().ceil() as usize;
        (2 * n + 1).saturating_sub(cut).max(1)
    }
}

/// Pentadiagonal matrix; `bands[r][d + 2]` holds entry (r, r + d).
#[derive(Clone, Debug, PartialEq)]
pub struct BandedMatrix {
    pub dim: usize,
    pub bands: Vec<[C64; 5]>,
}

impl BandedMatrix {
    pub fn get(&self, r: usize, c: usize) -> C64 {
        let d = c as isize - r as isize;
        if d.abs() > 2 || r >= self.dim || c >= self.dim {
            C64::new(0.0, 0.0)
        } else {
            self.bands[r][(d + 2) as usize]
        }
    }

    pub fn bandwidth(&self) -> usize {
        let mut w = 0;
        for row in &self.bands {
            for (i, x) in row.iter().enumerate() {
                if *x != C64::new(0.0, 0.0) {
                    w = w.max((i as isize - 2).unsigned_abs());
                }
            }
        }
        w
    }

    pub fn to_dense(&self) -> Mat<C64> {
        Mat::from_fn(self.dim, self.dim, |r, c| self.get(r, c))
    }
}

/// Laurent coefficients (shifts −2..2) of uᵃvᵇ in z = e^{iθ}.
fn laurent(a: u8, b: u8) -> [C64; 5] {
    let mut p = [C64::new(0.0, 0.0); 5];
    p[2] = C64::new(1.0, 0.0);
    let u = [C64::new(0.0, 0.5), C64::new(0.0, -0.5)]; // shift −1, +1
    let v = [C64::new(0.5, 0.0), C64::new(0.5, 0.0)];
    for factor in std::iter::repeat_n(u, a as usize).chain(std::iter::repeat_n(v, b as usize)) {
        let mut next = [C64::new(0.0, 0.0); 5];
        for (i, c) in p.iter().enumerate() {
            if *c == C64::new(0.0, 0.0) {
                continue;
            }
            next[i - 1] += c * factor[0];
            next[i + 1] += c * factor[1];
        }
        p = next;
    }
    p
}

/// Exact compression of the operator onto the retained modes.
pub fn build_matrix(p: &SpectralProblem) -> BandedMatrix {
    let dim = p.dim();
    let mut bands = vec![[C64::new(0.0, 0.0); 5]; dim];
    for (m, coef) in p.element.terms() {
        let (a, b, j) = m.exponents();
        let shifts = laurent(a, b);
        for col in 0..dim {
            let k = p.wavenumber(col);
            let kj = k.powi(j as i32);
            for (si, s) in shifts.iter().enumerate() {
                let d = si as isize - 2;
                let row = col as isize + d;
                if *s == C64::new(0.0, 0.0) || row < 0 || row >= dim as isize {
                    continue;
                }
                // entry (row, col) lives in band col − row = −d
                bands[row as usize][(2 - d) as usize] += coef * s * kj;
            }
        }
    }
    BandedMatrix { dim, bands }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Sorted by real part (descending when the J² coefficient is negative), ties by imaginary part.
    pub eigenvalues: Vec<C64>,
    pub reality_flags: Vec<bool>,
    pub truncation: usize,
    pub sector: f64,
    pub trusted: usize,
    pub rtol: f64,
}

impl Spectrum {
    pub fn trusted_values(&self) -> &[C64] {
        &self.eigenvalues[..self.trusted]
    }

    pub fn lowest(&self, count: usize) -> &[C64] {
        &self.eigenvalues[..count.min(self.trusted)]
    }

    pub fn is_real(&self, count: usize) -> bool {
        self.reality_flags[..count.min(self.trusted)].iter().all(|f| *f)
    }

    pub fn max_abs_im(&self, count: usize) -> f64 {
        self.lowest(count).iter().map(|e| e.im.abs()).fold(0.0, f64::max)
    }
}

pub fn is_real_value(e: C64, rtol: f64) -> bool {
    e.im.abs() <= rtol * e.re.abs().max(1.0)
}

pub(crate) fn eig_values(m: &Mat<C64>) -> Result<Vec<C64>> {
    m.eigenvalues().map_err(|e| Error::ConvergenceFailure(format!("{e:?}")))
}

pub(crate) fn eig_full(m: &Mat<C64>) -> Result<(Vec<C64>, Mat<C64>)> {
    let evd = m.eigen().map_err(|e| Error::ConvergenceFailure(format!("{e:?}")))?;
    let values: Vec<C64> = evd.S().column_vector().iter().copied().collect();
    Ok((values, evd.U().to_owned()))
}

fn ordering(element: &E2Element) -> f64 {
    if element.coeff(Monomial::JJ).re < 0.0 {
        -1.0
    } else {
        1.0
    }
}

fn sorted_permutation(values: &[C64], sign: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| {
        (sign * values[a].re)
            .total_cmp(&(sign * values[b].re))
            .then(values[a].im.total_cmp(&values[b].im))
    });
    idx
}

fn make_spectrum(p: &SpectralProblem, values: Vec<C64>, rtol: f64) -> Spectrum {
    let reality_flags = values.iter().map(|e| is_real_value(*e, rtol)).collect();
    Spectrum {
        eigenvalues: values,
        reality_flags,
        truncation: p.truncation,
        sector: p.sector,
        trusted: p.trusted_count(),
        rtol,
    }
}

pub fn eigen_spectrum(p: &SpectralProblem) -> Result<Spectrum> {
    eigen_spectrum_with(p, DEFAULT_RTOL)
}

pub fn eigen_spectrum_with(p: &SpectralProblem, rtol: f64) -> Result<Spectrum> {
    if p.truncation < 4 {
        return Err(Error::InvalidInput("truncation must be at least 4".into()));
    }
    let values = eig_values(&build_matrix(p).to_dense())?;
    let perm = sorted_permutation(&values, ordering(&p.element));
    Ok(make_spectrum(p, perm.iter().map(|&i| values[i]).collect(), rtol))
}

/// Spectrum plus eigenvectors (columns in the same order), each of unit Euclidean norm.
pub fn eigen_decomposition(p: &SpectralProblem) -> Result<(Spectrum, Vec<Vec<C64>>)> {
    if p.truncation < 4 {
        return Err(Error::InvalidInput("truncation must be at least 4".into()));
    }
    let (values, u) = eig_full(&build_matrix(p).to_dense())?;
    let perm = sorted_permutation(&values, ordering(&p.element));
    let vectors = perm
        .iter()
        .map(|&c| {
            let col: Vec<C64> = (0..u.nrows()).map(|r| u[(r, c)]).collect();
            let norm = col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            col.into_iter().map(|x| x / norm).collect()
        })
        .collect();
    let spectrum = make_spectrum(p, perm.iter().map(|&i| values[i]).collect(), DEFAULT_RTOL);
    Ok((spectrum, vectors))
}

/// Closed-form levels of the constrained PT1 family: μ1(k² − μ3²/μ1²), k = n or n + ½.
pub fn pt1_closed_spectrum(mu1: f64, mu3: f64, n: i64, statistics: Statistics) -> Result<f64> {
    if mu1 == 0.0 {
        return Err(Error::DegenerateCouplings("mu1 = 0".into()));
    }
    let n = n as f64;
    let k2 = match statistics {
        Statistics::Bosonic => n * n,
        Statistics::Fermionic => n * n + n + 0.25,
    };
    Ok(mu1 * (k2 - mu3 * mu3 / (mu1 * mu1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyson::{pt5_three_param_element, free_params, hermitize};
    use crate::algebra::PtSymmetryE2;

    fn jj() -> E2Element {
        E2Element::monomial(Monomial::JJ)
    }

    #[test]
    fn kinetic_term_is_diagonal() {
        for (s, shift) in [(0.0, 0.0), (1.0, 0.5)] {
            let m = build_matrix(&SpectralProblem::new(jj(), s, 6));
            for r in 0..m.dim {
                let k = r as f64 - 6.0 + shift;
                assert_eq!(m.get(r, r), C64::new(k * k, 0.0));
            }
            assert_eq!(m.bandwidth(), 0);
        }
    }

    #[test]
    fn cos2theta_couples_distance_two() {
        let q = 0.37;
        let el = (E2Element::monomial(Monomial::VV) - E2Element::monomial(Monomial::UU)) * C64::new(0.0, 2.0 * q);
        let m = build_matrix(&SpectralProblem::new(el, 0.0, 8));
        assert_eq!(m.bandwidth(), 2);
        for r in 0..m.dim - 2 {
            assert!((m.get(r, r + 2) - C64::new(0.0, q)).norm() < 1e-15);
            assert!((m.get(r + 2, r) - C64::new(0.0, q)).norm() < 1e-15);
            assert!(m.get(r, r + 1).norm() < 1e-15 && m.get(r, r).norm() < 1e-15);
        }
    }

    #[test]
    fn pt1_levels() {
        let r = hermitize(PtSymmetryE2::PT1, &free_params([("lambda", 0.3), ("mu1", 1.0), ("mu3", 0.4), ("mu4", 0.7)])).unwrap();
        let sp = eigen_spectrum(&SpectralProblem::new(r.original(), 0.0, 64)).unwrap();
        let expected = [-0.16, 0.84, 0.84, 3.84, 3.84];
        for (e, x) in sp.lowest(5).iter().zip(expected) {
            assert!((e.re - x).abs() < 1e-10 && e.im.abs() < 1e-10, "{e}");
        }
        assert_eq!(pt1_closed_spectrum(1.0, 0.0, 2, Statistics::Bosonic).unwrap(), 4.0);
        assert!((pt1_closed_spectrum(1.0, 0.4, 0, Statistics::Bosonic).unwrap() + 0.16).abs() < 1e-15);
        assert_eq!(pt1_closed_spectrum(2.0, 1.0, 1, Statistics::Fermionic).unwrap(), 4.0);
    }

    #[test]
    fn pt5_family_reality() {
        let real = eigen_spectrum(&SpectralProblem::new(pt5_three_param_element(0.5, 0.7, 0.0), 0.0, 64)).unwrap();
        assert!(real.is_real(20));
        let broken = eigen_spectrum(&SpectralProblem::new(pt5_three_param_element(2.0, 1.0, 4.0), 0.0, 64)).unwrap();
        assert!(!broken.is_real(20));
    }

    #[test]
    fn trusted_count_default() {
        assert_eq!(SpectralProblem::new(jj(), 0.0, 64).trusted_count(), 97);
    }
}
