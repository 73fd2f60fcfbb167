//! Mathieu characteristic values and periodic Mathieu functions for complex q.
//!
//! The operator is `L y = −y'' + 2q cos(2z) y`, so `L y = a y` is Mathieu's equation with
//! characteristic value `a`. Each class is a chain of cos (even) or sin (odd) modes with
//! wavenumbers of fixed residue modulo 2.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use faer::Mat;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dyson::reduce_pt5_three_param_complex;
use crate::error::{Error, Result};
use crate::spectral::{eig_full, eig_values, Statistics};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Periodicity {
    /// Even wavenumbers: a_{2n}, b_{2n+2}.
    Pi,
    /// Odd wavenumbers: a_{2n+1}, b_{2n+1}.
    TwoPi,
    /// Wavenumbers in ½ + ℤ: solutions antiperiodic under z → z + 2π.
    HalfInteger,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MathieuClass {
    pub parity: Parity,
    pub periodicity: Periodicity,
}

impl MathieuClass {
    pub const fn new(parity: Parity, periodicity: Periodicity) -> Self {
        Self { parity, periodicity }
    }

    /// Wavenumbers of the first `size` basis functions.
    pub fn wavenumbers(&self, size: usize) -> Vec<f64> {
        let first_odd_pi = self.parity == Parity::Odd && self.periodicity == Periodicity::Pi;
        (0..size)
            .map(|i| {
                let i = i as f64;
                match self.periodicity {
                    Periodicity::Pi if first_odd_pi => 2.0 * i + 2.0,
                    Periodicity::Pi => 2.0 * i,
                    Periodicity::TwoPi => 2.0 * i + 1.0,
                    Periodicity::HalfInteger => i + 0.5,
                }
            })
            .collect()
    }

    /// Conventional order of the `index`-th value: 2n, 2n+2, 2n+1, or n for the half-integer chain.
    pub fn order(&self, index: usize) -> usize {
        match (self.periodicity, self.parity) {
            (Periodicity::Pi, Parity::Even) => 2 * index,
            (Periodicity::Pi, Parity::Odd) => 2 * index + 2,
            (Periodicity::TwoPi, _) => 2 * index + 1,
            (Periodicity::HalfInteger, _) => index,
        }
    }

    /// Class and index holding a_n (even) or b_n (odd) for integer wavenumber chains.
    pub fn for_order(parity: Parity, n: usize) -> Result<(MathieuClass, usize)> {
        match (parity, n % 2) {
            (Parity::Odd, _) if n == 0 => Err(Error::InvalidInput("b_0 does not exist".into())),
            (Parity::Even, 0) => Ok((MathieuClass::new(parity, Periodicity::Pi), n / 2)),
            (Parity::Odd, 0) => Ok((MathieuClass::new(parity, Periodicity::Pi), n / 2 - 1)),
            (_, _) => Ok((MathieuClass::new(parity, Periodicity::TwoPi), (n - 1) / 2)),
        }
    }

    pub fn label(&self) -> String {
        let p = match self.parity {
            Parity::Even => "even",
            Parity::Odd => "odd",
        };
        let q = match self.periodicity {
            Periodicity::Pi => "pi",
            Periodicity::TwoPi => "2pi",
            Periodicity::HalfInteger => "half",
        };
        format!("{p}-{q}")
    }
}

impl std::str::FromStr for MathieuClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let (p, q) = lower
            .split_once('-')
            .ok_or_else(|| Error::InvalidInput(format!("class {s:?} must look like even-pi")))?;
        let parity = match p {
            "even" => Parity::Even,
            "odd" => Parity::Odd,
            _ => return Err(Error::InvalidInput(format!("unknown parity {p:?}"))),
        };
        let periodicity = match q {
            "pi" => Periodicity::Pi,
            "2pi" => Periodicity::TwoPi,
            "half" => Periodicity::HalfInteger,
            _ => return Err(Error::InvalidInput(format!("unknown periodicity {q:?}"))),
        };
        Ok(MathieuClass { parity, periodicity })
    }
}

/// Basis function normalization: the k = 0 cosine is 1/√2 so that the matrix is complex symmetric.
fn basis_weight(k: f64) -> f64 {
    if k == 0.0 {
        FRAC_1_SQRT_2
    } else {
        1.0
    }
}

/// Truncated recurrence matrix of L for the class.
pub fn class_matrix(q: C64, cls: MathieuClass, size: usize) -> Mat<C64> {
    let ks = cls.wavenumbers(size);
    let index_of = |k: f64| ks.iter().position(|x| (x - k).abs() < 1e-9);
    let mut m = Mat::<C64>::zeros(size, size);
    for (j, &k) in ks.iter().enumerate() {
        m[(j, j)] += C64::new(k * k, 0.0);
        // L f_k = k² f_k + q (f_{k+2} + f_{k−2}) with f_{−k} = ±f_k
        for target in [k + 2.0, k - 2.0] {
            let (t, sign) = if target < 0.0 {
                (-target, if cls.parity == Parity::Odd { -1.0 } else { 1.0 })
            } else {
                (target, 1.0)
            };
            if cls.parity == Parity::Odd && t == 0.0 {
                continue;
            }
            if let Some(i) = index_of(t) {
                // cos 0 = √2 · (1/√2); 1/√2 = (1/√2) · cos 0
                let w = basis_weight(k) / basis_weight(t);
                m[(i, j)] += q * (sign * w);
            }
        }
    }
    m
}

fn sort_by_real(values: &mut [C64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Characteristic values from a single truncation, without the convergence check.
pub fn characteristic_values_at(q: C64, cls: MathieuClass, count: usize, trunc: usize) -> Result<Vec<C64>> {
    let mut v = eig_values(&class_matrix(q, cls, trunc))?;
    sort_by_real(&mut v);
    v.truncate(count);
    Ok(v)
}

pub const CONVERGENCE_TOL: f64 = 1e-10;
const MAX_TRUNCATION: usize = 4096;

/// First `count` characteristic values ordered by real part, checked by doubling the truncation.
pub fn characteristic_values(q: C64, cls: MathieuClass, count: usize, trunc: usize) -> Result<Vec<C64>> {
    if trunc < count + 8 {
        return Err(Error::InvalidInput(format!("truncation {trunc} must be at least count + 8 = {}", count + 8)));
    }
    let mut t = trunc;
    // two spare values so a pair straddling the cut still finds its partner
    let mut current = characteristic_values_at(q, cls, count + 2, t)?;
    while t < MAX_TRUNCATION {
        let next = characteristic_values_at(q, cls, count + 2, 2 * t)?;
        // nearest-neighbour comparison: conjugate pairs with equal real parts may swap order
        let converged = current[..count].iter().all(|a| {
            next.iter().map(|b| (a - b).norm()).fold(f64::INFINITY, f64::min) <= CONVERGENCE_TOL * a.norm().max(1.0)
        });
        if converged {
            let mut out = next;
            out.truncate(count);
            return Ok(out);
        }
        current = next;
        t *= 2;
    }
    Err(Error::ConvergenceFailure(format!("characteristic values for q = {q} did not settle below truncation {MAX_TRUNCATION}")))
}

/// Truncation that comfortably resolves eigenvectors with |a| up to ~ (count + √|q|)².
pub fn default_truncation(q: C64, count: usize) -> usize {
    count + 24 + (6.0 * q.norm().sqrt()).ceil() as usize
}

/// A periodic Mathieu function as a cosine or sine series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MathieuFunction {
    pub q: C64,
    pub a: C64,
    pub class: MathieuClass,
    pub wavenumbers: Vec<f64>,
    /// Coefficients of the normalized basis (1/√2 for the constant term).
    pub coeffs: Vec<C64>,
}

impl MathieuFunction {
    /// Normalized so that ∫₀^{2π} |y|² dz = π, with the largest coefficient real and positive.
    pub fn new(q: C64, a: C64, class: MathieuClass) -> Result<Self> {
        let size = default_truncation(q, 8) + (a.norm().sqrt() * 2.0).ceil() as usize;
        let (values, vectors) = eig_full(&class_matrix(q, class, size))?;
        let (best, dist) = values
            .iter()
            .enumerate()
            .map(|(i, v)| (i, (v - a).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty");
        if dist > 1e-6 * a.norm().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "a = {a} is not a characteristic value of class {} at q = {q} (nearest differs by {dist:.3e})",
                class.label()
            )));
        }
        let mut coeffs: Vec<C64> = (0..size).map(|r| vectors[(r, best)]).collect();
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let pivot = *coeffs.iter().max_by(|x, y| x.norm().total_cmp(&y.norm())).expect("non-empty");
        let phase = pivot.conj() / pivot.norm();
        coeffs.iter_mut().for_each(|c| *c *= phase / norm);
        Ok(Self { q, a: values[best], class, wavenumbers: class.wavenumbers(size), coeffs })
    }

    pub fn eval(&self, z: f64) -> C64 {
        self.wavenumbers
            .iter()
            .zip(&self.coeffs)
            .map(|(k, c)| {
                let f = match self.class.parity {
                    Parity::Even => (k * z).cos() * basis_weight(*k),
                    Parity::Odd => (k * z).sin(),
                };
                c * f
            })
            .sum()
    }

    /// (wavenumber, amplitude) pairs of the same function written as Σ c e^{ikz}.
    pub fn exponential_modes(&self) -> Vec<(f64, C64)> {
        let mut out = Vec::with_capacity(2 * self.coeffs.len());
        for (k, c) in self.wavenumbers.iter().zip(&self.coeffs) {
            match self.class.parity {
                Parity::Even if *k == 0.0 => out.push((0.0, c * FRAC_1_SQRT_2)),
                Parity::Even => {
                    out.push((*k, c * 0.5));
                    out.push((-k, c * 0.5));
                }
                Parity::Odd => {
                    out.push((*k, c * C64::new(0.0, -0.5)));
                    out.push((-k, c * C64::new(0.0, 0.5)));
                }
            }
        }
        out
    }
}

/// Samples of the periodic Mathieu function of class `cls` with characteristic value `a`.
pub fn mathieu_function(q: C64, a: C64, cls: MathieuClass, z: &[f64]) -> Result<Vec<C64>> {
    let f = MathieuFunction::new(q, a, cls)?;
    Ok(z.iter().map(|&x| f.eval(x)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MathieuEp {
    /// q = i·q_imag at the collision.
    pub q_imag: f64,
    pub a_merge: f64,
    /// Orders of the two colliding characteristic values.
    pub orders: (usize, usize),
    pub bracket_width: f64,
}

const EP_IM_TOL: f64 = 1e-9;

fn complex_count(values: &[C64]) -> usize {
    values.iter().filter(|v| v.im.abs() > EP_IM_TOL * v.re.abs().max(1.0)).count()
}

/// Collisions of same-class characteristic values along q = i t, t ∈ (0, max_q].
pub fn complex_mathieu_eps(max_q: f64, cls: MathieuClass) -> Result<Vec<MathieuEp>> {
    complex_mathieu_eps_with(max_q, cls, 1e-2, 1e-10)
}

pub fn complex_mathieu_eps_with(max_q: f64, cls: MathieuClass, scan_step: f64, tol: f64) -> Result<Vec<MathieuEp>> {
    if !(max_q > 0.0) {
        return Err(Error::InvalidInput("max_q must be positive".into()));
    }
    let trunc = default_truncation(C64::new(0.0, max_q), 16) + 16;
    // only values well inside the truncation are inspected
    let window = trunc / 2;
    let eval = |t: f64| characteristic_values_at(C64::new(0.0, t), cls, window, trunc);
    let steps = (max_q / scan_step).ceil() as usize;
    let grid: Vec<f64> = (0..=steps).map(|i| (i as f64 * scan_step).min(max_q)).collect();
    let counts: Vec<usize> = grid.par_iter().map(|&t| eval(t).map(|v| complex_count(&v))).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for i in 1..grid.len() {
        if counts[i] <= counts[i - 1] {
            continue;
        }
        let (mut lo, mut hi) = (grid[i - 1], grid[i]);
        let base = counts[i - 1];
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if complex_count(&eval(mid)?) > base {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mid = 0.5 * (lo + hi);
        let after = eval(hi)?;
        // the newest pair has the smallest imaginary part among complex values
        let pair = after
            .iter()
            .filter(|v| v.im.abs() > EP_IM_TOL * v.re.abs().max(1.0))
            .min_by(|x, y| x.im.abs().total_cmp(&y.im.abs()))
            .copied()
            .expect("count increased");
        let before = eval(lo)?;
        let mut near: Vec<(f64, usize)> = before.iter().enumerate().map(|(k, v)| ((v.re - pair.re).abs(), k)).collect();
        near.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (i0, i1) = (near[0].1.min(near[1].1), near[0].1.max(near[1].1));
        let at_mid = eval(mid)?;
        let a_merge = 0.5 * (at_mid[i0].re + at_mid[i1].re);
        out.push(MathieuEp { q_imag: mid, a_merge, orders: (cls.order(i0), cls.order(i1)), bracket_width: hi - lo });
    }
    Ok(out)
}

/// The Mathieu form of the three-parameter PT5 family: E = a(q) + shift, where the gauge
/// φ = e^{−iα cos θ} ψ maps h = J² + α{u,J} + βu² + γ to Mathieu's operator in θ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pt5MathieuRoute {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub lambda: C64,
    /// (α² − β)/4
    pub q: C64,
    /// γ − (α² − β)/2
    pub shift: C64,
}

pub fn pt5_mathieu_route(mu3: f64, mu4: f64, mu7: f64) -> Result<Pt5MathieuRoute> {
    let r = reduce_pt5_three_param_complex(mu3, mu4, mu7)?;
    let d = r.alpha * r.alpha - r.beta;
    Ok(Pt5MathieuRoute { alpha: r.alpha, beta: r.beta, gamma: r.gamma, lambda: r.lambda, q: d / 4.0, shift: r.gamma - d / 2.0 })
}

/// Classes in θ contributing to a sector: integer chains for bosons, the half-integer chain for fermions.
pub fn classes_for(statistics: Statistics, parity: Option<Parity>) -> Vec<MathieuClass> {
    let parities: Vec<Parity> = parity.map_or(vec![Parity::Even, Parity::Odd], |p| vec![p]);
    let periodicities = match statistics {
        Statistics::Bosonic => vec![Periodicity::Pi, Periodicity::TwoPi],
        Statistics::Fermionic => vec![Periodicity::HalfInteger],
    };
    parities
        .iter()
        .flat_map(|&p| periodicities.iter().map(move |&t| MathieuClass::new(p, t)))
        .collect()
}

/// Lowest `count` energies of the three-parameter family via Mathieu characteristic values.
pub fn pt5_mathieu_levels(mu3: f64, mu4: f64, mu7: f64, statistics: Statistics, parity: Option<Parity>, count: usize) -> Result<Vec<C64>> {
    let route = pt5_mathieu_route(mu3, mu4, mu7)?;
    let trunc = default_truncation(route.q, count) + count;
    let mut all = Vec::new();
    for cls in classes_for(statistics, parity) {
        for a in characteristic_values(route.q, cls, count, trunc)? {
            all.push(a + route.shift);
        }
    }
    sort_by_real(&mut all);
    all.truncate(count);
    Ok(all)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntensityProfile {
    pub theta: Vec<f64>,
    /// |ψ_even|² and |ψ_odd|², each normalized to unit mean over [0, 2π).
    pub even: Vec<f64>,
    pub odd: Vec<f64>,
    pub energy_even: C64,
    pub energy_odd: C64,
}

impl IntensityProfile {
    pub fn sum(&self) -> Vec<f64> {
        self.even.iter().zip(&self.odd).map(|(a, b)| a + b).collect()
    }

    /// |ψ_even|² + |ψ_odd|² − |ψ_even(0)|².
    pub fn shifted_sum(&self) -> Vec<f64> {
        let e0 = self.even[0];
        self.sum().into_iter().map(|x| x - e0).collect()
    }
}

/// Intensities of the even/odd eigenfunctions of order `n` (a_n and b_n) for the bosonic
/// three-parameter family, in the Mathieu frame (gauge factor stripped).
/// `points` samples θ uniformly on [0, 2π), starting at θ = 0.
pub fn pt5_intensity(mu3: f64, mu4: f64, mu7: f64, n: usize, points: usize) -> Result<IntensityProfile> {
    if n == 0 {
        return Err(Error::InvalidInput("order must be at least 1 to pair a_n with b_n".into()));
    }
    let route = pt5_mathieu_route(mu3, mu4, mu7)?;
    let trunc = default_truncation(route.q, n + 2) + 2 * n;
    let theta: Vec<f64> = (0..points).map(|i| 2.0 * PI * i as f64 / points as f64).collect();
    let mut parts = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let (cls, idx) = MathieuClass::for_order(parity, n)?;
        let a = characteristic_values(route.q, cls, idx + 1, trunc.max(idx + 9))?[idx];
        let f = MathieuFunction::new(route.q, a, cls)?;
        let raw: Vec<f64> = theta.iter().map(|&t| f.eval(t).norm_sqr()).collect();
        let mean = raw.iter().sum::<f64>() / raw.len() as f64;
        parts.push((raw.into_iter().map(|x| x / mean).collect::<Vec<_>>(), a + route.shift));
    }
    let (odd, energy_odd) = parts.pop().expect("two parts");
    let (even, energy_even) = parts.pop().expect("two parts");
    Ok(IntensityProfile { theta, even, odd, energy_even, energy_odd })
}

/// Best point symmetry of a sampled periodic profile: min over θ0 on the grid of
/// (max − min)/mean of I(θ) + I(2θ0 − θ). Returns (deviation, θ0).
pub fn point_symmetry_deviation(profile: &[f64]) -> (f64, f64) {
    let n = profile.len();
    let mut best = (f64::INFINITY, 0.0);
    for s in 0..n {
        // reflection index: θ_j ↦ θ_{s − j}, i.e. 2θ0 = θ_s
        let g: Vec<f64> = (0..n).map(|j| profile[j] + profile[(s + n - j) % n]).collect();
        let (lo, hi) = g.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(*x), b.max(*x)));
        let mean = g.iter().sum::<f64>() / n as f64;
        let dev = (hi - lo) / mean.abs();
        if dev < best.0 {
            best = (dev, PI * s as f64 / n as f64);
        }
    }
    best
}

/// ψ(θ) = e^{−iμ4/2 cos θ + μ6/2 sin θ} [c1 C(4E, iμ4, θ/2) + c2 S(4E, iμ4, θ/2)].
///
/// Nonzero c1 (c2) requires 4E to be an even (odd) characteristic value at q = iμ4; π-periodic
/// classes in θ/2 give bosonic, 2π-periodic classes fermionic states.
pub fn pt5_complex_solution(mu4: f64, mu6: f64, energy: C64, c1: C64, c2: C64, theta: &[f64]) -> Result<Vec<C64>> {
    let q = C64::new(0.0, mu4);
    let a = energy * 4.0;
    let pick = |parity: Parity| -> Result<MathieuFunction> {
        let mut last = None;
        for periodicity in [Periodicity::Pi, Periodicity::TwoPi] {
            match MathieuFunction::new(q, a, MathieuClass::new(parity, periodicity)) {
                Ok(f) => return Ok(f),
                Err(e) => last = Some(e),
            }
        }
        Err(last.expect("tried two classes"))
    };
    let zero = C64::new(0.0, 0.0);
    let fc = if c1 != zero { Some(pick(Parity::Even)?) } else { None };
    let fs = if c2 != zero { Some(pick(Parity::Odd)?) } else { None };
    Ok(theta
        .iter()
        .map(|&t| {
            let gauge = C64::new(mu6 / 2.0 * t.sin(), -mu4 / 2.0 * t.cos()).exp();
            let z = t / 2.0;
            let body = fc.as_ref().map_or(zero, |f| c1 * f.eval(z)) + fs.as_ref().map_or(zero, |f| c2 * f.eval(z));
            gauge * body
        })
        .collect())
}

/// Energies of the complex-Mathieu PT5 family from Mathieu values: E = a(iμ4)/4.
pub fn pt5_complex_levels(mu4: f64, statistics: Statistics, parity: Option<Parity>, count: usize) -> Result<Vec<C64>> {
    let q = C64::new(0.0, mu4);
    let periodicity = match statistics {
        Statistics::Bosonic => Periodicity::Pi,
        Statistics::Fermionic => Periodicity::TwoPi,
    };
    let parities: Vec<Parity> = parity.map_or(vec![Parity::Even, Parity::Odd], |p| vec![p]);
    let trunc = default_truncation(q, count) + count;
    let mut all = Vec::new();
    for p in parities {
        for a in characteristic_values(q, MathieuClass::new(p, periodicity), count, trunc)? {
            all.push(a / 4.0);
        }
    }
    sort_by_real(&mut all);
    all.truncate(count);
    Ok(all)
}
