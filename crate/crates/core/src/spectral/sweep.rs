//! Parameter sweeps with level tracking, and exceptional-point bisection.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{eigen_spectrum_with, is_real_value, SpectralProblem, Spectrum, DEFAULT_RTOL, DEFAULT_TRUNCATION};
use crate::algebra::{build_hamiltonian, E2Element, PtSymmetryE2};
use crate::dyson::pt5_three_param_element;
use crate::error::{Error, Result};

/// Hamiltonian families that can be swept.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Family {
    /// `build_hamiltonian(symmetry, mu)`.
    General { symmetry: PtSymmetryE2, mu: [f64; 9] },
    /// J² − iμ3{v,J} − μ4{u,J} + μ7u².
    Pt5ThreeParam { mu3: f64, mu4: f64, mu7: f64 },
    /// The PT5 family whose eigenfunctions are complex Mathieu functions in θ/2:
    /// μ1 = 1, μ2 = 0, μ3 = −μ6/2, μ5 = −μ4, μ7 = μ4²/4, μ8 = −μ6²/4, μ9 = −μ4μ6/2.
    Pt5ComplexMathieu { mu4: f64, mu6: f64 },
    /// A fixed element; only the sector can be swept.
    Element(E2Element),
}

pub fn pt5_complex_mathieu_mu(mu4: f64, mu6: f64) -> [f64; 9] {
    [1.0, 0.0, -mu6 / 2.0, mu4, -mu4, mu6, mu4 * mu4 / 4.0, -mu6 * mu6 / 4.0, -mu4 * mu6 / 2.0]
}

impl Family {
    pub fn element(&self) -> E2Element {
        match self {
            Family::General { symmetry, mu } => build_hamiltonian(*symmetry, *mu),
            Family::Pt5ThreeParam { mu3, mu4, mu7 } => pt5_three_param_element(*mu3, *mu4, *mu7),
            Family::Pt5ComplexMathieu { mu4, mu6 } => {
                build_hamiltonian(PtSymmetryE2::PT5, pt5_complex_mathieu_mu(*mu4, *mu6))
            }
            Family::Element(e) => *e,
        }
    }

    /// Replaces coupling μ_index (1-based).
    pub fn with_mu(&self, index: usize, value: f64) -> Result<Family> {
        let bad = || Error::InvalidInput(format!("mu{index} is not a parameter of this family"));
        Ok(match self.clone() {
            Family::General { symmetry, mut mu } => {
                if !(1..=9).contains(&index) {
                    return Err(bad());
                }
                mu[index - 1] = value;
                Family::General { symmetry, mu }
            }
            Family::Pt5ThreeParam { mu3, mu4, mu7 } => match index {
                3 => Family::Pt5ThreeParam { mu3: value, mu4, mu7 },
                4 => Family::Pt5ThreeParam { mu3, mu4: value, mu7 },
                7 => Family::Pt5ThreeParam { mu3, mu4, mu7: value },
                _ => return Err(bad()),
            },
            Family::Pt5ComplexMathieu { mu4, mu6 } => match index {
                4 => Family::Pt5ComplexMathieu { mu4: value, mu6 },
                6 => Family::Pt5ComplexMathieu { mu4, mu6: value },
                _ => return Err(bad()),
            },
            Family::Element(_) => return Err(bad()),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    /// 1-based coupling index.
    Mu(usize),
    Sector,
}

impl std::str::FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "s" || s == "sector" {
            return Ok(Axis::Sector);
        }
        s.strip_prefix("mu")
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|i| (1..=9).contains(i))
            .map(Axis::Mu)
            .ok_or_else(|| Error::InvalidInput(format!("unknown sweep axis {s:?}")))
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::Mu(i) => write!(f, "mu{i}"),
            Axis::Sector => write!(f, "s"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTemplate {
    pub family: Family,
    pub sector: f64,
    pub truncation: usize,
}

impl SweepTemplate {
    pub fn new(family: Family) -> Self {
        Self { family, sector: 0.0, truncation: DEFAULT_TRUNCATION }
    }

    pub fn with_sector(mut self, sector: f64) -> Self {
        self.sector = sector;
        self
    }

    pub fn with_truncation(mut self, truncation: usize) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn problem(&self) -> SpectralProblem {
        SpectralProblem::new(self.family.element(), self.sector, self.truncation)
    }

    pub fn problem_at(&self, axis: Axis, value: f64) -> Result<SpectralProblem> {
        Ok(match axis {
            Axis::Sector => SpectralProblem::new(self.family.element(), value, self.truncation),
            Axis::Mu(i) => SpectralProblem::new(self.family.with_mu(i, value)?.element(), self.sector, self.truncation),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    /// Number of lowest levels tracked and inspected for reality.
    pub levels: usize,
    pub rtol: f64,
    /// Levels closer than this (relative to max(1, |E|)) are interchangeable when tracking.
    pub cluster_tol: f64,
    pub max_halvings: u32,
    /// Absolute |Im E| below which a level counts as real when locating exceptional points.
    /// Where many doublets coalesce at once the eigensolver leaves O(√(ε‖M‖)) imaginary noise.
    pub im_floor: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { levels: 7, rtol: DEFAULT_RTOL, cluster_tol: 1e-3, max_halvings: 48, im_floor: 1e-6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub template: SweepTemplate,
    pub axis: Axis,
    pub options: SweepOptions,
    /// Axis values in increasing order, including points inserted by step halving.
    pub values: Vec<f64>,
    /// `curves[level][point]`; level labels follow the ordering at the first point.
    pub curves: Vec<Vec<C64>>,
    /// Whether any of the lowest `levels` eigenvalues is complex (above the noise floor) at each point.
    pub broken: Vec<bool>,
}

impl SweepResult {
    pub fn max_abs_im(&self) -> f64 {
        self.curves.iter().flatten().map(|e| e.im.abs()).fold(0.0, f64::max)
    }
}

struct Point {
    value: f64,
    spectrum: Spectrum,
}

fn evaluate(t: &SweepTemplate, axis: Axis, value: f64, rtol: f64) -> Result<Point> {
    let spectrum = eigen_spectrum_with(&t.problem_at(axis, value)?, rtol)?;
    Ok(Point { value, spectrum })
}

fn is_broken(sp: &Spectrum, options: &SweepOptions) -> bool {
    sp.lowest(options.levels)
        .iter()
        .any(|e| !is_real_value(*e, sp.rtol) && e.im.abs() > options.im_floor)
}

/// Assigns each tracked level to an index into `next`, matching against the predicted positions.
/// Returns `None` when a level moves by more than half the distance to its nearest neighbour.
fn match_levels(prev: &[C64], tracked: &[usize], predicted: &[C64], next: &[C64], cluster_tol: f64) -> Option<Vec<usize>> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(tracked.len() * next.len());
    for (c, p) in predicted.iter().enumerate() {
        for (j, e) in next.iter().enumerate() {
            pairs.push(((p - e).norm(), c, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut assigned = vec![usize::MAX; tracked.len()];
    let mut taken = vec![false; next.len()];
    let mut remaining = tracked.len();
    for (d, c, j) in pairs {
        if remaining == 0 {
            break;
        }
        if assigned[c] != usize::MAX || taken[j] {
            continue;
        }
        let pi = tracked[c];
        let e = prev[pi];
        let gap = prev
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != pi)
            .map(|(_, x)| (x - e).norm())
            .fold(f64::INFINITY, f64::min);
        if d > 0.5 * gap && gap > cluster_tol * e.norm().max(1.0) {
            return None;
        }
        assigned[c] = j;
        taken[j] = true;
        remaining -= 1;
    }
    Some(assigned)
}

/// Linear extrapolation of every curve to `x`.
fn predict(curves: &[Vec<C64>], values: &[f64], x: f64) -> Vec<C64> {
    let n = values.len();
    curves
        .iter()
        .map(|c| {
            if n < 2 || values[n - 1] == values[n - 2] {
                c[n - 1]
            } else {
                let slope = (c[n - 1] - c[n - 2]) / (values[n - 1] - values[n - 2]);
                c[n - 1] + slope * (x - values[n - 1])
            }
        })
        .collect()
}

/// Sweeps `axis` over `steps` equidistant values in [lo, hi] and tracks the lowest levels.
pub fn sweep(template: &SweepTemplate, axis: Axis, lo: f64, hi: f64, steps: usize, options: SweepOptions) -> Result<SweepResult> {
    if steps < 2 || !(lo < hi) {
        return Err(Error::InvalidInput("sweep needs lo < hi and at least two steps".into()));
    }
    if options.levels == 0 || options.levels > template.problem().trusted_count() {
        return Err(Error::InvalidInput("levels must lie within the trusted interior".into()));
    }
    let grid: Vec<f64> = (0..steps)
        .map(|i| if i + 1 == steps { hi } else { lo + (hi - lo) * i as f64 / (steps - 1) as f64 })
        .collect();
    let points: Vec<Point> = grid
        .par_iter()
        .map(|&x| evaluate(template, axis, x, options.rtol))
        .collect::<Result<_>>()?;

    let mut values = vec![points[0].value];
    let mut broken = vec![is_broken(&points[0].spectrum, &options)];
    let first = points[0].spectrum.trusted_values();
    let mut curves: Vec<Vec<C64>> = (0..options.levels).map(|l| vec![first[l]]).collect();
    let mut tracked: Vec<usize> = (0..options.levels).collect();
    let mut prev = points[0].spectrum.clone();

    for target in points.into_iter().skip(1) {
        // Advance from `prev` to `target`, halving the step while matching is ambiguous.
        let mut stack = vec![(target, 0u32)];
        while let Some((next, depth)) = stack.pop() {
            let predicted = predict(&curves, &values, next.value);
            match match_levels(prev.trusted_values(), &tracked, &predicted, next.spectrum.trusted_values(), options.cluster_tol) {
                Some(assigned) => {
                    let nv = next.spectrum.trusted_values();
                    for (curve, &j) in curves.iter_mut().zip(&assigned) {
                        curve.push(nv[j]);
                    }
                    tracked = assigned;
                    values.push(next.value);
                    broken.push(is_broken(&next.spectrum, &options));
                    prev = next.spectrum;
                }
                None => {
                    if depth >= options.max_halvings {
                        return Err(Error::TrackingAmbiguity { axis_value: next.value });
                    }
                    let mid = 0.5 * (values[values.len() - 1] + next.value);
                    let m = evaluate(template, axis, mid, options.rtol)?;
                    stack.push((next, depth + 1));
                    stack.push((m, depth + 1));
                }
            }
        }
    }
    Ok(SweepResult { template: template.clone(), axis, options, values, curves, broken })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalPoint {
    pub parameter_value: f64,
    pub energy: f64,
    /// Positions (in the ordered spectrum on the unbroken side) of the two merging levels.
    pub level_pair: (usize, usize),
    pub bracket_width: f64,
}

/// Bisects every reality transition of the sweep down to `tol` on the axis.
/// Identifies the merging pair near the broken end `b` of a bracketed transition.
/// Several pairs can break at the same parameter value (e.g. all odd Mathieu orders at q = 0), and the
/// higher ones carry Im E ~ |q|^n, so the lowest complex pair is chosen one grid step into the broken
/// region and followed back to `b`.
fn merging_pair(
    eval: &dyn Fn(f64) -> Result<Spectrum>,
    options: &SweepOptions,
    values: &[f64],
    i: usize,
    broken_at_i: bool,
    b: f64,
) -> Result<C64> {
    let probe = if broken_at_i { values.get(i + 1) } else { i.checked_sub(2).map(|k| &values[k]) };
    let start = match probe {
        Some(&x) if is_broken(&eval(x)?, options) => x,
        _ => b,
    };
    let lowest_complex = |sp: &Spectrum| {
        sp.lowest(options.levels)
            .iter()
            .copied()
            .filter(|e| !is_real_value(*e, sp.rtol) && e.im.abs() > options.im_floor)
            .min_by(|x, y| x.re.total_cmp(&y.re))
    };
    let mut pair = lowest_complex(&eval(start)?).expect("broken side has a complex level");
    const FOLLOW_STEPS: usize = 16;
    for k in 1..=FOLLOW_STEPS {
        let x = start + (b - start) * k as f64 / FOLLOW_STEPS as f64;
        let sp = eval(x)?;
        pair = sp
            .lowest(options.levels + 2)
            .iter()
            .copied()
            .min_by(|p, q| (p - pair).norm().total_cmp(&(q - pair).norm()))
            .expect("spectrum is non-empty");
    }
    Ok(pair)
}

pub fn find_exceptional_points(result: &SweepResult, tol: f64) -> Result<Vec<ExceptionalPoint>> {
    let SweepResult { template, axis, options, values, broken, .. } = result;
    let eval = |x: f64| evaluate(template, *axis, x, options.rtol).map(|p| p.spectrum);
    let mut out = Vec::new();
    for i in 1..values.len() {
        if broken[i] == broken[i - 1] {
            continue;
        }
        // `u` on the real side, `b` on the broken side
        let (mut u, mut b) = if broken[i] { (values[i - 1], values[i]) } else { (values[i], values[i - 1]) };
        while (u - b).abs() > tol {
            let mid = 0.5 * (u + b);
            if is_broken(&eval(mid)?, options) {
                b = mid;
            } else {
                u = mid;
            }
        }
        let mid = 0.5 * (u + b);
        let pair = merging_pair(&eval, options, values, i, broken[i], b)?;
        let real_side = eval(u)?;
        let mut nearest: Vec<(f64, usize)> = real_side
            .trusted_values()
            .iter()
            .enumerate()
            .map(|(k, e)| ((e.re - pair.re).abs(), k))
            .collect();
        nearest.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (l0, l1) = (nearest[0].1.min(nearest[1].1), nearest[0].1.max(nearest[1].1));
        let at_mid = eval(mid)?;
        let energy = if is_broken(&at_mid, options) {
            at_mid
                .lowest(options.levels)
                .iter()
                .filter(|e| (e.re - pair.re).abs() < 1e-2 * pair.re.abs().max(1.0))
                .max_by(|x, y| x.im.abs().total_cmp(&y.im.abs()))
                .map_or(pair.re, |e| e.re)
        } else {
            let tv = at_mid.trusted_values();
            0.5 * (tv[l0].re + tv[l1].re)
        };
        out.push(ExceptionalPoint { parameter_value: mid, energy, level_pair: (l0, l1), bracket_width: (u - b).abs() });
    }
    Ok(out)
}
