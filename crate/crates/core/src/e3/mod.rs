//! The rank-3 Euclidean algebra in the (P_z, P_±, J_z, J_±) basis.
//!
//! J_z = 2J₁, J_± = J₂ ± iJ₃, P_z = P₁, P_± = ±P₂ + iP₃. Elements are polynomials of
//! degree ≤ 2, normal ordered as P_z, P_+, P_−, J_z, J_+, J_−.

pub mod adjoint;
pub mod oracle;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use adjoint::{e3_adjoint, transform_h_tilde, DysonParamsE3, E3AdjointTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Generator3 {
    Pz,
    Pp,
    Pm,
    Jz,
    Jp,
    Jm,
}

use Generator3::*;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

impl Generator3 {
    pub const ALL: [Generator3; 6] = [Pz, Pp, Pm, Jz, Jp, Jm];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Pz => "Pz",
            Pp => "P+",
            Pm => "P-",
            Jz => "Jz",
            Jp => "J+",
            Jm => "J-",
        }
    }

    /// Coefficients over (J₁, J₂, J₃, P₁, P₂, P₃).
    pub fn cartesian(self) -> [C64; 6] {
        let mut c = [ZERO; 6];
        match self {
            Jz => c[0] = C64::new(2.0, 0.0),
            Jp => (c[1], c[2]) = (ONE, I),
            Jm => (c[1], c[2]) = (ONE, -I),
            Pz => c[3] = ONE,
            Pp => (c[4], c[5]) = (ONE, I),
            Pm => (c[4], c[5]) = (-ONE, I),
        }
        c
    }
}

/// Converts coefficients over (J₁, J₂, J₃, P₁, P₂, P₃) to (P_z, P_+, P_−, J_z, J_+, J_−).
pub fn from_cartesian(c: [C64; 6]) -> [C64; 6] {
    let half = 0.5;
    let [a1, a2, a3, b1, b2, b3] = c;
    [b1, (b2 - I * b3) * half, (-b2 - I * b3) * half, a1 * half, (a2 - I * a3) * half, (a2 + I * a3) * half]
}

/// [a, b] as coefficients over the generators.
pub fn commutator(a: Generator3, b: Generator3) -> [C64; 6] {
    let mut out = [ZERO; 6];
    let mut put = |g: Generator3, c: f64| out[g.index()] += C64::new(c, 0.0);
    match (a, b) {
        (Jz, Jp) => put(Jp, 2.0),
        (Jz, Jm) => put(Jm, -2.0),
        (Jp, Jm) => put(Jz, 1.0),
        (Jz, Pp) => put(Pp, 2.0),
        (Jz, Pm) => put(Pm, -2.0),
        (Jp, Pz) => put(Pp, -1.0),
        (Jm, Pz) => put(Pm, -1.0),
        (Jp, Pm) | (Jm, Pp) => put(Pz, -2.0),
        _ => {
            if a != b && b.index() >= 3 {
                // [b, a] is listed above when the first slot is a J
                let r = commutator(b, a);
                return r.map(|x| -x);
            }
        }
    }
    out
}

pub const MONOMIAL_COUNT: usize = 28;

/// Monomials: 1, the six generators, then ordered pairs g_a g_b with a ≤ b.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Monomial3 {
    One,
    Gen(Generator3),
    Pair(Generator3, Generator3),
}

impl Monomial3 {
    pub fn index(self) -> usize {
        match self {
            Monomial3::One => 0,
            Monomial3::Gen(g) => 1 + g.index(),
            Monomial3::Pair(a, b) => {
                let (a, b) = (a.index(), b.index());
                7 + 6 * a - a * a.saturating_sub(1) / 2 + (b - a)
            }
        }
    }

    pub fn all() -> Vec<Monomial3> {
        let mut v = vec![Monomial3::One];
        v.extend(Generator3::ALL.iter().map(|g| Monomial3::Gen(*g)));
        for (i, a) in Generator3::ALL.iter().enumerate() {
            for b in &Generator3::ALL[i..] {
                v.push(Monomial3::Pair(*a, *b));
            }
        }
        v
    }

    pub fn degree(self) -> usize {
        match self {
            Monomial3::One => 0,
            Monomial3::Gen(_) => 1,
            Monomial3::Pair(..) => 2,
        }
    }

    fn word(self) -> Vec<Generator3> {
        match self {
            Monomial3::One => vec![],
            Monomial3::Gen(g) => vec![g],
            Monomial3::Pair(a, b) => vec![a, b],
        }
    }

    pub fn label(self) -> String {
        match self {
            Monomial3::One => "1".into(),
            Monomial3::Gen(g) => g.label().into(),
            Monomial3::Pair(a, b) if a == b => format!("{}^2", a.label()),
            Monomial3::Pair(a, b) => format!("{}{}", a.label(), b.label()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct E3Element {
    coeffs: [C64; MONOMIAL_COUNT],
}

impl Default for E3Element {
    fn default() -> Self {
        Self::zero()
    }
}

impl E3Element {
    pub fn zero() -> Self {
        Self { coeffs: [ZERO; MONOMIAL_COUNT] }
    }

    pub fn one() -> Self {
        Self::term(Monomial3::One, ONE)
    }

    pub fn generator(g: Generator3) -> Self {
        Self::term(Monomial3::Gen(g), ONE)
    }

    pub fn term(m: Monomial3, c: C64) -> Self {
        let mut e = Self::zero();
        e.coeffs[m.index()] = c;
        e
    }

    /// Σ c_g g over the six generators.
    pub fn linear(c: [C64; 6]) -> Self {
        let mut e = Self::zero();
        for g in Generator3::ALL {
            e.coeffs[1 + g.index()] = c[g.index()];
        }
        e
    }

    pub fn coeffs(&self) -> &[C64; MONOMIAL_COUNT] {
        &self.coeffs
    }

    pub fn coeff(&self, m: Monomial3) -> C64 {
        self.coeffs[m.index()]
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial3, C64)> + '_ {
        Monomial3::all().into_iter().map(|m| (m, self.coeffs[m.index()])).filter(|(_, c)| *c != ZERO)
    }

    pub fn degree(&self) -> usize {
        self.terms().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Linear part as coefficients over the generators.
    pub fn linear_part(&self) -> [C64; 6] {
        std::array::from_fn(|i| self.coeffs[1 + i])
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { coeffs: self.coeffs.map(|c| c * s) }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (*self - *other).max_abs() <= tol
    }

    fn add_word(&mut self, word: &[Generator3], c: C64) {
        match *word {
            [] => self.coeffs[0] += c,
            [g] => self.coeffs[1 + g.index()] += c,
            [a, b] if a <= b => self.coeffs[Monomial3::Pair(a, b).index()] += c,
            [a, b] => {
                // ab = ba + [a, b]
                self.coeffs[Monomial3::Pair(b, a).index()] += c;
                for (k, x) in commutator(a, b).iter().enumerate() {
                    self.coeffs[1 + k] += c * x;
                }
            }
            _ => unreachable!("words are checked against degree 2"),
        }
    }

    /// Normal-ordered product; fails when a product term would exceed degree 2.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                let degree = m1.degree() + m2.degree();
                if degree > 2 {
                    return Err(Error::DegreeOverflow { degree });
                }
                let mut w = m1.word();
                w.extend(m2.word());
                out.add_word(&w, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(self.multiply(other)? - other.multiply(self)?)
    }

    /// Hermitian conjugate with J_z† = J_z, J_±† = J_∓, P_z† = P_z, P_±† = −P_∓.
    pub fn hermitian_conjugate(&self) -> Self {
        let dagger = |g: Generator3| -> (Generator3, f64) {
            match g {
                Pz => (Pz, 1.0),
                Pp => (Pm, -1.0),
                Pm => (Pp, -1.0),
                Jz => (Jz, 1.0),
                Jp => (Jm, 1.0),
                Jm => (Jp, 1.0),
            }
        };
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            let mut sign = 1.0;
            let word: Vec<Generator3> = m
                .word()
                .into_iter()
                .rev()
                .map(|g| {
                    let (h, s) = dagger(g);
                    sign *= s;
                    h
                })
                .collect();
            out.add_word(&word, c.conj() * sign);
        }
        out
    }

    pub fn hermiticity_residual(&self) -> f64 {
        (*self - self.hermitian_conjugate()).max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// Replaces each generator by a (degree ≤ 1) image and multiplies out.
    pub fn substitute(&self, image: impl Fn(Generator3) -> E3Element) -> Result<Self> {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            let mut acc = Self::one();
            for g in m.word() {
                acc = acc.multiply(&image(g))?;
            }
            out = out + acc.scale(c);
        }
        Ok(out)
    }
}

impl Add for E3Element {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { coeffs: std::array::from_fn(|i| self.coeffs[i] + rhs.coeffs[i]) }
    }
}

impl Sub for E3Element {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { coeffs: std::array::from_fn(|i| self.coeffs[i] - rhs.coeffs[i]) }
    }
}

impl Neg for E3Element {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul<C64> for E3Element {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl fmt::Display for E3Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)·{}", c.re, c.im, m.label())?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Serialized as {"basis": ..., "monomials": [labels], "coeffs": [[re, im], ...]}.
impl Serialize for E3Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            basis: &'static str,
            monomials: Vec<String>,
            coeffs: Vec<[f64; 2]>,
        }
        Repr {
            basis: E3_JSON_BASIS_TAG,
            monomials: Monomial3::all().into_iter().map(Monomial3::label).collect(),
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(s)
    }
}

pub const E3_JSON_BASIS_TAG: &str = "Pz,P+,P-,Jz,J+,J--normal";

/// The four antilinear maps, each given on (J_k, P_k) with i → −i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PtSymmetryE3 {
    PT1,
    PT2,
    PT3,
    PT4,
}

impl PtSymmetryE3 {
    pub const ALL: [PtSymmetryE3; 4] = [PtSymmetryE3::PT1, PtSymmetryE3::PT2, PtSymmetryE3::PT3, PtSymmetryE3::PT4];

    /// Image of each cartesian generator (J₁, J₂, J₃, P₁, P₂, P₃) as (target slot, sign).
    pub fn cartesian_action(self) -> [(usize, f64); 6] {
        match self {
            PtSymmetryE3::PT1 => [(0, -1.0), (1, -1.0), (2, -1.0), (3, -1.0), (4, -1.0), (5, -1.0)],
            PtSymmetryE3::PT2 => [(0, -1.0), (1, -1.0), (2, -1.0), (3, 1.0), (4, 1.0), (5, 1.0)],
            PtSymmetryE3::PT3 => [(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0), (5, 1.0), (4, 1.0)],
            PtSymmetryE3::PT4 => [(0, -1.0), (1, 1.0), (2, 1.0), (3, -1.0), (4, 1.0), (5, -1.0)],
        }
    }

    /// Image of a combined generator, as coefficients over the combined generators.
    pub fn image(self, g: Generator3) -> [C64; 6] {
        let action = self.cartesian_action();
        let mut mapped = [ZERO; 6];
        for (k, c) in g.cartesian().iter().enumerate() {
            let (t, s) = action[k];
            mapped[t] += c.conj() * s;
        }
        from_cartesian(mapped)
    }

    /// Pairs (a, b) for which the map fails to commute with the bracket.
    pub fn algebra_violations(self) -> Vec<(Generator3, Generator3)> {
        let mut out = Vec::new();
        for (i, a) in Generator3::ALL.iter().enumerate() {
            for b in &Generator3::ALL[i + 1..] {
                let lhs = apply_pt_e3(self, &E3Element::linear(commutator(*a, *b)));
                let ta = E3Element::linear(self.image(*a));
                let tb = E3Element::linear(self.image(*b));
                let rhs = ta.commutator(&tb).expect("degree 1 bracket");
                if !lhs.approx_eq(&rhs, 1e-12) {
                    out.push((*a, *b));
                }
            }
        }
        out
    }

    pub fn preserves_algebra(self) -> bool {
        self.algebra_violations().is_empty()
    }
}

impl fmt::Display for PtSymmetryE3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for PtSymmetryE3 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "PT1" => Ok(PtSymmetryE3::PT1),
            "PT2" => Ok(PtSymmetryE3::PT2),
            "PT3" => Ok(PtSymmetryE3::PT3),
            "PT4" => Ok(PtSymmetryE3::PT4),
            _ => Err(Error::InvalidInput(format!("unknown E3 symmetry {s:?}; expected PT1..PT4"))),
        }
    }
}

/// Antilinear image: conjugated coefficients times the images of each factor, reordered.
pub fn apply_pt_e3(s: PtSymmetryE3, a: &E3Element) -> E3Element {
    let mut out = E3Element::zero();
    for (m, c) in a.terms() {
        let mut acc = E3Element::one();
        for g in m.word() {
            acc = acc.multiply(&E3Element::linear(s.image(g))).expect("degree preserved");
        }
        out = out + acc.scale(c.conj());
    }
    out
}

/// μ1J+² + μ2J−² + μ3Pz² + μ4PzJ+ + μ5PzJ− + μ6J+J− + iμ7J+ + iμ8J− + iμ9Pz.
pub fn build_h_tilde_pt1(mu: [f64; 9]) -> E3Element {
    let r = |x: f64| C64::new(x, 0.0);
    let i = |x: f64| C64::new(0.0, x);
    let terms = [
        (Monomial3::Pair(Jp, Jp), r(mu[0])),
        (Monomial3::Pair(Jm, Jm), r(mu[1])),
        (Monomial3::Pair(Pz, Pz), r(mu[2])),
        (Monomial3::Pair(Pz, Jp), r(mu[3])),
        (Monomial3::Pair(Pz, Jm), r(mu[4])),
        (Monomial3::Pair(Jp, Jm), r(mu[5])),
        (Monomial3::Gen(Jp), i(mu[6])),
        (Monomial3::Gen(Jm), i(mu[7])),
        (Monomial3::Gen(Pz), i(mu[8])),
    ];
    terms.iter().fold(E3Element::zero(), |acc, (m, c)| acc + E3Element::term(*m, *c))
}
