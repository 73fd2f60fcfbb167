//! Degree-≤2 truncation of the enveloping algebra of E2 and its antilinear symmetries.
//!
//! Generators satisfy `[u, J] = iv`, `[v, J] = -iu`, `[u, v] = 0`. Elements are stored in
//! normal order (translations left of `J`) over the fixed basis
//! `[1, u, v, J, u², v², uv, uJ, vJ, J²]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Monomial {
    One,
    U,
    V,
    J,
    UU,
    VV,
    UV,
    UJ,
    VJ,
    JJ,
}

impl Monomial {
    pub const ALL: [Monomial; 10] = [
        Monomial::One,
        Monomial::U,
        Monomial::V,
        Monomial::J,
        Monomial::UU,
        Monomial::VV,
        Monomial::UV,
        Monomial::UJ,
        Monomial::VJ,
        Monomial::JJ,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Powers of (u, v, J).
    pub fn exponents(self) -> (u8, u8, u8) {
        match self {
            Monomial::One => (0, 0, 0),
            Monomial::U => (1, 0, 0),
            Monomial::V => (0, 1, 0),
            Monomial::J => (0, 0, 1),
            Monomial::UU => (2, 0, 0),
            Monomial::VV => (0, 2, 0),
            Monomial::UV => (1, 1, 0),
            Monomial::UJ => (1, 0, 1),
            Monomial::VJ => (0, 1, 1),
            Monomial::JJ => (0, 0, 2),
        }
    }

    pub fn from_exponents(a: u8, b: u8, c: u8) -> Option<Monomial> {
        Monomial::ALL.into_iter().find(|m| m.exponents() == (a, b, c))
    }

    pub fn degree(self) -> usize {
        let (a, b, c) = self.exponents();
        (a + b + c) as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Monomial::One => "1",
            Monomial::U => "u",
            Monomial::V => "v",
            Monomial::J => "J",
            Monomial::UU => "u^2",
            Monomial::VV => "v^2",
            Monomial::UV => "uv",
            Monomial::UJ => "uJ",
            Monomial::VJ => "vJ",
            Monomial::JJ => "J^2",
        }
    }
}

/// Complex linear combination of the ten normal-ordered monomials.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct E2Element {
    coeffs: [C64; 10],
}

/// Polynomial in (u, v) times J^c, keyed by exponents; used while re-ordering.
type Terms = Vec<((u8, u8, u8), C64)>;

fn push_term(terms: &mut Terms, key: (u8, u8, u8), c: C64) {
    if c == C64::new(0.0, 0.0) {
        return;
    }
    if let Some(slot) = terms.iter_mut().find(|(k, _)| *k == key) {
        slot.1 += c;
    } else {
        terms.push((key, c));
    }
}

/// Normal-orders `J^c · u^d v^e J^f` using `[J, g] = -i g'` with `u' = v`, `v' = -u`.
fn reorder(c: u8, d: u8, e: u8, f: u8) -> Terms {
    let mut terms: Terms = vec![((d, e, f), C64::new(1.0, 0.0))];
    for _ in 0..c {
        let mut next = Terms::new();
        for ((a, b, j), coef) in terms {
            // J · u^a v^b J^j = u^a v^b J^{j+1} - i (u^a v^b)' J^j
            push_term(&mut next, (a, b, j + 1), coef);
            if a > 0 {
                push_term(&mut next, (a - 1, b + 1, j), -I * coef * a as f64);
            }
            if b > 0 {
                push_term(&mut next, (a + 1, b - 1, j), I * coef * b as f64);
            }
        }
        terms = next;
    }
    terms
}

impl E2Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_coeffs(coeffs: [C64; 10]) -> Self {
        Self { coeffs }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, C64::new(1.0, 0.0))
    }

    pub fn term(m: Monomial, c: C64) -> Self {
        let mut x = Self::zero();
        x.coeffs[m.index()] = c;
        x
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::One)
    }
    pub fn u() -> Self {
        Self::monomial(Monomial::U)
    }
    pub fn v() -> Self {
        Self::monomial(Monomial::V)
    }
    pub fn j() -> Self {
        Self::monomial(Monomial::J)
    }

    /// The Casimir u² + v².
    pub fn casimir() -> Self {
        Self::monomial(Monomial::UU) + Self::monomial(Monomial::VV)
    }

    pub fn coeffs(&self) -> &[C64; 10] {
        &self.coeffs
    }

    pub fn coeff(&self, m: Monomial) -> C64 {
        self.coeffs[m.index()]
    }

    pub fn set(&mut self, m: Monomial, c: C64) {
        self.coeffs[m.index()] = c;
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, C64)> + '_ {
        Monomial::ALL
            .into_iter()
            .map(|m| (m, self.coeffs[m.index()]))
            .filter(|(_, c)| *c != C64::new(0.0, 0.0))
    }

    pub fn degree(&self) -> usize {
        self.terms().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    pub fn conj_coeffs(&self) -> Self {
        let mut out = *self;
        out.coeffs.iter_mut().for_each(|c| *c = c.conj());
        out
    }

    fn add_terms(&mut self, terms: &Terms, scale: C64) -> Result<()> {
        for &((a, b, c), coef) in terms {
            let m = Monomial::from_exponents(a, b, c).ok_or(Error::DegreeOverflow {
                degree: (a + b + c) as usize,
            })?;
            self.coeffs[m.index()] += scale * coef;
        }
        Ok(())
    }

    /// Normal-ordered product. Fails if any pair of contributing monomials exceeds degree 2.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                let degree = m1.degree() + m2.degree();
                if degree > 2 {
                    return Err(Error::DegreeOverflow { degree });
                }
                let (a, b, c) = m1.exponents();
                let (d, e, f) = m2.exponents();
                let shifted: Terms = reorder(c, d, e, f)
                    .into_iter()
                    .map(|((x, y, z), k)| ((x + a, y + b, z), k))
                    .collect();
                out.add_terms(&shifted, c1 * c2)?;
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(self.multiply(other)? - other.multiply(self)?)
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        Ok(self.multiply(other)? + other.multiply(self)?)
    }

    /// `J† = J`, `u† = u`, `v† = v`; each monomial is reversed and re-ordered.
    pub fn hermitian_conjugate(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            let (a, b, j) = m.exponents();
            let terms: Terms = reorder(j, a, b, 0);
            out.add_terms(&terms, c.conj())
                .expect("reversal of a degree-2 monomial stays in degree 2");
        }
        out
    }

    pub fn hermiticity_residual(&self) -> f64 {
        (*self - self.hermitian_conjugate()).max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (*self - *other).max_abs() <= tol
    }
}

impl Add for E2Element {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Sub for E2Element {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
        self
    }
}

impl Neg for E2Element {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul<C64> for E2Element {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for E2Element {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(C64::new(rhs, 0.0))
    }
}

impl fmt::Display for E2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i){}", c.re, c.im, if m == Monomial::One { "" } else { m.label() })?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub const JSON_BASIS_TAG: &str = "u,v,J-normal";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct E2Json {
    basis: String,
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for E2Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        E2Json {
            basis: JSON_BASIS_TAG.to_string(),
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for E2Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = E2Json::deserialize(d)?;
        if raw.basis != JSON_BASIS_TAG {
            return Err(D::Error::custom(format!("unknown basis tag {:?}", raw.basis)));
        }
        let coeffs: [[f64; 2]; 10] = raw
            .coeffs
            .try_into()
            .map_err(|v: Vec<_>| D::Error::custom(format!("expected 10 coefficients, got {}", v.len())))?;
        Ok(Self::from_coeffs(coeffs.map(|[re, im]| C64::new(re, im))))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PtSymmetryE2 {
    PT1,
    PT2,
    PT3,
    PT4,
    PT5,
}

/// Image of a translation generator: which of (u, v) it becomes and with what sign.
#[derive(Clone, Copy, Debug)]
pub struct SignedTarget {
    pub to_v: bool,
    pub sign: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct PtAction {
    pub j_sign: f64,
    pub u: SignedTarget,
    pub v: SignedTarget,
}

const fn t(to_v: bool, sign: f64) -> SignedTarget {
    SignedTarget { to_v, sign }
}

impl PtSymmetryE2 {
    pub const ALL: [PtSymmetryE2; 5] = [
        PtSymmetryE2::PT1,
        PtSymmetryE2::PT2,
        PtSymmetryE2::PT3,
        PtSymmetryE2::PT4,
        PtSymmetryE2::PT5,
    ];

    /// Signed permutation of (J, u, v); always combined with complex conjugation.
    pub fn action(self) -> PtAction {
        match self {
            PtSymmetryE2::PT1 => PtAction { j_sign: -1.0, u: t(false, -1.0), v: t(true, -1.0) },
            PtSymmetryE2::PT2 => PtAction { j_sign: -1.0, u: t(false, 1.0), v: t(true, 1.0) },
            PtSymmetryE2::PT3 => PtAction { j_sign: 1.0, u: t(true, 1.0), v: t(false, 1.0) },
            PtSymmetryE2::PT4 => PtAction { j_sign: 1.0, u: t(false, -1.0), v: t(true, 1.0) },
            PtSymmetryE2::PT5 => PtAction { j_sign: 1.0, u: t(false, 1.0), v: t(true, -1.0) },
        }
    }

    /// The induced map on θ in the circle representation, θ ↦ shift + orientation·θ.
    pub fn theta_map(self) -> (f64, f64) {
        use std::f64::consts::{FRAC_PI_2, PI};
        match self {
            PtSymmetryE2::PT1 => (PI, 1.0),
            PtSymmetryE2::PT2 => (2.0 * PI, 1.0),
            PtSymmetryE2::PT3 => (FRAC_PI_2, -1.0),
            PtSymmetryE2::PT4 => (0.0, -1.0),
            PtSymmetryE2::PT5 => (PI, -1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PtSymmetryE2::PT1 => "PT1",
            PtSymmetryE2::PT2 => "PT2",
            PtSymmetryE2::PT3 => "PT3",
            PtSymmetryE2::PT4 => "PT4",
            PtSymmetryE2::PT5 => "PT5",
        }
    }
}

impl std::str::FromStr for PtSymmetryE2 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "PT1" => Ok(PtSymmetryE2::PT1),
            "PT2" => Ok(PtSymmetryE2::PT2),
            "PT3" => Ok(PtSymmetryE2::PT3),
            "PT4" => Ok(PtSymmetryE2::PT4),
            "PT5" => Ok(PtSymmetryE2::PT5),
            other => Err(Error::InvalidInput(format!("unknown symmetry {other:?}"))),
        }
    }
}

impl fmt::Display for PtSymmetryE2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Applies the antilinear map: generators per table, coefficients conjugated.
///
/// Images of u, v commute and J keeps its place, so every monomial stays normal-ordered.
pub fn apply_pt(s: PtSymmetryE2, a: &E2Element) -> E2Element {
    let act = s.action();
    let mut out = E2Element::zero();
    for (m, c) in a.terms() {
        let (pu, pv, pj) = m.exponents();
        let mut sign = act.j_sign.powi(pj as i32);
        let (mut nu, mut nv) = (0u8, 0u8);
        for (power, target) in [(pu, act.u), (pv, act.v)] {
            sign *= target.sign.powi(power as i32);
            if target.to_v {
                nv += power;
            } else {
                nu += power;
            }
        }
        let image = Monomial::from_exponents(nu, nv, pj).expect("signed permutation preserves degree");
        out.coeffs[image.index()] += c.conj() * sign;
    }
    out
}

/// The most general PT-invariant element of degree ≤ 2 for symmetry `s`, with real couplings μ1..μ9.
pub fn build_hamiltonian(s: PtSymmetryE2, mu: [f64; 9]) -> E2Element {
    let [m1, m2, m3, m4, m5, m6, m7, m8, m9] = mu;
    let r = |x: f64| C64::new(x, 0.0);
    let i = |x: f64| C64::new(0.0, x);
    let z = C64::new(0.0, 0.0);
    // order: 1, u, v, J, u², v², uv, uJ, vJ, J²
    let coeffs = match s {
        PtSymmetryE2::PT1 => [z, i(m3), i(m4), i(m2), r(m7), r(m8), r(m9), r(m5), r(m6), r(m1)],
        PtSymmetryE2::PT2 => [z, r(m3), r(m4), i(m2), r(m7), r(m8), r(m9), i(m5), i(m6), r(m1)],
        PtSymmetryE2::PT3 => [
            z,
            C64::new(m3, m4),
            C64::new(m3, -m4),
            r(m2),
            C64::new(m8, -m7),
            C64::new(m8, m7),
            r(m9),
            C64::new(m5, m6),
            C64::new(m5, -m6),
            r(m1),
        ],
        PtSymmetryE2::PT4 => [z, i(m3), r(m4), r(m2), r(m7), r(m8), i(m9), i(m5), r(m6), r(m1)],
        PtSymmetryE2::PT5 => [z, r(m3), i(m4), r(m2), r(m7), r(m8), i(m9), r(m5), i(m6), r(m1)],
    };
    E2Element::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn j_times_u_normal_orders() {
        let p = E2Element::j().multiply(&E2Element::u()).unwrap();
        let expected = E2Element::monomial(Monomial::UJ) + E2Element::term(Monomial::V, c(0.0, -1.0));
        assert_eq!(p, expected);
    }

    #[test]
    fn j_times_v_normal_orders() {
        let p = E2Element::j().multiply(&E2Element::v()).unwrap();
        let expected = E2Element::monomial(Monomial::VJ) + E2Element::term(Monomial::U, c(0.0, 1.0));
        assert_eq!(p, expected);
    }

    #[test]
    fn u_v_commute() {
        let uv = E2Element::u().multiply(&E2Element::v()).unwrap();
        let vu = E2Element::v().multiply(&E2Element::u()).unwrap();
        assert_eq!(uv, E2Element::monomial(Monomial::UV));
        assert_eq!(uv, vu);
    }

    #[test]
    fn j_times_uj_overflows() {
        let err = E2Element::j().multiply(&E2Element::monomial(Monomial::UJ)).unwrap_err();
        assert_eq!(err, Error::DegreeOverflow { degree: 3 });
    }

    #[test]
    fn adjoint_of_uj() {
        let d = E2Element::monomial(Monomial::UJ).hermitian_conjugate();
        let expected = E2Element::monomial(Monomial::UJ) + E2Element::term(Monomial::V, c(0.0, -1.0));
        assert_eq!(d, expected);
        let iu = E2Element::term(Monomial::U, c(0.0, 1.0)).hermitian_conjugate();
        assert_eq!(iu, E2Element::term(Monomial::U, c(0.0, -1.0)));
    }

    #[test]
    fn conjugation_is_involutive_on_basis() {
        for m in Monomial::ALL {
            let x = E2Element::term(m, c(0.3, -1.7));
            assert!(x.hermitian_conjugate().hermitian_conjugate().approx_eq(&x, 0.0));
        }
    }

    #[test]
    fn hermiticity_examples() {
        let a = E2Element::monomial(Monomial::JJ) + E2Element::monomial(Monomial::UV);
        assert!(a.is_hermitian(0.0));
        let b = E2Element::monomial(Monomial::JJ) + E2Element::term(Monomial::V, c(0.0, 1.0));
        assert!(!b.is_hermitian(1e-12));
    }

    #[test]
    fn pt1_hermitian_under_constraints() {
        let (m3, m4) = (0.37, -1.2);
        let h = build_hamiltonian(PtSymmetryE2::PT1, [1.3, 0.0, m3, m4, -2.0 * m4, 2.0 * m3, 0.4, -0.9, 2.2]);
        assert!(h.is_hermitian(1e-15));
    }

    #[test]
    fn pt_examples() {
        let iv = E2Element::term(Monomial::V, c(0.0, 0.8));
        assert_eq!(apply_pt(PtSymmetryE2::PT1, &iv), iv);
        assert_eq!(apply_pt(PtSymmetryE2::PT5, &E2Element::v()), -E2Element::v());
        let iv1 = E2Element::term(Monomial::V, c(0.0, 1.0));
        assert_eq!(apply_pt(PtSymmetryE2::PT5, &iv1), iv1);
        let uj = E2Element::term(Monomial::UJ, c(0.5, 2.0));
        assert_eq!(apply_pt(PtSymmetryE2::PT3, &uj), E2Element::term(Monomial::VJ, c(0.5, -2.0)));
    }

    #[test]
    fn hamiltonian_examples() {
        let bk = build_hamiltonian(PtSymmetryE2::PT1, [1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let expected = E2Element::monomial(Monomial::JJ) + E2Element::term(Monomial::V, c(0.0, 1.0));
        assert_eq!(bk, expected);

        let q = 0.7;
        let h5 = build_hamiltonian(PtSymmetryE2::PT5, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0 * q, 0.0, 0.0]);
        assert_eq!(h5, E2Element::monomial(Monomial::JJ) + E2Element::monomial(Monomial::UU) * (2.0 * q));

        let h3 = build_hamiltonian(PtSymmetryE2::PT3, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0 * q, 0.0, 0.0]);
        let expected = E2Element::monomial(Monomial::JJ)
            + (E2Element::monomial(Monomial::VV) - E2Element::monomial(Monomial::UU)) * c(0.0, 2.0 * q);
        assert_eq!(h3, expected);
    }

    #[test]
    fn json_round_trip() {
        let x = build_hamiltonian(PtSymmetryE2::PT3, [0.1, 1.0 / 3.0, -2.5e-17, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]);
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.starts_with("{\"basis\":\"u,v,J-normal\",\"coeffs\":[["));
        let back: E2Element = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn json_rejects_wrong_basis() {
        let bad = r#"{"basis":"J-first","coeffs":[[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}"#;
        assert!(serde_json::from_str::<E2Element>(bad).is_err());
    }
}
