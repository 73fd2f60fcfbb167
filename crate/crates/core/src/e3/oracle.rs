//! 4×4 defining representation: J_k = i L_k with (L_k)_{ab} = −ε_{kab} on the rotation block,
//! P_k = i E_{k4}. These satisfy [J_j, J_k] = iε_{jkl}J_l, [J_j, P_k] = iε_{jkl}P_l, [P_j, P_k] = 0.

use nalgebra::Matrix4;
use num_complex::Complex64 as C64;

use super::adjoint::DysonParamsE3;
use super::{from_cartesian, E3Element, Generator3, Monomial3};

pub type M4 = Matrix4<C64>;

const I: C64 = C64::new(0.0, 1.0);

fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    ((a as i64 - b as i64) * (b as i64 - c as i64) * (c as i64 - a as i64)) as f64 / 2.0
}

/// (J₁, J₂, J₃, P₁, P₂, P₃) as 4×4 matrices.
pub fn cartesian_matrices() -> [M4; 6] {
    std::array::from_fn(|g| {
        let mut m = M4::zeros();
        if g < 3 {
            for a in 0..3 {
                for b in 0..3 {
                    m[(a, b)] = I * -levi_civita(g, a, b);
                }
            }
        } else {
            m[(g - 3, 3)] = I;
        }
        m
    })
}

pub fn generator_matrix(g: Generator3) -> M4 {
    let basis = cartesian_matrices();
    g.cartesian().iter().zip(basis.iter()).fold(M4::zeros(), |acc, (c, m)| acc + m * *c)
}

/// Representation of an element; faithful on the Lie algebra, a homomorphism on products.
pub fn represent(e: &E3Element) -> M4 {
    let mut out = M4::zeros();
    for (m, c) in e.terms() {
        let mat = match m {
            Monomial3::One => M4::identity(),
            Monomial3::Gen(g) => generator_matrix(g),
            Monomial3::Pair(a, b) => generator_matrix(a) * generator_matrix(b),
        };
        out += mat * c;
    }
    out
}

/// Reads a Lie-algebra matrix back as coefficients over (P_z, P_+, P_−, J_z, J_+, J_−).
pub fn decompose(m: &M4) -> [C64; 6] {
    // (L₁)_{23} = (L₂)_{31} = (L₃)_{12} = −1
    let cart = [I * m[(1, 2)], I * m[(2, 0)], I * m[(0, 1)], -I * m[(0, 3)], -I * m[(1, 3)], -I * m[(2, 3)]];
    from_cartesian(cart)
}

pub fn dyson_exponent(p: &DysonParamsE3) -> M4 {
    let r = |x: f64| C64::new(x, 0.0);
    generator_matrix(Generator3::Jz) * r(p.lambda_z)
        + generator_matrix(Generator3::Jp) * r(p.lambda_plus)
        + generator_matrix(Generator3::Jm) * r(p.lambda_minus)
        + generator_matrix(Generator3::Pz) * r(p.kappa_z)
        + generator_matrix(Generator3::Pp) * r(p.kappa_plus)
        + generator_matrix(Generator3::Pm) * r(p.kappa_minus)
}

/// exp(X) G exp(−X) decomposed over the generators.
pub fn adjoint_oracle(p: &DysonParamsE3, g: Generator3) -> [C64; 6] {
    let x = dyson_exponent(p);
    let (e, ei) = (x.exp(), (-x).exp());
    decompose(&(e * generator_matrix(g) * ei))
}

/// exp(X) R(H) exp(−X) for any element.
pub fn conjugate_oracle(p: &DysonParamsE3, h: &E3Element) -> M4 {
    let x = dyson_exponent(p);
    x.exp() * represent(h) * (-x).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::e3::commutator;

    #[test]
    fn structure_constants_match_the_matrices() {
        for a in Generator3::ALL {
            for b in Generator3::ALL {
                let (ma, mb) = (generator_matrix(a), generator_matrix(b));
                let lhs = ma * mb - mb * ma;
                let rhs = represent(&E3Element::linear(commutator(a, b)));
                assert!((lhs - rhs).norm() < 1e-14, "[{a:?}, {b:?}]");
            }
        }
    }

    #[test]
    fn decompose_inverts_represent() {
        for g in Generator3::ALL {
            let c = decompose(&generator_matrix(g));
            for h in Generator3::ALL {
                let e = if g == h { 1.0 } else { 0.0 };
                assert!((c[h.index()] - e).norm() < 1e-15);
            }
        }
    }
}
