//! Collisions of even π-periodic Mathieu characteristic values along imaginary q = iμ4,
//! which are the exceptional points of the complex-Mathieu PT5 family (E = a/4).

use euclid_pt::mathieu::{complex_mathieu_eps, MathieuClass, Parity, Periodicity};

fn main() -> anyhow::Result<()> {
    let max_q: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(20.0);
    let cls = MathieuClass::new(Parity::Even, Periodicity::Pi);
    for ep in complex_mathieu_eps(max_q, cls)? {
        println!(
            "mu4 = {:.7}  a = {:.6}  E = a/4 = {:.6}  orders {:?}",
            ep.q_imag,
            ep.a_merge,
            ep.a_merge / 4.0,
            ep.orders
        );
    }
    Ok(())
}
