//! Closed-form adjoint action of an E3 Dyson map, compared with exp(X)·G·exp(−X)
//! in the 4×4 representation.

use euclid_pt::e3::oracle::adjoint_oracle;
use euclid_pt::e3::{e3_adjoint, DysonParamsE3, Generator3};

fn main() {
    let p = DysonParamsE3::from_array([0.3, 0.2, -0.5, 0.4, -0.1, 0.7]);
    let t = e3_adjoint(&p);
    println!("omega^2 = {:.6}, omega_tilde^2 = {:.6}", t.omega_sq, t.omega_tilde_sq);
    let labels: Vec<&str> = Generator3::ALL.iter().map(|g| g.label()).collect();
    println!("{:>6} | {}", "", labels.iter().map(|l| format!("{l:>22}")).collect::<String>());
    for g in Generator3::ALL {
        let img = t.image(g);
        let oracle = adjoint_oracle(&p, g);
        let dev = img.iter().zip(&oracle).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let row: String = img.iter().map(|c| format!("{:>22}", format!("{:.6}{:+.6}i", c.re, c.im))).collect();
        println!("{:>6} | {row}   (oracle deviation {dev:.1e})", g.label());
    }
}
