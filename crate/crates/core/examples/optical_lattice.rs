//! The optical-lattice case J² + μ7u² + μ8v² + iμ9uv with μ7 = 0, μ8 = −4, μ9 = −8V0:
//! the Dyson map exists exactly for |V0| < 1/2.

use euclid_pt::dyson::optical_lattice_map;

fn main() {
    for v0 in [0.1, 0.3, 0.49, 0.499, 0.5, 0.501, 0.8] {
        match optical_lattice_map(0.0, -4.0, -8.0 * v0) {
            Ok(m) => println!("V0 = {v0}: lambda = {:+.6}, h = {}", m.lambda, m.h),
            Err(e) => println!("V0 = {v0}: {e}"),
        }
    }
}
