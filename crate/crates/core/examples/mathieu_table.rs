//! Mathieu characteristic values for real and imaginary q in all six symmetry classes.

use euclid_pt::mathieu::{characteristic_values, default_truncation, MathieuClass};
use num_complex::Complex64 as C64;

fn main() -> anyhow::Result<()> {
    let classes = ["even-pi", "odd-pi", "even-2pi", "odd-2pi", "even-half", "odd-half"];
    for q in [C64::new(1.0, 0.0), C64::new(5.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, 2.0)] {
        println!("q = {q}");
        for name in classes {
            let cls: MathieuClass = name.parse()?;
            let values = characteristic_values(q, cls, 5, default_truncation(q, 5))?;
            let cells: Vec<String> = (0..values.len())
                .map(|k| format!("{}:{:.8}{:+.8}i", cls.order(k), values[k].re, values[k].im))
                .collect();
            println!("  {name:>9}  {}", cells.join("  "));
        }
    }
    Ok(())
}
