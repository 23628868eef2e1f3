//! The q-Hermite family from its three-term recurrence.
//!
//! `H_{n+1}(x) = x H_n(x) - [n]_q H_{n-1}(x)` interpolates between the
//! classical (monic) Hermite polynomials at q = 1, the Chebyshev-like
//! free case at q = 0, and the two-point parity polynomials at q = -1.
//! All coefficients are exact rationals.

use qgauss::qcore::{int, rat, render_scalar};
use qgauss::{hermite, q_factorial, QParam};

fn main() -> qgauss::Result<()> {
    for (label, q_value) in [
        ("q = 0", int(0)),
        ("q = 1/2", rat(1, 2)),
        ("q = -1", int(-1)),
    ] {
        let q = QParam::new(q_value)?;
        println!("{label}");
        for n in 0..=6 {
            println!("  H_{n}(x) = {}", hermite(n, &q));
        }
        println!();
    }

    // The recurrence pins the squared norms: E(H_n^2) = [n]_q!.
    let q = QParam::new(rat(1, 2))?;
    println!("squared norms at q = 1/2:");
    for n in 0..=6 {
        println!("  [{}]_q! = {}", n, render_scalar(&q_factorial(n, &q)));
    }

    // A spot check that evaluation is exact: at q = 1/2,
    // H_3(x) = x^3 - ([1]_q + [2]_q) x = x^3 - 5/2 x, so H_3(2) = 8 - 5 = 3.
    let h3 = hermite(3, &q);
    println!("\nH_3(2) at q = 1/2: {}", render_scalar(&h3.eval(&int(2))));
    assert_eq!(h3.eval(&int(2)), int(3));
    Ok(())
}
