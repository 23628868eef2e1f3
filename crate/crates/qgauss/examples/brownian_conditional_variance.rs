//! The q-Brownian bridge variance: conditioning an interior point on its
//! past and future.
//!
//! For the q-Brownian motion (covariance min(s, t)) the conditional
//! variance of X_s given X_t_prev = x and X_t = z is a quadratic in
//! (x, z) whose constant term carries the prefactor
//!
//!   (t - s)(s - t_prev) / (t - q t_prev),
//!
//! the q-deformation of the classical Brownian bridge variance. The
//! quadratic part vanishes at q = 1 in the formal limit and is computed
//! here exactly for rational times.

use qgauss::bell::{bm_bracket_form, bm_cond_quadratic, bm_cond_variance, BracketReading};
use qgauss::qcore::{int, rat, render_scalar};
use qgauss::QParam;

fn main() -> qgauss::Result<()> {
    let (t_prev, s, t) = (int(1), int(4), int(16));
    let q = QParam::new(rat(1, 2))?;

    let quad = bm_cond_quadratic(&t_prev, &s, &t, &q)?;
    println!("Var(X_4 | X_1 = x, X_16 = z) at q = 1/2:");
    println!("  x^2 coefficient: {}", render_scalar(&quad.earlier_sq));
    println!("  xz  coefficient: {}", render_scalar(&quad.cross));
    println!("  z^2 coefficient: {}", render_scalar(&quad.later_sq));
    println!("  constant       : {}", render_scalar(&quad.constant));

    // The constant term is the bridge prefactor.
    let prefactor = (&t - &s) * (&s - &t_prev) / (&t - q.value() * &t_prev);
    println!(
        "  (t-s)(s-t_prev)/(t - q t_prev) = {}",
        render_scalar(&prefactor)
    );
    assert_eq!(quad.constant, prefactor);

    // Evaluate at a concrete conditioning pair.
    let value = bm_cond_variance(&t_prev, &s, &t, &q, &int(1), &int(-2))?;
    println!(
        "\nVar(X_4 | X_1 = 1, X_16 = -2) = {}",
        render_scalar(&value)
    );

    // A displayed closed form for this quadratic admits two parenthesis
    // readings; only the crossed one (each observation multiplied by the
    // *other* time) matches the first-principles derivation.
    for reading in [BracketReading::MatchedTimes, BracketReading::CrossedTimes] {
        let candidate = bm_bracket_form(&t_prev, &s, &t, &q, reading)?;
        let agrees = candidate == quad;
        println!("  {reading:?} reading matches: {agrees}");
    }

    // At q = 0 (free Brownian motion) the same machinery still applies.
    let free = QParam::new(int(0))?;
    let quad0 = bm_cond_quadratic(&t_prev, &s, &t, &free)?;
    println!(
        "\nfree case q = 0 constant: {} (classical bridge value (t-s)(s-t_prev)/(t-t_prev) = 36/15 = 12/5 differs once q != 1)",
        render_scalar(&quad0.constant)
    );
    Ok(())
}
