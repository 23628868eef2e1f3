//! Deciding when a q-Gaussian triplet can have a classical version.
//!
//! Two necessary conditions are checked for a standardized covariance
//! (X, Y, Z) at a given q:
//!
//!   * an extended Bell inequality 1 - <f,h> >= |<f,g> - <g,h>|, valid
//!     under a sub-Markovianity hypothesis (or <f,h> = 0, or q = -1);
//!   * nonnegativity of the conditional variance Var(Y | X, Z) over the
//!     support square of the q-Gaussian law.
//!
//! Violating either proves NO_CLASSICAL_VERSION. Passing both is only
//! NOT_EXCLUDED — the test is one-sided.

use qgauss::bell::{bell_check, variance_min, variance_quadratic};
use qgauss::qcore::{int, rat, render_scalar, Scalar};
use qgauss::{CovarianceSpec, QParam};

fn show(label: &str, cov: &CovarianceSpec, q: &QParam) -> qgauss::Result<()> {
    let report = bell_check(cov, q)?;
    println!("{label} (q = {}):", render_scalar(q.value()));
    println!("  bell applicable : {}", report.bell_applicable);
    if let Some(ok) = report.bell_satisfied {
        println!("  bell satisfied  : {ok}");
    }
    match &report.variance_min {
        Some(v) => println!("  variance min    : {}", render_scalar(v)),
        None => println!("  variance min    : skipped at q = -1"),
    }
    println!("  verdict         : {}\n", report.verdict);
    Ok(())
}

fn main() -> qgauss::Result<()> {
    let q = QParam::new(rat(1, 4))?;

    // Independent variables: nothing to exclude.
    show(
        "identity covariance",
        &CovarianceSpec::triplet(int(0), int(0), int(0))?,
        &q,
    )?;

    // A point in the exclusion strip <f,h> = <g,h> = 3/5: PSD, but the
    // Bell inequality fails (1 - 3/5 = 2/5 < |(-1/5) - 3/5| = 4/5).
    show(
        "Bell-violating strip point",
        &CovarianceSpec::triplet(rat(-1, 5), rat(3, 5), rat(3, 5))?,
        &q,
    )?;

    // With <f,h> = <g,h> = 1/2, the variance route takes over: the
    // conditional variance dips negative exactly when <f,g> < (q+5)/36.
    let threshold: Scalar = (q.value() + int(5)) / int(36);
    for (label, fg) in [
        (
            "just below the variance threshold",
            &threshold - rat(1, 1000),
        ),
        ("exactly at the threshold", threshold.clone()),
        (
            "just above the variance threshold",
            &threshold + rat(1, 1000),
        ),
    ] {
        let cov = CovarianceSpec::triplet(fg, rat(1, 2), rat(1, 2))?;
        show(label, &cov, &q)?;
    }

    // The quadratic itself, and where its minimum lives.
    let cov = CovarianceSpec::triplet(threshold, rat(1, 2), rat(1, 2))?;
    let quad = variance_quadratic(&cov, &q)?;
    println!("threshold covariance variance quadratic:");
    println!("  alpha (x^2 and z^2): {}", render_scalar(&quad.x_sq));
    println!("  gamma (xz)         : {}", render_scalar(&quad.xz));
    println!("  constant           : {}", render_scalar(&quad.constant));
    println!(
        "  min over the support square: {}",
        render_scalar(&variance_min(&cov, &q)?)
    );

    // At q = -1 the law is two-valued and the Bell route alone decides.
    let fringe = QParam::new(int(-1))?;
    show(
        "\ntwo-valued fringe, strip point",
        &CovarianceSpec::triplet(rat(-1, 5), rat(3, 5), rat(3, 5))?,
        &fringe,
    )?;
    Ok(())
}
