//! Bridging the exact algebra to floating point with Gaussian quadrature.
//!
//! The Jacobi matrix of the q-Hermite recurrence gives an N-point rule
//! whose nodes live inside the support interval [-2/sqrt(1-q),
//! 2/sqrt(1-q)] and whose weights discretize the q-Gaussian law. Because
//! an N-point rule integrates degree <= 2N - 1 exactly, its moments must
//! reproduce the exact vacuum expectations computed by a completely
//! different route (Fock-space combinatorics) — a strong end-to-end check
//! on both sides.

use qgauss::moments::field_moment;
use qgauss::qcore::{rat, render_scalar, scalar_to_f64};
use qgauss::quadrature::{check_orthogonality, gauss_rule, support_halfwidth};
use qgauss::QParam;

fn main() -> qgauss::Result<()> {
    let q_exact = QParam::new(rat(1, 2))?;
    let q = q_exact.to_f64();

    let rule = gauss_rule(8, q)?;
    println!(
        "8-point rule at q = 1/2 (support half-width {:.6}):",
        support_halfwidth(q)
    );
    println!("{:>12} {:>12}", "node", "weight");
    for (x, w) in rule.nodes().iter().zip(rule.weights()) {
        println!("{x:>12.6} {w:>12.6}");
    }
    let total: f64 = rule.weights().iter().sum();
    println!("weight sum: {total:.15}");

    // Moment bridge: quadrature vs exact Fock-space values.
    println!("\neven moments, quadrature vs exact:");
    let wide = gauss_rule(16, q)?;
    for k in (0..=10u32).step_by(2) {
        let numeric = wide.moment(k);
        let exact = field_moment(k, &q_exact);
        println!(
            "  E(X^{k:<2}) = {numeric:>18.12}   exact {} = {:.12}",
            render_scalar(&exact),
            scalar_to_f64(&exact)
        );
        assert!((numeric - scalar_to_f64(&exact)).abs() < 1e-10);
    }

    // Orthogonality of the q-Hermite family under the discretized law.
    for n_points in [16usize, 32] {
        let err = check_orthogonality(n_points, q, 8)?;
        println!("\nmax orthogonality defect, N = {n_points}, n,m <= 8: {err:.3e}");
    }
    Ok(())
}
