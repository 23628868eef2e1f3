//! The switch identities: closed forms for Hermite pair moments with an
//! inserted quadratic word, validated against brute force.
//!
//! For a standardized pair with correlation rho, moments of the form
//! E(H_n(X) W H_m(Z)) — W one of ZX, XZ, XX, ZZ, or nothing — vanish
//! unless m is within 2 of n, and otherwise reduce to products of
//! q-factorials and powers of rho. These five families are the engine
//! room of the conditional-moment calculus; this example prints the
//! closed forms next to direct Fock-space evaluation and then runs the
//! full exact sweep.

use qgauss::moments::{switch_bruteforce, switch_closed_form, switch_sweep, SwitchKind};
use qgauss::qcore::{int, rat, render_scalar};
use qgauss::{CovarianceSpec, QParam};

fn main() -> qgauss::Result<()> {
    let rho = rat(1, 2);
    let q = QParam::new(rat(1, 3))?;
    let cov = CovarianceSpec::new(vec![vec![int(1), rho.clone()], vec![rho.clone(), int(1)]])?;

    println!("E(H_n(X) W H_2(Z)) at rho = 1/2, q = 1/3:");
    println!(
        "{:>6} {:>4} {:>14} {:>14}",
        "W", "n", "closed form", "direct"
    );
    for kind in SwitchKind::ALL {
        for n in 0..=4u32 {
            let closed = switch_closed_form(kind, n, 2, &rho, &q);
            let brute = switch_bruteforce(kind, n, 2, &cov, &q)?;
            assert_eq!(closed, brute);
            println!(
                "{:>6} {:>4} {:>14} {:>14}",
                kind.label(),
                n,
                render_scalar(&closed),
                render_scalar(&brute)
            );
        }
    }

    // The acceptance-grade sweep: every kind, all n, m <= 6, four
    // correlations, four deformation parameters, compared exactly.
    let rhos = [int(0), rat(1, 4), rat(1, 2), rat(3, 4)];
    let qs = [
        QParam::new(rat(-1, 2))?,
        QParam::new(int(0))?,
        QParam::new(rat(1, 2))?,
        QParam::new(rat(9, 10))?,
    ];
    let report = switch_sweep(6, &rhos, &qs)?;
    println!(
        "\nsweep: {} cells checked, {} mismatches",
        report.checked,
        report.mismatches.len()
    );
    assert!(report.ok());
    Ok(())
}
