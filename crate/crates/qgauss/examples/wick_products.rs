//! Wick products: the operators whose vacuum states are elementary tensors.
//!
//! The Wick product psi(f_1, ..., f_n) is the unique polynomial in the
//! field operators with  psi(f_1, ..., f_n) vacuum = f_1 x ... x f_n.
//! It is built by the recursion
//!
//!   psi(f, rest) = X_f psi(rest) - sum_j q^(j-1) <f, rest_j> psi(rest \ j)
//!
//! and collapses to the q-Hermite polynomial H_n(X_f) when all factors
//! equal one unit vector — the operator-level source of every Hermite
//! identity in this crate.

use qgauss::fock::TensorState;
use qgauss::moments::{apply, hermite_of_field, vacuum_expectation, wick, OperatorExpr};
use qgauss::qcore::{int, rat, render_scalar};
use qgauss::{GramSpace, QParam};

fn main() -> qgauss::Result<()> {
    let space = GramSpace::new(vec![vec![int(1), rat(1, 2)], vec![rat(1, 2), int(1)]])?;
    let q = QParam::new(rat(1, 2))?;
    let e1 = space.basis_vector(0)?;
    let e2 = space.basis_vector(1)?;

    // psi(e1, e2) applied to the vacuum gives exactly e1 x e2 — the
    // cross terms of X_{e1} X_{e2} are subtracted away.
    let pair = wick(&[e1.clone(), e2.clone()], &q)?;
    let vacuum = TensorState::vacuum(&space);
    let state = apply(&pair, &vacuum, &q)?;
    println!("psi(e1, e2) vacuum = {state}");
    assert_eq!(state, TensorState::basis_word(&space, vec![0, 1])?);

    // Compare with the bare product X_{e1} X_{e2}, which leaks a vacuum
    // component <e1, e2>.
    let bare = OperatorExpr::Compose(vec![OperatorExpr::field(&e1), OperatorExpr::field(&e2)]);
    println!("X_e1 X_e2 vacuum   = {}", apply(&bare, &vacuum, &q)?);

    // Repeated factors: psi(e1, e1, e1) = H_3(X_{e1}) as operators. Verify
    // by comparing both applied to a non-vacuum state.
    let cubic = wick(&[e1.clone(), e1.clone(), e1.clone()], &q)?;
    let hermite = hermite_of_field(3, &e1, &q)?;
    let probe = TensorState::basis_word(&space, vec![1, 0])?;
    let via_wick = apply(&cubic, &probe, &q)?;
    let via_hermite = apply(&hermite, &probe, &q)?;
    assert_eq!(via_wick, via_hermite);
    println!("\npsi(e1,e1,e1) == H_3(X_e1) on {probe}:");
    println!("  both give {via_wick}");

    // Wick products of distinct degrees are orthogonal in expectation;
    // equal words square to q-factorials (here <psi^2> for n = 0..5).
    println!("\nE(psi(e1^n)^2) = [n]_q!:");
    for n in 0..=5u32 {
        let factors = vec![e1.clone(); n as usize];
        let w = wick(&factors, &q)?;
        let squared = OperatorExpr::Compose(vec![w.clone(), w]);
        println!(
            "  n = {n}: {}",
            render_scalar(&vacuum_expectation(&squared, &q)?)
        );
    }
    Ok(())
}
