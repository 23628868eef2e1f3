//! The q-deformed inner product on tensor words.
//!
//! On rank-n tensors the inner product is a sum over all permutations,
//! each weighted by q to its inversion count:
//!
//!   <f_1 x ... x f_n, g_1 x ... x g_n>_q
//!       = sum over sigma of q^inv(sigma) * prod_j <f_j, g_sigma(j)>
//!
//! The library evaluates it two ways — literally over all n! permutations,
//! and by a recursion that peels the leftmost factor — and this example
//! shows them agreeing while the naive route's cost explodes.

use qgauss::fock::{fock_inner, fock_inner_naive, TensorState};
use qgauss::qcore::{int, rat, render_scalar};
use qgauss::{GramSpace, QParam};

fn main() -> qgauss::Result<()> {
    // Two unit vectors with <e1, e2> = 1/2.
    let space = GramSpace::new(vec![vec![int(1), rat(1, 2)], vec![rat(1, 2), int(1)]])?;
    let q = QParam::new(rat(1, 3))?;

    // <e1 x e2, e2 x e1>_q = <e1,e2><e2,e1> + q <e1,e1><e2,e2>
    //                      = 1/4 + q.
    let left = TensorState::basis_word(&space, vec![0, 1])?;
    let right = TensorState::basis_word(&space, vec![1, 0])?;
    let value = fock_inner_naive(&left, &right, &q)?;
    println!(
        "<e1 x e2, e2 x e1> at q = 1/3: {} (expect 1/4 + 1/3 = 7/12)",
        render_scalar(&value)
    );
    assert_eq!(value, rat(7, 12));

    // The recursion matches the permanent on every word up to the naive
    // guard, and keeps going past it.
    for n in 1..=10usize {
        let word = TensorState::basis_word(&space, (0..n).map(|k| k % 2).collect())?;
        let fast = fock_inner(&word, &word, &q)?;
        let note = if n <= 8 {
            let slow = fock_inner_naive(&word, &word, &q)?;
            assert_eq!(slow, fast);
            format!("matches the {}-term permanent", (1..=n).product::<usize>())
        } else {
            "naive route would be refused here".to_string()
        };
        println!("  rank {n:2}: |word|^2 = {} — {note}", render_scalar(&fast));
    }

    // Different ranks are orthogonal by definition.
    let rank1 = TensorState::basis_word(&space, vec![0])?;
    let rank2 = TensorState::basis_word(&space, vec![0, 0])?;
    assert_eq!(fock_inner(&rank1, &rank2, &q)?, int(0));
    println!("\nmixed ranks are orthogonal: <e1, e1 x e1> = 0");
    Ok(())
}
