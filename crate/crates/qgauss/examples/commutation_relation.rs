//! The deformed commutation relation, checked operator-by-operator.
//!
//! Creation and annihilation satisfy  a_f a_g* - q a_g* a_f = <f,g> I.
//! Nothing in the implementation hard-codes this: `create` prepends a
//! factor, `annihilate` peels factors with q-weights, and the relation
//! emerges. This example applies both sides to concrete states and prints
//! the (identical) results.

use qgauss::fock::{annihilate, create, TensorState};
use qgauss::qcore::{int, rat, render_scalar};
use qgauss::{GramSpace, QParam};

fn main() -> qgauss::Result<()> {
    let space = GramSpace::new(vec![vec![int(1), rat(1, 2)], vec![rat(1, 2), int(1)]])?;
    let q = QParam::new(rat(-1, 2))?;
    let f = space.basis_vector(0)?;
    let g = space.basis_vector(1)?;

    // A mixed test state: e2 x e1 plus half the vacuum.
    let state = TensorState::basis_word(&space, vec![1, 0])?
        .add(&TensorState::vacuum(&space).scale(&rat(1, 2)))?;
    println!("state        : {state}");

    // Left side, term by term.
    let a_fa_g = annihilate(&f, &create(&g, &state)?, &q)?;
    let a_ga_f = create(&g, &annihilate(&f, &state, &q)?)?;
    let minus_q = -q.value().clone();
    let lhs = a_fa_g.add(&a_ga_f.scale(&minus_q))?;
    println!("a_f a_g* s   : {a_fa_g}");
    println!("a_g* a_f s   : {a_ga_f}");

    // Right side: <f,g> times the state itself.
    let fg = qgauss::inner(&f, &g)?;
    let rhs = state.scale(&fg);
    println!("difference   : {lhs}");
    println!("<f,g> * s    : {rhs}");
    assert_eq!(lhs, rhs);

    // The scalar <f,g> = 1/2 is visible in the vacuum component alone:
    // a_f a_g* turns the vacuum into <f,g> times the vacuum.
    let vacuum = TensorState::vacuum(&space);
    let back = annihilate(&f, &create(&g, &vacuum)?, &q)?;
    println!(
        "\na_f a_g* vacuum = {} * vacuum",
        render_scalar(&back.vacuum_coefficient())
    );
    assert_eq!(back.vacuum_coefficient(), fg);
    Ok(())
}
