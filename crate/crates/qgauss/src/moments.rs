//! Operator words over the q-Fock space and their vacuum moments.
//!
//! An [`OperatorExpr`] is a symbolic word in field operators: sums, scalar
//! multiples, compositions, single fields `X_f = a_f + a*_f`, and
//! polynomials in one field. [`apply`] evaluates a word on a
//! [`TensorState`]; [`vacuum_expectation`] reads off `<vac, W vac>`, the
//! q-Gaussian moment of the word.
//!
//! The module then builds the two constructions everything downstream
//! needs:
//!
//! * **Wick products** [`wick`] — the recursively defined operators
//!   `psi(f_1 (x) ... (x) f_n)` with `psi(...) vac` equal to the elementary
//!   tensor, reducing to q-Hermite polynomials `H_n(X_f)` on repeated unit
//!   factors — and their compression [`wick_conditional`] onto the algebra
//!   of a sub-family, computed by projecting every factor.
//! * **Conditional second-moment coefficients** — for a standardized
//!   triplet `(X, Y, Z)` the regression line [`triplet_coeffs`] and the
//!   quadratic [`classical_coeffs`] `(A, B, C, D)` with
//!   `E(H_n(X) Y^2 H_m(Z)) = E(H_n(X) (A X^2 + B XZ + C Z^2 + D) H_m(Z))`
//!   for all `n, m` — an operator identity that holds whether or not a
//!   commuting model exists. [`qv_sweep`] verifies it by brute force.
//!
//! Mixed moments of the form `E(H_n(X) M H_m(Z))` with a short middle word
//! `M` have closed forms in `rho = E(XZ)`; [`switch_closed_form`] tabulates
//! them and [`switch_sweep_with`] checks the table against direct Fock-space
//! evaluation over a grid of `(kind, n, m, rho, q)`.

use std::sync::Arc;

use num::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{field_apply, TensorState};
use crate::hilbert::{covariance_space, det, inner, project, CovarianceSpec, GramSpace, Vector};
use crate::qcore::{
    hermite, int, pow_scalar, q_factorial, q_int, render_scalar, Polynomial, QParam, Scalar,
};

/// Longest total word rank [`switch_bruteforce`] will evaluate. Each unit
/// of rank roughly doubles the number of live basis words, so this bounds
/// sweep cost, not correctness.
pub const SWEEP_RANK_GUARD: usize = 16;

/// A symbolic word in field operators on the q-Fock space.
#[derive(Clone, Debug)]
pub enum OperatorExpr {
    /// The identity operator.
    Identity,
    /// A field operator `X_f = a_f + a*_f`.
    Field(Vector),
    /// A scalar multiple of a word.
    Scaled(Scalar, Box<OperatorExpr>),
    /// A sum of words.
    Sum(Vec<OperatorExpr>),
    /// A composition; the last entry acts first, matching the order the
    /// factors are written in `E(W_1 W_2 ... W_k)`.
    Compose(Vec<OperatorExpr>),
    /// A polynomial in one field operator, applied by iterating the field.
    FieldPoly(Polynomial, Vector),
}

impl OperatorExpr {
    /// Shorthand for a single field factor.
    pub fn field(f: &Vector) -> Self {
        OperatorExpr::Field(f.clone())
    }

    /// Shorthand for a scalar multiple.
    pub fn scaled(c: Scalar, expr: OperatorExpr) -> Self {
        OperatorExpr::Scaled(c, Box::new(expr))
    }
}

/// First base space mentioned anywhere in the expression, if any.
fn expr_space(expr: &OperatorExpr) -> Option<&Arc<GramSpace>> {
    match expr {
        OperatorExpr::Identity => None,
        OperatorExpr::Field(f) | OperatorExpr::FieldPoly(_, f) => Some(f.space()),
        OperatorExpr::Scaled(_, e) => expr_space(e),
        OperatorExpr::Sum(es) | OperatorExpr::Compose(es) => es.iter().find_map(expr_space),
    }
}

/// Folds an expression that mentions no field at all: every factor is a
/// multiple of the identity, so composition is plain multiplication.
fn scalar_value(expr: &OperatorExpr) -> Scalar {
    match expr {
        OperatorExpr::Identity => Scalar::one(),
        OperatorExpr::Scaled(c, e) => c * scalar_value(e),
        OperatorExpr::Sum(es) => es.iter().map(scalar_value).sum(),
        OperatorExpr::Compose(es) => es.iter().map(scalar_value).product(),
        OperatorExpr::Field(_) | OperatorExpr::FieldPoly(..) => {
            unreachable!("guarded by expr_space")
        }
    }
}

/// Evaluates a word on a state.
pub fn apply(expr: &OperatorExpr, state: &TensorState, q: &QParam) -> Result<TensorState> {
    match expr {
        OperatorExpr::Identity => Ok(state.clone()),
        OperatorExpr::Field(f) => field_apply(f, state, q),
        OperatorExpr::Scaled(c, e) => Ok(apply(e, state, q)?.scale(c)),
        OperatorExpr::Sum(es) => {
            let mut acc = TensorState::zero(state.space());
            for e in es {
                acc = acc.add(&apply(e, state, q)?)?;
            }
            Ok(acc)
        }
        OperatorExpr::Compose(es) => {
            let mut acc = state.clone();
            for e in es.iter().rev() {
                acc = apply(e, &acc, q)?;
            }
            Ok(acc)
        }
        OperatorExpr::FieldPoly(p, f) => {
            let mut acc = state.scale(&p.coeff(0));
            let mut power = state.clone();
            for k in 1..=p.degree().unwrap_or(0) {
                power = field_apply(f, &power, q)?;
                let c = p.coeff(k);
                if !c.is_zero() {
                    acc = acc.add(&power.scale(&c))?;
                }
            }
            Ok(acc)
        }
    }
}

/// The q-Gaussian moment `<vac, W vac>` of a word.
///
/// Distinct tensor ranks are orthogonal and the vacuum is a unit vector, so
/// the moment is simply the vacuum coefficient of `W vac` — no inner
/// product is evaluated. Field-free words fold to a plain scalar.
pub fn vacuum_expectation(expr: &OperatorExpr, q: &QParam) -> Result<Scalar> {
    match expr_space(expr) {
        Some(space) => {
            let vac = TensorState::vacuum(space);
            Ok(apply(expr, &vac, q)?.vacuum_coefficient())
        }
        None => Ok(scalar_value(expr)),
    }
}

/// The Wick product `psi(f_1 (x) ... (x) f_n)`, defined by `psi() = I` and
///
/// ```text
/// psi(f (x) f_1 (x) ... (x) f_n)
///   = X_f psi(f_1 (x) ... (x) f_n)
///     - sum_j q^(j-1) <f, f_j> psi(f_1 (x) ... omit j ... (x) f_n)
/// ```
///
/// The recursion mirrors the annihilation expansion, which is what makes
/// `psi(F) vac` equal the elementary tensor `F`. On `n` equal unit factors
/// it collapses to the q-Hermite polynomial `H_n` of the field.
pub fn wick(factors: &[Vector], q: &QParam) -> Result<OperatorExpr> {
    let Some((f, rest)) = factors.split_first() else {
        return Ok(OperatorExpr::Identity);
    };
    let mut parts = vec![OperatorExpr::Compose(vec![
        OperatorExpr::field(f),
        wick(rest, q)?,
    ])];
    for (j, fj) in rest.iter().enumerate() {
        let weight = -(pow_scalar(q.value(), j as u32) * inner(f, fj)?);
        if weight.is_zero() {
            continue;
        }
        let mut remaining = rest.to_vec();
        remaining.remove(j);
        parts.push(OperatorExpr::scaled(weight, wick(&remaining, q)?));
    }
    Ok(OperatorExpr::Sum(parts))
}

/// The q-Hermite polynomial of a field, `H_n(X_f)`, equal to the Wick
/// product of `n` copies of `f`. Requires `<f,f> = 1`; the Hermite
/// recurrence is normalized to unit variance.
pub fn hermite_of_field(n: u32, f: &Vector, q: &QParam) -> Result<OperatorExpr> {
    let norm = inner(f, f)?;
    if !norm.is_one() {
        return Err(Error::NonUnitVector {
            norm: render_scalar(&norm),
        });
    }
    Ok(OperatorExpr::FieldPoly(hermite(n, q), f.clone()))
}

/// The conditional expectation of a Wick product given the sub-family
/// `onto`: project every factor onto the span of `onto` and take the Wick
/// product of the projections. Compressing factor-by-factor like this is
/// exactly what the module-property `E(Y_1 W Y_2) = E(Y_1 E(W | onto) Y_2)`
/// demands, for any `Y_1`, `Y_2` in the algebra generated by `onto`.
pub fn wick_conditional(factors: &[Vector], onto: &[Vector], q: &QParam) -> Result<OperatorExpr> {
    let projected: Result<Vec<Vector>> = factors.iter().map(|f| project(f, onto)).collect();
    wick(&projected?, q)
}

/// Moment of an isolated standardized field: `E(X_f^k)`.
pub fn field_moment(k: u32, q: &QParam) -> Scalar {
    let space = GramSpace::new(vec![vec![int(1)]]).expect("1x1 identity Gram");
    let f = space.basis_vector(0).expect("index 0");
    let mut state = TensorState::vacuum(&space);
    for _ in 0..k {
        state = field_apply(&f, &state, q).expect("same space");
    }
    state.vacuum_coefficient()
}

/// Regression-line coefficients of the middle variable of a standardized
/// triplet `(X, Y, Z)` on the outer two: `a`, `b` minimize
/// `E(Y - aX - bZ)^2`, and `c` is the attained minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripletCoeffs {
    /// Weight of `X` in the regression of `Y` on `(X, Z)`.
    pub a: Scalar,
    /// Weight of `Z`.
    pub b: Scalar,
    /// The residual variance `E(Y - aX - bZ)^2 = det(cov) / (1 - rho^2)`.
    pub c: Scalar,
}

/// Computes [`TripletCoeffs`] from a standardized 3x3 covariance ordered
/// `(X, Y, Z)`. Fails with [`Error::DegenerateRegression`] when
/// `E(XZ)^2 = 1`, where `X` and `Z` are collinear and the regression is
/// not identifiable.
pub fn triplet_coeffs(cov: &CovarianceSpec) -> Result<TripletCoeffs> {
    cov.require_size(3)?;
    cov.require_standardized()?;
    let fg = cov.entry(0, 1);
    let rho = cov.entry(0, 2);
    let gh = cov.entry(1, 2);
    let denom = &int(1) - &(rho * rho);
    if denom.is_zero() {
        return Err(Error::DegenerateRegression);
    }
    Ok(TripletCoeffs {
        a: (fg - &(gh * rho)) / &denom,
        b: (gh - &(fg * rho)) / &denom,
        c: det(cov.entries()) / denom,
    })
}

/// Coefficients of the conditional second moment of the middle variable:
/// the unique `(A, B, C, D)` with
///
/// ```text
/// E(H_n(X) Y^2 H_m(Z)) = E(H_n(X) (A X^2 + B XZ + C Z^2 + D) H_m(Z))
/// ```
///
/// for all `n, m >= 0`. The field names spell out which monomial each
/// coefficient multiplies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalCoeffs {
    /// Coefficient `A` of `X^2`.
    pub x_sq: Scalar,
    /// Coefficient `B` of `XZ` (in that operator order).
    pub xz: Scalar,
    /// Coefficient `C` of `Z^2`.
    pub z_sq: Scalar,
    /// The constant term `D = 1 - A - B rho - C`.
    pub constant: Scalar,
}

/// Solves for [`ClassicalCoeffs`] in closed form. With `rho = E(XZ)` and
/// the regression weights `a`, `b`:
///
/// ```text
/// A = (ab (1-q) rho + a^2 (1 - q rho^2)) / (1 - q rho^2)
/// B = ab (1+q) (1 - rho^2) / (1 - q rho^2)
/// C = (ab (1-q) rho + b^2 (1 - q rho^2)) / (1 - q rho^2)
/// D = 1 - A - B rho - C
/// ```
///
/// `1 - q rho^2 > 0` throughout the admissible range `-1 <= q < 1`,
/// `rho^2 <= 1`, so only the `rho^2 = 1` degeneracy can fail.
pub fn classical_coeffs(cov: &CovarianceSpec, q: &QParam) -> Result<ClassicalCoeffs> {
    let t = triplet_coeffs(cov)?;
    let rho = cov.entry(0, 2);
    let one = int(1);
    let rho_sq = rho * rho;
    let denom = &one - &(q.value() * &rho_sq);
    let ab = &t.a * &t.b;
    let shear = &ab * &(&one - q.value()) * rho;
    let x_sq = &(&shear + &(&t.a * &t.a * &denom)) / &denom;
    let xz = &(&ab * &(&one + q.value()) * &(&one - &rho_sq)) / &denom;
    let z_sq = &(&shear + &(&t.b * &t.b * &denom)) / &denom;
    let constant = &(&(&one - &x_sq) - &(&xz * rho)) - &z_sq;
    Ok(ClassicalCoeffs {
        x_sq,
        xz,
        z_sq,
        constant,
    })
}

/// Residuals of the three-equation linear system that pins down
/// `(A, B, C)`; all three vanish identically for [`classical_coeffs`].
/// Exposed so verification runs can re-check the solution independently of
/// the closed form.
pub fn regression_system_residuals(cov: &CovarianceSpec, q: &QParam) -> Result<[Scalar; 3]> {
    let t = triplet_coeffs(cov)?;
    let cc = classical_coeffs(cov, q)?;
    let rho = cov.entry(0, 2).clone();
    let rho_sq = &rho * &rho;
    let one = int(1);
    let a_sq = &t.a * &t.a;
    let b_sq = &t.b * &t.b;
    let ab = &t.a * &t.b;
    let two_ab_rho = &(&ab + &ab) * &rho;
    // Matching E(H_n Y^2 H_m) for m = n - 2, m = n + 2, and m = n in turn.
    let r1 = &(&(&cc.x_sq * &rho_sq) + &(&cc.xz * &rho)) + &cc.z_sq
        - (&(&a_sq * &rho_sq) + &two_ab_rho + &b_sq);
    let r2 = &(&cc.x_sq + &(&cc.xz * &rho)) + &(&cc.z_sq * &rho_sq)
        - (&(&a_sq + &two_ab_rho) + &(&b_sq * &rho_sq));
    let one_plus_q = &one + q.value();
    let r3 = &(&(&one_plus_q * &rho) * &(&cc.x_sq + &cc.z_sq))
        + &(&cc.xz * &(&(q.value() * &rho_sq) + &one))
        - &one_plus_q * &(&(&(&a_sq + &b_sq) * &rho) + &(&ab * &(&rho_sq + &one)));
    Ok([r1, r2, r3])
}

/// Which two-letter word sits between `H_n(X)` and `H_m(Z)` in a switch
/// moment `E(H_n(X) M H_m(Z))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwitchKind {
    /// `M = ZX`.
    Zx,
    /// `M = XZ`.
    Xz,
    /// `M = X^2`.
    Xx,
    /// `M = Z^2`.
    Zz,
    /// Empty middle: the orthogonality moment `E(H_n(X) H_m(Z))`.
    Plain,
}

impl SwitchKind {
    /// Every kind, in the order sweeps iterate them.
    pub const ALL: [SwitchKind; 5] = [
        SwitchKind::Zx,
        SwitchKind::Xz,
        SwitchKind::Xx,
        SwitchKind::Zz,
        SwitchKind::Plain,
    ];

    /// Display label used in mismatch reports.
    pub fn label(self) -> &'static str {
        match self {
            SwitchKind::Zx => "ZX",
            SwitchKind::Xz => "XZ",
            SwitchKind::Xx => "XX",
            SwitchKind::Zz => "ZZ",
            SwitchKind::Plain => "PLAIN",
        }
    }

    /// Number of middle field factors.
    fn middle_len(self) -> usize {
        match self {
            SwitchKind::Plain => 0,
            _ => 2,
        }
    }

    /// The middle factors, leftmost first.
    fn middle(self, x: &Vector, z: &Vector) -> Vec<OperatorExpr> {
        match self {
            SwitchKind::Zx => vec![OperatorExpr::field(z), OperatorExpr::field(x)],
            SwitchKind::Xz => vec![OperatorExpr::field(x), OperatorExpr::field(z)],
            SwitchKind::Xx => vec![OperatorExpr::field(x), OperatorExpr::field(x)],
            SwitchKind::Zz => vec![OperatorExpr::field(z), OperatorExpr::field(z)],
            SwitchKind::Plain => Vec::new(),
        }
    }
}

/// Closed form for the switch moment `E(H_n(X) M H_m(Z))` where `X`, `Z`
/// are standardized with `E(XZ) = rho`.
///
/// Every kind vanishes outside `m in {n-2, n, n+2}` (`m = n` alone for the
/// empty middle). The `m = n` rows are stated multiplied through so that the
/// `rho^(n-1)` factor never appears with a vanishing-power guard: its
/// companion coefficient is zero exactly when `n = 0`.
pub fn switch_closed_form(kind: SwitchKind, n: u32, m: u32, rho: &Scalar, q: &QParam) -> Scalar {
    let fact = |k: u32| q_factorial(k, q);
    match kind {
        SwitchKind::Plain => {
            if m == n {
                pow_scalar(rho, n) * fact(n)
            } else {
                Scalar::zero()
            }
        }
        // E(H_n X^2 H_m) and E(H_n Z^2 H_m) are exchanged by swapping the
        // roles of the two letters, which transposes (n, m).
        SwitchKind::Zz => switch_closed_form(SwitchKind::Xx, m, n, rho, q),
        SwitchKind::Zx => {
            if m == n + 2 {
                pow_scalar(rho, n + 1) * fact(n + 2)
            } else if n >= 2 && m == n - 2 {
                pow_scalar(rho, n - 1) * fact(n)
            } else if m == n {
                let head = (q_int(n, q) + int(1)) * pow_scalar(rho, n + 1) * fact(n);
                if n == 0 {
                    head
                } else {
                    head + q.value() * q_int(n, q) * pow_scalar(rho, n - 1) * fact(n)
                }
            } else {
                Scalar::zero()
            }
        }
        SwitchKind::Xz => {
            if m == n + 2 {
                pow_scalar(rho, n + 1) * fact(n + 2)
            } else if n >= 2 && m == n - 2 {
                pow_scalar(rho, n - 1) * fact(n)
            } else if m == n {
                let head = q_int(n + 1, q) * pow_scalar(rho, n + 1) * fact(n);
                if n == 0 {
                    head
                } else {
                    head + q_int(n, q) * pow_scalar(rho, n - 1) * fact(n)
                }
            } else {
                Scalar::zero()
            }
        }
        SwitchKind::Xx => {
            if m == n + 2 {
                pow_scalar(rho, n + 2) * fact(n + 2)
            } else if n >= 2 && m == n - 2 {
                pow_scalar(rho, n - 2) * fact(n)
            } else if m == n {
                (q_int(n + 1, q) + q_int(n, q)) * pow_scalar(rho, n) * fact(n)
            } else {
                Scalar::zero()
            }
        }
    }
}

/// The same switch moment evaluated the slow way: build the operator word
/// over the two-variable covariance space and read off the vacuum moment.
/// `cov` must be the standardized 2x2 covariance of `(X, Z)`.
pub fn switch_bruteforce(
    kind: SwitchKind,
    n: u32,
    m: u32,
    cov: &CovarianceSpec,
    q: &QParam,
) -> Result<Scalar> {
    cov.require_size(2)?;
    cov.require_standardized()?;
    let total = n as usize + m as usize + kind.middle_len();
    if total > SWEEP_RANK_GUARD {
        return Err(Error::SweepGuard {
            max: SWEEP_RANK_GUARD,
            got: total,
        });
    }
    let (_, basis) = covariance_space(cov)?;
    let x = &basis[0];
    let z = &basis[1];
    let mut word = vec![hermite_of_field(n, x, q)?];
    word.extend(kind.middle(x, z));
    word.push(hermite_of_field(m, z, q)?);
    vacuum_expectation(&OperatorExpr::Compose(word), q)
}

/// One disagreement between a closed form and its brute-force evaluation.
#[derive(Clone, Debug)]
pub struct MismatchRecord {
    pub label: &'static str,
    pub n: u32,
    pub m: u32,
    pub rho: Scalar,
    pub q: Scalar,
    pub closed: Scalar,
    pub brute: Scalar,
}

impl std::fmt::Display for MismatchRecord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} n={} m={} rho={} q={}: closed form {} vs direct {}",
            self.label,
            self.n,
            self.m,
            render_scalar(&self.rho),
            render_scalar(&self.q),
            render_scalar(&self.closed),
            render_scalar(&self.brute)
        )
    }
}

/// Outcome of a closed-form-versus-brute-force sweep.
#[derive(Clone, Debug)]
pub struct SweepReport {
    /// Number of `(kind, n, m, rho, q)` cells evaluated both ways.
    pub checked: usize,
    /// Every cell where the two routes disagreed.
    pub mismatches: Vec<MismatchRecord>,
}

impl SweepReport {
    /// True when no cell disagreed.
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Hook for perturbing the closed-form side of a sweep; used by
/// verification commands to prove the comparison has teeth (a deliberately
/// injected error must surface as a mismatch).
pub type ClosedFormTweak = dyn Fn(SwitchKind, u32, u32, &Scalar, &QParam, Scalar) -> Scalar + Sync;

/// Sweeps every switch kind over `n, m in 0..=depth` and the given `rho`
/// and `q` grids, comparing [`switch_closed_form`] against
/// [`switch_bruteforce`] cell by cell (in parallel — the brute-force side
/// dominates the cost). `tweak`, when present, post-processes the
/// closed-form value before comparison.
pub fn switch_sweep_with(
    depth: u32,
    rhos: &[Scalar],
    qs: &[QParam],
    tweak: Option<&ClosedFormTweak>,
) -> Result<SweepReport> {
    let mut jobs = Vec::new();
    for kind in SwitchKind::ALL {
        for n in 0..=depth {
            for m in 0..=depth {
                for rho in rhos {
                    for q in qs {
                        jobs.push((kind, n, m, rho, q));
                    }
                }
            }
        }
    }
    let outcomes: Result<Vec<Option<MismatchRecord>>> = jobs
        .par_iter()
        .map(|&(kind, n, m, rho, q)| {
            let cov =
                CovarianceSpec::new(vec![vec![int(1), rho.clone()], vec![rho.clone(), int(1)]])?;
            let brute = switch_bruteforce(kind, n, m, &cov, q)?;
            let mut closed = switch_closed_form(kind, n, m, rho, q);
            if let Some(t) = tweak {
                closed = t(kind, n, m, rho, q, closed);
            }
            Ok((closed != brute).then(|| MismatchRecord {
                label: kind.label(),
                n,
                m,
                rho: rho.clone(),
                q: q.value().clone(),
                closed,
                brute,
            }))
        })
        .collect();
    let outcomes = outcomes?;
    Ok(SweepReport {
        checked: outcomes.len(),
        mismatches: outcomes.into_iter().flatten().collect(),
    })
}

/// [`switch_sweep_with`] without a tweak.
pub fn switch_sweep(depth: u32, rhos: &[Scalar], qs: &[QParam]) -> Result<SweepReport> {
    switch_sweep_with(depth, rhos, qs, None)
}

/// Verifies the conditional-second-moment identity
/// `E(H_n(X) Y^2 H_m(Z)) = E(H_n(X) (A X^2 + B XZ + C Z^2 + D) H_m(Z))`
/// by brute force for all `n, m <= max_nm` over the given standardized
/// triplet covariance.
pub fn qv_sweep(cov: &CovarianceSpec, q: &QParam, max_nm: u32) -> Result<SweepReport> {
    let cc = classical_coeffs(cov, q)?;
    let (_, basis) = covariance_space(cov)?;
    let (x, y, z) = (&basis[0], &basis[1], &basis[2]);
    let squared = OperatorExpr::Compose(vec![OperatorExpr::field(y), OperatorExpr::field(y)]);
    let quadratic = OperatorExpr::Sum(vec![
        OperatorExpr::scaled(
            cc.x_sq.clone(),
            OperatorExpr::Compose(vec![OperatorExpr::field(x), OperatorExpr::field(x)]),
        ),
        OperatorExpr::scaled(
            cc.xz.clone(),
            OperatorExpr::Compose(vec![OperatorExpr::field(x), OperatorExpr::field(z)]),
        ),
        OperatorExpr::scaled(
            cc.z_sq.clone(),
            OperatorExpr::Compose(vec![OperatorExpr::field(z), OperatorExpr::field(z)]),
        ),
        OperatorExpr::scaled(cc.constant.clone(), OperatorExpr::Identity),
    ]);
    let pairs: Vec<(u32, u32)> = (0..=max_nm)
        .flat_map(|n| (0..=max_nm).map(move |m| (n, m)))
        .collect();
    let outcomes: Result<Vec<Option<MismatchRecord>>> = pairs
        .par_iter()
        .map(|&(n, m)| {
            let sandwich = |middle: &OperatorExpr| -> Result<Scalar> {
                let word = OperatorExpr::Compose(vec![
                    hermite_of_field(n, x, q)?,
                    middle.clone(),
                    hermite_of_field(m, z, q)?,
                ]);
                vacuum_expectation(&word, q)
            };
            let lhs = sandwich(&squared)?;
            let rhs = sandwich(&quadratic)?;
            Ok((lhs != rhs).then(|| MismatchRecord {
                label: "Y^2 vs quadratic",
                n,
                m,
                rho: cov.entry(0, 2).clone(),
                q: q.value().clone(),
                closed: rhs,
                brute: lhs,
            }))
        })
        .collect();
    let outcomes = outcomes?;
    Ok(SweepReport {
        checked: outcomes.len(),
        mismatches: outcomes.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::fock_inner;
    use crate::qcore::rat;

    fn qp(num: i64, den: i64) -> QParam {
        QParam::new(rat(num, den)).unwrap()
    }

    fn triplet_space() -> (Arc<GramSpace>, Vec<Vector>) {
        let cov = CovarianceSpec::triplet(rat(1, 2), rat(1, 4), rat(1, 2)).unwrap();
        covariance_space(&cov).unwrap()
    }

    #[test]
    fn wick_product_of_vacuum_word_is_identity() {
        let (_, basis) = triplet_space();
        let q = qp(1, 2);
        let id = wick(&[], &q).unwrap();
        let state = TensorState::basis_word(basis[0].space(), vec![1, 2]).unwrap();
        assert_eq!(apply(&id, &state, &q).unwrap(), state);
    }

    #[test]
    fn wick_product_maps_vacuum_to_the_elementary_tensor() {
        let (space, _) = triplet_space();
        for q in [qp(-1, 2), qp(0, 1), qp(1, 2)] {
            for word in [vec![0], vec![0, 1], vec![2, 0, 1], vec![1, 1, 2, 0]] {
                let factors: Vec<Vector> = word
                    .iter()
                    .map(|&i| space.basis_vector(i).unwrap())
                    .collect();
                let psi = wick(&factors, &q).unwrap();
                let got = apply(&psi, &TensorState::vacuum(&space), &q).unwrap();
                let expected = TensorState::from_vectors(&space, &factors).unwrap();
                assert_eq!(got, expected, "word = {word:?}, q = {q}");
            }
        }
    }

    #[test]
    fn wick_of_repeated_unit_factor_is_the_hermite_polynomial() {
        let (space, basis) = triplet_space();
        let f = &basis[0];
        let probes = [
            TensorState::vacuum(&space),
            TensorState::basis_word(&space, vec![1]).unwrap(),
            TensorState::basis_word(&space, vec![2, 1]).unwrap(),
        ];
        for q in [qp(-1, 2), qp(1, 2)] {
            for n in 0..=4u32 {
                let via_wick = wick(&vec![f.clone(); n as usize], &q).unwrap();
                let via_hermite = hermite_of_field(n, f, &q).unwrap();
                for probe in &probes {
                    assert_eq!(
                        apply(&via_wick, probe, &q).unwrap(),
                        apply(&via_hermite, probe, &q).unwrap(),
                        "n = {n}, q = {q}"
                    );
                }
            }
        }
    }

    #[test]
    fn hermite_of_field_requires_a_unit_vector() {
        let (_, basis) = triplet_space();
        let q = qp(1, 2);
        let doubled = &basis[0] * &int(2);
        assert!(matches!(
            hermite_of_field(2, &doubled, &q),
            Err(Error::NonUnitVector { .. })
        ));
    }

    #[test]
    fn hermite_moments_are_orthogonal_with_q_factorial_norms() {
        let (_, basis) = triplet_space();
        let f = &basis[0];
        for q in [qp(-1, 2), qp(0, 1), qp(1, 2)] {
            for n in 0..=4u32 {
                for m in 0..=4u32 {
                    let word = OperatorExpr::Compose(vec![
                        hermite_of_field(n, f, &q).unwrap(),
                        hermite_of_field(m, f, &q).unwrap(),
                    ]);
                    let moment = vacuum_expectation(&word, &q).unwrap();
                    let expected = if n == m {
                        q_factorial(n, &q)
                    } else {
                        Scalar::zero()
                    };
                    assert_eq!(moment, expected, "n = {n}, m = {m}, q = {q}");
                }
            }
        }
    }

    #[test]
    fn low_field_moments_match_pair_partition_counts() {
        // E(X^{2k}) counts pair partitions of 2k points weighted by
        // q^crossings: 1, 1+q, then 5 + 6q + 3q^2 + q^3 for 2k = 6.
        for q in [qp(-1, 1), qp(-1, 2), qp(0, 1), qp(1, 2), qp(9, 10)] {
            let qv = q.value();
            assert_eq!(field_moment(0, &q), int(1));
            assert_eq!(field_moment(1, &q), int(0));
            assert_eq!(field_moment(2, &q), int(1));
            assert_eq!(field_moment(3, &q), int(0));
            assert_eq!(field_moment(4, &q), &int(2) + qv);
            let six = int(5) + int(6) * qv + int(3) * qv * qv + qv * qv * qv;
            assert_eq!(field_moment(6, &q), six, "q = {q}");
        }
    }

    #[test]
    fn field_free_words_fold_to_scalars() {
        let q = qp(1, 2);
        let expr = OperatorExpr::Sum(vec![
            OperatorExpr::scaled(rat(3, 2), OperatorExpr::Identity),
            OperatorExpr::Compose(vec![
                OperatorExpr::scaled(int(2), OperatorExpr::Identity),
                OperatorExpr::scaled(int(-1), OperatorExpr::Identity),
            ]),
        ]);
        assert_eq!(vacuum_expectation(&expr, &q).unwrap(), rat(-1, 2));
    }

    #[test]
    fn conditional_hermite_scales_by_the_covariance_power() {
        // E(H_n(X_g) | X_f) = <f,g>^n H_n(X_f) for unit f, g.
        let (space, basis) = triplet_space();
        let f = &basis[0];
        let g = &basis[1];
        let rho = inner(f, g).unwrap();
        let probes = [
            TensorState::vacuum(&space),
            TensorState::basis_word(&space, vec![2]).unwrap(),
            TensorState::basis_word(&space, vec![0, 2]).unwrap(),
        ];
        for q in [qp(-1, 2), qp(1, 2)] {
            for n in 0..=4u32 {
                let compressed =
                    wick_conditional(&vec![g.clone(); n as usize], std::slice::from_ref(f), &q)
                        .unwrap();
                let expected =
                    OperatorExpr::scaled(pow_scalar(&rho, n), hermite_of_field(n, f, &q).unwrap());
                for probe in &probes {
                    assert_eq!(
                        apply(&compressed, probe, &q).unwrap(),
                        apply(&expected, probe, &q).unwrap(),
                        "n = {n}, q = {q}"
                    );
                }
            }
        }
    }

    #[test]
    fn compression_preserves_sandwiched_moments() {
        // E(Y_1 W Y_2) = E(Y_1 E(W | onto) Y_2) for Y_1, Y_2 generated by
        // the conditioning family.
        let (_, basis) = triplet_space();
        let (f, g, h) = (&basis[0], &basis[1], &basis[2]);
        let onto = [f.clone(), h.clone()];
        let middle_factors = [g.clone(), g.clone()];
        for q in [qp(-1, 2), qp(0, 1), qp(2, 5)] {
            let raw = wick(&middle_factors, &q).unwrap();
            let compressed = wick_conditional(&middle_factors, &onto, &q).unwrap();
            for (left_deg, right_deg) in [(0u32, 1u32), (2, 1), (1, 3), (2, 2)] {
                let sandwich = |middle: &OperatorExpr| {
                    let word = OperatorExpr::Compose(vec![
                        hermite_of_field(left_deg, f, &q).unwrap(),
                        middle.clone(),
                        hermite_of_field(right_deg, h, &q).unwrap(),
                    ]);
                    vacuum_expectation(&word, &q).unwrap()
                };
                assert_eq!(
                    sandwich(&raw),
                    sandwich(&compressed),
                    "degrees ({left_deg}, {right_deg}), q = {q}"
                );
            }
        }
    }

    #[test]
    fn wick_state_inner_products_reproduce_fock_inner_products() {
        // <psi(F) vac, psi(G) vac> = <F, G>_q for elementary tensors.
        let (space, _) = triplet_space();
        let q = qp(1, 2);
        let words = [vec![0usize, 1], vec![1, 0], vec![2, 2]];
        for lw in &words {
            for rw in &words {
                let lf: Vec<Vector> = lw.iter().map(|&i| space.basis_vector(i).unwrap()).collect();
                let rf: Vec<Vector> = rw.iter().map(|&i| space.basis_vector(i).unwrap()).collect();
                let left =
                    apply(&wick(&lf, &q).unwrap(), &TensorState::vacuum(&space), &q).unwrap();
                let right =
                    apply(&wick(&rf, &q).unwrap(), &TensorState::vacuum(&space), &q).unwrap();
                let direct = fock_inner(
                    &TensorState::from_vectors(&space, &lf).unwrap(),
                    &TensorState::from_vectors(&space, &rf).unwrap(),
                    &q,
                )
                .unwrap();
                assert_eq!(fock_inner(&left, &right, &q).unwrap(), direct);
            }
        }
    }

    #[test]
    fn triplet_coeffs_solve_the_normal_equations() {
        let cov = CovarianceSpec::triplet(rat(1, 2), rat(1, 2), rat(1, 2)).unwrap();
        let t = triplet_coeffs(&cov).unwrap();
        assert_eq!(t.a, rat(1, 3));
        assert_eq!(t.b, rat(1, 3));
        assert_eq!(t.c, rat(2, 3));

        // Generic case: a + b rho = fg and a rho + b = gh must hold.
        let cov = CovarianceSpec::triplet(rat(2, 5), rat(-1, 4), rat(1, 10)).unwrap();
        let t = triplet_coeffs(&cov).unwrap();
        let rho = cov.entry(0, 2);
        assert_eq!(&t.a + &(&t.b * rho), *cov.entry(0, 1));
        assert_eq!(&(&t.a * rho) + &t.b, *cov.entry(1, 2));
        // Residual variance is 1 - a*fg - b*gh.
        let expected_c = &(&int(1) - &(&t.a * cov.entry(0, 1))) - &(&t.b * cov.entry(1, 2));
        assert_eq!(t.c, expected_c);
    }

    #[test]
    fn triplet_coeffs_reject_collinear_outer_variables() {
        let cov = CovarianceSpec::triplet(rat(1, 2), int(1), rat(1, 2)).unwrap();
        assert!(matches!(
            triplet_coeffs(&cov),
            Err(Error::DegenerateRegression)
        ));
    }

    #[test]
    fn classical_coeffs_at_the_symmetric_half_point() {
        let cov = CovarianceSpec::triplet(rat(1, 2), rat(1, 2), rat(1, 2)).unwrap();
        let cc = classical_coeffs(&cov, &qp(0, 1)).unwrap();
        assert_eq!(cc.x_sq, rat(1, 6));
        assert_eq!(cc.xz, rat(1, 12));
        assert_eq!(cc.z_sq, rat(1, 6));
        assert_eq!(cc.constant, rat(5, 8));
    }

    #[test]
    fn regression_residuals_vanish() {
        let covs = [
            CovarianceSpec::triplet(rat(1, 2), rat(1, 2), rat(1, 2)).unwrap(),
            CovarianceSpec::triplet(rat(2, 5), rat(-1, 4), rat(1, 10)).unwrap(),
            CovarianceSpec::triplet(rat(-1, 5), rat(3, 5), rat(3, 5)).unwrap(),
        ];
        for cov in &covs {
            for q in [qp(-1, 1), qp(-1, 2), qp(0, 1), qp(1, 2), qp(9, 10)] {
                for r in regression_system_residuals(cov, &q).unwrap() {
                    assert!(r.is_zero(), "cov = {cov:?}, q = {q}");
                }
            }
        }
    }

    #[test]
    fn switch_closed_form_spot_values() {
        let rho = rat(1, 2);
        let q = qp(1, 2);
        // E(X Z) = rho.
        assert_eq!(
            switch_closed_form(SwitchKind::Zx, 0, 0, &rho, &q),
            rat(1, 2)
        );
        // E(H_1(X) Z X H_1(Z)) = 2 rho^2 + q.
        assert_eq!(switch_closed_form(SwitchKind::Zx, 1, 1, &rho, &q), int(1));
        // E(Z X H_2(Z)) = rho (1 + q).
        assert_eq!(
            switch_closed_form(SwitchKind::Zx, 0, 2, &rho, &q),
            rat(3, 4)
        );
        // E(H_1(X) X Z H_1(Z)) = (1 + q) rho^2 + 1.
        assert_eq!(
            switch_closed_form(SwitchKind::Xz, 1, 1, &rho, &q),
            rat(11, 8)
        );
        // Plain orthogonality: delta_{nm} rho^n [n]_q!.
        assert_eq!(
            switch_closed_form(SwitchKind::Plain, 2, 2, &rho, &q),
            rat(3, 8)
        );
        assert_eq!(
            switch_closed_form(SwitchKind::Plain, 2, 3, &rho, &q),
            int(0)
        );
        // Off the three live diagonals everything vanishes.
        for kind in SwitchKind::ALL {
            assert_eq!(switch_closed_form(kind, 0, 5, &rho, &q), int(0));
            assert_eq!(switch_closed_form(kind, 5, 0, &rho, &q), int(0));
        }
    }

    #[test]
    fn switch_closed_form_matches_bruteforce_at_low_degree() {
        let rhos = [rat(0, 1), rat(1, 2), rat(-3, 4)];
        let qs = [qp(-1, 1), qp(-1, 2), qp(0, 1), qp(1, 2)];
        let report = switch_sweep(3, &rhos, &qs).unwrap();
        assert_eq!(report.checked, 5 * 16 * 3 * 4);
        assert!(report.ok(), "first mismatch: {}", report.mismatches[0]);
    }

    #[test]
    fn sweep_tweak_surfaces_an_injected_error() {
        let rhos = [rat(1, 2)];
        let qs = [qp(1, 2)];
        let tweak = |kind: SwitchKind,
                     n: u32,
                     m: u32,
                     _rho: &Scalar,
                     _q: &QParam,
                     closed: Scalar|
         -> Scalar {
            if kind == SwitchKind::Xx && n == 1 && m == 1 {
                closed + int(1)
            } else {
                closed
            }
        };
        let report = switch_sweep_with(2, &rhos, &qs, Some(&tweak)).unwrap();
        assert_eq!(report.mismatches.len(), 1);
        let miss = &report.mismatches[0];
        assert_eq!((miss.label, miss.n, miss.m), ("XX", 1, 1));
    }

    #[test]
    fn switch_bruteforce_guards_total_rank() {
        let cov =
            CovarianceSpec::new(vec![vec![int(1), rat(1, 2)], vec![rat(1, 2), int(1)]]).unwrap();
        assert!(matches!(
            switch_bruteforce(SwitchKind::Xx, 8, 8, &cov, &qp(1, 2)),
            Err(Error::SweepGuard { max: 16, got: 18 })
        ));
    }

    #[test]
    fn conditional_second_moment_identity_holds_at_low_degree() {
        let covs = [
            CovarianceSpec::triplet(rat(1, 2), rat(1, 4), rat(1, 2)).unwrap(),
            CovarianceSpec::triplet(rat(-1, 5), rat(3, 5), rat(3, 5)).unwrap(),
        ];
        for cov in &covs {
            for q in [qp(-1, 2), qp(0, 1), qp(1, 2)] {
                let report = qv_sweep(cov, &q, 2).unwrap();
                assert!(
                    report.ok(),
                    "cov = {cov:?}, q = {q}, first mismatch: {}",
                    report.mismatches[0]
                );
            }
        }
    }
}
