//! Covariance feasibility: when can a q-Gaussian triplet have a classical
//! (commuting) version?
//!
//! Two necessary conditions are checked, both exact:
//!
//! * **An extended Bell inequality.** If a classical version of the
//!   standardized triplet `(X, Y, Z)` exists and the covariance is
//!   sub-Markov (`<f,g><g,h> <= <f,h>` with `0 < <f,h> < 1`), or
//!   `<f,h> = 0`, or `q = -1`, then
//!   `1 - <f,h> >= |<f,g> - <g,h>|` must hold.
//! * **Conditional-variance positivity.** For `-1 < q < 1` the classical
//!   conditional variance `Var(Y | X, Z)` is an explicit quadratic with no
//!   linear terms, and the joint density of `(X, Z)` is strictly positive on
//!   the closed square `[-2/sqrt(1-q), 2/sqrt(1-q)]^2`, so the quadratic
//!   must be non-negative there. [`variance_min`] computes its exact minimum
//!   over the square by enumerating the interior, edge, and corner
//!   candidates.
//!
//! [`bell_check`] combines the two into a [`FeasibilityVerdict`]:
//! `NO_CLASSICAL_VERSION` is a proof of impossibility, `NOT_EXCLUDED` means
//! neither test bites (it is *not* an existence claim). The module also
//! covers the two worked regions — the strip [`e1_region`] that is
//! infeasible for every `q`, and the `<f,h> = <g,h> = 1/2` family whose
//! feasibility boundary moves with `q` — plus the conditional variance of
//! the (Markovian, hence classically realizable) q-Brownian motion,
//! [`bm_cond_variance`], obtained by specializing the same quadratic to the
//! covariance `min(s, t)`.

use num::{One, Signed, Zero};

pub use crate::hilbert::CovarianceSpec;

use crate::error::{Error, Result};
use crate::moments::{classical_coeffs, triplet_coeffs};
use crate::qcore::{int, QParam, Scalar};

/// Outcome of the combined feasibility test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The covariance provably has no classical version at this `q`.
    NoClassicalVersion,
    /// Neither necessary condition is violated. Not an existence proof.
    NotExcluded,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::NoClassicalVersion => "NO_CLASSICAL_VERSION",
            Verdict::NotExcluded => "NOT_EXCLUDED",
        })
    }
}

/// Which hypothesis, if any, makes the Bell inequality a valid necessary
/// condition for the given covariance and `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Applicability {
    /// `<f,g><g,h> <= <f,h>` and `0 < <f,h> < 1`.
    SubMarkov,
    /// `<f,h> = 0`.
    ZeroEndpointCovariance,
    /// `q = -1`, where classical versions are two-valued.
    QMinusOne,
    /// None of the hypotheses hold; the inequality is not informative.
    NotApplicable,
}

impl Applicability {
    /// True unless no hypothesis holds.
    pub fn applies(self) -> bool {
        self != Applicability::NotApplicable
    }
}

/// Result of [`bell_check`]: every ingredient of the verdict, so callers
/// can report *why* a covariance was excluded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    /// Whether the Bell inequality is a valid necessary condition here.
    pub bell_applicable: bool,
    /// The inequality's truth value; `Some` exactly when applicable.
    pub bell_satisfied: Option<bool>,
    /// Exact minimum of the conditional-variance quadratic over the support
    /// square; `None` at `q = -1`, where the Fock-based variance machinery
    /// is bypassed and the verdict rests on the Bell inequality alone.
    pub variance_min: Option<Scalar>,
    /// Whether that minimum is `>= 0` (vacuously true at `q = -1`).
    pub variance_nonnegative: bool,
    /// The combined verdict.
    pub verdict: Verdict,
}

/// Checks the covariance shape shared by every entry point here:
/// standardized 3x3 with `<f,h>^2 != 1` (the regression onto `X, Z`
/// degenerates when the outer pair is collinear).
fn require_admissible(cov: &CovarianceSpec) -> Result<()> {
    cov.require_size(3)?;
    cov.require_standardized()?;
    let fh = cov.entry(0, 2);
    if (fh * fh).is_one() {
        return Err(Error::DegenerateRegression);
    }
    Ok(())
}

/// Determines which Bell hypothesis applies to `(cov, q)`.
pub fn bell_applicability(cov: &CovarianceSpec, q: &QParam) -> Result<Applicability> {
    require_admissible(cov)?;
    let fg = cov.entry(0, 1);
    let fh = cov.entry(0, 2);
    let gh = cov.entry(1, 2);
    let sub_markov = &(fg * gh) <= fh && fh.is_positive() && fh < &int(1);
    Ok(if sub_markov {
        Applicability::SubMarkov
    } else if fh.is_zero() {
        Applicability::ZeroEndpointCovariance
    } else if q.is_minus_one() {
        Applicability::QMinusOne
    } else {
        Applicability::NotApplicable
    })
}

/// The bare inequality `1 - <f,h> >= |<f,g> - <g,h>|`, with no
/// applicability reasoning.
pub fn bell_inequality_holds(cov: &CovarianceSpec) -> Result<bool> {
    require_admissible(cov)?;
    let fg = cov.entry(0, 1);
    let fh = cov.entry(0, 2);
    let gh = cov.entry(1, 2);
    Ok(&int(1) - fh >= (fg - gh).abs())
}

/// The conditional-variance quadratic
/// `Var(Y | X = x, Z = z) = x_sq x^2 + xz xz + z_sq z^2 + constant`.
/// It never has linear terms, which is what makes exact minimization over a
/// centered square a finite candidate check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarianceQuadratic {
    pub x_sq: Scalar,
    pub xz: Scalar,
    pub z_sq: Scalar,
    pub constant: Scalar,
}

impl VarianceQuadratic {
    /// Value at a point.
    pub fn eval(&self, x: &Scalar, z: &Scalar) -> Scalar {
        self.eval_squares(&(x * x), &(x * z), &(z * z))
    }

    /// Value given the monomials `x^2`, `xz`, `z^2` directly. The corner
    /// and boundary substitutions use this: the points have irrational
    /// coordinates (`2/sqrt(1-q)` and the like) but rational monomials, so
    /// the value stays exact.
    pub fn eval_squares(&self, x_sq: &Scalar, xz: &Scalar, z_sq: &Scalar) -> Scalar {
        &(&(&self.x_sq * x_sq) + &(&self.xz * xz)) + &(&(&self.z_sq * z_sq) + &self.constant)
    }

    /// Exact minimum over the closed square `[-l, l]^2` with `l^2 = l_sq`.
    ///
    /// With no linear terms the only interior stationary point is the
    /// origin; on each edge the restriction is a one-variable quadratic
    /// whose stationary point is rational; the rest is corners. Every
    /// candidate is evaluated from rational monomials and compared exactly.
    pub fn min_over_square(&self, l_sq: &Scalar) -> Scalar {
        let mut best = self.constant.clone(); // origin
        let neg_l_sq = -l_sq.clone();
        for corner in [
            self.eval_squares(l_sq, l_sq, l_sq),
            self.eval_squares(l_sq, &neg_l_sq, l_sq),
        ] {
            if corner < best {
                best = corner;
            }
        }
        // Edge x = +-l: the restriction z_sq z^2 -+ xz l z + (x_sq l^2 + c)
        // has its stationary point inside the edge iff xz^2 <= 4 z_sq^2,
        // with value x_sq l^2 + c - xz^2 l^2 / (4 z_sq); symmetrically for
        // z = +-l. (If the stationary point is an edge maximum the
        // candidate is merely redundant, never wrong: it is still a point
        // of the square.)
        let xz_sq = &self.xz * &self.xz;
        let four = int(4);
        for (along, across) in [(&self.z_sq, &self.x_sq), (&self.x_sq, &self.z_sq)] {
            if !along.is_zero() && xz_sq <= &four * &(along * along) {
                let candidate =
                    &(&(across * l_sq) + &self.constant) - &(&(&xz_sq * l_sq) / &(&four * along));
                if candidate < best {
                    best = candidate;
                }
            }
        }
        best
    }
}

/// The conditional-variance quadratic assembled from the regression
/// solution: `Var = A x^2 + B xz + C z^2 + D - (a x + b z)^2`.
pub fn variance_quadratic(cov: &CovarianceSpec, q: &QParam) -> Result<VarianceQuadratic> {
    require_admissible(cov)?;
    let t = triplet_coeffs(cov)?;
    let cc = classical_coeffs(cov, q)?;
    let ab = &t.a * &t.b;
    Ok(VarianceQuadratic {
        x_sq: &cc.x_sq - &(&t.a * &t.a),
        xz: &cc.xz - &(&ab + &ab),
        z_sq: &cc.z_sq - &(&t.b * &t.b),
        constant: cc.constant,
    })
}

/// The same quadratic transcribed from its displayed closed form:
///
/// ```text
/// Var(Y|X,Z) = 1 - a^2 - b^2
///              - ab rho ((1+q)(1-rho^2) + 2(1-q)) / (1 - q rho^2)
///              - (ab (1-q) / (1 - q rho^2)) (z rho - x)(rho x - z)
/// ```
///
/// with `rho = <f,h>`. Kept as an independent route so the regression
/// assembly above is cross-checked, term by term, rather than trusted.
pub fn variance_quadratic_direct(cov: &CovarianceSpec, q: &QParam) -> Result<VarianceQuadratic> {
    require_admissible(cov)?;
    let t = triplet_coeffs(cov)?;
    let rho = cov.entry(0, 2);
    let one = int(1);
    let two = int(2);
    let rho_sq = rho * rho;
    let denom = &one - &(q.value() * &rho_sq);
    let ab = &t.a * &t.b;
    // (z rho - x)(rho x - z) = -rho x^2 + (1 + rho^2) xz - rho z^2.
    let k = &(&ab * &(&one - q.value())) / &denom;
    let diag = &k * rho;
    let mixer = &(&(&one + q.value()) * &(&one - &rho_sq)) + &(&two * &(&one - q.value()));
    let constant =
        &(&(&one - &(&t.a * &t.a)) - &(&t.b * &t.b)) - &(&(&(&ab * rho) * &mixer) / &denom);
    Ok(VarianceQuadratic {
        x_sq: diag.clone(),
        xz: -(&k * &(&one + &rho_sq)),
        z_sq: diag,
        constant,
    })
}

/// Squared half-width of the support square: `(2/sqrt(1-q))^2 = 4/(1-q)`.
/// Requires `-1 < q < 1`.
pub fn support_halfwidth_sq(q: &QParam) -> Result<Scalar> {
    q.require_open_interval()?;
    Ok(&int(4) / &(&int(1) - q.value()))
}

/// Exact minimum of the conditional variance of `Y` given `(X, Z)` over
/// the closed support square, for `-1 < q < 1`.
///
/// Both constructions of the quadratic are computed and compared; a
/// disagreement would be an internal inconsistency between the regression
/// solution and its displayed closed form, so it panics rather than
/// returning a value.
pub fn variance_min(cov: &CovarianceSpec, q: &QParam) -> Result<Scalar> {
    q.require_open_interval()?;
    let assembled = variance_quadratic(cov, q)?;
    let transcribed = variance_quadratic_direct(cov, q)?;
    assert_eq!(
        assembled, transcribed,
        "conditional-variance routes disagree; the regression assembly or \
         the closed-form transcription is wrong"
    );
    let l_sq = support_halfwidth_sq(q)?;
    Ok(assembled.min_over_square(&l_sq))
}

/// Runs both feasibility tests on a standardized 3x3 covariance.
///
/// At `q = -1` the variance machinery is bypassed (`variance_min = None`,
/// non-negativity vacuously true) and the verdict rests on the Bell
/// inequality, which is always applicable there.
pub fn bell_check(cov: &CovarianceSpec, q: &QParam) -> Result<FeasibilityVerdict> {
    require_admissible(cov)?;
    let applicability = bell_applicability(cov, q)?;
    let bell_applicable = applicability.applies();
    let holds = bell_inequality_holds(cov)?;
    let bell_satisfied = bell_applicable.then_some(holds);
    let (min_value, variance_nonnegative) = if q.is_minus_one() {
        (None, true)
    } else {
        let v = variance_min(cov, q)?;
        let nonneg = !v.is_negative();
        (Some(v), nonneg)
    };
    let excluded = (bell_applicable && !holds) || !variance_nonnegative;
    Ok(FeasibilityVerdict {
        bell_applicable,
        bell_satisfied,
        variance_min: min_value,
        variance_nonnegative,
        verdict: if excluded {
            Verdict::NoClassicalVersion
        } else {
            Verdict::NotExcluded
        },
    })
}

/// Membership in the q-independent no-classical-version strip of the
/// one-parameter family `<f,h> = <g,h> = rho`, `<f,g> = fg`:
///
/// ```text
/// 2 rho^2 - 1 < fg < 2 rho - 1,   0 < rho < 1
/// ```
///
/// The lower bound is the positive-semidefiniteness boundary of the family,
/// the upper bound is where the Bell inequality starts to hold. Errors when
/// `(rho, fg)` is not an admissible covariance at all.
pub fn e1_region(rho: &Scalar, fg: &Scalar) -> Result<bool> {
    if !rho.is_positive() || rho >= &int(1) {
        return Err(Error::Domain(format!(
            "e1_region needs 0 < rho < 1, got rho = {}",
            crate::qcore::render_scalar(rho)
        )));
    }
    // Full PSD validation of the triplet, not just the determinant
    // shortcut: fg outside [-1, 1] must error too.
    let cov = CovarianceSpec::triplet(fg.clone(), rho.clone(), rho.clone())?;
    let two_rho = rho + rho;
    let inside = fg > &(&(&two_rho * rho) - &int(1)) && fg < &(&two_rho - &int(1));
    drop(cov);
    Ok(inside)
}

/// The conditional-variance quadratic of the q-Brownian motion
/// (covariance `min(s, t)`), in the *unstandardized* observations:
/// `Var = earlier_sq x_prev^2 + cross x_prev x_t + later_sq x_t^2 +
/// constant` where `x_prev` observes time `t_prev` and `x_t` observes
/// time `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrownianVarianceQuadratic {
    pub earlier_sq: Scalar,
    pub cross: Scalar,
    pub later_sq: Scalar,
    pub constant: Scalar,
}

impl BrownianVarianceQuadratic {
    /// Value at observed `(x_prev, x_t)`.
    pub fn eval(&self, x_prev: &Scalar, x_t: &Scalar) -> Scalar {
        &(&(&self.earlier_sq * &(x_prev * x_prev)) + &(&self.cross * &(x_prev * x_t)))
            + &(&(&self.later_sq * &(x_t * x_t)) + &self.constant)
    }
}

/// Validates `0 < t_prev < s < t`.
fn require_time_order(t_prev: &Scalar, s: &Scalar, t: &Scalar) -> Result<()> {
    if t_prev.is_positive() && t_prev < s && s < t {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "need 0 < t_prev < s < t, got ({}, {}, {})",
            crate::qcore::render_scalar(t_prev),
            crate::qcore::render_scalar(s),
            crate::qcore::render_scalar(t)
        )))
    }
}

/// Specializes the general conditional-variance quadratic to the
/// q-Brownian triplet `(X_{t_prev}, X_s, X_t)`, `t_prev < s < t`, and
/// rescales back to unstandardized variables.
///
/// Standardizing divides each variable by the square root of its time, so
/// the triplet covariances are square roots of time ratios — irrational in
/// general. Every radical cancels against the rescaling, though, so the
/// computation below runs entirely through the rational combinations:
///
/// ```text
/// rho^2        = t_prev / t
/// s a^2        = t_prev (t - s)^2 / (t - t_prev)^2
/// s b^2        = t (s - t_prev)^2 / (t - t_prev)^2
/// s ab rho     = w t_prev,  w = (t - s)(s - t_prev)/(t - t_prev)^2
/// s ab / sqrt(t_prev t) = w / s
/// ```
pub fn bm_cond_quadratic(
    t_prev: &Scalar,
    s: &Scalar,
    t: &Scalar,
    q: &QParam,
) -> Result<BrownianVarianceQuadratic> {
    require_time_order(t_prev, s, t)?;
    q.require_open_interval()?;
    let one = int(1);
    let gap_sq = {
        let gap = t - t_prev;
        &gap * &gap
    };
    let w = &(&(t - s) * &(s - t_prev)) / &gap_sq;
    let s_a_sq = &(t_prev
        * &{
            let d = t - s;
            &d * &d
        })
        / &gap_sq;
    let s_b_sq = &(t * &{
        let d = s - t_prev;
        &d * &d
    }) / &gap_sq;
    let s_ab_rho = &w * t_prev;
    // t * (1 - q rho^2), the denominator of every foo1 fraction once the
    // standardization is cleared.
    let denom = t - &(q.value() * t_prev);
    let one_minus_q = &one - q.value();
    // Constant: s * (1 - a^2 - b^2 - ab rho ((1+q)(1-rho^2) + 2(1-q)) / (1-q rho^2)).
    let mixer = &(&(&one + q.value()) * &(t - t_prev)) + &(&(&int(2) * &one_minus_q) * t);
    let constant = &(&(s - &s_a_sq) - &s_b_sq) - &(&(&s_ab_rho * &mixer) / &denom);
    // Quadratic part: s alpha / t_prev, s gamma / sqrt(t_prev t), s alpha / t
    // with alpha = ab (1-q) rho / (1 - q rho^2), gamma = -ab (1-q)(1+rho^2) / (1 - q rho^2).
    let earlier_sq = &(&(&one_minus_q * &s_ab_rho) * t) / &(t_prev * &denom);
    let later_sq = &(&one_minus_q * &s_ab_rho) / &denom;
    let cross = -&(&(&(&one_minus_q * &(t + t_prev)) * &w) / &denom);
    Ok(BrownianVarianceQuadratic {
        earlier_sq,
        cross,
        later_sq,
        constant,
    })
}

/// The two possible readings of the printed closed form for the q-Brownian
/// conditional variance, which in both cases is
///
/// ```text
/// P (1 + (1-q) * bracket / (t - t_prev)^2),
/// P = (t - s)(s - t_prev)/(t - q t_prev)
/// ```
///
/// with `bracket` a product of two differences of the observations. The
/// typesetting leaves ambiguous which time weight multiplies which
/// observation in the second factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketReading {
    /// Each observation is weighted by its own time:
    /// `(x_t - x_prev)(t x_t - t_prev x_prev)`.
    MatchedTimes,
    /// Each observation is weighted by the other one's time:
    /// `(x_prev - x_t)(t x_prev - t_prev x_t)`.
    CrossedTimes,
}

/// The quadratic the printed closed form denotes under the given reading.
/// [`bm_cond_quadratic`] is the source of truth; this is the cross-check
/// that resolves the ambiguity (the crossed reading is the one that
/// matches).
pub fn bm_bracket_form(
    t_prev: &Scalar,
    s: &Scalar,
    t: &Scalar,
    q: &QParam,
    reading: BracketReading,
) -> Result<BrownianVarianceQuadratic> {
    require_time_order(t_prev, s, t)?;
    q.require_open_interval()?;
    let prefactor = &(&(t - s) * &(s - t_prev)) / &(t - &(q.value() * t_prev));
    let gap_sq = {
        let gap = t - t_prev;
        &gap * &gap
    };
    let k = &(&prefactor * &(&int(1) - q.value())) / &gap_sq;
    // Either way the bracket expands to
    //   w1 x_prev^2 - (t + t_prev) x_prev x_t + w2 x_t^2,
    // with {w1, w2} = {t, t_prev}; only the assignment differs.
    let (w1, w2) = match reading {
        BracketReading::MatchedTimes => (t_prev, t),
        BracketReading::CrossedTimes => (t, t_prev),
    };
    Ok(BrownianVarianceQuadratic {
        earlier_sq: &k * w1,
        cross: -&(&k * &(t + t_prev)),
        later_sq: &k * w2,
        constant: prefactor,
    })
}

/// Conditional variance of the q-Brownian motion at time `s` given
/// observations `x_prev` at `t_prev` and `x_t` at `t` (the earlier
/// conditioning times reduce away by the Markov property).
pub fn bm_cond_variance(
    t_prev: &Scalar,
    s: &Scalar,
    t: &Scalar,
    q: &QParam,
    x_prev: &Scalar,
    x_t: &Scalar,
) -> Result<Scalar> {
    Ok(bm_cond_quadratic(t_prev, s, t, q)?.eval(x_prev, x_t))
}

/// What a region-scan cell produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanOutcome {
    /// The covariance is admissible; here is its verdict.
    Checked(FeasibilityVerdict),
    /// The grid point is not a positive-semidefinite covariance.
    InvalidPsd,
    /// `rho^2 = 1`: the outer variables are collinear and the conditional
    /// variance is undefined.
    Degenerate,
}

/// One row of a region scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub rho: Scalar,
    pub fg: Scalar,
    pub outcome: ScanOutcome,
}

/// Tabulates [`bell_check`] over the family `<f,h> = <g,h> = rho`,
/// `<f,g> = fg`, for every grid combination, rho-major. Inadmissible cells
/// become [`ScanOutcome::InvalidPsd`] / [`ScanOutcome::Degenerate`] rows
/// rather than errors so a scan always yields a full table.
pub fn region_scan(rho_grid: &[Scalar], fg_grid: &[Scalar], q: &QParam) -> Vec<ScanRow> {
    let mut rows = Vec::with_capacity(rho_grid.len() * fg_grid.len());
    for rho in rho_grid {
        for fg in fg_grid {
            let outcome = match CovarianceSpec::triplet(fg.clone(), rho.clone(), rho.clone()) {
                Err(_) => ScanOutcome::InvalidPsd,
                Ok(cov) => match bell_check(&cov, q) {
                    Ok(verdict) => ScanOutcome::Checked(verdict),
                    Err(Error::DegenerateRegression) => ScanOutcome::Degenerate,
                    Err(_) => ScanOutcome::InvalidPsd,
                },
            };
            rows.push(ScanRow {
                rho: rho.clone(),
                fg: fg.clone(),
                outcome,
            });
        }
    }
    rows
}
