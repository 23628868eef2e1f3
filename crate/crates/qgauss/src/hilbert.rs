//! Finite-dimensional real inner-product spaces presented by a Gram matrix.
//!
//! Vectors here are abstract: a [`Vector`] is a rational coordinate
//! combination of formal basis elements whose pairwise inner products are the
//! entries of the [`GramSpace`] matrix. This keeps every inner product exact —
//! a Cholesky embedding into Euclidean coordinates would introduce square
//! roots, which the rest of the crate cannot tolerate.
//!
//! Positive semidefiniteness is verified on construction by two exact checks:
//! all leading principal minors must be non-negative (this yields the
//! counterexample reported on failure), and a symmetric Gaussian elimination
//! with positive-diagonal pivoting must terminate cleanly (this closes the
//! gap minors leave open for rank-deficient matrices such as
//! `[[0,0],[0,-1]]`).

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::qcore::{render_scalar, Scalar};

/// Checks that `m` is a non-empty square matrix.
fn check_square(m: &[Vec<Scalar>]) -> Result<usize> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(Error::RaggedMatrix);
    }
    Ok(n)
}

/// Checks symmetry, reporting the first offending entry.
fn check_symmetric(m: &[Vec<Scalar>]) -> Result<()> {
    for (i, row) in m.iter().enumerate() {
        for (j, entry) in row.iter().enumerate().skip(i + 1) {
            if *entry != m[j][i] {
                return Err(Error::NotSymmetric { i, j });
            }
        }
    }
    Ok(())
}

/// Exact determinant by fraction Gaussian elimination with row pivoting.
// Index loops: the elimination update reads row `col` while writing row `r`.
#[allow(clippy::needless_range_loop)]
pub(crate) fn det(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut sign = false;
    let mut result = Scalar::one();
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Scalar::zero();
        };
        if pivot_row != col {
            a.swap(pivot_row, col);
            sign = !sign;
        }
        let pivot = a[col][col].clone();
        result *= &pivot;
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pivot;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    if sign {
        -result
    } else {
        result
    }
}

/// Exact positive-semidefiniteness test for a symmetric matrix.
///
/// First pass: every leading principal minor must be `>= 0`; a negative minor
/// is reported with its order and value. Second pass: symmetric elimination,
/// always pivoting on a strictly positive diagonal entry; if none remains,
/// the leftover block must vanish identically. Semidefinite (rank-deficient)
/// matrices pass — callers that cannot tolerate degeneracy check separately.
pub(crate) fn check_psd(m: &[Vec<Scalar>]) -> Result<()> {
    let n = m.len();
    for k in 1..=n {
        let leading: Vec<Vec<Scalar>> = m[..k].iter().map(|row| row[..k].to_vec()).collect();
        let minor = det(&leading);
        if minor.is_negative() {
            return Err(Error::NotPositiveSemidefinite {
                detail: format!(
                    "leading principal minor of order {k} equals {}",
                    render_scalar(&minor)
                ),
            });
        }
    }
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut remaining: Vec<usize> = (0..n).collect();
    while !remaining.is_empty() {
        let Some(pos) = remaining.iter().position(|&i| a[i][i].is_positive()) else {
            // No positive diagonal left: PSD now requires the rest to be zero.
            for &i in &remaining {
                if a[i][i].is_negative() {
                    return Err(Error::NotPositiveSemidefinite {
                        detail: format!("diagonal entry {i} turns negative under elimination"),
                    });
                }
            }
            for &i in &remaining {
                for &j in &remaining {
                    if !a[i][j].is_zero() {
                        return Err(Error::NotPositiveSemidefinite {
                            detail: format!(
                                "entry ({i},{j}) is nonzero although its diagonal vanished"
                            ),
                        });
                    }
                }
            }
            return Ok(());
        };
        let p = remaining.swap_remove(pos);
        let pivot = a[p][p].clone();
        // Schur complement on the remaining index set.
        for &i in &remaining {
            if a[i][p].is_zero() {
                continue;
            }
            let factor = &a[i][p] / &pivot;
            for &j in &remaining {
                let delta = &factor * &a[p][j];
                a[i][j] -= delta;
            }
        }
    }
    Ok(())
}

/// A finite abstract basis with a rational Gram matrix.
///
/// Spaces are shared through `Arc`; vectors and tensor states keep a handle
/// to theirs. Two spaces are interchangeable when their Gram matrices are
/// equal, even if allocated separately.
#[derive(Debug, PartialEq, Eq)]
pub struct GramSpace {
    gram: Vec<Vec<Scalar>>,
}

impl GramSpace {
    /// Validates symmetry and positive semidefiniteness, then wraps the
    /// matrix as a shared space.
    pub fn new(gram: Vec<Vec<Scalar>>) -> Result<Arc<Self>> {
        check_square(&gram)?;
        check_symmetric(&gram)?;
        check_psd(&gram)?;
        Ok(Arc::new(GramSpace { gram }))
    }

    /// Number of basis elements.
    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    /// The inner product of basis elements `i` and `j`.
    pub fn gram_entry(&self, i: usize, j: usize) -> &Scalar {
        &self.gram[i][j]
    }

    /// The `i`-th standard basis vector.
    pub fn basis_vector(self: &Arc<Self>, i: usize) -> Result<Vector> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: self.dim(),
            });
        }
        let mut coords = vec![Scalar::zero(); self.dim()];
        coords[i] = Scalar::one();
        Ok(Vector {
            space: Arc::clone(self),
            coords,
        })
    }

    /// All standard basis vectors, in order.
    pub fn basis(self: &Arc<Self>) -> Vec<Vector> {
        (0..self.dim())
            .map(|i| self.basis_vector(i).expect("index in range"))
            .collect()
    }

    /// True when the two handles denote the same bilinear form.
    pub(crate) fn same_space(a: &Arc<GramSpace>, b: &Arc<GramSpace>) -> bool {
        Arc::ptr_eq(a, b) || a.gram == b.gram
    }
}

/// A vector in a [`GramSpace`]: exact coordinates over the formal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    space: Arc<GramSpace>,
    coords: Vec<Scalar>,
}

impl Vector {
    /// Wraps a coordinate list, which must match the space dimension.
    pub fn new(space: &Arc<GramSpace>, coords: Vec<Scalar>) -> Result<Self> {
        if coords.len() != space.dim() {
            return Err(Error::BadCoordinateLength {
                expected: space.dim(),
                got: coords.len(),
            });
        }
        Ok(Vector {
            space: Arc::clone(space),
            coords,
        })
    }

    /// The space this vector lives in.
    pub fn space(&self) -> &Arc<GramSpace> {
        &self.space
    }

    /// Coordinates over the formal basis.
    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// True when every coordinate vanishes.
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Inner products of this vector against every basis element:
    /// `dual[k] = <self, e_k>`. One Gram multiplication, reused by the Fock
    /// operators so they never recompute per-term inner products.
    pub(crate) fn dual_coords(&self) -> Vec<Scalar> {
        let n = self.space.dim();
        (0..n)
            .map(|k| {
                let mut acc = Scalar::zero();
                for (i, c) in self.coords.iter().enumerate() {
                    if !c.is_zero() {
                        acc += c * self.space.gram_entry(i, k);
                    }
                }
                acc
            })
            .collect()
    }
}

impl fmt::Display for Vector {
    /// Renders like `e1 - 1/2*e3` (1-based basis labels).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
                first = false;
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let magnitude = c.abs();
            if !magnitude.is_one() {
                write!(f, "{}*", render_scalar(&magnitude))?;
            }
            write!(f, "e{}", i + 1)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Add for &Vector {
    type Output = Vector;

    /// Coordinate-wise sum. Panics on mismatched spaces; fallible call sites
    /// should use [`inner`]/[`project`]-style checked entry points instead.
    fn add(self, rhs: &Vector) -> Vector {
        assert!(
            GramSpace::same_space(&self.space, &rhs.space),
            "vector addition across different Gram spaces"
        );
        Vector {
            space: Arc::clone(&self.space),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Vector {
    type Output = Vector;

    fn sub(self, rhs: &Vector) -> Vector {
        assert!(
            GramSpace::same_space(&self.space, &rhs.space),
            "vector subtraction across different Gram spaces"
        );
        Vector {
            space: Arc::clone(&self.space),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul<&Scalar> for &Vector {
    type Output = Vector;

    fn mul(self, rhs: &Scalar) -> Vector {
        Vector {
            space: Arc::clone(&self.space),
            coords: self.coords.iter().map(|a| a * rhs).collect(),
        }
    }
}

/// Exact bilinear form value `coords(u)^T * gram * coords(v)`.
pub fn inner(u: &Vector, v: &Vector) -> Result<Scalar> {
    if !GramSpace::same_space(&u.space, &v.space) {
        return Err(Error::SpaceMismatch);
    }
    let mut acc = Scalar::zero();
    for (i, a) in u.coords.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in v.coords.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            acc += a * b * u.space.gram_entry(i, j);
        }
    }
    Ok(acc)
}

/// Solves the linear system `a x = rhs` exactly, choosing `x = 0` for free
/// variables. The caller guarantees consistency (here: normal equations,
/// whose right-hand side always lies in the range of the Gram matrix).
// Index loops: the elimination update reads row `row` while writing row `r`.
#[allow(clippy::needless_range_loop)]
fn solve_consistent(mut a: Vec<Vec<Scalar>>, mut rhs: Vec<Scalar>) -> Vec<Scalar> {
    let n = rhs.len();
    let mut pivot_cols: Vec<Option<usize>> = Vec::new(); // per pivot row: its column
    let mut row = 0;
    for col in 0..n {
        let Some(pivot_row) = (row..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, pivot_row);
        rhs.swap(row, pivot_row);
        let pivot = a[row][col].clone();
        for r in (row + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pivot;
            for c in col..n {
                let delta = &factor * &a[row][c];
                a[r][c] -= delta;
            }
            let delta = &factor * &rhs[row];
            rhs[r] -= delta;
        }
        pivot_cols.push(Some(col));
        row += 1;
        if row == n {
            break;
        }
    }
    let mut x = vec![Scalar::zero(); n];
    for (r, col) in pivot_cols.iter().enumerate().rev() {
        let col = col.expect("pivot column recorded");
        let mut acc = rhs[r].clone();
        for c in (col + 1)..n {
            if !a[r][c].is_zero() {
                acc -= &a[r][c] * &x[c];
            }
        }
        x[col] = acc / &a[r][col];
    }
    x
}

/// Orthogonal projection of `target` onto the span of `onto`.
///
/// Solves the normal equations `G alpha = r` with `G[k][l] = <onto_k,
/// onto_l>` and `r[k] = <onto_k, target>` by rank-revealing exact
/// elimination, setting free variables to zero. A linearly dependent family
/// is fine: the coefficient vector is then one of many representations of
/// the unique projection.
pub fn project(target: &Vector, onto: &[Vector]) -> Result<Vector> {
    if onto.is_empty() {
        return Err(Error::EmptyProjection);
    }
    for v in onto {
        if !GramSpace::same_space(&target.space, &v.space) {
            return Err(Error::SpaceMismatch);
        }
    }
    let k = onto.len();
    let mut normal = vec![vec![Scalar::zero(); k]; k];
    let mut rhs = vec![Scalar::zero(); k];
    for i in 0..k {
        for j in i..k {
            let g = inner(&onto[i], &onto[j])?;
            normal[i][j] = g.clone();
            normal[j][i] = g;
        }
        rhs[i] = inner(&onto[i], target)?;
    }
    let alpha = solve_consistent(normal, rhs);
    let mut coords = vec![Scalar::zero(); target.space.dim()];
    for (a, v) in alpha.iter().zip(onto) {
        if a.is_zero() {
            continue;
        }
        for (c, vc) in coords.iter_mut().zip(&v.coords) {
            *c += a * vc;
        }
    }
    Vector::new(&target.space, coords)
}

/// A symmetric positive-semidefinite matrix of pairwise inner products;
/// the input to every feasibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovarianceSpec {
    entries: Vec<Vec<Scalar>>,
}

impl CovarianceSpec {
    /// Validates shape, symmetry, and positive semidefiniteness.
    pub fn new(entries: Vec<Vec<Scalar>>) -> Result<Self> {
        check_square(&entries)?;
        check_symmetric(&entries)?;
        check_psd(&entries)?;
        Ok(CovarianceSpec { entries })
    }

    /// The standardized 3x3 covariance of an ordered triplet `(f, g, h)`
    /// with `<f,g> = fg`, `<f,h> = fh`, `<g,h> = gh`.
    pub fn triplet(fg: Scalar, fh: Scalar, gh: Scalar) -> Result<Self> {
        let one = Scalar::one;
        CovarianceSpec::new(vec![
            vec![one(), fg.clone(), fh.clone()],
            vec![fg, one(), gh.clone()],
            vec![fh, gh, one()],
        ])
    }

    /// Side length of the matrix.
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// One entry (callers index from zero).
    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i][j]
    }

    /// The full entry matrix.
    pub fn entries(&self) -> &[Vec<Scalar>] {
        &self.entries
    }

    /// True when every diagonal entry is 1.
    pub fn is_standardized(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, row)| row[i].is_one())
    }

    /// Errors unless the diagonal is all ones.
    pub fn require_standardized(&self) -> Result<()> {
        for (i, row) in self.entries.iter().enumerate() {
            if !row[i].is_one() {
                return Err(Error::NotStandardized {
                    index: i,
                    value: render_scalar(&row[i]),
                });
            }
        }
        Ok(())
    }

    /// Errors unless the matrix is `expected` by `expected`.
    pub fn require_size(&self, expected: usize) -> Result<()> {
        if self.size() != expected {
            return Err(Error::CovarianceSize {
                expected,
                got: self.size(),
            });
        }
        Ok(())
    }
}

/// Realizes a covariance as a Gram space whose standard basis vectors
/// reproduce it: `inner(v_i, v_j) = C[i][j]` exactly.
pub fn covariance_space(c: &CovarianceSpec) -> Result<(Arc<GramSpace>, Vec<Vector>)> {
    let space = GramSpace::new(c.entries.clone())?;
    let basis = space.basis();
    Ok((space, basis))
}
