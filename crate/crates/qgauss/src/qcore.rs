//! Exact scalar arithmetic, q-combinatorics, and q-Hermite polynomials.
//!
//! Everything in the core of this crate is computed over arbitrary-precision
//! rationals ([`Scalar`]); floating point appears only in the quadrature
//! module. The deformation parameter lives in a validated newtype
//! ([`QParam`]) restricted to `-1 <= q < 1`, with `q = -1` admitted as a
//! special regime for the Bell checker only.
//!
//! The combinatorial quantities provided here are
//!
//! * q-integers `[n]_q = 1 + q + ... + q^(n-1)`,
//! * q-factorials `[n]_q! = [1]_q [2]_q ... [n]_q`,
//! * monic q-Hermite polynomials defined by the three-term recurrence
//!   `x H_n(x) = H_{n+1}(x) + [n]_q H_{n-1}(x)` with `H_{-1} = 0`, `H_0 = 1`.

use std::cmp::Ordering;
use std::fmt;

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number: the single numeric currency of all core
/// computations (q, Gram entries, regression coefficients, expectations).
pub type Scalar = BigRational;

/// Builds a scalar from a machine integer.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// Builds the scalar `num/den` in lowest terms.
///
/// # Panics
/// Panics if `den == 0`; use [`parse_scalar`] for fallible construction.
pub fn rat(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Converts a scalar to the nearest `f64` (for display and for the
/// float-only quadrature bridge).
pub fn scalar_to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Renders a scalar in lowest terms as `"p"` or `"p/q"` with a positive
/// denominator. [`parse_scalar`] inverts this exactly.
pub fn render_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses an exact rational from a string.
///
/// Accepted forms: integers (`"-7"`), fractions (`"3/4"`), and decimal
/// literals with optional exponent (`"0.125"`, `"2.5e-3"`). Decimals convert
/// exactly by their literal digits, so `"0.1"` becomes `1/10`, not the
/// nearest double.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let err = |reason: &str| Error::ParseScalar {
        input: text.to_string(),
        reason: reason.to_string(),
    };
    let s = text.trim();
    if s.is_empty() {
        return Err(err("empty string"));
    }
    if let Some((numer, denom)) = s.split_once('/') {
        let n: BigInt = numer
            .trim()
            .parse()
            .map_err(|_| err("numerator is not an integer"))?;
        let d: BigInt = denom
            .trim()
            .parse()
            .map_err(|_| err("denominator is not an integer"))?;
        if d.is_zero() {
            return Err(err("denominator is zero"));
        }
        return Ok(Scalar::new(n, d));
    }
    // Decimal or integer literal, optionally with a base-10 exponent.
    let (mantissa, exponent) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e.parse().map_err(|_| err("exponent is not an integer"))?;
            (m, exp)
        }
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err("no digits"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(err("not a decimal literal"));
    }
    let joined = format!("{int_part}{frac_part}");
    let unsigned: BigInt = if joined.is_empty() {
        BigInt::zero()
    } else {
        joined.parse().map_err(|_| err("not a decimal literal"))?
    };
    let mantissa_value = BigInt::from(sign) * unsigned;
    let shift = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Ok(match shift.cmp(&0) {
        Ordering::Equal => Scalar::from_integer(mantissa_value),
        Ordering::Greater => Scalar::from_integer(mantissa_value * ten.pow(shift as u32)),
        Ordering::Less => Scalar::new(mantissa_value, ten.pow((-shift) as u32)),
    })
}

/// Raises a scalar to a non-negative integer power.
pub fn pow_scalar(x: &Scalar, k: u32) -> Scalar {
    let mut acc = Scalar::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// The deformation parameter.
///
/// Construction accepts `-1 <= q < 1`. The q-Fock machinery is meaningful on
/// the open interval; `q = -1` is flagged by [`QParam::is_minus_one`] and
/// handled by the Bell checker as a separate regime that bypasses the
/// conditional-variance computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QParam {
    value: Scalar,
}

impl QParam {
    /// Validates `-1 <= q < 1` and wraps the value.
    pub fn new(value: Scalar) -> Result<Self> {
        if value < int(-1) || value >= int(1) {
            return Err(Error::QOutOfRange(render_scalar(&value)));
        }
        Ok(QParam { value })
    }

    /// The underlying exact value.
    pub fn value(&self) -> &Scalar {
        &self.value
    }

    /// True exactly for the boundary regime `q = -1`.
    pub fn is_minus_one(&self) -> bool {
        self.value == int(-1)
    }

    /// Errors unless `-1 < q < 1` (required by the Fock-space variance
    /// machinery; the Bell inequality itself also covers `q = -1`).
    pub fn require_open_interval(&self) -> Result<()> {
        if self.is_minus_one() {
            return Err(Error::Domain(format!(
                "q = {} lies on the boundary; this operation requires -1 < q < 1",
                render_scalar(&self.value)
            )));
        }
        Ok(())
    }

    /// Nearest double, for the quadrature bridge.
    pub fn to_f64(&self) -> f64 {
        scalar_to_f64(&self.value)
    }
}

impl fmt::Display for QParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_scalar(&self.value))
    }
}

/// The q-integer `[n]_q = (1 - q^n)/(1 - q) = 1 + q + ... + q^(n-1)`,
/// computed as the geometric sum so that no division is involved.
///
/// `q_int(0, q) = 0` (empty sum).
pub fn q_int(n: u32, q: &QParam) -> Scalar {
    let mut sum = Scalar::zero();
    let mut power = Scalar::one();
    for _ in 0..n {
        sum += &power;
        power *= q.value();
    }
    sum
}

/// The q-factorial `[n]_q! = [1]_q [2]_q ... [n]_q`, with `[0]_q! = 1`.
pub fn q_factorial(n: u32, q: &QParam) -> Scalar {
    let mut product = Scalar::one();
    for k in 1..=n {
        product *= q_int(k, q);
    }
    product
}

/// Dense univariate polynomial with exact rational coefficients,
/// `coeffs[i]` being the coefficient of `x^i`.
///
/// Trailing zero coefficients are trimmed on construction, so the zero
/// polynomial is the empty list and its degree is the sentinel `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    /// A constant polynomial.
    pub fn constant(c: Scalar) -> Self {
        Polynomial::from_coeffs(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Polynomial::from_coeffs(vec![Scalar::zero(), Scalar::one()])
    }

    /// Builds a polynomial from ascending-degree coefficients, trimming
    /// trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Ascending-degree coefficient slice (no trailing zeros).
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Multiplies by `x^k` (shifts coefficients up).
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Scalar::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Exact polynomial sum.
    pub fn add(&self, other: &Polynomial) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Polynomial::from_coeffs(coeffs)
    }

    /// Exact polynomial difference.
    pub fn sub(&self, other: &Polynomial) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        Polynomial::from_coeffs(coeffs)
    }

    /// Exact polynomial product.
    pub fn mul(&self, other: &Polynomial) -> Self {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::from_coeffs(coeffs)
    }
}

impl fmt::Display for Polynomial {
    /// Renders like `x^3 - 5/2*x`, highest degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
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
            let show_coeff = deg == 0 || !magnitude.is_one();
            if show_coeff {
                f.write_str(&render_scalar(&magnitude))?;
            }
            match deg {
                0 => {}
                1 => f.write_str(if show_coeff { "*x" } else { "x" })?,
                _ => {
                    if show_coeff {
                        f.write_str("*")?;
                    }
                    write!(f, "x^{deg}")?;
                }
            }
        }
        Ok(())
    }
}

/// The monic q-Hermite polynomial `H_n`, obtained by unrolling the
/// recurrence `H_{n+1}(x) = x H_n(x) - [n]_q H_{n-1}(x)` from
/// `H_{-1} = 0`, `H_0 = 1`.
///
/// The first few are `H_1 = x`, `H_2 = x^2 - 1`, `H_3 = x^3 - (2+q) x`.
pub fn hermite(n: u32, q: &QParam) -> Polynomial {
    let mut prev = Polynomial::zero(); // H_{-1}
    let mut current = Polynomial::constant(Scalar::one()); // H_0
    for k in 0..n {
        let next = current.shift_up(1).sub(&prev.scale(&q_int(k, q)));
        prev = current;
        current = next;
    }
    current
}
