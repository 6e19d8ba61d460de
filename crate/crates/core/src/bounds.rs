//! Closed-form bounds on the chromatic, achromatic and pseudoachromatic
//! indices of AG(n,q), in exact integer arithmetic.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colorings::Method;
use crate::field::prime_power;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("dimension {0} is below 2")]
    Dimension(u32),
    #[error("value does not fit in 128 bits")]
    Overflow,
}

fn check(n: u32, q: u64) -> Result<(), BoundsError> {
    if prime_power(q).is_none() {
        return Err(BoundsError::NotPrimePower(q));
    }
    if n < 2 {
        return Err(BoundsError::Dimension(n));
    }
    Ok(())
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn to_u128(x: &BigUint) -> Result<u128, BoundsError> {
    u128::try_from(x).map_err(|_| BoundsError::Overflow)
}

fn pow(q: u64, e: u32) -> BigUint {
    big(q).pow(e)
}

/// `(q^e - 1)/(q - 1)`, the number of points of PG(e-1,q).
fn gauss(q: u64, e: u32) -> BigUint {
    (pow(q, e) - 1u32) / (q - 1)
}

/// χ′(AG(n,q)) = (q^n − 1)/(q − 1).
pub fn chromatic_index(n: u32, q: u64) -> Result<u128, BoundsError> {
    check(n, q)?;
    to_u128(&gauss(q, n))
}

/// Number of lines of AG(n,q).
pub fn line_count(n: u32, q: u64) -> Result<u128, BoundsError> {
    check(n, q)?;
    to_u128(&(pow(q, n - 1) * gauss(q, n)))
}

/// ψ′(AG(2,q)) = ⌊(q+1)²/2⌋.
pub fn plane_psi(q: u64) -> u128 {
    let q = q as u128;
    (q + 1) * (q + 1) / 2
}

/// α′(AG(2,q)) = χ′(AG(2,q)) = q + 1.
pub fn plane_alpha(q: u64) -> u128 {
    q as u128 + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiUpper {
    /// Floor of the radical bound.
    pub exact: u128,
    /// Floor of its estimate `√v·((v−1)/(q−1) − (q+1)/2) + (q²+1)/2`.
    pub simplified: u128,
}

/// Upper bounds on ψ′(AG(n,q)) with v = q^n:
///
/// exact = ⌊(√(4v(v−1)(v−q²) + (q²+1)²(q−1)²) + (q²+1)(q−1)) / (2(q−1))⌋.
///
/// For n = 2 both entries are the exact plane value.
pub fn psi_upper(n: u32, q: u64) -> Result<PsiUpper, BoundsError> {
    check(n, q)?;
    if n == 2 {
        let v = plane_psi(q);
        return Ok(PsiUpper {
            exact: v,
            simplified: v,
        });
    }
    let v = pow(q, n);
    let q2 = big(q * q);
    let c = (&q2 + 1u32) * (q - 1);
    let radicand = 4u32 * &v * (&v - 1u32) * (&v - &q2) + &c * &c;
    // ⌊(√R + c)/d⌋ = ⌊(⌊√R⌋ + c)/d⌋ for integers c and d > 0
    let exact = (radicand.sqrt() + &c) / (2 * (q - 1));

    // √v·a/2 + b/2 with a = 2(v−1)/(q−1) − (q+1), b = q²+1
    let a = 2u32 * gauss(q, n) - (q + 1);
    let b = &q2 + 1u32;
    let simplified = ((&a * &a * &v).sqrt() + b) / 2u32;
    Ok(PsiUpper {
        exact: to_u128(&exact)?,
        simplified: to_u128(&simplified)?,
    })
}

/// Lower bounds from the constructions; `None` where no construction
/// applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBounds {
    pub psi: u128,
    pub alpha: Option<u128>,
    /// The odd-dimension pseudoachromatic formula, kept separately for n = 3
    /// where it reads q³ + 1.
    pub psi_odd_formula: Option<u128>,
}

/// ψ′ lower bound from the spread construction on AG(2k,q), k ≥ 2.
fn even_psi(k: u32, q: u64) -> BigUint {
    let qk = pow(q, k);
    let q2k = pow(q, 2 * k);
    if q % 2 == 1 {
        &qk * (q2k - 1u32) / (2 * (q - 1))
    } else {
        &qk * (q2k - q) / (2 * (q - 1)) + 1u32
    }
}

/// ψ′ lower bound from the good-partition construction on AG(2k+1,q).
fn odd_psi(k: u32, q: u64) -> BigUint {
    pow(q, k + 2) * (pow(q, 2 * k) - 1u32) / (q * q - 1) + 1u32
}

/// α′ lower bound on AG(2k,q), k ≥ 2, with ε = (q^k + 1) mod 3.
fn even_alpha(k: u32, q: u64) -> BigUint {
    let qk = pow(q, k);
    let eps = (&qk + 1u32) % 3u32;
    ((&qk + 1u32 - &eps) / 3u32 * (&qk + 2u32) + &eps) * gauss(q, k)
}

/// α′ lower bound on AG(3,q).
fn ag3_alpha(q: u64) -> u128 {
    let q = q as u128;
    q * (q + 1) * (q + 1) / 2 + 1
}

pub fn lower_bounds(n: u32, q: u64) -> Result<LowerBounds, BoundsError> {
    check(n, q)?;
    let out = match n {
        2 => LowerBounds {
            psi: plane_psi(q),
            alpha: Some(plane_alpha(q)),
            psi_odd_formula: None,
        },
        3 => {
            let general = to_u128(&odd_psi(1, q))?;
            let alpha = ag3_alpha(q);
            LowerBounds {
                psi: general.max(alpha),
                alpha: Some(alpha),
                psi_odd_formula: Some(general),
            }
        }
        n if n % 2 == 0 => LowerBounds {
            psi: to_u128(&even_psi(n / 2, q))?,
            alpha: Some(to_u128(&even_alpha(n / 2, q))?),
            psi_odd_formula: None,
        },
        n => {
            let general = to_u128(&odd_psi(n / 2, q))?;
            LowerBounds {
                psi: general,
                alpha: None,
                psi_odd_formula: Some(general),
            }
        }
    };
    Ok(out)
}

/// Class count of a construction on AG(n,q), or `None` if it does not apply.
pub fn construction_count(method: Method, n: u32, q: u64) -> Option<u128> {
    check(n, q).ok()?;
    method.check_dimension(n as usize).ok()?;
    let v = match method {
        Method::Chromatic => gauss(q, n),
        Method::PlaneAchromatic => return Some(plane_alpha(q)),
        Method::PlanePseudo => return Some(plane_psi(q)),
        Method::EvenPseudo => even_psi(n / 2, q),
        Method::OddPseudo => odd_psi(n / 2, q),
        Method::EvenAchromatic => even_alpha(n / 2, q),
        Method::Ag3Achromatic => return Some(ag3_alpha(q)),
    };
    to_u128(&v).ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub n: u32,
    pub q: u64,
    pub v: u128,
    pub lines: u128,
    pub chromatic: u128,
    pub psi_lower: u128,
    pub alpha_lower: Option<u128>,
    pub psi_upper_exact: u128,
    pub psi_upper_simplified: u128,
    pub plane_exact_psi: Option<u128>,
    pub plane_exact_alpha: Option<u128>,
}

impl BoundsRow {
    /// Every lower bound is at most the exact upper bound.
    pub fn is_consistent(&self) -> bool {
        self.psi_lower <= self.psi_upper_exact
            && self.alpha_lower.is_none_or(|a| a <= self.psi_upper_exact)
            && self.chromatic <= self.psi_upper_exact
    }
}

pub fn bounds_row(n: u32, q: u64) -> Result<BoundsRow, BoundsError> {
    let lower = lower_bounds(n, q)?;
    let upper = psi_upper(n, q)?;
    let plane = n == 2;
    Ok(BoundsRow {
        n,
        q,
        v: to_u128(&pow(q, n))?,
        lines: line_count(n, q)?,
        chromatic: chromatic_index(n, q)?,
        psi_lower: lower.psi,
        alpha_lower: lower.alpha,
        psi_upper_exact: upper.exact,
        psi_upper_simplified: upper.simplified,
        plane_exact_psi: plane.then(|| plane_psi(q)),
        plane_exact_alpha: plane.then(|| plane_alpha(q)),
    })
}

/// Rows for every (q, n), q outer and n inner.
pub fn bounds_table(ns: &[u32], qs: &[u64]) -> Result<Vec<BoundsRow>, BoundsError> {
    let mut rows = Vec::with_capacity(ns.len() * qs.len());
    for &q in qs {
        for &n in ns {
            rows.push(bounds_row(n, q)?);
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: &str =
    "n,q,v,lines,chromatic,psi_lower,alpha_lower,psi_upper_exact,psi_upper_simplified,plane_exact_psi,plane_exact_alpha";

pub fn to_csv(rows: &[BoundsRow]) -> String {
    let opt = |x: Option<u128>| x.map(|v| v.to_string()).unwrap_or_default();
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.q,
            r.v,
            r.lines,
            r.chromatic,
            r.psi_lower,
            opt(r.alpha_lower),
            r.psi_upper_exact,
            r.psi_upper_simplified,
            opt(r.plane_exact_psi),
            opt(r.plane_exact_alpha),
        ));
    }
    out
}
