//! Exact rational scalars used throughout the crate.
//!
//! Everything at desk scale fits comfortably in an `i64`-backed ratio; the
//! two places that genuinely need arbitrary precision (fraction-free rank
//! computation in the matrix oracle, LP feasibility in the test oracles) use
//! `num-bigint` directly instead.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

/// Exact rational number.
pub type Rat = Ratio<i64>;

/// Shorthand constructor: `rat(1, 2)` is one half.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Ratio::new(numer, denom)
}

/// Integer as a rational.
pub fn rint(n: i64) -> Rat {
    Ratio::from_integer(n)
}

/// Parse `"3"`, `"-1/2"`, `"5/4"` into a rational.
///
/// Only integer and `p/q` forms are accepted; decimal notation is not, so
/// that inputs stay exact by construction.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = i64::from_str(num.trim()).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let d = i64::from_str(den.trim()).map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if d == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Ratio::new(n, d))
    } else {
        let n = i64::from_str(s).map_err(|e| format!("bad rational {s:?}: {e}"))?;
        Ok(Ratio::from_integer(n))
    }
}

/// Render without a spurious `/1` (matches what `parse_rat` accepts).
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Is `r` an integer?
pub fn is_integer(r: &Rat) -> bool {
    r.is_integer()
}

/// Floor of a rational as an `i64`.
pub fn floor(r: &Rat) -> i64 {
    r.floor().to_integer()
}

/// The fractional part canonicalized to the half-open interval `(-1/2, 1/2]`.
///
/// This is the representative used for residue-class bookkeeping: two
/// rationals lie in the same coset of the integers exactly when their
/// canonical residues agree.
pub fn centered_residue(r: &Rat) -> Rat {
    let mut f = r - rint(floor(r)); // in [0, 1)
    if f > rat(1, 2) {
        f -= Rat::one();
    }
    f
}

/// Dot product of two equal-length rational vectors.
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sum of squares of the entries.
pub fn norm_sq(a: &[Rat]) -> Rat {
    a.iter().map(|x| x * x).sum()
}

/// Solve the square linear system `M x = b` by Gaussian elimination.
///
/// Returns `None` when the system is singular or inconsistent. `M` is given
/// row-major. This is only ever used on small (rank-by-rank) systems.
// Indexed loops keep the row/column bookkeeping of the elimination legible.
#[allow(clippy::needless_range_loop)]
pub fn solve_linear(m: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = b.len();
    debug_assert!(m.len() == n && m.iter().all(|row| row.len() == n));
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(*rhs);
            r
        })
        .collect();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let pivot = a[row][col];
        for x in a[row].iter_mut() {
            *x /= pivot;
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in col..=n {
                    let sub = f * a[row][c];
                    a[r][c] -= sub;
                }
            }
        }
        row += 1;
        if row == n {
            break;
        }
    }
    // Back-substitution is already done (full reduction); read the solution
    // column, rejecting inconsistent or underdetermined systems.
    let mut x = vec![Rat::zero(); n];
    let mut seen = vec![false; n];
    for r in 0..n {
        let lead = (0..n).find(|&c| !a[r][c].is_zero());
        match lead {
            Some(c) => {
                x[c] = a[r][n];
                seen[c] = true;
            }
            None => {
                if !a[r][n].is_zero() {
                    return None; // 0 = nonzero
                }
            }
        }
    }
    if seen.iter().all(|&s| s) {
        Some(x)
    } else {
        None
    }
}

/// `|r|` as a rational.
pub fn abs(r: &Rat) -> Rat {
    r.abs()
}
