//! The triangular-sequence calculus: correspondences between partitions
//! and weakly decreasing rational sequences, one per residue class of the
//! sequence entries.
//!
//! Each calculus is a pair of maps `v_*` (partition → sequence) and `p_*`
//! (sequence → partition); a sequence is *triangular* for the calculus when
//! it is recovered exactly by the round trip `v_*(p_*(·))`. The four
//! calculi:
//!
//! * `eps` — signed entries in a fixed coset `ε + Z`. The parts of the
//!   partition become multiplicities of the values `ε, ε∓1, ε±1, ε∓2, …`
//!   in order of increasing distance from zero (the sign of `ε` decides
//!   which neighbour comes first).
//! * `int` — nonnegative integer entries (folded coordinates). Here the
//!   partition side is a pivot decomposition: the pivot part `2μ₀` is the
//!   doubled multiplicity of the value 0 and each remaining value `i ≥ 1`
//!   contributes its multiplicity twice. Triangularity additionally
//!   requires the pivot-dominance constraint `2μ₀ ≥ μ₁`.
//! * `half` — entries among the positive odd half-integers `1/2, 3/2, …`.
//! * `quarter` — entries among the positive odd quarter-integers
//!   `1/4, 3/4, 5/4, …`.
//!
//! The module also buckets a coordinate vector into the residue classes on
//! which those calculi operate: by centered residue with signs kept (the
//! linear case) or by residue of absolute values (the folded case).

use crate::partitions::{Partition, StarPartition};
use crate::rat::{self, centered_residue, format_rat, is_integer, rat, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TriangularError {
    #[error("value {value} is outside the domain of the {calculus} calculus")]
    OutOfDomain {
        value: String,
        calculus: &'static str,
    },
}

fn out_of_domain(v: &Rat, calculus: &'static str) -> TriangularError {
    TriangularError::OutOfDomain {
        value: format_rat(v),
        calculus,
    }
}

fn sorted_desc(v: &[Rat]) -> Vec<Rat> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.cmp(a));
    s
}

/// Multiplicities of the distinct values of `v`.
fn counts(v: &[Rat]) -> BTreeMap<Rat, u32> {
    let mut m = BTreeMap::new();
    for x in v {
        *m.entry(*x).or_insert(0) += 1;
    }
    m
}

/// The value enumeration of the `eps` calculus: `ε` first, then the two
/// neighbours at each distance, nearer-to-zero first.
fn eps_values(eps: &Rat, len: usize) -> Vec<Rat> {
    let mut vals = Vec::with_capacity(len);
    if len > 0 {
        vals.push(*eps);
    }
    let mut k = 1i64;
    while vals.len() < len {
        let down = *eps - rat::rint(k);
        let up = *eps + rat::rint(k);
        // For ε ≥ 0 the value ε−k is the nearer of the pair; for ε < 0 it
        // is ε+k.
        if *eps >= Rat::zero() {
            vals.push(down);
            vals.push(up);
        } else {
            vals.push(up);
            vals.push(down);
        }
        k += 1;
    }
    vals.truncate(len);
    vals
}

/// Sequence of the `eps` calculus: part `i` of `p` becomes the multiplicity
/// of the `i`-th enumerated value. Weakly decreasing.
pub fn v_eps(eps: &Rat, p: &Partition) -> Vec<Rat> {
    let vals = eps_values(eps, p.len());
    let mut out = Vec::with_capacity(p.size() as usize);
    for (part, value) in p.parts().iter().zip(vals) {
        out.extend(std::iter::repeat_n(value, *part as usize));
    }
    sorted_desc(&out)
}

/// Partition of the `eps` calculus: the multiplicities of the distinct
/// values of `v`, sorted. Every entry must lie in `ε + Z`.
pub fn p_eps(eps: &Rat, v: &[Rat]) -> Result<Partition, TriangularError> {
    for x in v {
        if !is_integer(&(*x - *eps)) {
            return Err(out_of_domain(x, "eps"));
        }
    }
    Ok(Partition::new(counts(v).into_values()))
}

/// Is `v` recovered by the `eps` round trip?
pub fn is_triangular_eps(eps: &Rat, v: &[Rat]) -> Result<bool, TriangularError> {
    let p = p_eps(eps, v)?;
    Ok(v_eps(eps, &p) == sorted_desc(v))
}

/// Sequence of the `int` calculus: the pivot decomposition's `μ₀` counts
/// zeros and each doubled value `μ_i` is the multiplicity of `i`.
pub fn v_int(sp: &StarPartition) -> Vec<Rat> {
    let mut out = Vec::new();
    out.extend(std::iter::repeat_n(Rat::zero(), sp.mu0() as usize));
    for (i, mult) in sp.doubled_values().iter().enumerate() {
        out.extend(std::iter::repeat_n(rat::rint(i as i64 + 1), *mult as usize));
    }
    sorted_desc(&out)
}

/// Pivot decomposition of the `int` calculus: `[2·m(0), m(1)², m(2)², …]`
/// with the pivot marking the doubled zero-multiplicity. Entries must be
/// nonnegative integers.
pub fn p_int(v: &[Rat]) -> Result<StarPartition, TriangularError> {
    for x in v {
        if !is_integer(x) || *x < Rat::zero() {
            return Err(out_of_domain(x, "int"));
        }
    }
    let m = counts(v);
    let m0 = m.get(&Rat::zero()).copied().unwrap_or(0);
    let mut parts = Vec::new();
    if m0 > 0 {
        parts.push(2 * m0);
    }
    for (value, mult) in &m {
        if *value > Rat::zero() {
            parts.push(*mult);
            parts.push(*mult);
        }
    }
    let underlying = Partition::new(parts);
    let pivot_index = if m0 > 0 {
        Some(
            underlying
                .parts()
                .iter()
                .position(|&p| p == 2 * m0)
                .expect("pivot part present"),
        )
    } else {
        None
    };
    Ok(StarPartition::new(underlying, pivot_index).expect("constructed parse is valid"))
}

/// Is `v` recovered by the `int` round trip, with the pivot-dominance
/// constraint `2μ₀ ≥ μ₁` satisfied? (The constraint depends only on the
/// underlying partition: all pivot decompositions share their pivot value.)
pub fn is_triangular_int(v: &[Rat]) -> Result<bool, TriangularError> {
    let sp = p_int(v)?;
    Ok(sp.pivot_first() && v_int(&sp) == sorted_desc(v))
}

/// The multiplicity profile of a nonnegative integer vector with the zero
/// multiplicity doubled *plus one*: `[2m(0)+1, m(1), m(1), m(2), m(2), …]`.
/// This is the odd-size companion of the profile underlying [`p_int`],
/// used by the orbit dictionary of symplectic ambients (whose integral
/// factors are odd-orthogonal).
pub fn odd_pivot_profile(v: &[Rat]) -> Result<Partition, TriangularError> {
    for x in v {
        if !is_integer(x) || *x < Rat::zero() {
            return Err(out_of_domain(x, "int"));
        }
    }
    let m = counts(v);
    let m0 = m.get(&Rat::zero()).copied().unwrap_or(0);
    let mut parts = vec![2 * m0 + 1];
    for (value, mult) in &m {
        if *value > Rat::zero() {
            parts.push(*mult);
            parts.push(*mult);
        }
    }
    Ok(Partition::new(parts))
}

fn positive_odd_over(denom: i64, i: usize) -> Rat {
    rat(2 * (i as i64) + 1, denom)
}

fn v_odd_ladder(denom: i64, p: &Partition) -> Vec<Rat> {
    let mut out = Vec::new();
    for (i, part) in p.parts().iter().enumerate() {
        out.extend(std::iter::repeat_n(positive_odd_over(denom, i), *part as usize));
    }
    sorted_desc(&out)
}

fn p_odd_ladder(
    denom: i64,
    calculus: &'static str,
    v: &[Rat],
) -> Result<Partition, TriangularError> {
    for x in v {
        // Positive odd multiples of 1/denom: x·denom odd positive integer.
        let scaled = *x * rat::rint(denom);
        let ok = *x > Rat::zero() && is_integer(&scaled) && rat::floor(&scaled) % 2 == 1;
        if !ok {
            return Err(out_of_domain(x, calculus));
        }
    }
    Ok(Partition::new(counts(v).into_values()))
}

/// Sequence of the `half` calculus: part `i` is the multiplicity of
/// `(2i+1)/2`.
pub fn v_half(p: &Partition) -> Vec<Rat> {
    v_odd_ladder(2, p)
}

/// Partition of the `half` calculus: sorted multiplicities. Entries must be
/// positive odd half-integers.
pub fn p_half(v: &[Rat]) -> Result<Partition, TriangularError> {
    p_odd_ladder(2, "half", v)
}

/// Is `v` recovered by the `half` round trip? (No pivot constraint.)
pub fn is_triangular_half(v: &[Rat]) -> Result<bool, TriangularError> {
    let p = p_half(v)?;
    Ok(v_half(&p) == sorted_desc(v))
}

/// Sequence of the `quarter` calculus: part `i` is the multiplicity of
/// `(2i+1)/4`.
pub fn v_quarter(p: &Partition) -> Vec<Rat> {
    v_odd_ladder(4, p)
}

/// Partition of the `quarter` calculus. Entries must be positive odd
/// quarter-integers (`1/4, 3/4, 5/4, …`).
pub fn p_quarter(v: &[Rat]) -> Result<Partition, TriangularError> {
    p_odd_ladder(4, "quarter", v)
}

/// Is `v` recovered by the `quarter` round trip?
pub fn is_triangular_quarter(v: &[Rat]) -> Result<bool, TriangularError> {
    let p = p_quarter(v)?;
    Ok(v_quarter(&p) == sorted_desc(v))
}

/// The calculus a residue class of coordinates belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassKind {
    /// Folded nonnegative integers: the `int` (pivot) calculus.
    Int,
    /// Positive odd half-integers: the `half` calculus.
    Half,
    /// Positive odd quarter-integers: the `quarter` calculus.
    Quarter,
    /// Signed entries in `ε + Z` for the centered residue `ε ∈ (−1/2, 1/2)`:
    /// the `eps` calculus.
    Eps(Rat),
    /// No calculus applies; triangularity analysis must be abandoned for
    /// the whole vector.
    Residual,
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKind::Int => write!(f, "integer"),
            ClassKind::Half => write!(f, "half-integer"),
            ClassKind::Quarter => write!(f, "quarter-integer"),
            ClassKind::Eps(e) => write!(f, "residue {}", format_rat(e)),
            ClassKind::Residual => write!(f, "residual"),
        }
    }
}

/// One residue class of a coordinate vector: its calculus and its values in
/// weakly decreasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueClass {
    pub kind: ClassKind,
    pub values: Vec<Rat>,
}

/// Bucket folded coordinates (absolute values) by residue: integers,
/// odd halves, odd quarters, and residual classes. Used when the ambient
/// symmetry identifies a coordinate with its negative.
pub fn fold_classes(v: &[Rat]) -> Vec<ResidueClass> {
    let half = rat(1, 2);
    let quarter = rat(1, 4);
    let mut groups: BTreeMap<Rat, Vec<Rat>> = BTreeMap::new();
    for x in v {
        let a = rat::abs(x);
        let frac = a - rat::rint(rat::floor(&a));
        let key = std::cmp::min(frac, Rat::one() - frac);
        groups.entry(key).or_default().push(a);
    }
    groups
        .into_iter()
        .map(|(key, values)| {
            let kind = if key.is_zero() {
                ClassKind::Int
            } else if key == half {
                ClassKind::Half
            } else if key == quarter {
                ClassKind::Quarter
            } else {
                ClassKind::Residual
            };
            ResidueClass {
                kind,
                values: sorted_desc(&values),
            }
        })
        .collect()
}

/// Bucket signed coordinates by centered residue. The boundary coset
/// `1/2 + Z` is served by the `half` calculus only when all its values are
/// positive (there is no preferred sign of `ε = ±1/2` otherwise); every
/// other non-integral residue with `|ε| < 1/2` gets the `eps` calculus.
pub fn signed_classes(v: &[Rat]) -> Vec<ResidueClass> {
    let half = rat(1, 2);
    let mut groups: BTreeMap<Rat, Vec<Rat>> = BTreeMap::new();
    for x in v {
        groups.entry(centered_residue(x)).or_default().push(*x);
    }
    groups
        .into_iter()
        .map(|(eps, values)| {
            let kind = if eps == half {
                if values.iter().all(|x| *x > Rat::zero()) {
                    ClassKind::Half
                } else {
                    ClassKind::Residual
                }
            } else {
                ClassKind::Eps(eps)
            };
            ResidueClass {
                kind,
                values: sorted_desc(&values),
            }
        })
        .collect()
}
