//! Partition calculus: dominance order, transpose, concatenation, the
//! B/C/D multiplicity-parity classes and their collapses, the pivot
//! ("star") decompositions used by the integer-coordinate triangular
//! calculus, and the inverse map to the C-collapse on transposed star
//! partitions.

use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Errors raised by partition operations whose preconditions can fail.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    /// Two partitions were expected to have the same size.
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(u32, u32),
    /// Concatenation requires the left block's last part to dominate the
    /// right block's first part.
    #[error("concatenation order violated: last part {0} < first part {1}")]
    ConcatOrder(u32, u32),
    /// B-partitions have odd size; C/D-partitions have even size.
    #[error("size {size} has the wrong parity for type {family:?}")]
    SizeParity { size: u32, family: ParityFamily },
    /// Input to the collapse inverse lies outside its domain.
    #[error("partition is outside the domain of the requested map: {0}")]
    OutsideDomain(String),
    /// Text that does not parse as a partition.
    #[error("cannot parse partition: {0}")]
    Parse(String),
}

/// The three classical multiplicity-parity families.
///
/// * `C`: every odd part has even multiplicity (partitions of `2n`).
/// * `B`: every even part has even multiplicity (partitions of `2n+1`).
/// * `D`: every even part has even multiplicity (partitions of `2n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParityFamily {
    B,
    C,
    D,
}

/// A partition: weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Build a partition from arbitrary part values; zeros are dropped and
    /// the rest is sorted into weakly decreasing order.
    pub fn new(parts: impl IntoIterator<Item = u32>) -> Self {
        let mut parts: Vec<u32> = parts.into_iter().filter(|&p| p > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// The empty partition (of 0).
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The parts, weakly decreasing.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Is this the empty partition?
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Multiplicity of `value` among the parts.
    pub fn multiplicity(&self, value: u32) -> usize {
        self.parts.iter().filter(|&&p| p == value).count()
    }

    /// The `i`-th part (1-indexed), or 0 past the end — the padding
    /// convention under which partial sums and dominance are defined.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 || i > self.parts.len() {
            0
        } else {
            self.parts[i - 1]
        }
    }
}

impl fmt::Display for Partition {
    /// Exponent notation: `[3,2^(2),1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        let mut i = 0;
        let mut first = true;
        while i < self.parts.len() {
            let v = self.parts[i];
            let mut m = 1;
            while i + m < self.parts.len() && self.parts[i + m] == v {
                m += 1;
            }
            if !first {
                write!(f, ",")?;
            }
            first = false;
            if m == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^({m})")?;
            }
            i += m;
        }
        write!(f, "]")
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    /// Accepts both the plain form `[3,2,2,1]` and the exponent form
    /// `[3,2^(2),1]` (brackets optional).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .trim()
            .trim_start_matches('[')
            .trim_end_matches(']')
            .trim();
        if body.is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for tok in body.split(',') {
            let tok = tok.trim();
            let (value_str, mult) = match tok.split_once('^') {
                Some((v, m)) => {
                    let m = m.trim().trim_start_matches('(').trim_end_matches(')');
                    let m: usize = m
                        .parse()
                        .map_err(|_| PartitionError::Parse(format!("bad exponent in {tok:?}")))?;
                    (v.trim(), m)
                }
                None => (tok, 1),
            };
            let value: u32 = value_str
                .parse()
                .map_err(|_| PartitionError::Parse(format!("bad part in {tok:?}")))?;
            if value == 0 {
                return Err(PartitionError::Parse(format!("zero part in {tok:?}")));
            }
            parts.extend(std::iter::repeat_n(value, mult));
        }
        let sorted = parts.windows(2).all(|w| w[0] >= w[1]);
        if !sorted {
            return Err(PartitionError::Parse(format!(
                "parts not weakly decreasing in {s:?}"
            )));
        }
        Ok(Partition { parts })
    }
}

/// Dominance order: `p ≤ q` iff every partial sum of `p` is at most the
/// corresponding partial sum of `q` (padding with zeros). Requires equal
/// sizes.
pub fn dominance_leq(p: &Partition, q: &Partition) -> Result<bool, PartitionError> {
    if p.size() != q.size() {
        return Err(PartitionError::SizeMismatch(p.size(), q.size()));
    }
    let mut sp = 0u32;
    let mut sq = 0u32;
    for i in 1..=p.len().max(q.len()) {
        sp += p.part(i);
        sq += q.part(i);
        if sp > sq {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Transpose (conjugate) of the Young diagram: column counts.
pub fn transpose(p: &Partition) -> Partition {
    let mut cols = Vec::new();
    if let Some(&max) = p.parts().first() {
        for j in 1..=max {
            cols.push(p.parts.iter().filter(|&&v| v >= j).count() as u32);
        }
    }
    Partition { parts: cols }
}

/// Concatenation `p ⊔ q`, defined when the last part of `p` is at least the
/// first part of `q`.
pub fn concat(p: &Partition, q: &Partition) -> Result<Partition, PartitionError> {
    if let (Some(&last), Some(&first)) = (p.parts.last(), q.parts.first()) {
        if last < first {
            return Err(PartitionError::ConcatOrder(last, first));
        }
    }
    let mut parts = p.parts.clone();
    parts.extend_from_slice(&q.parts);
    Ok(Partition { parts })
}

fn parity_matches(size: u32, family: ParityFamily) -> bool {
    match family {
        ParityFamily::B => size % 2 == 1,
        ParityFamily::C | ParityFamily::D => size.is_multiple_of(2),
    }
}

/// Does every part of the "constrained parity" (odd for C, even for B/D)
/// occur with even multiplicity? Errors when the size parity does not match
/// the family's convention (odd total for B, even for C/D).
pub fn is_type(p: &Partition, family: ParityFamily) -> Result<bool, PartitionError> {
    if !parity_matches(p.size(), family) {
        return Err(PartitionError::SizeParity {
            size: p.size(),
            family,
        });
    }
    Ok(type_violation_value(p, family).is_none())
}

/// The largest part value violating the parity rule, if any.
fn type_violation_value(p: &Partition, family: ParityFamily) -> Option<u32> {
    let constrained = |v: u32| match family {
        ParityFamily::C => v % 2 == 1,
        ParityFamily::B | ParityFamily::D => v.is_multiple_of(2),
    };
    let mut i = 0;
    while i < p.parts.len() {
        let v = p.parts[i];
        let mut m = 1;
        while i + m < p.parts.len() && p.parts[i + m] == v {
            m += 1;
        }
        if constrained(v) && m % 2 == 1 {
            return Some(v);
        }
        i += m;
    }
    None
}

/// The X-collapse: the unique dominance-largest type-X partition below `p`.
///
/// Each round locates the largest part value with a parity defect, removes
/// one box from the last row of that equal run, and re-inserts it at the
/// earliest lower position that keeps the parts weakly decreasing (appending
/// a new part 1 when nothing else fits). A naive "decrement here, increment
/// the next row" breaks sortedness — e.g. the D-collapse of `[2,1]` must be
/// `[1,1,1]`. Idempotence and maximality are covered by tests against
/// brute-force maximization over the dominance down-set.
pub fn collapse(p: &Partition, family: ParityFamily) -> Result<Partition, PartitionError> {
    if !parity_matches(p.size(), family) {
        return Err(PartitionError::SizeParity {
            size: p.size(),
            family,
        });
    }
    let mut parts = p.parts.clone();
    while let Some(bad) = type_violation_value(
        &Partition {
            parts: parts.clone(),
        },
        family,
    ) {
        // Last row of the run of `bad` loses one box.
        let j = parts
            .iter()
            .rposition(|&v| v == bad)
            .expect("value present");
        parts[j] -= 1;
        if parts[j] == 0 {
            parts.remove(j);
        }
        // Earliest legal position strictly below row j gains one box.
        let mut placed = false;
        for k in j + 1..parts.len() {
            let above = parts[k - 1];
            if parts[k] < above {
                parts[k] += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            parts.push(1);
        }
    }
    Ok(Partition { parts })
}

/// A partition of `2n` together with a chosen *pivot decomposition*: one
/// distinguished even part `2μ0` (or no pivot at all, meaning `μ0 = 0`)
/// whose removal leaves every remaining part with even multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarPartition {
    underlying: Partition,
    /// Index into `underlying.parts()` of the pivot occurrence; `None`
    /// encodes `μ0 = 0`.
    pivot_index: Option<usize>,
}

impl StarPartition {
    /// Validate a decomposition: the pivot (if any) must point at an even
    /// part, and removing it must leave all multiplicities even.
    pub fn new(underlying: Partition, pivot_index: Option<usize>) -> Result<Self, PartitionError> {
        if !underlying.size().is_multiple_of(2) {
            return Err(PartitionError::SizeParity {
                size: underlying.size(),
                family: ParityFamily::C,
            });
        }
        let mut rest = underlying.parts().to_vec();
        if let Some(i) = pivot_index {
            if i >= rest.len() {
                return Err(PartitionError::OutsideDomain(format!(
                    "pivot index {i} out of range"
                )));
            }
            if !rest[i].is_multiple_of(2) {
                return Err(PartitionError::OutsideDomain(format!(
                    "pivot part {} is odd",
                    rest[i]
                )));
            }
            rest.remove(i);
        }
        let rest = Partition { parts: rest };
        let all_even = rest.parts().iter().all(|&v| rest.multiplicity(v).is_multiple_of(2));
        if !all_even {
            return Err(PartitionError::OutsideDomain(
                "removing the pivot does not leave even multiplicities".into(),
            ));
        }
        Ok(StarPartition {
            underlying,
            pivot_index,
        })
    }

    /// The partition being decomposed.
    pub fn underlying(&self) -> &Partition {
        &self.underlying
    }

    /// Index of the pivot occurrence within the sorted parts, if a pivot
    /// part is present.
    pub fn pivot_index(&self) -> Option<usize> {
        self.pivot_index
    }

    /// Half the pivot part (`μ0`); zero when there is no pivot.
    pub fn mu0(&self) -> u32 {
        match self.pivot_index {
            Some(i) => self.underlying.parts()[i] / 2,
            None => 0,
        }
    }

    /// The values `μ1 ≥ μ2 ≥ … ≥ μr` that occur doubled once the pivot is
    /// removed (each listed once per *pair*).
    pub fn doubled_values(&self) -> Vec<u32> {
        let mut rest = self.underlying.parts().to_vec();
        if let Some(i) = self.pivot_index {
            rest.remove(i);
        }
        rest.chunks(2).map(|pair| pair[0]).collect()
    }

    /// Does this decomposition satisfy the pivot-dominance constraint
    /// `2μ0 ≥ μ1` (pivot part at least the largest doubled part)?
    pub fn pivot_first(&self) -> bool {
        let mu1 = self.doubled_values().first().copied().unwrap_or(0);
        2 * self.mu0() >= mu1
    }
}

/// All valid pivot decompositions of `p` (a partition of even size), in
/// order of pivot index with the pivotless decomposition first when valid.
pub fn star_parses(p: &Partition) -> Vec<StarPartition> {
    let mut out = Vec::new();
    if let Ok(sp) = StarPartition::new(p.clone(), None) {
        out.push(sp);
    }
    for i in 0..p.len() {
        // Only the first occurrence of each value can give a new parse shape;
        // later occurrences of the same value produce the same decomposition
        // data, but we keep them: the report layer may care which box is the
        // pivot, and set-level consumers deduplicate by underlying partition.
        if let Ok(sp) = StarPartition::new(p.clone(), Some(i)) {
            out.push(sp);
        }
    }
    out
}

/// All partitions of `n`, in descending lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn go(remaining: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: acc.clone() });
            return;
        }
        let hi = remaining.min(max);
        for v in (1..=hi).rev() {
            acc.push(v);
            go(remaining - v, v, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Enumerate the star set of partitions of `2n`: those admitting a pivot
/// decomposition. With `double_star`, keep only partitions where some valid
/// decomposition satisfies `2μ0 ≥ μ1`. One representative decomposition per
/// underlying partition is returned (the first valid parse, preferring a
/// constraint-satisfying one in the `double_star` case).
///
/// Resolved corner case, fixed by exhaustive parse enumeration: `[1,1]` has
/// the single decomposition `μ0 = 0`, `μ1 = 1`, which fails `2μ0 ≥ μ1`, so
/// the double-star set of 2 is `{[2]}` while the star set is `{[2],[1,1]}`.
pub fn star_partitions(n: u32, double_star: bool) -> Vec<StarPartition> {
    let mut out = Vec::new();
    for p in partitions_of(2 * n) {
        let parses = star_parses(&p);
        let chosen = if double_star {
            parses.into_iter().find(|sp| sp.pivot_first())
        } else {
            parses.into_iter().next()
        };
        if let Some(sp) = chosen {
            out.push(sp);
        }
    }
    out
}

/// Membership test for the domain of [`tilde`]: type-C partitions such that
/// an even part at an odd position forces the next part to be even, and an
/// even part at an even position strictly exceeds the next part.
pub fn in_tilde_domain(r: &Partition) -> bool {
    if !r.size().is_multiple_of(2) {
        return false;
    }
    if !is_type(r, ParityFamily::C).unwrap_or(false) {
        return false;
    }
    for i in 1..=r.len() {
        let v = r.part(i);
        if v.is_multiple_of(2) {
            if i % 2 == 1 {
                if !r.part(i + 1).is_multiple_of(2) {
                    return false;
                }
            } else if v < r.part(i + 1) + 1 {
                return false;
            }
        }
    }
    true
}

/// The position-parity adjustment map: even parts at odd positions gain a
/// box, even parts at even positions lose one, odd parts are unchanged.
///
/// On its domain (see [`in_tilde_domain`]) this is a left inverse to the
/// C-collapse restricted to transposes of pivot-first star partitions.
pub fn tilde(r: &Partition) -> Result<Partition, PartitionError> {
    if !in_tilde_domain(r) {
        return Err(PartitionError::OutsideDomain(format!(
            "{r} is not in the adjustment map's domain"
        )));
    }
    let mut parts = Vec::with_capacity(r.len());
    for i in 1..=r.len() {
        let v = r.part(i);
        let adjusted = if v.is_multiple_of(2) {
            if i % 2 == 1 {
                v + 1
            } else {
                v - 1
            }
        } else {
            v
        };
        if adjusted > 0 {
            parts.push(adjusted);
        }
    }
    debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
    Ok(Partition { parts })
}
