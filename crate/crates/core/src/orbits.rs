//! Nilpotent-orbit combinatorics for the classical families, plus
//! file-loaded closure tables for exceptional factors.
//!
//! Orbits of `gl(N)` are labeled by partitions of `N` (Jordan types);
//! orbits of `so(N)` by partitions whose even parts have even multiplicity;
//! orbits of `sp(2n)` by partitions whose odd parts have even multiplicity.
//! Closure order is dominance. The distinction between the two members of
//! a "very even" pair in `so(4k)` is deliberately collapsed: every
//! comparison made here is partition-level.
//!
//! The central construction is the orbit induced from the zero orbit of a
//! Levi subalgebra (a Richardson orbit). It is computed two independent
//! ways: a closed-form column-merge recursion ([`induce_zero`]) and a
//! randomized matrix oracle ([`richardson_oracle`]) that samples the
//! nilradical of the corresponding parabolic in exact integer arithmetic
//! and takes Jordan types.

use crate::partitions::{
    collapse, concat, dominance_leq, is_type, transpose, ParityFamily, Partition, PartitionError,
};
use crate::rootsys::{CartanType, Family, SubsystemFactor};
use crate::triangular::{
    odd_pivot_profile, p_eps, p_half, p_int, p_quarter, ClassKind, ResidueClass, TriangularError,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrbitError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Triangular(#[from] TriangularError),
    #[error("factor type {0} has no closure table loaded")]
    UnsupportedFactor(CartanType),
    #[error("invalid Levi datum: {0}")]
    InvalidLevi(String),
    #[error("closure table: {0}")]
    Table(String),
    #[error("sampling did not reach the expected orbit dimension ({0})")]
    Sampling(String),
    #[error("orbit labels are not comparable: {0}")]
    Incomparable(String),
    #[error("io: {0}")]
    Io(String),
}

/// A nilpotent-orbit label: a partition for a classical factor, or a named
/// row of a closure table for an exceptional one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum OrbitLabel {
    Partition {
        family: Family,
        partition: Partition,
    },
    Named {
        label: String,
    },
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitLabel::Partition { partition, .. } => write!(f, "{partition}"),
            OrbitLabel::Named { label } => write!(f, "{label}"),
        }
    }
}

/// A Levi subalgebra of a classical algebra, recorded as the ranks of its
/// `gl` blocks plus the rank of the classical tail (`so(2m+1)`, `sp(2m)`,
/// or `so(2m)` according to the family; always 0 for type `A`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeviDatum {
    pub family: Family,
    pub rank: usize,
    pub gl_blocks: Vec<u32>,
    pub remainder: u32,
}

impl LeviDatum {
    pub fn new(
        family: Family,
        rank: usize,
        gl_blocks: Vec<u32>,
        remainder: u32,
    ) -> Result<Self, OrbitError> {
        if gl_blocks.contains(&0) {
            return Err(OrbitError::InvalidLevi("zero-size gl block".into()));
        }
        let total: u32 = gl_blocks.iter().sum();
        let ok = match family {
            Family::A => remainder == 0 && total as usize == rank + 1,
            Family::B | Family::C | Family::D => total as usize + remainder as usize == rank,
            _ => false,
        };
        if !ok {
            return Err(OrbitError::InvalidLevi(format!(
                "blocks {gl_blocks:?} + remainder {remainder} do not fill {family}{rank}"
            )));
        }
        Ok(LeviDatum {
            family,
            rank,
            gl_blocks,
            remainder,
        })
    }

    /// Size of the matrices the algebra acts on.
    pub fn matrix_size(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            Family::B => 2 * self.rank + 1,
            _ => 2 * self.rank,
        }
    }
}

/// Derive the Levi datum generated by a subset of the factor's simple
/// coroots (`zero[i]` marks simple `i`, in the factor's standard order).
///
/// Coordinates of the defining representation are linked by chain simples;
/// for `B`/`C` the last simple, when present, turns the block containing
/// the final coordinate into the classical tail, and for `D` the fork tip
/// also links the last two coordinates, with a classical tail exactly when
/// *both* fork simples are present (a single fork simple yields a `gl`
/// block via the twisted embedding, indistinguishable at partition level).
pub fn levi_from_zero_set(ctype: CartanType, zero: &[bool]) -> Result<LeviDatum, OrbitError> {
    let r = ctype.rank;
    if zero.len() != r {
        return Err(OrbitError::InvalidLevi(format!(
            "zero set has {} flags for rank {r}",
            zero.len()
        )));
    }
    let positions = match ctype.family {
        Family::A => r + 1,
        Family::B | Family::C | Family::D => r,
        _ => return Err(OrbitError::UnsupportedFactor(ctype)),
    };
    // link[i] joins coordinate i to i+1.
    let mut link = vec![false; positions.saturating_sub(1)];
    match ctype.family {
        Family::A => {
            link[..r].copy_from_slice(&zero[..r]);
        }
        Family::B | Family::C => {
            let cut = r.saturating_sub(1);
            link[..cut].copy_from_slice(&zero[..cut]);
        }
        Family::D => {
            let cut = r.saturating_sub(1);
            link[..cut].copy_from_slice(&zero[..cut]);
            if r >= 2 && zero[r - 1] {
                link[r - 2] = true;
            }
        }
        _ => unreachable!(),
    }
    // Maximal linked runs of coordinates.
    let mut blocks: Vec<(usize, usize)> = Vec::new(); // (start, len)
    let mut start = 0;
    for (i, &joined) in link.iter().enumerate() {
        if !joined {
            blocks.push((start, i + 1 - start));
            start = i + 1;
        }
    }
    blocks.push((start, positions - start));
    let tail = match ctype.family {
        Family::A => false,
        Family::B | Family::C => r >= 1 && zero[r - 1],
        Family::D => r >= 2 && zero[r - 2] && zero[r - 1],
        _ => unreachable!(),
    };
    let mut gl_blocks = Vec::new();
    let mut remainder = 0u32;
    for (s, len) in blocks {
        if tail && s + len == positions {
            remainder = len as u32;
        } else {
            gl_blocks.push(len as u32);
        }
    }
    gl_blocks.sort_unstable_by(|a, b| b.cmp(a));
    LeviDatum::new(ctype.family, r, gl_blocks, remainder)
}

fn parity_family(f: Family) -> ParityFamily {
    match f {
        Family::B => ParityFamily::B,
        Family::C => ParityFamily::C,
        _ => ParityFamily::D,
    }
}

/// The orbit induced from the zero orbit of the Levi (the dense orbit in
/// the nilradical of the corresponding parabolic), by the column-merge
/// recursion: starting from the all-ones partition of the tail, each `gl`
/// block (largest first) contributes two columns of its rank, followed by
/// a parity collapse. Type `A` needs no collapse: the answer is the
/// transpose of the block sizes.
pub fn induce_zero(levi: &LeviDatum) -> Result<Partition, OrbitError> {
    match levi.family {
        Family::A => Ok(transpose(&Partition::new(levi.gl_blocks.clone()))),
        Family::B | Family::C | Family::D => {
            let base = match levi.family {
                Family::B => 2 * levi.remainder + 1,
                _ => 2 * levi.remainder,
            };
            let fam = parity_family(levi.family);
            let mut p = Partition::new(std::iter::repeat_n(1, base as usize));
            let mut blocks = levi.gl_blocks.clone();
            blocks.sort_unstable_by(|a, b| b.cmp(a));
            for a in blocks {
                let mut cols = transpose(&p).parts().to_vec();
                cols.push(a);
                cols.push(a);
                p = collapse(&transpose(&Partition::new(cols)), fam)?;
            }
            debug_assert_eq!(p.size() as usize, levi.matrix_size());
            Ok(p)
        }
        _ => Err(OrbitError::UnsupportedFactor(CartanType {
            family: levi.family,
            rank: levi.rank,
        })),
    }
}

// ---------------------------------------------------------------------
// Randomized matrix oracle.
// ---------------------------------------------------------------------

type Mat = Vec<Vec<BigInt>>;

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

// Indexed loops keep the row/column bookkeeping of the elimination legible.
#[allow(clippy::needless_range_loop)]
fn mat_rank(m: &Mat) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|row| row.iter().map(|x| BigRational::from(x.clone())).collect())
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let pivot = (rank..rows).find(|&i| !a[i][c].is_zero());
        let Some(pr) = pivot else { continue };
        a.swap(rank, pr);
        let pv = a[rank][c].clone();
        for j in c..cols {
            a[rank][j] = &a[rank][j] / &pv;
        }
        for i in 0..rows {
            if i != rank && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let sub = &f * &a[rank][j];
                    a[i][j] = &a[i][j] - sub;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Jordan type of a nilpotent integer matrix, via the rank sequence of its
/// powers.
fn jordan_type(y: &Mat) -> Partition {
    let n = y.len();
    let mut ranks = vec![n];
    let mut power = y.clone();
    loop {
        let r = mat_rank(&power);
        ranks.push(r);
        if r == 0 {
            break;
        }
        power = mat_mul(&power, y);
    }
    // Differences of consecutive ranks count blocks of size ≥ k.
    let diffs: Vec<u32> = ranks.windows(2).map(|w| (w[0] - w[1]) as u32).collect();
    transpose(&Partition::new(diffs))
}

fn dim_orbit(family: Family, p: &Partition) -> i64 {
    let n = p.size() as i64;
    let tsq: i64 = transpose(p)
        .parts()
        .iter()
        .map(|&c| (c as i64) * (c as i64))
        .sum();
    let odd = p.parts().iter().filter(|&&x| x % 2 == 1).count() as i64;
    match family {
        Family::A => n * n - tsq,
        Family::B | Family::D => (n * n - n) / 2 - (tsq - odd) / 2,
        Family::C => {
            let half = n / 2;
            half * (2 * half + 1) - (tsq + odd) / 2
        }
        _ => unreachable!(),
    }
}

fn dim_algebra(family: Family, matrix_size: usize) -> i64 {
    let n = matrix_size as i64;
    match family {
        Family::A => n * n,
        Family::B | Family::D => n * (n - 1) / 2,
        Family::C => (n / 2) * (n + 1),
        _ => unreachable!(),
    }
}

/// The dense-orbit partition of the nilradical of the parabolic with the
/// given Levi, found by sampling: random integer strictly-block-upper
/// matrices are symmetrized into the nilradical (for `so`/`sp`, with the
/// antidiagonal form and the mirrored block composition), their Jordan
/// types are computed exactly, and the dominance-largest type is returned.
/// The result is checked against the dimension the dense orbit must have;
/// failure to reach it (or an incomparable sample set) is an error rather
/// than a silent wrong answer.
pub fn richardson_oracle(
    levi: &LeviDatum,
    trials: u32,
    seed: u64,
) -> Result<Partition, OrbitError> {
    let nmat = levi.matrix_size();
    // Block composition of the flag the parabolic stabilizes.
    let mut comp: Vec<usize> = levi.gl_blocks.iter().map(|&a| a as usize).collect();
    match levi.family {
        Family::A => {}
        Family::B => {
            comp.push(2 * levi.remainder as usize + 1);
            for &a in levi.gl_blocks.iter().rev() {
                comp.push(a as usize);
            }
        }
        Family::C | Family::D => {
            if levi.remainder > 0 {
                comp.push(2 * levi.remainder as usize);
            }
            for &a in levi.gl_blocks.iter().rev() {
                comp.push(a as usize);
            }
        }
        _ => {
            return Err(OrbitError::UnsupportedFactor(CartanType {
                family: levi.family,
                rank: levi.rank,
            }))
        }
    }
    debug_assert_eq!(comp.iter().sum::<usize>(), nmat);
    // block_of[i] = index of the block containing row/column i.
    let mut block_of = Vec::with_capacity(nmat);
    for (bi, &len) in comp.iter().enumerate() {
        block_of.extend(std::iter::repeat_n(bi, len));
    }
    // Antidiagonal form: J[i][n-1-i] = 1 (orthogonal) or ±1 (symplectic).
    let jsign = |i: usize| -> i64 {
        if levi.family == Family::C && i >= nmat / 2 {
            -1
        } else {
            1
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples: Vec<Partition> = Vec::new();
    for _ in 0..trials {
        let mut x = vec![vec![BigInt::zero(); nmat]; nmat];
        for i in 0..nmat {
            for j in 0..nmat {
                if block_of[i] < block_of[j] {
                    x[i][j] = BigInt::from(rng.gen_range(-5i64..=5));
                }
            }
        }
        let y = if levi.family == Family::A {
            x
        } else {
            // y = x + σ(x), σ(x) = −J xᵀ J⁻¹; with the antidiagonal form
            // σ(x)[i][j] = −s(i)·s(j)·x[n-1-j][n-1-i] up to the sign
            // pattern of J and its inverse.
            let jinv_sign = if levi.family == Family::C { -1i64 } else { 1 };
            let mut y = vec![vec![BigInt::zero(); nmat]; nmat];
            for i in 0..nmat {
                for j in 0..nmat {
                    // (J xᵀ J⁻¹)[i][j] = J[i][n-1-i] x[j][n-1-i]… expanded:
                    let s = jsign(i) * jsign(nmat - 1 - j) * jinv_sign;
                    let sigma = -BigInt::from(s) * &x[nmat - 1 - j][nmat - 1 - i];
                    y[i][j] = &x[i][j] + sigma;
                }
            }
            y
        };
        samples.push(jordan_type(&y));
    }
    let best = samples
        .iter()
        .cloned()
        .try_fold(None::<Partition>, |acc, s| match acc {
            None => Ok(Some(s)),
            Some(b) => {
                if dominance_leq(&s, &b)? {
                    Ok(Some(b))
                } else if dominance_leq(&b, &s)? {
                    Ok(Some(s))
                } else {
                    Err(OrbitError::Incomparable(format!("{b} vs {s}")))
                }
            }
        })?
        .ok_or_else(|| OrbitError::Sampling("no trials".into()))?;

    // The dense orbit of the nilradical has dimension dim g − dim l.
    let dim_levi: i64 = levi
        .gl_blocks
        .iter()
        .map(|&a| (a as i64) * (a as i64))
        .sum::<i64>()
        + match levi.family {
            Family::A => 0,
            Family::B => {
                let m = 2 * levi.remainder as i64 + 1;
                m * (m - 1) / 2
            }
            Family::C => {
                let m = levi.remainder as i64;
                m * (2 * m + 1)
            }
            Family::D => {
                let m = 2 * levi.remainder as i64;
                m * (m - 1) / 2
            }
            _ => unreachable!(),
        };
    let expected = dim_algebra(levi.family, nmat) - dim_levi;
    let got = dim_orbit(levi.family, &best);
    if got != expected {
        return Err(OrbitError::Sampling(format!(
            "best sample {best} has orbit dimension {got}, parabolic predicts {expected}"
        )));
    }
    if levi.family != Family::A {
        debug_assert!(is_type(&best, parity_family(levi.family))?);
    }
    Ok(best)
}

// ---------------------------------------------------------------------
// Duality on orbit partitions.
// ---------------------------------------------------------------------

/// The order-reversing duality on nilpotent-orbit partitions. Type `A` is
/// the transpose; the odd-orthogonal and symplectic families exchange
/// (`B_n ↔ C_n`), transposing after a one-box adjustment and collapsing;
/// the even-orthogonal family is self-dual. Returns the family of the dual
/// algebra together with the dual partition.
pub fn dual_partition(family: Family, p: &Partition) -> Result<(Family, Partition), OrbitError> {
    match family {
        Family::A => Ok((Family::A, transpose(p))),
        Family::B => {
            if !is_type(p, ParityFamily::B)? {
                return Err(OrbitError::InvalidLevi(format!(
                    "{p} is not an orbit of type B"
                )));
            }
            // Transpose, remove one box from the smallest part, collapse.
            let t = transpose(p);
            let mut parts = t.parts().to_vec();
            let last = parts.len() - 1;
            parts[last] -= 1;
            let trimmed = Partition::new(parts);
            Ok((Family::C, collapse(&trimmed, ParityFamily::C)?))
        }
        Family::C => {
            if !is_type(p, ParityFamily::C)? {
                return Err(OrbitError::InvalidLevi(format!(
                    "{p} is not an orbit of type C"
                )));
            }
            // Append a part 1, transpose, collapse.
            let extended = concat(p, &Partition::new([1]))?;
            Ok((Family::B, collapse(&transpose(&extended), ParityFamily::B)?))
        }
        Family::D => {
            if !is_type(p, ParityFamily::D)? {
                return Err(OrbitError::InvalidLevi(format!(
                    "{p} is not an orbit of type D"
                )));
            }
            Ok((Family::D, collapse(&transpose(p), ParityFamily::D)?))
        }
        _ => Err(OrbitError::UnsupportedFactor(CartanType {
            family,
            rank: 0,
        })),
    }
}

// ---------------------------------------------------------------------
// Closure tables for exceptional factors.
// ---------------------------------------------------------------------

/// Orbit poset of one exceptional type, loaded from a text file: orbit
/// names with dimensions, cover relations, and the induced-from-zero orbit
/// for every subset of the simple roots.
#[derive(Debug, Clone)]
pub struct ClosureTable {
    ctype: CartanType,
    dims: BTreeMap<String, u32>,
    /// Reflexive-transitive closure of the cover relation.
    leq: BTreeMap<String, BTreeSet<String>>,
    richardson: BTreeMap<BTreeSet<usize>, String>,
}

impl ClosureTable {
    /// Parse the line-oriented table format:
    ///
    /// ```text
    /// type G2
    /// orbit <label> dim <d>
    /// cover <smaller> <larger>
    /// richardson <1-based simple indices, comma separated, or -> <label>
    /// ```
    ///
    /// `#` starts a comment. Every cover must strictly increase dimension
    /// (which forces the poset to be acyclic) and every subset of the
    /// simple roots must have a `richardson` line.
    pub fn parse(text: &str) -> Result<Self, OrbitError> {
        let bad = |msg: String| OrbitError::Table(msg);
        let mut ctype: Option<CartanType> = None;
        let mut dims: BTreeMap<String, u32> = BTreeMap::new();
        let mut covers: Vec<(String, String)> = Vec::new();
        let mut richardson: BTreeMap<BTreeSet<usize>, String> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tok = line.split_whitespace();
            let head = tok.next().unwrap();
            let rest: Vec<&str> = tok.collect();
            let ctx = |msg: &str| bad(format!("line {}: {msg}", lineno + 1));
            match head {
                "type" => {
                    let &[t] = rest.as_slice() else {
                        return Err(ctx("expected: type <cartan>"));
                    };
                    ctype = Some(t.parse().map_err(|e| ctx(&format!("{e}")))?);
                }
                "orbit" => {
                    let &[label, kw, d] = rest.as_slice() else {
                        return Err(ctx("expected: orbit <label> dim <d>"));
                    };
                    if kw != "dim" {
                        return Err(ctx("expected keyword 'dim'"));
                    }
                    let d: u32 = d.parse().map_err(|_| ctx("bad dimension"))?;
                    if dims.insert(label.to_string(), d).is_some() {
                        return Err(ctx("duplicate orbit"));
                    }
                }
                "cover" => {
                    let &[small, large] = rest.as_slice() else {
                        return Err(ctx("expected: cover <smaller> <larger>"));
                    };
                    covers.push((small.to_string(), large.to_string()));
                }
                "richardson" => {
                    let &[set, label] = rest.as_slice() else {
                        return Err(ctx("expected: richardson <indices|-> <label>"));
                    };
                    let indices: BTreeSet<usize> = if set == "-" {
                        BTreeSet::new()
                    } else {
                        set.split(',')
                            .map(|s| s.parse::<usize>().map_err(|_| ctx("bad index")))
                            .collect::<Result<_, _>>()?
                    };
                    if richardson.insert(indices, label.to_string()).is_some() {
                        return Err(ctx("duplicate richardson set"));
                    }
                }
                _ => return Err(ctx("unknown directive")),
            }
        }
        let ctype = ctype.ok_or_else(|| bad("missing 'type' line".into()))?;
        for (s, l) in &covers {
            let ds = dims
                .get(s)
                .ok_or_else(|| bad(format!("unknown orbit {s}")))?;
            let dl = dims
                .get(l)
                .ok_or_else(|| bad(format!("unknown orbit {l}")))?;
            if ds >= dl {
                return Err(bad(format!("cover {s} -> {l} does not increase dimension")));
            }
        }
        for (set, label) in &richardson {
            if !dims.contains_key(label) {
                return Err(bad(format!("unknown orbit {label}")));
            }
            if set.iter().any(|&i| i == 0 || i > ctype.rank) {
                return Err(bad(format!("richardson indices {set:?} out of range")));
            }
        }
        // Totality: every subset of {1..rank} must be present.
        let rank = ctype.rank;
        for mask in 0u32..(1 << rank) {
            let set: BTreeSet<usize> = (0..rank)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| i + 1)
                .collect();
            if !richardson.contains_key(&set) {
                return Err(bad(format!("missing richardson line for {set:?}")));
            }
        }
        // Reflexive-transitive closure (dimension strictly increases along
        // covers, so simple iteration terminates).
        let mut leq: BTreeMap<String, BTreeSet<String>> = dims
            .keys()
            .map(|k| (k.clone(), BTreeSet::from([k.clone()])))
            .collect();
        let mut changed = true;
        while changed {
            changed = false;
            for (s, l) in &covers {
                let above_l: BTreeSet<String> = leq[l].clone();
                let entry = leq.get_mut(s).unwrap();
                for x in above_l {
                    changed |= entry.insert(x);
                }
            }
        }
        Ok(ClosureTable {
            ctype,
            dims,
            leq,
            richardson,
        })
    }

    pub fn load(path: &Path) -> Result<Self, OrbitError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| OrbitError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn cartan_type(&self) -> CartanType {
        self.ctype
    }

    pub fn dim(&self, label: &str) -> Option<u32> {
        self.dims.get(label).copied()
    }

    /// Is the closure of orbit `a` contained in the closure of `b`?
    pub fn leq(&self, a: &str, b: &str) -> Result<bool, OrbitError> {
        if !self.dims.contains_key(b) {
            return Err(OrbitError::Table(format!("unknown orbit {b}")));
        }
        self.leq
            .get(a)
            .map(|up| up.contains(b))
            .ok_or_else(|| OrbitError::Table(format!("unknown orbit {a}")))
    }

    /// The induced-from-zero orbit for the Levi generated by the given
    /// 1-based simple indices.
    pub fn richardson(&self, zero_set: &BTreeSet<usize>) -> Result<&str, OrbitError> {
        self.richardson
            .get(zero_set)
            .map(String::as_str)
            .ok_or_else(|| OrbitError::Table(format!("no richardson entry for {zero_set:?}")))
    }
}

/// A set of closure tables keyed by Cartan type.
#[derive(Debug, Clone, Default)]
pub struct TableSet {
    tables: BTreeMap<CartanType, ClosureTable>,
}

impl TableSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, table: ClosureTable) {
        self.tables.insert(table.cartan_type(), table);
    }

    /// Load every `*.closure` file in a directory.
    pub fn load_dir(dir: &Path) -> Result<Self, OrbitError> {
        let mut set = Self::empty();
        let entries = std::fs::read_dir(dir)
            .map_err(|e| OrbitError::Io(format!("{}: {e}", dir.display())))?;
        for entry in entries {
            let entry = entry.map_err(|e| OrbitError::Io(e.to_string()))?;
            let path = entry.path();
            if path.extension().and_then(|s| s.to_str()) == Some("closure") {
                set.insert(ClosureTable::load(&path)?);
            }
        }
        Ok(set)
    }

    pub fn get(&self, ctype: CartanType) -> Option<&ClosureTable> {
        self.tables.get(&ctype)
    }
}

/// The induced-from-zero orbit of the factor's Levi determined by the
/// zero-pairing flags on the factor's simple coroots.
pub fn factor_richardson(
    factor: &SubsystemFactor,
    zero: &[bool],
    tables: &TableSet,
) -> Result<OrbitLabel, OrbitError> {
    match factor.cartan.family {
        Family::A | Family::B | Family::C | Family::D => {
            let levi = levi_from_zero_set(factor.cartan, zero)?;
            Ok(OrbitLabel::Partition {
                family: factor.cartan.family,
                partition: induce_zero(&levi)?,
            })
        }
        _ => {
            let table = tables
                .get(factor.cartan)
                .ok_or(OrbitError::UnsupportedFactor(factor.cartan))?;
            let set: BTreeSet<usize> = zero
                .iter()
                .enumerate()
                .filter(|(_, &z)| z)
                .map(|(i, _)| i + 1)
                .collect();
            Ok(OrbitLabel::Named {
                label: table.richardson(&set)?.to_string(),
            })
        }
    }
}

/// Closure containment of two orbit labels of the same factor.
pub fn orbit_closure_leq(
    factor: CartanType,
    a: &OrbitLabel,
    b: &OrbitLabel,
    tables: &TableSet,
) -> Result<bool, OrbitError> {
    match (a, b) {
        (
            OrbitLabel::Partition {
                family: fa,
                partition: pa,
            },
            OrbitLabel::Partition {
                family: fb,
                partition: pb,
            },
        ) => {
            if fa != fb {
                return Err(OrbitError::Incomparable(format!(
                    "{fa}-label vs {fb}-label"
                )));
            }
            Ok(dominance_leq(pa, pb)?)
        }
        (OrbitLabel::Named { label: la }, OrbitLabel::Named { label: lb }) => {
            let table = tables
                .get(factor)
                .ok_or(OrbitError::UnsupportedFactor(factor))?;
            table.leq(la, lb)
        }
        _ => Err(OrbitError::Incomparable(
            "partition label vs named label".into(),
        )),
    }
}

// ---------------------------------------------------------------------
// Dictionaries from residue classes of coordinates to orbit partitions.
// ---------------------------------------------------------------------

fn double_parts(p: &Partition) -> Partition {
    Partition::new(p.parts().iter().map(|&x| 2 * x))
}

/// The orbit partition a residue class of (folded or signed) coordinates
/// contributes, together with the classical family of the corresponding
/// integral factor. `None` for residual classes, where no dictionary
/// applies. The ambient family decides the dictionary:
///
/// * linear ambient (`A`): every class is a `gl` factor; the label is the
///   transposed multiplicity profile.
/// * folded ambients: the integer class pairs its multiplicities around
///   the doubled (or, for `C`-ambient, doubled-plus-one) zero multiplicity
///   and collapses the transpose; the half class doubles the transposed
///   profile (collapsing where the factor is even-orthogonal); the quarter
///   class is a `gl` factor again.
pub fn class_orbit(
    ambient: Family,
    class: &ResidueClass,
) -> Result<Option<(Family, Partition)>, OrbitError> {
    let v = &class.values;
    let out = match (ambient, &class.kind) {
        (_, ClassKind::Residual) => None,
        (Family::A, ClassKind::Eps(e)) => Some((Family::A, transpose(&p_eps(e, v)?))),
        (Family::A, ClassKind::Half) => Some((Family::A, transpose(&p_half(v)?))),
        (Family::B, ClassKind::Int) => {
            let profile = p_int(v)?.underlying().clone();
            Some((Family::C, collapse(&transpose(&profile), ParityFamily::C)?))
        }
        (Family::C, ClassKind::Int) => {
            let profile = odd_pivot_profile(v)?;
            Some((Family::B, collapse(&transpose(&profile), ParityFamily::B)?))
        }
        (Family::D, ClassKind::Int) => {
            let profile = p_int(v)?.underlying().clone();
            Some((Family::D, collapse(&transpose(&profile), ParityFamily::D)?))
        }
        (Family::B, ClassKind::Half) => {
            // Doubled transpose is already symplectic: all parts even.
            Some((Family::C, double_parts(&transpose(&p_half(v)?))))
        }
        (Family::C | Family::D, ClassKind::Half) => Some((
            Family::D,
            collapse(&double_parts(&transpose(&p_half(v)?)), ParityFamily::D)?,
        )),
        (Family::B | Family::C | Family::D, ClassKind::Quarter) => {
            Some((Family::A, transpose(&p_quarter(v)?)))
        }
        _ => {
            return Err(OrbitError::Incomparable(format!(
                "class kind {:?} cannot occur in a {ambient} ambient",
                class.kind
            )))
        }
    };
    Ok(out)
}

/// Does the triangularity predicate of the class's calculus hold? `None`
/// for residual classes.
pub fn class_is_triangular(
    ambient: Family,
    class: &ResidueClass,
) -> Result<Option<bool>, OrbitError> {
    use crate::triangular::{
        is_triangular_eps, is_triangular_half, is_triangular_int, is_triangular_quarter,
    };
    let v = &class.values;
    let out = match (ambient, &class.kind) {
        (_, ClassKind::Residual) => None,
        (Family::A, ClassKind::Eps(e)) => Some(is_triangular_eps(e, v)?),
        (_, ClassKind::Half) => Some(is_triangular_half(v)?),
        (Family::B | Family::C | Family::D, ClassKind::Int) => Some(is_triangular_int(v)?),
        (Family::B | Family::C | Family::D, ClassKind::Quarter) => Some(is_triangular_quarter(v)?),
        _ => {
            return Err(OrbitError::Incomparable(format!(
                "class kind {:?} cannot occur in a {ambient} ambient",
                class.kind
            )))
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{parse_rat, Rat};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn levi(f: Family, rank: usize, blocks: &[u32], rem: u32) -> LeviDatum {
        LeviDatum::new(f, rank, blocks.to_vec(), rem).unwrap()
    }

    #[test]
    fn induced_orbit_anchor_cases() {
        // Symplectic rank 2.
        assert_eq!(
            induce_zero(&levi(Family::C, 2, &[2], 0)).unwrap(),
            p("[2,2]")
        );
        assert_eq!(
            induce_zero(&levi(Family::C, 2, &[1, 1], 0)).unwrap(),
            p("[4]")
        );
        assert_eq!(
            induce_zero(&levi(Family::C, 2, &[1], 1)).unwrap(),
            p("[2,2]")
        );
        assert_eq!(
            induce_zero(&levi(Family::C, 2, &[], 2)).unwrap(),
            p("[1,1,1,1]")
        );
        // Odd orthogonal rank 2: full flag gives the regular orbit.
        assert_eq!(
            induce_zero(&levi(Family::B, 2, &[1, 1], 0)).unwrap(),
            p("[5]")
        );
        // Even orthogonal rank 2.
        assert_eq!(
            induce_zero(&levi(Family::D, 2, &[1, 1], 0)).unwrap(),
            p("[3,1]")
        );
        // Larger symplectic case with a tail.
        assert_eq!(
            induce_zero(&levi(Family::C, 4, &[2, 1], 1)).unwrap(),
            p("[4,4]")
        );
        // Linear: transpose of the blocks.
        assert_eq!(
            induce_zero(&levi(Family::A, 3, &[2, 2], 0)).unwrap(),
            p("[2,2]")
        );
        assert_eq!(
            induce_zero(&levi(Family::A, 3, &[4], 0)).unwrap(),
            p("[1,1,1,1]")
        );
    }

    #[test]
    fn oracle_agrees_on_anchor_cases() {
        for (l, expect) in [
            (levi(Family::C, 2, &[2], 0), "[2,2]"),
            (levi(Family::C, 2, &[1, 1], 0), "[4]"),
            (levi(Family::B, 2, &[1, 1], 0), "[5]"),
            (levi(Family::B, 2, &[2], 0), "[3,1,1]"),
            (levi(Family::D, 2, &[1, 1], 0), "[3,1]"),
            (levi(Family::A, 2, &[2, 1], 0), "[2,1]"),
            (levi(Family::C, 3, &[2, 1], 0), "[4,2]"),
        ] {
            assert_eq!(richardson_oracle(&l, 20, 7).unwrap(), p(expect), "{l:?}");
            assert_eq!(induce_zero(&l).unwrap(), p(expect), "{l:?}");
        }
    }

    #[test]
    fn levi_extraction_from_zero_sets() {
        let c = |s: &str| s.parse::<CartanType>().unwrap();
        // Linear: flags split the coordinates into runs.
        assert_eq!(
            levi_from_zero_set(c("A3"), &[true, false, true]).unwrap(),
            levi(Family::A, 3, &[2, 2], 0)
        );
        assert_eq!(
            levi_from_zero_set(c("A3"), &[false, false, false]).unwrap(),
            levi(Family::A, 3, &[1, 1, 1, 1], 0)
        );
        // Symplectic: last flag marks the classical tail.
        assert_eq!(
            levi_from_zero_set(c("C3"), &[false, true, true]).unwrap(),
            levi(Family::C, 3, &[1], 2)
        );
        assert_eq!(
            levi_from_zero_set(c("C3"), &[true, false, false]).unwrap(),
            levi(Family::C, 3, &[2, 1], 0)
        );
        // Even orthogonal: one fork simple alone makes a gl block...
        assert_eq!(
            levi_from_zero_set(c("D4"), &[false, false, false, true]).unwrap(),
            levi(Family::D, 4, &[2, 1, 1], 0)
        );
        // ...both make the tail.
        assert_eq!(
            levi_from_zero_set(c("D4"), &[false, false, true, true]).unwrap(),
            levi(Family::D, 4, &[1, 1], 2)
        );
        assert_eq!(
            levi_from_zero_set(c("D4"), &[true, false, true, true]).unwrap(),
            levi(Family::D, 4, &[2], 2)
        );
    }

    #[test]
    fn duality_tables_rank_two() {
        let d = |f, s: &str| dual_partition(f, &p(s)).unwrap();
        assert_eq!(d(Family::C, "[4]"), (Family::B, p("[1,1,1,1,1]")));
        assert_eq!(d(Family::C, "[2,2]"), (Family::B, p("[3,1,1]")));
        assert_eq!(d(Family::C, "[2,1,1]"), (Family::B, p("[3,1,1]")));
        assert_eq!(d(Family::C, "[1,1,1,1]"), (Family::B, p("[5]")));
        assert_eq!(d(Family::B, "[5]"), (Family::C, p("[1,1,1,1]")));
        assert_eq!(d(Family::B, "[3,1,1]"), (Family::C, p("[2,2]")));
        assert_eq!(d(Family::B, "[2,2,1]"), (Family::C, p("[2,2]")));
        assert_eq!(d(Family::B, "[1,1,1,1,1]"), (Family::C, p("[4]")));
        assert_eq!(d(Family::A, "[3]"), (Family::A, p("[1,1,1]")));
        // Even orthogonal rank 2: regular and zero orbits swap, the
        // middle (very even) class is fixed.
        assert_eq!(d(Family::D, "[3,1]"), (Family::D, p("[1,1,1,1]")));
        assert_eq!(d(Family::D, "[1,1,1,1]"), (Family::D, p("[3,1]")));
        assert_eq!(d(Family::D, "[2,2]"), (Family::D, p("[2,2]")));
        // Non-orbit inputs are rejected.
        assert!(dual_partition(Family::C, &p("[3,1]")).is_err());
    }

    #[test]
    fn duality_reverses_order_on_symplectic_orbits_of_six() {
        let orbits: Vec<Partition> = crate::partitions::partitions_of(6)
            .into_iter()
            .filter(|q| is_type(q, ParityFamily::C).unwrap())
            .collect();
        for a in &orbits {
            for b in &orbits {
                if dominance_leq(a, b).unwrap() {
                    let (_, da) = dual_partition(Family::C, a).unwrap();
                    let (_, db) = dual_partition(Family::C, b).unwrap();
                    assert!(dominance_leq(&db, &da).unwrap(), "{a} ≤ {b}");
                }
            }
        }
    }

    const G2_TABLE: &str = "
# rank-2 exceptional orbit poset
type G2
orbit 0 dim 0
orbit A1 dim 6
orbit A1~ dim 8
orbit G2(a1) dim 10
orbit G2 dim 12
cover 0 A1
cover A1 A1~
cover A1~ G2(a1)
cover G2(a1) G2
richardson - G2
richardson 1 G2(a1)
richardson 2 G2(a1)
richardson 1,2 0
";

    #[test]
    fn closure_table_parse_and_queries() {
        let t = ClosureTable::parse(G2_TABLE).unwrap();
        assert_eq!(t.cartan_type().to_string(), "G2");
        assert_eq!(t.dim("G2(a1)"), Some(10));
        assert!(t.leq("0", "G2").unwrap());
        assert!(t.leq("A1", "A1").unwrap());
        assert!(!t.leq("G2", "A1~").unwrap());
        assert!(t.leq("A1~", "G2(a1)").unwrap());
        assert!(t.leq("unknown", "G2").is_err());
        assert_eq!(t.richardson(&BTreeSet::new()).unwrap(), "G2");
        assert_eq!(t.richardson(&BTreeSet::from([1])).unwrap(), "G2(a1)");
        assert_eq!(t.richardson(&BTreeSet::from([1, 2])).unwrap(), "0");
    }

    #[test]
    fn closure_table_rejects_bad_input() {
        // Cover that does not increase dimension.
        let bad =
            "type A1\norbit x dim 2\norbit y dim 2\ncover x y\nrichardson - x\nrichardson 1 y\n";
        assert!(ClosureTable::parse(bad).is_err());
        // Missing richardson subset.
        let bad = "type A1\norbit x dim 0\nrichardson - x\n";
        assert!(ClosureTable::parse(bad).is_err());
        // Unknown orbit in a cover.
        let bad = "type A1\norbit x dim 0\ncover x z\nrichardson - x\nrichardson 1 x\n";
        assert!(ClosureTable::parse(bad).is_err());
    }

    #[test]
    fn class_dictionaries() {
        use crate::triangular::fold_classes;
        let w = |v: &[&str]| -> Vec<Rat> { v.iter().map(|s| parse_rat(s).unwrap()).collect() };

        // Folded integer class (1,0) in an odd-orthogonal ambient: the
        // paired profile [2,1,1] transposes to [3,1] and collapses to
        // [2,2] in the symplectic factor.
        let classes = fold_classes(&w(&["1", "0"]));
        assert_eq!(
            class_orbit(Family::B, &classes[0]).unwrap(),
            Some((Family::C, p("[2,2]")))
        );
        // Same coordinates in a symplectic ambient: odd pivot profile
        // [3,1,1], transpose [3,1,1], already an orthogonal orbit.
        assert_eq!(
            class_orbit(Family::C, &classes[0]).unwrap(),
            Some((Family::B, p("[3,1,1]")))
        );
        // Even-orthogonal ambient: [2,1,1] transposes to [3,1], already an
        // orbit there.
        assert_eq!(
            class_orbit(Family::D, &classes[0]).unwrap(),
            Some((Family::D, p("[3,1]")))
        );

        // Half class (3/2, 1/2): profile [1,1], transpose [2], doubled [4];
        // collapses to [3,1] when the factor is even-orthogonal.
        let classes = fold_classes(&w(&["3/2", "1/2"]));
        assert_eq!(
            class_orbit(Family::B, &classes[0]).unwrap(),
            Some((Family::C, p("[4]")))
        );
        assert_eq!(
            class_orbit(Family::C, &classes[0]).unwrap(),
            Some((Family::D, p("[3,1]")))
        );
        // Repeated halves: doubled transpose [2,2] is already even-orthogonal.
        let classes = fold_classes(&w(&["1/2", "1/2"]));
        assert_eq!(
            class_orbit(Family::C, &classes[0]).unwrap(),
            Some((Family::D, p("[2,2]")))
        );

        // Quarter class: transposed profile in a linear factor. Distinct
        // values give the regular orbit, repeats the zero orbit.
        let classes = fold_classes(&w(&["3/4", "1/4"]));
        assert_eq!(
            class_orbit(Family::D, &classes[0]).unwrap(),
            Some((Family::A, p("[2]")))
        );
        let classes = fold_classes(&w(&["1/4", "1/4"]));
        assert_eq!(
            class_orbit(Family::D, &classes[0]).unwrap(),
            Some((Family::A, p("[1,1]")))
        );

        // Residual class: no dictionary.
        let classes = fold_classes(&w(&["1/3"]));
        assert_eq!(class_orbit(Family::B, &classes[0]).unwrap(), None);
        assert_eq!(class_is_triangular(Family::B, &classes[0]).unwrap(), None);

        // Triangularity dispatch.
        let classes = fold_classes(&w(&["1", "0"]));
        assert_eq!(
            class_is_triangular(Family::B, &classes[0]).unwrap(),
            Some(true)
        );
        let classes = fold_classes(&w(&["1", "1"]));
        assert_eq!(
            class_is_triangular(Family::B, &classes[0]).unwrap(),
            Some(false)
        );
    }

    #[test]
    fn orbit_label_comparisons() {
        let tables = TableSet::empty();
        let a = OrbitLabel::Partition {
            family: Family::C,
            partition: p("[2,2]"),
        };
        let b = OrbitLabel::Partition {
            family: Family::C,
            partition: p("[4]"),
        };
        assert!(orbit_closure_leq("C2".parse().unwrap(), &a, &b, &tables).unwrap());
        assert!(!orbit_closure_leq("C2".parse().unwrap(), &b, &a, &tables).unwrap());

        let mut tables = TableSet::empty();
        tables.insert(ClosureTable::parse(G2_TABLE).unwrap());
        let x = OrbitLabel::Named {
            label: "A1~".into(),
        };
        let y = OrbitLabel::Named { label: "G2".into() };
        assert!(orbit_closure_leq("G2".parse().unwrap(), &x, &y, &tables).unwrap());
        assert!(orbit_closure_leq("G2".parse().unwrap(), &x, &x, &tables).unwrap());
        assert!(!orbit_closure_leq("G2".parse().unwrap(), &y, &x, &tables).unwrap());
    }

    #[test]
    fn factor_richardson_uses_tables_for_exceptional_types() {
        let g2 = crate::rootsys::RootSystem::new("G2".parse().unwrap()).unwrap();
        let sys = g2
            .integral_coroot_subsystem(&[Rat::zero(), Rat::zero(), Rat::zero()])
            .unwrap();
        let factor = &sys.factors[0];
        let no_tables = TableSet::empty();
        assert_eq!(
            factor_richardson(factor, &[false, false], &no_tables),
            Err(OrbitError::UnsupportedFactor("G2".parse().unwrap()))
        );
        let mut tables = TableSet::empty();
        tables.insert(ClosureTable::parse(G2_TABLE).unwrap());
        assert_eq!(
            factor_richardson(factor, &[false, false], &tables).unwrap(),
            OrbitLabel::Named { label: "G2".into() }
        );
        assert_eq!(
            factor_richardson(factor, &[true, true], &tables).unwrap(),
            OrbitLabel::Named { label: "0".into() }
        );
    }
}
