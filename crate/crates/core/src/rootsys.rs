//! Root systems of the finite reduced types with exact rational arithmetic.
//!
//! Classical families live in their standard coordinates (`A_n` inside
//! `R^{n+1}`, `B_n`/`C_n`/`D_n` inside `R^n`), `G_2` inside the sum-zero
//! plane of `R^3`; there the invariant form is the ambient dot product and
//! roots, coroots, and weights are all coordinate vectors of the same
//! length. `E_6`–`E_8` and `F_4` are built abstractly from their Cartan
//! matrices: weights carry fundamental-weight coordinates, coroots carry
//! simple-coroot coordinates, and the pairing of a weight against a coroot
//! is again the dot product of the stored vectors.
//!
//! Beyond bookkeeping (positive roots, dominance, Weyl words) the module
//! provides the *integral coroot subsystem* of a rational weight λ: the
//! coroots pairing integrally with λ, decomposed into irreducible factors
//! with their simple coroots ordered compatibly with the standard Cartan
//! matrix of the recognized type.

use crate::rat::{self, dot, is_integer, rat, rint, Rat};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Errors from construction, coordinate handling, and classification.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("cannot parse Cartan type: {0}")]
    ParseType(String),
    #[error("rank {rank} is not valid for family {family}")]
    InvalidRank { family: Family, rank: usize },
    #[error("vector has dimension {got}, expected {expected}")]
    Dimension { got: usize, expected: usize },
    #[error("subsystem classification failed: {0}")]
    Classify(String),
}

/// The seven families of irreducible finite root systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

/// A simple type: family plus rank, e.g. `B2` or `E8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootSystemError> {
        let ok = match family {
            Family::A | Family::B | Family::C => rank >= 1,
            Family::D => rank >= 2,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(RootSystemError::InvalidRank { family, rank })
        }
    }

    /// Number of positive roots.
    pub fn num_positive_roots(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::G => 6,
            Family::F => 24,
            Family::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
        }
    }

    /// Order of the Weyl group.
    pub fn weyl_order(&self) -> u128 {
        let n = self.rank as u128;
        let fact = |k: u128| (1..=k).product::<u128>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u128 << n) * fact(n),
            Family::D => (1u128 << (n - 1)) * fact(n),
            Family::G => 12,
            Family::F => 1152,
            Family::E => match self.rank {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
        }
    }

    /// Dimension of the coordinate space used by [`RootSystem`].
    pub fn coordinate_dim(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            Family::G => 3,
            _ => self.rank,
        }
    }

    /// Does this type use ambient euclidean coordinates (as opposed to
    /// fundamental-weight coordinates)?
    pub fn is_ambient(&self) -> bool {
        !matches!(self.family, Family::E | Family::F)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = RootSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(RootSystemError::ParseType(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| RootSystemError::ParseType(s.to_string()))?;
        CartanType::new(family, rank)
    }
}

/// The standard Cartan matrix `a[i][j] = ⟨α_i, α∨_j⟩` (0-indexed) for each
/// type, with the usual numbering: chains run `1..rank`, the short root of
/// `B_n` and the long root of `C_n` sit last, the fork of `D_n` is
/// `(n-1, n)` hanging off `n-2`, and in `E_n` node 2 hangs off node 4 of
/// the chain `1-3-4-5-…`.
pub fn standard_cartan(t: CartanType) -> Vec<Vec<i64>> {
    let n = t.rank;
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let link = |a: &mut Vec<Vec<i64>>, i: usize, j: usize, down: i64, up: i64| {
        a[i][j] = down;
        a[j][i] = up;
    };
    match t.family {
        Family::A => {
            for i in 0..n.saturating_sub(1) {
                link(&mut a, i, i + 1, -1, -1);
            }
        }
        Family::B => {
            for i in 0..n.saturating_sub(1) {
                link(&mut a, i, i + 1, -1, -1);
            }
            if n >= 2 {
                link(&mut a, n - 2, n - 1, -2, -1);
            }
        }
        Family::C => {
            for i in 0..n.saturating_sub(1) {
                link(&mut a, i, i + 1, -1, -1);
            }
            if n >= 2 {
                link(&mut a, n - 2, n - 1, -1, -2);
            }
        }
        Family::D => {
            // Chain 1..n-1 plus the second fork tip n attached to n-2.
            for i in 0..n.saturating_sub(2) {
                link(&mut a, i, i + 1, -1, -1);
            }
            if n >= 3 {
                link(&mut a, n - 3, n - 1, -1, -1);
            }
            // n == 2: two disconnected nodes (A1 × A1).
        }
        Family::G => {
            link(&mut a, 0, 1, -1, -3);
        }
        Family::F => {
            link(&mut a, 0, 1, -1, -1);
            link(&mut a, 1, 2, -2, -1);
            link(&mut a, 2, 3, -1, -1);
        }
        Family::E => {
            // Chain 1-3-4-5-…-n with node 2 attached to node 4.
            link(&mut a, 0, 2, -1, -1);
            link(&mut a, 1, 3, -1, -1);
            for i in 2..n - 1 {
                link(&mut a, i, i + 1, -1, -1);
            }
        }
    }
    a
}

/// Half squared lengths `d_i = (α_i, α_i)/2` in the normalization where
/// short roots have squared length 2. Only consulted for the abstract
/// realizations (`E`, `F`); ambient types carry the dot product instead.
fn simple_half_lengths(t: CartanType) -> Vec<i64> {
    match t.family {
        Family::F => vec![2, 2, 1, 1],
        _ => vec![1; t.rank],
    }
}

/// One irreducible factor of an integral coroot subsystem: the recognized
/// type together with the factor's simple (root, coroot) pairs, ordered so
/// that their Cartan matrix (computed on the coroot side) equals
/// [`standard_cartan`] of the type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemFactor {
    pub cartan: CartanType,
    /// `(root, coroot)` pairs; the coroots are the factor's simple system.
    pub simples: Vec<(Vec<Rat>, Vec<Rat>)>,
}

/// The integral coroot subsystem of a weight, split into irreducible
/// factors (deterministically ordered).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralSubsystem {
    pub factors: Vec<SubsystemFactor>,
}

/// A finite reduced root system with exact rational coordinates.
pub struct RootSystem {
    ctype: CartanType,
    dim: usize,
    simple_roots: Vec<Vec<Rat>>,
    simple_coroots: Vec<Vec<Rat>>,
    /// All positive `(root, coroot)` pairs, sorted by height then
    /// lexicographically.
    positive_pairs: Vec<(Vec<Rat>, Vec<Rat>)>,
    positive_root_set: BTreeSet<Vec<Rat>>,
    cartan: Vec<Vec<i64>>,
    /// Inverse transpose of the Cartan matrix, used to expand vectors in
    /// the simple-root basis.
    cartan_t_inv: Vec<Vec<Rat>>,
    /// Gram matrix of the invariant form in weight coordinates (identity
    /// for ambient realizations).
    gram: Vec<Vec<Rat>>,
}

fn e_vec(dim: usize, i: usize, v: Rat) -> Vec<Rat> {
    let mut x = vec![Rat::zero(); dim];
    x[i] = v;
    x
}

fn invert(m: &[Vec<i64>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let rows: Vec<Vec<Rat>> = m
            .iter()
            .map(|row| row.iter().map(|&x| rint(x)).collect())
            .collect();
        let col = rat::solve_linear(&rows, &e_vec(n, j, rint(1)))?;
        cols.push(col);
    }
    // cols[j] is the j-th column of the inverse.
    Some(
        (0..n)
            .map(|i| (0..n).map(|j| cols[j][i]).collect())
            .collect(),
    )
}

impl RootSystem {
    /// Build the root system of the given type.
    pub fn new(ctype: CartanType) -> Result<Self, RootSystemError> {
        CartanType::new(ctype.family, ctype.rank)?;
        let n = ctype.rank;
        let dim = ctype.coordinate_dim();
        let (simple_roots, simple_coroots): (Vec<Vec<Rat>>, Vec<Vec<Rat>>) = if ctype.is_ambient() {
            let mut roots = Vec::with_capacity(n);
            let mut coroots = Vec::with_capacity(n);
            let chain = |i: usize| {
                let mut v = vec![Rat::zero(); dim];
                v[i] = rint(1);
                v[i + 1] = rint(-1);
                v
            };
            match ctype.family {
                Family::A => {
                    for i in 0..n {
                        roots.push(chain(i));
                        coroots.push(chain(i));
                    }
                }
                Family::B => {
                    for i in 0..n - 1 {
                        roots.push(chain(i));
                        coroots.push(chain(i));
                    }
                    roots.push(e_vec(dim, n - 1, rint(1)));
                    coroots.push(e_vec(dim, n - 1, rint(2)));
                }
                Family::C => {
                    for i in 0..n - 1 {
                        roots.push(chain(i));
                        coroots.push(chain(i));
                    }
                    roots.push(e_vec(dim, n - 1, rint(2)));
                    coroots.push(e_vec(dim, n - 1, rint(1)));
                }
                Family::D => {
                    for i in 0..n - 1 {
                        roots.push(chain(i));
                        coroots.push(chain(i));
                    }
                    let mut v = vec![Rat::zero(); dim];
                    v[n - 2] = rint(1);
                    v[n - 1] = rint(1);
                    roots.push(v.clone());
                    coroots.push(v);
                }
                Family::G => {
                    // Sum-zero plane of R^3; α1 short, α2 long.
                    let a1 = vec![rint(1), rint(-1), rint(0)];
                    let a2 = vec![rint(-2), rint(1), rint(1)];
                    let a2v = vec![rat(-2, 3), rat(1, 3), rat(1, 3)];
                    roots.push(a1.clone());
                    roots.push(a2);
                    coroots.push(a1);
                    coroots.push(a2v);
                }
                _ => unreachable!("ambient families only"),
            }
            (roots, coroots)
        } else {
            // Fundamental-weight coordinates: α_i is row i of the Cartan
            // matrix, α∨_i is the i-th standard basis vector.
            let a = standard_cartan(ctype);
            let roots = a
                .iter()
                .map(|row| row.iter().map(|&x| rint(x)).collect())
                .collect();
            let coroots = (0..n).map(|i| e_vec(n, i, rint(1))).collect();
            (roots, coroots)
        };

        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let p = dot(&simple_roots[i], &simple_coroots[j]);
                        debug_assert!(is_integer(&p));
                        rat::floor(&p)
                    })
                    .collect()
            })
            .collect();
        debug_assert_eq!(cartan, standard_cartan(ctype));

        let cartan_t: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| cartan[j][i]).collect())
            .collect();
        let cartan_t_inv =
            invert(&cartan_t).ok_or_else(|| RootSystemError::Classify("singular Cartan".into()))?;

        let gram = if ctype.is_ambient() {
            (0..dim).map(|i| e_vec(dim, i, rint(1))).collect()
        } else {
            let cartan_inv = invert(&cartan)
                .ok_or_else(|| RootSystemError::Classify("singular Cartan".into()))?;
            let d = simple_half_lengths(ctype);
            (0..n)
                .map(|i| (0..n).map(|j| cartan_inv[j][i] * rint(d[i])).collect())
                .collect()
        };

        // Close the simple pairs under all simple reflections, tracking the
        // expansion of each root in the simple-root basis.
        let mut seen: BTreeMap<Vec<Rat>, (Vec<Rat>, Vec<Rat>)> = BTreeMap::new();
        let mut queue: Vec<Vec<Rat>> = Vec::new();
        for i in 0..n {
            seen.insert(
                simple_roots[i].clone(),
                (simple_coroots[i].clone(), e_vec(n, i, rint(1))),
            );
            queue.push(simple_roots[i].clone());
        }
        while let Some(root) = queue.pop() {
            let (coroot, expansion) = seen[&root].clone();
            for i in 0..n {
                let k = dot(&root, &simple_coroots[i]);
                let new_root: Vec<Rat> = root
                    .iter()
                    .zip(&simple_roots[i])
                    .map(|(r, a)| *r - k * *a)
                    .collect();
                if seen.contains_key(&new_root) {
                    continue;
                }
                let kc = dot(&simple_roots[i], &coroot);
                let new_coroot: Vec<Rat> = coroot
                    .iter()
                    .zip(&simple_coroots[i])
                    .map(|(c, a)| *c - kc * *a)
                    .collect();
                let mut new_exp = expansion.clone();
                new_exp[i] -= k;
                seen.insert(new_root.clone(), (new_coroot, new_exp));
                queue.push(new_root);
            }
        }
        let mut positives: Vec<(Vec<Rat>, Vec<Rat>, Vec<Rat>)> = seen
            .into_iter()
            .filter(|(_, (_, exp))| exp.iter().all(|c| *c >= Rat::zero()))
            .map(|(root, (coroot, exp))| (root, coroot, exp))
            .collect();
        positives.sort_by_key(|(root, _, exp)| (exp.iter().copied().sum::<Rat>(), root.clone()));
        let positive_pairs: Vec<(Vec<Rat>, Vec<Rat>)> = positives
            .into_iter()
            .map(|(root, coroot, _)| (root, coroot))
            .collect();
        assert_eq!(
            positive_pairs.len(),
            ctype.num_positive_roots(),
            "positive root count for {ctype}"
        );
        let positive_root_set = positive_pairs.iter().map(|(r, _)| r.clone()).collect();

        Ok(RootSystem {
            ctype,
            dim,
            simple_roots,
            simple_coroots,
            positive_pairs,
            positive_root_set,
            cartan,
            cartan_t_inv,
            gram,
        })
    }

    pub fn cartan_type(&self) -> CartanType {
        self.ctype
    }

    pub fn rank(&self) -> usize {
        self.ctype.rank
    }

    /// Dimension of weight-coordinate vectors.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn simple_roots(&self) -> &[Vec<Rat>] {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> &[Vec<Rat>] {
        &self.simple_coroots
    }

    /// Positive `(root, coroot)` pairs sorted by height.
    pub fn positive_pairs(&self) -> &[(Vec<Rat>, Vec<Rat>)] {
        &self.positive_pairs
    }

    /// The Cartan matrix `a[i][j] = ⟨α_i, α∨_j⟩`.
    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    fn check_dim(&self, v: &[Rat]) -> Result<(), RootSystemError> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(RootSystemError::Dimension {
                got: v.len(),
                expected: self.dim,
            })
        }
    }

    /// Pairing `⟨μ, β∨⟩` of a weight against a coroot.
    pub fn pairing(&self, mu: &[Rat], coroot: &[Rat]) -> Rat {
        debug_assert_eq!(mu.len(), self.dim);
        debug_assert_eq!(coroot.len(), self.dim);
        dot(mu, coroot)
    }

    /// Pairings of `μ` against the simple coroots.
    pub fn simple_pairings(&self, mu: &[Rat]) -> Result<Vec<Rat>, RootSystemError> {
        self.check_dim(mu)?;
        Ok(self.simple_coroots.iter().map(|c| dot(mu, c)).collect())
    }

    /// Is `μ` dominant (all simple-coroot pairings ≥ 0)?
    pub fn is_dominant(&self, mu: &[Rat]) -> Result<bool, RootSystemError> {
        Ok(self.simple_pairings(mu)?.iter().all(|p| *p >= Rat::zero()))
    }

    /// Apply the simple reflection `s_i` (0-based `i`) to a weight-space
    /// vector (weights and roots share coordinates).
    pub fn reflect_weight(&self, i: usize, mu: &[Rat]) -> Vec<Rat> {
        let k = dot(mu, &self.simple_coroots[i]);
        mu.iter()
            .zip(&self.simple_roots[i])
            .map(|(m, a)| *m - k * *a)
            .collect()
    }

    /// Apply `s_i` to a coroot-space vector.
    pub fn reflect_coroot(&self, i: usize, c: &[Rat]) -> Vec<Rat> {
        let k = dot(&self.simple_roots[i], c);
        c.iter()
            .zip(&self.simple_coroots[i])
            .map(|(x, a)| *x - k * *a)
            .collect()
    }

    /// Apply a Weyl word (1-based generator indices, rightmost applied
    /// first) to a weight-space vector.
    pub fn apply_word(&self, word: &[usize], mu: &[Rat]) -> Vec<Rat> {
        let mut v = mu.to_vec();
        for &i in word.iter().rev() {
            v = self.reflect_weight(i - 1, &v);
        }
        v
    }

    /// The dominant Weyl-orbit representative of `μ` together with a word
    /// `w` (1-based, rightmost generator applied first) such that
    /// `apply_word(w, μ)` is the returned weight.
    pub fn dominant_representative(
        &self,
        mu: &[Rat],
    ) -> Result<(Vec<Rat>, Vec<usize>), RootSystemError> {
        self.check_dim(mu)?;
        let mut v = mu.to_vec();
        let mut applied: Vec<usize> = Vec::new();
        'outer: loop {
            for i in 0..self.rank() {
                if dot(&v, &self.simple_coroots[i]) < Rat::zero() {
                    v = self.reflect_weight(i, &v);
                    applied.push(i + 1);
                    continue 'outer;
                }
            }
            break;
        }
        applied.reverse();
        Ok((v, applied))
    }

    /// Half the sum of the positive roots.
    pub fn rho(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim];
        for (root, _) in &self.positive_pairs {
            for (x, r) in v.iter_mut().zip(root) {
                *x += *r;
            }
        }
        v.iter().map(|x| *x / rint(2)).collect()
    }

    /// Half the sum of the positive coroots; pairs to 1 with every simple
    /// root.
    pub fn rho_check(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim];
        for (_, coroot) in &self.positive_pairs {
            for (x, c) in v.iter_mut().zip(coroot) {
                *x += *c;
            }
        }
        v.iter().map(|x| *x / rint(2)).collect()
    }

    /// The Weyl-invariant symmetric form on weight coordinates (the ambient
    /// dot product for classical types and `G_2`).
    pub fn invariant_form(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                acc += *xi * self.gram[i][j] * *yj;
            }
        }
        acc
    }

    /// Squared length of a weight under [`invariant_form`].
    pub fn invariant_norm_sq(&self, x: &[Rat]) -> Rat {
        self.invariant_form(x, x)
    }

    /// The unique vector in the span of the roots with the given simple
    /// pairings `⟨μ, α∨_i⟩ = c_i`.
    pub fn weight_from_pairings(&self, c: &[Rat]) -> Result<Vec<Rat>, RootSystemError> {
        if c.len() != self.rank() {
            return Err(RootSystemError::Dimension {
                got: c.len(),
                expected: self.rank(),
            });
        }
        // μ = Σ x_j α_j with Aᵀ x = c.
        let x: Vec<Rat> = (0..self.rank())
            .map(|i| dot(&self.cartan_t_inv[i], c))
            .collect();
        let mut mu = vec![Rat::zero(); self.dim];
        for (j, xj) in x.iter().enumerate() {
            for (k, a) in self.simple_roots[j].iter().enumerate() {
                mu[k] += *xj * *a;
            }
        }
        Ok(mu)
    }

    /// Expand `v` in the simple-root basis; `None` when `v` is not in the
    /// span of the roots.
    pub fn expand_in_simple_roots(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        if v.len() != self.dim {
            return None;
        }
        let pairings: Vec<Rat> = self.simple_coroots.iter().map(|c| dot(v, c)).collect();
        let x: Vec<Rat> = (0..self.rank())
            .map(|i| dot(&self.cartan_t_inv[i], &pairings))
            .collect();
        let mut rec = vec![Rat::zero(); self.dim];
        for (j, xj) in x.iter().enumerate() {
            for (k, a) in self.simple_roots[j].iter().enumerate() {
                rec[k] += *xj * *a;
            }
        }
        if rec == v {
            Some(x)
        } else {
            None
        }
    }

    /// Is `v` one of the positive roots?
    pub fn is_positive_root(&self, v: &[Rat]) -> bool {
        self.positive_root_set.contains(v)
    }

    /// Does the Weyl-cone criterion hold for the word `w` at `μ`: for every
    /// positive root `α` sent negative by `w`, `⟨μ, α∨⟩ < 0`?
    pub fn cone_membership(&self, word: &[usize], mu: &[Rat]) -> Result<bool, RootSystemError> {
        self.check_dim(mu)?;
        for (root, coroot) in &self.positive_pairs {
            let image = self.apply_word(word, root);
            if !self.is_positive_root(&image) {
                let neg: Vec<Rat> = image.iter().map(|x| -*x).collect();
                debug_assert!(self.is_positive_root(&neg), "image of a root is a root");
                if dot(mu, coroot) >= Rat::zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The integral coroot subsystem of `λ`: all positive coroots pairing
    /// integrally with `λ`, split into irreducible factors whose simple
    /// coroots are ordered to match the standard Cartan matrix of the
    /// recognized type.
    pub fn integral_coroot_subsystem(
        &self,
        lambda: &[Rat],
    ) -> Result<IntegralSubsystem, RootSystemError> {
        self.check_dim(lambda)?;
        let integral: Vec<(Vec<Rat>, Vec<Rat>)> = self
            .positive_pairs
            .iter()
            .filter(|(_, coroot)| is_integer(&dot(lambda, coroot)))
            .cloned()
            .collect();
        // Simple coroots of the subsystem: positive members not expressible
        // as a sum of two positive members.
        let coroot_set: BTreeSet<&Vec<Rat>> = integral.iter().map(|(_, c)| c).collect();
        let simples: Vec<(Vec<Rat>, Vec<Rat>)> = integral
            .iter()
            .filter(|(_, c)| {
                !integral.iter().any(|(_, c1)| {
                    if c1 == c {
                        return false;
                    }
                    let diff: Vec<Rat> = c.iter().zip(c1).map(|(a, b)| *a - *b).collect();
                    coroot_set.contains(&diff)
                })
            })
            .cloned()
            .collect();

        // Cartan integers of the subsystem on the coroot side:
        // c[p][q] = ⟨β∨_p, (β∨_q)∨⟩ = ⟨β_q, β∨_p⟩.
        let m = simples.len();
        let c = |p: usize, q: usize| -> i64 {
            let v = dot(&simples[q].0, &simples[p].1);
            debug_assert!(is_integer(&v));
            rat::floor(&v)
        };
        let mut adj = vec![vec![false; m]; m];
        for (p, row) in adj.iter_mut().enumerate() {
            for (q, cell) in row.iter_mut().enumerate() {
                *cell = p != q && c(p, q) != 0;
            }
        }
        // Connected components.
        let mut comp = vec![usize::MAX; m];
        let mut ncomp = 0;
        for start in 0..m {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            while let Some(p) = stack.pop() {
                if comp[p] != usize::MAX {
                    continue;
                }
                comp[p] = ncomp;
                for (q, &a) in adj[p].iter().enumerate() {
                    if a && comp[q] == usize::MAX {
                        stack.push(q);
                    }
                }
            }
            ncomp += 1;
        }

        let mut factors = Vec::with_capacity(ncomp);
        for k in 0..ncomp {
            let nodes: Vec<usize> = (0..m).filter(|&p| comp[p] == k).collect();
            let (ctype, order) = classify_component(&nodes, &adj, &c, &simples)?;
            let ordered: Vec<(Vec<Rat>, Vec<Rat>)> =
                order.iter().map(|&p| simples[p].clone()).collect();
            // Defense in depth: the ordered simples must reproduce the
            // standard Cartan matrix of the claimed type.
            let expect = standard_cartan(ctype);
            for (pi, &p) in order.iter().enumerate() {
                for (qi, &q) in order.iter().enumerate() {
                    if c(p, q) != expect[pi][qi] {
                        return Err(RootSystemError::Classify(format!(
                            "ordered factor does not match {ctype} at ({pi},{qi})"
                        )));
                    }
                }
            }
            factors.push(SubsystemFactor {
                cartan: ctype,
                simples: ordered,
            });
        }
        factors.sort_by(|a, b| {
            let ka: Vec<&Vec<Rat>> = a.simples.iter().map(|(_, c)| c).collect();
            let kb: Vec<&Vec<Rat>> = b.simples.iter().map(|(_, c)| c).collect();
            ka.cmp(&kb)
        });
        Ok(IntegralSubsystem { factors })
    }
}

/// Recognize one connected component of a subsystem diagram and order its
/// nodes compatibly with [`standard_cartan`]. `c(p,q)` are the Cartan
/// integers of the component on the coroot side.
fn classify_component(
    nodes: &[usize],
    adj: &[Vec<bool>],
    c: &dyn Fn(usize, usize) -> i64,
    simples: &[(Vec<Rat>, Vec<Rat>)],
) -> Result<(CartanType, Vec<usize>), RootSystemError> {
    let fail = |msg: &str| RootSystemError::Classify(format!("{msg} (nodes {nodes:?})"));
    let r = nodes.len();
    let t = |f, rk| CartanType::new(f, rk).map_err(|_| fail("bad rank"));
    if r == 1 {
        return Ok((t(Family::A, 1)?, nodes.to_vec()));
    }
    let key = |p: usize| simples[p].1.clone();
    let deg = |p: usize| nodes.iter().filter(|&&q| adj[p][q]).count();
    let bond = |p: usize, q: usize| c(p, q) * c(q, p);

    // Multiple bonds.
    let mut doubles = Vec::new();
    let mut triples = Vec::new();
    for (i, &p) in nodes.iter().enumerate() {
        for &q in &nodes[i + 1..] {
            match bond(p, q) {
                0 | 1 => {}
                2 => doubles.push((p, q)),
                3 => triples.push((p, q)),
                _ => return Err(fail("bond multiplicity out of range")),
            }
        }
    }

    if !triples.is_empty() {
        if r != 2 || doubles.len() + triples.len() != 1 {
            return Err(fail("triple bond in a component of rank != 2"));
        }
        let (p, q) = triples[0];
        // G2 ordering: first node short, i.e. c(first, second) = -1.
        let order = if c(p, q) == -1 {
            vec![p, q]
        } else {
            vec![q, p]
        };
        return Ok((t(Family::G, 2)?, order));
    }

    if !doubles.is_empty() {
        if doubles.len() != 1 {
            return Err(fail("more than one double bond"));
        }
        let (x, y) = doubles[0];
        if r == 2 {
            // Canonical B2: first node long, c(first, second) = -2.
            let order = if c(x, y) == -2 {
                vec![x, y]
            } else {
                vec![y, x]
            };
            return Ok((t(Family::B, 2)?, order));
        }
        // Must be a path; find its endpoints.
        if nodes.iter().any(|&p| deg(p) > 2) {
            return Err(fail("double bond with a branch node"));
        }
        let ends: Vec<usize> = nodes.iter().copied().filter(|&p| deg(p) == 1).collect();
        if ends.len() != 2 {
            return Err(fail("double-bond component is not a path"));
        }
        let path_from = |start: usize| -> Vec<usize> {
            let mut path = vec![start];
            let mut prev = usize::MAX;
            let mut cur = start;
            while path.len() < r {
                let next = nodes
                    .iter()
                    .copied()
                    .find(|&q| q != prev && q != cur && adj[cur][q]);
                match next {
                    Some(nq) => {
                        path.push(nq);
                        prev = cur;
                        cur = nq;
                    }
                    None => break,
                }
            }
            path
        };
        let interior = |p: usize| deg(p) == 2;
        if interior(x) && interior(y) {
            // Double bond strictly inside the path: F4 (rank 4, long half
            // first: c(α2, α3) = -2).
            if r != 4 {
                return Err(fail("interior double bond in rank != 4"));
            }
            for start in [ends[0], ends[1]] {
                let path = path_from(start);
                if path.len() == 4 && c(path[1], path[2]) == -2 {
                    return Ok((t(Family::F, 4)?, path));
                }
            }
            return Err(fail("no F4 orientation matched"));
        }
        // Double bond touches an endpoint: B_r or C_r. Walk from the far
        // endpoint so the special node comes last.
        let special_end = if interior(x) { y } else { x };
        let far_end = if ends[0] == special_end {
            ends[1]
        } else {
            ends[0]
        };
        let path = path_from(far_end);
        if path.len() != r || *path.last().unwrap() != special_end {
            return Err(fail("double-bond path traversal failed"));
        }
        let a = c(path[r - 2], path[r - 1]);
        let b = c(path[r - 1], path[r - 2]);
        return if a == -2 && b == -1 {
            Ok((t(Family::B, r)?, path))
        } else if a == -1 && b == -2 {
            Ok((t(Family::C, r)?, path))
        } else {
            Err(fail("unrecognized double-bond pattern"))
        };
    }

    // Simply laced.
    let branches: Vec<usize> = nodes.iter().copied().filter(|&p| deg(p) >= 3).collect();
    if branches.is_empty() {
        // Path: A_r; choose the lexicographically smaller coroot sequence.
        let ends: Vec<usize> = nodes.iter().copied().filter(|&p| deg(p) == 1).collect();
        if ends.len() != 2 {
            return Err(fail("simply-laced cycle"));
        }
        let walk = |start: usize| {
            let mut path = vec![start];
            let mut prev = usize::MAX;
            let mut cur = start;
            while path.len() < r {
                let next = nodes
                    .iter()
                    .copied()
                    .find(|&q| q != prev && adj[cur][q])
                    .ok_or_else(|| fail("path walk stalled"))?;
                path.push(next);
                prev = cur;
                cur = next;
            }
            Ok::<Vec<usize>, RootSystemError>(path)
        };
        let p1 = walk(ends[0])?;
        let p2 = walk(ends[1])?;
        let k1: Vec<Vec<Rat>> = p1.iter().map(|&p| key(p)).collect();
        let k2: Vec<Vec<Rat>> = p2.iter().map(|&p| key(p)).collect();
        let path = if k1 <= k2 { p1 } else { p2 };
        return Ok((t(Family::A, r)?, path));
    }
    if branches.len() != 1 || deg(branches[0]) != 3 {
        return Err(fail("unsupported branching"));
    }
    let b = branches[0];
    // The three arms, each listed from the branch node outward.
    let mut arms: Vec<Vec<usize>> = Vec::new();
    for &q in nodes.iter().filter(|&&q| adj[b][q]) {
        let mut arm = vec![q];
        let mut prev = b;
        let mut cur = q;
        while let Some(nx) = nodes.iter().copied().find(|&x| x != prev && adj[cur][x]) {
            arm.push(nx);
            prev = cur;
            cur = nx;
        }
        arms.push(arm);
    }
    arms.sort_by_key(|arm| (arm.len(), arm.iter().map(|&p| key(p)).collect::<Vec<_>>()));
    if arms.len() != 3 || arms[0].len() != 1 {
        return Err(fail("branch arms out of range"));
    }
    let (l2, l3) = (arms[1].len(), arms[2].len());
    if l2 == 1 {
        // Arms (1, 1, k): D_{k+3}. Long arm reversed, branch node, then the
        // two tips in lexicographic order.
        let mut order: Vec<usize> = arms[2].iter().rev().copied().collect();
        order.push(b);
        let mut tips = vec![arms[0][0], arms[1][0]];
        tips.sort_by_key(|&p| key(p));
        order.extend(tips);
        return Ok((t(Family::D, l3 + 3)?, order));
    }
    if l2 == 2 && (2..=4).contains(&l3) {
        // Arms (1, 2, k): E_{k+4}. Nodes 1,3 along one short arm, node 2 the
        // single-node arm, node 4 the branch, then the long arm.
        let mut order = vec![arms[1][1], arms[0][0], arms[1][0], b];
        order.extend(&arms[2]);
        return Ok((t(Family::E, l3 + 4)?, order));
    }
    Err(fail("unrecognized simply-laced branch pattern"))
}
