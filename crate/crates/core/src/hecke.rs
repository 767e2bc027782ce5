//! The extended affine Hecke algebra over Z[u, u⁻¹1] in the Bernstein
//! presentation.
//!
//! Elements are kept in the normal form Σ c_{μ,w}(u) · t_μ T_w, where μ
//! runs over the weight lattice (integer vectors in fundamental-weight
//! coordinates) and w over the finite Weyl group, each w keyed by its
//! lexicographically least reduced word. The defining relations:
//!
//! * T_1 = t_0 = 1;
//! * t_μ t_ν = t_{μ+ν};
//! * T_{w₁} T_{w₂} = T_{w₁w₂} when lengths add;
//! * (T_s − u)(T_s + 1) = 0 for s simple;
//! * the commutation t_{sμ} T_s t_{−μ} = T_s + (1−u)·(1 − t_{−⟨μ,α̌⟩α})/(1 − t_α),
//!
//! with the rational expression always expanded to the finite geometric
//! sum appropriate to the sign of ⟨μ, α̌⟩ — no localized elements exist in
//! code. Products are reduced to normal form eagerly, so equality is
//! syntactic.

use crate::rootsys::{standard_cartan, CartanType, RootSystemError};
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HeckeError {
    #[error("Weyl group of {ctype} has order {order}, above the enumeration limit {limit}")]
    GroupTooLarge {
        ctype: CartanType,
        order: u128,
        limit: u128,
    },
    #[error("invalid simple index {0} for rank {1} (simple indices are 1-based)")]
    BadSimple(usize, usize),
    #[error("weight vector has {got} coordinates, expected {want}")]
    BadWeight { got: usize, want: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Root(#[from] RootSystemError),
}

// ---------------------------------------------------------------------
// Laurent polynomials in u with integer coefficients.
// ---------------------------------------------------------------------

/// A Laurent polynomial in `u`: finitely many exponent → coefficient
/// pairs, zero coefficients never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coeff: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if coeff != 0 {
            coeffs.insert(exp, coeff);
        }
        LaurentPoly { coeffs }
    }

    /// u − 1.
    pub fn u_minus_one() -> Self {
        let mut p = Self::monomial(1, 1);
        p.add_term(0, -1);
        p
    }

    /// 1 − u.
    pub fn one_minus_u() -> Self {
        let mut p = Self::monomial(0, 1);
        p.add_term(1, -1);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0) == Some(&1)
    }

    /// `Some((exp, coeff))` when the polynomial is a single monomial.
    pub fn as_monomial(&self) -> Option<(i64, i64)> {
        if self.coeffs.len() == 1 {
            let (&e, &c) = self.coeffs.iter().next().unwrap();
            Some((e, c))
        } else {
            None
        }
    }

    fn add_term(&mut self, exp: i64, coeff: i64) {
        let entry = self.coeffs.entry(exp).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, &c) in &other.coeffs {
            out.add_term(e, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPoly::zero();
        for (&e1, &c1) in &self.coeffs {
            for (&e2, &c2) in &other.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// Evaluate at u = 1.
    pub fn eval_one(&self) -> i64 {
        self.coeffs.values().sum()
    }
}

impl std::fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        // Highest exponent first reads naturally: u^2 - 2*u + 1.
        for (i, (&e, &c)) in self.coeffs.iter().rev().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else if c < 0 {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => f.write_str("u")?,
                (1, m) => write!(f, "{m}*u")?,
                (_, 1) => write!(f, "u^{e}")?,
                (_, m) => write!(f, "{m}*u^{e}")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------
// The finite Weyl group, enumerated once.
// ---------------------------------------------------------------------

/// Identifier of a Weyl group element within its [`WeylGroup`].
pub type WeylId = usize;

#[derive(Debug, Clone)]
struct WeylElement {
    /// Lexicographically least reduced word, 0-based simple indices.
    word: Vec<usize>,
    /// Columns of the action on the weight lattice: `matrix[j]` is the
    /// image of the j-th fundamental weight, in fundamental-weight
    /// coordinates.
    matrix: Vec<Vec<i64>>,
}

/// The finite Weyl group of a Cartan type with every element enumerated,
/// keyed by canonical (lex-least) reduced words — built breadth-first so
/// the first word reaching an element is its canonical one.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    ctype: CartanType,
    rank: usize,
    /// cartan[i][j] = pairing of simple root i against simple coroot j;
    /// row i is simple root i in fundamental-weight coordinates.
    cartan: Vec<Vec<i64>>,
    elements: Vec<WeylElement>,
    /// left_mult[e][s] = id of s·e.
    left_mult: Vec<Vec<WeylId>>,
}

/// Refuse to enumerate groups above this order (the two largest
/// exceptional types are out of reach by design).
pub const WEYL_ENUMERATION_LIMIT: u128 = 60_000;

impl WeylGroup {
    pub fn new(ctype: CartanType) -> Result<Self, HeckeError> {
        let order = ctype.weyl_order();
        if order > WEYL_ENUMERATION_LIMIT {
            return Err(HeckeError::GroupTooLarge {
                ctype,
                order,
                limit: WEYL_ENUMERATION_LIMIT,
            });
        }
        let rank = ctype.rank;
        let cartan = standard_cartan(ctype);
        let apply_simple = |s: usize, v: &[i64]| -> Vec<i64> {
            let k = v[s];
            v.iter()
                .enumerate()
                .map(|(j, &x)| x - k * cartan[s][j])
                .collect()
        };
        let identity = WeylElement {
            word: Vec::new(),
            matrix: (0..rank)
                .map(|j| (0..rank).map(|i| i64::from(i == j)).collect())
                .collect(),
        };
        let key = |m: &[Vec<i64>]| -> Vec<i64> { m.iter().flatten().copied().collect() };
        let mut elements = vec![identity];
        let mut by_matrix: HashMap<Vec<i64>, WeylId> = HashMap::new();
        by_matrix.insert(key(&elements[0].matrix), 0);
        let mut queue: VecDeque<WeylId> = VecDeque::from([0]);
        while let Some(id) = queue.pop_front() {
            for s in 0..rank {
                // Right multiplication: (w·s)(ϖ_j) = w(s(ϖ_j)); only the
                // s-th column changes, by subtracting the α_s-combination
                // of the other columns.
                // Right multiplication by s changes only column s:
                // (ws)(ϖ_s) = w(ϖ_s) − w(α_s), and w(α_s) expands over
                // the Cartan row of s against the existing columns.
                let parent = elements[id].matrix.clone();
                let mut m = parent.clone();
                m[s] = (0..rank)
                    .map(|l| {
                        let mut shift = 0;
                        for k2 in 0..rank {
                            shift += cartan[s][k2] * parent[k2][l];
                        }
                        parent[s][l] - shift
                    })
                    .collect();
                let k = key(&m);
                if let std::collections::hash_map::Entry::Vacant(e) = by_matrix.entry(k) {
                    let mut word = elements[id].word.clone();
                    word.push(s);
                    let next = elements.len();
                    elements.push(WeylElement { word, matrix: m });
                    e.insert(next);
                    queue.push_back(next);
                }
            }
        }
        debug_assert_eq!(elements.len() as u128, order);
        // Left multiplication table: s·w acts by the simple reflection
        // after w, columnwise.
        let mut left_mult = vec![vec![0; rank]; elements.len()];
        for (id, e) in elements.iter().enumerate() {
            for (s, slot) in left_mult[id].iter_mut().enumerate() {
                let m: Vec<Vec<i64>> = e.matrix.iter().map(|col| apply_simple(s, col)).collect();
                *slot = by_matrix[&key(&m)];
            }
        }
        Ok(WeylGroup {
            ctype,
            rank,
            cartan,
            elements,
            left_mult,
        })
    }

    pub fn cartan_type(&self) -> CartanType {
        self.ctype
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub const IDENTITY: WeylId = 0;

    /// Canonical reduced word (1-based indices, for display).
    pub fn word(&self, id: WeylId) -> Vec<usize> {
        self.elements[id].word.iter().map(|&s| s + 1).collect()
    }

    pub fn length(&self, id: WeylId) -> usize {
        self.elements[id].word.len()
    }

    /// Id of s·w (0-based simple index).
    pub fn left_multiply(&self, s: usize, w: WeylId) -> WeylId {
        self.left_mult[w][s]
    }

    /// Id of the simple reflection (0-based index).
    pub fn simple(&self, s: usize) -> WeylId {
        self.left_mult[Self::IDENTITY][s]
    }

    /// Action of w on a lattice vector in fundamental-weight coordinates.
    pub fn act(&self, w: WeylId, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.rank];
        for (j, col) in self.elements[w].matrix.iter().enumerate() {
            for (i, &c) in col.iter().enumerate() {
                out[i] += v[j] * c;
            }
        }
        out
    }

    /// Group product w·x via the canonical word of w.
    pub fn compose(&self, w: WeylId, x: WeylId) -> WeylId {
        let mut cur = x;
        for &s in self.elements[w].word.iter().rev() {
            cur = self.left_mult[cur][s];
        }
        cur
    }

    /// All reduced words of an element (0-based), by peeling left
    /// descents.
    pub fn reduced_words(&self, w: WeylId) -> Vec<Vec<usize>> {
        if w == Self::IDENTITY {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for s in 0..self.rank {
            let sw = self.left_mult[w][s];
            if self.length(sw) < self.length(w) {
                for mut tail in self.reduced_words(sw) {
                    tail.insert(0, s);
                    out.push(tail);
                }
            }
        }
        out
    }

    /// Simple root s in fundamental-weight coordinates.
    fn alpha(&self, s: usize) -> &[i64] {
        &self.cartan[s]
    }

    fn reflect(&self, s: usize, v: &[i64]) -> Vec<i64> {
        let k = v[s];
        v.iter()
            .enumerate()
            .map(|(j, &x)| x - k * self.cartan[s][j])
            .collect()
    }
}

// ---------------------------------------------------------------------
// Hecke elements and arithmetic.
// ---------------------------------------------------------------------

type TermKey = (Vec<i64>, WeylId);

/// An element in Bernstein normal form: a finitely supported map
/// (μ, w) → Laurent polynomial. Tied to the [`HeckeAlgebra`] that created
/// it (Weyl ids are algebra-local).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HeckeElement {
    terms: BTreeMap<TermKey, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, key: TermKey, poly: &LaurentPoly) {
        if poly.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(poly.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get().add(poly);
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, p) in &other.terms {
            out.add_term(k.clone(), p);
        }
        out
    }

    pub fn neg(&self) -> Self {
        HeckeElement {
            terms: self
                .terms
                .iter()
                .map(|(k, p)| (k.clone(), p.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, poly: &LaurentPoly) -> Self {
        let mut out = HeckeElement::zero();
        for (k, p) in &self.terms {
            out.add_term(k.clone(), &p.mul(poly));
        }
        out
    }

    /// `Some(m)` when the element is exactly u^m · 1.
    pub fn as_u_power_of_one(&self) -> Option<i64> {
        if self.terms.len() != 1 {
            return None;
        }
        let ((mu, w), poly) = self.terms.iter().next().unwrap();
        if mu.iter().any(|&x| x != 0) || *w != WeylGroup::IDENTITY {
            return None;
        }
        match poly.as_monomial() {
            Some((e, 1)) => Some(e),
            _ => None,
        }
    }
}

/// The extended affine Hecke algebra of a Cartan type.
#[derive(Debug, Clone)]
pub struct HeckeAlgebra {
    weyl: WeylGroup,
}

impl HeckeAlgebra {
    pub fn new(ctype: CartanType) -> Result<Self, HeckeError> {
        Ok(HeckeAlgebra {
            weyl: WeylGroup::new(ctype)?,
        })
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.weyl
    }

    pub fn rank(&self) -> usize {
        self.weyl.rank
    }

    fn check_weight(&self, mu: &[i64]) -> Result<(), HeckeError> {
        if mu.len() != self.weyl.rank {
            return Err(HeckeError::BadWeight {
                got: mu.len(),
                want: self.weyl.rank,
            });
        }
        Ok(())
    }

    fn check_simple(&self, i: usize) -> Result<usize, HeckeError> {
        if i == 0 || i > self.weyl.rank {
            return Err(HeckeError::BadSimple(i, self.weyl.rank));
        }
        Ok(i - 1)
    }

    pub fn one(&self) -> HeckeElement {
        let mut e = HeckeElement::zero();
        e.add_term(
            (vec![0; self.weyl.rank], WeylGroup::IDENTITY),
            &LaurentPoly::one(),
        );
        e
    }

    /// The translation t_μ (μ in fundamental-weight coordinates).
    pub fn translation(&self, mu: &[i64]) -> Result<HeckeElement, HeckeError> {
        self.check_weight(mu)?;
        let mut e = HeckeElement::zero();
        e.add_term((mu.to_vec(), WeylGroup::IDENTITY), &LaurentPoly::one());
        Ok(e)
    }

    /// The generator T_{s_i} (1-based simple index).
    pub fn t_simple(&self, i: usize) -> Result<HeckeElement, HeckeError> {
        let s = self.check_simple(i)?;
        let mut e = HeckeElement::zero();
        e.add_term(
            (vec![0; self.weyl.rank], self.weyl.simple(s)),
            &LaurentPoly::one(),
        );
        Ok(e)
    }

    /// The product T_{s_{i₁}} ⋯ T_{s_{i_k}} along an arbitrary (not
    /// necessarily reduced) 1-based word.
    pub fn t_word(&self, word: &[usize]) -> Result<HeckeElement, HeckeError> {
        let mut out = self.one();
        for &i in word {
            let gen = self.t_simple(i)?;
            out = self.multiply(&out, &gen);
        }
        Ok(out)
    }

    /// T_s · T_y by the length rule.
    fn gen_times(&self, s: usize, y: WeylId) -> Vec<(WeylId, LaurentPoly)> {
        let sy = self.weyl.left_multiply(s, y);
        if self.weyl.length(sy) > self.weyl.length(y) {
            vec![(sy, LaurentPoly::one())]
        } else {
            vec![
                (y, LaurentPoly::u_minus_one()),
                (sy, LaurentPoly::monomial(1, 1)),
            ]
        }
    }

    /// T_y · T_x for basis elements, peeling y's word from the right.
    fn t_times_t(&self, y: WeylId, x: WeylId) -> BTreeMap<WeylId, LaurentPoly> {
        let mut acc: BTreeMap<WeylId, LaurentPoly> = BTreeMap::from([(x, LaurentPoly::one())]);
        for &s in self.weyl.elements[y].word.iter().rev() {
            let mut next: BTreeMap<WeylId, LaurentPoly> = BTreeMap::new();
            for (z, c) in &acc {
                for (z2, c2) in self.gen_times(s, *z) {
                    let entry = next.entry(z2).or_default();
                    let sum = entry.add(&c.mul(&c2));
                    *entry = sum;
                }
            }
            next.retain(|_, v| !v.is_zero());
            acc = next;
        }
        acc
    }

    /// T_w · t_ν expanded to normal form, by commuting t past one simple
    /// reflection at a time:
    ///
    /// for k = ⟨ν, α̌_s⟩ ≥ 0:  T_s t_ν = t_{sν} T_s + (1−u)·Σ_{j=0}^{k−1} t_{sν+jα_s},
    /// for k < 0:            T_s t_ν = t_{sν} T_s − (1−u)·Σ_{j=1}^{−k} t_{sν−jα_s}.
    fn word_past_translation(&self, word: &[usize], nu: &[i64]) -> HeckeElement {
        if word.is_empty() {
            let mut e = HeckeElement::zero();
            e.add_term((nu.to_vec(), WeylGroup::IDENTITY), &LaurentPoly::one());
            return e;
        }
        let s = word[0];
        let inner = self.word_past_translation(&word[1..], nu);
        let one_minus_u = LaurentPoly::one_minus_u();
        let alpha = self.weyl.alpha(s).to_vec();
        let mut out = HeckeElement::zero();
        for ((kappa, y), c) in &inner.terms {
            let k = kappa[s];
            let snu = self.weyl.reflect(s, kappa);
            for (z, cz) in self.gen_times(s, *y) {
                out.add_term((snu.clone(), z), &c.mul(&cz));
            }
            let geom = c.mul(&one_minus_u);
            if k > 0 {
                for j in 0..k {
                    let v: Vec<i64> = snu.iter().zip(&alpha).map(|(&a, &b)| a + j * b).collect();
                    out.add_term((v, *y), &geom);
                }
            } else if k < 0 {
                for j in 1..=(-k) {
                    let v: Vec<i64> = snu.iter().zip(&alpha).map(|(&a, &b)| a - j * b).collect();
                    out.add_term((v, *y), &geom.neg());
                }
            }
        }
        out
    }

    /// Product in normal form.
    pub fn multiply(&self, a: &HeckeElement, b: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for ((mu, w), ca) in &a.terms {
            let wword = self.weyl.elements[*w].word.clone();
            for ((nu, x), cb) in &b.terms {
                let c = ca.mul(cb);
                let mid = self.word_past_translation(&wword, nu);
                for ((kappa, y), cm) in &mid.terms {
                    let shifted: Vec<i64> =
                        mu.iter().zip(kappa).map(|(&a2, &b2)| a2 + b2).collect();
                    for (z, ct) in self.t_times_t(*y, *x) {
                        out.add_term((shifted.clone(), z), &c.mul(cm).mul(&ct));
                    }
                }
            }
        }
        out
    }

    /// The geometric-sum expansion of (1 − t_{−kα_i})/(1 − t_{α_i}):
    /// 0 for k = 0, −(t_{−α}+⋯+t_{−kα}) for k ≥ 1, and
    /// t_0 + t_α + ⋯ + t_{(−k−1)α} for k ≤ −1.
    fn ratio_expansion(&self, s: usize, k: i64) -> HeckeElement {
        let alpha = self.weyl.alpha(s).to_vec();
        let mut out = HeckeElement::zero();
        if k >= 1 {
            for j in 1..=k {
                let v: Vec<i64> = alpha.iter().map(|&a| -j * a).collect();
                out.add_term((v, WeylGroup::IDENTITY), &LaurentPoly::monomial(0, -1));
            }
        } else {
            for j in 0..(-k) {
                let v: Vec<i64> = alpha.iter().map(|&a| j * a).collect();
                out.add_term((v, WeylGroup::IDENTITY), &LaurentPoly::one());
            }
        }
        out
    }

    /// Right-hand side of the commutation relation: T_i + (1−u)·ratio(k).
    /// Exposed for verification.
    pub fn bernstein_rhs(&self, i: usize, k: i64) -> Result<HeckeElement, HeckeError> {
        let s = self.check_simple(i)?;
        Ok(self.t_simple(i)?.add(
            &self
                .ratio_expansion(s, k)
                .scale(&LaurentPoly::one_minus_u()),
        ))
    }
}

/// Which of the two K-class intertwiner normalizations to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntertwinerKind {
    /// −T_s + (u−1)·(1 − t_{−kα})/(1 − t_α).
    Shriek,
    /// −u⁻¹T_s + (1−u⁻¹)·(1 − t_{−kα})/(1 − t_α).
    Star,
}

impl HeckeAlgebra {
    /// The K-group class of an intertwiner across the α_i-wall, with the
    /// integer parameter k already floored/ceiled by the caller.
    pub fn intertwiner_class(
        &self,
        kind: IntertwinerKind,
        i: usize,
        k: i64,
    ) -> Result<HeckeElement, HeckeError> {
        let s = self.check_simple(i)?;
        let ratio = self.ratio_expansion(s, k);
        let t = self.t_simple(i)?;
        Ok(match kind {
            IntertwinerKind::Shriek => t.neg().add(&ratio.scale(&LaurentPoly::u_minus_one())),
            IntertwinerKind::Star => {
                let u_inv = LaurentPoly::monomial(-1, 1);
                let one_minus_u_inv = LaurentPoly::one().sub(&u_inv);
                t.scale(&u_inv).neg().add(&ratio.scale(&one_minus_u_inv))
            }
        })
    }
}

/// Outcome of one inverse-pair composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversePairEntry {
    pub k: i64,
    /// `Some(m)`: the product is exactly u^m · 1; `None`: it is not a
    /// u-power of the identity (the normal form says what it is).
    pub u_power: Option<i64>,
    pub normal_form: String,
}

impl HeckeAlgebra {
    /// For each integer k, compose the shriek class at the reflected
    /// parameter (pairing −k, so its floor is −k) with the star class at
    /// the original parameter (pairing k, so its ceiling-minus-one is
    /// k−1), and report whether the product is the identity up to a power
    /// of u. The power is a measured output, not an assumption.
    pub fn verify_inverse_pairs(
        &self,
        i: usize,
        k_range: std::ops::RangeInclusive<i64>,
    ) -> Result<Vec<InversePairEntry>, HeckeError> {
        let mut out = Vec::new();
        for k in k_range {
            let shriek = self.intertwiner_class(IntertwinerKind::Shriek, i, -k)?;
            let star = self.intertwiner_class(IntertwinerKind::Star, i, k - 1)?;
            let product = self.multiply(&shriek, &star);
            out.push(InversePairEntry {
                k,
                u_power: product.as_u_power_of_one(),
                normal_form: self.render(&product),
            });
        }
        Ok(out)
    }
}

/// Outcome of the relation suite: the number of identities checked and
/// the failures, each described.
#[derive(Debug, Clone, Default)]
pub struct PresentationReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl PresentationReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl HeckeAlgebra {
    /// Verify the defining relations on desk scale:
    ///
    /// * identity axioms T_1 = t_0 = 1;
    /// * the quadratic relation for every simple reflection;
    /// * braid relations via the two alternating words for every pair;
    /// * reduced-word independence of T_w for all ℓ(w) ≤ 4;
    /// * the commutation relation verbatim for every simple α and every μ
    ///   with coordinates in [−bound, bound];
    /// * associativity on seeded random triples;
    /// * compatibility of multiplication with the u → 1 specialization
    ///   onto the group algebra of W ⋉ X*(H).
    pub fn verify_presentation(&self, mu_bound: i64, samples: usize) -> PresentationReport {
        use rand::Rng;
        use rand::SeedableRng;
        let mut report = PresentationReport::default();
        let check = |name: String, ok: bool, report: &mut PresentationReport| {
            report.checks += 1;
            if !ok {
                report.failures.push(name);
            }
        };
        let rank = self.weyl.rank;

        // T_1 = t_0 = 1.
        let zero = vec![0i64; rank];
        check(
            "identity axioms".into(),
            self.t_word(&[]).unwrap() == self.one()
                && self.translation(&zero).unwrap() == self.one(),
            &mut report,
        );

        // Quadratic relation.
        for i in 1..=rank {
            let t = self.t_simple(i).unwrap();
            let lhs = self.multiply(&t, &t);
            let rhs = t
                .scale(&LaurentPoly::u_minus_one())
                .add(&self.one().scale(&LaurentPoly::monomial(1, 1)));
            check(
                format!("quadratic relation at simple {i}"),
                lhs == rhs,
                &mut report,
            );
        }

        // Braid relations.
        for i in 1..=rank {
            for j in (i + 1)..=rank {
                let a = self.weyl.cartan[i - 1][j - 1] * self.weyl.cartan[j - 1][i - 1];
                let m = match a {
                    0 => 2,
                    1 => 3,
                    2 => 4,
                    3 => 6,
                    _ => unreachable!("bond weight {a}"),
                };
                let word_ij: Vec<usize> = (0..m).map(|p| if p % 2 == 0 { i } else { j }).collect();
                let word_ji: Vec<usize> = (0..m).map(|p| if p % 2 == 0 { j } else { i }).collect();
                check(
                    format!("braid relation ({i},{j}) of length {m}"),
                    self.t_word(&word_ij).unwrap() == self.t_word(&word_ji).unwrap(),
                    &mut report,
                );
            }
        }

        // Reduced-word independence for short elements.
        for id in 0..self.weyl.order() {
            if self.weyl.length(id) > 4 {
                continue;
            }
            let words = self.weyl.reduced_words(id);
            let expect = {
                let mut e = HeckeElement::zero();
                e.add_term((zero.clone(), id), &LaurentPoly::one());
                e
            };
            let ok = words.iter().all(|w| {
                let w1: Vec<usize> = w.iter().map(|&s| s + 1).collect();
                self.t_word(&w1).unwrap() == expect
            });
            check(
                format!("reduced words of element {:?} agree", self.weyl.word(id)),
                ok,
                &mut report,
            );
        }

        // Commutation relation, verbatim, over the μ-grid.
        let mut grid: Vec<Vec<i64>> = vec![Vec::new()];
        for _ in 0..rank {
            let mut next = Vec::new();
            for g in &grid {
                for x in -mu_bound..=mu_bound {
                    let mut g2 = g.clone();
                    g2.push(x);
                    next.push(g2);
                }
            }
            grid = next;
        }
        for i in 1..=rank {
            for mu in &grid {
                let smu = self.weyl.reflect(i - 1, mu);
                let neg_mu: Vec<i64> = mu.iter().map(|&x| -x).collect();
                let lhs = self.multiply(
                    &self.multiply(&self.translation(&smu).unwrap(), &self.t_simple(i).unwrap()),
                    &self.translation(&neg_mu).unwrap(),
                );
                let rhs = self.bernstein_rhs(i, mu[i - 1]).unwrap();
                check(
                    format!("commutation relation at simple {i}, mu {mu:?}"),
                    lhs == rhs,
                    &mut report,
                );
            }
        }

        // Random associativity and specialization samples.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        let random_element = |rng: &mut rand_chacha::ChaCha8Rng| -> HeckeElement {
            let mut e = HeckeElement::zero();
            let terms = rng.gen_range(1..=3);
            for _ in 0..terms {
                let mu: Vec<i64> = (0..rank).map(|_| rng.gen_range(-2..=2)).collect();
                let w = rng.gen_range(0..self.weyl.order());
                let exp = rng.gen_range(-2..=2);
                let coeff = loop {
                    let c = rng.gen_range(-3..=3);
                    if c != 0 {
                        break c;
                    }
                };
                e.add_term((mu, w), &LaurentPoly::monomial(exp, coeff));
            }
            e
        };
        for n in 0..samples {
            let a = random_element(&mut rng);
            let b = random_element(&mut rng);
            let c = random_element(&mut rng);
            let ab_c = self.multiply(&self.multiply(&a, &b), &c);
            let a_bc = self.multiply(&a, &self.multiply(&b, &c));
            check(
                format!("associativity sample {n}"),
                ab_c == a_bc,
                &mut report,
            );
            let spec_prod = self.specialize_u1(&self.multiply(&a, &b));
            let prod_spec = self.group_convolve(&self.specialize_u1(&a), &self.specialize_u1(&b));
            check(
                format!("u->1 specialization sample {n}"),
                spec_prod == prod_spec,
                &mut report,
            );
        }
        report
    }

    /// Evaluate every coefficient at u = 1, landing in the group algebra
    /// of W ⋉ X*(H).
    pub fn specialize_u1(&self, e: &HeckeElement) -> BTreeMap<TermKey, i64> {
        let mut out = BTreeMap::new();
        for (k, p) in &e.terms {
            let v = p.eval_one();
            if v != 0 {
                out.insert(k.clone(), v);
            }
        }
        out
    }

    /// Product in the group algebra of W ⋉ X*(H):
    /// (μ, w)·(ν, x) = (μ + wν, wx). The independent u → 1 oracle.
    pub fn group_convolve(
        &self,
        a: &BTreeMap<TermKey, i64>,
        b: &BTreeMap<TermKey, i64>,
    ) -> BTreeMap<TermKey, i64> {
        let mut out: BTreeMap<TermKey, i64> = BTreeMap::new();
        for ((mu, w), ca) in a {
            for ((nu, x), cb) in b {
                let wnu = self.weyl.act(*w, nu);
                let key = (
                    mu.iter()
                        .zip(&wnu)
                        .map(|(&p, &q)| p + q)
                        .collect::<Vec<i64>>(),
                    self.weyl.compose(*w, *x),
                );
                let entry = out.entry(key).or_insert(0);
                *entry += ca * cb;
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }
}

// ---------------------------------------------------------------------
// Printing and parsing.
// ---------------------------------------------------------------------

impl HeckeAlgebra {
    /// Render in the exchange syntax `u^2*t[1,-1]*T[1,2] + (u-1)*T[]`.
    pub fn render(&self, e: &HeckeElement) -> String {
        if e.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, ((mu, w), poly)) in e.terms.iter().enumerate() {
            let (coeff_str, negated) = match poly.as_monomial() {
                Some((0, c)) if c.abs() == 1 => (String::new(), c < 0),
                Some((e2, c)) => {
                    let mag = LaurentPoly::monomial(e2, c.abs());
                    (format!("{mag}"), c < 0)
                }
                None => (format!("({poly})"), false),
            };
            if n == 0 {
                if negated {
                    out.push('-');
                }
            } else if negated {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut pieces: Vec<String> = Vec::new();
            if !coeff_str.is_empty() {
                pieces.push(coeff_str);
            }
            if mu.iter().any(|&x| x != 0) {
                let list = mu
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                pieces.push(format!("t[{list}]"));
            }
            let word = self
                .weyl
                .word(*w)
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",");
            if *w != WeylGroup::IDENTITY {
                pieces.push(format!("T[{word}]"));
            }
            if pieces.is_empty() {
                pieces.push("T[]".into());
            }
            let _ = write!(out, "{}", pieces.join("*"));
        }
        out
    }

    /// Parse the exchange syntax. `T[word]` is interpreted as the product
    /// of generators along the word (equal to the basis element exactly
    /// when the word is reduced), so any word is legal.
    pub fn parse(&self, input: &str) -> Result<HeckeElement, HeckeError> {
        let mut parser = Parser {
            chars: input.chars().collect(),
            pos: 0,
        };
        let e = parser.expr(self)?;
        parser.skip_ws();
        if parser.pos != parser.chars.len() {
            return Err(HeckeError::Parse(format!(
                "unexpected input at byte {}",
                parser.pos
            )));
        }
        Ok(e)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expect(&mut self, c: char) -> Result<(), HeckeError> {
        match self.bump() {
            Some(x) if x == c => Ok(()),
            other => Err(HeckeError::Parse(format!("expected '{c}', got {other:?}"))),
        }
    }

    fn integer(&mut self) -> Result<i64, HeckeError> {
        self.skip_ws();
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        while self
            .chars
            .get(self.pos)
            .map(|c| c.is_ascii_digit())
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| HeckeError::Parse(format!("expected integer at byte {start}")))
    }

    fn int_list(&mut self) -> Result<Vec<i64>, HeckeError> {
        self.expect('[')?;
        let mut out = Vec::new();
        if self.peek() == Some(']') {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.integer()?);
            match self.bump() {
                Some(',') => continue,
                Some(']') => break,
                other => {
                    return Err(HeckeError::Parse(format!(
                        "expected ',' or ']', got {other:?}"
                    )))
                }
            }
        }
        Ok(out)
    }

    /// u-monomial or integer: `u`, `u^-2`, `3`, `-4`.
    fn monomial(&mut self) -> Result<LaurentPoly, HeckeError> {
        self.skip_ws();
        let mut sign = 1i64;
        while let Some(c) = self.peek() {
            match c {
                '-' => {
                    sign = -sign;
                    self.bump();
                }
                '+' => {
                    self.bump();
                }
                _ => break,
            }
        }
        let mut coeff = 1i64;
        let mut have_number = false;
        if self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
            coeff = self.integer()?;
            have_number = true;
            if self.peek() == Some('*') {
                // May be "3*u^2" — only consume the star if u follows.
                let save = self.pos;
                self.bump();
                if self.peek() != Some('u') {
                    self.pos = save;
                    return Ok(LaurentPoly::monomial(0, sign * coeff));
                }
            } else {
                return Ok(LaurentPoly::monomial(0, sign * coeff));
            }
        }
        if self.peek() == Some('u') {
            self.bump();
            let exp = if self.peek() == Some('^') {
                self.bump();
                self.integer()?
            } else {
                1
            };
            return Ok(LaurentPoly::monomial(exp, sign * coeff));
        }
        if have_number {
            return Ok(LaurentPoly::monomial(0, sign * coeff));
        }
        Err(HeckeError::Parse(format!(
            "expected a coefficient at byte {}",
            self.pos
        )))
    }

    /// Parenthesized Laurent polynomial: `(u - 1)`, `(2*u^-1 + 3)`.
    fn paren_poly(&mut self) -> Result<LaurentPoly, HeckeError> {
        self.expect('(')?;
        let mut out = self.monomial()?;
        loop {
            match self.peek() {
                Some(')') => {
                    self.bump();
                    return Ok(out);
                }
                Some('+') | Some('-') => {
                    out = out.add(&self.monomial()?);
                }
                other => {
                    return Err(HeckeError::Parse(format!(
                        "expected '+', '-' or ')', got {other:?}"
                    )))
                }
            }
        }
    }

    fn factor(&mut self, algebra: &HeckeAlgebra) -> Result<HeckeElement, HeckeError> {
        match self.peek() {
            Some('(') => {
                let p = self.paren_poly()?;
                Ok(algebra.one().scale(&p))
            }
            Some('t') => {
                self.bump();
                let mu = self.int_list()?;
                algebra.translation(&mu)
            }
            Some('T') => {
                self.bump();
                let word = self.int_list()?;
                let word: Vec<usize> = word
                    .iter()
                    .map(|&x| {
                        usize::try_from(x)
                            .ok()
                            .filter(|&i| i >= 1)
                            .ok_or_else(|| HeckeError::Parse(format!("bad simple index {x}")))
                    })
                    .collect::<Result<_, _>>()?;
                algebra.t_word(&word)
            }
            Some(c) if c.is_ascii_digit() || c == 'u' || c == '-' || c == '+' => {
                let p = self.monomial()?;
                Ok(algebra.one().scale(&p))
            }
            other => Err(HeckeError::Parse(format!(
                "expected a factor, got {other:?}"
            ))),
        }
    }

    fn term(&mut self, algebra: &HeckeAlgebra) -> Result<HeckeElement, HeckeError> {
        let mut out = self.factor(algebra)?;
        while self.peek() == Some('*') {
            self.bump();
            let f = self.factor(algebra)?;
            out = algebra.multiply(&out, &f);
        }
        Ok(out)
    }

    /// A term with optional leading signs, so `-T[1]` and `+ -u*T[]`
    /// parse.
    fn signed_term(&mut self, algebra: &HeckeAlgebra) -> Result<HeckeElement, HeckeError> {
        let mut negate = false;
        loop {
            match self.peek() {
                // A '-' directly starting a numeric coefficient belongs
                // to the monomial; peel it here only when a non-numeric
                // factor follows.
                Some('-') => {
                    let save = self.pos;
                    self.bump();
                    match self.peek() {
                        Some('t') | Some('T') | Some('(') | Some('-') | Some('+') => {
                            negate = !negate;
                        }
                        _ => {
                            self.pos = save;
                            break;
                        }
                    }
                }
                Some('+') => {
                    self.bump();
                }
                _ => break,
            }
        }
        let t = self.term(algebra)?;
        Ok(if negate { t.neg() } else { t })
    }

    fn expr(&mut self, algebra: &HeckeAlgebra) -> Result<HeckeElement, HeckeError> {
        let mut out = self.signed_term(algebra)?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    out = out.add(&self.signed_term(algebra)?);
                }
                Some('-') => {
                    self.bump();
                    out = out.sub(&self.signed_term(algebra)?);
                }
                _ => return Ok(out),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn algebra(t: &str) -> HeckeAlgebra {
        HeckeAlgebra::new(t.parse().unwrap()).unwrap()
    }

    #[test]
    fn laurent_arithmetic() {
        let u = LaurentPoly::monomial(1, 1);
        let q = LaurentPoly::u_minus_one();
        assert_eq!(q.add(&LaurentPoly::one()), u);
        assert_eq!(
            q.mul(&q),
            LaurentPoly::monomial(2, 1)
                .add(&LaurentPoly::monomial(1, -2))
                .add(&LaurentPoly::one())
        );
        assert_eq!(q.eval_one(), 0);
        assert_eq!(format!("{}", q.mul(&q)), "u^2 - 2*u + 1");
        assert_eq!(format!("{}", LaurentPoly::monomial(-1, 1)), "u^-1");
        assert!(q.sub(&q).is_zero());
    }

    #[test]
    fn weyl_group_enumeration() {
        for (t, order, longest) in [("A2", 6usize, 3usize), ("B2", 8, 4), ("G2", 12, 6)] {
            let w = WeylGroup::new(t.parse().unwrap()).unwrap();
            assert_eq!(w.order(), order, "{t}");
            let max = (0..w.order()).map(|i| w.length(i)).max().unwrap();
            assert_eq!(max, longest, "{t}");
        }
        // Canonical words are lex-least: the longest element of the rank-2
        // linear group is s1 s2 s1, not s2 s1 s2.
        let w = WeylGroup::new("A2".parse().unwrap()).unwrap();
        let longest = (0..w.order()).find(|&i| w.length(i) == 3).unwrap();
        assert_eq!(w.word(longest), vec![1, 2, 1]);
        // Composition matches word concatenation: (s1)(s2) = s1s2.
        let s1 = w.simple(0);
        let s2 = w.simple(1);
        let prod = w.compose(s1, s2);
        assert_eq!(w.word(prod), vec![1, 2]);
        // Action: s1 on ϖ1 in the rank-1 group is ϖ1 − α1 = −ϖ1.
        let a1 = WeylGroup::new("A1".parse().unwrap()).unwrap();
        assert_eq!(a1.act(a1.simple(0), &[1]), vec![-1]);
        // Enumeration limit: the largest exceptional types are refused.
        assert!(matches!(
            WeylGroup::new("E7".parse().unwrap()),
            Err(HeckeError::GroupTooLarge { .. })
        ));
    }

    #[test]
    fn quadratic_and_translation_products() {
        let h = algebra("A1");
        let t = h.t_simple(1).unwrap();
        let tt = h.multiply(&t, &t);
        let expect = t
            .scale(&LaurentPoly::u_minus_one())
            .add(&h.one().scale(&LaurentPoly::monomial(1, 1)));
        assert_eq!(tt, expect);
        let ta = h.translation(&[3]).unwrap();
        let tb = h.translation(&[-1]).unwrap();
        assert_eq!(h.multiply(&ta, &tb), h.translation(&[2]).unwrap());
    }

    #[test]
    fn rank_one_commutation_example() {
        // For ⟨μ, α̌⟩ = 1: t_{sμ} T_s t_{−μ} = T_s + (u−1)·t_{−α}.
        let h = algebra("A1");
        let mu = [1i64];
        let smu = [-1i64];
        let lhs = h.multiply(
            &h.multiply(&h.translation(&smu).unwrap(), &h.t_simple(1).unwrap()),
            &h.translation(&[-1]).unwrap(),
        );
        let t_neg_alpha = h.translation(&[-2]).unwrap();
        let rhs = h
            .t_simple(1)
            .unwrap()
            .add(&t_neg_alpha.scale(&LaurentPoly::u_minus_one()));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, h.bernstein_rhs(1, mu[0]).unwrap());
    }

    #[test]
    fn presentation_suite_passes() {
        for t in ["A2", "B2", "G2"] {
            let h = algebra(t);
            let report = h.verify_presentation(2, 25);
            assert!(
                report.all_passed(),
                "{t}: {} failures, first: {:?}",
                report.failures.len(),
                report.failures.first()
            );
            assert!(report.checks > 50, "{t} ran {} checks", report.checks);
        }
    }

    #[test]
    fn intertwiner_classes_match_expansions() {
        let h = algebra("A1");
        // k = 0: empty geometric sum.
        assert_eq!(
            h.intertwiner_class(IntertwinerKind::Shriek, 1, 0).unwrap(),
            h.t_simple(1).unwrap().neg()
        );
        assert_eq!(
            h.intertwiner_class(IntertwinerKind::Star, 1, 0).unwrap(),
            h.t_simple(1)
                .unwrap()
                .scale(&LaurentPoly::monomial(-1, 1))
                .neg()
        );
        // k = 2: −T_s + (1−u)(t_{−α} + t_{−2α}) — the ratio for k ≥ 1 is
        // −(t_{−α} + ⋯ + t_{−kα}).
        let shriek2 = h.intertwiner_class(IntertwinerKind::Shriek, 1, 2).unwrap();
        let sum = h
            .translation(&[-2])
            .unwrap()
            .add(&h.translation(&[-4]).unwrap());
        let expect = h
            .t_simple(1)
            .unwrap()
            .neg()
            .add(&sum.scale(&LaurentPoly::one_minus_u()));
        assert_eq!(shriek2, expect);
        // k = −1: the ratio is t_0 = 1.
        let shriek_neg = h.intertwiner_class(IntertwinerKind::Shriek, 1, -1).unwrap();
        let expect = h
            .t_simple(1)
            .unwrap()
            .neg()
            .add(&h.one().scale(&LaurentPoly::u_minus_one()));
        assert_eq!(shriek_neg, expect);
    }

    #[test]
    fn inverse_pairs_compose_to_the_identity() {
        let h = algebra("A1");
        let entries = h.verify_inverse_pairs(1, -5..=5).unwrap();
        for e in &entries {
            assert_eq!(
                e.u_power,
                Some(0),
                "k = {}: product is {}",
                e.k,
                e.normal_form
            );
        }
        // The same composition in a rank-2 ambient.
        let h = algebra("B2");
        for i in 1..=2 {
            for e in h.verify_inverse_pairs(i, -3..=3).unwrap() {
                assert_eq!(e.u_power, Some(0), "simple {i}, k = {}", e.k);
            }
        }
    }

    #[test]
    fn specialization_oracle_on_directed_products() {
        let h = algebra("B2");
        let a = h.multiply(
            &h.translation(&[1, -2]).unwrap(),
            &h.t_word(&[1, 2]).unwrap(),
        );
        let b = h.multiply(&h.translation(&[0, 3]).unwrap(), &h.t_word(&[2]).unwrap());
        let specialized = h.specialize_u1(&h.multiply(&a, &b));
        let oracle = h.group_convolve(&h.specialize_u1(&a), &h.specialize_u1(&b));
        assert_eq!(specialized, oracle);
    }

    #[test]
    fn render_and_parse_round_trip() {
        let h = algebra("A2");
        let e = h
            .multiply(
                &h.translation(&[1, -1]).unwrap(),
                &h.t_word(&[1, 2]).unwrap(),
            )
            .scale(&LaurentPoly::monomial(2, 1))
            .add(&h.one().scale(&LaurentPoly::u_minus_one()));
        let text = h.render(&e);
        assert_eq!(text, "(u - 1) + u^2*t[1,-1]*T[1,2]");
        let back = h.parse(&text).unwrap();
        assert_eq!(back, e);
        // Identity and zero forms.
        assert_eq!(h.render(&h.one()), "T[]");
        assert_eq!(h.parse("T[]").unwrap(), h.one());
        assert_eq!(h.render(&HeckeElement::zero()), "0");
        // Non-reduced words are products: T[1,1] obeys the quadratic rule.
        let squared = h.parse("T[1,1]").unwrap();
        let expect = h.parse("(u-1)*T[1] + u*T[]").unwrap();
        assert_eq!(squared, expect);
        // Round trip a negative-coefficient element.
        let e = h.t_simple(1).unwrap().neg();
        assert_eq!(h.parse(&h.render(&e)).unwrap(), e);
    }

    #[test]
    fn bad_inputs_are_typed_errors() {
        let h = algebra("A2");
        assert!(matches!(h.t_simple(3), Err(HeckeError::BadSimple(3, 2))));
        assert!(matches!(
            h.translation(&[1]),
            Err(HeckeError::BadWeight { got: 1, want: 2 })
        ));
        assert!(h.parse("t[1,2,3]").is_err());
        assert!(h.parse("q*T[]").is_err());
        assert!(h.parse("T[1] +").is_err());
    }
}
