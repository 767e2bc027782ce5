//! Weight-polytope geometry: membership in the convex hull of a Weyl
//! orbit, and enumeration of the hull's intersection with the root-lattice
//! translate of the highest weight.
//!
//! For a dominant weight λ the set enumerated here is
//! `D°(λ) = (Conv(Wλ) ∖ Wλ) ∩ (λ + ZΦ)`, whose members are exactly the
//! vectors `λ − Σ kᵢ αᵢ` with `kᵢ ∈ Z≥0` that lie in the hull and not in
//! the orbit. The companion function returns the *dominant Weyl
//! representatives* of those members. The distinction matters: a
//! representative of a member can fall outside `λ + ZΦ` (already in rank
//! one: for `⟨λ, α∨⟩ = 3/2` the only member has pairing `−1/2` and its
//! representative, with pairing `+1/2`, is not in the translate), so the
//! representative set cannot be produced by filtering the translate for
//! dominant vectors.

use crate::rat::{dot, Rat};
use crate::rootsys::{Family, RootSystem, RootSystemError};
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightGeomError {
    #[error(transparent)]
    Root(#[from] RootSystemError),
    #[error("operation requires a dominant weight")]
    NotDominant,
    #[error("euclidean norms are defined only for the classical families")]
    NotClassical,
}

/// One element of `D°(λ)` together with the coefficients of `λ − γ` in the
/// simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DCircMember {
    pub weight: Vec<Rat>,
    pub k: Vec<u32>,
}

/// Is `μ` in the convex hull of the Weyl orbit of the dominant weight `λ`?
///
/// Uses the standard criterion: `μ ∈ Conv(Wλ)` iff `λ` minus the dominant
/// representative of `μ` is a nonnegative rational combination of simple
/// roots. A difference outside the root span (possible in type `A`'s
/// ambient coordinates) means the answer is no.
pub fn in_hull(rs: &RootSystem, lambda: &[Rat], mu: &[Rat]) -> Result<bool, WeightGeomError> {
    if !rs.is_dominant(lambda)? {
        return Err(WeightGeomError::NotDominant);
    }
    let (nu, _) = rs.dominant_representative(mu)?;
    let diff: Vec<Rat> = lambda.iter().zip(&nu).map(|(a, b)| *a - *b).collect();
    Ok(match rs.expand_in_simple_roots(&diff) {
        Some(coeffs) => coeffs.iter().all(|c| *c >= Rat::zero()),
        None => false,
    })
}

/// Walk the lattice translate `λ − Z≥0{α_i}` down to the lowest level that
/// can still meet the hull, returning every visited vector with its
/// coefficient vector.
fn walk_translate(
    rs: &RootSystem,
    lambda: &[Rat],
) -> Result<BTreeMap<Vec<Rat>, Vec<u32>>, WeightGeomError> {
    let rho_check = rs.rho_check();
    let bound = dot(lambda, &rho_check);
    // Every hull member pairs with ρ∨ in [−⟨λ,ρ∨⟩, ⟨λ,ρ∨⟩], and each
    // simple-root subtraction lowers the pairing by exactly 1, so the walk
    // is finite.
    let mut visited: BTreeMap<Vec<Rat>, Vec<u32>> = BTreeMap::new();
    let mut queue: VecDeque<Vec<Rat>> = VecDeque::new();
    visited.insert(lambda.to_vec(), vec![0; rs.rank()]);
    queue.push_back(lambda.to_vec());
    while let Some(v) = queue.pop_front() {
        let k = visited[&v].clone();
        for (i, alpha) in rs.simple_roots().iter().enumerate() {
            let next: Vec<Rat> = v.iter().zip(alpha).map(|(a, b)| *a - *b).collect();
            if visited.contains_key(&next) {
                continue;
            }
            if dot(&next, &rho_check) < -bound {
                continue;
            }
            let mut nk = k.clone();
            nk[i] += 1;
            visited.insert(next.clone(), nk);
            queue.push_back(next);
        }
    }
    Ok(visited)
}

/// Enumerate `D°(λ)` for dominant `λ`: hull members of the root-lattice
/// translate, excluding the Weyl orbit of `λ` itself. Sorted by total
/// level, then lexicographically.
pub fn enumerate_d_circ(
    rs: &RootSystem,
    lambda: &[Rat],
) -> Result<Vec<DCircMember>, WeightGeomError> {
    if !rs.is_dominant(lambda)? {
        return Err(WeightGeomError::NotDominant);
    }
    let mut members = Vec::new();
    for (weight, k) in walk_translate(rs, lambda)? {
        if !in_hull(rs, lambda, &weight)? {
            continue;
        }
        let (rep, _) = rs.dominant_representative(&weight)?;
        if rep == lambda {
            continue;
        }
        members.push(DCircMember { weight, k });
    }
    members.sort_by_key(|m| (m.k.iter().map(|&x| x as u64).sum::<u64>(), m.weight.clone()));
    Ok(members)
}

/// The dominant Weyl representatives of the members of `D°(λ)`, deduplicated
/// and sorted. Every representative is strictly shorter than `λ` under the
/// invariant form (hull members attain the orbit's length only on the orbit
/// itself); this is asserted in debug builds.
pub fn enumerate_d_circ_plus(
    rs: &RootSystem,
    lambda: &[Rat],
) -> Result<Vec<Vec<Rat>>, WeightGeomError> {
    let mut reps: BTreeSet<Vec<Rat>> = BTreeSet::new();
    for member in enumerate_d_circ(rs, lambda)? {
        let (rep, _) = rs.dominant_representative(&member.weight)?;
        debug_assert!(
            rs.invariant_norm_sq(&rep) < rs.invariant_norm_sq(lambda),
            "hull-interior member as long as the highest weight"
        );
        reps.insert(rep);
    }
    Ok(reps.into_iter().collect())
}

/// Squared euclidean length in the standard coordinates of the classical
/// families (`A`–`D`). Exceptional types are rejected: their coordinates
/// are not euclidean, so callers must use the invariant form instead.
pub fn euclidean_norm_sq(rs: &RootSystem, v: &[Rat]) -> Result<Rat, WeightGeomError> {
    match rs.cartan_type().family {
        Family::A | Family::B | Family::C | Family::D => Ok(crate::rat::norm_sq(v)),
        _ => Err(WeightGeomError::NotClassical),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{parse_rat, rint};
    use crate::rootsys::CartanType;

    fn rs(s: &str) -> RootSystem {
        RootSystem::new(s.parse::<CartanType>().unwrap()).unwrap()
    }

    fn w(v: &[&str]) -> Vec<Rat> {
        v.iter().map(|s| parse_rat(s).unwrap()).collect()
    }

    #[test]
    fn hull_membership_b2() {
        let b2 = rs("B2");
        let lam = w(&["2", "1"]);
        assert!(in_hull(&b2, &lam, &w(&["1", "0"])).unwrap());
        assert!(in_hull(&b2, &lam, &w(&["2", "1"])).unwrap());
        assert!(in_hull(&b2, &lam, &w(&["1/2", "1/2"])).unwrap());
        // Non-dominant points are folded first.
        assert!(in_hull(&b2, &lam, &w(&["0", "-2"])).unwrap());
        assert!(!in_hull(&b2, &lam, &w(&["3", "0"])).unwrap());
        assert!(!in_hull(&b2, &lam, &w(&["2", "2"])).unwrap());
        assert_eq!(
            in_hull(&b2, &w(&["1", "2"]), &w(&["0", "0"])),
            Err(WeightGeomError::NotDominant)
        );
    }

    #[test]
    fn hull_rejects_off_span_differences() {
        let a2 = rs("A2");
        let lam = w(&["1", "0", "-1"]);
        // (1,0,0) differs from λ's orbit plane by a central shift.
        assert!(!in_hull(&a2, &lam, &w(&["1", "0", "0"])).unwrap());
        assert!(in_hull(&a2, &lam, &w(&["0", "0", "0"])).unwrap());
    }

    #[test]
    fn d_circ_rank_one() {
        let a1 = rs("A1");
        // Pairing 2: one interior lattice point, the origin.
        let members = enumerate_d_circ(&a1, &w(&["1", "-1"])).unwrap();
        assert_eq!(members.len(), 1);
        assert_eq!(members[0].weight, w(&["0", "0"]));
        assert_eq!(members[0].k, vec![1]);
        assert_eq!(
            enumerate_d_circ_plus(&a1, &w(&["1", "-1"])).unwrap(),
            vec![w(&["0", "0"])]
        );

        // Pairing 1: the translate meets the open hull nowhere.
        assert!(enumerate_d_circ(&a1, &w(&["1/2", "-1/2"]))
            .unwrap()
            .is_empty());

        // Pairing 3/2: the single member pairs to −1/2; its dominant
        // representative (pairing +1/2) is outside the translate.
        let lam = w(&["3/4", "-3/4"]);
        let members = enumerate_d_circ(&a1, &lam).unwrap();
        assert_eq!(members.len(), 1);
        assert_eq!(members[0].weight, w(&["-1/4", "1/4"]));
        assert_eq!(
            enumerate_d_circ_plus(&a1, &lam).unwrap(),
            vec![w(&["1/4", "-1/4"])]
        );
    }

    #[test]
    fn d_circ_a2_rho_and_twice_rho() {
        let a2 = rs("A2");
        let rho = w(&["1", "0", "-1"]);
        let members = enumerate_d_circ(&a2, &rho).unwrap();
        assert_eq!(members.len(), 1);
        assert_eq!(members[0].weight, w(&["0", "0", "0"]));
        assert_eq!(members[0].k, vec![1, 1]);

        let two_rho = w(&["2", "0", "-2"]);
        let plus = enumerate_d_circ_plus(&a2, &two_rho).unwrap();
        assert_eq!(
            plus,
            vec![
                w(&["0", "0", "0"]),
                w(&["1", "0", "-1"]),
                w(&["1", "1", "-2"]),
                w(&["2", "-1", "-1"]),
            ]
        );
        // The full member list is strictly larger than the representative
        // set (several members share a representative).
        assert!(enumerate_d_circ(&a2, &two_rho).unwrap().len() > plus.len());
    }

    #[test]
    fn d_circ_members_are_strictly_shorter() {
        for (s, pairings) in [
            ("B2", vec!["1", "1"]),
            ("C2", vec!["1", "1/2"]),
            ("A2", vec!["2", "2"]),
            ("G2", vec!["1", "1"]),
        ] {
            let r = rs(s);
            let lam = r.weight_from_pairings(&w(&pairings)).unwrap();
            let n = r.invariant_norm_sq(&lam);
            let members = enumerate_d_circ(&r, &lam).unwrap();
            assert!(!members.is_empty(), "{s}");
            for m in members {
                assert!(r.invariant_norm_sq(&m.weight) < n, "{s}: {:?}", m.weight);
            }
        }
    }

    #[test]
    fn euclidean_norms_classical_only() {
        let b2 = rs("B2");
        assert_eq!(euclidean_norm_sq(&b2, &w(&["3", "4"])).unwrap(), rint(25));
        let g2 = rs("G2");
        assert_eq!(
            euclidean_norm_sq(&g2, &w(&["1", "0", "-1"])),
            Err(WeightGeomError::NotClassical)
        );
        let e6 = rs("E6");
        assert!(euclidean_norm_sq(&e6, &w(&["1", "0", "0", "0", "0", "0"])).is_err());
    }

    #[test]
    fn d_circ_counts_match_direct_hull_scan_b2() {
        // Independent cross-check on a small box: scan all integer shifts
        // λ − (a α1 + b α2) directly.
        let b2 = rs("B2");
        let lam = w(&["2", "1"]);
        let mut expected = Vec::new();
        for a in 0..=8i64 {
            for b in 0..=8i64 {
                if a == 0 && b == 0 {
                    continue;
                }
                let v = vec![lam[0] - rint(a), lam[1] + rint(a) - rint(b)];
                if in_hull(&b2, &lam, &v).unwrap()
                    && b2.dominant_representative(&v).unwrap().0 != lam
                {
                    expected.push(v);
                }
            }
        }
        let got = enumerate_d_circ(&b2, &lam).unwrap();
        assert_eq!(got.len(), expected.len());
        for m in &got {
            assert!(expected.contains(&m.weight));
        }
    }
}
