//! The decision procedure: is a rational weight λ very weakly unipotent?
//!
//! λ (taken up to its Weyl orbit) fails exactly when some member γ of its
//! root-lattice translate, lying strictly inside the convex hull of Wλ but
//! off the orbit, has an attached dual-side nilpotent orbit whose closure
//! contains the orbit attached to λ. Both orbits live in the integral
//! coroot subsystem of λ — which is also the integral subsystem of every
//! member γ — and are induced from zero along the Levi cut out by the
//! member's vanishing pairings. A member's pairings against the subsystem
//! are always integers, but the member itself need not be anywhere near
//! the dominant chamber, so it is first reflected into the *subsystem's*
//! chamber (never the ambient one: the ambient-dominant representative
//! generally leaves the lattice translate and pairs non-integrally against
//! the subsystem). The attached orbit is constant on each ambient-dominant
//! class of members, so verdicts are reported per class. Torus coordinates
//! carry the zero orbit on both sides, so a weight with an *empty*
//! integral subsystem is contained trivially and fails whenever any γ
//! exists at all.
//!
//! Two routes are provided. [`check_vwu_direct`] evaluates the definition
//! literally. [`check_vwu_triangular`] is a fast sufficient criterion for
//! classical ambients: it splits the dominant coordinates into residue
//! classes and checks each class against the triangularity predicate of
//! its calculus; if every class passes, λ is very weakly unipotent and no
//! enumeration is needed. A failed or inapplicable class makes that route
//! *inconclusive* (never a "false"), and [`check_vwu`] in auto mode falls
//! back to the direct route.

use crate::orbits::{
    class_is_triangular, factor_richardson, orbit_closure_leq, OrbitError, OrbitLabel, TableSet,
};
use crate::rat::Rat;
use crate::rootsys::{CartanType, Family, RootSystem, RootSystemError, SubsystemFactor};
use crate::triangular::{fold_classes, signed_classes, ClassKind, ResidueClass};
use crate::weightgeom::{enumerate_d_circ, WeightGeomError};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Root(#[from] RootSystemError),
    #[error(transparent)]
    Weight(#[from] WeightGeomError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("the triangular route requires a classical ambient, got {0}")]
    NonClassicalAmbient(CartanType),
    #[error("the two routes disagree: {0}")]
    Disagreement(String),
}

/// Which route produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    TriangularFast,
    Both,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::TriangularFast => "triangular-fast",
            Method::Both => "both",
        })
    }
}

/// Route selection for [`check_vwu`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Auto,
    Direct,
    Triangular,
    Both,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(Mode::Auto),
            "direct" => Ok(Mode::Direct),
            "triangular" => Ok(Mode::Triangular),
            "both" => Ok(Mode::Both),
            other => Err(format!(
                "unknown mode '{other}' (expected auto|direct|triangular|both)"
            )),
        }
    }
}

/// One irreducible factor of the integral coroot subsystem, with the orbit
/// attached to λ in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorReport {
    pub cartan: CartanType,
    pub orbit_lambda: OrbitLabel,
}

/// A witness against very weak unipotence: a class of members whose
/// attached orbit's closure contains λ's in every factor, reported by the
/// class's ambient-dominant representative (the orbit itself is computed
/// from the lattice members). The equality case (all factor orbits
/// literally equal) is flagged separately, since a strict-membership
/// reading of the containment would differ exactly there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub gamma: Vec<Rat>,
    pub orbit_gamma: Vec<OrbitLabel>,
    pub orbit_equal: bool,
}

/// One residue class of the dominant coordinates, as the triangular route
/// saw it. `triangular: None` means no calculus applies to the class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub kind: ClassKind,
    pub values: Vec<Rat>,
    pub triangular: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub is_vwu: bool,
    pub method: Method,
    /// The dominant representative actually analyzed.
    pub lambda_dominant: Vec<Rat>,
    /// Factors of the integral coroot subsystem with λ's orbits (direct
    /// route only).
    pub factor_reports: Vec<FactorReport>,
    /// Violating member classes; nonempty exactly when `is_vwu` is false.
    pub witnesses: Vec<Witness>,
    /// Residue classes (triangular route only).
    pub class_reports: Vec<ClassReport>,
    /// How many dominant member classes were examined (0 on the triangular
    /// route).
    pub d_circ_size: usize,
}

/// Result of the fast route: either a positive verdict or an explicit
/// refusal to decide.
#[derive(Debug, Clone)]
pub enum TriangularOutcome {
    Concluded(Verdict),
    Inconclusive {
        reason: String,
        classes: Vec<ClassReport>,
    },
}

/// Result of the dispatching checker.
#[derive(Debug, Clone)]
pub enum CheckOutcome {
    Decided(Verdict),
    Inconclusive {
        reason: String,
        classes: Vec<ClassReport>,
    },
}

fn is_classical(family: Family) -> bool {
    matches!(family, Family::A | Family::B | Family::C | Family::D)
}

/// Zero-pairing flags of a weight against each factor's simple coroots.
fn zero_flags(rs: &RootSystem, factors: &[SubsystemFactor], w: &[Rat]) -> Vec<Vec<bool>> {
    factors
        .iter()
        .map(|f| {
            f.simples
                .iter()
                .map(|(_, coroot)| rs.pairing(w, coroot).is_zero())
                .collect()
        })
        .collect()
}

/// Reflect `w` into the subsystem's dominant chamber: while some factor
/// simple pairs negatively, apply that factor's simple reflection. The
/// factors are mutually orthogonal, so a reflection in one never disturbs
/// pairings against another, and the usual chamber-walk argument bounds
/// the loop.
fn subsystem_dominantize(rs: &RootSystem, factors: &[SubsystemFactor], w: &[Rat]) -> Vec<Rat> {
    let mut v = w.to_vec();
    'scan: loop {
        for factor in factors {
            for (root, coroot) in &factor.simples {
                let c = rs.pairing(&v, coroot);
                if c < Rat::zero() {
                    for (vi, ri) in v.iter_mut().zip(root) {
                        *vi -= c * *ri;
                    }
                    continue 'scan;
                }
            }
        }
        return v;
    }
}

/// The orbit attached to a weight, factor by factor: reflect it into the
/// subsystem's chamber and induce from the Levi cut out by its vanishing
/// simple pairings. Members of λ's lattice translate pair integrally with
/// the subsystem, which is what makes the zero-set meaningful.
fn attached_orbit(
    rs: &RootSystem,
    factors: &[SubsystemFactor],
    w: &[Rat],
    tables: &TableSet,
) -> Result<Vec<OrbitLabel>, CheckError> {
    let chambered = subsystem_dominantize(rs, factors, w);
    debug_assert!(
        factors.iter().all(|f| f
            .simples
            .iter()
            .all(|(_, coroot)| crate::rat::is_integer(&rs.pairing(&chambered, coroot)))),
        "subsystem pairings of a lattice member must be integral"
    );
    let flags = zero_flags(rs, factors, &chambered);
    factors
        .iter()
        .zip(&flags)
        .map(|(f, fl)| factor_richardson(f, fl, tables).map_err(CheckError::from))
        .collect()
}

/// Evaluate the definition literally: enumerate the members of the
/// punctured-hull set, group them by ambient-dominant representative, and
/// compare induced orbits factorwise.
pub fn check_vwu_direct(
    rs: &RootSystem,
    lambda: &[Rat],
    tables: &TableSet,
) -> Result<Verdict, CheckError> {
    check_vwu_direct_opts(rs, lambda, tables, true)
}

/// As [`check_vwu_direct`], with `exhaustive = false` stopping at the
/// first witness.
pub fn check_vwu_direct_opts(
    rs: &RootSystem,
    lambda: &[Rat],
    tables: &TableSet,
    exhaustive: bool,
) -> Result<Verdict, CheckError> {
    let (lambda_dom, _) = rs.dominant_representative(lambda)?;
    let subsystem = rs.integral_coroot_subsystem(&lambda_dom)?;
    let factors = &subsystem.factors;
    // λ itself is ambient-dominant, hence already in the subsystem's
    // chamber; `attached_orbit`'s reflection loop is a no-op on it.
    let orbit_lambda = attached_orbit(rs, factors, &lambda_dom, tables)?;
    let factor_reports: Vec<FactorReport> = factors
        .iter()
        .zip(&orbit_lambda)
        .map(|(f, o)| FactorReport {
            cartan: f.cartan,
            orbit_lambda: o.clone(),
        })
        .collect();

    // Group the lattice members by ambient-dominant representative; the
    // attached orbit is constant on each class (checked in debug builds),
    // so the verdict examines one member per class.
    let mut classes: BTreeMap<Vec<Rat>, Vec<Vec<Rat>>> = BTreeMap::new();
    for member in enumerate_d_circ(rs, &lambda_dom)? {
        let (rep, _) = rs.dominant_representative(&member.weight)?;
        classes.entry(rep).or_default().push(member.weight);
    }
    let norm_lambda = rs.invariant_norm_sq(&lambda_dom);
    let mut witnesses = Vec::new();
    for (rep, members) in &classes {
        // Every class is strictly shorter than λ; this is a theorem about
        // the punctured hull, asserted on every run as a guard.
        assert!(
            rs.invariant_norm_sq(rep) < norm_lambda,
            "member class {rep:?} is not shorter than {lambda_dom:?}"
        );
        let orbit_gamma = attached_orbit(rs, factors, &members[0], tables)?;
        if cfg!(debug_assertions) {
            for other in &members[1..] {
                let also = attached_orbit(rs, factors, other, tables)?;
                assert_eq!(
                    also, orbit_gamma,
                    "attached orbit is not constant on the class of {rep:?}"
                );
            }
        }
        // Containment of the product orbit's closure is factorwise; an
        // empty factor list (pure torus) is contained vacuously.
        let mut contained = true;
        for ((f, ol), og) in factors.iter().zip(&orbit_lambda).zip(&orbit_gamma) {
            if !orbit_closure_leq(f.cartan, ol, og, tables)? {
                contained = false;
                break;
            }
        }
        if contained {
            witnesses.push(Witness {
                gamma: rep.clone(),
                orbit_equal: orbit_lambda == orbit_gamma,
                orbit_gamma,
            });
            if !exhaustive {
                break;
            }
        }
    }
    Ok(Verdict {
        is_vwu: witnesses.is_empty(),
        method: Method::Direct,
        lambda_dominant: lambda_dom,
        factor_reports,
        witnesses,
        class_reports: Vec::new(),
        d_circ_size: classes.len(),
    })
}

/// The fast sufficient criterion for classical ambients: λ is very weakly
/// unipotent if every residue class of its dominant coordinates satisfies
/// the triangularity predicate of its calculus. Signed classes are used
/// for linear ambients, folded (absolute-value) classes otherwise.
pub fn check_vwu_triangular(
    rs: &RootSystem,
    lambda: &[Rat],
) -> Result<TriangularOutcome, CheckError> {
    let family = rs.cartan_type().family;
    if !is_classical(family) {
        return Err(CheckError::NonClassicalAmbient(rs.cartan_type()));
    }
    let (lambda_dom, _) = rs.dominant_representative(lambda)?;
    let classes: Vec<ResidueClass> = if family == Family::A {
        signed_classes(&lambda_dom)
    } else {
        fold_classes(&lambda_dom)
    };
    let mut reports = Vec::new();
    for class in &classes {
        let triangular = class_is_triangular(family, class)?;
        reports.push(ClassReport {
            kind: class.kind.clone(),
            values: class.values.clone(),
            triangular,
        });
    }
    if let Some(bad) = reports.iter().find(|r| r.triangular != Some(true)) {
        let reason = match bad.triangular {
            None => format!(
                "class {:?} ({}) has no applicable calculus",
                bad.values, bad.kind
            ),
            _ => format!("class {:?} ({}) is not triangular", bad.values, bad.kind),
        };
        return Ok(TriangularOutcome::Inconclusive {
            reason,
            classes: reports,
        });
    }
    Ok(TriangularOutcome::Concluded(Verdict {
        is_vwu: true,
        method: Method::TriangularFast,
        lambda_dominant: lambda_dom,
        factor_reports: Vec::new(),
        witnesses: Vec::new(),
        class_reports: reports,
        d_circ_size: 0,
    }))
}

/// Dispatching checker.
///
/// * `auto`: fast route when the ambient is classical, falling back to the
///   direct route when inconclusive.
/// * `direct` / `triangular`: that route only (`triangular` reports
///   inconclusive inputs as such instead of deciding).
/// * `both`: run both and cross-check — a fast-route "true" with a direct
///   "false" is an internal contradiction and comes back as an error.
pub fn check_vwu(
    rs: &RootSystem,
    lambda: &[Rat],
    mode: Mode,
    tables: &TableSet,
) -> Result<CheckOutcome, CheckError> {
    match mode {
        Mode::Direct => Ok(CheckOutcome::Decided(check_vwu_direct(rs, lambda, tables)?)),
        Mode::Triangular => match check_vwu_triangular(rs, lambda)? {
            TriangularOutcome::Concluded(v) => Ok(CheckOutcome::Decided(v)),
            TriangularOutcome::Inconclusive { reason, classes } => {
                Ok(CheckOutcome::Inconclusive { reason, classes })
            }
        },
        Mode::Auto => {
            if is_classical(rs.cartan_type().family) {
                if let TriangularOutcome::Concluded(v) = check_vwu_triangular(rs, lambda)? {
                    return Ok(CheckOutcome::Decided(v));
                }
            }
            Ok(CheckOutcome::Decided(check_vwu_direct(rs, lambda, tables)?))
        }
        Mode::Both => {
            let direct = check_vwu_direct(rs, lambda, tables)?;
            let mut merged = direct.clone();
            merged.method = Method::Both;
            if is_classical(rs.cartan_type().family) {
                if let TriangularOutcome::Concluded(t) = check_vwu_triangular(rs, lambda)? {
                    if !direct.is_vwu {
                        return Err(CheckError::Disagreement(format!(
                            "triangular route asserts very weak unipotence for {:?}, \
                             direct route found witnesses {:?}",
                            direct.lambda_dominant, direct.witnesses
                        )));
                    }
                    merged.class_reports = t.class_reports;
                }
            }
            Ok(CheckOutcome::Decided(merged))
        }
    }
}
