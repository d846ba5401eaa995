//! Voronoi-type classification and the root invariant.
//!
//! After reduction the six conorms are non-negative and the pattern of
//! exact zeros decides the combinatorial type of the Voronoi domain:
//!
//! * no zero — `V1`, truncated octahedron;
//! * one zero — `V2`, hexa-rhombic dodecahedron;
//! * two zeros on a complementary pair (one coform column) — `V3`,
//!   rhombic dodecahedron;
//! * two zeros sharing an index (different columns) — `V4`, hexagonal
//!   prism;
//! * three zeros — `V5`, cuboid.
//!
//! The root form is the entrywise square root of the coform. Per type, a
//! finite group still acts on it (24 index permutations for `V1`, the
//! dihedral group of order 8 on a 2x2 block for `V2`, free permutations of
//! the non-zero entries for `V3`/`V4`/`V5`); the root invariant is the
//! canonical representative of that orbit, taken as the lexicographic
//! minimum. Two lattices are isometric exactly when their root invariants
//! coincide, and similar exactly when the invariants are proportional.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{Basis3, Vec3};
use crate::reduction::{reduce_to_obtuse, DEFAULT_MAX_ITERS};
use crate::superbase::{
    apply_index_permutation, vonorms_from_conorms, CoForm, IndexPermutation, Superbase,
    SLOT_COMPLEMENT, SLOT_NAMES, SLOT_PAIRS,
};

/// Default relative tolerance for zero snapping and invariant comparison.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VoronoiType {
    V1,
    V2,
    V3,
    V4,
    V5,
}

impl VoronoiType {
    pub fn as_str(&self) -> &'static str {
        match self {
            VoronoiType::V1 => "V1",
            VoronoiType::V2 => "V2",
            VoronoiType::V3 => "V3",
            VoronoiType::V4 => "V4",
            VoronoiType::V5 => "V5",
        }
    }
}

impl std::fmt::Display for VoronoiType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Entrywise square roots of an obtuse coform, same slot layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootForm {
    pub r23: f64,
    pub r13: f64,
    pub r12: f64,
    pub r01: f64,
    pub r02: f64,
    pub r03: f64,
}

impl RootForm {
    pub fn from_slots(s: [f64; 6]) -> RootForm {
        RootForm {
            r23: s[0],
            r13: s[1],
            r12: s[2],
            r01: s[3],
            r02: s[4],
            r03: s[5],
        }
    }

    pub fn slots(&self) -> [f64; 6] {
        [self.r23, self.r13, self.r12, self.r01, self.r02, self.r03]
    }
}

/// Canonical representative of a root form under its type's group.
#[derive(Debug, Clone, PartialEq)]
pub enum RootInvariant {
    /// Lexicographically minimal arrangement `(r23, r13, r12, r01, r02, r03)`
    /// over the 24 index permutations.
    V1([f64; 6]),
    /// `fixed` is the root product complementary to the zero slot; `block`
    /// is `(r13, r12, r02, r03)` minimized over the 8 dihedral arrangements.
    V2 { fixed: f64, block: [f64; 4] },
    /// The four non-zero root products in increasing order.
    V3([f64; 4]),
    /// `triple` in increasing order; `axis` is the root product whose index
    /// pair contains the index shared by both zeros (the squared length of
    /// the vector orthogonal to the other two).
    V4 { triple: [f64; 3], axis: f64 },
    /// The three non-zero root products in increasing order.
    V5([f64; 3]),
}

impl RootInvariant {
    pub fn vtype(&self) -> VoronoiType {
        match self {
            RootInvariant::V1(_) => VoronoiType::V1,
            RootInvariant::V2 { .. } => VoronoiType::V2,
            RootInvariant::V3(_) => VoronoiType::V3,
            RootInvariant::V4 { .. } => VoronoiType::V4,
            RootInvariant::V5(_) => VoronoiType::V5,
        }
    }

    /// Flat value tuple in the serialization order: `V1` as the six slots,
    /// `V2` as `[fixed, r13, r12, r02, r03]`, `V3` sorted, `V4` as
    /// `[triple.., axis]`, `V5` sorted.
    pub fn values(&self) -> Vec<f64> {
        match self {
            RootInvariant::V1(v) => v.to_vec(),
            RootInvariant::V2 { fixed, block } => {
                let mut v = vec![*fixed];
                v.extend_from_slice(block);
                v
            }
            RootInvariant::V3(v) => v.to_vec(),
            RootInvariant::V4 { triple, axis } => {
                let mut v = triple.to_vec();
                v.push(*axis);
                v
            }
            RootInvariant::V5(v) => v.to_vec(),
        }
    }

    /// Rebuild from the serialization order used by [`Self::values`].
    pub fn from_values(vtype: VoronoiType, values: &[f64]) -> Result<RootInvariant> {
        let expect = match vtype {
            VoronoiType::V1 => 6,
            VoronoiType::V2 => 5,
            VoronoiType::V3 | VoronoiType::V4 => 4,
            VoronoiType::V5 => 3,
        };
        if values.len() != expect {
            return Err(Error::InvalidInvariant(format!(
                "{vtype} expects {expect} values, got {}",
                values.len()
            )));
        }
        if values.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidInvariant(
                "all root products must be finite and non-negative".into(),
            ));
        }
        Ok(match vtype {
            VoronoiType::V1 => RootInvariant::V1([
                values[0], values[1], values[2], values[3], values[4], values[5],
            ]),
            VoronoiType::V2 => RootInvariant::V2 {
                fixed: values[0],
                block: [values[1], values[2], values[3], values[4]],
            },
            VoronoiType::V3 => RootInvariant::V3([values[0], values[1], values[2], values[3]]),
            VoronoiType::V4 => RootInvariant::V4 {
                triple: [values[0], values[1], values[2]],
                axis: values[3],
            },
            VoronoiType::V5 => RootInvariant::V5([values[0], values[1], values[2]]),
        })
    }

    pub fn max_entry(&self) -> f64 {
        self.values().into_iter().fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: f64) -> RootInvariant {
        let values: Vec<f64> = self.values().into_iter().map(|x| s * x).collect();
        RootInvariant::from_values(self.vtype(), &values).expect("scaling keeps the shape")
    }

    /// Equal Voronoi type and max-norm distance at most `rel_tol * scale`,
    /// scale being the largest entry of either tuple.
    pub fn approx_eq(&self, other: &RootInvariant, rel_tol: f64) -> bool {
        if self.vtype() != other.vtype() {
            return false;
        }
        let a = self.values();
        let b = other.values();
        let scale = self.max_entry().max(other.max_entry());
        a.iter()
            .zip(&b)
            .all(|(x, y)| (x - y).abs() <= rel_tol * scale.max(f64::MIN_POSITIVE))
    }
}

/// Clamp conorms within `rel_tol * max vonorm` of zero to exactly zero.
/// Entries below the negative tolerance mean the coform is not obtuse.
pub fn snap_zeros(cf: &CoForm, rel_tol: f64) -> Result<CoForm> {
    let scale = vonorms_from_conorms(cf).max();
    let tol = rel_tol * scale;
    let mut out = cf.slots();
    for (s, p) in out.iter_mut().enumerate() {
        if *p < -tol {
            return Err(Error::NotObtuse {
                slot: SLOT_NAMES[s],
                value: *p,
                tol,
            });
        }
        if *p <= tol {
            *p = 0.0;
        }
    }
    Ok(CoForm::from_slots(out))
}

/// Slots holding exact zeros.
fn zero_slots(slots: &[f64; 6]) -> Vec<usize> {
    slots
        .iter()
        .enumerate()
        .filter(|(_, p)| **p == 0.0)
        .map(|(s, _)| s)
        .collect()
}

fn shared_index(a: (usize, usize), b: (usize, usize)) -> Option<usize> {
    [a.0, a.1].into_iter().find(|i| *i == b.0 || *i == b.1)
}

fn classify_slots(slots: &[f64; 6]) -> Result<VoronoiType> {
    let zeros = zero_slots(slots);
    match zeros.len() {
        0 => Ok(VoronoiType::V1),
        1 => Ok(VoronoiType::V2),
        2 => {
            let (a, b) = (SLOT_PAIRS[zeros[0]], SLOT_PAIRS[zeros[1]]);
            if shared_index(a, b).is_some() {
                Ok(VoronoiType::V4)
            } else {
                Ok(VoronoiType::V3)
            }
        }
        3 => {
            // Three zeros all meeting in one index would force that vector
            // to have zero length.
            let pairs: Vec<_> = zeros.iter().map(|&s| SLOT_PAIRS[s]).collect();
            for i in 0..4 {
                if pairs.iter().all(|p| p.0 == i || p.1 == i) {
                    return Err(Error::DegenerateLattice { zeros: 3 });
                }
            }
            Ok(VoronoiType::V5)
        }
        n => Err(Error::DegenerateLattice { zeros: n }),
    }
}

/// Voronoi type from the zero pattern of a snapped, obtuse coform.
pub fn classify(cf: &CoForm) -> Result<VoronoiType> {
    classify_slots(&cf.slots())
}

/// Entrywise square root of an obtuse coform.
pub fn root_form(cf: &CoForm) -> Result<RootForm> {
    let slots = cf.slots();
    for (s, p) in slots.iter().enumerate() {
        if *p < 0.0 {
            return Err(Error::NotObtuse {
                slot: SLOT_NAMES[s],
                value: *p,
                tol: 0.0,
            });
        }
    }
    Ok(RootForm::from_slots(slots.map(f64::sqrt)))
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

/// The eight arrangements of a 2x2 block `(a, b, c, d)` under the dihedral
/// group of the square (column swap, simultaneous diagonal swap, and the
/// main-diagonal exchange contributed by the second superbase of the type).
pub(crate) const D4_BLOCK: [[usize; 4]; 8] = [
    [0, 1, 2, 3],
    [1, 0, 3, 2],
    [3, 2, 1, 0],
    [2, 3, 0, 1],
    [3, 1, 2, 0],
    [2, 0, 3, 1],
    [0, 2, 1, 3],
    [1, 3, 0, 2],
];

fn sorted<const N: usize>(mut xs: [f64; N]) -> [f64; N] {
    xs.sort_by(f64::total_cmp);
    xs
}

/// Canonical representative of a root form for the given Voronoi type.
/// Errors when the zero pattern of `rf` does not match the type.
pub fn canonicalize(rf: &RootForm, vtype: VoronoiType) -> Result<RootInvariant> {
    let slots = rf.slots();
    if slots.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err(Error::InvalidInvariant(
            "root products must be finite and non-negative".into(),
        ));
    }
    let pattern = classify_slots(&slots)?;
    if pattern != vtype {
        return Err(Error::TypePatternMismatch {
            expected: vtype.as_str(),
        });
    }
    let zeros = zero_slots(&slots);
    Ok(match vtype {
        VoronoiType::V5 => {
            let mut nz = [0.0; 3];
            for (o, v) in nz.iter_mut().zip(slots.iter().filter(|r| **r != 0.0)) {
                *o = *v;
            }
            RootInvariant::V5(sorted(nz))
        }
        VoronoiType::V4 => {
            let (a, b) = (SLOT_PAIRS[zeros[0]], SLOT_PAIRS[zeros[1]]);
            let m = shared_index(a, b).expect("V4 zeros share an index");
            let axis_slot = (0..6)
                .find(|&s| {
                    let p = SLOT_PAIRS[s];
                    (p.0 == m || p.1 == m) && !zeros.contains(&s)
                })
                .expect("one non-zero pair contains the shared index");
            let mut triple = [0.0; 3];
            let mut n = 0;
            for (s, &v) in slots.iter().enumerate() {
                if s != axis_slot && !zeros.contains(&s) {
                    triple[n] = v;
                    n += 1;
                }
            }
            RootInvariant::V4 {
                triple: sorted(triple),
                axis: slots[axis_slot],
            }
        }
        VoronoiType::V3 => {
            let mut nz = [0.0; 4];
            for (o, v) in nz.iter_mut().zip(slots.iter().filter(|r| **r != 0.0)) {
                *o = *v;
            }
            RootInvariant::V3(sorted(nz))
        }
        VoronoiType::V2 => {
            let zero = zeros[0];
            let fixed = slots[SLOT_COMPLEMENT[zero]];
            // Move the zero into the p23 slot, then read the 2x2 block.
            let sigma = IndexPermutation::all()
                .into_iter()
                .find(|s| s.slot_table()[zero] == 0)
                .expect("some permutation moves any slot to p23");
            let moved = apply_index_permutation(&CoForm::from_slots(slots), &sigma).slots();
            debug_assert_eq!(moved[0], 0.0);
            let block = [moved[1], moved[2], moved[4], moved[5]];
            let mut best = block;
            for arr in &D4_BLOCK[1..] {
                let cand = [block[arr[0]], block[arr[1]], block[arr[2]], block[arr[3]]];
                if lex_less(&cand, &best) {
                    best = cand;
                }
            }
            RootInvariant::V2 { fixed, block: best }
        }
        VoronoiType::V1 => {
            let mut best = slots;
            for sigma in IndexPermutation::all() {
                let cand = apply_index_permutation(&CoForm::from_slots(slots), &sigma).slots();
                if lex_less(&cand, &best) {
                    best = cand;
                }
            }
            RootInvariant::V1(best)
        }
    })
}

/// Full pipeline: reduce, snap, classify, take roots, canonicalize.
pub fn root_invariant_with(
    basis: &Basis3,
    rel_tol: f64,
    max_iters: usize,
) -> Result<RootInvariant> {
    let (sb, _) = reduce_to_obtuse(basis, max_iters)?;
    let cf = snap_zeros(&sb.conorms(), rel_tol)?;
    let vtype = classify(&cf)?;
    let rf = root_form(&cf)?;
    canonicalize(&rf, vtype)
}

/// [`root_invariant_with`] at the default tolerance and iteration cap.
pub fn root_invariant(basis: &Basis3) -> Result<RootInvariant> {
    root_invariant_with(basis, DEFAULT_REL_TOL, DEFAULT_MAX_ITERS)
}

/// Lattices are isometric exactly when their root invariants coincide.
/// Near-degenerate inputs that snap to different Voronoi types compare
/// as not isometric.
pub fn isometric(b1: &Basis3, b2: &Basis3, rel_tol: f64) -> Result<bool> {
    let r1 = root_invariant_with(b1, rel_tol, DEFAULT_MAX_ITERS)?;
    let r2 = root_invariant_with(b2, rel_tol, DEFAULT_MAX_ITERS)?;
    Ok(r1.approx_eq(&r2, rel_tol))
}

/// Similarity test: returns the scale factor `s` with `RI(b2) = s * RI(b1)`
/// when one exists.
pub fn similar(b1: &Basis3, b2: &Basis3, rel_tol: f64) -> Result<Option<f64>> {
    let r1 = root_invariant_with(b1, rel_tol, DEFAULT_MAX_ITERS)?;
    let r2 = root_invariant_with(b2, rel_tol, DEFAULT_MAX_ITERS)?;
    if r1.vtype() != r2.vtype() {
        return Ok(None);
    }
    let s = r2.max_entry() / r1.max_entry();
    if !s.is_finite() || s <= 0.0 {
        return Ok(None);
    }
    Ok(if r1.scaled(s).approx_eq(&r2, rel_tol) {
        Some(s)
    } else {
        None
    })
}

/// Outcome of a perturbation battery against the root-product bound
/// `|sqrt(-u_i . u_j) - sqrt(-v_i . v_j)| <= sqrt(2 l delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuityReport {
    pub trials: usize,
    /// Trials whose perturbed superbase stopped being obtuse.
    pub skipped: usize,
    pub max_change: f64,
    /// Largest observed |change| / bound ratio; at most 1 when the bound holds.
    pub max_ratio: f64,
    pub violations: usize,
}

/// Perturb each superbase vector by at most `delta` and compare every root
/// product against its continuity bound. Deterministic per seed.
pub fn continuity_check(
    basis: &Basis3,
    delta: f64,
    trials: usize,
    seed: u64,
) -> Result<ContinuityReport> {
    let (sb, _) = reduce_to_obtuse(basis, DEFAULT_MAX_ITERS)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ContinuityReport {
        trials,
        skipped: 0,
        max_change: 0.0,
        max_ratio: 0.0,
        violations: 0,
    };
    let ball = |rng: &mut ChaCha8Rng, radius: f64| loop {
        let v = Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if v.norm_sq() <= 1.0 {
            return v.scale(radius);
        }
    };
    for _ in 0..trials {
        // Moving v1..v3 by delta/3 each moves v0 by at most delta, so every
        // vector of the re-closed superbase moves by at most delta.
        let u1 = sb.v1 + ball(&mut rng, delta / 3.0);
        let u2 = sb.v2 + ball(&mut rng, delta / 3.0);
        let u3 = sb.v3 + ball(&mut rng, delta / 3.0);
        let perturbed = Superbase::from_parts(u1, u2, u3);
        if !perturbed.conorms().is_obtuse(0.0) {
            report.skipped += 1;
            continue;
        }
        let l = sb
            .vectors()
            .iter()
            .chain(perturbed.vectors().iter())
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        let bound = (2.0 * l * delta).sqrt() + 1e-9;
        for &(i, j) in SLOT_PAIRS.iter() {
            let before = sb.conorm(i, j).max(0.0).sqrt();
            let after = perturbed.conorm(i, j).max(0.0).sqrt();
            let change = (after - before).abs();
            report.max_change = report.max_change.max(change);
            report.max_ratio = report.max_ratio.max(change / bound);
            if change > bound {
                report.violations += 1;
            }
        }
    }
    Ok(report)
}
