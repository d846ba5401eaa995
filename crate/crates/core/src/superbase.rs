//! Superbases and their conorm/vonorm algebra.
//!
//! A superbase extends a basis `v1, v2, v3` by `v0 = -v1 - v2 - v3`. Its six
//! conorms `p_ij = -v_i . v_j` form the coform, laid out as the 2x3 matrix
//!
//! ```text
//!     p23  p13  p12
//!     p01  p02  p03
//! ```
//!
//! where complementary index pairs share a column. The seven vonorms are the
//! squared lengths of the partial sums `v_S`; conorms and vonorms determine
//! each other linearly. Relabelling the four superbase vectors permutes the
//! coform slots; those 24 permutations are the ambiguity every invariant in
//! this crate has to quotient out.

use crate::error::{Error, Result};
use crate::linalg::{Basis3, Vec3};

/// Unordered index pairs behind the six coform slots, in slot order.
pub const SLOT_PAIRS: [(usize, usize); 6] = [(2, 3), (1, 3), (1, 2), (0, 1), (0, 2), (0, 3)];

pub const SLOT_NAMES: [&str; 6] = ["p23", "p13", "p12", "p01", "p02", "p03"];

/// Slot of the complementary index pair (same column, other row).
pub(crate) const SLOT_COMPLEMENT: [usize; 6] = [3, 4, 5, 0, 1, 2];

/// Slot holding the conorm of the unordered pair `{i, j}`.
pub(crate) fn conorm_slot(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    match (a, b) {
        (2, 3) => 0,
        (1, 3) => 1,
        (1, 2) => 2,
        (0, 1) => 3,
        (0, 2) => 4,
        (0, 3) => 5,
        _ => panic!("invalid index pair ({i}, {j})"),
    }
}

/// Four vectors summing to zero, any three of which form a basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superbase {
    pub v0: Vec3,
    pub v1: Vec3,
    pub v2: Vec3,
    pub v3: Vec3,
}

impl Superbase {
    /// Extend a basis with `v0 = -(v1 + v2 + v3)`.
    pub fn from_basis(basis: &Basis3) -> Result<Superbase> {
        if basis.is_degenerate() {
            return Err(Error::DegenerateBasis { det: basis.det() });
        }
        Ok(Superbase::from_parts(basis.v1, basis.v2, basis.v3))
    }

    pub(crate) fn from_parts(v1: Vec3, v2: Vec3, v3: Vec3) -> Superbase {
        Superbase {
            v0: -(v1 + v2 + v3),
            v1,
            v2,
            v3,
        }
    }

    /// Construct from all four vectors; the caller guarantees they sum to
    /// zero up to rounding.
    pub(crate) fn from_raw(v0: Vec3, v1: Vec3, v2: Vec3, v3: Vec3) -> Superbase {
        let sum = v0 + v1 + v2 + v3;
        debug_assert!(
            sum.norm()
                <= 1e-9
                    * [v0, v1, v2, v3]
                        .iter()
                        .map(|v| v.norm())
                        .fold(0.0, f64::max),
            "superbase vectors must sum to zero"
        );
        Superbase { v0, v1, v2, v3 }
    }

    pub fn vectors(&self) -> [Vec3; 4] {
        [self.v0, self.v1, self.v2, self.v3]
    }

    pub fn vector(&self, i: usize) -> Vec3 {
        self.vectors()[i]
    }

    /// The basis `(v1, v2, v3)`.
    pub fn basis(&self) -> Basis3 {
        Basis3::new(self.v1, self.v2, self.v3)
    }

    pub fn conorm(&self, i: usize, j: usize) -> f64 {
        -self.vector(i).dot(self.vector(j))
    }

    /// The six conorms `p_ij = -v_i . v_j`.
    pub fn conorms(&self) -> CoForm {
        let mut slots = [0.0; 6];
        for (s, &(i, j)) in SLOT_PAIRS.iter().enumerate() {
            slots[s] = self.conorm(i, j);
        }
        CoForm::from_slots(slots)
    }

    /// The seven vonorms: squared lengths of `v_i` and of `v_0 + v_i`.
    pub fn vonorms(&self) -> VoForm {
        VoForm {
            sq0: self.v0.norm_sq(),
            sq1: self.v1.norm_sq(),
            sq2: self.v2.norm_sq(),
            sq3: self.v3.norm_sq(),
            sq01: (self.v0 + self.v1).norm_sq(),
            sq02: (self.v0 + self.v2).norm_sq(),
            sq03: (self.v0 + self.v3).norm_sq(),
        }
    }

    /// Partial sum `v_S` for a subset given as a sign-free index list.
    pub fn partial_sum(&self, indices: &[usize]) -> Vec3 {
        indices
            .iter()
            .fold(Vec3::ZERO, |acc, &i| acc + self.vector(i))
    }
}

/// Coform: the six conorms in the fixed 2x3 layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoForm {
    pub p23: f64,
    pub p13: f64,
    pub p12: f64,
    pub p01: f64,
    pub p02: f64,
    pub p03: f64,
}

impl CoForm {
    pub fn from_slots(s: [f64; 6]) -> CoForm {
        CoForm {
            p23: s[0],
            p13: s[1],
            p12: s[2],
            p01: s[3],
            p02: s[4],
            p03: s[5],
        }
    }

    pub fn slots(&self) -> [f64; 6] {
        [self.p23, self.p13, self.p12, self.p01, self.p02, self.p03]
    }

    pub fn min_entry(&self) -> f64 {
        self.slots().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Obtuse up to an absolute slack on each entry.
    pub fn is_obtuse(&self, slack: f64) -> bool {
        self.slots().into_iter().all(|p| p >= -slack)
    }
}

impl std::fmt::Display for CoForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({} {} {} / {} {} {})",
            self.p23, self.p13, self.p12, self.p01, self.p02, self.p03
        )
    }
}

/// Voform: the seven vonorms. `sq0` is stored rather than recomputed; the
/// sum identity `sq0+sq1+sq2+sq3 = sq01+sq02+sq03` is an invariant checked
/// by [`conorms_from_vonorms`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoForm {
    pub sq0: f64,
    pub sq1: f64,
    pub sq2: f64,
    pub sq3: f64,
    pub sq01: f64,
    pub sq02: f64,
    pub sq03: f64,
}

impl VoForm {
    pub fn slots(&self) -> [f64; 7] {
        [
            self.sq0, self.sq1, self.sq2, self.sq3, self.sq01, self.sq02, self.sq03,
        ]
    }

    pub fn max(&self) -> f64 {
        self.slots().into_iter().fold(0.0, f64::max)
    }

    /// Defect of the vonorm sum identity (zero in exact arithmetic).
    pub fn sum_defect(&self) -> f64 {
        self.sq0 + self.sq1 + self.sq2 + self.sq3 - self.sq01 - self.sq02 - self.sq03
    }

    /// Vonorm of the partial sum `v_i + v_j` (equivalently `v_k + v_l`).
    pub fn pair_vonorm(&self, i: usize, j: usize) -> f64 {
        match conorm_slot(i, j) {
            0 | 3 => self.sq01,
            1 | 4 => self.sq02,
            _ => self.sq03,
        }
    }

    /// Vonorm of a single superbase vector.
    pub fn single_vonorm(&self, i: usize) -> f64 {
        [self.sq0, self.sq1, self.sq2, self.sq3][i]
    }
}

/// Conorms from vonorms via `p_ij = (v_i^2 + v_j^2 - v_ij^2) / 2`; fails if
/// the vonorm sum identity is violated beyond `1e-9` relative.
pub fn conorms_from_vonorms(vf: &VoForm) -> Result<CoForm> {
    let scale = vf.max();
    let defect = vf.sum_defect();
    if defect.abs() > 1e-9 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::InconsistentVoForm { defect, scale });
    }
    let single = [vf.sq0, vf.sq1, vf.sq2, vf.sq3];
    let mut slots = [0.0; 6];
    for (s, &(i, j)) in SLOT_PAIRS.iter().enumerate() {
        slots[s] = 0.5 * (single[i] + single[j] - vf.pair_vonorm(i, j));
    }
    Ok(CoForm::from_slots(slots))
}

/// Vonorms from conorms via the sums `v_i^2 = sum of the three conorms at i`
/// and `v_ij^2 = sum of the four conorms crossing the split {i,j} | {k,l}`.
pub fn vonorms_from_conorms(cf: &CoForm) -> VoForm {
    VoForm {
        sq0: cf.p01 + cf.p02 + cf.p03,
        sq1: cf.p01 + cf.p12 + cf.p13,
        sq2: cf.p02 + cf.p12 + cf.p23,
        sq3: cf.p03 + cf.p13 + cf.p23,
        sq01: cf.p02 + cf.p03 + cf.p12 + cf.p13,
        sq02: cf.p01 + cf.p03 + cf.p12 + cf.p23,
        sq03: cf.p01 + cf.p02 + cf.p13 + cf.p23,
    }
}

/// A relabelling of the four superbase indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexPermutation {
    map: [usize; 4],
}

impl IndexPermutation {
    pub fn identity() -> IndexPermutation {
        IndexPermutation { map: [0, 1, 2, 3] }
    }

    pub fn transposition(a: usize, b: usize) -> IndexPermutation {
        let mut map = [0, 1, 2, 3];
        map.swap(a, b);
        IndexPermutation { map }
    }

    pub fn new(map: [usize; 4]) -> Option<IndexPermutation> {
        let mut seen = [false; 4];
        for &i in &map {
            if i > 3 || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(IndexPermutation { map })
    }

    pub fn apply_index(&self, i: usize) -> usize {
        self.map[i]
    }

    /// Composition `self after other`: `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &IndexPermutation) -> IndexPermutation {
        let mut map = [0; 4];
        for (i, m) in map.iter_mut().enumerate() {
            *m = self.map[other.map[i]];
        }
        IndexPermutation { map }
    }

    /// All 24 index permutations in lexicographic order of their maps.
    pub fn all() -> Vec<IndexPermutation> {
        let mut out = Vec::with_capacity(24);
        let mut items = [0usize, 1, 2, 3];
        permute(&mut items, 0, &mut out);
        out.sort_by_key(|p| p.map);
        out
    }

    /// Where each coform slot's value moves: slot `s` lands in
    /// `slot_table()[s]`, i.e. the value of `p_ij` becomes the value of
    /// `p_{sigma(i) sigma(j)}`.
    pub fn slot_table(&self) -> [usize; 6] {
        let mut t = [0; 6];
        for (s, &(i, j)) in SLOT_PAIRS.iter().enumerate() {
            t[s] = conorm_slot(self.map[i], self.map[j]);
        }
        t
    }
}

fn permute(items: &mut [usize; 4], k: usize, out: &mut Vec<IndexPermutation>) {
    if k == 4 {
        out.push(IndexPermutation { map: *items });
        return;
    }
    for i in k..4 {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Move each conorm `p_ij` into the slot `p_{sigma(i) sigma(j)}`.
pub fn apply_index_permutation(cf: &CoForm, sigma: &IndexPermutation) -> CoForm {
    let slots = cf.slots();
    let table = sigma.slot_table();
    let mut out = [0.0; 6];
    for (s, &t) in table.iter().enumerate() {
        out[t] = slots[s];
    }
    CoForm::from_slots(out)
}

/// Images of a coform under all 24 index permutations (duplicates retained).
pub fn orbit24(cf: &CoForm) -> Vec<CoForm> {
    IndexPermutation::all()
        .iter()
        .map(|sigma| apply_index_permutation(cf, sigma))
        .collect()
}

/// True when two coforms agree slotwise within `tol` on some element of the
/// 24-orbit.
pub fn in_same_orbit(a: &CoForm, b: &CoForm, tol: f64) -> bool {
    orbit24(a).iter().any(|img| {
        img.slots()
            .iter()
            .zip(b.slots())
            .all(|(x, y)| (x - y).abs() <= tol)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_basis;

    fn distinct_images(cf: &CoForm) -> usize {
        let mut images: Vec<[u64; 6]> = orbit24(cf)
            .iter()
            .map(|c| c.slots().map(f64::to_bits))
            .collect();
        images.sort();
        images.dedup();
        images.len()
    }

    #[test]
    fn superbase_closes_to_zero() {
        let b = Basis3::from_rows([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let sb = Superbase::from_basis(&b).unwrap();
        assert_eq!(sb.v0, Vec3::new(-1.0, -1.0, -1.0));

        let b = Basis3::from_rows([[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 3.0]]);
        let sb = Superbase::from_basis(&b).unwrap();
        assert_eq!(sb.v0, Vec3::new(-1.0, -2.0, -3.0));

        for seed in 0..20 {
            let b = random_basis(seed);
            let sb = Superbase::from_basis(&b).unwrap();
            let sum = sb.v0 + sb.v1 + sb.v2 + sb.v3;
            let scale = sb.vectors().iter().map(|v| v.norm()).fold(0.0, f64::max);
            assert!(sum.norm() <= 1e-15 * scale.max(1.0) * 10.0);
        }
    }

    #[test]
    fn degenerate_basis_is_rejected() {
        let b = Basis3::from_rows([[1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(matches!(
            Superbase::from_basis(&b),
            Err(Error::DegenerateBasis { .. })
        ));
    }

    #[test]
    fn cuboid_conorms_match_the_odd_template() {
        let b = Basis3::from_rows([[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 3.0]]);
        let cf = Superbase::from_basis(&b).unwrap().conorms();
        assert_eq!(cf.slots(), [0.0, 0.0, 0.0, 1.0, 4.0, 9.0]);

        let unit = Basis3::from_rows([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let cf = Superbase::from_basis(&unit).unwrap().conorms();
        assert_eq!(cf.slots(), [0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn even_cuboid_superbase_conorms() {
        // An even superbase of the (1,2,3) cuboid.
        let b = Basis3::from_rows([[1.0, 0.0, 0.0], [-1.0, 2.0, 0.0], [0.0, 0.0, 3.0]]);
        let cf = Superbase::from_basis(&b).unwrap().conorms();
        assert_eq!(cf.slots(), [0.0, 0.0, 1.0, 0.0, 4.0, 9.0]);
    }

    #[test]
    fn unit_cube_vonorms() {
        let b = Basis3::from_rows([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let vf = Superbase::from_basis(&b).unwrap().vonorms();
        assert_eq!(vf.slots(), [3.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0]);
    }

    #[test]
    fn vonorm_sum_identity_on_random_superbases() {
        for seed in 0..50 {
            let sb = Superbase::from_basis(&random_basis(seed)).unwrap();
            let vf = sb.vonorms();
            assert!(vf.sum_defect().abs() <= 1e-9 * vf.max());
        }
    }

    #[test]
    fn conorm_vonorm_round_trip() {
        let cf = CoForm::from_slots([5.0, 3.0, 4.0, 1.0, 1.0, 4.0]);
        let vf = vonorms_from_conorms(&cf);
        assert_eq!(vf.slots(), [6.0, 8.0, 10.0, 12.0, 12.0, 14.0, 10.0]);
        let back = conorms_from_vonorms(&vf).unwrap();
        assert_eq!(back.slots(), cf.slots());

        // The second lattice of the seven-neighbour counterexample pair.
        let cf = CoForm::from_slots([6.0, 3.0, 3.0, 2.0, 1.0, 3.0]);
        let vf = vonorms_from_conorms(&cf);
        assert_eq!(vf.slots(), [6.0, 8.0, 10.0, 12.0, 10.0, 14.0, 12.0]);
        assert_eq!(conorms_from_vonorms(&vf).unwrap().slots(), cf.slots());

        // Cuboid coform recovers the Table-style vonorms: v0 = (-1,-2,-3),
        // so v0+v1 = (0,-2,-3) has vonorm 13 and v0+v3 = (-1,-2,0) has 5.
        let cf = CoForm::from_slots([0.0, 0.0, 0.0, 1.0, 4.0, 9.0]);
        assert_eq!(
            vonorms_from_conorms(&cf).slots(),
            [14.0, 1.0, 4.0, 9.0, 13.0, 10.0, 5.0]
        );

        let zero = CoForm::from_slots([0.0; 6]);
        assert_eq!(vonorms_from_conorms(&zero).slots(), [0.0; 7]);
    }

    #[test]
    fn unit_cube_vonorms_invert_to_conorms() {
        let vf = VoForm {
            sq0: 3.0,
            sq1: 1.0,
            sq2: 1.0,
            sq3: 1.0,
            sq01: 2.0,
            sq02: 2.0,
            sq03: 2.0,
        };
        let cf = conorms_from_vonorms(&vf).unwrap();
        assert_eq!(cf.slots(), [0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn inconsistent_vonorms_are_rejected() {
        let vf = VoForm {
            sq0: 3.0,
            sq1: 1.0,
            sq2: 1.0,
            sq3: 1.0,
            sq01: 2.5,
            sq02: 2.0,
            sq03: 2.0,
        };
        assert!(matches!(
            conorms_from_vonorms(&vf),
            Err(Error::InconsistentVoForm { .. })
        ));
    }

    #[test]
    fn conorms_consistent_with_vonorm_conversion() {
        for seed in 0..50 {
            let sb = Superbase::from_basis(&random_basis(seed)).unwrap();
            let cf = sb.conorms();
            let via_vf = conorms_from_vonorms(&sb.vonorms()).unwrap();
            let scale = sb.vonorms().max();
            for (a, b) in cf.slots().iter().zip(via_vf.slots()) {
                assert!((a - b).abs() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn transposition_12_swaps_columns() {
        let cf = CoForm::from_slots([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let out = apply_index_permutation(&cf, &IndexPermutation::transposition(1, 2));
        assert_eq!(out.slots(), [2.0, 1.0, 3.0, 5.0, 4.0, 6.0]);
    }

    #[test]
    fn transposition_01_swaps_columns_2_3_diagonally() {
        let cf = CoForm::from_slots([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let out = apply_index_permutation(&cf, &IndexPermutation::transposition(0, 1));
        assert_eq!(out.slots(), [1.0, 6.0, 5.0, 4.0, 3.0, 2.0]);
    }

    #[test]
    fn double_transposition_flips_two_columns_vertically() {
        let cf = CoForm::from_slots([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let sigma =
            IndexPermutation::transposition(0, 1).compose(&IndexPermutation::transposition(2, 3));
        let out = apply_index_permutation(&cf, &sigma);
        assert_eq!(out.slots(), [1.0, 5.0, 6.0, 4.0, 2.0, 3.0]);
    }

    #[test]
    fn identity_fixes_everything() {
        let cf = CoForm::from_slots([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(
            apply_index_permutation(&cf, &IndexPermutation::identity()).slots(),
            cf.slots()
        );
    }

    #[test]
    fn slot_action_is_a_group_action() {
        let cf = CoForm::from_slots([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let all = IndexPermutation::all();
        assert_eq!(all.len(), 24);
        for sigma in &all {
            for tau in &all {
                let stepwise = apply_index_permutation(&apply_index_permutation(&cf, sigma), tau);
                let combined = apply_index_permutation(&cf, &tau.compose(sigma));
                assert_eq!(stepwise.slots(), combined.slots());
            }
        }
    }

    #[test]
    fn orbit_sizes() {
        // Six distinct entries: the action is free.
        assert_eq!(
            distinct_images(&CoForm::from_slots([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])),
            24
        );
        // Full symmetry collapses the orbit.
        assert_eq!(distinct_images(&CoForm::from_slots([2.0; 6])), 1);
        // A cuboid coform: column permutations and vertical flips all move
        // zeros around, so the action is still free on this pattern.
        assert_eq!(
            distinct_images(&CoForm::from_slots([0.0, 0.0, 0.0, 1.0, 2.0, 3.0])),
            24
        );
    }

    #[test]
    fn basis_relabelling_stays_in_the_orbit() {
        for seed in 0..10 {
            let b = random_basis(seed);
            let sb = Superbase::from_basis(&b).unwrap();
            let cf = sb.conorms();
            // Reorder the basis vectors.
            let perm = Basis3::new(b.v2, b.v3, b.v1);
            let cf_perm = Superbase::from_basis(&perm).unwrap().conorms();
            assert!(in_same_orbit(&cf, &cf_perm, 1e-9 * sb.vonorms().max()));
            // Swap one basis vector for the fourth superbase vector.
            let swapped = Basis3::new(sb.v0, b.v2, b.v3);
            let cf_swap = Superbase::from_basis(&swapped).unwrap().conorms();
            assert!(in_same_orbit(&cf, &cf_swap, 1e-9 * sb.vonorms().max()));
        }
    }
}
