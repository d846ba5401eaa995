//! Reduction of an arbitrary superbase to an obtuse one.
//!
//! One step acts on a pair of indices `(i, j)` with negative conorm
//! `p_ij = -eps < 0` and replaces
//!
//! ```text
//! u_i = -v_i,  u_j = v_j,  u_k = v_i + v_k,  u_l = v_i + v_l
//! ```
//!
//! which changes the conorms by the closed form in [`step_conorms`] and
//! strictly decreases the vonorm `v_ij^2` by `4 eps` while the other six
//! vonorms only trade places. Iterating from the most negative conorm
//! terminates for every nondegenerate basis; the cap only surfaces
//! pathological input instead of hanging.

use crate::error::{Error, Result};
use crate::linalg::{int_det, Basis3, IntMat3, Vec3};
use crate::superbase::{conorm_slot, CoForm, Superbase, SLOT_PAIRS};

/// Iteration cap; far above anything observed at moderate condition numbers
/// (worst case seen in the test batteries is below 20 steps).
pub const DEFAULT_MAX_ITERS: usize = 1000;

/// A conorm counts as negative only below `-NEG_REL_TOL * max vonorm`.
pub const NEG_REL_TOL: f64 = 1e-12;

/// One recorded reduction step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionStep {
    pub i: usize,
    pub j: usize,
    pub epsilon: f64,
}

/// Ordered record of the steps a reduction performed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

impl ReductionTrace {
    pub fn iterations(&self) -> usize {
        self.steps.len()
    }
}

/// Apply one reduction step at the index pair `(i, j)`.
pub fn reduction_step(sb: &Superbase, i: usize, j: usize) -> Result<Superbase> {
    if i == j {
        return Err(Error::SameIndex(i));
    }
    assert!(i < 4 && j < 4, "superbase indices run over 0..4");
    let mut rest = [0usize; 2];
    let mut n = 0;
    for m in 0..4 {
        if m != i && m != j {
            rest[n] = m;
            n += 1;
        }
    }
    let [k, l] = rest;
    let v = sb.vectors();
    let mut u = [Vec3::ZERO; 4];
    u[i] = -v[i];
    u[j] = v[j];
    u[k] = v[i] + v[k];
    u[l] = v[i] + v[l];
    // Re-close the superbase on (u1, u2, u3); exact math gives the same u0.
    Ok(Superbase::from_parts(u[1], u[2], u[3]))
}

/// Closed-form conorm update of one reduction step, with `eps = -p_ij`.
pub fn step_conorms(cf: &CoForm, i: usize, j: usize) -> CoForm {
    assert!(i != j && i < 4 && j < 4);
    let mut rest = [0usize; 2];
    let mut n = 0;
    for m in 0..4 {
        if m != i && m != j {
            rest[n] = m;
            n += 1;
        }
    }
    let [k, l] = rest;
    let p = cf.slots();
    let eps = -p[conorm_slot(i, j)];
    let mut q = [0.0; 6];
    q[conorm_slot(i, j)] = eps;
    q[conorm_slot(j, k)] = p[conorm_slot(j, k)] - eps;
    q[conorm_slot(j, l)] = p[conorm_slot(j, l)] - eps;
    q[conorm_slot(i, k)] = p[conorm_slot(i, l)] - eps;
    q[conorm_slot(i, l)] = p[conorm_slot(i, k)] - eps;
    q[conorm_slot(k, l)] = p[conorm_slot(k, l)] + eps;
    CoForm::from_slots(q)
}

/// Reduce a basis to an obtuse superbase, always stepping on the most
/// negative conorm (ties broken in slot order), and record the trace.
pub fn reduce_to_obtuse(basis: &Basis3, max_iters: usize) -> Result<(Superbase, ReductionTrace)> {
    assert!(max_iters >= 1);
    let mut sb = Superbase::from_basis(basis)?;
    let mut trace = ReductionTrace::default();
    for _ in 0..max_iters {
        let cf = sb.conorms();
        let threshold = NEG_REL_TOL * sb.vonorms().max();
        let (slot, value) = cf
            .slots()
            .into_iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("six slots");
        if value >= -threshold {
            // Lattice membership of the result: the reduced vectors must have
            // a unimodular integer coefficient matrix over the input basis.
            let coeffs = superbase_coefficients(&sb, basis)?;
            let m: IntMat3 = [coeffs[1], coeffs[2], coeffs[3]];
            if int_det(&m).abs() != 1 {
                return Err(Error::DegenerateBasis { det: basis.det() });
            }
            return Ok((sb, trace));
        }
        let (i, j) = SLOT_PAIRS[slot];
        let next = reduction_step(&sb, i, j)?;
        #[cfg(debug_assertions)]
        {
            let predicted = step_conorms(&cf, i, j);
            let actual = next.conorms();
            let scale = sb.vonorms().max();
            for (p, a) in predicted.slots().iter().zip(actual.slots()) {
                debug_assert!(
                    (p - a).abs() <= 1e-9 * scale,
                    "closed-form conorm update drifted from geometry: {p} vs {a}"
                );
            }
        }
        trace.steps.push(ReductionStep {
            i,
            j,
            epsilon: -value,
        });
        sb = next;
    }
    Err(Error::NonTermination { max_iters, trace })
}

/// Reduce with the default iteration cap.
pub fn reduce(basis: &Basis3) -> Result<(Superbase, ReductionTrace)> {
    reduce_to_obtuse(basis, DEFAULT_MAX_ITERS)
}

/// Integer coefficients of a vector over a basis, or an error when the
/// nearest integer combination does not reproduce it.
pub fn integer_coefficients(basis: &Basis3, v: Vec3) -> Result<[i64; 3]> {
    let m = crate::linalg::Mat3([
        [basis.v1.x, basis.v2.x, basis.v3.x],
        [basis.v1.y, basis.v2.y, basis.v3.y],
        [basis.v1.z, basis.v2.z, basis.v3.z],
    ]);
    let inv = m
        .inverse()
        .ok_or(Error::DegenerateBasis { det: basis.det() })?;
    let c = inv.mul_vec(v);
    let rounded = [c.x.round(), c.y.round(), c.z.round()];
    let rebuilt = basis.lattice_vector([rounded[0] as i64, rounded[1] as i64, rounded[2] as i64]);
    let scale = v
        .norm()
        .max(basis.v1.norm() + basis.v2.norm() + basis.v3.norm());
    if (rebuilt - v).norm() > 1e-6 * scale {
        return Err(Error::DegenerateBasis { det: basis.det() });
    }
    Ok([rounded[0] as i64, rounded[1] as i64, rounded[2] as i64])
}

/// Integer coefficients of all four superbase vectors over a basis.
pub fn superbase_coefficients(sb: &Superbase, basis: &Basis3) -> Result<[[i64; 3]; 4]> {
    Ok([
        integer_coefficients(basis, sb.v0)?,
        integer_coefficients(basis, sb.v1)?,
        integer_coefficients(basis, sb.v2)?,
        integer_coefficients(basis, sb.v3)?,
    ])
}
