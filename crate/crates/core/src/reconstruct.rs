//! Rebuild an explicit obtuse superbase from a root invariant.
//!
//! The invariant is lifted back to a coform by filling the type's template
//! slots and squaring; the coform determines the Gram matrix of the
//! superbase, which is realized in a fixed frame: `v0` along the positive
//! x-axis, `v1` in the closed upper xy-half-plane, `v2` with non-negative
//! z. The two mirror lifts of `v2` are isometric, so the sign convention
//! costs nothing. `v3 = -v0 - v1 - v2` is verified against its expected
//! conorms rather than solved for.

use crate::error::{Error, Result};
use crate::invariant::{root_invariant, RootInvariant};
use crate::linalg::Vec3;
use crate::superbase::{vonorms_from_conorms, CoForm, Superbase};

/// Fill the Voronoi-type template with the invariant's entries and square.
pub fn coform_from_invariant(ri: &RootInvariant) -> Result<CoForm> {
    let values = ri.values();
    if values.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidInvariant(
            "all root products must be finite and non-negative".into(),
        ));
    }
    let roots: [f64; 6] = match ri {
        RootInvariant::V5([a, b, c]) => [0.0, 0.0, 0.0, *a, *b, *c],
        RootInvariant::V4 { triple, axis } => [0.0, 0.0, triple[0], triple[1], triple[2], *axis],
        RootInvariant::V3([x, y, z, w]) => [0.0, *x, *y, 0.0, *z, *w],
        RootInvariant::V2 { fixed, block } => [0.0, block[0], block[1], *fixed, block[2], block[3]],
        RootInvariant::V1(slots) => *slots,
    };
    Ok(CoForm::from_slots(roots.map(|r| r * r)))
}

/// Realize a coform as a superbase in the fixed frame. Errors when the Gram
/// matrix is not positive definite (the coform belongs to no lattice).
pub fn superbase_from_coform(cf: &CoForm) -> Result<Superbase> {
    let scale = vonorms_from_conorms(cf).max();
    if scale <= 0.0 || !scale.is_finite() {
        return Err(Error::NotRealizable);
    }
    let tol = 1e-12 * scale;

    // Positive definiteness of the Gram matrix of (v1, v2, v3) via the
    // leading principal minors.
    let g11 = cf.p01 + cf.p12 + cf.p13;
    let g22 = cf.p02 + cf.p12 + cf.p23;
    let g33 = cf.p03 + cf.p13 + cf.p23;
    let (g12, g13, g23) = (-cf.p12, -cf.p13, -cf.p23);
    let m1 = g11;
    let m2 = g11 * g22 - g12 * g12;
    let m3 = g11 * (g22 * g33 - g23 * g23) - g12 * (g12 * g33 - g23 * g13)
        + g13 * (g12 * g23 - g22 * g13);
    if m1 <= tol || m2 <= tol * scale || m3 <= tol * scale * scale {
        return Err(Error::NotRealizable);
    }

    let sq0 = cf.p01 + cf.p02 + cf.p03;
    let sq1 = g11;
    let sq2 = g22;
    if sq0 <= tol {
        return Err(Error::NotRealizable);
    }
    let n0 = sq0.sqrt();
    let v0 = Vec3::new(n0, 0.0, 0.0);

    // v0 . v1 = -p01 fixes the x-component of v1; the length fixes y >= 0.
    let x1 = -cf.p01 / n0;
    let y1_sq = sq1 - x1 * x1;
    if y1_sq <= tol {
        return Err(Error::NotRealizable);
    }
    let y1 = y1_sq.sqrt();
    let v1 = Vec3::new(x1, y1, 0.0);

    // Two scalar products and the length pin v2 up to the mirror in the
    // xy-plane; take z >= 0.
    let x2 = -cf.p02 / n0;
    let y2 = (-cf.p12 - x1 * x2) / y1;
    let z2_sq = sq2 - x2 * x2 - y2 * y2;
    if z2_sq < -tol {
        return Err(Error::NotRealizable);
    }
    let v2 = Vec3::new(x2, y2, z2_sq.max(0.0).sqrt());

    let v3 = -(v0 + v1 + v2);
    let sb = Superbase::from_raw(v0, v1, v2, v3);

    // v3 was not solved for; verify its conorms close the coform.
    let got = sb.conorms();
    let check_tol = 1e-9 * scale;
    for (a, b) in got.slots().iter().zip(cf.slots()) {
        if (a - b).abs() > check_tol {
            return Err(Error::NotRealizable);
        }
    }
    Ok(sb)
}

/// Invariant -> superbase -> invariant; the composition is the identity on
/// realizable invariants.
pub fn round_trip(ri: &RootInvariant) -> Result<RootInvariant> {
    let cf = coform_from_invariant(ri)?;
    let sb = superbase_from_coform(&cf)?;
    root_invariant(&sb.basis())
}
