//! Brute-force verification layer.
//!
//! Everything here recomputes, by exhaustive search over a bounded integer
//! coefficient window, structure that the rest of the crate derives
//! algebraically: Voronoi vectors as shortest representatives of the seven
//! nonzero 2Λ-classes, the complete list of obtuse superbases of a reduced
//! lattice, and the sorted distance vector to the seven Voronoi neighbours
//! (`DC7`), including the two-coform family whose members share that
//! vector without being isometric.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::linalg::{int_det, Basis3, IntMat3, Vec3};
use crate::reduction::reduce;
use crate::superbase::{CoForm, Superbase};

/// Default coefficient window half-width.
pub const DEFAULT_WINDOW: i64 = 3;

/// Hard cap for [`auto_window`] retries.
pub const MAX_WINDOW: i64 = 8;

/// One nonzero parity class `v + 2Λ` with its shortest members.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLambdaClass {
    /// Coefficient parities in `{0,1}^3 \ {0}`.
    pub representative: [i64; 3],
    pub min_norm_sq: f64,
    /// All coefficient triples attaining the class minimum (within 1e-9
    /// relative), closed under negation.
    pub shortest: Vec<[i64; 3]>,
    /// Exactly one `+-v` pair attains the minimum.
    pub strict: bool,
}

/// Sorted distances from the origin to its seven Voronoi neighbours.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DC7Vector(pub [f64; 7]);

impl DC7Vector {
    pub fn dist(&self, other: &DC7Vector) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Digital image `100 x1 + 10 x2 + x3` of a coefficient triple; injective
/// on sums of up to four partial-sum vectors.
pub fn digital_image(c: [i64; 3]) -> i64 {
    100 * c[0] + 10 * c[1] + c[2]
}

/// Retry a windowed search with bounds 3, 6, 8 until it stops reporting
/// [`Error::WindowTooSmall`].
pub fn auto_window<T>(mut f: impl FnMut(i64) -> Result<T>) -> Result<T> {
    let mut bound = DEFAULT_WINDOW;
    loop {
        match f(bound) {
            Err(Error::WindowTooSmall { .. }) if bound < MAX_WINDOW => {
                bound = (bound * 2).min(MAX_WINDOW);
            }
            other => return other,
        }
    }
}

fn parity_code(c: &[i64; 3]) -> usize {
    let p = |x: i64| (x.rem_euclid(2)) as usize;
    (p(c[0]) << 2) | (p(c[1]) << 1) | p(c[2])
}

/// Shortest vectors of the seven nonzero 2Λ-classes, by exhaustive search
/// over coefficients in `[-coeff_bound, coeff_bound]^3`. A minimizer on the
/// window boundary aborts with [`Error::WindowTooSmall`].
pub fn voronoi_vectors(basis: &Basis3, coeff_bound: i64) -> Result<Vec<TwoLambdaClass>> {
    assert!(coeff_bound >= 2, "coefficient window must be at least 2");
    if basis.is_degenerate() {
        return Err(Error::DegenerateBasis { det: basis.det() });
    }
    let b = coeff_bound;
    let mut min_norm = [f64::INFINITY; 8];
    for x in -b..=b {
        for y in -b..=b {
            for z in -b..=b {
                let c = [x, y, z];
                let code = parity_code(&c);
                if code == 0 {
                    continue;
                }
                let n = basis.lattice_vector(c).norm_sq();
                if n < min_norm[code] {
                    min_norm[code] = n;
                }
            }
        }
    }
    let mut classes: Vec<TwoLambdaClass> = (1..8i64)
        .map(|code| TwoLambdaClass {
            representative: [(code >> 2) & 1, (code >> 1) & 1, code & 1],
            min_norm_sq: min_norm[code as usize],
            shortest: Vec::new(),
            strict: false,
        })
        .collect();
    for x in -b..=b {
        for y in -b..=b {
            for z in -b..=b {
                let c = [x, y, z];
                let code = parity_code(&c);
                if code == 0 {
                    continue;
                }
                let n = basis.lattice_vector(c).norm_sq();
                if n <= min_norm[code] * (1.0 + 1e-9) {
                    classes[code - 1].shortest.push(c);
                }
            }
        }
    }
    for class in &mut classes {
        for c in &class.shortest {
            if c.iter().any(|x| x.abs() >= coeff_bound) {
                return Err(Error::WindowTooSmall { bound: coeff_bound });
            }
        }
        class.shortest.sort();
        class.strict = class.shortest.len() == 2;
    }
    Ok(classes)
}

/// Number of strict 2Λ-classes (pairs of Voronoi-domain faces). Reduces the
/// basis first, then searches with an auto-doubling window.
pub fn strict_count(basis: &Basis3) -> Result<usize> {
    let (sb, _) = reduce(basis)?;
    let reduced = sb.basis();
    let classes = auto_window(|bound| voronoi_vectors(&reduced, bound))?;
    Ok(classes.iter().filter(|c| c.strict).count())
}

/// All obtuse superbases of the lattice of a reduced (already obtuse)
/// basis, as unordered 4-sets of coefficient triples over that basis,
/// sorted for determinism.
pub fn enumerate_obtuse_superbases(basis: &Basis3, coeff_bound: i64) -> Result<Vec<[[i64; 3]; 4]>> {
    assert!(coeff_bound >= 2, "coefficient window must be at least 2");
    let sb = Superbase::from_basis(basis)?;
    let scale = sb.vonorms().max();
    let tol = 1e-12 * scale;
    if !sb.conorms().is_obtuse(1e-9 * scale) {
        let cf = sb.conorms();
        let (slot, value) = cf
            .slots()
            .into_iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("six slots");
        return Err(Error::NotObtuse {
            slot: crate::superbase::SLOT_NAMES[slot],
            value,
            tol: 1e-9 * scale,
        });
    }

    let b = coeff_bound;
    let mut coeffs: Vec<[i64; 3]> = Vec::new();
    for x in -b..=b {
        for y in -b..=b {
            for z in -b..=b {
                if (x, y, z) != (0, 0, 0) {
                    coeffs.push([x, y, z]);
                }
            }
        }
    }
    let points: Vec<Vec3> = coeffs.iter().map(|&c| basis.lattice_vector(c)).collect();
    let n = coeffs.len();

    let mut found: BTreeSet<[[i64; 3]; 4]> = BTreeSet::new();
    for ia in 0..n {
        let pa = points[ia];
        for ib in (ia + 1)..n {
            let pb = points[ib];
            if pa.dot(pb) > tol {
                continue;
            }
            for ic in (ib + 1)..n {
                let pc = points[ic];
                if pa.dot(pc) > tol || pb.dot(pc) > tol {
                    continue;
                }
                let (ca, cb, cc) = (coeffs[ia], coeffs[ib], coeffs[ic]);
                let cd = [
                    -(ca[0] + cb[0] + cc[0]),
                    -(ca[1] + cb[1] + cc[1]),
                    -(ca[2] + cb[2] + cc[2]),
                ];
                if cd == [0, 0, 0] || cd.iter().any(|x| x.abs() > b) {
                    continue;
                }
                let pd = -(pa + pb + pc);
                if pa.dot(pd) > tol || pb.dot(pd) > tol || pc.dot(pd) > tol {
                    continue;
                }
                let m: IntMat3 = [ca, cb, cc];
                if int_det(&m).abs() != 1 {
                    continue;
                }
                if [ca, cb, cc, cd]
                    .iter()
                    .flatten()
                    .any(|x| x.abs() >= coeff_bound)
                {
                    return Err(Error::WindowTooSmall { bound: coeff_bound });
                }
                let mut quad = [ca, cb, cc, cd];
                quad.sort();
                found.insert(quad);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Materialize an enumerated quadruple; the last three entries act as the
/// basis and the first one closes the superbase as their negated sum.
pub fn quad_superbase(basis: &Basis3, quad: &[[i64; 3]; 4]) -> Superbase {
    Superbase::from_parts(
        basis.lattice_vector(quad[1]),
        basis.lattice_vector(quad[2]),
        basis.lattice_vector(quad[3]),
    )
}

/// Sorted squared lengths of the four vectors of a quadruple.
pub fn quad_length_signature(basis: &Basis3, quad: &[[i64; 3]; 4]) -> [f64; 4] {
    let mut sig = quad.map(|c| basis.lattice_vector(c).norm_sq());
    sig.sort_by(f64::total_cmp);
    sig
}

/// Sorted square roots of the seven vonorms of the reduced superbase: the
/// distances from the origin to its seven Voronoi neighbours.
pub fn dc7(basis: &Basis3) -> Result<DC7Vector> {
    let (sb, _) = reduce(basis)?;
    let mut d = sb.vonorms().slots().map(f64::sqrt);
    d.sort_by(f64::total_cmp);
    Ok(DC7Vector(d))
}

/// The same seven distances found independently as the square roots of the
/// 2Λ-class minima.
pub fn dc7_via_classes(basis: &Basis3) -> Result<DC7Vector> {
    let (sb, _) = reduce(basis)?;
    let reduced = sb.basis();
    let classes = auto_window(|bound| voronoi_vectors(&reduced, bound))?;
    let mut d = [0.0; 7];
    for (slot, class) in d.iter_mut().zip(&classes) {
        *slot = class.min_norm_sq.sqrt();
    }
    d.sort_by(f64::total_cmp);
    Ok(DC7Vector(d))
}

/// Base coforms of the seven-neighbour counterexample family.
pub const DC7_PAIR_A: CoForm = CoForm {
    p23: 5.0,
    p13: 3.0,
    p12: 4.0,
    p01: 1.0,
    p02: 1.0,
    p03: 4.0,
};
pub const DC7_PAIR_B: CoForm = CoForm {
    p23: 6.0,
    p13: 3.0,
    p12: 3.0,
    p01: 2.0,
    p02: 1.0,
    p03: 3.0,
};

/// Shift both base coforms conorm-wise by `q >= 0` (slot order). A member
/// pair shares its `DC7` vector exactly when `q23 + q01 = q12 + q03` (the
/// swapped pair vonorms pick up equal shifts only then), which leaves an
/// infinite five-parameter family of equal-`DC7` pairs; away from a thin
/// locus those pairs stay non-isometric. When `q23 + q01 != q12 + q03`
/// the coform column sums differ, so the pair is certainly non-isometric,
/// but the `DC7` vectors then differ too.
pub fn dc7_family(q: &[f64; 6]) -> Result<(CoForm, CoForm)> {
    for &x in q {
        if x < 0.0 || x.is_nan() {
            return Err(Error::NegativeShift(x));
        }
    }
    let shift = |cf: &CoForm| {
        let s = cf.slots();
        CoForm::from_slots([
            s[0] + q[0],
            s[1] + q[1],
            s[2] + q[2],
            s[3] + q[3],
            s[4] + q[4],
            s[5] + q[5],
        ])
    };
    Ok((shift(&DC7_PAIR_A), shift(&DC7_PAIR_B)))
}
