//! Fixed-shape 3D vector and matrix arithmetic, unit-cell parameter
//! conversion, and seeded transform generators used by the test batteries.
//!
//! Angles cross the API boundary in degrees (crystallographic convention)
//! and are converted to radians exactly once, here.

use std::ops::{Add, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Absolute tolerance on normalized quantities at this layer.
pub const ABS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(self, s: f64) -> Vec3 {
        Vec3::new(s * self.x, s * self.y, s * self.z)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Row-major 3x3 real matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub fn identity() -> Mat3 {
        Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn transpose(&self) -> Mat3 {
        let m = &self.0;
        Mat3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn mul_vec(&self, v: Vec3) -> Vec3 {
        let m = &self.0;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }

    pub fn mul_mat(&self, o: &Mat3) -> Mat3 {
        let mut r = [[0.0; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Mat3(r)
    }

    /// Inverse via the adjugate; `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Mat3> {
        let d = self.det();
        if d == 0.0 {
            return None;
        }
        let m = &self.0;
        let c = |r1: usize, c1: usize, r2: usize, c2: usize| {
            m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]
        };
        let adj = [
            [c(1, 1, 2, 2), -c(0, 1, 2, 2), c(0, 1, 1, 2)],
            [-c(1, 0, 2, 2), c(0, 0, 2, 2), -c(0, 0, 1, 2)],
            [c(1, 0, 2, 1), -c(0, 0, 2, 1), c(0, 0, 1, 1)],
        ];
        let mut r = [[0.0; 3]; 3];
        for (row, adj_row) in r.iter_mut().zip(&adj) {
            for (cell, a) in row.iter_mut().zip(adj_row) {
                *cell = a / d;
            }
        }
        Some(Mat3(r))
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, &x| acc.max(x.abs()))
    }

    pub fn sub(&self, o: &Mat3) -> Mat3 {
        let mut r = [[0.0; 3]; 3];
        for (row, (a, b)) in r.iter_mut().zip(self.0.iter().zip(&o.0)) {
            for (cell, (x, y)) in row.iter_mut().zip(a.iter().zip(b)) {
                *cell = x - y;
            }
        }
        Mat3(r)
    }

    fn frobenius(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Three generating vectors of a lattice. Plain data; degeneracy is
/// checked where an operation actually requires it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Basis3 {
    pub v1: Vec3,
    pub v2: Vec3,
    pub v3: Vec3,
}

impl Basis3 {
    pub fn new(v1: Vec3, v2: Vec3, v3: Vec3) -> Basis3 {
        Basis3 { v1, v2, v3 }
    }

    pub fn from_rows(rows: [[f64; 3]; 3]) -> Basis3 {
        Basis3::new(
            Vec3::new(rows[0][0], rows[0][1], rows[0][2]),
            Vec3::new(rows[1][0], rows[1][1], rows[1][2]),
            Vec3::new(rows[2][0], rows[2][1], rows[2][2]),
        )
    }

    /// Signed volume of the unit cell (determinant with columns `v1,v2,v3`).
    pub fn det(&self) -> f64 {
        self.v1.dot(self.v2.cross(self.v3))
    }

    /// Degenerate when the volume vanishes relative to the vector lengths.
    pub fn is_degenerate(&self) -> bool {
        let scale = self.v1.norm() * self.v2.norm() * self.v3.norm();
        !self.det().is_finite() || scale == 0.0 || self.det().abs() <= ABS_TOL * scale
    }

    pub fn vectors(&self) -> [Vec3; 3] {
        [self.v1, self.v2, self.v3]
    }

    /// Gram matrix of the three vectors.
    pub fn gram(&self) -> Mat3 {
        let v = self.vectors();
        let mut g = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = v[i].dot(v[j]);
            }
        }
        Mat3(g)
    }

    pub fn scaled(&self, s: f64) -> Basis3 {
        Basis3::new(self.v1.scale(s), self.v2.scale(s), self.v3.scale(s))
    }

    /// Apply a point transform `q` to each basis vector.
    pub fn transformed(&self, q: &Mat3) -> Basis3 {
        Basis3::new(q.mul_vec(self.v1), q.mul_vec(self.v2), q.mul_vec(self.v3))
    }

    /// Change of basis: row `r` of `m` holds the integer coefficients of the
    /// new r-th vector over the old basis. Unimodular `m` preserves the lattice.
    pub fn recombined(&self, m: &IntMat3) -> Basis3 {
        let v = self.vectors();
        let mut out = [Vec3::ZERO; 3];
        for (r, row) in m.iter().enumerate() {
            let mut acc = Vec3::ZERO;
            for (c, &coeff) in row.iter().enumerate() {
                acc = acc + v[c].scale(coeff as f64);
            }
            out[r] = acc;
        }
        Basis3::new(out[0], out[1], out[2])
    }

    /// The lattice vector with integer coefficients `c` over this basis.
    pub fn lattice_vector(&self, c: [i64; 3]) -> Vec3 {
        self.v1.scale(c[0] as f64) + self.v2.scale(c[1] as f64) + self.v3.scale(c[2] as f64)
    }

    /// Lengths and pairwise angles (degrees) of the cell spanned by this basis.
    pub fn cell_params(&self) -> CellParams {
        let angle = |u: Vec3, v: Vec3| {
            (u.dot(v) / (u.norm() * v.norm()))
                .clamp(-1.0, 1.0)
                .acos()
                .to_degrees()
        };
        CellParams {
            a: self.v1.norm(),
            b: self.v2.norm(),
            c: self.v3.norm(),
            alpha: angle(self.v2, self.v3),
            beta: angle(self.v1, self.v3),
            gamma: angle(self.v1, self.v2),
        }
    }

    /// Frobenius condition number estimate; `f64::INFINITY` when singular.
    pub fn cond(&self) -> f64 {
        let m = Mat3([
            [self.v1.x, self.v2.x, self.v3.x],
            [self.v1.y, self.v2.y, self.v3.y],
            [self.v1.z, self.v2.z, self.v3.z],
        ]);
        match m.inverse() {
            Some(inv) => m.frobenius() * inv.frobenius(),
            None => f64::INFINITY,
        }
    }
}

/// Cell edge lengths and angles, angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl CellParams {
    /// Validates positivity of the lengths, each angle in (0, 180), and the
    /// triple conditions making the parallelepiped realizable (every angle
    /// smaller than the sum of the other two, total below 360).
    pub fn new(a: f64, b: f64, c: f64, alpha: f64, beta: f64, gamma: f64) -> Result<CellParams> {
        let p = CellParams {
            a,
            b,
            c,
            alpha,
            beta,
            gamma,
        };
        let all = [a, b, c, alpha, beta, gamma];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::Realizability("non-finite parameter".into()));
        }
        if a <= 0.0 || b <= 0.0 || c <= 0.0 {
            return Err(Error::Realizability(format!(
                "lengths must be positive, got ({a}, {b}, {c})"
            )));
        }
        for (name, ang) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if ang <= 0.0 || ang >= 180.0 {
                return Err(Error::Realizability(format!(
                    "{name} = {ang} out of the open interval (0, 180)"
                )));
            }
        }
        if alpha + beta + gamma >= 360.0 {
            return Err(Error::Realizability(format!(
                "angle sum {} is not below 360",
                alpha + beta + gamma
            )));
        }
        for (name, ang, others) in [
            ("alpha", alpha, beta + gamma),
            ("beta", beta, alpha + gamma),
            ("gamma", gamma, alpha + beta),
        ] {
            if ang >= others {
                return Err(Error::Realizability(format!(
                    "{name} = {ang} is not below the sum of the other two angles ({others})"
                )));
            }
        }
        Ok(p)
    }
}

/// Standard embedding of cell parameters: `v1` along the x-axis, `v2` in the
/// xy-plane at angle gamma to `v1`, `v3` completing the cell, so the basis
/// matrix is triangular.
pub fn basis_from_cell(p: &CellParams) -> Result<Basis3> {
    CellParams::new(p.a, p.b, p.c, p.alpha, p.beta, p.gamma)?;
    let ca = p.alpha.to_radians().cos();
    let cb = p.beta.to_radians().cos();
    let (sg, cg) = p.gamma.to_radians().sin_cos();

    let v1 = Vec3::new(p.a, 0.0, 0.0);
    let v2 = Vec3::new(p.b * cg, p.b * sg, 0.0);
    let cx = p.c * cb;
    let cy = p.c * (ca - cb * cg) / sg;
    let cz_sq = p.c * p.c - cx * cx - cy * cy;
    if cz_sq <= 0.0 {
        return Err(Error::Realizability(format!(
            "angle triple ({}, {}, {}) gives a non-positive-definite Gram matrix",
            p.alpha, p.beta, p.gamma
        )));
    }
    let v3 = Vec3::new(cx, cy, cz_sq.sqrt());
    Ok(Basis3::new(v1, v2, v3))
}

/// Integer 3x3 matrix; rows are coefficient vectors.
pub type IntMat3 = [[i64; 3]; 3];

pub const INT_IDENTITY: IntMat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

pub fn int_det(m: &IntMat3) -> i64 {
    let m: [[i128; 3]; 3] = [
        [m[0][0] as i128, m[0][1] as i128, m[0][2] as i128],
        [m[1][0] as i128, m[1][1] as i128, m[1][2] as i128],
        [m[2][0] as i128, m[2][1] as i128, m[2][2] as i128],
    ];
    let d = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    d as i64
}

/// Random integer matrix with determinant +-1, built from elementary row
/// operations that keep every entry within `entry_bound`. Deterministic for
/// a fixed seed.
pub fn random_unimodular(seed: u64, entry_bound: i64) -> IntMat3 {
    assert!(entry_bound >= 1, "entry_bound must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = INT_IDENTITY;
    let mut applied = 0;
    let mut attempts = 0;
    while applied < 24 && attempts < 400 {
        attempts += 1;
        match rng.random_range(0..4u8) {
            0 => {
                let r = rng.random_range(0..3);
                let s = (r + rng.random_range(1..3)) % 3;
                m.swap(r, s);
                applied += 1;
            }
            1 => {
                let r = rng.random_range(0..3);
                for e in m[r].iter_mut() {
                    *e = -*e;
                }
                applied += 1;
            }
            _ => {
                let r = rng.random_range(0..3);
                let s = (r + rng.random_range(1..3)) % 3;
                let k: i64 = if rng.random_bool(0.5) { 1 } else { -1 };
                let cand = [
                    m[r][0] + k * m[s][0],
                    m[r][1] + k * m[s][1],
                    m[r][2] + k * m[s][2],
                ];
                if cand.iter().all(|e| e.abs() <= entry_bound) {
                    m[r] = cand;
                    applied += 1;
                }
            }
        }
    }
    debug_assert_eq!(int_det(&m).abs(), 1);
    m
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; u1 in (0, 1].
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Random orthogonal 3x3 matrix (rotation from a random unit quaternion,
/// composed with a mirror half the time, so both determinant signs occur).
/// Deterministic for a fixed seed; `Q^T Q = I` to machine precision.
pub fn random_orthogonal(seed: u64) -> Mat3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = loop {
        let q = [
            gaussian(&mut rng),
            gaussian(&mut rng),
            gaussian(&mut rng),
            gaussian(&mut rng),
        ];
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            break [q[0] / n, q[1] / n, q[2] / n, q[3] / n];
        }
    };
    let [w, x, y, z] = q;
    let mut m = [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ];
    if rng.random_bool(0.5) {
        for row in m.iter_mut() {
            row[2] = -row[2];
        }
    }
    Mat3(m)
}

/// Random well-conditioned basis: entries uniform in [-1, 1], resampled
/// until the cell volume and condition number are moderate. Deterministic
/// per seed.
pub fn random_basis(seed: u64) -> Basis3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut e = [0.0; 9];
        for x in e.iter_mut() {
            *x = rng.random_range(-1.0..1.0);
        }
        let b = Basis3::from_rows([[e[0], e[1], e[2]], [e[3], e[4], e[5]], [e[6], e[7], e[8]]]);
        if b.det().abs() >= 0.1 && b.cond() <= 1e3 {
            return b;
        }
    }
}
