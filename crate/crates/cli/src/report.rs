//! Output formatting: 12-significant-digit text and the JSON schemas.

use serde::{Deserialize, Serialize};

use rootform::invariant::RootInvariant;
use rootform::linalg::Vec3;
use rootform::superbase::{CoForm, Superbase, VoForm};

/// Format with 12 significant digits, trimming trailing zeros.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..=12).contains(&exp) {
        return format!("{:.11e}", x);
    }
    let prec = (11 - exp).max(0) as usize;
    let s = format!("{:.*}", prec, x);
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    if trimmed == "-0" {
        "0".to_string()
    } else {
        trimmed.to_string()
    }
}

pub fn fmt_vec(v: Vec3) -> String {
    format!("({}, {}, {})", sig12(v.x), sig12(v.y), sig12(v.z))
}

pub fn fmt_slots(slots: &[f64]) -> String {
    slots
        .iter()
        .map(|x| sig12(*x))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn fmt_coform(cf: &CoForm) -> String {
    let s = cf.slots();
    format!(
        "({} {} {} / {} {} {})",
        sig12(s[0]),
        sig12(s[1]),
        sig12(s[2]),
        sig12(s[3]),
        sig12(s[4]),
        sig12(s[5])
    )
}

pub fn fmt_voform(vf: &VoForm) -> String {
    let s = vf.slots();
    format!(
        "({} {} {} {} / {} {} {})",
        sig12(s[0]),
        sig12(s[1]),
        sig12(s[2]),
        sig12(s[3]),
        sig12(s[4]),
        sig12(s[5]),
        sig12(s[6])
    )
}

#[derive(Serialize, Deserialize)]
pub struct InvariantJson {
    pub vtype: String,
    pub values: Vec<f64>,
    pub tol: f64,
}

impl InvariantJson {
    pub fn new(ri: &RootInvariant, tol: f64) -> Self {
        InvariantJson {
            vtype: ri.vtype().to_string(),
            values: ri.values(),
            tol,
        }
    }
}

#[derive(Serialize)]
pub struct StepJson {
    pub i: usize,
    pub j: usize,
    pub epsilon: f64,
}

#[derive(Serialize)]
pub struct ReduceJson {
    pub superbase: [[f64; 3]; 4],
    pub coform: [f64; 6],
    pub vonorms: [f64; 7],
    pub steps: Vec<StepJson>,
}

#[derive(Serialize)]
pub struct CompareJson {
    pub equivalent: bool,
    pub relation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    pub lhs: InvariantJson,
    pub rhs: InvariantJson,
}

#[derive(Serialize)]
pub struct ReconstructJson {
    pub superbase: [[f64; 3]; 4],
    pub coform: [f64; 6],
    pub round_trip: InvariantJson,
    pub round_trip_matches: bool,
}

#[derive(Serialize)]
pub struct OracleJson {
    pub check: String,
    pub vtype: String,
    pub found: serde_json::Value,
    pub expected: serde_json::Value,
    pub pass: bool,
}

pub fn superbase_rows(sb: &Superbase) -> [[f64; 3]; 4] {
    sb.vectors().map(|v| [v.x, v.y, v.z])
}

pub fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("serialization cannot fail")
    );
}
