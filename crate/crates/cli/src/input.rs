//! Lattice input parsing.
//!
//! Three accepted shapes, auto-detected:
//! * a whitespace-separated 3x3 matrix (nine reals, rows are basis vectors),
//! * a single cell-parameter line `a b c alpha beta gamma` (six reals,
//!   angles in degrees),
//! * a CSV batch with one lattice per row (nine or six comma-separated
//!   reals per row).
//!
//! `#` starts a comment anywhere on a line.

use std::path::Path;

use rootform::linalg::{basis_from_cell, Basis3, CellParams};

pub enum LatticeInput {
    Single(Basis3),
    Batch(Vec<Basis3>),
}

fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n")
}

fn parse_numbers(tokens: &[&str]) -> Result<Vec<f64>, String> {
    tokens
        .iter()
        .map(|t| t.parse::<f64>().map_err(|_| format!("not a number: {t:?}")))
        .collect()
}

fn basis_from_numbers(nums: &[f64]) -> Result<Basis3, String> {
    match nums.len() {
        9 => Ok(Basis3::from_rows([
            [nums[0], nums[1], nums[2]],
            [nums[3], nums[4], nums[5]],
            [nums[6], nums[7], nums[8]],
        ])),
        6 => {
            let p = CellParams::new(nums[0], nums[1], nums[2], nums[3], nums[4], nums[5])
                .map_err(|e| e.to_string())?;
            basis_from_cell(&p).map_err(|e| e.to_string())
        }
        n => Err(format!(
            "expected 9 numbers (basis rows) or 6 (cell parameters), got {n}"
        )),
    }
}

pub fn parse_lattice_file(path: &Path) -> Result<LatticeInput, String> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let text = strip_comments(&raw);

    if text.contains(',') {
        let mut batch = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .collect();
            let nums = parse_numbers(&tokens).map_err(|e| format!("row {}: {e}", lineno + 1))?;
            let basis =
                basis_from_numbers(&nums).map_err(|e| format!("row {}: {e}", lineno + 1))?;
            batch.push(basis);
        }
        if batch.is_empty() {
            return Err("empty CSV batch".into());
        }
        return Ok(LatticeInput::Batch(batch));
    }

    let tokens: Vec<&str> = text.split_whitespace().collect();
    let nums = parse_numbers(&tokens)?;
    Ok(LatticeInput::Single(basis_from_numbers(&nums)?))
}

/// Like [`parse_lattice_file`] but rejecting batches.
pub fn parse_single_lattice(path: &Path) -> Result<Basis3, String> {
    match parse_lattice_file(path)? {
        LatticeInput::Single(b) => Ok(b),
        LatticeInput::Batch(_) => Err(format!(
            "{}: CSV batches are only accepted by `invariant`",
            path.display()
        )),
    }
}
