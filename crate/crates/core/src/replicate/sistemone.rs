//! The three-equation system in `(Y, Z)` whose solutions make the quartic in
//! `(c₁, c₂)` vanish identically, and its classification.

use rayon::prelude::*;
use serde::Serialize;

use super::conj;
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SolutionClass {
    /// `Y ∈ F_q` or `Z ∈ F_q`.
    C1,
    /// `Y ∉ F_{q²}` and `Z = ρY^{q+1}`, `ρ ∈ F_q^*`.
    C2,
    /// `Z ∉ F_{q²}` and `Y = ρ/Z^{q²+q}`, `ρ ∈ F_q^*`.
    C3,
    None,
}

/// `(f₁, f₂, f₃)` at `y_i = Y^{q^i}`, `z_i = Z^{q^i}`.
pub fn sistemone_values(f: &Field, y: Elem, z: Elem) -> [Elem; 3] {
    let ys: [Elem; 4] = std::array::from_fn(|i| f.frob_pow(y, i));
    let zs: [Elem; 4] = std::array::from_fn(|i| f.frob_pow(z, i));
    let sum = |terms: &[(i8, &[usize], &[usize])]| {
        terms.iter().fold(Elem::ZERO, |acc, &(sign, yi, zi)| {
            let m = yi
                .iter()
                .map(|&i| ys[i])
                .chain(zi.iter().map(|&i| zs[i]))
                .fold(Elem::ONE, |a, b| f.mul(a, b));
            if sign < 0 {
                f.sub(acc, m)
            } else {
                f.add(acc, m)
            }
        })
    };
    let f1 = sum(&[
        (1, &[0], &[1]),
        (-1, &[0], &[2]),
        (1, &[1], &[2]),
        (-1, &[1], &[3]),
        (-1, &[2], &[0]),
        (1, &[2], &[3]),
        (1, &[3], &[0]),
        (-1, &[3], &[1]),
    ]);
    let f2 = sum(&[
        (1, &[0, 1], &[1, 2]),
        (-1, &[0, 1], &[2, 3]),
        (-1, &[0, 2], &[0, 2]),
        (1, &[0, 2], &[1, 3]),
        (1, &[0, 3], &[0, 1]),
        (-1, &[0, 3], &[1, 2]),
        (-1, &[1, 2], &[0, 3]),
        (1, &[1, 2], &[2, 3]),
        (1, &[1, 3], &[0, 2]),
        (-1, &[1, 3], &[1, 3]),
        (-1, &[2, 3], &[0, 1]),
        (1, &[2, 3], &[0, 3]),
    ]);
    let f3 = sum(&[
        (1, &[0, 1, 2], &[0, 2, 3]),
        (-1, &[0, 1, 2], &[1, 2, 3]),
        (-1, &[0, 1, 3], &[0, 1, 2]),
        (1, &[0, 1, 3], &[1, 2, 3]),
        (1, &[0, 2, 3], &[0, 1, 2]),
        (-1, &[0, 2, 3], &[0, 1, 3]),
        (1, &[1, 2, 3], &[0, 1, 3]),
        (-1, &[1, 2, 3], &[0, 2, 3]),
    ]);
    [f1, f2, f3]
}

pub fn sistemone_satisfied(f: &Field, y: Elem, z: Elem) -> bool {
    sistemone_values(f, y, z).iter().all(|v| v.is_zero())
}

fn in_fq_star(f: &Field, a: Elem) -> bool {
    !a.is_zero() && f.in_subfield(a)
}

/// Every class whose defining condition holds (at most one for a valid theorem).
pub fn class_labels(f: &Field, y: Elem, z: Elem) -> Vec<SolutionClass> {
    let mut out = Vec::new();
    if f.in_subfield(y) || f.in_subfield(z) {
        out.push(SolutionClass::C1);
    }
    if !f.in_intermediate(y, 2) && in_fq_star(f, f.div(z, conj(f, y, &[0, 1])).expect("y nonzero"))
    {
        out.push(SolutionClass::C2);
    }
    if !f.in_intermediate(z, 2) && in_fq_star(f, f.mul(y, conj(f, z, &[1, 2]))) {
        out.push(SolutionClass::C3);
    }
    out
}

pub fn sistemone_classify(f: &Field, y: Elem, z: Elem) -> Result<SolutionClass> {
    if y.is_zero() || z.is_zero() {
        return Err(Error::ZeroInput);
    }
    let labels = class_labels(f, y, z);
    debug_assert!(labels.len() <= 1, "classes overlap at ({y:?}, {z:?})");
    Ok(labels.first().copied().unwrap_or(SolutionClass::None))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExhaustiveReport {
    pub q: u32,
    pub pairs: u64,
    pub solutions: u64,
    pub per_class: [u64; 3],
    /// Pairs where "solves the system" and "has a class" disagree.
    pub mismatches: Vec<(i64, i64)>,
    /// Pairs carrying more than one class label.
    pub overlaps: Vec<(i64, i64)>,
}

impl ExhaustiveReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.overlaps.is_empty()
    }
}

/// Compares the solution set with the classification on all nonzero pairs.
pub fn sistemone_exhaustive(f: &Field) -> ExhaustiveReport {
    let g = f.group_order();
    let partial: Vec<ExhaustiveReport> = (0..g)
        .into_par_iter()
        .map(|yl| {
            let y = f.eta_pow(yl as i64);
            let mut r = ExhaustiveReport {
                q: f.q(),
                pairs: 0,
                solutions: 0,
                per_class: [0; 3],
                mismatches: Vec::new(),
                overlaps: Vec::new(),
            };
            for z in f.nonzero_elements() {
                r.pairs += 1;
                let solves = sistemone_satisfied(f, y, z);
                let labels = class_labels(f, y, z);
                r.solutions += solves as u64;
                for l in &labels {
                    match l {
                        SolutionClass::C1 => r.per_class[0] += 1,
                        SolutionClass::C2 => r.per_class[1] += 1,
                        SolutionClass::C3 => r.per_class[2] += 1,
                        SolutionClass::None => {}
                    }
                }
                let key = (y.to_exponent(), z.to_exponent());
                if solves != !labels.is_empty() {
                    r.mismatches.push(key);
                }
                if labels.len() > 1 {
                    r.overlaps.push(key);
                }
            }
            r
        })
        .collect();
    let mut total = ExhaustiveReport {
        q: f.q(),
        pairs: 0,
        solutions: 0,
        per_class: [0; 3],
        mismatches: Vec::new(),
        overlaps: Vec::new(),
    };
    for r in partial {
        total.pairs += r.pairs;
        total.solutions += r.solutions;
        for k in 0..3 {
            total.per_class[k] += r.per_class[k];
        }
        total.mismatches.extend(r.mismatches);
        total.overlaps.extend(r.overlaps);
    }
    total
}
