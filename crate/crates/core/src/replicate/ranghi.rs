//! The 10×10 matrix of the linear system for eight functions `F_{λ_i}` together
//! with `α₁Tr(β₁x)` and `α₂Tr(β₂x)`, and its rank in each solution class.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::bigmat::BigMatrix;
use super::sistemone::{sistemone_classify, SolutionClass};
use super::{conj, n_d, ratio, require_quartic};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linpoly::Algebra;

/// Eight distinct nonzero λ's need `q ≥ 9`.
pub const MIN_Q: u32 = 9;

fn check_lambdas(f: &Field, lambdas: &[Elem]) -> Result<()> {
    for (i, &l) in lambdas.iter().enumerate() {
        if l.is_zero() || !f.in_subfield(l) {
            return Err(Error::BadLambda(format!("λ_{} must lie in F_q^*", i + 1)));
        }
        if lambdas[..i].contains(&l) {
            return Err(Error::BadLambda(format!(
                "λ_{} repeats an earlier value",
                i + 1
            )));
        }
    }
    Ok(())
}

/// The λ-column: `(1, λ, D^{q²+q+1}/N^{q+1}, …, D^{q+1}/N)`.
fn lambda_column(f: &Field, y: Elem, z: Elem, lambda: Elem) -> Result<[Elem; 10]> {
    let (n, d) = n_d(f, y, z, lambda);
    if n.is_zero() || d.is_zero() {
        return Err(Error::DegenerateDenominator);
    }
    Ok([
        Elem::ONE,
        lambda,
        ratio(f, d, &[2, 1, 0], n, &[1, 0])?,
        ratio(f, d, &[3, 2, 1], n, &[2, 1])?,
        ratio(f, d, &[3, 2, 0], n, &[3, 2])?,
        ratio(f, d, &[3, 1, 0], n, &[3, 0])?,
        ratio(f, d, &[2, 1], n, &[1])?,
        ratio(f, d, &[3, 2], n, &[2])?,
        ratio(f, d, &[3, 0], n, &[3])?,
        ratio(f, d, &[1, 0], n, &[0])?,
    ])
}

/// Columns `μ₉` and `μ₁₀`.
fn tail_columns(f: &Field, y: Elem, z: Elem) -> ([Elem; 10], [Elem; 10]) {
    let yz = |a: usize, b: usize| f.mul(f.frob_pow(y, a), f.frob_pow(z, b));
    (
        [
            Elem::ZERO,
            Elem::ONE,
            yz(0, 0),
            yz(1, 1),
            yz(2, 2),
            yz(3, 3),
            yz(1, 0),
            yz(2, 1),
            yz(3, 2),
            yz(0, 3),
        ],
        [
            Elem::ONE,
            Elem::ZERO,
            Elem::ONE,
            Elem::ONE,
            Elem::ONE,
            Elem::ONE,
            Elem::ONE,
            Elem::ONE,
            Elem::ONE,
            Elem::ONE,
        ],
    )
}

/// Columns `μ₁ … μ_m` for the given λ's followed by `μ₉, μ₁₀`; `m = 8` gives the
/// full matrix. Only the row count and column layout depend on `m`.
fn build_columns(f: &Field, y: Elem, z: Elem, lambdas: &[Elem]) -> Result<BigMatrix> {
    require_quartic(f)?;
    check_lambdas(f, lambdas)?;
    let cols: Vec<[Elem; 10]> = lambdas
        .iter()
        .map(|&l| lambda_column(f, y, z, l))
        .collect::<Result<_>>()?;
    let (c9, c10) = tail_columns(f, y, z);
    let mut m = BigMatrix::zeros(10, lambdas.len() + 2);
    for r in 0..10 {
        for (c, col) in cols.iter().enumerate() {
            m.set(r, c, col[r]);
        }
        m.set(r, lambdas.len(), c9[r]);
        m.set(r, lambdas.len() + 1, c10[r]);
    }
    Ok(m)
}

pub fn build_m10(f: &Field, y: Elem, z: Elem, lambdas: &[Elem; 8]) -> Result<BigMatrix> {
    if f.q() < MIN_Q {
        return Err(Error::NeedsBiggerField(format!(
            "eight distinct nonzero λ need q ≥ {MIN_Q}, got q={}",
            f.q()
        )));
    }
    build_columns(f, y, z, lambdas)
}

/// First 6 rows and last 6 columns: columns `λ₅..λ₈, μ₉, μ₁₀`.
pub fn s6(f: &Field, y: Elem, z: Elem, lambdas: &[Elem; 4]) -> Result<BigMatrix> {
    Ok(build_columns(f, y, z, lambdas)?.submatrix(0, 6, 0, 6))
}

/// First 7 rows and last 7 columns: columns `λ₄..λ₈, μ₉, μ₁₀`.
pub fn s7(f: &Field, y: Elem, z: Elem, lambdas: &[Elem; 5]) -> Result<BigMatrix> {
    Ok(build_columns(f, y, z, lambdas)?.submatrix(0, 7, 0, 7))
}

/// Closed form of the cleared `det(S₆)` for classes C2 and C3, as usually
/// written. In class C3 it misses a factor `Z^{-6(1+q+q²+q³)}`.
pub fn det_s6_closed_as_printed(f: &Field, y: Elem, z: Elem, lambdas: &[Elem; 4]) -> Result<Elem> {
    let class = sistemone_classify(f, y, z)?;
    let (rho, w, extra) = match class {
        SolutionClass::C2 => {
            let rho = f.div(z, conj(f, y, &[0, 1]))?;
            (rho, y, f.pow(f.norm(y), 4))
        }
        SolutionClass::C3 => (f.mul(y, conj(f, z, &[1, 2])), z, Elem::ONE),
        other => {
            return Err(Error::WrongClass(format!(
                "det(S6) closed form needs C2 or C3, got {other:?}"
            )))
        }
    };
    let mut v = f.mul(f.pow(rho, 10), extra);
    for &l in lambdas {
        v = f.mul(v, l);
    }
    for i in 0..4 {
        for j in i + 1..4 {
            v = f.mul(v, f.sub(lambdas[i], lambdas[j]));
        }
    }
    for i in 0..4 {
        v = f.mul(v, f.pow(f.sub(f.frob_pow(w, i), f.frob_pow(w, i + 1)), 2));
    }
    for i in 0..2 {
        v = f.mul(v, f.pow(f.sub(f.frob_pow(w, i), f.frob_pow(w, i + 2)), 3));
    }
    Ok(v)
}

/// Closed form of the cleared `det(S₆)`, with the `Z^{-6(1+q+q²+q³)}` factor in class C3.
pub fn det_s6_closed(f: &Field, y: Elem, z: Elem, lambdas: &[Elem; 4]) -> Result<Elem> {
    let v = det_s6_closed_as_printed(f, y, z, lambdas)?;
    match sistemone_classify(f, y, z)? {
        SolutionClass::C3 => f.div(v, f.pow(f.norm(z), 6)),
        _ => Ok(v),
    }
}

/// `det(S₆) · Π_i N(λ_i)^{1+q+q²+q³}`: each λ-column scaled by the norm of
/// `N(λ_i)`, which clears every denominator in it.
pub fn det_s6_cleared(f: &Field, y: Elem, z: Elem, lambdas: &[Elem; 4]) -> Result<Elem> {
    let det = s6(f, y, z, lambdas)?.det(f)?;
    Ok(lambdas
        .iter()
        .fold(det, |acc, &l| f.mul(acc, f.norm(n_d(f, y, z, l).0))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DetS6 {
    pub closed_form: Elem,
    pub elimination: Elem,
    pub as_printed: Elem,
}

/// The closed form and the cleared determinant by elimination, computed independently.
pub fn det_s6(f: &Field, y: Elem, z: Elem, lambdas: &[Elem; 4]) -> Result<DetS6> {
    Ok(DetS6 {
        closed_form: det_s6_closed(f, y, z, lambdas)?,
        elimination: det_s6_cleared(f, y, z, lambdas)?,
        as_printed: det_s6_closed_as_printed(f, y, z, lambdas)?,
    })
}

/// True when `det(S₇) = 0`; only meaningful in classes C2/C3.
pub fn det_s7_zero(f: &Field, y: Elem, z: Elem, lambdas: &[Elem; 5]) -> Result<bool> {
    match sistemone_classify(f, y, z)? {
        SolutionClass::C2 | SolutionClass::C3 => Ok(s7(f, y, z, lambdas)?.det(f)?.is_zero()),
        other => Err(Error::WrongClass(format!(
            "det(S7) check needs C2 or C3, got {other:?}"
        ))),
    }
}

/// `dim_{F_q}(ker M ∩ F_q^{10})` and `10 − rank(M)`; they agree when the kernel
/// has a basis over `F_q`.
pub fn rational_kernel(alg: &Algebra, m: &BigMatrix) -> (usize, usize) {
    let cols = m.shape().1;
    (cols - m.fq_rank(alg), cols - m.rank(alg.field()))
}

/// A random solution pair of the requested class with `Y, Z ≠ 0`.
pub fn random_instance<R: Rng + ?Sized>(
    f: &Field,
    class: SolutionClass,
    rng: &mut R,
) -> Result<(Elem, Elem)> {
    let rho = f.random_fq_nonzero(rng);
    loop {
        let a = f.random_nonzero(rng);
        let b = f.random_nonzero(rng);
        let pair = match class {
            SolutionClass::C1 => {
                if rng.gen_bool(0.5) {
                    (rho, a)
                } else {
                    (a, rho)
                }
            }
            SolutionClass::C2 => {
                if f.in_intermediate(a, 2) {
                    continue;
                }
                (a, f.mul(rho, conj(f, a, &[0, 1])))
            }
            SolutionClass::C3 => {
                if f.in_intermediate(b, 2) {
                    continue;
                }
                (f.div(rho, conj(f, b, &[1, 2]))?, b)
            }
            SolutionClass::None => {
                return Err(Error::WrongClass(
                    "no random instance for class None".into(),
                ))
            }
        };
        return Ok(pair);
    }
}

/// `count` distinct λ's from `F_q^*` with `N(λ), D(λ) ≠ 0`.
pub fn random_lambdas<R: Rng + ?Sized>(
    f: &Field,
    y: Elem,
    z: Elem,
    count: usize,
    rng: &mut R,
) -> Option<Vec<Elem>> {
    let mut good: Vec<Elem> = f
        .fq_elements()
        .into_iter()
        .filter(|&l| {
            if l.is_zero() {
                return false;
            }
            let (n, d) = n_d(f, y, z, l);
            !n.is_zero() && !d.is_zero()
        })
        .collect();
    if good.len() < count {
        return None;
    }
    good.shuffle(rng);
    good.truncate(count);
    Some(good)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RanghiReport {
    pub q: u32,
    pub instances: [u64; 3],
    pub rank_failures: Vec<String>,
    pub s6_failures: Vec<String>,
    /// Instances in classes C2, C3 where the uncorrected closed form also matches.
    pub s6_printed_matches: [u64; 2],
    pub s7_failures: Vec<String>,
    pub kernel_failures: Vec<String>,
    pub skipped_degenerate: u64,
}

impl RanghiReport {
    pub fn passed(&self) -> bool {
        self.rank_failures.is_empty()
            && self.s6_failures.is_empty()
            && self.s7_failures.is_empty()
            && self.kernel_failures.is_empty()
    }
}

/// `per_class` random instances of each class: rank 2/6/6, the `det(S₆)` closed
/// form, `det(S₇) = 0`, and the rational kernel.
pub fn ranghi_check<R: Rng + ?Sized>(
    alg: &Algebra,
    per_class: usize,
    rng: &mut R,
) -> Result<RanghiReport> {
    let f = alg.field();
    if f.q() < MIN_Q {
        return Err(Error::NeedsBiggerField(format!("q={} < {MIN_Q}", f.q())));
    }
    let mut rep = RanghiReport {
        q: f.q(),
        ..RanghiReport::default()
    };
    let classes = [
        (SolutionClass::C1, 2usize),
        (SolutionClass::C2, 6),
        (SolutionClass::C3, 6),
    ];
    for (ci, &(class, expect)) in classes.iter().enumerate() {
        let mut done = 0;
        while done < per_class {
            let (y, z) = random_instance(f, class, rng)?;
            let Some(ls) = random_lambdas(f, y, z, 8, rng) else {
                rep.skipped_degenerate += 1;
                continue;
            };
            let lambdas: [Elem; 8] = ls.try_into().expect("eight");
            let tag = format!("{class:?} Y=η^{} Z=η^{}", y.to_exponent(), z.to_exponent());
            let m = build_m10(f, y, z, &lambdas)?;
            let rank = m.rank(f);
            if rank != expect {
                rep.rank_failures
                    .push(format!("{tag}: rank {rank}, expected {expect}"));
            }
            let (rational, big) = rational_kernel(alg, &m);
            if rational != big {
                rep.kernel_failures
                    .push(format!("{tag}: rational kernel {rational}, kernel {big}"));
            }
            if class != SolutionClass::C1 {
                let l4: [Elem; 4] = lambdas[4..].try_into().expect("four");
                let d = det_s6(f, y, z, &l4)?;
                rep.s6_printed_matches[ci - 1] += (d.as_printed == d.elimination) as u64;
                if d.closed_form != d.elimination || d.elimination.is_zero() {
                    rep.s6_failures.push(format!(
                        "{tag}: closed form {:?}, elimination {:?}",
                        d.closed_form, d.elimination
                    ));
                }
                let l5: [Elem; 5] = lambdas[3..].try_into().expect("five");
                if !det_s7_zero(f, y, z, &l5)? {
                    rep.s7_failures.push(format!("{tag}: det(S7) != 0"));
                }
            }
            rep.instances[ci] += 1;
            done += 1;
        }
    }
    Ok(rep)
}
