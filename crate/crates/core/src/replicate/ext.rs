//! When does a trace function `α₃Tr(β₃x)` lie in
//! `H = ⟨x, x^q⟩_{F_{q^4}} ⊕ ⟨α₁Tr(β₁x), α₂Tr(β₂x)⟩_{F_q}`?
//!
//! Writing `α₃Tr(β₃x) = γx + δx^q + c₁α₁Tr(β₁x) + c₂α₂Tr(β₂x)` and comparing
//! coefficients gives four equations; the last two fix `β₃^{q-1} = A(c₁/c₂)`.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use super::{conj, n_d, ratio, require_quartic};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linpoly::{Algebra, LinPoly};
use crate::rankcode::EchelonSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExtParams {
    pub alpha1: Elem,
    pub beta1: Elem,
    pub alpha2: Elem,
    pub beta2: Elem,
}

impl ExtParams {
    pub fn new(alpha1: Elem, beta1: Elem, alpha2: Elem, beta2: Elem) -> Result<Self> {
        if [alpha1, beta1, alpha2, beta2].iter().any(|e| e.is_zero()) {
            return Err(Error::ZeroInput);
        }
        Ok(ExtParams {
            alpha1,
            beta1,
            alpha2,
            beta2,
        })
    }

    pub fn random<R: Rng + ?Sized>(f: &Field, rng: &mut R) -> Self {
        ExtParams {
            alpha1: f.random_nonzero(rng),
            beta1: f.random_nonzero(rng),
            alpha2: f.random_nonzero(rng),
            beta2: f.random_nonzero(rng),
        }
    }

    /// Parameters with prescribed `Y = β₁/β₂`, `Z = α₁/α₂`.
    pub fn from_yz(f: &Field, y: Elem, z: Elem, alpha2: Elem, beta2: Elem) -> Result<Self> {
        ExtParams::new(f.mul(z, alpha2), f.mul(y, beta2), alpha2, beta2)
    }

    pub fn y(&self, f: &Field) -> Elem {
        f.div(self.beta1, self.beta2).expect("nonzero")
    }

    pub fn z(&self, f: &Field) -> Elem {
        f.div(self.alpha1, self.alpha2).expect("nonzero")
    }

    /// The space `H` as an `F_q`-subspace of `L_{4,q}`.
    pub fn h_space(&self, alg: &Arc<Algebra>) -> Result<EchelonSpace> {
        let mut polys = Vec::with_capacity(10);
        for i in 0..2 {
            for &b in alg.basis() {
                polys.push(alg.monomial(i, b));
            }
        }
        polys.push(alg.trace_poly(self.alpha1, self.beta1)?);
        polys.push(alg.trace_poly(self.alpha2, self.beta2)?);
        Ok(EchelonSpace::from_polys(alg.clone(), &polys))
    }
}

/// `A(c₁/c₂)` as numerator and denominator.
fn a_parts(f: &Field, p: &ExtParams, c1: Elem, c2: Elem) -> (Elem, Elem) {
    let a1 = f.frob_pow(p.alpha1, 2);
    let a2 = f.frob_pow(p.alpha2, 2);
    let num = f.add(
        f.mul(c1, f.mul(a1, f.frob(p.beta1))),
        f.mul(c2, f.mul(a2, f.frob(p.beta2))),
    );
    let den = f.add(f.mul(c1, f.mul(a1, p.beta1)), f.mul(c2, f.mul(a2, p.beta2)));
    (num, den)
}

/// The trace function through `H` selected by `(c₁, c₂)`, if there is one.
///
/// `β₃` is the solution of `β₃^{q-1} = A` with the smallest exponent and
/// `α₃ = c₂α₂β₂D^{q²+q+1}/(N^{q+1}β₃)` with `λ = c₁/c₂`.
pub fn extension_candidate(
    f: &Field,
    p: &ExtParams,
    c1: Elem,
    c2: Elem,
) -> Result<Option<(Elem, Elem)>> {
    require_quartic(f)?;
    if c1.is_zero() || c2.is_zero() {
        return Err(Error::BadParameters("c1 and c2 must be nonzero".into()));
    }
    let (num, den) = a_parts(f, p, c1, c2);
    match (num.is_zero(), den.is_zero()) {
        (true, true) => return Err(Error::DegenerateDenominator),
        // A is 0 or infinite, no β₃
        (true, false) | (false, true) => return Ok(None),
        _ => {}
    }
    let a = f.div(num, den)?;
    if f.norm(a) != Elem::ONE {
        return Ok(None);
    }
    let q1 = f.q() as u64 - 1;
    let log_a = a.log().expect("nonzero") as u64;
    // norm one means (q−1) | log A
    debug_assert_eq!(log_a % q1, 0);
    let beta3 = f.eta_pow((log_a / q1) as i64);
    let lambda = f.div(c1, c2)?;
    let (n, d) = n_d(f, p.y(f), p.z(f), lambda);
    let r = ratio(f, d, &[0, 1, 2], n, &[0, 1])?;
    let alpha3 = f.div(f.mul(f.mul(c2, f.mul(p.alpha2, p.beta2)), r), beta3)?;
    Ok(Some((alpha3, beta3)))
}

/// The first two equations only determine `γ, δ`; checks the last two.
pub fn verify_system1(
    f: &Field,
    p: &ExtParams,
    c1: Elem,
    c2: Elem,
    alpha3: Elem,
    beta3: Elem,
) -> bool {
    let side = |k: usize| {
        f.add(
            f.mul(c1, f.mul(p.alpha1, f.frob_pow(p.beta1, k))),
            f.mul(c2, f.mul(p.alpha2, f.frob_pow(p.beta2, k))),
        )
    };
    let rhs = |k: usize| f.mul(alpha3, f.frob_pow(beta3, k));
    side(2) == rhs(2) && side(3) == rhs(3)
}

/// `α₃Tr(β₃x)` as a polynomial.
pub fn candidate_poly(alg: &Algebra, alpha3: Elem, beta3: Elem) -> Result<LinPoly> {
    alg.trace_poly(alpha3, beta3)
}

/// The rank-one function attached to `λ`:
/// `α₂β₂D^{q²+q+1}/N^{q+1} x + α₂β₂^q D^{q²+q}/N^q x^q + α₂β₂^{q²}D^{q²} x^{q²} + α₂β₂^{q³}N^{q²} x^{q³}`.
pub fn f_lambda(f: &Field, p: &ExtParams, lambda: Elem) -> Result<LinPoly> {
    require_quartic(f)?;
    let (n, d) = n_d(f, p.y(f), p.z(f), lambda);
    if n.is_zero() || d.is_zero() {
        return Err(Error::DegenerateDenominator);
    }
    let w = |k: usize| f.mul(p.alpha2, f.frob_pow(p.beta2, k));
    Ok(LinPoly::new(vec![
        f.mul(w(0), ratio(f, d, &[0, 1, 2], n, &[0, 1])?),
        f.mul(w(1), ratio(f, d, &[1, 2], n, &[1])?),
        f.mul(w(2), conj(f, d, &[2])),
        f.mul(w(3), conj(f, n, &[2])),
    ]))
}

/// One monomial `± Π α₁^{q^i} Π α₂^{q^i} Π β₁^{q^i} Π β₂^{q^i}` of the quartic.
struct Term {
    sign: i8,
    a1: &'static [usize],
    a2: &'static [usize],
    b1: &'static [usize],
    b2: &'static [usize],
}

const fn t(
    sign: i8,
    a1: &'static [usize],
    a2: &'static [usize],
    b1: &'static [usize],
    b2: &'static [usize],
) -> Term {
    Term {
        sign,
        a1,
        a2,
        b1,
        b2,
    }
}

/// Coefficient of `c₁c₂³`.
const C1_TERMS: [Term; 8] = [
    t(-1, &[0], &[1, 2, 3], &[2], &[0, 1, 3]),
    t(1, &[0], &[1, 2, 3], &[3], &[0, 1, 2]),
    t(1, &[1], &[0, 2, 3], &[0], &[1, 2, 3]),
    t(-1, &[1], &[0, 2, 3], &[3], &[0, 1, 2]),
    t(-1, &[2], &[0, 1, 3], &[0], &[1, 2, 3]),
    t(1, &[2], &[0, 1, 3], &[1], &[0, 2, 3]),
    t(-1, &[3], &[0, 1, 2], &[1], &[0, 2, 3]),
    t(1, &[3], &[0, 1, 2], &[2], &[0, 1, 3]),
];

/// Coefficient of `c₁²c₂²`.
const C2_TERMS: [Term; 12] = [
    t(1, &[0, 1], &[2, 3], &[0, 3], &[1, 2]),
    t(-1, &[0, 1], &[2, 3], &[2, 3], &[0, 1]),
    t(-1, &[0, 2], &[1, 3], &[0, 2], &[1, 3]),
    t(1, &[0, 2], &[1, 3], &[1, 3], &[0, 2]),
    t(-1, &[0, 3], &[1, 2], &[1, 2], &[0, 3]),
    t(1, &[0, 3], &[1, 2], &[2, 3], &[0, 1]),
    t(1, &[1, 2], &[0, 3], &[0, 1], &[2, 3]),
    t(-1, &[1, 2], &[0, 3], &[0, 3], &[1, 2]),
    t(1, &[1, 3], &[0, 2], &[0, 2], &[1, 3]),
    t(-1, &[1, 3], &[0, 2], &[1, 3], &[0, 2]),
    t(-1, &[2, 3], &[0, 1], &[0, 1], &[2, 3]),
    t(1, &[2, 3], &[0, 1], &[1, 2], &[0, 3]),
];

/// Coefficient of `c₁³c₂`.
const C3_TERMS: [Term; 8] = [
    t(1, &[0, 1, 2], &[3], &[0, 1, 3], &[2]),
    t(-1, &[0, 1, 2], &[3], &[0, 2, 3], &[1]),
    t(1, &[0, 1, 3], &[2], &[0, 2, 3], &[1]),
    t(-1, &[0, 1, 3], &[2], &[1, 2, 3], &[0]),
    t(-1, &[0, 2, 3], &[1], &[0, 1, 2], &[3]),
    t(1, &[0, 2, 3], &[1], &[1, 2, 3], &[0]),
    t(1, &[1, 2, 3], &[0], &[0, 1, 2], &[3]),
    t(-1, &[1, 2, 3], &[0], &[0, 1, 3], &[2]),
];

fn eval_terms(f: &Field, p: &ExtParams, terms: &[Term]) -> Elem {
    terms.iter().fold(Elem::ZERO, |acc, t| {
        let v = f.mul(
            f.mul(conj(f, p.alpha1, t.a1), conj(f, p.alpha2, t.a2)),
            f.mul(conj(f, p.beta1, t.b1), conj(f, p.beta2, t.b2)),
        );
        if t.sign < 0 {
            f.sub(acc, v)
        } else {
            f.add(acc, v)
        }
    })
}

/// The eight linear factors `(u, v)` of both sides, each `c₁u + c₂v`.
fn factors(f: &Field, p: &ExtParams) -> ([(Elem, Elem); 4], [(Elem, Elem); 4]) {
    // (α-exponent, β-exponent) index pairs of the factors
    const LHS: [(usize, usize); 4] = [(2, 1), (3, 2), (0, 3), (1, 0)];
    const RHS: [(usize, usize); 4] = [(2, 0), (3, 1), (0, 2), (1, 3)];
    let fac = |(i, j): (usize, usize)| {
        (
            f.mul(f.frob_pow(p.alpha1, i), f.frob_pow(p.beta1, j)),
            f.mul(f.frob_pow(p.alpha2, i), f.frob_pow(p.beta2, j)),
        )
    };
    (LHS.map(fac), RHS.map(fac))
}

/// `[C₄, C₃, C₂, C₁, C₀]`, `C_k` the coefficient of `c₁^k c₂^{4-k}` in LHS − RHS.
///
/// `C₃, C₂, C₁` come from their closed forms; `C₄` and `C₀` are the differences
/// of the pure products, which vanish.
pub fn numden_coeffs(f: &Field, p: &ExtParams) -> [Elem; 5] {
    let (l, r) = factors(f, p);
    let pure = |side: &[(Elem, Elem); 4], first: bool| {
        side.iter().fold(Elem::ONE, |acc, &(u, v)| {
            f.mul(acc, if first { u } else { v })
        })
    };
    let c4 = f.sub(pure(&l, true), pure(&r, true));
    let c0 = f.sub(pure(&l, false), pure(&r, false));
    [
        c4,
        eval_terms(f, p, &C3_TERMS),
        eval_terms(f, p, &C2_TERMS),
        eval_terms(f, p, &C1_TERMS),
        c0,
    ]
}

/// LHS − RHS evaluated directly at `(c₁, c₂)`.
pub fn numden_eval(f: &Field, p: &ExtParams, c1: Elem, c2: Elem) -> Elem {
    let (l, r) = factors(f, p);
    let side = |s: &[(Elem, Elem); 4]| {
        s.iter().fold(Elem::ONE, |acc, &(u, v)| {
            f.mul(acc, f.add(f.mul(c1, u), f.mul(c2, v)))
        })
    };
    f.sub(side(&l), side(&r))
}

/// `Σ C_k c₁^k c₂^{4-k}`.
pub fn numden_from_coeffs(f: &Field, coeffs: &[Elem; 5], c1: Elem, c2: Elem) -> Elem {
    coeffs
        .iter()
        .enumerate()
        .fold(Elem::ZERO, |acc, (idx, &c)| {
            let k = 4 - idx as u64;
            f.add(acc, f.mul(c, f.mul(f.pow(c1, k), f.pow(c2, 4 - k))))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::default_spec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(q: u32) -> Arc<Field> {
        Arc::new(Field::build(default_spec(q, 4).unwrap()).unwrap())
    }

    /// Oracle: multiply out the eight linear factors as polynomials in `c₁` with `c₂ = 1`.
    fn expand(f: &Field, p: &ExtParams) -> [Elem; 5] {
        let (l, r) = factors(f, p);
        let mul_out = |s: &[(Elem, Elem); 4]| {
            // coefficients by power of c1, low first
            let mut poly = vec![Elem::ONE];
            for &(u, v) in s {
                let mut next = vec![Elem::ZERO; poly.len() + 1];
                for (i, &c) in poly.iter().enumerate() {
                    next[i] = f.add(next[i], f.mul(c, v));
                    next[i + 1] = f.add(next[i + 1], f.mul(c, u));
                }
                poly = next;
            }
            poly
        };
        let (a, b) = (mul_out(&l), mul_out(&r));
        let mut out = [Elem::ZERO; 5];
        for k in 0..5 {
            out[4 - k] = f.sub(a[k], b[k]);
        }
        out
    }

    #[test]
    fn quartic_closed_forms_match_expansion() {
        for q in [3, 5] {
            let f = field(q);
            let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
            for _ in 0..100 {
                let p = ExtParams::random(&f, &mut rng);
                let c = numden_coeffs(&f, &p);
                assert_eq!(c, expand(&f, &p));
                assert!(c[0].is_zero() && c[4].is_zero());
                for c1 in f.fq_elements() {
                    for c2 in f.fq_elements() {
                        assert_eq!(
                            numden_from_coeffs(&f, &c, c1, c2),
                            numden_eval(&f, &p, c1, c2)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn numden_examples() {
        let f = field(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = ExtParams::random(&f, &mut rng);
        assert!(numden_eval(&f, &p, Elem::ZERO, Elem::ZERO).is_zero());
        // Y ∈ F_q: identically zero
        let y = f.from_int(2);
        for _ in 0..10 {
            let p = ExtParams::from_yz(
                &f,
                y,
                f.random_nonzero(&mut rng),
                f.random_nonzero(&mut rng),
                f.random_nonzero(&mut rng),
            )
            .unwrap();
            for c1 in f.fq_elements() {
                for c2 in f.fq_elements() {
                    assert!(numden_eval(&f, &p, c1, c2).is_zero());
                }
            }
        }
        let f5 = field(5);
        let p = ExtParams::random(&f5, &mut rng);
        let some_nonzero = f5.fq_elements().iter().any(|&c1| {
            f5.fq_elements()
                .iter()
                .any(|&c2| !numden_eval(&f5, &p, c1, c2).is_zero())
        });
        assert!(some_nonzero);
    }

    /// Substitution oracle: `β₃` exists iff `A` has norm one, found by brute force.
    #[test]
    fn candidates_match_brute_force() {
        let f = field(3);
        let alg = Algebra::new(f.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let fq: Vec<Elem> = f
            .fq_elements()
            .into_iter()
            .filter(|e| !e.is_zero())
            .collect();
        let mut found = 0;
        for _ in 0..40 {
            let p = ExtParams::random(&f, &mut rng);
            let h = p.h_space(&alg).unwrap();
            if h.dim() != 10 {
                continue;
            }
            for &c1 in &fq {
                for &c2 in &fq {
                    let got = extension_candidate(&f, &p, c1, c2).unwrap();
                    let (num, den) = a_parts(&f, &p, c1, c2);
                    let a = f.div(num, den).ok().filter(|a| !a.is_zero());
                    let exists = a.is_some_and(|a| f.nonzero_elements().any(|b| f.pow(b, 2) == a));
                    assert_eq!(got.is_some(), exists);
                    if let Some((a3, b3)) = got {
                        found += 1;
                        assert!(verify_system1(&f, &p, c1, c2, a3, b3));
                        assert!(!verify_system1(&f, &p, c1, c2, f.mul(a3, f.eta_pow(1)), b3));
                        assert!(h.contains(&candidate_poly(&alg, a3, b3).unwrap()));
                    }
                }
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn solutions_give_candidates_for_every_lambda() {
        use crate::replicate::sistemone::sistemone_satisfied;
        let f = field(3);
        let alg = Algebra::new(f.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let fq: Vec<Elem> = f
            .fq_elements()
            .into_iter()
            .filter(|e| !e.is_zero())
            .collect();
        let mut checked = 0;
        while checked < 20 {
            // class C2: Y ∉ F_{q²}, Z = Y^{q+1}
            let y = f.random_nonzero(&mut rng);
            if f.in_intermediate(y, 2) {
                continue;
            }
            let z = conj(&f, y, &[0, 1]);
            assert!(sistemone_satisfied(&f, y, z));
            let p = ExtParams::from_yz(
                &f,
                y,
                z,
                f.random_nonzero(&mut rng),
                f.random_nonzero(&mut rng),
            )
            .unwrap();
            let h = p.h_space(&alg).unwrap();
            let mut ok = true;
            for &lambda in &fq {
                let (n, d) = n_d(&f, y, z, lambda);
                if n.is_zero() || d.is_zero() {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            for &lambda in &fq {
                let c = extension_candidate(&f, &p, lambda, Elem::ONE)
                    .unwrap()
                    .expect("candidate");
                assert!(verify_system1(&f, &p, lambda, Elem::ONE, c.0, c.1));
                let fl = f_lambda(&f, &p, lambda).unwrap();
                assert_eq!(alg.rank(&fl), 1);
                assert!(h.contains(&fl));
            }
            checked += 1;
        }
    }

    #[test]
    fn c1_zero_branch_is_proportional() {
        // with c₁ = 0 the solution is λ·α₂Tr(β₂x)
        let f = field(5);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let p = ExtParams::random(&f, &mut rng);
        let c2 = f.from_int(3);
        assert!(verify_system1(
            &f,
            &p,
            Elem::ZERO,
            c2,
            f.mul(c2, p.alpha2),
            p.beta2
        ));
        assert!(extension_candidate(&f, &p, Elem::ZERO, c2).is_err());
    }
}
