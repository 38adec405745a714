//! `F_q`-linear rank-metric codes inside `L_{n,q}`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fqmat::{self, Echelon};
use crate::gf::{Field, FieldSpec};
use crate::linpoly::{Algebra, LinPoly};

/// Default cap on the number of codewords enumerated by [`min_distance`].
pub const DEFAULT_CODEWORD_BUDGET: u128 = 1 << 24;

/// An `F_q`-subspace of `L_{n,q}` in reduced echelon coefficient coordinates.
#[derive(Clone)]
pub struct EchelonSpace {
    alg: Arc<Algebra>,
    ech: Echelon,
}

impl std::fmt::Debug for EchelonSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EchelonSpace")
            .field("dim", &self.dim())
            .finish()
    }
}

impl EchelonSpace {
    pub fn empty(alg: Arc<Algebra>) -> Self {
        let width = alg.dim();
        EchelonSpace {
            alg,
            ech: Echelon::new(width),
        }
    }

    pub fn from_polys<'a>(alg: Arc<Algebra>, polys: impl IntoIterator<Item = &'a LinPoly>) -> Self {
        let mut s = EchelonSpace::empty(alg);
        for f in polys {
            s.insert(f);
        }
        s
    }

    pub fn from_echelon(alg: Arc<Algebra>, ech: Echelon) -> Self {
        EchelonSpace { alg, ech }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn echelon(&self) -> &Echelon {
        &self.ech
    }

    pub fn dim(&self) -> usize {
        self.ech.dim()
    }

    /// Adds `f`; returns false if it was already in the space.
    pub fn insert(&mut self, f: &LinPoly) -> bool {
        let v = self.alg.to_vec(f);
        self.ech.insert(self.alg.sub(), &v)
    }

    pub fn contains(&self, f: &LinPoly) -> bool {
        self.ech.contains(self.alg.sub(), &self.alg.to_vec(f))
    }

    pub fn sum(&self, other: &EchelonSpace) -> Result<EchelonSpace> {
        if !Arc::ptr_eq(&self.alg, &other.alg) {
            return Err(Error::CtxMismatch);
        }
        Ok(EchelonSpace {
            alg: self.alg.clone(),
            ech: self.ech.sum(self.alg.sub(), &other.ech),
        })
    }

    /// True when both spaces have the same elements.
    pub fn same_space(&self, other: &EchelonSpace) -> bool {
        self.ech == other.ech
    }

    pub fn basis_polys(&self) -> Vec<LinPoly> {
        self.ech.rows().map(|r| self.alg.from_vec(r)).collect()
    }
}

/// Gabidulin parameters, when a code was built by [`gabidulin`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GabidulinParams {
    pub k: usize,
    pub s: usize,
}

/// An `F_q`-linear code given by an `F_q`-basis.
#[derive(Clone, Debug)]
pub struct Code {
    basis: Vec<LinPoly>,
    space: EchelonSpace,
    gabidulin: Option<GabidulinParams>,
}

impl Code {
    /// Code spanned by `polys`; dependent generators are dropped.
    pub fn from_polys(alg: Arc<Algebra>, polys: &[LinPoly]) -> Result<Code> {
        let mut space = EchelonSpace::empty(alg);
        let mut basis = Vec::new();
        for f in polys {
            if f.len() != space.alg.n() {
                return Err(Error::CtxMismatch);
            }
            if space.insert(f) {
                basis.push(f.clone());
            }
        }
        Ok(Code {
            basis,
            space,
            gabidulin: None,
        })
    }

    /// All of `L_{n,q}`.
    pub fn full(alg: Arc<Algebra>) -> Code {
        let polys: Vec<LinPoly> = (0..alg.n())
            .flat_map(|i| {
                let alg = alg.clone();
                (0..alg.n()).map(move |m| alg.monomial(i, alg.basis()[m]))
            })
            .collect();
        Code::from_polys(alg, &polys).expect("monomials have the right length")
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.space.alg
    }

    pub fn basis(&self) -> &[LinPoly] {
        &self.basis
    }

    pub fn space(&self) -> &EchelonSpace {
        &self.space
    }

    /// `F_q`-dimension.
    pub fn h(&self) -> usize {
        self.space.dim()
    }

    pub fn gabidulin_params(&self) -> Option<GabidulinParams> {
        self.gabidulin
    }

    pub fn contains(&self, f: &LinPoly) -> bool {
        self.space.contains(f)
    }

    pub fn to_doc(&self) -> CodeDoc {
        CodeDoc {
            field: self.algebra().field().spec().clone(),
            basis: self.basis.iter().map(|f| f.to_exponents()).collect(),
        }
    }

    pub fn from_doc(doc: &CodeDoc) -> Result<Code> {
        let field = Arc::new(Field::build(doc.field.clone())?);
        let alg = Algebra::new(field)?;
        let polys = doc
            .basis
            .iter()
            .map(|e| alg.from_exponents(e))
            .collect::<Result<Vec<_>>>()?;
        Code::from_polys(alg, &polys)
    }
}

/// JSON form of a code: `{field: FieldSpec, basis: [LinPoly…]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDoc {
    pub field: FieldSpec,
    pub basis: Vec<Vec<i64>>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The generalized Gabidulin code `G_{k,s} = ⟨x, x^{q^s}, …, x^{q^{s(k-1)}}⟩_{F_{q^n}}`.
pub fn gabidulin(alg: &Arc<Algebra>, k: usize, s: usize) -> Result<Code> {
    let n = alg.n();
    if k < 1 || k > n {
        return Err(Error::BadParameters(format!(
            "need 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    if s == 0 || gcd(s, n) != 1 {
        return Err(Error::BadParameters(format!(
            "need gcd(s, n) = 1, got s={s}, n={n}"
        )));
    }
    let mut polys = Vec::with_capacity(k * n);
    for i in 0..k {
        for &b in alg.basis() {
            polys.push(alg.monomial((s * i) % n, b));
        }
    }
    let mut code = Code::from_polys(alg.clone(), &polys)?;
    code.gabidulin = Some(GabidulinParams { k, s });
    Ok(code)
}

/// Matrix-coordinate generators of the code, for enumeration.
fn matrix_gens(code: &Code) -> Vec<Vec<u8>> {
    let alg = code.algebra();
    code.basis.iter().map(|f| alg.matrix(f)).collect()
}

/// Minimum rank over all nonzero codewords, by full enumeration.
pub fn min_distance(code: &Code, budget: u128) -> Result<usize> {
    let alg = code.algebra();
    let q = alg.q() as u128;
    let h = code.h();
    let needed = q.checked_pow(h as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            needed,
            allowed: budget,
        });
    }
    if h == 0 {
        return Err(Error::BadParameters(
            "zero code has no minimum distance".into(),
        ));
    }
    let n = alg.n();
    let sub = alg.sub();
    let gens = matrix_gens(code);
    let split = split_point(alg.q(), h);
    let (hi, lo) = gens.split_at(split);
    let best = AtomicUsize::new(n);
    let prefixes = (alg.q() as u64).pow(split as u32);
    (0..prefixes).into_par_iter().for_each(|mut idx| {
        if best.load(Ordering::Relaxed) <= 1 {
            return;
        }
        let mut start = vec![0u8; n * n];
        for g in hi {
            let c = (idx % alg.q() as u64) as u8;
            idx /= alg.q() as u64;
            sub.axpy(&mut start, c, g);
        }
        let mut local = n;
        let mut buf = vec![0u8; n * n];
        fqmat::gray_walk(sub, lo, &start, |m| {
            if m.iter().any(|&x| x != 0) {
                buf.copy_from_slice(m);
                let r = fqmat::rank_in_place(sub, &mut buf, n, n);
                if r < local {
                    local = r;
                }
            }
            local > 1
        });
        best.fetch_min(local, Ordering::Relaxed);
    });
    Ok(best.into_inner())
}

/// Number of leading generators whose combinations are distributed over threads.
pub(crate) fn split_point(q: usize, m: usize) -> usize {
    let mut split = 0;
    let mut count = 1usize;
    while split < m && count < 256 && m - split > 4 {
        split += 1;
        count *= q;
    }
    split
}

/// Singleton-like bound with equality: `h = n(n - d + 1)`.
pub fn is_mrd(code: &Code, budget: u128) -> Result<bool> {
    let d = min_distance(code, budget)?;
    let n = code.algebra().n();
    Ok(code.h() == n * (n + 1 - d))
}

/// `f ↦ left ∘ f' ∘ right` where `f'` is `f` or its adjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub left: LinPoly,
    pub right: LinPoly,
    pub adjoint: bool,
}

impl Equivalence {
    pub fn identity(alg: &Algebra) -> Self {
        Equivalence {
            left: alg.identity(),
            right: alg.identity(),
            adjoint: false,
        }
    }

    pub fn random<R: Rng + ?Sized>(alg: &Algebra, rng: &mut R) -> Self {
        let mut invertible = || loop {
            let f = LinPoly::new((0..alg.n()).map(|_| alg.field().random(rng)).collect());
            if alg.rank(&f) == alg.n() {
                return f;
            }
        };
        let left = invertible();
        let right = invertible();
        Equivalence {
            left,
            right,
            adjoint: rng.gen_bool(0.5),
        }
    }

    pub fn apply(&self, alg: &Algebra, f: &LinPoly) -> Result<LinPoly> {
        let inner = if self.adjoint {
            alg.adjoint(f)
        } else {
            f.clone()
        };
        alg.compose(&alg.compose(&self.left, &inner)?, &self.right)
    }
}

pub fn apply_equiv(code: &Code, e: &Equivalence) -> Result<Code> {
    let alg = code.algebra();
    let n = alg.n();
    if e.left.len() != n || e.right.len() != n {
        return Err(Error::CtxMismatch);
    }
    if alg.rank(&e.left) != n || alg.rank(&e.right) != n {
        return Err(Error::NotInvertible);
    }
    let polys = code
        .basis
        .iter()
        .map(|f| e.apply(alg, f))
        .collect::<Result<Vec<_>>>()?;
    Code::from_polys(alg.clone(), &polys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{Elem, FieldSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alg(spec: FieldSpec) -> Arc<Algebra> {
        Algebra::new(Arc::new(Field::build(spec).unwrap())).unwrap()
    }

    fn a16() -> Arc<Algebra> {
        alg(FieldSpec::new(2, 1, 4, vec![1, 0, 0, 1, 1]))
    }

    fn a8() -> Arc<Algebra> {
        alg(FieldSpec::new(2, 1, 3, vec![1, 0, 1, 1]))
    }

    fn a81() -> Arc<Algebra> {
        alg(FieldSpec::from_signed(3, 1, 4, &[1, -1, 0, 0, -1]))
    }

    #[test]
    fn gabidulin_dimensions() {
        let a = a16();
        assert_eq!(gabidulin(&a, 2, 1).unwrap().h(), 8);
        assert_eq!(gabidulin(&a, 4, 1).unwrap().h(), 16);
        assert!(matches!(gabidulin(&a, 2, 2), Err(Error::BadParameters(_))));
        assert!(matches!(gabidulin(&a, 0, 1), Err(Error::BadParameters(_))));
        assert!(matches!(gabidulin(&a, 5, 1), Err(Error::BadParameters(_))));
    }

    #[test]
    fn min_distance_examples() {
        let a = a16();
        assert_eq!(
            min_distance(&gabidulin(&a, 2, 1).unwrap(), 1 << 20).unwrap(),
            3
        );
        assert_eq!(min_distance(&Code::full(a.clone()), 1 << 20).unwrap(), 1);
        assert_eq!(
            min_distance(&gabidulin(&a81(), 1, 1).unwrap(), 1 << 20).unwrap(),
            4
        );
        let err = min_distance(&Code::full(a), 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn mrd_examples() {
        let a = a16();
        assert!(is_mrd(&gabidulin(&a, 2, 1).unwrap(), 1 << 20).unwrap());
        assert!(is_mrd(&gabidulin(&a, 3, 1).unwrap(), 1 << 20).unwrap());
        assert!(is_mrd(&gabidulin(&a81(), 2, 1).unwrap(), 1 << 20).unwrap());
        // 8-dimensional space containing a rank-one element
        let f = a.field();
        let mut polys = vec![a.trace_poly(Elem::ONE, Elem::ONE).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        while polys.len() < 8 {
            polys.push(LinPoly::new((0..4).map(|_| f.random(&mut rng)).collect()));
        }
        let code = Code::from_polys(a, &polys).unwrap();
        assert_eq!(code.h(), 8);
        assert_eq!(min_distance(&code, 1 << 20).unwrap(), 1);
        assert!(!is_mrd(&code, 1 << 20).unwrap());
    }

    #[test]
    fn space_operations() {
        let a = a16();
        let g = gabidulin(&a, 2, 1).unwrap();
        let same = g.space().sum(g.space()).unwrap();
        assert!(same.same_space(g.space()));
        let tr =
            EchelonSpace::from_polys(a.clone(), [&a.trace_poly(Elem::ONE, Elem::ONE).unwrap()]);
        assert_eq!(g.space().sum(&tr).unwrap().dim(), 9);
        assert!(g.contains(&a.monomial(1, Elem::ONE)));
        assert!(!g.contains(&a.monomial(2, Elem::ONE)));
        let other = a8();
        let foreign = EchelonSpace::empty(other);
        assert_eq!(g.space().sum(&foreign).unwrap_err(), Error::CtxMismatch);
    }

    #[test]
    fn equivalences() {
        let a = a16();
        let f = a.field();
        let g = gabidulin(&a, 2, 1).unwrap();
        let id = apply_equiv(&g, &Equivalence::identity(&a)).unwrap();
        assert!(id.space().same_space(g.space()));
        let e = Equivalence {
            left: a.monomial(0, f.eta_pow(3)),
            right: a.monomial(0, f.eta_pow(11)),
            adjoint: false,
        };
        assert!(apply_equiv(&g, &e).unwrap().space().same_space(g.space()));
        // G_{2,3} is the adjoint image of G_{2,1}
        let g3 = gabidulin(&a, 2, 3).unwrap();
        let adj = Equivalence {
            adjoint: true,
            ..Equivalence::identity(&a)
        };
        assert!(apply_equiv(&g, &adj)
            .unwrap()
            .space()
            .same_space(g3.space()));
        let bad = Equivalence {
            left: a.zero(),
            ..Equivalence::identity(&a)
        };
        assert_eq!(apply_equiv(&g, &bad).unwrap_err(), Error::NotInvertible);

        let b = a8();
        let g = gabidulin(&b, 2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let e = Equivalence::random(&b, &mut rng);
            let c = apply_equiv(&g, &e).unwrap();
            assert_eq!(c.h(), 6);
            assert_eq!(min_distance(&c, 1 << 20).unwrap(), 2);
        }
    }

    #[test]
    fn doc_round_trip() {
        let a = a81();
        let g = gabidulin(&a, 2, 1).unwrap();
        let doc = g.to_doc();
        let json = serde_json::to_string(&doc).unwrap();
        let back: CodeDoc = serde_json::from_str(&json).unwrap();
        let c = Code::from_doc(&back).unwrap();
        assert_eq!(c.h(), 8);
        assert_eq!(c.to_doc(), doc);
    }
}
