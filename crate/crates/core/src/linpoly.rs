//! The algebra `L_{n,q}` of q-linearized polynomials `Σ f_i x^{q^i}` over `F_{q^n}`.
//!
//! A polynomial is identified with the `F_q`-endomorphism `a ↦ Σ f_i a^{q^i}` of
//! `F_{q^n}`. Two `F_q`-coordinate systems are used:
//!
//! * coefficient coordinates ([`Algebra::to_vec`]): each `f_i` expanded in the fixed
//!   basis, length `n²`, used for subspace arithmetic;
//! * matrix coordinates ([`Algebra::matrix`]): the `n × n` matrix of the
//!   endomorphism in the fixed basis, used for rank computations.
//!
//! Both maps are `F_q`-linear and injective.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fqmat;
use crate::gf::{Elem, Field, Subfield};

/// A linearized polynomial with exactly `n` coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct LinPoly {
    pub coeffs: Vec<Elem>,
}

impl LinPoly {
    pub fn new(coeffs: Vec<Elem>) -> Self {
        LinPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// JSON form: list of exponents, -1 for zero coefficients.
    pub fn to_exponents(&self) -> Vec<i64> {
        self.coeffs.iter().map(|c| c.to_exponent()).collect()
    }
}

/// `L_{n,q}` over a fixed field, with a fixed `F_q`-basis of `F_{q^n}` and a
/// coordinate lookup table.
pub struct Algebra {
    field: Arc<Field>,
    n: usize,
    basis: Vec<Elem>,
    /// `coords[x.index() * n ..][..n]`: coordinates of `x` in `basis`.
    coords: Vec<u8>,
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Algebra")
            .field("q", &self.q())
            .field("n", &self.n)
            .field("basis", &self.basis)
            .finish()
    }
}

impl Algebra {
    pub fn new(field: Arc<Field>) -> Result<Arc<Algebra>> {
        let n = field.n() as usize;
        let sub = field.subfield();
        if sub.order() == 0 {
            return Err(Error::BadSpec("subfield tables unavailable".into()));
        }
        let q = sub.order();
        // greedy: keep η^k when it is outside the F_q-span of the kept elements
        let mut span = vec![false; field.order() as usize];
        span[Elem::ZERO.index()] = true;
        let mut members = vec![Elem::ZERO];
        let mut basis = Vec::with_capacity(n);
        let mut k = 0i64;
        while basis.len() < n {
            let b = field.eta_pow(k);
            k += 1;
            if span[b.index()] {
                continue;
            }
            let mut next = Vec::with_capacity(members.len() * q);
            for &m in &members {
                for &c in sub.elems() {
                    let x = field.add(m, field.mul(c, b));
                    if !span[x.index()] {
                        span[x.index()] = true;
                    }
                    next.push(x);
                }
            }
            members = next;
            basis.push(b);
        }
        let mut coords = vec![0u8; field.order() as usize * n];
        // enumerate all combinations Σ c_m b_m
        let mut digits = vec![0u8; n];
        loop {
            let x = digits.iter().zip(&basis).fold(Elem::ZERO, |acc, (&c, &b)| {
                field.add(acc, field.mul(sub.elem(c), b))
            });
            coords[x.index() * n..(x.index() + 1) * n].copy_from_slice(&digits);
            let mut pos = 0;
            while pos < n && digits[pos] as usize == q - 1 {
                digits[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
            digits[pos] += 1;
        }
        Ok(Arc::new(Algebra {
            field,
            n,
            basis,
            coords,
        }))
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<Field> {
        &self.field
    }

    #[inline]
    pub fn sub(&self) -> &Subfield {
        self.field.subfield()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.field.q() as usize
    }

    /// `F_q`-dimension of `L_{n,q}`, i.e. `n²`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    /// The fixed `F_q`-basis of `F_{q^n}`.
    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    /// Coordinates of a field element in the fixed basis.
    #[inline]
    pub fn coords(&self, x: Elem) -> &[u8] {
        let i = x.index();
        &self.coords[i * self.n..(i + 1) * self.n]
    }

    pub fn from_coords(&self, c: &[u8]) -> Elem {
        let f = &self.field;
        c.iter()
            .zip(&self.basis)
            .fold(Elem::ZERO, |acc, (&ci, &b)| {
                f.add(acc, f.mul(self.sub().elem(ci), b))
            })
    }

    fn check(&self, f: &LinPoly) -> Result<()> {
        if f.len() == self.n {
            Ok(())
        } else {
            Err(Error::CtxMismatch)
        }
    }

    pub fn zero(&self) -> LinPoly {
        LinPoly::new(vec![Elem::ZERO; self.n])
    }

    /// `c · x^{q^i}`.
    pub fn monomial(&self, i: usize, c: Elem) -> LinPoly {
        let mut f = self.zero();
        f.coeffs[i % self.n] = c;
        f
    }

    pub fn identity(&self) -> LinPoly {
        self.monomial(0, Elem::ONE)
    }

    /// Builds a polynomial from JSON exponents (-1 for zero).
    pub fn from_exponents(&self, exps: &[i64]) -> Result<LinPoly> {
        if exps.len() != self.n {
            return Err(Error::CtxMismatch);
        }
        Ok(LinPoly::new(
            exps.iter()
                .map(|&e| {
                    if e < 0 {
                        Elem::ZERO
                    } else {
                        self.field.eta_pow(e)
                    }
                })
                .collect(),
        ))
    }

    /// `f(x) = Σ f_i x^{q^i}`.
    pub fn eval(&self, f: &LinPoly, x: Elem) -> Elem {
        let fld = &self.field;
        f.coeffs
            .iter()
            .enumerate()
            .fold(Elem::ZERO, |acc, (i, &c)| {
                fld.add(acc, fld.mul(c, fld.frob_pow(x, i)))
            })
    }

    pub fn add(&self, f: &LinPoly, g: &LinPoly) -> Result<LinPoly> {
        self.check(f)?;
        self.check(g)?;
        Ok(LinPoly::new(
            f.coeffs
                .iter()
                .zip(&g.coeffs)
                .map(|(&a, &b)| self.field.add(a, b))
                .collect(),
        ))
    }

    pub fn sub_poly(&self, f: &LinPoly, g: &LinPoly) -> Result<LinPoly> {
        self.check(f)?;
        self.check(g)?;
        Ok(LinPoly::new(
            f.coeffs
                .iter()
                .zip(&g.coeffs)
                .map(|(&a, &b)| self.field.sub(a, b))
                .collect(),
        ))
    }

    /// `c · f` for any `c ∈ F_{q^n}`.
    pub fn scale(&self, f: &LinPoly, c: Elem) -> LinPoly {
        LinPoly::new(f.coeffs.iter().map(|&a| self.field.mul(c, a)).collect())
    }

    /// `f ∘ g` reduced modulo `x^{q^n} - x`: `h_k = Σ_{i+j ≡ k} f_i g_j^{q^i}`.
    pub fn compose(&self, f: &LinPoly, g: &LinPoly) -> Result<LinPoly> {
        self.check(f)?;
        self.check(g)?;
        let fld = &self.field;
        let n = self.n;
        let mut h = vec![Elem::ZERO; n];
        for (i, &fi) in f.coeffs.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            for (j, &gj) in g.coeffs.iter().enumerate() {
                let term = fld.mul(fi, fld.frob_pow(gj, i));
                h[(i + j) % n] = fld.add(h[(i + j) % n], term);
            }
        }
        Ok(LinPoly::new(h))
    }

    /// `x ↦ a · f(b x)`.
    pub fn twist(&self, f: &LinPoly, a: Elem, b: Elem) -> LinPoly {
        let fld = &self.field;
        LinPoly::new(
            f.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| fld.mul(a, fld.mul(c, fld.frob_pow(b, i))))
                .collect(),
        )
    }

    /// Adjoint with respect to the trace form: `Σ f_i^{q^{n-i}} x^{q^{n-i}}`.
    pub fn adjoint(&self, f: &LinPoly) -> LinPoly {
        let n = self.n;
        let mut h = vec![Elem::ZERO; n];
        for (i, &c) in f.coeffs.iter().enumerate() {
            let k = (n - i) % n;
            h[k] = self.field.frob_pow(c, k);
        }
        LinPoly::new(h)
    }

    /// `α · Tr(β x)`, coefficients `α β^{q^i}`.
    pub fn trace_poly(&self, alpha: Elem, beta: Elem) -> Result<LinPoly> {
        if alpha.is_zero() || beta.is_zero() {
            return Err(Error::ZeroParameter);
        }
        let fld = &self.field;
        Ok(LinPoly::new(
            (0..self.n)
                .map(|i| fld.mul(alpha, fld.frob_pow(beta, i)))
                .collect(),
        ))
    }

    /// Matrix of the endomorphism in the fixed basis, row-major `n × n`:
    /// column `m` holds the coordinates of `f(b_m)`.
    pub fn matrix(&self, f: &LinPoly) -> Vec<u8> {
        let n = self.n;
        let mut m = vec![0u8; n * n];
        for (col, &b) in self.basis.iter().enumerate() {
            let c = self.coords(self.eval(f, b));
            for row in 0..n {
                m[row * n + col] = c[row];
            }
        }
        m
    }

    pub fn rank(&self, f: &LinPoly) -> usize {
        let mut m = self.matrix(f);
        fqmat::rank_in_place(self.sub(), &mut m, self.n, self.n)
    }

    /// Coefficient coordinates of length `n²`.
    pub fn to_vec(&self, f: &LinPoly) -> Vec<u8> {
        let mut v = Vec::with_capacity(self.dim());
        for &c in &f.coeffs {
            v.extend_from_slice(self.coords(c));
        }
        v
    }

    pub fn from_vec(&self, v: &[u8]) -> LinPoly {
        LinPoly::new(
            v.chunks_exact(self.n)
                .map(|c| self.from_coords(c))
                .collect(),
        )
    }

    /// Matrix coordinates of the polynomial with coefficient coordinates `v`.
    pub fn vec_to_matrix(&self, v: &[u8]) -> Vec<u8> {
        self.matrix(&self.from_vec(v))
    }
}
