//! Finite certification of the algebraic facts behind the `G_{2,1} ⊂ L_{4,q}`
//! tensor-rank results, plus the embedded table of perfect bases.
//!
//! Everything here works in `F_{q^4}` and is checked by exact arithmetic at a
//! concrete `q`.

pub mod bigmat;
pub mod ext;
pub mod main2;
pub mod ranghi;
pub mod report;
pub mod sistemone;
pub mod table1;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// `Π_{i ∈ idx} a^{q^i}`, e.g. `idx = [0, 1, 2]` gives `a^{1+q+q²}`.
pub fn conj(f: &Field, a: Elem, idx: &[usize]) -> Elem {
    idx.iter()
        .fold(Elem::ONE, |acc, &i| f.mul(acc, f.frob_pow(a, i)))
}

pub(crate) fn require_quartic(f: &Field) -> Result<()> {
    if f.n() == 4 {
        Ok(())
    } else {
        Err(Error::BadParameters(format!(
            "need an extension of degree 4 over F_q, got n={}",
            f.n()
        )))
    }
}

/// `N(λ) = λ Z^{q²} Y^q + 1` and `D(λ) = λ Z^{q²} Y + 1`.
pub fn n_d(f: &Field, y: Elem, z: Elem, lambda: Elem) -> (Elem, Elem) {
    let lz = f.mul(lambda, f.frob_pow(z, 2));
    (
        f.add(f.mul(lz, f.frob(y)), Elem::ONE),
        f.add(f.mul(lz, y), Elem::ONE),
    )
}

/// `D^{Σ q^a} / N^{Σ q^b}`; errors when `N = 0`.
pub(crate) fn ratio(f: &Field, d: Elem, dexp: &[usize], n: Elem, nexp: &[usize]) -> Result<Elem> {
    f.div(conj(f, d, dexp), conj(f, n, nexp))
        .map_err(|_| Error::DegenerateDenominator)
}
