//! Dense matrices over the big field `F_{q^n}`.

use crate::error::{Error, Result};
use crate::fqmat;
use crate::gf::{Elem, Field};
use crate::linpoly::Algebra;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl BigMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BigMatrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        BigMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Rows `r0..r1` and columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> BigMatrix {
        BigMatrix::from_rows((r0..r1).map(|r| self.row(r)[c0..c1].to_vec()).collect())
    }

    /// Gaussian elimination; returns the rank and the determinant factor
    /// (product of pivots with swap signs) of the processed part.
    fn eliminate(&self, f: &Field) -> (usize, Elem) {
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.data.clone();
        let mut rank = 0;
        let mut det = Elem::ONE;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| !m[r * cols + c].is_zero()) else {
                det = Elem::ZERO;
                continue;
            };
            if p != rank {
                for j in 0..cols {
                    m.swap(p * cols + j, rank * cols + j);
                }
                det = f.neg(det);
            }
            let piv = m[rank * cols + c];
            det = f.mul(det, piv);
            let inv = f.inv(piv).expect("pivot is nonzero");
            for r in rank + 1..rows {
                let factor = m[r * cols + c];
                if factor.is_zero() {
                    continue;
                }
                let s = f.neg(f.mul(factor, inv));
                for j in c..cols {
                    let v = f.add(m[r * cols + j], f.mul(s, m[rank * cols + j]));
                    m[r * cols + j] = v;
                }
            }
            rank += 1;
        }
        (rank, det)
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.eliminate(f).0
    }

    pub fn det(&self, f: &Field) -> Result<Elem> {
        if self.rows != self.cols {
            return Err(Error::BadParameters(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let (rank, det) = self.eliminate(f);
        Ok(if rank < self.rows { Elem::ZERO } else { det })
    }

    /// Rank of the `(n·rows) × cols` matrix over `F_q` obtained by expanding each
    /// entry in the basis of `alg`; its corank is the dimension of the kernel
    /// vectors with all entries in `F_q`.
    pub fn fq_rank(&self, alg: &Algebra) -> usize {
        let n = alg.n();
        let mut m = vec![0u8; self.rows * n * self.cols];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let coords = alg.coords(self.get(r, c));
                for (k, &x) in coords.iter().enumerate() {
                    m[(r * n + k) * self.cols + c] = x;
                }
            }
        }
        fqmat::rank_in_place(alg.sub(), &mut m, self.rows * n, self.cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f81() -> Field {
        Field::build(FieldSpec::from_signed(3, 1, 4, &[1, -1, 0, 0, -1])).unwrap()
    }

    /// Leibniz expansion, for small sizes.
    fn det_leibniz(f: &Field, m: &BigMatrix) -> Elem {
        let n = m.shape().0;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = Elem::ZERO;
        permute(&mut perm, 0, &mut |p| {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let mut t = (0..n).fold(Elem::ONE, |acc, i| f.mul(acc, m.get(i, p[i])));
            if inversions % 2 == 1 {
                t = f.neg(t);
            }
            total = f.add(total, t);
        });
        total
    }

    fn permute(p: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            visit(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, visit);
            p.swap(k, i);
        }
    }

    #[test]
    fn det_matches_leibniz() {
        let f = f81();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=5 {
            for _ in 0..20 {
                let m = BigMatrix::from_rows(
                    (0..n)
                        .map(|_| (0..n).map(|_| f.random(&mut rng)).collect())
                        .collect(),
                );
                assert_eq!(m.det(&f).unwrap(), det_leibniz(&f, &m));
                assert_eq!(m.rank(&f) == n, !m.det(&f).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn rank_of_structured_matrices() {
        let f = f81();
        let a = f.eta_pow(5);
        let b = f.eta_pow(17);
        // rank-one outer product
        let m = BigMatrix::from_rows(vec![
            vec![a, f.mul(a, b), Elem::ZERO],
            vec![f.mul(a, a), f.mul(f.mul(a, a), b), Elem::ZERO],
        ]);
        assert_eq!(m.rank(&f), 1);
        assert_eq!(BigMatrix::zeros(3, 4).rank(&f), 0);
        assert!(m.det(&f).is_err());
        assert_eq!(m.submatrix(0, 2, 0, 2).det(&f).unwrap(), Elem::ZERO);
    }

    #[test]
    fn fq_rank_counts_rational_kernel() {
        let spec = FieldSpec::from_signed(3, 1, 4, &[1, -1, 0, 0, -1]);
        let alg = Algebra::new(std::sync::Arc::new(Field::build(spec).unwrap())).unwrap();
        let f = alg.field();
        let e = f.eta_pow(1);
        // [1, η]: F_q-kernel is trivial although the big-field kernel is not
        let m = BigMatrix::from_rows(vec![vec![Elem::ONE, e]]);
        assert_eq!(m.rank(f), 1);
        assert_eq!(m.fq_rank(&alg), 2);
        // [1, 1]: kernel (1, -1) is rational
        let m = BigMatrix::from_rows(vec![vec![Elem::ONE, Elem::ONE]]);
        assert_eq!(m.fq_rank(&alg), 1);
    }
}
