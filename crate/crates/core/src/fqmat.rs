//! Linear algebra over the small field `F_q` on `u8`-indexed coordinates.

use crate::gf::Subfield;

/// Row space kept in reduced row echelon form. Rows are stored flat, each of
/// length `width`, with pivot entries equal to 1 and zero above/below pivots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    width: usize,
    rows: Vec<u8>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows<'a, I>(sub: &Subfield, width: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = &'a [u8]>,
    {
        let mut e = Echelon::new(width);
        for r in rows {
            e.insert(sub, r);
        }
        e
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.rows[i * self.width..(i + 1) * self.width]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.rows.chunks_exact(self.width.max(1)).take(self.dim())
    }

    /// Subtracts the projection onto the row space; the result is zero iff `v`
    /// lies in the space.
    #[inline]
    pub fn reduce(&self, sub: &Subfield, v: &mut [u8]) {
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = v[p];
            if c != 0 {
                let row = &self.rows[i * self.width..(i + 1) * self.width];
                sub.axpy(v, sub.neg(c), row);
            }
        }
    }

    pub fn contains(&self, sub: &Subfield, v: &[u8]) -> bool {
        let mut w = v.to_vec();
        self.reduce(sub, &mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` to the space; returns false if it was already contained.
    pub fn insert(&mut self, sub: &Subfield, v: &[u8]) -> bool {
        debug_assert_eq!(v.len(), self.width);
        let mut w = v.to_vec();
        self.reduce(sub, &mut w);
        let Some(pivot) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = sub.inv(w[pivot]);
        sub.scale(&mut w, inv);
        for i in 0..self.pivots.len() {
            let c = self.rows[i * self.width + pivot];
            if c != 0 {
                let row = &mut self.rows[i * self.width..(i + 1) * self.width];
                sub.axpy(row, sub.neg(c), &w);
            }
        }
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(at, pivot);
        let start = at * self.width;
        self.rows.splice(start..start, w);
        true
    }

    pub fn sum(&self, sub: &Subfield, other: &Echelon) -> Echelon {
        let mut out = self.clone();
        for r in other.rows() {
            out.insert(sub, r);
        }
        out
    }

    /// Parity-check rows `H` with `H·v = 0` iff `v` is in the space.
    pub fn parity_check(&self, sub: &Subfield) -> ParityCheck {
        let w = self.width;
        let mut is_pivot = vec![false; w];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..w).filter(|&c| !is_pivot[c]).collect();
        let mut rows = vec![0u8; free.len() * w];
        for (k, &f) in free.iter().enumerate() {
            let h = &mut rows[k * w..(k + 1) * w];
            h[f] = 1;
            for (i, &p) in self.pivots.iter().enumerate() {
                h[p] = sub.neg(self.rows[i * w + f]);
            }
        }
        ParityCheck {
            width: w,
            count: free.len(),
            rows,
        }
    }
}

/// Parity-check matrix of a subspace; see [`Echelon::parity_check`].
#[derive(Clone, Debug)]
pub struct ParityCheck {
    width: usize,
    count: usize,
    rows: Vec<u8>,
}

impl ParityCheck {
    #[inline]
    pub fn annihilates(&self, sub: &Subfield, v: &[u8]) -> bool {
        (0..self.count).all(|k| sub.dot(&self.rows[k * self.width..(k + 1) * self.width], v) == 0)
    }

    pub fn codim(&self) -> usize {
        self.count
    }
}

/// Rank of a `rows × cols` matrix stored row-major; the buffer is destroyed.
pub fn rank_in_place(sub: &Subfield, m: &mut [u8], rows: usize, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| m[r * cols + c] != 0) else {
            continue;
        };
        if piv != rank {
            for j in 0..cols {
                m.swap(piv * cols + j, rank * cols + j);
            }
        }
        let inv = sub.inv(m[rank * cols + c]);
        let (head, tail) = m.split_at_mut((rank + 1) * cols);
        let prow = &mut head[rank * cols..];
        sub.scale(prow, inv);
        for r in 0..rows - rank - 1 {
            let row = &mut tail[r * cols..(r + 1) * cols];
            let f = row[c];
            if f != 0 {
                sub.axpy(row, sub.neg(f), prow);
            }
        }
        rank += 1;
    }
    rank
}

pub fn rank(sub: &Subfield, m: &[u8], rows: usize, cols: usize) -> usize {
    let mut buf = m.to_vec();
    rank_in_place(sub, &mut buf, rows, cols)
}

/// True iff the matrix is nonzero and every row is a multiple of the first
/// nonzero row.
pub fn is_rank_one(sub: &Subfield, m: &[u8], rows: usize, cols: usize) -> bool {
    let Some(first) = m.iter().position(|&x| x != 0) else {
        return false;
    };
    let r0 = first / cols;
    let pc = first % cols;
    let base = &m[r0 * cols..(r0 + 1) * cols];
    let inv = sub.inv(base[pc]);
    for r in r0 + 1..rows {
        let row = &m[r * cols..(r + 1) * cols];
        let f = sub.mul(row[pc], inv);
        for c in 0..cols {
            if row[c] != sub.mul(f, base[c]) {
                return false;
            }
        }
    }
    true
}

/// Enumerates every vector `start + Σ c_i g_i`, `c ∈ F_q^m`, in a q-ary Gray
/// order so each step adds a single scaled generator. `visit` returns `false`
/// to stop early; the function returns the number of vectors visited.
pub fn gray_walk<F>(sub: &Subfield, gens: &[Vec<u8>], start: &[u8], mut visit: F) -> u64
where
    F: FnMut(&[u8]) -> bool,
{
    let q = sub.order();
    let m = gens.len();
    let mut cur = start.to_vec();
    let mut visited = 1u64;
    if !visit(&cur) {
        return visited;
    }
    if m == 0 {
        return visited;
    }
    // digit value labels: label a ↦ element index a (0..q); step a → a+1 mod q
    let delta: Vec<u8> = (0..q)
        .map(|a| sub.sub(((a + 1) % q) as u8, a as u8))
        .collect();
    let mut steps: Vec<Vec<Vec<u8>>> = Vec::with_capacity(m);
    for g in gens {
        steps.push(
            delta
                .iter()
                .map(|&d| {
                    let mut v = g.clone();
                    sub.scale(&mut v, d);
                    v
                })
                .collect(),
        );
    }
    let mut gray = vec![0usize; m];
    let mut counter = vec![0usize; m];
    loop {
        // position of the increment in ordinary base-q counting
        let mut pos = 0;
        while pos < m && counter[pos] == q - 1 {
            counter[pos] = 0;
            pos += 1;
        }
        if pos == m {
            break;
        }
        counter[pos] += 1;
        let a = gray[pos];
        let step = &steps[pos][a];
        for (x, &y) in cur.iter_mut().zip(step) {
            *x = sub.add(*x, y);
        }
        gray[pos] = (a + 1) % q;
        visited += 1;
        if !visit(&cur) {
            break;
        }
    }
    visited
}
