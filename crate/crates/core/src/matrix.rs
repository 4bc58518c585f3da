//! Square max-plus matrices with sparse row storage.
//!
//! A matrix entry A_ij is the weight of the arc i -> j in the graph G(A);
//! the semiring zero -inf means "no arc" and is represented by absence, so
//! stored weights are never -inf. +inf weights appear only in the star and
//! plus closures of matrices with supercritical circuits.
//!
//! Matrix-matrix and matrix-vector products follow (AB)_ik = max_j (A_ij +
//! B_jk) and (Au)_i = max_j (A_ij + u_j). All values are immutable after
//! construction as far as the operations here are concerned; nothing mutates
//! its arguments.

use crate::error::Error;
use crate::scalar::Trop;

/// Square max-plus matrix over nodes 0..n, stored as sorted sparse rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropMatrix {
    n: usize,
    rows: Vec<Vec<(usize, Trop)>>,
}

impl TropMatrix {
    /// The matrix with every entry -inf (the zero matrix).
    pub fn new(n: usize) -> TropMatrix {
        TropMatrix {
            n,
            rows: vec![Vec::new(); n],
        }
    }

    /// Identity: unit diagonal, -inf elsewhere.
    pub fn identity(n: usize) -> TropMatrix {
        let rows = (0..n).map(|i| vec![(i, Trop::ONE)]).collect();
        TropMatrix { n, rows }
    }

    /// Builds a matrix from (row, col, weight) triples. Duplicate positions
    /// combine by oplus (parallel arcs keep the heaviest). -inf weights are
    /// ignored, so triples may come straight from a parser.
    pub fn from_triples<I, W>(n: usize, triples: I) -> Result<TropMatrix, Error>
    where
        I: IntoIterator<Item = (usize, usize, W)>,
        W: Into<Trop>,
    {
        let mut m = TropMatrix::new(n);
        for (i, j, w) in triples {
            if i >= n {
                return Err(Error::IndexOutOfBounds { index: i, n });
            }
            if j >= n {
                return Err(Error::IndexOutOfBounds { index: j, n });
            }
            let w = w.into();
            if !w.is_zero() {
                let cur = m.get(i, j);
                m.set(i, j, cur.oplus(w));
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored (non-zero) entries.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Trop {
        match self.rows[i].binary_search_by_key(&j, |&(c, _)| c) {
            Ok(pos) => self.rows[i][pos].1,
            Err(_) => Trop::ZERO,
        }
    }

    /// Sets entry (i, j); storing -inf removes the entry.
    pub fn set(&mut self, i: usize, j: usize, w: Trop) {
        assert!(i < self.n && j < self.n, "index out of bounds");
        match self.rows[i].binary_search_by_key(&j, |&(c, _)| c) {
            Ok(pos) => {
                if w.is_zero() {
                    self.rows[i].remove(pos);
                } else {
                    self.rows[i][pos].1 = w;
                }
            }
            Err(pos) => {
                if !w.is_zero() {
                    self.rows[i].insert(pos, (j, w));
                }
            }
        }
    }

    /// The stored entries of row i, sorted by column.
    pub fn row(&self, i: usize) -> &[(usize, Trop)] {
        &self.rows[i]
    }

    /// Column j as a dense vector.
    pub fn column(&self, j: usize) -> Vec<Trop> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    /// Iterates over stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Trop)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&(j, w)| (i, j, w)))
    }

    /// Max diagonal entry; -inf when the diagonal is empty.
    pub fn trace(&self) -> Trop {
        (0..self.n)
            .map(|i| self.get(i, i))
            .fold(Trop::ZERO, Trop::oplus)
    }

    /// Entrywise otimes by a finite scalar (shifts every stored weight).
    pub fn shifted(&self, delta: Trop) -> TropMatrix {
        assert!(delta.is_finite(), "shift must be finite");
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|&(j, w)| (j, w.otimes(delta))).collect())
            .collect();
        TropMatrix { n: self.n, rows }
    }

    /// Max-plus matrix product.
    pub fn mat_mul(&self, rhs: &TropMatrix) -> Result<TropMatrix, Error> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: rhs.n,
            });
        }
        let n = self.n;
        let mut out = TropMatrix::new(n);
        let mut scratch = vec![f64::NEG_INFINITY; n];
        for i in 0..n {
            let mut touched = false;
            for &(k, aik) in &self.rows[i] {
                let a = aik.value();
                for &(j, bkj) in &rhs.rows[k] {
                    // Stored weights are never -inf, so the raw float sum
                    // cannot produce NaN.
                    let w = a + bkj.value();
                    if w > scratch[j] {
                        scratch[j] = w;
                    }
                    touched = true;
                }
            }
            if touched {
                let row: Vec<(usize, Trop)> = scratch
                    .iter()
                    .enumerate()
                    .filter(|&(_, &w)| w > f64::NEG_INFINITY)
                    .map(|(j, &w)| (j, Trop::new(w)))
                    .collect();
                for &(j, _) in &row {
                    scratch[j] = f64::NEG_INFINITY;
                }
                out.rows[i] = row;
            }
        }
        Ok(out)
    }

    /// Max-plus matrix-vector product. Vector entries may be -inf.
    pub fn mat_vec(&self, u: &[Trop]) -> Result<Vec<Trop>, Error> {
        if u.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: u.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(j, w)| w.otimes(u[j]))
                    .fold(Trop::ZERO, Trop::oplus)
            })
            .collect())
    }

    /// k-th max-plus power by repeated squaring; the 0-th power is the
    /// identity.
    pub fn pow(&self, k: usize) -> TropMatrix {
        let mut result = TropMatrix::identity(self.n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mat_mul(&base).expect("same dimension");
            }
            k >>= 1;
            if k > 0 {
                base = base.mat_mul(&base).expect("same dimension");
            }
        }
        result
    }

    /// Rebuilds a sparse matrix from a dense row-major buffer.
    pub(crate) fn from_dense(n: usize, dense: &[f64]) -> TropMatrix {
        debug_assert_eq!(dense.len(), n * n);
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|j| dense[i * n + j] > f64::NEG_INFINITY)
                    .map(|j| (j, Trop::new(dense[i * n + j])))
                    .collect()
            })
            .collect();
        TropMatrix { n, rows }
    }
}
