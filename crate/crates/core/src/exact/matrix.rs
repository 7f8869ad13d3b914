//! Dense matrices: row reduction and null spaces over a field, and a
//! division-free determinant over any commutative ring.

use super::ring::{Field, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<F>>,
}

impl<F: Ring> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<Vec<F>>) -> Self {
        assert_eq!(data.len(), rows);
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(data: Vec<Vec<F>>) -> Self {
        let cols = data.first().map_or(0, |r| r.len());
        Self::new(data.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![F::zero(); cols]; rows],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i]
    }

    pub fn data(&self) -> &[Vec<F>] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.data[i][j].clone()).collect())
            .collect();
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map<G: Ring>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        }
    }

    /// Submatrix on the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let data = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self.data[i][j].clone()).collect())
            .collect();
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    /// `v^T * self` for a row vector `v`.
    pub fn left_mul(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                v.iter()
                    .zip(&self.data)
                    .fold(F::zero(), |acc, (a, r)| acc.plus(&a.times(&r[j])))
            })
            .collect()
    }

    /// Determinant by Berkowitz's division-free algorithm.
    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return F::one();
        }
        // Characteristic polynomial coefficients of the leading k x k block,
        // built up one row/column at a time.
        let a = &self.data;
        let mut cp: Vec<F> = vec![F::one(), a[0][0].negate()];
        for k in 1..n {
            // Toeplitz column: [1, -a_kk, -R C, -R A C, ...]
            let r: Vec<F> = (0..k).map(|j| a[k][j].clone()).collect();
            let mut c: Vec<F> = (0..k).map(|i| a[i][k].clone()).collect();
            let mut col = vec![F::one(), a[k][k].negate()];
            for _ in 0..k {
                let rc = r
                    .iter()
                    .zip(&c)
                    .fold(F::zero(), |acc, (x, y)| acc.plus(&x.times(y)));
                col.push(rc.negate());
                c = (0..k)
                    .map(|i| (0..k).fold(F::zero(), |acc, j| acc.plus(&a[i][j].times(&c[j]))))
                    .collect();
            }
            // new_cp = T * cp where T is lower-triangular Toeplitz from col.
            let mut next = vec![F::zero(); k + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                let mut acc = F::zero();
                for (j, cj) in cp.iter().enumerate() {
                    if i >= j && i - j < col.len() {
                        acc = acc.plus(&col[i - j].times(cj));
                    }
                }
                *slot = acc;
            }
            cp = next;
        }
        let last = cp[n].clone();
        if n.is_multiple_of(2) {
            last
        } else {
            last.negate()
        }
    }
}

impl<F: Field> Matrix<F> {
    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].inverse().unwrap();
            for x in m[r].iter_mut() {
                *x = x.times(&inv);
            }
            let pivot = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x = x.minus(&f.times(y));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (
            Matrix {
                rows: self.rows,
                cols: self.cols,
                data: m,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{ v : v^T M = 0 }`. Each vector has its first nonzero entry
    /// equal to one; empty when the null space is trivial.
    pub fn left_null_space(&self) -> Vec<Vec<F>> {
        right_kernel(&self.transpose())
    }

    /// Basis of `{ v : M v = 0 }`, normalized like [`Matrix::left_null_space`].
    pub fn kernel(&self) -> Vec<Vec<F>> {
        right_kernel(self)
    }

    /// One solution of `M x = b`, free variables set to zero.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let aug: Vec<Vec<F>> = self
            .data
            .iter()
            .zip(b)
            .map(|(r, x)| {
                let mut r = r.clone();
                r.push(x.clone());
                r
            })
            .collect();
        let (red, piv) = Matrix::new(self.rows, self.cols + 1, aug).rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (i, &c) in piv.iter().enumerate() {
            x[c] = red.data[i][self.cols].clone();
        }
        Some(x)
    }
}

fn right_kernel<F: Field>(m: &Matrix<F>) -> Vec<Vec<F>> {
    let (red, piv) = m.rref();
    let free: Vec<usize> = (0..m.cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); m.cols];
            v[f] = F::one();
            for (i, &p) in piv.iter().enumerate() {
                v[p] = red.data[i][f].negate();
            }
            let lead = v.iter().find(|x| !x.is_zero()).cloned().unwrap();
            let inv = lead.inverse().unwrap();
            v.iter().map(|x| x.times(&inv)).collect()
        })
        .collect()
}
