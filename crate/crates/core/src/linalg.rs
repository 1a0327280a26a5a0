//! Dense matrices over a finite field, row reduction, kernels and spinning.
//!
//! Vectors are rows and matrices act on the right (`v -> v * A`), matching the
//! right-module convention used throughout the crate.

use crate::finite_field::{Elem, FiniteField};

/// `y += c * x`.
#[inline]
pub(crate) fn axpy(f: &FiniteField, y: &mut [Elem], c: Elem, x: &[Elem]) {
    if c == 0 {
        return;
    }
    if c == 1 {
        for (yi, &xi) in y.iter_mut().zip(x) {
            if xi != 0 {
                *yi = f.add(*yi, xi);
            }
        }
        return;
    }
    let lc = f.log_of(c);
    for (yi, &xi) in y.iter_mut().zip(x) {
        if xi != 0 {
            *yi = f.add(*yi, f.mul_by_log(lc, xi));
        }
    }
}

#[inline]
pub(crate) fn scale_in_place(f: &FiniteField, y: &mut [Elem], c: Elem) {
    if c == 1 {
        return;
    }
    for yi in y.iter_mut() {
        *yi = f.mul(*yi, c);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        assert_eq!(rows * cols, data.len());
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<Elem>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn scalar(n: usize, c: Elem) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == if i == j { 1 } else { 0 }))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn map(&self, g: impl Fn(Elem) -> Elem) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| g(x)).collect(),
        }
    }

    pub fn mul(&self, f: &FiniteField, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let (lo, hi) = (i * other.cols, (i + 1) * other.cols);
            for k in 0..self.cols {
                let c = self.data[i * self.cols + k];
                if c != 0 {
                    axpy(f, &mut out.data[lo..hi], c, other.row(k));
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, f: &FiniteField, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0; self.cols];
        for (k, &c) in v.iter().enumerate() {
            axpy(f, &mut out, c, self.row(k));
        }
        out
    }

    pub fn add(&self, f: &FiniteField, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, f: &FiniteField, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, f: &FiniteField, c: Elem) -> Matrix {
        self.map(|x| f.mul(x, c))
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, f: &FiniteField, c: Elem, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        axpy(f, &mut self.data, c, &other.data);
    }

    pub fn trace(&self, f: &FiniteField) -> Elem {
        (0..self.rows.min(self.cols)).fold(0, |acc, i| f.add(acc, self.get(i, i)))
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut out = Matrix::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            out.row_mut(i - r0).copy_from_slice(&self.row(i)[c0..c1]);
        }
        out
    }

    /// Vertical concatenation.
    pub fn stack(cols: usize, parts: &[&Matrix]) -> Matrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for m in parts {
            assert_eq!(m.cols, cols);
            data.extend_from_slice(&m.data);
            rows += m.rows;
        }
        Matrix { rows, cols, data }
    }

    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                out.row_mut(r + i)[c..c + b.cols].copy_from_slice(b.row(i));
            }
            r += b.rows;
            c += b.cols;
        }
        out
    }

    pub fn rank(&self, f: &FiniteField) -> usize {
        let mut space = EchelonSpace::new(self.cols);
        for i in 0..self.rows {
            space.insert(f, self.row(i).to_vec());
        }
        space.len()
    }

    pub fn is_invertible(&self, f: &FiniteField) -> bool {
        self.is_square() && self.rank(f) == self.rows
    }

    pub fn inverse(&self, f: &FiniteField) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| a.get(r, col) != 0)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let c = f.inv(a.get(col, col));
            scale_in_place(f, a.row_mut(col), c);
            scale_in_place(f, inv.row_mut(col), c);
            let prow = a.row(col).to_vec();
            let pinv = inv.row(col).to_vec();
            for r in 0..n {
                if r != col {
                    let c = a.get(r, col);
                    if c != 0 {
                        let nc = f.neg(c);
                        axpy(f, a.row_mut(r), nc, &prow);
                        axpy(f, inv.row_mut(r), nc, &pinv);
                    }
                }
            }
        }
        Some(inv)
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    /// Basis (as rows, in semi-echelon form) of `{v : v * self = 0}`.
    pub fn left_kernel(&self, f: &FiniteField) -> Matrix {
        let m = self.rows;
        let n = self.cols;
        let width = n + m;
        let mut aug: Vec<Vec<Elem>> = (0..m)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.resize(width, 0);
                r[n + i] = 1;
                r
            })
            .collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..m).find(|&r| aug[r][col] != 0) else {
                continue;
            };
            aug.swap(rank, pivot);
            let c = f.inv(aug[rank][col]);
            scale_in_place(f, &mut aug[rank], c);
            let prow = aug[rank].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r != rank && row[col] != 0 {
                    let nc = f.neg(row[col]);
                    axpy(f, row, nc, &prow);
                }
            }
            rank += 1;
        }
        let mut space = EchelonSpace::new(m);
        for row in &aug[rank..] {
            space.insert(f, row[n..].to_vec());
        }
        space.to_matrix()
    }

    /// Basis of `{v : self * v^T = 0}` as rows.
    pub fn right_kernel(&self, f: &FiniteField) -> Matrix {
        self.transpose().left_kernel(f)
    }

    pub fn pow(&self, f: &FiniteField, mut e: u64) -> Matrix {
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(f, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(f, &base);
            }
        }
        result
    }

    /// Conjugate `basis * self * basis^-1` for an invertible change of basis.
    pub fn conjugate_by(&self, f: &FiniteField, basis: &Matrix, basis_inv: &Matrix) -> Matrix {
        basis.mul(f, self).mul(f, basis_inv)
    }
}

/// A subspace held as rows in semi-echelon form: row `i` has a 1 at
/// `pivots[i]` and every later row is zero there.
#[derive(Clone, Debug)]
pub struct EchelonSpace {
    ambient: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl EchelonSpace {
    pub fn new(ambient: usize) -> Self {
        EchelonSpace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_matrix(f: &FiniteField, m: &Matrix) -> Self {
        let mut s = EchelonSpace::new(m.cols());
        for i in 0..m.rows() {
            s.insert(f, m.row(i).to_vec());
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row_vecs(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    /// Reduces `v` in place against the basis; afterwards `v` vanishes on every pivot.
    pub fn reduce(&self, f: &FiniteField, v: &mut [Elem]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                axpy(f, v, f.neg(c), row);
            }
        }
    }

    /// Adds `v` to the space; returns false if it was already contained.
    pub fn insert(&mut self, f: &FiniteField, mut v: Vec<Elem>) -> bool {
        self.reduce(f, &mut v);
        match v.iter().position(|&x| x != 0) {
            None => false,
            Some(p) => {
                let c = f.inv(v[p]);
                scale_in_place(f, &mut v, c);
                self.rows.push(v);
                self.pivots.push(p);
                true
            }
        }
    }

    pub fn contains(&self, f: &FiniteField, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(f, &mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Coefficients of `v` with respect to the stored rows, if `v` lies in the space.
    pub fn coords(&self, f: &FiniteField, v: &[Elem]) -> Option<Vec<Elem>> {
        let mut w = v.to_vec();
        let mut out = vec![0; self.rows.len()];
        for (i, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            let c = w[p];
            if c != 0 {
                out[i] = c;
                axpy(f, &mut w, f.neg(c), row);
            }
        }
        if w.iter().all(|&x| x == 0) {
            Some(out)
        } else {
            None
        }
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(self.ambient, &self.rows)
    }

    /// Unit vectors at the non-pivot columns; together with the rows they form a basis.
    pub fn complement(&self) -> Matrix {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.ambient).filter(|&c| !is_pivot[c]).collect();
        let mut m = Matrix::zeros(free.len(), self.ambient);
        for (i, &c) in free.iter().enumerate() {
            m.set(i, c, 1);
        }
        m
    }

    pub fn non_pivot_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }
}

/// Matrices of `gens` acting on an invariant subspace, in the basis of its stored rows.
pub fn act_on_subspace(f: &FiniteField, gens: &[Matrix], space: &EchelonSpace) -> Vec<Matrix> {
    let k = space.len();
    gens.iter()
        .map(|a| {
            let rows: Vec<Vec<Elem>> = space
                .row_vecs()
                .iter()
                .map(|s| space.coords(f, &a.vec_mul(f, s)).expect("subspace is not invariant"))
                .collect();
            Matrix::from_rows(k, &rows)
        })
        .collect()
}

/// Matrices of `gens` acting on the quotient by an invariant subspace, in the
/// basis of unit vectors at its non-pivot columns.
pub fn act_on_quotient(f: &FiniteField, gens: &[Matrix], space: &EchelonSpace) -> Vec<Matrix> {
    let free = space.non_pivot_columns();
    let k = free.len();
    gens.iter()
        .map(|a| {
            let rows: Vec<Vec<Elem>> = free
                .iter()
                .map(|&c| {
                    let mut w = a.row(c).to_vec();
                    space.reduce(f, &mut w);
                    free.iter().map(|&j| w[j]).collect()
                })
                .collect();
            Matrix::from_rows(k, &rows)
        })
        .collect()
}

/// The smallest subspace containing `seeds` and invariant under every matrix in `gens`.
pub fn spin(f: &FiniteField, seeds: &[Vec<Elem>], gens: &[Matrix]) -> EchelonSpace {
    let dim = gens
        .first()
        .map_or_else(|| seeds.first().map_or(0, |s| s.len()), |g| g.rows());
    let mut space = EchelonSpace::new(dim);
    let mut queue = Vec::new();
    for s in seeds {
        if space.insert(f, s.clone()) {
            queue.push(space.len() - 1);
        }
    }
    let mut next = 0;
    while next < queue.len() && !space.is_full() {
        let v = space.rows[queue[next]].clone();
        next += 1;
        for g in gens {
            let w = g.vec_mul(f, &v);
            if space.insert(f, w) {
                queue.push(space.len() - 1);
            }
        }
    }
    space
}
