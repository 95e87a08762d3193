//! Exact dense and sparse linear algebra over GF(p^m).
//!
//! Dense matrices store GF(2) rows bit-packed in 64-bit words, fields of
//! order <= 256 one byte per entry and larger fields two bytes. Sparse
//! matrices are column-major triplet lists with no explicit zeros.
//!
//! Elimination is deterministic everywhere: columns are processed left to
//! right and the pivot within a column is the smallest eligible row index,
//! so ranks, nullspace bases (reduced echelon form) and reductions are
//! identical across runs.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

#[derive(Clone, Debug)]
enum Store {
    /// GF(2), bit-packed rows.
    Bits {
        words_per_row: usize,
        data: Vec<u64>,
    },
    /// Field order <= 256.
    Bytes(Vec<u8>),
    /// Field order <= 2^16.
    Words(Vec<u16>),
}

/// Dense matrix over a finite field.
#[derive(Clone, Debug)]
pub struct DenseMatrix {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    store: Store,
}

impl DenseMatrix {
    pub fn zeros(field: &Arc<Field>, rows: usize, cols: usize) -> Self {
        let store = if field.order() == 2 {
            let wpr = cols.div_ceil(64);
            Store::Bits {
                words_per_row: wpr,
                data: vec![0; wpr * rows],
            }
        } else if field.order() <= 256 {
            Store::Bytes(vec![0; rows * cols])
        } else {
            Store::Words(vec![0; rows * cols])
        };
        DenseMatrix {
            field: field.clone(),
            rows,
            cols,
            store,
        }
    }

    pub fn identity(field: &Arc<Field>, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: &Arc<Field>, cols: usize, rows: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length mismatch");
            for (j, &v) in r.iter().enumerate() {
                if v != 0 {
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        match &self.store {
            Store::Bits {
                words_per_row,
                data,
            } => ((data[i * words_per_row + j / 64] >> (j % 64)) & 1) as Scalar,
            Store::Bytes(d) => d[i * self.cols + j] as Scalar,
            Store::Words(d) => d[i * self.cols + j],
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        match &mut self.store {
            Store::Bits {
                words_per_row,
                data,
            } => {
                let w = &mut data[i * *words_per_row + j / 64];
                if v & 1 == 1 {
                    *w |= 1 << (j % 64);
                } else {
                    *w &= !(1 << (j % 64));
                }
            }
            Store::Bytes(d) => d[i * self.cols + j] = v as u8,
            Store::Words(d) => d[i * self.cols + j] = v,
        }
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    /// dst += c * src (rows).
    fn row_axpy(&mut self, dst: usize, src: usize, c: Scalar) {
        if c == 0 {
            return;
        }
        match &mut self.store {
            Store::Bits {
                words_per_row,
                data,
            } => {
                let wpr = *words_per_row;
                let (a, b) = (src * wpr, dst * wpr);
                for k in 0..wpr {
                    let v = data[a + k];
                    data[b + k] ^= v;
                }
            }
            Store::Bytes(d) => {
                let n = self.cols;
                for j in 0..n {
                    let v = d[src * n + j] as Scalar;
                    if v != 0 {
                        let cur = d[dst * n + j] as Scalar;
                        d[dst * n + j] = self.field.add(cur, self.field.mul(c, v)) as u8;
                    }
                }
            }
            Store::Words(d) => {
                let n = self.cols;
                for j in 0..n {
                    let v = d[src * n + j];
                    if v != 0 {
                        let cur = d[dst * n + j];
                        d[dst * n + j] = self.field.add(cur, self.field.mul(c, v));
                    }
                }
            }
        }
    }

    fn row_scale(&mut self, i: usize, c: Scalar) {
        if c == 1 {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(i, j);
            if v != 0 {
                self.set(i, j, self.field.mul(v, c));
            }
        }
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        match &mut self.store {
            Store::Bits {
                words_per_row,
                data,
            } => {
                for k in 0..*words_per_row {
                    data.swap(a * *words_per_row + k, b * *words_per_row + k);
                }
            }
            Store::Bytes(d) => {
                let n = self.cols;
                for j in 0..n {
                    d.swap(a * n + j, b * n + j);
                }
            }
            Store::Words(d) => {
                let n = self.cols;
                for j in 0..n {
                    d.swap(a * n + j, b * n + j);
                }
            }
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if v != 0 {
                    t.set(j, i, v);
                }
            }
        }
        t
    }

    /// In-place reduction to reduced row echelon form.
    /// Returns the pivot columns in order.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            // smallest row index with nonzero entry in this column
            let mut piv = None;
            for i in r..self.rows {
                if self.get(i, col) != 0 {
                    piv = Some(i);
                    break;
                }
            }
            let Some(piv) = piv else { continue };
            self.row_swap(r, piv);
            let lead = self.get(r, col);
            if lead != 1 {
                self.row_scale(r, self.field.inv(lead));
            }
            for i in 0..self.rows {
                if i != r {
                    let c = self.get(i, col);
                    if c != 0 {
                        let neg = self.field.neg(c);
                        self.row_axpy(i, r, neg);
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right nullspace, in reduced echelon form (canonical).
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let f = self.field.clone();
        let mut m = self.clone();
        let pivots = m.rref();
        let rank = pivots.len();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0 as Scalar; self.cols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate().take(rank) {
                let c = m.get(r, fc);
                if c != 0 {
                    v[pc] = f.neg(c);
                }
            }
            basis.push(v);
        }
        canonical_basis(&f, self.cols, basis)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        let mut out = vec![0 as Scalar; self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0;
            for (j, &x) in v.iter().enumerate() {
                if x != 0 {
                    acc = f.add(acc, f.mul(self.get(i, j), x));
                }
            }
            *o = acc;
        }
        out
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let f = &self.field;
        let mut out = DenseMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let cur = out.get(i, j);
                        out.set(i, j, f.add(cur, f.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut acc = 0;
        for i in 0..self.rows {
            acc = self.field.add(acc, self.get(i, i));
        }
        acc
    }

    /// Characteristic polynomial via Hessenberg reduction, little-endian,
    /// monic of degree n.
    pub fn char_poly(&self) -> Vec<Scalar> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let f = &self.field;
        if n == 0 {
            return vec![1];
        }
        // Copy to a mutable generic grid.
        let mut h: Vec<Vec<Scalar>> = (0..n).map(|i| self.row(i)).collect();
        // Reduce to upper Hessenberg by a similarity transform.
        for c in 0..n.saturating_sub(2) {
            // find pivot in column c below row c+1
            let mut piv = None;
            for r in c + 1..n {
                if h[r][c] != 0 {
                    piv = Some(r);
                    break;
                }
            }
            let Some(piv) = piv else { continue };
            if piv != c + 1 {
                h.swap(piv, c + 1);
                for row in h.iter_mut() {
                    row.swap(piv, c + 1);
                }
            }
            let inv = f.inv(h[c + 1][c]);
            for r in c + 2..n {
                let factor = f.mul(h[r][c], inv);
                if factor == 0 {
                    continue;
                }
                // row r -= factor * row (c+1)
                for j in 0..n {
                    let v = f.mul(factor, h[c + 1][j]);
                    h[r][j] = f.sub(h[r][j], v);
                }
                // col (c+1) += factor * col r   (inverse transform)
                for i in 0..n {
                    let v = f.mul(factor, h[i][r]);
                    h[i][c + 1] = f.add(h[i][c + 1], v);
                }
            }
        }
        // char polys of leading principal Hessenberg minors.
        // p_0 = 1; p_k(t) = (t - h[k-1][k-1]) p_{k-1}
        //                   - sum_{i=1}^{k-1} h[k-1-i][k-1] (prod_{j=1}^{i} h[k-j][k-j-1]) p_{k-1-i}
        let mut polys: Vec<Vec<Scalar>> = vec![vec![1]];
        for k in 1..=n {
            let mut p: Vec<Scalar> = vec![0; k + 1];
            // (t - h[k-1][k-1]) * p_{k-1}
            let prev = &polys[k - 1];
            for (i, &c) in prev.iter().enumerate() {
                p[i + 1] = f.add(p[i + 1], c);
                p[i] = f.sub(p[i], f.mul(h[k - 1][k - 1], c));
            }
            let mut sub_prod: Scalar = 1;
            for i in 1..k {
                sub_prod = f.mul(sub_prod, h[k - i][k - i - 1]);
                if sub_prod == 0 {
                    break;
                }
                let coeff = f.mul(h[k - 1 - i][k - 1], sub_prod);
                if coeff == 0 {
                    continue;
                }
                for (j, &c) in polys[k - 1 - i].iter().enumerate() {
                    p[j] = f.sub(p[j], f.mul(coeff, c));
                }
            }
            polys.push(p);
        }
        polys.pop().unwrap()
    }
}

/// Column-major sparse matrix; each column is a sorted (row, value) list
/// with no explicit zeros.
#[derive(Clone, Debug)]
pub struct SparseMatrix {
    field: Arc<Field>,
    rows: usize,
    cols: Vec<Vec<(u32, Scalar)>>,
}

impl SparseMatrix {
    pub fn new(field: &Arc<Field>, rows: usize, cols: usize) -> Self {
        SparseMatrix {
            field: field.clone(),
            rows,
            cols: vec![Vec::new(); cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// Accumulate into (row, col); used by matrix builders.
    pub fn add_entry(&mut self, row: usize, col: usize, v: Scalar) {
        if v == 0 {
            return;
        }
        let col_vec = &mut self.cols[col];
        match col_vec.binary_search_by_key(&(row as u32), |e| e.0) {
            Ok(pos) => {
                let nv = self.field.add(col_vec[pos].1, v);
                if nv == 0 {
                    col_vec.remove(pos);
                } else {
                    col_vec[pos].1 = nv;
                }
            }
            Err(pos) => col_vec.insert(pos, (row as u32, v)),
        }
    }

    pub fn column(&self, c: usize) -> &[(u32, Scalar)] {
        &self.cols[c]
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(&self.field, self.rows, self.cols.len());
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                d.set(i as usize, j, v);
            }
        }
        d
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::new(&self.field, self.cols.len(), self.rows);
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                t.cols[i as usize].push((j as u32, v));
            }
        }
        for col in t.cols.iter_mut() {
            col.sort_unstable_by_key(|e| e.0);
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols.len());
        let f = &self.field;
        let mut out = vec![0 as Scalar; self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            let x = v[j];
            if x == 0 {
                continue;
            }
            for &(i, a) in col {
                out[i as usize] = f.add(out[i as usize], f.mul(a, x));
            }
        }
        out
    }

    /// Rank: dense elimination below the fallback size, sparse column
    /// elimination above it. Both pivots are deterministic and agree.
    pub fn rank(&self) -> usize {
        if self.dense_fallback() {
            self.to_dense().rank()
        } else {
            self.eliminate(false).0
        }
    }

    /// Right nullspace basis in reduced echelon form (canonical, so the
    /// dense and sparse paths produce identical bases).
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        if self.dense_fallback() {
            self.to_dense().nullspace()
        } else {
            self.eliminate(true).1
        }
    }

    fn dense_fallback(&self) -> bool {
        (self.rows as u64) * (self.cols.len() as u64) < 1_000_000
    }

    /// Sparse Gaussian elimination, columns left to right, pivot = smallest
    /// remaining row index. When `track` is set, combination vectors of
    /// vanishing columns are collected as a nullspace basis.
    fn eliminate(&self, track: bool) -> (usize, Vec<Vec<Scalar>>) {
        let f = &self.field;
        let ncols = self.cols.len();
        // pivot_of_row[r] = Some(index into pivot storage)
        let mut pivot_of_row: Vec<Option<u32>> = vec![None; self.rows];
        // reduced pivot columns, each sorted by row, leading row first
        let mut piv_cols: Vec<Vec<(u32, Scalar)>> = Vec::new();
        let mut piv_combos: Vec<Vec<(u32, Scalar)>> = Vec::new();
        let mut null_basis: Vec<Vec<Scalar>> = Vec::new();

        for j in 0..ncols {
            // work = current column as a dense-ish map row -> value
            let mut work: Vec<(u32, Scalar)> = self.cols[j].clone();
            let mut combo: Vec<(u32, Scalar)> = vec![(j as u32, 1)];
            // Reduce: repeatedly take the smallest row with a pivot and cancel.
            loop {
                // find smallest nonzero row that has a pivot
                let mut hit: Option<(usize, u32, Scalar)> = None;
                for &(r, v) in work.iter() {
                    if let Some(p) = pivot_of_row[r as usize] {
                        hit = Some((p as usize, r, v));
                        break;
                    }
                }
                let Some((p, _r, v)) = hit else { break };
                // work -= v * piv_cols[p]  (pivot normalized to leading 1)
                work = sparse_axpy(f, &work, &piv_cols[p], f.neg(v));
                if track {
                    combo = sparse_axpy(f, &combo, &piv_combos[p], f.neg(v));
                }
            }
            if work.is_empty() {
                if track {
                    let mut v = vec![0 as Scalar; ncols];
                    for &(c, x) in &combo {
                        v[c as usize] = x;
                    }
                    null_basis.push(v);
                }
            } else {
                // normalize to leading coefficient 1 on the smallest row
                let (lead_row, lead_val) = work[0];
                let inv = f.inv(lead_val);
                if inv != 1 {
                    for e in work.iter_mut() {
                        e.1 = f.mul(e.1, inv);
                    }
                    if track {
                        for e in combo.iter_mut() {
                            e.1 = f.mul(e.1, inv);
                        }
                    }
                }
                pivot_of_row[lead_row as usize] = Some(piv_cols.len() as u32);
                piv_cols.push(work);
                piv_combos.push(if track { combo } else { Vec::new() });
            }
        }
        let rank = piv_cols.len();
        if track {
            (rank, canonical_basis(f, ncols, null_basis))
        } else {
            (rank, Vec::new())
        }
    }
}

/// Reduced echelon form of a set of independent vectors.
fn canonical_basis(f: &Arc<Field>, ambient: usize, vecs: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    let n = vecs.len();
    let mut m = DenseMatrix::from_rows(f, ambient, &vecs);
    m.rref();
    (0..n).map(|i| m.row(i)).collect()
}

/// a + c*b for sorted sparse vectors.
fn sparse_axpy(
    f: &Arc<Field>,
    a: &[(u32, Scalar)],
    b: &[(u32, Scalar)],
    c: Scalar,
) -> Vec<(u32, Scalar)> {
    if c == 0 {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = f.mul(c, b[j].1);
            if v != 0 {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = f.add(a[i].1, f.mul(c, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// A subspace of k^n held as a reduced-echelon basis; supports membership
/// tests, reduction modulo the subspace and coordinates in a tracked basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: Arc<Field>,
    ambient: usize,
    /// reduced echelon rows, pivot columns strictly increasing
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn empty(field: &Arc<Field>, ambient: usize) -> Self {
        Subspace {
            field: field.clone(),
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_vectors(field: &Arc<Field>, ambient: usize, vecs: &[Vec<Scalar>]) -> Self {
        let mut s = Self::empty(field, ambient);
        for v in vecs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    /// Reduce v modulo the subspace; returns the remainder.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient, "ambient dimension mismatch");
        let f = &self.field;
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = w[p];
            if c != 0 {
                let nc = f.neg(c);
                for (x, &r) in w.iter_mut().zip(row.iter()) {
                    if r != 0 {
                        *x = f.add(*x, f.mul(nc, r));
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_all(&self, vecs: &[Vec<Scalar>]) -> bool {
        vecs.iter().all(|v| self.contains(v))
    }

    /// Insert a vector; returns true if it enlarged the subspace.
    /// Keeps the basis in reduced echelon form.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let f = self.field.clone();
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[p]);
        if inv != 1 {
            for x in w.iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        // clear column p in existing rows
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                let nc = f.neg(c);
                for (x, &r) in row.iter_mut().zip(w.iter()) {
                    if r != 0 {
                        *x = f.add(*x, f.mul(nc, r));
                    }
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, w);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn equals(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }
}

/// Is v in the span of the given basis vectors? Errors on dimension mismatch.
pub fn in_span(field: &Arc<Field>, v: &[Scalar], basis: &[Vec<Scalar>]) -> Result<bool> {
    for b in basis {
        if b.len() != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} vs basis vector length {}",
                v.len(),
                b.len()
            )));
        }
    }
    let s = Subspace::from_vectors(field, v.len(), basis);
    Ok(s.contains(v))
}
