//! Dense exact linear algebra: incremental reduced row echelon forms, spinning
//! and small matrix utilities over any [`Field`].

use sha2::{Digest, Sha256};

use crate::coeff::Field;
use crate::error::{check_cap, Result};

/// A subspace of `F^n` kept in reduced row echelon form.
///
/// With tracking enabled every stored row remembers its expression as a
/// combination of the vectors passed to [`Echelon::insert`], which lets
/// [`Echelon::express`] write a member of the span in terms of the inputs.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    ncols: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
    pivot_row: Vec<Option<usize>>,
    track: Option<Vec<Vec<F::Elem>>>,
    inserted: usize,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, ncols: usize) -> Self {
        Echelon { field, ncols, rows: Vec::new(), pivots: Vec::new(), pivot_row: vec![None; ncols], track: None, inserted: 0 }
    }

    pub fn with_tracking(field: F, ncols: usize) -> Self {
        let mut e = Self::new(field, ncols);
        e.track = Some(Vec::new());
        e
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn ncols(&self) -> usize {
        self.ncols
    }
    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Residual of `v` after clearing every pivot column, plus the multiples
    /// of each stored row that were subtracted.
    fn reduce_inner(&self, v: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
        let f = &self.field;
        let mut r = v.to_vec();
        let mut coeffs = vec![f.zero(); self.rows.len()];
        for (ri, (&pc, row)) in self.pivots.iter().zip(&self.rows).enumerate() {
            let c = r[pc].clone();
            if f.is_zero(&c) {
                continue;
            }
            for (x, y) in r.iter_mut().zip(row) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
            coeffs[ri] = c;
        }
        (r, coeffs)
    }

    /// Canonical representative of `v` modulo the subspace.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        self.reduce_inner(v).0
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let f = &self.field;
        self.reduce(v).iter().all(|x| f.is_zero(x))
    }

    /// Adds `v` to the spanning set. Returns `true` when the dimension grew.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.ncols, "vector length mismatch");
        let f = self.field.clone();
        let tag = self.inserted;
        self.inserted += 1;
        if let Some(track) = self.track.as_mut() {
            for t in track.iter_mut() {
                t.push(f.zero());
            }
        }
        let (mut r, coeffs) = self.reduce_inner(v);
        let Some(pc) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[pc]);
        for x in r.iter_mut() {
            *x = f.mul(x, &inv);
        }
        let mut new_track = None;
        if let Some(track) = self.track.as_ref() {
            let mut t = vec![f.zero(); self.inserted];
            t[tag] = f.one();
            for (ri, c) in coeffs.iter().enumerate() {
                if f.is_zero(c) {
                    continue;
                }
                for (x, y) in t.iter_mut().zip(&track[ri]) {
                    *x = f.sub(x, &f.mul(c, y));
                }
            }
            for x in t.iter_mut() {
                *x = f.mul(x, &inv);
            }
            new_track = Some(t);
        }
        // Keep the form fully reduced: clear the new pivot column elsewhere.
        for ri in 0..self.rows.len() {
            let c = self.rows[ri][pc].clone();
            if f.is_zero(&c) {
                continue;
            }
            for (x, y) in self.rows[ri].iter_mut().zip(&r) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
            if let (Some(track), Some(nt)) = (self.track.as_mut(), new_track.as_ref()) {
                for (x, y) in track[ri].iter_mut().zip(nt) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
        }
        // Insert keeping pivots sorted.
        let pos = self.pivots.partition_point(|&p| p < pc);
        self.rows.insert(pos, r);
        self.pivots.insert(pos, pc);
        if let (Some(track), Some(nt)) = (self.track.as_mut(), new_track) {
            track.insert(pos, nt);
        }
        for p in self.pivot_row.iter_mut() {
            *p = None;
        }
        for (i, &p) in self.pivots.iter().enumerate() {
            self.pivot_row[p] = Some(i);
        }
        true
    }

    /// Coordinates of `v` in the basis formed by the stored rows, if `v`
    /// lies in the subspace.
    pub fn row_coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let f = &self.field;
        let (r, coeffs) = self.reduce_inner(v);
        r.iter().all(|x| f.is_zero(x)).then_some(coeffs)
    }

    /// Expresses `v` as a combination of the inserted vectors (tracking only).
    pub fn express(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let track = self.track.as_ref()?;
        let f = &self.field;
        let coeffs = self.row_coordinates(v)?;
        let mut out = vec![f.zero(); self.inserted];
        for (c, t) in coeffs.iter().zip(track) {
            if f.is_zero(c) {
                continue;
            }
            for (x, y) in out.iter_mut().zip(t) {
                *x = f.add(x, &f.mul(c, y));
            }
        }
        Some(out)
    }

    /// `true` when both describe the same subspace.
    pub fn same_space(&self, other: &Echelon<F>) -> bool {
        self.ncols == other.ncols && self.pivots == other.pivots && self.rows == other.rows
    }
}

/// Smallest subspace containing `seeds` and stable under the linear maps
/// `act(0, .)`, ..., `act(ngens - 1, .)`.
pub fn spin<F, A>(field: &F, ncols: usize, seeds: &[Vec<F::Elem>], ngens: usize, act: A, cap: usize) -> Result<Echelon<F>>
where
    F: Field,
    A: Fn(usize, &[F::Elem]) -> Vec<F::Elem>,
{
    let mut ech = Echelon::new(field.clone(), ncols);
    let mut frontier: Vec<Vec<F::Elem>> = Vec::new();
    for s in seeds {
        if ech.insert(s) {
            frontier.push(s.clone());
        }
    }
    let mut idx = 0;
    while idx < frontier.len() {
        let v = frontier[idx].clone();
        idx += 1;
        for g in 0..ngens {
            let w = act(g, &v);
            if ech.insert(&w) {
                check_cap("spin dimension", ech.dim(), cap)?;
                frontier.push(w);
            }
        }
    }
    Ok(ech)
}

/// A dense matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.data[i * columns.len() + j] = x.clone();
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: F::Elem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul_vec(&self, field: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        (0..self.rows)
            .map(|i| {
                let mut acc = field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !field.is_zero(a) && !field.is_zero(b) {
                        acc = field.add(&acc, &field.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, field: &F, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if field.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !field.is_zero(b) {
                        let idx = i * other.cols + j;
                        out.data[idx] = field.add(&out.data[idx], &field.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix<F> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn add_scaled_identity(&self, field: &F, lambda: &F::Elem) -> Matrix<F> {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let idx = i * self.cols + i;
            m.data[idx] = field.add(&m.data[idx], lambda);
        }
        m
    }

    pub fn add(&self, field: &F, other: &Matrix<F>) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| field.add(a, b)).collect(),
        }
    }

    pub fn scale(&self, field: &F, c: &F::Elem) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| field.mul(a, c)).collect() }
    }

    pub fn rank(&self, field: &F) -> usize {
        let mut e = Echelon::new(field.clone(), self.cols);
        for i in 0..self.rows {
            e.insert(self.row(i));
        }
        e.dim()
    }

    pub fn is_invertible(&self, field: &F) -> bool {
        self.rows == self.cols && self.rank(field) == self.rows
    }

    /// Basis of `{x : M x = 0}`.
    pub fn nullspace(&self, field: &F) -> Vec<Vec<F::Elem>> {
        let mut e = Echelon::new(field.clone(), self.cols);
        for i in 0..self.rows {
            e.insert(self.row(i));
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !e.is_pivot(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![field.zero(); self.cols];
                x[fc] = field.one();
                for (row, &pc) in e.rows().iter().zip(e.pivots()) {
                    x[pc] = field.neg(&row[fc]);
                }
                x
            })
            .collect()
    }

    /// Hex SHA-256 over the dimensions and rendered entries.
    pub fn digest(&self, field: &F) -> String {
        let mut h = Sha256::new();
        h.update(format!("{}x{}:", self.rows, self.cols).as_bytes());
        for x in &self.data {
            h.update(field.render(x).as_bytes());
            h.update(b",");
        }
        hex::encode(h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{PrimeField, Rationals};

    #[test]
    fn echelon_tracks_combinations() {
        let f = PrimeField::new(5).unwrap();
        let mut e = Echelon::with_tracking(f, 3);
        assert!(e.insert(&[1, 2, 0]));
        assert!(e.insert(&[0, 1, 1]));
        assert!(!e.insert(&[1, 3, 1]));
        let v = vec![2, 0, 2];
        // 2*(1,2,0) + ... solve: a(1,2,0)+b(0,1,1) = (2,0,2) -> a=2, b=2, 2a+b = 6 = 1 mod 5 != 0
        assert!(!e.contains(&v));
        let w = vec![3, 1, 0];
        // a=3, 2a+b=1 -> b = 0, c = b = 0
        let c = e.express(&w).unwrap();
        let recon: Vec<u32> = (0..3).map(|k| (c[0] * [1, 2, 0][k] + c[1] * [0, 1, 1][k] + c[2] * [1, 3, 1][k]) % 5).collect();
        assert_eq!(recon, w);
    }

    #[test]
    fn nullspace_over_q() {
        let q = Rationals;
        let m = Matrix::<Rationals>::from_rows(vec![
            vec![q.from_i64(1), q.from_i64(2), q.from_i64(3)],
            vec![q.from_i64(2), q.from_i64(4), q.from_i64(6)],
        ]);
        let ns = m.nullspace(&q);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&q, &v).iter().all(|x| q.is_zero(x)));
        }
    }

    #[test]
    fn spin_permutation_cycle() {
        let f = PrimeField::new(3).unwrap();
        let cyc = |_: usize, v: &[u32]| -> Vec<u32> { vec![v[2], v[0], v[1]] };
        let s = spin(&f, 3, &[vec![1, 0, 0]], 1, cyc, 100).unwrap();
        assert_eq!(s.dim(), 3);
        let s = spin(&f, 3, &[vec![1, 1, 1]], 1, cyc, 100).unwrap();
        assert_eq!(s.dim(), 1);
        let s = spin(&f, 3, &[vec![0, 0, 0]], 1, cyc, 100).unwrap();
        assert_eq!(s.dim(), 0);
    }
}
