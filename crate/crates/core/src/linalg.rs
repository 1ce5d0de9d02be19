//! Exact linear algebra over a [`Field`]: sparse vectors, row-stored matrices,
//! reduced row echelon form, kernels, solving and inversion.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(i, c)| (i, c)))
            .finish()
    }
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec {
            entries: Vec::new(),
        }
    }

    /// Builds from unsorted, possibly repeated entries; repeated indices are summed.
    pub fn from_entries(mut entries: Vec<(usize, Scalar)>) -> Self {
        entries.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(entries.len());
        for (i, c) in entries {
            match out.last_mut() {
                Some((j, d)) if *j == i => *d = &*d + &c,
                _ => out.push((i, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        SparseVec { entries: out }
    }

    pub fn unit(i: usize, field: &Field) -> Self {
        SparseVec {
            entries: vec![(i, field.one())],
        }
    }

    pub fn single(i: usize, c: Scalar) -> Self {
        if c.is_zero() {
            SparseVec::new()
        } else {
            SparseVec {
                entries: vec![(i, c)],
            }
        }
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, n: usize, field: &Field) -> Vec<Scalar> {
        let mut v = vec![field.zero(); n];
        for (i, c) in &self.entries {
            v[*i] = c.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn coeff(&self, i: usize, field: &Field) -> Scalar {
        self.get(i).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn first(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, c)| (*i, c))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, x)| (*i, -x)).collect(),
        }
    }

    /// self + c * other
    pub fn add_scaled(&self, other: &SparseVec, c: &Scalar) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        let (x, y) = (&self.entries, &other.entries);
        while a < x.len() || b < y.len() {
            if b == y.len() || (a < x.len() && x[a].0 < y[b].0) {
                out.push(x[a].clone());
                a += 1;
            } else if a == x.len() || y[b].0 < x[a].0 {
                out.push((y[b].0, &y[b].1 * c));
                b += 1;
            } else {
                let s = &x[a].1 + &(&y[b].1 * c);
                if !s.is_zero() {
                    out.push((x[a].0, s));
                }
                a += 1;
                b += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        match other.entries.first() {
            None => self.clone(),
            Some((_, c)) => self.add_scaled(other, &c.field().one()),
        }
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        match other.entries.first() {
            None => self.clone(),
            Some((_, c)) => self.add_scaled(other, &-c.field().one()),
        }
    }

    /// Sum of c_i * v_i.
    pub fn linear_combination<'a>(terms: impl IntoIterator<Item = (&'a Scalar, &'a SparseVec)>) -> SparseVec {
        let mut all = Vec::new();
        for (c, v) in terms {
            if c.is_zero() {
                continue;
            }
            for (i, x) in &v.entries {
                all.push((*i, x * c));
            }
        }
        SparseVec::from_entries(all)
    }

    /// Pairing with a dense covector.
    pub fn dot_dense(&self, w: &[Scalar], field: &Field) -> Scalar {
        let mut acc = field.zero();
        for (i, c) in &self.entries {
            if !w[*i].is_zero() {
                acc = &acc + &(c * &w[*i]);
            }
        }
        acc
    }

    pub fn dot(&self, other: &SparseVec, field: &Field) -> Scalar {
        let mut acc = field.zero();
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (i, j) = (self.entries[a].0, other.entries[b].0);
            if i == j {
                acc = &acc + &(&self.entries[a].1 * &other.entries[b].1);
                a += 1;
                b += 1;
            } else if i < j {
                a += 1;
            } else {
                b += 1;
            }
        }
        acc
    }

    /// Rescales so the first nonzero coordinate is 1.
    pub fn normalized(&self) -> SparseVec {
        match self.entries.first() {
            None => SparseVec::new(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading entry")),
        }
    }

    /// Applies an index map, summing collisions.
    pub fn reindex(&self, f: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec::from_entries(self.entries.iter().map(|(i, c)| (f(*i), c.clone())).collect())
    }
}

/// Row-stored sparse matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.nrows(), self.ncols, self.field)?;
        for r in &self.rows {
            let d: Vec<String> = r
                .to_dense(self.ncols, &self.field)
                .iter()
                .map(|c| c.to_string())
                .collect();
            writeln!(f, "  [{}]", d.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, nrows: usize, ncols: usize) -> Self {
        Matrix {
            field: field.clone(),
            ncols,
            rows: vec![SparseVec::new(); nrows],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        Matrix {
            field: field.clone(),
            ncols: n,
            rows: (0..n).map(|i| SparseVec::unit(i, field)).collect(),
        }
    }

    pub fn from_rows(field: &Field, ncols: usize, rows: Vec<SparseVec>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.max_index().is_some_and(|m| m >= ncols)) {
            return Err(Error::dim(format!(
                "row entry at column {} exceeds {ncols} columns",
                r.max_index().unwrap()
            )));
        }
        Ok(Matrix {
            field: field.clone(),
            ncols,
            rows,
        })
    }

    pub fn from_dense(field: &Field, rows: &[Vec<Scalar>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::dim("ragged dense matrix"));
        }
        Ok(Matrix {
            field: field.clone(),
            ncols,
            rows: rows.iter().map(|r| SparseVec::from_dense(r)).collect(),
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_int(x)).collect())
            .collect();
        Matrix::from_dense(field, &dense).expect("rectangular literal")
    }

    /// Matrix whose j-th column is `cols[j]`.
    pub fn from_columns(field: &Field, nrows: usize, cols: &[SparseVec]) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); nrows];
        for (j, col) in cols.iter().enumerate() {
            for (i, c) in col.iter() {
                if i >= nrows {
                    return Err(Error::dim(format!("column entry {i} exceeds {nrows} rows")));
                }
                rows[i].push((j, c.clone()));
            }
        }
        Ok(Matrix {
            field: field.clone(),
            ncols: cols.len(),
            rows: rows.into_iter().map(|entries| SparseVec { entries }).collect(),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.rows[r].coeff(c, &self.field)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.nnz()).sum()
    }

    pub fn density(&self) -> f64 {
        let cells = self.nrows() * self.ncols;
        if cells == 0 {
            0.0
        } else {
            self.nnz() as f64 / cells as f64
        }
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        let mut cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, c) in r.iter() {
                cols[j].push((i, c.clone()));
            }
        }
        cols.into_iter().map(|entries| SparseVec { entries }).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix {
            field: self.field.clone(),
            ncols: self.nrows(),
            rows: self.columns(),
        }
    }

    pub fn mul_vec(&self, v: &SparseVec) -> Result<SparseVec> {
        if v.max_index().is_some_and(|m| m >= self.ncols) {
            return Err(Error::dim("vector longer than matrix width"));
        }
        Ok(SparseVec::from_entries(
            self.rows
                .iter()
                .enumerate()
                .map(|(i, r)| (i, r.dot(v, &self.field)))
                .collect(),
        ))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.ncols != other.nrows() {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols,
                other.nrows(),
                other.ncols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| SparseVec::linear_combination(r.iter().map(|(k, c)| (c, &other.rows[k]))))
            .collect();
        Ok(Matrix {
            field: self.field.clone(),
            ncols: other.ncols,
            rows,
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        self.rows
            .iter()
            .map(|r| r.to_dense(self.ncols, &self.field))
            .collect()
    }

    /// Reduced row echelon form. Dense Gauss-Jordan is used at density of at
    /// least 10%, sparse incremental elimination otherwise; RREF is unique so
    /// both paths agree.
    pub fn rref(&self) -> Rref {
        if self.density() >= 0.10 {
            self.rref_dense()
        } else {
            self.rref_sparse()
        }
    }

    pub fn rref_sparse(&self) -> Rref {
        let mut b = EchelonBuilder::new(&self.field, self.ncols);
        for r in &self.rows {
            b.push(r.clone());
        }
        b.finish(self.nrows())
    }

    pub fn rref_dense(&self) -> Rref {
        let mut m = self.to_dense();
        let nrows = m.len();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == nrows {
                break;
            }
            let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].inv().expect("nonzero pivot");
            for x in m[r][c..].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row[c..].iter_mut().zip(pivot_row[c..].iter()) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: Matrix {
                field: self.field.clone(),
                ncols: self.ncols,
                rows: m.iter().map(|r| SparseVec::from_dense(r)).collect(),
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Canonical kernel basis (itself in reduced row echelon form).
    pub fn kernel(&self) -> Vec<SparseVec> {
        self.rref().kernel()
    }

    /// Solves `self * x = b`.
    pub fn solve(&self, b: &SparseVec) -> Result<Solution> {
        if b.max_index().is_some_and(|m| m >= self.nrows()) {
            return Err(Error::dim(format!(
                "right-hand side index exceeds {} rows",
                self.nrows()
            )));
        }
        let n = self.ncols;
        let rows: Vec<SparseVec> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| match b.get(i) {
                Some(c) => r.add(&SparseVec::single(n, c.clone())),
                None => r.clone(),
            })
            .collect();
        let aug = Matrix {
            field: self.field.clone(),
            ncols: n + 1,
            rows,
        };
        let rr = aug.rref();
        if rr.pivots.last() == Some(&n) {
            return Ok(Solution::Inconsistent);
        }
        let mut x = Vec::new();
        for (k, &p) in rr.pivots.iter().enumerate() {
            if let Some(c) = rr.matrix.rows[k].get(n) {
                x.push((p, c.clone()));
            }
        }
        let restricted = Rref {
            matrix: Matrix {
                field: self.field.clone(),
                ncols: n,
                rows: rr
                    .matrix
                    .rows
                    .iter()
                    .map(|r| SparseVec {
                        entries: r.entries.iter().filter(|(i, _)| *i < n).cloned().collect(),
                    })
                    .collect(),
            },
            pivots: rr.pivots.clone(),
        };
        Ok(Solution::Consistent {
            x: SparseVec::from_entries(x),
            kernel: restricted.kernel(),
        })
    }

    pub fn invert(&self) -> Result<Matrix> {
        let n = self.nrows();
        if n != self.ncols {
            return Err(Error::dim(format!("cannot invert {}x{}", n, self.ncols)));
        }
        let rows: Vec<SparseVec> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.add(&SparseVec::unit(n + i, &self.field)))
            .collect();
        let aug = Matrix {
            field: self.field.clone(),
            ncols: 2 * n,
            rows,
        };
        let rr = aug.rref();
        if rr.rank() < n || rr.pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let rows = rr
            .matrix
            .rows
            .iter()
            .map(|r| SparseVec {
                entries: r
                    .entries
                    .iter()
                    .filter(|(i, _)| *i >= n)
                    .map(|(i, c)| (i - n, c.clone()))
                    .collect(),
            })
            .collect();
        Ok(Matrix {
            field: self.field.clone(),
            ncols: n,
            rows,
        })
    }
}

/// Result of a reduced row echelon computation.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.matrix.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.matrix.ncols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Kernel basis, canonicalized to reduced row echelon form.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let field = &self.matrix.field;
        let free = self.free_columns();
        let mut col_entries: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
        for (k, &p) in self.pivots.iter().enumerate() {
            for (c, v) in self.matrix.rows[k].iter() {
                if c != p {
                    col_entries.entry(c).or_default().push((p, -v));
                }
            }
        }
        let raw: Vec<SparseVec> = free
            .iter()
            .map(|&f| {
                let mut e = col_entries.remove(&f).unwrap_or_default();
                e.push((f, field.one()));
                SparseVec::from_entries(e)
            })
            .collect();
        canonical_basis(field, self.matrix.ncols, raw)
    }
}

/// Reduced row echelon basis of the span of `vectors`.
pub fn canonical_basis(field: &Field, dim: usize, vectors: Vec<SparseVec>) -> Vec<SparseVec> {
    let mut b = EchelonBuilder::new(field, dim);
    for v in vectors {
        b.push(v);
    }
    b.into_rows()
}

/// A subspace held as a canonical (reduced echelon) basis; coordinates are
/// read off the pivot columns.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(field: &Field, ambient: usize, vectors: Vec<SparseVec>) -> Self {
        let basis = canonical_basis(field, ambient, vectors);
        let pivots = basis.iter().map(|v| v.first().expect("nonzero row").0).collect();
        Subspace { ambient, basis, pivots }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn vector(&self, i: usize) -> &SparseVec {
        &self.basis[i]
    }

    /// Coordinates of `v`, or `None` when `v` is not in the subspace.
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        let c = SparseVec::from_entries(
            self.pivots
                .iter()
                .enumerate()
                .filter_map(|(k, &p)| v.get(p).map(|x| (k, x.clone())))
                .collect(),
        );
        (self.embed(&c) == *v).then_some(c)
    }

    pub fn embed(&self, c: &SparseVec) -> SparseVec {
        SparseVec::linear_combination(c.iter().map(|(k, x)| (x, &self.basis[k])))
    }
}

/// V / span(relations), with the non-pivot coordinates of the reduced
/// relation space as quotient basis.
#[derive(Clone, Debug)]
pub struct Quotient {
    relations: EchelonBuilder,
    free: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl Quotient {
    pub fn new(field: &Field, ambient: usize, relations: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut b = EchelonBuilder::new(field, ambient);
        for r in relations {
            b.push(r);
        }
        let pivots: BTreeSet<usize> = b.pivots().into_iter().collect();
        let free: Vec<usize> = (0..ambient).filter(|c| !pivots.contains(c)).collect();
        let mut position = vec![None; ambient];
        for (k, &c) in free.iter().enumerate() {
            position[c] = Some(k);
        }
        Quotient { relations: b, free, position }
    }

    pub fn ambient(&self) -> usize {
        self.position.len()
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Ambient index representing quotient basis element `k`.
    pub fn lift(&self, k: usize) -> usize {
        self.free[k]
    }

    pub fn lift_vec(&self, v: &SparseVec) -> SparseVec {
        v.reindex(|k| self.free[k])
    }

    pub fn project(&self, v: &SparseVec) -> SparseVec {
        let r = self.relations.reduce(v);
        r.reindex(|c| self.position[c].expect("reduced vectors avoid pivots"))
    }

    pub fn is_relation(&self, v: &SparseVec) -> bool {
        self.relations.contains(v)
    }
}

/// Outcome of [`Matrix::solve`].
#[derive(Clone, Debug)]
pub enum Solution {
    Consistent { x: SparseVec, kernel: Vec<SparseVec> },
    Inconsistent,
}

impl Solution {
    pub fn particular(&self) -> Option<&SparseVec> {
        match self {
            Solution::Consistent { x, .. } => Some(x),
            Solution::Inconsistent => None,
        }
    }
}

/// Incremental fully reduced echelon form. Rows can be pushed one at a time;
/// redundant rows are discarded as soon as they reduce to zero, which keeps
/// heavily overdetermined systems cheap.
#[derive(Clone, Debug)]
pub struct EchelonBuilder {
    field: Field,
    ncols: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl EchelonBuilder {
    pub fn new(field: &Field, ncols: usize) -> Self {
        EchelonBuilder {
            field: field.clone(),
            ncols,
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduces `v` against the current pivots.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        // Stored rows vanish on every other pivot column, so the coefficients
        // to eliminate can be read off `v` directly.
        let hits: Vec<(&Scalar, &SparseVec)> = v
            .iter()
            .filter_map(|(i, c)| self.rows.get(&i).map(|r| (c, r)))
            .collect();
        if hits.is_empty() {
            return v.clone();
        }
        let mut all: Vec<(usize, Scalar)> = v.entries.clone();
        for (c, r) in hits {
            let m = -c;
            for (i, x) in r.iter() {
                all.push((i, x * &m));
            }
        }
        SparseVec::from_entries(all)
    }

    /// Adds a row; returns true when it increased the rank.
    pub fn push(&mut self, v: SparseVec) -> bool {
        debug_assert!(v.max_index().is_none_or(|m| m < self.ncols));
        let r = self.reduce(&v);
        let Some((p, lead)) = r.first() else {
            return false;
        };
        let r = r.scale(&lead.inv().expect("nonzero lead"));
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(p) {
                let c = -c;
                *row = row.add_scaled(&r, &c);
            }
        }
        self.rows.insert(p, r);
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    pub fn into_rows(self) -> Vec<SparseVec> {
        self.rows.into_values().collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &SparseVec)> {
        self.rows.iter()
    }

    pub fn finish(self, nrows: usize) -> Rref {
        let pivots = self.pivots();
        let field = self.field.clone();
        let ncols = self.ncols;
        let mut rows = self.into_rows();
        rows.resize(nrows.max(rows.len()), SparseVec::new());
        Rref {
            matrix: Matrix { field, ncols, rows },
            pivots,
        }
    }

    pub fn kernel(&self) -> Vec<SparseVec> {
        Rref {
            matrix: Matrix {
                field: self.field.clone(),
                ncols: self.ncols,
                rows: self.rows.values().cloned().collect(),
            },
            pivots: self.pivots(),
        }
        .kernel()
    }
}

/// A linear map between coordinate spaces, stored as images of basis vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearMap {
    pub field: Field,
    pub dom: usize,
    pub cod: usize,
    pub cols: Vec<SparseVec>,
}

impl LinearMap {
    pub fn new(field: &Field, dom: usize, cod: usize, cols: Vec<SparseVec>) -> Result<Self> {
        if cols.len() != dom {
            return Err(Error::dim(format!("{} columns for domain {dom}", cols.len())));
        }
        if cols.iter().any(|c| c.max_index().is_some_and(|m| m >= cod)) {
            return Err(Error::dim(format!("column entry exceeds codomain {cod}")));
        }
        Ok(LinearMap {
            field: field.clone(),
            dom,
            cod,
            cols,
        })
    }

    pub fn from_fn(field: &Field, dom: usize, cod: usize, f: impl Fn(usize) -> SparseVec) -> Self {
        LinearMap {
            field: field.clone(),
            dom,
            cod,
            cols: (0..dom).map(f).collect(),
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        LinearMap::from_fn(field, n, n, |i| SparseVec::unit(i, field))
    }

    pub fn zero(field: &Field, dom: usize, cod: usize) -> Self {
        LinearMap::from_fn(field, dom, cod, |_| SparseVec::new())
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        SparseVec::linear_combination(v.iter().map(|(i, c)| (c, &self.cols[i])))
    }

    /// self after other
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if other.cod != self.dom {
            return Err(Error::dim(format!(
                "compose: codomain {} vs domain {}",
                other.cod, self.dom
            )));
        }
        Ok(LinearMap {
            field: self.field.clone(),
            dom: other.dom,
            cod: self.cod,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        })
    }

    /// Kronecker product: (f ⊗ g)(e_i ⊗ e_j) = f(e_i) ⊗ g(e_j), with e_i ⊗ e_j
    /// flattened to index i * dim + j.
    pub fn tensor(&self, other: &LinearMap) -> LinearMap {
        let mut cols = Vec::with_capacity(self.dom * other.dom);
        for a in &self.cols {
            for b in &other.cols {
                cols.push(tensor_vec(a, b, other.cod));
            }
        }
        LinearMap {
            field: self.field.clone(),
            dom: self.dom * other.dom,
            cod: self.cod * other.cod,
            cols,
        }
    }

    pub fn add(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            field: self.field.clone(),
            dom: self.dom,
            cod: self.cod,
            cols: self
                .cols
                .iter()
                .zip(&other.cols)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> LinearMap {
        LinearMap {
            field: self.field.clone(),
            dom: self.dom,
            cod: self.cod,
            cols: self.cols.iter().map(|v| v.scale(c)).collect(),
        }
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_columns(&self.field, self.cod, &self.cols).expect("validated columns")
    }

    pub fn rank(&self) -> usize {
        canonical_basis(&self.field, self.cod, self.cols.clone()).len()
    }

    pub fn invert(&self) -> Result<LinearMap> {
        let inv = self.matrix().invert()?;
        Ok(LinearMap {
            field: self.field.clone(),
            dom: self.cod,
            cod: self.dom,
            cols: inv.columns(),
        })
    }

    /// First basis index where the maps differ.
    pub fn first_difference(&self, other: &LinearMap) -> Option<usize> {
        if self.dom != other.dom || self.cod != other.cod {
            return Some(0);
        }
        (0..self.dom).find(|&i| self.cols[i] != other.cols[i])
    }
}

/// a ⊗ b flattened as i * dim_b + j.
pub fn tensor_vec(a: &SparseVec, b: &SparseVec, dim_b: usize) -> SparseVec {
    let mut entries = Vec::with_capacity(a.nnz() * b.nnz());
    for (i, x) in a.iter() {
        for (j, y) in b.iter() {
            entries.push((i * dim_b + j, x * y));
        }
    }
    SparseVec { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;

    fn q() -> Field {
        Field::rational()
    }

    #[test]
    fn rref_small_cases() {
        let f = q();
        let id = Matrix::identity(&f, 3);
        let r = id.rref();
        assert_eq!(r.rank(), 3);
        assert_eq!(r.matrix, id);

        let z = Matrix::zeros(&f, 2, 3);
        assert_eq!(z.rref().rank(), 0);

        let a = Matrix::from_ints(&f, &[&[1, 2], &[2, 4]]);
        let r = a.rref();
        assert_eq!(r.rank(), 1);
        assert_eq!(r.matrix, Matrix::from_ints(&f, &[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn dense_and_sparse_agree() {
        let f = q();
        let a = Matrix::from_ints(&f, &[&[0, 2, 4, 1], &[1, 1, 0, 3], &[1, 3, 4, 4], &[2, 0, 1, 0]]);
        let d = a.rref_dense();
        let s = a.rref_sparse();
        assert_eq!(d.pivots, s.pivots);
        assert_eq!(d.matrix, s.matrix);
    }

    #[test]
    fn solve_and_kernel_examples() {
        let f = q();
        let id = Matrix::identity(&f, 3);
        let v = SparseVec::from_dense(&[f.from_int(1), f.from_int(-2), f.from_int(5)]);
        match id.solve(&v).unwrap() {
            Solution::Consistent { x, kernel } => {
                assert_eq!(x, v);
                assert!(kernel.is_empty());
            }
            Solution::Inconsistent => panic!(),
        }
        let z = Matrix::zeros(&f, 2, 2);
        assert!(matches!(
            z.solve(&SparseVec::unit(0, &f)).unwrap(),
            Solution::Inconsistent
        ));
        let k = Matrix::from_ints(&f, &[&[1, 1]]).kernel();
        assert_eq!(k, vec![SparseVec::from_dense(&[f.from_int(1), f.from_int(-1)])]);
        assert!(id.solve(&SparseVec::unit(5, &f)).is_err());
    }

    #[test]
    fn invert_examples() {
        let f = q();
        let d = Matrix::from_ints(&f, &[&[2, 0], &[0, 3]]);
        let inv = d.invert().unwrap();
        assert_eq!(inv.get(0, 0), f.parse("1/2").unwrap());
        assert_eq!(inv.get(1, 1), f.parse("1/3").unwrap());
        let s = Matrix::from_ints(&f, &[&[1, 2], &[2, 4]]);
        assert!(matches!(s.invert(), Err(Error::Singular)));
    }

    #[test]
    fn cyclotomic_rank_four_system() {
        let f = Field::new(FieldSpec::Cyclotomic(3)).unwrap();
        let z = f.zeta().unwrap();
        let z2 = &z * &z;
        let one = f.one();
        // rows 4 and 5 are combinations of the first three plus a fourth row
        let r0 = vec![one.clone(), z.clone(), f.zero(), f.from_int(2), z2.clone(), f.zero(), one.clone()];
        let r1 = vec![f.zero(), one.clone(), z2.clone(), f.zero(), f.from_int(3), z.clone(), f.zero()];
        let r2 = vec![z.clone(), f.zero(), f.zero(), one.clone(), f.zero(), f.zero(), f.from_int(4)];
        let r3 = vec![f.zero(), f.zero(), one.clone(), z.clone(), f.zero(), one.clone(), f.zero()];
        let comb = |a: &[Scalar], b: &[Scalar], c: &Scalar| -> Vec<Scalar> {
            a.iter().zip(b).map(|(x, y)| x + &(y * c)).collect()
        };
        let r4 = comb(&r0, &r1, &z2);
        let a = Matrix::from_dense(&f, &[r0, r1, r2, r3, r4]).unwrap();
        assert_eq!(a.rank(), 4);
        let b = a.mul_vec(&SparseVec::from_dense(&[
            one.clone(),
            f.zero(),
            z.clone(),
            f.zero(),
            f.zero(),
            f.from_int(7),
            z2.clone(),
        ]))
        .unwrap();
        let Solution::Consistent { x, kernel } = a.solve(&b).unwrap() else {
            panic!("consistent by construction");
        };
        assert_eq!(a.mul_vec(&x).unwrap(), b);
        assert_eq!(kernel.len(), 3);
        for k in &kernel {
            assert!(a.mul_vec(k).unwrap().is_zero());
        }
    }

    #[test]
    fn linear_map_tensor_and_compose() {
        let f = q();
        let a = LinearMap::new(
            &f,
            2,
            2,
            vec![SparseVec::unit(1, &f), SparseVec::unit(0, &f)],
        )
        .unwrap();
        let aa = a.compose(&a).unwrap();
        assert_eq!(aa, LinearMap::identity(&f, 2));
        let t = a.tensor(&LinearMap::identity(&f, 2));
        assert_eq!(t.apply(&SparseVec::unit(1, &f)), SparseVec::unit(3, &f));
        assert_eq!(a.invert().unwrap(), a);
    }
}
