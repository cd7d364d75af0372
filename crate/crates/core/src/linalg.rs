//! Exact sparse linear algebra: column-major matrices, incremental echelon
//! forms with optional combination tracking, kernels, solves and subquotients.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;

/// Sparse vector: entries sorted by index, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SparseVec<E> {
    pub entries: Vec<(usize, E)>,
}

impl<E: Clone> SparseVec<E> {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit<F: Field<Elem = E>>(field: &F, i: usize) -> Self {
        SparseVec {
            entries: vec![(i, field.one())],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|(i, _)| *i)
    }

    pub fn get<F: Field<Elem = E>>(&self, field: &F, i: usize) -> E {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => field.zero(),
        }
    }

    pub fn from_map<F: Field<Elem = E>>(field: &F, map: BTreeMap<usize, E>) -> Self {
        SparseVec {
            entries: map.into_iter().filter(|(_, v)| !field.is_zero(v)).collect(),
        }
    }

    pub fn from_dense<F: Field<Elem = E>>(field: &F, dense: &[E]) -> Self {
        SparseVec {
            entries: dense
                .iter()
                .enumerate()
                .filter(|(_, v)| !field.is_zero(v))
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense<F: Field<Elem = E>>(&self, field: &F, len: usize) -> Vec<E> {
        let mut out = vec![field.zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn scale<F: Field<Elem = E>>(&self, field: &F, c: &E) -> Self {
        if field.is_zero(c) {
            return SparseVec::new();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (*i, field.mul(v, c)))
                .collect(),
        }
    }

    /// `self + c * other`
    pub fn axpy<F: Field<Elem = E>>(&self, field: &F, c: &E, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() || b < other.entries.len() {
            let ia = self.entries.get(a).map(|e| e.0).unwrap_or(usize::MAX);
            let ib = other.entries.get(b).map(|e| e.0).unwrap_or(usize::MAX);
            if ia < ib {
                out.push(self.entries[a].clone());
                a += 1;
            } else if ib < ia {
                let v = field.mul(c, &other.entries[b].1);
                if !field.is_zero(&v) {
                    out.push((ib, v));
                }
                b += 1;
            } else {
                let mut v = self.entries[a].1.clone();
                field.add_mul_assign(&mut v, c, &other.entries[b].1);
                if !field.is_zero(&v) {
                    out.push((ia, v));
                }
                a += 1;
                b += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        self.axpy(field, &field.one(), other)
    }

    pub fn sub<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        self.axpy(field, &field.neg(&field.one()), other)
    }

    /// Re-indexes entries through `map` (entries mapped to `None` are dropped).
    pub fn reindex(&self, map: impl Fn(usize) -> Option<usize>) -> Self {
        let mut entries: Vec<(usize, E)> = self
            .entries
            .iter()
            .filter_map(|(i, v)| map(*i).map(|j| (j, v.clone())))
            .collect();
        entries.sort_by_key(|e| e.0);
        SparseVec { entries }
    }

    pub fn shift(&self, offset: usize) -> Self {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (i + offset, v.clone())).collect(),
        }
    }
}

/// Column-major matrix: column `j` is the image of source basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec<E>>,
}

impl<E: Clone> Matrix<E> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            columns: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        Matrix {
            rows: n,
            cols: n,
            columns: (0..n).map(|i| SparseVec::unit(field, i)).collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec<E>>) -> Self {
        debug_assert!(columns
            .iter()
            .all(|c| c.entries.last().map(|e| e.0 < rows).unwrap_or(true)));
        Matrix {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &SparseVec<E> {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec<E>] {
        &self.columns
    }

    pub fn get<F: Field<Elem = E>>(&self, field: &F, i: usize, j: usize) -> E {
        self.columns[j].get(field, i)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.nnz()).sum()
    }

    pub fn apply<F: Field<Elem = E>>(&self, field: &F, v: &SparseVec<E>) -> SparseVec<E> {
        let mut acc: BTreeMap<usize, E> = BTreeMap::new();
        for (j, c) in &v.entries {
            for (i, a) in &self.columns[*j].entries {
                let slot = acc.entry(*i).or_insert_with(|| field.zero());
                field.add_mul_assign(slot, c, a);
            }
        }
        SparseVec::from_map(field, acc)
    }

    /// `self * rhs`
    pub fn mul<F: Field<Elem = E>>(&self, field: &F, rhs: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        Matrix {
            rows: self.rows,
            cols: rhs.cols,
            columns: rhs.columns.iter().map(|c| self.apply(field, c)).collect(),
        }
    }

    pub fn sub<F: Field<Elem = E>>(&self, field: &F, rhs: &Matrix<E>) -> Matrix<E> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            columns: self
                .columns
                .iter()
                .zip(&rhs.columns)
                .map(|(a, b)| a.sub(field, b))
                .collect(),
        }
    }

    /// Block-diagonal sum.
    pub fn block_diag(blocks: &[&Matrix<E>]) -> Matrix<E> {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut columns = Vec::new();
        let mut offset = 0;
        for b in blocks {
            for c in &b.columns {
                columns.push(c.shift(offset));
            }
            offset += b.rows;
        }
        Matrix::from_columns(rows, columns)
    }

    /// A `rows x cols` matrix assembled from blocks placed at
    /// `(row offset, col offset)`, each optionally negated. Overlapping blocks add.
    pub fn from_blocks<F: Field<Elem = E>>(
        field: &F,
        rows: usize,
        cols: usize,
        blocks: &[(usize, usize, &Matrix<E>, bool)],
    ) -> Matrix<E> {
        let mut acc: Vec<BTreeMap<usize, E>> = vec![BTreeMap::new(); cols];
        for (r0, c0, b, neg) in blocks {
            for (j, col) in b.columns.iter().enumerate() {
                for (i, v) in &col.entries {
                    let v = if *neg { field.neg(v) } else { v.clone() };
                    let slot = acc[c0 + j].entry(r0 + i).or_insert_with(|| field.zero());
                    *slot = field.add(slot, &v);
                }
            }
        }
        let columns = acc.into_iter().map(|m| SparseVec::from_map(field, m)).collect();
        Matrix::from_columns(rows, columns)
    }

    /// Sparse triplets `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &E)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.entries.iter().map(move |(i, v)| (*i, j, v)))
    }

    pub fn rank<F: Field<Elem = E>>(&self, field: &F) -> usize {
        let mut ech = Echelon::new(field, self.rows, false);
        for c in &self.columns {
            ech.insert(c);
        }
        ech.rank()
    }

    /// Kernel basis as sparse vectors over the source. Each vector has a
    /// coefficient 1 at its largest index.
    pub fn kernel<F: Field<Elem = E>>(&self, field: &F) -> Vec<SparseVec<E>> {
        let mut ech = Echelon::new(field, self.rows, true);
        let mut out = Vec::new();
        for c in &self.columns {
            if let Insert::Dependent(rel) = ech.insert(c) {
                out.push(rel);
            }
        }
        out
    }
}

/// Outcome of inserting a generator into an [`Echelon`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insert<E> {
    Independent,
    /// Linear relation among generators (tracked echelons only; otherwise empty),
    /// with coefficient 1 on the generator just inserted.
    Dependent(SparseVec<E>),
}

/// Incrementally built echelon basis of a subspace of `F^dim`.
///
/// Each stored row has leading coefficient 1 at its pivot and all other entries
/// at larger indices. When tracking is on, each row also records its
/// expression in the inserted generators, so reductions yield certificates.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    dim: usize,
    rows: Vec<SparseVec<F::Elem>>,
    combos: Vec<SparseVec<F::Elem>>,
    pivot_row: BTreeMap<usize, usize>,
    tracked: bool,
    ngens: usize,
}

/// Result of reducing a vector against an [`Echelon`].
#[derive(Clone, Debug)]
pub struct Reduction<E> {
    /// Zero exactly on every pivot position.
    pub residue: SparseVec<E>,
    /// `v - residue` as a combination of generators (tracked echelons only).
    pub combination: SparseVec<E>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: &F, dim: usize, tracked: bool) -> Self {
        Echelon {
            field: field.clone(),
            dim,
            rows: Vec::new(),
            combos: Vec::new(),
            pivot_row: BTreeMap::new(),
            tracked,
            ngens: 0,
        }
    }

    pub fn from_vectors<'a>(
        field: &F,
        dim: usize,
        vecs: impl IntoIterator<Item = &'a SparseVec<F::Elem>>,
        tracked: bool,
    ) -> Self {
        let mut e = Self::new(field, dim, tracked);
        for v in vecs {
            e.insert(v);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn num_generators(&self) -> usize {
        self.ngens
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.pivot_row.contains_key(&i)
    }

    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }

    pub fn reduce(&self, v: &SparseVec<F::Elem>) -> Reduction<F::Elem> {
        let f = &self.field;
        let mut acc: BTreeMap<usize, F::Elem> = v.entries.iter().cloned().collect();
        let mut residue = Vec::new();
        let mut coeffs: Vec<(usize, F::Elem)> = Vec::new();
        while let Some((i, c)) = acc.pop_first() {
            if f.is_zero(&c) {
                continue;
            }
            match self.pivot_row.get(&i) {
                None => residue.push((i, c)),
                Some(&r) => {
                    let neg = f.neg(&c);
                    for (k, a) in self.rows[r].entries.iter().skip(1) {
                        let slot = acc.entry(*k).or_insert_with(|| f.zero());
                        f.add_mul_assign(slot, &neg, a);
                    }
                    if self.tracked {
                        coeffs.push((r, c));
                    }
                }
            }
        }
        let mut combination = BTreeMap::new();
        for (r, c) in coeffs {
            for (g, a) in &self.combos[r].entries {
                let slot = combination.entry(*g).or_insert_with(|| f.zero());
                f.add_mul_assign(slot, &c, a);
            }
        }
        Reduction {
            residue: SparseVec { entries: residue },
            combination: SparseVec::from_map(f, combination),
        }
    }

    pub fn contains(&self, v: &SparseVec<F::Elem>) -> bool {
        self.reduce(v).residue.is_zero()
    }

    /// Inserts `v` as generator number `num_generators()`.
    pub fn insert(&mut self, v: &SparseVec<F::Elem>) -> Insert<F::Elem> {
        let f = self.field.clone();
        let gen = self.ngens;
        self.ngens += 1;
        let red = self.reduce(v);
        if red.residue.is_zero() {
            if !self.tracked {
                return Insert::Dependent(SparseVec::new());
            }
            // v - combination = 0
            let rel = SparseVec::unit(&f, gen).sub(&f, &red.combination);
            return Insert::Dependent(rel);
        }
        let (pivot, lead) = red.residue.entries[0].clone();
        let inv = f.inv(&lead);
        let row = red.residue.scale(&f, &inv);
        self.pivot_row.insert(pivot, self.rows.len());
        self.rows.push(row);
        if self.tracked {
            let combo = SparseVec::unit(&f, gen)
                .sub(&f, &red.combination)
                .scale(&f, &inv);
            self.combos.push(combo);
        } else {
            self.combos.push(SparseVec::new());
        }
        Insert::Independent
    }

    /// Fully reduced row echelon basis, ordered by pivot.
    pub fn reduced_basis(&self) -> Vec<SparseVec<F::Elem>> {
        let f = &self.field;
        let mut out: Vec<SparseVec<F::Elem>> = Vec::with_capacity(self.rows.len());
        // back-substitute from the largest pivot down
        let order: Vec<(usize, usize)> = self.pivot_row.iter().map(|(p, r)| (*p, *r)).collect();
        let mut done: BTreeMap<usize, SparseVec<F::Elem>> = BTreeMap::new();
        for &(p, r) in order.iter().rev() {
            let mut row = self.rows[r].clone();
            loop {
                let hit = row
                    .entries
                    .iter()
                    .skip(1)
                    .find(|(i, _)| done.contains_key(i))
                    .cloned();
                match hit {
                    Some((i, c)) => {
                        row = row.axpy(f, &f.neg(&c), &done[&i]);
                    }
                    None => break,
                }
            }
            done.insert(p, row);
        }
        out.extend(done.into_values());
        out
    }

    /// Solves `sum_g c_g * gen_g = v`; `None` when `v` is outside the span.
    pub fn solve(&self, v: &SparseVec<F::Elem>) -> Option<SparseVec<F::Elem>> {
        assert!(self.tracked, "solve needs a tracked echelon");
        let red = self.reduce(v);
        red.residue.is_zero().then_some(red.combination)
    }
}

/// A subquotient `Z / B` of `F^ambient` with a chosen basis of representatives.
#[derive(Clone, Debug)]
pub struct Subquotient<F: Field> {
    ambient: usize,
    boundaries: Echelon<F>,
    reps: Vec<SparseVec<F::Elem>>,
    rep_echelon: Echelon<F>,
}

impl<F: Field> Subquotient<F> {
    /// `span(cycles) / span(boundaries)`; `boundaries` must lie in `span(cycles)`.
    /// Representatives are the residues of the cycles, in order, that are
    /// independent modulo the boundaries.
    pub fn new(
        field: &F,
        ambient: usize,
        boundaries: &[SparseVec<F::Elem>],
        cycles: &[SparseVec<F::Elem>],
    ) -> Self {
        let b = Echelon::from_vectors(field, ambient, boundaries, false);
        let mut reps = Vec::new();
        let mut rep_echelon = Echelon::new(field, ambient, true);
        let mut scratch = Echelon::new(field, ambient, false);
        for z in cycles {
            let r = b.reduce(z).residue;
            if r.is_zero() {
                continue;
            }
            if let Insert::Independent = scratch.insert(&r) {
                rep_echelon.insert(&r);
                reps.push(r);
            }
        }
        Subquotient {
            ambient,
            boundaries: b,
            reps,
            rep_echelon,
        }
    }

    /// `F^ambient / span(image)` with the non-pivot unit vectors as basis.
    pub fn quotient(field: &F, ambient: usize, image: &[SparseVec<F::Elem>]) -> Self {
        let b = Echelon::from_vectors(field, ambient, image, false);
        let reps: Vec<_> = (0..ambient)
            .filter(|i| !b.is_pivot(*i))
            .map(|i| SparseVec::unit(field, i))
            .collect();
        let rep_echelon = Echelon::from_vectors(field, ambient, &reps, true);
        Subquotient {
            ambient,
            boundaries: b,
            reps,
            rep_echelon,
        }
    }

    /// Rebuilds a subquotient from stored boundary rows and representatives.
    pub fn from_parts(
        field: &F,
        ambient: usize,
        boundaries: &[SparseVec<F::Elem>],
        reps: Vec<SparseVec<F::Elem>>,
    ) -> Self {
        let b = Echelon::from_vectors(field, ambient, boundaries, false);
        let rep_echelon = Echelon::from_vectors(field, ambient, &reps, true);
        Subquotient {
            ambient,
            boundaries: b,
            reps,
            rep_echelon,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn reps(&self) -> &[SparseVec<F::Elem>] {
        &self.reps
    }

    pub fn boundaries(&self) -> &Echelon<F> {
        &self.boundaries
    }

    /// Coordinates of the class of `v` in the representative basis.
    pub fn coords(&self, v: &SparseVec<F::Elem>) -> Result<SparseVec<F::Elem>> {
        let r = self.boundaries.reduce(v).residue;
        if r.is_zero() {
            return Ok(SparseVec::new());
        }
        self.rep_echelon
            .solve(&r)
            .ok_or_else(|| Error::NotInSlice("vector is not a cycle of the subquotient".into()))
    }

    pub fn is_boundary(&self, v: &SparseVec<F::Elem>) -> bool {
        self.boundaries.contains(v)
    }

    /// The representative combination for a coordinate vector.
    pub fn lift(&self, field: &F, coords: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        let mut acc = SparseVec::new();
        for (k, c) in &coords.entries {
            acc = acc.axpy(field, c, &self.reps[*k]);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::rat::Rat;

    fn q(n: i64) -> Rat {
        Rationals.from_i64(n)
    }

    fn col(v: &[i64]) -> SparseVec<Rat> {
        SparseVec::from_dense(&Rationals, &v.iter().map(|&a| q(a)).collect::<Vec<_>>())
    }

    #[test]
    fn kernel_and_rank_agree_with_dimension() {
        // columns (1,2,3), (2,4,6), (0,1,1), (1,3,4)
        let m = Matrix::from_columns(3, vec![col(&[1, 2, 3]), col(&[2, 4, 6]), col(&[0, 1, 1]), col(&[1, 3, 4])]);
        let k = m.kernel(&Rationals);
        assert_eq!(m.rank(&Rationals), 2);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply(&Rationals, v).is_zero());
        }
    }

    #[test]
    fn solve_returns_certificate() {
        let m = Matrix::from_columns(3, vec![col(&[1, 0, 1]), col(&[0, 1, 1])]);
        let ech = Echelon::from_vectors(&Rationals, 3, m.columns(), true);
        let sol = ech.solve(&col(&[2, 3, 5])).unwrap();
        assert_eq!(m.apply(&Rationals, &sol), col(&[2, 3, 5]));
        assert!(ech.solve(&col(&[0, 0, 1])).is_none());
    }

    #[test]
    fn quotient_basis_is_non_pivots() {
        let sq = Subquotient::quotient(&Rationals, 3, &[col(&[1, 1, 0])]);
        assert_eq!(sq.dim(), 2);
        assert_eq!(sq.reps()[0], col(&[0, 1, 0]));
        // class of e0 equals class of -e1
        assert_eq!(sq.coords(&col(&[1, 0, 0])).unwrap(), col(&[-1, 0]));
    }

    #[test]
    fn subquotient_coords() {
        // Z = span(e0, e1), B = span(e0 + e1)
        let sq = Subquotient::new(&Rationals, 3, &[col(&[1, 1, 0])], &[col(&[1, 0, 0]), col(&[0, 1, 0])]);
        assert_eq!(sq.dim(), 1);
        let c0 = sq.coords(&col(&[1, 0, 0])).unwrap();
        let c1 = sq.coords(&col(&[0, 1, 0])).unwrap();
        assert_eq!(c0.scale(&Rationals, &q(-1)), c1);
        assert!(sq.coords(&col(&[0, 0, 1])).is_err());
    }

    #[test]
    fn works_over_prime_field() {
        let f = PrimeField::new(5).unwrap();
        let c = |v: &[u64]| SparseVec::from_dense(&f, v);
        let m = Matrix::from_columns(2, vec![c(&[1, 2]), c(&[2, 4]), c(&[3, 2])]);
        assert_eq!(m.rank(&f), 2);
        assert_eq!(m.kernel(&f).len(), 1);
    }
}
