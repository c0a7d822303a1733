//! Exact linear algebra: dense matrices, sparse incremental echelon forms and
//! span computations on binary forms.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::bform::BinaryForm;
use super::rational::Rational;
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixQ {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl MatrixQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixQ { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, AlgebraError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            if r.len() != cols {
                return Err(AlgebraError::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend(r);
        }
        Ok(MatrixQ { rows: nrows, cols, data })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, AlgebraError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = m.get(i, j) + a * b;
                        m.set(i, j, v);
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, AlgebraError> {
        if v.len() != self.cols {
            return Err(AlgebraError::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Reduced row echelon form and pivot columns. Pivot search takes the
    /// first nonzero column and the topmost row holding a nonzero there.
    pub fn rref(&self) -> (MatrixQ, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let rv = m.get(r, j);
                    if !rv.is_zero() {
                        let v = m.get(i, j) - &f * rv;
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Reduced echelon basis of the right kernel {x : A·x = 0}.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f).clone();
            }
            basis.push(v);
        }
        rref_rows(basis, self.cols)
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            let inv = piv.recip();
            for i in c + 1..n {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Solve A·x = b; `None` when inconsistent. Free variables are set to 0.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>, AlgebraError> {
        if b.len() != self.rows {
            return Err(AlgebraError::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<MatrixQ> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

/// Nonzero rows of the reduced echelon form of the given vectors.
pub fn rref_rows(rows: Vec<Vec<Rational>>, len: usize) -> Vec<Vec<Rational>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let m = MatrixQ::from_rows(rows).expect("rows of equal length");
    debug_assert_eq!(m.cols(), len);
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, Rational::one())] }
    }

    pub fn from_dense(v: &[Rational]) -> Self {
        SparseVec {
            entries: v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect(),
        }
    }

    /// Build from unsorted entries, summing duplicates.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut map: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, c) in entries {
            *map.entry(i).or_insert_with(Rational::zero) += c;
        }
        SparseVec { entries: map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); len];
        for (i, c) in &self.entries {
            v[*i] = c.clone();
        }
        v
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lead(&self) -> Option<&(usize, Rational)> {
        self.entries.first()
    }

    pub fn get(&self, i: usize) -> Option<&Rational> {
        self.entries.binary_search_by_key(&i, |e| e.0).ok().map(|k| &self.entries[k].1)
    }

    pub fn scale(&mut self, c: &Rational) {
        for e in &mut self.entries {
            e.1 *= c;
        }
    }

    /// `self += c·other`
    pub fn axpy(&mut self, c: &Rational, other: &SparseVec) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (j, y) = b.next().unwrap();
                    out.push((*j, c * y));
                }
                (Some((i, _)), Some((j, _))) => {
                    if i < j {
                        out.push(a.next().unwrap());
                    } else if j < i {
                        let (j, y) = b.next().unwrap();
                        out.push((*j, c * y));
                    } else {
                        let (i, x) = a.next().unwrap();
                        let (_, y) = b.next().unwrap();
                        let v = x + c * y;
                        if !v.is_zero() {
                            out.push((i, v));
                        }
                    }
                }
            }
        }
        self.entries = out;
    }
}

#[derive(Clone, Debug)]
struct EchelonRow {
    vec: SparseVec,
    combo: SparseVec,
}

/// Incremental echelon basis of a span. Each stored row has its pivot entry
/// normalized to one. Rows optionally track the combination of inserted
/// vectors they came from, which turns dependent insertions into kernel
/// vectors.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    rows: BTreeMap<usize, EchelonRow>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    fn reduce_tracked(&self, mut v: SparseVec, mut combo: SparseVec) -> (SparseVec, SparseVec) {
        while let Some((lead, c)) = v.lead().cloned() {
            let Some(row) = self.rows.get(&lead) else { break };
            let f = -c;
            v.axpy(&f, &row.vec);
            combo.axpy(&f, &row.combo);
        }
        (v, combo)
    }

    /// Reduce until the leading column is not a pivot.
    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        let mut v = v;
        while let Some((lead, c)) = v.lead().cloned() {
            let Some(row) = self.rows.get(&lead) else { break };
            v.axpy(&-c, &row.vec);
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// Insert; returns true when the vector was independent.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        self.insert_tracked(v, SparseVec::new()).is_none()
    }

    /// Insert with a combination tag. Returns the tag combination of a
    /// dependency when the vector reduces to zero.
    pub fn insert_tracked(&mut self, v: SparseVec, tag: SparseVec) -> Option<SparseVec> {
        let (mut v, mut combo) = self.reduce_tracked(v, tag);
        match v.lead().cloned() {
            None => Some(combo),
            Some((lead, c)) => {
                let inv = c.recip();
                v.scale(&inv);
                combo.scale(&inv);
                self.rows.insert(lead, EchelonRow { vec: v, combo });
                None
            }
        }
    }

    /// Fully reduced rows in increasing pivot order.
    pub fn reduced_rows(&self) -> Vec<SparseVec> {
        let mut rows: BTreeMap<usize, SparseVec> =
            self.rows.iter().map(|(k, r)| (*k, r.vec.clone())).collect();
        let keys: Vec<usize> = rows.keys().copied().collect();
        for &p in keys.iter().rev() {
            let prow = rows[&p].clone();
            for &q in keys.iter().filter(|&&q| q < p) {
                let row = rows.get_mut(&q).unwrap();
                if let Some(c) = row.get(p).cloned() {
                    row.axpy(&-c, &prow);
                }
            }
        }
        rows.into_values().collect()
    }
}

fn check_common_degree(forms: &[&BinaryForm], degree: usize) -> Result<(), AlgebraError> {
    for f in forms {
        if f.degree() != degree {
            return Err(AlgebraError::DimensionMismatch { expected: degree + 1, found: f.degree() + 1 });
        }
    }
    Ok(())
}

fn echelon_of(forms: &[BinaryForm]) -> SparseEchelon {
    let mut e = SparseEchelon::new();
    for f in forms {
        e.insert(SparseVec::from_dense(f.coeffs()));
    }
    e
}

fn to_forms(rows: Vec<SparseVec>, degree: usize) -> Vec<BinaryForm> {
    rows.into_iter().map(|r| BinaryForm::new(r.to_dense(degree + 1))).collect()
}

/// Reduced echelon basis of the span of forms of a common degree.
pub fn span_basis(forms: &[BinaryForm], degree: usize) -> Result<Vec<BinaryForm>, AlgebraError> {
    check_common_degree(&forms.iter().collect::<Vec<_>>(), degree)?;
    Ok(to_forms(echelon_of(forms).reduced_rows(), degree))
}

pub fn span_rank(forms: &[BinaryForm]) -> usize {
    echelon_of(forms).rank()
}

pub fn span_contains(basis: &[BinaryForm], f: &BinaryForm) -> Result<bool, AlgebraError> {
    check_common_degree(&basis.iter().collect::<Vec<_>>(), f.degree())?;
    Ok(echelon_of(basis).contains(&SparseVec::from_dense(f.coeffs())))
}

/// Reduced echelon basis of span(u) ∩ span(w).
pub fn span_intersection(u: &[BinaryForm], w: &[BinaryForm], degree: usize) -> Result<Vec<BinaryForm>, AlgebraError> {
    let u = span_basis(u, degree)?;
    let w = span_basis(w, degree)?;
    // Dependencies among (u, w) give a·u = −b·w in the intersection.
    let mut ech = SparseEchelon::new();
    for (i, f) in u.iter().enumerate() {
        ech.insert_tracked(SparseVec::from_dense(f.coeffs()), SparseVec::unit(i));
    }
    let mut out = Vec::new();
    for (j, f) in w.iter().enumerate() {
        if let Some(combo) = ech.insert_tracked(SparseVec::from_dense(f.coeffs()), SparseVec::unit(u.len() + j)) {
            let mut g = BinaryForm::zero(degree);
            for (k, c) in combo.entries() {
                if *k < u.len() {
                    g.add_scaled(c, &u[*k]);
                }
            }
            out.push(g);
        }
    }
    span_basis(&out, degree)
}

/// Representatives of a complement of span(w) ∩ span(u) inside span(w): the
/// reduced echelon rows of `w` whose pivot columns are not pivots of the
/// intersection.
pub fn span_quotient(w: &[BinaryForm], u: &[BinaryForm], degree: usize) -> Result<Vec<BinaryForm>, AlgebraError> {
    let inter = span_intersection(u, w, degree)?;
    let inter_pivots: Vec<usize> = echelon_of(&inter).pivots();
    let wb = span_basis(w, degree)?;
    Ok(wb
        .into_iter()
        .filter(|f| {
            let lead = f.coeffs().iter().position(|c| !c.is_zero()).unwrap();
            !inter_pivots.contains(&lead)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn f(text: &str) -> BinaryForm {
        BinaryForm::parse(text).unwrap()
    }

    #[test]
    fn kernel_of_row() {
        let m = MatrixQ::from_i64(&[vec![1, 1]]).unwrap();
        assert_eq!(m.kernel(), vec![vec![rat(1), rat(-1)]]);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = MatrixQ::from_i64(&[vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]).unwrap();
        assert_eq!(m.determinant(), rat(4));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), MatrixQ::identity(3));
    }

    #[test]
    fn membership() {
        let basis = [f("t*s^3"), f("s^4"), f("t^4")];
        assert!(span_contains(&basis, &f("t^4")).unwrap());
        assert!(!span_contains(&basis, &f("s^2*t^2")).unwrap());
    }

    #[test]
    fn intersection_and_quotient() {
        let u = [f("s^2"), f("s*t")];
        let w = [f("s^2 + s*t"), f("t^2")];
        let i = span_intersection(&u, &w, 2).unwrap();
        assert_eq!(i, vec![f("s^2 + s*t")]);
        let q = span_quotient(&w, &u, 2).unwrap();
        assert_eq!(q, vec![f("t^2")]);
    }

    #[test]
    fn mismatched_degrees_rejected() {
        assert!(span_basis(&[f("s"), f("s^2")], 1).is_err());
    }

    #[test]
    fn tracked_insertion_yields_kernel() {
        let mut e = SparseEchelon::new();
        let vs = [vec![1, 2], vec![2, 4], vec![0, 1]];
        let mut deps = Vec::new();
        for (i, v) in vs.iter().enumerate() {
            let v: Vec<Rational> = v.iter().map(|&x| rat(x)).collect();
            if let Some(c) = e.insert_tracked(SparseVec::from_dense(&v), SparseVec::unit(i)) {
                deps.push(c);
            }
        }
        assert_eq!(deps, vec![SparseVec::from_entries([(0, rat(-2)), (1, rat(1))])]);
    }
}
