//! Exact linear algebra over a [`Field`]: small dense matrices and an
//! incremental sparse row echelon form.

use std::collections::BTreeMap;

use crate::field::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
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

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<G: Field, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<Matrix<G>, E> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>, E>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (o.rows, o.cols),
            "matrix shape mismatch"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (o.rows, o.cols),
            "matrix shape mismatch"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Kronecker product; the left factor is the slow index.
    pub fn kron(&self, o: &Self) -> Self {
        let (r, c) = (self.rows * o.rows, self.cols * o.cols);
        Self::from_fn(r, c, |i, j| {
            let a = self.get(i / o.rows, j / o.cols);
            if a.is_zero() {
                F::zero()
            } else {
                a.mul(o.get(i % o.rows, j % o.cols))
            }
        })
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a.get(r, c).is_zero())?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let iv = a.get(c, c).inv()?;
            for j in 0..n {
                a.data[c * n + j] = a.data[c * n + j].mul(&iv);
                inv.data[c * n + j] = inv.data[c * n + j].mul(&iv);
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let x = a.get(c, j).mul(&f);
                    a.data[r * n + j] = a.data[r * n + j].sub(&x);
                    let y = inv.get(c, j).mul(&f);
                    inv.data[r * n + j] = inv.data[r * n + j].sub(&y);
                }
            }
        }
        Some(inv)
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new();
        for i in 0..self.rows {
            e.insert(dense_to_sparse(self.row(i)));
        }
        e.rank()
    }

    /// Basis of the right kernel `{ x : self * x = 0 }`.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        kernel_of_rows(self.rows, self.cols, |i| dense_to_sparse(self.row(i)))
    }

    /// Positions and values of nonzero entries, row-major.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, F)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if !v.is_zero() {
                    out.push((i, j, v.clone()));
                }
            }
        }
        out
    }
}

pub type SparseVec<F> = BTreeMap<usize, F>;

pub fn dense_to_sparse<F: Field>(v: &[F]) -> SparseVec<F> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense<F: Field>(v: &SparseVec<F>, n: usize) -> Vec<F> {
    let mut out = vec![F::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `acc += c * v`.
pub fn axpy<F: Field>(acc: &mut SparseVec<F>, c: &F, v: &SparseVec<F>) {
    if c.is_zero() {
        return;
    }
    for (k, x) in v {
        let e = acc.entry(*k).or_insert_with(F::zero);
        *e = e.add(&c.mul(x));
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

/// Incremental echelon form. Each stored row is normalized so that its
/// largest column index (the pivot) has coefficient one.
///
/// Optionally tracks, for every stored row, its expression in terms of the
/// vectors passed to [`Echelon::insert`], which lets callers solve for
/// coordinates.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    rows: BTreeMap<usize, (SparseVec<F>, SparseVec<F>)>,
    inserted: usize,
    track: bool,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Self {
            rows: BTreeMap::new(),
            inserted: 0,
            track: false,
        }
    }

    pub fn tracked() -> Self {
        Self {
            rows: BTreeMap::new(),
            inserted: 0,
            track: true,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &usize> {
        self.rows.keys()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.rows.contains_key(&c)
    }

    pub fn row(&self, pivot: usize) -> Option<&SparseVec<F>> {
        self.rows.get(&pivot).map(|r| &r.0)
    }

    /// Reduce `v` against the stored rows; returns the remainder and, when
    /// tracking, the combination `c` with `v = remainder + sum c_i * input_i`.
    pub fn reduce_tracked(&self, v: &SparseVec<F>) -> (SparseVec<F>, SparseVec<F>) {
        let mut v = v.clone();
        let mut combo = SparseVec::new();
        let mut bound = match v.keys().next_back() {
            Some(&k) => k,
            None => return (v, combo),
        };
        loop {
            let next = v
                .range(..=bound)
                .rev()
                .find(|(k, _)| self.rows.contains_key(k))
                .map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { break };
            let (row, rc) = &self.rows[&k];
            axpy(&mut v, &c.neg(), row);
            if self.track {
                axpy(&mut combo, &c, rc);
            }
            if k == 0 {
                break;
            }
            bound = k - 1;
        }
        (v, combo)
    }

    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        self.reduce_tracked(v).0
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Insert a vector; returns its new pivot if it was independent.
    pub fn insert(&mut self, v: SparseVec<F>) -> Option<usize> {
        let idx = self.inserted;
        self.inserted += 1;
        let (r, mut combo) = self.reduce_tracked(&v);
        let (&p, lead) = r.iter().next_back()?;
        let inv = lead.inv().expect("nonzero pivot");
        let row: SparseVec<F> = r.iter().map(|(k, x)| (*k, x.mul(&inv))).collect();
        let combo = if self.track {
            // row = (v - sum combo_i input_i) / lead
            for x in combo.values_mut() {
                *x = x.neg().mul(&inv);
            }
            combo.insert(idx, inv);
            combo
        } else {
            SparseVec::new()
        };
        self.rows.insert(p, (row, combo));
        Some(p)
    }

    /// Rows with every pivot column cleared from all other rows.
    pub fn fully_reduced_rows(&self) -> BTreeMap<usize, SparseVec<F>> {
        let mut out: BTreeMap<usize, SparseVec<F>> = BTreeMap::new();
        for (&p, (row, _)) in &self.rows {
            let mut r = row.clone();
            let below: Vec<usize> = r
                .keys()
                .copied()
                .filter(|k| *k < p && self.rows.contains_key(k))
                .collect();
            for k in below.into_iter().rev() {
                if let Some(c) = r.get(&k).cloned() {
                    let reduced = out.get(&k).expect("lower pivots processed first");
                    axpy(&mut r, &c.neg(), reduced);
                }
            }
            out.insert(p, r);
        }
        out
    }
}

/// Kernel basis of a matrix given by sparse rows.
pub fn kernel_of_rows<F: Field>(
    nrows: usize,
    ncols: usize,
    row: impl Fn(usize) -> SparseVec<F>,
) -> Vec<Vec<F>> {
    let mut e = Echelon::new();
    for i in 0..nrows {
        e.insert(row(i));
    }
    let rr = e.fully_reduced_rows();
    let free: Vec<usize> = (0..ncols).filter(|c| !rr.contains_key(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![F::zero(); ncols];
            x[f] = F::one();
            for (&p, r) in &rr {
                if let Some(c) = r.get(&f) {
                    x[p] = c.neg();
                }
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;

    fn m(rows: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|x| Rat::from_i64(*x)).collect())
                .collect(),
        )
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let ai = a.inverse().unwrap();
        assert_eq!(a.mul(&ai), Matrix::identity(3));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn kernel_is_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            let col = Matrix::from_rows(v.into_iter().map(|x| vec![x]).collect());
            assert!(a.mul(&col).is_zero());
        }
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn tracked_coordinates() {
        let mut e = Echelon::<Rat>::tracked();
        let v1 = dense_to_sparse(&[Rat::from_i64(1), Rat::from_i64(1), Rat::from_i64(0)]);
        let v2 = dense_to_sparse(&[Rat::from_i64(0), Rat::from_i64(1), Rat::from_i64(1)]);
        e.insert(v1.clone());
        e.insert(v2.clone());
        let mut target = v1.clone();
        axpy(&mut target, &Rat::from_i64(3), &v2);
        let (rem, combo) = e.reduce_tracked(&target);
        assert!(rem.is_empty());
        assert_eq!(combo.get(&0), Some(&Rat::from_i64(1)));
        assert_eq!(combo.get(&1), Some(&Rat::from_i64(3)));
    }

    #[test]
    fn kron_shape() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let k = a.kron(&Matrix::identity(2));
        assert_eq!(k.rows(), 4);
        assert_eq!(k.get(2, 0), &Rat::from_i64(3));
    }
}
