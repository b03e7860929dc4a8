//! Exact dense linear algebra over [`Scalar`].
//!
//! Every subspace is stored in reduced row echelon form, so two [`Subspace`]
//! values compare equal exactly when they are the same set of vectors.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

pub type Vector = Vec<Scalar>;

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    debug_assert_eq!(a.len(), b.len());
    let mut iter = a.iter().zip(b);
    let Some((x, y)) = iter.next() else {
        panic!("dot product of empty vectors has no field");
    };
    let mut acc = x * y;
    for (x, y) in iter {
        if !x.is_zero() && !y.is_zero() {
            acc = &acc + &(x * y);
        }
    }
    acc
}

fn check_vectors(field: Field, dim: usize, vectors: &[Vector]) -> Result<()> {
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
        }
        if v.iter().any(|x| x.field() != field) {
            return Err(Error::MixedFields);
        }
    }
    Ok(())
}

/// Row-reduces `rows` in place to reduced echelon form and returns the pivot
/// columns. Zero rows are dropped.
pub fn rref(rows: &mut Vec<Vector>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][col].inv().expect("pivot is nonzero");
        if !inv.is_one() {
            for x in rows[r][col..].iter_mut() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if !p.is_zero() {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Dense row-major matrix with entries in a single field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn from_rows(field: Field, cols: usize, rows: &[Vector]) -> Result<Matrix> {
        check_vectors(field, cols, rows)?;
        Ok(Matrix {
            field,
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().cloned().collect(),
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.row_vectors();
        rref(&mut rows, self.cols).len()
    }

    /// Row space as a canonical subspace of `field^cols`.
    pub fn row_space(&self) -> Subspace {
        let mut rows = self.row_vectors();
        let pivots = rref(&mut rows, self.cols);
        Subspace { field: self.field, ambient_dim: self.cols, basis: rows, pivots }
    }
}

/// A linear subspace of `field^ambient_dim` in canonical reduced echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient_dim: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

/// Linear span of `vectors` in `field^dim`.
pub fn span(field: Field, dim: usize, vectors: &[Vector]) -> Result<Subspace> {
    check_vectors(field, dim, vectors)?;
    let mut rows: Vec<Vector> = vectors.to_vec();
    let pivots = rref(&mut rows, dim);
    Ok(Subspace { field, ambient_dim: dim, basis: rows, pivots })
}

/// Rank of a family of vectors of common length `dim`.
pub fn rank(field: Field, dim: usize, vectors: &[Vector]) -> Result<usize> {
    Ok(span(field, dim, vectors)?.dim())
}

impl Subspace {
    pub fn zero(field: Field, ambient_dim: usize) -> Subspace {
        Subspace { field, ambient_dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient_dim: usize) -> Subspace {
        let basis = (0..ambient_dim)
            .map(|i| (0..ambient_dim).map(|j| if i == j { field.one() } else { field.zero() }).collect())
            .collect();
        Subspace { field, ambient_dim, basis, pivots: (0..ambient_dim).collect() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residue of `v` after elimination against the echelon basis.
    fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let factor = out[p].clone();
            for (x, b) in out.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x = &*x - &(&factor * b);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        check_vectors(self.field, self.ambient_dim, std::slice::from_ref(&v.to_vec()))?;
        Ok(self.contains_unchecked(v))
    }

    pub(crate) fn contains_unchecked(&self, v: &[Scalar]) -> bool {
        if self.is_full() {
            return true;
        }
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Span of this subspace together with `v`.
    pub fn extended(&self, v: &[Scalar]) -> Subspace {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        let pivots = rref(&mut rows, self.ambient_dim);
        Subspace { field: self.field, ambient_dim: self.ambient_dim, basis: rows, pivots }
    }

    /// Basis of the annihilator `{n : n·b = 0 for all b in self}`, one vector
    /// per free column, in increasing free-column order.
    pub fn annihilator(&self) -> Vec<Vector> {
        let s = self.ambient_dim;
        let mut free = Vec::new();
        let mut pivot_iter = self.pivots.iter().peekable();
        for c in 0..s {
            if pivot_iter.peek() == Some(&&c) {
                pivot_iter.next();
            } else {
                free.push(c);
            }
        }
        free.iter()
            .map(|&f| {
                let mut n = vec![self.field.zero(); s];
                n[f] = self.field.one();
                for (row, &p) in self.basis.iter().zip(&self.pivots) {
                    n[p] = -&row[f];
                }
                n
            })
            .collect()
    }

    /// The hyperplane `{v : normal·v = 0}`.
    pub fn hyperplane(normal: &[Scalar]) -> Subspace {
        let field = normal[0].field();
        let line = Subspace {
            field,
            ambient_dim: normal.len(),
            basis: Vec::new(),
            pivots: Vec::new(),
        };
        let line = line.extended(normal);
        let kernel = line.annihilator();
        span(field, normal.len(), &kernel).expect("kernel vectors share the field")
    }
}

/// Some `λ` with `λ·z = 0` for every `z` in `zeros` and `λ·unit = 1`.
///
/// Free coordinates of the echelon solution are set to zero.
pub fn solve_with_unit(field: Field, dim: usize, zeros: &[Vector], unit: &[Scalar]) -> Result<Option<Vector>> {
    check_vectors(field, dim, zeros)?;
    check_vectors(field, dim, std::slice::from_ref(&unit.to_vec()))?;
    let mut rows: Vec<Vector> = zeros
        .iter()
        .map(|z| {
            let mut r = z.clone();
            r.push(field.zero());
            r
        })
        .collect();
    let mut last = unit.to_vec();
    last.push(field.one());
    rows.push(last);
    let pivots = rref(&mut rows, dim + 1);
    if pivots.last() == Some(&dim) {
        return Ok(None);
    }
    let mut lambda = vec![field.zero(); dim];
    for (row, &p) in rows.iter().zip(&pivots) {
        lambda[p] = row[dim].clone();
    }
    Ok(Some(lambda))
}

/// A normal vector `n` with `n·b = 0` on `l` and `n·v ≠ 0` for every avoided
/// `v`, i.e. a hyperplane `ker n ⊇ l` missing all of `avoid`.
///
/// Over `F_p` the projective space of candidate normals is searched
/// exhaustively, so `None` means no such hyperplane exists. Over ℚ integer
/// combinations of the annihilator basis are tried by increasing height,
/// which always terminates.
pub fn hyperplane_normal(l: &Subspace, avoid: &[Vector]) -> Result<Option<Vector>> {
    check_vectors(l.field, l.ambient_dim, avoid)?;
    if l.is_full() || avoid.iter().any(|v| l.contains_unchecked(v)) {
        return Ok(None);
    }
    let ann = l.annihilator();
    let k = ann.len();
    let field = l.field;
    // Pairing of each annihilator generator with each avoided vector; a
    // normal with coordinates c avoids v iff Σ c_i·pairing[v][i] ≠ 0.
    let pairing: Vec<Vector> = avoid.iter().map(|v| ann.iter().map(|n| dot(n, v)).collect()).collect();
    let good = |c: &[Scalar]| pairing.iter().all(|row| !dot(row, c).is_zero());
    let combine = |c: &[Scalar]| -> Vector {
        (0..l.ambient_dim)
            .map(|j| {
                c.iter()
                    .zip(&ann)
                    .fold(field.zero(), |acc, (ci, n)| if ci.is_zero() { acc } else { &acc + &(ci * &n[j]) })
            })
            .collect()
    };
    match field {
        Field::Prime(p) => {
            for lead in 0..k {
                let tail = k - lead - 1;
                let total = (p as u128).checked_pow(tail as u32).unwrap_or(u128::MAX);
                let mut counter = vec![0u64; tail];
                for _ in 0..total {
                    let mut c = vec![field.zero(); k];
                    c[lead] = field.one();
                    for (slot, &digit) in c[lead + 1..].iter_mut().zip(&counter) {
                        *slot = field.from_i64(digit as i64);
                    }
                    if good(&c) {
                        return Ok(Some(combine(&c)));
                    }
                    for digit in counter.iter_mut().rev() {
                        *digit += 1;
                        if *digit < p {
                            break;
                        }
                        *digit = 0;
                    }
                }
            }
            Ok(None)
        }
        Field::Rationals => {
            for height in 1i64.. {
                let width = (2 * height + 1) as usize;
                let mut counter = vec![0usize; k];
                loop {
                    let coords: Vec<i64> = counter.iter().map(|&d| d as i64 - height).collect();
                    if coords.iter().any(|c| c.abs() == height) {
                        let c: Vector = coords.iter().map(|&v| field.from_i64(v)).collect();
                        if good(&c) {
                            return Ok(Some(combine(&c)));
                        }
                    }
                    let mut carry = true;
                    for digit in counter.iter_mut().rev() {
                        *digit += 1;
                        if *digit < width {
                            carry = false;
                            break;
                        }
                        *digit = 0;
                    }
                    if carry {
                        break;
                    }
                }
            }
            unreachable!("height search over an infinite field terminates")
        }
    }
}

/// A hyperplane `H ⊇ l` with `avoid ∩ H = ∅`, if one exists.
pub fn extend_to_hyperplane(l: &Subspace, avoid: &[Vector]) -> Result<Option<Subspace>> {
    Ok(hyperplane_normal(l, avoid)?.map(|n| Subspace::hyperplane(&n)))
}
