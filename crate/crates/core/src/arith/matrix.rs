//! Labeled dense matrices, determinants, rank and kernels over a field.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use super::field::Field;
use super::poly::MultiPoly;
use super::ArithError;

/// Largest size for which symbolic determinants are expanded.
pub const SYMBOLIC_DET_LIMIT: usize = 10;

/// A dense matrix whose rows and columns carry unique labels.
#[derive(Clone, PartialEq, Eq)]
pub struct LabeledMatrix<R, C, T> {
    row_labels: Vec<R>,
    col_labels: Vec<C>,
    entries: Vec<T>,
}

impl<R: fmt::Debug, C, T: fmt::Debug> fmt::Debug for LabeledMatrix<R, C, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LabeledMatrix {}x{}", self.row_labels.len(), self.col_labels.len())?;
        let ncols = self.col_labels.len();
        for (r, l) in self.row_labels.iter().enumerate() {
            writeln!(f, "  {l:?}: {:?}", &self.entries[r * ncols..(r + 1) * ncols])?;
        }
        Ok(())
    }
}

impl<R, C, T> LabeledMatrix<R, C, T>
where
    R: Clone + Eq + Hash + fmt::Debug,
    C: Clone + Eq + Hash + fmt::Debug,
    T: Clone,
{
    /// Builds a matrix from row-major entries. Labels must be unique per axis.
    pub fn new(row_labels: Vec<R>, col_labels: Vec<C>, entries: Vec<T>) -> Result<Self, ArithError> {
        if entries.len() != row_labels.len() * col_labels.len() {
            return Err(ArithError::Shape(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                row_labels.len(),
                col_labels.len()
            )));
        }
        check_unique(&row_labels)?;
        check_unique(&col_labels)?;
        Ok(LabeledMatrix {
            row_labels,
            col_labels,
            entries,
        })
    }

    pub fn from_fn(row_labels: Vec<R>, col_labels: Vec<C>, mut f: impl FnMut(&R, &C) -> T) -> Result<Self, ArithError> {
        let mut entries = Vec::with_capacity(row_labels.len() * col_labels.len());
        for r in &row_labels {
            for c in &col_labels {
                entries.push(f(r, c));
            }
        }
        Self::new(row_labels, col_labels, entries)
    }

    pub fn nrows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn row_labels(&self) -> &[R] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[C] {
        &self.col_labels
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.entries[r * self.ncols() + c]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[T] {
        let n = self.ncols();
        &self.entries[r * n..(r + 1) * n]
    }

    /// Submatrix on the given row and column positions, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                entries.push(self.get(r, c).clone());
            }
        }
        LabeledMatrix {
            row_labels: rows.iter().map(|&r| self.row_labels[r].clone()).collect(),
            col_labels: cols.iter().map(|&c| self.col_labels[c].clone()).collect(),
            entries,
        }
    }

    /// Submatrix selected by labels; unknown labels are an error.
    pub fn submatrix_by_labels(&self, rows: &[R], cols: &[C]) -> Result<Self, ArithError> {
        let ri: HashMap<&R, usize> = self.row_labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let ci: HashMap<&C, usize> = self.col_labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let rows: Vec<usize> = rows
            .iter()
            .map(|l| ri.get(l).copied().ok_or_else(|| ArithError::Shape(format!("unknown row label {l:?}"))))
            .collect::<Result<_, _>>()?;
        let cols: Vec<usize> = cols
            .iter()
            .map(|l| ci.get(l).copied().ok_or_else(|| ArithError::Shape(format!("unknown column label {l:?}"))))
            .collect::<Result<_, _>>()?;
        Ok(self.submatrix(&rows, &cols))
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> LabeledMatrix<R, C, U> {
        LabeledMatrix {
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> LabeledMatrix<C, R, T> {
        let (n, m) = (self.nrows(), self.ncols());
        let mut entries = Vec::with_capacity(n * m);
        for c in 0..m {
            for r in 0..n {
                entries.push(self.get(r, c).clone());
            }
        }
        LabeledMatrix {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            entries,
        }
    }
}

fn check_unique<L: Eq + Hash + fmt::Debug>(labels: &[L]) -> Result<(), ArithError> {
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(ArithError::Shape(format!("duplicate label {l:?}")));
        }
    }
    Ok(())
}

/// Determinant of a square row-major matrix by fraction-free (Bareiss)
/// elimination.
pub fn det<F: Field>(field: &F, n: usize, entries: &[F::Elem]) -> F::Elem {
    assert_eq!(entries.len(), n * n);
    if n == 0 {
        return field.one();
    }
    let mut a: Vec<F::Elem> = entries.to_vec();
    let mut sign_flip = false;
    let mut prev = field.one();
    for k in 0..n - 1 {
        if field.is_zero(&a[k * n + k]) {
            let Some(p) = (k + 1..n).find(|&r| !field.is_zero(&a[r * n + k])) else {
                return field.zero();
            };
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            sign_flip = !sign_flip;
        }
        let pivot = a[k * n + k].clone();
        let prev_inv = field.inv(&prev).expect("nonzero previous pivot");
        for i in k + 1..n {
            for j in k + 1..n {
                let t = field.sub(
                    &field.mul(&pivot, &a[i * n + j]),
                    &field.mul(&a[i * n + k], &a[k * n + j]),
                );
                a[i * n + j] = field.mul(&t, &prev_inv);
            }
            a[i * n + k] = field.zero();
        }
        prev = pivot;
    }
    let d = a[n * n - 1].clone();
    if sign_flip {
        field.neg(&d)
    } else {
        d
    }
}

/// Determinant of a labeled square matrix over a field.
pub fn det_labeled<F, R, C>(field: &F, m: &LabeledMatrix<R, C, F::Elem>) -> Result<F::Elem, ArithError>
where
    F: Field,
    R: Clone + Eq + Hash + fmt::Debug,
    C: Clone + Eq + Hash + fmt::Debug,
{
    if m.nrows() != m.ncols() {
        return Err(ArithError::Shape(format!("{}x{} is not square", m.nrows(), m.ncols())));
    }
    Ok(det(field, m.nrows(), m.entries()))
}

/// Row-reduced echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(field: &F, rows: usize, cols: usize, a: &mut [F::Elem]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !field.is_zero(&a[i * cols + c])) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = field.inv(&a[r * cols + c]).expect("nonzero pivot");
        for j in 0..cols {
            a[r * cols + j] = field.mul(&a[r * cols + j], &inv);
        }
        for i in 0..rows {
            if i != r && !field.is_zero(&a[i * cols + c]) {
                let f = a[i * cols + c].clone();
                for j in 0..cols {
                    let t = field.mul(&f, &a[r * cols + j]);
                    a[i * cols + j] = field.sub(&a[i * cols + j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(field: &F, rows: usize, cols: usize, entries: &[F::Elem]) -> usize {
    let mut a = entries.to_vec();
    rref(field, rows, cols, &mut a).len()
}

/// Basis of the right kernel `{x : A x = 0}`.
pub fn kernel<F: Field>(field: &F, rows: usize, cols: usize, entries: &[F::Elem]) -> Vec<Vec<F::Elem>> {
    let mut a = entries.to_vec();
    let pivots = rref(field, rows, cols, &mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(&a[r * cols + f]);
            }
            v
        })
        .collect()
}

/// Solves the square system `A x = b`; `None` if `A` is singular.
pub fn solve<F: Field>(field: &F, n: usize, a: &[F::Elem], b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let cols = n + 1;
    let mut aug = Vec::with_capacity(n * cols);
    for r in 0..n {
        aug.extend_from_slice(&a[r * n..(r + 1) * n]);
        aug.push(b[r].clone());
    }
    let pivots = rref(field, n, cols, &mut aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some((0..n).map(|r| aug[r * cols + n].clone()).collect())
}

/// Positions of a maximal set of linearly independent columns, scanning
/// columns in the given order.
pub fn independent_columns<F: Field>(
    field: &F,
    rows: usize,
    cols: usize,
    entries: &[F::Elem],
    order: &[usize],
) -> Vec<usize> {
    let mut permuted = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for &c in order {
            permuted.push(entries[r * cols + c].clone());
        }
    }
    rref(field, rows, order.len(), &mut permuted)
        .into_iter()
        .map(|p| order[p])
        .collect()
}

/// Determinant of a square matrix of polynomials by expansion along rows,
/// memoized over column subsets. Refuses sizes above `limit`.
pub fn det_symbolic<F: Field>(
    n: usize,
    entries: &[MultiPoly<F>],
    field: &F,
    vars: &Arc<Vec<String>>,
    limit: usize,
) -> Result<MultiPoly<F>, ArithError> {
    assert_eq!(entries.len(), n * n);
    if n > limit {
        return Err(ArithError::SymbolicTooLarge { size: n, limit });
    }
    if n == 0 {
        return Ok(MultiPoly::one(field.clone(), vars.clone()));
    }
    // minors[mask] = det of rows 0..popcount(mask) on columns in mask.
    let mut minors: HashMap<u32, MultiPoly<F>> = HashMap::new();
    minors.insert(0, MultiPoly::one(field.clone(), vars.clone()));
    for k in 0..n {
        let mut next: HashMap<u32, MultiPoly<F>> = HashMap::new();
        for (mask, minor) in &minors {
            if minor.is_zero() {
                continue;
            }
            for c in 0..n {
                if mask & (1 << c) != 0 {
                    continue;
                }
                let e = &entries[k * n + c];
                if e.is_zero() {
                    continue;
                }
                // Sign of placing column c after the columns already used
                // that are to its right.
                let above = (mask >> (c + 1)).count_ones();
                let mut term = minor.mul(e);
                if above % 2 == 1 {
                    term = term.neg();
                }
                let slot = next
                    .entry(mask | (1 << c))
                    .or_insert_with(|| MultiPoly::zero(field.clone(), vars.clone()));
                *slot = slot.add(&term);
            }
        }
        minors = next;
    }
    Ok(minors
        .remove(&((1u32 << n) - 1))
        .unwrap_or_else(|| MultiPoly::zero(field.clone(), vars.clone())))
}
