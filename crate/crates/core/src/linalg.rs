//! Dense exact linear algebra over a finite field.
//!
//! Matrices are immutable values: every operation returns a fresh matrix.
//! Elimination uses the first nonzero entry of each column as pivot.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::poly::Poly;

/// Default cap on `|F^×|` for [`Matrix::min_rank_shift`].
pub const SHIFT_BUDGET: u64 = 1 << 16;

pub type Vector = Vec<FieldElement>;

#[derive(Clone)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
            && self.field == other.field
    }
}

impl Eq for Matrix {}

impl Hash for Matrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Matrix[{}x{} over GF({})]({})",
            self.rows,
            self.cols,
            self.field.order(),
            self
        )
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(";")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(",")?;
                }
                let a = self.get(i, j);
                if self.field.degree() == 1 {
                    write!(f, "{}", a.index())?;
                } else {
                    write!(f, "[{}]", self.field.format_element(a))?;
                }
            }
        }
        Ok(())
    }
}

/// Result of minimizing `rank(g - alpha h)` over `alpha` in `F^×`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankShift {
    pub rank: usize,
    /// All minimizers, ascending by element index.
    pub argmins: Vec<FieldElement>,
}

/// Row echelon data of a matrix.
struct Echelon {
    reduced: Matrix,
    pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        Matrix::scalar(field, n, FieldElement::ONE)
    }

    pub fn scalar(field: &Field, n: usize, a: FieldElement) -> Matrix {
        Matrix::from_fn(
            field,
            n,
            n,
            |i, j| if i == j { a } else { FieldElement::ZERO },
        )
    }

    pub fn diagonal(field: &Field, diag: &[FieldElement]) -> Matrix {
        let n = diag.len();
        Matrix::from_fn(field, n, n, |i, j| {
            if i == j {
                diag[i]
            } else {
                FieldElement::ZERO
            }
        })
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut entry: impl FnMut(usize, usize) -> FieldElement,
    ) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(entry(i, j));
            }
        }
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Row-major integer entries mapped into the prime subfield.
    pub fn from_ints(field: &Field, rows: usize, cols: usize, entries: &[i64]) -> Matrix {
        assert_eq!(
            entries.len(),
            rows * cols,
            "entry count must equal rows * cols"
        );
        Matrix::from_fn(field, rows, cols, |i, j| {
            field.from_int(entries[i * cols + j])
        })
    }

    pub fn from_rows(field: &Field, rows: &[Vector]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix::from_fn(field, rows.len(), cols, |i, j| rows[i][j]))
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(field: &Field, rows: usize, columns: &[Vector]) -> Matrix {
        Matrix::from_fn(field, rows, columns.len(), |i, j| columns[j][i])
    }

    /// Companion matrix of a monic polynomial of degree at least 1.
    pub fn companion(field: &Field, f: &Poly) -> Matrix {
        let d = f.degree().expect("nonzero polynomial");
        Matrix::from_fn(field, d, d, |i, j| {
            if j + 1 == d {
                field.neg(f.coeff(i))
            } else if i == j + 1 {
                FieldElement::ONE
            } else {
                FieldElement::ZERO
            }
        })
    }

    pub fn block_diagonal(field: &Field, blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut data = vec![FieldElement::ZERO; n * m];
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    data[(r0 + i) * m + c0 + j] = b.get(i, j);
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Matrix {
            field: field.clone(),
            rows: n,
            cols: m,
            data,
        }
    }

    /// `[[a, b], [c, d]]` from four blocks of compatible shapes.
    pub fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<Matrix> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::DimensionMismatch("incompatible block shapes".into()));
        }
        let (rows, cols) = (a.rows + c.rows, a.cols + b.cols);
        Ok(Matrix::from_fn(&a.field, rows, cols, |i, j| {
            match (i < a.rows, j < a.cols) {
                (true, true) => a.get(i, j),
                (true, false) => b.get(i, j - a.cols),
                (false, true) => c.get(i - a.rows, j),
                (false, false) => d.get(i - a.rows, j - a.cols),
            }
        }))
    }

    pub fn field(&self) -> &Field {
        &self.field
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

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    /// Copy with one entry replaced.
    pub fn with_entry(&self, i: usize, j: usize, a: FieldElement) -> Matrix {
        let mut out = self.clone();
        out.data[i * self.cols + j] = a;
        out
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(&self.field, rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Ok(Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, c: FieldElement) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.neg(a)).collect();
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// `self - c * I`.
    pub fn shift(&self, c: FieldElement) -> Matrix {
        assert!(self.is_square(), "shift needs a square matrix");
        let f = &self.field;
        let mut out = self.clone();
        for i in 0..self.rows {
            let k = i * self.cols + i;
            out.data[k] = f.sub(out.data[k], c);
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let (n, m) = (self.rows, other.cols);
        let mut data = vec![FieldElement::ZERO; n * m];
        for i in 0..n {
            let out_row = &mut data[i * m..(i + 1) * m];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let row = &other.data[k * m..(k + 1) * m];
                for (o, &b) in out_row.iter_mut().zip(row) {
                    if !b.is_zero() {
                        *o = f.add(*o, f.mul(a, b));
                    }
                }
            }
        }
        Ok(Matrix {
            field: f.clone(),
            rows: n,
            cols: m,
            data,
        })
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(FieldElement::ZERO, |acc, j| {
                    f.add(acc, f.mul(self.get(i, j), v[j]))
                })
            })
            .collect())
    }

    pub fn pow(&self, mut exp: u64) -> Matrix {
        assert!(self.is_square(), "pow needs a square matrix");
        let mut base = self.clone();
        let mut acc = Matrix::identity(&self.field, self.rows);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("square");
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).expect("square");
            }
        }
        acc
    }

    /// `x^k` for a possibly negative exponent.
    pub fn pow_signed(&self, exp: i64) -> Result<Matrix> {
        if exp >= 0 {
            Ok(self.pow(exp as u64))
        } else {
            Ok(self.inverse()?.pow(exp.unsigned_abs()))
        }
    }

    /// `f(self)` by Horner's rule.
    pub fn eval_poly(&self, f: &Poly) -> Matrix {
        let n = self.rows;
        let mut acc = Matrix::zeros(&self.field, n, n);
        for &c in f.coeffs().iter().rev() {
            acc = acc.mul(self).expect("square").shift(self.field.neg(c));
        }
        acc
    }

    /// `self * other - other * self`.
    pub fn commutator_bracket(&self, other: &Matrix) -> Result<Matrix> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn commutes_with(&self, other: &Matrix) -> bool {
        self.mul(other).ok() == other.mul(self).ok()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(&self.field, self.rows)
    }

    /// `Some(a)` iff the matrix equals `a * I`.
    pub fn as_scalar(&self) -> Option<FieldElement> {
        if !self.is_square() {
            return None;
        }
        let a = if self.rows == 0 {
            FieldElement::ONE
        } else {
            self.get(0, 0)
        };
        (*self == Matrix::scalar(&self.field, self.rows, a)).then_some(a)
    }

    fn echelon(&self) -> Echelon {
        let f = &self.field;
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !m.data[i * cols + c].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    m.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(m.data[r * cols + c]).expect("pivot is nonzero");
            for j in c..cols {
                let k = r * cols + j;
                m.data[k] = f.mul(m.data[k], inv);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = m.data[i * cols + c];
                if factor.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let pivot_entry = m.data[r * cols + j];
                    if !pivot_entry.is_zero() {
                        let k = i * cols + j;
                        m.data[k] = f.sub(m.data[k], f.mul(factor, pivot_entry));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let e = self.echelon();
        (e.reduced, e.pivots)
    }

    pub fn rank(&self) -> usize {
        let f = &self.field;
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !m[i * cols + c].is_zero()) else {
                continue;
            };
            if p != r {
                for j in c..cols {
                    m.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(m[r * cols + c]).expect("pivot is nonzero");
            for i in r + 1..rows {
                let factor = m[i * cols + c];
                if factor.is_zero() {
                    continue;
                }
                let factor = f.mul(factor, inv);
                for j in c..cols {
                    let pivot_entry = m[r * cols + j];
                    if !pivot_entry.is_zero() {
                        let k = i * cols + j;
                        m[k] = f.sub(m[k], f.mul(factor, pivot_entry));
                    }
                }
            }
            r += 1;
        }
        r
    }

    /// Basis of the right kernel `{v : self v = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let Echelon { reduced, pivots } = self.echelon();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![FieldElement::ZERO; self.cols];
                v[fc] = FieldElement::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(reduced.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// Some solution of `self v = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[FieldElement]) -> Result<Option<Vector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("right-hand side length".into()));
        }
        let augmented = Matrix::from_fn(&self.field, self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                b[i]
            }
        });
        let Echelon { reduced, pivots } = augmented.echelon();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut v = vec![FieldElement::ZERO; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = reduced.get(r, self.cols);
        }
        Ok(Some(v))
    }

    pub fn det(&self) -> Result<FieldElement> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let f = &self.field;
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = FieldElement::ONE;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[i * n + c].is_zero()) else {
                return Ok(FieldElement::ZERO);
            };
            if p != c {
                for j in c..n {
                    m.swap(p * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let pivot = m[c * n + c];
            det = f.mul(det, pivot);
            let inv = f.inv(pivot).expect("pivot is nonzero");
            for i in c + 1..n {
                let factor = m[i * n + c];
                if factor.is_zero() {
                    continue;
                }
                let factor = f.mul(factor, inv);
                for j in c..n {
                    let pivot_entry = m[c * n + j];
                    if !pivot_entry.is_zero() {
                        m[i * n + j] = f.sub(m[i * n + j], f.mul(factor, pivot_entry));
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let augmented = Matrix::from_fn(&self.field, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j)
            } else if j - n == i {
                FieldElement::ONE
            } else {
                FieldElement::ZERO
            }
        });
        let Echelon { reduced, pivots } = augmented.echelon();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(reduced.submatrix(0, n, n, n))
    }

    /// Basis of `{M : self M = M self}`, as matrices.
    pub fn commutant_basis(&self) -> Vec<Matrix> {
        self.twisted_commutant_basis(FieldElement::ONE)
    }

    /// Basis of `{M : lambda * self M = M self}`; `lambda = 1` is the commutant.
    pub fn twisted_commutant_basis(&self, lambda: FieldElement) -> Vec<Matrix> {
        assert!(self.is_square(), "commutant of a non-square matrix");
        let f = &self.field;
        let n = self.rows;
        let nn = n * n;
        // Unknown M_{cb} sits at column c * n + b; equation (a, b) at row a * n + b.
        let mut system = vec![FieldElement::ZERO; nn * nn];
        for a in 0..n {
            for b in 0..n {
                let row = a * n + b;
                for c in 0..n {
                    let xac = f.mul(lambda, self.get(a, c));
                    let k = row * nn + c * n + b;
                    system[k] = f.add(system[k], xac);
                    let k = row * nn + a * n + c;
                    system[k] = f.sub(system[k], self.get(c, b));
                }
            }
        }
        let sys = Matrix {
            field: f.clone(),
            rows: nn,
            cols: nn,
            data: system,
        };
        sys.kernel_basis()
            .into_iter()
            .map(|v| Matrix {
                field: f.clone(),
                rows: n,
                cols: n,
                data: v,
            })
            .collect()
    }

    /// Minimum of `rank(self - alpha * h)` over all nonzero `alpha`, by exhaustive enumeration.
    pub fn min_rank_shift(&self, h: &Matrix) -> Result<RankShift> {
        self.min_rank_shift_with_budget(h, SHIFT_BUDGET)
    }

    pub fn min_rank_shift_with_budget(&self, h: &Matrix, budget: u64) -> Result<RankShift> {
        self.check_same_shape(h)?;
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "rank shift needs square matrices".into(),
            ));
        }
        let f = &self.field;
        let units = f.order() - 1;
        if units > budget {
            return Err(Error::Budget {
                needed: u128::from(units),
                budget: u128::from(budget),
            });
        }
        let mut best = usize::MAX;
        let mut argmins = Vec::new();
        for alpha in f.nonzero() {
            let r = self.sub(&h.scale(alpha))?.rank();
            if r < best {
                best = r;
                argmins.clear();
            }
            if r == best {
                argmins.push(alpha);
            }
        }
        Ok(RankShift {
            rank: best,
            argmins,
        })
    }

    /// Parses rows separated by `;` and entries by `,`. Extension-field
    /// entries are written `[c0,c1,...]`; a bare integer is a prime-subfield element.
    pub fn parse(field: &Field, text: &str) -> Result<Matrix> {
        let mut rows = Vec::new();
        for row_text in text.trim().split(';') {
            let row = split_entries(row_text)?
                .into_iter()
                .map(|tok| field.parse_element(&tok))
                .collect::<Result<Vector>>()?;
            rows.push(row);
        }
        let m = Matrix::from_rows(field, &rows)?;
        Ok(m)
    }
}

fn split_entries(row: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for ch in row.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch);
            }
            ']' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::parse("unbalanced ']' in matrix"))?;
                cur.push(ch);
            }
            ',' if depth == 0 => out.push(std::mem::take(&mut cur)),
            c if c.is_whitespace() => {}
            c => cur.push(c),
        }
    }
    if depth != 0 {
        return Err(Error::parse("unbalanced '[' in matrix"));
    }
    out.push(cur);
    if out.iter().any(String::is_empty) {
        return Err(Error::parse(format!("empty matrix entry in {row:?}")));
    }
    Ok(out)
}

/// Incrementally built span of vectors, kept in echelon form.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    field: Field,
    dim: usize,
    rows: Vec<(usize, Vector)>,
}

impl SpanBuilder {
    pub fn new(field: &Field, dim: usize) -> SpanBuilder {
        SpanBuilder {
            field: field.clone(),
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    fn reduce(&self, v: &[FieldElement]) -> Vector {
        let f = &self.field;
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if !c.is_zero() {
                for (a, &b) in v.iter_mut().zip(row) {
                    *a = f.sub(*a, f.mul(c, b));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns false when it already lies in the span.
    pub fn insert(&mut self, v: &[FieldElement]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length");
        let r = self.reduce(v);
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let f = &self.field;
        let inv = f.inv(r[pivot]).expect("nonzero pivot");
        let r: Vector = r.iter().map(|&x| f.mul(x, inv)).collect();
        for (_, row) in &mut self.rows {
            let c = row[pivot];
            if !c.is_zero() {
                for (a, &b) in row.iter_mut().zip(&r) {
                    *a = f.sub(*a, f.mul(c, b));
                }
            }
        }
        self.rows.push((pivot, r));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn rank_examples() {
        let f = gf(5);
        assert_eq!(Matrix::from_ints(&f, 2, 2, &[3, 0, 0, 0]).rank(), 1);
        assert_eq!(Matrix::zeros(&f, 4, 4).rank(), 0);
        assert_eq!(Matrix::zeros(&f, 3, 5).rank(), 0);
    }

    #[test]
    fn kernel_and_solve() {
        let f = gf(5);
        let m = Matrix::from_ints(&f, 2, 2, &[1, 0, 0, 0]);
        assert_eq!(m.kernel_basis(), vec![vec![f.zero(), f.one()]]);
        let a = Matrix::from_ints(&f, 2, 2, &[1, 2, 3, 4]);
        let b = vec![f.from_int(1), f.from_int(1)];
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), b);
        let singular = Matrix::from_ints(&f, 2, 2, &[1, 2, 2, 4]);
        assert_eq!(singular.solve(&[f.one(), f.zero()]).unwrap(), None);
    }

    #[test]
    fn det_inverse_and_pow() {
        let f = gf(7);
        assert_eq!(Matrix::identity(&f, 5).det().unwrap(), f.one());
        let a = Matrix::from_ints(&f, 3, 3, &[2, 1, 0, 0, 1, 3, 1, 0, 1]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        assert_eq!(
            Matrix::from_ints(&f, 2, 2, &[1, 2, 2, 4]).inverse(),
            Err(Error::Singular)
        );
        for p in [2u64, 3, 5, 7] {
            let fp = gf(p);
            let j = Matrix::from_ints(&fp, 2, 2, &[1, 1, 0, 1]);
            assert!(j.pow(p).is_identity());
            assert!(!j.pow(p - 1).is_identity());
        }
    }

    #[test]
    fn commutant_dimensions() {
        let f = gf(5);
        assert_eq!(
            Matrix::scalar(&f, 3, f.from_int(2)).commutant_basis().len(),
            9
        );
        let d = Matrix::from_ints(&f, 2, 2, &[1, 0, 0, 2]);
        let basis = d.commutant_basis();
        assert_eq!(basis.len(), 2);
        assert!(basis.iter().all(|m| d.commutes_with(m)));
        let j = Matrix::from_ints(&f, 2, 2, &[1, 1, 0, 1]);
        assert_eq!(j.commutant_basis().len(), 2);
    }

    #[test]
    fn min_rank_shift_examples() {
        let f = gf(5);
        let g = Matrix::from_ints(&f, 3, 3, &[2, 0, 0, 0, 1, 0, 0, 0, 1]);
        let i = Matrix::identity(&f, 3);
        assert_eq!(
            i.min_rank_shift(&i).unwrap(),
            RankShift {
                rank: 0,
                argmins: vec![f.one()]
            }
        );
        assert_eq!(
            g.min_rank_shift(&i).unwrap(),
            RankShift {
                rank: 1,
                argmins: vec![f.one()]
            }
        );
        let two = Matrix::scalar(&f, 3, f.from_int(2));
        assert_eq!(
            two.min_rank_shift(&i).unwrap(),
            RankShift {
                rank: 0,
                argmins: vec![f.from_int(2)]
            }
        );
        assert!(matches!(
            g.min_rank_shift_with_budget(&i, 3),
            Err(Error::Budget {
                needed: 4,
                budget: 3
            })
        ));
    }

    #[test]
    fn companion_matrix_satisfies_its_polynomial() {
        let f = gf(9);
        let p = Poly::binomial(&f, 4, f.primitive_element());
        for factor in p.factor_squarefree(&f) {
            let c = Matrix::companion(&f, &factor);
            assert!(c.eval_poly(&factor).is_zero());
        }
    }

    #[test]
    fn text_format_round_trip() {
        let f = gf(7);
        let m = Matrix::parse(&f, "1,2,3;4,5,6").unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 3));
        assert_eq!(m.to_string(), "1,2,3;4,5,6");
        let f9 = gf(9);
        let m9 = Matrix::parse(&f9, "[1,2],0;2,[0,1]").unwrap();
        assert_eq!(m9.to_string(), "[1,2],[0,0];[2,0],[0,1]");
        assert_eq!(Matrix::parse(&f9, &m9.to_string()).unwrap(), m9);
        assert!(Matrix::parse(&f, "1,2;3").is_err());
        assert!(Matrix::parse(&f, "1,,2").is_err());
    }

    #[test]
    fn span_builder_tracks_rank() {
        let f = gf(3);
        let mut span = SpanBuilder::new(&f, 3);
        assert!(span.insert(&[f.one(), f.one(), f.zero()]));
        assert!(span.insert(&[f.zero(), f.one(), f.one()]));
        assert!(span.contains(&[f.one(), f.from_int(2), f.one()]));
        assert!(!span.insert(&[f.one(), f.zero(), f.from_int(2)]));
        assert!(span.insert(&[f.zero(), f.zero(), f.one()]));
        assert!(span.is_full());
    }
}
