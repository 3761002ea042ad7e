//! Dense arbitrary-precision integer matrices, Smith normal form with
//! unimodular transforms, and the lattice questions built on top of it
//! (membership, minimal multipliers, kernels, intersections).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row-major entries.
    ///
    /// Panics when `entries.len() != rows * cols`.
    pub fn from_row_major<T: Into<BigInt>>(rows: usize, cols: usize, entries: Vec<T>) -> Self {
        assert_eq!(
            entries.len(),
            rows * cols,
            "entry count must equal rows*cols"
        );
        IntMatrix {
            rows,
            cols,
            entries: entries.into_iter().map(Into::into).collect(),
        }
    }

    /// Builds a `len × columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns<T: Clone + Into<BigInt>>(len: usize, columns: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(len, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), len, "column {j} has wrong length");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix product"
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(
            self.cols,
            v.len(),
            "dimension mismatch in matrix-vector product"
        );
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| !v[j].is_zero())
                    .map(|j| &self[(i, j)] * &v[j])
                    .sum()
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = &self[(src, j)] * factor;
            self[(dst, j)] += delta;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = &self[(i, src)] * factor;
            self[(i, dst)] += delta;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `u · a · v = diag(d)` with `u`, `v` unimodular; the inverses are kept
/// alongside so callers never have to invert.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub d: Vec<BigInt>,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.d.iter().take_while(|x| !x.is_zero()).count()
    }

    /// The `rows × cols` diagonal matrix of invariant factors.
    pub fn diagonal(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.u.rows(), self.v.cols());
        for (i, x) in self.d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }
}

struct SnfWork {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfWork {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        self.a.add_row_multiple(dst, src, factor);
        self.u.add_row_multiple(dst, src, factor);
        self.u_inv.add_col_multiple(src, dst, &-factor);
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        self.a.add_col_multiple(dst, src, factor);
        self.v.add_col_multiple(dst, src, factor);
        self.v_inv.add_row_multiple(src, dst, &-factor);
    }

    fn negate_row(&mut self, r: usize) {
        self.a.negate_row(r);
        self.u.negate_row(r);
        // negating a row of u negates the matching column of u^-1
        for i in 0..self.u_inv.rows() {
            let v = -&self.u_inv[(i, r)];
            self.u_inv[(i, r)] = v;
        }
    }

    /// Position of the smallest nonzero |entry| in the trailing block.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = SnfWork {
        a: a.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = w.min_pivot(t) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        loop {
            // clear column t below the pivot
            let mut dirty = false;
            for i in t + 1..rows {
                if w.a[(i, t)].is_zero() {
                    continue;
                }
                let q = w.a[(i, t)].div_floor(&w.a[(t, t)]);
                w.add_row_multiple(i, t, &-q);
                if !w.a[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            // clear row t right of the pivot
            for j in t + 1..cols {
                if w.a[(t, j)].is_zero() {
                    continue;
                }
                let q = w.a[(t, j)].div_floor(&w.a[(t, t)]);
                w.add_col_multiple(j, t, &-q);
                if !w.a[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a remainder is now smaller than the pivot; move it in place
                let mut best = (t, t);
                for i in t..rows {
                    let x = &w.a[(i, t)];
                    if !x.is_zero() && x.abs() < w.a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    let x = &w.a[(t, j)];
                    if !x.is_zero() && x.abs() < w.a[best].abs() {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }

            // divisibility of the trailing block by the pivot
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !w.a[(i, j)].is_multiple_of(&w.a[(t, t)]));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    w.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
    }

    let d = (0..rows.min(cols)).map(|i| w.a[(i, i)].clone()).collect();
    SnfResult {
        d,
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
        v_inv: w.v_inv,
    }
}

/// Coordinates of `v` in the Smith basis of the column lattice, i.e. `u · v`.
fn smith_coordinates(snf: &SnfResult, v: &[BigInt]) -> Vec<BigInt> {
    snf.u.mul_vec(v)
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// True iff `v` is an integer combination of the columns of `basis_cols`.
pub fn lattice_contains(basis_cols: &IntMatrix, v: &[i64]) -> bool {
    lattice_contains_big(basis_cols, &to_big(v))
}

pub fn lattice_contains_big(basis_cols: &IntMatrix, v: &[BigInt]) -> bool {
    assert_eq!(
        v.len(),
        basis_cols.rows(),
        "vector length must equal row count"
    );
    let snf = smith_normal_form(basis_cols);
    let c = smith_coordinates(&snf, v);
    let rank = snf.rank();
    c.iter().enumerate().all(|(i, ci)| {
        if i < rank {
            ci.is_multiple_of(&snf.d[i])
        } else {
            ci.is_zero()
        }
    })
}

/// Smallest `d ≥ 1` with `d·v` in the column lattice, or `None` when `v` is
/// outside the rational span of the columns.
pub fn minimal_multiplier(basis_cols: &IntMatrix, v: &[i64]) -> Option<BigInt> {
    minimal_multiplier_big(basis_cols, &to_big(v))
}

pub fn minimal_multiplier_big(basis_cols: &IntMatrix, v: &[BigInt]) -> Option<BigInt> {
    assert_eq!(
        v.len(),
        basis_cols.rows(),
        "vector length must equal row count"
    );
    let snf = smith_normal_form(basis_cols);
    let c = smith_coordinates(&snf, v);
    let rank = snf.rank();
    if c[rank..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut d = BigInt::one();
    for (s, ci) in snf.d[..rank].iter().zip(&c) {
        let need = s / s.gcd(ci);
        d = d.lcm(&need);
    }
    Some(d)
}

/// A Z-basis of the integer kernel `{x : a·x = 0}`, returned as columns.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let cols: Vec<Vec<BigInt>> = (rank..a.cols()).map(|j| snf.v.column(j)).collect();
    IntMatrix::from_columns(a.cols(), &cols)
}

/// A Z-basis (as columns) of the lattice spanned by the columns of `gens`.
pub fn column_lattice_basis(gens: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(gens);
    let rank = snf.rank();
    let cols: Vec<Vec<BigInt>> = (0..rank)
        .map(|i| {
            snf.u_inv
                .column(i)
                .into_iter()
                .map(|x| x * &snf.d[i])
                .collect()
        })
        .collect();
    IntMatrix::from_columns(gens.rows(), &cols)
}

/// A Z-basis of the intersection of the column lattices of `a` and `b`.
pub fn lattice_intersection(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(
        a.rows(),
        b.rows(),
        "lattices live in different ambient spaces"
    );
    if a.cols() == 0 || b.cols() == 0 {
        return IntMatrix::zeros(a.rows(), 0);
    }
    // a·x = b·y  <=>  [a | -b] (x; y) = 0
    let kernel = kernel_basis(&a.hcat(&b.neg()));
    let mut gens = Vec::with_capacity(kernel.cols());
    for j in 0..kernel.cols() {
        let x: Vec<BigInt> = kernel.column(j)[..a.cols()].to_vec();
        gens.push(a.mul_vec(&x));
    }
    column_lattice_basis(&IntMatrix::from_columns(a.rows(), &gens))
}
