//! Integer matrices: the banded weight matrices `R_j`, Smith normal form,
//! gcd of minors and the prime criterion for unit Smith forms.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinAlgError {
    #[error("weight vector needs length at least 2 and a nonzero last entry")]
    BadWeights,
    #[error("minor order {k} out of range for a {rows}x{cols} matrix")]
    BadOrder { k: usize, rows: usize, cols: usize },
    #[error("matrix dimensions must be positive and match the data")]
    BadShape,
    #[error("Smith form and minors gcd disagree for R_{j}")]
    SnfMismatch { j: usize },
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinAlgError> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(LinAlgError::BadShape);
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self, LinAlgError> {
        Matrix::new(rows, cols, vec![T::zero(); rows * cols])
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinAlgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinAlgError::BadShape);
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "[ {} ]", line.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for Matrix<BigInt> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<_> = self.row(i).iter().map(crate::jsonint::Wrap).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

fn check_weights(a: &[BigInt]) -> Result<usize, LinAlgError> {
    match a.last() {
        Some(l) if a.len() >= 2 && !l.is_zero() => Ok(a.len() - 1),
        _ => Err(LinAlgError::BadWeights),
    }
}

/// `(j+1) × (d+j+1)` matrix whose row `i` holds `a_0..a_d` in columns `i..=i+d`.
pub fn build_rj(a: &[BigInt], j: usize) -> Result<IntMatrix, LinAlgError> {
    let d = check_weights(a)?;
    let mut out = Matrix::zeros(j + 1, d + j + 1)?;
    for i in 0..=j {
        for (k, ak) in a.iter().enumerate() {
            out.set(i, i + k, ak.clone());
        }
    }
    Ok(out)
}

/// `R_j` with its bottom-right entry replaced by `-aa`.
pub fn build_rj_a(a: &[BigInt], j: usize, aa: &BigInt) -> Result<IntMatrix, LinAlgError> {
    let mut out = build_rj(a, j)?;
    let (r, c) = (out.rows(), out.cols());
    out.set(r - 1, c - 1, -aa);
    Ok(out)
}

/// Smith normal form by elementary row and column operations, pivoting on
/// the entry of least absolute value. Returns `D` and its diagonal
/// (length `min(rows, cols)`), nonnegative with each entry dividing the next.
pub fn smith_normal_form<T>(a: &Matrix<T>) -> (Matrix<T>, Vec<T>)
where
    T: Clone + Integer + Signed,
{
    let mut m = a.clone();
    let n = m.rows.min(m.cols);
    for t in 0..n {
        let Some((pi, pj)) = min_abs_entry(&m, t) else {
            break;
        };
        m.swap_rows(t, pi);
        m.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m.rows {
                let q = m.get(i, t).clone() / m.get(t, t).clone();
                if !q.is_zero() {
                    for c in t..m.cols {
                        let v = m.get(i, c).clone() - q.clone() * m.get(t, c).clone();
                        m.set(i, c, v);
                    }
                }
                dirty |= !m.get(i, t).is_zero();
            }
            for j in t + 1..m.cols {
                let q = m.get(t, j).clone() / m.get(t, t).clone();
                if !q.is_zero() {
                    for r in t..m.rows {
                        let v = m.get(r, j).clone() - q.clone() * m.get(r, t).clone();
                        m.set(r, j, v);
                    }
                }
                dirty |= !m.get(t, j).is_zero();
            }
            if !dirty {
                // Pivot must divide the whole remaining block.
                let p = m.get(t, t).clone();
                let bad = (t + 1..m.rows)
                    .flat_map(|i| (t + 1..m.cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !m.get(i, j).is_multiple_of(&p));
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for c in t..m.cols {
                            let v = m.get(t, c).clone() + m.get(i, c).clone();
                            m.set(t, c, v);
                        }
                    }
                }
            }
            let (pi, pj) = min_abs_entry_cross(&m, t);
            m.swap_rows(t, pi);
            m.swap_cols(t, pj);
        }
        if m.get(t, t).is_negative() {
            let v = -m.get(t, t).clone();
            m.set(t, t, v);
        }
    }
    let diag = (0..n).map(|i| m.get(i, i).clone()).collect();
    (m, diag)
}

fn min_abs_entry<T: Clone + Integer + Signed>(m: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows {
        for j in t..m.cols {
            let v = m.get(i, j);
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < m.get(bi, bj).abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

// Smallest nonzero entry in row t or column t (the pivot itself included).
fn min_abs_entry_cross<T: Clone + Integer + Signed>(m: &Matrix<T>, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let cand = (t..m.rows)
        .map(|i| (i, t))
        .chain((t + 1..m.cols).map(|j| (t, j)));
    for (i, j) in cand {
        let v = m.get(i, j);
        if !v.is_zero() && (m.get(best.0, best.1).is_zero() || v.abs() < m.get(best.0, best.1).abs()) {
            best = (i, j);
        }
    }
    best
}

/// Fraction-free (Bareiss) determinant of a square matrix given by rows.
pub fn bareiss_det<T: Clone + Integer + Signed>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    if n == 0 {
        return T::one();
    }
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Gcd of the absolute values of all `k × k` minors, stopping early at 1.
pub fn minors_gcd<T: Clone + Integer + Signed>(a: &Matrix<T>, k: usize) -> Result<T, LinAlgError> {
    if k == 0 || k > a.rows.min(a.cols) {
        return Err(LinAlgError::BadOrder {
            k,
            rows: a.rows,
            cols: a.cols,
        });
    }
    let mut g = T::zero();
    let row_sets = subsets(a.rows, k);
    for cs in subsets(a.cols, k) {
        for rs in &row_sets {
            let sub: Vec<Vec<T>> = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| a.get(i, j).clone()).collect())
                .collect();
            g = g.gcd(&bareiss_det(sub));
            if g.is_one() {
                return Ok(g);
            }
        }
    }
    Ok(g)
}

// k-subsets of 0..n in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for l in i + 1..k {
            cur[l] = cur[l - 1] + 1;
        }
    }
}

/// Does `R_j` have Smith form `(I | 0)`? Decided by the maximal minors and
/// cross-checked against the Smith diagonal.
pub fn rj_all_ones(a: &[BigInt], j: usize) -> Result<bool, LinAlgError> {
    let r = build_rj(a, j)?;
    let by_minors = minors_gcd(&r, j + 1)?.is_one();
    let (_, diag) = smith_normal_form(&r);
    let by_snf = diag.iter().all(One::is_one);
    if by_minors != by_snf {
        return Err(LinAlgError::SnfMismatch { j });
    }
    Ok(by_minors)
}

/// For each prime `p | m`, the least `r` with `p ∤ a_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CPrimeReport {
    pub ok: bool,
    /// prime ↦ index
    pub witness: BTreeMap<String, usize>,
    /// Primes of `m` dividing every weight.
    pub failing: Vec<String>,
}

/// `a` holds `a_0 .. a_{d-1}`.
pub fn condition_c_prime(a: &[BigInt], m: &BigInt) -> CPrimeReport {
    let mut witness = BTreeMap::new();
    let mut failing = Vec::new();
    for (p, _) in prime_factorize(m) {
        match a.iter().position(|ak| !ak.is_multiple_of(&p)) {
            Some(r) => {
                witness.insert(p.to_string(), r);
            }
            None => failing.push(p.to_string()),
        }
    }
    CPrimeReport {
        ok: failing.is_empty(),
        witness,
        failing,
    }
}

/// Trial division; `|m|` is factored, and `0` or `±1` give the empty list.
pub fn prime_factorize(m: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = m.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}
