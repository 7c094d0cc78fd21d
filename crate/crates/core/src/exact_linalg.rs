//! Exact rational matrices and the minor families `p_k`, `q_{kl}`, `r_{jk}`.

use std::collections::BTreeMap;
use std::fmt;

use rug::{Integer, Rational};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::new(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::from(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let n = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self { rows: n, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let converted = rows.iter().map(|r| r.iter().map(|&v| Rational::from(v)).collect()).collect();
        Self::from_rows(converted).expect("ragged integer rows")
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

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::new();
                for k in 0..self.cols {
                    acc += Rational::from(self.get(i, k) * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.rows, "vector length must equal row count");
        (0..self.cols)
            .map(|j| {
                let mut acc = Rational::new();
                for (i, vi) in v.iter().enumerate() {
                    acc += Rational::from(vi * self.get(i, j));
                }
                acc
            })
            .collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        Self { rows: rows.len(), cols: cols.len(), data }
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(perm, &cols)
    }

    pub fn permute_cols(&self, perm: &[usize]) -> Self {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, perm)
    }

    /// `diag(d) * self`.
    pub fn scale_rows(&self, d: &[Rational]) -> Self {
        let mut out = self.clone();
        for (i, di) in d.iter().enumerate().take(self.rows) {
            for j in 0..self.cols {
                out.set(i, j, Rational::from(self.get(i, j) * di));
            }
        }
        out
    }

    /// Determinant by fraction-free Bareiss elimination after clearing row denominators.
    pub fn determinant(&self) -> Result<Rational, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::from(1));
        }
        let mut scale = Integer::from(1);
        let mut a: Vec<Vec<Integer>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut lcm = Integer::from(1);
            for v in self.row(i) {
                lcm.lcm_mut(v.denom());
            }
            a.push(self.row(i).iter().map(|v| v.numer() * Integer::from(&lcm / v.denom())).collect());
            scale *= lcm;
        }
        let det = bareiss(&mut a);
        Ok(Rational::from((det, scale)))
    }

    pub fn rank(&self) -> usize {
        let (_, pivots) = self.row_echelon();
        pivots.len()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn row_echelon(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| *m.get(i, col) != 0) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = Rational::from(1) / m.get(row, col).clone();
            for j in 0..m.cols {
                let v = Rational::from(m.get(row, j) * &inv);
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i != row && *m.get(i, col) != 0 {
                    let factor = m.get(i, col).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j) - Rational::from(&factor * m.get(row, j));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::from(1));
        }
        let (red, pivots) = aug.row_echelon();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(LinalgError::Singular);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(red.submatrix(&rows, &cols))
    }

    /// Coefficients `lambda` with `lambda * self = v`, if `v` lies in the row space.
    pub fn row_combination(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        // Solve self^T lambda = v.
        let k = self.rows;
        let mut aug = Self::zeros(self.cols, k + 1);
        for (i, vi) in v.iter().enumerate() {
            for j in 0..k {
                aug.set(i, j, self.get(j, i).clone());
            }
            aug.set(i, k, vi.clone());
        }
        let (red, pivots) = aug.row_echelon();
        if pivots.last() == Some(&k) {
            return None;
        }
        let mut lambda = vec![Rational::new(); k];
        for (row, &col) in pivots.iter().enumerate() {
            lambda[col] = red.get(row, k).clone();
        }
        Some(lambda)
    }

    /// Doolittle factorization `self = L U` without row exchanges.
    pub fn lu_without_pivoting(&self) -> Option<(Self, Self)> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut l = Self::identity(n);
        let mut u = Self::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = self.get(i, j).clone();
                for k in 0..i {
                    acc -= Rational::from(l.get(i, k) * u.get(k, j));
                }
                u.set(i, j, acc);
            }
            if *u.get(i, i) == 0 {
                return None;
            }
            for j in i + 1..n {
                let mut acc = self.get(j, i).clone();
                for k in 0..i {
                    acc -= Rational::from(l.get(j, k) * u.get(k, i));
                }
                l.set(j, i, acc / u.get(i, i).clone());
            }
        }
        Some((l, u))
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

fn bareiss(a: &mut [Vec<Integer>]) -> Integer {
    let n = a.len();
    let mut sign = 1;
    let mut prev = Integer::from(1);
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return Integer::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = Integer::from(&a[i][j] * &a[k][k]) - Integer::from(&a[i][k] * &a[k][j]);
                a[i][j] = v.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), LinalgError> {
    if cond {
        Ok(())
    } else {
        Err(LinalgError::IndexOutOfRange(what()))
    }
}

/// `p_k`: the leading principal k x k minor (`p_0 = 1`).
pub fn leading_principal_minor(m: &RationalMatrix, k: usize) -> Result<Rational, LinalgError> {
    check(k <= m.rows.min(m.cols), || format!("p_{k} of a {}x{} matrix", m.rows, m.cols))?;
    let idx: Vec<usize> = (0..k).collect();
    m.submatrix(&idx, &idx).determinant()
}

/// `q_{kl}`: first k rows, columns `1..k-1` and `l` (1-based).
pub fn q_minor(m: &RationalMatrix, k: usize, l: usize) -> Result<Rational, LinalgError> {
    check(1 <= k && k < l && l <= m.cols && k <= m.rows, || {
        format!("q_{{{k},{l}}} of a {}x{} matrix", m.rows, m.cols)
    })?;
    let rows: Vec<usize> = (0..k).collect();
    let mut cols: Vec<usize> = (0..k - 1).collect();
    cols.push(l - 1);
    m.submatrix(&rows, &cols).determinant()
}

/// `r_{jk}`: rows `1..k` without row `j`, columns `1..k-1` (1-based).
pub fn r_minor(m: &RationalMatrix, j: usize, k: usize) -> Result<Rational, LinalgError> {
    check(1 <= j && j < k && k <= m.rows && k - 1 <= m.cols, || {
        format!("r_{{{j},{k}}} of a {}x{} matrix", m.rows, m.cols)
    })?;
    let rows: Vec<usize> = (0..k).filter(|&i| i != j - 1).collect();
    let cols: Vec<usize> = (0..k - 1).collect();
    m.submatrix(&rows, &cols).determinant()
}

/// All minors of a k x r matrix together with the derived verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorProfile {
    pub p: Vec<Rational>,
    pub q: BTreeMap<(usize, usize), Rational>,
    pub r_minors: BTreeMap<(usize, usize), Rational>,
    pub stable: bool,
    pub compatible: bool,
    pub in_bruhat_cell: bool,
}

impl MinorProfile {
    /// `p_k` with the convention `p_0 = 1`.
    pub fn p(&self, k: usize) -> Rational {
        if k == 0 {
            Rational::from(1)
        } else {
            self.p[k - 1].clone()
        }
    }

    /// q-minors that break compatibility (positive values).
    pub fn positive_q(&self) -> Vec<((usize, usize), Rational)> {
        self.q.iter().filter(|(_, v)| **v > 0).map(|(k, v)| (*k, v.clone())).collect()
    }
}

pub fn minor_profile(m: &RationalMatrix) -> Result<MinorProfile, LinalgError> {
    let (k, r) = (m.rows, m.cols);
    if k > r {
        return Err(LinalgError::DimensionMismatch(format!("{k}x{r} profile needs rows <= cols")));
    }
    let p = (1..=k).map(|i| leading_principal_minor(m, i)).collect::<Result<Vec<_>, _>>()?;
    let mut q = BTreeMap::new();
    for j in 1..=k {
        for l in j + 1..=r {
            q.insert((j, l), q_minor(m, j, l)?);
        }
    }
    let mut r_minors = BTreeMap::new();
    for l in 2..=k {
        for j in 1..l {
            r_minors.insert((j, l), r_minor(m, j, l)?);
        }
    }
    let in_bruhat_cell = p.iter().all(|v| *v != 0);
    let stable = p.iter().all(|v| *v > 0)
        && r_minors.iter().all(|(&(j, l), v)| if (l - j) % 2 == 0 { *v >= 0 } else { *v <= 0 });
    let compatible = !stable || q.values().all(|v| *v <= 0);
    Ok(MinorProfile { p, q, r_minors, stable, compatible, in_bruhat_cell })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_i64(rows)
    }

    #[test]
    fn minors_of_the_incompatible_jacobian() {
        let j = m(&[&[1, 1], &[-1, 0]]);
        assert_eq!(leading_principal_minor(&j, 1).unwrap(), 1);
        assert_eq!(leading_principal_minor(&j, 2).unwrap(), 1);
        assert_eq!(q_minor(&j, 1, 2).unwrap(), 1);
        assert_eq!(r_minor(&j, 1, 2).unwrap(), -1);
        let p = minor_profile(&j).unwrap();
        assert!(p.stable && !p.compatible && p.in_bruhat_cell);
    }

    #[test]
    fn minors_of_unstable_and_stable_examples() {
        let lower = m(&[&[1, 0], &[1, 1]]);
        assert_eq!(leading_principal_minor(&lower, 2).unwrap(), 1);
        assert_eq!(r_minor(&lower, 1, 2).unwrap(), 1);
        assert_eq!(q_minor(&lower, 1, 2).unwrap(), 0);
        let p = minor_profile(&lower).unwrap();
        assert!(!p.stable && p.compatible);

        let printed = m(&[&[1, -1], &[-1, 2]]);
        assert_eq!(q_minor(&printed, 1, 2).unwrap(), -1);
        let p = minor_profile(&printed).unwrap();
        assert_eq!(p.p, vec![Rational::from(1), Rational::from(1)]);
        assert!(p.stable && p.compatible);
    }

    #[test]
    fn identity_minors() {
        for n in 1..5 {
            let id = RationalMatrix::identity(n);
            for k in 0..=n {
                assert_eq!(leading_principal_minor(&id, k).unwrap(), 1);
            }
        }
        let id = RationalMatrix::identity(2);
        assert_eq!(q_minor(&id, 1, 2).unwrap(), 0);
        assert_eq!(r_minor(&id, 1, 2).unwrap(), 0);
    }

    #[test]
    fn index_errors() {
        let j = m(&[&[1, 2], &[3, 4]]);
        assert!(leading_principal_minor(&j, 3).is_err());
        assert!(q_minor(&j, 2, 2).is_err());
        assert!(r_minor(&j, 2, 2).is_err());
        assert!(minor_profile(&m(&[&[1], &[2]])).is_err());
    }

    #[test]
    fn rational_determinant_and_inverse() {
        let a = RationalMatrix::from_rows(vec![
            vec![Rational::from((1, 2)), Rational::from((1, 3))],
            vec![Rational::from((1, 4)), Rational::from((1, 5))],
        ])
        .unwrap();
        assert_eq!(a.determinant().unwrap(), Rational::from((1, 10)) - Rational::from((1, 12)));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RationalMatrix::identity(2));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(LinalgError::Singular));
    }

    #[test]
    fn row_combination_membership() {
        let f = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let v = vec![Rational::from(2), Rational::from(-1), Rational::from(1)];
        assert_eq!(f.row_combination(&v).unwrap(), vec![Rational::from(2), Rational::from(-1)]);
        let w = vec![Rational::from(0), Rational::from(0), Rational::from(1)];
        assert!(f.row_combination(&w).is_none());
    }

    #[test]
    fn partial_flag_profile_uses_all_columns_for_q() {
        let j = m(&[&[2, 1, -3]]);
        let p = minor_profile(&j).unwrap();
        assert_eq!(p.q.len(), 2);
        assert!(p.r_minors.is_empty());
        assert!(p.stable && !p.compatible);
    }
}
