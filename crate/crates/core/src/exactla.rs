//! Exact rational linear algebra.
//!
//! Everything downstream (circuit tests, affine ranks, reaction coefficients)
//! is a boundary-rank question, so no floating point is ever involved. Rank
//! goes through fraction-free Bareiss elimination on integer rows, with a
//! checked `i128` fast path that falls back to big integers on overflow.
//! Nullspaces come from a rational reduced row echelon form with a fixed
//! pivot rule (first nonzero entry of the column, scanning rows top-down).

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("zero vector has no primitive form")]
    ZeroVector,
    #[error("matrix of shape {rows}x{cols} cannot hold {len} entries")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("invalid rational literal {0:?} (expected an integer or \"p/q\")")]
    BadLiteral(String),
}

/// Parses `"3"`, `"-5/2"`, `"+7"`. Decimal points and exponents are rejected.
pub fn parse_rational(s: &str) -> Result<Rational, LinalgError> {
    let bad = || LinalgError::BadLiteral(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (t, None),
    };
    let digits = num.strip_prefix(['+', '-']).unwrap_or(num);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let numer = BigInt::from_str(num).map_err(|_| bad())?;
    let denom = match den {
        None => BigInt::one(),
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let d = BigInt::from_str(d).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            d
        }
    };
    Ok(Rational::new(numer, denom))
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `q` rounded half away from zero to `digits` decimal places, computed exactly.
pub fn decimal(q: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (q * Rational::from_integer(scale.clone())).round().to_integer();
    let sign = if scaled.is_negative() { "-" } else { "" };
    let (whole, frac) = scaled.abs().div_rem(&scale);
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{:0>digits$}", frac.to_string())
    }
}

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed for the zero-row case.
    pub fn from_rows(cols: usize, rows: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinalgError::RaggedRows {
                    row: i,
                    found: r.len(),
                    expected: cols,
                });
            }
            entries.extend(r.iter().cloned());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        Ok(Self::from_rows(rows, columns)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Integer matrix obtained by clearing the denominators of each row.
    /// Row scaling by nonzero constants preserves rank.
    pub fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| clear_denominators(self.row(r))).collect()
    }

    pub fn rank(&self) -> usize {
        integer_rank(self.integer_rows(), self.cols)
    }

    /// Reduced row echelon form together with the pivot column of each nonzero row.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(lead, p);
            let inv = m.get(lead, c).recip();
            for j in c..m.cols {
                let v = &m.entries[lead * m.cols + j] * &inv;
                m.entries[lead * m.cols + j] = v;
            }
            for r in 0..m.rows {
                if r == lead || m.get(r, c).is_zero() {
                    continue;
                }
                let factor = m.get(r, c).clone();
                for j in c..m.cols {
                    let v = &m.entries[r * m.cols + j] - &factor * &m.entries[lead * m.cols + j];
                    m.entries[r * m.cols + j] = v;
                }
            }
            pivots.push(c);
            lead += 1;
        }
        (m, pivots)
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column of the RREF.
    pub fn nullspace_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = vec![Rational::zero(); self.cols];
                x[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = -r.get(i, f).clone();
                }
                x
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn rank(m: &RationalMatrix) -> usize {
    m.rank()
}

pub fn nullspace_basis(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    m.nullspace_basis()
}

/// Multiplies a rational vector by the lcm of its denominators.
pub fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let l = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// The unique integer vector parallel to `v` with entry gcd 1 and first
/// nonzero entry positive.
pub fn primitive_integer_vector(v: &[Rational]) -> Result<Vec<BigInt>, LinalgError> {
    let ints = clear_denominators(v);
    primitive_from_integers(ints)
}

pub(crate) fn primitive_from_integers(mut ints: Vec<BigInt>) -> Result<Vec<BigInt>, LinalgError> {
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Err(LinalgError::ZeroVector);
    }
    let negative = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in ints.iter_mut() {
        *x = &*x / &g;
        if negative {
            *x = -&*x;
        }
    }
    Ok(ints)
}

/// Rank of an integer matrix given as rows of length `cols`.
pub fn integer_rank(rows: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let small: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.to_i128()).collect())
        .collect();
    if let Some(mut a) = small {
        if let Some(r) = bareiss_rank_i128(&mut a, cols) {
            return r;
        }
    }
    bareiss_rank_big(rows, cols)
}

/// Returns `None` on overflow.
fn bareiss_rank_i128(a: &mut [Vec<i128>], cols: usize) -> Option<usize> {
    let nrows = a.len();
    let mut prev: i128 = 1;
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c];
        let (top, below) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in below {
            let lead = row[c];
            for (x, &y) in row[c + 1..cols].iter_mut().zip(&pivot_row[c + 1..cols]) {
                *x = pivot.checked_mul(*x)?.checked_sub(lead.checked_mul(y)?)? / prev;
            }
            row[c] = 0;
        }
        prev = pivot;
        r += 1;
    }
    Some(r)
}

fn bareiss_rank_big(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        let (top, below) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in below {
            let lead = row[c].clone();
            for (x, y) in row[c + 1..cols].iter_mut().zip(&pivot_row[c + 1..cols]) {
                *x = (&pivot * &*x - &lead * y) / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot;
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let rs: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        RationalMatrix::from_rows(cols, &rs).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(decimal(&rational(2, 5), 4), "0.4000");
        assert_eq!(decimal(&rational(-1, 3), 3), "-0.333");
        assert_eq!(decimal(&rational(2, 3), 2), "0.67");
        assert_eq!(decimal(&rational(7, 2), 0), "4");
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RationalMatrix::identity(3).rank(), 3);
        assert_eq!(RationalMatrix::zeros(2, 2).rank(), 0);
        assert_eq!(m(&[&[2, 0], &[0, 2], &[2, 1]]).rank(), 2);
    }

    #[test]
    fn rank_handles_rational_entries() {
        let rows = vec![
            vec![rational(1, 2), rational(1, 3)],
            vec![rational(3, 2), int(1)],
        ];
        assert_eq!(RationalMatrix::from_rows(2, &rows).unwrap().rank(), 1);
    }

    #[test]
    fn rank_falls_back_on_overflow() {
        let big = BigInt::from(i128::MAX) * BigInt::from(4);
        let rows = vec![
            vec![big.clone(), BigInt::from(1)],
            vec![BigInt::from(1), big.clone()],
            vec![big.clone() * 2, BigInt::from(2)],
        ];
        assert_eq!(integer_rank(rows, 2), 2);
        let rows = vec![vec![BigInt::from(i128::MAX), BigInt::from(i128::MAX - 1)], vec![BigInt::from(i128::MAX - 1), BigInt::from(i128::MAX - 2)]];
        // determinant is -1, multiplication overflows i128
        assert_eq!(integer_rank(rows, 2), 2);
    }

    #[test]
    fn nullspace_examples() {
        assert!(RationalMatrix::identity(2).nullspace_basis().is_empty());
        assert_eq!(m(&[&[1, -1]]).nullspace_basis(), vec![vec![int(1), int(1)]]);

        // columns H2, O2, H2O over [H, O]
        let a = m(&[&[2, 0, 2], &[0, 2, 1]]);
        let basis = a.nullspace_basis();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], vec![int(-1), rational(-1, 2), int(1)]);
        assert_eq!(primitive_integer_vector(&basis[0]).unwrap(), ints(&[2, 1, -2]));
    }

    #[test]
    fn primitive_examples() {
        let v = [int(1), rational(1, 2), int(-1)];
        assert_eq!(primitive_integer_vector(&v).unwrap(), ints(&[2, 1, -2]));
        assert_eq!(primitive_integer_vector(&[int(3), int(6)]).unwrap(), ints(&[1, 2]));
        assert_eq!(primitive_integer_vector(&[int(0), int(-5)]).unwrap(), ints(&[0, 1]));
        let err = primitive_integer_vector(&[int(0), int(0)]).unwrap_err();
        assert_eq!(err.to_string(), "zero vector has no primitive form");
    }

    #[test]
    fn literals() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-5/2").unwrap(), rational(-5, 2));
        assert_eq!(parse_rational(" 4/6 ").unwrap(), rational(2, 3));
        for bad in ["0.5", "1e3", "", "1/0", "/2", "3/", "a", "1/-2", "--1"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn shape_errors() {
        assert!(RationalMatrix::new(2, 2, vec![int(1)]).is_err());
        assert!(RationalMatrix::from_rows(2, &[vec![int(1)]]).is_err());
    }

    /// Plain rational Gaussian elimination, kept separate from Bareiss.
    fn gauss_rank(m: &RationalMatrix) -> usize {
        m.rref().1.len()
    }

    fn small_matrix() -> impl Strategy<Value = RationalMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            prop::collection::vec((-3i64..=3, 1i64..=3), r * c).prop_map(move |e| {
                let entries = e.into_iter().map(|(n, d)| rational(n, d)).collect();
                RationalMatrix::new(r, c, entries).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_matches_gauss_and_transpose(a in small_matrix()) {
            let r = a.rank();
            prop_assert_eq!(r, gauss_rank(&a));
            prop_assert_eq!(r, a.transpose().rank());
        }

        #[test]
        fn rank_invariant_under_row_permutation(a in small_matrix(), seed in 0usize..24) {
            let mut order: Vec<usize> = (0..a.rows()).collect();
            order.rotate_left(seed % a.rows().max(1));
            if seed % 2 == 1 { order.reverse(); }
            let rows: Vec<Vec<Rational>> = order.iter().map(|&i| a.row(i).to_vec()).collect();
            let b = RationalMatrix::from_rows(a.cols(), &rows).unwrap();
            prop_assert_eq!(a.rank(), b.rank());
        }

        #[test]
        fn rank_nullity(a in small_matrix()) {
            let basis = a.nullspace_basis();
            prop_assert_eq!(a.rank() + basis.len(), a.cols());
            for b in &basis {
                prop_assert!(a.mul_vec(b).iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn primitive_is_idempotent(v in prop::collection::vec((-6i64..=6, 1i64..=4), 1..5)) {
            let v: Vec<Rational> = v.into_iter().map(|(n, d)| rational(n, d)).collect();
            if let Ok(p) = primitive_integer_vector(&v) {
                let again: Vec<Rational> = p.iter().cloned().map(Rational::from_integer).collect();
                prop_assert_eq!(primitive_integer_vector(&again).unwrap(), p);
            } else {
                prop_assert!(v.iter().all(|x| x.is_zero()));
            }
        }
    }
}
