//! Dense linear algebra over a prime field `F_p`.
//!
//! Entries are stored as `u8` residues, so the modulus must be an odd prime
//! below 256. Every multiply-add is reduced immediately; nothing here ever
//! overflows a `u32` intermediate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("modulus {0} is not an odd prime below 256")]
    InvalidModulus(u32),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Checks that `p` is an odd prime that fits the residue storage.
pub fn check_prime(p: u32) -> Result<u8, LinalgError> {
    if !(3..256).contains(&p) || p.is_multiple_of(2) || (3..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return Err(LinalgError::InvalidModulus(p));
    }
    Ok(p as u8)
}

#[inline]
pub fn add(a: u8, b: u8, p: u8) -> u8 {
    ((a as u32 + b as u32) % p as u32) as u8
}

#[inline]
pub fn sub(a: u8, b: u8, p: u8) -> u8 {
    ((a as u32 + p as u32 - b as u32) % p as u32) as u8
}

#[inline]
pub fn mul(a: u8, b: u8, p: u8) -> u8 {
    ((a as u32 * b as u32) % p as u32) as u8
}

#[inline]
pub fn neg(a: u8, p: u8) -> u8 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn pow(a: u8, mut e: u64, p: u8) -> u8 {
    let mut base = a % p;
    let mut acc = 1u8;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        e >>= 1;
    }
    acc
}

/// Multiplicative inverse of a nonzero residue.
pub fn inv(a: u8, p: u8) -> u8 {
    debug_assert!(!a.is_multiple_of(p), "inverse of zero");
    pow(a, p as u64 - 2, p)
}

/// Reduces an arbitrary signed integer into `[0, p)`.
pub fn reduce(x: i64, p: u8) -> u8 {
    x.rem_euclid(p as i64) as u8
}

/// `dst += c * src`, entrywise mod `p`.
#[inline]
pub fn axpy(dst: &mut [u8], c: u8, src: &[u8], p: u8) {
    if c == 0 {
        return;
    }
    let (c, p) = (c as u32, p as u32);
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = ((*d as u32 + c * s as u32) % p) as u8;
        }
    }
}

pub fn scale(v: &mut [u8], c: u8, p: u8) {
    for x in v.iter_mut() {
        *x = mul(*x, c, p);
    }
}

pub fn is_zero(v: &[u8]) -> bool {
    v.iter().all(|&x| x == 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u8,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub reduced: FpMatrix,
    pub pivot_columns: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Inconsistent,
    Affine {
        particular: Vec<u8>,
        kernel: Vec<Vec<u8>>,
    },
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Result<Self, LinalgError> {
        let p = check_prime(p)?;
        Ok(Self { p, rows, cols, data: vec![0; rows * cols] })
    }

    pub fn identity(p: u32, n: usize) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(p, n, n)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    /// Builds a matrix from signed integer rows, reducing every entry mod `p`.
    pub fn from_rows<R: AsRef<[i64]>>(p: u32, rows: &[R]) -> Result<Self, LinalgError> {
        let pp = check_prime(p)?;
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch { expected: cols, got: r.len() });
            }
            data.extend(r.iter().map(|&x| reduce(x, pp)));
        }
        Ok(Self { p: pp, rows: rows.len(), cols, data })
    }

    /// Builds a matrix from already reduced residue rows of length `cols`.
    pub fn from_residue_rows(p: u32, cols: usize, rows: Vec<Vec<u8>>) -> Result<Self, LinalgError> {
        let pp = check_prime(p)?;
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch { expected: cols, got: r.len() });
            }
            data.extend(r.into_iter().map(|x| x % pp));
        }
        Ok(Self { p: pp, rows: n, cols, data })
    }

    pub fn p(&self) -> u32 {
        self.p as u32
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u8] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.data)
    }

    pub fn mul_vec(&self, v: &[u8]) -> Result<Vec<u8>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let p = self.p as u32;
        Ok((0..self.rows)
            .map(|r| {
                let acc = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .fold(0u32, |acc, (&a, &b)| (acc + a as u32 * b as u32) % p);
                acc as u8
            })
            .collect())
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = FpMatrix { p: self.p, rows: self.rows, cols: other.cols, data: vec![0; self.rows * other.cols] };
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a != 0 {
                    let (dst, src) = (r * other.cols, k * other.cols);
                    let src = &other.data[src..src + other.cols];
                    axpy(&mut out.data[dst..dst + other.cols], a, src, self.p);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut out = FpMatrix { p: self.p, rows: self.cols, cols: self.rows, data: vec![0; self.data.len()] };
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    /// Gauss-Jordan elimination. The reduced matrix keeps the input shape;
    /// zero rows sink to the bottom.
    pub fn rref(&self) -> Rref {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..m.cols {
            if next == m.rows {
                break;
            }
            let Some(src) = (next..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            m.swap_rows(next, src);
            let f = inv(m.get(next, c), p);
            scale(m.row_mut(next), f, p);
            let pivot_row = m.row(next).to_vec();
            for r in 0..m.rows {
                if r != next {
                    let e = m.get(r, c);
                    if e != 0 {
                        axpy(m.row_mut(r), neg(e, p), &pivot_row, p);
                    }
                }
            }
            pivots.push(c);
            next += 1;
        }
        Rref { rank: pivots.len(), reduced: m, pivot_columns: pivots }
    }

    pub fn rank(&self) -> usize {
        // Row-by-row insertion avoids cloning the whole matrix for tall inputs.
        let mut basis = EchelonBasis::new(self.p as u32, self.cols);
        for r in 0..self.rows {
            basis.insert(self.row(r).to_vec());
        }
        basis.rank()
    }

    /// A basis of the right null space `{v : m v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<u8>> {
        let Rref { reduced, pivot_columns, .. } = self.rref();
        kernel_from_rref(&reduced, &pivot_columns)
    }

    pub fn solve(&self, b: &[u8]) -> Result<Solution, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, got: b.len() });
        }
        let p = self.p;
        let mut aug = FpMatrix { p, rows: self.rows, cols: self.cols + 1, data: Vec::with_capacity(self.rows * (self.cols + 1)) };
        for r in 0..self.rows {
            aug.data.extend_from_slice(self.row(r));
            aug.data.push(b[r] % p);
        }
        let Rref { reduced, pivot_columns, .. } = aug.rref();
        if pivot_columns.last() == Some(&self.cols) {
            return Ok(Solution::Inconsistent);
        }
        let mut particular = vec![0u8; self.cols];
        for (i, &c) in pivot_columns.iter().enumerate() {
            particular[c] = reduced.get(i, self.cols);
        }
        let coeffs = FpMatrix {
            p,
            rows: pivot_columns.len(),
            cols: self.cols,
            data: (0..pivot_columns.len()).flat_map(|r| reduced.row(r)[..self.cols].to_vec()).collect(),
        };
        Ok(Solution::Affine { particular, kernel: kernel_from_rref(&coeffs, &pivot_columns) })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }
}

fn kernel_from_rref(reduced: &FpMatrix, pivots: &[usize]) -> Vec<Vec<u8>> {
    let p = reduced.p;
    let cols = reduced.cols;
    let mut is_pivot = vec![false; cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0u8; cols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = neg(reduced.get(i, free), p);
            }
            v
        })
        .collect()
}

/// A subspace of `F_p^n` kept in reduced row-echelon form, grown one vector at a time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EchelonBasis {
    p: u8,
    dim: usize,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
    // pivot column -> row index, usize::MAX when absent
    pivot_of_col: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(p: u32, dim: usize) -> Self {
        let p = check_prime(p).expect("EchelonBasis requires an odd prime modulus");
        Self { p, dim, rows: Vec::new(), pivots: Vec::new(), pivot_of_col: vec![usize::MAX; dim] }
    }

    pub fn p(&self) -> u32 {
        self.p as u32
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of_col[col] != usize::MAX
    }

    /// Reduces `v` in place against the basis; the result has zeros in every pivot column.
    pub fn reduce(&self, v: &mut [u8]) {
        let p = self.p;
        for (r, &c) in self.rows.iter().zip(&self.pivots) {
            let e = v[c];
            if e != 0 {
                axpy(v, neg(e, p), r, p);
            }
        }
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        is_zero(&w)
    }

    /// Adds `v` to the span. Returns `true` if the rank grew.
    pub fn insert(&mut self, mut v: Vec<u8>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length does not match ambient dimension");
        let p = self.p;
        self.reduce(&mut v);
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let f = inv(v[c], p);
        scale(&mut v, f, p);
        for r in self.rows.iter_mut() {
            let e = r[c];
            if e != 0 {
                axpy(r, neg(e, p), &v, p);
            }
        }
        self.pivot_of_col[c] = self.rows.len();
        self.rows.push(v);
        self.pivots.push(c);
        true
    }

    /// Rows sorted by pivot column, i.e. the usual RREF layout.
    pub fn sorted_rows(&self) -> Vec<Vec<u8>> {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by_key(|&i| self.pivots[i]);
        idx.into_iter().map(|i| self.rows[i].clone()).collect()
    }

    /// Columns without a pivot, ascending. These index a complement of the span.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.dim).filter(|&c| !self.is_pivot(c)).collect()
    }
}
