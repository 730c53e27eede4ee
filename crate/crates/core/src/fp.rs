//! Exact linear algebra over prime fields.
//!
//! Everything here is plain modular arithmetic on machine words. Matrices act
//! on column vectors; vectors are `Vec<u32>` with entries reduced mod `p`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest number of subspaces [`enumerate_invariant_subspaces`] will visit.
pub const SUBSPACE_BUDGET: u128 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A prime modulus that fits a machine word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for Prime {
    type Error = LinalgError;
    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p as u64)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[inline]
pub fn reduce(x: i64, p: u32) -> u32 {
    x.rem_euclid(p as i64) as u32
}

#[inline]
pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    (s % p as u64) as u32
}

#[inline]
pub fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    add_mod(a, p - b % p, p)
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `p` (prime); `None` for `a ≡ 0`.
pub fn inv_mod(a: u32, p: u32) -> Option<u32> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    Some(pow_mod(a as u64, p as u64 - 2, p as u64) as u32)
}

/// An element of F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u32,
    p: Prime,
}

impl FpScalar {
    pub fn new(value: i64, p: Prime) -> Self {
        FpScalar { value: reduce(value, p.get()), p }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.p
    }

    pub fn inverse(self) -> Option<Self> {
        inv_mod(self.value, self.p.get()).map(|value| FpScalar { value, p: self.p })
    }

    pub fn pow(self, e: u64) -> Self {
        let value = pow_mod(self.value as u64, e, self.p.get() as u64) as u32;
        FpScalar { value, p: self.p }
    }

    /// Representative in `(-p/2, p/2]`.
    pub fn symmetric(self) -> i64 {
        let p = self.p.get() as i64;
        let v = self.value as i64;
        if v > p / 2 {
            v - p
        } else {
            v
        }
    }
}

impl std::ops::Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        FpScalar { value: add_mod(self.value, rhs.value, self.p.get()), p: self.p }
    }
}

impl std::ops::Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        FpScalar { value: sub_mod(self.value, rhs.value, self.p.get()), p: self.p }
    }
}

impl std::ops::Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        FpScalar { value: mul_mod(self.value, rhs.value, self.p.get()), p: self.p }
    }
}

impl std::ops::Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> Self {
        FpScalar { value: sub_mod(0, self.value, self.p.get()), p: self.p }
    }
}

/// Dense matrix over F_p, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    p: u32,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}[", self.p)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize, p: Prime) -> Self {
        FpMatrix { rows, cols, p: p.get(), data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: Prime) -> Self {
        let mut m = Self::zeros(n, n, p);
        for i in 0..n {
            m.data[i * n + i] = 1 % p.get();
        }
        m
    }

    /// Builds a matrix from integer rows, reducing mod `p`.
    pub fn from_rows<R: AsRef<[i64]>>(p: Prime, rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            if row.len() != c {
                return Err(LinalgError::DimensionMismatch("ragged rows".into()));
            }
            data.extend(row.iter().map(|&x| reduce(x, p.get())));
        }
        Ok(FpMatrix { rows: r, cols: c, p: p.get(), data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(p: Prime, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(rows, columns.len(), p);
        for (j, col) in columns.iter().enumerate() {
            for i in 0..rows {
                m.set(i, j, col[i]);
            }
        }
        m
    }

    pub fn from_raw(p: Prime, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        FpMatrix { rows, cols, p: p.get(), data: data.into_iter().map(|x| x % p.get()).collect() }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn prime(&self) -> Prime {
        Prime(self.p)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn check_same_field(&self, other: &FpMatrix) -> Result<()> {
        if self.p != other.p {
            return Err(LinalgError::ModulusMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.p as u64;
        let mut out = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc += self.get(i, k) as u64 * other.get(k, j) as u64;
                    if acc >= (1 << 62) {
                        acc %= p;
                    }
                }
                out[i * other.cols + j] = (acc % p) as u32;
            }
        }
        Ok(FpMatrix { rows: self.rows, cols: other.cols, p: self.p, data: out })
    }

    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch("matrix sum".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| add_mod(a, b, self.p)).collect();
        Ok(FpMatrix { rows: self.rows, cols: self.cols, p: self.p, data })
    }

    pub fn sub(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch("matrix difference".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| sub_mod(a, b, self.p)).collect();
        Ok(FpMatrix { rows: self.rows, cols: self.cols, p: self.p, data })
    }

    pub fn scale(&self, c: u32) -> FpMatrix {
        let data = self.data.iter().map(|&a| mul_mod(a, c, self.p)).collect();
        FpMatrix { rows: self.rows, cols: self.cols, p: self.p, data }
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix { rows: self.cols, cols: self.rows, p: self.p, data: vec![0; self.data.len()] };
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "vector length");
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let acc: u64 = self.row(i).iter().zip(v).map(|(&a, &b)| (a as u64 * b as u64) % p).sum();
                (acc % p) as u32
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = inv_mod(self.get(r, c), p).expect("nonzero pivot");
            for j in 0..self.cols {
                let v = mul_mod(self.get(r, j), inv, p);
                self.data[r * self.cols + j] = v;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let v = sub_mod(self.get(i, j), mul_mod(f, self.get(r, j), p), p);
                    self.data[i * self.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    pub fn determinant(&self) -> Result<u32> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let p = self.p;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1u32 % p;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| m.get(i, c) != 0) else {
                return Ok(0);
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = sub_mod(0, det, p);
            }
            let pivot = m.get(c, c);
            det = mul_mod(det, pivot, p);
            let inv = inv_mod(pivot, p).expect("nonzero pivot");
            for i in c + 1..n {
                let f = mul_mod(m.get(i, c), inv, p);
                if f == 0 {
                    continue;
                }
                for j in c..n {
                    let v = sub_mod(m.get(i, j), mul_mod(f, m.get(c, j), p), p);
                    m.data[i * n + j] = v;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<FpMatrix> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = FpMatrix::zeros(n, 2 * n, self.prime());
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::NotInvertible);
        }
        let mut inv = FpMatrix::zeros(n, n, self.prime());
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Ok(inv)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_same_field(other)?;
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(LinalgError::DimensionMismatch("vstack".into()));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FpMatrix { rows: self.rows + other.rows, cols, p: self.p, data })
    }
}

pub fn mat_mul(a: &FpMatrix, b: &FpMatrix) -> Result<FpMatrix> {
    a.mul(b)
}

pub fn mat_inverse(a: &FpMatrix) -> Result<FpMatrix> {
    a.inverse()
}

fn kernel_from_rref(r: &FpMatrix, pivots: &[usize]) -> Vec<Vec<u32>> {
    let p = r.p;
    let free: Vec<usize> = (0..r.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u32; r.cols];
            v[f] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = sub_mod(0, r.get(row, f), p);
            }
            v
        })
        .collect()
}

/// Affine solution set `particular + span(kernel)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<u32>,
    pub kernel: Vec<Vec<u32>>,
}

impl AffineSolution {
    pub fn dimension(&self) -> usize {
        self.kernel.len()
    }
}

/// Solves `A x = b` exactly over F_p.
pub fn solve_linear(a: &FpMatrix, b: &[u32]) -> Result<AffineSolution> {
    if b.len() != a.rows {
        return Err(LinalgError::DimensionMismatch(format!("rhs length {} for {} rows", b.len(), a.rows)));
    }
    let p = a.p;
    let n = a.cols;
    let mut aug = FpMatrix { rows: a.rows, cols: n + 1, p, data: Vec::with_capacity(a.rows * (n + 1)) };
    for i in 0..a.rows {
        aug.data.extend_from_slice(a.row(i));
        aug.data.push(b[i] % p);
    }
    let pivots = aug.rref_in_place();
    if pivots.last() == Some(&n) {
        return Err(LinalgError::Inconsistent);
    }
    let mut particular = vec![0u32; n];
    for (row, &pc) in pivots.iter().enumerate() {
        particular[pc] = aug.get(row, n);
    }
    let coeff = FpMatrix {
        rows: aug.rows,
        cols: n,
        p,
        data: (0..aug.rows).flat_map(|i| aug.row(i)[..n].to_vec()).collect(),
    };
    Ok(AffineSolution { particular, kernel: kernel_from_rref(&coeff, &pivots) })
}

/// A subspace of F_p^n stored by its reduced row echelon basis, so equal
/// subspaces compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpSubspace {
    p: u32,
    ambient: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for FpSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{:?}", self.basis)
    }
}

impl FpSubspace {
    pub fn span(p: Prime, ambient: usize, vectors: &[Vec<u32>]) -> Self {
        let mut m = FpMatrix::zeros(vectors.len(), ambient, p);
        for (i, v) in vectors.iter().enumerate() {
            assert_eq!(v.len(), ambient, "vector length");
            for j in 0..ambient {
                m.set(i, j, v[j]);
            }
        }
        let pivots = m.rref_in_place();
        let basis = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
        FpSubspace { p: p.get(), ambient, basis, pivots }
    }

    pub fn zero(p: Prime, ambient: usize) -> Self {
        FpSubspace { p: p.get(), ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    /// Reduces `v` against the echelon basis; zero iff `v` lies in the span.
    fn residue(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut r = v.to_vec();
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let f = r[pc];
            if f != 0 {
                for j in 0..self.ambient {
                    r[j] = sub_mod(r[j], mul_mod(f, b[j], p), p);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.residue(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the echelon basis; assumes membership.
    pub fn coordinates(&self, v: &[u32]) -> Vec<u32> {
        self.pivots.iter().map(|&pc| v[pc]).collect()
    }

    pub fn is_invariant_under(&self, g: &FpMatrix) -> bool {
        self.basis.iter().all(|b| self.contains(&g.mul_vec(b)))
    }

    /// A basis of the ambient space that starts with this subspace's basis.
    pub fn extended_basis(&self) -> Vec<Vec<u32>> {
        let mut out = self.basis.clone();
        for j in 0..self.ambient {
            if !self.pivots.contains(&j) {
                let mut e = vec![0u32; self.ambient];
                e[j] = 1;
                out.push(e);
            }
        }
        out
    }
}

/// Number of `k`-dimensional subspaces of F_p^n.
pub fn gaussian_binomial(n: usize, k: usize, p: u32) -> u128 {
    if k > n {
        return 0;
    }
    let p = p as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= p.pow((n - i) as u32) - 1;
        den *= p.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// All `dim`-dimensional subspaces of F_p^ambient in reduced echelon form,
/// in a fixed order. Fails when the Grassmannian exceeds [`SUBSPACE_BUDGET`].
pub fn all_subspaces(p: Prime, ambient: usize, dim: usize) -> Result<Vec<FpSubspace>> {
    let total = gaussian_binomial(ambient, dim, p.get());
    if total > SUBSPACE_BUDGET {
        return Err(LinalgError::BudgetExceeded { needed: total, budget: SUBSPACE_BUDGET });
    }
    let mut out = Vec::with_capacity(total as usize);
    for pivots in combinations(ambient, dim) {
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(row, &pc)| {
                let pivots = &pivots;
                (pc + 1..ambient).filter(move |c| !pivots.contains(c)).map(move |c| (row, c))
            })
            .collect();
        let count = (p.get() as u64).pow(free.len() as u32);
        for mut code in 0..count {
            let mut basis = vec![vec![0u32; ambient]; dim];
            for (row, &pc) in pivots.iter().enumerate() {
                basis[row][pc] = 1;
            }
            for &(row, c) in &free {
                basis[row][c] = (code % p.get() as u64) as u32;
                code /= p.get() as u64;
            }
            out.push(FpSubspace { p: p.get(), ambient, basis, pivots: pivots.clone() });
        }
    }
    Ok(out)
}

/// Subspaces of dimension `dim` mapped into themselves by every generator.
pub fn enumerate_invariant_subspaces(
    p: Prime,
    ambient: usize,
    generators: &[FpMatrix],
    dim: usize,
) -> Result<Vec<FpSubspace>> {
    for g in generators {
        if g.modulus() != p.get() {
            return Err(LinalgError::ModulusMismatch(g.modulus(), p.get()));
        }
        if g.rows != ambient || g.cols != ambient {
            return Err(LinalgError::DimensionMismatch(format!("generator is {}x{}, ambient {}", g.rows, g.cols, ambient)));
        }
    }
    Ok(all_subspaces(p, ambient, dim)?
        .into_iter()
        .filter(|w| generators.iter().all(|g| w.is_invariant_under(g)))
        .collect())
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(9973).is_ok());
    }

    #[test]
    fn identity_product() {
        let i = FpMatrix::identity(2, p(5));
        assert_eq!(mat_mul(&i, &i).unwrap(), i);
    }

    #[test]
    fn unipotent_square_mod3() {
        let u = FpMatrix::from_rows(p(3), &[[1, 1], [0, 1]]).unwrap();
        let expect = FpMatrix::from_rows(p(3), &[[1, 2], [0, 1]]).unwrap();
        assert_eq!(mat_mul(&u, &u).unwrap(), expect);
    }

    #[test]
    fn mismatched_operands() {
        let a = FpMatrix::identity(2, p(5));
        let b = FpMatrix::identity(2, p(7));
        assert_eq!(a.mul(&b), Err(LinalgError::ModulusMismatch(5, 7)));
        let c = FpMatrix::identity(3, p(5));
        assert!(matches!(a.mul(&c), Err(LinalgError::DimensionMismatch(_))));
    }

    #[test]
    fn inverses() {
        let i = FpMatrix::identity(2, p(7));
        assert_eq!(mat_inverse(&i).unwrap(), i);
        let swap = FpMatrix::from_rows(p(5), &[[0, 1], [1, 0]]).unwrap();
        assert_eq!(mat_inverse(&swap).unwrap(), swap);
        let rank1 = FpMatrix::from_rows(p(3), &[[1, 1], [1, 1]]).unwrap();
        assert_eq!(mat_inverse(&rank1), Err(LinalgError::NotInvertible));
        assert_eq!(rank1.determinant().unwrap(), 0);
    }

    #[test]
    fn solve_identity_and_zero() {
        let pr = p(7);
        let i = FpMatrix::identity(3, pr);
        let sol = solve_linear(&i, &[1, 2, 3]).unwrap();
        assert_eq!(sol.particular, vec![1, 2, 3]);
        assert!(sol.kernel.is_empty());

        let z = FpMatrix::zeros(3, 3, pr);
        let sol = solve_linear(&z, &[0, 0, 0]).unwrap();
        assert_eq!(sol.dimension(), 3);
        assert_eq!(solve_linear(&z, &[0, 1, 0]), Err(LinalgError::Inconsistent));
    }

    #[test]
    fn trivial_action_has_all_lines() {
        let lines = enumerate_invariant_subspaces(p(3), 2, &[FpMatrix::identity(2, p(3))], 1).unwrap();
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn unipotent_fixes_one_line() {
        let pr = p(5);
        let u = FpMatrix::from_rows(pr, &[[1, 1], [0, 1]]).unwrap();
        let lines = enumerate_invariant_subspaces(pr, 2, &[u.clone()], 1).unwrap();
        assert_eq!(lines, vec![FpSubspace::span(pr, 2, &[vec![1, 0]])]);
        // oracle: test each of the p+1 lines directly
        let mut direct = Vec::new();
        let mut reps: Vec<Vec<u32>> = (0..5).map(|t| vec![1, t]).collect();
        reps.push(vec![0, 1]);
        for r in reps {
            let img = u.mul_vec(&r);
            let det = (r[0] as i64 * img[1] as i64 - r[1] as i64 * img[0] as i64).rem_euclid(5);
            if det == 0 {
                direct.push(r);
            }
        }
        assert_eq!(direct, vec![vec![1, 0]]);
    }

    #[test]
    fn nonsplit_torus_has_no_line() {
        // x^2 - 2 is irreducible mod 5: the companion matrix acts irreducibly
        let pr = p(5);
        let c = FpMatrix::from_rows(pr, &[[0, 2], [1, 0]]).unwrap();
        assert!(enumerate_invariant_subspaces(pr, 2, &[c.clone()], 1).unwrap().is_empty());
        let brute = (0..25u32)
            .map(|code| vec![code % 5, code / 5])
            .filter(|v| v.iter().any(|&x| x != 0))
            .filter(|v| FpSubspace::span(pr, 2, &[v.clone()]).is_invariant_under(&c))
            .count();
        assert_eq!(brute, 0);
    }

    #[test]
    fn grassmannian_sizes() {
        assert_eq!(gaussian_binomial(4, 2, 3), 130);
        assert_eq!(all_subspaces(p(3), 4, 2).unwrap().len(), 130);
        assert_eq!(all_subspaces(p(5), 2, 1).unwrap().len(), 6);
        assert_eq!(all_subspaces(p(2), 4, 3).unwrap().len(), 15);
        assert!(matches!(all_subspaces(p(101), 4, 2), Err(LinalgError::BudgetExceeded { .. })));
    }
}
