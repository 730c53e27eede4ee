//! Elliptic curves over Q given by integral Weierstrass models.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{legendre, primes_up_to};
use crate::fp::{inv_mod, is_prime};

/// Largest trace bound accepted by [`frobenius_traces`].
pub const TRACE_BOUND_MAX: u64 = 100_000;
/// Trial division limit used when factoring discriminants.
const TRIAL_LIMIT: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EllipticError {
    #[error("singular model: discriminant is zero")]
    SingularCurve,
    #[error("{0} divides the discriminant")]
    BadReduction(u64),
    #[error("prime {0} is not supported here")]
    UnsupportedPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("twist parameter {0} is not squarefree")]
    NotSquarefree(i64),
    #[error("could not factor |discriminant|: cofactor {0} is composite")]
    FactorizationFailed(String),
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

pub type Result<T> = std::result::Result<T, EllipticError>;

/// A curve `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` with its standard invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCurveQ {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
    pub b2: BigInt,
    pub b4: BigInt,
    pub b6: BigInt,
    pub b8: BigInt,
    pub c4: BigInt,
    pub c6: BigInt,
    pub disc: BigInt,
    pub j: BigRational,
}

impl fmt::Display for EllipticCurveQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{},{}]", self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}

pub fn derive_invariants(a1: BigInt, a2: BigInt, a3: BigInt, a4: BigInt, a6: BigInt) -> Result<EllipticCurveQ> {
    let b2 = &a1 * &a1 + 4 * &a2;
    let b4 = 2 * &a4 + &a1 * &a3;
    let b6 = &a3 * &a3 + 4 * &a6;
    let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
    let c4 = &b2 * &b2 - 24 * &b4;
    let c6 = 36 * &b2 * &b4 - 216 * &b6 - &b2 * &b2 * &b2;
    let disc: BigInt = 9 * &b2 * &b4 * &b6 - &b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6;
    if disc.is_zero() {
        return Err(EllipticError::SingularCurve);
    }
    let j = BigRational::new(&c4 * &c4 * &c4, disc.clone());
    Ok(EllipticCurveQ { a1, a2, a3, a4, a6, b2, b4, b6, b8, c4, c6, disc, j })
}

impl EllipticCurveQ {
    pub fn from_ainvs(a: [i64; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a.map(BigInt::from);
        derive_invariants(a1, a2, a3, a4, a6)
    }

    pub fn ainvs(&self) -> [BigInt; 5] {
        [self.a1.clone(), self.a2.clone(), self.a3.clone(), self.a4.clone(), self.a6.clone()]
    }

    /// a-invariants as machine integers, when they fit.
    pub fn ainvs_i64(&self) -> Option<[i64; 5]> {
        Some([self.a1.to_i64()?, self.a2.to_i64()?, self.a3.to_i64()?, self.a4.to_i64()?, self.a6.to_i64()?])
    }

    /// The model obtained by substituting `x -> x + r`.
    pub fn translate_x(&self, r: &BigInt) -> EllipticCurveQ {
        let a2 = &self.a2 + 3 * r;
        let a3 = &self.a3 + r * &self.a1;
        let a4 = &self.a4 + 2 * r * &self.a2 + 3 * r * r;
        let a6 = &self.a6 + r * &self.a4 + r * r * &self.a2 + r * r * r;
        derive_invariants(self.a1.clone(), a2, a3, a4, a6).expect("isomorphic model is nonsingular")
    }

    pub fn divides_disc(&self, ell: u64) -> bool {
        (&self.disc % BigInt::from(ell)).is_zero()
    }

    fn reduced_ainvs(&self, ell: u64) -> [u64; 5] {
        self.ainvs().map(|a| mod_u64(&a, ell))
    }

    /// The cubic `4x^3 + b2 x^2 + 2 b4 x + b6` mod ell, lowest degree first.
    fn two_division_poly_mod(&self, ell: u64) -> [u64; 4] {
        [mod_u64(&self.b6, ell), mod_u64(&(2 * &self.b4), ell), mod_u64(&self.b2, ell), 4 % ell]
    }

    /// Primes dividing the discriminant.
    pub fn bad_primes(&self) -> Result<Vec<u64>> {
        factor_bigint(&self.disc.abs())
    }
}

pub(crate) fn mod_u64(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits")
}

/// Distinct prime factors of a positive integer.
pub fn factor_bigint(n: &BigInt) -> Result<Vec<u64>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT && BigInt::from(d) * BigInt::from(d) <= n {
        if (&n % d).is_zero() {
            out.push(d);
            while (&n % d).is_zero() {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        match n.to_u64() {
            Some(m) if is_probable_prime(m) => out.push(m),
            _ => return Err(EllipticError::FactorizationFailed(n.to_string())),
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_probable_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powm = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, b);
            }
            b = mulm(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Projective point count over F_ell by enumerating all affine `(x, y)`.
pub fn count_points_naive(e: &EllipticCurveQ, ell: u64) -> u64 {
    let [a1, a2, a3, a4, a6] = e.reduced_ainvs(ell);
    let m = ell;
    let mut count = 1;
    for x in 0..m {
        let rhs = ((x * x % m) * x + a2 * (x * x % m) + a4 * x + a6) % m;
        let lin = (a1 * x + a3) % m;
        for y in 0..m {
            let lhs = (y * y + lin * y) % m;
            if lhs == rhs {
                count += 1;
            }
        }
    }
    count
}

/// Projective point count over F_ell for odd ell, as `ell + 1 + sum_x (g(x) / ell)`
/// with `g = 4x^3 + b2 x^2 + 2 b4 x + b6`.
pub fn count_points_character_sum(e: &EllipticCurveQ, ell: u64) -> u64 {
    assert!(ell % 2 == 1, "character sum needs odd ell");
    let g = e.two_division_poly_mod(ell);
    let mut is_square = vec![false; ell as usize];
    for y in 0..ell {
        is_square[(y * y % ell) as usize] = true;
    }
    let mut sum: i64 = 0;
    for x in 0..ell {
        let v = ((g[3] * x + g[2]) % ell * x % ell + g[1]) % ell * x % ell;
        let v = (v + g[0]) % ell;
        if v != 0 {
            sum += if is_square[v as usize] { 1 } else { -1 };
        }
    }
    (ell as i64 + 1 + sum) as u64
}

/// Projective point count over F_ell of a model with good reduction at ell.
pub fn count_points(e: &EllipticCurveQ, ell: u64) -> Result<u64> {
    if !is_prime(ell) {
        return Err(EllipticError::NotPrime(ell));
    }
    if e.divides_disc(ell) {
        return Err(EllipticError::BadReduction(ell));
    }
    Ok(count_points_any(e, ell))
}

/// Point count of the reduced (possibly singular) cubic.
fn count_points_any(e: &EllipticCurveQ, ell: u64) -> u64 {
    if ell == 2 {
        count_points_naive(e, ell)
    } else {
        count_points_character_sum(e, ell)
    }
}

/// `ell + 1 - #E(F_ell)` on the supplied model.
pub fn trace_of_frobenius(e: &EllipticCurveQ, ell: u64) -> Result<i64> {
    Ok(ell as i64 + 1 - count_points(e, ell)? as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusEntry {
    pub ell: u64,
    /// For bad primes this is `ell + 1 - #(singular cubic)(F_ell)`.
    pub a: i64,
    pub good: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusData {
    pub curve: EllipticCurveQ,
    pub bound: u64,
    pub entries: Vec<FrobeniusEntry>,
}

impl FrobeniusData {
    pub fn good(&self) -> impl Iterator<Item = &FrobeniusEntry> {
        self.entries.iter().filter(|e| e.good)
    }

    pub fn trace(&self, ell: u64) -> Option<i64> {
        self.entries.iter().find(|e| e.ell == ell && e.good).map(|e| e.a)
    }
}

/// Traces at every prime up to `bound`, in increasing order of ell.
pub fn frobenius_traces(e: &EllipticCurveQ, bound: u64) -> FrobeniusData {
    let bound = bound.min(TRACE_BOUND_MAX);
    let entries = primes_up_to(bound)
        .into_par_iter()
        .map(|ell| {
            let good = !e.divides_disc(ell);
            FrobeniusEntry { ell, a: ell as i64 + 1 - count_points_any(e, ell) as i64, good }
        })
        .collect();
    FrobeniusData { curve: e.clone(), bound, entries }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReductionType {
    Good,
    MultiplicativeSplit,
    MultiplicativeNonsplit,
    Additive,
}

impl ReductionType {
    pub fn is_multiplicative(self) -> bool {
        matches!(self, ReductionType::MultiplicativeSplit | ReductionType::MultiplicativeNonsplit)
    }
}

/// Reduction type of the supplied (not necessarily minimal) model at an odd prime.
pub fn reduction_type(e: &EllipticCurveQ, p: u64) -> Result<ReductionType> {
    if p == 2 {
        return Err(EllipticError::UnsupportedPrime(2));
    }
    if !is_prime(p) {
        return Err(EllipticError::NotPrime(p));
    }
    if !e.divides_disc(p) {
        return Ok(ReductionType::Good);
    }
    if mod_u64(&e.c4, p) == 0 {
        return Ok(ReductionType::Additive);
    }
    // Y^2 = g(x) with a double root x0; the tangent cone is Y^2 = (g''(x0)/2) (x - x0)^2
    let g = e.two_division_poly_mod(p);
    let x0 = double_root(&g, p).expect("multiplicative reduction has a node");
    let coeff = (12 * x0 % p + mod_u64(&e.b2, p)) % p;
    if legendre(coeff as i64, p) == 1 {
        Ok(ReductionType::MultiplicativeSplit)
    } else {
        Ok(ReductionType::MultiplicativeNonsplit)
    }
}

/// The repeated root of a cubic over F_p, from gcd(g, g').
fn double_root(g: &[u64; 4], p: u64) -> Option<u64> {
    let dg = [g[1] % p, 2 * g[2] % p, 3 * g[3] % p];
    let h = poly_gcd(g.to_vec(), dg.to_vec(), p);
    if h.len() != 2 {
        return None;
    }
    // h = h0 + h1 x, monic
    Some((p - h[0] % p) % p)
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_gcd(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<u64> {
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let inv = inv_mod_u64(*b.last().unwrap(), p);
        while a.len() >= b.len() && !a.is_empty() {
            let shift = a.len() - b.len();
            let f = mulm(*a.last().unwrap(), inv);
            for (i, &c) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] + p - mulm(f, c)) % p;
            }
            a = trim(a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    let inv = inv_mod_u64(*a.last().unwrap(), p);
    a.iter().map(|&c| mulm(c, inv)).collect()
}

fn inv_mod_u64(a: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 {
        inv_mod(a as u32, p as u32).expect("unit") as u64
    } else {
        let r = BigInt::from(a).modpow(&BigInt::from(p - 2), &BigInt::from(p));
        r.to_u64().unwrap()
    }
}

/// `a_p ≡ 0 mod p` for a model with good reduction at p.
pub fn is_supersingular(e: &EllipticCurveQ, p: u64) -> Result<bool> {
    let a = trace_of_frobenius(e, p)?;
    Ok(a.rem_euclid(p as i64) == 0)
}

/// The quadratic twist by a squarefree `d`, as the model
/// `y^2 = x^3 + d b2 x^2 + 8 d^2 b4 x + 16 d^3 b6`.
///
/// This model has `c4 = 16 d^2 c4(E)`, `c6 = 64 d^3 c6(E)`, `disc = 4096 d^6 disc(E)`.
/// For `d = 1` the curve is returned unchanged.
pub fn quadratic_twist(e: &EllipticCurveQ, d: i64) -> Result<EllipticCurveQ> {
    if d == 0 || !crate::arith::is_squarefree(d.unsigned_abs()) {
        return Err(EllipticError::NotSquarefree(d));
    }
    if d == 1 {
        return Ok(e.clone());
    }
    let d = BigInt::from(d);
    derive_invariants(
        BigInt::zero(),
        &d * &e.b2,
        BigInt::zero(),
        8 * &d * &d * &e.b4,
        16 * &d * &d * &d * &e.b6,
    )
}

/// Whether `X^3 + b2 X^2 + 8 b4 X + 16 b6` (the 2-division cubic in X = 4x)
/// has three integer roots.
pub fn has_full_rational_2torsion(e: &EllipticCurveQ) -> bool {
    integer_roots_of_monic_cubic(&e.b2, &(8 * &e.b4), &(16 * &e.b6)).len() == 3
}

/// Distinct integer roots of `X^3 + a X^2 + b X + c`.
pub fn integer_roots_of_monic_cubic(a: &BigInt, b: &BigInt, c: &BigInt) -> Vec<BigInt> {
    let f = |x: &BigInt| ((x + a) * x + b) * x + c;
    let bound = BigInt::one() + a.abs().max(b.abs()).max(c.abs());
    // critical points (-a ± sqrt(a^2 - 3b)) / 3
    let disc: BigInt = a * a - 3 * b;
    let mut probes: Vec<BigInt> = Vec::new();
    let mut segments: Vec<(BigInt, BigInt)> = Vec::new();
    if disc.is_negative() {
        segments.push((-&bound, bound.clone()));
    } else {
        let s = disc.sqrt();
        let k1 = (-a - &s).div_floor(&BigInt::from(3));
        let k2 = (-a + &s).div_floor(&BigInt::from(3));
        for k in [&k1, &k2] {
            for off in -2i32..=3 {
                probes.push(k + off);
            }
        }
        segments.push((-&bound, &k1 - 3));
        segments.push((&k1 + 4, &k2 - 3));
        segments.push((&k2 + 4, bound.clone()));
    }
    let mut roots: Vec<BigInt> = probes.into_iter().filter(|x| f(x).is_zero()).collect();
    for (lo, hi) in segments {
        if lo > hi {
            continue;
        }
        let (flo, fhi) = (f(&lo), f(&hi));
        if flo.is_zero() {
            roots.push(lo.clone());
        }
        if fhi.is_zero() {
            roots.push(hi.clone());
        }
        if flo.signum() == fhi.signum() || flo.is_zero() || fhi.is_zero() {
            continue;
        }
        let increasing = flo.is_negative();
        let (mut l, mut h) = (lo, hi);
        while &h - &l > BigInt::one() {
            let mid: BigInt = (&l + &h) >> 1;
            let v = f(&mid);
            if v.is_zero() {
                l = mid.clone();
                h = mid;
                break;
            }
            if v.is_negative() == increasing {
                l = mid;
            } else {
                h = mid;
            }
        }
        for x in [l, h] {
            if f(&x).is_zero() {
                roots.push(x);
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Kronecker symbol (d / n) for an odd prime n.
pub fn kronecker_odd_prime(d: i64, n: u64) -> i32 {
    legendre(d, n)
}

/// A curve with an optional label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub label: Option<String>,
    pub ainvs: Vec<String>,
}

impl CurveRecord {
    pub fn curve(&self) -> Result<EllipticCurveQ> {
        let parsed: Vec<BigInt> = self
            .ainvs
            .iter()
            .map(|s| BigInt::from_str(s).map_err(|_| parse_error(1, 1, format!("bad integer {s}"))))
            .collect::<Result<_>>()?;
        let [a1, a2, a3, a4, a6]: [BigInt; 5] = parsed.try_into().map_err(|_| parse_error(1, 1, "need 5 coefficients".into()))?;
        derive_invariants(a1, a2, a3, a4, a6)
    }

    pub fn name(&self) -> String {
        self.label.clone().unwrap_or_else(|| format!("[{}]", self.ainvs.join(",")))
    }
}

fn parse_error(line: usize, column: usize, message: String) -> EllipticError {
    EllipticError::Parse { line, column, message }
}

/// Parses `a1,a2,a3,a4,a6`, optionally prefixed by `label:`.
pub fn parse_curve_line(text: &str, line: usize) -> Result<CurveRecord> {
    let (label, body, offset) = match text.rfind(':') {
        Some(i) => (Some(text[..i].trim().to_string()), &text[i + 1..], i + 1),
        None => (None, text, 0),
    };
    if label.as_deref() == Some("") {
        return Err(parse_error(line, 1, "empty label".into()));
    }
    let body = body.trim_start_matches(|c: char| c == '[' || c.is_whitespace());
    let lead = text.len() - offset - body.len();
    let body = body.trim_end_matches(|c: char| c == ']' || c.is_whitespace());
    let mut ainvs = Vec::new();
    let mut col = offset + lead + 1;
    for field in body.split(',') {
        let trimmed = field.trim();
        if BigInt::from_str(trimmed).is_err() {
            return Err(parse_error(line, col, format!("expected an integer, found {trimmed:?}")));
        }
        ainvs.push(trimmed.to_string());
        col += field.len() + 1;
    }
    if ainvs.len() != 5 {
        return Err(parse_error(line, offset + 1, format!("expected 5 coefficients, found {}", ainvs.len())));
    }
    Ok(CurveRecord { label, ainvs })
}

/// Parses a curve file: one curve per line, `#` starts a comment.
pub fn parse_curve_file(text: &str) -> Result<Vec<CurveRecord>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        out.push(parse_curve_line(content, i + 1)?);
    }
    Ok(out)
}

/// `|a_ell| <= 2 sqrt(ell)`, checked as `a^2 <= 4 ell`.
pub fn within_hasse_bound(a: i64, ell: u64) -> bool {
    (a as i128) * (a as i128) <= 4 * ell as i128
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn curve(a: [i64; 5]) -> EllipticCurveQ {
        EllipticCurveQ::from_ainvs(a).unwrap()
    }

    #[test]
    fn invariant_identities() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 100 {
            let a: [i64; 5] = std::array::from_fn(|_| rng.gen_range(-50..=50));
            let Ok(e) = EllipticCurveQ::from_ainvs(a) else { continue };
            assert_eq!(4 * &e.b8, &e.b2 * &e.b6 - &e.b4 * &e.b4);
            assert_eq!(1728 * &e.disc, &e.c4 * &e.c4 * &e.c4 - &e.c6 * &e.c6);
            checked += 1;
        }
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(EllipticCurveQ::from_ainvs([0, 0, 0, 0, 0]), Err(EllipticError::SingularCurve));
    }

    #[test]
    fn conductor_121_invariants() {
        let b1 = curve([0, -1, 1, -7, 10]);
        assert_eq!(b1.j, BigRational::from_integer(BigInt::from(-32768)));
        let c1 = curve([1, 1, 0, -2, -7]);
        assert_eq!(c1.j, BigRational::from_integer(BigInt::from(-121)));
        let c2 = curve([1, 1, 0, -3632, 82757]);
        assert_eq!(c2.j, BigRational::from_integer(BigInt::from(-11 * 131i64.pow(3))));
    }

    #[test]
    fn traces_at_two() {
        assert_eq!(trace_of_frobenius(&curve([0, -1, 1, -7, 10]), 2).unwrap(), 0);
        assert_eq!(trace_of_frobenius(&curve([1, 1, 0, -2, -7]), 2).unwrap(), 1);
        assert_eq!(trace_of_frobenius(&curve([1, 1, 0, -3632, 82757]), 2).unwrap(), 1);
    }

    #[test]
    fn cm_curve_counts() {
        let e = curve([0, 0, 0, 1, 0]);
        assert_eq!(count_points(&e, 5).unwrap(), 4);
        assert_eq!(trace_of_frobenius(&e, 5).unwrap(), 2);
        assert!(!is_supersingular(&e, 5).unwrap());
        assert!(is_supersingular(&e, 7).unwrap());
        assert_eq!(count_points(&e, 2), Err(EllipticError::BadReduction(2)));
    }

    #[test]
    fn dual_counts_agree_small() {
        let e = curve([1, 1, 0, -2, -7]);
        for ell in [3u64, 5, 7, 13, 17] {
            assert_eq!(count_points_naive(&e, ell), count_points_character_sum(&e, ell), "ell = {ell}");
        }
    }

    #[test]
    fn trace_table_is_hasse_bounded() {
        let fd = frobenius_traces(&curve([0, -1, 1, -10, -20]), 500);
        assert!(fd.good().all(|e| within_hasse_bound(e.a, e.ell)));
        assert!(fd.entries.iter().any(|e| e.ell == 11 && !e.good));
        assert_eq!(fd, frobenius_traces(&curve([0, -1, 1, -10, -20]), 500));
    }

    #[test]
    fn reduction_types() {
        let c1 = curve([1, 1, 0, -2, -7]);
        assert_ne!(reduction_type(&c1, 11).unwrap(), ReductionType::Good);
        assert_eq!(reduction_type(&c1, 3).unwrap(), ReductionType::Good);
        assert_eq!(reduction_type(&c1, 2), Err(EllipticError::UnsupportedPrime(2)));
        // 11a1 has split multiplicative reduction at 11
        let e11 = curve([0, -1, 1, -10, -20]);
        assert_eq!(reduction_type(&e11, 11).unwrap(), ReductionType::MultiplicativeSplit);
    }

    /// Split iff -c6 is a square, and the nodal cubic has p - a points with a = ±1.
    fn multiplicative_oracle(e: &EllipticCurveQ, p: u64) -> ReductionType {
        let by_c6 = legendre(-(mod_u64(&e.c6, p) as i64), p);
        let a = p as i64 + 1 - count_points_naive(e, p) as i64;
        let split = by_c6 == 1;
        assert_eq!(a, if split { 1 } else { -1 });
        if split {
            ReductionType::MultiplicativeSplit
        } else {
            ReductionType::MultiplicativeNonsplit
        }
    }

    #[test]
    fn multiplicative_types_match_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut seen = [0usize; 2];
        for _ in 0..400 {
            let a: [i64; 5] = std::array::from_fn(|_| rng.gen_range(-30..=30));
            let Ok(e) = EllipticCurveQ::from_ainvs(a) else { continue };
            for p in [3u64, 5, 7, 11, 13] {
                let t = reduction_type(&e, p).unwrap();
                if t.is_multiplicative() {
                    assert_eq!(t, multiplicative_oracle(&e, p));
                    seen[usize::from(t == ReductionType::MultiplicativeSplit)] += 1;
                    let moved = e.translate_x(&BigInt::from(p as i64 * 3));
                    assert_eq!(reduction_type(&moved, p).unwrap(), t);
                }
            }
        }
        assert!(seen[0] > 0 && seen[1] > 0);
    }

    #[test]
    fn twist_scaling_and_j() {
        let e = curve([1, 1, 0, -2, -7]);
        assert_eq!(quadratic_twist(&e, 1).unwrap(), e);
        for d in [-7i64, -3, 5, 13] {
            let t = quadratic_twist(&e, d).unwrap();
            let d = BigInt::from(d);
            assert_eq!(t.c4, 16 * &d * &d * &e.c4);
            assert_eq!(t.c6, 64 * &d * &d * &d * &e.c6);
            assert_eq!(t.j, e.j);
        }
        assert_eq!(quadratic_twist(&e, 12), Err(EllipticError::NotSquarefree(12)));
    }

    #[test]
    fn twist_trace_identity() {
        let e = curve([0, -1, 1, -10, -20]);
        for d in [-3i64, 5, -7, 13] {
            let t = quadratic_twist(&e, d).unwrap();
            for ell in primes_up_to(200) {
                if ell == 2 || e.divides_disc(ell) || d.rem_euclid(ell as i64) == 0 {
                    continue;
                }
                let lhs = trace_of_frobenius(&t, ell).unwrap();
                let rhs = kronecker_odd_prime(d, ell) as i64 * trace_of_frobenius(&e, ell).unwrap();
                assert_eq!(lhs, rhs, "d = {d}, ell = {ell}");
            }
        }
    }

    #[test]
    fn two_torsion() {
        assert!(has_full_rational_2torsion(&curve([0, 0, 0, -1, 0])));
        assert!(!has_full_rational_2torsion(&curve([0, 0, 0, 1, 1])));
        let legendre_twist = quadratic_twist(&curve([0, 0, 0, -1, 0]), -5).unwrap();
        assert!(has_full_rational_2torsion(&legendre_twist));
        // y^2 = x(x - 1)(x + 2) in a non-short model still splits
        assert!(has_full_rational_2torsion(&curve([0, 1, 0, -2, 0])));
        assert!(!has_full_rational_2torsion(&curve([0, -1, 1, -10, -20])));
    }

    #[test]
    fn cubic_roots() {
        let r = |a: i64, b: i64, c: i64| {
            integer_roots_of_monic_cubic(&BigInt::from(a), &BigInt::from(b), &BigInt::from(c))
        };
        // (X - 1)(X + 2)(X - 1000)
        assert_eq!(r(-999, -1002, 2000), vec![BigInt::from(-2), BigInt::from(1), BigInt::from(1000)]);
        assert_eq!(r(0, 0, -8), vec![BigInt::from(2)]);
        assert!(r(0, 1, 1).is_empty());
    }

    #[test]
    fn parsing() {
        let recs = parse_curve_file("# comment\n121-B1: 0,-1,1,-7,10\n\n1,1,0,-2,-7 # trailing\n").unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].label.as_deref(), Some("121-B1"));
        assert_eq!(recs[1].label, None);
        assert!(recs[1].curve().is_ok());
        match parse_curve_file("x: 1,2,z,4,5") {
            Err(EllipticError::Parse { line: 1, column, .. }) => assert_eq!(column, 8),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_curve_line("1,2,3", 4), Err(EllipticError::Parse { line: 4, .. })));
    }

    #[test]
    fn factoring_discriminant() {
        let e = curve([0, -1, 1, -10, -20]);
        assert_eq!(e.bad_primes().unwrap(), vec![11]);
        assert!(is_probable_prime(1_000_000_007));
        assert!(!is_probable_prime(1_000_000_007 * 3));
    }
}
