//! Semisimplification tests from Frobenius traces, and exact prime thresholds.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{factorize, prime_factors};
use crate::elliptic::FrobeniusData;
use crate::fp::{is_prime, pow_mod};
use crate::gl2::primitive_root;

/// Largest number of characters (Z/M)^* -> F_p^* a scan may enumerate.
pub const CHARACTER_BUDGET: u64 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("character group has {needed} elements, budget {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("modulus {0} must be positive and divisible by p")]
    BadModulus(u64),
}

pub type Result<T> = std::result::Result<T, GaloisError>;

fn check_odd_prime(p: u64) -> Result<()> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(GaloisError::NotOddPrime(p));
    }
    Ok(())
}

/// Residue in `(-p/2, p/2]`.
pub fn symmetric_residue(x: i64, p: u64) -> i64 {
    let r = x.rem_euclid(p as i64);
    if r > p as i64 / 2 {
        r - p as i64
    } else {
        r
    }
}

/// Normalized pairs `a <= b` in `[0, p-1)` with `a + b ≡ 1 mod (p - 1)`.
pub fn cyclotomic_pair_candidates(p: u64) -> Result<Vec<(u64, u64)>> {
    check_odd_prime(p)?;
    let n = p - 1;
    let mut out: Vec<(u64, u64)> = (0..n)
        .map(|a| {
            let b = (1 + n - a) % n;
            (a.min(b), a.max(b))
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `ell^a + ell^b mod p`.
pub fn power_pair_residue(ell: u64, a: u64, b: u64, p: u64) -> u64 {
    (pow_mod(ell % p, a, p) + pow_mod(ell % p, b, p)) % p
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum HypothesisVerdict {
    /// No contradiction at any of the listed primes. One-sided evidence only.
    Consistent { checked: Vec<u64> },
    /// `a_ell` is not congruent to the predicted residue.
    RefutedAt { ell: u64, observed: i64, expected: u64 },
}

impl HypothesisVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, HypothesisVerdict::Consistent { .. })
    }
}

/// Tests `a_ell ≡ ell^a + ell^b mod p` at good primes `ell != p` in increasing order.
pub fn test_cyclotomic_pair(fd: &FrobeniusData, p: u64, pair: (u64, u64)) -> HypothesisVerdict {
    let mut checked = Vec::new();
    for e in fd.good().filter(|e| e.ell != p) {
        let expected = power_pair_residue(e.ell, pair.0, pair.1, p);
        if e.a.rem_euclid(p as i64) as u64 != expected {
            return HypothesisVerdict::RefutedAt { ell: e.ell, observed: e.a, expected };
        }
        checked.push(e.ell);
    }
    HypothesisVerdict::Consistent { checked }
}

/// Recomputes a refutation witness from scratch.
pub fn replay_refutation(fd: &FrobeniusData, p: u64, pair: (u64, u64), verdict: &HypothesisVerdict) -> bool {
    match verdict {
        HypothesisVerdict::RefutedAt { ell, observed, expected } => {
            let a = crate::elliptic::trace_of_frobenius(&fd.curve, *ell);
            a == Ok(*observed)
                && power_pair_residue(*ell, pair.0, pair.1, p) == *expected
                && observed.rem_euclid(p as i64) as u64 != *expected
        }
        HypothesisVerdict::Consistent { .. } => false,
    }
}

/// The pair for the twist by the quadratic character `ε_p^((p-1)/2)`.
pub fn twisted_pair(pair: (u64, u64), p: u64) -> (u64, u64) {
    let n = p - 1;
    let (a, b) = ((pair.0 + n / 2) % n, (pair.1 + n / 2) % n);
    (a.min(b), a.max(b))
}

/// `x` with `3x ≡ 1 mod (p - 1)`, when 3 is invertible mod `p - 1`.
pub fn chi_cubed_equals_epsilon(p: u64) -> Result<Option<u64>> {
    check_odd_prime(p)?;
    let n = (p - 1) as i64;
    let ext = 3i64.extended_gcd(&n);
    if ext.gcd != 1 {
        return Ok(None);
    }
    Ok(Some(ext.x.rem_euclid(n) as u64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairShape {
    /// `1 ⊕ ε_p`.
    OneEps,
    /// `χ ⊕ χ^2` with `χ^3 = ε_p`.
    ChiChiSquared,
}

/// One cyclic factor of `(Z/M)^*` together with the F_p^*-valued data we need.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
struct CyclicFactor {
    prime_power: u64,
    generator: u64,
    order: u64,
    /// Number of characters of this factor into F_p^*: gcd(order, p - 1).
    d: u64,
}

/// Characters `(Z/M)^* -> F_p^*`, each given by an exponent per cyclic factor.
#[derive(Clone, Debug)]
pub struct CharacterGroup {
    p: u64,
    modulus: u64,
    factors: Vec<CyclicFactor>,
    root: u64,
}

impl CharacterGroup {
    pub fn new(modulus: u64, p: u64) -> Result<Self> {
        check_odd_prime(p)?;
        if modulus == 0 {
            return Err(GaloisError::BadModulus(modulus));
        }
        let mut factors = Vec::new();
        for (q, e) in factorize(modulus) {
            let qe = q.pow(e);
            if q == 2 {
                match e {
                    1 => {}
                    2 => factors.push(CyclicFactor { prime_power: 4, generator: 3, order: 2, d: 0 }),
                    _ => {
                        factors.push(CyclicFactor { prime_power: qe, generator: qe - 1, order: 2, d: 0 });
                        factors.push(CyclicFactor { prime_power: qe, generator: 5, order: qe / 4, d: 0 });
                    }
                }
            } else {
                let order = qe / q * (q - 1);
                factors.push(CyclicFactor { prime_power: qe, generator: primitive_root_prime_power(q, e), order, d: 0 });
            }
        }
        for f in &mut factors {
            f.d = f.order.gcd(&(p - 1));
        }
        Ok(CharacterGroup { p, modulus, factors, root: primitive_root(p as u32) as u64 })
    }

    pub fn size(&self) -> u64 {
        self.factors.iter().map(|f| f.d).product()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// For each factor, the discrete log of `ell` reduced mod `d`.
    fn logs(&self, ell: u64) -> Vec<u64> {
        self.factors
            .iter()
            .map(|f| {
                if f.d == 1 {
                    return 0;
                }
                let m = f.prime_power;
                let x = if m > 4 && f.order == 2 && f.generator == m - 1 {
                    // the ±1 factor of (Z/2^e)^*
                    return u64::from(ell % 4 == 3);
                } else {
                    ell % m
                };
                let k = f.order / f.d;
                let target = pow_mod(x, k, m);
                let base = pow_mod(f.generator, k, m);
                let mut acc = 1 % m;
                for j in 0..f.d {
                    if acc == target {
                        return j;
                    }
                    acc = (acc as u128 * base as u128 % m as u128) as u64;
                }
                unreachable!("log exists in a cyclic group")
            })
            .collect()
    }

    /// `χ(ell)` for the character with the given exponents.
    fn evaluate(&self, exponents: &[u64], logs: &[u64]) -> u64 {
        let n = self.p - 1;
        let mut e = 0u64;
        for ((f, &k), &l) in self.factors.iter().zip(exponents).zip(logs) {
            if f.d > 1 {
                // generator -> root^((p-1)/d * k)
                e = (e + (n / f.d) * k % n * l) % n;
            }
        }
        pow_mod(self.root, e, self.p)
    }

    fn all_exponents(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for f in &self.factors {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..f.d).map(move |k| {
                        let mut w = v.clone();
                        w.push(k);
                        w
                    })
                })
                .collect();
        }
        out
    }
}

fn primitive_root_prime_power(q: u64, e: u32) -> u64 {
    let g = primitive_root(q as u32) as u64;
    if e == 1 {
        return g;
    }
    let m = q.pow(e);
    // g or g + q generates mod q^2, hence mod every q^e
    if pow_mod(g, q - 1, q * q) != 1 {
        g
    } else {
        (g + q) % m
    }
}

/// A candidate description of the semisimplified mod-p representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SemisimpHypothesis {
    CyclotomicPair { a: u64, b: u64 },
    /// `χ ⊕ χ^2` for a Dirichlet character χ mod `modulus`, given by its
    /// values on the listed generators of the cyclic factors.
    DirichletPair { modulus: u64, generators: Vec<u64>, values: Vec<u64> },
    IrreducibleOrUnknown,
}

impl fmt::Display for SemisimpHypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemisimpHypothesis::CyclotomicPair { a, b } => write!(f, "eps^{a} + eps^{b}"),
            SemisimpHypothesis::DirichletPair { modulus, values, .. } => {
                write!(f, "chi + chi^2 (chi mod {modulus}, values {values:?})")
            }
            SemisimpHypothesis::IrreducibleOrUnknown => write!(f, "irreducible or unknown"),
        }
    }
}

/// Scans Dirichlet-character shapes over the good primes of `fd` not dividing
/// `modulus`, returning every hypothesis still consistent.
pub fn dirichlet_pair_scan(fd: &FrobeniusData, p: u64, modulus: u64, shape: PairShape) -> Result<Vec<SemisimpHypothesis>> {
    check_odd_prime(p)?;
    if modulus == 0 || modulus % p != 0 {
        return Err(GaloisError::BadModulus(modulus));
    }
    let primes: Vec<(u64, i64)> = fd.good().filter(|e| modulus % e.ell != 0).map(|e| (e.ell, e.a)).collect();
    match shape {
        PairShape::OneEps => {
            let ok = primes.iter().all(|&(ell, a)| a.rem_euclid(p as i64) as u64 == (1 + ell) % p);
            Ok(if ok { vec![SemisimpHypothesis::CyclotomicPair { a: 0, b: 1 }] } else { Vec::new() })
        }
        PairShape::ChiChiSquared => {
            let group = CharacterGroup::new(modulus, p)?;
            let needed = group.size();
            if needed > CHARACTER_BUDGET {
                return Err(GaloisError::BudgetExceeded { needed, budget: CHARACTER_BUDGET });
            }
            let logs: Vec<Vec<u64>> = primes.iter().map(|&(ell, _)| group.logs(ell)).collect();
            let mut out = Vec::new();
            for ex in group.all_exponents() {
                let consistent = primes.iter().zip(&logs).all(|(&(ell, a), l)| {
                    let chi = group.evaluate(&ex, l);
                    let cube_ok = pow_mod(chi, 3, p) == ell % p;
                    let trace_ok = a.rem_euclid(p as i64) as u64 == (chi + chi * chi) % p;
                    cube_ok && trace_ok
                });
                if consistent {
                    let values = group
                        .factors
                        .iter()
                        .zip(&ex)
                        .map(|(f, &k)| if f.d > 1 { pow_mod(group.root, (p - 1) / f.d * k, p) } else { 1 })
                        .collect();
                    out.push(SemisimpHypothesis::DirichletPair {
                        modulus,
                        generators: group.factors.iter().map(|f| f.generator).collect(),
                        values,
                    });
                }
            }
            Ok(out)
        }
    }
}

/// Product of the distinct primes dividing `n`, times `p` if not already present.
pub fn default_character_modulus(bad_primes: &[u64], p: u64) -> u64 {
    let mut m: u64 = bad_primes.iter().product();
    if m % p != 0 {
        m *= p;
    }
    m
}

/// The real number `(a + sqrt(b))^2`, compared exactly against integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SqrtThreshold {
    pub a: u64,
    pub b: u64,
}

impl SqrtThreshold {
    /// `(Nv + sqrt(Nv))^2`.
    pub fn nv(nv: u64) -> Self {
        SqrtThreshold { a: nv, b: nv }
    }

    /// `(2^d + 2^(d/2))^2`.
    pub fn uniform_degree(d: u32) -> Self {
        SqrtThreshold { a: 1 << d, b: 1 << d }
    }

    /// `(1 + 3^(d/2))^2`.
    pub fn torsion_degree(d: u32) -> Self {
        SqrtThreshold { a: 1, b: 3u64.pow(d) }
    }

    /// `p > (a + sqrt(b))^2`, i.e. `t = p - a^2 - b > 0` and `t^2 > 4 a^2 b`.
    pub fn is_exceeded_by(&self, p: u64) -> bool {
        let (a, b, p) = (BigInt::from(self.a), BigInt::from(self.b), BigInt::from(p));
        let t = p - &a * &a - &b;
        t.is_positive() && &t * &t > 4 * &a * &a * &b
    }

    /// Smallest integer strictly above the threshold.
    pub fn least_integer_above(&self) -> u64 {
        let base = self.a * self.a + self.b;
        let mut p = base + (4 * self.a * self.a * self.b).isqrt();
        while p > 0 && self.is_exceeded_by(p - 1) {
            p -= 1;
        }
        while !self.is_exceeded_by(p) {
            p += 1;
        }
        p
    }

    /// Decimal rendering truncated to `digits` places, computed with integers.
    pub fn decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u64).pow(digits);
        let (a, b) = (BigInt::from(self.a), BigInt::from(self.b));
        let whole = (&a * &a + &b) * &scale;
        // 2 a sqrt(b) * 10^digits = sqrt(4 a^2 b 10^(2 digits))
        let radicand: BigInt = 4 * &a * &a * &b * &scale * &scale;
        let cross = radicand.sqrt();
        let v = whole + cross;
        let (int, frac) = v.div_rem(&scale);
        format!("{}.{:0width$}", int, frac.to_u64().unwrap_or(0), width = digits as usize)
    }
}

/// Values `Nv + 1 - a` and `Nv + Nv^2 + 3 Nv a - a^3` for every integer `a`
/// with `a^2 <= 4 Nv`, in increasing order of `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BadSets {
    pub nv: u64,
    pub traces: Vec<i64>,
    pub set_a: Vec<i64>,
    pub set_b: Vec<i64>,
}

impl BadSets {
    /// Largest prime dividing a nonzero member of either set.
    pub fn largest_prime(&self) -> u64 {
        self.set_a
            .iter()
            .chain(&self.set_b)
            .filter(|&&x| x != 0)
            .flat_map(|&x| prime_factors(x.unsigned_abs()))
            .max()
            .unwrap_or(1)
    }
}

pub fn nv_bad_sets(nv: u64) -> BadSets {
    let n = nv as i64;
    let traces: Vec<i64> = (-2 * n..=2 * n).filter(|&a| a * a <= 4 * n).collect();
    BadSets {
        nv,
        set_a: traces.iter().map(|&a| n + 1 - a).collect(),
        set_b: traces.iter().map(|&a| n + n * n + 3 * n * a - a * a * a).collect(),
        traces,
    }
}

pub fn nv3_bad_sets() -> BadSets {
    nv_bad_sets(3)
}

/// Counts `(N, a)` with `2 <= N <= n_max`, `a^2 <= 4N` violating
/// `(N - sqrt N)^2 <= N + N^2 + 3Na - a^3 <= (N + sqrt N)^2`.
///
/// Both sides differ from `N + N^2` by `±2N sqrt N`, so the check is
/// `(3Na - a^3)^2 <= 4 N^3`.
pub fn hasse_function_violations(n_max: u64) -> Vec<(u64, i64)> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        let ni = n as i128;
        let r = (4 * n).isqrt() as i128;
        for a in -r..=r {
            let t = 3 * ni * a - a * a * a;
            if t * t > 4 * ni * ni * ni {
                out.push((n, a as i64));
            }
        }
    }
    out
}

/// Same inequality, checked directly on the squared forms without the
/// simplification, as an independent oracle.
pub fn hasse_function_holds_direct(n: u64, a: i64) -> bool {
    let (n, a) = (BigInt::from(n), BigInt::from(a));
    let f: BigInt = &n + &n * &n + 3 * &n * &a - &a * &a * &a;
    // f <= N^2 + N + 2N sqrt N  <=>  f - N^2 - N <= 0 or (f - N^2 - N)^2 <= 4 N^3
    let base: BigInt = &n * &n + &n;
    let upper = {
        let t = &f - &base;
        !t.is_positive() || &t * &t <= 4 * &n * &n * &n
    };
    let lower = {
        let t = &base - &f;
        !t.is_positive() || &t * &t <= 4 * &n * &n * &n
    };
    upper && lower
}
