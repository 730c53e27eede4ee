//! Cube classes in Q_p^*, local points on diagonal cubics `aX^3 + bY^3 + cZ^3`,
//! and the report for the cubic `3X^3 + 4Y^3 + 5Z^3`.

use num_integer::Integer;
use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::fp::{is_prime, pow_mod};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero has no cube class")]
    Zero,
    #[error("precision {k} too small (need at least {min})")]
    PrecisionTooSmall { k: u32, min: u32 },
    #[error("no certified point and no refutation at precision {k} for p = {p}")]
    PrecisionInsufficient { p: u64, k: u32 },
    #[error("coefficients must be nonzero")]
    ZeroCoefficient,
}

pub type Result<T> = std::result::Result<T, LocalError>;

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(LocalError::NotPrime(p));
    }
    Ok(())
}

fn valuation(mut n: i64, p: u64) -> (i64, i64) {
    let p = p as i64;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    (v, n)
}

/// `p^valuation * unit` with the unit known modulo `p^precision`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PAdicApprox {
    pub p: u64,
    pub valuation: i64,
    pub unit: u64,
    pub precision: u32,
}

impl PAdicApprox {
    pub fn from_rational(x: Rational64, p: u64, precision: u32) -> Result<Self> {
        check_prime(p)?;
        if *x.numer() == 0 {
            return Err(LocalError::Zero);
        }
        if precision == 0 {
            return Err(LocalError::PrecisionTooSmall { k: 0, min: 1 });
        }
        let (vn, un) = valuation(*x.numer(), p);
        let (vd, ud) = valuation(*x.denom(), p);
        let m = p.pow(precision) as i64;
        let inv = ud.rem_euclid(m).extended_gcd(&m).x.rem_euclid(m);
        let unit = (un.rem_euclid(m) as i128 * inv as i128 % m as i128) as u64;
        Ok(PAdicApprox { p, valuation: vn - vd, unit, precision })
    }

    /// Least precision at which the cube class is determined.
    pub fn min_precision(p: u64) -> u32 {
        if p == 3 {
            2
        } else {
            1
        }
    }

    pub fn cube_class(&self) -> Result<CubeClass> {
        let min = Self::min_precision(self.p);
        if self.precision < min {
            return Err(LocalError::PrecisionTooSmall { k: self.precision, min });
        }
        Ok(CubeClass { valuation_mod3: self.valuation.rem_euclid(3) as u8, unit_class: unit_class(self.unit, self.p) })
    }
}

/// Representative of the unit's image in `Z_p^* / (Z_p^*)^3`.
fn unit_class(unit: u64, p: u64) -> u64 {
    if p == 3 {
        // (Z/9)^* / {±1} with representatives 1, 2, 4
        match unit % 9 {
            1 | 8 => 1,
            2 | 7 => 2,
            4 | 5 => 4,
            _ => unreachable!("unit mod 9"),
        }
    } else if p % 3 == 1 {
        pow_mod(unit % p, (p - 1) / 3, p)
    } else {
        1
    }
}

/// Image in `Q_p^* / (Q_p^*)^3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CubeClass {
    pub valuation_mod3: u8,
    pub unit_class: u64,
}

impl CubeClass {
    pub fn is_trivial(&self) -> bool {
        self.valuation_mod3 == 0 && self.unit_class == 1
    }
}

pub fn cube_class(x: Rational64, p: u64) -> Result<CubeClass> {
    PAdicApprox::from_rational(x, p, PAdicApprox::min_precision(p))?.cube_class()
}

/// Whether `x` is a cube in Q_p.
pub fn is_cube(x: Rational64, p: u64) -> Result<bool> {
    Ok(cube_class(x, p)?.is_trivial())
}

/// Order of `Z_p^* / (Z_p^*)^3`.
pub fn unit_cube_class_order(p: u64) -> u64 {
    if p == 3 || p % 3 == 1 {
        3
    } else {
        1
    }
}

/// Order of `Q_p^* / (Q_p^*)^3`.
pub fn cube_class_group_order(p: u64) -> u64 {
    3 * unit_cube_class_order(p)
}

/// Whether Q_v contains a primitive cube root of unity.
pub fn has_zeta3(v: u64) -> Result<bool> {
    check_prime(v)?;
    Ok(v % 3 == 1)
}

/// The cubic form `aX^3 + bY^3 + cZ^3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalCubic {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl DiagonalCubic {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        if a == 0 || b == 0 || c == 0 {
            return Err(LocalError::ZeroCoefficient);
        }
        Ok(DiagonalCubic { a, b, c })
    }

    fn coeffs(&self) -> [i128; 3] {
        [self.a as i128, self.b as i128, self.c as i128]
    }

    pub fn eval(&self, x: [i128; 3]) -> i128 {
        let k = self.coeffs();
        (0..3).map(|i| k[i] * x[i] * x[i] * x[i]).sum()
    }

    pub fn partial(&self, x: [i128; 3], i: usize) -> i128 {
        3 * self.coeffs()[i] * x[i] * x[i]
    }
}

/// Whether some point of the cubic over Q_p has a vanishing coordinate.
pub fn coordinate_section_point(c: &DiagonalCubic, p: u64) -> Result<bool> {
    Ok(is_cube(Rational64::new(-c.c, c.b), p)?
        || is_cube(Rational64::new(-c.c, c.a), p)?
        || is_cube(Rational64::new(-c.b, c.a), p)?)
}

/// Default scan precision.
pub fn default_precision(p: u64) -> u32 {
    if p == 3 {
        6
    } else {
        5
    }
}

/// A point modulo `p^precision` with `v(F) >= precision > 2 v(∂F/∂x_i)`,
/// so it lifts to a Q_p-point by Hensel's lemma in coordinate `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HenselCertificate {
    pub p: u64,
    pub precision: u32,
    pub point: [i128; 3],
    pub coordinate: usize,
    pub derivative_valuation: u32,
}

fn val_i128(x: i128, p: u64, cap: u32) -> u32 {
    let p = p as i128;
    let mut x = x;
    let mut v = 0;
    while v < cap && x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn certify(c: &DiagonalCubic, p: u64, j: u32, x: [i128; 3]) -> Option<HenselCertificate> {
    (0..3).find_map(|i| {
        let s = val_i128(c.partial(x, i), p, j);
        (j > 2 * s).then_some(HenselCertificate { p, precision: j, point: x, coordinate: i, derivative_valuation: s })
    })
}

impl HenselCertificate {
    /// Lifts the point to precision + 1 by adjusting the certified coordinate.
    pub fn lift_one_digit(&self, c: &DiagonalCubic) -> Option<HenselCertificate> {
        let p = self.p as i128;
        let j = self.precision;
        let s = self.derivative_valuation;
        let step = p.pow(j - s);
        let modulus = p.pow(j + 1);
        (0..p.pow(s + 1)).find_map(|m| {
            let mut x = self.point;
            x[self.coordinate] = (x[self.coordinate] + m * step).rem_euclid(modulus);
            if c.eval(x).rem_euclid(modulus) != 0 {
                return None;
            }
            let s_next = val_i128(c.partial(x, self.coordinate), self.p, j + 1);
            (s_next == s).then_some(HenselCertificate { precision: j + 1, point: x, ..*self })
        })
    }
}

/// Whether the cubic has a point over Q_p, with a certificate when one is found by search.
pub fn local_point(c: &DiagonalCubic, p: u64, k: u32) -> Result<(bool, Option<HenselCertificate>)> {
    check_prime(p)?;
    if k < 5 {
        return Err(LocalError::PrecisionTooSmall { k, min: 5 });
    }
    let bad = |n: i64| n.rem_euclid(p as i64) == 0;
    if p != 3 && !bad(c.a) && !bad(c.b) && !bad(c.c) {
        // smooth plane cubic: a point over F_p exists and lifts
        return Ok((true, None));
    }
    let pi = p as i128;
    // charts for primitive triples up to units: x = 1; x ≡ 0, y = 1; x ≡ y ≡ 0, z = 1
    // each entry carries the index of its coordinate fixed to 1
    let mut level: Vec<([i128; 3], usize)> = Vec::new();
    for (fixed, lead) in [(0usize, [1, 0, 0]), (1, [0, 1, 0]), (2, [0, 0, 1])] {
        let free: Vec<usize> = (fixed + 1..3).collect();
        for n in 0..pi.pow(free.len() as u32) {
            let mut t: [i128; 3] = lead;
            let mut r = n;
            for &i in &free {
                t[i] = r % pi;
                r /= pi;
            }
            if c.eval(t).rem_euclid(pi) == 0 {
                level.push((t, fixed));
            }
        }
    }
    for j in 1..=k {
        if level.is_empty() {
            return Ok((false, None));
        }
        if let Some(cert) = level.iter().find_map(|&(x, _)| certify(c, p, j, x)) {
            return Ok((true, Some(cert)));
        }
        if j == k {
            break;
        }
        let m = pi.pow(j);
        let next_mod = m * pi;
        let mut next = Vec::new();
        for &(x, fixed) in &level {
            let free: Vec<usize> = (0..3).filter(|&i| i != fixed).collect();
            for n in 0..pi.pow(2) {
                let mut y = x;
                let mut r = n;
                for &i in &free {
                    y[i] += (r % pi) * m;
                    r /= pi;
                }
                if c.eval(y).rem_euclid(next_mod) == 0 {
                    next.push((y, fixed));
                }
            }
        }
        level = next;
    }
    Err(LocalError::PrecisionInsufficient { p, k })
}

pub fn has_local_point(c: &DiagonalCubic, p: u64, k: u32) -> Result<bool> {
    Ok(local_point(c, p, k)?.0)
}

/// Points over R: an odd-degree form in three variables always has a real zero.
pub fn has_real_point(_c: &DiagonalCubic) -> bool {
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Computed,
    Cited,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportStep {
    pub id: String,
    pub statement: String,
    pub kind: StepKind,
    /// Recomputed value, for computed steps.
    pub value: Option<String>,
    pub expected: Option<String>,
    pub pass: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionResult {
    pub name: String,
    pub coefficients: [i64; 3],
    pub coordinate_section_point: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelmerReport {
    pub jacobian: String,
    pub jacobian_ainvs: [i64; 5],
    pub sections: Vec<SectionResult>,
    pub steps: Vec<ReportStep>,
}

impl SelmerReport {
    pub fn all_computed_pass(&self) -> bool {
        self.steps.iter().filter(|s| s.kind == StepKind::Computed).all(|s| s.pass == Some(true))
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("Jacobian {} with a-invariants {:?}\n\n", self.jacobian, self.jacobian_ainvs);
        out.push_str("coordinate-section points over Q_3:\n");
        for s in &self.sections {
            out.push_str(&format!("  {:<5} {:?}  {}\n", s.name, s.coefficients, s.coordinate_section_point));
        }
        out.push('\n');
        for s in &self.steps {
            let kind = match s.kind {
                StepKind::Computed => "computed",
                StepKind::Cited => "cited",
            };
            let status = match s.pass {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None => "-",
            };
            out.push_str(&format!("[{kind:<8}] {:<4} {:<28} {}", status, s.id, s.statement));
            if let Some(v) = &s.value {
                out.push_str(&format!(" = {v}"));
            }
            out.push('\n');
        }
        out
    }
}

/// The cubics `S, S', S'', S'''` whose classes are compared.
pub fn selmer_cubics() -> [(&'static str, DiagonalCubic); 4] {
    [
        ("S", DiagonalCubic { a: 3, b: 4, c: 5 }),
        ("S'", DiagonalCubic { a: 1, b: 5, c: 12 }),
        ("S''", DiagonalCubic { a: 1, b: 4, c: 15 }),
        ("S'''", DiagonalCubic { a: 1, b: 3, c: 20 }),
    ]
}

fn computed(id: &str, statement: &str, value: String, expected: &str) -> ReportStep {
    ReportStep {
        id: id.into(),
        statement: statement.into(),
        kind: StepKind::Computed,
        pass: Some(value == expected),
        value: Some(value),
        expected: Some(expected.into()),
    }
}

fn cited(id: &str, statement: &str) -> ReportStep {
    ReportStep { id: id.into(), statement: statement.into(), kind: StepKind::Cited, value: None, expected: None, pass: None }
}

/// Recomputes every computable ingredient for the cubic `3X^3 + 4Y^3 + 5Z^3`
/// and lists the cohomological conclusions it feeds as cited.
pub fn selmer_example_report() -> Result<SelmerReport> {
    let sections: Vec<SectionResult> = selmer_cubics()
        .iter()
        .map(|(name, c)| {
            Ok(SectionResult {
                name: name.to_string(),
                coefficients: [c.a, c.b, c.c],
                coordinate_section_point: coordinate_section_point(c, 3)?,
            })
        })
        .collect::<Result<_>>()?;
    let mut steps = Vec::new();

    let classes: std::collections::BTreeSet<CubeClass> = (0..3)
        .flat_map(|i| (0..3).map(move |j| Rational64::from_integer(2i64.pow(i) * 3i64.pow(j))))
        .map(|x| cube_class(x, 3))
        .collect::<Result<_>>()?;
    steps.push(computed("gen", "classes of 2^i 3^j in Q_3^*/(Q_3^*)^3", classes.len().to_string(), "9"));
    steps.push(computed("ten", "10 is a cube in Q_3", is_cube(Rational64::from_integer(10), 3)?.to_string(), "true"));
    let flags: Vec<String> = sections.iter().map(|s| s.coordinate_section_point.to_string()).collect();
    steps.push(computed(
        "xyz0",
        "XYZ = 0 has a Q_3-point on S, S', S'', S'''",
        flags.join(","),
        "true,false,false,false",
    ));
    for v in [2u64, 5] {
        steps.push(computed(
            &format!("cube60@{v}"),
            &format!("60 is a cube in Q_{v}"),
            is_cube(Rational64::from_integer(60), v)?.to_string(),
            "false",
        ));
        steps.push(computed(&format!("zeta3@{v}"), &format!("zeta_3 lies in Q_{v}"), has_zeta3(v)?.to_string(), "false"));
    }
    let s = selmer_cubics()[0].1;
    let mut failures = Vec::new();
    for p in crate::arith::primes_up_to(100) {
        if !has_local_point(&s, p, default_precision(p))? {
            failures.push(p);
        }
    }
    steps.push(computed(
        "local",
        "S has a Q_p-point for every p <= 100, and a real point",
        format!("{:?}", (failures, has_real_point(&s))),
        "([], true)",
    ));

    steps.push(cited("sel", "|Selmer group of E_{3^n}| = 3^(n+1)"));
    steps.push(cited("sha", "Sha(E/Q) is Z/3 x Z/3"));
    steps.push(cited("gen-s", "the 3-Selmer part in Sha is generated by [S]"));
    steps.push(cited("div", "antisymmetry of the Weil-Bockstein pairing makes [S] divisible"));

    Ok(SelmerReport {
        jacobian: "X^3 + Y^3 + 60Z^3 = 0".into(),
        jacobian_ainvs: [0, 0, 0, 0, -432 * 60 * 60],
        sections,
        steps,
    })
}
