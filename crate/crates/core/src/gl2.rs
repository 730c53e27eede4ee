//! Explicit subgroups of GL2(F_p).
//!
//! Groups are stored as their full, sorted element lists. Everything in this
//! crate runs for p ≤ 13, where |GL2(F_p)| ≤ 26208, so explicit sets are cheap.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fp::{add_mod, inv_mod, mul_mod, pow_mod, sub_mod, FpMatrix, LinalgError, Prime};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("generator {0} is not invertible mod {1}")]
    NonInvertibleGenerator(Mat2, u32),
    #[error("closure exceeded {cap} elements")]
    SizeCapExceeded { cap: usize },
    #[error("enumeration mode unsupported for p = {0}")]
    ModeUnsupported(u32),
    #[error("classification found no matching case (order {order}, p = {p})")]
    InternalInconsistency { order: usize, p: u32 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, GroupError>;

/// The 2x2 matrix `[[a, b], [c, d]]` with entries in `[0, p)`.
///
/// The derived ordering is lexicographic on `(a, b, c, d)`, which is the
/// canonical element order used everywhere.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Mat2 {
    pub fn new(p: Prime, a: i64, b: i64, c: i64, d: i64) -> Self {
        let r = |x: i64| x.rem_euclid(p.get() as i64) as u32;
        Mat2 { a: r(a), b: r(b), c: r(c), d: r(d) }
    }

    pub const IDENTITY: Mat2 = Mat2 { a: 1, b: 0, c: 0, d: 1 };

    pub fn scalar(lambda: u32) -> Self {
        Mat2 { a: lambda, b: 0, c: 0, d: lambda }
    }

    #[inline]
    pub fn mul(self, o: Mat2, p: u32) -> Mat2 {
        let m = |x: u32, y: u32, z: u32, w: u32| {
            ((x as u64 * y as u64 + z as u64 * w as u64) % p as u64) as u32
        };
        Mat2 {
            a: m(self.a, o.a, self.b, o.c),
            b: m(self.a, o.b, self.b, o.d),
            c: m(self.c, o.a, self.d, o.c),
            d: m(self.c, o.b, self.d, o.d),
        }
    }

    #[inline]
    pub fn det(self, p: u32) -> u32 {
        sub_mod(mul_mod(self.a, self.d, p), mul_mod(self.b, self.c, p), p)
    }

    pub fn trace(self, p: u32) -> u32 {
        add_mod(self.a, self.d, p)
    }

    pub fn inverse(self, p: u32) -> Option<Mat2> {
        let inv = inv_mod(self.det(p), p)?;
        Some(Mat2 {
            a: mul_mod(self.d, inv, p),
            b: mul_mod(sub_mod(0, self.b, p), inv, p),
            c: mul_mod(sub_mod(0, self.c, p), inv, p),
            d: mul_mod(self.a, inv, p),
        })
    }

    pub fn pow(self, mut e: u64, p: u32) -> Mat2 {
        let mut acc = Mat2::IDENTITY;
        let mut base = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base, p);
            }
            base = base.mul(base, p);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(self) -> bool {
        self == Mat2::IDENTITY
    }

    pub fn is_scalar(self) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d
    }

    /// Multiplicative order; assumes the matrix is invertible.
    pub fn order(self, p: u32) -> usize {
        let mut x = self;
        let mut k = 1;
        while !x.is_identity() {
            x = x.mul(self, p);
            k += 1;
        }
        k
    }

    pub fn conjugate_by(self, g: Mat2, p: u32) -> Mat2 {
        g.mul(self, p).mul(g.inverse(p).expect("invertible conjugator"), p)
    }

    pub fn apply(self, v: [u32; 2], p: u32) -> [u32; 2] {
        [
            add_mod(mul_mod(self.a, v[0], p), mul_mod(self.b, v[1], p), p),
            add_mod(mul_mod(self.c, v[0], p), mul_mod(self.d, v[1], p), p),
        ]
    }

    pub fn to_matrix(self, p: Prime) -> FpMatrix {
        FpMatrix::from_raw(p, 2, 2, vec![self.a, self.b, self.c, self.d])
    }

    pub fn from_matrix(m: &FpMatrix) -> Mat2 {
        assert!(m.rows() == 2 && m.cols() == 2, "not a 2x2 matrix");
        Mat2 { a: m.get(0, 0), b: m.get(0, 1), c: m.get(1, 0), d: m.get(1, 1) }
    }

    fn code(self, p: u32) -> usize {
        let p = p as usize;
        ((self.a as usize * p + self.b as usize) * p + self.c as usize) * p + self.d as usize
    }
}

pub type GroupElement = Mat2;

/// `|GL2(F_p)| = (p^2 - 1)(p^2 - p)`.
pub fn gl2_order(p: u32) -> usize {
    let p = p as usize;
    (p * p - 1) * (p * p - p)
}

/// All of GL2(F_p) in canonical order.
pub fn gl2_elements(p: Prime) -> Vec<Mat2> {
    let q = p.get();
    let mut out = Vec::with_capacity(gl2_order(q));
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let m = Mat2 { a, b, c, d };
                    if m.det(q) != 0 {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// Primary classification tag of a subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassificationTag {
    BorelContained,
    ContainsSL2,
    SplitTorusNormalizer,
    NonsplitTorusNormalizer,
    Exceptional(ExceptionalImage),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExceptionalImage {
    A4,
    S4,
    A5,
}

/// A subgroup of GL2(F_p), stored with all of its elements.
///
/// Equality and hashing look at the element set only.
#[derive(Clone)]
pub struct Subgroup {
    p: Prime,
    generators: Vec<Mat2>,
    elements: Vec<Mat2>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.p.get().hash(state);
        self.elements.hash(state);
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(p={}, order={}, gens={:?})", self.p, self.order(), self.generators)
    }
}

impl Subgroup {
    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn p(&self) -> u32 {
        self.p.get()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn contains(&self, x: &Mat2) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn index_of(&self, x: &Mat2) -> Option<usize> {
        self.elements.binary_search(x).ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.p == other.p && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn is_abelian(&self) -> bool {
        let p = self.p();
        self.generators.iter().all(|x| self.generators.iter().all(|y| x.mul(*y, p) == y.mul(*x, p)))
    }

    /// Re-checks closure, inverses, identity and Lagrange.
    pub fn verify(&self) -> bool {
        let p = self.p();
        let has_identity = self.contains(&Mat2::IDENTITY);
        let sorted = self.elements.windows(2).all(|w| w[0] < w[1]);
        let closed = self
            .elements
            .iter()
            .all(|x| self.generators.iter().all(|g| self.contains(&x.mul(*g, p))));
        let inverses = self.elements.iter().all(|x| x.inverse(p).is_some_and(|y| self.contains(&y)));
        let gens_inside = self.generators.iter().all(|g| self.contains(g));
        has_identity
            && sorted
            && closed
            && inverses
            && gens_inside
            && gl2_order(p) % self.order() == 0
    }

    /// Membership bitset over all 2x2 matrices mod p; a compact set key.
    pub fn fingerprint(&self) -> Vec<u64> {
        let q = self.p();
        let mut bits = vec![0u64; (q as usize).pow(4).div_ceil(64)];
        for e in &self.elements {
            let c = e.code(q);
            bits[c / 64] |= 1 << (c % 64);
        }
        bits
    }

    /// Number of elements of each order, sorted by order.
    pub fn order_profile(&self) -> Vec<(usize, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for x in &self.elements {
            *counts.entry(x.order(self.p())).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }
}

/// Smallest subgroup of GL2(F_p) containing `generators`.
pub fn closure(p: Prime, generators: &[Mat2]) -> Result<Subgroup> {
    let q = p.get();
    for g in generators {
        if g.a >= q || g.b >= q || g.c >= q || g.d >= q || g.det(q) == 0 {
            return Err(GroupError::NonInvertibleGenerator(*g, q));
        }
    }
    let mut seen = vec![false; (q as usize).pow(4)];
    seen[Mat2::IDENTITY.code(q)] = true;
    let mut elements = vec![Mat2::IDENTITY];
    let mut kept: Vec<Mat2> = Vec::new();
    for &g in generators {
        if !seen[g.code(q)] {
            kept.push(g);
            extend_by_cosets(&mut elements, &mut seen, &kept, q)?;
        }
    }
    elements.sort_unstable();
    Ok(Subgroup { p, generators: kept, elements })
}

/// Grows the group `elements` to the one generated by `gens` (which must
/// contain generators of the current group), one right coset at a time.
fn extend_by_cosets(elements: &mut Vec<Mat2>, seen: &mut [bool], gens: &[Mat2], q: u32) -> Result<()> {
    let cap = gl2_order(q);
    let base_len = elements.len();
    let mut reps = vec![Mat2::IDENTITY];
    let mut i = 0;
    while i < reps.len() {
        let r = reps[i];
        i += 1;
        for &s in gens {
            let y = r.mul(s, q);
            if seen[y.code(q)] {
                continue;
            }
            for j in 0..base_len {
                let z = elements[j].mul(y, q);
                seen[z.code(q)] = true;
                elements.push(z);
            }
            if elements.len() > cap {
                return Err(GroupError::SizeCapExceeded { cap });
            }
            reps.push(y);
        }
    }
    Ok(())
}

impl Subgroup {
    /// The subgroup generated by `self` and `x`.
    pub fn extend(&self, x: Mat2) -> Result<Subgroup> {
        let q = self.p();
        if x.det(q) == 0 {
            return Err(GroupError::NonInvertibleGenerator(x, q));
        }
        if self.contains(&x) {
            return Ok(self.clone());
        }
        let mut seen = vec![false; (q as usize).pow(4)];
        for e in &self.elements {
            seen[e.code(q)] = true;
        }
        let mut elements = self.elements.clone();
        let mut gens = self.generators.clone();
        gens.push(x);
        extend_by_cosets(&mut elements, &mut seen, &gens, q)?;
        elements.sort_unstable();
        Ok(Subgroup { p: self.p, generators: gens, elements })
    }
}

pub fn trivial_group(p: Prime) -> Subgroup {
    Subgroup { p, generators: Vec::new(), elements: vec![Mat2::IDENTITY] }
}

pub fn gl2(p: Prime) -> Subgroup {
    let q = p.get();
    let g = primitive_root(q);
    let gens = [Mat2 { a: g, b: 0, c: 0, d: 1 }, Mat2 { a: 1, b: 1, c: 0, d: 1 }, Mat2 { a: 0, b: 1, c: 1 % q, d: 0 }];
    closure(p, &gens).expect("GL2 generators")
}

pub fn sl2(p: Prime) -> Subgroup {
    closure(p, &[Mat2 { a: 1, b: 1, c: 0, d: 1 }, Mat2 { a: 1, b: 0, c: 1, d: 1 }]).expect("SL2 generators")
}

/// Upper triangular matrices.
pub fn standard_borel(p: Prime) -> Subgroup {
    let q = p.get();
    let g = primitive_root(q);
    let gens = [Mat2 { a: g, b: 0, c: 0, d: 1 }, Mat2 { a: 1, b: 0, c: 0, d: g }, Mat2 { a: 1, b: 1, c: 0, d: 1 }];
    closure(p, &gens).expect("Borel generators")
}

/// Upper unitriangular matrices.
pub fn standard_unipotent(p: Prime) -> Subgroup {
    closure(p, &[Mat2 { a: 1, b: 1, c: 0, d: 1 }]).expect("unipotent generator")
}

/// Diagonal matrices.
pub fn split_torus(p: Prime) -> Subgroup {
    let g = primitive_root(p.get());
    closure(p, &[Mat2 { a: g, b: 0, c: 0, d: 1 }, Mat2 { a: 1, b: 0, c: 0, d: g }]).expect("torus generators")
}

/// Multiplicative group of F_{p^2} acting on itself by multiplication.
pub fn nonsplit_torus(p: Prime) -> Subgroup {
    let f = Fp2::new(p.get());
    let gen = f.generator();
    closure(p, &[f.multiplication_matrix(gen)]).expect("nonsplit torus generator")
}

/// The copy of S3 obtained by reducing the integral sum-zero submodule of the
/// permutation representation on Z^3, in the basis e1 - e2, e2 - e3.
/// Returns the group together with its transposition (12) and 3-cycle (123).
pub fn s3_copy(p: Prime) -> (Subgroup, Mat2, Mat2) {
    let transposition = Mat2::new(p, -1, 1, 0, 1);
    let three_cycle = Mat2::new(p, 0, -1, 1, -1);
    let g = closure(p, &[transposition, three_cycle]).expect("S3 generators");
    (g, transposition, three_cycle)
}

pub fn primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let n = p - 1;
    let factors = crate::arith::prime_factors(n as u64);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g as u64, (n as u64) / q, p as u64) != 1))
        .expect("primitive root exists")
}

/// Elements of F_{p^2} = F_p[t]/(t^2 - s t - n).
#[derive(Debug, Clone, Copy)]
pub struct Fp2 {
    p: u32,
    s: u32,
    n: u32,
}

pub type Fp2Elem = (u32, u32);

impl Fp2 {
    pub fn new(p: u32) -> Self {
        for s in 0..p {
            for n in 0..p {
                // x^2 - s x - n without roots in F_p
                let has_root = (0..p).any(|x| {
                    let v = sub_mod(sub_mod(mul_mod(x, x, p), mul_mod(s, x, p), p), n, p);
                    v == 0
                });
                if !has_root {
                    return Fp2 { p, s, n };
                }
            }
        }
        unreachable!("an irreducible quadratic exists over every prime field")
    }

    pub fn mul(&self, x: Fp2Elem, y: Fp2Elem) -> Fp2Elem {
        let p = self.p;
        let bd = mul_mod(x.1, y.1, p);
        (
            add_mod(mul_mod(x.0, y.0, p), mul_mod(bd, self.n, p), p),
            add_mod(add_mod(mul_mod(x.0, y.1, p), mul_mod(x.1, y.0, p), p), mul_mod(bd, self.s, p), p),
        )
    }

    pub fn add(&self, x: Fp2Elem, y: Fp2Elem) -> Fp2Elem {
        (add_mod(x.0, y.0, self.p), add_mod(x.1, y.1, self.p))
    }

    pub fn pow(&self, x: Fp2Elem, mut e: u64) -> Fp2Elem {
        let mut acc = (1 % self.p, 0);
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn frobenius(&self, x: Fp2Elem) -> Fp2Elem {
        self.pow(x, self.p as u64)
    }

    pub fn generator(&self) -> Fp2Elem {
        let order = (self.p as u64).pow(2) - 1;
        let factors = crate::arith::prime_factors(order);
        for a in 0..self.p {
            for b in 0..self.p {
                let x = (a, b);
                if x == (0, 0) {
                    continue;
                }
                if factors.iter().all(|&q| self.pow(x, order / q) != (1 % self.p, 0)) {
                    return x;
                }
            }
        }
        unreachable!("F_(p^2)^* is cyclic")
    }

    /// Matrix of `y -> x y` in the basis 1, t.
    pub fn multiplication_matrix(&self, x: Fp2Elem) -> Mat2 {
        let c0 = self.mul(x, (1 % self.p, 0));
        let c1 = self.mul(x, (0, 1));
        Mat2 { a: c0.0, b: c1.0, c: c0.1, d: c1.1 }
    }
}

fn lines(p: u32) -> Vec<[u32; 2]> {
    let mut out: Vec<[u32; 2]> = (0..p).map(|t| [1, t]).collect();
    out.push([0, 1]);
    out
}

fn same_line(u: [u32; 2], v: [u32; 2], p: u32) -> bool {
    sub_mod(mul_mod(u[0], v[1], p), mul_mod(u[1], v[0], p), p) == 0
}

/// Lines of F_p^2 fixed by every generator.
pub fn invariant_lines(g: &Subgroup) -> Vec<[u32; 2]> {
    let p = g.p();
    lines(p)
        .into_iter()
        .filter(|&l| g.generators.iter().all(|s| same_line(s.apply(l, p), l, p)))
        .collect()
}

fn stabilizes_split_pair(g: &Subgroup) -> bool {
    let p = g.p();
    let ls = lines(p);
    for i in 0..ls.len() {
        for j in i + 1..ls.len() {
            let (l1, l2) = (ls[i], ls[j]);
            let ok = g.generators.iter().all(|s| {
                let (m1, m2) = (s.apply(l1, p), s.apply(l2, p));
                (same_line(m1, l1, p) && same_line(m2, l2, p)) || (same_line(m1, l2, p) && same_line(m2, l1, p))
            });
            if ok {
                return true;
            }
        }
    }
    false
}

/// Is there a pair of conjugate lines over F_{p^2}, not defined over F_p,
/// that the group permutes?
fn stabilizes_nonsplit_pair(g: &Subgroup) -> bool {
    let p = g.p();
    let f = Fp2::new(p);
    for z0 in 0..p {
        for z1 in 1..p {
            let z = (z0, z1);
            let zbar = f.frobenius(z);
            // the line through (1, z) goes to the line through (a + b z, c + d z)
            let ok = g.generators.iter().all(|s| {
                let lhs = f.add((s.c, 0), f.mul((s.d, 0), z));
                let den = f.add((s.a, 0), f.mul((s.b, 0), z));
                lhs == f.mul(z, den) || lhs == f.mul(zbar, den)
            });
            if ok {
                return true;
            }
        }
    }
    false
}

pub fn classify(g: &Subgroup) -> Result<ClassificationTag> {
    let p = g.p();
    let order = g.order();
    if order % p as usize == 0 {
        if !invariant_lines(g).is_empty() {
            return Ok(ClassificationTag::BorelContained);
        }
        let transvections = [Mat2 { a: 1, b: 1, c: 0, d: 1 }, Mat2 { a: 1, b: 0, c: 1, d: 1 }];
        if transvections.iter().all(|t| g.contains(t)) {
            return Ok(ClassificationTag::ContainsSL2);
        }
        return Err(GroupError::InternalInconsistency { order, p });
    }
    if stabilizes_split_pair(g) {
        return Ok(ClassificationTag::SplitTorusNormalizer);
    }
    if stabilizes_nonsplit_pair(g) {
        return Ok(ClassificationTag::NonsplitTorusNormalizer);
    }
    let center = g.elements.iter().filter(|x| x.is_scalar()).count();
    match order / center {
        12 => Ok(ClassificationTag::Exceptional(ExceptionalImage::A4)),
        24 => Ok(ClassificationTag::Exceptional(ExceptionalImage::S4)),
        60 => Ok(ClassificationTag::Exceptional(ExceptionalImage::A5)),
        _ => Err(GroupError::InternalInconsistency { order, p }),
    }
}

/// Does the group contain a scalar matrix other than the identity?
pub fn meets_center(g: &Subgroup) -> bool {
    g.elements.iter().any(|x| x.is_scalar() && !x.is_identity())
}

fn is_p_power(mut n: usize, p: usize) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// A Sylow p-subgroup: start from the first element of maximal p-power order
/// and greedily adjoin p-power-order elements while the result stays a p-group.
pub fn p_sylow(g: &Subgroup) -> Subgroup {
    let p = g.p();
    let pp = p as usize;
    let candidates: Vec<(Mat2, usize)> = g
        .elements
        .iter()
        .map(|&x| (x, x.order(p)))
        .filter(|&(_, o)| o > 1 && is_p_power(o, pp))
        .collect();
    let Some(max_order) = candidates.iter().map(|&(_, o)| o).max() else {
        return trivial_group(g.p);
    };
    let first = candidates.iter().find(|&&(_, o)| o == max_order).unwrap().0;
    let mut h = closure(g.p, &[first]).expect("element of g");
    for &(x, _) in &candidates {
        if h.contains(&x) {
            continue;
        }
        let mut gens = h.generators.clone();
        gens.push(x);
        let k = closure(g.p, &gens).expect("elements of g");
        if is_p_power(k.order(), pp) {
            h = k;
        }
    }
    h
}

/// Elements of `g` normalizing `h`.
pub fn normalizer_in(g: &Subgroup, h: &Subgroup) -> Subgroup {
    let p = g.p();
    let normalizing: Vec<Mat2> = g
        .elements
        .iter()
        .copied()
        .filter(|x| h.generators.iter().all(|s| h.contains(&s.conjugate_by(*x, p))))
        .collect();
    let mut gens = Vec::new();
    let mut cur = trivial_group(g.p);
    for x in normalizing {
        if !cur.contains(&x) {
            gens.push(x);
            cur = closure(g.p, &gens).expect("elements of g");
        }
    }
    cur
}

/// Is `g` contained in some subgroup of GL2(F_p) isomorphic to S3?
pub fn embeds_in_s3(g: &Subgroup) -> bool {
    let p = g.p();
    match g.order() {
        1 => true,
        6 => !g.is_abelian(),
        2 | 3 => {
            let x = *g.elements.iter().find(|x| !x.is_identity()).unwrap();
            let x_inv = x.inverse(p).unwrap();
            let want = if g.order() == 2 { 3 } else { 2 };
            gl2_elements(g.p).into_iter().any(|y| {
                if y.order(p) != want {
                    return false;
                }
                // the order-2 element t and order-3 element s must satisfy t s t^-1 = s^-1
                if want == 2 {
                    x.conjugate_by(y, p) == x_inv
                } else {
                    y.conjugate_by(x, p) == y.inverse(p).unwrap()
                }
            })
        }
        _ => false,
    }
}

/// Order of the subgroup `det(g)` of F_p^*.
pub fn det_image_order(g: &Subgroup) -> usize {
    let p = g.p();
    g.elements.iter().map(|x| x.det(p)).collect::<HashSet<_>>().len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnumerationMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

/// Largest prime for which [`EnumerationMode::Exhaustive`] is offered.
pub const EXHAUSTIVE_MAX_P: u32 = 7;
/// Largest prime for which [`EnumerationMode::Sampled`] is offered.
pub const SAMPLED_MAX_P: u32 = 13;

/// Subgroups of GL2(F_p), each exactly once.
pub fn enumerate_subgroups(p: Prime, mode: EnumerationMode) -> Result<Box<dyn Iterator<Item = Subgroup>>> {
    match mode {
        EnumerationMode::Exhaustive => {
            if p.get() > EXHAUSTIVE_MAX_P {
                return Err(GroupError::ModeUnsupported(p.get()));
            }
            Ok(Box::new(all_subgroups(p).into_iter()))
        }
        EnumerationMode::Sampled { count, seed } => {
            if p.get() > SAMPLED_MAX_P {
                return Err(GroupError::ModeUnsupported(p.get()));
            }
            Ok(Box::new(SampledSubgroups::new(p, count, seed)))
        }
    }
}

/// Fixpoint enumeration: all cyclic subgroups, then repeatedly adjoin each
/// outside element to every subgroup found in the previous round.
fn all_subgroups(p: Prime) -> Vec<Subgroup> {
    use rayon::prelude::*;

    let q = p.get();
    let all = gl2_elements(p);
    let mut index = vec![usize::MAX; (q as usize).pow(4)];
    for (i, x) in all.iter().enumerate() {
        index[x.code(q)] = i;
    }
    // indices of the generators of each cyclic subgroup <x>
    let same_cyclic: Vec<Vec<usize>> = all
        .iter()
        .map(|&x| {
            let n = x.order(q) as u64;
            (1..=n).filter(|&e| num_integer::gcd(e, n) == 1).map(|e| index[x.pow(e, q).code(q)]).collect()
        })
        .collect();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut found: Vec<Subgroup> = Vec::new();
    let mut layer: Vec<Subgroup> = Vec::new();
    for &x in &all {
        let c = closure(p, &[x]).unwrap();
        if seen.insert(c.fingerprint()) {
            layer.push(c.clone());
            found.push(c);
        }
    }
    while !layer.is_empty() {
        let extensions: Vec<Vec<Subgroup>> = layer
            .par_iter()
            .map(|h| {
                let mut local: HashSet<Vec<u64>> = HashSet::new();
                let mut out = Vec::new();
                let mut covered = vec![false; all.len()];
                for (i, &x) in all.iter().enumerate() {
                    if covered[i] || h.contains(&x) {
                        continue;
                    }
                    let k = h.extend(x).unwrap();
                    // <h, x y> = <h, x> for y in h, so the whole coset is done
                    // and <h, y> = <h, y^e> for e prime to the order of y
                    for y in h.elements() {
                        for &j in &same_cyclic[index[x.mul(*y, q).code(q)]] {
                            covered[j] = true;
                        }
                    }
                    if local.insert(k.fingerprint()) {
                        out.push(k);
                    }
                }
                out
            })
            .collect();
        let mut next = Vec::new();
        for k in extensions.into_iter().flatten() {
            if seen.insert(k.fingerprint()) {
                next.push(k.clone());
                found.push(k);
            }
        }
        layer = next;
    }
    found.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
    found
}

/// Seeded stream of distinct subgroups generated by at most three elements.
///
/// Each draw picks 1 to 3 generators, each a random power of a uniformly random
/// element of GL2(F_p). The stream ends after `count` distinct subgroups or
/// once `stall_limit` consecutive draws produce nothing new.
pub struct SampledSubgroups {
    p: Prime,
    remaining: usize,
    rng: ChaCha8Rng,
    all: Vec<Mat2>,
    seen: HashSet<Vec<u64>>,
    stall_limit: usize,
}

impl SampledSubgroups {
    pub fn new(p: Prime, count: usize, seed: u64) -> Self {
        SampledSubgroups {
            p,
            remaining: count,
            rng: ChaCha8Rng::seed_from_u64(seed),
            all: gl2_elements(p),
            seen: HashSet::new(),
            stall_limit: 20_000.max(20 * count),
        }
    }

    fn draw(&mut self) -> Subgroup {
        let q = self.p.get();
        let k = self.rng.gen_range(1..=3);
        let gens: Vec<Mat2> = (0..k)
            .map(|_| {
                let x = self.all[self.rng.gen_range(0..self.all.len())];
                let e = self.rng.gen_range(1..=x.order(q)) as u64;
                x.pow(e, q)
            })
            .collect();
        closure(self.p, &gens).expect("elements of GL2")
    }
}

impl Iterator for SampledSubgroups {
    type Item = Subgroup;

    fn next(&mut self) -> Option<Subgroup> {
        if self.remaining == 0 {
            return None;
        }
        for _ in 0..self.stall_limit {
            let g = self.draw();
            if self.seen.insert(g.fingerprint()) {
                self.remaining -= 1;
                return Some(g);
            }
        }
        self.remaining = 0;
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = closure(pr(5), &[]).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.verify());
    }

    #[test]
    fn non_invertible_generator_rejected() {
        let p = pr(3);
        let bad = Mat2::new(p, 1, 1, 1, 1);
        assert!(matches!(closure(p, &[bad]), Err(GroupError::NonInvertibleGenerator(..))));
    }

    #[test]
    fn borel_s3_at_three() {
        let p = pr(3);
        let g = closure(p, &[Mat2::new(p, 1, 1, 0, 1), Mat2::new(p, 2, 0, 0, 1)]).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(classify(&g).unwrap(), ClassificationTag::BorelContained);
        assert_eq!(det_image_order(&g), 2);
        assert!(embeds_in_s3(&g));
    }

    #[test]
    fn transvections_generate_sl2() {
        for n in [3u64, 5, 7] {
            let p = pr(n);
            let gens: Vec<Mat2> = (1..n as i64)
                .flat_map(|t| [Mat2::new(p, 1, t, 0, 1), Mat2::new(p, 1, 0, t, 1)])
                .collect();
            let g = closure(p, &gens).unwrap();
            assert_eq!(g.order() as u64, n * (n * n - 1));
            assert!(g.elements().iter().all(|x| x.det(n as u32) == 1));
        }
    }

    #[test]
    fn group_orders() {
        for n in [2u64, 3, 5, 7] {
            assert_eq!(gl2(pr(n)).order(), gl2_order(n as u32));
            let q = n as usize;
            assert_eq!(standard_borel(pr(n)).order(), q * (q - 1) * (q - 1));
            assert_eq!(nonsplit_torus(pr(n)).order(), q * q - 1);
            assert_eq!(split_torus(pr(n)).order(), (q - 1) * (q - 1));
        }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&split_torus(pr(5))).unwrap(), ClassificationTag::SplitTorusNormalizer);
        assert_eq!(classify(&gl2(pr(3))).unwrap(), ClassificationTag::ContainsSL2);
        assert_eq!(classify(&nonsplit_torus(pr(5))).unwrap(), ClassificationTag::NonsplitTorusNormalizer);
        assert_eq!(classify(&sl2(pr(3))).unwrap(), ClassificationTag::ContainsSL2);
        // SL2(F_3) has order 24, but inside GL2(F_5) the binary tetrahedral group is exceptional
        let p = pr(5);
        let g = closure(p, &[Mat2::new(p, 0, -1, 1, 0), Mat2::new(p, 2, 0, 0, 3), Mat2::new(p, 1, 1, 1, -1)]);
        let g = g.unwrap();
        let tag = classify(&g).unwrap();
        if let ClassificationTag::Exceptional(_) = tag {
            assert!(meets_center(&g));
        }
    }

    #[test]
    fn center() {
        let p = pr(5);
        assert!(!meets_center(&trivial_group(p)));
        let minus = closure(p, &[Mat2::scalar(4)]).unwrap();
        assert_eq!(minus.order(), 2);
        assert!(meets_center(&minus));
        assert!(meets_center(&sl2(p)));
    }

    #[test]
    fn sylow_and_normalizer() {
        let p = pr(3);
        let g = gl2(p);
        assert_eq!(p_sylow(&g).order(), 3);
        assert_eq!(normalizer_in(&g, &g), g);
        for n in [3u64, 5, 7] {
            let p = pr(n);
            let u = standard_unipotent(p);
            let nrm = normalizer_in(&gl2(p), &u);
            assert_eq!(nrm, standard_borel(p));
        }
        assert_eq!(p_sylow(&split_torus(pr(5))).order(), 1);
    }

    #[test]
    fn s3_embedding() {
        assert!(embeds_in_s3(&gl2(pr(2))));
        let p = pr(5);
        let minus = closure(p, &[Mat2::scalar(4)]).unwrap();
        assert!(!embeds_in_s3(&minus));
        assert!(embeds_in_s3(&trivial_group(pr(7))));
        assert!(!embeds_in_s3(&gl2(p)));
    }

    #[test]
    fn s3_copies_are_s3_with_sign_determinant() {
        for n in [2u64, 3, 5, 7, 11, 13] {
            let p = pr(n);
            let (g, t, s) = s3_copy(p);
            assert_eq!(g.order(), 6, "p = {n}");
            assert!(!g.is_abelian());
            assert_eq!(t.order(n as u32), 2);
            assert_eq!(s.order(n as u32), 3);
            assert_eq!(t.det(n as u32), (n as u32) - 1);
            assert_eq!(s.det(n as u32), 1);
            assert!(embeds_in_s3(&g));
        }
    }

    #[test]
    fn determinant_images() {
        assert_eq!(det_image_order(&sl2(pr(5))), 1);
        assert_eq!(det_image_order(&gl2(pr(5))), 4);
    }

    #[test]
    fn exhaustive_counts() {
        let count3 = enumerate_subgroups(pr(3), EnumerationMode::Exhaustive).unwrap().count();
        assert_eq!(count3, 55);
        let count2 = enumerate_subgroups(pr(2), EnumerationMode::Exhaustive).unwrap().count();
        assert_eq!(count2, 6);
        assert!(matches!(enumerate_subgroups(pr(11), EnumerationMode::Exhaustive), Err(GroupError::ModeUnsupported(11))));
    }

    #[test]
    fn exhaustive_orders_divide_group_order() {
        for g in enumerate_subgroups(pr(3), EnumerationMode::Exhaustive).unwrap() {
            assert_eq!(48 % g.order(), 0);
            assert!(g.verify());
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = pr(5);
        let a: Vec<_> = enumerate_subgroups(p, EnumerationMode::Sampled { count: 50, seed: 42 }).unwrap().collect();
        let b: Vec<_> = enumerate_subgroups(p, EnumerationMode::Sampled { count: 50, seed: 42 }).unwrap().collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 50);
        let distinct: HashSet<_> = a.iter().map(|g| g.elements().to_vec()).collect();
        assert_eq!(distinct.len(), 50);
    }
}
