//! G-modules over F_p, composition factors, H^1 and the two sides of the
//! group-theoretic divisibility criterion.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::fp::{
    enumerate_invariant_subspaces, inv_mod, mul_mod, sub_mod, FpMatrix, FpSubspace, LinalgError, Prime,
};
use crate::gl2::{self, closure, normalizer_in, p_sylow, GroupError, Mat2, Subgroup};

/// Largest group order accepted by [`h1`] and [`h1_star`].
pub const H1_MAX_ORDER: usize = 10_000;
/// Largest number of candidate intertwiners scanned by [`modules_isomorphic`].
pub const INTERTWINER_BUDGET: u64 = 1_000_000;
/// Below this order the homomorphism property is checked on all pairs.
const FULL_CHECK_ORDER: usize = 200;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("action is not a homomorphism: {0}")]
    InvalidModule(String),
    #[error("group order {order} exceeds {max}")]
    SizeExceeded { order: usize, max: usize },
    #[error("modules are over different groups or fields")]
    ModuleMismatch,
    #[error("intertwiner scan needs {needed} candidates, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

pub type Result<T> = std::result::Result<T, CohomologyError>;

/// A finite-dimensional F_p representation of an explicit subgroup of GL2(F_p).
#[derive(Clone, Debug)]
pub struct GModule {
    group: Subgroup,
    dim: usize,
    /// Action matrices aligned with `group.elements()`.
    actions: Vec<FpMatrix>,
}

impl GModule {
    /// Builds a module from matrices for each of `group.generators()`, extending
    /// along the Cayley graph and rejecting inconsistent data.
    pub fn from_generator_action(group: &Subgroup, dim: usize, gens: &[FpMatrix]) -> Result<Self> {
        let p = group.prime();
        if gens.len() != group.generators().len() {
            return Err(CohomologyError::InvalidModule(format!(
                "{} matrices for {} generators",
                gens.len(),
                group.generators().len()
            )));
        }
        for m in gens {
            if m.modulus() != p.get() || m.rows() != dim || m.cols() != dim {
                return Err(CohomologyError::ModuleMismatch);
            }
        }
        let q = p.get();
        let elements = group.elements();
        let mut actions: Vec<Option<FpMatrix>> = vec![None; elements.len()];
        let id = group.index_of(&Mat2::IDENTITY).expect("identity");
        actions[id] = Some(FpMatrix::identity(dim, p));
        let mut queue = vec![id];
        let mut head = 0;
        while head < queue.len() {
            let gi = queue[head];
            head += 1;
            let g = elements[gi];
            let ag = actions[gi].clone().unwrap();
            for (s, am) in group.generators().iter().zip(gens) {
                let hi = group.index_of(&g.mul(*s, q)).expect("closed group");
                let ah = ag.mul(am)?;
                match &actions[hi] {
                    None => {
                        actions[hi] = Some(ah);
                        queue.push(hi);
                    }
                    Some(existing) if *existing != ah => {
                        return Err(CohomologyError::InvalidModule(format!("relation violated at {}", elements[hi])));
                    }
                    Some(_) => {}
                }
            }
        }
        let module = GModule { group: group.clone(), dim, actions: actions.into_iter().map(Option::unwrap).collect() };
        module.check_homomorphism()?;
        Ok(module)
    }

    fn check_homomorphism(&self) -> Result<()> {
        let q = self.group.p();
        let elements = self.group.elements();
        let id = self.group.index_of(&Mat2::IDENTITY).expect("identity");
        if !self.actions[id].is_identity() {
            return Err(CohomologyError::InvalidModule("identity acts nontrivially".into()));
        }
        let right: Vec<Mat2> =
            if elements.len() <= FULL_CHECK_ORDER { elements.to_vec() } else { self.group.generators().to_vec() };
        for (gi, g) in elements.iter().enumerate() {
            for h in &right {
                let hi = self.group.index_of(h).unwrap();
                let gh = self.group.index_of(&g.mul(*h, q)).unwrap();
                if self.actions[gi].mul(&self.actions[hi])? != self.actions[gh] {
                    return Err(CohomologyError::InvalidModule(format!("action({g}) action({h}) mismatch")));
                }
            }
        }
        Ok(())
    }

    /// The tautological 2-dimensional module.
    pub fn standard(group: &Subgroup) -> Self {
        let p = group.prime();
        let actions = group.elements().iter().map(|g| g.to_matrix(p)).collect();
        GModule { group: group.clone(), dim: 2, actions }
    }

    /// End(V) with `X -> g X g^-1`, in the basis E11, E12, E21, E22.
    pub fn adjoint(group: &Subgroup) -> Self {
        let p = group.prime();
        let actions = group.elements().iter().map(|g| adjoint_matrix(*g, p)).collect();
        GModule { group: group.clone(), dim: 4, actions }
    }

    pub fn trivial(group: &Subgroup, dim: usize) -> Self {
        let p = group.prime();
        GModule { group: group.clone(), dim, actions: vec![FpMatrix::identity(dim, p); group.order()] }
    }

    pub fn from_character(chi: &CharacterFp) -> Self {
        let p = chi.group.prime();
        let actions = chi.values.iter().map(|&v| FpMatrix::from_raw(p, 1, 1, vec![v])).collect();
        GModule { group: chi.group.clone(), dim: 1, actions }
    }

    /// Same module, but presented with the group's generators listed in a
    /// different order.
    pub fn with_generators(&self, gens: &[Mat2]) -> Result<Self> {
        let regrouped = closure(self.group.prime(), gens)?;
        if regrouped != self.group {
            return Err(CohomologyError::ModuleMismatch);
        }
        Ok(GModule { group: regrouped, dim: self.dim, actions: self.actions.clone() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> &Subgroup {
        &self.group
    }

    pub fn prime(&self) -> Prime {
        self.group.prime()
    }

    pub fn action(&self, g: &Mat2) -> Option<&FpMatrix> {
        self.group.index_of(g).map(|i| &self.actions[i])
    }

    pub fn actions(&self) -> &[FpMatrix] {
        &self.actions
    }

    pub fn generator_actions(&self) -> Vec<FpMatrix> {
        self.group.generators().iter().map(|g| self.action(g).unwrap().clone()).collect()
    }

    /// The fixed space M^G.
    pub fn fixed_space(&self) -> FpSubspace {
        let p = self.prime();
        let mut stacked = FpMatrix::zeros(0, self.dim, p);
        for a in self.generator_actions() {
            let d = a.sub(&FpMatrix::identity(self.dim, p)).unwrap();
            stacked = stacked.vstack(&d).unwrap();
        }
        FpSubspace::span(p, self.dim, &stacked.kernel())
    }

    pub fn invariant_subspaces(&self, dim: usize) -> Result<Vec<FpSubspace>> {
        Ok(enumerate_invariant_subspaces(self.prime(), self.dim, &self.generator_actions(), dim)?)
    }

    /// Action on an invariant subspace and on the quotient by it.
    pub fn split(&self, w: &FpSubspace) -> Result<(GModule, GModule)> {
        let p = self.prime();
        let k = w.dim();
        let basis = w.extended_basis();
        let change = FpMatrix::from_columns(p, self.dim, &basis);
        let change_inv = change.inverse()?;
        let mut sub = Vec::with_capacity(self.actions.len());
        let mut quo = Vec::with_capacity(self.actions.len());
        for a in &self.actions {
            let b = change_inv.mul(&a.mul(&change)?)?;
            for i in k..self.dim {
                for j in 0..k {
                    if b.get(i, j) != 0 {
                        return Err(CohomologyError::InvalidModule("subspace is not invariant".into()));
                    }
                }
            }
            sub.push(block(&b, 0, k, p));
            quo.push(block(&b, k, self.dim, p));
        }
        Ok((
            GModule { group: self.group.clone(), dim: k, actions: sub },
            GModule { group: self.group.clone(), dim: self.dim - k, actions: quo },
        ))
    }

    /// For a 1-dimensional module, its character.
    pub fn as_character(&self) -> Option<CharacterFp> {
        (self.dim == 1).then(|| CharacterFp { group: self.group.clone(), values: self.actions.iter().map(|a| a.get(0, 0)).collect() })
    }
}

fn block(m: &FpMatrix, from: usize, to: usize, p: Prime) -> FpMatrix {
    let n = to - from;
    let mut data = Vec::with_capacity(n * n);
    for i in from..to {
        for j in from..to {
            data.push(m.get(i, j));
        }
    }
    FpMatrix::from_raw(p, n, n, data)
}

/// Matrix of `X -> g X g^-1` on 2x2 matrices, entry ((i,j),(k,l)) = g_ik (g^-1)_lj.
pub fn adjoint_matrix(g: Mat2, p: Prime) -> FpMatrix {
    let q = p.get();
    let h = g.inverse(q).expect("invertible");
    let ge = [[g.a, g.b], [g.c, g.d]];
    let he = [[h.a, h.b], [h.c, h.d]];
    let mut data = vec![0u32; 16];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    data[(2 * i + j) * 4 + 2 * k + l] = mul_mod(ge[i][k], he[l][j], q);
                }
            }
        }
    }
    FpMatrix::from_raw(p, 4, 4, data)
}

/// A homomorphism from a subgroup to F_p^*, by value on each element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterFp {
    group: Subgroup,
    values: Vec<u32>,
}

impl CharacterFp {
    pub fn new(group: &Subgroup, f: impl Fn(Mat2) -> u32) -> Self {
        CharacterFp { group: group.clone(), values: group.elements().iter().map(|&g| f(g)).collect() }
    }

    pub fn trivial(group: &Subgroup) -> Self {
        CharacterFp { group: group.clone(), values: vec![1; group.order()] }
    }

    pub fn determinant(group: &Subgroup) -> Self {
        let q = group.p();
        Self::new(group, |g| g.det(q))
    }

    pub fn value(&self, g: &Mat2) -> Option<u32> {
        self.group.index_of(g).map(|i| self.values[i])
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 1)
    }

    pub fn is_multiplicative(&self) -> bool {
        let q = self.group.p();
        let els = self.group.elements();
        els.iter().enumerate().all(|(i, g)| {
            self.group.generators().iter().all(|s| {
                let j = self.group.index_of(&g.mul(*s, q)).unwrap();
                self.values[j] == mul_mod(self.values[i], self.value(s).unwrap(), q)
            })
        })
    }

    pub fn mul(&self, other: &CharacterFp) -> CharacterFp {
        let q = self.group.p();
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| mul_mod(a, b, q)).collect();
        CharacterFp { group: self.group.clone(), values }
    }

    pub fn inverse(&self) -> CharacterFp {
        let q = self.group.p();
        CharacterFp { group: self.group.clone(), values: self.values.iter().map(|&a| inv_mod(a, q).unwrap()).collect() }
    }

    pub fn square(&self) -> CharacterFp {
        self.mul(self)
    }
}

/// The characters on an invariant line and on the quotient by it.
#[derive(Clone, Debug)]
pub struct BorelDatum {
    pub line: [u32; 2],
    /// Character on the invariant line.
    pub chi1: CharacterFp,
    /// Character on the quotient.
    pub chi2: CharacterFp,
}

/// Triangularizing datum for the first invariant line in canonical order, if any.
pub fn borel_datum(g: &Subgroup) -> Option<BorelDatum> {
    let line = *gl2::invariant_lines(g).first()?;
    Some(datum_for_line(g, line))
}

fn datum_for_line(g: &Subgroup, line: [u32; 2]) -> BorelDatum {
    let q = g.p();
    let chi1 = CharacterFp::new(g, |x| {
        let w = x.apply(line, q);
        // w = lambda * line
        if line[0] != 0 {
            mul_mod(w[0], inv_mod(line[0], q).unwrap(), q)
        } else {
            mul_mod(w[1], inv_mod(line[1], q).unwrap(), q)
        }
    });
    let chi2 = CharacterFp::determinant(g).mul(&chi1.inverse());
    BorelDatum { line, chi1, chi2 }
}

/// Composition factors, each irreducible, listed sub before quotient.
pub fn composition_factors(m: &GModule) -> Result<Vec<GModule>> {
    if m.dim == 0 {
        return Ok(Vec::new());
    }
    for d in 1..m.dim {
        if let Some(w) = m.invariant_subspaces(d)?.into_iter().next() {
            let (sub, quo) = m.split(&w)?;
            let mut out = composition_factors(&sub)?;
            out.extend(composition_factors(&quo)?);
            return Ok(out);
        }
    }
    Ok(vec![m.clone()])
}

/// Basis of the space of `T` with `T A(s) = B(s) T` for every generator `s`,
/// each `T` flattened row-major as a `dim_b x dim_a` matrix.
pub fn intertwiners(a: &GModule, b: &GModule) -> Result<Vec<Vec<u32>>> {
    if a.group != b.group {
        return Err(CohomologyError::ModuleMismatch);
    }
    let p = a.prime();
    let q = p.get();
    let (na, nb) = (a.dim, b.dim);
    let unknowns = na * nb;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for s in a.group.generators() {
        let (sa, sb) = (a.action(s).unwrap(), b.action(s).unwrap());
        // entry (i, j) of T A - B T
        for i in 0..nb {
            for j in 0..na {
                let mut row = vec![0u32; unknowns];
                for k in 0..na {
                    row[i * na + k] = (row[i * na + k] + sa.get(k, j)) % q;
                }
                for k in 0..nb {
                    row[k * na + j] = sub_mod(row[k * na + j], sb.get(i, k), q);
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Ok((0..unknowns)
            .map(|i| {
                let mut e = vec![0u32; unknowns];
                e[i] = 1;
                e
            })
            .collect());
    }
    let m = FpMatrix::from_raw(p, rows.len(), unknowns, rows.concat());
    Ok(m.kernel())
}

/// Whether some invertible intertwiner exists.
pub fn modules_isomorphic(a: &GModule, b: &GModule) -> Result<bool> {
    if a.group != b.group {
        return Err(CohomologyError::ModuleMismatch);
    }
    if a.dim != b.dim {
        return Ok(false);
    }
    if a.dim == 0 {
        return Ok(true);
    }
    let p = a.prime();
    let q = p.get() as u64;
    let basis = intertwiners(a, b)?;
    let k = basis.len();
    if k == 0 {
        return Ok(false);
    }
    let invertible = |v: &[u32]| FpMatrix::from_raw(p, a.dim, a.dim, v.to_vec()).determinant().map(|d| d != 0).unwrap_or(false);
    // single basis vectors settle the irreducible case immediately
    if basis.iter().any(|v| invertible(v)) {
        return Ok(true);
    }
    let needed = (q as u128).pow(k as u32);
    if needed > INTERTWINER_BUDGET as u128 {
        return Err(CohomologyError::BudgetExceeded { needed, budget: INTERTWINER_BUDGET });
    }
    let len = a.dim * a.dim;
    for code in 1..needed as u64 {
        let mut c = code;
        let mut t = vec![0u32; len];
        for v in &basis {
            let coef = (c % q) as u32;
            c /= q;
            if coef != 0 {
                for (x, &y) in t.iter_mut().zip(v) {
                    *x = ((*x as u64 + coef as u64 * y as u64) % q) as u32;
                }
            }
        }
        if invertible(&t) {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn common_irreducible_factor(a: &GModule, b: &GModule) -> Result<bool> {
    let fa = composition_factors(a)?;
    let fb = composition_factors(b)?;
    for x in &fa {
        for y in &fb {
            if modules_isomorphic(x, y)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Whether two multisets of irreducible modules agree up to isomorphism.
pub fn same_factor_multiset(a: &[GModule], b: &[GModule]) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let mut used = vec![false; b.len()];
    'outer: for x in a {
        for (j, y) in b.iter().enumerate() {
            if !used[j] && modules_isomorphic(x, y)? {
                used[j] = true;
                continue 'outer;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// H^1 summary: dimensions and a basis of cocycles given by their values on
/// the group's generators (concatenated).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyClassSpace {
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    pub dim: usize,
    pub cocycle_basis: Vec<Vec<u32>>,
}

/// Incremental echelon basis of a row space.
struct RowSpace {
    p: u32,
    width: usize,
    rows: Vec<(usize, Vec<u32>)>,
}

impl RowSpace {
    fn new(p: u32, width: usize) -> Self {
        RowSpace { p, width, rows: Vec::new() }
    }

    fn insert(&mut self, mut v: Vec<u32>) {
        let p = self.p;
        if self.rows.len() == self.width {
            return;
        }
        for (pc, r) in &self.rows {
            let f = v[*pc];
            if f != 0 {
                for j in 0..self.width {
                    v[j] = sub_mod(v[j], mul_mod(f, r[j], p), p);
                }
            }
        }
        if let Some(pc) = v.iter().position(|&x| x != 0) {
            let inv = inv_mod(v[pc], p).unwrap();
            for x in v.iter_mut() {
                *x = mul_mod(*x, inv, p);
            }
            for (_, r) in self.rows.iter_mut() {
                let f = r[pc];
                if f != 0 {
                    for j in 0..self.width {
                        r[j] = sub_mod(r[j], mul_mod(f, v[j], p), p);
                    }
                }
            }
            self.rows.push((pc, v));
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn kernel(&self, p: Prime) -> Vec<Vec<u32>> {
        if self.rows.is_empty() {
            return FpMatrix::zeros(1, self.width, p).kernel();
        }
        let data: Vec<u32> = self.rows.iter().flat_map(|(_, r)| r.iter().copied()).collect();
        FpMatrix::from_raw(p, self.rows.len(), self.width, data).kernel()
    }
}

/// Cocycle propagation data: for each element g, the n x N matrix C_g with
/// f(g) = C_g u, where u stacks the values of f on the generators.
struct CocycleSystem {
    n: usize,
    width: usize,
    coeffs: Vec<Vec<u32>>,
    constraints: RowSpace,
}

fn propagate(g: &Subgroup, m: &GModule) -> Result<CocycleSystem> {
    if g != m.group() {
        return Err(CohomologyError::ModuleMismatch);
    }
    if g.order() > H1_MAX_ORDER {
        return Err(CohomologyError::SizeExceeded { order: g.order(), max: H1_MAX_ORDER });
    }
    let q = g.p();
    let n = m.dim;
    let r = g.generators().len();
    let width = n * r;
    let elements = g.elements();
    let mut coeffs: Vec<Option<Vec<u32>>> = vec![None; elements.len()];
    let id = g.index_of(&Mat2::IDENTITY).unwrap();
    coeffs[id] = Some(vec![0; n * width]);
    let mut constraints = RowSpace::new(q, width);
    let mut queue = vec![id];
    let mut head = 0;
    while head < queue.len() {
        let gi = queue[head];
        head += 1;
        let cg = coeffs[gi].clone().unwrap();
        let ag = &m.actions[gi];
        for (si, s) in g.generators().iter().enumerate() {
            // f(g s) = f(g) + g f(s)
            let mut c = cg.clone();
            for i in 0..n {
                for j in 0..n {
                    let idx = i * width + si * n + j;
                    c[idx] = (c[idx] + ag.get(i, j)) % q;
                }
            }
            let hi = g.index_of(&elements[gi].mul(*s, q)).unwrap();
            match &coeffs[hi] {
                None => {
                    coeffs[hi] = Some(c);
                    queue.push(hi);
                }
                Some(existing) => {
                    for i in 0..n {
                        let row: Vec<u32> =
                            (0..width).map(|j| sub_mod(c[i * width + j], existing[i * width + j], q)).collect();
                        if row.iter().any(|&x| x != 0) {
                            constraints.insert(row);
                        }
                    }
                }
            }
        }
    }
    Ok(CocycleSystem { n, width, coeffs: coeffs.into_iter().map(Option::unwrap).collect(), constraints })
}

pub fn h1(g: &Subgroup, m: &GModule) -> Result<CohomologyClassSpace> {
    let sys = propagate(g, m)?;
    let dim_cocycles = sys.width - sys.constraints.rank();
    let dim_coboundaries = m.dim - m.fixed_space().dim();
    Ok(CohomologyClassSpace {
        dim_cocycles,
        dim_coboundaries,
        dim: dim_cocycles - dim_coboundaries,
        cocycle_basis: sys.constraints.kernel(g.prime()),
    })
}

/// Dimension of the classes in H^1 that vanish on every cyclic subgroup.
pub fn h1_star(g: &Subgroup, m: &GModule) -> Result<usize> {
    let mut sys = propagate(g, m)?;
    let p = g.prime();
    let q = p.get();
    let n = sys.n;
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    for (xi, &x) in g.elements().iter().enumerate() {
        if x.is_identity() {
            continue;
        }
        let cyclic = closure(p, &[x])?;
        if !seen.insert(cyclic.fingerprint()) {
            continue;
        }
        // f(x) must lie in the image of A(x) - I: pair it with the left kernel
        let d = m.actions[xi].sub(&FpMatrix::identity(n, p))?;
        for l in d.transpose().kernel() {
            let cx = &sys.coeffs[xi];
            let row: Vec<u32> = (0..sys.width)
                .map(|j| (0..n).fold(0u32, |acc, i| (acc + mul_mod(l[i], cx[i * sys.width + j], q)) % q))
                .collect();
            if row.iter().any(|&v| v != 0) {
                sys.constraints.insert(row);
            }
        }
    }
    let dim_star_cocycles = sys.width - sys.constraints.rank();
    let dim_coboundaries = m.dim - m.fixed_space().dim();
    Ok(dim_star_cocycles - dim_coboundaries)
}

/// No common irreducible factor of V and End(V), and H^1(G, V) = 0.
pub fn groupcrit_side_analytic(g: &Subgroup) -> Result<bool> {
    let v = GModule::standard(g);
    let end = GModule::adjoint(g);
    if common_irreducible_factor(&v, &end)? {
        return Ok(false);
    }
    Ok(h1(g, &v)?.dim == 0)
}

/// G lies in no copy of S3, and if V is reducible with sub character chi1 and
/// quotient character chi2 then chi1 is neither 1 nor chi2^2 and chi2 is
/// neither 1 nor chi1^2.
pub fn groupcrit_side_structural(g: &Subgroup) -> Result<bool> {
    if gl2::embeds_in_s3(g) {
        return Ok(false);
    }
    if let Some(BorelDatum { chi1, chi2, .. }) = borel_datum(g) {
        let bad = chi1.is_trivial() || chi1 == chi2.square() || chi2.is_trivial() || chi2 == chi1.square();
        return Ok(!bad);
    }
    Ok(true)
}

/// `dim Hom_{N_G(P)}(P, chi2)` for a Sylow p-subgroup P, with chi2 the
/// character on V modulo the line fixed by P. Zero when p does not divide |G|.
pub fn hom_normalizer_bound(g: &Subgroup) -> usize {
    let q = g.p();
    let sylow = p_sylow(g);
    if sylow.order() == 1 {
        return 0;
    }
    let x = *sylow.generators().first().expect("nontrivial Sylow subgroup");
    let fixed = gl2::invariant_lines(&sylow);
    debug_assert_eq!(fixed.len(), 1);
    let normalizer = normalizer_in(g, &sylow);
    let chi2 = datum_for_line(&normalizer, fixed[0]).chi2;
    // Hom(P, F_p) is spanned by x^k -> k; it is equivariant iff n x n^-1 = x^chi2(n)
    let equivariant = normalizer
        .elements()
        .iter()
        .all(|nn| x.conjugate_by(*nn, q) == x.pow(chi2.value(nn).unwrap() as u64, q));
    usize::from(equivariant)
}

/// Decomposition of End(V) into two complementary 2-dimensional invariant
/// subspaces, if one exists.
pub fn adjoint_two_plane_splitting(g: &Subgroup) -> Result<Option<(FpSubspace, FpSubspace)>> {
    let end = GModule::adjoint(g);
    let planes = end.invariant_subspaces(2)?;
    for (i, a) in planes.iter().enumerate() {
        for b in &planes[i + 1..] {
            let mut vs = a.basis().to_vec();
            vs.extend(b.basis().iter().cloned());
            if FpSubspace::span(g.prime(), 4, &vs).dim() == 4 {
                return Ok(Some((a.clone(), b.clone())));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl2::{gl2, nonsplit_torus, s3_copy, split_torus, standard_borel, trivial_group};

    fn pr(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn borel_s3() -> Subgroup {
        let p = pr(3);
        closure(p, &[Mat2::new(p, 1, 1, 0, 1), Mat2::new(p, 2, 0, 0, 1)]).unwrap()
    }

    #[test]
    fn adjoint_of_trivial_group_is_trivial() {
        let g = trivial_group(pr(5));
        let end = GModule::adjoint(&g);
        assert!(end.actions()[0].is_identity());
        assert_eq!(end.fixed_space().dim(), 4);
    }

    #[test]
    fn adjoint_fixes_identity_matrix() {
        let g = gl2(pr(5));
        let end = GModule::adjoint(&g);
        let scalars = FpSubspace::span(pr(5), 4, &[vec![1, 0, 0, 1]]);
        assert!(end.generator_actions().iter().all(|a| scalars.is_invariant_under(a)));
        assert_eq!(end.fixed_space(), scalars);
    }

    #[test]
    fn adjoint_is_conjugation() {
        let p = pr(7);
        let g = Mat2::new(p, 2, 3, 1, 4);
        let x = Mat2::new(p, 1, 4, 6, 2);
        let a = adjoint_matrix(g, p);
        let y = x.conjugate_by(g, 7);
        assert_eq!(a.mul_vec(&[x.a, x.b, x.c, x.d]), vec![y.a, y.b, y.c, y.d]);
    }

    #[test]
    fn bad_generator_data_rejected() {
        let p = pr(5);
        let g = closure(p, &[Mat2::scalar(4)]).unwrap();
        // -I has order 2 but diag(2) has order 4
        let bad = FpMatrix::from_rows(p, &[[2i64]]).unwrap();
        assert!(matches!(GModule::from_generator_action(&g, 1, &[bad]), Err(CohomologyError::InvalidModule(_))));
        let good = FpMatrix::from_rows(p, &[[4i64]]).unwrap();
        assert!(GModule::from_generator_action(&g, 1, &[good]).is_ok());
    }

    #[test]
    fn trivial_group_factors() {
        let g = trivial_group(pr(5));
        let f = composition_factors(&GModule::standard(&g)).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|m| m.as_character().unwrap().is_trivial()));
        assert!(common_irreducible_factor(&GModule::standard(&g), &GModule::adjoint(&g)).unwrap());
    }

    #[test]
    fn nonsplit_torus_is_irreducible() {
        for n in [3u64, 5, 7] {
            let g = nonsplit_torus(pr(n));
            let f = composition_factors(&GModule::standard(&g)).unwrap();
            assert_eq!(f.len(), 1);
            assert_eq!(f[0].dim(), 2);
            assert!(gl2::invariant_lines(&g).is_empty());
        }
    }

    #[test]
    fn borel_factors_are_diagonal_characters() {
        let p = pr(5);
        let b = standard_borel(p);
        let f = composition_factors(&GModule::standard(&b)).unwrap();
        assert_eq!(f.len(), 2);
        let d1 = GModule::from_character(&CharacterFp::new(&b, |g| g.a));
        let d2 = GModule::from_character(&CharacterFp::new(&b, |g| g.d));
        assert!(same_factor_multiset(&f, &[d1.clone(), d2.clone()]).unwrap());
        assert!(!modules_isomorphic(&d1, &d2).unwrap());
    }

    #[test]
    fn borel_adjoint_factors() {
        let p = pr(7);
        let b = standard_borel(p);
        let chi1 = CharacterFp::new(&b, |g| g.a);
        let chi2 = CharacterFp::new(&b, |g| g.d);
        let expected = [
            GModule::from_character(&chi1.mul(&chi2.inverse())),
            GModule::trivial(&b, 1),
            GModule::trivial(&b, 1),
            GModule::from_character(&chi2.mul(&chi1.inverse())),
        ];
        let f = composition_factors(&GModule::adjoint(&b)).unwrap();
        assert!(same_factor_multiset(&f, &expected).unwrap());
    }

    #[test]
    fn trivial_vs_sign_not_isomorphic() {
        let (g, _, _) = s3_copy(pr(5));
        let sign = CharacterFp::determinant(&g);
        assert!(!modules_isomorphic(&GModule::trivial(&g, 1), &GModule::from_character(&sign)).unwrap());
        let v = GModule::standard(&g);
        assert!(modules_isomorphic(&v, &v).unwrap());
    }

    #[test]
    fn s3_has_common_factor() {
        for n in [2u64, 3, 5, 7, 11, 13] {
            let (g, _, _) = s3_copy(pr(n));
            assert!(common_irreducible_factor(&GModule::standard(&g), &GModule::adjoint(&g)).unwrap(), "p = {n}");
        }
    }

    #[test]
    fn h1_vanishes_for_coprime_order() {
        let g = split_torus(pr(5));
        assert_eq!(h1(&g, &GModule::standard(&g)).unwrap().dim, 0);
        assert_eq!(h1(&g, &GModule::adjoint(&g)).unwrap().dim, 0);
        let t = trivial_group(pr(5));
        assert_eq!(h1(&t, &GModule::standard(&t)).unwrap().dim, 0);
    }

    #[test]
    fn h1_of_cyclic_p_group_with_trivial_coefficients() {
        // H^1(Z/p, F_p) = Hom(Z/p, F_p) has dimension 1
        let p = pr(5);
        let u = gl2::standard_unipotent(p);
        let h = h1(&u, &GModule::trivial(&u, 1)).unwrap();
        assert_eq!(h.dim, 1);
        assert_eq!(h.dim_coboundaries, 0);
        assert_eq!(h1_star(&u, &GModule::trivial(&u, 1)).unwrap(), 0);
    }

    #[test]
    fn h1_unipotent_standard() {
        // U acting on F_p^2: Z^1 has dim 2 minus relations, B^1 = 1
        let p = pr(5);
        let u = gl2::standard_unipotent(p);
        let h = h1(&u, &GModule::standard(&u)).unwrap();
        assert_eq!(h.dim_coboundaries, 1);
        assert_eq!(h.dim, 1);
        assert!(h.dim <= hom_normalizer_bound(&u));
    }

    #[test]
    fn h1_borel_s3() {
        let g = borel_s3();
        let h = h1(&g, &GModule::standard(&g)).unwrap();
        assert!(h.dim <= hom_normalizer_bound(&g));
        assert!(!groupcrit_side_analytic(&g).unwrap());
        assert!(!groupcrit_side_structural(&g).unwrap());
    }

    #[test]
    fn cocycle_basis_satisfies_cocycle_relation() {
        let g = borel_s3();
        let m = GModule::standard(&g);
        let h = h1(&g, &m).unwrap();
        assert_eq!(h.cocycle_basis.len(), h.dim_cocycles);
        for u in &h.cocycle_basis {
            // rebuild f on the whole group by brute force propagation and test every pair
            let q = 3;
            let mut f: std::collections::HashMap<Mat2, Vec<u32>> = std::collections::HashMap::new();
            f.insert(Mat2::IDENTITY, vec![0, 0]);
            let mut changed = true;
            while changed {
                changed = false;
                let known: Vec<(Mat2, Vec<u32>)> = f.iter().map(|(k, v)| (*k, v.clone())).collect();
                for (x, fx) in known {
                    for (i, s) in g.generators().iter().enumerate() {
                        let ax = m.action(&x).unwrap().mul_vec(&u[2 * i..2 * i + 2]);
                        let val = vec![(fx[0] + ax[0]) % q, (fx[1] + ax[1]) % q];
                        let y = x.mul(*s, q);
                        if !f.contains_key(&y) {
                            f.insert(y, val);
                            changed = true;
                        }
                    }
                }
            }
            for x in g.elements() {
                for y in g.elements() {
                    let lhs = &f[&x.mul(*y, q)];
                    let ay = m.action(x).unwrap().mul_vec(&f[y]);
                    let rhs = vec![(f[x][0] + ay[0]) % q, (f[x][1] + ay[1]) % q];
                    assert_eq!(lhs, &rhs);
                }
            }
        }
    }

    #[test]
    fn h1_star_bounded_by_h1() {
        for n in [3u64, 5] {
            for g in gl2::enumerate_subgroups(pr(n), gl2::EnumerationMode::Exhaustive).unwrap().take(60) {
                let v = GModule::standard(&g);
                let a = h1(&g, &v).unwrap().dim;
                let s = h1_star(&g, &v).unwrap();
                assert!(s <= a);
                if g.elements().len() > 1 && closure(g.prime(), &[g.generators()[0]]).unwrap() == g {
                    assert_eq!(s, 0, "cyclic group");
                }
            }
        }
    }

    #[test]
    fn scalar_of_order_three_satisfies_both_sides() {
        let p = pr(7);
        let g = closure(p, &[Mat2::scalar(2)]).unwrap();
        assert_eq!(g.order(), 3);
        assert!(groupcrit_side_analytic(&g).unwrap());
        assert!(groupcrit_side_structural(&g).unwrap());
    }

    #[test]
    fn gl2_five_satisfies_both_sides() {
        let g = gl2(pr(5));
        assert!(groupcrit_side_analytic(&g).unwrap());
        assert!(groupcrit_side_structural(&g).unwrap());
    }

    #[test]
    fn torus_normalizers_split_adjoint() {
        for n in [3u64, 5, 7] {
            let p = pr(n);
            for g in [split_torus(p), nonsplit_torus(p)] {
                let w = Mat2::new(p, 0, 1, 1, 0);
                let nrm = normalizer_in(&gl2(p), &g);
                assert!(nrm.contains(&w) || g == nonsplit_torus(p));
                assert!(adjoint_two_plane_splitting(&nrm).unwrap().is_some(), "p = {n}");
            }
        }
    }

    #[test]
    fn jordan_holder_independent_of_generator_order() {
        let p = pr(5);
        let b = standard_borel(p);
        let mut gens = b.generators().to_vec();
        gens.reverse();
        let end = GModule::adjoint(&b);
        let end2 = end.with_generators(&gens).unwrap();
        let f1 = composition_factors(&end).unwrap();
        let f2 = composition_factors(&end2).unwrap();
        let f2: Vec<GModule> = f2.into_iter().map(|m| m.with_generators(b.generators()).unwrap()).collect();
        assert!(same_factor_multiset(&f1, &f2).unwrap());
    }
}
