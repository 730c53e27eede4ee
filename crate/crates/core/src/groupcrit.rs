//! Brute-force drivers comparing the cohomological and the structural form of
//! the group criterion over enumerated subgroups of GL2(F_p).

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::{
    borel_datum, common_irreducible_factor, groupcrit_side_analytic, groupcrit_side_structural, h1,
    hom_normalizer_bound, CohomologyError, GModule,
};
use crate::fp::Prime;
use crate::gl2::{det_image_order, enumerate_subgroups, meets_center, s3_copy, EnumerationMode, Subgroup};

type Result<T> = std::result::Result<T, CohomologyError>;

/// Both sides of the criterion for one subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GroupCritRow {
    pub order: usize,
    pub analytic: bool,
    pub structural: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupCritSummary {
    pub p: u32,
    pub mode: String,
    pub checked: usize,
    pub distinct: usize,
    pub mismatches: usize,
    pub both_true: usize,
    pub both_false: usize,
    /// Generators (as `[a, b, c, d]`) of the first few mismatching subgroups.
    pub mismatch_examples: Vec<Vec<[u32; 4]>>,
}

fn mode_name(mode: EnumerationMode) -> String {
    match mode {
        EnumerationMode::Exhaustive => "exhaustive".into(),
        EnumerationMode::Sampled { count, seed } => format!("sampled(count={count}, seed={seed})"),
    }
}

pub fn groupcrit_row(g: &Subgroup) -> Result<GroupCritRow> {
    Ok(GroupCritRow { order: g.order(), analytic: groupcrit_side_analytic(g)?, structural: groupcrit_side_structural(g)? })
}

pub fn collect_subgroups(p: Prime, mode: EnumerationMode) -> Result<Vec<Subgroup>> {
    Ok(enumerate_subgroups(p, mode)?.collect())
}

/// Evaluates both sides on every subgroup and tallies agreement.
pub fn verify_group_criterion(p: Prime, mode: EnumerationMode) -> Result<GroupCritSummary> {
    let groups = collect_subgroups(p, mode)?;
    summarize(p, mode, &groups)
}

pub fn summarize(p: Prime, mode: EnumerationMode, groups: &[Subgroup]) -> Result<GroupCritSummary> {
    let rows: Vec<GroupCritRow> = groups.par_iter().map(groupcrit_row).collect::<Result<_>>()?;
    let distinct = groups.iter().map(Subgroup::fingerprint).collect::<HashSet<_>>().len();
    let mismatch_examples = groups
        .iter()
        .zip(&rows)
        .filter(|(_, r)| r.analytic != r.structural)
        .take(5)
        .map(|(g, _)| g.generators().iter().map(|m| [m.a, m.b, m.c, m.d]).collect())
        .collect();
    Ok(GroupCritSummary {
        p: p.get(),
        mode: mode_name(mode),
        checked: rows.len(),
        distinct,
        mismatches: rows.iter().filter(|r| r.analytic != r.structural).count(),
        both_true: rows.iter().filter(|r| r.analytic && r.structural).count(),
        both_false: rows.iter().filter(|r| !r.analytic && !r.structural).count(),
        mismatch_examples,
    })
}

/// Cross-checks of h^1(G, V) for a subgroup whose order is divisible by p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct H1Check {
    pub h1: usize,
    /// `chi1 != chi2^2` on the invariant line, when there is one.
    pub characters_generic: Option<bool>,
    pub normalizer_bound: usize,
}

impl H1Check {
    /// `h1 = 0` when the characters are generic, and `h1 <= normalizer_bound`.
    pub fn holds(&self) -> bool {
        self.characters_generic != Some(true) || self.h1 == 0
    }

    pub fn bound_holds(&self) -> bool {
        self.h1 <= self.normalizer_bound
    }
}

pub fn h1_check(g: &Subgroup) -> Result<Option<H1Check>> {
    if g.order() % g.p() as usize != 0 {
        return Ok(None);
    }
    let h = h1(g, &GModule::standard(g))?.dim;
    let characters_generic = borel_datum(g).map(|d| d.chi1 != d.chi2.square());
    Ok(Some(H1Check { h1: h, characters_generic, normalizer_bound: hom_normalizer_bound(g) }))
}

/// Values for a subgroup meeting the center nontrivially.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CenterCheck {
    pub h1_v: usize,
    pub h1_end: usize,
    pub common_factor: bool,
}

pub fn center_check(g: &Subgroup) -> Result<Option<CenterCheck>> {
    if !meets_center(g) {
        return Ok(None);
    }
    let v = GModule::standard(g);
    let end = GModule::adjoint(g);
    Ok(Some(CenterCheck {
        h1_v: h1(g, &v)?.dim,
        h1_end: h1(g, &end)?.dim,
        common_factor: common_irreducible_factor(&v, &end)?,
    }))
}

/// Facts about the standard copy of S3 in GL2(F_p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct S3Check {
    pub p: u32,
    pub order: usize,
    pub common_factor: bool,
    pub det_image_order: usize,
    /// Whether det equals the sign character reduced mod p on every element.
    pub det_is_sign: bool,
}

pub fn s3_check(p: Prime) -> Result<S3Check> {
    let (g, transposition, _) = s3_copy(p);
    let q = p.get();
    let v = GModule::standard(&g);
    let end = GModule::adjoint(&g);
    // the sign is -1 exactly on the conjugates of the transposition
    let conj: HashSet<_> = g.elements().iter().map(|y| transposition.conjugate_by(*y, q)).collect();
    let det_is_sign = g.elements().iter().all(|x| x.det(q) == if conj.contains(x) { q - 1 } else { 1 % q });
    Ok(S3Check {
        p: q,
        order: g.order(),
        common_factor: common_irreducible_factor(&v, &end)?,
        det_image_order: det_image_order(&g),
        det_is_sign,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn exhaustive_at_three() {
        let s = verify_group_criterion(pr(3), EnumerationMode::Exhaustive).unwrap();
        assert_eq!(s.checked, 55);
        assert_eq!(s.distinct, 55);
        assert_eq!(s.mismatches, 0);
        assert_eq!(s.both_true + s.both_false, 55);
    }

    #[test]
    fn sampled_is_deterministic() {
        let mode = EnumerationMode::Sampled { count: 60, seed: 1 };
        let a = verify_group_criterion(pr(5), mode).unwrap();
        let b = verify_group_criterion(pr(5), mode).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mismatches, 0);
    }

    #[test]
    fn h1_checks_at_three() {
        for g in collect_subgroups(pr(3), EnumerationMode::Exhaustive).unwrap() {
            if let Some(c) = h1_check(&g).unwrap() {
                assert!(c.holds() && c.bound_holds(), "{c:?}");
            }
        }
    }

    #[test]
    fn s3_copies() {
        for p in [3u64, 5, 7, 11, 13] {
            let c = s3_check(pr(p)).unwrap();
            assert_eq!(c.order, 6);
            assert!(c.common_factor);
            assert!(c.det_is_sign);
            assert_eq!(c.det_image_order, 2);
        }
        // sign mod 2 is trivial
        let c = s3_check(pr(2)).unwrap();
        assert!(c.det_is_sign);
        assert_eq!(c.det_image_order, 1);
    }

    #[test]
    fn center_meeting_groups_at_three() {
        for g in collect_subgroups(pr(3), EnumerationMode::Exhaustive).unwrap() {
            if let Some(c) = center_check(&g).unwrap() {
                assert_eq!(c.h1_v, 0);
                assert!(!c.common_factor);
            }
        }
    }
}
