//! Exhaustive enumeration of baskets compatible with prescribed plurigenera.
//!
//! `P_2` and `P_3` fix `sigma = sum b'` and `tau = sum b'^2 / r = K^3 + c`.
//! The search runs over partitions of `sigma` into at most `n_max` parts and,
//! for each part, over indices `r` with `b' <= r/2` and `gcd(b', r) = 1`.
//! A branch is cut as soon as the largest `tau` it can still reach is `<= c`
//! (no positive `K^3` left). The horizon `r_max` bounds what remains.
//!
//! When the last index of a branch runs past `r_max` while `K^3` is still
//! positive, the tail is examined once: for `r > b'(M - 1)` no residue
//! `b' j` with `j < M` wraps modulo `r`, and the `1/r` terms of `K^3` and of
//! the correction cancel in every `P_m`, `m <= M`. Every admissible `r` in the
//! tail therefore has the same plurigenera as its first member, so a single
//! evaluation decides the whole tail. Other cuts by `r_max` set the
//! truncation flag.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basket::BasketSet;
use crate::error::{Error, Result};
use crate::rational::{gcd, Rational};
use crate::reid::{invert_p2_p3, ReidModel};

pub const DEFAULT_R_MAX: i64 = 50;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintProblem {
    pub chi: i64,
    pub p2: i64,
    pub p3: i64,
    /// Required values of `P_m` for `m >= 4`.
    pub filters: BTreeMap<i64, i64>,
    pub r_max: i64,
}

impl ConstraintProblem {
    pub fn new(chi: i64, p2: i64, p3: i64, filters: BTreeMap<i64, i64>, r_max: i64) -> Self {
        ConstraintProblem { chi, p2, p3, filters, r_max }
    }

    fn validate(&self) -> Result<()> {
        if self.r_max < 2 {
            return Err(Error::InvalidArgument(format!("r_max must be >= 2, got {}", self.r_max)));
        }
        if let Some(&m) = self.filters.keys().find(|&&m| m < 4) {
            return Err(Error::InvalidArgument(format!("filter key {m} must be >= 4")));
        }
        Ok(())
    }

    /// Largest `m` whose plurigenus is computed for each candidate.
    pub fn m_top(&self) -> i64 {
        self.filters.keys().copied().max().unwrap_or(0).max(5)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Solution {
    pub baskets: BasketSet,
    pub k3: Rational,
    pub pluri: BTreeMap<i64, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Solution {
    pub fn model(&self, chi: i64) -> ReidModel {
        ReidModel::new(self.k3.clone(), chi, self.baskets.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "m", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExclusionReason {
    K3Nonpositive,
    PluriMismatch(i64),
    NonIntegral(i64),
    Coprimality,
    Reducedness,
}

/// A candidate (possibly partial) assignment ruled out during the search.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Exclusion {
    /// `(r, b')` pairs assigned so far, sorted.
    pub baskets: Vec<(i64, i64)>,
    pub reason: ExclusionReason,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k3: Option<Rational>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub pluri: BTreeMap<i64, Rational>,
    /// Set when this row stands for every admissible larger last index.
    #[serde(default)]
    pub tail: bool,
}

impl Exclusion {
    fn branch(pairs: &[(i64, i64)], reason: ExclusionReason) -> Self {
        let mut baskets = pairs.to_vec();
        baskets.sort();
        Exclusion { baskets, reason, k3: None, pluri: BTreeMap::new(), tail: false }
    }

    pub fn pluri_int(&self, m: i64) -> Option<i64> {
        self.pluri.get(&m).and_then(Rational::to_i64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub sigma: i64,
    pub tau_offset: Rational,
    pub n_max: i64,
    pub partitions_examined: Vec<Vec<i64>>,
    pub solutions: Vec<Solution>,
    pub excluded: Vec<Exclusion>,
    pub truncation_flag: bool,
}

impl CaseReport {
    pub fn min_volume(&self) -> Option<&Solution> {
        self.solutions.iter().min_by(|x, y| x.k3.cmp(&y.k3))
    }
}

/// Largest `n` with `n < 4 (P_2 + 3 chi)`; each basket adds at least `1/4` to `P_2 + 3 chi`.
pub fn basket_count_bound(p2: i64, chi: i64) -> Result<i64> {
    let t = p2 + 3 * chi;
    if t <= 0 {
        return Err(Error::Infeasible(format!("P2 + 3 chi = {t} leaves no room for K^3 > 0")));
    }
    Ok(4 * t - 1)
}

/// Partitions of `n` into at most `max_parts` parts, each listed with
/// decreasing parts, in lexicographically decreasing order.
pub fn partitions(n: i64, max_parts: i64) -> Vec<Vec<i64>> {
    fn go(n: i64, cap: i64, parts_left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        if parts_left == 0 {
            return;
        }
        for p in (1..=cap.min(n)).rev() {
            cur.push(p);
            go(n - p, p, parts_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n >= 0 && max_parts >= 0 {
        go(n, n, max_parts, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Default)]
struct Partial {
    solutions: Vec<Solution>,
    excluded: Vec<Exclusion>,
    truncated: bool,
}

struct Search<'a> {
    problem: &'a ConstraintProblem,
    parts: &'a [i64],
    tau_offset: &'a Rational,
    m_top: i64,
    out: Partial,
}

enum Verdict {
    Accepted(Solution),
    Rejected(Exclusion),
}

impl<'a> Search<'a> {
    /// Upper bound on what slots after `k` can still add to `tau`, given
    /// that slot `k` sits at index `r`.
    fn remaining_max(&self, k: usize, r: i64) -> Rational {
        let b = self.parts[k];
        self.parts[k + 1..]
            .iter()
            .map(|&bj| {
                let lo = if bj == b { r.max(2 * bj) } else { 2 * bj };
                Rational::new(bj * bj, lo)
            })
            .sum()
    }

    fn evaluate(&self, pairs: &[(i64, i64)]) -> Verdict {
        let baskets = BasketSet::from_pairs(pairs).expect("search only assigns valid baskets");
        let k3 = baskets.tau() - self.tau_offset;
        if !k3.is_positive() {
            let mut ex = Exclusion::branch(pairs, ExclusionReason::K3Nonpositive);
            ex.k3 = Some(k3);
            return Verdict::Rejected(ex);
        }
        let model = ReidModel::new(k3.clone(), self.problem.chi, baskets.clone());
        let values: BTreeMap<i64, Rational> = (2..=self.m_top)
            .map(|m| (m, model.plurigenus(m).expect("m >= 2")))
            .collect();
        let mut failure = None;
        for (&m, v) in &values {
            let expected = match m {
                2 => Some(self.problem.p2),
                3 => Some(self.problem.p3),
                _ => self.problem.filters.get(&m).copied(),
            };
            if !v.is_integer() {
                failure = Some(ExclusionReason::NonIntegral(m));
                break;
            }
            if let Some(e) = expected {
                if *v != e {
                    failure = Some(ExclusionReason::PluriMismatch(m));
                    break;
                }
            }
        }
        match failure {
            None => Verdict::Accepted(Solution {
                baskets,
                k3,
                pluri: values.iter().map(|(&m, v)| (m, v.to_i64().expect("integral"))).collect(),
                note: None,
            }),
            Some(reason) => {
                let mut ex = Exclusion::branch(pairs, reason);
                ex.k3 = Some(k3);
                ex.pluri = values;
                Verdict::Rejected(ex)
            }
        }
    }

    fn positive_volume(&self, tau_so_far: &Rational, b: i64, r: i64) -> bool {
        tau_so_far + &Rational::new(b * b, r) > *self.tau_offset
    }

    /// Decides the indices beyond `r_max` for the last slot.
    fn close_tail(&mut self, pairs: &mut Vec<(i64, i64)>, tau_so_far: &Rational, b: i64) {
        let mut r = self.problem.r_max + 1;
        loop {
            if !self.positive_volume(tau_so_far, b, r) {
                return;
            }
            if r >= 2 * b && gcd(b, r) == 1 {
                break;
            }
            r += 1;
        }
        if r <= b * (self.m_top - 1) {
            self.out.truncated = true;
            return;
        }
        pairs.push((r, b));
        match self.evaluate(pairs) {
            Verdict::Accepted(_) => self.out.truncated = true,
            Verdict::Rejected(mut ex) => {
                ex.tail = true;
                self.out.excluded.push(ex);
            }
        }
        pairs.pop();
    }

    fn descend(&mut self, k: usize, r_lo: i64, pairs: &mut Vec<(i64, i64)>, tau_so_far: Rational) {
        let b = self.parts[k];
        let last = k + 1 == self.parts.len();
        let mut r = r_lo;
        loop {
            let reach = &tau_so_far + &Rational::new(b * b, r) + self.remaining_max(k, r);
            if reach <= *self.tau_offset {
                break;
            }
            if r > self.problem.r_max {
                if last {
                    self.close_tail(pairs, &tau_so_far, b);
                } else {
                    self.out.truncated = true;
                }
                break;
            }
            if r < 2 * b || gcd(b, r) != 1 {
                pairs.push((r, b));
                let reason = if r < 2 * b {
                    ExclusionReason::Reducedness
                } else {
                    ExclusionReason::Coprimality
                };
                self.out.excluded.push(Exclusion::branch(pairs, reason));
                pairs.pop();
                r += 1;
                continue;
            }
            pairs.push((r, b));
            let tau = &tau_so_far + &Rational::new(b * b, r);
            if last {
                match self.evaluate(pairs) {
                    Verdict::Accepted(s) => self.out.solutions.push(s),
                    Verdict::Rejected(ex) => self.out.excluded.push(ex),
                }
            } else {
                let next_lo = if self.parts[k + 1] == b { r } else { 2 };
                self.descend(k + 1, next_lo, pairs, tau);
            }
            pairs.pop();
            r += 1;
        }
    }
}

fn search_partition(
    problem: &ConstraintProblem,
    parts: &[i64],
    tau_offset: &Rational,
    m_top: i64,
) -> Partial {
    let mut search = Search { problem, parts, tau_offset, m_top, out: Partial::default() };
    if parts.is_empty() {
        match search.evaluate(&[]) {
            Verdict::Accepted(s) => search.out.solutions.push(s),
            Verdict::Rejected(ex) => search.out.excluded.push(ex),
        }
    } else {
        search.descend(0, 2, &mut Vec::new(), Rational::zero());
    }
    search.out
}

pub fn enumerate(problem: &ConstraintProblem) -> Result<CaseReport> {
    problem.validate()?;
    let inv = invert_p2_p3(problem.p2, problem.p3, problem.chi)?;
    let n_max = basket_count_bound(problem.p2, problem.chi)?;
    let parts_list = partitions(inv.sigma, n_max);
    let m_top = problem.m_top();

    let partials: Vec<Partial> = parts_list
        .par_iter()
        .map(|parts| search_partition(problem, parts, &inv.tau_offset, m_top))
        .collect();

    let mut solutions = Vec::new();
    let mut excluded = Vec::new();
    let mut truncation_flag = false;
    for p in partials {
        solutions.extend(p.solutions);
        excluded.extend(p.excluded);
        truncation_flag |= p.truncated;
    }
    solutions.sort();
    solutions.dedup();
    excluded.sort();
    excluded.dedup();

    Ok(CaseReport {
        sigma: inv.sigma,
        tau_offset: inv.tau_offset,
        n_max,
        partitions_examined: parts_list,
        solutions,
        excluded,
        truncation_flag,
    })
}

pub const C1_NOTE: &str = "no known geometric example";

/// The `chi = 0, P_2 = 1, P_3 = 2, P_4 = 3, P_5 = 4` instance at `r_max = 50`.
pub fn classify_small_p5() -> CaseReport {
    let filters = BTreeMap::from([(4, 3), (5, 4)]);
    let problem = ConstraintProblem::new(0, 1, 2, filters, DEFAULT_R_MAX);
    let mut report = enumerate(&problem).expect("the instance is feasible");
    for s in &mut report.solutions {
        if s.baskets.pairs() == [(2, 1), (3, 1), (4, 1)] {
            s.note = Some(C1_NOTE.to_string());
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(filters: &[(i64, i64)], r_max: i64) -> ConstraintProblem {
        ConstraintProblem::new(0, 1, 2, filters.iter().copied().collect(), r_max)
    }

    fn sets(report: &CaseReport) -> Vec<(Vec<(i64, i64)>, Rational)> {
        report.solutions.iter().map(|s| (s.baskets.pairs(), s.k3.clone())).collect()
    }

    #[test]
    fn count_bound_examples() {
        assert_eq!(basket_count_bound(1, 0).unwrap(), 3);
        assert_eq!(basket_count_bound(2, 0).unwrap(), 7);
        assert!(matches!(basket_count_bound(1, -1), Err(Error::Infeasible(_))));
    }

    #[test]
    fn partitions_order() {
        assert_eq!(partitions(3, 3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(partitions(3, 2), vec![vec![3], vec![2, 1]]);
        assert_eq!(partitions(0, 3), vec![Vec::<i64>::new()]);
        assert_eq!(partitions(5, 5).len(), 7);
    }

    #[test]
    fn small_p5_instance_has_four_solutions() {
        let report = enumerate(&problem(&[(4, 3), (5, 4)], 50)).unwrap();
        assert_eq!(
            sets(&report),
            vec![
                (vec![(2, 1), (3, 1), (4, 1)], Rational::new(1, 12)),
                (vec![(2, 1), (3, 1), (5, 1)], Rational::new(1, 30)),
                (vec![(2, 1), (7, 2)], Rational::new(1, 14)),
                (vec![(4, 1), (5, 2)], Rational::new(1, 20)),
            ]
        );
        assert!(!report.truncation_flag);
        assert_eq!(report.n_max, 3);
    }

    #[test]
    fn p4_four_p5_seven_instance() {
        let report = enumerate(&problem(&[(4, 4), (5, 7)], 10)).unwrap();
        assert_eq!(
            sets(&report),
            vec![
                (vec![(2, 1), (2, 1), (3, 1)], Rational::new(1, 3)),
                (vec![(2, 1), (5, 2)], Rational::new(3, 10)),
                (vec![(7, 3)], Rational::new(2, 7)),
            ]
        );
        assert!(!report.truncation_flag);
    }

    #[test]
    fn unfiltered_family_is_truncated() {
        let report = enumerate(&problem(&[], 6)).unwrap();
        assert!(report.truncation_flag);
        for r in 2..=6 {
            assert!(report
                .solutions
                .iter()
                .any(|s| s.baskets.pairs() == [(2, 1), (2, 1), (r, 1)]
                    && s.k3 == Rational::new(1, r)));
        }
    }

    #[test]
    fn tail_row_is_recorded() {
        let report = enumerate(&problem(&[(4, 3), (5, 4)], 50)).unwrap();
        let tail: Vec<_> = report.excluded.iter().filter(|e| e.tail).collect();
        assert_eq!(tail.len(), 1);
        assert_eq!(tail[0].baskets, vec![(2, 1), (2, 1), (51, 1)]);
        assert_eq!(tail[0].pluri_int(4), Some(4));
        assert_eq!(tail[0].pluri_int(5), Some(6));
    }

    #[test]
    fn coprimality_and_reducedness_rows() {
        let report = enumerate(&problem(&[(4, 3), (5, 4)], 50)).unwrap();
        let has = |pairs: &[(i64, i64)], reason| {
            report.excluded.iter().any(|e| e.baskets == pairs && e.reason == reason)
        };
        assert!(has(&[(4, 2)], ExclusionReason::Coprimality));
        assert!(has(&[(3, 2)], ExclusionReason::Reducedness));
        assert!(has(&[(6, 3)], ExclusionReason::Coprimality));
    }

    #[test]
    fn invalid_problems() {
        assert!(enumerate(&problem(&[(3, 2)], 10)).is_err());
        assert!(enumerate(&problem(&[], 1)).is_err());
        let p = ConstraintProblem::new(0, 0, 1, BTreeMap::new(), 10);
        assert!(matches!(enumerate(&p), Err(Error::Infeasible(_))));
        let p = ConstraintProblem::new(0, 1, 6, BTreeMap::new(), 10);
        assert!(matches!(enumerate(&p), Err(Error::Infeasible(_))));
    }

    #[test]
    fn solutions_satisfy_linear_invariants() {
        let report = enumerate(&problem(&[], 12)).unwrap();
        for s in &report.solutions {
            assert_eq!(s.baskets.sigma(), report.sigma);
            assert_eq!(s.baskets.tau(), &s.k3 + &report.tau_offset);
            assert!(s.k3.is_positive());
            assert!(s.k3 <= Rational::new(1, 2));
        }
    }

    #[test]
    fn c1_is_annotated() {
        let report = classify_small_p5();
        let c1 = report.solutions.iter().find(|s| s.baskets.pairs() == [(2, 1), (3, 1), (4, 1)]);
        assert_eq!(c1.unwrap().note.as_deref(), Some(C1_NOTE));
        assert_eq!(report.min_volume().unwrap().k3, Rational::new(1, 30));
    }
}
