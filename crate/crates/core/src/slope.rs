//! Slope bounds for `E_m = a_* omega_X^m` over an elliptic Albanese image.
//!
//! `nu(E)` is the least slope among the indecomposable summands of `E`. A
//! multiplication map `E_i ⊗ E_j -> E_{i+j}` passes `nu(E_i) + nu(E_j)` to
//! `E_{i+j}` unchanged when it is generically surjective, and capped at `1`
//! when its cokernel has generic rank at most one.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberData {
    pub kf2: i64,
    pub chi_f: i64,
    pub pg_f: i64,
}

impl FiberData {
    /// Minimal surface with `K^2 = 1`, `p_g = 2`, `q = 0`.
    pub const ONE_TWO: FiberData = FiberData { kf2: 1, chi_f: 3, pg_f: 2 };

    pub fn is_one_two(&self) -> bool {
        *self == FiberData::ONE_TWO
    }
}

/// `P_m(F) = chi(O_F) + m(m-1)/2 K_F^2` for `m >= 2`.
pub fn surface_plurigenus(kf2: i64, chi_f: i64, m: i64) -> Result<i64> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("surface plurigenus needs m >= 2, got {m}")));
    }
    if kf2 < 1 {
        return Err(Error::InvalidArgument(format!("K_F^2 = {kf2} must be positive")));
    }
    Ok(chi_f + m * (m - 1) / 2 * kf2)
}

/// A known bound on the cokernel of `R_i ⊗ R_j -> R_{i+j}` on the fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicationRule {
    pub factor: i64,
    /// `None` matches any partner.
    pub partner: Option<i64>,
    pub min_total: i64,
    pub coker_rank_bound: u8,
    pub source: String,
}

impl MultiplicationRule {
    fn new(factor: i64, partner: Option<i64>, min_total: i64, coker: u8, source: &str) -> Self {
        MultiplicationRule {
            factor,
            partner,
            min_total,
            coker_rank_bound: coker,
            source: source.to_string(),
        }
    }

    fn matches(&self, i: i64, j: i64) -> bool {
        let one_way = |x: i64, y: i64| {
            x == self.factor && self.partner.map_or(y >= 1, |p| p == y)
        };
        i + j >= self.min_total && (one_way(i, j) || one_way(j, i))
    }
}

/// The rule table for fibers of type `(1,2)`.
pub fn one_two_rules() -> Vec<MultiplicationRule> {
    vec![
        MultiplicationRule::new(1, None, 2, 1, "R_1 R_{m-1} has codimension <= 1"),
        MultiplicationRule::new(1, Some(2), 3, 0, "R_1 R_2 = R_3"),
        MultiplicationRule::new(2, Some(2), 4, 1, "R_2 R_2 ⊇ R_1 R_3 has codimension <= 1"),
        MultiplicationRule::new(2, None, 8, 0, "R_2 R_{m-2} = R_m for m >= 8"),
        MultiplicationRule::new(2, Some(5), 7, 1, "R_2 R_5 has codimension <= 1"),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationStep {
    pub pair: (i64, i64),
    pub total: i64,
    pub coker_rank_bound: u8,
    pub value: Rational,
    pub bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeState {
    pub bounds: BTreeMap<i64, Rational>,
    pub fiber: FiberData,
    pub rules: Vec<MultiplicationRule>,
    #[serde(default)]
    pub derivation: Vec<DerivationStep>,
}

/// `nu(E_1) >= 0` and `nu(E_2) >= 1 / rank(E_2)`, with the `(1,2)` rule table.
pub fn base_bounds(fiber: FiberData) -> Result<SlopeState> {
    if !fiber.is_one_two() {
        return Err(Error::UnsupportedFiber { kf2: fiber.kf2, pg: fiber.pg_f, chi: fiber.chi_f });
    }
    let rank2 = surface_plurigenus(fiber.kf2, fiber.chi_f, 2)?;
    Ok(SlopeState {
        bounds: BTreeMap::from([(1, Rational::zero()), (2, Rational::new(1, rank2))]),
        fiber,
        rules: one_two_rules(),
        derivation: Vec::new(),
    })
}

impl SlopeState {
    pub fn bound(&self, m: i64) -> Option<&Rational> {
        self.bounds.get(&m)
    }

    /// The strongest rule valid for `(i, j)`.
    pub fn rule_for(&self, i: i64, j: i64) -> Option<&MultiplicationRule> {
        self.rules
            .iter()
            .filter(|rule| rule.matches(i, j))
            .min_by_key(|rule| rule.coker_rank_bound)
    }

    /// Pushes `nu(E_i) + nu(E_j)` through the multiplication map into `E_{i+j}`
    /// and returns the value the rule yields. The stored bound only grows.
    pub fn apply_rule(&mut self, (i, j): (i64, i64)) -> Result<Rational> {
        let missing = |m: i64| Error::MissingBound(m.max(0) as u32);
        let bi = self.bounds.get(&i).ok_or_else(|| missing(i))?;
        let bj = self.bounds.get(&j).ok_or_else(|| missing(j))?;
        let candidate = bi + bj;
        let coker = self
            .rule_for(i, j)
            .ok_or(Error::NoValidRule(i.max(0) as u32, j.max(0) as u32))?
            .coker_rank_bound;
        let value = if coker == 0 { candidate } else { candidate.min(Rational::one()) };
        let total = i + j;
        let bound = match self.bounds.get(&total) {
            Some(old) if *old >= value => old.clone(),
            _ => value.clone(),
        };
        self.bounds.insert(total, bound.clone());
        self.derivation.push(DerivationStep {
            pair: (i, j),
            total,
            coker_rank_bound: coker,
            value: value.clone(),
            bound,
        });
        Ok(value)
    }
}

pub fn apply_rule(state: &mut SlopeState, pair: (i64, i64)) -> Result<Rational> {
    state.apply_rule(pair)
}

pub const DEFAULT_SCHEDULE: [(i64, i64); 4] = [(2, 2), (4, 1), (5, 2), (7, 2)];

pub fn propagate(state: &SlopeState, schedule: &[(i64, i64)]) -> Result<SlopeState> {
    let mut next = state.clone();
    for &pair in schedule {
        next.apply_rule(pair)?;
    }
    Ok(next)
}

/// `nu(E_n) >= 1` gives `n K_X >= F`, hence `K^3 >= K_F^2 / n`.
pub fn fiber_volume_bound(state: &SlopeState, n: i64) -> Result<Rational> {
    let bound = state.bounds.get(&n).ok_or(Error::MissingBound(n.max(0) as u32))?;
    if *bound < 1 {
        return Err(Error::InsufficientSlope { n: n as u32, bound: bound.clone() });
    }
    Ok(Rational::new(state.fiber.kf2, n))
}

/// Parses `"2+2,4+1,5+2"`.
pub fn parse_schedule(text: &str) -> Result<Vec<(i64, i64)>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|item| {
            let bad = || Error::Parse(format!("invalid schedule entry {item:?}"));
            let (i, j) = item.trim().split_once('+').ok_or_else(bad)?;
            let i: i64 = i.trim().parse().map_err(|_| bad())?;
            let j: i64 = j.trim().parse().map_err(|_| bad())?;
            if i < 1 || j < 1 {
                return Err(bad());
            }
            Ok((i, j))
        })
        .collect()
}
