//! Lower bounds for `xi = (pi^*(K_X) . C)` and the volume bounds they imply.
//!
//! With `K = 1 + m0/p + 1/beta`, a step at level `m` sets
//! `alpha = (m - K) xi` and, when `ceil(alpha) >= 2` (or `alpha > 0` on an even
//! curve), improves the bound to `(deg K_C + ceil(alpha)) / m`. Letting
//! `m -> infinity` gives the starting bound `deg K_C / K`. A bound on `xi`
//! turns into `K^3 >= p beta xi / m0`.
//!
//! An "open" `beta` is only the limit of admissible values `beta_n`; the side
//! conditions are then required strictly (`alpha > 1`), while conclusions use
//! the limit itself.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiProblem {
    pub m0: i64,
    pub p: i64,
    pub beta: Rational,
    pub beta_is_open_limit: bool,
    pub deg_kc: i64,
    pub even_c: bool,
}

impl XiProblem {
    pub fn new(m0: i64, p: i64, beta: Rational, deg_kc: i64) -> Result<Self> {
        if m0 < 1 || p < 1 || deg_kc < 1 {
            return Err(Error::InvalidArgument("m0, p and deg K_C must be positive".into()));
        }
        if !beta.is_positive() {
            return Err(Error::InvalidArgument(format!("beta = {beta} must be positive")));
        }
        Ok(XiProblem { m0, p, beta, beta_is_open_limit: false, deg_kc, even_c: false })
    }

    pub fn open(mut self) -> Self {
        self.beta_is_open_limit = true;
        self
    }

    pub fn even(mut self) -> Self {
        self.even_c = true;
        self
    }

    /// `K = 1 + m0/p + 1/beta`
    pub fn k_const(&self) -> Rational {
        Rational::one() + Rational::new(self.m0, self.p) + self.beta.recip()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "ALPHA0_GE_2")]
    Alpha0Ge2,
    #[serde(rename = "EVEN_DIVISOR")]
    EvenDivisor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiStep {
    pub m: i64,
    pub alpha: Rational,
    pub alpha0: i64,
    pub new_bound: Rational,
    pub condition_used: Condition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupCertificate {
    pub value: Rational,
    pub certified: bool,
    pub l0: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiTrace {
    pub start: Rational,
    pub steps: Vec<XiStep>,
    #[serde(rename = "final")]
    pub final_bound: Rational,
    pub sup_certified: Option<SupCertificate>,
}

impl XiTrace {
    fn starting_at(start: Rational) -> Self {
        XiTrace { final_bound: start.clone(), start, steps: Vec::new(), sup_certified: None }
    }

    fn push(&mut self, step: XiStep) {
        self.final_bound = step.new_bound.clone();
        self.steps.push(step);
    }

    /// The best certified bound: the supremum when certified, else the last step.
    pub fn best(&self) -> &Rational {
        match &self.sup_certified {
            Some(c) if c.certified && c.value > self.final_bound => &c.value,
            _ => &self.final_bound,
        }
    }
}

pub fn xi_limit(prob: &XiProblem) -> Rational {
    Rational::from_integer(prob.deg_kc) / prob.k_const()
}

pub fn xi_step(prob: &XiProblem, current: &Rational, m: i64) -> Result<XiStep> {
    if !current.is_positive() {
        return Err(Error::InvalidArgument(format!("current bound {current} must be positive")));
    }
    if m < 2 {
        return Err(Error::InvalidArgument(format!("m must be >= 2, got {m}")));
    }
    let alpha = (Rational::from_integer(m) - prob.k_const()) * current;
    let alpha0 = alpha.ceil();
    let condition = if prob.beta_is_open_limit {
        (alpha > 1).then_some(Condition::Alpha0Ge2)
    } else if alpha0 >= 2.into() {
        Some(Condition::Alpha0Ge2)
    } else if prob.even_c && alpha.is_positive() {
        Some(Condition::EvenDivisor)
    } else {
        None
    };
    let Some(condition_used) = condition else {
        return Err(Error::NotApplicable(format!("alpha = {alpha} at m = {m}")));
    };
    let alpha0 = i64::try_from(alpha0).expect("alpha0 fits in i64");
    Ok(XiStep {
        m,
        new_bound: Rational::new(prob.deg_kc + alpha0, m),
        alpha,
        alpha0,
        condition_used,
    })
}

/// Best strict improvement over `m in [2, m_max]`; ties go to the smallest `m`.
fn best_step(prob: &XiProblem, current: &Rational, m_max: i64) -> Option<XiStep> {
    let mut best: Option<XiStep> = None;
    for m in 2..=m_max {
        let Ok(step) = xi_step(prob, current, m) else { continue };
        if step.new_bound <= *current {
            continue;
        }
        if best.as_ref().is_none_or(|b| step.new_bound > b.new_bound) {
            best = Some(step);
        }
    }
    best
}

pub fn xi_iterate(prob: &XiProblem, m_max: i64, round_max: usize) -> XiTrace {
    let mut trace = XiTrace::starting_at(xi_limit(prob));
    for _ in 0..round_max {
        match best_step(prob, &trace.final_bound, m_max) {
            Some(step) => trace.push(step),
            None => break,
        }
    }
    trace
}

/// Data of the induction `xi >= g(l) = (deg K_C + l + 1 - K)/(l + 1)` for `l >= l0`.
///
/// For integral `K` the step at `m = l + 1` from `g(l - 1)` reaches `g(l)`
/// exactly when `alpha > l - K`, which after clearing denominators is
/// `l (deg - K + 1) + (1 - K)(deg - K) > 0`. For fractional `K` the cruder
/// `deg >= K` (giving `alpha >= m - K`) is used instead.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitLimitCertificate {
    pub l0: i64,
    pub base: Rational,
    pub base_attained: bool,
    pub leading: Rational,
    pub constant: Rational,
    pub holds: bool,
}

pub fn unit_limit_certificate(prob: &XiProblem, l0: i64) -> Result<UnitLimitCertificate> {
    if l0 < 2 {
        return Err(Error::InvalidArgument(format!("l0 must be >= 2, got {l0}")));
    }
    let k = prob.k_const();
    let deg = Rational::from_integer(prob.deg_kc);
    let base = Rational::new(1, l0 + 1) * (&deg + &Rational::from_integer(l0 + 1) - &k);
    let reached = xi_iterate(prob, l0 + 1, 64);
    let base_attained = reached.final_bound >= base;
    // alpha0 >= 2 along the whole induction
    let room = Rational::from_integer(l0) - &k >= 1;

    let (leading, constant, linear_ok) = if k.is_integer() {
        let leading = &deg - &k + 1;
        let constant = (Rational::one() - &k) * (&deg - &k);
        let at_l0 = &leading * &Rational::from_integer(l0) + &constant;
        let ok = !leading.is_negative() && at_l0.is_positive();
        (leading, constant, ok)
    } else {
        let ok = deg >= k;
        (Rational::zero(), &deg - &k, ok)
    };
    Ok(UnitLimitCertificate {
        l0,
        base,
        base_attained,
        leading,
        constant,
        holds: base_attained && room && linear_ok,
    })
}

pub fn xi_verify_unit_limit(prob: &XiProblem, l0: i64) -> bool {
    unit_limit_certificate(prob, l0).map(|c| c.holds).unwrap_or(false)
}

/// `K^3 >= p beta xi / m0`
pub fn volume_bound(p: i64, beta: &Rational, m0: i64, xi: &Rational) -> Rational {
    Rational::from_integer(p) * beta * xi / m0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preset {
    pub id: &'static str,
    pub case: &'static str,
    pub problem: XiProblem,
    pub schedule: Vec<i64>,
    pub unit_limit_l0: Option<i64>,
}

pub const PRESET_IDS: [&str; 8] = ["i-a", "i-b", "i-c", "i-d", "ii-a", "ii-b", "iii-a", "iii-b"];

pub fn preset(id: &str) -> Result<Preset> {
    let mk = |m0, p, beta: Rational, deg| XiProblem::new(m0, p, beta, deg).unwrap();
    let (case, problem, schedule, unit) = match id {
        "i-a" => ("P4>=5, dim B = 3", mk(4, 1, Rational::new(1, 4), 6), vec![11], None),
        "i-b" => ("P4>=5, dim B = 2", mk(4, 1, Rational::new(3, 4), 2), vec![10], None),
        "i-c" => ("P4>=5, dim B = 1, g(B) > 0", mk(4, 5, Rational::new(1, 4), 20), vec![], None),
        "i-d" => (
            "P4>=5, dim B = 1, g(B) = 0",
            mk(4, 4, Rational::new(1, 8), 18).open(),
            vec![11],
            None,
        ),
        "ii-a" => ("P5>=5, dim B >= 2, phi_5 generically finite", mk(5, 1, Rational::new(1, 5), 10), vec![13], Some(12)),
        "ii-b" => ("P5>=5, dim B = 2", mk(5, 1, Rational::new(3, 5), 2), vec![12, 11], None),
        "iii-a" => ("P5>=5, dim B = 1, g(B) > 0", mk(5, 5, Rational::new(1, 2), 6), vec![], None),
        "iii-b" => (
            "P5>=5, dim B = 1, g(B) = 0",
            mk(5, 4, Rational::new(2, 9), 6).open(),
            vec![8],
            None,
        ),
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    let id = PRESET_IDS.iter().find(|&&p| p == id).copied().expect("listed");
    Ok(Preset { id, case, problem, schedule, unit_limit_l0: unit })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresetRun {
    pub preset: String,
    pub xi: Rational,
    pub volume: Rational,
    pub trace: XiTrace,
}

/// Replays the preset's own schedule of levels `m` (not the greedy one).
pub fn run_preset(id: &str) -> Result<PresetRun> {
    let preset = preset(id)?;
    let prob = &preset.problem;
    let mut trace = XiTrace::starting_at(xi_limit(prob));
    for &m in &preset.schedule {
        let step = xi_step(prob, &trace.final_bound, m)?;
        if step.new_bound <= trace.final_bound {
            return Err(Error::NotApplicable(format!("step at m = {m} does not improve")));
        }
        trace.push(step);
    }
    if let Some(l0) = preset.unit_limit_l0 {
        let cert = unit_limit_certificate(prob, l0)?;
        trace.sup_certified =
            Some(SupCertificate { value: Rational::one(), certified: cert.holds, l0 });
    }
    let xi = trace.best().clone();
    Ok(PresetRun {
        preset: preset.id.to_string(),
        volume: volume_bound(prob.p, &prob.beta, prob.m0, &xi),
        xi,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ia() -> XiProblem {
        preset("i-a").unwrap().problem
    }

    #[test]
    fn limits() {
        assert_eq!(xi_limit(&ia()), Rational::new(2, 3));
        let p = XiProblem::new(4, 5, Rational::new(1, 4), 20).unwrap();
        assert_eq!(xi_limit(&p), Rational::new(100, 29));
        let p = XiProblem::new(5, 4, Rational::new(2, 9), 6).unwrap().open();
        assert_eq!(xi_limit(&p), Rational::new(8, 9));
    }

    #[test]
    fn steps() {
        let s = xi_step(&ia(), &Rational::new(2, 3), 11).unwrap();
        assert_eq!(s.alpha, Rational::new(4, 3));
        assert_eq!(s.alpha0, 2);
        assert_eq!(s.new_bound, Rational::new(8, 11));
        assert_eq!(s.condition_used, Condition::Alpha0Ge2);

        let p = XiProblem::new(5, 1, Rational::new(3, 5), 2).unwrap();
        let s = xi_step(&p, &Rational::new(1, 3), 11).unwrap();
        assert_eq!(s.alpha, Rational::new(10, 9));
        assert_eq!(s.new_bound, Rational::new(4, 11));

        let err = xi_step(&ia(), &Rational::new(2, 3), 6).unwrap_err();
        assert!(matches!(err, Error::NotApplicable(_)));
    }

    #[test]
    fn step_preconditions() {
        assert!(matches!(xi_step(&ia(), &Rational::zero(), 11), Err(Error::InvalidArgument(_))));
        assert!(matches!(xi_step(&ia(), &Rational::one(), 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn open_beta_boundary() {
        // K = 9, so alpha = (m - 9) xi = 1 at m = 10, xi = 1
        let one = Rational::one();
        let open = ia().open();
        assert!(matches!(xi_step(&open, &one, 10), Err(Error::NotApplicable(_))));
        assert!(matches!(xi_step(&open.clone().even(), &one, 10), Err(Error::NotApplicable(_))));
        assert!(matches!(xi_step(&ia(), &one, 10), Err(Error::NotApplicable(_))));
        let s = xi_step(&ia().even(), &one, 10).unwrap();
        assert_eq!(s.condition_used, Condition::EvenDivisor);
        assert_eq!(s.new_bound, Rational::new(7, 10));
    }

    #[test]
    fn greedy_i_a() {
        let t = xi_iterate(&ia(), 12, 50);
        let bounds: Vec<_> = t.steps.iter().map(|s| (s.m, s.new_bound.clone())).collect();
        assert_eq!(bounds, vec![(11, Rational::new(8, 11)), (12, Rational::new(3, 4))]);
        assert_eq!(t.final_bound, Rational::new(3, 4));
        assert!(best_step(&ia(), &t.final_bound, 12).is_none());
    }

    #[test]
    fn greedy_ii_a_reaches_99_100() {
        let p = preset("ii-a").unwrap().problem;
        let t = xi_iterate(&p, 100, 50);
        assert_eq!(t.final_bound, Rational::new(99, 100));
        let at_13 = xi_step(&p, &xi_limit(&p), 13).unwrap();
        assert_eq!(at_13.new_bound, Rational::new(12, 13));
    }

    #[test]
    fn greedy_without_applicable_step() {
        let p = XiProblem::new(4, 1, Rational::new(3, 4), 2).unwrap();
        let t = xi_iterate(&p, 4, 10);
        assert_eq!(t.start, Rational::new(6, 19));
        assert!(t.steps.is_empty());
        assert_eq!(t.final_bound, t.start);
    }

    #[test]
    fn unit_limit() {
        let ii_a = preset("ii-a").unwrap().problem;
        let cert = unit_limit_certificate(&ii_a, 12).unwrap();
        assert!(cert.holds);
        assert_eq!(cert.base, Rational::new(12, 13));
        assert!(!xi_verify_unit_limit(&ia(), 10));
        assert_eq!(unit_limit_certificate(&ia(), 10).unwrap().leading, Rational::from_integer(-2));

        // K = 1 + 2 + 1 = 4, deg = K - 1
        let p = XiProblem::new(2, 1, Rational::one(), 3).unwrap();
        assert!(xi_verify_unit_limit(&p, 5));
        // starting below K + 1 leaves alpha0 = 1 at the first step
        assert!(!xi_verify_unit_limit(&p, 4));
        assert!(!xi_verify_unit_limit(&p, 1));
    }

    #[test]
    fn volume_bounds() {
        let v = volume_bound(1, &Rational::new(1, 4), 4, &Rational::new(8, 11));
        assert_eq!(v, Rational::new(1, 22));
        let v = volume_bound(5, &Rational::new(1, 2), 5, &Rational::new(3, 2));
        assert_eq!(v, Rational::new(3, 4));
        assert!(volume_bound(3, &Rational::new(2, 7), 4, &Rational::zero()).is_zero());
    }

    #[test]
    fn presets() {
        let r = run_preset("i-d").unwrap();
        assert_eq!(r.xi, Rational::new(20, 11));
        assert_eq!(r.trace.steps[0].m, 11);
        assert_eq!(r.volume, Rational::new(5, 22));
        let r = run_preset("iii-b").unwrap();
        assert_eq!((r.xi, r.volume), (Rational::one(), Rational::new(8, 45)));
        assert_eq!(run_preset("z-9").unwrap_err(), Error::UnknownPreset("z-9".into()));
    }
}
