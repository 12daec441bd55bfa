//! Invariants of weighted complete-intersection 3-folds `X_{d_1..d_c} ⊂ P(w_0..w_k)`.
//!
//! Quasi-smoothness is assumed throughout and never checked.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::basket::BasketSet;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::reid::ReidModel;

pub const QUASI_SMOOTH_ASSUMPTION: &str = "quasi-smoothness assumed, not verified";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedCI {
    pub weights: Vec<i64>,
    pub degrees: Vec<i64>,
}

impl WeightedCI {
    pub fn new(weights: Vec<i64>, degrees: Vec<i64>) -> Result<Self> {
        if weights.iter().chain(&degrees).any(|&x| x < 1) {
            return Err(Error::InvalidArgument("weights and degrees must be positive".into()));
        }
        if weights.len() != degrees.len() + 4 {
            return Err(Error::InvalidArgument(format!(
                "{} weights and {} degrees do not cut out a 3-fold",
                weights.len(),
                degrees.len()
            )));
        }
        Ok(WeightedCI { weights, degrees })
    }

    /// `sum d_j - sum w_i`
    pub fn canonical_amplitude(&self) -> i64 {
        self.degrees.iter().sum::<i64>() - self.weights.iter().sum::<i64>()
    }

    /// `alpha^3 prod d_j / prod w_i`
    pub fn canonical_volume(&self) -> Result<Rational> {
        let alpha = self.canonical_amplitude();
        if alpha < 1 {
            return Err(Error::NotGeneralType(alpha));
        }
        let num = self
            .degrees
            .iter()
            .fold(Rational::from_integer(alpha * alpha * alpha), |acc, &d| acc * d);
        Ok(self.weights.iter().fold(num, |acc, &w| acc / w))
    }

    /// Coefficients of `prod (1 - t^{d_j}) / prod (1 - t^{w_i})` through `t^upto`.
    pub fn hilbert_coeffs(&self, upto: usize) -> CoefficientTable {
        let mut c = vec![0i64; upto + 1];
        c[0] = 1;
        for &d in &self.degrees {
            let d = d as usize;
            for n in (d..=upto).rev() {
                c[n] -= c[n - d];
            }
        }
        for &w in &self.weights {
            let w = w as usize;
            for n in w..=upto {
                c[n] += c[n - w];
            }
        }
        CoefficientTable { values: c }
    }

    /// `P_m` read off the Hilbert series; only amplitude 1 is supported.
    pub fn plurigenera_from_hilbert(&self, m_max: i64) -> Result<BTreeMap<i64, i64>> {
        let alpha = self.canonical_amplitude();
        if alpha != 1 {
            return Err(Error::UnsupportedNormalization(alpha));
        }
        if m_max < 1 {
            return Err(Error::InvalidArgument(format!("m_max must be >= 1, got {m_max}")));
        }
        let table = self.hilbert_coeffs(m_max as usize);
        Ok((1..=m_max).map(|m| (m, table.values[m as usize])).collect())
    }

    /// Compares Reid's formula for the claimed basket against the Hilbert
    /// series for `2 <= m <= m_max`.
    pub fn reid_consistency(
        &self,
        claimed: &BasketSet,
        chi: i64,
        m_max: i64,
    ) -> Result<ConsistencyReport> {
        let hilbert = self.plurigenera_from_hilbert(m_max.max(1))?;
        let k3 = self.canonical_volume()?;
        let model = ReidModel::new(k3.clone(), chi, claimed.clone());
        let mut first_mismatch = None;
        for m in 2..=m_max {
            let reid = model.plurigenus(m)?;
            let h = hilbert[&m];
            if reid != h {
                first_mismatch = Some(Mismatch { m, hilbert: h, reid });
                break;
            }
        }
        Ok(ConsistencyReport {
            assumption: QUASI_SMOOTH_ASSUMPTION.to_string(),
            k3,
            chi,
            claimed: claimed.clone(),
            checked_through: m_max,
            pass: first_mismatch.is_none(),
            first_mismatch,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub values: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub m: i64,
    pub hilbert: i64,
    pub reid: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub assumption: String,
    pub k3: Rational,
    pub chi: i64,
    pub claimed: BasketSet,
    pub checked_through: i64,
    pub pass: bool,
    pub first_mismatch: Option<Mismatch>,
}

pub fn canonical_amplitude(x: &WeightedCI) -> i64 {
    x.canonical_amplitude()
}

pub fn canonical_volume(x: &WeightedCI) -> Result<Rational> {
    x.canonical_volume()
}

pub fn hilbert_coeffs(x: &WeightedCI, upto: usize) -> CoefficientTable {
    x.hilbert_coeffs(upto)
}

pub fn plurigenera_from_hilbert(x: &WeightedCI, m_max: i64) -> Result<BTreeMap<i64, i64>> {
    x.plurigenera_from_hilbert(m_max)
}

pub fn reid_consistency(
    x: &WeightedCI,
    claimed: &BasketSet,
    chi: i64,
    m_max: i64,
) -> Result<ConsistencyReport> {
    x.reid_consistency(claimed, chi, m_max)
}

/// `X_28 ⊂ P(1,3,4,5,14)`
pub fn x28() -> WeightedCI {
    WeightedCI::new(vec![1, 3, 4, 5, 14], vec![28]).unwrap()
}

/// `X_21 ⊂ P(1,3,4,5,7)`
pub fn x21() -> WeightedCI {
    WeightedCI::new(vec![1, 3, 4, 5, 7], vec![21]).unwrap()
}

/// `X_{12,15} ⊂ P(1,3,4,5,6,7)`
pub fn x12_15() -> WeightedCI {
    WeightedCI::new(vec![1, 3, 4, 5, 6, 7], vec![12, 15]).unwrap()
}
