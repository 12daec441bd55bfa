//! Reid's plurigenus formula and its inversion at `m = 2, 3`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::basket::BasketSet;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Input of the plurigenus formula: `(K^3, chi(O_X), basket)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReidModel {
    pub k3: Rational,
    pub chi: i64,
    pub baskets: BasketSet,
}

impl ReidModel {
    pub fn new(k3: Rational, chi: i64, baskets: BasketSet) -> Self {
        ReidModel { k3, chi, baskets }
    }

    /// Same as [`ReidModel::new`] but insists on `K^3 > 0`.
    pub fn geometric(k3: Rational, chi: i64, baskets: BasketSet) -> Result<Self> {
        if !k3.is_positive() {
            return Err(Error::InvalidArgument(format!("K^3 = {k3} must be positive")));
        }
        Ok(ReidModel { k3, chi, baskets })
    }

    /// `P_m = m(m-1)(2m-1)/12 K^3 - (2m-1) chi + l(m)`, for `m >= 2`.
    ///
    /// The value is returned exactly; integrality is left to the caller.
    pub fn plurigenus(&self, m: i64) -> Result<Rational> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!(
                "plurigenus formula needs m >= 2, got {m}"
            )));
        }
        let poly = Rational::new(m * (m - 1) * (2 * m - 1), 12);
        Ok(&poly * &self.k3 - Rational::from_integer((2 * m - 1) * self.chi)
            + self.baskets.correction_sum(m))
    }

    pub fn pluri_table(&self, m_max: i64) -> Result<BTreeMap<i64, Rational>> {
        if m_max < 2 {
            return Err(Error::InvalidArgument(format!("m_max must be >= 2, got {m_max}")));
        }
        (2..=m_max).map(|m| Ok((m, self.plurigenus(m)?))).collect()
    }
}

pub fn plurigenus(model: &ReidModel, m: i64) -> Result<Rational> {
    model.plurigenus(m)
}

pub fn pluri_table(model: &ReidModel, m_max: i64) -> Result<BTreeMap<i64, Rational>> {
    model.pluri_table(m_max)
}

/// `sigma = sum b'` and the offset `c` in `sum b'^2/r = K^3 + c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearInvariants {
    pub sigma: i64,
    pub tau_offset: Rational,
}

/// Eliminates `K^3` between the `m = 2` and `m = 3` instances of the formula.
///
/// Both instances only see residues `b'` and `2b'`, which never wrap modulo `r`,
/// so they are linear in `sigma` and `tau`.
pub fn invert_p2_p3(p2: i64, p3: i64, chi: i64) -> Result<LinearInvariants> {
    let sigma = 5 * p2 - p3 + 10 * chi;
    if sigma < 0 {
        return Err(Error::Infeasible(format!(
            "P2={p2}, P3={p3}, chi={chi} force sum b' = {sigma} < 0"
        )));
    }
    Ok(LinearInvariants { sigma, tau_offset: Rational::from_integer(sigma - 2 * p2 - 6 * chi) })
}
