//! Terminal quotient singularities `1/r(a,-a,1)` and their correction terms.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_integer::Integer;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{gcd, Rational};

/// One basket `1/r(a,-a,1)`.
///
/// `b` is the inverse of `a` modulo `r` and `b_reduced = min(b, r - b)`.
/// Identity, ordering and hashing use only `(r, b_reduced)`, the data the
/// correction term depends on.
#[derive(Clone, Copy)]
pub struct Basket {
    r: i64,
    a: i64,
    b: i64,
    b_reduced: i64,
}

fn inverse_mod(a: i64, r: i64) -> i64 {
    let eg = a.extended_gcd(&r);
    debug_assert_eq!(eg.gcd, 1);
    eg.x.rem_euclid(r)
}

impl Basket {
    /// Builds `1/r(a,-a,1)`; rejects `r < 2`, `a` outside `(0, r)` and `gcd(a, r) != 1`.
    pub fn new(r: i64, a: i64) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidBasket { r, a, reason: reason.to_string() };
        if r < 2 {
            return Err(invalid("index r must be at least 2"));
        }
        if a <= 0 || a >= r {
            return Err(invalid(&format!("weight a = {a} must satisfy 0 < a < r")));
        }
        if gcd(a, r) != 1 {
            return Err(invalid(&format!("weight a = {a} must be coprime to r")));
        }
        let b = inverse_mod(a, r);
        Ok(Basket { r, a, b, b_reduced: b.min(r - b) })
    }

    /// Builds the basket keyed by `(r, b_reduced)`, synthesizing `b = b_reduced`
    /// and `a` as its inverse.
    pub fn from_reduced(r: i64, b_reduced: i64) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidBasket {
                r,
                a: 0,
                reason: "index r must be at least 2".into(),
            });
        }
        if b_reduced < 1 || 2 * b_reduced > r {
            return Err(Error::InvalidBasket {
                r,
                a: 0,
                reason: format!("reduced inverse {b_reduced} must satisfy 1 <= b' <= r/2"),
            });
        }
        if gcd(b_reduced, r) != 1 {
            return Err(Error::InvalidBasket {
                r,
                a: 0,
                reason: format!("reduced inverse {b_reduced} must be coprime to r"),
            });
        }
        Basket::new(r, inverse_mod(b_reduced, r))
    }

    /// Builds the basket whose `b` (inverse of `a`) is given.
    pub fn from_inverse(r: i64, b: i64) -> Result<Self> {
        if r >= 2 && b > 0 && b < r && gcd(b, r) == 1 {
            Basket::new(r, inverse_mod(b, r))
        } else {
            Err(Error::InvalidBasket {
                r,
                a: 0,
                reason: format!("b = {b} must satisfy 0 < b < r and gcd(b, r) = 1"),
            })
        }
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn b_reduced(&self) -> i64 {
        self.b_reduced
    }

    pub fn key(&self) -> (i64, i64) {
        (self.r, self.b_reduced)
    }

    /// `l_Q(m) = sum_{j=1}^{m-1} s_j (r - s_j) / 2r` with `s_j` the least
    /// residue of `b j` modulo `r`.
    pub fn correction_term(&self, m: i64) -> Rational {
        let r = self.r;
        let numer: i64 = (1..m)
            .map(|j| {
                let s = (self.b * j).rem_euclid(r);
                s * (r - s)
            })
            .sum();
        Rational::new(numer, 2 * r)
    }
}

pub fn make_basket(r: i64, a: i64) -> Result<Basket> {
    Basket::new(r, a)
}

pub fn correction_term(q: &Basket, m: i64) -> Rational {
    q.correction_term(m)
}

impl PartialEq for Basket {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Basket {}

impl Hash for Basket {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for Basket {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Basket {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Debug for Basket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}({},-{},1)", self.r, self.a, self.a)
    }
}

#[derive(Serialize, Deserialize)]
struct BasketRepr {
    r: i64,
    b: i64,
    b_reduced: i64,
    a: i64,
}

impl Serialize for Basket {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BasketRepr { r: self.r, b: self.b, b_reduced: self.b_reduced, a: self.a }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Basket {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = BasketRepr::deserialize(deserializer)?;
        let q = Basket::new(repr.r, repr.a).map_err(D::Error::custom)?;
        if q.b != repr.b || q.b_reduced != repr.b_reduced {
            return Err(D::Error::custom(format!(
                "inconsistent basket: r={} a={} implies b={} b_reduced={}",
                q.r, q.a, q.b, q.b_reduced
            )));
        }
        Ok(q)
    }
}

/// A multiset of baskets kept sorted by `(r, b_reduced)`.
///
/// Serialized as the sorted list of `[r, b_reduced]` pairs.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasketSet {
    baskets: Vec<Basket>,
}

impl BasketSet {
    pub fn new(mut baskets: Vec<Basket>) -> Self {
        baskets.sort();
        BasketSet { baskets }
    }

    pub fn empty() -> Self {
        BasketSet::default()
    }

    /// Builds a set from `(r, b_reduced)` pairs.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self> {
        pairs
            .iter()
            .map(|&(r, b)| Basket::from_reduced(r, b))
            .collect::<Result<Vec<_>>>()
            .map(BasketSet::new)
    }

    pub fn baskets(&self) -> &[Basket] {
        &self.baskets
    }

    pub fn len(&self) -> usize {
        self.baskets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.baskets.is_empty()
    }

    pub fn pairs(&self) -> Vec<(i64, i64)> {
        self.baskets.iter().map(Basket::key).collect()
    }

    pub fn correction_sum(&self, m: i64) -> Rational {
        self.baskets.iter().map(|q| q.correction_term(m)).sum()
    }

    /// `sum b_reduced`
    pub fn sigma(&self) -> i64 {
        self.baskets.iter().map(Basket::b_reduced).sum()
    }

    /// `sum b_reduced^2 / r`
    pub fn tau(&self) -> Rational {
        self.baskets
            .iter()
            .map(|q| Rational::new(q.b_reduced * q.b_reduced, q.r))
            .sum()
    }
}

pub fn correction_sum(bs: &BasketSet, m: i64) -> Rational {
    bs.correction_sum(m)
}

impl FromIterator<Basket> for BasketSet {
    fn from_iter<I: IntoIterator<Item = Basket>>(iter: I) -> Self {
        BasketSet::new(iter.into_iter().collect())
    }
}

impl fmt::Debug for BasketSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.pairs()).finish()
    }
}

impl Serialize for BasketSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.pairs()
            .iter()
            .map(|&(r, b)| [r, b])
            .collect::<Vec<_>>()
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BasketSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[i64; 2]>::deserialize(deserializer)?;
        let pairs: Vec<(i64, i64)> = pairs.into_iter().map(|[r, b]| (r, b)).collect();
        BasketSet::from_pairs(&pairs).map_err(D::Error::custom)
    }
}
