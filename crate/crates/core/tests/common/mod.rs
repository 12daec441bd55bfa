//! Brute-force basket oracle shared by the integration tests.
//!
//! Walks every multiset of `(r, b')` pairs up to a size and index bound and
//! evaluates the plurigenus formula term by term. It never looks at
//! `sum b'` or `sum b'^2/r`, so it is independent of the branch-and-bound.

#![allow(dead_code)]

use std::collections::BTreeMap;

use k3bound::Rational;

/// `sum_{j<m} s_j (r - s_j) / 2r`, residues reduced by repeated subtraction.
pub fn correction(r: i64, b: i64, m: i64) -> Rational {
    let mut total = Rational::zero();
    for j in 1..m {
        let mut s = b * j;
        while s >= r {
            s -= r;
        }
        total += Rational::new(s * (r - s), 2 * r);
    }
    total
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn pairs_upto(r_max: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for r in 2..=r_max {
        for b in 1..=r / 2 {
            if gcd(b, r) == 1 {
                out.push((r, b));
            }
        }
    }
    out
}

fn multisets(items: &[(i64, i64)], max_size: usize) -> Vec<Vec<(i64, i64)>> {
    fn go(items: &[(i64, i64)], start: usize, left: usize, cur: &mut Vec<(i64, i64)>, out: &mut Vec<Vec<(i64, i64)>>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, 0, max_size, &mut Vec::new(), &mut out);
    out
}

/// `P_m` evaluated straight from the formula.
pub fn plurigenus(k3: &Rational, chi: i64, baskets: &[(i64, i64)], m: i64) -> Rational {
    let poly = Rational::new(m * (m - 1) * (2 * m - 1), 12) * k3;
    let corr: Rational = baskets.iter().map(|&(r, b)| correction(r, b, m)).sum();
    poly - Rational::from_integer((2 * m - 1) * chi) + corr
}

/// All `(sorted pairs, K^3)` with `K^3 > 0`, prescribed `P_2, P_3`, integral
/// `P_m` through `m_top` and matching filters.
pub fn brute_force(
    chi: i64,
    p2: i64,
    p3: i64,
    filters: &BTreeMap<i64, i64>,
    r_max: i64,
    max_size: usize,
) -> Vec<(Vec<(i64, i64)>, Rational)> {
    let m_top = filters.keys().copied().max().unwrap_or(0).max(5);
    let mut out = Vec::new();
    for set in multisets(&pairs_upto(r_max), max_size) {
        // P_2 = K/2 - 3 chi + l(2) pins K^3
        let l2: Rational = set.iter().map(|&(r, b)| correction(r, b, 2)).sum();
        let k3 = (Rational::from_integer(p2 + 3 * chi) - l2) * 2;
        if !k3.is_positive() {
            continue;
        }
        let ok = (2..=m_top).all(|m| {
            let v = plurigenus(&k3, chi, &set, m);
            let want = match m {
                2 => Some(p2),
                3 => Some(p3),
                _ => filters.get(&m).copied(),
            };
            v.is_integer() && want.is_none_or(|w| v == w)
        });
        if ok {
            let mut set = set;
            set.sort();
            out.push((set, k3));
        }
    }
    out.sort();
    out
}
