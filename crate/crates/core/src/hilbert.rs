//! Hilbert functions of quotients by powers of general linear forms.
//!
//! Everything here is driven by one generating function: the coefficients of
//! `prod_i (1 - t^{a_i}) / (1 - t)^N`. For `#a <= N` (a complete
//! intersection) those coefficients are the Hilbert function itself; for more
//! forms they are the generic-series prediction, truncated at the first
//! non-positive coefficient.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{binom, pos_part_big};

/// The ideal `(L_0^d, ..., L_{2n+1}^d)` in `2n+1` variables, together with
/// its critical degree `j = floor((2n^2 - 1)(d - 1) / (2n - 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformPowerIdeal {
    n: i64,
    d: i64,
    j: i64,
}

impl UniformPowerIdeal {
    pub fn new(n: i64, d: i64) -> Result<Self> {
        let j = critical_degree(n, d)?;
        Ok(Self { n, d, j })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn critical_degree(&self) -> i64 {
        self.j
    }

    pub fn variable_count(&self) -> usize {
        (2 * self.n + 1) as usize
    }

    pub fn generator_count(&self) -> usize {
        (2 * self.n + 2) as usize
    }

    /// `dim[R/I]_j - dim[R/I]_{j-1}` at the critical degree.
    pub fn first_difference(&self) -> BigInt {
        first_difference_at(self.n, self.d, self.j)
    }
}

pub fn critical_degree(n: i64, d: i64) -> Result<i64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    if d < 1 {
        return Err(Error::InvalidParameter(format!("d must be at least 1, got {d}")));
    }
    Ok(Integer::div_floor(&((2 * n * n - 1) * (d - 1)), &(2 * n - 1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HilbertKind {
    CompleteIntersection,
    FrobergTruncated,
    LowerBoundChain,
}

/// Values of a Hilbert function (or a bound on one) indexed by degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertTable {
    pub variable_count: usize,
    pub exponents: Vec<i64>,
    pub values: Vec<BigInt>,
    pub kind: HilbertKind,
}

impl HilbertTable {
    pub fn get(&self, degree: i64) -> BigInt {
        usize::try_from(degree)
            .ok()
            .and_then(|t| self.values.get(t).cloned())
            .unwrap_or_else(BigInt::zero)
    }
}

type SeriesKey = (usize, Vec<i64>);

fn series_memo() -> &'static RwLock<HashMap<SeriesKey, Arc<Vec<BigInt>>>> {
    static MEMO: OnceLock<RwLock<HashMap<SeriesKey, Arc<Vec<BigInt>>>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Coefficients `0..=upto` of `prod_i (1 - t^{a_i}) / (1 - t)^N`.
///
/// Memoized per `(N, sorted exponents)`; a longer cached table serves any
/// shorter request.
pub fn series_coefficients(variable_count: usize, exponents: &[i64], upto: i64) -> Arc<Vec<BigInt>> {
    let mut key_exps = exponents.to_vec();
    key_exps.sort_unstable();
    let key = (variable_count, key_exps);
    let len = usize::try_from(upto + 1).unwrap_or(0);
    if let Some(hit) = series_memo().read().expect("series memo poisoned").get(&key) {
        if hit.len() >= len {
            return Arc::clone(hit);
        }
    }
    let table = Arc::new(compute_series(variable_count, exponents, len));
    let mut memo = series_memo().write().expect("series memo poisoned");
    let entry = memo.entry(key).or_insert_with(|| Arc::clone(&table));
    if entry.len() < table.len() {
        *entry = Arc::clone(&table);
    }
    table
}

fn compute_series(variable_count: usize, exponents: &[i64], len: usize) -> Vec<BigInt> {
    if len == 0 {
        return Vec::new();
    }
    let mut g = vec![BigInt::zero(); len];
    g[0] = BigInt::one();
    for &a in exponents {
        let a = a as usize;
        // Multiply by (1 - t^a), high degrees first so g[i - a] is still old.
        for i in (a..len).rev() {
            let sub = g[i - a].clone();
            g[i] -= sub;
        }
    }
    for _ in 0..variable_count {
        for i in 1..len {
            let prev = g[i - 1].clone();
            g[i] += prev;
        }
    }
    g
}

fn check_exponents(exponents: &[i64]) -> Result<()> {
    match exponents.iter().find(|&&a| a < 1) {
        Some(a) => Err(Error::InvalidParameter(format!("exponents must be positive, got {a}"))),
        None => Ok(()),
    }
}

/// Hilbert function at `degree` of `k[x_1..x_N] / (l_1^{a_1}, ..., l_m^{a_m})`
/// for general forms with `m <= N`. Negative degrees give 0.
pub fn ci_hilbert(variable_count: usize, exponents: &[i64], degree: i64) -> Result<BigInt> {
    if variable_count < 1 {
        return Err(Error::InvalidParameter("need at least one variable".into()));
    }
    if exponents.len() > variable_count {
        return Err(Error::NotCompleteIntersection {
            variables: variable_count,
            exponents: exponents.len(),
        });
    }
    check_exponents(exponents)?;
    if degree < 0 {
        return Ok(BigInt::zero());
    }
    Ok(series_coefficients(variable_count, exponents, degree)[degree as usize].clone())
}

/// Full h-vector of an artinian complete intersection (`#a == N`), through
/// the socle degree `sum(a_i - 1)`.
pub fn ci_table(variable_count: usize, exponents: &[i64]) -> Result<HilbertTable> {
    if exponents.len() != variable_count {
        return Err(Error::NotCompleteIntersection {
            variables: variable_count,
            exponents: exponents.len(),
        });
    }
    check_exponents(exponents)?;
    let socle: i64 = exponents.iter().map(|a| a - 1).sum();
    let values = series_coefficients(variable_count, exponents, socle)[..=socle as usize].to_vec();
    Ok(HilbertTable {
        variable_count,
        exponents: exponents.to_vec(),
        values,
        kind: HilbertKind::CompleteIntersection,
    })
}

fn check_froberg(variable_count: usize, form_count: usize, exponent: i64) -> Result<()> {
    if variable_count < 1 || form_count < 1 || exponent < 1 {
        return Err(Error::InvalidParameter(format!(
            "generic series needs N, s, d >= 1 (got N = {variable_count}, s = {form_count}, d = {exponent})"
        )));
    }
    Ok(())
}

/// Generic-series value `[(1 - t^d)^s / (1 - t)^N]` at `degree`, truncated at
/// the first non-positive coefficient (zero from there on).
pub fn froberg_hf(variable_count: usize, form_count: usize, exponent: i64, degree: i64) -> Result<BigInt> {
    check_froberg(variable_count, form_count, exponent)?;
    if degree < 0 {
        return Ok(BigInt::zero());
    }
    let table = froberg_table(variable_count, form_count, exponent, degree)?;
    Ok(table.get(degree))
}

/// Truncated generic series for degrees `0..=max_degree`.
pub fn froberg_table(
    variable_count: usize,
    form_count: usize,
    exponent: i64,
    max_degree: i64,
) -> Result<HilbertTable> {
    check_froberg(variable_count, form_count, exponent)?;
    let exponents = vec![exponent; form_count];
    let coeffs = series_coefficients(variable_count, &exponents, max_degree);
    let mut values = Vec::with_capacity(coeffs.len());
    let mut alive = true;
    for c in coeffs.iter().take(usize::try_from(max_degree + 1).unwrap_or(0)) {
        alive &= c.is_positive();
        values.push(if alive { c.clone() } else { BigInt::zero() });
    }
    Ok(HilbertTable {
        variable_count,
        exponents,
        values,
        kind: HilbertKind::FrobergTruncated,
    })
}

fn split_aci(variable_count: usize, exponents: &[i64]) -> Result<(&[i64], i64)> {
    if exponents.len() != variable_count + 1 {
        return Err(Error::WrongExponentCount {
            expected: variable_count + 1,
            got: exponents.len(),
        });
    }
    check_exponents(exponents)?;
    let (last, ci) = exponents.split_last().expect("nonempty");
    Ok((ci, *last))
}

/// Whether `2j <= a_last + sum_{i < N} (a_i - 1)`, the range where the
/// positive parts in [`aci_delta_general`] can be dropped.
pub fn aci_simplification_applies(variable_count: usize, exponents: &[i64], degree: i64) -> Result<bool> {
    let (ci, last) = split_aci(variable_count, exponents)?;
    let socle: i64 = ci.iter().map(|a| a - 1).sum();
    Ok(2 * degree <= last + socle)
}

/// `[h_A(j) - h_A(j-a)]_+ - [h_A(j-1) - h_A(j-a-1)]_+`, with `A` the complete
/// intersection on all but the last exponent and `a` the last exponent.
pub fn aci_delta_general(variable_count: usize, exponents: &[i64], degree: i64) -> Result<BigInt> {
    let (ci, a) = split_aci(variable_count, exponents)?;
    let h = |t: i64| ci_hilbert(variable_count, ci, t);
    let upper = pos_part_big(&(h(degree)? - h(degree - a)?));
    let lower = pos_part_big(&(h(degree - 1)? - h(degree - a - 1)?));
    Ok(upper - lower)
}

/// `[h_A(j) - h_A(j-1)] - [h_A(j-a) - h_A(j-a-1)]`; equals the general form
/// whenever [`aci_simplification_applies`].
pub fn aci_delta_simplified(variable_count: usize, exponents: &[i64], degree: i64) -> Result<BigInt> {
    let (ci, a) = split_aci(variable_count, exponents)?;
    let h = |t: i64| ci_hilbert(variable_count, ci, t);
    Ok((h(degree)? - h(degree - 1)?) - (h(degree - a)? - h(degree - a - 1)?))
}

/// `dim[R/I]_j - dim[R/I]_{j-1}` for `N+1` powers of general forms in `N`
/// variables. May be negative.
pub fn aci_delta(variable_count: usize, exponents: &[i64], degree: i64) -> Result<BigInt> {
    if aci_simplification_applies(variable_count, exponents, degree)? {
        aci_delta_simplified(variable_count, exponents, degree)
    } else {
        aci_delta_general(variable_count, exponents, degree)
    }
}

fn first_difference_at(n: i64, d: i64, j: i64) -> BigInt {
    let mut sum = BigInt::zero();
    for k in 0..=n {
        let term = binom(2 * n + 2, k) * binom(2 * n - 1 + j - k * d, 2 * n - 1);
        if k.is_even() {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// `E = sum_{k=0}^{n} (-1)^k C(2n+2, k) C(2n-1+j-kd, 2n-1)` at the critical
/// degree `j`.
pub fn aci_first_difference(n: i64, d: i64) -> Result<BigInt> {
    Ok(UniformPowerIdeal::new(n, d)?.first_difference())
}

fn require_n(n: i64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    Ok(())
}

/// `S_n = sum_{k=0}^{n} (-1)^k C(2n+2, k) C(5n-4k, 2n-1)`, the first
/// difference for `d = 4`.
pub fn s_sequence(n: i64) -> Result<BigInt> {
    require_n(n)?;
    let mut sum = BigInt::zero();
    for k in 0..=n {
        let term = binom(2 * n + 2, k) * binom(5 * n - 4 * k, 2 * n - 1);
        if k.is_even() {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum)
}

/// `c_n = sum_{k=0}^{n} (-1)^k C(2n+2, k) (2n^2 - 1 - (2n-1)k)^{2n-1}`.
pub fn c_sequence(n: i64) -> Result<BigInt> {
    require_n(n)?;
    let power = (2 * n - 1) as u32;
    let mut sum = BigInt::zero();
    for k in 0..=n {
        let base = BigInt::from(2 * n * n - 1 - (2 * n - 1) * k);
        let term = binom(2 * n + 2, k) * Pow::pow(&base, power);
        if k.is_even() {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum)
}

/// `dim[P]_t = C(2n, t) - C(2n, t-2)` for `P` the quotient of `2n` variables
/// by `2n+1` general squares, valid for `0 <= t <= n`.
pub fn squares_quotient_hf(n: i64, t: i64) -> Result<BigInt> {
    if t < 0 || t > n {
        return Err(Error::SquaresRange { n, t });
    }
    Ok(binom(2 * n, t) - binom(2 * n, t - 2))
}

/// `h_P(i) - 2 h_P(i-s) + h_P(i-2s)` with `P` the complete intersection of
/// `2n` `s`-th powers in `2n` variables. Bounds from below the dimension in
/// degree `i` of the quotient by `2n+2` general `s`-th powers, as long as
/// `i` lies in the range where both differences are non-negative.
pub fn power_quotient_lower_bound(twice_n: usize, s: i64, i: i64) -> Result<BigInt> {
    let exps = vec![s; twice_n];
    let h = |t: i64| ci_hilbert(twice_n, &exps, t);
    Ok(h(i)? - BigInt::from(2) * h(i - s)? + h(i - 2 * s)?)
}

/// `h_Q(i) - h_Q(i-s)` with `Q` the quotient of `2n` variables by `2n+1`
/// general `s`-th powers. `h_Q` is exact here (a complete intersection plus
/// one power, so `h_Q = [h_P - h_P(. - s)]_+`), and the result bounds from
/// below the degree-`i` dimension of the quotient by `2n+2` such powers.
pub fn power_quotient_chain_bound(twice_n: usize, s: i64, i: i64) -> Result<BigInt> {
    let h = |t: i64| froberg_hf(twice_n, twice_n + 1, s, t);
    Ok(h(i)? - h(i - s)?)
}

/// Table of [`power_quotient_chain_bound`] for degrees `0..=max_degree`.
pub fn chain_bound_table(twice_n: usize, s: i64, max_degree: i64) -> Result<HilbertTable> {
    let values = (0..=max_degree)
        .map(|i| power_quotient_chain_bound(twice_n, s, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(HilbertTable {
        variable_count: twice_n,
        exponents: vec![s; twice_n + 2],
        values,
        kind: HilbertKind::LowerBoundChain,
    })
}
