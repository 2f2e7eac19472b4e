//! Randomized exact verification over a prime field.
//!
//! Each routine specializes the "general" objects (linear forms, points) to
//! random ones over `F_p`, writes the defining conditions as a dense matrix in
//! the degree-`j` monomial basis, and reads the dimension off its rank.
//! Specialization can only raise a dimension, so every trial is at least the
//! generic value and the minimum over trials is reported.
//!
//! Vanishing to order `b` at a point is imposed through the partial
//! derivatives of order exactly `b - 1`. For `p > j` Euler's formula makes
//! the lower orders redundant, so the rank is the same as with all orders
//! below `b`.

use std::collections::{HashMap, HashSet};

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::binom;
use crate::linsys::{power_ideal_dual_system, LinearSystem};

/// `2^61 - 1`.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;
pub const DEFAULT_SEED: u64 = 0x5EED_0F1A_2C0D_E001;
pub const DEFAULT_TRIALS: u32 = 3;
/// Maximum `row_count * col_count` accepted by the dense oracle.
pub const DEFAULT_BUDGET: u128 = 400_000_000;

const RIGHT_SIDE_SALT: u64 = 0xD1B5_4A32_D192_ED03;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub prime: u64,
    pub seed: u64,
    pub trials: u32,
    pub budget: u128,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            prime: DEFAULT_PRIME,
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl OracleConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trials(mut self, trials: u32) -> Self {
        self.trials = trials.max(1);
        self
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_prime(mut self, prime: u64) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        self.prime = prime;
        Ok(self)
    }

    /// Seed for trial `index`; independent of how trials are scheduled.
    fn trial_rng(&self, index: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(u64::from(index));
        rng
    }
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let f = Field(n);
    'witness: for &a in &BASES {
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = f.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[derive(Debug, Clone, Copy)]
struct Field(u64);

impl Field {
    fn mul(self, a: u64, b: u64) -> u64 {
        ((u128::from(a) * u128::from(b)) % u128::from(self.0)) as u64
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.0 - (b - a)
        }
    }

    fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    fn inv(self, a: u64) -> u64 {
        self.pow(a, self.0 - 2)
    }
}

/// Incremental Gaussian elimination: rows are reduced on arrival against the
/// pivot rows collected so far, so memory stays at `rank * cols`.
struct RankAccumulator {
    field: Field,
    cols: usize,
    pivots: Vec<Option<Vec<u64>>>,
    rank: usize,
}

impl RankAccumulator {
    fn new(field: Field, cols: usize) -> Self {
        Self {
            field,
            cols,
            pivots: vec![None; cols],
            rank: 0,
        }
    }

    fn is_full(&self) -> bool {
        self.rank == self.cols
    }

    fn insert(&mut self, mut row: Vec<u64>) {
        let f = self.field;
        for c in 0..self.cols {
            if row[c] == 0 {
                continue;
            }
            match &self.pivots[c] {
                Some(pivot) => {
                    let factor = row[c];
                    for k in c..self.cols {
                        if pivot[k] != 0 {
                            row[k] = f.sub(row[k], f.mul(factor, pivot[k]));
                        }
                    }
                }
                None => {
                    let inv = f.inv(row[c]);
                    for v in row[c..].iter_mut() {
                        *v = f.mul(*v, inv);
                    }
                    self.pivots[c] = Some(row);
                    self.rank += 1;
                    return;
                }
            }
        }
    }
}

/// All exponent vectors of total degree `degree` in `vars` variables, in
/// lexicographic order.
fn monomials(vars: usize, degree: usize) -> Vec<Vec<u16>> {
    fn rec(vars: usize, left: usize, prefix: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if vars == 1 {
            prefix.push(left as u16);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e as u16);
            rec(vars - 1, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if vars > 0 {
        rec(vars, degree, &mut Vec::with_capacity(vars), &mut out);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankKind {
    PowerMultiples,
    FatPointInterpolation,
}

/// A matrix instance handed to the rank routine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankProblem {
    pub kind: RankKind,
    pub row_count: u128,
    pub col_count: u128,
    pub prime: u64,
    pub seed: u64,
    pub description: String,
}

impl RankProblem {
    fn check(&self, config: &OracleConfig, degree: i64) -> Result<()> {
        if u128::from(config.prime) <= degree.max(0) as u128 {
            return Err(Error::PrimeTooSmall {
                prime: config.prime,
                degree,
            });
        }
        let cells = self.row_count.saturating_mul(self.col_count);
        if cells > config.budget {
            return Err(Error::OracleBudget {
                cells,
                budget: config.budget,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub dimension: u64,
    pub trials: u32,
    pub per_trial_values: Vec<u64>,
    pub confidence_note: String,
    pub problem: RankProblem,
}

impl OracleResult {
    /// Whether every trial produced the same dimension.
    pub fn trials_agree(&self) -> bool {
        self.per_trial_values.windows(2).all(|w| w[0] == w[1])
    }
}

const CONFIDENCE_NOTE: &str =
    "special >= generic: each trial bounds the generic dimension from above; the minimum equals it with high probability";

fn to_u128(v: num_bigint::BigInt) -> u128 {
    v.to_u128().unwrap_or(u128::MAX)
}

fn finish(problem: RankProblem, config: &OracleConfig, per_trial_values: Vec<u64>) -> OracleResult {
    OracleResult {
        dimension: per_trial_values.iter().copied().min().unwrap_or(0),
        trials: config.trials,
        per_trial_values,
        confidence_note: CONFIDENCE_NOTE.to_string(),
        problem,
    }
}

/// `dim[R/(l_1^{a_1}, ..., l_s^{a_s})]_j` for random forms over `F_p`, `R` in
/// `N` variables. Rows are the coefficient vectors of `mu * l_i^{a_i}`.
pub fn random_power_quotient_dim(
    variable_count: usize,
    exponents: &[i64],
    degree: i64,
    config: &OracleConfig,
) -> Result<OracleResult> {
    if variable_count < 1 || degree < 0 || exponents.iter().any(|&a| a < 1) {
        return Err(Error::InvalidParameter(format!(
            "power quotient needs N >= 1, j >= 0, positive exponents (N = {variable_count}, j = {degree}, a = {exponents:?})"
        )));
    }
    let n = variable_count as i64;
    let active: Vec<i64> = exponents.iter().copied().filter(|&a| a <= degree).collect();
    let problem = RankProblem {
        kind: RankKind::PowerMultiples,
        row_count: active.iter().map(|&a| to_u128(binom(n - 1 + degree - a, n - 1))).sum(),
        col_count: to_u128(binom(n - 1 + degree, n - 1)),
        prime: config.prime,
        seed: config.seed,
        description: format!("powers {exponents:?} of random forms in {variable_count} variables, degree {degree}"),
    };
    problem.check(config, degree)?;

    let field = Field(config.prime);
    let basis = monomials(variable_count, degree as usize);
    let index: HashMap<&[u16], usize> = basis.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    let factorials = factorial_table(field, degree as usize);

    let per_trial = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = config.trial_rng(trial);
            let mut acc = RankAccumulator::new(field, basis.len());
            for &a in &active {
                let form: Vec<u64> = (0..variable_count).map(|_| rng.gen_range(0..field.0)).collect();
                let power = expand_power(field, &form, a as usize, &factorials);
                for mu in monomials(variable_count, (degree - a) as usize) {
                    if acc.is_full() {
                        break;
                    }
                    let mut row = vec![0u64; basis.len()];
                    let mut key = vec![0u16; variable_count];
                    for (alpha, coeff) in &power {
                        for i in 0..variable_count {
                            key[i] = mu[i] + alpha[i];
                        }
                        row[index[key.as_slice()]] = *coeff;
                    }
                    acc.insert(row);
                }
            }
            (basis.len() - acc.rank) as u64
        })
        .collect();
    Ok(finish(problem, config, per_trial))
}

fn factorial_table(field: Field, upto: usize) -> Vec<u64> {
    let mut f = vec![1 % field.0; upto + 1];
    for i in 1..=upto {
        f[i] = field.mul(f[i - 1], i as u64 % field.0);
    }
    f
}

/// `l^a` as (exponent vector, coefficient) pairs: multinomial coefficient
/// times the product of coefficient powers.
fn expand_power(field: Field, form: &[u64], a: usize, factorials: &[u64]) -> Vec<(Vec<u16>, u64)> {
    monomials(form.len(), a)
        .into_iter()
        .map(|alpha| {
            let mut coeff = factorials[a];
            for (i, &e) in alpha.iter().enumerate() {
                coeff = field.mul(coeff, field.inv(factorials[e as usize]));
                coeff = field.mul(coeff, field.pow(form[i], u64::from(e)));
            }
            (alpha, coeff)
        })
        .filter(|(_, c)| *c != 0)
        .collect()
}

/// Random points of `P^m(F_p)`, normalized so the last nonzero coordinate is
/// 1, pairwise distinct.
fn random_points(field: Field, rng: &mut ChaCha8Rng, ambient: usize, count: usize) -> Vec<Vec<u64>> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut p: Vec<u64> = (0..=ambient).map(|_| rng.gen_range(0..field.0)).collect();
        let Some(last) = p.iter().rposition(|&c| c != 0) else {
            continue;
        };
        let inv = field.inv(p[last]);
        for c in p.iter_mut() {
            *c = field.mul(*c, inv);
        }
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    out
}

/// Dimension of `L_m(j; b_1, ..., b_s)` at random points over `F_p`.
pub fn fatpoint_dim(
    ambient: i64,
    degree: i64,
    multiplicities: &[i64],
    config: &OracleConfig,
) -> Result<OracleResult> {
    let system = LinearSystem::new(ambient, degree, multiplicities.to_vec())?;
    fatpoint_dim_system(&system, config)
}

pub fn fatpoint_dim_system(system: &LinearSystem, config: &OracleConfig) -> Result<OracleResult> {
    let m = system.ambient_dim();
    let j = system.degree();
    // Order j+1 already kills every form of degree j.
    let orders: Vec<i64> = system.multiplicities().iter().map(|&b| b.min(j + 1)).collect();
    let problem = RankProblem {
        kind: RankKind::FatPointInterpolation,
        row_count: orders
            .iter()
            .filter(|&&b| b > 0)
            .map(|&b| to_u128(binom(m + b - 1, m)))
            .sum(),
        col_count: to_u128(system.monomial_count()),
        prime: config.prime,
        seed: config.seed,
        description: format!("{system} at random points"),
    };
    problem.check(config, j)?;

    let field = Field(config.prime);
    let vars = (m + 1) as usize;
    let basis = monomials(vars, j as usize);

    let per_trial = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = config.trial_rng(trial);
            let points = random_points(field, &mut rng, m as usize, orders.len());
            let mut acc = RankAccumulator::new(field, basis.len());
            for (point, &b) in points.iter().zip(&orders) {
                if b == 0 {
                    continue;
                }
                let powers: Vec<Vec<u64>> = point
                    .iter()
                    .map(|&c| {
                        let mut row = vec![1 % field.0; j as usize + 1];
                        for k in 1..row.len() {
                            row[k] = field.mul(row[k - 1], c);
                        }
                        row
                    })
                    .collect();
                for beta in monomials(vars, (b - 1) as usize) {
                    if acc.is_full() {
                        break;
                    }
                    let row = basis
                        .iter()
                        .map(|alpha| derivative_at(field, alpha, &beta, &powers))
                        .collect();
                    acc.insert(row);
                }
            }
            (basis.len() - acc.rank) as u64
        })
        .collect();
    Ok(finish(problem, config, per_trial))
}

/// `d^beta (x^alpha)` evaluated at the point whose coordinate powers are given.
fn derivative_at(field: Field, alpha: &[u16], beta: &[u16], powers: &[Vec<u64>]) -> u64 {
    let mut value = 1 % field.0;
    for i in 0..alpha.len() {
        let (a, b) = (alpha[i], beta[i]);
        if b > a {
            return 0;
        }
        for k in 0..b {
            value = field.mul(value, u64::from(a - k));
        }
        value = field.mul(value, powers[i][(a - b) as usize]);
        if value == 0 {
            return 0;
        }
    }
    value
}

/// Both sides of the power-ideal / fat-point duality, each from its own
/// oracle with independent seeds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityCheck {
    pub system: LinearSystem,
    pub power_side: OracleResult,
    pub fatpoint_side: OracleResult,
    pub agree: bool,
}

/// Checks `dim[R/(l_i^{a_i})]_j = dim L_{N-1}(j; j+1-a_i for a_i <= j)`.
pub fn duality_check(
    variable_count: usize,
    exponents: &[i64],
    degree: i64,
    config: &OracleConfig,
) -> Result<DualityCheck> {
    let system = power_ideal_dual_system(variable_count, exponents, degree)?;
    let power_side = random_power_quotient_dim(variable_count, exponents, degree, config)?;
    let right_config = config.with_seed(config.seed ^ RIGHT_SIDE_SALT);
    let fatpoint_side = fatpoint_dim_system(&system, &right_config)?;
    let agree = power_side.dimension == fatpoint_side.dimension;
    Ok(DualityCheck {
        system,
        power_side,
        fatpoint_side,
        agree,
    })
}
