//! Linear systems of fat points `L_m(j; b_1, ..., b_s)`: degree-`j` forms on
//! projective `m`-space vanishing to order `b_i` at `s` general points.
//!
//! Text syntax is `L_m(j; b1^e1, b2^e2, ...)` where a superscript repeats an
//! entry. Zero multiplicities are kept, both internally and in the printed
//! form, so every system produced by a Cremona trace round-trips.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::binom;
use crate::hilbert::{critical_degree, power_quotient_chain_bound, squares_quotient_hf};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearSystem {
    ambient_dim: i64,
    degree: i64,
    multiplicities: Vec<i64>,
}

impl LinearSystem {
    pub fn new(ambient_dim: i64, degree: i64, multiplicities: Vec<i64>) -> Result<Self> {
        if ambient_dim < 1 {
            return Err(Error::InvalidParameter(format!(
                "ambient dimension must be at least 1, got {ambient_dim}"
            )));
        }
        if degree < 0 {
            return Err(Error::InvalidParameter(format!("degree must be non-negative, got {degree}")));
        }
        if let Some(b) = multiplicities.iter().find(|&&b| b < 0) {
            return Err(Error::InvalidParameter(format!("multiplicity must be non-negative, got {b}")));
        }
        Ok(Self {
            ambient_dim,
            degree,
            multiplicities,
        })
    }

    /// `s` points, all with multiplicity `b`.
    pub fn uniform(ambient_dim: i64, degree: i64, b: i64, s: usize) -> Result<Self> {
        Self::new(ambient_dim, degree, vec![b; s])
    }

    pub fn ambient_dim(&self) -> i64 {
        self.ambient_dim
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn multiplicities(&self) -> &[i64] {
        &self.multiplicities
    }

    pub fn point_count(&self) -> usize {
        self.multiplicities.len()
    }

    /// Same system with multiplicities in descending order.
    pub fn sorted(&self) -> Self {
        let mut out = self.clone();
        out.multiplicities.sort_by(|a, b| b.cmp(a));
        out
    }

    /// Equal ambient space, degree, and multiset of multiplicities.
    pub fn same_system(&self, other: &Self) -> bool {
        self.sorted() == other.sorted()
    }

    /// `C(m+j, m)`, the number of degree-`j` monomials.
    pub fn monomial_count(&self) -> BigInt {
        binom(self.ambient_dim + self.degree, self.ambient_dim)
    }

    /// Common multiplicity, if every point carries the same one.
    pub fn uniform_multiplicity(&self) -> Option<i64> {
        let first = *self.multiplicities.first()?;
        self.multiplicities.iter().all(|&b| b == first).then_some(first)
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L_{}({}", self.ambient_dim, self.degree)?;
        let mut groups: Vec<(i64, usize)> = Vec::new();
        for &b in &self.multiplicities {
            match groups.last_mut() {
                Some((value, count)) if *value == b => *count += 1,
                _ => groups.push((b, 1)),
            }
        }
        for (i, (value, count)) in groups.iter().enumerate() {
            f.write_str(if i == 0 { "; " } else { ", " })?;
            if *count == 1 {
                write!(f, "{value}")?;
            } else {
                write!(f, "{value}^{count}")?;
            }
        }
        f.write_str(")")
    }
}

impl FromStr for LinearSystem {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let fail = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let int = |s: &str, what: &str| -> Result<i64> {
            s.trim()
                .parse::<i64>()
                .map_err(|_| fail(&format!("bad {what} {:?}", s.trim())))
        };
        let s = input.trim();
        let rest = s.strip_prefix("L_").ok_or_else(|| fail("expected prefix \"L_\""))?;
        let open = rest.find('(').ok_or_else(|| fail("missing \"(\""))?;
        let body = rest[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| fail("missing closing \")\""))?;
        let ambient = int(&rest[..open], "ambient dimension")?;
        let (degree_text, list) = match body.split_once(';') {
            Some((d, l)) => (d, l),
            None => (body, ""),
        };
        let degree = int(degree_text, "degree")?;
        let mut multiplicities = Vec::new();
        for item in list.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            match item.split_once('^') {
                Some((value, count)) => {
                    let value = int(value, "multiplicity")?;
                    let count = int(count, "repetition count")?;
                    if count < 0 {
                        return Err(fail("negative repetition count"));
                    }
                    multiplicities.extend(std::iter::repeat(value).take(count as usize));
                }
                None => multiplicities.push(int(item, "multiplicity")?),
            }
        }
        LinearSystem::new(ambient, degree, multiplicities).map_err(|e| fail(&e.to_string()))
    }
}

/// `max{0, C(m+j, m) - sum_i C(m+b_i-1, m)}`, a lower bound on the dimension.
pub fn virtual_dim(system: &LinearSystem) -> BigInt {
    let m = system.ambient_dim;
    let conditions: BigInt = system
        .multiplicities
        .iter()
        .map(|&b| binom(m + b - 1, m))
        .sum();
    let v = system.monomial_count() - conditions;
    if v.is_negative() {
        BigInt::zero()
    } else {
        v
    }
}

/// `t = (m-1) j - (b_1 + ... + b_{m+1})` on the sorted multiplicities.
pub fn cremona_t(system: &LinearSystem) -> Result<i64> {
    let m = system.ambient_dim;
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "Cremona transformation needs ambient dimension at least 2, got {m}"
        )));
    }
    if system.point_count() as i64 <= m {
        return Err(Error::NeedsMorePoints {
            ambient: m,
            points: system.point_count(),
        });
    }
    let sorted = system.sorted();
    let top: i64 = sorted.multiplicities[..=m as usize].iter().sum();
    Ok((m - 1) * system.degree - top)
}

/// One standard Cremona transformation based at the `m+1` points of highest
/// multiplicity. Preserves the dimension of the system.
pub fn cremona_step(system: &LinearSystem) -> Result<LinearSystem> {
    let t = cremona_t(system)?;
    let mut next = system.sorted();
    let m = next.ambient_dim as usize;
    for (index, b) in next.multiplicities[..=m].iter_mut().enumerate() {
        if *b + t < 0 {
            return Err(Error::CremonaIllegal { index, value: *b + t });
        }
        *b += t;
    }
    if next.degree + t < 0 {
        return Err(Error::CremonaNegativeDegree(next.degree + t));
    }
    next.degree += t;
    Ok(next.sorted())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "reason", content = "detail")]
pub enum StopReason {
    /// `t >= 0`: another step would not lower the degree.
    NonNegativeT,
    /// The next step violates the legality guard.
    Illegal(String),
    /// Too few points or ambient dimension below 2.
    NotApplicable(String),
}

/// Systems visited by [`cremona_reduce`]. `steps` holds every system at which
/// a step was applied, with its (negative) `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CremonaTrace {
    pub steps: Vec<(LinearSystem, i64)>,
    pub final_system: LinearSystem,
    pub final_t: Option<i64>,
    pub stop: StopReason,
}

impl CremonaTrace {
    pub fn applied_steps(&self) -> usize {
        self.steps.len()
    }
}

/// Applies Cremona steps while `t < 0` and the step is legal.
///
/// Terminates because every applied step strictly lowers the degree.
pub fn cremona_reduce(system: &LinearSystem) -> (LinearSystem, CremonaTrace) {
    let mut current = system.sorted();
    let mut steps = Vec::new();
    let (final_t, stop) = loop {
        let t = match cremona_t(&current) {
            Ok(t) => t,
            Err(e) => break (None, StopReason::NotApplicable(e.to_string())),
        };
        if t >= 0 {
            break (Some(t), StopReason::NonNegativeT);
        }
        match cremona_step(&current) {
            Ok(next) => {
                steps.push((current, t));
                current = next;
            }
            Err(e) => break (Some(t), StopReason::Illegal(e.to_string())),
        }
    };
    let trace = CremonaTrace {
        steps,
        final_system: current.clone(),
        final_t,
        stop,
    };
    (current, trace)
}

/// The fat-point system computing `dim[R/(l_1^{a_1}, ..., l_s^{a_s}, l)]_j` in
/// `N` variables: `L_{N-2}(j; j+1-a_1, ..., j+1-a_s)`, dropping `a_i > j`.
pub fn restricted_power_system(variable_count: usize, exponents: &[i64], degree: i64) -> Result<LinearSystem> {
    if variable_count < 3 {
        return Err(Error::InvalidParameter(format!(
            "restriction needs at least 3 variables, got {variable_count}"
        )));
    }
    dual_system(variable_count as i64 - 2, exponents, degree)
}

/// The fat-point system computing `dim[R/(l_1^{a_1}, ..., l_s^{a_s})]_j` in
/// `N` variables: `L_{N-1}(j; j+1-a_i for a_i <= j)`.
pub fn power_ideal_dual_system(variable_count: usize, exponents: &[i64], degree: i64) -> Result<LinearSystem> {
    if variable_count < 2 {
        return Err(Error::InvalidParameter(format!(
            "duality needs at least 2 variables, got {variable_count}"
        )));
    }
    dual_system(variable_count as i64 - 1, exponents, degree)
}

fn dual_system(ambient: i64, exponents: &[i64], degree: i64) -> Result<LinearSystem> {
    let threshold = exponents.iter().copied().max().unwrap_or(0) - 1;
    if degree < threshold {
        return Err(Error::BelowDualityThreshold { degree, threshold });
    }
    let multiplicities = exponents
        .iter()
        .filter(|&&a| a <= degree)
        .map(|&a| degree + 1 - a)
        .collect();
    LinearSystem::new(ambient, degree, multiplicities)
}

/// The reduced system `dim[R/(I, l)]_j` collapses to, with the decomposition
/// of `d` that selects it.
///
/// `case` is 1 for `d = (2n-1)e + 1`, 2 for `d = (2n-1)e + 2r`, and 3 for
/// `d = (2n-1)e + 2r + 1`, with `1 <= r <= n-1` (and `r = 0` in case 1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem31System {
    pub n: i64,
    pub d: i64,
    pub j: i64,
    pub case: u8,
    pub e: i64,
    pub r: i64,
    pub system: LinearSystem,
    pub note: Option<String>,
}

/// Closed form of the Cremona reduction of `L_{2n-1}(j; (j+1-d)^{2n+2})`.
///
/// The case is read off the residue `q` of `d - 1` modulo `2n - 1`: `q = 0`
/// is case 1, odd `q` is case 2 with `r = (q+1)/2`, even `q > 0` is case 3
/// with `r = q/2`. So `d ≡ 0 (mod 2n-1)` lands in case 3 with `r = n-1`.
pub fn theorem31_system(n: i64, d: i64) -> Result<Theorem31System> {
    let j = critical_degree(n, d)?;
    let modulus = 2 * n - 1;
    let (e, q) = ((d - 1) / modulus, (d - 1) % modulus);
    let points = (2 * n + 2) as usize;
    let ambient = 2 * n - 1;
    let base = (2 * n * n - 1) * e;
    let (case, r, j_formula, system, note) = if q == 0 {
        let note = (e >= 1).then(|| {
            format!(
                "d = (2n-1)(e-1) + 2n: also the r = n form of case 2 with e = {}",
                e - 1
            )
        });
        (1, 0, base, LinearSystem::uniform(ambient, e, 0, points)?, note)
    } else if q % 2 == 1 {
        let r = (q + 1) / 2;
        let sys = LinearSystem::uniform(ambient, e + n - r + 1, n - r, points)?;
        (2, r, base + 2 * n * r + r - n - 1, sys, None)
    } else {
        let r = q / 2;
        let sys = LinearSystem::uniform(ambient, e + 2 * n - r + 1, 2 * n - r - 1, points)?;
        let note = (r == n - 1).then(|| "d ≡ 0 (mod 2n-1): routed as case 3 with r = n-1".to_string());
        (3, r, base + 2 * n * r + r - 1, sys, note)
    };
    if j_formula != j {
        return Err(Error::InvalidParameter(format!(
            "internal: case {case} degree formula gives {j_formula}, critical degree is {j}"
        )));
    }
    Ok(Theorem31System {
        n,
        d,
        j,
        case,
        e,
        r,
        system,
        note,
    })
}

/// The unreduced system `L_{2n-1}(j; (j+1-d)^{2n+2})` for `dim[R/(I, l)]_j`.
pub fn initial_dual_system(n: i64, d: i64) -> Result<LinearSystem> {
    let j = critical_degree(n, d)?;
    restricted_power_system((2 * n + 1) as usize, &vec![d; (2 * n + 2) as usize], j)
}

/// The unique `(e, r)` with `d = (2n-1)e + 2r` and `1 <= r <= n`, if any.
pub fn even_offset_decomposition(n: i64, d: i64) -> Option<(i64, i64)> {
    let modulus = 2 * n - 1;
    (1..=n)
        .find(|r| d - 2 * r >= 0 && (d - 2 * r) % modulus == 0)
        .map(|r| ((d - 2 * r) / modulus, r))
}

/// `C(2n, n-r+1) - 2 C(2n, n-r-1) + C(2n, n-r-3)`: the squares chain bound on
/// `L_{2n-1}(n-r+1; (n-r)^{2n+2})`.
pub fn squares_chain_bound(n: i64, r: i64) -> Result<BigInt> {
    let h = |t: i64| -> Result<BigInt> {
        if t < 0 {
            Ok(BigInt::zero())
        } else {
            squares_quotient_hf(n, t)
        }
    };
    Ok(h(n - r + 1)? - h(n - r - 1)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSource {
    /// The squares chain, when `d = (2n-1)e + 2r` with `n <= 2r(r+2) - 1`.
    Prop32,
    VirtualDim,
    /// `h_Q(i) - h_Q(i-s)` through duality with `2n+2` powers in `2n` variables.
    HvectorChain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimLowerBound {
    pub value: BigInt,
    pub source: BoundSource,
    pub candidates: Vec<(BoundSource, BigInt)>,
    pub reduced: Theorem31System,
}

/// Best exact lower bound on `D = dim[R/(I, l)]_j` from the reduced system.
///
/// Takes the maximum of the virtual dimension, the squares chain when it
/// applies, and the duality chain bound. Ties go to the earlier source in
/// [`BoundSource`] order.
pub fn theorem31_dim_lower(n: i64, d: i64) -> Result<DimLowerBound> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d must be at least 2, got {d}")));
    }
    let reduced = theorem31_system(n, d)?;
    let mut candidates = Vec::new();
    if let Some((_, r)) = even_offset_decomposition(n, d) {
        if n <= 2 * r * (r + 2) - 1 {
            candidates.push((BoundSource::Prop32, squares_chain_bound(n, r)?));
        }
    }
    candidates.push((BoundSource::VirtualDim, virtual_dim(&reduced.system)));
    let sys = &reduced.system;
    if let Some(b) = sys.uniform_multiplicity() {
        let s = sys.degree() + 1 - b;
        if s >= 1 {
            let chain = power_quotient_chain_bound((2 * n) as usize, s, sys.degree())?;
            candidates.push((BoundSource::HvectorChain, chain));
        }
    }
    let (source, value) = candidates
        .iter()
        .fold(None::<&(BoundSource, BigInt)>, |best, c| match best {
            Some(b) if b.1 >= c.1 => Some(b),
            _ => Some(c),
        })
        .cloned()
        .expect("virtual dimension always present");
    Ok(DimLowerBound {
        value,
        source,
        candidates,
        reduced,
    })
}
