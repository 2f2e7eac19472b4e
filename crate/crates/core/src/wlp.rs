//! Verdict engine for `R/I`, `I` generated by `d`-th powers of `2n+2` general
//! linear forms in `2n+1` variables.
//!
//! Multiplication by a general form `[R/I]_{j-1} -> [R/I]_j` has maximal rank
//! iff `D = max(E, 0)`, where `D = dim[R/(I, l)]_j` and `E` is the first
//! difference of the Hilbert function at `j`. `E` is computed exactly. `D` is
//! bounded below by exact certificates on the reduced linear system, so
//! `D_lower > 0` together with `E <= 0` proves failure.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{binom, binom_poly, factorial, verify_negative_from, IntPolynomial, NegativityCertificate};
use crate::hilbert::{aci_first_difference, critical_degree, power_quotient_lower_bound};
use crate::linsys::{
    even_offset_decomposition, squares_chain_bound, theorem31_dim_lower, theorem31_system, virtual_dim,
    BoundSource, LinearSystem,
};
use crate::oracle::{fatpoint_dim_system, OracleConfig, OracleResult};

/// Output schema version for [`VerdictRecord`].
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prop310Item {
    I,
    Ii,
    Iii,
    Iv,
    V,
}

impl fmt::Display for Prop310Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Prop310Item::I => "i",
            Prop310Item::Ii => "ii",
            Prop310Item::Iii => "iii",
            Prop310Item::Iv => "iv",
            Prop310Item::V => "v",
        })
    }
}

/// Which argument produced `D_lower`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum CertificateTag {
    VirtualDim,
    Prop32,
    Prop310(Prop310Item),
    HvectorChain,
    Oracle,
}

impl fmt::Display for CertificateTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateTag::VirtualDim => f.write_str("virtual-dim"),
            CertificateTag::Prop32 => f.write_str("prop32"),
            CertificateTag::Prop310(item) => write!(f, "prop310({item})"),
            CertificateTag::HvectorChain => f.write_str("hvector-chain"),
            CertificateTag::Oracle => f.write_str("oracle"),
        }
    }
}

impl FromStr for CertificateTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let item = |i| Ok(CertificateTag::Prop310(i));
        match s {
            "virtual-dim" => Ok(CertificateTag::VirtualDim),
            "prop32" => Ok(CertificateTag::Prop32),
            "prop310(i)" => item(Prop310Item::I),
            "prop310(ii)" => item(Prop310Item::Ii),
            "prop310(iii)" => item(Prop310Item::Iii),
            "prop310(iv)" => item(Prop310Item::Iv),
            "prop310(v)" => item(Prop310Item::V),
            "hvector-chain" => Ok(CertificateTag::HvectorChain),
            "oracle" => Ok(CertificateTag::Oracle),
            _ => Err(Error::Parse {
                input: s.to_string(),
                reason: "unknown certificate tag".to_string(),
            }),
        }
    }
}

impl From<CertificateTag> for String {
    fn from(tag: CertificateTag) -> Self {
        tag.to_string()
    }
}

impl TryFrom<String> for CertificateTag {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BoundSource> for CertificateTag {
    fn from(source: BoundSource) -> Self {
        match source {
            BoundSource::Prop32 => CertificateTag::Prop32,
            BoundSource::VirtualDim => CertificateTag::VirtualDim,
            BoundSource::HvectorChain => CertificateTag::HvectorChain,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Multiplication `[R/I]_{degree} -> [R/I]_{degree+1}` fails maximal rank.
    FailsWlp { degree: i64 },
    InconclusiveByThisCriterion,
}

impl Verdict {
    pub fn fails(&self) -> bool {
        matches!(self, Verdict::FailsWlp { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::FailsWlp { .. } => f.write_str("FailsWLP"),
            Verdict::InconclusiveByThisCriterion => f.write_str("InconclusiveByThisCriterion"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    ClosedForm,
    WithOracle(OracleConfig),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WlpVerdict {
    pub n: i64,
    pub d: i64,
    pub j: i64,
    #[serde(rename = "E")]
    pub e: BigInt,
    #[serde(rename = "D_lower")]
    pub d_lower: BigInt,
    pub certificate_tag: CertificateTag,
    /// Every bound evaluated, in preference order.
    pub certificates: Vec<(CertificateTag, BigInt)>,
    pub reduced_system: LinearSystem,
    pub oracle: Option<OracleResult>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl WlpVerdict {
    pub fn fails(&self) -> bool {
        self.verdict.fails()
    }

    pub fn record(&self) -> VerdictRecord {
        VerdictRecord {
            schema: SCHEMA_VERSION.to_string(),
            n: self.n,
            d: self.d,
            j: self.j,
            e: self.e.to_string(),
            d_lower: self.d_lower.to_string(),
            certificate_tag: self.certificate_tag.to_string(),
            verdict: self.verdict.to_string(),
            notes: self.notes.clone(),
        }
    }

    /// Recomputes `E`, `j` and the tagged closed-form bound from scratch and
    /// checks they still imply the stored verdict. Oracle-tagged verdicts are
    /// probabilistic and only have `E` and `j` rechecked.
    pub fn recheck(&self) -> Result<bool> {
        if critical_degree(self.n, self.d)? != self.j {
            return Ok(false);
        }
        let e = direct_first_difference(self.n, self.d, self.j);
        if e != self.e {
            return Ok(false);
        }
        if self.certificate_tag != CertificateTag::Oracle {
            match certificate_value(self.n, self.d, self.certificate_tag)? {
                Some(v) if v == self.d_lower => {}
                _ => return Ok(false),
            }
        }
        Ok(match self.verdict {
            Verdict::FailsWlp { degree } => {
                degree == self.j - 1
                    && if e.is_positive() {
                        self.certificate_tag == CertificateTag::Oracle && self.d_lower != e
                    } else {
                        self.d_lower.is_positive()
                    }
            }
            Verdict::InconclusiveByThisCriterion => true,
        })
    }
}

/// `E` straight from the alternating sum, independent of the Hilbert series
/// machinery.
fn direct_first_difference(n: i64, d: i64, j: i64) -> BigInt {
    (0..=n)
        .map(|k| {
            let term = binom(2 * n + 2, k) * binom(2 * n - 1 + j - k * d, 2 * n - 1);
            if k % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// Flat, versioned form of a verdict for JSON and CSV output. Big integers
/// are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub schema: String,
    pub n: i64,
    pub d: i64,
    pub j: i64,
    #[serde(rename = "E")]
    pub e: String,
    #[serde(rename = "D_lower")]
    pub d_lower: String,
    pub certificate_tag: String,
    pub verdict: String,
    pub notes: Vec<String>,
}

impl VerdictRecord {
    pub const CSV_HEADER: [&'static str; 9] =
        ["schema", "n", "d", "j", "E", "D_lower", "certificate_tag", "verdict", "notes"];

    /// Fields in [`Self::CSV_HEADER`] order; notes are joined with `"; "`.
    pub fn csv_fields(&self) -> [String; 9] {
        [
            self.schema.clone(),
            self.n.to_string(),
            self.d.to_string(),
            self.j.to_string(),
            self.e.clone(),
            self.d_lower.clone(),
            self.certificate_tag.clone(),
            self.verdict.clone(),
            self.notes.join("; "),
        ]
    }
}

fn require(n: i64, d: i64) -> Result<()> {
    if n < 2 || d < 2 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 2 and d >= 2, got n = {n}, d = {d}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop32Certificate {
    pub e: i64,
    pub r: i64,
    pub value: BigInt,
}

/// The squares-chain certificate for `d = (2n-1)e + 2r`, `1 <= r <= n`,
/// `n <= 2r(r+2) - 1`. Returns `None` when the shape does not apply or the
/// evaluated bound is not positive.
pub fn prop32_positive(n: i64, d: i64) -> Option<Prop32Certificate> {
    if n < 2 || d < 2 {
        return None;
    }
    let (e, r) = even_offset_decomposition(n, d)?;
    if n > 2 * r * (r + 2) - 1 {
        return None;
    }
    let value = squares_chain_bound(n, r).ok()?;
    value.is_positive().then_some(Prop32Certificate { e, r, value })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop310Certificate {
    pub item: Prop310Item,
    /// Exact lower bound on `D`; `None` for branches resting on an outside
    /// result, which are reported but never used for a verdict.
    pub value: Option<BigInt>,
    pub detail: String,
}

fn uniform_vdim(ambient: i64, degree: i64, b: i64, points: usize) -> BigInt {
    LinearSystem::uniform(ambient, degree, b, points)
        .map(|s| virtual_dim(&s))
        .unwrap_or_else(|_| BigInt::zero())
}

/// Divisibility certificates for `D > 0`. Items are tried in order and the
/// first with an exact value wins; a valueless branch is returned only if
/// nothing else applies.
pub fn prop310_positive(n: i64, d: i64) -> Option<Prop310Certificate> {
    if n < 2 || d < 2 {
        return None;
    }
    let m = 2 * n - 1;
    let points = (2 * n + 2) as usize;
    let divides = |k: i64, v: i64| v % k == 0;
    let exact = |item, value: BigInt, detail: String| Prop310Certificate {
        item,
        value: Some(value),
        detail,
    };
    let mut cited = None;

    if divides(m, d - 1) {
        let e = (d - 1) / m;
        return Some(exact(
            Prop310Item::I,
            binom(m + e, m),
            format!("2n-1 | d-1: D = dim L_{m}({e}; 0^{points})"),
        ));
    }
    if divides(2 * n + 1, d - 1) {
        cited = Some(Prop310Certificate {
            item: Prop310Item::I,
            value: None,
            detail: "2n+1 | d-1: positivity at a higher degree, no exact value".to_string(),
        });
    }
    if divides(m, d + 1) {
        let e = (d + 1) / m;
        return Some(exact(
            Prop310Item::Ii,
            uniform_vdim(m, e + 1, 1, points),
            format!("2n-1 | d+1: D = dim L_{m}({}; 1^{points}) >= virtual", e + 1),
        ));
    }
    if divides(m, d + 3) {
        let e = (d + 3) / m;
        let (value, detail) = if n >= 3 {
            (
                binom(2 * n + 2, m) - BigInt::from(2 * n + 2) * binom(2 * n, m),
                format!("2n-1 | d+3: D >= dim L_{m}(3; 2^{points}) >= 2n(n+1)(2n-5)/3"),
            )
        } else {
            (
                uniform_vdim(3, e + 2, 2, 6),
                format!("2n-1 | d+3, n = 2: D = dim L_3({}; 2^6) >= virtual", e + 2),
            )
        };
        return Some(exact(Prop310Item::Iii, value, detail));
    }
    if divides(m, d + 5) {
        let e = (d + 5) / m;
        let (value, detail) = match n {
            2 => (binom(e + 1, 3), format!("n = 2: D = dim L_3({}; 0^6)", e - 2)),
            3 => (uniform_vdim(5, e + 3, 3, 8), format!("n = 3: D = dim L_5({}; 3^8) >= virtual", e + 3)),
            4 => (
                power_quotient_lower_bound(8, 2, 4).ok()?,
                "n = 4: D >= dim L_7(4; 3^10) >= h_P(4) - 2h_P(2) + h_P(0), P = 8 squares".to_string(),
            ),
            _ => (
                binom(2 * n + 3, m) - BigInt::from(2 * n + 2) * binom(2 * n + 1, m),
                format!("2n-1 | d+5: D >= dim L_{m}(4; 3^{points}) >= n(n+1)(2n+1)(2n-9)/6"),
            ),
        };
        return Some(exact(Prop310Item::Iv, value, detail));
    }
    if cited.is_none() && d >= 4 * n * n - 2 * n + 2 {
        cited = Some(Prop310Certificate {
            item: Prop310Item::V,
            value: None,
            detail: "d >= 4n^2-2n+2: positivity at a higher degree, no exact value".to_string(),
        });
    }
    cited
}

/// Recomputes the bound a tag stands for. `None` if the tag does not apply
/// or has no exact value (including the oracle).
pub fn certificate_value(n: i64, d: i64, tag: CertificateTag) -> Result<Option<BigInt>> {
    require(n, d)?;
    Ok(match tag {
        CertificateTag::Prop32 => prop32_positive(n, d).map(|c| c.value),
        CertificateTag::Prop310(item) => prop310_positive(n, d).filter(|c| c.item == item).and_then(|c| c.value),
        CertificateTag::VirtualDim | CertificateTag::HvectorChain => {
            let bound = theorem31_dim_lower(n, d)?;
            bound
                .candidates
                .into_iter()
                .find(|(s, _)| CertificateTag::from(*s) == tag)
                .map(|(_, v)| v)
        }
        CertificateTag::Oracle => None,
    })
}

/// Decides whether the failure criterion at the critical degree fires.
///
/// Closed-form bounds are tried in the order squares chain, divisibility
/// items, virtual dimension, duality chain. The oracle is consulted only when
/// they cannot settle the case: no positive bound, or `E > 0`.
pub fn check_wlp_failure(n: i64, d: i64, strategy: Strategy) -> Result<WlpVerdict> {
    require(n, d)?;
    let j = critical_degree(n, d)?;
    let e = aci_first_difference(n, d)?;
    let lower = theorem31_dim_lower(n, d)?;
    let mut notes = Vec::new();
    if let Some(note) = &lower.reduced.note {
        notes.push(note.clone());
    }

    let mut certificates = Vec::new();
    if let Some(c) = prop32_positive(n, d) {
        certificates.push((CertificateTag::Prop32, c.value));
    }
    if let Some(c) = prop310_positive(n, d) {
        match c.value {
            Some(v) => certificates.push((CertificateTag::Prop310(c.item), v)),
            None => notes.push(format!("prop310({}) applies without an exact value", c.item)),
        }
    }
    for source in [BoundSource::VirtualDim, BoundSource::HvectorChain] {
        if let Some((_, v)) = lower.candidates.iter().find(|(s, _)| *s == source) {
            certificates.push((source.into(), v.clone()));
        }
    }

    let positive = certificates.iter().find(|(_, v)| v.is_positive()).cloned();
    let (mut tag, mut d_lower) = match &positive {
        Some(c) => c.clone(),
        None => (CertificateTag::from(lower.source), lower.value.clone().max(BigInt::zero())),
    };
    let mut verdict = if positive.is_some() && !e.is_positive() {
        Verdict::FailsWlp { degree: j - 1 }
    } else {
        Verdict::InconclusiveByThisCriterion
    };

    let mut oracle = None;
    if let (Strategy::WithOracle(config), Verdict::InconclusiveByThisCriterion) = (strategy, verdict) {
        match fatpoint_dim_system(&lower.reduced.system, &config) {
            Ok(result) => {
                let dim = BigInt::from(result.dimension);
                if e.is_positive() {
                    if dim != e {
                        verdict = Verdict::FailsWlp { degree: j - 1 };
                        tag = CertificateTag::Oracle;
                        d_lower = dim;
                        notes.push("D != E > 0 by randomized rank over F_p".to_string());
                    } else {
                        notes.push("oracle D equals E: maximal rank at this degree".to_string());
                    }
                } else if dim.is_positive() {
                    verdict = Verdict::FailsWlp { degree: j - 1 };
                    tag = CertificateTag::Oracle;
                    d_lower = dim;
                    notes.push("D > 0 by randomized rank over F_p".to_string());
                } else {
                    notes.push("oracle found D = 0".to_string());
                }
                oracle = Some(result);
            }
            Err(err) => notes.push(format!("oracle skipped: {err}")),
        }
    }

    if verdict.fails() && e.is_zero() {
        notes.push("E = 0 boundary: surjectivity fails with max(E, 0) = 0 < D".to_string());
    }
    if !verdict.fails() && oracle.is_none() {
        if e.is_positive() {
            notes.push("E > 0: criterion needs an exact D".to_string());
        } else {
            notes.push("no positive lower bound on D".to_string());
        }
    }

    Ok(WlpVerdict {
        n,
        d,
        j,
        e,
        d_lower,
        certificate_tag: tag,
        certificates,
        reduced_system: lower.reduced.system,
        oracle,
        verdict,
        notes,
    })
}

/// `E` as a polynomial in `t` on the residue class `d = (2n-1)t + q + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PnqPolynomial {
    pub n: i64,
    pub q: i64,
    pub polynomial: IntPolynomial,
    /// Whether `j = (2n^2-1)t + nq + floor((n-1)q/(2n-1))` held for `t = 0..=5`.
    pub j_formula_check: bool,
}

impl PnqPolynomial {
    pub fn d_at(&self, t: i64) -> i64 {
        (2 * self.n - 1) * t + self.q + 1
    }

    /// Value at an integer `t`; always an integer.
    pub fn eval(&self, t: i64) -> BigInt {
        self.polynomial.eval_i64(t).to_integer()
    }

    /// Coefficients times `(2n-1)!`, constant term first.
    pub fn cleared_coefficients(&self) -> Vec<BigInt> {
        self.polynomial
            .scaled_integer_coefficients(&factorial((2 * self.n - 1) as u32))
            .expect("denominators divide (2n-1)!")
    }
}

pub fn prop312_polynomial(n: i64, q: i64) -> Result<PnqPolynomial> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    if !(0..=2 * (n - 1)).contains(&q) {
        return Err(Error::InvalidParameter(format!("q must lie in 0..={}, got {q}", 2 * (n - 1))));
    }
    let m = 2 * n - 1;
    let shift = (n - 1) * q / m;
    let mut polynomial = IntPolynomial::zero("t");
    for k in 0..=n {
        let term = binom_poly(2 * n * n - 1 - m * k, n - 1 + shift + (q + 1) * (n - k), m as u32)
            .scale(&binom(2 * n + 2, k).into());
        polynomial = if k % 2 == 0 { &polynomial + &term } else { &polynomial - &term };
    }
    let j_formula_check = (0..=5).all(|t| {
        critical_degree(n, m * t + q + 1).ok() == Some((2 * n * n - 1) * t + n * q + shift)
    });
    Ok(PnqPolynomial {
        n,
        q,
        polynomial: polynomial.with_variable("t"),
        j_formula_check,
    })
}

/// The `n`-ranges over which each even `d` is claimed to fail.
pub fn corollary_range(d: i64) -> Option<(i64, i64)> {
    match d {
        4 => Some((2, 15)),
        6 => Some((3, 29)),
        8 => Some((4, 47)),
        10 => Some((5, 69)),
        12 => Some((6, 95)),
        14 => Some((7, 125)),
        16 => Some((8, 159)),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryTable {
    pub d: i64,
    pub n_min: i64,
    pub n_max: i64,
    pub rows: Vec<WlpVerdict>,
    /// Rows just outside the stated range worth reporting.
    pub extra_rows: Vec<WlpVerdict>,
    pub all_fail: bool,
    /// `E < 0` on every row except `E = 0` at `(2, 4)`.
    pub e_sign_ok: bool,
    /// Whether the squares chain alone supplies `D > 0` on every row.
    pub squares_chain_everywhere: bool,
    pub notes: Vec<String>,
}

pub fn reproduce_corollary(d: i64) -> Result<CorollaryTable> {
    let (n_min, n_max) = corollary_range(d)
        .ok_or_else(|| Error::InvalidParameter(format!("no tabulated range for d = {d}")))?;
    let rows = (n_min..=n_max)
        .into_par_iter()
        .map(|n| check_wlp_failure(n, d, Strategy::ClosedForm))
        .collect::<Result<Vec<_>>>()?;
    let extra_rows = if d == 16 {
        vec![check_wlp_failure(7, 16, Strategy::ClosedForm)?]
    } else {
        Vec::new()
    };
    let all_fail = rows.iter().all(WlpVerdict::fails);
    let e_sign_ok = rows.iter().all(|r| {
        if (r.n, r.d) == (2, 4) {
            r.e.is_zero()
        } else {
            r.e.is_negative()
        }
    });
    let squares_chain_everywhere = rows.iter().all(|r| prop32_positive(r.n, r.d).is_some());
    let mut notes = Vec::new();
    for r in &extra_rows {
        notes.push(format!(
            "n = {} (outside the stated range): E = {}, squares chain {}, verdict {} via {}",
            r.n,
            r.e,
            if prop32_positive(r.n, r.d).is_some() { "applies" } else { "does not apply" },
            r.verdict,
            r.certificate_tag
        ));
    }
    Ok(CorollaryTable {
        d,
        n_min,
        n_max,
        rows,
        extra_rows,
        all_fail,
        e_sign_ok,
        squares_chain_everywhere,
        notes,
    })
}

/// Residue-class starting points for `E < 0` as stated for `4 <= n <= 8`:
/// `e >= 1` for the listed small residues, `e >= 0` otherwise.
pub fn stated_negativity_start(n: i64, q: i64) -> i64 {
    let ones: &[i64] = match n {
        4 | 5 => &[0, 1, 2],
        _ => &[0],
    };
    i64::from(ones.contains(&q))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueClassCertificate {
    /// `d - 1 ≡ q (mod 2n-1)`, `d = (2n-1)e + q + 1`.
    pub q: i64,
    pub case: u8,
    pub r: i64,
    /// `E` in the variable `e`.
    pub e_polynomial: IntPolynomial,
    /// Coefficients of `e_polynomial` times `(2n-1)!`, constant term first.
    pub cleared_coefficients: Vec<BigInt>,
    pub stated_from: i64,
    pub stated: NegativityCertificate,
    /// Smallest `e` with `d >= 4`.
    pub effective_from: i64,
    pub effective: NegativityCertificate,
    /// Smallest `e >= effective_from` from which the reduced system has
    /// positive virtual dimension. The degree of the reduced system grows
    /// with `e` at fixed multiplicity, so positivity persists.
    pub virtual_positive_from: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem41Report {
    pub n: i64,
    pub d_max: i64,
    pub rows: Vec<WlpVerdict>,
    /// `d` in `[4, d_max]` without a positive closed-form `D` bound.
    pub d_gaps: Vec<i64>,
    /// `d` in `[4, d_max]` with `E > 0`.
    pub e_gaps: Vec<i64>,
    pub classes: Vec<ResidueClassCertificate>,
    /// Classes whose stated starting point does not verify.
    pub stated_mismatches: Vec<String>,
    /// Tails certified and every earlier `d` covered by `rows`.
    pub covers_all_d: bool,
    pub fails_everywhere: bool,
}

const TAIL_SCAN_LIMIT: i64 = 10_000;

pub fn theorem41_verify(n: i64, d_max: i64) -> Result<Theorem41Report> {
    if !(4..=8).contains(&n) || d_max < 4 {
        return Err(Error::InvalidParameter(format!(
            "need 4 <= n <= 8 and d_max >= 4, got n = {n}, d_max = {d_max}"
        )));
    }
    let rows = (4..=d_max)
        .into_par_iter()
        .map(|d| check_wlp_failure(n, d, Strategy::ClosedForm))
        .collect::<Result<Vec<_>>>()?;
    let d_gaps = rows
        .iter()
        .filter(|r| !r.certificates.iter().any(|(_, v)| v.is_positive()))
        .map(|r| r.d)
        .collect();
    let e_gaps = rows.iter().filter(|r| r.e.is_positive()).map(|r| r.d).collect();

    let m = 2 * n - 1;
    let mut classes = Vec::new();
    let mut stated_mismatches = Vec::new();
    let mut covers_all_d = true;
    for q in 0..m {
        let pnq = prop312_polynomial(n, q)?;
        let e_polynomial = pnq.polynomial.clone().with_variable("e");
        let stated_from = stated_negativity_start(n, q);
        let stated = verify_negative_from(&e_polynomial, stated_from)?;
        let effective_from = (0..).find(|&e| m * e + q + 1 >= 4).expect("unbounded");
        let effective = verify_negative_from(&e_polynomial, effective_from)?;
        if !stated.verdict {
            stated_mismatches.push(format!(
                "q = {q}: stated start e >= {stated_from} fails (d = {} gives E = {}); certified from e >= {effective_from}",
                m * stated_from + q + 1,
                pnq.eval(stated_from)
            ));
        }
        let reduced = theorem31_system(n, m * effective_from + q + 1)?;
        let virtual_positive_from = (effective_from..TAIL_SCAN_LIMIT).find(|&e| {
            theorem31_system(n, m * e + q + 1)
                .map(|s| virtual_dim(&s.system).is_positive())
                .unwrap_or(false)
        });
        let class_covered = effective.verdict
            && virtual_positive_from.is_some_and(|from| (effective_from..from).all(|e| m * e + q + 1 <= d_max));
        covers_all_d &= class_covered;
        classes.push(ResidueClassCertificate {
            q,
            case: reduced.case,
            r: reduced.r,
            cleared_coefficients: pnq.cleared_coefficients(),
            e_polynomial,
            stated_from,
            stated,
            effective_from,
            effective,
            virtual_positive_from,
        });
    }
    let fails_everywhere = rows.iter().all(WlpVerdict::fails);
    Ok(Theorem41Report {
        n,
        d_max,
        rows,
        d_gaps,
        e_gaps,
        classes,
        stated_mismatches,
        covers_all_d: covers_all_d && fails_everywhere,
        fails_everywhere,
    })
}
