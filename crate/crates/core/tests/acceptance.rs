//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the terminal.
//! Reference values are recomputed here from plain binomial sums rather than
//! through the library's Hilbert series code.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wlpcheck::hilbert::{c_sequence, ci_hilbert, critical_degree, froberg_hf, power_quotient_lower_bound, s_sequence};
use wlpcheck::linsys::{cremona_reduce, cremona_step, cremona_t, initial_dual_system, theorem31_system, virtual_dim};
use wlpcheck::oracle::{duality_check, fatpoint_dim_system, OracleConfig};
use wlpcheck::reproduce::{self, ReproduceOptions, Target, FINITE_SUBSTITUTION};
use wlpcheck::wlp::{prop312_polynomial, reproduce_corollary, theorem41_verify};
use wlpcheck::{verify_negative_from, LinearSystem};

struct Outcome {
    pass: bool,
    detail: String,
    /// A failure that matches a recorded erratum exactly. Printed as FAIL
    /// but does not fail the run.
    documented: bool,
}

impl Outcome {
    fn pass(detail: impl Into<String>) -> Self {
        Outcome {
            pass: true,
            detail: detail.into(),
            documented: false,
        }
    }

    fn fail(detail: impl Into<String>) -> Self {
        Outcome {
            pass: false,
            detail: detail.into(),
            documented: false,
        }
    }

    fn check(pass: bool, detail: impl Into<String>) -> Self {
        if pass {
            Self::pass(detail)
        } else {
            Self::fail(detail)
        }
    }
}

fn ref_binom(top: i64, bottom: i64) -> BigInt {
    if bottom < 0 || top < bottom {
        return BigInt::zero();
    }
    let fact = |k: i64| (1..=k).fold(BigInt::one(), |acc, i| acc * i);
    fact(top) / (fact(bottom) * fact(top - bottom))
}

fn alternating<F: Fn(i64) -> BigInt>(n: i64, term: F) -> BigInt {
    (0..=n)
        .map(|k| if k % 2 == 0 { term(k) } else { -term(k) })
        .sum()
}

fn ref_j(n: i64, d: i64) -> i64 {
    (2 * n * n - 1) * (d - 1) / (2 * n - 1)
}

fn ref_first_difference(n: i64, d: i64) -> BigInt {
    let j = ref_j(n, d);
    alternating(n, |k| ref_binom(2 * n + 2, k) * ref_binom(2 * n - 1 + j - k * d, 2 * n - 1))
}

fn ref_c(n: i64) -> BigInt {
    alternating(n, |k| {
        ref_binom(2 * n + 2, k) * num_traits::pow(BigInt::from(2 * n * n - 1 - (2 * n - 1) * k), (2 * n - 1) as usize)
    })
}

fn big(values: &[i64]) -> Vec<BigInt> {
    values.iter().map(|&v| BigInt::from(v)).collect()
}

fn criterion_1() -> Outcome {
    let s: Vec<BigInt> = (2..=50).map(|n| s_sequence(n).unwrap()).collect();
    for (i, v) in s.iter().enumerate() {
        let n = i as i64 + 2;
        let reference = alternating(n, |k| ref_binom(2 * n + 2, k) * ref_binom(5 * n - 4 * k, 2 * n - 1));
        if *v != reference {
            return Outcome::fail(format!("S_{n} = {v}, reference {reference}"));
        }
    }
    if !s[0].is_zero() {
        return Outcome::fail(format!("S_2 = {}", s[0]));
    }
    if let Some(i) = s[..14].iter().position(|v| v.is_positive()) {
        return Outcome::fail(format!("S_{} > 0", i + 2));
    }
    let decreasing = s.windows(2).all(|w| w[1] < w[0]);
    Outcome::pass(format!(
        "S_2 = 0, S_n <= 0 on 2..15; strictly decreasing on 2..50: {decreasing} (reported)"
    ))
}

fn criterion_2() -> Outcome {
    let c: Vec<BigInt> = (2..=400).map(|n| c_sequence(n).unwrap()).collect();
    if c[0] != BigInt::from(-26) {
        return Outcome::fail(format!("c_2 = {}", c[0]));
    }
    for n in (2..=400).step_by(17).chain([399, 400]) {
        if c[(n - 2) as usize] != ref_c(n) {
            return Outcome::fail(format!("c_{n} disagrees with reference"));
        }
    }
    match c.iter().position(|v| !v.is_negative()) {
        Some(i) => Outcome::fail(format!("c_{} >= 0", i + 2)),
        None => Outcome::pass("c_2 = -26, c_n < 0 for n = 2..400"),
    }
}

const P63: [i64; 25] = [
    1, 12, 78, 352, 1221, 3432, 8074, 16236, 28314, 43252, 58278, 69576, 73789, 69576, 58278, 43252, 28314, 16236, 8074,
    3432, 1221, 352, 78, 12, 1,
];
const Q73: [i64; 16] = [
    1, 14, 105, 545, 2170, 6993, 18837, 43290, 85995, 148785, 224796, 295659, 334425, 315420, 227475, 83097,
];
const Q83: [i64; 18] = [
    1, 16, 136, 799, 3604, 13192, 40528, 106828, 245242, 495312, 885768, 1406886, 1983696, 2469624, 2677704, 2448816,
    1730787, 625992,
];
const Q84: [i64; 18] = [
    1, 16, 136, 816, 3859, 15232, 51952, 156672, 424558, 1046112, 2364768, 4937888, 9574978, 17312256, 29277264,
    46411904, 69063979, 96521904,
];

fn criterion_3() -> Outcome {
    let p53: Vec<BigInt> = [3, 6, 9].iter().map(|&t| ci_hilbert(10, &[3; 10], t).unwrap()).collect();
    if p53 != big(&[210, 2850, 8350]) {
        return Outcome::fail(format!("P(5,3) at 3/6/9: {p53:?}"));
    }
    let p63: Vec<BigInt> = (0..25).map(|t| ci_hilbert(12, &[3; 12], t).unwrap()).collect();
    if p63 != big(&P63) {
        return Outcome::fail("P(6,3) differs");
    }
    if !ci_hilbert(12, &[3; 12], 25).unwrap().is_zero() {
        return Outcome::fail("P(6,3) nonzero past socle");
    }
    for (name, vars, s, golden) in [("Q(7,3)", 14, 3, &Q73[..]), ("Q(8,3)", 16, 3, &Q83[..]), ("Q(8,4)", 16, 4, &Q84[..])] {
        let got: Vec<BigInt> = (0..golden.len() as i64)
            .map(|t| froberg_hf(vars, vars + 1, s, t).unwrap())
            .collect();
        if got != big(golden) {
            return Outcome::fail(format!("{name} differs"));
        }
    }
    Outcome::pass("P(5,3), P(6,3), Q(7,3), Q(8,3), Q(8,4) exact")
}

fn criterion_4() -> Outcome {
    let v = power_quotient_lower_bound(10, 3, 9).unwrap();
    Outcome::check(v == BigInt::from(2860), format!("chain bound = {v}"))
}

fn criterion_5() -> Outcome {
    for n in 2..=8 {
        for d in 2..=30 {
            let closed = theorem31_system(n, d).unwrap();
            let start = initial_dual_system(n, d).unwrap();
            let j = ref_j(n, d);
            let expected_start = LinearSystem::uniform(2 * n - 1, j, j + 1 - d, (2 * n + 2) as usize).unwrap();
            if start != expected_start {
                return Outcome::fail(format!("n={n} d={d}: initial system {start}"));
            }
            let (reduced, _) = cremona_reduce(&start);
            if reduced.degree() != closed.system.degree() || !reduced.same_system(&closed.system) {
                return Outcome::fail(format!("n={n} d={d}: {reduced} vs {}", closed.system));
            }
            let m = 2 * n - 1;
            let (e, q) = ((d - 1) / m, (d - 1) % m);
            let base = (2 * n * n - 1) * e;
            let case_j = if q == 0 {
                base
            } else if q % 2 == 1 {
                let r = (q + 1) / 2;
                base + 2 * n * r + r - n - 1
            } else {
                let r = q / 2;
                base + 2 * n * r + r - 1
            };
            if case_j != j || closed.j != j || critical_degree(n, d).unwrap() != j {
                return Outcome::fail(format!("n={n} d={d}: degree formulas disagree"));
            }
        }
    }
    Outcome::pass("n = 2..8, d = 2..30: reduction equals closed form, case degree formulas exact")
}

/// Displayed residue-class polynomials for n = 4 times 7!, highest degree
/// first, indexed by q = (d-1) mod 7.
const N4_DISPLAYED: [[i64; 8]; 7] = [
    [-1086400574, -914853422, -328170248, -60270140, -5015486, 102442, 60228, 5040],
    [-1086400574, -1829706844, -1272885740, -457929640, -84318206, -5316556, 535080, 75600],
    [-1086400574, -2744560266, -2847411560, -1530367860, -431507006, -50737554, 1747620, 680400],
    [-1086400574, -4059690376, -6472447730, -5696621560, -2981962256, -925181824, -156720480, -11088000],
    [-1086400574, -4974543798, -9666743618, -10305716610, -6484301936, -2393744472, -475568352, -38586240],
    [-1086400574, -6289673908, -15592053428, -21447402760, -17672567486, -8719279492, -2383703952, -278359200],
    [-1086400574, -7204527330, -20406119384, -31980364500, -29926695806, -16705543050, -5144220396, -673001280],
];

/// The only displayed coefficient that disagrees with the exact expansion:
/// (q, power of e, displayed, exact).
const N4_ERRATUM: (i64, usize, i64, i64) = (0, 2, 102442, 120442);

fn criterion_6() -> Outcome {
    let mut mismatches = Vec::new();
    let mut negativity = Vec::new();
    for q in 0..7i64 {
        let p = prop312_polynomial(4, q).unwrap();
        // The polynomial must be the exact E on the class: check it at more
        // points than its degree against the plain sum.
        for t in 0..=9 {
            let d = 7 * t + q + 1;
            if d >= 2 && p.eval(t) != ref_first_difference(4, d) {
                return Outcome::fail(format!("q={q} t={t}: polynomial disagrees with direct sum"));
            }
        }
        let computed = p.cleared_coefficients();
        for (power, &shown) in N4_DISPLAYED[q as usize].iter().rev().enumerate() {
            if computed[power] != BigInt::from(shown) {
                mismatches.push((q, power, shown, computed[power].clone()));
            }
        }
        let from = i64::from(q <= 2);
        let cert = verify_negative_from(&p.polynomial.clone().with_variable("e"), from).unwrap();
        if !cert.verdict {
            negativity.push(q);
        }
    }
    if !negativity.is_empty() {
        return Outcome::fail(format!("negativity fails for classes {negativity:?}"));
    }
    let (q, power, shown, exact) = N4_ERRATUM;
    match mismatches.as_slice() {
        [] => Outcome::pass("all 56 coefficients match; negativity certified from e >= 1 (q <= 2) and e >= 0"),
        [(mq, mp, ms, mc)] if (*mq, *mp, *ms) == (q, power, shown) && *mc == BigInt::from(exact) => Outcome {
            pass: false,
            documented: true,
            detail: format!(
                "55/56 displayed coefficients match; q = {q}, e^{power}: displayed {shown}, exact {exact} \
                 (confirmed by direct sums at 10 points); negativity certificates all pass"
            ),
        },
        other => Outcome::fail(format!("coefficient mismatches: {other:?}")),
    }
}

fn criterion_7() -> Outcome {
    let mut rows = 0;
    for d in [4, 6, 8, 10, 12, 14, 16] {
        let table = reproduce_corollary(d).unwrap();
        let ns: Vec<i64> = table.rows.iter().map(|r| r.n).collect();
        let expected: Vec<i64> = (table.n_min..=table.n_max).collect();
        if ns != expected || !table.all_fail {
            return Outcome::fail(format!("d = {d}: rows or verdicts wrong"));
        }
        for r in &table.rows {
            if r.e != ref_first_difference(r.n, d) {
                return Outcome::fail(format!("d = {d}, n = {}: E disagrees with direct sum", r.n));
            }
            let sign_ok = if (r.n, d) == (2, 4) { r.e.is_zero() } else { r.e.is_negative() };
            if !sign_ok {
                return Outcome::fail(format!("d = {d}, n = {}: E = {}", r.n, r.e));
            }
        }
        rows += table.rows.len();
    }
    let ranges = [(4, 2, 15), (6, 3, 29), (8, 4, 47), (10, 5, 69), (12, 6, 95), (14, 7, 125), (16, 8, 159)];
    for (d, lo, hi) in ranges {
        let t = reproduce_corollary(d).unwrap();
        if (t.n_min, t.n_max) != (lo, hi) {
            return Outcome::fail(format!("d = {d}: range {}..{}", t.n_min, t.n_max));
        }
    }
    Outcome::pass(format!("{rows} rows FailsWLP; E < 0 except E = 0 at (2, 4)"))
}

fn criterion_8() -> Outcome {
    for n in 4..=8 {
        let r = theorem41_verify(n, 30).unwrap();
        if !r.fails_everywhere || !r.d_gaps.is_empty() || !r.e_gaps.is_empty() {
            return Outcome::fail(format!("n = {n}: gaps D {:?}, E {:?}", r.d_gaps, r.e_gaps));
        }
        if r.classes.len() as i64 != 2 * n - 1 || !r.classes.iter().all(|c| c.effective.verdict) {
            return Outcome::fail(format!("n = {n}: a residue class lacks a negativity certificate"));
        }
        if !r.covers_all_d {
            return Outcome::fail(format!("n = {n}: tail certificates do not cover every d >= 4"));
        }
        for v in &r.rows {
            if v.e != ref_first_difference(n, v.d) || !v.recheck().unwrap() {
                return Outcome::fail(format!("n = {n}, d = {}: certificate does not re-verify", v.d));
            }
        }
    }
    Outcome::pass("n = 4..8, d = 4..30 FailsWLP; every residue class certified, tails cover all d >= 4")
}

fn criterion_9() -> Outcome {
    let cfg = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_901);
    let mut instances = 0;
    let mut steps_checked = 0;

    for _ in 0..12 {
        let vars = rng.gen_range(3..=4usize);
        let j = rng.gen_range(2..=8i64);
        let count = rng.gen_range(vars + 1..=vars + 3);
        let exps: Vec<i64> = (0..count).map(|_| rng.gen_range(2..=j + 1)).collect();
        let c = duality_check(vars, &exps, j, &cfg).unwrap();
        if !c.agree {
            return Outcome::fail(format!("duality N={vars} a={exps:?} j={j}"));
        }
        instances += 1;
    }

    let mut systems: Vec<LinearSystem> = [
        "L_2(4; 2^5)",
        "L_3(7; 4^6)",
        "L_3(5; 4^2, 2^4)",
        "L_2(6; 3^3, 2^3)",
        "L_3(5; 3^3, 2^2)",
        "L_3(8; 5^2, 3^4)",
        "L_2(5; 3^2, 2^3)",
        "L_2(8; 4^3, 3^2)",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();
    for _ in 0..8 {
        let m = rng.gen_range(2..=3i64);
        let j = rng.gen_range(2..=8i64);
        let s = rng.gen_range(m as usize + 2..=m as usize + 5);
        let mults = (0..s).map(|_| rng.gen_range(0..=j)).collect();
        systems.push(LinearSystem::new(m, j, mults).unwrap());
    }
    for sys in &systems {
        let dim = fatpoint_dim_system(sys, &cfg).unwrap().dimension;
        if virtual_dim(sys) > BigInt::from(dim) {
            return Outcome::fail(format!("{sys}: virtual above oracle {dim}"));
        }
        if matches!(cremona_t(&sys.sorted()), Ok(t) if t < 0) {
            if let Ok(next) = cremona_step(sys) {
                let after = fatpoint_dim_system(&next, &cfg).unwrap().dimension;
                if after != dim {
                    return Outcome::fail(format!("{sys} -> {next}: oracle {dim} vs {after}"));
                }
                steps_checked += 1;
            }
        }
        instances += 1;
    }
    let special: LinearSystem = "L_2(4; 2^5)".parse().unwrap();
    let dim = fatpoint_dim_system(&special, &cfg).unwrap().dimension;
    if dim != 1 || !virtual_dim(&special).is_zero() {
        return Outcome::fail(format!("L_2(4; 2^5): oracle {dim}"));
    }
    Outcome::check(
        instances >= 20 && steps_checked >= 4,
        format!("{instances} instances, {steps_checked} Cremona steps preserve dimension, L_2(4; 2^5) = 1 > 0"),
    )
}

fn criterion_10() -> Outcome {
    let report = reproduce::run(Target::All, ReproduceOptions::default()).unwrap();
    let has_substitution = report.notes.iter().any(|n| n == FINITE_SUBSTITUTION);
    let has_conjecture = report.notes.iter().any(|n| n.contains("conjecture"));
    Outcome::check(
        report.passed() && has_substitution && has_conjecture,
        format!(
            "{} checks pass; report states the finite substitution for all d and the c_n conjecture",
            report.checks.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(u8, &str, fn() -> Outcome); 10] = [
        (1, "S-sequence", criterion_1),
        (2, "c-sequence", criterion_2),
        (3, "h-vector goldens", criterion_3),
        (4, "chain bound", criterion_4),
        (5, "closed form vs iteration", criterion_5),
        (6, "residue-class polynomials", criterion_6),
        (7, "corollary ranges", criterion_7),
        (8, "four-to-eight end to end", criterion_8),
        (9, "oracle agreement", criterion_9),
        (10, "finite substitution documented", criterion_10),
    ];
    let mut undocumented_failures = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| Outcome::fail(format!("panicked: {:?}", e.downcast_ref::<String>())));
        let elapsed: Duration = start.elapsed();
        let status = match (outcome.pass, outcome.documented) {
            (true, _) => "PASS",
            (false, true) => "FAIL (documented erratum)",
            (false, false) => "FAIL",
        };
        println!("criterion {id:>2} [{name}]: {status} - {} ({:.2?})", outcome.detail, elapsed);
        if !outcome.pass && !outcome.documented {
            undocumented_failures += 1;
        }
    }
    if undocumented_failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{undocumented_failures} criteria failed");
        ExitCode::FAILURE
    }
}
