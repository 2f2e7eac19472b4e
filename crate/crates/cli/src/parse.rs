//! Argument value parsers: inclusive ranges and exponent lists.

use std::ops::RangeInclusive;

/// `"a..b"` (inclusive) or a single integer.
pub fn range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let s = s.trim();
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad range end in {s:?}"))?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(lo..=hi)
}

/// Comma-separated exponents with optional `a^k` repetition, e.g. `3^10,2`.
pub fn exponents(s: &str) -> Result<Vec<i64>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (value, count) = match part.split_once('^') {
            Some((v, c)) => (v, c.trim().parse::<usize>().map_err(|_| format!("bad count in {part:?}"))?),
            None => (part, 1),
        };
        let value: i64 = value.trim().parse().map_err(|_| format!("bad exponent in {part:?}"))?;
        if value < 1 {
            return Err(format!("exponents must be positive, got {value}"));
        }
        out.extend(std::iter::repeat(value).take(count));
    }
    if out.is_empty() {
        return Err("no exponents given".to_string());
    }
    Ok(out)
}
