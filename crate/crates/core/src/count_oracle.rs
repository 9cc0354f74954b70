//! Brute-force reference values for the substring-count array and the
//! quantities derived from it.
//!
//! Everything here is quadratic or worse and meant for test-scale inputs.
//! Each quantity has two separately coded routes (hash-set enumeration and a
//! direct comparison scan) so the oracle can be checked against itself.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("empty input text")]
    EmptyInput,
}

/// Everything the oracle knows about one text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountProfile {
    /// `counts[k - 1]` is the number of distinct substrings of length `k`.
    pub counts: Vec<u64>,
    pub alpha: usize,
    pub beta: usize,
    /// First index of the maximum count (end of the strictly increasing run).
    pub l: usize,
    /// Last index of the maximum count (start of the unit-step tail).
    pub r: usize,
    pub delta: Rational,
    /// Largest length attaining `delta`.
    pub k_tilde: usize,
}

fn nonempty(text: &[u8]) -> Result<(), OracleError> {
    if text.is_empty() {
        Err(OracleError::EmptyInput)
    } else {
        Ok(())
    }
}

/// Distinct-substring counts by enumerating a hash set per length.
pub fn counts(text: &[u8]) -> Result<Vec<u64>, OracleError> {
    nonempty(text)?;
    Ok((1..=text.len())
        .map(|k| text.windows(k).collect::<HashSet<_>>().len() as u64)
        .collect())
}

/// Rolling longest-common-prefix table, row by row from the right.
///
/// Calls `visit(i, j, lcp)` for every pair `i < j`.
fn for_each_pair_lcp(text: &[u8], mut visit: impl FnMut(usize, usize, usize)) {
    let n = text.len();
    // below[j] holds lcp(i + 1, j) while row i is computed.
    let mut below = vec![0usize; n + 1];
    let mut row = vec![0usize; n + 1];
    for i in (0..n).rev() {
        for j in (i + 1..n).rev() {
            row[j] = if text[i] == text[j] { below[j + 1] + 1 } else { 0 };
            visit(i, j, row[j]);
        }
        row[n] = 0;
        std::mem::swap(&mut below, &mut row);
    }
}

/// Distinct-substring counts by counting first occurrences: the window at
/// `j` of length `k` is new iff no earlier start shares a `k`-prefix with it.
pub fn counts_by_scan(text: &[u8]) -> Result<Vec<u64>, OracleError> {
    nonempty(text)?;
    let n = text.len();
    let mut longest_earlier = vec![0usize; n];
    for_each_pair_lcp(text, |_, j, lcp| {
        longest_earlier[j] = longest_earlier[j].max(lcp);
    });
    let mut counts = vec![0u64; n];
    for (j, &seen) in longest_earlier.iter().enumerate() {
        for k in seen + 1..=n - j {
            counts[k - 1] += 1;
        }
    }
    Ok(counts)
}

fn z_function(s: &[u8]) -> Vec<usize> {
    let n = s.len();
    let mut z = vec![0usize; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0usize, 0usize);
    for i in 1..n {
        if i < r {
            z[i] = (r - i).min(z[i - l]);
        }
        while i + z[i] < n && s[z[i]] == s[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > r {
            l = i;
            r = i + z[i];
        }
    }
    z
}

/// Length of the longest suffix that also ends at an earlier position.
pub fn longest_repeated_suffix(text: &[u8]) -> usize {
    let reversed: Vec<u8> = text.iter().rev().copied().collect();
    z_function(&reversed).into_iter().skip(1).max().unwrap_or(0)
}

/// Shortest suffix with no earlier (possibly overlapping) occurrence.
pub fn alpha(text: &[u8]) -> Result<usize, OracleError> {
    nonempty(text)?;
    Ok(longest_repeated_suffix(text) + 1)
}

/// Same as [`alpha`], by testing each suffix against the set of windows that
/// end before the last position.
pub fn alpha_by_enumeration(text: &[u8]) -> Result<usize, OracleError> {
    nonempty(text)?;
    let n = text.len();
    let earlier = &text[..n - 1];
    Ok((1..=n)
        .find(|&l| {
            let suffix = &text[n - l..];
            !earlier.windows(l).any(|w| w == suffix)
        })
        .unwrap_or(n))
}

/// One more than the longest right-special substring (1 when none exists).
pub fn beta(text: &[u8]) -> Result<usize, OracleError> {
    nonempty(text)?;
    let n = text.len();
    let mut longest = None;
    // a pair with lcp L and both right contexts present witnesses a
    // right-special substring of length L
    for_each_pair_lcp(text, |_, j, lcp| {
        if j + lcp < n {
            longest = longest.max(Some(lcp));
        }
    });
    Ok(longest.map_or(1, |l| l + 1))
}

/// Same as [`beta`], by collecting right contexts of every substring.
pub fn beta_by_enumeration(text: &[u8]) -> Result<usize, OracleError> {
    nonempty(text)?;
    let n = text.len();
    let mut contexts: HashMap<&[u8], HashSet<u8>> = HashMap::new();
    for i in 0..n {
        // the empty substring at i is followed by text[i]
        for j in i..n {
            contexts.entry(&text[i..j]).or_default().insert(text[j]);
        }
    }
    Ok(contexts
        .iter()
        .filter(|(_, ctx)| ctx.len() >= 2)
        .map(|(u, _)| u.len() + 1)
        .max()
        .unwrap_or(1))
}

/// Maximum of `counts[k-1] / k` and the largest `k` attaining it.
pub fn max_ratio(counts: &[u64]) -> (Rational, usize) {
    let mut best = (Rational::ZERO, 0);
    for (idx, &c) in counts.iter().enumerate() {
        let k = idx + 1;
        let ratio = Rational::new(c as i64, k as i64);
        if ratio >= best.0 {
            best = (ratio, k);
        }
    }
    best
}

fn argmax_bounds(counts: &[u64]) -> (usize, usize) {
    let max = counts.iter().copied().max().unwrap_or(0);
    let first = counts.iter().position(|&c| c == max).map_or(0, |p| p + 1);
    let last = counts.iter().rposition(|&c| c == max).map_or(0, |p| p + 1);
    (first, last)
}

fn assemble(counts: Vec<u64>, alpha: usize, beta: usize) -> CountProfile {
    let (l, r) = argmax_bounds(&counts);
    let (delta, k_tilde) = max_ratio(&counts);
    CountProfile {
        counts,
        alpha,
        beta,
        l,
        r,
        delta,
        k_tilde,
    }
}

pub fn profile(text: &[u8]) -> Result<CountProfile, OracleError> {
    Ok(assemble(counts(text)?, alpha(text)?, beta(text)?))
}

/// Profiles of every prefix `text[..1]`, `text[..2]`, ..., computed in one
/// pass: counts by growing a set of all distinct substrings, alpha by a
/// Z-scan per prefix, beta by recording when each pair first has both right
/// contexts.
pub fn prefix_profiles(text: &[u8]) -> Vec<CountProfile> {
    let n = text.len();
    // witness[p] = longest right-special length that becomes visible once
    // the prefix has length p
    let mut witness: Vec<Option<usize>> = vec![None; n + 1];
    for_each_pair_lcp(text, |_, j, lcp| {
        let p = j + lcp + 1;
        if p <= n {
            witness[p] = witness[p].max(Some(lcp));
        }
    });

    let mut seen: HashSet<&[u8]> = HashSet::new();
    let mut counts: Vec<u64> = Vec::with_capacity(n);
    let mut longest_special: Option<usize> = None;
    let mut out = Vec::with_capacity(n);
    for p in 1..=n {
        counts.push(0);
        for start in 0..p {
            if seen.insert(&text[start..p]) {
                counts[p - start - 1] += 1;
            }
        }
        longest_special = longest_special.max(witness[p]);
        let a = longest_repeated_suffix(&text[..p]) + 1;
        let b = longest_special.map_or(1, |l| l + 1);
        out.push(assemble(counts.clone(), a, b));
    }
    out
}

/// One failed structural property.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// (i) counts must strictly increase on `[1..L]`.
    StrictIncrease { k: usize },
    /// (ii) counts must be constant on `[L..R]`.
    Plateau { k: usize },
    /// (iii) counts must drop by exactly one on `[R..n]` and end at 1.
    UnitTail { k: usize },
    /// (iv) alpha >= beta requires L = beta and R = alpha.
    AlphaAtLeastBeta { l: usize, r: usize, alpha: usize, beta: usize },
    /// (v) alpha <= beta requires L >= alpha and R = beta.
    AlphaAtMostBeta { l: usize, r: usize, alpha: usize, beta: usize },
    /// The largest maximizer must lie in `[1..L]`.
    LeaderOutsideIncrease { k_tilde: usize, l: usize },
    /// delta <= n / log_sigma(n) for sigma >= 2, n > 3.
    LengthBound { delta: Rational, bound: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::StrictIncrease { k } => {
                write!(f, "(i) strict increase broken at k={k}")
            }
            Violation::Plateau { k } => write!(f, "(ii) plateau broken at k={k}"),
            Violation::UnitTail { k } => write!(f, "(iii) unit-step tail broken at k={k}"),
            Violation::AlphaAtLeastBeta { l, r, alpha, beta } => write!(
                f,
                "(iv) alpha={alpha} >= beta={beta} but L={l}, R={r}"
            ),
            Violation::AlphaAtMostBeta { l, r, alpha, beta } => write!(
                f,
                "(v) alpha={alpha} <= beta={beta} but L={l}, R={r}"
            ),
            Violation::LeaderOutsideIncrease { k_tilde, l } => {
                write!(f, "leader k={k_tilde} lies beyond L={l}")
            }
            Violation::LengthBound { delta, bound } => {
                write!(f, "length bound: delta={delta} exceeds {bound:.6}")
            }
        }
    }
}

/// Checks the three-interval structure, its alpha/beta characterization and
/// the `n / log_sigma n` bound on explicitly supplied values. Exposed so tests
/// can feed corrupted arrays.
pub fn validate_counts(counts: &[u64], alpha: usize, beta: usize, sigma: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = counts.len();
    if n == 0 {
        return out;
    }
    let c = |k: usize| counts[k - 1];
    let (l, r) = argmax_bounds(counts);

    if let Some(k) = (1..l).find(|&k| c(k) >= c(k + 1)) {
        out.push(Violation::StrictIncrease { k });
    }
    if let Some(k) = (l..r).find(|&k| c(k) != c(k + 1)) {
        out.push(Violation::Plateau { k });
    }
    if c(n) != 1 {
        out.push(Violation::UnitTail { k: n });
    } else if let Some(k) = (r..n).find(|&k| c(k + 1) + 1 != c(k)) {
        out.push(Violation::UnitTail { k });
    }
    if alpha >= beta && (l != beta || r != alpha) {
        out.push(Violation::AlphaAtLeastBeta { l, r, alpha, beta });
    }
    if alpha <= beta && (l < alpha || r != beta) {
        out.push(Violation::AlphaAtMostBeta { l, r, alpha, beta });
    }
    let (delta, k_tilde) = max_ratio(counts);
    if k_tilde > l {
        out.push(Violation::LeaderOutsideIncrease { k_tilde, l });
    }
    if sigma >= 2 && n > 3 {
        let bound = n as f64 * (sigma as f64).ln() / (n as f64).ln();
        if delta.to_f64() > bound * (1.0 + 1e-12) {
            out.push(Violation::LengthBound { delta, bound });
        }
    }
    out
}

pub fn distinct_symbols(text: &[u8]) -> usize {
    let mut present = [false; 256];
    text.iter().for_each(|&b| present[b as usize] = true);
    present.iter().filter(|&&p| p).count()
}

/// All structural violations for `text`; empty when every property holds.
pub fn validate_structure(text: &[u8]) -> Vec<Violation> {
    match profile(text) {
        Ok(p) => validate_profile(&p, distinct_symbols(text)),
        Err(OracleError::EmptyInput) => Vec::new(),
    }
}

pub fn validate_profile(profile: &CountProfile, sigma: usize) -> Vec<Violation> {
    validate_counts(&profile.counts, profile.alpha, profile.beta, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textgen::{generate, GenSpec};

    const EXAMPLE: &[u8] = b"abaabbabbab";
    const FIGURE: &[u8] = b"011010011001011010010110011010011";

    fn digits(s: &str) -> Vec<u64> {
        s.bytes().map(|b| (b - b'0') as u64).collect()
    }

    #[test]
    fn example_counts() {
        assert_eq!(counts(EXAMPLE).unwrap(), digits("24666654321"));
        assert_eq!(counts(b"abaabbabbabc").unwrap(), digits("357777654321"));
        assert_eq!(counts(b"abaabbabbaba").unwrap(), digits("246777654321"));
        assert_eq!(counts(b"abaabbabbabb").unwrap(), digits("246666654321"));
        assert_eq!(counts(b"aaa").unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn example_alpha_beta() {
        assert_eq!((alpha(EXAMPLE).unwrap(), beta(EXAMPLE).unwrap()), (6, 3));
        let wa = b"abaabbabbaba";
        assert_eq!((alpha(wa).unwrap(), beta(wa).unwrap()), (4, 6));
        let wb = b"abaabbabbabb";
        assert_eq!((alpha(wb).unwrap(), beta(wb).unwrap()), (7, 3));
        let wc = b"abaabbabbabc";
        assert_eq!((alpha(wc).unwrap(), beta(wc).unwrap()), (1, 6));
        assert_eq!((alpha(b"aaaa").unwrap(), beta(b"aaaa").unwrap()), (4, 1));
    }

    #[test]
    fn empty_input_is_rejected() {
        assert_eq!(counts(b""), Err(OracleError::EmptyInput));
        assert_eq!(alpha(b""), Err(OracleError::EmptyInput));
        assert_eq!(beta_by_enumeration(b""), Err(OracleError::EmptyInput));
        assert_eq!(profile(b""), Err(OracleError::EmptyInput));
        assert!(validate_structure(b"").is_empty());
    }

    #[test]
    fn example_profiles() {
        let p = profile(EXAMPLE).unwrap();
        assert_eq!((p.delta, p.k_tilde, p.l, p.r), (Rational::new(2, 1), 3, 3, 6));

        let p = profile(FIGURE).unwrap();
        assert_eq!((p.delta, p.k_tilde, p.r), (Rational::new(20, 7), 7, 10));
        assert_eq!(p.counts[6], 20);

        let p = profile(b"aaaa").unwrap();
        assert_eq!((p.delta, p.k_tilde), (Rational::ONE, 1));
    }

    #[test]
    fn figure_prefixes_satisfy_structure() {
        for p in 1..=FIGURE.len() {
            assert_eq!(validate_structure(&FIGURE[..p]), vec![], "prefix {p}");
        }
    }

    #[test]
    fn short_text_skips_length_bound() {
        assert_eq!(validate_structure(b"ab"), vec![]);
        // delta = 2 = bound exactly for n = 4, sigma = 2
        assert_eq!(validate_structure(b"abab"), vec![]);
    }

    #[test]
    fn corrupted_counts_are_reported() {
        // plateau interrupted after the increasing run
        let v = validate_counts(&[2, 4, 6, 5, 6, 6, 5, 4, 3, 2, 1], 6, 3, 2);
        assert!(v.iter().any(|x| matches!(x, Violation::Plateau { k: 3 })), "{v:?}");
        assert!(v[0].to_string().starts_with("(ii)"));

        // increasing run one step too long for beta = 3
        let v = validate_counts(&[2, 4, 5, 6, 6, 6, 5, 4, 3, 2, 1], 6, 3, 2);
        assert!(v.iter().any(|x| matches!(x, Violation::AlphaAtLeastBeta { l: 4, .. })), "{v:?}");

        let v = validate_counts(&[2, 4, 3, 6, 6, 5, 4, 3, 2, 1], 5, 4, 2);
        assert!(v.iter().any(|x| matches!(x, Violation::StrictIncrease { k: 2 })), "{v:?}");

        let v = validate_counts(&[2, 4, 6, 6, 4, 3, 2, 1], 4, 3, 2);
        assert!(v.iter().any(|x| matches!(x, Violation::UnitTail { k: 4 })), "{v:?}");
    }

    #[test]
    fn routes_agree_on_generated_words() {
        for seed in 0..80u64 {
            let sigma = [1, 2, 3, 4, 26][seed as usize % 5];
            let n = 1 + (seed as usize * 7) % 90;
            let text = generate(&GenSpec::random(n, sigma, seed)).unwrap();
            assert_eq!(counts(&text), counts_by_scan(&text), "seed {seed}");
            assert_eq!(alpha(&text), alpha_by_enumeration(&text), "seed {seed}");
            assert_eq!(beta(&text), beta_by_enumeration(&text), "seed {seed}");
        }
    }

    #[test]
    fn prefix_profiles_match_direct_profiles() {
        for seed in 0..30u64 {
            let sigma = [2, 3, 4, 26][seed as usize % 4];
            let text = generate(&GenSpec::random(60, sigma, seed)).unwrap();
            let all = prefix_profiles(&text);
            for p in 1..=text.len() {
                assert_eq!(all[p - 1], profile(&text[..p]).unwrap(), "seed {seed} prefix {p}");
            }
        }
    }

    #[test]
    fn delta_is_monotone_over_prefixes() {
        let text = generate(&GenSpec::random(150, 3, 11)).unwrap();
        let deltas: Vec<_> = prefix_profiles(&text).into_iter().map(|p| p.delta).collect();
        assert!(deltas.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn random_words_satisfy_structure() {
        for seed in 0..1000u64 {
            let sigma = [2, 3, 4, 26][seed as usize % 4];
            let n = 1 + (seed as usize * 37) % 300;
            let text = generate(&GenSpec::random(n, sigma, seed)).unwrap();
            let v = validate_structure(&text);
            assert!(v.is_empty(), "seed {seed}: {}", v[0]);
        }
    }
}
