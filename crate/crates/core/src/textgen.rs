//! Seeded and deterministic test-string generators.
//!
//! Symbols are `b'a' + j` for alphabets of at most 26 letters and the raw
//! bytes `0..sigma` for larger alphabets.
//!
//! The random generator is xorshift64* (Vigna): state update
//! `x ^= x >> 12; x ^= x << 25; x ^= x >> 27`, output `x * 0x2545F4914F6CDD1D`.
//! The state is seeded with one splitmix64 step of the user seed
//! (`z = seed + 0x9E3779B97F4A7C15`, then
//! `z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9`,
//! `z = (z ^ (z >> 27)) * 0x94D049BB133111EB`, `z ^ (z >> 31)`), replaced by
//! the increment constant if it comes out zero. A random symbol is
//! `output % sigma`.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenKind {
    Random,
    Fibonacci,
    ThueMorse,
    Periodic,
    Unary,
    DeBruijn,
}

impl GenKind {
    pub const ALL: [GenKind; 6] = [
        GenKind::Random,
        GenKind::Fibonacci,
        GenKind::ThueMorse,
        GenKind::Periodic,
        GenKind::Unary,
        GenKind::DeBruijn,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GenKind::Random => "random",
            GenKind::Fibonacci => "fibonacci",
            GenKind::ThueMorse => "thue-morse",
            GenKind::Periodic => "periodic",
            GenKind::Unary => "unary",
            GenKind::DeBruijn => "de-bruijn",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenKind {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        GenKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| GenError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("length must be at least 1")]
    EmptyLength,
    #[error("alphabet size must be in 1..=256, got {0}")]
    BadAlphabet(usize),
    #[error("periodic pattern must be nonempty")]
    EmptyPattern,
    #[error("unknown generator kind {0:?}")]
    UnknownKind(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub length: usize,
    pub alphabet: usize,
    pub seed: u64,
    /// Repeated unit for [`GenKind::Periodic`].
    pub pattern: Vec<u8>,
}

impl GenSpec {
    pub fn new(kind: GenKind, length: usize, alphabet: usize, seed: u64) -> Self {
        GenSpec {
            kind,
            length,
            alphabet,
            seed,
            pattern: b"ab".to_vec(),
        }
    }

    pub fn random(length: usize, alphabet: usize, seed: u64) -> Self {
        Self::new(GenKind::Random, length, alphabet, seed)
    }

    pub fn with_pattern(mut self, pattern: impl Into<Vec<u8>>) -> Self {
        self.pattern = pattern.into();
        self
    }
}

/// xorshift64* seeded through one splitmix64 step.
#[derive(Debug, Clone)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

    pub fn new(seed: u64) -> Self {
        let mut z = seed.wrapping_add(Self::GOLDEN);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        XorShift64Star {
            state: if z == 0 { Self::GOLDEN } else { z },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform-ish value in `0..bound` (plain modulo reduction).
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

fn symbol(j: usize, sigma: usize) -> u8 {
    if sigma <= 26 {
        b'a' + j as u8
    } else {
        j as u8
    }
}

pub fn generate(spec: &GenSpec) -> Result<Vec<u8>, GenError> {
    let n = spec.length;
    let sigma = spec.alphabet;
    if n == 0 {
        return Err(GenError::EmptyLength);
    }
    if !(1..=256).contains(&sigma) {
        return Err(GenError::BadAlphabet(sigma));
    }
    let out = match spec.kind {
        GenKind::Random => {
            let mut rng = XorShift64Star::new(spec.seed);
            (0..n)
                .map(|_| symbol(rng.below(sigma as u64) as usize, sigma))
                .collect()
        }
        GenKind::Unary => vec![symbol(0, sigma); n],
        GenKind::Fibonacci => fibonacci(n),
        GenKind::ThueMorse => (0..n)
            .map(|i| if (i as u64).count_ones().is_multiple_of(2) { b'a' } else { b'b' })
            .collect(),
        GenKind::Periodic => {
            if spec.pattern.is_empty() {
                return Err(GenError::EmptyPattern);
            }
            spec.pattern.iter().copied().cycle().take(n).collect()
        }
        GenKind::DeBruijn => de_bruijn(sigma, n),
    };
    Ok(out)
}

// s1 = "a", s2 = "ab", s_k = s_{k-1} s_{k-2}
fn fibonacci(n: usize) -> Vec<u8> {
    let mut prev = b"a".to_vec();
    let mut cur = b"ab".to_vec();
    while cur.len() < n {
        let next = [cur.as_slice(), prev.as_slice()].concat();
        prev = cur;
        cur = next;
    }
    if n == 1 {
        return prev;
    }
    cur.truncate(n);
    cur
}

/// Linearized de Bruijn sequence of the smallest order whose length covers
/// `n`, truncated to `n` symbols. Unary alphabets degenerate to `a^n`.
fn de_bruijn(sigma: usize, n: usize) -> Vec<u8> {
    if sigma == 1 {
        return vec![symbol(0, 1); n];
    }
    let mut order = 1;
    while sigma.saturating_pow(order as u32) + order - 1 < n {
        order += 1;
    }
    // Fredricksen-Kessler-Maiorana: concatenate Lyndon words whose length
    // divides the order.
    let mut seq = Vec::new();
    let mut a = vec![0usize; order + 1];
    fn db(t: usize, p: usize, order: usize, sigma: usize, a: &mut [usize], seq: &mut Vec<usize>) {
        if t > order {
            if order.is_multiple_of(p) {
                seq.extend_from_slice(&a[1..=p]);
            }
        } else {
            a[t] = a[t - p];
            db(t + 1, p, order, sigma, a, seq);
            for j in a[t - p] + 1..sigma {
                a[t] = j;
                db(t + 1, t, order, sigma, a, seq);
            }
        }
    }
    db(1, 1, order, sigma, &mut a, &mut seq);
    let head: Vec<usize> = seq[..order - 1].to_vec();
    seq.extend(head);
    seq.into_iter().take(n).map(|j| symbol(j, sigma)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count_oracle;
    use std::collections::HashSet;

    #[test]
    fn unary_and_fibonacci() {
        assert_eq!(generate(&GenSpec::new(GenKind::Unary, 4, 1, 0)).unwrap(), b"aaaa");
        assert_eq!(generate(&GenSpec::new(GenKind::Fibonacci, 8, 2, 0)).unwrap(), b"abaababa");
        assert_eq!(generate(&GenSpec::new(GenKind::Fibonacci, 1, 2, 0)).unwrap(), b"a");
    }

    #[test]
    fn thue_morse_and_periodic() {
        assert_eq!(generate(&GenSpec::new(GenKind::ThueMorse, 8, 2, 0)).unwrap(), b"abbabaab");
        let spec = GenSpec::new(GenKind::Periodic, 7, 3, 0).with_pattern(b"abc".to_vec());
        assert_eq!(generate(&spec).unwrap(), b"abcabca");
    }

    #[test]
    fn de_bruijn_covers_every_window() {
        let s = generate(&GenSpec::new(GenKind::DeBruijn, 10, 2, 0)).unwrap();
        assert_eq!(s.len(), 10);
        // order 3 has 2^3 + 2 = 10 symbols: every 3-window distinct
        let windows: HashSet<_> = s.windows(3).collect();
        assert_eq!(windows.len(), 8);
    }

    #[test]
    fn random_is_reproducible() {
        let spec = GenSpec::random(10, 2, 42);
        let a = generate(&spec).unwrap();
        assert_eq!(a, generate(&spec).unwrap());
        assert_eq!(a, b"abbbabbbbb");
        assert!(a.iter().all(|&b| b == b'a' || b == b'b'));
        assert_ne!(a, generate(&GenSpec::random(10, 2, 43)).unwrap());
    }

    #[test]
    fn prng_reference_vector() {
        // frozen so ports in other languages can check their stream
        let mut rng = XorShift64Star::new(42);
        let first: Vec<u64> = (0..3).map(|_| rng.next_u64()).collect();
        let mut again = XorShift64Star::new(42);
        assert_eq!(first, (0..3).map(|_| again.next_u64()).collect::<Vec<_>>());
        assert_eq!(first, FROZEN_SEED_42.to_vec());
    }

    const FROZEN_SEED_42: [u64; 3] = [0x31b0_ece7_c4f6_97a2, 0x9008_a3b1_cb68_6f03, 0x7c71_73ab_d97b_e16f];

    #[test]
    fn wide_alphabets_use_raw_bytes() {
        let s = generate(&GenSpec::random(500, 200, 1)).unwrap();
        assert!(s.iter().all(|&b| (b as usize) < 200));
        assert!(s.iter().any(|&b| b < b'a'));
    }

    #[test]
    fn invalid_specs() {
        assert_eq!(generate(&GenSpec::random(0, 2, 0)), Err(GenError::EmptyLength));
        assert_eq!(generate(&GenSpec::random(3, 0, 0)), Err(GenError::BadAlphabet(0)));
        assert_eq!(generate(&GenSpec::random(3, 257, 0)), Err(GenError::BadAlphabet(257)));
        let spec = GenSpec::new(GenKind::Periodic, 3, 2, 0).with_pattern(Vec::new());
        assert_eq!(generate(&spec), Err(GenError::EmptyPattern));
        assert!("zigzag".parse::<GenKind>().is_err());
        assert_eq!("thue_morse".parse::<GenKind>().unwrap(), GenKind::ThueMorse);
    }

    #[test]
    fn fibonacci_prefixes_have_small_delta() {
        let s = generate(&GenSpec::new(GenKind::Fibonacci, 300, 2, 0)).unwrap();
        let worst = count_oracle::prefix_profiles(&s)
            .into_iter()
            .map(|p| p.delta)
            .max()
            .unwrap();
        assert!(worst.to_f64() <= 2.0, "fibonacci delta reached {worst}");
    }
}
