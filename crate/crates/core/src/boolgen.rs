//! Random Boolean functions and their decision tables.
//!
//! Truth tables are drawn from ChaCha8 (`rand_chacha` 0.3). The generator is
//! seeded with `seed_from_u64(seed)` and switched to stream
//! `(n << 32) | index`, so every function of a suite can be regenerated on
//! its own. Bits are taken from consecutive `next_u64` words, least
//! significant bit first.

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::table::DecisionTable;

pub const MAX_VARIABLES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    words: Vec<u64>,
}

fn check_n(n: usize) -> Result<()> {
    if (1..=MAX_VARIABLES).contains(&n) {
        Ok(())
    } else {
        Err(Error::Spec(format!(
            "number of variables must be in 1..={MAX_VARIABLES}, got {n}"
        )))
    }
}

impl BooleanFunction {
    /// Builds a function from its values on `0..2^n`, where the input with
    /// encoding `i` has `x1` as the most significant bit.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> bool) -> Result<Self> {
        check_n(n)?;
        let len = 1usize << n;
        let mut words = vec![0u64; len.div_ceil(64)];
        for i in 0..len {
            if f(i) {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Ok(Self { n, words })
    }

    pub fn from_truth_table(n: usize, bits: &[bool]) -> Result<Self> {
        check_n(n)?;
        if bits.len() != 1 << n {
            return Err(Error::Spec(format!(
                "truth table for {n} variables needs {} entries, got {}",
                1usize << n,
                bits.len()
            )));
        }
        Self::from_fn(n, |i| bits[i])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self, input: usize) -> bool {
        assert!(input < self.len(), "input {input} out of range");
        (self.words[input / 64] >> (input % 64)) & 1 == 1
    }

    /// Number of inputs mapped to 1.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Truth table as hex, input 0 in the lowest bit of the last digit.
    pub fn to_hex(&self) -> String {
        let digits = self.len().div_ceil(4);
        let mut s = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let nibble = (self.words[d / 16] >> ((d % 16) * 4)) & 0xf;
            s.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        s
    }
}

/// Function `index` of the suite for `n` variables and `seed`.
pub fn random_function(n: usize, seed: u64, index: u32) -> Result<BooleanFunction> {
    check_n(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | index as u64);
    let len = 1usize << n;
    let mut words: Vec<u64> = (0..len.div_ceil(64)).map(|_| rng.next_u64()).collect();
    if len < 64 {
        words[0] &= (1u64 << len) - 1;
    }
    Ok(BooleanFunction { n, words })
}

/// Functions `0..count` for `n` variables.
pub fn suite(n: usize, count: u32, seed: u64) -> Result<Vec<BooleanFunction>> {
    (0..count).map(|i| random_function(n, seed, i)).collect()
}

/// The table with one row per input in increasing encoding and decision 0/1.
pub fn table_of(f: &BooleanFunction) -> DecisionTable {
    let n = f.n();
    let names = (1..=n).map(|i| format!("x{i}")).collect();
    let rows = (0..f.len())
        .map(|i| (0..n).map(|j| ((i >> (n - 1 - j)) & 1) as u32).collect())
        .collect();
    let decisions = (0..f.len()).map(|i| f.value(i) as u32).collect();
    DecisionTable::new(names, rows, decisions).expect("inputs of a Boolean function are distinct")
}

/// A suite description such as `bool:n=4,count=100,seed=42`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteSpec {
    pub n: usize,
    pub count: u32,
    pub seed: u64,
}

impl SuiteSpec {
    pub const DEFAULT_COUNT: u32 = 100;
    pub const DEFAULT_SEED: u64 = 42;

    pub fn functions(&self) -> Result<Vec<BooleanFunction>> {
        suite(self.n, self.count, self.seed)
    }
}

impl fmt::Display for SuiteSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bool:n={},count={},seed={}", self.n, self.count, self.seed)
    }
}

impl FromStr for SuiteSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix("bool:")
            .ok_or_else(|| Error::Spec(format!("boolean suite must start with 'bool:': {s}")))?;
        let mut n = None;
        let mut count = Self::DEFAULT_COUNT;
        let mut seed = Self::DEFAULT_SEED;
        for part in body.split(',').filter(|p| !p.trim().is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Spec(format!("expected key=value, got '{part}'")))?;
            let bad = |_| Error::Spec(format!("bad value for {}: '{value}'", key.trim()));
            match key.trim() {
                "n" => n = Some(value.trim().parse::<usize>().map_err(bad)?),
                "count" => count = value.trim().parse().map_err(bad)?,
                "seed" => seed = value.trim().parse().map_err(bad)?,
                other => return Err(Error::Spec(format!("unknown key '{other}'"))),
            }
        }
        let n = n.ok_or_else(|| Error::Spec("boolean suite needs n=".into()))?;
        check_n(n)?;
        Ok(SuiteSpec { n, count, seed })
    }
}
