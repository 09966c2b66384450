//! Distinct-word trajectory R₀..Rₙ and singleton diagnostics.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::hash::Hash;

#[derive(Debug, Clone)]
pub struct WordTrajectory {
    /// r[k] = number of distinct tokens among the first k tokens; r[0] = 0
    pub r: Vec<u64>,
    pub n: usize,
    /// number of tokens occurring exactly once in the whole sequence
    pub singletons: u64,
}

impl WordTrajectory {
    pub fn r_n(&self) -> u64 {
        self.r[self.n]
    }

    /// R_{n,1}/Rₙ, which converges to θ under the model; diagnostic only.
    pub fn singleton_ratio(&self) -> f64 {
        self.singletons as f64 / self.r_n() as f64
    }
}

/// One pass with a hash map: count first occurrences for r[k], occurrence
/// totals for the singleton count.
pub fn distinct_word_trajectory<T: Eq + Hash + Clone>(tokens: &[T]) -> Result<WordTrajectory> {
    if tokens.is_empty() {
        return Err(Error::NoAnalyzableContent);
    }
    let mut counts: HashMap<T, u64> = HashMap::with_capacity(tokens.len());
    let mut r = Vec::with_capacity(tokens.len() + 1);
    r.push(0u64);
    let mut distinct = 0u64;
    for tok in tokens {
        let c = counts.entry(tok.clone()).or_insert(0);
        if *c == 0 {
            distinct += 1;
        }
        *c += 1;
        r.push(distinct);
    }
    let singletons = counts.values().filter(|&&c| c == 1).count() as u64;
    Ok(WordTrajectory {
        r,
        n: tokens.len(),
        singletons,
    })
}
