//! Fock basis of an (N,M)-block as integer partitions of M into at most N parts.
//!
//! A basis state is an occupation vector (n_0, ..., n_M) with
//! sum n_k = N and sum k*n_k = M. The nonzero modes k >= 1, each repeated
//! n_k times, form a partition of M with at most N parts; n_0 absorbs the
//! remaining particles.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;

/// Largest m_level for which p(M) still fits in a u64.
pub const MAX_M: u32 = 400;

/// Label (N, M) of one invariant block of the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct BlockLabel {
    pub n_particles: u32,
    pub m_level: u32,
}

impl BlockLabel {
    pub fn new(n_particles: u32, m_level: u32) -> Self {
        Self {
            n_particles,
            m_level,
        }
    }
}

impl fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={}, M={}", self.n_particles, self.m_level)
    }
}

/// Occupation-number vector of a single Fock state, length m_level + 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FockState {
    pub occupations: Vec<u32>,
}

impl FockState {
    pub fn n_particles(&self) -> u32 {
        self.occupations.iter().sum()
    }

    pub fn m_level(&self) -> u32 {
        self.occupations
            .iter()
            .enumerate()
            .map(|(k, &n)| k as u32 * n)
            .sum()
    }
}

/// Ordered basis of one block together with an exact reverse lookup.
#[derive(Debug, Clone)]
pub struct BasisIndex {
    label: BlockLabel,
    states: Vec<FockState>,
    lookup: HashMap<Vec<u32>, usize>,
}

impl BasisIndex {
    pub fn label(&self) -> BlockLabel {
        self.label
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn get(&self, i: usize) -> &FockState {
        &self.states[i]
    }

    /// Ordinal position of an occupation vector, if it belongs to the block.
    pub fn position(&self, occupations: &[u32]) -> Option<usize> {
        self.lookup.get(occupations).copied()
    }
}

/// p_N(M): partitions of M into at most N parts, via the recursion
/// p_N(M) = p_{N-1}(M) + p_N(M-N).
pub fn count_partitions(label: BlockLabel) -> Result<u64> {
    let m = label.m_level;
    if m > MAX_M {
        return Err(Error::PartitionRange(m));
    }
    // Parts of M never exceed M in number, so cap N at M.
    let n = label.n_particles.min(m) as usize;
    let m = m as usize;
    let mut table = vec![vec![0u64; m + 1]; n + 1];
    for row in table.iter_mut() {
        row[0] = 1;
    }
    for i in 1..=n {
        for j in 1..=m {
            let skip = table[i - 1][j];
            let take = if j >= i { table[i][j - i] } else { 0 };
            table[i][j] = skip + take;
        }
    }
    Ok(table[n][m])
}

/// All Fock states of the block, in canonical order: occupation vectors
/// lexicographically decreasing when read from mode M down to mode 0.
pub fn enumerate_basis(label: BlockLabel) -> BasisIndex {
    let n = label.n_particles;
    let m = label.m_level as usize;
    let mut states = Vec::new();
    let mut occ = vec![0u32; m + 1];
    descend(n, label.m_level, label.m_level, &mut occ, &mut states);
    let lookup = states
        .iter()
        .enumerate()
        .map(|(i, s): (usize, &FockState)| (s.occupations.clone(), i))
        .collect();
    BasisIndex {
        label,
        states,
        lookup,
    }
}

// Recursive descent over the largest remaining part. Choosing parts from
// large to small emits states exactly in the canonical order.
fn descend(
    parts_left: u32,
    remaining: u32,
    max_part: u32,
    occ: &mut Vec<u32>,
    out: &mut Vec<FockState>,
) {
    if remaining == 0 {
        let mut full = occ.clone();
        full[0] = parts_left;
        out.push(FockState { occupations: full });
        return;
    }
    if parts_left == 0 {
        return;
    }
    let top = max_part.min(remaining);
    for part in (1..=top).rev() {
        occ[part as usize] += 1;
        descend(parts_left - 1, remaining - part, part, occ, out);
        occ[part as usize] -= 1;
    }
}

/// Fixed-N asymptotic M^{N-1} / (N! (N-1)!), computed in log space.
pub fn asymptotic_count_fixed_n(label: BlockLabel) -> f64 {
    let n = label.n_particles as f64;
    let m = label.m_level as f64;
    let log = (n - 1.0) * m.ln() - ln_factorial(n) - ln_factorial(n - 1.0);
    log.exp()
}

/// Leading Hardy-Ramanujan term exp(pi sqrt(2m/3)) / (4 m sqrt(3)).
pub fn asymptotic_count_total(m: u32) -> f64 {
    let m = m as f64;
    (std::f64::consts::PI * (2.0 * m / 3.0).sqrt()).exp() / (4.0 * m * 3.0f64.sqrt())
}

fn ln_factorial(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x + 1.0)
}
