//! Assembly of the real symmetric Hamiltonian matrix within one (N,M)-block.
//!
//! The two-body operator moves at most two particles per application, so for
//! each source basis state only quartets whose annihilation pair sits on
//! occupied modes contribute. Columns are assembled independently (and in
//! parallel), each in a fixed quartet order, then mirrored across the
//! diagonal, so the result is exactly symmetric and bitwise reproducible
//! for any thread count.

use crate::couplings::{CouplingProvider, Quartet};
use crate::error::{Error, Result};
use crate::partitions::{count_partitions, enumerate_basis, BasisIndex, BlockLabel, FockState};
use ndarray::Array2;
use rayon::prelude::*;

/// Guard against accidental multi-gigabyte allocations; overridable.
pub const DEFAULT_DIM_CAP: usize = 20_000;

/// Dense symmetric matrix of the Hamiltonian restricted to one block.
#[derive(Debug, Clone)]
pub struct BlockMatrix {
    label: BlockLabel,
    family: crate::couplings::Family,
    seed: Option<u64>,
    entries: Array2<f64>,
}

impl BlockMatrix {
    pub fn label(&self) -> BlockLabel {
        self.label
    }

    pub fn family(&self) -> crate::couplings::Family {
        self.family
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.diag().sum()
    }

    /// Measured fraction of nonzero entries. Reported, never asserted on.
    pub fn nonzero_fraction(&self) -> f64 {
        let nz = self.entries.iter().filter(|&&v| v != 0.0).count();
        nz as f64 / (self.dim() * self.dim()) as f64
    }
}

/// Action of the normal-ordered term a+_n a+_m a_k a_l on a Fock state:
/// annihilate l, then k, then create m, then n. `None` when an annihilation
/// hits an empty mode.
pub fn apply_quartet(state: &FockState, q: &Quartet) -> Option<(FockState, f64)> {
    let mut occ = state.occupations.clone();
    let mut amp = 1.0f64;
    for mode in [q.l, q.k] {
        let c = occ.get(mode as usize).copied().unwrap_or(0);
        if c == 0 {
            return None;
        }
        amp *= (c as f64).sqrt();
        occ[mode as usize] -= 1;
    }
    for mode in [q.m, q.n] {
        let idx = mode as usize;
        if idx >= occ.len() {
            // Creating above mode M leaves the block; resonance makes this
            // unreachable for in-block annihilations, but guard anyway.
            return None;
        }
        occ[idx] += 1;
        amp *= (occ[idx] as f64).sqrt();
    }
    Some((FockState { occupations: occ }, amp))
}

#[derive(Debug, Clone, Copy)]
pub struct AssemblyOptions {
    pub dim_cap: usize,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        Self {
            dim_cap: DEFAULT_DIM_CAP,
        }
    }
}

pub fn assemble_block(label: BlockLabel, provider: &CouplingProvider) -> Result<BlockMatrix> {
    assemble_block_with(label, provider, AssemblyOptions::default())
}

pub fn assemble_block_with(
    label: BlockLabel,
    provider: &CouplingProvider,
    opts: AssemblyOptions,
) -> Result<BlockMatrix> {
    let basis = checked_basis(label, opts)?;
    let dim = basis.len();
    let columns: Vec<Vec<f64>> = (0..dim)
        .into_par_iter()
        .map(|j| column(&basis, j, provider))
        .collect::<Result<_>>()?;

    // Keep the lower triangle of each column and mirror it, so H[i][j] and
    // H[j][i] are the same computed float.
    let mut entries = Array2::zeros((dim, dim));
    for (j, col) in columns.iter().enumerate() {
        for i in j..dim {
            entries[(i, j)] = col[i];
            entries[(j, i)] = col[i];
        }
    }
    Ok(BlockMatrix {
        label,
        family: provider.family(),
        seed: Some(provider.seed()),
        entries,
    })
}

/// Every entry evaluated independently from its own column, no mirroring.
/// Exists for the Hermiticity cross-check; `assemble_block` is the one to use.
pub fn assemble_block_unmirrored(
    label: BlockLabel,
    provider: &CouplingProvider,
) -> Result<BlockMatrix> {
    let basis = checked_basis(label, AssemblyOptions::default())?;
    let dim = basis.len();
    let mut entries = Array2::zeros((dim, dim));
    for j in 0..dim {
        let col = column(&basis, j, provider)?;
        for i in 0..dim {
            entries[(i, j)] = col[i];
        }
    }
    Ok(BlockMatrix {
        label,
        family: provider.family(),
        seed: Some(provider.seed()),
        entries,
    })
}

fn checked_basis(label: BlockLabel, opts: AssemblyOptions) -> Result<BasisIndex> {
    let dim = count_partitions(label)?;
    if dim > opts.dim_cap as u64 {
        return Err(Error::BlockTooLarge {
            label,
            dim,
            cap: opts.dim_cap,
        });
    }
    Ok(enumerate_basis(label))
}

// One column of H: all contributions of the source state `j`. Ordered
// quartets are folded into annihilation pairs k <= l on occupied modes and
// creation splittings n <= m of s = k+l, weighted by the count of ordered
// arrangements; the overall factor 1/2 of the Hamiltonian is applied here.
fn column(basis: &BasisIndex, j: usize, provider: &CouplingProvider) -> Result<Vec<f64>> {
    let source = basis.get(j);
    let occ = &source.occupations;
    let top = occ.len() - 1;
    let mut col = vec![0.0f64; basis.len()];
    for k in 0..=top {
        if occ[k] == 0 {
            continue;
        }
        for l in k..=top {
            if occ[l] == 0 || (l == k && occ[k] < 2) {
                continue;
            }
            let s = (k + l) as u32;
            for n in 0..=s / 2 {
                let m = s - n;
                if m as usize > top {
                    continue;
                }
                let q = Quartet::new(n, m, k as u32, l as u32);
                let (image, amp) = match apply_quartet(source, &q) {
                    Some(x) => x,
                    None => continue,
                };
                let i = basis
                    .position(&image.occupations)
                    .expect("resonant quartet left the block");
                let mult =
                    if (k as u32) < l as u32 { 2.0 } else { 1.0 } * if n < m { 2.0 } else { 1.0 };
                col[i] += 0.5 * mult * provider.coupling(q)? * amp;
            }
        }
    }
    Ok(col)
}
