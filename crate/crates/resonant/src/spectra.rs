//! Dense symmetric diagonalization and eigenvalue post-processing.

use crate::couplings::Family;
use crate::error::{Error, Result};
use crate::hamiltonian::BlockMatrix;
use crate::partitions::BlockLabel;
use ndarray_linalg::{Eigh, UPLO};

/// Per-eigenpair residual contract of the backend, ||Hv - Ev|| <= tol * ||H||.
pub const SOLVER_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumSource {
    Block {
        label: BlockLabel,
        family: Family,
        seed: Option<u64>,
    },
    /// Eigenvalues loaded from a file or constructed synthetically.
    External,
}

/// Sorted eigenvalues of one block.
#[derive(Debug, Clone)]
pub struct SpectrumRecord {
    pub source: SpectrumSource,
    pub eigenvalues: Vec<f64>,
    pub solver_tolerance: f64,
}

impl SpectrumRecord {
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Self {
            source: SpectrumSource::External,
            eigenvalues,
            solver_tolerance: SOLVER_TOLERANCE,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

pub fn diagonalize(matrix: &BlockMatrix) -> Result<SpectrumRecord> {
    let entries = matrix.entries();
    let scale = entries.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let asym = entries
        .indexed_iter()
        .fold(0.0f64, |a, ((i, j), &v)| a.max((v - entries[(j, i)]).abs()));
    if asym > 1e-9 * scale.max(1.0) {
        return Err(Error::NotSymmetric {
            label: matrix.label(),
            asymmetry: asym,
        });
    }
    let (vals, _) = entries
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Diagonalization {
            label: matrix.label(),
            message: e.to_string(),
        })?;
    let mut eigenvalues = vals.to_vec();
    // LAPACK returns ascending order already; enforce the contract anyway.
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(SpectrumRecord {
        source: SpectrumSource::Block {
            label: matrix.label(),
            family: matrix.family(),
            seed: matrix.seed(),
        },
        eigenvalues,
        solver_tolerance: SOLVER_TOLERANCE,
    })
}

pub fn max_eigenvalue(spec: &SpectrumRecord) -> f64 {
    *spec.eigenvalues.last().expect("spectrum must be nonempty")
}

/// Largest distance of any eigenvalue to the nearest integer.
pub fn integrality_deviation(spec: &SpectrumRecord) -> f64 {
    spec.eigenvalues
        .iter()
        .map(|e| (e - e.round()).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone)]
pub struct DegeneracySummary {
    /// (representative value, multiplicity), ascending; representatives are
    /// cluster means.
    pub clusters: Vec<(f64, usize)>,
    pub cluster_tolerance: f64,
}

impl DegeneracySummary {
    /// Multiplicity of the cluster containing zero, if any.
    pub fn zero_multiplicity(&self) -> usize {
        self.clusters
            .iter()
            .find(|(rep, _)| rep.abs() <= self.cluster_tolerance.max(1e-300))
            .map(|&(_, mult)| mult)
            .unwrap_or(0)
    }
}

/// Default clustering threshold, scaled by the spectral range.
pub fn default_cluster_tolerance(spec: &SpectrumRecord) -> f64 {
    1e-8 * max_eigenvalue(spec).abs().max(1.0)
}

/// Single-linkage clustering of the sorted eigenvalues: a new cluster starts
/// wherever the gap to the previous eigenvalue exceeds `tol`.
pub fn degeneracy_summary(spec: &SpectrumRecord, tol: f64) -> DegeneracySummary {
    assert!(tol > 0.0);
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..=spec.dim() {
        let split = i == spec.dim() || spec.eigenvalues[i] - spec.eigenvalues[i - 1] > tol;
        if split {
            let slice = &spec.eigenvalues[start..i];
            let rep = slice.iter().sum::<f64>() / slice.len() as f64;
            clusters.push((rep, slice.len()));
            start = i;
        }
    }
    DegeneracySummary {
        clusters,
        cluster_tolerance: tol,
    }
}

#[derive(Debug, Clone)]
pub struct InheritanceReport {
    pub holds: bool,
    /// Eigenvalues of the smaller block with no available partner.
    pub unmatched: Vec<f64>,
}

/// Greedy two-pointer matching of the smaller spectrum into the larger one;
/// each large-block eigenvalue is consumed at most once.
pub fn inheritance_check(
    spec_small: &SpectrumRecord,
    spec_large: &SpectrumRecord,
    tol: f64,
) -> InheritanceReport {
    let mut unmatched = Vec::new();
    let large = &spec_large.eigenvalues;
    let mut j = 0;
    for &e in &spec_small.eigenvalues {
        while j < large.len() && large[j] < e - tol {
            j += 1;
        }
        if j < large.len() && (large[j] - e).abs() <= tol {
            j += 1;
        } else {
            unmatched.push(e);
        }
    }
    InheritanceReport {
        holds: unmatched.is_empty(),
        unmatched,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::couplings::CouplingProvider;
    use crate::hamiltonian::assemble_block;

    fn spectrum_of(family: Family, seed: u64, n: u32, m: u32) -> SpectrumRecord {
        let p = CouplingProvider::new(family, seed);
        diagonalize(&assemble_block(BlockLabel::new(n, m), &p).unwrap()).unwrap()
    }

    #[test]
    fn rank_one_szego_block() {
        let spec = spectrum_of(Family::Szego, 0, 2, 3);
        assert_eq!(spec.dim(), 2);
        assert!(spec.eigenvalues[0].abs() < 1e-12);
        assert!((spec.eigenvalues[1] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn one_by_one_block() {
        let spec = spectrum_of(Family::Lll, 0, 3, 0);
        assert_eq!(spec.dim(), 1);
        // sqrt ladder factors leave a couple of ulp on N(N-1)/2.
        assert!((spec.eigenvalues[0] - 3.0).abs() < 1e-12);
        assert!((max_eigenvalue(&spec) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn cf_two_particle_closed_form() {
        // E_I = 1/((I+1)(2I+1)) with I = 0..m; M = 5 means m = 2.
        let spec = spectrum_of(Family::Cf, 0, 2, 5);
        let expect = [1.0 / 15.0, 1.0 / 6.0, 1.0];
        assert_eq!(spec.dim(), 3);
        for (got, want) in spec.eigenvalues.iter().zip(expect) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
        // max distance to the nearest integer over {1/15, 1/6, 1}.
        assert!((integrality_deviation(&spec) - 1.0 / 6.0).abs() < 1e-10);
    }

    #[test]
    fn szego_integrality_and_emax() {
        let spec = spectrum_of(Family::Szego, 0, 3, 5);
        assert!(integrality_deviation(&spec) <= 1e-8);
        let spec = spectrum_of(Family::Szego, 0, 4, 6);
        assert!((max_eigenvalue(&spec) - 24.0).abs() <= 1e-8);
        let spec = spectrum_of(Family::Cf, 0, 4, 6);
        assert!((max_eigenvalue(&spec) - 6.0).abs() <= 1e-8);
    }

    #[test]
    fn eigenvalue_sum_matches_trace() {
        for family in Family::ALL {
            let p = CouplingProvider::new(family, 9);
            let h = assemble_block(BlockLabel::new(5, 9), &p).unwrap();
            let spec = diagonalize(&h).unwrap();
            let sum: f64 = spec.eigenvalues.iter().sum();
            let tr = h.trace();
            assert!((sum - tr).abs() <= 1e-9 * tr.abs().max(1.0), "{family}");
        }
    }

    #[test]
    fn degeneracy_clusters() {
        let spec = spectrum_of(Family::Szego, 0, 2, 11);
        let summary = degeneracy_summary(&spec, default_cluster_tolerance(&spec));
        assert_eq!(summary.zero_multiplicity(), 5);
        assert_eq!(summary.clusters.len(), 2);
        assert!((summary.clusters[1].0 - 12.0).abs() < 1e-9);

        let distinct = SpectrumRecord::from_eigenvalues(vec![1.0, 2.0, 3.0]);
        let s = degeneracy_summary(&distinct, 1e-9);
        assert_eq!(s.clusters.len(), 3);
        assert!(s.clusters.iter().all(|&(_, m)| m == 1));

        let spec = spectrum_of(Family::Lll, 0, 2, 9);
        let summary = degeneracy_summary(&spec, default_cluster_tolerance(&spec));
        assert_eq!(summary.zero_multiplicity(), 4);
        assert_eq!(summary.clusters.last().unwrap().1, 1);
        assert!((summary.clusters.last().unwrap().0 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn inheritance_for_cf_but_not_random() {
        let small = spectrum_of(Family::Cf, 0, 3, 4);
        let large = spectrum_of(Family::Cf, 0, 3, 6);
        assert!(inheritance_check(&small, &large, 1e-8).holds);

        let same = inheritance_check(&small, &small, 1e-8);
        assert!(same.holds);

        let rs = spectrum_of(Family::Random, 1, 3, 4);
        let rl = spectrum_of(Family::Random, 1, 3, 6);
        let report = inheritance_check(&rs, &rl, 1e-8);
        assert!(!report.holds);
        assert!(!report.unmatched.is_empty());
    }

    #[test]
    fn spectrum_invariant_under_basis_permutation() {
        // Reassemble with a shuffled basis by conjugating with a permutation:
        // equivalently, permute rows and columns of the assembled matrix.
        use ndarray::Array2;
        let p = CouplingProvider::new(Family::Random, 31);
        let h = assemble_block(BlockLabel::new(4, 7), &p).unwrap();
        let dim = h.dim();
        let perm: Vec<usize> = (0..dim).rev().collect();
        let mut shuffled = Array2::zeros((dim, dim));
        for i in 0..dim {
            for j in 0..dim {
                shuffled[(i, j)] = h.entries()[(perm[i], perm[j])];
            }
        }
        let (vals, _) = shuffled.eigh(UPLO::Lower).unwrap();
        let spec = diagonalize(&h).unwrap();
        for (a, b) in spec.eigenvalues.iter().zip(vals.iter()) {
            assert!((a - b).abs() <= 1e-9);
        }
    }
}
