use ndarray::Array2;
use resonant::couplings::{CouplingProvider, Quartet};
use resonant::hamiltonian::apply_quartet;
use resonant::partitions::{enumerate_basis, BlockLabel};

/// Brute-force assembly from the definition: H = (1/2) sum over all ordered
/// resonant quartets (n, m, k, l) with every index in 0..=M of
/// C_nmkl a^dag_n a^dag_m a_k a_l, with no multiplicity folding or use of
/// symmetry. Quadratic in the mode count per column; only for small blocks.
pub fn brute_force_block(label: BlockLabel, provider: &CouplingProvider) -> Array2<f64> {
    let basis = enumerate_basis(label);
    let dim = basis.len();
    let top = label.m_level;
    let mut h = Array2::<f64>::zeros((dim, dim));
    for (j, state) in basis.states().iter().enumerate() {
        for k in 0..=top {
            for l in 0..=top {
                let s = k + l;
                for n in 0..=s.min(top) {
                    let m = s - n;
                    if m > top {
                        continue;
                    }
                    let q = Quartet::new(n, m, k, l);
                    if let Some((out, amp)) = apply_quartet(state, &q) {
                        let i = basis.position(&out.occupations).unwrap();
                        h[[i, j]] += 0.5 * provider.coupling(q).unwrap() * amp;
                    }
                }
            }
        }
    }
    h
}
