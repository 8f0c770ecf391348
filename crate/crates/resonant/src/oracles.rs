//! Closed-form two-particle and maximal-eigenvalue references, used as
//! ground truth by the verification suites and the test batteries.

use crate::couplings::{CouplingProvider, Family, Quartet};
use crate::error::{Error, Result};
use crate::partitions::BlockLabel;
use ndarray::Array2;
use num_rational::Ratio;

/// Exact two-particle spectrum of a solvable family at odd M = 2m+1.
#[derive(Debug, Clone)]
pub struct TwoParticleSpectrum {
    pub family: Family,
    pub m_level: u32,
    /// Exact rational eigenvalues, descending in the level index I.
    pub eigenvalues: Vec<Ratio<i64>>,
}

impl TwoParticleSpectrum {
    /// Eigenvalues as floats, sorted ascending.
    pub fn eigenvalues_ascending(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .eigenvalues
            .iter()
            .map(|r| *r.numer() as f64 / *r.denom() as f64)
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }
}

/// The (m+1)x(m+1) matrix with entries 2 C_{I,M-I,J,M-J}. For even M the
/// same formula is evaluated formally; the physical even-M block goes
/// through the general assembly instead.
pub fn two_particle_matrix(provider: &CouplingProvider, m_level: u32) -> Array2<f64> {
    assert!(m_level >= 1);
    let rows = if m_level % 2 == 1 {
        m_level.div_ceil(2)
    } else {
        m_level / 2 + 1
    } as usize;
    let mut h = Array2::zeros((rows, rows));
    for i in 0..rows {
        for j in 0..rows {
            let q = Quartet::new(i as u32, m_level - i as u32, j as u32, m_level - j as u32);
            h[(i, j)] = 2.0
                * provider
                    .coupling(q)
                    .expect("two-particle coupling in range");
        }
    }
    h
}

/// Closed-form two-particle spectra: Szego has m zeros and M+1; MRS and LLL
/// have m zeros and 1; CF has E_I = 1/((I+1)(2I+1)) for I = 0..m.
pub fn two_particle_spectrum(family: Family, m_level: u32) -> Result<TwoParticleSpectrum> {
    if m_level.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "closed-form two-particle spectra require odd M, got {m_level}"
        )));
    }
    let m = ((m_level - 1) / 2) as i64;
    let eigenvalues = match family {
        Family::Szego => {
            let mut v = vec![Ratio::from_integer((m_level + 1) as i64)];
            v.extend(std::iter::repeat_n(Ratio::from_integer(0), m as usize));
            v
        }
        Family::Mrs | Family::Lll => {
            let mut v = vec![Ratio::from_integer(1)];
            v.extend(std::iter::repeat_n(Ratio::from_integer(0), m as usize));
            v
        }
        Family::Cf => (0..=m)
            .map(|i| Ratio::new(1, (i + 1) * (2 * i + 1)))
            .collect(),
        other => return Err(Error::UnsupportedFamily(other.name().to_string())),
    };
    Ok(TwoParticleSpectrum {
        family,
        m_level,
        eigenvalues,
    })
}

/// Empirical maximal-eigenvalue formulas: (N-1)(N+2M)/2 for Szego,
/// N(N-1)/2 for the partially solvable families.
pub fn expected_max_eigenvalue(family: Family, label: BlockLabel) -> Result<f64> {
    let n = label.n_particles as f64;
    let m = label.m_level as f64;
    match family {
        Family::Szego => Ok((n - 1.0) * (n + 2.0 * m) / 2.0),
        Family::Mrs | Family::Cf | Family::Lll => Ok(n * (n - 1.0) / 2.0),
        other => Err(Error::UnsupportedFamily(other.name().to_string())),
    }
}
