//! Spectral statistics: normalized eigenvalue histograms, Gumbel moment
//! fits, local-window unfolding, and Poisson-vs-Wigner classification of
//! nearest-neighbor spacings.

use crate::error::{Error, Result};
use crate::spectra::{max_eigenvalue, SpectrumRecord};

/// Euler-Mascheroni constant, for the Gumbel moment fit.
pub const EULER_GAMMA: f64 = 0.5772156649015329;

/// Verdict margin separating the two reference KS distances.
pub const DEFAULT_MARGIN: f64 = 0.02;

/// A raw spacing below this relative threshold counts as degenerate.
const ZERO_SPACING_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BinMode {
    EqualWidth,
    EqualCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaPolicy {
    /// Delta = round(sqrt(sample count)).
    Auto,
    Fixed(usize),
}

impl DeltaPolicy {
    pub fn resolve(self, dim: usize) -> usize {
        match self {
            DeltaPolicy::Auto => ((dim as f64).sqrt().round() as usize).max(1),
            DeltaPolicy::Fixed(d) => d.max(1),
        }
    }
}

/// Probability-normalized histogram: sum over bins of density * width = 1.
#[derive(Debug, Clone)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub densities: Vec<f64>,
    pub count: usize,
    pub mode: BinMode,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.densities.len()
    }

    /// Build over [lo, hi] with the requested bin policy; the top edge is
    /// inclusive.
    fn build(samples: &[f64], lo: f64, hi: f64, bins: usize, mode: BinMode) -> Histogram {
        assert!(hi > lo && bins > 0);
        match mode {
            BinMode::EqualWidth => {
                let width = (hi - lo) / bins as f64;
                let mut counts = vec![0usize; bins];
                for &x in samples {
                    let idx = (((x - lo) / width) as usize).min(bins - 1);
                    counts[idx] += 1;
                }
                let n = samples.len() as f64;
                let densities = counts.iter().map(|&c| c as f64 / (n * width)).collect();
                let bin_edges = (0..=bins).map(|i| lo + i as f64 * width).collect();
                Histogram {
                    bin_edges,
                    densities,
                    count: samples.len(),
                    mode,
                }
            }
            BinMode::EqualCount => {
                let mut sorted = samples.to_vec();
                sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let per_bin = sorted.len().div_ceil(bins);
                let n = sorted.len() as f64;
                let mut bin_edges = vec![lo];
                let mut densities = Vec::new();
                let mut start = 0usize;
                while start < sorted.len() {
                    let mut end = (start + per_bin).min(sorted.len());
                    // Extend past ties so each bin has positive width.
                    let mut right = if end == sorted.len() {
                        hi
                    } else {
                        0.5 * (sorted[end - 1] + sorted[end])
                    };
                    while right <= *bin_edges.last().unwrap() && end < sorted.len() {
                        end += 1;
                        right = if end == sorted.len() {
                            hi
                        } else {
                            0.5 * (sorted[end - 1] + sorted[end])
                        };
                    }
                    let left = *bin_edges.last().unwrap();
                    if right <= left {
                        right = hi.max(left + f64::EPSILON * left.abs().max(1.0));
                    }
                    bin_edges.push(right);
                    densities.push((end - start) as f64 / (n * (right - left)));
                    start = end;
                }
                Histogram {
                    bin_edges,
                    densities,
                    count: sorted.len(),
                    mode,
                }
            }
        }
    }
}

/// Histogram of E / E_max over [min(0, E_min/E_max), 1].
pub fn normalized_eigenvalue_histogram(
    spec: &SpectrumRecord,
    delta: DeltaPolicy,
    mode: BinMode,
) -> Result<Histogram> {
    let e_max = max_eigenvalue(spec);
    if e_max <= 0.0 {
        return Err(Error::NonPositiveMax(e_max));
    }
    let values: Vec<f64> = spec.eigenvalues.iter().map(|e| e / e_max).collect();
    let lo = values.first().copied().unwrap().min(0.0);
    let d = delta.resolve(values.len());
    let bins = values.len().div_ceil(d);
    Ok(Histogram::build(&values, lo, 1.0, bins, mode))
}

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct GumbelParams {
    pub mu: f64,
    pub beta: f64,
}

impl GumbelParams {
    pub fn density(&self, x: f64) -> f64 {
        let z = (x - self.mu) / self.beta;
        (-z - (-z).exp()).exp() / self.beta
    }

    pub fn cdf(&self, x: f64) -> f64 {
        (-(-(x - self.mu) / self.beta).exp()).exp()
    }
}

/// Moment-matching fit: beta = sqrt(6 Var)/pi, mu = mean - gamma*beta.
pub fn fit_gumbel(samples: &[f64]) -> Result<GumbelParams> {
    if samples.len() < 10 {
        return Err(Error::DegenerateFit {
            need: 10,
            got: samples.len(),
        });
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    if var == 0.0 {
        return Err(Error::DegenerateFit {
            need: 10,
            got: samples.len(),
        });
    }
    let beta = (6.0 * var).sqrt() / std::f64::consts::PI;
    Ok(GumbelParams {
        mu: mean - EULER_GAMMA * beta,
        beta,
    })
}

/// Normalized nearest-neighbor spacings after local-window unfolding.
#[derive(Debug, Clone)]
pub struct UnfoldedSpacings {
    pub values: Vec<f64>,
    pub delta: usize,
    /// Fraction of raw spacings that were (numerically) zero.
    pub degenerate_fraction: f64,
}

/// Raw spacings s_I = (E_{I+1} - E_I) / (E_{I+D} - E_{I-D}) for
/// I = D+1 ... dim-D-1 (1-based on the sorted spectrum), then divided by
/// their mean so the normalized sequence averages to one.
pub fn unfold(spec: &SpectrumRecord, delta: DeltaPolicy) -> Result<UnfoldedSpacings> {
    let e = &spec.eigenvalues;
    let dim = e.len();
    let d = delta.resolve(dim);
    if dim <= 2 * d + 2 {
        return Err(Error::WindowTooWide { dim, delta: d });
    }
    let scale = e.last().unwrap().abs().max(1.0);
    let mut raw = Vec::with_capacity(dim - 2 * d - 1);
    let mut zeros = 0usize;
    for i in (d + 1)..=(dim - d - 1) {
        let num = e[i] - e[i - 1];
        let den = e[i - 1 + d] - e[i - 1 - d];
        if den == 0.0 {
            return Err(Error::DegenerateWindow { index: i, delta: d });
        }
        if num <= ZERO_SPACING_RTOL * scale {
            zeros += 1;
        }
        raw.push(num / den);
    }
    let mean = raw.iter().sum::<f64>() / raw.len() as f64;
    let values = raw.iter().map(|s| s / mean).collect();
    Ok(UnfoldedSpacings {
        values,
        delta: d,
        degenerate_fraction: zeros as f64 / raw.len() as f64,
    })
}

impl UnfoldedSpacings {
    /// Wrap an externally produced spacing sample, normalizing its mean to 1.
    pub fn from_samples(samples: Vec<f64>) -> Self {
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let zeros = samples.iter().filter(|&&s| s <= ZERO_SPACING_RTOL).count();
        let n = samples.len();
        UnfoldedSpacings {
            values: samples.into_iter().map(|s| s / mean).collect(),
            delta: 0,
            degenerate_fraction: zeros as f64 / n as f64,
        }
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpacingLaw {
    Poisson,
    Wigner,
}

/// Reference spacing density: e^{-s} (Poisson) or (pi s/2) e^{-pi s^2/4}
/// (Wigner surmise).
pub fn reference_density(kind: SpacingLaw, s: f64) -> f64 {
    match kind {
        SpacingLaw::Poisson => (-s).exp(),
        SpacingLaw::Wigner => {
            std::f64::consts::PI * s / 2.0 * (-std::f64::consts::PI * s * s / 4.0).exp()
        }
    }
}

pub fn reference_cdf(kind: SpacingLaw, s: f64) -> f64 {
    match kind {
        SpacingLaw::Poisson => 1.0 - (-s).exp(),
        SpacingLaw::Wigner => 1.0 - (-std::f64::consts::PI * s * s / 4.0).exp(),
    }
}

/// Kolmogorov-Smirnov distance of the sample against a reference CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0f64, |acc, (i, &x)| {
        let f = cdf(x);
        acc.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Poisson,
    Wigner,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Poisson => "poisson",
            Verdict::Wigner => "wigner",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SpacingClassification {
    pub ks_poisson: f64,
    pub ks_wigner: f64,
    pub verdict: Verdict,
    pub degenerate_fraction: f64,
}

/// KS comparison of the empirical spacing CDF against both references.
/// Inconclusive when neither wins by `margin`, when the sample has zero
/// variance, or when over half of the raw spacings were degenerate
/// (overpopulated integer spectra).
pub fn classify_spacings(spacings: &UnfoldedSpacings, margin: f64) -> SpacingClassification {
    let ks_poisson = ks_statistic(&spacings.values, |s| reference_cdf(SpacingLaw::Poisson, s));
    let ks_wigner = ks_statistic(&spacings.values, |s| reference_cdf(SpacingLaw::Wigner, s));
    let n = spacings.values.len() as f64;
    let mean = spacings.mean();
    let var = spacings
        .values
        .iter()
        .map(|s| (s - mean).powi(2))
        .sum::<f64>()
        / n;
    let verdict = if spacings.degenerate_fraction > 0.5 || var == 0.0 {
        Verdict::Inconclusive
    } else if ks_poisson < ks_wigner - margin {
        Verdict::Poisson
    } else if ks_wigner < ks_poisson - margin {
        Verdict::Wigner
    } else {
        Verdict::Inconclusive
    };
    SpacingClassification {
        ks_poisson,
        ks_wigner,
        verdict,
        degenerate_fraction: spacings.degenerate_fraction,
    }
}

/// Histogram of unfolded spacings over [0, max(4, s_max)].
pub fn spacing_histogram(
    spacings: &UnfoldedSpacings,
    delta: DeltaPolicy,
    mode: BinMode,
) -> Histogram {
    let s_max = spacings.values.iter().fold(0.0f64, |a, &s| a.max(s));
    let d = delta.resolve(spacings.values.len());
    let bins = spacings.values.len().div_ceil(d);
    Histogram::build(&spacings.values, 0.0, s_max.max(4.0), bins, mode)
}
