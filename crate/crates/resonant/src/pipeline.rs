//! Orchestration and artifact output: assemble -> diagonalize -> statistics,
//! with flat-file outputs (CSV/JSON) that are byte-identical across reruns
//! and thread counts.

use crate::couplings::{CouplingProvider, Family};
use crate::error::{Error, Result};
use crate::hamiltonian::{assemble_block_with, AssemblyOptions};
use crate::oracles;
use crate::partitions::BlockLabel;
use crate::spectra::{
    default_cluster_tolerance, degeneracy_summary, diagonalize, inheritance_check,
    integrality_deviation, max_eigenvalue, SpectrumRecord,
};
use crate::statistics::{
    classify_spacings, fit_gumbel, normalized_eigenvalue_histogram, reference_density,
    spacing_histogram, unfold, BinMode, DeltaPolicy, GumbelParams, Histogram, SpacingLaw, Verdict,
};
use std::fs;
use std::path::Path;

/// Shortest round-trip decimal form (Rust's f64 Display never exceeds 17
/// significant digits).
pub fn fmt_float(v: f64) -> String {
    format!("{v}")
}

/// Run a closure inside a rayon pool of the given size. `None` uses the
/// default pool. Per-block output is deterministic either way.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        None => f(),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .expect("rayon pool")
            .install(f),
    }
}

pub fn write_eigs_csv(path: &Path, eigenvalues: &[f64]) -> Result<()> {
    let mut out = String::new();
    for e in eigenvalues {
        out.push_str(&fmt_float(*e));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_eigs_csv(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidArgument(format!("bad eigenvalue line `{l}`: {e}")))
        })
        .collect()
}

pub fn write_hist_csv(path: &Path, hist: &Histogram) -> Result<()> {
    let mut out = String::from("bin_left,bin_right,density\n");
    for (d, w) in hist.densities.iter().zip(hist.bin_edges.windows(2)) {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_float(w[0]),
            fmt_float(w[1]),
            fmt_float(*d)
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn write_matrix_csv(path: &Path, entries: &ndarray::Array2<f64>) -> Result<()> {
    let mut out = String::new();
    for row in entries.rows() {
        let line: Vec<String> = row.iter().map(|v| fmt_float(*v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// JSON sidecar written next to eigs.csv by the spectrum stage.
#[derive(Debug, serde::Serialize)]
pub struct SpectrumSidecar {
    pub n: u32,
    pub m: u32,
    pub family: String,
    pub seed: Option<u64>,
    pub dim: usize,
    pub e_max: f64,
    pub integrality_deviation: f64,
    pub zero_multiplicity: usize,
    pub cluster_tolerance: f64,
    pub solver_tolerance: f64,
    pub nonzero_fraction: f64,
}

#[derive(Debug, serde::Serialize)]
pub struct StatsReport {
    pub delta: usize,
    pub degenerate_fraction: Option<f64>,
    pub ks_poisson: Option<f64>,
    pub ks_wigner: Option<f64>,
    pub verdict: Verdict,
    pub gumbel: Option<GumbelParams>,
    pub e_max: Option<f64>,
    /// Set when unfolding failed and the verdict was forced inconclusive.
    pub diagnostic: Option<String>,
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub family: Family,
    pub seed: u64,
    pub normalize_c0000: Option<bool>,
    pub label: BlockLabel,
    pub delta: DeltaPolicy,
    pub bin_mode: BinMode,
    pub margin: f64,
    pub dim_cap: usize,
}

impl RunConfig {
    pub fn new(family: Family, seed: u64, label: BlockLabel) -> Self {
        Self {
            family,
            seed,
            normalize_c0000: None,
            label,
            delta: DeltaPolicy::Auto,
            bin_mode: BinMode::EqualWidth,
            margin: crate::statistics::DEFAULT_MARGIN,
            dim_cap: crate::hamiltonian::DEFAULT_DIM_CAP,
        }
    }

    pub fn provider(&self) -> CouplingProvider {
        match self.normalize_c0000 {
            None => CouplingProvider::new(self.family, self.seed),
            Some(norm) => CouplingProvider::with_normalization(self.family, self.seed, norm),
        }
    }
}

#[derive(Debug, serde::Serialize)]
pub struct BlockRunSummary {
    pub n: u32,
    pub m: u32,
    pub family: String,
    pub seed: u64,
    pub dim: usize,
    pub e_max: f64,
    pub verdict: Verdict,
    pub ks_poisson: Option<f64>,
    pub ks_wigner: Option<f64>,
}

/// Full per-block pipeline: assemble, diagonalize, then write eigs.csv,
/// hist.csv (normalized eigenvalues), spacing_hist.csv (when unfolding
/// succeeds) and stats.json under `outdir` with a `<family>_n{N}_m{M}_`
/// prefix.
pub fn run_block(config: &RunConfig, outdir: &Path) -> Result<BlockRunSummary> {
    fs::create_dir_all(outdir)?;
    let provider = config.provider();
    let matrix = assemble_block_with(
        config.label,
        &provider,
        AssemblyOptions {
            dim_cap: config.dim_cap,
        },
    )?;
    let spec = diagonalize(&matrix)?;
    let prefix = format!(
        "{}_n{}_m{}",
        config.family, config.label.n_particles, config.label.m_level
    );
    write_eigs_csv(
        &outdir.join(format!("{prefix}_eigs.csv")),
        &spec.eigenvalues,
    )?;

    let e_max = max_eigenvalue(&spec);
    let sidecar = SpectrumSidecar {
        n: config.label.n_particles,
        m: config.label.m_level,
        family: config.family.to_string(),
        seed: matrix.seed(),
        dim: spec.dim(),
        e_max,
        integrality_deviation: integrality_deviation(&spec),
        zero_multiplicity: degeneracy_summary(&spec, default_cluster_tolerance(&spec))
            .zero_multiplicity(),
        cluster_tolerance: default_cluster_tolerance(&spec),
        solver_tolerance: spec.solver_tolerance,
        nonzero_fraction: matrix.nonzero_fraction(),
    };
    write_json(&outdir.join(format!("{prefix}_eigs.json")), &sidecar)?;

    let gumbel = if e_max > 0.0 {
        let normalized: Vec<f64> = spec.eigenvalues.iter().map(|e| e / e_max).collect();
        fit_gumbel(&normalized).ok()
    } else {
        None
    };
    if e_max > 0.0 {
        let hist = normalized_eigenvalue_histogram(&spec, config.delta, config.bin_mode)?;
        write_hist_csv(&outdir.join(format!("{prefix}_hist.csv")), &hist)?;
    }

    let stats = match unfold(&spec, config.delta) {
        Ok(spacings) => {
            let class = classify_spacings(&spacings, config.margin);
            let shist = spacing_histogram(&spacings, config.delta, config.bin_mode);
            write_hist_csv(&outdir.join(format!("{prefix}_spacing_hist.csv")), &shist)?;
            StatsReport {
                delta: spacings.delta,
                degenerate_fraction: Some(class.degenerate_fraction),
                ks_poisson: Some(class.ks_poisson),
                ks_wigner: Some(class.ks_wigner),
                verdict: class.verdict,
                gumbel,
                e_max: Some(e_max),
                diagnostic: None,
            }
        }
        Err(e @ (Error::DegenerateWindow { .. } | Error::WindowTooWide { .. })) => StatsReport {
            delta: config.delta.resolve(spec.dim()),
            degenerate_fraction: None,
            ks_poisson: None,
            ks_wigner: None,
            verdict: Verdict::Inconclusive,
            gumbel,
            e_max: Some(e_max),
            diagnostic: Some(e.to_string()),
        },
        Err(e) => return Err(e),
    };
    write_json(&outdir.join(format!("{prefix}_stats.json")), &stats)?;

    Ok(BlockRunSummary {
        n: config.label.n_particles,
        m: config.label.m_level,
        family: config.family.to_string(),
        seed: config.seed,
        dim: spec.dim(),
        e_max,
        verdict: stats.verdict,
        ks_poisson: stats.ks_poisson,
        ks_wigner: stats.ks_wigner,
    })
}

/// Reference spacing densities sampled on a grid, for figure overlays.
pub fn write_reference_curves(path: &Path, s_max: f64, points: usize) -> Result<()> {
    let mut out = String::from("s,poisson,wigner\n");
    for i in 0..points {
        let s = s_max * i as f64 / (points - 1) as f64;
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_float(s),
            fmt_float(reference_density(SpacingLaw::Poisson, s)),
            fmt_float(reference_density(SpacingLaw::Wigner, s))
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

fn write_gumbel_curve(path: &Path, params: &GumbelParams, lo: f64, hi: f64) -> Result<()> {
    let points = 401;
    let mut out = String::from("x,density\n");
    for i in 0..points {
        let x = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        out.push_str(&format!(
            "{},{}\n",
            fmt_float(x),
            fmt_float(params.density(x))
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Emit the plot-ready data behind one of the paper-style figures.
/// `size` overrides the block sizes with N = M = size.
pub fn run_figure(
    figure: u8,
    size: Option<u32>,
    seed: u64,
    margin: f64,
    dim_cap: usize,
    outdir: &Path,
) -> Result<Vec<BlockRunSummary>> {
    fs::create_dir_all(outdir)?;
    let blocks: Vec<(Family, u32)> = match figure {
        // Normalized eigenvalue distributions, integrable case.
        1 => match size {
            Some(k) => vec![(Family::Szego, k)],
            None => vec![
                (Family::Szego, 18),
                (Family::Szego, 23),
                (Family::Szego, 27),
            ],
        },
        // Normalized eigenvalue distributions, partially solvable cases.
        2 => match size {
            Some(k) => vec![(Family::Cf, k), (Family::Mrs, k), (Family::Lll, k)],
            None => vec![
                (Family::Cf, 23),
                (Family::Mrs, 27),
                (Family::Lll, 20),
                (Family::Lll, 23),
            ],
        },
        // Unfolded level spacing distributions, four verdicts. Panel (d)
        // is reproduced in distribution only: the published seed is unknown.
        3 => {
            let k = size.unwrap_or(27);
            vec![
                (Family::Cf, k),
                (Family::Lll, k),
                (Family::ModCf, k),
                (Family::Random, k),
            ]
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown figure {other} (expected 1, 2 or 3)"
            )))
        }
    };

    let mut summaries = Vec::new();
    for (family, k) in blocks {
        let mut config = RunConfig::new(family, seed, BlockLabel::new(k, k));
        config.margin = margin;
        config.dim_cap = dim_cap;
        let summary = run_block(&config, outdir)?;
        let prefix = format!("{family}_n{k}_m{k}");
        if figure == 1 {
            // Overlay the fitted Gumbel on the normalized-eigenvalue range.
            let provider = config.provider();
            let matrix = assemble_block_with(config.label, &provider, AssemblyOptions { dim_cap })?;
            let spec = diagonalize(&matrix)?;
            let e_max = max_eigenvalue(&spec);
            let normalized: Vec<f64> = spec.eigenvalues.iter().map(|e| e / e_max).collect();
            if let Ok(params) = fit_gumbel(&normalized) {
                let lo = normalized.first().copied().unwrap().min(0.0);
                write_gumbel_curve(
                    &outdir.join(format!("{prefix}_gumbel.csv")),
                    &params,
                    lo,
                    1.0,
                )?;
            }
        }
        if figure == 3 {
            write_reference_curves(&outdir.join(format!("{prefix}_reference.csv")), 4.0, 401)?;
        }
        summaries.push(summary);
    }
    write_json(
        &outdir.join(format!("figure{figure}_summary.json")),
        &summaries,
    )?;
    Ok(summaries)
}

#[derive(Debug, serde::Serialize)]
pub struct VerifyCase {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn spectrum_for(family: Family, seed: u64, n: u32, m: u32) -> Result<SpectrumRecord> {
    let provider = CouplingProvider::new(family, seed);
    diagonalize(&crate::hamiltonian::assemble_block(
        BlockLabel::new(n, m),
        &provider,
    )?)
}

/// Two-particle closed forms against the general pipeline, odd M <= max_m.
pub fn verify_two_particle(max_m: u32) -> Result<Vec<VerifyCase>> {
    let mut cases = Vec::new();
    for family in Family::SOLVABLE {
        for m in (1..=max_m).step_by(2) {
            let spec = spectrum_for(family, 0, 2, m)?;
            let expect = oracles::two_particle_spectrum(family, m)?.eigenvalues_ascending();
            let worst = spec
                .eigenvalues
                .iter()
                .zip(&expect)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            cases.push(VerifyCase {
                name: format!("two-particle {family} M={m}"),
                pass: spec.dim() == expect.len() && worst <= 1e-10,
                detail: format!("max deviation {worst:.3e}"),
            });
        }
    }
    Ok(cases)
}

/// E_max formulas for all four solvable families, N,M <= bound.
pub fn verify_emax(bound: u32) -> Result<Vec<VerifyCase>> {
    let mut cases = Vec::new();
    for family in Family::SOLVABLE {
        let mut worst = 0.0f64;
        for n in 1..=bound {
            for m in 0..=bound {
                let spec = spectrum_for(family, 0, n, m)?;
                let expect = oracles::expected_max_eigenvalue(family, BlockLabel::new(n, m))?;
                worst = worst.max((max_eigenvalue(&spec) - expect).abs());
            }
        }
        cases.push(VerifyCase {
            name: format!("emax {family} N,M<={bound}"),
            pass: worst <= 1e-8,
            detail: format!("max deviation {worst:.3e}"),
        });
    }
    Ok(cases)
}

/// Integer Szego spectra for all blocks with N,M <= bound.
pub fn verify_integer(bound: u32) -> Result<Vec<VerifyCase>> {
    let mut worst = 0.0f64;
    for n in 1..=bound {
        for m in 0..=bound {
            let spec = spectrum_for(Family::Szego, 0, n, m)?;
            worst = worst.max(integrality_deviation(&spec));
        }
    }
    Ok(vec![VerifyCase {
        name: format!("integer szego N,M<={bound}"),
        pass: worst <= 1e-8,
        detail: format!("max deviation {worst:.3e}"),
    }])
}

/// Eigenvalue inheritance for CF at fixed N across increasing M.
pub fn verify_inheritance(n: u32, m_values: &[u32]) -> Result<Vec<VerifyCase>> {
    let mut cases = Vec::new();
    let specs: Vec<SpectrumRecord> = m_values
        .iter()
        .map(|&m| spectrum_for(Family::Cf, 0, n, m))
        .collect::<Result<_>>()?;
    for i in 0..specs.len() {
        for j in (i + 1)..specs.len() {
            let report = inheritance_check(&specs[i], &specs[j], 1e-8);
            cases.push(VerifyCase {
                name: format!(
                    "inheritance cf N={n} M={} into M={}",
                    m_values[i], m_values[j]
                ),
                pass: report.holds,
                detail: format!("{} unmatched", report.unmatched.len()),
            });
        }
    }
    Ok(cases)
}
