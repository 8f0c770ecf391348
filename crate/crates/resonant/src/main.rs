use clap::{Args, Parser, Subcommand};
use resonant::couplings::{CouplingProvider, Family};
use resonant::error::{Error, Result};
use resonant::hamiltonian::{assemble_block_with, AssemblyOptions, DEFAULT_DIM_CAP};
use resonant::partitions::{count_partitions, enumerate_basis, BlockLabel};
use resonant::pipeline::{self, VerifyCase};
use resonant::spectra::{
    default_cluster_tolerance, degeneracy_summary, diagonalize, integrality_deviation,
    max_eigenvalue, SpectrumRecord,
};
use resonant::statistics::{
    classify_spacings, fit_gumbel, spacing_histogram, unfold, BinMode, DeltaPolicy, Verdict,
    DEFAULT_MARGIN,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "resonant",
    about = "Spectra of quantum resonant systems, block by block"
)]
struct Cli {
    /// Worker threads for block assembly (default: RESONANT_THREADS or all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SystemArgs {
    /// Coupling family.
    #[arg(long, value_parser = parse_family)]
    system: Family,

    /// Seed for the random family.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Force C_0000 normalization on or off (default: family-dependent).
    #[arg(long)]
    normalize_c0000: Option<bool>,
}

impl SystemArgs {
    fn provider(&self) -> CouplingProvider {
        match self.normalize_c0000 {
            None => CouplingProvider::new(self.system, self.seed),
            Some(n) => CouplingProvider::with_normalization(self.system, self.seed, n),
        }
    }
}

fn parse_family(s: &str) -> Result<Family> {
    s.parse()
}

fn parse_delta(s: &str) -> std::result::Result<DeltaPolicy, String> {
    if s == "auto" {
        Ok(DeltaPolicy::Auto)
    } else {
        s.parse::<usize>()
            .map(DeltaPolicy::Fixed)
            .map_err(|_| format!("expected `auto` or a positive integer, got `{s}`"))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print p_N(M) and optionally the basis states of the (N,M)-block.
    Basis {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        /// Also print one occupation vector per line, comma-separated.
        #[arg(long)]
        list: bool,
    },
    /// Assemble the block matrix and write it as row-major CSV.
    Matrix {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
        dim_cap: usize,
    },
    /// Diagonalize one block: eigenvalues to CSV plus a JSON sidecar.
    Spectrum {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "eigs.csv")]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
        dim_cap: usize,
    },
    /// Unfold a spectrum from CSV and classify its spacing statistics.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = parse_delta, default_value = "auto")]
        delta: DeltaPolicy,
        #[arg(long, default_value_t = DEFAULT_MARGIN)]
        margin: f64,
        #[arg(long, default_value = "stats.json")]
        out: PathBuf,
        #[arg(long)]
        histogram: Option<PathBuf>,
    },
    /// Run an oracle verification suite; exits nonzero on any mismatch.
    Verify {
        #[arg(long)]
        suite: String,
        /// Particle number for the inheritance suite.
        #[arg(long, default_value_t = 4)]
        n: u32,
        /// N,M bound for the emax and integer suites.
        #[arg(long, default_value_t = 12)]
        m: u32,
        /// Largest (odd) M for the two-particle suite.
        #[arg(long, default_value_t = 25)]
        max_m: u32,
    },
    /// Emit plot-ready data for one of the paper-style figures.
    Figures {
        /// Figure number: 1, 2 or 3.
        #[arg(long)]
        figure: u8,
        /// Override block sizes with N = M = SIZE.
        #[arg(long)]
        size: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MARGIN)]
        margin: f64,
        #[arg(long, default_value = "figures")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
        dim_cap: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("RESONANT_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    match pipeline::with_threads(threads, || run(cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Basis { n, m, list } => {
            let label = BlockLabel::new(n, m);
            println!("{}", count_partitions(label)?);
            if list {
                for state in enumerate_basis(label).states() {
                    let line: Vec<String> =
                        state.occupations.iter().map(|o| o.to_string()).collect();
                    println!("{}", line.join(","));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Matrix {
            system,
            n,
            m,
            out,
            dim_cap,
        } => {
            let matrix = assemble_block_with(
                BlockLabel::new(n, m),
                &system.provider(),
                AssemblyOptions { dim_cap },
            )?;
            let path = out.unwrap_or_else(|| PathBuf::from("matrix.csv"));
            pipeline::write_matrix_csv(&path, matrix.entries())?;
            println!(
                "wrote {} ({}x{}, nonzero fraction {:.4})",
                path.display(),
                matrix.dim(),
                matrix.dim(),
                matrix.nonzero_fraction()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Spectrum {
            system,
            n,
            m,
            out,
            dim_cap,
        } => {
            let matrix = assemble_block_with(
                BlockLabel::new(n, m),
                &system.provider(),
                AssemblyOptions { dim_cap },
            )?;
            let spec = diagonalize(&matrix)?;
            pipeline::write_eigs_csv(&out, &spec.eigenvalues)?;
            let sidecar = pipeline::SpectrumSidecar {
                n,
                m,
                family: system.system.to_string(),
                seed: matrix.seed(),
                dim: spec.dim(),
                e_max: max_eigenvalue(&spec),
                integrality_deviation: integrality_deviation(&spec),
                zero_multiplicity: degeneracy_summary(&spec, default_cluster_tolerance(&spec))
                    .zero_multiplicity(),
                cluster_tolerance: default_cluster_tolerance(&spec),
                solver_tolerance: spec.solver_tolerance,
                nonzero_fraction: matrix.nonzero_fraction(),
            };
            pipeline::write_json(&out.with_extension("json"), &sidecar)?;
            println!("wrote {} ({} eigenvalues)", out.display(), spec.dim());
            Ok(ExitCode::SUCCESS)
        }
        Command::Stats {
            input,
            delta,
            margin,
            out,
            histogram,
        } => {
            let eigenvalues = pipeline::read_eigs_csv(&input)?;
            let spec = SpectrumRecord::from_eigenvalues(eigenvalues);
            let e_max = spec.eigenvalues.last().copied();
            let gumbel = match e_max {
                Some(em) if em > 0.0 => {
                    let normalized: Vec<f64> = spec.eigenvalues.iter().map(|e| e / em).collect();
                    fit_gumbel(&normalized).ok()
                }
                _ => None,
            };
            let report = match unfold(&spec, delta) {
                Ok(spacings) => {
                    let class = classify_spacings(&spacings, margin);
                    if let Some(path) = &histogram {
                        let hist = spacing_histogram(&spacings, delta, BinMode::EqualWidth);
                        pipeline::write_hist_csv(path, &hist)?;
                    }
                    pipeline::StatsReport {
                        delta: spacings.delta,
                        degenerate_fraction: Some(class.degenerate_fraction),
                        ks_poisson: Some(class.ks_poisson),
                        ks_wigner: Some(class.ks_wigner),
                        verdict: class.verdict,
                        gumbel,
                        e_max,
                        diagnostic: None,
                    }
                }
                Err(e @ (Error::DegenerateWindow { .. } | Error::WindowTooWide { .. })) => {
                    pipeline::StatsReport {
                        delta: delta.resolve(spec.dim()),
                        degenerate_fraction: None,
                        ks_poisson: None,
                        ks_wigner: None,
                        verdict: Verdict::Inconclusive,
                        gumbel,
                        e_max,
                        diagnostic: Some(e.to_string()),
                    }
                }
                Err(e) => return Err(e),
            };
            pipeline::write_json(&out, &report)?;
            println!("verdict: {}", report.verdict);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, n, m, max_m } => {
            let cases: Vec<VerifyCase> = match suite.as_str() {
                "two-particle" => pipeline::verify_two_particle(max_m)?,
                "emax" => pipeline::verify_emax(m)?,
                "integer" => pipeline::verify_integer(m)?,
                "inheritance" => pipeline::verify_inheritance(n, &[4, 6, 8, 10])?,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown suite `{other}` (expected two-particle|emax|integer|inheritance)"
                    )))
                }
            };
            let mut ok = true;
            for case in &cases {
                println!(
                    "{} {} ({})",
                    if case.pass { "PASS" } else { "FAIL" },
                    case.name,
                    case.detail
                );
                ok &= case.pass;
            }
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Figures {
            figure,
            size,
            seed,
            margin,
            out_dir,
            dim_cap,
        } => {
            let summaries = pipeline::run_figure(figure, size, seed, margin, dim_cap, &out_dir)?;
            for s in &summaries {
                println!(
                    "{} N={} M={} dim={} verdict={}",
                    s.family, s.n, s.m, s.dim, s.verdict
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
