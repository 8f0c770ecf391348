//! Interaction coefficients C_nmkl for resonant quartets.
//!
//! Five closed-form families plus a seeded random ensemble. Every family
//! respects the Hermiticity symmetries C(n,m,k,l) = C(m,n,k,l) = C(n,m,l,k)
//! = C(k,l,n,m); the random family achieves this by drawing one value per
//! symmetry orbit, keyed on the canonical quartet and the seed.

use crate::error::{Error, Result};
use statrs::function::gamma::ln_gamma;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Szego,
    Mrs,
    Cf,
    Lll,
    ModCf,
    Random,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Szego,
        Family::Mrs,
        Family::Cf,
        Family::Lll,
        Family::ModCf,
        Family::Random,
    ];

    /// The four families with closed-form two-particle spectra.
    pub const SOLVABLE: [Family; 4] = [Family::Szego, Family::Mrs, Family::Cf, Family::Lll];

    pub fn name(self) -> &'static str {
        match self {
            Family::Szego => "szego",
            Family::Mrs => "mrs",
            Family::Cf => "cf",
            Family::Lll => "lll",
            Family::ModCf => "modcf",
            Family::Random => "random",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "szego" => Ok(Family::Szego),
            "mrs" => Ok(Family::Mrs),
            "cf" => Ok(Family::Cf),
            "lll" => Ok(Family::Lll),
            "modcf" => Ok(Family::ModCf),
            "random" => Ok(Family::Random),
            other => Err(Error::InvalidArgument(format!(
                "unknown system `{other}` (expected szego|mrs|cf|lll|modcf|random)"
            ))),
        }
    }
}

/// Mode-index quartet (n, m, k, l) with the resonance condition n+m = k+l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quartet {
    pub n: u32,
    pub m: u32,
    pub k: u32,
    pub l: u32,
}

impl Quartet {
    pub fn new(n: u32, m: u32, k: u32, l: u32) -> Self {
        assert_eq!(n + m, k + l, "quartet ({n},{m},{k},{l}) is not resonant");
        Self { n, m, k, l }
    }

    /// Orbit representative under the index symmetries: each pair sorted
    /// ascending, pairs ordered lexicographically. Idempotent.
    pub fn canonical(self) -> Quartet {
        let (a, b) = sort2(self.n, self.m);
        let (c, d) = sort2(self.k, self.l);
        if (a, b) <= (c, d) {
            Quartet {
                n: a,
                m: b,
                k: c,
                l: d,
            }
        } else {
            Quartet {
                n: c,
                m: d,
                k: a,
                l: b,
            }
        }
    }
}

fn sort2(a: u32, b: u32) -> (u32, u32) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Pure coefficient source for one family; immutable and thread-safe.
#[derive(Debug, Clone, Copy)]
pub struct CouplingProvider {
    family: Family,
    seed: u64,
    normalize_c0000: bool,
    norm: f64,
}

impl CouplingProvider {
    /// Default normalization: off for the closed forms (they already have
    /// C_0000 = 1), on for the random ensemble.
    pub fn new(family: Family, seed: u64) -> Self {
        Self::with_normalization(family, seed, family == Family::Random)
    }

    pub fn with_normalization(family: Family, seed: u64, normalize_c0000: bool) -> Self {
        let norm = if normalize_c0000 {
            raw_coupling(family, seed, Quartet::new(0, 0, 0, 0)).expect("C_0000 is always in range")
        } else {
            1.0
        };
        Self {
            family,
            seed,
            normalize_c0000,
            norm,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn normalizes_c0000(&self) -> bool {
        self.normalize_c0000
    }

    pub fn coupling(&self, q: Quartet) -> Result<f64> {
        Ok(raw_coupling(self.family, self.seed, q)? / self.norm)
    }
}

fn raw_coupling(family: Family, seed: u64, q: Quartet) -> Result<f64> {
    let (n, m, k, l) = (q.n as f64, q.m as f64, q.k as f64, q.l as f64);
    let s = n + m + k + l;
    match family {
        Family::Szego => Ok(1.0),
        Family::Mrs => Ok(1.0 / (1.0 + s / 2.0)),
        Family::Cf => {
            let min = q.n.min(q.m).min(q.k).min(q.l) as f64;
            Ok((1.0 + min) / ((1.0 + n) * (1.0 + m) * (1.0 + k) * (1.0 + l)).sqrt())
        }
        Family::Lll => {
            // ((n+m+k+l)/2)! / (2^{n+m} sqrt(n! m! k! l!)). With resonance,
            // (n+m+k+l)/2 = n+m exactly. Evaluated on the canonical quartet
            // so all orbit images produce the identical float; exact u128
            // factorials for small sums, log space above that.
            let c = q.canonical();
            if c.n + c.m <= 33 {
                let f = |x: u32| (1..=x as u128).product::<u128>() as f64;
                Ok(f(c.n + c.m)
                    / (2f64.powi((c.n + c.m) as i32)
                        * (f(c.n) * f(c.m)).sqrt()
                        * (f(c.k) * f(c.l)).sqrt()))
            } else {
                let (cn, cm, ck, cl) = (c.n as f64, c.m as f64, c.k as f64, c.l as f64);
                let log = ln_gamma(cn + cm + 1.0)
                    - (cn + cm) * std::f64::consts::LN_2
                    - 0.5
                        * ((ln_gamma(cn + 1.0) + ln_gamma(cm + 1.0))
                            + (ln_gamma(ck + 1.0) + ln_gamma(cl + 1.0)));
                if log.abs() > 700.0 {
                    return Err(Error::CouplingOverflow {
                        n: q.n,
                        m: q.m,
                        k: q.k,
                        l: q.l,
                    });
                }
                Ok(log.exp())
            }
        }
        Family::ModCf => {
            Ok((1.0 + s / 4.0) / ((1.0 + n) * (1.0 + m) * (1.0 + k) * (1.0 + l)).sqrt())
        }
        Family::Random => Ok(orbit_uniform(seed, q.canonical())),
    }
}

/// Deterministic uniform [0,1) draw keyed on (seed, canonical quartet),
/// via chained SplitMix64 finalizers. Counter-based: no stored tables,
/// identical values across runs and platforms.
fn orbit_uniform(seed: u64, canonical: Quartet) -> f64 {
    let mut state = splitmix64(seed ^ 0x51ab_2e4d_9fd3_17c5);
    for idx in [canonical.n, canonical.m, canonical.k, canonical.l] {
        state = splitmix64(state ^ (idx as u64).wrapping_add(0x9e37_79b9_7f4a_7c15));
    }
    (state >> 11) as f64 / (1u64 << 53) as f64
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
