//! Verification campaigns: each command takes one validated configuration,
//! runs a full battery, and produces a deterministic report. Reports render
//! to JSON (the scriptable format) or markdown (for reading); exit codes
//! separate mathematical failures (1) from configuration and budget
//! problems (2).

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use quatflag::borelring::{verify_isomorphism_degree, BorelError, DegreeReport};
use quatflag::flagcomb::{
    all_permutations, coefficient_of_power, height, morse_index, morse_index_from_heights,
    q_factorial, EdgeConvention, FlagError, HeightParams,
};
use quatflag::gkmring::{negative_euler_class, DegreeScale, GkmContext, GkmError};
use quatflag::quatlab::{standard_check_battery, CheckOutcome};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_MATH_FAILURE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("verification failed: {0}")]
    Math(String),
}

impl CampaignError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CampaignError::Config(_) | CampaignError::Budget(_) => EXIT_CONFIG,
            CampaignError::Math(_) => EXIT_MATH_FAILURE,
        }
    }
}

fn config_err(e: impl std::fmt::Display) -> CampaignError {
    CampaignError::Config(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Markdown,
}

/// One validated run description shared by all commands.
#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub n: usize,
    pub scale: DegreeScale,
    pub max_degree: u32,
    pub height_params: HeightParams,
    pub seed: u64,
    pub convention: EdgeConvention,
    pub budget_cells: Option<u64>,
}

impl CampaignConfig {
    pub fn new(
        n: usize,
        scale: DegreeScale,
        max_degree: u32,
        height_params: HeightParams,
        seed: u64,
        convention: EdgeConvention,
        budget_cells: Option<u64>,
    ) -> Result<Self, CampaignError> {
        if n == 0 {
            return Err(CampaignError::Config("n must be at least 1".into()));
        }
        if height_params.n() != n {
            return Err(CampaignError::Config(format!(
                "height parameters have length {}, expected n = {n}",
                height_params.n()
            )));
        }
        Ok(CampaignConfig {
            n,
            scale,
            max_degree,
            height_params,
            seed,
            convention,
            budget_cells,
        })
    }

    fn context(&self) -> Result<std::sync::Arc<GkmContext>, CampaignError> {
        let ctx = GkmContext::with_convention(self.n, self.scale, self.convention)
            .map_err(config_err)?;
        Ok(match self.budget_cells {
            Some(cells) => ctx.with_budget(cells),
            None => ctx,
        })
    }
}

/// Parses a comma-separated list of exact rationals (`-2`, `3/4`, ...).
pub fn parse_rational_list(text: &str) -> Result<Vec<BigRational>, CampaignError> {
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<BigRational>()
                .map_err(|e| CampaignError::Config(format!("bad rational '{tok}': {e}")))
        })
        .collect()
}

/// Builds height parameters from optional flag values, defaulting each
/// sequence to the standard symmetric integers.
pub fn height_params_from_flags(
    n: usize,
    a: Option<&str>,
    r: Option<&str>,
) -> Result<HeightParams, CampaignError> {
    let standard = HeightParams::standard(n).map_err(config_err)?;
    let a = match a {
        Some(text) => parse_rational_list(text)?,
        None => standard.a().to_vec(),
    };
    let r = match r {
        Some(text) => parse_rational_list(text)?,
        None => standard.r().to_vec(),
    };
    HeightParams::new(a, r).map_err(config_err)
}

fn map_borel_error(e: BorelError) -> CampaignError {
    match e {
        BorelError::Gkm(GkmError::BudgetExceeded { rows, cols, budget }) => CampaignError::Budget(
            format!("constraint matrix needs {rows} x {cols} cells, budget {budget}"),
        ),
        other => CampaignError::Math(other.to_string()),
    }
}

// --- verify-theorem -----------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TheoremReport {
    pub n: usize,
    pub scale: DegreeScale,
    pub convention: EdgeConvention,
    pub max_degree: u32,
    pub degrees: Vec<DegreeReport>,
    pub all_passed: bool,
}

/// Verifies the evaluation isomorphism degree by degree, in parallel, and
/// reports ranks and invariant factors per degree.
pub fn cmd_verify_theorem(cfg: &CampaignConfig) -> Result<TheoremReport, CampaignError> {
    let ctx = cfg.context()?;
    let results: Vec<Result<DegreeReport, BorelError>> = (0..=cfg.max_degree)
        .into_par_iter()
        .map(|d| verify_isomorphism_degree(d, &ctx))
        .collect();
    let mut degrees = Vec::with_capacity(results.len());
    for result in results {
        degrees.push(result.map_err(map_borel_error)?);
    }
    let all_passed = degrees.iter().all(DegreeReport::passed);
    Ok(TheoremReport {
        n: cfg.n,
        scale: cfg.scale,
        convention: cfg.convention,
        max_degree: cfg.max_degree,
        degrees,
        all_passed,
    })
}

// --- morse-report ---------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MorseRow {
    /// One-line notation, 1-based.
    pub w: Vec<usize>,
    /// Exact height, as a rational string.
    pub height: String,
    /// Morse index divided by four (the coinversion count).
    pub index_quarter: usize,
    /// Product of the weights of the descending edges, `1` at the minimum.
    pub negative_euler_class: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MorseReport {
    pub n: usize,
    pub a: Vec<String>,
    pub r: Vec<String>,
    pub rows: Vec<MorseRow>,
    /// Count of critical points per quarter-index.
    pub index_census: Vec<u64>,
    /// Coefficients of the q-factorial, the census oracle.
    pub expected_census: Vec<u64>,
    pub unique_minimum: bool,
    pub unique_maximum: bool,
    pub all_passed: bool,
}

/// Tabulates the critical points with exact heights, quarter-indices, and
/// negative Euler classes, then checks the census against the q-factorial
/// and the uniqueness of the extremes.
pub fn cmd_morse_report(cfg: &CampaignConfig) -> Result<MorseReport, CampaignError> {
    let ctx = cfg.context()?;
    let hp = &cfg.height_params;
    let perms = all_permutations(cfg.n).map_err(config_err)?;

    let mut rows = Vec::with_capacity(perms.len());
    let top = cfg.n * (cfg.n - 1) / 2;
    let mut census = vec![0u64; top + 1];
    for w in &perms {
        let from_heights = match morse_index_from_heights(w, hp) {
            Ok(index) => index,
            Err(e @ FlagError::NonGenericHeights { .. }) => return Err(config_err(e)),
            Err(e) => return Err(CampaignError::Math(e.to_string())),
        };
        let combinatorial = morse_index(w);
        if from_heights != combinatorial {
            return Err(CampaignError::Math(format!(
                "index routes disagree at {w}: heights say {from_heights}, \
                 coinversions say {combinatorial}"
            )));
        }
        let euler = negative_euler_class(w, hp, &ctx).map_err(|e| CampaignError::Math(e.to_string()))?;
        census[combinatorial / 4] += 1;
        rows.push(MorseRow {
            w: w.one_line(),
            height: height(w, hp).to_string(),
            index_quarter: combinatorial / 4,
            negative_euler_class: euler.to_string(),
        });
    }

    let q = q_factorial(cfg.n);
    let expected_census: Vec<u64> = (0..=top as u32)
        .map(|k| {
            coefficient_of_power(&q, k)
                .to_u64()
                .expect("small census counts")
        })
        .collect();
    let unique_minimum = census.first() == Some(&1);
    let unique_maximum = census.last() == Some(&1);
    let all_passed = census == expected_census && unique_minimum && unique_maximum;

    Ok(MorseReport {
        n: cfg.n,
        a: hp.a().iter().map(BigRational::to_string).collect(),
        r: hp.r().iter().map(BigRational::to_string).collect(),
        rows,
        index_census: census,
        expected_census,
        unique_minimum,
        unique_maximum,
        all_passed,
    })
}

// --- geomlab ---------------------------------------------------------------------

/// Field order pins the JSON layout: seed, n, checks.
#[derive(Debug, Clone, Serialize)]
pub struct GeomReport {
    pub seed: u64,
    pub n: usize,
    pub checks: Vec<CheckOutcome>,
}

impl GeomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Runs the numeric geometry battery under the configured seed.
pub fn cmd_geomlab(cfg: &CampaignConfig) -> Result<GeomReport, CampaignError> {
    let checks =
        standard_check_battery(cfg.n, &cfg.height_params, cfg.seed).map_err(config_err)?;
    Ok(GeomReport {
        seed: cfg.seed,
        n: cfg.n,
        checks,
    })
}

// --- rendering ---------------------------------------------------------------------

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    text
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

impl TheoremReport {
    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => to_json(self),
            ReportFormat::Markdown => {
                let mut out = String::new();
                let _ = writeln!(
                    out,
                    "# Ring isomorphism verification (n = {}, scale {})\n",
                    self.n,
                    self.scale.per_polynomial_degree()
                );
                let _ = writeln!(
                    out,
                    "| degree | quotient rank | vertex-model rank | injective | surjective | factors all 1 |"
                );
                let _ = writeln!(out, "|---|---|---|---|---|---|");
                for d in &self.degrees {
                    let _ = writeln!(
                        out,
                        "| {} | {} | {} | {} | {} | {} |",
                        d.degree,
                        d.artin_rank,
                        d.gkm_rank,
                        d.injective,
                        d.surjective,
                        d.invariant_factors.iter().all(|f| f == "1"),
                    );
                }
                let _ = writeln!(out, "\nverdict: {}", verdict(self.all_passed));
                out
            }
        }
    }
}

impl MorseReport {
    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => to_json(self),
            ReportFormat::Markdown => {
                let mut out = String::new();
                let _ = writeln!(out, "# Morse data (n = {})\n", self.n);
                let _ = writeln!(out, "a = ({}); r = ({})\n", self.a.join(", "), self.r.join(", "));
                let _ = writeln!(out, "| w | height | index/4 | negative Euler class |");
                let _ = writeln!(out, "|---|---|---|---|");
                for row in &self.rows {
                    let w: Vec<String> = row.w.iter().map(usize::to_string).collect();
                    let _ = writeln!(
                        out,
                        "| [{}] | {} | {} | {} |",
                        w.join(","),
                        row.height,
                        row.index_quarter,
                        row.negative_euler_class,
                    );
                }
                let census: Vec<String> = self.index_census.iter().map(u64::to_string).collect();
                let _ = writeln!(out, "\ncensus by index/4: [{}]", census.join(", "));
                let _ = writeln!(out, "\nverdict: {}", verdict(self.all_passed));
                out
            }
        }
    }
}

impl GeomReport {
    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => to_json(self),
            ReportFormat::Markdown => {
                let mut out = String::new();
                let _ = writeln!(out, "# Geometry lab (n = {}, seed {})\n", self.n, self.seed);
                let _ = writeln!(out, "| check | max residual | pass |");
                let _ = writeln!(out, "|---|---|---|");
                for check in &self.checks {
                    let _ = writeln!(
                        out,
                        "| {} | {:e} | {} |",
                        check.name, check.max_residual, check.pass
                    );
                }
                let _ = writeln!(out, "\nverdict: {}", verdict(self.all_passed()));
                out
            }
        }
    }
}
