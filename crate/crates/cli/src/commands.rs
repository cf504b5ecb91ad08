//! Subcommand implementations.

use std::path::Path;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;
use stable_exit_core::exit_law::{ExitLaw, MDensity};
use stable_exit_core::kappa::{KappaEvaluator, RationalAlphaPolicy};
use stable_exit_core::montecarlo::{
    m_table, sample_positive_stable, sample_stable_increment, simulate_exit_time, tau_table,
    PathConfig, SamplePool, TableConfig,
};
use stable_exit_core::report::SCHEMA_VERSION;
use stable_exit_core::{Result as CoreResult, SeriesConfig, StableLaw, VerificationReport};

use crate::args::{Command, Format, LawArgs, OptLawArgs, OutArgs, Policy, Suite, Target};
use crate::output::{
    emit, records_csv, sidecar_path, to_json, values_csv, write_atomic, LawParams, OutputRecord,
};
use crate::{parallel, suites, CliError};

/// Relative error bound reported in the `abs_err` column. It is the accuracy
/// the evaluators are tested to, not a per-point estimate.
const NOMINAL_REL_ERR: f64 = 1e-8;

pub fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Kappa {
            law,
            theta,
            policy,
            out,
        } => {
            let law = build_law(&law)?;
            let policy = match policy {
                Policy::Perturb => RationalAlphaPolicy::Perturb,
                Policy::Paired => RationalAlphaPolicy::PairedCancellation,
            };
            let kev = KappaEvaluator::with_options(law, SeriesConfig::default(), policy, 1e-7)?;
            let records = evaluate(&law, "kappa", &theta.0, |x| kev.kappa(x))?;
            write_records(&records, &out)
        }
        Command::Laplace { law, t, start, out } => {
            let law = build_law(&law)?;
            let exit = ExitLaw::with_start(law, start)?;
            let records = evaluate(&law, "laplace", &t.0, |x| exit.laplace_tau(x))?;
            write_records(&records, &out)
        }
        Command::Density { law, s, start, out } => {
            let law = build_law(&law)?;
            let exit = ExitLaw::with_start(law, start)?;
            eprintln!("regime: {}", exit.density_regime()?.name());
            let records = evaluate(&law, "density", &s.0, |x| exit.density_tau(x))?;
            write_records(&records, &out)
        }
        Command::Mdensity { law, x, out } => {
            let law = build_law(&law)?;
            let md = MDensity::new(law)?;
            let records = evaluate(&law, "mdensity", &x.0, |v| md.m_density(v))?;
            write_records(&records, &out)
        }
        Command::Verify {
            suite,
            law,
            n,
            step,
            seed,
            out,
        } => verify(suite, &law, n, step, seed, out.as_deref()),
        Command::Sample {
            target,
            law,
            gamma,
            n,
            seed,
            step,
            horizon,
            start,
            out,
        } => sample(
            target,
            &SampleSpec {
                law,
                gamma,
                n,
                seed,
                step,
                horizon,
                start,
            },
            &out,
        ),
    }
}

fn law_from(alpha: f64, rho: Option<f64>, beta: Option<f64>) -> Result<StableLaw, CliError> {
    match (rho, beta) {
        (Some(r), None) => Ok(StableLaw::new(alpha, r)?),
        (None, Some(b)) => Ok(StableLaw::from_beta(alpha, b)?),
        (None, None) => Err(CliError::Usage("give --rho or --beta".into())),
        (Some(_), Some(_)) => Err(CliError::Usage(
            "--rho and --beta are mutually exclusive".into(),
        )),
    }
}

fn build_law(a: &LawArgs) -> Result<StableLaw, CliError> {
    law_from(a.alpha, a.rho, a.beta)
}

fn build_opt_law(a: &OptLawArgs) -> Result<Option<StableLaw>, CliError> {
    match a.alpha {
        None if a.rho.is_some() || a.beta.is_some() => {
            Err(CliError::Usage("--rho/--beta need --alpha".into()))
        }
        None => Ok(None),
        Some(alpha) => law_from(alpha, a.rho, a.beta).map(Some),
    }
}

fn evaluate<F>(law: &StableLaw, op: &str, grid: &[f64], f: F) -> Result<Vec<OutputRecord>, CliError>
where
    F: Fn(f64) -> CoreResult<f64> + Sync,
{
    let values = grid
        .par_iter()
        .map(|&x| f(x))
        .collect::<CoreResult<Vec<f64>>>()?;
    Ok(grid
        .iter()
        .zip(values)
        .map(|(&x, v)| OutputRecord {
            x_or_t: x,
            value: v,
            abs_err: NOMINAL_REL_ERR * v.abs(),
            law: LawParams {
                alpha: law.alpha(),
                rho: law.rho(),
            },
            operation: op.into(),
        })
        .collect())
}

fn write_records(records: &[OutputRecord], out: &OutArgs) -> Result<(), CliError> {
    let text = match out.format {
        Format::Csv => records_csv(records),
        Format::Json => to_json(&records),
    };
    emit(out.out.as_deref(), &text).map_err(|e| CliError::io(out.out.as_deref(), e))
}

fn require_seed(seed: Option<u64>, suite: Suite) -> Result<u64, CliError> {
    seed.ok_or_else(|| {
        CliError::Usage(format!(
            "suite {suite:?} samples at random and needs --seed"
        ))
    })
}

fn run_suite(
    suite: Suite,
    law: Option<StableLaw>,
    n: usize,
    step: f64,
    seed: Option<u64>,
) -> Result<VerificationReport, CliError> {
    let r = match suite {
        Suite::Stieltjes => suites::stieltjes()?,
        Suite::Doney => suites::doney()?,
        Suite::ClosedForm => suites::closed_forms()?,
        Suite::Scaling => suites::scaling()?,
        Suite::Normalization => suites::normalizations()?,
        Suite::Sym23 => suites::sym23_transform()?,
        Suite::Subordinator => suites::subordinator()?,
        Suite::Rational => suites::rational_continuity()?,
        Suite::Trig => suites::trig_series()?,
        Suite::Convolution => {
            let seed = require_seed(seed, suite)?;
            match law {
                Some(l) => suites::convolution_one(&l, n, step, seed)?,
                None => suites::convolution(n, step, seed)?,
            }
        }
        Suite::Montecarlo => suites::montecarlo(n, step, require_seed(seed, suite)?)?,
        Suite::All => {
            let seed = require_seed(seed, suite)?;
            let mut all = VerificationReport::new("all");
            for s in [
                Suite::Stieltjes,
                Suite::Doney,
                Suite::ClosedForm,
                Suite::Scaling,
                Suite::Normalization,
                Suite::Sym23,
                Suite::Subordinator,
                Suite::Rational,
                Suite::Trig,
                Suite::Convolution,
                Suite::Montecarlo,
            ] {
                all.merge(run_suite(s, law, n, step, Some(seed))?);
            }
            all
        }
    };
    Ok(r)
}

fn verify(
    suite: Suite,
    law: &OptLawArgs,
    n: usize,
    step: f64,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let law = build_opt_law(law)?;
    let report = run_suite(suite, law, n, step, seed)?;
    emit(out, &to_json(&report)).map_err(|e| CliError::io(out, e))?;
    let failed = report.failures().count();
    eprintln!(
        "{}: {} cases, {} failed",
        report.suite,
        report.cases.len(),
        failed
    );
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if report.overall {
        Ok(())
    } else {
        Err(CliError::VerificationFailed(failed))
    }
}

struct SampleSpec {
    law: OptLawArgs,
    gamma: Option<f64>,
    n: usize,
    seed: u64,
    step: Option<f64>,
    horizon: Option<f64>,
    start: f64,
}

#[derive(Serialize)]
struct Sidecar {
    schema: u32,
    target: String,
    law_tag: String,
    alpha: Option<f64>,
    rho: Option<f64>,
    gamma: Option<f64>,
    n: usize,
    seed: u64,
    streams: usize,
    chunk: usize,
    step: Option<f64>,
    horizon: Option<f64>,
    start: Option<f64>,
    censored: usize,
}

fn need_law(spec: &SampleSpec) -> Result<StableLaw, CliError> {
    build_opt_law(&spec.law)?
        .ok_or_else(|| CliError::Usage("this target needs --alpha with --rho or --beta".into()))
}

fn sample(target: Target, spec: &SampleSpec, out: &Path) -> Result<(), CliError> {
    if spec.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let (n, seed) = (spec.n, spec.seed);
    let mut sidecar = Sidecar {
        schema: SCHEMA_VERSION,
        target: target
            .to_possible_value()
            .map_or_else(String::new, |v| v.get_name().to_string()),
        law_tag: String::new(),
        alpha: None,
        rho: None,
        gamma: None,
        n,
        seed,
        streams: parallel::chunks(n).len(),
        chunk: parallel::CHUNK,
        step: None,
        horizon: None,
        start: None,
        censored: 0,
    };
    let values = match target {
        Target::Stable => {
            let law = need_law(spec)?;
            let dt = spec.step.unwrap_or(1.0);
            let parts = parallel::map_streams(seed, n, |k, rng| {
                (0..k)
                    .map(|_| sample_stable_increment(&law, dt, rng))
                    .collect::<CoreResult<Vec<f64>>>()
            })?;
            sidecar.law_tag = format!("stable(alpha={},rho={})", law.alpha(), law.rho());
            sidecar.step = Some(dt);
            set_law(&mut sidecar, &law);
            parts.concat()
        }
        Target::PositiveStable => {
            let g = spec
                .gamma
                .ok_or_else(|| CliError::Usage("positive_stable needs --gamma".into()))?;
            let pool = parallel::sample_pool(seed, n, |k, rng| sample_positive_stable(g, k, rng))?;
            sidecar.gamma = Some(g);
            fill(&mut sidecar, &pool);
            pool.values
        }
        Target::M => {
            let law = need_law(spec)?;
            if law.alpha() == 1.0 {
                return Err(CliError::Usage(
                    "the M sampler covers alpha != 1 only".into(),
                ));
            }
            let md = MDensity::new(law)?;
            let table = m_table(&md, &TableConfig::default())?;
            let tag = format!("M(alpha={},rho={})", law.alpha(), law.rho());
            let pool = parallel::sample_pool(seed, n, |k, rng| {
                Ok(SamplePool::from_table(&table, k, &tag, rng))
            })?;
            set_law(&mut sidecar, &law);
            fill(&mut sidecar, &pool);
            pool.values
        }
        Target::Tau => {
            let law = need_law(spec)?;
            let pool = match spec.step {
                Some(h) => {
                    let pc = match spec.horizon {
                        Some(hz) => PathConfig::new(h, hz, spec.start)?,
                        None => PathConfig::with_default_horizon(&law, h, spec.start)?,
                    };
                    parallel::sample_pool(seed, n, |k, rng| simulate_exit_time(&law, &pc, k, rng))?
                }
                None => {
                    let exit = ExitLaw::with_start(law, spec.start)?;
                    let table = tau_table(&exit, &TableConfig::default())?;
                    let tag = format!(
                        "tau(alpha={},rho={},start={})",
                        law.alpha(),
                        law.rho(),
                        spec.start
                    );
                    parallel::sample_pool(seed, n, |k, rng| {
                        Ok(SamplePool::from_table(&table, k, &tag, rng))
                    })?
                }
            };
            set_law(&mut sidecar, &law);
            sidecar.start = Some(spec.start);
            fill(&mut sidecar, &pool);
            pool.values
        }
    };
    write_atomic(out, &values_csv(&values)).map_err(|e| CliError::io(Some(out), e))?;
    let side = sidecar_path(out);
    write_atomic(&side, &to_json(&sidecar)).map_err(|e| CliError::io(Some(&side), e))
}

fn set_law(s: &mut Sidecar, law: &StableLaw) {
    s.alpha = Some(law.alpha());
    s.rho = Some(law.rho());
}

fn fill(s: &mut Sidecar, pool: &SamplePool) {
    s.law_tag = pool.law_tag.clone();
    s.step = s.step.or(pool.meta.step);
    s.horizon = pool.meta.horizon;
    s.start = s.start.or(pool.meta.start);
    s.censored = pool.meta.censored;
}
