//! Subcommand dispatch: eval, norm, verify, sweep, list-suites,
//! validate-config. Exit codes: 0 pass, 2 validation error, 3 verification
//! failure, 4 inconclusive.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use fracpot::funcspace::{
    make_ball_family, sample, write_grid_function, Expression, GridFunction,
};
use fracpot::inequalities::{run_suite, FieldCache, SuiteOutcome, Verdict};
use fracpot::norms::NormSpec;
use fracpot::operators::{self, OperatorParams};

use crate::config::ExperimentConfig;
use crate::output;

#[derive(Parser)]
#[command(name = "fracpot", version, about = "Fractional integral operators, function-space norms and an inequality verification harness")]
pub struct Cli {
    /// Path to the experiment configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides run.output_dir).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Zoo seed (overrides zoo.seed).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Grid resolution per axis (overrides grid.resolution).
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Evaluate an operator on a test function and export the field.
    Eval {
        /// Function spec, e.g. "ball:0,0,1", "gaussian:0,0,0.5", "power:0.5",
        /// "bump-sum:7", "log-abs".
        #[arg(long)]
        function: String,
        /// Operator tag: riesz | frac-integral | frac-maximal | hl-maximal |
        /// sharp-maximal | power-maximal:<t>.
        #[arg(long)]
        operator: String,
    },
    /// Evaluate a norm of a test function and print a CSV row.
    Norm {
        #[arg(long)]
        function: String,
        /// Norm spec: lp:<p> | weak-lp:<p> | morrey:<p>,<kappa> |
        /// weak-morrey:<p>,<kappa> | bmo | luxemburg:<p> | morrey-llogl:<p>,<kappa>.
        #[arg(long)]
        norm: String,
    },
    /// Run a verification suite and write CSV + JSON reports.
    Verify {
        /// Suite name (see list-suites), or "all".
        suite: String,
    },
    /// Run the suites over the parameter grid of the [sweep] section.
    Sweep,
    /// List the available verification suites.
    ListSuites,
    /// Parse and validate a configuration, echoing the resolved form.
    ValidateConfig,
}

pub fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(jobs) = cli.jobs {
        // Ignore the error if a global pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match &cli.command {
        Command::ListSuites => {
            for name in fracpot::inequalities::SUITE_NAMES {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ValidateConfig => {
            let cfg = load_config(&cli)?;
            println!("{}", cfg.canonical_toml());
            println!("# content-hash: {}", cfg.content_hash());
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { function, operator } => {
            let cfg = load_config(&cli)?;
            cmd_eval(&cli, &cfg, function, operator)
        }
        Command::Norm { function, norm } => {
            let cfg = load_config(&cli)?;
            cmd_norm(&cfg, function, norm)
        }
        Command::Verify { suite } => {
            let cfg = load_config(&cli)?;
            cmd_verify(&cli, &cfg, suite)
        }
        Command::Sweep => {
            let cfg = load_config(&cli)?;
            cmd_sweep(&cli, &cfg)
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| anyhow!("--config <path> is required for this command"))?;
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.zoo.seed = seed;
    }
    if let Some(res) = cli.resolution {
        cfg.grid.resolution = res;
    }
    if let Some(out) = &cli.out {
        cfg.run.output_dir = out.display().to_string();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(cfg: &ExperimentConfig) -> PathBuf {
    PathBuf::from(&cfg.run.output_dir)
}

/// Parse "name:a,b,c" function specs.
pub fn parse_function(spec: &str, dim: usize) -> Result<Expression> {
    let (name, args) = match spec.split_once(':') {
        Some((n, a)) => (n, a),
        None => (spec, ""),
    };
    let nums: Vec<f64> = if args.is_empty() {
        vec![]
    } else {
        args.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| anyhow!("bad number {t:?}: {e}")))
            .collect::<Result<_>>()?
    };
    let point = |vals: &[f64]| -> [f64; 3] {
        let mut p = [0.0; 3];
        for (i, v) in vals.iter().enumerate().take(3) {
            p[i] = *v;
        }
        p
    };
    match name {
        "gaussian" => {
            if nums.len() != dim + 1 {
                bail!("gaussian expects {} numbers (center, sigma)", dim + 1);
            }
            Ok(Expression::Gaussian {
                center: point(&nums[..dim]),
                sigma: nums[dim],
            })
        }
        "ball" => {
            if nums.len() != dim + 1 {
                bail!("ball expects {} numbers (center, radius)", dim + 1);
            }
            Ok(Expression::BallIndicator {
                center: point(&nums[..dim]),
                radius: nums[dim],
            })
        }
        "power" => {
            if nums.len() != 1 {
                bail!("power expects one exponent");
            }
            Ok(Expression::Power { beta: nums[0] })
        }
        "bump-sum" => {
            if nums.len() != 1 {
                bail!("bump-sum expects one seed");
            }
            Ok(Expression::BumpSum {
                seed: nums[0] as u64,
            })
        }
        "log-abs" => Ok(Expression::LogAbs),
        "zero" => Ok(Expression::Zero),
        other => bail!("unknown function spec {other:?}"),
    }
}

/// Parse "kind:p[,kappa]" norm specs.
pub fn parse_norm(spec: &str) -> Result<NormSpec> {
    let (name, args) = match spec.split_once(':') {
        Some((n, a)) => (n, a),
        None => (spec, ""),
    };
    let nums: Vec<f64> = if args.is_empty() {
        vec![]
    } else {
        args.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| anyhow!("bad number {t:?}: {e}")))
            .collect::<Result<_>>()?
    };
    let one = || -> Result<f64> {
        if nums.len() != 1 {
            bail!("norm {name:?} expects one parameter");
        }
        Ok(nums[0])
    };
    let two = || -> Result<(f64, f64)> {
        if nums.len() != 2 {
            bail!("norm {name:?} expects p,kappa");
        }
        Ok((nums[0], nums[1]))
    };
    match name {
        "lp" => Ok(NormSpec::Lp { p: one()? }),
        "weak-lp" => Ok(NormSpec::WeakLp { p: one()? }),
        "morrey" => {
            let (p, kappa) = two()?;
            Ok(NormSpec::Morrey { p, kappa })
        }
        "weak-morrey" => {
            let (p, kappa) = two()?;
            Ok(NormSpec::WeakMorrey { p, kappa })
        }
        "bmo" => Ok(NormSpec::Bmo),
        "luxemburg" => Ok(NormSpec::LuxemburgLpLogL { p: one()? }),
        "morrey-llogl" => {
            let (p, kappa) = two()?;
            Ok(NormSpec::MorreyLlogl { p, kappa })
        }
        other => bail!("unknown norm spec {other:?}"),
    }
}

fn cmd_eval(_cli: &Cli, cfg: &ExperimentConfig, function: &str, operator: &str) -> Result<ExitCode> {
    let grid = cfg.grid_box();
    let expr = parse_function(function, grid.dim)?;
    let f = sample(&expr, &grid);
    let lattice = operators::eval_lattice(&grid, cfg.run.lattice_per_axis);
    let kernel = cfg.kernel_choice()?;
    let err = |e: fracpot::Error| anyhow!(e.to_string());

    let field = match operator.split_once(':') {
        Some(("power-maximal", t)) => {
            let t: f64 = t.parse().context("power-maximal exponent")?;
            operators::power_maximal_field(&f, t, &lattice, cfg.operator.radii_count).map_err(err)?
        }
        None => {
            let mut params = OperatorParams::new(grid.dim, cfg.operator.alpha, kernel).map_err(err)?;
            params.radii_count = cfg.operator.radii_count;
            params.inner_cutoff_cells = cfg.operator.inner_cutoff_cells;
            params.shell_cap = cfg.operator.shell_count;
            match operator {
                "riesz" => operators::riesz_potential_field(&f, cfg.operator.alpha, &lattice)
                    .map_err(err)?,
                "frac-integral" => {
                    operators::frac_integral_field(&f, &params, &lattice).map_err(err)?
                }
                "frac-maximal" => {
                    operators::frac_maximal_field(&f, &params, &lattice).map_err(err)?
                }
                "hl-maximal" => {
                    operators::hl_maximal_field(&f, &lattice, cfg.operator.radii_count).map_err(err)?
                }
                "sharp-maximal" => {
                    let family =
                        make_ball_family(&grid, cfg.family.centers_per_axis, cfg.family.radii_count);
                    operators::sharp_maximal_field(&f, &family, &lattice).map_err(err)?
                }
                other => bail!("unknown operator tag {other:?}"),
            }
        }
        Some((other, _)) => bail!("unknown operator tag {other:?}"),
    };

    let dir = out_dir(cfg);
    std::fs::create_dir_all(&dir)?;
    write_grid_function(&field, &dir.join("field.grid")).map_err(|e| anyhow!(e.to_string()))?;
    write_axis_slices(&field, &dir)?;
    println!(
        "wrote field ({} cells) and axis slices to {}",
        field.values.len(),
        dir.display()
    );
    Ok(ExitCode::SUCCESS)
}

/// One CSV per axis: the row of lattice cells through the box center.
fn write_axis_slices(field: &GridFunction, dir: &Path) -> Result<()> {
    let g = &field.grid;
    let names = ["x", "y", "z"];
    for axis in 0..g.dim {
        let path = dir.join(format!("slice_{}.csv", names[axis]));
        let mut writer = csv::Writer::from_path(&path)?;
        writer.write_record([names[axis], "value"])?;
        let mut idx = [0usize; 3];
        for a in 0..g.dim {
            idx[a] = g.resolution[a] / 2;
        }
        for i in 0..g.resolution[axis] {
            idx[axis] = i;
            let c = g.cell_center(idx);
            writer.write_record([format!("{}", c[axis]), format!("{}", field.value(idx))])?;
        }
        writer.flush()?;
    }
    Ok(())
}

fn cmd_norm(cfg: &ExperimentConfig, function: &str, norm: &str) -> Result<ExitCode> {
    let grid = cfg.grid_box();
    let expr = parse_function(function, grid.dim)?;
    let f = sample(&expr, &grid);
    let spec = parse_norm(norm)?;
    let family = make_ball_family(&grid, cfg.family.centers_per_axis, cfg.family.radii_count);
    let value = spec.evaluate(&f, &family).map_err(|e| anyhow!(e.to_string()))?;
    println!("function,norm,value");
    println!("{},{},{}", f.label, norm, value);
    Ok(ExitCode::SUCCESS)
}

fn exit_for(outcomes: &[SuiteOutcome]) -> ExitCode {
    let mut worst = Verdict::Pass;
    for o in outcomes {
        match o.overall() {
            Verdict::Fail => return ExitCode::from(3),
            Verdict::Inconclusive => worst = Verdict::Inconclusive,
            Verdict::Pass => {}
        }
    }
    if worst == Verdict::Inconclusive {
        ExitCode::from(4)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_verify(_cli: &Cli, cfg: &ExperimentConfig, suite: &str) -> Result<ExitCode> {
    let requested: Vec<String> = if suite == "all" {
        fracpot::inequalities::SUITE_NAMES
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        vec![suite.to_string()]
    };
    let settings = cfg.harness_settings();
    let cache = FieldCache::new();
    let dir = out_dir(cfg);
    let mut outcomes = Vec::new();
    for name in &requested {
        let outcome = run_suite(name, cfg.grid.dimension, &settings, cache.clone())
            .map_err(|e| anyhow!(e.to_string()))?;
        output::write_suite_outputs(&dir, cfg, &outcome)?;
        for report in &outcome.reports {
            println!(
                "[{}] {} {}: fitted {:.6}",
                output::verdict_str(report.verdict),
                outcome.suite,
                report.check_id,
                report.fitted_constant
            );
        }
        outcomes.push(outcome);
    }
    Ok(exit_for(&outcomes))
}

fn cmd_sweep(_cli: &Cli, cfg: &ExperimentConfig) -> Result<ExitCode> {
    let sweep = cfg.sweep.clone().unwrap_or_default();
    if cfg.run.suites.is_empty() {
        bail!("run.suites must name at least one suite for a sweep");
    }
    let dir = out_dir(cfg);
    std::fs::create_dir_all(&dir)?;

    // Cartesian product over the non-empty parameter lists.
    let alphas = non_empty(&sweep.alpha, cfg.operator.alpha);
    let ps = non_empty(&sweep.p, cfg.exponents.p.unwrap_or(2.0));
    let kappas = non_empty(&sweep.kappa, cfg.exponents.kappa.unwrap_or(0.25));
    let ss = non_empty(&sweep.s, cfg.kernel.s);
    let resolutions: Vec<usize> = if sweep.resolution.is_empty() {
        vec![cfg.grid.resolution]
    } else {
        sweep.resolution.clone()
    };

    let csv_path = dir.join("sweep.csv");
    let mut writer = csv::Writer::from_path(&csv_path)?;
    writer.write_record(output::CSV_HEADER)?;

    // (suite, check, param) -> curve points for the plot files.
    let mut curves: BTreeMap<(String, String, String), Vec<(f64, f64)>> = BTreeMap::new();
    let mut worst: Vec<SuiteOutcome> = Vec::new();
    for &resolution in &resolutions {
        for &alpha in &alphas {
            for &p in &ps {
                for &kappa in &kappas {
                    for &s in &ss {
                        let mut point_cfg = cfg.clone();
                        point_cfg.grid.resolution = resolution;
                        point_cfg.operator.alpha = alpha;
                        point_cfg.exponents.p = Some(p);
                        point_cfg.exponents.kappa = Some(kappa);
                        point_cfg.kernel.s = s;
                        let settings = point_cfg.harness_settings();
                        let cache = FieldCache::new();
                        for suite in &cfg.run.suites {
                            match run_suite(
                                suite,
                                point_cfg.grid.dimension,
                                &settings,
                                cache.clone(),
                            ) {
                                Ok(outcome) => {
                                    output::append_suite_csv(&mut writer, &outcome)?;
                                    for report in &outcome.reports {
                                        for (param, value) in [
                                            ("alpha", alpha),
                                            ("p", p),
                                            ("kappa", kappa),
                                            ("resolution", resolution as f64),
                                        ] {
                                            curves
                                                .entry((
                                                    suite.clone(),
                                                    report.check_id.clone(),
                                                    param.to_string(),
                                                ))
                                                .or_default()
                                                .push((value, report.fitted_constant));
                                        }
                                    }
                                    worst.push(outcome);
                                }
                                Err(e) => {
                                    // Record the failure and continue the sweep.
                                    writer.write_record([
                                        suite.as_str(),
                                        "error",
                                        &format!("{alpha}"),
                                        &format!("{p}"),
                                        "",
                                        &format!("{kappa}"),
                                        &format!("{s}"),
                                        &e.to_string(),
                                        "",
                                        "",
                                        "error",
                                    ])?;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    writer.flush()?;
    for ((suite, check, param), points) in &curves {
        output::write_plot_data(&dir, suite, check, param, points)?;
    }
    println!("sweep complete: {}", csv_path.display());
    Ok(exit_for(&worst))
}

fn non_empty(values: &[f64], default: f64) -> Vec<f64> {
    if values.is_empty() {
        vec![default]
    } else {
        values.to_vec()
    }
}
