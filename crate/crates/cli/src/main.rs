mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cocycle_core::families::z_counterexample;
use cocycle_core::{
    parse_group, CayleyExplorer, CocycleDocument, Configuration, Exhaustive, ExplorerConfig,
    Lattice, LocalCocycle, ResultDocument, Rigidifier, RigidityOptions, SweepOptions,
};

use report::Out;

/// Continuous cocycle rigidity over full shifts: inspect groups, validate local
/// cocycle rules, rigidify them, and re-check stored results.
///
/// Exit codes: 0 verified, 1 mathematical failure or obstruction, 2 usage or
/// I/O error.
#[derive(Parser, Debug)]
#[command(name = "cocycle", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for the sweeps. Affects wall time only.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Hard cap on the explored Cayley ball radius.
    #[arg(long, global = true, env = "COCYCLE_MAX_RADIUS", default_value_t = 64)]
    max_radius: u32,

    /// More detail: full tables and per-radius listings.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sphere sizes, unbounded components and N(r) of a group.
    GroupInfo {
        /// Group spec, e.g. "Z^2", "F(2)", "Z^1 x C(2)".
        #[arg(long)]
        group: String,
        /// Cut radius.
        #[arg(long, default_value_t = 3)]
        r: u32,
        /// Component search cutoff; defaults to 2r+4.
        #[arg(long)]
        r_max: Option<u32>,
    },
    /// Check the cocycle identity c(gh,x) = c(g,hx)c(h,x) on a rule file.
    VerifyCocycle {
        #[arg(long)]
        rule: PathBuf,
        /// g and h range over B(r_check).
        #[arg(long, default_value_t = 3)]
        r_check: u32,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Compute phi and the transfer function b and verify the cohomology.
    Rigidify {
        #[arg(long)]
        rule: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Write the result document here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Re-verify c(g,x) = b(gx)phi(g)b(x)^-1 from a stored result.
    CheckCohomology {
        #[arg(long)]
        result: PathBuf,
        #[arg(long)]
        rule: PathBuf,
        /// g ranges over B(r_check).
        #[arg(long, default_value_t = 3)]
        r_check: u32,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Run the pipeline on Z with c(+1,x) = u^x(0), a cocycle that is not
    /// trivialized by any local transfer.
    DemoCounterexample {
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    /// Random configurations when not exhaustive.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exhaustive enumeration of the window: auto picks it when there are at
    /// most 2^16 windows.
    #[arg(long, value_enum, default_value_t = ExhaustiveArg::Auto)]
    exhaustive: ExhaustiveArg,
}

#[derive(Args, Debug, Clone)]
struct PipelineArgs {
    /// Radius of the stored phi table.
    #[arg(long, default_value_t = 4)]
    r_phi: u32,
    /// g ranges over B(r_check) in the cohomology check.
    #[arg(long, default_value_t = 3)]
    r_check: u32,
    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ExhaustiveArg {
    Auto,
    Always,
    Never,
}

impl SweepArgs {
    fn options(&self) -> SweepOptions {
        SweepOptions {
            samples: self.samples,
            seed: self.seed,
            exhaustive: match self.exhaustive {
                ExhaustiveArg::Auto => Exhaustive::Auto,
                ExhaustiveArg::Always => Exhaustive::Always,
                ExhaustiveArg::Never => Exhaustive::Never,
            },
            ..SweepOptions::default()
        }
    }
}

impl PipelineArgs {
    fn options(&self) -> RigidityOptions {
        RigidityOptions {
            r_phi: self.r_phi,
            r_check: self.r_check,
            sweep: self.sweep.options(),
            ..RigidityOptions::default()
        }
    }
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Verified,
    Failed,
}

fn explorer_config(cli: &Cli) -> ExplorerConfig {
    ExplorerConfig {
        max_radius: cli.max_radius,
        ..ExplorerConfig::default()
    }
}

fn load_rule(cli: &Cli, path: &Path) -> Result<LocalCocycle> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc =
        CocycleDocument::from_json(&text).with_context(|| format!("loading {}", path.display()))?;
    let explorer = CayleyExplorer::with_config(parse_group(&doc.group)?, explorer_config(cli))?;
    doc.to_cocycle_on(Arc::new(explorer))
        .with_context(|| format!("loading {}", path.display()))
}

fn group_info(
    cli: &Cli,
    out: &mut Out,
    group: &str,
    r: u32,
    r_max: Option<u32>,
) -> Result<Verdict> {
    let g = parse_group(group)?;
    let ex = CayleyExplorer::with_config(g.clone(), explorer_config(cli))?;
    let cutoff = r_max.unwrap_or(2 * r + 4);
    out.line(format!("group: {}", g.spec()));
    out.line(format!("generators: {}", g.generator_names().join(" ")));
    out.line(format!(
        "sphere sizes |S(0)|..|S({cutoff})|: {}",
        report::sphere_sizes(&ex, cutoff)?
    ));
    out.line(format!("components of B({cutoff}) minus B(r):"));
    let rows = if out.verbose > 0 {
        0..=r
    } else {
        r.saturating_sub(2)..=r
    };
    let mut last = None;
    for k in rows {
        let rep = ex.component_report(k, cutoff)?;
        report::ends_row(out, &rep);
        last = Some(rep);
    }
    let rep = last.expect("at least one row");
    out.line(format!(
        "unbounded components: {}, N({})={}",
        rep.unbounded_components, rep.radius, rep.n_of_r
    ));
    Ok(Verdict::Verified)
}

fn verify(
    cli: &Cli,
    out: &mut Out,
    rule: &Path,
    r_check: u32,
    sweep: &SweepArgs,
) -> Result<Verdict> {
    let c = load_rule(cli, rule)?;
    report::header(out, &c);
    let rep = c.check_identity(r_check, &sweep.options())?;
    report::identity(out, &c, &rep);
    report::verdict(out, rep.passed());
    Ok(if rep.passed() {
        Verdict::Verified
    } else {
        Verdict::Failed
    })
}

fn rigidify(
    out: &mut Out,
    c: &LocalCocycle,
    pipeline: &PipelineArgs,
    output: Option<&Path>,
) -> Result<Verdict> {
    report::header(out, c);
    let rig = Rigidifier::new(c, pipeline.options())?;
    let result = rig.rigidify()?;
    report::rigidity(out, c, &result)?;
    if let Some(path) = output {
        let json = ResultDocument::from_result(c, &result)?.to_json()?;
        std::fs::write(path, json).with_context(|| format!("writing {}", path.display()))?;
        out.line(format!("result written to {}", path.display()));
    }
    let ok = result.passed();
    if result.obstruction.is_none() && !ok {
        out.line(
            "no obstruction was found but verification failed; check the rule with verify-cocycle",
        );
    }
    report::verdict(out, ok);
    Ok(if ok {
        Verdict::Verified
    } else {
        Verdict::Failed
    })
}

fn check(
    cli: &Cli,
    out: &mut Out,
    result: &Path,
    rule: &Path,
    r_check: u32,
    sweep: &SweepArgs,
) -> Result<Verdict> {
    let c = load_rule(cli, rule)?;
    let text =
        std::fs::read_to_string(result).with_context(|| format!("reading {}", result.display()))?;
    let doc = ResultDocument::from_json(&text)
        .with_context(|| format!("loading {}", result.display()))?;
    let phi = doc.phi_table(&c)?;
    let table = doc.transfer_table(&c)?;
    report::header(out, &c);
    let opts = RigidityOptions {
        r_check,
        sweep: sweep.options(),
        ..RigidityOptions::default()
    };
    let rig = Rigidifier::new(&c, opts)?;
    let rep = rig.check_cohomology(&phi, &table, r_check)?;
    report::cohomology(out, &c, &rep);
    report::verdict(out, rep.passed());
    Ok(if rep.passed() {
        Verdict::Verified
    } else {
        Verdict::Failed
    })
}

fn demo(
    cli: &Cli,
    out: &mut Out,
    pipeline: &PipelineArgs,
    output: Option<&Path>,
) -> Result<Verdict> {
    let base = z_counterexample()?;
    let explorer = CayleyExplorer::with_config(Arc::new(Lattice::new(1)), explorer_config(cli))?;
    let c = LocalCocycle::new(
        Arc::new(explorer),
        base.target().clone(),
        base.alphabet().clone(),
        base.window(),
        base.rules().to_vec(),
    )?;
    out.line("G = Z, H = Z = <u>, c(+1, x) = u^x(0)");
    let verdict = rigidify(out, &c, pipeline, output)?;

    // The hand computation: on x = {0: 1}, going out to +2 and to -2 gives
    // different candidate values of b(x).
    let rig = Rigidifier::new(&c, pipeline.options())?;
    let one = c.alphabet().symbol('1').expect("binary alphabet");
    let x = Configuration::new(c.alphabet().zero(), [(Lattice::vector(&[0]), one)]);
    let (plus, minus) = (Lattice::vector(&[2]), Lattice::vector(&[-2]));
    let (g, h) = (c.source(), c.target());
    out.line(format!(
        "hand check on x = {}:",
        report::configuration(c.explorer(), &c, &x)?
    ));
    for e in [&plus, &minus] {
        out.line(format!(
            "  via g={}: {}",
            g.label(e),
            h.label(&rig.b_via(e, &x)?)
        ));
    }
    if let Some(w) = rig.avoiding_path_witness(&x, &plus, &minus)? {
        report::obstruction(out, &c, &w)?;
    }
    Ok(verdict)
}

fn run(cli: &Cli, out: &mut Out) -> Result<Verdict> {
    match &cli.command {
        Command::GroupInfo { group, r, r_max } => group_info(cli, out, group, *r, *r_max),
        Command::VerifyCocycle {
            rule,
            r_check,
            sweep,
        } => verify(cli, out, rule, *r_check, sweep),
        Command::Rigidify {
            rule,
            pipeline,
            output,
        } => {
            let c = load_rule(cli, rule)?;
            rigidify(out, &c, pipeline, output.as_deref())
        }
        Command::CheckCohomology {
            result,
            rule,
            r_check,
            sweep,
        } => check(cli, out, result, rule, *r_check, sweep),
        Command::DemoCounterexample { pipeline, output } => {
            demo(cli, out, pipeline, output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut out = Out::new(cli.verbose);
    let verdict = run(&cli, &mut out);
    print!("{}", out.finish());
    match verdict {
        Ok(Verdict::Verified) => ExitCode::SUCCESS,
        Ok(Verdict::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
