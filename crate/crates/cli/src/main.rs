//! `flagperm`: command-line front end for the flag permutation module toolkit.
//!
//! Every command prints one JSON report on stdout and exits with 0 when all
//! checks pass, 1 when a check fails and 2 when a result is inconclusive or
//! the run was rejected (bad configuration, resource cap).

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flagperm::coeff::{CoeffSpec, PrimeField};
use flagperm::flagmod::{EjMode, DEFAULT_DIM_CAP};
use flagperm::rootsys::NodeSet;
use flagperm::selfenc::{OrderPolicy, DEFAULT_GROUP_CAP};
use flagperm::{Error, Result};
use serde_json::{json, Map, Value};

use commands::*;
use report::{Check, Envelope, ErrorEnvelope, Outcome, RunConfig, Verdict};

#[derive(Parser)]
#[command(name = "flagperm", version, about = "Exact computations in flag permutation modules of finite Chevalley groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Root systems, Weyl groups and parabolic data.
    Rootsys {
        #[command(subcommand)]
        cmd: RootsysCmd,
    },
    /// Structure constants and the collection algorithm.
    Chevalley {
        #[command(subcommand)]
        cmd: ChevalleyCmd,
    },
    /// The subquotients E_J of the flag permutation module.
    Flagmod {
        #[command(subcommand)]
        cmd: FlagmodCmd,
    },
    /// Self-enclosed subgroups of U.
    Selfenc {
        #[command(subcommand)]
        cmd: SelfencCmd,
    },
    /// Augmentation non-vanishing search.
    Augment {
        #[command(subcommand)]
        cmd: AugmentCmd,
    },
    /// Equal-characteristic reduction pipeline.
    Charp {
        #[command(subcommand)]
        cmd: CharpCmd,
    },
    /// Irreducibility tests and composition factors over prime fields.
    Modengine {
        #[command(subcommand)]
        cmd: ModengineCmd,
    },
    /// Aggregate run of every suite.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Args, Clone)]
struct TypeArgs {
    /// Cartan type, either a label such as A2 or a letter combined with --rank.
    #[arg(long = "type")]
    ty: String,
    #[arg(long)]
    rank: Option<usize>,
}

#[derive(Args, Clone)]
struct GroupArgs {
    #[command(flatten)]
    ty: TypeArgs,
    /// Order of the base field F_q (`--p` is accepted for prime fields).
    #[arg(long, alias = "p", default_value_t = 2)]
    q: u32,
}

#[derive(Args, Clone)]
struct SeedArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum RootsysCmd {
    Report(TypeArgs),
}

#[derive(Subcommand)]
enum ChevalleyCmd {
    Selfcheck {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArgs,
    },
}

#[derive(Subcommand)]
enum FlagmodCmd {
    Build {
        #[command(flatten)]
        g: GroupArgs,
        /// Coefficient field: F<prime> or Q.
        #[arg(long, default_value = "F5")]
        coeff: String,
        /// `all`, `I`, `none` or 1-based nodes such as `1,2`.
        #[arg(long = "J", default_value = "all")]
        j: String,
        /// quotient, rewriting or both.
        #[arg(long, default_value = "both")]
        mode: String,
        #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum SelfencCmd {
    /// Smallest self-enclosed subgroup containing the given elements.
    Closure {
        #[command(flatten)]
        g: GroupArgs,
        /// Elements as `;`-separated coordinate vectors in root order.
        #[arg(long, conflicts_with = "random")]
        gens: Option<String>,
        /// Number of seeded random generators instead of --gens.
        #[arg(long)]
        random: Option<usize>,
        /// default, exhaustive or sample:N.
        #[arg(long, default_value = "default")]
        orders: String,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
        cap: usize,
    },
    /// Subgroup with coordinates in the additive subgroups of size 2^e_k.
    Tower {
        #[command(flatten)]
        g: GroupArgs,
        /// Comma-separated exponents, one per positive root in root order.
        #[arg(long)]
        exponents: String,
        #[arg(long, default_value = "default")]
        orders: String,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum AugmentCmd {
    Search {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value = "F5")]
        coeff: String,
        #[arg(long = "J", default_value = "all")]
        j: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = flagperm::augment::DEFAULT_BUDGET)]
        budget: usize,
        #[command(flatten)]
        seed: SeedArgs,
    },
}

#[derive(Subcommand)]
enum CharpCmd {
    Pipeline {
        #[command(flatten)]
        g: GroupArgs,
        /// Defaults to the prime field of the base field's characteristic.
        #[arg(long)]
        coeff: Option<String>,
        #[arg(long = "J", default_value = "all")]
        j: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Search depth of the descent step.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[command(flatten)]
        seed: SeedArgs,
    },
}

#[derive(Args, Clone)]
struct ModuleSource {
    /// Module file written by `modengine export`.
    #[arg(long, conflicts_with_all = ["ty", "coeff", "j"])]
    input: Option<PathBuf>,
    #[arg(long = "type", requires = "coeff")]
    ty: Option<String>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long)]
    coeff: Option<String>,
    /// Build E_J instead of the full permutation module.
    #[arg(long = "J")]
    j: Option<String>,
    #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum ModengineCmd {
    Factors {
        #[command(flatten)]
        src: ModuleSource,
        #[command(flatten)]
        seed: SeedArgs,
    },
    Export {
        #[command(flatten)]
        src: ModuleSource,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    All {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value = "F5")]
        coeff: String,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArgs,
    },
}

fn base_config(command: &str, ty: &TypeArgs) -> RunConfig {
    let type_label = match ty.rank {
        Some(r) if ty.ty.chars().all(|c| c.is_ascii_alphabetic()) => format!("{}{r}", ty.ty),
        _ => ty.ty.clone(),
    };
    RunConfig { command: command.into(), type_label: Some(type_label), ..RunConfig::default() }
}

fn parse_mode(s: &str) -> Result<EjMode> {
    match s {
        "quotient" => Ok(EjMode::Quotient),
        "rewriting" => Ok(EjMode::Rewriting),
        "both" => Ok(EjMode::Both),
        _ => Err(Error::Config(format!("unknown mode '{s}' (quotient, rewriting, both)"))),
    }
}

fn prime_coeff(s: &str) -> Result<PrimeField> {
    match s.parse::<CoeffSpec>()? {
        CoeffSpec::Prime(f) => Ok(f),
        CoeffSpec::Rational => Err(Error::Config("this command needs a prime coefficient field".into())),
    }
}

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::Config(format!("--{name} must be positive")));
    }
    Ok(())
}

/// Parses the arguments into a config, then runs it. The config is returned
/// even when the run fails so that error reports can carry it.
fn dispatch(command: Command) -> (RunConfig, Result<Outcome>) {
    match command {
        Command::Rootsys { cmd: RootsysCmd::Report(ty) } => {
            let cfg = base_config("rootsys report", &ty);
            let run = || rootsys_report(&*root_system(&ty.ty, ty.rank)?);
            (cfg, run())
        }
        Command::Chevalley { cmd: ChevalleyCmd::Selfcheck { g, trials, seed } } => {
            let cfg = RunConfig { q: Some(g.q), trials: Some(trials), seed: Some(seed.seed), ..base_config("chevalley selfcheck", &g.ty) };
            let run = || {
                positive("trials", trials)?;
                chevalley_selfcheck(&group(root_system(&g.ty.ty, g.ty.rank)?, g.q)?, trials, seed.seed)
            };
            (cfg, run())
        }
        Command::Flagmod { cmd: FlagmodCmd::Build { g, coeff, j, mode, cap } } => {
            let cfg = RunConfig {
                q: Some(g.q),
                coeff: Some(coeff.clone()),
                j: Some(j.clone()),
                mode: Some(mode.clone()),
                cap: Some(cap),
                ..base_config("flagmod build", &g.ty)
            };
            let run = || {
                positive("cap", cap)?;
                let rs = root_system(&g.ty.ty, g.ty.rank)?;
                let js = parse_j(&j, rs.rank())?;
                flagmod_build(group(rs, g.q)?, &coeff.parse()?, &js, parse_mode(&mode)?, cap)
            };
            (cfg, run())
        }
        Command::Selfenc { cmd: SelfencCmd::Closure { g, gens, random, orders, seed, cap } } => {
            let cfg = RunConfig {
                q: Some(g.q),
                gens: gens.clone(),
                random,
                orders: Some(orders.clone()),
                seed: Some(seed.seed),
                cap: Some(cap),
                ..base_config("selfenc closure", &g.ty)
            };
            let run = || {
                positive("cap", cap)?;
                let grp = group(root_system(&g.ty.ty, g.ty.rank)?, g.q)?;
                let x = match (&gens, random) {
                    (Some(s), _) => parse_gens(&grp, s)?,
                    (None, Some(k)) => {
                        use rand::SeedableRng;
                        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.seed);
                        (0..k).map(|_| grp.random_unipotent(&mut rng)).collect()
                    }
                    (None, None) => return Err(Error::Config("give --gens or --random".into())),
                };
                selfenc_closure(&grp, &x, orders.parse()?, seed.seed, cap)
            };
            (cfg, run())
        }
        Command::Selfenc { cmd: SelfencCmd::Tower { g, exponents, orders, seed, cap } } => {
            let cfg = RunConfig {
                q: Some(g.q),
                exponents: Some(exponents.clone()),
                orders: Some(orders.clone()),
                seed: Some(seed.seed),
                cap: Some(cap),
                ..base_config("selfenc tower", &g.ty)
            };
            let run = || {
                positive("cap", cap)?;
                let grp = group(root_system(&g.ty.ty, g.ty.rank)?, g.q)?;
                let exps = exponents
                    .split(',')
                    .map(|e| e.trim().parse::<u32>().map_err(|_| Error::Config(format!("bad exponent '{e}'"))))
                    .collect::<Result<Vec<_>>>()?;
                selfenc_tower(&grp, &exps, orders.parse()?, seed.seed, cap)
            };
            (cfg, run())
        }
        Command::Augment { cmd: AugmentCmd::Search { g, coeff, j, trials, budget, seed } } => {
            let cfg = RunConfig {
                q: Some(g.q),
                coeff: Some(coeff.clone()),
                j: Some(j.clone()),
                trials: Some(trials),
                budget: Some(budget),
                seed: Some(seed.seed),
                ..base_config("augment search", &g.ty)
            };
            let run = || {
                positive("trials", trials)?;
                positive("budget", budget)?;
                let rs = root_system(&g.ty.ty, g.ty.rank)?;
                let js = parse_j(&j, rs.rank())?;
                let t = TrialArgs { trials, seed: seed.seed };
                augment_search(&group(rs, g.q)?, &coeff.parse()?, &js, &t, budget)
            };
            (cfg, run())
        }
        Command::Charp { cmd: CharpCmd::Pipeline { g, coeff, j, trials, depth, seed } } => {
            let coeff = coeff.unwrap_or_else(|| {
                flagperm::field::prime_power(g.q).map(|(p, _)| format!("F{p}")).unwrap_or_else(|| "F2".into())
            });
            let cfg = RunConfig {
                q: Some(g.q),
                coeff: Some(coeff.clone()),
                j: Some(j.clone()),
                trials: Some(trials),
                depth: Some(depth),
                seed: Some(seed.seed),
                ..base_config("charp pipeline", &g.ty)
            };
            let run = || {
                positive("trials", trials)?;
                positive("depth", depth)?;
                let rs = root_system(&g.ty.ty, g.ty.rank)?;
                let js = parse_j(&j, rs.rank())?;
                let t = TrialArgs { trials, seed: seed.seed };
                charp_pipeline(&group(rs, g.q)?, &prime_coeff(&coeff)?, &js, &t, depth)
            };
            (cfg, run())
        }
        Command::Modengine { cmd: ModengineCmd::Factors { src, seed } } => {
            let cfg = RunConfig { seed: Some(seed.seed), ..source_config("modengine factors", &src) };
            let run = || modengine_factors(&resolve_module(&src)?, seed.seed, BRUTE_FORCE_CAP);
            (cfg, run())
        }
        Command::Modengine { cmd: ModengineCmd::Export { src, output } } => {
            let cfg = RunConfig {
                output: output.as_ref().map(|p| p.display().to_string()),
                ..source_config("modengine export", &src)
            };
            let hash = cfg.hash();
            let run = || export_module(&resolve_module(&src)?, output.as_deref(), &hash);
            (cfg, run())
        }
        Command::Verify { cmd: VerifyCmd::All { g, coeff, trials, seed } } => {
            let cfg = RunConfig {
                q: Some(g.q),
                coeff: Some(coeff.clone()),
                trials: Some(trials),
                seed: Some(seed.seed),
                ..base_config("verify all", &g.ty)
            };
            let run = || verify_all(&g, &coeff, trials, seed.seed);
            (cfg, run())
        }
    }
}

fn source_config(command: &str, src: &ModuleSource) -> RunConfig {
    match (&src.input, &src.ty) {
        (Some(p), _) => RunConfig { command: command.into(), input: Some(p.display().to_string()), ..RunConfig::default() },
        _ => RunConfig {
            q: Some(src.q),
            coeff: src.coeff.clone(),
            j: src.j.clone(),
            cap: Some(src.cap),
            ..base_config(command, &TypeArgs { ty: src.ty.clone().unwrap_or_default(), rank: src.rank })
        },
    }
}

fn resolve_module(src: &ModuleSource) -> Result<flagperm::modengine::MatrixModule> {
    if let Some(p) = &src.input {
        return load_module(p);
    }
    let ty = src.ty.as_deref().ok_or_else(|| Error::Config("give --input or --type with --coeff".into()))?;
    let rs = root_system(ty, src.rank)?;
    let f = prime_coeff(src.coeff.as_deref().unwrap_or("F5"))?;
    let j = match &src.j {
        Some(s) => {
            let js = parse_j(s, rs.rank())?;
            if js.len() != 1 {
                return Err(Error::Config("--J must name a single subset here".into()));
            }
            Some(js[0])
        }
        None => None,
    };
    build_module(group(rs, src.q)?, f, j, src.cap)
}

/// Runs each suite at a modest size. Errors inside a suite become
/// inconclusive checks so the remaining suites still run.
fn verify_all(g: &GroupArgs, coeff: &str, trials: usize, seed: u64) -> Result<Outcome> {
    positive("trials", trials)?;
    let rs = root_system(&g.ty.ty, g.ty.rank)?;
    let coeff_spec: CoeffSpec = coeff.parse()?;
    let grp = group(rs.clone(), g.q)?;
    let all: Vec<NodeSet> = NodeSet::all(rs.rank()).collect();
    let t = TrialArgs { trials, seed };
    let p = grp.field().p();

    let mut suites: Vec<(&str, Result<Outcome>)> = Vec::new();
    suites.push(("rootsys", rootsys_report(&rs)));
    suites.push(("chevalley", chevalley_selfcheck(&grp, 50, seed)));
    suites.push(("flagmod", flagmod_build(grp.clone(), &coeff_spec, &all, EjMode::Both, DEFAULT_DIM_CAP)));
    let selfenc = (|| {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut checks = Vec::new();
        let mut orders = Vec::new();
        for k in 0..trials {
            let x: Vec<_> = (0..2).map(|_| grp.random_unipotent(&mut rng)).collect();
            let out = selfenc_closure(&grp, &x, OrderPolicy::Default, seed, DEFAULT_GROUP_CAP)?;
            orders.push(out.result["order"].clone());
            checks.extend(out.checks.into_iter().map(|c| c.prefixed(&format!("trial{k}"))));
        }
        Ok(Outcome { checks, result: json!({ "closure_orders": orders }) })
    })();
    suites.push(("selfenc", selfenc));
    suites.push(("augment", augment_search(&grp, &coeff_spec, &all, &t, flagperm::augment::DEFAULT_BUDGET)));
    match PrimeField::new(p) {
        Ok(fp) => suites.push(("charp", charp_pipeline(&grp, &fp, &all, &t, 3))),
        Err(e) => suites.push(("charp", Err(e))),
    }
    if let CoeffSpec::Prime(f) = coeff_spec {
        let modengine = build_module(grp.clone(), f, None, DEFAULT_DIM_CAP).and_then(|m| modengine_factors(&m, seed, BRUTE_FORCE_CAP));
        suites.push(("modengine", modengine));
    }

    let mut checks = Vec::new();
    let mut result = Map::new();
    for (name, out) in suites {
        match out {
            Ok(o) => {
                checks.extend(o.checks.into_iter().map(|c| c.prefixed(name)));
                result.insert(name.into(), o.result);
            }
            Err(e) => {
                checks.push(Check::new(format!("{name}.run"), Verdict::Inconclusive, e.to_string()));
                result.insert(name.into(), Value::Null);
            }
        }
    }
    Ok(Outcome { checks, result: Value::Object(result) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cfg, out) = dispatch(cli.command);
    let (text, code) = match out {
        Ok(outcome) => {
            let env = Envelope::new(cfg, outcome);
            (serde_json::to_string_pretty(&env), env.exit_code())
        }
        Err(e) => (serde_json::to_string_pretty(&ErrorEnvelope::new(cfg, &e)), 2),
    };
    // a closed pipe is not worth a panic
    let _ = writeln!(std::io::stdout().lock(), "{}", text.expect("report serializes"));
    ExitCode::from(code as u8)
}
