use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use suborbit::constructions::{build, diag, Construction, GroupSpec};
use suborbit::orbital::{suborbits, OrbitalGraph};
use suborbit::verifiers::cf::{
    check_cf_ingredients, check_cf_miniature, default_miniature, CfMiniature,
};
use suborbit::verifiers::ex42::{check_example42, Example42};
use suborbit::verifiers::prop31::check_prop31;
use suborbit::verifiers::sd::check_sd_dichotomy;
use suborbit::verifiers::{Mode, VerificationReport};
use suborbit::{Budget, Error, PermGroup, Permutation, Result};

#[derive(Parser, Debug)]
#[command(
    name = "suborbit",
    version,
    about = "Suborbits, orbital graphs and kernel checks for permutation groups"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized subgroup searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Enumeration budget in operations.
    #[arg(long, global = true, env = "SUBORBIT_BUDGET", default_value_t = Budget::DEFAULT.0,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Worker threads for candidate scans.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degree, order, transitivity and primitivity of a group.
    Info { spec: String },
    /// Suborbit lengths at a point.
    Subdegrees {
        spec: String,
        #[arg(long, default_value_t = 0)]
        alpha: usize,
    },
    /// The orbital graph through the arc (α, β).
    Orbital {
        spec: String,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        beta: usize,
    },
    /// Run a verification check.
    #[command(subcommand)]
    Verify(Verify),
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Trivial kernels for a group with a regular normal subgroup.
    Prop31 {
        spec: String,
        #[arg(long, default_value_t = 0)]
        alpha: usize,
    },
    /// Kernel dichotomy for the full diagonal group on `factors` copies of T.
    Sd(SdArgs),
    /// Two-point stabilizer P × V in the affine example.
    Ex42(Ex42Args),
    /// Nontrivial normal two-point stabilizer in the small twisted model.
    CfMini(CfMiniArgs),
    /// Maximality, core-freeness, base two and centralizer at full size.
    CfIngredients {
        #[arg(long, default_value_t = 61)]
        p: u64,
        /// Run outside p ≡ ±1 (mod 10), p ≥ 61.
        #[arg(long)]
        force: bool,
    },
    /// Every check at its reference parameters.
    All,
}

#[derive(Args, Debug)]
struct SdArgs {
    #[arg(long = "T")]
    t: String,
    #[arg(long)]
    factors: usize,
    /// Check every suborbit instead of one per subdegree.
    #[arg(long)]
    all_suborbits: bool,
    /// Check only these points.
    #[arg(long, conflicts_with = "all_suborbits")]
    beta: Vec<usize>,
}

#[derive(Args, Debug)]
struct Ex42Args {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    r: u64,
    #[arg(long = "T", default_value = "Sym(3)")]
    t: String,
    /// Generator of P, in cycle notation on the points of T.
    #[arg(long = "P", default_value = "(0 1)")]
    p_generator: String,
    /// Scan all of ι(T) × H as well.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args, Debug)]
struct CfMiniArgs {
    #[arg(long = "A", default_value = "Sym(3)")]
    a: String,
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// Group permuting the m coordinates.
    #[arg(long = "H", default_value = "Cyc(3)")]
    h: String,
    #[arg(long = "T", default_value = "Sym(6)")]
    t: String,
    #[arg(long, default_value_t = 0)]
    c1: usize,
    #[arg(long, default_value_t = 1)]
    c2: usize,
    /// Scan all of ι(T) × L as well.
    #[arg(long)]
    oracle: bool,
}

struct Ctx {
    seed: u64,
    budget: Budget,
    threads: usize,
}

impl Ctx {
    fn construct(&self, text: &str) -> Result<Construction> {
        build(&text.parse::<GroupSpec>()?, self.seed, self.budget)
    }

    fn group(&self, text: &str) -> Result<PermGroup> {
        Ok(self.construct(text)?.group)
    }
}

enum Output {
    Plain(Value, String),
    Reports(Vec<VerificationReport>),
}

fn mode(oracle: bool) -> Mode {
    if oracle {
        Mode::Oracle
    } else {
        Mode::Fast
    }
}

fn info(ctx: &Ctx, text: &str) -> Result<Output> {
    let c = ctx.construct(text)?;
    let g = &c.group;
    let primitive = g.is_transitive() && g.is_primitive()?.is_primitive();
    let value = json!({
        "group": c.spec.to_string(),
        "degree": g.degree(),
        "order": g.order().to_string(),
        "transitive": g.is_transitive(),
        "primitive": primitive,
        "base": g.base(),
        "regular_normal_subgroup": c.regular_normal.is_some(),
    });
    let text = format!(
        "{}\n  degree: {}\n  order: {}\n  transitive: {}\n  primitive: {}\n  base: {:?}",
        c.spec,
        g.degree(),
        g.order(),
        g.is_transitive(),
        primitive,
        g.base()
    );
    Ok(Output::Plain(value, text))
}

fn subdegrees(ctx: &Ctx, text: &str, alpha: usize) -> Result<Output> {
    let g = ctx.group(text)?;
    let subs = suborbits(&g, alpha)?;
    let lengths: Vec<usize> = subs.iter().map(|s| s.length).collect();
    let reps: Vec<usize> = subs.iter().map(|s| s.representative).collect();
    let value =
        json!({ "group": text, "alpha": alpha, "subdegrees": lengths, "representatives": reps });
    let lines: Vec<String> = subs
        .iter()
        .map(|s| format!("  {} (representative {})", s.length, s.representative))
        .collect();
    Ok(Output::Plain(
        value,
        format!("{text} at α={alpha}\n{}", lines.join("\n")),
    ))
}

fn orbital(ctx: &Ctx, text: &str, alpha: usize, beta: usize) -> Result<Output> {
    let g = ctx.group(text)?;
    let graph = OrbitalGraph::new(&g, alpha, beta)?;
    let (weak, strong) = graph.is_connected();
    let arc = graph.arc_stabilizer()?.order().to_string();
    let plus = graph.plus_kernel()?.order().to_string();
    let minus = graph.minus_kernel()?.order().to_string();
    let local = graph.local_group()?.order().to_string();
    let value = json!({
        "group": text,
        "alpha": alpha,
        "beta": beta,
        "valency": graph.valency(),
        "self_paired": graph.is_self_paired(),
        "weakly_connected": weak,
        "strongly_connected": strong,
        "arc_stabilizer_order": arc,
        "plus_kernel_order": plus,
        "minus_kernel_order": minus,
        "local_group_order": local,
    });
    let text = format!(
        "{text} arc ({alpha}, {beta})\n  d: {}\n  self-paired: {}\n  connected: {weak} (strongly: {strong})\n  |G_αβ|: {arc}\n  |G_α^{{+[1]}}|: {plus}\n  |G_β^{{−[1]}}|: {minus}\n  local group order: {local}",
        graph.valency(),
        graph.is_self_paired()
    );
    Ok(Output::Plain(value, text))
}

fn prop31(ctx: &Ctx, text: &str, alpha: usize) -> Result<VerificationReport> {
    let c = ctx.construct(text)?;
    let normal = c.regular_normal.ok_or_else(|| {
        Error::Precondition(format!(
            "no regular normal subgroup is known for {}",
            c.spec
        ))
    })?;
    check_prop31(&c.spec.to_string(), &c.group, &normal, alpha, ctx.budget)
}

fn sd(ctx: &Ctx, args: &SdArgs) -> Result<VerificationReport> {
    let t: GroupSpec = args.t.parse()?;
    let sd = diag(&t, args.factors, ctx.seed, ctx.budget)?;
    let name = format!("Diag({t},{})", args.factors);
    let betas: Option<Vec<usize>> = if args.all_suborbits {
        None
    } else if !args.beta.is_empty() {
        Some(args.beta.clone())
    } else {
        let mut seen = std::collections::BTreeSet::new();
        let subs = suborbits(sd.group(), sd.space().alpha())?;
        Some(
            subs.iter()
                .filter(|s| !s.trivial && seen.insert(s.length))
                .map(|s| s.representative)
                .collect(),
        )
    };
    check_sd_dichotomy(&name, &sd, betas.as_deref(), ctx.budget)
}

fn ex42(ctx: &Ctx, args: &Ex42Args) -> Result<VerificationReport> {
    let t = ctx.group(&args.t)?;
    let p_generator = Permutation::parse_cycles(t.degree(), &args.p_generator)?;
    let ex = Example42 {
        p: args.p,
        k: args.k,
        r: args.r,
        t_name: args.t.clone(),
        t,
        p_generator,
        mode: mode(args.oracle),
        threads: ctx.threads,
    };
    check_example42(&ex, ctx.budget)
}

fn cf_mini(ctx: &Ctx, args: &CfMiniArgs) -> Result<VerificationReport> {
    let cf = CfMiniature {
        a_name: args.a.clone(),
        a: ctx.group(&args.a)?,
        m: args.m,
        h_name: args.h.clone(),
        h: ctx.group(&args.h)?,
        t_name: args.t.clone(),
        t: ctx.group(&args.t)?,
        c1: args.c1,
        c2: args.c2,
        mode: mode(args.oracle),
        threads: ctx.threads,
    };
    check_cf_miniature(&cf, ctx.budget)
}

fn all(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    for spec in ["AGL1(5)", "AGL1(7)", "AGL1(11)", "HS(Alt(5))"] {
        reports.push(prop31(ctx, spec, 0)?);
    }
    reports.push(sd(
        ctx,
        &SdArgs {
            t: "Alt(5)".into(),
            factors: 3,
            all_suborbits: true,
            beta: Vec::new(),
        },
    )?);
    for (k, r) in [(2, 3), (3, 7)] {
        reports.push(ex42(
            ctx,
            &Ex42Args {
                p: 2,
                k,
                r,
                t: "Sym(3)".into(),
                p_generator: "(0 1)".into(),
                oracle: true,
            },
        )?);
    }
    for m in [Mode::Fast, Mode::Oracle] {
        reports.push(check_cf_miniature(
            &default_miniature(m, ctx.threads),
            ctx.budget,
        )?);
    }
    reports.push(check_cf_ingredients(61, false, ctx.seed, ctx.budget)?);
    Ok(reports)
}

fn run(cli: &Cli) -> Result<Output> {
    let ctx = Ctx {
        seed: cli.seed,
        budget: Budget(cli.budget),
        threads: cli.threads.max(1),
    };
    let single = |r: Result<VerificationReport>| r.map(|r| Output::Reports(vec![r]));
    match &cli.command {
        Command::Info { spec } => info(&ctx, spec),
        Command::Subdegrees { spec, alpha } => subdegrees(&ctx, spec, *alpha),
        Command::Orbital { spec, alpha, beta } => orbital(&ctx, spec, *alpha, *beta),
        Command::Verify(v) => match v {
            Verify::Prop31 { spec, alpha } => single(prop31(&ctx, spec, *alpha)),
            Verify::Sd(args) => single(sd(&ctx, args)),
            Verify::Ex42(args) => single(ex42(&ctx, args)),
            Verify::CfMini(args) => single(cf_mini(&ctx, args)),
            Verify::CfIngredients { p, force } => {
                single(check_cf_ingredients(*p, *force, ctx.seed, ctx.budget))
            }
            Verify::All => all(&ctx).map(Output::Reports),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match output {
        Output::Plain(value, text) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&value).expect("JSON value")
                );
            } else {
                println!("{text}");
            }
            ExitCode::SUCCESS
        }
        Output::Reports(reports) => {
            let is_all = matches!(cli.command, Command::Verify(Verify::All));
            if cli.json {
                let text = if is_all {
                    serde_json::to_string_pretty(&reports)
                } else {
                    serde_json::to_string_pretty(&reports[0])
                };
                println!("{}", text.expect("reports serialize"));
            } else {
                for r in &reports {
                    println!("{}", r.to_text());
                }
            }
            if reports.iter().all(|r| r.pass) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
