//! Command-line driver: solve, verify, galois, example-3-9 and selftest. Reports are
//! JSON on stdout (or `--output`). Exit code 0 when every asserted property holds,
//! 1 when one fails, 2 on bad input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use deltalin::equations::{EquationKind, EquationSpec, EquationType, SolveOptions};
use deltalin::galois::{
    check_right_compatibility, enumerate_monomial_constants, order_two_counterexample,
    GaloisBound, Note, DEFAULT_CAP,
};
use deltalin::json::{self as codec, object};
use deltalin::padic_matrix::{in_gl, PMatrix};
use deltalin::{make_context, selftest, RingContext, Sampler};

#[derive(Parser)]
#[command(name = "deltalin", version, about = "Arithmetic linear differential equations over p-adic rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve phi(u) = (1 + p alpha) Phi(u) from a starting value u0.
    Solve(SolveArgs),
    /// Check a solution against its equation.
    Verify(VerifyArgs),
    /// Check the monomial constants and constructed members of G_u.
    Galois(GaloisArgs),
    /// The order-two element of G_u outside the monomial group.
    #[command(name = "example-3-9")]
    Example(ExampleArgs),
    /// Run the acceptance suite.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct RingArgs {
    #[arg(long, default_value_t = 5)]
    p: u64,
    /// Degree of the residue field over F_p.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Working precision N (arithmetic mod p^N).
    #[arg(long, default_value_t = 16)]
    prec: u32,
}

#[derive(Args)]
struct EquationArgs {
    #[command(flatten)]
    ring: RingArgs,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// gl, sl or so.
    #[arg(long, default_value = "gl")]
    kind: String,
    /// sp, so_even or so_odd (kind so only).
    #[arg(long)]
    variant: Option<String>,
    /// random (in the Lie algebra of the kind), random-gl, zero, or a JSON matrix file.
    #[arg(long, default_value = "random")]
    alpha: String,
    /// identity, random, random-sl, random-so, or a JSON matrix file.
    #[arg(long, default_value = "identity")]
    u0: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    eq: EquationArgs,
    /// Stop once an iterate repeats.
    #[arg(long)]
    early_exit: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// A report written by `solve` (provides spec and solution).
    #[arg(long, conflicts_with_all = ["spec", "solution"])]
    input: Option<PathBuf>,
    #[arg(long, requires = "solution")]
    spec: Option<PathBuf>,
    #[arg(long, requires = "spec")]
    solution: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GaloisArgs {
    #[command(flatten)]
    eq: EquationArgs,
    /// Torsion order d of the diagonal entries (default p^m - 1).
    #[arg(long)]
    torsion: Option<u64>,
    /// Bound on n! * d^n.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u128,
    /// Random samples for right compatibility, and constructed members of G_u.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Largest order searched for each candidate.
    #[arg(long, default_value_t = 1024)]
    order_cap: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExampleArgs {
    /// A prime congruent to 1 mod 3.
    #[arg(long, default_value_t = 7)]
    p: u64,
    #[arg(long, default_value_t = 16)]
    prec: u32,
    /// Residue mod p of the cube root of unity (default: the smaller one).
    #[arg(long)]
    zeta: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// A JSON report and whether every asserted property held.
struct Outcome {
    report: Value,
    passed: bool,
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn equation_type(args: &EquationArgs) -> Result<EquationType> {
    let r = &args.ring;
    let ring = make_context(r.p, r.m, r.prec, None)?;
    let kind = EquationKind::parse(&args.kind, args.variant.as_deref())?;
    if kind.variant().is_none() && args.variant.is_some() {
        bail!("--variant only applies to kind so");
    }
    Ok(EquationType::new(&ring, kind, args.n)?)
}

fn alpha_from(source: &str, t: &EquationType, s: &mut Sampler) -> Result<PMatrix> {
    let (ring, n) = (t.ring(), t.n());
    Ok(match source {
        "random" => match t.kind() {
            EquationKind::Gl => s.alpha_gl(ring, n),
            EquationKind::Sl => s.alpha_sl(ring, n, false),
            EquationKind::So(_) => s.alpha_so(t.q().unwrap(), false),
        },
        "random-gl" => s.alpha_gl(ring, n),
        "zero" => PMatrix::zero(ring, n),
        path => codec::matrix_from_json(ring, &read_json(&PathBuf::from(path))?)?,
    })
}

fn u0_from(source: &str, t: &EquationType, s: &mut Sampler) -> Result<PMatrix> {
    let (ring, n) = (t.ring(), t.n());
    Ok(match source {
        "identity" => PMatrix::identity(ring, n),
        "random" => s.gl(ring, n),
        "random-sl" => s.sl(ring, n),
        "random-so" => match t.q() {
            Some(q) => s.so(q),
            None => bail!("--u0 random-so needs kind so"),
        },
        path => codec::matrix_from_json(ring, &read_json(&PathBuf::from(path))?)?,
    })
}

/// alpha and u0 from separate streams so changing one source leaves the other fixed.
fn build(args: &EquationArgs) -> Result<(EquationSpec, PMatrix)> {
    let t = equation_type(args)?;
    let alpha = alpha_from(&args.alpha, &t, &mut Sampler::stream(args.seed, &[1]))?;
    let u0 = u0_from(&args.u0, &t, &mut Sampler::stream(args.seed, &[2]))?;
    Ok((EquationSpec::new(t, alpha)?, u0))
}

fn solve(args: &SolveArgs) -> Result<Outcome> {
    let (spec, u0) = build(&args.eq)?;
    let opts = SolveOptions {
        early_exit: args.early_exit,
    };
    let rep = spec.solve_with(&u0, &opts)?;
    let passed = rep.residual_valuation.at_least(spec.ring().precision())
        && rep.integral_values.iter().all(|i| i.vanishes());
    let mut report = codec::solve_report_to_json(&spec, &u0, &rep);
    report["seed"] = json!(args.eq.seed);
    report["passed"] = json!(passed);
    Ok(Outcome { report, passed })
}

fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let (spec, solution) = match (&args.input, &args.spec, &args.solution) {
        (Some(input), _, _) => {
            let v = read_json(input)?;
            let spec = codec::spec_from_json(v.get("spec").context("report has no \"spec\"")?)?;
            let sol = v.get("solution").context("report has no \"solution\"")?.clone();
            (spec, sol)
        }
        (None, Some(spec), Some(sol)) => (codec::spec_from_json(&read_json(spec)?)?, read_json(sol)?),
        _ => bail!("give --input, or both --spec and --solution"),
    };
    let u = codec::matrix_from_json(spec.ring(), &solution)?;
    if u.n() != spec.n() {
        bail!("solution is {m}x{m}, the equation is {n}x{n}", m = u.n(), n = spec.n());
    }
    let mut fields = vec![
        ("spec", codec::spec_to_json(&spec)),
        ("solution", codec::matrix_to_json(&u)),
        ("in_gl", json!(in_gl(&u))),
    ];
    if !in_gl(&u) {
        fields.push(("residual_valuation", Value::Null));
        fields.push(("prime_integrals", json!([])));
        fields.push(("passed", json!(false)));
        return Ok(Outcome {
            report: object(fields),
            passed: false,
        });
    }
    let residual = spec.residual(&u)?;
    let integrals = spec.prime_integrals(&u)?;
    let need = spec.ring().precision().min(u.known_prec());
    let passed = residual.valuation().at_least(need) && integrals.iter().all(|i| i.vanishes());
    fields.push(("residual_valuation", json!(residual.valuation())));
    fields.push(("prime_integrals", codec::integrals_to_json(&integrals)));
    fields.push(("passed", json!(passed)));
    Ok(Outcome {
        report: object(fields),
        passed,
    })
}

fn member_notes(notes: &mut Vec<Note>, in_gu: bool) {
    notes.insert(
        0,
        Note {
            name: "constructed member lies in G_u".into(),
            passed: in_gu,
        },
    );
}

fn galois(args: &GaloisArgs) -> Result<Outcome> {
    let (spec, u0) = build(&args.eq)?;
    let t = spec.equation_type();
    let ring: &Arc<RingContext> = t.ring();
    let u = spec.solve(&u0)?.solution;
    let d = args
        .torsion
        .unwrap_or(ring.residue_field_size() as u64 - 1);
    let candidates = enumerate_monomial_constants(ring, t.n(), d, args.cap)?;
    let bound = GaloisBound::new(t, &u)?;
    let reports = candidates
        .par_iter()
        .map(|c| bound.report(c, args.order_cap))
        .collect::<deltalin::Result<Vec<_>>>()?;

    let mut s = Sampler::stream(args.eq.seed, &[3]);
    let compat = check_right_compatibility(t, args.samples, &mut s)?;
    let mut constructed = Vec::new();
    for _ in 0..args.samples.min(8) {
        let v = bound.member_from(&s.gl(ring, t.n()))?;
        let mut r = bound.report(&v, args.order_cap)?;
        member_notes(&mut r.notes, r.in_gu);
        constructed.push(r);
    }
    let passed = compat.holds
        && reports.iter().all(|r| r.passed())
        && constructed.iter().all(|r| r.passed());
    let witness = compat.witness.as_ref().map(|(a, c)| {
        json!({"a": codec::matrix_to_json(a), "c": codec::matrix_to_json(c)})
    });
    let report = json!({
        "spec": codec::spec_to_json(&spec),
        "solution": codec::matrix_to_json(&u),
        "torsion": d,
        "right_compatibility": {
            "holds": compat.holds,
            "samples": compat.samples,
            "witness": witness,
        },
        "candidates": reports.iter().map(codec::galois_report_to_json).collect::<Vec<_>>(),
        "constructed_members": constructed.iter().map(codec::galois_report_to_json).collect::<Vec<_>>(),
        "seed": args.eq.seed,
        "passed": passed,
    });
    Ok(Outcome { report, passed })
}

fn example(args: &ExampleArgs) -> Result<Outcome> {
    let rep = order_two_counterexample(args.p, args.prec, args.zeta)?;
    let passed = rep.passed();
    let mut report = codec::galois_report_to_json(&rep);
    report["p"] = json!(args.p);
    report["N"] = json!(args.prec);
    Ok(Outcome { report, passed })
}

fn run(cli: &Cli) -> Result<(Outcome, Option<&PathBuf>)> {
    Ok(match &cli.command {
        Command::Solve(a) => (solve(a)?, a.output.as_ref()),
        Command::Verify(a) => (verify(a)?, a.output.as_ref()),
        Command::Galois(a) => (galois(a)?, a.output.as_ref()),
        Command::Example(a) => (example(a)?, a.output.as_ref()),
        Command::Selftest(a) => {
            let rep = selftest::run_all(a.seed);
            let passed = rep.passed;
            (
                Outcome {
                    report: rep.to_json(),
                    passed,
                },
                a.output.as_ref(),
            )
        }
    })
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("DELTA_LIN_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .with_context(|| format!("DELTA_LIN_THREADS must be a positive integer (got {v:?})"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| run(&cli));
    match result {
        Ok((outcome, output)) => {
            let text = codec::to_string(&outcome.report);
            match output {
                Some(path) => {
                    if let Err(e) = fs::write(path, text) {
                        eprintln!("error: writing {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
