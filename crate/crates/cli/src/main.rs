//! `cursed-games`: parse games, check and enumerate cursed equilibria, and
//! reproduce the example thresholds.

use std::fs;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use cursed::cse::{check_cse, CseOptions};
use cursed::dsl::{parse_game, write_game};
use cursed::game::Game;
use cursed::one_stage::{check_one_stage, enumerate_pure, Concept as OneStageConcept};
use cursed::profile::{format_shorthand, parse_profile, Profile, PureSpace, MAX_PURE_PROFILES};
use cursed::report::EquilibriumReport;
use cursed::scalar::{format_rational, int, parse_rational, ratio, Rational, Scalar};
use cursed::scenarios::claims::{verify_claim, CLAIM_IDS};
use cursed::scenarios::cutoffs::{cutoff_cse, cutoff_sce, engine_cutoff_cse, engine_cutoff_sce};
use cursed::scenarios::regions::{axis, region_map, region_map_cse, to_csv};
use cursed::scenarios::{broadcaster_game, matching_game, perfect_info_game, signaling_game};
use cursed::sce::{check_sce, SceOptions};
use cursed::scramble::scramble;

const INPUT_ERROR: u8 = 2;
const MISMATCH: u8 = 1;

#[derive(Parser)]
#[command(name = "cursed-games", version, about = "Cursed sequential and sequential cursed equilibrium solver")]
struct Cli {
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, env = "CURSED_GAMES_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a game file and print its canonical form.
    Parse { file: String },
    /// Check one strategy profile.
    Check {
        file: String,
        #[command(flatten)]
        solve: SolveArgs,
        /// JSON profile, shorthand like `[(A,A);(L,R)]`, or `@path`.
        #[arg(long)]
        profile: String,
    },
    /// List every pure equilibrium.
    Enumerate {
        file: String,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Print the scrambled version of a game.
    Scramble { file: String },
    /// Build an example game, or report broadcaster cutoffs.
    Scenario {
        #[arg(value_enum)]
        name: ScenarioName,
        #[command(flatten)]
        params: ScenarioParams,
    },
    /// Run a claim harness.
    Verify {
        /// One of C3, C4, C5, C6, C7, C8, C11, ci_cse, or `all`.
        claim: String,
        /// Comma-separated values of the claim's main parameter.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Equilibrium regions over a parameter grid as CSV.
    Regions {
        /// Game file, or `signaling` / `scrambled_signaling`.
        target: String,
        /// Points per axis.
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = ConceptArg::Sce)]
        concept: ConceptArg,
        /// Profiles separated by `|`; all pure profiles by default.
        #[arg(long)]
        profiles: Option<String>,
        /// Evaluate every point in rational arithmetic.
        #[arg(long)]
        exact: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConceptArg {
    Cse,
    Sce,
    Ce,
    Ice,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScenarioName {
    Signaling,
    ScrambledSignaling,
    Broadcaster,
    PerfectInfo,
    Matching,
}

#[derive(Args, Clone)]
struct SolveArgs {
    #[arg(long, value_enum)]
    concept: ConceptArg,
    #[arg(long)]
    chi: Option<String>,
    #[arg(long = "chi-s")]
    chi_s: Option<String>,
    #[arg(long = "psi-s")]
    psi_s: Option<String>,
    /// Split partition cells per public history.
    #[arg(long = "force-phc")]
    force_phc: bool,
    /// Rational arithmetic instead of floating point.
    #[arg(long)]
    exact: bool,
}

#[derive(Args, Clone)]
struct ScenarioParams {
    #[arg(long, default_value = "1/2")]
    alpha: String,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value = "0")]
    x: String,
    #[arg(long, default_value = "1/2")]
    y: String,
    #[arg(long, default_value = "1/10")]
    eps: String,
    /// With a broadcaster: report the CSE cutoff at this chi.
    #[arg(long)]
    chi: Option<String>,
    /// With a broadcaster: report the SCE cutoff at these weights.
    #[arg(long = "chi-s")]
    chi_s: Option<String>,
    #[arg(long = "psi-s")]
    psi_s: Option<String>,
}

/// Failure carrying its exit code.
struct Fail(u8, String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(INPUT_ERROR, e.to_string())
    }
}

type Out = Result<u8, Fail>;

fn input(msg: impl Into<String>) -> Fail {
    Fail(INPUT_ERROR, msg.into())
}

fn number(name: &str, text: &Option<String>) -> Result<Rational, Fail> {
    let t = text.as_deref().ok_or_else(|| input(format!("--{name} is required for this concept")))?;
    let v = parse_rational(t).map_err(|_| input(format!("--{name}: `{t}` is not a number")))?;
    if v < int(0) || v > int(1) {
        return Err(input(format!("--{name} must lie in [0,1], got {t}")));
    }
    Ok(v)
}

fn load_game(path: &str) -> Result<Game, Fail> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("{path}: {e}")))?;
    parse_game(&text).map_err(|e| input(format!("{path}:{e}")))
}

fn load_profile(game: &Game, text: &str) -> Result<Profile<Rational>, Fail> {
    let body = match text.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| input(format!("{path}: {e}")))?,
        None => text.to_string(),
    };
    Ok(parse_profile(game, &body)?)
}

fn print_json(v: &Value) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

/// Concept with its parameters resolved.
enum Solver {
    Cse(Rational),
    Sce(Rational, Rational, bool),
    Ce(Rational),
    Ice,
}

impl Solver {
    fn from_args(a: &SolveArgs) -> Result<Self, Fail> {
        Ok(match a.concept {
            ConceptArg::Cse => Solver::Cse(number("chi", &a.chi)?),
            ConceptArg::Sce => Solver::Sce(number("chi-s", &a.chi_s)?, number("psi-s", &a.psi_s)?, a.force_phc),
            ConceptArg::Ce if a.chi.is_none() => Solver::Ce(int(1)),
            ConceptArg::Ce => Solver::Ce(number("chi", &a.chi)?),
            ConceptArg::Ice => Solver::Ice,
        })
    }

    fn report<S: Scalar>(&self, game: &Game, exact: &Profile<Rational>) -> Result<EquilibriumReport, Fail> {
        let sigma: Profile<S> = exact.convert();
        let s = |x: &Rational| S::from_rational(x);
        Ok(match self {
            Solver::Cse(chi) => {
                let v = check_cse(game, &sigma, &s(chi), None, &CseOptions::default())?;
                EquilibriumReport::cse(game, exact, &s(chi), &v)
            }
            Solver::Sce(c, p, force) => {
                let opts = SceOptions { families: None, force_phc: *force };
                let v = check_sce(game, &sigma, &s(c), &s(p), &opts)?;
                EquilibriumReport::sce(game, exact, &s(c), &s(p), &v)
            }
            Solver::Ce(chi) => {
                let v = check_one_stage(game, &sigma, &OneStageConcept::Ce(s(chi)))?;
                EquilibriumReport::one_stage("ce", game, exact, Some(&s(chi)), &v)
            }
            Solver::Ice => {
                let v = check_one_stage(game, &sigma, &OneStageConcept::Ice)?;
                EquilibriumReport::one_stage::<S>("ice", game, exact, None, &v)
            }
        })
    }

    fn run(&self, game: &Game, exact: &Profile<Rational>, rational: bool) -> Result<EquilibriumReport, Fail> {
        if rational {
            self.report::<Rational>(game, exact)
        } else {
            self.report::<f64>(game, exact)
        }
    }
}

fn cmd_check(file: &str, solve: &SolveArgs, profile: &str) -> Out {
    let game = load_game(file)?;
    let sigma = load_profile(&game, profile)?;
    let report = Solver::from_args(solve)?.run(&game, &sigma, solve.exact)?;
    print_json(&report.to_json());
    Ok(0)
}

fn cmd_enumerate(file: &str, solve: &SolveArgs) -> Out {
    let game = load_game(file)?;
    let solver = Solver::from_args(solve)?;
    let found: Vec<Profile<Rational>> = match &solver {
        Solver::Ce(chi) => enumerate_pure(&game, &OneStageConcept::Ce(chi.clone()))?,
        Solver::Ice => enumerate_pure(&game, &OneStageConcept::Ice)?,
        _ => {
            let space = PureSpace::new(&game);
            let total = space
                .guard(MAX_PURE_PROFILES)
                .map_err(|n| input(format!("{n} pure profiles exceed the enumeration limit")))?;
            let hits: Vec<Option<Profile<Rational>>> = (0..total)
                .into_par_iter()
                .map(|k| {
                    let s: Profile<Rational> = space.nth(&game, k);
                    let eq = solver.run(&game, &s, solve.exact)?.verdict;
                    Ok(eq.then_some(s))
                })
                .collect::<Result<_, Fail>>()?;
            hits.into_iter().flatten().collect()
        }
    };
    let reports = found
        .iter()
        .map(|s| solver.run(&game, s, solve.exact).map(|r| r.to_json()))
        .collect::<Result<Vec<Value>, Fail>>()?;
    print_json(&json!({ "game": game.name(), "count": reports.len(), "equilibria": reports }));
    Ok(0)
}

fn cmd_scenario(name: ScenarioName, p: &ScenarioParams) -> Out {
    let q = |t: &str| parse_rational(t).map_err(|_| input(format!("`{t}` is not a number")));
    let game = match name {
        ScenarioName::Signaling => signaling_game(false),
        ScenarioName::ScrambledSignaling => signaling_game(true),
        ScenarioName::Broadcaster => {
            let alpha = q(&p.alpha)?;
            if p.chi.is_some() || p.chi_s.is_some() {
                return broadcaster_cutoffs(&alpha, p);
            }
            broadcaster_game(p.n, &alpha)?
        }
        ScenarioName::PerfectInfo => perfect_info_game(&q(&p.x)?, &q(&p.y)?)?,
        ScenarioName::Matching => matching_game(&q(&p.eps)?)?,
    };
    print!("{}", write_game(&game));
    Ok(0)
}

fn broadcaster_cutoffs(alpha: &Rational, p: &ScenarioParams) -> Out {
    let mut out = serde_json::Map::new();
    out.insert("alpha".into(), format_rational(alpha).into());
    out.insert("n".into(), p.n.into());
    if p.chi.is_some() {
        let chi = number("chi", &p.chi)?;
        let e = engine_cutoff_cse(alpha, &chi, p.n)?;
        out.insert(
            "cse".into(),
            json!({
                "chi": format_rational(&chi),
                "predicted": cutoff_cse(alpha, &chi, p.n).to_string(),
                "engine": e.cutoff.to_string(),
                "listeners_checked": e.listeners,
                "monotone": e.monotone(),
            }),
        );
    }
    if p.chi_s.is_some() || p.psi_s.is_some() {
        let (c, s) = (number("chi-s", &p.chi_s)?, number("psi-s", &p.psi_s)?);
        let e = engine_cutoff_sce(alpha, &c, &s, p.n)?;
        out.insert(
            "sce".into(),
            json!({
                "chi_s": format_rational(&c),
                "psi_s": format_rational(&s),
                "predicted": cutoff_sce(alpha, &c, &s).to_string(),
                "engine": e.cutoff.to_string(),
                "listeners_checked": e.listeners,
            }),
        );
    }
    print_json(&Value::Object(out));
    Ok(0)
}

fn cmd_verify(claim: &str, grid: &Option<String>) -> Out {
    let grid: Option<Vec<Rational>> = grid
        .as_ref()
        .map(|g| g.split(',').map(|t| parse_rational(t).map_err(|_| input(format!("`{t}` is not a number")))).collect())
        .transpose()?;
    let ids: Vec<&str> = if claim == "all" { CLAIM_IDS.to_vec() } else { vec![claim] };
    let mut reports = Vec::new();
    let mut passed = true;
    for id in ids {
        let r = verify_claim(id, grid.as_deref())?;
        eprintln!("{id}: {} checks, {} mismatches, {} ms", r.checks.len(), r.mismatches.len(), r.runtime_ms);
        passed &= r.passed;
        reports.push(serde_json::to_value(&r).expect("serializable"));
    }
    print_json(&if reports.len() == 1 { reports.remove(0) } else { Value::Array(reports) });
    Ok(if passed { 0 } else { MISMATCH })
}

fn cmd_regions(target: &str, grid: usize, concept: ConceptArg, profiles: &Option<String>, all_exact: bool) -> Out {
    let (game, signaling) = match target {
        "signaling" => (signaling_game(false), true),
        "scrambled_signaling" => (signaling_game(true), true),
        path => (load_game(path)?, false),
    };
    let sigmas: Vec<Profile<Rational>> = match profiles {
        Some(list) => list.split('|').map(|p| load_profile(&game, p.trim())).collect::<Result<_, _>>()?,
        None => {
            let space = PureSpace::new(&game);
            let total = space.guard(64).map_err(|n| input(format!("{n} pure profiles; pass --profiles")))?;
            (0..total).map(|k| space.nth(&game, k)).collect()
        }
    };
    let names: Vec<String> = sigmas
        .iter()
        .enumerate()
        .map(|(k, s)| format_shorthand(&game, s).unwrap_or_else(|| format!("profile{k}")))
        .collect();
    let (third, eight_ninths) = (ratio(1, 3), ratio(8, 9));
    let chi_extra: Vec<Rational> = if signaling { vec![third.clone(), eight_ninths.clone()] } else { Vec::new() };
    let psi_extra: Vec<Rational> = if signaling { vec![ratio(1, 9)] } else { Vec::new() };
    let chi_axis = axis(grid, &chi_extra);
    let rows = match concept {
        ConceptArg::Sce => {
            let psi_axis = axis(grid, &psi_extra);
            region_map(&game, &sigmas, &chi_axis, &psi_axis, |c, p| {
                all_exact || *c == third || c.clone() * (int(1) - p.clone()) == eight_ninths
            })?
        }
        ConceptArg::Cse => region_map_cse(&game, &sigmas, &chi_axis)?,
        _ => return Err(input("regions supports --concept sce or cse")),
    };
    print!("{}", to_csv(&rows, &names));
    Ok(0)
}

fn run(cli: &Cli) -> Out {
    match &cli.command {
        Command::Parse { file } => {
            let game = load_game(file)?;
            print!("{}", write_game(&game));
            Ok(0)
        }
        Command::Check { file, solve, profile } => cmd_check(file, solve, profile),
        Command::Enumerate { file, solve } => cmd_enumerate(file, solve),
        Command::Scramble { file } => {
            let game = load_game(file)?;
            print!("{}", write_game(&scramble(&game)));
            Ok(0)
        }
        Command::Scenario { name, params } => cmd_scenario(*name, params),
        Command::Verify { claim, grid } => cmd_verify(claim, grid),
        Command::Regions { target, grid, concept, profiles, exact } => cmd_regions(target, *grid, *concept, profiles, *exact),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { INPUT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: {e}");
        }
    }
    let start = Instant::now();
    let code = match run(&cli) {
        Ok(c) => c,
        Err(Fail(c, msg)) => {
            eprintln!("error: {msg}");
            c
        }
    };
    eprintln!("elapsed: {} ms", start.elapsed().as_millis());
    ExitCode::from(code)
}
