use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use semisimp::freefunctor::{monad_law_failures, ul_truncated, verify_h};
use semisimp::invariants::{saturate_marking, tau0, tau1_presentation, Saturation, Step, Tau1Variant};
use semisimp::lifting::{
    cospan_left_certificate, horn_completion_stage, horn_filler_scan, solve_lifting, verify_certificate, HornScope,
    LiftError, LiftingProblem,
};
use semisimp::monoidal::{cartesian, join, tensor, JoinKind};
use semisimp::search::find_isomorphism;
use semisimp::sset::simplex;
use semisimp::ssx::{export_dot, parse_certificate, parse_map, parse_ssx, print_certificate, print_map, print_ssx};
use semisimp::subdiv::{cospan, sd};
use semisimp::{Mode, SSet};

#[derive(Parser)]
#[command(name = "ssx", version, about = "Finite semisimplicial sets on the command line")]
struct Cli {
    /// Input file; repeat for binary commands. Standard input when omitted.
    #[arg(long = "in", global = true)]
    inputs: Vec<PathBuf>,
    /// Output file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Truncation or search bound.
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Use marked semantics. Without it input markings are dropped.
    #[arg(long, global = true)]
    marked: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scope {
    Injective,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    TwoOfThree,
    TwoOfSix,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the input parses and satisfies the face identities.
    Validate,
    /// Print the number of simplices in each dimension.
    Fvector,
    /// Geometric product of two complexes.
    Tensor,
    /// Cartesian product of two complexes.
    Cartesian,
    /// Join of two complexes.
    Join,
    /// Join marking every new edge.
    Mjoin,
    /// Subdivision.
    Sd,
    /// Summit of the subdivision cospan.
    Cospan,
    /// Connected components.
    Tau0,
    /// Presentation of the homotopy category.
    Tau1 {
        /// Invert every edge.
        #[arg(long)]
        groupoid: bool,
    },
    /// Free degeneracies, truncated at --dim.
    Ul,
    /// Check the monad laws of the free degeneracies on the input.
    EtaCheck,
    /// Exhaustive check of the homotopy H up to --dim.
    VerifyH,
    /// One stage of horn completion.
    Complete {
        #[arg(long, value_enum, default_value = "injective")]
        scope: Scope,
    },
    /// Report which horns up to --dim have fillers.
    ScanHorns {
        #[arg(long, value_enum, default_value = "all")]
        scope: Scope,
    },
    /// Solve a lifting problem given as maps: left, right, top, bottom.
    Lift,
    /// Certificate for the left leg of the cospan of a simplex.
    CertLeft,
    /// Replay a certificate against its declared map.
    CertVerify,
    /// Close the marking under a saturation rule.
    Saturate {
        #[arg(long, value_enum, default_value = "two-of-three")]
        rule: Rule,
    },
    /// DOT rendering of the 1-skeleton.
    Dot,
}

/// Usage and parse problems exit with 2, failed checks with 1.
enum Failure {
    Usage(String),
    Check(String),
}

type Outcome = Result<String, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

struct Ctx {
    inputs: Vec<PathBuf>,
    dim: Option<usize>,
    mode: Mode,
}

impl Ctx {
    fn texts(&self, want: usize) -> Result<Vec<String>, Failure> {
        if self.inputs.is_empty() && want == 1 {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(usage)?;
            return Ok(vec![s]);
        }
        if self.inputs.len() != want {
            return Err(usage(format!("expected {want} --in files, got {}", self.inputs.len())));
        }
        self.inputs
            .iter()
            .map(|p| fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display()))))
            .collect()
    }

    fn raw(&self) -> Result<SSet, Failure> {
        parse_ssx(&self.texts(1)?[0]).map_err(usage)
    }

    /// Inputs with their markings dropped in plain mode.
    fn complexes(&self, want: usize) -> Result<Vec<SSet>, Failure> {
        self.texts(want)?
            .iter()
            .map(|t| {
                let x = parse_ssx(t).map_err(usage)?;
                Ok(if self.mode.is_marked() { x } else { x.unmarked() })
            })
            .collect()
    }

    fn one(&self) -> Result<SSet, Failure> {
        Ok(self.complexes(1)?.remove(0))
    }

    fn two(&self) -> Result<(SSet, SSet), Failure> {
        let mut v = self.complexes(2)?;
        let b = v.pop().unwrap();
        Ok((v.pop().unwrap(), b))
    }

    fn dim(&self, default: usize) -> usize {
        self.dim.unwrap_or(default)
    }
}

fn run(cmd: &Command, ctx: &Ctx) -> Outcome {
    match cmd {
        Command::Validate => {
            let text = &ctx.texts(1)?[0];
            match parse_ssx(text) {
                Ok(_) => Ok("OK\n".into()),
                Err(e @ semisimp::ssx::ParseError::Validation(_)) => Err(Failure::Check(e.to_string())),
                Err(e) => Err(usage(e)),
            }
        }
        Command::Fvector => {
            let f: Vec<String> = ctx.raw()?.f_vector().iter().map(usize::to_string).collect();
            Ok(format!("{}\n", f.join(" ")))
        }
        Command::Tensor => {
            let (a, b) = ctx.two()?;
            Ok(print_ssx(tensor(&a, &b).sset()))
        }
        Command::Cartesian => {
            let (a, b) = ctx.two()?;
            Ok(print_ssx(cartesian(&a, &b).sset()))
        }
        Command::Join => {
            let (a, b) = ctx.two()?;
            Ok(print_ssx(join(&a, &b, JoinKind::Join).sset()))
        }
        Command::Mjoin => {
            let (a, b) = ctx.two()?;
            Ok(print_ssx(join(&a, &b, JoinKind::MarkingJoin).sset()))
        }
        Command::Sd => Ok(print_ssx(&sd(&ctx.one()?, ctx.mode).sset)),
        Command::Cospan => Ok(print_ssx(cospan(&ctx.one()?, ctx.mode).summit.sset())),
        Command::Tau0 => {
            let (labels, count) = tau0(&ctx.one()?);
            let labels: Vec<String> = labels.iter().map(usize::to_string).collect();
            Ok(format!("{count}\n{}\n", labels.join(" ")))
        }
        Command::Tau1 { groupoid } => {
            let variant = if *groupoid { Tau1Variant::Groupoid } else { Tau1Variant::Category };
            Ok(print_presentation(&ctx.one()?, variant))
        }
        Command::Ul => Ok(print_ssx(&ul_truncated(&ctx.one()?, ctx.dim(2), ctx.mode).sset)),
        Command::EtaCheck => {
            let failures = monad_law_failures(&ctx.one()?, ctx.dim(2), ctx.mode);
            if failures.is_empty() {
                Ok("OK\n".into())
            } else {
                Err(Failure::Check(format!("failed: {}", failures.join(", "))))
            }
        }
        Command::VerifyH => {
            let r = verify_h(ctx.dim(3));
            if r.failures == 0 {
                Ok("OK: 0 failures\n".into())
            } else {
                Err(Failure::Check(format!(
                    "FAIL: {} failures; first: {}",
                    r.failures,
                    r.first_failure.unwrap_or_default()
                )))
            }
        }
        Command::Complete { scope } => {
            let c = horn_completion_stage(&ctx.one()?, ctx.mode, scope.into()).map_err(usage)?;
            Ok(print_ssx(&c.result))
        }
        Command::ScanHorns { scope } => {
            let mut out = String::new();
            for s in horn_filler_scan(&ctx.one()?, ctx.dim(2), ctx.mode, scope.into()) {
                let vs: Vec<String> = s.map.levels()[0].iter().map(usize::to_string).collect();
                let status = s.filler.map_or("unfilled".to_string(), |f| format!("filled by {f}"));
                out.push_str(&format!("horn {} {} [{}]: {status}\n", s.n, s.k, vs.join(" ")));
            }
            Ok(out)
        }
        Command::Lift => {
            let maps: Vec<_> = ctx
                .texts(4)?
                .iter()
                .map(|t| parse_map(t).map(|m| m.map).map_err(usage))
                .collect::<Result<_, _>>()?;
            let [left, right, top, bottom] = <[_; 4]>::try_from(maps).ok().unwrap();
            match solve_lifting(&LiftingProblem { top, left, right, bottom }) {
                Ok(Some(d)) => Ok(print_map(&d)),
                Ok(None) => Err(Failure::Check("no lift".into())),
                Err(LiftError::NotCommuting) => Err(usage("the square does not commute")),
                Err(e) => Err(usage(e)),
            }
        }
        Command::CertLeft => {
            let a = ctx.one()?;
            let n = a.dim().ok_or_else(|| usage("input is empty"))?;
            let iso = find_isomorphism(&a.unmarked(), &simplex(n));
            if iso.is_none() || !a.marked().is_empty() {
                return Err(usage("input must be an unmarked standard simplex"));
            }
            let (c, f) = cospan_left_certificate(n, ctx.mode).map_err(usage)?;
            Ok(print_certificate(&c, &f))
        }
        Command::CertVerify => {
            let (c, f) = parse_certificate(&ctx.texts(1)?[0]).map_err(usage)?;
            match verify_certificate(&c, &f) {
                Ok(true) => Ok(format!("OK: {} cells\n", c.attachments.len())),
                Ok(false) => Err(Failure::Check("FAIL: replay is not isomorphic to the declared map".into())),
                Err(e) => Err(Failure::Check(format!("FAIL: {e}"))),
            }
        }
        Command::Saturate { rule } => {
            let rule = match rule {
                Rule::TwoOfThree => Saturation::TwoOfThree,
                Rule::TwoOfSix => Saturation::TwoOfSix,
            };
            Ok(print_ssx(&saturate_marking(&ctx.raw()?, rule)))
        }
        Command::Dot => Ok(export_dot(&ctx.raw()?)),
    }
}

impl From<&Scope> for HornScope {
    fn from(s: &Scope) -> Self {
        match s {
            Scope::Injective => HornScope::Injective,
            Scope::All => HornScope::All,
        }
    }
}

fn print_presentation(x: &SSet, variant: Tau1Variant) -> String {
    let p = tau1_presentation(x, variant);
    let mut out = format!("objects {}\n", p.objects);
    for (i, g) in p.generators.iter().enumerate() {
        let inv = if g.invertible { " invertible" } else { "" };
        out.push_str(&format!("gen g{i}: {} -> {}{inv}\n", g.source, g.target));
    }
    let word = |path: &semisimp::invariants::Path| {
        if path.steps.is_empty() {
            return format!("id{}", path.source);
        }
        let steps: Vec<String> = path
            .steps
            .iter()
            .map(|s| match s {
                Step::Gen(e) => format!("g{e}"),
                Step::Inv(e) => format!("g{e}^-1"),
            })
            .collect();
        steps.join(" ")
    };
    for (l, r) in &p.relations {
        out.push_str(&format!("rel {} = {}\n", word(l), word(r)));
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = Ctx { inputs: cli.inputs, dim: cli.dim, mode: if cli.marked { Mode::Marked } else { Mode::Plain } };
    match run(&cli.command, &ctx) {
        Ok(text) => {
            let written = match &cli.out {
                Some(p) => fs::write(p, text),
                None => io::stdout().write_all(text.as_bytes()),
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
