use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use kframe::io::{
    load_formula, load_kernel, load_model, parse_grid_valuation, read_file, write_file,
    write_kernel, write_model, write_quotient,
};
use kframe::pipeline::{run_pipeline, PipelineInput};
use kframe::search::{describe_status, find_model_timed};
use kframe::verify::{parse_replay, run_suite, Suite, VerifyOptions, DEFAULT_SEED};
use kframe_core::abstraction::{check_abstraction_structure, quotient_with_partition};
use kframe_core::grid::{
    localize, make_torus_hat_model, make_torus_model, reduce_f_with, GridValuation, RespVariant,
};
use kframe_core::{
    builtin, check, find_violation, satisfying_worlds, ModalFormula, Mode, SearchConfig,
    SearchStatus,
};

#[derive(Parser)]
#[command(
    name = "kframe",
    version,
    about = "Modal satisfiability over universal first-order frame classes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Local,
    Global,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Local => Mode::Local,
            ModeArg::Global => Mode::Global,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its tree, depth and variables.
    Parse {
        /// Formula text, or @FILE.
        #[arg(long)]
        formula: String,
    },
    /// Print a formula in canonical text form.
    Render {
        #[arg(long)]
        formula: String,
    },
    /// Evaluate a formula at one world, or at every world of a model.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        /// Only this world; otherwise every world plus the global verdict.
        #[arg(long)]
        world: Option<usize>,
    },
    /// Evaluate a first-order kernel on the frame of a model.
    FrameCheck {
        #[arg(long)]
        model: PathBuf,
        /// builtin:NAME, @FILE, or an inline kernel body.
        #[arg(long)]
        fo: String,
        /// Also report the three abstraction structure properties.
        #[arg(long)]
        structure: bool,
    },
    /// Quotient a model by its symmetric-edge relation.
    Quotient {
        #[arg(long)]
        model: PathBuf,
        /// Comma-separated variables kept in the quotient.
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Translate a formula into its grid-encoded form.
    Reduce {
        #[arg(long)]
        formula: String,
        /// Wrap the result for a universal world.
        #[arg(long)]
        local: bool,
        /// Also print the phi_final kernel.
        #[arg(long)]
        emit_fo: bool,
        /// Emit the d8 successor constraint only per variable.
        #[arg(long)]
        literal_resp: bool,
    },
    /// Write a torus model.
    MakeTorus {
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        /// Lines `val <var> i,j ...`.
        #[arg(long)]
        val_file: Option<PathBuf>,
        /// The bare torus: no loops and no d8 bits.
        #[arg(long)]
        plain: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a small model of a kernel satisfying a formula.
    Find {
        #[arg(long)]
        fo: String,
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 4)]
        max_worlds: usize,
        #[arg(long, value_enum, default_value = "local")]
        mode: ModeArg,
        #[arg(long)]
        emit_model: Option<PathBuf>,
        #[arg(long)]
        frame_limit: Option<u64>,
        #[arg(long)]
        node_limit: Option<u64>,
        /// Seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Skip frames that are relabellings of earlier ones.
        #[arg(long)]
        symmetry: bool,
    },
    /// Run verification suites, or replay a recorded failure.
    Verify {
        /// Suite names, or `all`.
        #[arg(required_unless_present = "replay")]
        suites: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write one replay file per failure into this directory.
        #[arg(long)]
        failures_dir: Option<PathBuf>,
        #[arg(long, conflicts_with = "suites")]
        replay: Option<PathBuf>,
    },
    /// Run the torus reduction end to end.
    Pipeline {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 8)]
        width: usize,
        #[arg(long, default_value_t = 4)]
        height: usize,
        #[arg(long)]
        val_file: Option<PathBuf>,
        #[arg(short, long, default_value_t = 3)]
        k: usize,
    },
}

fn tree(f: &ModalFormula, out: &mut String) {
    let node = |name: &str, kids: &[&ModalFormula], out: &mut String| {
        let _ = write!(out, "({name}");
        for k in kids {
            out.push(' ');
            tree(k, out);
        }
        out.push(')');
    };
    match f {
        ModalFormula::Var(v) => {
            let _ = write!(out, "(Var {v})");
        }
        ModalFormula::True => out.push_str("True"),
        ModalFormula::False => out.push_str("False"),
        ModalFormula::Not(a) => node("Not", &[a], out),
        ModalFormula::And(a, b) => node("And", &[a, b], out),
        ModalFormula::Or(a, b) => node("Or", &[a, b], out),
        ModalFormula::Imp(a, b) => node("Imp", &[a, b], out),
        ModalFormula::Iff(a, b) => node("Iff", &[a, b], out),
        ModalFormula::Box(a) => node("Box", &[a], out),
        ModalFormula::Dia(a) => node("Dia", &[a], out),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => write_file(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load_valuation(path: Option<&PathBuf>) -> anyhow::Result<GridValuation> {
    match path {
        Some(p) => {
            Ok(parse_grid_valuation(&read_file(p)?).with_context(|| p.display().to_string())?)
        }
        None => Ok(GridValuation::new()),
    }
}

fn verdict(ok: bool) -> ExitCode {
    ExitCode::from(if ok { 0 } else { 1 })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Parse { formula } => {
            let f = load_formula(&formula)?;
            let mut t = String::new();
            tree(&f, &mut t);
            println!("{t}");
            println!("rendered: {f}");
            println!("modal depth: {}", f.modal_depth());
            let vars: Vec<String> = f.variables().into_iter().collect();
            println!("variables: {}", vars.join(", "));
            Ok(ExitCode::SUCCESS)
        }
        Command::Render { formula } => {
            println!("{}", load_formula(&formula)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            model,
            formula,
            world,
        } => {
            let m = load_model(&model)?;
            let f = load_formula(&formula)?;
            if let Some(w) = world {
                let holds = check(&m, w, &f)?;
                println!("{holds}");
                return Ok(verdict(holds));
            }
            let sat = satisfying_worlds(&m, &f);
            for (w, holds) in sat.iter().enumerate() {
                println!("world {w}: {holds}");
            }
            let global = sat.iter().all(|&b| b);
            println!("global: {global}");
            Ok(verdict(global))
        }
        Command::FrameCheck {
            model,
            fo,
            structure,
        } => {
            let m = load_model(&model)?;
            let k = load_kernel(&fo)?;
            let violation = find_violation(m.frame(), &k);
            match &violation {
                None => println!("{}: satisfied", k.name()),
                Some(a) => {
                    let assignment: Vec<String> = a
                        .iter()
                        .enumerate()
                        .map(|(i, w)| format!("x{}={w}", i + 1))
                        .collect();
                    println!("{}: violated at {}", k.name(), assignment.join(", "));
                }
            }
            let mut ok = violation.is_none();
            if structure {
                let s = check_abstraction_structure(m.frame());
                println!("reflexive: {}", s.reflexive);
                println!("max_two_succ: {}", s.max_two_succ);
                println!("max_three_twostep: {}", s.max_three_twostep);
                ok &= s.all();
            }
            Ok(verdict(ok))
        }
        Command::Quotient { model, vars, out } => {
            let m = load_model(&model)?;
            let p = vars.into_iter().filter(|v| !v.is_empty()).collect();
            let (q, part) = quotient_with_partition(&m, &p)?;
            emit(&write_quotient(&q, &part), out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce {
            formula,
            local,
            emit_fo,
            literal_resp,
        } => {
            let psi = load_formula(&formula)?;
            if psi.modal_depth() > 1 {
                eprintln!(
                    "warning: modal depth {} exceeds 1; the reduction is only claimed for depth at most 1",
                    psi.modal_depth()
                );
            }
            let variant = if literal_resp {
                RespVariant::PerVariable
            } else {
                RespVariant::Uniform
            };
            let mut phi = reduce_f_with(&psi, variant)?;
            if local {
                phi = localize(&phi)?;
            }
            println!("{phi}");
            if emit_fo {
                print!("{}", write_kernel(&builtin("phi_final")?));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::MakeTorus {
            width,
            height,
            val_file,
            plain,
            out,
        } => {
            let val = load_valuation(val_file.as_ref())?;
            let m = if plain {
                make_torus_model(width, height, &val)?
            } else {
                make_torus_hat_model(width, height, &val)?
            };
            let header = format!("# {width}x{height} torus, world i + {width}*j is point (i, j)\n");
            emit(&(header + &write_model(&m)), out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Find {
            fo,
            formula,
            max_worlds,
            mode,
            emit_model,
            frame_limit,
            node_limit,
            time_limit,
            symmetry,
        } => {
            let k = load_kernel(&fo)?;
            let f = load_formula(&formula)?;
            let config = SearchConfig {
                max_worlds,
                mode: mode.into(),
                frame_limit,
                node_limit,
                symmetry_reduction: symmetry,
            };
            let limit = match time_limit {
                Some(s) if !(s >= 0.0 && s.is_finite()) => {
                    bail!("--time-limit must be a non-negative number of seconds")
                }
                Some(s) => Some(Duration::from_secs_f64(s)),
                None => None,
            };
            let timed = find_model_timed(&k, &f, &config, limit)?;
            let stats = &timed.outcome.stats;
            println!("{}", describe_status(&timed));
            println!(
                "frames examined: {}, frames accepted: {}, valuation nodes: {}, elapsed: {:.3}s",
                stats.frames_examined,
                stats.frames_accepted,
                stats.models_examined,
                timed.elapsed.as_secs_f64()
            );
            match &timed.outcome.status {
                SearchStatus::Found { model, .. } => {
                    let text = write_model(model);
                    match &emit_model {
                        Some(path) => write_file(path, &text)?,
                        None => print!("{text}"),
                    }
                    Ok(ExitCode::SUCCESS)
                }
                SearchStatus::Exhausted => Ok(ExitCode::from(1)),
                SearchStatus::Aborted(_) => Ok(ExitCode::from(2)),
            }
        }
        Command::Verify {
            suites,
            seed,
            failures_dir,
            replay,
        } => {
            if let Some(path) = replay {
                let case = parse_replay(&read_file(&path)?)?;
                return Ok(match case.run() {
                    Ok(()) => {
                        println!("{} {}: passes", case.suite(), case.kind());
                        ExitCode::SUCCESS
                    }
                    Err(msg) => {
                        println!("{} {}: fails: {msg}", case.suite(), case.kind());
                        ExitCode::from(1)
                    }
                });
            }
            let selected: Vec<Suite> = if suites.iter().any(|s| s == "all") {
                Suite::ALL.to_vec()
            } else {
                suites.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
            };
            let options = VerifyOptions { seed };
            let mut ok = true;
            for suite in selected {
                let report = run_suite(suite, &options);
                print!("{report}");
                if let Some(dir) = &failures_dir {
                    std::fs::create_dir_all(dir).with_context(|| dir.display().to_string())?;
                    for fl in &report.failures {
                        let path = dir.join(format!("{}-{}.replay", suite, fl.index));
                        write_file(&path, &fl.case.to_replay())?;
                    }
                }
                ok &= report.passed();
            }
            Ok(verdict(ok))
        }
        Command::Pipeline {
            formula,
            width,
            height,
            val_file,
            k,
        } => {
            let input = PipelineInput {
                psi: load_formula(&formula)?,
                width,
                height,
                valuation: load_valuation(val_file.as_ref())?,
                k,
            };
            let report = run_pipeline(&input)?;
            println!("{report}");
            Ok(verdict(report.passed()))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
