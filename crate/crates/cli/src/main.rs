use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pca_core::suite::{self, Config, Model};

mod session;

use session::{Session, SessionError};

#[derive(Parser)]
#[command(
    name = "pca",
    version,
    about = "Partial combinatory algebras, oracles and sampled law checks"
)]
struct Cli {
    #[arg(long, value_enum, default_value = "term", global = true)]
    model: ModelArg,
    #[arg(long, default_value_t = 100_000, global = true)]
    fuel: u64,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[arg(long, default_value_t = 200, global = true)]
    samples: usize,
    /// Oracle table to adjoin; repeat to stack, innermost first.
    #[arg(long = "oracle", global = true)]
    oracles: Vec<PathBuf>,
    /// Use the plain K/S term model without native primitives.
    #[arg(long, global = true)]
    pure_sk: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Term,
    Numeric,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a term in the current model.
    Eval {
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        term: Vec<String>,
    },
    /// Print the dialogue of `a ·^f b` against the top oracle.
    Trace { a: String, b: String },
    /// Run a named suite: axioms, oracle, morphisms, assemblies, density or all.
    Suite { name: String },
    /// Check `f ≤ g` with a witness evaluated in the model extended by `g`.
    Leq {
        f: PathBuf,
        g: PathBuf,
        witness: String,
    },
    /// Read commands from standard input.
    Repl,
}

const USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut session = Session::new(
        matches!(cli.model, ModelArg::Numeric),
        cli.pure_sk,
        cli.fuel,
    );
    for path in &cli.oracles {
        if let Err(e) = session.push(path) {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE);
        }
    }
    let code = match &cli.command {
        Command::Eval { term } => eval(&session, &term.join(" ")),
        Command::Trace { a, b } => trace(&session, a, b),
        Command::Suite { name } => run_suite(&cli, name),
        Command::Leq { f, g, witness } => leq(&session, &cli, f, g, witness),
        Command::Repl => repl(&mut session, &cli),
    };
    ExitCode::from(code)
}

fn fail(e: impl std::fmt::Display) -> u8 {
    eprintln!("error: {e}");
    USAGE
}

fn eval(session: &Session, src: &str) -> u8 {
    match session.show(src) {
        Ok((defined, shown)) => {
            println!("{shown}");
            u8::from(!defined)
        }
        Err(e) => fail(e),
    }
}

fn trace(session: &Session, a: &str, b: &str) -> u8 {
    match session.trace(a, b) {
        Ok(t) => {
            print!("{t}");
            0
        }
        Err(e) => fail(e),
    }
}

fn run_suite(cli: &Cli, name: &str) -> u8 {
    let model = match cli.model {
        ModelArg::Term => Model::Term,
        ModelArg::Numeric => Model::Numeric,
    };
    let cfg = Config {
        model,
        seed: cli.seed,
        samples: cli.samples,
        fuel: cli.fuel,
    };
    match suite::run(name, &cfg) {
        Ok(run) => {
            print!("{run}");
            u8::from(!run.passed())
        }
        Err(e) => fail(e),
    }
}

fn leq(session: &Session, cli: &Cli, f: &PathBuf, g: &PathBuf, witness: &str) -> u8 {
    match session.leq(f, g, witness, cli.samples, cli.seed) {
        Ok(report) => {
            println!("{report}");
            u8::from(!report.passed())
        }
        Err(e) => fail(e),
    }
}

const HELP: &str = "\
commands:
  <term>                 evaluate
  eval <term>            evaluate
  let <name> = <term>    define a name
  trace <a> ; <b>        dialogue of a .f b against the top oracle
  push <path>            adjoin an oracle table
  pop                    drop the top oracle
  leq <f> <g> <witness>  check f <= g
  suite <name>           run a suite
  fuel <n>               set the budget
  help | quit";

/// Runs commands until end of input; the exit code is that of the last failing command.
fn repl(session: &mut Session, cli: &Cli) -> u8 {
    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let mut status = 0;
    loop {
        if interactive {
            print!("{}> ", session.model().name());
            let _ = io::stdout().flush();
        }
        let mut line = String::new();
        match stdin.lock().read_line(&mut line) {
            Ok(0) => break,
            Ok(_) => {}
            Err(e) => return fail(e),
        }
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (cmd, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let code = match cmd {
            "quit" | "exit" => break,
            "help" => {
                println!("{HELP}");
                0
            }
            "eval" => eval(session, rest),
            "let" => match rest.split_once('=') {
                Some((name, src)) => report(session.define(name.trim(), src.trim())),
                None => fail("expected `let <name> = <term>`"),
            },
            "trace" => match rest.split_once(';') {
                Some((a, b)) => trace(session, a.trim(), b.trim()),
                None => fail("expected `trace <a> ; <b>`"),
            },
            "push" => report(session.push(rest.as_ref())),
            "pop" => report(session.pop()),
            "leq" => {
                let parts: Vec<&str> = rest.splitn(3, char::is_whitespace).collect();
                match parts[..] {
                    [f, g, w] => leq(session, cli, &f.into(), &g.into(), w.trim()),
                    _ => fail("expected `leq <f> <g> <witness>`"),
                }
            }
            "suite" => run_suite(cli, rest),
            "fuel" => match rest.parse() {
                Ok(n) => {
                    session.fuel = n;
                    0
                }
                Err(e) => fail(e),
            },
            _ => eval(session, line),
        };
        if code != 0 {
            status = code;
        }
    }
    status
}

fn report(r: Result<String, SessionError>) -> u8 {
    match r {
        Ok(s) => {
            println!("{s}");
            0
        }
        Err(e) => fail(e),
    }
}
