mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pdaverify::closure::{dyck_closure, shortest_reducible_path};
use pdaverify::lang::{parse_program, pretty_print};
use pdaverify::protocol::{
    build_fsa, encode_tape, fsa_from_tape, parse_fsa, parse_tape, CancelTable, Fsa, Protocol, Tape,
};
use pdaverify::sim::{simulate, StatsRecord, Verdict};
use pdaverify::verifier::{attack_path, gen_pathfinder, gen_verifier};

use report::{AttackWitness, Report, Stats};

const SECURE: u8 = 0;
const ERROR: u8 = 1;
const INSECURE: u8 = 2;
const DISAGREE: u8 = 3;

/// Decide ping-pong protocol security with a pushdown simulator.
#[derive(Parser, Debug)]
#[command(name = "pdaverify", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Decide whether a protocol is secure. Exit 0 secure, 2 insecure,
    /// 1 on input errors, 3 if the two methods disagree.
    Verify(VerifyArgs),
    /// Run a pushdown program on a tape. Exit 0 reject, 2 accept.
    Run(RunArgs),
    /// Build the automaton of a protocol and write it as an edge list.
    CompileFsa {
        #[arg(long)]
        protocol: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Lay an edge list out as a verifier tape.
    EncodeTape {
        #[arg(long)]
        fsa: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the source of a generated program.
    EmitProgram {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Cancellation pairs `earlier later`, one per line.
        #[arg(long)]
        identities: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[group(id = "input", required = true, multiple = false)]
struct Input {
    #[arg(long, group = "input")]
    protocol: Option<PathBuf>,
    #[arg(long, group = "input")]
    fsa: Option<PathBuf>,
    #[arg(long, group = "input")]
    tape: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    method: Method,
    /// Cancellation pairs `earlier later`, one per line.
    #[arg(long)]
    identities: Option<PathBuf>,
    /// Print an attack path and its cancellation when insecure.
    #[arg(long)]
    witness: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    program: PathBuf,
    #[arg(long)]
    tape: PathBuf,
    #[arg(long)]
    stats: bool,
    /// Print one accepting computation.
    #[arg(long)]
    witness: bool,
    /// Print `{configs, steps, summaries, accepted}` as JSON instead.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Sim,
    Closure,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Pathfinder,
    Verifier,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_out(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cancel_table(identities: Option<&Path>) -> Result<CancelTable> {
    match identities {
        Some(p) => CancelTable::parse(&read(p)?).with_context(|| format!("{}", p.display())),
        None => Ok(CancelTable::default()),
    }
}

/// The automaton and the tape it is encoded as.
fn load_input(input: &Input) -> Result<(Fsa, Tape)> {
    if let Some(p) = &input.protocol {
        let proto = Protocol::parse(&read(p)?).with_context(|| format!("{}", p.display()))?;
        let f = build_fsa(&proto);
        let t = encode_tape(&f)?;
        Ok((f, t))
    } else if let Some(p) = &input.fsa {
        let f = parse_fsa(&read(p)?).with_context(|| format!("{}", p.display()))?;
        let t = encode_tape(&f)?;
        // the tape renames nodes; keep the closure on the same names
        Ok((f.canonical_names(), t))
    } else if let Some(p) = &input.tape {
        let t = parse_tape(&read(p)?).with_context(|| format!("{}", p.display()))?;
        let f = fsa_from_tape(&t).with_context(|| format!("{}", p.display()))?;
        Ok((f, t))
    } else {
        bail!("one of --protocol, --fsa or --tape is required")
    }
}

fn verify(args: &VerifyArgs) -> Result<u8> {
    let ct = cancel_table(args.identities.as_deref())?;
    let (f, tape) = load_input(&args.input)?;
    let run_sim = args.method != Method::Closure;
    let run_closure = args.method != Method::Sim;
    let verifier = gen_verifier(&ct);

    let (sim, closure): (Option<Verdict>, Option<_>) = std::thread::scope(|s| {
        let sim = run_sim.then(|| s.spawn(|| simulate(&verifier, &tape, args.witness)));
        let closure = run_closure.then(|| dyck_closure(&f, &ct));
        (
            sim.map(|h| h.join().expect("simulator thread panicked")),
            closure,
        )
    });

    let sim_says = sim.as_ref().map(|v| v.accepted);
    let closure_says = closure
        .as_ref()
        .map(|r| r.contains(f.source.as_str(), f.target.as_str()));
    let agree = match (sim_says, closure_says) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    let insecure = sim_says.or(closure_says).unwrap_or(false);

    let witness = if args.witness && insecure {
        let path = match sim.as_ref().and_then(|v| v.witness.as_ref()) {
            Some(w) => Some(attack_path(&tape, w)),
            None => shortest_reducible_path(&f, &ct),
        };
        path.map(|p| AttackWitness::new(&p, &ct))
    } else {
        None
    };
    let report = Report {
        verdict: if insecure { "insecure" } else { "secure" }.into(),
        method: format!("{:?}", args.method).to_lowercase(),
        methods_agree: agree,
        stats: Stats {
            sim: sim.as_ref().map(|v| v.stats),
            closure_pairs: closure.as_ref().map(|r| r.len()),
        },
        witness,
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.to_text());
    }
    Ok(match agree {
        Some(false) => {
            eprintln!(
                "error: simulator says {}, closure says {}",
                verdict_word(sim_says),
                verdict_word(closure_says)
            );
            DISAGREE
        }
        _ if insecure => INSECURE,
        _ => SECURE,
    })
}

fn verdict_word(accepted: Option<bool>) -> &'static str {
    match accepted {
        Some(true) => "insecure",
        _ => "secure",
    }
}

fn run(args: &RunArgs) -> Result<u8> {
    let program = parse_program(&read(&args.program)?)
        .with_context(|| format!("{}", args.program.display()))?;
    let tape =
        parse_tape(&read(&args.tape)?).with_context(|| format!("{}", args.tape.display()))?;
    let v = simulate(&program, &tape, args.witness);
    if args.json {
        println!("{}", serde_json::to_string(&StatsRecord::from(&v))?);
        return Ok(if v.accepted { INSECURE } else { SECURE });
    }
    println!("{}", if v.accepted { "accept" } else { "reject" });
    if args.stats {
        println!(
            "configs: {}\nsteps: {}\nsummaries: {}",
            v.stats.configs, v.stats.steps, v.stats.summaries
        );
    }
    if let Some(w) = &v.witness {
        println!("witness:");
        for s in &w.trace {
            let heads: Vec<String> = s.heads.iter().map(|h| h.to_string()).collect();
            let mut line = format!("  pp {} heads {}", s.pp, heads.join(","));
            match &s.action {
                pdaverify::sim::StackAction::Push(x) => line += &format!(" push {x}"),
                pdaverify::sim::StackAction::Pop(x) => line += &format!(" pop {x}"),
                pdaverify::sim::StackAction::None => {}
            }
            if let Some(c) = s.choice {
                line += &format!(" choice {}", format!("{c:?}").to_lowercase());
            }
            println!("{line}");
        }
    }
    Ok(if v.accepted { INSECURE } else { SECURE })
}

fn execute(cmd: &Cmd) -> Result<u8> {
    match cmd {
        Cmd::Verify(args) => verify(args),
        Cmd::Run(args) => run(args),
        Cmd::CompileFsa { protocol, output } => {
            let p = Protocol::parse(&read(protocol)?)
                .with_context(|| format!("{}", protocol.display()))?;
            write_out(output.as_deref(), &build_fsa(&p).to_edge_list())?;
            Ok(SECURE)
        }
        Cmd::EncodeTape { fsa, output } => {
            let f = parse_fsa(&read(fsa)?).with_context(|| format!("{}", fsa.display()))?;
            write_out(output.as_deref(), &format!("{}\n", encode_tape(&f)?))?;
            Ok(SECURE)
        }
        Cmd::EmitProgram {
            kind,
            identities,
            output,
        } => {
            let program = match kind {
                Kind::Pathfinder => gen_pathfinder(),
                Kind::Verifier => gen_verifier(&cancel_table(identities.as_deref())?),
            };
            write_out(output.as_deref(), &pretty_print(&program))?;
            Ok(SECURE)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { ERROR } else { SECURE });
        }
    };
    match execute(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR)
        }
    }
}
