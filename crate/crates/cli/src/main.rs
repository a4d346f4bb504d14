//! `sakit`: command-line front end for set automata.
//!
//! Verdicts go to stdout as one token per line, optionally followed by a
//! payload. Exit codes: 0 positive, 1 negative, 2 usage or parse error,
//! 3 step budget exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sakit::automata::text::{parse_nfa, write_fst};
use sakit::cone::{build_extractor, member_via_protocols};
use sakit::emptiness::{nrr_decide, sa_emptiness, NrrVerdict, SaEmptiness};
use sakit::gallery::{
    build_sacvp_dsa, build_sasat_nsa, cvp_to_sacvp, encode_sasat, membership_to_emptiness, parse_dimacs,
    tm_to_unary_dsa, CvpProgram, TmDescription,
};
use sakit::normalform::{normalize_requirements, remove_eps_loops, to_anf};
use sakit::protocol::{check_correct, Protocol, Verdict};
use sakit::sa::text::{format_rule, parse_sa, write_sa};
use sakit::sa::{extract_run_protocol, replay_certificate, run_dsa, run_nsa_bounded, DsaOutcome, NsaOutcome, Trace};
use sakit::{Alphabet, SetAutomaton, Symbol};

const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Parser)]
#[command(
    name = "sakit",
    version,
    about = "Set automata: simulation, emptiness, normal forms, reductions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an automaton on a word.
    Run {
        sa: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Step budget; defaults to $SAKIT_BUDGET or 1000000.
        #[arg(long)]
        budget: Option<usize>,
        /// Print the executed rules and the run's protocol.
        #[arg(long)]
        trace: bool,
    },
    /// Decide membership of a word.
    Member {
        sa: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, value_enum, default_value_t = Method::Protocol)]
        method: Method,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Decide emptiness; exits 0 iff the language is empty.
    Empty { sa: PathBuf },
    /// Decide whether an NFA over the protocol alphabet accepts a correct protocol.
    Nrr { nfa: PathBuf },
    /// Protocol utilities.
    Protocol {
        #[command(subcommand)]
        command: ProtocolCommand,
    },
    /// Write the extractor transducer of an automaton.
    Extract {
        sa: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert an automaton to a normal form.
    Normalize {
        sa: PathBuf,
        #[arg(long, value_enum)]
        form: Form,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build reduction instances and decide them.
    Reduce {
        #[command(subcommand)]
        command: ReduceCommand,
    },
}

#[derive(Subcommand)]
enum ProtocolCommand {
    /// Check correctness of a protocol string such as `#a#in#a#test+`.
    Check {
        #[arg(allow_hyphen_values = true)]
        protocol: String,
        /// Query-word alphabet, space separated; inferred from the string when absent.
        #[arg(long)]
        gamma: Option<String>,
    },
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Straight-line boolean program to a word for the CVP automaton.
    Cvp {
        program: PathBuf,
        /// Where to write the automaton.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// DIMACS 3-CNF to a word for the SAT automaton.
    #[command(name = "3sat")]
    ThreeSat {
        cnf: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Turing machine to a unary-work-tape automaton run on the empty word.
    Tm {
        tm: PathBuf,
        #[arg(long)]
        cells: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Membership to emptiness: the result is empty iff the word is accepted.
    Member {
        sa: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Direct,
    Protocol,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Req,
    Anf,
    Noeps,
}

enum Failure {
    Input(String),
    Budget(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            println!("BUDGET");
            eprintln!("{msg}");
            ExitCode::from(3)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_sa(path: &Path) -> Result<SetAutomaton, Failure> {
    parse_sa(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn budget(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("SAKIT_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("SAKIT_BUDGET is not a number: `{v}`"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn verdict(accept: bool) -> bool {
    println!("{}", if accept { "ACCEPT" } else { "REJECT" });
    accept
}

fn print_trace(sa: &SetAutomaton, trace: &Trace) -> Result<(), Failure> {
    for (i, s) in trace.steps.iter().enumerate() {
        let branch = match s.test_result {
            Some(true) => " [+]",
            Some(false) => " [-]",
            None => "",
        };
        println!("{:>4}  {}{branch}", i + 1, format_rule(sa, sa.rule(s.rule)));
    }
    println!("protocol: {}", extract_run_protocol(trace)?);
    Ok(())
}

/// Direct simulation: exact for deterministic automata, a bounded search
/// otherwise.
fn run_direct(sa: &SetAutomaton, w: &[Symbol], budget: usize, trace: bool) -> Outcome {
    if sa.is_deterministic() {
        let run = run_dsa(sa, w, budget)?;
        if run.outcome == DsaOutcome::BudgetExceeded {
            return Err(Failure::Budget(format!("no verdict within {budget} steps")));
        }
        let accepted = verdict(run.outcome == DsaOutcome::Accept);
        if trace {
            print_trace(sa, &run.trace)?;
        }
        return Ok(accepted);
    }
    let search = run_nsa_bounded(sa, w, budget)?;
    match search.outcome {
        NsaOutcome::AcceptFound(cert) => {
            verdict(true);
            if trace {
                print_trace(sa, &replay_certificate(sa, w, &cert)?)?;
            }
            Ok(true)
        }
        NsaOutcome::NotFoundWithinBudget if search.exhaustive => Ok(verdict(false)),
        NsaOutcome::NotFoundWithinBudget => Err(Failure::Budget(format!(
            "no accepting run of at most {budget} steps; search incomplete"
        ))),
    }
}

fn word(alphabet: &Alphabet, text: &str) -> Result<Vec<Symbol>, Failure> {
    alphabet
        .parse_word(text)
        .map_err(|e| Failure::Input(format!("word `{text}`: {e}")))
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Run {
            sa,
            word: text,
            budget: b,
            trace,
        } => {
            let sa = load_sa(&sa)?;
            let w = word(sa.input_alphabet(), &text)?;
            run_direct(&sa, &w, budget(b)?, trace)
        }
        Command::Member {
            sa,
            word: text,
            method,
            budget: b,
        } => {
            let sa = load_sa(&sa)?;
            let w = word(sa.input_alphabet(), &text)?;
            match method {
                Method::Direct => run_direct(&sa, &w, budget(b)?, false),
                Method::Protocol => Ok(verdict(member_via_protocols(&sa, &w)?)),
            }
        }
        Command::Empty { sa } => match sa_emptiness(&load_sa(&sa)?)? {
            SaEmptiness::Empty => {
                println!("EMPTY");
                Ok(true)
            }
            SaEmptiness::Nonempty { decoded, .. } => {
                println!("NONEMPTY {decoded}");
                Ok(false)
            }
        },
        Command::Nrr { nfa } => {
            let a = parse_nfa(&read(&nfa)?).map_err(|e| Failure::Input(format!("{}: {e}", nfa.display())))?;
            match nrr_decide(&a)? {
                NrrVerdict::Nonempty(w) => {
                    println!("NONEMPTY {}", w.protocol);
                    Ok(true)
                }
                NrrVerdict::Empty => {
                    println!("EMPTY");
                    Ok(false)
                }
            }
        }
        Command::Protocol {
            command: ProtocolCommand::Check { protocol, gamma },
        } => {
            let gamma = match gamma {
                Some(g) => Alphabet::parse_list(&g)?,
                None => infer_gamma(&protocol)?,
            };
            let p = Protocol::parse(&gamma, &protocol)?;
            match check_correct(&p) {
                Verdict::Correct => {
                    println!("CORRECT");
                    Ok(true)
                }
                Verdict::IncorrectAt(k) => {
                    println!("INCORRECT {k}");
                    Ok(false)
                }
            }
        }
        Command::Extract { sa, output } => {
            let normalized = normalize_requirements(&load_sa(&sa)?);
            let t = build_extractor(&normalized.sa)?;
            emit(output.as_deref(), &write_fst(&t))?;
            Ok(true)
        }
        Command::Normalize { sa, form, output } => {
            let sa = load_sa(&sa)?;
            let out = match form {
                Form::Req => normalize_requirements(&sa).sa,
                Form::Anf => to_anf(&sa),
                Form::Noeps => remove_eps_loops(&sa)?,
            };
            emit(output.as_deref(), &write_sa(&out))?;
            Ok(true)
        }
        Command::Reduce { command } => reduce(command),
    }
}

fn reduce(command: ReduceCommand) -> Outcome {
    match command {
        ReduceCommand::Cvp { program, output } => {
            let p = CvpProgram::parse(&read(&program)?)?;
            let sa = build_sacvp_dsa();
            let w = cvp_to_sacvp(&p);
            let accepted = run_dsa(&sa, &w, usize::MAX)?.outcome == DsaOutcome::Accept;
            finish_word(&sa, &w, accepted, output.as_deref())
        }
        ReduceCommand::ThreeSat { cnf, output } => {
            let inst = parse_dimacs(&read(&cnf)?)?;
            let sa = build_sasat_nsa();
            let w = encode_sasat(&inst.list, &inst.cnf);
            let accepted = member_via_protocols(&sa, &w)?;
            finish_word(&sa, &w, accepted, output.as_deref())
        }
        ReduceCommand::Tm { tm, cells, output } => {
            let tm = TmDescription::parse(&read(&tm)?)?;
            let sa = tm_to_unary_dsa(&tm, cells)?;
            let run = run_dsa(&sa, &[], usize::MAX)?;
            let accepted = verdict(run.outcome == DsaOutcome::Accept);
            println!("states: {}", sa.num_states());
            if let Some(p) = output {
                emit(Some(&p), &write_sa(&sa))?;
            }
            Ok(accepted)
        }
        ReduceCommand::Member { sa, word: text, output } => {
            let sa = load_sa(&sa)?;
            let w = word(sa.input_alphabet(), &text)?;
            let m = membership_to_emptiness(&sa, &w)?;
            if let Some(p) = &output {
                emit(Some(p), &write_sa(&m))?;
            }
            match sa_emptiness(&m)? {
                SaEmptiness::Empty => {
                    println!("EMPTY");
                    Ok(true)
                }
                SaEmptiness::Nonempty { decoded, .. } => {
                    println!("NONEMPTY {decoded}");
                    Ok(false)
                }
            }
        }
    }
}

fn finish_word(sa: &SetAutomaton, w: &[Symbol], accepted: bool, output: Option<&Path>) -> Outcome {
    verdict(accepted);
    println!("word: {}", sa.input_alphabet().format_word(w));
    if let Some(p) = output {
        emit(Some(p), &write_sa(sa))?;
    }
    Ok(accepted)
}

/// Query-word symbols are the characters between delimiters at word
/// positions; `{a, b}` when there are none.
fn infer_gamma(text: &str) -> Result<Alphabet, Failure> {
    let mut chars: Vec<String> = text
        .split('#')
        .skip(1)
        .step_by(2)
        .flat_map(|w| w.chars().filter(|&c| c != '-' && c != '.'))
        .map(String::from)
        .collect();
    chars.sort();
    chars.dedup();
    if chars.is_empty() {
        chars = vec!["a".into(), "b".into()];
    }
    Ok(Alphabet::new(chars)?)
}
