//! `kep`: command line front end over the text formats of `kep-core`.
//!
//! Every subcommand prints a plain report on stdout and maps failures onto
//! the exit codes 1 (unreadable input), 2 (violated precondition) and
//! 3 (a bounded search or equality test was inconclusive).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use kep_core::action;
use kep_core::bisection::Bisection;
use kep_core::error::Error;
use kep_core::full_group::{self, GenWord};
use kep_core::graph::Truth;
use kep_core::groupoid::{Groupoid, Mode};
use kep_core::matrix::MatrixPair;
use kep_core::path::{InfPath, Path};
use kep_core::report;
use kep_core::verify::{self, Exec};

const GRAMMAR: &str = "\
Input formats:
  pair file      N: <n>            one line per key, rows separated by
                 A: 2 3; 3 2       `;` and entries by whitespace; blank
                 B: 1 2; 2 1       lines and `#` comments are skipped.
                                   Requires A >= 0 without zero rows and
                                   B_ij = 0 wherever A_ij = 0.
  edge           i.j.r             vertices 1-based, 0 <= r < A_ij
  path           e1-e2-...         consecutive edges must compose;
                 v:<v>             the empty path at vertex v
  point          <prefix>|<cycle>  eventually periodic infinite path,
                                   e.g. v:1|1.1.0 or 1.1.1-1.1.0|1.1.1
  triple         (<mu>; <m>; <nu>) the compact open set Z(mu, m, nu)
  bisection      t1 + t2 + ...     `empty` for no pieces
  -U argument    a bisection, or a file holding one bisection per line;
                 a file with several lines denotes their product, read
                 left to right with the last line acting first.
                 Lines starting with `#` are ignored.
  word           one token per line, the last line acting first:
                   T <bisection>          transposition hat(V)
                   G <path> <m>           torsion generator on Z(gamma)
                   C <bisection> | <tok>  conjugate of tok by hat(V)
                   SFT <bisection>        element of the shift groupoid

Exit codes: 0 success, 1 malformed input, 2 precondition violated,
3 search bound exhausted or equality undecided.";

#[derive(Parser)]
#[command(name = "kep", version, about = "Computations with groupoids of self-similar graph actions")]
#[command(after_long_help = GRAMMAR)]
struct Cli {
    /// Emit `key=value` records instead of prose.
    #[arg(long, global = true)]
    machine: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PairArg {
    /// Matrix pair file.
    pair: PathBuf,
}

#[derive(Args)]
struct ElementArg {
    /// Full bisection, inline or as a file.
    #[arg(short = 'U', value_name = "BISECTION|FILE")]
    element: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupoidMode {
    PseudoFree,
    Bounded,
}

impl From<GroupoidMode> for Mode {
    fn from(m: GroupoidMode) -> Mode {
        match m {
            GroupoidMode::PseudoFree => Mode::PseudoFree,
            GroupoidMode::Bounded => Mode::Bounded,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FactorMode {
    /// Transpositions for degree-zero elements with vanishing class.
    Kernel,
    /// Transpositions for any index-zero element of the kernel groupoid.
    H2g,
}

#[derive(Subcommand)]
enum Command {
    /// Graph and action properties of a pair.
    Props {
        #[command(flatten)]
        pair: PairArg,
        /// Search depth for the Hausdorff certificate.
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Homology groups of the groupoid.
    Homology {
        #[command(flatten)]
        pair: PairArg,
    },
    /// Act by m on a finite path or an eventually periodic point.
    Act {
        #[command(flatten)]
        pair: PairArg,
        #[arg(short = 'm', allow_hyphen_values = true)]
        m: String,
        #[arg(short = 'p', value_name = "PATH|POINT")]
        path: String,
    },
    /// Image of a point under a bisection.
    Apply {
        #[command(flatten)]
        pair: PairArg,
        /// Bisection, inline or as a file; it need not be full.
        #[arg(short = 'U', value_name = "BISECTION|FILE")]
        element: String,
        #[arg(short = 'x', value_name = "POINT")]
        point: String,
    },
    /// Index of a full bisection in H1.
    Index {
        #[command(flatten)]
        pair: PairArg,
        #[command(flatten)]
        element: ElementArg,
    },
    /// Factor an index-zero element into transpositions.
    Factor {
        #[command(flatten)]
        pair: PairArg,
        #[command(flatten)]
        element: ElementArg,
        #[arg(long, value_enum, default_value = "h2g")]
        mode: FactorMode,
        /// Largest level tried when solving for a rho^1 preimage.
        #[arg(long, default_value_t = 16)]
        max_level: usize,
        /// Depth of the cylinder check applied to the result.
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Rewrite a full-group element over the finite generating set.
    Rewrite {
        #[command(flatten)]
        pair: PairArg,
        #[command(flatten)]
        element: ElementArg,
        #[arg(long, value_enum, default_value = "pseudo-free")]
        mode: GroupoidMode,
        /// Depth of the cylinder check applied to the result.
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Properties, homology and the abelianization sequence data.
    AhReport {
        #[command(flatten)]
        pair: PairArg,
        /// Search depth for the Hausdorff certificate.
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
}

/// A failure together with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: e.exit_code() as u8, message: e.to_string() }
    }
}

fn io_failure(what: &std::path::Path, e: std::io::Error) -> Failure {
    Failure { code: 1, message: format!("cannot read {}: {e}", what.display()) }
}

fn load_pair(arg: &PairArg) -> Result<MatrixPair, Failure> {
    let text = fs::read_to_string(&arg.pair).map_err(|e| io_failure(&arg.pair, e))?;
    Ok(text.parse()?)
}

/// Reads `-U`: an existing file is a product of its lines, anything else
/// is parsed as a bisection literal.
fn load_bisection(pair: &MatrixPair, arg: &str) -> Result<Bisection, Failure> {
    let file = std::path::Path::new(arg);
    let lines: Vec<String> = if file.is_file() {
        let text = fs::read_to_string(file).map_err(|e| io_failure(file, e))?;
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(String::from)
            .collect()
    } else {
        vec![arg.to_string()]
    };
    if lines.is_empty() {
        return Err(Error::Parse("no bisection given".into()).into());
    }
    let mut acc: Option<Bisection> = None;
    for line in &lines {
        let b: Bisection = line.parse()?;
        let b = Bisection::new(pair, b.into_pieces())?;
        acc = Some(match acc {
            None => b,
            Some(a) => Bisection::product(pair, &a, &b)?,
        });
    }
    Ok(acc.expect("at least one line"))
}

fn load_full(pair: &MatrixPair, arg: &str) -> Result<Bisection, Failure> {
    let b = load_bisection(pair, arg)?;
    Ok(Bisection::new_full(pair, b.into_pieces())?)
}

fn render_word(w: &GenWord, machine: bool) -> String {
    let mut out = String::new();
    if machine {
        out.push_str(&format!("length={}\n", w.len()));
        for t in &w.tokens {
            out.push_str(&format!("token={t}\n"));
        }
    } else {
        for t in &w.tokens {
            out.push_str(&format!("{t}\n"));
        }
    }
    out
}

/// Most cylinders the post-hoc check will sample.
const CYLINDER_BUDGET: u128 = 1 << 21;

fn cylinder_count(pair: &MatrixPair, depth: usize) -> Result<u128, Failure> {
    let too_many = || Failure::from(Error::BoundExceeded(CYLINDER_BUDGET as usize));
    // Also bounds the counting loop on graphs whose path count stays flat.
    if depth > 64 {
        return Err(too_many());
    }
    let total: u128 = pair.paths_ending_at(depth).iter().sum();
    if total > CYLINDER_BUDGET {
        return Err(too_many());
    }
    Ok(total)
}

/// Evaluates `w` and compares it with `u` germwise and on cylinder
/// sample points; the verdict goes to stderr.
fn check_word(g: &Groupoid, u: &Bisection, w: &GenWord, depth: usize) -> Result<(), Failure> {
    let pair = g.pair();
    cylinder_count(pair, depth)?;
    let v = w.evaluate(pair)?;
    let fails = |message: String| Failure { code: 2, message };
    match full_group::fg_equals(g, u, &v)? {
        Truth::Yes => {}
        Truth::No => return Err(fails("emitted word does not reproduce the input".into())),
        Truth::Unknown => {
            return Err(Failure {
                code: 3,
                message: "equality of the word with the input is undecided".into(),
            })
        }
    }
    let agreement = verify::agree_on_cylinders(pair, u, &v, depth, Exec::Parallel)?;
    if !agreement.agrees() {
        return Err(fails(format!("word disagrees with the input at depth {depth}")));
    }
    eprintln!(
        "verified: {} tokens, germ equality and {} sample points at depth {depth}",
        w.len(),
        agreement.points
    );
    Ok(())
}

fn run(cli: Cli) -> Result<String, Failure> {
    let machine = cli.machine;
    match cli.command {
        Command::Props { pair, depth } => {
            Ok(report::properties(&load_pair(&pair)?, depth).render(machine))
        }
        Command::Homology { pair } => Ok(report::homology(&load_pair(&pair)?).render(machine)),
        Command::AhReport { pair, depth } => {
            Ok(report::ah(&load_pair(&pair)?, depth).render(machine))
        }
        Command::Act { pair, m, path } => {
            let pair = load_pair(&pair)?;
            let m: BigInt = m
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("`{m}` is not an integer")))?;
            if path.contains('|') {
                let x: InfPath = path.parse()?;
                x.prefix().validate(&pair)?;
                x.cycle().validate(&pair)?;
                let y = action::act_inf(&pair, &m, &x, None)?;
                Ok(if machine { format!("image={y}\n") } else { format!("{y}\n") })
            } else {
                let mu: Path = path.parse()?;
                mu.validate(&pair)?;
                let (image, phi) = action::act_path(&pair, &m, &mu);
                Ok(if machine {
                    format!("image={image}\nphi={phi}\n")
                } else {
                    format!("{image} ; phi = {phi}\n")
                })
            }
        }
        Command::Apply { pair, element, point } => {
            let pair = load_pair(&pair)?;
            let u = load_bisection(&pair, &element)?;
            let x: InfPath = point.parse()?;
            x.prefix().validate(&pair)?;
            x.cycle().validate(&pair)?;
            let y = u.apply(&pair, &x)?;
            Ok(if machine { format!("image={y}\n") } else { format!("{y}\n") })
        }
        Command::Index { pair, element } => {
            let pair = load_pair(&pair)?;
            let u = load_full(&pair, &element.element)?;
            Ok(report::index(&pair, &u)?.render(machine))
        }
        Command::Factor { pair, element, mode, max_level, depth } => {
            let pair = load_pair(&pair)?;
            let u = load_full(&pair, &element.element)?;
            let g = Groupoid::with_mode(pair, Mode::PseudoFree)?;
            let w = match mode {
                FactorMode::Kernel => full_group::kernel_factor(&g, &u)?,
                FactorMode::H2g => full_group::h_to_g_factor(&g, &u, max_level)?,
            };
            check_word(&g, &u, &w, depth)?;
            Ok(render_word(&w, machine))
        }
        Command::Rewrite { pair, element, mode, depth } => {
            let pair = load_pair(&pair)?;
            let u = load_full(&pair, &element.element)?;
            let g = Groupoid::with_mode(pair, mode.into())?;
            let w = full_group::rewrite_generators(&g, &u)?;
            check_word(&g, &u, &w, depth)?;
            Ok(render_word(&w, machine))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
