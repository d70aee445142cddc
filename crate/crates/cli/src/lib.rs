//! Command-line front end. [`run`] does all the work so it can be tested
//! without spawning a process.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mubar_core::diagram::{close_braid, parse_braid, parse_gauss, BraidWord, CrossingId, Diagram};
use mubar_core::freegroup::component_letter;
use mubar_core::milnor::{self, DeltaConvention, MuEntry, MuTable};
use mubar_core::moves::{self, MoveClass};
use mubar_core::skein::{self, MarkedBraid, SkeinCheck};
use mubar_core::wirtinger::presentation;
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "mubar", version, about = "Milnor mu and mu-bar invariants of virtual and welded links")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full table: mu, delta, mubar and flags for every (J, target).
    Mu(Common),
    /// Only the entries with distinct indices that avoid the target.
    Mubar(Common),
    /// Linking numbers link(over, under) for every ordered pair.
    Linking(Common),
    /// Wirtinger presentation and longitudes.
    Present(Common),
    /// Skein relations at one mark, or at every classical crossing.
    SkeinCheck(Common),
    /// Random moves; prints a replayable log and compares mubar tables.
    Fuzz(Common),
    /// Re-applies a move log and prints the resulting Gauss code.
    Replay(Common),
    /// Drops over/under and sign information.
    Flatten(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Input file; standard input when absent or `-`.
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Gauss)]
    pub mode: Mode,
    /// Strand count, braid mode only.
    #[arg(long)]
    pub strands: Option<usize>,
    /// Truncation degree n; sequences have length below n. Default: components + 1.
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t = Delta::Subsequences)]
    pub delta: Delta,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 25)]
    pub steps: usize,
    #[arg(long, value_parser = parse_class, default_value = "isotopy")]
    pub class: MoveClass,
    /// Braid mode: 0-based letter index. Gauss mode: crossing id.
    #[arg(long)]
    pub mark: Option<usize>,
    /// Move log: written by `fuzz`, read by `replay`.
    #[arg(long)]
    pub log: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Braid,
    Gauss,
    Longitudes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Records,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Delta {
    Subsequences,
    Cyclic,
}

fn parse_class(s: &str) -> Result<MoveClass, String> {
    s.parse()
}

/// One table row in `records` format, serialized as a JSON line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub target: String,
    pub sequence: Vec<String>,
    pub mu: serde_json::Number,
    pub delta: serde_json::Number,
    pub mubar: serde_json::Number,
    pub flags: Vec<String>,
}

impl Record {
    pub fn from_entry(e: &MuEntry) -> Record {
        let num = |v: &num_bigint::BigInt| v.to_string().parse().expect("integers are JSON numbers");
        Record {
            target: component_letter(e.target).to_string(),
            sequence: e.sequence.iter().map(|&j| component_letter(j).to_string()).collect(),
            mu: num(&e.mu),
            delta: num(&e.delta),
            mubar: num(&e.mubar),
            flags: e.flags().into_iter().map(String::from).collect(),
        }
    }
}

#[derive(Serialize)]
struct LinkRecord {
    over: String,
    under: String,
    link: i64,
}

#[derive(Serialize)]
struct SkeinRecord {
    status: &'static str,
    family: &'static str,
    target: String,
    partner: String,
    sequence: Vec<String>,
    lhs: serde_json::Number,
    rhs: serde_json::Number,
}

/// What a run produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String),
    Computation(String),
}

type Res<T> = Result<T, Failure>;

fn input_err(e: impl ToString) -> Failure {
    Failure::Input(e.to_string())
}

fn comp_err(e: impl ToString) -> Failure {
    Failure::Computation(e.to_string())
}

enum Source {
    Braid(BraidWord),
    Gauss(Diagram),
    Longitudes(Vec<mubar_core::freegroup::GroupWord>),
}

impl Source {
    fn diagram(&self) -> Option<Diagram> {
        match self {
            Source::Braid(b) => Some(close_braid(b)),
            Source::Gauss(d) => Some(d.clone()),
            Source::Longitudes(_) => None,
        }
    }

    fn components(&self) -> usize {
        match self {
            Source::Braid(b) => b.components().len(),
            Source::Gauss(d) => d.component_count(),
            Source::Longitudes(w) => w.len(),
        }
    }
}

fn need_diagram(src: &Source, what: &str) -> Res<Diagram> {
    src.diagram().ok_or_else(|| Failure::Input(format!("`{what}` needs a braid or Gauss diagram, not longitudes")))
}

fn read_source(c: &Common, text: &str) -> Res<Source> {
    match c.mode {
        Mode::Braid => {
            let strands = c.strands.ok_or_else(|| input_err("--mode braid needs --strands"))?;
            Ok(Source::Braid(parse_braid(text.trim(), strands).map_err(input_err)?))
        }
        Mode::Gauss => Ok(Source::Gauss(parse_gauss(text.trim()).map_err(input_err)?)),
        Mode::Longitudes => Ok(Source::Longitudes(milnor::parse_longitudes(text).map_err(input_err)?)),
    }
}

fn cap(c: &Common, src: &Source) -> Res<usize> {
    let n = c.cap.unwrap_or((src.components() + 1).max(2));
    if n < 2 {
        return Err(input_err(format!("--cap must be at least 2, got {n}")));
    }
    Ok(n)
}

fn convention(c: &Common) -> DeltaConvention {
    match c.delta {
        Delta::Subsequences => DeltaConvention::Subsequences,
        Delta::Cyclic => DeltaConvention::CyclicSubsequences,
    }
}

fn table(c: &Common, src: &Source) -> Res<MuTable> {
    let n = cap(c, src)?;
    match src {
        Source::Longitudes(w) => milnor::mu_from_longitudes_with(w, n, convention(c)).map_err(comp_err),
        _ => milnor::mu_table_with(&src.diagram().expect("diagram source"), n, convention(c)).map_err(comp_err),
    }
}

fn json_line(out: &mut String, v: &impl Serialize) {
    out.push_str(&serde_json::to_string(v).expect("records serialize"));
    out.push('\n');
}

fn render_entries<'a>(c: &Common, t: &MuTable, entries: impl Iterator<Item = &'a MuEntry>) -> String {
    let mut out = String::new();
    match c.format {
        Format::Records => {
            for e in entries {
                json_line(&mut out, &Record::from_entry(e));
            }
        }
        Format::Text => {
            let entries: Vec<&MuEntry> = entries.collect();
            if entries.len() == t.entries().len() {
                out = t.render_text();
            } else {
                writeln!(out, "J  i  mubar").unwrap();
                for e in entries {
                    writeln!(
                        out,
                        "{}  {}  {}",
                        milnor::sequence_name(&e.sequence),
                        component_letter(e.target),
                        e.mubar
                    )
                    .unwrap();
                }
            }
        }
    }
    out
}

fn linking(c: &Common, src: &Source) -> Res<String> {
    let k = src.components();
    let mut pairs = Vec::new();
    let d = src.diagram();
    let t = match d {
        Some(_) => None,
        None => Some(
            milnor::mu_from_longitudes(
                match src {
                    Source::Longitudes(w) => w,
                    _ => unreachable!("no diagram means longitudes"),
                },
                2,
            )
            .map_err(comp_err)?,
        ),
    };
    for under in 0..k {
        for over in 0..k {
            if over == under {
                continue;
            }
            let link = match (&d, &t) {
                (Some(d), _) => d.linking_number(over, under).map_err(comp_err)?,
                (None, Some(t)) => {
                    i64::try_from(t.mu(&[over], under)).map_err(|_| comp_err("linking number out of range"))?
                }
                (None, None) => unreachable!("one source is present"),
            };
            pairs.push((over, under, link));
        }
    }
    let mut out = String::new();
    match c.format {
        Format::Records => {
            for (over, under, link) in pairs {
                let rec = LinkRecord {
                    over: component_letter(over).to_string(),
                    under: component_letter(under).to_string(),
                    link,
                };
                json_line(&mut out, &rec);
            }
        }
        Format::Text => {
            let parts: Vec<String> = pairs
                .iter()
                .map(|&(o, u, l)| format!("link({},{})={l}", component_letter(o), component_letter(u)))
                .collect();
            writeln!(out, "{}", parts.join(" ")).unwrap();
        }
    }
    Ok(out)
}

fn skein_checks(c: &Common, src: &Source) -> Res<Vec<SkeinCheck>> {
    let n = cap(c, src)?;
    match src {
        Source::Braid(b) => {
            let marks: Vec<usize> = match c.mark {
                Some(m) => vec![m],
                None => (0..b.letters().len()).filter(|&i| b.letters()[i].is_classical()).collect(),
            };
            let mut out = Vec::new();
            for m in marks {
                let mb = MarkedBraid::new(b.clone(), m).map_err(input_err)?;
                out.extend(skein::check_skein(&mb, n).map_err(comp_err)?);
            }
            Ok(out)
        }
        Source::Gauss(d) => {
            let ids: Vec<CrossingId> = match c.mark {
                Some(m) => vec![CrossingId(u32::try_from(m).map_err(input_err)?)],
                None => d.crossings().keys().copied().collect(),
            };
            let mut out = Vec::new();
            for id in ids {
                if d.crossing(id).is_none() {
                    return Err(input_err(format!("no crossing {}", id.0)));
                }
                out.extend(skein::check_skein_at(d, id, n).map_err(comp_err)?);
            }
            Ok(out)
        }
        Source::Longitudes(_) => Err(input_err("`skein-check` needs a braid or Gauss diagram, not longitudes")),
    }
}

fn render_skein(c: &Common, checks: &[SkeinCheck]) -> String {
    let mut out = String::new();
    for ch in checks {
        match c.format {
            Format::Text => writeln!(out, "{ch}").unwrap(),
            Format::Records => json_line(
                &mut out,
                &SkeinRecord {
                    status: if ch.pass { "PASS" } else { "FAIL" },
                    family: ch.family.name(),
                    target: component_letter(ch.target).to_string(),
                    partner: component_letter(ch.partner).to_string(),
                    sequence: ch.sequence.iter().map(|&j| component_letter(j).to_string()).collect(),
                    lhs: ch.lhs.to_string().parse().expect("integers are JSON numbers"),
                    rhs: ch.rhs.to_string().parse().expect("integers are JSON numbers"),
                },
            ),
        }
    }
    out
}

/// Compares mubar tables; homotopy classes only look at distinct indices.
fn mubar_preserved(class: MoveClass, a: &MuTable, b: &MuTable) -> bool {
    let distinct_only = matches!(class, MoveClass::Homotopy | MoveClass::WeldedHomotopy);
    a.entries().iter().zip(b.entries()).all(|(x, y)| (distinct_only && x.repeated_index) || x.mubar == y.mubar)
}

fn execute(cmd: &Command, text: &str) -> Res<(String, bool)> {
    let (c, name) = match cmd {
        Command::Mu(c) => (c, "mu"),
        Command::Mubar(c) => (c, "mubar"),
        Command::Linking(c) => (c, "linking"),
        Command::Present(c) => (c, "present"),
        Command::SkeinCheck(c) => (c, "skein-check"),
        Command::Fuzz(c) => (c, "fuzz"),
        Command::Replay(c) => (c, "replay"),
        Command::Flatten(c) => (c, "flatten"),
    };
    let src = read_source(c, text)?;
    match cmd {
        Command::Mu(_) => {
            let t = table(c, &src)?;
            Ok((render_entries(c, &t, t.entries().iter()), true))
        }
        Command::Mubar(_) => {
            let t = table(c, &src)?;
            let keep = t.entries().iter().filter(|e| !e.repeated_index && !e.contains_target);
            Ok((render_entries(c, &t, keep), true))
        }
        Command::Linking(_) => Ok((linking(c, &src)?, true)),
        Command::Present(_) => Ok((presentation(&need_diagram(&src, name)?).to_string(), true)),
        Command::SkeinCheck(_) => {
            let checks = skein_checks(c, &src)?;
            Ok((render_skein(c, &checks), checks.iter().all(|ch| ch.pass)))
        }
        Command::Fuzz(_) => {
            let d = need_diagram(&src, name)?;
            let n = cap(c, &src)?;
            let (e, log) = moves::fuzz(&d, c.class, c.steps, c.seed);
            let rendered = moves::render_log(&log);
            if let Some(path) = &c.log {
                fs::write(path, &rendered).map_err(|err| comp_err(format!("{}: {err}", path.display())))?;
            }
            let before = milnor::mu_table_with(&d, n, convention(c)).map_err(comp_err)?;
            let after = milnor::mu_table_with(&e, n, convention(c)).map_err(comp_err)?;
            let ok = mubar_preserved(c.class, &before, &after);
            let mut out = rendered;
            writeln!(out, "# result: {e}").unwrap();
            writeln!(out, "# {} mubar unchanged, cap {n}", if ok { "PASS" } else { "FAIL" }).unwrap();
            Ok((out, ok))
        }
        Command::Replay(_) => {
            let d = need_diagram(&src, name)?;
            let path = c.log.as_ref().ok_or_else(|| input_err("`replay` needs --log"))?;
            let log_text = fs::read_to_string(path).map_err(|err| input_err(format!("{}: {err}", path.display())))?;
            let log = moves::parse_log(&log_text).map_err(input_err)?;
            let e = moves::replay(&d, &log).map_err(input_err)?;
            Ok((format!("{e}\n"), true))
        }
        Command::Flatten(_) => Ok((format!("{}\n", need_diagram(&src, name)?.flatten()), true)),
    }
}

fn input_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Mu(c)
        | Command::Mubar(c)
        | Command::Linking(c)
        | Command::Present(c)
        | Command::SkeinCheck(c)
        | Command::Fuzz(c)
        | Command::Replay(c)
        | Command::Flatten(c) => c.input.as_ref().filter(|p| p.as_os_str() != "-"),
    }
}

/// Runs one invocation. `args` includes the program name; `stdin` is used
/// when no input file is named.
pub fn run<I, T>(args: I, stdin: &str) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(args, || Ok(stdin.to_string()))
}

/// As [`run`], reading standard input only if it is needed.
pub fn run_with<I, T>(args: I, stdin: impl FnOnce() -> std::io::Result<String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let text = match input_path(&cli.command) {
        Some(p) => fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
        None => stdin().map_err(|e| format!("reading standard input: {e}")),
    };
    let text = match text {
        Ok(t) => t,
        Err(m) => return Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {m}\n") },
    };
    match execute(&cli.command, &text) {
        Ok((stdout, ok)) => Outcome { code: if ok { EXIT_OK } else { EXIT_FAIL }, stdout, stderr: String::new() },
        Err(Failure::Input(m)) => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Computation(m)) => {
            Outcome { code: EXIT_FAIL, stdout: String::new(), stderr: format!("error: {m}\n") }
        }
    }
}
