//! The `ssr-ent` command line: `classify`, `activate`, `distill`, `twirl` and
//! `demo`, with human-readable or JSON output.
//!
//! Exit codes: 0 for any completed run (a failed protocol included), 2 for
//! usage and parse errors, 3 for internal consistency errors, 4 for inputs
//! outside a command's domain.

pub mod demo;
pub mod parse;
pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};

use crate::classify::{is_one_distillable, Classifier, DEFAULT_MAX_COPIES};
use crate::error::Error;
use crate::fock::PureState;
use crate::oracle::{is_ppt, min_partial_transpose_eigenvalue, twirled_verdict, EIGEN_TOL};
use crate::protocols::{build_activator, distill_auto, protocol_a, protocol_b, verify_activation, Truncation};
use crate::ssr::{sector_support, twirl_pure, ChargeRule};

use demo::Demo;
use report::{
    ClassificationSection, ErrorSection, InputEcho, ProtocolSection, ReportDocument, StateSection, TwirlSection,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONSISTENCY: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "ssr-ent",
    version,
    about = "Entanglement of pure Fock states under local charge superselection"
)]
struct Cli {
    /// Superselection rule: `number` or `mod:d`.
    #[arg(long, global = true, default_value = "number", value_parser = parse_rule)]
    rule: ChargeRule,
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class, distillation number and witness sector of a state.
    Classify {
        /// State expression, or `-` for stdin.
        state: String,
        #[arg(long, default_value_t = DEFAULT_MAX_COPIES)]
        max_copies: usize,
    },
    /// Activate a bound state with a product activator (built if omitted).
    Activate { state: String, activator: Option<String> },
    /// Run a multi-copy distillation protocol.
    Distill {
        state: String,
        #[arg(long, value_enum, default_value_t = ProtocolArg::Auto)]
        protocol: ProtocolArg,
    },
    /// Average a state over local phases and test the result.
    Twirl { state: String },
    /// Run one of the optical scenarios.
    Demo {
        #[arg(value_parser = clap::value_parser!(Demo))]
        name: Demo,
        /// Photon-number cutoff for coherent and squeezed states.
        #[arg(long, default_value_t = Truncation::default().cutoff)]
        cutoff: u32,
        /// Seed for sampling repeated trials in the narrative.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ProtocolArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    Auto,
}

impl clap::builder::ValueParserFactory for Demo {
    type Parser = clap::builder::ValueParser;

    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<Demo>())
    }
}

fn parse_rule(s: &str) -> Result<ChargeRule, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Syntax { .. } | Error::UnsupportedRule(_) => EXIT_USAGE,
        Error::Consistency(_) => EXIT_CONSISTENCY,
        Error::Layout(_)
        | Error::EmptyState
        | Error::Domain(_)
        | Error::ResourceLimit(_)
        | Error::CutoffTooSmall { .. } => EXIT_DOMAIN,
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::Layout(_) => "layout",
        Error::EmptyState => "empty-state",
        Error::Domain(_) => "domain",
        Error::ResourceLimit(_) => "resource-limit",
        Error::Consistency(_) => "consistency",
        Error::CutoffTooSmall { .. } => "cutoff-too-small",
        Error::UnsupportedRule(_) => "unsupported-rule",
        Error::Syntax { .. } => "syntax",
    }
}

struct Failure {
    err: Error,
    code: i32,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = exit_code(&err);
        Self { err, code }
    }
}

/// Parse-stage errors always exit as usage errors.
fn read_state(text: &str, stdin: &mut dyn Read) -> Result<(String, PureState, f64), Failure> {
    let text = if text == "-" {
        let mut buf = String::new();
        stdin.read_to_string(&mut buf).map_err(|e| Failure {
            err: Error::Domain(format!("cannot read stdin: {e}")),
            code: EXIT_USAGE,
        })?;
        buf
    } else {
        text.to_string()
    };
    let (psi, norm) = parse::parse_state(&text).map_err(|err| Failure { err, code: EXIT_USAGE })?;
    Ok((text.trim().to_string(), psi, norm))
}

/// On failure the partially filled report is returned with the error.
fn execute(cli: &Cli, stdin: &mut dyn Read) -> (ReportDocument, Option<Failure>) {
    let name = match &cli.command {
        Command::Classify { .. } => "classify",
        Command::Activate { .. } => "activate",
        Command::Distill { .. } => "distill",
        Command::Twirl { .. } => "twirl",
        Command::Demo { .. } => "demo",
    };
    let mut doc = ReportDocument::new(name, cli.rule);
    let failure = fill(cli, &mut doc, stdin).err();
    (doc, failure)
}

fn fill(cli: &Cli, doc: &mut ReportDocument, stdin: &mut dyn Read) -> Result<(), Failure> {
    let rule = cli.rule;
    match &cli.command {
        Command::Classify { state, max_copies } => {
            let (text, psi, norm) = read_state(state, stdin)?;
            doc.input = Some(InputEcho::new(&text, &psi, norm));
            let report = Classifier::new(rule).with_max_copies(*max_copies).classify(&psi)?;
            if !report.is_consistent() {
                return Err(Error::Consistency(format!("inconsistent classification {report:?}")).into());
            }
            doc.classification = Some(ClassificationSection::new(
                &report,
                &psi.schmidt_coefficients()?,
                sector_support(&psi, rule),
            ));
        }
        Command::Activate { state, activator } => {
            let (text, psi, norm) = read_state(state, stdin)?;
            doc.input = Some(InputEcho::new(&text, &psi, norm));
            let chi = match activator {
                Some(a) => read_state(a, stdin)?.1,
                None => build_activator(&psi, rule)?.0,
            };
            let (_, outcome) = verify_activation(&psi, &chi, rule)?;
            let mut section = ProtocolSection::new(&outcome);
            section.activator = Some(StateSection::new(&chi));
            doc.protocol = Some(section);
        }
        Command::Distill { state, protocol } => {
            let (text, psi, norm) = read_state(state, stdin)?;
            doc.input = Some(InputEcho::new(&text, &psi, norm));
            let outcome = match protocol {
                ProtocolArg::A => protocol_a(&psi, rule)?,
                ProtocolArg::B => protocol_b(&psi, rule)?,
                ProtocolArg::Auto => distill_auto(&psi, rule)?,
            };
            doc.protocol = Some(ProtocolSection::new(&outcome));
        }
        Command::Twirl { state } => {
            let (text, psi, norm) = read_state(state, stdin)?;
            doc.input = Some(InputEcho::new(&text, &psi, norm));
            let rho = twirl_pure(&psi, rule)?;
            let verdict = twirled_verdict(&rho, rule)?;
            let (direct, _) = is_one_distillable(&psi, rule)?;
            if direct != verdict.distillable {
                return Err(Error::Consistency(format!(
                    "sector scan says 1-distillable = {direct}, twirled-state oracle says {}",
                    verdict.distillable
                ))
                .into());
            }
            doc.twirl = Some(TwirlSection::new(
                &rho,
                min_partial_transpose_eigenvalue(&rho),
                is_ppt(&rho, EIGEN_TOL),
                &verdict,
            ));
        }
        Command::Demo { name, cutoff, seed } => {
            *doc = demo::run_demo(*name, rule, Truncation::with_cutoff(*cutoff), *seed)?;
        }
    }
    Ok(())
}

fn fmt_c(v: [f64; 2]) -> String {
    match (v[0], v[1]) {
        (re, 0.0) => format!("{re}"),
        (0.0, im) => format!("{im}i"),
        (re, im) => format!("{re}{}{}i", if im < 0.0 { "-" } else { "+" }, im.abs()),
    }
}

fn brief(s: &StateSection) -> String {
    const SHOWN: usize = 8;
    if s.amplitudes.len() <= SHOWN {
        return s.expression.clone();
    }
    let head: Vec<String> = s.amplitudes[..SHOWN]
        .iter()
        .map(|a| format!("{} {}", fmt_c(a.value), a.label))
        .collect();
    format!("{} + ... ({} terms)", head.join(" + "), s.amplitudes.len())
}

/// Human-readable rendering of a report. Not a stable format.
pub fn render_text(doc: &ReportDocument) -> String {
    let mut out = String::new();
    let w = &mut out;
    if let Some(input) = &doc.input {
        let _ = writeln!(w, "state: {}", brief(&input.state));
        let _ = writeln!(w, "modes: {}  (input norm {})", input.state.layout, input.original_norm);
    }
    if let Some(c) = &doc.classification {
        let _ = writeln!(w, "rule: {}", doc.rule);
        let _ = writeln!(w, "class: {}", c.class);
        match c.distillation_number {
            Some(n) => writeln!(w, "distillation number: {n}"),
            None => writeln!(w, "distillation number: none (product)"),
        }
        .ok();
        if let Some(wit) = &c.witness {
            let _ = writeln!(
                w,
                "witness: {} copies, sector ({},{})",
                wit.copies, wit.sector[0], wit.sector[1]
            );
        }
        let _ = writeln!(w, "locally invariant: {}", c.is_locally_invariant);
    }
    if let Some(demo) = &doc.demo {
        let _ = writeln!(w, "demo: {}", demo.name);
        for line in &demo.narrative {
            let _ = writeln!(w, "  {line}");
        }
        for (who, class) in &demo.classifications {
            let _ = writeln!(w, "  {who}: {class}");
        }
    }
    if let Some(p) = &doc.protocol {
        let _ = writeln!(w, "protocol: {}", p.protocol);
        if let Some(a) = &p.activator {
            let _ = writeln!(w, "activator: {}", brief(a));
        }
        if let Some(s) = &p.subspaces {
            let _ = writeln!(
                w,
                "subspaces: A {{{}, {}}}  B {{{}, {}}}",
                s.alice[0], s.alice[1], s.bob[0], s.bob[1]
            );
        }
        for (k, step) in p.steps.iter().enumerate() {
            let _ = writeln!(w, "  step {}: {} (p = {})", k + 1, step.action, step.probability);
        }
        if let Some(l) = &p.lambdas {
            let _ = writeln!(w, "lambda+ = {}  lambda- = {}", fmt_c(l.plus), fmt_c(l.minus));
        }
        let _ = writeln!(w, "success: {}", p.success);
        let _ = writeln!(w, "probability: {}", p.probability);
        if let Some(o) = &p.output {
            let _ = writeln!(w, "output: {}", brief(o));
        }
        if let Some(r) = &p.reason {
            let _ = writeln!(w, "reason: {r}");
        }
    }
    if let Some(demo) = &doc.demo {
        if let Some(f) = demo.fidelity_to_eepr {
            let _ = writeln!(w, "fidelity to dual-rail state: {f}");
        }
        if let Some(t) = &demo.truncation {
            let _ = writeln!(
                w,
                "truncation: cutoff {}, loss per mode {:e}, total loss {:e}, probability error {:e}",
                t.cutoff, t.mode_loss, t.loss, t.probability_error
            );
        }
        if let Some(seed) = demo.seed {
            let _ = writeln!(w, "samples (seed {seed}): {}", demo.samples.join(", "));
        }
    }
    if let Some(t) = &doc.twirl {
        let _ = writeln!(w, "twirled operator ({} entries, trace {}):", t.entries.len(), t.trace);
        for e in &t.entries {
            let _ = writeln!(w, "  {} {} : {}", e.row, e.col, fmt_c(e.value));
        }
        let _ = writeln!(
            w,
            "min partial-transpose eigenvalue: {}",
            t.min_partial_transpose_eigenvalue
        );
        let _ = writeln!(w, "ppt: {}", t.ppt);
        let _ = writeln!(w, "1-distillable: {}", t.one_distillable);
    }
    if let Some(e) = &doc.error {
        let _ = writeln!(w, "error ({}): {}", e.kind, e.message);
    }
    out
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let (doc, code) = match execute(&cli, stdin) {
        (doc, None) => (doc, EXIT_OK),
        (mut doc, Some(f)) => {
            let _ = writeln!(stderr, "ssr-ent: {}", f.err);
            doc.error = Some(ErrorSection {
                kind: error_kind(&f.err).to_string(),
                message: f.err.to_string(),
                exit_code: f.code,
            });
            (doc, f.code)
        }
    };
    let text = if cli.json {
        doc.to_json() + "\n"
    } else if code == EXIT_OK {
        render_text(&doc)
    } else {
        String::new()
    };
    let _ = stdout.write_all(text.as_bytes());
    code
}
