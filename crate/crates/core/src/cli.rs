//! The `check`, `translate` and `stats` commands.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};

use crate::elaborate::{elaborate, Elaboration};
use crate::frontend::{self, parse, Declaration, SourceFile, Span};
use crate::holtheory::{hol_base, kappa_class, validate_hol_encoded, KappaClass};
use crate::kernel::{Name, Term, TermKind};
use crate::kuroda::kuroda_file;
use crate::reduction::{Base, Theory, DEFAULT_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Translate,
    Stats,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub output: Option<PathBuf>,
    pub to_stdout: bool,
    pub classical: bool,
    /// Inject the HOL base; off for files that declare their own base.
    pub inject_base: bool,
    pub tidy: bool,
    pub budget: usize,
    pub pedantic: bool,
}

impl RunConfig {
    pub fn new(command: Command, inputs: Vec<PathBuf>) -> RunConfig {
        RunConfig {
            command,
            inputs,
            output: None,
            to_stdout: false,
            classical: true,
            inject_base: true,
            tidy: true,
            budget: DEFAULT_BUDGET,
            pedantic: false,
        }
    }

    fn base(&self) -> Theory {
        let th = if self.inject_base {
            hol_base(self.classical)
        } else {
            Theory::new(Base::Bare)
        };
        th.with_budget(self.budget)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ItemStatus {
    pub file: String,
    /// Declared name, or `rule #i` for rewrite rules.
    pub name: String,
    pub span: Option<Span>,
    /// Error class and message.
    pub error: Option<(String, String)>,
}

impl ItemStatus {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub proofs: usize,
    pub classical: usize,
    pub higher_order: usize,
    pub inference_rules: usize,
}

impl std::ops::AddAssign for Counters {
    fn add_assign(&mut self, o: Counters) {
        self.proofs += o.proofs;
        self.classical += o.classical;
        self.higher_order += o.higher_order;
        self.inference_rules += o.inference_rules;
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub items: Vec<ItemStatus>,
    pub counters: Vec<(String, Counters)>,
    /// Diagnostics for stderr.
    pub messages: Vec<String>,
    /// Text for stdout.
    pub output: String,
    pub exit_code: i32,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &ItemStatus> {
        self.items.iter().filter(|i| !i.is_ok())
    }

    pub fn totals(&self) -> Counters {
        let mut t = Counters::default();
        for (_, c) in &self.counters {
            t += *c;
        }
        t
    }

    fn fail(&mut self, code: i32) {
        self.exit_code = self.exit_code.max(code);
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report> {
    if cfg.budget == 0 {
        bail!("the step budget must be positive");
    }
    match cfg.command {
        Command::Check => run_check(cfg),
        Command::Translate => run_translate(cfg),
        Command::Stats => run_stats(cfg),
    }
}

struct Loaded {
    label: String,
    file: Option<SourceFile>,
    elab: Option<Elaboration>,
}

fn load(path: &Path, base: &Theory, report: &mut Report) -> Result<Loaded> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(load_text(&path.display().to_string(), &text, base, report))
}

fn load_text(label: &str, text: &str, base: &Theory, report: &mut Report) -> Loaded {
    let file = match parse(text, &base.signature) {
        Ok(f) => f,
        Err(e) => {
            report.items.push(ItemStatus {
                file: label.to_string(),
                name: "<parse>".to_string(),
                span: Some(e.span),
                error: Some(("ParseError".to_string(), e.kind.to_string())),
            });
            report.messages.push(format!("{label}:{}: error[ParseError]: {}", e.span, e.kind));
            report.fail(1);
            return Loaded {
                label: label.to_string(),
                file: None,
                elab: None,
            };
        }
    };
    let elab = elaborate(base, &file);
    let mut rule_no = 0;
    for (item, status) in file.items.iter().zip(&elab.statuses) {
        let name = match &item.decl {
            Declaration::Rule { .. } => {
                rule_no += 1;
                format!("rule #{}", rule_no - 1)
            }
            d => d.name().map(|n| n.to_string()).unwrap_or_default(),
        };
        let error = status.as_ref().err().map(|e| {
            let at = item.span.map(|s| format!(":{s}")).unwrap_or_default();
            report
                .messages
                .push(format!("{label}{at}: error[{}]: {name}: {e}", e.class()));
            (e.class().to_string(), e.to_string())
        });
        if error.is_some() {
            report.fail(1);
        }
        report.items.push(ItemStatus {
            file: label.to_string(),
            name,
            span: item.span,
            error,
        });
    }
    Loaded {
        label: label.to_string(),
        file: Some(file),
        elab: Some(elab),
    }
}

fn validate(loaded: &Loaded, pedantic: bool, notes: bool, report: &mut Report) -> bool {
    let Some(elab) = &loaded.elab else {
        return false;
    };
    if elab.theory.base == Base::Bare {
        return true;
    }
    let v = validate_hol_encoded(&elab.theory, pedantic);
    for violation in &v.violations {
        report.messages.push(format!(
            "{}: error[NotHolEncoded]: {violation}",
            loaded.label
        ));
    }
    for note in v.notes.iter().filter(|_| notes) {
        report.messages.push(format!("{}: note: {note}", loaded.label));
    }
    if !v.is_valid() {
        report.fail(2);
    }
    v.is_valid()
}

pub fn run_check(cfg: &RunConfig) -> Result<Report> {
    let base = cfg.base();
    let mut report = Report::default();
    for path in &cfg.inputs {
        let loaded = load(path, &base, &mut report)?;
        let valid = match &loaded.elab {
            Some(elab) if elab.is_ok() => validate(&loaded, cfg.pedantic, true, &mut report),
            _ => true,
        };
        let items: Vec<&ItemStatus> = report
            .items
            .iter()
            .filter(|i| i.file == loaded.label)
            .collect();
        let errors = items.iter().filter(|i| !i.is_ok()).count();
        let status = if !valid || errors > 0 {
            "FAILED"
        } else {
            "ok"
        };
        let _ = writeln!(
            report.output,
            "{}: {} declarations, {} errors: {status}",
            loaded.label,
            items.len(),
            errors
        );
    }
    Ok(report)
}

pub fn run_translate(cfg: &RunConfig) -> Result<Report> {
    let [input] = cfg.inputs.as_slice() else {
        bail!("translate takes exactly one input file");
    };
    if cfg.output.is_none() && !cfg.to_stdout {
        bail!("translate needs an output file (-o) or --stdout");
    }
    if !cfg.inject_base {
        bail!("translation requires the HOL base");
    }
    let mut report = Report::default();
    let loaded = load(input, &cfg.base(), &mut report)?;
    if report.exit_code != 0 || !validate(&loaded, cfg.pedantic, true, &mut report) {
        return Ok(report);
    }
    let file = loaded.file.as_ref().expect("parsed");
    let translated = match kuroda_file(file, !cfg.tidy) {
        Ok(f) => f,
        Err(e) => {
            report
                .messages
                .push(format!("{}: error[TranslateError]: {e}", loaded.label));
            report.fail(2);
            return Ok(report);
        }
    };
    let text = frontend::print(&translated);
    match &cfg.output {
        Some(out) if !cfg.to_stdout => fs::write(out, &text)
            .with_context(|| format!("cannot write {}", out.display()))?,
        _ => report.output.push_str(&text),
    }

    let mut recheck = Report::default();
    let label = format!("{} (translated)", loaded.label);
    let target = hol_base(false).with_budget(cfg.budget);
    let re = load_text(&label, &text, &target, &mut recheck);
    if recheck.exit_code == 0 {
        validate(&re, false, false, &mut recheck);
    }
    let theorems = translated.theorems().count();
    report.items.extend(recheck.items);
    report.messages.extend(recheck.messages);
    if recheck.exit_code == 0 {
        report.messages.push(format!(
            "{}: translated {theorems} theorems; re-check ok",
            loaded.label
        ));
    } else {
        report.messages.push(format!(
            "{}: translated output fails to re-check",
            loaded.label
        ));
        report.fail(3);
    }
    Ok(report)
}

/// Table-style counters for the theorems of one elaborated file.
///
/// A proof is classical when it uses `pem` or an earlier classical theorem.
/// A result is higher-order when its statement quantifies over a sort built
/// with `o`. It is an inference rule when its statement is a κ3 type with a
/// κ3 premise among its leading products.
pub fn file_counters(elab: &Elaboration) -> Counters {
    let mut c = Counters::default();
    let mut classical: BTreeSet<Name> = BTreeSet::new();
    for thm in &elab.theorems {
        c.proofs += 1;
        let used = thm.proof.constants();
        if used.contains("pem") || used.iter().any(|u| classical.contains(u)) {
            classical.insert(thm.name.clone());
            c.classical += 1;
        }
        if quantifies_over_o(&thm.statement) {
            c.higher_order += 1;
        }
        if is_inference_rule(&thm.statement) {
            c.inference_rules += 1;
        }
    }
    c
}

fn quantifies_over_o(t: &Term) -> bool {
    let mut found = false;
    t.visit(&mut |s| {
        if found {
            return false;
        }
        let (head, args) = s.spine();
        if let (Some(q), Some(sort)) = (head.as_const(), args.first()) {
            if (&**q == "all" || &**q == "ex") && sort.mentions_const("o") {
                found = true;
            }
        }
        !found
    });
    found
}

fn is_inference_rule(statement: &Term) -> bool {
    if kappa_class(statement) != KappaClass::K3 {
        return false;
    }
    let mut t = statement;
    while let TermKind::Pi(b) = t.kind() {
        if kappa_class(&b.ty) == KappaClass::K3 {
            return true;
        }
        t = &b.body;
    }
    false
}

pub fn run_stats(cfg: &RunConfig) -> Result<Report> {
    let base = cfg.base();
    let mut report = Report::default();
    for path in &cfg.inputs {
        let loaded = load(path, &base, &mut report)?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| loaded.label.clone());
        let counters = loaded.elab.as_ref().map(file_counters).unwrap_or_default();
        report.counters.push((label, counters));
    }
    let tsv = stats_tsv(&report);
    match &cfg.output {
        Some(out) => {
            fs::write(out, &tsv).with_context(|| format!("cannot write {}", out.display()))?
        }
        None if cfg.to_stdout => report.output.push_str(&tsv),
        None => {}
    }
    if !cfg.to_stdout {
        report.output.push_str(&stats_table(&report));
    }
    Ok(report)
}

/// Tab-separated counters, one line per file and a final `total` line.
pub fn stats_tsv(report: &Report) -> String {
    let mut s = String::from("file\tproofs\tclassical\thigher_order\tinference_rules\n");
    let rows = report
        .counters
        .iter()
        .map(|(f, c)| (f.as_str(), *c))
        .chain([("total", report.totals())]);
    for (f, c) in rows {
        let _ = writeln!(
            s,
            "{f}\t{}\t{}\t{}\t{}",
            c.proofs, c.classical, c.higher_order, c.inference_rules
        );
    }
    s
}

pub fn stats_table(report: &Report) -> String {
    let header = ["", "proofs", "classical", "higher-order", "inference rules"];
    let mut rows: Vec<[String; 5]> = report
        .counters
        .iter()
        .map(|(f, c)| (f.as_str(), *c))
        .chain([("All", report.totals())])
        .map(|(f, c)| {
            [
                f.to_string(),
                c.proofs.to_string(),
                c.classical.to_string(),
                c.higher_order.to_string(),
                c.inference_rules.to_string(),
            ]
        })
        .collect();
    rows.insert(0, header.map(String::from));
    let widths: Vec<usize> = (0..5)
        .map(|i| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0))
        .collect();
    let mut s = String::new();
    for r in &rows {
        let mut line = format!("{:<w$}", r[0], w = widths[0]);
        for i in 1..5 {
            let _ = write!(line, "  {:>w$}", r[i], w = widths[i]);
        }
        s.push_str(line.trim_end());
        s.push('\n');
    }
    s
}
