//! Command implementations behind the `divides` binary. Each command returns
//! its standard output as a string so that tests can run it in-process.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::acampo::{divide_link, folded_link_word, hirasawa_normalize, surface_genus};
use crate::arnold::{arf_from_j, j_divide};
use crate::corpus::{load_dir, random_divide, CorpusEntry, CorpusError, RandomParams};
use crate::divide::{validate, Divide, DivideError};
use crate::link::LinkDiagram;
use crate::moves::{j2_auto, j2_evaluate, Outcome, ReductionScript, SearchBudget};
use crate::svg::{divide_svg, link_word_svg};
use crate::verify::{check_all, Summary};

#[derive(Debug, Parser)]
#[command(name = "divides", version, about = "Divides, their links and their invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the size and the curve invariants of a divide.
    Invariants { file: PathBuf },
    /// Build the link of a divide and write it out in several forms.
    Link {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check every entry of a corpus directory.
    Verify {
        dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also check ten seeded random one-branch divides.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Draw a divide as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
}

/// Input problems; the binary exits with status 2 on these.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("{path}: {source}")]
    Divide { path: String, source: DivideError },
    #[error("{path}: script: {msg}")]
    Script { path: String, msg: String },
}

/// What a command printed and whether everything it checked passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub ok: bool,
}

impl Output {
    fn pass(stdout: String) -> Self {
        Output { stdout, ok: true }
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Invariants { file } => cmd_invariants(file),
        Command::Link { file, out } => cmd_link(file, out),
        Command::Verify { dir, jobs, seed } => cmd_verify(dir, *jobs, *seed),
        Command::Render { file, svg } => cmd_render(file, svg),
    }
}

fn load(path: &Path) -> Result<(CorpusEntry, Divide), CliError> {
    let entry = CorpusEntry::load(path)?;
    let d = validate(&entry.word).map_err(|e| CliError::Divide { path: path.display().to_string(), source: e })?;
    Ok((entry, d))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })
}

/// `delta=.. branches=.. jminus=.. jplus=.. j2=..`, then `rotation=.. arf=..`.
///
/// Curve invariants are printed as `-` for divides with several branches;
/// `j2=?` means the search gave up.
pub fn cmd_invariants(path: &Path) -> Result<Output, CliError> {
    let (entry, d) = load(path)?;
    let mut line = format!("delta={} branches={}", d.delta, d.branch_count());
    if d.branch_count() != 1 {
        line.push_str(" jminus=- jplus=- j2=-\nrotation=- arf=-\n");
        return Ok(Output::pass(line));
    }
    let p = path.display().to_string();
    let div = |e| CliError::Divide { path: p.clone(), source: e };
    let j = j_divide(&d).map_err(div)?;
    let j2 = match &entry.script {
        Some(text) => {
            let script = |msg: String| CliError::Script { path: p.clone(), msg };
            let s: ReductionScript = text.parse().map_err(|e: crate::moves::ScriptError| script(e.to_string()))?;
            j2_evaluate(&d, &s).map_err(|e| script(e.to_string()))?.to_string()
        }
        None => match j2_auto(&d, SearchBudget::default()).map_err(div)? {
            Outcome::Value { value, .. } => value.to_string(),
            Outcome::GaveUp { .. } => "?".into(),
        },
    };
    line.push_str(&format!(" jminus={} jplus={} j2={j2}\n", j.j_minus, j.j_plus));
    let rotation = d.rotation_number().map_err(div)?;
    let arf = arf_from_j(&d).map_or("-".to_string(), |a| a.to_string());
    line.push_str(&format!("rotation={rotation} arf={arf}\n"));
    Ok(Output::pass(line))
}

/// Planar diagram code: one `X[a,b,c,d]` per crossing followed by its sign,
/// then the count of crossingless loops.
pub fn pd_code(name: &str, ld: &LinkDiagram) -> String {
    let mut s = format!("# {name}: {} components, {} crossings\n", ld.component_count(), ld.crossings.len());
    for x in &ld.crossings {
        let [a, b, c, d] = x.pd;
        s.push_str(&format!("X[{a},{b},{c},{d}] {:+}\n", x.sign));
    }
    s.push_str(&format!("loops {}\n", ld.free_loops));
    s
}

/// Writes `<name>.pd`, `<name>.surface` and `<name>.svg` into `out`.
pub fn cmd_link(path: &Path, out: &Path) -> Result<Output, CliError> {
    let (entry, d) = load(path)?;
    let (sd, ld) = divide_link(&d);
    let components = ld.component_count();
    let mut summary = format!(
        "components={components} crossings={} disks={} bands={} euler={}",
        ld.crossings.len(),
        sd.disks,
        sd.bands.len(),
        sd.euler()
    );
    match surface_genus(&sd) {
        Ok(g) => summary.push_str(&format!(" genus={g}")),
        Err(_) => summary.push_str(" genus=-"),
    }
    if components == 2 {
        if let Ok(lk) = ld.linking_number(0, 1) {
            summary.push_str(&format!(" lk={lk}"));
        }
    }
    summary.push('\n');

    std::fs::create_dir_all(out).map_err(|e| CliError::Io { path: out.display().to_string(), source: e })?;
    let name = &entry.name;
    write(&out.join(format!("{name}.pd")), &pd_code(name, &ld))?;
    write(&out.join(format!("{name}.surface")), &summary)?;
    let layout = hirasawa_normalize(&d, &vec![false; d.branch_count()]);
    write(&out.join(format!("{name}.svg")), &link_word_svg(&folded_link_word(layout.word())))?;
    Ok(Output::pass(summary))
}

/// One line per entry sorted by file name, then a JSON summary line.
pub fn cmd_verify(dir: &Path, jobs: usize, seed: Option<u64>) -> Result<Output, CliError> {
    let mut entries = Vec::new();
    for (_, e) in load_dir(dir)? {
        entries.push(e?);
    }
    if let Some(seed) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = RandomParams { branches: 1, max_events: 9, max_strands: 4, max_delta: 4 };
        for k in 0..10 {
            if let Some(d) = random_divide(&mut rng, params, &format!("random-{seed}-{k}")) {
                entries.push(CorpusEntry::parse(&d.word.name, &d.word.to_div1())?);
            }
        }
    }
    let reports = check_all(&entries, SearchBudget::default(), jobs);
    let summary = Summary::of(&reports);
    let mut stdout = String::new();
    for r in &reports {
        stdout.push_str(&format!("{r}\n"));
        for c in r.checks.iter().filter(|c| c.verdict != crate::knotpoly::Verdict::Pass) {
            stdout.push_str(&format!("    {} {}: {}\n", c.verdict, c.name, c.detail));
        }
    }
    let json = serde_json::json!({ "summary": summary, "entries": reports });
    stdout.push_str(&format!("{json}\n"));
    Ok(Output { stdout, ok: summary.fail == 0 })
}

pub fn cmd_render(path: &Path, svg: &Path) -> Result<Output, CliError> {
    let (entry, _) = load(path)?;
    write(svg, &divide_svg(&entry.word))?;
    Ok(Output::pass(String::new()))
}
