//! The `silt` command line.

mod svg;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use silt_core::{
    algebra_from_dissection, enumerate_silting_an, enumerate_slaloms_an, verify, CountReport,
    CrossArc, DissectionFile, Guard, Surface, XPair,
};

pub use svg::Picture;

/// Exit status for a verification disagreement.
pub const EXIT_DISAGREE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "silt",
    version,
    about = "Dissections, slaloms and d-term silting counts on marked disks"
)]
struct Cli {
    /// Worker threads for enumeration; SILT_THREADS takes precedence
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Largest slalom list the brute-force search accepts
    #[arg(long, global = true, default_value_t = Guard::default().max_slaloms)]
    max_slaloms: usize,

    /// Largest expected number of collections the brute-force search accepts
    #[arg(long, global = true, default_value_t = Guard::default().max_collections)]
    max_collections: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Linearly oriented A_n on the fan disk
    #[command(subcommand)]
    An(AnCommand),
    /// Dissection files
    #[command(subcommand)]
    Dissection(DissectionCommand),
    /// Single slalom queries
    #[command(subcommand)]
    Slalom(SlalomCommand),
    /// Diagram export
    #[command(subcommand)]
    Export(ExportCommand),
    /// Cross-check all counting methods over a grid
    Verify(SweepArgs),
}

#[derive(Debug, Args)]
struct Size {
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    d: u64,
    /// Machine-readable output
    #[arg(long)]
    json: bool,
}

impl Size {
    fn d(&self) -> usize {
        self.d as usize
    }
}

#[derive(Debug, Subcommand)]
enum AnCommand {
    /// List the slaloms of the d-term model
    Slaloms(Size),
    /// Count d-term silting objects
    Count {
        #[command(flatten)]
        size: Size,
        /// Also count by exhaustive search
        #[arg(long)]
        brute_force: bool,
    },
    /// List every d-term silting collection, one per line
    Enumerate(Size),
    /// Count by every method, brute force included unless disabled
    Verify {
        #[command(flatten)]
        size: Size,
        #[arg(long)]
        brute_force: bool,
    },
}

#[derive(Debug, Args)]
struct FileArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Machine-readable output
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum DissectionCommand {
    /// Check a dissection and print it in canonical form
    Validate(FileArgs),
    /// Extract the quiver with relations (DOT, or JSON with --json)
    Algebra(FileArgs),
    /// Compute the dual dissection
    Dual(FileArgs),
}

#[derive(Debug, Subcommand)]
enum SlalomCommand {
    /// Decide whether an arc "(c,i)-(c,i)" is a slalom of the fan model
    Check {
        #[command(flatten)]
        size: Size,
        #[arg(long, allow_hyphen_values = true)]
        arc: String,
    },
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum ExportCommand {
    /// Draw a dissection or a slalom collection
    Svg(ExportArgs),
    /// Write the quiver of a dissection as Graphviz
    Dot(ExportArgs),
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, required = true)]
    sweep: bool,
    #[arg(long)]
    max_n: usize,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_d: u64,
    #[arg(long)]
    json: bool,
}

/// A slalom collection file: `{"n": .., "d": .., "slaloms": ["(c,i)-(c,i)", ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionFile {
    pub n: usize,
    pub d: usize,
    pub slaloms: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Drawable {
    Dissection(DissectionFile),
    Collection(CollectionFile),
}

/// Runs the CLI on `args` (program name first), writing to the process's
/// standard streams. Returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Like [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let stream: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(stream, "{text}");
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

fn threads(flag: Option<usize>) -> anyhow::Result<Option<usize>> {
    match std::env::var("SILT_THREADS") {
        Ok(v) if !v.trim().is_empty() => {
            let n: usize = v
                .trim()
                .parse()
                .with_context(|| format!("SILT_THREADS={v:?} is not a count"))?;
            Ok(Some(n))
        }
        _ => Ok(flag),
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> anyhow::Result<i32> {
    let guard = Guard {
        max_slaloms: cli.max_slaloms,
        max_collections: cli.max_collections,
    };
    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads(cli.threads)? {
            builder = builder.num_threads(n);
        }
        builder.build().context("could not start worker threads")?
    };
    // collected first so the worker pool never touches the caller's stream
    let mut buffer: Vec<u8> = Vec::new();
    let result = pool.install(|| {
        let sink = &mut buffer;
        match cli.command {
            Command::An(cmd) => an(cmd, &guard, sink),
            Command::Dissection(cmd) => dissection(cmd, sink),
            Command::Slalom(SlalomCommand::Check { size, arc }) => slalom_check(&size, &arc, sink),
            Command::Export(cmd) => export(cmd),
            Command::Verify(args) => sweep(&args, &guard, sink),
        }
    });
    out.write_all(&buffer).context("cannot write output")?;
    result
}

fn emit(out: &mut dyn Write, target: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match target {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => out
            .write_all(text.as_bytes())
            .context("cannot write output"),
    }
}

fn report_table(r: &CountReport) -> String {
    let mut rows = vec![("n", r.n.to_string()), ("d", r.d.to_string())];
    if let Some(b) = &r.methods.brute_force {
        rows.push(("brute_force", b.to_string()));
    }
    rows.push(("recursion", r.methods.recursion.to_string()));
    rows.push(("closed_form", r.methods.closed_form.to_string()));
    rows.push(("tree_dp", r.methods.tree_dp.to_string()));
    rows.push(("agree", if r.agree { "yes" } else { "NO" }.to_string()));
    rows.iter().map(|(k, v)| format!("{k:<12} {v}\n")).collect()
}

fn an(cmd: AnCommand, guard: &Guard, out: &mut dyn Write) -> anyhow::Result<i32> {
    match cmd {
        AnCommand::Slaloms(size) => {
            let list = enumerate_slaloms_an(size.n, size.d())?;
            let text = if size.json {
                let names: Vec<String> = list.iter().map(ToString::to_string).collect();
                serde_json::to_string(&names)? + "\n"
            } else {
                list.iter().map(|p| format!("{p}\n")).collect()
            };
            emit(out, None, &text)?;
            Ok(0)
        }
        AnCommand::Count { size, brute_force } | AnCommand::Verify { size, brute_force } => {
            let report = verify(size.n, size.d(), brute_force, guard)?;
            let text = if size.json {
                serde_json::to_string(&report)? + "\n"
            } else {
                report_table(&report)
            };
            emit(out, None, &text)?;
            Ok(if report.agree { 0 } else { EXIT_DISAGREE })
        }
        AnCommand::Enumerate(size) => {
            let collections = enumerate_silting_an(size.n, size.d(), guard)?;
            let text = if size.json {
                let files: Vec<CollectionFile> = collections
                    .iter()
                    .map(|c| CollectionFile {
                        n: c.n,
                        d: c.d,
                        slaloms: c.slaloms.iter().map(ToString::to_string).collect(),
                    })
                    .collect();
                serde_json::to_string(&files)? + "\n"
            } else {
                collections.iter().map(|c| format!("{c}\n")).collect()
            };
            emit(out, None, &text)?;
            Ok(0)
        }
    }
}

fn read_dissection(path: &Path) -> anyhow::Result<silt_core::Dissection> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let file: DissectionFile = serde_json::from_str(&text)
        .with_context(|| format!("{} is not a dissection file", path.display()))?;
    Ok(file.into_dissection()?)
}

fn canonical_json(d: &silt_core::Dissection) -> anyhow::Result<String> {
    Ok(serde_json::to_string(&DissectionFile::from(d))? + "\n")
}

fn dissection(cmd: DissectionCommand, out: &mut dyn Write) -> anyhow::Result<i32> {
    match cmd {
        DissectionCommand::Validate(args) => {
            let d = read_dissection(&args.input)?;
            let text = if args.json || args.out.is_some() {
                canonical_json(&d)?
            } else {
                format!(
                    "valid\npoints       {}\narcs         {}\nfaces        {}\nmaximal      {}\n",
                    d.disk().m(),
                    d.arcs().len(),
                    d.faces().len(),
                    if d.is_maximal() { "yes" } else { "no" }
                )
            };
            emit(out, args.out.as_deref(), &text)?;
        }
        DissectionCommand::Algebra(args) => {
            let algebra = algebra_from_dissection(&read_dissection(&args.input)?)?;
            let text = if args.json {
                serde_json::to_string(&algebra.to_json())? + "\n"
            } else {
                algebra.to_dot()
            };
            emit(out, args.out.as_deref(), &text)?;
        }
        DissectionCommand::Dual(args) => {
            let dual = read_dissection(&args.input)?.dual()?;
            let text = if args.json || args.out.is_some() {
                canonical_json(&dual)?
            } else {
                dual.arcs().iter().map(|c| format!("{c}\n")).collect()
            };
            emit(out, args.out.as_deref(), &text)?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct CheckReport {
    arc: String,
    slalom: bool,
    in_window: bool,
    grading: Vec<i64>,
    crossings: Vec<usize>,
}

fn slalom_check(size: &Size, arc: &str, out: &mut dyn Write) -> anyhow::Result<i32> {
    let pair: XPair = arc.parse()?;
    let surface = Surface::linear_an(size.n, size.d())?;
    let g = CrossArc::new(&surface, pair)?;
    let report = CheckReport {
        arc: pair.to_string(),
        slalom: g.is_slalom(),
        in_window: g.in_window(size.d()),
        grading: g.grading.clone(),
        crossings: g.crossings.iter().map(|c| c.dual_arc).collect(),
    };
    let text = if size.json {
        serde_json::to_string(&report)? + "\n"
    } else {
        let grading: Vec<String> = report.grading.iter().map(ToString::to_string).collect();
        format!(
            "arc          {}\nslalom       {}\nin_window    {}\ngrading      {}\n",
            report.arc,
            if report.slalom { "yes" } else { "no" },
            if report.in_window { "yes" } else { "no" },
            grading.join(" ")
        )
    };
    emit(out, None, &text)?;
    if !report.slalom {
        bail!("{pair} is not a slalom");
    }
    Ok(0)
}

fn export(cmd: ExportCommand) -> anyhow::Result<i32> {
    match cmd {
        ExportCommand::Svg(args) => {
            let text = fs::read_to_string(&args.input)
                .with_context(|| format!("cannot read {}", args.input.display()))?;
            let drawable: Drawable = serde_json::from_str(&text).with_context(|| {
                format!(
                    "{} is neither a dissection nor a collection",
                    args.input.display()
                )
            })?;
            let picture = match drawable {
                Drawable::Dissection(file) => Picture::of_dissection(&file.into_dissection()?),
                Drawable::Collection(file) => {
                    let surface = Surface::linear_an(file.n, file.d)?;
                    let arcs = file
                        .slaloms
                        .iter()
                        .map(|s| {
                            let pair: XPair = s.parse()?;
                            let g = CrossArc::new(&surface, pair)?;
                            if !g.is_slalom() {
                                return Err(silt_core::Error::NotSlalom(pair));
                            }
                            Ok(pair)
                        })
                        .collect::<silt_core::Result<Vec<_>>>()?;
                    Picture::of_slaloms(file.n, file.d, &arcs)
                }
            };
            emit(&mut std::io::sink(), Some(&args.out), &picture.render())?;
        }
        ExportCommand::Dot(args) => {
            let algebra = algebra_from_dissection(&read_dissection(&args.input)?)?;
            emit(&mut std::io::sink(), Some(&args.out), &algebra.to_dot())?;
        }
    }
    Ok(0)
}

fn sweep(args: &SweepArgs, guard: &Guard, out: &mut dyn Write) -> anyhow::Result<i32> {
    let mut reports = Vec::new();
    for d in 1..=args.max_d as usize {
        for n in 0..=args.max_n {
            let brute = guard.check(n, d).is_ok();
            reports.push(verify(n, d, brute, guard)?);
        }
    }
    let all_agree = reports.iter().all(|r| r.agree);
    let text = if args.json {
        serde_json::to_string(&reports)? + "\n"
    } else {
        let mut t = format!(
            "{:>3} {:>3} {:>12} {:>6}  {}\n",
            "n", "d", "brute_force", "agree", "count"
        );
        for r in &reports {
            let bf = r
                .methods
                .brute_force
                .as_ref()
                .map_or("-".to_string(), ToString::to_string);
            t += &format!(
                "{:>3} {:>3} {:>12} {:>6}  {}\n",
                r.n,
                r.d,
                bf,
                if r.agree { "yes" } else { "NO" },
                r.methods.recursion
            );
        }
        t
    };
    emit(out, None, &text)?;
    Ok(if all_agree { 0 } else { EXIT_DISAGREE })
}
