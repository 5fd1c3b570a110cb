use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use splab::config::{parse_labels, parse_lambda, CovFile, DiffeoSpec, Family, Preset};
use splab::io::{fmt_f64, write_op, write_op_json};
use splab::{par, verify, LabError, Result, VERSION};
use splab_core::embed::QuadratureGrid;
use splab_core::sim::{summarize, SimConfig};
use splab_core::Window;

#[derive(Parser, Debug)]
#[command(name = "splab", version, about = "Truncated Sp(infinity) laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
enum Cmd {
    /// Run the invariant battery; exits 1 if any check fails.
    Verify {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
    /// Embed a circle diffeomorphism as a truncated operator.
    Embed {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Family::Sine)]
        family: Family,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long, default_value_t = 0.0)]
        angle: f64,
        #[arg(long, default_value_t = 0.1)]
        t: f64,
        /// Quadrature points, a power of two; defaults to 8N rounded up.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Euler–Maruyama paths of the group Brownian motion.
    Simulate {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[arg(long = "Q", value_enum, default_value_t = QPreset::Power)]
        q_preset: QPreset,
        /// Covariance JSON file; overrides --Q.
        #[arg(long)]
        cov: Option<PathBuf>,
        /// Weight for the uniform preset.
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        /// Index bound for the uniform preset.
        #[arg(long = "K", default_value_t = 4)]
        k: usize,
        /// Exponent for the power preset.
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long = "T", default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 64)]
        paths: usize,
        #[arg(long, default_value_t = 10)]
        record_every: usize,
        /// Pull each step back toward the group.
        #[arg(long)]
        project: bool,
        /// Also write the summary JSON here.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Brute-force Ricci curvature against the closed forms.
    Ricci {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        /// uniform:<x> | power:<p> | file:<path>
        #[arg(long, default_value = "uniform:0.7071067811865476")]
        lambda: String,
        /// all:<K> | <kind>:<a>,<b>[;...]
        #[arg(long, default_value = "all:4")]
        labels: String,
    },
}

#[derive(Args, Debug, Serialize)]
struct Common {
    /// Truncation index window -N..N.
    #[arg(long = "N", default_value_t = 8)]
    #[serde(rename = "N")]
    n: usize,
    /// Output file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum QPreset {
    Zero,
    Uniform,
    Power,
}

impl Cmd {
    fn common(&self) -> &Common {
        match self {
            Cmd::Verify { common }
            | Cmd::Embed { common, .. }
            | Cmd::Simulate { common, .. }
            | Cmd::Ricci { common, .. } => common,
        }
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn window(n: usize) -> Result<Window> {
    if n < 2 {
        return Err(LabError::Usage("--N must be at least 2".into()));
    }
    Window::new(n).map_err(|e| LabError::Usage(e.to_string()))
}

fn run(cmd: &Cmd) -> Result<()> {
    let common = cmd.common();
    let w = window(common.n)?;
    let pool = par::pool(common.threads)?;
    let provenance =
        json!({"provenance": {"version": VERSION, "seed": common.seed, "config": cmd}});
    eprintln!("{provenance}");
    pool.install(|| match cmd {
        Cmd::Verify { common } => cmd_verify(common),
        Cmd::Embed {
            common,
            family,
            k,
            eps,
            angle,
            t,
            grid,
        } => {
            let spec = DiffeoSpec {
                family: *family,
                k: *k,
                eps: *eps,
                angle: *angle,
                t: *t,
            };
            cmd_embed(common, w, &spec, *grid)
        }
        Cmd::Simulate {
            common,
            q_preset,
            cov,
            q,
            k,
            p,
            dt,
            t_end,
            paths,
            record_every,
            project,
            summary,
        } => {
            let file = match cov {
                Some(path) => CovFile::load(path)?,
                None => CovFile {
                    preset: match q_preset {
                        QPreset::Zero => Preset::Zero,
                        QPreset::Uniform => Preset::Uniform,
                        QPreset::Power => Preset::Power,
                    },
                    q: Some(*q),
                    k: Some(*k),
                    p: Some(*p),
                    rows: Vec::new(),
                },
            };
            let cfg = SimConfig {
                window: w,
                dt: *dt,
                t_end: *t_end,
                paths: *paths,
                seed: common.seed,
                q: file.build(w)?,
                record_every: *record_every,
                project: *project,
            };
            cfg.validate().map_err(|e| LabError::Usage(e.to_string()))?;
            cmd_simulate(common, &cfg, summary.as_ref())
        }
        Cmd::Ricci {
            common,
            lambda,
            labels,
        } => cmd_ricci(common, lambda, labels),
    })
}

fn cmd_verify(common: &Common) -> Result<()> {
    let checks = verify::run(common.n)?;
    let mut out = sink(&common.out)?;
    match common.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&checks)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["name", "residual", "tol", "gating", "pass"])?;
            for c in &checks {
                w.write_record([
                    c.name.clone(),
                    fmt_f64(c.residual),
                    fmt_f64(c.tol),
                    c.gating.to_string(),
                    c.passed().to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    match verify::failures(&checks) {
        0 => Ok(()),
        k => Err(LabError::VerifyFailed(k)),
    }
}

fn cmd_embed(common: &Common, w: Window, spec: &DiffeoSpec, grid: Option<usize>) -> Result<()> {
    let psi = spec.build()?;
    let grid = match grid {
        Some(m) => QuadratureGrid::new(m).map_err(|e| LabError::Usage(e.to_string()))?,
        None => QuadratureGrid::for_window(w),
    };
    let e = par::embed(&psi, w, grid)?;
    let mut out = sink(&common.out)?;
    match common.format {
        Format::Csv => write_op(&e.op, &mut out)?,
        Format::Json => {
            write_op_json(&e.op, &mut out)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    drop(out);
    let report = json!({
        "real_residual": e.op.real_residual(),
        "omega_residual": e.op.omega_residual(),
        "norm2": e.op.norm2(),
        "aliased_columns": e.aliased,
    });
    println!("{report}");
    Ok(())
}

#[derive(Serialize)]
struct SimRow {
    path: usize,
    t: f64,
    residual: f64,
    norm2: f64,
}

fn cmd_simulate(common: &Common, cfg: &SimConfig, summary_path: Option<&PathBuf>) -> Result<()> {
    let records = par::simulate(cfg)?;
    let rows = records.iter().flat_map(|r| {
        (0..r.times.len()).map(move |i| SimRow {
            path: r.path,
            t: r.times[i],
            residual: r.residual[i],
            norm2: r.norm2[i],
        })
    });
    let mut out = sink(&common.out)?;
    match common.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["path", "t", "residual", "norm2"])?;
            for r in rows {
                w.write_record([
                    r.path.to_string(),
                    fmt_f64(r.t),
                    fmt_f64(r.residual),
                    fmt_f64(r.norm2),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string(&rows.collect::<Vec<_>>())?)?,
    }
    out.flush()?;
    drop(out);
    let s = summarize(&records);
    let summary = json!({
        "mean_terminal_residual": s.mean_terminal_residual,
        "max_residual": s.max_residual,
        "failed_paths": s.failed_paths,
        "paths": cfg.paths,
        "dt": cfg.dt,
        "N": cfg.window.n(),
        "seed": cfg.seed,
    });
    if let Some(p) = summary_path {
        std::fs::write(p, format!("{summary}\n"))?;
    }
    println!("{summary}");
    Ok(())
}

#[derive(Serialize)]
struct RicciRow {
    kind: String,
    a: i32,
    b: i32,
    #[serde(rename = "N")]
    n: usize,
    brute: f64,
    closed: f64,
    abs_diff: f64,
}

fn cmd_ricci(common: &Common, lambda: &str, labels: &str) -> Result<()> {
    let lam = parse_lambda(lambda, common.n)?;
    let labels = parse_labels(labels)?;
    if let Some(l) = labels.iter().find(|l| l.extent() > common.n) {
        return Err(LabError::Usage(format!(
            "label {l} exceeds N = {}",
            common.n
        )));
    }
    let rows: Vec<RicciRow> = par::curvature_report(&labels, &lam, common.n)?
        .into_iter()
        .map(|r| RicciRow {
            kind: r.label.kind().to_string(),
            a: r.label.a(),
            b: r.label.b(),
            n: r.n,
            brute: r.brute,
            closed: r.closed_form,
            abs_diff: r.abs_diff,
        })
        .collect();
    let mut out = sink(&common.out)?;
    match common.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["kind", "a", "b", "N", "brute", "closed", "abs_diff"])?;
            for r in &rows {
                w.write_record([
                    r.kind.clone(),
                    r.a.to_string(),
                    r.b.to_string(),
                    r.n.to_string(),
                    fmt_f64(r.brute),
                    fmt_f64(r.closed),
                    fmt_f64(r.abs_diff),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string(&rows)?)?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
