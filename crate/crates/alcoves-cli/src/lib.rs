//! Command-line front end for the `alcoves` crate.

pub mod config;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use alcoves::ordertopo::Window;
use alcoves::presheaf::{validate, ObjectSpec, Presheaf};
use alcoves::report::Report;
use alcoves::rootsys::{build_root_system, gkm_check};
use alcoves::structalg::{all_labels, z_basis};
use alcoves::wallcross::{check_characterization, check_eta, WallCrossing};
use clap::{Args, Parser, Subcommand};

use crate::config::{ConfigError, RunConfig, Settings};

#[derive(Parser, Debug)]
#[command(name = "alcoves", version, about = "Alcove topologies, structure algebras and wall crossing")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// key=value file; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root system type: A1, A2, B2, G2 or A3
    #[arg(long = "type", global = true)]
    ty: Option<String>,
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Inverted coroots: none, all, or a list like a1,a1+a2
    #[arg(long, global = true)]
    inverted: Option<String>,
    /// Window radius
    #[arg(long, global = true)]
    window: Option<i64>,
    #[arg(long, global = true)]
    padding: Option<i64>,
    #[arg(long = "max-deg", global = true)]
    max_deg: Option<i32>,
    /// Write the report here as well as to stdout
    #[arg(long, global = true)]
    report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Root system data and the GKM verdict
    Roots,
    /// Alcove window, its order and optional DOT export
    Order {
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Graded basis of the structure algebra
    Zbasis,
    /// Sections and checks for a serialized presheaf
    Presheaf {
        #[arg(long)]
        object: Option<String>,
    },
    /// Wall crossing of a serialized presheaf
    Wallcross {
        #[arg(long)]
        object: Option<String>,
        /// Index into the affine simple reflections, 0 being the affine one
        #[arg(long)]
        s: Option<usize>,
    },
    /// Run verification suites
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Alcoves(#[from] alcoves::Error),
    #[error("cannot write {0}: {1}")]
    Io(String, std::io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Alcoves(alcoves::Error::Gkm { .. } | alcoves::Error::CheckFailed(_)) => 1,
            CliError::Io(..) => 1,
            _ => 2,
        }
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit code: 0 when every requested check passes, 1 on failed checks, 2 on
/// usage or configuration errors.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            e.exit_code()
        }
    }
}

fn settings(cli: &Cli) -> Result<Settings, ConfigError> {
    let c = &cli.common;
    let mut flags = Settings {
        ty: c.ty.clone(),
        p: c.p,
        inverted: c.inverted.clone(),
        window: c.window,
        padding: c.padding,
        max_deg: c.max_deg,
        report: c.report.clone(),
        ..Default::default()
    };
    match &cli.command {
        Command::Order { dot } => flags.dot = dot.clone(),
        Command::Presheaf { object } => flags.object = object.clone(),
        Command::Wallcross { object, s } => {
            flags.object = object.clone();
            flags.s = *s;
        }
        Command::Verify { suite, seed } => {
            flags.suite = suite.clone();
            flags.seed = *seed;
        }
        Command::Roots | Command::Zbasis => {}
    }
    let base = match &c.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    Ok(flags.over(base))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = RunConfig::resolve(settings(&cli)?)?;
    let mut text = format!("# {}\n", cfg.header());
    let passed = match cli.command {
        Command::Roots => roots(&cfg, &mut text),
        Command::Order { .. } => order(&cfg, &mut text)?,
        Command::Zbasis => zbasis(&cfg, &mut text)?,
        Command::Presheaf { .. } => presheaf(&cfg, &mut text)?,
        Command::Wallcross { .. } => wallcross(&cfg, &mut text)?,
        Command::Verify { .. } => {
            if cfg.suite != "all" && !suites::SUITES.contains(&cfg.suite.as_str()) {
                return Err(CliError::Usage(format!(
                    "unknown suite {}; expected all or one of {}",
                    cfg.suite,
                    suites::SUITES.join(", ")
                )));
            }
            let ring = cfg.ring()?;
            let rep = suites::run_suite(&cfg, &ring, &cfg.suite)?;
            finish(rep, &mut text)
        }
    };
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io("stdout".into(), e))?;
    if let Some(path) = &cfg.report {
        std::fs::write(path, &text).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    }
    Ok(if passed { 0 } else { 1 })
}

fn finish(rep: Report, text: &mut String) -> bool {
    text.push_str(&rep.render());
    let failed = rep.failures().count();
    text.push_str(&format!("# {} checks, {} failed\n", rep.lines.len(), failed));
    failed == 0
}

fn roots(cfg: &RunConfig, text: &mut String) -> bool {
    let rs = build_root_system(cfg.ty);
    text.push_str(&format!("cartan {:?}\n", rs.cartan));
    for a in 0..rs.num_pos_roots() {
        text.push_str(&format!("root {} coroot {:?}\n", rs.root_name(a), rs.coroots[a]));
    }
    text.push_str(&format!("weyl group order {}\n", rs.weyl.order()));
    let gkm = gkm_check(&rs, cfg.p);
    if gkm.holds() {
        text.push_str(&format!("GKM holds over F_{}\n", cfg.p));
    } else {
        text.push_str(&format!("GKM fails over F_{}: {}\n", cfg.p, gkm.describe(&rs)));
    }
    gkm.holds()
}

fn order(cfg: &RunConfig, text: &mut String) -> Result<bool, CliError> {
    let ring = cfg.ring()?;
    let w = Window::radius(&ring, cfg.window, cfg.padding);
    text.push_str(&format!("{} alcoves, base ring {}\n", w.len(), ring));
    for a in 0..w.len() {
        let below: Vec<String> = w.down_cone(a).ones().filter(|&b| b != a).map(|b| w.name(b)).collect();
        text.push_str(&format!("{} > {}\n", w.name(a), below.join(" ")));
    }
    if let Some(path) = &cfg.dot {
        std::fs::write(path, w.to_dot()).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    }
    let mut rep = Report::new();
    rep.check("partial order", w.is_partial_order(), "");
    rep.check(format!("order stable at padding {}", cfg.padding), w.stable, "");
    Ok(finish(rep, text))
}

fn zbasis(cfg: &RunConfig, text: &mut String) -> Result<bool, CliError> {
    let ring = cfg.ring()?;
    let zb = z_basis(&ring, &all_labels(&ring), cfg.max_deg);
    text.push_str(&format!("dims {:?}\n", zb.sections.dims()));
    for (d, piece) in zb.sections.pieces.iter().enumerate() {
        for v in piece.basis() {
            let polys = zb.sections.layout.from_vec(v, d as i32);
            let parts: Vec<String> =
                zb.labels.iter().zip(&polys).map(|(&x, f)| format!("{}: {}", ring.rs.weyl.name(x), f)).collect();
            text.push_str(&format!("deg {d} [{}]\n", parts.join(", ")));
        }
    }
    let mut rep = Report::new();
    rep.check("image of the projection fills the solutions", zb.coincide().iter().all(|&b| b), "");
    Ok(finish(rep, text))
}

fn object(cfg: &RunConfig) -> Result<(Arc<Window>, Presheaf), CliError> {
    let ring = cfg.ring()?;
    let spec: ObjectSpec =
        cfg.object.as_deref().ok_or_else(|| CliError::Usage("--object is required".into()))?.parse()?;
    if cfg.s > ring.rank() {
        return Err(CliError::Usage(format!("--s must be at most {}", ring.rank())));
    }
    let w = Arc::new(Window::s_closed(&ring, cfg.window, cfg.padding, cfg.s));
    let p = spec.build(&w)?;
    Ok((w, p))
}

fn presheaf(cfg: &RunConfig, text: &mut String) -> Result<bool, CliError> {
    let (w, p) = object(cfg)?;
    let opens = w.canonical_opens(&[]);
    text.push_str(&format!("{} over {} opens\n", p.describe(), opens.len()));
    for j in &opens {
        let names: Vec<String> = j.ones().map(|a| w.name(a)).collect();
        text.push_str(&format!("{{{}}} {:?}\n", names.join(" "), p.dims(j, cfg.max_deg)));
    }
    Ok(finish(validate(&p, &opens, cfg.max_deg), text))
}

fn wallcross(cfg: &RunConfig, text: &mut String) -> Result<bool, CliError> {
    let (w, p) = object(cfg)?;
    let wc = WallCrossing::new(&p, cfg.s)?;
    let opens = w.canonical_opens(&[cfg.s]);
    text.push_str(&format!("{} over {} opens\n", wc.theta.describe(), opens.len()));
    for j in &opens {
        let names: Vec<String> = j.ones().map(|a| w.name(a)).collect();
        text.push_str(&format!("{{{}}} {:?}\n", names.join(" "), wc.theta.dims(j, cfg.max_deg)));
    }
    let mut rep = check_characterization(&wc, &opens, cfg.max_deg)?;
    rep.append(check_eta(&wc, &opens, cfg.max_deg)?);
    Ok(finish(rep, text))
}
