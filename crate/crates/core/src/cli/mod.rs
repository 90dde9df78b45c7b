//! Command-line front end.

pub mod config;
pub mod disk_cache;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::cache::SolutionCache;
use crate::error::{HoloError, Result};
use crate::measures::{Interval, MeasureEngine};
use crate::minimal_surface::{strip_solution, Branch};
use crate::rgflow::figures::{check_shape, figure_setups, generate_figure};
use crate::rgflow::{
    evaluate_measure, finite_difference_rate, locate_transition_with, scan_measure_with,
    MeasureKind, ScanOptions, ScanRecord, SweepParameter, SweepSpec,
};

use config::{CommandConfig, FileConfig, GeometryFlags, Overrides, ResolvedConfig};
use disk_cache::DiskCache;
use output::{emit_series, fmt_num, Format};

#[derive(Debug, Parser)]
#[command(
    name = "holoscope",
    version,
    about = "Holographic entanglement measures from minimal surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Entropy of a single interval or strip.
    Entropy(RunArgs),
    /// Mutual information of two intervals.
    Mi(RunArgs),
    /// Negativity proxy 3 E_W / (2 * 4 G_N) of two intervals.
    Negativity(RunArgs),
    /// Tripartite information of three intervals.
    I3(RunArgs),
    /// Sweep a parameter and emit a series.
    Scan(RunArgs),
    /// Locate the phase flip of a measure inside a bracket.
    Transition(RunArgs),
    /// Write the five reference datasets into a directory.
    Figures(RunArgs),
}

impl Command {
    fn parts(&self) -> (&'static str, &RunArgs) {
        match self {
            Command::Entropy(a) => ("entropy", a),
            Command::Mi(a) => ("mi", a),
            Command::Negativity(a) => ("negativity", a),
            Command::I3(a) => ("i3", a),
            Command::Scan(a) => ("scan", a),
            Command::Transition(a) => ("transition", a),
            Command::Figures(a) => ("figures", a),
        }
    }
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect()
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    match parse_list(s)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err("expected two comma-separated numbers".into()),
    }
}

/// `a,b;c,d;...`
fn parse_intervals(s: &str) -> std::result::Result<Vec<Interval>, String> {
    s.split(';')
        .map(|p| {
            let (a, b) = parse_pair(p)?;
            Interval::new(a, b).map_err(|e| e.to_string())
        })
        .collect()
}

fn parse_measures(s: &str) -> std::result::Result<Vec<MeasureKind>, String> {
    s.split(',')
        .map(|t| MeasureKind::parse(t.trim()).map_err(|e| e.to_string()))
        .collect()
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct RunArgs {
    /// JSON configuration document.
    #[arg(long)]
    config: Option<PathBuf>,
    /// pure_ads, black_brane, hard_wall (tabulated via --config).
    #[arg(long)]
    geometry: Option<String>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long = "z-h")]
    z_h: Option<f64>,
    #[arg(long = "z-w")]
    z_w: Option<f64>,
    /// AdS radius L.
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long = "four-g-n")]
    four_g_n: Option<f64>,
    /// UV cutoff.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Cache file; enables the on-disk cache.
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Evaluate sweep points serially.
    #[arg(long)]
    serial: bool,

    #[arg(long)]
    length: Option<f64>,
    /// Interval lengths laid out from the origin, e.g. `1,1`.
    #[arg(long, allow_hyphen_values = true)]
    lengths: Option<String>,
    #[arg(long)]
    gap: Option<f64>,
    /// Explicit intervals, e.g. `0,1;1.1,2.1`.
    #[arg(long, allow_hyphen_values = true)]
    intervals: Option<String>,
    /// gap_size, interval_length, horizon_depth, wall_depth, probe_depth.
    #[arg(long)]
    parameter: Option<String>,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    stop: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Comma-separated: entropy, mi, negativity_proxy, multipartite.
    #[arg(long, alias = "measure")]
    measures: Option<String>,
    /// Measure whose derivative fills the rate column.
    #[arg(long)]
    rate: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    bracket: Option<String>,
}

impl RunArgs {
    fn overrides(&self) -> Result<Overrides> {
        fn flag<T>(
            name: &str,
            v: Option<&str>,
            f: fn(&str) -> std::result::Result<T, String>,
        ) -> Result<Option<T>> {
            v.map(|s| f(s).map_err(|e| HoloError::Config(format!("--{name}: {e}"))))
                .transpose()
        }
        let measures = flag("measures", self.measures.as_deref(), parse_measures)?;
        let rate = match flag("rate", self.rate.as_deref(), parse_measures)?.as_deref() {
            None => None,
            Some([k]) => Some(*k),
            Some(_) => return Err(HoloError::Config("--rate takes a single measure".into())),
        };
        let command = CommandConfig {
            name: None,
            length: self.length,
            intervals: flag("intervals", self.intervals.as_deref(), parse_intervals)?,
            lengths: flag("lengths", self.lengths.as_deref(), parse_list)?,
            gap: self.gap,
            parameter: self
                .parameter
                .as_deref()
                .map(SweepParameter::parse)
                .transpose()?,
            start: self.start,
            stop: self.stop,
            steps: self.steps,
            measure: measures.as_ref().and_then(|m| (m.len() == 1).then(|| m[0])),
            measures,
            bracket: flag("bracket", self.bracket.as_deref(), parse_pair)?,
            rate,
        };
        Ok(Overrides {
            geometry: GeometryFlags {
                kind: self.geometry.clone(),
                d: self.d,
                z_h: self.z_h,
                z_w: self.z_w,
                radius: self.radius,
            },
            cutoff: self.eps,
            four_g_n: self.four_g_n,
            out: self.out.clone(),
            format: self.format.as_deref().map(Format::parse).transpose()?,
            cache: self.cache.clone(),
            seed: self.seed,
            command,
        })
    }
}

/// Runs the front end on `argv` (program name first) and returns the exit
/// code: 0 on success, 2 for invalid input or IO failures, 3 for numerical
/// failures.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(summary) => {
            if !summary.is_empty() {
                println!("{summary}");
            }
            0
        }
        Err(e) => {
            eprintln!("holoscope: {e}");
            e.exit_code()
        }
    }
}

struct Session {
    cfg: ResolvedConfig,
    cache: Option<Arc<SolutionCache>>,
    disk: Option<DiskCache>,
    parallel: bool,
}

impl Session {
    fn open(name: &str, args: &RunArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let cfg = ResolvedConfig::resolve(file, args.overrides()?, name)?;
        let (cache, disk) = if cfg.cache.enabled {
            let cache = Arc::new(SolutionCache::new());
            let path = cfg.cache.path.clone().expect("resolved cache has a path");
            let disk = DiskCache::open(&path, &cache)?;
            (Some(cache), Some(disk))
        } else {
            (None, None)
        };
        Ok(Self {
            cfg,
            cache,
            disk,
            parallel: !args.serial,
        })
    }

    fn engine(&self) -> Result<MeasureEngine> {
        let e = MeasureEngine::new(
            self.cfg.geometry.clone(),
            self.cfg.units,
            self.cfg.quadrature,
        )?;
        Ok(match &self.cache {
            Some(c) => e.with_cache(c.clone()),
            None => e,
        })
    }

    fn options(&self) -> ScanOptions {
        ScanOptions {
            parallel: self.parallel,
            cache: self.cache.clone(),
        }
    }

    fn intervals(&self, n: usize) -> Result<Vec<Interval>> {
        let ivs = self.cfg.command.interval_list()?.ok_or_else(|| {
            HoloError::Config(format!(
                "this command needs {n} intervals (--intervals or --lengths/--gap)"
            ))
        })?;
        if ivs.len() != n {
            return Err(HoloError::Config(format!(
                "expected {n} intervals, got {}",
                ivs.len()
            )));
        }
        Ok(ivs)
    }

    fn sweep(
        &self,
        intervals: Vec<Interval>,
        (start, stop, steps): (f64, f64, usize),
    ) -> Result<SweepSpec> {
        Ok(SweepSpec {
            parameter: self
                .cfg
                .command
                .parameter
                .ok_or_else(|| HoloError::Config("missing --parameter".into()))?,
            start,
            stop,
            steps,
            intervals,
            geometry: self.cfg.geometry.clone(),
            cutoff: self.cfg.cutoff,
            units: self.cfg.units,
            quadrature: self.cfg.quadrature,
        })
    }

    fn write(&self, records: &[ScanRecord], extra: &[String]) -> Result<Option<PathBuf>> {
        let Some(path) = &self.cfg.output.path else {
            return Ok(None);
        };
        let mut meta = self.cfg.metadata()?;
        meta.extend_from_slice(extra);
        emit_series(records, &meta, self.cfg.output.format, path)?;
        Ok(Some(path.clone()))
    }

    fn close(mut self) -> Result<()> {
        if let (Some(disk), Some(cache)) = (self.disk.as_mut(), self.cache.as_ref()) {
            disk.persist(cache)?;
        }
        Ok(())
    }
}

fn written(path: Option<PathBuf>) -> String {
    path.map(|p| format!(" -> {}", p.display()))
        .unwrap_or_default()
}

fn single(parameter_value: f64) -> ScanRecord {
    ScanRecord {
        parameter_value,
        entropy: None,
        mi: None,
        negativity_proxy: None,
        multipartite: None,
        phase: None,
        rate: None,
        error: None,
    }
}

fn run(cli: Cli) -> Result<String> {
    let (name, args) = cli.command.parts();
    let session = Session::open(name, args)?;
    let summary = match name {
        "entropy" => cmd_entropy(&session)?,
        "mi" | "negativity" => cmd_pair(&session, name == "mi")?,
        "i3" => cmd_i3(&session)?,
        "scan" => cmd_scan(&session)?,
        "transition" => cmd_transition(&session)?,
        "figures" => cmd_figures(&session)?,
        _ => unreachable!("clap rejects unknown subcommands"),
    };
    session.close()?;
    Ok(summary)
}

fn cmd_entropy(s: &Session) -> Result<String> {
    let width = match (s.cfg.command.length, s.cfg.command.interval_list()?) {
        (Some(l), _) => l,
        (None, Some(ivs)) if ivs.len() == 1 => ivs[0].length(),
        _ => {
            return Err(HoloError::Config(
                "entropy needs --length or a single interval".into(),
            ))
        }
    };
    let engine = s.engine()?;
    let sol = match s.cfg.geometry.d {
        2 => engine.chord(width, s.cfg.cutoff)?,
        _ => strip_solution(&s.cfg.geometry, width, s.cfg.cutoff, &s.cfg.quadrature)?,
    };
    let entropy = sol.area_reg / s.cfg.units.four_g_n;
    let mut rec = single(width);
    rec.entropy = Some(entropy);
    rec.phase = Some(sol.branch.into());
    let path = s.write(&[rec], &["parameter: interval_length".into()])?;
    let branch = match sol.branch {
        Branch::ConnectedU => "connected_u",
        Branch::WallDisconnected => "wall_disconnected",
    };
    Ok(format!(
        "S = {} (length {}, eps {}, branch {branch}, z* = {}){}",
        fmt_num(entropy),
        fmt_num(width),
        fmt_num(s.cfg.cutoff),
        fmt_num(sol.z_star),
        written(path)
    ))
}

fn cmd_pair(s: &Session, mi: bool) -> Result<String> {
    let ivs = s.intervals(2)?;
    let engine = s.engine()?;
    let (kind, label) = if mi {
        (MeasureKind::Mi, "I")
    } else {
        (MeasureKind::NegativityProxy, "X")
    };
    let v = evaluate_measure(&engine, &ivs, kind, s.cfg.cutoff)?;
    let gap = ivs[1].a - ivs[0].b;
    let mut rec = single(gap);
    match kind {
        MeasureKind::Mi => rec.mi = Some(v.value),
        _ => rec.negativity_proxy = Some(v.value),
    }
    rec.phase = Some(v.phase);
    let path = s.write(&[rec], &["parameter: gap_size".into()])?;
    Ok(format!(
        "{label} = {} ({}){}",
        fmt_num(v.value),
        v.phase.as_str(),
        written(path)
    ))
}

fn cmd_i3(s: &Session) -> Result<String> {
    let ivs = s.intervals(3)?;
    let engine = s.engine()?;
    let i3 = engine.tripartite_information(ivs[0], ivs[1], ivs[2], s.cfg.cutoff)?;
    let m = (-i3).max(0.0);
    let mut rec = single(ivs[1].a - ivs[0].b);
    rec.multipartite = Some(m);
    let path = s.write(&[rec], &["parameter: gap_size".into()])?;
    Ok(format!(
        "I3 = {} (M = {}){}",
        fmt_num(i3),
        fmt_num(m),
        written(path)
    ))
}

fn stdout_series(records: &[ScanRecord], s: &Session, extra: &[String]) -> Result<()> {
    let mut meta = s.cfg.metadata()?;
    meta.extend_from_slice(extra);
    let text = match s.cfg.output.format {
        Format::Csv => output::render_csv(records, &meta)?,
        Format::Json => output::render_json(records)?,
    };
    print!("{text}");
    Ok(())
}

fn cmd_scan(s: &Session) -> Result<String> {
    let c = &s.cfg.command;
    let (start, stop, steps) = match (c.start, c.stop, c.steps) {
        (Some(a), Some(b), Some(n)) => (a, b, n),
        _ => {
            return Err(HoloError::Config(
                "scan needs --start, --stop and --steps".into(),
            ))
        }
    };
    let intervals = c
        .interval_list()?
        .ok_or_else(|| HoloError::Config("scan needs --intervals or --lengths".into()))?;
    let measures = c
        .measures
        .clone()
        .ok_or_else(|| HoloError::Config("scan needs --measures".into()))?;
    let spec = s.sweep(intervals, (start, stop, steps))?;
    let mut records = scan_measure_with(&spec, &measures, &s.options())?;
    if let Some(kind) = c.rate {
        records = finite_difference_rate(&records, kind)?;
    }
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    let extra = vec![format!("parameter: {}", spec.parameter.name())];
    let path = s.write(&records, &extra)?;
    if path.is_none() {
        stdout_series(&records, s, &extra)?;
    }
    let msg = format!(
        "scan {} over [{}, {}]: {} records, {failed} failed{}",
        spec.parameter.name(),
        fmt_num(start),
        fmt_num(stop),
        records.len(),
        written(path)
    );
    if s.cfg.output.path.is_none() {
        // the series itself went to stdout
        eprintln!("{msg}");
        return Ok(String::new());
    }
    Ok(msg)
}

fn cmd_transition(s: &Session) -> Result<String> {
    let c = &s.cfg.command;
    let bracket = c
        .bracket
        .ok_or_else(|| HoloError::Config("transition needs --bracket lo,hi".into()))?;
    let mut cfg = s.cfg.clone();
    cfg.command.parameter.get_or_insert(SweepParameter::GapSize);
    let kind = c.measure.unwrap_or(MeasureKind::Mi);
    let shadow = Session {
        cfg,
        cache: s.cache.clone(),
        disk: None,
        parallel: s.parallel,
    };
    let intervals = shadow
        .cfg
        .command
        .interval_list()?
        .ok_or_else(|| HoloError::Config("transition needs --intervals or --lengths".into()))?;
    let spec = shadow.sweep(intervals, (bracket.0, bracket.1, 2))?;
    let t = locate_transition_with(&spec, kind, bracket, &shadow.options())?;
    Ok(format!(
        "transition of {} along {}: {}",
        kind.name(),
        spec.parameter.name(),
        fmt_num(t)
    ))
}

fn cmd_figures(s: &Session) -> Result<String> {
    let dir = s
        .cfg
        .output
        .path
        .clone()
        .ok_or_else(|| HoloError::Config("figures needs --out DIR".into()))?;
    std::fs::create_dir_all(&dir)?;
    let opts = s.options();
    let mut failures = Vec::new();
    let mut base = s.cfg.metadata()?;
    base.push("negativity_proxy: X = 3 E_W / (2 * 4 G_N), a geometric proxy".into());
    for setup in figure_setups() {
        let name = setup.name;
        let ds = generate_figure(setup, &opts)?;
        let mut meta = base.clone();
        meta.push(format!("figure: {name}"));
        let setup_json = serde_json::to_string(&ds.setup)
            .map_err(|e| HoloError::Config(format!("figure setup does not serialize: {e}")))?;
        meta.push(format!("setup: {setup_json}"));
        let path = dir.join(format!("{name}.{}", s.cfg.output.format.extension()));
        emit_series(&ds.records, &meta, s.cfg.output.format, &path)?;
        if let Err(e) = check_shape(&ds) {
            failures.push(format!("{name}: {e}"));
        }
    }
    if !failures.is_empty() {
        return Err(HoloError::numerics(format!(
            "shape checks failed: {}",
            failures.join("; ")
        )));
    }
    Ok(format!(
        "figures: 5 datasets written to {}, all shape checks pass",
        dir.display()
    ))
}
