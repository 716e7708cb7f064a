use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use merodyn_core::error::DynamicsError;
use merodyn_core::fixed_points::{find_cycles, solve_fixed_points};
use merodyn_core::map::Parameter;
use merodyn_core::orbits::{
    bifurcation_sweep, cobweb, lyapunov, lyapunov_sweep, LimitClassifier, LimitOutcome,
};
use merodyn_core::render::{write_ppm, Palette, PixelState, RasterImage, RenderConfig, Renderer};

use crate::args::*;
use crate::presets;
use crate::records::*;

pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub enum Failure {
    /// Bad flags or values; exit status 2.
    Usage(String),
    /// The computation or the output failed; exit status 1.
    Runtime(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "error: {m}"),
            Failure::Runtime(e) => write!(f, "error: {e:#}"),
        }
    }
}

impl From<DynamicsError> for Failure {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::InvalidParameter(_)
            | DynamicsError::InvalidArgument { .. }
            | DynamicsError::Config(_)
            | DynamicsError::Tolerance { .. }
            | DynamicsError::SeedIsPole(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// A computed result before it is serialised.
#[derive(Debug, Clone, PartialEq)]
pub enum Table {
    FixedPoints(Vec<FixedPointRow>),
    Cycles(Vec<CycleRow>),
    Classify(Vec<ClassifyRow>),
    Lyapunov(Vec<LyapunovRow>),
    Cobweb(Vec<CobwebRow>),
    Bifurcation(Vec<BifurcationRow>),
}

impl Table {
    fn append(&mut self, other: Table) -> Outcome<()> {
        match (self, other) {
            (Table::FixedPoints(a), Table::FixedPoints(b)) => a.extend(b),
            (Table::Cycles(a), Table::Cycles(b)) => a.extend(b),
            (Table::Classify(a), Table::Classify(b)) => a.extend(b),
            (Table::Lyapunov(a), Table::Lyapunov(b)) => a.extend(b),
            (Table::Cobweb(a), Table::Cobweb(b)) => a.extend(b),
            (Table::Bifurcation(a), Table::Bifurcation(b)) => a.extend(b),
            _ => return Err(Failure::Runtime(anyhow!("panels produce different tables"))),
        }
        Ok(())
    }

    fn write(&self, out: &mut Vec<u8>, format: Format, comments: &[String]) -> Outcome<()> {
        macro_rules! emit {
            ($rows:expr) => {
                match format {
                    Format::Csv => write_csv(out, comments, $rows)?,
                    Format::Text => write_text(out, comments, $rows)?,
                    Format::Ppm => {
                        return Err(Failure::Usage(
                            "--format ppm is only valid for julia (valid: csv, text)".into(),
                        ))
                    }
                }
            };
        }
        match self {
            Table::FixedPoints(r) => emit!(r),
            Table::Cycles(r) => emit!(r),
            Table::Classify(r) => emit!(r),
            Table::Lyapunov(r) => emit!(r),
            Table::Cobweb(r) => emit!(r),
            Table::Bifurcation(r) => emit!(r),
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum Artifact {
    Table(Table),
    Image {
        image: RasterImage,
        palette: Palette,
    },
}

fn param(lambda: f64) -> Outcome<Parameter> {
    Parameter::new(lambda).map_err(|_| {
        Failure::Usage(format!(
            "invalid value '{lambda}' for '--lambda' (valid: λ > 0)"
        ))
    })
}

fn seeds(list: &[f64], rule: merodyn_core::orbits::SeedRule) -> Vec<f64> {
    if list.is_empty() {
        vec![rule.seed()]
    } else {
        list.to_vec()
    }
}

fn join(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// `merodyn <cmd> key=value ...` with every resolved setting.
pub fn describe(cmd: &Command) -> String {
    let kv = match cmd {
        Command::FixedPoints(a) => format!("lambda={} tol={:e}", a.lambda, a.tol),
        Command::Cycles(a) => format!(
            "lambda={} period={} interval={},{} grid={} tol={:e}",
            a.lambda, a.period, a.interval.min, a.interval.max, a.grid, a.tol
        ),
        Command::Classify(a) => format!(
            "lambda={} seeds={} max-steps={}",
            a.lambda,
            join(&seeds(&a.seeds, a.seed_rule)),
            a.max_steps
        ),
        Command::Lyapunov(a) => {
            let which = match (a.lambda, a.lambda_range) {
                (Some(l), _) => format!("lambda={l}"),
                (None, Some(r)) => format!("lambda-range={},{} steps={}", r.min, r.max, a.steps),
                (None, None) => String::new(),
            };
            format!(
                "{which} k={} burn-in={} seed-rule={}",
                a.k,
                a.burn_in,
                seed_rule_str(a.seed_rule)
            )
        }
        Command::Cobweb(a) => format!(
            "lambda={} seeds={} n={}",
            a.lambda,
            join(&seeds(&a.seeds, a.seed_rule)),
            a.n
        ),
        Command::Bifurcation(a) => format!(
            "lambda-range={},{} steps={} transient={} samples={} seed-rule={}",
            a.lambda_range.min,
            a.lambda_range.max,
            a.steps,
            a.transient,
            a.samples,
            seed_rule_str(a.seed_rule)
        ),
        Command::Julia(a) => {
            let c = julia_config(a);
            format!(
                "lambda={} window={},{},{},{} n={} width={} height={} escape-bound={:e} conv-eps={:e} mode={} palette={}",
                c.lambda,
                c.window.re_min,
                c.window.re_max,
                c.window.im_min,
                c.window.im_max,
                c.max_iter,
                c.width,
                c.height,
                c.escape_bound,
                c.conv_eps,
                value_name(a.mode),
                value_name(a.palette)
            )
        }
    };
    format!("merodyn {} {kv}", cmd.name())
}

fn value_name<V: clap::ValueEnum>(v: V) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

pub fn julia_config(a: &JuliaArgs) -> RenderConfig {
    RenderConfig {
        lambda: a.lambda,
        window: a.window,
        width: a.width.unwrap_or(a.size),
        height: a.height.unwrap_or(a.size),
        max_iter: a.n,
        escape_bound: a.escape_bound,
        conv_eps: a.conv_eps,
        mode: a.mode.into(),
        palette: a.palette.into(),
    }
}

/// Runs one subcommand and returns its in-memory result.
pub fn compute(cmd: &Command) -> Outcome<Artifact> {
    let table = match cmd {
        Command::FixedPoints(a) => {
            let rows = solve_fixed_points(param(a.lambda)?, a.tol)?
                .into_iter()
                .map(|r| FixedPointRow {
                    location: r.location,
                    stability: r.stability,
                    multiplier: r.multiplier,
                })
                .collect();
            Table::FixedPoints(rows)
        }
        Command::Cycles(a) => {
            let search = find_cycles(
                param(a.lambda)?,
                a.period as usize,
                (a.interval.min, a.interval.max),
                a.grid as usize,
                a.tol,
            )?;
            let rows = search
                .cycles
                .iter()
                .enumerate()
                .flat_map(|(ci, c)| {
                    c.points.iter().enumerate().map(move |(k, &x)| CycleRow {
                        cycle: ci,
                        period: c.period,
                        position: k,
                        point: x,
                        multiplier: c.multiplier,
                        stability: c.stability,
                    })
                })
                .collect();
            Table::Cycles(rows)
        }
        Command::Classify(a) => {
            let c = LimitClassifier::new(param(a.lambda)?, a.max_steps)?;
            let rows = seeds(&a.seeds, a.seed_rule)
                .into_iter()
                .map(|s| {
                    let out = c.classify(s);
                    let period = match &out {
                        LimitOutcome::ToCycle(cy) => Some(cy.period),
                        _ => None,
                    };
                    ClassifyRow {
                        lambda: a.lambda,
                        seed: s,
                        outcome: out.label().into(),
                        period,
                    }
                })
                .collect();
            Table::Classify(rows)
        }
        Command::Lyapunov(a) => {
            let seed = a.seed_rule.seed();
            let row = |l: f64, est: merodyn_core::error::Result<merodyn_core::orbits::LyapunovEstimate>| match est {
                Ok(e) => LyapunovRow {
                    lambda: l,
                    seed,
                    terms_used: e.terms_used,
                    skipped_terms: e.skipped_terms,
                    burn_in: e.burn_in,
                    value: Some(e.value),
                    status: "ok".into(),
                },
                Err(err) => LyapunovRow {
                    lambda: l,
                    seed,
                    terms_used: 0,
                    skipped_terms: 0,
                    burn_in: a.burn_in,
                    value: None,
                    status: err.to_string(),
                },
            };
            let rows = match (a.lambda, a.lambda_range) {
                (Some(l), _) => {
                    let est = lyapunov(param(l)?, seed, a.k as usize, a.burn_in)?;
                    vec![row(l, Ok(est))]
                }
                (None, Some(r)) => {
                    if r.min <= 0.0 {
                        return Err(Failure::Usage(format!(
                            "invalid value '{},{}' for '--lambda-range' (valid: 0 < min < max)",
                            r.min, r.max
                        )));
                    }
                    lyapunov_sweep(
                        r.min,
                        r.max,
                        a.steps as usize,
                        a.seed_rule,
                        a.k as usize,
                        a.burn_in,
                    )?
                    .into_iter()
                    .map(|(l, est)| row(l, est))
                    .collect()
                }
                (None, None) => {
                    return Err(Failure::Usage(
                        "one of --lambda or --lambda-range is required".into(),
                    ))
                }
            };
            Table::Lyapunov(rows)
        }
        Command::Cobweb(a) => {
            let p = param(a.lambda)?;
            let mut rows = Vec::new();
            for s in seeds(&a.seeds, a.seed_rule) {
                let path = cobweb(p, s, a.n)?;
                rows.extend(
                    path.vertices
                        .iter()
                        .enumerate()
                        .map(|(k, &(x, y))| CobwebRow {
                            lambda: a.lambda,
                            seed: s,
                            vertex: k,
                            x,
                            y,
                        }),
                );
            }
            Table::Cobweb(rows)
        }
        Command::Bifurcation(a) => {
            let r = a.lambda_range;
            if r.min <= 0.0 {
                return Err(Failure::Usage(format!(
                    "invalid value '{},{}' for '--lambda-range' (valid: 0 < min < max)",
                    r.min, r.max
                )));
            }
            let records = bifurcation_sweep(
                r.min,
                r.max,
                a.steps as usize,
                a.transient,
                a.samples,
                a.seed_rule,
            )?;
            let rows = records
                .iter()
                .flat_map(|rec| {
                    rec.attractor_samples
                        .iter()
                        .enumerate()
                        .map(|(k, &x)| BifurcationRow {
                            lambda: rec.lambda,
                            sample: k,
                            x,
                        })
                })
                .collect();
            Table::Bifurcation(rows)
        }
        Command::Julia(a) => {
            let cfg = julia_config(a);
            let image = Renderer::new(cfg)?.render();
            return Ok(Artifact::Image {
                image,
                palette: cfg.palette,
            });
        }
    };
    Ok(Artifact::Table(table))
}

pub fn pixel_rows(img: &RasterImage) -> Vec<PixelRow> {
    (0..img.height)
        .flat_map(|r| {
            img.row(r).iter().enumerate().map(move |(c, o)| PixelRow {
                row: r,
                col: c,
                state: o.state.label().into(),
                iterations: o.iterations,
            })
        })
        .collect()
}

fn write_image(
    out: &mut Vec<u8>,
    format: Format,
    comments: &[String],
    image: &RasterImage,
    palette: Palette,
) -> Outcome<()> {
    match format {
        Format::Ppm => write_ppm(image, palette, comments.first().map(String::as_str), out)?,
        Format::Csv => write_csv(out, comments, &pixel_rows(image))?,
        Format::Text => {
            for c in comments {
                writeln!(out, "# {c}")?;
            }
            let count =
                |f: fn(&PixelState) -> bool| image.outcomes.iter().filter(|o| f(&o.state)).count();
            writeln!(out, "pixels {}", image.outcomes.len())?;
            writeln!(
                out,
                "fatou {}",
                count(|s| matches!(s, PixelState::Fatou(_)))
            )?;
            writeln!(out, "julia {}", count(|s| matches!(s, PixelState::Julia)))?;
            writeln!(
                out,
                "undecided {}",
                count(|s| matches!(s, PixelState::Undecided(_)))
            )?;
        }
    }
    Ok(())
}

fn emit(bytes: &[u8], out: Option<&Path>) -> Outcome<()> {
    match out {
        Some(path) => {
            fs::write(path, bytes).map_err(|e| anyhow!("cannot write {}: {e}", path.display()))?
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn default_format(cmd: &Command) -> Format {
    match cmd {
        Command::Julia(_) => Format::Ppm,
        _ => Format::Csv,
    }
}

/// Renders a command's result in `format` into a byte buffer.
pub fn render_command(cmd: &Command, format: Option<Format>) -> Outcome<Vec<u8>> {
    let format = format.unwrap_or_else(|| default_format(cmd));
    if format == Format::Ppm && !matches!(cmd, Command::Julia(_)) {
        return Err(Failure::Usage(
            "--format ppm is only valid for julia (valid: csv, text)".into(),
        ));
    }
    let comments = vec![describe(cmd)];
    let mut buf = Vec::new();
    match compute(cmd)? {
        Artifact::Table(t) => t.write(&mut buf, format, &comments)?,
        Artifact::Image { image, palette } => {
            write_image(&mut buf, format, &comments, &image, palette)?
        }
    }
    Ok(buf)
}

fn run_figure(
    fig: Figure,
    size: Option<usize>,
    format: Option<Format>,
    out: Option<&Path>,
) -> Outcome<()> {
    let panels = presets::panels(fig, size.unwrap_or(merodyn_core::render::DEFAULT_SIZE));
    let images = panels.iter().any(|(_, c)| matches!(c, Command::Julia(_)));
    if images && panels.len() > 1 {
        // one file per panel inside the output directory
        let dir = out
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."));
        fs::create_dir_all(&dir).map_err(|e| anyhow!("cannot create {}: {e}", dir.display()))?;
        let format = format.unwrap_or(Format::Ppm);
        let ext = match format {
            Format::Ppm => "ppm",
            Format::Csv => "csv",
            Format::Text => "txt",
        };
        for (label, cmd) in &panels {
            let bytes = render_command(cmd, Some(format))?;
            emit(&bytes, Some(&dir.join(format!("fig{label}.{ext}"))))?;
        }
        return Ok(());
    }
    if panels.len() == 1 {
        return emit(&render_command(&panels[0].1, format)?, out);
    }
    let format = format.unwrap_or(Format::Csv);
    let mut comments = vec![format!("merodyn figure {}", fig.number)];
    let mut merged: Option<Table> = None;
    for (label, cmd) in &panels {
        comments.push(format!("panel {label}: {}", describe(cmd)));
        let Artifact::Table(t) = compute(cmd)? else {
            unreachable!("image panels are handled above")
        };
        match &mut merged {
            Some(m) => m.append(t)?,
            None => merged = Some(t),
        }
    }
    let mut buf = Vec::new();
    merged
        .expect("figures have panels")
        .write(&mut buf, format, &comments)?;
    emit(&buf, out)
}

fn configure_workers(workers: Option<usize>) -> Outcome<()> {
    if let Some(n) = workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| anyhow!("cannot start {n} workers: {e}"))?;
    }
    Ok(())
}

pub fn run(cli: Cli) -> Outcome<()> {
    configure_workers(cli.workers)?;
    match (cli.figure, &cli.command) {
        (Some(_), Some(cmd)) => Err(Failure::Usage(format!(
            "--figure cannot be combined with the {} subcommand",
            cmd.name()
        ))),
        (Some(fig), None) => run_figure(fig, cli.size, cli.format, cli.out.as_deref()),
        (None, Some(cmd)) => emit(&render_command(cmd, cli.format)?, cli.out.as_deref()),
        (None, None) => Err(Failure::Usage(
            "a subcommand or --figure is required (see --help)".into(),
        )),
    }
}
