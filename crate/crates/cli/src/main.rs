use clap::{Args, Parser, Subcommand};
use photon_green_cli::config::{Format, MetricSpec};
use photon_green_cli::{emit_plot_data, parse_config, run_command, CliError, Command, PlotKind, ResultEnvelope, RunConfig};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "photon-green", version, about = "Photon Green function asymptotics via the heat kernel")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output path, `-` for stdout.
    #[arg(short, long, global = true)]
    output: Option<String>,
    #[arg(long, global = true)]
    metric: Option<String>,
    /// Metric parameter as `key=value`; repeatable.
    #[arg(long = "param", global = true)]
    params: Vec<String>,
    /// Point as four comma-separated coordinates; repeatable.
    #[arg(long = "point", global = true)]
    points: Vec<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    order: Option<i64>,
    #[arg(long = "mu-a", global = true)]
    mu_a: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    Compute {
        #[command(subcommand)]
        what: ComputeCmd,
    },
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
    Coincidence,
    SweepAlpha,
    /// Turn a saved JSON envelope into CSV plot data.
    Plot {
        #[arg(value_enum)]
        kind: PlotKind,
        envelope: PathBuf,
    },
}

#[derive(Subcommand)]
enum ComputeCmd {
    Green,
    StressTensor,
}

#[derive(Subcommand)]
enum CheckCmd {
    GammaIntegrals,
    HeatKernel,
}

fn parse_point(s: &str) -> Result<[f64; 4], CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("bad point {s:?}: {e}")))?;
    v.try_into().map_err(|_| CliError::Usage(format!("point {s:?} needs four coordinates")))
}

fn build_config(c: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = match &c.config {
        Some(p) => parse_config(&std::fs::read_to_string(p)?)?,
        None => RunConfig::default(),
    };
    if c.metric.is_some() || !c.params.is_empty() {
        let name = c.metric.clone().unwrap_or_else(|| cfg.metric.name().to_string());
        let mut params: BTreeMap<String, f64> = cfg.metric.params();
        for kv in &c.params {
            let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Usage(format!("bad param {kv:?}, expected key=value")))?;
            let v = v.trim().parse().map_err(|e| CliError::Usage(format!("bad param {kv:?}: {e}")))?;
            params.insert(k.trim().to_string(), v);
        }
        cfg.metric = MetricSpec::Full { name, params };
    }
    if !c.points.is_empty() {
        cfg.points = c.points.iter().map(|p| parse_point(p)).collect::<Result<_, _>>()?;
    }
    if let Some(a) = c.alpha {
        cfg.alpha = a;
    }
    if let Some(o) = c.order {
        cfg.order = o;
    }
    if let Some(m) = c.mu_a {
        cfg.mu_a = m;
    }
    if let Some(f) = c.format {
        cfg.output.format = f;
    }
    if let Some(o) = &c.output {
        cfg.output.path = o.clone();
    }
    Ok(cfg)
}

fn write_out(path: &str, text: &str) -> Result<(), CliError> {
    if path == "-" {
        std::io::stdout().write_all(text.as_bytes())?;
    } else {
        std::fs::write(path, text)?;
    }
    Ok(())
}

fn render(env: &ResultEnvelope, format: Format) -> Result<String, CliError> {
    match (format, env.primary_table()) {
        (Format::Csv, Some(t)) if env.is_ok() => t.to_csv(),
        _ => serde_json::to_string_pretty(env).map(|s| s + "\n").map_err(|e| CliError::Io(std::io::Error::other(e))),
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let command = match cli.cmd {
        Cmd::Plot { kind, envelope } => {
            let text = std::fs::read_to_string(&envelope)?;
            let env: ResultEnvelope =
                serde_json::from_str(&text).map_err(|e| CliError::Parse { line: Some(e.line()), message: e.to_string() })?;
            let out = cli.common.output.clone().unwrap_or_else(|| "-".into());
            write_out(&out, &emit_plot_data(&env, kind)?)?;
            return Ok(0);
        }
        Cmd::Compute { what: ComputeCmd::Green } => Command::ComputeGreen,
        Cmd::Compute { what: ComputeCmd::StressTensor } => Command::ComputeStressTensor,
        Cmd::Check { what: CheckCmd::GammaIntegrals } => Command::CheckGammaIntegrals,
        Cmd::Check { what: CheckCmd::HeatKernel } => Command::CheckHeatKernel,
        Cmd::Coincidence => Command::Coincidence,
        Cmd::SweepAlpha => Command::SweepAlpha,
    };
    let cfg = build_config(&cli.common)?;
    let env = run_command(command, &cfg);
    write_out(&cfg.output.path, &render(&env, cfg.output.format)?)?;
    Ok(match &env.error {
        None => 0,
        Some(e) if e.code == "VALIDATION_ERROR" || e.code == "PARSE_ERROR" => 2,
        Some(_) => 3,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error [{}]: {e}", e.code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
