use photon_green_cli::config::MetricSpec;
use photon_green_cli::{emit_plot_data, parse_config, run_command, CliError, Command, PlotKind, ResultEnvelope, RunConfig};
use std::f64::consts::PI;
use std::process::Command as Proc;

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_photon-green"))
}

#[test]
fn empty_config_gets_defaults() {
    let cfg = parse_config("").unwrap();
    assert_eq!(cfg, RunConfig::default());
    assert_eq!(cfg.metric.name(), "minkowski");
    assert_eq!(cfg.order, 2);
    assert_eq!(cfg.alpha, 1.0);
}

#[test]
fn full_config_parses() {
    let text = r#"
alpha = 2.0
order = 1
points = [[0.0, 0.0, 0.0, 0.0], [0.1, 0.0, 0.0, 0.0]]

[metric]
name = "s4"
params = { radius = 2.0 }

[ladder]
h = 0.1
depth = 3
"#;
    let cfg = parse_config(text).unwrap();
    assert_eq!(cfg.metric.name(), "s4");
    assert_eq!(cfg.metric.params()["radius"], 2.0);
    assert_eq!(cfg.ladder.depth, 3);
    assert_eq!(cfg.points.len(), 2);
}

#[test]
fn negative_alpha_is_a_validation_error() {
    let err = parse_config("alpha = -1.0").unwrap_err();
    assert_eq!(err.code(), "VALIDATION_ERROR");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn order_above_the_limit_is_rejected() {
    let err = parse_config("order = 7").unwrap_err();
    assert!(matches!(&err, CliError::Validation(v) if v.iter().any(|m| m.contains("order"))));
}

#[test]
fn every_violation_is_reported() {
    match parse_config("alpha = 0.0\norder = -1\nmu_a = 0.0").unwrap_err() {
        CliError::Validation(v) => assert_eq!(v.len(), 3, "{v:?}"),
        e => panic!("{e}"),
    }
}

#[test]
fn syntax_error_carries_a_line() {
    match parse_config("alpha = 1.0\norder = = 2\n").unwrap_err() {
        CliError::Parse { line, .. } => assert_eq!(line, Some(2)),
        e => panic!("{e}"),
    }
    assert_eq!(parse_config("bogus = 1").unwrap_err().code(), "PARSE_ERROR");
}

#[test]
fn unknown_metric_is_reported_in_the_envelope() {
    let cfg = RunConfig { metric: MetricSpec::Name("kerr".into()), ..RunConfig::default() };
    let env = run_command(Command::ComputeGreen, &cfg);
    assert!(!env.is_ok());
    assert_eq!(env.status, "error");
    assert_eq!(env.error.unwrap().code, "METRIC_NOT_FOUND");
}

#[test]
fn gamma_integrals_agree() {
    let env = run_command(Command::CheckGammaIntegrals, &RunConfig::default());
    assert!(env.is_ok(), "{:?}", env.error);
    assert!(env.error_estimates["oscillatory"] < 1e-8);
    assert!(env.error_estimates["incomplete"] < 1e-8);
    assert_eq!(env.tables["oscillatory"].rows.len(), 5);
    assert_eq!(env.tables["incomplete"].rows.len(), 27);
}

#[test]
fn minkowski_leading_coefficient() {
    let env = run_command(Command::ComputeGreen, &RunConfig::default());
    assert!(env.is_ok(), "{:?}", env.error);
    let a = &env.payload["green"]["inverse_sigma"];
    let eta = [1.0, -1.0, -1.0, -1.0];
    for (mu, e) in eta.iter().enumerate() {
        for nu in 0..4 {
            let re = a[mu][nu][0].as_f64().unwrap();
            let im = a[mu][nu][1].as_f64().unwrap();
            let want = if mu == nu { e / (8.0 * PI * PI) } else { 0.0 };
            assert!(re.abs() < 1e-14 && (im - want).abs() < 1e-14, "{mu}{nu}: {re} {im}");
        }
    }
}

#[test]
fn runs_are_deterministic() {
    let cfg = RunConfig { metric: MetricSpec::Name("s4".into()), ..RunConfig::default() };
    for cmd in [Command::ComputeGreen, Command::SweepAlpha, Command::ComputeStressTensor] {
        let mut a = run_command(cmd, &cfg);
        let mut b = run_command(cmd, &cfg);
        a.wall_time_s = 0.0;
        b.wall_time_s = 0.0;
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

#[test]
fn envelope_round_trips() {
    let env = run_command(Command::Coincidence, &RunConfig { metric: MetricSpec::Name("s4".into()), ..RunConfig::default() });
    let back: ResultEnvelope = serde_json::from_str(&serde_json::to_string(&env).unwrap()).unwrap();
    assert_eq!(back, env);
}

#[test]
fn alpha_sweep_plot_has_slope_line() {
    let env = run_command(Command::SweepAlpha, &RunConfig { metric: MetricSpec::Name("s4".into()), ..RunConfig::default() });
    assert!(env.error_estimates["factorization_defect"] < 1e-12);
    let csv = emit_plot_data(&env, PlotKind::AlphaSweep).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("alpha,"));
    assert_eq!(lines.len(), 1 + 5 + 1);
    assert!(lines.last().unwrap().starts_with("# slope"));
}

#[test]
fn missing_plot_table_is_an_error() {
    let env = run_command(Command::CheckGammaIntegrals, &RunConfig::default());
    assert!(emit_plot_data(&env, PlotKind::LadderConvergence).is_err());
}

#[test]
fn binary_writes_csv_and_exit_codes() {
    let out = bin().args(["check", "gamma-integrals", "--format", "csv"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("beta,nu,c,"), "{text}");

    let out = bin().args(["compute", "green", "--alpha", "-1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let env: ResultEnvelope = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(env.error.unwrap().code, "VALIDATION_ERROR");

    let out = bin().args(["compute", "green", "--metric", "kerr"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn binary_plot_from_saved_envelope() {
    let dir = std::env::temp_dir().join(format!("photon-green-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("heat.json");
    let st = bin().args(["check", "heat-kernel", "--metric", "s4", "-o"]).arg(&path).status().unwrap();
    assert!(st.success());
    let out = bin().args(["plot", "residual-vs-tau"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 7);
    std::fs::remove_dir_all(&dir).unwrap();
}
