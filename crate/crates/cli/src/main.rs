//! `qres`: state construction, resource-measure evaluation, channel tools,
//! and experiment reproduction with CSV/JSON/SVG output.

mod emit;
mod svg;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qres_core::channels::{output_max_coherence, random_channel, ChoiDescriptor, ChoiMatrix};
use qres_core::experiments::{
    cat_amplification, eta_tensorization_experiment, lossy_concentration_scan, monotonicity_suite,
    tau_channel_tensorization, tmsv_conditioning, CatConfig, EtaTensorConfig, LossyScanConfig,
    MonoConfig, RunMeta, TauTensorConfig, TmsvConfig,
};
use qres_core::fock::{DensityOperator, StateDescriptor};
use qres_core::gaussian::{
    kappa_classical, kappa_separable_two_mode, nc_depth_gaussian, GaussianDescriptor, GaussianState,
};
use qres_core::measures::{
    max_coherence, metrological_power, nc_depth, predicted_sio_fidelity, qfi_boundary_warning,
    GridSpec,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Io(String),
}

impl From<qres_core::Error> for CliError {
    fn from(e: qres_core::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qres",
    version,
    about = "Tensorizing quantum resource measures: nonclassicality depth, metrological power, maximal coherence, and their channel-output versions"
)]
struct Cli {
    /// Base seed for randomized runs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout if omitted where applicable).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Tolerance override (bisection width for depth measures).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build and inspect Fock-space state descriptors.
    State {
        #[command(subcommand)]
        cmd: StateCmd,
    },
    /// Evaluate a state-level resource measure.
    Measure {
        #[command(subcommand)]
        cmd: MeasureCmd,
    },
    /// Covariance-level Gaussian states and measures.
    Gaussian {
        #[command(subcommand)]
        cmd: GaussianCmd,
    },
    /// Channel tools: sampling and channel-output coherence.
    Channel {
        #[command(subcommand)]
        cmd: ChannelCmd,
    },
    /// Reproduction experiments.
    Exp {
        #[command(subcommand)]
        cmd: ExpCmd,
    },
}

#[derive(Subcommand)]
enum StateCmd {
    /// Write a state descriptor JSON.
    Make {
        #[command(flatten)]
        spec: StateSpec,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print basic properties of a descriptor.
    Show {
        #[arg(long)]
        state: PathBuf,
    },
}

#[derive(Args)]
struct StateSpec {
    /// coherent | cat | fock | lossy-photon
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha_im: f64,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<f64>,
}

#[derive(Subcommand)]
enum MeasureCmd {
    /// Metrological power F₁.
    F1 {
        #[arg(long)]
        state: PathBuf,
    },
    /// Nonclassicality depth bracket.
    Ncdepth {
        #[arg(long)]
        state: PathBuf,
        /// Points per grid axis.
        #[arg(long, default_value_t = 61)]
        grid: usize,
    },
    /// Maximal coherence η and the SIO fidelity prediction.
    Eta {
        #[arg(long)]
        state: PathBuf,
    },
}

#[derive(Subcommand)]
enum GaussianCmd {
    /// Nonclassicality depth max{0, 1/2 − λ_min(V)}.
    Ncdepth {
        #[arg(long)]
        state: PathBuf,
    },
    /// κ against classical states.
    Kappa {
        #[arg(long)]
        state: PathBuf,
    },
    /// Two-mode κ against separable states (PPT bisection).
    KappaSep {
        #[arg(long)]
        state: PathBuf,
    },
    /// Write a Gaussian descriptor (vacuum | thermal | squeezed | tmsv).
    Make {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0.5)]
        r: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        angle: f64,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ChannelCmd {
    /// Sample a Haar-random channel into a Choi descriptor.
    Random {
        #[arg(long)]
        din: usize,
        #[arg(long)]
        dout: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Channel-output maximal coherence η̃ by multi-start search.
    Eta {
        #[arg(long)]
        choi: PathBuf,
        #[arg(long, default_value_t = 32)]
        starts: usize,
    },
}

#[derive(Subcommand)]
enum ExpCmd {
    /// Lossy single-photon concentration scan with threshold location.
    LossyScan {
        #[arg(long, default_value_t = 0.0)]
        qmin: f64,
        #[arg(long, default_value_t = 1.0)]
        qmax: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long, default_value_t = 8)]
        dim: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Cat-state amplification.
    Cat {
        #[arg(long, default_value_t = 3.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        dim: usize,
    },
    /// Tensorization scatter of channel-output coherence over random pairs.
    EtaTensor {
        #[arg(long, default_value_t = 2)]
        da: usize,
        #[arg(long, default_value_t = 2)]
        db: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 32)]
        starts: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Tensorization of channel-output depth for loss pairs.
    TauTensor {
        #[arg(long, default_value_t = 0.8)]
        t1: f64,
        #[arg(long, default_value_t = 0.3)]
        t2: f64,
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
    /// Randomized monotonicity suites.
    Mono {
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
    /// Two-mode squeezed vacuum conditioning.
    Tmsv {
        #[arg(long, default_value_t = 0.5)]
        r: f64,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("QRES_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn load_state(path: &Path) -> Result<DensityOperator, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let desc: StateDescriptor = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(desc.to_density()?)
}

fn load_gaussian(path: &Path) -> Result<GaussianState, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let desc: GaussianDescriptor = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(desc.to_state()?)
}

fn emit_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => emit::write_text(path, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let seed = cli.seed;
    match cli.command {
        Command::State { cmd } => run_state(cmd),
        Command::Measure { cmd } => run_measure(cmd, seed, cli.tol, &cli.out),
        Command::Gaussian { cmd } => run_gaussian(cmd, seed, &cli.out),
        Command::Channel { cmd } => run_channel(cmd, seed, cli.tol, &cli.out),
        Command::Exp { cmd } => run_exp(cmd, seed, cli.tol, cli.format, &cli.out),
    }
}

fn run_state(cmd: StateCmd) -> Result<(), CliError> {
    match cmd {
        StateCmd::Make { spec, out } => {
            let desc = match spec.kind.as_str() {
                "coherent" => StateDescriptor::Coherent {
                    alpha: [spec.alpha_re, spec.alpha_im],
                    dim: spec
                        .dim
                        .ok_or_else(|| CliError::Usage("--dim required".into()))?,
                },
                "cat" => StateDescriptor::Cat {
                    alpha: [spec.alpha_re, spec.alpha_im],
                    dim: spec
                        .dim
                        .ok_or_else(|| CliError::Usage("--dim required".into()))?,
                },
                "fock" => StateDescriptor::Fock {
                    n: spec
                        .n
                        .ok_or_else(|| CliError::Usage("--n required".into()))?,
                    dim: spec
                        .dim
                        .ok_or_else(|| CliError::Usage("--dim required".into()))?,
                },
                "lossy-photon" => StateDescriptor::LossyPhoton {
                    q: spec
                        .q
                        .ok_or_else(|| CliError::Usage("--q required".into()))?,
                    dim: spec.dim,
                },
                other => return Err(CliError::Usage(format!("unknown state kind '{other}'"))),
            };
            // validate before writing
            desc.to_density()?;
            emit::write_text(
                &out,
                &serde_json::to_string_pretty(&desc).expect("descriptor"),
            )?;
            eprintln!("wrote {}", out.display());
            Ok(())
        }
        StateCmd::Show { state } => {
            let rho = load_state(&state)?;
            println!(
                "dims: {:?}\ntrace: {:.12}\npurity: {:.12}\nmean photon: {:.12}",
                rho.dims(),
                rho.trace(),
                rho.purity(),
                rho.mean_photon_total()
            );
            Ok(())
        }
    }
}

fn run_measure(
    cmd: MeasureCmd,
    seed: u64,
    tol: Option<f64>,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    match cmd {
        MeasureCmd::F1 { state } => {
            let rho = load_state(&state)?;
            if qfi_boundary_warning(&rho) {
                eprintln!(
                    "warning: state support touches the truncation boundary; F1 is unreliable"
                );
            }
            let value = metrological_power(&rho)?;
            let config = serde_json::json!({"measure": "f1", "state": state.display().to_string()});
            let meta = RunMeta::new("measure_f1", seed, &config);
            emit_or_print(
                out,
                &emit::result_json(&meta, &config, &[("f1", value)], &[]),
            )
        }
        MeasureCmd::Ncdepth { state, grid } => {
            let rho = load_state(&state)?;
            let spec = GridSpec {
                points_per_axis: grid,
                ..GridSpec::default()
            };
            let tol = tol.unwrap_or(1e-3);
            let est = nc_depth(&rho, &spec, tol)?;
            let config = serde_json::json!({
                "measure": "ncdepth",
                "state": state.display().to_string(),
                "grid_points": grid,
                "tol": tol,
            });
            let meta = RunMeta::new("measure_ncdepth", seed, &config);
            emit_or_print(
                out,
                &emit::result_json(
                    &meta,
                    &config,
                    &[("lower", est.lower), ("upper", est.upper)],
                    &[],
                ),
            )
        }
        MeasureCmd::Eta { state } => {
            let rho = load_state(&state)?;
            let eta = max_coherence(&rho);
            let pred = predicted_sio_fidelity(&rho);
            let config =
                serde_json::json!({"measure": "eta", "state": state.display().to_string()});
            let meta = RunMeta::new("measure_eta", seed, &config);
            emit_or_print(
                out,
                &emit::result_json(
                    &meta,
                    &config,
                    &[("eta", eta), ("predicted_sio_fidelity", pred.fidelity)],
                    &[("sio_distillable", pred.distillable.to_string())],
                ),
            )
        }
    }
}

fn run_gaussian(cmd: GaussianCmd, seed: u64, out: &Option<PathBuf>) -> Result<(), CliError> {
    match cmd {
        GaussianCmd::Ncdepth { state } => {
            let g = load_gaussian(&state)?;
            let config = serde_json::json!({"measure": "gaussian_ncdepth", "state": state.display().to_string()});
            let meta = RunMeta::new("gaussian_ncdepth", seed, &config);
            emit_or_print(
                out,
                &emit::result_json(&meta, &config, &[("ncdepth", nc_depth_gaussian(&g))], &[]),
            )
        }
        GaussianCmd::Kappa { state } => {
            let g = load_gaussian(&state)?;
            let config = serde_json::json!({"measure": "gaussian_kappa", "state": state.display().to_string()});
            let meta = RunMeta::new("gaussian_kappa", seed, &config);
            emit_or_print(
                out,
                &emit::result_json(&meta, &config, &[("kappa", kappa_classical(&g))], &[]),
            )
        }
        GaussianCmd::KappaSep { state } => {
            let g = load_gaussian(&state)?;
            let value = kappa_separable_two_mode(&g)?;
            let config = serde_json::json!({"measure": "gaussian_kappa_sep", "state": state.display().to_string()});
            let meta = RunMeta::new("gaussian_kappa_sep", seed, &config);
            emit_or_print(
                out,
                &emit::result_json(&meta, &config, &[("kappa_sep", value)], &[]),
            )
        }
        GaussianCmd::Make {
            kind,
            r,
            angle,
            delta,
            out,
        } => {
            let g = match kind.as_str() {
                "vacuum" => GaussianState::vacuum(1),
                "thermal" => GaussianState::thermal(delta),
                "squeezed" => GaussianState::squeezed_vacuum(r, angle),
                "tmsv" => GaussianState::squeezed_vacuum(r, 0.0)
                    .tensor(&GaussianState::squeezed_vacuum(
                        r,
                        std::f64::consts::FRAC_PI_2,
                    ))
                    .apply_symplectic(&qres_core::gaussian::bs_symplectic(
                        std::f64::consts::FRAC_PI_4,
                    )),
                other => return Err(CliError::Usage(format!("unknown gaussian kind '{other}'"))),
            };
            let desc = GaussianDescriptor::from_state(&g);
            emit::write_text(
                &out,
                &serde_json::to_string_pretty(&desc).expect("descriptor"),
            )?;
            eprintln!("wrote {}", out.display());
            Ok(())
        }
    }
}

fn run_channel(
    cmd: ChannelCmd,
    seed: u64,
    tol: Option<f64>,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    match cmd {
        ChannelCmd::Random {
            din,
            dout,
            rank,
            out,
        } => {
            let choi = random_channel(din, dout, rank, seed)?;
            let desc = ChoiDescriptor::from_choi(&choi);
            emit::write_text(&out, &serde_json::to_string(&desc).expect("descriptor"))?;
            eprintln!("wrote {}", out.display());
            Ok(())
        }
        ChannelCmd::Eta { choi, starts } => {
            let text = std::fs::read_to_string(&choi)
                .map_err(|e| CliError::Usage(format!("{}: {e}", choi.display())))?;
            let desc: ChoiDescriptor = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", choi.display())))?;
            let chan: ChoiMatrix = desc.to_choi()?;
            let tol = tol.unwrap_or(1e-8);
            let report = output_max_coherence(&chan, starts, seed, tol);
            let config = serde_json::json!({
                "choi": choi.display().to_string(),
                "starts": starts,
                "tolerance": tol,
            });
            let meta = RunMeta::new("channel_eta", seed, &config);
            emit_or_print(
                out,
                &emit::result_json(
                    &meta,
                    &config,
                    &[
                        ("eta_tilde", report.best_value),
                        ("start_spread", report.start_spread()),
                        ("predicted_sio_fidelity", (1.0 + report.best_value) / 2.0),
                    ],
                    &[
                        ("best_input_rank", report.best_input_rank.to_string()),
                        ("starts", report.starts.to_string()),
                        (
                            "unconverged_starts",
                            report.unconverged_starts().to_string(),
                        ),
                    ],
                ),
            )
        }
    }
}

fn run_exp(
    cmd: ExpCmd,
    seed: u64,
    tol: Option<f64>,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    match cmd {
        ExpCmd::LossyScan {
            qmin,
            qmax,
            steps,
            dim,
            svg,
        } => {
            let config = LossyScanConfig {
                q_min: qmin,
                q_max: qmax,
                steps,
                dim,
                depth_tol: tol.unwrap_or(5e-3),
                ..LossyScanConfig::default()
            };
            let report = lossy_concentration_scan(&config, seed)?;
            eprintln!("q* = {:.5}", report.q_star);
            if let Some(svg_path) = svg {
                let fig = svg::Plot {
                    title: "lossy single-photon concentration",
                    x_label: "q",
                    y_label: "metrological power",
                    series: vec![
                        svg::Series {
                            name: "F1(rho_loss)",
                            points: report.records.iter().map(|r| (r.q, r.f1_in)).collect(),
                            color: "black",
                            line: true,
                        },
                        svg::Series {
                            name: "F1(sigma_out)",
                            points: report.records.iter().map(|r| (r.q, r.f1_out)).collect(),
                            color: "red",
                            line: true,
                        },
                        svg::Series {
                            name: "P*F1(sigma_out)",
                            points: report.records.iter().map(|r| (r.q, r.p_f1_out)).collect(),
                            color: "green",
                            line: true,
                        },
                    ],
                    diagonal: false,
                };
                emit::write_text(&svg_path, &fig.render())?;
            }
            write_records_with(
                out,
                format,
                &report.meta,
                &report.config,
                &[("q_star", emit::f64_17(report.q_star))],
                &report.records,
            )
        }
        ExpCmd::Cat { alpha, dim } => {
            let report = cat_amplification(&CatConfig { alpha, dim }, seed)?;
            write_records(out, format, &report.meta, &report.config, &[report.record])
        }
        ExpCmd::EtaTensor {
            da,
            db,
            trials,
            starts,
            svg,
        } => {
            let config = EtaTensorConfig {
                d_a: da,
                d_b: db,
                trials,
                starts,
                ..EtaTensorConfig::default()
            };
            let report = eta_tensorization_experiment(&config, seed)?;
            eprintln!(
                "max excess = {:.2e}, within 5e-3: {:.1}%",
                report.max_excess,
                100.0 * report.within_5e3
            );
            if let Some(svg_path) = svg {
                let fig = svg::Plot {
                    title: "channel-output coherence tensorization",
                    x_label: "max(eta_A, eta_B)",
                    y_label: "eta(A x B)",
                    series: vec![svg::Series {
                        name: "channel pairs",
                        points: report
                            .records
                            .iter()
                            .map(|r| (r.eta_max, r.eta_joint))
                            .collect(),
                        color: "blue",
                        line: false,
                    }],
                    diagonal: true,
                };
                emit::write_text(&svg_path, &fig.render())?;
            }
            write_records(out, format, &report.meta, &report.config, &report.records)
        }
        ExpCmd::TauTensor { t1, t2, dim } => {
            let config = TauTensorConfig {
                t1,
                t2,
                dim,
                depth_tol: tol.unwrap_or(5e-3),
                ..TauTensorConfig::default()
            };
            let report = tau_channel_tensorization(&config, seed)?;
            write_records(out, format, &report.meta, &report.config, &[report.record])
        }
        ExpCmd::Mono { trials } => {
            let config = MonoConfig {
                trials,
                ..MonoConfig::default()
            };
            let report = monotonicity_suite(&config, seed)?;
            let verdict = if report.pass { "PASS" } else { "FAIL" };
            eprintln!(
                "{verdict}: {} violations in {trials} trials",
                report.violations.len()
            );
            let meta = RunMeta::new("monotonicity_suite", seed, &config);
            let summary = emit::result_json(
                &meta,
                &config,
                &[("violations", report.violations.len() as f64)],
                &[
                    ("pass", report.pass.to_string()),
                    ("fock_tau_trials", report.fock_tau_trials.to_string()),
                    ("fock_f1_trials", report.fock_f1_trials.to_string()),
                    ("gaussian_trials", report.gaussian_trials.to_string()),
                ],
            );
            emit_or_print(out, &summary)?;
            if !report.pass {
                return Err(CliError::Domain("monotonicity violations detected".into()));
            }
            Ok(())
        }
        ExpCmd::Tmsv { r } => {
            let config = TmsvConfig {
                r,
                depth_tol: tol.unwrap_or(1e-2),
                ..TmsvConfig::default()
            };
            let report = tmsv_conditioning(&config, seed)?;
            write_records(out, format, &report.meta, &report.config, &[report.record])
        }
    }
}

fn write_records<R: serde::Serialize, C: serde::Serialize>(
    out: &Option<PathBuf>,
    format: Format,
    meta: &RunMeta,
    config: &C,
    records: &[R],
) -> Result<(), CliError> {
    write_records_with(out, format, meta, config, &[], records)
}

fn write_records_with<R: serde::Serialize, C: serde::Serialize>(
    out: &Option<PathBuf>,
    format: Format,
    meta: &RunMeta,
    config: &C,
    extras: &[(&str, String)],
    records: &[R],
) -> Result<(), CliError> {
    match out {
        Some(path) => match format {
            Format::Csv => emit::write_csv(path, meta, config, extras, records),
            Format::Json => emit::write_json_records(path, meta, config, records),
        },
        None => {
            if records.is_empty() {
                return Err(CliError::Usage("no records to emit".into()));
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "experiment": meta.experiment,
                    "version": meta.version,
                    "seed": meta.seed,
                    "config_hash": meta.config_hash,
                    "records": records,
                }))
                .expect("records serialize")
            );
            Ok(())
        }
    }
}
