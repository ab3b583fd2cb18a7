mod inputs;
mod manifest;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use scopt::arch::build_accelerator;
use scopt::optics::{self, DrInterpretation, LaserBudget, OpticalLinkParams, SolveConfig, SweepRow};
use scopt::sc::{measure_vdp_error, AdcModel, ErrorStats, PrecisionConfig, WeightSigns};
use scopt::sim::functional::{crosscheck_layer, CrossCheck};
use scopt::sim::{self, map_network, simulate};
use scopt::workload::{bundled, tensor_stats, KernelScope};

use inputs::Inputs;
use manifest::{ManifestCore, RunManifest, TOOL_VERSION};
use output::{csv_from_rows, emit, sig3, Artifact, Format};

#[derive(Parser)]
#[command(name = "scopt", version, about = "Stochastic optical CNN accelerator models")]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory for output files. Without it the main result goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory searched for `<name>.json` accelerator presets.
    #[arg(long, global = true, env = "SCOPT_PRESET_DIR")]
    preset_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Photodetector sensitivity, maximum VDPE size and laser budget.
    Solve(SolveArgs),
    /// Kernel counts by flattened size.
    Stats(StatsArgs),
    /// Dot-product error study on random vectors.
    Functional(FunctionalArgs),
    /// One network on one accelerator.
    Simulate(SimulateArgs),
    /// Every network on every accelerator, with ratios.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DrChoice {
    #[value(name = "br-times-2pow-b")]
    BrTimes2powB,
    BrOnly,
    Both,
}

#[derive(Args)]
struct SolveArgs {
    /// Optical link parameter file.
    #[arg(long, conflicts_with = "preset")]
    params: Option<PathBuf>,
    #[arg(long, value_parser = ["table-iii"])]
    preset: Option<String>,
    /// Operand precision.
    #[arg(long = "B", default_value_t = 8)]
    bits: u32,
    /// Stochastic bitrate, Gb/s.
    #[arg(long = "BR", default_value_t = 30.0)]
    bitrate_gbps: f64,
    #[arg(long, default_value_t = 1.0)]
    b_res_target: f64,
    /// Use this photodetector sensitivity (dBm) instead of solving for it.
    #[arg(long, allow_negative_numbers = true)]
    pin_ppd: Option<f64>,
    #[arg(long, value_enum, default_value_t = DrChoice::BrTimes2powB)]
    dr_interpretation: DrChoice,
    /// Fixed VDPE count per VDPC; by default it equals N.
    #[arg(long)]
    m_fixed: Option<u32>,
    /// Include the laser wall-plug efficiency in the budget.
    #[arg(long)]
    wall_plug: bool,
    /// Emit a grid over --sweep-bits and --sweep-br.
    #[arg(long)]
    sweep: bool,
    #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
    sweep_bits: Vec<u32>,
    /// Gb/s.
    #[arg(long, value_delimiter = ',', default_value = "10,20,30,40")]
    sweep_br: Vec<f64>,
}

#[derive(Args)]
struct StatsArgs {
    /// Network files or bundled names; all bundled networks when omitted.
    networks: Vec<String>,
    #[arg(long, default_value_t = 44)]
    threshold: u64,
    #[arg(long, value_enum, default_value_t = ScopeArg::ConvOnly)]
    scope: ScopeArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScopeArg {
    ConvOnly,
    ConvAndFc,
}

impl From<ScopeArg> for KernelScope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::ConvOnly => KernelScope::ConvOnly,
            ScopeArg::ConvAndFc => KernelScope::ConvAndFc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum OnOff {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SignsArg {
    Positive,
    Mixed,
}

#[derive(Args)]
struct FunctionalArgs {
    #[arg(long, default_value_t = 176)]
    length: usize,
    #[arg(long = "B", default_value_t = 8)]
    bits: u32,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = OnOff::On)]
    adc: OnOff,
    #[arg(long, value_enum, default_value_t = SignsArg::Positive)]
    signs: SignsArg,
}

#[derive(Args)]
struct SimulateArgs {
    /// Network file or bundled name.
    #[arg(long)]
    network: String,
    /// Accelerator file or preset name.
    #[arg(long, default_value = "sconna-paper")]
    accelerator: String,
    /// Peripheral cost file.
    #[arg(long)]
    costs: Option<PathBuf>,
    /// VDPE size used for mapping; defaults to the accelerator's N.
    #[arg(long = "n")]
    n: Option<u32>,
    /// Layers to cross-check against exact integer arithmetic.
    #[arg(long, value_delimiter = ',')]
    crosscheck: Vec<String>,
    #[arg(long, default_value_t = 64)]
    crosscheck_points: usize,
}

#[derive(Args)]
struct CompareArgs {
    /// Network files or bundled names; all bundled networks when omitted.
    #[arg(long = "network")]
    networks: Vec<String>,
    /// Accelerator files or preset names; all presets when omitted.
    #[arg(long = "accelerator")]
    accelerators: Vec<String>,
    #[arg(long)]
    costs: Option<PathBuf>,
}

struct Run {
    command: &'static str,
    settings: BTreeMap<String, Value>,
    inputs: Inputs,
    artifacts: Vec<Artifact>,
    /// Printed to stdout after the files are written.
    table: Option<String>,
    /// Set when outputs were produced but the run should still fail.
    failure: Option<String>,
}

impl Run {
    fn new(command: &'static str) -> Self {
        Self {
            command,
            settings: BTreeMap::new(),
            inputs: Inputs::default(),
            artifacts: Vec::new(),
            table: None,
            failure: None,
        }
    }

    fn set(&mut self, key: &str, value: impl Serialize) {
        self.settings.insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let mut r = match &cli.command {
        Command::Solve(a) => solve(a, cli.format)?,
        Command::Stats(a) => stats(a, cli.format)?,
        Command::Functional(a) => functional(a, cli.seed, cli.format)?,
        Command::Simulate(a) => simulate_cmd(a, cli)?,
        Command::Compare(a) => compare_cmd(a, cli)?,
    };
    r.set("format", cli.format);
    let core = ManifestCore {
        command: r.command.into(),
        settings: r.settings,
        inputs: r.inputs.records,
        presets: r.inputs.presets,
        seed: cli.seed,
        tool_version: TOOL_VERSION.into(),
    };
    let manifest = RunManifest::new(core, cli.out.as_ref().map(|p| p.display().to_string()));
    if emit(cli.out.as_ref(), &manifest, &r.artifacts)? {
        if let Some(t) = &r.table {
            print!("{t}");
        }
        println!("wrote {} files to {}", r.artifacts.len() + 1, cli.out.as_ref().unwrap().display());
    } else if let Some(t) = &r.table {
        eprint!("{t}");
    }
    match r.failure {
        Some(msg) => Err(anyhow!(msg)),
        None => Ok(()),
    }
}

fn pick<T: Serialize>(format: Format, name: &str, json: &T, csv: String) -> Vec<Artifact> {
    let (j, c) = (Artifact::json(format!("{name}.json"), json), Artifact::csv(format!("{name}.csv"), csv));
    match format {
        Format::Json => vec![j.primary(), c],
        Format::Csv => vec![j, c.primary()],
    }
}

#[derive(Serialize)]
struct SolveReport {
    dr_interpretation: DrInterpretation,
    #[serde(rename = "B")]
    bits: u32,
    #[serde(rename = "BR")]
    bitrate: f64,
    #[serde(rename = "DR")]
    data_rate: f64,
    /// Solved sensitivity; absent when pinned.
    p_pd_solved_dbm: Option<f64>,
    p_pd_dbm: f64,
    #[serde(rename = "N_max")]
    n_max: u32,
    /// Budget at `N_max`, or at `N = 1` when nothing fits.
    ledger: LaserBudget,
}

#[derive(Serialize)]
struct SolveRow {
    dr_interpretation: DrInterpretation,
    #[serde(rename = "B")]
    bits: u32,
    #[serde(rename = "BR")]
    bitrate: f64,
    #[serde(rename = "DR")]
    data_rate: f64,
    #[serde(rename = "P_pd_dbm")]
    p_pd_dbm: Option<f64>,
    #[serde(rename = "N_max")]
    n_max: Option<u32>,
    #[serde(rename = "P_laser_required_dbm")]
    p_laser_required_dbm: Option<f64>,
}

impl SolveRow {
    fn from_sweep(dr: DrInterpretation, s: SweepRow) -> Self {
        Self {
            dr_interpretation: dr,
            bits: s.bits,
            bitrate: s.bitrate,
            data_rate: s.data_rate,
            p_pd_dbm: s.p_pd_dbm,
            n_max: s.n_max,
            p_laser_required_dbm: s.p_laser_required_dbm,
        }
    }
}

fn solve(a: &SolveArgs, format: Format) -> Result<Run> {
    let mut r = Run::new("solve");
    let params = match &a.params {
        Some(p) => {
            let text = r.inputs.text(p)?;
            OpticalLinkParams::from_json_str(&text).with_context(|| format!("invalid parameters {}", p.display()))?
        }
        None => {
            r.inputs.presets.push(a.preset.clone().unwrap_or_else(|| "table-iii".into()));
            OpticalLinkParams::default()
        }
    };
    let interpretations = match a.dr_interpretation {
        DrChoice::BrTimes2powB => vec![DrInterpretation::BrTimes2powB],
        DrChoice::BrOnly => vec![DrInterpretation::BrOnly],
        DrChoice::Both => vec![DrInterpretation::BrTimes2powB, DrInterpretation::BrOnly],
    };
    let base = SolveConfig {
        bits: a.bits,
        bitrate: a.bitrate_gbps * 1e9,
        b_res_target: a.b_res_target,
        dr_interpretation: interpretations[0],
        m_equals_n: a.m_fixed.is_none(),
        m_fixed: a.m_fixed,
        wall_plug: a.wall_plug,
    };
    r.set("B", a.bits);
    r.set("BR_gbps", a.bitrate_gbps);
    r.set("b_res_target", a.b_res_target);
    r.set("pin_ppd_dbm", a.pin_ppd);
    r.set("dr_interpretation", &interpretations);
    r.set("m_fixed", a.m_fixed);
    r.set("wall_plug", a.wall_plug);
    base.validate()?;

    if a.sweep {
        r.set("sweep_bits", &a.sweep_bits);
        r.set("sweep_br_gbps", &a.sweep_br);
        let brs: Vec<f64> = a.sweep_br.iter().map(|g| g * 1e9).collect();
        let mut rows = Vec::new();
        for &dr in &interpretations {
            let cfg = SolveConfig {
                dr_interpretation: dr,
                ..base.clone()
            };
            match a.pin_ppd {
                None => rows.extend(optics::sweep(&cfg, &params, &a.sweep_bits, &brs)?.into_iter().map(|s| SolveRow::from_sweep(dr, s))),
                Some(p) => {
                    for &b in &a.sweep_bits {
                        for &br in &brs {
                            let c = SolveConfig {
                                bits: b,
                                bitrate: br,
                                ..cfg.clone()
                            };
                            let n = optics::max_supported_n(&c, &params, p)?;
                            let laser = if n > 0 {
                                Some(optics::laser_power_required(n, c.m_fixed.unwrap_or(n), p, &params, c.wall_plug)?.total_dbm)
                            } else {
                                None
                            };
                            rows.push(SolveRow {
                                dr_interpretation: dr,
                                bits: b,
                                bitrate: br,
                                data_rate: c.data_rate(),
                                p_pd_dbm: Some(p),
                                n_max: Some(n),
                                p_laser_required_dbm: laser,
                            });
                        }
                    }
                }
            }
        }
        let csv = csv_from_rows(&rows)?;
        r.artifacts = pick(format, "sweep", &rows, csv);
        return Ok(r);
    }

    let mut reports = Vec::new();
    for &dr in &interpretations {
        let cfg = SolveConfig {
            dr_interpretation: dr,
            ..base.clone()
        };
        let solved = match a.pin_ppd {
            Some(_) => None,
            None => Some(optics::solve_pd_sensitivity(&cfg, &params)?),
        };
        let p_pd = a.pin_ppd.or(solved).expect("pinned or solved");
        let n_max = optics::max_supported_n(&cfg, &params, p_pd)?;
        let at = n_max.max(1);
        let ledger = optics::laser_power_required(at, a.m_fixed.unwrap_or(at), p_pd, &params, a.wall_plug)?;
        reports.push(SolveReport {
            dr_interpretation: dr,
            bits: cfg.bits,
            bitrate: cfg.bitrate,
            data_rate: cfg.data_rate(),
            p_pd_solved_dbm: solved,
            p_pd_dbm: p_pd,
            n_max,
            ledger,
        });
    }
    let rows: Vec<SolveRow> = reports
        .iter()
        .map(|s| SolveRow {
            dr_interpretation: s.dr_interpretation,
            bits: s.bits,
            bitrate: s.bitrate,
            data_rate: s.data_rate,
            p_pd_dbm: Some(s.p_pd_dbm),
            n_max: Some(s.n_max),
            p_laser_required_dbm: (s.n_max > 0).then_some(s.ledger.total_dbm),
        })
        .collect();
    let mut table = String::new();
    for s in &reports {
        table.push_str(&format!(
            "{}: P_pd {} dBm, N_max {}\n",
            serde_json::to_value(s.dr_interpretation)?.as_str().unwrap_or_default(),
            sig3(s.p_pd_dbm),
            s.n_max
        ));
        for t in &s.ledger.terms {
            table.push_str(&format!("  {:<28} {:>10.4}\n", t.name, t.db));
        }
        table.push_str(&format!("  {:<28} {:>10.4} dBm (available {} dBm)\n", "total", s.ledger.total_dbm, params.p_laser_dbm));
        if s.n_max == 0 {
            r.failure = Some(format!(
                "laser budget infeasible: N = 1 needs {:.4} dBm, laser provides {} dBm",
                s.ledger.total_dbm, params.p_laser_dbm
            ));
        }
    }
    let ledger_rows: Vec<_> = reports
        .iter()
        .flat_map(|s| {
            s.ledger.terms.iter().map(move |t| LedgerRow {
                dr_interpretation: s.dr_interpretation,
                n: s.ledger.n,
                term: t.name,
                db: t.db,
            })
        })
        .collect();
    let mut artifacts = pick(format, "solve", &reports, csv_from_rows(&rows)?);
    artifacts.push(Artifact::csv("ledger.csv", csv_from_rows(&ledger_rows)?));
    r.artifacts = artifacts;
    r.table = Some(table);
    Ok(r)
}

#[derive(Serialize)]
struct LedgerRow {
    dr_interpretation: DrInterpretation,
    n: u32,
    term: &'static str,
    db: f64,
}

#[derive(Serialize)]
struct StatsRow {
    network: String,
    threshold: u64,
    at_or_below: u64,
    above: u64,
    total: u64,
}

fn stats(a: &StatsArgs, format: Format) -> Result<Run> {
    let mut r = Run::new("stats");
    let names: Vec<String> = if a.networks.is_empty() {
        bundled::ALL.iter().map(|(n, _)| n.to_string()).collect()
    } else {
        a.networks.clone()
    };
    r.set("threshold", a.threshold);
    r.set("scope", KernelScope::from(a.scope));
    let mut rows = Vec::new();
    for n in &names {
        let net = r.inputs.network(n)?;
        let s = tensor_stats(&net, a.threshold, a.scope.into());
        rows.push(StatsRow {
            network: net.name.clone(),
            threshold: s.threshold,
            at_or_below: s.at_or_below,
            above: s.above,
            total: s.total(),
        });
    }
    let csv = csv_from_rows(&rows)?;
    r.artifacts = pick(format, "stats", &rows, csv);
    Ok(r)
}

#[derive(Serialize)]
struct FunctionalReport {
    trials: usize,
    length: usize,
    #[serde(rename = "B")]
    bits: u32,
    seed: u64,
    adc: OnOff,
    signs: WeightSigns,
    rounding_only: ErrorStats,
    with_adc: Option<ErrorStats>,
    /// Converter MAPE over a uniform sweep of every charge level.
    adc_sweep_mape: Option<f64>,
}

#[derive(Serialize)]
struct FunctionalRow {
    mode: &'static str,
    trials: usize,
    length: usize,
    #[serde(rename = "B")]
    bits: u32,
    mape: f64,
    mean_abs_error: f64,
    max_abs_error: f64,
    mape_trials: usize,
}

fn functional(a: &FunctionalArgs, seed: u64, format: Format) -> Result<Run> {
    let mut r = Run::new("functional");
    let signs = match a.signs {
        SignsArg::Positive => WeightSigns::Positive,
        SignsArg::Mixed => WeightSigns::Mixed,
    };
    r.set("length", a.length);
    r.set("B", a.bits);
    r.set("trials", a.trials);
    r.set("adc", a.adc);
    r.set("signs", signs);
    if a.trials == 0 {
        bail!("trials must be at least 1");
    }
    if a.length == 0 {
        bail!("length must be at least 1");
    }
    let precision = PrecisionConfig::new(a.bits)?;
    let adc = AdcModel {
        noise_seed: seed,
        ..AdcModel::for_vdpe(a.length, a.bits)
    };
    let rep = measure_vdp_error(a.trials, a.length, precision, &adc, seed, signs)?;
    let on = a.adc == OnOff::On;
    let sweep_mape = on.then(|| scopt::sc::adc::sweep_mape(&adc, adc.full_scale_counts as usize, Some(seed)));
    let report = FunctionalReport {
        trials: rep.trials,
        length: rep.length,
        bits: rep.bits,
        seed,
        adc: a.adc,
        signs,
        rounding_only: rep.rounding_only,
        with_adc: on.then_some(rep.with_adc),
        adc_sweep_mape: sweep_mape,
    };
    let row = |mode, s: &ErrorStats| FunctionalRow {
        mode,
        trials: rep.trials,
        length: rep.length,
        bits: rep.bits,
        mape: s.mape,
        mean_abs_error: s.mean_abs_error,
        max_abs_error: s.max_abs_error,
        mape_trials: s.mape_trials,
    };
    let mut rows = vec![row("rounding_only", &rep.rounding_only)];
    if on {
        rows.push(row("with_adc", &rep.with_adc));
    }
    let mut table = format!(
        "rounding only: MAPE {}%, mean |err| {}, max |err| {}\n",
        sig3(rep.rounding_only.mape * 100.0),
        sig3(rep.rounding_only.mean_abs_error),
        sig3(rep.rounding_only.max_abs_error)
    );
    if on {
        table.push_str(&format!(
            "with converter: MAPE {}%, mean |err| {}, max |err| {}; sweep MAPE {}%\n",
            sig3(rep.with_adc.mape * 100.0),
            sig3(rep.with_adc.mean_abs_error),
            sig3(rep.with_adc.max_abs_error),
            sig3(sweep_mape.unwrap_or(0.0) * 100.0)
        ));
    }
    r.artifacts = pick(format, "functional", &report, csv_from_rows(&rows)?);
    r.table = Some(table);
    Ok(r)
}

fn simulate_cmd(a: &SimulateArgs, cli: &Cli) -> Result<Run> {
    let mut r = Run::new("simulate");
    let net = r.inputs.network(&a.network)?;
    let cfg = r.inputs.accelerator(&a.accelerator, cli.preset_dir.as_ref())?;
    let costs = r.inputs.costs(a.costs.as_ref())?;
    let accel = build_accelerator(&cfg, &costs)?;
    let n = a.n.unwrap_or(cfg.n);
    r.set("n", n);
    r.set("crosscheck", &a.crosscheck);
    r.set("crosscheck_points", a.crosscheck_points);
    let schedule = map_network(&net, &accel, n)?;
    let metrics = simulate(&accel, &schedule);

    let mut checks: Vec<CrossCheck> = Vec::new();
    for name in &a.crosscheck {
        let layer = net
            .layers
            .iter()
            .find(|l| &l.name == name)
            .ok_or_else(|| anyhow!("network {} has no layer '{name}'", net.name))?;
        checks.push(crosscheck_layer(layer, cfg.target_bits, n as usize, cli.seed, a.crosscheck_points)?);
    }

    let summary = json!({
        "metrics": metrics,
        "costs": accel.cost_summary(),
        "crosscheck": checks,
    });
    let layer_csv = metrics.layer_csv();
    r.artifacts = match cli.format {
        Format::Json => vec![Artifact::json("summary.json", &summary).primary(), Artifact::csv("layers.csv", layer_csv)],
        Format::Csv => vec![Artifact::json("summary.json", &summary), Artifact::csv("layers.csv", layer_csv).primary()],
    };
    r.artifacts.push(Artifact::csv("costs.csv", accel.cost_summary().to_csv_string()));
    r.table = Some(format!(
        "{} on {}: {} FPS, {} FPS/W, {} FPS/W/mm2, area {} mm2\n",
        metrics.network,
        metrics.accelerator,
        opt3(metrics.fps),
        opt3(metrics.fps_per_watt),
        opt3(metrics.fps_per_watt_per_mm2),
        sig3(metrics.area_mm2)
    ));
    let failed: Vec<_> = checks.iter().filter(|c| !c.within_bound).map(|c| c.layer.clone()).collect();
    if !failed.is_empty() {
        r.failure = Some(format!("cross-check outside the rounding bound: {}", failed.join(", ")));
    }
    Ok(r)
}

fn opt3(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), sig3)
}

fn compare_cmd(a: &CompareArgs, cli: &Cli) -> Result<Run> {
    let mut r = Run::new("compare");
    let net_names: Vec<String> = if a.networks.is_empty() {
        bundled::ALL.iter().map(|(n, _)| n.to_string()).collect()
    } else {
        a.networks.clone()
    };
    let acc_names: Vec<String> = if a.accelerators.is_empty() {
        scopt::arch::PRESET_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        a.accelerators.clone()
    };
    let networks = net_names.iter().map(|n| r.inputs.network(n)).collect::<Result<Vec<_>>>()?;
    let costs = r.inputs.costs(a.costs.as_ref())?;
    let mut accels = Vec::new();
    for name in &acc_names {
        let cfg = r.inputs.accelerator(name, cli.preset_dir.as_ref())?;
        accels.push(build_accelerator(&cfg, &costs)?);
    }
    let cmp = sim::compare(&networks, &accels)?;

    let mut artifacts = vec![
        Artifact::csv("metrics_long.csv", cmp.long_csv()),
        Artifact::csv("ratios.csv", cmp.ratio_csv()),
        Artifact::json("comparison.json", &cmp),
    ];
    match cli.format {
        Format::Json => artifacts[2].stdout = true,
        Format::Csv => artifacts[0].stdout = true,
    }
    for m in &cmp.metrics {
        artifacts.push(Artifact::csv(format!("layers_{}_{}.csv", m.network, m.accelerator), m.layer_csv()));
    }
    r.artifacts = artifacts;

    let mut table = format!("{:<16} {:<16} {:>10} {:>10} {:>12}\n", "network", "accelerator", "FPS", "FPS/W", "FPS/W/mm2");
    for m in &cmp.metrics {
        table.push_str(&format!(
            "{:<16} {:<16} {:>10} {:>10} {:>12}\n",
            m.network,
            m.accelerator,
            opt3(m.fps),
            opt3(m.fps_per_watt),
            opt3(m.fps_per_watt_per_mm2)
        ));
    }
    table.push_str("\ngmean ratios\n");
    for g in &cmp.gmeans {
        table.push_str(&format!("{} / {} {}: {}\n", g.numerator, g.denominator, g.metric, opt3(g.gmean)));
    }
    r.table = Some(table);
    Ok(r)
}
