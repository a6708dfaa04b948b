//! Command-line front end: `device`, `array`, `sweep` and `calibrate`
//! subcommands over a TOML run configuration.
//!
//! Exit codes: 0 success, 2 configuration error, 3 disturb violation,
//! 4 round-trip data mismatch, 5 calibration fit failure, 1 anything else.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arrays::{ArrayConfig, ArraySim, OpRecord};
use crate::config::RunConfig;
use crate::error::{Result, SimError};
use crate::metrics::{
    cell_area, operation_energy, operation_latency, sram_access_log, Arch, ComparisonRow,
    ComparisonTable, Provenance,
};
use crate::pefet::{device_distinguishability, iv_sweep, PeFetConfig};
use crate::report::{
    comparison_csv, energy_rows, iv_csv, kappa_device_csv, latency_rows, metric_csv,
    svg_line_chart, write_file, KappaDeviceRow, MetricRow,
};
use crate::transduction::{kappa_range_warning, pe_stress, tmd_stress};

#[derive(Debug, Parser)]
#[command(name = "pefet", about = "PeFET non-volatile memory simulator", version)]
pub struct Cli {
    /// TOML run configuration; built-in calibrated defaults when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory for CSV tables and plots.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Comma-separated kappa values, overriding the config sweep list.
    #[arg(long, global = true, value_delimiter = ',')]
    pub kappa: Option<Vec<f64>>,
    /// Comma-separated architectures (hd, tall, wide, cc).
    #[arg(long, global = true, value_delimiter = ',')]
    pub arch: Option<Vec<String>>,
    /// Seed for random word generation.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArrayOp {
    Write,
    Read,
    Roundtrip,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Device characterization: transfer sweeps and the kappa study.
    Device,
    /// One array operation with energy/latency/event reports.
    Array {
        #[arg(long)]
        arch: String,
        #[arg(long, value_enum)]
        op: ArrayOp,
    },
    /// Kappa x architecture design-space sweep with SRAM-relative tables.
    Sweep,
    /// Re-run the calibration chain and write the model card.
    Calibrate,
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                SimError::Config(_) => 2,
                SimError::DisturbViolation { .. } => 3,
                SimError::Io(ref m) if m == ROUNDTRIP_MISMATCH => 4,
                SimError::FitFailure { .. } => 5,
                _ => 1,
            }
        }
    }
}

const ROUNDTRIP_MISMATCH: &str = "round-trip mismatch: read data differs from written data";

fn dispatch(cli: &Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    let seed = cli.seed.unwrap_or(cfg.seed);
    match &cli.command {
        Command::Device => cmd_device(&cfg, cli),
        Command::Array { arch, op } => {
            let arch = Arch::parse(arch)?;
            cmd_array(&cfg, cli, arch, *op, seed)
        }
        Command::Sweep => cmd_sweep(&cfg, cli, seed),
        Command::Calibrate => cmd_calibrate(&cfg, cli),
    }
}

fn kappa_list(cfg: &RunConfig, cli: &Cli) -> Vec<f64> {
    cli.kappa.clone().unwrap_or_else(|| cfg.sweep.kappas.clone())
}

fn arch_list(cfg: &RunConfig, cli: &Cli) -> Result<Vec<Arch>> {
    match &cli.arch {
        Some(names) => names.iter().map(|s| Arch::parse(s)).collect(),
        None => Ok(cfg.sweep.archs.clone()),
    }
}

/// Seeded random data word with balanced populations, so write-energy
/// comparisons across architectures are data-neutral.
pub fn balanced_word(seed: u64, n_w: usize) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut word: Vec<bool> = (0..n_w).map(|i| i < n_w / 2).collect();
    for i in (1..word.len()).rev() {
        let j = rng.gen_range(0..=i);
        word.swap(i, j);
    }
    word
}

pub fn cmd_device(cfg: &RunConfig, cli: &Cli) -> Result<()> {
    let device = cfg.device_config()?;
    let points = iv_sweep(&device, 0.0, device.v_r + 0.1, 50)?;
    write_file(&cli.out.join("iv_sweep.csv"), &iv_csv(&points))?;
    let iv_svg = svg_line_chart(
        "PeFET transfer characteristics",
        "v_gs (V)",
        "i_ds (A)",
        &[
            ("LRS".into(), points.iter().map(|p| (p.v_gs, p.i_lrs)).collect()),
            ("HRS".into(), points.iter().map(|p| (p.v_gs, p.i_hrs)).collect()),
            (
                "baseline".into(),
                points.iter().map(|p| (p.v_gs, p.i_baseline)).collect(),
            ),
        ],
    );
    write_file(&cli.out.join("iv_sweep.svg"), &iv_svg)?;

    let mut rows = Vec::new();
    for &k in &kappa_list(cfg, cli) {
        let dev = cfg.device_config_at(k)?;
        if let Some(w) = kappa_range_warning(k) {
            eprintln!("warning: {w}");
        }
        let sigma_pe = pe_stress(1.0, dev.v_r, &dev.geom, &dev.piezo);
        let sigma_tmd = tmd_stress(sigma_pe, k, &dev.piezo);
        let delta_eg = dev.delta_eg(dev.p_s()?, dev.v_r)?;
        rows.push(KappaDeviceRow {
            kappa: k,
            sigma_pe,
            sigma_tmd,
            delta_eg,
            distinguishability: device_distinguishability(&dev)?,
            in_calibrated_range: kappa_range_warning(k).is_none(),
        });
    }
    write_file(&cli.out.join("kappa_device.csv"), &kappa_device_csv(&rows))?;
    let svg = svg_line_chart(
        "Distinguishability against kappa",
        "kappa",
        "I_LRS / I_HRS",
        &[(
            "device".into(),
            rows.iter().map(|r| (r.kappa, r.distinguishability)).collect(),
        )],
    );
    write_file(&cli.out.join("kappa_device.svg"), &svg)?;
    println!(
        "device: wrote iv_sweep.csv, kappa_device.csv and plots to {}",
        cli.out.display()
    );
    Ok(())
}

/// Runs a standard write (seeded word at address 0) on a fresh array.
fn standard_write(array: &ArrayConfig, seed: u64) -> Result<(ArraySim, Vec<bool>, OpRecord)> {
    let mut sim = ArraySim::new(array.clone())?;
    let word = balanced_word(seed, array.n_w);
    let rec = sim.write(0, &word)?;
    Ok((sim, word, rec))
}

pub fn cmd_array(cfg: &RunConfig, cli: &Cli, arch: Arch, op: ArrayOp, seed: u64) -> Result<()> {
    let kappa = cli.kappa.as_ref().and_then(|v| v.first().copied());
    let array = cfg.array_config(arch, kappa)?;
    let k = array.device.kappa()?;
    let wire = array.wire;
    let (sim, word, write_rec) = standard_write(&array, seed)?;

    let mut e_rows: Vec<MetricRow> = Vec::new();
    let mut l_rows: Vec<MetricRow> = Vec::new();
    let mut events = String::new();

    if matches!(op, ArrayOp::Write | ArrayOp::Roundtrip) {
        let e = write_rec.energy(&wire);
        let l = write_rec.latency(&wire);
        e_rows.extend(energy_rows(arch.name(), k, "write_energy", &e, Provenance::Calibrated));
        l_rows.extend(latency_rows(arch.name(), k, "write_latency", &l, Provenance::Calibrated));
        let mut buf = Vec::new();
        write_rec.log.write_events_csv(&mut buf)?;
        events.push_str(&String::from_utf8_lossy(&buf));
    }
    if matches!(op, ArrayOp::Read | ArrayOp::Roundtrip) {
        let (res, read_rec) = sim.read(0)?;
        let e = read_rec.energy(&wire);
        let l = read_rec.latency(&wire);
        e_rows.extend(energy_rows(arch.name(), k, "read_energy", &e, Provenance::Calibrated));
        l_rows.extend(latency_rows(arch.name(), k, "read_latency", &l, Provenance::Calibrated));
        let mut buf = Vec::new();
        read_rec.log.write_events_csv(&mut buf)?;
        let body = String::from_utf8_lossy(&buf);
        if events.is_empty() {
            events.push_str(&body);
        } else {
            // Skip the duplicate header when appending.
            events.push_str(body.split_once('\n').map(|x| x.1).unwrap_or(""));
        }
        if op == ArrayOp::Roundtrip && res.bits != word {
            return Err(SimError::Io(ROUNDTRIP_MISMATCH.to_string()));
        }
    }

    write_file(&cli.out.join("energy.csv"), &metric_csv(&e_rows))?;
    write_file(&cli.out.join("latency.csv"), &metric_csv(&l_rows))?;
    write_file(&cli.out.join("events.csv"), &events)?;
    write_file(&cli.out.join("state.txt"), &sim.snapshot_text())?;
    println!(
        "array {} {:?}: wrote energy.csv, latency.csv, events.csv, state.txt to {}",
        arch.name(),
        op,
        cli.out.display()
    );
    Ok(())
}

/// One sweep point result.
struct SweepPoint {
    arch: Arch,
    kappa: f64,
    area_lambda2: f64,
    area_ratio: f64,
    distinguishability: f64,
    write_energy: crate::metrics::EnergyReport,
    write_latency: crate::metrics::LatencyReport,
    read_energy: crate::metrics::EnergyReport,
    read_latency: crate::metrics::LatencyReport,
}

fn sweep_point(cfg: &RunConfig, arch: Arch, kappa: f64, seed: u64) -> Result<SweepPoint> {
    let array = cfg.array_config(arch, Some(kappa))?;
    let wire = array.wire;
    let rules = array.rules;
    let (sim, _, wrec) = standard_write(&array, seed)?;
    let (res, rrec) = sim.read(0)?;
    let dist = if arch == Arch::Cc {
        res.worst_ratio
    } else {
        device_distinguishability(&array.device)?
    };
    let area = cell_area(arch, kappa, &rules);
    Ok(SweepPoint {
        arch,
        kappa,
        area_lambda2: area,
        area_ratio: rules.sram_area_lambda2 / area,
        distinguishability: dist,
        write_energy: wrec.energy(&wire),
        write_latency: wrec.latency(&wire),
        read_energy: rrec.energy(&wire),
        read_latency: rrec.latency(&wire),
    })
}

/// SRAM baseline energies/latencies for one configuration (kappa-free).
pub fn sram_reports(
    cfg: &RunConfig,
) -> Result<(
    crate::metrics::EnergyReport,
    crate::metrics::LatencyReport,
    crate::metrics::EnergyReport,
    crate::metrics::LatencyReport,
)> {
    let device = cfg.device_config()?;
    let rules = cfg.rules.resolve();
    let a = &cfg.array;
    let wlog = sram_access_log(
        true, a.n_r, a.n_c, a.n_w, &rules, &cfg.wire, &device.fet, &cfg.sram, device.v_dd,
    );
    let rlog = sram_access_log(
        false, a.n_r, a.n_c, a.n_w, &rules, &cfg.wire, &device.fet, &cfg.sram, device.v_dd,
    );
    Ok((
        operation_energy(&wlog, &cfg.wire),
        operation_latency(&wlog, &cfg.wire),
        operation_energy(&rlog, &cfg.wire),
        operation_latency(&rlog, &cfg.wire),
    ))
}

pub fn cmd_sweep(cfg: &RunConfig, cli: &Cli, seed: u64) -> Result<()> {
    let kappas = kappa_list(cfg, cli);
    let archs = arch_list(cfg, cli)?;
    if kappas.is_empty() || archs.is_empty() {
        eprintln!("warning: empty sweep (no kappa values or architectures); nothing to do");
        return Ok(());
    }
    for &k in &kappas {
        if let Some(w) = kappa_range_warning(k) {
            eprintln!("warning: {w}");
        }
    }
    let (sram_we, sram_wl, sram_re, sram_rl) = sram_reports(cfg)?;

    // Worker pool over sweep points; output order fixed by index.
    let jobs: Vec<(Arch, f64)> = archs
        .iter()
        .flat_map(|&a| kappas.iter().map(move |&k| (a, k)))
        .collect();
    let points: Result<Vec<SweepPoint>> = jobs
        .par_iter()
        .map(|&(a, k)| sweep_point(cfg, a, k, seed))
        .collect();
    let points = points?;

    let mut area_rows = Vec::new();
    let mut dist_rows = Vec::new();
    let mut we_rows = Vec::new();
    let mut wl_rows = Vec::new();
    let mut re_rows = Vec::new();
    let mut rl_rows = Vec::new();
    let mut comparisons: Vec<ComparisonTable> = Vec::new();
    for &k in &kappas {
        let mut table = ComparisonTable {
            kappa: k,
            rows: Vec::new(),
            provenance: Provenance::Calibrated,
        };
        for p in points.iter().filter(|p| p.kappa == k) {
            table.rows.push(ComparisonRow {
                arch: p.arch,
                area_ratio: p.area_ratio,
                write_energy_reduction_pct: 100.0 * (1.0 - p.write_energy.total / sram_we.total),
                read_energy_reduction_pct: 100.0 * (1.0 - p.read_energy.total / sram_re.total),
                write_latency_overhead_pct: 100.0
                    * (p.write_latency.total / sram_wl.total - 1.0),
                read_latency_overhead_pct: 100.0 * (p.read_latency.total / sram_rl.total - 1.0),
            });
        }
        comparisons.push(table);
    }
    for p in &points {
        let name = p.arch.name();
        area_rows.push(MetricRow {
            arch: name,
            kappa: p.kappa,
            metric: "area",
            component: "per_bit_lambda2",
            value: p.area_lambda2,
            unit: "lambda^2",
            provenance: Provenance::Calibrated,
        });
        area_rows.push(MetricRow {
            arch: name,
            kappa: p.kappa,
            metric: "area",
            component: "sram_ratio",
            value: p.area_ratio,
            unit: "x",
            provenance: Provenance::Calibrated,
        });
        dist_rows.push(MetricRow {
            arch: name,
            kappa: p.kappa,
            metric: "distinguishability",
            component: if p.arch == Arch::Cc { "worst_case" } else { "device" },
            value: p.distinguishability,
            unit: "x",
            provenance: Provenance::Calibrated,
        });
        we_rows.extend(energy_rows(name, p.kappa, "write_energy", &p.write_energy, Provenance::Calibrated));
        wl_rows.extend(latency_rows(name, p.kappa, "write_latency", &p.write_latency, Provenance::Calibrated));
        re_rows.extend(energy_rows(name, p.kappa, "read_energy", &p.read_energy, Provenance::Calibrated));
        rl_rows.extend(latency_rows(name, p.kappa, "read_latency", &p.read_latency, Provenance::Calibrated));
    }

    write_file(&cli.out.join("area.csv"), &metric_csv(&area_rows))?;
    write_file(&cli.out.join("distinguishability.csv"), &metric_csv(&dist_rows))?;
    write_file(&cli.out.join("write_energy.csv"), &metric_csv(&we_rows))?;
    write_file(&cli.out.join("write_latency.csv"), &metric_csv(&wl_rows))?;
    write_file(&cli.out.join("read_energy.csv"), &metric_csv(&re_rows))?;
    write_file(&cli.out.join("read_latency.csv"), &metric_csv(&rl_rows))?;
    let mut cmp_text = String::new();
    let mut cmp_csv = String::new();
    for (i, t) in comparisons.iter().enumerate() {
        cmp_text.push_str(&format!("{t}\n"));
        let body = comparison_csv(t);
        if i == 0 {
            cmp_csv.push_str(&body);
        } else {
            cmp_csv.push_str(body.split_once('\n').map(|x| x.1).unwrap_or(""));
        }
    }
    write_file(&cli.out.join("comparison.csv"), &cmp_csv)?;
    write_file(&cli.out.join("comparison.txt"), &cmp_text)?;

    // Figure analogues: one chart per metric, one series per architecture.
    let chart = |metric: &str, unit: &str, get: &dyn Fn(&SweepPoint) -> f64| {
        let series: Vec<(String, Vec<(f64, f64)>)> = archs
            .iter()
            .map(|&a| {
                (
                    a.name().to_string(),
                    points
                        .iter()
                        .filter(|p| p.arch == a)
                        .map(|p| (p.kappa, get(p)))
                        .collect(),
                )
            })
            .collect();
        svg_line_chart(metric, "kappa", unit, &series)
    };
    write_file(
        &cli.out.join("area_vs_kappa.svg"),
        &chart("Area efficiency against SRAM", "x smaller", &|p| p.area_ratio),
    )?;
    write_file(
        &cli.out.join("distinguishability_vs_kappa.svg"),
        &chart("Distinguishability", "I_LRS / I_HRS", &|p| p.distinguishability),
    )?;
    write_file(
        &cli.out.join("write_energy_vs_kappa.svg"),
        &chart("Write energy", "J", &|p| p.write_energy.total),
    )?;
    write_file(
        &cli.out.join("write_latency_vs_kappa.svg"),
        &chart("Write latency", "s", &|p| p.write_latency.total),
    )?;
    write_file(
        &cli.out.join("read_energy_vs_kappa.svg"),
        &chart("Read energy", "J", &|p| p.read_energy.total),
    )?;
    write_file(
        &cli.out.join("read_latency_vs_kappa.svg"),
        &chart("Read latency", "s", &|p| p.read_latency.total),
    )?;
    println!(
        "sweep: {} points ({} kappas x {} archs) written to {}",
        points.len(),
        kappas.len(),
        archs.len(),
        cli.out.display()
    );
    Ok(())
}

pub fn cmd_calibrate(cfg: &RunConfig, cli: &Cli) -> Result<()> {
    let model = cfg.run_calibration()?;
    write_file(&cli.out.join("model_card.txt"), &model.card.render())?;
    println!("calibrate: model card written to {}", cli.out.display());
    for (i, (m, t, dev)) in model.fet_report.anchors.iter().enumerate() {
        println!("  anchor {i}: model {m:.4} target {t:.4} ({:+.2}%)", dev * 100.0);
    }
    Ok(())
}

/// Library-level helper mirroring the 4-terminal device used by examples.
pub fn default_device() -> PeFetConfig {
    PeFetConfig::default()
}
