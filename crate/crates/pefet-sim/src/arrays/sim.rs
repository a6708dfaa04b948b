//! Write/read execution over an array, with class-aggregated transients and
//! event-log construction for the energy/latency accounting.

use std::collections::BTreeMap;

use super::cc::{ax_effective_resistance, solve_cc_read, CcReadSolution};
use super::plans::{cell_vgb, check_disturb, plan_read, plan_write, CellVariant, DisturbReport};
use super::{ArrayConfig, LineGroup, OpKind, PhasePlan};
use crate::error::{Result, SimError};
use crate::ferroelectric::{switch_time_estimate, Waveform};
use crate::metrics::{
    c_pe, operation_energy, operation_latency, Arch, CellClass, EnergyReport, EventLog,
    LatencyReport, LineClass, LineEvent, PeEvent, PhaseLog, SwingKind, SwitchEvent, WireParams,
};
use crate::pefet::{read_current, write_transient, BiasPoint};

/// Voltage ramp used for line edges inside cell waveforms (s).
const EDGE_RAMP: f64 = 10e-12;
/// Zero-bias tail appended after the last phase so nudged cells relax (s).
const RELAX_TAIL: f64 = 1e-9;

/// Completed-operation record: the event log plus the disturb analysis.
#[derive(Debug, Clone)]
pub struct OpRecord {
    pub log: EventLog,
    pub disturb: DisturbReport,
    /// Per-phase durations on the critical path (s).
    pub phase_durations: Vec<f64>,
}

impl OpRecord {
    pub fn energy(&self, wire: &WireParams) -> EnergyReport {
        operation_energy(&self.log, wire)
    }

    pub fn latency(&self, wire: &WireParams) -> LatencyReport {
        operation_latency(&self.log, wire)
    }
}

/// Outcome of a word read.
#[derive(Debug, Clone)]
pub struct ReadResult {
    /// Per-bit sensed current (A).
    pub currents: Vec<f64>,
    /// Bits resolved against the reference current.
    pub bits: Vec<bool>,
    /// Sense reference, the geometric mean of the worst-case state currents.
    pub i_ref: f64,
    /// Worst-case LRS/HRS separation of this architecture and bias.
    pub worst_ratio: f64,
    /// Cross-coupled case label per pair, when applicable.
    pub cc_cases: Option<Vec<&'static str>>,
}

/// One simulated array instance.
#[derive(Debug, Clone)]
pub struct ArraySim {
    pub cfg: ArrayConfig,
    p: Vec<f64>,
    p_s: f64,
    c_pe_cell: f64,
    t_sw_cache: BTreeMap<u64, f64>,
}

/// Line geometry and loading of one line instance.
#[derive(Debug, Clone, Copy)]
struct LineLoad {
    c_wire: f64,
    c_attached: f64,
    r_drive: f64,
    stage: u8,
}

#[derive(Debug, Clone)]
struct LineSpec {
    line: LineClass,
    group: LineGroup,
    count: usize,
    load: LineLoad,
    /// Voltage per phase; standby (0 V) before and after.
    volts: Vec<f64>,
}

impl ArraySim {
    pub fn new(cfg: ArrayConfig) -> Result<Self> {
        cfg.validate()?;
        let p_s = cfg.device.p_s()?;
        let c_pe_cell = c_pe(&cfg.device.geom, cfg.device.piezo.eps_r);
        let n = cfg.n_r * cfg.n_c;
        Ok(ArraySim {
            cfg,
            p: vec![-p_s; n],
            p_s,
            c_pe_cell,
            t_sw_cache: BTreeMap::new(),
        })
    }

    /// Stored polarization of every bit cell (row-major).
    pub fn polarizations(&self) -> &[f64] {
        &self.p
    }

    /// Stored bit of one cell (sign of polarization).
    pub fn bit(&self, row: usize, col: usize) -> bool {
        self.p[row * self.cfg.n_c + col] > 0.0
    }

    /// Film capacitance per cell (F).
    pub fn cell_c_pe(&self) -> f64 {
        self.c_pe_cell
    }

    /// Text snapshot: one `address,bits` line per word.
    pub fn snapshot_text(&self) -> String {
        let mut s = String::from("address,bits\n");
        for addr in 0..self.cfg.word_count() {
            let (row, wcol) = self.cfg.locate(addr).unwrap();
            let mut bits = String::with_capacity(self.cfg.n_w);
            for i in 0..self.cfg.n_w {
                let col = wcol * self.cfg.n_w + i;
                bits.push(if self.bit(row, col) { '1' } else { '0' });
            }
            s.push_str(&format!("{addr},{bits}\n"));
        }
        s
    }

    fn switch_time(&mut self, v_abs: f64) -> Result<f64> {
        let key = v_abs.to_bits();
        if let Some(&t) = self.t_sw_cache.get(&key) {
            return Ok(t);
        }
        let t = switch_time_estimate(
            v_abs,
            self.cfg.device.geom.t_pe,
            &self.cfg.device.landau,
            self.cfg.device.switch_threshold,
        )?;
        self.t_sw_cache.insert(key, t);
        Ok(t)
    }

    /// Buffer output resistance at the given word-line supply: the buffer
    /// is powered by its word line, so drive strength follows the overdrive.
    fn buffer_resistance(&self, v_wl: f64) -> f64 {
        let od = (v_wl - self.cfg.device.fet.v_t0).max(0.02);
        self.cfg.wire.r_buffer * self.cfg.device.v_dd / od
    }

    /// Wire and attached capacitance of one line instance. `r_buffer_eff`
    /// is the operation's buffer drive resistance.
    fn line_load(&self, line: LineClass, r_buffer_eff: f64) -> LineLoad {
        let cfg = &self.cfg;
        let lambda = cfg.rules.lambda;
        let w_cell = cfg.rules.cell_width_lambda(cfg.arch, self.kappa()) * lambda;
        let h_cell = cfg.rules.cell_height_lambda(cfg.arch) * lambda;
        let cells_per_row = if cfg.arch == Arch::Cc {
            cfg.n_c / 2
        } else {
            cfg.n_c
        };
        let row_len = cells_per_row as f64 * w_cell;
        let col_len = cfg.n_r as f64 * h_cell;
        let cw = cfg.wire.cap_per_len;
        let rw = cfg.wire.row_cap_per_len;
        let c_gate = cfg.device.fet.c_ox() * cfg.device.fet.w * cfg.device.fet.l;
        let r_drv = cfg.wire.r_driver;
        let (c_wire, c_attached, r_drive, stage) = match line {
            LineClass::Wl => {
                let att = match cfg.arch {
                    Arch::Hd => cfg.n_c as f64 * self.c_pe_cell,
                    // One access-transistor gate per bit.
                    _ => cfg.n_c as f64 * c_gate,
                };
                (row_len * rw, att, r_drv, 0)
            }
            LineClass::Wbl => {
                let att = match cfg.arch {
                    Arch::Hd => cfg.n_r as f64 * self.c_pe_cell,
                    _ => cfg.n_r as f64 * cfg.wire.c_junction,
                };
                (col_len * cw, att, r_drv, 0)
            }
            LineClass::Rbl | LineClass::Bl1 | LineClass::Bl2 => (
                col_len * cw,
                cfg.n_r as f64 * cfg.wire.c_junction,
                r_drv,
                0,
            ),
            LineClass::Gpl => (
                col_len * cw,
                cfg.n_r as f64 * cfg.wire.buffer_in_cap,
                r_drv,
                0,
            ),
            LineClass::Lpl => {
                let cells = if cfg.arch == Arch::Cc {
                    cfg.n_w / 2
                } else {
                    cfg.n_w
                };
                (
                    cells as f64 * w_cell * rw,
                    // Both film plates of a pair hang on the shared plate.
                    cfg.n_w as f64 * self.c_pe_cell,
                    r_buffer_eff,
                    1,
                )
            }
            LineClass::Pl => (
                row_len * rw,
                cfg.n_c as f64 * self.c_pe_cell,
                r_drv,
                0,
            ),
            LineClass::Sl => {
                // Source-gate control of one row segment.
                let cells = if cfg.segmented { cfg.n_w / 2 } else { cfg.n_c / 2 };
                (cells as f64 * w_cell * rw, cells as f64 * c_gate, r_drv, 0)
            }
        };
        LineLoad {
            c_wire,
            c_attached,
            r_drive,
            stage,
        }
    }

    fn kappa(&self) -> f64 {
        self.cfg.device.kappa().expect("validated geometry")
    }

    /// Builds line specs with per-phase voltages and instance counts.
    fn line_specs(&self, plan: &PhasePlan, n0: usize, n1: usize, cc: Option<&CcCounts>) -> Vec<LineSpec> {
        let cfg = &self.cfg;
        let segs = cfg.words_per_row();
        // The buffer supply is the operation's word-line level.
        let v_wl = match plan.op {
            OpKind::Write => cfg.device.v_dd + cfg.device.fet.v_t0,
            OpKind::Read => cfg.device.v_r,
        };
        let r_buf = self.buffer_resistance(v_wl);
        let mut specs = Vec::new();
        for line in plan.line_classes() {
            let load = self.line_load(line, r_buf);
            let groups: Vec<(LineGroup, usize)> = match line {
                LineClass::Wl => vec![
                    (LineGroup::Accessed, 1),
                    (LineGroup::Unaccessed, cfg.n_r - 1),
                ],
                LineClass::Gpl => vec![
                    (LineGroup::Accessed, 1),
                    (LineGroup::Unaccessed, segs - 1),
                ],
                LineClass::Lpl => vec![
                    (LineGroup::Accessed, 1),
                    (LineGroup::Unaccessed, cfg.n_r * segs - 1),
                ],
                LineClass::Pl => vec![
                    (LineGroup::Accessed, 1),
                    (LineGroup::Unaccessed, cfg.n_r - 1),
                ],
                LineClass::Sl => {
                    let total = if cfg.segmented {
                        cfg.n_r * segs
                    } else {
                        cfg.n_r
                    };
                    vec![(LineGroup::Accessed, 1), (LineGroup::Unaccessed, total - 1)]
                }
                LineClass::Wbl | LineClass::Rbl => {
                    if plan.op == OpKind::Write && line == LineClass::Wbl {
                        vec![
                            (LineGroup::AccessedData0, n0),
                            (LineGroup::AccessedData1, n1),
                            (LineGroup::Unaccessed, cfg.n_c - cfg.n_w),
                        ]
                    } else {
                        vec![
                            (LineGroup::Accessed, cfg.n_w),
                            (LineGroup::Unaccessed, cfg.n_c - cfg.n_w),
                        ]
                    }
                }
                LineClass::Bl1 | LineClass::Bl2 => {
                    let pairs_acc = cfg.n_w / 2;
                    let pairs_unacc = (cfg.n_c - cfg.n_w) / 2;
                    if plan.op == OpKind::Write {
                        let counts = cc.expect("cc counts for cc write");
                        // BL1 writes the B side, BL2 the A side.
                        let (hi, lo) = if line == LineClass::Bl1 {
                            (counts.b_ones, pairs_acc - counts.b_ones)
                        } else {
                            (counts.a_ones, pairs_acc - counts.a_ones)
                        };
                        vec![
                            (LineGroup::AccessedData1, hi),
                            (LineGroup::AccessedData0, lo),
                            (LineGroup::Unaccessed, pairs_unacc),
                        ]
                    } else {
                        vec![
                            (LineGroup::Accessed, pairs_acc),
                            (LineGroup::Unaccessed, pairs_unacc),
                        ]
                    }
                }
            };
            for (group, count) in groups {
                if count == 0 {
                    continue;
                }
                let volts: Vec<f64> = plan
                    .phases
                    .iter()
                    .map(|ph| {
                        ph.volts(line, group)
                            .or_else(|| ph.volts(line, LineGroup::Accessed))
                            .unwrap_or(0.0)
                    })
                    .collect();
                specs.push(LineSpec {
                    line,
                    group,
                    count,
                    load,
                    volts,
                });
            }
        }
        specs
    }

    /// Turns line specs into per-phase transition events plus a recovery
    /// phase back to standby.
    fn line_events_into_logs(&self, specs: &[LineSpec], logs: &mut [PhaseLog]) {
        let n_phases = logs.len() - 1; // last log is the recovery
        for spec in specs {
            let mut prev = 0.0;
            for (i, log) in logs.iter_mut().enumerate() {
                let v = if i < n_phases { spec.volts[i] } else { 0.0 };
                if (v - prev).abs() > 1e-15 {
                    log.line_events.push(LineEvent {
                        line: spec.line,
                        group: spec.group.name(),
                        count: spec.count,
                        v_from: prev,
                        v_to: v,
                        c_wire: spec.load.c_wire,
                        c_attached: spec.load.c_attached,
                        r_drive: spec.load.r_drive,
                        stage: spec.load.stage,
                        swing: SwingKind::Dissipative,
                    });
                }
                prev = v;
            }
        }
    }

    /// Appends across-film transition events for one cell population.
    fn pe_events_into_logs(
        &self,
        class: CellClass,
        count: usize,
        vgb_per_phase: &[f64],
        logs: &mut [PhaseLog],
    ) {
        if count == 0 {
            return;
        }
        let mut prev = 0.0;
        let n_phases = logs.len() - 1;
        for (i, log) in logs.iter_mut().enumerate() {
            let v = if i < n_phases { vgb_per_phase[i] } else { 0.0 };
            if (v - prev).abs() > 1e-15 {
                log.pe_events.push(PeEvent {
                    class,
                    count,
                    v_from: prev,
                    v_to: v,
                    c_pe: self.c_pe_cell,
                });
            }
            prev = v;
        }
    }

    /// Settle time of each phase from the line transitions entering it.
    fn phase_settles(&self, specs: &[LineSpec], n_phases: usize) -> Vec<f64> {
        let wire = &self.cfg.wire;
        let mut settles = vec![0.0; n_phases];
        for (i, settle) in settles.iter_mut().enumerate() {
            let mut stage_max: BTreeMap<u8, f64> = BTreeMap::new();
            for spec in specs {
                let prev = if i == 0 { 0.0 } else { spec.volts[i - 1] };
                if (spec.volts[i] - prev).abs() > 1e-15 {
                    let t = wire.settle_tau
                        * spec.load.r_drive
                        * (spec.load.c_wire + spec.load.c_attached);
                    let slot = stage_max.entry(spec.load.stage).or_insert(0.0);
                    *slot = slot.max(t);
                }
            }
            *settle = stage_max.values().sum();
        }
        settles
    }

    /// Writes `word` (one bool per bit) at `addr`. Returns the event log;
    /// errs on disturb violations or incomplete switching.
    pub fn write(&mut self, addr: usize, word: &[bool]) -> Result<OpRecord> {
        let cfg = self.cfg.clone();
        if word.len() != cfg.n_w {
            return Err(SimError::InvalidParameter(format!(
                "word length {} does not match n_w = {}",
                word.len(),
                cfg.n_w
            )));
        }
        let (row, wcol) = cfg.locate(addr)?;
        let plan = plan_write(&cfg)?;
        let disturb = check_disturb(&plan, &cfg)?;
        if let Some(v) = disturb.violations().first() {
            return Err(SimError::DisturbViolation {
                phase: v.phase,
                class: v.class.name(),
                v_gb: v.v_gb.abs(),
                v_c: disturb.v_c,
            });
        }

        let n1 = word.iter().filter(|&&b| b).count();
        let n0 = cfg.n_w - n1;
        let cc_counts = if cfg.arch == Arch::Cc {
            Some(CcCounts::from_word(word))
        } else {
            None
        };
        let specs = self.line_specs(&plan, n0, n1, cc_counts.as_ref());
        let n_phases = plan.phases.len();

        // Cell populations: (class, variant, member cell indices).
        let populations = self.write_populations(&plan, row, wcol, word);

        // Cross-coupled same-state writes pay a source-settle delay before
        // the full drive appears: with grounded sources both channels would
        // hold the nodes at the sagged write load, so the accessed source
        // rail floats and charges through that conduction path.
        let cc_delay = if populations.iter().any(|p| p.cc_both_ones) {
            let v_wl = cfg.device.v_dd + cfg.device.fet.v_t0;
            let load = super::cc::solve_cc_write_load(&cfg.device, v_wl)?;
            let sl = self.line_load(LineClass::Sl, cfg.wire.r_driver);
            let c_source = sl.c_wire + cfg.n_w as f64 * cfg.wire.c_junction;
            Some((load, cfg.wire.settle_tau * load.r_eff * c_source))
        } else {
            None
        };

        // Phase durations: settle plus the switching tail of that phase.
        let settles = self.phase_settles(&specs, n_phases);
        let v_c = disturb.v_c;
        let mut durations = Vec::with_capacity(n_phases);
        for (pi, settle) in settles.iter().enumerate() {
            let mut t_sw: f64 = 0.0;
            for pop in &populations {
                if pop.class != CellClass::Accessed {
                    continue;
                }
                let v = pop.vgb[pi];
                if v.abs() > v_c {
                    t_sw = t_sw.max(self.switch_time(v.abs())?);
                } else if pop.cc_both_ones && pi == 0 {
                    // Full drive after the source settles.
                    t_sw = t_sw.max(self.switch_time(cfg.device.v_dd)?);
                }
            }
            let delay = match (&cc_delay, pi) {
                (Some((_, t)), 0) => *t,
                _ => 0.0,
            };
            durations.push(settle + delay + cfg.wire.switch_margin * t_sw);
        }

        // Run the grouped transients and update state.
        let mut logs: Vec<PhaseLog> = plan
            .phases
            .iter()
            .map(|ph| PhaseLog::new(ph.label))
            .collect();
        let mut recover = PhaseLog::new("recover");
        recover.off_critical_path = true;
        logs.push(recover);
        self.line_events_into_logs(&specs, &mut logs);
        if let Some((load, _)) = &cc_delay {
            let sl = self.line_load(LineClass::Sl, cfg.wire.r_driver);
            let c_source = sl.c_wire + cfg.n_w as f64 * cfg.wire.c_junction;
            logs[0].extra_settle.push((load.r_eff, c_source));
        }

        let a_pe = cfg.device.geom.a_pe;
        for pop in &populations {
            self.pe_events_into_logs(pop.class, pop.cells.len(), &pop.vgb, &mut logs);
            if pop.vgb.iter().all(|v| v.abs() < 1e-15) {
                continue; // never driven, state untouched
            }
            // Group members by exact stored polarization (or singly in
            // exact mode) and integrate one transient per group.
            let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
            for (gi, &cell) in pop.cells.iter().enumerate() {
                let key = if cfg.exact_mode {
                    gi as u64
                } else {
                    self.p[cell].to_bits()
                };
                groups.entry(key).or_default().push(cell);
            }
            for cells in groups.values() {
                let p0 = self.p[cells[0]];
                let mut levels: Vec<(f64, f64)> = Vec::with_capacity(n_phases + 2);
                for (pi, (&v, &d)) in pop.vgb.iter().zip(&durations).enumerate() {
                    if pop.cc_both_ones && pi == 0 {
                        // Sagged drive until the floated source settles,
                        // then the full bit-line level.
                        let (load, t_delay) = cc_delay.as_ref().expect("cc write load");
                        let sagged = cfg.device.v_dd - load.droop;
                        levels.push((sagged, *t_delay));
                        levels.push((cfg.device.v_dd, (d - t_delay).max(0.0)));
                    } else {
                        levels.push((v, d));
                    }
                }
                levels.push((0.0, RELAX_TAIL));
                let wf = Waveform::phases(&levels, EDGE_RAMP);
                let out = write_transient(p0, &wf, &cfg.device)?;
                if pop.class == CellClass::Accessed {
                    let target = if pop.target_one { self.p_s } else { -self.p_s };
                    if out.p_final * target.signum()
                        < cfg.device.switch_threshold * self.p_s - 1e-9
                    {
                        return Err(SimError::WriteIncomplete {
                            reached: out.p_final,
                            target,
                            duration: durations.iter().sum(),
                        });
                    }
                    if out.q_switched > self.p_s {
                        // A genuine well crossing: find its phase and drive.
                        let (pi, drive) = if pop.cc_both_ones {
                            (0, cfg.device.v_dd)
                        } else {
                            let pi = pop
                                .vgb
                                .iter()
                                .position(|v| v.abs() > v_c && v.signum() == target.signum())
                                .unwrap_or(n_phases - 1);
                            (pi, pop.vgb[pi].abs())
                        };
                        logs[pi].switch_events.push(SwitchEvent {
                            class: pop.class,
                            count: cells.len(),
                            energy_per_cell: out.trace.switching_energy(a_pe),
                            t_switch: self.switch_time(drive)?,
                            q_switched: out.q_switched,
                        });
                    }
                } else if out.p_final.signum() != p0.signum() {
                    return Err(SimError::InvalidParameter(format!(
                        "{} cell flipped sign under a sub-coercive drive (p0 = {p0:.4}, p = {:.4})",
                        pop.class.name(),
                        out.p_final
                    )));
                }
                for &cell in cells {
                    self.p[cell] = out.p_final;
                }
            }
        }

        let log = EventLog {
            arch: cfg.arch,
            kappa: self.kappa(),
            phases: logs,
            leak: None,
        };
        Ok(OpRecord {
            log,
            disturb,
            phase_durations: durations,
        })
    }

    /// Cell populations touched by a write, with their per-phase biases.
    fn write_populations(
        &self,
        plan: &PhasePlan,
        row: usize,
        wcol: usize,
        word: &[bool],
    ) -> Vec<Population> {
        let cfg = &self.cfg;
        let n_phases = plan.phases.len();
        let col0 = wcol * cfg.n_w;
        let vgb_of = |class: CellClass, variant: CellVariant| -> Vec<f64> {
            (0..n_phases)
                .map(|pi| cell_vgb(plan, pi, class, variant))
                .collect()
        };
        let mut pops = Vec::new();
        if cfg.arch == Arch::Cc {
            // Accessed film populations keyed by (own target, partner target).
            let mut cells: BTreeMap<(bool, bool), Vec<usize>> = BTreeMap::new();
            for pair in 0..cfg.n_w / 2 {
                let a_bit = word[2 * pair];
                let b_bit = word[2 * pair + 1];
                let a_cell = row * cfg.n_c + col0 + 2 * pair;
                let b_cell = a_cell + 1;
                cells.entry((a_bit, b_bit)).or_default().push(a_cell);
                cells.entry((b_bit, a_bit)).or_default().push(b_cell);
            }
            for ((t_self, t_partner), members) in cells {
                pops.push(Population {
                    class: CellClass::Accessed,
                    target_one: t_self,
                    cc_both_ones: t_self && t_partner,
                    vgb: vgb_of(CellClass::Accessed, CellVariant::CcPair(t_self, t_partner)),
                    cells: members,
                });
            }
            // Half-row pairs only bias their films in the unsegmented flavor.
            if !cfg.segmented {
                let mut members = Vec::new();
                for col in 0..cfg.n_c {
                    if col < col0 || col >= col0 + cfg.n_w {
                        members.push(row * cfg.n_c + col);
                    }
                }
                pops.push(Population {
                    class: CellClass::HalfRow,
                    target_one: false,
                    cc_both_ones: false,
                    vgb: vgb_of(CellClass::HalfRow, CellVariant::Plain),
                    cells: members,
                });
            }
            return pops;
        }

        // Linear architectures: accessed cells split by data value.
        let mut acc0 = Vec::new();
        let mut acc1 = Vec::new();
        for (i, &bit) in word.iter().enumerate() {
            let cell = row * cfg.n_c + col0 + i;
            if bit {
                acc1.push(cell);
            } else {
                acc0.push(cell);
            }
        }
        pops.push(Population {
            class: CellClass::Accessed,
            target_one: false,
            cc_both_ones: false,
            vgb: vgb_of(CellClass::Accessed, CellVariant::Data0),
            cells: acc0,
        });
        pops.push(Population {
            class: CellClass::Accessed,
            target_one: true,
            cc_both_ones: false,
            vgb: vgb_of(CellClass::Accessed, CellVariant::Data1),
            cells: acc1,
        });
        // Half-row: same row, other columns.
        let mut half_row = Vec::new();
        for col in 0..cfg.n_c {
            if col < col0 || col >= col0 + cfg.n_w {
                half_row.push(row * cfg.n_c + col);
            }
        }
        pops.push(Population {
            class: CellClass::HalfRow,
            target_one: false,
            cc_both_ones: false,
            vgb: vgb_of(CellClass::HalfRow, CellVariant::Plain),
            cells: half_row,
        });
        // Half-col: accessed columns, other rows; bias follows the column data.
        let mut hc0 = Vec::new();
        let mut hc1 = Vec::new();
        for r in 0..cfg.n_r {
            if r == row {
                continue;
            }
            for (i, &bit) in word.iter().enumerate() {
                let cell = r * cfg.n_c + col0 + i;
                if bit {
                    hc1.push(cell);
                } else {
                    hc0.push(cell);
                }
            }
        }
        pops.push(Population {
            class: CellClass::HalfCol,
            target_one: false,
            cc_both_ones: false,
            vgb: vgb_of(CellClass::HalfCol, CellVariant::Data0),
            cells: hc0,
        });
        pops.push(Population {
            class: CellClass::HalfCol,
            target_one: true,
            cc_both_ones: false,
            vgb: vgb_of(CellClass::HalfCol, CellVariant::Data1),
            cells: hc1,
        });
        pops
    }

    /// Reads the word at `addr`. State is untouched (shared reference).
    pub fn read(&self, addr: usize) -> Result<(ReadResult, OpRecord)> {
        let cfg = &self.cfg;
        let (row, wcol) = cfg.locate(addr)?;
        let plan = plan_read(cfg)?;
        let disturb = check_disturb(&plan, cfg)?;
        if let Some(v) = disturb.violations().first() {
            return Err(SimError::DisturbViolation {
                phase: v.phase,
                class: v.class.name(),
                v_gb: v.v_gb.abs(),
                v_c: disturb.v_c,
            });
        }
        let col0 = wcol * cfg.n_w;

        let mut logs = vec![PhaseLog::new("read")];
        let mut recover = PhaseLog::new("recover");
        recover.off_critical_path = true;
        logs.push(recover);
        let specs = self.line_specs(&plan, 0, cfg.n_w, None);
        self.line_events_into_logs(&specs, &mut logs);
        let settles = self.phase_settles(&specs, 1);

        let result = if cfg.arch == Arch::Cc {
            self.read_cc(row, col0, &mut logs)?
        } else {
            self.read_linear(&plan, row, col0, &mut logs)?
        };
        if result.worst_ratio < cfg.min_sense_ratio {
            return Err(SimError::SenseMarginFailure {
                ratio: result.worst_ratio,
                minimum: cfg.min_sense_ratio,
            });
        }

        // Sense slew on the bit line.
        let sense_line = if cfg.arch == Arch::Cc {
            LineClass::Bl1
        } else {
            LineClass::Rbl
        };
        let bl_load = self.line_load(sense_line, cfg.wire.r_driver);
        logs[0].sense_c = Some(bl_load.c_wire + bl_load.c_attached);

        let durations = vec![settles[0]];
        let log = EventLog {
            arch: cfg.arch,
            kappa: self.kappa(),
            phases: logs,
            leak: None,
        };
        Ok((
            result,
            OpRecord {
                log,
                disturb,
                phase_durations: durations,
            },
        ))
    }

    fn read_linear(
        &self,
        plan: &PhasePlan,
        row: usize,
        col0: usize,
        logs: &mut [PhaseLog],
    ) -> Result<ReadResult> {
        let cfg = &self.cfg;
        let plate = match cfg.arch {
            Arch::Hd => LineClass::Wl,
            _ if cfg.segmented => LineClass::Lpl,
            _ => LineClass::Pl,
        };
        let v_g = plan.phases[0].volts(plate, LineGroup::Accessed).unwrap();
        let bias = BiasPoint {
            v_g,
            v_b: 0.0,
            v_d: cfg.device.v_dd,
            v_s: 0.0,
        };
        // Distinct stored values in the word share one current evaluation.
        let mut current_of: BTreeMap<u64, f64> = BTreeMap::new();
        let mut currents = Vec::with_capacity(cfg.n_w);
        for i in 0..cfg.n_w {
            let p = self.p[row * cfg.n_c + col0 + i];
            let entry = match current_of.get(&p.to_bits()) {
                Some(&i_d) => i_d,
                None => {
                    let i_d = read_current(p, bias, &cfg.device)?;
                    current_of.insert(p.to_bits(), i_d);
                    i_d
                }
            };
            currents.push(entry);
        }
        let i_lrs = read_current(self.p_s, bias, &cfg.device)?;
        let i_hrs = read_current(-self.p_s, bias, &cfg.device)?;
        let i_ref = (i_lrs * i_hrs).sqrt();
        let bits = currents.iter().map(|&c| c > i_ref).collect();

        // Film excursions along the asserted plate row.
        let accessed = cfg.n_w;
        let half_row = match cfg.arch {
            Arch::Hd => cfg.n_c - cfg.n_w,
            _ if !cfg.segmented => cfg.n_c - cfg.n_w,
            _ => 0,
        };
        self.pe_events_into_logs(CellClass::Accessed, accessed, &[v_g], logs);
        self.pe_events_into_logs(CellClass::HalfRow, half_row, &[v_g], logs);

        Ok(ReadResult {
            currents,
            bits,
            i_ref,
            worst_ratio: i_lrs / i_hrs,
            cc_cases: None,
        })
    }

    fn read_cc(&self, row: usize, col0: usize, logs: &mut [PhaseLog]) -> Result<ReadResult> {
        let cfg = &self.cfg;
        let v_wl = cfg.device.v_dd;
        let v_bl = cfg.device.v_r;
        let mut solutions: BTreeMap<(u64, u64), CcReadSolution> = BTreeMap::new();
        let mut currents = Vec::with_capacity(cfg.n_w);
        let mut cases = Vec::with_capacity(cfg.n_w / 2);
        let mut node_events: BTreeMap<(u64, u64), usize> = BTreeMap::new();
        for pair in 0..cfg.n_w / 2 {
            let p_a = self.p[row * cfg.n_c + col0 + 2 * pair];
            let p_b = self.p[row * cfg.n_c + col0 + 2 * pair + 1];
            let key = (p_a.to_bits(), p_b.to_bits());
            let sol = match solutions.get(&key) {
                Some(s) => *s,
                None => {
                    let s = solve_cc_read(p_a, p_b, &cfg.device, v_wl, v_bl)?;
                    solutions.insert(key, s);
                    s
                }
            };
            currents.push(sol.i_bl1);
            currents.push(sol.i_bl2);
            cases.push(sol.case);
            *node_events.entry(key).or_insert(0) += 1;
        }
        // Worst corners define the reference.
        let s11 = solve_cc_read(self.p_s, self.p_s, &cfg.device, v_wl, v_bl)?;
        let s00 = solve_cc_read(-self.p_s, -self.p_s, &cfg.device, v_wl, v_bl)?;
        let i_ref = (s11.i_bl1 * s00.i_bl1).sqrt();
        let bits = currents.iter().map(|&c| c > i_ref).collect();

        // Internal node charging: both films of a pair charge toward their
        // solved node voltages through the access transistors.
        for (key, count) in &node_events {
            let sol = solutions[key];
            self.pe_events_into_logs(CellClass::Accessed, *count, &[sol.v_da], logs);
            self.pe_events_into_logs(CellClass::Accessed, *count, &[sol.v_db], logs);
        }
        let r_ax = ax_effective_resistance(s11.v_da, v_wl, v_bl, &cfg.device)?;
        logs[0]
            .extra_settle
            .push((r_ax, self.c_pe_cell + cfg.wire.c_junction));

        Ok(ReadResult {
            currents,
            bits,
            i_ref,
            worst_ratio: s11.i_bl1 / s00.i_bl1,
            cc_cases: Some(cases),
        })
    }
}

/// Cross-coupled data statistics of a word.
#[derive(Debug, Clone, Copy)]
struct CcCounts {
    a_ones: usize,
    b_ones: usize,
}

impl CcCounts {
    fn from_word(word: &[bool]) -> Self {
        let mut a_ones = 0;
        let mut b_ones = 0;
        for pair in 0..word.len() / 2 {
            if word[2 * pair] {
                a_ones += 1;
            }
            if word[2 * pair + 1] {
                b_ones += 1;
            }
        }
        CcCounts { a_ones, b_ones }
    }
}

/// One simulated cell population: a class plus bias variant and members.
#[derive(Debug, Clone)]
struct Population {
    class: CellClass,
    target_one: bool,
    /// Both sides of the cross-coupled pair write +P (the delayed case).
    cc_both_ones: bool,
    vgb: Vec<f64>,
    cells: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::Arch;

    fn small(arch: Arch) -> ArraySim {
        let mut cfg = ArrayConfig::new(arch, 8, 8);
        cfg.n_w = 8;
        ArraySim::new(cfg).unwrap()
    }

    fn word(bits: &str) -> Vec<bool> {
        bits.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn hd_roundtrip() {
        let mut sim = small(Arch::Hd);
        let w = word("10110010");
        sim.write(0, &w).unwrap();
        let (res, _) = sim.read(0).unwrap();
        assert_eq!(res.bits, w);
    }

    #[test]
    fn all_arch_roundtrip() {
        for arch in Arch::ALL {
            let mut sim = small(arch);
            let w = word("11010001");
            sim.write(1, &w).unwrap();
            let (res, _) = sim.read(1).unwrap();
            assert_eq!(res.bits, w, "{}", arch.name());
        }
    }

    #[test]
    fn unaccessed_words_keep_their_bits() {
        let mut sim = small(Arch::Hd);
        sim.write(2, &word("11111111")).unwrap();
        sim.write(5, &word("00000000")).unwrap();
        sim.write(3, &word("10101010")).unwrap();
        let (r2, _) = sim.read(2).unwrap();
        assert_eq!(r2.bits, word("11111111"));
        let (r5, _) = sim.read(5).unwrap();
        assert_eq!(r5.bits, word("00000000"));
    }

    #[test]
    fn read_does_not_move_state() {
        let mut sim = small(Arch::Tall);
        sim.write(0, &word("10011001")).unwrap();
        let before = sim.polarizations().to_vec();
        let _ = sim.read(0).unwrap();
        assert_eq!(before, sim.polarizations());
    }

    #[test]
    fn cc_read_reports_cases() {
        let mut sim = small(Arch::Cc);
        sim.write(0, &word("11000110")).unwrap();
        let (res, _) = sim.read(0).unwrap();
        assert_eq!(res.cc_cases.as_ref().unwrap().len(), 4);
        assert_eq!(res.bits, word("11000110"));
        assert_eq!(res.cc_cases.unwrap(), vec!["11", "00", "01", "10"]);
    }

    #[test]
    fn exact_mode_energy_matches_aggregated() {
        for arch in Arch::ALL {
            let w = word("10010110");
            let mut fast = small(arch);
            let mut cfgx = fast.cfg.clone();
            cfgx.exact_mode = true;
            let mut exact = ArraySim::new(cfgx).unwrap();
            let rec_f = fast.write(0, &w).unwrap();
            let rec_x = exact.write(0, &w).unwrap();
            let wire = fast.cfg.wire;
            let ef = rec_f.energy(&wire);
            let ex = rec_x.energy(&wire);
            let rel = (ef.total - ex.total).abs() / ex.total.abs();
            assert!(rel < 1e-9, "{}: rel {rel}", arch.name());
            assert_eq!(fast.polarizations(), exact.polarizations());
        }
    }
}
