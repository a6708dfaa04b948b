//! Per-architecture bias plans for write and read, the cell-class bias
//! taxonomy, and the disturb check.
//!
//! Write protocols are two-phase so both data values land in one pass:
//!
//! - HD drives the accessed write bit lines to -+v_dd/2 and steps the word
//!   line from -v_dd/2 to +v_dd/2, so accessed cells see a full +-v_dd
//!   across the film in exactly one phase while half-accessed cells never
//!   exceed v_dd/2.
//! - Segmented 1T cells step the accessed global plate line 0 -> v_dd; the
//!   word line carries v_dd + v_t0 so the access transistors pass a full
//!   v_dd from the write bit lines, and the buffered local plate line
//!   restores to the word-line rail.
//! - Cross-coupled cells write +P in phase 1 (plate low, bit line high via
//!   the partner side) and -P in phase 2 (plate high, bit line low). Writing
//!   +P to both sides of a pair turns both channels on and sags the internal
//!   nodes by a solved droop, slowing that case down.

use super::{ArrayConfig, LineAssign, LineGroup, OpKind, Phase, PhasePlan};
use crate::error::Result;
use crate::metrics::{Arch, CellClass, LineClass};

/// Data-dependent variant of a cell class within a plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellVariant {
    /// No data dependence.
    Plain,
    /// Cell (or its column) carries logic 0.
    Data0,
    /// Cell (or its column) carries logic 1.
    Data1,
    /// Cross-coupled pair targets, (self, partner).
    CcPair(bool, bool),
}

impl CellVariant {
    pub fn name(self) -> &'static str {
        match self {
            CellVariant::Plain => "-",
            CellVariant::Data0 => "data0",
            CellVariant::Data1 => "data1",
            CellVariant::CcPair(false, false) => "cc00",
            CellVariant::CcPair(false, true) => "cc01",
            CellVariant::CcPair(true, false) => "cc10",
            CellVariant::CcPair(true, true) => "cc11",
        }
    }
}

fn assign(line: LineClass, group: LineGroup, volts: f64) -> LineAssign {
    LineAssign { line, group, volts }
}

/// Builds the write plan for one word.
pub fn plan_write(cfg: &ArrayConfig) -> Result<PhasePlan> {
    cfg.validate()?;
    let v_dd = cfg.device.v_dd;
    let v_half = 0.5 * v_dd;
    // Word-line boost for access transistors passing a full v_dd.
    let v_wl_boost = v_dd + cfg.device.fet.v_t0;
    // Transient node sag of the same-state +P write; the sources float
    // during write phases, so the sag decays once the source rail settles.
    let droop = if cfg.arch == Arch::Cc {
        super::cc::solve_cc_write_droop(&cfg.device, v_wl_boost)?
    } else {
        0.0
    };
    let phases = match (cfg.arch, cfg.segmented) {
        (Arch::Hd, _) => vec![
            Phase {
                label: "phi1",
                lines: vec![
                    assign(LineClass::Wl, LineGroup::Accessed, -v_half),
                    assign(LineClass::Wl, LineGroup::Unaccessed, 0.0),
                    assign(LineClass::Wbl, LineGroup::AccessedData0, v_half),
                    assign(LineClass::Wbl, LineGroup::AccessedData1, -v_half),
                    assign(LineClass::Wbl, LineGroup::Unaccessed, 0.0),
                    assign(LineClass::Rbl, LineGroup::Accessed, 0.0),
                    assign(LineClass::Rbl, LineGroup::Unaccessed, 0.0),
                ],
            },
            Phase {
                label: "phi2",
                lines: vec![
                    assign(LineClass::Wl, LineGroup::Accessed, v_half),
                    assign(LineClass::Wl, LineGroup::Unaccessed, 0.0),
                    assign(LineClass::Wbl, LineGroup::AccessedData0, v_half),
                    assign(LineClass::Wbl, LineGroup::AccessedData1, -v_half),
                    assign(LineClass::Wbl, LineGroup::Unaccessed, 0.0),
                    assign(LineClass::Rbl, LineGroup::Accessed, 0.0),
                    assign(LineClass::Rbl, LineGroup::Unaccessed, 0.0),
                ],
            },
        ],
        (Arch::Tall | Arch::Wide, true) => {
            let mk = |gpl: f64, lpl: f64| Phase {
                label: if gpl == 0.0 { "phi1" } else { "phi2" },
                lines: vec![
                    assign(LineClass::Wl, LineGroup::Accessed, v_wl_boost),
                    assign(LineClass::Wl, LineGroup::Unaccessed, 0.0),
                    assign(LineClass::Gpl, LineGroup::Accessed, gpl),
                    assign(LineClass::Gpl, LineGroup::Unaccessed, 0.0),
                    assign(LineClass::Lpl, LineGroup::Accessed, lpl),
                    assign(LineClass::Lpl, LineGroup::Unaccessed, 0.0),
                    assign(LineClass::Wbl, LineGroup::AccessedData0, v_dd),
                    assign(LineClass::Wbl, LineGroup::AccessedData1, 0.0),
                    assign(LineClass::Wbl, LineGroup::Unaccessed, 0.0),
                    assign(LineClass::Rbl, LineGroup::Accessed, 0.0),
                    assign(LineClass::Rbl, LineGroup::Unaccessed, 0.0),
                ],
            };
            // The buffer restores the local plate to the word-line rail.
            vec![mk(0.0, 0.0), mk(v_dd, v_wl_boost)]
        }
        (Arch::Tall | Arch::Wide, false) => {
            // Direct per-row plate drive; half-row cells are protected by
            // holding their write bit lines at v_dd/2.
            let mk = |pl: f64| Phase {
                label: if pl == 0.0 { "phi1" } else { "phi2" },
                lines: vec![
                    assign(LineClass::Wl, LineGroup::Accessed, v_wl_boost),
                    assign(LineClass::Wl, LineGroup::Unaccessed, 0.0),
                    assign(LineClass::Pl, LineGroup::Accessed, pl),
                    assign(LineClass::Pl, LineGroup::Unaccessed, 0.0),
                    assign(LineClass::Wbl, LineGroup::AccessedData0, v_dd),
                    assign(LineClass::Wbl, LineGroup::AccessedData1, 0.0),
                    assign(LineClass::Wbl, LineGroup::Unaccessed, v_half),
                    assign(LineClass::Rbl, LineGroup::Accessed, 0.0),
                    assign(LineClass::Rbl, LineGroup::Unaccessed, 0.0),
                ],
            };
            vec![mk(0.0), mk(v_dd)]
        }
        (Arch::Cc, segmented) => {
            let plate = if segmented { LineClass::Lpl } else { LineClass::Pl };
            // Unsegmented rows share the asserted plate, so idle bit lines
            // guard their cells at v_dd/2.
            let bl_guard = if segmented { 0.0 } else { v_half };
            let mk = |pl: f64| {
                let mut lines = vec![
                    assign(LineClass::Wl, LineGroup::Accessed, v_wl_boost),
                    assign(LineClass::Wl, LineGroup::Unaccessed, 0.0),
                    assign(plate, LineGroup::Accessed, pl),
                    assign(plate, LineGroup::Unaccessed, 0.0),
                    // A bit line is high when the bit written through it
                    // (the partner side of its cell) is logic 1.
                    assign(LineClass::Bl1, LineGroup::AccessedData0, 0.0),
                    assign(LineClass::Bl1, LineGroup::AccessedData1, v_dd),
                    assign(LineClass::Bl1, LineGroup::Unaccessed, bl_guard),
                    assign(LineClass::Bl2, LineGroup::AccessedData0, 0.0),
                    assign(LineClass::Bl2, LineGroup::AccessedData1, v_dd),
                    assign(LineClass::Bl2, LineGroup::Unaccessed, bl_guard),
                    // Source gate asserted: the accessed sources float so the
                    // bit lines can charge the cross-coupled nodes fully.
                    assign(LineClass::Sl, LineGroup::Accessed, v_dd),
                    assign(LineClass::Sl, LineGroup::Unaccessed, 0.0),
                ];
                if segmented {
                    lines.push(assign(LineClass::Gpl, LineGroup::Accessed, pl));
                    lines.push(assign(LineClass::Gpl, LineGroup::Unaccessed, 0.0));
                }
                Phase {
                    label: if pl == 0.0 { "phi1" } else { "phi2" },
                    lines,
                }
            };
            vec![mk(0.0), mk(v_dd)]
        }
    };
    let plan = PhasePlan {
        arch: cfg.arch,
        segmented: cfg.segmented,
        op: OpKind::Write,
        phases,
        cc_write_droop: droop,
    };
    plan.validate_complete()?;
    Ok(plan)
}

/// Builds the single-phase read plan.
pub fn plan_read(cfg: &ArrayConfig) -> Result<PhasePlan> {
    cfg.validate()?;
    let v_dd = cfg.device.v_dd;
    let v_r = cfg.device.v_r;
    let lines = match (cfg.arch, cfg.segmented) {
        (Arch::Hd, _) => vec![
            assign(LineClass::Wl, LineGroup::Accessed, v_r),
            assign(LineClass::Wl, LineGroup::Unaccessed, 0.0),
            assign(LineClass::Wbl, LineGroup::Accessed, 0.0),
            assign(LineClass::Wbl, LineGroup::Unaccessed, 0.0),
            assign(LineClass::Rbl, LineGroup::Accessed, v_dd),
            assign(LineClass::Rbl, LineGroup::Unaccessed, 0.0),
        ],
        (Arch::Tall | Arch::Wide, true) => vec![
            assign(LineClass::Wl, LineGroup::Accessed, v_r),
            assign(LineClass::Wl, LineGroup::Unaccessed, 0.0),
            assign(LineClass::Gpl, LineGroup::Accessed, v_r),
            assign(LineClass::Gpl, LineGroup::Unaccessed, 0.0),
            assign(LineClass::Lpl, LineGroup::Accessed, v_r),
            assign(LineClass::Lpl, LineGroup::Unaccessed, 0.0),
            assign(LineClass::Wbl, LineGroup::Accessed, 0.0),
            assign(LineClass::Wbl, LineGroup::Unaccessed, 0.0),
            assign(LineClass::Rbl, LineGroup::Accessed, v_dd),
            assign(LineClass::Rbl, LineGroup::Unaccessed, 0.0),
        ],
        (Arch::Tall | Arch::Wide, false) => vec![
            assign(LineClass::Wl, LineGroup::Accessed, v_r),
            assign(LineClass::Wl, LineGroup::Unaccessed, 0.0),
            assign(LineClass::Pl, LineGroup::Accessed, v_r),
            assign(LineClass::Pl, LineGroup::Unaccessed, 0.0),
            assign(LineClass::Wbl, LineGroup::Accessed, 0.0),
            assign(LineClass::Wbl, LineGroup::Unaccessed, 0.0),
            assign(LineClass::Rbl, LineGroup::Accessed, v_dd),
            assign(LineClass::Rbl, LineGroup::Unaccessed, 0.0),
        ],
        (Arch::Cc, segmented) => {
            let mut lines = vec![
                assign(LineClass::Wl, LineGroup::Accessed, v_dd),
                assign(LineClass::Wl, LineGroup::Unaccessed, 0.0),
                assign(LineClass::Bl1, LineGroup::Accessed, v_r),
                assign(LineClass::Bl1, LineGroup::Unaccessed, 0.0),
                assign(LineClass::Bl2, LineGroup::Accessed, v_r),
                assign(LineClass::Bl2, LineGroup::Unaccessed, 0.0),
            ];
            let plate = if segmented { LineClass::Lpl } else { LineClass::Pl };
            lines.push(assign(plate, LineGroup::Accessed, 0.0));
            lines.push(assign(plate, LineGroup::Unaccessed, 0.0));
            // Sources grounded for the read current path.
            lines.push(assign(LineClass::Sl, LineGroup::Accessed, 0.0));
            lines.push(assign(LineClass::Sl, LineGroup::Unaccessed, 0.0));
            if segmented {
                lines.push(assign(LineClass::Gpl, LineGroup::Accessed, 0.0));
                lines.push(assign(LineClass::Gpl, LineGroup::Unaccessed, 0.0));
            }
            lines
        }
    };
    let plan = PhasePlan {
        arch: cfg.arch,
        segmented: cfg.segmented,
        op: OpKind::Read,
        phases: vec![Phase {
            label: "read",
            lines,
        }],
        cc_write_droop: 0.0,
    };
    plan.validate_complete()?;
    Ok(plan)
}

/// Gate-to-back voltage a cell of the given class and data variant sees in
/// the given phase. Floating back contacts (access transistor off, plate
/// quiet) are treated as zero bias.
pub fn cell_vgb(plan: &PhasePlan, phase: usize, class: CellClass, variant: CellVariant) -> f64 {
    let ph = &plan.phases[phase];
    let data_group = |v: CellVariant| match v {
        CellVariant::Data0 => LineGroup::AccessedData0,
        CellVariant::Data1 => LineGroup::AccessedData1,
        _ => LineGroup::Accessed,
    };
    match (plan.arch, plan.segmented) {
        (Arch::Hd, _) => {
            let wl = match class {
                CellClass::Accessed | CellClass::HalfRow => {
                    ph.volts(LineClass::Wl, LineGroup::Accessed).unwrap()
                }
                _ => ph.volts(LineClass::Wl, LineGroup::Unaccessed).unwrap(),
            };
            let wbl = match class {
                CellClass::Accessed | CellClass::HalfCol => {
                    if plan.op == OpKind::Read {
                        ph.volts(LineClass::Wbl, LineGroup::Accessed).unwrap()
                    } else {
                        ph.volts(LineClass::Wbl, data_group(variant)).unwrap()
                    }
                }
                _ => ph.volts(LineClass::Wbl, LineGroup::Unaccessed).unwrap(),
            };
            wl - wbl
        }
        (Arch::Tall | Arch::Wide, segmented) => {
            let plate_line = if segmented { LineClass::Lpl } else { LineClass::Pl };
            match class {
                CellClass::Accessed => {
                    let plate = ph.volts(plate_line, LineGroup::Accessed).unwrap();
                    let b = if plan.op == OpKind::Read {
                        ph.volts(LineClass::Wbl, LineGroup::Accessed).unwrap()
                    } else {
                        ph.volts(LineClass::Wbl, data_group(variant)).unwrap()
                    };
                    plate - b
                }
                CellClass::HalfRow => {
                    if segmented {
                        // Other segments: plate quiet, back held at 0 by the
                        // (on) access transistor and its 0 V bit line.
                        0.0
                    } else {
                        // Shared row plate asserted; bit line guard at v_dd/2.
                        let plate = ph.volts(plate_line, LineGroup::Accessed).unwrap();
                        let b = ph.volts(LineClass::Wbl, LineGroup::Unaccessed).unwrap();
                        plate - b
                    }
                }
                // Access transistor off: back contact floats with its plate.
                CellClass::HalfCol | CellClass::Unaccessed => 0.0,
            }
        }
        (Arch::Cc, _) => {
            let plate_line = if plan.segmented { LineClass::Lpl } else { LineClass::Pl };
            match class {
                CellClass::Accessed => {
                    let plate = ph.volts(plate_line, LineGroup::Accessed).unwrap();
                    let (t_self, t_partner) = match variant {
                        CellVariant::CcPair(a, b) => (a, b),
                        _ => (false, false),
                    };
                    if plan.op == OpKind::Read {
                        // Bounded by the bit-line precharge; the exact node
                        // voltage comes from the coupled solve.
                        let bl = ph.volts(LineClass::Bl1, LineGroup::Accessed).unwrap();
                        return bl - plate;
                    }
                    // The gate of this PE follows its own target's bit line,
                    // sagged when both sides of the pair write +P.
                    let gate = if t_self {
                        let g = ph.volts(LineClass::Bl2, LineGroup::AccessedData1).unwrap();
                        if t_partner {
                            g - plan.cc_write_droop
                        } else {
                            g
                        }
                    } else {
                        ph.volts(LineClass::Bl2, LineGroup::AccessedData0).unwrap()
                    };
                    gate - plate
                }
                CellClass::HalfRow if !plan.segmented => {
                    // Shared row plate asserted; idle bit lines guard the
                    // cross-coupled gates at their standby level.
                    let plate = ph.volts(LineClass::Pl, LineGroup::Accessed).unwrap();
                    let gate = ph.volts(LineClass::Bl1, LineGroup::Unaccessed).unwrap();
                    gate - plate
                }
                _ => 0.0,
            }
        }
    }
}

/// One disturb-check observation.
#[derive(Debug, Clone)]
pub struct DisturbEntry {
    pub phase: &'static str,
    pub class: CellClass,
    pub variant: CellVariant,
    pub v_gb: f64,
    /// Accessed cells exceed the coercive voltage on purpose during writes.
    pub intended_switch: bool,
}

/// Disturb analysis of a plan.
#[derive(Debug, Clone)]
pub struct DisturbReport {
    pub v_c: f64,
    pub entries: Vec<DisturbEntry>,
    /// Smallest v_c - |v_gb| over all cells not meant to switch.
    pub worst_margin: f64,
}

impl DisturbReport {
    pub fn violations(&self) -> Vec<&DisturbEntry> {
        self.entries
            .iter()
            .filter(|e| !e.intended_switch && e.v_gb.abs() >= self.v_c)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.violations().is_empty()
    }
}

/// Computes |v_gb| for every cell class, data variant and phase.
pub fn check_disturb(plan: &PhasePlan, cfg: &ArrayConfig) -> Result<DisturbReport> {
    let v_c = cfg.device.v_c()?;
    let variants: Vec<CellVariant> = if plan.arch == Arch::Cc {
        vec![
            CellVariant::CcPair(false, false),
            CellVariant::CcPair(false, true),
            CellVariant::CcPair(true, false),
            CellVariant::CcPair(true, true),
        ]
    } else {
        vec![CellVariant::Data0, CellVariant::Data1]
    };
    let mut entries = Vec::new();
    let mut worst = f64::INFINITY;
    for (pi, ph) in plan.phases.iter().enumerate() {
        for class in CellClass::ALL {
            for &variant in &variants {
                let v_gb = cell_vgb(plan, pi, class, variant);
                let intended = plan.op == OpKind::Write && class == CellClass::Accessed;
                if !intended {
                    worst = worst.min(v_c - v_gb.abs());
                }
                entries.push(DisturbEntry {
                    phase: ph.label,
                    class,
                    variant,
                    v_gb,
                    intended_switch: intended,
                });
            }
        }
    }
    Ok(DisturbReport {
        v_c,
        entries,
        worst_margin: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn hd_cfg() -> ArrayConfig {
        ArrayConfig::new(Arch::Hd, 64, 128)
    }

    #[test]
    fn hd_write_phases_hit_full_vdd_in_phase_two() {
        let cfg = hd_cfg();
        let plan = plan_write(&cfg).unwrap();
        // Writing '1': no net bias in phi1, +v_dd in phi2.
        let v1 = cell_vgb(&plan, 0, CellClass::Accessed, CellVariant::Data1);
        let v2 = cell_vgb(&plan, 1, CellClass::Accessed, CellVariant::Data1);
        assert_relative_eq!(v1, 0.0, epsilon = 1e-12);
        assert_relative_eq!(v2, 0.7, epsilon = 1e-12);
        // Writing '0': -v_dd in phi1, nothing in phi2.
        let v1 = cell_vgb(&plan, 0, CellClass::Accessed, CellVariant::Data0);
        let v2 = cell_vgb(&plan, 1, CellClass::Accessed, CellVariant::Data0);
        assert_relative_eq!(v1, -0.7, epsilon = 1e-12);
        assert_relative_eq!(v2, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn hd_half_accessed_bounded_by_half_vdd() {
        let cfg = hd_cfg();
        let plan = plan_write(&cfg).unwrap();
        let mut max_half: f64 = 0.0;
        for pi in 0..plan.phases.len() {
            for class in [CellClass::HalfRow, CellClass::HalfCol] {
                for v in [CellVariant::Data0, CellVariant::Data1] {
                    max_half = max_half.max(cell_vgb(&plan, pi, class, v).abs());
                }
            }
        }
        assert_relative_eq!(max_half, 0.35, epsilon = 1e-12);
    }

    #[test]
    fn hd_write_plan_passes_disturb_with_published_margin() {
        let cfg = hd_cfg();
        let plan = plan_write(&cfg).unwrap();
        let rep = check_disturb(&plan, &cfg).unwrap();
        assert!(rep.passed());
        // Worst case 0.35 V against v_c of about 0.63 V.
        assert!((rep.worst_margin - (rep.v_c - 0.35)).abs() < 1e-9);
    }

    #[test]
    fn adversarial_plan_is_flagged() {
        let cfg = hd_cfg();
        let mut plan = plan_write(&cfg).unwrap();
        // Drive unaccessed word lines to v_dd: half-col cells now see
        // v_dd - wbl = 1.05 V across the film.
        for a in plan.phases[0].lines.iter_mut() {
            if a.line == LineClass::Wl && a.group == LineGroup::Unaccessed {
                a.volts = 0.7;
            }
        }
        let rep = check_disturb(&plan, &cfg).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn all_zero_plan_margin_is_vc() {
        let cfg = hd_cfg();
        let mut plan = plan_read(&cfg).unwrap();
        for a in plan.phases[0].lines.iter_mut() {
            a.volts = 0.0;
        }
        let rep = check_disturb(&plan, &cfg).unwrap();
        assert!(rep.passed());
        assert_relative_eq!(rep.worst_margin, rep.v_c, epsilon = 1e-12);
    }

    #[test]
    fn segmented_unaccessed_segment_sees_nothing() {
        let cfg = ArrayConfig::new(Arch::Tall, 64, 128);
        let plan = plan_write(&cfg).unwrap();
        for pi in 0..2 {
            for class in [CellClass::HalfRow, CellClass::HalfCol, CellClass::Unaccessed] {
                for v in [CellVariant::Data0, CellVariant::Data1] {
                    assert_eq!(cell_vgb(&plan, pi, class, v), 0.0);
                }
            }
        }
    }

    #[test]
    fn tall_accessed_levels() {
        let cfg = ArrayConfig::new(Arch::Tall, 64, 128);
        let plan = plan_write(&cfg).unwrap();
        let boost = 0.7 + cfg.device.fet.v_t0;
        // '1': nothing in phi1, boosted plate in phi2.
        assert_relative_eq!(
            cell_vgb(&plan, 0, CellClass::Accessed, CellVariant::Data1),
            0.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            cell_vgb(&plan, 1, CellClass::Accessed, CellVariant::Data1),
            boost,
            epsilon = 1e-12
        );
        // '0': -v_dd in phi1.
        assert_relative_eq!(
            cell_vgb(&plan, 0, CellClass::Accessed, CellVariant::Data0),
            -0.7,
            epsilon = 1e-12
        );
    }

    #[test]
    fn tall_read_biases() {
        let cfg = ArrayConfig::new(Arch::Tall, 64, 128);
        let plan = plan_read(&cfg).unwrap();
        let ph = &plan.phases[0];
        assert_eq!(ph.volts(LineClass::Lpl, LineGroup::Accessed), Some(0.35));
        assert_eq!(ph.volts(LineClass::Wbl, LineGroup::Accessed), Some(0.0));
        assert_eq!(ph.volts(LineClass::Rbl, LineGroup::Accessed), Some(0.7));
    }

    #[test]
    fn cc_read_biases() {
        let cfg = ArrayConfig::new(Arch::Cc, 64, 128);
        let plan = plan_read(&cfg).unwrap();
        let ph = &plan.phases[0];
        assert_eq!(ph.volts(LineClass::Bl1, LineGroup::Accessed), Some(0.35));
        assert_eq!(ph.volts(LineClass::Bl2, LineGroup::Accessed), Some(0.35));
        assert_eq!(ph.volts(LineClass::Wl, LineGroup::Accessed), Some(0.7));
        assert_eq!(ph.volts(LineClass::Lpl, LineGroup::Accessed), Some(0.0));
    }

    #[test]
    fn cc_write_complementary_levels() {
        let cfg = ArrayConfig::new(Arch::Cc, 64, 128);
        let plan = plan_write(&cfg).unwrap();
        // (1, 0): +P written in phi1 at full v_dd (partner off, no droop).
        let v1 = cell_vgb(&plan, 0, CellClass::Accessed, CellVariant::CcPair(true, false));
        assert_relative_eq!(v1, 0.7, epsilon = 1e-12);
        // (0, x): -v_dd in phi2.
        let v2 = cell_vgb(&plan, 1, CellClass::Accessed, CellVariant::CcPair(false, true));
        assert_relative_eq!(v2, -0.7, epsilon = 1e-12);
        // (1, 1): sagged below v_dd in phi1 until the floated sources settle.
        let v11 = cell_vgb(&plan, 0, CellClass::Accessed, CellVariant::CcPair(true, true));
        assert!(v11 < 0.7 && v11 > 0.3, "sagged drive {v11}");
        assert!(plan.cc_write_droop > 0.0);
    }

    #[test]
    fn read_plans_pass_disturb() {
        for arch in Arch::ALL {
            let cfg = ArrayConfig::new(arch, 64, 128);
            let plan = plan_read(&cfg).unwrap();
            let rep = check_disturb(&plan, &cfg).unwrap();
            assert!(rep.passed(), "{}", arch.name());
        }
    }
}
