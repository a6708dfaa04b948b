//! Architecture-level array simulation: bias plans, disturb checks, write
//! and read execution over cell classes, and the cross-coupled node solve.
//!
//! Arrays are simulated by cell class (accessed, half-row, half-col,
//! unaccessed) multiplied by counts rather than cell by cell; groups are
//! keyed by the exact bit pattern of their polarization so the aggregation
//! is bit-identical to per-cell simulation. An exact per-cell mode exists
//! for validating that equivalence on small arrays.

mod cc;
mod plans;
mod sim;

pub use cc::{
    ax_effective_resistance, solve_cc_read, solve_cc_write_droop, solve_cc_write_load,
    CcReadSolution, CcWriteLoad,
};
pub use plans::{
    cell_vgb, check_disturb, plan_read, plan_write, CellVariant, DisturbEntry, DisturbReport,
};
pub use sim::{ArraySim, OpRecord, ReadResult};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::metrics::{Arch, LayoutRules, LineClass, SramBaseline, WireParams};
use crate::pefet::PeFetConfig;

/// Array-level configuration.
#[derive(Debug, Clone)]
pub struct ArrayConfig {
    pub arch: Arch,
    /// Rows.
    pub n_r: usize,
    /// Bit columns (the cross-coupled cell stores two bits, so it has
    /// n_c / 2 physical cell columns).
    pub n_c: usize,
    /// Word size. Reads and writes move one word.
    pub n_w: usize,
    /// Plate-line segmentation (TALL / WIDE / CC only).
    pub segmented: bool,
    pub device: PeFetConfig,
    pub wire: WireParams,
    pub rules: LayoutRules,
    pub sram: SramBaseline,
    /// Minimum worst-case LRS/HRS ratio the sense path accepts.
    pub min_sense_ratio: f64,
    /// Simulate every cell individually instead of by class groups.
    pub exact_mode: bool,
}

impl ArrayConfig {
    pub fn new(arch: Arch, n_r: usize, n_c: usize) -> Self {
        ArrayConfig {
            arch,
            n_r,
            n_c,
            n_w: 64,
            segmented: arch != Arch::Hd,
            device: PeFetConfig::default(),
            wire: WireParams::default(),
            rules: LayoutRules::default(),
            sram: SramBaseline::default(),
            min_sense_ratio: 1.5,
            exact_mode: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.device.validate()?;
        if self.n_r == 0 || self.n_c == 0 || self.n_w == 0 {
            return Err(SimError::InvalidParameter(
                "array dimensions must be positive".into(),
            ));
        }
        if self.n_c % self.n_w != 0 {
            return Err(SimError::InvalidParameter(format!(
                "n_c = {} must be divisible by the word size n_w = {}",
                self.n_c, self.n_w
            )));
        }
        if self.arch == Arch::Cc && (self.n_c % 2 != 0 || self.n_w % 2 != 0) {
            return Err(SimError::InvalidParameter(
                "cross-coupled arrays need even n_c and n_w (two bits per cell)".into(),
            ));
        }
        if self.arch == Arch::Hd && self.segmented {
            return Err(SimError::UnsupportedArch(
                "hd has no plate line to segment".into(),
            ));
        }
        Ok(())
    }

    /// Words per row.
    pub fn words_per_row(&self) -> usize {
        self.n_c / self.n_w
    }

    /// Number of word addresses.
    pub fn word_count(&self) -> usize {
        self.n_r * self.words_per_row()
    }

    /// Splits a word address into (row, word column group).
    pub fn locate(&self, addr: usize) -> Result<(usize, usize)> {
        if addr >= self.word_count() {
            return Err(SimError::InvalidParameter(format!(
                "address {addr} out of range (0..{})",
                self.word_count()
            )));
        }
        Ok((addr / self.words_per_row(), addr % self.words_per_row()))
    }
}

/// Operation selector for plans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Write,
    Read,
}

/// Line drive group within a plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineGroup {
    /// The accessed instance (or all accessed instances) of the line class.
    Accessed,
    /// Accessed lines carrying a logic-0 data value.
    AccessedData0,
    /// Accessed lines carrying a logic-1 data value.
    AccessedData1,
    /// Every other instance.
    Unaccessed,
}

impl LineGroup {
    pub fn name(self) -> &'static str {
        match self {
            LineGroup::Accessed => "accessed",
            LineGroup::AccessedData0 => "data0",
            LineGroup::AccessedData1 => "data1",
            LineGroup::Unaccessed => "unaccessed",
        }
    }
}

/// One line-class drive assignment within a phase.
#[derive(Debug, Clone, Copy)]
pub struct LineAssign {
    pub line: LineClass,
    pub group: LineGroup,
    pub volts: f64,
}

/// One protocol phase: a complete set of line drives.
#[derive(Debug, Clone)]
pub struct Phase {
    pub label: &'static str,
    pub lines: Vec<LineAssign>,
}

impl Phase {
    pub fn volts(&self, line: LineClass, group: LineGroup) -> Option<f64> {
        self.lines
            .iter()
            .find(|a| a.line == line && a.group == group)
            .map(|a| a.volts)
    }
}

/// Per-line voltages for each phase of an architecture-specific protocol.
#[derive(Debug, Clone)]
pub struct PhasePlan {
    pub arch: Arch,
    pub segmented: bool,
    pub op: OpKind,
    pub phases: Vec<Phase>,
    /// Voltage sag of the cross-coupled same-state write, solved once at
    /// phase start and held (quasi-static).
    pub cc_write_droop: f64,
}

impl PhasePlan {
    /// Every line class used by this architecture must be assigned in every
    /// phase, for both the accessed and unaccessed groups.
    pub fn validate_complete(&self) -> Result<()> {
        for line in self.line_classes() {
            for ph in &self.phases {
                let acc = ph.volts(line, LineGroup::Accessed).is_some()
                    || (ph.volts(line, LineGroup::AccessedData0).is_some()
                        && ph.volts(line, LineGroup::AccessedData1).is_some());
                let unacc = ph.volts(line, LineGroup::Unaccessed).is_some();
                if !acc || !unacc {
                    return Err(SimError::InvalidParameter(format!(
                        "phase {} leaves line class {} partially unassigned",
                        ph.label,
                        line.name()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Line classes wired in this architecture.
    pub fn line_classes(&self) -> Vec<LineClass> {
        match (self.arch, self.segmented) {
            (Arch::Hd, _) => vec![LineClass::Wl, LineClass::Wbl, LineClass::Rbl],
            (Arch::Tall | Arch::Wide, true) => vec![
                LineClass::Wl,
                LineClass::Wbl,
                LineClass::Rbl,
                LineClass::Gpl,
                LineClass::Lpl,
            ],
            (Arch::Tall | Arch::Wide, false) => vec![
                LineClass::Wl,
                LineClass::Wbl,
                LineClass::Rbl,
                LineClass::Pl,
            ],
            (Arch::Cc, true) => vec![
                LineClass::Wl,
                LineClass::Bl1,
                LineClass::Bl2,
                LineClass::Gpl,
                LineClass::Lpl,
                LineClass::Sl,
            ],
            (Arch::Cc, false) => vec![
                LineClass::Wl,
                LineClass::Bl1,
                LineClass::Bl2,
                LineClass::Pl,
                LineClass::Sl,
            ],
        }
    }
}
