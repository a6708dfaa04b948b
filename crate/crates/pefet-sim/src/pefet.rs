//! The composed PeFET device: stored polarization, read current through the
//! stress-to-bandgap chain, write transients, and device distinguishability.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::ferroelectric::{
    self, LandauParams, SwitchingOptions, SwitchingTrace, Waveform,
};
use crate::tmdfet::{self, FetParams};
use crate::transduction::{self, DeviceGeometry, PiezoParams};

/// Full device configuration for one PeFET.
#[derive(Debug, Clone, Copy)]
pub struct PeFetConfig {
    pub landau: LandauParams,
    pub piezo: PiezoParams,
    pub geom: DeviceGeometry,
    pub fet: FetParams,
    /// Read gate voltage (V). Default 0.35.
    pub v_r: f64,
    /// Supply voltage (V). Default 0.7.
    pub v_dd: f64,
    /// Hard read-disturb margin below the coercive voltage (V). Default 0.1.
    pub read_margin: f64,
    /// Fraction of P_s that counts as switched. Default 0.9.
    pub switch_threshold: f64,
    /// Access-transistor channel length (m). Default 3 * l_g: the longer
    /// channel raises the access resistance that sets the cross-coupled
    /// read sense corner.
    pub ax_l: f64,
}

impl Default for PeFetConfig {
    fn default() -> Self {
        crate::calibrate::standard_model().device
    }
}

/// Terminal voltages of the four-terminal device (V).
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct BiasPoint {
    pub v_g: f64,
    pub v_b: f64,
    pub v_d: f64,
    pub v_s: f64,
}

impl BiasPoint {
    /// Standard read bias: gate at v_r, drain at v_dd, back and source grounded.
    pub fn read(cfg: &PeFetConfig) -> Self {
        BiasPoint {
            v_g: cfg.v_r,
            v_b: 0.0,
            v_d: cfg.v_dd,
            v_s: 0.0,
        }
    }
}

/// Outcome of a write transient.
#[derive(Debug, Clone)]
pub struct WriteOutcome {
    pub p_final: f64,
    pub trace: SwitchingTrace,
    /// Magnitude of the polarization change (C/m^2), for energy accounting.
    pub q_switched: f64,
}

impl PeFetConfig {
    /// Derived coercive voltage E_c * t_pe (V).
    pub fn v_c(&self) -> Result<f64> {
        Ok(ferroelectric::coercive_field(&self.landau)? * self.geom.t_pe)
    }

    /// Access-transistor model: the baseline FET at the access channel length.
    pub fn ax_params(&self) -> FetParams {
        FetParams {
            l: self.ax_l,
            ..self.fet
        }
    }

    /// Spontaneous polarization (C/m^2).
    pub fn p_s(&self) -> Result<f64> {
        ferroelectric::spontaneous_polarization(&self.landau)
    }

    /// Area ratio of the geometry.
    pub fn kappa(&self) -> Result<f64> {
        transduction::compute_kappa(&self.geom)
    }

    pub fn validate(&self) -> Result<()> {
        self.landau.validate()?;
        self.piezo.validate()?;
        self.geom.validate()?;
        self.fet.validate()?;
        let v_c = self.v_c()?;
        if self.v_r > v_c - self.read_margin {
            return Err(SimError::InvalidParameter(format!(
                "v_r = {:.3} V leaves less than the {:.2} V read margin below v_c = {:.3} V",
                self.v_r, self.read_margin, v_c
            )));
        }
        if self.v_dd <= v_c {
            return Err(SimError::InvalidParameter(format!(
                "v_dd = {:.3} V does not exceed v_c = {:.3} V; writes cannot switch",
                self.v_dd, v_c
            )));
        }
        Ok(())
    }

    /// Bandgap shift (eV) for a stored polarization `p` (C/m^2) under a
    /// gate-to-back bias `v_gb` (V).
    pub fn delta_eg(&self, p: f64, v_gb: f64) -> Result<f64> {
        let p_s = self.p_s()?;
        let p_norm = (p / p_s).clamp(-1.0, 1.0);
        let kappa = self.kappa()?;
        Ok(transduction::chain_delta_eg(
            p_norm,
            v_gb,
            kappa,
            &self.geom,
            &self.piezo,
        ))
    }
}

/// Channel current (A) through the stress-to-bandgap chain with no disturb
/// guard. Used on paths that intentionally bias the film near or above the
/// coercive voltage (write-mode node solves).
pub fn conduction_current(p: f64, bias: BiasPoint, cfg: &PeFetConfig) -> Result<f64> {
    let v_gb = bias.v_g - bias.v_b;
    let delta_eg = cfg.delta_eg(p, v_gb)?;
    tmdfet::drain_current(bias.v_g - bias.v_s, bias.v_d - bias.v_s, delta_eg, &cfg.fet)
}

/// Read current (A) for a stored polarization `p` at the given bias.
///
/// The polarization is held frozen: the read path performs no LK integration,
/// so reads are non-destructive by construction. Errors with
/// [`SimError::ReadDisturbRisk`] when |v_g - v_b| comes within the configured
/// margin of the coercive voltage.
pub fn read_current(p: f64, bias: BiasPoint, cfg: &PeFetConfig) -> Result<f64> {
    let v_gb = bias.v_g - bias.v_b;
    let v_c = cfg.v_c()?;
    if v_gb.abs() >= v_c - cfg.read_margin {
        return Err(SimError::ReadDisturbRisk {
            v_gb: v_gb.abs(),
            v_c,
            margin: v_c - v_gb.abs(),
            required: cfg.read_margin,
        });
    }
    conduction_current(p, bias, cfg)
}

/// Runs a write transient: the gate-to-back waveform (V) is applied across
/// the ferroelectric film and the polarization integrated through it.
pub fn write_transient(p0: f64, v_gb: &Waveform, cfg: &PeFetConfig) -> Result<WriteOutcome> {
    let trace = ferroelectric::simulate_switching(
        p0,
        v_gb,
        cfg.geom.t_pe,
        &cfg.landau,
        SwitchingOptions {
            switch_threshold: cfg.switch_threshold,
        },
    )?;
    let p_final = trace.final_p();
    Ok(WriteOutcome {
        p_final,
        trace,
        q_switched: (p_final - p0).abs(),
    })
}

/// LRS over HRS current ratio at the standard read bias.
pub fn device_distinguishability(cfg: &PeFetConfig) -> Result<f64> {
    let p_s = cfg.p_s()?;
    let bias = BiasPoint::read(cfg);
    let i_lrs = read_current(p_s, bias, cfg)?;
    let i_hrs = read_current(-p_s, bias, cfg)?;
    Ok(i_lrs / i_hrs)
}

/// One row of a transfer-curve sweep.
#[derive(Debug, Clone, Copy)]
pub struct IvPoint {
    pub v_gs: f64,
    pub i_lrs: f64,
    pub i_hrs: f64,
    pub i_baseline: f64,
}

/// Sweeps the gate voltage at the read drain bias and reports LRS, HRS and
/// polarization-independent baseline currents.
pub fn iv_sweep(cfg: &PeFetConfig, v_lo: f64, v_hi: f64, steps: usize) -> Result<Vec<IvPoint>> {
    let p_s = cfg.p_s()?;
    let mut rows = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let v_gs = v_lo + (v_hi - v_lo) * i as f64 / steps as f64;
        let bias = BiasPoint {
            v_g: v_gs,
            v_b: 0.0,
            v_d: cfg.v_dd,
            v_s: 0.0,
        };
        let (i_lrs, i_hrs) = (read_current(p_s, bias, cfg)?, read_current(-p_s, bias, cfg)?);
        // Baseline: gate and back swept together, so the chain sees v_gb = 0.
        let i_baseline = tmdfet::drain_current(v_gs, cfg.v_dd, 0.0, &cfg.fet)?;
        rows.push(IvPoint {
            v_gs,
            i_lrs,
            i_hrs,
            i_baseline,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> PeFetConfig {
        PeFetConfig::default()
    }

    #[test]
    fn config_margins_hold() {
        let c = cfg();
        c.validate().unwrap();
        let v_c = c.v_c().unwrap();
        assert!(c.v_r < v_c - 0.1 + 1e-12);
        assert!(c.v_dd > v_c);
        assert_relative_eq!(v_c, 0.627, max_relative = 5e-3);
    }

    #[test]
    fn zero_polarization_reads_baseline() {
        let c = cfg();
        let bias = BiasPoint::read(&c);
        let i = read_current(0.0, bias, &c).unwrap();
        let base = tmdfet::drain_current(c.v_r, c.v_dd, 0.0, &c.fet).unwrap();
        assert_eq!(i, base);
    }

    #[test]
    fn lrs_above_baseline_above_hrs() {
        let c = cfg();
        let p_s = c.p_s().unwrap();
        let bias = BiasPoint::read(&c);
        let lrs = read_current(p_s, bias, &c).unwrap();
        let base = read_current(0.0, bias, &c).unwrap();
        let hrs = read_current(-p_s, bias, &c).unwrap();
        assert!(lrs > base && base > hrs);
    }

    #[test]
    fn read_disturb_guard() {
        let c = cfg();
        let bias = BiasPoint {
            v_g: 0.55,
            v_b: 0.0,
            v_d: c.v_dd,
            v_s: 0.0,
        };
        assert!(matches!(
            read_current(0.1, bias, &c),
            Err(SimError::ReadDisturbRisk { .. })
        ));
    }

    #[test]
    fn distinguishability_near_eight() {
        let c = cfg();
        let r = device_distinguishability(&c).unwrap();
        assert!((r - 8.0).abs() / 8.0 < 0.20, "ratio = {r}");
    }

    #[test]
    fn transduction_disabled_gives_unity_ratio() {
        let mut c = cfg();
        c.piezo.a_bg = 1e-30;
        let r = device_distinguishability(&c).unwrap();
        assert_relative_eq!(r, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn two_phase_write_switches_in_second_phase() {
        let c = cfg();
        let p_s = c.p_s().unwrap();
        let wf = Waveform::phases(&[(0.0, 3e-9), (0.7, 3e-9), (0.0, 1e-9)], 10e-12);
        let out = write_transient(-p_s, &wf, &c).unwrap();
        assert_relative_eq!(out.p_final, p_s, max_relative = 1e-3);
        let ts = out.trace.switch_time.expect("switch expected");
        assert!(ts > 3e-9, "switched in phase 1 at {ts}");
        assert_relative_eq!(out.q_switched, 2.0 * p_s, max_relative = 1e-2);
    }

    #[test]
    fn rewrite_same_state_moves_nothing() {
        let c = cfg();
        let p_s = c.p_s().unwrap();
        let wf = Waveform::phases(&[(-0.7, 3e-9), (0.0, 3e-9), (0.0, 1e-9)], 10e-12);
        let out = write_transient(-p_s, &wf, &c).unwrap();
        assert!(out.p_final < 0.0);
        assert!(out.q_switched < 1e-2 * p_s, "q = {}", out.q_switched);
    }

    #[test]
    fn zero_drive_is_identity() {
        let c = cfg();
        let p_s = c.p_s().unwrap();
        let wf = Waveform::new(vec![(0.0, 0.0), (5e-9, 0.0)]).unwrap();
        let out = write_transient(p_s, &wf, &c).unwrap();
        assert_relative_eq!(out.p_final, p_s, max_relative = 1e-9);
    }

    #[test]
    fn lrs_hrs_bracket_baseline() {
        let c = cfg();
        let p_s = c.p_s().unwrap();
        let bias = BiasPoint::read(&c);
        let lrs = read_current(p_s, bias, &c).unwrap();
        let hrs = read_current(-p_s, bias, &c).unwrap();
        let base = read_current(0.0, bias, &c).unwrap();
        assert!(lrs / base > 1.0 && base / hrs > 1.0);
    }
}
