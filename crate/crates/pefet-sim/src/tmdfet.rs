//! Compact drain-current model for the monolayer-MoS2 FET.
//!
//! A single smooth charge-sheet expression covers subthreshold through triode:
//! the sheet charge is a softplus of the gate overdrive, and the current is
//! the standard drift + diffusion combination of source-side and drain-side
//! charges. Contact resistance enters through an implicit solve that feeds
//! the I*R drops back into the internal terminal voltages.
//!
//! The same model serves the PeFET read path (with a stress-dependent
//! threshold shift), the access transistors, and the SRAM baseline devices.

use serde::{Deserialize, Serialize};

use crate::constants::thermal_voltage;
use crate::error::{Result, SimError};

/// FET model parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FetParams {
    /// Channel mobility (m^2/V/s). Default 90 cm^2/Vs.
    pub mu: f64,
    /// Contact resistance per edge (Ohm*m). Default 200 Ohm*um.
    pub r_c: f64,
    /// Nominal bandgap (eV), used only for sanity clamps. Default 1.5 eV.
    pub e_g0: f64,
    /// Gate oxide thickness (m). Default 3 nm.
    pub t_tox: f64,
    /// Gate oxide permittivity (F/m). Default 3.9 * eps0.
    pub eps_ox: f64,
    /// Channel width (m). Default 30 nm.
    pub w: f64,
    /// Channel length (m). Default 20 nm.
    pub l: f64,
    /// Threshold voltage (V), calibrated.
    pub v_t0: f64,
    /// Ideality (body) factor, in [1, 2].
    pub n_id: f64,
    /// Fraction of the bandgap shift that moves the threshold, in [0, 1].
    /// 0.5 is the symmetric band-edge split.
    pub band_split: f64,
    /// Temperature (K).
    pub temp: f64,
}

impl Default for FetParams {
    /// The calibrated standard parameter set.
    fn default() -> Self {
        crate::calibrate::standard_model().fet
    }
}

impl FetParams {
    /// Uncalibrated base constants, the starting point of [`calibrate_fet`].
    pub fn base() -> Self {
        FetParams {
            mu: 90.0e-4,
            r_c: 200.0e-6,
            e_g0: 1.5,
            t_tox: 3e-9,
            eps_ox: 3.9 * crate::constants::EPS0,
            w: 30e-9,
            l: 20e-9,
            v_t0: 0.30,
            n_id: 1.0,
            band_split: 0.5,
            temp: 300.0,
        }
    }
}

impl FetParams {
    pub fn validate(&self) -> Result<()> {
        if self.mu <= 0.0 || self.w <= 0.0 || self.l <= 0.0 {
            return Err(SimError::InvalidParameter(
                "mu, w and l must be positive".into(),
            ));
        }
        if self.r_c < 0.0 {
            return Err(SimError::InvalidParameter("r_c must be >= 0".into()));
        }
        if !(1.0..=2.0).contains(&self.n_id) {
            return Err(SimError::InvalidParameter(format!(
                "n_id must lie in [1, 2], got {}",
                self.n_id
            )));
        }
        if !(0.0..=1.0).contains(&self.band_split) {
            return Err(SimError::InvalidParameter(format!(
                "band_split must lie in [0, 1], got {}",
                self.band_split
            )));
        }
        Ok(())
    }

    /// Oxide capacitance per area (F/m^2).
    pub fn c_ox(&self) -> f64 {
        self.eps_ox / self.t_tox
    }

    /// Thermal voltage at the model temperature (V).
    pub fn v_th(&self) -> f64 {
        thermal_voltage(self.temp)
    }

    /// Subthreshold swing (V/decade).
    pub fn subthreshold_swing(&self) -> f64 {
        self.n_id * self.v_th() * std::f64::consts::LN_10
    }

    /// Off-state current at v_gs = 0 for the given drain bias (A).
    pub fn off_current(&self, v_ds: f64) -> f64 {
        drain_current(0.0, v_ds, 0.0, self).unwrap_or(0.0)
    }
}

/// Threshold shift produced by a bandgap shift (V). `band_split` is the
/// fraction of the gap change assigned to the conduction band edge; the
/// default symmetric split is 0.5, so -51 meV of gap gives -25.5 mV.
pub fn threshold_shift_split(delta_eg: f64, band_split: f64) -> f64 {
    band_split * delta_eg
}

/// Threshold shift at the default symmetric band split.
pub fn threshold_shift(delta_eg: f64) -> f64 {
    threshold_shift_split(delta_eg, 0.5)
}

/// Numerically safe softplus, ln(1 + exp(x)).
fn softplus(x: f64) -> f64 {
    if x > 36.0 {
        x
    } else if x < -36.0 {
        x.exp()
    } else {
        x.exp().ln_1p()
    }
}

fn logistic(x: f64) -> f64 {
    if x > 36.0 {
        1.0
    } else if x < -36.0 {
        x.exp()
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Intrinsic current (no contact resistance) and its derivatives with respect
/// to v_gs and v_ds.
fn intrinsic(v_gs: f64, v_ds: f64, v_t: f64, p: &FetParams) -> (f64, f64, f64) {
    let vth = p.v_th();
    let nvt = p.n_id * vth;
    let c_ox = p.c_ox();
    let k = p.mu * p.w / p.l;
    // Sheet charges at source and drain ends.
    let us = (v_gs - v_t) / nvt;
    let ud = (v_gs - v_ds - v_t) / nvt;
    let qs = c_ox * nvt * softplus(us);
    let qd = c_ox * nvt * softplus(ud);
    let i = k * ((qs * qs - qd * qd) / (2.0 * c_ox) + vth * (qs - qd));
    // dq/dv_gs = c_ox * logistic(u); drain charge also moves with v_ds.
    let dqs = c_ox * logistic(us);
    let dqd = c_ox * logistic(ud);
    let di_dqs = k * (qs / c_ox + vth);
    let di_dqd = -k * (qd / c_ox + vth);
    let di_dvgs = di_dqs * dqs + di_dqd * dqd;
    let di_dvds = -di_dqd * dqd; // qd depends on v_gs - v_ds
    (i, di_dvgs, di_dvds)
}

const SERIES_SOLVE_REL_TOL: f64 = 1e-12;
const SERIES_SOLVE_MAX_ITERS: usize = 100;

/// Drain current (A) at the external terminals, for a bandgap shift
/// `delta_eg` (eV). Negative `v_ds` is handled by the symmetric swap.
pub fn drain_current(v_gs: f64, v_ds: f64, delta_eg: f64, p: &FetParams) -> Result<f64> {
    if v_ds < 0.0 {
        return Ok(-drain_current(v_gs - v_ds, -v_ds, delta_eg, p)?);
    }
    let v_t = p.v_t0 + threshold_shift_split(delta_eg, p.band_split);
    let r_edge = p.r_c / p.w; // Ohms per contact edge
    if r_edge == 0.0 {
        return Ok(intrinsic(v_gs, v_ds, v_t, p).0);
    }
    // Newton on F(I) = I - I0(v_gs - I*rs, v_ds - 2 I*rs).
    let mut i = intrinsic(v_gs, v_ds, v_t, p).0;
    let mut residual = f64::MAX;
    for _ in 0..SERIES_SOLVE_MAX_ITERS {
        let vgs_i = v_gs - i * r_edge;
        let vds_i = v_ds - 2.0 * i * r_edge;
        let (i0, dg, dd) = intrinsic(vgs_i, vds_i, v_t, p);
        let f = i - i0;
        let df = 1.0 + r_edge * dg + 2.0 * r_edge * dd;
        let step = f / df;
        i -= step;
        residual = step.abs();
        if residual <= SERIES_SOLVE_REL_TOL * i.abs().max(1e-18) {
            return Ok(i);
        }
    }
    Err(SimError::ConvergenceFailure {
        context: "contact-resistance series solve",
        iterations: SERIES_SOLVE_MAX_ITERS,
        residual,
    })
}

/// Small-signal output conductance dI/dV at a fixed gate voltage, by central
/// difference on the full series-resistance model (S).
pub fn output_conductance(v_gs: f64, v_ds: f64, delta_eg: f64, p: &FetParams) -> Result<f64> {
    let h = 1e-5;
    let hi = drain_current(v_gs, v_ds + h, delta_eg, p)?;
    let lo = drain_current(v_gs, (v_ds - h).max(0.0), delta_eg, p)?;
    Ok((hi - lo) / (v_ds + h - (v_ds - h).max(0.0)))
}

/// One calibration target for [`calibrate_fet`].
#[derive(Debug, Clone, Copy)]
pub enum FetAnchor {
    /// I(delta_eg) / I(0) at the given bias must equal `ratio`.
    VsBaseline {
        delta_eg: f64,
        v_gs: f64,
        v_ds: f64,
        ratio: f64,
        weight: f64,
        hard: bool,
    },
    /// I(-|delta_eg|) / I(+|delta_eg|) at the given bias must equal `ratio`.
    LrsOverHrs {
        delta_eg_mag: f64,
        v_gs: f64,
        v_ds: f64,
        ratio: f64,
        weight: f64,
        hard: bool,
    },
}

impl FetAnchor {
    fn ratio_model(&self, p: &FetParams) -> Result<f64> {
        match *self {
            FetAnchor::VsBaseline {
                delta_eg,
                v_gs,
                v_ds,
                ..
            } => {
                let num = drain_current(v_gs, v_ds, delta_eg, p)?;
                let den = drain_current(v_gs, v_ds, 0.0, p)?;
                Ok(num / den)
            }
            FetAnchor::LrsOverHrs {
                delta_eg_mag,
                v_gs,
                v_ds,
                ..
            } => {
                let num = drain_current(v_gs, v_ds, -delta_eg_mag.abs(), p)?;
                let den = drain_current(v_gs, v_ds, delta_eg_mag.abs(), p)?;
                Ok(num / den)
            }
        }
    }

    fn target(&self) -> f64 {
        match *self {
            FetAnchor::VsBaseline { ratio, .. } | FetAnchor::LrsOverHrs { ratio, .. } => ratio,
        }
    }

    fn weight(&self) -> f64 {
        match *self {
            FetAnchor::VsBaseline { weight, .. } | FetAnchor::LrsOverHrs { weight, .. } => weight,
        }
    }

    fn hard(&self) -> bool {
        match *self {
            FetAnchor::VsBaseline { hard, .. } | FetAnchor::LrsOverHrs { hard, .. } => hard,
        }
    }
}

/// Result bookkeeping for a calibration run.
#[derive(Debug, Clone)]
pub struct FetFitReport {
    /// Per-anchor (model ratio, target ratio, deviation fraction).
    pub anchors: Vec<(f64, f64, f64)>,
    /// Root-mean-square of the weighted log residuals.
    pub rms_residual: f64,
}

/// Maximum allowed deviation of any hard anchor ratio after the fit.
pub const FIT_RATIO_TOLERANCE: f64 = 0.10;

/// Fits `v_t0` and `band_split` by damped Gauss-Newton on weighted log-ratio
/// residuals. At least two independent anchors are required; hard anchors
/// must land within [`FIT_RATIO_TOLERANCE`] or the fit fails.
pub fn calibrate_fet(anchors: &[FetAnchor], base: &FetParams) -> Result<(FetParams, FetFitReport)> {
    let informative = anchors
        .iter()
        .filter(|a| (a.target() - 1.0).abs() > 1e-12)
        .count();
    if informative < 2 {
        return Err(SimError::FitFailure {
            message: format!(
                "need at least 2 informative anchors, got {informative} (underdetermined)"
            ),
            worst_dev: f64::NAN,
            tol_pct: FIT_RATIO_TOLERANCE * 100.0,
        });
    }

    let mut p = *base;
    let residuals = |p: &FetParams| -> Result<Vec<f64>> {
        anchors
            .iter()
            .map(|a| Ok(a.weight().sqrt() * (a.ratio_model(p)? / a.target()).ln()))
            .collect()
    };

    let mut r = residuals(&p)?;
    for _ in 0..200 {
        // Numeric Jacobian over (v_t0, band_split).
        let h = 1e-6;
        let mut pa = p;
        pa.v_t0 += h;
        let ra = residuals(&pa)?;
        let mut pb = p;
        pb.band_split = (pb.band_split + h).min(1.0);
        let hb = pb.band_split - p.band_split;
        let rb = residuals(&pb)?;
        let m = r.len();
        let (mut jtj00, mut jtj01, mut jtj11) = (0.0, 0.0, 0.0);
        let (mut jtr0, mut jtr1) = (0.0, 0.0);
        for i in 0..m {
            let j0 = (ra[i] - r[i]) / h;
            let j1 = if hb > 0.0 { (rb[i] - r[i]) / hb } else { 0.0 };
            jtj00 += j0 * j0;
            jtj01 += j0 * j1;
            jtj11 += j1 * j1;
            jtr0 += j0 * r[i];
            jtr1 += j1 * r[i];
        }
        let det = jtj00 * jtj11 - jtj01 * jtj01;
        let (dv, ds) = if det.abs() > 1e-18 {
            (
                (jtj11 * jtr0 - jtj01 * jtr1) / det,
                (jtj00 * jtr1 - jtj01 * jtr0) / det,
            )
        } else {
            // Rank-deficient: fall back to gradient descent.
            (jtr0 * 1e-3, jtr1 * 1e-3)
        };
        // Damped update with box constraints.
        let mut step = 1.0;
        let norm0: f64 = r.iter().map(|x| x * x).sum();
        loop {
            let mut cand = p;
            cand.v_t0 = (p.v_t0 - step * dv).clamp(0.0, 1.0);
            cand.band_split = (p.band_split - step * ds).clamp(0.0, 1.0);
            let rc = residuals(&cand)?;
            let norm: f64 = rc.iter().map(|x| x * x).sum();
            if norm < norm0 || step < 1e-6 {
                p = cand;
                r = rc;
                break;
            }
            step *= 0.5;
        }
        if r.iter().map(|x| x * x).sum::<f64>().sqrt() < 1e-12 {
            break;
        }
        if (dv.abs() + ds.abs()) < 1e-14 {
            break;
        }
    }

    let mut report = FetFitReport {
        anchors: Vec::with_capacity(anchors.len()),
        rms_residual: (r.iter().map(|x| x * x).sum::<f64>() / r.len() as f64).sqrt(),
    };
    let mut worst_hard = 0.0_f64;
    for a in anchors {
        let model = a.ratio_model(&p)?;
        let dev = (model / a.target() - 1.0).abs();
        report.anchors.push((model, a.target(), dev));
        if a.hard() {
            worst_hard = worst_hard.max(dev);
        }
    }
    if worst_hard > FIT_RATIO_TOLERANCE {
        return Err(SimError::FitFailure {
            message: "hard anchor ratios not reproduced".into(),
            worst_dev: worst_hard * 100.0,
            tol_pct: FIT_RATIO_TOLERANCE * 100.0,
        });
    }
    Ok((p, report))
}
