//! Landau-Khalatnikov model of the PZT-5H ferroelectric capacitor.
//!
//! Statics: the field in equilibrium with polarization P is the Landau
//! polynomial E(P) = 2*alpha*P + 4*beta*P^3 + 6*gamma*P^5. With alpha < 0 and
//! beta, gamma > 0 the free energy U(P) = alpha*P^2 + beta*P^4 + gamma*P^6 has
//! two wells at +-P_s separated by a barrier; the extremum of E on the unstable
//! branch sets the coercive field E_c.
//!
//! Dynamics: viscous gradient flow rho * dP/dt = E_applied - E(P), integrated
//! with an adaptive trapezoidal scheme (Newton inner solve, step-doubling error
//! control). The equation is stiff near the well bottoms, where E'(P) is large
//! and positive.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Landau coefficients and kinetic viscosity for the ferroelectric.
///
/// Units: `alpha` m/F, `beta` m^5/F/C^2, `gamma` m^9/F/C^4, `rho` Ohm*m.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LandauParams {
    /// Second-order coefficient (m/F), negative for a double well.
    pub alpha: f64,
    /// Fourth-order coefficient (m^5/F/C^2), positive.
    pub beta: f64,
    /// Sixth-order coefficient (m^9/F/C^4), positive.
    pub gamma: f64,
    /// Kinetic viscosity (Ohm*m) governing switching speed.
    pub rho: f64,
}

impl Default for LandauParams {
    /// PZT-5H coefficients; `rho` calibrated so a 0.7 V step across a 600 nm
    /// film switches (crosses 0.9 P_s from -P_s) in 1.0 ns. Recompute with
    /// [`LandauParams::with_calibrated_rho`] after changing any coefficient.
    fn default() -> Self {
        LandauParams {
            alpha: -3.95e6,
            beta: 1.26e6,
            gamma: 3.21e8,
            rho: RHO_PZT5H_DEFAULT,
        }
    }
}

/// Default viscosity (Ohm*m). See [`LandauParams::default`].
pub const RHO_PZT5H_DEFAULT: f64 = 1.0752289008e-3;

impl LandauParams {
    pub fn validate(&self) -> Result<()> {
        if self.alpha >= 0.0 {
            return Err(SimError::NoDoubleWell { alpha: self.alpha });
        }
        if self.beta <= 0.0 || self.gamma <= 0.0 {
            return Err(SimError::InvalidParameter(format!(
                "beta and gamma must be positive (beta = {:.3e}, gamma = {:.3e})",
                self.beta, self.gamma
            )));
        }
        if self.rho <= 0.0 {
            return Err(SimError::InvalidParameter(format!(
                "rho must be positive (rho = {:.3e})",
                self.rho
            )));
        }
        Ok(())
    }

    /// Returns a copy with `rho` set so that a `v_step` step across a film of
    /// thickness `t_pe` switches from -P_s to +0.9 P_s in `t_switch` seconds.
    ///
    /// The switching time of the autonomous flow is rho times a quadrature
    /// that depends only on (alpha, beta, gamma, E), so the calibration is a
    /// single integral, deterministic to integrator precision.
    pub fn with_calibrated_rho(mut self, v_step: f64, t_pe: f64, t_switch: f64) -> Result<Self> {
        let p_s = spontaneous_polarization(&self)?;
        let e_c = coercive_field(&self)?;
        let e_app = v_step / t_pe;
        if e_app <= e_c {
            return Err(SimError::InvalidParameter(format!(
                "calibration drive {:.3e} V/m does not exceed the coercive field {:.3e} V/m",
                e_app, e_c
            )));
        }
        // t = rho * integral dP / (E - E_lk(P)) from -P_s to +0.9 P_s.
        let integrand = |p: f64| 1.0 / (e_app - lk_field(p, &self));
        let quad = composite_simpson(&integrand, -p_s, 0.9 * p_s, 1 << 20);
        self.rho = t_switch / quad;
        Ok(self)
    }
}

/// Instantaneous polarization of one capacitor at a point in time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationState {
    /// Polarization (C/m^2).
    pub p: f64,
    /// Simulation time (s).
    pub t: f64,
}

/// One output sample of a switching simulation.
#[derive(Debug, Clone, Copy)]
pub struct TraceSample {
    /// Time (s).
    pub t: f64,
    /// Polarization (C/m^2).
    pub p: f64,
    /// Applied voltage across the film (V).
    pub v: f64,
    /// Polarization current density dP/dt (A/m^2), mean over the step ending here.
    pub i_pol: f64,
}

/// Result of a time-domain switching simulation.
#[derive(Debug, Clone)]
pub struct SwitchingTrace {
    /// Samples ordered by strictly increasing time.
    pub samples: Vec<TraceSample>,
    /// First time the polarization crossed `threshold * P_s * sign(drive)`
    /// while the drive exceeded the coercive field, if it ever did.
    pub switch_time: Option<f64>,
}

impl SwitchingTrace {
    pub fn final_p(&self) -> f64 {
        self.samples.last().map(|s| s.p).unwrap_or(f64::NAN)
    }

    /// Energy delivered to the polarization, integral of v * dP * area (J).
    pub fn switching_energy(&self, area: f64) -> f64 {
        let mut e = 0.0;
        for w in self.samples.windows(2) {
            let dv = 0.5 * (w[0].v + w[1].v);
            e += dv * (w[1].p - w[0].p) * area;
        }
        e
    }

    /// Signed loop area of the E-P trajectory, integral of E dP (J/m^3).
    pub fn loop_area(&self, t_pe: f64) -> f64 {
        let mut a = 0.0;
        for w in self.samples.windows(2) {
            let e_mid = 0.5 * (w[0].v + w[1].v) / t_pe;
            a += e_mid * (w[1].p - w[0].p);
        }
        a
    }

    /// Writes the trace as CSV with columns `t,p,v,i_pol`.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "t,p,v,i_pol")?;
        for s in &self.samples {
            writeln!(out, "{:.9e},{:.9e},{:.9e},{:.9e}", s.t, s.p, s.v, s.i_pol)?;
        }
        Ok(())
    }
}

/// Piecewise-linear voltage waveform, breakpoints at strictly increasing times.
#[derive(Debug, Clone)]
pub struct Waveform {
    points: Vec<(f64, f64)>,
}

impl Waveform {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(SimError::InvalidParameter(
                "waveform needs at least one breakpoint".into(),
            ));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(SimError::InvalidParameter(format!(
                    "waveform breakpoints must strictly increase in t ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        Ok(Waveform { points })
    }

    /// Flat pulse at `v` for `width` seconds with linear edges of `ramp` seconds.
    pub fn square_pulse(v: f64, width: f64, ramp: f64) -> Self {
        Waveform {
            points: vec![
                (0.0, 0.0),
                (ramp, v),
                (ramp + width, v),
                (2.0 * ramp + width, 0.0),
            ],
        }
    }

    /// Symmetric triangular sweep 0 -> +v -> -v -> 0 over one period.
    pub fn triangle(v: f64, period: f64) -> Self {
        Waveform {
            points: vec![
                (0.0, 0.0),
                (0.25 * period, v),
                (0.75 * period, -v),
                (period, 0.0),
            ],
        }
    }

    /// Stepped multi-phase drive: each `(level, duration)` held flat, joined by
    /// `ramp`-second linear edges, starting and ending at 0 V.
    pub fn phases(levels: &[(f64, f64)], ramp: f64) -> Self {
        let mut pts = vec![(0.0, 0.0)];
        let mut t = 0.0;
        let mut v = 0.0;
        for &(level, dur) in levels {
            if (level - v).abs() > 0.0 {
                t += ramp;
                pts.push((t, level));
            }
            t += dur.max(ramp);
            pts.push((t, level));
            v = level;
        }
        if v != 0.0 {
            t += ramp;
            pts.push((t, 0.0));
        }
        // Collapse any accidental duplicate times from zero-duration holds.
        pts.dedup_by(|b, a| b.0 <= a.0);
        Waveform { points: pts }
    }

    pub fn value_at(&self, t: f64) -> f64 {
        let pts = &self.points;
        if t <= pts[0].0 {
            return pts[0].1;
        }
        if t >= pts[pts.len() - 1].0 {
            return pts[pts.len() - 1].1;
        }
        let idx = pts.partition_point(|&(tp, _)| tp <= t);
        let (t0, v0) = pts[idx - 1];
        let (t1, v1) = pts[idx];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    pub fn end_time(&self) -> f64 {
        self.points[self.points.len() - 1].0
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn peak_abs(&self) -> f64 {
        self.points.iter().map(|&(_, v)| v.abs()).fold(0.0, f64::max)
    }
}

/// Quasi-static Landau field E(P) = 2aP + 4bP^3 + 6cP^5 (V/m).
pub fn lk_field(p: f64, params: &LandauParams) -> f64 {
    let p2 = p * p;
    p * (2.0 * params.alpha + p2 * (4.0 * params.beta + p2 * 6.0 * params.gamma))
}

/// Derivative dE/dP (V*m/C), used by the Newton inner solve.
pub fn lk_field_slope(p: f64, params: &LandauParams) -> f64 {
    let p2 = p * p;
    2.0 * params.alpha + p2 * (12.0 * params.beta + p2 * 30.0 * params.gamma)
}

/// Positive outer-well root of E(P) = 0 (C/m^2).
///
/// Closed form in x = P^2: 3*gamma*x^2 + 2*beta*x + alpha = 0, written in the
/// cancellation-free form x = -alpha / (beta + sqrt(beta^2 - 3*alpha*gamma)).
pub fn spontaneous_polarization(params: &LandauParams) -> Result<f64> {
    if params.alpha >= 0.0 {
        return Err(SimError::NoDoubleWell {
            alpha: params.alpha,
        });
    }
    let disc = params.beta * params.beta - 3.0 * params.alpha * params.gamma;
    let x = -params.alpha / (params.beta + disc.sqrt());
    Ok(x.sqrt())
}

/// Magnitude of the field extremum on the unstable branch (V/m).
///
/// The extremum sits at the positive root of E'(P) = 0, i.e. of
/// 15*gamma*x^2 + 6*beta*x + alpha = 0 with x = P^2.
pub fn coercive_field(params: &LandauParams) -> Result<f64> {
    let p = unstable_extremum_p(params)?;
    Ok(lk_field(p, params).abs())
}

/// Polarization at the unstable-branch extremum (C/m^2).
pub fn unstable_extremum_p(params: &LandauParams) -> Result<f64> {
    if params.alpha >= 0.0 {
        return Err(SimError::NoDoubleWell {
            alpha: params.alpha,
        });
    }
    let disc = 9.0 * params.beta * params.beta - 15.0 * params.alpha * params.gamma;
    let x = -params.alpha / (3.0 * params.beta + disc.sqrt());
    Ok(x.sqrt())
}

/// Relative local error target of the adaptive integrator.
pub const INTEGRATOR_REL_TOL: f64 = 1e-8;

const MAX_NEWTON_ITERS: usize = 50;
const MIN_STEP_FRACTION: f64 = 1e-12;

/// Advances the polarization by `dt` under a constant applied field (V/m).
///
/// Internally sub-steps adaptively so the local error stays below
/// [`INTEGRATOR_REL_TOL`] regardless of how stiff the interval is.
pub fn step_polarization(
    state: PolarizationState,
    e_applied: f64,
    dt: f64,
    params: &LandauParams,
) -> Result<PolarizationState> {
    if dt <= 0.0 {
        return Err(SimError::InvalidParameter(format!(
            "dt must be positive, got {dt:.3e}"
        )));
    }
    let p = integrate_interval(state.p, |_| e_applied, dt, params, None)?;
    Ok(PolarizationState {
        p,
        t: state.t + dt,
    })
}

/// One trapezoidal step with Newton inner solve. `e0`, `e1` are the applied
/// fields at the start and end of the step.
fn trapezoidal_step(p0: f64, e0: f64, e1: f64, h: f64, params: &LandauParams) -> Result<f64> {
    let rho = params.rho;
    let f0 = (e0 - lk_field(p0, params)) / rho;
    let mut p = p0 + h * f0; // explicit Euler predictor
    let mut residual = f64::MAX;
    for _ in 0..MAX_NEWTON_ITERS {
        let g = p - p0 - 0.5 * h * (f0 + (e1 - lk_field(p, params)) / rho);
        let dg = 1.0 + 0.5 * h * lk_field_slope(p, params) / rho;
        if dg.abs() < 1e-30 {
            break;
        }
        let dp = g / dg;
        p -= dp;
        residual = dp.abs();
        if residual <= 1e-15 * p.abs().max(1e-6) {
            return Ok(p);
        }
    }
    Err(SimError::ConvergenceFailure {
        context: "trapezoidal Newton solve",
        iterations: MAX_NEWTON_ITERS,
        residual,
    })
}

/// Integrates dP/dt = (e(t) - E_lk(P)) / rho over [0, dt] with step-doubling
/// error control. `e` takes the local time within the interval. When `sink`
/// is given, every accepted sub-step is reported to it.
fn integrate_interval(
    p0: f64,
    e: impl Fn(f64) -> f64,
    dt: f64,
    params: &LandauParams,
    mut sink: Option<&mut dyn FnMut(f64, f64)>,
) -> Result<f64> {
    let mut t = 0.0;
    let mut p = p0;
    let mut h = dt;
    let h_min = dt * MIN_STEP_FRACTION;
    while t < dt {
        h = h.min(dt - t);
        // Full step vs two half steps; Richardson error estimate.
        let attempt = (|| -> Result<(f64, f64)> {
            let full = trapezoidal_step(p, e(t), e(t + h), h, params)?;
            let mid = trapezoidal_step(p, e(t), e(t + 0.5 * h), 0.5 * h, params)?;
            let half = trapezoidal_step(mid, e(t + 0.5 * h), e(t + h), 0.5 * h, params)?;
            Ok((full, half))
        })();
        let (full, half) = match attempt {
            Ok(v) => v,
            Err(_) if h > h_min => {
                h *= 0.25;
                continue;
            }
            Err(e) => return Err(e),
        };
        let err = (full - half).abs() / 3.0;
        let scale = half.abs().max(1e-3);
        if err > INTEGRATOR_REL_TOL * scale && h > h_min {
            h *= 0.5;
            continue;
        }
        // Accept, with local extrapolation.
        p = half + (half - full) / 3.0;
        t += h;
        if let Some(s) = sink.as_deref_mut() {
            s(t, p);
        }
        let grow = if err > 0.0 {
            0.9 * (INTEGRATOR_REL_TOL * scale / err).sqrt()
        } else {
            2.0
        };
        h *= grow.clamp(0.5, 2.0);
    }
    Ok(p)
}

/// Options for [`simulate_switching`].
#[derive(Debug, Clone, Copy)]
pub struct SwitchingOptions {
    /// Fraction of P_s that counts as "switched" (default 0.9).
    pub switch_threshold: f64,
}

impl Default for SwitchingOptions {
    fn default() -> Self {
        SwitchingOptions {
            switch_threshold: 0.9,
        }
    }
}

/// Runs the Landau-Khalatnikov dynamics under a voltage waveform applied
/// across a film of thickness `t_pe` (m), starting from polarization `p0`.
pub fn simulate_switching(
    p0: f64,
    waveform: &Waveform,
    t_pe: f64,
    params: &LandauParams,
    opts: SwitchingOptions,
) -> Result<SwitchingTrace> {
    params.validate()?;
    if t_pe <= 0.0 {
        return Err(SimError::InvalidParameter(format!(
            "t_pe must be positive, got {t_pe:.3e}"
        )));
    }
    let p_s = spontaneous_polarization(params)?;
    let e_c = coercive_field(params)?;
    let threshold = opts.switch_threshold * p_s;

    let mut samples = vec![TraceSample {
        t: 0.0,
        p: p0,
        v: waveform.value_at(0.0),
        i_pol: 0.0,
    }];
    let mut switch_time = None;
    let mut p = p0;
    let bps = waveform.breakpoints();
    let mut t_seg = bps[0].0.min(0.0);
    // Integrate breakpoint to breakpoint; the field is linear inside each span.
    for w in bps.windows(2) {
        let (t0, v0) = w[0];
        let (t1, v1) = w[1];
        if t1 <= t_seg {
            continue;
        }
        let seg_start = t_seg.max(t0);
        let span = t1 - seg_start;
        let e_at = |tau: f64| {
            let v = v0 + (v1 - v0) * (seg_start + tau - t0) / (t1 - t0);
            v / t_pe
        };
        let mut record = |tau: f64, p_new: f64| {
            let t_abs = seg_start + tau;
            let v = v0 + (v1 - v0) * (t_abs - t0) / (t1 - t0);
            let prev = *samples.last().unwrap();
            let i_pol = (p_new - prev.p) / (t_abs - prev.t);
            if switch_time.is_none() {
                let drive = v / t_pe;
                let s = drive.signum();
                if drive.abs() > e_c && prev.p * s < threshold && p_new * s >= threshold {
                    // Linear interpolation to the crossing inside the step.
                    let frac = (threshold - prev.p * s) / (p_new * s - prev.p * s);
                    switch_time = Some(prev.t + frac * (t_abs - prev.t));
                }
            }
            samples.push(TraceSample {
                t: t_abs,
                p: p_new,
                v,
                i_pol,
            });
        };
        p = integrate_interval(p, e_at, span, params, Some(&mut record))?;
        t_seg = t1;
    }
    let _ = p;
    Ok(SwitchingTrace {
        samples,
        switch_time,
    })
}

/// Canonical switching time (s) from -P_s to +threshold*P_s under a constant
/// voltage of magnitude `v_abs` across a film of thickness `t_pe`. The flow
/// is autonomous, so the time is an exact quadrature. Used for phase-duration
/// planning; errs when the drive does not exceed the coercive field.
pub fn switch_time_estimate(
    v_abs: f64,
    t_pe: f64,
    params: &LandauParams,
    threshold: f64,
) -> Result<f64> {
    let p_s = spontaneous_polarization(params)?;
    let e_c = coercive_field(params)?;
    let e_app = v_abs.abs() / t_pe;
    if e_app <= e_c {
        return Err(SimError::InvalidParameter(format!(
            "drive {v_abs:.3} V across {t_pe:.2e} m stays below the coercive field"
        )));
    }
    let integrand = |p: f64| 1.0 / (e_app - lk_field(p, params));
    Ok(params.rho * composite_simpson(&integrand, -p_s, threshold * p_s, 1 << 16))
}

/// Composite Simpson quadrature on [a, b] with n (even) panels. The switching
/// integrand is smooth, so a fine fixed grid is both accurate and exactly
/// reproducible.
fn composite_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    debug_assert!(n % 2 == 0);
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let x = a + h * i as f64;
        sum += f(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    /// Fixed-step explicit Euler reference integrator, oracle for the
    /// implicit path. Deliberately independent of the production code.
    pub fn euler_reference(
        p0: f64,
        e_applied: f64,
        duration: f64,
        steps: usize,
        params: &LandauParams,
    ) -> f64 {
        let h = duration / steps as f64;
        let mut p = p0;
        for _ in 0..steps {
            p += h * (e_applied - lk_field(p, params)) / params.rho;
        }
        p
    }

    /// Brute-force scan oracle for the spontaneous polarization: minimizes
    /// U(P) = a P^2 + b P^4 + c P^6 over a dense grid, then refines by
    /// golden-section search.
    pub fn brute_force_ps(params: &LandauParams) -> f64 {
        let u = |p: f64| {
            let p2 = p * p;
            p2 * (params.alpha + p2 * (params.beta + p2 * params.gamma))
        };
        let mut best = (0.0, u(0.0));
        let hi = 2.0;
        let n = 200_000;
        for i in 0..=n {
            let p = hi * i as f64 / n as f64;
            let e = u(p);
            if e < best.1 {
                best = (p, e);
            }
        }
        // Golden-section refine around the best grid point.
        let (mut a, mut b) = (best.0 - hi / n as f64, best.0 + hi / n as f64);
        let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let c = b - phi * (b - a);
            let d = a + phi * (b - a);
            if u(c) < u(d) {
                b = d;
            } else {
                a = c;
            }
        }
        0.5 * (a + b)
    }

    /// Brute-force scan oracle for the coercive field: max |E(P)| over the
    /// unstable stretch 0 < P < P_s.
    pub fn brute_force_ec(params: &LandauParams) -> f64 {
        let p_s = brute_force_ps(params);
        let n = 500_000;
        let mut best = 0.0_f64;
        for i in 1..n {
            let p = p_s * i as f64 / n as f64;
            let e = lk_field(p, params).abs();
            if e > best {
                best = e;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;
    use approx::assert_relative_eq;

    fn pzt() -> LandauParams {
        LandauParams::default()
    }

    #[test]
    fn lk_field_zero_at_origin_and_well() {
        let p = pzt();
        assert_eq!(lk_field(0.0, &p), 0.0);
        let ps = spontaneous_polarization(&p).unwrap();
        assert!(lk_field(ps, &p).abs() < 1e-3 * coercive_field(&p).unwrap());
    }

    #[test]
    fn lk_field_odd_symmetry() {
        let p = pzt();
        for &x in &[0.01, 0.1, 0.2, 0.2505, 0.3] {
            assert_eq!(lk_field(-x, &p), -lk_field(x, &p));
        }
    }

    #[test]
    fn lk_field_coercive_extremum_value() {
        // At the unstable-branch extremum the field magnitude is about 1.05 MV/m.
        let p = pzt();
        let e = lk_field(0.16695, &p);
        assert_relative_eq!(e, -1.05e6, max_relative = 5e-3);
    }

    #[test]
    fn spontaneous_polarization_matches_brute_force() {
        let p = pzt();
        let ps = spontaneous_polarization(&p).unwrap();
        assert_relative_eq!(ps, 0.2505, max_relative = 1e-3);
        let oracle = brute_force_ps(&p);
        assert_relative_eq!(ps, oracle, max_relative = 1e-6);
    }

    #[test]
    fn spontaneous_polarization_small_gamma_limit() {
        // alpha = -2, beta = 1, gamma -> 0 gives P_s = sqrt(-alpha/(2 beta)) = 1.
        let p = LandauParams {
            alpha: -2.0,
            beta: 1.0,
            gamma: 1e-12,
            rho: 1.0,
        };
        assert_relative_eq!(spontaneous_polarization(&p).unwrap(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn no_double_well_is_rejected() {
        let p = LandauParams {
            alpha: 1.0,
            ..pzt()
        };
        assert!(matches!(
            spontaneous_polarization(&p),
            Err(SimError::NoDoubleWell { .. })
        ));
        assert!(matches!(
            coercive_field(&p),
            Err(SimError::NoDoubleWell { .. })
        ));
    }

    #[test]
    fn coercive_field_matches_brute_force() {
        let p = pzt();
        let ec = coercive_field(&p).unwrap();
        let oracle = brute_force_ec(&p);
        assert_relative_eq!(ec, oracle, max_relative = 1e-6);
        // Anchor: V_C = E_c * 600 nm within 10% of 0.6 V.
        let vc = ec * 600e-9;
        assert!((vc - 0.6).abs() / 0.6 < 0.10, "vc = {vc}");
    }

    #[test]
    fn coercive_scales_inverse_with_thickness() {
        let p = pzt();
        let ec = coercive_field(&p).unwrap();
        // Doubling t_pe doubles V_C, the field itself is unchanged.
        assert_relative_eq!(ec * 1200e-9, 2.0 * (ec * 600e-9), epsilon = 1e-18);
    }

    #[test]
    fn equilibrium_is_a_fixed_point() {
        let p = pzt();
        let ps = spontaneous_polarization(&p).unwrap();
        let s0 = PolarizationState { p: ps, t: 0.0 };
        let s1 = step_polarization(s0, 0.0, 1e-9, &p).unwrap();
        assert_relative_eq!(s1.p, ps, max_relative = 1e-9);
    }

    #[test]
    fn supercoercive_field_switches_to_other_well() {
        let p = pzt();
        let ps = spontaneous_polarization(&p).unwrap();
        let ec = coercive_field(&p).unwrap();
        let mut s = PolarizationState { p: -ps, t: 0.0 };
        s = step_polarization(s, 2.0 * ec, 20e-9, &p).unwrap();
        // Oracle: tiny-step explicit Euler lands on the same driven state.
        let oracle = euler_reference(-ps, 2.0 * ec, 20e-9, 4_000_000, &p);
        assert_relative_eq!(s.p, oracle, max_relative = 1e-4);
        // Releasing the field settles the state into the +P_s well.
        s = step_polarization(s, 0.0, 5e-9, &p).unwrap();
        assert!((s.p - ps).abs() / ps < 1e-3, "p = {}", s.p);
    }

    #[test]
    fn subcoercive_field_cannot_switch() {
        let p = pzt();
        let ps = spontaneous_polarization(&p).unwrap();
        let ec = coercive_field(&p).unwrap();
        let mut s = PolarizationState { p: -ps, t: 0.0 };
        for _ in 0..10 {
            s = step_polarization(s, 0.5 * ec, 10e-9, &p).unwrap();
        }
        assert!(s.p < 0.0, "sign flipped under sub-coercive drive");
    }

    #[test]
    fn rho_calibration_hits_one_nanosecond() {
        let p = pzt().with_calibrated_rho(0.7, 600e-9, 1e-9).unwrap();
        let ps = spontaneous_polarization(&p).unwrap();
        let wf = Waveform::new(vec![(0.0, 0.7), (10e-9, 0.7)]).unwrap();
        let trace = simulate_switching(-ps, &wf, 600e-9, &p, SwitchingOptions::default()).unwrap();
        let ts = trace.switch_time.expect("should switch");
        assert_relative_eq!(ts, 1e-9, max_relative = 2e-3);
        // The shipped default equals the calibrated value.
        assert_relative_eq!(p.rho, RHO_PZT5H_DEFAULT, max_relative = 1e-6);
    }

    #[test]
    fn subcoercive_pulse_leaves_state_negative() {
        let p = pzt();
        let ps = spontaneous_polarization(&p).unwrap();
        let wf = Waveform::square_pulse(0.35, 20e-9, 10e-12);
        let trace = simulate_switching(-ps, &wf, 600e-9, &p, SwitchingOptions::default()).unwrap();
        assert!(trace.switch_time.is_none());
        assert!(trace.final_p() < 0.0);
    }

    #[test]
    fn supercoercive_pulse_switches() {
        let p = pzt();
        let ps = spontaneous_polarization(&p).unwrap();
        // Pulse plus a zero-bias tail to relax into the well bottom.
        let wf = Waveform::phases(&[(0.7, 10e-9), (0.0, 2e-9)], 10e-12);
        let trace = simulate_switching(-ps, &wf, 600e-9, &p, SwitchingOptions::default()).unwrap();
        assert!(trace.switch_time.is_some());
        assert_relative_eq!(trace.final_p(), ps, max_relative = 1e-3);
    }

    #[test]
    fn trace_samples_strictly_increasing_and_bounded() {
        let p = pzt();
        let ps = spontaneous_polarization(&p).unwrap();
        let wf = Waveform::square_pulse(0.7, 10e-9, 10e-12);
        let trace = simulate_switching(-ps, &wf, 600e-9, &p, SwitchingOptions::default()).unwrap();
        for w in trace.samples.windows(2) {
            assert!(w[1].t > w[0].t);
        }
        // The driven equilibrium sits past the zero-field well; the
        // integrator must not overshoot it. Oracle: bisect E(p) = E_drive
        // on the outer branch.
        let e_drive = 0.7 / 600e-9;
        let (mut lo, mut hi) = (ps, 2.0 * ps);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if lk_field(mid, &p) < e_drive {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let p_eq = 0.5 * (lo + hi);
        for s in &trace.samples {
            assert!(s.p.abs() <= 1.0001 * p_eq, "overshoot at t = {}", s.t);
        }
    }

    #[test]
    fn trace_current_equals_discrete_derivative() {
        let p = pzt();
        let ps = spontaneous_polarization(&p).unwrap();
        let wf = Waveform::square_pulse(0.7, 5e-9, 10e-12);
        let trace = simulate_switching(-ps, &wf, 600e-9, &p, SwitchingOptions::default()).unwrap();
        for w in trace.samples.windows(2) {
            let d = (w[1].p - w[0].p) / (w[1].t - w[0].t);
            assert!((w[1].i_pol - d).abs() <= 1e-9 * d.abs().max(1.0));
        }
    }

    #[test]
    fn hysteresis_loop_area_positive_and_step_stable() {
        let p = pzt();
        let ps = spontaneous_polarization(&p).unwrap();
        let wf = Waveform::triangle(0.7, 40e-9);
        let trace = simulate_switching(-ps, &wf, 600e-9, &p, SwitchingOptions::default()).unwrap();
        let area = trace.loop_area(600e-9);
        assert!(area > 0.0, "loop area {area}");
    }

    #[test]
    fn halving_steps_changes_final_p_below_tolerance() {
        let p = pzt();
        let ps = spontaneous_polarization(&p).unwrap();
        let s0 = PolarizationState { p: -ps, t: 0.0 };
        // Drive with the standard switching pulse split into coarse and fine steps.
        let e = 0.7 / 600e-9;
        let mut a = s0;
        for _ in 0..8 {
            a = step_polarization(a, e, 2.5e-10, &p).unwrap();
        }
        let mut b = s0;
        for _ in 0..16 {
            b = step_polarization(b, e, 1.25e-10, &p).unwrap();
        }
        assert!((a.p - b.p).abs() < 1e-6, "delta = {}", (a.p - b.p).abs());
    }
}
