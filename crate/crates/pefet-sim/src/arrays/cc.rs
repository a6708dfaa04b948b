//! Self-consistent node solves for the cross-coupled cell.
//!
//! Each side of the pair couples through the wiring D_A = G_B, D_B = G_A:
//! node 1 = {D_A, G_B} is fed from BL1 through AX1, node 2 = {D_B, G_A}
//! from BL2 through AX2. During a read both bit lines sit at v_r and each
//! internal node settles where its PeFET channel current equals its access
//! current. The solve is a damped fixed point on the two node voltages; the
//! access path is re-linearized about the current iterate each sweep, which
//! is exact at convergence.
//!
//! The same machinery evaluates the write-mode loading: with both bit lines
//! at v_dd and the sources grounded, a conducting pair drags its nodes far
//! below v_dd. The write protocol therefore floats the source line during
//! write phases; the grounded-source solve quantifies the transient sag and
//! the source-settle delay it costs.

use crate::error::{Result, SimError};
use crate::pefet::{conduction_current, BiasPoint, PeFetConfig};
use crate::tmdfet::{drain_current, FetParams};

/// Solved read state of one cross-coupled pair.
#[derive(Debug, Clone, Copy)]
pub struct CcReadSolution {
    /// Internal node 1 voltage, drain of A and gate of B (V).
    pub v_da: f64,
    /// Internal node 2 voltage, drain of B and gate of A (V).
    pub v_db: f64,
    /// Current sensed on BL1, the channel current of side A (A).
    pub i_bl1: f64,
    /// Current sensed on BL2, the channel current of side B (A).
    pub i_bl2: f64,
    /// Case label "ab" with a = bit of side A, b = bit of side B.
    pub case: &'static str,
}

/// Write-mode loading of a conducting pair with grounded sources.
#[derive(Debug, Clone, Copy)]
pub struct CcWriteLoad {
    /// Node sag below the bit-line drive (V).
    pub droop: f64,
    /// Channel current at the sagged operating point (A).
    pub current: f64,
    /// Secant resistance of the conduction path, droop / current (Ohm).
    pub r_eff: f64,
}

const NODE_TOL: f64 = 1e-9; // volts
const MAX_SWEEPS: usize = 500;
const DAMPING: f64 = 0.5;

fn case_label(p_a: f64, p_b: f64) -> &'static str {
    match (p_a > 0.0, p_b > 0.0) {
        (false, false) => "00",
        (false, true) => "01",
        (true, false) => "10",
        (true, true) => "11",
    }
}

/// Access-transistor current from a bit line at `v_bl` into the internal
/// node at `v_node`, gate at `v_wl`. The internal node is the source side.
fn ax_current(v_node: f64, v_wl: f64, v_bl: f64, ax: &FetParams) -> Result<f64> {
    drain_current(v_wl - v_node, v_bl - v_node, 0.0, ax)
}

/// Node voltage at which the access path delivers `i_target`, by bisection
/// on the monotone decreasing access current.
fn ax_node_for_current(i_target: f64, v_wl: f64, v_bl: f64, ax: &FetParams) -> Result<f64> {
    let mut lo = 0.0;
    let mut hi = v_bl;
    if i_target >= ax_current(lo, v_wl, v_bl, ax)? {
        return Ok(lo);
    }
    if i_target <= 0.0 {
        return Ok(hi);
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if ax_current(mid, v_wl, v_bl, ax)? > i_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Channel current of one side: gate tied to the partner node, back contact
/// on the quiet plate (0 V), source grounded.
fn side_current(p: f64, v_gate: f64, v_drain: f64, cfg: &PeFetConfig) -> Result<f64> {
    conduction_current(
        p,
        BiasPoint {
            v_g: v_gate,
            v_b: 0.0,
            v_d: v_drain,
            v_s: 0.0,
        },
        cfg,
    )
}

/// Damped fixed point on the two internal nodes for arbitrary per-line
/// bit-line drives.
fn solve_nodes(
    p_a: f64,
    p_b: f64,
    cfg: &PeFetConfig,
    v_wl: f64,
    v_bl1: f64,
    v_bl2: f64,
) -> Result<(f64, f64)> {
    let ax = cfg.ax_params();
    let mut v1 = 0.95 * v_bl1;
    let mut v2 = 0.95 * v_bl2;
    let mut residual = f64::MAX;
    for _ in 0..MAX_SWEEPS {
        // Side A: drain on node 1, gate on node 2 (and vice versa).
        let i_a = side_current(p_a, v2, v1, cfg)?;
        let i_b = side_current(p_b, v1, v2, cfg)?;
        let t1 = ax_node_for_current(i_a, v_wl, v_bl1, &ax)?;
        let t2 = ax_node_for_current(i_b, v_wl, v_bl2, &ax)?;
        let d1 = t1 - v1;
        let d2 = t2 - v2;
        v1 += DAMPING * d1;
        v2 += DAMPING * d2;
        residual = d1.abs().max(d2.abs());
        if residual < NODE_TOL {
            return Ok((v1, v2));
        }
    }
    Err(SimError::ConvergenceFailure {
        context: "cross-coupled node solve",
        iterations: MAX_SWEEPS,
        residual,
    })
}

/// Solves the coupled read of one pair storing polarizations (`p_a`, `p_b`).
/// `v_wl` is the asserted word-line voltage, `v_bl` the bit-line precharge.
pub fn solve_cc_read(
    p_a: f64,
    p_b: f64,
    cfg: &PeFetConfig,
    v_wl: f64,
    v_bl: f64,
) -> Result<CcReadSolution> {
    let (v_da, v_db) = solve_nodes(p_a, p_b, cfg, v_wl, v_bl, v_bl)?;
    let i_bl1 = side_current(p_a, v_db, v_da, cfg)?;
    let i_bl2 = side_current(p_b, v_da, v_db, cfg)?;
    Ok(CcReadSolution {
        v_da,
        v_db,
        i_bl1,
        i_bl2,
        case: case_label(p_a, p_b),
    })
}

/// Grounded-source loading of the same-state +P write: both bit lines at
/// v_dd and both channels conducting in the (worst-case) written state.
pub fn solve_cc_write_load(cfg: &PeFetConfig, v_wl: f64) -> Result<CcWriteLoad> {
    let p_s = cfg.p_s()?;
    let (v1, _) = solve_nodes(p_s, p_s, cfg, v_wl, cfg.v_dd, cfg.v_dd)?;
    let current = side_current(p_s, v1, v1, cfg)?;
    let droop = cfg.v_dd - v1;
    Ok(CcWriteLoad {
        droop,
        current,
        r_eff: droop / current.max(1e-15),
    })
}

/// Node sag of the same-state +P write (V). See [`solve_cc_write_load`].
pub fn solve_cc_write_droop(cfg: &PeFetConfig, v_wl: f64) -> Result<f64> {
    Ok(solve_cc_write_load(cfg, v_wl)?.droop)
}

/// Effective small-signal resistance of the access path around the solved
/// node, for settle-time estimates (Ohm).
pub fn ax_effective_resistance(
    v_node: f64,
    v_wl: f64,
    v_bl: f64,
    cfg: &PeFetConfig,
) -> Result<f64> {
    let ax = cfg.ax_params();
    let h = 1e-4;
    let i0 = ax_current(v_node + h, v_wl, v_bl, &ax)?;
    let i1 = ax_current(v_node - h, v_wl, v_bl, &ax)?;
    let g = (i1 - i0) / (2.0 * h);
    Ok(1.0 / g.max(1e-9))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> PeFetConfig {
        PeFetConfig::default()
    }

    #[test]
    fn hrs_hrs_nodes_stay_near_vr() {
        let c = cfg();
        let p_s = c.p_s().unwrap();
        let sol = solve_cc_read(-p_s, -p_s, &c, c.v_dd, c.v_r).unwrap();
        assert_eq!(sol.case, "00");
        assert!(c.v_r - sol.v_da < 0.05, "v_da = {}", sol.v_da);
        assert_relative_eq!(sol.v_da, sol.v_db, epsilon = 1e-9);
        assert_relative_eq!(sol.i_bl1, sol.i_bl2, max_relative = 1e-9);
    }

    #[test]
    fn lrs_lrs_sags_and_weakens() {
        let c = cfg();
        let p_s = c.p_s().unwrap();
        let s11 = solve_cc_read(p_s, p_s, &c, c.v_dd, c.v_r).unwrap();
        let s10 = solve_cc_read(p_s, -p_s, &c, c.v_dd, c.v_r).unwrap();
        assert!(s11.v_da < c.v_r, "no sag");
        // The shared sag weakens the same-state LRS below the mixed case.
        assert!(s11.i_bl1 < s10.i_bl1);
    }

    #[test]
    fn mixed_state_orderings() {
        let c = cfg();
        let p_s = c.p_s().unwrap();
        let s00 = solve_cc_read(-p_s, -p_s, &c, c.v_dd, c.v_r).unwrap();
        let s01 = solve_cc_read(-p_s, p_s, &c, c.v_dd, c.v_r).unwrap();
        // HRS with a sagged gate conducts less than HRS at full v_r.
        assert!(s01.i_bl1 < s00.i_bl1);
    }

    #[test]
    fn swap_symmetry_is_exact() {
        let c = cfg();
        let p_s = c.p_s().unwrap();
        let ab = solve_cc_read(-p_s, p_s, &c, c.v_dd, c.v_r).unwrap();
        let ba = solve_cc_read(p_s, -p_s, &c, c.v_dd, c.v_r).unwrap();
        assert_eq!(ab.v_da, ba.v_db);
        assert_eq!(ab.v_db, ba.v_da);
        assert_eq!(ab.i_bl1, ba.i_bl2);
        assert_eq!(ab.i_bl2, ba.i_bl1);
    }

    #[test]
    fn write_load_is_substantial() {
        // With grounded sources the conducting pair drags its nodes far
        // below the drive; this is why the write protocol gates the sources.
        let c = cfg();
        let load = solve_cc_write_load(&c, c.v_dd + c.fet.v_t0).unwrap();
        assert!(load.droop > 0.05, "droop = {}", load.droop);
        assert!(load.r_eff > 0.0);
    }
}
