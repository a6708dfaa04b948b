//! Property suites over the device chain and array protocols.

use pefet_sim::arrays::{plan_write, solve_cc_read, ArrayConfig, ArraySim};
use pefet_sim::ferroelectric::{
    coercive_field, lk_field, spontaneous_polarization, step_polarization, LandauParams,
    PolarizationState,
};
use pefet_sim::metrics::Arch;
use pefet_sim::pefet::PeFetConfig;
use pefet_sim::tmdfet::{drain_current, FetParams};
use pefet_sim::transduction::{chain_delta_eg, DeviceGeometry, PiezoParams};

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// The static field is exactly odd in polarization.
    #[test]
    fn lk_field_odd(p in -0.4f64..0.4) {
        let landau = LandauParams::default();
        prop_assert_eq!(lk_field(-p, &landau), -lk_field(p, &landau));
    }

    /// The full stress chain is exactly odd in the stored state and
    /// vanishes at zero bias.
    #[test]
    fn transduction_chain_odd(p_norm in 0.01f64..1.0, v_gb in -0.7f64..0.7,
                              kappa in 0.03f64..0.07) {
        let geom = DeviceGeometry::with_kappa(kappa);
        let piezo = PiezoParams::default();
        let up = chain_delta_eg(p_norm, v_gb, kappa, &geom, &piezo);
        let dn = chain_delta_eg(-p_norm, v_gb, kappa, &geom, &piezo);
        prop_assert_eq!(up, -dn);
        prop_assert_eq!(chain_delta_eg(p_norm, 0.0, kappa, &geom, &piezo), 0.0);
    }

    /// Drain current rises with gate voltage and falls with bandgap shift.
    #[test]
    fn drain_current_monotone(v in 0.05f64..0.6, dv in 0.005f64..0.05,
                              d_eg in -0.06f64..0.06) {
        let fet = FetParams::default();
        let lo = drain_current(v, 0.7, d_eg, &fet).unwrap();
        let hi = drain_current(v + dv, 0.7, d_eg, &fet).unwrap();
        prop_assert!(hi > lo);
        let open = drain_current(v, 0.7, d_eg - 0.01, &fet).unwrap();
        prop_assert!(open > lo);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Sub-coercive drives never flip the stored sign; super-coercive drives
    /// always settle into the driven well (checked after release).
    #[test]
    fn coercive_threshold_separates_outcomes(frac in 0.1f64..0.9, sign in prop::bool::ANY) {
        let landau = LandauParams::default();
        let p_s = spontaneous_polarization(&landau).unwrap();
        let e_c = coercive_field(&landau).unwrap();
        let s0 = if sign { p_s } else { -p_s };
        // Below the coercive field: sign preserved.
        let mut st = PolarizationState { p: s0, t: 0.0 };
        st = step_polarization(st, -s0.signum() * frac * e_c, 50e-9, &landau).unwrap();
        st = step_polarization(st, 0.0, 5e-9, &landau).unwrap();
        prop_assert_eq!(st.p.signum(), s0.signum());
        // Above it: switched to the driven well within 0.1% after release.
        let mut st = PolarizationState { p: s0, t: 0.0 };
        let drive = -s0.signum() * (1.0 + frac) * e_c;
        st = step_polarization(st, drive, 50e-9, &landau).unwrap();
        st = step_polarization(st, 0.0, 5e-9, &landau).unwrap();
        prop_assert!((st.p - drive.signum() * p_s).abs() < 1e-3 * p_s);
    }

    /// The coupled read solve is exactly symmetric under swapping the pair.
    #[test]
    fn cc_solve_swap_symmetry(a in prop::bool::ANY, b in prop::bool::ANY,
                              scale_a in 0.95f64..1.0, scale_b in 0.95f64..1.0) {
        let dev = PeFetConfig::default();
        let p_s = dev.p_s().unwrap();
        let p_a = if a { p_s * scale_a } else { -p_s * scale_a };
        let p_b = if b { p_s * scale_b } else { -p_s * scale_b };
        let ab = solve_cc_read(p_a, p_b, &dev, dev.v_dd, dev.v_r).unwrap();
        let ba = solve_cc_read(p_b, p_a, &dev, dev.v_dd, dev.v_r).unwrap();
        prop_assert_eq!(ab.v_da, ba.v_db);
        prop_assert_eq!(ab.i_bl1, ba.i_bl2);
    }
}

/// LRS and HRS bracket the baseline from the correct sides.
#[test]
fn read_ratios_bracket_baseline() {
    let dev = PeFetConfig::default();
    let p_s = dev.p_s().unwrap();
    let bias = pefet_sim::pefet::BiasPoint::read(&dev);
    let lrs = pefet_sim::pefet::read_current(p_s, bias, &dev).unwrap();
    let hrs = pefet_sim::pefet::read_current(-p_s, bias, &dev).unwrap();
    let base = pefet_sim::pefet::read_current(0.0, bias, &dev).unwrap();
    assert!(lrs / base > 1.0);
    assert!(base / hrs > 1.0);
}

/// The high-density flavor has the steepest write-energy change in kappa,
/// through its half-accessed film load on the write lines.
#[test]
fn hd_write_energy_slope_is_steepest() {
    let cfg = pefet_sim::config::RunConfig::default();
    let word = pefet_sim::cli::balanced_word(3, 64);
    let mut slopes = Vec::new();
    for arch in Arch::ALL {
        let energy_at = |k: f64| {
            let array = cfg.array_config(arch, Some(k)).unwrap();
            let wire = array.wire;
            let mut sim = ArraySim::new(array).unwrap();
            let rec = sim.write(0, &word).unwrap();
            rec.energy(&wire).total
        };
        let (lo, mid, hi) = (energy_at(0.03), energy_at(0.04), energy_at(0.07));
        slopes.push((arch, (lo - hi) / mid));
    }
    let hd = slopes.iter().find(|(a, _)| *a == Arch::Hd).unwrap().1;
    for (arch, s) in &slopes {
        if *arch != Arch::Hd {
            assert!(hd > *s, "hd slope {hd:.3} vs {} {s:.3}", arch.name());
        }
    }
}

/// Segmentation strictly lowers the write energy of a plate-line array.
#[test]
fn segmentation_lowers_write_energy() {
    let word = pefet_sim::cli::balanced_word(11, 64);
    for arch in [Arch::Tall, Arch::Wide, Arch::Cc] {
        let mut seg_cfg = ArrayConfig::new(arch, 64, 128);
        seg_cfg.segmented = true;
        let mut unseg_cfg = seg_cfg.clone();
        unseg_cfg.segmented = false;
        let wire = seg_cfg.wire;
        let mut seg = ArraySim::new(seg_cfg).unwrap();
        let mut unseg = ArraySim::new(unseg_cfg).unwrap();
        let e_seg = seg.write(0, &word).unwrap().energy(&wire).total;
        let e_unseg = unseg.write(0, &word).unwrap().energy(&wire).total;
        assert!(
            e_seg < e_unseg,
            "{}: segmented {e_seg:.3e} vs unsegmented {e_unseg:.3e}",
            arch.name()
        );
    }
}

/// Unsegmented arrays still round-trip and pass their disturb checks.
#[test]
fn unsegmented_roundtrip_and_disturb() {
    let word = pefet_sim::cli::balanced_word(13, 64);
    for arch in [Arch::Tall, Arch::Wide, Arch::Cc] {
        let mut cfg = ArrayConfig::new(arch, 32, 128);
        cfg.segmented = false;
        let plan = plan_write(&cfg).unwrap();
        let report = pefet_sim::arrays::check_disturb(&plan, &cfg).unwrap();
        assert!(report.passed(), "{}", arch.name());
        let mut sim = ArraySim::new(cfg).unwrap();
        sim.write(1, &word).unwrap();
        let (res, _) = sim.read(1).unwrap();
        assert_eq!(res.bits, word, "{}", arch.name());
    }
}

/// Plans keep every half-accessed cell strictly inside the coercive bound
/// with the published margin.
#[test]
fn write_plans_keep_half_select_margin() {
    for arch in Arch::ALL {
        let cfg = ArrayConfig::new(arch, 64, 128);
        let plan = plan_write(&cfg).unwrap();
        let report = pefet_sim::arrays::check_disturb(&plan, &cfg).unwrap();
        assert!(report.passed());
        assert!(
            report.worst_margin > 0.25,
            "{}: margin {:.3}",
            arch.name(),
            report.worst_margin
        );
    }
}
