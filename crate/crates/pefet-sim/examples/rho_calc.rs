// scratch: array-level energies and latencies across archs and kappa
use pefet_sim::arrays::{ArrayConfig, ArraySim};
use pefet_sim::metrics::{operation_energy, operation_latency, sram_access_log, Arch};
use pefet_sim::pefet::PeFetConfig;
use pefet_sim::transduction::DeviceGeometry;

fn word_bits(seed: u64, n: usize) -> Vec<bool> {
    // simple deterministic pattern generator
    let mut x = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
    (0..n).map(|_| { x ^= x << 13; x ^= x >> 7; x ^= x << 17; x & 1 == 1 }).collect()
}

fn main() {
    let base = PeFetConfig::default();
    for k in [0.03, 0.04, 0.07] {
        println!("== kappa = {k} ==");
        let mut s_w = 0.0;
        let mut s_r = 0.0;
        for arch in Arch::ALL {
            let mut cfg = ArrayConfig::new(arch, 256, 256);
            cfg.device = PeFetConfig { geom: DeviceGeometry::with_kappa(k), ..base };
            let wire = cfg.wire;
            let mut sim = ArraySim::new(cfg.clone()).unwrap();
            let w = word_bits(42, 64);
            let rec_w = sim.write(0, &w).unwrap();
            let ew = rec_w.energy(&wire);
            let lw = rec_w.latency(&wire);
            let (_res, rec_r) = sim.read(0).unwrap();
            let er = rec_r.energy(&wire);
            let lr = rec_r.latency(&wire);
            if arch == Arch::Hd {
                let swl = sram_access_log(true, 256, 256, 64, &cfg.rules, &wire, &cfg.device.fet, &cfg.sram, 0.7);
                let srl = sram_access_log(false, 256, 256, 64, &cfg.rules, &wire, &cfg.device.fet, &cfg.sram, 0.7);
                s_w = operation_energy(&swl, &wire).total;
                s_r = operation_energy(&srl, &wire).total;
                let slw = operation_latency(&swl, &wire);
                let slr = operation_latency(&srl, &wire);
                println!("  SRAM: wE={:.3e} rE={:.3e} wL={:.2}ns rL={:.2}ns", s_w, s_r, slw.total*1e9, slr.total*1e9);
            }
            println!("  {:5}: wE={:.4e} ({:.1}% red)  rE={:.4e} ({:.1}% red)  wL={:6.2}ns  rL={:6.2}ns | cpe={:.1}% metal={:.1}% psw={:.1}%",
                arch.name(), ew.total, 100.0*(1.0 - ew.total/s_w), er.total, 100.0*(1.0 - er.total/s_r),
                lw.total*1e9, lr.total*1e9,
                100.0*ew.c_pe_charging/ew.total, 100.0*ew.metal_lines/ew.total, 100.0*ew.p_switching/ew.total);
        }
    }
}
