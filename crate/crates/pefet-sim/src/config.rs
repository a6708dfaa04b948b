//! Run configuration: a TOML file with strict (unknown keys fatal) sections
//! layered over the calibrated defaults.

use serde::{Deserialize, Serialize};

use crate::arrays::ArrayConfig;
use crate::calibrate::{build_standard_model, CalibrationInputs};
use crate::error::{Result, SimError};
use crate::ferroelectric::LandauParams;
use crate::metrics::{Arch, LayoutRules, SramBaseline, WireParams};
use crate::pefet::PeFetConfig;
use crate::tmdfet::FetParams;
use crate::transduction::{DeviceGeometry, PiezoParams};

/// Geometry section: either a direct kappa choice or explicit dimensions.
/// A `kappa` entry overrides `a_pe` (and scales `w_pe` with it).
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometrySection {
    pub kappa: Option<f64>,
    pub f: Option<f64>,
    pub w_tmd: Option<f64>,
    pub l_g: Option<f64>,
    pub w_pe: Option<f64>,
    pub a_pe: Option<f64>,
    pub t_pe: Option<f64>,
    pub t_nail: Option<f64>,
    pub t_tox: Option<f64>,
    pub t_tmd: Option<f64>,
    pub lambda: Option<f64>,
}

impl GeometrySection {
    pub fn resolve(&self) -> DeviceGeometry {
        let mut g = match self.kappa {
            Some(k) => DeviceGeometry::with_kappa(k),
            None => DeviceGeometry::default(),
        };
        if let Some(v) = self.f {
            g.f = v;
        }
        if let Some(v) = self.w_tmd {
            g.w_tmd = v;
        }
        if let Some(v) = self.l_g {
            g.l_g = v;
        }
        if let Some(v) = self.w_pe {
            g.w_pe = v;
        }
        if let Some(v) = self.a_pe {
            g.a_pe = v;
        }
        if let Some(v) = self.t_pe {
            g.t_pe = v;
        }
        if let Some(v) = self.t_nail {
            g.t_nail = v;
        }
        if let Some(v) = self.t_tox {
            g.t_tox = v;
        }
        if let Some(v) = self.t_tmd {
            g.t_tmd = v;
        }
        if let Some(v) = self.lambda {
            g.lambda = v;
        }
        g
    }
}

/// Device operating-point section.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeviceSection {
    pub v_r: f64,
    pub v_dd: f64,
    pub read_margin: f64,
    pub switch_threshold: f64,
    pub ax_l: f64,
}

impl Default for DeviceSection {
    fn default() -> Self {
        let d = crate::calibrate::standard_model().device;
        DeviceSection {
            v_r: d.v_r,
            v_dd: d.v_dd,
            read_margin: d.read_margin,
            switch_threshold: d.switch_threshold,
            ax_l: d.ax_l,
        }
    }
}

/// Array section.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArraySection {
    pub arch: Arch,
    pub n_r: usize,
    pub n_c: usize,
    pub n_w: usize,
    pub segmented: Option<bool>,
    pub min_sense_ratio: f64,
    pub exact_mode: bool,
}

impl Default for ArraySection {
    fn default() -> Self {
        ArraySection {
            arch: Arch::Hd,
            n_r: 256,
            n_c: 256,
            n_w: 64,
            segmented: None,
            min_sense_ratio: 1.5,
            exact_mode: false,
        }
    }
}

/// Layout-rule overrides.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RulesSection {
    pub lambda: Option<f64>,
    pub poly_pitch_lambda: Option<f64>,
    pub min_width_lambda: Option<f64>,
    pub width_c0_lambda: Option<f64>,
    pub width_c1_lambda: Option<f64>,
    pub w_ax_lambda: Option<f64>,
    pub cc_shared_lambda: Option<f64>,
    pub sram_area_lambda2: Option<f64>,
    pub sram_height_lambda: Option<f64>,
}

impl RulesSection {
    pub fn resolve(&self) -> LayoutRules {
        let mut r = LayoutRules::default();
        if let Some(v) = self.lambda {
            r.lambda = v;
        }
        if let Some(v) = self.poly_pitch_lambda {
            r.poly_pitch_lambda = v;
        }
        if let Some(v) = self.min_width_lambda {
            r.min_width_lambda = v;
        }
        if let Some(v) = self.width_c0_lambda {
            r.width.c0_lambda = v;
        }
        if let Some(v) = self.width_c1_lambda {
            r.width.c1_lambda = v;
        }
        if let Some(v) = self.w_ax_lambda {
            r.w_ax_lambda = v;
        }
        if let Some(v) = self.cc_shared_lambda {
            r.cc_shared_lambda = v;
        }
        if let Some(v) = self.sram_area_lambda2 {
            r.sram_area_lambda2 = v;
        }
        if let Some(v) = self.sram_height_lambda {
            r.sram_height_lambda = v;
        }
        r
    }
}

/// Sweep section.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub kappas: Vec<f64>,
    pub archs: Vec<Arch>,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            kappas: vec![0.03, 0.04, 0.05, 0.06, 0.07],
            archs: Arch::ALL.to_vec(),
        }
    }
}

/// Calibration-target overrides (the defaults are the published anchors).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrationSection {
    pub ratio_lrs: f64,
    pub ratio_hrs: f64,
    pub soft_weight: f64,
    pub t_switch: f64,
}

impl Default for CalibrationSection {
    fn default() -> Self {
        let c = CalibrationInputs::default();
        CalibrationSection {
            ratio_lrs: c.ratio_lrs,
            ratio_hrs: c.ratio_hrs,
            soft_weight: c.soft_weight,
            t_switch: c.t_switch,
        }
    }
}

/// Full run configuration.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub ferroelectric: LandauParams,
    pub piezo: PiezoParams,
    pub geometry: GeometrySection,
    pub fet: FetParams,
    pub device: DeviceSection,
    pub array: ArraySection,
    pub rules: RulesSection,
    pub wire: WireParams,
    pub sram: SramBaseline,
    pub sweep: SweepSection,
    pub calibration: CalibrationSection,
}

impl RunConfig {
    /// Parses a TOML config; unknown keys and type errors are fatal with
    /// line-numbered diagnostics.
    pub fn from_toml(text: &str) -> Result<RunConfig> {
        toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].lines().count().max(1))
                .unwrap_or(0);
            if line > 0 {
                SimError::Config(format!("line {line}: {}", e.message()))
            } else {
                SimError::Config(e.message().to_string())
            }
        })
    }

    pub fn from_path(path: &std::path::Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SimError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Calibration inputs implied by this config.
    pub fn calibration_inputs(&self) -> CalibrationInputs {
        CalibrationInputs {
            v_r: self.device.v_r,
            v_dd: self.device.v_dd,
            v_ds: self.device.v_dd,
            t_switch: self.calibration.t_switch,
            kappa_ref: 0.04,
            soft_weight: self.calibration.soft_weight,
            ratio_lrs: self.calibration.ratio_lrs,
            ratio_hrs: self.calibration.ratio_hrs,
        }
    }

    /// Device configuration with all overrides applied.
    pub fn device_config(&self) -> Result<PeFetConfig> {
        let cfg = PeFetConfig {
            landau: self.ferroelectric,
            piezo: self.piezo,
            geom: self.geometry.resolve(),
            fet: self.fet,
            v_r: self.device.v_r,
            v_dd: self.device.v_dd,
            read_margin: self.device.read_margin,
            switch_threshold: self.device.switch_threshold,
            ax_l: self.device.ax_l,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Device configuration at an explicit kappa (for sweeps).
    pub fn device_config_at(&self, kappa: f64) -> Result<PeFetConfig> {
        let mut section = self.geometry;
        section.kappa = Some(kappa);
        section.a_pe = None;
        section.w_pe = None;
        let cfg = PeFetConfig {
            geom: section.resolve(),
            ..self.device_config()?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Array configuration for the given architecture.
    pub fn array_config(&self, arch: Arch, kappa: Option<f64>) -> Result<ArrayConfig> {
        let device = match kappa {
            Some(k) => self.device_config_at(k)?,
            None => self.device_config()?,
        };
        let cfg = ArrayConfig {
            arch,
            n_r: self.array.n_r,
            n_c: self.array.n_c,
            n_w: self.array.n_w,
            segmented: self.array.segmented.unwrap_or(arch != Arch::Hd),
            device,
            wire: self.wire,
            rules: self.rules.resolve(),
            sram: self.sram,
            min_sense_ratio: self.array.min_sense_ratio,
            exact_mode: self.array.exact_mode,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Rebuilds the full calibration with this config's targets. Errs with
    /// a fit failure when the targets cannot be reproduced.
    pub fn run_calibration(&self) -> Result<crate::calibrate::StandardModel> {
        build_standard_model(&self.calibration_inputs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        let cfg = RunConfig::default();
        cfg.device_config().unwrap();
        cfg.array_config(Arch::Cc, Some(0.04)).unwrap();
    }

    #[test]
    fn kappa_override_scales_pe_area() {
        let cfg: RunConfig = RunConfig::from_toml("[geometry]\nkappa = 0.07\n").unwrap();
        let dev = cfg.device_config().unwrap();
        approx::assert_relative_eq!(dev.kappa().unwrap(), 0.07, epsilon = 1e-12);
    }

    #[test]
    fn unknown_keys_are_fatal_with_line_numbers() {
        let err = RunConfig::from_toml("[fet]\nnot_a_knob = 1.0\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2") || msg.contains("not_a_knob"), "{msg}");
    }

    #[test]
    fn unknown_section_is_fatal() {
        assert!(RunConfig::from_toml("[made_up_section]\nx = 1\n").is_err());
    }

    #[test]
    fn partial_sections_keep_calibrated_defaults() {
        let cfg: RunConfig = RunConfig::from_toml("[wire]\nr_driver = 5e3\n").unwrap();
        assert_eq!(cfg.wire.r_driver, 5e3);
        assert_eq!(cfg.wire.cap_per_len, WireParams::default().cap_per_len);
        // The fet section, left out entirely, is the calibrated model.
        assert_eq!(cfg.fet.v_t0, FetParams::default().v_t0);
    }

    #[test]
    fn roundtrips_through_toml() {
        let cfg = RunConfig::default();
        let text = toml::to_string(&cfg).unwrap();
        let back = RunConfig::from_toml(&text).unwrap();
        assert_eq!(cfg.fet.v_t0, back.fet.v_t0);
        assert_eq!(cfg.sweep.kappas, back.sweep.kappas);
    }
}
