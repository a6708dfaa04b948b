//! Report emission: CSV tables with provenance tags, the model card, the
//! SRAM comparison table, and static SVG plots rendered from the same data.
//!
//! All output is deterministic: fixed column orders, fixed float formats,
//! no timestamps.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::calibrate::ModelCard;
use crate::error::{Result, SimError};
use crate::metrics::{ComparisonTable, EnergyReport, LatencyReport, Provenance};
use crate::pefet::IvPoint;

/// One row of the fixed-schema metrics CSV:
/// `arch,kappa,metric,component,value,unit,provenance`.
#[derive(Debug, Clone)]
pub struct MetricRow {
    pub arch: &'static str,
    pub kappa: f64,
    pub metric: &'static str,
    pub component: &'static str,
    pub value: f64,
    pub unit: &'static str,
    pub provenance: Provenance,
}

pub fn metric_csv(rows: &[MetricRow]) -> String {
    let mut s = String::from("arch,kappa,metric,component,value,unit,provenance\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{:.4},{},{},{:.6e},{},{}",
            r.arch,
            r.kappa,
            r.metric,
            r.component,
            r.value,
            r.unit,
            r.provenance.name()
        );
    }
    s
}

/// Rows of an energy report under the fixed schema.
pub fn energy_rows(
    arch: &'static str,
    kappa: f64,
    metric: &'static str,
    e: &EnergyReport,
    provenance: Provenance,
) -> Vec<MetricRow> {
    let mk = |component, value| MetricRow {
        arch,
        kappa,
        metric,
        component,
        value,
        unit: "J",
        provenance,
    };
    vec![
        mk("total", e.total),
        mk("c_pe_charging", e.c_pe_charging),
        mk("metal_lines", e.metal_lines),
        mk("p_switching", e.p_switching),
        mk("leakage", e.leakage),
    ]
}

/// Rows of a latency report under the fixed schema.
pub fn latency_rows(
    arch: &'static str,
    kappa: f64,
    metric: &'static str,
    l: &LatencyReport,
    provenance: Provenance,
) -> Vec<MetricRow> {
    let mk = |component, value| MetricRow {
        arch,
        kappa,
        metric,
        component,
        value,
        unit: "s",
        provenance,
    };
    vec![
        mk("total", l.total),
        mk("line_rc", l.line_rc),
        mk("p_switch", l.p_switch),
        mk("phase_overheads", l.phase_overheads),
    ]
}

/// Transfer-sweep CSV: `v_gs,i_lrs,i_hrs,i_baseline`.
pub fn iv_csv(points: &[IvPoint]) -> String {
    let mut s = String::from("v_gs,i_lrs,i_hrs,i_baseline\n");
    for p in points {
        let _ = writeln!(
            s,
            "{:.4},{:.6e},{:.6e},{:.6e}",
            p.v_gs, p.i_lrs, p.i_hrs, p.i_baseline
        );
    }
    s
}

/// Device kappa-study CSV.
pub struct KappaDeviceRow {
    pub kappa: f64,
    pub sigma_pe: f64,
    pub sigma_tmd: f64,
    pub delta_eg: f64,
    pub distinguishability: f64,
    pub in_calibrated_range: bool,
}

pub fn kappa_device_csv(rows: &[KappaDeviceRow]) -> String {
    let mut s =
        String::from("kappa,sigma_pe_pa,sigma_tmd_pa,delta_eg_ev,distinguishability,provenance\n");
    for r in rows {
        let prov = if r.in_calibrated_range {
            Provenance::Calibrated.name()
        } else {
            "extrapolated"
        };
        let _ = writeln!(
            s,
            "{:.4},{:.6e},{:.6e},{:.6e},{:.4},{}",
            r.kappa, r.sigma_pe, r.sigma_tmd, r.delta_eg, r.distinguishability, prov
        );
    }
    s
}

/// SRAM comparison CSV.
pub fn comparison_csv(table: &ComparisonTable) -> String {
    let mut s = String::from(
        "arch,kappa,area_ratio,write_energy_reduction_pct,read_energy_reduction_pct,\
         write_latency_overhead_pct,read_latency_overhead_pct,provenance\n",
    );
    for r in &table.rows {
        let _ = writeln!(
            s,
            "{},{:.4},{:.4},{:.2},{:.2},{:.2},{:.2},{}",
            r.arch.name(),
            table.kappa,
            r.area_ratio,
            r.write_energy_reduction_pct,
            r.read_energy_reduction_pct,
            r.write_latency_overhead_pct,
            r.read_latency_overhead_pct,
            table.provenance.name()
        );
    }
    s
}

/// Writes the model card as text.
pub fn model_card_text(card: &ModelCard) -> String {
    card.render()
}

/// A minimal deterministic SVG line chart. One polyline per series, linear
/// axes spanning the data, small legend. Convenience output only; the CSVs
/// are the data of record.
pub fn svg_line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(String, Vec<(f64, f64)>)],
) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const ML: f64 = 70.0;
    const MR: f64 = 20.0;
    const MT: f64 = 40.0;
    const MB: f64 = 50.0;
    let palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

    let all: Vec<(f64, f64)> = series.iter().flat_map(|(_, v)| v.iter().copied()).collect();
    if all.is_empty() {
        return format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\">\
             <text x=\"20\" y=\"30\">{title}: no data</text></svg>"
        );
    }
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if (x1 - x0).abs() < 1e-30 {
        x1 = x0 + 1.0;
    }
    if (y1 - y0).abs() < 1e-30 {
        y1 = y0 + 1.0;
    }
    y0 = y0.min(0.0_f64.max(y0)); // keep zero if data is positive and near it
    let px = |x: f64| ML + (x - x0) / (x1 - x0) * (W - ML - MR);
    let py = |y: f64| H - MB - (y - y0) / (y1 - y0) * (H - MT - MB);

    let mut s = String::new();
    let _ = write!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    let _ = writeln!(s, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{}</text>",
        W / 2.0,
        title
    );
    // Axes.
    let _ = writeln!(
        s,
        "<line x1=\"{ML}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        H - MB,
        W - MR,
        H - MB
    );
    let _ = writeln!(
        s,
        "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{}\" stroke=\"black\"/>",
        H - MB
    );
    // Ticks: four per axis.
    for i in 0..=4 {
        let xt = x0 + (x1 - x0) * i as f64 / 4.0;
        let yt = y0 + (y1 - y0) * i as f64 / 4.0;
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{:.3}</text>",
            px(xt),
            H - MB + 18.0,
            xt
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{:.3e}</text>",
            ML - 6.0,
            py(yt) + 4.0,
            yt
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
        W / 2.0,
        H - 12.0,
        x_label
    );
    let _ = writeln!(
        s,
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>",
        H / 2.0,
        H / 2.0,
        y_label
    );
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = palette[i % palette.len()];
        let mut path = String::new();
        for (j, &(x, y)) in pts.iter().enumerate() {
            let _ = write!(path, "{}{:.2},{:.2}", if j == 0 { "" } else { " " }, px(x), py(y));
        }
        let _ = writeln!(
            s,
            "<polyline points=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>"
        );
        for &(x, y) in pts {
            let _ = writeln!(
                s,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>",
                px(x),
                py(y)
            );
        }
        let ly = MT + 16.0 * i as f64;
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            W - MR - 120.0,
            W - MR - 100.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\">{}</text>",
            W - MR - 94.0,
            ly + 4.0,
            name
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Writes a file, creating parent directories.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| SimError::Io(format!("{}: {e}", parent.display())))?;
        }
    }
    fs::write(path, contents).map_err(|e| SimError::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_csv_has_schema_header() {
        let rows = vec![MetricRow {
            arch: "hd",
            kappa: 0.04,
            metric: "write_energy",
            component: "total",
            value: 1e-12,
            unit: "J",
            provenance: Provenance::Calibrated,
        }];
        let csv = metric_csv(&rows);
        assert!(csv.starts_with("arch,kappa,metric,component,value,unit,provenance\n"));
        assert!(csv.contains("hd,0.0400,write_energy,total,1.000000e-12,J,calibrated"));
    }

    #[test]
    fn svg_renders_polyline_per_series() {
        let svg = svg_line_chart(
            "t",
            "x",
            "y",
            &[
                ("a".into(), vec![(0.0, 1.0), (1.0, 2.0)]),
                ("b".into(), vec![(0.0, 2.0), (1.0, 1.0)]),
            ],
        );
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("</svg>"));
    }
}
