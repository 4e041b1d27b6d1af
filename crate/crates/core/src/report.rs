//! Report emission: one CSV table plus one SVG chart per analysis
//! section. Every CSV starts with a `# config_hash=… seed=…` comment
//! line so a table can be traced back to the run that produced it.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::analytics::{BarrierFit, Census, CorrelationPoint, EmergenceReport, PassKCurve, ShiftRecord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportMeta {
    pub config_hash: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarrierSection {
    /// Pooled success rate per depth.
    pub points: Vec<(u32, f64)>,
    pub fit: BarrierFit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSection {
    pub points: Vec<CorrelationPoint>,
    pub pearson_r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSection {
    pub records: Vec<ShiftRecord>,
    pub eroded: usize,
}

/// Sections to emit; absent sections produce no files.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportInputs {
    pub curves: Option<PassKCurve>,
    pub classification: Vec<(String, Census)>,
    pub barrier: Option<BarrierSection>,
    pub correlation: Option<CorrelationSection>,
    pub emergence: Option<EmergenceReport>,
    pub shifts: Option<ShiftSection>,
}

/// Write every present section into `dir` and return the created file
/// paths in a fixed order.
pub fn emit_report(
    dir: &Path,
    meta: &ReportMeta,
    inputs: &ReportInputs,
) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut emit = |name: &str, content: String| -> io::Result<()> {
        let path = dir.join(name);
        fs::write(&path, content)?;
        written.push(path);
        Ok(())
    };

    if let Some(curves) = &inputs.curves {
        emit("curves.csv", curves_csv(meta, curves))?;
        emit("curves.svg", curves_svg(curves))?;
    }
    if !inputs.classification.is_empty() {
        emit("classification.csv", classification_csv(meta, &inputs.classification))?;
        emit("classification.svg", classification_svg(&inputs.classification))?;
    }
    if let Some(barrier) = &inputs.barrier {
        emit("barrier.csv", barrier_csv(meta, barrier))?;
        emit("barrier.svg", barrier_svg(barrier))?;
    }
    if let Some(correlation) = &inputs.correlation {
        emit("correlation.csv", correlation_csv(meta, correlation))?;
        emit("correlation.svg", correlation_svg(correlation))?;
    }
    if let Some(emergence) = &inputs.emergence {
        emit("emergence.csv", emergence_csv(meta, emergence))?;
        emit("emergence.svg", emergence_svg(emergence))?;
    }
    if let Some(shifts) = &inputs.shifts {
        emit("shifts.csv", shifts_csv(meta, shifts))?;
        emit("shifts.svg", shifts_svg(shifts))?;
    }
    Ok(written)
}

fn meta_line(meta: &ReportMeta) -> String {
    format!("# config_hash={} seed={}\n", meta.config_hash, meta.seed)
}

fn curves_csv(meta: &ReportMeta, curves: &PassKCurve) -> String {
    let mut out = meta_line(meta);
    out.push_str("k,empirical,theoretical\n");
    for ((k, emp), theo) in curves.ks.iter().zip(&curves.empirical).zip(&curves.theoretical) {
        let _ = writeln!(out, "{k},{emp},{theo}");
    }
    out
}

fn classification_csv(meta: &ReportMeta, rows: &[(String, Census)]) -> String {
    let mut out = meta_line(meta);
    out.push_str("label,null,transitional,feasible,total\n");
    for (label, census) in rows {
        let _ = writeln!(
            out,
            "{label},{},{},{},{}",
            census.null,
            census.transitional,
            census.feasible,
            census.total()
        );
    }
    out
}

fn barrier_csv(meta: &ReportMeta, section: &BarrierSection) -> String {
    let mut out = meta_line(meta);
    let fit = &section.fit;
    let _ = writeln!(
        out,
        "# fit p={} residual_rms={} points_used={} points_dropped={}",
        fit.p, fit.residual_rms, fit.points_used, fit.points_dropped
    );
    out.push_str("depth,observed,fitted\n");
    for (depth, observed) in &section.points {
        let fitted = fit.p.powi(*depth as i32);
        let _ = writeln!(out, "{depth},{observed},{fitted}");
    }
    out
}

fn correlation_csv(meta: &ReportMeta, section: &CorrelationSection) -> String {
    let mut out = meta_line(meta);
    let _ = writeln!(out, "# pearson_r={}", section.pearson_r);
    out.push_str("task_id,predicted,observed\n");
    for point in &section.points {
        let _ = writeln!(out, "{},{},{}", point.task_id, point.predicted, point.observed);
    }
    out
}

fn emergence_csv(meta: &ReportMeta, report: &EmergenceReport) -> String {
    let mut out = meta_line(meta);
    let _ = writeln!(
        out,
        "# null_before={} recovered={} recovery_rate={} mean_p={} median_p={}",
        report.null_before,
        report.recovered,
        report.recovery_rate,
        report.recovered_mean_p,
        report.recovered_median_p
    );
    out.push_str("bin_lo,bin_hi,recovered\n");
    for (i, count) in report.histogram.iter().enumerate() {
        let lo = i as f64 / 10.0;
        let hi = (i + 1) as f64 / 10.0;
        let _ = writeln!(out, "{lo},{hi},{count}");
    }
    out
}

fn state_name(state: crate::eval::CapabilityState) -> &'static str {
    match state {
        crate::eval::CapabilityState::Null => "null",
        crate::eval::CapabilityState::Transitional => "transitional",
        crate::eval::CapabilityState::Feasible => "feasible",
    }
}

fn shifts_csv(meta: &ReportMeta, section: &ShiftSection) -> String {
    let mut out = meta_line(meta);
    let _ = writeln!(out, "# eroded={}", section.eroded);
    out.push_str("task_id,before,after,delta_p\n");
    for rec in &section.records {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            rec.task_id,
            state_name(rec.before),
            state_name(rec.after),
            rec.delta_p
        );
    }
    out
}

// Chart geometry shared by every SVG.
const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 32.0;
const MARGIN_B: f64 = 48.0;

const BLUE: &str = "#1f77b4";
const RED: &str = "#d62728";
const GREEN: &str = "#2ca02c";
const GRAY: &str = "#888888";

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Frame {
        // Degenerate ranges still need a nonzero span to map into.
        let x_max = if x_max > x_min { x_max } else { x_min + 1.0 };
        let y_max = if y_max > y_min { y_max } else { y_min + 1.0 };
        Frame { x_min, x_max, y_min, y_max }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_L + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_B
            - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_T - MARGIN_B)
    }

    fn axes(&self, title: &str, x_label: &str, y_label: &str) -> String {
        let mut out = String::new();
        let x0 = MARGIN_L;
        let x1 = WIDTH - MARGIN_R;
        let y0 = HEIGHT - MARGIN_B;
        let y1 = MARGIN_T;
        let _ = writeln!(
            out,
            r##"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="#333" stroke-width="1"/>"##
        );
        let _ = writeln!(
            out,
            r##"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="#333" stroke-width="1"/>"##
        );
        for i in 0..=4 {
            let fy = self.y_min + (self.y_max - self.y_min) * f64::from(i) / 4.0;
            let py = self.py(fy);
            let _ = writeln!(
                out,
                r##"<line x1="{}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="#333"/>"##,
                x0 - 4.0
            );
            let _ = writeln!(
                out,
                r##"<text x="{}" y="{:.2}" font-size="11" text-anchor="end">{fy:.3}</text>"##,
                x0 - 7.0,
                py + 4.0
            );
        }
        let _ = writeln!(
            out,
            r##"<text x="{:.2}" y="20" font-size="14" text-anchor="middle">{title}</text>"##,
            (x0 + x1) / 2.0
        );
        let _ = writeln!(
            out,
            r##"<text x="{:.2}" y="{}" font-size="12" text-anchor="middle">{x_label}</text>"##,
            (x0 + x1) / 2.0,
            HEIGHT - 10.0
        );
        let _ = writeln!(
            out,
            r##"<text x="16" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.2})">{y_label}</text>"##,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0
        );
        out
    }

    fn x_tick(&self, x: f64, label: &str) -> String {
        let px = self.px(x);
        let y0 = HEIGHT - MARGIN_B;
        format!(
            "<line x1=\"{px:.2}\" y1=\"{y0}\" x2=\"{px:.2}\" y2=\"{}\" stroke=\"#333\"/>\n\
             <text x=\"{px:.2}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{label}</text>\n",
            y0 + 4.0,
            y0 + 18.0
        )
    }
}

fn svg_document(body: String) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         fill=\"white\"/>\n{body}</svg>\n"
    )
}

fn polyline(frame: &Frame, points: &[(f64, f64)], color: &str, dashed: bool) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{:.2},{:.2}", frame.px(*x), frame.py(*y)))
        .collect();
    let dash = if dashed { " stroke-dasharray=\"6 4\"" } else { "" };
    format!(
        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"{dash} points=\"{}\"/>\n",
        coords.join(" ")
    )
}

fn circles(frame: &Frame, points: &[(f64, f64)], color: &str, radius: f64) -> String {
    let mut out = String::new();
    for (x, y) in points {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{radius}" fill="{color}" fill-opacity="0.7"/>"#,
            frame.px(*x),
            frame.py(*y)
        );
    }
    out
}

fn legend(entries: &[(&str, &str)]) -> String {
    let mut out = String::new();
    for (i, (label, color)) in entries.iter().enumerate() {
        let y = MARGIN_T + 14.0 + 18.0 * i as f64;
        let x = WIDTH - MARGIN_R - 150.0;
        let _ = writeln!(
            out,
            r#"<rect x="{x}" y="{}" width="12" height="12" fill="{color}"/>"#,
            y - 10.0
        );
        let _ = writeln!(out, r#"<text x="{}" y="{y}" font-size="12">{label}</text>"#, x + 18.0);
    }
    out
}

fn curves_svg(curves: &PassKCurve) -> String {
    // Budgets are typically powers of two; plot against log2(k).
    let xs: Vec<f64> = curves.ks.iter().map(|k| f64::from(*k).log2()).collect();
    let frame = Frame::new(xs[0], *xs.last().unwrap(), 0.0, 1.0);
    let mut body = frame.axes("Pass@k, dataset mean", "samples k", "pass@k");
    for (x, k) in xs.iter().zip(&curves.ks) {
        body.push_str(&frame.x_tick(*x, &k.to_string()));
    }
    let emp: Vec<(f64, f64)> = xs.iter().copied().zip(curves.empirical.iter().copied()).collect();
    let theo: Vec<(f64, f64)> =
        xs.iter().copied().zip(curves.theoretical.iter().copied()).collect();
    body.push_str(&polyline(&frame, &theo, RED, true));
    body.push_str(&polyline(&frame, &emp, BLUE, false));
    body.push_str(&circles(&frame, &emp, BLUE, 3.0));
    body.push_str(&legend(&[("empirical", BLUE), ("theoretical", RED)]));
    svg_document(body)
}

fn classification_svg(rows: &[(String, Census)]) -> String {
    let max = rows
        .iter()
        .map(|(_, c)| c.null.max(c.transitional).max(c.feasible))
        .max()
        .unwrap_or(1)
        .max(1);
    let frame = Frame::new(0.0, rows.len() as f64, 0.0, max as f64);
    let mut body = frame.axes("Capability census", "", "tasks");
    let band = (WIDTH - MARGIN_L - MARGIN_R) / rows.len() as f64;
    for (i, (label, census)) in rows.iter().enumerate() {
        let x0 = MARGIN_L + band * i as f64;
        let bar_w = band / 4.0;
        for (j, (count, color)) in [
            (census.null, GRAY),
            (census.transitional, BLUE),
            (census.feasible, GREEN),
        ]
        .iter()
        .enumerate()
        {
            let x = x0 + bar_w * (j as f64 + 0.5);
            let top = frame.py(*count as f64);
            let base = HEIGHT - MARGIN_B;
            let _ = writeln!(
                body,
                r#"<rect x="{x:.2}" y="{top:.2}" width="{bar_w:.2}" height="{:.2}" fill="{color}"/>"#,
                base - top
            );
        }
        let _ = writeln!(
            body,
            r#"<text x="{:.2}" y="{}" font-size="11" text-anchor="middle">{label}</text>"#,
            x0 + band / 2.0,
            HEIGHT - MARGIN_B + 18.0
        );
    }
    body.push_str(&legend(&[("null", GRAY), ("transitional", BLUE), ("feasible", GREEN)]));
    svg_document(body)
}

fn barrier_svg(section: &BarrierSection) -> String {
    let depths: Vec<f64> = section.points.iter().map(|(d, _)| f64::from(*d)).collect();
    let max_depth = depths.iter().copied().fold(1.0, f64::max);
    let frame = Frame::new(0.0, max_depth, 0.0, 1.0);
    let mut body = frame.axes("Success rate by chain depth", "depth", "success rate");
    for (d, _) in &section.points {
        body.push_str(&frame.x_tick(f64::from(*d), &d.to_string()));
    }
    let fitted: Vec<(f64, f64)> = (0..=(max_depth as u32))
        .map(|d| (f64::from(d), section.fit.p.powi(d as i32)))
        .collect();
    body.push_str(&polyline(&frame, &fitted, RED, true));
    let observed: Vec<(f64, f64)> =
        section.points.iter().map(|(d, p)| (f64::from(*d), *p)).collect();
    body.push_str(&circles(&frame, &observed, BLUE, 4.0));
    body.push_str(&legend(&[("observed", BLUE), ("fit p^depth", RED)]));
    svg_document(body)
}

fn correlation_svg(section: &CorrelationSection) -> String {
    let frame = Frame::new(0.0, 1.0, 0.0, 1.0);
    let mut body = frame.axes(
        "Composite rate vs step product",
        "predicted (step product)",
        "observed",
    );
    for i in 0..=4 {
        let v = f64::from(i) / 4.0;
        body.push_str(&frame.x_tick(v, &format!("{v:.2}")));
    }
    body.push_str(&polyline(&frame, &[(0.0, 0.0), (1.0, 1.0)], GRAY, true));
    let points: Vec<(f64, f64)> =
        section.points.iter().map(|p| (p.predicted, p.observed)).collect();
    body.push_str(&circles(&frame, &points, BLUE, 3.0));
    let _ = writeln!(
        body,
        r#"<text x="{}" y="{}" font-size="12">r = {:.4}</text>"#,
        MARGIN_L + 10.0,
        MARGIN_T + 14.0,
        section.pearson_r
    );
    svg_document(body)
}

fn emergence_svg(report: &EmergenceReport) -> String {
    let max = report.histogram.iter().copied().max().unwrap_or(1).max(1);
    let frame = Frame::new(0.0, 1.0, 0.0, max as f64);
    let mut body = frame.axes("Recovered tasks by post success rate", "post p", "tasks");
    for i in 0..=5 {
        let v = f64::from(i) / 5.0;
        body.push_str(&frame.x_tick(v, &format!("{v:.1}")));
    }
    for (i, count) in report.histogram.iter().enumerate() {
        let x0 = frame.px(i as f64 / 10.0);
        let x1 = frame.px((i + 1) as f64 / 10.0);
        let top = frame.py(*count as f64);
        let base = HEIGHT - MARGIN_B;
        let _ = writeln!(
            body,
            r#"<rect x="{:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="{GREEN}" stroke="white"/>"#,
            x0,
            x1 - x0,
            base - top
        );
    }
    svg_document(body)
}

fn shifts_svg(section: &ShiftSection) -> String {
    let n = section.records.len().max(1);
    let frame = Frame::new(0.0, n as f64, -1.0, 1.0);
    let mut body = frame.axes("Per-task rate shift", "task (input order)", "delta p");
    let zero = frame.py(0.0);
    let _ = writeln!(
        body,
        r##"<line x1="{MARGIN_L}" y1="{zero:.2}" x2="{:.2}" y2="{zero:.2}" stroke="#bbb"/>"##,
        WIDTH - MARGIN_R
    );
    let points: Vec<(f64, f64)> = section
        .records
        .iter()
        .enumerate()
        .map(|(i, r)| (i as f64 + 0.5, r.delta_p))
        .collect();
    body.push_str(&circles(&frame, &points, BLUE, 2.5));
    svg_document(body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{fit_barrier, EmergenceReport};
    use crate::eval::CapabilityState;

    fn meta() -> ReportMeta {
        ReportMeta { config_hash: "abcd1234abcd1234".into(), seed: 42 }
    }

    fn full_inputs() -> ReportInputs {
        let curves = PassKCurve {
            ks: vec![1, 2, 4, 8],
            empirical: vec![0.3, 0.5, 0.7, 0.9],
            theoretical: vec![0.3, 0.51, 0.76, 0.94],
        };
        let points = vec![(1, 0.5), (2, 0.25), (3, 0.125)];
        let fit = fit_barrier(&points).unwrap();
        ReportInputs {
            curves: Some(curves),
            classification: vec![
                ("base".into(), Census { null: 10, transitional: 5, feasible: 35 }),
                ("post".into(), Census { null: 2, transitional: 8, feasible: 40 }),
            ],
            barrier: Some(BarrierSection { points, fit }),
            correlation: Some(CorrelationSection {
                points: vec![
                    CorrelationPoint { task_id: "a".into(), predicted: 0.4, observed: 0.45 },
                    CorrelationPoint { task_id: "b".into(), predicted: 0.1, observed: 0.08 },
                ],
                pearson_r: 0.99,
            }),
            emergence: Some(EmergenceReport {
                null_before: 10,
                recovered: 9,
                recovery_rate: 0.9,
                recovered_mean_p: 0.17,
                recovered_median_p: 0.16,
                histogram: [0, 9, 0, 0, 0, 0, 0, 0, 0, 0],
            }),
            shifts: Some(ShiftSection {
                records: vec![ShiftRecord {
                    task_id: "a".into(),
                    before: CapabilityState::Null,
                    after: CapabilityState::Feasible,
                    delta_p: 0.4,
                }],
                eroded: 0,
            }),
        }
    }

    #[test]
    fn emits_csv_and_svg_per_section() {
        let dir = tempfile::tempdir().unwrap();
        let written = emit_report(dir.path(), &meta(), &full_inputs()).unwrap();
        let names: Vec<String> = written
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        assert_eq!(
            names,
            vec![
                "curves.csv",
                "curves.svg",
                "classification.csv",
                "classification.svg",
                "barrier.csv",
                "barrier.svg",
                "correlation.csv",
                "correlation.svg",
                "emergence.csv",
                "emergence.svg",
                "shifts.csv",
                "shifts.svg",
            ]
        );
        for path in &written {
            let content = fs::read_to_string(path).unwrap();
            if path.extension().unwrap() == "csv" {
                assert!(content.starts_with("# config_hash=abcd1234abcd1234 seed=42\n"));
            } else {
                assert!(content.starts_with("<svg"));
                assert!(content.trim_end().ends_with("</svg>"));
            }
        }
    }

    #[test]
    fn absent_sections_emit_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let inputs = ReportInputs { curves: full_inputs().curves, ..Default::default() };
        let written = emit_report(dir.path(), &meta(), &inputs).unwrap();
        assert_eq!(written.len(), 2);
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 2);
    }

    #[test]
    fn csv_tables_have_expected_shape() {
        let inputs = full_inputs();
        let csv = curves_csv(&meta(), inputs.curves.as_ref().unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "k,empirical,theoretical");
        assert_eq!(lines.len(), 6);
        assert!(lines[2].starts_with("1,0.3,"));

        let csv = barrier_csv(&meta(), inputs.barrier.as_ref().unwrap());
        assert!(csv.lines().nth(1).unwrap().starts_with("# fit p=0.5"));
        assert!(csv.contains("\ndepth,observed,fitted\n"));

        let csv = emergence_csv(&meta(), inputs.emergence.as_ref().unwrap());
        assert!(csv.contains("recovery_rate=0.9"));
        assert_eq!(csv.lines().count(), 13);

        let csv = shifts_csv(&meta(), inputs.shifts.as_ref().unwrap());
        assert!(csv.contains("a,null,feasible,0.4"));
    }

    #[test]
    fn emission_is_byte_stable() {
        let dir = tempfile::tempdir().unwrap();
        let inputs = full_inputs();
        emit_report(dir.path(), &meta(), &inputs).unwrap();
        let first = fs::read(dir.path().join("curves.svg")).unwrap();
        emit_report(dir.path(), &meta(), &inputs).unwrap();
        assert_eq!(first, fs::read(dir.path().join("curves.svg")).unwrap());
    }
}
