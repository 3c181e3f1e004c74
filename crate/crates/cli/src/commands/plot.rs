//! `plot`: render a sweep CSV as a static SVG line chart of covert bits
//! against channel uses (log x), one path per (epsilon, delta) series.

use super::load_config;
use crate::CliError;
use std::fmt::Write as _;
use std::path::Path;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

struct SweepRow {
    n: f64,
    epsilon: f64,
    delta: f64,
    bits: f64,
}

fn parse_csv(text: &str) -> Result<Vec<SweepRow>, CliError> {
    let mut rows = Vec::new();
    let mut header: Option<Vec<String>> = None;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if header.is_none() {
            header = Some(line.split(',').map(|s| s.trim().to_string()).collect());
            continue;
        }
        let cols = header.as_ref().unwrap();
        let idx = |name: &str| -> Result<usize, CliError> {
            cols.iter()
                .position(|c| c == name)
                .ok_or_else(|| CliError::Config(format!("CSV is missing column \"{name}\"")))
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(CliError::Config(format!(
                "CSV row has {} fields, header has {}",
                fields.len(),
                cols.len()
            )));
        }
        let get = |i: usize| -> Result<f64, CliError> {
            fields[i]
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("unparseable number \"{}\"", fields[i])))
        };
        rows.push(SweepRow {
            n: get(idx("n")?)?,
            epsilon: get(idx("epsilon")?)?,
            delta: get(idx("delta")?)?,
            bits: get(idx("bits_exact")?)?,
        });
    }
    if rows.is_empty() {
        return Err(CliError::Config("CSV contains no data rows".into()));
    }
    Ok(rows)
}

pub fn run(
    config: Option<&Path>,
    csv_flag: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let config_csv = match (csv_flag, config) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(cfg_path)) => {
            let cfg = load_config(cfg_path)?;
            cfg.output
                .and_then(|o| o.csv)
                .map(std::path::PathBuf::from)
                .ok_or_else(|| {
                    CliError::Config("plot needs --csv or output.csv in the config".into())
                })?
        }
        (None, None) => return Err(CliError::Config("plot needs --csv or --config".into())),
    };
    let text = std::fs::read_to_string(&config_csv)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config_csv.display())))?;
    let rows = parse_csv(&text)?;
    let svg = render(&rows);
    let out_path = out.unwrap_or_else(|| Path::new("plot.svg"));
    std::fs::write(out_path, svg)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", out_path.display())))?;
    Ok(())
}

type Series = ((f64, f64), Vec<(f64, f64)>);

fn render(rows: &[SweepRow]) -> String {
    // Group rows into (epsilon, delta) series, preserving first-seen order
    // (the sweep writes them sorted).
    let mut series: Vec<Series> = Vec::new();
    for r in rows {
        let key = (r.epsilon, r.delta);
        match series.iter_mut().find(|(k, _)| *k == key) {
            Some((_, pts)) => pts.push((r.n, r.bits)),
            None => series.push((key, vec![(r.n, r.bits)])),
        }
    }
    for (_, pts) in &mut series {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    }

    let (width, height) = (860.0, 560.0);
    let (left, right, top, bottom) = (80.0, 200.0, 30.0, 60.0);
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;

    let x_min = rows
        .iter()
        .map(|r| r.n.log10())
        .fold(f64::INFINITY, f64::min);
    let x_max = rows
        .iter()
        .map(|r| r.n.log10())
        .fold(f64::NEG_INFINITY, f64::max);
    let y_min_data = rows.iter().map(|r| r.bits).fold(f64::INFINITY, f64::min);
    let y_max_data = rows
        .iter()
        .map(|r| r.bits)
        .fold(f64::NEG_INFINITY, f64::max);
    let y_pad = 0.05 * (y_max_data - y_min_data).max(1.0);
    let (y_min, y_max) = (y_min_data - y_pad, y_max_data + y_pad);
    let x_span = (x_max - x_min).max(1e-9);
    let y_span = (y_max - y_min).max(1e-9);

    let x_of = |n: f64| left + (n.log10() - x_min) / x_span * plot_w;
    let y_of = |b: f64| top + (y_max - b) / y_span * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>"
    );

    // Axes.
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        left,
        top + plot_h,
        left + plot_w,
        top + plot_h
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        left,
        top,
        left,
        top + plot_h
    );

    // Decade ticks on the x axis.
    let first_decade = x_min.ceil() as i64;
    let last_decade = x_max.floor() as i64;
    for d in first_decade..=last_decade {
        let x = x_of(10f64.powi(d as i32));
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
            top + plot_h,
            top + plot_h + 6.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">1e{d}</text>",
            top + plot_h + 20.0
        );
    }
    // Five evenly spaced y ticks.
    for i in 0..=4 {
        let b = y_min + i as f64 / 4.0 * y_span;
        let y = y_of(b);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"black\"/>",
            left - 6.0,
            left
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">{b:.1}</text>",
            left - 10.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">channel uses n</text>",
        left + plot_w / 2.0,
        height - 12.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"18\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">covert bits</text>",
        top + plot_h / 2.0,
        top + plot_h / 2.0
    );

    // One path per series plus a legend entry.
    for (i, ((eps, delta), pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut d_attr = String::new();
        for (j, (n, b)) in pts.iter().enumerate() {
            let _ = write!(
                d_attr,
                "{}{:.2} {:.2}",
                if j == 0 { "M" } else { " L" },
                x_of(*n),
                y_of(*b)
            );
        }
        let _ = writeln!(
            svg,
            "<path d=\"{d_attr}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>"
        );
        let ly = top + 16.0 + i as f64 * 18.0;
        let lx = left + plot_w + 14.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{lx:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{color}\" stroke-width=\"1.8\"/>",
            ly - 4.0,
            lx + 22.0,
            ly - 4.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{ly:.2}\" font-size=\"12\">eps={eps}, delta={delta}</text>",
            lx + 28.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
