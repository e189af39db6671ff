//! Hand-emitted SVG charts.
//!
//! Fixed 960x540 viewBox, 12px sans-serif text, no external resources.
//! CSV is the canonical output of every command; these renderings are a
//! convenience for eyeballing the same numbers.

use chrono::{DateTime, Datelike, NaiveDate, Utc};
use sugraph_core::Timestamp;

use crate::time::format_timestamp;

pub const WIDTH: f64 = 960.0;
pub const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

struct Svg {
    body: String,
}

impl Svg {
    fn new(title: &str) -> Svg {
        let mut body = String::new();
        body.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
             font-family=\"sans-serif\" font-size=\"12px\">\n"
        ));
        body.push_str("<rect x=\"0\" y=\"0\" width=\"960\" height=\"540\" fill=\"#ffffff\"/>\n");
        body.push_str(&format!(
            "<text x=\"{:.1}\" y=\"20\" font-size=\"14px\" font-weight=\"bold\">{}</text>\n",
            MARGIN_LEFT,
            escape(title)
        ));
        Svg { body }
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str) {
        self.body.push_str(&format!(
            "<line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"{stroke}\"/>\n"
        ));
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        self.body.push_str(&format!(
            "<rect x=\"{x:.1}\" y=\"{y:.1}\" width=\"{w:.1}\" height=\"{h:.1}\" \
             fill=\"{fill}\" stroke=\"#cccccc\"/>\n"
        ));
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, content: &str) {
        self.body.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{y:.1}\" text-anchor=\"{anchor}\">{}</text>\n",
            escape(content)
        ));
    }

    fn polyline(&mut self, points: &[(f64, f64)], stroke: &str) {
        let coords: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{x:.1},{y:.1}"))
            .collect();
        self.body.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"2\"/>\n",
            coords.join(" ")
        ));
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        self.body.push_str(&format!(
            "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"{r:.1}\" fill=\"{fill}\" stroke=\"#000000\"/>\n"
        ));
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

/// One step line of a diffusion chart.
pub struct SeriesLine {
    pub label: String,
    pub samples: Vec<(Timestamp, usize)>,
}

/// A superseding marker: time and the value of the overtaking series.
pub struct Marker {
    pub time: Timestamp,
    pub value: usize,
}

/// Renders step lines for several releases plus superseding markers.
pub fn render_diffusion(title: &str, series: &[SeriesLine], markers: &[Marker]) -> String {
    let mut svg = Svg::new(title);
    let plot_right = WIDTH - MARGIN_RIGHT;
    let plot_bottom = HEIGHT - MARGIN_BOTTOM;

    let times: Vec<i64> = series
        .iter()
        .flat_map(|s| s.samples.iter().map(|&(t, _)| t.millis()))
        .collect();
    let max_value = series
        .iter()
        .flat_map(|s| s.samples.iter().map(|&(_, v)| v))
        .max()
        .unwrap_or(0)
        .max(1);
    let (t_min, t_max) = match (times.iter().min(), times.iter().max()) {
        (Some(&lo), Some(&hi)) if lo < hi => (lo, hi),
        (Some(&lo), _) => (lo - 1, lo + 1),
        _ => (0, 1),
    };

    let x_of = |t: i64| -> f64 {
        MARGIN_LEFT + (t - t_min) as f64 / (t_max - t_min) as f64 * (plot_right - MARGIN_LEFT)
    };
    let y_of = |v: usize| -> f64 {
        plot_bottom - v as f64 / max_value as f64 * (plot_bottom - MARGIN_TOP)
    };

    // axes
    svg.line(MARGIN_LEFT, MARGIN_TOP, MARGIN_LEFT, plot_bottom, "#000000");
    svg.line(MARGIN_LEFT, plot_bottom, plot_right, plot_bottom, "#000000");
    for tick in month_ticks(t_min, t_max) {
        let x = x_of(tick);
        svg.line(x, plot_bottom, x, plot_bottom + 4.0, "#000000");
        svg.text(
            x,
            plot_bottom + 18.0,
            "middle",
            &format_timestamp(Timestamp(tick)),
        );
    }
    let y_step = (max_value / 5).max(1);
    let mut v = 0;
    while v <= max_value {
        let y = y_of(v);
        svg.line(MARGIN_LEFT - 4.0, y, MARGIN_LEFT, y, "#000000");
        svg.text(MARGIN_LEFT - 8.0, y + 4.0, "end", &v.to_string());
        v += y_step;
    }

    for (i, line) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if let Some(&(t0, v0)) = line.samples.first() {
            let mut points = vec![(x_of(t0.millis()), y_of(v0))];
            let mut last = v0;
            for &(t, value) in &line.samples[1..] {
                points.push((x_of(t.millis()), y_of(last)));
                points.push((x_of(t.millis()), y_of(value)));
                last = value;
            }
            points.push((plot_right, y_of(last)));
            svg.polyline(&points, color);
        }
        // legend
        let ly = MARGIN_TOP + 16.0 * i as f64;
        svg.line(plot_right - 150.0, ly, plot_right - 130.0, ly, color);
        svg.text(plot_right - 125.0, ly + 4.0, "start", &line.label);
    }

    for marker in markers {
        svg.circle(
            x_of(marker.time.millis()),
            y_of(marker.value),
            4.0,
            "#000000",
        );
    }
    svg.finish()
}

/// Renders an intensity heat map over a project set. `None` cells (the
/// diagonal) stay blank.
pub fn render_heatmap(title: &str, labels: &[String], matrix: &[Vec<Option<f64>>]) -> String {
    let mut svg = Svg::new(title);
    let n = labels.len().max(1) as f64;
    let left = MARGIN_LEFT + 60.0;
    let top = MARGIN_TOP + 10.0;
    let size = ((WIDTH - left - MARGIN_RIGHT) / n).min((HEIGHT - top - MARGIN_BOTTOM) / n);

    for (i, row) in matrix.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            let x = left + j as f64 * size;
            let y = top + i as f64 * size;
            match cell {
                Some(value) => {
                    svg.rect(x, y, size, size, &shade(*value));
                    if labels.len() <= 12 {
                        svg.text(
                            x + size / 2.0,
                            y + size / 2.0 + 4.0,
                            "middle",
                            &trim_float(*value),
                        );
                    }
                }
                None => svg.rect(x, y, size, size, "#ffffff"),
            }
        }
    }
    for (i, label) in labels.iter().enumerate() {
        svg.text(
            left - 6.0,
            top + i as f64 * size + size / 2.0 + 4.0,
            "end",
            label,
        );
        svg.text(
            left + i as f64 * size + size / 2.0,
            top + n * size + 14.0,
            "middle",
            label,
        );
    }
    svg.finish()
}

/// Renders the release pair grid with annotated counts and outside
/// margins at the end of each axis.
pub struct ReleaseGrid<'a> {
    pub title: &'a str,
    pub x_labels: &'a [String],
    pub y_labels: &'a [String],
    pub counts: &'a [Vec<usize>],
    pub intensity: &'a [Vec<f64>],
    pub outside_x: &'a [usize],
    pub outside_y: &'a [usize],
}

pub fn render_release_grid(grid: &ReleaseGrid) -> String {
    let mut svg = Svg::new(grid.title);
    // one extra row (top) for the x margins and one extra column
    // (right) for the y margins
    let cols = (grid.x_labels.len() + 1).max(1) as f64;
    let rows = (grid.y_labels.len() + 1).max(1) as f64;
    let left = MARGIN_LEFT + 60.0;
    let top = MARGIN_TOP + 10.0;
    let cell_w = (WIDTH - left - MARGIN_RIGHT) / cols;
    let cell_h = ((HEIGHT - top - MARGIN_BOTTOM) / rows).min(cell_w);

    // margin row: outside counts of each x release
    for (i, &value) in grid.outside_x.iter().enumerate() {
        let x = left + i as f64 * cell_w;
        svg.rect(x, top, cell_w, cell_h, "#f5f5f5");
        svg.text(
            x + cell_w / 2.0,
            top + cell_h / 2.0 + 4.0,
            "middle",
            &value.to_string(),
        );
    }
    svg.text(left - 6.0, top + cell_h / 2.0 + 4.0, "end", "outside");

    for (j, y_label) in grid.y_labels.iter().enumerate() {
        let y = top + (j as f64 + 1.0) * cell_h;
        for i in 0..grid.x_labels.len() {
            let x = left + i as f64 * cell_w;
            svg.rect(x, y, cell_w, cell_h, &shade(grid.intensity[i][j]));
            svg.text(
                x + cell_w / 2.0,
                y + cell_h / 2.0 + 4.0,
                "middle",
                &grid.counts[i][j].to_string(),
            );
        }
        // margin column: outside count of this y release
        let x = left + grid.x_labels.len() as f64 * cell_w;
        svg.rect(x, y, cell_w, cell_h, "#f5f5f5");
        svg.text(
            x + cell_w / 2.0,
            y + cell_h / 2.0 + 4.0,
            "middle",
            &grid.outside_y[j].to_string(),
        );
        svg.text(left - 6.0, y + cell_h / 2.0 + 4.0, "end", y_label);
    }

    let bottom = top + rows * cell_h;
    for (i, x_label) in grid.x_labels.iter().enumerate() {
        svg.text(
            left + i as f64 * cell_w + cell_w / 2.0,
            bottom + 14.0,
            "middle",
            x_label,
        );
    }
    svg.text(
        left + grid.x_labels.len() as f64 * cell_w + cell_w / 2.0,
        bottom + 14.0,
        "middle",
        "outside",
    );
    svg.finish()
}

fn shade(value: f64) -> String {
    // white at zero down to a dark tone at one
    let clamped = value.clamp(0.0, 1.0);
    let level = 255.0 - clamped * 205.0;
    let level = level.round() as u8;
    format!("#{level:02x}{level:02x}{level:02x}")
}

fn trim_float(v: f64) -> String {
    let s = format!("{v:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Month-boundary tick positions, thinned to at most 12.
fn month_ticks(t_min: i64, t_max: i64) -> Vec<i64> {
    let start = DateTime::<Utc>::from_timestamp_millis(t_min)
        .map(|d| (d.year(), d.month()))
        .unwrap_or((1970, 1));
    let mut ticks = Vec::new();
    let (mut year, mut month) = start;
    loop {
        let date = NaiveDate::from_ymd_opt(year, month, 1).expect("first of month");
        let millis = date
            .and_hms_opt(0, 0, 0)
            .expect("midnight")
            .and_utc()
            .timestamp_millis();
        if millis > t_max {
            break;
        }
        if millis >= t_min {
            ticks.push(millis);
        }
        month += 1;
        if month > 12 {
            month = 1;
            year += 1;
        }
    }
    if ticks.is_empty() {
        return vec![t_min, t_max];
    }
    let step = ticks.len().div_ceil(12);
    ticks.into_iter().step_by(step.max(1)).collect()
}
