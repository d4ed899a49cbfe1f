//! Static grouped-bar charts of PageRank per variable, one bar per decay value.

use std::fmt::Write;

use leadlag_core::rank::OrientationRanking;
use leadlag_core::{MetricKind, Orientation, RankingReport};

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 110.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Light-to-dark blue ramp; position in [0, 1].
fn ramp(position: f64) -> String {
    let lerp = |a: f64, b: f64| (a + (b - a) * position).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        lerp(189.0, 8.0),
        lerp(215.0, 48.0),
        lerp(231.0, 107.0)
    )
}

fn nice_max(v: f64) -> f64 {
    if v <= 0.0 {
        return 1.0;
    }
    let mag = 10f64.powf(v.log10().floor());
    for step in [1.0, 2.0, 2.5, 5.0, 10.0] {
        if step * mag >= v {
            return step * mag;
        }
    }
    10.0 * mag
}

fn title(metric: MetricKind, orientation: Orientation) -> String {
    let metric = match metric {
        MetricKind::Correlation => "absolute correlation",
        MetricKind::MutualInformation => "mutual information",
        MetricKind::TransferEntropy => "transfer entropy",
    };
    match orientation {
        Orientation::TowardLead => format!("PageRank, links toward lead variable (influential), {metric}"),
        Orientation::TowardLag => format!("PageRank, links toward lagging variable (influenced), {metric}"),
    }
}

/// Variables on the x axis in descending average PageRank.
pub fn ranking_chart(report: &RankingReport, ranking: &OrientationRanking) -> String {
    let n_vars = report.variables.len();
    let n_a = report.a_values.len();
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let y_max = nice_max(ranking.pagerank.iter().flatten().copied().fold(0.0, f64::max));
    let group_w = plot_w / n_vars as f64;
    let bar_w = group_w * 0.8 / n_a as f64;
    let y = |v: f64| TOP + plot_h * (1.0 - v / y_max);

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(&title(report.metric, ranking.orientation))
    )
    .unwrap();

    for i in 0..=5 {
        let v = y_max * i as f64 / 5.0;
        let yy = y(v);
        writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{yy:.2}" x2="{:.2}" y2="{yy:.2}" stroke="#dddddd"/>"##,
            LEFT + plot_w
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.3}</text>"#,
            LEFT - 6.0,
            yy + 4.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">PageRank</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    )
    .unwrap();

    for (slot, &var) in ranking.order.iter().enumerate() {
        let x0 = LEFT + slot as f64 * group_w + group_w * 0.1;
        for (ai, row) in ranking.pagerank.iter().enumerate() {
            let v = row[var];
            let top = y(v);
            let color = ramp(if n_a > 1 { ai as f64 / (n_a - 1) as f64 } else { 1.0 });
            writeln!(
                s,
                r#"<rect x="{:.2}" y="{top:.2}" width="{bar_w:.2}" height="{:.2}" fill="{color}"><title>{} a={}: {v:.6}</title></rect>"#,
                x0 + ai as f64 * bar_w,
                TOP + plot_h - top,
                escape(&report.variables[var]),
                report.a_values[ai]
            )
            .unwrap();
        }
        let lx = LEFT + (slot as f64 + 0.5) * group_w;
        let ly = TOP + plot_h + 14.0;
        writeln!(
            s,
            r#"<text x="{lx:.2}" y="{ly:.2}" text-anchor="end" transform="rotate(-40 {lx:.2} {ly:.2})">{}</text>"#,
            escape(&report.variables[var])
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    )
    .unwrap();

    let lx = WIDTH - RIGHT + 20.0;
    writeln!(s, r#"<text x="{lx}" y="{}">a</text>"#, TOP).unwrap();
    for (ai, a) in report.a_values.iter().enumerate() {
        let ly = TOP + 10.0 + ai as f64 * 16.0;
        let color = ramp(if n_a > 1 { ai as f64 / (n_a - 1) as f64 } else { 1.0 });
        writeln!(
            s,
            r#"<rect x="{lx}" y="{ly:.2}" width="12" height="12" fill="{color}"/>"#
        )
        .unwrap();
        writeln!(s, r#"<text x="{}" y="{:.2}">{a}</text>"#, lx + 18.0, ly + 10.0).unwrap();
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nice_axis_bounds() {
        assert_eq!(nice_max(0.13), 0.2);
        assert_eq!(nice_max(0.077), 0.1);
        assert_eq!(nice_max(0.3), 0.5);
        assert_eq!(nice_max(0.0), 1.0);
    }

    #[test]
    fn ramp_endpoints() {
        assert_eq!(ramp(0.0), "#bdd7e7");
        assert_eq!(ramp(1.0), "#08306b");
    }
}
