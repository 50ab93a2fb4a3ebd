//! Minimal hand-rolled SVG renderers: persistence barcodes and confusion
//! heatmaps. Output is deterministic for identical inputs.

use std::fmt::Write;

/// One bar of a barcode: (dimension, birth, death); infinite deaths are drawn
/// to the right edge with an arrowhead.
pub fn barcode(bars: &[(usize, f64, f64)], max_eps: f64) -> String {
    let bar_h = 6.0;
    let gap = 3.0;
    let margin = 40.0;
    let plot_w = 600.0;
    let mut sorted: Vec<&(usize, f64, f64)> = bars.iter().collect();
    sorted.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.partial_cmp(&b.1).expect("finite birth"))
            .then(a.2.partial_cmp(&b.2).expect("ordered death"))
    });
    let height = margin + (bar_h + gap) * sorted.len() as f64 + margin;
    let width = margin * 2.0 + plot_w;
    let top = if max_eps > 0.0 { max_eps } else { 1.0 };
    let x = |v: f64| margin + (v.min(top) / top) * plot_w;
    let palette = [
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
    ];

    let mut out = String::new();
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"##
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="white"/>"##);
    let _ = writeln!(
        out,
        r##"<line x1="{m:.1}" y1="{y:.1}" x2="{r:.1}" y2="{y:.1}" stroke="#333" stroke-width="1"/>"##,
        m = margin,
        r = margin + plot_w,
        y = height - margin / 2.0
    );
    for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let vx = margin + frac * plot_w;
        let label = top * frac;
        let _ = writeln!(
            out,
            r##"<text x="{vx:.1}" y="{y:.1}" font-size="10" text-anchor="middle" fill="#333">{label:.3}</text>"##,
            y = height - margin / 2.0 + 14.0
        );
    }
    let mut y = margin;
    for (dim, birth, death) in sorted {
        let color = palette[dim % palette.len()];
        let x0 = x(*birth);
        let (x1, arrow) = if death.is_infinite() {
            (margin + plot_w, true)
        } else {
            (x(*death), false)
        };
        let _ = writeln!(
            out,
            r##"<rect x="{x0:.2}" y="{y:.2}" width="{w:.2}" height="{bar_h}" fill="{color}"><title>H{dim} [{birth:.4}, {death:.4})</title></rect>"##,
            w = (x1 - x0).max(1.0),
        );
        if arrow {
            let _ = writeln!(
                out,
                r##"<path d="M {x1:.2} {ym:.2} l 8 {h:.2} l -8 {h:.2} z" fill="{color}"/>"##,
                ym = y,
                h = bar_h / 2.0,
            );
        }
        y += bar_h + gap;
    }
    out.push_str("</svg>\n");
    out
}

/// Row-major confusion heatmap with per-cell counts; rows are true classes.
pub fn confusion_heatmap(matrix: &[Vec<usize>], labels: &[String]) -> String {
    let n = matrix.len();
    let cell = 48.0;
    let margin = 70.0;
    let size = margin + cell * n as f64 + 20.0;
    let max = matrix.iter().flatten().copied().max().unwrap_or(1).max(1) as f64;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0}" height="{size:.0}" viewBox="0 0 {size:.0} {size:.0}">"##
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="white"/>"##);
    for (r, row) in matrix.iter().enumerate() {
        for (c, &count) in row.iter().enumerate() {
            let intensity = count as f64 / max;
            // white -> blue ramp
            let chan = (255.0 * (1.0 - intensity * 0.85)) as u8;
            let x = margin + c as f64 * cell;
            let y = margin + r as f64 * cell;
            let _ = writeln!(
                out,
                r##"<rect x="{x:.1}" y="{y:.1}" width="{cell}" height="{cell}" fill="rgb({chan},{chan},255)" stroke="#999" stroke-width="0.5"/>"##
            );
            let text_fill = if intensity > 0.55 { "white" } else { "#222" };
            let _ = writeln!(
                out,
                r##"<text x="{tx:.1}" y="{ty:.1}" font-size="13" text-anchor="middle" fill="{text_fill}">{count}</text>"##,
                tx = x + cell / 2.0,
                ty = y + cell / 2.0 + 4.0,
            );
        }
    }
    for (i, label) in labels.iter().take(n).enumerate() {
        let mid = margin + i as f64 * cell + cell / 2.0;
        let _ = writeln!(
            out,
            r##"<text x="{mid:.1}" y="{y:.1}" font-size="11" text-anchor="middle" fill="#222">{label}</text>"##,
            y = margin - 8.0
        );
        let _ = writeln!(
            out,
            r##"<text x="{x:.1}" y="{my:.1}" font-size="11" text-anchor="end" fill="#222">{label}</text>"##,
            x = margin - 8.0,
            my = mid + 4.0
        );
    }
    let _ = writeln!(
        out,
        r##"<text x="{x:.1}" y="16" font-size="11" fill="#555">predicted &#8594;, true &#8595;</text>"##,
        x = margin
    );
    out.push_str("</svg>\n");
    out
}
