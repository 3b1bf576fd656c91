//! Deterministic SVG and DOT renderings of a diagram.

use std::fmt::Write as _;
use std::str::FromStr;

use super::{ChannelId, Diagram, DiagramError, EdgeId, EdgeKind, Side, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Svg,
    Dot,
}

impl FromStr for Format {
    type Err = DiagramError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "svg" => Ok(Format::Svg),
            "dot" => Ok(Format::Dot),
            _ => Err(DiagramError::UnknownFormat(s.to_string())),
        }
    }
}

/// Arcs to highlight on top of the diagram.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overlay {
    pub edges: Vec<EdgeId>,
    pub channels: Vec<ChannelId>,
}

const STEP: f64 = 60.0;
const MARGIN: f64 = 40.0;
const TOP: f64 = 40.0;
const MID: f64 = 120.0;
const BOTTOM: f64 = 200.0;

fn position(d: &Diagram, v: VertexId) -> (f64, f64) {
    let x = MARGIN + STEP * v as f64;
    let y = match d.vertices()[v].side {
        Side::Top => TOP,
        Side::Bottom => BOTTOM,
        Side::Start | Side::End => MID,
    };
    (x, y)
}

fn check_overlay(d: &Diagram, o: &Overlay) -> Result<(), DiagramError> {
    if let Some(&id) = o.edges.iter().find(|&&e| e >= d.edges().len()) {
        return Err(DiagramError::DanglingOverlay { kind: "edge", id });
    }
    if let Some(&id) = o.channels.iter().find(|&&c| c >= d.channels().len()) {
        return Err(DiagramError::DanglingOverlay { kind: "channel", id });
    }
    Ok(())
}

/// Renders `d`, optionally highlighting a path.
pub fn emit(d: &Diagram, format: Format, overlay: Option<&Overlay>) -> Result<Vec<u8>, DiagramError> {
    let empty = Overlay::default();
    let overlay = overlay.unwrap_or(&empty);
    check_overlay(d, overlay)?;
    let text = match format {
        Format::Svg => svg(d, overlay),
        Format::Dot => dot(d, overlay),
    };
    Ok(text.into_bytes())
}

fn vertex_name(d: &Diagram, v: VertexId) -> String {
    match &d.vertices()[v].label {
        Some(l) => l.to_string(),
        None => format!("v{v}"),
    }
}

fn svg(d: &Diagram, overlay: &Overlay) -> String {
    let width = 2.0 * MARGIN + STEP * (d.vertices().len().saturating_sub(1)) as f64;
    let height = BOTTOM + MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, "<title>D({})</title>", entries_text(d));
    s.push_str(
        "<style>.face{fill:#f4f4f4;stroke:none}.edge{stroke:#555;stroke-width:1}\
         .edge.path{stroke:#c00;stroke-width:3}.channel{fill:none;stroke:#06c;stroke-dasharray:4 3}\
         .channel.highlighted{stroke:#c00;stroke-width:3;stroke-dasharray:none}\
         .star{font:bold 18px sans-serif;text-anchor:middle}.label{font:11px sans-serif;text-anchor:middle}</style>\n",
    );

    s.push_str("<g class=\"faces\">\n");
    for (t, tri) in d.triangles().iter().enumerate() {
        let pts: Vec<String> = tri
            .iter()
            .map(|&v| {
                let (x, y) = position(d, v);
                format!("{x},{y}")
            })
            .collect();
        let _ = writeln!(s, r#"<polygon class="face" data-triangle="{t}" points="{}"/>"#, pts.join(" "));
    }
    s.push_str("</g>\n<g class=\"edges\">\n");
    for (e, edge) in d.edges().iter().enumerate() {
        let (x1, y1) = position(d, edge.ends.0);
        let (x2, y2) = position(d, edge.ends.1);
        let kind = match edge.kind() {
            EdgeKind::Boundary => "boundary",
            EdgeKind::Interior => "interior",
        };
        let on_path = if overlay.edges.contains(&e) { " path" } else { "" };
        let _ = writeln!(
            s,
            r#"<line class="edge {kind}{on_path}" data-edge="{e}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#
        );
    }
    s.push_str("</g>\n<g class=\"channels\">\n");
    for (c, ch) in d.channels().iter().enumerate() {
        let (x1, y1) = position(d, ch.endpoints.0);
        let (x2, y2) = position(d, ch.endpoints.1);
        let (a, b) = d.edges()[ch.shared_edge].ends;
        let (ax, ay) = position(d, a);
        let (bx, by) = position(d, b);
        let (mx, my) = ((ax + bx) / 2.0, (ay + by) / 2.0);
        // control point chosen so the curve passes through the edge midpoint
        let (cx, cy) = (2.0 * mx - (x1 + x2) / 2.0, 2.0 * my - (y1 + y2) / 2.0);
        let class = if overlay.channels.contains(&c) { "channel highlighted" } else { "channel" };
        let _ = writeln!(
            s,
            r#"<path class="{class}" data-channel="{c}" d="M {x1} {y1} Q {cx} {cy} {x2} {y2}"/>"#
        );
    }
    s.push_str("</g>\n<g class=\"vertices\">\n");
    for (v, vert) in d.vertices().iter().enumerate() {
        let (x, y) = position(d, v);
        let _ = writeln!(s, r#"<circle class="vertex" data-vertex="{v}" cx="{x}" cy="{y}" r="3"/>"#);
        let below = matches!(vert.side, Side::Bottom);
        if vert.parity.is_odd_odd() {
            let sy = if below { y + 20.0 } else { y - 8.0 };
            let _ = writeln!(s, r#"<text class="star" x="{x}" y="{sy}">*</text>"#);
        }
        if let Some(label) = &vert.label {
            let ly = if below { y + 34.0 } else { y - 22.0 };
            let _ = writeln!(s, r#"<text class="label" x="{x}" y="{ly}">{label}</text>"#);
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}

fn dot(d: &Diagram, overlay: &Overlay) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "graph diagram {{");
    let _ = writeln!(s, "  // D({})", entries_text(d));
    let _ = writeln!(s, "  node [shape=circle, fontsize=10];");
    for (v, vert) in d.vertices().iter().enumerate() {
        let star = if vert.parity.is_odd_odd() { ", xlabel=\"*\", style=filled" } else { "" };
        let _ = writeln!(
            s,
            "  v{v} [label=\"{}\", parity=\"{}\", side=\"{}\"{star}];",
            vertex_name(d, v),
            vert.parity,
            side_name(vert.side)
        );
    }
    for (t, [a, b, c]) in d.triangles().iter().enumerate() {
        let _ = writeln!(s, "  // face {t}: v{a} v{b} v{c}");
    }
    for (e, edge) in d.edges().iter().enumerate() {
        let (a, b) = edge.ends;
        let style = if overlay.edges.contains(&e) { ", color=red, penwidth=3" } else { "" };
        let kind = match edge.kind() {
            EdgeKind::Boundary => "boundary",
            EdgeKind::Interior => "interior",
        };
        let _ = writeln!(s, "  v{a} -- v{b} [id=\"e{e}\", kind={kind}{style}];");
    }
    for (c, ch) in d.channels().iter().enumerate() {
        let (a, b) = ch.endpoints;
        let style = if overlay.channels.contains(&c) { "bold, color=red" } else { "dashed" };
        let _ = writeln!(
            s,
            "  v{a} -- v{b} [id=\"c{c}\", kind=channel, style=\"{style}\", constraint=false];"
        );
    }
    s.push_str("}\n");
    s
}

fn entries_text(d: &Diagram) -> String {
    let parts: Vec<String> = d.entries().iter().map(|b| b.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Top => "top",
        Side::Bottom => "bottom",
        Side::Start => "start",
        Side::End => "end",
    }
}
