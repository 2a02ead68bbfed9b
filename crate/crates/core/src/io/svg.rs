use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use crate::atlas::{FlatDomain, SineArc};
use crate::error::{Error, Result};

const CREASE_POINTS: usize = 512;
const CUT_POINTS: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct PatternStyle {
    /// Document units per length unit.
    pub scale: f64,
    pub grid_cells_u: usize,
    pub grid_cells_v: usize,
    pub grid_colors: [String; 2],
    /// One-barbed arrows per cell; unlike a checkerboard they are chiral, so
    /// the flipped gluing shows.
    pub glyphs: bool,
}

impl Default for PatternStyle {
    fn default() -> Self {
        Self {
            scale: 30.0,
            grid_cells_u: 12,
            grid_cells_v: 6,
            grid_colors: ["#f3e3c3".into(), "#c9dcf0".into()],
            glyphs: true,
        }
    }
}

fn n4(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

/// SVG development of the rectangle: two-colour grid, crease lines
/// (dash-dot), cut lines (solid red) and the outline. `u` runs left to right,
/// `v` bottom to top.
pub fn render_pattern(domain: &FlatDomain, creases: &[SineArc], cuts: &[SineArc], style: &PatternStyle) -> Result<String> {
    if !(style.scale > 0.0 && style.scale.is_finite()) {
        return Err(Error::Config(format!("pattern scale {} must be positive", style.scale)));
    }
    if style.grid_cells_u == 0 || style.grid_cells_v == 0 {
        return Err(Error::Config("pattern grid needs at least one cell each way".into()));
    }
    let k = style.scale;
    let width = 2.0 * PI * domain.r * k;
    let height = domain.height() * k;
    let x = |u: f64| (u + PI * domain.r) * k;
    let y = |v: f64| (domain.v_max() - v) * k;
    let points = |arc: &SineArc, count: usize| {
        arc.sample(count).iter().map(|[u, v]| format!("{},{}", n4(x(*u)), n4(y(*v)))).collect::<Vec<_>>().join(" ")
    };

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = n4(width),
        h = n4(height)
    );

    let (cw, ch) = (width / style.grid_cells_u as f64, height / style.grid_cells_v as f64);
    let _ = writeln!(out, r#"<g id="grid" stroke="none">"#);
    for j in 0..style.grid_cells_v {
        for i in 0..style.grid_cells_u {
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                n4(i as f64 * cw),
                n4(height - (j + 1) as f64 * ch),
                n4(cw),
                n4(ch),
                style.grid_colors[(i + j) % 2]
            );
        }
    }
    let _ = writeln!(out, "</g>");

    if style.glyphs {
        let _ = writeln!(out, r##"<g id="glyphs" fill="none" stroke="#555555" stroke-width="{}">"##, n4(0.04 * cw.min(ch)));
        let len = 0.3 * cw.min(ch);
        for j in 0..style.grid_cells_v {
            for i in 0..style.grid_cells_u {
                let cx = (i as f64 + 0.5) * cw;
                let cy = height - (j as f64 + 0.5) * ch;
                let (x0, x1) = (cx - len, cx + len);
                let _ = writeln!(
                    out,
                    r#"<path d="M{} {} L{} {} L{} {}"/>"#,
                    n4(x0),
                    n4(cy),
                    n4(x1),
                    n4(cy),
                    n4(x1 - 0.5 * len),
                    n4(cy - 0.5 * len)
                );
            }
        }
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(
        out,
        r##"<g id="creases" fill="none" stroke="#1f4e9a" stroke-width="1" stroke-dasharray="8 3 1.5 3">"##
    );
    for (i, c) in creases.iter().enumerate() {
        let _ = writeln!(out, r#"<polyline class="crease" data-index="{i}" points="{}"/>"#, points(c, CREASE_POINTS));
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r##"<g id="cuts" fill="none" stroke="#c0392b" stroke-width="1.6">"##);
    for (i, c) in cuts.iter().enumerate() {
        let _ = writeln!(out, r#"<polyline class="cut" data-index="{i}" points="{}"/>"#, points(c, CUT_POINTS));
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(
        out,
        r##"<rect id="outline" x="0" y="0" width="{}" height="{}" fill="none" stroke="#000000" stroke-width="1.2"/>"##,
        n4(width),
        n4(height)
    );
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

pub fn write_pattern(
    domain: &FlatDomain,
    creases: &[SineArc],
    cuts: &[SineArc],
    style: &PatternStyle,
    path: impl AsRef<Path>,
) -> Result<()> {
    std::fs::write(path, render_pattern(domain, creases, cuts, style)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{build_domain, FigureConfig};

    #[test]
    fn size_and_errors() {
        let d = build_domain(&FigureConfig::new(3, 1.0, 2.0).unwrap()).unwrap();
        let svg = render_pattern(&d, &d.creases(), &[], &PatternStyle::default()).unwrap();
        assert!(svg.contains(r#"width="188.4956" height="180.0000""#));
        assert_eq!(svg.matches(r#"class="crease""#).count(), 3);
        let bad = PatternStyle { scale: 0.0, ..PatternStyle::default() };
        assert!(render_pattern(&d, &[], &[], &bad).is_err());
        let bad = PatternStyle { grid_cells_v: 0, ..PatternStyle::default() };
        assert!(render_pattern(&d, &[], &[], &bad).is_err());
    }
}
