//! Self-sizing marks. Each mark's local box starts at (0, 0).

use svgtypes::{SimplePathSegment, SimplifyingPathParser};

use super::{LayoutCx, LayoutError};
use crate::geometry::Dim;
use crate::props::{PropValue, Props};
use crate::registry::Primitive;
use crate::renderer::{Attrs, PaintNode, SvgWriter};

/// Width of one character relative to the font size.
const CHAR_WIDTH: f64 = 0.6;
/// Line height relative to the font size.
const LINE_HEIGHT: f64 = 1.2;

/// Deterministic text box: fixed advance per Unicode scalar value.
pub fn measure_text(content: &str, font_size: f64, _font_family: &str) -> (f64, f64) {
    let n = content.chars().count() as f64;
    (CHAR_WIDTH * font_size * n, LINE_HEIGHT * font_size)
}

/// Bounds `(min_x, min_y, max_x, max_y)` of a path's control polygon, or
/// `None` for a path without points.
pub fn path_bounds(d: &str) -> Result<Option<(f64, f64, f64, f64)>, String> {
    let mut b: Option<(f64, f64, f64, f64)> = None;
    let mut add = |x: f64, y: f64| {
        b = Some(match b {
            None => (x, y, x, y),
            Some((x0, y0, x1, y1)) => (x0.min(x), y0.min(y), x1.max(x), y1.max(y)),
        });
    };
    for seg in SimplifyingPathParser::from(d) {
        match seg.map_err(|e| format!("invalid path data: {e}"))? {
            SimplePathSegment::MoveTo { x, y } | SimplePathSegment::LineTo { x, y } => add(x, y),
            SimplePathSegment::CurveTo { x1, y1, x2, y2, x, y } => {
                add(x1, y1);
                add(x2, y2);
                add(x, y);
            }
            SimplePathSegment::Quadratic { x1, y1, x, y } => {
                add(x1, y1);
                add(x, y);
            }
            SimplePathSegment::ClosePath => {}
        }
    }
    Ok(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkKind {
    Rect,
    Circle,
    Ellipse,
    Path,
    Text,
}

#[derive(Debug, Clone, Copy)]
pub struct Mark(pub MarkKind);

impl Mark {
    fn size(&self, props: &Props) -> Result<(f64, f64), String> {
        let n = |k: &str| props.number(k).unwrap_or(0.0);
        Ok(match self.0 {
            MarkKind::Rect => (n("width"), n("height")),
            MarkKind::Circle => (2.0 * n("r"), 2.0 * n("r")),
            MarkKind::Ellipse => (2.0 * n("rx"), 2.0 * n("ry")),
            MarkKind::Path => match path_bounds(props.str("d").unwrap_or(""))? {
                Some((x0, y0, x1, y1)) => (x1 - x0, y1 - y0),
                None => (0.0, 0.0),
            },
            MarkKind::Text => measure_text(
                props.str("content").unwrap_or(""),
                props.number("fontSize").unwrap_or(16.0),
                props.str("fontFamily").unwrap_or("sans-serif"),
            ),
        })
    }
}

impl Primitive for Mark {
    fn layout(&self, cx: &mut LayoutCx<'_>) -> Result<(), LayoutError> {
        let (w, h) = self
            .size(cx.props())
            .map_err(|message| LayoutError::InvalidProp { node: cx.id(), message })?;
        cx.set_own(Dim::Left, 0.0)?;
        cx.set_own(Dim::Top, 0.0)?;
        cx.set_own(Dim::Width, w)?;
        cx.set_own(Dim::Height, h)?;
        Ok(())
    }

    fn paint(&self, node: &PaintNode<'_>, out: &mut SvgWriter) {
        let p = node.props;
        let mut a = Attrs::new();
        match self.0 {
            MarkKind::Rect => {
                a.num("x", node.left)
                    .num("y", node.top)
                    .num("width", node.width)
                    .num("height", node.height)
                    .opt_str("fill", p.str("fill"));
                if let Some(rx) = p.number("rx").filter(|r| *r > 0.0) {
                    a.num("rx", rx);
                }
                stroke(&mut a, p);
                out.leaf("rect", a);
            }
            MarkKind::Circle => {
                a.num("cx", node.left + node.width / 2.0)
                    .num("cy", node.top + node.height / 2.0)
                    .num("r", node.width / 2.0)
                    .opt_str("fill", p.str("fill"));
                stroke(&mut a, p);
                out.leaf("circle", a);
            }
            MarkKind::Ellipse => {
                a.num("cx", node.left + node.width / 2.0)
                    .num("cy", node.top + node.height / 2.0)
                    .num("rx", node.width / 2.0)
                    .num("ry", node.height / 2.0)
                    .opt_str("fill", p.str("fill"));
                stroke(&mut a, p);
                out.leaf("ellipse", a);
            }
            MarkKind::Path => {
                let d = p.str("d").unwrap_or("");
                let (x0, y0) = match path_bounds(d) {
                    Ok(Some((x0, y0, _, _))) => (x0, y0),
                    _ => (0.0, 0.0),
                };
                a.str("d", d).opt_str("fill", p.str("fill"));
                // the path's own coordinates are shifted so its bounds start at the box origin
                let (dx, dy) = (node.left - x0, node.top - y0);
                if dx != 0.0 || dy != 0.0 {
                    a.translate(dx, dy);
                }
                stroke(&mut a, p);
                dasharray(&mut a, p);
                out.leaf("path", a);
            }
            MarkKind::Text => {
                a.num("x", node.left)
                    .num("y", node.top)
                    .str("dominant-baseline", "text-before-edge")
                    .opt_str("fill", p.str("fill"))
                    .opt_str("font-family", p.str("fontFamily"));
                if let Some(fs) = p.number("fontSize") {
                    a.num("font-size", fs);
                }
                out.text("text", a, p.str("content").unwrap_or(""));
            }
        }
    }
}

/// Stroke attributes, only when a stroke color is given.
pub(crate) fn stroke(a: &mut Attrs, p: &Props) {
    if let Some(s) = p.str("stroke") {
        a.str("stroke", s);
        if let Some(w) = p.number("strokeWidth") {
            a.num("stroke-width", w);
        }
    }
}

pub(crate) fn dasharray(a: &mut Attrs, p: &Props) {
    match p.get("strokeDasharray") {
        Some(PropValue::Str(s)) => {
            a.str("stroke-dasharray", s);
        }
        Some(PropValue::Number(n)) => {
            a.num("stroke-dasharray", *n);
        }
        _ => {}
    }
}
