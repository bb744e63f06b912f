//! Straight connectors between two children: arrows and lines.

use super::marks::{dasharray, stroke};
use super::{LayoutCx, LayoutError};
use crate::diagnostics::Code;
use crate::geometry::{Axis, NodeId};
use crate::registry::Primitive;
use crate::renderer::{fmt_num, Attrs, PaintNode, SvgWriter};
use crate::scenegraph::PaintData;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectorKind {
    Arrow,
    Line,
}

#[derive(Debug, Clone, Copy)]
pub struct Connector(pub ConnectorKind);

/// Axis-aligned box as `(x0, y0, x1, y1)`.
pub type Box2 = (f64, f64, f64, f64);

/// Centre-to-centre segment from `a` to `b`, clipped to both box outlines
/// and shortened by `gap` at each end. `None` when nothing is left.
pub fn clip_segment(a: Box2, b: Box2, gap: f64) -> Option<((f64, f64), (f64, f64))> {
    let ca = ((a.0 + a.2) / 2.0, (a.1 + a.3) / 2.0);
    let cb = ((b.0 + b.2) / 2.0, (b.1 + b.3) / 2.0);
    let d = (cb.0 - ca.0, cb.1 - ca.1);
    let len = d.0.hypot(d.1);
    if len <= 0.0 {
        return None;
    }
    // fraction of the centre line spent inside a box of half-size (hx, hy)
    let exit = |hx: f64, hy: f64| -> f64 {
        let tx = if d.0 == 0.0 { f64::INFINITY } else { hx / d.0.abs() };
        let ty = if d.1 == 0.0 { f64::INFINITY } else { hy / d.1.abs() };
        tx.min(ty)
    };
    let t0 = exit((a.2 - a.0) / 2.0, (a.3 - a.1) / 2.0) + gap / len;
    let t1 = 1.0 - exit((b.2 - b.0) / 2.0, (b.3 - b.1) / 2.0) - gap / len;
    if t1 - t0 <= 0.0 {
        return None;
    }
    let at = |t: f64| (ca.0 + d.0 * t, ca.1 + d.1 * t);
    Some((at(t0), at(t1)))
}

impl Primitive for Connector {
    fn layout(&self, cx: &mut LayoutCx<'_>) -> Result<(), LayoutError> {
        let slots = cx.children().to_vec();
        let mut boxes = Vec::with_capacity(2);
        for &s in &slots {
            let h = cx.read(s, Axis::Horizontal)?;
            let v = cx.read(s, Axis::Vertical)?;
            boxes.push((
                h.start.expect("sized"),
                v.start.expect("sized"),
                h.end.expect("sized"),
                v.end.expect("sized"),
            ));
        }
        let [a, b] = boxes[..] else {
            return Err(LayoutError::InvalidProp {
                node: cx.id(),
                message: format!("a connector needs exactly 2 children, got {}", boxes.len()),
            });
        };
        let gap = cx.number("gap", 0.0);
        match clip_segment(a, b, gap) {
            Some((from, to)) => cx.set_paint(PaintData::Segment { from, to })?,
            None => {
                let ends: Vec<NodeId> = slots.iter().map(|s| cx.target(*s)).collect::<Result<_, _>>()?;
                cx.warn(
                    Code::DegenerateConnector,
                    "connector endpoints overlap; nothing is drawn",
                    std::iter::once(cx.id()).chain(ends).collect(),
                );
                cx.set_paint(PaintData::Degenerate)?;
            }
        }
        let (x0, y0) = (a.0.min(b.0), a.1.min(b.1));
        let (x1, y1) = (a.2.max(b.2), a.3.max(b.3));
        cx.set_own(Axis::Horizontal.start(), x0)?;
        cx.set_own(Axis::Horizontal.extent(), x1 - x0)?;
        cx.set_own(Axis::Vertical.start(), y0)?;
        cx.set_own(Axis::Vertical.extent(), y1 - y0)?;
        Ok(())
    }

    fn paint(&self, node: &PaintNode<'_>, out: &mut SvgWriter) {
        let PaintData::Segment { from, to } = node.paint else {
            return;
        };
        let p = node.props;
        let d = format!(
            "M{},{} L{},{}",
            fmt_num(from.0),
            fmt_num(from.1),
            fmt_num(to.0),
            fmt_num(to.1)
        );
        let mut a = Attrs::new();
        a.str("d", &d).str("fill", "none");
        stroke(&mut a, p);
        dasharray(&mut a, p);
        if self.0 == ConnectorKind::Arrow {
            let id = format!("bf-arrow-{}", node.id.0);
            let color = p.str("stroke").unwrap_or("black");
            out.open("defs", Attrs::new());
            let mut m = Attrs::new();
            m.str("id", &id)
                .str("markerHeight", "4")
                .str("markerUnits", "strokeWidth")
                .str("markerWidth", "4")
                .str("orient", "auto")
                .str("refX", "4")
                .str("refY", "2")
                .str("viewBox", "0 0 4 4");
            out.open("marker", m);
            let mut head = Attrs::new();
            head.str("d", "M0,0 L4,2 L0,4 z").str("fill", color);
            out.leaf("path", head);
            out.close("marker");
            out.close("defs");
            a.str("marker-end", &format!("url(#{id})"));
        }
        out.leaf("path", a);
    }
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;
    use crate::props::Props;

    #[test]
    fn clips_to_box_outlines() {
        let s = clip_segment((0.0, 0.0, 10.0, 10.0), (40.0, 0.0, 50.0, 10.0), 0.0).unwrap();
        assert_eq!(s, ((10.0, 5.0), (40.0, 5.0)));
        let s = clip_segment((0.0, 0.0, 10.0, 10.0), (40.0, 0.0, 50.0, 10.0), 5.0).unwrap();
        assert_eq!(s, ((15.0, 5.0), (35.0, 5.0)));
    }

    #[test]
    fn clips_diagonally() {
        let ((x0, y0), (x1, y1)) = clip_segment((0.0, 0.0, 10.0, 10.0), (30.0, 30.0, 40.0, 40.0), 0.0).unwrap();
        assert_eq!((x0, y0, x1, y1), (10.0, 10.0, 30.0, 30.0));
    }

    #[test]
    fn coincident_or_overlapping_boxes_are_degenerate() {
        assert_eq!(clip_segment((0.0, 0.0, 10.0, 10.0), (0.0, 0.0, 10.0, 10.0), 0.0), None);
        assert_eq!(clip_segment((0.0, 0.0, 10.0, 10.0), (5.0, 0.0, 15.0, 10.0), 0.0), None);
        // a gap can eat the whole segment too
        assert_eq!(clip_segment((0.0, 0.0, 10.0, 10.0), (14.0, 0.0, 24.0, 10.0), 3.0), None);
    }

    #[test]
    fn line_between_placed_rects() {
        let mut h = Harness::new();
        let g = h.node("group", None, Props::new());
        let a = h.node("rect", Some(g), rect(10.0, 10.0));
        let b = h.node("rect", Some(g), rect(10.0, 10.0));
        h.run(a).unwrap();
        h.run(b).unwrap();
        h.graph.set_translate(b, Axis::Horizontal, 40.0, g).unwrap();
        let l = h.node("line", Some(g), Props::new());
        h.reference(l, a);
        h.reference(l, b);
        h.run(l).unwrap();
        assert_eq!(
            h.graph.layout(l).unwrap().paint,
            PaintData::Segment {
                from: (10.0, 5.0),
                to: (40.0, 5.0)
            }
        );
        assert_eq!(h.abs(l, Axis::Horizontal), (0.0, 50.0));
        assert!(h.warnings.is_empty());
    }

    #[test]
    fn coincident_endpoints_warn() {
        let mut h = Harness::new();
        let g = h.node("group", None, Props::new());
        let a = h.node("rect", Some(g), rect(10.0, 10.0));
        h.run(a).unwrap();
        let b = h.node("rect", Some(g), rect(10.0, 10.0));
        h.run(b).unwrap();
        let l = h.node("arrow", Some(g), Props::new());
        h.reference(l, a);
        h.reference(l, b);
        h.run(l).unwrap();
        assert_eq!(h.graph.layout(l).unwrap().paint, PaintData::Degenerate);
        assert_eq!(h.warnings.len(), 1);
        assert_eq!(h.warnings[0].code, Code::DegenerateConnector);
    }
}
