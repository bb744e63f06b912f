//! A padded shape behind a set of children.

use super::marks::stroke;
use super::{LayoutCx, LayoutError};
use crate::geometry::Axis;
use crate::props::Props;
use crate::registry::Primitive;
use crate::renderer::{Attrs, PaintNode, SvgWriter};

#[derive(Debug, Clone, Copy)]
pub struct Background;

impl Primitive for Background {
    fn layout(&self, cx: &mut LayoutCx<'_>) -> Result<(), LayoutError> {
        let slots = cx.children().to_vec();
        let pad = cx.number("padding", 10.0);
        for axis in Axis::BOTH {
            let mut fixed = None::<(f64, f64)>;
            let mut loose = Vec::new();
            for &s in &slots {
                if cx.is_fixed(s, axis)? {
                    let span = cx.read(s, axis)?;
                    let (a, b) = (span.start.expect("sized"), span.end.expect("sized"));
                    fixed = Some(fixed.map_or((a, b), |(lo, hi)| (lo.min(a), hi.max(b))));
                } else {
                    loose.push(s);
                }
            }
            // loose children go where the fixed ones begin, or at the padding
            let (origin, mut hi) = match fixed {
                Some((lo, hi)) => (lo, hi),
                None => (pad, pad),
            };
            for s in loose {
                let ext = cx.extent(s, axis)?;
                cx.place(s, axis.start(), origin)?;
                hi = hi.max(origin + ext);
            }
            cx.set_own(axis.start(), origin - pad)?;
            cx.set_own(axis.extent(), (hi - origin) + 2.0 * pad)?;
        }
        Ok(())
    }

    fn paint(&self, node: &PaintNode<'_>, out: &mut SvgWriter) {
        let shape = node.props.element("background");
        let kind = shape.map_or("rect", |e| e.kind.as_str());
        let own = shape.map(|e| e.props.clone()).unwrap_or_default();
        let props = with_shape_defaults(own);
        let mut a = Attrs::new();
        if kind == "ellipse" {
            a.num("cx", node.left + node.width / 2.0)
                .num("cy", node.top + node.height / 2.0)
                .num("rx", node.width / 2.0)
                .num("ry", node.height / 2.0);
        } else {
            a.num("x", node.left)
                .num("y", node.top)
                .num("width", node.width)
                .num("height", node.height);
            if let Some(rx) = props.number("rx").filter(|r| *r > 0.0) {
                a.num("rx", rx);
            }
        }
        a.opt_str("fill", props.str("fill"));
        stroke(&mut a, &props);
        out.leaf(kind, a);
    }
}

/// Unfilled outline unless the shape says otherwise.
fn with_shape_defaults(mut props: Props) -> Props {
    use crate::props::PropValue::*;
    for (k, v) in [
        ("fill", Str("none".into())),
        ("stroke", Str("black".into())),
        ("strokeWidth", Number(1.0)),
    ] {
        if props.get(k).is_none() {
            props.insert(k, v);
        }
    }
    props
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;
    use crate::geometry::NodeId;

    fn pos(h: &Harness, n: NodeId) -> (f64, f64) {
        (h.abs(n, Axis::Horizontal).0, h.abs(n, Axis::Vertical).0)
    }

    #[test]
    fn pads_an_unplaced_circle() {
        let mut h = Harness::new();
        let bg = h.node("background", None, props(&[("padding", 8.0.into())]));
        let c = h.node("circle", Some(bg), props(&[("r", 15.0.into())]));
        h.run(c).unwrap();
        h.run(bg).unwrap();
        assert_eq!(pos(&h, c), (8.0, 8.0));
        assert_eq!(h.abs(bg, Axis::Horizontal), (0.0, 46.0));
        assert_eq!(h.abs(bg, Axis::Vertical), (0.0, 46.0));
    }

    #[test]
    fn wraps_placed_children_without_moving_them() {
        let mut h = Harness::new();
        let g = h.node("group", None, Props::new());
        let a = h.node("rect", Some(g), rect(10.0, 20.0));
        let b = h.node("rect", Some(g), rect(30.0, 10.0));
        for (n, x, y) in [(a, 5.0, 0.0), (b, 40.0, 50.0)] {
            h.run(n).unwrap();
            h.graph.set_translate(n, Axis::Horizontal, x, g).unwrap();
            h.graph.set_translate(n, Axis::Vertical, y, g).unwrap();
        }
        let bg = h.node("background", Some(g), Props::new());
        h.reference(bg, a);
        h.reference(bg, b);
        h.run(bg).unwrap();
        assert_eq!(pos(&h, a), (5.0, 0.0));
        assert_eq!(pos(&h, b), (40.0, 50.0));
        assert_eq!(h.abs(bg, Axis::Horizontal), (-5.0, 85.0));
        assert_eq!(h.abs(bg, Axis::Vertical), (-10.0, 80.0));
    }

    #[test]
    fn paints_the_given_shape() {
        let shape = crate::docformat::Element::new("rect").prop("strokeWidth", 3.0);
        let p = Props::new().with("background", shape.into());
        let node = PaintNode::for_test(&p, (0.0, 0.0, 46.0, 46.0));
        let mut out = SvgWriter::new();
        Background.paint(&node, &mut out);
        assert_eq!(
            out.finish_fragment(),
            r#"<rect fill="none" height="46" stroke="black" stroke-width="3" width="46" x="0" y="0"/>"#
        );
    }
}
