//! Plain grouping: children stay where they are, or at the origin.

use super::{union_on, LayoutCx, LayoutError};
use crate::geometry::Axis;
use crate::registry::Primitive;
use crate::renderer::{PaintNode, SvgWriter};

#[derive(Debug, Clone, Copy)]
pub struct Group;

impl Primitive for Group {
    fn layout(&self, cx: &mut LayoutCx<'_>) -> Result<(), LayoutError> {
        let slots = cx.children().to_vec();
        for axis in Axis::BOTH {
            // reading fixes unplaced children at translate zero
            if let Some((lo, hi)) = union_on(cx, &slots, axis)? {
                cx.set_own(axis.start(), lo)?;
                cx.set_own(axis.extent(), hi - lo)?;
            }
        }
        Ok(())
    }

    fn paint(&self, _: &PaintNode<'_>, _: &mut SvgWriter) {}
}
