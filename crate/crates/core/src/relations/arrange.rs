//! Stack, align and distribute.

use super::{align_on, alignment_roles, union_on, walk_on, LayoutCx, LayoutError};
use crate::geometry::{Axis, Role};
use crate::registry::Primitive;
use crate::renderer::{PaintNode, SvgWriter};

/// Offset of a guideline from the start of a span of length `extent`.
fn offset(role: Role, extent: f64) -> f64 {
    match role {
        Role::Start | Role::Extent => 0.0,
        Role::Center => extent / 2.0,
        Role::End => extent,
    }
}

fn role_prop(cx: &LayoutCx<'_>, axis: Axis) -> Result<Option<Role>, LayoutError> {
    let value = cx.props().str("alignment").unwrap_or("");
    let roles = alignment_roles(value).ok_or_else(|| LayoutError::InvalidProp {
        node: cx.id(),
        message: format!("unknown alignment `{value}`"),
    })?;
    Ok(match axis {
        Axis::Horizontal => roles.0,
        Axis::Vertical => roles.1,
    })
}

/// Children end to end along `main`, aligned on a shared guideline across.
#[derive(Debug, Clone, Copy)]
pub struct Stack {
    pub main: Axis,
}

impl Primitive for Stack {
    fn layout(&self, cx: &mut LayoutCx<'_>) -> Result<(), LayoutError> {
        let slots = cx.children().to_vec();
        let cross = self.main.other();
        let role = role_prop(cx, cross)?.ok_or_else(|| LayoutError::InvalidProp {
            node: cx.id(),
            message: "stack alignment must name the cross axis".into(),
        })?;
        let spacing = cx.number("spacing", 0.0);

        let guide = align_on(cx, &slots, cross, role)?;
        let mut widest: f64 = 0.0;
        for &s in &slots {
            widest = widest.max(cx.extent(s, cross)?);
        }
        cx.set_own(cross.start(), guide - offset(role, widest))?;
        cx.set_own(cross.extent(), widest)?;

        let starts = walk_on(cx, &slots, self.main, spacing)?;
        let mut total = 0.0;
        for &s in &slots {
            total += cx.extent(s, self.main)?;
        }
        let total = total + spacing * (slots.len() as f64 - 1.0);
        cx.set_own(self.main.start(), starts[0])?;
        cx.set_own(self.main.extent(), total)?;
        Ok(())
    }

    fn paint(&self, _: &PaintNode<'_>, _: &mut SvgWriter) {}
}

/// Shared guideline on one or both axes. Axes the alignment does not name
/// are left for the node to settle from its children when needed.
#[derive(Debug, Clone, Copy)]
pub struct Align;

impl Primitive for Align {
    fn layout(&self, cx: &mut LayoutCx<'_>) -> Result<(), LayoutError> {
        let slots = cx.children().to_vec();
        for axis in Axis::BOTH {
            let Some(role) = role_prop(cx, axis)? else { continue };
            align_on(cx, &slots, axis, role)?;
            let (lo, hi) = union_on(cx, &slots, axis)?.expect("at least one child");
            cx.set_own(axis.start(), lo)?;
            cx.set_own(axis.extent(), hi - lo)?;
        }
        Ok(())
    }

    fn paint(&self, _: &PaintNode<'_>, _: &mut SvgWriter) {}
}

/// Even spacing along one axis; the cross axis is left open.
#[derive(Debug, Clone, Copy)]
pub struct Distribute;

impl Primitive for Distribute {
    fn layout(&self, cx: &mut LayoutCx<'_>) -> Result<(), LayoutError> {
        let slots = cx.children().to_vec();
        let axis = match cx.props().str("direction") {
            Some("vertical") => Axis::Vertical,
            Some("horizontal") => Axis::Horizontal,
            other => {
                return Err(LayoutError::InvalidProp {
                    node: cx.id(),
                    message: format!("unknown direction `{}`", other.unwrap_or("")),
                })
            }
        };
        let spacing = cx.number("spacing", 0.0);
        let starts = walk_on(cx, &slots, axis, spacing)?;
        let mut total = 0.0;
        for &s in &slots {
            total += cx.extent(s, axis)?;
        }
        cx.set_own(axis.start(), starts[0])?;
        cx.set_own(axis.extent(), total + spacing * (slots.len() as f64 - 1.0))?;
        Ok(())
    }

    fn paint(&self, _: &PaintNode<'_>, _: &mut SvgWriter) {}
}
