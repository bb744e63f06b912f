//! Built-in marks and relations, written against [`LayoutCx`].
//!
//! Every child is addressed by its slot id; ref slots stand for their
//! referent. A child counts as *fixed* on an axis when its translation on
//! that axis is already defined, i.e. some earlier relation (or an earlier
//! frame walk) placed it. Relations never move fixed children; they anchor
//! on the first fixed child and report disagreement with any later one.

mod arrange;
mod background;
mod connector;
mod group;
mod marks;

use thiserror::Error;

use crate::diagnostics::Code;
use crate::geometry::{Axis, AxisSpan, Dim, NodeId, Role, TOLERANCE};
use crate::props::Props;
use crate::registry::{ElementKindSpec, KindSchema, PropSpec, PropType};
use crate::scenegraph::{GraphError, PaintData, Scenegraph};

pub use arrange::{Align, Distribute, Stack};
pub use background::Background;
pub use connector::{Connector, ConnectorKind};
pub use group::Group;
pub use marks::{measure_text, path_bounds, Mark, MarkKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayoutError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    /// Two children that were already placed elsewhere cannot both satisfy
    /// this relation.
    #[error("{relation} cannot place {other}: it sits at {found} but the relation needs {expected}")]
    Disagreement {
        relation: NodeId,
        axis: Axis,
        expected: f64,
        found: f64,
        /// First fixed child and the owner of its placement, if any.
        anchor: Option<(NodeId, Option<NodeId>)>,
        other: NodeId,
        other_owner: Option<NodeId>,
    },
    #[error("{message}")]
    InvalidProp { node: NodeId, message: String },
}

/// Non-fatal finding raised during layout.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutWarning {
    pub code: Code,
    pub message: String,
    pub nodes: Vec<NodeId>,
}

/// The scenegraph as seen by one node's layout function.
pub struct LayoutCx<'a> {
    graph: &'a mut Scenegraph,
    node: NodeId,
    props: &'a Props,
    children: &'a [NodeId],
    warnings: &'a mut Vec<LayoutWarning>,
}

impl<'a> LayoutCx<'a> {
    pub fn new(
        graph: &'a mut Scenegraph,
        node: NodeId,
        props: &'a Props,
        children: &'a [NodeId],
        warnings: &'a mut Vec<LayoutWarning>,
    ) -> Self {
        Self {
            graph,
            node,
            props,
            children,
            warnings,
        }
    }

    pub fn id(&self) -> NodeId {
        self.node
    }

    pub fn props(&self) -> &Props {
        self.props
    }

    /// Child slots in document order.
    pub fn children(&self) -> &[NodeId] {
        self.children
    }

    pub fn target(&self, slot: NodeId) -> Result<NodeId, LayoutError> {
        Ok(self.graph.target(slot)?)
    }

    pub fn is_fixed(&self, slot: NodeId, axis: Axis) -> Result<bool, LayoutError> {
        let t = self.graph.target(slot)?;
        Ok(self.graph.layout(t)?.transform.get(axis).is_some())
    }

    pub fn placement_owner(&self, slot: NodeId, axis: Axis) -> Result<Option<NodeId>, LayoutError> {
        let t = self.graph.target(slot)?;
        Ok(self.graph.layout(t)?.transform_owners.get(axis))
    }

    /// Frame-independent extent of a child. Never materializes the child's
    /// own translation.
    pub fn extent(&mut self, slot: NodeId, axis: Axis) -> Result<f64, LayoutError> {
        let t = self.graph.target(slot)?;
        ensure_sized(self.graph, t, axis)?;
        let span = self
            .graph
            .layout(t)?
            .bbox
            .span(axis)
            .map_err(|source| GraphError::Geometry { node: t, source })?;
        Ok(span.extent.expect("ensured above"))
    }

    /// A child's span in this node's frame. Undefined translations on the
    /// way, including the child's own, become zero and are owned by this node.
    pub fn read(&mut self, slot: NodeId, axis: Axis) -> Result<AxisSpan, LayoutError> {
        let t = self.graph.target(slot)?;
        ensure_sized(self.graph, t, axis)?;
        Ok(self.graph.bbox_in_frame(t, self.node, axis, self.node)?)
    }

    /// Move a child so that `dim` takes `value` in this node's frame.
    pub fn place(&mut self, slot: NodeId, dim: Dim, value: f64) -> Result<(), LayoutError> {
        let t = self.graph.target(slot)?;
        ensure_sized(self.graph, t, dim.axis())?;
        Ok(self.graph.set_dim_in_frame(t, self.node, dim, value, self.node)?)
    }

    /// Write one of this node's own local bbox fields.
    pub fn set_own(&mut self, dim: Dim, value: f64) -> Result<(), LayoutError> {
        Ok(self.graph.set_bbox(self.node, dim, value, self.node)?)
    }

    pub fn set_paint(&mut self, paint: PaintData) -> Result<(), LayoutError> {
        Ok(self.graph.set_paint(self.node, paint)?)
    }

    pub fn warn(&mut self, code: Code, message: impl Into<String>, nodes: Vec<NodeId>) {
        self.warnings.push(LayoutWarning {
            code,
            message: message.into(),
            nodes,
        });
    }

    pub fn number(&self, key: &str, default: f64) -> f64 {
        self.props.number(key).unwrap_or(default)
    }
}

/// Make sure `node` has a local start and extent on `axis`.
///
/// A relation may leave an axis open (distribute's cross axis, align's
/// untouched axis). When such a node is needed, it takes the union of its
/// children in its own frame, fixing their undefined translations to zero.
pub fn ensure_sized(graph: &mut Scenegraph, node: NodeId, axis: Axis) -> Result<(), GraphError> {
    let geometry = |source| GraphError::Geometry { node, source };
    let span = graph.layout(node)?.bbox.span(axis).map_err(geometry)?;
    if span.start.is_some() && span.extent.is_some() {
        return Ok(());
    }
    let children = graph.layout(node)?.children.clone();
    if children.is_empty() {
        return match span.extent {
            Some(_) => graph.set_bbox(node, axis.start(), 0.0, node),
            None => Err(GraphError::UndefinedExtent { node, axis }),
        };
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for slot in children {
        let t = graph.target(slot)?;
        ensure_sized(graph, t, axis)?;
        let s = graph.bbox_in_frame(t, node, axis, node)?;
        let (start, end) = (s.start.expect("sized"), s.end.expect("sized"));
        lo = lo.min(start);
        hi = hi.max(end);
    }
    if span.extent.is_none() {
        graph.set_bbox(node, axis.extent(), hi - lo, node)?;
    }
    if span.start.is_none() && span.center.is_none() && span.end.is_none() {
        graph.set_bbox(node, axis.start(), lo, node)?;
    }
    Ok(())
}

/// Guideline on `axis` for `role` over `slots`: the first fixed child's
/// value, or zero. Unfixed children are moved onto it.
pub(crate) fn align_on(cx: &mut LayoutCx<'_>, slots: &[NodeId], axis: Axis, role: Role) -> Result<f64, LayoutError> {
    let mut anchor = None;
    for &s in slots {
        if cx.is_fixed(s, axis)? {
            let v = cx.read(s, axis)?.get(role).ok_or(GraphError::UndefinedExtent {
                node: cx.target(s)?,
                axis,
            })?;
            anchor = Some((s, v));
            break;
        }
    }
    let guide = anchor.map_or(0.0, |a| a.1);
    for &s in slots {
        if Some(s) == anchor.map(|a| a.0) {
            continue;
        }
        if cx.is_fixed(s, axis)? {
            let found = cx.read(s, axis)?.get(role).unwrap_or(f64::NAN);
            check_agrees(cx, anchor.map(|a| a.0), s, axis, guide, found)?;
        } else {
            cx.place(s, axis.dim(role), guide)?;
        }
    }
    Ok(guide)
}

/// Cursor walk on `axis`: children end to end with `spacing` between them,
/// anchored at the first fixed child. Returns each child's start.
pub(crate) fn walk_on(
    cx: &mut LayoutCx<'_>,
    slots: &[NodeId],
    axis: Axis,
    spacing: f64,
) -> Result<Vec<f64>, LayoutError> {
    let mut ext = Vec::with_capacity(slots.len());
    for &s in slots {
        ext.push(cx.extent(s, axis)?);
    }
    let mut anchor = None;
    for (i, &s) in slots.iter().enumerate() {
        if cx.is_fixed(s, axis)? {
            let start = cx.read(s, axis)?.start.expect("sized");
            anchor = Some((i, start));
            break;
        }
    }
    let (k, origin) = anchor.unwrap_or((0, 0.0));
    let mut starts = vec![0.0; slots.len()];
    starts[k] = origin;
    for i in (0..k).rev() {
        starts[i] = starts[i + 1] - spacing - ext[i];
    }
    for i in k + 1..slots.len() {
        starts[i] = starts[i - 1] + ext[i - 1] + spacing;
    }
    let anchor_slot = anchor.map(|_| slots[k]);
    for (i, &s) in slots.iter().enumerate() {
        if Some(s) == anchor_slot && i == k {
            continue;
        }
        if cx.is_fixed(s, axis)? {
            let found = cx.read(s, axis)?.start.expect("sized");
            check_agrees(cx, anchor_slot, s, axis, starts[i], found)?;
        } else {
            cx.place(s, axis.start(), starts[i])?;
        }
    }
    Ok(starts)
}

fn check_agrees(
    cx: &LayoutCx<'_>,
    anchor: Option<NodeId>,
    slot: NodeId,
    axis: Axis,
    expected: f64,
    found: f64,
) -> Result<(), LayoutError> {
    if (expected - found).abs() <= TOLERANCE {
        return Ok(());
    }
    let anchor = match anchor {
        Some(a) => Some((cx.target(a)?, cx.placement_owner(a, axis)?)),
        None => None,
    };
    Err(LayoutError::Disagreement {
        relation: cx.id(),
        axis,
        expected,
        found,
        anchor,
        other: cx.target(slot)?,
        other_owner: cx.placement_owner(slot, axis)?,
    })
}

/// Union of the children's spans on `axis`, read in this node's frame.
pub(crate) fn union_on(cx: &mut LayoutCx<'_>, slots: &[NodeId], axis: Axis) -> Result<Option<(f64, f64)>, LayoutError> {
    let mut out: Option<(f64, f64)> = None;
    for &s in slots {
        let span = cx.read(s, axis)?;
        let (a, b) = (span.start.expect("sized"), span.end.expect("sized"));
        out = Some(match out {
            None => (a, b),
            Some((lo, hi)) => (lo.min(a), hi.max(b)),
        });
    }
    Ok(out)
}

/// Per-axis roles named by an alignment value.
pub fn alignment_roles(value: &str) -> Option<(Option<Role>, Option<Role>)> {
    use Role::*;
    Some(match value {
        "left" => (Some(Start), None),
        "centerX" => (Some(Center), None),
        "right" => (Some(End), None),
        "top" => (None, Some(Start)),
        "centerY" => (None, Some(Center)),
        "bottom" => (None, Some(End)),
        "topLeft" => (Some(Start), Some(Start)),
        "topCenter" => (Some(Center), Some(Start)),
        "topRight" => (Some(End), Some(Start)),
        "centerLeft" => (Some(Start), Some(Center)),
        "center" => (Some(Center), Some(Center)),
        "centerRight" => (Some(End), Some(Center)),
        "bottomLeft" => (Some(Start), Some(End)),
        "bottomCenter" => (Some(Center), Some(End)),
        "bottomRight" => (Some(End), Some(End)),
        _ => return None,
    })
}

pub const ALIGNMENTS: [&str; 15] = [
    "left",
    "centerX",
    "right",
    "top",
    "centerY",
    "bottom",
    "topLeft",
    "topCenter",
    "topRight",
    "centerLeft",
    "center",
    "centerRight",
    "bottomLeft",
    "bottomCenter",
    "bottomRight",
];

fn stroke_props(stroke: Option<&str>, width: f64) -> Vec<PropSpec> {
    vec![
        match stroke {
            Some(s) => PropSpec::with_default("stroke", PropType::Str, s),
            None => PropSpec::optional("stroke", PropType::Str),
        },
        PropSpec::with_default("strokeWidth", PropType::NonNegative, width),
    ]
}

/// Specs for every built-in kind.
pub fn standard_kinds() -> Vec<ElementKindSpec> {
    use PropType::*;
    let mut out = Vec::new();

    let mut rect = vec![
        PropSpec::required("width", NonNegative),
        PropSpec::required("height", NonNegative),
        PropSpec::with_default("fill", Str, "black"),
        PropSpec::with_default("rx", NonNegative, 0.0),
    ];
    rect.extend(stroke_props(None, 1.0));
    out.push(ElementKindSpec::primitive(
        "rect",
        KindSchema::leaf(rect),
        Mark(MarkKind::Rect),
    ));

    let mut circle = vec![
        PropSpec::required("r", NonNegative),
        PropSpec::with_default("fill", Str, "black"),
    ];
    circle.extend(stroke_props(None, 1.0));
    out.push(ElementKindSpec::primitive(
        "circle",
        KindSchema::leaf(circle),
        Mark(MarkKind::Circle),
    ));

    let mut ellipse = vec![
        PropSpec::required("rx", NonNegative),
        PropSpec::required("ry", NonNegative),
        PropSpec::with_default("fill", Str, "black"),
    ];
    ellipse.extend(stroke_props(None, 1.0));
    out.push(ElementKindSpec::primitive(
        "ellipse",
        KindSchema::leaf(ellipse),
        Mark(MarkKind::Ellipse),
    ));

    let mut path = vec![
        PropSpec::required("d", Str),
        PropSpec::with_default("fill", Str, "none"),
        PropSpec::optional("strokeDasharray", NumberOrStr),
    ];
    path.extend(stroke_props(Some("black"), 1.0));
    out.push(ElementKindSpec::primitive(
        "path",
        KindSchema::leaf(path),
        Mark(MarkKind::Path),
    ));

    let text = vec![
        PropSpec::required("content", Str),
        PropSpec::with_default("fontSize", Positive, 16.0),
        PropSpec::with_default("fontFamily", Str, "sans-serif"),
        PropSpec::with_default("fill", Str, "black"),
    ];
    out.push(ElementKindSpec::primitive(
        "text",
        KindSchema::leaf(text),
        Mark(MarkKind::Text),
    ));

    out.push(ElementKindSpec::primitive("group", KindSchema::new(vec![]), Group));

    for (kind, axis, values, default) in [
        ("stackV", Axis::Vertical, ["left", "centerX", "right"], "centerX"),
        ("stackH", Axis::Horizontal, ["top", "centerY", "bottom"], "centerY"),
    ] {
        let schema = KindSchema::new(vec![
            PropSpec::with_default("spacing", Number, 0.0),
            PropSpec::with_default("alignment", PropType::enumeration(&values), default),
        ])
        .children(1, None);
        out.push(ElementKindSpec::primitive(kind, schema, Stack { main: axis }));
    }

    let align = KindSchema::new(vec![PropSpec::required(
        "alignment",
        PropType::enumeration(&ALIGNMENTS),
    )])
    .children(1, None);
    out.push(ElementKindSpec::primitive("align", align, Align));

    let distribute = KindSchema::new(vec![
        PropSpec::required("direction", PropType::enumeration(&["vertical", "horizontal"])),
        PropSpec::required("spacing", Number),
    ])
    .children(2, None);
    out.push(ElementKindSpec::primitive("distribute", distribute, Distribute));

    let background = KindSchema::new(vec![
        PropSpec::with_default("padding", NonNegative, 10.0),
        PropSpec::optional("background", Element(vec!["rect".into(), "ellipse".into()])),
    ])
    .children(1, None);
    out.push(ElementKindSpec::primitive("background", background, Background));

    let mut arrow = vec![PropSpec::with_default("gap", NonNegative, 5.0)];
    arrow.extend(stroke_props(Some("black"), 1.5));
    out.push(ElementKindSpec::primitive(
        "arrow",
        KindSchema::new(arrow).children(2, Some(2)),
        Connector(ConnectorKind::Arrow),
    ));

    let mut line = vec![
        PropSpec::with_default("gap", NonNegative, 0.0),
        PropSpec::optional("strokeDasharray", NumberOrStr),
    ];
    line.extend(stroke_props(Some("black"), 1.0));
    out.push(ElementKindSpec::primitive(
        "line",
        KindSchema::new(line).children(2, Some(2)),
        Connector(ConnectorKind::Line),
    ));
    out
}
