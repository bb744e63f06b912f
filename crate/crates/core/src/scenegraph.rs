//! Compound scenegraph: a layout tree plus adjacency edges from ref leaves.
//!
//! Every layout node keeps its bounding box in its own local frame and a
//! translation into its parent's frame. Reads and writes between nodes that
//! are not in a direct parent/child relationship walk the tree through the
//! least common ancestor; translation components that are still undefined on
//! that walk are fixed to zero on first use and owned by the requester.

use thiserror::Error;

use crate::geometry::{
    Axis, AxisSpan, BBoxOwners, Dim, Field, GeometryError, NodeId, PartialBBox, Role, TransformOwners, Translate,
    TOLERANCE,
};
use crate::props::Props;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("parent {0} does not exist or is not a layout node")]
    UnknownParent(NodeId),
    #[error("node {0} does not exist")]
    UnknownNode(NodeId),
    #[error("{0} is a ref node; a layout node is required")]
    NotLayout(NodeId),
    #[error("ref under {parent} selects its own ancestor {referent}")]
    SelfReference { parent: NodeId, referent: NodeId },
    #[error("ref under {parent} selects another ref {referent}")]
    RefToRef { parent: NodeId, referent: NodeId },
    #[error("{node} and {other} share no ancestor")]
    DisconnectedNodes { node: NodeId, other: NodeId },
    #[error("{node} has no known {axis:?} extent")]
    UndefinedExtent { node: NodeId, axis: Axis },
    #[error("{node} has no derivable size after layout")]
    UnsizedNode { node: NodeId },
    #[error("{source} (on {node})")]
    Geometry {
        node: NodeId,
        #[source]
        source: GeometryError,
    },
}

impl GraphError {
    fn geometry(node: NodeId) -> impl FnOnce(GeometryError) -> GraphError {
        move |source| GraphError::Geometry { node, source }
    }
}

/// Data computed during layout for paint, e.g. clipped connector endpoints.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum PaintData {
    #[default]
    None,
    Segment {
        from: (f64, f64),
        to: (f64, f64),
    },
    Degenerate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutNode {
    pub id: NodeId,
    pub kind: String,
    pub bbox: PartialBBox,
    pub bbox_owners: BBoxOwners,
    pub transform: Translate,
    pub transform_owners: TransformOwners,
    pub children: Vec<NodeId>,
    pub parent: Option<NodeId>,
    pub props: Props,
    pub paint: PaintData,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefNode {
    pub id: NodeId,
    pub ref_id: NodeId,
    pub parent: NodeId,
}

/// Layout nodes dominate every graph, so boxing them would only add an
/// indirection to the common case.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Layout(LayoutNode),
    Ref(RefNode),
}

impl Node {
    pub fn id(&self) -> NodeId {
        match self {
            Node::Layout(n) => n.id,
            Node::Ref(r) => r.id,
        }
    }

    pub fn parent(&self) -> Option<NodeId> {
        match self {
            Node::Layout(n) => n.parent,
            Node::Ref(r) => Some(r.parent),
        }
    }

    pub fn as_layout(&self) -> Option<&LayoutNode> {
        match self {
            Node::Layout(n) => Some(n),
            Node::Ref(_) => None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Scenegraph {
    nodes: Vec<Node>,
    depth: Vec<usize>,
    root: Option<NodeId>,
}

impl Scenegraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(id.0)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter()
    }

    pub fn layout(&self, id: NodeId) -> Result<&LayoutNode, GraphError> {
        match self.nodes.get(id.0) {
            Some(Node::Layout(n)) => Ok(n),
            Some(Node::Ref(_)) => Err(GraphError::NotLayout(id)),
            None => Err(GraphError::UnknownNode(id)),
        }
    }

    fn layout_mut(&mut self, id: NodeId) -> Result<&mut LayoutNode, GraphError> {
        match self.nodes.get_mut(id.0) {
            Some(Node::Layout(n)) => Ok(n),
            Some(Node::Ref(_)) => Err(GraphError::NotLayout(id)),
            None => Err(GraphError::UnknownNode(id)),
        }
    }

    /// Layout node a child slot stands for: the referent for refs, the node
    /// itself otherwise.
    pub fn target(&self, id: NodeId) -> Result<NodeId, GraphError> {
        match self.nodes.get(id.0) {
            Some(Node::Layout(n)) => Ok(n.id),
            Some(Node::Ref(r)) => Ok(r.ref_id),
            None => Err(GraphError::UnknownNode(id)),
        }
    }

    pub fn create_node(
        &mut self,
        kind: impl Into<String>,
        parent: Option<NodeId>,
        props: Props,
    ) -> Result<NodeId, GraphError> {
        let id = NodeId(self.nodes.len());
        let depth = match parent {
            Some(p) => {
                self.layout(p).map_err(|_| GraphError::UnknownParent(p))?;
                self.depth[p.0] + 1
            }
            None => {
                // a second parentless node would break the single-root tree
                if self.root.is_some() {
                    return Err(GraphError::UnknownParent(id));
                }
                self.root = Some(id);
                0
            }
        };
        self.nodes.push(Node::Layout(LayoutNode {
            id,
            kind: kind.into(),
            bbox: PartialBBox::new(),
            bbox_owners: BBoxOwners::default(),
            transform: Translate::default(),
            transform_owners: TransformOwners::default(),
            children: Vec::new(),
            parent,
            props,
            paint: PaintData::None,
        }));
        self.depth.push(depth);
        if let Some(p) = parent {
            self.layout_mut(p)?.children.push(id);
        }
        Ok(id)
    }

    pub fn create_ref(&mut self, parent: NodeId, referent: NodeId) -> Result<NodeId, GraphError> {
        self.layout(parent).map_err(|_| GraphError::UnknownParent(parent))?;
        match self.nodes.get(referent.0) {
            None => return Err(GraphError::UnknownNode(referent)),
            Some(Node::Ref(_)) => return Err(GraphError::RefToRef { parent, referent }),
            Some(Node::Layout(_)) => {}
        }
        if self.is_ancestor_or_self(referent, parent) {
            return Err(GraphError::SelfReference { parent, referent });
        }
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node::Ref(RefNode {
            id,
            ref_id: referent,
            parent,
        }));
        self.depth.push(self.depth[parent.0] + 1);
        self.layout_mut(parent)?.children.push(id);
        Ok(id)
    }

    /// Whether `ancestor` lies on the parent chain of `node` (inclusive).
    pub fn is_ancestor_or_self(&self, ancestor: NodeId, node: NodeId) -> bool {
        let mut cur = Some(node);
        while let Some(c) = cur {
            if c == ancestor {
                return true;
            }
            cur = self.nodes.get(c.0).and_then(Node::parent);
        }
        false
    }

    pub fn lca(&self, a: NodeId, b: NodeId) -> Result<NodeId, GraphError> {
        let disconnected = || GraphError::DisconnectedNodes { node: a, other: b };
        let parent = |n: NodeId| self.nodes[n.0].parent();
        if a.0 >= self.nodes.len() {
            return Err(GraphError::UnknownNode(a));
        }
        if b.0 >= self.nodes.len() {
            return Err(GraphError::UnknownNode(b));
        }
        let (mut a, mut b) = (a, b);
        while self.depth[a.0] > self.depth[b.0] {
            a = parent(a).ok_or_else(disconnected)?;
        }
        while self.depth[b.0] > self.depth[a.0] {
            b = parent(b).ok_or_else(disconnected)?;
        }
        while a != b {
            a = parent(a).ok_or_else(disconnected)?;
            b = parent(b).ok_or_else(disconnected)?;
        }
        Ok(a)
    }

    /// Nodes from `from` up to, but excluding, `ancestor`.
    fn chain_to(&self, from: NodeId, ancestor: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut cur = from;
        while cur != ancestor {
            out.push(cur);
            match self.nodes[cur.0].parent() {
                Some(p) => cur = p,
                None => break,
            }
        }
        out
    }

    fn materialize(&mut self, id: NodeId, axis: Axis, requester: NodeId) -> Result<(), GraphError> {
        let node = self.layout_mut(id)?;
        let slot = node.transform.slot(axis);
        if slot.is_none() {
            *slot = Some(0.0);
            node.transform_owners.set(axis, requester);
        }
        Ok(())
    }

    /// Offset that maps coordinates in `from`'s parent-side chain into
    /// `frame`, materializing every undefined translate on the way.
    ///
    /// `chain` is the list of nodes whose translates are added (walking up
    /// from the target side); the frame side is subtracted.
    fn path_offset(
        &mut self,
        target_side: &[NodeId],
        frame_side: &[NodeId],
        axis: Axis,
        requester: NodeId,
    ) -> Result<f64, GraphError> {
        let mut offset = 0.0;
        for &n in target_side {
            self.materialize(n, axis, requester)?;
            offset += self.layout(n)?.transform.get(axis).unwrap_or(0.0);
        }
        for &n in frame_side {
            self.materialize(n, axis, requester)?;
            offset -= self.layout(n)?.transform.get(axis).unwrap_or(0.0);
        }
        Ok(offset)
    }

    /// The target's derivable fields on `axis`, expressed in `frame`.
    ///
    /// Translates between the target (inclusive) and the common ancestor,
    /// and between the frame (inclusive) and the common ancestor, are
    /// materialized as needed.
    pub fn bbox_in_frame(
        &mut self,
        target: NodeId,
        frame: NodeId,
        axis: Axis,
        requester: NodeId,
    ) -> Result<AxisSpan, GraphError> {
        self.layout(frame)?;
        let local = self
            .layout(target)?
            .bbox
            .span(axis)
            .map_err(GraphError::geometry(target))?;
        if target == frame {
            return Ok(local);
        }
        let lca = self.lca(target, frame)?;
        let up = self.chain_to(target, lca);
        let down = self.chain_to(frame, lca);
        let offset = self.path_offset(&up, &down, axis, requester)?;
        Ok(local.shifted(offset))
    }

    /// Write `field` of `target` so that it takes `value` in `frame`.
    ///
    /// Positions are written through the target's translation when the
    /// target already knows its local position on that axis, otherwise into
    /// its local bbox. Extents always go to the bbox.
    pub fn set_dim_in_frame(
        &mut self,
        target: NodeId,
        frame: NodeId,
        field: Dim,
        value: f64,
        writer: NodeId,
    ) -> Result<(), GraphError> {
        self.layout(frame)?;
        if field.is_extent() {
            return self.set_bbox(target, field, value, writer);
        }
        let axis = field.axis();
        if target == frame {
            return self.set_bbox(target, field, value, writer);
        }
        let lca = self.lca(target, frame)?;
        let parent = match self.layout(target)?.parent {
            Some(p) => p,
            // only a root addressed from inside its own subtree gets here
            None => {
                let down = self.chain_to(frame, lca);
                let offset = self.path_offset(&[], &down, axis, writer)?;
                return self.set_bbox(target, field, value - offset, writer);
            }
        };
        let up = self.chain_to(parent, lca);
        let down = self.chain_to(frame, lca);
        let offset = self.path_offset(&up, &down, axis, writer)?;
        let in_parent = value - offset;

        let node = self.layout(target)?;
        let span = node.bbox.span(axis).map_err(GraphError::geometry(target))?;
        if node.bbox.has_position(axis) {
            let local = span
                .get(field.role())
                .ok_or(GraphError::UndefinedExtent { node: target, axis })?;
            self.set_translate(target, axis, in_parent - local, writer)
        } else {
            self.materialize(target, axis, writer)?;
            let t = self.layout(target)?.transform.get(axis).unwrap_or(0.0);
            self.set_bbox(target, field, in_parent - t, writer)
        }
    }

    pub fn set_bbox(&mut self, id: NodeId, dim: Dim, value: f64, writer: NodeId) -> Result<(), GraphError> {
        let node = self.layout_mut(id)?;
        node.bbox
            .set(&mut node.bbox_owners, dim, value, writer)
            .map_err(GraphError::geometry(id))
    }

    /// Ownership-checked write of one translate component.
    pub fn set_translate(&mut self, id: NodeId, axis: Axis, value: f64, writer: NodeId) -> Result<(), GraphError> {
        let node = self.layout_mut(id)?;
        if !value.is_finite() {
            return Err(GraphError::Geometry {
                node: id,
                source: GeometryError::NonFinite {
                    field: Field::Translate(axis),
                    value,
                },
            });
        }
        match (node.transform.get(axis), node.transform_owners.get(axis)) {
            (Some(existing), Some(owner)) => {
                if owner == writer && (existing - value).abs() <= TOLERANCE {
                    Ok(())
                } else {
                    Err(GraphError::Geometry {
                        node: id,
                        source: GeometryError::DimensionConflict {
                            field: Field::Translate(axis),
                            existing_owner: owner,
                            writer,
                        },
                    })
                }
            }
            _ => {
                *node.transform.slot(axis) = Some(value);
                node.transform_owners.set(axis, writer);
                Ok(())
            }
        }
    }

    pub fn set_paint(&mut self, id: NodeId, paint: PaintData) -> Result<(), GraphError> {
        self.layout_mut(id)?.paint = paint;
        Ok(())
    }

    /// Default every undefined translate to zero and check every layout node
    /// is fully sized. A node that knows its extent but not its local
    /// position on an axis is placed at local zero.
    pub fn finalize(&mut self) -> Result<(), GraphError> {
        let Some(root) = self.root else {
            return Ok(());
        };
        for i in 0..self.nodes.len() {
            let id = NodeId(i);
            if !matches!(self.nodes[i], Node::Layout(_)) {
                continue;
            }
            for axis in Axis::BOTH {
                self.materialize(id, axis, root)?;
                let node = self.layout(id)?;
                let span = node.bbox.span(axis).map_err(GraphError::geometry(id))?;
                if span.extent.is_none() {
                    return Err(GraphError::UnsizedNode { node: id });
                }
                if span.start.is_none() {
                    self.set_bbox(id, axis.dim(Role::Start), 0.0, root)?;
                }
            }
        }
        Ok(())
    }

    /// Sum of translates from `id` up to the root, inclusive. Only
    /// meaningful after [`Scenegraph::finalize`].
    pub fn absolute_offset(&self, id: NodeId) -> (f64, f64) {
        let mut off = (0.0, 0.0);
        let mut cur = Some(id);
        while let Some(c) = cur {
            if let Node::Layout(n) = &self.nodes[c.0] {
                off.0 += n.transform.x.unwrap_or(0.0);
                off.1 += n.transform.y.unwrap_or(0.0);
            }
            cur = self.nodes[c.0].parent();
        }
        off
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Dim::*;
    use proptest::prelude::*;

    fn empty() -> Props {
        Props::default()
    }

    /// Group[a, b, stackV[ref a, ref b]] with a = 10x20 and b = 30x10.
    fn two_rects_under_ref_stack() -> (Scenegraph, [NodeId; 4]) {
        let mut g = Scenegraph::new();
        let root = g.create_node("group", None, empty()).unwrap();
        let a = g.create_node("rect", Some(root), empty()).unwrap();
        let b = g.create_node("rect", Some(root), empty()).unwrap();
        let stack = g.create_node("stackV", Some(root), empty()).unwrap();
        g.create_ref(stack, a).unwrap();
        g.create_ref(stack, b).unwrap();
        for (n, w, h) in [(a, 10.0, 20.0), (b, 30.0, 10.0)] {
            g.set_bbox(n, Left, 0.0, n).unwrap();
            g.set_bbox(n, Top, 0.0, n).unwrap();
            g.set_bbox(n, Width, w, n).unwrap();
            g.set_bbox(n, Height, h, n).unwrap();
        }
        (g, [root, a, b, stack])
    }

    #[test]
    fn create_node_appends_in_call_order() {
        let mut g = Scenegraph::new();
        let root = g.create_node("group", None, empty()).unwrap();
        assert_eq!(g.layout(root).unwrap().parent, None);
        let r1 = g.create_node("rect", Some(root), empty()).unwrap();
        let r2 = g.create_node("rect", Some(root), empty()).unwrap();
        assert_eq!(g.layout(root).unwrap().children, vec![r1, r2]);
        assert_eq!(g.layout(r1).unwrap().transform, Translate::default());
    }

    #[test]
    fn create_node_rejects_unknown_parent() {
        let mut g = Scenegraph::new();
        assert_eq!(
            g.create_node("rect", Some(NodeId(4)), empty()),
            Err(GraphError::UnknownParent(NodeId(4)))
        );
    }

    #[test]
    fn refs_are_checked_at_creation() {
        let mut g = Scenegraph::new();
        let root = g.create_node("group", None, empty()).unwrap();
        let mid = g.create_node("stackV", Some(root), empty()).unwrap();
        let leaf = g.create_node("align", Some(mid), empty()).unwrap();
        let r = g.create_ref(leaf, NodeId(0));
        assert_eq!(
            r,
            Err(GraphError::SelfReference {
                parent: leaf,
                referent: root
            })
        );
        let other = g.create_node("rect", Some(root), empty()).unwrap();
        let ok = g.create_ref(leaf, other).unwrap();
        assert!(matches!(g.node(ok), Some(Node::Ref(_))));
        assert_eq!(g.layout(leaf).unwrap().children, vec![ok]);
        assert_eq!(
            g.create_ref(mid, ok),
            Err(GraphError::RefToRef {
                parent: mid,
                referent: ok
            })
        );
    }

    #[test]
    fn lca_examples() {
        let (g, [root, a, b, stack]) = two_rects_under_ref_stack();
        assert_eq!(g.lca(a, a).unwrap(), a);
        assert_eq!(g.lca(a, stack).unwrap(), root);
        assert_eq!(g.lca(NodeId(4), b).unwrap(), root);
        assert_eq!(g.lca(NodeId(4), stack).unwrap(), stack);
    }

    #[test]
    fn reading_in_own_frame_materializes_nothing() {
        let (mut g, [_, a, _, _]) = two_rects_under_ref_stack();
        let span = g.bbox_in_frame(a, a, Axis::Horizontal, a).unwrap();
        assert_eq!(span.start, Some(0.0));
        assert_eq!(g.layout(a).unwrap().transform, Translate::default());
    }

    #[test]
    fn reading_through_translate_composes() {
        let mut g = Scenegraph::new();
        let root = g.create_node("group", None, empty()).unwrap();
        let t = g.create_node("rect", Some(root), empty()).unwrap();
        g.set_bbox(t, Left, 2.0, t).unwrap();
        g.set_translate(t, Axis::Horizontal, 3.0, root).unwrap();
        let span = g.bbox_in_frame(t, root, Axis::Horizontal, root).unwrap();
        assert_eq!(span.start, Some(5.0));
    }

    #[test]
    fn stack_over_refs_materialization_trace() {
        let (mut g, [_, a, b, stack]) = two_rects_under_ref_stack();
        // step 2-3: stackV sets a's x; its own x is materialized to identity
        g.set_dim_in_frame(a, stack, CenterX, 0.0, stack).unwrap();
        let s = g.layout(stack).unwrap();
        assert_eq!(s.transform.x, Some(0.0));
        assert_eq!(s.transform_owners.get(Axis::Horizontal), Some(stack));
        assert_eq!(s.transform.y, None);
        assert_eq!(g.layout(a).unwrap().transform.x, Some(-5.0));
        // step 4
        g.set_dim_in_frame(b, stack, CenterX, 0.0, stack).unwrap();
        assert_eq!(g.layout(b).unwrap().transform.x, Some(-15.0));
        assert_eq!(g.layout(stack).unwrap().transform.y, None);
        // step 5
        g.set_dim_in_frame(a, stack, Top, 0.0, stack).unwrap();
        g.set_dim_in_frame(b, stack, Top, 50.0, stack).unwrap();
        assert_eq!(g.layout(stack).unwrap().transform.y, Some(0.0));
        assert_eq!(g.layout(a).unwrap().transform.y, Some(0.0));
        assert_eq!(g.layout(b).unwrap().transform.y, Some(50.0));
    }

    #[test]
    fn second_writer_conflicts_naming_both() {
        let (mut g, [root, a, _, stack]) = two_rects_under_ref_stack();
        g.set_dim_in_frame(a, stack, CenterX, 0.0, stack).unwrap();
        let other = g.create_node("align", Some(root), empty()).unwrap();
        let err = g.set_dim_in_frame(a, other, Left, 7.0, other).unwrap_err();
        assert_eq!(
            err,
            GraphError::Geometry {
                node: a,
                source: GeometryError::DimensionConflict {
                    field: Field::Translate(Axis::Horizontal),
                    existing_owner: stack,
                    writer: other
                }
            }
        );
    }

    #[test]
    fn center_write_needs_extent() {
        let mut g = Scenegraph::new();
        let root = g.create_node("group", None, empty()).unwrap();
        let t = g.create_node("rect", Some(root), empty()).unwrap();
        g.set_bbox(t, Left, 0.0, t).unwrap();
        assert_eq!(
            g.set_dim_in_frame(t, root, CenterX, 1.0, root),
            Err(GraphError::UndefinedExtent {
                node: t,
                axis: Axis::Horizontal
            })
        );
    }

    #[test]
    fn write_without_local_position_goes_to_bbox() {
        let mut g = Scenegraph::new();
        let root = g.create_node("group", None, empty()).unwrap();
        let t = g.create_node("group", Some(root), empty()).unwrap();
        g.set_dim_in_frame(t, root, Top, 4.0, root).unwrap();
        let n = g.layout(t).unwrap();
        assert_eq!(n.bbox.stored(Top), Some(4.0));
        assert_eq!(n.transform.y, Some(0.0));
    }

    #[test]
    fn finalize_defaults_and_checks_sizes() {
        let mut g = Scenegraph::new();
        let root = g.create_node("group", None, empty()).unwrap();
        let r = g.create_node("rect", Some(root), empty()).unwrap();
        for n in [root, r] {
            g.set_bbox(n, Width, 1.0, n).unwrap();
            g.set_bbox(n, Height, 1.0, n).unwrap();
        }
        g.finalize().unwrap();
        assert_eq!(g.layout(r).unwrap().transform, Translate::new(0.0, 0.0));
        assert_eq!(g.layout(r).unwrap().transform_owners.get(Axis::Vertical), Some(root));

        let mut g = Scenegraph::new();
        let root = g.create_node("group", None, empty()).unwrap();
        assert_eq!(g.finalize(), Err(GraphError::UnsizedNode { node: root }));
    }

    /// Random chain of nested groups with random reads and writes.
    fn chain(depth: usize) -> (Scenegraph, Vec<NodeId>) {
        let mut g = Scenegraph::new();
        let mut ids = vec![g.create_node("group", None, empty()).unwrap()];
        for _ in 0..depth {
            let p = *ids.last().unwrap();
            let n = g.create_node("group", Some(p), empty()).unwrap();
            g.set_bbox(n, Left, 0.0, n).unwrap();
            g.set_bbox(n, Top, 0.0, n).unwrap();
            ids.push(n);
        }
        (g, ids)
    }

    proptest! {
        #[test]
        fn defined_translates_never_change(
            depth in 2usize..7,
            ops in proptest::collection::vec((any::<bool>(), 0usize..7, 0usize..7, -20i32..20, any::<bool>()), 1..30)
        ) {
            let (mut g, ids) = chain(depth);
            let mut seen: Vec<[Option<f64>; 2]> = vec![[None, None]; ids.len()];
            for (write, t, f, v, vertical) in ops {
                let axis = if vertical { Axis::Vertical } else { Axis::Horizontal };
                let (t, f) = (ids[t % ids.len()], ids[f % ids.len()]);
                if write {
                    let _ = g.set_dim_in_frame(t, f, axis.start(), v as f64, f);
                } else {
                    let _ = g.bbox_in_frame(t, f, axis, f);
                }
                for (i, id) in ids.iter().enumerate() {
                    let tr = g.layout(*id).unwrap().transform;
                    for (k, ax) in Axis::BOTH.into_iter().enumerate() {
                        if let Some(old) = seen[i][k] {
                            prop_assert_eq!(tr.get(ax), Some(old));
                        }
                        seen[i][k] = tr.get(ax);
                    }
                }
            }
        }

        #[test]
        fn frames_are_coherent(
            depth in 3usize..8,
            offsets in proptest::collection::vec(-100i32..100, 8),
            pick in (0usize..8, 0usize..8),
        ) {
            let (mut g, ids) = chain(depth);
            for (i, id) in ids.iter().enumerate().skip(1) {
                g.set_translate(*id, Axis::Horizontal, offsets[i] as f64, ids[0]).unwrap();
            }
            let target = ids[ids.len() - 1];
            let (a, b) = (pick.0 % ids.len(), pick.1 % ids.len());
            let (inner, outer) = (ids[a.max(b)], ids[a.min(b)]);
            let in_inner = g.bbox_in_frame(target, inner, Axis::Horizontal, inner).unwrap().start.unwrap();
            let in_outer = g.bbox_in_frame(target, outer, Axis::Horizontal, outer).unwrap().start.unwrap();
            // translation from the inner frame to the outer frame
            let between: f64 = (a.min(b) + 1..=a.max(b)).map(|i| offsets[i] as f64).sum();
            prop_assert_eq!(in_outer, in_inner + between);
        }
    }
}
