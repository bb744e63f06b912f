//! The compile pipeline: parse, expand composites, validate, resolve names,
//! build the scenegraph, lay it out in one pass and resolve the scene.

use crate::diagnostics::{Code, Diagnostic};
use crate::docformat::{self, Document, Element, Flat, NameTable};
use crate::geometry::{Axis, Field, GeometryError, NodeId};
use crate::props::Props;
use crate::registry::{KindBody, Registry};
use crate::relations::{ensure_sized, LayoutCx, LayoutError, LayoutWarning};
use crate::renderer::{fmt_num, Rect, ResolvedNode, ResolvedScene};
use crate::scenegraph::{GraphError, Node, Scenegraph};

pub use crate::registry::{ElementKindSpec, RegistryError};

/// Composite expansions nested deeper than this are treated as runaway.
pub const MAX_EXPANSION_DEPTH: usize = 64;

/// Result of a successful compile.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub scene: ResolvedScene,
    pub warnings: Vec<Diagnostic>,
    /// How many times each node's layout function ran, indexed by node id.
    /// Ref nodes have no layout function and stay at zero.
    pub layout_calls: Vec<u32>,
}

/// A scenegraph together with the document metadata diagnostics need.
#[derive(Debug, Clone)]
pub struct Built {
    pub graph: Scenegraph,
    pub paths: Vec<String>,
    pub names: Vec<Option<String>>,
}

impl Built {
    fn path(&self, id: NodeId) -> String {
        self.paths.get(id.0).cloned().unwrap_or_else(|| id.to_string())
    }
}

/// Parse and compile document bytes.
pub fn compile(bytes: &[u8], registry: &Registry) -> Result<Compiled, Vec<Diagnostic>> {
    let doc = docformat::parse_document(bytes).map_err(|e| vec![e.to_diagnostic()])?;
    compile_document(&doc, registry)
}

pub fn compile_document(doc: &Document, registry: &Registry) -> Result<Compiled, Vec<Diagnostic>> {
    let diags = docformat::validate(doc, registry);
    if !diags.is_empty() {
        return Err(diags);
    }
    let expanded = expand_composites(doc, registry)?;
    let doc = match &expanded {
        Some(d) => {
            let diags = docformat::validate(d, registry);
            if !diags.is_empty() {
                return Err(diags);
            }
            d
        }
        None => doc,
    };
    let names = docformat::resolve_names(doc)?;
    let built = build_scenegraph(doc, &names, registry)?;
    layout_document(built, registry)
}

/// Replace every composite element by its expansion. Returns `None` when
/// the document contains no composites.
pub fn expand_composites(doc: &Document, registry: &Registry) -> Result<Option<Document>, Vec<Diagnostic>> {
    fn has_composite(e: &Element, registry: &Registry) -> bool {
        matches!(registry.get(&e.kind).map(|s| &s.body), Some(KindBody::Composite(_)))
            || e.children.iter().any(|c| has_composite(c, registry))
    }
    fn expand(e: &Element, registry: &Registry, path: &str, depth: usize) -> Result<Element, Diagnostic> {
        if let Some(KindBody::Composite(f)) = registry.get(&e.kind).map(|s| &s.body) {
            if depth >= MAX_EXPANSION_DEPTH {
                return Err(Diagnostic::error(
                    Code::SchemaError,
                    format!(
                        "expansion of `{}` nests more than {MAX_EXPANSION_DEPTH} composites",
                        e.kind
                    ),
                    vec![path.to_owned()],
                ));
            }
            let mut out = f(e);
            if out.name.is_none() {
                out.name = e.name.clone();
            }
            return expand(&out, registry, path, depth + 1);
        }
        let mut out = e.clone();
        out.children = e
            .children
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let p = format!("{path}/{}", docformat::segment(&c.kind, i, c.name.as_deref()));
                expand(c, registry, &p, depth)
            })
            .collect::<Result<_, _>>()?;
        Ok(out)
    }
    if !has_composite(&doc.root, registry) {
        return Ok(None);
    }
    let root_path = docformat::segment(&doc.root.kind, 0, doc.root.name.as_deref());
    let root = expand(&doc.root, registry, &root_path, 0).map_err(|d| vec![d])?;
    Ok(Some(Document { root }))
}

/// Props with every schema default filled in.
fn with_defaults(e: &Element, registry: &Registry) -> Props {
    let mut props = e.props.clone();
    if let Some(spec) = registry.get(&e.kind) {
        for p in &spec.schema.props {
            if props.get(&p.name).is_none() {
                if let Some(d) = &p.default {
                    props.insert(p.name.clone(), d.clone());
                }
            }
        }
    }
    props
}

/// One layout node per element and one ref node per ref; node ids are the
/// elements' document-order positions.
pub fn build_scenegraph(doc: &Document, names: &NameTable, registry: &Registry) -> Result<Built, Vec<Diagnostic>> {
    let flat = Flat::new(&doc.root);
    let mut graph = Scenegraph::new();
    let paths = flat.paths.clone();
    for (i, e) in flat.elems.iter().enumerate() {
        let parent = flat.parent[i].map(NodeId);
        let created = if e.is_ref() {
            let Some(parent) = parent else {
                return Err(vec![Diagnostic::error(
                    Code::SchemaError,
                    "the document root cannot be a ref",
                    vec![paths[i].clone()],
                )]);
            };
            let Some(&referent) = names.refs.get(&i) else {
                return Err(vec![Diagnostic::error(
                    Code::UnresolvedName,
                    "ref was not resolved",
                    vec![paths[i].clone()],
                )]);
            };
            graph.create_ref(parent, NodeId(referent)).map_err(|err| match err {
                GraphError::SelfReference { .. } => Diagnostic::error(
                    Code::SelfReference,
                    "a ref cannot select an element that contains it",
                    vec![paths[i].clone(), paths[referent].clone()],
                ),
                GraphError::RefToRef { .. } => Diagnostic::error(
                    Code::RefToRef,
                    "a ref cannot select another ref",
                    vec![paths[i].clone(), paths[referent].clone()],
                ),
                other => Diagnostic::error(Code::Internal, other.to_string(), vec![paths[i].clone()]),
            })
        } else {
            graph
                .create_node(e.kind.clone(), parent, with_defaults(e, registry))
                .map_err(|err| Diagnostic::error(Code::Internal, err.to_string(), vec![paths[i].clone()]))
        };
        let id = created.map_err(|d| vec![d])?;
        debug_assert_eq!(id, NodeId(i));
    }
    let names = flat.elems.iter().map(|e| e.name.clone()).collect();
    Ok(Built { graph, paths, names })
}

/// Run every layout function once, children before parents and siblings
/// in document order, then settle open axes, finalize and resolve.
pub fn layout_document(built: Built, registry: &Registry) -> Result<Compiled, Vec<Diagnostic>> {
    let mut built = built;
    let Some(root) = built.graph.root() else {
        return Err(vec![Diagnostic::error(Code::Internal, "empty scenegraph", vec![])]);
    };
    let mut calls = vec![0u32; built.graph.len()];
    let mut warnings: Vec<LayoutWarning> = Vec::new();

    let mut stack = vec![(root, false)];
    while let Some((id, ready)) = stack.pop() {
        let Some(Node::Layout(node)) = built.graph.node(id) else {
            continue;
        };
        if !ready {
            stack.push((id, true));
            for &c in node.children.iter().rev() {
                stack.push((c, false));
            }
            continue;
        }
        let (props, children) = (node.props.clone(), node.children.clone());
        let body = registry.get(&node.kind).map(|s| s.body.clone());
        let Some(KindBody::Primitive(p)) = body else {
            return Err(vec![Diagnostic::error(
                Code::UnknownKind,
                format!("no layout for kind `{}`", node.kind),
                vec![built.path(id)],
            )]);
        };
        let mut cx = LayoutCx::new(&mut built.graph, id, &props, &children, &mut warnings);
        p.layout(&mut cx).map_err(|e| vec![layout_diagnostic(&e, id, &built)])?;
        calls[id.0] += 1;
    }

    // axes a relation left open take their children's union
    for i in (0..built.graph.len()).rev() {
        let id = NodeId(i);
        if let Some(Node::Layout(n)) = built.graph.node(id) {
            if n.children.is_empty() {
                continue;
            }
            for axis in Axis::BOTH {
                ensure_sized(&mut built.graph, id, axis).map_err(|e| vec![graph_diagnostic(&e, id, &built)])?;
            }
        }
    }
    built
        .graph
        .finalize()
        .map_err(|e| vec![graph_diagnostic(&e, root, &built)])?;

    let warnings = warnings
        .into_iter()
        .map(|w| Diagnostic::warning(w.code, w.message, w.nodes.iter().map(|n| built.path(*n)).collect()))
        .collect();
    let scene = resolve_scene(&built);
    Ok(Compiled {
        scene,
        warnings,
        layout_calls: calls,
    })
}

fn resolve_scene(built: &Built) -> ResolvedScene {
    let g = &built.graph;
    let mut origin: Vec<(f64, f64)> = vec![(0.0, 0.0); g.len()];
    let mut nodes: Vec<ResolvedNode> = Vec::with_capacity(g.len());
    for node in g.nodes() {
        let id = node.id();
        let path = built.path(id);
        let name = built.names.get(id.0).cloned().flatten();
        match node {
            Node::Layout(n) => {
                let base = n.parent.map_or((0.0, 0.0), |p| origin[p.0]);
                let t = (n.transform.x.unwrap_or(0.0), n.transform.y.unwrap_or(0.0));
                origin[id.0] = (base.0 + t.0, base.1 + t.1);
                let span = |axis| n.bbox.span(axis).unwrap_or_default();
                let (h, v) = (span(Axis::Horizontal), span(Axis::Vertical));
                let local = Rect {
                    x: h.start.unwrap_or(0.0),
                    y: v.start.unwrap_or(0.0),
                    width: h.extent.unwrap_or(0.0),
                    height: v.extent.unwrap_or(0.0),
                };
                nodes.push(ResolvedNode {
                    id,
                    kind: n.kind.clone(),
                    name,
                    path,
                    parent: n.parent,
                    children: n.children.clone(),
                    ref_id: None,
                    local,
                    translate: t,
                    bounds: Rect {
                        x: origin[id.0].0 + local.x,
                        y: origin[id.0].1 + local.y,
                        ..local
                    },
                    props: n.props.clone(),
                    paint: n.paint.clone(),
                    bbox_owners: n.bbox_owners.iter().collect(),
                    transform_owners: [
                        n.transform_owners.get(Axis::Horizontal),
                        n.transform_owners.get(Axis::Vertical),
                    ],
                });
            }
            Node::Ref(r) => {
                // referents always precede their refs
                let target = &nodes[r.ref_id.0];
                nodes.push(ResolvedNode {
                    id,
                    kind: docformat::REF_KIND.to_owned(),
                    name: None,
                    path,
                    parent: Some(r.parent),
                    children: Vec::new(),
                    ref_id: Some(r.ref_id),
                    local: target.local,
                    translate: (0.0, 0.0),
                    bounds: target.bounds,
                    props: Props::new(),
                    paint: Default::default(),
                    bbox_owners: Vec::new(),
                    transform_owners: [None, None],
                });
            }
        }
    }
    ResolvedScene {
        nodes,
        root: g.root().unwrap_or(NodeId(0)),
    }
}

fn axis_name(axis: Axis) -> &'static str {
    match axis {
        Axis::Horizontal => "horizontal",
        Axis::Vertical => "vertical",
    }
}

fn layout_diagnostic(e: &LayoutError, running: NodeId, built: &Built) -> Diagnostic {
    match e {
        LayoutError::Graph(g) => graph_diagnostic(g, running, built),
        LayoutError::InvalidProp { node, message } => {
            Diagnostic::error(Code::SchemaError, message.clone(), vec![built.path(*node)])
        }
        LayoutError::Disagreement {
            relation,
            axis,
            expected,
            found,
            anchor,
            other,
            other_owner,
        } => {
            let mut paths = Vec::new();
            let mut push = |id: NodeId| {
                let p = built.path(id);
                if !paths.contains(&p) {
                    paths.push(p);
                }
            };
            if let Some((_, Some(o))) = anchor {
                push(*o);
            }
            if let Some(o) = other_owner {
                push(*o);
            }
            push(*relation);
            let placed_by = |o: &Option<NodeId>| match o {
                Some(o) => format!(" (placed by `{}`)", built.path(*o)),
                None => String::new(),
            };
            let against = match anchor {
                Some((a, owner)) => format!(" to line up with `{}`{}", built.path(*a), placed_by(owner)),
                None => String::new(),
            };
            Diagnostic::error(
                Code::DimensionConflict,
                format!(
                    "`{}` cannot place `{}` on the {} axis: it is already at {}{} but would need {}{}",
                    built.path(*relation),
                    built.path(*other),
                    axis_name(*axis),
                    fmt_num(*found),
                    placed_by(other_owner),
                    fmt_num(*expected),
                    against
                ),
                paths,
            )
        }
    }
}

fn field_name(f: &Field) -> String {
    match f {
        Field::BBox(d) => d.name().to_owned(),
        Field::Translate(Axis::Horizontal) => "x translation".to_owned(),
        Field::Translate(Axis::Vertical) => "y translation".to_owned(),
    }
}

fn graph_diagnostic(e: &GraphError, running: NodeId, built: &Built) -> Diagnostic {
    let at = |n: NodeId| vec![built.path(n)];
    match e {
        GraphError::Geometry { node, source } => match source {
            GeometryError::DimensionConflict {
                field,
                existing_owner,
                writer,
            } => {
                let mut paths = vec![built.path(*existing_owner)];
                if writer != existing_owner {
                    paths.push(built.path(*writer));
                }
                Diagnostic::error(
                    Code::DimensionConflict,
                    format!(
                        "conflicting writes to the {} of `{}`: owned by `{}`, written again by `{}`",
                        field_name(field),
                        built.path(*node),
                        built.path(*existing_owner),
                        built.path(*writer)
                    ),
                    paths,
                )
            }
            GeometryError::InvalidExtent { field, value } => Diagnostic::error(
                Code::InvalidExtent,
                format!(
                    "{} of `{}` would be negative ({})",
                    field.name(),
                    built.path(*node),
                    fmt_num(*value)
                ),
                vec![built.path(*node), built.path(running)],
            ),
            GeometryError::NonFinite { field, value } => Diagnostic::error(
                Code::InvalidExtent,
                format!("{} of `{}` would be {value}", field_name(field), built.path(*node)),
                vec![built.path(*node), built.path(running)],
            ),
            GeometryError::InconsistentBBox { axis } => Diagnostic::error(
                Code::InconsistentBBox,
                format!("the {} fields of `{}` disagree", axis_name(*axis), built.path(*node)),
                at(*node),
            ),
            GeometryError::UndefinedTransform { .. } => Diagnostic::error(Code::Internal, e.to_string(), at(*node)),
        },
        GraphError::UnsizedNode { node } => Diagnostic::error(
            Code::UnsizedNode,
            format!("`{}` has no size after layout", built.path(*node)),
            at(*node),
        ),
        GraphError::UndefinedExtent { node, axis } => Diagnostic::error(
            Code::UndefinedExtent,
            format!("`{}` has no {} extent", built.path(*node), axis_name(*axis)),
            vec![built.path(*node), built.path(running)],
        ),
        GraphError::SelfReference { parent, referent } => Diagnostic::error(
            Code::SelfReference,
            "a ref cannot select an element that contains it",
            vec![built.path(*parent), built.path(*referent)],
        ),
        GraphError::RefToRef { parent, referent } => Diagnostic::error(
            Code::RefToRef,
            "a ref cannot select another ref",
            vec![built.path(*parent), built.path(*referent)],
        ),
        other => Diagnostic::error(Code::Internal, other.to_string(), at(running)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{ElementKindSpec, KindSchema, PropSpec, PropType};

    fn compile_str(s: &str) -> Result<Compiled, Vec<Diagnostic>> {
        compile(s.as_bytes(), &Registry::standard())
    }

    const TWO_RECT_STACK: &str = r#"{"bluefish":1,"root":{"kind":"stackV","props":{"spacing":30,"alignment":"centerX"},"children":[
        {"kind":"rect","name":"a","props":{"width":10,"height":20}},
        {"kind":"rect","name":"b","props":{"width":30,"height":10}}]}}"#;

    #[test]
    fn single_rect_is_one_node() {
        let c = compile_str(r#"{"bluefish":1,"root":{"kind":"rect","props":{"width":10,"height":20}}}"#).unwrap();
        assert_eq!(c.scene.nodes.len(), 1);
        assert_eq!(
            c.scene.root_bounds(),
            Rect {
                x: 0.0,
                y: 0.0,
                width: 10.0,
                height: 20.0
            }
        );
    }

    #[test]
    fn layout_runs_once_per_layout_node() {
        let c = compile_str(TWO_RECT_STACK).unwrap();
        assert_eq!(c.layout_calls, vec![1, 1, 1]);
        let a = c.scene.named("a").unwrap().bounds;
        assert_eq!((a.x, a.y), (-5.0, 0.0));
    }

    #[test]
    fn self_reference_is_reported() {
        let e = compile_str(
            r#"{"bluefish":1,"root":{"kind":"group","name":"top","children":[
                {"kind":"stackV","children":[{"kind":"ref","select":"top"}]}]}}"#,
        )
        .unwrap_err();
        assert_eq!(e[0].code, Code::SelfReference);
        assert_eq!(
            e[0].paths,
            vec!["group[0]#top/stackV[0]/ref[0]".to_string(), "group[0]#top".to_string()]
        );
    }

    #[test]
    fn empty_group_root_is_unsized() {
        let e = compile_str(r#"{"bluefish":1,"root":{"kind":"group"}}"#).unwrap_err();
        assert_eq!(e[0].code, Code::UnsizedNode);
        assert_eq!(e[0].paths, vec!["group[0]".to_string()]);
    }

    #[test]
    fn double_alignment_conflict_names_both_aligns() {
        let e = compile_str(
            r#"{"bluefish":1,"root":{"kind":"group","children":[
                {"kind":"stackH","props":{"spacing":40},"children":[
                    {"kind":"rect","name":"a","props":{"width":10,"height":10}},
                    {"kind":"rect","name":"b","props":{"width":10,"height":10}}]},
                {"kind":"rect","name":"c","props":{"width":10,"height":10}},
                {"kind":"align","props":{"alignment":"left"},"children":[{"kind":"ref","select":"c"},{"kind":"ref","select":"a"}]},
                {"kind":"align","props":{"alignment":"left"},"children":[{"kind":"ref","select":"c"},{"kind":"ref","select":"b"}]}]}}"#,
        )
        .unwrap_err();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].code, Code::DimensionConflict);
        assert!(
            e[0].paths.contains(&"group[0]/align[2]".to_string()),
            "{:?}",
            e[0].paths
        );
        assert!(
            e[0].paths.contains(&"group[0]/align[3]".to_string()),
            "{:?}",
            e[0].paths
        );
    }

    #[test]
    fn composites_expand_before_layout() {
        let mut reg = Registry::standard();
        let schema = KindSchema::leaf(vec![
            PropSpec::required("radius", PropType::NonNegative),
            PropSpec::with_default("color", PropType::Str, "black"),
        ]);
        reg.register_element_kind(
            ElementKindSpec::composite("planet", schema.clone(), |e| {
                Element::new("circle")
                    .prop("r", e.props.number("radius").unwrap_or(0.0))
                    .prop("fill", e.props.str("color").unwrap_or("black"))
            }),
            false,
        )
        .unwrap();
        let c = compile(
            br#"{"bluefish":1,"root":{"kind":"stackH","props":{"spacing":5},"children":[
                {"kind":"planet","name":"p","props":{"radius":4,"color":"red"}},
                {"kind":"planet","props":{"radius":6}}]}}"#,
            &reg,
        )
        .unwrap();
        let p = c.scene.named("p").unwrap();
        assert_eq!(p.kind, "circle");
        assert_eq!(p.bounds.width, 8.0);
        let again = reg.register_element_kind(ElementKindSpec::composite("planet", schema, |e| e.clone()), false);
        assert_eq!(again, Err(RegistryError::DuplicateKind("planet".into())));
    }

    #[test]
    fn runaway_composite_is_reported() {
        let mut reg = Registry::standard();
        reg.register_element_kind(
            ElementKindSpec::composite("loop", KindSchema::new(vec![]), |_| Element::new("loop")),
            false,
        )
        .unwrap();
        let e = compile(br#"{"bluefish":1,"root":{"kind":"loop"}}"#, &reg).unwrap_err();
        assert_eq!(e[0].code, Code::SchemaError);
    }

    #[test]
    fn degenerate_connector_is_a_warning() {
        let c = compile_str(
            r#"{"bluefish":1,"root":{"kind":"group","children":[
                {"kind":"rect","name":"a","props":{"width":10,"height":10}},
                {"kind":"rect","name":"b","props":{"width":10,"height":10}},
                {"kind":"arrow","children":[{"kind":"ref","select":"a"},{"kind":"ref","select":"b"}]}]}}"#,
        )
        .unwrap();
        assert_eq!(c.warnings.len(), 1);
        assert_eq!(c.warnings[0].code, Code::DegenerateConnector);
    }
}
