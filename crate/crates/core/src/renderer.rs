//! SVG output and the canonical scene dump.

use std::fmt::Write as _;

use crate::geometry::{Dim, NodeId};
use crate::props::Props;
use crate::registry::{KindBody, Registry};
use crate::scenegraph::PaintData;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedNode {
    pub id: NodeId,
    pub kind: String,
    pub name: Option<String>,
    pub path: String,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    /// Referent of a ref node.
    pub ref_id: Option<NodeId>,
    /// Box in the node's own frame.
    pub local: Rect,
    pub translate: (f64, f64),
    /// Box in the root frame.
    pub bounds: Rect,
    pub props: Props,
    pub paint: PaintData,
    pub bbox_owners: Vec<(Dim, NodeId)>,
    pub transform_owners: [Option<NodeId>; 2],
}

impl ResolvedNode {
    pub fn is_ref(&self) -> bool {
        self.ref_id.is_some()
    }
}

/// Fully placed scene. Node ids index `nodes` and follow document order.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedScene {
    pub nodes: Vec<ResolvedNode>,
    pub root: NodeId,
}

impl ResolvedScene {
    pub fn node(&self, id: NodeId) -> &ResolvedNode {
        &self.nodes[id.0]
    }

    pub fn root_bounds(&self) -> Rect {
        self.node(self.root).bounds
    }

    /// First layout node carrying `name`, in document order.
    pub fn named(&self, name: &str) -> Option<&ResolvedNode> {
        self.nodes
            .iter()
            .find(|n| !n.is_ref() && n.name.as_deref() == Some(name))
    }

    pub fn by_path(&self, path: &str) -> Option<&ResolvedNode> {
        self.nodes.iter().find(|n| n.path == path)
    }
}

/// What a kind's paint function sees: the node's box in its own frame.
pub struct PaintNode<'a> {
    pub id: NodeId,
    pub kind: &'a str,
    pub props: &'a Props,
    pub left: f64,
    pub top: f64,
    pub width: f64,
    pub height: f64,
    pub paint: &'a PaintData,
}

impl<'a> PaintNode<'a> {
    pub fn new(node: &'a ResolvedNode) -> Self {
        Self {
            id: node.id,
            kind: &node.kind,
            props: &node.props,
            left: node.local.x,
            top: node.local.y,
            width: node.local.width,
            height: node.local.height,
            paint: &node.paint,
        }
    }

    #[cfg(test)]
    pub(crate) fn for_test(props: &'a Props, (left, top, width, height): (f64, f64, f64, f64)) -> Self {
        static NONE: PaintData = PaintData::None;
        Self {
            id: NodeId(0),
            kind: "test",
            props,
            left,
            top,
            width,
            height,
            paint: &NONE,
        }
    }
}

/// Number with at most two decimals (ties to even), no trailing zeros.
pub fn fmt_num(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_owned()
    } else {
        s.to_owned()
    }
}

/// Number with exactly two decimals, as used in the dump.
pub fn fmt_fixed(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_owned()
    } else {
        s
    }
}

/// Round up to the next multiple of 0.01, treating values within 1e-6 of
/// a multiple as that multiple.
pub fn ceil_hundredths(v: f64) -> f64 {
    let scaled = v * 100.0;
    let near = scaled.round();
    if (scaled - near).abs() <= 1e-6 {
        near / 100.0
    } else {
        scaled.ceil() / 100.0
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

/// Attribute list, emitted in name order.
#[derive(Debug, Clone, Default)]
pub struct Attrs(Vec<(String, String)>);

impl Attrs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn str(&mut self, key: &str, value: &str) -> &mut Self {
        self.0.push((key.to_owned(), value.to_owned()));
        self
    }

    pub fn opt_str(&mut self, key: &str, value: Option<&str>) -> &mut Self {
        if let Some(v) = value {
            self.str(key, v);
        }
        self
    }

    pub fn num(&mut self, key: &str, value: f64) -> &mut Self {
        self.0.push((key.to_owned(), fmt_num(value)));
        self
    }

    pub fn translate(&mut self, dx: f64, dy: f64) -> &mut Self {
        let t = format!("translate({},{})", fmt_num(dx), fmt_num(dy));
        self.str("transform", &t)
    }

    fn render(mut self) -> String {
        self.0.sort_by(|a, b| a.0.cmp(&b.0));
        let mut s = String::new();
        for (k, v) in self.0 {
            let _ = write!(s, " {k}=\"{}\"", escape(&v));
        }
        s
    }
}

/// Indented SVG text builder.
#[derive(Debug, Default)]
pub struct SvgWriter {
    buf: String,
    depth: usize,
}

impl SvgWriter {
    pub fn new() -> Self {
        Self::default()
    }

    fn indent(&mut self) {
        for _ in 0..self.depth {
            self.buf.push_str("  ");
        }
    }

    pub fn open(&mut self, tag: &str, attrs: Attrs) {
        self.indent();
        let _ = writeln!(self.buf, "<{tag}{}>", attrs.render());
        self.depth += 1;
    }

    pub fn close(&mut self, tag: &str) {
        self.depth = self.depth.saturating_sub(1);
        self.indent();
        let _ = writeln!(self.buf, "</{tag}>");
    }

    pub fn leaf(&mut self, tag: &str, attrs: Attrs) {
        self.indent();
        let _ = writeln!(self.buf, "<{tag}{}/>", attrs.render());
    }

    pub fn text(&mut self, tag: &str, attrs: Attrs, content: &str) {
        self.indent();
        let _ = writeln!(self.buf, "<{tag}{}>{}</{tag}>", attrs.render(), escape(content));
    }

    /// Written text without the final newline.
    pub fn finish_fragment(self) -> String {
        self.buf.trim_end().to_owned()
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Paint a scene. Each layout node becomes a group translated into its
/// parent's frame; its own content comes first, then its children. Ref
/// nodes paint nothing.
pub fn paint(scene: &ResolvedScene, registry: &Registry) -> String {
    let root = scene.root_bounds();
    let (w, h) = (ceil_hundredths(root.width), ceil_hundredths(root.height));
    let mut out = SvgWriter::new();
    let mut svg = Attrs::new();
    svg.num("width", w)
        .num("height", h)
        .str("viewBox", &format!("0 0 {} {}", fmt_num(w), fmt_num(h)))
        .str("xmlns", "http://www.w3.org/2000/svg");
    out.open("svg", svg);

    enum Step {
        Enter(NodeId),
        Leave,
    }
    let mut stack = vec![Step::Enter(scene.root)];
    while let Some(step) = stack.pop() {
        let id = match step {
            Step::Leave => {
                out.close("g");
                continue;
            }
            Step::Enter(id) => id,
        };
        let node = scene.node(id);
        if node.is_ref() {
            continue;
        }
        let (mut tx, mut ty) = node.translate;
        if id == scene.root {
            // the root's box starts at the viewport origin
            tx -= root.x;
            ty -= root.y;
        }
        let mut g = Attrs::new();
        if tx != 0.0 || ty != 0.0 {
            g.translate(tx, ty);
        }
        out.open("g", g);
        if let Some(KindBody::Primitive(p)) = registry.get(&node.kind).map(|s| &s.body) {
            p.paint(&PaintNode::new(node), &mut out);
        }
        stack.push(Step::Leave);
        for &c in node.children.iter().rev() {
            stack.push(Step::Enter(c));
        }
    }
    out.close("svg");
    out.finish()
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn rect_json(r: &Rect) -> String {
    format!(
        "\"x\": {}, \"y\": {}, \"width\": {}, \"height\": {}",
        fmt_fixed(r.x),
        fmt_fixed(r.y),
        fmt_fixed(r.width),
        fmt_fixed(r.height)
    )
}

/// Canonical dump: every node in document order with its root-frame box,
/// translation and owners, then the geometry of named nodes sorted by name.
pub fn dump_scene(scene: &ResolvedScene) -> String {
    let mut s = String::from("{\n  \"version\": 1,\n  \"nodes\": [\n");
    for (i, n) in scene.nodes.iter().enumerate() {
        let _ = write!(
            s,
            "    {{\"id\": {}, \"kind\": {}, \"path\": {}",
            n.id.0,
            json_str(&n.kind),
            json_str(&n.path)
        );
        if let Some(name) = &n.name {
            let _ = write!(s, ", \"name\": {}", json_str(name));
        }
        if let Some(r) = n.ref_id {
            let _ = write!(s, ", \"ref\": {}", r.0);
        } else {
            let _ = write!(
                s,
                ", {}, \"translate\": [{}, {}], \"bboxOwners\": {{",
                rect_json(&n.bounds),
                fmt_fixed(n.translate.0),
                fmt_fixed(n.translate.1)
            );
            let mut owners: Vec<(&str, usize)> = n.bbox_owners.iter().map(|(d, o)| (d.name(), o.0)).collect();
            owners.sort();
            let owners: Vec<String> = owners.iter().map(|(d, o)| format!("\"{d}\": {o}")).collect();
            s.push_str(&owners.join(", "));
            s.push_str("}, \"transformOwners\": {");
            let t: Vec<String> = ["x", "y"]
                .iter()
                .zip(n.transform_owners)
                .filter_map(|(k, o)| o.map(|o| format!("\"{k}\": {}", o.0)))
                .collect();
            s.push_str(&t.join(", "));
            s.push('}');
        }
        s.push('}');
        if i + 1 < scene.nodes.len() {
            s.push(',');
        }
        s.push('\n');
    }
    s.push_str("  ],\n  \"geometry\": ");
    s.push_str(&geometry_section(scene, 2));
    s.push_str("\n}\n");
    s
}

/// Root-frame boxes of named layout nodes, sorted by name then document
/// order. Independent of how the nodes were arranged, so equivalent
/// documents produce identical text.
pub fn geometry_section(scene: &ResolvedScene, indent: usize) -> String {
    let mut named: Vec<&ResolvedNode> = scene.nodes.iter().filter(|n| !n.is_ref() && n.name.is_some()).collect();
    named.sort_by(|a, b| a.name.cmp(&b.name).then(a.id.cmp(&b.id)));
    if named.is_empty() {
        return "[]".into();
    }
    let pad = " ".repeat(indent);
    let mut s = String::from("[\n");
    for (i, n) in named.iter().enumerate() {
        let name = n.name.as_deref().unwrap_or_default();
        let _ = write!(s, "{pad}  {{\"name\": {}, {}}}", json_str(name), rect_json(&n.bounds));
        s.push_str(if i + 1 < named.len() { ",\n" } else { "\n" });
    }
    s.push_str(&pad);
    s.push(']');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_use_two_decimals_ties_to_even() {
        assert_eq!(fmt_num(10.0), "10");
        assert_eq!(fmt_num(-5.0), "-5");
        assert_eq!(fmt_num(67.2), "67.2");
        assert_eq!(fmt_num(0.125), "0.12");
        assert_eq!(fmt_num(0.375), "0.38");
        assert_eq!(fmt_num(-0.001), "0");
        assert_eq!(fmt_num(1.0 / 3.0), "0.33");
        assert_eq!(fmt_fixed(-0.0), "0.00");
        assert_eq!(fmt_fixed(-5.0), "-5.00");
        assert_eq!(fmt_fixed(19.2), "19.20");
    }

    #[test]
    fn viewport_rounds_up() {
        assert_eq!(ceil_hundredths(67.2), 67.2);
        assert_eq!(ceil_hundredths(10.001), 10.01);
        assert_eq!(ceil_hundredths(30.0), 30.0);
    }

    #[test]
    fn attributes_are_sorted_and_escaped() {
        let mut a = Attrs::new();
        a.str("y", "1").str("fill", "a\"b").num("x", 0.5);
        let mut w = SvgWriter::new();
        w.leaf("rect", a);
        assert_eq!(w.finish_fragment(), r#"<rect fill="a&quot;b" x="0.5" y="1"/>"#);
    }

    #[test]
    fn text_content_is_escaped() {
        let mut w = SvgWriter::new();
        w.text("text", Attrs::new(), "a<b & c");
        assert_eq!(w.finish_fragment(), "<text>a&lt;b &amp; c</text>");
    }
}
