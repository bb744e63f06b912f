//! The JSON diagram document: parsing, canonical printing, validation
//! against the kind registry, and name resolution for refs.
//!
//! ```text
//! Document := { "bluefish": 1, "root": Element }
//! Element  := { "kind": Kind, "name"?: string, "props"?: object,
//!               "children"?: [Element...], "select"?: string | [string...] }
//! ```

use std::collections::{BTreeMap, HashMap};

use serde_json::{Map, Value};
use thiserror::Error;

use crate::diagnostics::{Code, Diagnostic, DOCUMENT_PATH};
use crate::props::{PropValue, Props};
use crate::registry::{PropType, Registry};

pub const FORMAT_VERSION: u64 = 1;
pub const REF_KIND: &str = "ref";

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub kind: String,
    pub name: Option<String>,
    pub props: Props,
    pub children: Vec<Element>,
    /// Selector path; only meaningful on `ref` elements.
    pub select: Option<Vec<String>>,
}

impl Element {
    pub fn new(kind: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            name: None,
            props: Props::new(),
            children: Vec::new(),
            select: None,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn prop(mut self, key: &str, value: impl Into<PropValue>) -> Self {
        self.props.insert(key, value.into());
        self
    }

    pub fn child(mut self, child: Element) -> Self {
        self.children.push(child);
        self
    }

    pub fn reference<S: Into<String>>(path: impl IntoIterator<Item = S>) -> Self {
        let mut e = Element::new(REF_KIND);
        e.select = Some(path.into_iter().map(Into::into).collect());
        e
    }

    pub fn is_ref(&self) -> bool {
        self.kind == REF_KIND
    }

    /// Number of elements in this subtree (prop-embedded elements excluded).
    pub fn count(&self) -> usize {
        1 + self.children.iter().map(Element::count).sum::<usize>()
    }
}

impl From<f64> for PropValue {
    fn from(v: f64) -> Self {
        PropValue::Number(v)
    }
}

impl From<i32> for PropValue {
    fn from(v: i32) -> Self {
        PropValue::Number(v as f64)
    }
}

impl From<&str> for PropValue {
    fn from(v: &str) -> Self {
        PropValue::Str(v.to_owned())
    }
}

impl From<String> for PropValue {
    fn from(v: String) -> Self {
        PropValue::Str(v)
    }
}

impl From<bool> for PropValue {
    fn from(v: bool) -> Self {
        PropValue::Bool(v)
    }
}

impl From<Element> for PropValue {
    fn from(v: Element) -> Self {
        PropValue::Element(Box::new(v))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub root: Element,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{message}")]
    Schema { path: String, message: String },
}

impl ParseError {
    pub fn to_diagnostic(&self) -> Diagnostic {
        match self {
            ParseError::Syntax { .. } => Diagnostic::error(Code::SyntaxError, self.to_string(), vec![]),
            ParseError::Schema { path, message } => {
                Diagnostic::error(Code::SchemaError, message.clone(), vec![path.clone()])
            }
        }
    }
}

fn schema(path: &str, message: impl Into<String>) -> ParseError {
    ParseError::Schema {
        path: path.to_owned(),
        message: message.into(),
    }
}

pub fn parse_document(bytes: &[u8]) -> Result<Document, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        // report the byte offset of the bad sequence as a line/column
        let prefix = &bytes[..e.valid_up_to()];
        let line = prefix.iter().filter(|b| **b == b'\n').count() + 1;
        let column = prefix.iter().rev().take_while(|b| **b != b'\n').count() + 1;
        ParseError::Syntax {
            line,
            column,
            message: "input is not valid UTF-8".into(),
        }
    })?;
    let value: Value = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let Value::Object(top) = value else {
        return Err(schema(DOCUMENT_PATH, "document must be a JSON object"));
    };
    for key in top.keys() {
        if key != "bluefish" && key != "root" {
            return Err(schema(DOCUMENT_PATH, format!("unknown top-level key `{key}`")));
        }
    }
    match top.get("bluefish") {
        Some(v) if v.as_u64() == Some(FORMAT_VERSION) => {}
        Some(v) => return Err(schema(DOCUMENT_PATH, format!("unsupported document version {v}"))),
        None => return Err(schema(DOCUMENT_PATH, "missing `bluefish` version key")),
    }
    let root = top
        .get("root")
        .ok_or_else(|| schema(DOCUMENT_PATH, "missing `root` element"))?;
    Ok(Document {
        root: element_from_json(root, "", 0)?,
    })
}

fn element_from_json(value: &Value, parent_path: &str, index: usize) -> Result<Element, ParseError> {
    let here_unknown = join_path(parent_path, &format!("?[{index}]"));
    let Value::Object(obj) = value else {
        return Err(schema(&here_unknown, "element must be a JSON object"));
    };
    let kind = match obj.get("kind") {
        Some(Value::String(k)) => k.clone(),
        Some(_) => return Err(schema(&here_unknown, "`kind` must be a string")),
        None => return Err(schema(&here_unknown, "element is missing `kind`")),
    };
    let name = match obj.get("name") {
        None => None,
        Some(Value::String(n)) if !n.is_empty() => Some(n.clone()),
        Some(_) => return Err(schema(&here_unknown, "`name` must be a non-empty string")),
    };
    let path = join_path(parent_path, &segment(&kind, index, name.as_deref()));
    for key in obj.keys() {
        if !matches!(key.as_str(), "kind" | "name" | "props" | "children" | "select") {
            return Err(schema(&path, format!("unknown element key `{key}`")));
        }
    }
    let mut props = Props::new();
    match obj.get("props") {
        None => {}
        Some(Value::Object(map)) => {
            for (k, v) in map {
                let pv = match v {
                    Value::Number(n) => PropValue::Number(
                        n.as_f64()
                            .ok_or_else(|| schema(&path, format!("prop `{k}` is out of range")))?,
                    ),
                    Value::String(s) => PropValue::Str(s.clone()),
                    Value::Bool(b) => PropValue::Bool(*b),
                    Value::Object(_) => PropValue::Element(Box::new(element_from_json(v, &path, 0)?)),
                    _ => {
                        return Err(schema(
                            &path,
                            format!("prop `{k}` must be a number, string, boolean or element"),
                        ))
                    }
                };
                props.insert(k.clone(), pv);
            }
        }
        Some(_) => return Err(schema(&path, "`props` must be an object")),
    }
    let children = match obj.get("children") {
        None => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, c)| element_from_json(c, &path, i))
            .collect::<Result<_, _>>()?,
        Some(_) => return Err(schema(&path, "`children` must be an array")),
    };
    let select = match obj.get("select") {
        None => None,
        Some(Value::String(s)) => Some(vec![s.clone()]),
        Some(Value::Array(items)) if !items.is_empty() => Some(
            items
                .iter()
                .map(|s| match s {
                    Value::String(s) => Ok(s.clone()),
                    _ => Err(schema(&path, "`select` path segments must be strings")),
                })
                .collect::<Result<_, _>>()?,
        ),
        Some(_) => {
            return Err(schema(
                &path,
                "`select` must be a string or a non-empty array of strings",
            ))
        }
    };
    Ok(Element {
        kind,
        name,
        props,
        children,
        select,
    })
}

/// Canonical JSON text: sorted keys, two-space indentation, trailing newline.
pub fn print_document(doc: &Document) -> String {
    let mut top = Map::new();
    top.insert("bluefish".into(), Value::from(FORMAT_VERSION));
    top.insert("root".into(), element_to_json(&doc.root));
    let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("values are always serializable");
    s.push('\n');
    s
}

fn element_to_json(e: &Element) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), Value::from(e.kind.clone()));
    if let Some(n) = &e.name {
        obj.insert("name".into(), Value::from(n.clone()));
    }
    if !e.props.is_empty() {
        let props = e
            .props
            .iter()
            .map(|(k, v)| {
                let v = match v {
                    PropValue::Number(n) => Value::from(*n),
                    PropValue::Str(s) => Value::from(s.clone()),
                    PropValue::Bool(b) => Value::from(*b),
                    PropValue::Element(e) => element_to_json(e),
                };
                (k.clone(), v)
            })
            .collect();
        obj.insert("props".into(), Value::Object(props));
    }
    if !e.children.is_empty() {
        obj.insert(
            "children".into(),
            Value::Array(e.children.iter().map(element_to_json).collect()),
        );
    }
    if let Some(sel) = &e.select {
        let v = if sel.len() == 1 {
            Value::from(sel[0].clone())
        } else {
            Value::Array(sel.iter().cloned().map(Value::from).collect())
        };
        obj.insert("select".into(), v);
    }
    Value::Object(obj)
}

pub fn segment(kind: &str, index: usize, name: Option<&str>) -> String {
    match name {
        Some(n) => format!("{kind}[{index}]#{n}"),
        None => format!("{kind}[{index}]"),
    }
}

fn join_path(parent: &str, seg: &str) -> String {
    if parent.is_empty() {
        seg.to_owned()
    } else {
        format!("{parent}/{seg}")
    }
}

/// Pre-order flattening of the element tree.
pub struct Flat<'a> {
    pub elems: Vec<&'a Element>,
    pub parent: Vec<Option<usize>>,
    pub paths: Vec<String>,
    /// Number of elements in each element's subtree, itself included.
    pub size: Vec<usize>,
}

impl<'a> Flat<'a> {
    pub fn new(root: &'a Element) -> Self {
        let mut flat = Flat {
            elems: Vec::new(),
            parent: Vec::new(),
            paths: Vec::new(),
            size: Vec::new(),
        };
        flat.push(root, None, 0, "");
        flat
    }

    fn push(&mut self, e: &'a Element, parent: Option<usize>, index: usize, parent_path: &str) {
        let me = self.elems.len();
        let path = join_path(parent_path, &segment(&e.kind, index, e.name.as_deref()));
        self.elems.push(e);
        self.parent.push(parent);
        self.paths.push(path);
        self.size.push(1);
        for (i, c) in e.children.iter().enumerate() {
            let p = self.paths[me].clone();
            self.push(c, Some(me), i, &p);
        }
        self.size[me] = self.elems.len() - me;
    }

    pub fn is_descendant(&self, node: usize, ancestor: usize) -> bool {
        node > ancestor && node < ancestor + self.size[ancestor]
    }

    /// Nearest strict ancestor that carries a name, or `None` for the
    /// implicit root scope.
    pub fn scope_of(&self, i: usize) -> Option<usize> {
        let mut cur = self.parent[i];
        while let Some(p) = cur {
            if self.elems[p].name.is_some() {
                return Some(p);
            }
            cur = self.parent[p];
        }
        None
    }
}

/// Static checks against the registry. Returns every problem found.
pub fn validate(doc: &Document, registry: &Registry) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let flat = Flat::new(&doc.root);
    for (i, e) in flat.elems.iter().enumerate() {
        validate_element(e, &flat.paths[i], registry, false, &mut out);
    }
    out
}

fn validate_element(e: &Element, path: &str, registry: &Registry, embedded: bool, out: &mut Vec<Diagnostic>) {
    let here = || vec![path.to_owned()];
    if e.is_ref() {
        if !e.children.is_empty() {
            out.push(Diagnostic::error(
                Code::RefWithChildren,
                "ref elements must be leaves",
                here(),
            ));
        }
        if e.name.is_some() {
            out.push(Diagnostic::error(
                Code::SchemaError,
                "ref elements cannot be named",
                here(),
            ));
        }
        if e.select.is_none() {
            out.push(Diagnostic::error(
                Code::MissingProp,
                "ref element requires `select`",
                here(),
            ));
        }
        if !e.props.is_empty() {
            out.push(Diagnostic::error(
                Code::SchemaError,
                "ref elements take no props",
                here(),
            ));
        }
        return;
    }
    if e.select.is_some() {
        out.push(Diagnostic::error(
            Code::SchemaError,
            "`select` is only valid on ref elements",
            here(),
        ));
    }
    let Some(spec) = registry.get(&e.kind) else {
        out.push(Diagnostic::error(
            Code::UnknownKind,
            format!("unknown element kind `{}`", e.kind),
            here(),
        ));
        return;
    };
    let schema = &spec.schema;
    if !embedded {
        let n = e.children.len();
        if n < schema.min_children || schema.max_children.is_some_and(|m| n > m) {
            let expect = match schema.max_children {
                Some(m) if m == schema.min_children => format!("exactly {m}"),
                Some(m) => format!("between {} and {m}", schema.min_children),
                None => format!("at least {}", schema.min_children),
            };
            out.push(Diagnostic::error(
                Code::SchemaError,
                format!("`{}` takes {expect} children, got {n}", e.kind),
                here(),
            ));
        }
    } else if e.name.is_some() || !e.children.is_empty() {
        out.push(Diagnostic::error(
            Code::SchemaError,
            "an element used as a prop value cannot have a name or children",
            here(),
        ));
    }
    for p in &schema.props {
        // embedded elements are sized by their owner
        if p.required && !embedded && e.props.get(&p.name).is_none() {
            out.push(Diagnostic::error(
                Code::MissingProp,
                format!("`{}` requires prop `{}`", e.kind, p.name),
                here(),
            ));
        }
    }
    for (key, value) in e.props.iter() {
        let Some(p) = schema.props.iter().find(|p| &p.name == key) else {
            out.push(Diagnostic::error(
                Code::SchemaError,
                format!("`{}` has no prop `{key}`", e.kind),
                here(),
            ));
            continue;
        };
        match (&p.ty, value) {
            (PropType::Number, PropValue::Number(_)) => {}
            (PropType::NonNegative, PropValue::Number(v)) if *v >= 0.0 => {}
            (PropType::Positive, PropValue::Number(v)) if *v > 0.0 => {}
            (PropType::NonNegative | PropType::Positive, PropValue::Number(v)) => out.push(Diagnostic::error(
                Code::SchemaError,
                format!("prop `{key}` is out of range: {v}"),
                here(),
            )),
            (PropType::Str, PropValue::Str(_)) => {}
            (PropType::NumberOrStr, PropValue::Str(_) | PropValue::Number(_)) => {}
            (PropType::Enum(values), PropValue::Str(s)) => {
                if !values.iter().any(|v| v == s) {
                    out.push(Diagnostic::error(
                        Code::BadEnumValue,
                        format!("prop `{key}` must be one of {}; got `{s}`", values.join("|")),
                        here(),
                    ));
                }
            }
            (PropType::Element(kinds), PropValue::Element(inner)) => {
                if kinds.iter().any(|k| k == &inner.kind) {
                    let inner_path = format!("{path}/@{key}");
                    validate_element(inner, &inner_path, registry, true, out);
                } else {
                    out.push(Diagnostic::error(
                        Code::SchemaError,
                        format!("prop `{key}` must be one of {}; got `{}`", kinds.join("|"), inner.kind),
                        here(),
                    ));
                }
            }
            (ty, v) => out.push(Diagnostic::error(
                Code::SchemaError,
                format!("prop `{key}` expects {}, got {}", ty.describe(), v.type_name()),
                here(),
            )),
        }
    }
}

/// Identifies a naming scope: `None` is the document root.
pub type ScopeId = Option<usize>;

/// Outcome of name resolution. Element indices are pre-order positions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NameTable {
    /// Ref element index to referent element index.
    pub refs: BTreeMap<usize, usize>,
    pub scopes: BTreeMap<ScopeId, BTreeMap<String, usize>>,
}

/// Resolve every ref selector.
///
/// The first selector segment is looked up in the ref's own scope, then in
/// each enclosing scope, and finally across the whole document, where it
/// must be unique. Each further segment is looked up among descendants of
/// the previous match, preferring the match's own scope.
pub fn resolve_names(doc: &Document) -> Result<NameTable, Vec<Diagnostic>> {
    let flat = Flat::new(&doc.root);
    let mut diags = Vec::new();
    let mut table = NameTable::default();
    let mut by_name: HashMap<&str, Vec<usize>> = HashMap::new();
    let scope: Vec<ScopeId> = (0..flat.elems.len()).map(|i| flat.scope_of(i)).collect();

    let mut per_scope: BTreeMap<(ScopeId, &str), Vec<usize>> = BTreeMap::new();
    for (i, e) in flat.elems.iter().enumerate() {
        if let Some(n) = &e.name {
            by_name.entry(n).or_default().push(i);
            per_scope.entry((scope[i], n.as_str())).or_default().push(i);
        }
    }
    for ((s, name), ids) in &per_scope {
        if ids.len() > 1 {
            diags.push(Diagnostic::error(
                Code::DuplicateNameInScope,
                format!("name `{name}` is declared {} times in one scope", ids.len()),
                ids.iter().map(|i| flat.paths[*i].clone()).collect(),
            ));
        } else {
            table.scopes.entry(*s).or_default().insert(name.to_string(), ids[0]);
        }
    }

    for (r, e) in flat.elems.iter().enumerate() {
        if !e.is_ref() {
            continue;
        }
        let Some(select) = &e.select else { continue };
        let shown = select.join("/");
        let mut current: Option<usize> = None;
        let mut failed = false;
        for (depth, seg) in select.iter().enumerate() {
            let candidates: &[usize] = by_name.get(seg.as_str()).map(Vec::as_slice).unwrap_or(&[]);
            let found = if depth == 0 {
                lookup_lexical(&flat, &scope, r, candidates)
            } else {
                let prev = current.expect("set by the previous segment");
                let inside: Vec<usize> = candidates
                    .iter()
                    .copied()
                    .filter(|c| flat.is_descendant(*c, prev))
                    .collect();
                let direct: Vec<usize> = inside.iter().copied().filter(|c| scope[*c] == Some(prev)).collect();
                if direct.len() == 1 {
                    Lookup::Found(direct[0])
                } else {
                    Lookup::from_candidates(inside)
                }
            };
            match found {
                Lookup::Found(i) => current = Some(i),
                Lookup::Missing => {
                    diags.push(Diagnostic::error(
                        Code::UnresolvedName,
                        format!("selector `{shown}` matches nothing (segment `{seg}`)"),
                        vec![flat.paths[r].clone()],
                    ));
                    failed = true;
                    break;
                }
                Lookup::Ambiguous(ids) => {
                    let mut paths = vec![flat.paths[r].clone()];
                    paths.extend(ids.iter().map(|i| flat.paths[*i].clone()));
                    diags.push(Diagnostic::error(
                        Code::AmbiguousName,
                        format!(
                            "selector `{shown}` is ambiguous: segment `{seg}` matches {} elements",
                            ids.len()
                        ),
                        paths,
                    ));
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            continue;
        }
        let referent = current.expect("non-empty selector");
        if referent > r {
            diags.push(Diagnostic::error(
                Code::ForwardReference,
                format!("selector `{shown}` refers to an element that appears later in the document"),
                vec![flat.paths[r].clone(), flat.paths[referent].clone()],
            ));
            continue;
        }
        table.refs.insert(r, referent);
    }
    if diags.is_empty() {
        Ok(table)
    } else {
        Err(diags)
    }
}

enum Lookup {
    Found(usize),
    Missing,
    Ambiguous(Vec<usize>),
}

impl Lookup {
    fn from_candidates(c: Vec<usize>) -> Lookup {
        match c.len() {
            0 => Lookup::Missing,
            1 => Lookup::Found(c[0]),
            _ => Lookup::Ambiguous(c),
        }
    }
}

fn lookup_lexical(flat: &Flat<'_>, scope: &[ScopeId], from: usize, candidates: &[usize]) -> Lookup {
    let mut s = scope[from];
    loop {
        let here: Vec<usize> = candidates.iter().copied().filter(|c| scope[*c] == s).collect();
        if !here.is_empty() {
            return Lookup::from_candidates(here);
        }
        match s {
            Some(named) => s = scope[named],
            None => break,
        }
    }
    let _ = flat;
    Lookup::from_candidates(candidates.to_vec())
}
