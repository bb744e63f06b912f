//! Element kind registry: prop schemas plus layout/paint behavior or a
//! composite expansion.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::docformat::Element;
use crate::props::PropValue;
use crate::relations::LayoutCx;
use crate::relations::LayoutError;
use crate::renderer::{PaintNode, SvgWriter};

#[derive(Debug, Clone, PartialEq)]
pub enum PropType {
    Number,
    NonNegative,
    Positive,
    Str,
    NumberOrStr,
    Enum(Vec<String>),
    /// An element embedded as a prop value, restricted to the listed kinds.
    Element(Vec<String>),
}

impl PropType {
    pub fn enumeration(values: &[&str]) -> Self {
        PropType::Enum(values.iter().map(|s| s.to_string()).collect())
    }

    pub fn describe(&self) -> String {
        match self {
            PropType::Number => "a number".into(),
            PropType::NonNegative => "a non-negative number".into(),
            PropType::Positive => "a positive number".into(),
            PropType::Str => "a string".into(),
            PropType::NumberOrStr => "a number or string".into(),
            PropType::Enum(v) => format!("one of {}", v.join("|")),
            PropType::Element(k) => format!("an element of kind {}", k.join("|")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropSpec {
    pub name: String,
    pub ty: PropType,
    pub required: bool,
    pub default: Option<PropValue>,
}

impl PropSpec {
    pub fn required(name: &str, ty: PropType) -> Self {
        Self {
            name: name.into(),
            ty,
            required: true,
            default: None,
        }
    }

    pub fn optional(name: &str, ty: PropType) -> Self {
        Self {
            name: name.into(),
            ty,
            required: false,
            default: None,
        }
    }

    pub fn with_default(name: &str, ty: PropType, default: impl Into<PropValue>) -> Self {
        Self {
            name: name.into(),
            ty,
            required: false,
            default: Some(default.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KindSchema {
    pub props: Vec<PropSpec>,
    pub min_children: usize,
    pub max_children: Option<usize>,
}

impl KindSchema {
    pub fn new(props: Vec<PropSpec>) -> Self {
        Self {
            props,
            min_children: 0,
            max_children: None,
        }
    }

    pub fn leaf(props: Vec<PropSpec>) -> Self {
        Self::new(props).children(0, Some(0))
    }

    pub fn children(mut self, min: usize, max: Option<usize>) -> Self {
        self.min_children = min;
        self.max_children = max;
        self
    }
}

/// A kind with its own layout and paint behavior.
pub trait Primitive: Send + Sync {
    /// Lay out the node after all its children have been laid out.
    fn layout(&self, cx: &mut LayoutCx<'_>) -> Result<(), LayoutError>;

    /// Emit the node's own content in its local frame. Children are painted
    /// afterwards by the renderer.
    fn paint(&self, node: &PaintNode<'_>, out: &mut SvgWriter);
}

pub type Expansion = dyn Fn(&Element) -> Element + Send + Sync;

#[derive(Clone)]
pub enum KindBody {
    Primitive(Arc<dyn Primitive>),
    /// Replaced by the element tree it returns before validation of the
    /// result, name resolution and layout.
    Composite(Arc<Expansion>),
}

impl fmt::Debug for KindBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KindBody::Primitive(_) => f.write_str("Primitive"),
            KindBody::Composite(_) => f.write_str("Composite"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ElementKindSpec {
    pub kind: String,
    pub schema: KindSchema,
    pub body: KindBody,
}

impl ElementKindSpec {
    pub fn primitive(kind: &str, schema: KindSchema, body: impl Primitive + 'static) -> Self {
        Self {
            kind: kind.into(),
            schema,
            body: KindBody::Primitive(Arc::new(body)),
        }
    }

    pub fn composite(
        kind: &str,
        schema: KindSchema,
        expand: impl Fn(&Element) -> Element + Send + Sync + 'static,
    ) -> Self {
        Self {
            kind: kind.into(),
            schema,
            body: KindBody::Composite(Arc::new(expand)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("element kind `{0}` is already registered")]
    DuplicateKind(String),
    #[error("element kind names must be non-empty and cannot be `ref`")]
    InvalidKindName,
}

#[derive(Debug, Clone, Default)]
pub struct Registry {
    kinds: BTreeMap<String, ElementKindSpec>,
}

impl Registry {
    /// Registry holding no kinds at all.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registry holding every built-in mark and relation.
    pub fn standard() -> Self {
        let mut r = Self::empty();
        for spec in crate::relations::standard_kinds() {
            r.register_element_kind(spec, false)
                .expect("built-in kinds are distinct");
        }
        r
    }

    pub fn register_element_kind(&mut self, spec: ElementKindSpec, overwrite: bool) -> Result<(), RegistryError> {
        if spec.kind.is_empty() || spec.kind == crate::docformat::REF_KIND {
            return Err(RegistryError::InvalidKindName);
        }
        if !overwrite && self.kinds.contains_key(&spec.kind) {
            return Err(RegistryError::DuplicateKind(spec.kind));
        }
        self.kinds.insert(spec.kind.clone(), spec);
        Ok(())
    }

    pub fn get(&self, kind: &str) -> Option<&ElementKindSpec> {
        self.kinds.get(kind)
    }

    pub fn kinds(&self) -> impl Iterator<Item = &str> {
        self.kinds.keys().map(String::as_str)
    }
}
