use std::collections::BTreeMap;

use crate::docformat::Element;

#[derive(Debug, Clone, PartialEq)]
pub enum PropValue {
    Number(f64),
    Str(String),
    Bool(bool),
    Element(Box<Element>),
}

impl PropValue {
    pub fn type_name(&self) -> &'static str {
        match self {
            PropValue::Number(_) => "number",
            PropValue::Str(_) => "string",
            PropValue::Bool(_) => "boolean",
            PropValue::Element(_) => "element",
        }
    }
}

/// Element properties keyed by name. Sorted so iteration is deterministic.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Props(pub BTreeMap<String, PropValue>);

impl Props {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: PropValue) -> Self {
        self.0.insert(key.to_owned(), value);
        self
    }

    pub fn get(&self, key: &str) -> Option<&PropValue> {
        self.0.get(key)
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        match self.0.get(key) {
            Some(PropValue::Number(n)) => Some(*n),
            _ => None,
        }
    }

    pub fn str(&self, key: &str) -> Option<&str> {
        match self.0.get(key) {
            Some(PropValue::Str(s)) => Some(s),
            _ => None,
        }
    }

    pub fn element(&self, key: &str) -> Option<&Element> {
        match self.0.get(key) {
            Some(PropValue::Element(e)) => Some(e),
            _ => None,
        }
    }

    pub fn insert(&mut self, key: impl Into<String>, value: PropValue) {
        self.0.insert(key.into(), value);
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &PropValue)> {
        self.0.iter()
    }
}
