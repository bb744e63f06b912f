//! Partial bounding boxes, per-field ownership, and translations.
//!
//! A [`PartialBBox`] stores any subset of the eight box dimensions. Reads
//! derive missing dimensions from whatever is stored on the same axis; writes
//! are recorded together with the node that performed them so that a second,
//! disagreeing writer can be reported.

use std::fmt;

use thiserror::Error;

/// Absolute tolerance used for every consistency and equality check.
pub const TOLERANCE: f64 = 1e-6;

/// Identifier of a scenegraph node. Ids are dense pre-order indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// Position of a dimension along its axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Start,
    Center,
    End,
    Extent,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::Horizontal, Axis::Vertical];

    pub fn other(self) -> Axis {
        match self {
            Axis::Horizontal => Axis::Vertical,
            Axis::Vertical => Axis::Horizontal,
        }
    }

    pub fn dim(self, role: Role) -> Dim {
        use Dim::*;
        match (self, role) {
            (Axis::Horizontal, Role::Start) => Left,
            (Axis::Horizontal, Role::Center) => CenterX,
            (Axis::Horizontal, Role::End) => Right,
            (Axis::Horizontal, Role::Extent) => Width,
            (Axis::Vertical, Role::Start) => Top,
            (Axis::Vertical, Role::Center) => CenterY,
            (Axis::Vertical, Role::End) => Bottom,
            (Axis::Vertical, Role::Extent) => Height,
        }
    }

    pub fn start(self) -> Dim {
        self.dim(Role::Start)
    }

    pub fn extent(self) -> Dim {
        self.dim(Role::Extent)
    }

    /// The four dimensions on this axis, in start/center/end/extent order.
    pub fn dims(self) -> [Dim; 4] {
        [
            self.dim(Role::Start),
            self.dim(Role::Center),
            self.dim(Role::End),
            self.dim(Role::Extent),
        ]
    }

    fn index(self) -> usize {
        match self {
            Axis::Horizontal => 0,
            Axis::Vertical => 1,
        }
    }

    pub fn translate_name(self) -> &'static str {
        match self {
            Axis::Horizontal => "x",
            Axis::Vertical => "y",
        }
    }
}

/// One of the eight bounding-box dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dim {
    Left,
    CenterX,
    Right,
    Width,
    Top,
    CenterY,
    Bottom,
    Height,
}

impl Dim {
    pub const ALL: [Dim; 8] = [
        Dim::Left,
        Dim::CenterX,
        Dim::Right,
        Dim::Width,
        Dim::Top,
        Dim::CenterY,
        Dim::Bottom,
        Dim::Height,
    ];

    pub fn axis(self) -> Axis {
        match self {
            Dim::Left | Dim::CenterX | Dim::Right | Dim::Width => Axis::Horizontal,
            _ => Axis::Vertical,
        }
    }

    pub fn role(self) -> Role {
        match self {
            Dim::Left | Dim::Top => Role::Start,
            Dim::CenterX | Dim::CenterY => Role::Center,
            Dim::Right | Dim::Bottom => Role::End,
            Dim::Width | Dim::Height => Role::Extent,
        }
    }

    pub fn is_extent(self) -> bool {
        self.role() == Role::Extent
    }

    pub fn name(self) -> &'static str {
        match self {
            Dim::Left => "left",
            Dim::CenterX => "centerX",
            Dim::Right => "right",
            Dim::Width => "width",
            Dim::Top => "top",
            Dim::CenterY => "centerY",
            Dim::Bottom => "bottom",
            Dim::Height => "height",
        }
    }

    pub fn from_name(name: &str) -> Option<Dim> {
        Dim::ALL.into_iter().find(|d| d.name() == name)
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A writable scenegraph field: a bbox dimension or a translate component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    BBox(Dim),
    Translate(Axis),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::BBox(d) => write!(f, "bbox.{d}"),
            Field::Translate(a) => write!(f, "translate.{}", a.translate_name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("stored {axis:?} dimensions are inconsistent")]
    InconsistentBBox { axis: Axis },
    #[error("{field} is owned by {existing_owner}; write from {writer} rejected")]
    DimensionConflict {
        field: Field,
        existing_owner: NodeId,
        writer: NodeId,
    },
    #[error("{field} must be non-negative, got {value}")]
    InvalidExtent { field: Dim, value: f64 },
    #[error("non-finite value {value} for {field}")]
    NonFinite { field: Field, value: f64 },
    #[error("translation along {axis:?} is undefined")]
    UndefinedTransform { axis: Axis },
}

/// Derived view of one axis: start and extent are enough to produce the rest.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AxisSpan {
    pub start: Option<f64>,
    pub center: Option<f64>,
    pub end: Option<f64>,
    pub extent: Option<f64>,
}

impl AxisSpan {
    pub fn get(&self, role: Role) -> Option<f64> {
        match role {
            Role::Start => self.start,
            Role::Center => self.center,
            Role::End => self.end,
            Role::Extent => self.extent,
        }
    }

    /// Shift every position by `offset`; extent is unaffected.
    pub fn shifted(self, offset: f64) -> AxisSpan {
        AxisSpan {
            start: self.start.map(|v| v + offset),
            center: self.center.map(|v| v + offset),
            end: self.end.map(|v| v + offset),
            extent: self.extent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PartialBBox {
    values: [Option<f64>; 8],
}

impl PartialBBox {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder used mostly by tests.
    pub fn with(mut self, dim: Dim, value: f64) -> Self {
        self.values[dim.index()] = Some(value);
        self
    }

    /// The value stored for `dim`, without derivation.
    pub fn stored(&self, dim: Dim) -> Option<f64> {
        self.values[dim.index()]
    }

    /// Stored value of `dim`, or its derivation from the other stored values
    /// on the same axis.
    pub fn get(&self, dim: Dim) -> Result<Option<f64>, GeometryError> {
        Ok(self.span(dim.axis())?.get(dim.role()))
    }

    /// Every derivable dimension on `axis`.
    pub fn span(&self, axis: Axis) -> Result<AxisSpan, GeometryError> {
        let [s, c, e, x] = axis.dims().map(|d| self.stored(d));
        // (start, extent) from the first sufficient pair
        let solved = match (s, c, e, x) {
            (Some(s), _, _, Some(x)) => Some((s, x)),
            (Some(s), _, Some(e), _) => Some((s, e - s)),
            (Some(s), Some(c), _, _) => Some((s, 2.0 * (c - s))),
            (_, Some(c), _, Some(x)) => Some((c - x / 2.0, x)),
            (_, _, Some(e), Some(x)) => Some((e - x, x)),
            (_, Some(c), Some(e), _) => {
                let x = 2.0 * (e - c);
                Some((e - x, x))
            }
            _ => None,
        };
        let Some((start, extent)) = solved else {
            return Ok(AxisSpan {
                start: s,
                center: c,
                end: e,
                extent: x,
            });
        };
        let derived = AxisSpan {
            start: Some(start),
            center: Some(start + extent / 2.0),
            end: Some(start + extent),
            extent: Some(extent),
        };
        for (stored, role) in [(s, Role::Start), (c, Role::Center), (e, Role::End), (x, Role::Extent)] {
            if let (Some(v), Some(d)) = (stored, derived.get(role)) {
                if (v - d).abs() > TOLERANCE {
                    return Err(GeometryError::InconsistentBBox { axis });
                }
            }
        }
        // stored values win over derived ones
        Ok(AxisSpan {
            start: s.or(derived.start),
            center: c.or(derived.center),
            end: e.or(derived.end),
            extent: x.or(derived.extent),
        })
    }

    /// Whether any position (not extent) on `axis` is derivable.
    pub fn has_position(&self, axis: Axis) -> bool {
        [Role::Start, Role::Center, Role::End]
            .into_iter()
            .any(|r| self.stored(axis.dim(r)).is_some())
    }

    /// Ownership-checked write.
    ///
    /// Only the first writer of a field may store it; the same writer may
    /// repeat an identical value.
    pub fn set(&mut self, owners: &mut BBoxOwners, dim: Dim, value: f64, writer: NodeId) -> Result<(), GeometryError> {
        if !value.is_finite() {
            return Err(GeometryError::NonFinite {
                field: Field::BBox(dim),
                value,
            });
        }
        if dim.is_extent() && value < 0.0 {
            return Err(GeometryError::InvalidExtent { field: dim, value });
        }
        match (owners.get(dim), self.stored(dim)) {
            (Some(owner), Some(existing)) => {
                if owner == writer && (existing - value).abs() <= TOLERANCE {
                    Ok(())
                } else {
                    Err(GeometryError::DimensionConflict {
                        field: Field::BBox(dim),
                        existing_owner: owner,
                        writer,
                    })
                }
            }
            _ => {
                self.values[dim.index()] = Some(value);
                owners.0[dim.index()] = Some(writer);
                Ok(())
            }
        }
    }
}

/// Owner of each stored bbox field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BBoxOwners([Option<NodeId>; 8]);

impl BBoxOwners {
    pub fn get(&self, dim: Dim) -> Option<NodeId> {
        self.0[dim.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Dim, NodeId)> + '_ {
        Dim::ALL.into_iter().filter_map(|d| self.get(d).map(|o| (d, o)))
    }
}

/// Local-to-parent offset. Components stay undefined until someone writes or
/// materializes them.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Translate {
    pub x: Option<f64>,
    pub y: Option<f64>,
}

impl Translate {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x: Some(x), y: Some(y) }
    }

    pub fn get(&self, axis: Axis) -> Option<f64> {
        match axis {
            Axis::Horizontal => self.x,
            Axis::Vertical => self.y,
        }
    }

    pub fn slot(&mut self, axis: Axis) -> &mut Option<f64> {
        match axis {
            Axis::Horizontal => &mut self.x,
            Axis::Vertical => &mut self.y,
        }
    }
}

/// Owner of each defined translate component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TransformOwners([Option<NodeId>; 2]);

impl TransformOwners {
    pub fn get(&self, axis: Axis) -> Option<NodeId> {
        self.0[axis.index()]
    }

    pub fn set(&mut self, axis: Axis, owner: NodeId) {
        self.0[axis.index()] = Some(owner);
    }
}

/// Component-wise sum of a chain of translations.
pub fn compose_translations(chain: &[Translate]) -> Result<Translate, GeometryError> {
    let mut total = (0.0, 0.0);
    for t in chain {
        total.0 +=
            t.x.ok_or(GeometryError::UndefinedTransform { axis: Axis::Horizontal })?;
        total.1 += t.y.ok_or(GeometryError::UndefinedTransform { axis: Axis::Vertical })?;
    }
    Ok(Translate::new(total.0, total.1))
}
