use super::primitive::{Primitive, PrimitiveSpec};
use super::SetError;
use crate::geom::{Point, ProjectionResult};
use serde::{Deserialize, Serialize};

/// A primitive with optional declared reach.
#[derive(Debug, Clone)]
pub struct Item {
    pub primitive: Primitive,
    pub reach: Option<f64>,
}

impl Item {
    pub fn new(primitive: Primitive) -> Self {
        Item { primitive, reach: None }
    }

    pub fn with_reach(mut self, reach: f64) -> Self {
        self.reach = Some(reach);
        self
    }

    /// Declared reach, falling back to the primitive's known reach.
    pub fn reach(&self) -> Option<f64> {
        self.reach.or_else(|| self.primitive.default_reach())
    }
}

impl From<Primitive> for Item {
    fn from(p: Primitive) -> Self {
        Item::new(p)
    }
}

/// Finite union of closed primitives.
#[derive(Debug, Clone, Default)]
pub struct Scene {
    pub name: String,
    pub items: Vec<Item>,
}

impl Scene {
    pub fn new(name: impl Into<String>, items: Vec<Item>) -> Self {
        Scene { name: name.into(), items }
    }

    pub fn of(name: impl Into<String>, prims: Vec<Primitive>) -> Self {
        Scene::new(name, prims.into_iter().map(Item::new).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn union(&self, other: &Scene) -> Scene {
        let mut items = self.items.clone();
        items.extend(other.items.iter().cloned());
        Scene { name: format!("{} ∪ {}", self.name, other.name), items }
    }

    /// Distance; `+∞` for the empty scene.
    pub fn dist(&self, z: Point) -> f64 {
        self.items.iter().map(|i| i.primitive.distance(z).distance).fold(f64::INFINITY, f64::min)
    }

    pub fn distance(&self, z: Point) -> Result<ProjectionResult, SetError> {
        scene_distance(z, self)
    }
}

/// `d_S(z) = min_i d_{P_i}(z)` with the union of the nearest points.
pub fn scene_distance(z: Point, s: &Scene) -> Result<ProjectionResult, SetError> {
    s.items
        .iter()
        .map(|i| i.primitive.distance(z))
        .reduce(ProjectionResult::merge)
        .ok_or(SetError::EmptyScene)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemSpec {
    #[serde(flatten)]
    pub primitive: PrimitiveSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reach: Option<f64>,
}

/// Scene document: `{"primitives": [{"kind": ..., ...}], "metadata": ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub primitives: Vec<ItemSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

impl SceneSpec {
    pub fn from_json(text: &str) -> Result<Self, SetError> {
        serde_json::from_str(text).map_err(|e| SetError::Malformed(e.to_string()))
    }

    pub fn build(&self) -> Result<Scene, SetError> {
        let mut items = Vec::with_capacity(self.primitives.len());
        for (k, it) in self.primitives.iter().enumerate() {
            if let Some(r) = it.reach {
                if !(r > 0.0) {
                    return Err(SetError::Malformed(format!("primitive {k}: reach must be > 0, got {r}")));
                }
            }
            let primitive = it.primitive.build().map_err(|e| match e {
                SetError::Malformed(m) => SetError::Malformed(format!("primitive {k}: {m}")),
                other => other,
            })?;
            items.push(Item { primitive, reach: it.reach });
        }
        Ok(Scene { name: self.name.clone().unwrap_or_default(), items })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_and_half_plane() {
        let s = SceneSpec::from_json(
            r#"{"primitives": [{"kind": "point", "at": [0, 0]},
                               {"kind": "half-plane", "normal": [0, 1], "offset": -1}]}"#,
        )
        .unwrap()
        .build()
        .unwrap();
        assert_eq!(s.distance(Point::new(0.0, 0.5)).unwrap().distance, 0.5);
    }

    #[test]
    fn disk_scene() {
        let s = SceneSpec::from_json(r#"{"primitives": [{"kind": "disk", "center": [0, 0], "radius": 1, "reach": 2}]}"#)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(s.distance(Point::new(2.0, 0.0)).unwrap().distance, 1.0);
        assert_eq!(s.items[0].reach, Some(2.0));
    }

    #[test]
    fn empty_scene_is_an_error() {
        assert_eq!(scene_distance(Point::ORIGIN, &Scene::default()), Err(SetError::EmptyScene));
    }

    #[test]
    fn spec_round_trip() {
        let text = r#"{"primitives":[{"kind":"graph","f":{"name":"quadratic"},"interval":[-1.0,1.0]},
            {"kind":"tube","base":{"kind":"point","at":[1.0,2.0]},"r":0.5}]}"#;
        let spec = SceneSpec::from_json(text).unwrap();
        let again = SceneSpec::from_json(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(spec, again);
        let s = spec.build().unwrap();
        assert!((s.dist(Point::new(1.0, 2.0)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bad_primitives_are_rejected() {
        for text in [
            r#"{"primitives":[{"kind":"disk","center":[0,0],"radius":-1}]}"#,
            r#"{"primitives":[{"kind":"graph","f":{"name":"quadratic"},"interval":[1.0,-1.0]}]}"#,
            r#"{"primitives":[{"kind":"blob"}]}"#,
            r#"{"primitives":[{"kind":"point","at":[0,0],"reach":0}]}"#,
        ] {
            assert!(SceneSpec::from_json(text).and_then(|s| s.build()).is_err(), "{text}");
        }
    }
}
