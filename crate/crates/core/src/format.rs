//! JSON file formats.
//!
//! A space is `{"points": [...], "dist": [[...], ...]}` with every distance
//! written as a rational string. Output is pretty-printed with a trailing
//! newline, keys in a fixed order, and rationals in reduced form, so equal
//! values always serialize to identical bytes.

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::rational::Rational;
use crate::space::{validate_ultrametric, FiniteUltrametricSpace, SpaceError};

/// The on-disk form of a space, before validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpace {
    pub points: Vec<String>,
    pub dist: Vec<Vec<Rational>>,
}

impl RawSpace {
    pub fn validate(self) -> Result<FiniteUltrametricSpace, SpaceError> {
        validate_ultrametric(self.points, self.dist)
    }
}

impl From<&FiniteUltrametricSpace> for RawSpace {
    fn from(x: &FiniteUltrametricSpace) -> Self {
        RawSpace { points: x.labels().to_vec(), dist: x.matrix() }
    }
}

impl Serialize for FiniteUltrametricSpace {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RawSpace::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteUltrametricSpace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        RawSpace::deserialize(deserializer)?.validate().map_err(de::Error::custom)
    }
}

/// Pretty JSON with a trailing newline. Objects and nested arrays get one
/// entry per line with two-space indentation; arrays of scalars stay on one
/// line, so a distance matrix prints one row per line.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("in-memory serialization");
    let mut out = String::new();
    render(&value, 0, &mut out);
    out.push('\n');
    out
}

fn render(value: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match value {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                render(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                render(v, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::GlueSpec;
    use crate::gallery::{random_space, SpectrumConstraint};
    use crate::space::tests::{isosceles, q};
    use proptest::prelude::*;

    #[test]
    fn space_layout() {
        let json = serde_json::to_string(&isosceles()).unwrap();
        assert_eq!(
            json,
            r#"{"points":["a","b","c"],"dist":[["0","1","2"],["1","0","2"],["2","2","0"]]}"#
        );
    }

    #[test]
    fn parsing_normalizes_and_validates() {
        let x: FiniteUltrametricSpace =
            serde_json::from_str(r#"{"points":["a","b"],"dist":[["0","0.50"],["2/4","0"]]}"#).unwrap();
        assert_eq!(x.dist(0, 1), q("1/2"));
        let bad = serde_json::from_str::<FiniteUltrametricSpace>(
            r#"{"points":["a","b","c"],"dist":[["0","1","3"],["1","0","2"],["3","2","0"]]}"#,
        );
        assert!(bad.unwrap_err().to_string().contains("TriangleViolation(a, c, b)"));
        assert!(serde_json::from_str::<RawSpace>(r#"{"points":[],"dist":[],"x":1}"#).is_err());
    }

    #[test]
    fn glue_spec_layout() {
        let spec: GlueSpec = serde_json::from_str(
            r#"{"x1":{"points":["a"],"dist":[["0"]]},"x2":{"points":["b"],"dist":[["0"]]},"identify":[["a","b"]]}"#,
        )
        .unwrap();
        assert_eq!(spec.identify, vec![("a".to_string(), "b".to_string())]);
    }

    #[test]
    fn rendered_layout() {
        let expected = "{\n  \"points\": [\"a\", \"b\", \"c\"],\n  \"dist\": [\n    [\"0\", \"1\", \"2\"],\n    [\"1\", \"0\", \"2\"],\n    [\"2\", \"2\", \"0\"]\n  ]\n}\n";
        assert_eq!(to_json(&isosceles()), expected);
        assert_eq!(to_json(&serde_json::json!({"z": [], "a": {}})), "{\n  \"z\": [],\n  \"a\": {}\n}\n");
    }

    proptest! {
        #[test]
        fn json_round_trip_is_byte_stable(n in 1usize..8, seed in any::<u64>()) {
            let k = SpectrumConstraint::new(["0", "1/3", "1/2", "7/5"].iter().map(|s| q(s))).unwrap();
            let x = random_space(n, &k, seed).unwrap();
            let s = to_json(&x);
            let back: FiniteUltrametricSpace = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(&back, &x);
            prop_assert_eq!(to_json(&back), s);
        }
    }
}
