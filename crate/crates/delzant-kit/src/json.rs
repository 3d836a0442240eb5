//! JSON wire formats.
//!
//! Scalars serialize as `"p/q"` strings when purely rational and otherwise as
//! an object mapping monomial keys (sorted symbol names joined by `*`, empty
//! string for the rational part) to rational strings:
//! `{"": "3/2", "lambda": "2"}` is 3/2 + 2*lambda. Symbol tables declare each
//! symbol's enclosure, and optionally the radicand of a square-root symbol so
//! comparisons can refine it. Polygon files carry the table and the vertex
//! list; round trips are bit-exact.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::decomposition::{ChopLocator, Decomposition, RootShape};
use crate::error::{Error, Result};
use crate::homology::IntersectionForm;
use crate::minkowski::MinkowskiClass;
use crate::polygon::{DelzantPolygon, Point, UnimodularAffineMap};
use crate::scalar::{parse_rational, Monomial, Rational, Refiner, Scalar, SymbolTable};

// ---------------------------------------------------------------------------
// Scalars
// ---------------------------------------------------------------------------

fn rational_string(r: &Rational) -> String {
    use num_traits::One;
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn scalar_to_value(s: &Scalar) -> Value {
    if let Some(r) = s.as_rational() {
        return Value::String(rational_string(&r));
    }
    let map: serde_json::Map<String, Value> = s
        .terms()
        .map(|(m, c)| (m.to_key(), Value::String(rational_string(c))))
        .collect();
    Value::Object(map)
}

pub fn scalar_from_value(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => Ok(Scalar::from_rational(parse_rational(s)?)),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Scalar::from_int(i))
            } else {
                Err(Error::Parse(format!(
                    "scalar number {n} is not an exact integer; write it as a \"p/q\" string"
                )))
            }
        }
        Value::Object(map) => {
            let mut terms = Vec::new();
            for (key, val) in map {
                let coeff = match val {
                    Value::String(s) => parse_rational(s)?,
                    Value::Number(n) => match n.as_i64() {
                        Some(i) => Rational::from_integer(i.into()),
                        None => {
                            return Err(Error::Parse(format!(
                                "coefficient {n} is not an exact integer"
                            )))
                        }
                    },
                    other => {
                        return Err(Error::Parse(format!(
                            "coefficient must be a rational string, got {other}"
                        )))
                    }
                };
                terms.push((Monomial::parse(key)?, coeff));
            }
            Ok(Scalar::from_terms(terms))
        }
        other => Err(Error::Parse(format!("not a scalar: {other}"))),
    }
}

// ---------------------------------------------------------------------------
// Symbol tables
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolDto {
    pub enclosure: [String; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sqrt_of: Option<String>,
}

pub fn symbols_to_dto(table: &SymbolTable) -> BTreeMap<String, SymbolDto> {
    table
        .symbols()
        .iter()
        .map(|info| {
            let sqrt_of = match &info.refiner {
                Refiner::SqrtOf(q) => Some(rational_string(q)),
                _ => None,
            };
            (
                info.name.clone(),
                SymbolDto {
                    enclosure: [
                        rational_string(&info.enclosure.lo),
                        rational_string(&info.enclosure.hi),
                    ],
                    sqrt_of,
                },
            )
        })
        .collect()
}

pub fn symbols_from_dto(
    dto: &BTreeMap<String, SymbolDto>,
    precision_cap: Option<u32>,
) -> Result<SymbolTable> {
    let mut table = SymbolTable::new();
    if let Some(cap) = precision_cap {
        table = table.with_precision_cap(cap);
    }
    for (name, sym) in dto {
        let lo = parse_rational(&sym.enclosure[0])?;
        let hi = parse_rational(&sym.enclosure[1])?;
        let refiner = match &sym.sqrt_of {
            Some(q) => Refiner::SqrtOf(parse_rational(q)?),
            None => Refiner::Fixed,
        };
        table = table.with_symbol_refined(name, lo, hi, refiner)?;
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// Polygons
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolygonDto {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub symbols: BTreeMap<String, SymbolDto>,
    pub vertices: Vec<[Value; 2]>,
    /// Index of the edge created by the most recent chop, when meaningful.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub new_edge: Option<usize>,
}

pub fn polygon_to_dto(p: &DelzantPolygon) -> PolygonDto {
    PolygonDto {
        symbols: symbols_to_dto(p.table()),
        vertices: p
            .vertices()
            .iter()
            .map(|v| [scalar_to_value(&v.x), scalar_to_value(&v.y)])
            .collect(),
        new_edge: None,
    }
}

pub fn polygon_from_dto(dto: &PolygonDto, precision_cap: Option<u32>) -> Result<DelzantPolygon> {
    let table = Arc::new(symbols_from_dto(&dto.symbols, precision_cap)?);
    let vertices = dto
        .vertices
        .iter()
        .map(|[x, y]| Ok(Point::new(scalar_from_value(x)?, scalar_from_value(y)?)))
        .collect::<Result<Vec<_>>>()?;
    DelzantPolygon::validate(table, vertices)
}

pub fn polygon_to_string(p: &DelzantPolygon) -> String {
    serde_json::to_string(&polygon_to_dto(p)).expect("serialization cannot fail")
}

pub fn polygon_from_str(s: &str, precision_cap: Option<u32>) -> Result<DelzantPolygon> {
    let dto: PolygonDto =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("polygon JSON: {e}")))?;
    polygon_from_dto(&dto, precision_cap)
}

/// Deterministic content key of a canonical polygon: the vertex list alone,
/// in compact JSON. Used for hashing, deduplication, and census ordering.
pub fn polygon_to_canonical_string(p: &DelzantPolygon) -> String {
    let verts: Vec<[Value; 2]> = p
        .vertices()
        .iter()
        .map(|v| [scalar_to_value(&v.x), scalar_to_value(&v.y)])
        .collect();
    serde_json::to_string(&verts).expect("serialization cannot fail")
}

// ---------------------------------------------------------------------------
// Affine maps and decompositions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineMapDto {
    pub matrix: [[i64; 2]; 2],
    pub translation: [Value; 2],
}

pub fn map_to_dto(g: &UnimodularAffineMap) -> AffineMapDto {
    AffineMapDto {
        matrix: g.matrix(),
        translation: [
            scalar_to_value(&g.translation().0),
            scalar_to_value(&g.translation().1),
        ],
    }
}

pub fn map_from_dto(dto: &AffineMapDto) -> Result<UnimodularAffineMap> {
    UnimodularAffineMap::new(
        dto.matrix,
        (
            scalar_from_value(&dto.translation[0])?,
            scalar_from_value(&dto.translation[1])?,
        ),
    )
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChopLocatorDto {
    pub vertex: [Value; 2],
    pub delta: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootDto {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triangle: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hirzebruch: Option<(Value, Value, u32)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionDto {
    pub root: RootDto,
    pub steps: Vec<ChopLocatorDto>,
    pub witness: AffineMapDto,
}

pub fn decomposition_to_dto(d: &Decomposition) -> DecompositionDto {
    let root = match &d.root {
        RootShape::Triangle { lambda } => RootDto {
            triangle: Some(scalar_to_value(lambda)),
            hirzebruch: None,
        },
        RootShape::Hirzebruch { a, b, k } => RootDto {
            triangle: None,
            hirzebruch: Some((scalar_to_value(a), scalar_to_value(b), *k)),
        },
    };
    DecompositionDto {
        root,
        steps: d
            .steps
            .iter()
            .map(|s| ChopLocatorDto {
                vertex: [scalar_to_value(&s.vertex.x), scalar_to_value(&s.vertex.y)],
                delta: scalar_to_value(&s.delta),
            })
            .collect(),
        witness: map_to_dto(&d.witness),
    }
}

pub fn decomposition_from_dto(dto: &DecompositionDto) -> Result<Decomposition> {
    let root = match (&dto.root.triangle, &dto.root.hirzebruch) {
        (Some(lambda), None) => RootShape::Triangle {
            lambda: scalar_from_value(lambda)?,
        },
        (None, Some((a, b, k))) => RootShape::Hirzebruch {
            a: scalar_from_value(a)?,
            b: scalar_from_value(b)?,
            k: *k,
        },
        _ => {
            return Err(Error::Parse(
                "root must be exactly one of `triangle`, `hirzebruch`".into(),
            ))
        }
    };
    let steps = dto
        .steps
        .iter()
        .map(|s| {
            Ok(ChopLocator {
                vertex: Point::new(
                    scalar_from_value(&s.vertex[0])?,
                    scalar_from_value(&s.vertex[1])?,
                ),
                delta: scalar_from_value(&s.delta)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Decomposition {
        root,
        steps,
        witness: map_from_dto(&dto.witness)?,
    })
}

// ---------------------------------------------------------------------------
// Analysis outputs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvariantsDto {
    pub perimeter: Value,
    pub area: Value,
    pub edges: usize,
}

pub fn invariants_to_dto(p: &DelzantPolygon) -> InvariantsDto {
    InvariantsDto {
        perimeter: scalar_to_value(&p.perimeter()),
        area: scalar_to_value(&p.area()),
        edges: p.edge_count(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormDto {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub parity: String,
    pub signature: [usize; 2],
}

pub fn form_to_dto(f: &IntersectionForm) -> FormDto {
    FormDto {
        rank: f.rank,
        gram: f.gram.clone(),
        parity: f.parity.to_string(),
        signature: [f.signature.0, f.signature.1],
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassDto {
    pub d: i64,
    pub m: Vec<i64>,
    pub period: Value,
    pub c1: i64,
}

pub fn minkowski_class_to_dto(class: &MinkowskiClass, period: &Scalar) -> ClassDto {
    ClassDto {
        d: class.d,
        m: class.m.clone(),
        period: scalar_to_value(period),
        c1: class.c1(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn scalar_round_trip() {
        let lam = Scalar::symbol("lambda");
        let s = &(&lam.scale(&rat(2, 1)) + &Scalar::from_rational(rat(3, 2)))
            + &(&lam * &lam).scale(&rat(-1, 3));
        let v = scalar_to_value(&s);
        let back = scalar_from_value(&v).unwrap();
        assert_eq!(back, s);
        // rational scalars collapse to plain strings
        assert_eq!(
            scalar_to_value(&Scalar::from_rational(rat(3, 2))),
            Value::String("3/2".into())
        );
        assert_eq!(
            scalar_to_value(&Scalar::from_int(2)),
            Value::String("2".into())
        );
    }

    #[test]
    fn spec_format_example() {
        // {"": "3/2", "lambda": "2"} means 3/2 + 2*lambda
        let v: Value = serde_json::from_str(r#"{"": "3/2", "lambda": "2"}"#).unwrap();
        let s = scalar_from_value(&v).unwrap();
        let expect = &Scalar::from_rational(rat(3, 2)) + &Scalar::symbol("lambda").scale(&rat(2, 1));
        assert_eq!(s, expect);
    }

    #[test]
    fn polygon_round_trip() {
        let table = Arc::new(
            SymbolTable::new()
                .with_symbol("lambda", rat(3, 1), rat(3, 1))
                .unwrap(),
        );
        let lam = Scalar::symbol("lambda");
        let tri = DelzantPolygon::delzant_triangle(table, &lam).unwrap();
        let s = polygon_to_string(&tri);
        let back = polygon_from_str(&s, None).unwrap();
        assert_eq!(back.vertices(), tri.vertices());
        assert_eq!(polygon_to_string(&back), s);
    }

    #[test]
    fn decomposition_round_trip() {
        let table = Arc::new(SymbolTable::new());
        let tri = DelzantPolygon::delzant_triangle(table.clone(), &Scalar::from_int(3)).unwrap();
        let step = tri.chop(1, &Scalar::one()).unwrap();
        let d = crate::decomposition::decompose(&step.after, false).unwrap();
        let dto = decomposition_to_dto(&d);
        let text = serde_json::to_string(&dto).unwrap();
        let parsed: DecompositionDto = serde_json::from_str(&text).unwrap();
        let back = decomposition_from_dto(&parsed).unwrap();
        assert_eq!(back.root, d.root);
        assert_eq!(back.deltas(), d.deltas());
        let r1 = crate::decomposition::replay(&d, table.clone()).unwrap();
        let r2 = crate::decomposition::replay(&back, table).unwrap();
        assert_eq!(r1.vertices(), r2.vertices());
    }
}
