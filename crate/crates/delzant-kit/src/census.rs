//! Grid census of Delzant polygons.
//!
//! Enumerates all canonical forms reachable from standard triangles and
//! trapezoids with parameters on a rational grid by corner choppings of grid
//! sizes, deduplicated by canonical serialization. The output order is the
//! lexicographic order of (edge count, canonical serialization), so runs are
//! byte-identical regardless of scheduling.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::json::polygon_to_canonical_string;
use crate::polygon::{canonical_form, DelzantPolygon};
use crate::scalar::{Rational, Scalar, SymbolTable};

#[derive(Debug, Clone)]
pub struct CensusParams {
    pub max_edges: usize,
    /// Upper bound for grid values (inclusive).
    pub bound: Rational,
    /// Grid spacing; all root parameters and chop sizes are positive
    /// multiples of this.
    pub step: Rational,
    /// Abort when more than this many distinct polygons accumulate.
    pub max_results: Option<usize>,
}

/// All canonical Delzant polygons obtainable from grid triangles and
/// trapezoids by grid choppings, each listed once, sorted by
/// (edge count, canonical serialization).
pub fn census(params: &CensusParams) -> Result<Vec<DelzantPolygon>> {
    if params.max_edges < 3 {
        return Err(Error::Parse("max_edges must be at least 3".into()));
    }
    if !params.step.is_positive() || !params.bound.is_positive() {
        return Err(Error::Parse("bound and step must be positive".into()));
    }
    let table = Arc::new(SymbolTable::new());
    let mut grid = Vec::new();
    let mut v = params.step.clone();
    while v <= params.bound {
        grid.push(Scalar::from_rational(v.clone()));
        v = &v + &params.step;
    }

    let mut out: BTreeMap<(usize, String), DelzantPolygon> = BTreeMap::new();
    let mut queue: Vec<DelzantPolygon> = Vec::new();

    let push = |poly: &DelzantPolygon,
                out: &mut BTreeMap<(usize, String), DelzantPolygon>,
                queue: &mut Vec<DelzantPolygon>|
     -> Result<()> {
        let canon = canonical_form(poly)?.polygon;
        let key = (canon.edge_count(), polygon_to_canonical_string(&canon));
        let seen = out.len();
        if let Entry::Vacant(e) = out.entry(key) {
            if let Some(cap) = params.max_results {
                if seen >= cap {
                    return Err(Error::ResourceCapExceeded(format!(
                        "census exceeded {cap} polygons"
                    )));
                }
            }
            queue.push(canon.clone());
            e.insert(canon);
        }
        Ok(())
    };

    // roots: triangles and all valid trapezoids on the grid
    for lambda in &grid {
        let tri = DelzantPolygon::delzant_triangle(table.clone(), lambda)?;
        push(&tri, &mut out, &mut queue)?;
    }
    if params.max_edges >= 4 {
        for a in &grid {
            for b in &grid {
                let mut k = 0u32;
                loop {
                    // valid while a - k*b/2 > 0; grid data is rational so the
                    // comparison is exact
                    let slack = a - &b.half().scale(&crate::scalar::rat_int(k as i64));
                    match slack.as_rational() {
                        Some(r) if r.is_positive() => {}
                        _ => break,
                    }
                    let h = DelzantPolygon::hirzebruch_trapezoid(table.clone(), a, b, k)?;
                    push(&h, &mut out, &mut queue)?;
                    k += 1;
                }
            }
        }
    }

    // chop everything reachable, staying on the grid and under the edge cap
    while let Some(poly) = queue.pop() {
        if poly.edge_count() >= params.max_edges {
            continue;
        }
        for v in 0..poly.edge_count() {
            for delta in &grid {
                match poly.chop(v, delta) {
                    Ok(step) => push(&step.after, &mut out, &mut queue)?,
                    Err(Error::ChopTooLarge) => continue,
                    Err(e) => return Err(e),
                }
            }
        }
    }

    Ok(out.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::congruent;
    use crate::scalar::{rat, rat_int};

    fn run(max_edges: usize, bound: i64, step: (i64, i64)) -> Vec<DelzantPolygon> {
        census(&CensusParams {
            max_edges,
            bound: rat_int(bound),
            step: rat(step.0, step.1),
            max_results: None,
        })
        .unwrap()
    }

    #[test]
    fn triangles_only() {
        let polys = run(3, 2, (1, 1));
        assert_eq!(polys.len(), 2);
        let table = Arc::new(SymbolTable::new());
        for (poly, lambda) in polys.iter().zip([1i64, 2]) {
            let tri =
                DelzantPolygon::delzant_triangle(table.clone(), &Scalar::from_int(lambda)).unwrap();
            assert!(congruent(poly, &tri).unwrap());
        }
    }

    #[test]
    fn four_edge_census_contains_named_shapes() {
        let polys = run(4, 2, (1, 1));
        let table = Arc::new(SymbolTable::new());
        let mut expected = vec![
            DelzantPolygon::delzant_triangle(table.clone(), &Scalar::one()).unwrap(),
            DelzantPolygon::delzant_triangle(table.clone(), &Scalar::from_int(2)).unwrap(),
        ];
        for (a, b, k) in [(1i64, 1i64, 0u32), (2, 1, 0), (2, 1, 1), (2, 2, 0), (2, 2, 1)] {
            expected.push(
                DelzantPolygon::hirzebruch_trapezoid(
                    table.clone(),
                    &Scalar::from_int(a),
                    &Scalar::from_int(b),
                    k,
                )
                .unwrap(),
            );
        }
        for e in &expected {
            assert!(
                polys.iter().any(|p| congruent(p, e).unwrap()),
                "census is missing a required polygon"
            );
        }
        // all valid, all distinct, self-intersection identity holds
        for p in &polys {
            let n = p.edge_count() as i64;
            let sum: i64 = p.self_intersections().iter().sum();
            assert_eq!(sum, 12 - 3 * n);
        }
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                assert!(!congruent(&polys[i], &polys[j]).unwrap());
            }
        }
    }

    #[test]
    fn deterministic_output() {
        let a = run(5, 2, (1, 1));
        let b = run(5, 2, (1, 1));
        let to_strings = |v: &[DelzantPolygon]| -> Vec<String> {
            v.iter().map(polygon_to_canonical_string).collect()
        };
        assert_eq!(to_strings(&a), to_strings(&b));
    }

    #[test]
    fn resource_cap() {
        let err = census(&CensusParams {
            max_edges: 6,
            bound: rat_int(3),
            step: rat(1, 2),
            max_results: Some(5),
        })
        .unwrap_err();
        assert!(matches!(err, Error::ResourceCapExceeded(_)));
    }
}
