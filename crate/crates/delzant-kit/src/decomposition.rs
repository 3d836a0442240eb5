//! Recursive structure of Delzant polygons.
//!
//! Every Delzant polygon is congruent to a standard triangle or a Hirzebruch
//! trapezoid with an ordered sequence of corner choppings applied. This
//! module finds such a presentation (by repeatedly blowing down an edge of
//! self-intersection -1), replays one, and labels the root by the
//! symplectomorphism type it determines.
//!
//! Decompositions are not unique; the contract is "some valid decomposition,
//! deterministic for a given input". Inputs are canonicalized first, so
//! congruent polygons decompose with equal root parameters and size
//! multisets.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polygon::{canonical_form, DelzantPolygon, Point, UnimodularAffineMap};
use crate::scalar::{rat, Scalar, SymbolTable};

/// The root of a decomposition: a standard triangle or trapezoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootShape {
    Triangle { lambda: Scalar },
    Hirzebruch { a: Scalar, b: Scalar, k: u32 },
}

impl RootShape {
    /// The root in standard position.
    pub fn standard_polygon(&self, table: Arc<SymbolTable>) -> Result<DelzantPolygon> {
        match self {
            RootShape::Triangle { lambda } => DelzantPolygon::delzant_triangle(table, lambda),
            RootShape::Hirzebruch { a, b, k } => {
                DelzantPolygon::hirzebruch_trapezoid(table, a, b, *k)
            }
        }
    }

    pub fn perimeter(&self) -> Scalar {
        match self {
            RootShape::Triangle { lambda } => lambda.scale(&rat(3, 1)),
            RootShape::Hirzebruch { a, b, .. } => (a + b).scale(&rat(2, 1)),
        }
    }

    pub fn area(&self) -> Scalar {
        match self {
            RootShape::Triangle { lambda } => (lambda * lambda).half(),
            RootShape::Hirzebruch { a, b, .. } => a * b,
        }
    }

    pub fn hirzebruch_k(&self) -> Option<u32> {
        match self {
            RootShape::Triangle { .. } => None,
            RootShape::Hirzebruch { k, .. } => Some(*k),
        }
    }
}

/// Symplectomorphism-type label of the manifold a root determines. Even-k
/// trapezoids are the trivial sphere bundle, odd-k ones reduce to the one
/// point blow-up of the projective plane.
pub fn symplectomorphism_type(root: &RootShape) -> String {
    match root {
        RootShape::Triangle { lambda } => format!("CP²({lambda})"),
        RootShape::Hirzebruch { a, b, k } => {
            if k % 2 == 0 {
                format!("S²×S²({a},{b})")
            } else {
                format!("CP²-one-blow-up({a},{b})")
            }
        }
    }
}

/// One replayable chop, located by exact vertex coordinates in the frame of
/// the standard root polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChopLocator {
    pub vertex: Point,
    pub delta: Scalar,
}

/// A root plus the chopping sequence and the congruence carrying the replayed
/// polygon onto the original input.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub root: RootShape,
    pub steps: Vec<ChopLocator>,
    pub witness: UnimodularAffineMap,
}

impl Decomposition {
    pub fn deltas(&self) -> Vec<Scalar> {
        self.steps.iter().map(|s| s.delta.clone()).collect()
    }
}

/// Recognize a 4-edge polygon as a Hirzebruch trapezoid.
///
/// The self-intersection cycle of a trapezoid reads (0, -k, 0, k); the two
/// 0-edges are the sides of length b and the perimeter then determines a.
/// For k = 0 the roles of a and b are normalized so that a >= b; for k = 1,
/// trapezoids with a < b genuinely occur (the small choppings of a triangle)
/// and are returned as-is.
pub fn hirzebruch_normalize(p: &DelzantPolygon) -> Result<RootShape> {
    if p.edge_count() != 4 {
        return Err(Error::NotTrapezoid);
    }
    let s = p.self_intersections();
    let table = p.table();
    let (k, neg_at) = match s.iter().position(|&v| v < 0) {
        None => {
            if s != vec![0, 0, 0, 0] {
                return Err(Error::NotTrapezoid);
            }
            (0u32, 1usize) // rectangle; any edge can play the slanted role
        }
        Some(i) => {
            let k = (-s[i]) as u32;
            // the full cycle must read (0, -k, 0, k) around from the -k edge
            if s[(i + 3) % 4] != 0 || s[(i + 1) % 4] != 0 || s[(i + 2) % 4] != k as i64 {
                return Err(Error::NotTrapezoid);
            }
            (k, i)
        }
    };
    let side1 = &p.edge((neg_at + 3) % 4).rational_length;
    let side2 = &p.edge((neg_at + 1) % 4).rational_length;
    if side1 != side2 {
        return Err(Error::NotTrapezoid);
    }
    let b = side1.clone();
    let a = (&p.perimeter() - &b.scale(&rat(2, 1))).half();
    // cross-check the two remaining edge lengths: a -+ k*b/2
    let kb = b.half().scale(&rat(k as i64, 1));
    let top = &a - &kb;
    let bottom = &a + &kb;
    let got_top = &p.edge(neg_at).rational_length;
    let got_bottom = &p.edge((neg_at + 2) % 4).rational_length;
    if *got_top != top || *got_bottom != bottom {
        return Err(Error::NotTrapezoid);
    }
    if k == 0 {
        return match table.compare(&a, &b)? {
            Ordering::Less => Ok(RootShape::Hirzebruch { a: b, b: a, k: 0 }),
            _ => Ok(RootShape::Hirzebruch { a, b, k: 0 }),
        };
    }
    Ok(RootShape::Hirzebruch { a, b, k })
}

/// The congruence carrying `from` onto `to`, via their canonical forms.
fn congruence_between(from: &DelzantPolygon, to: &DelzantPolygon) -> Result<UnimodularAffineMap> {
    let cf = canonical_form(from)?;
    let ct = canonical_form(to)?;
    if cf.polygon != ct.polygon {
        return Err(Error::Internal(
            "congruence_between called on non-congruent polygons".into(),
        ));
    }
    Ok(ct.witness.inverse().compose(&cf.witness))
}

/// Deterministic choice among blow-downable edges: shortest rational length
/// first, ties broken by index. The input is already canonical, so index
/// order is congruence-invariant.
fn pick_blow_down(p: &DelzantPolygon, candidates: &[usize]) -> Result<usize> {
    let table = p.table();
    let mut best = candidates[0];
    for &e in &candidates[1..] {
        if table.compare(&p.edge(e).rational_length, &p.edge(best).rational_length)?
            == Ordering::Less
        {
            best = e;
        }
    }
    Ok(best)
}

/// Decompose a polygon into a root and chopping sequence.
///
/// With `prefer_odd_k`, the blow-down at the final five-edge stage is chosen
/// so that the trapezoid root has odd k, which is always possible there.
pub fn decompose(p: &DelzantPolygon, prefer_odd_k: bool) -> Result<Decomposition> {
    let table = p.table().clone();
    let canon = canonical_form(p)?;
    let c = canon.polygon;
    let g_p = canon.witness; // maps p onto c

    // Blow down to four (or stay at three) edges, recording chops in the
    // shared coordinate frame of c.
    let mut cur = c;
    let mut recorded: Vec<(Point, Scalar)> = Vec::new();
    while cur.edge_count() > 4 {
        let candidates: Vec<usize> = cur
            .edges()
            .iter()
            .filter(|e| e.self_intersection == -1)
            .map(|e| e.index)
            .collect();
        if candidates.is_empty() {
            return Err(Error::NoBlowDownableEdge);
        }
        let at_five = cur.edge_count() == 5;
        let chosen = if at_five && prefer_odd_k {
            let mut keyed: Vec<(usize, &Scalar)> = candidates
                .iter()
                .map(|&e| (e, &cur.edge(e).rational_length))
                .collect();
            // certified sort; surface Undecidable instead of guessing
            let mut sort_err: Option<Error> = None;
            keyed.sort_by(|a, b| match table.compare(a.1, b.1) {
                Ok(ord) => ord.then(a.0.cmp(&b.0)),
                Err(e) => {
                    sort_err.get_or_insert(e);
                    a.0.cmp(&b.0)
                }
            });
            if let Some(e) = sort_err {
                return Err(e);
            }
            let mut odd_choice = None;
            for (e, _) in keyed {
                let (q, _, _) = cur.blow_down(e)?;
                if let RootShape::Hirzebruch { k, .. } = hirzebruch_normalize(&q)? {
                    if k % 2 == 1 {
                        odd_choice = Some(e);
                        break;
                    }
                }
            }
            odd_choice.ok_or_else(|| {
                Error::Internal("no odd-k blow-down at the five-edge stage".into())
            })?
        } else {
            pick_blow_down(&cur, &candidates)?
        };
        let (down, delta, vertex) = cur.blow_down(chosen)?;
        recorded.push((down.vertices()[vertex].clone(), delta));
        cur = down;
    }

    let root = if cur.edge_count() == 3 {
        RootShape::Triangle {
            lambda: cur.perimeter().scale(&rat(1, 3)),
        }
    } else {
        hirzebruch_normalize(&cur)?
    };
    let std_root = root.standard_polygon(table)?;
    let w0 = congruence_between(&std_root, &cur)?; // std frame -> c frame
    let w0_inv = w0.inverse();

    recorded.reverse();
    let steps = recorded
        .into_iter()
        .map(|(pt, delta)| ChopLocator {
            vertex: w0_inv.apply_point(&pt),
            delta,
        })
        .collect();

    // the replayed polygon lives in the std frame; the witness carries it to p
    let witness = g_p.inverse().compose(&w0);
    Ok(Decomposition {
        root,
        steps,
        witness,
    })
}

/// Rebuild the polygon of a decomposition: standard root, chops, witness.
pub fn replay(d: &Decomposition, table: Arc<SymbolTable>) -> Result<DelzantPolygon> {
    let mut r = d.root.standard_polygon(table)?;
    for step in &d.steps {
        let idx = r.vertex_index_of(&step.vertex).ok_or_else(|| {
            Error::InconsistentDecomposition(format!(
                "no vertex at ({}, {})",
                step.vertex.x, step.vertex.y
            ))
        })?;
        r = r.chop(idx, &step.delta)?.after.as_ref().clone();
    }
    r.apply_map(&d.witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::congruent;
    use crate::scalar::rat_int;

    fn table() -> Arc<SymbolTable> {
        Arc::new(SymbolTable::new())
    }

    fn normalize_round_trip(a: i64, b: i64, k: u32) {
        let t = table();
        let h =
            DelzantPolygon::hirzebruch_trapezoid(t, &Scalar::from_int(a), &Scalar::from_int(b), k)
                .unwrap();
        let root = hirzebruch_normalize(&h).unwrap();
        assert_eq!(
            root,
            RootShape::Hirzebruch {
                a: Scalar::from_int(a),
                b: Scalar::from_int(b),
                k,
            }
        );
    }

    #[test]
    fn hirzebruch_round_trips() {
        normalize_round_trip(3, 1, 2);
        normalize_round_trip(5, 2, 1);
        normalize_round_trip(2, 2, 0);
    }

    #[test]
    fn unit_square_is_h110() {
        let sq = DelzantPolygon::square(table(), &Scalar::one()).unwrap();
        assert_eq!(
            hirzebruch_normalize(&sq).unwrap(),
            RootShape::Hirzebruch {
                a: Scalar::one(),
                b: Scalar::one(),
                k: 0,
            }
        );
    }

    #[test]
    fn chopped_triangle_is_h221() {
        let tri = DelzantPolygon::delzant_triangle(table(), &Scalar::from_int(3)).unwrap();
        let step = tri.chop(1, &Scalar::from_int(1)).unwrap();
        assert_eq!(
            hirzebruch_normalize(&step.after).unwrap(),
            RootShape::Hirzebruch {
                a: Scalar::from_int(2),
                b: Scalar::from_int(2),
                k: 1,
            }
        );
    }

    #[test]
    fn small_triangle_chop_has_short_average_width() {
        // chopping a triangle by less than a third of its side gives a
        // trapezoid with a < b and k = 1
        let tri = DelzantPolygon::delzant_triangle(table(), &Scalar::from_int(3)).unwrap();
        let step = tri.chop(1, &Scalar::from_rational(rat(1, 2))).unwrap();
        let root = hirzebruch_normalize(&step.after).unwrap();
        assert_eq!(
            root,
            RootShape::Hirzebruch {
                a: Scalar::from_rational(rat(7, 4)),
                b: Scalar::from_rational(rat(5, 2)),
                k: 1,
            }
        );
    }

    #[test]
    fn triangle_decomposition() {
        let t = Arc::new(
            SymbolTable::new()
                .with_symbol("lambda", rat(3, 2), rat(5, 2))
                .unwrap(),
        );
        let lam = Scalar::symbol("lambda");
        let tri = DelzantPolygon::delzant_triangle(t.clone(), &lam).unwrap();
        let d = decompose(&tri, false).unwrap();
        assert_eq!(d.root, RootShape::Triangle { lambda: lam });
        assert!(d.steps.is_empty());
        let r = replay(&d, t).unwrap();
        assert!(congruent(&r, &tri).unwrap());
    }

    #[test]
    fn five_edge_decomposition_replays() {
        let p = DelzantPolygon::validate(
            table(),
            [(1, 1), (5, 1), (5, 3), (3, 7), (1, 9)]
                .iter()
                .map(|&(x, y)| Point::from_ints(x, y))
                .collect(),
        )
        .unwrap();
        let d = decompose(&p, false).unwrap();
        assert_eq!(d.steps.len(), 1);
        let r = replay(&d, table()).unwrap();
        assert!(congruent(&r, &p).unwrap());

        let d_odd = decompose(&p, true).unwrap();
        assert_eq!(d_odd.root.hirzebruch_k().unwrap() % 2, 1);
        let r = replay(&d_odd, table()).unwrap();
        assert!(congruent(&r, &p).unwrap());
    }

    #[test]
    fn even_odd_flip_on_chopped_rectangle() {
        let h = DelzantPolygon::hirzebruch_trapezoid(
            table(),
            &Scalar::from_int(3),
            &Scalar::from_int(2),
            0,
        )
        .unwrap();
        // top-left vertex of the standard trapezoid is (0, 1), index 3
        let step = h.chop(3, &Scalar::from_int(1)).unwrap();
        let d = decompose(&step.after, true).unwrap();
        assert_eq!(d.root.hirzebruch_k().unwrap() % 2, 1);
        let r = replay(&d, table()).unwrap();
        assert!(congruent(&r, &step.after).unwrap());
    }

    #[test]
    fn decompose_is_congruence_invariant() {
        let p = DelzantPolygon::validate(
            table(),
            [(1, 1), (5, 1), (5, 3), (3, 7), (1, 9)]
                .iter()
                .map(|&(x, y)| Point::from_ints(x, y))
                .collect(),
        )
        .unwrap();
        let g = UnimodularAffineMap::new(
            [[1, 2], [1, 3]],
            (Scalar::from_int(-4), Scalar::from_int(9)),
        )
        .unwrap();
        let q = p.apply_map(&g).unwrap();
        let dp = decompose(&p, false).unwrap();
        let dq = decompose(&q, false).unwrap();
        assert_eq!(dp.root, dq.root);
        assert_eq!(dp.deltas(), dq.deltas());
    }

    #[test]
    fn bound_identities_along_replay() {
        let tri = DelzantPolygon::delzant_triangle(table(), &Scalar::from_int(4)).unwrap();
        let s1 = tri.chop(0, &Scalar::from_int(1)).unwrap();
        let s2 = s1.after.chop(2, &Scalar::from_rational(rat(1, 2))).unwrap();
        let p = s2.after.as_ref().clone();
        let d = decompose(&p, false).unwrap();
        let root_p = d.root.perimeter();
        let root_a = d.root.area();
        let mut sum = Scalar::zero();
        let mut sum_sq = Scalar::zero();
        for delta in d.deltas() {
            sum = &sum + &delta;
            sum_sq = &sum_sq + &(&delta * &delta);
        }
        assert_eq!(p.perimeter(), &root_p - &sum);
        assert_eq!(p.area(), &root_a - &sum_sq.half());
        // delta_i < 2^s * perimeter(input)
        let bound = p.perimeter().scale(&rat_int(1 << d.steps.len()));
        let t = table();
        for delta in d.deltas() {
            assert_eq!(t.compare(&delta, &bound).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn symplectomorphism_labels() {
        assert_eq!(
            symplectomorphism_type(&RootShape::Hirzebruch {
                a: Scalar::from_int(3),
                b: Scalar::one(),
                k: 0,
            }),
            "S²×S²(3,1)"
        );
        assert_eq!(
            symplectomorphism_type(&RootShape::Hirzebruch {
                a: Scalar::from_int(2),
                b: Scalar::from_int(2),
                k: 1,
            }),
            "CP²-one-blow-up(2,2)"
        );
        assert_eq!(
            symplectomorphism_type(&RootShape::Hirzebruch {
                a: Scalar::from_int(3),
                b: Scalar::one(),
                k: 4,
            }),
            "S²×S²(3,1)"
        );
        assert_eq!(
            symplectomorphism_type(&RootShape::Triangle {
                lambda: Scalar::from_int(3),
            }),
            "CP²(3)"
        );
    }
}
