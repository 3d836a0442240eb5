//! Delzant polygons and their local calculus.
//!
//! A polygon is stored as a counterclockwise vertex list with exact scalar
//! coordinates. Validation certifies strict convexity, rational slopes, and
//! the unimodularity condition at every vertex, and computes per-edge data:
//! primitive direction, outward normal, rational length, and combinatorial
//! self-intersection. All operations are pure; polygons are immutable.

use std::cmp::Ordering;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, NotDelzantReason, Result};
use crate::scalar::{rat_int, Rational, Scalar, SymbolTable};

/// An integer vector in the lattice Z^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeVec {
    pub x: i64,
    pub y: i64,
}

impl LatticeVec {
    pub fn new(x: i64, y: i64) -> Self {
        LatticeVec { x, y }
    }

    pub fn cross(self, other: Self) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn neg(self) -> Self {
        LatticeVec::new(-self.x, -self.y)
    }

    pub fn add(self, other: Self) -> Self {
        LatticeVec::new(self.x + other.x, self.y + other.y)
    }

    pub fn is_primitive(self) -> bool {
        self.x.gcd(&self.y) == 1
    }

    /// 90-degree clockwise rotation; takes the direction of a counterclockwise
    /// edge to its outward normal.
    pub fn rotate_cw(self) -> Self {
        LatticeVec::new(self.y, -self.x)
    }

    /// Angular quadrant for exact direction comparison, counterclockwise from
    /// the positive x-axis: 0 for [0, pi/2), 1 for [pi/2, pi), etc.
    fn quadrant(self) -> u8 {
        debug_assert!(self.x != 0 || self.y != 0);
        if self.x > 0 && self.y >= 0 {
            0
        } else if self.x <= 0 && self.y > 0 {
            1
        } else if self.x < 0 && self.y <= 0 {
            2
        } else {
            3
        }
    }

    /// Exact comparison of direction angles in [0, 2*pi).
    pub fn angle_cmp(self, other: Self) -> Ordering {
        self.quadrant()
            .cmp(&other.quadrant())
            .then_with(|| 0i64.cmp(&self.cross(other)))
    }
}

/// A point of the plane with exact scalar coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(Scalar::from_int(x), Scalar::from_int(y))
    }

    pub fn add_scaled(&self, t: &Scalar, v: LatticeVec) -> Point {
        Point::new(
            &self.x + &t.scale(&rat_int(v.x)),
            &self.y + &t.scale(&rat_int(v.y)),
        )
    }

    pub fn sub(&self, other: &Point) -> (Scalar, Scalar) {
        (&self.x - &other.x, &self.y - &other.y)
    }
}

/// Per-edge data of a validated polygon. Edge `i` joins vertex `i` to vertex
/// `i+1 mod n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeData {
    pub index: usize,
    pub primitive_direction: LatticeVec,
    pub outward_normal: LatticeVec,
    pub rational_length: Scalar,
    pub self_intersection: i64,
}

/// An affine map x -> Ax + t with A an integer matrix of determinant +-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularAffineMap {
    matrix: [[i64; 2]; 2],
    translation: (Scalar, Scalar),
}

impl UnimodularAffineMap {
    pub fn new(matrix: [[i64; 2]; 2], translation: (Scalar, Scalar)) -> Result<Self> {
        let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
        if det != 1 && det != -1 {
            return Err(Error::Parse(format!("matrix determinant {det} is not +-1")));
        }
        Ok(UnimodularAffineMap { matrix, translation })
    }

    pub fn identity() -> Self {
        UnimodularAffineMap {
            matrix: [[1, 0], [0, 1]],
            translation: (Scalar::zero(), Scalar::zero()),
        }
    }

    pub fn translation_by(t: (Scalar, Scalar)) -> Self {
        UnimodularAffineMap {
            matrix: [[1, 0], [0, 1]],
            translation: t,
        }
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.matrix
    }

    pub fn translation(&self) -> &(Scalar, Scalar) {
        &self.translation
    }

    pub fn det(&self) -> i64 {
        self.matrix[0][0] * self.matrix[1][1] - self.matrix[0][1] * self.matrix[1][0]
    }

    pub fn apply_point(&self, p: &Point) -> Point {
        let m = &self.matrix;
        let x = &(&p.x.scale(&rat_int(m[0][0])) + &p.y.scale(&rat_int(m[0][1])))
            + &self.translation.0;
        let y = &(&p.x.scale(&rat_int(m[1][0])) + &p.y.scale(&rat_int(m[1][1])))
            + &self.translation.1;
        Point::new(x, y)
    }

    pub fn apply_vec(&self, v: LatticeVec) -> LatticeVec {
        let m = &self.matrix;
        LatticeVec::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y)
    }

    /// self after other: (self.compose(other))(x) = self(other(x)).
    pub fn compose(&self, other: &Self) -> Self {
        let a = &self.matrix;
        let b = &other.matrix;
        let matrix = [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ];
        let t = self.apply_point(&Point::new(
            other.translation.0.clone(),
            other.translation.1.clone(),
        ));
        UnimodularAffineMap {
            matrix,
            translation: (t.x, t.y),
        }
    }

    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.matrix;
        let det = a * d - b * c; // +-1
        let inv = [[d * det, -b * det], [-c * det, a * det]];
        let m = UnimodularAffineMap {
            matrix: inv,
            translation: (Scalar::zero(), Scalar::zero()),
        };
        let t = m.apply_point(&Point::new(
            -self.translation.0.clone(),
            -self.translation.1.clone(),
        ));
        UnimodularAffineMap {
            matrix: inv,
            translation: (t.x, t.y),
        }
    }
}

/// A validated Delzant polygon: counterclockwise vertices, strictly convex,
/// rational edge slopes, primitive edge pairs forming a Z-basis at every
/// vertex.
#[derive(Debug, Clone)]
pub struct DelzantPolygon {
    table: Arc<SymbolTable>,
    vertices: Vec<Point>,
    edges: Vec<EdgeData>,
}

impl PartialEq for DelzantPolygon {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}
impl Eq for DelzantPolygon {}

/// Primitive integer direction and positive scalar length of an edge vector.
fn primitive_of(
    table: &SymbolTable,
    dx: &Scalar,
    dy: &Scalar,
    edge: usize,
) -> Result<(LatticeVec, Scalar)> {
    let reject = |reason| Error::NotDelzant {
        reason,
        location: edge,
    };
    if dx.is_zero() && dy.is_zero() {
        return Err(reject(NotDelzantReason::DegenerateEdge));
    }
    if dx.is_zero() {
        return match table.sign(dy)? {
            Ordering::Greater => Ok((LatticeVec::new(0, 1), dy.clone())),
            Ordering::Less => Ok((LatticeVec::new(0, -1), -dy)),
            Ordering::Equal => unreachable!("formally nonzero"),
        };
    }
    if dy.is_zero() {
        return match table.sign(dx)? {
            Ordering::Greater => Ok((LatticeVec::new(1, 0), dx.clone())),
            Ordering::Less => Ok((LatticeVec::new(-1, 0), -dx)),
            Ordering::Equal => unreachable!("formally nonzero"),
        };
    }
    // Rational slope means dy = r * dx for a single rational r.
    let (m0, c0) = dx.terms().next().expect("nonzero");
    let r = dy.coefficient(m0) / c0;
    if (dy - &dx.scale(&r)).is_zero() {
        if r.is_zero() {
            return Err(reject(NotDelzantReason::IrrationalSlope));
        }
        // r = n/d in lowest terms with d > 0; direction is +-(d, n).
        let d = r
            .denom()
            .to_i64()
            .ok_or_else(|| Error::Internal("slope denominator overflow".into()))?;
        let n = r
            .numer()
            .to_i64()
            .ok_or_else(|| Error::Internal("slope numerator overflow".into()))?;
        let sign = match table.sign(dx)? {
            Ordering::Greater => 1,
            Ordering::Less => -1,
            Ordering::Equal => unreachable!("formally nonzero"),
        };
        let prim = LatticeVec::new(sign * d, sign * n);
        let t = dx.scale(&Rational::new((sign * d).into(), 1.into()).recip());
        Ok((prim, t))
    } else {
        Err(reject(NotDelzantReason::IrrationalSlope))
    }
}

impl DelzantPolygon {
    /// Validate a counterclockwise vertex list, or return a structured
    /// rejection naming the first violated invariant.
    pub fn validate(table: Arc<SymbolTable>, vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::NotDelzant {
                reason: NotDelzantReason::TooFewVertices,
                location: 0,
            });
        }
        for v in &vertices {
            table.check_scalar(&v.x)?;
            table.check_scalar(&v.y)?;
        }

        let mut dirs = Vec::with_capacity(n);
        let mut lengths = Vec::with_capacity(n);
        for i in 0..n {
            let (dx, dy) = vertices[(i + 1) % n].sub(&vertices[i]);
            let (prim, len) = primitive_of(&table, &dx, &dy, i)?;
            dirs.push(prim);
            lengths.push(len);
        }

        // Strict convexity and counterclockwise orientation: every turn is a
        // left turn...
        for i in 0..n {
            let c = dirs[i].cross(dirs[(i + 1) % n]);
            if c <= 0 {
                return Err(Error::NotDelzant {
                    reason: NotDelzantReason::NonConvex,
                    location: (i + 1) % n,
                });
            }
        }
        // ...and the direction angles wrap around exactly once, which rules
        // out multiply-wound vertex lists that turn left at every step.
        let wraps = (0..n)
            .filter(|&i| dirs[i].angle_cmp(dirs[(i + 1) % n]) != Ordering::Less)
            .count();
        if wraps != 1 {
            return Err(Error::NotDelzant {
                reason: NotDelzantReason::NonConvex,
                location: 0,
            });
        }

        // Delzant condition: consecutive primitive directions span Z^2.
        for i in 0..n {
            let c = dirs[i].cross(dirs[(i + 1) % n]);
            if c != 1 {
                return Err(Error::NotDelzant {
                    reason: NotDelzantReason::NonUnimodularVertex,
                    location: (i + 1) % n,
                });
            }
        }

        let edges = (0..n)
            .map(|i| {
                // u + u'' = k u' on outward normals, so k is the cross product
                // of the neighboring primitive directions.
                let k = dirs[(i + n - 1) % n].cross(dirs[(i + 1) % n]);
                EdgeData {
                    index: i,
                    primitive_direction: dirs[i],
                    outward_normal: dirs[i].rotate_cw(),
                    rational_length: lengths[i].clone(),
                    self_intersection: -k,
                }
            })
            .collect::<Vec<_>>();

        debug_assert_eq!(
            edges.iter().map(|e| e.self_intersection).sum::<i64>(),
            12 - 3 * n as i64,
        );

        Ok(DelzantPolygon {
            table,
            vertices,
            edges,
        })
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeData] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, i: usize) -> &EdgeData {
        &self.edges[i]
    }

    pub fn self_intersections(&self) -> Vec<i64> {
        self.edges.iter().map(|e| e.self_intersection).collect()
    }

    pub fn lengths(&self) -> Vec<Scalar> {
        self.edges.iter().map(|e| e.rational_length.clone()).collect()
    }

    pub fn vertex_index_of(&self, p: &Point) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    /// Sum of the rational edge lengths.
    pub fn perimeter(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for e in &self.edges {
            acc = &acc + &e.rational_length;
        }
        acc
    }

    /// Euclidean area by the shoelace formula (exact).
    pub fn area(&self) -> Scalar {
        let n = self.vertices.len();
        let mut twice = Scalar::zero();
        for i in 0..n {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % n];
            twice = &twice + &(&(&a.x * &b.y) - &(&a.y * &b.x));
        }
        twice.half()
    }

    /// Image under an affine unimodular map, re-oriented counterclockwise
    /// when the determinant is -1. Edge lengths and self-intersections are
    /// preserved.
    pub fn apply_map(&self, g: &UnimodularAffineMap) -> Result<DelzantPolygon> {
        let mut verts: Vec<Point> = self.vertices.iter().map(|v| g.apply_point(v)).collect();
        if g.det() < 0 {
            verts.reverse();
        }
        DelzantPolygon::validate(self.table.clone(), verts)
    }

    /// Corner chopping of size `delta` at a vertex. Requires
    /// 0 < delta < both incident edge lengths, strictly.
    pub fn chop(&self, vertex: usize, delta: &Scalar) -> Result<ChopStep> {
        let n = self.vertices.len();
        if vertex >= n {
            return Err(Error::Parse(format!("vertex index {vertex} out of range")));
        }
        if self.table.sign(delta)? != Ordering::Greater {
            return Err(Error::ChopTooLarge);
        }
        let prev = (vertex + n - 1) % n;
        for e in [prev, vertex] {
            if self
                .table
                .compare(delta, &self.edges[e].rational_length)?
                != Ordering::Less
            {
                return Err(Error::ChopTooLarge);
            }
        }
        let v = &self.vertices[vertex];
        let alpha1 = self.edges[prev].primitive_direction.neg();
        let alpha2 = self.edges[vertex].primitive_direction;
        let a = v.add_scaled(delta, alpha1);
        let b = v.add_scaled(delta, alpha2);
        let mut verts = Vec::with_capacity(n + 1);
        verts.extend_from_slice(&self.vertices[..vertex]);
        verts.push(a);
        verts.push(b);
        verts.extend_from_slice(&self.vertices[vertex + 1..]);
        let after = DelzantPolygon::validate(self.table.clone(), verts).map_err(|e| match e {
            Error::Undecidable { .. } => e,
            other => Error::Internal(format!("chop produced an invalid polygon: {other}")),
        })?;
        Ok(ChopStep {
            before: Arc::new(self.clone()),
            after: Arc::new(after),
            vertex,
            new_edge: vertex,
            delta: delta.clone(),
        })
    }

    /// Inverse of corner chopping on an edge of self-intersection -1: the edge
    /// is removed and its neighbors extended to their intersection point.
    /// Returns the smaller polygon, the chop size, and the index of the
    /// restored vertex (always 0 in the returned vertex list).
    pub fn blow_down(&self, edge: usize) -> Result<(DelzantPolygon, Scalar, usize)> {
        let n = self.vertices.len();
        if edge >= n {
            return Err(Error::Parse(format!("edge index {edge} out of range")));
        }
        if n < 4 {
            return Err(Error::TooFewEdges);
        }
        let e = &self.edges[edge];
        if e.self_intersection != -1 {
            return Err(Error::NotBlowDownable {
                edge,
                self_intersection: e.self_intersection,
            });
        }
        let delta = e.rational_length.clone();
        let prev = (edge + n - 1) % n;
        let next = (edge + 1) % n;
        let w = self.vertices[edge].add_scaled(&delta, self.edges[prev].primitive_direction);
        debug_assert_eq!(
            w,
            self.vertices[next].add_scaled(&delta, self.edges[next].primitive_direction.neg())
        );
        // Rebuild starting at the restored corner.
        let mut verts = Vec::with_capacity(n - 1);
        verts.push(w);
        let mut i = (edge + 2) % n;
        while i != edge {
            verts.push(self.vertices[i].clone());
            i = (i + 1) % n;
        }
        let poly = DelzantPolygon::validate(self.table.clone(), verts).map_err(|e| match e {
            Error::Undecidable { .. } => e,
            other => Error::Internal(format!("blow-down produced an invalid polygon: {other}")),
        })?;
        Ok((poly, delta, 0))
    }

    // -- standard shapes ----------------------------------------------------

    /// The standard triangle with vertices (0,0), (lambda,0), (0,lambda).
    pub fn delzant_triangle(table: Arc<SymbolTable>, lambda: &Scalar) -> Result<Self> {
        let z = Scalar::zero();
        DelzantPolygon::validate(
            table,
            vec![
                Point::new(z.clone(), z.clone()),
                Point::new(lambda.clone(), z.clone()),
                Point::new(z, lambda.clone()),
            ],
        )
    }

    /// The standard Hirzebruch trapezoid of height `b`, average width `a`,
    /// and slant parameter `k`: the region -b/2 <= y <= b/2,
    /// 0 <= x <= a - k*y.
    pub fn hirzebruch_trapezoid(
        table: Arc<SymbolTable>,
        a: &Scalar,
        b: &Scalar,
        k: u32,
    ) -> Result<Self> {
        let z = Scalar::zero();
        let hb = b.half();
        let kb = hb.scale(&rat_int(k as i64));
        DelzantPolygon::validate(
            table,
            vec![
                Point::new(z.clone(), -&hb),
                Point::new(a + &kb, -&hb),
                Point::new(a - &kb, hb.clone()),
                Point::new(z, hb),
            ],
        )
    }

    /// The square [0, s]^2, a Hirzebruch trapezoid in a shifted frame.
    pub fn square(table: Arc<SymbolTable>, s: &Scalar) -> Result<Self> {
        let z = Scalar::zero();
        DelzantPolygon::validate(
            table,
            vec![
                Point::new(z.clone(), z.clone()),
                Point::new(s.clone(), z.clone()),
                Point::new(s.clone(), s.clone()),
                Point::new(z, s.clone()),
            ],
        )
    }
}

/// A record of one corner chopping, connecting the polygon before and after.
/// The edge-group injection and pushforwards replay these records.
#[derive(Debug, Clone)]
pub struct ChopStep {
    pub before: Arc<DelzantPolygon>,
    pub after: Arc<DelzantPolygon>,
    pub vertex: usize,
    pub new_edge: usize,
    pub delta: Scalar,
}

// ---------------------------------------------------------------------------
// Canonical forms
// ---------------------------------------------------------------------------

/// A polygon together with the map that carries the input onto it.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub polygon: DelzantPolygon,
    pub witness: UnimodularAffineMap,
}

/// Lexicographic comparison of two vertex sequences under the certified order.
fn lex_cmp(
    table: &SymbolTable,
    a: &[Point],
    b: &[Point],
) -> Result<Ordering> {
    debug_assert_eq!(a.len(), b.len());
    for (p, q) in a.iter().zip(b) {
        let c = table.compare(&p.x, &q.x)?;
        if c != Ordering::Equal {
            return Ok(c);
        }
        let c = table.compare(&p.y, &q.y)?;
        if c != Ordering::Equal {
            return Ok(c);
        }
    }
    Ok(Ordering::Equal)
}

/// Canonical representative of the AGL(2,Z)-congruence class of a polygon.
///
/// Every vertex frame is tried: the vertex goes to the origin and the pair of
/// primitive edge directions leaving it to the standard basis, in both orders
/// (one of the two is a reflection). Each candidate image is listed starting
/// from the origin and the lexicographically least vertex sequence wins, so
/// congruent polygons canonicalize identically.
pub fn canonical_form(p: &DelzantPolygon) -> Result<CanonicalForm> {
    let n = p.edge_count();
    let table = p.table();
    let mut best: Option<(Vec<Point>, UnimodularAffineMap)> = None;
    for i in 0..n {
        let leaving = p.edge(i).primitive_direction;
        let entering = p.edge((i + n - 1) % n).primitive_direction.neg();
        for (f, s) in [(leaving, entering), (entering, leaving)] {
            // The matrix sending f -> e1 and s -> e2 is the inverse of
            // [f s]; det(f, s) = +-1 at a Delzant vertex.
            let det = f.x * s.y - f.y * s.x;
            let m = [[s.y * det, -s.x * det], [-f.y * det, f.x * det]];
            let v = &p.vertices()[i];
            let lin = UnimodularAffineMap::new(m, (Scalar::zero(), Scalar::zero()))
                .expect("unimodular by construction");
            let origin_image = lin.apply_point(v);
            let g = UnimodularAffineMap::new(m, (-origin_image.x, -origin_image.y))
                .expect("unimodular by construction");
            let image = p.apply_map(&g)?;
            let start = image
                .vertex_index_of(&Point::new(Scalar::zero(), Scalar::zero()))
                .ok_or_else(|| Error::Internal("frame vertex missed the origin".into()))?;
            let mut verts = Vec::with_capacity(n);
            for j in 0..n {
                verts.push(image.vertices()[(start + j) % n].clone());
            }
            match &best {
                None => best = Some((verts, g)),
                Some((bv, _)) => {
                    if lex_cmp(table, &verts, bv)? == Ordering::Less {
                        best = Some((verts, g));
                    }
                }
            }
        }
    }
    let (verts, witness) = best.expect("n >= 3");
    let polygon = DelzantPolygon::validate(p.table().clone(), verts)?;
    Ok(CanonicalForm { polygon, witness })
}

/// True when the polygons have equal canonical forms.
pub fn congruent(p: &DelzantPolygon, q: &DelzantPolygon) -> Result<bool> {
    if p.edge_count() != q.edge_count() {
        return Ok(false);
    }
    Ok(canonical_form(p)?.polygon == canonical_form(q)?.polygon)
}
