//! The free abelian group on the edges of a polygon.
//!
//! Generators pair by the combinatorial intersection numbers (diagonal =
//! self-intersections, adjacent = 1, otherwise 0) and carry the rational
//! length functional. A corner chopping induces an injection of edge groups
//! that preserves both; its composition along a chopping sequence pushes an
//! edge class forward with the characteristic coefficient pattern (positive,
//! consecutive support, ones at both ends and at the same-normal edge).
//!
//! Quotienting by the two normal-vector relations gives the rank n-2
//! unimodular intersection form of the ambient manifold, with its parity and
//! signature.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::polygon::{ChopStep, DelzantPolygon};
use crate::scalar::{rat_int, Rational, Scalar};

/// An element of Z[edges of a fixed polygon].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClass {
    polygon: Arc<DelzantPolygon>,
    coefficients: Vec<i64>,
}

impl EdgeClass {
    pub fn zero(polygon: Arc<DelzantPolygon>) -> Self {
        let n = polygon.edge_count();
        EdgeClass {
            polygon,
            coefficients: vec![0; n],
        }
    }

    pub fn generator(polygon: Arc<DelzantPolygon>, edge: usize) -> Result<Self> {
        if edge >= polygon.edge_count() {
            return Err(Error::Parse(format!("edge index {edge} out of range")));
        }
        let mut c = EdgeClass::zero(polygon);
        c.coefficients[edge] = 1;
        Ok(c)
    }

    pub fn from_coefficients(polygon: Arc<DelzantPolygon>, coefficients: Vec<i64>) -> Result<Self> {
        if coefficients.len() != polygon.edge_count() {
            return Err(Error::MismatchedPolygons);
        }
        Ok(EdgeClass {
            polygon,
            coefficients,
        })
    }

    pub fn polygon(&self) -> &Arc<DelzantPolygon> {
        &self.polygon
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    fn same_polygon(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.polygon, &other.polygon) || *self.polygon == *other.polygon {
            Ok(())
        } else {
            Err(Error::MismatchedPolygons)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_polygon(other)?;
        let coefficients = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a + b)
            .collect();
        Ok(EdgeClass {
            polygon: self.polygon.clone(),
            coefficients,
        })
    }

    pub fn scale(&self, c: i64) -> Self {
        EdgeClass {
            polygon: self.polygon.clone(),
            coefficients: self.coefficients.iter().map(|a| a * c).collect(),
        }
    }

    /// Sum of all edge generators; pairs with any class as the first Chern
    /// class does.
    pub fn chern_dual(polygon: Arc<DelzantPolygon>) -> Self {
        let n = polygon.edge_count();
        EdgeClass {
            polygon,
            coefficients: vec![1; n],
        }
    }
}

/// Combinatorial intersection number of two generators.
fn generator_pairing(p: &DelzantPolygon, i: usize, j: usize) -> i64 {
    let n = p.edge_count();
    if i == j {
        p.edge(i).self_intersection
    } else if (i + 1) % n == j || (j + 1) % n == i {
        1
    } else {
        0
    }
}

/// The combinatorial intersection pairing, extended bilinearly.
pub fn pair(x: &EdgeClass, y: &EdgeClass) -> Result<i64> {
    x.same_polygon(y)?;
    let p = &*x.polygon;
    let n = p.edge_count();
    let mut acc: i64 = 0;
    for i in 0..n {
        if x.coefficients[i] == 0 {
            continue;
        }
        for j in 0..n {
            if y.coefficients[j] == 0 {
                continue;
            }
            acc += x.coefficients[i] * y.coefficients[j] * generator_pairing(p, i, j);
        }
    }
    Ok(acc)
}

/// Linear extension of the rational length of edges.
pub fn length_functional(x: &EdgeClass) -> Scalar {
    let mut acc = Scalar::zero();
    for (i, &c) in x.coefficients.iter().enumerate() {
        if c != 0 {
            acc = &acc + &x.polygon.edge(i).rational_length.scale(&rat_int(c));
        }
    }
    acc
}

/// Match each edge of `from` to the edge of `to` with the same outward
/// normal. Normals of a convex polygon are pairwise distinct, so the match is
/// unique when it exists.
fn match_by_normal(from: &DelzantPolygon, to: &DelzantPolygon) -> Vec<Option<usize>> {
    from.edges()
        .iter()
        .map(|e| {
            to.edges()
                .iter()
                .position(|f| f.outward_normal == e.outward_normal)
        })
        .collect()
}

/// The injection Z[edges before] -> Z[edges after] induced by a chop:
/// untouched generators map to the same-normal edge, the two generators at
/// the chopped corner additionally pick up the new edge. Preserves the
/// pairing and the length functional.
pub fn injection(step: &ChopStep, x: &EdgeClass) -> Result<EdgeClass> {
    if **x.polygon() != *step.before {
        return Err(Error::MismatchedPolygons);
    }
    let before = &*step.before;
    let after = &*step.after;
    let n = before.edge_count();
    if after.edge_count() != n + 1 || step.new_edge >= after.edge_count() {
        return Err(Error::InconsistentChopRecord(
            "edge counts do not match a single chop".into(),
        ));
    }
    let matching = match_by_normal(before, after);
    let mut coefficients = vec![0i64; n + 1];
    let touching = [(step.vertex + n - 1) % n, step.vertex];
    for (i, &c) in x.coefficients.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let target = matching[i].ok_or_else(|| {
            Error::InconsistentChopRecord(format!("edge {i} lost its normal in the chop"))
        })?;
        coefficients[target] += c;
        if touching.contains(&i) {
            coefficients[step.new_edge] += c;
        }
    }
    EdgeClass::from_coefficients(step.after.clone(), coefficients)
}

/// Pushforward of a single generator through a chopping sequence.
pub fn pushforward(edge: usize, steps: &[ChopStep]) -> Result<EdgeClass> {
    let first = steps.first().ok_or_else(|| {
        Error::InconsistentChopRecord("empty chopping sequence".into())
    })?;
    let mut class = EdgeClass::generator(first.before.clone(), edge)?;
    let mut previous: Option<&ChopStep> = None;
    for step in steps {
        if let Some(prev) = previous {
            if *prev.after != *step.before {
                return Err(Error::InconsistentChopRecord(
                    "steps do not chain: polygon mismatch".into(),
                ));
            }
        }
        class = injection(step, &class)?;
        previous = Some(step);
    }
    Ok(class)
}

// ---------------------------------------------------------------------------
// Intersection form
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

/// The intersection form of the toric manifold over a polygon: the edge
/// pairing reduced modulo the two normal-vector relations to a unimodular
/// form of rank n-2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub parity: Parity,
    /// (b2+, b2-)
    pub signature: (usize, usize),
}

/// Row reduction of the n x 2 relation matrix; `pinv` accumulates the
/// inverse of the row-operation product so its trailing columns form a basis
/// of a complement of the relation lattice.
struct RowReducer {
    mat: Vec<[i128; 2]>,
    pinv: Vec<Vec<i128>>, // n x n
}

impl RowReducer {
    fn new(rows: Vec<[i128; 2]>) -> Self {
        let n = rows.len();
        let mut pinv = vec![vec![0i128; n]; n];
        for (i, row) in pinv.iter_mut().enumerate() {
            row[i] = 1;
        }
        RowReducer { mat: rows, pinv }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.mat.swap(a, b);
        for row in &mut self.pinv {
            row.swap(a, b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for v in &mut self.mat[r] {
            *v = -*v;
        }
        for row in &mut self.pinv {
            row[r] = -row[r];
        }
    }

    /// row r -= q * row p; pinv column p += q * column r.
    fn sub_rows(&mut self, r: usize, p: usize, q: i128) {
        for c in 0..2 {
            self.mat[r][c] -= q * self.mat[p][c];
        }
        for row in &mut self.pinv {
            row[p] += q * row[r];
        }
    }
}

fn div_round(a: i128, b: i128) -> i128 {
    let q = a / b;
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        q + if (r < 0) == (b < 0) { 1 } else { -1 }
    } else {
        q
    }
}

/// Basis of a complement of the saturated rank-2 relation lattice inside
/// Z^n, as columns. Errors if the quotient has torsion or the relations do
/// not have rank 2 (impossible on a valid polygon).
fn relation_complement(rows: Vec<[i128; 2]>) -> Result<Vec<Vec<i128>>> {
    let n = rows.len();
    if n < 3 {
        return Err(Error::ReductionFailure(
            "polygon has fewer than 3 edges".into(),
        ));
    }
    let mut red = RowReducer::new(rows);
    for pivot in 0..2usize {
        loop {
            // locate the minimal nonzero entry in the working block
            let mut best: Option<(usize, usize)> = None;
            for r in pivot..n {
                for c in pivot..2 {
                    let v = red.mat[r][c].abs();
                    if v != 0
                        && best.map_or(true, |(br, bc)| v < red.mat[br][bc].abs())
                    {
                        best = Some((r, c));
                    }
                }
            }
            let (r, c) = best.ok_or_else(|| {
                Error::ReductionFailure("relation matrix has rank < 2".into())
            })?;
            if r != pivot {
                red.swap_rows(pivot, r);
            }
            if c != pivot {
                for row in &mut red.mat {
                    row.swap(0, 1);
                }
            }
            if red.mat[pivot][pivot] < 0 {
                red.negate_row(pivot);
            }
            let pv = red.mat[pivot][pivot];
            let mut clean = true;
            for r in 0..n {
                if r == pivot {
                    continue;
                }
                let v = red.mat[r][pivot];
                if v != 0 {
                    let q = div_round(v, pv);
                    if q != 0 {
                        red.sub_rows(r, pivot, q);
                    }
                    if red.mat[r][pivot] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                if pivot == 0 && red.mat[0][1] != 0 {
                    // clear the rest of the pivot row by a column op
                    if red.mat[0][1] % pv == 0 {
                        let q = red.mat[0][1] / pv;
                        for row in &mut red.mat {
                            row[1] -= q * row[0];
                        }
                    } else {
                        continue;
                    }
                }
                break;
            }
        }
    }
    if red.mat[0][0] != 1 || red.mat[1][1] != 1 {
        return Err(Error::ReductionFailure(format!(
            "quotient by the relations has torsion: diagonal ({}, {})",
            red.mat[0][0], red.mat[1][1]
        )));
    }
    let cols = (2..n)
        .map(|j| (0..n).map(|i| red.pinv[i][j]).collect())
        .collect();
    Ok(cols)
}

/// Integer determinant by fraction-free elimination.
fn determinant(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let swap = (k + 1..n).find(|&r| a[r][k] != 0);
            match swap {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Signature of a symmetric rational matrix by congruence diagonalization.
fn signature(gram: &[Vec<i64>]) -> Result<(usize, usize)> {
    let m = gram.len();
    let mut a: Vec<Vec<Rational>> = gram
        .iter()
        .map(|row| row.iter().map(|&v| rat_int(v)).collect())
        .collect();
    let mut pos = 0usize;
    let mut neg = 0usize;
    for i in 0..m {
        if a[i][i].is_zero() {
            if let Some(j) = (i + 1..m).find(|&j| !a[j][j].is_zero()) {
                a.swap(i, j);
                for row in &mut a {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..m).find(|&j| !a[i][j].is_zero()) {
                for c in 0..m {
                    let v = a[j][c].clone();
                    a[i][c] = &a[i][c] + &v;
                }
                for r in 0..m {
                    let v = a[r][j].clone();
                    a[r][i] = &a[r][i] + &v;
                }
            } else {
                return Err(Error::ReductionFailure(
                    "degenerate intersection form".into(),
                ));
            }
        }
        let d = a[i][i].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for r in i + 1..m {
            if a[r][i].is_zero() {
                continue;
            }
            let f = &a[r][i] / &d;
            for c in 0..m {
                let v = &a[i][c] * &f;
                a[r][c] = &a[r][c] - &v;
            }
            for c in 0..m {
                let v = &a[c][i] * &f;
                a[c][r] = &a[c][r] - &v;
            }
        }
    }
    Ok((pos, neg))
}

/// Reduce the edge pairing of a polygon to the intersection form of the
/// ambient manifold: rank n-2, |det| = 1, signature (1, n-3).
pub fn intersection_form(p: &DelzantPolygon) -> Result<IntersectionForm> {
    let n = p.edge_count();
    // The two relations among the generators are the coordinates of the
    // outward normals; they span the radical of the pairing.
    let rows: Vec<[i128; 2]> = p
        .edges()
        .iter()
        .map(|e| [e.outward_normal.x as i128, e.outward_normal.y as i128])
        .collect();
    let basis = relation_complement(rows)?;
    let rank = n - 2;
    let mut gram = vec![vec![0i64; rank]; rank];
    for a in 0..rank {
        for b in 0..rank {
            let mut acc: i128 = 0;
            for i in 0..n {
                if basis[a][i] == 0 {
                    continue;
                }
                for j in 0..n {
                    if basis[b][j] == 0 {
                        continue;
                    }
                    acc += basis[a][i] * basis[b][j] * generator_pairing(p, i, j) as i128;
                }
            }
            gram[a][b] = i64::try_from(acc)
                .map_err(|_| Error::ReductionFailure("gram entry overflow".into()))?;
        }
    }
    let det = determinant(
        &gram
            .iter()
            .map(|r| r.iter().map(|&v| v as i128).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    );
    if det.abs() != 1 {
        return Err(Error::ReductionFailure(format!(
            "reduced form has determinant {det}"
        )));
    }
    let signature = signature(&gram)?;
    if signature != (1, rank - 1) {
        return Err(Error::ReductionFailure(format!(
            "unexpected signature {signature:?}"
        )));
    }
    let parity = if gram.iter().enumerate().all(|(i, row)| row[i] % 2 == 0) {
        Parity::Even
    } else {
        Parity::Odd
    };
    Ok(IntersectionForm {
        rank,
        gram,
        parity,
        signature,
    })
}
