//! Classification of toric actions from manifold invariants.
//!
//! Given a manifold description (a blow-up of the projective plane, a product
//! of spheres, or raw invariants), produce the finite list of pairwise
//! non-congruent moment polygons compatible with it: compute the finite
//! candidate set of chopping sizes from the lattice enumerator, recover the
//! trapezoid parameters from perimeter and area, build every root, apply
//! every placement of every chopping multiset (deduplicating by canonical
//! form, with search states memoized on canonical form plus remaining
//! multiset), and label each class by its decomposition.
//!
//! Distinct manifolds can share all the invariants used here, so outputs that
//! involve at least one chopping are labeled as a candidate superset rather
//! than an exact classification.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use itertools::Itertools;

use crate::decomposition::{symplectomorphism_type, ChopLocator, Decomposition, RootShape};
use crate::error::{Error, Result};
use crate::homology::{intersection_form, Parity};
use crate::json;
use crate::minkowski::{enumerate_classes, evaluate, BlowupForm};
use crate::polygon::{canonical_form, DelzantPolygon, UnimodularAffineMap};
use crate::scalar::{rat, rational_sqrt_exact, Scalar, SymbolTable};

/// What the classification is allowed to assume about the manifold.
#[derive(Debug, Clone)]
pub enum ManifoldSpec {
    /// Blow-up of the projective plane: line period lambda, blow-up sizes.
    CP2Blowups { lambda: Scalar, deltas: Vec<Scalar> },
    /// Product of spheres with factor areas a >= b.
    S2xS2 { a: Scalar, b: Scalar },
    /// Raw invariants; candidate chopping sizes are caller-supplied.
    RawInvariants {
        perimeter: Scalar,
        area: Scalar,
        b2: u32,
        candidate_sizes: Vec<Scalar>,
        parity: Option<Parity>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    CandidateSuperset,
}

/// One equivalence class of toric actions: its canonical moment polygon, a
/// decomposition witnessing the structure, and the symplectomorphism label of
/// the root.
#[derive(Debug, Clone)]
pub struct ClassifiedAction {
    pub polygon: DelzantPolygon,
    pub decomposition: Decomposition,
    pub label: String,
}

#[derive(Debug, Clone)]
pub struct ClassificationResult {
    pub classes: Vec<ClassifiedAction>,
    pub exactness: Exactness,
}

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    /// Discard candidate polygons whose intersection-form parity contradicts
    /// the manifold (even for the sphere product, odd for blow-ups).
    pub parity_filter: bool,
    /// Replace the computed candidate chopping sizes.
    pub candidate_sizes_override: Option<Vec<Scalar>>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            parity_filter: true,
            candidate_sizes_override: None,
        }
    }
}

/// Shared numeric invariants extracted from a spec.
struct SpecData {
    perimeter: Scalar,
    area: Scalar,
    b2: u32,
    parity: Option<Parity>,
    form: Option<BlowupForm>,
    known_sides: Option<(Scalar, Scalar)>,
    given_sizes: Option<Vec<Scalar>>,
}

fn spec_data(spec: &ManifoldSpec, table: &Arc<SymbolTable>) -> Result<SpecData> {
    match spec {
        ManifoldSpec::CP2Blowups { lambda, deltas } => {
            let form = BlowupForm::new(table.clone(), lambda.clone(), deltas.clone())?;
            let mut perimeter = lambda.scale(&rat(3, 1));
            let mut area = (lambda * lambda).half();
            for d in deltas {
                perimeter = &perimeter - d;
                area = &area - &(d * d).half();
            }
            Ok(SpecData {
                perimeter,
                area,
                b2: 1 + deltas.len() as u32,
                parity: Some(Parity::Odd),
                form: Some(form),
                known_sides: None,
                given_sizes: None,
            })
        }
        ManifoldSpec::S2xS2 { a, b } => {
            for v in [a, b] {
                if table.sign(v)? != Ordering::Greater {
                    return Err(Error::NotProperInput);
                }
            }
            // normalize the factor order so that a >= b
            let (a, b) = match table.compare(a, b)? {
                Ordering::Less => (b.clone(), a.clone()),
                _ => (a.clone(), b.clone()),
            };
            Ok(SpecData {
                perimeter: (&a + &b).scale(&rat(2, 1)),
                area: &a * &b,
                b2: 2,
                parity: Some(Parity::Even),
                form: None,
                known_sides: Some((a, b)),
                given_sizes: None,
            })
        }
        ManifoldSpec::RawInvariants {
            perimeter,
            area,
            b2,
            candidate_sizes,
            parity,
        } => {
            if table.sign(perimeter)? != Ordering::Greater
                || table.sign(area)? != Ordering::Greater
                || *b2 < 1
            {
                return Err(Error::NotProperInput);
            }
            Ok(SpecData {
                perimeter: perimeter.clone(),
                area: area.clone(),
                b2: *b2,
                parity: *parity,
                form: None,
                known_sides: None,
                given_sizes: Some(candidate_sizes.clone()),
            })
        }
    }
}

/// Sort scalars by the certified order and drop exact duplicates.
fn sorted_dedup(table: &SymbolTable, mut v: Vec<Scalar>) -> Result<Vec<Scalar>> {
    let mut err = None;
    v.sort_by(|a, b| match table.compare(a, b) {
        Ok(o) => o,
        Err(e) => {
            err.get_or_insert(e);
            Ordering::Equal
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    v.dedup();
    Ok(v)
}

/// The finite set of chopping sizes that can occur for this manifold: the
/// periods of self-intersection -1 lattice classes inside the window
/// (0, 2^{b2} * perimeter), computed exactly.
pub fn candidate_sizes(spec: &ManifoldSpec, table: &Arc<SymbolTable>) -> Result<Vec<Scalar>> {
    let data = spec_data(spec, table)?;
    let window = data.perimeter.scale(&rat(1i64 << data.b2.min(32), 1));
    match (&data.form, &data.given_sizes) {
        (_, Some(given)) => {
            let mut kept = Vec::new();
            for s in given {
                if table.sign(s)? == Ordering::Greater
                    && table.compare(s, &window)? == Ordering::Less
                {
                    kept.push(s.clone());
                }
            }
            sorted_dedup(table, kept)
        }
        (Some(form), None) => {
            let classes = enumerate_classes(form, -1, &window, None)?;
            let mut periods = Vec::new();
            for c in classes {
                let (_, period, _) = evaluate(form, &c)?;
                if table.sign(&period)? == Ordering::Greater
                    && table.compare(&period, &window)? == Ordering::Less
                {
                    periods.push(period);
                }
            }
            sorted_dedup(table, periods)
        }
        (None, None) => Ok(Vec::new()), // sphere product: no choppings occur
    }
}

/// Candidate side lengths b of the trapezoid root for one chopping tuple,
/// each certified against b * (sigma - b) = pi.
///
/// For blow-up specs the candidates are periods of lattice classes with
/// self-intersection 0 and c1 = 2 (the fiber classes); for the sphere
/// product the sides are known; for raw rational invariants the quadratic is
/// solved and only rational roots are kept. Both roots of the quadratic are
/// viable: trapezoids with a < b occur for k = 1, so no a >= b normalization
/// is applied here.
fn side_candidates(
    data: &SpecData,
    table: &Arc<SymbolTable>,
    sigma: &Scalar,
    pi: &Scalar,
) -> Result<Vec<Scalar>> {
    if let Some((a, b)) = &data.known_sides {
        debug_assert!((&(a * b) - pi).is_zero());
        return Ok(vec![b.clone()]);
    }
    if let Some(form) = &data.form {
        let classes = enumerate_classes(form, 0, sigma, Some(2))?;
        let mut out = Vec::new();
        for c in classes {
            let (_, period, _) = evaluate(form, &c)?;
            let product = &period * &(sigma - &period);
            if (&product - pi).is_zero() {
                out.push(period);
            }
        }
        return sorted_dedup(table, out);
    }
    // raw invariants: rational quadratic with rational-root test
    let (sr, pr) = match (sigma.as_rational(), pi.as_rational()) {
        (Some(s), Some(p)) => (s, p),
        _ => return Ok(Vec::new()),
    };
    let disc = &sr * &sr - rat(4, 1) * &pr;
    let root = match rational_sqrt_exact(&disc) {
        Some(r) => r,
        None => return Ok(Vec::new()),
    };
    let half = rat(1, 2);
    let b1 = (&sr - &root) * &half;
    let b2 = (&sr + &root) * &half;
    let mut out = vec![Scalar::from_rational(b1)];
    let second = Scalar::from_rational(b2);
    if out[0] != second {
        out.push(second);
    }
    Ok(out)
}

/// Key for memoizing search states: canonical polygon serialization plus the
/// remaining multiset.
fn state_key(canonical: &DelzantPolygon, remaining: &[Scalar]) -> String {
    let mut key = json::polygon_to_canonical_string(canonical);
    key.push('|');
    for d in remaining {
        key.push_str(&format!("{d};"));
    }
    key
}

struct Search<'a> {
    parity: Option<Parity>,
    parity_filter: bool,
    expected_perimeter: &'a Scalar,
    expected_area: &'a Scalar,
    visited: BTreeSet<String>,
    /// canonical serialization -> classified action
    found: BTreeMap<String, ClassifiedAction>,
}

impl<'a> Search<'a> {
    /// Depth-first over (polygon, remaining multiset) states; polygons are in
    /// the standard frame of their root so the chop path doubles as a
    /// decomposition.
    fn run(
        &mut self,
        root: &RootShape,
        polygon: DelzantPolygon,
        path: Vec<ChopLocator>,
        remaining: &[Scalar],
    ) -> Result<()> {
        let canon = canonical_form(&polygon)?;
        let key = state_key(&canon.polygon, remaining);
        if !self.visited.insert(key) {
            return Ok(());
        }
        if remaining.is_empty() {
            self.accept(root, polygon, path, canon.polygon, canon.witness)?;
            return Ok(());
        }
        for (i, delta) in remaining.iter().enumerate() {
            if i > 0 && remaining[i - 1] == *delta {
                continue; // same size, same set of placements
            }
            let mut rest: Vec<Scalar> = remaining.to_vec();
            rest.remove(i);
            for v in 0..polygon.edge_count() {
                match polygon.chop(v, delta) {
                    Ok(step) => {
                        let mut path = path.clone();
                        path.push(ChopLocator {
                            vertex: polygon.vertices()[v].clone(),
                            delta: delta.clone(),
                        });
                        self.run(root, step.after.as_ref().clone(), path, &rest)?;
                    }
                    Err(Error::ChopTooLarge) => continue,
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(())
    }

    fn accept(
        &mut self,
        root: &RootShape,
        polygon: DelzantPolygon,
        path: Vec<ChopLocator>,
        canonical: DelzantPolygon,
        witness: UnimodularAffineMap,
    ) -> Result<()> {
        debug_assert_eq!(&polygon.perimeter(), self.expected_perimeter);
        debug_assert_eq!(&polygon.area(), self.expected_area);
        if self.parity_filter {
            if let Some(required) = self.parity {
                if intersection_form(&canonical)?.parity != required {
                    return Ok(());
                }
            }
        }
        let key = json::polygon_to_canonical_string(&canonical);
        if self.found.contains_key(&key) {
            return Ok(());
        }
        // the chop path replays from the standard root onto `polygon`; the
        // canonical witness then carries it onto the canonical polygon
        let decomposition = Decomposition {
            root: root.clone(),
            steps: path,
            witness,
        };
        let label = symplectomorphism_type(root);
        self.found.insert(
            key,
            ClassifiedAction {
                polygon: canonical,
                decomposition,
                label,
            },
        );
        Ok(())
    }
}

/// Enumerate the equivalence classes of toric actions compatible with the
/// spec. Always terminates with a finite list; every returned polygon has the
/// spec's perimeter, area, and b2 + 2 edges exactly.
pub fn classify(
    spec: &ManifoldSpec,
    table: &Arc<SymbolTable>,
    options: &ClassifyOptions,
) -> Result<ClassificationResult> {
    let data = spec_data(spec, table)?;

    if data.b2 == 1 {
        // a single class: the triangle with perimeter 3*lambda
        let lambda = data.perimeter.scale(&rat(1, 3));
        let expected_area = (&lambda * &lambda).half();
        if (&expected_area - &data.area).is_zero() {
            let root = RootShape::Triangle { lambda };
            let std = root.standard_polygon(table.clone())?;
            let canon = canonical_form(&std)?;
            let action = ClassifiedAction {
                label: symplectomorphism_type(&root),
                decomposition: Decomposition {
                    root,
                    steps: Vec::new(),
                    witness: canon.witness,
                },
                polygon: canon.polygon,
            };
            return Ok(ClassificationResult {
                classes: vec![action],
                exactness: Exactness::Exact,
            });
        }
        return Ok(ClassificationResult {
            classes: Vec::new(),
            exactness: Exactness::Exact,
        });
    }

    let s = (data.b2 - 2) as usize;
    let sizes = match &options.candidate_sizes_override {
        Some(v) => sorted_dedup(table, v.clone())?,
        None => candidate_sizes(spec, table)?,
    };

    let mut search = Search {
        parity: data.parity,
        parity_filter: options.parity_filter,
        expected_perimeter: &data.perimeter,
        expected_area: &data.area,
        visited: BTreeSet::new(),
        found: BTreeMap::new(),
    };

    for tuple in sizes.iter().combinations_with_replacement(s) {
        let mut sum = Scalar::zero();
        let mut sum_sq = Scalar::zero();
        for d in &tuple {
            sum = &sum + *d;
            sum_sq = &sum_sq + &(*d * *d);
        }
        // invert the perimeter/area drop along the chopping sequence
        let sigma = (&data.perimeter + &sum).half(); // a + b
        let pi = &data.area + &sum_sq.half(); // a * b

        for b in side_candidates(&data, table, &sigma, &pi)? {
            let a = &sigma - &b;
            if table.sign(&a)? != Ordering::Greater || table.sign(&b)? != Ordering::Greater {
                continue;
            }
            let mut k = 0u32;
            loop {
                let slack = &a - &b.half().scale(&rat(k as i64, 1));
                if table.sign(&slack)? != Ordering::Greater {
                    break;
                }
                let root = RootShape::Hirzebruch {
                    a: a.clone(),
                    b: b.clone(),
                    k,
                };
                let std = root.standard_polygon(table.clone())?;
                let multiset: Vec<Scalar> = tuple.iter().map(|d| (*d).clone()).collect();
                search.run(&root, std, Vec::new(), &multiset)?;
                k += 1;
            }
        }
    }

    let exactness = match spec {
        ManifoldSpec::CP2Blowups { .. } if s >= 1 => Exactness::CandidateSuperset,
        ManifoldSpec::CP2Blowups { .. } => Exactness::Exact,
        ManifoldSpec::S2xS2 { .. } => Exactness::Exact,
        ManifoldSpec::RawInvariants { .. } => Exactness::CandidateSuperset,
    };
    Ok(ClassificationResult {
        classes: search.found.into_values().collect(),
        exactness,
    })
}

/// Number of inequivalent toric actions on the product of spheres with factor
/// areas a >= b: the even k >= 0 with a - k*b/2 > 0, counted by certified
/// comparison.
pub fn count_s2s2_actions(table: &SymbolTable, a: &Scalar, b: &Scalar) -> Result<usize> {
    if table.sign(a)? != Ordering::Greater || table.sign(b)? != Ordering::Greater {
        return Err(Error::NotProperInput);
    }
    let (a, b) = match table.compare(a, b)? {
        Ordering::Less => (b, a),
        _ => (a, b),
    };
    let mut count = 0;
    let mut k = 0i64;
    loop {
        let slack = a - &b.half().scale(&rat(k, 1));
        if table.sign(&slack)? != Ordering::Greater {
            break;
        }
        count += 1;
        k += 2;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::decompose;
    use crate::polygon::congruent;

    fn table() -> Arc<SymbolTable> {
        Arc::new(SymbolTable::new())
    }

    fn h(a: i64, b: i64, k: u32) -> DelzantPolygon {
        DelzantPolygon::hirzebruch_trapezoid(table(), &Scalar::from_int(a), &Scalar::from_int(b), k)
            .unwrap()
    }

    #[test]
    fn cp2_no_blowups_single_class() {
        let t = table();
        let spec = ManifoldSpec::CP2Blowups {
            lambda: Scalar::from_int(3),
            deltas: vec![],
        };
        let result = classify(&spec, &t, &ClassifyOptions::default()).unwrap();
        assert_eq!(result.classes.len(), 1);
        assert_eq!(result.exactness, Exactness::Exact);
        assert_eq!(result.classes[0].label, "CP²(3)");
        let tri = DelzantPolygon::delzant_triangle(t, &Scalar::from_int(3)).unwrap();
        assert!(congruent(&result.classes[0].polygon, &tri).unwrap());
    }

    #[test]
    fn s2s2_three_one() {
        let t = table();
        let spec = ManifoldSpec::S2xS2 {
            a: Scalar::from_int(3),
            b: Scalar::one(),
        };
        let result = classify(&spec, &t, &ClassifyOptions::default()).unwrap();
        assert_eq!(result.exactness, Exactness::Exact);
        assert_eq!(result.classes.len(), 3);
        for k in [0u32, 2, 4] {
            let expected = h(3, 1, k);
            assert!(
                result
                    .classes
                    .iter()
                    .any(|c| congruent(&c.polygon, &expected).unwrap()),
                "missing H(3,1,{k})"
            );
        }
        assert_eq!(
            count_s2s2_actions(&t, &Scalar::from_int(3), &Scalar::one()).unwrap(),
            3
        );
    }

    #[test]
    fn count_s2s2_edge_cases() {
        let t = table();
        assert_eq!(
            count_s2s2_actions(&t, &Scalar::one(), &Scalar::one()).unwrap(),
            1
        );
        // symmetric in its arguments
        assert_eq!(
            count_s2s2_actions(&t, &Scalar::one(), &Scalar::from_int(3)).unwrap(),
            3
        );
    }

    #[test]
    fn cp2_one_blowup_parity_filtered() {
        let t = table();
        let spec = ManifoldSpec::CP2Blowups {
            lambda: Scalar::from_int(3),
            deltas: vec![Scalar::one()],
        };
        let result = classify(&spec, &t, &ClassifyOptions::default()).unwrap();
        assert_eq!(result.exactness, Exactness::Exact);
        assert_eq!(result.classes.len(), 1);
        let expected = h(2, 2, 1);
        assert!(congruent(&result.classes[0].polygon, &expected).unwrap());
        // and it is the chop of the triangle
        let tri = DelzantPolygon::delzant_triangle(t.clone(), &Scalar::from_int(3)).unwrap();
        let chopped = tri.chop(1, &Scalar::one()).unwrap();
        assert!(congruent(&result.classes[0].polygon, &chopped.after).unwrap());

        // without the parity filter the even twin shows up as well
        let no_filter = ClassifyOptions {
            parity_filter: false,
            ..Default::default()
        };
        let loose = classify(&spec, &t, &no_filter).unwrap();
        assert_eq!(loose.classes.len(), 2);
    }

    #[test]
    fn cp2_small_blowup_recovers_wide_fiber() {
        // lambda = 3, delta = 1/2: the only class is the trapezoid with
        // a < b, which requires accepting both quadratic roots.
        let t = table();
        let spec = ManifoldSpec::CP2Blowups {
            lambda: Scalar::from_int(3),
            deltas: vec![Scalar::from_rational(rat(1, 2))],
        };
        let result = classify(&spec, &t, &ClassifyOptions::default()).unwrap();
        assert_eq!(result.classes.len(), 1);
        let tri = DelzantPolygon::delzant_triangle(t, &Scalar::from_int(3)).unwrap();
        let chopped = tri.chop(1, &Scalar::from_rational(rat(1, 2))).unwrap();
        assert!(congruent(&result.classes[0].polygon, &chopped.after).unwrap());
    }

    #[test]
    fn candidate_sizes_single_blowup() {
        let t = table();
        let spec = ManifoldSpec::CP2Blowups {
            lambda: Scalar::from_int(3),
            deltas: vec![Scalar::one()],
        };
        let d = candidate_sizes(&spec, &t).unwrap();
        // the only -1 classes in Z^{1,1} are +-E1; within (0, 32) that is E1
        assert_eq!(d, vec![Scalar::one()]);
    }

    #[test]
    fn two_blowups_candidate_superset() {
        let t = table();
        let spec = ManifoldSpec::CP2Blowups {
            lambda: Scalar::from_int(4),
            deltas: vec![Scalar::one(), Scalar::one()],
        };
        let result = classify(&spec, &t, &ClassifyOptions::default()).unwrap();
        assert_eq!(result.exactness, Exactness::CandidateSuperset);
        assert!(!result.classes.is_empty());
        // the honest double chop of the triangle is among the classes
        let tri = DelzantPolygon::delzant_triangle(t.clone(), &Scalar::from_int(4)).unwrap();
        let once = tri.chop(0, &Scalar::one()).unwrap();
        let twice_at = once
            .after
            .vertices()
            .iter()
            .position(|v| *v == crate::polygon::Point::from_ints(4, 0))
            .unwrap();
        let twice = once.after.chop(twice_at, &Scalar::one()).unwrap();
        assert!(result
            .classes
            .iter()
            .any(|c| congruent(&c.polygon, &twice.after).unwrap()));
        // every class: 5 edges, exact invariants, odd parity, deltas from D
        let d = candidate_sizes(&spec, &t).unwrap();
        for class in &result.classes {
            assert_eq!(class.polygon.edge_count(), 5);
            assert_eq!(class.polygon.perimeter(), Scalar::from_int(10));
            let f = intersection_form(&class.polygon).unwrap();
            assert_eq!(f.parity, Parity::Odd);
            let dec = decompose(&class.polygon, false).unwrap();
            for delta in dec.deltas() {
                assert!(d.contains(&delta), "delta {delta} outside candidate set");
            }
        }
    }

    #[test]
    fn replayed_decompositions_match_outputs() {
        let t = table();
        let spec = ManifoldSpec::S2xS2 {
            a: Scalar::from_int(3),
            b: Scalar::one(),
        };
        let result = classify(&spec, &t, &ClassifyOptions::default()).unwrap();
        for class in &result.classes {
            let replayed =
                crate::decomposition::replay(&class.decomposition, t.clone()).unwrap();
            assert!(congruent(&replayed, &class.polygon).unwrap());
        }
    }

    #[test]
    fn raw_invariants_monotone_superset() {
        let t = table();
        // invariants of the twice-chopped square of side 3 (sizes 1 and 1)
        let base = ManifoldSpec::RawInvariants {
            perimeter: Scalar::from_int(10),
            area: Scalar::from_int(8),
            b2: 4,
            candidate_sizes: vec![Scalar::one()],
            parity: None,
        };
        let small = classify(&base, &t, &ClassifyOptions::default()).unwrap();
        let wider = ManifoldSpec::RawInvariants {
            perimeter: Scalar::from_int(10),
            area: Scalar::from_int(8),
            b2: 4,
            candidate_sizes: vec![Scalar::one(), Scalar::from_int(2)],
            parity: None,
        };
        let large = classify(&wider, &t, &ClassifyOptions::default()).unwrap();
        assert!(small.classes.len() <= large.classes.len());
        for c in &small.classes {
            assert!(large
                .classes
                .iter()
                .any(|d| congruent(&c.polygon, &d.polygon).unwrap()));
        }
    }

    #[test]
    fn scale_equivariance() {
        let t = table();
        let spec1 = ManifoldSpec::CP2Blowups {
            lambda: Scalar::from_int(3),
            deltas: vec![Scalar::one()],
        };
        let spec2 = ManifoldSpec::CP2Blowups {
            lambda: Scalar::from_int(6),
            deltas: vec![Scalar::from_int(2)],
        };
        let r1 = classify(&spec1, &t, &ClassifyOptions::default()).unwrap();
        let r2 = classify(&spec2, &t, &ClassifyOptions::default()).unwrap();
        assert_eq!(r1.classes.len(), r2.classes.len());
        for (c1, c2) in r1.classes.iter().zip(&r2.classes) {
            // doubling the spec doubles the moment polygon
            let scaled: Vec<crate::polygon::Point> = c1
                .polygon
                .vertices()
                .iter()
                .map(|p| crate::polygon::Point::new(
                    p.x.scale(&rat(2, 1)),
                    p.y.scale(&rat(2, 1)),
                ))
                .collect();
            let scaled = DelzantPolygon::validate(t.clone(), scaled).unwrap();
            assert!(congruent(&scaled, &c2.polygon).unwrap());
        }
    }
}
