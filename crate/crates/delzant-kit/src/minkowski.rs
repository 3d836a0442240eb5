//! Lattice enumeration in Z^{1,k} with the Minkowski form diag(+1,-1,..,-1).
//!
//! A class d*L - sum m_i*E_i has self-intersection d^2 - sum m_i^2, period
//! d*lambda - sum m_i*delta_i, and first Chern pairing 3d - sum m_i. Because
//! the total volume lambda^2 - sum delta_i^2 is positive, the period map is
//! proper on each self-intersection level set, which makes the set of classes
//! with period in a window [0, K] finite and effectively enumerable.
//!
//! Pruning bounds use outward-rounded rational interval arithmetic over the
//! symbol enclosures (square roots included); membership of every surviving
//! candidate is then decided exactly by certified comparison.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{rat_int, RatInterval, Rational, Scalar, SymbolTable};

/// Exact description of a k-fold blow-up form: the line period and the
/// blow-up periods, with certified positive total volume.
#[derive(Debug, Clone)]
pub struct BlowupForm {
    lambda: Scalar,
    deltas: Vec<Scalar>,
    table: std::sync::Arc<SymbolTable>,
}

impl BlowupForm {
    pub fn new(
        table: std::sync::Arc<SymbolTable>,
        lambda: Scalar,
        deltas: Vec<Scalar>,
    ) -> Result<Self> {
        if table.sign(&lambda)? != Ordering::Greater {
            return Err(Error::NotProperInput);
        }
        let mut sq_sum = Scalar::zero();
        for d in &deltas {
            if table.sign(d)? != Ordering::Greater {
                return Err(Error::NotProperInput);
            }
            sq_sum = &sq_sum + &(d * d);
        }
        let volume = &(&lambda * &lambda) - &sq_sum;
        if table.sign(&volume)? != Ordering::Greater {
            return Err(Error::NotProperInput);
        }
        Ok(BlowupForm {
            lambda,
            deltas,
            table,
        })
    }

    pub fn blowups(&self) -> usize {
        self.deltas.len()
    }

    pub fn lambda(&self) -> &Scalar {
        &self.lambda
    }

    pub fn deltas(&self) -> &[Scalar] {
        &self.deltas
    }

    pub fn table(&self) -> &std::sync::Arc<SymbolTable> {
        &self.table
    }
}

/// The class d*L - sum m_i*E_i in integral coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MinkowskiClass {
    pub d: i64,
    pub m: Vec<i64>,
}

impl MinkowskiClass {
    pub fn new(d: i64, m: Vec<i64>) -> Self {
        MinkowskiClass { d, m }
    }

    pub fn self_intersection(&self) -> i64 {
        self.d * self.d - self.m.iter().map(|v| v * v).sum::<i64>()
    }

    pub fn c1(&self) -> i64 {
        3 * self.d - self.m.iter().sum::<i64>()
    }

    pub fn is_zero(&self) -> bool {
        self.d == 0 && self.m.iter().all(|&v| v == 0)
    }
}

/// Exact evaluation of a class against a form: (self-intersection, period, c1).
pub fn evaluate(f: &BlowupForm, class: &MinkowskiClass) -> Result<(i64, Scalar, i64)> {
    if class.m.len() != f.deltas.len() {
        return Err(Error::Parse(format!(
            "class has {} blow-up coordinates, form has {}",
            class.m.len(),
            f.deltas.len()
        )));
    }
    let mut period = f.lambda.scale(&rat_int(class.d));
    for (m, delta) in class.m.iter().zip(&f.deltas) {
        if *m != 0 {
            period = &period - &delta.scale(&rat_int(*m));
        }
    }
    Ok((class.self_intersection(), period, class.c1()))
}

const SQRT_DIGITS: u32 = 12;

fn isqrt_floor(v: i64) -> i64 {
    if v <= 0 {
        return 0;
    }
    let mut r = (v as f64).sqrt() as i64;
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    while r * r > v {
        r -= 1;
    }
    r
}

fn rational_ceil(q: &Rational) -> i64 {
    use num_traits::ToPrimitive;
    q.ceil().to_integer().to_i64().unwrap_or(i64::MAX / 2)
}

struct EnumContext<'a> {
    form: &'a BlowupForm,
    alpha: i64,
    c1: Option<i64>,
    window_hi: &'a Scalar,
    lambda_iv: RatInterval,
    delta_iv: Vec<RatInterval>,
    /// suffix_sq[j] encloses the sum of delta_i^2 over i >= j
    suffix_sq: Vec<RatInterval>,
    k_hi: Rational,
}

impl<'a> EnumContext<'a> {
    fn new(
        form: &'a BlowupForm,
        alpha: i64,
        c1: Option<i64>,
        window_hi: &'a Scalar,
    ) -> Result<Self> {
        let table = form.table();
        let lambda_iv = table.enclosure(&form.lambda)?;
        let delta_iv: Vec<RatInterval> = form
            .deltas
            .iter()
            .map(|d| table.enclosure(d))
            .collect::<Result<_>>()?;
        let k = form.blowups();
        let mut suffix_sq = vec![RatInterval::zero(); k + 1];
        for j in (0..k).rev() {
            suffix_sq[j] = suffix_sq[j + 1].add(&delta_iv[j].mul(&delta_iv[j]));
        }
        let k_hi = table.enclosure(window_hi)?.hi;
        Ok(EnumContext {
            form,
            alpha,
            c1,
            window_hi,
            lambda_iv,
            delta_iv,
            suffix_sq,
            k_hi,
        })
    }

    /// Range of d that can possibly meet the window. `None` signals that the
    /// current enclosures are too loose to separate the volume from zero.
    fn d_bounds(&self) -> Option<(i64, i64)> {
        let s_hi = self.suffix_sq[0].sqrt_outer(SQRT_DIGITS).hi;
        let lambda_lo = &self.lambda_iv.lo;
        let gap = lambda_lo - &s_hi;
        if !gap.is_positive() {
            return None;
        }
        let k_hi = if self.k_hi.is_negative() {
            Rational::zero()
        } else {
            self.k_hi.clone()
        };
        let abs_alpha = rat_int(self.alpha.abs());
        // From d*lambda - S*sqrt(d^2 - alpha) <= K:
        // d <= max(K/lambda, (2*lambda*K + S^2*|alpha|) / (lambda^2 - S^2)).
        let bound1 = &k_hi / lambda_lo;
        let denom = lambda_lo * lambda_lo - &s_hi * &s_hi;
        let bound2 =
            (rat_int(2) * lambda_lo * &k_hi + &s_hi * &s_hi * &abs_alpha) / &denom;
        let d_max = rational_ceil(&std::cmp::max(bound1, bound2)) + 1;
        // Negative d needs alpha < 0: |d| <= S*sqrt(-alpha)/sqrt(lambda^2-S^2).
        let d_min = if self.alpha < 0 {
            let num = &s_hi
                * &RatInterval::point(abs_alpha)
                    .sqrt_outer(SQRT_DIGITS)
                    .hi;
            let den = RatInterval::new(denom.clone(), denom)
                .sqrt_outer(SQRT_DIGITS)
                .lo;
            if den.is_positive() {
                -(rational_ceil(&(num / den)) + 1)
            } else {
                -d_max
            }
        } else {
            0
        };
        Some((d_min, d_max))
    }

    /// All classes with the given d, in lexicographic m order.
    fn enumerate_for_d(&self, d: i64) -> Result<Vec<MinkowskiClass>> {
        let target = d * d - self.alpha; // required sum of m_i^2
        if target < 0 {
            return Ok(Vec::new());
        }
        let k = self.form.blowups();
        if k == 0 {
            if target != 0 {
                return Ok(Vec::new());
            }
            let class = MinkowskiClass::new(d, Vec::new());
            return if self.accept(&class)? {
                Ok(vec![class])
            } else {
                Ok(Vec::new())
            };
        }
        let mut out = Vec::new();
        let mut m = vec![0i64; k];
        let d_lambda = self.lambda_iv.scale(&rat_int(d));
        self.recurse(d, 0, target, &d_lambda, &mut m, &mut out)?;
        Ok(out)
    }

    fn recurse(
        &self,
        d: i64,
        level: usize,
        remaining_sq: i64,
        prefix_period: &RatInterval,
        m: &mut Vec<i64>,
        out: &mut Vec<MinkowskiClass>,
    ) -> Result<()> {
        let k = self.form.blowups();
        if level == k {
            if remaining_sq == 0 {
                let class = MinkowskiClass::new(d, m.clone());
                if self.accept(&class)? {
                    out.push(class);
                }
            }
            return Ok(());
        }
        // c1 feasibility of the suffix, by Cauchy-Schwarz
        if let Some(c1) = self.c1 {
            let partial: i64 = m[..level].iter().sum();
            let needed = 3 * d - c1 - partial;
            let remaining_levels = (k - level) as i64;
            if needed * needed > remaining_sq * remaining_levels {
                return Ok(());
            }
        }
        // period feasibility: the suffix contributes at most
        // sqrt(remaining_sq * suffix delta^2) in either direction
        let radius = self.suffix_sq[level]
            .scale(&rat_int(remaining_sq))
            .sqrt_outer(SQRT_DIGITS)
            .hi;
        let lo = &prefix_period.lo - &radius;
        let hi = &prefix_period.hi + &radius;
        if hi.is_negative() || lo > self.k_hi {
            return Ok(());
        }
        let bound = isqrt_floor(remaining_sq);
        for v in -bound..=bound {
            m[level] = v;
            let next_period = if v == 0 {
                prefix_period.clone()
            } else {
                prefix_period.add(&self.delta_iv[level].scale(&rat_int(-v)))
            };
            self.recurse(d, level + 1, remaining_sq - v * v, &next_period, m, out)?;
        }
        m[level] = 0;
        Ok(())
    }

    /// Exact membership: self-intersection and c1 by integer arithmetic,
    /// the period window by certified comparison.
    fn accept(&self, class: &MinkowskiClass) -> Result<bool> {
        if class.self_intersection() != self.alpha {
            return Ok(false);
        }
        if self.alpha >= 0 && class.is_zero() {
            return Ok(false);
        }
        if let Some(c1) = self.c1 {
            if class.c1() != c1 {
                return Ok(false);
            }
        }
        let table = self.form.table();
        let (_, period, _) = evaluate(self.form, class)?;
        if table.sign(&period)? == Ordering::Less {
            return Ok(false);
        }
        if table.compare(&period, self.window_hi)? == Ordering::Greater {
            return Ok(false);
        }
        Ok(true)
    }
}

/// The complete finite set of classes with self-intersection `alpha`, period
/// in [0, K], and optionally prescribed c1, sorted by d then lexicographically
/// by m. The zero class is excluded when alpha >= 0.
pub fn enumerate_classes(
    f: &BlowupForm,
    alpha: i64,
    window_hi: &Scalar,
    c1: Option<i64>,
) -> Result<Vec<MinkowskiClass>> {
    // Outward bounds can be too slack on coarse enclosures; refine the table
    // until the volume gap is visible to the intervals.
    let mut form = f.clone();
    let mut tries = 0;
    loop {
        let ctx = EnumContext::new(&form, alpha, c1, window_hi)?;
        match ctx.d_bounds() {
            None => {
                if tries >= 8 {
                    return Err(Error::Undecidable {
                        context: "interval enclosures cannot separate the volume from zero"
                            .into(),
                        rounds: form.table().precision_cap(),
                    });
                }
                let refined = std::sync::Arc::new(form.table().refined(8));
                form = BlowupForm::new(refined, form.lambda.clone(), form.deltas.clone())?;
                tries += 1;
            }
            Some((d_min, d_max)) => {
                // shard by d; shards are independent and internally ordered
                let shards: Vec<Result<Vec<MinkowskiClass>>> = (d_min..=d_max)
                    .collect::<Vec<_>>()
                    .par_iter()
                    .map(|&d| ctx.enumerate_for_d(d))
                    .collect();
                let mut out = Vec::new();
                for shard in shards {
                    out.extend(shard?);
                }
                return Ok(out);
            }
        }
    }
}

/// Number of classes with self-intersection -1 and c1 = 1 on the k-fold
/// blow-up lattice, with no period window. Finite for k <= 8 because the
/// anticanonical class still has positive square there; the Cauchy-Schwarz
/// bound (3d-1)^2 <= k(d^2+1) pins d.
pub fn del_pezzo_exceptional_count(k: u32) -> Result<u64> {
    if !(1..=8).contains(&k) {
        return Err(Error::DelPezzoRange(k));
    }
    let kk = k as i64;
    // (9 - k) d^2 - 6d + (1 - k) <= 0
    let a = 9 - kk;
    let disc = 36 - 4 * a * (1 - kk);
    let sq = isqrt_floor(disc);
    let d_lo = (6 - sq).div_euclid(2 * a) - 1;
    let d_hi = (6 + sq).div_euclid(2 * a) + 1;
    let mut count = 0u64;
    for d in d_lo..=d_hi {
        let target_sq = d * d + 1;
        let target_sum = 3 * d - 1;
        count += count_vectors(k as usize, target_sq, target_sum);
    }
    Ok(count)
}

/// Number of integer vectors of the given length with prescribed sum of
/// squares and sum, by depth-first search with Cauchy-Schwarz pruning.
fn count_vectors(len: usize, sum_sq: i64, sum: i64) -> u64 {
    if len == 0 {
        return (sum_sq == 0 && sum == 0) as u64;
    }
    if sum_sq < 0 || sum * sum > sum_sq * len as i64 {
        return 0;
    }
    let bound = isqrt_floor(sum_sq);
    let mut total = 0;
    for v in -bound..=bound {
        total += count_vectors(len - 1, sum_sq - v * v, sum - v);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn rational_form(lambda: i64, deltas: &[(i64, i64)]) -> BlowupForm {
        let table = Arc::new(SymbolTable::new());
        BlowupForm::new(
            table,
            Scalar::from_int(lambda),
            deltas
                .iter()
                .map(|&(n, d)| Scalar::from_rational(crate::scalar::rat(n, d)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn evaluate_basis_classes() {
        let f = rational_form(3, &[(1, 1), (1, 1)]);
        // E1 is d = 0, m = (-1, 0)
        let e1 = MinkowskiClass::new(0, vec![-1, 0]);
        let (s, p, c) = evaluate(&f, &e1).unwrap();
        assert_eq!(s, -1);
        assert_eq!(p, Scalar::from_int(1));
        assert_eq!(c, 1);
        // L - E1 - E2
        let cls = MinkowskiClass::new(1, vec![1, 1]);
        let (s, p, c) = evaluate(&f, &cls).unwrap();
        assert_eq!(s, -1);
        assert_eq!(p, Scalar::from_int(1));
        assert_eq!(c, 1);
        // L
        let l = MinkowskiClass::new(1, vec![0, 0]);
        let (s, p, c) = evaluate(&f, &l).unwrap();
        assert_eq!(s, 1);
        assert_eq!(p, Scalar::from_int(3));
        assert_eq!(c, 3);
    }

    #[test]
    fn single_blowup_exceptional() {
        let f = rational_form(3, &[(1, 1)]);
        let classes = enumerate_classes(&f, -1, &Scalar::from_int(10), None).unwrap();
        assert_eq!(classes, vec![MinkowskiClass::new(0, vec![-1])]);
    }

    #[test]
    fn two_blowups_exceptional_with_c1() {
        let f = rational_form(3, &[(1, 1), (1, 1)]);
        let classes = enumerate_classes(&f, -1, &Scalar::from_int(10), Some(1)).unwrap();
        assert_eq!(
            classes,
            vec![
                MinkowskiClass::new(0, vec![-1, 0]),
                MinkowskiClass::new(0, vec![0, -1]),
                MinkowskiClass::new(1, vec![1, 1]),
            ]
        );
    }

    #[test]
    fn alpha_zero_fiber_classes() {
        let f = rational_form(3, &[(1, 1)]);
        let classes = enumerate_classes(&f, 0, &Scalar::from_int(10), Some(2)).unwrap();
        assert_eq!(classes, vec![MinkowskiClass::new(1, vec![1])]);
    }

    #[test]
    fn zero_class_excluded_for_alpha_zero() {
        let f = rational_form(3, &[(1, 1)]);
        let classes = enumerate_classes(&f, 0, &Scalar::from_int(10), None).unwrap();
        assert!(classes.iter().all(|c| !c.is_zero()));
    }

    #[test]
    fn not_proper_input() {
        let table = Arc::new(SymbolTable::new());
        let err =
            BlowupForm::new(table, Scalar::from_int(2), vec![Scalar::from_int(2)]).unwrap_err();
        assert!(matches!(err, Error::NotProperInput));
    }

    #[test]
    fn window_monotone() {
        let f = rational_form(5, &[(1, 1), (3, 2)]);
        let small = enumerate_classes(&f, -1, &Scalar::from_int(4), None).unwrap();
        let large = enumerate_classes(&f, -1, &Scalar::from_int(9), None).unwrap();
        for c in &small {
            assert!(large.contains(c));
        }
        assert!(small.len() <= large.len());
    }

    #[test]
    fn outputs_satisfy_their_equations() {
        let f = rational_form(4, &[(1, 1), (1, 2), (3, 2)]);
        let window = Scalar::from_int(7);
        for alpha in [-2, -1, 0, 1] {
            for class in enumerate_classes(&f, alpha, &window, None).unwrap() {
                let (s, p, _) = evaluate(&f, &class).unwrap();
                assert_eq!(s, alpha);
                let t = f.table();
                assert_ne!(t.sign(&p).unwrap(), Ordering::Less);
                assert_ne!(t.compare(&p, &window).unwrap(), Ordering::Greater);
            }
        }
    }

    #[test]
    fn del_pezzo_small_counts() {
        assert_eq!(del_pezzo_exceptional_count(1).unwrap(), 1);
        assert_eq!(del_pezzo_exceptional_count(2).unwrap(), 3);
        assert_eq!(del_pezzo_exceptional_count(3).unwrap(), 6);
        assert!(matches!(
            del_pezzo_exceptional_count(9),
            Err(Error::DelPezzoRange(9))
        ));
        assert!(matches!(
            del_pezzo_exceptional_count(0),
            Err(Error::DelPezzoRange(0))
        ));
    }

    #[test]
    fn symbolic_form_enumerates() {
        // lambda = 1 + sqrt(2), delta = 1
        let table = Arc::new(
            SymbolTable::new()
                .with_sqrt_symbol("s", crate::scalar::rat(2, 1))
                .unwrap(),
        );
        let lambda = &Scalar::one() + &Scalar::symbol("s");
        let f = BlowupForm::new(table, lambda, vec![Scalar::one()]).unwrap();
        let classes = enumerate_classes(&f, -1, &Scalar::from_int(6), None).unwrap();
        // d = 0, m = +-1 are the only -1 classes; only +E1 has period >= 0
        assert_eq!(classes, vec![MinkowskiClass::new(0, vec![-1])]);
    }
}
