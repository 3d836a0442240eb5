//! Exact scalars: the polynomial ring Q[symbols] with a certified order.
//!
//! A [`Scalar`] is a sparse polynomial over the rationals in a set of named
//! symbols ("periods"). Ring arithmetic is exact and equality is coefficient
//! map identity, which is sound under the contract that the symbols of a
//! [`SymbolTable`] are declared algebraically independent over Q.
//!
//! The order is decided in two steps: formally equal scalars compare `Equal`;
//! otherwise the difference is evaluated by interval arithmetic over the
//! symbol enclosures, refining the enclosures up to the table's precision cap.
//! A sign that is still ambiguous at the cap surfaces as
//! [`Error::Undecidable`] — never a silent guess.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `"p/q"` or `"p"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

// ---------------------------------------------------------------------------
// Rational intervals
// ---------------------------------------------------------------------------

/// Closed interval with rational endpoints, `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn point(v: Rational) -> Self {
        RatInterval { lo: v.clone(), hi: v }
    }

    pub fn zero() -> Self {
        RatInterval::point(Rational::zero())
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn add(&self, other: &Self) -> Self {
        RatInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn neg(&self) -> Self {
        RatInterval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        RatInterval::new(lo, hi)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_negative() {
            RatInterval::new(&self.hi * c, &self.lo * c)
        } else {
            RatInterval::new(&self.lo * c, &self.hi * c)
        }
    }

    /// Outer enclosure of the square root (self must be >= 0).
    /// `digits` controls the denominator 10^digits of the bounds.
    pub fn sqrt_outer(&self, digits: u32) -> Self {
        RatInterval::new(sqrt_lower(&self.lo, digits), sqrt_upper(&self.hi, digits))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let lo = std::cmp::max(&self.lo, &other.lo).clone();
        let hi = std::cmp::min(&self.hi, &other.hi).clone();
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }
}

/// Largest rational of the form s/10^digits (scaled integer sqrt) with
/// square <= q. Returns 0 for q <= 0.
pub fn sqrt_lower(q: &Rational, digits: u32) -> Rational {
    if !q.is_positive() {
        return Rational::zero();
    }
    let scale = BigInt::from(10u32).pow(digits);
    // sqrt(n/d) = sqrt(n*d)/d; scale for precision.
    let scaled = q.numer() * q.denom() * &scale * &scale;
    let s = scaled.sqrt(); // floor of the integer square root
    Rational::new(s, q.denom() * scale)
}

/// A rational upper bound for sqrt(q): (floor sqrt + 1) at the same scale.
pub fn sqrt_upper(q: &Rational, digits: u32) -> Rational {
    if !q.is_positive() {
        return Rational::zero();
    }
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = q.numer() * q.denom() * &scale * &scale;
    let s = scaled.sqrt() + 1;
    Rational::new(s, q.denom() * scale)
}

/// Is the non-negative rational a perfect square of a rational? If so return it.
pub fn rational_sqrt_exact(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(Rational::zero());
    }
    let sn = q.numer().sqrt();
    let sd = q.denom().sqrt();
    if &(&sn * &sn) == q.numer() && &(&sd * &sd) == q.denom() {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Symbol table
// ---------------------------------------------------------------------------

/// How a symbol's enclosure can be tightened.
#[derive(Clone)]
pub enum Refiner {
    /// The enclosure is final; comparisons cannot refine it.
    Fixed,
    /// The symbol denotes sqrt(q); one refinement step bisects against t^2 = q.
    SqrtOf(Rational),
    /// User-supplied refinement; must return a sub-interval of its argument
    /// containing the true value, of at most half the width.
    Custom(Arc<dyn Fn(&RatInterval) -> RatInterval + Send + Sync>),
}

impl fmt::Debug for Refiner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refiner::Fixed => f.write_str("Fixed"),
            Refiner::SqrtOf(q) => write!(f, "SqrtOf({q})"),
            Refiner::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Refiner {
    fn refinable(&self) -> bool {
        !matches!(self, Refiner::Fixed)
    }

    fn refine(&self, iv: &RatInterval) -> RatInterval {
        match self {
            Refiner::Fixed => iv.clone(),
            Refiner::SqrtOf(q) => {
                let mid = (&iv.lo + &iv.hi) / rat_int(2);
                let sq = &mid * &mid;
                match sq.cmp(q) {
                    Ordering::Less => RatInterval::new(mid, iv.hi.clone()),
                    Ordering::Greater => RatInterval::new(iv.lo.clone(), mid),
                    Ordering::Equal => RatInterval::point(mid),
                }
            }
            Refiner::Custom(f) => f(iv).intersect(iv),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SymbolInfo {
    pub name: String,
    pub enclosure: RatInterval,
    pub refiner: Refiner,
}

/// Immutable registry of the formal symbols a family of scalars may mention.
///
/// Every enclosure has rational endpoints and a positive lower bound.
/// Declaring a table asserts that the symbol values are algebraically
/// independent over Q; `Scalar` equality is coefficient-wise under that
/// contract. Refinement produces a new table, the original is untouched.
#[derive(Debug, Clone)]
pub struct SymbolTable {
    symbols: Vec<SymbolInfo>,
    index: BTreeMap<String, usize>,
    independence_declared: bool,
    precision_cap: u32,
}

pub const DEFAULT_PRECISION_CAP: u32 = 64;

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Default for SymbolTable {
    fn default() -> Self {
        SymbolTable::new()
    }
}

impl SymbolTable {
    pub fn new() -> Self {
        SymbolTable {
            symbols: Vec::new(),
            index: BTreeMap::new(),
            independence_declared: true,
            precision_cap: DEFAULT_PRECISION_CAP,
        }
    }

    pub fn with_precision_cap(mut self, cap: u32) -> Self {
        self.precision_cap = cap;
        self
    }

    pub fn precision_cap(&self) -> u32 {
        self.precision_cap
    }

    pub fn independence_declared(&self) -> bool {
        self.independence_declared
    }

    pub fn declare_independence(mut self, declared: bool) -> Self {
        self.independence_declared = declared;
        self
    }

    pub fn with_symbol(self, name: &str, lo: Rational, hi: Rational) -> Result<Self> {
        self.with_symbol_refined(name, lo, hi, Refiner::Fixed)
    }

    /// Register `name` as sqrt(q). The initial enclosure is derived from q.
    pub fn with_sqrt_symbol(self, name: &str, q: Rational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::InvalidSymbol(format!(
                "sqrt symbol `{name}` needs a positive radicand"
            )));
        }
        let lo = sqrt_lower(&q, 6);
        let hi = sqrt_upper(&q, 6);
        let lo = if lo.is_positive() { lo } else { sqrt_lower(&q, 24) };
        self.with_symbol_refined(name, lo, hi, Refiner::SqrtOf(q))
    }

    pub fn with_symbol_refined(
        mut self,
        name: &str,
        lo: Rational,
        hi: Rational,
        refiner: Refiner,
    ) -> Result<Self> {
        if !valid_identifier(name) {
            return Err(Error::InvalidSymbol(format!("`{name}` is not an identifier")));
        }
        if self.index.contains_key(name) {
            return Err(Error::InvalidSymbol(format!("duplicate symbol `{name}`")));
        }
        if !lo.is_positive() {
            return Err(Error::InvalidSymbol(format!(
                "enclosure of `{name}` must have a positive lower bound"
            )));
        }
        if lo > hi {
            return Err(Error::InvalidSymbol(format!("empty enclosure for `{name}`")));
        }
        if let Refiner::SqrtOf(q) = &refiner {
            if &(&lo * &lo) > q || &(&hi * &hi) < q {
                return Err(Error::InvalidSymbol(format!(
                    "enclosure of `{name}` does not contain sqrt of its radicand"
                )));
            }
        }
        self.index.insert(name.to_string(), self.symbols.len());
        self.symbols.push(SymbolInfo {
            name: name.to_string(),
            enclosure: RatInterval::new(lo, hi),
            refiner,
        });
        Ok(self)
    }

    pub fn symbols(&self) -> &[SymbolInfo] {
        &self.symbols
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn enclosure_of(&self, name: &str) -> Result<&RatInterval> {
        self.index
            .get(name)
            .map(|&i| &self.symbols[i].enclosure)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// A copy of the table with every refinable enclosure tightened `rounds` times.
    pub fn refined(&self, rounds: u32) -> Self {
        let mut out = self.clone();
        for info in &mut out.symbols {
            for _ in 0..rounds {
                info.enclosure = info.refiner.refine(&info.enclosure);
            }
        }
        out
    }

    /// Check that every symbol mentioned by `s` is registered.
    pub fn check_scalar(&self, s: &Scalar) -> Result<()> {
        for name in s.symbol_names() {
            if !self.contains(name) {
                return Err(Error::UnknownSymbol(name.to_string()));
            }
        }
        Ok(())
    }

    /// Interval enclosure of a scalar under the current symbol enclosures.
    pub fn enclosure(&self, s: &Scalar) -> Result<RatInterval> {
        self.enclosure_with(s, |name| {
            self.index
                .get(name)
                .map(|&i| self.symbols[i].enclosure.clone())
        })
    }

    fn enclosure_with(
        &self,
        s: &Scalar,
        lookup: impl Fn(&str) -> Option<RatInterval>,
    ) -> Result<RatInterval> {
        let mut acc = RatInterval::zero();
        for (mono, coeff) in &s.terms {
            let mut prod = RatInterval::point(Rational::one());
            for name in &mono.0 {
                let iv =
                    lookup(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
                prod = prod.mul(&iv);
            }
            acc = acc.add(&prod.scale(coeff));
        }
        Ok(acc)
    }

    /// Certified sign of a scalar. `Equal` means the coefficient map is empty.
    pub fn sign(&self, s: &Scalar) -> Result<Ordering> {
        if s.is_zero() {
            return Ok(Ordering::Equal);
        }
        if let Some(r) = s.as_rational() {
            return Ok(r.cmp(&Rational::zero()));
        }
        // Local working enclosures for the symbols that actually occur.
        let mut work: BTreeMap<&str, (RatInterval, &Refiner)> = BTreeMap::new();
        for name in s.symbol_names() {
            let &i = self
                .index
                .get(name)
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
            let info = &self.symbols[i];
            work.insert(&info.name, (info.enclosure.clone(), &info.refiner));
        }
        let any_refinable = work.values().any(|(_, r)| r.refinable());
        let mut rounds = 0u32;
        loop {
            let iv = self.enclosure_with(s, |name| work.get(name).map(|(iv, _)| iv.clone()))?;
            if iv.lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if iv.hi.is_negative() {
                return Ok(Ordering::Less);
            }
            if !any_refinable || rounds >= self.precision_cap {
                return Err(Error::Undecidable {
                    context: format!("sign of {s}"),
                    rounds,
                });
            }
            for (iv, refiner) in work.values_mut() {
                if refiner.refinable() {
                    *iv = refiner.refine(iv);
                }
            }
            rounds += 1;
        }
    }

    /// Certified total-order comparison.
    ///
    /// `Equal` if and only if `x - y` has an empty coefficient map; otherwise
    /// the certified sign of the difference, refining enclosures up to the
    /// precision cap.
    pub fn compare(&self, x: &Scalar, y: &Scalar) -> Result<Ordering> {
        self.sign(&(x - y))
    }

    pub fn is_positive(&self, s: &Scalar) -> Result<bool> {
        Ok(self.sign(s)? == Ordering::Greater)
    }

    /// cmp helper usable with `sort_by` once all comparisons are known decidable.
    pub fn compare_or_internal(&self, x: &Scalar, y: &Scalar) -> Result<Ordering> {
        self.compare(x, y)
    }
}

impl PartialEq for SymbolTable {
    fn eq(&self, other: &Self) -> bool {
        self.independence_declared == other.independence_declared
            && self.symbols.len() == other.symbols.len()
            && self
                .symbols
                .iter()
                .zip(&other.symbols)
                .all(|(a, b)| a.name == b.name && a.enclosure == b.enclosure)
    }
}

// ---------------------------------------------------------------------------
// Monomials and scalars
// ---------------------------------------------------------------------------

/// A multiset of symbol names, kept sorted. The empty monomial is the
/// rational unit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<String>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn symbol(name: &str) -> Self {
        Monomial(vec![name.to_string()])
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    fn mul(&self, other: &Self) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        v.sort();
        Monomial(v)
    }

    /// Serialized form: sorted names joined by `*`; empty string for the unit.
    pub fn to_key(&self) -> String {
        self.0.join("*")
    }

    pub fn parse(key: &str) -> Result<Self> {
        if key.is_empty() {
            return Ok(Monomial::unit());
        }
        let mut names: Vec<String> = Vec::new();
        for part in key.split('*') {
            let part = part.trim();
            if !valid_identifier(part) {
                return Err(Error::Parse(format!("malformed monomial `{key}`")));
            }
            names.push(part.to_string());
        }
        names.sort();
        Ok(Monomial(names))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut i = 0;
        let mut first = true;
        while i < self.0.len() {
            let name = &self.0[i];
            let mut pow = 1;
            while i + pow < self.0.len() && self.0[i + pow] == *name {
                pow += 1;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if pow == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{pow}")?;
            }
            i += pow;
        }
        Ok(())
    }
}

/// An exact element of Q[symbols], stored as a canonical sparse coefficient
/// map: zero coefficients are never kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<Monomial, Rational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Monomial::unit(), r);
        }
        Scalar { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(rat_int(n))
    }

    pub fn symbol(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::symbol(name), Rational::one());
        Scalar { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the scalar mentions no symbol.
    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|m| m.is_unit())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Monomial::unit()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn symbol_names(&self) -> impl Iterator<Item = &str> {
        let mut seen: Vec<&str> = Vec::new();
        for m in self.terms.keys() {
            for n in m.names() {
                if !seen.contains(&n.as_str()) {
                    seen.push(n);
                }
            }
        }
        seen.into_iter()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Scalar::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| (m.clone(), v * c))
            .collect();
        Scalar { terms }
    }

    pub fn half(&self) -> Self {
        self.scale(&rat(1, 2))
    }

    fn insert_term(terms: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in pairs {
            Scalar::insert_term(&mut terms, m, c);
        }
        Scalar { terms }
    }
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Scalar::insert_term(&mut terms, m.clone(), c.clone());
        }
        Scalar { terms }
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Scalar::insert_term(&mut terms, m.clone(), -c.clone());
        }
        Scalar { terms }
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), -c.clone()))
            .collect();
        Scalar { terms }
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                Scalar::insert_term(&mut terms, ma.mul(mb), ca * cb);
            }
        }
        Scalar { terms }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_unit() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}
