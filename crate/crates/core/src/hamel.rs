//! Points in the rational span of an abstract Hamel basis, and additive
//! functionals given by their values on basis symbols.
//!
//! Basis symbols are opaque tokens. They are never tied to real numbers, so
//! rational linear independence holds by construction and two points are
//! equal exactly when their coordinate maps are equal.

use std::cmp::Ordering;
use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An element of the Hamel basis. Identity, ordering and hashing use the name
/// only; the positivity flag is a declared attribute.
#[derive(Clone)]
pub struct BasisSymbol {
    name: Arc<str>,
    positive: bool,
}

impl BasisSymbol {
    pub fn new(name: impl AsRef<str>, positive: bool) -> Self {
        Self {
            name: Arc::from(name.as_ref()),
            positive,
        }
    }

    pub fn positive(name: impl AsRef<str>) -> Self {
        Self::new(name, true)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }
}

impl PartialEq for BasisSymbol {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for BasisSymbol {}

impl PartialOrd for BasisSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BasisSymbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name.cmp(&other.name)
    }
}

impl Hash for BasisSymbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name.hash(state);
    }
}

impl fmt::Debug for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if self.positive {
            write!(f, "(+)")?;
        }
        Ok(())
    }
}

impl fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A workspace of declared symbols with unique names, kept in declaration
/// order.
#[derive(Clone, Debug, Default)]
pub struct Basis {
    symbols: BTreeMap<String, BasisSymbol>,
    order: Vec<BasisSymbol>,
}

impl Basis {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares `prefix1, …, prefixN`, all positive.
    pub fn indexed(prefix: &str, count: usize) -> Self {
        let mut basis = Self::new();
        for i in 1..=count {
            basis
                .declare(&format!("{prefix}{i}"), true)
                .expect("indexed names are distinct");
        }
        basis
    }

    pub fn declare(&mut self, name: &str, positive: bool) -> Result<BasisSymbol> {
        if self.symbols.contains_key(name) {
            return Err(Error::DuplicateSymbol(name.to_owned()));
        }
        let symbol = BasisSymbol::new(name, positive);
        self.symbols.insert(name.to_owned(), symbol.clone());
        self.order.push(symbol.clone());
        Ok(symbol)
    }

    pub fn get(&self, name: &str) -> Result<&BasisSymbol> {
        self.symbols
            .get(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_owned()))
    }

    /// Symbols in declaration order.
    pub fn symbols(&self) -> impl Iterator<Item = &BasisSymbol> {
        self.order.iter()
    }

    pub fn to_vec(&self) -> Vec<BasisSymbol> {
        self.order.clone()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// A finitely supported rational coordinate vector over basis symbols.
///
/// Canonical: no stored coordinate is zero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point<S: Scalar> {
    coords: BTreeMap<BasisSymbol, S>,
}

impl<S: Scalar> Default for Point<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> Point<S> {
    pub fn zero() -> Self {
        Self {
            coords: BTreeMap::new(),
        }
    }

    /// The basis vector of `symbol`.
    pub fn basis(symbol: &BasisSymbol) -> Self {
        Self::from_coords([(symbol.clone(), S::one())])
    }

    /// Builds a point from `(symbol, coefficient)` pairs; repeated symbols
    /// accumulate and zero results are dropped.
    pub fn from_coords(coords: impl IntoIterator<Item = (BasisSymbol, S)>) -> Self {
        let mut point = Self::zero();
        for (symbol, value) in coords {
            point.add_coordinate(symbol, value);
        }
        point
    }

    /// The canonical linear combination `Σ cᵢ·pᵢ`.
    pub fn combine<'a>(terms: impl IntoIterator<Item = (S, &'a Point<S>)>) -> Self {
        let mut point = Self::zero();
        for (coefficient, term) in terms {
            if coefficient.is_zero() {
                continue;
            }
            for (symbol, value) in &term.coords {
                point.add_coordinate(symbol.clone(), coefficient.clone() * value.clone());
            }
        }
        point
    }

    fn add_coordinate(&mut self, symbol: BasisSymbol, value: S) {
        if value.is_zero() {
            return;
        }
        match self.coords.entry(symbol) {
            btree_map::Entry::Vacant(slot) => {
                slot.insert(value);
            }
            btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get().clone() + value;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    /// The coordinate at `symbol`, zero outside the support.
    pub fn coordinate(&self, symbol: &BasisSymbol) -> S {
        self.coords.get(symbol).cloned().unwrap_or_else(S::zero)
    }

    /// Nonzero coordinates in symbol order.
    pub fn coords(&self) -> impl Iterator<Item = (&BasisSymbol, &S)> {
        self.coords.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &BasisSymbol> {
        self.coords.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn scaled(&self, factor: &S) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            coords: self
                .coords
                .iter()
                .map(|(symbol, value)| (symbol.clone(), value.clone() * factor.clone()))
                .collect(),
        }
    }

    /// Checks that this point can serve as a positive increment: nonzero, every
    /// coordinate positive and every involved symbol declared positive.
    pub fn check_positive_increment(&self) -> Result<()> {
        if self.is_zero() {
            return Err(Error::invalid_increment(
                self,
                "the zero point is not positive",
            ));
        }
        for (symbol, value) in &self.coords {
            if !symbol.is_positive() {
                return Err(Error::invalid_increment(
                    self,
                    format!("symbol `{symbol}` is not declared positive"),
                ));
            }
            if value.is_negative() {
                return Err(Error::invalid_increment(
                    self,
                    "mixed-sign combinations have no decidable sign",
                ));
            }
        }
        Ok(())
    }

    /// Componentwise minimum, reading absent coordinates as zero.
    pub(crate) fn componentwise_min(&self, other: &Self) -> Self {
        let mut coords = BTreeMap::new();
        for symbol in self.support().chain(other.support()) {
            let value = std::cmp::min(self.coordinate(symbol), other.coordinate(symbol));
            if !value.is_zero() {
                coords.insert(symbol.clone(), value);
            }
        }
        Self { coords }
    }

    /// `self ≥ bound` in every coordinate, absent coordinates being zero.
    pub(crate) fn dominates(&self, bound: &Self) -> bool {
        self.coords
            .iter()
            .all(|(symbol, value)| *value >= bound.coordinate(symbol))
            && bound
                .coords
                .iter()
                .all(|(symbol, value)| self.coordinate(symbol) >= *value)
    }
}

impl<S: Scalar> Add for &Point<S> {
    type Output = Point<S>;

    fn add(self, rhs: &Point<S>) -> Point<S> {
        let mut out = self.clone();
        for (symbol, value) in &rhs.coords {
            out.add_coordinate(symbol.clone(), value.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &Point<S> {
    type Output = Point<S>;

    fn sub(self, rhs: &Point<S>) -> Point<S> {
        let mut out = self.clone();
        for (symbol, value) in &rhs.coords {
            out.add_coordinate(symbol.clone(), -value.clone());
        }
        out
    }
}

impl<S: Scalar> Neg for &Point<S> {
    type Output = Point<S>;

    fn neg(self) -> Point<S> {
        self.scaled(&-S::one())
    }
}

impl<S: Scalar> fmt::Display for Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (symbol, value)) in self.coords.iter().enumerate() {
            let magnitude = value.abs();
            match (i, value.is_negative()) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" - ")?,
            }
            if magnitude.is_one() {
                write!(f, "{symbol}")?;
            } else {
                write!(f, "{magnitude}*{symbol}")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point({self})")
    }
}

/// A point accepted as a positive increment.
///
/// The normal route is structural: nonzero, nonnegative coordinates on
/// positive-declared symbols. [`Increment::assume_positive`] instead records
/// a caller's assertion for points whose sign cannot be read off the symbols,
/// such as `cbrt2 - one`; such increments are usable by difference operators
/// but not by measure shifts or closures.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Increment<S: Scalar> {
    point: Point<S>,
    asserted: bool,
}

impl<S: Scalar> Increment<S> {
    pub fn new(point: Point<S>) -> Result<Self> {
        point.check_positive_increment()?;
        Ok(Self {
            point,
            asserted: false,
        })
    }

    pub fn of_symbol(symbol: &BasisSymbol) -> Result<Self> {
        Self::new(Point::basis(symbol))
    }

    pub fn assume_positive(point: Point<S>) -> Result<Self> {
        if point.is_zero() {
            return Err(Error::invalid_increment(
                &point,
                "the zero point is not positive",
            ));
        }
        Ok(Self {
            point,
            asserted: true,
        })
    }

    pub fn point(&self) -> &Point<S> {
        &self.point
    }

    /// True when positivity was asserted rather than checked.
    pub fn is_asserted(&self) -> bool {
        self.asserted
    }
}

impl<S: Scalar> fmt::Display for Increment<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.point, f)
    }
}

/// An additive (rational-linear) functional fixed by its values on symbols;
/// symbols outside the support map to zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdditiveFunctional<S: Scalar> {
    values: BTreeMap<BasisSymbol, S>,
}

impl<S: Scalar> Default for AdditiveFunctional<S> {
    fn default() -> Self {
        Self {
            values: BTreeMap::new(),
        }
    }
}

impl<S: Scalar> AdditiveFunctional<S> {
    pub fn new(values: impl IntoIterator<Item = (BasisSymbol, S)>) -> Self {
        let mut functional = Self::default();
        for (symbol, value) in values {
            functional.set(symbol, value);
        }
        functional
    }

    pub fn set(&mut self, symbol: BasisSymbol, value: S) {
        if value.is_zero() {
            self.values.remove(&symbol);
        } else {
            self.values.insert(symbol, value);
        }
    }

    pub fn value_at(&self, symbol: &BasisSymbol) -> S {
        self.values.get(symbol).cloned().unwrap_or_else(S::zero)
    }

    pub fn values(&self) -> impl Iterator<Item = (&BasisSymbol, &S)> {
        self.values.iter()
    }

    /// `Σ_b x_b · a(b)`.
    pub fn eval(&self, x: &Point<S>) -> S {
        x.coords()
            .filter_map(|(symbol, coordinate)| {
                self.values
                    .get(symbol)
                    .map(|value| coordinate.clone() * value.clone())
            })
            .fold(S::zero(), |acc, term| acc + term)
    }
}

pub fn point_combine<'a, S: Scalar>(
    terms: impl IntoIterator<Item = (S, &'a Point<S>)>,
) -> Point<S> {
    Point::combine(terms)
}

pub fn coordinate<S: Scalar>(x: &Point<S>, symbol: &BasisSymbol) -> S {
    x.coordinate(symbol)
}

pub fn additive_eval<S: Scalar>(a: &AdditiveFunctional<S>, x: &Point<S>) -> S {
    a.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::int(n)
    }

    fn syms(names: &[&str]) -> Vec<BasisSymbol> {
        names.iter().map(BasisSymbol::positive).collect()
    }

    #[test]
    fn combine_adds_and_cancels() {
        let h = syms(&["h1", "h2"]);
        let (p1, p2) = (Point::<Rational>::basis(&h[0]), Point::basis(&h[1]));
        let sum = Point::combine([(q(1), &p1), (q(1), &p2)]);
        assert_eq!(sum.coordinate(&h[0]), q(1));
        assert_eq!(sum.coordinate(&h[1]), q(1));
        assert_eq!(sum.coords().count(), 2);

        let cancelled = Point::combine([(q(1), &p1), (q(-1), &p1)]);
        assert!(cancelled.is_zero());
        assert_eq!(cancelled.support().count(), 0);
    }

    #[test]
    fn combine_matches_hand_expansion_of_a_square() {
        // (3c - 2)^2 = 9c^2 - 12c + 4, with c^2 carried by its own symbol.
        let s = syms(&["cbrt4", "cbrt2", "one"]);
        let basis: Vec<Point<Rational>> = s.iter().map(Point::basis).collect();
        let p = Point::combine([(q(9), &basis[0]), (q(-12), &basis[1]), (q(4), &basis[2])]);
        let expected = Point::from_coords([
            (s[0].clone(), q(9)),
            (s[1].clone(), q(-12)),
            (s[2].clone(), q(4)),
        ]);
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "-12*cbrt2 + 9*cbrt4 + 4*one");
    }

    #[test]
    fn coordinate_outside_support_is_zero() {
        let h = syms(&["h1", "h2", "h3"]);
        let p = &Point::<Rational>::basis(&h[0]) + &Point::basis(&h[1]);
        assert_eq!(p.coordinate(&h[0]), q(1));
        assert_eq!(p.coordinate(&h[2]), q(0));
        assert_eq!(Point::<Rational>::zero().coordinate(&h[1]), q(0));
    }

    #[test]
    fn additive_eval_examples() {
        let h = syms(&["h1", "h2", "h3", "h4"]);
        let a = AdditiveFunctional::new([
            (h[0].clone(), q(-1)),
            (h[1].clone(), q(1)),
            (h[2].clone(), q(1)),
            (h[3].clone(), q(1)),
        ]);
        let x = Point::from_coords(h[1..].iter().map(|s| (s.clone(), q(1))));
        assert_eq!(a.eval(&x), q(3));

        let a2 = AdditiveFunctional::new([(h[0].clone(), q(-1)), (h[1].clone(), q(1))]);
        let y = Point::from_coords([(h[0].clone(), q(1)), (h[1].clone(), q(1))]);
        assert_eq!(a2.eval(&y), q(0));

        let s = syms(&["one", "sqrt2", "cbrt4", "cbrt2"]);
        let a3 = AdditiveFunctional::new([
            (s[0].clone(), q(-9)),
            (s[1].clone(), q(4)),
            (s[2].clone(), q(4)),
        ]);
        let sq = Point::from_coords([
            (s[2].clone(), q(9)),
            (s[3].clone(), q(-12)),
            (s[0].clone(), q(4)),
        ]);
        assert_eq!(a3.eval(&sq), q(0));
    }

    #[test]
    fn positivity_rules() {
        let pos = BasisSymbol::positive("h");
        let free = BasisSymbol::new("u", false);
        let h = Point::<Rational>::basis(&pos);
        assert!(h.check_positive_increment().is_ok());
        assert!(Point::<Rational>::zero()
            .check_positive_increment()
            .is_err());
        assert!(Point::<Rational>::basis(&free)
            .check_positive_increment()
            .is_err());
        assert!((-&h).check_positive_increment().is_err());

        let mixed = &h - &Point::basis(&BasisSymbol::positive("k"));
        assert!(matches!(
            Increment::new(mixed.clone()),
            Err(Error::InvalidIncrement { .. })
        ));
        let asserted = Increment::assume_positive(mixed).unwrap();
        assert!(asserted.is_asserted());
        assert!(Increment::<Rational>::assume_positive(Point::zero()).is_err());
    }

    #[test]
    fn basis_rejects_duplicates_and_unknowns() {
        let mut basis = Basis::new();
        basis.declare("h1", true).unwrap();
        assert!(matches!(
            basis.declare("h1", false),
            Err(Error::DuplicateSymbol(_))
        ));
        assert!(matches!(basis.get("h9"), Err(Error::UnknownSymbol(_))));
        assert_eq!(Basis::indexed("h", 4).len(), 4);
        let names: Vec<String> = Basis::indexed("h", 11)
            .symbols()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(names[9], "h10");
        assert_eq!(names[1], "h2");
    }

    #[test]
    fn lower_bound_helpers() {
        let h = syms(&["h1", "h2"]);
        let a = Point::<Rational>::from_coords([(h[0].clone(), q(2)), (h[1].clone(), q(-1))]);
        let b = Point::from_coords([(h[0].clone(), q(1))]);
        let m = a.componentwise_min(&b);
        assert_eq!(
            m,
            Point::from_coords([(h[0].clone(), q(1)), (h[1].clone(), q(-1))])
        );
        assert!(a.dominates(&m));
        assert!(b.dominates(&m));
        assert!(!m.dominates(&b));
    }
}
