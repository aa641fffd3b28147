//! Atomic signed measures on the lattice spanned by positive basis symbols.
//!
//! A measure is an immutable expression tree: Dirac atoms closed under
//! shifts `τ_h`, sums, scaling and the closure `𝒥_h = Σ_{k≥0} τ_h^k`.
//! Closures have infinite support, so nothing is materialized; the only
//! query is the mass of a single atom, which reduces to a finite count
//! because basis symbols are independent.
//!
//! Every node caches a per-symbol lower bound on the coordinates of its
//! support. All shift and closure increments have nonnegative coordinates,
//! so walking `x, x - h, x - 2h, …` leaves the bounded region after finitely
//! many steps and never re-enters it.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functions::PointFunction;
use crate::hamel::{BasisSymbol, Point};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub enum MeasureKind<S: Scalar> {
    Dirac(Point<S>),
    /// `τ_h ν`, the measure `B ↦ ν(B - h)`.
    Shift(MeasureExpr<S>, Point<S>),
    Sum(Vec<MeasureExpr<S>>),
    Scale(S, MeasureExpr<S>),
    /// `𝒥_h ν`
    Closure(MeasureExpr<S>, Point<S>),
}

#[derive(Debug)]
struct Node<S: Scalar> {
    kind: MeasureKind<S>,
    /// `None` for a measure with empty support.
    lower_bound: Option<Point<S>>,
}

/// Cheap to clone; subtrees are shared.
#[derive(Clone, Debug)]
pub struct MeasureExpr<S: Scalar>(Arc<Node<S>>);

fn check_shift<S: Scalar>(h: &Point<S>) -> Result<()> {
    if h.is_zero() {
        return Err(Error::NonTerminatingClosure {
            increment: h.to_string(),
        });
    }
    h.check_positive_increment()
}

impl<S: Scalar> MeasureExpr<S> {
    fn from_kind(kind: MeasureKind<S>) -> Self {
        let lower_bound = match &kind {
            MeasureKind::Dirac(p) => Some(p.clone()),
            MeasureKind::Shift(inner, h) => inner.lower_bound().map(|lb| lb + h),
            MeasureKind::Sum(terms) => terms.iter().filter_map(|t| t.lower_bound()).fold(
                None,
                |acc: Option<Point<S>>, lb| match acc {
                    None => Some(lb.clone()),
                    Some(acc) => Some(acc.componentwise_min(lb)),
                },
            ),
            MeasureKind::Scale(_, inner) => inner.lower_bound().cloned(),
            MeasureKind::Closure(inner, _) => inner.lower_bound().cloned(),
        };
        MeasureExpr(Arc::new(Node { kind, lower_bound }))
    }

    /// `δ_p`
    pub fn dirac(p: Point<S>) -> Self {
        Self::from_kind(MeasureKind::Dirac(p))
    }

    pub fn zero() -> Self {
        Self::sum(Vec::new())
    }

    /// `τ_h μ`; `h` must be a structurally positive increment.
    pub fn shift(inner: Self, h: &Point<S>) -> Result<Self> {
        h.check_positive_increment()?;
        Ok(Self::from_kind(MeasureKind::Shift(inner, h.clone())))
    }

    pub fn sum(terms: Vec<Self>) -> Self {
        Self::from_kind(MeasureKind::Sum(terms))
    }

    pub fn scale(c: S, inner: Self) -> Self {
        Self::from_kind(MeasureKind::Scale(c, inner))
    }

    /// `𝒥_h ν`. A zero increment would make the series diverge.
    pub fn closure(inner: Self, h: &Point<S>) -> Result<Self> {
        check_shift(h)?;
        Ok(Self::from_kind(MeasureKind::Closure(inner, h.clone())))
    }

    pub fn kind(&self) -> &MeasureKind<S> {
        &self.0.kind
    }

    /// Per-symbol lower bound on the support, absent symbols bounded by 0.
    pub fn lower_bound(&self) -> Option<&Point<S>> {
        self.0.lower_bound.as_ref()
    }

    /// The signed mass `μ({x})`.
    pub fn atom_mass(&self, x: &Point<S>) -> Result<S> {
        self.mass(x, None)
    }

    /// [`MeasureExpr::atom_mass`] with sub-results shared through `cache`.
    /// The cache only changes running time.
    pub fn atom_mass_cached<'a>(&'a self, x: &Point<S>, cache: &mut MassCache<'a, S>) -> Result<S> {
        self.mass(x, Some(cache))
    }

    fn node_id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    fn mass<'a>(&'a self, x: &Point<S>, mut cache: Option<&mut MassCache<'a, S>>) -> Result<S> {
        match self.lower_bound() {
            Some(lb) if x.dominates(lb) => {}
            _ => return Ok(S::zero()),
        }
        if let MeasureKind::Dirac(p) = self.kind() {
            return Ok(if p == x { S::one() } else { S::zero() });
        }
        if let Some(cache) = cache.as_deref_mut() {
            if let Some(hit) = cache.entries.get(&(self.node_id(), x.clone())) {
                cache.hits += 1;
                return Ok(hit.clone());
            }
        }
        let value = match self.kind() {
            MeasureKind::Dirac(_) => unreachable!("handled above"),
            MeasureKind::Shift(inner, h) => inner.mass(&(x - h), cache.as_deref_mut())?,
            MeasureKind::Sum(terms) => {
                let mut total = S::zero();
                for t in terms {
                    total = total + t.mass(x, cache.as_deref_mut())?;
                }
                total
            }
            MeasureKind::Scale(c, inner) => {
                if c.is_zero() {
                    S::zero()
                } else {
                    c.clone() * inner.mass(x, cache.as_deref_mut())?
                }
            }
            MeasureKind::Closure(inner, h) => {
                if !h.coords().any(|(_, c)| c.is_positive()) {
                    return Err(Error::NonTerminatingClosure {
                        increment: h.to_string(),
                    });
                }
                let mut total = S::zero();
                if let Some(bound) = inner.lower_bound() {
                    let mut y = x.clone();
                    while y.dominates(bound) {
                        total = total + inner.mass(&y, cache.as_deref_mut())?;
                        y = &y - h;
                    }
                }
                total
            }
        };
        if let Some(cache) = cache {
            cache.misses += 1;
            cache
                .entries
                .insert((self.node_id(), x.clone()), value.clone());
        }
        Ok(value)
    }
}

/// Memo table for [`MeasureExpr::atom_mass_cached`], keyed by expression node
/// and point. The lifetime ties it to the expressions it has seen, so node
/// addresses stay valid.
#[derive(Debug)]
pub struct MassCache<'a, S: Scalar> {
    entries: HashMap<(usize, Point<S>), S>,
    hits: usize,
    misses: usize,
    _roots: PhantomData<&'a MeasureExpr<S>>,
}

impl<S: Scalar> Default for MassCache<'_, S> {
    fn default() -> Self {
        Self {
            entries: HashMap::new(),
            hits: 0,
            misses: 0,
            _roots: PhantomData,
        }
    }
}

impl<S: Scalar> MassCache<'_, S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn hits(&self) -> usize {
        self.hits
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<S: Scalar> fmt::Display for MeasureExpr<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            MeasureKind::Dirac(p) => write!(f, "δ[{p}]"),
            MeasureKind::Shift(inner, h) => write!(f, "τ[{h}]({inner})"),
            MeasureKind::Sum(terms) if terms.is_empty() => f.write_str("0"),
            MeasureKind::Sum(terms) => {
                f.write_str("(")?;
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
            MeasureKind::Scale(c, inner) => write!(f, "{c}·{inner}"),
            MeasureKind::Closure(inner, h) => write!(f, "J[{h}]({inner})"),
        }
    }
}

/// Iterated backward difference `∇_{h₁…h_k} μ`, each step
/// `ν ↦ ν - τ_h ν`.
pub fn nabla<S: Scalar>(measure: &MeasureExpr<S>, hs: &[Point<S>]) -> Result<MeasureExpr<S>> {
    hs.iter().try_fold(measure.clone(), |acc, h| {
        let shifted = MeasureExpr::shift(acc.clone(), h)?;
        Ok(MeasureExpr::sum(vec![
            acc,
            MeasureExpr::scale(-S::one(), shifted),
        ]))
    })
}

/// `𝒥_{h₁…h_k} ν = 𝒥_{h₁}(𝒥_{h₂}(…𝒥_{h_k} ν))`.
pub fn j_op<S: Scalar>(measure: &MeasureExpr<S>, hs: &[Point<S>]) -> Result<MeasureExpr<S>> {
    hs.iter()
        .rev()
        .try_fold(measure.clone(), |acc, h| MeasureExpr::closure(acc, h))
}

fn check_distinct_positive(symbols: &[BasisSymbol]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for s in symbols {
        if !seen.insert(s) {
            return Err(Error::RepeatedSymbol(s.name().to_owned()));
        }
        if !s.is_positive() {
            return Err(Error::invalid_increment(
                s,
                "symbol is not declared positive",
            ));
        }
    }
    Ok(())
}

fn symbol_points<S: Scalar>(symbols: &[BasisSymbol]) -> Vec<Point<S>> {
    symbols.iter().map(Point::basis).collect()
}

/// `μ_i = 𝒥_{h₁…h_{n+1}} δ_{h_i}` with a 1-based index.
pub fn build_mu_i<S: Scalar>(i: usize, symbols: &[BasisSymbol]) -> Result<MeasureExpr<S>> {
    check_distinct_positive(symbols)?;
    if i == 0 || i > symbols.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: symbols.len(),
        });
    }
    j_op(
        &MeasureExpr::dirac(Point::basis(&symbols[i - 1])),
        &symbol_points(symbols),
    )
}

/// `μ = μ₂ + … + μ_{n+1} - μ₁`.
pub fn build_mu<S: Scalar>(symbols: &[BasisSymbol]) -> Result<MeasureExpr<S>> {
    let mut terms = Vec::with_capacity(symbols.len());
    for i in 2..=symbols.len() {
        terms.push(build_mu_i(i, symbols)?);
    }
    terms.push(MeasureExpr::scale(-S::one(), build_mu_i(1, symbols)?));
    Ok(MeasureExpr::sum(terms))
}

/// The 0/1 combinations `A_i = { h_i + Σ_{j≠i} ε_j h_j }` and their union.
#[derive(Clone, Debug)]
pub struct ASets<S: Scalar> {
    pub a_i: Vec<BTreeSet<Point<S>>>,
    pub a_union: BTreeSet<Point<S>>,
}

impl<S: Scalar> ASets<S> {
    pub fn build(symbols: &[BasisSymbol]) -> Result<Self> {
        check_distinct_positive(symbols)?;
        let k = symbols.len();
        let mut a_i = vec![BTreeSet::new(); k];
        let mut a_union = BTreeSet::new();
        for mask in 1u64..(1u64 << k) {
            let p = zero_one_point(symbols, mask);
            for (i, set) in a_i.iter_mut().enumerate() {
                if mask & (1 << i) != 0 {
                    set.insert(p.clone());
                }
            }
            a_union.insert(p);
        }
        Ok(Self { a_i, a_union })
    }

    /// Membership in `A_i`, 1-based.
    pub fn in_a_i(&self, i: usize, x: &Point<S>) -> bool {
        self.a_i[i - 1].contains(x)
    }
}

/// `Σ_{i ∈ mask} h_i`.
pub fn zero_one_point<S: Scalar>(symbols: &[BasisSymbol], mask: u64) -> Point<S> {
    Point::from_coords(
        symbols
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, s)| (s.clone(), S::one())),
    )
}

/// The point function `x ↦ μ({x})`.
pub fn measure_mass_function<S: Scalar>(measure: MeasureExpr<S>) -> PointFunction<S> {
    PointFunction::measure_mass(measure)
}

/// All `(j₁, …, j_parts)` of nonnegative integers summing to `total`, in
/// lexicographic order.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(remaining: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for j in 0..=remaining {
            prefix.push(j);
            go(remaining - j, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

/// `n! / (j₁!⋯j_k!)` where `n = Σ j`.
pub fn multinomial(parts: &[u32]) -> u128 {
    let mut result: u128 = 1;
    let mut running: u128 = 0;
    for &j in parts {
        for step in 1..=j as u128 {
            running += 1;
            // result * running / step stays integral: it is a product of binomials
            result = result * running / step;
        }
    }
    result
}

/// `∇_{h₁…h_{n+1}} μⁿ` at `x`, evaluated through the multinomial expansion of
/// `(μ₂ + … + μ_{n+1} - μ₁)ⁿ` in which every product of the `μ_j` collapses
/// to a closure of a single Dirac atom and `∇ 𝒥 δ = δ`:
///
/// `Σ_{j₁+…+j_{n+1}=n} (n; j) (-1)^{j₁} δ_{ε₁h₁+…+ε_{n+1}h_{n+1}}(x)`, with
/// `ε_k = [j_k > 0]`.
pub fn nabla_mu_power_by_multinomial<S: Scalar>(
    symbols: &[BasisSymbol],
    n: u32,
    x: &Point<S>,
) -> Result<S> {
    check_distinct_positive(symbols)?;
    let mut total = S::zero();
    for js in compositions(n, symbols.len()) {
        let mask = js
            .iter()
            .enumerate()
            .filter(|(_, &j)| j > 0)
            .fold(0u64, |m, (k, _)| m | (1 << k));
        if zero_one_point::<S>(symbols, mask) != *x {
            continue;
        }
        let coefficient =
            S::from_u128(multinomial(&js)).expect("multinomial fits the scalar field");
        if js[0] % 2 == 1 {
            total = total - coefficient;
        } else {
            total = total + coefficient;
        }
    }
    Ok(total)
}

/// Free-function form of [`ASets::build`].
pub fn build_a_sets<S: Scalar>(symbols: &[BasisSymbol]) -> Result<ASets<S>> {
    ASets::build(symbols)
}
