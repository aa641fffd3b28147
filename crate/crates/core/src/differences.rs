//! Mixed forward and backward differences of point functions, and probes of
//! the Jensen (equal increments) and Wright (arbitrary increments) forms of
//! higher-order convexity.

use std::ops::{Deref, RangeInclusive};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::functions::PointFunction;
use crate::hamel::{BasisSymbol, Increment, Point};
use crate::scalar::Scalar;

/// A nonempty ordered list of positive increments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncrementList<S: Scalar>(Vec<Increment<S>>);

impl<S: Scalar> IncrementList<S> {
    pub fn new(items: Vec<Increment<S>>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::invalid_increment("[]", "increment list is empty"));
        }
        Ok(Self(items))
    }

    /// Checks each point structurally.
    pub fn from_points(points: impl IntoIterator<Item = Point<S>>) -> Result<Self> {
        Self::new(
            points
                .into_iter()
                .map(Increment::new)
                .collect::<Result<_>>()?,
        )
    }

    pub fn from_symbols(symbols: &[BasisSymbol]) -> Result<Self> {
        Self::from_points(symbols.iter().map(Point::basis))
    }

    /// `m` copies of `h`.
    pub fn repeated(h: &Increment<S>, m: usize) -> Result<Self> {
        Self::new(vec![h.clone(); m])
    }

    pub fn points(&self) -> Vec<Point<S>> {
        self.0.iter().map(|h| h.point().clone()).collect()
    }

    /// `h₁ + … + h_k`.
    pub fn total(&self) -> Point<S> {
        self.0.iter().fold(Point::zero(), |acc, h| &acc + h.point())
    }
}

impl<S: Scalar> Deref for IncrementList<S> {
    type Target = [Increment<S>];

    fn deref(&self) -> &[Increment<S>] {
        &self.0
    }
}

type Eval<'a, S> = &'a dyn Fn(&Point<S>) -> Result<S>;

/// `Δ_{h₁…h_k} g (x) = Δ_{h₁…h_{k-1}} (Δ_{h_k} g)(x)`.
fn forward_rec<S: Scalar>(g: Eval<'_, S>, x: &Point<S>, hs: &[Increment<S>]) -> Result<S> {
    match hs.split_last() {
        None => g(x),
        Some((last, rest)) => {
            let step = |y: &Point<S>| Ok(g(&(y + last.point()))? - g(y)?);
            forward_rec(&step, x, rest)
        }
    }
}

fn backward_rec<S: Scalar>(g: Eval<'_, S>, x: &Point<S>, hs: &[Increment<S>]) -> Result<S> {
    match hs.split_last() {
        None => g(x),
        Some((last, rest)) => {
            let step = |y: &Point<S>| Ok(g(y)? - g(&(y - last.point()))?);
            backward_rec(&step, x, rest)
        }
    }
}

/// The mixed forward difference by the recursive definition.
pub fn forward_diff<S: Scalar>(
    f: &PointFunction<S>,
    x: &Point<S>,
    hs: &IncrementList<S>,
) -> Result<S> {
    forward_rec(&|y: &Point<S>| f.eval(y), x, hs)
}

/// The mixed backward difference `∇_{h₁…h_k} f(x)`, `∇_h f(x) = f(x) - f(x - h)`.
pub fn backward_diff<S: Scalar>(
    f: &PointFunction<S>,
    x: &Point<S>,
    hs: &IncrementList<S>,
) -> Result<S> {
    backward_rec(&|y: &Point<S>| f.eval(y), x, hs)
}

/// One term of the subset-sum expansion of a mixed forward difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow<S: Scalar> {
    /// 0-based positions of the increments in the subset.
    pub subset: Vec<usize>,
    pub point: Point<S>,
    pub value: S,
    /// `(-1)^{k - |subset|}`
    pub negative: bool,
}

/// Every function value entering `Δ_{h₁…h_k} f(x)`, with the total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceTable<S: Scalar> {
    pub rows: Vec<TableRow<S>>,
    pub value: S,
}

impl<S: Scalar> DifferenceTable<S> {
    /// Expands `Σ_{T ⊆ {1..k}} (-1)^{k-|T|} f(x + Σ_{i∈T} h_i)`. Rows run by
    /// decreasing subset size, lexicographic within a size.
    pub fn build(f: &PointFunction<S>, x: &Point<S>, hs: &IncrementList<S>) -> Result<Self> {
        let k = hs.len();
        let mut rows = Vec::with_capacity(1 << k.min(20));
        let mut value = S::zero();
        for size in (0..=k).rev() {
            for subset in (0..k).combinations(size) {
                let point = subset
                    .iter()
                    .fold(x.clone(), |acc, &i| &acc + hs[i].point());
                let fx = f.eval(&point)?;
                let negative = (k - size) % 2 == 1;
                value = if negative {
                    value - fx.clone()
                } else {
                    value + fx.clone()
                };
                rows.push(TableRow {
                    subset,
                    point,
                    value: fx,
                    negative,
                });
            }
        }
        Ok(Self { rows, value })
    }

    /// Sums of the function values grouped by subset size, largest first.
    pub fn grouped_sums(&self) -> Vec<S> {
        self.rows
            .iter()
            .chunk_by(|row| row.subset.len())
            .into_iter()
            .map(|(_, group)| group.fold(S::zero(), |acc, row| acc + row.value.clone()))
            .collect()
    }
}

/// The same difference through the closed alternating subset-sum form.
pub fn forward_diff_closed<S: Scalar>(
    f: &PointFunction<S>,
    x: &Point<S>,
    hs: &IncrementList<S>,
) -> Result<S> {
    let k = hs.len();
    let mut total = S::zero();
    for mask in 0u64..(1u64 << k) {
        let point = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .fold(x.clone(), |acc, i| &acc + hs[i].point());
        let fx = f.eval(&point)?;
        if (k as u32 - mask.count_ones()) % 2 == 1 {
            total = total - fx;
        } else {
            total = total + fx;
        }
    }
    Ok(total)
}

/// `Δ_h^m f(x)`.
pub fn equal_increment_diff<S: Scalar>(
    f: &PointFunction<S>,
    x: &Point<S>,
    h: &Increment<S>,
    m: usize,
) -> Result<S> {
    forward_diff(f, x, &IncrementList::repeated(h, m)?)
}

#[derive(Clone, Debug)]
pub struct Violation<S: Scalar> {
    /// Index into the caller's sample list.
    pub sample: usize,
    pub x: Point<S>,
    pub increments: IncrementList<S>,
    pub value: S,
    pub table: DifferenceTable<S>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkippedSample {
    pub sample: usize,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct ProbeOutcome<S: Scalar> {
    pub checked: usize,
    pub violations: Vec<Violation<S>>,
    pub skipped: Vec<SkippedSample>,
}

impl<S: Scalar> ProbeOutcome<S> {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn probe<S: Scalar>(
    f: &PointFunction<S>,
    arity: usize,
    samples: impl Iterator<Item = (usize, Point<S>, Result<IncrementList<S>>)>,
) -> ProbeOutcome<S> {
    let mut outcome = ProbeOutcome {
        checked: 0,
        violations: Vec::new(),
        skipped: Vec::new(),
    };
    for (sample, x, increments) in samples {
        let increments = match increments {
            Ok(list) if list.len() == arity => list,
            Ok(list) => {
                outcome.skipped.push(SkippedSample {
                    sample,
                    reason: format!("expected {arity} increments, got {}", list.len()),
                });
                continue;
            }
            Err(err) => {
                outcome.skipped.push(SkippedSample {
                    sample,
                    reason: err.to_string(),
                });
                continue;
            }
        };
        match forward_diff(f, &x, &increments) {
            Ok(value) => {
                outcome.checked += 1;
                if value.is_negative() {
                    let table = DifferenceTable::build(f, &x, &increments)
                        .expect("every point of the table was just evaluated");
                    outcome.violations.push(Violation {
                        sample,
                        x,
                        increments,
                        value,
                        table,
                    });
                }
            }
            Err(err) => outcome.skipped.push(SkippedSample {
                sample,
                reason: err.to_string(),
            }),
        }
    }
    outcome
}

/// Reports every sample with `Δ_h^{n+1} f(x) < 0`.
pub fn jensen_convexity_probe<S: Scalar>(
    f: &PointFunction<S>,
    n: usize,
    samples: &[(Point<S>, Increment<S>)],
) -> ProbeOutcome<S> {
    probe(
        f,
        n + 1,
        samples
            .iter()
            .enumerate()
            .map(|(i, (x, h))| (i, x.clone(), IncrementList::repeated(h, n + 1))),
    )
}

/// Reports every sample with `Δ_{h₁…h_{n+1}} f(x) < 0`; samples whose list
/// does not have `n + 1` entries are skipped.
pub fn wright_convexity_probe<S: Scalar>(
    f: &PointFunction<S>,
    n: usize,
    samples: &[(Point<S>, IncrementList<S>)],
) -> ProbeOutcome<S> {
    probe(
        f,
        n + 1,
        samples
            .iter()
            .enumerate()
            .map(|(i, (x, hs))| (i, x.clone(), Ok(hs.clone()))),
    )
}

/// All points `Σ c_b·b` with integer `c_b ∈ range` for each listed symbol.
pub fn integer_box<S: Scalar>(
    symbols: &[BasisSymbol],
    range: RangeInclusive<i64>,
) -> Vec<Point<S>> {
    if symbols.is_empty() {
        return vec![Point::zero()];
    }
    symbols
        .iter()
        .map(|_| range.clone())
        .multi_cartesian_product()
        .map(|coefficients| {
            Point::from_coords(
                symbols
                    .iter()
                    .cloned()
                    .zip(coefficients.into_iter().map(S::int)),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::ScalarKernel;
    use crate::hamel::{AdditiveFunctional, Basis};
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::int(n)
    }

    fn hs(n: usize) -> Vec<BasisSymbol> {
        Basis::indexed("h", n).symbols().cloned().collect()
    }

    fn counterexample(h: &[BasisSymbol], n: u32) -> PointFunction<Rational> {
        let a = AdditiveFunctional::new(
            h.iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), if i == 0 { q(-1) } else { q(1) })),
        );
        PointFunction::positive_part_power(a, n)
    }

    #[test]
    fn affine_second_difference_vanishes() {
        let h = hs(3);
        let a = AdditiveFunctional::new([(h[0].clone(), q(2)), (h[1].clone(), q(-5))]);
        let f = PointFunction::composite(ScalarKernel::Identity, a);
        let steps = IncrementList::from_symbols(&h[1..]).unwrap();
        let x = Point::from_coords([(h[2].clone(), q(7))]);
        assert_eq!(forward_diff(&f, &x, &steps).unwrap(), q(0));
    }

    #[test]
    fn cubic_counterexample_all_three_routes() {
        let h = hs(4);
        let f = counterexample(&h, 3);
        let steps = IncrementList::from_symbols(&h).unwrap();
        assert_eq!(forward_diff(&f, &Point::zero(), &steps).unwrap(), q(-1));
        assert_eq!(
            forward_diff_closed(&f, &Point::zero(), &steps).unwrap(),
            q(-1)
        );
        assert_eq!(backward_diff(&f, &steps.total(), &steps).unwrap(), q(-1));
    }

    #[test]
    fn order_one_counterexample_by_enumeration() {
        let h = hs(2);
        let f = counterexample(&h, 1);
        let steps = IncrementList::from_symbols(&h).unwrap();
        // f over the four subset sums 0, h1, h2, h1+h2 is 0, 0, 1, 0
        let oracle = q(0) - q(0) - q(1) + q(0);
        assert_eq!(
            forward_diff_closed(&f, &Point::zero(), &steps).unwrap(),
            oracle
        );
        assert_eq!(forward_diff(&f, &Point::zero(), &steps).unwrap(), oracle);
    }

    #[test]
    fn constants_are_annihilated() {
        let h = hs(3);
        let f = PointFunction::constant(q(11));
        for k in 1..=3 {
            let steps = IncrementList::from_symbols(&h[..k]).unwrap();
            let x = Point::basis(&h[0]).scaled(&q(-2));
            assert_eq!(forward_diff(&f, &x, &steps).unwrap(), q(0));
            assert_eq!(forward_diff_closed(&f, &x, &steps).unwrap(), q(0));
            assert_eq!(backward_diff(&f, &x, &steps).unwrap(), q(0));
        }
    }

    #[test]
    fn tabulated_third_difference_with_asserted_step() {
        let s = Basis::indexed("s", 2)
            .symbols()
            .cloned()
            .collect::<Vec<_>>();
        let (one, c) = (Point::<Rational>::basis(&s[0]), Point::basis(&s[1]));
        let h = Increment::assume_positive(&c - &one).unwrap();
        let points: Vec<_> = (0..4).map(|k| &one + &h.point().scaled(&q(k))).collect();
        let magnitudes = [-9, 4, 7, 0];
        let q_table =
            PointFunction::tabulated(points.iter().cloned().zip(magnitudes.iter().map(|&v| q(v))));
        let f = PointFunction::apply(ScalarKernel::AbsoluteValue, q_table);
        assert_eq!(equal_increment_diff(&f, &one, &h, 3).unwrap(), q(-18));
        assert!(matches!(
            equal_increment_diff(&f, &one, &h, 4),
            Err(Error::UntabulatedPoint { .. })
        ));
    }

    #[test]
    fn backward_single_step() {
        let h = hs(1);
        let x = Point::basis(&h[0]).scaled(&q(3));
        let step = Increment::of_symbol(&h[0]).unwrap();
        let f = PointFunction::tabulated([(x.clone(), q(1)), (&x - step.point(), q(0))]);
        let steps = IncrementList::new(vec![step]).unwrap();
        assert_eq!(backward_diff(&f, &x, &steps).unwrap(), q(1));
    }

    #[test]
    fn equal_increment_examples() {
        let u = BasisSymbol::positive("u");
        let up = Point::<Rational>::basis(&u);
        let step = Increment::new(up.clone()).unwrap();

        // c^2 (-x)_+^2 with c = -1
        let reflected = AdditiveFunctional::new([(u.clone(), q(-1))]);
        let f = PointFunction::positive_part_power(reflected, 2);
        assert_eq!(equal_increment_diff(&f, &-&up, &step, 3).unwrap(), q(-1));

        // exact witness: a(s) = 1, a(t) = -2, x = s, h = t
        let (s, t) = (BasisSymbol::positive("s"), BasisSymbol::positive("t"));
        let a = AdditiveFunctional::new([(s.clone(), q(1)), (t.clone(), q(-2))]);
        let g = PointFunction::positive_part_power(a, 2);
        let ht = Increment::of_symbol(&t).unwrap();
        assert_eq!(
            equal_increment_diff(&g, &Point::basis(&s), &ht, 3).unwrap(),
            q(-1)
        );

        let x = Point::basis(&s);
        assert_eq!(
            equal_increment_diff(&g, &x, &ht, 1).unwrap(),
            g.eval(&(&x + ht.point())).unwrap() - g.eval(&x).unwrap()
        );
    }

    #[test]
    fn increment_list_validation() {
        assert!(IncrementList::<Rational>::new(vec![]).is_err());
        assert!(matches!(
            IncrementList::<Rational>::from_points([Point::zero()]),
            Err(Error::InvalidIncrement { .. })
        ));
    }

    fn lattice_samples(h: &[BasisSymbol]) -> Vec<(Point<Rational>, Increment<Rational>)> {
        let mut samples = Vec::new();
        for x in integer_box::<Rational>(h, 0..=1) {
            for s in h {
                samples.push((x.clone(), Increment::of_symbol(s).unwrap()));
            }
        }
        samples
    }

    #[test]
    fn jensen_probe_examples() {
        let h = hs(4);
        let f = counterexample(&h, 3);
        let outcome = jensen_convexity_probe(&f, 3, &lattice_samples(&h));
        assert_eq!(outcome.checked, 16 * 4);
        assert!(outcome.is_clean());

        let (s, t) = (BasisSymbol::positive("s"), BasisSymbol::positive("t"));
        let a = AdditiveFunctional::new([(s.clone(), q(1)), (t.clone(), q(-2))]);
        let g = PointFunction::positive_part_power(a, 2);
        let outcome = jensen_convexity_probe(
            &g,
            2,
            &[(Point::basis(&s), Increment::of_symbol(&t).unwrap())],
        );
        assert_eq!(outcome.violations.len(), 1);
        assert_eq!(outcome.violations[0].value, q(-1));
        assert_eq!(outcome.violations[0].table.rows.len(), 8);

        let u = BasisSymbol::positive("u");
        let unit = AdditiveFunctional::new([(u.clone(), q(1))]);
        let c2 = PointFunction::scaled(q(4), PointFunction::positive_part_power(unit, 2));
        let samples: Vec<_> = integer_box::<Rational>(std::slice::from_ref(&u), -3..=3)
            .into_iter()
            .cartesian_product([1, 2])
            .map(|(x, k)| (x, Increment::new(Point::basis(&u).scaled(&q(k))).unwrap()))
            .collect();
        assert!(jensen_convexity_probe(&c2, 2, &samples).is_clean());
    }

    #[test]
    fn jensen_probe_skips_untabulated_samples() {
        let h = hs(1);
        let f = PointFunction::tabulated([(Point::zero(), q(0))]);
        let outcome = jensen_convexity_probe(
            &f,
            1,
            &[(Point::zero(), Increment::of_symbol(&h[0]).unwrap())],
        );
        assert_eq!(outcome.checked, 0);
        assert_eq!(outcome.skipped.len(), 1);
    }

    #[test]
    fn wright_probe_examples() {
        let h = hs(4);
        let f = counterexample(&h, 3);
        let samples = vec![(Point::zero(), IncrementList::from_symbols(&h).unwrap())];
        let outcome = wright_convexity_probe(&f, 3, &samples);
        assert_eq!(outcome.violations.len(), 1);
        assert_eq!(outcome.violations[0].value, q(-1));
        assert_eq!(outcome.violations[0].table.rows.len(), 16);

        // continuous x_+^3 on a single symbol: 3-convex, hence 3-Wright-convex
        let u = BasisSymbol::positive("u");
        let cubic =
            PointFunction::positive_part_power(AdditiveFunctional::new([(u.clone(), q(1))]), 3);
        let steps: Vec<Increment<Rational>> = (1..=2)
            .map(|k| Increment::new(Point::basis(&u).scaled(&q(k))).unwrap())
            .collect();
        let mut samples = Vec::new();
        for x in integer_box::<Rational>(std::slice::from_ref(&u), -4..=2) {
            for combo in std::iter::repeat_n(steps.iter(), 4).multi_cartesian_product() {
                let list = IncrementList::new(combo.into_iter().cloned().collect()).unwrap();
                samples.push((x.clone(), list));
            }
        }
        assert!(wright_convexity_probe(&cubic, 3, &samples).is_clean());

        let constant = PointFunction::constant(q(3));
        assert!(wright_convexity_probe(&constant, 3, &samples).is_clean());

        let short = vec![(Point::zero(), IncrementList::from_symbols(&h[..2]).unwrap())];
        let outcome = wright_convexity_probe(&f, 3, &short);
        assert_eq!(outcome.skipped.len(), 1);
    }

    #[test]
    fn table_groups_follow_subset_size() {
        let h = hs(4);
        let f = counterexample(&h, 3);
        let steps = IncrementList::from_symbols(&h).unwrap();
        let table = DifferenceTable::build(&f, &Point::zero(), &steps).unwrap();
        let values: Vec<Rational> = table.rows.iter().map(|r| r.value.clone()).collect();
        let expected: Vec<Rational> = [8, 1, 1, 1, 27, 0, 0, 0, 8, 8, 8, 0, 1, 1, 1, 0]
            .iter()
            .map(|&v| q(v))
            .collect();
        assert_eq!(values, expected);
        assert_eq!(table.grouped_sums(), vec![q(8), q(30), q(24), q(3), q(0)]);
        assert_eq!(table.value, q(-1));
    }
}
