use convexity_core::differences::{
    backward_diff, equal_increment_diff, forward_diff, forward_diff_closed, jensen_convexity_probe,
    wright_convexity_probe,
};
use convexity_core::hamel::{additive_eval, coordinate, point_combine};
use convexity_core::measures::{build_mu_i, j_op, nabla, zero_one_point};
use convexity_core::{
    AdditiveFunctional, Basis, BasisSymbol, Increment, IncrementList, MeasureExpr, Point,
    PointFunction, Rational,
};
use proptest::prelude::*;

const DIM: usize = 3;

fn symbols() -> Vec<BasisSymbol> {
    Basis::indexed("e", DIM).to_vec()
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn point(coords: &[i64]) -> Point {
    Point::from_coords(symbols().into_iter().zip(coords.iter().map(|&c| q(c))))
}

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn rational_point() -> impl Strategy<Value = Point> {
    prop::collection::vec(rational(), DIM)
        .prop_map(|cs| Point::from_coords(symbols().into_iter().zip(cs)))
}

fn lattice_point(lo: i64, hi: i64) -> impl Strategy<Value = Point> {
    prop::collection::vec(lo..=hi, DIM).prop_map(|cs| point(&cs))
}

/// Nonnegative integer coordinates, not all zero.
fn positive_step() -> impl Strategy<Value = Point> {
    prop::collection::vec(0i64..=2, DIM).prop_map(|mut cs| {
        if cs.iter().all(|&c| c == 0) {
            cs[0] = 1;
        }
        point(&cs)
    })
}

fn additive() -> impl Strategy<Value = AdditiveFunctional> {
    prop::collection::vec(-3i64..=3, DIM)
        .prop_map(|vs| AdditiveFunctional::new(symbols().into_iter().zip(vs.into_iter().map(q))))
}

/// A tabulated function over the lattice box `[-1, 6]^3`, which every
/// difference below stays inside.
fn tabulated() -> impl Strategy<Value = PointFunction> {
    prop::collection::vec(-9i64..=9, 8usize.pow(DIM as u32)).prop_map(|values| {
        let mut entries = Vec::new();
        let mut it = values.into_iter();
        for a in -1..=6 {
            for b in -1..=6 {
                for c in -1..=6 {
                    entries.push((point(&[a, b, c]), q(it.next().unwrap())));
                }
            }
        }
        PointFunction::tabulated(entries)
    })
}

fn steps(points: Vec<Point>) -> IncrementList {
    IncrementList::from_points(points).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn additive_is_linear(a in additive(), x in rational_point(), y in rational_point(), s in rational(), t in rational()) {
        let combo = point_combine([(s.clone(), &x), (t.clone(), &y)]);
        prop_assert_eq!(additive_eval(&a, &combo), s.clone() * additive_eval(&a, &x) + t.clone() * additive_eval(&a, &y));
        for b in symbols() {
            prop_assert_eq!(coordinate(&combo, &b), s.clone() * coordinate(&x, &b) + t.clone() * coordinate(&y, &b));
        }
    }

    #[test]
    fn points_stay_canonical(x in rational_point(), y in rational_point()) {
        let sum = &x + &y;
        prop_assert!(sum.coords().all(|(_, c)| *c != q(0)));
        prop_assert_eq!(&(&sum - &y), &x);
        prop_assert!((&x - &x).is_zero());
        prop_assert_eq!(&x + &(-&x), Point::zero());
        prop_assert_eq!(x.scaled(&q(0)), Point::zero());
    }

    #[test]
    fn recursive_equals_closed(f in tabulated(), x in lattice_point(-1, 1), hs in prop::collection::vec(positive_step(), 1..=2)) {
        let hs = steps(hs);
        prop_assert_eq!(forward_diff(&f, &x, &hs).unwrap(), forward_diff_closed(&f, &x, &hs).unwrap());
    }

    #[test]
    fn difference_is_symmetric(a in additive(), x in lattice_point(-2, 2), hs in prop::collection::vec(positive_step(), 2..=5), n in 1u32..=4) {
        let f = PointFunction::positive_part_power(a, n);
        let mut reversed = hs.clone();
        reversed.reverse();
        let mut rotated = hs.clone();
        rotated.rotate_left(1);
        let value = forward_diff(&f, &x, &steps(hs)).unwrap();
        prop_assert_eq!(&value, &forward_diff(&f, &x, &steps(reversed)).unwrap());
        prop_assert_eq!(&value, &forward_diff(&f, &x, &steps(rotated)).unwrap());
    }

    #[test]
    fn backward_at_the_far_corner(a in additive(), x in lattice_point(-2, 2), hs in prop::collection::vec(positive_step(), 1..=5), n in 1u32..=4) {
        let f = PointFunction::positive_part_power(a, n);
        let hs = steps(hs);
        let far = &x + &hs.total();
        prop_assert_eq!(backward_diff(&f, &far, &hs).unwrap(), forward_diff(&f, &x, &hs).unwrap());
    }

    #[test]
    fn polynomial_differences_vanish(a in additive(), x in lattice_point(-3, 3), h in positive_step(), n in 1u32..=4) {
        // Δ_h^{n+1} of (a(x))ⁿ is zero
        let f = PointFunction::composite(convexity_core::ScalarKernel::Power(n), a);
        let h = Increment::new(h).unwrap();
        prop_assert_eq!(equal_increment_diff(&f, &x, &h, n as usize + 1).unwrap(), q(0));
    }

    #[test]
    fn odd_powers_are_jensen_convex(a in additive(), x in lattice_point(-4, 4), h in positive_step(), half in 0u32..=2) {
        let n = 2 * half + 1;
        let f = PointFunction::positive_part_power(a, n);
        let h = Increment::new(h).unwrap();
        prop_assert!(equal_increment_diff(&f, &x, &h, n as usize + 1).unwrap() >= q(0));
    }

    #[test]
    fn wright_specializes_to_jensen(a in additive(), xs in prop::collection::vec(lattice_point(-3, 3), 1..8), h in positive_step()) {
        let f = PointFunction::positive_part_power(a, 2);
        let h = Increment::new(h).unwrap();
        let jensen: Vec<(Point, Increment)> = xs.iter().map(|x| (x.clone(), h.clone())).collect();
        let wright: Vec<(Point, IncrementList)> = xs
            .iter()
            .map(|x| (x.clone(), IncrementList::repeated(&h, 3).unwrap()))
            .collect();
        let flagged = |o: convexity_core::differences::ProbeOutcome<Rational>| {
            o.violations.iter().map(|v| v.sample).collect::<Vec<_>>()
        };
        prop_assert_eq!(
            flagged(jensen_convexity_probe(&f, 2, &jensen)),
            flagged(wright_convexity_probe(&f, 2, &wright))
        );
    }

    #[test]
    fn shifts_compose(x in lattice_point(-1, 6), h in positive_step(), g in positive_step(), atom in lattice_point(0, 3)) {
        let d = MeasureExpr::dirac(atom);
        let twice = MeasureExpr::shift(MeasureExpr::shift(d.clone(), &h).unwrap(), &g).unwrap();
        let once = MeasureExpr::shift(d, &(&h + &g)).unwrap();
        prop_assert_eq!(twice.atom_mass(&x).unwrap(), once.atom_mass(&x).unwrap());
    }

    #[test]
    fn closure_and_nabla_invert(
        atoms in prop::collection::vec((lattice_point(0, 3), -3i64..=3), 1..=4),
        hs in prop::collection::vec(positive_step(), 1..=3),
        x in lattice_point(0, 7),
    ) {
        let nu = MeasureExpr::sum(atoms.iter().map(|(p, w)| MeasureExpr::scale(q(*w), MeasureExpr::dirac(p.clone()))).collect());
        let there_and_back = nabla(&j_op(&nu, &hs).unwrap(), &hs).unwrap();
        prop_assert_eq!(there_and_back.atom_mass(&x).unwrap(), nu.atom_mass(&x).unwrap());

        let positive = MeasureExpr::sum(atoms.iter().map(|(p, _)| MeasureExpr::dirac(p.clone())).collect());
        let mu = j_op(&positive, &hs).unwrap();
        let back_again = j_op(&nabla(&mu, &hs).unwrap(), &hs).unwrap();
        prop_assert_eq!(back_again.atom_mass(&x).unwrap(), mu.atom_mass(&x).unwrap());
    }

    #[test]
    fn mu_i_is_one_on_its_lattice(i in 1usize..=DIM, js in prop::collection::vec(0i64..=4, DIM)) {
        let symbols = symbols();
        let mu_i: MeasureExpr = build_mu_i(i, &symbols).unwrap();
        let x = &Point::basis(&symbols[i - 1]) + &point(&js);
        prop_assert_eq!(mu_i.atom_mass(&x).unwrap(), q(1));
    }

    #[test]
    fn products_of_mu_i_are_closures(subset in 1u64..(1 << DIM), mask in 1u64..(1 << DIM)) {
        // μ_{j₁}(x)⋯μ_{j_k}(x) = 𝒥 δ_{h_{j₁}+⋯+h_{j_k}}(x) on A
        let symbols = symbols();
        let hs: Vec<Point> = symbols.iter().map(Point::basis).collect();
        let x: Point = zero_one_point(&symbols, mask);
        let mut product = q(1);
        for j in (0..DIM).filter(|j| subset & (1 << j) != 0) {
            product *= build_mu_i::<Rational>(j + 1, &symbols).unwrap().atom_mass(&x).unwrap();
        }
        let closure = j_op(&MeasureExpr::dirac(zero_one_point(&symbols, subset)), &hs).unwrap();
        prop_assert_eq!(product, closure.atom_mass(&x).unwrap());
    }
}
