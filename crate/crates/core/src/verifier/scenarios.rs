//! Fixed scenarios. Each one builds its objects from scratch, evaluates every
//! quantity exactly and records it next to the value it must equal.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::differences::{
    backward_diff, equal_increment_diff, forward_diff, integer_box, jensen_convexity_probe,
    wright_convexity_probe, DifferenceTable, ProbeOutcome,
};
use crate::error::{Error, Result};
use crate::functions::ScalarKernel;
use crate::hamel::BasisSymbol;
use crate::measures::{
    build_mu, build_mu_i, measure_mass_function, nabla, nabla_mu_power_by_multinomial,
};
use crate::scalar::Scalar;
use crate::verifier::report::{Claim, Report, Trace, Value};
use crate::{
    ASets, AdditiveFunctional, Basis, Increment, IncrementList, MeasureExpr, Point, PointFunction,
    Rational,
};

/// Largest order run without an explicit opt-in: the difference at the
/// origin then needs at most 4096 function values.
pub const DEFAULT_MAX_ORDER: u32 = 11;
/// Orders exercised by batch runs of the difference scenario.
pub const BATCH_ORDERS: [u32; 6] = [1, 3, 5, 7, 9, 11];
/// Orders exercised by batch runs of the measure scenarios.
pub const MEASURE_BATCH_ORDERS: [u32; 3] = [1, 3, 5];

fn q(n: i64) -> Rational {
    Rational::int(n)
}

fn require_odd(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::UnsupportedOrder(
            0,
            "the order must be positive".into(),
        ));
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenOrder(n));
    }
    Ok(())
}

/// `h1, …, h_{n+1}` together with `a(h1) = -1`, `a(h_j) = 1` for `j > 1`
/// and `f = a(·)₊ⁿ`.
pub struct Counterexample {
    pub n: u32,
    pub symbols: Vec<BasisSymbol>,
    pub additive: AdditiveFunctional,
    pub function: PointFunction,
}

impl Counterexample {
    pub fn new(n: u32) -> Self {
        let symbols = Basis::indexed("h", n as usize + 1).to_vec();
        let additive = AdditiveFunctional::new(
            symbols
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), if i == 0 { q(-1) } else { q(1) })),
        );
        let function = PointFunction::positive_part_power(additive.clone(), n);
        Self {
            n,
            symbols,
            additive,
            function,
        }
    }

    pub fn increments(&self) -> IncrementList {
        IncrementList::from_symbols(&self.symbols).expect("basis symbols are declared positive")
    }

    /// `h1 + … + h_{n+1}`.
    pub fn top(&self) -> Point {
        self.increments().total()
    }
}

/// `0 + h1 + h3` style rendering of a subset sum starting at the origin.
fn subset_label(symbols: &[BasisSymbol], subset: &[usize]) -> String {
    std::iter::once("0".to_owned())
        .chain(subset.iter().map(|&i| symbols[i].to_string()))
        .join(" + ")
}

fn difference_trace(symbols: &[BasisSymbol], table: &DifferenceTable<Rational>) -> Trace {
    let rows = table
        .rows
        .iter()
        .map(|row| {
            vec![
                row.subset.len().to_string(),
                format!("f({})", subset_label(symbols, &row.subset)),
                row.value.to_string(),
                if row.negative { "-" } else { "+" }.to_owned(),
            ]
        })
        .collect();
    let sums = table.grouped_sums();
    let chain = sums
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if i == 0 {
                s.to_string()
            } else if i % 2 == 1 {
                format!("- {s}")
            } else {
                format!("+ {s}")
            }
        })
        .join(" ");
    let increments = symbols.iter().join("");
    let mut footer: Vec<String> = table
        .rows
        .iter()
        .chunk_by(|row| row.subset.len())
        .into_iter()
        .zip(&sums)
        .map(|((size, group), sum)| {
            format!(
                "size {size}: {} (sum {sum})",
                group.map(|r| &r.value).join(", ")
            )
        })
        .collect();
    footer.push(format!(
        "Δ_{{{increments}}} f(0) = {chain} = {}",
        table.value
    ));
    Trace {
        columns: vec!["size".into(), "term".into(), "value".into(), "sign".into()],
        rows,
        footer,
    }
}

/// The mixed difference `Δ_{h1…h_{n+1}} f(0)` of the odd-order counterexample,
/// by the recursive definition, the closed subset-sum form and the backward
/// form at `h1 + … + h_{n+1}`. All three must equal `-1`.
pub fn verify_theorem_2_3(n: u32) -> Result<Report> {
    require_odd(n)?;
    let ce = Counterexample::new(n);
    let steps = ce.increments();
    let mut report = Report::new("theorem23").with_parameter("n", n);

    let recursive = forward_diff(&ce.function, &Point::zero(), &steps)?;
    let table = DifferenceTable::build(&ce.function, &Point::zero(), &steps)?;
    let backward = backward_diff(&ce.function, &ce.top(), &steps)?;

    report.push(Claim::new(
        "forward-difference",
        "Δ_{h1…h_{n+1}} f(0) = -1 (recursive definition)",
        recursive,
        q(-1),
    ));
    report.push(Claim::new(
        "closed-form",
        "alternating sum of f over the 2^{n+1} subset sums = -1",
        table.value.clone(),
        q(-1),
    ));
    report.push(Claim::new(
        "backward-difference",
        "∇_{h1…h_{n+1}} f(h1+…+h_{n+1}) = Δ_{h1…h_{n+1}} f(0) = -1",
        backward,
        q(-1),
    ));
    report.push(Claim::new(
        "evaluations",
        "function values in the expansion = 2^{n+1}",
        q(table.rows.len() as i64),
        q(1i64 << (n + 1)),
    ));
    report.trace = Some(difference_trace(&ce.symbols, &table));
    Ok(report)
}

/// Row values of the order-three table in subset-size-descending,
/// lexicographic order.
const SECTION_31_VALUES: [i64; 16] = [8, 1, 1, 1, 27, 0, 0, 0, 8, 8, 8, 0, 1, 1, 1, 0];
const SECTION_31_GROUPS: [i64; 5] = [8, 30, 24, 3, 0];

/// The order-three table: all sixteen values of `f`, the grouped sums and
/// the final `-1`.
pub fn verify_section_3_1() -> Result<Report> {
    let ce = Counterexample::new(3);
    let table = DifferenceTable::build(&ce.function, &Point::zero(), &ce.increments())?;
    let mut report = Report::new("section31");
    for (row, &expected) in table.rows.iter().zip(SECTION_31_VALUES.iter()) {
        report.push(Claim::new(
            format!("f({})", subset_label(&ce.symbols, &row.subset)),
            format!("a(x)₊³ at x = {}", row.point),
            row.value.clone(),
            q(expected),
        ));
    }
    for (i, (sum, &expected)) in table
        .grouped_sums()
        .iter()
        .zip(SECTION_31_GROUPS.iter())
        .enumerate()
    {
        report.push(Claim::new(
            format!("group-size-{}", 4 - i),
            format!("sum of f over subsets of size {}", 4 - i),
            sum.clone(),
            q(expected),
        ));
    }
    report.push(Claim::new(
        "difference",
        "8 - 30 + 24 - 3 + 0 = -1",
        table.value.clone(),
        q(-1),
    ));
    report.trace = Some(difference_trace(&ce.symbols, &table));
    Ok(report)
}

fn violation_count(outcome: &ProbeOutcome<Rational>) -> Rational {
    q(outcome.violations.len() as i64)
}

/// The four order-two observations: a tabulated `|Q|` failing Jensen
/// convexity, an exact witness against discontinuous `a(·)₊²`, the convex
/// continuous case `c ≥ 0` and the reflected case `c < 0`.
pub fn verify_section_3_2() -> Result<Report> {
    let mut report = Report::new("section32");
    quadratic_magnitude_claims(&mut report)?;
    discontinuous_witness_claims(&mut report)?;
    for c in [0, 1, 2] {
        convex_grid_claims(&mut report, c)?;
    }
    for c in [-1, -2] {
        reflected_claims(&mut report, c)?;
    }
    Ok(report)
}

/// Symbols `one, sqrt2, cbrt2, cbrt4`, all positive reals, with `cbrt4`
/// carried as its own symbol so that squares of `p + q·cbrt2` are linear.
fn quadratic_magnitude_claims(report: &mut Report) -> Result<()> {
    let mut basis = Basis::new();
    let one = basis.declare("one", true)?;
    let sqrt2 = basis.declare("sqrt2", true)?;
    let cbrt2 = basis.declare("cbrt2", true)?;
    let cbrt4 = basis.declare("cbrt4", true)?;
    let a = AdditiveFunctional::new([(one.clone(), q(-9)), (sqrt2, q(4)), (cbrt4.clone(), q(4))]);

    let unit = Point::basis(&one);
    let root = Point::basis(&cbrt2);
    let root_sq = Point::basis(&cbrt4);
    // cbrt2 - 1 > 0, a fact about the reals the symbols cannot express
    let h = Increment::assume_positive(&root - &unit)?;

    // (x + k·h) = (1 - k) + k·cbrt2, squared = (1-k)² + 2k(1-k)·cbrt2 + k²·cbrt4
    let expected_q = [-9, 4, 7, 0];
    let mut table = Vec::new();
    for k in 0..4i64 {
        let point = &unit + &h.point().scaled(&q(k));
        let square = Point::combine([
            (q((1 - k) * (1 - k)), &unit),
            (q(2 * k * (1 - k)), &root),
            (q(k * k), &root_sq),
        ]);
        let value = a.eval(&square);
        report.push(Claim::new(
            format!("quadratic/Q(x+{k}h)"),
            format!("a(({point})²) with ({point})² = {square}"),
            value.clone(),
            q(expected_q[k as usize]),
        ));
        table.push((point, value));
    }
    let f = PointFunction::apply(ScalarKernel::AbsoluteValue, PointFunction::tabulated(table));
    let diff = equal_increment_diff(&f, &unit, &h, 3)?;
    report.push(Claim::new(
        "quadratic/third-difference",
        "Δ_h³ |Q|(x) = |Q(x+3h)| - 3|Q(x+2h)| + 3|Q(x+h)| - |Q(x)| = -18",
        diff,
        q(-18),
    ));
    Ok(())
}

fn discontinuous_witness_claims(report: &mut Report) -> Result<()> {
    let (s, t) = (BasisSymbol::positive("s"), BasisSymbol::positive("t"));
    let a = AdditiveFunctional::new([(s.clone(), q(1)), (t.clone(), q(-2))]);
    let f = PointFunction::positive_part_power(a.clone(), 2);
    let x = Point::basis(&s);
    let h = Increment::of_symbol(&t)?;
    report.push(Claim::new("witness/a(x)", "a(x) = 1", a.eval(&x), q(1)));
    report.push(Claim::new(
        "witness/a(h)",
        "a(h) = -2",
        a.eval(h.point()),
        q(-2),
    ));
    for k in 1..=3 {
        let point = &x + &h.point().scaled(&q(k));
        report.push(Claim::new(
            format!("witness/f(x+{k}h)"),
            format!("a(x+{k}h)₊² = 0"),
            f.eval(&point)?,
            q(0),
        ));
    }
    let diff = equal_increment_diff(&f, &x, &h, 3)?;
    let ax = a.eval(&x);
    report.push(Claim::new(
        "witness/third-difference",
        "Δ_h³ f(x) = -(a(x))² = -1",
        diff,
        -(ax.clone() * ax),
    ));
    Ok(())
}

/// The grid `x ∈ {-3, …, 3}·u`, `h ∈ {u, 2u}`.
fn unit_grid(u: &BasisSymbol) -> Vec<(Point, Increment)> {
    integer_box::<Rational>(std::slice::from_ref(u), -3..=3)
        .into_iter()
        .cartesian_product([1, 2])
        .map(|(x, k)| {
            let h = Increment::new(Point::basis(u).scaled(&q(k)))
                .expect("multiples of a positive symbol");
            (x, h)
        })
        .collect()
}

fn convex_grid_claims(report: &mut Report, c: i64) -> Result<()> {
    let u = BasisSymbol::positive("u");
    let linear = AdditiveFunctional::new([(u.clone(), q(c))]);
    let f = PointFunction::positive_part_power(linear, 2);
    let unit = AdditiveFunctional::new([(u.clone(), q(1))]);
    let rescaled = PointFunction::scaled(q(c * c), PointFunction::positive_part_power(unit, 2));

    let grid = unit_grid(&u);
    let mut same = true;
    for (x, _) in &grid {
        same &= f.eval(x)? == rescaled.eval(x)?;
    }
    report.push(Claim::new(
        format!("convex/c={c}/rescaling"),
        "(c·x)₊² = c²·x₊² on the grid",
        same,
        true,
    ));
    let outcome = jensen_convexity_probe(&f, 2, &grid);
    report.push(Claim::new(
        format!("convex/c={c}/violations"),
        "Δ_h³ f(x) ≥ 0 for x ∈ [-3, 3], h ∈ {1, 2}",
        violation_count(&outcome),
        q(0),
    ));
    Ok(())
}

fn reflected_claims(report: &mut Report, c: i64) -> Result<()> {
    let u = BasisSymbol::positive("u");
    let f = PointFunction::positive_part_power(AdditiveFunctional::new([(u.clone(), q(c))]), 2);
    let reflected = PointFunction::scaled(
        q(c * c),
        PointFunction::positive_part_power(AdditiveFunctional::new([(u.clone(), q(-1))]), 2),
    );
    let mut same = true;
    for (x, _) in unit_grid(&u) {
        same &= f.eval(&x)? == reflected.eval(&x)?;
    }
    report.push(Claim::new(
        format!("reflected/c={c}/rescaling"),
        "(c·x)₊² = c²·(-x)₊² on the grid",
        same,
        true,
    ));
    let x = -&Point::basis(&u);
    let h = Increment::of_symbol(&u)?;
    report.push(Claim::new(
        format!("reflected/c={c}/third-difference"),
        "Δ_h³ f(-1) with h = 1 equals -c²",
        equal_increment_diff(&f, &x, &h, 3)?,
        q(-c * c),
    ));
    Ok(())
}

fn delta(x: &Point, at: &Point) -> Rational {
    if x == at {
        q(1)
    } else {
        q(0)
    }
}

/// Pointwise properties of `μ_1, …, μ_{n+1}` and `μ` on `A`.
pub fn verify_lemma_4_4(n: u32) -> Result<Report> {
    require_odd(n)?;
    let symbols = Basis::indexed("h", n as usize + 1).to_vec();
    let k = symbols.len();
    let mus = (1..=k)
        .map(|i| build_mu_i::<Rational>(i, &symbols))
        .collect::<Result<Vec<_>>>()?;
    let mu = build_mu::<Rational>(&symbols)?;
    let sets = ASets::build(&symbols)?;
    let h1 = Point::basis(&symbols[0]);
    let mut report = Report::new("lemma44").with_parameter("n", n);

    // masses[x][i] for every x in A
    let mut rows = Vec::with_capacity(sets.a_union.len());
    for x in &sets.a_union {
        let masses = mus
            .iter()
            .map(|m| m.atom_mass(x))
            .collect::<Result<Vec<_>>>()?;
        rows.push((x, masses, mu.atom_mass(x)?));
    }

    for i in 1..=k {
        let inside = rows
            .iter()
            .filter(|(x, masses, _)| sets.in_a_i(i, x) && masses[i - 1].is_one())
            .count();
        report.push(Claim::new(
            format!("a/mu{i}"),
            format!("μ{i}(x) = 1 for every x ∈ A{i} (count of such x = |A{i}|)"),
            q(inside as i64),
            q(sets.a_i[i - 1].len() as i64),
        ));
        let outside_total = sets.a_union.len() - sets.a_i[i - 1].len();
        let outside = rows
            .iter()
            .filter(|(x, masses, _)| !sets.in_a_i(i, x) && masses[i - 1].is_zero())
            .count();
        report.push(Claim::new(
            format!("b/mu{i}"),
            format!("μ{i}(x) = 0 for every x ∈ A \\ A{i}"),
            q(outside as i64),
            q(outside_total as i64),
        ));
    }

    let negative = rows
        .iter()
        .filter(|(_, _, m)| m.is_negative())
        .map(|(x, _, _)| x.to_string());
    report.push(Claim::new(
        "c/negative-set",
        "{x ∈ A : μ(x) < 0} = {h1}",
        Value::set(negative),
        Value::set([h1.to_string()]),
    ));
    report.push(Claim::new(
        "d/mu(h1)",
        "μ(h1) = -1",
        mu.atom_mass(&h1)?,
        q(-1),
    ));
    report.push(Claim::new(
        "d/mu1(h1)",
        "-μ1(h1) = -1 (μ1 enters μ with sign -1)",
        -mus[0].atom_mass(&h1)?,
        q(-1),
    ));

    let positive_part_ok = rows
        .iter()
        .filter(|(x, _, m)| m.positive_part() == m.clone() + delta(x, &h1))
        .count();
    report.push(Claim::new(
        "e/positive-part",
        "μ₊(x) = μ(x) + δ_h1(x) for every x ∈ A",
        q(positive_part_ok as i64),
        q(sets.a_union.len() as i64),
    ));

    let mut columns = vec!["x".to_owned()];
    columns.extend((1..=k).map(|i| format!("mu{i}")));
    columns.extend(["mu".to_owned(), "mu+".to_owned()]);
    report.trace = Some(Trace {
        columns,
        rows: rows
            .iter()
            .map(|(x, masses, m)| {
                let mut row = vec![x.to_string()];
                row.extend(masses.iter().map(|v| v.to_string()));
                row.push(m.to_string());
                row.push(m.positive_part().to_string());
                row
            })
            .collect(),
        footer: Vec::new(),
    });
    Ok(report)
}

/// The measure route to `∇_{h1…h_{n+1}} f(h1+…+h_{n+1}) = -1`, compared with
/// the direct difference.
pub fn verify_lemma_4_6(n: u32) -> Result<Report> {
    require_odd(n)?;
    let ce = Counterexample::new(n);
    let symbols = &ce.symbols;
    let steps = ce.increments();
    let top = ce.top();
    let h1 = Point::basis(&symbols[0]);
    let mu = build_mu::<Rational>(symbols)?;
    let dirac = MeasureExpr::dirac(h1.clone());
    let sets = ASets::build(symbols)?;
    let sign = if n % 2 == 1 { q(-1) } else { q(1) };

    let mu_mass = measure_mass_function(mu.clone());
    let dirac_mass = measure_mass_function(dirac.clone());
    let shifted_power = PointFunction::pointwise_power(
        PointFunction::sum(vec![mu_mass.clone(), dirac_mass.clone()]),
        n,
    );
    let mu_power = PointFunction::pointwise_power(mu_mass.clone(), n);

    let mut report = Report::new("lemma46").with_parameter("n", n);
    let total = q(sets.a_union.len() as i64);
    let (mut additive_ok, mut power_ok, mut binomial_ok) = (0i64, 0i64, 0i64);
    let mut rows = Vec::new();
    for x in &sets.a_union {
        let m = mu.atom_mass(x)?;
        let fx = ce.function.eval(x)?;
        let sp = shifted_power.eval(x)?;
        let rhs = m.powi(n) - sign.clone() * delta(x, &h1);
        additive_ok += (ce.additive.eval(x) == m) as i64;
        power_ok += (fx == sp) as i64;
        binomial_ok += (sp == rhs) as i64;
        rows.push(vec![
            x.to_string(),
            ce.additive.eval(x).to_string(),
            m.to_string(),
            fx.to_string(),
            sp.to_string(),
        ]);
    }
    report.push(Claim::new(
        "additive-equals-mass",
        "a(x) = μ(x) for every x ∈ A",
        q(additive_ok),
        total.clone(),
    ));
    report.push(Claim::new(
        "function-equals-shifted-power",
        "f(x) = (μ + δ_h1)ⁿ(x) for every x ∈ A",
        q(power_ok),
        total.clone(),
    ));
    report.push(Claim::new(
        "binomial-collapse",
        "(μ + δ_h1)ⁿ(x) = μⁿ(x) - (-1)ⁿ δ_h1(x) for every x ∈ A",
        q(binomial_ok),
        total,
    ));

    let nabla_mu_power = backward_diff(&mu_power, &top, &steps)?;
    report.push(Claim::new(
        "nabla-mu-power",
        "∇_{h1…h_{n+1}} μⁿ(h1+…+h_{n+1}) = 0",
        nabla_mu_power.clone(),
        q(0),
    ));
    report.push(Claim::new(
        "nabla-mu-power-multinomial",
        "Σ_{j1+…+j_{n+1}=n} (n; j) (-1)^{j1} δ_{ε·h}(h1+…+h_{n+1}) = 0",
        nabla_mu_power_by_multinomial::<Rational>(symbols, n, &top)?,
        q(0),
    ));
    let nabla_dirac = backward_diff(&dirac_mass, &top, &steps)?;
    report.push(Claim::new(
        "nabla-dirac",
        "∇_{h1…h_{n+1}} δ_h1(h1+…+h_{n+1}) = (-1)ⁿ",
        nabla_dirac.clone(),
        sign.clone(),
    ));
    report.push(Claim::new(
        "nabla-dirac-measure",
        "(∇_{h1…h_{n+1}} δ_h1)({h1+…+h_{n+1}}) = (-1)ⁿ as a measure",
        nabla(&dirac, &steps.points())?.atom_mass(&top)?,
        sign.clone(),
    ));

    let via_measures = nabla_mu_power - sign * nabla_dirac;
    let via_shifted_power = backward_diff(&shifted_power, &top, &steps)?;
    let direct = backward_diff(&ce.function, &top, &steps)?;
    report.push(Claim::new(
        "measure-path",
        "∇μⁿ(top) - (-1)ⁿ ∇δ_h1(top) = -1",
        via_measures.clone(),
        q(-1),
    ));
    report.push(Claim::new(
        "shifted-power-path",
        "∇_{h1…h_{n+1}} (μ + δ_h1)ⁿ(h1+…+h_{n+1}) = -1",
        via_shifted_power,
        q(-1),
    ));
    report.push(Claim::new(
        "direct-path",
        "∇_{h1…h_{n+1}} f(h1+…+h_{n+1}) = -1",
        direct.clone(),
        q(-1),
    ));
    report.push(Claim::new(
        "paths-agree",
        "measure path = direct difference",
        via_measures == direct,
        true,
    ));
    report.trace = Some(Trace {
        columns: vec![
            "x".into(),
            "a(x)".into(),
            "mu(x)".into(),
            "f(x)".into(),
            "(mu+delta)^n(x)".into(),
        ],
        rows,
        footer: vec![format!("∇ f(top) = {direct}")],
    });
    Ok(report)
}

/// Documented order-two candidates.
pub const EVEN_CANDIDATES: [&str; 3] = ["prop31-witness", "prop32-grid", "prop33-witness"];

fn violation_trace(outcome: &ProbeOutcome<Rational>) -> Option<Trace> {
    let violation = outcome.violations.first()?;
    Some(Trace {
        columns: vec!["point".into(), "value".into(), "sign".into()],
        rows: violation
            .table
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.point.to_string(),
                    r.value.to_string(),
                    if r.negative { "-" } else { "+" }.into(),
                ]
            })
            .collect(),
        footer: vec![format!(
            "Δ at x = {} with h = {} is {}",
            violation.x, violation.increments[0], violation.value
        )],
    })
}

/// Runs one documented order-two candidate and reports how it fares. None of
/// them separates the two classes; the even-order question stays open.
pub fn probe_even(n: u32, case: &str) -> Result<Report> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::UnsupportedOrder(
            n,
            "the even-order probe takes an even order".into(),
        ));
    }
    if n != 2 {
        return Err(Error::UnsupportedOrder(
            n,
            "candidates are documented for order 2 only".into(),
        ));
    }
    let mut report = Report::new("probe-even")
        .with_parameter("n", n)
        .with_parameter("case", case);
    let u = BasisSymbol::positive("u");
    match case {
        "prop31-witness" => {
            let (s, t) = (BasisSymbol::positive("s"), BasisSymbol::positive("t"));
            let a = AdditiveFunctional::new([(s.clone(), q(1)), (t.clone(), q(-2))]);
            let f = PointFunction::positive_part_power(a, 2);
            let outcome =
                jensen_convexity_probe(&f, 2, &[(Point::basis(&s), Increment::of_symbol(&t)?)]);
            push_violation_claims(&mut report, &outcome, 1, Some(q(-1)));
            report.notes.push(
                "discontinuous a: a(·)₊² is not 2-Jensen-convex, so it cannot separate the classes"
                    .into(),
            );
            report.trace = violation_trace(&outcome);
        }
        "prop33-witness" => {
            let f = PointFunction::positive_part_power(
                AdditiveFunctional::new([(u.clone(), q(-1))]),
                2,
            );
            let outcome =
                jensen_convexity_probe(&f, 2, &[(-&Point::basis(&u), Increment::of_symbol(&u)?)]);
            push_violation_claims(&mut report, &outcome, 1, Some(q(-1)));
            report
                .notes
                .push("a(x) = c·x with c = -1: not 2-Jensen-convex".into());
            report.trace = violation_trace(&outcome);
        }
        "prop32-grid" => {
            let f =
                PointFunction::positive_part_power(AdditiveFunctional::new([(u.clone(), q(1))]), 2);
            let grid = unit_grid(&u);
            let outcome = jensen_convexity_probe(&f, 2, &grid);
            push_violation_claims(&mut report, &outcome, 0, None);
            let steps: Vec<Increment> = [1, 2]
                .iter()
                .map(|&k| Increment::new(Point::basis(&u).scaled(&q(k))))
                .collect::<Result<_>>()?;
            let mut wright_samples = Vec::new();
            for x in integer_box::<Rational>(std::slice::from_ref(&u), -3..=3) {
                for combo in std::iter::repeat_n(steps.iter(), 3).multi_cartesian_product() {
                    wright_samples.push((
                        x.clone(),
                        IncrementList::new(combo.into_iter().cloned().collect())?,
                    ));
                }
            }
            let wright = wright_convexity_probe(&f, 2, &wright_samples);
            report.push(Claim::new(
                "wright-violations",
                "Δ_{h1h2h3} f(x) ≥ 0 on the grid with h_i ∈ {1, 2}",
                violation_count(&wright),
                q(0),
            ));
            report.notes.push(
                "a(x) = c·x with c = 1: continuous and 2-Jensen-convex, hence also 2-Wright-convex"
                    .into(),
            );
        }
        other => return Err(Error::UnknownCandidate(other.to_owned())),
    }
    Ok(report)
}

fn push_violation_claims(
    report: &mut Report,
    outcome: &ProbeOutcome<Rational>,
    expected: i64,
    value: Option<Rational>,
) {
    report.push(Claim::new(
        "jensen-violations",
        "samples with Δ_h³ f(x) < 0",
        violation_count(outcome),
        q(expected),
    ));
    if let (Some(expected_value), Some(v)) = (value, outcome.violations.first()) {
        report.push(Claim::new(
            "violation-value",
            "Δ_h³ f(x) at the witness",
            v.value.clone(),
            expected_value,
        ));
    }
}
