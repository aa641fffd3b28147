//! Line-oriented scenario definition files.
//!
//! ```text
//! # comment
//! symbol h1 positive
//! additive h1 = -1                 # value of the default functional `a`
//! additive b[h2] = 1/2             # value of a named functional
//! point x = 2*h1 - 1/3*h2          # also `0`, or names of earlier points
//! assume-positive x                # caller vouches that x > 0
//! function pospartpow 3 of a       # also: abs of, power <n> of, identity of
//! function abs tabulated { h1 : 9, 2*h1 : -4 }
//! measure m = mu over [h1, h2]     # also: dirac <point>, mu <i> over [...],
//!                                  #       closure <m> over [...], nabla <m> over [...]
//! eval value at <point>
//! eval forward-diff at <point> with [<point>, ...]      # also backward-diff, closed-diff
//! eval equal-diff at <point> step <point> order <m>
//! eval jensen-probe n=<k> grid=<lo>..<hi> over [<symbol>, ...] steps [<point>, ...]
//! eval wright-probe n=<k> grid=<lo>..<hi> over [<symbol>, ...] with [<point>, ...]
//! eval atom-mass <measure> at <point>
//! ```
//!
//! Any `eval` line may end in `expect <rational>`; the claim then passes only
//! on exact equality. Probes report their violation count. A tabulated block
//! may span several lines up to the closing brace.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use itertools::Itertools;

use crate::differences::{
    backward_diff, equal_increment_diff, forward_diff, forward_diff_closed, integer_box,
    jensen_convexity_probe, wright_convexity_probe, ProbeOutcome,
};
use crate::error::{Error, Result};
use crate::functions::ScalarKernel;
use crate::measures::{build_mu, build_mu_i, j_op, nabla};
use crate::verifier::report::{Claim, Report, Trace, Value};
use crate::{
    AdditiveFunctional, Basis, BasisSymbol, Increment, IncrementList, MeasureExpr, Point,
    PointFunction, Rational,
};

const DEFAULT_ADDITIVE: &str = "a";

#[derive(Clone, Debug)]
enum Request {
    Value {
        x: Point,
    },
    Difference {
        kind: DiffKind,
        x: Point,
        steps: IncrementList,
    },
    EqualDiff {
        x: Point,
        step: Increment,
        order: usize,
    },
    JensenProbe {
        n: usize,
        samples: Vec<(Point, Increment)>,
    },
    WrightProbe {
        n: usize,
        samples: Vec<(Point, IncrementList)>,
    },
    AtomMass {
        measure: String,
        x: Point,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum DiffKind {
    Forward,
    Backward,
    Closed,
}

#[derive(Clone, Debug)]
struct EvalLine {
    line: usize,
    text: String,
    function: Option<PointFunction>,
    request: Request,
    expect: Option<Rational>,
}

/// A parsed definition file: declarations plus evaluation requests, each
/// bound to the function in force on its line.
#[derive(Clone, Debug, Default)]
pub struct ScenarioDefinition {
    pub basis: Basis,
    pub additives: BTreeMap<String, AdditiveFunctional>,
    pub points: BTreeMap<String, Point>,
    pub measures: BTreeMap<String, MeasureExpr>,
    asserted: BTreeSet<String>,
    function: Option<PointFunction>,
    evals: Vec<EvalLine>,
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Self { text, pos: 0, line }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.text[..self.pos].chars().count() + 1,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.rest().is_empty()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        match rest.chars().next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return Err(self.error("expected a name")),
        }
        let len = rest
            .find(|c: char| !is_ident_char(c) && c != '-')
            .unwrap_or(rest.len());
        // names may contain '-' only when followed by a letter (keywords like forward-diff)
        let mut end = 0;
        let bytes: Vec<char> = rest[..len].chars().collect();
        for (i, &c) in bytes.iter().enumerate() {
            if c == '-' && !bytes.get(i + 1).is_some_and(|n| n.is_ascii_alphabetic()) {
                break;
            }
            end += c.len_utf8();
        }
        let word = &rest[..end];
        self.pos += end;
        Ok(word)
    }

    fn keyword(&mut self, word: &str) -> Result<()> {
        let start = self.pos;
        match self.ident() {
            Ok(w) if w == word => Ok(()),
            _ => {
                self.pos = start;
                self.skip_ws();
                Err(self.error(format!("expected `{word}`")))
            }
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let negative = self.eat("-");
        let rest = self.rest();
        let len = rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len());
        if len == 0 {
            self.pos = start;
            return Err(self.error("expected an integer"));
        }
        let value: i64 = rest[..len]
            .parse()
            .map_err(|_| self.error("integer out of range"))?;
        self.pos += len;
        Ok(if negative { -value } else { value })
    }

    fn unsigned(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        let value = self.integer()?;
        u32::try_from(value).map_err(|_| {
            self.pos = start;
            self.error("expected a nonnegative integer")
        })
    }

    /// `-?\d+(/\d+)?`
    fn rational(&mut self) -> Result<Rational> {
        self.skip_ws();
        let start = self.pos;
        let numerator = self.integer()?;
        if self.rest().starts_with('/') {
            self.pos += 1;
            let denominator_at = self.pos;
            let denominator = self.integer()?;
            if denominator <= 0 {
                self.pos = denominator_at;
                return Err(self.error("denominator must be positive"));
            }
            return Ok(Rational::new(numerator.into(), denominator.into()));
        }
        let _ = start;
        Ok(Rational::from_integer(numerator.into()))
    }

    fn starts_number(&mut self) -> bool {
        self.skip_ws();
        let mut chars = self.rest().chars();
        match chars.next() {
            Some(c) if c.is_ascii_digit() => true,
            Some('-') => chars.next().is_some_and(|c| c.is_ascii_digit()),
            _ => false,
        }
    }
}

impl ScenarioDefinition {
    pub fn parse(source: &str) -> Result<Self> {
        let mut def = Self::default();
        let mut lines = source.lines().enumerate().peekable();
        while let Some((index, raw)) = lines.next() {
            let line_no = index + 1;
            let mut text = strip_comment(raw).to_owned();
            // tabulated blocks may span lines
            if text.contains('{') && !text.contains('}') {
                for (_, more) in lines.by_ref() {
                    text.push(' ');
                    text.push_str(strip_comment(more));
                    if text.contains('}') {
                        break;
                    }
                }
            }
            if text.trim().is_empty() {
                continue;
            }
            def.statement(&text, line_no)?;
        }
        Ok(def)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn statement(&mut self, text: &str, line: usize) -> Result<()> {
        let mut cur = Cursor::new(text, line);
        let head = cur.ident()?;
        match head {
            "symbol" => {
                let name = cur.ident()?;
                let positive = if cur.at_end() {
                    false
                } else {
                    cur.keyword("positive")?;
                    true
                };
                self.basis.declare(name, positive)?;
            }
            "additive" => {
                let first = cur.ident()?;
                let (functional, symbol) = if cur.eat("[") {
                    let symbol = cur.ident()?;
                    cur.expect("]")?;
                    (first, symbol)
                } else {
                    (DEFAULT_ADDITIVE, first)
                };
                let symbol = self.basis.get(symbol)?.clone();
                cur.expect("=")?;
                let value = cur.rational()?;
                self.additives
                    .entry(functional.to_owned())
                    .or_default()
                    .set(symbol, value);
            }
            "point" => {
                let name = cur.ident()?;
                cur.expect("=")?;
                let (point, _) = self.point_expr(&mut cur)?;
                self.points.insert(name.to_owned(), point);
            }
            "assume-positive" => {
                let name = cur.ident()?;
                if !self.points.contains_key(name) {
                    return Err(cur.error(format!("unknown point `{name}`")));
                }
                self.asserted.insert(name.to_owned());
            }
            "function" => {
                let f = self.function_spec(&mut cur)?;
                self.function = Some(f);
            }
            "measure" => {
                let name = cur.ident()?;
                cur.expect("=")?;
                let m = self.measure_spec(&mut cur)?;
                self.measures.insert(name.to_owned(), m);
            }
            "eval" => {
                let request = self.request(&mut cur)?;
                let expect = if cur.at_end() {
                    None
                } else {
                    cur.keyword("expect")?;
                    Some(cur.rational()?)
                };
                self.evals.push(EvalLine {
                    line,
                    text: text.trim().to_owned(),
                    function: self.function.clone(),
                    request,
                    expect,
                });
            }
            other => {
                cur.pos = 0;
                cur.skip_ws();
                return Err(cur.error(format!("unknown statement `{other}`")));
            }
        }
        if !cur.at_end() {
            return Err(cur.error("unexpected trailing input"));
        }
        Ok(())
    }

    /// A linear combination of symbols and named points. Also returns the
    /// point name when the expression is exactly one bare name.
    fn point_expr(&self, cur: &mut Cursor<'_>) -> Result<(Point, Option<String>)> {
        let mut terms: Vec<(Rational, Point)> = Vec::new();
        let mut bare = None;
        let mut first = true;
        loop {
            let mut sign = Rational::from_integer(1.into());
            if cur.eat("+") {
                if first {
                    return Err(cur.error("expected a term"));
                }
            } else if cur.peek() == Some('-') && !cur.starts_number() {
                cur.eat("-");
                sign = -sign;
            } else if !first {
                break;
            }
            let coefficient = if cur.starts_number() {
                let c = cur.rational()?;
                if cur.eat("*") {
                    Some(c)
                } else if c == Rational::from_integer(0.into()) && first {
                    // the zero point
                    terms.push((c, Point::zero()));
                    first = false;
                    continue;
                } else {
                    return Err(cur.error("expected `*` after a coefficient"));
                }
            } else {
                None
            };
            let name_at = cur.pos;
            let name = cur.ident()?;
            let value = if let Some(p) = self.points.get(name) {
                p.clone()
            } else {
                match self.basis.get(name) {
                    Ok(s) => Point::basis(s),
                    Err(e) => {
                        cur.pos = name_at;
                        return Err(e);
                    }
                }
            };
            if first && coefficient.is_none() && sign == Rational::from_integer(1.into()) {
                bare = Some(name.to_owned());
            } else {
                bare = None;
            }
            terms.push((
                sign * coefficient.unwrap_or_else(|| Rational::from_integer(1.into())),
                value,
            ));
            first = false;
        }
        if terms.len() != 1 {
            bare = None;
        }
        let point = Point::combine(terms.iter().map(|(c, p)| (c.clone(), p)));
        Ok((point, bare))
    }

    fn increment(&self, cur: &mut Cursor<'_>) -> Result<Increment> {
        let (point, bare) = self.point_expr(cur)?;
        match bare {
            Some(name) if self.asserted.contains(&name) => Increment::assume_positive(point),
            _ => Increment::new(point),
        }
    }

    fn list<T>(
        &self,
        cur: &mut Cursor<'_>,
        mut item: impl FnMut(&Self, &mut Cursor<'_>) -> Result<T>,
    ) -> Result<Vec<T>> {
        cur.expect("[")?;
        let mut out = Vec::new();
        if cur.eat("]") {
            return Ok(out);
        }
        loop {
            out.push(item(self, cur)?);
            if cur.eat("]") {
                return Ok(out);
            }
            cur.expect(",")?;
        }
    }

    fn symbol_list(&self, cur: &mut Cursor<'_>) -> Result<Vec<BasisSymbol>> {
        self.list(cur, |def, cur| {
            let at = cur.pos;
            let name = cur.ident()?;
            def.basis.get(name).cloned().inspect_err(|_| {
                cur.pos = at;
            })
        })
    }

    fn increment_list(&self, cur: &mut Cursor<'_>) -> Result<IncrementList> {
        IncrementList::new(self.list(cur, |def, cur| def.increment(cur))?)
    }

    fn additive(&self, cur: &mut Cursor<'_>) -> Result<AdditiveFunctional> {
        let name = cur.ident()?;
        self.additives
            .get(name)
            .cloned()
            .ok_or_else(|| cur.error(format!("unknown additive functional `{name}`")))
    }

    fn function_spec(&self, cur: &mut Cursor<'_>) -> Result<PointFunction> {
        let kind = cur.ident()?;
        let kernel = match kind {
            "pospartpow" => ScalarKernel::PositivePartPower(cur.unsigned()?),
            "power" => ScalarKernel::Power(cur.unsigned()?),
            "abs" => ScalarKernel::AbsoluteValue,
            "identity" => ScalarKernel::Identity,
            "tabulated" => return self.table(cur),
            other => return Err(cur.error(format!("unknown function kind `{other}`"))),
        };
        let start = cur.pos;
        if let Ok(word) = cur.ident() {
            if word == "tabulated" {
                return Ok(PointFunction::apply(kernel, self.table(cur)?));
            }
            if word == "of" {
                return Ok(PointFunction::composite(kernel, self.additive(cur)?));
            }
        }
        cur.pos = start;
        cur.skip_ws();
        Err(cur.error("expected `of` or `tabulated`"))
    }

    fn table(&self, cur: &mut Cursor<'_>) -> Result<PointFunction> {
        cur.expect("{")?;
        let mut entries = Vec::new();
        if !cur.eat("}") {
            loop {
                let (point, _) = self.point_expr(cur)?;
                cur.expect(":")?;
                entries.push((point, cur.rational()?));
                if cur.eat("}") {
                    break;
                }
                cur.expect(",")?;
            }
        }
        Ok(PointFunction::tabulated(entries))
    }

    fn measure_ref(&self, cur: &mut Cursor<'_>) -> Result<MeasureExpr> {
        let name = cur.ident()?;
        self.measures
            .get(name)
            .cloned()
            .ok_or_else(|| cur.error(format!("unknown measure `{name}`")))
    }

    fn measure_spec(&self, cur: &mut Cursor<'_>) -> Result<MeasureExpr> {
        let kind = cur.ident()?;
        match kind {
            "dirac" => Ok(MeasureExpr::dirac(self.point_expr(cur)?.0)),
            "mu" => {
                let index = if cur.starts_number() {
                    Some(cur.unsigned()? as usize)
                } else {
                    None
                };
                cur.keyword("over")?;
                let symbols = self.symbol_list(cur)?;
                match index {
                    Some(i) => build_mu_i(i, &symbols),
                    None => build_mu(&symbols),
                }
            }
            "closure" | "nabla" => {
                let inner = self.measure_ref(cur)?;
                cur.keyword("over")?;
                let steps = self.list(cur, |def, cur| Ok(def.point_expr(cur)?.0))?;
                if kind == "closure" {
                    j_op(&inner, &steps)
                } else {
                    nabla(&inner, &steps)
                }
            }
            other => Err(cur.error(format!("unknown measure kind `{other}`"))),
        }
    }

    fn grid(&self, cur: &mut Cursor<'_>) -> Result<Vec<Point>> {
        cur.keyword("grid")?;
        cur.expect("=")?;
        let lo = cur.integer()?;
        cur.expect("..")?;
        let hi = cur.integer()?;
        if hi < lo {
            return Err(cur.error("empty grid range"));
        }
        cur.keyword("over")?;
        let symbols = self.symbol_list(cur)?;
        Ok(integer_box(&symbols, lo..=hi))
    }

    fn request(&self, cur: &mut Cursor<'_>) -> Result<Request> {
        let kind = cur.ident()?;
        match kind {
            "value" => {
                cur.keyword("at")?;
                Ok(Request::Value {
                    x: self.point_expr(cur)?.0,
                })
            }
            "forward-diff" | "backward-diff" | "closed-diff" => {
                cur.keyword("at")?;
                let (x, _) = self.point_expr(cur)?;
                cur.keyword("with")?;
                let steps = self.increment_list(cur)?;
                let kind = match kind {
                    "forward-diff" => DiffKind::Forward,
                    "backward-diff" => DiffKind::Backward,
                    _ => DiffKind::Closed,
                };
                Ok(Request::Difference { kind, x, steps })
            }
            "equal-diff" => {
                cur.keyword("at")?;
                let (x, _) = self.point_expr(cur)?;
                cur.keyword("step")?;
                let step = self.increment(cur)?;
                cur.keyword("order")?;
                let order = cur.unsigned()? as usize;
                if order == 0 {
                    return Err(cur.error("order must be positive"));
                }
                Ok(Request::EqualDiff { x, step, order })
            }
            "jensen-probe" | "wright-probe" => {
                cur.keyword("n")?;
                cur.expect("=")?;
                let n = cur.unsigned()? as usize;
                let xs = self.grid(cur)?;
                if kind == "jensen-probe" {
                    cur.keyword("steps")?;
                    let steps = self.list(cur, |def, cur| def.increment(cur))?;
                    let samples = xs.into_iter().cartesian_product(steps).collect();
                    Ok(Request::JensenProbe { n, samples })
                } else {
                    cur.keyword("with")?;
                    let steps = self.increment_list(cur)?;
                    let samples = xs.into_iter().map(|x| (x, steps.clone())).collect();
                    Ok(Request::WrightProbe { n, samples })
                }
            }
            "atom-mass" => {
                let name_at = cur.pos;
                let name = cur.ident()?;
                if !self.measures.contains_key(name) {
                    cur.pos = name_at;
                    cur.skip_ws();
                    return Err(cur.error(format!("unknown measure `{name}`")));
                }
                cur.keyword("at")?;
                Ok(Request::AtomMass {
                    measure: name.to_owned(),
                    x: self.point_expr(cur)?.0,
                })
            }
            other => Err(cur.error(format!("unknown evaluation `{other}`"))),
        }
    }

    pub fn request_count(&self) -> usize {
        self.evals.len()
    }

    /// Executes every request in file order.
    pub fn run(&self, name: &str) -> Report {
        let mut report = Report::new("run").with_parameter("file", name);
        for eval in &self.evals {
            let label = format!("line {}", eval.line);
            match self.execute(eval, &mut report) {
                Ok(value) => {
                    let claim = match &eval.expect {
                        Some(expected) => {
                            Claim::new(label, eval.text.clone(), value, expected.clone())
                        }
                        None => Claim::observed(label, eval.text.clone(), value),
                    };
                    report.push(claim);
                }
                Err(err) => report.push(Claim::failed(label, eval.text.clone(), err)),
            }
        }
        report
    }

    fn execute(&self, eval: &EvalLine, report: &mut Report) -> Result<Value> {
        let function = || {
            eval.function.as_ref().ok_or_else(|| Error::Parse {
                line: eval.line,
                column: 1,
                message: "no function declared before this line".into(),
            })
        };
        let value = match &eval.request {
            Request::Value { x } => function()?.eval(x)?,
            Request::Difference { kind, x, steps } => match kind {
                DiffKind::Forward => forward_diff(function()?, x, steps)?,
                DiffKind::Backward => backward_diff(function()?, x, steps)?,
                DiffKind::Closed => forward_diff_closed(function()?, x, steps)?,
            },
            Request::EqualDiff { x, step, order } => {
                equal_increment_diff(function()?, x, step, *order)?
            }
            Request::JensenProbe { n, samples } => {
                let outcome = jensen_convexity_probe(function()?, *n, samples);
                record_probe(report, eval.line, &outcome);
                Rational::from_integer((outcome.violations.len() as i64).into())
            }
            Request::WrightProbe { n, samples } => {
                let outcome = wright_convexity_probe(function()?, *n, samples);
                record_probe(report, eval.line, &outcome);
                Rational::from_integer((outcome.violations.len() as i64).into())
            }
            Request::AtomMass { measure, x } => self.measures[measure].atom_mass(x)?,
        };
        Ok(Value::Number(value))
    }
}

fn record_probe(report: &mut Report, line: usize, outcome: &ProbeOutcome<Rational>) {
    for skipped in &outcome.skipped {
        report.notes.push(format!(
            "line {line}: sample {} skipped: {}",
            skipped.sample, skipped.reason
        ));
    }
    if report.trace.is_none() {
        if let Some(v) = outcome.violations.first() {
            report.trace = Some(Trace {
                columns: vec!["point".into(), "value".into(), "sign".into()],
                rows: v
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
                    "line {line}: first violation at x = {} has value {}",
                    v.x, v.value
                )],
            });
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses and runs a definition file.
pub fn run_definition_file(path: &Path) -> Result<Report> {
    let def = ScenarioDefinition::load(path)?;
    Ok(def.run(&path.display().to_string()))
}
