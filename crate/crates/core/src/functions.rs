//! Exactly evaluatable functions of points.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hamel::{AdditiveFunctional, Point};
use crate::measures::MeasureExpr;
use crate::scalar::Scalar;

/// Scalar maps `t ↦ φ(t)` applied after an additive functional or another
/// point function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarKernel {
    /// `t ↦ max(t, 0)^n`
    PositivePartPower(u32),
    AbsoluteValue,
    /// `t ↦ t^n`, with `0^0 = 1`
    Power(u32),
    Identity,
}

impl ScalarKernel {
    pub fn apply<S: Scalar>(&self, t: &S) -> S {
        match *self {
            ScalarKernel::PositivePartPower(n) => t.positive_part().powi(n),
            ScalarKernel::AbsoluteValue => t.abs(),
            ScalarKernel::Power(n) => t.powi(n),
            ScalarKernel::Identity => t.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum PointFunction<S: Scalar> {
    /// `x ↦ kernel(a(x))`
    Composite {
        kernel: ScalarKernel,
        additive: AdditiveFunctional<S>,
    },
    /// `x ↦ kernel(inner(x))`
    Apply {
        kernel: ScalarKernel,
        inner: Box<PointFunction<S>>,
    },
    /// Defined only at the listed points.
    Tabulated(BTreeMap<Point<S>, S>),
    /// `x ↦ μ({x})`
    MeasureMass(MeasureExpr<S>),
    Scaled(S, Box<PointFunction<S>>),
    SumOf(Vec<PointFunction<S>>),
    /// `x ↦ inner(x)^n`
    PointwisePower(Box<PointFunction<S>>, u32),
}

impl<S: Scalar> PointFunction<S> {
    pub fn composite(kernel: ScalarKernel, additive: AdditiveFunctional<S>) -> Self {
        PointFunction::Composite { kernel, additive }
    }

    /// `x ↦ a(x)₊ⁿ`
    pub fn positive_part_power(additive: AdditiveFunctional<S>, n: u32) -> Self {
        Self::composite(ScalarKernel::PositivePartPower(n), additive)
    }

    pub fn apply(kernel: ScalarKernel, inner: PointFunction<S>) -> Self {
        PointFunction::Apply {
            kernel,
            inner: Box::new(inner),
        }
    }

    pub fn tabulated(table: impl IntoIterator<Item = (Point<S>, S)>) -> Self {
        PointFunction::Tabulated(table.into_iter().collect())
    }

    pub fn measure_mass(measure: MeasureExpr<S>) -> Self {
        PointFunction::MeasureMass(measure)
    }

    pub fn scaled(factor: S, inner: PointFunction<S>) -> Self {
        PointFunction::Scaled(factor, Box::new(inner))
    }

    pub fn sum(terms: Vec<PointFunction<S>>) -> Self {
        PointFunction::SumOf(terms)
    }

    pub fn pointwise_power(inner: PointFunction<S>, n: u32) -> Self {
        PointFunction::PointwisePower(Box::new(inner), n)
    }

    /// The constant function `x ↦ c`.
    pub fn constant(c: S) -> Self {
        Self::scaled(
            c,
            Self::composite(ScalarKernel::Power(0), AdditiveFunctional::default()),
        )
    }

    pub fn eval(&self, x: &Point<S>) -> Result<S> {
        match self {
            PointFunction::Composite { kernel, additive } => Ok(kernel.apply(&additive.eval(x))),
            PointFunction::Apply { kernel, inner } => Ok(kernel.apply(&inner.eval(x)?)),
            PointFunction::Tabulated(table) => {
                table
                    .get(x)
                    .cloned()
                    .ok_or_else(|| Error::UntabulatedPoint {
                        point: x.to_string(),
                    })
            }
            PointFunction::MeasureMass(measure) => measure.atom_mass(x),
            PointFunction::Scaled(factor, inner) => {
                if factor.is_zero() {
                    // still surface an untabulated query
                    inner.eval(x)?;
                    return Ok(S::zero());
                }
                Ok(factor.clone() * inner.eval(x)?)
            }
            PointFunction::SumOf(terms) => terms
                .iter()
                .try_fold(S::zero(), |acc, term| Ok(acc + term.eval(x)?)),
            PointFunction::PointwisePower(inner, n) => Ok(inner.eval(x)?.powi(*n)),
        }
    }
}

/// `x ↦ c·f(x)`
pub fn scale_function<S: Scalar>(c: S, f: PointFunction<S>) -> PointFunction<S> {
    PointFunction::scaled(c, f)
}

pub fn function_eval<S: Scalar>(f: &PointFunction<S>, x: &Point<S>) -> Result<S> {
    f.eval(x)
}
