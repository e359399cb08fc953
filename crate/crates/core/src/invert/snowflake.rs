//! Closed-form inversion for snowflakes rooted at the center.
//!
//! An arm of degree `d` contributes `z / (d z^2 - (d - 1))` to `G = R + d0 z`
//! (a bare leaf, `d = 1`, contributes `1 / z`). Equal arms merge into one
//! term, so the reduced denominator of `G` only shows which arm degrees occur;
//! their counts are read from the residues.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{root_child_sum, root_degree_from_ratio, CandidateShape};
use crate::error::{Error, Result};
use crate::poly::{rat, Poly};
use crate::ratfunc::RationalFunction;
use crate::tree::make_snowflake;

#[derive(Debug, Clone)]
pub struct SnowflakeInversion {
    /// Arm degrees, ascending.
    pub arms: Vec<usize>,
    /// `(d, d z^2 - (d - 1), number of arms of degree d)`; a bare leaf
    /// (`d = 1`) contributes the factor `z`.
    pub factors: Vec<(usize, Poly, usize)>,
    /// Denominator of `G` before equal arms are merged: the product of the
    /// factors with multiplicity.
    pub full_denominator: Poly,
    pub candidate: CandidateShape,
}

fn arm_quadratic(d: usize) -> Poly {
    Poly::from_ints(&[-(d as i64 - 1), 0, d as i64])
}

fn not_snowflake(msg: impl Into<String>) -> Error {
    Error::NotSnowflake(msg.into())
}

pub fn invert_snowflake(r: &RationalFunction, d0: usize) -> Result<SnowflakeInversion> {
    let found = root_degree_from_ratio(r)?;
    if found != d0 {
        return Err(Error::Inconsistent(format!(
            "ratio implies root degree {found}, but d0 = {d0}"
        )));
    }
    let g = root_child_sum(r, d0);
    if g.is_zero() {
        return Err(not_snowflake("R + d0 z vanishes"));
    }

    // trial division of the reduced denominator
    let mut rest = g.den().clone();
    let mut degrees = Vec::new();
    if let Ok((q, rem)) = rest.divrem(&Poly::z()) {
        if rem.is_zero() {
            rest = q;
            degrees.push(1);
        }
    }
    let mut d = 2usize;
    loop {
        let bound = rest.canonical().leading();
        if rat(d as i64) > bound {
            break;
        }
        let quad = arm_quadratic(d);
        let (q, rem) = rest.divrem(&quad)?;
        if rem.is_zero() {
            rest = q;
            degrees.push(d);
        }
        d += 1;
    }
    if rest.degree() != Some(0) {
        return Err(not_snowflake(format!(
            "denominator factor {} is not of the form d z^2 - (d - 1)",
            rest.canonical()
        )));
    }

    // G / z = A(u) / B(u) with u = z^2
    let over_z = (&g / &RationalFunction::from_poly(Poly::z()))?;
    let (a, b) = match (
        over_z.num().even_to_square_variable(),
        over_z.den().even_to_square_variable(),
    ) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(not_snowflake("R is not odd")),
    };
    let db = b.derivative();
    let mut factors = Vec::new();
    let mut arms = Vec::new();
    let mut total = 0usize;
    for &d in &degrees {
        let u = BigRational::new(BigInt::from(d - 1), BigInt::from(d));
        let slope = db.eval(&u);
        if slope.is_zero() {
            return Err(not_snowflake("repeated pole in R + d0 z"));
        }
        let mu = rat(d as i64) * a.eval(&u) / slope;
        if !mu.is_integer() || !mu.is_positive() {
            return Err(not_snowflake(format!(
                "arm count {mu} for degree {d} is not a positive integer"
            )));
        }
        let mu = mu
            .to_integer()
            .to_usize()
            .ok_or_else(|| not_snowflake("arm count too large"))?;
        total += mu;
        if total > d0 {
            break;
        }
        let quad = if d == 1 { Poly::z() } else { arm_quadratic(d) };
        factors.push((d, quad, mu));
        arms.extend(std::iter::repeat_n(d, mu));
    }
    if total != d0 {
        return Err(not_snowflake(format!(
            "arm counts sum to {total}, expected {d0}"
        )));
    }

    let tree = make_snowflake(&arms)?;
    let candidate = CandidateShape::from_tree(tree, r)?;
    if !candidate.verified {
        return Err(not_snowflake(
            "reconstructed snowflake has a different ratio",
        ));
    }
    let full_denominator = factors
        .iter()
        .fold(Poly::one(), |acc, (_, q, mu)| &acc * &q.pow(*mu));
    Ok(SnowflakeInversion {
        arms,
        factors,
        full_denominator,
        candidate,
    })
}
