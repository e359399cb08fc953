//! Real-root isolation with Sturm sequences, and rational snapping of
//! floating-point approximations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{rat, rational_to_f64, Poly};

/// One isolated real root: `lo <= root <= hi`, with `lo == hi` when the
/// root was hit exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub lo: BigRational,
    pub hi: BigRational,
    pub multiplicity: usize,
}

impl IsolatedRoot {
    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / rat(2)
    }

    pub fn approx(&self) -> f64 {
        rational_to_f64(&self.midpoint())
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RootIsolation {
    pub roots: Vec<IsolatedRoot>,
}

impl RootIsolation {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Midpoints repeated by multiplicity, ascending.
    pub fn approx_with_multiplicity(&self) -> Vec<f64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.approx(), r.multiplicity))
            .collect()
    }
}

/// `p, p', -rem(p, p'), ...` for a squarefree `p`.
pub fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone()];
    let mut next = p.derivative();
    while !next.is_zero() {
        let r = seq.last().unwrap().rem(&next).expect("nonzero divisor");
        seq.push(next);
        next = -r;
    }
    seq
}

fn sign_variations(seq: &[Poly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots of a squarefree polynomial in `(a, b]`.
fn count_in(seq: &[Poly], a: &BigRational, b: &BigRational) -> usize {
    sign_variations(seq, a) - sign_variations(seq, b)
}

/// Bound on the absolute value of every real root (Cauchy).
pub fn cauchy_bound(p: &Poly) -> BigRational {
    let lead = p.leading().abs();
    let max = p
        .coeffs()
        .iter()
        .take(p.coeffs().len().saturating_sub(1))
        .map(|c| c.abs())
        .fold(BigRational::zero(), |m, c| if c > m { c } else { m });
    BigRational::one() + max / lead
}

/// Counts the real roots of `p` in the closed interval `[lo, hi]`, with
/// multiplicity.
pub fn count_real_roots(p: &Poly, lo: &BigRational, hi: &BigRational) -> usize {
    p.squarefree_decomposition()
        .iter()
        .map(|(f, m)| {
            let seq = sturm_sequence(f);
            let mut n = count_in(&seq, lo, hi);
            if f.eval(lo).is_zero() {
                n += 1;
            }
            n * m
        })
        .sum()
}

/// Isolates every real root of `pol` in `[lo, hi]` (the whole real line when
/// `interval` is `None`), refining each isolating interval below `precision`.
pub fn isolate_real_roots(
    pol: &Poly,
    interval: Option<(BigRational, BigRational)>,
    precision: &BigRational,
) -> RootIsolation {
    let (lo, hi) = interval.unwrap_or_else(|| {
        let b = cauchy_bound(pol);
        (-b.clone(), b)
    });
    let mut roots = Vec::new();
    for (factor, mult) in pol.squarefree_decomposition() {
        let seq = sturm_sequence(&factor);
        if factor.eval(&lo).is_zero() {
            roots.push(IsolatedRoot {
                lo: lo.clone(),
                hi: lo.clone(),
                multiplicity: mult,
            });
        }
        let mut stack = vec![(lo.clone(), hi.clone())];
        while let Some((a, b)) = stack.pop() {
            let n = count_in(&seq, &a, &b);
            if n == 0 {
                continue;
            }
            if factor.eval(&b).is_zero() && n == 1 {
                roots.push(IsolatedRoot {
                    lo: b.clone(),
                    hi: b,
                    multiplicity: mult,
                });
                continue;
            }
            if n == 1 {
                roots.push(refine(&factor, &seq, a, b, precision, mult));
                continue;
            }
            let m = (&a + &b) / rat(2);
            stack.push((a, m.clone()));
            stack.push((m, b));
        }
    }
    roots.sort_by(|x, y| x.lo.cmp(&y.lo));
    RootIsolation { roots }
}

fn refine(
    f: &Poly,
    seq: &[Poly],
    mut a: BigRational,
    mut b: BigRational,
    precision: &BigRational,
    multiplicity: usize,
) -> IsolatedRoot {
    // exactly one root in (a, b] and f(b) != 0
    while &b - &a > *precision {
        let m = (&a + &b) / rat(2);
        if f.eval(&m).is_zero() {
            return IsolatedRoot {
                lo: m.clone(),
                hi: m,
                multiplicity,
            };
        }
        if count_in(seq, &a, &m) == 1 {
            b = m;
        } else {
            a = m;
        }
    }
    IsolatedRoot {
        lo: a,
        hi: b,
        multiplicity,
    }
}

/// Default refinement width for root midpoints.
pub fn default_precision() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u64).pow(12))
}

/// Default acceptance tolerance of [`snap_to_rational`].
pub const SNAP_TOLERANCE: f64 = 1e-9;

/// Best rational approximation of `x` with denominator at most
/// `max_denominator`, accepted only if within `tol` of `x`.
pub fn snap_to_rational(x: f64, max_denominator: u64, tol: f64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::NotRationalizable(format!("{x} is not finite")));
    }
    if max_denominator == 0 {
        return Err(Error::NotRationalizable(
            "max denominator must be >= 1".into(),
        ));
    }
    let exact = BigRational::from_float(x).expect("finite float");
    let best = limit_denominator(&exact, &BigInt::from(max_denominator));
    let err = rational_to_f64(&(&best - &exact)).abs();
    if err > tol {
        return Err(Error::NotRationalizable(format!(
            "{x}: nearest candidate {best} with denominator <= {max_denominator} is off by {err:e}"
        )));
    }
    Ok(best)
}

/// Closest fraction to `x` with denominator `<= max_den`, from the continued
/// fraction convergents and the last admissible semiconvergent.
pub fn limit_denominator(x: &BigRational, max_den: &BigInt) -> BigRational {
    if x.denom() <= max_den {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) =
        (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    loop {
        let a = num_integer::Integer::div_floor(&n, &d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
        if d.is_zero() {
            break;
        }
    }
    let k = (max_den - &q0) / &q1;
    let bound1 = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let bound2 = BigRational::new(p1, q1);
    if (&bound2 - x).abs() <= (&bound1 - x).abs() {
        bound2
    } else {
        bound1
    }
}
