use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Every multiset `{d_1 <= ... <= d_count}` of positive integers bounded by
/// `d_max` with `sum 1/d_i = r`, in lexicographic order.
pub fn egyptian_multisets(r: &BigRational, count: usize, d_max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(count);
    search(r, count, 1, d_max, &mut current, &mut out);
    out
}

fn search(
    r: &BigRational,
    count: usize,
    min_d: usize,
    d_max: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if count == 0 {
        if r.is_zero() {
            out.push(current.clone());
        }
        return;
    }
    if !r.is_positive() {
        return;
    }
    // smallest d with 1/d <= r, largest with count/d >= r
    let lo = r
        .recip()
        .ceil()
        .to_integer()
        .to_usize()
        .unwrap_or(usize::MAX)
        .max(min_d);
    let hi = (BigRational::from_integer(BigInt::from(count)) / r)
        .floor()
        .to_integer()
        .to_usize()
        .unwrap_or(usize::MAX)
        .min(d_max);
    for d in lo..=hi {
        let rest = r - BigRational::new(BigInt::one(), BigInt::from(d));
        current.push(d);
        search(&rest, count - 1, d, d_max, current, out);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    #[test]
    fn worked_example_root() {
        assert_eq!(egyptian_multisets(&ratio(7, 3), 3, 12), vec![vec![1, 1, 3]]);
    }

    #[test]
    fn two_solutions_for_seven_twelfths() {
        assert_eq!(
            egyptian_multisets(&ratio(7, 12), 2, 12),
            vec![vec![2, 12], vec![3, 4]]
        );
        assert_eq!(egyptian_multisets(&ratio(7, 12), 2, 11), vec![vec![3, 4]]);
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(egyptian_multisets(&ratio(1, 1), 1, 12), vec![vec![1]]);
        assert_eq!(
            egyptian_multisets(&ratio(0, 1), 0, 12),
            vec![Vec::<usize>::new()]
        );
        assert!(egyptian_multisets(&ratio(1, 1), 0, 12).is_empty());
        assert!(egyptian_multisets(&ratio(5, 1), 3, 12).is_empty());
        assert!(egyptian_multisets(&ratio(-1, 2), 2, 12).is_empty());
    }
}
