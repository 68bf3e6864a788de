//! Verification suites shared by the CLI and the integration tests.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use crate::oracle::{hilbert_parking, interpolate_dimension_poly, Limits, VerificationReport};
use crate::schedules::{hilbert_schedules, HilbertCache};
use crate::stability::{dimension_polynomial, sharpness_report};
use crate::{DimensionPolynomial, Error, Poly};

/// Published stable polynomials for `0 ≤ a, b ≤ 3`, ascending `(num, den)`
/// coefficients indexed `[b][a]`.
const TABLE1: [[&[(i64, i64)]; 4]; 4] = [
    [
        &[(1, 1)],
        &[(-1, 1), (1, 1)],
        &[(-1, 1), (-1, 2), (1, 2)],
        &[(0, 1), (-7, 6), (0, 1), (1, 6)],
    ],
    [
        &[(-1, 1), (1, 1)],
        &[(0, 1), (-2, 1), (1, 1)],
        &[(1, 1), (-3, 2), (-1, 1), (1, 2)],
        &[(1, 1), (2, 3), (-5, 3), (-1, 6), (1, 6)],
    ],
    [
        &[(-1, 1), (-1, 2), (1, 2)],
        &[(1, 1), (-3, 2), (-1, 1), (1, 2)],
        &[(1, 1), (1, 1), (-7, 4), (-1, 2), (1, 4)],
        &[(1, 1), (13, 6), (1, 12), (-5, 4), (-1, 12), (1, 12)],
    ],
    [
        &[(0, 1), (-7, 6), (0, 1), (1, 6)],
        &[(1, 1), (2, 3), (-5, 3), (-1, 6), (1, 6)],
        &[(1, 1), (13, 6), (1, 12), (-5, 4), (-1, 12), (1, 12)],
        &[(-1, 1), (3, 1), (19, 9), (-1, 2), (-23, 36), (0, 1), (1, 36)],
    ],
];

/// The published polynomial for `dim DR_n^{a,b}`, `a, b ≤ 3`.
pub fn table1_golden(a: usize, b: usize) -> Option<DimensionPolynomial> {
    let row = TABLE1.get(b)?.get(a)?;
    Some(Poly::from_coeffs(row.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect()))
}

fn show(p: &DimensionPolynomial) -> String {
    p.pretty("n").to_string()
}

/// `dimension_polynomial(a, b)` against all sixteen published entries.
pub fn table1() -> VerificationReport {
    let mut r = VerificationReport::new("table1");
    for b in 0..=3 {
        for a in 0..=3 {
            let want = table1_golden(a, b).expect("entry in range");
            r.check(format!("P({a},{b})"), show(&want), show(&dimension_polynomial(a, b)));
        }
    }
    r
}

/// Schedules formula against parking functions, and both masses against
/// `(n+1)^{n-1}`, for `n = 1..=max_n`.
pub fn oracle(max_n: usize, limits: &Limits) -> Result<VerificationReport, Error> {
    let bound = limits.parking_max_n.min(limits.schedules_max_n);
    if max_n > bound {
        return Err(Error::BoundExceeded { what: "oracle n", requested: max_n, bound });
    }
    let mut r = VerificationReport::new("oracle");
    for n in 1..=max_n {
        let sched = hilbert_schedules(n);
        let park = hilbert_parking(n);
        let mass = BigUint::from(n + 1).pow(n as u32 - 1);
        r.record(format!("series n={n}"), format!("{} terms", park.len()), format!("{} terms", sched.len()), sched == park);
        r.check(format!("schedules mass n={n}"), &mass, sched.total());
        r.check(format!("parking mass n={n}"), &mass, park.total());
    }
    Ok(r)
}

/// `P_{a,b}(n) = dim DR_n^{a,b}` for `a, b ≤ max_ab` and `a+b ≤ n ≤ max_n`.
pub fn stability(max_ab: usize, max_n: usize, limits: &Limits, cache: &HilbertCache) -> Result<VerificationReport, Error> {
    if max_n > limits.schedules_max_n {
        return Err(Error::BoundExceeded { what: "schedules n", requested: max_n, bound: limits.schedules_max_n });
    }
    let mut r = VerificationReport::new("stability");
    for a in 0..=max_ab {
        for b in 0..=max_ab {
            let p = dimension_polynomial(a, b);
            for n in (a + b).max(1)..=max_n {
                let value = p.eval(&BigRational::from_integer(BigInt::from(n)));
                r.check(format!("P({a},{b}) at n={n}"), cache.dim(n, a, b), value);
            }
        }
    }
    Ok(r)
}

/// `P_{a,b}(a+b-1) < dim DR_{a+b-1}^{a,b}` for each pair.
pub fn sharpness(pairs: &[(usize, usize)], limits: &Limits) -> Result<VerificationReport, Error> {
    let mut r = VerificationReport::new("sharpness");
    for &(a, b) in pairs {
        let n = (a + b).saturating_sub(1);
        if n > limits.schedules_max_n {
            return Err(Error::BoundExceeded { what: "schedules n", requested: n, bound: limits.schedules_max_n });
        }
        let rep = sharpness_report(a, b)?;
        r.record(
            format!("P({a},{b}) at n={}", rep.n),
            format!("< {}", rep.true_dim),
            &rep.poly_value_at_boundary,
            rep.strict,
        );
    }
    Ok(r)
}

/// Recursion against interpolation of exact dimensions, `a + b ≤ max_sum`.
pub fn interpolation(max_sum: usize, limits: &Limits, cache: &HilbertCache) -> Result<VerificationReport, Error> {
    let mut r = VerificationReport::new("interpolation");
    for s in 0..=max_sum {
        for a in 0..=s {
            let b = s - a;
            let fit = interpolate_dimension_poly(a, b, limits, cache)?;
            r.check(format!("P({a},{b})"), show(&fit), show(&dimension_polynomial(a, b)));
        }
    }
    Ok(r)
}
