//! q-analogs, Knuth's pentagonal-number formula for the coefficients of
//! `[n]_q!`, and closed-form power sums over exact rationals.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Zero};

use crate::{DimensionPolynomial, Error, Poly, QPolynomial};

/// `[k]_q = 1 + q + ... + q^{k-1}`; the zero polynomial for `k = 0`.
pub fn q_integer(k: usize) -> QPolynomial {
    Poly::from_coeffs(vec![BigInt::one(); k])
}

/// `[k]_q! = [1]_q [2]_q ... [k]_q`.
pub fn q_factorial(k: usize) -> QPolynomial {
    q_product(1..=k)
}

/// `∏ [w]_q` over the given factors, using a running window sum per factor.
pub fn q_product<I: IntoIterator<Item = usize>>(factors: I) -> QPolynomial {
    let mut acc = vec![BigInt::one()];
    for w in factors {
        if w == 0 {
            return Poly::zero();
        }
        acc = mul_q_integer(&acc, w);
    }
    Poly::from_coeffs(acc)
}

fn mul_q_integer(p: &[BigInt], w: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(p.len() + w - 1);
    let mut window = BigInt::zero();
    for j in 0..p.len() + w - 1 {
        if j < p.len() {
            window += &p[j];
        }
        if j >= w {
            window -= &p[j - w];
        }
        out.push(window.clone());
    }
    out
}

/// `[q^k] p`, zero past the degree.
pub fn q_coeff(p: &QPolynomial, k: usize) -> BigInt {
    p.coeff(k)
}

fn from_i64<T: FromPrimitive>(v: i64) -> T {
    T::from_i64(v).expect("scalar type must represent small integers")
}

/// `(x)_i = x (x-1) ... (x-i+1)`.
pub fn falling_factorial<T: Clone + Num + FromPrimitive>(i: usize) -> Poly<T> {
    (0..i).fold(Poly::one(), |acc, j| acc.mul_linear(&from_i64(-(j as i64))))
}

/// `C(x + offset, r)` as a degree-`r` polynomial in `x`, via the falling
/// factorial, so it keeps its polynomial value when `x + offset < r`.
/// Zero for negative `r`.
pub fn binomial_poly<T: Clone + Num + FromPrimitive>(offset: i64, r: i64) -> Poly<T> {
    if r < 0 {
        return Poly::zero();
    }
    let mut p = Poly::one();
    let mut fact = T::one();
    for j in 0..r {
        p = p.mul_linear(&from_i64(offset - j));
        fact = fact * from_i64(j + 1);
    }
    let inv = T::one() / fact;
    p.scale(&inv)
}

/// The `j`-th pentagonal number `j(3j-1)/2`.
pub fn pentagonal(j: i64) -> i64 {
    j * (3 * j - 1) / 2
}

/// Knuth's formula `F(m, k)` for `[q^k] [m]_q!` as a polynomial in `n`
/// with `m = n - shift`:
///
/// `C(m+k-1, k) + Σ_j (-1)^j [ C(m+k-u_j-1, k-u_j) + C(m+k-u_j-j-1, k-u_j-j) ]`
///
/// with `u_j` pentagonal and binomials with negative lower index dropped.
pub fn knuth_formula<T: Clone + Num + FromPrimitive>(k: usize, shift: usize) -> Poly<T> {
    let k = k as i64;
    let s = shift as i64;
    let mut out = binomial_poly(k - 1 - s, k);
    for j in 1.. {
        let u = pentagonal(j);
        if u > k {
            break;
        }
        let sign: T = if j % 2 == 0 { T::one() } else { T::zero() - T::one() };
        let first = binomial_poly::<T>(k - u - 1 - s, k - u);
        let second = binomial_poly::<T>(k - u - j - 1 - s, k - u - j);
        out = &out + &(&first + &second).scale(&sign);
    }
    out
}

/// [`knuth_formula`] over exact rationals.
pub fn knuth_poly(k: usize, shift: usize) -> DimensionPolynomial {
    knuth_formula(k, shift)
}

/// Number of pentagonal correction terms with nonnegative lower index in
/// each of the two sums of Knuth's formula for `[q^k]`.
pub fn pentagonal_term_counts(k: usize) -> (usize, usize) {
    let k = k as i64;
    let first = (1..).take_while(|&j| pentagonal(j) <= k).count();
    let second = (1..).take_while(|&j| pentagonal(j) + j <= k).count();
    (first, second)
}

/// `F(m, m+1) - [q^{m+1}] [m]_q!`: the error of Knuth's formula one step
/// past its range of validity.
pub fn knuth_boundary_defect(m: usize) -> BigInt {
    let value = knuth_poly(m + 1, 0).eval(&BigRational::from_integer(BigInt::from(m)));
    debug_assert!(value.is_integer());
    value.to_integer() - q_coeff(&q_factorial(m), m + 1)
}

/// Stirling number of the second kind `S(n, k)`.
pub fn stirling2(n: usize, k: usize) -> BigUint {
    // row-by-row recurrence S(n,k) = k S(n-1,k) + S(n-1,k-1)
    let mut row = vec![BigUint::one()];
    for i in 1..=n {
        let mut next = vec![BigUint::zero(); i + 1];
        for j in 1..=i {
            let keep = if j < row.len() { &row[j] * j } else { BigUint::zero() };
            next[j] = keep + &row[j - 1];
        }
        row = next;
    }
    row.get(k).cloned().unwrap_or_default()
}

/// `Σ_{i=1}^{x} i^p = Σ_{i=1}^{p+1} (1/i) S(p+1, i) (x)_i`.
pub fn power_sum<T: Clone + Num + FromPrimitive>(p: usize) -> Poly<T> {
    (1..=p + 1)
        .map(|i| {
            let s = stirling2(p + 1, i);
            let s: T = from_i64(i64::try_from(s).expect("Stirling number fits in i64"));
            let c = s / from_i64(i as i64);
            falling_factorial::<T>(i).scale(&c)
        })
        .sum()
}

/// [`power_sum`] over exact rationals.
pub fn power_sum_poly(p: usize) -> DimensionPolynomial {
    power_sum(p)
}

/// The polynomial `n ↦ Σ_{i=m}^{n} poly(i)`.
///
/// Built as `S(n) - S(m-1)` where `S` is the power-sum extension, so it
/// vanishes at `n = m - 1` and continues polynomially below it.
pub fn poly_sum_range<T: Clone + Num + FromPrimitive>(poly: &Poly<T>, m: i64) -> Poly<T> {
    let below: T = from_i64(m - 1);
    poly.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| {
            let s = power_sum::<T>(j);
            let tail = s.eval(&below);
            (&s - &Poly::constant(tail)).scale(c)
        })
        .sum()
}

/// Exact interpolation through `(n, value)` samples.
pub fn interpolate(points: &[(i64, BigRational)]) -> Result<DimensionPolynomial, Error> {
    let pts: Vec<_> = points
        .iter()
        .map(|(x, y)| (BigRational::from_integer(BigInt::from(*x)), y.clone()))
        .collect();
    Poly::interpolate(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn rpoly(c: &[(i64, i64)]) -> DimensionPolynomial {
        Poly::from_coeffs(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    fn at(p: &DimensionPolynomial, n: i64) -> BigRational {
        p.eval(&BigRational::from_integer(n.into()))
    }

    #[test]
    fn q_integers() {
        assert_eq!(q_integer(1).coeffs(), &ints(&[1])[..]);
        assert_eq!(q_integer(3).coeffs(), &ints(&[1, 1, 1])[..]);
        assert!(q_integer(0).is_zero());
    }

    #[test]
    fn q_factorials() {
        assert_eq!(q_factorial(0).coeffs(), &ints(&[1])[..]);
        assert_eq!(q_factorial(3).coeffs(), &ints(&[1, 2, 2, 1])[..]);
        assert_eq!(q_factorial(4).coeffs(), &ints(&[1, 3, 5, 6, 5, 3, 1])[..]);
    }

    #[test]
    fn q_factorial_agrees_with_repeated_multiplication() {
        for k in 0..8 {
            let slow = (1..=k).fold(QPolynomial::one(), |acc, j| &acc * &q_integer(j));
            assert_eq!(q_factorial(k), slow);
        }
    }

    #[test]
    fn q_coefficients() {
        assert_eq!(q_coeff(&q_factorial(4), 2), BigInt::from(5));
        assert_eq!(q_coeff(&q_integer(3), 5), BigInt::from(0));
        assert_eq!(q_coeff(&q_factorial(0), 0), BigInt::from(1));
    }

    #[test]
    fn q_factorial_symmetry_and_mass() {
        let mut fact = BigInt::one();
        for k in 0..=10usize {
            if k > 0 {
                fact *= k;
            }
            let p = q_factorial(k);
            let c = p.coeffs();
            assert_eq!(p.degree(), Some(k * k.saturating_sub(1) / 2));
            assert!(c.iter().all(|x| *x > BigInt::zero()));
            assert!(c.iter().eq(c.iter().rev()));
            assert_eq!(c.iter().sum::<BigInt>(), fact);
        }
    }

    #[test]
    fn knuth_examples() {
        assert_eq!(knuth_poly(1, 0), rpoly(&[(-1, 1), (1, 1)]));
        assert_eq!(knuth_poly(2, 0), rpoly(&[(-1, 1), (-1, 2), (1, 2)]));
        assert_eq!(knuth_poly(0, 5), rpoly(&[(1, 1)]));
        assert_eq!(knuth_poly(3, 0), rpoly(&[(0, 1), (-7, 6), (0, 1), (1, 6)]));
    }

    #[test]
    fn knuth_shift_is_a_substitution() {
        for k in 0..6 {
            for s in 0..4 {
                assert_eq!(knuth_poly(k, s), knuth_poly(k, 0).shift(&BigRational::from_integer(BigInt::from(-(s as i64)))));
            }
        }
    }

    #[test]
    fn knuth_matches_product_expansion() {
        for m in 0..=20usize {
            let fact = q_factorial(m);
            for k in 0..=m {
                let want = BigRational::from_integer(q_coeff(&fact, k));
                assert_eq!(at(&knuth_poly(k, 0), m as i64), want, "k={k} m={m}");
            }
        }
    }

    #[test]
    fn knuth_degree_is_k() {
        for k in 0..12 {
            assert_eq!(knuth_poly(k, 0).degree(), Some(k));
        }
    }

    #[test]
    fn boundary_defect_hand_value() {
        // F(2,3) = C(4,3) - C(3,2) - C(2,1) = -1 and [q^3][2]_q! = 0
        let f23 = at(&knuth_poly(3, 0), 2);
        assert_eq!(f23, rat(-1, 1));
        assert_eq!(knuth_boundary_defect(2), BigInt::from(-1));
    }

    #[test]
    fn boundary_defect_is_minus_one() {
        for m in 1..=15 {
            assert_eq!(knuth_boundary_defect(m), BigInt::from(-1), "m={m}");
        }
    }

    fn isqrt(x: i64) -> i64 {
        let mut r = (x as f64).sqrt() as i64;
        while r * r > x {
            r -= 1;
        }
        while (r + 1) * (r + 1) <= x {
            r += 1;
        }
        r
    }

    #[test]
    fn pentagonal_term_counts_closed_form() {
        // u_j <= k  <=>  6j - 1 <= sqrt(1 + 24k);  u_j + j <= k  <=>  6j + 1 <= sqrt(1 + 24k)
        for k in 0..200usize {
            let r = isqrt(1 + 24 * k as i64);
            let first = ((1 + r) / 6) as usize;
            let second = ((r - 1).max(0) / 6) as usize;
            assert_eq!(pentagonal_term_counts(k), (first, second), "k={k}");
        }
        assert_eq!(pentagonal_term_counts(1), (1, 0));
        assert_eq!(pentagonal_term_counts(2), (1, 1));
        assert_eq!(pentagonal_term_counts(5), (2, 1));
        assert_eq!(pentagonal_term_counts(7), (2, 2));
    }

    #[test]
    fn stirling_second_kind() {
        let row: Vec<u32> = (0..=4).map(|k| u32::try_from(stirling2(4, k)).unwrap()).collect();
        assert_eq!(row, vec![0, 1, 7, 6, 1]);
        assert_eq!(stirling2(0, 0), BigUint::one());
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(power_sum_poly(0), rpoly(&[(0, 1), (1, 1)]));
        assert_eq!(power_sum_poly(1), rpoly(&[(0, 1), (1, 2), (1, 2)]));
        assert_eq!(at(&power_sum_poly(2), 3), rat(14, 1));
    }

    #[test]
    fn power_sums_match_direct_summation() {
        for p in 0..=10u32 {
            let poly = power_sum_poly(p as usize);
            assert_eq!(poly.degree(), Some(p as usize + 1));
            let mut acc = BigInt::zero();
            for n in 1..=50i64 {
                acc += BigInt::from(n).pow(p);
                assert_eq!(at(&poly, n), BigRational::from_integer(acc.clone()), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn sum_range_examples() {
        // Σ_{i=6}^{N} (i - 2) = N^2/2 - 3N/2 - 5
        let p = rpoly(&[(-2, 1), (1, 1)]);
        assert_eq!(poly_sum_range(&p, 6), rpoly(&[(-5, 1), (-3, 2), (1, 2)]));
        assert_eq!(poly_sum_range(&rpoly(&[(1, 1)]), 1), rpoly(&[(0, 1), (1, 1)]));
        assert_eq!(at(&poly_sum_range(&rpoly(&[(0, 1), (1, 1)]), 3), 5), rat(12, 1));
    }

    #[test]
    fn interpolate_rejects_duplicates() {
        let pts = vec![(1, rat(0, 1)), (1, rat(1, 1))];
        assert_eq!(interpolate(&pts), Err(Error::DuplicateAbscissa));
        let pts = vec![(1, rat(0, 1)), (2, rat(0, 1)), (3, rat(2, 1))];
        assert_eq!(interpolate(&pts).unwrap(), rpoly(&[(2, 1), (-3, 1), (1, 1)]));
    }

    proptest! {
        #[test]
        fn sum_range_matches_direct(
            coeffs in prop::collection::vec((-9i64..10, 1i64..5), 0..7),
            m in 0i64..=5,
            n in 5i64..=30,
        ) {
            let p = rpoly(&coeffs);
            let s = poly_sum_range(&p, m);
            let direct: BigRational = (m..=n).map(|i| at(&p, i)).fold(BigRational::zero(), |a, b| a + b);
            prop_assert_eq!(at(&s, n), direct);
            prop_assert_eq!(at(&s, m - 1), BigRational::zero());
        }

        #[test]
        fn interpolation_recovers_random_polynomials(
            coeffs in prop::collection::vec((-20i64..20, 1i64..7), 1..8),
            start in -5i64..5,
        ) {
            let p = rpoly(&coeffs);
            let pts: Vec<_> = (0..coeffs.len() as i64).map(|i| (start + i, at(&p, start + i))).collect();
            prop_assert_eq!(interpolate(&pts).unwrap(), p);
        }
    }
}
