//! Dense univariate polynomials over a generic numeric ring.
//!
//! Coefficients are stored in ascending order (`coeffs[i]` multiplies `x^i`)
//! and the vector is kept trimmed, so the zero polynomial is the empty vector
//! and structural equality is polynomial equality.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{FromPrimitive, Num, Signed};

use crate::Error;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Clone + Num> Poly<T> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn monomial(c: T, degree: usize) -> Self {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    /// `x + c`
    pub fn linear(c: T) -> Self {
        Self::from_coeffs(vec![c, T::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^k`; zero past the degree.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Re-expands `p(x + d)` as a polynomial in `x`.
    pub fn shift(&self, d: &T) -> Self {
        let step = Self::linear(d.clone());
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * &step) + &Self::constant(c.clone()))
    }

    /// Product with `x + c`.
    pub fn mul_linear(&self, c: &T) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[i + 1] = out[i + 1].clone() + a.clone();
            out[i] = out[i].clone() + a.clone() * c.clone();
        }
        Self::from_coeffs(out)
    }
}

impl<T: Clone + Num + FromPrimitive> Poly<T> {
    /// Unique polynomial of degree `< points.len()` through the given points,
    /// built in Newton form from divided differences.
    pub fn interpolate(points: &[(T, T)]) -> Result<Self, Error> {
        for (i, (xi, _)) in points.iter().enumerate() {
            if points[..i].iter().any(|(xj, _)| xj == xi) {
                return Err(Error::DuplicateAbscissa);
            }
        }
        let xs: Vec<T> = points.iter().map(|(x, _)| x.clone()).collect();
        let mut table: Vec<T> = points.iter().map(|(_, y)| y.clone()).collect();
        let m = table.len();
        for level in 1..m {
            for i in (level..m).rev() {
                let num = table[i].clone() - table[i - 1].clone();
                let den = xs[i].clone() - xs[i - level].clone();
                table[i] = num / den;
            }
        }
        let mut out = Self::zero();
        for i in (0..m).rev() {
            out = &out.mul_linear(&(T::zero() - xs[i].clone())) + &Self::constant(table[i].clone());
        }
        Ok(out)
    }
}

impl<T: Clone + Num> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = long.coeffs.clone();
        for (o, s) in out.iter_mut().zip(&short.coeffs) {
            *o = o.clone() + s.clone();
        }
        Poly::from_coeffs(out)
    }
}

impl<T: Clone + Num> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let out = (0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        Poly::from_coeffs(out)
    }
}

impl<T: Clone + Num> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(out)
    }
}

impl<T: Clone + Num> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly::from_coeffs(self.coeffs.iter().map(|c| T::zero() - c.clone()).collect())
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl<T: Clone + Num> $trait for Poly<T> {
            type Output = Poly<T>;

            fn $method(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<T: Clone + Num> Neg for Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        -&self
    }
}

impl<T: Clone + Num> Sum for Poly<T> {
    fn sum<I: Iterator<Item = Poly<T>>>(iter: I) -> Self {
        iter.fold(Poly::zero(), |acc, p| &acc + &p)
    }
}

impl<'a, T: Clone + Num> Sum<&'a Poly<T>> for Poly<T> {
    fn sum<I: Iterator<Item = &'a Poly<T>>>(iter: I) -> Self {
        iter.fold(Poly::zero(), |acc, p| &acc + p)
    }
}

/// Human-readable rendering in descending powers, e.g. `1/2*n^2 - 1/2*n - 1`.
pub struct Pretty<'a, T> {
    poly: &'a Poly<T>,
    var: &'a str,
}

impl<T: Clone + Num + Signed + fmt::Display> Poly<T> {
    pub fn pretty<'a>(&'a self, var: &'a str) -> Pretty<'a, T> {
        Pretty { poly: self, var }
    }
}

impl<T: Clone + Num + Signed + fmt::Display> fmt::Display for Pretty<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let unit = mag.is_one();
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "{}", self.var)?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
