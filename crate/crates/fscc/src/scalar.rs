//! Scalar rings: exact rationals, binary floats and truncated power series.
//!
//! Every geometric routine in the crate is generic over [`Scalar`]. Division
//! and square roots are partial and report failures through [`ScalarError`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational numbers.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative value")]
    NegativeSqrt,
    #[error("value has no square root in this ring")]
    NotASquare,
    #[error("coefficient of order {0} is beyond the truncation order {1}")]
    BeyondTruncation(usize, usize),
    #[error("value is not comparable")]
    Incomparable,
}

/// The ring contract.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    /// `n/d`; panics on `d == 0`.
    fn from_ratio(n: i64, d: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Result<Self, ScalarError>;
    fn sqrt(&self) -> Result<Self, ScalarError>;
    /// Comparison where it is decided; `None` otherwise.
    fn compare(&self, other: &Self) -> Option<Ordering>;
    /// Sign of the order-zero part (the whole value outside jets).
    fn sign0(&self) -> Ordering;
    fn to_f64(&self) -> f64;

    fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.clone() * other.inv()?)
    }

    /// Zero test used where a tolerance is appropriate (floats).
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn is_exact() -> bool {
        true
    }

    fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = r * self.clone();
        }
        r
    }
}

/// The jump function: `1` for `x >= 0`, `-1` otherwise.
pub fn jump<S: Scalar>(x: &S) -> S {
    if x.sign0() == Ordering::Less {
        -S::one()
    } else {
        S::one()
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        rat(n, d)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Result<Self, ScalarError> {
        if Zero::is_zero(self) {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn sqrt(&self) -> Result<Self, ScalarError> {
        if self.is_negative() {
            return Err(ScalarError::NegativeSqrt);
        }
        match (isqrt_exact(self.numer()), isqrt_exact(self.denom())) {
            (Some(n), Some(d)) => Ok(Rational::new(n, d)),
            _ => Err(ScalarError::NotASquare),
        }
    }
    fn compare(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
    fn sign0(&self) -> Ordering {
        self.cmp(&Zero::zero())
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Absolute tolerance used by [`Scalar::is_negligible`] for floats.
pub const F64_EPS: f64 = 1e-9;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        n as f64 / d as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn inv(&self) -> Result<Self, ScalarError> {
        if *self == 0.0 {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(1.0 / self)
        }
    }
    fn sqrt(&self) -> Result<Self, ScalarError> {
        if *self < 0.0 {
            Err(ScalarError::NegativeSqrt)
        } else {
            Ok(f64::sqrt(*self))
        }
    }
    fn compare(&self, other: &Self) -> Option<Ordering> {
        self.partial_cmp(other)
    }
    fn sign0(&self) -> Ordering {
        self.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_negligible(&self) -> bool {
        self.abs() <= F64_EPS
    }
    fn is_exact() -> bool {
        false
    }
}

/// Default truncation order of jets.
pub const DEFAULT_ORDER: usize = 5;

/// Truncated power series `c0 + c1 ε + ... + c_T ε^T` over a base ring.
///
/// Constants built through [`Scalar::from_i64`] and friends are exact
/// polynomials and adopt the order of whatever they are combined with.
#[derive(Clone, Debug)]
pub struct Jet<S> {
    coeffs: Vec<S>,
    order: Option<usize>,
}

impl<S: Scalar> Jet<S> {
    /// `c` truncated at `order`.
    pub fn new(mut coeffs: Vec<S>, order: usize) -> Self {
        coeffs.truncate(order + 1);
        let mut j = Jet {
            coeffs,
            order: Some(order),
        };
        j.trim();
        j
    }

    pub fn constant(c: S) -> Self {
        let mut j = Jet {
            coeffs: vec![c],
            order: None,
        };
        j.trim();
        j
    }

    /// The formal variable ε at the default order.
    pub fn eps() -> Self {
        Self::eps_with_order(DEFAULT_ORDER)
    }

    pub fn eps_with_order(order: usize) -> Self {
        Jet::new(vec![S::zero(), S::one()], order)
    }

    /// Truncation order, `None` for exact polynomials.
    pub fn order(&self) -> Option<usize> {
        self.order
    }

    fn effective_order(&self) -> usize {
        self.order.unwrap_or(DEFAULT_ORDER)
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn get(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient of ε^i.
    pub fn coeff(&self, i: usize) -> Result<S, ScalarError> {
        match self.order {
            Some(t) if i > t => Err(ScalarError::BeyondTruncation(i, t)),
            _ => Ok(self.get(i)),
        }
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn combine_order(a: Option<usize>, b: Option<usize>) -> Option<usize> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    fn shifted(&self, k: usize) -> Jet<S> {
        Jet {
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
            order: self.order.map(|t| t - k.min(t)),
        }
    }

    /// Inverse of a jet with nonzero constant term.
    fn inv_unit(&self, order: usize) -> Result<Jet<S>, ScalarError> {
        let c0inv = self.get(0).inv()?;
        let mut r: Vec<S> = Vec::with_capacity(order + 1);
        r.push(c0inv.clone());
        for n in 1..=order {
            let mut acc = S::zero();
            for i in 1..=n {
                acc = acc + self.get(i) * r[n - i].clone();
            }
            r.push(-(acc * c0inv.clone()));
        }
        Ok(Jet::new(r, order))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Jet<T> {
        let mut j = Jet {
            coeffs: self.coeffs.iter().map(f).collect(),
            order: self.order,
        };
        j.trim();
        j
    }
}

impl<S: Scalar> PartialEq for Jet<S> {
    fn eq(&self, other: &Self) -> bool {
        let n = match Self::combine_order(self.order, other.order) {
            Some(t) => t + 1,
            None => self.coeffs.len().max(other.coeffs.len()),
        };
        (0..n).all(|i| self.get(i) == other.get(i))
    }
}

impl<S: Scalar> Add for Jet<S> {
    type Output = Jet<S>;
    fn add(self, o: Jet<S>) -> Jet<S> {
        let order = Self::combine_order(self.order, o.order);
        let n = self.coeffs.len().max(o.coeffs.len());
        let n = order.map_or(n, |t| n.min(t + 1));
        let mut j = Jet {
            coeffs: (0..n).map(|i| self.get(i) + o.get(i)).collect(),
            order,
        };
        j.trim();
        j
    }
}

impl<S: Scalar> Sub for Jet<S> {
    type Output = Jet<S>;
    fn sub(self, o: Jet<S>) -> Jet<S> {
        self + (-o)
    }
}

impl<S: Scalar> Neg for Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        Jet {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
            order: self.order,
        }
    }
}

impl<S: Scalar> Mul for Jet<S> {
    type Output = Jet<S>;
    fn mul(self, o: Jet<S>) -> Jet<S> {
        let order = Self::combine_order(self.order, o.order);
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Jet {
                coeffs: vec![],
                order,
            };
        }
        let n = self.coeffs.len() + o.coeffs.len() - 1;
        let n = order.map_or(n, |t| n.min(t + 1));
        let mut c = vec![S::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j < n {
                    c[i + j] = c[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        let mut j = Jet { coeffs: c, order };
        j.trim();
        j
    }
}

impl<S: Scalar> fmt::Display for Jet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})ε")?,
                _ => write!(f, "({c})ε^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(t) = self.order {
            write!(f, " + O(ε^{})", t + 1)?;
        }
        Ok(())
    }
}

impl<S: Scalar> Scalar for Jet<S> {
    fn zero() -> Self {
        Jet::constant(S::zero())
    }
    fn one() -> Self {
        Jet::constant(S::one())
    }
    fn from_i64(n: i64) -> Self {
        Jet::constant(S::from_i64(n))
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        Jet::constant(S::from_ratio(n, d))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn is_negligible(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible())
    }
    fn is_exact() -> bool {
        S::is_exact()
    }
    fn inv(&self) -> Result<Self, ScalarError> {
        if self.coeffs.len() == 1 && self.order.is_none() {
            return Ok(Jet::constant(self.get(0).inv()?));
        }
        if self.get(0).is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        self.inv_unit(self.effective_order())
    }
    /// Quotient with cancellation of common powers of ε: the result loses
    /// as many orders as the divisor's valuation.
    fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        let vb = other.valuation().ok_or(ScalarError::DivisionByZero)?;
        if vb == 0 {
            return Ok(self.clone() * other.inv()?);
        }
        let va = match self.valuation() {
            None => {
                let order = Self::combine_order(self.order, other.order)
                    .map(|t| t.saturating_sub(vb));
                return Ok(Jet {
                    coeffs: vec![],
                    order,
                });
            }
            Some(v) => v,
        };
        if va < vb {
            return Err(ScalarError::DivisionByZero);
        }
        let order = Self::combine_order(self.order, other.order).unwrap_or(DEFAULT_ORDER + vb);
        let a = self.shifted(vb);
        let b = other.shifted(vb);
        let t = order - vb;
        let binv = b.inv_unit(t)?;
        let mut q = a * binv;
        q.order = Some(t);
        q.coeffs.truncate(t + 1);
        q.trim();
        Ok(q)
    }
    fn sqrt(&self) -> Result<Self, ScalarError> {
        let c0 = self.get(0);
        if c0.is_zero() {
            let Some(v) = self.valuation() else {
                return Ok(self.clone());
            };
            if v % 2 == 1 {
                return Err(ScalarError::NotASquare);
            }
            // sqrt(ε^{2h} g) = ε^h sqrt(g)
            let root = self.shifted(v).sqrt()?;
            let h = v / 2;
            let mut coeffs = vec![S::zero(); h];
            coeffs.extend(root.coeffs);
            return Ok(Jet {
                coeffs,
                order: root.order.map(|t| t + h),
            });
        }
        let r0 = c0.sqrt()?;
        if self.coeffs.len() == 1 && self.order.is_none() {
            return Ok(Jet::constant(r0));
        }
        let order = self.effective_order();
        let two_r0_inv = (r0.clone() + r0.clone()).inv()?;
        let mut r: Vec<S> = vec![r0];
        for n in 1..=order {
            let mut acc = self.get(n);
            for i in 1..n {
                acc = acc - r[i].clone() * r[n - i].clone();
            }
            r.push(acc * two_r0_inv.clone());
        }
        Ok(Jet::new(r, order))
    }
    fn compare(&self, other: &Self) -> Option<Ordering> {
        let d = self.clone() - other.clone();
        match d.valuation() {
            None => Some(Ordering::Equal),
            Some(0) => Some(d.get(0).sign0()),
            Some(_) => None,
        }
    }
    fn sign0(&self) -> Ordering {
        self.get(0).sign0()
    }
    fn to_f64(&self) -> f64 {
        self.get(0).to_f64()
    }
}

impl<S: Scalar> From<S> for Jet<S> {
    fn from(c: S) -> Self {
        Jet::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type J = Jet<Rational>;

    fn r(n: i64, d: i64) -> Rational {
        rat(n, d)
    }

    #[test]
    fn jump_values() {
        assert_eq!(jump(&r(0, 1)), r(1, 1));
        assert_eq!(jump(&r(5, 1)), r(1, 1));
        assert_eq!(jump(&r(-3, 1)), r(-1, 1));
        assert_eq!(jump(&-1.5f64), -1.0);
    }

    #[test]
    fn jump_of_a_jet_reads_the_constant_term() {
        let e = J::eps();
        assert_eq!(jump(&(J::from_i64(0) - e.clone())), J::one());
        assert_eq!(jump(&(J::from_i64(-2) + e)), -J::one());
    }

    #[test]
    fn rational_partial_operations() {
        assert_eq!(r(9, 4).sqrt().unwrap(), r(3, 2));
        assert_eq!(r(2, 1).sqrt(), Err(ScalarError::NotASquare));
        assert_eq!(r(-4, 1).sqrt(), Err(ScalarError::NegativeSqrt));
        assert_eq!(r(0, 1).inv(), Err(ScalarError::DivisionByZero));
        assert_eq!(0.0f64.inv(), Err(ScalarError::DivisionByZero));
        assert_eq!(Scalar::sqrt(&-1.0f64), Err(ScalarError::NegativeSqrt));
    }

    #[test]
    fn series_coefficients() {
        let e = J::eps();
        let j = J::one() + J::from_i64(2) * e.clone();
        assert_eq!(j.coeff(0).unwrap(), r(1, 1));
        let s = (J::one() + e.clone()).sqrt().unwrap();
        assert_eq!(s.coeff(1).unwrap(), r(1, 2));
        // binomial series of (1+ε)^(1/2): 1, 1/2, -1/8, 1/16, -5/128, 7/256
        let binom = [r(1, 1), r(1, 2), r(-1, 8), r(1, 16), r(-5, 128), r(7, 256)];
        for (i, b) in binom.iter().enumerate() {
            assert_eq!(&s.coeff(i).unwrap(), b);
        }
        let g = J::one().div(&(J::one() - e.clone())).unwrap();
        for i in 0..=5 {
            assert_eq!(g.coeff(i).unwrap(), r(1, 1));
        }
        assert_eq!(
            g.coeff(6),
            Err(ScalarError::BeyondTruncation(6, DEFAULT_ORDER))
        );
    }

    #[test]
    fn division_cancels_common_powers() {
        let e = J::eps();
        let a = e.clone() * e.clone() * J::from_i64(3);
        let b = e.clone() * e.clone() * (J::one() + e.clone());
        let q = a.div(&b).unwrap();
        assert_eq!(q.order(), Some(3));
        assert_eq!(q.coeff(0).unwrap(), r(3, 1));
        assert_eq!(q.coeff(1).unwrap(), r(-3, 1));
        assert!(J::one().div(&e).is_err());
    }

    #[test]
    fn zero_test_covers_all_coefficients() {
        let e = J::eps();
        assert!(!(e.clone() * e.clone()).is_zero());
        assert!((e.clone() - e).is_zero());
    }

    #[test]
    fn sqrt_of_even_valuation() {
        let e = J::eps();
        // sqrt(4ε² + 4ε³) = 2ε + ε² - ε³/4 + ...
        let x = J::from_i64(4) * e.clone() * e.clone() * (J::one() + e.clone());
        let s = x.sqrt().unwrap();
        assert_eq!(s.coeff(0).unwrap(), r(0, 1));
        assert_eq!(s.coeff(1).unwrap(), r(2, 1));
        assert_eq!(s.coeff(2).unwrap(), r(1, 1));
        assert_eq!(s.coeff(3).unwrap(), r(-1, 4));
        assert_eq!(s.order(), Some(4));
        assert!((e.clone() * e.clone() * e.clone()).sqrt().is_err());
        assert!((J::from_i64(2) + e).sqrt().is_err());
    }
}
