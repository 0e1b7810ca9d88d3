//! Two-dimensional cycles: foci, roots, line intersections, Cayley transform.

use std::ops::Deref;

use crate::clifford::Frame;
use crate::cycle::{Cycle, CycleError, Result, SignMatrix};
use crate::scalar::{jump, Scalar, ScalarError};

/// A cycle in the plane, `k (u^2 - sigma v^2) - 2 l u - 2 n v + m = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cycle2D<S>(Cycle<S>);

/// How [`Cycle2D::line_intersect`] forms the leading coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntersectMode {
    /// Exact substitution of the line into the cycle equation.
    #[default]
    Corrected,
    /// Leading coefficient `k (1 + pm a^2)` with `pm = -k g_11`; agrees with
    /// the corrected form when `k = 1`.
    Compat,
}

impl<S: Scalar> Deref for Cycle2D<S> {
    type Target = Cycle<S>;
    fn deref(&self) -> &Cycle<S> {
        &self.0
    }
}

impl<S: Scalar> From<Cycle2D<S>> for Cycle<S> {
    fn from(c: Cycle2D<S>) -> Cycle<S> {
        c.0
    }
}

impl<S: Scalar> TryFrom<Cycle<S>> for Cycle2D<S> {
    type Error = CycleError;
    fn try_from(c: Cycle<S>) -> Result<Self> {
        Cycle2D::from_cycle(c)
    }
}

/// Roots of `a x^2 - 2 b x + c = 0`; a negative discriminant gives no roots.
pub fn quadratic_roots<S: Scalar>(a: &S, b: &S, c: &S) -> Result<Vec<S>> {
    if a.is_zero() {
        if b.is_zero() {
            return Ok(vec![]);
        }
        return Ok(vec![c.div(&(S::from_i64(2) * b.clone()))?]);
    }
    let d = b.clone() * b.clone() - a.clone() * c.clone();
    let disc = match d.sqrt() {
        Ok(s) => s,
        Err(ScalarError::NegativeSqrt) => return Ok(vec![]),
        Err(e) => return Err(e.into()),
    };
    Ok(vec![
        (b.clone() - disc.clone()).div(a)?,
        (b.clone() + disc).div(a)?,
    ])
}

impl<S: Scalar> Cycle2D<S> {
    pub fn new(k: S, l: S, n: S, m: S, metric: Frame<S>) -> Result<Self> {
        Cycle2D::from_cycle(Cycle::new(k, vec![l, n], m, metric)?)
    }

    pub fn from_cycle(c: Cycle<S>) -> Result<Self> {
        if c.dim() != 2 {
            return Err(CycleError::Domain("cycle2D is defined in two dimensions"));
        }
        Ok(Cycle2D(c))
    }

    /// Cycle with `k = 1`, centre parameters `l` and `det(e, sign) = r2`.
    pub fn with_det(
        l: [S; 2],
        metric: &Frame<S>,
        r2: S,
        e: Option<&Frame<S>>,
        sign: Option<&SignMatrix<S>>,
    ) -> Result<Self> {
        Cycle2D::from_cycle(Cycle::zero_radius(l.to_vec(), metric, r2, e, sign)?)
    }

    pub fn cycle(&self) -> &Cycle<S> {
        &self.0
    }

    pub fn into_cycle(self) -> Cycle<S> {
        self.0
    }

    pub fn n(&self) -> &S {
        self.l_at(1)
    }

    /// Focus computed through the determinant in `e` (default `diag(-1, 1)`).
    pub fn focus(&self, e: Option<&Frame<S>>) -> Result<[S; 2]> {
        let default = Frame::plane(S::one());
        let e = e.unwrap_or(&default);
        let k = self.k().clone();
        let g00 = self.metric().g(0).clone();
        let u = (jump(&-g00) * self.l_at(0).clone()).div(&k)?;
        let d = self.det_with(Some(e), None, &k)?;
        let v = (-d).div(&(S::from_i64(2) * self.n().clone() * k))?;
        Ok([u, v])
    }

    pub fn focal_length(&self) -> Result<S> {
        Ok(self.n().div(&(S::from_i64(2) * self.k().clone()))?)
    }

    /// Solutions `x` of the cycle equation with the other coordinate fixed at
    /// `y`; `first` solves for the first coordinate.
    pub fn roots(&self, y: &S, first: bool) -> Result<Vec<S>> {
        let ks = [
            -self.k().clone() * self.metric().g(0).clone(),
            -self.k().clone() * self.metric().g(1).clone(),
        ];
        let (i0, i1) = if first { (0, 1) } else { (1, 0) };
        let c = ks[i1].clone() * y.clone() * y.clone()
            - S::from_i64(2) * self.l_at(i1).clone() * y.clone()
            + self.m().clone();
        quadratic_roots(&ks[i0], self.l_at(i0), &c)
    }

    /// First coordinates of the intersections with the line `v = a u + b`.
    pub fn line_intersect(&self, a: &S, b: &S, mode: IntersectMode) -> Result<Vec<S>> {
        let k = self.k().clone();
        let (l, n, m) = (self.l_at(0).clone(), self.n().clone(), self.m().clone());
        let pm = -k.clone() * self.metric().g(1).clone();
        let two = S::from_i64(2);
        let mid = l + n.clone() * a.clone() - pm.clone() * a.clone() * b.clone();
        let cst = m - two * n * b.clone() + pm.clone() * b.clone() * b.clone();
        match mode {
            IntersectMode::Corrected => {
                let lead = -k * self.metric().g(0).clone() + pm * a.clone() * a.clone();
                quadratic_roots(&lead, &mid, &cst)
            }
            IntersectMode::Compat => {
                let lead = k * (S::one() + pm * a.clone() * a.clone());
                let euclid = Frame::new(vec![-S::one(), -S::one()])?;
                Cycle2D::new(lead, mid, S::zero(), cst, euclid)?.roots(&S::zero(), true)
            }
        }
    }

    /// `(k - 2 s n, (l, n), m - 2 n)`.
    pub fn cayley_parab(&self, s: &S) -> Result<Self> {
        let two = S::from_i64(2);
        Cycle2D::new(
            self.k().clone() - two.clone() * s.clone() * self.n().clone(),
            self.l_at(0).clone(),
            self.n().clone(),
            self.m().clone() - two * self.n().clone(),
            self.metric().clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    type Q = Rational;

    fn r(n: i64) -> Q {
        rat(n, 1)
    }

    fn c2(k: Q, l: Q, n: Q, m: Q, s: i64) -> Cycle2D<Q> {
        Cycle2D::new(k, l, n, m, Frame::plane(r(s))).unwrap()
    }

    #[test]
    fn parabola_focus() {
        let p = c2(r(1), r(0), rat(1, 2), r(0), 0);
        assert_eq!(p.focus(None).unwrap(), [r(0), rat(1, 4)]);
        assert_eq!(p.focal_length().unwrap(), rat(1, 4));
    }

    #[test]
    fn dimension_is_checked() {
        let c = Cycle::new(r(1), vec![r(0)], r(0), Frame::new(vec![r(-1)]).unwrap()).unwrap();
        assert!(Cycle2D::from_cycle(c).is_err());
    }

    #[test]
    fn roots_examples() {
        let unit = c2(r(1), r(0), r(0), r(-1), -1);
        assert_eq!(unit.roots(&r(0), true).unwrap(), vec![r(-1), r(1)]);
        let rl = c2(r(0), r(0), r(1), r(0), -1);
        assert_eq!(rl.roots(&r(5), true).unwrap(), vec![]);
        let vline = c2(r(0), r(1), r(0), r(2), -1);
        assert_eq!(vline.roots(&r(3), true).unwrap(), vec![r(1)]);
        let parab = c2(r(1), r(0), rat(1, 2), r(0), 0);
        assert_eq!(parab.roots(&r(0), true).unwrap(), vec![r(0), r(0)]);
        assert_eq!(unit.roots(&r(2), true).unwrap(), vec![]);
    }

    #[test]
    fn intersections() {
        let unit = c2(r(1), r(0), r(0), r(-1), -1);
        for mode in [IntersectMode::Corrected, IntersectMode::Compat] {
            assert_eq!(unit.line_intersect(&r(0), &r(0), mode).unwrap(), vec![r(-1), r(1)]);
            assert_eq!(unit.line_intersect(&r(0), &r(1), mode).unwrap(), vec![r(0), r(0)]);
        }
    }

    #[test]
    fn cayley() {
        let rl = c2(r(0), r(0), r(1), r(0), -1);
        assert_eq!(rl.cayley_parab(&r(-1)).unwrap(), c2(r(2), r(0), r(1), r(-2), -1));
        let c = c2(r(3), r(1), r(0), r(5), 0);
        assert_eq!(c.cayley_parab(&r(1)).unwrap(), c);
    }
}
