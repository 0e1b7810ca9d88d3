//! Dense Clifford algebras over diagonal, possibly degenerate, metrics.

use std::fmt;

use thiserror::Error;

use crate::scalar::{Scalar, ScalarError};

/// Largest supported dimension of the generating space.
pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliffordError {
    #[error("frames differ")]
    FrameMismatch,
    #[error("dimension {0} outside 1..={MAX_DIM}")]
    BadDimension(usize),
    #[error("null vector has no inverse")]
    NullVector,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("element is not a vector")]
    NotAVector,
    #[error("element is not a scalar")]
    NotAScalar,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Diagonal metric `diag(g_00, ..., g_{n-1,n-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame<S> {
    sig: Vec<S>,
}

impl<S: Scalar> Frame<S> {
    pub fn new(sig: Vec<S>) -> Result<Self, CliffordError> {
        if sig.is_empty() || sig.len() > MAX_DIM {
            return Err(CliffordError::BadDimension(sig.len()));
        }
        Ok(Frame { sig })
    }

    /// The plane metric `diag(-1, sigma)`.
    pub fn plane(sigma: S) -> Self {
        Frame {
            sig: vec![-S::one(), sigma],
        }
    }

    pub fn dim(&self) -> usize {
        self.sig.len()
    }

    pub fn g(&self, i: usize) -> &S {
        &self.sig[i]
    }

    pub fn signature(&self) -> &[S] {
        &self.sig
    }

    /// `sum g_ii x_i y_i`.
    pub fn quad(&self, x: &[S], y: &[S]) -> S {
        let mut acc = S::zero();
        for i in 0..self.dim() {
            acc = acc + self.sig[i].clone() * x[i].clone() * y[i].clone();
        }
        acc
    }
}

/// Sign of reordering `e_a e_b` into canonical blade order, before metric factors.
fn reorder_sign(a: usize, b: usize) -> bool {
    let mut swaps = 0u32;
    let mut a = a >> 1;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    swaps % 2 == 1
}

/// Element of `Cl(g)` stored as `2^n` blade coefficients indexed by bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector<S> {
    frame: Frame<S>,
    c: Vec<S>,
}

impl<S: Scalar> Multivector<S> {
    pub fn zero(frame: &Frame<S>) -> Self {
        Multivector {
            frame: frame.clone(),
            c: vec![S::zero(); 1 << frame.dim()],
        }
    }

    pub fn scalar(frame: &Frame<S>, s: S) -> Self {
        let mut x = Self::zero(frame);
        x.c[0] = s;
        x
    }

    pub fn one(frame: &Frame<S>) -> Self {
        Self::scalar(frame, S::one())
    }

    /// Basis vector `e_i`.
    pub fn basis(frame: &Frame<S>, i: usize) -> Self {
        Self::blade(frame, 1 << i, S::one())
    }

    pub fn blade(frame: &Frame<S>, mask: usize, s: S) -> Self {
        let mut x = Self::zero(frame);
        x.c[mask] = s;
        x
    }

    /// `sum x_i e_i`.
    pub fn vector(frame: &Frame<S>, x: &[S]) -> Self {
        let mut r = Self::zero(frame);
        for (i, xi) in x.iter().enumerate() {
            r.c[1 << i] = xi.clone();
        }
        r
    }

    pub fn frame(&self) -> &Frame<S> {
        &self.frame
    }

    pub fn coeff(&self, mask: usize) -> &S {
        &self.c[mask]
    }

    pub fn coeffs(&self) -> &[S] {
        &self.c
    }

    /// Same coefficients read in another frame of equal dimension.
    pub fn reframe(&self, frame: &Frame<S>) -> Result<Self, CliffordError> {
        if frame.dim() != self.frame.dim() {
            return Err(CliffordError::FrameMismatch);
        }
        Ok(Multivector {
            frame: frame.clone(),
            c: self.c.clone(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    fn check(&self, o: &Self) -> Result<(), CliffordError> {
        if self.frame == o.frame {
            Ok(())
        } else {
            Err(CliffordError::FrameMismatch)
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, CliffordError> {
        self.check(o)?;
        Ok(self.zip(o, |a, b| a + b))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, CliffordError> {
        self.check(o)?;
        Ok(self.zip(o, |a, b| a - b))
    }

    fn zip(&self, o: &Self, f: impl Fn(S, S) -> S) -> Self {
        Multivector {
            frame: self.frame.clone(),
            c: self
                .c
                .iter()
                .zip(&o.c)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a.clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|a| a.clone() * s.clone())
    }

    /// Componentwise quotient; for series this cancels common powers.
    pub fn divide(&self, s: &S) -> Result<Self, CliffordError> {
        let c = self.c.iter().map(|a| a.div(s)).collect::<Result<Vec<S>, _>>()?;
        Ok(Multivector {
            frame: self.frame.clone(),
            c,
        })
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Multivector {
            frame: self.frame.clone(),
            c: self.c.iter().map(f).collect(),
        }
    }

    /// Geometric product.
    pub fn gp(&self, o: &Self) -> Result<Self, CliffordError> {
        self.check(o)?;
        let mut r = vec![S::zero(); self.c.len()];
        for (a, ca) in self.c.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in o.c.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let mut s = ca.clone() * cb.clone();
                let common = a & b;
                let mut i = 0;
                while common >> i != 0 {
                    if common >> i & 1 == 1 {
                        s = s * self.frame.sig[i].clone();
                    }
                    i += 1;
                }
                if s.is_zero() {
                    continue;
                }
                if reorder_sign(a, b) {
                    s = -s;
                }
                r[a ^ b] = r[a ^ b].clone() + s;
            }
        }
        Ok(Multivector {
            frame: self.frame.clone(),
            c: r,
        })
    }

    fn grade_map(&self, sign: impl Fn(u32) -> bool) -> Self {
        Multivector {
            frame: self.frame.clone(),
            c: self
                .c
                .iter()
                .enumerate()
                .map(|(m, x)| {
                    if sign(m.count_ones()) {
                        -x.clone()
                    } else {
                        x.clone()
                    }
                })
                .collect(),
        }
    }

    /// Reversion: reverses the order of vector factors.
    pub fn star(&self) -> Self {
        self.grade_map(|r| (r * r.saturating_sub(1) / 2) % 2 == 1)
    }

    /// Grade involution.
    pub fn involute(&self) -> Self {
        self.grade_map(|r| r % 2 == 1)
    }

    /// Clifford conjugation: reversion composed with grade involution.
    pub fn bar(&self) -> Self {
        self.grade_map(|r| (r * (r + 1) / 2) % 2 == 1)
    }

    pub fn scalar_part(&self) -> S {
        self.c[0].clone()
    }

    pub fn clifford_part(&self) -> Self {
        let mut x = self.clone();
        x.c[0] = S::zero();
        x
    }

    /// The scalar value if every other blade vanishes.
    pub fn as_scalar(&self) -> Result<S, CliffordError> {
        if self.c[1..].iter().all(|x| x.is_negligible()) {
            Ok(self.c[0].clone())
        } else {
            Err(CliffordError::NotAScalar)
        }
    }

    pub fn is_vector(&self) -> bool {
        self.c
            .iter()
            .enumerate()
            .all(|(m, x)| m.count_ones() == 1 || x.is_negligible())
    }

    /// Coefficients of a grade-one element.
    pub fn to_vector(&self) -> Result<Vec<S>, CliffordError> {
        if !self.is_vector() {
            return Err(CliffordError::NotAVector);
        }
        Ok((0..self.frame.dim())
            .map(|i| self.c[1 << i].clone())
            .collect())
    }

    /// `x / x^2` for a vector `x`.
    pub fn vector_inverse(&self) -> Result<Self, CliffordError> {
        let v = self.to_vector()?;
        let q = self.frame.quad(&v, &v);
        if q.is_negligible() {
            return Err(CliffordError::NullVector);
        }
        self.divide(&q)
    }

    /// An element `b` with `self b` a scalar `n`, together with `n`.
    fn adjugate(&self) -> Result<Option<(Self, S)>, CliffordError> {
        if self.is_vector() {
            let v = self.to_vector()?;
            return Ok(Some((self.clone(), self.frame.quad(&v, &v))));
        }
        let b = self.bar();
        Ok(self.gp(&b)?.as_scalar().ok().map(|n| (b, n)))
    }

    /// Two-sided inverse of a general element.
    pub fn inverse(&self) -> Result<Self, CliffordError> {
        if self.is_vector() {
            return self.vector_inverse();
        }
        let b = self.bar();
        if let Ok(n) = self.gp(&b)?.as_scalar() {
            if n.is_negligible() {
                return Err(CliffordError::NotInvertible);
            }
            return b.divide(&n);
        }
        self.inverse_by_elimination()
    }

    /// Solves `self * y = 1` as a linear system over the blade coefficients.
    fn inverse_by_elimination(&self) -> Result<Self, CliffordError> {
        let n = self.c.len();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let col = self.gp(&Self::blade(&self.frame, j, S::one()))?;
            cols.push(col.c);
        }
        let mut a: Vec<Vec<S>> = (0..n)
            .map(|i| {
                let mut row: Vec<S> = (0..n).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { S::one() } else { S::zero() });
                row
            })
            .collect();
        let sol = crate::linalg::solve_square(&mut a).ok_or(CliffordError::NotInvertible)?;
        let y = Multivector {
            frame: self.frame.clone(),
            c: sol,
        };
        let check = y.gp(self)?.sub(&Self::one(&self.frame))?;
        if check.c.iter().all(|x| x.is_negligible()) {
            Ok(y)
        } else {
            Err(CliffordError::NotInvertible)
        }
    }
}

impl<S: Scalar> fmt::Display for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m == 0 {
                write!(f, "{x}")?;
            } else {
                write!(f, "({x})e")?;
                for i in 0..self.frame.dim() {
                    if m >> i & 1 == 1 {
                        write!(f, "{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// 2x2 matrix with multivector entries, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FsccMatrix<S> {
    pub e: [[Multivector<S>; 2]; 2],
}

impl<S: Scalar> FsccMatrix<S> {
    pub fn new(
        a: Multivector<S>,
        b: Multivector<S>,
        c: Multivector<S>,
        d: Multivector<S>,
    ) -> Result<Self, CliffordError> {
        a.check(&b)?;
        a.check(&c)?;
        a.check(&d)?;
        Ok(FsccMatrix {
            e: [[a, b], [c, d]],
        })
    }

    pub fn from_scalars(frame: &Frame<S>, a: S, b: S, c: S, d: S) -> Self {
        FsccMatrix {
            e: [
                [Multivector::scalar(frame, a), Multivector::scalar(frame, b)],
                [Multivector::scalar(frame, c), Multivector::scalar(frame, d)],
            ],
        }
    }

    pub fn identity(frame: &Frame<S>) -> Self {
        Self::from_scalars(frame, S::one(), S::zero(), S::zero(), S::one())
    }

    pub fn get(&self, i: usize, j: usize) -> &Multivector<S> {
        &self.e[i][j]
    }

    pub fn frame(&self) -> &Frame<S> {
        self.e[0][0].frame()
    }

    pub fn mul(&self, o: &Self) -> Result<Self, CliffordError> {
        let mut out = self.clone();
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] = self.e[i][0]
                    .gp(&o.e[0][j])?
                    .add(&self.e[i][1].gp(&o.e[1][j])?)?;
            }
        }
        Ok(out)
    }

    pub fn map(&self, f: impl Fn(&Multivector<S>) -> Multivector<S>) -> Self {
        FsccMatrix {
            e: [
                [f(&self.e[0][0]), f(&self.e[0][1])],
                [f(&self.e[1][0]), f(&self.e[1][1])],
            ],
        }
    }

    pub fn trace(&self) -> Result<Multivector<S>, CliffordError> {
        self.e[0][0].add(&self.e[1][1])
    }

    /// `M00 M11 - M01 M10`.
    pub fn determinant(&self) -> Result<Multivector<S>, CliffordError> {
        self.e[0][0]
            .gp(&self.e[1][1])?
            .sub(&self.e[0][1].gp(&self.e[1][0])?)
    }

    /// `[[d*, -b*], [-c*, a*]]`; the inverse of an element with unit pseudodeterminant.
    pub fn star_adjugate(&self) -> Self {
        FsccMatrix {
            e: [
                [self.e[1][1].star(), self.e[0][1].star().neg()],
                [self.e[1][0].star().neg(), self.e[0][0].star()],
            ],
        }
    }

    pub fn reframe(&self, frame: &Frame<S>) -> Result<Self, CliffordError> {
        Ok(FsccMatrix {
            e: [
                [self.e[0][0].reframe(frame)?, self.e[0][1].reframe(frame)?],
                [self.e[1][0].reframe(frame)?, self.e[1][1].reframe(frame)?],
            ],
        })
    }
}

/// Clifford form of an SL(2) element: `[[a, b e0], [c e0^3, d]]`, or of its
/// inverse `[[d, -b e0], [-c e0^3, a]]` when `not_inverse` is false.
pub fn sl2_clifford<S: Scalar>(
    a: &S,
    b: &S,
    c: &S,
    d: &S,
    frame: &Frame<S>,
    not_inverse: bool,
) -> FsccMatrix<S> {
    let e0 = Multivector::basis(frame, 0);
    let e0_cubed = e0.scale(frame.g(0));
    let one = Multivector::one(frame);
    if not_inverse {
        FsccMatrix {
            e: [
                [one.scale(a), e0.scale(b)],
                [e0_cubed.scale(c), one.scale(d)],
            ],
        }
    } else {
        FsccMatrix {
            e: [
                [one.scale(d), e0.scale(&-b.clone())],
                [e0_cubed.scale(&-c.clone()), one.scale(a)],
            ],
        }
    }
}

/// `(M00 x + M01)(M10 x + M11)^{-1}` read back as a point, `x = sum x_i e_i`.
pub fn moebius_map<S: Scalar>(
    m: &FsccMatrix<S>,
    x: &[S],
    frame: &Frame<S>,
) -> Result<Vec<S>, CliffordError> {
    let m = m.reframe(frame)?;
    let xv = Multivector::vector(frame, x);
    let num = m.e[0][0].gp(&xv)?.add(&m.e[0][1])?;
    let den = m.e[1][0].gp(&xv)?.add(&m.e[1][1])?;
    // the division by the norm comes last so that series quotients can cancel
    match den.adjugate()? {
        Some((b, n)) if !n.is_negligible() => num.gp(&b)?.divide(&n)?.to_vector(),
        _ => num.gp(&den.inverse()?)?.to_vector(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    fn plane(s: i64) -> Frame<Rational> {
        Frame::plane(rat(s, 1))
    }

    fn r(n: i64) -> Rational {
        rat(n, 1)
    }

    #[test]
    fn generator_squares() {
        let f = plane(-1);
        let e0 = Multivector::basis(&f, 0);
        assert_eq!(e0.gp(&e0).unwrap(), Multivector::scalar(&f, r(-1)));
        for s in -1..=1 {
            let f = plane(s);
            let v = Multivector::vector(&f, &[r(1), r(1)]);
            assert_eq!(v.gp(&v).unwrap(), Multivector::scalar(&f, r(-1 + s)));
        }
    }

    #[test]
    fn sandwich_of_basis_vectors() {
        let f = Frame::new(vec![r(-1), r(-1)]).unwrap();
        let e0 = Multivector::basis(&f, 0);
        let e1 = Multivector::basis(&f, 1);
        let p = e0.gp(&e1).unwrap().gp(&e0).unwrap();
        assert_eq!(p, e1);
    }

    #[test]
    fn involutions() {
        let f = plane(-1);
        let e0 = Multivector::basis(&f, 0);
        let e01 = Multivector::blade(&f, 3, r(1));
        assert_eq!(e0.bar(), e0.neg());
        assert_eq!(e01.scalar_part(), r(0));
        let e10 = Multivector::basis(&f, 1).gp(&e0).unwrap();
        assert_eq!(e01.star(), e10);
        assert_eq!(e10, e01.neg());
    }

    #[test]
    fn vector_inverses() {
        let f = plane(0);
        let e0 = Multivector::basis(&f, 0);
        assert_eq!(e0.vector_inverse().unwrap(), e0.neg());
        let three = e0.scale(&r(3));
        assert_eq!(three.vector_inverse().unwrap(), e0.scale(&rat(-1, 3)));
        let e1 = Multivector::basis(&f, 1);
        assert_eq!(e1.vector_inverse(), Err(CliffordError::NullVector));
    }

    #[test]
    fn to_vector_rejects_other_grades() {
        let f = plane(1);
        let v = Multivector::vector(&f, &[r(2), r(3)]);
        assert_eq!(v.to_vector().unwrap(), vec![r(2), r(3)]);
        assert_eq!(Multivector::zero(&f).to_vector().unwrap(), vec![r(0), r(0)]);
        let bad = v.add(&Multivector::one(&f)).unwrap();
        assert_eq!(bad.to_vector(), Err(CliffordError::NotAVector));
    }

    #[test]
    fn sl2_forms() {
        let f = plane(-1);
        let id = sl2_clifford(&r(1), &r(0), &r(0), &r(1), &f, true);
        assert_eq!(id, FsccMatrix::identity(&f));
        let (a, b, c, d) = (r(2), r(3), r(5), r(8));
        let m = sl2_clifford(&a, &b, &c, &d, &f, true);
        let e0 = Multivector::basis(&f, 0);
        let cube = e0.gp(&e0).unwrap().gp(&e0).unwrap();
        assert_eq!(m.e[1][0], cube.scale(&c));
        assert_eq!(m.e[1][0], e0.scale(&-c.clone()));
        let inv = sl2_clifford(&r(1), &b, &r(0), &r(1), &f, false);
        assert_eq!(inv.e[0][1], e0.scale(&-b.clone()));
        assert!(inv.e[1][0].is_zero());
    }

    #[test]
    fn moebius_examples() {
        let f = plane(-1);
        let t = sl2_clifford(&r(1), &r(7), &r(0), &r(1), &f, true);
        assert_eq!(moebius_map(&t, &[r(2), r(3)], &f).unwrap(), vec![r(9), r(3)]);
        let rot = sl2_clifford(&rat(3, 5), &rat(4, 5), &rat(-4, 5), &rat(3, 5), &f, true);
        assert_eq!(moebius_map(&rot, &[r(0), r(0)], &f).unwrap(), vec![rat(4, 3), r(0)]);
        let id = FsccMatrix::identity(&f);
        assert_eq!(moebius_map(&id, &[r(5), r(-2)], &f).unwrap(), vec![r(5), r(-2)]);
    }
}
