//! Cycles `k x^2 - 2<l,x> + m = 0` and their matrix correspondence.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::clifford::{moebius_map, sl2_clifford, CliffordError, Frame, FsccMatrix, Multivector};
use crate::linalg::{solve_affine, Solve};
use crate::scalar::{Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CycleError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("matrix is not of the form [[L, m], [k, -L]]")]
    MalformedMatrix,
    #[error("conditions are inconsistent")]
    Inconsistent,
    #[error("condition {0} is not affine in the unknowns")]
    Nonlinear(usize),
    #[error("no unknowns to solve for")]
    NoUnknowns,
    #[error("{0}")]
    Domain(&'static str),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

pub type Result<T, E = CycleError> = std::result::Result<T, E>;

/// Diagonal sign matrix applied to `l` inside the matrix form.
#[derive(Debug, Clone, PartialEq)]
pub struct SignMatrix<S> {
    diag: Vec<S>,
}

impl<S: Scalar> SignMatrix<S> {
    pub fn new(diag: Vec<S>) -> Self {
        SignMatrix { diag }
    }

    pub fn identity(n: usize) -> Self {
        SignMatrix {
            diag: vec![S::one(); n],
        }
    }

    /// `diag(1, s)`.
    pub fn plane(s: S) -> Self {
        SignMatrix {
            diag: vec![S::one(), s],
        }
    }

    pub fn diag(&self) -> &[S] {
        &self.diag
    }

    pub fn mul(&self, o: &Self) -> Self {
        SignMatrix {
            diag: self
                .diag
                .iter()
                .zip(&o.diag)
                .map(|(a, b)| a.clone() * b.clone())
                .collect(),
        }
    }
}

/// Component of a cycle, used to name unknowns in [`Cycle::subject_to`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    K,
    L(usize),
    M,
}

/// A cycle `(k, l, m)` together with the metric of its point space.
#[derive(Debug, Clone, PartialEq)]
pub struct Cycle<S> {
    k: S,
    l: Vec<S>,
    m: S,
    metric: Frame<S>,
}

/// A condition on a cycle; the relation is "value equals zero".
pub type Condition<'a, S> = Box<dyn Fn(&Cycle<S>) -> Result<S> + 'a>;

impl<S: Scalar> Cycle<S> {
    pub fn new(k: S, l: Vec<S>, m: S, metric: Frame<S>) -> Result<Self> {
        if l.len() != metric.dim() {
            return Err(CycleError::Dimension {
                expected: metric.dim(),
                got: l.len(),
            });
        }
        Ok(Cycle { k, l, m, metric })
    }

    pub fn with_metric(&self, metric: &Frame<S>) -> Result<Self> {
        Cycle::new(self.k.clone(), self.l.clone(), self.m.clone(), metric.clone())
    }

    /// Cycle with centre `l`, `k = 1`, and `det(e, sign) = r2`.
    pub fn zero_radius(
        l: Vec<S>,
        metric: &Frame<S>,
        r2: S,
        e: Option<&Frame<S>>,
        sign: Option<&SignMatrix<S>>,
    ) -> Result<Self> {
        let c = Cycle::new(S::one(), l, S::zero(), metric.clone())?;
        let e = e.cloned();
        let sign = sign.cloned();
        c.subject_to(
            vec![Box::new(move |c: &Cycle<S>| {
                Ok(c.det(e.as_ref(), sign.as_ref())? - r2.clone())
            })],
            Some(&[Slot::M]),
        )
    }

    pub fn k(&self) -> &S {
        &self.k
    }

    pub fn l(&self) -> &[S] {
        &self.l
    }

    pub fn l_at(&self, i: usize) -> &S {
        &self.l[i]
    }

    pub fn m(&self) -> &S {
        &self.m
    }

    pub fn metric(&self) -> &Frame<S> {
        &self.metric
    }

    pub fn dim(&self) -> usize {
        self.l.len()
    }

    pub fn slot(&self, s: Slot) -> &S {
        match s {
            Slot::K => &self.k,
            Slot::L(i) => &self.l[i],
            Slot::M => &self.m,
        }
    }

    pub fn set(&self, s: Slot, v: S) -> Self {
        let mut c = self.clone();
        match s {
            Slot::K => c.k = v,
            Slot::L(i) => c.l[i] = v,
            Slot::M => c.m = v,
        }
        c
    }

    fn sign_or_identity(&self, sign: Option<&SignMatrix<S>>) -> SignMatrix<S> {
        sign.cloned()
            .unwrap_or_else(|| SignMatrix::identity(self.dim()))
    }

    fn frame_or_metric<'a>(&'a self, e: Option<&'a Frame<S>>) -> &'a Frame<S> {
        e.unwrap_or(&self.metric)
    }

    /// `[[sum l_i s_i e_i, m], [k, -sum l_i s_i e_i]]`.
    pub fn to_matrix(
        &self,
        e: Option<&Frame<S>>,
        sign: Option<&SignMatrix<S>>,
    ) -> Result<FsccMatrix<S>> {
        let f = self.frame_or_metric(e);
        if f.dim() != self.dim() {
            return Err(CycleError::Dimension {
                expected: self.dim(),
                got: f.dim(),
            });
        }
        let s = self.sign_or_identity(sign);
        let v: Vec<S> = self
            .l
            .iter()
            .zip(s.diag())
            .map(|(a, b)| a.clone() * b.clone())
            .collect();
        let a = Multivector::vector(f, &v);
        Ok(FsccMatrix::new(
            a.clone(),
            Multivector::scalar(f, self.m.clone()),
            Multivector::scalar(f, self.k.clone()),
            a.neg(),
        )?)
    }

    /// Inverse of [`Cycle::to_matrix`].
    pub fn from_matrix(
        mat: &FsccMatrix<S>,
        metric: &Frame<S>,
        _e: Option<&Frame<S>>,
        sign: Option<&SignMatrix<S>>,
    ) -> Result<Self> {
        let tr = mat.trace()?;
        if !tr.coeffs().iter().all(|x| x.is_negligible()) {
            return Err(CycleError::MalformedMatrix);
        }
        let direct = || -> Result<(S, Vec<S>, S)> {
            Ok((
                mat.get(1, 0).as_scalar()?,
                mat.get(0, 0).to_vector()?,
                mat.get(0, 1).as_scalar()?,
            ))
        };
        let (k, v, m) = match direct() {
            Ok(t) => t,
            Err(_) => {
                let kinv = mat.get(1, 0).inverse()?;
                (
                    S::one(),
                    mat.get(0, 0).gp(&kinv)?.to_vector()?,
                    mat.get(0, 1).gp(&kinv)?.as_scalar()?,
                )
            }
        };
        let l = match sign {
            None => v,
            Some(s) => v
                .iter()
                .zip(s.diag())
                .map(|(a, b)| a.clone() * b.clone())
                .collect(),
        };
        Cycle::new(k, l, m, metric.clone())
    }

    /// `-k sum g_ii x_i^2 - 2 sum l_i x_i + m`.
    pub fn val(&self, x: &[S]) -> Result<S> {
        if x.len() != self.dim() {
            return Err(CycleError::Dimension {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let mut acc = self.m.clone() - self.k.clone() * self.metric.quad(x, x);
        for (li, xi) in self.l.iter().zip(x) {
            acc = acc - S::from_i64(2) * li.clone() * xi.clone();
        }
        Ok(acc)
    }

    pub fn passing(&self, x: &[S]) -> Result<bool> {
        Ok(self.val(x)?.is_negligible())
    }

    /// Determinant of the matrix of the cycle normalised to `k = 1`.
    pub fn det(&self, e: Option<&Frame<S>>, sign: Option<&SignMatrix<S>>) -> Result<S> {
        self.det_with(e, sign, &S::one())
    }

    /// As [`Cycle::det`] with normalisation `k = k_norm`; zero skips it.
    pub fn det_with(
        &self,
        e: Option<&Frame<S>>,
        sign: Option<&SignMatrix<S>>,
        k_norm: &S,
    ) -> Result<S> {
        let c = if k_norm.is_zero() {
            self.clone()
        } else {
            self.normalize(k_norm)?
        };
        Ok(c.to_matrix(e, sign)?.determinant()?.as_scalar()?)
    }

    /// Scales the first nonzero of `k, m, l_0, l_1, ...` to `k_new`; with
    /// `k_new = 0` divides by the square root of the determinant instead.
    pub fn normalize(&self, k_new: &S) -> Result<Self> {
        let ratio = if k_new.is_zero() {
            self.det(None, None)?.sqrt()?
        } else if !self.k.is_zero() {
            self.k.div(k_new)?
        } else if !self.m.is_zero() {
            self.m.div(k_new)?
        } else {
            match self.l.iter().find(|x| !x.is_zero()) {
                Some(x) => x.div(k_new)?,
                None => S::zero(),
            }
        };
        if ratio.is_zero() {
            return Ok(self.clone());
        }
        self.divide(&ratio)
    }

    pub fn normalize_det(&self) -> Result<Self> {
        let d = self.det(None, None)?;
        if d.is_zero() {
            return Ok(self.clone());
        }
        self.normalize(&self.k.div(&d.sqrt()?)?)
    }

    /// Component `i` is `-g_ii l_i / k`; `l` itself when `k = 0`.
    pub fn center(&self, metric: Option<&Frame<S>>) -> Result<Vec<S>> {
        let g = self.frame_or_metric(metric);
        if self.k.is_zero() {
            return Ok(self.l.clone());
        }
        self.l
            .iter()
            .enumerate()
            .map(|(i, li)| Ok((-g.g(i).clone() * li.clone()).div(&self.k)?))
            .collect()
    }

    fn check_dim(&self, o: &Self) -> Result<()> {
        if self.dim() == o.dim() {
            Ok(())
        } else {
            Err(CycleError::Dimension {
                expected: self.dim(),
                got: o.dim(),
            })
        }
    }

    fn zip(&self, o: &Self, f: impl Fn(S, S) -> S) -> Result<Self> {
        self.check_dim(o)?;
        Ok(Cycle {
            k: f(self.k.clone(), o.k.clone()),
            l: self
                .l
                .iter()
                .zip(&o.l)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
            m: f(self.m.clone(), o.m.clone()),
            metric: self.metric.clone(),
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, s: &S) -> Self {
        Cycle {
            k: self.k.clone() * s.clone(),
            l: self.l.iter().map(|x| x.clone() * s.clone()).collect(),
            m: self.m.clone() * s.clone(),
            metric: self.metric.clone(),
        }
    }

    pub fn divide(&self, s: &S) -> Result<Self> {
        Ok(Cycle {
            k: self.k.div(s)?,
            l: self.l.iter().map(|x| x.div(s)).collect::<std::result::Result<_, _>>()?,
            m: self.m.div(s)?,
            metric: self.metric.clone(),
        })
    }

    /// Matrix product with another cycle: `self(e, sign) * other(e, sign1 or sign)`.
    pub fn mul(
        &self,
        other: &Cycle<S>,
        e: Option<&Frame<S>>,
        sign: Option<&SignMatrix<S>>,
        sign1: Option<&SignMatrix<S>>,
    ) -> Result<FsccMatrix<S>> {
        let a = self.to_matrix(e, sign)?;
        let b = other.to_matrix(Some(self.frame_or_metric(e)), sign1.or(sign))?;
        Ok(a.mul(&b)?)
    }

    /// Matrix product `self(e, sign) * m`.
    pub fn mul_matrix(
        &self,
        m: &FsccMatrix<S>,
        e: Option<&Frame<S>>,
        sign: Option<&SignMatrix<S>>,
    ) -> Result<FsccMatrix<S>> {
        Ok(self.to_matrix(e, sign)?.mul(m)?)
    }

    fn from_antisymmetrized(
        &self,
        r: &FsccMatrix<S>,
        e: Option<&Frame<S>>,
        sign: Option<&SignMatrix<S>>,
    ) -> Result<Self> {
        let half = S::from_ratio(1, 2);
        let d = r.get(0, 0).sub(r.get(1, 1))?.scale(&half);
        let a = FsccMatrix::new(d.clone(), r.get(0, 1).clone(), r.get(1, 0).clone(), d.neg())?;
        Cycle::from_matrix(&a, &self.metric, e, sign)
    }

    /// Image under the SL(2) element `(a, b; c, d)`.
    #[allow(clippy::too_many_arguments)]
    pub fn sl2_similarity(
        &self,
        a: &S,
        b: &S,
        c: &S,
        d: &S,
        e: Option<&Frame<S>>,
        sign: Option<&SignMatrix<S>>,
        not_inverse: bool,
    ) -> Result<Self> {
        let f = self.frame_or_metric(e).clone();
        let g = sl2_clifford(a, b, c, d, &f, not_inverse);
        let ginv = sl2_clifford(a, b, c, d, &f, !not_inverse);
        let r = g.mul(&self.mul_matrix(&ginv, e, sign)?)?;
        self.from_antisymmetrized(&r, e, sign)
    }

    /// Similarity `M C M^{-1}` with `M^{-1}` taken as the star adjugate.
    pub fn matrix_similarity(
        &self,
        m: &FsccMatrix<S>,
        e: Option<&Frame<S>>,
        sign: Option<&SignMatrix<S>>,
        not_inverse: bool,
    ) -> Result<Self> {
        let f = self.frame_or_metric(e).clone();
        let m = m.reframe(&f)?;
        let adj = m.star_adjugate();
        let (left, right) = if not_inverse { (m, adj) } else { (adj, m) };
        let r = left.mul(&self.mul_matrix(&right, e, sign)?)?;
        self.from_antisymmetrized(&r, e, sign)
    }

    /// Reflection of `self` in `c`: the cycle of `c self c`.
    pub fn cycle_similarity(
        &self,
        c: &Cycle<S>,
        e: Option<&Frame<S>>,
        sign: Option<&SignMatrix<S>>,
        sign1: Option<&SignMatrix<S>>,
    ) -> Result<Self> {
        let s1 = sign1.or(sign);
        let inner = self.mul(c, e, sign, s1)?;
        let outer = c.mul_matrix(&inner, e, s1)?;
        Cycle::from_matrix(&outer, &self.metric, e, sign)
    }

    /// Möbius map of a point defined by the matrix of the cycle.
    pub fn moebius_map(
        &self,
        x: &[S],
        e: Option<&Frame<S>>,
        sign: Option<&SignMatrix<S>>,
    ) -> Result<Vec<S>> {
        let m = self.to_matrix(e, sign)?;
        Ok(moebius_map(&m, x, self.frame_or_metric(e))?)
    }

    /// Half the scalar part of the trace of the matrix product.
    pub fn inner_product(
        &self,
        c: &Cycle<S>,
        e: Option<&Frame<S>>,
        sign: Option<&SignMatrix<S>>,
    ) -> Result<S> {
        let p = self.mul(c, e, sign, None)?;
        Ok(p.trace()?.scalar_part() * S::from_ratio(1, 2))
    }

    pub fn is_orthogonal(
        &self,
        c: &Cycle<S>,
        e: Option<&Frame<S>>,
        sign: Option<&SignMatrix<S>>,
    ) -> Result<bool> {
        Ok(self.inner_product(c, e, sign)?.is_negligible())
    }

    /// Last `l` component of `c` reflected in `self`; zero means f-orthogonal.
    pub fn f_orthogonality(
        &self,
        c: &Cycle<S>,
        e: Option<&Frame<S>>,
        sign: Option<&SignMatrix<S>>,
    ) -> Result<S> {
        let r = c.cycle_similarity(self, e, sign, None)?;
        Ok(r.l[self.dim() - 1].clone())
    }

    pub fn is_f_orthogonal(
        &self,
        c: &Cycle<S>,
        e: Option<&Frame<S>>,
        sign: Option<&SignMatrix<S>>,
    ) -> Result<bool> {
        Ok(self.f_orthogonality(c, e, sign)?.is_negligible())
    }

    pub fn is_zero(&self) -> bool {
        self.k.is_zero() && self.m.is_zero() && self.l.iter().all(|x| x.is_zero())
    }

    pub fn is_linear(&self) -> bool {
        self.k.is_zero()
    }

    pub fn is_normalized(&self) -> bool {
        self.k == S::one()
    }

    fn components(&self) -> Vec<S> {
        let mut v = vec![self.k.clone()];
        v.extend(self.l.iter().cloned());
        v.push(self.m.clone());
        v
    }

    /// Projective equality: all components are proportional with a nonzero factor.
    pub fn the_same_as(&self, o: &Cycle<S>) -> bool {
        if self.dim() != o.dim() {
            return false;
        }
        let a = self.components();
        let b = o.components();
        if !S::is_exact() {
            return same_direction(&a, &b);
        }
        let pick = |v: &[S]| {
            let order = std::iter::once(0)
                .chain(std::iter::once(v.len() - 1))
                .chain(1..v.len() - 1);
            order.into_iter().find(|&i| !v[i].is_negligible())
        };
        match (pick(&a), pick(&b)) {
            (None, None) => true,
            (Some(i), Some(_)) => {
                let f = a[i].clone();
                let f1 = b[i].clone();
                if f1.is_negligible() {
                    return false;
                }
                a.iter()
                    .zip(&b)
                    .all(|(x, y)| (f1.clone() * x.clone() - f.clone() * y.clone()).is_negligible())
            }
            _ => false,
        }
    }

    /// Lexicographic order of the normalised components `(k, l, m)`.
    pub fn canonical_cmp(&self, o: &Cycle<S>) -> Option<Ordering> {
        let a = self.normalize(&S::one()).ok()?.components();
        let b = o.normalize(&S::one()).ok()?.components();
        for (x, y) in a.iter().zip(&b) {
            match x.compare(y)? {
                Ordering::Equal => continue,
                ord => return Some(ord),
            }
        }
        Some(a.len().cmp(&b.len()))
    }

    /// Default unknowns: `m, l_0, ..., l_{n-1}, k`.
    pub fn default_slots(&self) -> Vec<Slot> {
        let mut v = vec![Slot::M];
        v.extend((0..self.dim()).map(Slot::L));
        v.push(Slot::K);
        v
    }

    /// Solves affine conditions for the listed unknown components.
    ///
    /// Underdetermined systems set the first free unknown to `1` and any
    /// further free unknowns to `0`.
    pub fn subject_to(&self, conds: Vec<Condition<'_, S>>, vars: Option<&[Slot]>) -> Result<Self> {
        let vars: Vec<Slot> = match vars {
            Some(v) => v.to_vec(),
            None => self.default_slots(),
        };
        if vars.is_empty() {
            return Err(CycleError::NoUnknowns);
        }
        let n = vars.len();
        let mut base = self.clone();
        for &s in &vars {
            base = base.set(s, S::zero());
        }
        let probe = |steps: &[(usize, i64)]| -> Cycle<S> {
            let mut c = base.clone();
            for &(i, t) in steps {
                let v = c.slot(vars[i]).clone() + S::from_i64(t);
                c = c.set(vars[i], v);
            }
            c
        };
        let mut rows = Vec::with_capacity(conds.len());
        for (ci, f) in conds.iter().enumerate() {
            let f0 = f(&base)?;
            let mut coeffs = Vec::with_capacity(n + 1);
            for i in 0..n {
                coeffs.push(f(&probe(&[(i, 1)]))? - f0.clone());
            }
            let mut check: Vec<(usize, i64)> = Vec::new();
            let mut expect = f0.clone();
            for (i, c) in coeffs.iter().enumerate() {
                let t = 2 + i as i64;
                check.push((i, t));
                expect = expect + S::from_i64(t) * c.clone();
            }
            let twice = f(&probe(&[(0, 2)]))? - f0.clone() - S::from_i64(2) * coeffs[0].clone();
            if !(f(&probe(&check))? - expect).is_negligible() || !twice.is_negligible() {
                return Err(CycleError::Nonlinear(ci));
            }
            coeffs.push(-f0);
            rows.push(coeffs);
        }
        match solve_affine(rows, n) {
            Solve::Inconsistent => Err(CycleError::Inconsistent),
            Solve::Solved { values, .. } => {
                let mut c = base;
                for (s, v) in vars.iter().zip(values) {
                    c = c.set(*s, v);
                }
                Ok(c)
            }
        }
    }
}

impl<S: Scalar> fmt::Display for Cycle<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, (", self.k)?;
        for (i, x) in self.l.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "), {})", self.m)
    }
}

/// Proportionality of two float vectors after scaling each to unit max norm.
fn same_direction<S: Scalar>(a: &[S], b: &[S]) -> bool {
    let fa: Vec<f64> = a.iter().map(|x| x.to_f64()).collect();
    let fb: Vec<f64> = b.iter().map(|x| x.to_f64()).collect();
    let max = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let (ma, mb) = (max(&fa), max(&fb));
    if ma <= F64_TOL || mb <= F64_TOL {
        return ma <= F64_TOL && mb <= F64_TOL;
    }
    let i = (0..fa.len())
        .max_by(|&i, &j| fa[i].abs().total_cmp(&fa[j].abs()))
        .unwrap_or(0);
    let sign = if (fa[i] > 0.0) == (fb[i] > 0.0) { 1.0 } else { -1.0 };
    fa.iter()
        .zip(&fb)
        .all(|(x, y)| (x / ma - sign * y / mb).abs() <= 1e-6)
}

const F64_TOL: f64 = 1e-300;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    type Q = Rational;

    fn r(n: i64) -> Q {
        rat(n, 1)
    }

    fn plane(s: i64) -> Frame<Q> {
        Frame::plane(r(s))
    }

    fn cyc(k: Q, l: Q, n: Q, m: Q, s: i64) -> Cycle<Q> {
        Cycle::new(k, vec![l, n], m, plane(s)).unwrap()
    }

    #[test]
    fn unit_circle_basics() {
        let c = cyc(r(1), r(0), r(0), r(-1), -1);
        assert!(c.passing(&[r(1), r(0)]).unwrap());
        assert_eq!(c.det(None, None).unwrap(), r(1));
        let p = c.with_metric(&plane(0)).unwrap();
        assert_eq!(p.k(), c.k());
        assert!(Cycle::new(r(1), vec![r(0)], r(0), plane(-1)).is_err());
    }

    #[test]
    fn zero_radius_solves_for_m() {
        let (u, v) = (r(3), r(5));
        for s1 in -1..=1 {
            let es = plane(s1);
            let z = Cycle::zero_radius(vec![u.clone(), v.clone()], &plane(-1), r(0), Some(&es), None)
                .unwrap();
            assert_eq!(z.m(), &(u.clone() * u.clone() - r(s1) * v.clone() * v.clone()));
            for s in -1..=1 {
                let zs = z.with_metric(&plane(s)).unwrap();
                assert_eq!(
                    zs.det(None, None).unwrap(),
                    r(s1) * v.clone() * v.clone() - r(s) * v.clone() * v.clone()
                );
            }
        }
        let unit = Cycle::zero_radius(vec![r(0), r(0)], &plane(-1), r(1), None, None).unwrap();
        assert_eq!(unit, cyc(r(1), r(0), r(0), r(-1), -1));
    }

    #[test]
    fn matrix_round_trip_and_infinity() {
        let c = cyc(r(1), r(0), r(0), r(-1), -1);
        let m = c.to_matrix(None, None).unwrap();
        let back = Cycle::from_matrix(&m, c.metric(), None, None).unwrap();
        assert!(back.the_same_as(&c));
        let f = plane(-1);
        let zinf = FsccMatrix::from_scalars(&f, r(0), r(1), r(0), r(0));
        let z = Cycle::from_matrix(&zinf, &f, None, None).unwrap();
        assert_eq!(z, cyc(r(0), r(0), r(0), r(1), -1));
    }

    #[test]
    fn to_matrix_sign_flips_one_coefficient() {
        let c = cyc(r(2), r(3), r(5), r(7), -1);
        let s = SignMatrix::plane(r(-1));
        let m = c.to_matrix(None, Some(&s)).unwrap();
        assert_eq!(m.get(0, 0).to_vector().unwrap(), vec![r(3), r(-5)]);
        let z = cyc(r(0), r(0), r(0), r(0), 1).to_matrix(None, None).unwrap();
        assert!((0..2).all(|i| (0..2).all(|j| z.get(i, j).is_zero())));
    }

    #[test]
    fn normalisation_follows_branch_order() {
        let c = cyc(r(2), r(2), r(4), r(6), -1);
        assert_eq!(c.normalize(&r(1)).unwrap(), cyc(r(1), r(1), r(2), r(3), -1));
        let line = cyc(r(0), r(0), r(3), r(6), -1);
        assert_eq!(
            line.normalize(&r(1)).unwrap(),
            cyc(r(0), r(0), rat(1, 2), r(1), -1)
        );
        let z = cyc(r(0), r(0), r(0), r(0), -1);
        assert_eq!(z.normalize(&r(1)).unwrap(), z);
    }

    #[test]
    fn centres() {
        let c = cyc(r(1), r(3), r(4), r(0), -1);
        assert_eq!(c.center(None).unwrap(), vec![r(3), r(4)]);
        assert_eq!(c.center(Some(&plane(0))).unwrap(), vec![r(3), r(0)]);
        let line = cyc(r(0), r(2), r(7), r(1), -1);
        assert_eq!(line.center(None).unwrap(), vec![r(2), r(7)]);
    }

    #[test]
    fn linear_structure() {
        let c = cyc(r(2), r(3), r(5), r(7), 1);
        assert!(c.add(&c.scale(&r(-1))).unwrap().is_zero());
        let rl = cyc(r(0), r(0), r(1), r(0), -1);
        assert!(rl.scale(&r(2)).the_same_as(&rl));
        assert!(!rl.the_same_as(&cyc(r(1), r(0), r(0), r(-1), -1)));
        let sq = c.mul(&c, None, None, None).unwrap();
        let d = c.det_with(None, None, &r(0)).unwrap();
        assert_eq!(sq, FsccMatrix::from_scalars(c.metric(), -d.clone(), r(0), r(0), -d));
    }

    #[test]
    fn same_as_examples() {
        assert!(cyc(r(1), r(1), r(2), r(3), -1).the_same_as(&cyc(r(2), r(2), r(4), r(6), -1)));
        assert!(cyc(r(0), r(0), r(0), r(5), -1).the_same_as(&cyc(r(0), r(0), r(0), r(7), -1)));
        assert!(!cyc(r(0), r(0), r(0), r(5), -1).the_same_as(&cyc(r(1), r(0), r(0), r(5), -1)));
        assert!(!cyc(r(1), r(0), r(0), r(5), -1).the_same_as(&cyc(r(0), r(0), r(0), r(0), -1)));
    }

    #[test]
    fn three_point_circle() {
        let c = cyc(r(1), r(0), r(0), r(0), -1);
        let pts = [[r(0), r(0)], [r(2), r(0)], [r(0), r(2)]];
        let conds: Vec<Condition<Q>> = pts
            .iter()
            .map(|p| {
                let p = p.to_vec();
                Box::new(move |c: &Cycle<Q>| c.val(&p)) as Condition<Q>
            })
            .collect();
        let s = c
            .subject_to(conds, Some(&[Slot::M, Slot::L(0), Slot::L(1)]))
            .unwrap();
        assert_eq!(s, cyc(r(1), r(1), r(1), r(0), -1));
    }

    #[test]
    fn nonlinear_conditions_are_rejected() {
        let c = cyc(r(1), r(0), r(0), r(0), -1);
        let conds: Vec<Condition<Q>> = vec![Box::new(|c: &Cycle<Q>| Ok(c.m().clone() * c.m().clone()))];
        assert_eq!(
            c.subject_to(conds, Some(&[Slot::M])),
            Err(CycleError::Nonlinear(0))
        );
    }

    #[test]
    fn self_reflection_is_identity() {
        let c = cyc(r(2), r(3), r(-1), r(4), -1);
        let s = c.cycle_similarity(&c, None, None, None).unwrap();
        assert!(s.the_same_as(&c));
    }

    #[test]
    fn identity_similarity() {
        let c = cyc(r(2), r(3), r(-1), r(4), 0);
        let s = c
            .sl2_similarity(&r(1), &r(0), &r(0), &r(1), None, None, true)
            .unwrap();
        assert!(s.the_same_as(&c));
    }
}
