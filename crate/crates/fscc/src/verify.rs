//! Replay of the identity checks at random rational points.
//!
//! Each check is a polynomial (or rational) identity in the cycle and point
//! parameters. Signatures are enumerated exhaustively and the remaining
//! parameters are drawn at random, so an identity that fails somewhere is
//! caught with overwhelming probability.

use std::cell::Cell;
use std::fmt;
use std::time::Instant;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::clifford::{moebius_map, sl2_clifford, Frame, FsccMatrix, Multivector};
use crate::cycle::{Condition, Cycle, CycleError, Result, SignMatrix, Slot};
use crate::cycle2d::Cycle2D;
use crate::scalar::{jump, Jet, Rational, Scalar, DEFAULT_ORDER};

/// Scalars the checks can run over: equality is exact for rationals and
/// relative for floats.
pub trait Ring: Scalar {
    fn close(&self, other: &Self) -> bool;
}

impl Ring for Rational {
    fn close(&self, other: &Self) -> bool {
        self == other
    }
}

thread_local! {
    /// Largest magnitude (or reciprocal magnitude) among the current tuple's
    /// draws; float tolerances grow with its fourth power.
    static FLOAT_SCALE: Cell<f64> = const { Cell::new(1.0) };
}

impl Ring for f64 {
    fn close(&self, other: &Self) -> bool {
        let m = FLOAT_SCALE.with(|c| c.get());
        let tol = (1e-9 * m.powi(4)).max(1e-6) * (1.0 + self.abs() + other.abs());
        (self - other).abs() <= tol
    }
}

impl<S: Ring> Ring for Jet<S> {
    fn close(&self, other: &Self) -> bool {
        let t = match (self.order(), other.order()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => DEFAULT_ORDER,
        };
        (0..=t).all(|i| match (self.coeff(i), other.coeff(i)) {
            (Ok(a), Ok(b)) => a.close(&b),
            _ => false,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
}

/// Which scalar ring evaluates the checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    #[default]
    Rational,
    Float,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub seed: u64,
    /// Random tuples per signature combination.
    pub tuples: usize,
    pub scalar: ScalarKind,
    /// Degenerate draws tolerated per signature combination.
    pub max_rejects: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 1,
            tuples: 20,
            scalar: ScalarKind::Rational,
            max_rejects: 200,
        }
    }
}

/// A binding of signature symbols, e.g. `s=-1 s1=0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sig(Vec<(&'static str, i64)>);

impl Sig {
    pub fn get(&self, name: &str) -> i64 {
        self.0
            .iter()
            .find(|(n, _)| *n == name)
            .map(|p| p.1)
            .unwrap_or(0)
    }

    fn val<S: Scalar>(&self, name: &str) -> S {
        S::from_i64(self.get(name))
    }
}

impl fmt::Display for Sig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(n, v)| format!("{n}={v}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Cartesian product of the listed value ranges.
fn grid(axes: &[(&'static str, &[i64])]) -> Vec<Sig> {
    let mut out = vec![Sig(vec![])];
    for (name, vals) in axes {
        let mut next = Vec::new();
        for s in &out {
            for v in *vals {
                let mut t = s.0.clone();
                t.push((name, *v));
                next.push(Sig(t));
            }
        }
        out = next;
    }
    out
}

const EPH: &[i64] = &[-1, 0, 1];
const PM: &[i64] = &[-1, 1];

/// Seeded source of small random rationals; every draw is logged so a
/// failing tuple can be reported.
pub struct Gen {
    rng: ChaCha8Rng,
    log: Vec<(&'static str, Rational)>,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            log: Vec::new(),
        }
    }

    fn draw(&mut self, name: &'static str, lo: i64) -> Rational {
        let n = loop {
            let n = self.rng.gen_range(-99..=99i64);
            if n >= lo {
                break n;
            }
        };
        let d = self.rng.gen_range(1..=99i64);
        let q = Rational::new(n.into(), d.into());
        if n != 0 {
            let x = (n as f64 / d as f64).abs();
            FLOAT_SCALE.with(|c| c.set(c.get().max(x).max(1.0 / x)));
        }
        self.log.push((name, q.clone()));
        q
    }

    /// Numerator in `[-99, 99]`, denominator in `[1, 99]`.
    pub fn rational(&mut self, name: &'static str) -> Rational {
        self.draw(name, -99)
    }

    pub fn nonzero_rational(&mut self, name: &'static str) -> Rational {
        loop {
            let q = self.draw(name, -99);
            if q != Rational::from_integer(0.into()) {
                return q;
            }
            self.log.pop();
        }
    }

    pub fn q<S: Scalar>(&mut self, name: &'static str) -> S {
        lift(&self.rational(name))
    }

    pub fn nz<S: Scalar>(&mut self, name: &'static str) -> S {
        lift(&self.nonzero_rational(name))
    }

    pub fn pos<S: Scalar>(&mut self, name: &'static str) -> S {
        lift(&self.draw(name, 1))
    }

    fn clear(&mut self) {
        self.log.clear();
        FLOAT_SCALE.with(|c| c.set(1.0));
    }

    fn describe(&self) -> Vec<(String, String)> {
        self.log
            .iter()
            .map(|(n, v)| (n.to_string(), v.to_string()))
            .collect()
    }
}

/// Converts a small rational into any scalar ring.
pub fn lift<S: Scalar>(q: &Rational) -> S {
    S::from_ratio(
        q.numer().to_i64().expect("small numerator"),
        q.denom().to_i64().expect("small denominator"),
    )
}

// ---------------------------------------------------------------------------
// shared constructions

fn plane<S: Scalar>(s: S) -> Frame<S> {
    Frame::plane(s)
}

fn frame2<S: Scalar>(a: S, b: S) -> Result<Frame<S>> {
    Ok(Frame::new(vec![a, b])?)
}

fn signs<S: Scalar>(a: S, b: S) -> SignMatrix<S> {
    SignMatrix::new(vec![a, b])
}

fn half<S: Scalar>() -> S {
    S::from_ratio(1, 2)
}

fn two<S: Scalar>() -> S {
    S::from_i64(2)
}

fn cyc<S: Scalar>(k: S, l: S, n: S, m: S, f: &Frame<S>) -> Result<Cycle<S>> {
    Cycle::new(k, vec![l, n], m, f.clone())
}

/// A cycle with random parameters; names get the given suffix.
fn generic<S: Scalar>(g: &mut Gen, f: &Frame<S>, tilde: bool) -> Result<Cycle<S>> {
    let names = if tilde {
        ["k~", "l~", "n~", "m~"]
    } else {
        ["k", "l", "n", "m"]
    };
    let k = g.nz(names[0]);
    let l = g.q(names[1]);
    let n = g.q(names[2]);
    let m = g.q(names[3]);
    cyc(k, l, n, m, f)
}

/// A cycle whose real roots `k x^2 - 2 l x + m = 0` are rational.
fn with_rational_roots<S: Scalar>(g: &mut Gen, f: &Frame<S>) -> Result<Cycle<S>> {
    let k: S = g.nz("k");
    let l: S = g.q("l");
    let n: S = g.q("n");
    let r: S = g.q("r");
    let m = (l.clone() * l.clone() - r.clone() * r).div(&k)?;
    cyc(k, l, n, m, f)
}

fn point<S: Scalar>(g: &mut Gen, u: &'static str, v: &'static str) -> Vec<S> {
    vec![g.q(u), g.q(v)]
}

fn zero_radius<S: Scalar>(
    l: Vec<S>,
    f: &Frame<S>,
    r2: S,
    e: Option<&Frame<S>>,
    sign: Option<&SignMatrix<S>>,
) -> Result<Cycle<S>> {
    Cycle::zero_radius(l, f, r2, e, sign)
}

fn real_line<S: Scalar>(f: &Frame<S>) -> Result<Cycle<S>> {
    cyc(S::zero(), S::zero(), S::one(), S::zero(), f)
}

fn passing<'a, S: Scalar>(w: &[S]) -> Condition<'a, S> {
    let w = w.to_vec();
    Box::new(move |c: &Cycle<S>| c.val(&w))
}

fn is_linear<'a, S: Scalar>() -> Condition<'a, S> {
    Box::new(|c: &Cycle<S>| Ok(c.k().clone()))
}

#[derive(Debug, Clone)]
struct Sl2<S> {
    a: S,
    b: S,
    c: S,
    d: S,
}

/// Random SL(2) element with `a = (1 + b c) / d`.
fn sl2<S: Scalar>(g: &mut Gen) -> Result<Sl2<S>> {
    let b: S = g.q("b");
    let c: S = g.q("c");
    let d: S = g.nz("d");
    let a = (S::one() + b.clone() * c.clone()).div(&d)?;
    Ok(Sl2 { a, b, c, d })
}

impl<S: Scalar> Sl2<S> {
    fn map(&self, w: &[S], f: &Frame<S>) -> Result<Vec<S>> {
        let m = sl2_clifford(&self.a, &self.b, &self.c, &self.d, f, true);
        Ok(moebius_map(&m, w, f)?)
    }

    fn conj(&self, c: &Cycle<S>, e: Option<&Frame<S>>, s: Option<&SignMatrix<S>>) -> Result<Cycle<S>> {
        c.sl2_similarity(&self.a, &self.b, &self.c, &self.d, e, s, true)
    }

    fn lift<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Sl2<T> {
        Sl2 {
            a: f(&self.a),
            b: f(&self.b),
            c: f(&self.c),
            d: f(&self.d),
        }
    }
}

fn is0<S: Ring>(x: &S) -> bool {
    x.close(&S::zero())
}

fn all_close<S: Ring>(a: &[S], b: &[S]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.close(y))
}

fn cycle_close<S: Ring>(a: &Cycle<S>, b: &Cycle<S>) -> bool {
    a.k().close(b.k()) && a.m().close(b.m()) && all_close(a.l(), b.l())
}

fn first_root<S: Scalar>(c: &Cycle<S>, y: &S, first: bool) -> Result<S> {
    Cycle2D::from_cycle(c.clone())?
        .roots(y, first)?
        .into_iter()
        .next()
        .ok_or(CycleError::Domain("no real root"))
}

fn roots_at_axis<S: Scalar>(c: &Cycle<S>) -> Result<Vec<S>> {
    let r = Cycle2D::from_cycle(c.clone())?.roots(&S::zero(), true)?;
    if r.is_empty() {
        return Err(CycleError::Domain("no real root"));
    }
    Ok(r)
}

fn focus<S: Scalar>(c: &Cycle<S>, e: Option<&Frame<S>>) -> Result<[S; 2]> {
    Cycle2D::from_cycle(c.clone())?.focus(e)
}

/// Failure of an overdetermined solve is a verdict, not a degenerate draw.
fn solved<S: Scalar>(r: Result<Cycle<S>>) -> Result<Option<Cycle<S>>> {
    match r {
        Ok(c) => Ok(Some(c)),
        Err(CycleError::Inconsistent) => Ok(None),
        Err(e) => Err(e),
    }
}

fn coeff<S: Scalar>(x: &Jet<S>, i: usize) -> Result<S> {
    Ok(x.coeff(i)?)
}

fn jet<S: Scalar>(x: &S) -> Jet<S> {
    Jet::constant(x.clone())
}

fn jets<S: Scalar>(x: &[S]) -> Vec<Jet<S>> {
    x.iter().map(jet).collect()
}

fn jet_cycle<S: Scalar>(c: &Cycle<S>, f: &Frame<Jet<S>>) -> Result<Cycle<Jet<S>>> {
    Cycle::new(jet(c.k()), jets(c.l()), jet(c.m()), f.clone())
}

// ---------------------------------------------------------------------------
// distances and lengths

/// The cycle `(1, (l, n), m)` through `w` and `w1` for the given `l`.
fn two_point_cycle<S: Scalar>(w: &[S], w1: &[S], l: S, e: &Frame<S>) -> Result<Cycle<S>> {
    cyc(S::one(), l, S::zero(), S::zero(), e)?
        .subject_to(vec![passing(w), passing(w1)], Some(&[Slot::M, Slot::L(1)]))
}

/// Extremal value of `4 det` over the pencil of cycles through `w` and `w1`
/// together with the extremal cycle. In the parabolic point space the value
/// is taken at `l = (u + u') / 2`.
pub fn distance_cycle<S: Scalar>(w: &[S], w1: &[S], sigma: &S, sigma1: &S) -> Result<(S, Cycle<S>)> {
    let e = plane(sigma.clone());
    let es = plane(sigma1.clone());
    let four = S::from_i64(4);
    let d_at = |l: S| -> Result<(S, Cycle<S>)> {
        let c = two_point_cycle(w, w1, l, &e)?;
        Ok((four.clone() * c.det(Some(&es), None)?, c))
    };
    if sigma.is_zero() {
        return d_at((w[0].clone() + w1[0].clone()) * half());
    }
    // D(l) = A l^2 + B l + C is quadratic; D'(l) = 0 at l = -B / 2A
    let (d0, _) = d_at(S::zero())?;
    let (d1, _) = d_at(S::one())?;
    let (d2, _) = d_at(two())?;
    let a = (d2 - two::<S>() * d1.clone() + d0.clone()) * half();
    let b = d1 - d0 - a.clone();
    let l = (-b).div(&(two::<S>() * a))?;
    d_at(l)
}

pub fn distance<S: Scalar>(w: &[S], w1: &[S], sigma: &S, sigma1: &S) -> Result<S> {
    Ok(distance_cycle(w, w1, sigma, sigma1)?.0)
}

/// Closed form of the distance in elliptic and hyperbolic point spaces.
pub fn distance_closed_form<S: Scalar>(w: &[S], w1: &[S], s: &S, s1: &S) -> Result<S> {
    let du = w[0].clone() - w1[0].clone();
    let dv = w[1].clone() - w1[1].clone();
    let q = du.clone() * du.clone() - s.clone() * dv.clone() * dv.clone();
    let num = (s1.clone() * q.clone()
        + S::from_i64(4) * (S::one() - s.clone() * s1.clone()) * w[1].clone() * w1[1].clone())
        * q;
    let den = du.clone() * du * s1.clone() - dv.clone() * dv;
    Ok(num.div(&den)?)
}

/// The cycle with centre `w` (first coordinate in the point metric, second
/// in `diag(-1, sigma4)`) passing through `w1`, and its determinant in the
/// cycle metric.
pub fn length_center_cycle<S: Scalar>(
    w: &[S],
    w1: &[S],
    sigma: &S,
    sigma1: &S,
    sigma4: &S,
) -> Result<(S, Cycle<S>)> {
    let e = plane(sigma.clone());
    let n = (-w[1].clone()).div(sigma4)?;
    let c = cyc(S::one(), w[0].clone(), n, S::zero(), &e)?
        .subject_to(vec![passing(w1)], Some(&[Slot::M]))?;
    Ok((c.det(Some(&plane(sigma1.clone())), None)?, c))
}

pub fn length_center<S: Scalar>(w: &[S], w1: &[S], sigma: &S, sigma1: &S, sigma4: &S) -> Result<S> {
    Ok(length_center_cycle(w, w1, sigma, sigma1, sigma4)?.0)
}

/// Value of the focal parameter `p` for the cycle with focus at `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FocusBranch {
    /// `s4 (-(v' - v) + sqrt(s4 (u' - u)^2 + (v' - v)^2 - s4 s v'^2))`
    Plus,
    /// As `Plus` with the other sign of the root.
    Minus,
    /// `((u' - u)^2 - s v'^2) / (2 (v' - v))`, the `s4 = 0` case.
    Rational,
}

pub fn focal_parameter<S: Scalar>(w: &[S], w1: &[S], sigma: &S, sigma4: &S, b: FocusBranch) -> Result<S> {
    let du = w1[0].clone() - w[0].clone();
    let dv = w1[1].clone() - w[1].clone();
    let v1 = w1[1].clone();
    match b {
        FocusBranch::Rational => {
            Ok((du.clone() * du - sigma.clone() * v1.clone() * v1).div(&(two::<S>() * dv))?)
        }
        FocusBranch::Plus | FocusBranch::Minus => {
            let arg = sigma4.clone() * du.clone() * du + dv.clone() * dv.clone()
                - sigma4.clone() * sigma.clone() * v1.clone() * v1;
            let r = arg.sqrt()?;
            let r = if b == FocusBranch::Plus { r } else { -r };
            Ok(sigma4.clone() * (-dv + r))
        }
    }
}

/// The cycle `(1, (u, p), m)` through `w1` and its determinant in the cycle
/// metric.
pub fn length_focus_cycle<S: Scalar>(
    w: &[S],
    w1: &[S],
    sigma: &S,
    sigma1: &S,
    p: &S,
) -> Result<(S, Cycle<S>)> {
    let e = plane(sigma.clone());
    let c = cyc(S::one(), w[0].clone(), p.clone(), S::zero(), &e)?
        .subject_to(vec![passing(w1)], Some(&[Slot::M]))?;
    Ok((c.det(Some(&plane(sigma1.clone())), None)?, c))
}

pub fn length_focus<S: Scalar>(
    w: &[S],
    w1: &[S],
    sigma: &S,
    sigma1: &S,
    sigma4: &S,
    b: FocusBranch,
) -> Result<S> {
    let p = focal_parameter(w, w1, sigma, sigma4, b)?;
    Ok(length_focus_cycle(w, w1, sigma, sigma1, &p)?.0)
}

/// `(l_1 + s k v', l_0 - k u')`.
pub fn perpendicular<S: Scalar>(c: &Cycle<S>, w1: &[S], sigma: &S) -> [S; 2] {
    [
        c.l_at(1).clone() + sigma.clone() * c.k().clone() * w1[1].clone(),
        c.l_at(0).clone() - c.k().clone() * w1[0].clone(),
    ]
}

/// Cycle of squared radius `-eps^2` with focus `(u, v_p)` in the metric
/// `diag(-1, sigma4)`: `(1, (u, n), u^2 + 2 n v_p - n^2 sigma4)` with `n` the
/// root of `(sigma4 - sigma1) n^2 - 2 v_p n + eps^2 = 0` vanishing with `eps`.
pub fn infinitesimal_cycle<S: Scalar>(
    u: &S,
    vp: &S,
    eps: &Jet<S>,
    sigma: &S,
    sigma1: &S,
    sigma4: &S,
) -> Result<Cycle2D<Jet<S>>> {
    let (u, vp) = (jet(u), jet(vp));
    let e2 = eps.clone() * eps.clone();
    let ds = jet(&(sigma4.clone() - sigma1.clone()));
    // small root written as eps^2 / (v_p + sgn(v_p) sqrt(v_p^2 - eps^2 ds))
    let root = (vp.clone() * vp.clone() - e2.clone() * ds).sqrt()?;
    let n = e2.div(&(vp.clone() + jump(&vp) * root))?;
    let m = u.clone() * u.clone() + two::<Jet<S>>() * n.clone() * vp
        - n.clone() * n.clone() * jet(sigma4);
    Cycle2D::new(Jet::one(), u, n, m, plane(jet(sigma)))
}

// ---------------------------------------------------------------------------
// catalog

type Outcome = Vec<(&'static str, bool)>;
type Body = fn(&Sig, &mut Gen) -> Result<Outcome>;

struct Entry {
    name: &'static str,
    line: &'static str,
    domain: fn() -> Vec<Sig>,
    exact: Body,
    float: Body,
}

macro_rules! entry {
    ($name:literal, $line:literal, $domain:expr, $f:ident) => {
        Entry {
            name: $name,
            line: $line,
            domain: $domain,
            exact: $f::<Rational>,
            float: $f::<f64>,
        }
    };
}

fn catalog() -> Vec<Entry> {
    vec![
        entry!(
            "moebius_conj_cycle",
            "Conjugation of a cycle comes through Moebius transformation",
            || grid(&[("s", EPH), ("s1", EPH), ("s2", PM)]),
            moebius_conj_cycle
        ),
        entry!(
            "k_orbit",
            "A K-orbit is preserved, and passing (0, t)",
            || grid(&[("s", EPH)]),
            k_orbit
        ),
        entry!(
            "zr_basics",
            "Determinant, focus, centre and focal length of zero-radius cycle",
            || grid(&[("s", EPH), ("s1", EPH), ("s2", PM)]),
            zr_basics
        ),
        entry!(
            "zr_moebius",
            "The centre of the Moebius transformed zero-radius cycle is -equal-",
            || grid(&[("s", EPH), ("s1", EPH), ("s2", PM)]),
            zr_moebius
        ),
        entry!(
            "zr_conjugation",
            "The centre of the conjugated zero-radius cycle coinsides with Moebius tr",
            || grid(&[("s", EPH), ("s2", PM), ("s3", PM)]),
            zr_conjugation
        ),
        entry!(
            "ortho_formulas",
            "The orthogonality is ~n n s1 + ~k m/2 - l ~l + ~m k/2",
            || grid(&[("s", EPH), ("s1", EPH), ("s2", PM)]),
            ortho_formulas
        ),
        entry!(
            "ortho_two_points",
            "Cycle through two points orthogonal to C is possible and unique if denominator is not zero",
            || grid(&[("s", EPH), ("s1", EPH)]),
            ortho_two_points
        ),
        entry!(
            "ortho_inverse_point",
            "Orthogonal cycle passes through the transformed point",
            || grid(&[("s", EPH), ("s1", EPH)]),
            ortho_inverse_point
        ),
        entry!(
            "ortho_line_pencil",
            "All lines come through the point (l/k, -n s1/k)",
            || grid(&[("s", EPH), ("s1", EPH)]),
            ortho_line_pencil
        ),
        entry!(
            "ghost_cycle",
            "Inversion in (C5, sign) coincides with inversion in (C, sign1)",
            || grid(&[("s", EPH), ("s1", EPH)]),
            ghost_cycle
        ),
        entry!(
            "reflect_real_line",
            "Conjugation of the real line is the cycle C",
            || grid(&[("s", EPH), ("s1", PM), ("si", PM)]),
            reflect_real_line
        ),
        entry!(
            "yaglom",
            "Yaglom inversion of the second kind is three reflections in the cycles",
            || grid(&[("s", &[0])]),
            yaglom
        ),
        entry!(
            "real_line_invariant",
            "The real line is Moebius invariant; reflections in and of the real line",
            || grid(&[("s", EPH), ("s1", EPH), ("s2", PM), ("s3", PM)]),
            real_line_invariant
        ),
        entry!(
            "f_ortho_formulas",
            "The f-orthogonality is n ~m k - 2 l ~l n + ~n n^2 s1 - ~n m k + ~n l^2 + ~k m n",
            || grid(&[("s", EPH), ("s1", EPH), ("s2", PM)]),
            f_ortho_formulas
        ),
        entry!(
            "f_ortho_focus_pencil",
            "All lines come through the focus related to the cycle metric",
            || grid(&[("s", EPH), ("s1", EPH), ("s2", PM)]),
            f_ortho_focus_pencil
        ),
        entry!(
            "s_inversion",
            "s-Inversion in C coincides with inversion in C8",
            || grid(&[("s", EPH), ("s1", PM), ("s2", PM)]),
            s_inversion
        ),
        entry!(
            "distance_formula",
            "Distance between (u,v) and (u',v') is the extremal value of diameters",
            || grid(&[("s", PM), ("s1", EPH)]),
            distance_formula
        ),
        entry!(
            "distance_parabolic_midpoint",
            "Value at the middle point (parabolic point space) is (u - u')^2",
            || grid(&[("s", &[0]), ("s1", EPH)]),
            distance_parabolic_midpoint
        ),
        entry!(
            "distance_equal_heights",
            "Distance between (u,v) and (u',v'): value at critical point",
            || grid(&[("s", EPH), ("s1", PM)]),
            distance_equal_heights
        ),
        entry!(
            "length_center",
            "Length from centre between (u,v) and (u',v')",
            || grid(&[("s", EPH), ("s1", EPH), ("s4", PM)]),
            length_center_check
        ),
        entry!(
            "length_focus",
            "Length between (u,v) and (u',v') is equal to (s4 - s1) p^2 - 2 v p",
            || {
                let mut d = grid(&[("s", EPH), ("s1", EPH), ("s4", PM), ("br", PM)]);
                d.extend(grid(&[("s", EPH), ("s1", EPH), ("s4", &[0]), ("br", &[0])]));
                d
            },
            length_focus_check
        ),
        entry!(
            "perpendiculars",
            "Perpendicular to ((u,v); (u',v'))",
            || grid(&[("s", EPH), ("s1", EPH), ("s4", PM)]),
            perpendiculars
        ),
        entry!(
            "inf_cycle_det",
            "Square of radius of the infinitesimal cycle is -eps^2",
            || grid(&[("s", EPH), ("s1", EPH), ("s4", EPH)]),
            inf_cycle_det
        ),
        entry!(
            "inf_cycle_focus",
            "Focus of infinitesimal cycle is (u, v_p); focal length eps^2/(4 v_p)",
            || grid(&[("s", EPH), ("s1", EPH), ("s4", EPH)]),
            inf_cycle_focus
        ),
        entry!(
            "inf_cycle_similarity",
            "Images of the infinitesimal cycle have radius squared O(eps^2)",
            || grid(&[("s", EPH), ("s1", EPH), ("s4", EPH)]),
            inf_cycle_similarity
        ),
        entry!(
            "inf_cycle_focus_displacement",
            "Focus of the transformed cycle is from transformation of focus",
            || grid(&[("s", &[0]), ("s1", EPH), ("s4", EPH)]),
            inf_cycle_focus_displacement
        ),
        entry!(
            "inf_cycle_ortho",
            "Orthogonality (leading term) to infinitesimal cycle is m/2 + u^2 k/2 - l u",
            || grid(&[("s", EPH), ("s1", EPH), ("s4", EPH)]),
            inf_cycle_ortho
        ),
        entry!(
            "inf_cycle_f_ortho",
            "f-orthogonality of infinitesimal cycle to other",
            || grid(&[("s", EPH), ("s1", EPH), ("s4", EPH)]),
            inf_cycle_f_ortho
        ),
        entry!(
            "cayley_inf",
            "Cayley transform of infinitesimal cycle",
            || grid(&[("s", &[0]), ("s1", EPH), ("s4", EPH)]),
            cayley_inf
        ),
    ]
}

/// Names of all checks, in catalog order.
pub fn check_names() -> Vec<&'static str> {
    catalog().iter().map(|e| e.name).collect()
}

// ---------------------------------------------------------------------------
// check bodies

fn moebius_conj_cycle<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let e = plane(sig.val::<S>("s"));
    let es = plane(sig.val::<S>("s1"));
    let s2 = signs(S::one(), jump(&sig.val::<S>("s2")));
    let c = generic(g, &e, false)?;
    let w = point(g, "u", "v");
    let c2 = c.subject_to(vec![passing(&w)], Some(&[Slot::M]))?;
    let t = sl2(g)?;
    let gw = t.map(&w, &e)?;
    let img = t.conj(&c2, Some(&es), Some(&s2))?;
    Ok(vec![("gCg^-1 passes through gW", is0(&img.val(&gw)?))])
}

fn k_orbit<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let s = sig.val::<S>("s");
    let e = plane(s.clone());
    let t: S = g.nz("t");
    // rational point (cos x, sin x) on the unit circle
    let q: S = g.q("q");
    let den = S::one() + q.clone() * q.clone();
    let cos = (S::one() - q.clone() * q.clone()).div(&den)?;
    let sin = (two::<S>() * q).div(&den)?;
    let n = (t.inv()? - s * t.clone()) * half();
    let c2 = cyc(S::one(), S::zero(), n, S::one(), &e)?;
    let img = c2.sl2_similarity(&cos, &sin, &-sin.clone(), &cos, Some(&e), None, true)?;
    Ok(vec![
        ("K-orbit is preserved", cycle_close(&img, &c2)),
        ("passes (0, t)", is0(&c2.val(&[S::zero(), t])?)),
    ])
}

fn zr_basics<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let (s, s1) = (sig.val::<S>("s"), sig.val::<S>("s1"));
    let e = plane(s.clone());
    let es = plane(s1.clone());
    let s2 = signs(S::one(), jump(&sig.val::<S>("s2")));
    let u: S = g.q("u");
    let v: S = g.nz("v");
    let z1 = zero_radius(vec![u.clone(), v.clone()], &e, S::zero(), Some(&es), None)?;
    let v2 = v.clone() * v.clone();
    let f = focus(&z1, Some(&e))?;
    Ok(vec![
        (
            "det(e, S2) = s1 v^2 - s v^2",
            z1.det(Some(&e), Some(&s2))?.close(&(s1.clone() * v2.clone() - s.clone() * v2)),
        ),
        (
            "focus = (u, s v/2 - s1 v/2)",
            all_close(&f, &[u.clone(), (s.clone() - s1) * v.clone() * half()]),
        ),
        ("centre = (u, -s v)", all_close(&z1.center(Some(&e))?, &[u, -s * v.clone()])),
        (
            "focal length = v/2",
            Cycle2D::from_cycle(z1)?.focal_length()?.close(&(v * half())),
        ),
    ])
}

fn zr_moebius<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let e = plane(sig.val::<S>("s"));
    let es = plane(sig.val::<S>("s1"));
    let s2 = signs(S::one(), jump(&sig.val::<S>("s2")));
    let w = point::<S>(g, "u", "v");
    let t = sl2(g)?;
    let z1 = zero_radius(w.clone(), &e, S::zero(), Some(&es), None)?;
    let c2 = t.conj(&z1, Some(&e), Some(&s2))?;
    let z = zero_radius(w.clone(), &e, S::zero(), None, None)?;
    let c3 = t.conj(&z, Some(&e), Some(&s2))?;
    let gw = t.map(&w, &e)?;
    let k = c3.k().clone();
    Ok(vec![
        ("image of Z1 has zero radius", is0(&c2.det(Some(&es), Some(&s2))?)),
        ("u2 K - L0 = 0", (gw[0].clone() * k.clone()).close(c3.l_at(0))),
        ("v2 K - L1 = 0", (gw[1].clone() * k).close(c3.l_at(1))),
    ])
}

fn zr_conjugation<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let e = plane(sig.val::<S>("s"));
    let s2 = signs(S::one(), jump(&sig.val::<S>("s2")));
    let s3 = signs(S::one(), jump(&sig.val::<S>("s3")));
    let c = generic(g, &e, false)?;
    let w = point::<S>(g, "u", "v");
    let z = zero_radius(w.clone(), &e, S::zero(), None, None)?;
    let c2 = z.cycle_similarity(&c, Some(&e), Some(&s2), Some(&s3))?;
    let p = c.moebius_map(&w, Some(&e), Some(&s2.mul(&s3)))?;
    let k = c2.k().clone();
    Ok(vec![
        ("image has zero radius", is0(&c2.det(Some(&e), Some(&s2))?)),
        ("u2 K - L0 = 0", (p[0].clone() * k.clone()).close(c2.l_at(0))),
        ("v2 K - L1 = 0", (p[1].clone() * k).close(c2.l_at(1))),
    ])
}

fn ortho_formulas<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let (s, s1) = (sig.val::<S>("s"), sig.val::<S>("s1"));
    let chi2 = jump(&sig.val::<S>("s2"));
    let e = plane(s.clone());
    let es = plane(s1.clone());
    let s2 = signs(S::one(), chi2.clone());
    let c = generic(g, &e, false)?;
    let c1 = generic(g, &e, true)?;
    let (k, l, n, m) = (c.k().clone(), c.l_at(0).clone(), c.l_at(1).clone(), c.m().clone());
    let (k1, l1, n1, m1) = (c1.k().clone(), c1.l_at(0).clone(), c1.l_at(1).clone(), c1.m().clone());
    let h = half::<S>();

    let generic_val = c.inner_product(&c1, Some(&es), Some(&s2))?;
    let expect = n1.clone() * n.clone() * s1.clone() + k1 * m.clone() * h.clone() - l.clone() * l1.clone()
        + m1 * k.clone() * h.clone();

    let lines = c
        .set(Slot::K, S::zero())
        .inner_product(&c1.set(Slot::K, S::zero()), Some(&es), Some(&s2))?;
    let expect_lines = n1 * n.clone() * s1.clone() - l.clone() * l1;

    let (u, v) = (g.q::<S>("u"), g.q::<S>("v"));
    let z = zero_radius(vec![u.clone(), v.clone()], &e, S::zero(), None, None)?;
    let zr = c.inner_product(&z, Some(&es), None)?;
    let expect_zr = -s * v.clone() * v.clone() * k.clone() * h.clone() + v.clone() * n * s1.clone()
        + m * h.clone()
        + u.clone() * u.clone() * k * h.clone()
        - l * u.clone();

    let (u1, v1) = (g.q::<S>("u'"), g.q::<S>("v'"));
    let z1 = zero_radius(vec![u.clone(), v.clone()], &e, S::zero(), Some(&es), None)?;
    let sq = frame2(S::one(), chi2.clone())?;
    let c2 = zero_radius(vec![u1.clone(), v1.clone()], &e, S::zero(), Some(&sq), None)?;
    let zz = c2.inner_product(&z1, Some(&es), None)?;
    let expect_zz = -u.clone() * u1.clone() - chi2 * v1.clone() * v1.clone() * h.clone()
        + u.clone() * u * h.clone()
        - u1.clone() * u1 * h.clone()
        + v1 * v.clone() * s1.clone()
        - v.clone() * v * s1 * h;

    Ok(vec![
        ("generic cycles", generic_val.close(&expect)),
        ("two lines", lines.close(&expect_lines)),
        ("cycle and zero-radius cycle", zr.close(&expect_zr)),
        ("two zero-radius cycles", zz.close(&expect_zz)),
    ])
}

fn ortho_two_points<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let (s, s1) = (sig.val::<S>("s"), sig.val::<S>("s1"));
    let e = plane(s.clone());
    let es = plane(s1.clone());
    let c = generic(g, &e, false)?;
    let c1 = generic(g, &e, true)?;
    let w = point::<S>(g, "u", "v");
    let w1 = point::<S>(g, "u'", "v'");
    let (k, l, n, m) = (c.k().clone(), c.l_at(0).clone(), c.l_at(1).clone(), c.m().clone());
    let (u, v, u1, v1) = (w[0].clone(), w[1].clone(), w1[0].clone(), w1[1].clone());
    let den = -u1.clone() * u1.clone() * l.clone() + u1.clone() * u1.clone() * u.clone() * k.clone()
        + s.clone() * l.clone() * v1.clone() * v1.clone()
        - u1.clone() * u.clone() * u.clone() * k.clone()
        + u1.clone() * v.clone() * v.clone() * s.clone() * k.clone()
        + u1.clone() * m.clone()
        - u.clone() * s.clone() * k.clone() * v1.clone() * v1.clone()
        + u.clone() * u.clone() * l.clone()
        - v.clone() * v.clone() * s.clone() * l.clone()
        - u.clone() * m;
    if is0(&den) {
        return Err(CycleError::Domain("singular pencil"));
    }
    let cc = c.clone();
    let es2 = es.clone();
    let orth: Condition<S> = Box::new(move |x: &Cycle<S>| x.inner_product(&cc, Some(&es2), None));
    let c2 = c1.subject_to(
        vec![passing(&w), passing(&w1), orth],
        Some(&[Slot::K, Slot::L(0), Slot::M]),
    )?;
    let n1 = c1.l_at(1).clone();
    let num = -two::<S>()
        * (u1.clone() * (s1.clone() * n.clone() + v.clone() * k.clone()) - v * l.clone()
            + (-k * v1.clone() - s1 * n) * u
            + l * v1)
        * n1;
    Ok(vec![
        ("passes W", is0(&c2.val(&w)?)),
        ("passes W1", is0(&c2.val(&w1)?)),
        ("orthogonal to C", is0(&c2.inner_product(&c, Some(&es), None)?)),
        ("k matches the displayed fraction", c2.k().close(&num.div(&den)?)),
    ])
}

fn inverse_point<S: Scalar>(c: &Cycle<S>, w: &[S], e: &Frame<S>, s1: &S) -> Result<Vec<S>> {
    c.moebius_map(w, Some(e), Some(&signs(S::one(), -s1.clone())))
}

fn orth_to<'a, S: Scalar>(c: &Cycle<S>, es: &Frame<S>) -> Condition<'a, S> {
    let c = c.clone();
    let es = es.clone();
    Box::new(move |x: &Cycle<S>| x.inner_product(&c, Some(&es), None))
}

fn ortho_inverse_point<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let s1 = sig.val::<S>("s1");
    let e = plane(sig.val::<S>("s"));
    let es = plane(s1.clone());
    let c = generic(g, &e, false)?;
    let c1 = generic(g, &e, true)?;
    let w = point::<S>(g, "u", "v");
    let vars = [Slot::M, Slot::L(0)];
    let c2 = c1.subject_to(vec![passing(&w), orth_to(&c, &es)], Some(&vars))?;
    let p = inverse_point(&c, &w, &e, &s1)?;
    let c3 = solved(c1.subject_to(vec![passing(&p), passing(&w), orth_to(&c, &es)], Some(&vars)))?;
    Ok(vec![
        (
            "cycles through one point and through its inverse are the same",
            c3.is_some_and(|c3| cycle_close(&c2, &c3)),
        ),
        ("orthogonal cycle passes through the transformed point", is0(&c2.val(&p)?)),
    ])
}

/// The line through `w` and its inverse in `c`, and the common point of all
/// such lines.
fn ortho_line<S: Scalar>(
    c: &Cycle<S>,
    c1: &Cycle<S>,
    w: &[S],
    e: &Frame<S>,
    s1: &S,
) -> Result<(Cycle<S>, Vec<S>, [S; 2])> {
    let p = inverse_point(c, w, e, s1)?;
    let c4 = c1.subject_to(vec![passing(w), passing(&p), is_linear()], None)?;
    let u3 = c.center(None)?[0].clone();
    let v3 = first_root(&c4, &u3, false)?;
    Ok((c4, p, [u3, v3]))
}

fn ortho_line_pencil<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let s1 = sig.val::<S>("s1");
    let e = plane(sig.val::<S>("s"));
    let es = plane(s1.clone());
    let c = generic(g, &e, false)?;
    let c1 = generic(g, &e, true)?;
    let w = point::<S>(g, "u", "v");
    let (c4, _, [u3, v3]) = ortho_line(&c, &c1, &w, &e, &s1)?;
    let (k, l, n) = (c.k().clone(), c.l_at(0).clone(), c.l_at(1).clone());
    let p1 = inverse_point(&c, &[u3.clone() + w[0].clone(), v3.clone() + w[1].clone()], &e, &s1)?;
    let cross = (p1[0].clone() - u3.clone()) * w[1].clone() - (p1[1].clone() - v3.clone()) * w[0].clone();
    Ok(vec![
        ("line through point and its inverse is orthogonal", is0(&c4.inner_product(&c, Some(&es), None)?)),
        (
            "all lines come through (l/k, -n s1/k)",
            all_close(&[u3, v3], &[l.div(&k)?, (-n * s1).div(&k)?]),
        ),
        ("conjugated vector is parallel to (u, v)", is0(&cross)),
    ])
}

fn ghost_cycle<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let (s, s1) = (sig.val::<S>("s"), sig.val::<S>("s1"));
    let chi = jump(&s);
    let e = plane(s.clone());
    let es = plane(s1.clone());
    let c = with_rational_roots(g, &e)?;
    let c1 = generic(g, &e, true)?;
    let w = point::<S>(g, "u", "v");
    let (_, p, [u3, v3]) = ortho_line(&c, &c1, &w, &e, &s1)?;
    let r2 = c.det(Some(&e), Some(&signs(-S::one(), s1.clone())))?;
    let c5 = zero_radius(vec![u3, -v3 * chi.clone()], &e, r2, None, None)?;
    let roots = roots_at_axis(&c)?;
    let mut common = true;
    for r in &roots {
        common &= is0(&c5.val(&[r.clone(), S::zero()])?);
    }
    let centre5 = c5.center(Some(&frame2(-S::one(), chi.clone())?))?;
    let p1 = c5.moebius_map(&w, Some(&e), Some(&signs(S::one(), -chi)))?;
    Ok(vec![
        ("C5 has common roots with C", common),
        ("chi(s)-centre of C5 is the s1-centre of C", all_close(&centre5, &c.center(Some(&es))?)),
        ("inversion in (C5, sign) is inversion in (C, sign1)", all_close(&p1, &p)),
    ])
}

fn reflect_real_line<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let (s, s1, si) = (sig.get("s"), sig.get("s1"), sig.val::<S>("si"));
    let (sv, s1v) = (S::from_i64(s), S::from_i64(s1));
    let e = plane(sv);
    let es = plane(s1v.clone());
    // k x^2 - 2 l x + m has roots l +- r over k, and -s1 det is n^2 - s1 r^2,
    // which is made a square through a Pythagorean triple
    let k: S = g.nz("k");
    let l: S = g.q("l");
    let a: S = g.q("a");
    let b: S = g.q("b");
    let (aa, bb) = (a.clone() * a.clone(), b.clone() * b.clone());
    let n = if s1 > 0 { aa + bb } else { aa - bb };
    let r = two::<S>() * a * b;
    if r.is_zero() {
        // C touches the real line and the inversion cycle degenerates
        return Err(CycleError::Domain("double root"));
    }
    let m = (l.clone() * l.clone() - r.clone() * r).div(&k)?;
    let c = cyc(k.clone(), l.clone(), n.clone(), m.clone(), &e)?;
    let d = c.det_with(Some(&es), Some(&SignMatrix::identity(2)), &k)?;
    let root = (-d * s1v.clone()).sqrt()?;
    let c9 = cyc(
        k * s1v.clone(),
        l * s1v.clone(),
        n * s1v.clone() + si * root,
        m * s1v,
        &es,
    )?;
    let rl = real_line(&e)?;
    let mut out = vec![
        (
            "conjugation of the real line is the cycle C",
            rl.cycle_similarity(&c9, Some(&es), None, None)?.the_same_as(&c),
        ),
        (
            "conjugation of the cycle C is the real line",
            c.cycle_similarity(&c9, Some(&es), None, None)?.the_same_as(&rl),
        ),
    ];
    let mut common = true;
    for x in roots_at_axis(&c)? {
        common &= is0(&c9.val(&[x, S::zero()])?);
    }
    out.push(("inversion cycle has common roots with C", common));
    if s == s1 {
        let centre = c9.center(None)?;
        out.push(("C passes the centre of the inversion cycle", is0(&c.with_metric(&es)?.val(&centre)?)));
    }
    Ok(out)
}

/// The composition is formed for a symbolic `sigma = eps` (the real line is
/// a degenerate reflection at `sigma = 0`) and the limit is taken.
fn yaglom<S: Ring>(_sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let e = plane(Jet::<S>::eps());
    let k: S = g.nz("k");
    let l: S = g.q("l");
    let m: S = g.nz("m");
    let w = point::<S>(g, "u", "v");
    let r2 = jet(&(-m.clone()).div(&k)?);
    let a = zero_radius(vec![jet(&l), Jet::zero()], &e, r2.clone(), None, None)?;
    let b = zero_radius(vec![jet(&l), jet(&(two::<S>() * m.clone()))], &e, r2, None, None)?;
    let x = b.moebius_map(&jets(&w), None, None)?;
    let x = a.moebius_map(&x, None, None)?;
    let x = real_line(&e)?.moebius_map(&x, None, None)?;
    let x = [coeff(&x[0], 0)?, coeff(&x[1], 0)?];
    let du = w[0].clone() - l;
    let expect = [w[0].clone(), two::<S>() * (k * du.clone() * du + m) - w[1].clone()];
    Ok(vec![("three reflections give (u, 2(k(u-l)^2+m)-v)", all_close(&x, &expect))])
}

fn real_line_invariant<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let (s, s1) = (sig.val::<S>("s"), sig.val::<S>("s1"));
    let (chi2, chi3) = (jump(&sig.val::<S>("s2")), jump(&sig.val::<S>("s3")));
    let e = plane(s.clone());
    let es = plane(s1.clone());
    let s2 = signs(S::one(), chi2.clone());
    let s3 = signs(S::one(), chi3.clone());
    let rl = real_line(&e)?;
    let t = sl2(g)?;
    let c = generic(g, &e, false)?;
    let (u, v): (S, S) = (g.q("u"), g.q("v"));
    let z = zero_radius(vec![u.clone(), v.clone()], &e, S::zero(), None, None)?;
    // reflection for symbolic s1 + eps; the image vanishes to first order at s1 = 0
    let ej = plane(jet(&s));
    let zj = jet_cycle(&z, &ej)?;
    let rlj = real_line(&ej)?;
    let esj = plane(jet(&s1) + Jet::eps());
    let rj = zj.cycle_similarity(&rlj, Some(&esj), None, None)?.normalize(&Jet::one())?;
    let refl = cyc(
        coeff(rj.k(), 0)?,
        coeff(rj.l_at(0), 0)?,
        coeff(rj.l_at(1), 0)?,
        coeff(rj.m(), 0)?,
        &e,
    )?;
    let expect_refl = cyc(
        S::one(),
        u.clone(),
        -v.clone(),
        -s * v.clone() * v + u.clone() * u,
        &e,
    )?;
    let (k, l, n, m) = (c.k().clone(), c.l_at(0).clone(), c.l_at(1).clone(), c.m().clone());
    let cc = chi2 * chi3;
    let img = rl.cycle_similarity(&c, Some(&es), Some(&s2), Some(&s3))?;
    let expect_img = cyc(
        two::<S>() * cc.clone() * n.clone() * k.clone() * s1.clone(),
        two::<S>() * l.clone() * cc.clone() * n.clone() * s1.clone(),
        n.clone() * n.clone() * s1.clone() - m.clone() * k + l.clone() * l,
        two::<S>() * m * cc * n * s1,
        &e,
    )?;
    Ok(vec![
        (
            "the real line is Moebius invariant",
            rl.the_same_as(&t.conj(&rl, Some(&es), None)?),
        ),
        ("reflection in the real line is (1, (u, -v), u^2 - s v^2)", cycle_close(&refl, &expect_refl)),
        ("reflection of the real line in C", cycle_close(&img, &expect_img)),
    ])
}

fn f_ortho_formulas<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let (s, s1) = (sig.val::<S>("s"), sig.val::<S>("s1"));
    let e = plane(s.clone());
    let es = plane(s1.clone());
    let s2 = signs(S::one(), jump(&sig.val::<S>("s2")));
    let f = |a: &Cycle<S>, b: &Cycle<S>| a.f_orthogonality(b, Some(&es), Some(&s2));
    let c = generic(g, &e, false)?;
    let c1 = generic(g, &e, true)?;
    let (k, l, n, m) = (c.k().clone(), c.l_at(0).clone(), c.l_at(1).clone(), c.m().clone());
    let (k1, l1, n1, m1) = (c1.k().clone(), c1.l_at(0).clone(), c1.l_at(1).clone(), c1.m().clone());
    let two = two::<S>();

    let expect = n.clone() * m1 * k.clone() - two.clone() * l.clone() * l1.clone() * n.clone()
        + n1.clone() * n.clone() * n.clone() * s1.clone()
        - n1.clone() * m.clone() * k.clone()
        + n1.clone() * l.clone() * l.clone()
        + k1 * m.clone() * n.clone();
    let lines = f(&c.set(Slot::K, S::zero()), &c1.set(Slot::K, S::zero()))?;
    let expect_lines = -two.clone() * l.clone() * l1 * n.clone()
        + n1.clone() * n.clone() * n.clone() * s1.clone()
        + n1 * l.clone() * l.clone();

    let (u, v): (S, S) = (g.q("u"), g.q("v"));
    let z1 = zero_radius(vec![u.clone(), v.clone()], &e, S::zero(), Some(&es), None)?;
    let expect_cz = l.clone() * l.clone() * v.clone() - m.clone() * v.clone() * k.clone()
        - v.clone() * v.clone() * n.clone() * k.clone() * s1.clone()
        + m.clone() * n.clone()
        + v.clone() * n.clone() * n.clone() * s1.clone()
        - two.clone() * l.clone() * u.clone() * n.clone()
        + u.clone() * u.clone() * n.clone() * k.clone();
    let v3 = v.clone() * v.clone() * v.clone();
    let expect_zc = -(v3.clone() * k.clone() * s1.clone()
        - two.clone() * v.clone() * v.clone() * n * s1.clone()
        - m * v.clone()
        - u.clone() * u.clone() * v.clone() * k
        + two.clone() * l * u.clone() * v.clone());

    let (u1, v1): (S, S) = (g.q("u'"), g.q("v'"));
    let c9 = zero_radius(vec![u1.clone(), v1.clone()], &e, S::zero(), None, None)?;
    let expect_zz = -(two.clone() * u.clone() * v.clone() * u1.clone() + v3 * s1.clone()
        - two * v1.clone() * v.clone() * v.clone() * s1
        - u.clone() * u * v.clone()
        + v1.clone() * v1 * s * v.clone()
        - v * u1.clone() * u1);

    Ok(vec![
        ("generic cycles", f(&c, &c1)?.close(&expect)),
        ("two lines", lines.close(&expect_lines)),
        ("cycle to zero-radius cycle", f(&c, &z1)?.close(&expect_cz)),
        ("zero-radius cycle to cycle", f(&z1, &c)?.close(&expect_zc)),
        ("two zero-radius cycles", f(&z1, &c9)?.close(&expect_zz)),
    ])
}

fn f_orth_to<'a, S: Scalar>(c: &Cycle<S>, es: &Frame<S>, s2: &SignMatrix<S>) -> Condition<'a, S> {
    let (c, es, s2) = (c.clone(), es.clone(), s2.clone());
    Box::new(move |x: &Cycle<S>| c.f_orthogonality(x, Some(&es), Some(&s2)))
}

fn f_ortho_focus_pencil<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let s1 = sig.val::<S>("s1");
    let e = plane(sig.val::<S>("s"));
    let es = plane(s1.clone());
    let s2 = signs(S::one(), jump(&sig.val::<S>("s2")));
    let c = generic(g, &e, false)?;
    let c1 = generic(g, &e, true)?;
    let w = point::<S>(g, "u", "v");
    let c7 = c1.subject_to(
        vec![passing(&w), f_orth_to(&c, &es, &s2), is_linear()],
        Some(&[Slot::M, Slot::L(0), Slot::K]),
    )?;
    let u4 = c.center(None)?[0].clone();
    let v4 = first_root(&c7, &u4, false)?;
    let f = focus(&c, Some(&frame2(-S::one(), -s1)?))?;
    Ok(vec![("f-orthogonal lines pass the focus in diag(-1, -s1)", all_close(&f, &[u4, v4]))])
}

fn s_inversion<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let s1 = sig.val::<S>("s1");
    let chi = jump(&sig.val::<S>("s"));
    let e = plane(sig.val::<S>("s"));
    let es = plane(s1.clone());
    let s2 = signs(S::one(), jump(&sig.val::<S>("s2")));
    let c = with_rational_roots(g, &e)?;
    let c1 = generic(g, &e, true)?;
    let w = point::<S>(g, "u", "v");
    let nk = c.l_at(1).clone() * c.k().clone();
    let c8 = real_line(&e)?
        .cycle_similarity(
            &c,
            Some(&es),
            Some(&signs(S::one(), s1.clone())),
            Some(&signs(S::one(), chi.clone())),
        )?
        .normalize(&nk)?;
    let mut common = true;
    for x in roots_at_axis(&c)? {
        common &= is0(&c8.val(&[x, S::zero()])?);
    }
    let centre = c8.center(Some(&frame2(-S::one(), chi.clone())?))?;
    let f = focus(&c, Some(&frame2(-S::one(), -s1)?))?;
    let c6 = c1.subject_to(vec![passing(&w), f_orth_to(&c, &es, &s2)], Some(&[Slot::M, Slot::L(0)]))?;
    let p1 = c8.moebius_map(&w, Some(&e), Some(&signs(S::one(), -chi)))?;
    Ok(vec![
        ("C8 has common roots with C", common),
        ("chi(s)-centre of C8 is the s1-focus of C", all_close(&centre, &f)),
        ("s-inversion in C is inversion in C8", is0(&c6.val(&p1)?)),
    ])
}

fn distance_formula<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let (s, s1) = (sig.val::<S>("s"), sig.val::<S>("s1"));
    let w = point::<S>(g, "u", "v");
    let w1 = point::<S>(g, "u'", "v'");
    let d = distance(&w, &w1, &s, &s1)?;
    let mut out = vec![("extremum equals the closed form", d.close(&distance_closed_form(&w, &w1, &s, &s1)?))];
    if sig.get("s") == -1 && sig.get("s1") == -1 {
        let du = w[0].clone() - w1[0].clone();
        let dv = w[1].clone() - w1[1].clone();
        out.push(("Euclidean distance", d.close(&(du.clone() * du + dv.clone() * dv))));
    }
    Ok(out)
}

fn distance_parabolic_midpoint<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let s1 = sig.val::<S>("s1");
    let w = point::<S>(g, "u", "v");
    let w1 = point::<S>(g, "u'", "v'");
    let d = distance(&w, &w1, &S::zero(), &s1)?;
    let du = w[0].clone() - w1[0].clone();
    Ok(vec![("value at the middle point is (u-u')^2", d.close(&(du.clone() * du)))])
}

fn distance_equal_heights<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let (s, s1) = (sig.val::<S>("s"), sig.val::<S>("s1"));
    let e = plane(s.clone());
    let es = plane(s1.clone());
    let (u, v, u1): (S, S, S) = (g.q("u"), g.q("v"), g.q("u'"));
    let w = [u.clone(), v.clone()];
    let w1 = [u1.clone(), v.clone()];
    let four = S::from_i64(4);
    let d_at = |n: S| -> Result<S> {
        let c = cyc(S::one(), S::zero(), n, S::zero(), &e)?
            .subject_to(vec![passing(&w), passing(&w1)], Some(&[Slot::M, Slot::L(0)]))?;
        Ok(four.clone() * c.det(Some(&es), None)?)
    };
    let (d0, d1, d2) = (d_at(S::zero())?, d_at(S::one())?, d_at(two())?);
    let a = (d2 - two::<S>() * d1.clone() + d0.clone()) * half();
    let b = d1 - d0 - a.clone();
    let n = (-b).div(&(two::<S>() * a))?;
    let d = d_at(n)?;
    let expect = -(four.clone() * s * v.clone() * v.clone() * s1.clone() - four * v.clone() * v
        + two::<S>() * u.clone() * s1.clone() * u1.clone()
        - s1.clone() * u1.clone() * u1
        - u.clone() * u * s1.clone())
    .div(&s1)?;
    Ok(vec![("value at critical point", d.close(&expect))])
}

fn length_center_check<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let (s, s1, s4) = (sig.val::<S>("s"), sig.val::<S>("s1"), sig.val::<S>("s4"));
    let w = point::<S>(g, "u", "v");
    let w1 = point::<S>(g, "u'", "v'");
    let (len, c) = length_center_cycle(&w, &w1, &s, &s1, &s4)?;
    let (u, v, u1, v1) = (w[0].clone(), w[1].clone(), w1[0].clone(), w1[1].clone());
    let q = s4.clone() * s4.clone();
    let expect = (q.clone() * u1.clone() * u1.clone() - v1.clone() * v1.clone() * s * q.clone()
        + two::<S>() * v1 * v.clone() * s4.clone()
        + u.clone() * u.clone() * q.clone()
        - two::<S>() * u.clone() * q.clone() * u1
        - v.clone() * v.clone() * s1)
        .div(&q)?;
    Ok(vec![
        ("passes W1", is0(&c.val(&w1)?)),
        ("first centre coordinate is u", c.center(None)?[0].close(&u)),
        ("second centre coordinate in diag(-1, s4) is v", c.center(Some(&plane(s4)))?[1].close(&v)),
        ("length from centre", len.close(&expect)),
    ])
}

fn length_focus_check<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let (s, s1, s4) = (sig.val::<S>("s"), sig.val::<S>("s1"), sig.val::<S>("s4"));
    let branch = match sig.get("br") {
        1 => FocusBranch::Plus,
        -1 => FocusBranch::Minus,
        _ => FocusBranch::Rational,
    };
    let (u, u1, v1): (S, S, S) = (g.q("u"), g.q("u'"), g.q("v'"));
    let v = if branch == FocusBranch::Rational {
        g.q("v")
    } else {
        // s4 (u'-u)^2 + (v'-v)^2 - s4 s v'^2 = K + dv^2 becomes a square
        // for dv = (K/r - r)/2
        let r: S = g.nz("r");
        let du = u1.clone() - u.clone();
        let kk = s4.clone() * du.clone() * du - s4.clone() * s.clone() * v1.clone() * v1.clone();
        let dv = (kk.div(&r)? - r) * half();
        v1.clone() - dv
    };
    let w = [u.clone(), v.clone()];
    let w1 = [u1.clone(), v1.clone()];
    let p = focal_parameter(&w, &w1, &s, &s4, branch)?;
    let (len, c) = length_focus_cycle(&w, &w1, &s, &s1, &p)?;
    let expect = (s4 - s1) * p.clone() * p.clone() - two::<S>() * v * p.clone();
    let [a, b] = perpendicular(&c, &w1, &s);
    Ok(vec![
        ("length is (s4 - s1) p^2 - 2 v p", len.close(&expect)),
        ("passes W1", is0(&c.val(&w1)?)),
        ("focus is at u", focus(&c, None)?[0].close(&u)),
        ("perpendicular is (s v' + p, u - u')", a.close(&(s * v1 + p)) && b.close(&(u - u1))),
    ])
}

fn perpendiculars<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let (s, s1, s4) = (sig.val::<S>("s"), sig.val::<S>("s1"), sig.val::<S>("s4"));
    let w = point::<S>(g, "u", "v");
    let w1 = point::<S>(g, "u'", "v'");
    let (u, v, u1, v1) = (w[0].clone(), w[1].clone(), w1[0].clone(), w1[1].clone());
    let h = half::<S>();
    let (_, cd) = distance_cycle(&w, &w1, &s, &s1)?;
    let pd = perpendicular(&cd, &w1, &s);
    let distance_ok = if sig.get("s") == 0 {
        pd[0].close(&(v1.clone() * s.clone())) && pd[1].close(&((u.clone() - u1.clone()) * h.clone()))
    } else {
        let c = |x: i64| S::from_i64(x);
        let (ss, sb) = (s.clone(), s1.clone());
        let den = c(2) * v1.clone() * v.clone() - v.clone() * v.clone()
            - c(2) * u.clone() * sb.clone() * u1.clone()
            + sb.clone() * u1.clone() * u1.clone()
            + u.clone() * u.clone() * sb.clone()
            - v1.clone() * v1.clone();
        let n0 = c(3) * v1.clone() * v1.clone() * ss.clone() * v.clone()
            - v.clone() * u1.clone() * u1.clone()
            - u.clone() * u.clone() * v.clone()
            + c(2) * v1.clone() * u.clone() * u.clone() * ss.clone() * sb.clone()
            + ss.clone() * v.clone() * v.clone() * v.clone()
            + c(2) * v1.clone() * ss.clone() * sb.clone() * u1.clone() * u1.clone()
            - c(4) * v1.clone() * u.clone() * ss.clone() * sb.clone() * u1.clone()
            - c(3) * v1.clone() * ss.clone() * v.clone() * v.clone()
            + c(2) * u.clone() * v.clone() * u1.clone()
            - v1.clone() * u1.clone() * u1.clone()
            - v1.clone() * u.clone() * u.clone()
            + c(2) * v1.clone() * u.clone() * u1.clone()
            - v1.clone() * v1.clone() * v1.clone() * ss.clone();
        let n1 = c(3) * u.clone() * sb.clone() * u1.clone() * u1.clone()
            - u.clone() * ss.clone() * v.clone() * v.clone() * sb.clone()
            + v1.clone() * v1.clone() * u.clone() * ss.clone() * sb.clone()
            + c(2) * v1.clone() * v1.clone() * u1.clone()
            + c(2) * v1.clone() * u.clone() * v.clone()
            - c(2) * v1.clone() * v1.clone() * u.clone()
            - v1.clone() * v1.clone() * ss.clone() * sb.clone() * u1.clone()
            + ss.clone() * v.clone() * v.clone() * sb.clone() * u1.clone()
            - sb.clone() * u1.clone() * u1.clone() * u1.clone()
            - c(3) * u.clone() * u.clone() * sb.clone() * u1.clone()
            - c(2) * v1.clone() * v.clone() * u1.clone()
            + u.clone() * u.clone() * u.clone() * sb.clone();
        pd[0].close(&(n0 * h.clone()).div(&den)?) && pd[1].close(&(n1 * h).div(&den)?)
    };
    let (_, cc) = length_center_cycle(&w, &w1, &s, &s1, &s4)?;
    let pc = perpendicular(&cc, &w1, &s);
    let centre_ok = pc[0].close(&(v1 * s * s4.clone() - v).div(&s4)?) && pc[1].close(&(u - u1));
    Ok(vec![
        ("perpendicular from the distance", distance_ok),
        ("perpendicular from the length from centre", centre_ok),
    ])
}

/// Random data shared by the infinitesimal cycle checks.
struct Inf<S: Scalar> {
    s: S,
    s1: S,
    s4: S,
    u: S,
    vp: S,
    c10: Cycle<Jet<S>>,
    e: Frame<Jet<S>>,
    es: Frame<Jet<S>>,
    e4: Frame<Jet<S>>,
}

fn inf<S: Scalar>(sig: &Sig, g: &mut Gen) -> Result<Inf<S>> {
    let (s, s1, s4) = (sig.val::<S>("s"), sig.val::<S>("s1"), sig.val::<S>("s4"));
    let u: S = g.q("u");
    let vp: S = g.nz("v_p");
    let c10 = infinitesimal_cycle(&u, &vp, &Jet::eps(), &s, &s1, &s4)?.into_cycle();
    Ok(Inf {
        e: plane(jet(&s)),
        es: plane(jet(&s1)),
        e4: plane(jet(&s4)),
        s,
        s1,
        s4,
        u,
        vp,
        c10,
    })
}

fn inf_cycle_det<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let d = inf::<S>(sig, g)?;
    let eps = Jet::<S>::eps();
    Ok(vec![(
        "det = -eps^2",
        d.c10.det(Some(&d.es), None)?.close(&-(eps.clone() * eps)),
    )])
}

fn inf_cycle_focus<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let d = inf::<S>(sig, g)?;
    let f = focus(&d.c10, Some(&d.e4))?;
    let fl = Cycle2D::from_cycle(d.c10.clone())?.focal_length()?;
    let four_vp = S::from_i64(4) * d.vp.clone();
    // points (u + x eps, v_p + y) of the cycle in the parabolic point space
    let x: S = g.q("x");
    let c0 = d.c10.with_metric(&plane(Jet::zero()))?;
    let x0 = jet(&d.u) + Jet::eps() * jet(&x);
    let y = c0.val(&[x0, jet(&d.vp)])?.div(&(two::<Jet<S>>() * c0.l_at(1).clone()))?;
    let x2 = x.clone() * x.clone();
    let y2 = (x2.clone() * d.s1.clone() - x2.clone() * d.s4.clone() - d.s4.clone()).div(&four_vp)?;
    Ok(vec![
        ("focus = (u, v_p)", all_close(&f, &[jet(&d.u), jet(&d.vp)])),
        (
            "focal length = eps^2/(4 v_p) + O(eps^3)",
            is0(&coeff(&fl, 0)?) && is0(&coeff(&fl, 1)?) && coeff(&fl, 2)?.close(&S::one().div(&four_vp)?),
        ),
        (
            "passing points (u + x eps, v_p + v_p x^2 + (x^2 s1 - x^2 s4 - s4)/(4 v_p) eps^2)",
            coeff(&y, 0)?.close(&(d.vp.clone() * x2)) && is0(&coeff(&y, 1)?) && coeff(&y, 2)?.close(&y2),
        ),
    ])
}

fn inf_cycle_similarity<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let d = inf::<S>(sig, g)?;
    let t = sl2::<S>(g)?;
    let tj = t.lift(jet);
    let c11 = tj.conj(&d.c10, Some(&d.es), None)?;
    let r1 = c11.det(Some(&d.es), None)?;
    let cu = t.d.clone() + t.c.clone() * d.u.clone();
    let expect1 = -S::one().div(&cu.pow(4))?;
    let c = generic(g, &plane(d.s.clone()), false)?;
    let cj = jet_cycle(&c, &d.e)?;
    let r2 = d.c10.cycle_similarity(&cj, Some(&d.es), None, None)?.det(Some(&d.es), None)?;
    let (k, l, n, m) = (c.k().clone(), c.l_at(0).clone(), c.l_at(1).clone(), c.m().clone());
    let num = l.clone() * l.clone() - d.s1.clone() * n.clone() * n.clone() - m * k.clone();
    let ku = k * d.u.clone() - l;
    let den = ku.clone() * ku - d.s1.clone() * n.clone() * n;
    let expect2 = -(num.clone() * num).div(&(den.clone() * den))?;
    Ok(vec![
        (
            "SL2 image has radius squared -eps^2/(c u + d)^4 + O(eps^3)",
            is0(&coeff(&r1, 0)?) && is0(&coeff(&r1, 1)?) && coeff(&r1, 2)?.close(&expect1),
        ),
        (
            "cycle similarity image has radius squared O(eps^2)",
            is0(&coeff(&r2, 0)?) && is0(&coeff(&r2, 1)?) && coeff(&r2, 2)?.close(&expect2),
        ),
    ])
}

fn inf_cycle_focus_displacement<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let d = inf::<S>(sig, g)?;
    let t = sl2::<S>(g)?.lift(jet);
    let c11 = t.conj(&d.c10, Some(&d.es), None)?;
    let f = focus(&c11, Some(&d.e4))?;
    let gw = t.map(&[jet(&d.u), jet(&d.vp)], &d.e)?;
    let mut ok = true;
    for i in 0..2 {
        let x = f[i].clone() - gw[i].clone();
        ok &= is0(&coeff(&x, 0)?) && is0(&coeff(&x, 1)?);
    }
    Ok(vec![("focus of the image is the image of the focus up to O(eps^2)", ok)])
}

fn inf_cycle_ortho<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let d = inf::<S>(sig, g)?;
    let c = generic(g, &plane(d.s.clone()), false)?;
    let cj = jet_cycle(&c, &d.e)?;
    let o = cj.inner_product(&d.c10, Some(&d.es), None)?;
    let (k, l, m, u) = (c.k().clone(), c.l_at(0).clone(), c.m().clone(), d.u.clone());
    let expect = m * half() + u.clone() * u.clone() * k * half() - l * u;
    Ok(vec![("leading term m/2 + u^2 k/2 - l u", coeff(&o, 0)?.close(&expect))])
}

fn inf_cycle_f_ortho<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let d = inf::<S>(sig, g)?;
    let c = generic(g, &plane(d.s.clone()), false)?;
    let cj = jet_cycle(&c, &d.e)?;
    let (k, l, n, m, u) = (c.k().clone(), c.l_at(0).clone(), c.l_at(1).clone(), c.m().clone(), d.u.clone());
    let a = cj.f_orthogonality(&d.c10, Some(&d.es), None)?;
    let b = d.c10.f_orthogonality(&cj, Some(&d.es), None)?;
    let expect_a = u.clone() * u.clone() * n.clone() * k.clone() + m.clone() * n.clone()
        - two::<S>() * l.clone() * u.clone() * n.clone();
    let expect_b = (m + u.clone() * u.clone() * k - two::<S>() * l * u - two::<S>() * d.vp.clone() * n)
        .div(&(two::<S>() * d.vp.clone()))?;
    Ok(vec![
        ("other cycle to infinitesimal: u^2 n k + m n - 2 l u n", coeff(&a, 0)?.close(&expect_a)),
        (
            "infinitesimal cycle to other: (m + u^2 k - 2 l u - 2 v_p n)/(2 v_p) eps^2",
            is0(&coeff(&b, 0)?) && is0(&coeff(&b, 1)?) && coeff(&b, 2)?.close(&expect_b),
        ),
    ])
}

fn cayley_inf<S: Ring>(sig: &Sig, g: &mut Gen) -> Result<Outcome> {
    let d = inf::<S>(sig, g)?;
    let s1j = jet(&d.s1);
    let c11 = Cycle2D::from_cycle(d.c10.clone())?.cayley_parab(&s1j)?;
    let r = c11.det(None, None)?;
    let expect_r = (S::one() - d.vp.clone() + d.u.clone() * d.u.clone() * d.s1.clone()).div(&d.vp)?;
    // [[1, -e1], [s1 e1, 1]]
    let e1 = Multivector::basis(&d.e, 1);
    let one = Multivector::one(&d.e);
    let tc = FsccMatrix::new(one.clone(), e1.neg(), e1.scale(&s1j), one)?;
    let target = moebius_map(&tc, &[jet(&d.u), jet(&d.vp)], &d.e)?;
    let f = c11.focus(Some(&d.e4))?;
    let mut displaced = true;
    for i in 0..2 {
        let x = f[i].clone() - target[i].clone();
        displaced &= is0(&coeff(&x, 0)?) && is0(&coeff(&x, 1)?);
    }
    let c = generic(g, &plane(d.s.clone()), false)?;
    let cc = Cycle2D::from_cycle(jet_cycle(&c, &d.e)?)?.cayley_parab(&s1j)?;
    let fo = c11.f_orthogonality(&cc, Some(&d.es), None)?;
    let (k, l, n, m, u) = (c.k().clone(), c.l_at(0).clone(), c.l_at(1).clone(), c.m().clone(), d.u.clone());
    let expect_fo = (m + u.clone() * u.clone() * k - two::<S>() * l * u - two::<S>() * d.vp.clone() * n)
        .div(&(two::<S>() * d.vp.clone()))?;
    Ok(vec![
        (
            "det of the image is (1 - v_p + u^2 s1)/v_p eps^2 + O(eps^3)",
            is0(&coeff(&r, 0)?) && is0(&coeff(&r, 1)?) && coeff(&r, 2)?.close(&expect_r),
        ),
        ("focus displaced by O(eps^2)", displaced),
        (
            "f-orthogonality of the transforms",
            is0(&coeff(&fo, 0)?) && is0(&coeff(&fo, 1)?) && coeff(&fo, 2)?.close(&expect_fo),
        ),
    ])
}

// ---------------------------------------------------------------------------
// running

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub signature: String,
    pub values: Vec<(String, String)>,
    pub failed: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub line: String,
    pub scalar: ScalarKind,
    pub seed: u64,
    pub passed: bool,
    pub signatures: Vec<String>,
    /// Evaluated tuples over all signature combinations.
    pub tuples: usize,
    /// Degenerate draws that were redrawn.
    pub rejected: usize,
    pub witness: Option<Witness>,
    pub millis: u64,
}

impl CheckResult {
    /// One line in the style `... : true`.
    pub fn text_line(&self) -> String {
        let mut s = format!(
            "{}: {}  [{}; {} tuples over {} signatures, {} redrawn]",
            self.line,
            self.passed,
            self.id,
            self.tuples,
            self.signatures.len(),
            self.rejected
        );
        if let Some(w) = &self.witness {
            let vals: Vec<String> = w.values.iter().map(|(n, v)| format!("{n}={v}")).collect();
            s.push_str(&format!(
                "\n    failed at {} with {}: {}",
                w.signature,
                vals.join(" "),
                w.failed.join("; ")
            ));
        }
        s
    }
}

fn check_seed(master: u64, index: usize) -> u64 {
    master
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((index as u64 + 1).wrapping_mul(0xD1B5_4A32_D192_ED03))
}

fn run_body(
    body: Body,
    sigs: &[Sig],
    g: &mut Gen,
    cfg: &Config,
) -> (usize, usize, Option<Witness>) {
    let (mut tuples, mut rejected) = (0, 0);
    for sig in sigs {
        let mut done = 0;
        let mut rej_here = 0;
        while done < cfg.tuples {
            g.clear();
            match body(sig, g) {
                Ok(out) => {
                    tuples += 1;
                    done += 1;
                    let failed: Vec<String> =
                        out.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.to_string()).collect();
                    if !failed.is_empty() {
                        let w = Witness {
                            signature: sig.to_string(),
                            values: g.describe(),
                            failed,
                        };
                        return (tuples, rejected, Some(w));
                    }
                }
                Err(err) => {
                    rejected += 1;
                    rej_here += 1;
                    if rej_here > cfg.max_rejects {
                        let w = Witness {
                            signature: sig.to_string(),
                            values: g.describe(),
                            failed: vec![format!("too many degenerate draws, last: {err}")],
                        };
                        return (tuples, rejected, Some(w));
                    }
                }
            }
        }
    }
    (tuples, rejected, None)
}

fn run_entry(index: usize, e: &Entry, cfg: &Config) -> CheckResult {
    let start = Instant::now();
    let sigs = (e.domain)();
    let seed = check_seed(cfg.seed, index);
    let mut g = Gen::new(seed);
    let (tuples, rejected, witness) = match cfg.scalar {
        ScalarKind::Rational => run_body(e.exact, &sigs, &mut g, cfg),
        ScalarKind::Float => run_body(e.float, &sigs, &mut g, cfg),
    };
    CheckResult {
        id: e.name.to_string(),
        line: e.line.to_string(),
        scalar: cfg.scalar,
        seed: cfg.seed,
        passed: witness.is_none(),
        signatures: sigs.iter().map(|s| s.to_string()).collect(),
        tuples,
        rejected,
        witness,
        millis: start.elapsed().as_millis() as u64,
    }
}

/// Runs one named check.
pub fn run_check(name: &str, cfg: &Config) -> std::result::Result<CheckResult, VerifyError> {
    let cat = catalog();
    let (i, e) = cat
        .iter()
        .enumerate()
        .find(|(_, e)| e.name == name)
        .ok_or_else(|| VerifyError::UnknownCheck(name.to_string()))?;
    Ok(run_entry(i, e, cfg))
}

/// Runs the named checks (all when `names` is empty) in parallel; results
/// come back in catalog order.
pub fn run_checks(names: &[String], cfg: &Config) -> std::result::Result<Vec<CheckResult>, VerifyError> {
    let cat = catalog();
    for n in names {
        if !cat.iter().any(|e| e.name == n) {
            return Err(VerifyError::UnknownCheck(n.clone()));
        }
    }
    let selected: Vec<(usize, &Entry)> = cat
        .iter()
        .enumerate()
        .filter(|(_, e)| names.is_empty() || names.iter().any(|n| n == e.name))
        .collect();
    Ok(selected.par_iter().map(|(i, e)| run_entry(*i, e, cfg)).collect())
}

// ---------------------------------------------------------------------------
// conformality

/// Lengths whose conformality is examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthKind {
    Distance,
    CenterLength,
    /// Length from focus with the rational focal parameter.
    FocusLength,
}

/// One cell of a conformality table.
#[derive(Debug, Clone, Serialize)]
pub struct ConformalCell {
    pub sigma: i64,
    pub sigma1: i64,
    pub conformal: bool,
    /// Leading coefficient of the ratio of lengths per direction.
    pub factors: Vec<String>,
    /// Power of `t` at which each ratio starts.
    pub valuations: Vec<Option<usize>>,
}

/// Random data of a conformality test: a point, a Moebius map and the
/// directions `(x, y)`.
#[derive(Debug, Clone)]
pub struct ConformalSetup {
    pub w: [Rational; 2],
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    pub dirs: Vec<[Rational; 2]>,
}

impl ConformalSetup {
    pub fn random(seed: u64, ndirs: usize) -> Self {
        let mut g = Gen::new(seed);
        let w = [g.rational("u"), g.nonzero_rational("v")];
        let b = g.rational("b");
        let c = g.nonzero_rational("c");
        let d = g.nonzero_rational("d");
        let dirs = (0..ndirs)
            .map(|_| [g.nonzero_rational("x"), g.nonzero_rational("y")])
            .collect();
        ConformalSetup { w, b, c, d, dirs }
    }
}

type J = Jet<Rational>;

/// `D^2 Len` for the rational focal parameter `p = N / D`: the raw determinant
/// of the cycle `(D, (u D, N), m)` through `w1`. Returns it together with `D`.
pub fn length_focus_scaled<S: Scalar>(w: &[S], w1: &[S], sigma: &S, sigma1: &S) -> Result<(S, S)> {
    let du = w1[0].clone() - w[0].clone();
    let dv = w1[1].clone() - w[1].clone();
    let v1 = w1[1].clone();
    let num = du.clone() * du - sigma.clone() * v1.clone() * v1;
    let den = two::<S>() * dv;
    let e = plane(sigma.clone());
    let c = cyc(den.clone(), w[0].clone() * den.clone(), num, S::zero(), &e)?
        .subject_to(vec![passing(w1)], Some(&[Slot::M]))?;
    Ok((c.det_with(Some(&plane(sigma1.clone())), None, &S::zero())?, den))
}

/// A length as `value / scale^2`.
fn length_of(kind: LengthKind, w: &[J], w1: &[J], s: &J, s1: &J, s4: &J) -> Result<(J, J)> {
    match kind {
        LengthKind::Distance => Ok((distance(w, w1, s, s1)?, J::one())),
        LengthKind::CenterLength => Ok((length_center(w, w1, s, s1, s4)?, J::one())),
        LengthKind::FocusLength => length_focus_scaled(w, w1, s, s1),
    }
}

/// Ratio `Len(gW, gW1) / Len(W, W1)` with `W1 = W + t (x, y)` as a series in `t`.
pub fn length_ratio(
    kind: LengthKind,
    setup: &ConformalSetup,
    dir: &[Rational; 2],
    sigma: &Rational,
    sigma1: &Rational,
    sigma4: &Rational,
) -> Result<J> {
    let (s, s1, s4) = (jet(sigma), jet(sigma1), jet(sigma4));
    let e = plane(s.clone());
    let t = J::eps();
    let w = jets(&setup.w);
    let w1 = vec![
        w[0].clone() + t.clone() * jet(&dir[0]),
        w[1].clone() + t * jet(&dir[1]),
    ];
    let (b, c, d) = (jet(&setup.b), jet(&setup.c), jet(&setup.d));
    let a = (J::one() + b.clone() * c.clone()).div(&d)?;
    let g = Sl2 { a, b, c, d };
    let gw = g.map(&w, &e)?;
    let gw1 = g.map(&w1, &e)?;
    let (num, a1) = length_of(kind, &gw, &gw1, &s, &s1, &s4)?;
    let (den, a0) = length_of(kind, &w, &w1, &s, &s1, &s4)?;
    let scale = a0.div(&a1)?;
    Ok(num.div(&den)? * scale.clone() * scale)
}

/// Conformality in one cell: the limit of the ratio of lengths as `t -> 0`
/// must exist, be nonzero and not depend on the direction.
pub fn conformality(
    kind: LengthKind,
    sigma: i64,
    sigma1: i64,
    sigma4: &Rational,
    setup: &ConformalSetup,
) -> Result<ConformalCell> {
    let (s, s1) = (Rational::from_integer(sigma.into()), Rational::from_integer(sigma1.into()));
    let mut factors = Vec::new();
    let mut valuations = Vec::new();
    let mut leading: Vec<Rational> = Vec::new();
    for dir in &setup.dirs {
        let r = length_ratio(kind, setup, dir, &s, &s1, sigma4)?;
        let v = r.valuation();
        let c = v.map(|i| r.coeff(i)).transpose()?.unwrap_or_else(<Rational as Scalar>::zero);
        factors.push(c.to_string());
        valuations.push(v);
        leading.push(c);
    }
    let conformal = valuations.iter().all(|v| *v == Some(0))
        && leading.windows(2).all(|p| p[0] == p[1]);
    Ok(ConformalCell {
        sigma,
        sigma1,
        conformal,
        factors,
        valuations,
    })
}

/// Rows of the conformality table for point space signatures `rows`, with
/// columns for the cycle space signatures -1, 0, 1.
pub fn conformality_grid(
    kind: LengthKind,
    rows: &[i64],
    sigma4: &Rational,
    setup: &ConformalSetup,
) -> Result<Vec<Vec<ConformalCell>>> {
    rows.iter()
        .map(|&s| {
            EPH.iter()
                .map(|&s1| conformality(kind, s, s1, sigma4, setup))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_traits::Signed;

    #[test]
    fn grid_enumerates_products() {
        let g = grid(&[("s", EPH), ("s2", PM)]);
        assert_eq!(g.len(), 6);
        assert_eq!(g[0].to_string(), "s=-1 s2=-1");
        assert_eq!(g[5].get("s2"), 1);
        assert_eq!(g[5].get("missing"), 0);
    }

    #[test]
    fn draws_are_in_range_and_seeded() {
        let mut a = Gen::new(5);
        let mut b = Gen::new(5);
        for _ in 0..100 {
            let x = a.rational("x");
            assert_eq!(x, b.rational("x"));
            assert!(x.numer().abs() <= 99.into());
            assert!(*x.denom() >= 1.into() && *x.denom() <= 99.into());
        }
        assert!(a.pos::<Rational>("p") > rat(0, 1));
    }

    #[test]
    fn catalog_names_are_unique() {
        let names = check_names();
        assert!(names.len() >= 25);
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
    }

    #[test]
    fn unknown_check_is_reported() {
        assert_eq!(
            run_check("nope", &Config::default()).unwrap_err(),
            VerifyError::UnknownCheck("nope".into())
        );
    }
}
