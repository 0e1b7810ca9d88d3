//! Visible pieces of a cycle inside a rectangle, with Asymptote and SVG output.
//!
//! Case decisions (degeneracy, sign of the determinant) are taken in the
//! cycle's own scalar ring; coordinates are then evaluated in `f64`.

use std::fmt::Write as _;
use std::io;

use thiserror::Error;

use crate::clifford::Frame;
use crate::cycle::Cycle;
use crate::cycle2d::Cycle2D;
use crate::scalar::Scalar;

pub type Point = [f64; 2];

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("empty viewport [{0}, {1}]x[{2}, {3}]")]
    Viewport(f64, f64, f64, f64),
    #[error("precision {0} is outside 0..=17")]
    Precision(usize),
    #[error("colour component {0} is outside [0, 1]")]
    Colour(f64),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Viewport {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    /// Samples per hyperbola branch; 0 means 5.
    pub points_per_arc: usize,
    /// Decimal digits in emitted text.
    pub precision: usize,
}

impl Default for Viewport {
    fn default() -> Self {
        Viewport {
            xmin: -5.0,
            xmax: 5.0,
            ymin: -5.0,
            ymax: 5.0,
            points_per_arc: 0,
            precision: 2,
        }
    }
}

impl Viewport {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self, RenderError> {
        let vp = Viewport {
            xmin,
            xmax,
            ymin,
            ymax,
            ..Viewport::default()
        };
        vp.validate()?;
        Ok(vp)
    }

    pub fn validate(&self) -> Result<(), RenderError> {
        if !(self.xmin < self.xmax && self.ymin < self.ymax) {
            return Err(RenderError::Viewport(self.xmin, self.xmax, self.ymin, self.ymax));
        }
        if self.precision > 17 {
            return Err(RenderError::Precision(self.precision));
        }
        Ok(())
    }

    pub fn with_points(mut self, n: usize) -> Self {
        self.points_per_arc = n;
        self
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        p[0] >= self.xmin - tol
            && p[0] <= self.xmax + tol
            && p[1] >= self.ymin - tol
            && p[1] <= self.ymax + tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Segment(Point, Point),
    /// Endpoints with tangent directions, joined by a tension spline.
    Arc {
        p0: Point,
        t0: Point,
        t1: Point,
        p1: Point,
    },
    CubicBezier(Point, Point, Point, Point),
    Dot(Point),
    /// Sample points with tangents, joined by tension splines.
    Polyline(Vec<(Point, Point)>),
}

impl Element {
    /// Points the curve passes through (not control points).
    pub fn on_curve_points(&self) -> Vec<Point> {
        match self {
            Element::Segment(a, b) => vec![*a, *b],
            Element::Arc { p0, p1, .. } => vec![*p0, *p1],
            Element::CubicBezier(a, _, _, d) => vec![*a, *d],
            Element::Dot(p) => vec![*p],
            Element::Polyline(v) => v.iter().map(|(p, _)| *p).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub element: Element,
    /// Joined to the previous piece with `^^` in path-only output.
    pub continuation: bool,
}

/// Branch of the case analysis, reported in the header comment.
#[derive(Debug, Clone, PartialEq)]
pub enum Note {
    ZeroCycle,
    Line,
    Circle(f64),
    ZeroRadius,
    ImaginaryRadius,
    Parabola,
    TwoHorizontalLines,
    TwoVerticalLines,
    LightCone(Point),
    Hyperbola,
}

impl Note {
    pub fn text(&self, precision: usize) -> String {
        let p = precision;
        match self {
            Note::ZeroCycle => "zero cycle, (whole plane)".into(),
            Note::Line => "(straight line)".into(),
            Note::Circle(r) => format!("/circle of radius {r:.p$}"),
            Note::ZeroRadius => "/circle of zero-radius".into(),
            Note::ImaginaryRadius => "/circle of imaginary radius--not drawing".into(),
            Note::Parabola => "/parabola".into(),
            Note::TwoHorizontalLines => "/parabola degenerated into two horizontal lines".into(),
            Note::TwoVerticalLines => "/parabola degenerated into two vertical lines".into(),
            Note::LightCone(c) => format!("/ a light cone at ({:.p$},{:.p$})", c[0], c[1]),
            Note::Hyperbola => "/hyperbola".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathSet {
    /// Which branch of the case analysis produced the pieces.
    pub notes: Vec<Note>,
    pub pieces: Vec<Piece>,
    /// Coefficients of `u^2, v^2, u, v, 1` in the cycle equation.
    pub equation: [f64; 5],
    pub viewport: Option<Viewport>,
}

impl PathSet {
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.pieces.iter().map(|p| &p.element)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Style {
    pub rgb: Option<[f64; 3]>,
    /// Appended verbatim after the colour, e.g. `+1+dashed`.
    pub options: String,
    pub with_header: bool,
    pub picture: String,
    pub only_path: bool,
}

impl Style {
    pub fn new() -> Self {
        Style {
            with_header: true,
            ..Style::default()
        }
    }

    pub fn rgb(mut self, r: f64, g: f64, b: f64) -> Self {
        self.rgb = Some([r, g, b]);
        self
    }

    pub fn options(mut self, o: &str) -> Self {
        self.options = o.to_string();
        self
    }

    pub fn header(mut self, h: bool) -> Self {
        self.with_header = h;
        self
    }

    pub fn picture(mut self, p: &str) -> Self {
        self.picture = p.to_string();
        self
    }

    pub fn path_only(mut self) -> Self {
        self.only_path = true;
        self.with_header = false;
        self
    }

    pub fn validate(&self) -> Result<(), RenderError> {
        for c in self.rgb.iter().flatten() {
            if !(0.0..=1.0).contains(c) {
                return Err(RenderError::Colour(*c));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// tracing

/// Plain float copy of a planar cycle.
#[derive(Debug, Clone, Copy)]
struct Fc {
    k: f64,
    l: [f64; 2],
    m: f64,
    g: [f64; 2],
}

/// Roots as returned for drawing: a linear equation has at most one, a
/// quadratic has two which may be complex.
#[derive(Debug, Clone, Copy)]
enum Roots {
    Linear(Option<f64>),
    Real(f64, f64),
    Complex { re: f64 },
}

impl Roots {
    fn count(&self) -> usize {
        match self {
            Roots::Linear(None) => 0,
            Roots::Linear(Some(_)) => 1,
            _ => 2,
        }
    }

    fn first(&self) -> f64 {
        match *self {
            Roots::Linear(x) => x.unwrap_or(f64::NAN),
            Roots::Real(a, _) => a,
            Roots::Complex { re } => re,
        }
    }

    fn get(&self, i: usize) -> f64 {
        match *self {
            Roots::Real(a, b) => {
                if i == 0 {
                    a
                } else {
                    b
                }
            }
            _ => self.first(),
        }
    }
}

impl Fc {
    fn from_cycle<S: Scalar>(c: &Cycle<S>) -> Fc {
        Fc {
            k: c.k().to_f64(),
            l: [c.l_at(0).to_f64(), c.l_at(1).to_f64()],
            m: c.m().to_f64(),
            g: [c.metric().g(0).to_f64(), c.metric().g(1).to_f64()],
        }
    }

    fn val(&self, p: Point) -> f64 {
        self.m - self.k * (self.g[0] * p[0] * p[0] + self.g[1] * p[1] * p[1])
            - 2.0 * (self.l[0] * p[0] + self.l[1] * p[1])
    }

    fn roots(&self, y: f64, first: bool) -> Roots {
        let ks = [-self.k * self.g[0], -self.k * self.g[1]];
        let (i0, i1) = if first { (0, 1) } else { (1, 0) };
        let c = ks[i1] * y * y - 2.0 * self.l[i1] * y + self.m;
        if ks[i0] == 0.0 {
            return Roots::Linear(if self.l[i0] == 0.0 {
                None
            } else {
                Some(c / self.l[i0] / 2.0)
            });
        }
        let d = self.l[i0] * self.l[i0] - ks[i0] * c;
        if d < 0.0 {
            return Roots::Complex { re: self.l[i0] / ks[i0] };
        }
        let s = d.sqrt();
        Roots::Real((self.l[i0] - s) / ks[i0], (self.l[i0] + s) / ks[i0])
    }

    fn center(&self) -> Point {
        if self.k == 0.0 {
            return self.l;
        }
        [-self.g[0] * self.l[0] / self.k, -self.g[1] * self.l[1] / self.k]
    }
}

fn clamp(x: f64, lo: f64, hi: f64) -> f64 {
    x.min(hi).max(lo)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs() + b.abs())
}

/// Result of the exact case analysis, passed to the float stage.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Exact {
    zero: bool,
    k_zero: bool,
    l0_zero: bool,
    l1_zero: bool,
    /// Sign of the determinant (normalised to `k = 1` when `k != 0`).
    det_sign: i8,
    det: f64,
}

fn exact_info<S: Scalar>(c: &Cycle<S>) -> Exact {
    let det = c.det(None, None).ok();
    let det_sign = match &det {
        Some(d) if d.is_negligible() => 0,
        Some(d) if d.to_f64() > 0.0 => 1,
        Some(_) => -1,
        None => 0,
    };
    Exact {
        zero: c.is_zero(),
        k_zero: c.k().is_negligible(),
        l0_zero: c.l_at(0).is_negligible(),
        l1_zero: c.l_at(1).is_negligible(),
        det_sign,
        det: det.map(|d| d.to_f64()).unwrap_or(0.0),
    }
}

struct Tracer<'a> {
    vp: &'a Viewport,
    out: PathSet,
    already: bool,
}

impl Tracer<'_> {
    fn push(&mut self, element: Element) {
        self.out.pieces.push(Piece {
            element,
            continuation: self.already,
        });
        self.already = true;
    }

    fn note(&mut self, n: Note) {
        self.out.notes.push(n);
    }

    fn sub(&mut self, c: Fc, is_continuation: bool) {
        let cyc = Cycle::new(c.k, vec![c.l[0], c.l[1]], c.m, float_frame(c.g));
        if let Ok(cyc) = cyc {
            self.already = is_continuation;
            let info = exact_info(&cyc);
            let mut inner = Tracer {
                vp: self.vp,
                out: PathSet::default(),
                already: is_continuation,
            };
            inner.run(Fc::from_cycle(&cyc), info, false);
            for p in inner.out.pieces {
                self.out.pieces.push(p);
            }
            self.already = inner.already;
        }
    }

    fn run(&mut self, c: Fc, x: Exact, top: bool) {
        let vp = self.vp;
        if x.zero {
            if top {
                self.note(Note::ZeroCycle);
            }
            return;
        }
        let [xc, yc] = c.center();
        let sign0 = -c.g[0];
        let sign1 = -c.g[1];
        let sign = sign0 * sign1;
        let not_swapped = sign > 0.0 || sign1 == 0.0 || (sign < 0.0 && x.det_sign <= 0);
        let (signu, signv) = if not_swapped { (sign0, sign1) } else { (sign1, sign0) };
        let (iu, iv) = if not_swapped { (0, 1) } else { (1, 0) };
        let (umin, umax, vmin, vmax) = if not_swapped {
            (vp.xmin, vp.xmax, vp.ymin, vp.ymax)
        } else {
            (vp.ymin, vp.ymax, vp.xmin, vp.xmax)
        };
        let (uc, vc) = if not_swapped { (xc, yc) } else { (yc, xc) };
        let pt = |u: f64, v: f64| if not_swapped { [u, v] } else { [v, u] };
        let b_roots = c.roots(vmin, not_swapped);
        let t_roots = c.roots(vmax, not_swapped);
        let l_zero = [x.l0_zero, x.l1_zero];

        if b_roots.count() != 2 {
            if top {
                self.note(Note::Line);
            }
            let (u1, u2) = if b_roots.count() == 1 {
                (
                    clamp(b_roots.first(), umin, umax),
                    t_roots.first().max(umin).min(umax),
                )
            } else {
                (umin, umax)
            };
            let (v1, v2);
            if l_zero[iv] {
                let b0 = b_roots.first();
                if b0 - umin > 0.0 && umax - b0 > 0.0 {
                    v1 = vmin;
                    v2 = vmax;
                } else {
                    return;
                }
            } else {
                v1 = c.roots(u1, !not_swapped).first();
                v2 = c.roots(u2, !not_swapped).first();
                if v1.max(v2) > vmax || v1.min(v2) < vmin {
                    return;
                }
            }
            self.push(Element::Segment(pt(u1, v1), pt(u2, v2)));
            return;
        }

        let c0 = clamp(uc, umin, umax);
        let mut left = [c0, c0];
        let mut right = left;
        if let Roots::Real(a, b) = b_roots {
            let (a, b) = if a > b { (b, a) } else { (a, b) };
            left[0] = a.max(umin).min(umax);
            right[0] = clamp(b, umin, umax);
        }
        if let Roots::Real(a, b) = t_roots {
            let (a, b) = if a > b { (b, a) } else { (a, b) };
            left[1] = a.max(umin).min(umax);
            right[1] = clamp(b, umin, umax);
        }

        if sign > 0.0 {
            self.circle(&c, &x, uc, vc, [umin, umax, vmin, vmax], left, right, top);
            return;
        }

        let k_d = c.k;
        let lu = c.l[iu];
        let lv = c.l[iv];
        let mut change_branch = sign != 0.0;
        let mut zero_or_one = if sign == 0.0 || k_d * signv > 0.0 { 0 } else { 1 };

        if sign == 0.0 {
            if sign0 == 0.0 && x.l0_zero {
                if top {
                    self.note(Note::TwoHorizontalLines);
                }
                let start = self.already;
                if let Roots::Real(a, b) = b_roots {
                    self.sub(Fc { k: 0.0, l: [0.0, 1.0], m: 2.0 * a, g: c.g }, start);
                    self.sub(Fc { k: 0.0, l: [0.0, 1.0], m: 2.0 * b, g: c.g }, true);
                }
                return;
            } else if sign1 == 0.0 && x.l1_zero {
                if top {
                    self.note(Note::TwoVerticalLines);
                }
                let start = self.already;
                if let Roots::Real(a, b) = b_roots {
                    self.sub(Fc { k: 0.0, l: [1.0, 0.0], m: 2.0 * a, g: c.g }, start);
                    self.sub(Fc { k: 0.0, l: [1.0, 0.0], m: 2.0 * b, g: c.g }, true);
                }
                return;
            }
            if top {
                self.note(Note::Parabola);
            }
            if right[0] - left[0] > 0.0 && right[1] - left[1] > 0.0 {
                if k_d * signu > 0.0 {
                    let e = left[1];
                    left[1] = right[0];
                    right[0] = left[0];
                    left[0] = e;
                } else {
                    let e = left[1];
                    left[1] = right[1];
                    right[1] = right[0];
                    right[0] = e;
                }
            }
            for i in 0..2 {
                if right[i] - left[i] > 0.0 {
                    self.push(parabola_arc(&c, left[i], right[i], not_swapped));
                }
            }
            return;
        }

        if x.det_sign == 0 {
            if top {
                self.note(Note::LightCone([xc, yc]));
            }
            let start = self.already;
            self.sub(Fc { k: 0.0, l: [1.0, 1.0], m: 2.0 * (uc + vc), g: c.g }, start);
            self.sub(Fc { k: 0.0, l: [1.0, -1.0], m: 2.0 * (uc - vc), g: c.g }, true);
            return;
        }
        if top {
            self.note(Note::Hyperbola);
        }
        if vmin - vc > 0.0 {
            let e = left[1];
            left[1] = right[0];
            right[0] = left[0];
            left[0] = e;
            change_branch = false;
            zero_or_one = if k_d * signv > 0.0 { 1 } else { 0 };
        }
        if vc - vmax > 0.0 {
            let e = left[1];
            left[1] = right[1];
            right[1] = right[0];
            right[0] = e;
            change_branch = false;
            zero_or_one = if k_d * signv > 0.0 { 0 } else { 1 };
        }
        let points = if vp.points_per_arc == 0 { 5 } else { vp.points_per_arc };
        for i in 0..2 {
            let t = signv * (2.0 * zero_or_one as f64 - 1.0);
            let dir = if t > 0.0 {
                1.0
            } else if t < 0.0 {
                -1.0
            } else {
                0.0
            };
            if right[i] - left[i] > 0.0 {
                let mut samples = Vec::with_capacity(points);
                for j in 0..points.max(1) {
                    let u = if j == 0 {
                        left[i]
                    } else {
                        let s = j as f64 / (points as f64 - 1.0);
                        left[i] * (1.0 - s) + right[i] * s
                    };
                    let v = c.roots(u, !not_swapped).get(zero_or_one);
                    let du = dir * (-k_d * signv * v + lv);
                    let dv = dir * (k_d * signu * u - lu);
                    if not_swapped {
                        samples.push(([u, v], [du, dv]));
                    } else {
                        samples.push(([v, u], [-dv, -du]));
                    }
                }
                self.push(Element::Polyline(samples));
            }
            if change_branch {
                zero_or_one = 1 - zero_or_one;
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn circle(
        &mut self,
        c: &Fc,
        x: &Exact,
        uc: f64,
        vc: f64,
        [umin, umax, vmin, vmax]: [f64; 4],
        left: [f64; 2],
        right: [f64; 2],
        top: bool,
    ) {
        if x.det_sign > 0 {
            let r = x.det.sqrt();
            if top {
                self.note(Note::Circle(r));
            }
            let mut u = [[0.0; 4]; 2];
            let mut v = [[0.0; 4]; 2];
            if vc - vmax > 0.0 {
                u[0][2] = left[1];
                u[0][3] = right[1];
                u[1][2] = left[0];
                u[1][3] = right[0];
                u[0][0] = uc;
                u[1][0] = uc;
                u[0][1] = uc;
                u[1][1] = uc;
            } else if vc - vmin > 0.0 {
                u[0][0] = left[1];
                u[0][1] = right[1];
                u[0][2] = right[0];
                u[0][3] = left[0];
                let a = if uc - r - umin > 0.0 { uc - r } else { umin };
                u[1][0] = a;
                u[1][3] = a;
                let b = if umax - uc - r > 0.0 { uc + r } else { umax };
                u[1][1] = b;
                u[1][2] = b;
            } else {
                u[0][0] = left[1];
                u[0][1] = right[1];
                u[1][0] = left[0];
                u[1][1] = right[0];
                u[0][2] = uc;
                u[1][2] = uc;
                u[0][3] = uc;
                u[1][3] = uc;
            }
            for j in 0..2 {
                for i in 0..4 {
                    let ui = u[j][i];
                    v[j][i] = if ui == uc {
                        if i < 2 {
                            vc + r
                        } else {
                            vc - r
                        }
                    } else if close(ui, uc + r) || close(ui, uc - r) {
                        vc
                    } else {
                        match c.roots(ui, false) {
                            Roots::Real(a, b) if i < 2 => a.max(b).min(vmax),
                            Roots::Real(a, b) => a.min(b).max(vmin),
                            _ => vc,
                        }
                    };
                }
            }
            for i in 0..4 {
                let s = if i == 0 || i == 2 { -1.0 } else { 1.0 };
                if !close(u[0][i], u[1][i]) || !close(v[0][i], v[1][i]) {
                    self.push(Element::Arc {
                        p0: [u[0][i], v[0][i]],
                        t0: [s * (v[0][i] - vc), s * (uc - u[0][i])],
                        t1: [s * (v[1][i] - vc), s * (uc - u[1][i])],
                        p1: [u[1][i], v[1][i]],
                    });
                }
            }
        } else if x.det_sign == 0 {
            if top {
                self.note(Note::ZeroRadius);
            }
            self.push(Element::Dot([uc, vc]));
        } else if top {
            self.note(Note::ImaginaryRadius);
        }
    }
}

fn float_frame(g: [f64; 2]) -> Frame<f64> {
    Frame::new(vec![g[0], g[1]]).unwrap_or_else(|_| Frame::plane(0.0))
}

/// Cubic Bezier through the parabola over `[x0, x1]`.
fn parabola_arc(c: &Fc, x0: f64, x1: f64, not_swapped: bool) -> Element {
    let k = c.k;
    let m = c.m;
    if not_swapped {
        let (l, n) = (c.l[0], c.l[1]);
        let y0 = c.val([x0, 0.0]) / 2.0 / n;
        let y1 = c.val([x1, 0.0]) / 2.0 / n;
        let c1 = [
            2.0 / 3.0 * x0 + x1 / 3.0,
            (x0 * x0 * k / 6.0 + x0 * x1 * k / 3.0 - 2.0 / 3.0 * x0 * l - l * x1 / 3.0 + m / 2.0) / n,
        ];
        let c2 = [
            x0 / 3.0 + 2.0 / 3.0 * x1,
            (x0 * k * x1 / 3.0 - x0 * l / 3.0 - 2.0 / 3.0 * l * x1 + k * x1 * x1 / 6.0 + m / 2.0) / n,
        ];
        Element::CubicBezier([x0, y0], c1, c2, [x1, y1])
    } else {
        let (l, n) = (c.l[1], c.l[0]);
        let y0 = c.val([0.0, x0]) / 2.0 / n;
        let y1 = c.val([0.0, x1]) / 2.0 / n;
        let c1 = [
            (x0 * x0 * k / 6.0 + x0 * x1 * k / 3.0 - 2.0 / 3.0 * x0 * l - l * x1 / 3.0 + m / 2.0) / n,
            2.0 / 3.0 * x0 + x1 / 3.0,
        ];
        let c2 = [
            (x0 * k * x1 / 3.0 - x0 * l / 3.0 - 2.0 / 3.0 * l * x1 + k * x1 * x1 / 6.0 + m / 2.0) / n,
            x0 / 3.0 + 2.0 / 3.0 * x1,
        ];
        Element::CubicBezier([y0, x0], c1, c2, [y1, x1])
    }
}

fn equation_text(e: &[f64; 5], p: usize) -> String {
    let names = ["u^2", "v^2", "u", "v", ""];
    let mut s = String::new();
    for (a, name) in e.iter().zip(names) {
        if *a == 0.0 {
            continue;
        }
        if !s.is_empty() && *a >= 0.0 {
            s.push('+');
        }
        if name.is_empty() {
            let _ = write!(s, "{a:.p$}");
        } else {
            let _ = write!(s, "{a:.p$}*{name}");
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s.push_str("==0");
    s
}

/// Visible part of `c` inside the viewport.
pub fn trace<S: Scalar>(c: &Cycle2D<S>, vp: &Viewport) -> PathSet {
    let f = Fc::from_cycle(c.cycle());
    let info = exact_info(c.cycle());
    let mut t = Tracer {
        vp,
        out: PathSet {
            equation: [-f.k * f.g[0], -f.k * f.g[1], -2.0 * f.l[0], -2.0 * f.l[1], f.m],
            viewport: Some(vp.clone()),
            ..PathSet::default()
        },
        already: false,
    };
    t.run(f, info, true);
    t.out
}

// ---------------------------------------------------------------------------
// Asymptote

struct Fmt(usize);

impl Fmt {
    fn num(&self, x: f64) -> String {
        let p = self.0;
        format!("{x:.p$}")
    }

    fn pair(&self, p: &Point) -> String {
        format!("{},{}", self.num(p[0]), self.num(p[1]))
    }

    fn node(&self, p: &Point) -> String {
        format!("({})*u", self.pair(p))
    }

    fn dir(&self, t: &Point) -> String {
        format!("{{{}}}", self.pair(t))
    }
}

/// Path text of one element, starting after the opening `(` of its first node.
fn element_path(e: &Element, f: &Fmt) -> String {
    match e {
        Element::Segment(a, b) => format!("{})*u--{}", f.pair(a), f.node(b)),
        Element::Arc { p0, t0, t1, p1 } => format!(
            "{})*u{}::{}{}",
            f.pair(p0),
            f.dir(t0),
            f.dir(t1),
            f.node(p1)
        ),
        Element::CubicBezier(a, b, c, d) => format!(
            "{})*u .. controls {} and {} .. {}",
            f.pair(a),
            f.node(b),
            f.node(c),
            f.node(d)
        ),
        Element::Dot(p) => format!("{})*u", f.pair(p)),
        Element::Polyline(v) => {
            let mut s = String::new();
            for (i, (p, t)) in v.iter().enumerate() {
                if i == 0 {
                    let _ = write!(s, "{})*u{}", f.pair(p), f.dir(t));
                } else {
                    let _ = write!(s, "::{}{}", f.node(p), f.dir(t));
                }
            }
            s
        }
    }
}

/// Asymptote commands drawing the path set.
pub fn asymptote_string(ps: &PathSet, style: &Style, precision: usize) -> String {
    let f = Fmt(precision);
    let mut out = String::new();
    if style.with_header {
        let _ = write!(out, "// Asymptote drawing of the cycle");
        if let Some(vp) = &ps.viewport {
            let _ = write!(
                out,
                " in the square [{},{}]x[{},{}]",
                f.num(vp.xmin),
                f.num(vp.xmax),
                f.num(vp.ymin),
                f.num(vp.ymax)
            );
        }
        let _ = write!(out, " for {}", equation_text(&ps.equation, precision));
        for n in &ps.notes {
            let _ = write!(out, " {}", n.text(precision));
        }
        out.push('\n');
    }
    let mut options = String::new();
    if let Some([r, g, b]) = style.rgb {
        let _ = write!(options, ",rgb({},{},{})", f.num(r), f.num(g), f.num(b));
    }
    options.push_str(&style.options);
    options.push_str(");");
    let pic = if style.picture.is_empty() {
        String::new()
    } else {
        format!("{},", style.picture)
    };
    for p in &ps.pieces {
        let body = element_path(&p.element, &f);
        if style.only_path {
            out.push_str(if p.continuation { "^^(" } else { "(" });
            out.push_str(&body);
        } else {
            let cmd = if matches!(p.element, Element::Dot(_)) { "dot" } else { "draw" };
            let _ = writeln!(out, "{cmd}({pic}({body}{options}");
        }
    }
    if style.only_path && !ps.pieces.is_empty() {
        out.push('\n');
    }
    out
}

pub fn emit_asymptote(
    ps: &PathSet,
    style: &Style,
    precision: usize,
    sink: &mut dyn io::Write,
) -> Result<(), RenderError> {
    style.validate()?;
    sink.write_all(asymptote_string(ps, style, precision).as_bytes())?;
    Ok(())
}

// ---------------------------------------------------------------------------
// SVG

/// Cubic control points of a spline leaving `p0` along `t0` and reaching
/// `p1` along `t1`.
pub fn hermite_controls(p0: &Point, t0: &Point, t1: &Point, p1: &Point) -> (Point, Point) {
    let chord = ((p1[0] - p0[0]).powi(2) + (p1[1] - p0[1]).powi(2)).sqrt();
    let unit = |t: &Point| {
        let n = (t[0] * t[0] + t[1] * t[1]).sqrt();
        if n == 0.0 {
            [0.0, 0.0]
        } else {
            [t[0] / n, t[1] / n]
        }
    };
    let (a, b) = (unit(t0), unit(t1));
    let h = chord / 3.0;
    (
        [p0[0] + h * a[0], p0[1] + h * a[1]],
        [p1[0] - h * b[0], p1[1] - h * b[1]],
    )
}

pub fn svg_element(e: &Element, style: &Style, precision: usize) -> String {
    let f = Fmt(precision);
    let colour = match style.rgb {
        Some([r, g, b]) => format!(
            "rgb({},{},{})",
            (r * 255.0).round() as u8,
            (g * 255.0).round() as u8,
            (b * 255.0).round() as u8
        ),
        None => "black".to_string(),
    };
    let stroke = format!("fill=\"none\" stroke=\"{colour}\" stroke-width=\"0.02\"");
    let pt = |p: &Point| format!("{} {}", f.num(p[0]), f.num(p[1]));
    match e {
        Element::Segment(a, b) => format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" {stroke}/>",
            f.num(a[0]),
            f.num(a[1]),
            f.num(b[0]),
            f.num(b[1])
        ),
        Element::Arc { p0, t0, t1, p1 } => {
            let (c1, c2) = hermite_controls(p0, t0, t1, p1);
            format!("<path d=\"M {} C {} {} {}\" {stroke}/>", pt(p0), pt(&c1), pt(&c2), pt(p1))
        }
        Element::CubicBezier(a, b, c, d) => {
            format!("<path d=\"M {} C {} {} {}\" {stroke}/>", pt(a), pt(b), pt(c), pt(d))
        }
        Element::Dot(p) => format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"0.05\" fill=\"{colour}\"/>",
            f.num(p[0]),
            f.num(p[1])
        ),
        Element::Polyline(v) => {
            let mut d = String::new();
            if let Some((p, _)) = v.first() {
                let _ = write!(d, "M {}", pt(p));
            }
            for w in v.windows(2) {
                let (c1, c2) = hermite_controls(&w[0].0, &w[0].1, &w[1].1, &w[1].0);
                let _ = write!(d, " C {} {} {}", pt(&c1), pt(&c2), pt(&w[1].0));
            }
            format!("<path d=\"{d}\" {stroke}/>")
        }
    }
}

/// A standalone SVG document for several path sets sharing one viewport.
pub fn svg_document(items: &[(PathSet, Style)], vp: &Viewport) -> String {
    let f = Fmt(vp.precision);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">",
        f.num(vp.xmin),
        f.num(-vp.ymax),
        f.num(vp.xmax - vp.xmin),
        f.num(vp.ymax - vp.ymin)
    );
    out.push_str("<g transform=\"scale(1,-1)\">\n");
    for (ps, style) in items {
        for e in ps.elements() {
            out.push_str(&svg_element(e, style, vp.precision));
            out.push('\n');
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

pub fn emit_svg(ps: &PathSet, style: &Style, vp: &Viewport, sink: &mut dyn io::Write) -> Result<(), RenderError> {
    style.validate()?;
    sink.write_all(svg_document(&[(ps.clone(), style.clone())], vp).as_bytes())?;
    Ok(())
}

// ---------------------------------------------------------------------------
// parsing emitted Asymptote

/// One parsed `draw(...)` or `dot(...)` command, or a bare path expression.
#[derive(Debug, Clone, PartialEq)]
pub struct Command {
    pub dot: bool,
    pub picture: Option<String>,
    /// Sub-paths joined with `^^`.
    pub elements: Vec<Element>,
    /// Everything after the path up to the closing `);`.
    pub options: String,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, RenderError> {
        Err(RenderError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), RenderError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(&format!("expected `{tok}`"))
        }
    }

    fn number(&mut self) -> Result<f64, RenderError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len()
            && (self.s[self.pos].is_ascii_digit() || b"+-.eE".contains(&self.s[self.pos]))
        {
            self.pos += 1;
        }
        let t = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        match t.parse() {
            Ok(x) => Ok(x),
            Err(_) => {
                self.pos = start;
                self.err("expected a number")
            }
        }
    }

    fn pair_body(&mut self) -> Result<Point, RenderError> {
        let a = self.number()?;
        self.expect(",")?;
        let b = self.number()?;
        Ok([a, b])
    }

    /// `(x,y)*u`
    fn node(&mut self) -> Result<Point, RenderError> {
        self.expect("(")?;
        let p = self.pair_body()?;
        self.expect(")")?;
        self.expect("*u")?;
        Ok(p)
    }

    fn dir(&mut self) -> Result<Option<Point>, RenderError> {
        if self.eat("{") {
            let p = self.pair_body()?;
            self.expect("}")?;
            Ok(Some(p))
        } else {
            Ok(None)
        }
    }

    /// One sub-path; the leading `(` has been consumed when `opened`.
    fn element(&mut self, dot: bool) -> Result<Element, RenderError> {
        let p0 = self.pair_body()?;
        self.expect(")")?;
        self.expect("*u")?;
        if dot {
            return Ok(Element::Dot(p0));
        }
        if self.eat("--") {
            return Ok(Element::Segment(p0, self.node()?));
        }
        if self.eat("..") {
            self.expect("controls")?;
            let c1 = self.node()?;
            self.expect("and")?;
            let c2 = self.node()?;
            self.expect("..")?;
            return Ok(Element::CubicBezier(p0, c1, c2, self.node()?));
        }
        let Some(t0) = self.dir()? else {
            return Ok(Element::Dot(p0));
        };
        self.expect("::")?;
        if let Some(t1) = self.dir()? {
            let p1 = self.node()?;
            return Ok(Element::Arc { p0, t0, t1, p1 });
        }
        let mut pts = vec![(p0, t0)];
        loop {
            let p = self.node()?;
            let Some(t) = self.dir()? else {
                return self.err("expected a tangent");
            };
            pts.push((p, t));
            if !self.eat("::") {
                break;
            }
        }
        Ok(Element::Polyline(pts))
    }

    fn subpaths(&mut self, dot: bool) -> Result<Vec<Element>, RenderError> {
        let mut v = vec![self.element(dot)?];
        while self.eat("^^") {
            self.expect("(")?;
            v.push(self.element(dot)?);
        }
        Ok(v)
    }
}

/// Parses text produced by [`emit_asymptote`]; comment lines are skipped.
pub fn parse_asymptote(text: &str) -> Result<Vec<Command>, RenderError> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
    };
    let mut out = Vec::new();
    loop {
        p.skip_ws();
        if p.pos >= p.s.len() {
            break;
        }
        if p.eat("//") {
            while p.pos < p.s.len() && p.s[p.pos] != b'\n' {
                p.pos += 1;
            }
            continue;
        }
        let dot = if p.eat("draw(") {
            false
        } else if p.eat("dot(") {
            true
        } else if p.eat("(") {
            // bare path expression
            let elements = p.subpaths(false)?;
            out.push(Command {
                dot: false,
                picture: None,
                elements,
                options: String::new(),
            });
            continue;
        } else {
            return p.err("expected a command");
        };
        p.skip_ws();
        let mut picture = None;
        if p.pos < p.s.len() && p.s[p.pos] != b'(' {
            let start = p.pos;
            while p.pos < p.s.len() && p.s[p.pos] != b',' {
                p.pos += 1;
            }
            picture = Some(String::from_utf8_lossy(&p.s[start..p.pos]).trim().to_string());
            p.expect(",")?;
        }
        p.expect("(")?;
        let elements = p.subpaths(dot)?;
        let start = p.pos;
        let Some(end) = text[start..].find(");") else {
            return p.err("unterminated command");
        };
        let options = text[start..start + end].to_string();
        p.pos = start + end + 2;
        out.push(Command {
            dot,
            picture,
            elements,
            options,
        });
    }
    Ok(out)
}
