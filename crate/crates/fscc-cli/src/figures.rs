//! The figure corpus: orthogonality pictures, parabolic centres and foci,
//! zero-radius cycles, diameters, infinitesimal cycles, Cayley transforms
//! and inversions of a grid.
//!
//! Figures are computed in `f64`. Each figure is a list of parts; cycle
//! parts go through [`render::trace`], the rest are labelled points,
//! segments and raw Asymptote decorations.

use std::fmt::Write as _;

use fscc::cycle::{Condition, Cycle, CycleError, SignMatrix, Slot};
use fscc::render::{self, PathSet, Point, Style, Viewport};
use fscc::{jump, Cycle2D, Frame, Jet, Scalar};

type C = Cycle<f64>;
type Result<T> = std::result::Result<T, CycleError>;

#[derive(Debug, Clone)]
pub enum Part {
    Cycle { paths: PathSet, style: Style },
    /// `pair[] z = {...}; dot(z);` followed by labels `(text, index, direction)`.
    Points {
        points: Vec<Point>,
        labels: Vec<(String, usize, &'static str)>,
    },
    Segment { a: Point, b: Point, options: String },
    Label { text: String, at: Point, dir: &'static str },
    /// A dot with its own colour.
    Dot { at: Point, rgb: [f64; 3] },
    /// Signature caption and unit ticks.
    Units { s: i64, s1: i64 },
    Axes,
    /// Asymptote-only text.
    Raw(String),
}

#[derive(Debug, Clone)]
pub struct Figure {
    pub name: String,
    pub viewport: Viewport,
    pub parts: Vec<Part>,
}

const EPH: [char; 3] = ['e', 'p', 'h'];
const SIGNS: [i64; 3] = [-1, 0, 1];

fn eph(s: i64) -> char {
    EPH[(s + 1) as usize]
}

pub fn names() -> Vec<String> {
    let mut v = Vec::new();
    for prefix in ["first-ort", "sec-ort"] {
        for s in SIGNS {
            for s1 in SIGNS {
                v.push(format!("{prefix}-{}{}", eph(s), eph(s1)));
            }
        }
    }
    for n in ["same-cycle", "parab-cent", "zero-cycles", "parab-diam", "dist-extr", "infinites"] {
        v.push(n.to_string());
    }
    for s in SIGNS {
        for s1 in SIGNS {
            if s == 0 || s == s1 {
                v.push(format!("cayley-{}{}", eph(s), eph(s1)));
            }
        }
    }
    for s in SIGNS {
        v.push(format!("inversion-{}", eph(s)));
    }
    v.push("pre-invers".to_string());
    v
}

#[derive(Debug, thiserror::Error)]
pub enum FigureError {
    #[error("unknown figure `{0}`")]
    Unknown(String),
    #[error("figure `{name}`: {source}")]
    Cycle {
        name: String,
        #[source]
        source: CycleError,
    },
}

fn parse_eph(c: char) -> Option<i64> {
    EPH.iter().position(|&x| x == c).map(|i| i as i64 - 1)
}

fn two_signs(s: &str) -> Option<(i64, i64)> {
    let mut it = s.chars();
    let a = parse_eph(it.next()?)?;
    let b = parse_eph(it.next()?)?;
    it.next().is_none().then_some((a, b))
}

pub fn build(name: &str) -> std::result::Result<Figure, FigureError> {
    let unknown = || FigureError::Unknown(name.to_string());
    let r = if let Some(rest) = name.strip_prefix("first-ort-") {
        let (s, s1) = two_signs(rest).ok_or_else(unknown)?;
        orthogonality(name, s, s1, false)
    } else if let Some(rest) = name.strip_prefix("sec-ort-") {
        let (s, s1) = two_signs(rest).ok_or_else(unknown)?;
        orthogonality(name, s, s1, true)
    } else if let Some(rest) = name.strip_prefix("cayley-") {
        let (s, s1) = two_signs(rest).ok_or_else(unknown)?;
        if s != 0 && s != s1 {
            return Err(unknown());
        }
        cayley(name, s, s1)
    } else if let Some(rest) = name.strip_prefix("inversion-") {
        let mut it = rest.chars();
        let s = it.next().and_then(parse_eph).ok_or_else(unknown)?;
        if it.next().is_some() {
            return Err(unknown());
        }
        inversion(name, s)
    } else {
        match name {
            "same-cycle" => same_cycle(name),
            "parab-cent" => parab_cent(name),
            "zero-cycles" => zero_cycles(name),
            "parab-diam" => parab_diam(name),
            "dist-extr" => dist_extr(name),
            "infinites" => infinites(name),
            "pre-invers" => pre_invers(name),
            _ => return Err(unknown()),
        }
    };
    r.map_err(|source| FigureError::Cycle {
        name: name.to_string(),
        source,
    })
}

// ---------------------------------------------------------------------------
// helpers

fn plane(s: f64) -> Frame<f64> {
    Frame::plane(s)
}

fn diag(a: f64, b: f64) -> Frame<f64> {
    Frame::new(vec![a, b]).expect("two entries")
}

fn signs(a: f64, b: f64) -> SignMatrix<f64> {
    SignMatrix::new(vec![a, b])
}

fn cyc(k: f64, l: f64, n: f64, m: f64, e: &Frame<f64>) -> Result<C> {
    Cycle::new(k, vec![l, n], m, e.clone())
}

fn zr(l: [f64; 2], e: &Frame<f64>, r2: f64) -> Result<C> {
    Cycle::zero_radius(l.to_vec(), e, r2, None, None)
}

fn root(c: &C, y: f64, first: bool, i: usize) -> Result<f64> {
    let r = Cycle2D::from_cycle(c.clone())?.roots(&y, first)?;
    r.get(i)
        .copied()
        .ok_or(CycleError::Domain("no real root for the figure point"))
}

fn passing<'a>(w: Point) -> Condition<'a, f64> {
    Box::new(move |c: &C| c.val(&w))
}

fn pt(v: &[f64]) -> Point {
    [v[0], v[1]]
}

fn vp(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Viewport {
    Viewport {
        xmin,
        xmax,
        ymin,
        ymax,
        ..Viewport::default()
    }
}

struct Builder {
    fig: Figure,
}

impl Builder {
    fn new(name: &str, viewport: Viewport) -> Self {
        Builder {
            fig: Figure {
                name: name.to_string(),
                viewport,
                parts: Vec::new(),
            },
        }
    }

    fn draw_in(&mut self, c: &C, v: &Viewport, rgb: [f64; 3], options: &str, points: usize) -> Result<()> {
        let c2 = Cycle2D::from_cycle(c.clone())?;
        let v = v.clone().with_points(points);
        let paths = render::trace(&c2, &v);
        let style = Style::new().rgb(rgb[0], rgb[1], rgb[2]).options(options);
        self.fig.parts.push(Part::Cycle { paths, style });
        Ok(())
    }

    fn draw(&mut self, c: &C, rgb: [f64; 3], options: &str, points: usize) -> Result<()> {
        let v = self.fig.viewport.clone();
        self.draw_in(c, &v, rgb, options, points)
    }

    fn points(&mut self, points: Vec<Point>, labels: &[(&str, usize, &'static str)]) {
        let labels = labels.iter().map(|(t, i, d)| (t.to_string(), *i, *d)).collect();
        self.fig.parts.push(Part::Points { points, labels });
    }

    fn segment(&mut self, a: Point, b: Point, options: &str) {
        self.fig.parts.push(Part::Segment {
            a,
            b,
            options: options.to_string(),
        });
    }

    fn raw(&mut self, s: &str) {
        self.fig.parts.push(Part::Raw(s.to_string()));
    }

    fn label(&mut self, text: &str, at: Point, dir: &'static str) {
        self.fig.parts.push(Part::Label {
            text: text.to_string(),
            at,
            dir,
        });
    }

    fn dot(&mut self, at: Point, rgb: [f64; 3]) {
        self.fig.parts.push(Part::Dot { at, rgb });
    }

    fn units(&mut self, s: i64, s1: i64) {
        self.fig.parts.push(Part::Units { s, s1 });
    }

    fn axes(&mut self) {
        self.fig.parts.push(Part::Axes);
    }

    fn done(self) -> Figure {
        self.fig
    }
}

// ---------------------------------------------------------------------------
// orthogonality

/// Ghost cycle of `c`: centre `(u3, -v3 chi(s))` with the determinant of `c`
/// taken with signs `diag(-1, s1)`.
fn ghost(c: &C, s: f64, s1: f64) -> Result<C> {
    let e = plane(s);
    let c = c.with_metric(&e)?;
    let (k, n) = (*c.k(), *c.l_at(1));
    let u3 = c.center(None)?[0];
    let v3 = -n * s1 / k;
    let r2 = c.det(Some(&e), Some(&signs(-1.0, s1)))?;
    zr([u3, -v3 * jump(&s)], &e, r2)
}

/// Reflection of the real line in `c` used for the s-inversion. It is
/// formed at `s1 + eps` and the limit is taken, so that `s1 = 0` has the
/// same meaning as for the other signatures.
fn s_inversion_cycle(c: &C, s: f64, s1: f64) -> Result<C> {
    let jc = |x: f64| Jet::constant(x);
    let e = Frame::plane(jc(s));
    let s1j = jc(s1) + Jet::eps();
    let es = Frame::plane(s1j.clone());
    let cj = Cycle::new(jc(*c.k()), vec![jc(*c.l_at(0)), jc(*c.l_at(1))], jc(*c.m()), e.clone())?;
    let nk = jc(*c.l_at(1) * *c.k());
    let one = Jet::one();
    let rl = Cycle::new(Jet::zero(), vec![Jet::zero(), one.clone()], Jet::zero(), e)?;
    let r = rl
        .cycle_similarity(
            &cj,
            Some(&es),
            Some(&SignMatrix::new(vec![one.clone(), s1j])),
            Some(&SignMatrix::new(vec![one, jc(jump(&s))])),
        )?
        .normalize(&nk)?;
    let c0 = |x: &Jet<f64>| x.coeff(0).map_err(CycleError::from);
    cyc(c0(r.k())?, c0(r.l_at(0))?, c0(r.l_at(1))?, c0(r.m())?, &plane(s))
}

fn orthogonality(name: &str, si: i64, si1: i64, focal: bool) -> Result<Figure> {
    let (s, s1) = (si as f64, si1 as f64);
    let e = plane(s);
    let es = plane(s1);
    let (k, l) = (2.0 / 3.0, 2.0 / 3.0);
    let (n, m) = match (focal, si) {
        (false, 1) => (-1.0, -2.0),
        (false, _) => (0.5, -2.0),
        (true, 1) => (-4.0 / 3.0, -3.0),
        (true, _) => (0.5, -2.0),
    };
    let ymax = match (focal, si) {
        (false, 0) => 25.0 / 4.0,
        (false, _) => 4.0,
        (true, 0) => 6.0,
        (true, _) => 15.0 / 4.0,
    };
    let ymin = if focal { -13.0 / 4.0 } else { -3.0 };
    let mut b = Builder::new(name, vp(-11.0 / 4.0, 5.0, ymin, ymax));

    let cf = cyc(k, l, n, m, &e)?;
    let cg = if focal {
        s_inversion_cycle(&cf, s, s1)?
    } else {
        ghost(&cf, s, s1)?
    };
    let s2 = signs(1.0, jump(&1.0));

    // points b, a, centre (or focus), c, then the image of b
    let mut pts: Vec<Point> = Vec::with_capacity(5);
    if !focal {
        let centre = pt(&cf.center(None)?);
        let dv = -n * s1 / k;
        match si {
            -1 => {
                pts.push([11.0 / 4.0, root(&cf, 11.0 / 4.0, false, 1)?]);
                pts.push([root(&cg, 0.5, true, 0)?, 0.5]);
                pts.push(centre);
            }
            0 => {
                pts.push([17.0 / 4.0, root(&cf, 17.0 / 4.0, false, 0)?]);
                pts.push([root(&cg, 0.0, true, 0)?, 1.5]);
                pts.push([centre[0], root(&cf, l / k, false, 0)?]);
            }
            _ => {
                pts.push([3.0, root(&cf, 3.0, false, 0)?]);
                pts.push([root(&cg, 0.75, true, 0)?, 0.75]);
                pts.push(centre);
            }
        }
        pts.push([l / k, dv]);
        let p = cf.moebius_map(&pts[0], Some(&e), Some(&signs(1.0, -s1)))?;
        pts.push(pt(&p));
    } else {
        let f = Cycle2D::from_cycle(cf.clone())?.focus(None)?;
        let f4 = Cycle2D::from_cycle(cf.clone())?.focus(Some(&diag(-1.0, -s1)))?;
        match si {
            -1 => {
                pts.push([11.0 / 4.0, root(&cf, 11.0 / 4.0, false, 1)?]);
                pts.push([root(&cg, 0.5, true, 0)?, 0.5]);
                pts.push(f);
            }
            0 => {
                pts.push([4.0, root(&cf, 4.0, false, 0)?]);
                pts.push([root(&cf, 0.0, true, 0)?, 1.5]);
                pts.push([f[0], f[0]]);
            }
            _ => {
                pts.push([root(&cf, 1.0, true, 1)?, 1.0]);
                pts.push([root(&cg, 1.5, true, 1)?, 1.5]);
                pts.push(f);
            }
        }
        pts.push([l / k, f4[1]]);
        let p = cg.moebius_map(&pts[0], Some(&e), Some(&signs(1.0, -jump(&s))))?;
        pts.push(pt(&p));
    }

    let count = if si == 1 { 4 } else { 5 };
    for j in 0..2 {
        for i in 0..count {
            let k1 = if si == 0 { 3.0 * i as f64 / 2.0 } else { i as f64 / 4.0 };
            let c1 = cyc(k1, 0.0, 0.5, 0.0, &e)?;
            let cond: Condition<'_, f64> = if focal {
                let (cf, es, s2) = (cf.clone(), es.clone(), s2.clone());
                Box::new(move |x: &C| cf.f_orthogonality(x, Some(&es), Some(&s2)))
            } else {
                let (cf, es) = (cf.clone(), es.clone());
                Box::new(move |x: &C| x.inner_product(&cf, Some(&es), None))
            };
            // a pencil member through a point on the degenerate locus has no solution
            let Ok(cp) = c1.subject_to(vec![passing(pts[j]), cond], Some(&[Slot::M, Slot::L(0)])) else {
                continue;
            };
            let t = 0.3 + i as f64 / 8.0;
            b.draw(&cp, [0.2, 0.2 + j as f64 * t, 0.2 + (1 - j) as f64 * t], "", 0)?;
        }
    }
    b.draw(&cf, [0.8, 0.0, 0.0], "+1", 0)?;
    b.draw(&cg, [0.0, 0.0, 0.0], "+0.3+dashed", 0)?;
    if si == 0 {
        b.draw(&ghost(&cf, 0.0, 0.0)?, [0.0, 0.0, 0.0], "+dotted", 0)?;
    }

    let d_dir = if si == 1 { "NW" } else { "NE" };
    b.points(
        pts.clone(),
        &[("$a$", 1, "NW"), ("$b$", 0, "SE"), ("$c$", 3, "E"), ("$d$", 4, d_dir)],
    );
    if si == 0 {
        b.segment([pts[2][0], 0.0], pts[2], "0.3+dotted");
        b.segment([pts[3][0], 0.0], pts[3], "0.3+dotted");
    }
    b.units(si, si1);
    b.axes();
    Ok(b.done())
}

// ---------------------------------------------------------------------------
// extra pictures

fn extra_vp() -> Viewport {
    vp(-5.0, 5.0, -13.0 / 4.0, 6.0)
}

fn same_cycle(name: &str) -> Result<Figure> {
    let mut b = Builder::new(name, extra_vp());
    let mut z = Vec::new();
    let mut last = None;
    for j in -1..2 {
        let e = diag(-1.0, j as f64);
        let c1 = cyc(1.0, -2.5, 1.0, 3.75, &e)?;
        let c2 = cyc(1.0, 2.75, 3.0, 14.0625, &e)?;
        let t = 0.4 * (j + 1) as f64;
        b.draw(&c1, [0.0, 1.0 - t, t], "+.75", 7)?;
        b.draw(&c2, [0.0, 1.0 - t, t], "+.75", 7)?;
        z.push(pt(&c1.center(None)?));
        z.push(pt(&c2.center(None)?));
        last = Some(c1);
    }
    let c1 = last.expect("three metrics");
    z.push([root(&c1, 0.0, true, 0)?, 0.0]);
    z.push([root(&c1, 0.0, true, 1)?, 0.0]);
    b.points(
        z.clone(),
        &[
            ("$c_e$", 0, "E"),
            ("$c_p$", 2, "SE"),
            ("$c_h$", 4, "E"),
            ("$r_0$", 6, "SW"),
            ("$c_e$", 1, "E"),
            ("$c_p$", 3, "SE"),
            ("$c_h$", 5, "E"),
            ("$r_1$", 7, "SE"),
        ],
    );
    b.segment(z[0], z[4], ".3+dashed");
    b.segment(z[1], z[5], ".3+dashed");
    b.axes();
    Ok(b.done())
}

fn parab_cent(name: &str) -> Result<Figure> {
    let mut b = Builder::new(name, extra_vp());
    let par = diag(-1.0, 0.0);
    let c1 = cyc(1.0, -1.5, 2.0, 3.75, &par)?;
    let c2 = cyc(1.0, 2.0, 2.0, -3.5, &par)?;
    b.draw(&c1, [0.0, 0.6, 0.4], "+.75", 7)?;
    b.draw(&c2, [0.0, 0.6, 0.4], "+.75", 7)?;
    let eu = diag(-1.0, -1.0);
    let mut z = vec![pt(&c1.center(Some(&eu))?), pt(&c2.center(Some(&eu))?)];
    let (p1, p2) = (Cycle2D::from_cycle(c1)?, Cycle2D::from_cycle(c2)?);
    for j in -1..2 {
        let ms = diag(-1.0, j as f64);
        z.push(p1.focus(Some(&ms))?);
        z.push(p2.focus(Some(&ms))?);
    }
    let mut labels = Vec::new();
    for j in 1..3 {
        labels.push(("$c_e$", j - 1, "N"));
        labels.push(("$f_e$", j + 1, "E"));
        labels.push(("$f_p$", j + 3, "E"));
        labels.push(("$f_h$", j + 5, "E"));
    }
    b.points(z.clone(), &labels);
    b.segment(z[0], z[1], "dashed");
    for j in 1..3 {
        b.segment(z[j + 1], z[j + 5], "dotted+0.5");
    }
    b.axes();
    Ok(b.done())
}

fn zero_cycles(name: &str) -> Result<Figure> {
    let mut b = Builder::new(name, vp(-5.0, 15.0, -5.0, 5.0));
    for i1 in -1..2 {
        for i2 in -1..2 {
            let e = plane(i1 as f64);
            let es = plane(i2 as f64);
            let w = [6.0 * i1 as f64 + 4.0, 1.7];
            let z1 = Cycle::zero_radius(w.to_vec(), &e, 0.0, Some(&es), None)?;
            let (a, c) = (i1 as f64, i2 as f64);
            b.draw(&z1, [0.5 + 0.4 * a, 0.5 - 0.3 * c, 0.5 + 0.3 * c], "", 7)?;
            let f = Cycle2D::from_cycle(z1)?.focus(Some(&e))?;
            b.dot(f, [0.4 + 0.4 * a, 0.4 - 0.3 * c, 0.6 + 0.3 * c]);
        }
    }
    b.axes();
    Ok(b.done())
}

fn labels_22(b: &mut Builder, mut z: Vec<Point>) {
    z.push([z[2][0], 0.0]);
    z.push([z[3][0], 0.0]);
    b.segment(z[2], z[3], "black+.3");
    b.segment(z[0], z[1], "black+1.2");
    b.segment(z[4], z[5], "black+1.2");
    b.points(
        z,
        &[("$z_1$", 0, "NW"), ("$z_2$", 1, "SE"), ("$z_3$", 2, "SW"), ("$z_4$", 3, "SE")],
    );
}

fn parab_diam(name: &str) -> Result<Figure> {
    let mut b = Builder::new(name, extra_vp());
    let par = diag(-1.0, 0.0);
    let c10 = cyc(1.0, -2.5, 0.5, 4.0, &par)?;
    b.draw(&c10, [0.1, 0.0, 0.6], "", 0)?;
    let mut z = vec![[root(&c10, 0.0, true, 0)?, 0.0], [root(&c10, 0.0, true, 1)?, 0.0]];
    b.draw(&cyc(1.0, 2.5, 0.5, 8.0, &par)?, [0.1, 0.6, 0.0], "", 7)?;
    let c10 = cyc(-1.0, -2.5, 0.5, 8.0 - 12.5, &par)?;
    b.draw(&c10, [0.1, 0.6, 0.0], "+dashed ", 7)?;
    z.push([root(&c10, 0.0, true, 1)?, 0.0]);
    z.push([root(&c10, 0.0, true, 0)?, 0.0]);
    labels_22(&mut b, z);
    b.axes();
    Ok(b.done())
}

/// Cycle with `k = 1` and given `l` through two points.
fn through_two(w: Point, w1: Point, l: f64, e: &Frame<f64>) -> Result<C> {
    cyc(1.0, l, 0.0, 0.0, e)?.subject_to(vec![passing(w), passing(w1)], Some(&[Slot::M, Slot::L(1)]))
}

fn dist_extr(name: &str) -> Result<Figure> {
    let v = extra_vp();
    let (xmin, xmax, ymax) = (v.xmin, v.xmax, v.ymax);
    let mut b = Builder::new(name, v);
    let z = vec![
        [xmin + 1.0, ymax - 5.0],
        [xmin + 3.0, ymax - 6.5],
        [xmax - 4.0, ymax - 5.0],
        [xmax - 1.0, ymax - 2.0],
    ];
    for j in -2..3 {
        let jf = j as f64;
        let ce = through_two(z[0], z[1], xmin + 2.0 + 0.5 * jf, &plane(-1.0))?;
        let a = 0.4 * jf.abs();
        b.draw(&ce, [0.0, a, 1.0 - a], if j == 0 { "+1" } else { "+.3" }, 0)?;
        let cp = through_two(z[2], z[3], xmax - 2.5 - 0.2 * (jf + 2.0), &plane(0.0))?;
        let t = 0.2 * (jf + 2.0);
        b.draw(&cp, [t, 0.0, 1.0 - t], if j == -2 { "+1" } else { "+.3" }, 7)?;
    }
    let mid = |p: Point, q: Point| [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
    let (de, dp) = (mid(z[0], z[1]), mid(z[2], z[3]));
    labels_22(&mut b, z);
    b.label("$d_e$", de, "NE");
    b.label("$d_p$", [dp[0], 0.0], "S");
    b.axes();
    Ok(b.done())
}

fn infinites(name: &str) -> Result<Figure> {
    let v = extra_vp();
    let low = Viewport {
        ymax: v.ymax / 3.0,
        ..v.clone()
    };
    let hyp = diag(-1.0, 1.0);
    let par = diag(-1.0, 0.0);
    let eu = diag(-1.0, -1.0);
    let mut b = Builder::new(name, v.clone());
    for j in 1..5 {
        let jf = j as f64;
        let t = 0.2 * jf;
        b.draw(&zr([-2.5, 4.5], &eu, 16.0 * 2f64.powi(-2 * j))?, [0.0, t, 1.0 - t], "+.3", 0)?;
        b.draw_in(
            &zr([1.0, 1.25], &hyp, 25.0 * 1.8f64.powi(-2 * j))?,
            &low,
            [t, 1.0 - t, 0.0],
            "+.3",
            5 + j as usize,
        )?;
        let q = 3f64.powi(-j);
        b.draw(
            &cyc(1.0, 2.0, q, 4.0 + 2.0 * q - q * q, &par)?,
            [1.0 - 0.17 * jf, 0.0, 0.17 * jf],
            "+.3",
            7,
        )?;
    }
    b.segment([2.0, 1.0], [2.0, v.ymax], "blue+1");
    b.draw_in(&zr([1.0, 1.25], &hyp, 0.0)?, &low, [1.0, 0.0, 0.0], "+1", 0)?;
    b.points(vec![[-2.5, 4.5], [2.0, 1.0]], &[]);
    b.axes();
    Ok(b.done())
}

fn cayley(name: &str, si: i64, si1: i64) -> Result<Figure> {
    let (s, s1) = (si as f64, si1 as f64);
    let e = plane(s);
    let es = plane(s1);
    let mut b = Builder::new(name, vp(-2.0, 2.0, -3.5, 3.0));
    let real_line = cyc(0.0, 0.0, 1.0, 0.0, &e)?;
    for si2 in [-1i64, 1] {
        if si != 0 {
            let c10f = cyc(1.0, 0.0, si2 as f64, s, &e)?;
            let uc = real_line.cycle_similarity(&c10f, Some(&es), None, None)?.normalize(&1.0)?;
            b.draw(&uc, [0.0, 0.0, 0.7], "+1.5", 7)?;
            let opt = if si2 == si1 { "+1" } else { "+Dotted " };
            b.draw(&c10f.normalize(&1.0)?, [0.0, 0.7, 0.0], opt, 7)?;
        } else {
            let c = Cycle2D::from_cycle(real_line.clone())?.cayley_parab(&s1)?;
            b.draw(c.cycle(), [0.0, 0.0, 0.7], "+1.5", 7)?;
        }
    }
    b.units(si, si1);
    b.axes();
    Ok(b.done())
}

fn grid_values() -> impl Iterator<Item = f64> {
    (0..=20).map(|j| -4.0 + 0.4 * j as f64)
}

/// Unit cycle centred at `(0, (1 - |s|)/2)`.
fn unit_cycle(s: f64) -> Result<C> {
    zr([0.0, (1.0 - s.abs()) / 2.0], &plane(s), 1.0)
}

fn pre_invers(name: &str) -> Result<Figure> {
    let mut b = Builder::new(name, vp(-2.0, 2.0, -2.0, 2.0));
    let e = plane(-1.0);
    b.raw("u=1cm;\n");
    for i in grid_values() {
        b.draw(&cyc(0.0, 0.0, 1.0, i, &e)?, [0.5, 0.75, 0.5], "+0.25pt", 7)?;
        b.draw(&cyc(0.0, 1.0, 0.0, i, &e)?, [0.5, 0.5, 0.75], "+0.25pt", 7)?;
    }
    b.draw(&unit_cycle(-1.0)?, [1.0, 0.0, 0.0], "+.75pt", 7)?;
    b.axes();
    Ok(b.done())
}

fn inversion(name: &str, si: i64) -> Result<Figure> {
    let s = si as f64;
    let e = plane(s);
    let mut b = Builder::new(name, vp(-2.0, 2.0, -2.0, 2.0));
    let c2 = unit_cycle(s)?;
    for i in grid_values() {
        let h = cyc(0.0, 0.0, 1.0, i, &e)?.cycle_similarity(&c2, None, None, None)?;
        b.draw(&h, [0.5, 0.75, 0.5], "+0.25pt", 9)?;
        let v = cyc(0.0, 1.0, 0.0, i, &e)?.cycle_similarity(&c2, None, None, None)?;
        b.draw(&v, [0.5, 0.5, 0.75], "+0.25pt", 9)?;
    }
    b.draw(&c2, [1.0, 0.0, 0.0], "+.75pt", 7)?;
    let zinf = cyc(0.0, 0.0, 0.0, 1.0, &e)?.cycle_similarity(&c2, None, None, None)?;
    b.draw(&zinf, [0.0, 0.0, 1.0], if si == -1 { "+3pt" } else { "+.75pt" }, 0)?;
    b.axes();
    Ok(b.done())
}

// ---------------------------------------------------------------------------
// output

const PREAMBLE: &str = "real u = 1cm;\n\
void draw_axes(pair a, pair b) {\n  \
draw((a.x, 0)*u--(b.x, 0)*u, Arrow);\n  \
draw((0, a.y)*u--(0, b.y)*u, Arrow);\n}\n";

impl Figure {
    pub fn to_asymptote(&self) -> String {
        let p = self.viewport.precision;
        let mut out = String::new();
        let _ = writeln!(out, "// figure {}", self.name);
        out.push_str(PREAMBLE);
        out.push_str("erase();\n");
        for part in &self.parts {
            match part {
                Part::Cycle { paths, style } => out.push_str(&render::asymptote_string(paths, style, p)),
                Part::Points { points, labels } => {
                    out.push_str("pair[] z={");
                    for (i, q) in points.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        let _ = write!(out, "({:.p$}, {:.p$})*u", q[0], q[1]);
                    }
                    out.push_str("};\n  dot(z);\n");
                    for (t, i, d) in labels {
                        let _ = writeln!(out, "  label(\"{t}\", z[{i}], {d});");
                    }
                }
                Part::Segment { a, b, options } => {
                    let _ = writeln!(
                        out,
                        "  draw(({:.p$},{:.p$})*u--({:.p$},{:.p$})*u, {options});",
                        a[0], a[1], b[0], b[1]
                    );
                }
                Part::Label { text, at, dir } => {
                    let _ = writeln!(out, "  label(\"{text}\", ({:.p$},{:.p$})*u, {dir});", at[0], at[1]);
                }
                Part::Dot { at, rgb } => {
                    let _ = writeln!(
                        out,
                        "dot(({:.p$}, {:.p$})*u, {:.p$}red+{:.p$}green+{:.p$}blue);",
                        at[0], at[1], rgb[0], rgb[1], rgb[2]
                    );
                }
                Part::Units { s, s1 } => {
                    let _ = write!(
                        out,
                        "  label(\"$\\sigma={s}, \\breve{{\\sigma}}={s1}$\", (0, {:.p$})*u, S);\n\
                         draw((1,-0.1)*u--(1,0.1)*u);\n\
                         draw((-0.1,1)*u--(0.1,1)*u);\n\
                         label(\"$1$\", (1,0)*u, S);\n\
                         label(\"$1$\", (0,1)*u, E);\n",
                        self.viewport.ymin
                    );
                }
                Part::Axes => {
                    let v = &self.viewport;
                    let _ = writeln!(
                        out,
                        "  draw_axes(({:.p$}, {:.p$}), ( {:.p$}, {:.p$}));",
                        v.xmin, v.ymin, v.xmax, v.ymax
                    );
                }
                Part::Raw(s) => out.push_str(s),
            }
        }
        let _ = writeln!(out, "shipout(\"{}\");", self.name);
        out
    }

    pub fn to_svg(&self) -> String {
        let vp = &self.viewport;
        let p = vp.precision;
        let mut items = Vec::new();
        for part in &self.parts {
            if let Part::Cycle { paths, style } = part {
                items.push((paths.clone(), style.clone()));
            }
        }
        let mut doc = render::svg_document(&items, vp);
        // decorations; text stays outside the flipped group
        let mut extra = String::new();
        for part in &self.parts {
            match part {
                Part::Points { points, labels } => {
                    for q in points {
                        let _ = writeln!(
                            extra,
                            "<circle cx=\"{:.p$}\" cy=\"{:.p$}\" r=\"0.05\" fill=\"black\"/>",
                            q[0], -q[1]
                        );
                    }
                    for (t, i, _) in labels {
                        if let Some(q) = points.get(*i) {
                            let _ = writeln!(
                                extra,
                                "<text x=\"{:.p$}\" y=\"{:.p$}\" font-size=\"0.3\">{}</text>",
                                q[0],
                                -q[1],
                                t.trim_matches('$')
                            );
                        }
                    }
                }
                Part::Segment { a, b, .. } => {
                    let _ = writeln!(
                        extra,
                        "<line x1=\"{:.p$}\" y1=\"{:.p$}\" x2=\"{:.p$}\" y2=\"{:.p$}\" stroke=\"black\" stroke-width=\"0.01\"/>",
                        a[0], -a[1], b[0], -b[1]
                    );
                }
                _ => {}
            }
        }
        let at = doc.rfind("</svg>").unwrap_or(doc.len());
        doc.insert_str(at, &extra);
        doc
    }

    /// Every cycle fragment re-parses under the Asymptote grammar of the
    /// renderer. Returns the number of parsed commands.
    pub fn self_check(&self) -> std::result::Result<usize, render::RenderError> {
        let p = self.viewport.precision;
        let mut n = 0;
        for part in &self.parts {
            if let Part::Cycle { paths, style } = part {
                let text = render::asymptote_string(paths, style, p);
                let cmds = render::parse_asymptote(&text)?;
                if cmds.iter().map(|c| c.elements.len()).sum::<usize>() != paths.pieces.len() {
                    return Err(render::RenderError::Parse {
                        pos: 0,
                        msg: format!("element count mismatch in {}", self.name),
                    });
                }
                n += cmds.len();
            }
        }
        Ok(n)
    }

    pub fn set_precision(&mut self, precision: usize) {
        self.viewport.precision = precision;
    }
}
