//! Properties of the tracer and the Asymptote emitter in the float ring.

use fscc::render::{asymptote_string, parse_asymptote, trace, Element, Style, Viewport};
use fscc::{Cycle2D, Frame};
use proptest::prelude::*;

fn small() -> impl Strategy<Value = f64> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| n as f64 / d as f64)
}

fn cycle() -> impl Strategy<Value = Cycle2D<f64>> {
    ((-1i64..=1), prop::collection::vec(small(), 4)).prop_map(|(s, v)| {
        Cycle2D::new(v[0], v[1], v[2], v[3], Frame::plane(s as f64)).unwrap()
    })
}

fn bezier(p: [[f64; 2]; 4], t: f64) -> [f64; 2] {
    let s = 1.0 - t;
    let w = [s * s * s, 3.0 * s * s * t, 3.0 * s * t * t, t * t * t];
    let mut r = [0.0; 2];
    for (q, wi) in p.iter().zip(w) {
        r[0] += wi * q[0];
        r[1] += wi * q[1];
    }
    r
}

fn scale(c: &Cycle2D<f64>) -> f64 {
    [*c.k(), *c.l_at(0), *c.n(), *c.m()]
        .iter()
        .fold(1.0f64, |a, x| a.max(x.abs()))
}

proptest! {
    #[test]
    fn points_lie_on_the_cycle(c in cycle()) {
        let ps = trace(&c, &Viewport::default());
        let tol = 1e-6 * scale(&c);
        for el in ps.elements() {
            for p in el.on_curve_points() {
                let bound = tol * (1.0 + p[0] * p[0] + p[1] * p[1]);
                prop_assert!(c.val(&p).unwrap().abs() <= bound, "{el:?} off {c:?}");
            }
        }
    }

    #[test]
    fn points_stay_in_the_viewport(c in cycle(), shrink in 0.0f64..4.0) {
        let big = Viewport::default();
        let vp = Viewport::new(-5.0 + shrink, 5.0 - shrink / 2.0, -5.0 + shrink / 3.0, 5.0 - shrink).unwrap();
        for v in [&big, &vp] {
            for el in trace(&c, v).elements() {
                for p in el.on_curve_points() {
                    prop_assert!(v.contains(&p, 1e-6), "{p:?} outside {v:?}");
                }
            }
        }
    }

    #[test]
    fn parabola_beziers_are_exact(k in small(), l in small(), n in small(), m in small()) {
        prop_assume!(k != 0.0 && n != 0.0);
        let c = Cycle2D::new(k, l, n, m, Frame::plane(0.0)).unwrap();
        for el in trace(&c, &Viewport::default()).elements() {
            if let Element::CubicBezier(a, b, cc, d) = el {
                for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
                    let p = bezier([*a, *b, *cc, *d], t);
                    prop_assert!(c.val(&p).unwrap().abs() <= 1e-9 * scale(&c) * (1.0 + p[0] * p[0] + p[1] * p[1]));
                }
            }
        }
    }

    #[test]
    fn emitted_text_parses_back(c in cycle()) {
        let ps = trace(&c, &Viewport::default());
        let text = asymptote_string(&ps, &Style::new().rgb(0.0, 0.0, 1.0), 17);
        let cmds = parse_asymptote(&text).unwrap();
        let parsed: Vec<&Element> = cmds.iter().flat_map(|c| &c.elements).collect();
        prop_assert_eq!(parsed.len(), ps.pieces.len());
        for (a, b) in parsed.iter().zip(ps.elements()) {
            for (p, q) in a.on_curve_points().iter().zip(b.on_curve_points()) {
                prop_assert!((p[0] - q[0]).abs() < 1e-9 && (p[1] - q[1]).abs() < 1e-9);
            }
        }
    }
}
