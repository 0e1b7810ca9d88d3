//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line.

use std::time::{Duration, Instant};

use fscc::cycle2d::IntersectMode;
use fscc::render::{self, Element, Viewport};
use fscc::scalar::rat;
use fscc::verify::{
    check_names, conformality_grid, distance, distance_closed_form, infinitesimal_cycle, run_checks,
    Config, ConformalSetup, Gen, LengthKind,
};
use fscc::{Condition, Cycle, Cycle2D, Frame, Jet, Rational, Scalar, SignMatrix, Slot};
use fscc_cli::figures;

const EPH: [i64; 3] = [-1, 0, 1];

fn q(n: i64) -> Rational {
    rat(n, 1)
}

fn report(id: usize, name: &str, ok: bool, detail: &str) {
    println!("criterion {id} ({name}): {} {detail}", if ok { "PASS" } else { "FAIL" });
}

fn sign_of(g: &mut Gen, name: &'static str) -> Rational {
    if g.rational(name) >= q(0) {
        q(1)
    } else {
        q(-1)
    }
}

fn random_cycle(g: &mut Gen, e: &Frame<Rational>) -> Cycle2D<Rational> {
    Cycle2D::new(g.rational("k"), g.rational("l"), g.rational("n"), g.rational("m"), e.clone()).unwrap()
}

fn passing<'a>(p: Vec<Rational>) -> Condition<'a, Rational> {
    Box::new(move |c: &Cycle<Rational>| c.val(&p))
}

fn sorted(mut v: Vec<Rational>) -> Vec<Rational> {
    v.sort();
    v
}

#[test]
fn criterion_1_round_trip() {
    let mut g = Gen::new(101);
    let start = Instant::now();
    let (mut cases, mut failures) = (0, 0);
    for _ in 0..100 {
        let (k, l, n, m) = (g.rational("k"), g.rational("l"), g.rational("n"), g.rational("m"));
        let sign = SignMatrix::new(vec![sign_of(&mut g, "s0"), sign_of(&mut g, "s1")]);
        for s in EPH {
            let e = Frame::plane(q(s));
            let c = Cycle::new(k.clone(), vec![l.clone(), n.clone()], m.clone(), e.clone()).unwrap();
            for s1 in EPH {
                let es = Frame::plane(q(s1));
                let mat = c.to_matrix(Some(&es), Some(&sign)).unwrap();
                let back = Cycle::from_matrix(&mat, &e, Some(&es), Some(&sign)).unwrap();
                cases += 1;
                if !back.the_same_as(&c) {
                    failures += 1;
                }
            }
        }
    }
    let took = start.elapsed();
    let ok = failures == 0 && took < Duration::from_secs(1);
    report(1, "round trip", ok, &format!("{cases} cases, {failures} failures, {took:?}"));
    assert!(ok);
}

#[test]
fn criterion_2_check_catalog() {
    let cfg = Config {
        seed: 2,
        tuples: 20,
        ..Config::default()
    };
    let start = Instant::now();
    let results = run_checks(&[], &cfg).unwrap();
    let took = start.elapsed();
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.id.as_str()).collect();
    for r in &results {
        println!("    {}", r.text_line());
    }
    let ok = results.len() == check_names().len()
        && results.len() >= 25
        && failed.is_empty()
        && took < Duration::from_secs(30);
    report(
        2,
        "check catalog",
        ok,
        &format!("{} checks, failed {failed:?}, {took:?}", results.len()),
    );
    assert!(ok);
}

#[test]
fn criterion_3_orthogonality() {
    let cfg = Config {
        seed: 3,
        tuples: 50,
        ..Config::default()
    };
    let catalog = run_checks(&["ortho_formulas".to_string()], &cfg).unwrap();
    let catalog_ok = catalog.iter().all(|r| r.passed);

    // direct evaluation against the displayed polynomials
    let mut g = Gen::new(33);
    let mut bad = 0;
    let mut cases = 0;
    for s in EPH {
        let e = Frame::plane(q(s));
        for s1 in EPH {
            let es = Frame::plane(q(s1));
            for s2 in [-1, 1] {
                let sign = SignMatrix::new(vec![q(1), q(if s2 >= 0 { 1 } else { -1 })]);
                for _ in 0..50 {
                    let c = random_cycle(&mut g, &e);
                    let c1 = random_cycle(&mut g, &e);
                    let (k, l, n, m) = (c.k().clone(), c.l_at(0).clone(), c.n().clone(), c.m().clone());
                    let (k1, l1, n1, m1) = (c1.k().clone(), c1.l_at(0).clone(), c1.n().clone(), c1.m().clone());
                    let got = c.inner_product(&c1, Some(&es), Some(&sign)).unwrap();
                    let want = &n1 * &n * q(s1) + &k1 * &m / q(2) - &l * &l1 + &m1 * &k / q(2);
                    let (u, v) = (g.rational("u"), g.rational("v"));
                    let z = Cycle::zero_radius(vec![u.clone(), v.clone()], &e, q(0), None, None).unwrap();
                    let got_z = c.inner_product(&z, Some(&es), None).unwrap();
                    let want_z = -q(s) * &v * &v * &k / q(2) + &v * &n * q(s1) + &m / q(2)
                        + &u * &u * &k / q(2)
                        - &l * &u;
                    cases += 2;
                    bad += usize::from(got != want) + usize::from(got_z != want_z);
                }
            }
        }
    }
    let ok = catalog_ok && bad == 0;
    report(
        3,
        "orthogonality",
        ok,
        &format!("catalog {catalog_ok}, {cases} direct evaluations, {bad} mismatches"),
    );
    assert!(ok);
}

#[test]
fn criterion_4_distance() {
    let mut g = Gen::new(4);
    let (mut cases, mut bad) = (0, 0);
    for _ in 0..50 {
        let w = vec![g.rational("u"), g.rational("v")];
        let w1 = vec![g.rational("u'"), g.rational("v'")];
        let du = &w[0] - &w1[0];
        let dv = &w[1] - &w1[1];
        if du == q(0) || dv == q(0) {
            continue;
        }
        let euclid = &du * &du + &dv * &dv;
        let closed = distance_closed_form(&w, &w1, &q(-1), &q(-1)).unwrap();
        let extremal = distance(&w, &w1, &q(-1), &q(-1)).unwrap();
        cases += 2;
        bad += usize::from(closed != euclid) + usize::from(extremal != euclid);
        for s1 in EPH {
            let mid = distance(&w, &w1, &q(0), &q(s1)).unwrap();
            cases += 1;
            bad += usize::from(mid != &du * &du);
        }
    }
    let ok = bad == 0 && cases > 0;
    report(4, "distance", ok, &format!("{cases} exact comparisons, {bad} mismatches"));
    assert!(ok);
}

fn row(cells: &[fscc::verify::ConformalCell]) -> Vec<bool> {
    cells.iter().map(|c| c.conformal).collect()
}

#[test]
fn criterion_5_conformality() {
    let setup = ConformalSetup::random(5, 5);
    let s4 = rat(3, 7);
    let dist = conformality_grid(LengthKind::Distance, &EPH, &s4, &setup).unwrap();
    let want = [
        vec![true, false, false],
        vec![true, true, true],
        vec![false, false, true],
    ];
    let dist_ok = dist.iter().zip(&want).all(|(r, w)| row(r) == *w);

    let mut centre_ok = true;
    for s4 in [q(-1), q(1), rat(3, 7)] {
        let grid = conformality_grid(LengthKind::CenterLength, &EPH, &s4, &setup).unwrap();
        centre_ok &= grid.iter().all(|r| row(r).iter().all(|&b| b));
    }

    let focus = conformality_grid(LengthKind::FocusLength, &EPH, &q(0), &setup).unwrap();
    let focus_ok = focus.iter().flatten().all(|c| {
        let distinct = c.factors.iter().any(|f| *f != c.factors[0]);
        !c.conformal && distinct
    });

    for (s, r) in EPH.iter().zip(&dist) {
        println!("    distance, point space {s:>2}: {:?}", row(r));
    }
    let ok = dist_ok && centre_ok && focus_ok;
    report(
        5,
        "conformality grid",
        ok,
        &format!("distance {dist_ok}, centre length {centre_ok}, focus length {focus_ok}"),
    );
    assert!(ok);
}

#[test]
fn criterion_6_infinitesimal_cycles() {
    let cfg = Config {
        seed: 6,
        tuples: 20,
        ..Config::default()
    };
    let names: Vec<String> = check_names()
        .into_iter()
        .filter(|n| n.starts_with("inf_"))
        .map(String::from)
        .collect();
    let catalog = run_checks(&names, &cfg).unwrap();
    let catalog_ok = catalog.iter().all(|r| r.passed) && names.len() >= 4;

    let j = |x: &Rational| Jet::constant(x.clone());
    let eps = Jet::<Rational>::eps();
    let mut g = Gen::new(66);
    let mut bad = Vec::new();
    for s in EPH {
        for s1 in EPH {
            for s4 in EPH {
                for _ in 0..5 {
                    let u = g.rational("u");
                    let vp = g.nonzero_rational("v_p");
                    let c = infinitesimal_cycle(&u, &vp, &eps, &q(s), &q(s1), &q(s4)).unwrap();
                    let det = c.det(Some(&Frame::plane(j(&q(s1)))), None).unwrap();
                    if det != -(eps.clone() * eps.clone()) {
                        bad.push(format!("det at {s},{s1},{s4}"));
                    }
                    let f = c.focus(Some(&Frame::plane(j(&q(s4))))).unwrap();
                    if f[0] != j(&u) || f[1] != j(&vp) {
                        bad.push(format!("focus at {s},{s1},{s4}"));
                    }
                    let fl = c.focal_length().unwrap();
                    let lead = q(1) / (q(4) * &vp);
                    if fl.coeff(0).unwrap() != q(0) || fl.coeff(1).unwrap() != q(0) || fl.coeff(2).unwrap() != lead
                    {
                        bad.push(format!("focal length at {s},{s1},{s4}"));
                    }
                }
            }
        }
    }
    let ok = catalog_ok && bad.is_empty();
    report(
        6,
        "infinitesimal cycles",
        ok,
        &format!("catalog {catalog_ok} ({} checks), direct failures {bad:?}", names.len()),
    );
    assert!(ok);
}

fn bezier(p: &[[f64; 2]; 4], t: f64) -> [f64; 2] {
    let s = 1.0 - t;
    let w = [s * s * s, 3.0 * s * s * t, 3.0 * s * t * t, t * t * t];
    let mut r = [0.0; 2];
    for (pi, wi) in p.iter().zip(w) {
        r[0] += wi * pi[0];
        r[1] += wi * pi[1];
    }
    r
}

/// Cycle with the given `k`, `l`, `n` through `x`.
fn through(k: f64, l: f64, n: f64, x: [f64; 2], e: &Frame<f64>) -> Cycle2D<f64> {
    let c = Cycle2D::new(k, l, n, 0.0, e.clone()).unwrap();
    let m = -c.val(&x).unwrap();
    Cycle2D::new(k, l, n, m, e.clone()).unwrap()
}

#[test]
fn criterion_7_render_exactness() {
    let mut g = Gen::new(7);
    let vp = Viewport::default();
    let e0 = Frame::plane(0.0);
    let (mut parabolas, mut samples, mut worst) = (0, 0, 0.0f64);
    let mut tries = 0;
    while parabolas < 20 && tries < 1000 {
        tries += 1;
        let k: f64 = g.nz("k");
        let n: f64 = g.nz("n");
        let l: f64 = g.q("l");
        let x = [g.q::<f64>("u").clamp(-4.0, 4.0), g.q::<f64>("v").clamp(-4.0, 4.0)];
        let c = through(k, l, n, x, &e0);
        let ps = render::trace(&c, &vp);
        let mut found = false;
        for el in ps.elements() {
            if let Element::CubicBezier(a, b, cc, d) = el {
                found = true;
                for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
                    let p = bezier(&[*a, *b, *cc, *d], t);
                    worst = worst.max(c.val(&p).unwrap().abs());
                    samples += 1;
                }
            }
        }
        parabolas += usize::from(found);
    }
    let parab_ok = parabolas == 20 && worst <= 1e-9;

    let e = Frame::plane(-1.0);
    let (mut circles, mut ends, mut worst_arc) = (0, 0, 0.0f64);
    tries = 0;
    while circles < 20 && tries < 1000 {
        tries += 1;
        let centre = [g.q::<f64>("u").clamp(-4.0, 4.0), g.q::<f64>("v").clamp(-4.0, 4.0)];
        let r = g.pos::<f64>("r").clamp(0.1, 3.0);
        let x = [centre[0] + r, centre[1]];
        let c = through(1.0, centre[0], centre[1], x, &e);
        let ps = render::trace(&c, &vp);
        let mut found = false;
        for el in ps.elements() {
            if let Element::Arc { p0, p1, .. } = el {
                found = true;
                for p in [p0, p1] {
                    worst_arc = worst_arc.max(c.val(p).unwrap().abs());
                    ends += 1;
                }
            }
        }
        circles += usize::from(found);
    }
    let arc_ok = circles == 20 && worst_arc <= 1e-6;
    let ok = parab_ok && arc_ok;
    report(
        7,
        "render exactness",
        ok,
        &format!(
            "{parabolas} parabolas, {samples} samples, max |val| {worst:e}; \
             {circles} circles, {ends} arc ends, max |val| {worst_arc:e}"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_8_figure_corpus() {
    let names = figures::names();
    let mut bad = Vec::new();
    for name in &names {
        let fig = match figures::build(name) {
            Ok(f) => f,
            Err(err) => {
                bad.push(format!("{name}: {err}"));
                continue;
            }
        };
        let asy = fig.to_asymptote();
        if figures::build(name).unwrap().to_asymptote() != asy {
            bad.push(format!("{name}: output differs between runs"));
        }
        let svg = fig.to_svg();
        if !svg.starts_with("<svg") && !svg.starts_with("<?xml") {
            bad.push(format!("{name}: svg"));
        }
        if let Err(err) = fig.self_check() {
            bad.push(format!("{name}: self check {err}"));
        }
        if name.starts_with("first-ort-") {
            let labels = ["a", "b", "c", "d"]
                .iter()
                .all(|l| asy.contains(&format!("label(\"${l}$\", z[")));
            let draws = asy.matches("draw(").count();
            if !labels || !asy.contains("dot(z);") || draws < 6 {
                bad.push(format!("{name}: labels {labels}, {draws} draw commands"));
            }
        }
    }
    let ok = bad.is_empty() && names.len() >= 30;
    report(8, "figure corpus", ok, &format!("{} figures, problems {bad:?}", names.len()));
    assert!(ok);
}

#[test]
fn criterion_9_line_intersect() {
    let mut g = Gen::new(9);
    let (mut cases, mut bad) = (0, Vec::new());
    while cases < 100 {
        let s = EPH[cases % 3];
        let e = Frame::plane(q(s));
        let (a, b) = (g.rational("a"), g.rational("b"));
        let (u1, u2) = (g.rational("u1"), g.rational("u2"));
        if u1 == u2 {
            continue;
        }
        let unit = cases % 2 == 0;
        let k = if unit { q(1) } else { g.nonzero_rational("k") };
        let n = g.rational("n");
        let p1 = vec![u1.clone(), &a * &u1 + &b];
        let p2 = vec![u2.clone(), &a * &u2 + &b];
        let start = Cycle::new(k.clone(), vec![q(0), n.clone()], q(0), e.clone()).unwrap();
        let Ok(c) = start.subject_to(vec![passing(p1), passing(p2)], Some(&[Slot::L(0), Slot::M])) else {
            continue;
        };
        let c = Cycle2D::from_cycle(c).unwrap();
        // the substituted quadratic must not vanish identically
        if k.clone() * (q(1) - q(s) * &a * &a) == q(0) {
            continue;
        }
        cases += 1;
        let roots = c.line_intersect(&a, &b, IntersectMode::Corrected).unwrap();
        for r in &roots {
            if c.val(&[r.clone(), &a * r + &b]).unwrap() != q(0) {
                bad.push(format!("corrected root {r} of case {cases} is off the cycle"));
            }
        }
        if sorted(roots.clone()) != sorted(vec![u1.clone(), u2.clone()]) {
            bad.push(format!("case {cases}: roots {roots:?}, expected {u1} and {u2}"));
        }
        if unit {
            let compat = c.line_intersect(&a, &b, IntersectMode::Compat).unwrap();
            // k (1 + pm a^2) x^2 - 2 (l + n a - pm a b) x + (m - 2 n b + pm b^2), pm = -k s
            let pm = -(&k * q(s));
            let lead = &k * (q(1) + &pm * &a * &a);
            let mid = c.l_at(0) + c.n() * &a - &pm * &a * &b;
            let cst = c.m() - q(2) * c.n() * &b + &pm * &b * &b;
            let disc = (&mid * &mid - &lead * &cst).sqrt().unwrap();
            let hand = vec![(&mid - &disc) / &lead, (&mid + &disc) / &lead];
            if sorted(compat.clone()) != sorted(hand.clone()) || sorted(compat) != sorted(roots) {
                bad.push(format!("case {cases}: compat roots differ from {hand:?}"));
            }
        }
    }
    let ok = bad.is_empty();
    report(9, "line intersection", ok, &format!("{cases} triples, problems {bad:?}"));
    assert!(ok);
}
