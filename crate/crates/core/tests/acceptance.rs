//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any
//! failure. Tolerances are exact equality throughout; runtime limits are
//! wall-clock and part of each verdict.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use perron::cf::{eval_finite, eval_periodic, expand_quadratic, expand_rational, CfFinite, CfPeriodic, Parity, ProjectiveValue};
use perron::exactnum::{QuadraticNumber, Rational, Scalar};
use perron::forms::{reduce, reduced_value, BinaryQuadraticForm};
use perron::geometry::{is_f_broken_line, lls, reconstruct, signature, BrokenLine, LlsSequence, Point};
use perron::perron::{classical_perron, perron_rhs_finite, value_via_triangle, verify_identity};
use perron::sail::{markov_minimum_bruteforce, markov_minimum_sails, sail_bruteforce, sail_cf, Angle, Sail};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::process::Command;
use std::time::{Duration, Instant};

const FIELDS: [i64; 5] = [2, 3, 5, 7, 13];

fn int(n: i64) -> Scalar {
    Scalar::from_integer(n)
}

fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::from_ratio(n, d)
}

fn surd(p: i64, q: i64, r: i64, d: i64) -> Scalar {
    QuadraticNumber::new(p.into(), q.into(), r.into(), d.into()).unwrap()
}

fn pt(x: Scalar, y: Scalar) -> Point {
    Point::new(x, y)
}

fn sqrt_int(n: i64) -> Scalar {
    Scalar::sqrt_rational(&Rational::from_integer(n.into())).unwrap()
}

fn rand_rational(rng: &mut StdRng, num: i64, den: i64) -> Scalar {
    ratio(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

fn rand_nonzero(rng: &mut StdRng, num: i64, den: i64) -> Scalar {
    loop {
        let x = rand_rational(rng, num, den);
        if !x.is_zero() {
            return x;
        }
    }
}

fn rand_quadratic(rng: &mut StdRng, d: i64) -> Scalar {
    let q = loop {
        let q = rng.gen_range(-3..=3);
        if q != 0 {
            break q;
        }
    };
    surd(rng.gen_range(-6..=6), q, rng.gen_range(1..=4), d)
}

// Independent oracles.

/// `A x² + B xy + C y²` straight from the coefficients.
fn form_at(f: &BinaryQuadraticForm, p: &Point) -> Scalar {
    let [a, b, c] = f.coefficients().map(Scalar::from_rational);
    &a * &p.x * &p.x + &b * &p.x * &p.y + &c * &p.y * &p.y
}

fn cross(u: &Point, v: &Point) -> Scalar {
    &u.x * &v.y - &u.y * &v.x
}

/// LLS entries by definition; `None` when some entry vanishes.
fn lls_oracle(v: &[Point]) -> Option<Vec<Scalar>> {
    let areas: Vec<Scalar> = v.windows(2).map(|w| cross(&w[0], &w[1])).collect();
    let mut out = vec![areas[0].clone()];
    for k in 1..v.len() - 1 {
        let turn = cross(&(&v[k - 1] - &v[k]), &(&v[k + 1] - &v[k]));
        let den = &areas[k - 1] * &areas[k];
        if den.is_zero() {
            return None;
        }
        out.push(turn / den);
        out.push(areas[k].clone());
    }
    out.iter().all(|a| !a.is_zero()).then_some(out)
}

/// `[x0; x1 : … : xk]` as a projective pair `(p, q)` meaning `p/q`.
fn cf_pair(xs: &[Scalar]) -> (Scalar, Scalar) {
    let mut p = xs[xs.len() - 1].clone();
    let mut q = Scalar::one();
    for x in xs[..xs.len() - 1].iter().rev() {
        let np = x * &p + &q;
        q = p;
        p = np;
    }
    (p, q)
}

/// `[0; x1 : … : xk]`, `None` when infinite.
fn zero_tail(xs: &[Scalar]) -> Option<Scalar> {
    if xs.is_empty() {
        return Some(Scalar::zero());
    }
    let (p, q) = cf_pair(xs);
    (!p.is_zero()).then(|| q / p)
}

fn same_projective(a: &(Scalar, Scalar), b: &ProjectiveValue) -> bool {
    match b {
        ProjectiveValue::Finite(v) => !a.1.is_zero() && &a.0 / &a.1 == *v,
        ProjectiveValue::Infinity => a.1.is_zero(),
    }
}

/// Outcome of checking the identity on one line: `(checked, failures)`.
fn identity_oracle(f: &BinaryQuadraticForm, v: &[Point], root: &Scalar) -> Option<(usize, usize)> {
    let a = lls_oracle(v)?;
    let n = v.len() - 1;
    let sign = cross(&v[0], &v[n]).signum();
    let eps = form_at(f, &(&v[0] + &v[n])).signum();
    if sign == 0 || eps == 0 {
        return None;
    }
    let (mut checked, mut failures) = (0, 0);
    for k in 1..n {
        let left: Vec<Scalar> = a[..2 * k - 1].iter().rev().cloned().collect();
        let right = &a[2 * k..];
        let (Some(l), Some(r)) = (zero_tail(&left), zero_tail(right)) else { continue };
        let den = &a[2 * k - 1] + &l + r;
        if den.is_zero() {
            continue;
        }
        let rhs = int((sign * eps) as i64) * root.clone() / den;
        checked += 1;
        if rhs != form_at(f, &v[k]) {
            failures += 1;
        }
    }
    Some((checked, failures))
}

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, started: Instant, limit: Duration, detail: String) {
        let took = started.elapsed();
        let within = took <= limit;
        let ok = ok && within;
        if !ok {
            self.failed += 1;
        }
        println!(
            "{} {id}: {detail} [{:.3}s, limit {:.1}s{}]",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs_f64(),
            if within { "" } else { ", exceeded" }
        );
    }
}

fn example_form() -> BinaryQuadraticForm {
    BinaryQuadraticForm::from_ints(1, -1, -2)
}

fn example_line() -> BrokenLine {
    BrokenLine::from_ints(&[(2, -2), (4, -1), (3, -2), (2, 0), (3, 1), (4, 0), (3, -1), (4, 2)]).unwrap()
}

fn criterion_1(rep: &mut Report) {
    let t = Instant::now();
    let f = example_form();
    let b = example_line();
    let expected: Vec<Scalar> = [(6, 1), (-1, 30), (-5, 1), (-3, 20), (4, 1), (3, 8), (2, 1), (-1, 4), (-4, 1), (1, 8), (-4, 1), (-1, 20), (10, 1)]
        .iter()
        .map(|&(n, d)| ratio(n, d))
        .collect();
    let got = lls(&b).unwrap();
    let sig = signature(&b).unwrap().as_i32();
    let delta = f.discriminant();
    let term = perron_rhs_finite(&f, &b, 4).unwrap();
    let fa4 = form_at(&f, &Point::from_ints(3, 1));
    let ok = got.entries() == expected.as_slice()
        && sig == 1
        && delta == Rational::from_integer(9.into())
        && term.value == int(4)
        && fa4 == int(4);
    rep.line(
        "1 worked example",
        ok,
        t,
        Duration::from_millis(100),
        format!("LLS = {got}, sign = {sig}, Δ = {delta}, rhs at A4 = {}, f(3,1) = {fa4}", term.value),
    );
}

fn criterion_2(rep: &mut Report) {
    let t = Instant::now();
    let f = example_form();
    let (p, a, q) = (Point::from_ints(2, 1), Point::from_ints(3, 0), Point::from_ints(2, -2));
    let v = value_via_triangle(&f, &p, &a, &q).unwrap();
    let fa = form_at(&f, &a);
    rep.line("2 triangle lemma", v == int(9) && fa == int(9), t, Duration::from_millis(100), format!("value = {v}, f(A) = {fa}"));
}

/// f-broken line over Q: endpoints on the kernel lines of `λ(a x − b y)(c x − d y)`.
fn rational_case(rng: &mut StdRng) -> Option<(BinaryQuadraticForm, Vec<Point>)> {
    let (a, b, c, d) = (rand_rational(rng, 4, 3), rand_rational(rng, 4, 3), rand_rational(rng, 4, 3), rand_rational(rng, 4, 3));
    let lam = rand_nonzero(rng, 3, 2);
    let f = BinaryQuadraticForm::from_factors(&lam, (&a, &b), (&c, &d)).ok()?;
    let (s, t) = (rand_nonzero(rng, 3, 2), rand_nonzero(rng, 3, 2));
    let n = rng.gen_range(2..=6);
    let mut v = vec![pt(&b * &s, &a * &s)];
    for _ in 1..n {
        v.push(pt(rand_rational(rng, 6, 3), rand_rational(rng, 6, 3)));
    }
    v.push(pt(&d * &t, &c * &t));
    Some((f, v))
}

/// f-broken line over Q(√D): kernel slopes `1/θ`, `1/θ'` for conjugate `θ`.
fn quadratic_case(rng: &mut StdRng, d: i64) -> Option<(BinaryQuadraticForm, Vec<Point>)> {
    let th = rand_quadratic(rng, d);
    let thc = th.conjugate();
    let f = BinaryQuadraticForm::new(
        Rational::one(),
        -(&th + &thc).to_rational()?,
        (&th * &thc).to_rational()?,
    )
    .ok()?;
    let coef = |rng: &mut StdRng| if rng.gen_bool(0.5) { rand_nonzero(rng, 3, 2) } else { rand_quadratic(rng, d) };
    let (s, t) = (coef(rng), coef(rng));
    if s.is_zero() || t.is_zero() {
        return None;
    }
    let n = rng.gen_range(2..=6);
    let mut v = vec![pt(&th * &s, s.clone())];
    for _ in 1..n {
        let p = if rng.gen_bool(0.5) {
            pt(rand_rational(rng, 6, 3), rand_rational(rng, 6, 3))
        } else {
            pt(rand_quadratic(rng, d), rand_quadratic(rng, d))
        };
        v.push(p);
    }
    v.push(pt(&thc * &t, t.clone()));
    Some((f, v))
}

/// Identity over Q or Q(√D), checked by the oracle and by the library.
/// Returns false when the sample is not a usable f-broken line.
fn identity(f: &BinaryQuadraticForm, v: Vec<Point>, label: String, cases: &mut usize, bad: &mut Vec<String>) -> bool {
    let Ok(b) = BrokenLine::new(v.clone()) else { return false };
    if !matches!(is_f_broken_line(&b, f), Ok(true)) {
        return false;
    }
    let root = f.sqrt_discriminant();
    let Some((checked, failures)) = identity_oracle(f, &v, &root) else { return false };
    if checked == 0 {
        return false;
    }
    *cases += checked;
    let lib = verify_identity(f, &b);
    if failures > 0 || !matches!(&lib, Ok(r) if r.all_passed()) {
        bad.push(label);
    }
    true
}

fn rand_det1(rng: &mut StdRng) -> [[Scalar; 2]; 2] {
    let k1 = rand_rational(rng, 4, 3);
    let k2 = rand_rational(rng, 4, 3);
    let r = rand_nonzero(rng, 4, 3);
    let ri = Scalar::one() / r.clone();
    // [[1,k1],[0,1]] · [[r,0],[0,1/r]] · [[1,0],[k2,1]]
    let a = &r + &(&k1 * &ri * &k2);
    let b = &k1 * &ri;
    let c = &ri * &k2;
    [[a, b], [c, ri]]
}

fn apply(m: &[[Scalar; 2]; 2], p: &Point) -> Point {
    pt(&m[0][0] * &p.x + &m[0][1] * &p.y, &m[1][0] * &p.x + &m[1][1] * &p.y)
}

fn rand_lls(rng: &mut StdRng) -> Vec<Scalar> {
    let n = 2 * rng.gen_range(0..=5) + 1;
    (0..n).map(|_| rand_nonzero(rng, 7, 4)).collect()
}

fn rand_line(rng: &mut StdRng, n: usize) -> Option<BrokenLine> {
    let v: Vec<Point> = (0..n).map(|_| pt(rand_rational(rng, 6, 3), rand_rational(rng, 6, 3))).collect();
    lls_oracle(&v)?;
    BrokenLine::new(v).ok()
}

fn criterion_3(rep: &mut Report) {
    let t = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    let mut cases = 0usize;
    let mut bad: Vec<String> = Vec::new();

    let mut lines = 0;
    while lines < 1500 {
        if let Some((f, v)) = rational_case(&mut rng) {
            if identity(&f, v, format!("Q line {lines}"), &mut cases, &mut bad) {
                lines += 1;
            }
        }
    }
    for d in FIELDS {
        let mut lines = 0;
        while lines < 300 {
            if let Some((f, v)) = quadratic_case(&mut rng, d) {
                if identity(&f, v, format!("Q(√{d}) line {lines}"), &mut cases, &mut bad) {
                    lines += 1;
                }
            }
        }
    }
    let identity_cases = cases;

    // Invariance under determinant-1 maps.
    let mut n = 0;
    while n < 1500 {
        let len = rng.gen_range(2..=7);
        let Some(b) = rand_line(&mut rng, len) else { continue };
        let m = rand_det1(&mut rng);
        let image: Vec<Point> = b.vertices().iter().map(|p| apply(&m, p)).collect();
        let Ok(bi) = BrokenLine::new(image) else { continue };
        let (Ok(l0), Ok(l1)) = (lls(&b), lls(&bi)) else { continue };
        if l0 != l1 || signature(&b).ok() != signature(&bi).ok() {
            bad.push(format!("invariance {n}"));
        }
        n += 1;
        cases += 1;
    }

    // lls ∘ reconstruct.
    for i in 0..1500 {
        let s = LlsSequence::new(rand_lls(&mut rng)).unwrap();
        let back = reconstruct(&s);
        if lls(&back).ok().as_ref() != Some(&s) {
            bad.push(format!("lls∘reconstruct {i}"));
        }
        cases += 1;
    }

    // reconstruct ∘ lls, up to the det-1 map A0 ↦ (1,0), A1 ↦ (1, a0).
    let mut n = 0;
    while n < 1500 {
        let len = rng.gen_range(2..=7);
        let Some(b) = rand_line(&mut rng, len) else { continue };
        let v = b.vertices();
        let s = lls(&b).unwrap();
        let dd = cross(&v[0], &v[1]);
        let normalize = |p: &Point| {
            let al = cross(p, &v[1]) / dd.clone();
            let be = cross(&v[0], p) / dd.clone();
            pt(&al + &be, &be * &s.entries()[0])
        };
        let expected: Vec<Point> = v.iter().map(normalize).collect();
        if reconstruct(&s).vertices() != expected.as_slice() {
            bad.push(format!("reconstruct∘lls {n}"));
        }
        n += 1;
        cases += 1;
    }

    // Endpoint-slope law of reconstruct.
    for i in 0..1000 {
        let e = rand_lls(&mut rng);
        let s = LlsSequence::new(e.clone()).unwrap();
        let end = reconstruct(&s).last().clone();
        let (p, q) = cf_pair(&e);
        let lib = eval_finite(&CfFinite::new(e).unwrap());
        if &end.y * &q != &end.x * &p || !same_projective(&(p, q), &lib) {
            bad.push(format!("endpoint slope {i}"));
        }
        cases += 1;
    }

    // Two lines sharing A0 = B0, the line A0 A1 B1, and the ray of A_n, B_m.
    let mut n = 0;
    while n < 1000 {
        let a0 = pt(rand_rational(&mut rng, 6, 3), rand_rational(&mut rng, 6, 3));
        let u = pt(rand_rational(&mut rng, 4, 2), rand_rational(&mut rng, 4, 2));
        let (s1, s2) = (rand_nonzero(&mut rng, 4, 3), rand_nonzero(&mut rng, 4, 3));
        let end = pt(rand_rational(&mut rng, 6, 3), rand_rational(&mut rng, 6, 3));
        let lam = rand_nonzero(&mut rng, 4, 3);
        let mut av = vec![a0.clone(), &a0 + &u.scale(&s1)];
        let mut bv = vec![a0.clone(), &a0 + &u.scale(&s2)];
        for _ in 0..rng.gen_range(0..3) {
            av.push(pt(rand_rational(&mut rng, 6, 3), rand_rational(&mut rng, 6, 3)));
        }
        for _ in 0..rng.gen_range(0..3) {
            bv.push(pt(rand_rational(&mut rng, 6, 3), rand_rational(&mut rng, 6, 3)));
        }
        av.push(end.clone());
        bv.push(end.scale(&lam));
        let (Some(ea), Some(eb)) = (lls_oracle(&av), lls_oracle(&bv)) else { continue };
        let (pa, qa) = cf_pair(&ea);
        let (pb, qb) = cf_pair(&eb);
        let lib_a = eval_finite(&CfFinite::new(ea.clone()).unwrap());
        let lib_b = eval_finite(&CfFinite::new(eb.clone()).unwrap());
        if &pa * &qb != &pb * &qa || lib_a != lib_b {
            bad.push(format!("shared-start lines {n}"));
        }
        n += 1;
        cases += 1;
    }

    rep.line(
        "3 property suite",
        bad.is_empty() && cases >= 10_000,
        t,
        Duration::from_secs(60),
        format!(
            "{cases} cases ({identity_cases} identity checks over Q and Q(√2,√3,√5,√7,√13)), {} failures{}",
            bad.len(),
            bad.first().map(|b| format!(", first: {b}")).unwrap_or_default()
        ),
    );
}

fn is_square(n: i64) -> bool {
    n >= 0 && {
        let r = (n as f64).sqrt().round() as i64;
        (r - 1..=r + 1).any(|s| s >= 0 && s * s == n)
    }
}

fn criterion_4(rep: &mut Report) {
    let t = Instant::now();
    let mut forms = 0;
    let mut bad: Vec<String> = Vec::new();
    let (mut root5, mut root8) = (false, false);
    for a in -5i64..=5 {
        for b in -5i64..=5 {
            for c in -5i64..=5 {
                let delta = b * b - 4 * a * c;
                if delta <= 0 || is_square(delta) {
                    continue;
                }
                forms += 1;
                let f = BinaryQuadraticForm::from_ints(a, b, c);
                let classical = classical_perron(&f, 8);
                let sails = markov_minimum_sails(&f, 4096);
                let (brute, _) = markov_minimum_bruteforce(&f, 1000);
                match (classical, sails) {
                    (Ok(cl), Ok(sa)) if cl.minimum == brute && sa.minimum == brute => {
                        if delta == 5 && brute == int(1) && cl.normalized == sqrt_int(5) {
                            root5 = true;
                        }
                        if (a, b, c) == (1, 0, -2) && cl.normalized == sqrt_int(8) {
                            root8 = true;
                        }
                    }
                    (cl, sa) => bad.push(format!(
                        "({a},{b},{c}): classical {:?}, sails {:?}, box {brute}",
                        cl.map(|r| r.minimum.to_string()),
                        sa.map(|r| r.minimum.to_string())
                    )),
                }
            }
        }
    }
    rep.line(
        "4 classical Perron cross-validation",
        bad.is_empty() && root5 && root8,
        t,
        Duration::from_secs(300),
        format!(
            "{forms} forms, {} disagreements, √5 present: {root5}, √8 present: {root8}{}",
            bad.len(),
            bad.first().map(|b| format!(", first: {b}")).unwrap_or_default()
        ),
    );
}

fn criterion_5(rep: &mut Report) {
    let t = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0005);
    let mut bad = 0;
    for _ in 0..10_000 {
        let x = Rational::new(rng.gen_range(-100_000i64..=100_000).into(), rng.gen_range(1i64..=10_000).into());
        let parity = [Parity::Any, Parity::EvenLength, Parity::OddLength][rng.gen_range(0..3)];
        let cf = expand_rational(&x, parity);
        let want = Scalar::from_rational(&x);
        let (p, q) = cf_pair(cf.elements());
        if eval_finite(&cf) != ProjectiveValue::Finite(want.clone()) || q.is_zero() || p / q != want {
            bad += 1;
        }
    }
    for _ in 0..1000 {
        let d = FIELDS[rng.gen_range(0..FIELDS.len())];
        let x = rand_quadratic(&mut rng, d);
        match expand_quadratic(&x).and_then(|cf| eval_periodic(&cf)) {
            Ok(v) if v == ProjectiveValue::Finite(x.clone()) => {}
            _ => bad += 1,
        }
    }
    let golden = eval_periodic(&CfPeriodic::from_integers(&[], &[1]).unwrap());
    let silver = eval_periodic(&CfPeriodic::from_integers(&[], &[2]).unwrap());
    let ok_g = golden == Ok(ProjectiveValue::Finite(surd(1, 1, 2, 5)));
    let ok_s = silver == Ok(ProjectiveValue::Finite(surd(1, 1, 1, 2)));
    rep.line(
        "5 continued fraction engine",
        bad == 0 && ok_g && ok_s,
        t,
        Duration::from_secs(60),
        format!(
            "10000 rationals and 1000 quadratic numbers, {bad} mismatches; [(1)] = {}, [(2)] = {}",
            golden.map(|v| v.to_string()).unwrap_or_else(|e| e.to_string()),
            silver.map(|v| v.to_string()).unwrap_or_else(|e| e.to_string())
        ),
    );
}

fn max_norm(p: &Point) -> BigInt {
    p.x.to_bigint().unwrap().abs().max(p.y.to_bigint().unwrap().abs())
}

/// CF vertices within the box, as a contiguous run of the brute-force chain.
fn overlap_agrees(cf: &Sail, brute: &Sail, radius: u32) -> Option<usize> {
    let r = BigInt::from(radius);
    let inside: Vec<usize> = (0..cf.vertices.len()).filter(|&i| max_norm(&cf.vertices[i]) <= r).collect();
    let (Some(&i0), Some(&i1)) = (inside.first(), inside.last()) else { return Some(0) };
    if i1 - i0 + 1 != inside.len() {
        return None;
    }
    let run = &cf.vertices[i0..=i1];
    let j0 = brute.vertices.iter().position(|p| *p == run[0])?;
    (brute.vertices.get(j0..j0 + run.len())? == run).then_some(run.len())
}

fn rand_ray(rng: &mut StdRng, d: Option<i64>) -> Point {
    if rng.gen_ratio(1, 12) {
        return pt(int(0), int(if rng.gen_bool(0.5) { 1 } else { -1 }));
    }
    let s = match d {
        Some(d) if rng.gen_bool(0.7) => rand_quadratic(rng, d),
        _ => ratio(rng.gen_range(-12..=12), rng.gen_range(1..=7)),
    };
    let p = pt(int(1), s);
    if rng.gen_bool(0.5) {
        -&p
    } else {
        p
    }
}

fn criterion_6(rep: &mut Report) {
    let t = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0006);
    let (mut angles, mut compared, mut irrational) = (0, 0, 0);
    let mut bad: Vec<String> = Vec::new();
    while angles < 200 {
        let d = rng.gen_bool(0.75).then(|| FIELDS[rng.gen_range(0..FIELDS.len())]);
        let (r1, r2) = (rand_ray(&mut rng, d), rand_ray(&mut rng, d));
        let a = match Angle::new(r1.clone(), r2.clone()).or_else(|_| Angle::new(r2, r1)) {
            Ok(a) => a,
            Err(_) => continue,
        };
        angles += 1;
        if !(a.ray1.slope_is_rational() && a.ray2.slope_is_rational()) {
            irrational += 1;
        }
        let (cf, brute) = (sail_cf(&a, 40).unwrap(), sail_bruteforce(&a, 50).unwrap());
        match overlap_agrees(&cf, &brute, 50) {
            Some(n) => compared += n,
            None => bad.push(a.to_string()),
        }
    }
    rep.line(
        "6 sail oracle equivalence",
        bad.is_empty(),
        t,
        Duration::from_secs(60),
        format!(
            "200 angles ({irrational} with an irrational ray), {compared} vertices compared, {} mismatches{}",
            bad.len(),
            bad.first().map(|b| format!(", first: {b}")).unwrap_or_default()
        ),
    );
}

fn criterion_7(rep: &mut Report) {
    let t = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let mut pairs: Vec<(Scalar, Scalar)> = Vec::new();
    while pairs.len() < 50 {
        let (a, b, c) = (rng.gen_range(-5..=5), rng.gen_range(-5..=5), rng.gen_range(-5..=5));
        let delta = b * b - 4 * a * c;
        if delta <= 0 || is_square(delta) {
            continue;
        }
        let r = reduce(&BinaryQuadraticForm::from_ints(a, b, c)).unwrap();
        pairs.push((r.alpha, r.beta));
    }
    while pairs.len() < 100 {
        let d = FIELDS[rng.gen_range(0..FIELDS.len())];
        let (x, y) = (rand_quadratic(&mut rng, d), rand_quadratic(&mut rng, d));
        let alpha = &x - &Scalar::from_bigint(x.floor()) + int(rng.gen_range(1..=4));
        let beta = &y - &Scalar::from_bigint(y.floor());
        pairs.push((alpha, beta));
    }
    let (mut bad, mut literal) = (0, 0);
    for (alpha, beta) in &pairs {
        let at = reduced_value(alpha, beta, &Point::from_ints(0, 1));
        // a0 + [0; a1 : …] from the expansion of α, [0; a₋₁ : …] from that of 1/β.
        let right = expand_quadratic(alpha).and_then(|c| eval_periodic(&c));
        let left = expand_quadratic(&(Scalar::one() / beta.clone())).and_then(|c| eval_periodic(&c));
        let (Ok(ProjectiveValue::Finite(r)), Ok(ProjectiveValue::Finite(l))) = (right, left) else {
            bad += 1;
            continue;
        };
        let den = r + Scalar::one() / l;
        // Δ(f_{α,β}) = (α + β)².
        let root = alpha + beta;
        if at != int(1) || at != &root / &den {
            bad += 1;
        }
        if at == Scalar::one() / den {
            literal += 1;
        }
    }
    rep.line(
        "7 reduced-form observation",
        bad == 0,
        t,
        Duration::from_secs(30),
        format!(
            "100 reduced forms: f(0,1) = 1 = √Δ/(a0 + [0; a1 : …] + [0; a-1 : …]) with {bad} failures; without the √Δ factor it holds in {literal}/100"
        ),
    );
}

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_perron")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn criterion_8(rep: &mut Report) {
    let t = Instant::now();
    let form = "{\"factors\":[[1,-1],[1,2]]}";
    let (code, out, _) = cli(&["verify", "--form", form, "--line", &data("example_line.json")]);
    let golden = code == 0 && out.lines().any(|l| l.starts_with("A4\t(3, 1)\tf = 4\trhs = 4\tok"));
    let (code_k, out_k, _) = cli(&["verify", "--form", form, "--line", &data("example_line.json"), "--vertex", "4"]);
    let golden_k = code_k == 0 && out_k.contains("f(A4) = 4") && out_k.contains("identity = 4");
    let (bad_code, _, bad_err) = cli(&["verify", "--form", form, "--line", &data("example_line_corrupted.json")]);
    let corrupted = bad_code == 1 && bad_err.contains("A4");
    let dir = std::env::temp_dir().join(format!("perron-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (o1, o2) = (dir.join("a.svg"), dir.join("b.svg"));
    let r1 = cli(&["render", "--scene", &data("scene_line.json"), "--out", o1.to_str().unwrap()]).0;
    let r2 = cli(&["render", "--scene", &data("scene_line.json"), "--out", o2.to_str().unwrap()]).0;
    let (s1, s2) = (std::fs::read(&o1).unwrap_or_default(), std::fs::read(&o2).unwrap_or_default());
    let text = String::from_utf8_lossy(&s1);
    let deterministic = r1 == 0 && r2 == 0 && !s1.is_empty() && s1 == s2;
    let figure = text.matches("class=\"vertex-label\"").count() == 8 && text.matches("class=\"kernel\"").count() == 2;
    let _ = std::fs::remove_dir_all(&dir);
    rep.line(
        "8 CLI integration",
        golden && golden_k && corrupted && deterministic && figure,
        t,
        Duration::from_secs(5),
        format!(
            "verify golden exit {code}/{code_k} (A4 = 4: {}), corrupted exit {bad_code}, render identical: {deterministic}, 8 labels and 2 kernels: {figure}",
            golden && golden_k
        ),
    );
}

trait SlopeKind {
    fn slope_is_rational(&self) -> bool;
}

impl SlopeKind for Point {
    fn slope_is_rational(&self) -> bool {
        self.x.is_zero() || (&self.y / &self.x).is_rational()
    }
}

fn main() {
    let mut rep = Report { failed: 0 };
    criterion_1(&mut rep);
    criterion_2(&mut rep);
    criterion_3(&mut rep);
    criterion_4(&mut rep);
    criterion_5(&mut rep);
    criterion_6(&mut rep);
    criterion_7(&mut rep);
    criterion_8(&mut rep);
    println!("acceptance: {} of 8 criteria passed", 8 - rep.failed);
    if rep.failed > 0 {
        std::process::exit(1);
    }
}
