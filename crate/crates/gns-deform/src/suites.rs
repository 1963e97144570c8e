//! Named randomized property suites behind `gns-deform check`.

use gns_deform_core::formal_scalar::{int, rat};
use gns_deform_core::functionals::Functional;
use gns_deform_core::gns::{
    parallelogram_check, weyl_decompose, wick_inner, wick_project, WickVector,
};
use gns_deform_core::observables::{gaussian_integral, Domain};
use gns_deform_core::star::{lambda_r, star, StarKind};
use gns_deform_core::{convergence, CRational, EnvelopePoly, FormalScalar, Frame, Monomial, Poly, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde_json::{json, Value};

pub const SUITES: &[&str] = &["star-axioms", "field", "trace", "weyl-decomposition", "wick-gns", "bargmann"];

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

fn small_complex(rng: &mut ChaCha8Rng) -> CRational {
    if rng.gen_bool(0.5) {
        CRational::real(small_rational(rng))
    } else {
        CRational::new(small_rational(rng), small_rational(rng))
    }
}

/// A short exact series with exponents in `{0, 1/2, 1, 3/2, 2}`.
pub fn random_scalar(rng: &mut ChaCha8Rng) -> FormalScalar {
    let terms: Vec<_> = (0..rng.gen_range(1..=3)).map(|_| (rat(rng.gen_range(0..=4), 2), small_complex(rng))).collect();
    FormalScalar::new(terms, gns_deform_core::Order::Infinite)
}

/// Random polynomial with `terms` monomials, each exponent at most `max_exp`.
pub fn random_poly(rng: &mut ChaCha8Rng, frame: Frame, terms: usize, max_exp: u32) -> Poly {
    let mut p = Poly::zero(frame);
    for _ in 0..terms {
        let m = Monomial((0..frame.vars()).map(|_| rng.gen_range(0..=max_exp)).collect());
        p = &p + &Poly::term(frame, m, random_scalar(rng));
    }
    p
}

struct Tally {
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn star_axioms(rng: &mut ChaCha8Rng, count: usize, t: &mut Tally) {
    for kind in [StarKind::Wick, StarKind::WeylMoyal, StarKind::FormalWickWn] {
        let frame = match kind {
            StarKind::WeylMoyal => Frame::weyl(rng.gen_range(1..=2)),
            _ => Frame::wick(rng.gen_range(1..=2)),
        };
        for i in 0..count {
            let f = random_poly(rng, frame, 3, 2);
            let g = random_poly(rng, frame, 3, 2);
            let h = random_poly(rng, frame, 2, 2);
            let fg = star(kind, &f, &g).unwrap();
            let assoc = star(kind, &fg, &h).unwrap() == star(kind, &f, &star(kind, &g, &h).unwrap()).unwrap();
            t.record(assoc, || format!("{kind:?} associativity case {i}"));
            let inv = fg.conj() == star(kind, &g.conj(), &f.conj()).unwrap();
            t.record(inv, || format!("{kind:?} involution case {i}"));
            let unit = star(kind, &f, &Poly::one(frame)).unwrap() == f;
            t.record(unit, || format!("{kind:?} unit case {i}"));
        }
    }
}

fn field(rng: &mut ChaCha8Rng, count: usize, t: &mut Tally) {
    let target = int(10);
    for i in 0..count {
        let a = random_scalar(rng);
        let b = random_scalar(rng);
        let c = random_scalar(rng);
        t.record(&(&a * &b) * &c == &a * &(&b * &c), || format!("associativity case {i}"));
        t.record(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), || format!("distributivity case {i}"));
        if !a.is_zero() {
            let inv = a.inv(&target).unwrap();
            let one = (&a * &inv).truncate(inv.trunc());
            let ok = &one - &FormalScalar::one().truncate(inv.trunc());
            t.record(ok.has_no_terms(), || format!("inverse case {i}"));
        }
    }
}

fn trace(rng: &mut ChaCha8Rng, count: usize, t: &mut Tally) {
    for i in 0..count {
        let frame = Frame::weyl(1);
        let f = EnvelopePoly::new(random_poly(rng, frame, 2, 2), rat(1, 2), rat(1, 2)).unwrap();
        let g = EnvelopePoly::new(random_poly(rng, frame, 2, 2), rat(1, 2), rat(1, 2)).unwrap();
        for r in 1..=3 {
            let l = lambda_r(&f, &g, r).unwrap();
            let v = gaussian_integral(&l, Domain::Phase).unwrap();
            t.record(v.is_zero(), || format!("trace r={r} case {i}"));
        }
    }
}

fn decomposition(rng: &mut ChaCha8Rng, count: usize, t: &mut Tally) {
    for i in 0..count {
        let frame = Frame::weyl(rng.gen_range(1..=2));
        let f = EnvelopePoly::with_q_envelope(random_poly(rng, frame, 3, 3), rat(1, 2)).unwrap();
        let d = weyl_decompose(&f).unwrap();
        t.record(d.reassemble().unwrap() == f, || format!("reassembly case {i}"));
    }
}

fn wick_gns(rng: &mut ChaCha8Rng, count: usize, t: &mut Tally) {
    for i in 0..count {
        let frame = Frame::wick(rng.gen_range(1..=2));
        let f = random_poly(rng, frame, 3, 2);
        let g = random_poly(rng, frame, 3, 2);
        let lhs = wick_inner(&wick_project(&f).unwrap(), &wick_project(&g).unwrap()).unwrap();
        let rhs = Functional::delta_origin(frame).apply_poly(&star(StarKind::Wick, &f.conj(), &g).unwrap()).unwrap();
        t.record(lhs == rhs.value, || format!("inner product case {i}"));
        let (u, v) = (wick_project(&f).unwrap(), wick_project(&g).unwrap());
        t.record(parallelogram_check(&u, &v).unwrap(), || format!("parallelogram case {i}"));
    }
}

fn bargmann(rng: &mut ChaCha8Rng, count: usize, t: &mut Tally) {
    for i in 0..count {
        let n = rng.gen_range(1..=2);
        let mk = |rng: &mut ChaCha8Rng| {
            let mut v = WickVector::zero(n);
            for _ in 0..3 {
                let k: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
                v = v.add(&WickVector::basis(&k).scale(&FormalScalar::constant(small_complex(rng))));
            }
            v
        };
        let (a, b) = (mk(rng), mk(rng));
        let ok = convergence::formal_to_bargmann_consistency(&a, &b, &rat(1, 2)).unwrap();
        t.record(ok, || format!("consistency case {i}"));
    }
}

/// Runs `suite` (or every suite for `"all"`) with `count` random cases.
pub fn run_suite(suite: &str, seed: u64, count: usize) -> Option<Value> {
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![SUITES.iter().copied().find(|s| *s == suite)?] };
    let mut reports = Vec::new();
    for name in names {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Tally::new();
        match name {
            "star-axioms" => star_axioms(&mut rng, count, &mut t),
            "field" => field(&mut rng, count, &mut t),
            "trace" => trace(&mut rng, count, &mut t),
            "weyl-decomposition" => decomposition(&mut rng, count, &mut t),
            "wick-gns" => wick_gns(&mut rng, count, &mut t),
            _ => bargmann(&mut rng, count, &mut t),
        }
        reports.push(json!({
            "suite": name,
            "cases": t.cases,
            "passed": t.cases - t.failures.len(),
            "failures": t.failures,
        }));
    }
    Some(Value::Array(reports))
}
