//! Acceptance suite. Every criterion runs even when an earlier one fails; each prints one
//! PASS/FAIL line with the failed checks, and the test fails at the end if any did.

use augteich::cli::{self, Report, Value};
use augteich::collar::{collar_chart, collar_quantities, hexagon_from_sides, hexagon_regions};
use augteich::hyp::geodesic_point;
use augteich::moduli::{annulus_modulus, grid_quadrilateral_modulus, grotzsch_mu, lambda_of_k, Quadrilateral};
use augteich::qc_bounds::{disc_distortion, k_eps, k_hat, k_tilde, translate_to_fix_origin, UniversalConstants};
use augteich::standard_maps::{pants_map, AnnulusMap, TwistProfile};
use augteich::teich::{
    build_surface, converge_check_coordinates, curve_word, verify_conditions, FNPoint, MarkedSurface, PantsComplex,
    VerifyOptions,
};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use std::f64::consts::PI;
use std::time::{Duration, Instant};

struct Checks {
    failed: Vec<String>,
    total: usize,
}

impl Checks {
    fn new() -> Self {
        Self { failed: Vec::new(), total: 0 }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failed.push(what());
        }
    }
}

struct Outcome {
    label: String,
    passed: bool,
}

fn run_criterion(label: &str, budget: Duration, body: impl FnOnce(&mut Checks)) -> Outcome {
    let start = Instant::now();
    let mut c = Checks::new();
    body(&mut c);
    let took = start.elapsed();
    c.check(took <= budget, || format!("runtime {:.1} s over the {} s budget", took.as_secs_f64(), budget.as_secs()));
    let passed = c.failed.is_empty();
    let mut line = format!(
        "{label}: {} ({}/{} checks, {:.2} s)",
        if passed { "PASS" } else { "FAIL" },
        c.total - c.failed.len(),
        c.total,
        took.as_secs_f64()
    );
    if !passed {
        line.push_str(" | failed: ");
        line.push_str(&c.failed.join("; "));
    }
    println!("{line}");
    Outcome { label: label.to_string(), passed }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

// ---------- 1. special functions

fn special_functions(c: &mut Checks) {
    let l1 = lambda_of_k(1.0).unwrap();
    c.check((l1 - 1.0).abs() < 1e-9, || format!("lambda(1) = {l1}"));
    for k in [1.1, 2.0, 5.0] {
        let p = lambda_of_k(k).unwrap() * lambda_of_k(1.0 / k).unwrap();
        c.check((p - 1.0).abs() < 1e-8, || format!("lambda({k})·lambda(1/{k}) = {p}"));
    }
    for r in [0.01, 0.1, 0.2, 0.3, 0.5, 0.7, 0.8, 0.9, 0.99] {
        let p = grotzsch_mu(r).unwrap() * grotzsch_mu((1.0 - r * r).sqrt()).unwrap();
        c.check((p - PI * PI / 4.0).abs() < 1e-8, || format!("mu({r})·mu(r') = {p}"));
    }
    let r = 1e-4;
    let m = grotzsch_mu(r).unwrap();
    let asym = (4.0 / r).ln() / (2.0 * PI);
    c.check((m - asym).abs() < 1e-3, || format!("mu(1e-4) = {m} vs log(4/r)/(2π) = {asym}"));
}

// ---------- 2. moduli

fn random_quadrilateral(rng: &mut StdRng) -> Quadrilateral {
    // star-shaped about the origin, so the polygon is simple
    let n = 8;
    let pts: Vec<[f64; 2]> = (0..n)
        .map(|k| {
            let th = 2.0 * PI * (k as f64 + rng.random_range(-0.3..0.3)) / n as f64;
            let r = rng.random_range(0.6..1.4);
            [r * th.cos(), r * th.sin()]
        })
        .collect();
    Quadrilateral::new(pts, [0, 2, 4, 6]).unwrap()
}

fn moduli(c: &mut Checks) {
    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..100 {
        let (r1, r2) = (rng.random_range(0.01..0.99), rng.random_range(0.01..0.99));
        let lhs = annulus_modulus(r1 * r2).unwrap();
        let rhs = annulus_modulus(r1).unwrap() + annulus_modulus(r2).unwrap();
        c.check((lhs - rhs).abs() < 1e-12, || format!("annulus additivity at ({r1}, {r2}): {lhs} vs {rhs}"));
    }
    let rect = grid_quadrilateral_modulus(&Quadrilateral::rectangle(2.0, 1.0).unwrap(), 256).unwrap().value;
    c.check((rect - 2.0).abs() <= 0.02 * 2.0, || format!("2×1 rectangle modulus {rect}"));
    for k in 0..20 {
        let q = random_quadrilateral(&mut rng);
        let m = grid_quadrilateral_modulus(&q, 64).unwrap().value;
        let r = q.rengel_check(m, 0.02);
        c.check(r.holds, || format!("quad {k}: modulus {m} below Rengel bound {}", r.lower_bound));
    }
}

// ---------- 3. collar geometry

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn collar_geometry(c: &mut Checks) {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..1000 {
        let (len, d) = (rng.random_range(1e-3..10.0), rng.random_range(1e-3..5.0));
        let (outer, area) = collar_quantities(len, d).unwrap();
        let rel = (outer * outer - len * len - area * area).abs() / (outer * outer);
        c.check(rel < 1e-12, || format!("ℓ'² = ℓ² + area² at ({len}, {d}): rel {rel:e}"));
    }
    for len in [0.1, 1.0, 5.0] {
        let chart = collar_chart(len, 1.0).unwrap();
        // metric dρ² + cosh²ρ dx², x over one period
        let integrated = simpson(|rho| len * rho.cosh(), 0.0, chart.width(), 2000);
        let expect = len / (2.0 * (len / 2.0).sinh());
        c.check((integrated - expect).abs() < 1e-6, || format!("collar area at ℓ = {len}: {integrated} vs {expect}"));
    }
}

// ---------- 4. hexagons

fn hexagons(c: &mut Checks, incidence: &mut Checks) {
    for h in [0.1, 1.0, 5.0] {
        let b = hexagon_from_sides(h, h, h).unwrap().seams();
        c.check((b[0] - b[1]).abs() < 1e-10 && (b[1] - b[2]).abs() < 1e-10, || format!("equilateral seams at {h}: {b:?}"));
    }
    let mut rng = StdRng::seed_from_u64(4);
    for k in 0..100 {
        let mut h: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.05..5.0));
        if k % 4 == 0 {
            h[k / 4 % 3] = 0.0;
        }
        let hex = hexagon_from_sides(h[0], h[1], h[2]).unwrap();
        let m = hex.measured_sides();
        for i in 0..3 {
            let ok = if h[i] == 0.0 { hex.is_ideal(i) } else { (m[i] - h[i]).abs() < 1e-9 };
            c.check(ok, || format!("round trip {h:?}: side {} measured {}", i + 1, m[i]));
        }
    }
    let vals = [0.0, 0.1, 1.0, 5.0];
    for &h1 in &vals {
        for &h2 in &vals {
            for &h3 in &vals {
                let hex = hexagon_from_sides(h1, h2, h3).unwrap();
                let r = match hexagon_regions(&hex) {
                    Ok(r) => r,
                    Err(e) => {
                        c.check(false, || format!("regions of ({h1}, {h2}, {h3}): {e}"));
                        continue;
                    }
                };
                for i in 0..3 {
                    c.check(r.cap_contained(i), || format!("cap {} of ({h1}, {h2}, {h3}) leaves the half collar", i + 1));
                }
                let v = r.conv_vertices();
                let mut inside = true;
                for k in 0..v.len() {
                    let (p, q) = (v[k], v[(k + 1) % v.len()]);
                    for s in 0..=16 {
                        inside &= r.in_core(geodesic_point(p, q, s as f64 / 16.0), 1e-9);
                    }
                }
                c.check(inside, || format!("convex core of ({h1}, {h2}, {h3}) leaves the core"));
                incidence.check(r.min_incidence() >= r.incidence_bound(), || {
                    format!("({h1}, {h2}, {h3}): {:.4} < {:.4}", r.min_incidence(), r.incidence_bound())
                });
            }
        }
    }
}

// ---------- 5. standard maps

fn standard_maps(c: &mut Checks) {
    for len in [0.5, 2.0] {
        let chart = collar_chart(len, 1.0).unwrap();
        let k = AnnulusMap::new(chart.clone(), chart, 0.0, TwistProfile::default()).unwrap().distortion(64).unwrap().sup_k;
        c.check((k - 1.0).abs() < 1e-6, || format!("annulus identity at ℓ = {len}: K = {k}"));
    }
    for h in [[0.7, 1.0, 1.3], [0.0, 1.0, 1.5]] {
        let hex = hexagon_from_sides(h[0], h[1], h[2]).unwrap();
        let k = pants_map(&hex, &hex, [0.0; 3]).unwrap().distortion(64, [Some(8.0); 3]).unwrap().sup_k();
        c.check((k - 1.0).abs() < 1e-6, || format!("pants identity {h:?}: K = {k}"));
    }
    let source = collar_chart(2.0, 1.0).unwrap();
    let ks: Vec<f64> = [2.2, 2.02, 2.002]
        .iter()
        .map(|&to| {
            let m = AnnulusMap::new(source.clone(), collar_chart(to, 1.0).unwrap(), 0.0, TwistProfile::default()).unwrap();
            m.distortion(64).unwrap().sup_k - 1.0
        })
        .collect();
    c.check(ks.windows(2).all(|w| w[1] < w[0]), || format!("K − 1 along 2.2, 2.02, 2.002: {ks:?}"));
    for (s, t, theta) in [
        ([0.5, 1.0, 1.5], [0.6, 0.9, 2.0], [0.2, -0.3, 0.45]),
        ([0.5, 1.0, 1.5], [0.0, 0.9, 2.0], [0.2, -0.3, 0.45]),
        ([1.0, 1.0, 1.0], [1.2, 0.8, 1.1], [0.0, 0.5, -0.25]),
    ] {
        let sh = hexagon_from_sides(s[0], s[1], s[2]).unwrap();
        let th = hexagon_from_sides(t[0], t[1], t[2]).unwrap();
        let gap = pants_map(&sh, &th, theta).unwrap().interface_gap(256).unwrap();
        c.check(gap < 1e-7, || format!("interface gap {s:?} → {t:?}: {gap:e}"));
    }
}

// ---------- 6. Teichmüller layer

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn load(name: &str) -> (MarkedSurface, Vec<MarkedSurface>) {
    let doc = cli::parse_pants_document(&std::fs::read_to_string(data(name)).unwrap()).unwrap();
    let target = build_surface(&doc.complex, &doc.target).unwrap();
    let seq = doc.sequence.iter().map(|p| build_surface(&doc.complex, p).unwrap()).collect();
    (target, seq)
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn teichmuller(c: &mut Checks) {
    let mut rng = StdRng::seed_from_u64(6);
    let complexes = [PantsComplex::genus_two(), PantsComplex::one_holed_torus(), PantsComplex::four_holed_sphere()];
    for k in 0..50 {
        let cx = &complexes[k % 3];
        let lengths: Vec<f64> = (0..cx.n_curves()).map(|_| rng.random_range(0.05..5.0)).collect();
        let twists: Vec<f64> = (0..cx.n_curves()).map(|_| rng.random_range(-3.0..3.0)).collect();
        let free: Vec<f64> = cx
            .free_slots()
            .iter()
            .map(|_| if rng.random_range(0.0..1.0) < 0.2 { 0.0 } else { rng.random_range(0.05..4.0) })
            .collect();
        let p = FNPoint::new(lengths, twists, free);
        let s = build_surface(cx, &p).unwrap();
        for i in 0..cx.n_curves() {
            let tr = s.holonomy(&curve_word(cx, i)).unwrap().trace().abs();
            let expect = 2.0 * (p.lengths[i] / 2.0).cosh();
            c.check((tr - expect).abs() < 1e-9, || format!("surface {k} curve {}: |tr| {tr} vs {expect}", i + 1));
        }
    }

    // twists at nodes never change a verdict
    let g2 = PantsComplex::genus_two();
    let (target, seq) = load("genus2_pinching.toml");
    let points: Vec<FNPoint> = seq.iter().map(|s| s.point().clone()).collect();
    let before = converge_check_coordinates(&g2, target.point(), &points, 0.1).unwrap();
    let mut t2 = target.point().clone();
    t2.twists[0] += 7.3;
    let shifted: Vec<FNPoint> = points
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let mut q = p.clone();
            q.twists[0] += if n % 2 == 0 { 3.1 } else { -2.4 };
            q
        })
        .collect();
    let after = converge_check_coordinates(&g2, &t2, &shifted, 0.1).unwrap();
    c.check(before == after, || "coordinate verdict moved with a node twist".into());

    let opts = VerifyOptions::default();
    let rep = verify_conditions(&target, &seq, &opts).unwrap();
    let target2 = build_surface(&g2, &t2).unwrap();
    let rep2 = verify_conditions(&target2, &seq, &opts).unwrap();
    c.check(
        rep.metric_converges == rep2.metric_converges && rep.coordinates.converges == rep2.coordinates.converges,
        || "metric verdict moved with the target's node twist".into(),
    );

    // pinching ℓ1 = 1/n, n = 2, 4, 8, 16
    c.check(rep.coordinates.converges, || "pinching: coordinate verdict diverges".into());
    let eps: Vec<f64> = rep.rows.iter().map(|r| r.eps).collect();
    c.check(strictly_decreasing(&eps), || format!("pinching: sup ε on Σ° not strictly decreasing {eps:?}"));
    for (j, idx) in rep.exhaustion.iter().enumerate() {
        let k: Vec<f64> = rep.rows.iter().map(|r| r.k_f[j]).collect();
        c.check(strictly_decreasing(&k) && k.iter().all(|&x| x >= 1.0), || format!("pinching: K on F{idx} {k:?}"));
    }
    c.check(rep.coherent, || "pinching: verdicts disagree".into());

    // control: twist oscillating at a curve of positive length
    let (target, seq) = load("genus2_oscillating.toml");
    let rep = verify_conditions(&target, &seq, &opts).unwrap();
    c.check(!rep.coordinates.converges, || "control: coordinate verdict converges".into());
    c.check(!rep.metric_converges, || "control: metric verdict converges".into());
    c.check(rep.coherent, || "control: verdicts disagree".into());
}

// ---------- 7. bounds

fn bounds(c: &mut Checks) {
    let uc = UniversalConstants::default();
    type Bound = fn(f64, f64, &UniversalConstants) -> f64;
    let fns: [(&str, Bound); 3] = [
        ("k_eps", |k, e, u| k_eps(k, e, u).unwrap()),
        ("k_tilde", |k, e, u| k_tilde(k, e, u).unwrap()),
        ("k_hat", |k, e, u| k_hat(k, e, u).unwrap().bound),
    ];
    for (name, f) in fns {
        let vals: Vec<f64> = [4, 8, 16, 32]
            .iter()
            .map(|&m| f(1.0 + 1.0 / m as f64, (-(m as f64)).exp(), &uc))
            .collect();
        c.check(vals.iter().all(|&v| v >= 1.0), || format!("{name} below 1: {vals:?}"));
        c.check(strictly_decreasing(&vals) && vals[3] - 1.0 < 0.5 * (vals[0] - 1.0), || {
            format!("{name} not tending to 1: {vals:?}")
        });
        for (k, e) in [(1.25, (-4.0f64).exp()), (1.0625, (-16.0f64).exp())] {
            let v = f(k, e, &uc);
            let jump = (f(k * (1.0 + 1e-9), e * (1.0 + 1e-9), &uc) - v).abs();
            c.check(jump < 1e-6 * v, || format!("{name} jumps by {jump:e} at ({k}, {e:e})"));
        }
    }

    let a = Complex64::new(0.0, 0.5);
    let translation = move |z: Complex64| Ok((z + a) / (1.0 + a.conj() * z));
    let b = Complex64::new(0.3, 0.1);
    let stretched = move |z: Complex64| {
        let s = z * z.norm().sqrt();
        Ok((s + b) / (1.0 + b.conj() * s))
    };
    type DiscFn = Box<dyn Fn(Complex64) -> augteich::Result<Complex64> + Sync>;
    let maps: [(&str, DiscFn); 2] = [("translation", Box::new(translation)), ("stretch", Box::new(stretched))];
    for (name, h) in maps {
        let m = translate_to_fix_origin(&h).unwrap();
        let o = m.eval(Complex64::new(0.0, 0.0)).unwrap().norm();
        c.check(o < 1e-12, || format!("{name}: |ĥ(0)| = {o:e}"));
        let gap = (0..256)
            .map(|k| {
                let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 256.0);
                (m.eval(z).unwrap() - h(z).unwrap()).norm()
            })
            .fold(0.0, f64::max);
        c.check(gap < 1e-8, || format!("{name}: boundary gap {gap:e}"));
        let before = disc_distortion(&|z| h(z), 64).unwrap().sup_k;
        let after = disc_distortion(&|z| m.eval(z), 64).unwrap().sup_k;
        c.check(after / before <= m.factor() * 1.02, || {
            format!("{name}: inflation {} over (1+d)/(1−d) = {}", after / before, m.factor())
        });
    }
}

// ---------- 8. CLI

fn invoke(args: &[String]) -> cli::Outcome {
    cli::run(std::iter::once("augteich".to_string()).chain(args.iter().cloned()), None)
}

fn table_cell(r: &Report, table: &str, key: &str) -> Option<Value> {
    let t = r.tables.iter().find(|t| t.name == table)?;
    t.rows.iter().find(|row| matches!(&row[0], Value::Text(k) if k == key)).map(|row| row[1].clone())
}

fn cli_checks(c: &mut Checks) {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<String>>();
    let e9 = (-9.0f64).exp().to_string();
    let examples: Vec<Vec<String>> = vec![
        s(&["special", "lambda", "1"]),
        s(&["special", "annulus-mod", "0.0018674"]),
        s(&["special", "mu-inverse", "1.5707963"]),
        s(&["bounds", "--K", "1", "--eps", "1e-9", "--b0", "2", "--b1", "1", "k-eps"]),
        s(&["bounds", "--K", "1", "--eps", &e9, "--b0", "2", "--b1", "1", "k-eps"]),
        s(&["bounds", "--K", "1.01", "--eps", "1e-16", "k-tilde"]),
        s(&["bounds", "--K", "1.05", "--eps", "1e-16", "k-tilde"]),
        s(&["surface", &data("torus.toml"), "holonomy-traces"]),
        s(&["surface", &data("torus.toml"), "lengths"]),
        s(&["surface", &data("torus_node.toml"), "collars"]),
        s(&["converge", &data("genus2_constant.toml"), "--grid", "16"]),
        s(&["converge", &data("genus2_pinching.toml")]),
        s(&["converge", &data("genus2_oscillating.toml")]),
        s(&["distortion", "annulus", "--from", "2", "--to", "2.2,2.02,2.002"]),
        s(&["--format", "csv", "distortion", "pants", "--from", "1,1,1", "--to", "1.2,0.9,1", "--grid", "16"]),
    ];
    for args in &examples {
        let (a, b) = (invoke(args), invoke(args));
        c.check(a.code == 0, || format!("`{}` exits {}: {}", args.join(" "), a.code, a.stderr.trim()));
        c.check(a == b, || format!("`{}` is not byte-identical across runs", args.join(" ")));
    }
    let report = |args: &[String]| Report::parse(&invoke(args).stdout).unwrap();
    let r = report(&examples[3]);
    c.check(
        matches!(table_cell(&r, "bound", "k-eps"), Some(Value::Num(v)) if (v - 1.0921).abs() < 1e-4),
        || "k-eps at ε = 1e-9".into(),
    );
    let r = report(&examples[11]);
    c.check(
        matches!(table_cell(&r, "verdicts", "coherent"), Some(Value::Bool(true)))
            && matches!(table_cell(&r, "verdicts", "coordinates"), Some(Value::Bool(true))),
        || "converge pinching verdict".into(),
    );
    let r = report(&examples[12]);
    c.check(
        matches!(table_cell(&r, "verdicts", "coordinates"), Some(Value::Bool(false)))
            && matches!(table_cell(&r, "verdicts", "metric"), Some(Value::Bool(false))),
        || "converge oscillating verdict".into(),
    );

    let errors: Vec<(Vec<String>, i32, &str)> = vec![
        (s(&["special", "mu", "1.5"]), 1, "domain"),
        (s(&["special", "lambda", "-2"]), 1, "domain"),
        (s(&["bounds", "--K", "1", "--eps", "0.9", "k-hat"]), 1, "bound vacuous"),
        (s(&["bounds", "--K", "0.5", "--eps", "0.1", "k-eps"]), 1, "domain"),
        (s(&["surface", &data("bad_gluing.toml"), "lengths"]), 2, "curves[0].b.slot"),
        (s(&["surface", &data("no_such_file.toml"), "lengths"]), 2, "no_such_file"),
        (s(&["converge", &data("torus.toml")]), 2, "sequence"),
        (s(&["special", "gamma", "1"]), 2, ""),
    ];
    for (args, code, needle) in &errors {
        let (a, b) = (invoke(args), invoke(args));
        c.check(a.code == *code && a.stderr.contains(needle), || {
            format!("`{}` exits {} (want {code}): {}", args.join(" "), a.code, a.stderr.trim())
        });
        c.check(a == b, || format!("`{}` error output differs across runs", args.join(" ")));
    }
}

#[test]
fn acceptance() {
    let mut incidence = Checks::new();
    let mut outcomes = vec![
        run_criterion("criterion 1 (special functions)", secs(1), special_functions),
        run_criterion("criterion 2 (moduli)", secs(30), moduli),
        run_criterion("criterion 3 (collar geometry)", secs(5), collar_geometry),
        run_criterion("criterion 4 (hexagons)", secs(60), |c| hexagons(c, &mut incidence)),
        run_criterion("criterion 5 (standard maps)", secs(120), standard_maps),
        run_criterion("criterion 6 (Teichmüller layer)", secs(600), teichmuller),
        run_criterion("criterion 7 (bounds)", secs(60), bounds),
        run_criterion("criterion 8 (CLI)", secs(60), cli_checks),
    ];
    // core star-shapedness example, swept together with criterion 4
    outcomes.push(run_criterion("example (core incidence ≥ ξ(max h)/2)", secs(1), |c| {
        c.failed.append(&mut incidence.failed);
        c.total += incidence.total;
    }));
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.label.as_str()).collect();
    assert!(failed.is_empty(), "failed: {}", failed.join(", "));
}
