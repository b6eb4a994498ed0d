use super::input::{parse_pants_document, PantsDocument};
use super::report::{fmt_num, ColumnType as C, Report, Table, Value as V};
use super::{load_constants, BoundsArgs, Command, ConvergeArgs, DistortionCmd, SpecialFn, SurfaceAction};
use crate::collar::{collar_chart, hexagon_from_sides, hexagon_regions};
use crate::error::{Error, Result};
use crate::moduli::{annulus_modulus, grotzsch_mu, lambda_of_k, mu_inverse};
use crate::qc_bounds::{bound_report, extension_constant, BoundKind};
use crate::standard_maps::{pants_map, AnnulusMap, DistortionReport, TwistProfile};
use crate::teich::{build_surface, curve_word, verify_conditions, MarkedSurface, Slot, VerifyOptions};
use std::path::Path;

/// Interface samples for the glued pants map.
const INTERFACE_SAMPLES: usize = 256;

pub(super) fn execute(cmd: &Command, constants_file: Option<&Path>) -> Result<Report> {
    match cmd {
        Command::Special { function, x } => special(*function, *x),
        Command::Bounds(a) => bounds(a, constants_file),
        Command::Surface { file, action } => surface(&read_document(file)?, *action),
        Command::Converge(a) => converge(a),
        Command::Distortion(d) => distortion(d),
    }
}

fn read_document(path: &Path) -> Result<PantsDocument> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::schema(path.display().to_string(), format!("cannot read: {e}")))?;
    parse_pants_document(&src).map_err(|e| match e {
        Error::Schema { path: p, message } => Error::schema(format!("{}: {p}", path.display()), message),
        other => other,
    })
}

fn num_list(v: &[f64]) -> String {
    v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(",")
}

fn special(f: SpecialFn, x: f64) -> Result<Report> {
    let (name, value, method) = match f {
        SpecialFn::Mu => ("mu", grotzsch_mu(x)?, "mu(r) = (pi/2) K(r')/K(r), K by AGM"),
        SpecialFn::MuInverse => ("mu-inverse", mu_inverse(x)?, "bisection on log r against the AGM form of mu"),
        SpecialFn::Lambda => ("lambda", lambda_of_k(x)?, "lambda(K) = (r'/r)^2 with r = mu^-1(pi K/2)"),
        SpecialFn::AnnulusMod => ("annulus-mod", annulus_modulus(x)?, "-log(r)/(2 pi)"),
    };
    let mut r = Report::new("special");
    r.meta("function", name);
    r.meta_num("argument", x);
    r.meta("method", method);
    let mut t = Table::new("result", &[("function", C::Text), ("argument", C::Num), ("value", C::Num)]);
    t.push(vec![V::Text(name.into()), V::Num(x), V::Num(value)]);
    r.tables.push(t);
    Ok(r)
}

fn bounds(a: &BoundsArgs, constants_file: Option<&Path>) -> Result<Report> {
    let src = load_constants(constants_file, a.b0, a.b1)?;
    let c = src.constants;
    let mut r = Report::new("bounds");
    r.meta("which", a.which.clone());
    r.meta_num("b0", c.b0());
    r.meta_num("b1", c.b1());
    r.meta("constants", src.origin);
    let mut t = Table::new("bound", &[("quantity", C::Text), ("value", C::Num)]);
    if let Some(rad) = a.which.strip_prefix("extension:") {
        let x: f64 = rad.trim().parse().map_err(|_| Error::schema("which", format!("radius {rad:?} is not a number")))?;
        r.meta_num("r", x);
        t.push(vec![V::Text("extension_constant".into()), V::Num(extension_constant(x, &c)?)]);
        r.tables.push(t);
        return Ok(r);
    }
    let kind = match a.which.as_str() {
        "k-eps" => BoundKind::KEps,
        "k-tilde" => BoundKind::KTilde,
        "k-hat" => BoundKind::KHat,
        other => {
            return Err(Error::schema("which", format!("{other:?} is not one of k-eps, k-tilde, k-hat, extension:<r>")))
        }
    };
    let eps = a.eps.ok_or_else(|| Error::schema("--eps", format!("{} needs --eps", kind.name())))?;
    r.meta_num("K", a.k);
    r.meta_num("eps", eps);
    let b = bound_report(kind, a.k, eps, &c)?;
    let label = if kind == BoundKind::KHat { "k_eps_prime" } else { "k_eps" };
    t.push(vec![V::Text(label.into()), V::Num(b.k_eps)]);
    for (name, v) in [("lambda_sq", b.lambda_sq), ("d_bound", b.d_bound), ("translation_factor", b.translation_factor)] {
        if let Some(v) = v {
            t.push(vec![V::Text(name.into()), V::Num(v)]);
        }
    }
    t.push(vec![V::Text(kind.name().into()), V::Num(b.bound)]);
    r.tables.push(t);
    Ok(r)
}

fn surface(doc: &PantsDocument, action: SurfaceAction) -> Result<Report> {
    let s = build_surface(&doc.complex, &doc.target)?;
    let c = &doc.complex;
    let mut r = Report::new("surface");
    r.meta("pants", doc.ids.join(","));
    r.meta("curves", c.n_curves().to_string());
    r.meta("free_slots", c.free_slots().len().to_string());
    match action {
        SurfaceAction::Lengths => {
            r.meta("action", "lengths");
            let mut t = Table::new(
                "curves",
                &[("curve", C::Int), ("a", C::Text), ("b", C::Text), ("length", C::Num), ("twist", C::Num), ("measured", C::Num), ("residual", C::Num), ("node", C::Bool)],
            );
            for (k, g) in c.gluings().iter().enumerate() {
                let l = doc.target.lengths[k];
                let m = s.measured_length(k);
                t.push(vec![
                    V::Int(k as i64 + 1),
                    V::Text(doc.slot_label(g.a)),
                    V::Text(doc.slot_label(g.b)),
                    V::Num(l),
                    V::Num(doc.target.twists[k]),
                    V::Num(m),
                    V::Num((m - l).abs()),
                    V::Bool(s.is_node(k)),
                ]);
            }
            r.tables.push(t);
            let mut f = Table::new("free", &[("slot", C::Text), ("length", C::Num), ("cusp", C::Bool)]);
            for &sl in &doc.free_listing {
                let l = s.slot_length(sl);
                f.push(vec![V::Text(doc.slot_label(sl)), V::Num(l), V::Bool(l == 0.0)]);
            }
            r.tables.push(f);
        }
        SurfaceAction::HolonomyTraces => {
            r.meta("action", "holonomy-traces");
            let mut t = Table::new(
                "traces",
                &[("loop", C::Text), ("length", C::Num), ("abs_trace", C::Num), ("expected", C::Num), ("residual", C::Num)],
            );
            let mut row = |name: String, l: f64, tr: f64| {
                let e = 2.0 * (l / 2.0).cosh();
                t.push(vec![V::Text(name), V::Num(l), V::Num(tr.abs()), V::Num(e), V::Num((tr.abs() - e).abs())]);
            };
            for k in 0..c.n_curves() {
                let h = s.holonomy(&curve_word(c, k))?;
                row(format!("curve {}", k + 1), doc.target.lengths[k], h.trace());
            }
            for &sl in &doc.free_listing {
                let h = s.boundary_holonomy(sl.pants, sl.index);
                row(format!("free {}", doc.slot_label(sl)), s.slot_length(sl), h.trace());
            }
            r.tables.push(t);
        }
        SurfaceAction::Collars => {
            r.meta("action", "collars");
            let mut t = Table::new(
                "collars",
                &[
                    ("slot", C::Text),
                    ("boundary", C::Text),
                    ("length", C::Num),
                    ("chart", C::Text),
                    ("t", C::Num),
                    ("width", C::Num),
                    ("outer_length", C::Num),
                    ("area", C::Num),
                ],
            );
            for p in 0..c.n_pants() {
                let regions = hexagon_regions(s.pants(p).hexagon())?;
                for i in 0..3 {
                    let sl = Slot::new(p, i);
                    let l = s.slot_length(sl);
                    let ch = collar_chart(l, regions.t()[i])?;
                    let boundary = match c.curve_at(sl) {
                        Some(k) => format!("curve {}", k + 1),
                        None => "free".into(),
                    };
                    t.push(vec![
                        V::Text(doc.slot_label(sl)),
                        V::Text(boundary),
                        V::Num(l),
                        V::Text(if ch.is_cusp() { "cusp" } else { "fermi" }.into()),
                        V::Num(ch.t()),
                        V::Num(ch.width()),
                        V::Num(ch.outer_length()),
                        V::Num(ch.area()),
                    ]);
                }
            }
            r.tables.push(t);
        }
    }
    Ok(r)
}

fn converge(a: &ConvergeArgs) -> Result<Report> {
    let doc = read_document(&a.file)?;
    if doc.sequence.is_empty() {
        return Err(Error::schema(format!("{}: sequence", a.file.display()), "converge needs at least one [[sequence]] block"));
    }
    if a.start_grid == 0 || a.start_grid > a.grid {
        return Err(Error::domain(format!("starting grid {} must lie in 1..={}", a.start_grid, a.grid)));
    }
    let target = build_surface(&doc.complex, &doc.target)?;
    let seq = doc
        .sequence
        .iter()
        .enumerate()
        .map(|(n, p)| build_surface(&doc.complex, p).map_err(|e| annotate(e, n)))
        .collect::<Result<Vec<MarkedSurface>>>()?;
    let opts = VerifyOptions {
        resolution: a.start_grid,
        max_resolution: a.grid,
        exhaustion: a.exhaustion.clone(),
        tol: a.tol,
        metric_tol: a.metric_tol,
    };
    let rep = verify_conditions(&target, &seq, &opts)?;

    let mut r = Report::new("converge");
    r.meta("terms", seq.len().to_string());
    r.meta_num("tol", a.tol);
    r.meta_num("metric_tol", a.metric_tol);
    r.meta("start_grid", a.start_grid.to_string());
    r.meta("max_grid", a.grid.to_string());
    r.meta("exhaustion", num_list(&a.exhaustion));
    r.meta_num("interface_tol", 1e-7);
    r.meta("inert_twists", rep.coordinates.inert.join(","));

    let trajs = &rep.coordinates.trajectories;
    let mut cols: Vec<(&str, C)> = vec![("n", C::Int)];
    cols.extend(trajs.iter().map(|t| (t.label.as_str(), C::Num)));
    let mut ct = Table::new("coordinates", &cols);
    for n in 0..seq.len() {
        let mut row = vec![V::Int(n as i64 + 1)];
        row.extend(trajs.iter().map(|t| V::Num(t.residuals[n])));
        ct.push(row);
    }
    r.tables.push(ct);

    let js: Vec<String> = a.exhaustion.iter().map(|j| format!("{j}")).collect();
    let mut names: Vec<String> = vec!["n".into(), "resolution".into(), "resolved".into(), "eps_core".into(), "k_core".into()];
    for j in &js {
        names.push(format!("eps_F{j}"));
        names.push(format!("k_F{j}"));
    }
    names.push("interface_gap".into());
    let mut cols: Vec<(&str, C)> = Vec::new();
    for (k, name) in names.iter().enumerate() {
        let ty = match k {
            0 | 1 => C::Int,
            2 => C::Bool,
            _ => C::Num,
        };
        cols.push((name.as_str(), ty));
    }
    let mut mt = Table::new("metric", &cols);
    for (n, row) in rep.rows.iter().enumerate() {
        let mut v = vec![V::Int(n as i64 + 1), V::Int(row.resolution as i64), V::Bool(row.resolved), V::Num(row.eps), V::Num(row.k)];
        for j in 0..js.len() {
            v.push(V::Num(row.eps_f[j]));
            v.push(V::Num(row.k_f[j]));
        }
        v.push(V::Num(row.interface_gap));
        mt.push(v);
        if !row.resolved {
            r.warnings.push(format!("term {}: sups still moving by more than 5% at grid {}", n + 1, row.resolution));
        }
        if row.interface_gap > 1e-7 {
            r.warnings.push(format!("term {}: interface gap {} exceeds 1e-7", n + 1, fmt_num(row.interface_gap)));
        }
    }
    r.tables.push(mt);

    let mut vt = Table::new("verdicts", &[("condition", C::Text), ("converges", C::Bool)]);
    let mut verdict = |name: String, b: bool| vt.push(vec![V::Text(name), V::Bool(b)]);
    verdict("coordinates".into(), rep.coordinates.converges);
    for t in trajs {
        verdict(format!("coordinate {}", t.label), t.converges);
    }
    verdict("eps_core".into(), rep.eps_converges);
    verdict("k_core".into(), rep.k_converges);
    for (j, b) in js.iter().zip(&rep.f_converges) {
        verdict(format!("F{j}"), *b);
    }
    verdict("metric".into(), rep.metric_converges);
    verdict("coherent".into(), rep.coherent);
    r.tables.push(vt);
    if !rep.coherent {
        r.warnings.push("coordinate and metric verdicts disagree".into());
    }
    Ok(r)
}

fn annotate(e: Error, n: usize) -> Error {
    match e {
        Error::Domain(m) => Error::Domain(format!("sequence term {}: {m}", n + 1)),
        Error::Structure(m) => Error::Structure(format!("sequence term {}: {m}", n + 1)),
        other => other,
    }
}

fn distortion_row(t: &mut Table, label: V, d: &DistortionReport) {
    t.push(vec![
        label,
        V::Num(d.sup_k),
        V::Num(d.sup_eps),
        V::Num(d.sup_eps_inverse),
        V::Int(d.samples.len() as i64),
        V::Int(d.skipped as i64),
    ]);
}

fn triple(v: &[f64], flag: &str) -> Result<[f64; 3]> {
    v.try_into().map_err(|_| Error::schema(flag, format!("expected three comma-separated values, found {}", v.len())))
}

fn distortion(cmd: &DistortionCmd) -> Result<Report> {
    let mut r = Report::new("distortion");
    match cmd {
        DistortionCmd::Annulus { from, to, theta, t, grid } => {
            r.meta("map", "annulus");
            r.meta_num("from", *from);
            r.meta_num("theta", *theta);
            r.meta_num("t", *t);
            r.meta("grid", grid.to_string());
            let src = collar_chart(*from, *t)?;
            let mut tab = Table::new(
                "annulus",
                &[("to", C::Num), ("sup_k", C::Num), ("sup_eps", C::Num), ("sup_eps_inverse", C::Num), ("samples", C::Int), ("skipped", C::Int)],
            );
            for &l in to {
                let m = AnnulusMap::new(src, collar_chart(l, *t)?, *theta, TwistProfile::default())?;
                distortion_row(&mut tab, V::Num(l), &m.distortion(*grid)?);
            }
            r.tables.push(tab);
        }
        DistortionCmd::Pants { from, to, theta, grid, cusp_cut } => {
            let (f, g, th) = (triple(from, "--from")?, triple(to, "--to")?, triple(theta, "--theta")?);
            r.meta("map", "pants");
            r.meta("from", num_list(&f));
            r.meta("to", num_list(&g));
            r.meta("theta", num_list(&th));
            r.meta("grid", grid.to_string());
            r.meta_num("cusp_cut", *cusp_cut);
            r.meta("interface_samples", INTERFACE_SAMPLES.to_string());
            let src = hexagon_from_sides(f[0] / 2.0, f[1] / 2.0, f[2] / 2.0)?;
            let tgt = hexagon_from_sides(g[0] / 2.0, g[1] / 2.0, g[2] / 2.0)?;
            let m = pants_map(&src, &tgt, th)?;
            let cuts = f.map(|l| Some(if l == 0.0 { *cusp_cut } else { f64::INFINITY }));
            let d = m.distortion(*grid, cuts)?;
            let mut tab = Table::new(
                "regions",
                &[("region", C::Text), ("sup_k", C::Num), ("sup_eps", C::Num), ("sup_eps_inverse", C::Num), ("samples", C::Int), ("skipped", C::Int)],
            );
            distortion_row(&mut tab, V::Text("core".into()), &d.core);
            for (i, c) in d.collars.iter().enumerate() {
                if let Some(c) = c {
                    distortion_row(&mut tab, V::Text(format!("collar {}", i + 1)), c);
                }
            }
            r.tables.push(tab);
            let mut it = Table::new("interface", &[("quantity", C::Text), ("value", C::Num)]);
            it.push(vec![V::Text("interface_gap".into()), V::Num(m.interface_gap(INTERFACE_SAMPLES)?)]);
            it.push(vec![V::Text("sup_k".into()), V::Num(d.sup_k())]);
            r.tables.push(it);
        }
    }
    Ok(r)
}
