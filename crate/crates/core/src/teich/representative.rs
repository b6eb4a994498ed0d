use super::complex::{FNPoint, Slot};
use super::convergence::{converge_check_coordinates, relative_trend_converges, ConvergenceVerdict};
use super::surface::MarkedSurface;
use crate::collar::{ChartPoint, PantsPoint};
use crate::error::{Error, Result};
use crate::standard_maps::{pants_map, PantsImage, PantsMap};
use rayon::prelude::*;

/// Samples per curve for the gluing continuity check.
pub const INTERFACE_SAMPLES: usize = 128;
pub const INTERFACE_TOL: f64 = 1e-7;
/// Metric deviations below this are numerical noise of the Jacobian estimate.
pub const METRIC_FLOOR: f64 = 1e-6;

/// The map h_n between an approximant Σ_n and the target Σ, assembled from
/// per-pants standard maps Σ_n ⊃ P_i^(n) → P_i ⊂ Σ.
#[derive(Debug, Clone)]
pub struct GoodRepresentative {
    target: MarkedSurface,
    approximant: MarkedSurface,
    maps: Vec<PantsMap>,
    gaps: Vec<f64>,
}

fn wrap_to(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    r.min(period - r)
}

pub fn good_representative(target: &MarkedSurface, approximant: &MarkedSurface) -> Result<GoodRepresentative> {
    let c = target.complex();
    if approximant.complex() != c {
        return Err(Error::Structure("target and approximant use different pants complexes".into()));
    }
    let (pt, pn) = (target.point(), approximant.point());
    for p in 0..c.n_pants() {
        for i in 0..3 {
            let s = Slot::new(p, i);
            if approximant.slot_length(s) == 0.0 && target.slot_length(s) != 0.0 {
                return Err(Error::domain(format!(
                    "pants {} slot {} is a cusp of the approximant but not of the target",
                    p + 1,
                    i + 1
                )));
            }
        }
    }
    let mut maps = Vec::with_capacity(c.n_pants());
    for p in 0..c.n_pants() {
        let theta = std::array::from_fn(|i| match c.curve_at(Slot::new(p, i)) {
            Some(k) if pt.lengths[k] > 0.0 => 0.5 * (pt.twists[k] / pt.lengths[k] - pn.twists[k] / pn.lengths[k]),
            _ => 0.0,
        });
        maps.push(pants_map(approximant.pants(p).hexagon(), target.pants(p).hexagon(), theta)?);
    }
    let mut rep = GoodRepresentative {
        target: target.clone(),
        approximant: approximant.clone(),
        maps,
        gaps: Vec::new(),
    };
    rep.gaps = (0..c.n_curves()).map(|k| rep.curve_gap(k)).collect::<Result<_>>()?;
    if let Some((k, g)) = rep.gaps.iter().enumerate().find(|(_, g)| !(**g <= INTERFACE_TOL)) {
        return Err(Error::Internal(format!("gluing mismatch {g:e} across curve {}", k + 1)));
    }
    Ok(rep)
}

impl GoodRepresentative {
    pub fn target(&self) -> &MarkedSurface {
        &self.target
    }

    pub fn approximant(&self) -> &MarkedSurface {
        &self.approximant
    }

    pub fn pants_map(&self, p: usize) -> &PantsMap {
        &self.maps[p]
    }

    /// h_n^{-1} on pants p: approximant → target.
    pub fn eval(&self, p: usize, x: PantsPoint) -> Result<PantsImage> {
        self.maps[p].eval(x)
    }

    /// h_n on pants p: target → approximant.
    pub fn eval_inverse(&self, p: usize, x: PantsPoint) -> Result<PantsPoint> {
        self.maps[p].eval_inverse(x)
    }

    /// Largest gluing mismatch per curve over the interface samples.
    pub fn interface_gaps(&self) -> &[f64] {
        &self.gaps
    }

    fn boundary_image_x(&self, s: Slot, x: f64) -> Result<Option<f64>> {
        let m = &self.maps[s.pants];
        let q = m.source().from_collar_coords(s.index, ChartPoint::Fermi { rho: 0.0, x })?;
        match m.eval(q)? {
            PantsImage::Cusp(_) => Ok(None),
            PantsImage::Point(img) => match m.target().collar_coords(s.index, img) {
                ChartPoint::Fermi { x, .. } => Ok(Some(x)),
                _ => Ok(None),
            },
        }
    }

    fn curve_gap(&self, k: usize) -> Result<f64> {
        let g = self.target.complex().gluings()[k];
        let (ln, tn) = (self.approximant.point().lengths[k], self.approximant.point().twists[k]);
        let (l, tau) = (self.target.point().lengths[k], self.target.point().twists[k]);
        if ln == 0.0 {
            return Ok(0.0);
        }
        let mut worst: f64 = 0.0;
        for j in 0..INTERFACE_SAMPLES {
            let xa = (j as f64 + 0.5) / INTERFACE_SAMPLES as f64 * ln;
            let xb = (tn - xa).rem_euclid(ln);
            match (self.boundary_image_x(g.a, xa)?, self.boundary_image_x(g.b, xb)?) {
                (Some(ya), Some(yb)) => worst = worst.max(wrap_to(ya + yb - tau, l)),
                (None, None) => {}
                _ => return Err(Error::Internal(format!("curve {} maps to a node on one side only", k + 1))),
            }
        }
        Ok(worst)
    }

    /// Relative twist across curve k realized by the map, in turns: the winding of the
    /// image of a transverse Fermi segment, summed over both sides. `None` at target nodes.
    pub fn realized_twist(&self, k: usize) -> Result<Option<f64>> {
        let g = self.target.complex().gluings()[k];
        let l = self.target.point().lengths[k];
        if l == 0.0 {
            return Ok(None);
        }
        let mut total = 0.0;
        for s in [g.a, g.b] {
            let m = &self.maps[s.pants];
            let src = m.source().collar_chart(s.index, m.source_regions().t()[s.index])?;
            let x0 = 0.3 * src.length();
            let steps = 256;
            let mut prev: Option<f64> = None;
            let mut wound = 0.0;
            for j in 0..=steps {
                let rho = src.width() * (1.0 - j as f64 / steps as f64);
                let q = m.source().from_collar_coords(s.index, ChartPoint::Fermi { rho, x: x0 })?;
                let PantsImage::Point(img) = m.eval(q)? else {
                    return Err(Error::Internal("finite collar mapped to a cusp".into()));
                };
                let ChartPoint::Fermi { x, .. } = m.target().collar_coords(s.index, img) else {
                    return Err(Error::Internal("collar chart type changed".into()));
                };
                if let Some(p) = prev {
                    let mut d = x - p;
                    d -= l * (d / l).round();
                    wound += d;
                } else {
                    // the collar boundary maps without twist
                    wound = x - x0 * l / src.length();
                    wound -= l * (wound / l).round();
                }
                prev = Some(x);
            }
            total += wound / l;
        }
        Ok(Some(total))
    }

    /// The target coordinates re-marked through the map: lengths of the target,
    /// twists τ_n·ℓ/ℓ_n plus the realized relative twist.
    pub fn realized_point(&self) -> Result<FNPoint> {
        let (pt, pn) = (self.target.point(), self.approximant.point());
        let mut out = pt.clone();
        for k in 0..pt.lengths.len() {
            if let Some(r) = self.realized_twist(k)? {
                out.twists[k] = pt.lengths[k] * (pn.twists[k] / pn.lengths[k] + r);
            }
        }
        Ok(out)
    }
}

/// Sampling options for `verify_conditions`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// starting grid resolution per chart dimension
    pub resolution: usize,
    /// largest resolution tried while refining
    pub max_resolution: usize,
    /// exhaustion indices j of F_j = Σ_sm ∖ ⋃ A_{t/j}(nodes)
    pub exhaustion: Vec<f64>,
    /// absolute tolerance of the coordinate residuals
    pub tol: f64,
    /// required reduction last/first of the metric deviations
    pub metric_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { resolution: 16, max_resolution: 64, exhaustion: vec![2.0, 4.0, 8.0], tol: 0.1, metric_tol: 0.1 }
    }
}

/// Measurements for one term of the sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionRow {
    pub resolution: usize,
    /// whether the last doubling changed the sups by under 5%
    pub resolved: bool,
    /// sup of the metric deviation on Σ°
    pub eps: f64,
    pub k: f64,
    /// per exhaustion index j
    pub eps_f: Vec<f64>,
    pub k_f: Vec<f64>,
    pub interface_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub rows: Vec<ConditionRow>,
    pub exhaustion: Vec<f64>,
    pub tol: f64,
    pub metric_tol: f64,
    pub eps_converges: bool,
    pub k_converges: bool,
    pub f_converges: Vec<bool>,
    pub metric_converges: bool,
    pub coordinates: ConvergenceVerdict,
    /// whether the coordinate and metric verdicts agree
    pub coherent: bool,
}

struct Sups {
    eps: f64,
    k: f64,
    eps_f: Vec<f64>,
    k_f: Vec<f64>,
}

fn measure(rep: &GoodRepresentative, res: usize, exhaustion: &[f64]) -> Result<Sups> {
    let target = rep.target();
    let c = target.complex();
    let jmax = exhaustion.iter().cloned().fold(2.0, f64::max);
    let mut out = Sups { eps: 0.0, k: 1.0, eps_f: vec![0.0; exhaustion.len()], k_f: vec![1.0; exhaustion.len()] };
    for p in 0..c.n_pants() {
        let m = rep.pants_map(p);
        let core = m.core_distortion(res)?;
        out.eps = out.eps.max(core.sup_eps_inverse);
        out.k = out.k.max(core.sup_k);
        for i in 0..3 {
            let s = Slot::new(p, i);
            let node = c.curve_at(s).is_some_and(|k| target.is_node(k));
            let cusp = target.slot_length(s) == 0.0;
            if node {
                for (j, &cut) in exhaustion.iter().enumerate() {
                    let d = m.collar_distortion(i, res, cut)?;
                    out.eps_f[j] = out.eps_f[j].max(d.sup_eps_inverse);
                    out.k_f[j] = out.k_f[j].max(d.sup_k);
                }
            } else {
                // free cusps are sampled up to the deepest exhaustion level
                let cut = if cusp { jmax } else { f64::INFINITY };
                let d = m.collar_distortion(i, res, cut)?;
                out.eps = out.eps.max(d.sup_eps_inverse);
                out.k = out.k.max(d.sup_k);
            }
        }
    }
    for j in 0..exhaustion.len() {
        out.eps_f[j] = out.eps_f[j].max(out.eps);
        out.k_f[j] = out.k_f[j].max(out.k);
    }
    Ok(out)
}

fn settled(a: f64, b: f64) -> bool {
    (a - b).abs() <= 0.05 * b.abs().max(a.abs()) || (a - b).abs() <= 1e-9
}

fn condition_row(rep: &GoodRepresentative, opts: &VerifyOptions) -> Result<ConditionRow> {
    let mut res = opts.resolution;
    let mut cur = measure(rep, res, &opts.exhaustion)?;
    let mut resolved = false;
    while 2 * res <= opts.max_resolution {
        let next = measure(rep, 2 * res, &opts.exhaustion)?;
        let ok = settled(cur.eps, next.eps)
            && settled(cur.k - 1.0, next.k - 1.0)
            && cur.k_f.iter().zip(&next.k_f).all(|(a, b)| settled(a - 1.0, b - 1.0));
        res *= 2;
        cur = next;
        if ok {
            resolved = true;
            break;
        }
    }
    Ok(ConditionRow {
        resolution: res,
        resolved,
        eps: cur.eps,
        k: cur.k,
        eps_f: cur.eps_f,
        k_f: cur.k_f,
        interface_gap: rep.interface_gaps().iter().cloned().fold(0.0, f64::max),
    })
}

/// Measures the metric deviation ε_n and the dilatation K_n of the good representatives
/// on Σ° and on the compacts F_j, and compares the trend verdict with the coordinate verdict.
pub fn verify_conditions(
    target: &MarkedSurface,
    sequence: &[MarkedSurface],
    opts: &VerifyOptions,
) -> Result<CriterionReport> {
    if !(opts.metric_tol > 0.0 && opts.metric_tol < 1.0) {
        return Err(Error::domain(format!("metric tolerance {} must lie in (0, 1)", opts.metric_tol)));
    }
    if opts.resolution == 0 || opts.exhaustion.iter().any(|j| !(*j > 1.0) || !j.is_finite()) {
        return Err(Error::domain("resolution must be positive and exhaustion indices finite and > 1"));
    }
    let points: Vec<FNPoint> = sequence.iter().map(|s| s.point().clone()).collect();
    let coordinates = converge_check_coordinates(target.complex(), target.point(), &points, opts.tol)?;
    let rows = sequence
        .par_iter()
        .map(|s| condition_row(&good_representative(target, s)?, opts))
        .collect::<Result<Vec<_>>>()?;

    let trend = |v: Vec<f64>| relative_trend_converges(&v, opts.metric_tol, METRIC_FLOOR);
    let eps_converges = trend(rows.iter().map(|r| r.eps).collect());
    let k_converges = trend(rows.iter().map(|r| r.k - 1.0).collect());
    let f_converges: Vec<bool> = (0..opts.exhaustion.len())
        .map(|j| trend(rows.iter().map(|r| r.eps_f[j]).collect()) && trend(rows.iter().map(|r| r.k_f[j] - 1.0).collect()))
        .collect();
    let metric_converges = eps_converges && k_converges && f_converges.iter().all(|&b| b);
    Ok(CriterionReport {
        coherent: metric_converges == coordinates.converges,
        rows,
        exhaustion: opts.exhaustion.clone(),
        tol: opts.tol,
        metric_tol: opts.metric_tol,
        eps_converges,
        k_converges,
        f_converges,
        metric_converges,
        coordinates,
    })
}
