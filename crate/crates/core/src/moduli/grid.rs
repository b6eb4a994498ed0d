use crate::error::{Error, Result};
use std::collections::VecDeque;

/// Planar Jordan polygon with four marked vertices; the a-sides run from
/// vertex 0 to vertex 1 and from vertex 2 to vertex 3.
#[derive(Debug, Clone)]
pub struct Quadrilateral {
    boundary: Vec<[f64; 2]>,
    vertices: [usize; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulusMethod {
    ClosedForm,
    GridEstimate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusValue {
    pub value: f64,
    pub method: ModulusMethod,
    pub resolution: Option<usize>,
}

/// Rengel lower bound s²/Area, with s the distance between the b-sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RengelCheck {
    pub separation: f64,
    pub area: f64,
    pub lower_bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    A0,
    B0,
    A1,
    B1,
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_intersect(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if d1 == 0.0 && d2 == 0.0 {
        // collinear: overlap of the projections
        let ax = if (p2[0] - p1[0]).abs() >= (p2[1] - p1[1]).abs() { 0 } else { 1 };
        let (a0, a1) = (p1[ax].min(p2[ax]), p1[ax].max(p2[ax]));
        let (b0, b1) = (q1[ax].min(q2[ax]), q1[ax].max(q2[ax]));
        return a0 <= b1 && b0 <= a1;
    }
    d1 * d2 <= 0.0 && d3 * d4 <= 0.0
}

fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
}

fn segment_distance(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> f64 {
    if segments_intersect(p1, p2, q1, q2) {
        return 0.0;
    }
    point_segment_distance(p1, q1, q2)
        .min(point_segment_distance(p2, q1, q2))
        .min(point_segment_distance(q1, p1, p2))
        .min(point_segment_distance(q2, p1, p2))
}

impl Quadrilateral {
    pub fn new(boundary: Vec<[f64; 2]>, vertices: [usize; 4]) -> Result<Self> {
        let n = boundary.len();
        if n < 4 {
            return Err(Error::domain("quadrilateral boundary needs at least 4 points"));
        }
        if boundary.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(Error::domain("non-finite boundary point"));
        }
        if vertices.iter().any(|&v| v >= n) {
            return Err(Error::domain("vertex index outside the boundary"));
        }
        let steps: usize = (0..4).map(|k| (vertices[(k + 1) % 4] + n - vertices[k]) % n).sum();
        let distinct = (0..4).all(|k| vertices[k] != vertices[(k + 1) % 4]);
        if !distinct || steps != n {
            return Err(Error::domain("vertices must be distinct and in cyclic order"));
        }
        let q = Self { boundary, vertices };
        q.validate_geometry()?;
        Ok(q)
    }

    /// Rectangle R(0, a, a+ib, ib) with horizontal a-sides.
    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![[0.0, 0.0], [a, 0.0], [a, b], [0.0, b]], [0, 1, 2, 3])
    }

    fn validate_geometry(&self) -> Result<()> {
        let n = self.boundary.len();
        let p = &self.boundary;
        let (lo, hi) = self.bbox();
        let diag = (hi[0] - lo[0]).hypot(hi[1] - lo[1]);
        for i in 0..n {
            let (a, b) = (p[i], p[(i + 1) % n]);
            if (a[0] - b[0]).hypot(a[1] - b[1]) <= 1e-14 * diag {
                return Err(Error::domain(format!("repeated boundary point at index {i}")));
            }
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if segments_intersect(a, b, p[j], p[(j + 1) % n]) {
                    return Err(Error::domain(format!("boundary edges {i} and {j} intersect")));
                }
            }
        }
        if self.area() <= 1e-12 * diag * diag {
            return Err(Error::domain("quadrilateral has no interior"));
        }
        let c: Vec<[f64; 2]> = self.vertices.iter().map(|&v| p[v]).collect();
        for k in 0..4 {
            let (a, b, d) = (c[k], c[(k + 1) % 4], c[(k + 2) % 4]);
            if cross(a, b, d).abs() <= 1e-12 * diag * diag {
                return Err(Error::domain("three vertices are collinear"));
            }
        }
        Ok(())
    }

    pub fn boundary(&self) -> &[[f64; 2]] {
        &self.boundary
    }

    pub fn vertices(&self) -> [usize; 4] {
        self.vertices
    }

    fn bbox(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in &self.boundary {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    /// Euclidean area enclosed by the boundary.
    pub fn area(&self) -> f64 {
        let n = self.boundary.len();
        let s: f64 = (0..n)
            .map(|i| {
                let (a, b) = (self.boundary[i], self.boundary[(i + 1) % n]);
                a[0] * b[1] - a[1] * b[0]
            })
            .sum();
        0.5 * s.abs()
    }

    fn side_of_edge(&self, e: usize) -> Side {
        let n = self.boundary.len();
        let v = self.vertices;
        let offset = |k: usize| (e + n - v[k]) % n;
        let len = |k: usize| (v[(k + 1) % 4] + n - v[k]) % n;
        for (k, side) in [Side::A0, Side::B0, Side::A1, Side::B1].into_iter().enumerate() {
            if offset(k) < len(k) {
                return side;
            }
        }
        unreachable!("every edge lies on one side")
    }

    fn side_edges(&self, side: Side) -> Vec<usize> {
        (0..self.boundary.len()).filter(|&e| self.side_of_edge(e) == side).collect()
    }

    fn contains(&self, q: [f64; 2]) -> bool {
        let n = self.boundary.len();
        let mut inside = false;
        for i in 0..n {
            let (a, b) = (self.boundary[i], self.boundary[(i + 1) % n]);
            if (a[1] > q[1]) != (b[1] > q[1]) {
                let x = a[0] + (q[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                if q[0] < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// First boundary crossing of the segment p→q, as (fraction, edge).
    fn first_crossing(&self, p: [f64; 2], q: [f64; 2]) -> Option<(f64, usize)> {
        let n = self.boundary.len();
        let d = [q[0] - p[0], q[1] - p[1]];
        let mut best: Option<(f64, usize)> = None;
        for e in 0..n {
            let (a, b) = (self.boundary[e], self.boundary[(e + 1) % n]);
            let f = [b[0] - a[0], b[1] - a[1]];
            let den = d[0] * f[1] - d[1] * f[0];
            if den.abs() < 1e-300 {
                continue;
            }
            let w = [a[0] - p[0], a[1] - p[1]];
            let t = (w[0] * f[1] - w[1] * f[0]) / den;
            let s = (w[0] * d[1] - w[1] * d[0]) / den;
            if (0.0..=1.0).contains(&t) && (-1e-12..=1.0 + 1e-12).contains(&s) && best.is_none_or(|(bt, _)| t < bt) {
                best = Some((t, e));
            }
        }
        best
    }

    /// Euclidean distance between the two b-sides.
    pub fn b_side_separation(&self) -> f64 {
        let n = self.boundary.len();
        let seg = |e: usize| (self.boundary[e], self.boundary[(e + 1) % n]);
        let mut best = f64::INFINITY;
        for e in self.side_edges(Side::B0) {
            for f in self.side_edges(Side::B1) {
                let (p1, p2) = seg(e);
                let (q1, q2) = seg(f);
                best = best.min(segment_distance(p1, p2, q1, q2));
            }
        }
        best
    }

    /// Check an estimate against the Rengel lower bound with relative slack.
    pub fn rengel_check(&self, modulus: f64, slack: f64) -> RengelCheck {
        let s = self.b_side_separation();
        let area = self.area();
        let lower_bound = s * s / area;
        RengelCheck {
            separation: s,
            area,
            lower_bound,
            holds: modulus >= lower_bound * (1.0 - slack),
        }
    }
}

/// Finite-volume estimate of the modulus: Dirichlet energy of the potential
/// equal to 0 and 1 on the a-sides with insulated b-sides.
pub fn grid_quadrilateral_modulus(q: &Quadrilateral, resolution: usize) -> Result<ModulusValue> {
    if resolution < 16 {
        return Err(Error::domain(format!("grid resolution {resolution} below 16")));
    }
    let (lo, hi) = q.bbox();
    let h = (hi[0] - lo[0]).max(hi[1] - lo[1]) / resolution as f64;
    let nx = (((hi[0] - lo[0]) / h) - 1e-9).ceil().max(1.0) as usize;
    let ny = (((hi[1] - lo[1]) / h) - 1e-9).ceil().max(1.0) as usize;
    let center = |i: usize, j: usize| [lo[0] + (i as f64 + 0.5) * h, lo[1] + (j as f64 + 0.5) * h];

    let mut index = vec![usize::MAX; nx * ny];
    let mut cells = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            if q.contains(center(i, j)) {
                index[j * nx + i] = cells.len();
                cells.push((i, j));
            }
        }
    }
    if cells.is_empty() {
        return Err(Error::Topology("rasterization produced no interior cells".into()));
    }

    const NONE: usize = usize::MAX;
    let m = cells.len();
    let mut neighbors = vec![[NONE; 4]; m];
    let mut diag = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    // Dirichlet links: (cell, conductance, boundary value)
    let mut dirichlet: Vec<(usize, f64, f64)> = Vec::new();
    let offsets: [(isize, isize); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
    for (k, &(i, j)) in cells.iter().enumerate() {
        let c = center(i, j);
        for (slot, &(di, dj)) in offsets.iter().enumerate() {
            let ii = i as isize + di;
            let jj = j as isize + dj;
            let nb = if ii >= 0 && jj >= 0 && (ii as usize) < nx && (jj as usize) < ny {
                index[jj as usize * nx + ii as usize]
            } else {
                NONE
            };
            let target = [c[0] + di as f64 * h, c[1] + dj as f64 * h];
            let crossing = q.first_crossing(c, target);
            if nb != NONE && crossing.is_none() {
                neighbors[k][slot] = nb;
                diag[k] += 1.0;
                continue;
            }
            let Some((t, edge)) = crossing else {
                continue;
            };
            let value = match q.side_of_edge(edge) {
                Side::A0 => 0.0,
                Side::A1 => 1.0,
                Side::B0 | Side::B1 => continue,
            };
            let g = 1.0 / t.max(0.01);
            diag[k] += g;
            rhs[k] += g * value;
            dirichlet.push((k, g, value));
        }
    }
    let touches = |v: f64| dirichlet.iter().any(|&(_, _, b)| b == v);
    if !touches(0.0) || !touches(1.0) {
        return Err(Error::Topology("an a-side is not resolved by the grid".into()));
    }
    connectivity_check(&neighbors)?;
    if diag.iter().any(|&d| d == 0.0) {
        return Err(Error::Topology("isolated grid cell".into()));
    }

    let apply = |x: &[f64], y: &mut [f64]| {
        for k in 0..m {
            let mut s = diag[k] * x[k];
            for &nb in &neighbors[k] {
                if nb != NONE {
                    s -= x[nb];
                }
            }
            y[k] = s;
        }
    };
    let u = conjugate_gradient(apply, &diag, &rhs, 1e-11)?;

    let mut energy = 0.0;
    for (k, nbs) in neighbors.iter().enumerate() {
        for &nb in nbs {
            if nb != NONE && nb > k {
                energy += (u[k] - u[nb]).powi(2);
            }
        }
    }
    for &(k, g, b) in &dirichlet {
        energy += g * (u[k] - b).powi(2);
    }
    Ok(ModulusValue {
        value: energy,
        method: ModulusMethod::GridEstimate,
        resolution: Some(resolution),
    })
}

fn connectivity_check(neighbors: &[[usize; 4]]) -> Result<()> {
    let m = neighbors.len();
    let mut seen = vec![false; m];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(k) = queue.pop_front() {
        for &nb in &neighbors[k] {
            if nb != usize::MAX && !seen[nb] {
                seen[nb] = true;
                count += 1;
                queue.push_back(nb);
            }
        }
    }
    if count != m {
        return Err(Error::Topology(format!(
            "rasterized domain is disconnected ({count} of {m} cells reachable)"
        )));
    }
    Ok(())
}

/// Jacobi-preconditioned conjugate gradient for a symmetric positive-definite operator.
fn conjugate_gradient(apply: impl Fn(&[f64], &mut [f64]), diag: &[f64], b: &[f64], tol: f64) -> Result<Vec<f64>> {
    let m = b.len();
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let mut x = vec![0.0; m];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; m];
    let mut rz = dot(&r, &z);
    let bnorm = dot(b, b).sqrt();
    if bnorm == 0.0 {
        return Ok(x);
    }
    for _ in 0..(20 * m).max(1000) {
        apply(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for k in 0..m {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        if dot(&r, &r).sqrt() <= tol * bnorm {
            return Ok(x);
        }
        for k in 0..m {
            z[k] = r[k] / diag[k];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for k in 0..m {
            p[k] = z[k] + beta * p[k];
        }
    }
    Err(Error::degenerate("conjugate gradient did not converge"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l_shape() -> Quadrilateral {
        Quadrilateral::new(
            vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]],
            [0, 1, 4, 5],
        )
        .unwrap()
    }

    #[test]
    fn unit_square() {
        let v = grid_quadrilateral_modulus(&Quadrilateral::rectangle(1.0, 1.0).unwrap(), 64).unwrap();
        assert!((v.value - 1.0).abs() < 0.02 * 1.0, "{}", v.value);
    }

    #[test]
    fn rectangles_are_exact_when_aligned() {
        let v = grid_quadrilateral_modulus(&Quadrilateral::rectangle(2.0, 1.0).unwrap(), 64).unwrap();
        assert!((v.value - 2.0).abs() < 1e-8, "{}", v.value);
        let w = grid_quadrilateral_modulus(&Quadrilateral::rectangle(1.0, 3.0).unwrap(), 48).unwrap();
        assert!((w.value - 1.0 / 3.0).abs() < 1e-8, "{}", w.value);
    }

    #[test]
    fn l_shape_refinement() {
        let q = l_shape();
        let a = grid_quadrilateral_modulus(&q, 64).unwrap().value;
        let b = grid_quadrilateral_modulus(&q, 128).unwrap().value;
        assert!(((a - b) / b).abs() < 0.01, "{a} vs {b}");
        assert!(q.rengel_check(b, 0.02).holds);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(Quadrilateral::new(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]], [0, 1, 2, 3]).is_err());
        // bow-tie
        assert!(Quadrilateral::new(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]], [0, 1, 2, 3]).is_err());
        assert!(Quadrilateral::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]], [0, 2, 1, 3]).is_err());
        let q = Quadrilateral::rectangle(1.0, 1.0).unwrap();
        assert!(grid_quadrilateral_modulus(&q, 8).is_err());
    }

    #[test]
    fn thin_neck_is_a_topology_error() {
        // two squares joined by a channel narrower than a grid cell
        let w = 1e-4;
        let q = Quadrilateral::new(
            vec![
                [0.0, 0.0],
                [3.0, 0.0],
                [3.0, 1.0],
                [2.0, 1.0],
                [2.0, 0.5 + w],
                [1.0, 0.5 + w],
                [1.0, 1.0],
                [0.0, 1.0],
            ],
            [0, 1, 2, 7],
        );
        let q = q.unwrap();
        assert!(grid_quadrilateral_modulus(&q, 32).is_ok());
        let slit = Quadrilateral::new(
            vec![
                [0.0, 0.0],
                [1.0, 0.0],
                [1.0, 0.5 - w],
                [2.0, 0.5 - w],
                [2.0, 0.0],
                [3.0, 0.0],
                [3.0, 1.0],
                [2.0, 1.0],
                [2.0, 0.5 + w],
                [1.0, 0.5 + w],
                [1.0, 1.0],
                [0.0, 1.0],
            ],
            [0, 5, 6, 11],
        )
        .unwrap();
        assert!(matches!(grid_quadrilateral_modulus(&slit, 32), Err(Error::Topology(_))));
    }
}
