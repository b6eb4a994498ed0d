use crate::error::{Error, Result};

const NODES: usize = 2048;
const GL_X: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL_W: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

/// Bump φ supported in (0, 1/2) with unit integral, and its cumulative Φ,
/// tabulated on a uniform grid and read back by cubic Hermite interpolation.
#[derive(Debug, Clone)]
pub struct TwistProfile {
    density: Vec<f64>,
    cumulative: Vec<f64>,
}

fn mollifier(s: f64) -> f64 {
    if s <= 0.0 || s >= 0.5 {
        0.0
    } else {
        (-1.0 / (s * (0.5 - s))).exp()
    }
}

impl Default for TwistProfile {
    fn default() -> Self {
        Self::from_bump(mollifier, true).expect("mollifier is a valid bump")
    }
}

impl TwistProfile {
    /// The normalized C^∞ mollifier exp(−1/(s(1/2−s))).
    pub fn mollifier() -> Self {
        Self::default()
    }

    /// Tabulate a user bump. With `normalize` false the bump must already have
    /// unit integral (to 1e−6).
    pub fn from_bump(bump: impl Fn(f64) -> f64, normalize: bool) -> Result<Self> {
        let h = 0.5 / NODES as f64;
        let mut density = Vec::with_capacity(NODES + 1);
        let mut cumulative = Vec::with_capacity(NODES + 1);
        let mut acc = 0.0;
        for k in 0..=NODES {
            let s = k as f64 * h;
            let v = bump(s);
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("bump value {v} at {s} is not a nonnegative number")));
            }
            density.push(v);
            cumulative.push(acc);
            if k < NODES {
                let mid = s + h / 2.0;
                acc += GL_X.iter().zip(GL_W).map(|(x, w)| w * bump(mid + x * h / 2.0)).sum::<f64>() * h / 2.0;
            }
        }
        if density[0] != 0.0 || density[NODES] != 0.0 {
            return Err(Error::domain("bump must vanish at 0 and 1/2"));
        }
        if !(acc > 0.0) {
            return Err(Error::domain("bump has zero integral"));
        }
        if !normalize && (acc - 1.0).abs() > 1e-6 {
            return Err(Error::domain(format!("bump integral {acc} is not 1")));
        }
        density.iter_mut().for_each(|v| *v /= acc);
        cumulative.iter_mut().for_each(|v| *v /= acc);
        Ok(Self { density, cumulative })
    }

    /// φ(s).
    pub fn density(&self, s: f64) -> f64 {
        if s <= 0.0 || s >= 0.5 {
            return 0.0;
        }
        let h = 0.5 / NODES as f64;
        let k = ((s / h) as usize).min(NODES - 1);
        let w = s / h - k as f64;
        self.density[k] * (1.0 - w) + self.density[k + 1] * w
    }

    /// Φ(s) = ∫₀^s φ; 0 for s ≤ 0 and 1 for s ≥ 1/2.
    pub fn cumulative(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if s >= 0.5 {
            return 1.0;
        }
        let h = 0.5 / NODES as f64;
        let k = ((s / h) as usize).min(NODES - 1);
        let w = s / h - k as f64;
        let (p0, p1) = (self.cumulative[k], self.cumulative[k + 1]);
        let (m0, m1) = (self.density[k] * h, self.density[k + 1] * h);
        let w2 = w * w;
        let w3 = w2 * w;
        (2.0 * w3 - 3.0 * w2 + 1.0) * p0 + (w3 - 2.0 * w2 + w) * m0 + (-2.0 * w3 + 3.0 * w2) * p1 + (w3 - w2) * m1
    }
}
