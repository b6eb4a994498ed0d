use super::complex::{FNPoint, PantsComplex, Slot};
use crate::collar::{double_to_pants, hexagon_from_sides, PantsGeometry};
use crate::error::{Error, Result};
use crate::hyp::MobiusTransform;

/// A hyperbolic surface (possibly nodal) assembled from Fenchel–Nielsen data.
#[derive(Debug, Clone)]
pub struct MarkedSurface {
    complex: PantsComplex,
    point: FNPoint,
    pants: Vec<PantsGeometry>,
    /// per pants: translation around each boundary slot, in that pants' plane
    boundary_hol: Vec<[MobiusTransform; 3]>,
    nodes: Vec<usize>,
}

/// One generator of a holonomy word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Loop `times` around boundary slot `slot` of the current pants.
    Around { slot: usize, times: i32 },
    /// Cross internal curve `curve`: forward from its `a` side into its `b` side, or back.
    Cross { curve: usize, forward: bool },
}

/// A path in the pants complex starting in pants `start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub start: usize,
    pub steps: Vec<Step>,
}

fn sigma_conj(m: &MobiusTransform) -> Result<MobiusTransform> {
    let [a, b, c, d] = m.entries();
    MobiusTransform::new(a, -b, -c, d)
}

/// Orientation-preserving product R_L ∘ R_M of the reflections in two lines.
/// Lines are given by their normalizers.
fn reflection_product(nl: &MobiusTransform, nm: &MobiusTransform) -> Result<MobiusTransform> {
    Ok(nl.inverse() * sigma_conj(&(*nl * nm.inverse()))? * *nm)
}

pub fn build_surface(complex: &PantsComplex, point: &FNPoint) -> Result<MarkedSurface> {
    point.validate(complex)?;
    let mut pants = Vec::with_capacity(complex.n_pants());
    let mut boundary_hol = Vec::with_capacity(complex.n_pants());
    for p in 0..complex.n_pants() {
        let h: [f64; 3] = std::array::from_fn(|i| point.slot_length(complex, Slot::new(p, i)) / 2.0);
        let hex = hexagon_from_sides(h[0], h[1], h[2])?;
        let mut m = [MobiusTransform::identity(); 3];
        for (k, mk) in m.iter_mut().enumerate() {
            *mk = reflection_product(&hex.seam_normalizer_after(k), &hex.seam_normalizer_after((k + 2) % 3))?;
        }
        boundary_hol.push(m);
        pants.push(double_to_pants(&hex));
    }
    let nodes = (0..complex.n_curves()).filter(|&i| point.lengths[i] == 0.0).collect();
    Ok(MarkedSurface {
        complex: complex.clone(),
        point: point.clone(),
        pants,
        boundary_hol,
        nodes,
    })
}

impl MarkedSurface {
    pub fn complex(&self) -> &PantsComplex {
        &self.complex
    }

    pub fn point(&self) -> &FNPoint {
        &self.point
    }

    pub fn pants(&self, p: usize) -> &PantsGeometry {
        &self.pants[p]
    }

    /// Internal curves of length zero.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn is_node(&self, curve: usize) -> bool {
        self.nodes.contains(&curve)
    }

    pub fn slot_length(&self, s: Slot) -> f64 {
        self.point.slot_length(&self.complex, s)
    }

    /// Translation once around boundary slot `slot` of pants `p`, in the plane of p.
    pub fn boundary_holonomy(&self, p: usize, slot: usize) -> MobiusTransform {
        self.boundary_hol[p][slot]
    }

    /// Isometry carrying the plane of the `b` pants of `curve` onto the plane of its `a` pants:
    /// the axes meet reversed, with X_a = τ − X_b along them.
    pub fn gluing_isometry(&self, curve: usize) -> Result<MobiusTransform> {
        if self.is_node(curve) {
            return Err(Error::NodeCrossing(curve + 1));
        }
        let g = self.complex.gluings()[curve];
        let fa = self.pants[g.a.pants].hexagon().frame(g.a.index).expect("finite side").mobius();
        let fb = self.pants[g.b.pants].hexagon().frame(g.b.index).expect("finite side").mobius();
        let tau = self.point.twists[curve];
        Ok(fa * MobiusTransform::axial(tau) * MobiusTransform::rotation_about_i(std::f64::consts::PI) * fb.inverse())
    }

    pub fn holonomy(&self, word: &Word) -> Result<MobiusTransform> {
        let c = &self.complex;
        if word.start >= c.n_pants() {
            return Err(Error::Structure(format!("word starts in missing pants {}", word.start + 1)));
        }
        let mut at = word.start;
        let mut acc = MobiusTransform::identity();
        for step in &word.steps {
            match *step {
                Step::Around { slot, times } => {
                    if slot >= 3 {
                        return Err(Error::Structure(format!("slot {slot} does not exist")));
                    }
                    let (m, n) = if times >= 0 {
                        (self.boundary_hol[at][slot], times)
                    } else {
                        (self.boundary_hol[at][slot].inverse(), -times)
                    };
                    for _ in 0..n {
                        acc = acc * m;
                    }
                }
                Step::Cross { curve, forward } => {
                    let Some(g) = c.gluings().get(curve) else {
                        return Err(Error::Structure(format!("curve {} does not exist", curve + 1)));
                    };
                    let (from, to) = if forward { (g.a.pants, g.b.pants) } else { (g.b.pants, g.a.pants) };
                    if from != at {
                        return Err(Error::Structure(format!(
                            "crossing curve {} from pants {} but the path is in pants {}",
                            curve + 1,
                            from + 1,
                            at + 1
                        )));
                    }
                    let iso = self.gluing_isometry(curve)?;
                    acc = acc * if forward { iso } else { iso.inverse() };
                    at = to;
                }
            }
        }
        if at != word.start {
            return Err(Error::Structure("word does not close up".into()));
        }
        Ok(acc)
    }

    /// Length of internal curve i measured from the trace of its holonomy.
    pub fn measured_length(&self, curve: usize) -> f64 {
        let a = self.complex.gluings()[curve].a;
        self.boundary_hol[a.pants][a.index].translation_length()
    }
}

/// The loop once around curve i, seen from its `a` side.
pub fn curve_word(c: &PantsComplex, curve: usize) -> Word {
    let a = c.gluings()[curve].a;
    Word { start: a.pants, steps: vec![Step::Around { slot: a.index, times: 1 }] }
}

/// A closed curve meeting curve i: once through a self-glued pants, otherwise
/// crossing twice and going around another boundary of each pants.
pub fn transverse_word(c: &PantsComplex, curve: usize) -> Word {
    let g = c.gluings()[curve];
    if g.a.pants == g.b.pants {
        return Word { start: g.a.pants, steps: vec![Step::Cross { curve, forward: true }] };
    }
    let other = |s: Slot| (s.index + 1) % 3;
    Word {
        start: g.a.pants,
        steps: vec![
            Step::Cross { curve, forward: true },
            Step::Around { slot: other(g.b), times: 1 },
            Step::Cross { curve, forward: false },
            Step::Around { slot: other(g.a), times: 1 },
        ],
    }
}

impl Word {
    /// The word with every crossing of `curve` preceded (forward) or followed (back)
    /// by a loop around it: the image under a full twist along `curve`.
    pub fn dehn_twist(&self, c: &PantsComplex, curve: usize) -> Word {
        let a = c.gluings()[curve].a;
        let mut steps = Vec::with_capacity(self.steps.len() + 2);
        for s in &self.steps {
            match *s {
                Step::Cross { curve: k, forward: true } if k == curve => {
                    steps.push(Step::Around { slot: a.index, times: 1 });
                    steps.push(*s);
                }
                Step::Cross { curve: k, forward: false } if k == curve => {
                    steps.push(*s);
                    steps.push(Step::Around { slot: a.index, times: -1 });
                }
                _ => steps.push(*s),
            }
        }
        Word { start: self.start, steps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn torus(l: f64, tau: f64) -> MarkedSurface {
        build_surface(&PantsComplex::one_holed_torus(), &FNPoint::new(vec![l], vec![tau], vec![1.0])).unwrap()
    }

    #[test]
    fn trivial_word_is_identity() {
        let s = torus(2.0, 0.0);
        let m = s.holonomy(&Word { start: 0, steps: vec![] }).unwrap();
        assert!(m.distance_to(&MobiusTransform::identity()) < 1e-15);
    }

    #[test]
    fn one_holed_torus_lengths() {
        let s = torus(2.0, 0.0);
        assert_abs_diff_eq!(s.boundary_holonomy(0, 0).translation_length(), 1.0, epsilon = 1e-9);
        let m = s.holonomy(&curve_word(s.complex(), 0)).unwrap();
        assert_abs_diff_eq!(m.trace().abs(), 2.0 * 1f64.cosh(), epsilon = 1e-9);
    }

    #[test]
    fn boundary_loops_multiply_to_identity() {
        let s = build_surface(&PantsComplex::four_holed_sphere(), &FNPoint::new(vec![1.3], vec![0.4], vec![0.5, 0.0, 2.0, 1.0])).unwrap();
        for p in 0..2 {
            let m = s.boundary_holonomy(p, 2) * s.boundary_holonomy(p, 1) * s.boundary_holonomy(p, 0);
            assert!(m.distance_to(&MobiusTransform::identity()) < 1e-9);
        }
        // a cusp slot is parabolic
        assert_abs_diff_eq!(s.boundary_holonomy(0, 2).trace().abs(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn gluing_reverses_the_boundary_loop() {
        let s = build_surface(&PantsComplex::genus_two(), &FNPoint::new(vec![1.0, 2.0, 0.7], vec![0.3, -1.0, 2.5], vec![])).unwrap();
        for i in 0..3 {
            let g = s.complex().gluings()[i];
            let iso = s.gluing_isometry(i).unwrap();
            let conj = iso * s.boundary_holonomy(g.b.pants, g.b.index) * iso.inverse();
            assert!((conj * s.boundary_holonomy(g.a.pants, g.a.index)).distance_to(&MobiusTransform::identity()) < 1e-9);
        }
    }

    #[test]
    fn twist_periodicity() {
        let (l, tau) = (2.0, 0.3);
        let c = PantsComplex::one_holed_torus();
        let w = transverse_word(&c, 0);
        let a = torus(l, tau).holonomy(&w).unwrap();
        let b = torus(l, tau + l).holonomy(&w).unwrap();
        assert!((a.trace().abs() - b.trace().abs()).abs() > 1e-3);
        let twisted = torus(l, tau).holonomy(&w.dehn_twist(&c, 0)).unwrap();
        assert_abs_diff_eq!(twisted.trace().abs(), b.trace().abs(), epsilon = 1e-8);
        // the boundary does not see the twist
        assert_abs_diff_eq!(
            torus(l, tau).boundary_holonomy(0, 0).trace(),
            torus(l, tau + l).boundary_holonomy(0, 0).trace(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn two_sided_twist_periodicity() {
        let c = PantsComplex::four_holed_sphere();
        let pt = |tau: f64| FNPoint::new(vec![1.5], vec![tau], vec![1.0, 0.5, 0.8, 2.0]);
        let w = transverse_word(&c, 0);
        let s0 = build_surface(&c, &pt(0.2)).unwrap();
        let s1 = build_surface(&c, &pt(1.7)).unwrap();
        let a = s1.holonomy(&w).unwrap().trace().abs();
        let b = s0.holonomy(&w.dehn_twist(&c, 0)).unwrap().trace().abs();
        assert_abs_diff_eq!(a, b, epsilon = 1e-8 * a);
        assert!((a - s0.holonomy(&w).unwrap().trace().abs()).abs() > 1e-3);
    }

    #[test]
    fn node_crossing_is_rejected() {
        let s = torus(0.0, 0.0);
        assert_eq!(s.nodes(), &[0]);
        assert_eq!(s.holonomy(&transverse_word(s.complex(), 0)), Err(Error::NodeCrossing(1)));
        // both sides of the node are cusps
        assert!(s.pants(0).hexagon().is_ideal(1) && s.pants(0).hexagon().is_ideal(2));
    }

    #[test]
    fn open_word_is_rejected() {
        let c = PantsComplex::four_holed_sphere();
        let s = build_surface(&c, &FNPoint::new(vec![1.0], vec![0.0], vec![1.0; 4])).unwrap();
        let w = Word { start: 0, steps: vec![Step::Cross { curve: 0, forward: true }] };
        assert!(matches!(s.holonomy(&w), Err(Error::Structure(_))));
    }
}
