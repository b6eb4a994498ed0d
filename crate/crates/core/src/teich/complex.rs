use crate::error::{Error, Result};

/// Boundary slot `index` ∈ {0, 1, 2} of pants `pants`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub pants: usize,
    pub index: usize,
}

impl Slot {
    pub fn new(pants: usize, index: usize) -> Self {
        Self { pants, index }
    }
}

/// An internal curve: slot `a` glued to slot `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gluing {
    pub a: Slot,
    pub b: Slot,
}

/// Combinatorial pants decomposition: pants with three slots each, some slots glued in pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PantsComplex {
    n_pants: usize,
    gluings: Vec<Gluing>,
    free: Vec<Slot>,
    /// per pants and slot: `Some(curve)` for glued slots
    curve_of: Vec<[Option<usize>; 3]>,
}

impl PantsComplex {
    pub fn new(n_pants: usize, gluings: Vec<Gluing>) -> Result<Self> {
        if n_pants == 0 {
            return Err(Error::Structure("a pants complex needs at least one pants".into()));
        }
        let mut curve_of = vec![[None; 3]; n_pants];
        for (c, g) in gluings.iter().enumerate() {
            for s in [g.a, g.b] {
                if s.pants >= n_pants || s.index >= 3 {
                    return Err(Error::Structure(format!("curve {}: slot {s:?} does not exist", c + 1)));
                }
                if curve_of[s.pants][s.index].is_some() {
                    return Err(Error::Structure(format!("curve {}: slot {s:?} is glued twice", c + 1)));
                }
                curve_of[s.pants][s.index] = Some(c);
            }
        }
        let mut parent: Vec<usize> = (0..n_pants).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for g in &gluings {
            let (x, y) = (find(&mut parent, g.a.pants), find(&mut parent, g.b.pants));
            parent[x] = y;
        }
        let root = find(&mut parent, 0);
        if (0..n_pants).any(|p| find(&mut parent, p) != root) {
            return Err(Error::Structure("the pants complex is not connected".into()));
        }
        let free = (0..n_pants)
            .flat_map(|p| (0..3).map(move |i| Slot::new(p, i)))
            .filter(|s| curve_of[s.pants][s.index].is_none())
            .collect();
        Ok(Self { n_pants, gluings, free, curve_of })
    }

    /// One pants with slots 1 and 2 glued: a one-holed torus with free slot 0.
    pub fn one_holed_torus() -> Self {
        Self::new(1, vec![Gluing { a: Slot::new(0, 1), b: Slot::new(0, 2) }]).expect("valid complex")
    }

    /// Two pants glued along slot 0: a four-holed sphere.
    pub fn four_holed_sphere() -> Self {
        Self::new(2, vec![Gluing { a: Slot::new(0, 0), b: Slot::new(1, 0) }]).expect("valid complex")
    }

    /// Two pants glued slot to slot along all three boundaries: a closed genus-2 surface.
    pub fn genus_two() -> Self {
        let g = (0..3).map(|i| Gluing { a: Slot::new(0, i), b: Slot::new(1, i) }).collect();
        Self::new(2, g).expect("valid complex")
    }

    pub fn n_pants(&self) -> usize {
        self.n_pants
    }

    pub fn n_curves(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    /// Unglued slots in pants-major order.
    pub fn free_slots(&self) -> &[Slot] {
        &self.free
    }

    pub fn curve_at(&self, s: Slot) -> Option<usize> {
        self.curve_of[s.pants][s.index]
    }

    pub fn free_index(&self, s: Slot) -> Option<usize> {
        self.free.iter().position(|f| *f == s)
    }

    pub fn euler_characteristic(&self) -> i64 {
        -(self.n_pants as i64)
    }
}

/// Fenchel–Nielsen coordinates: per internal curve a length ℓ ≥ 0 and a twist τ
/// (length units, right twists positive), per free slot a boundary length (0 for a cusp).
#[derive(Debug, Clone, PartialEq)]
pub struct FNPoint {
    pub lengths: Vec<f64>,
    pub twists: Vec<f64>,
    pub free: Vec<f64>,
}

impl FNPoint {
    pub fn new(lengths: Vec<f64>, twists: Vec<f64>, free: Vec<f64>) -> Self {
        Self { lengths, twists, free }
    }

    pub fn validate(&self, c: &PantsComplex) -> Result<()> {
        if self.lengths.len() != c.n_curves() || self.twists.len() != c.n_curves() {
            return Err(Error::Structure(format!(
                "expected {} curve lengths and twists, got {} and {}",
                c.n_curves(),
                self.lengths.len(),
                self.twists.len()
            )));
        }
        if self.free.len() != c.free_slots().len() {
            return Err(Error::Structure(format!(
                "expected {} free-slot lengths, got {}",
                c.free_slots().len(),
                self.free.len()
            )));
        }
        for (k, v) in self.lengths.iter().chain(&self.free).enumerate() {
            if !(*v >= 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("length #{} = {v} must be finite and nonnegative", k + 1)));
            }
        }
        if let Some(t) = self.twists.iter().find(|t| !t.is_finite()) {
            return Err(Error::domain(format!("twist {t} is not finite")));
        }
        Ok(())
    }

    /// Whether the twist of curve i carries no information (ℓ_i = 0).
    pub fn twist_inert(&self, i: usize) -> bool {
        self.lengths[i] == 0.0
    }

    /// Length of the boundary curve in slot `s`.
    pub fn slot_length(&self, c: &PantsComplex, s: Slot) -> f64 {
        match c.curve_at(s) {
            Some(i) => self.lengths[i],
            None => self.free[c.free_index(s).expect("free slot")],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_complexes() {
        let t = PantsComplex::one_holed_torus();
        assert_eq!(t.free_slots(), &[Slot::new(0, 0)]);
        assert_eq!(t.curve_at(Slot::new(0, 2)), Some(0));
        let s = PantsComplex::four_holed_sphere();
        assert_eq!(s.free_slots().len(), 4);
        let g = PantsComplex::genus_two();
        assert!(g.free_slots().is_empty());
        assert_eq!(g.euler_characteristic(), -2);
    }

    #[test]
    fn invalid_complexes() {
        let twice = vec![
            Gluing { a: Slot::new(0, 0), b: Slot::new(0, 1) },
            Gluing { a: Slot::new(0, 1), b: Slot::new(0, 2) },
        ];
        assert!(matches!(PantsComplex::new(1, twice), Err(Error::Structure(_))));
        assert!(PantsComplex::new(2, vec![]).is_err());
        assert!(PantsComplex::new(1, vec![Gluing { a: Slot::new(0, 0), b: Slot::new(0, 3) }]).is_err());
        // a slot glued to itself
        assert!(PantsComplex::new(1, vec![Gluing { a: Slot::new(0, 0), b: Slot::new(0, 0) }]).is_err());
    }

    #[test]
    fn fn_point_validation() {
        let c = PantsComplex::one_holed_torus();
        assert!(FNPoint::new(vec![2.0], vec![0.0], vec![1.0]).validate(&c).is_ok());
        assert!(FNPoint::new(vec![-2.0], vec![0.0], vec![1.0]).validate(&c).is_err());
        assert!(FNPoint::new(vec![2.0], vec![0.0], vec![]).validate(&c).is_err());
        let p = FNPoint::new(vec![0.0], vec![3.0], vec![1.0]);
        assert!(p.twist_inert(0));
        assert_eq!(p.slot_length(&c, Slot::new(0, 0)), 1.0);
    }
}
