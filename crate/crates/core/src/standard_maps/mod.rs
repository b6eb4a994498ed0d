//! Standard quasiconformal maps: annuli σ_a(ϑ), hexagon cores σ°, pairs of
//! pants σ(Θ), and numerical distortion measurement.

mod annulus;
mod core_map;
mod distortion;
mod pants_map;
mod profile;

pub use annulus::{chart_to_halfplane, halfplane_to_chart, AnnulusMap};
pub use core_map::CoreMap;
pub use distortion::{measure_distortion, point_distortion, DistortionReport, PointDistortion, JACOBIAN_STEP};
pub use pants_map::{pants_map, pants_map_with, PantsDistortion, PantsImage, PantsMap, SINGULAR_TUBE};
pub use profile::TwistProfile;

#[cfg(test)]
mod props {
    use super::*;
    use crate::collar::{collar_chart, hexagon_from_sides, PantsPoint, Sheet};
    use crate::hyp::{distance, geodesic_point};
    use proptest::prelude::*;

    fn annulus() -> impl Strategy<Value = AnnulusMap> {
        (0.2..4.0f64, 0.2..4.0f64, -1.0..1.0f64, 0.2..1.0f64).prop_map(|(l, lt, theta, t)| {
            AnnulusMap::new(collar_chart(l, t).unwrap(), collar_chart(lt, t).unwrap(), theta, TwistProfile::default()).unwrap()
        })
    }

    fn side() -> impl Strategy<Value = f64> {
        prop_oneof![1 => Just(0.0), 4 => 0.1..3.0f64]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn dilatation_at_least_one_and_bridged_by_eps(m in annulus()) {
            let rep = m.distortion(8).unwrap();
            for s in &rep.samples {
                prop_assert!(s.k >= 1.0);
                if s.eps < 0.1 {
                    prop_assert!(s.k - 1.0 <= 2.0 * s.eps + 10.0 * s.eps * s.eps, "K = {}, eps = {}", s.k, s.eps);
                }
            }
        }

        #[test]
        fn pants_identity(
            h in (side(), side(), side()).prop_filter("not all ideal", |h| h.0 + h.1 + h.2 > 0.0),
            rays in proptest::collection::vec((0usize..6, 0.02..0.98f64, 0.0..1.6f64), 24),
        ) {
            let hex = hexagon_from_sides(h.0, h.1, h.2).unwrap();
            let m = pants_map(&hex, &hex, [0.0; 3]).unwrap();
            let r = m.source_regions();
            for (k, f, s) in rays {
                let p = geodesic_point(r.baricenter(), r.core_boundary()[k].point_at_fraction(f), s);
                if !hex.contains(p, 0.0) {
                    continue;
                }
                for sheet in [Sheet::Front, Sheet::Back] {
                    match m.eval(PantsPoint { sheet, point: p }).unwrap() {
                        PantsImage::Point(q) => {
                            prop_assert!(distance(q.point, p) < 1e-9, "moved by {}", distance(q.point, p));
                            prop_assert!(q.sheet == sheet || m.target().on_seam(p, 1e-9));
                        }
                        PantsImage::Cusp(_) => prop_assert!(false, "interior point sent to a cusp"),
                    }
                }
            }
        }
    }
}
