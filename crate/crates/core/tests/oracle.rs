mod common;

use common::{brute_force_rays, sorted_rows};
use hemicone::analysis::ConeData;
use hemicone::cone::{build_cone_h, build_cone_p, Family};
use hemicone::dd::DdOptions;

/// (n, m) with C(n, m+1) <= 6 and n >= m+2.
const SMALL: &[(usize, usize)] = &[(3, 1), (4, 1), (4, 2), (5, 3), (6, 4)];

#[test]
fn dd_rays_match_subset_enumeration() {
    for &(n, m) in SMALL {
        for family in [Family::Hm, Family::Nhm] {
            let h = build_cone_h::<i64>(family, n, m).unwrap();
            let c = ConeData::<i64>::compute(family, n, m, &DdOptions::default()).unwrap();
            let want = brute_force_rays(&h.normals(), h.dim());
            assert_eq!(sorted_rows(&c.v().rays), want, "{}", c.name());
        }
    }
}

#[test]
fn dd_facets_match_subset_enumeration() {
    for &(n, m) in SMALL {
        let v = build_cone_p::<i64>(n, m).unwrap();
        let c = ConeData::<i64>::compute(Family::P, n, m, &DdOptions::default()).unwrap();
        let want = brute_force_rays(&v.ray_coords(), v.dim());
        let got = sorted_rows(c.h().inequalities.iter().map(|i| &i.normal));
        assert_eq!(got, want, "{}", c.name());
    }
}

#[test]
fn oracle_sees_the_octahedron() {
    let h = build_cone_h::<i64>(Family::Nhm, 4, 2).unwrap();
    assert_eq!(brute_force_rays(&h.normals(), 4).len(), 6);
}
