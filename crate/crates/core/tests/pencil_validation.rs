use infcones::catalog::{conic, cusp, cusp_base, cusp_base_points, flex_cubic, line};
use infcones::configuration::{Configuration, PointRecord};
use infcones::pencil::{attach_chains, pencil_report, PencilConfiguration};
use infcones::random::{random_pencils, RandomOptions};
use infcones::Error;
use proptest::prelude::*;

#[test]
fn cusp_is_valid() {
    let pc = PencilConfiguration::validate(cusp()).unwrap();
    assert_eq!((pc.degree(), pc.k(), pc.s0(), pc.s()), (3, 2, 6, 9));
    assert_eq!(pc.chain_lengths(), &[2, 1]);
    assert_eq!(pc.psi(1, 2).unwrap(), 8);
    assert_eq!(pc.psi_inverse(9).unwrap(), (2, 1));
    assert_eq!(pc.label(7), "E_{1,1}");
    assert_eq!(pc.config().point(7).id, "p1_1");
}

#[test]
fn catalog_bases() {
    for c in [cusp_base(), conic(), flex_cubic()] {
        assert!(PencilConfiguration::validate(c).is_ok());
    }
    let report = pencil_report(&line());
    assert!(!report.passed());
    assert!(report.failures().iter().any(|f| f.contains("1")));
}

#[test]
fn removing_the_satellite_proximity_breaks_the_pencil() {
    let mut points = cusp_base_points();
    points[2].proximate_to = vec![2];
    let c = Configuration::new(points, &[6]).unwrap();
    let report = pencil_report(&c);
    let check = report.checks.iter().find(|c| c.name == "pencil-self-intersection").unwrap();
    assert!(!check.passed);
    assert!(check.failures[0].contains("-2"), "{:?}", check.failures);
    assert!(matches!(PencilConfiguration::validate(c), Err(Error::InvalidConfiguration(_))));
}

#[test]
fn chains_must_be_free_on_the_last_base_divisor() {
    let base = cusp_base();
    let mut points = attach_chains(&base, &[1]).unwrap().points().to_vec();
    points[6].proximate_to = vec![5];
    let c = Configuration::new(points, &[6, 1]).unwrap();
    let report = pencil_report(&c);
    assert!(report.checks.iter().any(|ch| ch.name == "chains" && !ch.passed));

    let mut points = base.points().to_vec();
    points.push(PointRecord::new("p1_1", 7, &[6], true));
    assert!(Configuration::new(points, &[6, 1]).is_err());
}

#[test]
fn base_must_reach_the_pencil() {
    let short = Configuration::new(cusp_base_points()[..5].to_vec(), &[5]).unwrap();
    assert!(PencilConfiguration::validate(short).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coordinates_round_trip(seed in any::<u64>()) {
        for pc in random_pencils(seed, 1, &RandomOptions::default()) {
            for u in 1..=pc.s() {
                let (j, l) = pc.psi_inverse(u).unwrap();
                prop_assert_eq!(pc.psi(j, l).unwrap(), u);
            }
        }
    }

    #[test]
    fn chain_points_keep_the_base_multiplicities(seed in any::<u64>()) {
        for pc in random_pencils(seed, 1, &RandomOptions::default()) {
            let c = pc.config();
            let n = pc.s0();
            let base_row = c.multiplicity_row(n).unwrap()[..n].to_vec();
            for u in n + 1..=pc.s() {
                prop_assert_eq!(&c.multiplicity_row(u).unwrap()[..n], &base_row[..]);
                prop_assert_eq!(c.line_pairing(u).unwrap(), pc.degree());
            }
            prop_assert_eq!(pc.base_pencil().config().clone(), c.base());
        }
    }
}
