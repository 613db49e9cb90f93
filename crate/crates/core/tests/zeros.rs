use std::f64::consts::PI;

use polya_core::phase::a_k;
use polya_core::special::EvalPolicy;
use polya_core::zeros::{zeros_up_to, ZeroCache, ZeroError, ZeroKind, ZeroTable};
use proptest::prelude::*;

// first, second and fifth zeros of J_ν and J'_ν
const DIRICHLET: &[(f64, [f64; 3])] = &[
    (
        0.0,
        [
            2.4048255576957727686,
            5.5200781102863106496,
            14.930917708487785948,
        ],
    ),
    (
        0.5,
        [
            std::f64::consts::PI,
            std::f64::consts::TAU,
            15.707963267948966192,
        ],
    ),
    (
        1.0,
        [
            3.8317059702075123156,
            7.0155866698156187535,
            16.470630050877632813,
        ],
    ),
    (
        2.5,
        [
            5.7634591968945497914,
            9.0950113304763551563,
            18.689036355362822202,
        ],
    ),
    (
        5.0,
        [
            8.7714838159599540191,
            12.338604197466943986,
            22.217799896561267869,
        ],
    ),
    (
        10.3,
        [
            14.810479037536046653,
            18.789179032918409491,
            29.276078428511655812,
        ],
    ),
    (
        40.0,
        [
            46.648409498285736446,
            52.016146779428545626,
            65.012199064788959943,
        ],
    ),
];

const NEUMANN: &[(f64, [f64; 3])] = &[
    (0.0, [0.0, 3.8317059702075123156, 13.323691936314223032]),
    (
        0.5,
        [
            1.1655611852072113068,
            4.6042167772005765146,
            14.101725133565873243,
        ],
    ),
    (
        1.0,
        [
            1.8411837813406593026,
            5.3314427735250326369,
            14.863588633909033105,
        ],
    ),
    (
        2.5,
        [
            3.6327973198317624914,
            7.3670089715669169242,
            17.072848832681671327,
        ],
    ),
    (
        5.0,
        [
            6.4156163757002402828,
            10.51986087377230805,
            20.57551452138688802,
        ],
    ),
    (
        10.3,
        [
            12.087934432490144611,
            16.794435128255230867,
            27.566864327221902877,
        ],
    ),
    (
        40.0,
        [
            42.785372260392988936,
            49.385857118352190119,
            62.978349482367201577,
        ],
    ),
];

fn check_table(kind: ZeroKind, rows: &[(f64, [f64; 3])]) {
    let p = EvalPolicy::default();
    for &(nu, want) in rows {
        let t = zeros_up_to(nu, kind, 70.0, &p).unwrap();
        for (i, &k) in [0usize, 1, 4].iter().enumerate() {
            let z = t.zeros()[k];
            assert!(
                (z - want[i]).abs() <= 1e-13 * want[i].max(1.0),
                "{kind:?} nu={nu} k={}: {z} vs {}",
                k + 1,
                want[i]
            );
        }
    }
}

#[test]
fn dirichlet_zeros_match_reference() {
    check_table(ZeroKind::Dirichlet, DIRICHLET);
}

#[test]
fn neumann_zeros_match_reference() {
    check_table(ZeroKind::Neumann, NEUMANN);
}

#[test]
fn counts_at_and_between_zeros() {
    let cache = ZeroCache::default();
    assert_eq!(
        cache
            .count_zeros_leq(0.0, ZeroKind::Dirichlet, 2.4)
            .unwrap()
            .count,
        0
    );
    assert_eq!(
        cache
            .count_zeros_leq(0.0, ZeroKind::Dirichlet, 2.41)
            .unwrap()
            .count,
        1
    );
    assert_eq!(
        cache
            .count_zeros_leq(0.0, ZeroKind::Neumann, 0.0)
            .unwrap()
            .count,
        1
    );
    assert_eq!(
        cache
            .count_zeros_leq(1.0, ZeroKind::Neumann, 1.8)
            .unwrap()
            .count,
        0
    );
    // exactly at a zero is ambiguous
    let j01 = 2.4048255576957727686;
    assert!(matches!(
        cache.count_zeros_leq(0.0, ZeroKind::Dirichlet, j01),
        Err(ZeroError::AmbiguousTie { .. })
    ));
}

#[test]
fn cache_round_trips_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let p = EvalPolicy::default();
    let first = ZeroCache::with_dir(p, dir.path()).unwrap();
    let t1 = first.table(3.5, ZeroKind::Neumann, 50.0).unwrap();
    let path = first.cache_file(3.5, ZeroKind::Neumann).unwrap();
    assert!(path.exists());
    let second = ZeroCache::with_dir(p, dir.path()).unwrap();
    let t2 = second.table(3.5, ZeroKind::Neumann, 50.0).unwrap();
    assert_eq!(t1.zeros(), t2.zeros());
    let read = ZeroTable::read_from(&path).unwrap();
    assert_eq!(read.zeros(), t1.zeros());
    // extending past the stored range recomputes and agrees with a fresh table
    let longer = second.table(3.5, ZeroKind::Neumann, 90.0).unwrap();
    let fresh = zeros_up_to(3.5, ZeroKind::Neumann, 90.0, &p).unwrap();
    assert_eq!(longer.len(), fresh.len());
    for (a, b) in longer.zeros().iter().zip(fresh.zeros()) {
        assert!((a - b).abs() <= 1e-13 * b);
    }
}

#[test]
fn corrupt_cache_file_is_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ZeroCache::with_dir(EvalPolicy::default(), dir.path()).unwrap();
    let path = cache.cache_file(2.0, ZeroKind::Dirichlet).unwrap();
    std::fs::write(&path, "garbage\n").unwrap();
    assert!(matches!(
        ZeroTable::read_from(&path),
        Err(ZeroError::Cache { .. })
    ));
    // an unreadable file is a cache miss
    let t = cache.table(2.0, ZeroKind::Dirichlet, 20.0).unwrap();
    assert!((t.zeros()[0] - 5.1356223018406825563).abs() < 1e-13);
    assert_eq!(ZeroTable::read_from(&path).unwrap().zeros(), t.zeros());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dirichlet_zeros_exceed_phase_points(nu in 0.0f64..60.0) {
        let t = zeros_up_to(nu, ZeroKind::Dirichlet, nu + 60.0, &EvalPolicy::default()).unwrap();
        for (k, &z) in t.zeros().iter().enumerate() {
            prop_assert!(z > a_k(nu, k as u64 + 1).unwrap(), "nu={} k={}", nu, k + 1);
        }
    }

    #[test]
    fn zeros_interlace_and_are_spaced(nu in 0.0f64..40.0) {
        let p = EvalPolicy::default();
        let d = zeros_up_to(nu, ZeroKind::Dirichlet, nu + 50.0, &p).unwrap();
        let n = zeros_up_to(nu, ZeroKind::Neumann, nu + 50.0, &p).unwrap();
        // j'_{ν,k} < j_{ν,k} and consecutive zeros are more than π apart only loosely; check > 2 and increasing
        for w in d.zeros().windows(2) {
            prop_assert!(w[1] - w[0] > 2.5);
        }
        let skip = usize::from(nu == 0.0);
        for (k, &z) in d.zeros().iter().enumerate() {
            if let Some(&zp) = n.zeros().get(k + skip) {
                prop_assert!(zp < z, "nu={} k={}", nu, k + 1);
            }
        }
        prop_assert!(d.zeros()[0] > nu);
    }

    #[test]
    fn zeros_increase_with_order(nu in 0.0f64..30.0, dnu in 0.05f64..3.0) {
        let p = EvalPolicy::default();
        let lo = zeros_up_to(nu, ZeroKind::Dirichlet, nu + 40.0, &p).unwrap();
        let hi = zeros_up_to(nu + dnu, ZeroKind::Dirichlet, nu + 40.0, &p).unwrap();
        for (a, b) in lo.zeros().iter().zip(hi.zeros()) {
            prop_assert!(b > a);
        }
    }
}

#[test]
fn bessel_zero_lower_bound_for_order_zero() {
    let t = zeros_up_to(0.0, ZeroKind::Dirichlet, 300.0, &EvalPolicy::default()).unwrap();
    for (k, &z) in t.zeros().iter().enumerate() {
        assert!(z >= PI * (k as f64 + 1.0) - PI / 4.0);
    }
}
