use std::f64::consts::PI;

use polya_core::spectra::{
    bound_sum_dirichlet, bound_sum_neumann, channels, count, kappa, polya_verdict, regime,
    verify_polya, weyl_term, Bc, DomainSpec, Regime, Shape, SpectraError, Verdict,
};
use polya_core::zeros::ZeroCache;

// counts from an independent enumeration of Bessel zeros
#[test]
fn counts_match_enumeration() {
    let cache = ZeroCache::default();
    let disk_d = DomainSpec::disk(Bc::Dirichlet);
    let disk_n = DomainSpec::disk(Bc::Neumann);
    let ball3 = DomainSpec::ball(3, Bc::Dirichlet).unwrap();
    let q_d = DomainSpec::sector(PI / 2.0, Bc::Dirichlet).unwrap();
    let q_n = DomainSpec::sector(PI / 2.0, Bc::Neumann).unwrap();
    let one_d = DomainSpec::sector(1.0, Bc::Dirichlet).unwrap();
    let one_n = DomainSpec::sector(1.0, Bc::Neumann).unwrap();
    let table: [(f64, [u64; 7]); 3] = [
        (50.0, [10, 17, 17, 1, 6, 1, 4]),
        (100.0, [21, 31, 46, 4, 10, 2, 6]),
        (400.0, [92, 111, 456, 19, 31, 11, 22]),
    ];
    for (lambda, want) in table {
        let specs = [disk_d, disk_n, ball3, q_d, q_n, one_d, one_n];
        for (spec, w) in specs.iter().zip(want) {
            let r = count(spec, &cache, lambda).unwrap();
            assert_eq!(
                r.exact_count,
                w,
                "{} {} at {lambda}",
                spec.shape(),
                spec.bc()
            );
            assert!(r.ties.is_empty());
        }
    }
}

#[test]
fn weyl_and_margins() {
    let cache = ZeroCache::default();
    let disk = DomainSpec::disk(Bc::Dirichlet);
    assert_eq!(weyl_term(&disk, 100.0).unwrap(), 25.0);
    let r = count(&disk, &cache, 100.0).unwrap();
    assert_eq!(r.margin, 25.0 - 21.0);
    assert_eq!(r.recomputed_margin(), r.margin);
    let half = DomainSpec::sector(PI, Bc::Neumann).unwrap();
    assert!((weyl_term(&half, 100.0).unwrap() - 12.5).abs() < 1e-13);
}

#[test]
fn sandwich_between_exact_count_and_bound_sum() {
    let cache = ZeroCache::default();
    for alpha in [PI, 1.5 * PI, 2.0 * PI] {
        for lambda in [10.0, 123.4, 999.0, 2500.5] {
            let d = DomainSpec::sector(alpha, Bc::Dirichlet).unwrap();
            let n = DomainSpec::sector(alpha, Bc::Neumann).unwrap();
            let cd = count(&d, &cache, lambda).unwrap();
            let cn = count(&n, &cache, lambda).unwrap();
            let bd = bound_sum_dirichlet(&d, lambda).unwrap().value as f64;
            let bn = bound_sum_neumann(&n, lambda).unwrap().value as f64;
            assert!(
                cd.exact_count as f64 <= bd && bd < cd.weyl,
                "alpha={alpha} Lambda={lambda}"
            );
            assert!(
                cn.exact_count as f64 >= bn && bn > cn.weyl,
                "alpha={alpha} Lambda={lambda}"
            );
        }
    }
    for lambda in [10.0, 200.0, 1500.0] {
        let b = DomainSpec::ball(3, Bc::Dirichlet).unwrap();
        let c = count(&b, &cache, lambda).unwrap();
        let s = bound_sum_dirichlet(&b, lambda).unwrap().value as f64;
        assert!(c.exact_count as f64 <= s && s < c.weyl);
    }
}

#[test]
fn full_sector_example() {
    let s = DomainSpec::sector(2.0 * PI, Bc::Dirichlet).unwrap();
    assert_eq!(bound_sum_dirichlet(&s, 16.0).unwrap().value, 2);
    assert!((weyl_term(&s, 16.0).unwrap() - 4.0).abs() < 1e-14);
}

// a sector of angle Nα contains the channels of the sector of angle α with ν scaled by 1/N
#[test]
fn sector_channels_tile() {
    for (alpha, n) in [(PI / 3.0, 3u64), (0.5, 4), (PI / 2.0, 2)] {
        let small = DomainSpec::sector(alpha, Bc::Dirichlet).unwrap();
        let big = DomainSpec::sector(alpha * n as f64, Bc::Dirichlet).unwrap();
        let cs = channels(&small, 900.0).unwrap();
        let cb = channels(&big, 900.0).unwrap();
        for c in &cs {
            let twin = cb.iter().find(|b| b.m == c.m * n).expect("channel present");
            assert!((twin.nu - c.nu).abs() < 1e-12 * c.nu);
        }
    }
}

#[test]
fn multiplicities() {
    assert_eq!(kappa(3, 0), 1);
    assert_eq!(kappa(3, 4), 9);
    assert_eq!(kappa(4, 2), 9);
    assert_eq!(kappa(2, 0), 1);
    assert_eq!(kappa(2, 5), 2);
    let ball = DomainSpec::ball(5, Bc::Dirichlet).unwrap();
    let ch = channels(&ball, 100.0).unwrap();
    assert_eq!(ch[0].nu, 1.5);
    assert_eq!(ch[1].weight, kappa(5, 1));
}

#[test]
fn verdicts_and_regimes() {
    let cache = ZeroCache::default();
    let disk_n = DomainSpec::disk(Bc::Neumann);
    let v = polya_verdict(&disk_n, &cache, 1000.0).unwrap();
    assert_eq!(v.verdict, Verdict::Pass);
    assert_eq!(v.regime, Regime::Proven);
    assert_eq!(regime(&disk_n, 100.0), Regime::OutsideProvenRegime);
    let disk_d = DomainSpec::disk(Bc::Dirichlet);
    assert_eq!(
        polya_verdict(&disk_d, &cache, 0.0).unwrap().verdict,
        Verdict::TieAmbiguous
    );
}

#[test]
fn sweeps_pass_on_small_ranges() {
    let cache = ZeroCache::default();
    for shape in [
        Shape::Ball(2),
        Shape::Sector(1.0),
        Shape::Sector(2.0 * PI),
        Shape::Ball(4),
    ] {
        let s = DomainSpec::new(shape, Bc::Dirichlet).unwrap();
        let r = verify_polya(&s, &cache, 500.0).unwrap();
        assert!(r.all_pass(), "{shape}");
        assert!(r.min_margin() > 0.0);
        assert_eq!(r.rows.len(), r.jump_count + 1);
    }
    let s = DomainSpec::sector(0.3, Bc::Neumann).unwrap();
    let r = verify_polya(&s, &cache, 500.0).unwrap();
    assert!(r.all_pass());
    let zero = verify_polya(&DomainSpec::disk(Bc::Dirichlet), &cache, 0.0).unwrap();
    assert_eq!(zero.rows.len(), 1);
    assert_eq!(zero.rows[0].verdict, Verdict::TieAmbiguous);
}

#[test]
fn neumann_balls_need_the_experimental_switch() {
    assert!(matches!(
        DomainSpec::ball(3, Bc::Neumann),
        Err(SpectraError::Unsupported(_))
    ));
    let exp = DomainSpec::new_unproven(Shape::Ball(3), Bc::Neumann).unwrap();
    assert!(exp.is_unproven());
    assert!(bound_sum_neumann(&exp, 50.0).is_ok());
}
