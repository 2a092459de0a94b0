//! End-to-end verification of the interleaving identities on fixtures and
//! seeded covers, including the negative control and the lift-preservation
//! property for chain homotopies.

use nervecheck_core::complex::inclusion_map;
use nervecheck_core::generators;
use nervecheck_core::interleave::{Interleaver, InterleavingConfig};
use nervecheck_core::persistence::goodness;
use nervecheck_core::Scale;

#[test]
fn e1_identity_suite_passes_at_every_grid_scale() {
    let cover = generators::gen_e1();
    let mut il = Interleaver::new(cover, InterleavingConfig::new(1, Scale::new(1.0)));
    let report = il.verify_identities().unwrap();
    assert_eq!(report.scales.len(), 7);
    for scale in &report.scales {
        for check in &scale.checks {
            assert!(
                check.pass,
                "identity {} fails at alpha = {}: {:?}",
                check.name, scale.alpha, check.detail
            );
        }
        assert_eq!(scale.checks.len(), 5);
    }
}

#[test]
fn good_cover_suite_passes_with_zero_shift() {
    for seed in [0, 3, 11] {
        let cover = generators::gen_random(seed, &generators::RandomCoverParams::good());
        assert_eq!(goodness(&cover, 1).epsilon_star, Scale::ZERO);
        let mut il = Interleaver::new(cover, InterleavingConfig::new(1, Scale::ZERO));
        let report = il.verify_identities().unwrap();
        assert!(report.all_pass(), "failures: {:?}", report.failures());
        assert_eq!(report.shift, Scale::ZERO);
    }
}

#[test]
fn perturbed_covers_pass_at_their_exact_goodness() {
    for seed in [1, 4, 7] {
        let cover = generators::gen_random(seed, &generators::RandomCoverParams::perturbed());
        let eps = goodness(&cover, 1).epsilon_star;
        assert!(eps.is_finite());
        let mut il = Interleaver::new(cover, InterleavingConfig::new(1, eps));
        let report = il.verify_identities().unwrap();
        assert!(report.all_pass(), "seed {}: {:?}", seed, report.failures());
    }
}

#[test]
fn every_single_entry_corruption_of_c_is_detected() {
    let cover = generators::gen_e1();
    let mut il = Interleaver::new(cover, InterleavingConfig::new(1, Scale::new(1.0)));
    let alpha = Scale::ZERO;
    let clean = il.global_homotopy(alpha).unwrap();
    assert!(il.check_c_homotopy(alpha, &clean).unwrap().is_ok());
    let mut flipped = 0;
    for k in 0..clean.mats.len() {
        for col in 0..clean.mats[k].ncols() {
            for row in 0..clean.mats[k].rows() {
                let mut corrupt = clean.clone();
                corrupt.mats[k].flip_entry(row, col);
                let verdict = il.check_c_homotopy(alpha, &corrupt).unwrap();
                assert!(
                    verdict.is_err(),
                    "flip at dim {} ({}, {}) went undetected",
                    k,
                    row,
                    col
                );
                flipped += 1;
            }
        }
    }
    assert!(
        flipped > 50,
        "the negative control should sweep every entry"
    );
}

#[test]
fn lifting_preserves_chain_homotopies() {
    // f = i_W b and g = a are chain homotopic via c; their lifts must be
    // chain homotopic via the lifted homotopy
    let cover = generators::gen_e1();
    let mut il = Interleaver::new(cover, InterleavingConfig::new(1, Scale::new(1.0)));
    let t = il.cfg.shift();
    for alpha in [Scale::ZERO, Scale::new(1.0), Scale::new(2.0)] {
        let ib = il.ib_map(alpha);
        let a = il.a_map(alpha).unwrap();
        let c = il.global_homotopy(alpha).unwrap();
        let f_hat = il.lift_blowup_map(&ib, alpha + t).unwrap();
        let g_hat = il.lift_blowup_map(&a, alpha + t).unwrap();
        let c_hat = il.lift_blowup_homotopy(&c, alpha + t).unwrap();
        c_hat.verify(&f_hat, &g_hat).unwrap();
        // and the lift of the inclusion-projection is the blow-up inclusion
        let i_b = inclusion_map(f_hat.source.clone(), f_hat.target.clone(), il.cfg.k_max);
        f_hat.equals(&i_b).unwrap();
    }
}

#[test]
fn lifted_chain_maps_verify_as_chain_maps() {
    let cover = generators::gen_e1();
    let mut il = Interleaver::new(cover, InterleavingConfig::new(1, Scale::new(1.0)));
    let t = il.cfg.shift();
    let alpha = Scale::new(1.0);
    let a = il.a_map(alpha).unwrap();
    let lifted = il.lift_blowup_map(&a, alpha + t).unwrap();
    lifted.verify().unwrap();
    let qh = il.q_hat(alpha).unwrap();
    qh.verify().unwrap();
}

#[test]
fn construction_is_deterministic() {
    let build = || {
        let cover = generators::gen_e1();
        let mut il = Interleaver::new(cover, InterleavingConfig::new(1, Scale::new(1.0)));
        let q = il.q_map(Scale::ZERO).unwrap();
        let c = il.global_homotopy(Scale::ZERO).unwrap();
        (q.mats.clone(), c.mats.clone())
    };
    let (q1, c1) = build();
    let (q2, c2) = build();
    assert_eq!(q1, q2);
    assert_eq!(c1, c2);
}

#[test]
fn tight_family_identity_suite_in_its_feature_dimension() {
    // the n = 1 construction has goodness 2 in dimension 0
    let cover = generators::gen_tight(1);
    let eps = goodness(&cover, 0).epsilon_star;
    assert_eq!(eps, Scale::new(2.0));
    let mut il = Interleaver::new(cover, InterleavingConfig::new(0, eps));
    let report = il.verify_identities().unwrap();
    assert!(report.all_pass(), "failures: {:?}", report.failures());
}

#[test]
fn late_starting_cover_verifies_from_its_first_scale() {
    // no element exists before scale 3; the grid starts there and the
    // earliest snapshots are nonempty
    use nervecheck_core::cell::Simplex;
    use nervecheck_core::filtration::Filtration;
    let s = |v: &[u32]| Simplex::new(v.to_vec());
    let a = Filtration::close_and_validate(vec![
        (s(&[0, 1]), nervecheck_core::Scale::new(3.0)),
        (s(&[1, 2]), nervecheck_core::Scale::new(5.0)),
    ])
    .unwrap();
    let b =
        Filtration::close_and_validate(vec![(s(&[1]), nervecheck_core::Scale::new(4.0))]).unwrap();
    let cover = nervecheck_core::CoverFiltration::new(vec!["a".into(), "b".into()], vec![a, b], 3);
    let eps = goodness(&cover, 1).epsilon_star;
    assert!(eps.is_finite());
    let mut il = Interleaver::new(cover, InterleavingConfig::new(1, eps));
    let report = il.verify_identities().unwrap();
    assert!(report.all_pass(), "{:?}", report.failures());
    assert_eq!(report.scales[0].alpha, Scale::new(3.0));
}

#[test]
fn identity_suite_across_dimension_caps() {
    // higher caps exercise homotopy solving one dimension above the
    // features, including across the sphere classes of the tight family
    let cases: Vec<(&str, nervecheck_core::CoverFiltration, usize)> = vec![
        ("e1 K=0", generators::gen_e1(), 0),
        ("e1 K=2", generators::gen_e1(), 2),
        ("tight(2) K=2", generators::gen_tight(2), 2),
        ("tight(3) K=2", generators::gen_tight(3), 2),
    ];
    for (name, cover, k) in cases {
        let eps = goodness(&cover, k).epsilon_star;
        assert!(eps.is_finite(), "{}", name);
        let mut il = Interleaver::new(cover, InterleavingConfig::new(k, eps));
        let report = il
            .verify_identities()
            .unwrap_or_else(|e| panic!("{}: {}", name, e));
        assert!(report.all_pass(), "{}: {:?}", name, report.failures());
    }
}
