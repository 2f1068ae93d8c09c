use okx_core::fixtures::{build_fixture, FixtureSpec};
use okx_core::verify::{verify, Verdict};
use okx_core::Rational;

fn run(spec: FixtureSpec, samples: usize, seed: u64) {
    let model = build_fixture::<Rational>(spec).unwrap();
    let report = verify(&model, samples, seed).unwrap();
    let failures: Vec<_> = report
        .claims
        .iter()
        .filter(|c| c.verdict == Verdict::Fail)
        .collect();
    assert!(failures.is_empty(), "{}: {failures:#?}", report.geometry);
    assert!(report.passed);
    assert!(report.claims.iter().all(|c| c.checks == samples));
}

#[test]
fn blow_up_of_the_plane() {
    run(FixtureSpec::Blp2, 120, 11);
}

#[test]
fn hirzebruch_surfaces() {
    for e in 0..=3 {
        run(FixtureSpec::Fe { e }, 60, 100 + e as u64);
    }
}

#[test]
fn projective_plane_with_plane_curves() {
    for m in 1..=3 {
        run(FixtureSpec::P2 { m }, 40, 5);
    }
}

#[test]
fn fake_projective_planes() {
    for k in 2..=4 {
        run(FixtureSpec::Fpp { k }, 40, 9);
    }
}

#[test]
fn reports_are_reproducible() {
    let model = build_fixture::<Rational>(FixtureSpec::Fe { e: 2 }).unwrap();
    assert_eq!(
        verify(&model, 24, 3).unwrap(),
        verify(&model, 24, 3).unwrap()
    );
}
