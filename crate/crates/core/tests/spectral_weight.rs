use std::collections::BTreeSet;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rslv_core::satake::SatakeData;
use rslv_core::spectral::*;
use rslv_core::symfunc::Registry;
use rslv_core::Error;

#[test]
fn trace_equals_closed_form_n2() {
    let mut reg = Registry::new();
    let ctx = ResidueContext::symbolic(&mut reg, 2).unwrap();
    let t = Instant::now();
    let tr = spectral_weight_trace(&ctx).unwrap();
    let cl = spectral_weight_closed(&ctx).unwrap();
    eprintln!("built in {:?}", t.elapsed());
    assert_eq!(tr, cl);
    eprintln!("compared in {:?}", t.elapsed());
}

#[test]
fn residues_n2() {
    let mut reg = Registry::new();
    let ctx = ResidueContext::symbolic(&mut reg, 2).unwrap();
    let r1 = residue_eval_1(&ctx).unwrap();
    assert_eq!(r1, residue_target_1(&ctx).unwrap());
    assert_eq!(r1, residue_target_1_lfactors(&ctx).unwrap());
    let r2 = residue_eval_2(&ctx).unwrap();
    assert_eq!(r2, residue_target_2(&ctx).unwrap());
    assert_eq!(r2, residue_target_2_lfactors(&ctx).unwrap());
    let (l, r) = lagrange_step(&ctx).unwrap();
    assert_eq!(l, r);
}

#[test]
fn trace_equals_closed_form_n3() {
    let mut reg = Registry::new();
    let ctx = ResidueContext::symbolic(&mut reg, 3).unwrap();
    let t = Instant::now();
    let tr = spectral_weight_trace(&ctx).unwrap();
    eprintln!("trace in {:?}", t.elapsed());
    let cl = spectral_weight_closed(&ctx).unwrap();
    eprintln!(
        "closed in {:?} terms {} {}",
        t.elapsed(),
        tr.numer().len(),
        cl.numer().len()
    );
    assert_eq!(tr, cl);
    eprintln!("compared in {:?}", t.elapsed());
    let r1 = residue_eval_1(&ctx).unwrap();
    assert_eq!(r1, residue_target_1(&ctx).unwrap());
    assert_eq!(r1, residue_target_1_lfactors(&ctx).unwrap());
    let r2 = residue_eval_2(&ctx).unwrap();
    assert_eq!(r2, residue_target_2(&ctx).unwrap());
    assert_eq!(r2, residue_target_2_lfactors(&ctx).unwrap());
    eprintln!("residues in {:?}", t.elapsed());
}

fn check_chain(ctx: &ResidueContext) {
    assert_eq!(
        spectral_weight_trace(ctx).unwrap(),
        spectral_weight_closed(ctx).unwrap()
    );
    let r1 = residue_eval_1(ctx).unwrap();
    assert_eq!(r1, residue_target_1(ctx).unwrap());
    assert_eq!(r1, residue_target_1_lfactors(ctx).unwrap());
    let r2 = residue_eval_2(ctx).unwrap();
    assert_eq!(r2, residue_target_2(ctx).unwrap());
    assert_eq!(r2, residue_target_2_lfactors(ctx).unwrap());
}

#[test]
fn numeric_n4_instances() {
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut reg = Registry::new();
        let a = SatakeData::random(&mut rng, 4, false).unwrap();
        let b = SatakeData::random(&mut rng, 4, false).unwrap();
        let x = SatakeData::random(&mut rng, 5, false).unwrap();
        check_chain(&ResidueContext::with_params(&mut reg, a, b, x).unwrap());
    }
}

#[test]
fn unit_product_specialization_n2() {
    let mut reg = Registry::new();
    let a = SatakeData::symbolic(&mut reg, "a", 2, true).unwrap();
    let b = SatakeData::symbolic(&mut reg, "b", 2, true).unwrap();
    let x = SatakeData::symbolic(&mut reg, "x", 3, false).unwrap();
    check_chain(&ResidueContext::with_params(&mut reg, a, b, x).unwrap());
}

#[test]
fn residues_do_not_depend_on_x() {
    let mut reg = Registry::new();
    let ctx = ResidueContext::symbolic(&mut reg, 2).unwrap();
    let names: BTreeSet<String> = residue_eval_1(&ctx)
        .unwrap()
        .vars()
        .into_iter()
        .chain(residue_eval_2(&ctx).unwrap().vars())
        .map(|v| reg.name(v).to_string())
        .collect();
    let expected: BTreeSet<String> = ["a1", "a2", "b1", "b2", "T1", "T2", "V"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    assert_eq!(names, expected);
}

#[test]
fn rank_one_is_rejected() {
    let mut reg = Registry::new();
    assert!(matches!(
        ResidueContext::symbolic(&mut reg, 1),
        Err(Error::Domain(_))
    ));
}
