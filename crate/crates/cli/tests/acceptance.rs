//! One test per acceptance criterion. Each prints a single
//! `criterion N: PASS|FAIL ...` line; every comparison is exact.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rslv_core::cosets::{
    bruhat_product_identity_check, congruence_index, exhaustive_partition_audit,
    mirabolic_partition_audit, stabilizer_audit, xi_t_valuation_check, Variant, DEFAULT_BUDGET,
};
use rslv_core::degenerate::{
    degenerate_assemble_and_verify, hsum_expected, hsum_identity, index_formula,
    level_volume_identity_numeric, DegenerateContext,
};
use rslv_core::satake::{
    is_dominant, rs_lfactor, whittaker_recursion_check, zeta_series_gl_m_m, zeta_series_gl_m_m1,
    SatakeData,
};
use rslv_core::spectral::{
    residue_eval_1, residue_eval_2, residue_target_1, residue_target_2, spectral_weight_closed,
    spectral_weight_trace, ResidueContext,
};
use rslv_core::symfunc::{partitions_up_to, Registry};
use serde_json::Value;

const TOLERANCE: &str = "exact";

fn report(id: u32, what: &str, ok: bool, elapsed: Duration, limit_secs: u64) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!(
        "criterion {id}: {status}  {what}  [tolerance {TOLERANCE}; {:.1}s of {limit_secs}s]",
        elapsed.as_secs_f64()
    );
    assert!(ok, "criterion {id} failed: {what}");
}

fn residue_chain_holds(ctx: &ResidueContext) -> bool {
    spectral_weight_trace(ctx).unwrap() == spectral_weight_closed(ctx).unwrap()
        && residue_eval_1(ctx).unwrap() == residue_target_1(ctx).unwrap()
        && residue_eval_2(ctx).unwrap() == residue_target_2(ctx).unwrap()
}

#[test]
fn criterion_1_spectral_weight_chain() {
    let t = Instant::now();
    let mut ok = true;
    for n in 2..=3 {
        let mut reg = Registry::new();
        ok &= residue_chain_holds(&ResidueContext::symbolic(&mut reg, n).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let mut reg = Registry::new();
        let a = SatakeData::random(&mut rng, 4, false).unwrap();
        let b = SatakeData::random(&mut rng, 4, false).unwrap();
        let x = SatakeData::random(&mut rng, 5, false).unwrap();
        ok &= residue_chain_holds(&ResidueContext::with_params(&mut reg, a, b, x).unwrap());
    }
    report(
        1,
        "trace = closed form = residues, n = 2, 3 symbolic and 10 numeric at n = 4",
        ok,
        t.elapsed(),
        180,
    );
}

#[test]
fn criterion_2_unramified_zeta() {
    let t = Instant::now();
    let mut ok = true;
    for m in 2..=4 {
        let mut reg = Registry::new();
        let (x, v) = (reg.var("X"), reg.var("V"));
        let big = SatakeData::symbolic(&mut reg, "x", m, false).unwrap();
        let small = SatakeData::symbolic(&mut reg, "y", m - 1, false).unwrap();
        let torus = zeta_series_gl_m_m1(&big, &small, x, v, 6).unwrap();
        ok &= torus
            .first_difference(&rs_lfactor(&big, &small).series(x, 6))
            .is_none();
    }
    for m in 2..=3 {
        let mut reg = Registry::new();
        let (x, v) = (reg.var("X"), reg.var("V"));
        let a = SatakeData::symbolic(&mut reg, "a", m, false).unwrap();
        let b = SatakeData::symbolic(&mut reg, "b", m, false).unwrap();
        let torus = zeta_series_gl_m_m(&a, &b, x, v, 6).unwrap();
        ok &= torus
            .first_difference(&rs_lfactor(&a, &b).series(x, 6))
            .is_none();
    }
    report(
        2,
        "torus sums equal Euler products through order 6",
        ok,
        t.elapsed(),
        120,
    );
}

#[test]
fn criterion_3_whittaker_recursion() {
    let t = Instant::now();
    let mut ok = true;
    let mut count = 0;
    for m in 2..=4 {
        let mut reg = Registry::new();
        let v = reg.var("V");
        let pi = SatakeData::symbolic(&mut reg, "u", m, true).unwrap();
        for p in partitions_up_to(4, m - 1) {
            let nu: Vec<i64> = p.parts().iter().map(|&x| x as i64).collect();
            assert!(is_dominant(&nu));
            ok &= whittaker_recursion_check(&pi, &nu, v).unwrap();
            count += 1;
        }
    }
    let what = format!("recursion exact on {count} dominant weights, m = 2..4, |nu| <= 4");
    report(3, &what, ok, t.elapsed(), 120);
}

#[test]
fn criterion_4_degenerate_term() {
    let t = Instant::now();
    let mut ok = true;
    for n in 2..=3 {
        let mut reg = Registry::new();
        let ctx = DegenerateContext::symbolic(&mut reg, n, true).unwrap();
        ok &= degenerate_assemble_and_verify(&ctx).unwrap().holds();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let mut reg = Registry::new();
        let a = SatakeData::random(&mut rng, 4, false).unwrap();
        let b = SatakeData::random(&mut rng, 4, true).unwrap();
        let ctx = DegenerateContext::with_params(&mut reg, a, b).unwrap();
        ok &= degenerate_assemble_and_verify(&ctx).unwrap().holds();
    }
    let mut vanishing = 0;
    for n in 2..=4 {
        let mut reg = Registry::new();
        let b = SatakeData::symbolic(&mut reg, "b", n, true).unwrap();
        for k in 0..=n as i64 {
            for m in 1..=6 {
                let got = hsum_identity(&b, k, m).unwrap();
                ok &= got == hsum_expected(&b, k, m).unwrap();
                if m < k {
                    ok &= got.is_zero();
                    vanishing += 1;
                }
            }
        }
    }
    let what = format!("A + B = C (n = 2, 3 symbolic, n = 4 numeric); hsum table incl. {vanishing} vanishing cases");
    report(4, &what, ok, t.elapsed(), 180);
}

#[test]
fn criterion_5_coset_geometry() {
    let t = Instant::now();
    let mut ok = true;
    let mut counts = Vec::new();
    for (n, q) in [(2, 2), (2, 3), (2, 5), (3, 2)] {
        let r = stabilizer_audit(n, q, DEFAULT_BUDGET).unwrap();
        ok &= r.passes() && r.orbit_sum() == r.group_order;
        for c in &r.classes {
            if let (Some(s), Some(e)) = (c.stabilizer, c.expected_stabilizer) {
                ok &= s == e;
            }
        }
        counts.push(r.orbit_count);
        for (v, expected) in [(Variant::PxG, 3), (Variant::GxP, 3), (Variant::PxP, 2)] {
            let m = mirabolic_partition_audit(n, q, v, DEFAULT_BUDGET).unwrap();
            ok &= m.passes() && m.orbit_count == expected;
        }
    }
    ok &= counts == [7, 8, 10, 7];
    ok &= exhaustive_partition_audit(3, 3, DEFAULT_BUDGET).is_err();
    let what =
        format!("G x G class counts {counts:?}, mirabolic 3/3/2, orbit-stabilizer reconciled");
    report(5, &what, ok, t.elapsed(), 300);
}

#[test]
fn criterion_6_index_and_volume() {
    let t = Instant::now();
    let mut ok = true;
    let mut indices = Vec::new();
    for (n, p, e) in [(2usize, 2u64, 1u32), (2, 2, 2), (2, 3, 1), (3, 2, 1)] {
        let r = congruence_index(n, p, e, DEFAULT_BUDGET).unwrap();
        ok &= index_formula(n as u32, p, e).to_string() == r.index().to_string();
        ok &= level_volume_identity_numeric(n as u32, p, e).unwrap();
        indices.push(r.index());
    }
    let what = format!("enumerated indices {indices:?} match the formula and the zeta ratio");
    report(6, &what, ok, t.elapsed(), 120);
}

#[test]
fn criterion_7_support_shadow() {
    let t = Instant::now();
    let mut ok = true;
    for (p, e) in [(2u64, 1u32), (3, 2)] {
        let r = xi_t_valuation_check(2, p, e, 500, 7).unwrap();
        ok &= r.accepted == 500 && r.passes();
    }
    report(
        7,
        "v(t) >= e and det(a) d t = c adj(a) b on 500 samples per (p, e)",
        ok,
        t.elapsed(),
        60,
    );
}

#[test]
fn criterion_8_bruhat_factorization() {
    let t = Instant::now();
    let ok = (2..=3).all(|n| bruhat_product_identity_check(n).unwrap().passes());
    report(
        8,
        "g k = d * factored product for n = 2, 3 symbolic",
        ok,
        t.elapsed(),
        60,
    );
}

fn verify_all(seed: &str) -> std::thread::JoinHandle<(bool, String)> {
    let seed = seed.to_string();
    std::thread::spawn(move || {
        let out = Command::new(env!("CARGO_BIN_EXE_rslv"))
            .args(["verify-all", "--profile", "desk", "--seed", &seed])
            .output()
            .expect("binary runs");
        (
            out.status.success(),
            String::from_utf8(out.stdout).expect("UTF-8 output"),
        )
    })
}

#[test]
fn criterion_9_determinism() {
    let t = Instant::now();
    let (first, second) = (verify_all("11"), verify_all("11"));
    let (ok1, raw_a) = first.join().unwrap();
    let (ok2, raw_b) = second.join().unwrap();
    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.contains("\"elapsed_ms\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a: Value = serde_json::from_str(&raw_a).expect("JSON report");
    let b: Value = serde_json::from_str(&raw_b).expect("JSON report");
    let keys: Vec<&String> = a.as_object().unwrap().keys().collect();
    let checks_a = serde_json::to_string(&a["checks"]).unwrap();
    let checks_b = serde_json::to_string(&b["checks"]).unwrap();
    let n = a["checks"].as_array().map_or(0, Vec::len);
    let ok = ok1
        && ok2
        && n > 0
        && checks_a == checks_b
        && strip(&raw_a) == strip(&raw_b)
        && keys == ["checks", "command", "elapsed_ms", "params"];
    let what = format!("two verify-all runs give byte-identical check arrays ({n} checks)");
    report(9, &what, ok, t.elapsed(), 600);
}
