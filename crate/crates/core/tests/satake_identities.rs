use rslv_core::satake::{
    rs_lfactor, shintani_value, whittaker_recursion_check, whittaker_recursion_sides,
    zeta_series_gl_m_m, zeta_series_gl_m_m1, SatakeData,
};
use rslv_core::symfunc::{partitions_up_to, Registry, RF};
use rslv_core::Error;

#[test]
fn gl_m_by_gl_m_minus_one_matches_euler_product() {
    for m in 2..=4 {
        let mut reg = Registry::new();
        let x = reg.var("X");
        let v = reg.var("V");
        let big = SatakeData::symbolic(&mut reg, "x", m, false).unwrap();
        let small = SatakeData::symbolic(&mut reg, "y", m - 1, false).unwrap();
        let torus = zeta_series_gl_m_m1(&big, &small, x, v, 6).unwrap();
        let euler = rs_lfactor(&big, &small).series(x, 6);
        assert_eq!(torus.first_difference(&euler), None, "m = {m}");
    }
}

#[test]
fn gl_m_by_gl_m_matches_euler_product() {
    for m in 2..=3 {
        let mut reg = Registry::new();
        let x = reg.var("X");
        let v = reg.var("V");
        let a = SatakeData::symbolic(&mut reg, "a", m, false).unwrap();
        let b = SatakeData::symbolic(&mut reg, "b", m, false).unwrap();
        let torus = zeta_series_gl_m_m(&a, &b, x, v, 6).unwrap();
        let euler = rs_lfactor(&a, &b).series(x, 6);
        assert_eq!(torus.first_difference(&euler), None, "m = {m}");
    }
}

#[test]
fn zeta_order_zero_is_constant_one() {
    let mut reg = Registry::new();
    let x = reg.var("X");
    let v = reg.var("V");
    let a = SatakeData::symbolic(&mut reg, "a", 2, false).unwrap();
    let b = SatakeData::symbolic(&mut reg, "b", 1, false).unwrap();
    let torus = zeta_series_gl_m_m1(&a, &b, x, v, 0).unwrap();
    assert_eq!(torus.coeff(&[0]), RF::one());
    assert_eq!(torus.len(), 1);
}

#[test]
fn whittaker_recursion_all_small_weights() {
    for m in 2..=4 {
        let mut reg = Registry::new();
        let v = reg.var("V");
        let pi = SatakeData::symbolic(&mut reg, "u", m, true).unwrap();
        for p in partitions_up_to(4, m - 1) {
            let nu: Vec<i64> = p.parts().iter().map(|&x| x as i64).collect();
            assert!(
                whittaker_recursion_check(&pi, &nu, v).unwrap(),
                "m = {m}, ν = {nu:?}"
            );
        }
    }
}

#[test]
fn whittaker_recursion_rank_two_closed_form() {
    let mut reg = Registry::new();
    let v = reg.var("V");
    let pi = SatakeData::symbolic(&mut reg, "u", 2, true).unwrap();
    let mu = pi.params()[0].clone();
    let mu_inv = mu.inv().unwrap();
    for j in 0..5i64 {
        let (lhs, rhs) = whittaker_recursion_sides(&pi, &[j], v).unwrap();
        let num = &mu.pow(j as i32 + 1).unwrap() - &mu_inv.pow(j as i32 + 1).unwrap();
        let expected = &RF::var_pow(v, -(j as i32)) * &num.div(&(&mu - &mu_inv)).unwrap();
        assert_eq!(lhs, expected);
        assert_eq!(rhs, expected);
    }
}

#[test]
fn whittaker_recursion_rejects_repeated_parameters() {
    let mut reg = Registry::new();
    let v = reg.var("V");
    let t = RF::var(reg.var("t"));
    let pi = SatakeData::new(vec![t.clone(), t.clone(), t.pow(-2).unwrap()], false).unwrap();
    assert!(matches!(
        whittaker_recursion_check(&pi, &[1, 0], v),
        Err(Error::Degenerate(_))
    ));
}

#[test]
fn central_shift_invariance_under_unit_product() {
    for m in 2..=4 {
        let mut reg = Registry::new();
        let v = reg.var("V");
        let pi = SatakeData::symbolic(&mut reg, "u", m, true).unwrap();
        for p in partitions_up_to(5, m) {
            let nu: Vec<i64> = p.parts().iter().map(|&x| x as i64).collect();
            let base = shintani_value(&pi, &nu, v).unwrap();
            for c in [-3i64, -1, 2] {
                let shifted: Vec<i64> = nu.iter().map(|&x| x + c).collect();
                assert_eq!(
                    shintani_value(&pi, &shifted, v).unwrap(),
                    base,
                    "m = {m}, ν = {nu:?}, c = {c}"
                );
            }
        }
    }
}
