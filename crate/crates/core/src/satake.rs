//! Satake parameters, local L-factors, spherical Whittaker values and the
//! unramified zeta-integral identities.
//!
//! `q^{1/2}` is carried as an independent variable `V` (so `q = V^2`), which
//! keeps every half-integral power of `q` an integral power of `V`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::symfunc::{
    elementary_rf, euler_product, partitions_up_to, q_frac, schur_rf, FormalSeries, Partition,
    Registry, Var, RF,
};

/// Inverse roots `μ_1, ..., μ_m` of an unramified representation of GL(m).
#[derive(Clone, Debug)]
pub struct SatakeData {
    params: Vec<RF>,
    unit_product: bool,
}

impl SatakeData {
    /// Uses `params` as given. With `unit_product` the last entry is replaced
    /// by the inverse of the product of the others.
    pub fn new(mut params: Vec<RF>, unit_product: bool) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::Domain("Satake data needs rank at least 1".into()));
        }
        if params.iter().any(RF::is_zero) {
            return Err(Error::Domain("Satake parameters must be nonzero".into()));
        }
        if unit_product {
            let m = params.len();
            params[m - 1] = RF::product(&params[..m - 1]).inv()?;
        }
        Ok(SatakeData {
            params,
            unit_product,
        })
    }

    /// Fresh variables `prefix1, ..., prefix{m}` (the last one is eliminated
    /// under `unit_product`).
    pub fn symbolic(
        reg: &mut Registry,
        prefix: &str,
        m: usize,
        unit_product: bool,
    ) -> Result<Self> {
        let vars = reg.vars(prefix, m);
        Self::new(vars.into_iter().map(RF::var).collect(), unit_product)
    }

    /// Random pairwise distinct rationals `±u/v` with `1 ≤ u, v ≤ 9`.
    pub fn random<R: Rng>(rng: &mut R, m: usize, unit_product: bool) -> Result<Self> {
        loop {
            let params = (0..m)
                .map(|_| {
                    let num = rng.gen_range(1..=9i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
                    RF::constant(q_frac(num, rng.gen_range(1..=9)))
                })
                .collect();
            let data = Self::new(params, unit_product)?;
            if data.check_regular().is_ok() {
                return Ok(data);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[RF] {
        &self.params
    }

    pub fn unit_product(&self) -> bool {
        self.unit_product
    }

    pub fn product(&self) -> RF {
        RF::product(&self.params)
    }

    /// The rank `m-1` data obtained by dropping `μ_j` (0-based).
    pub fn without(&self, j: usize) -> SatakeData {
        let mut params = self.params.clone();
        params.remove(j);
        SatakeData {
            params,
            unit_product: false,
        }
    }

    /// Fails if two parameters coincide as rational functions.
    pub fn check_regular(&self) -> Result<()> {
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                if self.params[i] == self.params[j] {
                    return Err(Error::Degenerate(format!(
                        "parameters {} and {} coincide",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A local L-factor `Π (1 - r X)^{-1}` recorded by its inverse roots `r`.
#[derive(Clone, Debug)]
pub struct LFactorRoots {
    pub inverse_roots: Vec<RF>,
    /// Variable standing for `q^{-s}` when the factor is expanded, if fixed.
    pub s_shift: Option<Var>,
}

impl LFactorRoots {
    pub fn new(inverse_roots: Vec<RF>) -> Self {
        LFactorRoots {
            inverse_roots,
            s_shift: None,
        }
    }

    pub fn with_shift(mut self, x: Var) -> Self {
        self.s_shift = Some(x);
        self
    }

    /// `Π (1 - r X)^{-1}` as a rational function in `X`.
    pub fn as_rational(&self, x: Var) -> Result<RF> {
        let xr = RF::var(x);
        let one = RF::one();
        RF::product(
            &self
                .inverse_roots
                .iter()
                .map(|r| &one - &(r * &xr))
                .collect::<Vec<_>>(),
        )
        .inv()
    }

    pub fn series(&self, x: Var, order: u32) -> FormalSeries {
        euler_product(&self.inverse_roots, x, order)
    }
}

/// Rankin–Selberg factor: inverse roots `a_i b_j`, `i` major.
pub fn rs_lfactor(pi1: &SatakeData, pi2: &SatakeData) -> LFactorRoots {
    let roots = pi1
        .params
        .iter()
        .flat_map(|a| pi2.params.iter().map(move |b| a * b))
        .collect();
    LFactorRoots::new(roots)
}

/// Standard L-factor of a single representation.
pub fn standard_lfactor(pi: &SatakeData) -> LFactorRoots {
    LFactorRoots::new(pi.params.clone())
}

/// Local zeta value `ζ(k) = (1 - q^{-k})^{-1} = V^{2k} / (V^{2k} - 1)`.
pub fn zeta_local(k: i64, v: Var) -> Result<RF> {
    if k < 1 {
        return Err(Error::Domain(format!("zeta_local needs k >= 1, got {k}")));
    }
    let vk = RF::var_pow(v, 2 * k as i32);
    (&RF::one() - &vk.inv()?).inv()
}

/// Eigenvalue of the i-th fundamental Hecke operator: `e_i(μ)`.
pub fn hecke_eigenvalue_fundamental(pi: &SatakeData, i: i64) -> Result<RF> {
    if i < 0 || i as usize > pi.rank() {
        return Err(Error::Domain(format!(
            "fundamental index {i} outside 0..={}",
            pi.rank()
        )));
    }
    Ok(elementary_rf(i as usize, &pi.params))
}

/// `δ^{1/2}(diag(p^ν))` on GL(m): `V^{-Σ ν_i (m + 1 - 2i)}`.
pub fn modulus_char_sqrt(m: usize, nu: &[i64], v: Var) -> RF {
    let exp: i64 = nu
        .iter()
        .enumerate()
        .map(|(i, &n)| n * (m as i64 - 1 - 2 * i as i64))
        .sum();
    RF::var_pow(v, -exp as i32)
}

pub fn is_dominant(nu: &[i64]) -> bool {
    nu.windows(2).all(|w| w[0] >= w[1])
}

/// Schur character `χ_ν(μ)` for dominant `ν`, negative entries handled by
/// the central shift `χ_{ν + c} = (Π μ)^c χ_ν`.
pub fn schur_character(pi: &SatakeData, nu: &[i64]) -> Result<RF> {
    if nu.len() != pi.rank() {
        return Err(Error::Domain(format!(
            "weight of length {} for rank {}",
            nu.len(),
            pi.rank()
        )));
    }
    if !is_dominant(nu) {
        return Err(Error::Domain(format!("{nu:?} is not dominant")));
    }
    let c = nu.last().copied().unwrap_or(0).min(0);
    let shifted: Vec<i64> = nu.iter().map(|&n| n - c).collect();
    let chi = schur_rf(&Partition::from_signed(&shifted)?, &pi.params)?;
    if c == 0 {
        Ok(chi)
    } else {
        Ok(&chi * &pi.product().pow(c as i32)?)
    }
}

/// Spherical Whittaker value `W_π(diag(p^ν))`: `δ^{1/2} χ_ν(μ)` on dominant
/// `ν`, zero otherwise.
pub fn shintani_value(pi: &SatakeData, nu: &[i64], v: Var) -> Result<RF> {
    if nu.len() != pi.rank() {
        return Err(Error::Domain(format!(
            "weight of length {} for rank {}",
            nu.len(),
            pi.rank()
        )));
    }
    if !is_dominant(nu) {
        return Ok(RF::zero());
    }
    Ok(&modulus_char_sqrt(pi.rank(), nu, v) * &schur_character(pi, nu)?)
}

/// Value of the shifted spherical vector: `ν` translated by
/// `λ·(m-1, m-2, ..., 0)` where `λ` is the valuation of the shift.
pub fn shifted_shintani_value(
    pi: &SatakeData,
    lambda_valuation: i64,
    nu: &[i64],
    v: Var,
) -> Result<RF> {
    let m = nu.len() as i64;
    let shifted: Vec<i64> = nu
        .iter()
        .enumerate()
        .map(|(j, &n)| n + lambda_valuation * (m - 1 - j as i64))
        .collect();
    shintani_value(pi, &shifted, v)
}

fn to_signed(p: &Partition) -> Vec<i64> {
    p.parts().iter().map(|&x| x as i64).collect()
}

/// Torus-sum expansion of the GL(m)×GL(m-1) integral `Ψ(1/2+s)` in
/// `X = q^{-1/2-s}`.
///
/// The term at `ν` is `W_Π(diag(p^ν, 1)) W_{π'}(p^ν) δ_{m-1}^{-1}(p^ν) |det p^ν|^s`
/// with `|det p^ν|^s = (X V)^{|ν|}`.
pub fn zeta_series_gl_m_m1(
    big: &SatakeData,
    small: &SatakeData,
    x: Var,
    v: Var,
    order: u32,
) -> Result<FormalSeries> {
    let m = big.rank();
    if m < 2 || small.rank() != m - 1 {
        return Err(Error::Domain(format!(
            "GL(m)×GL(m-1) needs ranks (m, m-1), got ({m}, {})",
            small.rank()
        )));
    }
    let mut terms = Vec::new();
    for p in partitions_up_to(order, m - 1) {
        let nu = to_signed(&p);
        let mut big_nu = nu.clone();
        big_nu.push(0);
        let w_big = shintani_value(big, &big_nu, v)?;
        let w_small = shintani_value(small, &nu, v)?;
        let d = modulus_char_sqrt(m - 1, &nu, v).pow(-2)?;
        let det_s = RF::var_pow(v, p.weight() as i32);
        terms.push((
            vec![p.weight()],
            RF::product([&w_big, &w_small, &d, &det_s]),
        ));
    }
    Ok(FormalSeries::from_coeffs(&[x], &[order], terms))
}

/// Torus-sum expansion of the GL(m)×GL(m) integral `Ψ(s)` against the
/// characteristic function of `o^m`, in `X = q^{-s}`. The Schwartz function
/// restricts the sum to `ν_m ≥ 0`.
pub fn zeta_series_gl_m_m(
    pi: &SatakeData,
    pi2: &SatakeData,
    x: Var,
    v: Var,
    order: u32,
) -> Result<FormalSeries> {
    let m = pi.rank();
    if pi2.rank() != m {
        return Err(Error::Domain(format!(
            "GL(m)×GL(m) needs equal ranks, got ({m}, {})",
            pi2.rank()
        )));
    }
    let mut terms = Vec::new();
    for p in partitions_up_to(order, m) {
        let nu = to_signed(&p);
        let w1 = shintani_value(pi, &nu, v)?;
        let w2 = shintani_value(pi2, &nu, v)?;
        let d = modulus_char_sqrt(m, &nu, v).pow(-2)?;
        terms.push((vec![p.weight()], RF::product([&w1, &w2, &d])));
    }
    Ok(FormalSeries::from_coeffs(&[x], &[order], terms))
}

/// Both sides of the Whittaker recursion at `(ν, 0)`:
/// `W_π(diag(p^ν, 1))` and
/// `|det p^ν|^{1/2} Σ_j μ_j^{-1} / Π_{i≠j}(μ_i - μ_j) · W_{π_j}(p^ν)`,
/// where `π_j` drops `μ_j`.
pub fn whittaker_recursion_sides(pi: &SatakeData, nu: &[i64], v: Var) -> Result<(RF, RF)> {
    let m = pi.rank();
    if m < 2 || nu.len() != m - 1 {
        return Err(Error::Domain(format!(
            "need rank m >= 2 and ν of length m-1, got {m} and {}",
            nu.len()
        )));
    }
    if !is_dominant(nu) || nu.last().is_some_and(|&l| l < 0) {
        return Err(Error::Domain(format!(
            "{nu:?} must be dominant with nonnegative last entry"
        )));
    }
    pi.check_regular()?;
    let mut full = nu.to_vec();
    full.push(0);
    let lhs = shintani_value(pi, &full, v)?;
    let mut terms = Vec::with_capacity(m);
    for j in 0..m {
        let mu_j = &pi.params[j];
        let vdm = RF::product(
            &(0..m)
                .filter(|&i| i != j)
                .map(|i| &pi.params[i] - mu_j)
                .collect::<Vec<_>>(),
        );
        let w = shintani_value(&pi.without(j), nu, v)?;
        terms.push(w.div(&(mu_j * &vdm))?);
    }
    let weight: i64 = nu.iter().sum();
    let rhs = &RF::var_pow(v, -weight as i32) * &RF::sum(&terms);
    Ok((lhs, rhs))
}

pub fn whittaker_recursion_check(pi: &SatakeData, nu: &[i64], v: Var) -> Result<bool> {
    let (lhs, rhs) = whittaker_recursion_sides(pi, nu, v)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::{q, q_frac};

    #[test]
    fn modulus_examples() {
        let v = Var(0);
        assert_eq!(modulus_char_sqrt(2, &[1, 0], v), RF::var_pow(v, -1));
        assert_eq!(modulus_char_sqrt(5, &[0; 5], v), RF::one());
        assert_eq!(modulus_char_sqrt(3, &[1, 1, 1], v), RF::one());
    }

    #[test]
    fn zeta_ratio_is_even_in_v() {
        let mut reg = Registry::new();
        let v = reg.var("V");
        let ratio = zeta_local(1, v)
            .unwrap()
            .div(&zeta_local(3, v).unwrap())
            .unwrap();
        // 1 + q^{-1} + q^{-2}, which is 7/4 at q = 2
        let geometric = RF::sum(&[RF::one(), RF::var_pow(v, -2), RF::var_pow(v, -4)]);
        assert_eq!(ratio, geometric);
        assert_eq!(q(1) + q_frac(1, 2) + q_frac(1, 4), q_frac(7, 4));
        assert_eq!(ratio.eval(&[(v, q(2))]).unwrap(), q_frac(21, 16));
        assert!(zeta_local(0, v).is_err());
    }

    #[test]
    fn rank_two_shintani() {
        let mut reg = Registry::new();
        let v = reg.var("V");
        let pi = SatakeData::symbolic(&mut reg, "m", 2, true).unwrap();
        let alpha = pi.params()[0].clone();
        let expected = &RF::var_pow(v, -1) * &(&alpha + &alpha.inv().unwrap());
        assert_eq!(shintani_value(&pi, &[1, 0], v).unwrap(), expected);
        assert!(shintani_value(&pi, &[0, 1], v).unwrap().is_zero());
        assert_eq!(shintani_value(&pi, &[0, 0], v).unwrap(), RF::one());
        assert_eq!(
            shifted_shintani_value(&pi, 1, &[0, 0], v).unwrap(),
            expected
        );
        assert_eq!(
            shifted_shintani_value(&pi, 1, &[0, 1], v).unwrap(),
            RF::one()
        );
    }

    #[test]
    fn rs_roots_order() {
        let mut reg = Registry::new();
        let a = SatakeData::symbolic(&mut reg, "a", 2, false).unwrap();
        let b = SatakeData::symbolic(&mut reg, "b", 2, false).unwrap();
        let l = rs_lfactor(&a, &b);
        assert_eq!(l.inverse_roots.len(), 4);
        assert_eq!(l.inverse_roots[1], &a.params()[0] * &b.params()[1]);
    }

    #[test]
    fn hecke_top_eigenvalue_is_central() {
        let mut reg = Registry::new();
        let pi = SatakeData::symbolic(&mut reg, "m", 3, true).unwrap();
        assert_eq!(hecke_eigenvalue_fundamental(&pi, 3).unwrap(), RF::one());
        assert_eq!(hecke_eigenvalue_fundamental(&pi, 0).unwrap(), RF::one());
        assert!(hecke_eigenvalue_fundamental(&pi, 4).is_err());
    }
}
