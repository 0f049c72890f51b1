use std::collections::BTreeMap;

use num_traits::One;

use super::monomial::{Monomial, Var};
use super::poly::Poly;
use super::rational::RationalFunction;
use crate::error::{Error, Result};

/// Power series in one or two expansion variables, truncated to a box.
///
/// `order[i]` is the largest exponent of `vars[i]` that is kept. Coefficients
/// are rational functions in the remaining variables; zero coefficients are
/// never stored.
#[derive(Clone, Debug)]
pub struct FormalSeries {
    vars: Vec<Var>,
    order: Vec<u32>,
    coeffs: BTreeMap<Vec<u32>, RationalFunction>,
}

impl FormalSeries {
    pub fn zero(vars: &[Var], order: &[u32]) -> Self {
        assert!(
            !vars.is_empty() && vars.len() <= 2 && vars.len() == order.len(),
            "one or two expansion variables with one order each"
        );
        FormalSeries {
            vars: vars.to_vec(),
            order: order.to_vec(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(vars: &[Var], order: &[u32]) -> Self {
        Self::constant(vars, order, RationalFunction::one())
    }

    pub fn constant(vars: &[Var], order: &[u32], c: RationalFunction) -> Self {
        let mut s = Self::zero(vars, order);
        s.set(vec![0; vars.len()], c);
        s
    }

    /// `1/(1 - c * vars[axis])` truncated.
    pub fn geometric(vars: &[Var], order: &[u32], axis: usize, c: &RationalFunction) -> Self {
        let mut s = Self::zero(vars, order);
        let mut pow = RationalFunction::one();
        for k in 0..=order[axis] {
            let mut key = vec![0; vars.len()];
            key[axis] = k;
            s.set(key, pow.clone());
            pow = &pow * c;
        }
        s
    }

    fn set(&mut self, key: Vec<u32>, c: RationalFunction) {
        if self.in_box(&key) && !c.is_zero() {
            self.coeffs.insert(key, c);
        } else {
            self.coeffs.remove(&key);
        }
    }

    fn in_box(&self, key: &[u32]) -> bool {
        key.iter().zip(&self.order).all(|(k, o)| k <= o)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn coeff(&self, key: &[u32]) -> RationalFunction {
        self.coeffs.get(key).cloned().unwrap_or_default()
    }

    /// Nonzero coefficients in lexicographic exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &RationalFunction)> {
        self.coeffs.iter()
    }

    /// Builds a series from explicit coefficients, dropping those outside the box.
    pub fn from_coeffs(
        vars: &[Var],
        order: &[u32],
        coeffs: impl IntoIterator<Item = (Vec<u32>, RationalFunction)>,
    ) -> Self {
        let mut grouped: BTreeMap<Vec<u32>, Vec<RationalFunction>> = BTreeMap::new();
        for (k, c) in coeffs {
            grouped.entry(k).or_default().push(c);
        }
        let mut s = Self::zero(vars, order);
        for (k, cs) in grouped {
            s.set(k, RationalFunction::sum(&cs));
        }
        s
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(
            self.vars, other.vars,
            "series over different expansion variables"
        );
        assert_eq!(
            self.order, other.order,
            "series with different truncation orders"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let items = self
            .coeffs
            .iter()
            .chain(other.coeffs.iter())
            .map(|(k, c)| (k.clone(), c.clone()));
        Self::from_coeffs(&self.vars, &self.order, items)
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.values_mut() {
            *c = -&*c;
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut items = Vec::new();
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &other.coeffs {
                let k: Vec<u32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                if self.in_box(&k) {
                    items.push((k, ca * cb));
                }
            }
        }
        Self::from_coeffs(&self.vars, &self.order, items)
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        let items = self.coeffs.iter().map(|(k, v)| (k.clone(), v * c));
        Self::from_coeffs(&self.vars, &self.order, items)
    }

    /// Multiplies by `vars[axis]^shift`, dropping terms pushed out of the box.
    pub fn shift(&self, axis: usize, shift: u32) -> Self {
        let items = self.coeffs.iter().map(|(k, v)| {
            let mut k = k.clone();
            k[axis] += shift;
            (k, v.clone())
        });
        Self::from_coeffs(&self.vars, &self.order, items)
    }

    /// Truncates a polynomial in the expansion variables.
    pub fn from_poly(p: &Poly, vars: &[Var], order: &[u32]) -> Self {
        let items = p
            .split_by(vars)
            .into_iter()
            .map(|(k, c)| (k, RationalFunction::from_poly(c)));
        Self::from_coeffs(vars, order, items)
    }

    /// First coefficient (in lexicographic exponent order) where the two
    /// series differ.
    pub fn first_difference(&self, other: &Self) -> Option<Vec<u32>> {
        self.check_compatible(other);
        let mut keys: Vec<&Vec<u32>> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .find(|k| self.coeff(k) != other.coeff(k))
            .cloned()
    }

    /// The exponent box in lexicographic order.
    fn box_keys(&self) -> Vec<Vec<u32>> {
        let mut keys = vec![vec![]];
        for &o in &self.order {
            keys = keys
                .into_iter()
                .flat_map(|k| {
                    (0..=o).map(move |e| {
                        let mut k = k.clone();
                        k.push(e);
                        k
                    })
                })
                .collect();
        }
        keys
    }
}

impl PartialEq for FormalSeries {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
            && self.order == other.order
            && self.first_difference(other).is_none()
    }
}

/// Inverts a polynomial with nonzero constant term in the expansion variables.
fn invert_poly(f: &Poly, vars: &[Var], order: &[u32]) -> Result<FormalSeries> {
    let parts = f.split_by(vars);
    let zero_key = vec![0u32; vars.len()];
    let f0 = parts.get(&zero_key).cloned().unwrap_or_else(Poly::zero);
    if f0.is_zero() {
        return Err(Error::NotExpandable(
            "denominator factor has zero constant term in the expansion variables".into(),
        ));
    }
    let inv0 = RationalFunction::from_poly(f0).inv()?;
    let fs: Vec<(Vec<u32>, RationalFunction)> = parts
        .into_iter()
        .filter(|(k, _)| *k != zero_key)
        .map(|(k, p)| (k, RationalFunction::from_poly(p)))
        .collect();
    let mut out = FormalSeries::zero(vars, order);
    let keys = out.box_keys();
    for key in keys {
        if key == zero_key {
            out.set(key, inv0.clone());
            continue;
        }
        let mut acc = Vec::new();
        for (fk, fc) in &fs {
            if fk.iter().zip(&key).all(|(a, b)| a <= b) {
                let rest: Vec<u32> = key.iter().zip(fk).map(|(a, b)| a - b).collect();
                if let Some(g) = out.coeffs.get(&rest) {
                    acc.push(fc * g);
                }
            }
        }
        let s = RationalFunction::sum(&acc);
        if !s.is_zero() {
            out.set(key, -(&s * &inv0));
        }
    }
    Ok(out)
}

/// Expands `r` as a power series in `vars`, truncated at `order`.
///
/// Each denominator factor must have a nonzero constant term in the expansion
/// variables, and the monomial part of the denominator must not involve them.
pub fn series_from_rational(
    r: &RationalFunction,
    vars: &[Var],
    order: &[u32],
) -> Result<FormalSeries> {
    let mono = r.denom_monomial();
    if vars.iter().any(|&v| mono.exp(v) > 0) {
        return Err(Error::NotExpandable(
            "denominator vanishes at the expansion point".into(),
        ));
    }
    let mut s = FormalSeries::from_poly(r.numer(), vars, order);
    for (f, k) in r.denom_factors() {
        let inv = invert_poly(f, vars, order)?;
        for _ in 0..k {
            s = s.mul(&inv);
        }
    }
    if !mono.is_one() {
        let m = RationalFunction::from_poly(Poly::term(mono.clone(), One::one()));
        s = s.scale(&m.inv()?);
    }
    Ok(s)
}

/// Series of `Π_i (1 - r_i * X)^{-1}` in the single expansion variable `x`.
pub fn euler_product(roots: &[RationalFunction], x: Var, order: u32) -> FormalSeries {
    roots
        .iter()
        .fold(FormalSeries::one(&[x], &[order]), |acc, r| {
            acc.mul(&FormalSeries::geometric(&[x], &[order], 0, r))
        })
}

impl FormalSeries {
    /// True if every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.is_zero())
    }

    /// Coefficient count, for diagnostics.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Evaluates the truncated series as a polynomial in the expansion variables.
    pub fn to_rational(&self) -> RationalFunction {
        let items: Vec<RationalFunction> = self
            .coeffs
            .iter()
            .map(|(k, c)| {
                let mut m = Monomial::one();
                for (v, e) in self.vars.iter().zip(k) {
                    m = m.mul(&Monomial::var(*v, *e as u16));
                }
                c * &RationalFunction::from_poly(Poly::term(m, One::one()))
            })
            .collect();
        RationalFunction::sum(&items)
    }
}
