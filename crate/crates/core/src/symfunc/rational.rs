use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::monomial::{Monomial, Registry, Var};
use super::poly::{q, Poly, Q};
use crate::error::{Error, Result};

/// Denominator kept as a monomial times a multiset of normalized factors.
///
/// A normalized factor has no monomial content and leading coefficient 1, so
/// two factors are proportional exactly when they are equal. Sums take the
/// least common multiple of the factor multisets instead of the full product.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
struct Denominator {
    mono: Monomial,
    factors: BTreeMap<Poly, u32>,
}

impl Denominator {
    fn one() -> Self {
        Self::default()
    }

    fn is_one(&self) -> bool {
        self.mono.is_one() && self.factors.is_empty()
    }

    fn expand(&self) -> Poly {
        let mut parts: Vec<(&Poly, u32)> = self.factors.iter().map(|(f, &k)| (f, k)).collect();
        parts.sort_by_key(|(f, _)| f.len());
        let mut out = Poly::term(self.mono.clone(), Q::one());
        for (f, k) in parts {
            out = &out * &f.pow(k);
        }
        out
    }

    fn mul(&self, other: &Denominator) -> Denominator {
        let mut factors = self.factors.clone();
        for (f, k) in &other.factors {
            *factors.entry(f.clone()).or_insert(0) += k;
        }
        Denominator {
            mono: self.mono.mul(&other.mono),
            factors,
        }
    }

    fn pow(&self, k: u32) -> Denominator {
        Denominator {
            mono: self.mono.pow(k),
            factors: self
                .factors
                .iter()
                .map(|(f, e)| (f.clone(), e * k))
                .collect(),
        }
    }

    fn lcm(&self, other: &Denominator) -> Denominator {
        let mut factors = self.factors.clone();
        for (f, &k) in &other.factors {
            let e = factors.entry(f.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        Denominator {
            mono: self.mono.lcm(&other.mono),
            factors,
        }
    }

    /// `multiple / self`; `self` must divide `multiple`.
    fn cofactor(&self, multiple: &Denominator) -> Denominator {
        let mono = multiple
            .mono
            .div(&self.mono)
            .expect("denominator does not divide lcm");
        let mut factors = BTreeMap::new();
        for (f, &k) in &multiple.factors {
            let own = self.factors.get(f).copied().unwrap_or(0);
            if k > own {
                factors.insert(f.clone(), k - own);
            }
        }
        Denominator { mono, factors }
    }
}

/// Writes `p = c * m * f` with `f` normalized (no monomial content, leading
/// coefficient 1). `f` is `None` when `p` is a single term.
fn split_factor(p: &Poly) -> (Q, Monomial, Option<Poly>) {
    let m = p.monomial_content();
    let rest = p.div_monomial(&m).expect("content divides");
    let c = rest
        .leading()
        .map(|(_, c)| c.clone())
        .unwrap_or_else(Q::zero);
    if rest.len() <= 1 {
        return (c, m, None);
    }
    let f = rest.scale(&c.recip());
    (c, m, Some(f))
}

/// Exact multivariate rational function over Q.
///
/// Not reduced to lowest terms: equality is decided by cross-multiplication,
/// and the only cancellations performed eagerly are monomial content and a
/// numerator that is a scalar multiple of a single denominator factor.
/// [`RationalFunction::reduce`] cancels known denominator factors by trial
/// division on request.
#[derive(Clone, Default)]
pub struct RationalFunction {
    num: Poly,
    den: Denominator,
}

pub type RF = RationalFunction;

impl RationalFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(q(n))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction {
            num: p,
            den: Denominator::one(),
        }
    }

    /// `numerator / denominator`; fails if the denominator is the zero polynomial.
    pub fn new(numerator: Poly, denominator: &Poly) -> Result<Self> {
        Self::from_poly(numerator).div(&Self::from_poly(denominator.clone()))
    }

    /// `v^e` for any integer `e`.
    pub fn var_pow(v: Var, e: i32) -> Self {
        let m = Monomial::var(v, e.unsigned_abs() as u16);
        if e >= 0 {
            Self::from_poly(Poly::term(m, Q::one()))
        } else {
            RationalFunction {
                num: Poly::one(),
                den: Denominator {
                    mono: m,
                    factors: BTreeMap::new(),
                },
            }
        }
    }

    fn normalize(mut self) -> Self {
        if self.num.is_zero() {
            self.den = Denominator::one();
            return self;
        }
        let g = self.num.monomial_content().gcd(&self.den.mono);
        if !g.is_one() {
            self.num = self.num.div_monomial(&g).expect("gcd divides");
            self.den.mono = self.den.mono.div(&g).expect("gcd divides");
        }
        if !self.den.factors.is_empty() && self.num.len() > 1 {
            let (c, m, f) = split_factor(&self.num);
            if let Some(f) = f {
                if let Some(k) = self.den.factors.get_mut(&f) {
                    *k -= 1;
                    if *k == 0 {
                        self.den.factors.remove(&f);
                    }
                    self.num = Poly::term(m, c);
                    return self.normalize();
                }
            }
        }
        self
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    /// The denominator multiplied out.
    pub fn denom(&self) -> Poly {
        self.den.expand()
    }

    /// Non-monomial denominator factors with multiplicities.
    pub fn denom_factors(&self) -> impl Iterator<Item = (&Poly, u32)> {
        self.den.factors.iter().map(|(f, &k)| (f, k))
    }

    pub fn denom_monomial(&self) -> &Monomial {
        &self.den.mono
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the stored denominator is 1.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// True when the stored denominator is a monomial.
    pub fn is_laurent_polynomial(&self) -> bool {
        self.den.factors.is_empty()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<Q> {
        if !self.den.is_one() {
            return None;
        }
        self.num.as_constant()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut vs = self.num.vars();
        vs.extend(self.den.mono.iter().map(|(v, _)| v));
        for f in self.den.factors.keys() {
            vs.extend(f.vars());
        }
        vs
    }

    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (c, m, f) = split_factor(&self.num);
        let mut factors = BTreeMap::new();
        if let Some(f) = f {
            factors.insert(f, 1);
        }
        Ok(RationalFunction {
            num: self.den.expand().scale(&c.recip()),
            den: Denominator { mono: m, factors },
        }
        .normalize())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, c: &Q) -> Self {
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
        .normalize()
    }

    pub fn pow(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(e),
            den: base.den.pow(e),
        }
        .normalize())
    }

    /// Sum over a common least-common-multiple denominator.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a RationalFunction>) -> RationalFunction {
        let items: Vec<&RationalFunction> = items.into_iter().filter(|r| !r.is_zero()).collect();
        if items.is_empty() {
            return RationalFunction::zero();
        }
        let lcm = items
            .iter()
            .skip(1)
            .fold(items[0].den.clone(), |l, r| l.lcm(&r.den));
        let mut cache: HashMap<Denominator, Poly> = HashMap::new();
        let mut num = Poly::zero();
        for r in items {
            let cof = cache
                .entry(r.den.clone())
                .or_insert_with(|| r.den.cofactor(&lcm).expand());
            num = &num + &(&r.num * cof);
        }
        RationalFunction { num, den: lcm }.normalize()
    }

    pub fn product<'a>(items: impl IntoIterator<Item = &'a RationalFunction>) -> RationalFunction {
        items
            .into_iter()
            .fold(RationalFunction::one(), |acc, r| &acc * r)
    }

    /// Cancels denominator factors that divide the numerator exactly.
    pub fn reduce(&self) -> Self {
        let mut num = self.num.clone();
        let mut factors = BTreeMap::new();
        for (f, &k) in &self.den.factors {
            let mut left = k;
            while left > 0 {
                match num.div_exact(f) {
                    Some(qt) => {
                        num = qt;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                factors.insert(f.clone(), left);
            }
        }
        RationalFunction {
            num,
            den: Denominator {
                mono: self.den.mono.clone(),
                factors,
            },
        }
        .normalize()
    }

    /// Simultaneous substitution `v -> value` into a polynomial.
    pub fn subs_poly(p: &Poly, values: &[(Var, RationalFunction)]) -> RationalFunction {
        let index: HashMap<Var, usize> = values
            .iter()
            .enumerate()
            .map(|(i, (v, _))| (*v, i))
            .collect();
        let degs: Vec<u32> = values.iter().map(|(v, _)| p.degree_in(*v) as u32).collect();
        let num_pows: Vec<Vec<Poly>> = values
            .iter()
            .zip(&degs)
            .map(|((_, r), &d)| powers(&r.num, d))
            .collect();
        let den_pows: Vec<Vec<Poly>> = values
            .iter()
            .zip(&degs)
            .map(|((_, r), &d)| {
                if r.den.is_one() {
                    vec![Poly::one(); d as usize + 1]
                } else {
                    powers(&r.den.expand(), d)
                }
            })
            .collect();
        let mut num = Poly::zero();
        for (m, c) in p.terms() {
            let mut rest = Monomial::one();
            let mut exps = vec![0u32; values.len()];
            for (v, e) in m.iter() {
                match index.get(&v) {
                    Some(&i) => exps[i] = e as u32,
                    None => rest = rest.mul(&Monomial::var(v, e)),
                }
            }
            let mut t = Poly::term(rest, c.clone());
            for i in 0..values.len() {
                if degs[i] == 0 {
                    continue;
                }
                t = &t * &num_pows[i][exps[i] as usize];
                t = &t * &den_pows[i][(degs[i] - exps[i]) as usize];
            }
            num = &num + &t;
        }
        let den = values
            .iter()
            .zip(&degs)
            .fold(Denominator::one(), |acc, ((_, r), &d)| {
                acc.mul(&r.den.pow(d))
            });
        RationalFunction { num, den }.normalize()
    }

    /// Simultaneous substitution; fails if a denominator factor vanishes.
    pub fn subs(&self, values: &[(Var, RationalFunction)]) -> Result<Self> {
        let mut out = Self::subs_poly(&self.num, values);
        if !self.den.mono.is_one() {
            let m = Self::subs_poly(&Poly::term(self.den.mono.clone(), Q::one()), values);
            out = out
                .div(&m)
                .map_err(|_| Error::Degenerate("monomial denominator vanishes".into()))?;
        }
        for (f, &k) in &self.den.factors {
            let fv = Self::subs_poly(f, values);
            if fv.is_zero() {
                return Err(Error::Degenerate(
                    "denominator factor vanishes under substitution".into(),
                ));
            }
            out = out.div(&fv.pow(k as i32)?)?;
        }
        Ok(out)
    }

    /// Substitutes rational constants; fails if the denominator vanishes.
    pub fn eval_partial(&self, values: &[(Var, Q)]) -> Result<Self> {
        let vals: Vec<(Var, RationalFunction)> = values
            .iter()
            .map(|(v, c)| (*v, RationalFunction::constant(c.clone())))
            .collect();
        self.subs(&vals)
    }

    /// Numeric value; every occurring variable must be assigned.
    pub fn eval(&self, values: &[(Var, Q)]) -> Result<Q> {
        let r = self.eval_partial(values)?;
        r.as_constant()
            .ok_or_else(|| Error::Domain("evaluation left free variables".into()))
    }

    pub fn display<'a>(&'a self, reg: &'a Registry) -> impl fmt::Display + 'a {
        RfDisplay { r: self, reg }
    }

    pub fn canonical_string(&self, reg: &Registry) -> String {
        self.display(reg).to_string()
    }
}

fn powers(p: &Poly, d: u32) -> Vec<Poly> {
    let mut out = Vec::with_capacity(d as usize + 1);
    out.push(Poly::one());
    for k in 1..=d as usize {
        let next = &out[k - 1] * p;
        out.push(next);
    }
    out
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        if self.num.is_zero() || other.num.is_zero() {
            return self.num.is_zero() && other.num.is_zero();
        }
        let lcm = self.den.lcm(&other.den);
        let lhs = &self.num * &self.den.cofactor(&lcm).expand();
        let rhs = &other.num * &other.den.cofactor(&lcm).expand();
        lhs == rhs
    }
}

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl From<Var> for RationalFunction {
    fn from(v: Var) -> Self {
        Self::var(v)
    }
}

impl From<Q> for RationalFunction {
    fn from(c: Q) -> Self {
        Self::constant(c)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::sum([self, rhs])
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction {
            num: &self.num * &rhs.num,
            den: self.den.mul(&rhs.den),
        }
        .normalize()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?}) / ({:?})", self.num, self.den.expand())
        }
    }
}

struct RfDisplay<'a> {
    r: &'a RationalFunction,
    reg: &'a Registry,
}

impl fmt::Display for RfDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r.den.is_one() {
            return write!(f, "{}", self.r.num.display(self.reg));
        }
        write!(f, "({}) / (", self.r.num.display(self.reg))?;
        let mut first = true;
        if !self.r.den.mono.is_one() {
            write!(f, "{}", self.r.den.mono.display(self.reg))?;
            first = false;
        }
        for (p, k) in &self.r.den.factors {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            write!(f, "({})", p.display(self.reg))?;
            if *k != 1 {
                write!(f, "^{k}")?;
            }
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::poly::q_frac;

    #[test]
    fn shared_factors_use_lcm() {
        let mut reg = Registry::new();
        let x = RF::var(reg.var("x"));
        let y = RF::var(reg.var("y"));
        let d = (&x - &y).inv().unwrap();
        let s = &d + &d;
        assert_eq!(s.denom_factors().count(), 1);
        assert_eq!(s, d.scale(&q(2)));
    }

    #[test]
    fn telescoping_identity() {
        let mut reg = Registry::new();
        let x = RF::var(reg.var("x"));
        let one = RF::one();
        // 1/x - 1/(x+1) = 1/(x(x+1))
        let lhs = &x.inv().unwrap() - &(&x + &one).inv().unwrap();
        let rhs = (&x * &(&x + &one)).inv().unwrap();
        assert_eq!(lhs, rhs);
        assert_ne!(lhs, x.inv().unwrap());
    }

    #[test]
    fn reduce_cancels_divisible_factors() {
        let mut reg = Registry::new();
        let x = RF::var(reg.var("x"));
        let y = RF::var(reg.var("y"));
        let num = &(&x - &y) * &(&x + &y);
        let r = num.div(&(&x - &y)).unwrap();
        let red = r.reduce();
        assert!(red.is_polynomial());
        assert_eq!(red, &x + &y);
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(RF::zero().inv().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn substitution_and_evaluation() {
        let mut reg = Registry::new();
        let xv = reg.var("x");
        let yv = reg.var("y");
        let x = RF::var(xv);
        let y = RF::var(yv);
        let r = (&x + &y).div(&(&x - &y)).unwrap();
        // x -> 1/y
        let s = r.subs(&[(xv, y.inv().unwrap())]).unwrap();
        let expected = (&RF::one() + &(&y * &y))
            .div(&(&RF::one() - &(&y * &y)))
            .unwrap();
        assert_eq!(s, expected);
        assert_eq!(r.eval(&[(xv, q(3)), (yv, q(1))]).unwrap(), q(2));
        assert!(r.eval_partial(&[(xv, q(1)), (yv, q(1))]).is_err());
        assert_eq!(r.eval(&[(xv, q(1)), (yv, q_frac(1, 2))]).unwrap(), q(3));
    }
}
