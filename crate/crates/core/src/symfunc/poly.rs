use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, Registry, Var};

/// Exact rational coefficients.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Sparse multivariate polynomial over Q.
///
/// Terms are kept strictly decreasing in graded-lex order with no zero
/// coefficients, so structural equality is polynomial equality and the term
/// list is the canonical serialization.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Q)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(q(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v, 1), Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly {
                terms: vec![(m, c)],
            }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut acc: HashMap<Monomial, Q> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(Q::zero) += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, Q>) -> Self {
        let mut terms: Vec<(Monomial, Q)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// Returns the value when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.as_slice() {
            [] => Some(Q::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, Q)] {
        &self.terms
    }

    pub fn leading(&self) -> Option<&(Monomial, Q)> {
        self.terms.first()
    }

    pub fn constant_term(&self) -> Q {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Q::zero(),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u16 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    /// Variables that occur with a nonzero exponent.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.iter().map(|(v, _)| v))
            .collect()
    }

    /// Largest monomial dividing every term (1 for the zero polynomial).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |g, (m, _)| g.gcd(m))
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Poly> {
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| t.div(m).map(|d| (d, c.clone())))
            .collect::<Option<Vec<_>>>()?;
        Some(Poly { terms })
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    ///
    /// Uses leading-term reduction: if `d` divides `self` the leading term of
    /// every intermediate remainder is divisible by the leading term of `d`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dlead, dcoef) = d.leading()?;
        if d.len() == 1 {
            let inv = dcoef.recip();
            return self.div_monomial(dlead).map(|p| p.scale(&inv));
        }
        let mut rem: BTreeMap<Monomial, Q> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Monomial, Q)> = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.div(dlead)?;
            let qc = &c / dcoef;
            for (dm, dc) in d.terms.iter().skip(1) {
                let key = dm.mul(&qm);
                let delta = &qc * dc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                }
            }
            quot.push((qm, qc));
        }
        // quotient terms were produced in decreasing order
        Some(Poly { terms: quot })
    }

    /// Substitutes rational constants for some variables.
    pub fn eval_partial(&self, values: &[(Var, Q)]) -> Poly {
        let lookup: HashMap<Var, &Q> = values.iter().map(|(v, c)| (*v, c)).collect();
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut coeff = c.clone();
            let mut rest = Monomial::one();
            for (v, e) in m.iter() {
                match lookup.get(&v) {
                    Some(val) => coeff *= num_traits::pow(Q::clone(val), e as usize),
                    None => rest = rest.mul(&Monomial::var(v, e)),
                }
            }
            (rest, coeff)
        }))
    }

    /// Full numeric evaluation; `None` if a variable is left unassigned.
    pub fn eval(&self, values: &[(Var, Q)]) -> Option<Q> {
        self.eval_partial(values).as_constant()
    }

    /// Groups terms by their exponents in `vars`.
    ///
    /// Returns `exponent vector -> coefficient polynomial in the other variables`.
    pub fn split_by(&self, vars: &[Var]) -> BTreeMap<Vec<u32>, Poly> {
        let mut groups: BTreeMap<Vec<u32>, Vec<(Monomial, Q)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<u32> = vars.iter().map(|&v| m.exp(v) as u32).collect();
            let mut rest = m.clone();
            for &v in vars {
                rest = rest.without(v);
            }
            groups.entry(key).or_default().push((rest, c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, t)| (k, Poly::from_terms(t)))
            .collect()
    }

    /// Canonical text: graded-lex sorted term list.
    pub fn canonical_string(&self, reg: &Registry) -> String {
        self.display(reg).to_string()
    }

    pub fn display<'a>(&'a self, reg: &'a Registry) -> impl fmt::Display + 'a {
        PolyDisplay { p: self, reg }
    }
}

impl From<Q> for Poly {
    fn from(c: Q) -> Self {
        Poly::constant(c)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

fn merge(a: &Poly, b: &Poly, negate_b: bool) -> Poly {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let mut i = 0;
    let mut j = 0;
    while i < a.terms.len() && j < b.terms.len() {
        let (ma, ca) = &a.terms[i];
        let (mb, cb) = &b.terms[j];
        match ma.cmp(mb) {
            std::cmp::Ordering::Greater => {
                out.push((ma.clone(), ca.clone()));
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push((mb.clone(), if negate_b { -cb } else { cb.clone() }));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = if negate_b { ca - cb } else { ca + cb };
                if !c.is_zero() {
                    out.push((ma.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a.terms[i..].iter().cloned());
    out.extend(
        b.terms[j..]
            .iter()
            .map(|(m, c)| (m.clone(), if negate_b { -c } else { c.clone() })),
    );
    Poly { terms: out }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        merge(self, rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        merge(self, rhs, true)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if rhs.terms.len() == 1 {
            let (m, c) = &rhs.terms[0];
            return Poly {
                terms: self.terms.iter().map(|(t, k)| (t.mul(m), k * c)).collect(),
            };
        }
        if self.terms.len() == 1 {
            return rhs * self;
        }
        let mut acc: HashMap<Monomial, Q> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let prod = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += prod,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        Poly::from_map(acc)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |a, b| &a + &b)
    }
}

impl std::iter::Product for Poly {
    fn product<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::one(), |a, b| &a * &b)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{c}*{m:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

struct PolyDisplay<'a> {
    p: &'a Poly,
    reg: &'a Registry,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.p.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", m.display(self.reg))?;
            } else {
                write!(f, "{abs}*{}", m.display(self.reg))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> (Registry, Poly, Poly) {
        let mut reg = Registry::new();
        let x = Poly::var(reg.var("x"));
        let y = Poly::var(reg.var("y"));
        (reg, x, y)
    }

    #[test]
    fn expands_square() {
        let (reg, x, y) = xy();
        let s = (&x + &y).pow(2);
        assert_eq!(s.canonical_string(&reg), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn exact_division_and_failure() {
        let (_, x, y) = xy();
        let a = &(&x - &y) * &(&(&x * &x) + &y);
        assert_eq!(a.div_exact(&(&x - &y)), Some(&(&x * &x) + &y));
        assert_eq!((&a + &Poly::one()).div_exact(&(&x - &y)), None);
        assert_eq!(a.div_exact(&Poly::zero()), None);
    }

    #[test]
    fn zero_coefficients_vanish() {
        let (_, x, y) = xy();
        let d = &(&x + &y) - &(&y + &x);
        assert!(d.is_zero());
        assert_eq!(d, Poly::zero());
    }

    #[test]
    fn split_by_expansion_variable() {
        let (reg, x, y) = xy();
        let xv = reg.lookup("x").unwrap();
        let p = &(&x * &y) + &(&y + &Poly::int(3));
        let parts = p.split_by(&[xv]);
        assert_eq!(parts[&vec![1]], y);
        assert_eq!(parts[&vec![0]], &y + &Poly::int(3));
    }

    #[test]
    fn numeric_evaluation() {
        let (reg, x, y) = xy();
        let p = &(&x * &x) - &(&y * &Poly::int(3));
        let v = p.eval(&[
            (reg.lookup("x").unwrap(), q(2)),
            (reg.lookup("y").unwrap(), q_frac(1, 3)),
        ]);
        assert_eq!(v, Some(q(3)));
    }
}
