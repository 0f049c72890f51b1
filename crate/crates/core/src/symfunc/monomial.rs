use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

/// Index of a variable in a [`Registry`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u16);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Append-only table of variable names.
///
/// Polynomials only store indices, so a registry is needed to print them but
/// not to compute with them. Indices handed out are never reused or reordered.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    names: Vec<String>,
    index: HashMap<String, Var>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the variable called `name`, registering it if needed.
    pub fn var(&mut self, name: &str) -> Var {
        if let Some(&v) = self.index.get(name) {
            return v;
        }
        let v = Var(u16::try_from(self.names.len()).expect("too many variables"));
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), v);
        v
    }

    /// Registers `prefix1, ..., prefix{count}`.
    pub fn vars(&mut self, prefix: &str, count: usize) -> Vec<Var> {
        (1..=count)
            .map(|i| self.var(&format!("{prefix}{i}")))
            .collect()
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: Var) -> &str {
        self.names.get(v.index()).map(String::as_str).unwrap_or("?")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// A power product of variables, stored densely by variable index with the
/// trailing zero exponents trimmed.
///
/// Ordering is graded lexicographic: total degree first, then the exponent of
/// the lowest-indexed variable where the two differ.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    exps: SmallVec<[u16; 16]>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var, exp: u16) -> Self {
        let mut m = Self::one();
        m.set(v, exp);
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        let mut m = Monomial {
            degree: exps.iter().map(|&e| e as u32).sum(),
            exps: exps.iter().copied().collect(),
        };
        m.trim();
        m
    }

    fn trim(&mut self) {
        while self.exps.last() == Some(&0) {
            self.exps.pop();
        }
    }

    fn set(&mut self, v: Var, exp: u16) {
        let i = v.index();
        if i >= self.exps.len() {
            if exp == 0 {
                return;
            }
            self.exps.resize(i + 1, 0);
        }
        self.degree = self.degree - self.exps[i] as u32 + exp as u32;
        self.exps[i] = exp;
        self.trim();
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.exps.get(v.index()).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// `(variable, exponent)` pairs with nonzero exponent, in index order.
    pub fn iter(&self) -> impl Iterator<Item = (Var, u16)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (Var(i as u16), e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.exps.len() >= other.exps.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut exps = long.exps.clone();
        for (e, s) in exps.iter_mut().zip(short.exps.iter()) {
            *e = e.checked_add(*s).expect("exponent overflow");
        }
        Monomial {
            degree: self.degree + other.degree,
            exps,
        }
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        let k16 = u16::try_from(k).expect("exponent overflow");
        Monomial {
            degree: self.degree * k,
            exps: self
                .exps
                .iter()
                .map(|&e| e.checked_mul(k16).expect("exponent overflow"))
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.len() <= other.exps.len()
            && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut exps = self.exps.clone();
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e -= *o;
        }
        let mut m = Monomial {
            degree: self.degree - other.degree,
            exps,
        };
        m.trim();
        Some(m)
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u16; 16]> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| *a.min(b))
            .collect();
        Monomial::from_exponents(&exps)
    }

    /// Componentwise maximum.
    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        let exps: SmallVec<[u16; 16]> = (0..n)
            .map(|i| {
                let a = self.exps.get(i).copied().unwrap_or(0);
                let b = other.exps.get(i).copied().unwrap_or(0);
                a.max(b)
            })
            .collect();
        Monomial::from_exponents(&exps)
    }

    /// Drops the given variable.
    pub fn without(&self, v: Var) -> Monomial {
        let mut m = self.clone();
        m.set(v, 0);
        m
    }

    pub fn display<'a>(&'a self, reg: &'a Registry) -> impl fmt::Display + 'a {
        MonomialDisplay { m: self, reg }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            let n = self.exps.len().max(other.exps.len());
            for i in 0..n {
                let a = self.exps.get(i).copied().unwrap_or(0);
                let b = other.exps.get(i).copied().unwrap_or(0);
                match a.cmp(&b) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(v, e)| {
                if e == 1 {
                    format!("v{}", v.0)
                } else {
                    format!("v{}^{}", v.0, e)
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

struct MonomialDisplay<'a> {
    m: &'a Monomial,
    reg: &'a Registry,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in self.m.iter() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", self.reg.name(v))?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let x = Var(0);
        let y = Var(1);
        // degree dominates
        assert!(Monomial::var(y, 2) > Monomial::var(x, 1));
        // then lex with x > y
        assert!(Monomial::var(x, 2) > Monomial::var(x, 1).mul(&Monomial::var(y, 1)));
        assert!(Monomial::var(x, 1).mul(&Monomial::var(y, 1)) > Monomial::var(y, 2));
    }

    #[test]
    fn trimming_makes_equal_monomials_equal() {
        let a = Monomial::from_exponents(&[1, 0, 0]);
        let b = Monomial::var(Var(0), 1);
        assert_eq!(a, b);
        let c = Monomial::var(Var(3), 2)
            .div(&Monomial::var(Var(3), 2))
            .unwrap();
        assert!(c.is_one());
        assert_eq!(c, Monomial::one());
    }

    #[test]
    fn registry_is_stable() {
        let mut reg = Registry::new();
        let a = reg.var("a");
        let b = reg.var("b");
        assert_eq!(reg.var("a"), a);
        assert_ne!(a, b);
        assert_eq!(reg.name(b), "b");
        assert_eq!(reg.lookup("c"), None);
    }
}
