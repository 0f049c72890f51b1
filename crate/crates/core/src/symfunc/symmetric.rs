use std::collections::HashMap;

use num_traits::One;

use super::monomial::{Monomial, Var};
use super::poly::{Poly, Q};
use super::rational::RationalFunction;
use crate::error::{Error, Result};

/// Weakly decreasing list of nonnegative integers.
///
/// Trailing zeros are significant only through [`Partition::len`]; use
/// [`Partition::padded`] to compare partitions of different lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    /// Accepts signed input, rejecting negative or increasing entries.
    pub fn from_signed(parts: &[i64]) -> Result<Self> {
        let parts: Vec<u32> = parts
            .iter()
            .map(|&p| u32::try_from(p).map_err(|_| Error::Domain(format!("negative part {p}"))))
            .collect::<Result<_>>()?;
        Self::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Pads with zeros (or strips trailing zeros) to length `m`.
    pub fn padded(&self, m: usize) -> Result<Self> {
        if self.parts.iter().skip(m).any(|&p| p != 0) {
            return Err(Error::Domain(format!(
                "partition {:?} has more than {m} parts",
                self.parts
            )));
        }
        let mut parts = self.parts.clone();
        parts.resize(m, 0);
        Ok(Partition { parts })
    }
}

/// All partitions of `weight` with at most `len` parts, padded to `len`,
/// in reverse lexicographic order.
pub fn partitions(weight: u32, len: usize) -> Vec<Partition> {
    fn go(rest: u32, max: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if slots == 0 {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
            }
            return;
        }
        for p in (0..=rest.min(max)).rev() {
            if (p as u64) * (slots as u64) < rest as u64 {
                break;
            }
            cur.push(p);
            go(rest - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(weight, weight, len, &mut Vec::new(), &mut out);
    out
}

/// Partitions of every weight `0..=max_weight` with at most `len` parts.
pub fn partitions_up_to(max_weight: u32, len: usize) -> Vec<Partition> {
    (0..=max_weight).flat_map(|w| partitions(w, len)).collect()
}

fn var_polys(vars: &[Var]) -> Vec<Poly> {
    vars.iter().map(|&v| Poly::var(v)).collect()
}

/// `e_k` of arbitrary polynomial values.
pub fn elementary_of(k: usize, vals: &[Poly]) -> Poly {
    if k > vals.len() {
        return Poly::zero();
    }
    let mut e = vec![Poly::zero(); k + 1];
    e[0] = Poly::one();
    for x in vals {
        for j in (1..=k).rev() {
            let add = &e[j - 1] * x;
            e[j] = &e[j] + &add;
        }
    }
    e.swap_remove(k)
}

/// `h_k` of arbitrary polynomial values.
pub fn complete_of(k: usize, vals: &[Poly]) -> Poly {
    let mut h = vec![Poly::zero(); k + 1];
    h[0] = Poly::one();
    for x in vals {
        for j in 1..=k {
            let add = &h[j - 1] * x;
            h[j] = &h[j] + &add;
        }
    }
    h.swap_remove(k)
}

/// `e_k` of rational-function values.
pub fn elementary_rf(k: usize, vals: &[RationalFunction]) -> RationalFunction {
    if k > vals.len() {
        return RationalFunction::zero();
    }
    let mut e = vec![RationalFunction::zero(); k + 1];
    e[0] = RationalFunction::one();
    for x in vals {
        for j in (1..=k).rev() {
            let add = &e[j - 1] * x;
            e[j] = &e[j] + &add;
        }
    }
    e.swap_remove(k)
}

/// `h_k` of rational-function values.
pub fn complete_rf(k: usize, vals: &[RationalFunction]) -> RationalFunction {
    let mut h = vec![RationalFunction::zero(); k + 1];
    h[0] = RationalFunction::one();
    for x in vals {
        for j in 1..=k {
            let add = &h[j - 1] * x;
            h[j] = &h[j] + &add;
        }
    }
    h.swap_remove(k)
}

pub fn elementary_symmetric(k: i64, vars: &[Var]) -> Result<Poly> {
    if k < 0 || k as usize > vars.len() {
        return Err(Error::Domain(format!(
            "e_{k} needs 0 <= k <= {}",
            vars.len()
        )));
    }
    Ok(elementary_of(k as usize, &var_polys(vars)))
}

pub fn complete_homogeneous(k: i64, vars: &[Var]) -> Result<Poly> {
    if k < 0 {
        return Err(Error::Domain(format!("h_{k} needs k >= 0")));
    }
    Ok(complete_of(k as usize, &var_polys(vars)))
}

/// Determinant by Laplace expansion along the first row, memoized on the
/// set of remaining columns.
pub fn determinant(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "square matrix expected");
    assert!(n <= 20, "determinant size too large");
    fn minor(m: &[Vec<Poly>], row: usize, cols: u32, memo: &mut HashMap<u32, Poly>) -> Poly {
        if row == m.len() {
            return Poly::one();
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let mut acc = Poly::zero();
        let mut sign_pos = true;
        for c in 0..m.len() {
            if cols & (1 << c) == 0 {
                continue;
            }
            if !m[row][c].is_zero() {
                let sub = minor(m, row + 1, cols & !(1 << c), memo);
                let t = &m[row][c] * &sub;
                acc = if sign_pos { &acc + &t } else { &acc - &t };
            }
            sign_pos = !sign_pos;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    minor(m, 0, (1u32 << n) - 1, &mut HashMap::new())
}

/// `Π_{i<j} (x_i - x_j)`.
pub fn vandermonde(vars: &[Var]) -> Poly {
    let xs = var_polys(vars);
    let mut out = Poly::one();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            out = &out * &(&xs[i] - &xs[j]);
        }
    }
    out
}

/// Schur polynomial by the bialternant formula
/// `det(x_j^{m-i+ν_i}) / det(x_j^{m-i})`.
///
/// The quotient is taken one linear factor `x_i - x_j` at a time; a nonzero
/// remainder is reported as an internal inconsistency.
pub fn schur(nu: &Partition, vars: &[Var]) -> Result<Poly> {
    let m = vars.len();
    if nu.len() != m {
        return Err(Error::Domain(format!(
            "partition of length {} for {m} variables",
            nu.len()
        )));
    }
    let alt: Vec<Vec<Poly>> = (0..m)
        .map(|i| {
            let e = (m - 1 - i) as u32 + nu.parts[i];
            vars.iter()
                .map(|&v| Poly::term(Monomial::var(v, e as u16), Q::one()))
                .collect()
        })
        .collect();
    let mut p = determinant(&alt);
    for i in 0..m {
        for j in i + 1..m {
            let lin = &Poly::var(vars[i]) - &Poly::var(vars[j]);
            p = p.div_exact(&lin).ok_or_else(|| {
                Error::Inconsistent("bialternant not divisible by Vandermonde".into())
            })?;
        }
    }
    Ok(p)
}

/// Schur polynomial by the Jacobi–Trudi determinant `det(h_{ν_i - i + j})`.
pub fn jacobi_trudi(nu: &Partition, vars: &[Var]) -> Poly {
    let m = nu.len();
    let xs = var_polys(vars);
    let top = nu.parts.first().copied().unwrap_or(0) as usize + m;
    let hs: Vec<Poly> = (0..=top).map(|k| complete_of(k, &xs)).collect();
    let mat: Vec<Vec<Poly>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let k = nu.parts[i] as i64 - i as i64 + j as i64;
                    if k < 0 {
                        Poly::zero()
                    } else {
                        hs[k as usize].clone()
                    }
                })
                .collect()
        })
        .collect();
    determinant(&mat)
}

/// Evaluates `s_ν` at arbitrary rational-function arguments.
///
/// The Schur polynomial is built in placeholder variables `Var(0..m)` and
/// substituted simultaneously, so the placeholders may coincide with
/// variables occurring in `vals`.
pub fn schur_rf(nu: &Partition, vals: &[RationalFunction]) -> Result<RationalFunction> {
    let slots: Vec<Var> = (0..vals.len()).map(|i| Var(i as u16)).collect();
    let s = schur(nu, &slots)?;
    Ok(RationalFunction::subs_poly(&s, &slots_with(&slots, vals)))
}

fn slots_with(slots: &[Var], vals: &[RationalFunction]) -> Vec<(Var, RationalFunction)> {
    slots.iter().copied().zip(vals.iter().cloned()).collect()
}

/// Value at `eval_at` of the polynomial of degree `< points.len()` through
/// the given `(node, value)` pairs.
pub fn lagrange_reconstruct(
    points: &[(RationalFunction, RationalFunction)],
    eval_at: &RationalFunction,
) -> Result<RationalFunction> {
    let mut terms = Vec::with_capacity(points.len());
    for (k, (xk, yk)) in points.iter().enumerate() {
        let mut num = yk.clone();
        let mut den = RationalFunction::one();
        for (a, (xa, _)) in points.iter().enumerate() {
            if a == k {
                continue;
            }
            let diff = xk - xa;
            if diff.is_zero() {
                return Err(Error::Degenerate(format!(
                    "interpolation nodes {k} and {a} coincide"
                )));
            }
            num = &num * &(eval_at - xa);
            den = &den * &diff;
        }
        terms.push(num.div(&den)?);
    }
    Ok(RationalFunction::sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::monomial::Registry;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn small_examples() {
        let mut reg = Registry::new();
        let x = reg.vars("x", 3);
        let e2 = elementary_symmetric(2, &x).unwrap();
        assert_eq!(e2.display(&reg).to_string(), "x1*x2 + x1*x3 + x2*x3");
        assert!(elementary_symmetric(0, &x[..2]).unwrap().is_one());
        assert!(elementary_symmetric(4, &x).is_err());
        assert!(complete_homogeneous(-1, &x).is_err());
        let h2 = complete_homogeneous(2, &x[..2]).unwrap();
        assert_eq!(h2.display(&reg).to_string(), "x1^2 + x1*x2 + x2^2");
        assert_eq!(schur(&p(&[2, 0]), &x[..2]).unwrap(), h2);
        assert!(schur(&p(&[0, 0]), &x[..2]).unwrap().is_one());
    }

    #[test]
    fn partition_enumeration() {
        assert_eq!(partitions(4, 2).len(), 3);
        assert_eq!(partitions(4, 4).len(), 5);
        assert_eq!(partitions(0, 3), vec![p(&[0, 0, 0])]);
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(p(&[2, 1]).padded(4).unwrap(), p(&[2, 1, 0, 0]));
        assert!(p(&[2, 1]).padded(1).is_err());
    }

    #[test]
    fn determinant_matches_vandermonde() {
        let mut reg = Registry::new();
        let x = reg.vars("x", 4);
        let m: Vec<Vec<Poly>> = (0..4)
            .map(|i| {
                x.iter()
                    .map(|&v| Poly::term(Monomial::var(v, 3 - i as u16), Q::one()))
                    .collect()
            })
            .collect();
        assert_eq!(determinant(&m), vandermonde(&x));
    }

    #[test]
    fn interpolation_reproduces_square() {
        let mut reg = Registry::new();
        let x = reg.vars("x", 3);
        let y = RationalFunction::var(reg.var("y"));
        let pts: Vec<_> = x
            .iter()
            .map(|&v| {
                let r = RationalFunction::var(v);
                (r.clone(), &r * &r)
            })
            .collect();
        assert_eq!(lagrange_reconstruct(&pts, &y).unwrap(), &y * &y);
        let dup = vec![pts[0].clone(), pts[0].clone()];
        assert!(matches!(
            lagrange_reconstruct(&dup, &y),
            Err(Error::Degenerate(_))
        ));
    }
}
