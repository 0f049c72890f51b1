//! Level-prime spectral weight: the matrices `F` and `G^{-T}`, the trace
//! `tr(F^T G^{-T})`, its closed form, and the two residue evaluations.
//!
//! Indices follow the 1-based convention `1..=n+1` in documentation and in
//! [`WeightMatrix::entry`]; storage is 0-based. `T1` and `T2` stand for
//! `q^{-1/2-s_1}` and `q^{-1/2-s_2}`, and `Q = V^2` for `q`.

use crate::error::{Error, Result};
use crate::satake::{zeta_local, SatakeData};
use crate::symfunc::{elementary_rf, lagrange_reconstruct, Registry, Var, RF};

#[derive(Clone, Debug)]
pub struct ResidueContext {
    pub n: usize,
    /// Parameters `a_1..a_n`.
    pub a: SatakeData,
    /// Parameters `b_1..b_n` of the contragredient.
    pub b: SatakeData,
    /// Parameters `x_1..x_{n+1}` of the GL(n+1) representation.
    pub x: SatakeData,
    pub t1: Var,
    pub t2: Var,
    pub v: Var,
}

impl ResidueContext {
    /// Everything symbolic: `a1..an`, `b1..bn`, `x1..x{n+1}`, `T1`, `T2`, `V`.
    pub fn symbolic(reg: &mut Registry, n: usize) -> Result<Self> {
        check_n(n)?;
        let a = SatakeData::symbolic(reg, "a", n, false)?;
        let b = SatakeData::symbolic(reg, "b", n, false)?;
        let x = SatakeData::symbolic(reg, "x", n + 1, false)?;
        Ok(ResidueContext {
            n,
            a,
            b,
            x,
            t1: reg.var("T1"),
            t2: reg.var("T2"),
            v: reg.var("V"),
        })
    }

    /// Given parameter data with `T1`, `T2`, `V` left symbolic.
    pub fn with_params(
        reg: &mut Registry,
        a: SatakeData,
        b: SatakeData,
        x: SatakeData,
    ) -> Result<Self> {
        let n = a.rank();
        check_n(n)?;
        if b.rank() != n || x.rank() != n + 1 {
            return Err(Error::Domain(format!(
                "ranks must be (n, n, n+1), got ({n}, {}, {})",
                b.rank(),
                x.rank()
            )));
        }
        Ok(ResidueContext {
            n,
            a,
            b,
            x,
            t1: reg.var("T1"),
            t2: reg.var("T2"),
            v: reg.var("V"),
        })
    }

    pub fn q(&self) -> RF {
        RF::var_pow(self.v, 2)
    }

    fn q_pow(&self, k: i32) -> RF {
        RF::var_pow(self.v, 2 * k)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("n must be at least 2, got {n}")));
    }
    Ok(())
}

/// Square matrix of rational functions, stored 0-based.
#[derive(Clone, Debug)]
pub struct WeightMatrix {
    entries: Vec<Vec<RF>>,
}

impl WeightMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Entry `(i, j)` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> &RF {
        &self.entries[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<RF>] {
        &self.entries
    }
}

/// `F_{ij} = T1^{n+1-i} T2^{n+1-j} e_{n+1-i}(a) e_{n+1-j}(b)`.
pub fn build_f(ctx: &ResidueContext) -> WeightMatrix {
    let n = ctx.n;
    let ea: Vec<RF> = (0..=n)
        .map(|k| &elementary_rf(k, ctx.a.params()) * &RF::var_pow(ctx.t1, k as i32))
        .collect();
    let eb: Vec<RF> = (0..=n)
        .map(|k| &elementary_rf(k, ctx.b.params()) * &RF::var_pow(ctx.t2, k as i32))
        .collect();
    let entries = (0..=n)
        .map(|i| (0..=n).map(|j| &ea[n - i] * &eb[n - j]).collect())
        .collect();
    WeightMatrix { entries }
}

/// `1 / [Π_{α≠k}(x_k - x_α) · Π_β (1 - Q^{-1} x_k / x_β)]` for each `k`.
fn kernels(ctx: &ResidueContext, xs: &[RF]) -> Result<Vec<RF>> {
    let q_inv = ctx.q_pow(-1);
    let one = RF::one();
    let mut out = Vec::with_capacity(xs.len());
    for (k, xk) in xs.iter().enumerate() {
        let mut factors = Vec::with_capacity(2 * xs.len());
        for (alpha, xa) in xs.iter().enumerate() {
            if alpha != k {
                let d = xk - xa;
                if d.is_zero() {
                    return Err(Error::Degenerate(format!("x{} = x{}", k + 1, alpha + 1)));
                }
                factors.push(d);
            }
        }
        for (beta, xb) in xs.iter().enumerate() {
            let d = &one - &(&(&q_inv * xk) * &xb.inv()?);
            if d.is_zero() {
                return Err(Error::Degenerate(format!(
                    "1 - x{}/(q x{}) vanishes",
                    k + 1,
                    beta + 1
                )));
            }
            factors.push(d);
        }
        out.push(RF::product(&factors).inv()?);
    }
    Ok(out)
}

/// `(G^{-T})_{ij} = ζ(n+1)^{-1} Q^{n+1-j} Σ_k (-x_k)^{n+j-i} K_k` with `K_k`
/// the kernel above.
pub fn build_ginv_t(ctx: &ResidueContext) -> Result<WeightMatrix> {
    let n = ctx.n;
    let xs = ctx.x.params();
    let ks = kernels(ctx, xs)?;
    let zeta_inv = zeta_local(n as i64 + 1, ctx.v)?.inv()?;
    let neg_x: Vec<RF> = xs.iter().map(|x| -x).collect();
    // powers 0..=2n of -x_k
    let pows: Vec<Vec<RF>> = neg_x
        .iter()
        .map(|x| {
            let mut p = vec![RF::one()];
            for e in 1..=2 * n {
                let next = &p[e - 1] * x;
                p.push(next);
            }
            p
        })
        .collect();
    let mut entries = vec![vec![RF::zero(); n + 1]; n + 1];
    for (i, row) in entries.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let (ip, jp) = (i + 1, j + 1);
            let e = n + jp - ip;
            let terms: Vec<RF> = (0..=n).map(|k| &pows[k][e] * &ks[k]).collect();
            let s = RF::sum(&terms);
            *cell = RF::product([&zeta_inv, &ctx.q_pow((n + 1 - jp) as i32), &s]);
        }
    }
    Ok(WeightMatrix { entries })
}

/// `Σ_{i,j} F_{ij} (G^{-T})_{ij}`, the trace of `F^T G^{-T}`.
pub fn spectral_weight_trace(ctx: &ResidueContext) -> Result<RF> {
    let f = build_f(ctx);
    let g = build_ginv_t(ctx)?;
    let terms: Vec<RF> = f
        .entries
        .iter()
        .zip(&g.entries)
        .flat_map(|(fr, gr)| fr.iter().zip(gr).map(|(a, b)| a * b))
        .collect();
    Ok(RF::sum(&terms))
}

/// Closed form evaluated at arbitrary `x` values:
/// `(-1)^n ζ(n+1)^{-1} Σ_k Π_γ(1 - x_k T1 a_γ) Π_δ(x_k - T2 Q b_δ) K_k`.
pub fn closed_form_at(ctx: &ResidueContext, xs: &[RF]) -> Result<RF> {
    let ks = kernels(ctx, xs)?;
    let one = RF::one();
    let t1 = RF::var(ctx.t1);
    let t2q = &RF::var(ctx.t2) * &ctx.q();
    let mut terms = Vec::with_capacity(xs.len());
    for (xk, kk) in xs.iter().zip(&ks) {
        let mut factors: Vec<RF> = ctx
            .a
            .params()
            .iter()
            .map(|a| &one - &RF::product([xk, &t1, a]))
            .collect();
        factors.extend(ctx.b.params().iter().map(|b| xk - &(&t2q * b)));
        factors.push(kk.clone());
        terms.push(RF::product(&factors));
    }
    let sign = if ctx.n.is_multiple_of(2) {
        RF::one()
    } else {
        RF::int(-1)
    };
    let zeta_inv = zeta_local(ctx.n as i64 + 1, ctx.v)?.inv()?;
    Ok(RF::product([&sign, &zeta_inv, &RF::sum(&terms)]))
}

pub fn spectral_weight_closed(ctx: &ResidueContext) -> Result<RF> {
    closed_form_at(ctx, ctx.x.params())
}

/// `x_β = Q^{-1} (T1 a_β)^{-1}` for `β ≤ n` and `x_{n+1} = T1^n Q^n`.
pub fn residue_point_1(ctx: &ResidueContext) -> Result<Vec<RF>> {
    let t1 = RF::var(ctx.t1);
    let mut xs = ctx
        .a
        .params()
        .iter()
        .map(|a| RF::product([&ctx.q(), &t1, a]).inv())
        .collect::<Result<Vec<_>>>()?;
    xs.push(&t1.pow(ctx.n as i32)? * &ctx.q_pow(ctx.n as i32));
    Ok(xs)
}

/// `x_δ = b_δ T2 Q` for `δ ≤ n` and `x_{n+1} = Q^{-n} T2^{-n}`.
pub fn residue_point_2(ctx: &ResidueContext) -> Result<Vec<RF>> {
    let t2 = RF::var(ctx.t2);
    let mut xs: Vec<RF> = ctx
        .b
        .params()
        .iter()
        .map(|b| RF::product([b, &t2, &ctx.q()]))
        .collect();
    xs.push((&t2.pow(ctx.n as i32)? * &ctx.q_pow(ctx.n as i32)).inv()?);
    Ok(xs)
}

pub fn residue_eval_1(ctx: &ResidueContext) -> Result<RF> {
    closed_form_at(ctx, &residue_point_1(ctx)?)
}

pub fn residue_eval_2(ctx: &ResidueContext) -> Result<RF> {
    closed_form_at(ctx, &residue_point_2(ctx)?)
}

fn sign_zeta_ratio(ctx: &ResidueContext) -> Result<RF> {
    let ratio = zeta_local(1, ctx.v)?.div(&zeta_local(ctx.n as i64 + 1, ctx.v)?)?;
    Ok(if ctx.n.is_multiple_of(2) {
        ratio
    } else {
        -ratio
    })
}

/// Product of `1 - r` over the given `r`.
fn prod_one_minus(rs: impl IntoIterator<Item = RF>) -> RF {
    let one = RF::one();
    RF::product(&rs.into_iter().map(|r| &one - &r).collect::<Vec<_>>())
}

/// First residue target written in the substituted `x`:
/// `(-1)^n ζ(1)/ζ(n+1) Π_δ(1 - x_{n+1}^{-1} T2 b_δ) / Π_{β≤n}(1 - Q^{-1} x_β x_{n+1}^{-1})`.
pub fn residue_target_1(ctx: &ResidueContext) -> Result<RF> {
    let xs = residue_point_1(ctx)?;
    let n = ctx.n;
    let last_inv = xs[n].inv()?;
    let t2 = RF::var(ctx.t2);
    let num = prod_one_minus(
        ctx.b
            .params()
            .iter()
            .map(|b| RF::product([&last_inv, &t2, b])),
    );
    let q_inv = ctx.q_pow(-1);
    let den = prod_one_minus(xs[..n].iter().map(|x| RF::product([&q_inv, x, &last_inv])));
    Ok(&sign_zeta_ratio(ctx)? * &num.div(&den)?)
}

/// First residue target as a quotient of L-factors: numerator inverse roots
/// `b_δ T2 T1^{-n} Q^{-n}`, denominator inverse roots `a_β^{-1} T1^{-n-1} Q^{-n-2}`.
pub fn residue_target_1_lfactors(ctx: &ResidueContext) -> Result<RF> {
    let n = ctx.n as i32;
    let t1 = RF::var(ctx.t1);
    let t2 = RF::var(ctx.t2);
    let num_shift = RF::product([&t2, &t1.pow(-n)?, &ctx.q_pow(-n)]);
    let den_shift = &t1.pow(-n - 1)? * &ctx.q_pow(-n - 2);
    let num = prod_one_minus(ctx.b.params().iter().map(|b| b * &num_shift));
    let den = prod_one_minus(
        ctx.a
            .params()
            .iter()
            .map(|a| Ok(&a.inv()? * &den_shift))
            .collect::<Result<Vec<_>>>()?,
    );
    Ok(&sign_zeta_ratio(ctx)? * &num.div(&den)?)
}

/// Second residue target:
/// `(-1)^n ζ(1)/ζ(n+1) Π_γ(1 - Q^{-n} T2^{-n} T1 a_γ) / Π_{β≤n}(1 - Q^{-n-1} T2^{-n} x_β^{-1})`
/// with `x_β = b_β T2 Q`.
pub fn residue_target_2(ctx: &ResidueContext) -> Result<RF> {
    let n = ctx.n as i32;
    let xs = residue_point_2(ctx)?;
    let t1 = RF::var(ctx.t1);
    let t2n_inv = RF::var(ctx.t2).pow(-n)?;
    let num_shift = RF::product([&ctx.q_pow(-n), &t2n_inv, &t1]);
    let num = prod_one_minus(ctx.a.params().iter().map(|a| a * &num_shift));
    let den_shift = &ctx.q_pow(-n - 1) * &t2n_inv;
    let den = prod_one_minus(
        xs[..ctx.n]
            .iter()
            .map(|x| Ok(&x.inv()? * &den_shift))
            .collect::<Result<Vec<_>>>()?,
    );
    Ok(&sign_zeta_ratio(ctx)? * &num.div(&den)?)
}

/// Second residue target in L-factor shape: denominator inverse roots
/// `b_β^{-1} Q^{-n-2} T2^{-n-1}`.
pub fn residue_target_2_lfactors(ctx: &ResidueContext) -> Result<RF> {
    let n = ctx.n as i32;
    let t1 = RF::var(ctx.t1);
    let t2 = RF::var(ctx.t2);
    let num_shift = RF::product([&ctx.q_pow(-n), &t2.pow(-n)?, &t1]);
    let num = prod_one_minus(ctx.a.params().iter().map(|a| a * &num_shift));
    let den_shift = &ctx.q_pow(-n - 2) * &t2.pow(-n - 1)?;
    let den = prod_one_minus(
        ctx.b
            .params()
            .iter()
            .map(|b| Ok(&b.inv()? * &den_shift))
            .collect::<Result<Vec<_>>>()?,
    );
    Ok(&sign_zeta_ratio(ctx)? * &num.div(&den)?)
}

/// Interpolation step: `f(X) = Π_δ(X - Q T2 b_δ)` reconstructed from its
/// values at the nodes `x_k` and evaluated at `Q x_{n+1}`, against direct
/// evaluation.
pub fn lagrange_step(ctx: &ResidueContext) -> Result<(RF, RF)> {
    let t2q = &RF::var(ctx.t2) * &ctx.q();
    let f = |z: &RF| {
        RF::product(
            &ctx.b
                .params()
                .iter()
                .map(|b| z - &(&t2q * b))
                .collect::<Vec<_>>(),
        )
    };
    let points: Vec<(RF, RF)> = ctx.x.params().iter().map(|x| (x.clone(), f(x))).collect();
    let at = &ctx.q() * &ctx.x.params()[ctx.n];
    Ok((lagrange_reconstruct(&points, &at)?, f(&at)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::q;

    #[test]
    fn f_corner_entries() {
        let mut reg = Registry::new();
        let ctx = ResidueContext::symbolic(&mut reg, 2).unwrap();
        let f = build_f(&ctx);
        assert_eq!(f.size(), 3);
        assert_eq!(*f.entry(3, 3), RF::one());
        let expected = RF::product([
            &ctx.a.product(),
            &ctx.b.product(),
            &RF::var_pow(ctx.t1, 2),
            &RF::var_pow(ctx.t2, 2),
        ]);
        assert_eq!(*f.entry(1, 1), expected);
    }

    #[test]
    fn n_below_two_is_rejected() {
        let mut reg = Registry::new();
        assert!(matches!(
            ResidueContext::symbolic(&mut reg, 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn coincident_x_is_degenerate() {
        let mut reg = Registry::new();
        let a = SatakeData::symbolic(&mut reg, "a", 2, false).unwrap();
        let b = SatakeData::symbolic(&mut reg, "b", 2, false).unwrap();
        let x = SatakeData::new(vec![RF::int(2), RF::int(2), RF::int(3)], false).unwrap();
        let ctx = ResidueContext::with_params(&mut reg, a, b, x).unwrap();
        assert!(matches!(
            spectral_weight_closed(&ctx),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn closed_form_without_t_variables() {
        let mut reg = Registry::new();
        let ctx = ResidueContext::symbolic(&mut reg, 2).unwrap();
        let h = spectral_weight_closed(&ctx).unwrap();
        let h0 = h.eval_partial(&[(ctx.t1, q(0)), (ctx.t2, q(0))]).unwrap();
        let xs = ctx.x.params();
        let ks = kernels(&ctx, xs).unwrap();
        let terms: Vec<RF> = xs
            .iter()
            .zip(&ks)
            .map(|(x, k)| &x.pow(2).unwrap() * k)
            .collect();
        let expected = &zeta_local(3, ctx.v).unwrap().inv().unwrap() * &RF::sum(&terms);
        assert_eq!(h0, expected);
    }
}
