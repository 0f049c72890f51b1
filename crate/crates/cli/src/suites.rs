use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rslv_core::cosets::{
    bruhat_product_identity_check, congruence_index, literal_nplus_wprime_identity,
    mirabolic_partition_audit, random_invariance_check, stabilizer_audit, xi_t_valuation_check,
    OrbitReport, Variant,
};
use rslv_core::degenerate::{
    degenerate_assemble_and_verify, degenerate_series_check, hsum, hsum_expected, index_formula,
    level_volume_identity_numeric, level_volume_identity_symbolic, DegenerateContext,
};
use rslv_core::satake::{
    rs_lfactor, whittaker_recursion_sides, zeta_series_gl_m_m, zeta_series_gl_m_m1, SatakeData,
};
use rslv_core::spectral::{
    lagrange_step, residue_eval_1, residue_eval_2, residue_target_1, residue_target_1_lfactors,
    residue_target_2, residue_target_2_lfactors, spectral_weight_closed, spectral_weight_trace,
    ResidueContext,
};
use rslv_core::symfunc::{partitions_up_to, FormalSeries, Registry, RF};
use rslv_core::Error;

use crate::report::{Check, Status};

/// Largest `n` for which the fully symbolic residue chain runs by default.
pub const SYMBOLIC_RESIDUE_MAX_N: usize = 3;

/// Why a command stopped before producing a report.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Budget(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) => Failure::Usage(e.to_string()),
            Error::Budget { .. } => Failure::Budget(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

pub type Outcome = std::result::Result<Vec<Check>, Failure>;

struct RfShow<'a>(&'a RF, &'a Registry);

impl fmt::Display for RfShow<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.display(self.1))
    }
}

struct SeriesShow<'a>(&'a FormalSeries, &'a Registry);

impl fmt::Display for SeriesShow<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.0.iter() {
            write!(f, "{k:?}:{};", c.display(self.1))?;
        }
        Ok(())
    }
}

fn eq_detail(ok: bool, what: &str) -> String {
    if ok {
        format!("{what}: equal")
    } else {
        format!("{what}: differ")
    }
}

fn residue_chain(
    prefix: &str,
    ctx: &ResidueContext,
    reg: &Registry,
    full: bool,
) -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    let trace = spectral_weight_trace(ctx)?;
    let closed = spectral_weight_closed(ctx)?;
    let ok = trace == closed;
    out.push(Check::new(
        format!("{prefix}.trace_closed"),
        ok,
        eq_detail(ok, "tr(F^T G^-T) vs closed form"),
        RfShow(&closed, reg),
    ));
    let r1 = residue_eval_1(ctx)?;
    let r2 = residue_eval_2(ctx)?;
    let targets: [(&str, &RF, RF); 4] = [
        ("residue1", &r1, residue_target_1(ctx)?),
        ("residue1_lfactors", &r1, residue_target_1_lfactors(ctx)?),
        ("residue2", &r2, residue_target_2(ctx)?),
        ("residue2_lfactors", &r2, residue_target_2_lfactors(ctx)?),
    ];
    for (name, got, want) in targets {
        let ok = *got == want;
        out.push(Check::new(
            format!("{prefix}.{name}"),
            ok,
            eq_detail(ok, "substituted closed form vs target"),
            RfShow(got, reg),
        ));
    }
    if full {
        let (interp, direct) = lagrange_step(ctx)?;
        let ok = interp == direct;
        out.push(Check::new(
            format!("{prefix}.lagrange"),
            ok,
            eq_detail(ok, "interpolated vs direct"),
            RfShow(&direct, reg),
        ));
        let xs: Vec<_> = ctx.x.params().iter().flat_map(|x| x.vars()).collect();
        let leaked: Vec<&str> = r1
            .vars()
            .into_iter()
            .chain(r2.vars())
            .filter(|v| xs.contains(v))
            .map(|v| reg.name(v))
            .collect();
        out.push(Check::new(
            format!("{prefix}.residues_free_of_x"),
            leaked.is_empty(),
            format!("x variables left in residues: {leaked:?}"),
            leaked.join(","),
        ));
    }
    Ok(out)
}

pub fn residue(n: usize, numeric: bool, seeds: u64, seed: u64) -> Outcome {
    if n < 2 {
        return Err(Failure::Usage(format!("n must be at least 2, got {n}")));
    }
    if !numeric {
        if n > SYMBOLIC_RESIDUE_MAX_N {
            return Err(Failure::Budget(format!(
                "symbolic residue check at n = {n} has {} free variables, above the limit of {} (n <= {SYMBOLIC_RESIDUE_MAX_N}); use --mode numeric",
                3 * n + 4,
                3 * SYMBOLIC_RESIDUE_MAX_N + 4
            )));
        }
        let mut reg = Registry::new();
        let ctx = ResidueContext::symbolic(&mut reg, n)?;
        return residue_chain(&format!("residue.n{n}.symbolic"), &ctx, &reg, true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for s in 0..seeds {
        let mut reg = Registry::new();
        let a = SatakeData::random(&mut rng, n, false)?;
        let b = SatakeData::random(&mut rng, n, false)?;
        let x = SatakeData::random(&mut rng, n + 1, false)?;
        let ctx = ResidueContext::with_params(&mut reg, a, b, x)?;
        out.extend(residue_chain(
            &format!("residue.n{n}.numeric.{s:03}"),
            &ctx,
            &reg,
            false,
        )?);
    }
    Ok(out)
}

fn hsum_checks(prefix: &str, b: &SatakeData, reg: &Registry) -> Result<Vec<Check>, Failure> {
    let n = b.rank() as i64;
    let mut out = Vec::new();
    for k in 0..=n {
        for m in 1..=6 {
            let got = hsum(b, k, m)?;
            let ok = got == hsum_expected(b, k, m)?;
            let what = if m < k { "vanishing" } else { "h_{m-k}(b^-1)" };
            out.push(Check::new(
                format!("{prefix}.hsum.k{k}.m{m}"),
                ok,
                eq_detail(ok, what),
                RfShow(&got, reg),
            ));
        }
    }
    Ok(out)
}

fn assembly_check(
    prefix: &str,
    ctx: &DegenerateContext,
    reg: &Registry,
    expect_hold: bool,
) -> Result<Check, Failure> {
    let asm = degenerate_assemble_and_verify(ctx)?;
    let holds = asm.holds();
    let payload = RfShow(&asm.closed, reg);
    Ok(if expect_hold {
        Check::new(
            format!("{prefix}.assembly"),
            holds,
            eq_detail(holds, "A + B vs C"),
            payload,
        )
    } else if holds {
        Check::new(
            format!("{prefix}.assembly"),
            false,
            "A + B = C although the unit product was dropped",
            payload,
        )
    } else {
        Check::with_status(
            format!("{prefix}.assembly"),
            Status::Skipped,
            "expected-fail: A + B differs from C without the unit product",
            payload,
        )
    })
}

pub fn degenerate(
    n: usize,
    order: u32,
    numeric: bool,
    seeds: u64,
    seed: u64,
    drop_unit_product: bool,
) -> Outcome {
    if n < 2 {
        return Err(Failure::Usage(format!("n must be at least 2, got {n}")));
    }
    let unit = !drop_unit_product;
    let mut out = Vec::new();
    if numeric {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for s in 0..seeds {
            let mut reg = Registry::new();
            let a = SatakeData::random(&mut rng, n, false)?;
            let b = SatakeData::random(&mut rng, n, unit)?;
            let ctx = DegenerateContext::with_params(&mut reg, a, b)?;
            let prefix = format!("degenerate.n{n}.numeric.{s:03}");
            out.push(assembly_check(&prefix, &ctx, &reg, unit)?);
            if s == 0 {
                out.extend(hsum_checks(&prefix, &ctx.b, &reg)?);
            }
        }
        return Ok(out);
    }
    let prefix = format!("degenerate.n{n}.symbolic");
    let mut reg = Registry::new();
    let ctx = DegenerateContext::symbolic(&mut reg, n, unit)?;
    out.push(assembly_check(&prefix, &ctx, &reg, unit)?);
    out.extend(hsum_checks(&prefix, &ctx.b, &reg)?);
    if unit {
        if order > 0 {
            let diff = degenerate_series_check(&ctx, order)?;
            out.push(Check::new(
                format!("{prefix}.series"),
                diff.is_none(),
                match &diff {
                    None => format!("(U, W) expansions agree through order {order}"),
                    Some(k) => format!("first difference at exponent {k:?}"),
                },
                format!("{diff:?}"),
            ));
        }
        let mut reg2 = Registry::new();
        let a = SatakeData::symbolic(&mut reg2, "a", n, true)?;
        let b = SatakeData::symbolic(&mut reg2, "b", n, true)?;
        let both = DegenerateContext::with_params(&mut reg2, a, b)?;
        let w2 = reg2.var("W2");
        let asm = degenerate_assemble_and_verify(&both.swapped(w2))?;
        out.push(Check::new(
            format!("{prefix}.second_variant"),
            asm.holds(),
            eq_detail(asm.holds(), "families exchanged, A + B vs C"),
            RfShow(&asm.closed, &reg2),
        ));
    }
    Ok(out)
}

pub fn whittaker(m: usize, max_weight: u32) -> Outcome {
    if m < 2 {
        return Err(Failure::Usage(format!("m must be at least 2, got {m}")));
    }
    let mut reg = Registry::new();
    let v = reg.var("V");
    let pi = SatakeData::symbolic(&mut reg, "u", m, true)?;
    let mut out = Vec::new();
    for p in partitions_up_to(max_weight, m - 1) {
        let nu: Vec<i64> = p.parts().iter().map(|&x| x as i64).collect();
        let (lhs, rhs) = whittaker_recursion_sides(&pi, &nu, v)?;
        let ok = lhs == rhs;
        let tag: Vec<String> = nu.iter().map(|x| x.to_string()).collect();
        out.push(Check::new(
            format!("whittaker.m{m}.nu_{}", tag.join("_")),
            ok,
            eq_detail(ok, "W(diag(p^nu, 1)) vs lower-rank sum"),
            RfShow(&lhs, &reg),
        ));
    }
    Ok(out)
}

fn series_check(name: String, torus: &FormalSeries, euler: &FormalSeries, reg: &Registry) -> Check {
    let diff = torus.first_difference(euler);
    Check::new(
        name,
        diff.is_none(),
        match &diff {
            None => "torus sum equals Euler product".to_string(),
            Some(k) => format!("first difference at exponent {k:?}"),
        },
        SeriesShow(euler, reg),
    )
}

/// Largest `m` for which the GL(m)×GL(m) series is included.
pub const ZETA_SQUARE_MAX_M: usize = 3;

pub fn zeta(m: usize, order: u32) -> Outcome {
    if m < 2 {
        return Err(Failure::Usage(format!("m must be at least 2, got {m}")));
    }
    let mut out = Vec::new();
    let mut reg = Registry::new();
    let x = reg.var("X");
    let v = reg.var("V");
    let big = SatakeData::symbolic(&mut reg, "x", m, false)?;
    let small = SatakeData::symbolic(&mut reg, "y", m - 1, false)?;
    let torus = zeta_series_gl_m_m1(&big, &small, x, v, order)?;
    let euler = rs_lfactor(&big, &small).series(x, order);
    out.push(series_check(
        format!("zeta.gl{m}xgl{}.order{order}", m - 1),
        &torus,
        &euler,
        &reg,
    ));
    if m <= ZETA_SQUARE_MAX_M {
        let a = SatakeData::symbolic(&mut reg, "a", m, false)?;
        let b = SatakeData::symbolic(&mut reg, "b", m, false)?;
        let torus = zeta_series_gl_m_m(&a, &b, x, v, order)?;
        let euler = rs_lfactor(&a, &b).series(x, order);
        out.push(series_check(
            format!("zeta.gl{m}xgl{m}.order{order}"),
            &torus,
            &euler,
            &reg,
        ));
    }
    Ok(out)
}

fn orbit_checks(r: &OrbitReport, seed: u64) -> Result<Vec<Check>, Failure> {
    let prefix = format!("cosets.{}.n{}.q{}", r.variant, r.n, r.q);
    let expected_count = r.variant.representatives(r.q).len();
    let sizes: Vec<String> = r
        .classes
        .iter()
        .map(|c| format!("{}={}", c.class, c.orbit_size))
        .collect();
    let mut out = vec![
        Check::new(
            format!("{prefix}.group_order"),
            r.group_order == r.expected_group_order,
            format!(
                "enumerated {} elements, expected {}",
                r.group_order, r.expected_group_order
            ),
            r.group_order,
        ),
        Check::new(
            format!("{prefix}.class_count"),
            r.orbit_count == expected_count,
            format!("{} orbits, expected {expected_count}", r.orbit_count),
            sizes.join(","),
        ),
        Check::new(
            format!("{prefix}.orbit_sum"),
            r.orbit_sum() == r.group_order,
            format!("orbit sizes sum to {}", r.orbit_sum()),
            r.orbit_sum(),
        ),
        Check::new(
            format!("{prefix}.representatives"),
            r.representatives_separate,
            "each representative in its own orbit, every orbit represented",
            r.representatives_separate,
        ),
    ];
    for (name, ok) in &r.identities {
        out.push(Check::new(
            format!("{prefix}.identity.{name}"),
            *ok,
            "matrix identity over F_q",
            ok,
        ));
    }
    if r.variant == Variant::GxG {
        out.push(Check::new(
            format!("{prefix}.classify_constant"),
            r.classify_constant,
            "block-invariant classification constant on orbits",
            r.classify_constant,
        ));
        out.push(Check::new(
            format!("{prefix}.no_xi_0_or_1"),
            r.forbidden_xi == 0,
            format!("{} elements classified as xi(0) or xi(1)", r.forbidden_xi),
            r.forbidden_xi,
        ));
        for c in &r.classes {
            let (Some(s), expected) = (c.stabilizer, c.expected_stabilizer) else {
                continue;
            };
            let (ok, detail) = match expected {
                Some(e) => (s == e, format!("measured {s}, subgroup order {e}")),
                None => (true, format!("measured {s}")),
            };
            out.push(Check::new(
                format!("{prefix}.stabilizer.{}", c.class),
                ok,
                detail,
                s,
            ));
        }
        let bad = random_invariance_check(r.n, r.q, 10_000, seed)?;
        out.push(Check::new(
            format!("{prefix}.bi_invariance"),
            bad == 0,
            format!("{bad} of 10000 random triples changed class"),
            bad,
        ));
    } else {
        let literal = literal_nplus_wprime_identity(r.n, r.q);
        out.push(Check::new(
            format!("{prefix}.nplus_wprime_sign"),
            literal == (r.q == 2),
            format!("folding n+w' with diag(1,..,1,-1) holds: {literal}"),
            literal,
        ));
    }
    Ok(out)
}

pub fn classify_cosets(n: usize, q: u64, variant: Variant, budget: u128, seed: u64) -> Outcome {
    let report = match variant {
        Variant::GxG => stabilizer_audit(n, q, budget)?,
        v => mirabolic_partition_audit(n, q, v, budget)?,
    };
    orbit_checks(&report, seed)
}

pub fn index(n: usize, p: u64, e: u32, budget: u128) -> Outcome {
    let r = congruence_index(n, p, e, budget)?;
    let formula = index_formula(n as u32, p, e);
    let prefix = format!("index.n{n}.p{p}.e{e}");
    let ok = formula.to_string() == r.index().to_string() && r.gl_order % r.k0_order == 0;
    let mut reg = Registry::new();
    let v = reg.var("V");
    let numeric = level_volume_identity_numeric(n as u32, p, e)?;
    let symbolic = level_volume_identity_symbolic(n as u32, e, v)?;
    Ok(vec![
        Check::new(
            format!("{prefix}.enumerated"),
            ok,
            format!(
                "|GL| = {}, |K0| = {}, index {} vs formula {formula}",
                r.gl_order,
                r.k0_order,
                r.index()
            ),
            r.index(),
        ),
        Check::new(
            format!("{prefix}.volume_numeric"),
            numeric,
            "q^{-en} index = zeta(1)/zeta(n+1) at q",
            numeric,
        ),
        Check::new(
            format!("{prefix}.volume_symbolic"),
            symbolic,
            "same identity in q",
            symbolic,
        ),
    ])
}

pub fn support(n: usize, p: u64, e: u32, samples: usize, seed: u64) -> Outcome {
    let r = xi_t_valuation_check(n, p, e, samples, seed)?;
    let prefix = format!("support.n{n}.p{p}.e{e}");
    let base = format!("{} accepted, {} skipped", r.accepted, r.skipped);
    let full = r.accepted == samples;
    Ok(vec![
        Check::new(
            format!("{prefix}.samples"),
            full,
            base.clone(),
            format!("{}/{}", r.accepted, r.skipped),
        ),
        Check::new(
            format!("{prefix}.valuation"),
            r.valuation_ok == r.accepted && r.accepted > 0,
            format!(
                "v(t) >= {e} on {} of {}; min v(t) = {:?}",
                r.valuation_ok, r.accepted, r.min_valuation
            ),
            format!("{}:{:?}", r.valuation_ok, r.min_valuation),
        ),
        Check::new(
            format!("{prefix}.unit"),
            r.unit_ok == r.accepted && r.accepted > 0,
            format!("1 - t a unit on {} of {}", r.unit_ok, r.accepted),
            r.unit_ok,
        ),
        Check::new(
            format!("{prefix}.identity"),
            r.identity_ok == r.accepted && r.accepted > 0,
            format!(
                "det(a) d t = c adj(a) b on {} of {}",
                r.identity_ok, r.accepted
            ),
            r.identity_ok,
        ),
    ])
}

pub fn bruhat(n: usize) -> Outcome {
    let r = bruhat_product_identity_check(n)?;
    let prefix = format!("bruhat.n{n}");
    Ok(vec![
        Check::new(
            format!("{prefix}.proportional"),
            r.proportional,
            "gk is a scalar multiple of the factored product",
            r.proportional,
        ),
        Check::new(
            format!("{prefix}.scalar"),
            r.scalar_is_d,
            "the scalar is d = 1 + c b'",
            r.scalar_is_d,
        ),
        Check::new(
            format!("{prefix}.specialization"),
            r.specialization_ok,
            "b' = 0, c' = 0 gives g diag(a', 1)",
            r.specialization_ok,
        ),
    ])
}

/// Every suite at the default desk sizes.
pub fn desk(seed: u64, budget: u128) -> Outcome {
    let mut out = Vec::new();
    for n in 2..=3 {
        out.extend(residue(n, false, 0, seed)?);
    }
    out.extend(residue(4, true, 10, seed)?);
    for m in 2..=4 {
        out.extend(zeta(m, 6)?);
        out.extend(whittaker(m, 4)?);
    }
    for n in 2..=3 {
        out.extend(degenerate(
            n,
            if n == 2 { 4 } else { 0 },
            false,
            0,
            seed,
            false,
        )?);
    }
    out.extend(degenerate(4, 0, true, 10, seed, false)?);
    for (n, q) in [(2, 2), (2, 3), (2, 5), (3, 2)] {
        for v in [Variant::GxG, Variant::PxG, Variant::GxP, Variant::PxP] {
            out.extend(classify_cosets(n, q, v, budget, seed)?);
        }
    }
    for (n, p, e) in [(2, 2, 1), (2, 2, 2), (2, 3, 1), (3, 2, 1)] {
        out.extend(index(n, p, e, budget)?);
    }
    for (p, e) in [(2, 1), (3, 2)] {
        out.extend(support(2, p, e, 500, seed)?);
    }
    for n in 2..=3 {
        out.extend(bruhat(n)?);
    }
    Ok(out)
}
