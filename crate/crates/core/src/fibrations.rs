//! Closed-form counts assembled fibre by fibre.

use rayon::prelude::*;
use serde::Serialize;

use crate::arrangements::bundled;
use crate::brutecount::{quotient_product_from_censuses, sign_census, CountRecord, Method, Space};
use crate::error::{Error, Result};
use crate::ffcore::FieldCtx;
use crate::modforms::{cm_coefficient, cm_coefficients, CMFormId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticTrace {
    pub p: u32,
    pub label: String,
    pub a: i64,
}

/// Trace of Frobenius of `y² = x³ + A x² + B x + C`.
pub fn trace_cubic(ctx: &FieldCtx, a: u32, b: u32, c: u32) -> Result<EllipticTrace> {
    let m = |x, y| ctx.mul(x, y);
    // discriminant of the monic cubic
    let terms = [
        m(m(a, a), m(b, b)),
        ctx.neg(m(4, m(b, m(b, b)))),
        ctx.neg(m(4, m(m(a, m(a, a)), c))),
        ctx.neg(m(27 % ctx.p(), m(c, c))),
        m(18 % ctx.p(), m(m(a, b), c)),
    ];
    let disc = terms.iter().fold(0, |s, &t| ctx.add(s, t));
    if disc == 0 {
        return Err(Error::domain(
            "trace_cubic",
            format!("x^3 + {a}x^2 + {b}x + {c} is singular mod {}", ctx.p()),
        ));
    }
    let s: i64 = (0..ctx.p())
        .map(|x| {
            let v = ctx.add(m(ctx.add(m(ctx.add(x, a), x), b), x), c);
            ctx.legendre(v) as i64
        })
        .sum();
    Ok(EllipticTrace {
        p: ctx.p(),
        label: format!("y^2 = x^3 + {a}x^2 + {b}x + {c}"),
        a: -s,
    })
}

fn check_lambda(ctx: &FieldCtx, op: &'static str, lambda: u32, allow_zero: bool) -> Result<u32> {
    let l = lambda % ctx.p();
    if l == ctx.p() - 1 || (!allow_zero && l == 0) {
        return Err(Error::domain(op, format!("lambda = {lambda} is excluded mod {}", ctx.p())));
    }
    Ok(l)
}

/// `a_{λ,p}`: the trace of `y² = x³ - 2x² + λ/(λ+1) x`, with `a_{0,p} = 0`.
pub fn a_lambda(ctx: &FieldCtx, lambda: u32) -> Result<EllipticTrace> {
    let l = check_lambda(ctx, "a_lambda", lambda, true)?;
    if l == 0 {
        return Ok(EllipticTrace {
            p: ctx.p(),
            label: "a_0 (convention)".into(),
            a: 0,
        });
    }
    let b = ctx.mul(l, ctx.inv(ctx.add(l, 1)).expect("lambda != -1"));
    let mut t = trace_cubic(ctx, ctx.neg(2 % ctx.p()), b, 0)?;
    t.label = format!("E_{l}");
    Ok(t)
}

/// `a_{-1,p}`: the trace of `y² = x³ - x`.
pub fn a_minus_one(ctx: &FieldCtx) -> i64 {
    trace_cubic(ctx, 0, ctx.neg(1), 0).expect("x^3 - x is separable").a
}

fn pi(p: u32) -> i128 {
    p as i128
}

fn phi(ctx: &FieldCtx, x: u32) -> i128 {
    ctx.legendre(x % ctx.p()) as i128
}

/// Points of the desingularized Kummer surface of `E_λ × E_λ`.
pub fn count_kummer(ctx: &FieldCtx, lambda: u32) -> Result<i128> {
    let l = check_lambda(ctx, "count_kummer", lambda, false)?;
    let a = a_lambda(ctx, l)?.a as i128;
    let p = pi(ctx.p());
    Ok(p * p + (12 + 6 * phi(ctx, l)) * p + 1 + a * a)
}

pub fn count_k_lambda(ctx: &FieldCtx, lambda: u32) -> Result<i128> {
    let l = check_lambda(ctx, "count_K_lambda", lambda, false)?;
    let a = a_lambda(ctx, l)?.a as i128;
    let p = pi(ctx.p());
    Ok(p * p + 1 + a * a)
}

pub fn count_l_lambda(ctx: &FieldCtx, lambda: u32) -> Result<i128> {
    let l = check_lambda(ctx, "count_L_lambda", lambda, false)?;
    let a = a_lambda(ctx, l)?.a as i128;
    let p = pi(ctx.p());
    Ok(p * p + p + 1 + phi(ctx, l) * (a * a - p))
}

/// The affine patch `x_3 ≠ 0` of the fibre of `(x_0 : x_3)` on `F_1`.
pub fn count_f_lambda(ctx: &FieldCtx, lambda: u32) -> Result<i128> {
    let l = check_lambda(ctx, "count_F_lambda", lambda, true)?;
    let a = a_lambda(ctx, l)?.a as i128;
    let p = pi(ctx.p());
    let d = a * a - p;
    Ok(p.pow(4) + phi(ctx, l) * d * d)
}

/// `([K_{-1}]_p, [F_{-1}]_p)`.
pub fn count_minus_one(ctx: &FieldCtx) -> (i128, i128) {
    let p = pi(ctx.p());
    let a = a_minus_one(ctx) as i128;
    let k = p * p - phi(ctx, ctx.neg(1)) * p + 1 + a * a;
    let f = if ctx.p() % 4 == 1 {
        let d = 2 * p - a * a;
        p.pow(4) + d * d
    } else {
        p.pow(4)
    };
    (k, f)
}

/// `[F_1]_p` as the sum over the fibres of `(x_0 : x_3)`.
pub fn count_f1_fibrationwise(ctx: &FieldCtx) -> Result<CountRecord> {
    CountRecord::timed("f1", ctx.p(), Method::Fibration, || {
        let p = pi(ctx.p());
        let hyperplane: i128 = (0..=4).map(|i| p.pow(i)).sum();
        let general: i128 = (1..ctx.p() - 1)
            .into_par_iter()
            .map(|l| count_f_lambda(ctx, l))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum();
        let total = hyperplane + p.pow(4) + general + count_minus_one(ctx).1;
        Ok(total as u128)
    })
}

/// `[K]_p = p² + p + 1 + a_{3,p}`.
pub fn count_k32(ctx: &FieldCtx) -> Result<i128> {
    let p = pi(ctx.p());
    Ok(p * p + p + 1 + cm_coefficient(CMFormId::new(3)?, ctx.p())? as i128)
}

/// Points on the fibre of `ρ` at `(x : 1)`, or at infinity for `None`.
pub fn count_rho_fibre(ctx: &FieldCtx, x: Option<u32>) -> Result<i128> {
    let p = pi(ctx.p());
    let special = 2 * p * p + 2 * p + 1;
    let Some(x) = x else {
        return Ok(special);
    };
    let x = x % ctx.p();
    if x == 0 {
        return Ok(p * p + 3 * p + 1);
    }
    if x == 1 || x == ctx.p() - 1 {
        return Ok(special);
    }
    let a3 = cm_coefficient(CMFormId::new(3)?, ctx.p())? as i128;
    let c = ctx.sub(ctx.pow(x, 3), x);
    Ok(p * p + 4 * p + 1 + phi(ctx, c) * a3)
}

/// `[𝓛]_p = p³ + 6p² - 3p + 1 - a_{4,p} - p a_{2,p}`.
pub fn count_script_l(ctx: &FieldCtx) -> Result<i128> {
    let p = pi(ctx.p());
    let [a2, _, a4, _] = cm_coefficients(ctx.p())?;
    Ok(p.pow(3) + 6 * p * p - 3 * p + 1 - a4 as i128 - p * a2 as i128)
}

/// The same count as the sum over the fibres of `ρ` minus `p` times the
/// `2p + 1` base points.
pub fn count_script_l_fibrewise(ctx: &FieldCtx) -> Result<i128> {
    let p = pi(ctx.p());
    let mut total = count_rho_fibre(ctx, None)?;
    for x in 0..ctx.p() {
        total += count_rho_fibre(ctx, Some(x))?;
    }
    Ok(total - p * (2 * p + 1))
}

/// How many more points `(K × L_λ)/σ` has than the fibre of `π` at `λ`.
pub fn fibre_excess(ctx: &FieldCtx, lambda: u32) -> Result<i128> {
    let l = lambda % ctx.p();
    if l == 0 {
        return Err(Error::domain("fibre_excess", "lambda = 0"));
    }
    let p = pi(ctx.p());
    let a3 = cm_coefficient(CMFormId::new(3)?, ctx.p())? as i128;
    Ok(p * (p + 1) * (p + 1) + (p - 2) * phi(ctx, l) * a3)
}

/// `[V_32]_p` from the fibration `(x_0 + x_1 : x_2 + x_4)`.
pub fn count_v32_fibrationwise(ctx: &FieldCtx) -> Result<CountRecord> {
    CountRecord::timed("v32", ctx.p(), Method::Fibration, || {
        let p = pi(ctx.p());
        let k = bundled::k32().reduce(ctx)?;
        let k_census = sign_census(ctx, &k, Space::Projective)?;
        let a3 = cm_coefficient(CMFormId::new(3)?, ctx.p())? as i128;
        if k_census.diff() != a3 {
            return Err(Error::Integrity(format!(
                "k_+ - k_- = {} but a_3 = {a3} at p = {}",
                k_census.diff(),
                ctx.p()
            )));
        }
        let template = bundled::l32_lambda_template();
        let fibres: i128 = (1..ctx.p())
            .into_par_iter()
            .map(|l| -> Result<i128> {
                let lc = template.instantiate(l as i64)?.reduce(ctx)?;
                let lcen = sign_census(ctx, &lc, Space::Projective)?;
                let product = quotient_product_from_censuses(&[k_census, lcen]) as i128;
                Ok(product - fibre_excess(ctx, l)?)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum();
        let special = 2 * (0..=4).map(|i| p.pow(i)).sum::<i128>();
        let base = (0..=3).map(|i| p.pow(i)).sum::<i128>();
        Ok((fibres + special - p * base) as u128)
    })
}
