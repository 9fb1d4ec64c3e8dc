//! Finite-field hypergeometric functions built from Jacobi sums.
//!
//! Characters are `χ_j(x) = ζ^{j · log_g x}` with `ζ = e^{2πi/(p-1)}`, and
//! every character (the trivial one included) vanishes at 0. Exponents are
//! combined exactly; complex arithmetic only enters in the final sums.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::brutecount::{CountRecord, Method};
use crate::error::{Error, Result};
use crate::ffcore::FieldCtx;
use crate::fibrations::{a_lambda, trace_cubic, EllipticTrace};

pub const IMAG_TOLERANCE: f64 = 1e-6;
pub const ROUNDING_TOLERANCE: f64 = 1e-4;

/// Name of the Jacobi-sum convention recorded in reports. `B̄(x - 1)` and
/// Greene's `B(-1) B̄(1 - x)` agree because `B(-1) = ±1`.
pub const BINOM_CONVENTION: &str = "binom(A,B) = (1/p) sum_x A(x) conj(B)(x-1), chi(0) = 0 for all chi";

pub struct CharacterTable<'a> {
    ctx: &'a FieldCtx,
    /// `roots[e] = ζ^e`.
    roots: Vec<Complex64>,
}

impl<'a> CharacterTable<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Self {
        let n = ctx.p() as usize - 1;
        let roots = (0..n)
            .map(|e| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e as f64 / n as f64))
            .collect();
        CharacterTable { ctx, roots }
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.ctx
    }

    pub fn order(&self) -> u32 {
        self.ctx.p() - 1
    }

    /// Index of the quadratic character.
    pub fn phi(&self) -> u32 {
        self.order() / 2
    }

    /// Exponent `e` with `χ_j(x) = ζ^e`, or `None` at `x = 0`.
    pub fn exponent(&self, j: u32, x: u32) -> Option<u32> {
        let n = self.order() as u64;
        let l = self.ctx.dlog(x)? as u64;
        Some(((j as u64 % n) * l % n) as u32)
    }

    pub fn value(&self, j: u32, x: u32) -> Complex64 {
        self.exponent(j, x)
            .map_or(Complex64::new(0.0, 0.0), |e| self.roots[e as usize])
    }

    /// `p · binom(A, B) = Σ_x A(x) B̄(x - 1)`, a Jacobi sum.
    pub fn jacobi(&self, a: u32, b: u32) -> Complex64 {
        let n = self.order() as u64;
        let (a, b) = (a as u64 % n, b as u64 % n);
        let mut s = Complex64::new(0.0, 0.0);
        for x in 2..self.ctx.p() {
            let lx = self.ctx.dlog(x).unwrap() as u64;
            let lx1 = self.ctx.dlog(x - 1).unwrap() as u64;
            let e = (a * lx % n + n - b * lx1 % n) % n;
            s += self.roots[e as usize];
        }
        s
    }

    /// `binom(A, B)`.
    pub fn jacobi_binom(&self, a: u32, b: u32) -> Complex64 {
        self.jacobi(a, b) / self.ctx.p() as f64
    }

    /// `J(φχ_j, χ_j)³` for every `j`.
    fn cubes(&self) -> Vec<Complex64> {
        let phi = self.phi();
        (0..self.order())
            .into_par_iter()
            .map(|j| self.jacobi(j + phi, j).powi(3))
            .collect()
    }
}

/// `numerator / p^scale`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HyperValue {
    pub numerator: i64,
    pub scale: u32,
}

impl HyperValue {
    pub fn as_f64(&self, p: u32) -> f64 {
        self.numerator as f64 / (p as f64).powi(self.scale as i32)
    }
}

/// Evaluates `₃F₂(λ)` for many `λ` from one table of Jacobi sums.
pub struct F32Evaluator<'a> {
    table: CharacterTable<'a>,
    cubes: Vec<Complex64>,
}

impl<'a> F32Evaluator<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Self {
        let table = CharacterTable::new(ctx);
        let cubes = table.cubes();
        F32Evaluator { table, cubes }
    }

    pub fn table(&self) -> &CharacterTable<'a> {
        &self.table
    }

    /// `₃F₂(λ)` as `n / p²` with `n` an integer.
    pub fn f32(&self, lambda: u32) -> Result<HyperValue> {
        let ctx = self.table.ctx;
        let l = lambda % ctx.p();
        if l == 0 {
            return Err(Error::domain("f32", "lambda = 0"));
        }
        // p² · p/(p-1) · Σ (J/p)³ χ(λ) = (1/(p-1)) Σ J³ χ(λ)
        let n = self.table.order() as u64;
        let ll = ctx.dlog(l).unwrap() as u64;
        let mut s = Complex64::new(0.0, 0.0);
        for (j, c) in self.cubes.iter().enumerate() {
            s += c * self.table.roots[(j as u64 * ll % n) as usize];
        }
        s /= n as f64;
        if s.im.abs() > IMAG_TOLERANCE * (ctx.p() as f64).powi(2) {
            return Err(Error::Tolerance(format!(
                "imaginary part {} of p^2 * 3F2({l}) at p = {}; reduce p",
                s.im,
                ctx.p()
            )));
        }
        let r = s.re.round();
        if (s.re - r).abs() > ROUNDING_TOLERANCE {
            return Err(Error::Tolerance(format!(
                "p^2 * 3F2({l}) = {} is not an integer at p = {}; reduce p",
                s.re,
                ctx.p()
            )));
        }
        Ok(HyperValue {
            numerator: r as i64,
            scale: 2,
        })
    }
}

/// `₃F₂(λ)` by the definitional sum.
pub fn f32(table: &CharacterTable<'_>, lambda: u32) -> Result<HyperValue> {
    let cubes = table.cubes();
    F32Evaluator {
        table: CharacterTable {
            ctx: table.ctx,
            roots: table.roots.clone(),
        },
        cubes,
    }
    .f32(lambda)
}

/// `₃A₂(p, λ)`: the trace of `y² = (x - 1)(x² + λ)`.
pub fn a32(ctx: &FieldCtx, lambda: u32) -> Result<EllipticTrace> {
    let l = lambda % ctx.p();
    if l == 0 || l == ctx.p() - 1 {
        return Err(Error::domain("a32", format!("lambda = {lambda} has lambda^2 = -lambda")));
    }
    let mut t = trace_cubic(ctx, ctx.neg(1), l, ctx.neg(l))?;
    t.label = format!("3E2({l})");
    Ok(t)
}

#[derive(Clone, Debug, Serialize)]
pub struct FopRow {
    pub lambda: u32,
    /// `p² ₃F₂(λ)`.
    pub p2_f32: i64,
    /// `₃A₂(p, λ)` where defined.
    pub a32: Option<i64>,
    pub identity_ok: bool,
    pub same_curve_ok: bool,
    /// `₃F₂(λ) = φ(1 - λ)(a_{-λ}² - p)/p²` for `λ ≠ 0, ±1`.
    pub f_a_ok: bool,
    /// The same identity with the factor `φ((λ+1)/λ)`; informational only.
    pub f_a_alt_sign_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FopReport {
    pub p: u32,
    pub convention: &'static str,
    pub special_value_ok: bool,
    pub rows: Vec<FopRow>,
}

impl FopReport {
    pub fn all_pass(&self) -> bool {
        self.special_value_ok
            && self
                .rows
                .iter()
                .all(|r| r.identity_ok && r.same_curve_ok && r.f_a_ok)
    }
}

/// `(a, p - a²)` with `a` odd and positive, `p - a²` a square.
fn odd_square_part(p: u32) -> Option<i64> {
    let mut a = 1i64;
    while a * a < p as i64 {
        let r = p as i64 - a * a;
        let s = (r as f64).sqrt().round() as i64;
        if s * s == r {
            return Some(a);
        }
        a += 2;
    }
    None
}

/// Check the ₃F₂ ↔ ₃A₂ identities at every admissible `λ`.
pub fn verify_fop_identity(ctx: &FieldCtx) -> Result<FopReport> {
    let ev = F32Evaluator::new(ctx);
    let p = ctx.p();
    let q = p as i64;
    let values: Vec<i64> = (1..p)
        .map(|l| ev.f32(l).map(|v| v.numerator))
        .collect::<Result<_>>()?;
    let f = |l: u32| values[(l % p) as usize - 1];
    let phi = |x: u32| ctx.legendre(x % p) as i64;

    let special_value_ok = if p % 4 == 3 {
        f(1) == 0
    } else {
        odd_square_part(p).is_some_and(|a| f(1) == 4 * a * a - 2 * q)
    };

    let mut rows = Vec::new();
    for l in 1..p {
        let excluded = l == p - 1;
        let a32v = if excluded { None } else { Some(a32(ctx, l)?.a) };
        let mut identity_ok = true;
        let mut same_curve_ok = true;
        if let Some(a) = a32v {
            // ₃F₂(1 + 1/λ) = φ(-λ)(₃A₂(λ)² - p)/p²
            let arg = ctx.add(1, ctx.inv(l).unwrap());
            identity_ok = f(arg) == phi(ctx.neg(l)) * (a * a - q);
            // ₃A₂(-1/(λ+1))² = a_λ²
            let mu = ctx.neg(ctx.inv(ctx.add(l, 1)).unwrap());
            let lhs = a32(ctx, mu)?.a;
            let rhs = a_lambda(ctx, l)?.a;
            same_curve_ok = lhs * lhs == rhs * rhs;
        }
        // substituting λ = 1 + 1/μ into the identity above
        let (f_a_ok, f_a_alt_sign_ok) = if l == 1 || l == p - 1 {
            (true, true)
        } else {
            let ratio = ctx.mul(ctx.add(l, 1), ctx.inv(l).unwrap());
            let am = a_lambda(ctx, ctx.neg(l))?.a;
            (
                f(l) == phi(ctx.sub(1, l)) * (am * am - q),
                f(l) == phi(ratio) * (am * am - q),
            )
        };
        rows.push(FopRow {
            lambda: l,
            p2_f32: f(l),
            a32: a32v,
            identity_ok,
            same_curve_ok,
            f_a_ok,
            f_a_alt_sign_ok,
        });
    }
    Ok(FopReport {
        p,
        convention: BINOM_CONVENTION,
        special_value_ok,
        rows,
    })
}

/// `[F_1]_p = Σ_{i=0}^5 p^i + Σ_{λ=1}^{p-1} φ(-λ) (p² ₃F₂(λ))²`.
///
/// For `p ≡ 3 mod 4` the `λ = 1` term vanishes. For `p ≡ 1 mod 4` it equals
/// `(4a² - 2p)² = (a_{-1,p}² - 2p)²`, which is exactly the contribution of
/// the fibre over `-1`.
pub fn f1_hypergeometric_count(ctx: &FieldCtx) -> Result<CountRecord> {
    CountRecord::timed("f1", ctx.p(), Method::Hypergeometric, || {
        let ev = F32Evaluator::new(ctx);
        let p = ctx.p() as i128;
        let mut total: i128 = (0..=5).map(|i| p.pow(i)).sum();
        for l in 1..ctx.p() {
            let n = ev.f32(l)?.numerator as i128;
            total += ctx.legendre(ctx.neg(l)) as i128 * n * n;
        }
        Ok(total as u128)
    })
}

/// Rows `(p, λ, p² ₃F₂(λ), ₃A₂(p, λ))` for a CSV table.
pub fn hypergeometric_table(ctx: &FieldCtx) -> Result<Vec<(u32, u32, i64, Option<i64>)>> {
    let ev = F32Evaluator::new(ctx);
    (1..ctx.p())
        .map(|l| {
            let a = if l == ctx.p() - 1 { None } else { Some(a32(ctx, l)?.a) };
            Ok((ctx.p(), l, ev.f32(l)?.numerator, a))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: u64) -> FieldCtx {
        FieldCtx::new(p).unwrap()
    }

    #[test]
    fn characters() {
        let ctx = c(13);
        let t = CharacterTable::new(&ctx);
        for x in 1..13 {
            assert_eq!(t.exponent(0, x), Some(0));
            let v = t.value(t.phi(), x);
            assert!((v.re - ctx.legendre(x) as f64).abs() < 1e-12);
            for y in 1..13 {
                let e = |z| t.exponent(5, z).unwrap();
                assert_eq!(e(ctx.mul(x, y)), (e(x) + e(y)) % 12);
            }
        }
        assert_eq!(t.exponent(3, 0), None);
    }

    #[test]
    fn binom_by_definition() {
        let ctx = c(5);
        let t = CharacterTable::new(&ctx);
        // φ against trivial: (1/5)(φ(2) + φ(3) + φ(4)) = -1/5
        let v = t.jacobi_binom(t.phi(), 0);
        assert!((v.re + 0.2).abs() < 1e-12 && v.im.abs() < 1e-12);
        // trivial, trivial: (p - 2)/p
        let v = t.jacobi_binom(0, 0);
        assert!((v.re - 0.6).abs() < 1e-12);
    }

    #[test]
    fn jacobi_absolute_values() {
        let ctx = c(13);
        let t = CharacterTable::new(&ctx);
        let rp = 13f64.sqrt();
        for a in 0..12 {
            for b in 0..12 {
                let m = t.jacobi(a, b).norm();
                assert!(
                    [0.0, 1.0, rp, 11.0].iter().any(|v| (m - v).abs() < 1e-9),
                    "|J({a},{b})| = {m}"
                );
            }
        }
    }

    #[test]
    fn f32_values() {
        let ctx = c(5);
        let ev = F32Evaluator::new(&ctx);
        assert_eq!(ev.f32(2).unwrap(), HyperValue { numerator: -1, scale: 2 });
        assert_eq!(ev.f32(1).unwrap().numerator, -6);
        for p in [3u64, 7, 11, 19] {
            let ctx = c(p);
            assert_eq!(F32Evaluator::new(&ctx).f32(1).unwrap().numerator, 0);
        }
        assert!(ev.f32(0).is_err());
        let t = CharacterTable::new(&ctx);
        assert_eq!(f32(&t, 2).unwrap().numerator, -1);
    }

    #[test]
    fn a32_values() {
        assert_eq!(a32(&c(5), 1).unwrap().a, -2);
        assert_eq!(a32(&c(7), 1).unwrap().a, 4);
        assert!(a32(&c(5), 0).is_err());
    }

    #[test]
    fn fop_small_primes() {
        for p in [3u64, 5, 7, 13, 17] {
            let r = verify_fop_identity(&c(p)).unwrap();
            assert!(r.all_pass(), "p = {p}: {r:?}");
        }
    }

    #[test]
    fn hypergeometric_f1() {
        assert_eq!(f1_hypergeometric_count(&c(3)).unwrap().count, 365);
        assert_eq!(f1_hypergeometric_count(&c(5)).unwrap().count, 3965);
        for p in [7u64, 11, 13, 17] {
            let ctx = c(p);
            assert_eq!(
                f1_hypergeometric_count(&ctx).unwrap().count,
                crate::fibrations::count_f1_fibrationwise(&ctx).unwrap().count
            );
        }
    }
}
