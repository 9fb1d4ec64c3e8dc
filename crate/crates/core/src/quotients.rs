//! Point counts of quotients `V/G` through twisted counts.
//!
//! For a lift `g: (t, x) ↦ (τ t, M x)` of an arrangement automorphism,
//! `T_g` counts geometric points with `Frob(P) = g(P)`, and
//! `#(V/G)(F_p) = (1/|G|) Σ_g T_g`. Writing `Frob(x) = s M x` for the
//! base point, a point with `f = c·∏L(x) ≠ 0` contributes 2 when
//! `f^{(p-1)/2} = s^w τ` and 0 otherwise; branch points contribute 1.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arrangements::{bundled, DoubleCoverSpec};
use crate::brutecount::{count_double_cover, count_projective_space, CountRecord, Method};
use crate::error::{Error, Result};
use crate::ffcore::{FieldCtx, Fp2Elem};
use crate::modforms::{cm_coefficients, Level8};

/// A projective-linear automorphism of the arrangement with a chosen lift
/// to the double cover.
#[derive(Clone, Debug, Serialize)]
pub struct ProjDeckMap {
    /// Primitive integer matrix, first nonzero entry positive.
    matrix: Vec<Vec<i64>>,
    /// `L_i ∘ M ∝ L_perm[i]`.
    perm: Vec<usize>,
    /// `∏ L_i(M x) = μ ∏ L_i(x)`.
    #[serde(serialize_with = "ser_ratio")]
    mu: BigRational,
    /// `t ↦ τ t`, with `τ² = μ`.
    #[serde(serialize_with = "ser_ratio")]
    tau: BigRational,
    weight: u32,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl PartialEq for ProjDeckMap {
    fn eq(&self, o: &Self) -> bool {
        self.matrix == o.matrix && self.tau == o.tau
    }
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| BigRational::new(n, d))
}

/// Scale an integer matrix to be primitive with first nonzero entry
/// positive; returns the matrix and the factor `c` with `input = c · out`.
fn normalize_matrix(m: &[Vec<i64>]) -> Result<(Vec<Vec<i64>>, i64)> {
    let g = m.iter().flatten().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        return Err(Error::domain("ProjDeckMap", "zero matrix"));
    }
    let lead = *m.iter().flatten().find(|&&x| x != 0).unwrap();
    let c = if lead < 0 { -g } else { g };
    Ok((m.iter().map(|r| r.iter().map(|x| x / c).collect()).collect(), c))
}

impl ProjDeckMap {
    /// Build the lift of `matrix` with `τ = ε √μ` for the normalized matrix.
    pub fn new(spec: &DoubleCoverSpec, matrix: Vec<Vec<i64>>, deck_sign: i8) -> Result<Self> {
        if deck_sign != 1 && deck_sign != -1 {
            return Err(Error::domain("ProjDeckMap", "deck sign must be +1 or -1"));
        }
        let (matrix, _) = Self::checked_matrix(spec, matrix)?;
        let (perm, mu) = Self::action(spec, &matrix)?;
        let root = rational_sqrt(&mu).ok_or_else(|| {
            Error::Unsupported(format!("branch product scales by {mu}, which is not a rational square"))
        })?;
        let tau = if deck_sign == 1 { root } else { -root };
        Ok(ProjDeckMap {
            matrix,
            perm,
            mu,
            tau,
            weight: spec.cover_weight(),
        })
    }

    pub fn identity(spec: &DoubleCoverSpec) -> Self {
        let n = spec.dim() + 1;
        let m = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        Self::new(spec, m, 1).expect("identity is an automorphism")
    }

    /// The deck involution `t ↦ -t`.
    pub fn deck(spec: &DoubleCoverSpec) -> Self {
        let n = spec.dim() + 1;
        let m = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        Self::new(spec, m, -1).expect("identity is an automorphism")
    }

    fn checked_matrix(spec: &DoubleCoverSpec, m: Vec<Vec<i64>>) -> Result<(Vec<Vec<i64>>, i64)> {
        let n = spec.dim() + 1;
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(Error::domain("ProjDeckMap", format!("matrix must be {n}x{n}")));
        }
        let rows: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
        if crate::arrangements::exact::rank(&rows) < n {
            return Err(Error::domain("ProjDeckMap", "singular matrix"));
        }
        normalize_matrix(&m)
    }

    fn action(spec: &DoubleCoverSpec, m: &[Vec<i64>]) -> Result<(Vec<usize>, BigRational)> {
        let n = spec.dim() + 1;
        let mut perm = Vec::with_capacity(spec.degree());
        let mut mu = BigRational::one();
        for f in spec.forms() {
            let pulled: Vec<i64> = (0..n).map(|c| (0..n).map(|r| f[r] * m[r][c]).sum()).collect();
            let j = spec.arrangement().find_form(&pulled).ok_or_else(|| {
                Error::domain("ProjDeckMap", format!("form {f:?} is not mapped to a form"))
            })?;
            let target = &spec.forms()[j];
            let k = target.iter().position(|&x| x != 0).unwrap();
            mu *= BigRational::new(BigInt::from(pulled[k]), BigInt::from(target[k]));
            perm.push(j);
        }
        let mut seen = vec![false; perm.len()];
        for &j in &perm {
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::domain("ProjDeckMap", "matrix does not permute the forms"));
            }
        }
        Ok((perm, mu))
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn mu(&self) -> &BigRational {
        &self.mu
    }

    pub fn tau(&self) -> &BigRational {
        &self.tau
    }

    /// Sign of `τ`, i.e. which of the two lifts this is.
    pub fn deck_sign(&self) -> i8 {
        if self.tau.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn is_identity(&self) -> bool {
        self.tau.is_one()
            && self
                .matrix
                .iter()
                .enumerate()
                .all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == (i == j) as i64))
    }

    /// The map with the other deck sign.
    pub fn other_lift(&self) -> Self {
        let mut g = self.clone();
        g.tau = -g.tau;
        g
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ProjDeckMap) -> Result<ProjDeckMap> {
        let n = self.matrix.len();
        let prod: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum())
                    .collect()
            })
            .collect();
        let (matrix, c) = normalize_matrix(&prod)?;
        // (τ t, c M' x) ~ (c^{-w} τ t, M' x)
        let cw = BigRational::from_integer(BigInt::from(c).pow(self.weight));
        let tau = &self.tau * &other.tau / cw;
        let perm: Vec<usize> = self.perm.iter().map(|&i| other.perm[i]).collect();
        let mut mu = &tau * &tau;
        mu = mu.reduced();
        Ok(ProjDeckMap {
            matrix,
            perm,
            mu,
            tau,
            weight: self.weight,
        })
    }

    /// True when `M²` is scalar, i.e. the base map has order at most 2.
    pub fn is_involutive_on_base(&self) -> bool {
        let n = self.matrix.len();
        let sq: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| self.matrix[i][k] * self.matrix[k][j]).sum())
                    .collect()
            })
            .collect();
        let s = sq[0][0];
        s != 0
            && sq
                .iter()
                .enumerate()
                .all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == if i == j { s } else { 0 }))
    }

    fn square_scalar(&self) -> i64 {
        (0..self.matrix.len()).map(|k| self.matrix[0][k] * self.matrix[k][0]).sum()
    }

    fn tau_mod(&self, ctx: &FieldCtx) -> Result<u32> {
        let num = self.tau.numer().to_i64().ok_or_else(|| Error::Unsupported("tau too large".into()))?;
        let den = self.tau.denom().to_i64().ok_or_else(|| Error::Unsupported("tau too large".into()))?;
        ctx.reduce_ratio(num, den)
    }

    fn matrix_mod(&self, ctx: &FieldCtx) -> Vec<Vec<u32>> {
        self.matrix
            .iter()
            .map(|r| r.iter().map(|&x| ctx.reduce_i64(x)).collect())
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistedCount {
    pub g: ProjDeckMap,
    pub t: u128,
}

/// Largest number of `F_{p²}` points the brute oracle will visit.
pub const BRUTE_POINT_LIMIT: u128 = 20_000_000;

fn fp2_det_nonzero(ctx: &FieldCtx, mut m: Vec<Vec<Fp2Elem>>) -> bool {
    let n = m.len();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return false;
        };
        m.swap(c, piv);
        let inv = ctx.fp2_inv(m[c][c]).unwrap();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = ctx.fp2_mul(m[r][c], inv);
            for k in c..n {
                let sub = ctx.fp2_mul(f, m[c][k]);
                m[r][k] = ctx.fp2_sub(m[r][k], sub);
            }
        }
    }
    true
}

/// `T_g` by enumerating `P^n(F_{p²})`.
pub fn twisted_count_brute(ctx: &FieldCtx, spec: &DoubleCoverSpec, g: &ProjDeckMap) -> Result<TwistedCount> {
    if !g.is_involutive_on_base() {
        return Err(Error::Unsupported("brute twisted count needs M^2 scalar".into()));
    }
    let n = spec.dim();
    let q = ctx.p() as u128 * ctx.p() as u128;
    let npoints: u128 = (0..=n as u32).map(|i| q.pow(i)).sum();
    if npoints > BRUTE_POINT_LIMIT {
        return Err(Error::Unsupported(format!(
            "P^{n}(F_{{p^2}}) has {npoints} points at p = {}; use the Hilbert 90 path",
            ctx.p()
        )));
    }
    let cover = spec.reduce(ctx)?;
    let m = g.matrix_mod(ctx);
    let mm: Vec<Vec<Fp2Elem>> = m.iter().map(|r| r.iter().map(|&x| Fp2Elem::from_fp(x)).collect()).collect();
    if !fp2_det_nonzero(ctx, mm) {
        return Err(Error::domain("twisted_count_brute", format!("matrix is singular mod {}", ctx.p())));
    }
    let tau = g.tau_mod(ctx)?;
    let w = spec.cover_weight() as u64;
    let half = (ctx.p64() - 1) / 2;
    let p = ctx.p();
    let qq = (p * p) as u64;
    let elem = |idx: u64| Fp2Elem {
        a: (idx % p as u64) as u32,
        b: (idx / p as u64) as u32,
    };
    let mut total: u128 = 0;
    for j in 0..=n {
        let k = (n - j) as u32;
        let count = qq.pow(k);
        total += (0..count)
            .into_par_iter()
            .map(|idx| {
                let mut x = vec![Fp2Elem::ZERO; n + 1];
                x[j] = Fp2Elem::ONE;
                let mut r = idx;
                for c in (j + 1..=n).rev() {
                    x[c] = elem(r % qq);
                    r /= qq;
                }
                let y: Vec<Fp2Elem> = m
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(&x)
                            .fold(Fp2Elem::ZERO, |s, (&c, &xi)| ctx.fp2_add(s, ctx.fp2_scale(c, xi)))
                    })
                    .collect();
                let fx: Vec<Fp2Elem> = x.iter().map(|&v| ctx.frobenius(v)).collect();
                let kk = y.iter().position(|v| !v.is_zero()).unwrap();
                let s = ctx.fp2_mul(fx[kk], ctx.fp2_inv(y[kk]).unwrap());
                if (0..=n).any(|i| fx[i] != ctx.fp2_mul(s, y[i])) {
                    return 0u128;
                }
                let f = cover.eval_fp2(ctx, &x);
                if f.is_zero() {
                    return 1;
                }
                let lhs = ctx.fp2_pow(f, half);
                let rhs = ctx.fp2_scale(tau, ctx.fp2_pow(s, w));
                if lhs == rhs {
                    2
                } else {
                    0
                }
            })
            .sum::<u128>();
    }
    Ok(TwistedCount { g: g.clone(), t: total })
}

/// Census of `φ(c ∏ L(C y))` over `y ∈ P^n(F_p)` for an `F_{p²}` matrix `C`
/// whose image consists of twisted points; every value must lie in `F_p`.
fn h90_census(ctx: &FieldCtx, forms: &[Vec<Fp2Elem>], twist: u32, n: usize) -> Result<[u128; 3]> {
    let p = ctx.p();
    let mut out = [0u128; 3];
    for j in 0..=n {
        let k = (n - j) as u32;
        let consts: Vec<Fp2Elem> = forms.iter().map(|f| f[j]).collect();
        let outer_count = if k == 0 { 1 } else { p };
        let part = (0..outer_count)
            .into_par_iter()
            .map(|y0| -> Result<[u128; 3]> {
                let mut acc = [0u128; 3];
                let mut base = consts.clone();
                if k >= 1 {
                    for (b, f) in base.iter_mut().zip(forms) {
                        *b = ctx.fp2_add(*b, ctx.fp2_scale(y0, f[j + 1]));
                    }
                }
                let rest: Vec<usize> = (j + 2..=n).collect();
                let mut digits = vec![0u32; rest.len()];
                loop {
                    let mut prod = Fp2Elem::from_fp(twist);
                    for b in &base {
                        prod = ctx.fp2_mul(prod, *b);
                    }
                    if !prod.in_base_field() {
                        return Err(Error::Integrity(format!(
                            "branch value outside F_p on a twisted point at p = {p}"
                        )));
                    }
                    acc[(ctx.legendre(prod.a) + 1) as usize] += 1;
                    let mut d = rest.len();
                    loop {
                        if d == 0 {
                            return Ok(acc);
                        }
                        d -= 1;
                        let v = rest[d];
                        for (b, f) in base.iter_mut().zip(forms) {
                            *b = ctx.fp2_add(*b, f[v]);
                        }
                        digits[d] += 1;
                        if digits[d] < p {
                            break;
                        }
                        digits[d] = 0;
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        for a in part {
            for c in 0..3 {
                out[c] += a[c];
            }
        }
    }
    Ok(out)
}

/// Both lifts of one base automorphism from a single pass.
#[derive(Clone, Debug, Serialize)]
pub struct LiftPair {
    /// `T` for the lift `g`.
    pub t_g: u128,
    /// `T` for `g` composed with the deck involution.
    pub t_other: u128,
}

/// `T_g` through a Hilbert 90 trivialization `C = A + M A^{(p)}`.
pub fn twisted_count_h90_pair(
    ctx: &FieldCtx,
    spec: &DoubleCoverSpec,
    g: &ProjDeckMap,
    seed: u64,
) -> Result<LiftPair> {
    if !g.is_involutive_on_base() {
        return Err(Error::Unsupported("Hilbert 90 path needs M^2 scalar".into()));
    }
    let n = spec.dim();
    let cover = spec.reduce(ctx)?;
    // rescale so that M² = I over F_p
    let sigma = ctx.reduce_i64(g.square_scalar());
    let qs = ctx.sqrt(sigma).filter(|&x| x != 0).ok_or_else(|| {
        Error::Unsupported(format!("M^2 = {} I is not a nonzero square mod {}", g.square_scalar(), ctx.p()))
    })?;
    let qinv = ctx.inv(qs).unwrap();
    let m: Vec<Vec<u32>> = g
        .matrix_mod(ctx)
        .iter()
        .map(|r| r.iter().map(|&x| ctx.mul(x, qinv)).collect())
        .collect();
    let tau = ctx.mul(g.tau_mod(ctx)?, ctx.pow(qinv, spec.cover_weight() as u64));

    let identity = g.matrix.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == (i == j) as i64));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c_mat: Option<Vec<Vec<Fp2Elem>>> = None;
    if identity {
        c_mat = Some((0..=n).map(|i| (0..=n).map(|j| Fp2Elem::from_fp((i == j) as u32)).collect()).collect());
    }
    for _ in 0..64 {
        if c_mat.is_some() {
            break;
        }
        let a: Vec<Vec<Fp2Elem>> = (0..=n)
            .map(|_| {
                (0..=n)
                    .map(|_| Fp2Elem {
                        a: rng.gen_range(0..ctx.p()),
                        b: rng.gen_range(0..ctx.p()),
                    })
                    .collect()
            })
            .collect();
        let c: Vec<Vec<Fp2Elem>> = (0..=n)
            .map(|i| {
                (0..=n)
                    .map(|j| {
                        let ma = (0..=n).fold(Fp2Elem::ZERO, |s, k| {
                            ctx.fp2_add(s, ctx.fp2_scale(m[i][k], ctx.frobenius(a[k][j])))
                        });
                        ctx.fp2_add(a[i][j], ma)
                    })
                    .collect()
            })
            .collect();
        if fp2_det_nonzero(ctx, c.clone()) {
            c_mat = Some(c);
        }
    }
    let c = c_mat.ok_or_else(|| Error::Integrity("no invertible Hilbert 90 matrix found".into()))?;
    // forms pulled back through C: (L C)_j
    let forms: Vec<Vec<Fp2Elem>> = cover
        .forms
        .iter()
        .map(|f| {
            (0..=n)
                .map(|j| {
                    (0..=n).fold(Fp2Elem::ZERO, |s, k| ctx.fp2_add(s, ctx.fp2_scale(f[k], c[k][j])))
                })
                .collect()
        })
        .collect();
    let [minus, zero, plus] = h90_census(ctx, &forms, cover.twist, n)?;
    let (t_plus, t_minus) = (zero + 2 * plus, zero + 2 * minus);
    let one = 1 % ctx.p();
    let pm1 = ctx.neg(1);
    let (t_g, t_other) = if tau == one {
        (t_plus, t_minus)
    } else if tau == pm1 {
        (t_minus, t_plus)
    } else {
        return Err(Error::Unsupported(format!("lift scalar {tau} is not ±1 mod {}", ctx.p())));
    };
    Ok(LiftPair { t_g, t_other })
}

pub fn twisted_count_h90(
    ctx: &FieldCtx,
    spec: &DoubleCoverSpec,
    g: &ProjDeckMap,
    seed: u64,
) -> Result<TwistedCount> {
    Ok(TwistedCount {
        g: g.clone(),
        t: twisted_count_h90_pair(ctx, spec, g, seed)?.t_g,
    })
}

fn check_closed(group: &[ProjDeckMap]) -> Result<()> {
    for a in group {
        for b in group {
            let ab = a.compose(b)?;
            if !group.contains(&ab) {
                return Err(Error::domain("count_quotient", "group is not closed under composition"));
            }
        }
    }
    if !group.iter().any(|g| g.is_identity()) {
        return Err(Error::domain("count_quotient", "group does not contain the identity"));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientCount {
    pub record: CountRecord,
    pub twisted: Vec<TwistedCount>,
}

fn burnside(total: u128, order: usize) -> Result<u128> {
    if total % order as u128 != 0 {
        return Err(Error::Integrity(format!(
            "Burnside sum {total} is not divisible by |G| = {order}; the lift is inconsistent"
        )));
    }
    Ok(total / order as u128)
}

/// `[V/G]_p` via the Hilbert 90 path, or via `F_{p²}` enumeration when
/// `brute` is set.
pub fn count_quotient(
    ctx: &FieldCtx,
    spec: &DoubleCoverSpec,
    group: &[ProjDeckMap],
    brute: bool,
    seed: u64,
) -> Result<QuotientCount> {
    check_closed(group)?;
    let start = std::time::Instant::now();
    let twisted = group
        .iter()
        .map(|g| {
            if g.is_identity() && !brute {
                let t = count_double_cover(ctx, spec)?.count;
                Ok(TwistedCount { g: g.clone(), t })
            } else if brute {
                twisted_count_brute(ctx, spec, g)
            } else {
                twisted_count_h90(ctx, spec, g, seed)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let count = burnside(twisted.iter().map(|t| t.t).sum(), group.len())?;
    let label = format!("{}/<{} maps>", spec.name(), group.len());
    Ok(QuotientCount {
        record: CountRecord {
            variety_id: label,
            p: ctx.p(),
            method: if brute { Method::QuotientBrute } else { Method::QuotientH90 },
            count,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        },
        twisted,
    })
}

/// The group generated by `gens` (closure under composition).
pub fn generate_group(spec: &DoubleCoverSpec, gens: &[ProjDeckMap]) -> Result<Vec<ProjDeckMap>> {
    let mut group = vec![ProjDeckMap::identity(spec)];
    let mut frontier = group.clone();
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = g.compose(&x)?;
            if !group.contains(&y) {
                group.push(y.clone());
                frontier.push(y);
            }
            if group.len() > 4096 {
                return Err(Error::Unsupported("group too large".into()));
            }
        }
    }
    Ok(group)
}

fn perm_matrix(images: &[(usize, i64)]) -> Vec<Vec<i64>> {
    // row i of M x is sign · x_{src}
    let n = images.len();
    (0..n)
        .map(|i| {
            let (src, sign) = images[i];
            (0..n).map(|j| if j == src { sign } else { 0 }).collect()
        })
        .collect()
}

/// `ι₁: x_i ↦ x_{i+3}`.
pub fn iota1(spec: &DoubleCoverSpec) -> Result<ProjDeckMap> {
    ProjDeckMap::new(spec, perm_matrix(&(0..6).map(|i| ((i + 3) % 6, 1)).collect::<Vec<_>>()), 1)
}

/// `ι₂: x_i ↦ x_{5-i}`.
pub fn iota2(spec: &DoubleCoverSpec) -> Result<ProjDeckMap> {
    ProjDeckMap::new(spec, perm_matrix(&(0..6).map(|i| (5 - i, 1)).collect::<Vec<_>>()), 1)
}

/// `ι₃ = ι₁ι₂: x_i ↦ x_{2-i}`.
pub fn iota3(spec: &DoubleCoverSpec) -> Result<ProjDeckMap> {
    ProjDeckMap::new(spec, perm_matrix(&(0..6).map(|i| ((8 - i) % 6, 1)).collect::<Vec<_>>()), 1)
}

/// `α₁: x ↦ (x1, x0, x4, x3, x2, x5)`.
pub fn alpha1(spec: &DoubleCoverSpec) -> Result<ProjDeckMap> {
    ProjDeckMap::new(spec, perm_matrix(&[(1, 1), (0, 1), (4, 1), (3, 1), (2, 1), (5, 1)]), 1)
}

/// `α₂: x ↦ (-x1, -x0, x2, -x5, x4, -x3)`.
pub fn alpha2(spec: &DoubleCoverSpec) -> Result<ProjDeckMap> {
    ProjDeckMap::new(spec, perm_matrix(&[(1, -1), (0, -1), (2, 1), (5, -1), (4, 1), (3, -1)]), 1)
}

/// The six named involutions with their covers.
pub fn named_involutions() -> Result<Vec<(&'static str, DoubleCoverSpec, ProjDeckMap)>> {
    let f1 = bundled::f1();
    let v32 = bundled::v32();
    let a1 = alpha1(&v32)?;
    let a2 = alpha2(&v32)?;
    let a12 = a1.compose(&a2)?;
    Ok(vec![
        ("iota1", f1.clone(), iota1(&f1)?),
        ("iota2", f1.clone(), iota2(&f1)?),
        ("iota3", f1.clone(), iota3(&f1)?),
        ("alpha1", v32.clone(), a1),
        ("alpha2", v32.clone(), a2),
        ("alpha1alpha2", v32.clone(), a12),
    ])
}

#[derive(Clone, Debug, serde::Deserialize)]
struct MapEntry {
    matrix: Vec<Vec<i64>>,
    #[serde(default = "plus_one")]
    deck_sign: i8,
}

fn plus_one() -> i8 {
    1
}

#[derive(Clone, Debug, serde::Deserialize)]
struct QuotientFile {
    /// A bundled cover name, or an inline arrangement.
    arrangement: serde_json::Value,
    generators: Vec<MapEntry>,
}

/// A cover with the group generated by some lifted automorphisms.
#[derive(Clone, Debug)]
pub struct QuotientSpec {
    pub spec: DoubleCoverSpec,
    pub group: Vec<ProjDeckMap>,
}

impl QuotientSpec {
    /// `{"arrangement": "v32" | {...}, "generators": [{"matrix": [[..]], "deck_sign": 1}]}`.
    pub fn from_json(text: &str) -> Result<QuotientSpec> {
        let file: QuotientFile = serde_json::from_str(text)?;
        let spec = match &file.arrangement {
            serde_json::Value::String(name) => bundled::by_name(name)
                .ok_or_else(|| Error::InvalidArrangement(format!("unknown bundled cover {name}")))?,
            v => DoubleCoverSpec::from_json(&v.to_string())?,
        };
        let gens = file
            .generators
            .into_iter()
            .map(|m| ProjDeckMap::new(&spec, m.matrix, m.deck_sign))
            .collect::<Result<Vec<_>>>()?;
        let group = generate_group(&spec, &gens)?;
        Ok(QuotientSpec { spec, group })
    }

    /// A named subgroup: an involution from [`named_involutions`], or `g4`.
    pub fn named(name: &str) -> Result<QuotientSpec> {
        if name == "g4" {
            let v32 = bundled::v32();
            let gens = [alpha1(&v32)?, alpha2(&v32)?];
            let group = generate_group(&v32, &gens)?;
            return Ok(QuotientSpec { spec: v32, group });
        }
        let (_, spec, g) = named_involutions()?
            .into_iter()
            .find(|(n, _, _)| *n == name)
            .ok_or_else(|| {
                Error::domain(
                    "quotient",
                    format!("unknown group {name}; expected iota1, iota2, iota3, alpha1, alpha2, alpha1alpha2 or g4"),
                )
            })?;
        let group = generate_group(&spec, &[g])?;
        Ok(QuotientSpec { spec, group })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureRow {
    pub claim: &'static str,
    pub variety: String,
    pub p: u32,
    pub predicted: i128,
    /// Count for the lift with deck sign +1.
    pub count_plus: i128,
    /// Count for the lift with deck sign -1.
    pub count_minus: i128,
    /// Which lift reproduces the prediction, if any.
    pub matching_lift: Option<i8>,
    /// The row compares the `+1` lift (the lift fixing `t` on invariant
    /// points), or the base quotient for `R_i`.
    pub pass: bool,
    pub conjecture: bool,
}

fn sum_powers(p: u32) -> i128 {
    (0..=5).map(|i| (p as i128).pow(i)).sum()
}

fn row(
    claim: &'static str,
    variety: &str,
    p: u32,
    predicted: i128,
    plus: i128,
    minus: i128,
    conjecture: bool,
) -> ConjectureRow {
    let matching_lift = if plus == predicted {
        Some(1)
    } else if minus == predicted {
        Some(-1)
    } else {
        None
    };
    ConjectureRow {
        claim,
        variety: variety.to_string(),
        p,
        predicted,
        count_plus: plus,
        count_minus: minus,
        matching_lift,
        pass: plus == predicted,
        conjecture,
    }
}

/// Compare quotient counts with the small-prime results and conjectures.
/// Rows needing level-8 coefficients are omitted when `level8` is `None`.
pub fn verify_quotient_conjectures(
    ctx: &FieldCtx,
    level8: Option<&Level8>,
    seed: u64,
) -> Result<Vec<ConjectureRow>> {
    let p = ctx.p();
    let q = p as i128;
    let sp = sum_powers(p);
    let mut rows = Vec::new();
    let pair_counts = |spec: &DoubleCoverSpec, g: &ProjDeckMap, n: u128| -> Result<(i128, i128)> {
        let pair = twisted_count_h90_pair(ctx, spec, g, seed)?;
        let plus = burnside(n + pair.t_g, 2)? as i128;
        let minus = burnside(n + pair.t_other, 2)? as i128;
        Ok(if g.deck_sign() == 1 { (plus, minus) } else { (minus, plus) })
    };

    let f1 = bundled::f1();
    let n_f1 = count_double_cover(ctx, &f1)?.count;
    let base = count_projective_space(ctx, 5) as i128;
    let phi_m1 = ctx.legendre(ctx.neg(1)) as i128;

    let (q1p, q1m) = pair_counts(&f1, &iota1(&f1)?, n_f1)?;
    rows.push(row("prop-count-q-r", "Q1", p, sp, q1p, q1m, false));
    // R_i = P^5 / ι_i: the twisted count of a base involution is |P^5(F_p)|.
    rows.push(row("prop-count-q-r", "R1", p, sp, base, base, false));

    let (q2p, q2m) = pair_counts(&f1, &iota2(&f1)?, n_f1)?;
    let (q3p, q3m) = pair_counts(&f1, &iota3(&f1)?, n_f1)?;
    if let Some(l8) = level8 {
        let a = l8.weight6.coeff(p as u64)? as i128;
        let b = l8.weight4.coeff(p as u64)? as i128;
        rows.push(row("conj-q2", "Q2", p, sp - q * b, q2p, q2m, true));
        rows.push(row("conj-q3", "Q3", p, sp - a - phi_m1 * q * q, q3p, q3m, true));
    }
    rows.push(row("conj-q3", "R3", p, sp, base, base, true));

    let v32 = bundled::v32();
    let n_v = count_double_cover(ctx, &v32)?.count;
    let [a2, _, a4, a6] = cm_coefficients(p)?;
    let (a2, a4, a6) = (a2 as i128, a4 as i128, a6 as i128);
    let a1 = alpha1(&v32)?;
    let al2 = alpha2(&v32)?;
    let a12 = a1.compose(&al2)?;
    let (v1p, v1m) = pair_counts(&v32, &a1, n_v)?;
    let (v2p, v2m) = pair_counts(&v32, &al2, n_v)?;
    let (v12p, v12m) = pair_counts(&v32, &a12, n_v)?;
    rows.push(row("conj-count-mod-a1", "V32/alpha1", p, sp - a6 - q * q * a2, v1p, v1m, true));
    rows.push(row("conj-count-mod-a1", "V32/alpha2", p, sp - a6 - q * a4, v2p, v2m, true));
    rows.push(row("conj-count-mod-a1", "V32/alpha1alpha2", p, v1p, v12p, v12m, true));

    let g4 = generate_group(&v32, &[a1.clone(), al2.clone()])?;
    let g4_plus = count_quotient(ctx, &v32, &g4, false, seed)?.record.count as i128;
    let g4_twisted = generate_group(&v32, &[a1.other_lift(), al2.other_lift()])?;
    let g4_minus = count_quotient(ctx, &v32, &g4_twisted, false, seed)?.record.count as i128;
    rows.push(row("conj-rigid-32", "V32/G4", p, sp - a6, g4_plus, g4_minus, true));
    Ok(rows)
}
