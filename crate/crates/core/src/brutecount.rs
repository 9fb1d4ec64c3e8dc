//! Exact point counts by enumeration.
//!
//! Every count reduces to a census of the quadratic character of
//! `c · ∏ L_i` over the points of an affine or projective space. Points are
//! visited in odometer order with every form updated incrementally, so the
//! inner loop is one table lookup and one addition per form.

use std::ops::Range;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangements::{DoubleCoverSpec, ReducedCover};
use crate::error::{Error, Result};
use crate::ffcore::FieldCtx;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignCensus {
    pub plus: u128,
    pub zero: u128,
    pub minus: u128,
}

impl SignCensus {
    pub fn total(&self) -> u128 {
        self.plus + self.zero + self.minus
    }

    /// `v_+ - v_-`.
    pub fn diff(&self) -> i128 {
        self.plus as i128 - self.minus as i128
    }

    /// Points of the double cover `s^2 = f` over the counted space.
    pub fn cover_count(&self) -> u128 {
        2 * self.plus + self.zero
    }

    fn add(self, o: SignCensus) -> SignCensus {
        SignCensus {
            plus: self.plus + o.plus,
            zero: self.zero + o.zero,
            minus: self.minus + o.minus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Brute,
    Fibration,
    Formula,
    Hypergeometric,
    QuotientBrute,
    QuotientH90,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Fibration => "fibration",
            Method::Formula => "formula",
            Method::Hypergeometric => "hypergeometric",
            Method::QuotientBrute => "quotient-brute",
            Method::QuotientH90 => "quotient-h90",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        Some(match s {
            "brute" => Method::Brute,
            "fibration" => Method::Fibration,
            "formula" => Method::Formula,
            "hypergeometric" => Method::Hypergeometric,
            "quotient-brute" => Method::QuotientBrute,
            "quotient-h90" => Method::QuotientH90,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    pub variety_id: String,
    pub p: u32,
    pub method: Method,
    pub count: u128,
    pub wall_ms: f64,
}

impl CountRecord {
    pub fn timed(
        variety_id: impl Into<String>,
        p: u32,
        method: Method,
        f: impl FnOnce() -> Result<u128>,
    ) -> Result<CountRecord> {
        let start = Instant::now();
        let count = f()?;
        Ok(CountRecord {
            variety_id: variety_id.into(),
            p,
            method,
            count,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        })
    }
}

/// Where a census is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    /// The affine patch `x_0 = 1`.
    Affine,
    /// All of `P^n`, one normalized representative per point.
    Projective,
}

/// Linear forms restricted to an affine space `F_p^k`:
/// `L_i(y) = consts[i] + Σ_v coeffs[v][i] y_v`.
#[derive(Clone, Debug)]
pub struct AffineSystem {
    pub nvars: usize,
    pub consts: Vec<u32>,
    /// `coeffs[v][i]`, variable-major so one step touches a contiguous row.
    pub coeffs: Vec<Vec<u32>>,
    pub twist_sign: i8,
}

impl AffineSystem {
    /// The patch of `P^n` where `x_j = 1` and `x_i = 0` for `i < j`.
    pub fn projective_patch(cover: &ReducedCover, ctx: &FieldCtx, j: usize) -> AffineSystem {
        let n = cover.dim;
        AffineSystem {
            nvars: n - j,
            consts: cover.forms.iter().map(|f| f[j]).collect(),
            coeffs: (j + 1..=n)
                .map(|v| cover.forms.iter().map(|f| f[v]).collect())
                .collect(),
            twist_sign: ctx.legendre(cover.twist),
        }
    }

    pub fn points(&self, p: u32) -> u128 {
        (p as u128).pow(self.nvars as u32)
    }
}

fn census_inner(ctx: &FieldCtx, sys: &AffineSystem, fixed_first: Option<u32>) -> SignCensus {
    let p = ctx.p();
    let sq = ctx.sqtable();
    let nforms = sys.consts.len();
    let mut base = sys.consts.clone();
    let start_var = if let Some(y0) = fixed_first {
        for i in 0..nforms {
            base[i] = ctx.add(base[i], ctx.mul(sys.coeffs[0][i], y0));
        }
        1
    } else {
        0
    };
    let k = sys.nvars;
    let mut counts = [0u128; 3];
    if start_var == k {
        let s = base.iter().fold(sys.twist_sign, |s, &v| s * sq[v as usize]);
        counts[(s + 1) as usize] += 1;
        return SignCensus {
            minus: counts[0],
            zero: counts[1],
            plus: counts[2],
        };
    }
    let last = k - 1;
    let step = &sys.coeffs[last];
    let outer: Vec<usize> = (start_var..last).collect();
    let mut digits = vec![0u32; outer.len()];
    let mut vals = vec![0u32; nforms];
    let mut local = [0u64; 3];
    loop {
        vals.copy_from_slice(&base);
        for _ in 0..p {
            let mut s = sys.twist_sign;
            for v in vals.iter() {
                s *= sq[*v as usize];
            }
            local[(s + 1) as usize] += 1;
            for (v, &a) in vals.iter_mut().zip(step) {
                let t = *v + a;
                *v = if t >= p { t - p } else { t };
            }
        }
        if local[1] > u64::MAX / 2 {
            for c in 0..3 {
                counts[c] += local[c] as u128;
                local[c] = 0;
            }
        }
        // odometer over the outer variables, last one fastest
        let mut d = outer.len();
        loop {
            if d == 0 {
                for c in 0..3 {
                    counts[c] += local[c] as u128;
                }
                return SignCensus {
                    minus: counts[0],
                    zero: counts[1],
                    plus: counts[2],
                };
            }
            d -= 1;
            let row = &sys.coeffs[outer[d]];
            for (b, &a) in base.iter_mut().zip(row) {
                let t = *b + a;
                *b = if t >= p { t - p } else { t };
            }
            digits[d] += 1;
            if digits[d] < p {
                break;
            }
            digits[d] = 0;
        }
    }
}

/// Census over the first variable restricted to `range`.
pub fn census_affine_range(ctx: &FieldCtx, sys: &AffineSystem, range: Range<u32>) -> SignCensus {
    if sys.nvars == 0 {
        return if range.contains(&0) {
            census_inner(ctx, sys, None)
        } else {
            SignCensus::default()
        };
    }
    range
        .into_par_iter()
        .map(|y0| census_inner(ctx, sys, Some(y0)))
        .reduce(SignCensus::default, SignCensus::add)
}

pub fn census_affine(ctx: &FieldCtx, sys: &AffineSystem) -> SignCensus {
    if sys.nvars <= 1 || sys.points(ctx.p()) < 4096 {
        return census_inner(ctx, sys, None);
    }
    census_affine_range(ctx, sys, 0..ctx.p())
}

fn census_projective(ctx: &FieldCtx, cover: &ReducedCover) -> SignCensus {
    (0..=cover.dim)
        .map(|j| census_affine(ctx, &AffineSystem::projective_patch(cover, ctx, j)))
        .fold(SignCensus::default(), SignCensus::add)
}

/// Census of `φ(c · ∏ L_i)` over `space`.
pub fn sign_census(ctx: &FieldCtx, cover: &ReducedCover, space: Space) -> Result<SignCensus> {
    match space {
        Space::Projective => {
            if cover.degree() % 2 == 1 {
                return Err(Error::domain(
                    "sign_census",
                    format!("odd degree {} on projective space", cover.degree()),
                ));
            }
            Ok(census_projective(ctx, cover))
        }
        Space::Affine => Ok(census_affine(ctx, &AffineSystem::projective_patch(cover, ctx, 0))),
    }
}

/// `(p^{n+1} - 1)/(p - 1)`.
pub fn count_projective_space(ctx: &FieldCtx, n: u32) -> u128 {
    (0..=n).map(|i| (ctx.p() as u128).pow(i)).sum()
}

pub fn count_double_cover(ctx: &FieldCtx, spec: &DoubleCoverSpec) -> Result<CountRecord> {
    let cover = spec.reduce(ctx)?;
    CountRecord::timed(spec.name(), ctx.p(), Method::Brute, || {
        Ok(sign_census(ctx, &cover, Space::Projective)?.cover_count())
    })
}

#[derive(Clone, Debug)]
pub struct QuotientProductCount {
    pub count: u128,
    pub censuses: Vec<SignCensus>,
}

/// `∏ [S_i]_p + ∏ (v_{i,+} - v_{i,-})`: points of `t² = ∏ f_i` over the
/// product. For two factors this is `(D_1 × D_2)/σ` with `σ` negating both
/// cover coordinates; from three factors on the σ-quotient has more points.
pub fn count_quotient_product(
    ctx: &FieldCtx,
    factors: &[(&ReducedCover, Space)],
) -> Result<QuotientProductCount> {
    let censuses = factors
        .iter()
        .map(|(c, s)| sign_census(ctx, c, *s))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuotientProductCount {
        count: quotient_product_from_censuses(&censuses),
        censuses,
    })
}

pub fn quotient_product_from_censuses(censuses: &[SignCensus]) -> u128 {
    let base: i128 = censuses.iter().map(|c| c.total() as i128).product();
    let twist: i128 = censuses.iter().map(|c| c.diff()).product();
    (base + twist) as u128
}

/// Basis of the null space of `rows` over `F_p`.
pub fn kernel_mod_p(ctx: &FieldCtx, rows: &[Vec<u32>], ncols: usize) -> Vec<Vec<u32>> {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = ctx.inv(m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = ctx.mul(*x, inv);
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..ncols {
                    let sub = ctx.mul(f, m[r][j]);
                    m[i][j] = ctx.sub(m[i][j], sub);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u32; ncols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = ctx.neg(m[i][f]);
            }
            v
        })
        .collect()
}

/// Census over the projective points satisfying the linear `constraints`.
pub fn census_on_locus(
    ctx: &FieldCtx,
    cover: &ReducedCover,
    constraints: &[Vec<u32>],
) -> SignCensus {
    let basis = kernel_mod_p(ctx, constraints, cover.dim + 1);
    if basis.is_empty() {
        return SignCensus::default();
    }
    let forms = cover
        .forms
        .iter()
        .map(|f| {
            basis
                .iter()
                .map(|b| {
                    f.iter()
                        .zip(b)
                        .fold(0u32, |s, (&c, &x)| ctx.add(s, ctx.mul(c, x)))
                })
                .collect()
        })
        .collect();
    let restricted = ReducedCover {
        dim: basis.len() - 1,
        forms,
        twist: cover.twist,
    };
    census_projective(ctx, &restricted)
}

/// Points of the cover over the fibre `b·m0 = a·m1` of `(m0 : m1)`,
/// including the base locus. With `patch = Some(h)` only points with
/// `h ≠ 0` are counted.
pub fn count_fibre(
    ctx: &FieldCtx,
    spec: &DoubleCoverSpec,
    m0: &[i64],
    m1: &[i64],
    value: (u32, u32),
    patch: Option<&[i64]>,
) -> Result<CountRecord> {
    let n = spec.dim();
    if m0.len() != n + 1 || m1.len() != n + 1 {
        return Err(Error::domain("count_fibre", "map components have the wrong length"));
    }
    if crate::arrangements::exact::rank(&[m0, m1]) < 2 {
        return Err(Error::domain("count_fibre", "map components are proportional"));
    }
    let (a, b) = value;
    if a % ctx.p() == 0 && b % ctx.p() == 0 {
        return Err(Error::domain("count_fibre", "(0:0) is not a point of P^1"));
    }
    let cover = spec.reduce(ctx)?;
    let red = |v: &[i64]| -> Vec<u32> { v.iter().map(|&c| ctx.reduce_i64(c)).collect() };
    let (r0, r1) = (red(m0), red(m1));
    let line: Vec<u32> = r0
        .iter()
        .zip(&r1)
        .map(|(&x, &y)| ctx.sub(ctx.mul(b % ctx.p(), x), ctx.mul(a % ctx.p(), y)))
        .collect();
    let id = format!("{}:fibre({}:{})", spec.name(), a, b);
    CountRecord::timed(id, ctx.p(), Method::Brute, || {
        let all = census_on_locus(ctx, &cover, &[line.clone()]).cover_count();
        Ok(match patch {
            None => all,
            Some(h) => all - census_on_locus(ctx, &cover, &[line.clone(), red(h)]).cover_count(),
        })
    })
}

/// Points of the total space `t² v³ = u z0 (-v z0 + u z2) z1 (-z1 + z2)
/// (z0 + 2 z1 - z2)(-v z0 - 2 v z1 + (u + v) z2)` in `P(3,1,1,1) × P^1`.
pub fn count_script_l_brute(ctx: &FieldCtx) -> u128 {
    let p = ctx.p();
    let rhs = |z: [u32; 3], u: u32, v: u32| -> u32 {
        let [z0, z1, z2] = z;
        let f = [
            u,
            z0,
            ctx.add(ctx.neg(ctx.mul(v, z0)), ctx.mul(u, z2)),
            z1,
            ctx.sub(z2, z1),
            ctx.sub(ctx.add(z0, ctx.mul(2 % p, z1)), z2),
            ctx.add(
                ctx.neg(ctx.mul(v, ctx.add(z0, ctx.mul(2 % p, z1)))),
                ctx.mul(ctx.add(u, v), z2),
            ),
        ];
        f.iter().fold(1, |acc, &x| ctx.mul(acc, x))
    };
    let mut pts: Vec<[u32; 3]> = Vec::new();
    pts.push([0, 0, 1]);
    for z2 in 0..p {
        pts.push([0, 1, z2]);
    }
    for z1 in 0..p {
        for z2 in 0..p {
            pts.push([1, z1, z2]);
        }
    }
    let total: u128 = pts
        .par_iter()
        .map(|&z| {
            let mut c: u128 = 0;
            for u in 0..p {
                c += (1 + ctx.legendre(rhs(z, u, 1)) as i64) as u128;
            }
            if rhs(z, 1, 0) == 0 {
                c += p as u128;
            }
            c
        })
        .sum();
    // the vertex (1:0:0:0) × (1:0)
    total + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangements::bundled;
    use num_rational::Ratio;
    use proptest::prelude::*;

    fn cover(dim: usize, forms: Vec<Vec<i64>>) -> DoubleCoverSpec {
        DoubleCoverSpec::new("t", dim, forms, Ratio::from_integer(1), None).unwrap()
    }

    #[test]
    fn projective_space_sizes() {
        let c = |p| FieldCtx::new(p).unwrap();
        assert_eq!(count_projective_space(&c(3), 5), 364);
        assert_eq!(count_projective_space(&c(5), 2), 31);
        assert_eq!(count_projective_space(&c(7), 0), 1);
    }

    #[test]
    fn census_of_x0x1_on_p1() {
        let ctx = FieldCtx::new(3).unwrap();
        let spec = cover(1, vec![vec![1, 0], vec![0, 1]]);
        let c = sign_census(&ctx, &spec.reduce(&ctx).unwrap(), Space::Projective).unwrap();
        assert_eq!((c.plus, c.zero, c.minus), (1, 2, 1));
        assert_eq!(count_double_cover(&ctx, &spec).unwrap().count, 4);
    }

    #[test]
    fn k32_branch_locus() {
        let ctx = FieldCtx::new(5).unwrap();
        let c = sign_census(&ctx, &bundled::k32().reduce(&ctx).unwrap(), Space::Projective).unwrap();
        assert_eq!(c.zero, 25);
        assert_eq!(c.diff(), -6);
        let ctx = FieldCtx::new(13).unwrap();
        let c = sign_census(&ctx, &bundled::k32().reduce(&ctx).unwrap(), Space::Projective).unwrap();
        assert_eq!((c.plus, c.zero, c.minus), (60, 73, 50));
    }

    #[test]
    fn small_fivefold_counts() {
        let ctx = FieldCtx::new(3).unwrap();
        assert_eq!(count_double_cover(&ctx, &bundled::v32()).unwrap().count, 364);
        assert_eq!(count_double_cover(&ctx, &bundled::f1()).unwrap().count, 365);
        let ctx = FieldCtx::new(5).unwrap();
        assert_eq!(count_double_cover(&ctx, &bundled::f1()).unwrap().count, 3965);
        assert_eq!(count_double_cover(&ctx, &bundled::v32()).unwrap().count, 3978);
    }

    #[test]
    fn k32_at_five() {
        let ctx = FieldCtx::new(5).unwrap();
        assert_eq!(count_double_cover(&ctx, &bundled::k32()).unwrap().count, 25);
    }

    #[test]
    fn odd_degree_projective_rejected() {
        let ctx = FieldCtx::new(5).unwrap();
        let c = ReducedCover {
            dim: 1,
            forms: vec![vec![1, 0]],
            twist: 1,
        };
        assert!(sign_census(&ctx, &c, Space::Projective).is_err());
        assert!(sign_census(&ctx, &c, Space::Affine).is_ok());
    }

    #[test]
    fn quotient_of_two_lines() {
        let ctx = FieldCtx::new(3).unwrap();
        let line = ReducedCover {
            dim: 1,
            forms: vec![vec![0, 1]],
            twist: 1,
        };
        let q = count_quotient_product(&ctx, &[(&line, Space::Affine), (&line, Space::Affine)])
            .unwrap();
        assert_eq!(q.count, 9);
    }

    #[test]
    fn f1_fibres() {
        let ctx = FieldCtx::new(5).unwrap();
        let f1 = bundled::f1();
        let (m0, m1) = ([1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0]);
        let at_zero = count_fibre(&ctx, &f1, &m0, &m1, (0, 1), Some(&m1)).unwrap();
        assert_eq!(at_zero.count, 625);
        let hyper = count_fibre(&ctx, &f1, &m0, &m1, (1, 0), None).unwrap();
        assert_eq!(hyper.count, 781);
        assert!(count_fibre(&ctx, &f1, &m0, &m0, (1, 0), None).is_err());
    }

    #[test]
    fn v32_base_locus() {
        let ctx = FieldCtx::new(7).unwrap();
        let cover = bundled::v32().reduce(&ctx).unwrap();
        let c = census_on_locus(
            &ctx,
            &cover,
            &[vec![1, 1, 0, 0, 0, 0], vec![0, 0, 1, 0, 1, 0]],
        );
        assert_eq!(c.cover_count(), 343 + 49 + 7 + 1);
        assert_eq!(c.zero, c.total());
    }

    #[test]
    fn fibres_sum_to_total() {
        for p in [3u64, 5, 7] {
            let ctx = FieldCtx::new(p).unwrap();
            let f1 = bundled::f1();
            let (m0, m1) = ([1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0]);
            let mut sum: u128 = count_fibre(&ctx, &f1, &m0, &m1, (1, 0), None).unwrap().count;
            for a in 0..ctx.p() {
                sum += count_fibre(&ctx, &f1, &m0, &m1, (a, 1), None).unwrap().count;
            }
            let base = census_on_locus(
                &ctx,
                &f1.reduce(&ctx).unwrap(),
                &[m0.iter().map(|&x| x as u32).collect(), m1.iter().map(|&x| x as u32).collect()],
            )
            .cover_count();
            let total = count_double_cover(&ctx, &f1).unwrap().count;
            assert_eq!(sum - ctx.p() as u128 * base, total, "p = {p}");
        }
    }

    #[test]
    fn script_l_small() {
        let ctx = FieldCtx::new(3).unwrap();
        assert_eq!(count_script_l_brute(&ctx), 73);
        let ctx = FieldCtx::new(5).unwrap();
        assert_eq!(count_script_l_brute(&ctx), 249);
    }

    fn arb_surface() -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 6)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn partition_independence(forms in arb_surface(), k in 1u32..6) {
            let ctx = FieldCtx::new(7).unwrap();
            let Ok(spec) = DoubleCoverSpec::new("r", 2, forms, Ratio::from_integer(1), None) else {
                return Ok(());
            };
            let cover = spec.reduce(&ctx).unwrap();
            let sys = AffineSystem::projective_patch(&cover, &ctx, 0);
            let whole = census_affine(&ctx, &sys);
            let p = ctx.p();
            let mut parts = SignCensus::default();
            for c in 0..k {
                let lo = p * c / k;
                let hi = p * (c + 1) / k;
                parts = parts.add(census_affine_range(&ctx, &sys, lo..hi));
            }
            prop_assert_eq!(whole, parts);
        }

        #[test]
        fn square_twist_invariance(forms in arb_surface(), s in 1i64..50) {
            let ctx = FieldCtx::new(11).unwrap();
            let Ok(spec) = DoubleCoverSpec::new("r", 2, forms, Ratio::from_integer(1), None) else {
                return Ok(());
            };
            prop_assume!(s % 11 != 0);
            let tw = spec.twisted_by(Ratio::from_integer(s * s)).unwrap();
            prop_assert_eq!(
                count_double_cover(&ctx, &spec).unwrap().count,
                count_double_cover(&ctx, &tw).unwrap().count
            );
        }

        #[test]
        fn weil_bound_for_surfaces(forms in arb_surface(), pi in 0usize..4) {
            let p = [5u64, 7, 11, 13][pi];
            let ctx = FieldCtx::new(p).unwrap();
            let Ok(spec) = DoubleCoverSpec::new("r", 2, forms, Ratio::from_integer(1), None) else {
                return Ok(());
            };
            let n = count_double_cover(&ctx, &spec).unwrap().count as i128;
            let p = p as i128;
            prop_assert!((n - (p * p + p + 1)).abs() <= 22 * p);
        }
    }
}
