//! Arithmetic in F_p and F_{p^2}, the quadratic character, primitive roots and
//! Gaussian integers.
//!
//! Residues are canonical representatives in `[0, p)` stored as `u32`; every
//! product is formed in `u64`, which cannot overflow for `p <= 2^31`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest supported characteristic.
pub const MAX_PRIME: u64 = 1 << 31;

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &BASES {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Odd primes in `[lo, hi]`.
pub fn odd_primes_in(lo: u64, hi: u64) -> Vec<u32> {
    (lo.max(3)..=hi.min(MAX_PRIME))
        .filter(|&n| n % 2 == 1 && is_prime(n))
        .map(|n| n as u32)
        .collect()
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Precomputed data for one odd prime `p`.
///
/// Immutable after construction and shared freely between worker threads.
pub struct FieldCtx {
    p: u32,
    sqtable: Vec<i8>,
    g: u32,
    nonresidue: u32,
    dlog: OnceLock<Vec<u32>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("g", &self.g)
            .field("nonresidue", &self.nonresidue)
            .finish()
    }
}

impl FieldCtx {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_PRIME {
            return Err(Error::PrimeOutOfRange(p));
        }
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let pu = p as usize;
        let mut sqtable = vec![-1i8; pu];
        sqtable[0] = 0;
        for x in 1..=(p - 1) / 2 {
            sqtable[((x * x) % p) as usize] = 1;
        }
        let nonresidue = (2..p).find(|&x| sqtable[x as usize] == -1).unwrap() as u32;
        let factors = distinct_prime_factors(p - 1);
        let g = (2..p)
            .find(|&c| factors.iter().all(|&q| pow_mod_u64(c, (p - 1) / q, p) != 1))
            .unwrap_or(1) as u32;
        // p = 3: the loop above finds 2.
        Ok(FieldCtx {
            p: p as u32,
            sqtable,
            g,
            nonresidue,
            dlog: OnceLock::new(),
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn p64(&self) -> u64 {
        self.p as u64
    }

    /// Least primitive root.
    pub fn primitive_root(&self) -> u32 {
        self.g
    }

    /// Least quadratic nonresidue; F_{p^2} is modelled as F_p[s]/(s^2 - d).
    pub fn nonresidue(&self) -> u32 {
        self.nonresidue
    }

    /// The quadratic character as a lookup table indexed by residue.
    #[inline]
    pub fn sqtable(&self) -> &[i8] {
        &self.sqtable
    }

    #[inline]
    pub fn legendre(&self, x: u32) -> i8 {
        self.sqtable[x as usize]
    }

    /// Discrete-log table over F_p^* in base `g`; entry 0 is unused.
    pub fn dlog_table(&self) -> &[u32] {
        self.dlog.get_or_init(|| {
            let mut t = vec![0u32; self.p as usize];
            let mut x = 1u64;
            for e in 0..self.p - 1 {
                t[x as usize] = e;
                x = x * self.g as u64 % self.p64();
            }
            t
        })
    }

    pub fn dlog(&self, x: u32) -> Option<u32> {
        if x % self.p == 0 {
            None
        } else {
            Some(self.dlog_table()[(x % self.p) as usize])
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.p64() {
            (s - self.p64()) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p64() - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.p64()) as u32
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        pow_mod_u64(a as u64, e, self.p64()) as u32
    }

    /// Inverse of a nonzero residue.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a % self.p == 0 {
            None
        } else {
            Some(self.pow(a, self.p64() - 2))
        }
    }

    #[inline]
    pub fn reduce_i64(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    pub fn reduce_i128(&self, x: i128) -> u32 {
        x.rem_euclid(self.p as i128) as u32
    }

    /// Reduce `num/den`; a denominator divisible by `p` is an error.
    pub fn reduce_ratio(&self, num: i64, den: i64) -> Result<u32> {
        let d = self.reduce_i64(den);
        let inv = self.inv(d).ok_or_else(|| Error::DenominatorDivisible {
            den: den.to_string(),
            p: self.p,
        })?;
        Ok(self.mul(self.reduce_i64(num), inv))
    }

    /// `x^{(p-1)/2}` by exponentiation, independent of the lookup table.
    pub fn euler_criterion(&self, x: u32) -> i8 {
        match self.pow(x % self.p, (self.p64() - 1) / 2) {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    /// Some square root of a square residue.
    pub fn sqrt(&self, x: u32) -> Option<u32> {
        if x == 0 {
            return Some(0);
        }
        if self.legendre(x) != 1 {
            return None;
        }
        // Tonelli-Shanks
        let p = self.p64();
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let z = self.nonresidue as u64;
        let mut m = s;
        let mut c = pow_mod_u64(z, q, p);
        let mut t = pow_mod_u64(x as u64, q, p);
        let mut r = pow_mod_u64(x as u64, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = tt * tt % p;
                i += 1;
            }
            let b = pow_mod_u64(c, 1 << (m - i - 1), p);
            m = i;
            c = b * b % p;
            t = t * c % p;
            r = r * b % p;
        }
        Some(r as u32)
    }

    // ---- F_{p^2} = F_p[s]/(s^2 - d) ----

    #[inline]
    pub fn fp2(&self, a: u32, b: u32) -> Fp2Elem {
        Fp2Elem { a, b }
    }

    #[inline]
    pub fn fp2_add(&self, x: Fp2Elem, y: Fp2Elem) -> Fp2Elem {
        Fp2Elem {
            a: self.add(x.a, y.a),
            b: self.add(x.b, y.b),
        }
    }

    #[inline]
    pub fn fp2_sub(&self, x: Fp2Elem, y: Fp2Elem) -> Fp2Elem {
        Fp2Elem {
            a: self.sub(x.a, y.a),
            b: self.sub(x.b, y.b),
        }
    }

    #[inline]
    pub fn fp2_neg(&self, x: Fp2Elem) -> Fp2Elem {
        Fp2Elem {
            a: self.neg(x.a),
            b: self.neg(x.b),
        }
    }

    #[inline]
    pub fn fp2_mul(&self, x: Fp2Elem, y: Fp2Elem) -> Fp2Elem {
        let p = self.p64();
        let (xa, xb, ya, yb) = (x.a as u64, x.b as u64, y.a as u64, y.b as u64);
        let bb = xb * yb % p * self.nonresidue as u64;
        Fp2Elem {
            a: ((xa * ya + bb) % p) as u32,
            b: ((xa * yb + xb * ya) % p) as u32,
        }
    }

    #[inline]
    pub fn fp2_scale(&self, c: u32, x: Fp2Elem) -> Fp2Elem {
        Fp2Elem {
            a: self.mul(c, x.a),
            b: self.mul(c, x.b),
        }
    }

    /// `x * x^p`, an element of F_p.
    pub fn fp2_norm(&self, x: Fp2Elem) -> u32 {
        let aa = self.mul(x.a, x.a);
        let bb = self.mul(self.mul(x.b, x.b), self.nonresidue);
        self.sub(aa, bb)
    }

    pub fn fp2_inv(&self, x: Fp2Elem) -> Option<Fp2Elem> {
        let n = self.inv(self.fp2_norm(x))?;
        Some(self.fp2_scale(n, self.frobenius(x)))
    }

    pub fn fp2_pow(&self, mut base: Fp2Elem, mut e: u64) -> Fp2Elem {
        let mut acc = Fp2Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.fp2_mul(acc, base);
            }
            base = self.fp2_mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x -> x^p`. Since `s^p = d^{(p-1)/2} s = -s`, this is conjugation.
    #[inline]
    pub fn frobenius(&self, x: Fp2Elem) -> Fp2Elem {
        Fp2Elem {
            a: x.a,
            b: self.neg(x.b),
        }
    }

    /// All elements of F_{p^2} in a fixed order (`a` major).
    pub fn fp2_elements(&self) -> impl Iterator<Item = Fp2Elem> + '_ {
        (0..self.p).flat_map(move |a| (0..self.p).map(move |b| Fp2Elem { a, b }))
    }
}

/// Element `a + b s` of F_{p^2}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Fp2Elem {
    pub a: u32,
    pub b: u32,
}

impl Fp2Elem {
    pub const ZERO: Fp2Elem = Fp2Elem { a: 0, b: 0 };
    pub const ONE: Fp2Elem = Fp2Elem { a: 1, b: 0 };

    #[inline]
    pub fn from_fp(a: u32) -> Self {
        Fp2Elem { a, b: 0 }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    #[inline]
    pub fn in_base_field(&self) -> bool {
        self.b == 0
    }
}

/// Gaussian integer `a + b i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaussInt {
    pub a: i64,
    pub b: i64,
}

impl GaussInt {
    pub const ONE: GaussInt = GaussInt { a: 1, b: 0 };

    pub fn new(a: i64, b: i64) -> Self {
        GaussInt { a, b }
    }

    pub fn norm(&self) -> i64 {
        self.a * self.a + self.b * self.b
    }

    pub fn conj(&self) -> Self {
        GaussInt {
            a: self.a,
            b: -self.b,
        }
    }

    /// `z + conj(z)`.
    pub fn trace(&self) -> i64 {
        2 * self.a
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(GaussInt::ONE, |acc, _| acc * *self)
    }

    pub fn is_divisible_by(&self, d: GaussInt) -> bool {
        let n = d.norm();
        let q = *self * d.conj();
        n != 0 && q.a % n == 0 && q.b % n == 0
    }
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt::new(-self.a, -self.b)
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.a * o.a - self.b * o.b, self.a * o.b + self.b * o.a)
    }
}

/// The primary decomposition `p = a^2 + b^2` normalized by
/// `a + b i ≡ 1 mod (2 + 2i)`, with `b > 0`.
///
/// The congruence fixes `a`; the sign of `b` is a free choice and only even
/// powers of `b` (equivalently, traces of powers of `a + b i`) are ever used.
pub fn sum_of_two_squares(p: u32) -> Result<GaussInt> {
    if !is_prime(p as u64) || p % 2 == 0 {
        return Err(Error::NotOddPrime(p as u64));
    }
    if p % 4 != 1 {
        return Err(Error::NotOneModFour(p));
    }
    let p = p as i64;
    let modulus = GaussInt::new(2, 2);
    let mut a = 0i64;
    while a * a <= p {
        let rest = p - a * a;
        let b = (rest as f64).sqrt().round() as i64;
        for b in [b - 1, b, b + 1] {
            if b > 0 && b * b == rest {
                for sa in [a, -a] {
                    let z = GaussInt::new(sa, b);
                    if (z - GaussInt::ONE).is_divisible_by(modulus) {
                        return Ok(z);
                    }
                }
            }
        }
        a += 1;
    }
    unreachable!("every prime p ≡ 1 mod 4 is a sum of two squares")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares_mod_seven() {
        let ctx = FieldCtx::new(7).unwrap();
        let plus: Vec<u32> = (0..7).filter(|&x| ctx.legendre(x) == 1).collect();
        let minus: Vec<u32> = (0..7).filter(|&x| ctx.legendre(x) == -1).collect();
        assert_eq!(plus, vec![1, 2, 4]);
        assert_eq!(minus, vec![3, 5, 6]);
        assert_eq!(ctx.legendre(2), 1);
    }

    #[test]
    fn smallest_field() {
        let ctx = FieldCtx::new(3).unwrap();
        assert_eq!(ctx.primitive_root(), 2);
        assert_eq!(ctx.legendre(1), 1);
        assert_eq!(ctx.legendre(2), -1);
        assert_eq!(ctx.nonresidue(), 2);
    }

    #[test]
    fn p_equals_five() {
        let ctx = FieldCtx::new(5).unwrap();
        assert_eq!(ctx.legendre(0), 0);
        assert_eq!(ctx.legendre(2), -1);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(matches!(FieldCtx::new(9), Err(Error::NotOddPrime(9))));
        assert!(matches!(FieldCtx::new(2), Err(Error::NotOddPrime(2))));
        assert!(matches!(FieldCtx::new(1), Err(Error::NotOddPrime(1))));
        assert!(matches!(FieldCtx::new(0), Err(Error::NotOddPrime(0))));
        assert!(matches!(
            FieldCtx::new((1u64 << 31) + 11),
            Err(Error::PrimeOutOfRange(_))
        ));
    }

    #[test]
    fn table_matches_euler_criterion() {
        for p in odd_primes_in(3, 400) {
            let ctx = FieldCtx::new(p as u64).unwrap();
            let plus = (0..p).filter(|&x| ctx.legendre(x) == 1).count();
            assert_eq!(plus as u32, (p - 1) / 2);
            for x in 0..p {
                assert_eq!(ctx.legendre(x), ctx.euler_criterion(x));
            }
            assert_eq!(ctx.legendre(ctx.nonresidue()), -1);
            let total: i64 = (0..p).map(|x| ctx.legendre(x) as i64).sum();
            assert_eq!(total, 0);
        }
    }

    #[test]
    fn dlog_is_a_bijection() {
        for p in [3u64, 5, 7, 13, 101, 499] {
            let ctx = FieldCtx::new(p).unwrap();
            let mut seen = vec![false; p as usize - 1];
            for x in 1..p as u32 {
                let e = ctx.dlog(x).unwrap();
                assert!(!seen[e as usize]);
                seen[e as usize] = true;
                assert_eq!(ctx.pow(ctx.primitive_root(), e as u64), x);
            }
            assert_eq!(ctx.dlog(0), None);
        }
    }

    #[test]
    fn frobenius_on_small_fields() {
        let ctx = FieldCtx::new(3).unwrap();
        assert_eq!(ctx.nonresidue(), 2);
        let s = ctx.fp2(0, 1);
        assert_eq!(ctx.frobenius(s), ctx.fp2(0, 2));
        // s^3 computed by multiplication agrees with conjugation
        assert_eq!(ctx.fp2_pow(s, 3), ctx.frobenius(s));
        assert_eq!(ctx.frobenius(ctx.fp2(2, 0)), ctx.fp2(2, 0));
    }

    #[test]
    fn frobenius_fixes_exactly_base_field() {
        let ctx = FieldCtx::new(13).unwrap();
        let fixed = ctx
            .fp2_elements()
            .filter(|&x| ctx.frobenius(x) == x)
            .count();
        assert_eq!(fixed, 13);
        for x in ctx.fp2_elements() {
            assert_eq!(ctx.frobenius(ctx.frobenius(x)), x);
            assert_eq!(ctx.fp2_pow(x, 13), ctx.frobenius(x));
            if !x.is_zero() {
                let inv = ctx.fp2_inv(x).unwrap();
                assert_eq!(ctx.fp2_mul(x, inv), Fp2Elem::ONE);
            }
        }
    }

    #[test]
    fn sqrt_roundtrip() {
        let ctx = FieldCtx::new(97).unwrap();
        for x in 0..97 {
            match ctx.sqrt(x) {
                Some(r) => assert_eq!(ctx.mul(r, r), x),
                None => assert_eq!(ctx.legendre(x), -1),
            }
        }
    }

    #[test]
    fn reduce_ratio_rejects_p_in_denominator() {
        let ctx = FieldCtx::new(5).unwrap();
        assert_eq!(ctx.reduce_ratio(1, 2).unwrap(), 3);
        assert_eq!(ctx.reduce_ratio(-7, 3).unwrap(), 1);
        assert!(ctx.reduce_ratio(1, 10).is_err());
    }

    #[test]
    fn two_squares_examples() {
        assert_eq!(sum_of_two_squares(5).unwrap(), GaussInt::new(-1, 2));
        assert_eq!(sum_of_two_squares(13).unwrap(), GaussInt::new(3, 2));
        assert!(matches!(sum_of_two_squares(7), Err(Error::NotOneModFour(7))));
    }

    #[test]
    fn two_squares_normalization_below_ten_thousand() {
        for p in odd_primes_in(3, 10_000).into_iter().filter(|p| p % 4 == 1) {
            let z = sum_of_two_squares(p).unwrap();
            assert_eq!(z.norm(), p as i64);
            assert!((z - GaussInt::ONE).is_divisible_by(GaussInt::new(2, 2)));
            // the congruence does not see the sign of b
            assert!((z.conj() - GaussInt::ONE).is_divisible_by(GaussInt::new(2, 2)));
        }
    }

    #[test]
    fn primality_agrees_with_trial_division() {
        for n in 0u64..5000 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "n = {n}");
        }
        assert!(is_prime(2_147_483_647));
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn legendre_is_multiplicative(idx in 0usize..168, x in 1u32..1000, y in 1u32..1000) {
            let primes = odd_primes_in(3, 1000);
            let p = primes[idx % primes.len()];
            let ctx = FieldCtx::new(p as u64).unwrap();
            let (x, y) = (x % p, y % p);
            prop_assume!(x != 0 && y != 0);
            prop_assert_eq!(ctx.legendre(x) * ctx.legendre(y), ctx.legendre(ctx.mul(x, y)));
        }

        #[test]
        fn gaussian_norm_is_multiplicative(a in -1000i64..1000, b in -1000i64..1000,
                                           c in -1000i64..1000, d in -1000i64..1000) {
            let x = GaussInt::new(a, b);
            let y = GaussInt::new(c, d);
            prop_assert_eq!((x * y).norm(), x.norm() * y.norm());
            prop_assert_eq!(x * y, y * x);
        }
    }
}
