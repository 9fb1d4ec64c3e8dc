//! Fourier coefficients of the newforms that appear in the count formulas.
//!
//! The CM forms `m_2, m_3, m_4, m_6` come from the Hecke character of
//! `Q(i)`; the level-8 forms are read from validated q-expansion files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffcore::{is_prime, sum_of_two_squares, FieldCtx};

/// One of the CM newforms `m_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CMFormId {
    j: u32,
}

impl CMFormId {
    pub const ALL: [CMFormId; 4] = [
        CMFormId { j: 2 },
        CMFormId { j: 3 },
        CMFormId { j: 4 },
        CMFormId { j: 6 },
    ];

    pub fn new(j: u32) -> Result<Self> {
        match j {
            2 | 3 | 4 | 6 => Ok(CMFormId { j }),
            _ => Err(Error::domain("CMFormId", format!("no CM form of weight {j}"))),
        }
    }

    pub fn weight(&self) -> u32 {
        self.j
    }

    pub fn level(&self) -> u32 {
        if self.j == 3 {
            16
        } else {
            32
        }
    }
}

/// `a_{j,p} = tr((a + b i)^{j-1})`, zero for `p ≡ 3 mod 4`.
pub fn cm_coefficient(id: CMFormId, p: u32) -> Result<i64> {
    if p == 2 || !is_prime(p as u64) {
        return Err(Error::NotOddPrime(p as u64));
    }
    if p % 4 == 3 {
        return Ok(0);
    }
    Ok(sum_of_two_squares(p)?.pow(id.j - 1).trace())
}

/// `a_{j,p}` for j = 2, 3, 4, 6 at once.
pub fn cm_coefficients(p: u32) -> Result<[i64; 4]> {
    let mut out = [0; 4];
    for (k, id) in CMFormId::ALL.iter().enumerate() {
        out[k] = cm_coefficient(*id, p)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefIdentityRow {
    pub p: u32,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
    pub ok: bool,
}

/// Check `a3 = a2² - 2p`, `a4 = a2(a3 - p)`, `a6 = a4 a3 - p² a2`.
pub fn verify_coef_identities(pmax: u32) -> Result<Vec<CoefIdentityRow>> {
    crate::ffcore::odd_primes_in(3, pmax as u64)
        .into_iter()
        .map(|p| {
            let [a2, a3, a4, a6] = cm_coefficients(p)?;
            let q = p as i64;
            let ok = if p % 4 == 1 {
                a3 == a2 * a2 - 2 * q && a4 == a2 * (a3 - q) && a6 == a4 * a3 - q * q * a2
            } else {
                a2 == 0 && a3 == 0 && a4 == 0 && a6 == 0
            };
            Ok(CoefIdentityRow { p, a2, a3, a4, a6, ok })
        })
        .collect()
}

/// A newform's coefficients `a_1..a_M` with level and weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QExpansion {
    pub label: String,
    pub weight: u32,
    pub level: u32,
    #[serde(default)]
    pub source_oracle: String,
    pub coeffs: Vec<i64>,
}

pub const MIN_COEFFS: usize = 200;

fn smallest_prime_factor(n: usize) -> usize {
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

impl QExpansion {
    /// `a_n` for `n ≥ 1`.
    pub fn coeff(&self, n: u64) -> Result<i64> {
        if n == 0 || n as usize > self.coeffs.len() {
            return Err(Error::MissingCoefficient {
                label: self.label.clone(),
                n,
                max: self.coeffs.len(),
            });
        }
        Ok(self.coeffs[n as usize - 1])
    }

    /// Check normalization, multiplicativity, the prime-power recursion and
    /// the Deligne bound. Returns the first failing index.
    pub fn validate(&self) -> Result<()> {
        let fail = |index: usize, reason: String| Error::QExpansion {
            label: self.label.clone(),
            index,
            reason,
        };
        let m = self.coeffs.len();
        if m < MIN_COEFFS {
            return Err(fail(m, format!("only {m} coefficients, need at least {MIN_COEFFS}")));
        }
        let a = |n: usize| self.coeffs[n - 1] as i128;
        if a(1) != 1 {
            return Err(fail(1, format!("a_1 = {} (must be 1)", a(1))));
        }
        let k1 = self.weight.checked_sub(1).ok_or_else(|| fail(0, "weight 0".into()))?;
        for n in 2..=m {
            let p = smallest_prime_factor(n);
            let mut pe = 1;
            let mut rest = n;
            while rest % p == 0 {
                rest /= p;
                pe *= p;
            }
            if rest > 1 {
                if a(n) != a(pe) * a(rest) {
                    return Err(fail(n, format!("a_{n} != a_{pe} * a_{rest}")));
                }
                continue;
            }
            // n = p^e
            let pp = p as i128;
            if pe == p {
                let bound = 4 * pp.pow(k1);
                if a(p) * a(p) > bound {
                    return Err(fail(n, format!("|a_{p}| exceeds the Deligne bound")));
                }
            } else if self.level as usize % p == 0 {
                if a(n) != a(p) * a(n / p) {
                    return Err(fail(n, format!("a_{n} != a_{p} * a_{}", n / p)));
                }
            } else {
                let expect = a(p) * a(n / p) - pp.pow(k1) * a(n / p / p);
                if a(n) != expect {
                    return Err(fail(n, format!("Hecke recursion fails at a_{n}")));
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let q: QExpansion = serde_json::from_str(text)?;
        q.validate()?;
        Ok(q)
    }
}

pub fn load_qexpansion(text: &str) -> Result<QExpansion> {
    QExpansion::from_json(text)
}

pub const LEVEL8_WEIGHT6_FILE: &str = "level8_weight6.json";
pub const LEVEL8_WEIGHT4_FILE: &str = "level8_weight4.json";

/// Directory holding coefficient files: `$DCOVER_DATA_DIR` or the
/// repository's `data/`.
pub fn default_data_dir() -> PathBuf {
    std::env::var_os("DCOVER_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

fn load_file(path: &Path) -> Result<QExpansion> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Data {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    QExpansion::from_json(&text).map_err(|e| Error::Data {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

/// The level-8 coefficient tables.
#[derive(Clone, Debug)]
pub struct Level8 {
    /// Weight 6: the `a_p`.
    pub weight6: QExpansion,
    /// Weight 4: the `b_p`.
    pub weight4: QExpansion,
}

impl Level8 {
    pub fn load(dir: &Path) -> Result<Level8> {
        let weight6 = load_file(&dir.join(LEVEL8_WEIGHT6_FILE))?;
        let weight4 = load_file(&dir.join(LEVEL8_WEIGHT4_FILE))?;
        for (q, k) in [(&weight6, 6), (&weight4, 4)] {
            if q.weight != k || q.level != 8 {
                return Err(Error::Data {
                    path: dir.display().to_string(),
                    reason: format!("{} has weight {} level {}, expected {k} and 8", q.label, q.weight, q.level),
                });
            }
        }
        Ok(Level8 { weight6, weight4 })
    }

    pub fn load_default() -> Result<Level8> {
        Self::load(&default_data_dir())
    }
}

fn sum_powers(p: u32, top: u32) -> i128 {
    (0..=top).map(|i| (p as i128).pow(i)).sum()
}

/// `Σ_{i=0}^5 p^i - a_p - (b_p + φ(-1) p) p`.
pub fn predict_f1(ctx: &FieldCtx, qexp6: &QExpansion, qexp4: &QExpansion) -> Result<i128> {
    let p = ctx.p();
    let a = qexp6.coeff(p as u64)? as i128;
    let b = qexp4.coeff(p as u64)? as i128;
    let phi = ctx.legendre(ctx.neg(1)) as i128;
    let q = p as i128;
    Ok(sum_powers(p, 5) - a - (b + phi * q) * q)
}

/// `Σ_{i=0}^5 p^i - a_{6,p} - p a_{4,p} - 2 p² a_{2,p}`.
pub fn predict_v32(ctx: &FieldCtx) -> Result<i128> {
    let p = ctx.p();
    let [a2, _, a4, a6] = cm_coefficients(p)?;
    let q = p as i128;
    Ok(sum_powers(p, 5) - a6 as i128 - q * a4 as i128 - 2 * q * q * a2 as i128)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(j: u32) -> CMFormId {
        CMFormId::new(j).unwrap()
    }

    #[test]
    fn cm_values() {
        assert_eq!(cm_coefficient(id(2), 5).unwrap(), -2);
        assert_eq!(cm_coefficient(id(3), 5).unwrap(), -6);
        assert_eq!(cm_coefficient(id(4), 5).unwrap(), 22);
        assert_eq!(cm_coefficient(id(6), 5).unwrap(), -82);
        assert_eq!(cm_coefficient(id(6), 13).unwrap(), -1194);
        assert_eq!(cm_coefficient(id(3), 13).unwrap(), 10);
        assert_eq!(cm_coefficient(id(4), 7).unwrap(), 0);
        assert!(cm_coefficient(id(2), 2).is_err());
        assert!(CMFormId::new(5).is_err());
        assert_eq!(id(3).level(), 16);
    }

    #[test]
    fn b_sign_is_invisible() {
        for p in crate::ffcore::odd_primes_in(3, 2000) {
            if p % 4 != 1 {
                continue;
            }
            let z = sum_of_two_squares(p).unwrap();
            for j in [2u32, 3, 4, 6] {
                assert_eq!(z.pow(j - 1).trace(), z.conj().pow(j - 1).trace());
            }
        }
    }

    #[test]
    fn weight_two_is_the_conductor_32_curve() {
        for p in crate::ffcore::odd_primes_in(3, 1000) {
            let ctx = FieldCtx::new(p as u64).unwrap();
            let s: i64 = (0..p)
                .map(|x| {
                    let v = ctx.sub(ctx.pow(x, 3), x);
                    ctx.legendre(v) as i64
                })
                .sum();
            assert_eq!(cm_coefficient(id(2), p).unwrap(), -s, "p = {p}");
        }
    }

    #[test]
    fn identities_hold() {
        let rows = verify_coef_identities(100).unwrap();
        assert!(rows.iter().all(|r| r.ok));
        assert_eq!(rows.len(), 24);
    }

    #[test]
    fn v32_predictions() {
        let c = |p| FieldCtx::new(p).unwrap();
        assert_eq!(predict_v32(&c(3)).unwrap(), 364);
        assert_eq!(predict_v32(&c(5)).unwrap(), 3978);
        assert_eq!(predict_v32(&c(7)).unwrap(), 19608);
    }

    fn eta_level8_weight4(m: usize) -> Vec<i64> {
        // eta(2z)^4 eta(4z)^4 = q ∏ (1 - q^{2n})^4 (1 - q^{4n})^4
        let mut c = vec![0i64; m + 1];
        c[0] = 1;
        for (step, power) in [(2usize, 4), (4, 4)] {
            let mut n = 1;
            while step * n <= m {
                for _ in 0..power {
                    for k in (step * n..=m).rev() {
                        c[k] -= c[k - step * n];
                    }
                }
                n += 1;
            }
        }
        c[..m].to_vec()
    }

    fn qexp(coeffs: Vec<i64>) -> QExpansion {
        QExpansion {
            label: "8.4.a.a".into(),
            weight: 4,
            level: 8,
            source_oracle: "test".into(),
            coeffs,
        }
    }

    #[test]
    fn eta_product_accepted() {
        let q = qexp(eta_level8_weight4(400));
        q.validate().unwrap();
        assert_eq!(q.coeff(3).unwrap(), -4);
        assert!(matches!(q.coeff(401), Err(Error::MissingCoefficient { .. })));
    }

    #[test]
    fn corrupt_files_rejected() {
        let mut c = eta_level8_weight4(400);
        c[0] = 2;
        assert!(matches!(qexp(c).validate(), Err(Error::QExpansion { index: 1, .. })));
        let mut c = eta_level8_weight4(400);
        c[8] += 1; // a_9
        assert!(matches!(qexp(c).validate(), Err(Error::QExpansion { index: 9, .. })));
        assert!(qexp(eta_level8_weight4(50)).validate().is_err());
    }

    #[test]
    fn bundled_level8_files_validate() {
        let l8 = Level8::load_default().unwrap();
        assert_eq!(l8.weight4.coeff(3).unwrap(), -4);
        assert_eq!(l8.weight6.coeff(3).unwrap(), 20);
        assert_eq!(l8.weight6.coeff(9).unwrap(), 157);
    }
}
