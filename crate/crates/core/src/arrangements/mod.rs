//! Hyperplane arrangements in projective space and the double covers they
//! define: `t^2 = c · ∏ L_i(x)`.
//!
//! Forms are stored normalized (content 1, first nonzero coefficient
//! positive). The scalar removed by normalization is folded into the twist
//! constant, so a spec always describes the same variety as its input.

mod automorphisms;
pub mod bundled;
mod cynk_hulek;
pub mod exact;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::CheckedMul;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffcore::FieldCtx;

pub use automorphisms::{automorphism_group, AutGroup, Automorphism, GroupStructure};
pub use cynk_hulek::{cynk_hulek_report, ch_passes, SubsetReport, MAX_CH_DIM, MAX_CH_FORMS};

/// A finite set of hyperplanes in P^dim, given by integer linear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    dim: usize,
    forms: Vec<Vec<i64>>,
}

impl Arrangement {
    /// Normalize and validate `forms`. Returns the arrangement together with
    /// the rational factor `s` such that `∏ raw = s · ∏ normalized`.
    pub fn new(dim: usize, raw: Vec<Vec<i64>>) -> Result<(Self, Ratio<i64>)> {
        let mut forms = Vec::with_capacity(raw.len());
        let mut scale = Ratio::from_integer(1i64);
        for (idx, f) in raw.into_iter().enumerate() {
            if f.len() != dim + 1 {
                return Err(Error::InvalidArrangement(format!(
                    "form {idx} has {} coefficients, expected {}",
                    f.len(),
                    dim + 1
                )));
            }
            let content = f.iter().fold(0i64, |g, &x| g.gcd(&x));
            if content == 0 {
                return Err(Error::InvalidArrangement(format!("form {idx} is zero")));
            }
            let lead = *f.iter().find(|&&x| x != 0).unwrap();
            let unit = if lead < 0 { -content } else { content };
            scale = scale
                .checked_mul(&Ratio::from_integer(unit))
                .ok_or_else(|| Error::InvalidArrangement("twist overflow".into()))?;
            forms.push(f.into_iter().map(|x| x / unit).collect::<Vec<_>>());
        }
        for i in 0..forms.len() {
            for j in 0..i {
                if forms[i] == forms[j] {
                    return Err(Error::InvalidArrangement(format!(
                        "forms {j} and {i} are proportional"
                    )));
                }
            }
        }
        Ok((Arrangement { dim, forms }, scale))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn forms(&self) -> &[Vec<i64>] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// Index of the form proportional to `v`, if any.
    pub fn find_form(&self, v: &[i64]) -> Option<usize> {
        let content = v.iter().fold(0i64, |g, &x| g.gcd(&x));
        if content == 0 {
            return None;
        }
        let lead = *v.iter().find(|&&x| x != 0)?;
        let unit = if lead < 0 { -content } else { content };
        let norm: Vec<i64> = v.iter().map(|x| x / unit).collect();
        self.forms.iter().position(|f| *f == norm)
    }
}

/// `t^2 = twist · ∏ forms` over P^dim, with `t` of weight `#forms / 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCoverSpec {
    name: String,
    arrangement: Arrangement,
    twist: Ratio<i64>,
    weights: Vec<u32>,
}

impl DoubleCoverSpec {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        forms: Vec<Vec<i64>>,
        twist: Ratio<i64>,
        weights: Option<Vec<u32>>,
    ) -> Result<Self> {
        if *twist.numer() == 0 {
            return Err(Error::InvalidArrangement("twist constant is zero".into()));
        }
        let (arrangement, scale) = Arrangement::new(dim, forms)?;
        let n = arrangement.len();
        let weights = match weights {
            Some(w) => {
                if w.len() != dim + 2 || w[1..].iter().any(|&x| x != 1) {
                    return Err(Error::InvalidArrangement(format!(
                        "weights must be [w, 1 x {}]",
                        dim + 1
                    )));
                }
                if n % 2 == 0 && w[0] as usize != n / 2 {
                    return Err(Error::InvalidArrangement(format!(
                        "cover weight {} does not match {n} forms",
                        w[0]
                    )));
                }
                w
            }
            None => {
                if n % 2 == 1 {
                    return Err(Error::InvalidArrangement(format!(
                        "odd number of forms ({n}) without explicit weights"
                    )));
                }
                let mut w = vec![(n / 2) as u32];
                w.extend(std::iter::repeat(1).take(dim + 1));
                w
            }
        };
        let twist = twist
            .checked_mul(&scale)
            .ok_or_else(|| Error::InvalidArrangement("twist overflow".into()))?;
        Ok(DoubleCoverSpec {
            name: name.into(),
            arrangement,
            twist,
            weights,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn dim(&self) -> usize {
        self.arrangement.dim
    }

    pub fn forms(&self) -> &[Vec<i64>] {
        &self.arrangement.forms
    }

    pub fn twist(&self) -> Ratio<i64> {
        self.twist
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Weight of the cover coordinate `t`.
    pub fn cover_weight(&self) -> u32 {
        self.weights[0]
    }

    /// Degree of the branch polynomial.
    pub fn degree(&self) -> usize {
        self.arrangement.len()
    }

    /// The same arrangement with the twist multiplied by `c`.
    pub fn twisted_by(&self, c: Ratio<i64>) -> Result<Self> {
        if *c.numer() == 0 {
            return Err(Error::InvalidArrangement("twist constant is zero".into()));
        }
        let mut out = self.clone();
        out.twist = self
            .twist
            .checked_mul(&c)
            .ok_or_else(|| Error::InvalidArrangement("twist overflow".into()))?;
        out.name = format!("{}*({})", self.name, c);
        Ok(out)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Reduce modulo `p`.
    pub fn reduce(&self, ctx: &FieldCtx) -> Result<ReducedCover> {
        let twist = ctx.reduce_ratio(*self.twist.numer(), *self.twist.denom())?;
        if twist == 0 {
            return Err(Error::domain(
                "reduce",
                format!("twist {} vanishes mod {}", self.twist, ctx.p()),
            ));
        }
        Ok(ReducedCover {
            dim: self.dim(),
            forms: self
                .forms()
                .iter()
                .map(|f| f.iter().map(|&c| ctx.reduce_i64(c)).collect())
                .collect(),
            twist,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SpecDoc::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SpecDoc = serde_json::from_str(text)?;
        doc.into_spec()
    }
}

/// A branch polynomial `twist · ∏ forms` reduced mod `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedCover {
    pub dim: usize,
    pub forms: Vec<Vec<u32>>,
    pub twist: u32,
}

impl ReducedCover {
    pub fn degree(&self) -> usize {
        self.forms.len()
    }

    pub fn eval(&self, ctx: &FieldCtx, x: &[u32]) -> u32 {
        self.forms.iter().fold(self.twist, |acc, f| {
            let v = f
                .iter()
                .zip(x)
                .fold(0u32, |s, (&c, &xi)| ctx.add(s, ctx.mul(c, xi)));
            ctx.mul(acc, v)
        })
    }

    pub fn eval_fp2(&self, ctx: &FieldCtx, x: &[crate::ffcore::Fp2Elem]) -> crate::ffcore::Fp2Elem {
        use crate::ffcore::Fp2Elem;
        self.forms
            .iter()
            .fold(Fp2Elem::from_fp(self.twist), |acc, f| {
                let v = f.iter().zip(x).fold(Fp2Elem::ZERO, |s, (&c, &xi)| {
                    ctx.fp2_add(s, ctx.fp2_scale(c, xi))
                });
                ctx.fp2_mul(acc, v)
            })
    }
}

#[derive(Serialize, Deserialize)]
struct TwistDoc {
    num: i64,
    den: i64,
}

#[derive(Serialize, Deserialize)]
struct SpecDoc {
    name: String,
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<u32>>,
    twist: TwistDoc,
    forms: Vec<Vec<i64>>,
}

impl From<&DoubleCoverSpec> for SpecDoc {
    fn from(s: &DoubleCoverSpec) -> Self {
        SpecDoc {
            name: s.name.clone(),
            dim: s.dim(),
            weights: Some(s.weights.clone()),
            twist: TwistDoc {
                num: *s.twist.numer(),
                den: *s.twist.denom(),
            },
            forms: s.forms().to_vec(),
        }
    }
}

impl SpecDoc {
    fn into_spec(self) -> Result<DoubleCoverSpec> {
        if self.twist.den == 0 {
            return Err(Error::InvalidArrangement("twist denominator is zero".into()));
        }
        DoubleCoverSpec::new(
            self.name,
            self.dim,
            self.forms,
            Ratio::new(self.twist.num, self.twist.den),
            self.weights,
        )
    }
}

pub fn load_arrangement(text: &str) -> Result<DoubleCoverSpec> {
    DoubleCoverSpec::from_json(text)
}

/// Polynomial in the parameter `lambda`, lowest degree first. A bare integer
/// is a constant.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamCoeff {
    Const(i64),
    Poly(Vec<i64>),
}

impl ParamCoeff {
    pub fn eval(&self, lambda: i64) -> Option<i64> {
        match self {
            ParamCoeff::Const(c) => Some(*c),
            ParamCoeff::Poly(cs) => cs.iter().rev().try_fold(0i64, |acc, &c| {
                acc.checked_mul(lambda)?.checked_add(c)
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ParamTwist {
    num: ParamCoeff,
    den: ParamCoeff,
}

/// A family of covers whose coefficients are polynomials in `lambda`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverTemplate {
    name: String,
    dim: usize,
    twist: ParamTwist,
    forms: Vec<Vec<ParamCoeff>>,
}

impl CoverTemplate {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Fill the slot with an integer representative of `lambda`.
    pub fn instantiate(&self, lambda: i64) -> Result<DoubleCoverSpec> {
        let overflow = || Error::InvalidArrangement("coefficient overflow".into());
        let forms = self
            .forms
            .iter()
            .map(|f| f.iter().map(|c| c.eval(lambda).ok_or_else(overflow)).collect())
            .collect::<Result<Vec<Vec<i64>>>>()?;
        let num = self.twist.num.eval(lambda).ok_or_else(overflow)?;
        let den = self.twist.den.eval(lambda).ok_or_else(overflow)?;
        if den == 0 {
            return Err(Error::domain(
                "instantiate",
                format!("{}: twist denominator vanishes at lambda = {lambda}", self.name),
            ));
        }
        DoubleCoverSpec::new(
            format!("{}[lambda={lambda}]", self.name),
            self.dim,
            forms,
            Ratio::new(num, den),
            None,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f1_has_twelve_forms() {
        let f1 = bundled::f1();
        assert_eq!(f1.dim(), 5);
        assert_eq!(f1.degree(), 12);
        assert_eq!(f1.cover_weight(), 6);
        for i in 0..6 {
            let mut xi = vec![0; 6];
            xi[i] = 1;
            assert!(f1.arrangement().find_form(&xi).is_some());
            xi[(i + 1) % 6] = 1;
            assert!(f1.arrangement().find_form(&xi).is_some());
        }
        assert_eq!(f1.twist(), Ratio::from_integer(1));
    }

    #[test]
    fn v32_forms() {
        let v = bundled::v32();
        assert_eq!(v.degree(), 12);
        for f in [
            [1, 1, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 1],
            [0, 0, 1, 0, 1, 1],
            [1, 0, 1, 0, -1, 0],
            [0, 1, -1, 0, 1, 0],
            [0, 0, 1, -1, 1, 0],
        ] {
            assert!(v.arrangement().find_form(&f).is_some(), "{f:?}");
        }
    }

    #[test]
    fn proportional_forms_rejected() {
        let doc = r#"{"name":"bad","dim":1,"twist":{"num":1,"den":1},"forms":[[1,0],[2,0]]}"#;
        let err = load_arrangement(doc).unwrap_err();
        assert!(err.to_string().contains("proportional"), "{err}");
    }

    #[test]
    fn odd_count_needs_weights() {
        let doc = r#"{"name":"odd","dim":1,"twist":{"num":1,"den":1},"forms":[[1,0]]}"#;
        assert!(load_arrangement(doc).is_err());
        let doc = r#"{"name":"odd","dim":1,"weights":[1,1,1],"twist":{"num":1,"den":1},"forms":[[1,0]]}"#;
        assert!(load_arrangement(doc).is_ok());
    }

    #[test]
    fn malformed_documents_rejected() {
        assert!(load_arrangement("{").is_err());
        assert!(load_arrangement(r#"{"name":"x","dim":1,"twist":{"num":1,"den":0},"forms":[[1,0],[0,1]]}"#).is_err());
        assert!(load_arrangement(r#"{"name":"x","dim":1,"twist":{"num":1,"den":1},"forms":[[1,0,0],[0,1]]}"#).is_err());
        assert!(load_arrangement(r#"{"name":"x","dim":1,"twist":{"num":1,"den":1},"forms":[[0,0],[0,1]]}"#).is_err());
    }

    #[test]
    fn normalization_moves_sign_into_twist() {
        let spec = DoubleCoverSpec::new(
            "neg",
            1,
            vec![vec![-1, 0], vec![0, 2]],
            Ratio::from_integer(3),
            None,
        )
        .unwrap();
        assert_eq!(spec.forms(), &[vec![1, 0], vec![0, 1]]);
        assert_eq!(spec.twist(), Ratio::from_integer(-6));
    }

    #[test]
    fn json_roundtrip_is_lossless() {
        for spec in [bundled::f1(), bundled::v32(), bundled::k32()] {
            let back = load_arrangement(&spec.to_json()).unwrap();
            assert_eq!(back, spec);
        }
    }

    #[test]
    fn template_instantiation() {
        let k = bundled::k_lambda_template().instantiate(2).unwrap();
        // (lambda+1) z0 z1 z2 (lambda z0 + z1)(z1 + z2)(z0 + z2)
        assert_eq!(k.twist(), Ratio::from_integer(3));
        assert!(k.arrangement().find_form(&[2, 1, 0]).is_some());
        // lambda = 0 makes lambda*z0 + z1 proportional to z1
        assert!(bundled::k_lambda_template().instantiate(0).is_err());
    }

    #[test]
    fn reduce_rejects_vanishing_twist() {
        let ctx = FieldCtx::new(3).unwrap();
        let k = bundled::k_lambda_template().instantiate(2).unwrap();
        assert!(k.reduce(&ctx).is_err());
    }
}
