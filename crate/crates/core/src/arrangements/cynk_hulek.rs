//! Exhaustive check of the Cynk–Hulek crepant-resolution criterion.
//!
//! Only closed index sets matter: `S` such that adding any further form
//! strictly cuts down the intersection. Sets whose forms span the whole dual
//! space have empty intersection and are skipped.

use num_traits::ToPrimitive;
use serde::Serialize;

use super::exact::{nullspace, primitive_integer, rank};
use super::DoubleCoverSpec;
use crate::error::{Error, Result};

pub const MAX_CH_DIM: usize = 8;
pub const MAX_CH_FORMS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetReport {
    pub subset: Vec<usize>,
    /// Projective dimension of the intersection.
    pub intersection_dim: usize,
    pub near_pencil: bool,
    pub ch_ok: bool,
    /// Primitive integer coordinates when the intersection is a point.
    pub point: Option<Vec<i64>>,
}

pub fn cynk_hulek_report(spec: &DoubleCoverSpec) -> Result<Vec<SubsetReport>> {
    let n = spec.dim();
    let forms = spec.forms();
    let m = forms.len();
    if n > MAX_CH_DIM || m > MAX_CH_FORMS {
        return Err(Error::Unsupported(format!(
            "Cynk-Hulek scan is limited to P^{MAX_CH_DIM} and {MAX_CH_FORMS} forms (got P^{n}, {m} forms)"
        )));
    }
    let full = 1usize << m;
    let ranks: Vec<u8> = (0..full)
        .map(|mask| {
            let rows: Vec<&[i64]> = (0..m)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| forms[i].as_slice())
                .collect();
            rank(&rows) as u8
        })
        .collect();

    let mut out = Vec::new();
    for mask in 1..full {
        let r = ranks[mask] as usize;
        if r > n {
            continue;
        }
        let closed = (0..m)
            .filter(|i| mask >> i & 1 == 0)
            .all(|i| ranks[mask | 1 << i] as usize > r);
        if !closed {
            continue;
        }
        let subset: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let near_pencil =
            subset.len() <= 2 || subset.iter().any(|&s| (ranks[mask & !(1 << s)] as usize) < r);
        let ch_ok = near_pencil || subset.len() / 2 == r - 1;
        let point = (r == n).then(|| {
            let rows: Vec<&[i64]> = subset.iter().map(|&i| forms[i].as_slice()).collect();
            let ns = nullspace(&rows, n + 1);
            primitive_integer(&ns[0])
                .iter()
                .map(|x| x.to_i64().expect("small coordinates"))
                .collect()
        });
        out.push(SubsetReport {
            subset,
            intersection_dim: n - r,
            near_pencil,
            ch_ok,
            point,
        });
    }
    Ok(out)
}

/// Overall verdict: every closed subset satisfies the criterion.
pub fn ch_passes(reports: &[SubsetReport]) -> bool {
    reports.iter().all(|r| r.ch_ok)
}
