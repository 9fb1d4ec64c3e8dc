//! Variety definitions shipped with the crate.

use super::{CoverTemplate, DoubleCoverSpec};

const F1: &str = include_str!("../../../../data/f1.json");
const V32: &str = include_str!("../../../../data/v32.json");
const K32: &str = include_str!("../../../../data/k32.json");
const K_MINUS_ONE: &str = include_str!("../../../../data/k_minus_one.json");
const L_MINUS_ONE: &str = include_str!("../../../../data/l_minus_one.json");
const K_LAMBDA: &str = include_str!("../../../../data/k_lambda.json");
const L_LAMBDA: &str = include_str!("../../../../data/l_lambda.json");
const L32_LAMBDA: &str = include_str!("../../../../data/l32_lambda.json");

fn spec(text: &str) -> DoubleCoverSpec {
    DoubleCoverSpec::from_json(text).expect("bundled arrangement is valid")
}

fn template(text: &str) -> CoverTemplate {
    CoverTemplate::from_json(text).expect("bundled template is valid")
}

/// `t^2 = ∏ x_i (x_i + x_{i+1})` over P^5, indices mod 6.
pub fn f1() -> DoubleCoverSpec {
    spec(F1)
}

/// The level-32 fivefold.
pub fn v32() -> DoubleCoverSpec {
    spec(V32)
}

/// `t^2 = xyz(x+y)(y+z)(-x+z)`.
pub fn k32() -> DoubleCoverSpec {
    spec(K32)
}

pub fn k_minus_one() -> DoubleCoverSpec {
    spec(K_MINUS_ONE)
}

pub fn l_minus_one() -> DoubleCoverSpec {
    spec(L_MINUS_ONE)
}

/// `v^2 = (λ+1) z0 z1 z2 (λ z0 + z1)(z1 + z2)(z0 + z2)`.
pub fn k_lambda_template() -> CoverTemplate {
    template(K_LAMBDA)
}

/// `w^2 = λ(λ+1) y0 y1 y2 (y0 + y1)(λ y0 + y2)(y1 + y2)`.
pub fn l_lambda_template() -> CoverTemplate {
    template(L_LAMBDA)
}

/// `t^2 = λ x (-x + λz) y (-y + z)(x + 2y - z)(-x - 2y + (λ+1) z)`.
pub fn l32_lambda_template() -> CoverTemplate {
    template(L32_LAMBDA)
}

/// Look up a bundled variety by name.
pub fn by_name(name: &str) -> Option<DoubleCoverSpec> {
    Some(match name {
        "f1" => f1(),
        "v32" => v32(),
        "k32" => k32(),
        "k_minus_one" => k_minus_one(),
        "l_minus_one" => l_minus_one(),
        _ => return None,
    })
}

pub const NAMES: &[&str] = &["f1", "v32", "k32", "k_minus_one", "l_minus_one"];
