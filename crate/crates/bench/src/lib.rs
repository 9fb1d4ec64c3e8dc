//! Fixtures shared by the kernel benchmarks.

use dcover_core::quotients::{alpha1, ProjDeckMap};
use dcover_core::{bundled, DoubleCoverSpec, FieldCtx};

pub fn field(p: u32) -> FieldCtx {
    FieldCtx::new(p as u64).expect("bench primes are odd primes")
}

/// The level-32 fivefold with its first `G_64` involution.
pub fn v32_with_alpha1() -> (DoubleCoverSpec, ProjDeckMap) {
    let spec = bundled::v32();
    let g = alpha1(&spec).expect("alpha1 is an automorphism of V32");
    (spec, g)
}
