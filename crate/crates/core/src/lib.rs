//! Point counting over finite fields for double covers of projective space
//! branched along hyperplane arrangements, with closed-form, hypergeometric
//! and modular-form pipelines to cross-check the counts.

pub mod arrangements;
pub mod brutecount;
pub mod error;
pub mod ffcore;
pub mod fibrations;
pub mod hypergeometric;
pub mod modforms;
pub mod quotients;
pub mod workbench;

pub use arrangements::{
    automorphism_group, bundled, cynk_hulek_report, load_arrangement, Arrangement, AutGroup,
    CoverTemplate, DoubleCoverSpec, ReducedCover, SubsetReport,
};
pub use brutecount::{count_double_cover, sign_census, CountRecord, Method, SignCensus, Space};
pub use error::{Error, Result};
pub use ffcore::{sum_of_two_squares, FieldCtx, Fp2Elem, GaussInt};
pub use fibrations::EllipticTrace;
pub use hypergeometric::{CharacterTable, HyperValue};
pub use modforms::{CMFormId, QExpansion};
pub use quotients::{ProjDeckMap, TwistedCount};
