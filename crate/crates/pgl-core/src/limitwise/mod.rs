//! s-function machinery, the divisible-part complement chain, and
//! limit-computable isomorphism assembly with mind-change accounting.

mod complement;
mod delta2;
mod sfunction;

pub use complement::{decompose_complement, ComplementChain, ComplementError};
pub use delta2::{delta2_isomorphism, mind_change_census, Delta2Error, Delta2Options, LimitMap};
pub use sfunction::{character_from_sfunction, sfunction_limits, SFunction, SFunctionError};
