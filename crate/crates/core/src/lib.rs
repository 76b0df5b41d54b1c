//! Exact computation with frescos: monogenic geometric (a,b)-modules over the
//! algebra generated by `a`, `b` with `ab - ba = b^2`.

pub mod algebra;
pub mod alpha;
pub mod error;
pub mod fresco;
pub mod identities;
pub mod json;
pub mod linalg;
pub mod oracle;
pub mod parse;
pub mod rat;
pub mod sample;
pub mod series;
pub mod verify;
pub mod xi;

pub use algebra::{AbElement, FactorForm};
pub use error::{Error, Result};
pub use fresco::{
    bernstein, build_adapted_model, fundamental_invariants, normalize_last_unit,
    regenerate_presentation, sub_quotient, twist, validate_presentation, AdaptedModel, Bernstein,
    ModuleElement, Presentation,
};
pub use rat::Rat;
pub use series::{solve_resonant_ode, OdeForm, SeriesB};
