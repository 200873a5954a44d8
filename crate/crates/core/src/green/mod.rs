//! Local asymptotics of the Feynman photon Green function for arbitrary gauge
//! parameter, with the `1/σ` and `log σ` parts isolated.

pub mod assemble;
pub mod em;
pub mod flat;
pub mod source;

pub use assemble::{assemble_calg, b_factor, calg_term, green_asymptotics, u_factor, GreenExpansion, JetTensor, EPSILON_PRESCRIPTION};
pub use em::{log_coefficient_em, EmLogCoefficient};
pub use flat::flat_closed_form;
pub use source::{Source, TermData};
