//! Empirical verification machinery: modulus-of-smoothness estimation,
//! convergence-rate fitting, recursive majorant sequences, and recurrence
//! bound checks.

pub mod majorant;
pub mod modulus;
pub mod rate;
pub mod recurrence;

pub use majorant::{check_majorant_domination, majorant_sequence, MajorantParams};
pub use modulus::{
    check_certificate, estimate_modulus, CertificateReport, DomainSampler, ModulusEstimate,
};
pub use rate::{fit_rate_exponent, RateFit};
pub use recurrence::{epsilon_m_bound, decay_recurrence_constant, DecayRecurrenceParams};
