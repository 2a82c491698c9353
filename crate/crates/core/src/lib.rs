//! Exact verification engine for the invariant theory of SL(2,13) and the
//! modular forms obtained from its theta-constant realization.

pub mod cyclofield;
pub mod grouprep;
pub mod invariants;
pub mod modverify;
pub mod polyring;
pub mod qseries;
pub mod report;

pub use cyclofield::{CycloElem, Rational};
pub use grouprep::GMatrix;
pub use polyring::{MPoly, Monomial};
pub use report::{CheckResult, Status};
