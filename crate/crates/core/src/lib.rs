//! Exact and randomized machinery for deciding when quotients by uniform
//! powers of `2n+2` general linear forms in `2n+1` variables fail the weak
//! Lefschetz property.
//!
//! The crate is organised bottom-up:
//!
//! - [`exactmath`]: big-integer binomials, rational polynomials, and
//!   integer-tail negativity certificates.
//! - [`hilbert`]: Hilbert functions of complete intersections of powers,
//!   truncated generic series, first differences of almost complete
//!   intersections, and the `S_n` / `c_n` sequences.
//! - [`linsys`]: fat-point linear systems, Cremona reduction, and the
//!   closed-form reduced systems.
//! - [`oracle`]: randomized rank computations over a large prime field,
//!   used as independent ground truth on small instances.
//! - [`wlp`]: the verdict engine and the per-result certificates.
//! - [`reproduce`]: the reproduction harness that checks every tabulated
//!   value end to end.

pub mod error;
pub mod exactmath;
pub mod hilbert;
pub mod linsys;
pub mod oracle;
pub mod reproduce;
pub mod wlp;

pub use error::{Error, Result};
pub use exactmath::{binom, binom_poly, pos_part, root_bound, verify_negative_from, IntPolynomial, NegativityCertificate};
pub use hilbert::{critical_degree, HilbertKind, HilbertTable, UniformPowerIdeal};
pub use linsys::{cremona_reduce, cremona_step, virtual_dim, CremonaTrace, LinearSystem};
pub use oracle::{OracleConfig, OracleResult, RankProblem};
pub use wlp::{check_wlp_failure, CertificateTag, Strategy, Verdict, VerdictRecord, WlpVerdict};
