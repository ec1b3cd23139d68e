//! Exact second moments of output probabilities in Gaussian boson sampling,
//! computed by counting the connected components of moment graphs.
//!
//! The central object is `g(n, a)`, a polynomial in the number of squeezed
//! modes `k`, evaluated by [`recursion::Engine`]. The second moment is
//! `(2n-1)!! g(n, 0, 0, 0)`; the first moment has the closed form in
//! [`closed_forms::first_moment`].

pub mod analysis;
pub mod closed_forms;
pub mod edge;
pub mod error;
pub mod oracle;
pub mod poly;
pub mod recursion;

pub use edge::{enumerate_valid, EdgeVector};
pub use error::{MomentError, Result};
pub use poly::IntPolynomial;
pub use recursion::{Engine, MemoKey, MemoTable};
