//! Exact counting, compressions and exhaustive search for intersecting
//! families of subsets of `[n]`.
//!
//! The central quantity is the *intersecting profile* of a family `A`: for
//! each `s`, the number `c_s` of `s`-element subfamilies of `A` whose members
//! pairwise intersect. The crate computes profiles exactly, applies the
//! up-set, `ij` and `(U,v,f)` compressions, searches small cases
//! exhaustively for profile-maximising families, and evaluates the
//! layer-two machinery (stars, triangle, trace-constrained counts) together
//! with the explicit extremal constructions.

pub mod binom;
pub mod canon;
pub mod combin;
pub mod compress;
pub mod construct;
pub mod family;
pub mod indep;
pub mod io;
pub mod layer2;
pub mod minimal;
pub mod probability;
pub mod profile;
pub mod report;
pub mod search;
pub mod threshold;
pub mod verify;

pub use canon::{canonical_form, is_isomorphic, CanonError};
pub use compress::{apply_compression, build_uvf_for, CompressionDescriptor, CompressionError};
pub use family::{FamilyError, SetFamily, SetMask};
pub use io::{parse_family, parse_family_with, serialize_family, ParseError, ParseOptions};
pub use probability::{mc_estimate, probability_eval, ProbabilityResult};
pub use profile::{brute_profile, intersecting_profile, is_intersecting, IntersectingProfile};
pub use threshold::{r_of, Threshold};
