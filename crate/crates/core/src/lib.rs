//! Popular matchings in many-to-many bipartite instances with strict two-sided preferences.
//!
//! The crate computes pairwise-stable matchings by deferred acceptance and max-size popular
//! matchings by the 2-level Gale-Shapley procedure, and it checks popularity two ways: with a
//! clone-graph LP certificate ([`certificate`]) and by exhaustive enumeration ([`oracle`]).
//!
//! ```
//! use popmatch::instance::parse_instance;
//! use popmatch::solvers::{max_size_popular, stable_matching};
//!
//! let inst = parse_instance(
//!     "students: a a'\ncourses: b b'\npref: a b b'\npref: a' b\npref: b a a'\npref: b' a\n",
//! )
//! .unwrap();
//! assert_eq!(stable_matching(&inst).len(), 1);
//! assert_eq!(max_size_popular(&inst).projection().len(), 2);
//! ```

#![allow(clippy::needless_range_loop)]

pub(crate) mod bipartite;
pub mod certificate;
pub mod cli;
pub mod instance;
pub mod oracle;
pub mod solvers;
pub mod votes;

pub use instance::{Instance, Matching, Side, VertexId};
