//! Exact lattice geometry for unions of Sierpinski gaskets, and a verifier
//! for the statement that five gaskets in a row are not the attractor of
//! any contractive IFS of similitudes, while one to four gaskets are.

pub mod algebra;
pub mod arith;
pub mod crosscheck;
pub mod error;
pub mod gasket;
pub mod lattice;
pub mod similitude;
pub mod verifier;

pub use algebra::{Decision, Verdict};
pub use arith::{sqdist, Point, Sign, Surd};
pub use gasket::{GasketPiece, GasketUnion, LatticeTriangle, Membership, Orient};
pub use lattice::TriPoint;
pub use similitude::{Ifs, Similitude};
