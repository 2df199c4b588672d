//! The verification pipeline for five gaskets in a line, `E`.
//!
//! Steps, in certificate order:
//!
//! 1. derive the marked points and triangles from their defining
//!    constraints and check each constraint exactly;
//! 2. check the separation constants (`diam^2 E = 25`, gap `3/256`);
//! 3. check the nesting chain `T^(k+1)(tri_678) ⊆ T^k(tri_678)`;
//! 4. for each scale `2^-m`, `m = 1..6`, enumerate every lattice similitude
//!    sending the unit triangle onto a triangle of `B_m` points, keep those
//!    with `f(E) ⊆ E`, and prove `T^m(tri_678) ∩ f(E) = ∅` for each;
//! 5. check the arithmetic that covers all `m >= 7`;
//! 6. positive controls: IFS decompositions of 1- to 4-Sierpinski.
//!
//! Two steps are structural and recorded as trusted rather than computed:
//! the case analysis showing that every `f` with `f(E) ⊆ E` has scale
//! `2^-m` and sends the corners of the unit triangle into `B_m`, and the
//! set algebra of the induction over `m` (`T(∅) = ∅`, `T` bijective).

mod base_case;
mod certificate;
mod geometry;
mod ifs;

use std::fmt;
use std::str::FromStr;

pub use base_case::{
    enumerate_candidates, recount_candidates, verify_base_case, BaseCaseRecord, CrossCheckSummary, KEntry, Violation,
};
pub use certificate::{verify_theorem, Certificate, ControlRecord, NestingLink, CERT_SCHEMA};
pub use geometry::{
    check_constants, check_geometry, derive_geometry, induction_arithmetic, Check, Derivation, GeometryMarks,
    GeometryReport,
};
pub use ifs::{find_ifs, verify_attractor, IfsSearch};

use crate::algebra::DEFAULT_DEPTH_BUDGET;
use crate::error::VerifyError;

/// Deliberate corruption of one checked input, for negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sabotage {
    /// Move P4 to (1/4, 0).
    P4,
    /// Move P5 to (3/4, sqrt3/2).
    P5,
    /// Move P6 to (5/16, sqrt3/4).
    P6,
    /// Move P8 to (7/16, 3*sqrt3/16).
    P8,
    /// Quote the gap as 1/256.
    Gap,
    /// Quote diam^2 as 24.
    Diam,
    /// Quote the contraction bound as 1/64.
    KBound,
}

impl Sabotage {
    pub const ALL: [Sabotage; 7] =
        [Sabotage::P4, Sabotage::P5, Sabotage::P6, Sabotage::P8, Sabotage::Gap, Sabotage::Diam, Sabotage::KBound];

    pub fn name(&self) -> &'static str {
        match self {
            Sabotage::P4 => "p4",
            Sabotage::P5 => "p5",
            Sabotage::P6 => "p6",
            Sabotage::P8 => "p8",
            Sabotage::Gap => "gap",
            Sabotage::Diam => "diam",
            Sabotage::KBound => "k-bound",
        }
    }
}

impl fmt::Display for Sabotage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sabotage {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Sabotage, VerifyError> {
        Sabotage::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| VerifyError::UnknownSabotage(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub depth_budget: u32,
    /// Largest base-case scale exponent.
    pub max_m: u32,
    /// Seed for the sampled floating cross-check; never affects verdicts.
    pub seed: u64,
    /// Fraction of base-case candidates cross-checked, in per mille.
    pub sample_per_mille: u32,
    /// Finest scale exponent for the IFS searches.
    pub ifs_max_scale: i32,
    pub sabotage: Option<Sabotage>,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions {
            depth_budget: DEFAULT_DEPTH_BUDGET,
            max_m: 6,
            seed: 0x5eed,
            sample_per_mille: 10,
            ifs_max_scale: 3,
            sabotage: None,
        }
    }
}

/// Witnesses emitted by failing decisions, and how many re-verified by
/// exact point membership.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct WitnessTally {
    pub emitted: u64,
    pub verified: u64,
}

impl WitnessTally {
    pub fn record(&mut self, ok: bool) {
        self.emitted += 1;
        self.verified += u64::from(ok);
    }

    pub fn merge(&mut self, o: &WitnessTally) {
        self.emitted += o.emitted;
        self.verified += o.verified;
    }

    pub fn all_verified(&self) -> bool {
        self.emitted == self.verified
    }
}

/// An exact comparison with its operands in text form.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Comparison {
    pub name: String,
    pub lhs: String,
    pub relation: String,
    pub rhs: String,
    pub holds: bool,
}

impl Comparison {
    pub fn new<T: Ord + fmt::Display>(name: &str, lhs: T, relation: &str, rhs: T) -> Comparison {
        let holds = match relation {
            "=" => lhs == rhs,
            "<" => lhs < rhs,
            "<=" => lhs <= rhs,
            ">" => lhs > rhs,
            ">=" => lhs >= rhs,
            _ => panic!("unknown relation {relation}"),
        };
        Comparison {
            name: name.to_string(),
            lhs: lhs.to_string(),
            relation: relation.to_string(),
            rhs: rhs.to_string(),
            holds,
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.holds { "ok" } else { "FAILED" };
        write!(f, "{}: {} {} {} [{mark}]", self.name, self.lhs, self.relation, self.rhs)
    }
}
