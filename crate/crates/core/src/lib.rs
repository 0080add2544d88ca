//! Rigorous constructions and certification for binary disc packings with
//! size ratio sqrt(2) - 1.
//!
//! The crate has three layers:
//!
//! * numeric kernel: [`interval`] (outward-rounded interval arithmetic) and
//!   [`density`] (maximal density, triangle emptiness);
//! * packings: [`words`] (Sturmian-type column sequences), [`constructions`]
//!   (densest packing families and density measurement), [`packing`] and
//!   [`fm`] (finite packings and their additively weighted Delaunay
//!   triangulations);
//! * [`certifier`]: the interval branch-and-bound engine that certifies the
//!   density upper bound and the neighborhood statement over stoichiometry
//!   intervals.

pub mod interval;
pub mod words;
pub mod density;
pub mod packing;
pub mod fm;
pub mod constructions;

pub use interval::{acos_i, const_enclosure, constant, ConstantName, Interval, IntervalError};
