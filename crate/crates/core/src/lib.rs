//! Section rings of root line bundles on rational cuspidal curves, their
//! presentations, and resolution-graph calculus.

pub mod algebra;
pub mod curve;
pub mod fixtures;
pub mod ideal;
pub mod ring;
pub mod sections;
pub mod topology;
