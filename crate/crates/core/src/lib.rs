//! Exact lower bounds on torsion summands in the homotopy groups of wedges
//! of spheres and suspensions.

pub mod catalog;
pub mod cli;
pub mod freelie;
pub mod hyperbolicity;
pub mod ktheory;
pub mod linalg;
pub mod numtheory;
pub mod oracles;
pub mod output;
pub mod stems;
