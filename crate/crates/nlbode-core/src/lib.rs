//! Guaranteed frequency-dependent incremental-gain bounds for SISO Lur'e
//! feedback systems, computed with scaled relative graph (SRG) set arithmetic
//! in the complex plane, plus the time-domain machinery to check those bounds
//! against closed-loop simulations.

pub mod cgeom;
pub mod df;
pub mod lfr;
pub mod lti;
pub mod sim;
pub mod srg;
