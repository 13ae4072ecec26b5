pub mod experiment;
pub mod ppa;
pub mod pulse;
pub mod spin;
