pub mod cherednik;
pub mod envelope;
pub mod invariants;
pub mod linalg;
pub mod modp;
pub mod pbw;
pub mod poisson;
pub mod polyseries;
pub mod serialize;
pub mod verma;
