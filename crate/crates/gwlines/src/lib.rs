pub mod arith;
pub mod field;
pub mod linalg;
pub mod gw;
pub mod grassmann;
pub mod localindex;
pub mod transversals;
pub mod crossratio;
pub mod weil;
pub mod config;
pub mod verify;
