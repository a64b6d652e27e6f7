//! Campaign drivers behind the `quatflag` binary, exposed as a library so
//! integration tests can call the commands directly.

pub mod campaign;
