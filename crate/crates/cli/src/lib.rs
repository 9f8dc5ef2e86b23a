//! Command-line front end for the `dlog` defeasible logic reasoner, plus the
//! random theory generator, differential fuzzer and chain benchmark it drives.

pub mod bench;
pub mod commands;
pub mod fuzz;
pub mod generate;

pub use commands::{run, Cli, Command};
pub use fuzz::{fuzz, DivergenceWitness, FuzzConfig, FuzzReport};
pub use generate::{generate_random_theory, GeneratorConfig};

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INVALID: i32 = 2;
    pub const NOT_DERIVABLE: i32 = 3;
    pub const CAP_EXCEEDED: i32 = 4;
    pub const INTERNAL: i32 = 5;
}
