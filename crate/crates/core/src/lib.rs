//! Plancherel measure of the symmetric group, reversible Markov chains on
//! the Young lattice, and exact verification of the character-ratio
//! identities that drive a Stein's-method normal approximation.
//!
//! Everything that can be checked exactly is checked in rational
//! arithmetic ([`num_rational::BigRational`]); floating point only appears
//! in sampling and in CDF statistics.

pub mod chains;
pub mod characters;
pub mod error;
pub mod exact;
pub mod limits;
pub mod partitions;
pub mod plancherel;
pub mod report;
pub mod stein;
pub mod stream;
pub mod suite;
pub mod tensor;

pub use chains::{ChainKind, ChainSpec, SpectralCertificate, TransitionMatrix};
pub use characters::{CharacterTable, CycleType};
pub use error::{Error, Result};
pub use partitions::{HookGrid, Partition};
pub use plancherel::ExactDist;
pub use report::{Assertion, ExperimentReport};
pub use stein::{CltReport, WStat};
pub use stream::SeededStream;
pub use tensor::MultiplicityVector;
