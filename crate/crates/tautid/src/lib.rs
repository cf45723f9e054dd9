//! Cellular chain complexes of universal covers of closed 3-manifolds built
//! from taut identities, linking forms of cyclic branched covers, and
//! Dijkgraaf–Witten invariants for finite groups.

pub mod complexes;
pub mod dw;
pub mod error;
pub mod intlin;
pub mod linking;
pub mod presentations;
pub mod symbolic;

pub use error::{Error, Result};
pub use symbolic::{Alphabet, GroupRingElement, Word};
