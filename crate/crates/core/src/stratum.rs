use std::fmt;

use serde::{Deserialize, Serialize};

/// Stratum of a vertex in `K ⊂ Σ ⊂ M`, which is also an object of the chain
/// category `1 < 2 < 3` that parcels are fibred over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Stratum {
    /// On the knot `K`.
    Knot = 1,
    /// On `Σ ∖ K`.
    Surface = 2,
    /// In `M ∖ Σ`.
    Bulk = 3,
}

impl Stratum {
    pub const ALL: [Stratum; 3] = [Stratum::Knot, Stratum::Surface, Stratum::Bulk];

    pub fn dim(self) -> u8 {
        self as u8
    }

    /// Zero-based index, for table lookups.
    pub fn index(self) -> usize {
        self as usize - 1
    }

    pub fn from_dim(dim: u8) -> Option<Stratum> {
        match dim {
            1 => Some(Stratum::Knot),
            2 => Some(Stratum::Surface),
            3 => Some(Stratum::Bulk),
            _ => None,
        }
    }
}

impl TryFrom<u8> for Stratum {
    type Error = String;

    fn try_from(dim: u8) -> Result<Self, Self::Error> {
        Stratum::from_dim(dim).ok_or_else(|| format!("stratum dimension must be 1, 2 or 3, got {dim}"))
    }
}

impl From<Stratum> for u8 {
    fn from(s: Stratum) -> u8 {
        s.dim()
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dim())
    }
}
