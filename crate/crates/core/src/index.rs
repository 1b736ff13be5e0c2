use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Index of a subgroup, or the order of a quotient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Index {
    Finite(BigInt),
    Infinite,
}

impl Index {
    pub fn one() -> Self {
        Index::Finite(BigInt::one())
    }

    pub fn finite(n: impl Into<BigInt>) -> Self {
        Index::Finite(n.into())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Index::Finite(_))
    }

    pub fn value(&self) -> Option<&BigInt> {
        match self {
            Index::Finite(n) => Some(n),
            Index::Infinite => None,
        }
    }

    pub fn into_value(self) -> Option<BigInt> {
        match self {
            Index::Finite(n) => Some(n),
            Index::Infinite => None,
        }
    }
}

impl Mul for Index {
    type Output = Index;

    fn mul(self, rhs: Index) -> Index {
        match (self, rhs) {
            (Index::Finite(a), Index::Finite(b)) => Index::Finite(a * b),
            // 0 never occurs as an index, so there is no 0 * inf case to settle.
            _ => Index::Infinite,
        }
    }
}

impl PartialOrd for Index {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Index {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (Index::Finite(a), Index::Finite(b)) => a.cmp(b),
            (Index::Finite(_), Index::Infinite) => Less,
            (Index::Infinite, Index::Finite(_)) => Greater,
            (Index::Infinite, Index::Infinite) => Equal,
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => f.write_str("infinite"),
        }
    }
}

impl From<u64> for Index {
    fn from(n: u64) -> Self {
        debug_assert!(!n.is_zero());
        Index::Finite(BigInt::from(n))
    }
}
