//! Exact rational polyhedral geometry.
//!
//! Polytopes carry both representations. Conversions run the double
//! description method on integer data.

pub mod dd;
pub mod linalg;
mod polytope;
pub mod rat;
mod simplex;

use std::fmt;

pub use polytope::{lattice_distance, primitive, Halfspace, Hyperplane, Polytope};
pub use rat::{fmt_rat, rat, rint, Rat, RatVec};
pub use simplex::{factorial, Simplex};


#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("empty point set")]
    EmptyInput,
    #[error("mixed dimensions: expected {expected}, found {found}")]
    MixedDimensions { expected: usize, found: usize },
    #[error("polytope has zero volume")]
    ZeroVolume,
    #[error("zero normal vector")]
    ZeroNormal,
    #[error("zero vector has no primitive generator")]
    ZeroVector,
    #[error("polytope is not full dimensional")]
    NotFullDimensional,
    #[error("inequalities are infeasible")]
    Empty,
    #[error("inequalities describe an unbounded set")]
    Unbounded,
}

/// Affine function `u -> <linear, u> + constant`. Ordered by `(linear, constant)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineFn {
    pub linear: RatVec,
    pub constant: Rat,
}

impl AffineFn {
    pub fn new(linear: RatVec, constant: Rat) -> Self {
        AffineFn { linear, constant }
    }

    pub fn constant(dim: usize, c: Rat) -> Self {
        AffineFn::new(RatVec::zeros(dim), c)
    }

    /// The coordinate function `u_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        AffineFn::new(RatVec::unit(dim, i), Rat::from_integer(0.into()))
    }

    pub fn dim(&self) -> usize {
        self.linear.dim()
    }

    pub fn eval(&self, u: &RatVec) -> Rat {
        self.linear.dot(u) + &self.constant
    }

    pub fn add(&self, other: &AffineFn) -> AffineFn {
        AffineFn::new(&self.linear + &other.linear, &self.constant + &other.constant)
    }

    pub fn neg(&self) -> AffineFn {
        AffineFn::new(-&self.linear, -self.constant.clone())
    }

    /// Precompose with `u -> A u` where `a` lists the rows of `A`.
    pub fn pullback(&self, a: &[RatVec]) -> AffineFn {
        let n = a.first().map_or(0, |r| r.dim());
        let mut lin = RatVec::zeros(n);
        for (i, row) in a.iter().enumerate() {
            lin = &lin + &row.scale(&self.linear[i]);
        }
        AffineFn::new(lin, self.constant.clone())
    }

    /// Halfspace `{u : self(u) >= other(u)}`.
    pub fn dominates(&self, other: &AffineFn) -> Halfspace {
        Halfspace::new(&self.linear - &other.linear, &other.constant - &self.constant)
    }
}

impl fmt::Display for AffineFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, u> + {}", self.linear, fmt_rat(&self.constant))
    }
}
