//! Exact laboratories for the arithmetic behind big monodromy of
//! hyperelliptic Jacobians.
//!
//! The crate certifies two checkable conditions on a monic squarefree
//! f ∈ Z[X]:
//!
//! * the splitting field of f has Galois group S_n, witnessed by
//!   Frobenius cycle types at unramified primes ([`galois`]);
//! * some prime p sees f ≡ (X − α)² · f₂ with f₂ squarefree of degree
//!   n − 2 and coprime to X − α ([`ramify`]).
//!
//! Together these are sufficient for the Jacobian of y² = f(x) to have
//! maximal mod-ℓ Galois image for almost all ℓ. The [`sieve`] module runs
//! density experiments over height-bounded families and evaluates the
//! large-sieve quantities behind the expected failure rates; [`symplectic`]
//! and [`torus`] are exact finite-group laboratories for the similitude and
//! character arithmetic the underlying theory runs on.
//!
//! The `book/` directory of the repository is a narrative guide; its code
//! snippets compile and run as this crate's doctests (see [`guide`]).

pub mod arith;
pub mod ffpoly;
pub mod galois;
pub mod guide;
pub mod intpoly;
pub mod ramify;
pub mod sieve;
pub mod symplectic;
pub mod torus;

pub use ffpoly::{FpFactorization, FpPolynomial};
pub use intpoly::{Height, IntPolynomial};
