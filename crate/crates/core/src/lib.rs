//! Quasi-exactly solvable one-dimensional potentials with two analytically known
//! eigenstates, built from a seed superpotential `W₊(x)`, together with an independent
//! finite-difference spectral verifier.
//!
//! Units are ħ = m = 1, so `H = −½ d²/dx² + V(x)`.

pub mod expr;
pub mod numeric;
pub mod par;
pub mod seeds;
pub mod susy;
