//! Exact cohomology rings of symmetric products of closed orientable
//! surfaces, their characteristic classes, and derived invariants.
//!
//! The free algebra is `Λ(a1*, b1*, …, ag*, bg*) ⊗ Z[c*]`; [`macdonald`]
//! builds the quotient `H*(SP^n(M_g); Z)` degree by degree over it.

pub mod charclasses;
pub mod classifier;
pub mod duality;
pub mod echelon;
pub mod int;
pub mod macdonald;
pub mod oracle;
pub mod ring;
pub mod tensor;
pub mod verifier;

pub use classifier::{classify, classify_with_ring, cup_length_search, InvariantReport};
pub use macdonald::{build, build_with, BuildError, BuildOptions, MacdonaldRing, RelationFamily};
pub use ring::{GeneratorId, Modulus, Monomial, RingElement};
