//! Free graded Lie algebras `𝕃_V` over ℚ, their derivations, and free dgl's.

mod algebra;
mod derivation;
mod dgl;
mod element;
mod hom;
mod text;


pub use algebra::{hall_basis, FreeLieAlgebra, Generator, HallElement, HallIndex, Letter, LieWord, Tensor, Word};
pub use derivation::{derive_via_tensor, extend_derivation, Derivation};
pub use dgl::{DglMorphism, FreeDgl};
pub use element::LieElement;
pub use hom::LazyLieHom;
