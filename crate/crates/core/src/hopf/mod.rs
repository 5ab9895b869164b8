//! PBW normal-ordering kernel for `U(sl2)[[h]]` with its Hopf structure maps,
//! compact star, defining representation and braided R-matrix.

mod element;
pub mod expr;
pub mod pbw;
mod rep;
mod tensor;

pub use element::{default_cap, AlgElement, Ctx, Gen, TermRepr};
pub use pbw::Mono;
pub use rep::{pair_index, rhat_matrix, rho_defining, SeriesMatrix};
pub use tensor::{TensorElement, TensorTermRepr};

/// Undeformed coproduct.
pub fn coproduct(x: &AlgElement) -> crate::Result<TensorElement> {
    x.coproduct()
}

pub fn antipode(x: &AlgElement) -> crate::Result<AlgElement> {
    x.antipode()
}

pub fn counit(x: &AlgElement) -> crate::HSeries {
    x.counit()
}

pub fn star_conjugate(x: &AlgElement) -> AlgElement {
    x.star()
}

pub fn multiply(x: &AlgElement, y: &AlgElement) -> crate::Result<AlgElement> {
    x.multiply(y)
}
