//! Poset Ramsey toolkit: Boolean-lattice colorings, induced and weak poset
//! embeddings, exact extremal parameters, constructive upper-bound procedures,
//! exhaustive Ramsey search and the entropy constants behind the weak bounds.

pub mod constructive;
pub mod extremal;
pub mod lattice;
pub mod numerics;
pub mod posets;
pub mod ramsey_search;
