//! Marked groups: exact models, canonical Cayley balls, convergence witnesses,
//! identity and discrimination tools, the abelian and Hall-group orders, and growth.

pub mod abelian;
pub mod ball;
pub mod cli;
pub mod error;
pub mod identity;
pub mod group;
pub mod growth;
pub mod int;
pub mod linalg;
pub mod poset;
pub mod witness;
pub mod word;

pub use error::{Error, Result};
pub use group::parse::parse_group;
pub use group::{Element, GroupModel, MarkedGroup};
pub use word::{parse_word, Expr, Word};
