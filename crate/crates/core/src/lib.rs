pub mod cayley;
pub mod cli;
pub mod clique;
pub mod decomp;
pub mod density;
pub mod elemset;
pub mod emint;
pub mod error;
pub mod ffield;
pub mod nt;
pub mod poly;
pub mod reproduce;
pub mod stepanov;
pub mod subgroup;
pub mod sumsets;

pub use elemset::ElemSet;
pub use error::{Error, Result};
pub use ffield::{make_field, Elem, FieldCtx};
