//! Computational models of iterated monoidal categories: the free objects
//! `M_n(k)`, their coherence criterion, the complete graph operads,
//! order-complex homology, the Milgram permutohedra and little cubes.

pub mod coherence;
pub mod cubes;
pub mod enumeration;
pub mod error;
pub mod expr;
pub mod graph_operads;
pub mod milgram;
pub mod pair_table;
pub mod poset;
pub mod topology;

pub use error::{Error, Result};
pub use expr::{Expr, Label, Op};
pub use pair_table::PairTable;
pub use poset::Poset;
