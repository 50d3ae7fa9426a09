//! Effectful categories presented by string diagrams with a runtime wire.

mod exchange;

pub mod arrowcli;
pub mod diagram;
pub mod interp;
pub mod monoid;
pub mod polygraph;
pub mod promonad;
pub mod puretensor;
pub mod runtime;

pub use diagram::{BfsOutcome, Diagram, Slice};
pub use polygraph::{ObjId, Polygraph, PolygraphCouple};
pub use runtime::{EffLayer, EffMorphism};
