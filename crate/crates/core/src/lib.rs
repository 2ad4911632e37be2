//! Gabriel-Roiter measures and comeasures of string modules over path
//! algebras of type Ã_n, their IPF decompositions, tube structure and the
//! rhombic picture.

pub mod artubes;
pub mod grcompute;
pub mod measure;
pub mod quiver;
pub mod rhombic;
pub mod strings;

pub use measure::{Measure, PeriodicMeasure, Sequence};
pub use quiver::{Cover, Direction, HookSystem, QuiverSpec};
