//! Oriented link diagrams in planar-diagram notation.

pub mod cable;
pub mod faces;
pub mod moves;
pub mod ops;
pub mod pd;
pub mod resolve;

pub use cable::{cable, Mult};
pub use faces::{PlanarFaces, OUTER_FACE};
pub use moves::{apply_move, r_insertions, Applied, Move};
pub use ops::{disjoint_union, linking_matrix, linking_number, mirror};
pub use pd::{parse_pd, Diagram, DiagramSpec, Label, Slot};
pub use resolve::{oriented_state, resolve, State, StateCircles};
