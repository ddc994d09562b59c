pub mod checkerboard;
pub mod cli;
pub mod error;
pub mod interp;
pub mod io;
pub mod lagrange;
pub mod monomial;
pub mod nodemap;
pub mod orthopoly;
pub mod presets;
pub mod random;
pub mod vanishing;
pub mod verify;
