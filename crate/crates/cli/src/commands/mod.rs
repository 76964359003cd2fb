pub mod reduce;
pub mod scan;
pub mod spectrum;
pub mod verify;
pub mod wavefunction;
