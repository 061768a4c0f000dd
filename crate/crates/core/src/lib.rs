pub mod benchmark;
pub mod fock;
pub mod priors;
pub mod specfun;
pub mod srm;
pub mod teleport;
pub mod verify;
