pub mod cli;
pub mod phase;
pub mod quad;
pub mod special;
pub mod spectra;
pub mod sum_lemmas;
pub mod zeros;
