//! Exact arithmetic and search tools for Pisot, Salem and Perron numbers,
//! the spectra they generate, and the separation properties of homogeneous
//! iterated function systems with overlaps.

pub mod algebraic;
pub mod classify;
pub mod ifs;
pub mod spectrum;
