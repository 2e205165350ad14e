#![no_std]
extern crate alloc;

pub mod algebra;
pub mod dfield;
pub mod error;
pub mod expr;
pub mod frac;
pub mod free;
pub mod gamma;
pub mod groebner;
pub mod index;
pub mod kernel;
pub mod poly;
pub mod ring;
pub mod scalar;
