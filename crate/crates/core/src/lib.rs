#![no_std]

extern crate alloc;

pub mod exactalg;
pub mod lattice;
pub mod reptheory;
pub mod slice;
pub mod countlab;
