#![no_std]
extern crate alloc;

pub mod autnum;
pub mod fibration;
pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod stablemap;
