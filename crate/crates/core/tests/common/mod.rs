#![allow(dead_code, clippy::needless_range_loop)]

pub mod fixture;
pub mod gen;
pub mod novelty;
pub mod oracles;
pub mod sha256;
