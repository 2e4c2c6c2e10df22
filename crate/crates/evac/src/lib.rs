//! Std companion of `evac-core`: JSON instance and flow files, random
//! instances, thread-parallel enumeration and the `evac` command line.

pub mod cli;
pub mod flowfile;
pub mod instance;
pub mod parallel;
pub mod random;
pub mod report;
