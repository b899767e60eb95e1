pub mod cli;
pub mod combinat;
pub mod graph;
pub mod gravity;
pub mod kostant;
pub mod lidskii;
pub mod paths;
pub mod unified;
