pub mod contfrac;
pub mod diagram;
pub mod pathfinder;
pub mod classifier;
pub mod slopes;
pub mod oracle;
pub mod cli;
