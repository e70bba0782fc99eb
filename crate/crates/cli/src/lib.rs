//! Library half of the `chainviz` command: the state expression language,
//! figure presets and the run pipeline.

pub mod expr;
pub mod presets;
pub mod run;
