//! Model files, reports, and the command-line surface for the exact
//! cleanness engines in `flagclean-core`.

pub mod diag;
pub mod expr;
pub mod model_text;
pub mod report;
