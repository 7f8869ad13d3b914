//! Text, JSON and b-file formats.

pub mod bfile;
pub mod json;
pub mod text;
