pub mod bench;
pub mod bounds;
pub mod gen;
pub mod risk;
pub mod select;
