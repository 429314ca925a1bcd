pub mod film2d;
pub mod sweep;
pub mod validate;
pub mod wall1d;
