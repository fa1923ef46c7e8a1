pub mod catalog;
pub mod divpol;
pub mod exactgeom;
pub mod real;
pub mod pdiv;
pub mod degen;
pub mod futaki;
pub mod symmetry;
pub mod samples;
