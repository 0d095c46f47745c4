//! Coefficient machinery for normalized univalent functions on the unit disk.

pub mod families;
pub mod grunsky;
pub mod hayman;
pub mod logmilin;
pub mod series;
pub mod tauber;

pub use families::{
    invert_to_sigma, make_schlicht, standard_corpus, Family, FamilyError, FamilyKind,
    SchlichtFunction, SigmaFunction,
};
pub use series::{Complex, ComplexSeries, SeriesError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
