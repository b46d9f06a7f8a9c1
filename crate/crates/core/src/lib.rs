pub mod bar;
pub mod coxeter;
pub mod homology;
pub mod matching;
pub mod monoid;
pub mod morse;
pub mod salvetti;
