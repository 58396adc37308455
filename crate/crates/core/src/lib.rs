//! Word sense induction and sense selection toolkit.
//!
//! * [`lexicon`]: sense inventory parsing and indexing
//! * [`embeddings`]: word vectors and averaged gloss/example/context vectors
//! * [`clustering`]: adaptive k-means, bounded CRP, personalized PageRank WSD
//! * [`sense_select`]: TOP / AVG / ATT sense integration and gradient checks
//! * [`eval`]: V-measure, paired F-score, lexical-choice rho and confusion matrix
//! * [`pipeline`]: corpus ingestion and the build/label/evaluate workflows

pub mod clustering;
pub mod embeddings;
pub mod error;
pub mod eval;
pub mod lexicon;
pub mod pipeline;
pub mod sense_select;
pub mod vector;

pub use error::{Error, Result};
