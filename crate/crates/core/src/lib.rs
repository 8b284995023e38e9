//! Detection and cleaning of noisy code-comment pairs.
//!
//! The crate reads JSONL corpora of method/summary pairs, labels each pair
//! with the noise categories it exhibits, applies the matching remove or
//! update action, and reports corpus-level statistics. Summarization metrics
//! (BLEU, ROUGE-L, METEOR, CIDEr) live in [`metrics`].

pub mod cleaner;
pub mod config;
pub mod corpus;
pub mod detectors;
pub mod error;
pub mod lexing;
pub mod metrics;
pub mod report;
pub mod sentence;
pub mod synth;
pub mod taxonomy;

pub use cleaner::{clean_dataset, verify_fixpoint, CleanOutcome, DistillResult, Verdict};
pub use config::RuleConfig;
pub use corpus::{CodeCommentPair, Dataset, Language, Partition};
pub use detectors::{diagnose, find_duplicates};
pub use error::{Error, Result};
pub use report::{assess, render_report, QualityReport, ReportFormat};
pub use taxonomy::{Diagnosis, NoiseAction, NoiseCategory, NoiseLabel};
