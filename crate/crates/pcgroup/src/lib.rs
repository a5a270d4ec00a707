//! File format, corpus runner, JSON reports and the `pcgroup` command line
//! on top of `pcgroup-core`.

pub mod corpus;
pub mod format;
pub mod run;

pub use corpus::{Corpus, CorpusEntry, LoadError, Source};
pub use format::{parse_pcp, serialize_pcp, FormatError};
pub use run::{run_suite, RunOptions, RunReport};
