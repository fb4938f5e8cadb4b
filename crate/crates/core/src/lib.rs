pub mod authors;
pub mod cluster;
pub mod corpus;
pub mod forgetting;
pub mod milestone;
pub mod refparse;
pub mod report;
pub mod synth;
pub mod timeseries;

pub use corpus::{Article, Corpus, CorpusError, CorpusStats};
pub use forgetting::{CurveMode, ForgettingCurve};
pub use milestone::{AlphaSource, McFormula, MilestoneRecord};
pub use refparse::{AuthorKey, NotationStyle, PaperId, ParsedReference};
pub use report::{Analysis, Emitter, Options, ReportError};
pub use synth::{GroundTruth, SynthConfig};
pub use timeseries::{CitationCurve, CitationSeries};
