//! Scoring: chunking precision/recall/F1 with the I-after-O repair rule,
//! inter-annotator agreement under configurable strictness, and coreference
//! metrics (MUC, B³, CEAFe and their unweighted average).

mod agreement;
mod chunk;
mod coref;
mod report;

pub use agreement::{
    agreement_average, agreement_pair, match_mentions, AgreementConfig, AgreementReport,
    PairScore, SpanStrictness, TagStrictness,
};
pub use chunk::{chunk_prf, extract_chunks};
pub use coref::{
    b3_prf, ceafe_prf, conll_avg, muc_prf, score_chain_sets, ChainSet, CorefAccumulator,
    CorefScores, Prf,
};
pub use report::{round_half_up, MetricReport, PrfCounts};
