//! Crate-wide error type.
//!
//! Variants are grouped by pipeline stage so campaign reports can attribute a
//! failure to the stage that raised it.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // -- word / alphabet plumbing --
    #[error("symbol {symbol} out of range for alphabet size {q}")]
    SymbolOutOfRange { symbol: u32, q: u32 },
    #[error("alphabet size {q} unsupported: must be in 2..=256")]
    AlphabetUnsupported { q: u32 },
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: u32, right: u32 },
    #[error("position range [{lo}, {hi}] invalid for word of length {len}")]
    RangeOutOfBounds { lo: usize, hi: usize, len: usize },
    #[error("word length {got} does not match expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("operation requires a non-empty word")]
    EmptyWord,
    #[error("cannot parse word: {0}")]
    WordParse(String),

    // -- mixed-radix / digit plumbing --
    #[error("value {value} not below radix {radix} at position {index}")]
    RadixValueRange {
        value: u64,
        radix: u64,
        index: usize,
    },
    #[error("integer does not fit in {width} base-{q} digits")]
    DigitOverflow { width: usize, q: u32 },
    #[error("packed value exceeds the radix product")]
    PackedValueRange,

    // -- parameter derivation --
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("window length {len} exceeds windowMax {max}")]
    WindowTooLong { len: usize, max: usize },
    #[error("fewer than two length-rho strides fit in n; no sketch windows exist")]
    NoSketchWindows,

    // -- single-deletion decoding --
    #[error("no insertion candidate matches the tag")]
    NoCandidate,
    #[error("multiple distinct candidates match the tag")]
    AmbiguousCandidates,

    // -- compressor --
    #[error("input contains the forbidden pattern")]
    PatternFound,
    #[error("block rank {rank} out of range (max {max})")]
    BlockRankRange { rank: u64, max: u64 },
    #[error("compressed image needs more than {width} digits")]
    CompressorCapacity { width: usize },

    // -- dense encoder --
    #[error("malformed block chain: {0}")]
    MalformedBlock(String),
    #[error("dense encoding did not terminate")]
    EncoderStuck,

    // -- sketch --
    #[error("no prime below alphaMax separates the confusable set")]
    AlphaExhausted,
    #[error("sketch field out of range: {0}")]
    SketchFieldRange(String),
    #[error("no insertion candidate matches the window sketch")]
    WindowNoSurvivor,
    #[error("multiple distinct window candidates match the sketch")]
    WindowAmbiguous,

    // -- locator --
    #[error("locator found no consistent case: {0}")]
    LocatorNoCase(String),

    // -- codec --
    #[error("received length {got} outside [{min}, {max}]")]
    ReceivedLengthRange { got: usize, min: usize, max: usize },
    #[error("no decoder case matches the received suffix")]
    CaseAnalysisFailed,

    // -- harness --
    #[error("campaign configuration error: {0}")]
    CampaignConfig(String),
}

impl Error {
    /// Pipeline stage label used in campaign failure records.
    pub fn stage(&self) -> &'static str {
        use Error::*;
        match self {
            SymbolOutOfRange { .. } | AlphabetUnsupported { .. } | AlphabetMismatch { .. }
            | RangeOutOfBounds { .. } | LengthMismatch { .. } | EmptyWord | WordParse(_) => "word",
            RadixValueRange { .. } | DigitOverflow { .. } | PackedValueRange => "radix",
            Infeasible(_) | WindowTooLong { .. } | NoSketchWindows => "params",
            NoCandidate | AmbiguousCandidates => "vt",
            PatternFound | BlockRankRange { .. } | CompressorCapacity { .. } => {
                "compressor"
            }
            MalformedBlock(_) | EncoderStuck => "dense",
            AlphaExhausted | SketchFieldRange(_) => "sketch",
            WindowNoSurvivor | WindowAmbiguous => "window-recovery",
            LocatorNoCase(_) => "locator",
            ReceivedLengthRange { .. } | CaseAnalysisFailed => "case-analysis",
            CampaignConfig(_) => "campaign",
        }
    }
}
