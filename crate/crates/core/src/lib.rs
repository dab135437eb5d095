//! q-ary codes correcting a single burst of at most `t` deletions.
//!
//! The pipeline, bottom up:
//!
//! * [`word`] — alphabet-checked words, burst deletions, deletion balls.
//! * [`vt`] — Varshamov–Tenengolts syndromes and the Tenengolts
//!   single-deletion code used as the inner workhorse.
//! * [`pattern`] — occurrences of the marker pattern `0^t 1^t` and the
//!   density predicate that the dense encoder establishes.
//! * [`compressor`] — invertible compression of pattern-free segments.
//! * [`dense`] — encoder mapping arbitrary words to dense words of the same
//!   length, and its inverse.
//! * [`sketch`] — interleaved syndromes, the per-window checksum with its
//!   prime-modulus search, and the four-field sketch of a dense word.
//! * [`locator`] — narrows a burst to a short interval from the first two
//!   sketch fields.
//! * [`codec`] — the outer code: systematic encoder and case-analysis
//!   decoder correcting one burst of at most `t` deletions.
//! * [`harness`] — randomized/exhaustive burst campaigns with JSON reports.
//!
//! All positions in public APIs are 1-based and inclusive, matching the
//! conventions of the construction; internal slices translate at the edge.

pub mod codec;
pub mod compressor;
pub mod dense;
pub mod error;
pub mod harness;
pub mod locator;
pub mod params;
pub mod pattern;
pub mod radix;
pub mod sketch;
pub mod vt;
pub mod word;

pub use error::{Error, Result};
pub use word::Word;
