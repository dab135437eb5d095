//! Alphabet-checked words and burst-deletion primitives.
//!
//! A [`Word`] is a sequence over `{0, .., q-1}` with `2 <= q <= 256`.
//! Positions in the public API are 1-based and ranges are inclusive, so
//! `delete_burst(x, i, len)` removes `x_i .. x_{i+len-1}`.
//!
//! Text format: one word per line, symbols written as space-separated
//! decimal integers.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    q: u32,
    syms: Vec<u8>,
}

impl Word {
    pub fn new(q: u32, syms: Vec<u8>) -> Result<Self> {
        if !(2..=256).contains(&q) {
            return Err(Error::AlphabetUnsupported { q });
        }
        for &s in &syms {
            if u32::from(s) >= q {
                return Err(Error::SymbolOutOfRange {
                    symbol: u32::from(s),
                    q,
                });
            }
        }
        Ok(Word { q, syms })
    }

    /// Internal constructor for symbols already known to be in range.
    pub(crate) fn new_unchecked(q: u32, syms: Vec<u8>) -> Self {
        debug_assert!(syms.iter().all(|&s| u32::from(s) < q));
        Word { q, syms }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.syms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syms.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.syms
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.syms
    }

    /// 1-based symbol accessor.
    pub fn sym(&self, i: usize) -> Result<u8> {
        if i == 0 || i > self.len() {
            return Err(Error::RangeOutOfBounds {
                lo: i,
                hi: i,
                len: self.len(),
            });
        }
        Ok(self.syms[i - 1])
    }

    /// Inclusive 1-based slice `x_lo .. x_hi`; `lo == hi + 1` yields the
    /// empty slice.
    pub fn slice1(&self, lo: usize, hi: usize) -> Result<&[u8]> {
        if lo == 0 || hi > self.len() || lo > hi + 1 {
            return Err(Error::RangeOutOfBounds {
                lo,
                hi,
                len: self.len(),
            });
        }
        Ok(&self.syms[lo - 1..hi])
    }

    pub fn subword(&self, lo: usize, hi: usize) -> Result<Word> {
        Ok(Word {
            q: self.q,
            syms: self.slice1(lo, hi)?.to_vec(),
        })
    }

    fn check_same_alphabet(&self, other: &Word) -> Result<()> {
        if self.q != other.q {
            return Err(Error::AlphabetMismatch {
                left: self.q,
                right: other.q,
            });
        }
        Ok(())
    }

    /// Remove the burst `x_i .. x_{i+len-1}`. `len == 0` returns the word
    /// unchanged (an empty burst).
    pub fn delete_burst(&self, i: usize, len: usize) -> Result<Word> {
        if len == 0 {
            return Ok(self.clone());
        }
        let n = self.len();
        if i == 0 || i + len - 1 > n {
            return Err(Error::RangeOutOfBounds {
                lo: i,
                hi: i + len - 1,
                len: n,
            });
        }
        let mut syms = Vec::with_capacity(n - len);
        syms.extend_from_slice(&self.syms[..i - 1]);
        syms.extend_from_slice(&self.syms[i + len - 1..]);
        Ok(Word { q: self.q, syms })
    }

    /// Insert `run` so that it occupies positions `i .. i+|run|-1` of the
    /// result; `i` may be `len + 1` (append).
    pub fn insert_run(&self, i: usize, run: &[u8]) -> Result<Word> {
        let n = self.len();
        if i == 0 || i > n + 1 {
            return Err(Error::RangeOutOfBounds { lo: i, hi: i, len: n });
        }
        for &s in run {
            if u32::from(s) >= self.q {
                return Err(Error::SymbolOutOfRange {
                    symbol: u32::from(s),
                    q: self.q,
                });
            }
        }
        let mut syms = Vec::with_capacity(n + run.len());
        syms.extend_from_slice(&self.syms[..i - 1]);
        syms.extend_from_slice(run);
        syms.extend_from_slice(&self.syms[i - 1..]);
        Ok(Word { q: self.q, syms })
    }

    /// All words reachable by deleting one burst of length exactly `len`.
    pub fn exact_burst_ball(&self, len: usize) -> Vec<Word> {
        let n = self.len();
        if len > n {
            return Vec::new();
        }
        if len == 0 {
            return vec![self.clone()];
        }
        let mut out = BTreeSet::new();
        for i in 1..=n - len + 1 {
            out.insert(self.delete_burst(i, len).expect("in-range burst"));
        }
        out.into_iter().collect()
    }

    /// All words reachable by deleting one burst of at most `t` symbols
    /// (including the empty burst), sorted and deduplicated.
    pub fn burst_ball(&self, t: usize) -> Vec<Word> {
        let mut out = BTreeSet::new();
        for len in 0..=t.min(self.len()) {
            out.extend(self.exact_burst_ball(len));
        }
        out.into_iter().collect()
    }

    /// Words `x' != x` of the same length whose burst balls intersect this
    /// word's: delete a burst of length `a <= t`, then re-insert some run of
    /// `a` symbols. Exponential in `t`; intended for test-scale inputs.
    pub fn confusable_set(&self, t: usize) -> Vec<Word> {
        let mut out = BTreeSet::new();
        for a in 1..=t.min(self.len()) {
            let runs = all_runs(self.q, a);
            for y in self.exact_burst_ball(a) {
                for i in 1..=y.len() + 1 {
                    for run in &runs {
                        let cand = y.insert_run(i, run).expect("in-range insert");
                        if cand != *self {
                            out.insert(cand);
                        }
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// Largest `len <= t` such that `other` lies in this word's exact
    /// burst-`len` ball, if any. (Used as an independent decode oracle.)
    pub fn burst_distance(&self, other: &Word, t: usize) -> Result<Option<usize>> {
        self.check_same_alphabet(other)?;
        if other.len() > self.len() || self.len() - other.len() > t {
            return Ok(None);
        }
        let len = self.len() - other.len();
        if self.exact_burst_ball(len).binary_search(other).is_ok() {
            Ok(Some(len))
        } else {
            Ok(None)
        }
    }

    // -- text format --

    pub fn to_line(&self) -> String {
        self.syms
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn parse_line(q: u32, line: &str) -> Result<Word> {
        let mut syms = Vec::new();
        for tok in line.split_whitespace() {
            let v: u32 = tok
                .parse()
                .map_err(|_| Error::WordParse(format!("bad symbol token {tok:?}")))?;
            if v >= q {
                return Err(Error::SymbolOutOfRange { symbol: v, q });
            }
            syms.push(v as u8);
        }
        Word::new(q, syms)
    }

    /// Parse a whole document: one word per line, blank lines skipped.
    pub fn parse_words(q: u32, text: &str) -> Result<Vec<Word>> {
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| Word::parse_line(q, l))
            .collect()
    }

    pub fn words_to_string(words: &[Word]) -> String {
        let mut s = String::new();
        for w in words {
            s.push_str(&w.to_line());
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

/// Every run in `{0..q-1}^len`, in lexicographic order.
pub(crate) fn all_runs(q: u32, len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::with_capacity((q as usize).pow(len as u32));
    let mut cur = vec![0u8; len];
    loop {
        out.push(cur.clone());
        // increment as base-q odometer
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if u32::from(cur[i]) + 1 < q {
                cur[i] += 1;
                cur[i + 1..].fill(0);
                break;
            }
        }
    }
}
