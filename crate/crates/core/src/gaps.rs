//! Prime-gap scans against the `c √p log p` envelope.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sieve::SegmentedSieve;

/// One gap between consecutive primes `p < q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub p: u64,
    pub q: u64,
    pub gap: u64,
    /// `gap / (√p log p)`.
    pub ratio: f64,
}

impl GapRecord {
    fn new(p: u64, q: u64) -> Self {
        let pf = p as f64;
        GapRecord { p, q, gap: q - p, ratio: (q - p) as f64 / (pf.sqrt() * pf.ln()) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapScan {
    pub limit: u64,
    /// Gaps at least as large as every earlier gap, for `p < limit`.
    pub records: Vec<GapRecord>,
    /// Largest ratio over all gaps with `3 < p < limit`.
    pub worst: Option<GapRecord>,
    pub gaps_scanned: u64,
}

impl GapScan {
    pub fn max_gap(&self) -> u64 {
        self.records.last().map_or(0, |r| r.gap)
    }
}

struct Scanner {
    scan: GapScan,
    prev: Option<u64>,
    best_gap: u64,
}

impl Scanner {
    fn push(&mut self, q: u64) {
        if let Some(p) = self.prev {
            let rec = GapRecord::new(p, q);
            self.scan.gaps_scanned += 1;
            if rec.gap >= self.best_gap {
                self.best_gap = rec.gap;
                self.scan.records.push(rec);
            }
            if p > 3 && self.scan.worst.is_none_or(|w| rec.ratio > w.ratio) {
                self.scan.worst = Some(rec);
            }
        }
        self.prev = Some(q);
    }
}

/// Scan every gap `p_{n+1} − p_n` with `p_n < limit`. The final successor
/// prime may exceed `limit`.
pub fn max_gap_scan(limit: u64) -> Result<GapScan> {
    if limit < 5 {
        return Err(Error::InvalidQuery(format!("gap scan needs limit >= 5, got {limit}")));
    }
    // Gaps below 2^64 are far shorter than 2000; a miss just widens the window.
    let mut reach = limit + 2000;
    let sieve = SegmentedSieve::new(reach);
    let mut st = Scanner {
        scan: GapScan { limit, records: Vec::new(), worst: None, gaps_scanned: 0 },
        prev: None,
        best_gap: 0,
    };
    sieve.for_each_prime(2, limit - 1, &mut |q| st.push(q))?;
    let mut next = None;
    let mut lo = limit;
    while next.is_none() {
        let wider;
        let s = if reach <= sieve.limit() {
            &sieve
        } else {
            wider = SegmentedSieve::new(reach);
            &wider
        };
        s.for_each_prime(lo, reach, &mut |q| {
            next.get_or_insert(q);
        })?;
        lo = reach + 1;
        reach *= 2;
    }
    st.push(next.unwrap());
    Ok(st.scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn primes_below(n: u64) -> Vec<u64> {
        (2..n).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
    }

    #[test]
    fn limit_ten() {
        let s = max_gap_scan(10).unwrap();
        let triples: Vec<_> = s.records.iter().map(|r| (r.p, r.q, r.gap)).collect();
        assert_eq!(triples, vec![(2, 3, 1), (3, 5, 2), (5, 7, 2), (7, 11, 4)]);
        assert_eq!(s.max_gap(), 4);
    }

    #[test]
    fn limit_hundred() {
        let s = max_gap_scan(100).unwrap();
        let last = s.records.last().unwrap();
        assert_eq!((last.p, last.q, last.gap), (89, 97, 8));
        assert_eq!(s.max_gap(), 8);
    }

    #[test]
    fn records_match_enumeration() {
        let ps = primes_below(5000);
        let mut best = 0;
        let mut expect = Vec::new();
        for w in ps.windows(2) {
            if w[1] - w[0] >= best {
                best = w[1] - w[0];
                expect.push((w[0], w[1]));
            }
        }
        let s = max_gap_scan(4999).unwrap();
        let got: Vec<_> = s.records.iter().map(|r| (r.p, r.q)).collect();
        assert_eq!(got, expect);
        assert_eq!(s.gaps_scanned as usize, ps.len() - 1);
        let w = s.worst.unwrap();
        assert_eq!((w.p, w.q), (7, 11));
    }

    #[test]
    fn successor_beyond_limit() {
        let s = max_gap_scan(90).unwrap();
        assert_eq!(s.records.last().map(|r| (r.p, r.q)), Some((89, 97)));
    }

    #[test]
    fn rejects_small_limit() {
        assert!(max_gap_scan(4).is_err());
    }
}
