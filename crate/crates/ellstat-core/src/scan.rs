//! Generic block-partitioned prime scans: a coordinator hands numeric blocks
//! to a worker pool, workers return accumulator fragments, and the
//! coordinator merges them in block order. Merging is commutative, so the
//! result is independent of thread count; the ordering exists only so that
//! checkpoints are prefixes of the final state.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScanError {
    #[error("invariant violated at p = {p}: {what}")]
    Invariant { p: u64, what: String },
    #[error("scan aborted: {0}")]
    Aborted(String),
}

impl From<crate::ecfp::EcfpError> for ScanError {
    fn from(e: crate::ecfp::EcfpError) -> Self {
        match e {
            crate::ecfp::EcfpError::Invariant { p, what } => {
                ScanError::Invariant { p, what: what.to_string() }
            }
            crate::ecfp::EcfpError::Certification { p } => {
                ScanError::Invariant { p, what: "structure certification failed".into() }
            }
            other => ScanError::Aborted(other.to_string()),
        }
    }
}

/// Field-wise mergeable aggregate; merging is commutative and associative.
pub trait Merge {
    fn merge(&mut self, other: Self);
}

/// A numeric range [lo, hi] cut into fixed-span blocks.
#[derive(Debug, Clone, Copy)]
pub struct BlockPlan {
    pub lo: u64,
    pub hi: u64,
    pub block_span: u64,
}

impl BlockPlan {
    pub fn new(lo: u64, hi: u64, block_span: u64) -> Self {
        assert!(lo <= hi && block_span >= 1);
        BlockPlan { lo, hi, block_span }
    }

    pub fn n_blocks(&self) -> u64 {
        (self.hi - self.lo) / self.block_span + 1
    }

    /// Inclusive bounds of block `idx`.
    pub fn block(&self, idx: u64) -> (u64, u64) {
        let lo = self.lo + idx * self.block_span;
        let hi = self.hi.min(lo + self.block_span - 1);
        (lo, hi)
    }
}

/// Run `scan_block` over every block from `start_block` on, merging results
/// in block order into `init`. `on_merged(idx, &acc)` fires after each block
/// is folded in, with `acc` equal to a full scan of all blocks `..= idx`.
pub fn run_blocks<A, F>(
    plan: BlockPlan,
    threads: usize,
    start_block: u64,
    init: A,
    scan_block: F,
    mut on_merged: impl FnMut(u64, &A),
) -> Result<A, ScanError>
where
    A: Merge + Send,
    F: Fn(u64, u64) -> Result<A, ScanError> + Sync,
{
    let n_blocks = plan.n_blocks();
    let threads = threads.max(1);
    let mut acc = init;
    if start_block >= n_blocks {
        return Ok(acc);
    }
    if threads == 1 || n_blocks - start_block == 1 {
        for idx in start_block..n_blocks {
            let (lo, hi) = plan.block(idx);
            acc.merge(scan_block(lo, hi)?);
            on_merged(idx, &acc);
        }
        return Ok(acc);
    }

    let next = AtomicU64::new(start_block);
    let (tx, rx) = mpsc::channel::<(u64, Result<A, ScanError>)>();
    std::thread::scope(|scope| -> Result<(), ScanError> {
        for _ in 0..threads.min((n_blocks - start_block) as usize) {
            let tx = tx.clone();
            let scan_block = &scan_block;
            let plan = plan;
            let next = &next;
            scope.spawn(move || loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= n_blocks {
                    break;
                }
                let (lo, hi) = plan.block(idx);
                if tx.send((idx, scan_block(lo, hi))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        // Merge strictly in block order, buffering out-of-order arrivals.
        let mut pending: BTreeMap<u64, A> = BTreeMap::new();
        let mut frontier = start_block;
        for (idx, res) in rx.iter() {
            pending.insert(idx, res?);
            while let Some(chunk) = pending.remove(&frontier) {
                acc.merge(chunk);
                on_merged(frontier, &acc);
                frontier += 1;
            }
        }
        if frontier != n_blocks {
            return Err(ScanError::Aborted("worker pool exited early".into()));
        }
        Ok(())
    })?;
    Ok(acc)
}
