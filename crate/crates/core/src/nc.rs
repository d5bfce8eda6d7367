//! Non-crossing partitions of `{0, …, n−1}`.

use crate::error::{Error, Result};

/// Largest `n` accepted by [`enumerate_nc`]; `|NC(14)| = 2 674 440`.
pub const MAX_NC_SIZE: usize = 14;

/// A partition of `{0, …, n−1}` whose blocks do not cross. Blocks are sorted, and ordered by
/// their smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NonCrossingPartition {
    blocks: Vec<Vec<usize>>,
}

impl NonCrossingPartition {
    /// Validates that `blocks` partition `0..n` without crossings.
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort_by_key(|b| b[0]);
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; n];
        for &i in blocks.iter().flatten() {
            if i >= n || seen[i] {
                return Err(Error::Domain("blocks do not partition 0..n".into()));
            }
            seen[i] = true;
        }
        let p = Self { blocks };
        if !p.is_non_crossing() {
            return Err(Error::Domain("partition has crossing blocks".into()));
        }
        Ok(p)
    }

    fn from_labels(labels: &[usize], count: usize) -> Self {
        let mut blocks = vec![Vec::new(); count];
        for (i, &b) in labels.iter().enumerate() {
            blocks[b].push(i);
        }
        Self { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// No `a < b < c < d` with `a, c` in one block and `b, d` in another.
    pub fn is_non_crossing(&self) -> bool {
        let n = self.size();
        let mut label = vec![0usize; n];
        for (k, b) in self.blocks.iter().enumerate() {
            for &i in b {
                label[i] = k;
            }
        }
        for (k, b) in self.blocks.iter().enumerate() {
            for w in b.windows(2) {
                // Any element strictly between consecutive members of a block must belong to a
                // block lying entirely inside that gap.
                for &inner in &label[w[0] + 1..w[1]] {
                    if inner == k {
                        continue;
                    }
                    if self.blocks[inner].iter().any(|&j| j < w[0] || j > w[1]) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Iterator over `NC(n)`.
///
/// Elements are placed left to right. Each either opens a new block or joins a block that is
/// still open; joining a block closes every block opened after it, which is exactly the
/// non-crossing condition. Each partition arises from exactly one choice sequence.
pub struct NcPartitions {
    n: usize,
    /// Choice for element i: 0 opens a block, t + 1 joins `stacks[i][t]`.
    choices: Vec<usize>,
    /// Open-block stack before element i is placed.
    stacks: Vec<Vec<usize>>,
    /// Number of blocks before element i is placed.
    counts: Vec<usize>,
    labels: Vec<usize>,
    done: bool,
}

impl NcPartitions {
    fn new(n: usize) -> Self {
        let mut it = Self {
            n,
            choices: vec![0; n],
            stacks: vec![Vec::new(); n],
            labels: vec![0; n],
            counts: vec![0; n],
            done: false,
        };
        it.rebuild_from(0);
        it
    }

    /// Recomputes labels, and the stacks of later elements, for elements `from..n`.
    /// `stacks[from]` and `counts[from]` depend only on earlier choices and stay valid.
    fn rebuild_from(&mut self, from: usize) {
        for i in from..self.n {
            let mut stack = self.stacks[i].clone();
            let mut count = self.counts[i];
            match self.choices[i] {
                0 => {
                    self.labels[i] = count;
                    stack.push(count);
                    count += 1;
                }
                c => {
                    self.labels[i] = stack[c - 1];
                    stack.truncate(c);
                }
            }
            if i + 1 < self.n {
                self.stacks[i + 1] = stack;
                self.counts[i + 1] = count;
            }
        }
    }

    fn block_count(&self) -> usize {
        self.labels.iter().copied().max().map_or(0, |m| m + 1)
    }
}

impl Iterator for NcPartitions {
    type Item = NonCrossingPartition;

    fn next(&mut self) -> Option<NonCrossingPartition> {
        if self.done {
            return None;
        }
        let current = NonCrossingPartition::from_labels(&self.labels, self.block_count());
        // Odometer step: bump the last element that still has an unused option.
        let mut i = self.n;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.choices[i] < self.stacks[i].len() {
                self.choices[i] += 1;
                for c in &mut self.choices[i + 1..] {
                    *c = 0;
                }
                self.rebuild_from(i);
                break;
            }
        }
        Some(current)
    }
}

/// All non-crossing partitions of `{0, …, n−1}`, each exactly once; `1 ≤ n ≤ 14`.
pub fn enumerate_nc(n: usize) -> Result<NcPartitions> {
    if n == 0 || n > MAX_NC_SIZE {
        return Err(Error::Domain(format!("NC enumeration needs 1 <= n <= {MAX_NC_SIZE}, got {n}")));
    }
    Ok(NcPartitions::new(n))
}
