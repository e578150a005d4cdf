//! Set partitions of `{0, ..., m-1}` as restricted growth strings, streamed
//! in lexicographic order, with Möbius coefficients and the sparsification
//! filter.

use std::fmt;

use thiserror::Error;

use crate::tensor::{EinsumNotation, Signature};

/// Default ceiling on the ground-set size for enumeration.
pub const DEFAULT_MAX_ORDER: usize = 14;
/// Hard ceiling; keeps every Möbius coefficient within `i64`.
pub const MAX_GROUND_SET: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("order {m} exceeds the enumeration ceiling of {max}")]
    OrderTooLarge { m: usize, max: usize },
    #[error("invalid partition: {0}")]
    Invalid(String),
    #[error("partition is not a refinement of the other")]
    NotRefinement,
    #[error("ground sets differ: {0} vs {1}")]
    GroundSetMismatch(usize, usize),
}

/// A set partition stored as its restricted growth string: element `i`
/// lies in block `rgs[i]`, and blocks are numbered by smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    rgs: Vec<u8>,
    blocks: usize,
}

impl SetPartition {
    pub fn from_rgs(rgs: Vec<u8>) -> Result<Self, PartitionError> {
        if rgs.len() > MAX_GROUND_SET {
            return Err(PartitionError::OrderTooLarge { m: rgs.len(), max: MAX_GROUND_SET });
        }
        let mut blocks = 0usize;
        for (i, &b) in rgs.iter().enumerate() {
            if b as usize > blocks {
                return Err(PartitionError::Invalid(format!(
                    "position {i} opens block {b} before block {blocks}"
                )));
            }
            if b as usize == blocks {
                blocks += 1;
            }
        }
        Ok(Self { rgs, blocks })
    }

    /// Build from blocks given in any order; element order inside a block
    /// does not matter either.
    pub fn from_blocks(m: usize, blocks: &[Vec<usize>]) -> Result<Self, PartitionError> {
        let mut label = vec![usize::MAX; m];
        for (k, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(PartitionError::Invalid("empty block".into()));
            }
            for &i in b {
                if i >= m {
                    return Err(PartitionError::Invalid(format!("element {i} outside 0..{m}")));
                }
                if label[i] != usize::MAX {
                    return Err(PartitionError::Invalid(format!("element {i} appears twice")));
                }
                label[i] = k;
            }
        }
        if let Some(i) = label.iter().position(|&l| l == usize::MAX) {
            return Err(PartitionError::Invalid(format!("element {i} is not covered")));
        }
        let mut relabel = vec![u8::MAX; blocks.len()];
        let mut next = 0u8;
        let rgs = label
            .iter()
            .map(|&l| {
                if relabel[l] == u8::MAX {
                    relabel[l] = next;
                    next += 1;
                }
                relabel[l]
            })
            .collect();
        Self::from_rgs(rgs)
    }

    /// All singletons.
    pub fn finest(m: usize) -> Self {
        Self { rgs: (0..m as u8).collect(), blocks: m }
    }

    /// One block.
    pub fn coarsest(m: usize) -> Self {
        Self { rgs: vec![0; m], blocks: usize::from(m > 0) }
    }

    /// Size of the ground set.
    pub fn len(&self) -> usize {
        self.rgs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rgs.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.rgs[i] as usize
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (i, &b) in self.rgs.iter().enumerate() {
            out[b as usize].push(i);
        }
        out
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &SetPartition) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut image = vec![usize::MAX; self.blocks];
        for (a, b) in self.rgs.iter().zip(&other.rgs) {
            let slot = &mut image[*a as usize];
            if *slot == usize::MAX {
                *slot = *b as usize;
            } else if *slot != *b as usize {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.blocks() {
            let items: Vec<String> = b.iter().map(|i| i.to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        Ok(())
    }
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// `(-1)^(m - |pi|) * prod over blocks of (|C| - 1)!`.
pub fn mobius_coefficient(pi: &SetPartition) -> i64 {
    let mut sizes = vec![0usize; pi.block_count()];
    for &b in pi.rgs() {
        sizes[b as usize] += 1;
    }
    let magnitude = sizes
        .iter()
        .try_fold(1i64, |acc, &s| acc.checked_mul(factorial(s - 1)))
        .expect("ground set is capped so the coefficient fits in i64");
    if (pi.len() - pi.block_count()).is_multiple_of(2) {
        magnitude
    } else {
        -magnitude
    }
}

/// Möbius function of the partition lattice on the interval `[pi, rho]`:
/// `(-1)^(|pi| - |rho|) * prod over blocks C of rho of (k_C - 1)!`, where
/// `k_C` counts the blocks of `pi` inside `C`.
pub fn mobius_pair(pi: &SetPartition, rho: &SetPartition) -> Result<i64, PartitionError> {
    if pi.len() != rho.len() {
        return Err(PartitionError::GroundSetMismatch(pi.len(), rho.len()));
    }
    if !pi.refines(rho) {
        return Err(PartitionError::NotRefinement);
    }
    let mut seen = vec![false; pi.block_count()];
    let mut count = vec![0usize; rho.block_count()];
    for (a, b) in pi.rgs().iter().zip(rho.rgs()) {
        if !std::mem::replace(&mut seen[*a as usize], true) {
            count[*b as usize] += 1;
        }
    }
    let magnitude: i64 = count.iter().map(|&k| factorial(k - 1)).product();
    Ok(if (pi.block_count() - rho.block_count()).is_multiple_of(2) { magnitude } else { -magnitude })
}

/// Whether `pi` refines `rho`.
pub fn is_refinement(pi: &SetPartition, rho: &SetPartition) -> Result<bool, PartitionError> {
    if pi.len() != rho.len() {
        return Err(PartitionError::GroundSetMismatch(pi.len(), rho.len()));
    }
    Ok(pi.refines(rho))
}

/// Bell numbers via the Bell triangle.
pub fn bell_number(m: usize) -> u128 {
    let mut row: Vec<u128> = vec![1];
    for _ in 0..m {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

/// Pairs of kernel arguments that share a signature tuple but carry
/// different indices, as per-element bitmasks.
fn conflicts(signature: &Signature) -> Vec<u32> {
    let mut c = vec![0u32; signature.arity()];
    for t in signature.tuples() {
        for &a in t {
            for &b in t {
                if a != b {
                    c[a] |= 1 << b;
                }
            }
        }
    }
    c
}

/// True when no block of `pi` joins two indices of one signature tuple.
/// Partitions that fail contribute exactly zero after sparsification.
pub fn passes_sparsification(pi: &SetPartition, signature: &Signature) -> bool {
    signature.tuples().iter().all(|t| {
        t.iter()
            .enumerate()
            .all(|(p, &a)| t[p + 1..].iter().all(|&b| a == b || pi.block_of(a) != pi.block_of(b)))
    })
}

/// Notation obtained by replacing every index with the label of its block.
pub fn induced_notation(signature: &Signature, pi: &SetPartition) -> EinsumNotation {
    EinsumNotation::scalar(
        signature.tuples().iter().map(|t| t.iter().map(|&i| pi.block_of(i)).collect()).collect(),
    )
}

/// Lexicographic stream of restricted growth strings, optionally restricted
/// to partitions whose blocks avoid a conflict relation.
#[derive(Clone, Debug)]
pub struct PartitionIter {
    rgs: Vec<u8>,
    prefix_max: Vec<u8>,
    members: Vec<u32>,
    conflicts: Vec<u32>,
    state: IterState,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum IterState {
    Fresh,
    Running,
    Done,
}

impl PartitionIter {
    fn new(m: usize, conflicts: Vec<u32>) -> Self {
        let mut it = Self {
            rgs: vec![0; m],
            prefix_max: vec![0; m],
            members: vec![0; m + 1],
            conflicts,
            state: IterState::Fresh,
        };
        if m == 0 {
            it.state = IterState::Done;
        } else {
            it.members[0] = 1;
            it.fill_from(1);
        }
        it
    }

    fn place(&mut self, i: usize, b: u8) {
        self.rgs[i] = b;
        self.members[b as usize] |= 1 << i;
        self.prefix_max[i] = if i == 0 { b } else { self.prefix_max[i - 1].max(b) };
    }

    fn allowed(&self, i: usize, b: u8) -> bool {
        self.members[b as usize] & self.conflicts[i] == 0
    }

    fn fill_from(&mut self, start: usize) {
        for i in start..self.rgs.len() {
            let top = self.prefix_max[i - 1] + 1;
            let b = (0..=top).find(|&b| self.allowed(i, b)).expect("a new block is always free");
            self.place(i, b);
        }
    }

    fn advance(&mut self) -> bool {
        for i in (1..self.rgs.len()).rev() {
            let cur = self.rgs[i];
            self.members[cur as usize] &= !(1 << i);
            let top = self.prefix_max[i - 1] + 1;
            if let Some(b) = (cur + 1..=top).find(|&b| self.allowed(i, b)) {
                self.place(i, b);
                self.fill_from(i + 1);
                return true;
            }
        }
        false
    }

    /// Group the stream into vectors of at most `size` partitions.
    pub fn chunks(self, size: usize) -> Chunks {
        Chunks { inner: self, size: size.max(1) }
    }
}

impl Iterator for PartitionIter {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        match self.state {
            IterState::Done => return None,
            IterState::Fresh => self.state = IterState::Running,
            IterState::Running => {
                if !self.advance() {
                    self.state = IterState::Done;
                    return None;
                }
            }
        }
        let m = self.rgs.len();
        let blocks = self.prefix_max[m - 1] as usize + 1;
        Some(SetPartition { rgs: self.rgs.clone(), blocks })
    }
}

pub struct Chunks {
    inner: PartitionIter,
    size: usize,
}

impl Iterator for Chunks {
    type Item = Vec<SetPartition>;

    fn next(&mut self) -> Option<Vec<SetPartition>> {
        let chunk: Vec<SetPartition> = self.inner.by_ref().take(self.size).collect();
        (!chunk.is_empty()).then_some(chunk)
    }
}

fn check_order(m: usize, max_order: usize) -> Result<(), PartitionError> {
    let max = max_order.min(MAX_GROUND_SET);
    if m > max {
        return Err(PartitionError::OrderTooLarge { m, max });
    }
    Ok(())
}

/// All partitions of `{0..m-1}`; `m = 0` yields nothing.
pub fn enumerate_partitions(m: usize) -> Result<PartitionIter, PartitionError> {
    enumerate_partitions_with_limit(m, DEFAULT_MAX_ORDER)
}

pub fn enumerate_partitions_with_limit(m: usize, max_order: usize) -> Result<PartitionIter, PartitionError> {
    check_order(m, max_order)?;
    Ok(PartitionIter::new(m, vec![0; m]))
}

/// Partitions that pass the sparsification filter for `signature`, in the
/// same relative order as [`enumerate_partitions`].
pub fn enumerate_sparsified(signature: &Signature) -> Result<PartitionIter, PartitionError> {
    enumerate_sparsified_with_limit(signature, DEFAULT_MAX_ORDER)
}

pub fn enumerate_sparsified_with_limit(
    signature: &Signature,
    max_order: usize,
) -> Result<PartitionIter, PartitionError> {
    check_order(signature.arity(), max_order)?;
    Ok(PartitionIter::new(signature.arity(), conflicts(signature)))
}
