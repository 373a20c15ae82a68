//! Signatures `s_1 >= ... >= s_r >= 0` indexing the Peter–Weyl pieces `P_s`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    parts: Vec<u32>,
    weight: u64,
}

impl Signature {
    /// Fails unless `parts` is non-increasing.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if let Some(i) = parts.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::ParameterBound(format!(
                "signature parts must be non-increasing, found {} < {} at index {}",
                parts[i],
                parts[i + 1],
                i + 2
            )));
        }
        Ok(Self::from_sorted(parts))
    }

    fn from_sorted(parts: Vec<u32>) -> Self {
        let weight = parts.iter().map(|&p| p as u64).sum();
        Signature { parts, weight }
    }

    pub fn zero(rank: usize) -> Self {
        Self::from_sorted(vec![0; rank])
    }

    /// `(l, 0, ..., 0)`.
    pub fn row(rank: usize, l: u32) -> Self {
        let mut parts = vec![0; rank];
        if rank > 0 {
            parts[0] = l;
        }
        Self::from_sorted(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `s_j` for 1-based `j`.
    pub fn part(&self, j: usize) -> u32 {
        self.parts[j - 1]
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    /// `|s|`.
    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.weight == 0
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.rank() {
            Err(Error::IndexOutOfRange { index: j, rank: self.rank() })
        } else {
            Ok(())
        }
    }

    /// `s + ε_j` when that is still a signature.
    pub fn shift_up(&self, j: usize) -> Result<Option<Signature>> {
        self.check_index(j)?;
        if j > 1 && self.parts[j - 2] == self.parts[j - 1] {
            return Ok(None);
        }
        let mut parts = self.parts.clone();
        parts[j - 1] += 1;
        Ok(Some(Signature { parts, weight: self.weight + 1 }))
    }

    /// `s - ε_j` when that is still a signature.
    pub fn shift_down(&self, j: usize) -> Result<Option<Signature>> {
        self.check_index(j)?;
        let sj = self.parts[j - 1];
        if sj == 0 || (j < self.rank() && self.parts[j] == sj) {
            return Ok(None);
        }
        let mut parts = self.parts.clone();
        parts[j - 1] -= 1;
        Ok(Some(Signature { parts, weight: self.weight - 1 }))
    }

    pub fn can_shift_up(&self, j: usize) -> bool {
        j == 1 || self.parts[j - 2] > self.parts[j - 1]
    }

    pub fn can_shift_down(&self, j: usize) -> bool {
        let sj = self.parts[j - 1];
        sj > 0 && (j == self.rank() || self.parts[j] < sj)
    }

    /// `{ j : s + ε_j is a signature }`, 1-based.
    pub fn boundary_profile(&self) -> BoundaryProfile {
        let indices: Vec<usize> = (1..=self.rank()).filter(|&j| self.can_shift_up(j)).collect();
        BoundaryProfile::from_indices(indices)
    }

    pub fn checked_rank(&self, rank: usize) -> Result<()> {
        if self.rank() != rank {
            Err(Error::RankMismatch {
                signature: self.clone(),
                found: self.rank(),
                expected: rank,
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses `[s1,s2,...,sr]` (brackets optional).
impl FromStr for Signature {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let (body, offset) = match t.strip_prefix('[') {
            Some(rest) => (
                rest.strip_suffix(']')
                    .ok_or_else(|| Error::parse(t.len(), "missing closing ']'"))?,
                1,
            ),
            None => (t, 0),
        };
        if body.trim().is_empty() {
            return Err(Error::parse(offset, "empty signature"));
        }
        let mut parts = Vec::new();
        let mut pos = offset;
        for piece in body.split(',') {
            let value = piece
                .trim()
                .parse::<u32>()
                .map_err(|_| Error::parse(pos, format!("expected a non-negative integer, got {piece:?}")))?;
            parts.push(value);
            pos += piece.len() + 1;
        }
        Signature::new(parts).map_err(|e| Error::parse(offset, e.to_string()))
    }
}

/// Which `s + ε_j` remain signatures; decides which δ formula applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryProfile {
    /// Only `j = 1` (all parts equal).
    Single,
    /// Exactly `j = 1` and `j = k`, `k >= 2`.
    Pair { k: usize },
    /// Three or more admissible indices.
    General(Vec<usize>),
}

impl BoundaryProfile {
    fn from_indices(indices: Vec<usize>) -> Self {
        match indices.as_slice() {
            [1] => BoundaryProfile::Single,
            [1, k] => BoundaryProfile::Pair { k: *k },
            _ => BoundaryProfile::General(indices),
        }
    }

    pub fn indices(&self) -> Vec<usize> {
        match self {
            BoundaryProfile::Single => vec![1],
            BoundaryProfile::Pair { k } => vec![1, *k],
            BoundaryProfile::General(v) => v.clone(),
        }
    }
}

/// Every signature of rank `r` with `|s| <= max_weight`, graded, each grade
/// in descending lexicographic order.
pub fn enumerate_signatures(rank: usize, max_weight: u64) -> SignatureIter {
    SignatureIter {
        rank,
        max_weight,
        next: Some(Signature::zero(rank)),
    }
}

/// All signatures of rank `r` and weight exactly `n`, descending lexicographic.
pub fn signatures_of_weight(rank: usize, n: u64) -> Vec<Signature> {
    let mut out = Vec::new();
    let mut current = first_of_grade(rank, n);
    while let Some(s) = current {
        current = next_in_grade(&s);
        out.push(s);
    }
    out
}

pub struct SignatureIter {
    rank: usize,
    max_weight: u64,
    next: Option<Signature>,
}

impl Iterator for SignatureIter {
    type Item = Signature;

    fn next(&mut self) -> Option<Signature> {
        let current = self.next.take()?;
        self.next = next_in_grade(&current).or_else(|| {
            let mut grade = current.weight() + 1;
            loop {
                if grade > self.max_weight {
                    return None;
                }
                if let Some(s) = first_of_grade(self.rank, grade) {
                    return Some(s);
                }
                grade += 1;
            }
        });
        Some(current)
    }
}

fn first_of_grade(rank: usize, n: u64) -> Option<Signature> {
    if rank == 0 {
        return (n == 0).then(|| Signature::zero(0));
    }
    Some(Signature::row(rank, u32::try_from(n).ok()?))
}

/// Successor in descending lexicographic order among partitions of `|s|` into at most `r` parts.
fn next_in_grade(s: &Signature) -> Option<Signature> {
    let parts = s.parts();
    let r = parts.len();
    for i in (0..r).rev() {
        if parts[i] == 0 {
            continue;
        }
        let head = parts[i] - 1;
        let tail: u64 = parts[i + 1..].iter().map(|&p| p as u64).sum::<u64>() + 1;
        let slots = (r - i - 1) as u64;
        if slots * (head as u64) < tail {
            continue;
        }
        let mut out = parts[..i].to_vec();
        out.push(head);
        let mut remaining = tail;
        for _ in 0..slots {
            let take = remaining.min(head as u64) as u32;
            out.push(take);
            remaining -= take as u64;
        }
        return Some(Signature::from_sorted(out));
    }
    None
}
