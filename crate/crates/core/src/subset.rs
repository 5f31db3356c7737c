//! Subsets of a ground set {0, .., n-1} backed by `u64` bitmasks, plus
//! duplicate-free families of subsets and their text format.
//!
//! Fixed-cardinality enumeration is in colexicographic order, which for
//! bitmask subsets coincides with ascending numeric order of the masks;
//! the iterator is Gosper's hack.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Hard capacity of the bitmask representation.
pub const MAX_GROUND_SET: usize = 64;

fn ground_mask(n: usize) -> u64 {
    debug_assert!(n <= MAX_GROUND_SET);
    if n == MAX_GROUND_SET {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_capacity(n: usize) -> Result<()> {
    if n > MAX_GROUND_SET {
        Err(Error::CapacityExceeded {
            n,
            max: MAX_GROUND_SET,
        })
    } else {
        Ok(())
    }
}

/// An immutable subset of {0, .., n-1}. Equality and ordering include
/// the ground-set size; among subsets of the same ground set the
/// derived order (bitmask value first) is colexicographic.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset {
    bits: u64,
    n: usize,
}

impl Subset {
    pub fn empty(n: usize) -> Result<Self> {
        check_capacity(n)?;
        Ok(Subset { bits: 0, n })
    }

    pub fn full(n: usize) -> Result<Self> {
        check_capacity(n)?;
        Ok(Subset {
            bits: ground_mask(n),
            n,
        })
    }

    /// Build from explicit elements; duplicates collapse (set
    /// semantics), out-of-range elements are an error.
    pub fn from_elements(n: usize, elements: &[usize]) -> Result<Self> {
        check_capacity(n)?;
        let mut bits = 0u64;
        for &e in elements {
            if e >= n {
                return Err(Error::IndexOutOfRange { index: e, n });
            }
            bits |= 1u64 << e;
        }
        Ok(Subset { bits, n })
    }

    /// Build straight from a bitmask; bits outside the ground set are
    /// an error.
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        check_capacity(n)?;
        if bits & !ground_mask(n) != 0 {
            return Err(Error::IndexOutOfRange {
                index: 63 - bits.leading_zeros() as usize,
                n,
            });
        }
        Ok(Subset { bits, n })
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    /// Size of the ground set, not of the subset.
    pub fn ground_size(self) -> usize {
        self.n
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, element: usize) -> bool {
        element < self.n && self.bits >> element & 1 == 1
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        debug_assert_eq!(self.n, other.n, "comparing subsets of different ground sets");
        self.bits & !other.bits == 0
    }

    pub fn is_strict_subset_of(self, other: Subset) -> bool {
        self.bits != other.bits && self.is_subset_of(other)
    }

    /// Elements in increasing order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(e)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.elements().collect()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} on [{}]", self.n)
    }
}

/// All l-element subsets of {0, .., n-1} in colexicographic order.
/// Yields nothing when l > n (there are C(n, l) = 0 of them).
pub fn enumerate_subsets(n: usize, l: usize) -> Result<ColexSubsets> {
    check_capacity(n)?;
    let next = if l > n {
        None
    } else if l == 0 {
        Some(0)
    } else if l == MAX_GROUND_SET {
        Some(u64::MAX)
    } else {
        Some((1u64 << l) - 1)
    };
    Ok(ColexSubsets { next, n })
}

pub struct ColexSubsets {
    next: Option<u64>,
    n: usize,
}

impl Iterator for ColexSubsets {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let bits = self.next?;
        self.next = gosper_successor(bits, self.n);
        Some(Subset { bits, n: self.n })
    }
}

/// Smallest mask above `bits` with the same popcount, if it still fits
/// in the ground set.
fn gosper_successor(bits: u64, n: usize) -> Option<u64> {
    if bits == 0 {
        return None; // the empty set is the only 0-subset
    }
    let carry = bits & bits.wrapping_neg();
    let ripple = bits.checked_add(carry)?;
    let next = (((bits ^ ripple) >> 2) / carry) | ripple;
    if next & !ground_mask(n) != 0 {
        None
    } else {
        Some(next)
    }
}

/// A duplicate-free collection of subsets over one common ground set.
/// Iteration order is insertion order.
#[derive(Clone, Debug)]
pub struct SubsetFamily {
    n: usize,
    members: Vec<Subset>,
    index: HashSet<u64>,
}

// The index is derived data; equality is ground set plus member
// sequence.
impl PartialEq for SubsetFamily {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.members == other.members
    }
}

impl Eq for SubsetFamily {}

impl SubsetFamily {
    pub fn new(n: usize) -> Result<Self> {
        check_capacity(n)?;
        Ok(SubsetFamily {
            n,
            members: Vec::new(),
            index: HashSet::new(),
        })
    }

    pub fn from_subsets<I: IntoIterator<Item = Subset>>(n: usize, subsets: I) -> Result<Self> {
        let mut family = SubsetFamily::new(n)?;
        for s in subsets {
            family.add(s)?;
        }
        Ok(family)
    }

    /// Rejects members from a different ground set and duplicates.
    pub fn add(&mut self, subset: Subset) -> Result<()> {
        if subset.ground_size() != self.n {
            return Err(Error::GroundSetMismatch {
                member: subset.to_string(),
                got: subset.ground_size(),
                expected: self.n,
            });
        }
        if !self.index.insert(subset.bits()) {
            return Err(Error::DuplicateMember {
                member: subset.to_string(),
            });
        }
        self.members.push(subset);
        Ok(())
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = &Subset> {
        self.members.iter()
    }

    pub fn contains(&self, subset: &Subset) -> bool {
        subset.ground_size() == self.n && self.index.contains(&subset.bits())
    }

    pub fn contains_bits(&self, bits: u64) -> bool {
        self.index.contains(&bits)
    }

    /// Text format: first line is the ground-set size, each later line
    /// one subset as space-separated elements; an empty line is the
    /// empty set.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(Error::Parse {
            line: 1,
            reason: "missing ground-set size header".into(),
        })?;
        let n: usize = header.trim().parse().map_err(|_| Error::Parse {
            line: 1,
            reason: format!("invalid ground-set size {header:?}"),
        })?;
        let mut family = SubsetFamily::new(n).map_err(|e| Error::Parse {
            line: 1,
            reason: e.to_string(),
        })?;
        for (i, line) in lines.enumerate() {
            let line_no = i + 2;
            let mut elements = Vec::new();
            for token in line.split_whitespace() {
                let e: usize = token.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    reason: format!("invalid element {token:?}"),
                })?;
                elements.push(e);
            }
            let subset = Subset::from_elements(n, &elements).map_err(|e| Error::Parse {
                line: line_no,
                reason: e.to_string(),
            })?;
            family.add(subset).map_err(|e| Error::Parse {
                line: line_no,
                reason: e.to_string(),
            })?;
        }
        Ok(family)
    }

    /// Inverse of [`SubsetFamily::parse`].
    pub fn to_text(&self) -> String {
        let mut out = self.n.to_string();
        out.push('\n');
        for member in &self.members {
            let line: Vec<String> = member.elements().map(|e| e.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}
