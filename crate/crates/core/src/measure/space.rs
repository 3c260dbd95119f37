use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::{Error, Result};

/// A finite carrier set of labeled atoms.
///
/// The label order fixed at construction gives every atom its canonical bit
/// position; it never changes afterwards.
#[derive(Clone)]
pub struct AtomSpace {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl AtomSpace {
    pub fn new<I, S>(labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Arc::new(Self { labels, index }))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, atom: usize) -> &str {
        &self.labels[atom]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }
}

impl PartialEq for AtomSpace {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for AtomSpace {}

impl fmt::Debug for AtomSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("AtomSpace").field(&self.labels).finish()
    }
}

pub(crate) fn same_space(a: &Arc<AtomSpace>, b: &Arc<AtomSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn ensure_same(a: &Arc<AtomSpace>, b: &Arc<AtomSpace>) -> Result<()> {
    if same_space(a, b) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// A subset of an [`AtomSpace`], stored as a bitset over atom indices.
#[derive(Clone, PartialEq, Eq)]
pub struct MeasurableSet {
    space: Arc<AtomSpace>,
    members: FixedBitSet,
}

impl MeasurableSet {
    pub fn empty(space: &Arc<AtomSpace>) -> Self {
        Self {
            space: Arc::clone(space),
            members: FixedBitSet::with_capacity(space.len()),
        }
    }

    pub fn full(space: &Arc<AtomSpace>) -> Self {
        let mut members = FixedBitSet::with_capacity(space.len());
        members.insert_range(..);
        Self {
            space: Arc::clone(space),
            members,
        }
    }

    pub fn singleton(space: &Arc<AtomSpace>, atom: usize) -> Result<Self> {
        Self::from_indices(space, [atom])
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(space: &Arc<AtomSpace>, atoms: I) -> Result<Self> {
        let mut set = Self::empty(space);
        for atom in atoms {
            if atom >= space.len() {
                return Err(Error::IndexOutOfRange {
                    index: atom,
                    len: space.len(),
                });
            }
            set.members.insert(atom);
        }
        Ok(set)
    }

    pub fn from_labels<I, S>(space: &Arc<AtomSpace>, labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = Self::empty(space);
        for label in labels {
            set.members.insert(space.index_of(label.as_ref())?);
        }
        Ok(set)
    }

    /// Bit `i` of `mask` selects atom `i`. Only valid for spaces of at most 64 atoms.
    pub fn from_mask(space: &Arc<AtomSpace>, mask: u64) -> Self {
        debug_assert!(space.len() <= 64);
        let mut set = Self::empty(space);
        for atom in 0..space.len() {
            if mask >> atom & 1 == 1 {
                set.members.insert(atom);
            }
        }
        set
    }

    pub fn to_mask(&self) -> u64 {
        debug_assert!(self.space.len() <= 64);
        self.members.ones().fold(0u64, |mask, atom| mask | 1 << atom)
    }

    pub fn space(&self) -> &Arc<AtomSpace> {
        &self.space
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.members.contains(atom)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    /// Member atom indices in increasing order.
    pub fn atoms(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    /// Member labels sorted lexicographically, the stable form used in reports.
    pub fn sorted_labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = self.atoms().map(|atom| self.space.label(atom).to_owned()).collect();
        labels.sort();
        labels
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.union_with(b))
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.intersect_with(b))
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.difference_with(b))
    }

    /// (A − B) ∪ (B − A)
    pub fn symmetric_difference(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.symmetric_difference_with(b))
    }

    pub fn complement(&self) -> Self {
        let mut members = self.members.clone();
        members.toggle_range(..);
        Self {
            space: Arc::clone(&self.space),
            members,
        }
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        ensure_same(&self.space, &other.space)?;
        Ok(self.members.is_subset(&other.members))
    }

    pub fn is_disjoint(&self, other: &Self) -> Result<bool> {
        ensure_same(&self.space, &other.space)?;
        Ok(self.members.is_disjoint(&other.members))
    }

    pub(crate) fn insert(&mut self, atom: usize) {
        self.members.insert(atom);
    }

    fn combine(&self, other: &Self, op: impl FnOnce(&mut FixedBitSet, &FixedBitSet)) -> Result<Self> {
        ensure_same(&self.space, &other.space)?;
        let mut members = self.members.clone();
        op(&mut members, &other.members);
        Ok(Self {
            space: Arc::clone(&self.space),
            members,
        })
    }
}

impl fmt::Debug for MeasurableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.atoms().map(|atom| self.space.label(atom)))
            .finish()
    }
}
