use std::sync::Arc;

use super::space::{ensure_same, AtomSpace, MeasurableSet};
use crate::{Error, Result};

/// A finite algebra of sets, represented by the partition into its atoms
/// (called blocks here to avoid confusion with the atoms of the space).
///
/// A set belongs to the algebra iff it is a union of blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    space: Arc<AtomSpace>,
    blocks: Vec<MeasurableSet>,
    block_of: Vec<usize>,
}

impl FiniteAlgebra {
    pub fn new(space: &Arc<AtomSpace>, blocks: Vec<MeasurableSet>) -> Result<Self> {
        let mut block_of = vec![usize::MAX; space.len()];
        for (b, block) in blocks.iter().enumerate() {
            ensure_same(space, block.space())?;
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {b} is empty")));
            }
            for atom in block.atoms() {
                if block_of[atom] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "atom {:?} lies in blocks {} and {b}",
                        space.label(atom),
                        block_of[atom]
                    )));
                }
                block_of[atom] = b;
            }
        }
        if let Some(atom) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidPartition(format!(
                "atom {:?} is not covered",
                space.label(atom)
            )));
        }
        Ok(Self {
            space: Arc::clone(space),
            blocks,
            block_of,
        })
    }

    pub fn from_labels<B, S>(space: &Arc<AtomSpace>, blocks: &[B]) -> Result<Self>
    where
        B: AsRef<[S]>,
        S: AsRef<str>,
    {
        let blocks = blocks
            .iter()
            .map(|block| MeasurableSet::from_labels(space, block.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, blocks)
    }

    /// The discrete partition: one block per atom, in atom order.
    pub fn atomic(space: &Arc<AtomSpace>) -> Self {
        let blocks = (0..space.len())
            .map(|atom| MeasurableSet::singleton(space, atom).expect("atom in range"))
            .collect();
        Self {
            space: Arc::clone(space),
            blocks,
            block_of: (0..space.len()).collect(),
        }
    }

    /// The trivial algebra {∅, M}.
    pub fn trivial(space: &Arc<AtomSpace>) -> Self {
        Self {
            space: Arc::clone(space),
            blocks: vec![MeasurableSet::full(space)],
            block_of: vec![0; space.len()],
        }
    }

    pub fn space(&self) -> &Arc<AtomSpace> {
        &self.space
    }

    pub fn blocks(&self) -> &[MeasurableSet] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, atom: usize) -> usize {
        self.block_of[atom]
    }

    pub fn is_atomic(&self) -> bool {
        self.blocks.len() == self.space.len()
    }

    /// True iff `set` is a union of blocks.
    pub fn is_measurable(&self, set: &MeasurableSet) -> Result<bool> {
        ensure_same(&self.space, set.space())?;
        for block in &self.blocks {
            let inside = block.is_subset(set)?;
            if !inside && !block.is_disjoint(set)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True iff every block of `self` lies inside a single block of `coarser`.
    pub fn refines(&self, coarser: &FiniteAlgebra) -> Result<bool> {
        ensure_same(&self.space, &coarser.space)?;
        Ok(self.blocks.iter().all(|block| {
            let mut atoms = block.atoms();
            let first = atoms.next().expect("blocks are nonempty");
            let target = coarser.block_of[first];
            atoms.all(|atom| coarser.block_of[atom] == target)
        }))
    }
}
