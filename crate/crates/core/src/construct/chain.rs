use std::sync::Arc;

use num::Signed;

use super::density::{atom_density, SimpleDensity};
use crate::measure::{ensure_same, require_absolutely_continuous, AtomSpace, FiniteAlgebra, Measure};
use crate::{Error, Rational, Result};

/// Finite algebras over one space, each refining the previous one and ending
/// with the atomic partition. The finest level contains every set of the space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementChain {
    levels: Vec<FiniteAlgebra>,
}

impl RefinementChain {
    pub fn new(levels: Vec<FiniteAlgebra>) -> Result<Self> {
        let first = levels.first().ok_or(Error::EmptyChain)?;
        for (k, pair) in levels.windows(2).enumerate() {
            ensure_same(first.space(), pair[1].space())?;
            if !pair[1].refines(&pair[0])? {
                return Err(Error::NotRefinement { level: k + 1 });
            }
        }
        if !levels.last().expect("nonempty").is_atomic() {
            return Err(Error::ChainNotAtomic);
        }
        Ok(Self { levels })
    }

    /// The one-level chain consisting of the atomic partition.
    pub fn atomic(space: &Arc<AtomSpace>) -> Self {
        Self {
            levels: vec![FiniteAlgebra::atomic(space)],
        }
    }

    pub fn space(&self) -> &Arc<AtomSpace> {
        self.levels[0].space()
    }

    pub fn levels(&self) -> &[FiniteAlgebra] {
        &self.levels
    }

    pub fn finest(&self) -> &FiniteAlgebra {
        self.levels.last().expect("nonempty")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelReport {
    pub level: usize,
    pub density: SimpleDensity,
    /// ∫ |f_level − f_final| dν
    pub l1_to_final: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    /// The density on the finest (atomic) level.
    pub density: SimpleDensity,
    pub levels: Vec<LevelReport>,
    /// Set when ν ≡ 0; λ ≪ ν then forces λ ≡ 0 and the density is 0.
    pub degenerate_reference: bool,
}

/// Builds the atom-ratio density on every level of `chain` and returns the
/// finest one, with per-level L1 distances to it.
pub fn rn_derive(lambda: &Measure, nu: &Measure, chain: &RefinementChain) -> Result<Derivation> {
    ensure_same(lambda.space(), nu.space())?;
    ensure_same(lambda.space(), chain.space())?;
    require_absolutely_continuous(lambda, nu)?;

    let densities = chain
        .levels()
        .iter()
        .map(|algebra| atom_density(lambda, nu, algebra))
        .collect::<Result<Vec<_>>>()?;
    let finest = densities.last().expect("nonempty chain").clone();

    let levels = densities
        .into_iter()
        .enumerate()
        .map(|(level, density)| {
            let l1_to_final = (0..nu.space().len())
                .map(|atom| (density.value_at(atom) - finest.value_at(atom)).abs() * nu.weight(atom))
                .sum();
            LevelReport {
                level,
                density,
                l1_to_final,
            }
        })
        .collect();

    Ok(Derivation {
        density: finest,
        levels,
        degenerate_reference: nu.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use num::Zero;

    use super::*;
    use crate::rational::{int, ratio};

    fn example() -> (Measure, Measure, RefinementChain) {
        let space = AtomSpace::new(["a", "b", "c"]).unwrap();
        let lambda = Measure::new(&space, vec![ratio(1, 4), ratio(1, 2), ratio(1, 4)]).unwrap();
        let nu = Measure::new(&space, vec![ratio(1, 2), ratio(1, 4), ratio(1, 4)]).unwrap();
        let chain = RefinementChain::new(vec![
            FiniteAlgebra::from_labels(&space, &[vec!["a", "b"], vec!["c"]]).unwrap(),
            FiniteAlgebra::atomic(&space),
        ])
        .unwrap();
        (lambda, nu, chain)
    }

    #[test]
    fn chain_validation() {
        let space = AtomSpace::new(["a", "b", "c"]).unwrap();
        let ab_c = FiniteAlgebra::from_labels(&space, &[vec!["a", "b"], vec!["c"]]).unwrap();
        let a_bc = FiniteAlgebra::from_labels(&space, &[vec!["a"], vec!["b", "c"]]).unwrap();
        assert_eq!(RefinementChain::new(vec![]), Err(Error::EmptyChain));
        assert_eq!(RefinementChain::new(vec![ab_c.clone()]), Err(Error::ChainNotAtomic));
        assert_eq!(
            RefinementChain::new(vec![ab_c.clone(), a_bc, FiniteAlgebra::atomic(&space)]),
            Err(Error::NotRefinement { level: 1 })
        );
        assert!(RefinementChain::new(vec![
            FiniteAlgebra::trivial(&space),
            ab_c,
            FiniteAlgebra::atomic(&space)
        ])
        .is_ok());
    }

    #[test]
    fn worked_example() {
        let (lambda, nu, chain) = example();
        let d = rn_derive(&lambda, &nu, &chain).unwrap();
        assert_eq!(d.levels[0].density.values(), &[int(1), int(1)]);
        assert_eq!(d.density.values(), &[ratio(1, 2), int(2), int(1)]);
        assert_eq!(d.levels[0].l1_to_final, ratio(1, 2));
        assert_eq!(d.levels[1].l1_to_final, int(0));
        assert!(!d.degenerate_reference);
    }

    #[test]
    fn identical_measures() {
        let (_, nu, chain) = example();
        let d = rn_derive(&nu, &nu, &chain).unwrap();
        assert!(d.density.values().iter().all(|v| *v == int(1)));
        assert!(d.levels.iter().all(|l| l.l1_to_final.is_zero()));
    }

    #[test]
    fn degenerate_reference_measure() {
        let (_, _, chain) = example();
        let zero = Measure::zero(chain.space());
        let d = rn_derive(&zero, &zero, &chain).unwrap();
        assert!(d.degenerate_reference);
        assert!(d.density.values().iter().all(Zero::is_zero));
    }

    #[test]
    fn rejects_singular_numerator() {
        let (_, nu, chain) = example();
        let zero_b = Measure::new(nu.space(), vec![int(1), int(0), int(1)]).unwrap();
        assert!(matches!(
            rn_derive(&nu, &zero_b, &chain),
            Err(Error::NotAbsolutelyContinuous { .. })
        ));
    }
}
