use num::{Signed, Zero};

use crate::measure::{
    affine_combine, ensure_same, hahn_decomposition, require_absolutely_continuous, FiniteAlgebra, MeasurableSet,
    Measure,
};
use crate::{Error, Rational, Result};

/// A nonnegative function constant on each block of a finite algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleDensity {
    algebra: FiniteAlgebra,
    values: Vec<Rational>,
}

impl SimpleDensity {
    pub fn new(algebra: FiniteAlgebra, values: Vec<Rational>) -> Result<Self> {
        if values.len() != algebra.block_count() {
            return Err(Error::LengthMismatch {
                expected: algebra.block_count(),
                got: values.len(),
            });
        }
        if let Some(b) = values.iter().position(|v| v.is_negative()) {
            let first = algebra.blocks()[b].atoms().next().expect("nonempty block");
            return Err(Error::NegativeWeight {
                label: algebra.space().label(first).to_owned(),
                value: values[b].clone(),
            });
        }
        Ok(Self { algebra, values })
    }

    pub fn constant(algebra: FiniteAlgebra, value: Rational) -> Result<Self> {
        let values = vec![value; algebra.block_count()];
        Self::new(algebra, values)
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    /// One value per block, in block order.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn block_value(&self, block: usize) -> &Rational {
        &self.values[block]
    }

    /// The value of the function at an atom of the space.
    pub fn value_at(&self, atom: usize) -> &Rational {
        &self.values[self.algebra.block_of(atom)]
    }

    /// Values at every atom, in atom order.
    pub fn atom_values(&self) -> Vec<Rational> {
        (0..self.algebra.space().len())
            .map(|atom| self.value_at(atom).clone())
            .collect()
    }

    pub fn max_value(&self) -> Rational {
        self.values.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    pub(crate) fn with_values(&self, values: Vec<Rational>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Self {
            algebra: self.algebra.clone(),
            values,
        }
    }
}

/// Block-wise ratio λ(A)/ν(A), with value 0 on ν-null blocks.
pub fn atom_density(lambda: &Measure, nu: &Measure, algebra: &FiniteAlgebra) -> Result<SimpleDensity> {
    ensure_same(lambda.space(), nu.space())?;
    ensure_same(lambda.space(), algebra.space())?;
    require_absolutely_continuous(lambda, nu)?;
    let values = algebra
        .blocks()
        .iter()
        .map(|block| {
            let mass = nu.measure_of(block)?;
            Ok(if mass.is_zero() {
                Rational::zero()
            } else {
                lambda.measure_of(block)? / mass
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SimpleDensity::new(algebra.clone(), values)
}

/// ∫_S f dν = Σ_{blocks B ⊆ S} f(B)·ν(B). `set` must belong to f's algebra.
pub fn integrate(f: &SimpleDensity, nu: &Measure, set: &MeasurableSet) -> Result<Rational> {
    ensure_same(f.algebra.space(), nu.space())?;
    if !f.algebra.is_measurable(set)? {
        return Err(Error::NotMeasurable);
    }
    let mut total = Rational::zero();
    for (block, value) in f.algebra.blocks().iter().zip(&f.values) {
        if block.is_subset(set)? {
            total += value * nu.measure_of(block)?;
        }
    }
    Ok(total)
}

/// {f ≥ a}
pub fn level_set(f: &SimpleDensity, a: &Rational) -> MeasurableSet {
    blocks_where(f, |v| v >= a)
}

/// {a ≤ f < b}
pub fn level_band(f: &SimpleDensity, a: &Rational, b: &Rational) -> Result<MeasurableSet> {
    if a >= b {
        return Err(Error::InvalidBand {
            lower: Box::new(a.clone()),
            upper: Box::new(b.clone()),
        });
    }
    level_set(f, a).difference(&level_set(f, b))
}

fn blocks_where(f: &SimpleDensity, pred: impl Fn(&Rational) -> bool) -> MeasurableSet {
    let space = f.algebra.space();
    let mut set = MeasurableSet::empty(space);
    for (block, value) in f.algebra.blocks().iter().zip(&f.values) {
        if pred(value) {
            set = set.union(block).expect("block of the same space");
        }
    }
    set
}

/// Comparison of the level set {f ≥ a} with the Hahn positive set of λ − aν.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelHahnCorrespondence {
    pub level_set: MeasurableSet,
    pub hahn_positive: MeasurableSet,
    /// level_set ⊖ hahn_positive
    pub difference: MeasurableSet,
    /// ν(difference)
    pub nu_mass: Rational,
    /// (λ − aν)(difference)
    pub signed_mass: Rational,
}

impl LevelHahnCorrespondence {
    pub fn is_null(&self) -> bool {
        self.nu_mass.is_zero() && self.signed_mass.is_zero()
    }
}

pub fn hahn_level_correspondence(
    lambda: &Measure,
    nu: &Measure,
    f: &SimpleDensity,
    a: &Rational,
) -> Result<LevelHahnCorrespondence> {
    ensure_same(f.algebra.space(), nu.space())?;
    let shifted = affine_combine(lambda, a, nu)?;
    let hahn_positive = hahn_decomposition(&shifted, nu)?.positive;
    let level_set = level_set(f, a);
    let difference = level_set.symmetric_difference(&hahn_positive)?;
    Ok(LevelHahnCorrespondence {
        nu_mass: nu.measure_of(&difference)?,
        signed_mass: shifted.measure_of(&difference)?,
        level_set,
        hahn_positive,
        difference,
    })
}

/// Conditional expectation of `f` onto a coarser algebra: on each coarse
/// block B the ν-weighted average of f over B (0 when ν(B) = 0).
pub fn condition_on(f: &SimpleDensity, nu: &Measure, coarser: &FiniteAlgebra) -> Result<SimpleDensity> {
    ensure_same(f.algebra.space(), nu.space())?;
    if !f.algebra.refines(coarser)? {
        return Err(Error::NotMeasurable);
    }
    let values = coarser
        .blocks()
        .iter()
        .map(|block| {
            let mass = nu.measure_of(block)?;
            if mass.is_zero() {
                return Ok(Rational::zero());
            }
            let weighted: Rational = block.atoms().map(|atom| f.value_at(atom) * nu.weight(atom)).sum();
            Ok(weighted / mass)
        })
        .collect::<Result<Vec<_>>>()?;
    SimpleDensity::new(coarser.clone(), values)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::measure::AtomSpace;
    use crate::rational::{int, ratio};

    fn abc() -> Arc<AtomSpace> {
        AtomSpace::new(["a", "b", "c"]).unwrap()
    }

    fn example() -> (Measure, Measure) {
        let space = abc();
        let lambda = Measure::new(&space, vec![ratio(1, 4), ratio(1, 2), ratio(1, 4)]).unwrap();
        let nu = Measure::new(&space, vec![ratio(1, 2), ratio(1, 4), ratio(1, 4)]).unwrap();
        (lambda, nu)
    }

    fn set(space: &Arc<AtomSpace>, labels: &[&str]) -> MeasurableSet {
        MeasurableSet::from_labels(space, labels).unwrap()
    }

    #[test]
    fn atomic_density_ratios() {
        let (lambda, nu) = example();
        let f = atom_density(&lambda, &nu, &FiniteAlgebra::atomic(lambda.space())).unwrap();
        // independent per-atom ratio
        let expected: Vec<Rational> = lambda.weights().iter().zip(nu.weights()).map(|(l, n)| l / n).collect();
        assert_eq!(f.values(), expected.as_slice());
        assert_eq!(f.values(), &[ratio(1, 2), int(2), int(1)]);
    }

    #[test]
    fn identical_measures_give_unit_density() {
        let (_, nu) = example();
        let coarse = FiniteAlgebra::from_labels(nu.space(), &[vec!["a", "c"], vec!["b"]]).unwrap();
        let f = atom_density(&nu, &nu, &coarse).unwrap();
        assert!(f.values().iter().all(|v| *v == int(1)));
    }

    #[test]
    fn null_blocks_get_zero() {
        let space = abc();
        let nu = Measure::new(&space, vec![int(1), int(0), int(1)]).unwrap();
        let lambda = Measure::new(&space, vec![int(3), int(0), int(1)]).unwrap();
        let f = atom_density(&lambda, &nu, &FiniteAlgebra::atomic(&space)).unwrap();
        assert_eq!(f.values(), &[int(3), int(0), int(1)]);
    }

    #[test]
    fn density_requires_absolute_continuity() {
        let space = abc();
        let nu = Measure::new(&space, vec![int(1), int(0), int(1)]).unwrap();
        let lambda = Measure::new(&space, vec![int(1), ratio(1, 3), int(1)]).unwrap();
        assert_eq!(
            atom_density(&lambda, &nu, &FiniteAlgebra::atomic(&space)),
            Err(Error::NotAbsolutelyContinuous { witness: "b".into() })
        );
    }

    #[test]
    fn integration() {
        let (lambda, nu) = example();
        let space = Arc::clone(lambda.space());
        let atomic = FiniteAlgebra::atomic(&space);
        let one = SimpleDensity::constant(atomic.clone(), int(1)).unwrap();
        assert_eq!(integrate(&one, &nu, &MeasurableSet::full(&space)).unwrap(), nu.total());
        assert_eq!(integrate(&one, &nu, &MeasurableSet::empty(&space)).unwrap(), int(0));

        let f = atom_density(&lambda, &nu, &atomic).unwrap();
        for mask in 0..8 {
            let s = MeasurableSet::from_mask(&space, mask);
            assert_eq!(integrate(&f, &nu, &s).unwrap(), lambda.measure_of(&s).unwrap());
        }

        let coarse = FiniteAlgebra::from_labels(&space, &[vec!["a", "b"], vec!["c"]]).unwrap();
        let g = atom_density(&lambda, &nu, &coarse).unwrap();
        assert_eq!(integrate(&g, &nu, &set(&space, &["a"])), Err(Error::NotMeasurable));
    }

    #[test]
    fn level_sets_and_bands() {
        let (lambda, nu) = example();
        let space = Arc::clone(lambda.space());
        let f = atom_density(&lambda, &nu, &FiniteAlgebra::atomic(&space)).unwrap();
        assert_eq!(level_set(&f, &int(1)), set(&space, &["b", "c"]));
        assert_eq!(level_set(&f, &int(0)), MeasurableSet::full(&space));
        assert_eq!(level_set(&f, &int(3)), MeasurableSet::empty(&space));

        assert_eq!(
            level_band(&f, &ratio(1, 2), &ratio(3, 2)).unwrap(),
            set(&space, &["a", "c"])
        );
        assert_eq!(level_band(&f, &int(0), &int(3)).unwrap(), MeasurableSet::full(&space));
        assert!(matches!(
            level_band(&f, &int(1), &int(1)),
            Err(Error::InvalidBand { .. })
        ));
    }

    #[test]
    fn correspondence_examples() {
        let (lambda, nu) = example();
        let atomic = FiniteAlgebra::atomic(lambda.space());
        let unit = atom_density(&nu, &nu, &atomic).unwrap();
        let c = hahn_level_correspondence(&nu, &nu, &unit, &int(1)).unwrap();
        assert!(c.is_null());
        assert_eq!(c.level_set, MeasurableSet::full(nu.space()));
        assert_eq!(c.hahn_positive, MeasurableSet::full(nu.space()));

        let f = atom_density(&lambda, &nu, &atomic).unwrap();
        let below = hahn_level_correspondence(&lambda, &nu, &f, &int(-1)).unwrap();
        assert!(below.difference.is_empty());
        for a in [ratio(1, 2), int(1), ratio(3, 2), int(2), int(5)] {
            assert!(hahn_level_correspondence(&lambda, &nu, &f, &a).unwrap().is_null());
        }
    }

    #[test]
    fn conditioning_averages_fine_values() {
        let (lambda, nu) = example();
        let space = Arc::clone(lambda.space());
        let fine = atom_density(&lambda, &nu, &FiniteAlgebra::atomic(&space)).unwrap();
        let coarse_alg = FiniteAlgebra::from_labels(&space, &[vec!["a", "b"], vec!["c"]]).unwrap();
        let coarse = atom_density(&lambda, &nu, &coarse_alg).unwrap();
        assert_eq!(condition_on(&fine, &nu, &coarse_alg).unwrap(), coarse);
        assert_eq!(coarse.values(), &[int(1), int(1)]);
    }
}
