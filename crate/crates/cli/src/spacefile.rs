//! JSON description of a finite measure space: atoms, named measures,
//! refinement chains and eventually periodic set sequences.
//!
//! ```json
//! {
//!   "atoms": ["a", "b", "c"],
//!   "measures": { "nu": { "a": "1/2", "b": "1/4", "c": "1/4" } },
//!   "chains": { "c1": [ [["a", "b"], ["c"]], [["a"], ["b"], ["c"]] ] },
//!   "sequences": { "s": { "prefix": [["a"]], "cycle": [["b"], []] } }
//! }
//! ```
//!
//! Weights are exact rationals written as "p/q" or integer strings. Atoms
//! missing from a measure get weight 0.

use std::sync::Arc;

use indexmap::IndexMap;
use rnforge::construct::RefinementChain;
use rnforge::measure::{AtomSpace, FiniteAlgebra, MeasurableSet, SetSequenceSpec, SignedMeasure};
use rnforge::rational::{fmt_ratio, parse_ratio};
use rnforge::Rational;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct SpaceFileError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpaceFile {
    atoms: Vec<String>,
    #[serde(default)]
    measures: IndexMap<String, IndexMap<String, String>>,
    #[serde(default)]
    chains: IndexMap<String, Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    sequences: IndexMap<String, RawSequence>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSequence {
    #[serde(default)]
    prefix: Vec<Vec<String>>,
    cycle: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceFile {
    pub space: Arc<AtomSpace>,
    pub measures: IndexMap<String, SignedMeasure>,
    pub chains: IndexMap<String, RefinementChain>,
    pub sequences: IndexMap<String, SetSequenceSpec>,
}

/// Finds the 1-based line of the first occurrence of `needle` at or after
/// line `from`, falling back to `from`.
struct Locator<'a> {
    lines: Vec<&'a str>,
}

impl<'a> Locator<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            lines: text.lines().collect(),
        }
    }

    fn find(&self, needle: &str, from: usize) -> usize {
        let quoted = format!("\"{needle}\"");
        self.lines
            .iter()
            .enumerate()
            .skip(from.saturating_sub(1))
            .find(|(_, l)| l.contains(&quoted))
            .map_or(from.max(1), |(i, _)| i + 1)
    }

    fn error(&self, needle: &str, from: usize, message: impl Into<String>) -> SpaceFileError {
        SpaceFileError {
            line: self.find(needle, from),
            message: message.into(),
        }
    }
}

fn set_from_labels(space: &Arc<AtomSpace>, labels: &[String]) -> rnforge::Result<MeasurableSet> {
    MeasurableSet::from_labels(space, labels.iter().map(String::as_str))
}

impl SpaceFile {
    pub fn parse(text: &str) -> Result<Self, SpaceFileError> {
        let raw: RawSpaceFile = serde_json::from_str(text).map_err(|e| SpaceFileError {
            line: e.line().max(1),
            message: e.to_string(),
        })?;
        let loc = Locator::new(text);
        let atoms_line = loc.find("atoms", 1);

        let space = AtomSpace::new(raw.atoms.iter().cloned()).map_err(|e| {
            let needle = match &e {
                rnforge::Error::DuplicateLabel(l) => l.clone(),
                _ => "atoms".to_owned(),
            };
            loc.error(&needle, atoms_line, e.to_string())
        })?;

        let measures_line = loc.find("measures", 1);
        let mut measures = IndexMap::new();
        for (name, weights) in &raw.measures {
            let at = loc.find(name, measures_line);
            let mut values = vec![Rational::from_integer(0.into()); space.len()];
            for (label, text_value) in weights {
                let label_line = loc.find(label, at);
                let atom = space
                    .index_of(label)
                    .map_err(|e| loc.error(label, at, format!("measure \"{name}\": {e}")))?;
                values[atom] = parse_ratio(text_value).map_err(|e| SpaceFileError {
                    line: label_line,
                    message: format!("measure \"{name}\": {e}"),
                })?;
            }
            let measure = SignedMeasure::new(&space, values).expect("one weight per atom");
            measures.insert(name.clone(), measure);
        }

        let chains_line = loc.find("chains", 1);
        let mut chains = IndexMap::new();
        for (name, levels) in &raw.chains {
            let at = loc.find(name, chains_line);
            let fail = |e: rnforge::Error| loc.error(name, at, format!("chain \"{name}\": {e}"));
            let algebras = levels
                .iter()
                .map(|level| FiniteAlgebra::from_labels(&space, level))
                .collect::<rnforge::Result<Vec<_>>>()
                .map_err(fail)?;
            chains.insert(name.clone(), RefinementChain::new(algebras).map_err(fail)?);
        }

        let sequences_line = loc.find("sequences", 1);
        let mut sequences = IndexMap::new();
        for (name, seq) in &raw.sequences {
            let at = loc.find(name, sequences_line);
            let fail = |e: rnforge::Error| loc.error(name, at, format!("sequence \"{name}\": {e}"));
            let to_sets = |sets: &[Vec<String>]| {
                sets.iter()
                    .map(|s| set_from_labels(&space, s))
                    .collect::<rnforge::Result<Vec<_>>>()
            };
            let spec = SetSequenceSpec::new(to_sets(&seq.prefix).map_err(fail)?, to_sets(&seq.cycle).map_err(fail)?)
                .map_err(fail)?;
            sequences.insert(name.clone(), spec);
        }

        Ok(Self {
            space,
            measures,
            chains,
            sequences,
        })
    }

    /// Canonical JSON form: every atom listed in every measure, blocks as
    /// label lists in atom order.
    pub fn to_json(&self) -> String {
        let labels = |set: &MeasurableSet| set.atoms().map(|a| self.space.label(a).to_owned()).collect::<Vec<_>>();
        let raw = RawSpaceFile {
            atoms: self.space.labels().to_vec(),
            measures: self
                .measures
                .iter()
                .map(|(name, m)| {
                    let weights = (0..self.space.len())
                        .map(|a| (self.space.label(a).to_owned(), fmt_ratio(m.weight(a))))
                        .collect();
                    (name.clone(), weights)
                })
                .collect(),
            chains: self
                .chains
                .iter()
                .map(|(name, chain)| {
                    let levels = chain
                        .levels()
                        .iter()
                        .map(|alg| alg.blocks().iter().map(labels).collect())
                        .collect();
                    (name.clone(), levels)
                })
                .collect(),
            sequences: self
                .sequences
                .iter()
                .map(|(name, spec)| {
                    let seq = RawSequence {
                        prefix: spec.prefix().iter().map(labels).collect(),
                        cycle: spec.cycle().iter().map(labels).collect(),
                    };
                    (name.clone(), seq)
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&raw).expect("plain data serializes");
        out.push('\n');
        out
    }
}
