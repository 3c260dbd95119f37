//! The bundled example space files, generated deterministically.

use std::path::Path;

use indexmap::IndexMap;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rnforge::construct::RefinementChain;
use rnforge::gen;
use rnforge::measure::{AtomSpace, FiniteAlgebra, MeasurableSet, SetSequenceSpec, SignedMeasure};
use rnforge::rational::{int, ratio};

use crate::spacefile::SpaceFile;

const EIGHT_ATOM_SEED: u64 = 2024;

fn three_atom() -> SpaceFile {
    let space = AtomSpace::new(["a", "b", "c"]).expect("distinct labels");
    let measure = |w: [(i64, i64); 3]| {
        SignedMeasure::new(&space, w.iter().map(|&(p, q)| ratio(p, q)).collect()).expect("three weights")
    };
    let measures = IndexMap::from([
        ("nu".to_owned(), measure([(1, 2), (1, 4), (1, 4)])),
        ("lam".to_owned(), measure([(1, 4), (1, 2), (1, 4)])),
        ("mu".to_owned(), measure([(1, 1), (-2, 1), (3, 1)])),
    ]);
    let chain = RefinementChain::new(vec![
        FiniteAlgebra::from_labels(&space, &[vec!["a", "b"], vec!["c"]]).expect("partition"),
        FiniteAlgebra::atomic(&space),
    ])
    .expect("refining chain");
    let set = |labels: &[&str]| MeasurableSet::from_labels(&space, labels.iter().copied()).expect("known labels");
    let sequence = SetSequenceSpec::new(vec![set(&["a", "b"])], vec![set(&["c"]), set(&[])]).expect("nonempty cycle");
    SpaceFile {
        measures,
        chains: IndexMap::from([("c1".to_owned(), chain)]),
        sequences: IndexMap::from([("s1".to_owned(), sequence)]),
        space,
    }
}

fn null_atom() -> SpaceFile {
    let space = AtomSpace::new(["a", "b", "c"]).expect("distinct labels");
    let nu = SignedMeasure::new(&space, vec![ratio(1, 2), int(0), ratio(1, 2)]).expect("three weights");
    let lam = SignedMeasure::new(&space, vec![ratio(1, 3); 3]).expect("three weights");
    let set = |labels: &[&str]| MeasurableSet::from_labels(&space, labels.iter().copied()).expect("known labels");
    let sequence =
        SetSequenceSpec::new(vec![set(&["a"]), set(&["c"])], vec![set(&["b"]), set(&[])]).expect("nonempty cycle");
    SpaceFile {
        measures: IndexMap::from([("nu".to_owned(), nu), ("lam".to_owned(), lam)]),
        chains: IndexMap::from([("c1".to_owned(), RefinementChain::atomic(&space))]),
        sequences: IndexMap::from([("s1".to_owned(), sequence)]),
        space,
    }
}

fn eight_atom() -> SpaceFile {
    let mut rng = ChaCha8Rng::seed_from_u64(EIGHT_ATOM_SEED);
    let space = gen::space(8);
    let (lam, nu) = gen::absolutely_continuous_pair(&mut rng, &space);
    let mu = gen::signed_measure(&mut rng, &space);
    let chain = gen::chain(&mut rng, &space, 3);
    let sequence = gen::thin_sequence(&mut rng, &nu);
    SpaceFile {
        measures: IndexMap::from([
            ("nu".to_owned(), nu.into_signed()),
            ("lam".to_owned(), lam.into_signed()),
            ("mu".to_owned(), mu),
        ]),
        chains: IndexMap::from([("c1".to_owned(), chain)]),
        sequences: IndexMap::from([("s1".to_owned(), sequence)]),
        space,
    }
}

/// File name and contents of every bundled example.
pub fn bundled() -> Vec<(&'static str, String)> {
    vec![
        ("three_atom.json", three_atom().to_json()),
        ("eight_atom.json", eight_atom().to_json()),
        ("null_atom.json", null_atom().to_json()),
    ]
}

pub fn emit(dir: &Path) -> std::io::Result<Vec<&'static str>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, contents) in bundled() {
        std::fs::write(dir.join(name), contents)?;
        written.push(name);
    }
    Ok(written)
}
