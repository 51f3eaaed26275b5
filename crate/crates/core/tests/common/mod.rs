//! Shared fixture data for integration tests: a three-generator instance in
//! dimension four with fully known logs, filtration, and decision outcomes.

use unitri::exactq::{parse_rat, QMatrix, Rat};
use unitri::invset::GeneratorSet;
use unitri::utgroup::{LieElement, UTMatrix};

pub fn qmatrix(rows: &[&[&str]]) -> QMatrix {
    QMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|s| parse_rat(s).unwrap()).collect::<Vec<Rat>>())
            .collect(),
    )
}

pub fn ut(rows: &[&[&str]]) -> UTMatrix {
    UTMatrix::new(qmatrix(rows)).unwrap()
}

pub fn lie(rows: &[&[&str]]) -> LieElement {
    LieElement::new(qmatrix(rows)).unwrap()
}

/// The three demo generators in dimension four.
pub fn demo_gens() -> Vec<UTMatrix> {
    vec![
        ut(&[
            &["1", "2", "-1", "1"],
            &["0", "1", "2", "1"],
            &["0", "0", "1", "2"],
            &["0", "0", "0", "1"],
        ]),
        ut(&[
            &["1", "-1", "-1", "2"],
            &["0", "1", "-1", "-1"],
            &["0", "0", "1", "0"],
            &["0", "0", "0", "1"],
        ]),
        ut(&[
            &["1", "0", "3", "-1"],
            &["0", "1", "0", "1"],
            &["0", "0", "1", "-1"],
            &["0", "0", "0", "1"],
        ]),
    ]
}

pub fn demo_set() -> GeneratorSet {
    GeneratorSet::new(demo_gens()).unwrap()
}

/// The exact logarithms of the three demo generators.
pub fn demo_logs_expected() -> Vec<LieElement> {
    vec![
        lie(&[
            &["0", "2", "-3", "11/3"],
            &["0", "0", "2", "-1"],
            &["0", "0", "0", "2"],
            &["0", "0", "0", "0"],
        ]),
        lie(&[
            &["0", "-1", "-3/2", "3/2"],
            &["0", "0", "-1", "-1"],
            &["0", "0", "0", "0"],
            &["0", "0", "0", "0"],
        ]),
        lie(&[
            &["0", "0", "3", "1/2"],
            &["0", "0", "0", "1"],
            &["0", "0", "0", "-1"],
            &["0", "0", "0", "0"],
        ]),
    ]
}

/// The derived elements built from tenth/twentieth powers of the generators
/// in three different orders, with their exact logs.
pub fn derived_words(gens: &[UTMatrix]) -> Vec<UTMatrix> {
    let (a1, a2, a3) = (&gens[0], &gens[1], &gens[2]);
    vec![
        a1.pow(10).mul(&a2.pow(20)).mul(&a3.pow(20)),
        a2.pow(20).mul(&a3.pow(20)).mul(&a1.pow(10)),
        a2.pow(20).mul(&a1.pow(10)).mul(&a3.pow(20)),
    ]
}

pub fn derived_logs_expected() -> Vec<LieElement> {
    vec![
        lie(&[
            &["0", "0", "0", "1410"],
            &["0", "0", "0", "190"],
            &["0", "0", "0", "0"],
            &["0", "0", "0", "0"],
        ]),
        lie(&[
            &["0", "0", "0", "-2390"],
            &["0", "0", "0", "190"],
            &["0", "0", "0", "0"],
            &["0", "0", "0", "0"],
        ]),
        lie(&[
            &["0", "0", "0", "1410"],
            &["0", "0", "0", "-210"],
            &["0", "0", "0", "0"],
            &["0", "0", "0", "0"],
        ]),
    ]
}
