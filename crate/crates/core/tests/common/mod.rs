//! Generators shared by the integration tests.

#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use treeheight::algebra::{FieldElement, FunctionField, RatFunc, UniPoly};
use treeheight::FamilySpec;

pub const FAMILIES: [&[i64]; 5] = [&[2], &[1, 2], &[3], &[1, 3], &[2, 3]];

pub fn family(i: usize) -> FamilySpec {
    FamilySpec::new(FAMILIES[i].iter().copied()).unwrap()
}

/// Numerator and denominator coefficients of one rational function.
pub type RatSpec = (Vec<i64>, Vec<i64>);

fn rat_spec(with_pole: bool) -> impl Strategy<Value = RatSpec> {
    let num = prop::collection::vec(-4i64..=4, 0..=3);
    let den = if with_pole {
        prop_oneof![
            Just(vec![1i64]),
            (-3i64..=3).prop_map(|c| vec![1, c]),
            (1i64..=3).prop_map(|c| vec![0, c]),
            (1i64..=2, -2i64..=2).prop_map(|(a, b)| vec![a, b, 1]),
        ]
        .boxed()
    } else {
        prop_oneof![Just(vec![1i64]), (-3i64..=3).prop_map(|c| vec![1, c]), (1i64..=2).prop_map(|a| vec![a, 0, 1])]
            .boxed()
    };
    (num, den)
}

/// Coefficients for an element of rank up to 3.
pub fn element_spec(with_pole: bool) -> impl Strategy<Value = Vec<RatSpec>> {
    prop::collection::vec(rat_spec(with_pole), 3)
}

pub fn build(field: &Arc<FunctionField>, spec: &[RatSpec]) -> FieldElement {
    let coeffs = spec
        .iter()
        .take(field.rank())
        .map(|(n, d)| RatFunc::new(UniPoly::from_ints(n), UniPoly::from_ints(d)).unwrap())
        .collect();
    field.reduce(coeffs)
}

/// A family index with two elements of its field.
pub fn element_pair(with_pole: bool) -> impl Strategy<Value = (usize, Vec<RatSpec>, Vec<RatSpec>)> {
    (0..FAMILIES.len(), element_spec(with_pole), element_spec(with_pole))
}
