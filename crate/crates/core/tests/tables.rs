// SPDX-License-Identifier: Apache-2.0

mod common;

use infoengine::corpus::{random_function, rng_from_seed};
use infoengine::pla::{parse_pla, write_pla, PlaError};
use infoengine::{AssignmentPrefix, TruthTable};
use proptest::prelude::*;

fn prefix(pairs: &[(&str, bool)]) -> AssignmentPrefix {
    AssignmentPrefix::new(pairs.iter().map(|&(n, v)| (n.to_string(), v)).collect()).unwrap()
}

proptest! {
    #[test]
    fn cofactors_commute(n in 2usize..=7, seed in any::<u64>(), a in 0usize..7, b in 0usize..7, va: bool, vb: bool) {
        let f = random_function(n, &mut rng_from_seed(seed));
        let (a, b) = (a % n, b % n);
        prop_assume!(a != b);
        let (na, nb) = (f.input_names()[a].clone(), f.input_names()[b].clone());
        let ab = f.cofactor(&prefix(&[(&na, va)])).unwrap().cofactor(&prefix(&[(&nb, vb)])).unwrap();
        let ba = f.cofactor(&prefix(&[(&nb, vb)])).unwrap().cofactor(&prefix(&[(&na, va)])).unwrap();
        let both = f.cofactor(&prefix(&[(&na, va), (&nb, vb)])).unwrap();
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(&ab, &both);
    }

    #[test]
    fn shannon_expansion_reconstructs(n in 1usize..=8, seed in any::<u64>(), v in 0usize..8) {
        let f = random_function(n, &mut rng_from_seed(seed));
        let v = v % n;
        let name = f.input_names()[v].clone();
        let lo = f.cofactor(&prefix(&[(&name, false)])).unwrap();
        let hi = f.cofactor(&prefix(&[(&name, true)])).unwrap();
        for row in 0..f.num_rows() {
            let x = common::bit(row, v, n);
            // Row of the cofactor: drop bit v from the index.
            let low_bits = row & ((1 << (n - 1 - v)) - 1);
            let high_bits = row >> (n - v) << (n - 1 - v);
            let sub = high_bits | low_bits;
            let expected = if x { hi.column(0)[sub] } else { lo.column(0)[sub] };
            prop_assert_eq!(f.column(0)[row], expected);
        }
    }

    #[test]
    fn pla_round_trip(n in 1usize..=8, seed in any::<u64>()) {
        let f = random_function(n, &mut rng_from_seed(seed));
        let back = parse_pla(&write_pla(&f)).unwrap();
        prop_assert_eq!(back, f);
    }
}

#[test]
fn pla_dont_cares_and_defaults() {
    let f = parse_pla(".i 3\n.o 1\n1-1 1\n.e\n").unwrap();
    let on: Vec<usize> = (0..8).filter(|&r| f.column(0)[r]).collect();
    assert_eq!(on, [5, 7]);
    assert_eq!(f.input_names(), ["x1", "x2", "x3"]);
}

#[test]
fn pla_errors() {
    assert!(matches!(
        parse_pla(".i 2\n.o 1\n1- 1\n11 0\n.e\n"),
        Err(PlaError::Conflict { .. })
    ));
    assert!(matches!(
        parse_pla(".i 2\n.o 1\n1 1\n.e\n"),
        Err(PlaError::Syntax { .. })
    ));
    assert!(matches!(
        parse_pla(".i 2\n.o 1\n11 -\n.e\n"),
        Err(PlaError::Syntax { .. })
    ));
    assert!(parse_pla(".o 1\n1 1\n.e\n").is_err());
}

#[test]
fn constant_and_support() {
    let f = TruthTable::from_fn(3, |x| x[0] && x[2]).unwrap();
    assert_eq!(f.support(), [0, 2]);
    assert!(f.is_constant().is_none());
    let zero = f.cofactor(&prefix(&[("x1", false)])).unwrap();
    assert_eq!(zero.is_constant(), Some(vec![false]));
}
