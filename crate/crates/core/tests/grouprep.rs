use std::collections::HashSet;

use sl213::grouprep::{
    build_generators, build_word_elements, generate_group, lift_word_2x2, verify_lift, verify_relations,
    verify_word_elements, GroupError, H_DISPLAYED,
};
use sl213::{CycloElem, GMatrix};

type M2 = [[i64; 2]; 2];

fn mul13(a: M2, b: M2) -> M2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]).rem_euclid(13);
        }
    }
    c
}

/// Closure order in SL(2, Z/13) by brute force.
fn order_mod13(gens: &[M2]) -> usize {
    let mut seen = HashSet::new();
    let mut stack = vec![[[1, 0], [0, 1]]];
    seen.insert(stack[0]);
    while let Some(g) = stack.pop() {
        for &s in gens {
            let h = mul13(g, s);
            if seen.insert(h) {
                stack.push(h);
            }
        }
    }
    seen.len()
}

#[test]
fn group_order_matches_sl2_13() {
    let g = build_generators();
    let table = generate_group(&[g.s.clone(), g.t.clone()], 10_000).unwrap();
    // Oracle: |SL(2, p)| = p (p^2 - 1).
    assert_eq!(table.order(), 13 * (13 * 13 - 1));
    assert_eq!(order_mod13(&[[[0, 12], [1, 0]], [[1, 1], [0, 1]]]), table.order());
    assert!(table.contains(&g.s.pow(2)));
}

#[test]
fn relations_report_exact_scalars() {
    let g = build_generators();
    let rs = verify_relations(&g);
    let by_name = |n: &str| rs.iter().find(|r| r.name == n).unwrap_or_else(|| panic!("{n}"));
    assert!(by_name("S^2 = -I").passed());
    assert!(by_name("T^13 = I").passed());
    let st = g.s.mul(&g.t).pow(3);
    assert_eq!(st, GMatrix::identity().neg());
    assert!(!by_name("(ST)^3 = I").passed());
}

#[test]
fn word_h_is_minus_displayed_signed_permutation() {
    let g = build_generators();
    let w = build_word_elements(&g);
    assert_eq!(w.h, GMatrix::from_int_rows(H_DISPLAYED).neg());
    let h12 = w.h.pow(12);
    assert_eq!(h12, GMatrix::identity());
    assert_eq!(w.h.pow(6), GMatrix::identity().neg());
    let inv = w.h.pow(11);
    assert_eq!(inv.mul(&g.t).mul(&w.h), g.t.pow(4));
}

#[test]
fn word_checks_report_each_relation() {
    let g = build_generators();
    let rs = verify_word_elements(&g, &build_word_elements(&g));
    assert_eq!(rs.len(), 4);
    let conj = rs.iter().find(|r| r.name == "H^-1 T H = -T^4").unwrap();
    assert!(!conj.passed());
    assert!(conj.witness.contains("+T^4"));
}

#[test]
fn h_and_t_generate_156_elements() {
    let g = build_generators();
    let h = build_word_elements(&g).h;
    let table = generate_group(&[h, g.t.clone()], 10_000).unwrap();
    // Oracle: the same word in SL(2, Z/13) with the 2x2 lift reduced mod 13.
    let lift = lift_word_2x2();
    let red = |x: &num_bigint::BigInt| i64::try_from(x % 13).unwrap().rem_euclid(13);
    let h2 = [[red(&lift.0[0][0]), red(&lift.0[0][1])], [red(&lift.0[1][0]), red(&lift.0[1][1])]];
    assert_eq!(order_mod13(&[h2, [[1, 1], [0, 1]]]), 156);
    assert_eq!(table.order(), 156);
}

#[test]
fn lift_matches_display() {
    let lift = lift_word_2x2();
    assert!(verify_lift(&lift).iter().all(|r| r.passed()));
    assert_eq!(lift.0[0][0], 4_428_249.into());
}

#[test]
fn closure_cap_is_enforced() {
    let g = build_generators();
    let err = generate_group(&[g.s, g.t], 100).unwrap_err();
    assert!(matches!(err, GroupError::CapExceeded { cap: 100 }));
}

#[test]
fn gtbl_dump_has_header_and_rows() {
    let g = build_generators();
    let table = generate_group(std::slice::from_ref(&g.t), 100).unwrap();
    let dump = table.dump();
    assert!(dump.starts_with("GTBL v1 13\n"));
    assert_eq!(dump.lines().count(), 14);
    let row = dump.lines().nth(2).unwrap();
    assert_eq!(row.split('\t').count(), 37);
    assert_eq!(table.index_of(&GMatrix::diagonal(&std::array::from_fn(|_| CycloElem::one()))), Some(0));
}
