use std::collections::HashSet;
use std::sync::Arc;

use coxstrata::betti::f_closed_form;
use coxstrata::goodsub::{enumerate_star_sets, is_k_step_good, param_f, param_g, star_check};
use coxstrata::{IntersectionLattice, LatticeOptions, RootSystem};
use num_bigint::BigInt;

fn check_type(t: &str) {
    let ctype = t.parse().unwrap();
    let rs = Arc::new(RootSystem::build(&ctype).unwrap());
    let lat = IntersectionLattice::build(rs.clone(), LatticeOptions::default()).unwrap();
    let r = rs.rank();
    for k in 0..=r {
        let m = r - k;
        let mut images = HashSet::new();
        for id in lat.ids_of_rank(m) {
            let psi = lat.flats()[id].subsystem;
            assert!(is_k_step_good(&rs, psi, k));
            let p = param_f(&rs, psi).unwrap();
            assert!(star_check(&p), "{t}: F({psi:?}) = {p} fails the star check");
            assert_eq!(p.len(), m, "{t}: |F| for {p}");
            assert_eq!(param_g(&rs, &p).unwrap(), psi, "{t}: G(F) for {p}");
            images.insert(p);
        }
        let sets = enumerate_star_sets(&ctype, m).unwrap();
        assert_eq!(
            BigInt::from(sets.len()),
            f_closed_form(&ctype, k).unwrap(),
            "{t}: star sets of size {m}"
        );
        assert_eq!(sets.len() as u64, lat.whitney_second(k).unwrap());
        for p in sets {
            let g = param_g(&rs, &p).unwrap();
            assert!(is_k_step_good(&rs, g, k), "{t}: G({p}) not {k}-step good");
            assert_eq!(param_f(&rs, g).unwrap(), p, "{t}: F(G) for {p}");
            assert!(images.contains(&p));
        }
    }
}

#[test]
fn type_a_round_trips() {
    for r in 1..=5 {
        check_type(&format!("A{r}"));
    }
}

#[test]
fn type_b_round_trips() {
    for r in 2..=4 {
        check_type(&format!("B{r}"));
    }
}

#[test]
fn type_c_round_trips() {
    for r in 2..=4 {
        check_type(&format!("C{r}"));
    }
}

#[test]
fn type_d_round_trips() {
    for r in 3..=4 {
        check_type(&format!("D{r}"));
    }
}

#[test]
fn type_d5_round_trips() {
    check_type("D5");
}
