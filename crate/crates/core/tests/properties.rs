use std::collections::{BTreeSet, HashSet};
use std::sync::{Arc, OnceLock};

use coxstrata::betti::f_closed_form;
use coxstrata::cohomology::{cup, GradedClass};
use coxstrata::strata::{
    generate_relations, h_translate, is_member, limit_point_within, stratum_of, stratum_point,
    ExtendedPoint, Functional, Value,
};
use coxstrata::weyl::{act_word_on_set, orbit_of_subsystem, weyl_act_point};
use coxstrata::{CartanType, Family, IntersectionLattice, LatticeOptions, RootSet, RootSystem};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

const TYPES: &[&str] = &[
    "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "G2", "F4",
];

fn lattices() -> &'static Vec<IntersectionLattice> {
    static CELL: OnceLock<Vec<IntersectionLattice>> = OnceLock::new();
    CELL.get_or_init(|| {
        TYPES
            .iter()
            .map(|t| {
                let rs = Arc::new(RootSystem::build(&t.parse().unwrap()).unwrap());
                IntersectionLattice::build(rs, LatticeOptions::default()).unwrap()
            })
            .collect()
    })
}

fn subset(rs: &RootSystem, bits: u128) -> RootSet {
    RootSet::from_bits(bits).intersection(rs.positives())
}

fn word(rs: &RootSystem, raw: &[usize]) -> Vec<usize> {
    raw.iter().map(|x| x % rs.rank() + 1).collect()
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// A point of the stratum of flat `x`, built from the given raw values.
fn point_on(
    lat: &IntersectionLattice,
    x: usize,
    raw: &[(i64, i64)],
) -> (ExtendedPoint, Functional) {
    let rs = lat.root_system();
    let target = lat.flats()[x].subsystem;
    let basis: Vec<usize> = {
        let mut b: Vec<usize> = Vec::new();
        for i in target.iter() {
            let mut c = b.clone();
            c.push(i);
            if rs.subsystem_rank(rs.root_set(c.iter().copied()).unwrap()) == c.len() {
                b = c;
            }
        }
        b
    };
    let values = basis
        .iter()
        .zip(raw.iter().cycle())
        .map(|(_, &(n, d))| rational(n, d))
        .collect();
    let w = Functional::new(rs, &basis, values).unwrap();
    (stratum_point(rs, target, &w).unwrap(), w)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closure_is_idempotent_monotone_and_closed(t in 0..TYPES.len(), a in any::<u128>(), b in any::<u128>()) {
        let rs = lattices()[t].root_system();
        let s = subset(rs, a);
        let u = s.union(subset(rs, b));
        let cs = rs.closure(s);
        prop_assert_eq!(rs.closure(cs), cs);
        prop_assert!(s.is_subset(cs));
        prop_assert!(cs.is_subset(rs.closure(u)));
        prop_assert!(rs.is_closed(cs));
        prop_assert_eq!(rs.subsystem_rank(cs), rs.subsystem_rank(s));
    }

    #[test]
    fn reflections_permute_roots(t in 0..TYPES.len(), m in any::<usize>()) {
        let rs = lattices()[t].root_system();
        let mirror = m % rs.num_roots();
        let images: HashSet<usize> = (0..rs.num_roots()).map(|i| rs.reflect(mirror, i).unwrap()).collect();
        prop_assert_eq!(images.len(), rs.num_roots());
        prop_assert_eq!(rs.reflect(mirror, mirror).unwrap(), rs.neg(mirror));
    }

    #[test]
    fn join_is_least_upper_bound(t in 0..TYPES.len(), x in any::<usize>(), y in any::<usize>(), z in any::<usize>()) {
        let lat = &lattices()[t];
        let n = lat.len();
        let (x, y, z) = (x % n, y % n, z % n);
        let j = lat.join(x, y).unwrap();
        prop_assert!(lat.leq(x, j).unwrap() && lat.leq(y, j).unwrap());
        if lat.leq(x, z).unwrap() && lat.leq(y, z).unwrap() {
            prop_assert!(lat.leq(j, z).unwrap());
        }
        prop_assert!(lat.flats()[j].rank <= lat.flats()[x].rank + lat.flats()[y].rank);
    }

    #[test]
    fn weyl_action_commutes_with_join(t in 0..TYPES.len(), x in any::<usize>(), y in any::<usize>(), raw in prop::collection::vec(any::<usize>(), 0..10)) {
        let lat = &lattices()[t];
        let rs = lat.root_system();
        let n = lat.len();
        let (x, y) = (x % n, y % n);
        let w = word(rs, &raw);
        let act = |id: usize| lat.id_of(act_word_on_set(rs, &w, lat.flats()[id].subsystem).unwrap()).unwrap();
        let (wx, wy) = (act(x), act(y));
        prop_assert_eq!(act(lat.join(x, y).unwrap()), lat.join(wx, wy).unwrap());
        prop_assert_eq!(lat.leq(x, y).unwrap(), lat.leq(wx, wy).unwrap());
        prop_assert_eq!(lat.flats()[wx].rank, lat.flats()[x].rank);
    }

    #[test]
    fn products_respect_grading(t in 0..TYPES.len(), xs in prop::collection::vec(any::<usize>(), 1..5)) {
        let lat = &lattices()[t];
        let mut acc = GradedClass::unit(lat);
        let mut total = 0;
        for x in xs {
            let x = x % lat.len();
            total += lat.flats()[x].rank;
            acc = cup(lat, &acc, &GradedClass::basis(lat, x).unwrap()).unwrap();
            if !acc.is_zero() {
                prop_assert_eq!(acc.degree(lat), Some(2 * total));
            }
        }
        if total > lat.rank() {
            prop_assert!(acc.is_zero());
        }
    }

    #[test]
    fn membership_is_stable_under_w_and_h(
        t in 0..TYPES.len(),
        x in any::<usize>(),
        raw in prop::collection::vec((-50i64..50, 1i64..6), 1..9),
        shift in prop::collection::vec((-50i64..50, 1i64..6), 4),
        letters in prop::collection::vec(any::<usize>(), 0..10),
    ) {
        let lat = &lattices()[t];
        let rs = lat.root_system();
        let x = x % lat.len();
        let (p, _) = point_on(lat, x, &raw);
        prop_assert_eq!(stratum_of(lat, &p).unwrap(), x);
        let y = Functional::from_simple_values(rs, (0..rs.rank()).map(|i| rational(shift[i % 4].0, shift[i % 4].1)).collect()).unwrap();
        let moved = h_translate(rs, &p, &y).unwrap();
        prop_assert_eq!(stratum_of(lat, &moved).unwrap(), x);
        let w = word(rs, &letters);
        let wp = weyl_act_point(rs, &w, &moved).unwrap();
        prop_assert!(is_member(rs, &wp).unwrap());
        let expected = act_word_on_set(rs, &w, lat.flats()[x].subsystem).unwrap();
        prop_assert_eq!(lat.flats()[stratum_of(lat, &wp).unwrap()].subsystem, expected);
    }

    #[test]
    fn relations_vanish_on_h(t in 0..TYPES.len(), raw in prop::collection::vec((-50i64..50, 1i64..6), 1..9)) {
        let lat = &lattices()[t];
        let rs = lat.root_system();
        let (p, _) = point_on(lat, lat.top(), &raw);
        for rel in generate_relations(rs) {
            prop_assert_eq!(rel.eval(&p), Some(BigRational::zero()));
        }
    }
}

#[test]
fn positive_root_counts() {
    let expected = [
        ("A1", 1),
        ("A5", 15),
        ("B2", 4),
        ("B5", 25),
        ("C3", 9),
        ("D4", 12),
        ("D6", 30),
        ("G2", 6),
        ("F4", 24),
        ("E6", 36),
        ("E7", 63),
        ("E8", 120),
    ];
    for (t, n) in expected {
        assert_eq!(
            RootSystem::build(&t.parse().unwrap())
                .unwrap()
                .num_positive(),
            n,
            "{t}"
        );
    }
}

#[test]
fn labels_expand_the_highest_root() {
    for t in ["A3", "B4", "C4", "D5", "G2", "F4", "E6", "E7", "E8"] {
        let rs = RootSystem::build(&t.parse().unwrap()).unwrap();
        let labels = rs.labels();
        let mut sum = vec![0i64; rs.dim()];
        for (k, &s) in rs.simples().iter().enumerate() {
            for (acc, &c) in sum.iter_mut().zip(rs.root(s)) {
                *acc += labels[k + 1] as i64 * c;
            }
        }
        assert_eq!(sum.as_slice(), rs.root(rs.highest()), "{t}");
        assert_eq!(labels[0], 1);
    }
}

#[test]
fn mobius_signs_alternate() {
    for lat in lattices() {
        for (x, &mu) in lat.mobius_table().iter().enumerate() {
            let sign = if lat.flats()[x].rank % 2 == 0 { 1 } else { -1 };
            assert!(
                mu * sign > 0,
                "{}: μ(0, {x}) = {mu}",
                lat.root_system().ctype()
            );
        }
    }
}

#[test]
fn b_and_c_lattices_have_equal_rank_counts() {
    for r in 2..=5 {
        let count = |f| {
            let rs = Arc::new(RootSystem::build(&CartanType::irreducible(f, r).unwrap()).unwrap());
            IntersectionLattice::build(rs, LatticeOptions::default())
                .unwrap()
                .rank_counts()
        };
        assert_eq!(count(Family::B), count(Family::C), "rank {r}");
    }
}

#[test]
fn closed_form_edges_and_symmetries() {
    for t in [
        "A1", "A6", "B2", "B7", "C5", "D3", "D7", "G2", "F4", "E6", "E7", "E8",
    ] {
        let ct: CartanType = t.parse().unwrap();
        assert_eq!(f_closed_form(&ct, 0).unwrap(), 1.into(), "{t}");
        assert_eq!(f_closed_form(&ct, ct.rank()).unwrap(), 1.into(), "{t}");
    }
    for r in 2..=7 {
        for k in 0..=r {
            let b = f_closed_form(&CartanType::irreducible(Family::B, r).unwrap(), k).unwrap();
            let c = f_closed_form(&CartanType::irreducible(Family::C, r).unwrap(), k).unwrap();
            assert_eq!(b, c);
        }
    }
    for k in 0..=3 {
        assert_eq!(
            f_closed_form(&"D3".parse().unwrap(), k),
            f_closed_form(&"A3".parse().unwrap(), k)
        );
    }
}

#[test]
fn orbits_have_constant_type() {
    for lat in lattices() {
        let rs = lat.root_system();
        for f in lat.flats() {
            let t = rs.classify_subsystem(f.subsystem).unwrap();
            for s in orbit_of_subsystem(rs, f.subsystem) {
                assert_eq!(rs.classify_subsystem(s).unwrap(), t);
            }
        }
    }
}

/// Every grid point lands in exactly one stratum, and every stratum is hit.
#[test]
fn grid_sweep_hits_every_stratum() {
    for t in ["A2", "A3", "B2", "G2"] {
        let lat = &lattices()[TYPES.iter().position(|x| *x == t).unwrap()];
        let rs = lat.root_system();
        let grid: Vec<Value> = (-2..=2).map(Value::int).chain([Value::Infinity]).collect();
        let d = rs.num_positive();
        let mut hit = BTreeSet::new();
        let mut idx = vec![0usize; d];
        loop {
            let p = ExtendedPoint::new(idx.iter().map(|&i| grid[i].clone()).collect());
            if is_member(rs, &p).unwrap() {
                let s = stratum_of(lat, &p).unwrap();
                let fin: RootSet = rs
                    .root_set((0..d).filter(|&i| p.get(i).is_finite()))
                    .unwrap();
                assert_eq!(lat.flats()[s].subsystem, fin);
                hit.insert(s);
            } else {
                assert!(stratum_of(lat, &p).is_err());
            }
            let Some(pos) = idx.iter().position(|&i| i + 1 < grid.len()) else {
                break;
            };
            idx[pos] += 1;
            idx[..pos].iter_mut().for_each(|i| *i = 0);
        }
        let mut per_rank = vec![0u64; rs.rank() + 1];
        for &s in &hit {
            per_rank[lat.flats()[s].rank] += 1;
        }
        assert_eq!(per_rank, lat.rank_counts(), "{t}");
    }
}

/// Along a cover `x ⋖ y`, stratum-`y` points tend to the stratum-`x` point.
#[test]
fn limit_points_approach_lower_strata() {
    for t in ["A2", "A3", "B2"] {
        let lat = &lattices()[TYPES.iter().position(|x| *x == t).unwrap()];
        let rs = lat.root_system();
        for &(lo, hi) in lat.covers().unwrap() {
            let (target, ambient) = (lat.flats()[lo].subsystem, lat.flats()[hi].subsystem);
            let (limit, w) = point_on(lat, lo, &[(3, 1), (-2, 3), (5, 2)]);
            let l0 = ambient.difference(target).iter().next().unwrap();
            let grow = ambient.difference(target);
            let mut last: Option<Vec<BigRational>> = None;
            for k in 1..6 {
                let t_k = BigRational::from_integer((10i64.pow(k)).into());
                let p = limit_point_within(rs, ambient, target, &w, l0, &t_k).unwrap();
                assert_eq!(stratum_of(lat, &p).unwrap(), hi);
                for i in target.iter() {
                    assert_eq!(p.get(i), limit.get(i));
                }
                let sizes: Vec<BigRational> = grow
                    .iter()
                    .map(|i| p.get(i).finite().unwrap().abs())
                    .collect();
                if let Some(prev) = &last {
                    assert!(
                        sizes.iter().zip(prev).all(|(a, b)| a > b),
                        "{t}: cover ({lo}, {hi})"
                    );
                }
                last = Some(sizes);
            }
        }
    }
}

/// A generated relation meets each good subsystem in all or all but two of its support.
#[test]
fn relation_supports_straddle_good_subsystems() {
    for t in ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "G2"] {
        let rs = Arc::new(RootSystem::build(&t.parse().unwrap()).unwrap());
        let lat = IntersectionLattice::build(rs.clone(), LatticeOptions::default()).unwrap();
        let good: Vec<RootSet> = lat
            .ids_of_rank(rs.rank() - 1)
            .map(|i| lat.flats()[i].subsystem)
            .collect();
        for rel in generate_relations(&rs) {
            let supp = rel.support();
            for &g in &good {
                let outside = supp.difference(g).len();
                assert!(outside == 0 || outside >= 2, "{t}: {rel:?} vs {g:?}");
            }
        }
    }
}
