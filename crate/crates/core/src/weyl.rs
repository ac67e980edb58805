//! Weyl group action on roots, flats and points of the compactification.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::flats::{FlatId, IntersectionLattice};
use crate::rootsys::{CartanType, Family, RootSet, RootSystem};
use crate::strata::ExtendedPoint;

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// `|W|` for an arbitrary (possibly reducible) Cartan type.
pub fn weyl_order(ctype: &CartanType) -> BigInt {
    ctype
        .factors()
        .iter()
        .map(|&(family, r)| match family {
            Family::A => factorial(r + 1),
            Family::B | Family::C => (BigInt::one() << r) * factorial(r),
            Family::D => (BigInt::one() << (r - 1)) * factorial(r),
            Family::E => BigInt::from(match r {
                6 => 51_840u64,
                7 => 2_903_040,
                _ => 696_729_600,
            }),
            Family::F => BigInt::from(1152),
            Family::G => BigInt::from(12),
        })
        .product()
}

/// Applies the word `s_{i_1} ⋯ s_{i_m}` (1-based simple indices) to a
/// root, rightmost letter first.
pub fn act_word_on_root(rs: &RootSystem, word: &[usize], root: usize) -> Result<usize> {
    check_word(rs, word)?;
    if root >= rs.num_roots() {
        return Err(Error::InvalidRoot(root));
    }
    Ok(word.iter().rev().fold(root, |acc, &i| {
        rs.reflect_unchecked(rs.simples()[i - 1], acc)
    }))
}

/// Applies a word to a negation-closed root set.
pub fn act_word_on_set(rs: &RootSystem, word: &[usize], s: RootSet) -> Result<RootSet> {
    check_word(rs, word)?;
    Ok(word
        .iter()
        .rev()
        .fold(s, |acc, &i| rs.reflect_set(rs.simples()[i - 1], acc)))
}

fn check_word(rs: &RootSystem, word: &[usize]) -> Result<()> {
    match word.iter().find(|&&i| i == 0 || i > rs.rank()) {
        Some(&i) => Err(Error::MalformedWord(i)),
        None => Ok(()),
    }
}

/// The W-orbit of a subsystem, sorted.
pub fn orbit_of_subsystem(rs: &RootSystem, s: RootSet) -> Vec<RootSet> {
    let mut seen = HashSet::from([s]);
    let mut queue = VecDeque::from([s]);
    while let Some(cur) = queue.pop_front() {
        for &a in rs.simples() {
            let next = rs.reflect_set(a, cur);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<RootSet> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// Ids of the flats in the orbit of `x`, sorted.
pub fn orbit_of_flat(lat: &IntersectionLattice, x: FlatId) -> Result<Vec<FlatId>> {
    let s = lat.subsystem(x)?;
    let mut ids: Vec<FlatId> = orbit_of_subsystem(lat.root_system(), s)
        .into_iter()
        .map(|k| lat.id_of(k).expect("W permutes flats"))
        .collect();
    ids.sort_unstable();
    Ok(ids)
}

/// One W-orbit of flats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Smallest flat id in the orbit.
    pub representative: FlatId,
    pub size: usize,
    pub stabilizer_order: BigInt,
    /// Cartan type of the flats in the orbit.
    pub ctype: CartanType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSummary {
    pub weyl_order: BigInt,
    /// Orbits grouped by rank of their flats, each group ordered by
    /// representative.
    pub per_rank: Vec<Vec<Orbit>>,
}

impl OrbitSummary {
    pub fn orbit_count(&self) -> usize {
        self.per_rank.iter().map(Vec::len).sum()
    }

    /// Total orbit size per rank, which recovers the rank counts.
    pub fn rank_sizes(&self) -> Vec<u64> {
        self.per_rank
            .iter()
            .map(|g| g.iter().map(|o| o.size as u64).sum())
            .collect()
    }
}

/// Partitions the flats into W-orbits.
pub fn parabolic_summary(lat: &IntersectionLattice) -> Result<OrbitSummary> {
    let rs = lat.root_system();
    let order = weyl_order(rs.ctype());
    let mut assigned = vec![false; lat.len()];
    let mut per_rank = vec![Vec::new(); lat.rank() + 1];
    for id in 0..lat.len() {
        if assigned[id] {
            continue;
        }
        let members = orbit_of_flat(lat, id)?;
        for &m in &members {
            assigned[m] = true;
        }
        let (stabilizer_order, rem) = order.div_rem(&BigInt::from(members.len()));
        debug_assert!(rem.is_zero());
        let flat = lat.flat(id)?;
        per_rank[flat.rank].push(Orbit {
            representative: id,
            size: members.len(),
            stabilizer_order,
            ctype: rs.classify_unchecked(flat.subsystem)?,
        });
    }
    Ok(OrbitSummary {
        weyl_order: order,
        per_rank,
    })
}

/// `w · x`, where `(w · x)_λ = x_{w⁻¹ λ}`. The word uses 1-based simple
/// indices.
pub fn weyl_act_point(rs: &RootSystem, word: &[usize], p: &ExtendedPoint) -> Result<ExtendedPoint> {
    check_word(rs, word)?;
    p.check_len(rs)?;
    let values = (0..rs.num_positive())
        .map(|lam| {
            // w⁻¹ = s_{i_m} ⋯ s_{i_1}, so s_{i_1} acts first.
            let mu = word.iter().fold(lam, |acc, &i| {
                rs.reflect_unchecked(rs.simples()[i - 1], acc)
            });
            let v = p.get(rs.positive_rep(mu));
            if rs.is_positive(mu) {
                v.clone()
            } else {
                v.neg()
            }
        })
        .collect();
    Ok(ExtendedPoint::new(values))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::flats::LatticeOptions;

    fn rs(s: &str) -> RootSystem {
        RootSystem::build(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn orders() {
        let cases = [
            ("A3", 24u64),
            ("B3", 48),
            ("C4", 384),
            ("D4", 192),
            ("E6", 51840),
            ("E7", 2903040),
            ("E8", 696729600),
            ("F4", 1152),
            ("G2", 12),
            ("A1xA1", 4),
        ];
        for (t, n) in cases {
            assert_eq!(weyl_order(&t.parse().unwrap()), BigInt::from(n), "{t}");
        }
    }

    /// Closes the simple reflections under composition as permutations of
    /// the roots; the group size must match the stored order.
    #[test]
    fn orders_by_permutation_closure() {
        for t in ["A2", "B2", "G2", "A3", "B3"] {
            let rs = rs(t);
            let n = rs.num_roots();
            let gens: Vec<Vec<usize>> = rs
                .simples()
                .iter()
                .map(|&a| (0..n).map(|x| rs.reflect(a, x).unwrap()).collect())
                .collect();
            let id: Vec<usize> = (0..n).collect();
            let mut seen = HashSet::from([id.clone()]);
            let mut queue = VecDeque::from([id]);
            while let Some(p) = queue.pop_front() {
                for g in &gens {
                    let q: Vec<usize> = p.iter().map(|&x| g[x]).collect();
                    if seen.insert(q.clone()) {
                        queue.push_back(q);
                    }
                }
            }
            assert_eq!(BigInt::from(seen.len()), weyl_order(rs.ctype()), "{t}");
        }
    }

    #[test]
    fn a2_orbits() {
        let lat =
            IntersectionLattice::build(Arc::new(rs("A2")), LatticeOptions::default()).unwrap();
        let summary = parabolic_summary(&lat).unwrap();
        assert_eq!(summary.orbit_count(), 3);
        let lines = &summary.per_rank[1];
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].size, 3);
        assert_eq!(lines[0].stabilizer_order, BigInt::from(2));
        assert_eq!(summary.rank_sizes(), lat.rank_counts());
    }

    #[test]
    fn b2_has_two_line_orbits() {
        let lat =
            IntersectionLattice::build(Arc::new(rs("B2")), LatticeOptions::default()).unwrap();
        let summary = parabolic_summary(&lat).unwrap();
        let sizes: Vec<usize> = summary.per_rank[1].iter().map(|o| o.size).collect();
        assert_eq!(sizes, vec![2, 2]);
    }

    #[test]
    fn malformed_word() {
        let rs = rs("A2");
        assert_eq!(act_word_on_root(&rs, &[3], 0), Err(Error::MalformedWord(3)));
        assert_eq!(act_word_on_root(&rs, &[0], 0), Err(Error::MalformedWord(0)));
    }

    #[test]
    fn word_on_simple_root() {
        let rs = rs("A2");
        let a1 = rs.simples()[0];
        assert_eq!(act_word_on_root(&rs, &[1], a1).unwrap(), rs.neg(a1));
        assert_eq!(act_word_on_root(&rs, &[1, 1], a1).unwrap(), a1);
    }
}
