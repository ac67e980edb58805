//! Good and k-step good root subsystems: enumeration, the Borel–de
//! Siebenthal construction, and the root-theoretic parametrization of the
//! strata in classical types.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::flats::{IntersectionLattice, LatticeOptions};
use crate::rootsys::{CartanType, Family, RootSet, RootSystem};
use crate::weyl::orbit_of_subsystem;

/// `Ψ` is k-step good iff it is span-closed of rank `r - k`.
pub fn is_k_step_good(rs: &RootSystem, s: RootSet, k: usize) -> bool {
    k <= rs.rank() && rs.subsystem_rank(s) == rs.rank() - k && rs.closure(s) == s
}

/// All good (1-step good) subsystems, sorted.
pub fn enumerate_good(rs: &RootSystem) -> Result<Vec<RootSet>> {
    if rs.rank() == 0 {
        return Ok(Vec::new());
    }
    let lat = IntersectionLattice::build(Arc::new(rs.clone()), LatticeOptions::default())?;
    Ok(lat
        .ids_of_rank(rs.rank() - 1)
        .map(|id| lat.flats()[id].subsystem)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BdsCandidate {
    /// Removed affine nodes, `0` being the affine node.
    pub removed: (usize, usize),
    pub subsystem: RootSet,
}

/// For each pair of affine nodes with coprime labels, the subsystem
/// generated by the remaining nodes.
pub fn bds_candidates(rs: &RootSystem) -> Result<Vec<BdsCandidate>> {
    if rs.ctype().as_irreducible().is_none() {
        return Err(Error::ParseType(format!(
            "{} is not irreducible",
            rs.ctype()
        )));
    }
    let nodes = rs.affine_nodes();
    let labels = rs.labels();
    let mut out = Vec::new();
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if labels[i].gcd(&labels[j]) != 1 {
                continue;
            }
            let gens = rs.root_set(
                nodes
                    .iter()
                    .enumerate()
                    .filter(|&(n, _)| n != i && n != j)
                    .map(|(_, &root)| root),
            )?;
            out.push(BdsCandidate {
                removed: (i, j),
                subsystem: rs.additive_closure(gens),
            });
        }
    }
    Ok(out)
}

/// Every candidate is good and every good subsystem is W-conjugate to one.
pub fn bds_covers_all(rs: &RootSystem) -> Result<bool> {
    let candidates = bds_candidates(rs)?;
    if !candidates
        .iter()
        .all(|c| is_k_step_good(rs, c.subsystem, 1))
    {
        return Ok(false);
    }
    let mut reached = HashSet::new();
    for c in &candidates {
        if !reached.contains(&c.subsystem) {
            reached.extend(orbit_of_subsystem(rs, c.subsystem));
        }
    }
    Ok(enumerate_good(rs)?.iter().all(|s| reached.contains(s)))
}

fn classical(rs: &RootSystem) -> Result<(Family, usize)> {
    match rs.ctype().as_irreducible() {
        Some((f, r)) if f.is_classical() => Ok((f, r)),
        _ => Err(Error::NotClassical(rs.ctype().clone())),
    }
}

/// The subsystem generated by the simple roots other than `α_i`.
pub fn classical_omit_node(rs: &RootSystem, i: usize) -> Result<RootSet> {
    let (_, r) = classical(rs)?;
    if i == 0 || i > r {
        return Err(Error::RankOutOfRange { k: i, rank: r });
    }
    let gens = rs.root_set(
        rs.simples()
            .iter()
            .enumerate()
            .filter(|&(n, _)| n + 1 != i)
            .map(|(_, &a)| a),
    )?;
    Ok(rs.additive_closure(gens))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

/// A positive root of a classical type in coordinates, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Descriptor {
    /// `α_{i,j} = α_i + ⋯ + α_j` in type A, `i <= j`.
    Range { i: usize, j: usize },
    /// `ε_i ± ε_j` with `i < j`.
    Signed { i: usize, j: usize, sign: Sign },
    /// `ε_i` in type B, `2ε_i` in type C.
    Single(usize),
}

impl Descriptor {
    /// The pair `(i, j)` used by the star conditions; singles count as `(i, i)`.
    fn ends(self) -> (usize, usize) {
        match self {
            Descriptor::Range { i, j } | Descriptor::Signed { i, j, .. } => (i, j),
            Descriptor::Single(i) => (i, i),
        }
    }

    fn is_plus(self) -> bool {
        matches!(
            self,
            Descriptor::Signed {
                sign: Sign::Plus,
                ..
            }
        )
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Range { i, j } => write!(f, "({i},{j})"),
            Descriptor::Signed { i, j, sign } => {
                let s = if *sign == Sign::Plus { '+' } else { '-' };
                write!(f, "({i},{j},{s})")
            }
            Descriptor::Single(i) => write!(f, "e{i}"),
        }
    }
}

/// A set of descriptors for an irreducible classical type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StarParamSet {
    rs_type: CartanType,
    elements: BTreeSet<Descriptor>,
}

impl StarParamSet {
    /// Checks that every descriptor names a positive root of the type.
    pub fn new(
        rs_type: CartanType,
        elements: impl IntoIterator<Item = Descriptor>,
    ) -> Result<Self> {
        let (family, r) = match rs_type.as_irreducible() {
            Some((f, r)) if f.is_classical() => (f, r),
            _ => return Err(Error::NotClassical(rs_type)),
        };
        let elements: BTreeSet<Descriptor> = elements.into_iter().collect();
        for &d in &elements {
            let ok = match (family, d) {
                (Family::A, Descriptor::Range { i, j }) => 1 <= i && i <= j && j <= r,
                (Family::B | Family::C | Family::D, Descriptor::Signed { i, j, .. }) => {
                    1 <= i && i < j && j <= r
                }
                (Family::B | Family::C, Descriptor::Single(i)) => 1 <= i && i <= r,
                _ => false,
            };
            if !ok {
                return Err(Error::MalformedDescriptor(format!("{d} in type {rs_type}")));
            }
        }
        Ok(Self { rs_type, elements })
    }

    pub fn rs_type(&self) -> &CartanType {
        &self.rs_type
    }

    pub fn elements(&self) -> &BTreeSet<Descriptor> {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn family(&self) -> Family {
        self.rs_type.as_irreducible().expect("checked in new").0
    }
}

impl fmt::Display for StarParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, d) in self.elements.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("}")
    }
}

/// Whether two distinct descriptors may coexist under the basic star
/// condition of their type.
fn compatible(family: Family, a: Descriptor, b: Descriptor) -> bool {
    let ((i, j), (i2, j2)) = (a.ends(), b.ends());
    if family == Family::D && (i, j) == (i2, j2) {
        return true;
    }
    i != i2 && j != j2
}

/// The star conditions of the type: the basic one for A, B, C and all four
/// for D.
pub fn star_check(p: &StarParamSet) -> bool {
    let family = p.family();
    let elems: Vec<Descriptor> = p.elements.iter().copied().collect();
    for (n, &a) in elems.iter().enumerate() {
        if !elems[n + 1..].iter().all(|&b| compatible(family, a, b)) {
            return false;
        }
    }
    family != Family::D || d_extra_conditions(&p.elements)
}

/// Pairs `(i, j)` present with both signs.
fn doubled_pairs(elems: &BTreeSet<Descriptor>) -> Vec<(usize, usize)> {
    elems
        .iter()
        .filter(|d| d.is_plus())
        .map(|d| d.ends())
        .filter(|&(i, j)| {
            elems.contains(&Descriptor::Signed {
                i,
                j,
                sign: Sign::Minus,
            })
        })
        .collect()
}

fn d_extra_conditions(elems: &BTreeSet<Descriptor>) -> bool {
    let doubled = doubled_pairs(elems);
    if doubled.len() > 1 {
        return false;
    }
    let Some(&(a, b)) = doubled.first() else {
        return true;
    };
    // The chain ending at the doubled pair carries only minus signs.
    let mut cur = a;
    while let Some(&d) = elems.iter().find(|d| d.ends().1 == cur) {
        if d.is_plus() {
            return false;
        }
        cur = d.ends().0;
    }
    // Nothing continues past the doubled pair.
    !elems.iter().any(|d| d.ends().0 == b)
}

/// Descriptor of a positive root.
pub fn root_descriptor(rs: &RootSystem, idx: usize) -> Result<Descriptor> {
    let (family, _) = classical(rs)?;
    if !rs.is_positive(idx) || idx >= rs.num_roots() {
        return Err(Error::InvalidRoot(idx));
    }
    let nz: Vec<(usize, i64)> = rs
        .root(idx)
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(k, &x)| (k, x))
        .collect();
    Ok(match (family, nz.as_slice()) {
        (Family::A, [(a, _), (b, _)]) => Descriptor::Range { i: a + 1, j: *b },
        (_, [(a, _), (b, y)]) => Descriptor::Signed {
            i: a + 1,
            j: b + 1,
            sign: if *y > 0 { Sign::Plus } else { Sign::Minus },
        },
        (_, [(a, _)]) => Descriptor::Single(a + 1),
        _ => unreachable!("classical roots have one or two nonzero coordinates"),
    })
}

/// Positive root named by a descriptor.
pub fn descriptor_root(rs: &RootSystem, d: Descriptor) -> Result<usize> {
    let (family, _) = classical(rs)?;
    let mut v = vec![0i64; rs.dim()];
    match (family, d) {
        (Family::A, Descriptor::Range { i, j }) if 1 <= i && i <= j && j < rs.dim() => {
            v[i - 1] = 1;
            v[j] = -1;
        }
        (Family::B | Family::C | Family::D, Descriptor::Signed { i, j, sign })
            if 1 <= i && i < j && j <= rs.dim() =>
        {
            v[i - 1] = 1;
            v[j - 1] = if sign == Sign::Plus { 1 } else { -1 };
        }
        (Family::B, Descriptor::Single(i)) if 1 <= i && i <= rs.dim() => v[i - 1] = 1,
        (Family::C, Descriptor::Single(i)) if 1 <= i && i <= rs.dim() => v[i - 1] = 2,
        _ => {
            return Err(Error::MalformedDescriptor(format!(
                "{d} in type {}",
                rs.ctype()
            )))
        }
    }
    rs.index_of(&v)
        .ok_or_else(|| Error::MalformedDescriptor(d.to_string()))
}

/// The ends present in `Ψ`, singles as `(i, i)`.
fn ends_in(rs: &RootSystem, psi: RootSet) -> Result<HashSet<(usize, usize)>> {
    psi.iter()
        .map(|x| root_descriptor(rs, x).map(Descriptor::ends))
        .collect()
}

/// `F(Ψ)` for A, B, C and `F̃(Ψ)` for D.
pub fn param_f(rs: &RootSystem, psi: RootSet) -> Result<StarParamSet> {
    let (family, _) = classical(rs)?;
    if rs.closure(psi) != psi {
        return Err(Error::NotGood);
    }
    let ends = ends_in(rs, psi)?;
    // Type D excludes the endpoints of the scan ranges.
    let lo = usize::from(family == Family::D);
    let mut out = BTreeSet::new();
    for x in psi.iter() {
        let d = root_descriptor(rs, x)?;
        let keep = match d {
            Descriptor::Single(_) => true,
            _ => {
                let (i, j) = d.ends();
                let left = (i + lo..j).any(|j2| ends.contains(&(i, j2)));
                let right = (i + 1..j + 1 - lo).any(|i2| ends.contains(&(i2, j)));
                !left && !right
            }
        };
        if keep {
            out.insert(d);
        }
    }
    if family == Family::D {
        let mut doubled = doubled_pairs(&out);
        doubled.sort_by_key(|&(_, j)| j);
        doubled.pop();
        for (i, j) in doubled {
            out.remove(&Descriptor::Signed {
                i,
                j,
                sign: Sign::Plus,
            });
        }
    }
    StarParamSet::new(rs.ctype().clone(), out)
}

/// `G(P)`: the additive closure for A, the span closure for B, C, D.
pub fn param_g(rs: &RootSystem, p: &StarParamSet) -> Result<RootSet> {
    let (family, _) = classical(rs)?;
    if p.rs_type() != rs.ctype() {
        return Err(Error::MalformedDescriptor(format!(
            "parameters of type {} for {}",
            p.rs_type(),
            rs.ctype()
        )));
    }
    if !star_check(p) {
        return Err(Error::StarViolation);
    }
    let gens = p
        .elements
        .iter()
        .map(|&d| descriptor_root(rs, d))
        .collect::<Result<RootSet>>()?;
    Ok(match family {
        Family::A => rs.additive_closure(gens),
        _ => rs.closure(gens),
    })
}

/// Every descriptor of the type, in order.
pub fn all_descriptors(ctype: &CartanType) -> Result<Vec<Descriptor>> {
    let (family, r) = match ctype.as_irreducible() {
        Some((f, r)) if f.is_classical() => (f, r),
        _ => return Err(Error::NotClassical(ctype.clone())),
    };
    let mut out = Vec::new();
    for i in 1..=r {
        if family == Family::A {
            out.extend((i..=r).map(|j| Descriptor::Range { i, j }));
            continue;
        }
        if family != Family::D {
            out.push(Descriptor::Single(i));
        }
        for j in i + 1..=r {
            for sign in [Sign::Minus, Sign::Plus] {
                out.push(Descriptor::Signed { i, j, sign });
            }
        }
    }
    Ok(out)
}

/// All star-valid parameter sets of cardinality `m`, in lexicographic order.
pub fn enumerate_star_sets(ctype: &CartanType, m: usize) -> Result<Vec<StarParamSet>> {
    let family = ctype.as_irreducible().map(|x| x.0);
    let all = all_descriptors(ctype)?;
    let family = family.expect("classical");
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(m);
    fn go(
        start: usize,
        m: usize,
        family: Family,
        all: &[Descriptor],
        chosen: &mut Vec<Descriptor>,
        ctype: &CartanType,
        out: &mut Vec<StarParamSet>,
    ) {
        if chosen.len() == m {
            let p = StarParamSet::new(ctype.clone(), chosen.iter().copied()).expect("valid");
            if star_check(&p) {
                out.push(p);
            }
            return;
        }
        for n in start..all.len() {
            let d = all[n];
            if chosen.iter().all(|&c| compatible(family, c, d)) {
                chosen.push(d);
                go(n + 1, m, family, all, chosen, ctype, out);
                chosen.pop();
            }
        }
    }
    go(0, m, family, &all, &mut chosen, ctype, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(t: &str) -> RootSystem {
        RootSystem::build(&t.parse().unwrap()).unwrap()
    }

    fn set(rs: &RootSystem, ds: &[Descriptor]) -> RootSet {
        ds.iter()
            .map(|&d| descriptor_root(rs, d).unwrap())
            .collect()
    }

    fn range(i: usize, j: usize) -> Descriptor {
        Descriptor::Range { i, j }
    }

    fn signed(i: usize, j: usize, plus: bool) -> Descriptor {
        Descriptor::Signed {
            i,
            j,
            sign: if plus { Sign::Plus } else { Sign::Minus },
        }
    }

    #[test]
    fn k_step_good_examples() {
        let a2 = rs("A2");
        let theta = set(&a2, &[range(1, 2)]);
        assert!(is_k_step_good(&a2, theta, 1));
        let simples = set(&a2, &[range(1, 1), range(2, 2)]);
        assert!(!is_k_step_good(&a2, simples, 0));
        let b2 = rs("B2");
        let long = set(&b2, &[signed(1, 2, true), signed(1, 2, false)]);
        assert_eq!(b2.closure(long), b2.positives());
        assert!(!is_k_step_good(&b2, long, 0));
    }

    #[test]
    fn good_counts() {
        assert_eq!(enumerate_good(&rs("A2")).unwrap().len(), 3);
        assert_eq!(enumerate_good(&rs("G2")).unwrap().len(), 6);
        assert_eq!(enumerate_good(&rs("B3")).unwrap().len(), 13);
    }

    #[test]
    fn bds() {
        let a2 = rs("A2");
        let c = bds_candidates(&a2).unwrap();
        assert_eq!(c.len(), 3);
        for x in &c {
            assert_eq!(
                a2.classify_subsystem(x.subsystem).unwrap().to_string(),
                "A1"
            );
        }
        let g2 = rs("G2");
        let c = bds_candidates(&g2).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c
            .iter()
            .all(|x| g2.classify_subsystem(x.subsystem).unwrap().to_string() == "A1"));
        let b2 = rs("B2");
        assert!(bds_candidates(&b2)
            .unwrap()
            .iter()
            .all(|x| is_k_step_good(&b2, x.subsystem, 1)));
        for t in ["A2", "G2", "B3"] {
            assert!(bds_covers_all(&rs(t)).unwrap(), "{t}");
        }
    }

    #[test]
    fn omit_node() {
        let a3 = rs("A3");
        let s = classical_omit_node(&a3, 2).unwrap();
        assert_eq!(a3.classify_subsystem(s).unwrap().to_string(), "A1xA1");
        let a2 = rs("A2");
        assert_eq!(
            classical_omit_node(&a2, 1).unwrap(),
            set(&a2, &[range(2, 2)])
        );
        let b3 = rs("B3");
        let s = classical_omit_node(&b3, 1).unwrap();
        assert_eq!(b3.classify_subsystem(s).unwrap().to_string(), "B2");
        assert!(is_k_step_good(&b3, s, 1));
        assert!(matches!(
            classical_omit_node(&rs("G2"), 1),
            Err(Error::NotClassical(_))
        ));
    }

    #[test]
    fn star_examples() {
        let a = |ds: &[Descriptor]| {
            StarParamSet::new("A3".parse().unwrap(), ds.iter().copied()).unwrap()
        };
        assert!(star_check(&a(&[range(1, 1), range(2, 3)])));
        assert!(!star_check(&a(&[range(1, 2), range(1, 3)])));
        let d = |ds: &[Descriptor]| {
            StarParamSet::new("D4".parse().unwrap(), ds.iter().copied()).unwrap()
        };
        assert!(star_check(&d(&[
            signed(1, 2, false),
            signed(2, 3, false),
            signed(3, 4, false),
            signed(3, 4, true)
        ])));
        assert!(!star_check(&d(&[
            signed(1, 2, true),
            signed(1, 2, false),
            signed(3, 4, true),
            signed(3, 4, false)
        ])));
        assert!(matches!(
            StarParamSet::new("A3".parse().unwrap(), [range(2, 4)]),
            Err(Error::MalformedDescriptor(_))
        ));
    }

    #[test]
    fn parametrization_examples() {
        let a2 = rs("A2");
        let theta = set(&a2, &[range(1, 2)]);
        assert_eq!(
            param_f(&a2, theta).unwrap().elements(),
            &BTreeSet::from([range(1, 2)])
        );
        let p = StarParamSet::new("A2".parse().unwrap(), [range(1, 2)]).unwrap();
        assert_eq!(param_g(&a2, &p).unwrap(), theta);

        let d4 = rs("D4");
        let expected = BTreeSet::from([
            signed(1, 2, false),
            signed(2, 3, false),
            signed(3, 4, false),
            signed(3, 4, true),
        ]);
        assert_eq!(param_f(&d4, d4.positives()).unwrap().elements(), &expected);

        let a3 = rs("A3");
        let psi = a3.closure(set(&a3, &[range(1, 1), range(3, 3)]));
        assert_eq!(
            param_f(&a3, psi).unwrap().elements(),
            &BTreeSet::from([range(1, 1), range(3, 3)])
        );
        let p = StarParamSet::new("A3".parse().unwrap(), [range(1, 1), range(2, 3)]).unwrap();
        // α_1 + α_{2,3} = α_{1,3} is a root, so the closure is of type A2.
        let g = param_g(&a3, &p).unwrap();
        assert_eq!(g, set(&a3, &[range(1, 1), range(2, 3), range(1, 3)]));
        assert_eq!(a3.classify_subsystem(g).unwrap().to_string(), "A2");

        let b2 = rs("B2");
        let p = StarParamSet::new("B2".parse().unwrap(), [Descriptor::Single(1)]).unwrap();
        assert_eq!(
            param_g(&b2, &p).unwrap(),
            set(&b2, &[Descriptor::Single(1)])
        );

        let bad = StarParamSet::new("A3".parse().unwrap(), [range(1, 2), range(1, 3)]).unwrap();
        assert_eq!(param_g(&a3, &bad), Err(Error::StarViolation));
        let not_closed = set(&a3, &[range(1, 1), range(2, 2)]);
        assert_eq!(param_f(&a3, not_closed), Err(Error::NotGood));
    }

    #[test]
    fn descriptors_round_trip() {
        for t in ["A4", "B3", "C3", "D4"] {
            let rs = rs(t);
            let all = all_descriptors(rs.ctype()).unwrap();
            assert_eq!(all.len(), rs.num_positive(), "{t}");
            for d in all {
                assert_eq!(
                    root_descriptor(&rs, descriptor_root(&rs, d).unwrap()).unwrap(),
                    d
                );
            }
        }
    }
}
