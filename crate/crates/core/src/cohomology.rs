//! The integral cohomology ring of `h̄` on the basis `ξ_X`, `X` a flat,
//! with `deg ξ_X = 2 rk X`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::flats::{FlatId, IntersectionLattice};
use crate::linalg::Echelon;
use crate::rootsys::RootSet;

/// An integral combination of basis classes of one lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedClass {
    lattice_uid: u64,
    coeffs: BTreeMap<FlatId, BigInt>,
}

impl GradedClass {
    pub fn zero(lat: &IntersectionLattice) -> Self {
        Self {
            lattice_uid: lat.uid(),
            coeffs: BTreeMap::new(),
        }
    }

    /// `ξ_x`.
    pub fn basis(lat: &IntersectionLattice, x: FlatId) -> Result<Self> {
        lat.flat(x)?;
        Ok(Self {
            lattice_uid: lat.uid(),
            coeffs: BTreeMap::from([(x, BigInt::one())]),
        })
    }

    /// `ξ_{0̂}`.
    pub fn unit(lat: &IntersectionLattice) -> Self {
        Self::basis(lat, lat.bottom()).expect("bottom exists")
    }

    pub fn from_terms(
        lat: &IntersectionLattice,
        terms: impl IntoIterator<Item = (FlatId, BigInt)>,
    ) -> Result<Self> {
        let mut out = Self::zero(lat);
        for (x, c) in terms {
            lat.flat(x)?;
            out.add_term(x, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, x: FlatId, c: BigInt) {
        let e = self.coeffs.entry(x).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&x);
        }
    }

    pub fn lattice_uid(&self) -> u64 {
        self.lattice_uid
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, x: FlatId) -> BigInt {
        self.coeffs.get(&x).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (FlatId, &BigInt)> {
        self.coeffs.iter().map(|(&x, c)| (x, c))
    }

    /// The common degree `2 rk X` of the supported flats, if homogeneous
    /// and nonzero.
    pub fn degree(&self, lat: &IntersectionLattice) -> Option<usize> {
        let mut ranks = self.coeffs.keys().map(|&x| lat.flats()[x].rank);
        let first = ranks.next()?;
        ranks.all(|k| k == first).then_some(2 * first)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.lattice_uid != other.lattice_uid {
            return Err(Error::LatticeMismatch);
        }
        let mut out = self.clone();
        for (&x, c) in &other.coeffs {
            out.add_term(x, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self {
            lattice_uid: self.lattice_uid,
            coeffs: BTreeMap::new(),
        };
        for (&x, a) in &self.coeffs {
            out.add_term(x, a * c);
        }
        out
    }
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (n, (x, c)) in self.coeffs.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "ξ{x}")?;
            } else {
                write!(f, "{c}·ξ{x}")?;
            }
        }
        Ok(())
    }
}

/// `ξ_x ⌣ ξ_y`: `ξ_{x∨y}` when ranks add, zero otherwise.
pub fn basis_cup(lat: &IntersectionLattice, x: FlatId, y: FlatId) -> Result<Option<FlatId>> {
    let (fx, fy) = (lat.flat(x)?, lat.flat(y)?);
    if fx.rank + fy.rank > lat.rank() {
        return Ok(None);
    }
    let j = lat.join(x, y)?;
    Ok((lat.flats()[j].rank == fx.rank + fy.rank).then_some(j))
}

/// Bilinear extension of [`basis_cup`].
pub fn cup(lat: &IntersectionLattice, a: &GradedClass, b: &GradedClass) -> Result<GradedClass> {
    if a.lattice_uid != lat.uid() || b.lattice_uid != lat.uid() {
        return Err(Error::LatticeMismatch);
    }
    let mut out = GradedClass::zero(lat);
    for (&x, ca) in &a.coeffs {
        for (&y, cb) in &b.coeffs {
            if let Some(z) = basis_cup(lat, x, y)? {
                out.add_term(z, ca * cb);
            }
        }
    }
    Ok(out)
}

/// `Σ_k W_k t^k`, with `W_k` the number of flats of corank `k`; the
/// coefficient of `t^k` is the rank of `H^{2(r-k)}`.
pub fn poincare_poly(lat: &IntersectionLattice) -> Vec<u64> {
    lat.betti_row()
}

/// Atoms whose iterated cup product is `ξ_x`: the atoms of a greedily
/// chosen basis of `Span(Ψ_x)`, scanning roots in index order.
pub fn factor_degree2(lat: &IntersectionLattice, x: FlatId) -> Result<Vec<FlatId>> {
    let rs = lat.root_system();
    let s = lat.subsystem(x)?;
    let mut e = Echelon::new(rs.dim());
    let mut atoms = Vec::new();
    for lam in s.iter() {
        if e.insert(rs.root(lam)) {
            let atom = rs.closure(RootSet::singleton(lam));
            atoms.push(lat.id_of(atom).expect("atoms are flats"));
        }
    }
    Ok(atoms)
}

/// Products `ξ_a ⌣ ξ_x` for every atom `a` (rows) and flat `x` (columns).
pub fn atom_table(lat: &IntersectionLattice) -> Vec<Vec<Option<FlatId>>> {
    let atoms = if lat.rank() == 0 {
        0..0
    } else {
        lat.ids_of_rank(1)
    };
    atoms
        .map(|a| {
            (0..lat.len())
                .map(|x| basis_cup(lat, a, x).expect("valid ids"))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::flats::LatticeOptions;
    use crate::rootsys::RootSystem;

    fn lattice(t: &str) -> IntersectionLattice {
        let rs = RootSystem::build(&t.parse().unwrap()).unwrap();
        IntersectionLattice::build(Arc::new(rs), LatticeOptions::default()).unwrap()
    }

    #[test]
    fn a2_products() {
        let lat = lattice("A2");
        let a1 = lat.id_of(RootSet::singleton(0)).unwrap();
        let a2 = lat.id_of(RootSet::singleton(1)).unwrap();
        let x = GradedClass::basis(&lat, a1).unwrap();
        let y = GradedClass::basis(&lat, a2).unwrap();
        assert_eq!(
            cup(&lat, &x, &y).unwrap(),
            GradedClass::basis(&lat, lat.top()).unwrap()
        );
        assert!(cup(&lat, &x, &x).unwrap().is_zero());
        let unit = GradedClass::unit(&lat);
        for id in 0..lat.len() {
            let c = GradedClass::basis(&lat, id).unwrap();
            assert_eq!(cup(&lat, &unit, &c).unwrap(), c);
        }
    }

    #[test]
    fn mismatch() {
        let a = lattice("A2");
        let b = lattice("A2");
        let x = GradedClass::unit(&a);
        let y = GradedClass::unit(&b);
        assert_eq!(cup(&a, &x, &y), Err(Error::LatticeMismatch));
        assert_eq!(x.add(&y), Err(Error::LatticeMismatch));
    }

    #[test]
    fn poincare() {
        assert_eq!(poincare_poly(&lattice("A2")), vec![1, 3, 1]);
        assert_eq!(poincare_poly(&lattice("A1")), vec![1, 1]);
        assert_eq!(poincare_poly(&lattice("F4")), vec![1, 120, 122, 24, 1]);
    }

    #[test]
    fn factorization() {
        for t in ["A2", "B2", "A3"] {
            let lat = lattice(t);
            assert!(factor_degree2(&lat, lat.bottom()).unwrap().is_empty());
            for x in 0..lat.len() {
                let atoms = factor_degree2(&lat, x).unwrap();
                assert_eq!(atoms.len(), lat.flats()[x].rank);
                let prod = atoms.iter().try_fold(GradedClass::unit(&lat), |acc, &a| {
                    cup(&lat, &acc, &GradedClass::basis(&lat, a).unwrap())
                });
                assert_eq!(
                    prod.unwrap(),
                    GradedClass::basis(&lat, x).unwrap(),
                    "{t} {x}"
                );
            }
        }
        assert_eq!(
            factor_degree2(&lattice("A2"), 99),
            Err(Error::InvalidId(99))
        );
    }

    #[test]
    fn degrees() {
        let lat = lattice("A2");
        assert_eq!(GradedClass::unit(&lat).degree(&lat), Some(0));
        assert_eq!(
            GradedClass::basis(&lat, lat.top()).unwrap().degree(&lat),
            Some(4)
        );
        let mixed = GradedClass::unit(&lat)
            .add(&GradedClass::basis(&lat, lat.top()).unwrap())
            .unwrap();
        assert_eq!(mixed.degree(&lat), None);
        assert_eq!(atom_table(&lat).len(), 3);
    }
}
