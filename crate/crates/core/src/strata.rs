//! Points of `(P¹)^{Φ⁺}`, membership in the compactification `h̄`, strata,
//! the action of `h` and explicit boundary limits.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::flats::{FlatId, IntersectionLattice};
use crate::linalg::{clear_denominators, solve_in_basis, Echelon};
use crate::rootsys::{RootSet, RootSystem};

/// A coordinate of `P¹` in one of the two standard charts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Finite(BigRational),
    Infinity,
}

impl Value {
    pub fn int(n: i64) -> Self {
        Value::Finite(BigRational::from_integer(n.into()))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Value::Finite(_))
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Value::Finite(x) => Some(x),
            Value::Infinity => None,
        }
    }

    /// `-x`, with `-∞ = ∞`.
    pub fn neg(&self) -> Self {
        match self {
            Value::Finite(x) => Value::Finite(-x),
            Value::Infinity => Value::Infinity,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(x) => write!(f, "{x}"),
            Value::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Value {
    type Err = Error;

    /// Accepts `inf`, `∞`, integers and fractions `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(Value::Infinity);
        }
        let bad = || Error::ParseValue(t.to_string());
        match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Value::Finite(BigRational::new(n, d)))
            }
            None => Ok(Value::Finite(BigRational::from_integer(
                t.parse().map_err(|_| bad())?,
            ))),
        }
    }
}

/// A point of `(P¹)^{Φ⁺}`, one coordinate per positive root in index order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtendedPoint {
    values: Vec<Value>,
}

impl ExtendedPoint {
    pub fn new(values: Vec<Value>) -> Self {
        Self { values }
    }

    /// The image of `h` with `λ(h) = x_λ`.
    pub fn finite(values: Vec<BigRational>) -> Self {
        Self::new(values.into_iter().map(Value::Finite).collect())
    }

    pub fn infinity(d: usize) -> Self {
        Self::new(vec![Value::Infinity; d])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> &Value {
        &self.values[i]
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub(crate) fn check_len(&self, rs: &RootSystem) -> Result<()> {
        if self.values.len() == rs.num_positive() {
            Ok(())
        } else {
            Err(Error::PointLength {
                expected: rs.num_positive(),
                found: self.values.len(),
            })
        }
    }
}

impl fmt::Display for ExtendedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for ExtendedPoint {
    type Err = Error;

    /// Comma-separated coordinates.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(Self::new(Vec::new()));
        }
        s.split(',')
            .map(str::parse)
            .collect::<Result<_>>()
            .map(Self::new)
    }
}

/// A linear functional on the span of some roots, given by its values on
/// an independent set of positive roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functional {
    basis: Vec<usize>,
    values: Vec<BigRational>,
}

impl Functional {
    /// Negative roots are replaced by their positive counterparts with the
    /// value negated. Fails with `SpanDeficient` on a dependent basis.
    pub fn new(rs: &RootSystem, basis: &[usize], values: Vec<BigRational>) -> Result<Self> {
        if basis.len() != values.len() {
            return Err(Error::PointLength {
                expected: basis.len(),
                found: values.len(),
            });
        }
        let mut e = Echelon::new(rs.dim());
        let mut b = Vec::with_capacity(basis.len());
        let mut v = Vec::with_capacity(basis.len());
        for (&i, x) in basis.iter().zip(values) {
            if i >= rs.num_roots() {
                return Err(Error::InvalidRoot(i));
            }
            if !e.insert(rs.root(i)) {
                return Err(Error::SpanDeficient);
            }
            if rs.is_positive(i) {
                b.push(i);
                v.push(x);
            } else {
                b.push(rs.positive_rep(i));
                v.push(-x);
            }
        }
        Ok(Self {
            basis: b,
            values: v,
        })
    }

    /// The element of `h` with the given values on the simple roots.
    pub fn from_simple_values(rs: &RootSystem, values: Vec<BigRational>) -> Result<Self> {
        Self::new(rs, rs.simples(), values)
    }

    pub fn zero(rs: &RootSystem) -> Self {
        Self {
            basis: rs.simples().to_vec(),
            values: vec![BigRational::zero(); rs.rank()],
        }
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Dimension of the domain.
    pub fn span_rank(&self) -> usize {
        self.basis.len()
    }

    /// `λ(y)`, or `None` when `λ` is outside the domain.
    pub fn eval(&self, rs: &RootSystem, lambda: usize) -> Option<BigRational> {
        let rows: Vec<&[i64]> = self.basis.iter().map(|&b| rs.root(b)).collect();
        let c = solve_in_basis(&rows, rs.root(lambda))?;
        Some(c.iter().zip(&self.values).map(|(a, b)| a * b).sum())
    }
}

/// Why a point lies outside `h̄`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `Fin` is not span-closed: this root lies in its span but is infinite.
    ForcedFinite { root: usize },
    /// The finite coordinates violate a linear relation at `root`.
    Relation {
        root: usize,
        expected: BigRational,
        found: BigRational,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ForcedFinite { root } => {
                write!(
                    f,
                    "root {root} lies in the span of the finite roots but is infinite"
                )
            }
            Violation::Relation {
                root,
                expected,
                found,
            } => write!(
                f,
                "root {root} has value {found}, linear relations force {expected}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Stratum { flat: FlatId, witness: Functional },
    NotInVariety(Violation),
}

/// Positive indices with finite coordinate.
pub fn fin_set(rs: &RootSystem, p: &ExtendedPoint) -> Result<RootSet> {
    p.check_len(rs)?;
    Ok(p.values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .map(|(i, _)| i)
        .collect())
}

/// The membership criterion: `Fin` must be span-closed and the finite
/// values must extend to a linear functional on its span.
fn check(
    rs: &RootSystem,
    p: &ExtendedPoint,
) -> Result<std::result::Result<(RootSet, Functional), Violation>> {
    let fin = fin_set(rs, p)?;
    let closed = rs.closure(fin);
    if let Some(root) = closed.difference(fin).iter().next() {
        return Ok(Err(Violation::ForcedFinite { root }));
    }
    let mut e = Echelon::new(rs.dim());
    let mut basis = Vec::new();
    for i in fin.iter() {
        if e.insert(rs.root(i)) {
            basis.push(i);
        }
    }
    let values: Vec<BigRational> = basis
        .iter()
        .map(|&b| p.values[b].finite().expect("finite").clone())
        .collect();
    let witness = Functional { basis, values };
    for lam in fin.iter() {
        let expected = witness.eval(rs, lam).expect("in span");
        let found = p.values[lam].finite().expect("finite");
        if &expected != found {
            return Ok(Err(Violation::Relation {
                root: lam,
                expected,
                found: found.clone(),
            }));
        }
    }
    Ok(Ok((fin, witness)))
}

pub fn is_member(rs: &RootSystem, p: &ExtendedPoint) -> Result<bool> {
    Ok(check(rs, p)?.is_ok())
}

/// Decides `p ∈ h̄`; members come with their flat and a witness functional.
pub fn membership(lat: &IntersectionLattice, p: &ExtendedPoint) -> Result<Membership> {
    Ok(match check(lat.root_system(), p)? {
        Ok((fin, witness)) => Membership::Stratum {
            flat: lat.id_of(fin).expect("span-closed sets are flats"),
            witness,
        },
        Err(v) => Membership::NotInVariety(v),
    })
}

/// The flat whose subsystem is `Fin(p)`.
pub fn stratum_of(lat: &IntersectionLattice, p: &ExtendedPoint) -> Result<FlatId> {
    match membership(lat, p)? {
        Membership::Stratum { flat, .. } => Ok(flat),
        Membership::NotInVariety(_) => Err(Error::NotInVariety),
    }
}

/// `y · p`: every finite coordinate `x_λ` becomes `x_λ + λ(y)`.
pub fn h_translate(rs: &RootSystem, p: &ExtendedPoint, y: &Functional) -> Result<ExtendedPoint> {
    if y.span_rank() != rs.rank() {
        return Err(Error::SpanDeficient);
    }
    if check(rs, p)?.is_err() {
        return Err(Error::NotInVariety);
    }
    let values = p
        .values
        .iter()
        .enumerate()
        .map(|(lam, v)| match v {
            Value::Finite(x) => Value::Finite(x + y.eval(rs, lam).expect("y spans h*")),
            Value::Infinity => Value::Infinity,
        })
        .collect();
    Ok(ExtendedPoint::new(values))
}

/// The point of the stratum of `target` whose finite coordinates are the
/// witness values; infinite off `target`.
pub fn stratum_point(
    rs: &RootSystem,
    target: RootSet,
    witness: &Functional,
) -> Result<ExtendedPoint> {
    check_witness(rs, target, witness)?;
    let values = (0..rs.num_positive())
        .map(|lam| {
            if target.contains(lam) {
                Value::Finite(witness.eval(rs, lam).expect("witness spans target"))
            } else {
                Value::Infinity
            }
        })
        .collect();
    Ok(ExtendedPoint::new(values))
}

fn check_witness(rs: &RootSystem, target: RootSet, witness: &Functional) -> Result<()> {
    if rs.closure(target) != target {
        return Err(Error::NotSpanClosed);
    }
    let inside = witness.basis.iter().all(|&b| target.contains(b));
    if !inside || witness.span_rank() != rs.subsystem_rank(target) {
        return Err(Error::SpanDeficient);
    }
    Ok(())
}

/// Functional on `Span(target ∪ {λ₀})` extending the witness by `λ₀ ↦ t`.
fn extended_functional(
    rs: &RootSystem,
    ambient: RootSet,
    target: RootSet,
    witness: &Functional,
    lambda0: usize,
    t: &BigRational,
) -> Result<Functional> {
    if lambda0 >= rs.num_roots() {
        return Err(Error::InvalidRoot(lambda0));
    }
    check_witness(rs, target, witness)?;
    if rs.closure(ambient) != ambient {
        return Err(Error::NotSpanClosed);
    }
    let l0 = rs.positive_rep(lambda0);
    if !target.is_subset(ambient)
        || !ambient.contains(l0)
        || target.contains(l0)
        || rs.subsystem_rank(ambient) != witness.span_rank() + 1
    {
        return Err(Error::SpanDeficient);
    }
    let mut basis = witness.basis.clone();
    basis.push(lambda0);
    let mut values = witness.values.clone();
    values.push(t.clone());
    Functional::new(rs, &basis, values)
}

/// The finite point `x_t ∈ h` with `x_{λ₀} = t` and the witness values on
/// `target`. As `t → ∞` it converges to `stratum_point(target, witness)`.
pub fn limit_point(
    rs: &RootSystem,
    target: RootSet,
    witness: &Functional,
    lambda0: usize,
    t: &BigRational,
) -> Result<ExtendedPoint> {
    limit_point_within(rs, rs.positives(), target, witness, lambda0, t)
}

/// As [`limit_point`], inside the stratum of `ambient`, a flat containing
/// `target` with one more dimension: the result is finite exactly on
/// `ambient`.
pub fn limit_point_within(
    rs: &RootSystem,
    ambient: RootSet,
    target: RootSet,
    witness: &Functional,
    lambda0: usize,
    t: &BigRational,
) -> Result<ExtendedPoint> {
    let y = extended_functional(rs, ambient, target, witness, lambda0, t)?;
    let values = (0..rs.num_positive())
        .map(|lam| {
            if ambient.contains(lam) {
                Value::Finite(y.eval(rs, lam).expect("in span"))
            } else {
                Value::Infinity
            }
        })
        .collect();
    Ok(ExtendedPoint::new(values))
}

/// Roots of `ambient` whose coordinate grows without bound along
/// `limit_point_within`: those with nonzero `λ₀`-coefficient.
pub fn diverging_roots(
    rs: &RootSystem,
    ambient: RootSet,
    target: RootSet,
    lambda0: usize,
) -> Result<RootSet> {
    let mut e = Echelon::new(rs.dim());
    let mut basis = Vec::new();
    for i in target.iter() {
        if e.insert(rs.root(i)) {
            basis.push(i);
        }
    }
    if lambda0 >= rs.num_roots() {
        return Err(Error::InvalidRoot(lambda0));
    }
    if !e.insert(rs.root(lambda0)) {
        return Err(Error::SpanDeficient);
    }
    basis.push(lambda0);
    let rows: Vec<&[i64]> = basis.iter().map(|&b| rs.root(b)).collect();
    let mut out = RootSet::EMPTY;
    for lam in ambient.iter() {
        let c = solve_in_basis(&rows, rs.root(lam)).ok_or(Error::SpanDeficient)?;
        if !c.last().expect("nonempty").is_zero() {
            out.insert(lam);
        }
    }
    Ok(out)
}

/// An integer linear relation `Σ c_λ x_λ = 0` vanishing on `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    /// `(root, coefficient)` pairs, sorted by root, all nonzero.
    pub terms: Vec<(usize, BigInt)>,
}

impl Relation {
    pub fn support(&self) -> RootSet {
        self.terms.iter().map(|&(i, _)| i).collect()
    }

    /// Value on a point with finite coordinates on the support.
    pub fn eval(&self, p: &ExtendedPoint) -> Option<BigRational> {
        self.terms
            .iter()
            .map(|(i, c)| {
                p.values
                    .get(*i)?
                    .finite()
                    .map(|x| x * BigRational::from_integer(c.clone()))
            })
            .sum()
    }
}

/// The first `r` independent positive roots in index order.
pub fn relation_basis(rs: &RootSystem) -> Vec<usize> {
    let mut e = Echelon::new(rs.dim());
    rs.positives()
        .iter()
        .filter(|&i| e.insert(rs.root(i)))
        .collect()
}

/// One relation `D x_λ − Σ D b_i x_{β_i}` per positive root outside the
/// relation basis; together they span all relations.
pub fn generate_relations(rs: &RootSystem) -> Vec<Relation> {
    let basis = relation_basis(rs);
    let rows: Vec<&[i64]> = basis.iter().map(|&b| rs.root(b)).collect();
    rs.positives()
        .iter()
        .filter(|i| !basis.contains(i))
        .map(|lam| {
            let c = solve_in_basis(&rows, rs.root(lam)).expect("basis spans");
            let (den, nums) = clear_denominators(&c);
            let mut terms: Vec<(usize, BigInt)> = basis
                .iter()
                .zip(nums)
                .filter(|(_, n)| !n.is_zero())
                .map(|(&b, n)| (b, -n))
                .collect();
            terms.push((lam, den));
            terms.sort_by_key(|&(i, _)| i);
            debug_assert!(terms
                .iter()
                .all(|(_, c)| !c.is_zero() && c.abs() > BigInt::zero()));
            Relation { terms }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::flats::LatticeOptions;

    fn lattice(t: &str) -> IntersectionLattice {
        let rs = RootSystem::build(&t.parse().unwrap()).unwrap();
        IntersectionLattice::build(Arc::new(rs), LatticeOptions::default()).unwrap()
    }

    fn pt(s: &str) -> ExtendedPoint {
        s.parse().unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    /// `x₁y₀z₀ + x₀y₁z₀ − x₀y₀z₁` on homogeneous coordinates.
    fn a2_hypersurface(p: &ExtendedPoint) -> BigRational {
        let hom = |v: &Value| match v {
            Value::Finite(x) => (q(1), x.clone()),
            Value::Infinity => (q(0), q(1)),
        };
        let (x0, x1) = hom(p.get(0));
        let (y0, y1) = hom(p.get(1));
        let (z0, z1) = hom(p.get(2));
        &x1 * &y0 * &z0 + &x0 * &y1 * &z0 - &x0 * &y0 * &z1
    }

    #[test]
    fn parse_values() {
        assert_eq!("inf".parse::<Value>().unwrap(), Value::Infinity);
        assert_eq!(
            "-3/6".parse::<Value>().unwrap(),
            Value::Finite(BigRational::new((-1).into(), 2.into()))
        );
        assert!("1/0".parse::<Value>().is_err());
        assert!("x".parse::<Value>().is_err());
        assert_eq!(pt("1,inf,2/3").to_string(), "1,inf,2/3");
    }

    #[test]
    fn fin_sets() {
        let lat = lattice("A2");
        let rs = lat.root_system();
        assert_eq!(fin_set(rs, &pt("1,2,3")).unwrap(), rs.positives());
        assert_eq!(
            fin_set(rs, &pt("1,inf,inf")).unwrap(),
            RootSet::singleton(0)
        );
        assert!(fin_set(rs, &pt("inf,inf,inf")).unwrap().is_empty());
        assert!(matches!(
            fin_set(rs, &pt("1,2")),
            Err(Error::PointLength {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn a2_membership() {
        let lat = lattice("A2");
        match membership(&lat, &pt("1,2,3")).unwrap() {
            Membership::Stratum { flat, witness } => {
                assert_eq!(flat, lat.top());
                assert_eq!(witness.values(), &[q(1), q(2)]);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            membership(&lat, &pt("1,2,5")).unwrap(),
            Membership::NotInVariety(Violation::Relation { root: 2, .. })
        ));
        assert!(matches!(
            membership(&lat, &pt("1,2,inf")).unwrap(),
            Membership::NotInVariety(Violation::ForcedFinite { root: 2 })
        ));
        let s = lat
            .subsystem(stratum_of(&lat, &pt("inf,inf,7")).unwrap())
            .unwrap();
        assert_eq!(s, RootSet::singleton(2));
        assert_eq!(stratum_of(&lat, &pt("inf,inf,inf")).unwrap(), lat.bottom());
        assert_eq!(stratum_of(&lat, &pt("1,2,5")), Err(Error::NotInVariety));
    }

    /// The criterion agrees with the defining hypersurface of the A2
    /// compactification on a grid of points.
    #[test]
    fn a2_matches_hypersurface() {
        let lat = lattice("A2");
        let grid = ["-1", "0", "1", "2", "inf"];
        for a in grid {
            for b in grid {
                for c in grid {
                    let p = pt(&format!("{a},{b},{c}"));
                    let on_surface = a2_hypersurface(&p).is_zero();
                    assert_eq!(is_member(lat.root_system(), &p).unwrap(), on_surface, "{p}");
                }
            }
        }
    }

    #[test]
    fn translate() {
        let lat = lattice("A2");
        let rs = lat.root_system();
        let p = pt("1,inf,inf");
        assert_eq!(h_translate(rs, &p, &Functional::zero(rs)).unwrap(), p);
        let y = Functional::from_simple_values(rs, vec![q(5), q(-2)]).unwrap();
        assert_eq!(h_translate(rs, &p, &y).unwrap(), pt("6,inf,inf"));
        assert_eq!(h_translate(rs, &pt("1,2,5"), &y), Err(Error::NotInVariety));
        let partial = Functional::new(rs, &[0], vec![q(1)]).unwrap();
        assert_eq!(h_translate(rs, &p, &partial), Err(Error::SpanDeficient));
    }

    #[test]
    fn a2_limit() {
        let lat = lattice("A2");
        let rs = lat.root_system();
        let a1 = RootSet::singleton(0);
        let w = Functional::new(rs, &[0], vec![q(5)]).unwrap();
        let x = limit_point(rs, a1, &w, 1, &q(1000)).unwrap();
        assert_eq!(x, pt("5,1000,1005"));
        assert_eq!(stratum_of(&lat, &x).unwrap(), lat.top());
        let grow = diverging_roots(rs, rs.positives(), a1, 1).unwrap();
        assert_eq!(grow, rs.positives().difference(a1));
        assert_eq!(stratum_point(rs, a1, &w).unwrap(), pt("5,inf,inf"));
        assert_eq!(limit_point(rs, a1, &w, 0, &q(1)), Err(Error::SpanDeficient));
    }

    #[test]
    fn relations() {
        let a2 = RootSystem::build(&"A2".parse().unwrap()).unwrap();
        let rel = generate_relations(&a2);
        assert_eq!(rel.len(), 1);
        assert_eq!(
            rel[0].terms,
            vec![
                (0, BigInt::from(-1)),
                (1, BigInt::from(-1)),
                (2, BigInt::from(1))
            ]
        );
        let a1 = RootSystem::build(&"A1".parse().unwrap()).unwrap();
        assert!(generate_relations(&a1).is_empty());
        let b2 = RootSystem::build(&"B2".parse().unwrap()).unwrap();
        assert_eq!(generate_relations(&b2).len(), 2);
    }
}
