//! Invariant suites over one Cartan type, as run by `coxstrata verify`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::betti::{betti_row, series_coefficients};
use crate::cohomology::{basis_cup, cup, factor_degree2, poincare_poly, GradedClass};
use crate::error::Result;
use crate::flats::{upper_covers, FlatId, IntersectionLattice, LatticeOptions};
use crate::goodsub::{bds_candidates, enumerate_star_sets, is_k_step_good, param_f, param_g};
use crate::rootsys::{CartanType, Family, RootSet, RootSystem};
use crate::strata::{
    generate_relations, h_translate, limit_point_within, stratum_of, stratum_point, ExtendedPoint,
    Functional,
};
use crate::weyl::{
    act_word_on_set, orbit_of_subsystem, parabolic_summary, weyl_act_point, weyl_order,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    fn samples(self, quick: usize, full: usize) -> usize {
        match self {
            Level::Quick => quick,
            Level::Full => full,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    /// `None` on success, otherwise the first counterexample.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub ctype: CartanType,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failure.is_none())
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.failure.is_some())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.failure {
                None => writeln!(f, "PASS {} {}", self.ctype, c.name)?,
                Some(why) => writeln!(f, "FAIL {} {}: {why}", self.ctype, c.name)?,
            }
        }
        Ok(())
    }
}

type Outcome = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Lattices larger than this skip the per-flat suites at quick level.
const QUICK_FLAT_LIMIT: usize = 20_000;

/// Runs every applicable suite on `ctype`. `opts` controls the lattice
/// budget, so the largest types need [`LatticeOptions::unbounded`].
pub fn verify_type(ctype: &CartanType, level: Level, opts: LatticeOptions) -> Result<Report> {
    let rs = Arc::new(RootSystem::build(ctype)?);
    let lat = IntersectionLattice::build(rs.clone(), opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let per_flat = level == Level::Full || lat.len() <= QUICK_FLAT_LIMIT;
    let mut checks = Vec::new();
    let mut run = |name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        checks.push(Check {
            name,
            failure: f().err(),
        });
    };

    run("reflections", &mut || check_reflections(&rs));
    run("closure", &mut || {
        check_closure(&rs, &mut rng, level.samples(200, 2000))
    });
    run("betti-row", &mut || check_betti(&lat));
    run("characteristic-polynomial", &mut || check_char_poly(&lat));
    if let Some((family, r)) = ctype.as_irreducible() {
        if family.is_classical() {
            run("series", &mut || check_series(family, r, &lat));
            if r <= 5 && rs.num_positive() <= 25 {
                run("parametrization", &mut || check_parametrization(&rs, &lat));
            }
        }
        run("borel-de-siebenthal", &mut || check_bds(&rs, &lat));
    }
    if per_flat {
        run("orbits", &mut || check_orbits(&lat));
        run("cohomology", &mut || {
            check_cohomology(&lat, &mut rng, level.samples(500, 10_000))
        });
    }
    run("membership", &mut || {
        check_membership(&lat, &mut rng, level.samples(200, 1000))
    });
    run("relations", &mut || check_relations(&lat, &mut rng));
    Ok(Report {
        ctype: ctype.clone(),
        checks,
    })
}

fn check_reflections(rs: &RootSystem) -> Outcome {
    let n = rs.num_roots();
    for (i, &a) in rs.simples().iter().enumerate() {
        let mut seen = vec![false; n];
        for x in 0..n {
            let y = rs.reflect_unchecked(a, x);
            ensure(!seen[y], || format!("s_{} is not injective", i + 1))?;
            seen[y] = true;
            ensure(rs.reflect_unchecked(a, y) == x, || {
                format!("s_{} is not an involution", i + 1)
            })?;
        }
        ensure(rs.reflect_unchecked(a, a) == rs.neg(a), || {
            format!("s_{} fixes its root", i + 1)
        })?;
    }
    Ok(())
}

fn random_subset(rs: &RootSystem, rng: &mut ChaCha8Rng) -> RootSet {
    let keep = rng.gen_range(1..=3);
    rs.positives()
        .iter()
        .filter(|_| rng.gen_range(0..8) < keep)
        .collect()
}

fn check_closure(rs: &RootSystem, rng: &mut ChaCha8Rng, samples: usize) -> Outcome {
    for _ in 0..samples {
        let s = random_subset(rs, rng);
        let t = s.union(random_subset(rs, rng));
        let cs = rs.closure(s);
        ensure(s.is_subset(cs), || format!("{s:?} not inside its closure"))?;
        ensure(rs.closure(cs) == cs, || {
            format!("closure of {s:?} not idempotent")
        })?;
        ensure(cs.is_subset(rs.closure(t)), || {
            format!("closure not monotone at {s:?}")
        })?;
        ensure(rs.is_closed(cs), || {
            format!("closure of {s:?} not additively closed")
        })?;
    }
    Ok(())
}

fn check_betti(lat: &IntersectionLattice) -> Outcome {
    let got: Vec<BigInt> = lat.betti_row().into_iter().map(BigInt::from).collect();
    let want = betti_row(lat.root_system().ctype()).map_err(|e| e.to_string())?;
    ensure(got == want, || {
        format!("enumerated {got:?}, closed form {want:?}")
    })?;
    ensure(
        got.first().is_some_and(One::is_one) && got.last().is_some_and(One::is_one),
        || "extreme Betti numbers are not 1".into(),
    )
}

/// `χ(1) = 0` and `(-1)^r χ(-1)` counts the chambers, i.e. `|W|`.
fn check_char_poly(lat: &IntersectionLattice) -> Outcome {
    let chi = lat.char_poly();
    let at = |t: i64| -> BigInt {
        chi.iter()
            .rev()
            .fold(BigInt::zero(), |acc, &c| acc * t + BigInt::from(c))
    };
    let r = lat.rank();
    if r > 0 {
        ensure(at(1).is_zero(), || format!("χ(1) = {}", at(1)))?;
    }
    let chambers = at(-1).abs();
    let order = weyl_order(lat.root_system().ctype());
    ensure(chambers == order, || {
        format!("|χ(-1)| = {chambers}, |W| = {order}")
    })
}

fn check_series(family: Family, r: usize, lat: &IntersectionLattice) -> Outcome {
    let table = series_coefficients(family, r).map_err(|e| e.to_string())?;
    let got: Vec<BigInt> = lat.betti_row().into_iter().map(BigInt::from).collect();
    ensure(table[r] == got, || {
        format!("series {:?}, enumerated {got:?}", table[r])
    })
}

fn check_parametrization(rs: &RootSystem, lat: &IntersectionLattice) -> Outcome {
    let r = rs.rank();
    for k in 0..=r {
        for id in lat.ids_of_rank(r - k) {
            let psi = lat.flats()[id].subsystem;
            let p = param_f(rs, psi).map_err(|e| e.to_string())?;
            ensure(p.len() == r - k, || format!("|F| = {} for {p}", p.len()))?;
            let g = param_g(rs, &p).map_err(|e| format!("G({p}): {e}"))?;
            ensure(g == psi, || format!("G(F(Ψ)) ≠ Ψ at {p}"))?;
        }
        let sets = enumerate_star_sets(rs.ctype(), r - k).map_err(|e| e.to_string())?;
        let expected = lat.ids_of_rank(r - k).len();
        ensure(sets.len() == expected, || {
            format!(
                "{} parameter sets of size {}, {expected} flats",
                sets.len(),
                r - k
            )
        })?;
        for p in sets {
            let g = param_g(rs, &p).map_err(|e| e.to_string())?;
            ensure(param_f(rs, g).ok().as_ref() == Some(&p), || {
                format!("F(G(P)) ≠ P at {p}")
            })?;
        }
    }
    Ok(())
}

fn check_bds(rs: &RootSystem, lat: &IntersectionLattice) -> Outcome {
    let candidates = bds_candidates(rs).map_err(|e| e.to_string())?;
    let mut reached = std::collections::HashSet::new();
    for c in &candidates {
        ensure(is_k_step_good(rs, c.subsystem, 1), || {
            format!("candidate {:?} is not good", c.removed)
        })?;
        if !reached.contains(&c.subsystem) {
            reached.extend(orbit_of_subsystem(rs, c.subsystem));
        }
    }
    if rs.rank() == 0 {
        return Ok(());
    }
    for id in lat.ids_of_rank(rs.rank() - 1) {
        let s = lat.flats()[id].subsystem;
        ensure(reached.contains(&s), || {
            format!("good flat {id} is conjugate to no candidate")
        })?;
    }
    Ok(())
}

fn check_orbits(lat: &IntersectionLattice) -> Outcome {
    let rs = lat.root_system();
    let summary = parabolic_summary(lat).map_err(|e| e.to_string())?;
    ensure(summary.rank_sizes() == lat.rank_counts(), || {
        format!(
            "orbit sizes {:?}, rank counts {:?}",
            summary.rank_sizes(),
            lat.rank_counts()
        )
    })?;
    let bound = 1usize << lat.rank();
    ensure(summary.orbit_count() <= bound, || {
        format!("{} parabolic classes exceed 2^r", summary.orbit_count())
    })?;
    for orbits in &summary.per_rank {
        for o in orbits {
            let members = orbit_of_subsystem(rs, lat.flats()[o.representative].subsystem);
            for m in members {
                let t = rs.classify_subsystem(m).map_err(|e| e.to_string())?;
                ensure(t == o.ctype, || {
                    format!(
                        "orbit of flat {} mixes {t} and {}",
                        o.representative, o.ctype
                    )
                })?;
            }
        }
    }
    Ok(())
}

fn random_homogeneous(lat: &IntersectionLattice, rng: &mut ChaCha8Rng) -> GradedClass {
    let k = rng.gen_range(0..=lat.rank());
    let ids: Vec<FlatId> = lat.ids_of_rank(k).collect();
    let terms = (0..rng.gen_range(1..=3)).map(|_| {
        let x = *ids.choose(rng).expect("every rank is inhabited");
        (x, BigInt::from(rng.gen_range(-3i64..=3)))
    });
    GradedClass::from_terms(lat, terms).expect("valid ids")
}

fn check_cohomology(lat: &IntersectionLattice, rng: &mut ChaCha8Rng, samples: usize) -> Outcome {
    let e = |x: crate::error::Error| x.to_string();
    ensure(poincare_poly(lat) == lat.betti_row(), || {
        "Poincaré polynomial differs from the Betti row".into()
    })?;
    for x in 0..lat.len() {
        let atoms = factor_degree2(lat, x).map_err(e)?;
        let mut acc = lat.bottom();
        for a in atoms {
            acc = basis_cup(lat, acc, a)
                .map_err(e)?
                .ok_or_else(|| format!("factorization of flat {x} multiplies to 0"))?;
        }
        ensure(acc == x, || {
            format!("factorization of flat {x} yields {acc}")
        })?;
    }
    for _ in 0..samples {
        let (a, b, c) = (
            random_homogeneous(lat, rng),
            random_homogeneous(lat, rng),
            random_homogeneous(lat, rng),
        );
        let ab = cup(lat, &a, &b).map_err(e)?;
        let left = cup(lat, &ab, &c).map_err(e)?;
        let right = cup(lat, &a, &cup(lat, &b, &c).map_err(e)?).map_err(e)?;
        ensure(left == right, || {
            format!("({a})({b})({c}) is not associative")
        })?;
        ensure(ab == cup(lat, &b, &a).map_err(e)?, || {
            format!("{a} and {b} do not commute")
        })?;
        let (da, db) = (a.degree(lat), b.degree(lat));
        if let (Some(da), Some(db), Some(dab)) = (da, db, ab.degree(lat)) {
            ensure(dab == da + db, || {
                format!("degree of {ab} is not {}", da + db)
            })?;
        }
        let sum = b.add(&c).map_err(e)?;
        let dist = cup(lat, &a, &sum).map_err(e)?;
        let split = ab.add(&cup(lat, &a, &c).map_err(e)?).map_err(e)?;
        ensure(dist == split, || {
            format!("{a} does not distribute over {b} + {c}")
        })?;
    }
    Ok(())
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(
        rng.gen_range(-20i64..=20).into(),
        rng.gen_range(1i64..=4).into(),
    )
}

/// A point of the stratum of `target` with random witness values.
pub fn random_stratum_point(
    rs: &RootSystem,
    target: RootSet,
    rng: &mut ChaCha8Rng,
) -> Result<(ExtendedPoint, Functional)> {
    let mut e = crate::linalg::Echelon::new(rs.dim());
    let basis: Vec<usize> = target.iter().filter(|&i| e.insert(rs.root(i))).collect();
    let values = basis.iter().map(|_| random_rational(rng)).collect();
    let w = Functional::new(rs, &basis, values)?;
    Ok((stratum_point(rs, target, &w)?, w))
}

fn random_word(rs: &RootSystem, rng: &mut ChaCha8Rng) -> Vec<usize> {
    (0..rng.gen_range(0..8))
        .map(|_| rng.gen_range(1..=rs.rank()))
        .collect()
}

fn check_membership(lat: &IntersectionLattice, rng: &mut ChaCha8Rng, samples: usize) -> Outcome {
    let rs = lat.root_system();
    let e = |x: crate::error::Error| x.to_string();
    if rs.rank() == 0 {
        return Ok(());
    }
    for _ in 0..samples {
        // A covering pair: points of the larger stratum tending to the smaller.
        let k = rng.gen_range(0..rs.rank());
        let ids: Vec<FlatId> = lat.ids_of_rank(k).collect();
        let x = *ids.choose(rng).expect("inhabited");
        let target = lat.flats()[x].subsystem;
        let ambient = *upper_covers(rs, target).choose(rng).expect("not the top");
        let (boundary, w) = random_stratum_point(rs, target, rng).map_err(e)?;
        ensure(stratum_of(lat, &boundary).ok() == Some(x), || {
            format!("{boundary} misplaced")
        })?;
        let lambda0 = ambient
            .difference(target)
            .iter()
            .next()
            .expect("proper cover");
        let t = BigRational::from_integer(rng.gen_range(-1000i64..=1000).into());
        let p = limit_point_within(rs, ambient, target, &w, lambda0, &t).map_err(e)?;
        let amb_id = lat.id_of(ambient).expect("flat");
        ensure(stratum_of(lat, &p).ok() == Some(amb_id), || {
            format!("limit point {p} misplaced")
        })?;

        let y_values = (0..rs.rank()).map(|_| random_rational(rng)).collect();
        let y = Functional::from_simple_values(rs, y_values).map_err(e)?;
        let moved = h_translate(rs, &p, &y).map_err(e)?;
        ensure(stratum_of(lat, &moved).ok() == Some(amb_id), || {
            format!("translate of {p} misplaced")
        })?;

        let word = random_word(rs, rng);
        let wp = weyl_act_point(rs, &word, &moved).map_err(e)?;
        let expected = act_word_on_set(rs, &word, ambient).map_err(e)?;
        ensure(stratum_of(lat, &wp).ok() == lat.id_of(expected), || {
            format!("w = {word:?} moves {moved} off the stratum of w·Ψ")
        })?;
    }
    Ok(())
}

fn check_relations(lat: &IntersectionLattice, rng: &mut ChaCha8Rng) -> Outcome {
    let rs = lat.root_system();
    let rels = generate_relations(rs);
    ensure(rels.len() == rs.num_positive() - rs.rank(), || {
        format!("{} relations", rels.len())
    })?;
    for _ in 0..20 {
        let (p, _) = random_stratum_point(rs, rs.positives(), rng).map_err(|x| x.to_string())?;
        for rel in &rels {
            ensure(rel.eval(&p).is_some_and(|v| v.is_zero()), || {
                format!("{rel:?} fails at {p}")
            })?;
        }
    }
    if rs.rank() <= 3 && rs.rank() > 0 {
        for id in lat.ids_of_rank(rs.rank() - 1) {
            let good = lat.flats()[id].subsystem;
            for rel in &rels {
                let outside = rel.support().difference(good).len();
                ensure(outside != 1, || {
                    format!("{rel:?} leaves flat {id} at a single root")
                })?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suites_pass() {
        for t in ["A1", "A3", "B2", "C3", "D4", "G2"] {
            let report =
                verify_type(&t.parse().unwrap(), Level::Quick, LatticeOptions::default()).unwrap();
            assert!(report.passed(), "{report}");
        }
    }
}
