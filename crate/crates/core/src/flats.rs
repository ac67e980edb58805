//! The intersection lattice of the Coxeter arrangement.
//!
//! A flat `X` is stored as its span-closed root subsystem `Ψ = X^⊥ ∩ Φ`
//! (positive part only). The rank of a flat is the dimension of the span of
//! `Ψ`, the empty subsystem is the bottom element and `Φ` the top.
//!
//! Flats are enumerated level by level: the flats covering `Ψ` are the
//! classes of roots outside `Ψ` whose residuals modulo `Span(Ψ)` are
//! parallel, so each level is expanded with one pass over the roots per
//! frontier flat.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rootsys::{RootSet, RootSystem};

pub type FlatId = usize;

/// Flat budget applied unless the caller opts out; admits E7 but not E8.
pub const DEFAULT_FLAT_BUDGET: usize = 1_000_000;

static NEXT_LATTICE_UID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flat {
    pub subsystem: RootSet,
    pub rank: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct LatticeOptions {
    /// Maximum number of flats; `None` disables the check.
    pub budget: Option<usize>,
    /// Whether to keep the covering pairs found during enumeration.
    pub record_covers: bool,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        Self {
            budget: Some(DEFAULT_FLAT_BUDGET),
            record_covers: true,
        }
    }
}

impl LatticeOptions {
    pub fn unbounded() -> Self {
        Self {
            budget: None,
            ..Self::default()
        }
    }
}

#[derive(Debug)]
pub struct IntersectionLattice {
    rs: Arc<RootSystem>,
    uid: u64,
    flats: Vec<Flat>,
    rank_start: Vec<usize>,
    index: HashMap<RootSet, FlatId>,
    covers: Option<Vec<(FlatId, FlatId)>>,
    /// Lower covers in CSR form, derived from `covers`.
    lower: Option<(Vec<usize>, Vec<FlatId>)>,
    mobius: OnceLock<Vec<i64>>,
}

/// Keys of all flats covering `key`.
pub(crate) fn upper_covers(rs: &RootSystem, key: RootSet) -> Vec<RootSet> {
    let e = rs.echelon(key);
    let outside = rs.positives().difference(key);
    let mut residuals: Vec<(Vec<i64>, usize)> = outside
        .iter()
        .map(|i| (e.residual(rs.root(i)), i))
        .collect();
    residuals.sort_unstable();
    let mut out = Vec::new();
    let mut k = 0;
    while k < residuals.len() {
        let mut next = key;
        let mut j = k;
        while j < residuals.len() && residuals[j].0 == residuals[k].0 {
            next.insert(residuals[j].1);
            j += 1;
        }
        out.push(next);
        k = j;
    }
    out
}

impl IntersectionLattice {
    /// Enumerates every flat by breadth-first search over ranks.
    pub fn build(rs: Arc<RootSystem>, opts: LatticeOptions) -> Result<Self> {
        let r = rs.rank();
        let mut levels: Vec<Vec<RootSet>> = vec![vec![RootSet::EMPTY]];
        let mut level_covers: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut total = 1usize;
        for _ in 0..r {
            let frontier = levels.last().expect("nonempty");
            let expanded: Vec<Vec<RootSet>> = frontier
                .par_iter()
                .map(|&key| upper_covers(&rs, key))
                .collect();
            let mut next: Vec<RootSet> = expanded.iter().flatten().copied().collect();
            next.par_sort_unstable();
            next.dedup();
            total += next.len();
            if let Some(budget) = opts.budget {
                if total > budget {
                    return Err(Error::ResourceLimit {
                        budget,
                        reached: total,
                    });
                }
            }
            if opts.record_covers {
                let pairs = expanded
                    .iter()
                    .enumerate()
                    .flat_map(|(lo, ups)| ups.iter().map(move |u| (lo, u)))
                    .map(|(lo, u)| (lo, next.binary_search(u).expect("discovered key")))
                    .collect();
                level_covers.push(pairs);
            }
            levels.push(next);
        }

        let mut rank_start = Vec::with_capacity(r + 2);
        let mut flats = Vec::with_capacity(total);
        for (k, level) in levels.iter().enumerate() {
            rank_start.push(flats.len());
            flats.extend(level.iter().map(|&s| Flat {
                subsystem: s,
                rank: k,
            }));
        }
        rank_start.push(flats.len());
        let covers = opts.record_covers.then(|| {
            let mut all: Vec<(FlatId, FlatId)> = level_covers
                .iter()
                .enumerate()
                .flat_map(|(k, pairs)| {
                    let (lo_off, hi_off) = (rank_start[k], rank_start[k + 1]);
                    pairs.iter().map(move |&(a, b)| (a + lo_off, b + hi_off))
                })
                .collect();
            all.sort_unstable();
            all
        });
        Ok(Self::assemble(rs, flats, rank_start, covers))
    }

    fn assemble(
        rs: Arc<RootSystem>,
        flats: Vec<Flat>,
        rank_start: Vec<usize>,
        covers: Option<Vec<(FlatId, FlatId)>>,
    ) -> Self {
        let index = flats
            .iter()
            .enumerate()
            .map(|(i, f)| (f.subsystem, i))
            .collect();
        let lower = covers.as_ref().map(|c| {
            let n = flats.len();
            let mut count = vec![0usize; n + 1];
            for &(_, hi) in c {
                count[hi + 1] += 1;
            }
            for i in 0..n {
                count[i + 1] += count[i];
            }
            let mut fill = count.clone();
            let mut adj = vec![0; c.len()];
            for &(lo, hi) in c {
                adj[fill[hi]] = lo;
                fill[hi] += 1;
            }
            (count, adj)
        });
        Self {
            rs,
            uid: NEXT_LATTICE_UID.fetch_add(1, Ordering::Relaxed),
            flats,
            rank_start,
            index,
            covers,
            lower,
            mobius: OnceLock::new(),
        }
    }

    /// Rebuilds a lattice from stored flat keys (and optionally covers),
    /// e.g. from a cache. Keys are re-sorted into canonical order; covers
    /// are given in terms of the canonical ids.
    pub fn from_parts(
        rs: Arc<RootSystem>,
        keys: Vec<RootSet>,
        covers: Option<Vec<(FlatId, FlatId)>>,
    ) -> Result<Self> {
        let r = rs.rank();
        let mut flats: Vec<Flat> = keys
            .into_iter()
            .map(|s| Flat {
                subsystem: s,
                rank: rs.subsystem_rank(s),
            })
            .collect();
        flats.sort_by_key(|f| (f.rank, f.subsystem));
        let mut rank_start = Vec::with_capacity(r + 2);
        for k in 0..=r + 1 {
            rank_start.push(flats.partition_point(|f| f.rank < k));
        }
        if let Some(c) = &covers {
            if let Some(&(a, b)) = c
                .iter()
                .find(|&&(a, b)| a >= flats.len() || b >= flats.len())
            {
                return Err(Error::InvalidId(a.max(b)));
            }
        }
        let covers = covers.map(|mut c| {
            c.sort_unstable();
            c
        });
        Ok(Self::assemble(rs, flats, rank_start, covers))
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn root_system_arc(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    /// Identifier distinguishing lattices built in this process.
    pub fn uid(&self) -> u64 {
        self.uid
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn flat(&self, id: FlatId) -> Result<&Flat> {
        self.flats.get(id).ok_or(Error::InvalidId(id))
    }

    pub fn subsystem(&self, id: FlatId) -> Result<RootSet> {
        Ok(self.flat(id)?.subsystem)
    }

    pub fn id_of(&self, subsystem: RootSet) -> Option<FlatId> {
        self.index.get(&subsystem).copied()
    }

    pub fn ids_of_rank(&self, k: usize) -> Range<FlatId> {
        if k > self.rank() {
            return 0..0;
        }
        self.rank_start[k]..self.rank_start[k + 1]
    }

    pub fn bottom(&self) -> FlatId {
        0
    }

    pub fn top(&self) -> FlatId {
        self.flats.len() - 1
    }

    pub fn covers(&self) -> Option<&[(FlatId, FlatId)]> {
        self.covers.as_deref()
    }

    /// Lower covers of `id`, when covers were recorded.
    pub fn lower_covers(&self, id: FlatId) -> Option<&[FlatId]> {
        self.lower
            .as_ref()
            .map(|(start, adj)| &adj[start[id]..start[id + 1]])
    }

    /// Flat counts per rank, `W_0..W_r`.
    pub fn rank_counts(&self) -> Vec<u64> {
        (0..=self.rank())
            .map(|k| self.ids_of_rank(k).len() as u64)
            .collect()
    }

    /// Flat of `closure(Ψ_x ∪ Ψ_y)`.
    pub fn join(&self, x: FlatId, y: FlatId) -> Result<FlatId> {
        let s = self.subsystem(x)?.union(self.subsystem(y)?);
        let c = self.rs.closure(s);
        Ok(self.id_of(c).expect("closure of flats is a flat"))
    }

    pub fn leq(&self, x: FlatId, y: FlatId) -> Result<bool> {
        Ok(self.subsystem(x)?.is_subset(self.subsystem(y)?))
    }

    /// `μ(0̂, X)` for every flat, indexed by id. Computed once.
    pub fn mobius_table(&self) -> &[i64] {
        self.mobius.get_or_init(|| self.compute_mobius())
    }

    fn compute_mobius(&self) -> Vec<i64> {
        let n = self.flats.len();
        let mut mu = vec![0i64; n];
        mu[0] = 1;
        for k in 1..=self.rank() {
            let range = self.ids_of_rank(k);
            let (done, _) = mu.split_at(range.start);
            let values: Vec<i64> = match &self.lower {
                Some((start, adj)) => range
                    .clone()
                    .into_par_iter()
                    .map_init(
                        || (vec![u32::MAX; n], Vec::new()),
                        |(stamp, stack), x| {
                            // Walk the strict lower set through lower covers.
                            let mark = x as u32;
                            let mut sum = 0i64;
                            stack.clear();
                            stack.push(x);
                            while let Some(z) = stack.pop() {
                                for &w in &adj[start[z]..start[z + 1]] {
                                    if stamp[w] != mark {
                                        stamp[w] = mark;
                                        sum += done[w];
                                        stack.push(w);
                                    }
                                }
                            }
                            -sum
                        },
                    )
                    .collect(),
                None => range
                    .clone()
                    .into_par_iter()
                    .map(|x| {
                        let sx = self.flats[x].subsystem;
                        let below: i64 = self.flats[..range.start]
                            .iter()
                            .zip(done)
                            .filter(|(f, _)| f.subsystem.is_subset(sx))
                            .map(|(_, m)| m)
                            .sum();
                        -below
                    })
                    .collect(),
            };
            mu[range].copy_from_slice(&values);
        }
        mu
    }

    /// Characteristic polynomial `Σ_X μ(0̂, X) t^{r - rk X}`, coefficients
    /// indexed by the power of `t`.
    pub fn char_poly(&self) -> Vec<i64> {
        let r = self.rank();
        let mu = self.mobius_table();
        let mut p = vec![0i64; r + 1];
        for (f, m) in self.flats.iter().zip(mu) {
            p[r - f.rank] += m;
        }
        p
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k > self.rank() {
            Err(Error::RankOutOfRange {
                k,
                rank: self.rank(),
            })
        } else {
            Ok(())
        }
    }

    /// Whitney number of the second kind `W_k`: the number of flats of
    /// corank `k` (rank `r - k`), which is the Betti number `f(Φ, k)`.
    pub fn whitney_second(&self, k: usize) -> Result<u64> {
        self.check_k(k)?;
        Ok(self.ids_of_rank(self.rank() - k).len() as u64)
    }

    /// `W_0..W_r`, i.e. the Betti row `f(Φ, 0..=r)`.
    pub fn betti_row(&self) -> Vec<u64> {
        let mut row = self.rank_counts();
        row.reverse();
        row
    }

    /// Whitney number of the first kind: the signed coefficient of
    /// `t^{r-k}` in the characteristic polynomial.
    pub fn whitney_first(&self, k: usize) -> Result<i64> {
        self.check_k(k)?;
        Ok(self.char_poly()[self.rank() - k])
    }
}
