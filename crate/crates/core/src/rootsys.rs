//! Root systems with exact integer coordinates.
//!
//! Roots are indexed deterministically: positive roots occupy `0..d`, sorted
//! by height and then by simple-root coefficients in decreasing
//! lexicographic order (so `α_1, …, α_r` come first), and the
//! negative of root `i` is root `i + d`. This ordering is part of the export
//! and cache contract of the command-line tool.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{bareiss_rank, Echelon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Some(match c {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }

    pub fn is_classical(self) -> bool {
        matches!(self, Family::A | Family::B | Family::C | Family::D)
    }

    pub fn admits_rank(self, rank: usize) -> bool {
        match self {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A product of irreducible Cartan types, kept in canonical order.
///
/// The empty product is the type of the empty root system and displays as
/// `trivial`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CartanType {
    factors: Vec<(Family, usize)>,
}

impl CartanType {
    pub fn irreducible(family: Family, rank: usize) -> Result<Self> {
        if !family.admits_rank(rank) {
            return Err(Error::InvalidRank { family, rank });
        }
        Ok(Self {
            factors: vec![(family, rank)],
        })
    }

    pub fn product(factors: impl IntoIterator<Item = (Family, usize)>) -> Result<Self> {
        let mut factors: Vec<_> = factors.into_iter().collect();
        for &(family, rank) in &factors {
            if !family.admits_rank(rank) {
                return Err(Error::InvalidRank { family, rank });
            }
        }
        factors.sort();
        Ok(Self { factors })
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn factors(&self) -> &[(Family, usize)] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|f| f.1).sum()
    }

    /// The single factor of an irreducible type.
    pub fn as_irreducible(&self) -> Option<(Family, usize)> {
        match self.factors.as_slice() {
            [f] => Some(*f),
            _ => None,
        }
    }

    pub fn is_classical(&self) -> bool {
        self.factors.iter().all(|f| f.0.is_classical())
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "trivial");
        }
        for (i, (family, rank)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{family}{rank}")?;
        }
        Ok(())
    }
}

impl FromStr for CartanType {
    type Err = Error;

    /// Parses `A3`, `E8`, or products such as `A1xB2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "trivial" {
            return Ok(Self::trivial());
        }
        let mut factors = Vec::new();
        for part in s.split(['x', '×']) {
            let mut chars = part.chars();
            let family = chars
                .next()
                .and_then(|c| Family::from_letter(c.to_ascii_uppercase()))
                .ok_or_else(|| Error::ParseType(s.to_string()))?;
            let digits = chars.as_str();
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::ParseType(s.to_string()));
            }
            let rank: usize = digits
                .parse()
                .map_err(|_| Error::ParseType(s.to_string()))?;
            factors.push((family, rank));
        }
        Self::product(factors)
    }
}

/// Maximum number of positive roots representable by a [`RootSet`].
pub const MAX_POSITIVE_ROOTS: usize = 128;

/// A set of positive-root indices, standing for the negation-closed set of
/// roots `{±λ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RootSet(u128);

impl RootSet {
    pub const EMPTY: RootSet = RootSet(0);

    pub fn from_bits(bits: u128) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    /// All of `0..d`.
    pub fn full(d: usize) -> Self {
        if d >= 128 {
            Self(u128::MAX)
        } else {
            Self((1u128 << d) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        Self(1u128 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < 128 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u128 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Self(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

impl FromIterator<usize> for RootSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = RootSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

/// An irreducible root system together with its affine data.
#[derive(Debug, Clone)]
pub struct RootSystem {
    ctype: CartanType,
    rank: usize,
    dim: usize,
    d: usize,
    /// Ambient coordinates of all `2d` roots, stride `dim`.
    coords: Vec<i64>,
    /// Simple-root coefficients of all `2d` roots, stride `rank`.
    coeffs: Vec<i64>,
    norms: Vec<i64>,
    simples: Vec<usize>,
    highest: usize,
    labels: Vec<u32>,
    affine_adjacency: Vec<Vec<u32>>,
    lookup: HashMap<Vec<i64>, usize>,
    reflect_table: Vec<u16>,
    sum_table: Vec<u16>,
}

const NO_ROOT: u16 = u16::MAX;

fn unit(dim: usize, i: usize, scale: i64) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i] = scale;
    v
}

fn diff(dim: usize, i: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i] = 1;
    v[j] = -1;
    v
}

/// E8 simple roots in Bourbaki numbering, with coordinates doubled.
fn e8_simples() -> Vec<Vec<i64>> {
    let mut s = vec![
        vec![1, -1, -1, -1, -1, -1, -1, 1],
        vec![2, 2, 0, 0, 0, 0, 0, 0],
    ];
    for i in 0..6 {
        let mut v = vec![0; 8];
        v[i] = -2;
        v[i + 1] = 2;
        s.push(v);
    }
    s
}

/// Simple roots in the standard (Bourbaki) realization.
fn simple_roots(family: Family, r: usize) -> (usize, Vec<Vec<i64>>) {
    match family {
        Family::A => (r + 1, (0..r).map(|i| diff(r + 1, i, i + 1)).collect()),
        Family::B | Family::C | Family::D => {
            let mut s: Vec<_> = (0..r - 1).map(|i| diff(r, i, i + 1)).collect();
            s.push(match family {
                Family::B => unit(r, r - 1, 1),
                Family::C => unit(r, r - 1, 2),
                _ => {
                    let mut v = vec![0; r];
                    v[r - 2] = 1;
                    v[r - 1] = 1;
                    v
                }
            });
            (r, s)
        }
        Family::E => (8, e8_simples().into_iter().take(r).collect()),
        Family::F => (
            4,
            vec![
                vec![0, 2, -2, 0],
                vec![0, 0, 2, -2],
                vec![0, 0, 0, 2],
                vec![1, -1, -1, -1],
            ],
        ),
        Family::G => (3, vec![vec![1, -1, 0], vec![-2, 1, 1]]),
    }
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Number of positive roots of an irreducible type.
pub fn positive_root_count(family: Family, r: usize) -> usize {
    match family {
        Family::A => r * (r + 1) / 2,
        Family::B | Family::C => r * r,
        Family::D => r * (r - 1),
        Family::E => [36, 63, 120][r - 6],
        Family::F => 24,
        Family::G => 6,
    }
}

impl RootSystem {
    /// Builds the root system of an irreducible type by closing the simple
    /// roots under simple reflections.
    pub fn build(ctype: &CartanType) -> Result<Self> {
        let (family, r) = ctype
            .as_irreducible()
            .ok_or_else(|| Error::ParseType(format!("{ctype} is not irreducible")))?;
        let d_expected = positive_root_count(family, r);
        if d_expected > MAX_POSITIVE_ROOTS {
            return Err(Error::TooLarge {
                ctype: ctype.clone(),
                positives: d_expected,
                max: MAX_POSITIVE_ROOTS,
            });
        }
        let (dim, simple) = simple_roots(family, r);
        let simple_norms: Vec<i64> = simple.iter().map(|a| dot(a, a)).collect();

        // Positive roots as (coords, coeffs), grown from the simple roots.
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut pos: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
        for (i, a) in simple.iter().enumerate() {
            seen.insert(a.clone(), pos.len());
            pos.push((a.clone(), unit(r, i, 1)));
        }
        let mut head = 0;
        while head < pos.len() {
            let (v, c) = pos[head].clone();
            head += 1;
            for (i, a) in simple.iter().enumerate() {
                let pairing = 2 * dot(&v, a) / simple_norms[i];
                if pairing == 0 {
                    continue;
                }
                let nc: Vec<i64> = c
                    .iter()
                    .enumerate()
                    .map(|(j, &x)| if j == i { x - pairing } else { x })
                    .collect();
                if nc.iter().any(|&x| x < 0) {
                    continue;
                }
                let nv: Vec<i64> = v.iter().zip(a).map(|(x, y)| x - pairing * y).collect();
                if !seen.contains_key(&nv) {
                    seen.insert(nv.clone(), pos.len());
                    pos.push((nv, nc));
                }
            }
        }
        let d = pos.len();
        debug_assert_eq!(d, d_expected);

        pos.sort_by(|a, b| {
            let ha: i64 = a.1.iter().sum();
            let hb: i64 = b.1.iter().sum();
            ha.cmp(&hb).then_with(|| b.1.cmp(&a.1))
        });

        let mut coords = Vec::with_capacity(2 * d * dim);
        let mut coeffs = Vec::with_capacity(2 * d * r);
        for (v, c) in &pos {
            coords.extend_from_slice(v);
            coeffs.extend_from_slice(c);
        }
        for (v, c) in &pos {
            coords.extend(v.iter().map(|x| -x));
            coeffs.extend(c.iter().map(|x| -x));
        }
        let mut lookup = HashMap::with_capacity(2 * d);
        for i in 0..2 * d {
            lookup.insert(coords[i * dim..(i + 1) * dim].to_vec(), i);
        }
        let norms: Vec<i64> = (0..2 * d)
            .map(|i| {
                let v = &coords[i * dim..(i + 1) * dim];
                dot(v, v)
            })
            .collect();
        let simples: Vec<usize> = simple.iter().map(|a| lookup[a]).collect();
        let highest = (0..d)
            .max_by_key(|&i| coeffs[i * r..(i + 1) * r].iter().sum::<i64>())
            .expect("nonempty root system");
        let mut labels = vec![1u32];
        labels.extend(
            coeffs[highest * r..(highest + 1) * r]
                .iter()
                .map(|&x| x as u32),
        );

        let mut rs = RootSystem {
            ctype: ctype.clone(),
            rank: r,
            dim,
            d,
            coords,
            coeffs,
            norms,
            simples,
            highest,
            labels,
            affine_adjacency: Vec::new(),
            lookup,
            reflect_table: Vec::new(),
            sum_table: Vec::new(),
        };
        rs.fill_tables();
        rs.affine_adjacency = rs.compute_affine_adjacency();
        Ok(rs)
    }

    fn fill_tables(&mut self) {
        let n = 2 * self.d;
        let mut reflect = vec![NO_ROOT; n * n];
        let mut sum = vec![NO_ROOT; n * n];
        let mut buf = vec![0i64; self.dim];
        for m in 0..n {
            let mv = self.root(m);
            for t in 0..n {
                let tv = self.root(t);
                let pairing = 2 * dot(tv, mv) / self.norms[m];
                for k in 0..self.dim {
                    buf[k] = tv[k] - pairing * mv[k];
                }
                reflect[m * n + t] = self.lookup[&buf] as u16;
                for k in 0..self.dim {
                    buf[k] = tv[k] + mv[k];
                }
                if let Some(&s) = self.lookup.get(&buf) {
                    sum[m * n + t] = s as u16;
                }
            }
        }
        self.reflect_table = reflect;
        self.sum_table = sum;
    }

    fn compute_affine_adjacency(&self) -> Vec<Vec<u32>> {
        let mut nodes = vec![self.neg(self.highest)];
        nodes.extend_from_slice(&self.simples);
        let n = nodes.len();
        let mut adj = vec![vec![0u32; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let (a, b) = (self.root(nodes[i]), self.root(nodes[j]));
                    let aij = 2 * dot(a, b) / self.norms[nodes[j]];
                    let aji = 2 * dot(a, b) / self.norms[nodes[i]];
                    adj[i][j] = (aij * aji) as u32;
                }
            }
        }
        adj
    }

    pub fn ctype(&self) -> &CartanType {
        &self.ctype
    }

    pub fn family(&self) -> Family {
        self.ctype.factors()[0].0
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Ambient dimension of the coordinate realization.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of positive roots.
    pub fn num_positive(&self) -> usize {
        self.d
    }

    pub fn num_roots(&self) -> usize {
        2 * self.d
    }

    pub fn root(&self, i: usize) -> &[i64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Coefficients of root `i` in the simple roots.
    pub fn simple_coefficients(&self, i: usize) -> &[i64] {
        &self.coeffs[i * self.rank..(i + 1) * self.rank]
    }

    pub fn height(&self, i: usize) -> i64 {
        self.simple_coefficients(i).iter().sum()
    }

    pub fn norm(&self, i: usize) -> i64 {
        self.norms[i]
    }

    pub fn index_of(&self, coords: &[i64]) -> Option<usize> {
        self.lookup.get(coords).copied()
    }

    pub fn neg(&self, i: usize) -> usize {
        if i < self.d {
            i + self.d
        } else {
            i - self.d
        }
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.d
    }

    /// The positive root among `±λ_i`.
    pub fn positive_rep(&self, i: usize) -> usize {
        i % self.d
    }

    pub fn positives(&self) -> RootSet {
        RootSet::full(self.d)
    }

    /// Simple root indices `α_1..α_r`, in Bourbaki numbering.
    pub fn simples(&self) -> &[usize] {
        &self.simples
    }

    pub fn highest(&self) -> usize {
        self.highest
    }

    /// Dynkin labels `m_0 = 1, m_1..m_r`.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Edge multiplicities `a_ij a_ji` of the affine Dynkin diagram, node 0
    /// being the affine root `-θ`.
    pub fn affine_adjacency(&self) -> &[Vec<u32>] {
        &self.affine_adjacency
    }

    /// Roots of the affine nodes: `-θ` followed by the simple roots.
    pub fn affine_nodes(&self) -> Vec<usize> {
        let mut nodes = vec![self.neg(self.highest)];
        nodes.extend_from_slice(&self.simples);
        nodes
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < 2 * self.d {
            Ok(())
        } else {
            Err(Error::InvalidRoot(i))
        }
    }

    /// Index of `s_mirror(target)`.
    pub fn reflect(&self, mirror: usize, target: usize) -> Result<usize> {
        self.check(mirror)?;
        self.check(target)?;
        Ok(self.reflect_unchecked(mirror, target))
    }

    pub(crate) fn reflect_unchecked(&self, mirror: usize, target: usize) -> usize {
        self.reflect_table[mirror * 2 * self.d + target] as usize
    }

    /// Index of `λ_a + λ_b` if it is a root.
    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        match self.sum_table[a * 2 * self.d + b] {
            NO_ROOT => None,
            s => Some(s as usize),
        }
    }

    /// Maps arbitrary root indices to the set of their positive representatives.
    pub fn root_set<I: IntoIterator<Item = usize>>(&self, roots: I) -> Result<RootSet> {
        let mut s = RootSet::EMPTY;
        for i in roots {
            self.check(i)?;
            s.insert(self.positive_rep(i));
        }
        Ok(s)
    }

    /// Applies `s_mirror` to every root of a negation-closed set.
    pub fn reflect_set(&self, mirror: usize, s: RootSet) -> RootSet {
        s.iter()
            .map(|i| self.positive_rep(self.reflect_unchecked(mirror, i)))
            .collect()
    }

    /// Echelon basis for the span of `s`.
    pub fn echelon(&self, s: RootSet) -> Echelon {
        let mut e = Echelon::new(self.dim);
        for i in s.iter() {
            if e.rank() == self.rank {
                break;
            }
            e.insert(self.root(i));
        }
        e
    }

    /// `Span_Q(S) ∩ Φ`.
    pub fn closure(&self, s: RootSet) -> RootSet {
        let e = self.echelon(s);
        if e.rank() == self.rank {
            return self.positives();
        }
        self.positives()
            .iter()
            .filter(|&i| s.contains(i) || e.contains(self.root(i)))
            .collect()
    }

    /// Dimension of the span, by fraction-free elimination.
    pub fn subsystem_rank(&self, s: RootSet) -> usize {
        let rows: Vec<&[i64]> = s.iter().map(|i| self.root(i)).collect();
        bareiss_rank(&rows)
    }

    /// Additive closedness of the negation-closed set `±S`.
    pub fn is_closed(&self, s: RootSet) -> bool {
        let members: Vec<usize> = s.iter().collect();
        for (k, &a) in members.iter().enumerate() {
            for &b in &members[k + 1..] {
                for t in [b, self.neg(b)] {
                    if let Some(c) = self.sum(a, t) {
                        if !s.contains(self.positive_rep(c)) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// The smallest closed subsystem containing `±S`.
    pub fn additive_closure(&self, s: RootSet) -> RootSet {
        let mut cur = s;
        loop {
            let mut next = cur;
            let members: Vec<usize> = cur.iter().collect();
            for (k, &a) in members.iter().enumerate() {
                for &b in &members[k + 1..] {
                    for t in [b, self.neg(b)] {
                        if let Some(c) = self.sum(a, t) {
                            next.insert(self.positive_rep(c));
                        }
                    }
                }
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Base of the root subsystem `±S`: the positive roots (relative to a
    /// generic functional) that are not sums of two positive roots of `S`.
    /// Returned as root indices with their sign relative to `Φ⁺`.
    pub fn subsystem_base(&self, s: RootSet) -> Vec<usize> {
        let m = 1 + self.coords.iter().map(|x| x.abs()).max().unwrap_or(0);
        let weights: Vec<i64> = (0..self.dim)
            .map(|k| m.pow((self.dim - 1 - k) as u32))
            .collect();
        let positive_part: Vec<usize> = s
            .iter()
            .map(|i| {
                if dot(self.root(i), &weights) > 0 {
                    i
                } else {
                    self.neg(i)
                }
            })
            .collect();
        let in_part: std::collections::HashSet<usize> = positive_part.iter().copied().collect();
        positive_part
            .iter()
            .copied()
            .filter(|&nu| {
                !positive_part.iter().any(|&lam| {
                    lam != nu
                        && self
                            .sum(nu, self.neg(lam))
                            .is_some_and(|x| in_part.contains(&x))
                })
            })
            .collect()
    }

    /// Cartan type of a span-closed subsystem, read off its Dynkin diagram.
    pub fn classify_subsystem(&self, s: RootSet) -> Result<CartanType> {
        if self.closure(s) != s {
            return Err(Error::NotSpanClosed);
        }
        self.classify_unchecked(s)
    }

    pub(crate) fn classify_unchecked(&self, s: RootSet) -> Result<CartanType> {
        let base = self.subsystem_base(s);
        let n = base.len();
        let cartan = |i: usize, j: usize| -> i64 {
            2 * dot(self.root(base[i]), self.root(base[j])) / self.norms[base[j]]
        };
        let mut component = vec![usize::MAX; n];
        let mut factors = Vec::new();
        for start in 0..n {
            if component[start] != usize::MAX {
                continue;
            }
            let mut nodes = vec![start];
            component[start] = start;
            let mut head = 0;
            while head < nodes.len() {
                let u = nodes[head];
                head += 1;
                for v in 0..n {
                    if v != u && component[v] == usize::MAX && cartan(u, v) != 0 {
                        component[v] = start;
                        nodes.push(v);
                    }
                }
            }
            factors.push(self.classify_connected(&base, &nodes, &cartan)?);
        }
        CartanType::product(factors)
    }

    fn classify_connected(
        &self,
        base: &[usize],
        nodes: &[usize],
        cartan: &dyn Fn(usize, usize) -> i64,
    ) -> Result<(Family, usize)> {
        let n = nodes.len();
        let bad = |why: &str| Error::UnrecognizedDiagram(format!("{n} nodes: {why}"));
        if n == 1 {
            return Ok((Family::A, 1));
        }
        let mut edges = Vec::new();
        let mut degree = vec![0usize; n];
        for a in 0..n {
            for b in a + 1..n {
                let m = cartan(nodes[a], nodes[b]) * cartan(nodes[b], nodes[a]);
                if m != 0 {
                    edges.push((a, b, m));
                    degree[a] += 1;
                    degree[b] += 1;
                }
            }
        }
        if edges.len() != n - 1 {
            return Err(bad("not a tree"));
        }
        if edges.iter().any(|e| e.2 == 3) {
            return if n == 2 {
                Ok((Family::G, 2))
            } else {
                Err(bad("triple edge"))
            };
        }
        if let Some(&(a, b, _)) = edges.iter().find(|e| e.2 == 2) {
            if n == 2 {
                return Ok((Family::B, 2));
            }
            if degree.iter().any(|&x| x > 2) {
                return Err(bad("branched multiply laced"));
            }
            if degree[a] == 2 && degree[b] == 2 {
                return if n == 4 {
                    Ok((Family::F, 4))
                } else {
                    Err(bad("inner double edge"))
                };
            }
            let (leaf, other) = if degree[a] == 1 { (a, b) } else { (b, a) };
            let leaf_short = self.norms[base[nodes[leaf]]] < self.norms[base[nodes[other]]];
            return Ok((if leaf_short { Family::B } else { Family::C }, n));
        }
        let branch: Vec<usize> = (0..n).filter(|&v| degree[v] > 2).collect();
        match branch.as_slice() {
            [] => Ok((Family::A, n)),
            [c] if degree[*c] == 3 => {
                // Arm lengths from the branch node.
                let mut arms = Vec::new();
                for &(a, b, _) in &edges {
                    let start = if a == *c {
                        b
                    } else if b == *c {
                        a
                    } else {
                        continue;
                    };
                    let (mut prev, mut cur, mut len) = (*c, start, 1);
                    loop {
                        let next = edges.iter().find_map(|&(x, y, _)| {
                            if x == cur && y != prev {
                                Some(y)
                            } else if y == cur && x != prev {
                                Some(x)
                            } else {
                                None
                            }
                        });
                        match next {
                            Some(nx) => {
                                prev = cur;
                                cur = nx;
                                len += 1;
                            }
                            None => break,
                        }
                    }
                    arms.push(len);
                }
                arms.sort();
                match arms.as_slice() {
                    [1, 1, _] => Ok((Family::D, n)),
                    [1, 2, 2] => Ok((Family::E, 6)),
                    [1, 2, 3] => Ok((Family::E, 7)),
                    [1, 2, 4] => Ok((Family::E, 8)),
                    _ => Err(bad("unknown branched diagram")),
                }
            }
            _ => Err(bad("multiple branch nodes")),
        }
    }
}
