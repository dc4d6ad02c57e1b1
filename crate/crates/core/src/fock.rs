//! Maya diagrams, `n`-quotients, colored diagrams, border strips, and the
//! (wreath) Fock space operators `α_{-k}`, `E_{k,k}`, `F_T`.
//!
//! Positions are stored as integers: index `s` stands for the half-integer `s + 1/2`.
//! The partition `ρ` occupies `{ρ_i − i : i ≥ 1}`, so the vacuum fills every negative index.
//! Interlacing sends index `s` of the `i`-th Maya diagram to `n·s + i`.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;

use crate::cyclo::{CycNum, CyclotomicField};
use crate::error::{Error, Result};
use crate::partitions::{MultiPartition, Partition};

/// A Maya diagram as its finite difference from the vacuum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MayaState {
    /// Occupied indices `s ≥ 0`.
    occupied: BTreeSet<i64>,
    /// Vacant indices `s < 0`.
    vacant: BTreeSet<i64>,
}

/// First `count` Maya indices `ρ_i − i` of a partition, decreasing.
pub fn positions(p: &Partition, count: usize) -> Vec<i64> {
    (1..=count)
        .map(|i| p.row(i - 1) as i64 - i as i64)
        .collect()
}

/// Read a partition and its charge off the occupied indices `≥ low` (everything below
/// `low` occupied). `occ` must be decreasing.
fn from_window(occ: &[i64], low: i64) -> (i64, Partition) {
    let charge = occ.len() as i64 + low;
    let parts = occ
        .iter()
        .enumerate()
        .map(|(j, &s)| (s + j as i64 + 1 - charge) as u32)
        .collect();
    (charge, Partition::new(parts))
}

impl MayaState {
    pub fn vacuum() -> MayaState {
        MayaState {
            occupied: BTreeSet::new(),
            vacant: BTreeSet::new(),
        }
    }

    pub fn from_partition(p: &Partition) -> MayaState {
        let n = p.len() + p.row(0) as usize + 1;
        let occ: BTreeSet<i64> = positions(p, n).into_iter().collect();
        let low = -(n as i64);
        MayaState {
            occupied: occ.iter().copied().filter(|&s| s >= 0).collect(),
            vacant: (low..0).filter(|s| !occ.contains(s)).collect(),
        }
    }

    pub fn is_occupied(&self, s: i64) -> bool {
        if s >= 0 {
            self.occupied.contains(&s)
        } else {
            !self.vacant.contains(&s)
        }
    }

    pub fn charge(&self) -> i64 {
        self.occupied.len() as i64 - self.vacant.len() as i64
    }

    pub fn to_partition(&self) -> Result<Partition> {
        if self.charge() != 0 {
            return Err(Error::Unbalanced(1));
        }
        let low = self.vacant.iter().next().copied().unwrap_or(0).min(0) - 1;
        let occ: Vec<i64> = (low..)
            .take_while(|&s| s <= self.occupied.iter().next_back().copied().unwrap_or(-1))
            .filter(|&s| self.is_occupied(s))
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .collect();
        Ok(from_window(&occ, low).1)
    }

    /// Modified Frobenius coordinates `(α | β)`, both increasing half-integers.
    pub fn frobenius(&self) -> (Vec<Rational64>, Vec<Rational64>) {
        let half = |s: i64| Rational64::new(2 * s + 1, 2);
        let alpha = self.occupied.iter().map(|&s| half(s)).collect();
        let beta = self.vacant.iter().rev().map(|&s| -half(s)).collect();
        (alpha, beta)
    }

    pub fn from_frobenius(alpha: &[Rational64], beta: &[Rational64]) -> Result<MayaState> {
        let idx = |r: &Rational64| -> Result<i64> {
            let t = r - Rational64::new(1, 2);
            if !t.is_integer() {
                return Err(Error::Parse(format!("{r} is not a half-integer")));
            }
            Ok(t.to_integer())
        };
        let occupied = alpha.iter().map(idx).collect::<Result<BTreeSet<_>>>()?;
        let vacant = beta
            .iter()
            .map(|b| idx(&-b))
            .collect::<Result<BTreeSet<_>>>()?;
        if occupied.iter().any(|&s| s < 0) || vacant.iter().any(|&s| s >= 0) {
            return Err(Error::Parse("Frobenius coordinates must be positive".into()));
        }
        Ok(MayaState { occupied, vacant })
    }
}

/// Color `(j − i) mod n` of box `(i, j)`.
pub fn color(i: u32, j: u32, n: u32) -> u32 {
    Partition::content(i, j).rem_euclid(n as i64) as u32
}

/// Number of boxes of each color.
pub fn color_counts(p: &Partition, n: u32) -> Vec<u32> {
    let mut c = vec![0; n as usize];
    for (i, j) in p.boxes() {
        c[color(i, j, n) as usize] += 1;
    }
    c
}

pub fn is_balanced(p: &Partition, n: u32) -> bool {
    let c = color_counts(p, n);
    c.iter().all(|&x| x == c[0])
}

/// `h_k(□)`: boxes of each color in the hook of `(i, j)`.
pub fn hook_colors(p: &Partition, n: u32, i: u32, j: u32) -> Vec<u32> {
    let (arm, leg) = p.arm_leg(i, j);
    let mut h = vec![0; n as usize];
    h[color(i, j, n) as usize] += 1;
    for a in 1..=arm {
        h[color(i, j + a, n) as usize] += 1;
    }
    for l in 1..=leg {
        h[color(i + l, j, n) as usize] += 1;
    }
    h
}

/// `n_k(λ̄) = Σ_rows (row index) · (color k boxes in the row)`, rows counted from 0.
pub fn row_weights(p: &Partition, n: u32) -> Vec<u64> {
    let mut w = vec![0u64; n as usize];
    for (i, j) in p.boxes() {
        w[color(i, j, n) as usize] += i as u64;
    }
    w
}

/// De-interlace a balanced diagram into its `n`-quotient.
pub fn n_quotient(p: &Partition, n: u32) -> Result<MultiPartition> {
    let k = p.len() as i64 / n as i64 + 2;
    let low = -(n as i64) * k;
    let occ = positions(p, (-low) as usize);
    let mut comps = Vec::with_capacity(n as usize);
    for r in 0..n as i64 {
        let q: Vec<i64> = occ
            .iter()
            .filter(|&&s| (s - r).rem_euclid(n as i64) == 0)
            .map(|&s| (s - r).div_euclid(n as i64))
            .collect();
        let (charge, part) = from_window(&q, -k);
        if charge != 0 {
            return Err(Error::Unbalanced(n));
        }
        comps.push(part);
    }
    MultiPartition::new(n, comps)
}

/// Interlace an `n`-tuple of partitions into a single diagram of size `n·|λ|`.
pub fn combine(lambda: &MultiPartition) -> Partition {
    let n = lambda.n() as i64;
    let k = lambda
        .components()
        .iter()
        .map(Partition::len)
        .max()
        .unwrap_or(0)
        + 1;
    let mut occ: Vec<i64> = Vec::with_capacity(n as usize * k);
    for (r, comp) in lambda.components().iter().enumerate() {
        occ.extend(positions(comp, k).into_iter().map(|t| n * t + r as i64));
    }
    occ.sort_unstable_by(|a, b| b.cmp(a));
    from_window(&occ, -n * k as i64).1
}

/// The result of adding one border strip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strip {
    pub shape: Partition,
    /// `ht`: rows occupied minus one, equal to the number of stones jumped.
    pub height: u32,
    /// Maya index the stone moved from.
    pub from: i64,
    pub to: i64,
    /// For `n | len`: stones jumped in the quotient diagram the move lives in.
    pub beta: Option<u32>,
}

/// All ways of adding a border strip of length `len`, as Maya moves `s → s + len`.
/// `n` only affects the `beta` field.
pub fn add_border_strips(p: &Partition, len: u32, n: u32) -> Vec<Strip> {
    let count = p.len() + len as usize;
    let occ = positions(p, count);
    let set: BTreeSet<i64> = occ.iter().copied().collect();
    let low = -(count as i64);
    let occupied = |s: i64| s < low || set.contains(&s);
    let mut out = Vec::new();
    for &s in &occ {
        let t = s + len as i64;
        if occupied(t) {
            continue;
        }
        let height = set.range(s + 1..t).count() as u32;
        let beta = (len % n == 0).then(|| {
            set.range(s + 1..t)
                .filter(|&&x| (x - s).rem_euclid(n as i64) == 0)
                .count() as u32
        });
        let mut moved: Vec<i64> = occ.iter().map(|&x| if x == s { t } else { x }).collect();
        moved.sort_unstable_by(|a, b| b.cmp(a));
        out.push(Strip {
            shape: from_window(&moved, low).1,
            height,
            from: s,
            to: t,
            beta,
        });
    }
    out
}

/// Skew shape `σ/λ` is a nonempty connected set with no 2×2 block.
pub fn is_border_strip(outer: &Partition, inner: &Partition) -> bool {
    if !outer.contains(inner) || outer.size() == inner.size() {
        return false;
    }
    let cells: BTreeSet<(u32, u32)> = outer
        .boxes()
        .filter(|&(i, j)| j >= inner.row(i as usize))
        .collect();
    let has = |i: i64, j: i64| i >= 0 && j >= 0 && cells.contains(&(i as u32, j as u32));
    for &(i, j) in &cells {
        let (i, j) = (i as i64, j as i64);
        if has(i + 1, j) && has(i, j + 1) && has(i + 1, j + 1) {
            return false;
        }
    }
    // connectivity by flood fill over edge-adjacent cells
    let start = *cells.iter().next().unwrap();
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some((i, j)) = stack.pop() {
        let (i, j) = (i as i64, j as i64);
        for (a, b) in [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)] {
            if has(a, b) && seen.insert((a as u32, b as u32)) {
                stack.push((a as u32, b as u32));
            }
        }
    }
    seen.len() == cells.len()
}

/// A finite vector in the (wreath) Fock space with basis `v_λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    n: u32,
    field: &'static CyclotomicField,
    terms: BTreeMap<MultiPartition, CycNum>,
}

impl FockVector {
    pub fn zero(n: u32, field: &'static CyclotomicField) -> FockVector {
        FockVector {
            n,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn vacuum(n: u32, field: &'static CyclotomicField) -> FockVector {
        FockVector::basis(&MultiPartition::empty(n), field)
    }

    pub fn basis(lambda: &MultiPartition, field: &'static CyclotomicField) -> FockVector {
        let mut v = FockVector::zero(lambda.n(), field);
        v.add_scaled(lambda.clone(), &field.one());
        v
    }

    pub fn terms(&self) -> &BTreeMap<MultiPartition, CycNum> {
        &self.terms
    }

    pub fn coeff(&self, lambda: &MultiPartition) -> CycNum {
        self.terms
            .get(lambda)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add_scaled(&mut self, lambda: MultiPartition, c: &CycNum) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(lambda.clone()).or_insert_with(|| self.field.zero());
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&lambda);
        }
    }

    pub fn add(&mut self, other: &FockVector) {
        for (l, c) in &other.terms {
            self.add_scaled(l.clone(), c);
        }
    }

    pub fn scale(&self, c: &CycNum) -> FockVector {
        let mut v = FockVector::zero(self.n, self.field);
        for (l, x) in &self.terms {
            v.add_scaled(l.clone(), &(x * c));
        }
        v
    }

    fn map_factor<F>(&self, factor: usize, mut f: F) -> FockVector
    where
        F: FnMut(&Partition) -> Vec<(Partition, CycNum)>,
    {
        let mut out = FockVector::zero(self.n, self.field);
        for (lambda, c) in &self.terms {
            for (p, w) in f(lambda.component(factor)) {
                let mut comps = lambda.components().to_vec();
                comps[factor] = p;
                let l = MultiPartition::new(self.n, comps).expect("component count preserved");
                out.add_scaled(l, &(c * &w));
            }
        }
        out
    }

    /// `α_{-k}` on tensor factor `factor`: add `k`-strips with sign `(−1)^{ht}`.
    pub fn alpha_neg(&self, k: u32, factor: usize) -> FockVector {
        let field = self.field;
        self.map_factor(factor, |p| {
            add_border_strips(p, k, 1)
                .into_iter()
                .map(|s| {
                    let sign = if s.height % 2 == 0 { 1 } else { -1 };
                    (s.shape, field.from_i64(sign))
                })
                .collect()
        })
    }

    /// `E_{k,k}` at the half-integer `k = s + 1/2` on tensor factor `factor`.
    pub fn e_kk(&self, s: i64, factor: usize) -> FockVector {
        let field = self.field;
        self.map_factor(factor, |p| {
            let m = MayaState::from_partition(p);
            let w = if s >= 0 && m.is_occupied(s) {
                1
            } else if s < 0 && !m.is_occupied(s) {
                -1
            } else {
                0
            };
            vec![(p.clone(), field.from_i64(w))]
        })
    }

    /// `F_T = Σ_k (k²/2) E_{k,k}` on tensor factor `factor`, summed over the finitely
    /// many `k` where `E_{k,k}` acts nontrivially.
    pub fn f_t(&self, factor: usize) -> FockVector {
        let field = self.field;
        self.map_factor(factor, |p| {
            let m = MayaState::from_partition(p);
            let (alpha, beta) = m.frobenius();
            let sq = |r: &Rational64| r * r / 2;
            let ev: Rational64 = alpha.iter().map(sq).sum::<Rational64>() - beta.iter().map(sq).sum::<Rational64>();
            vec![(p.clone(), field.from_ratio(ev))]
        })
    }
}

/// Sum of contents `Σ (j − i)` over all boxes.
pub fn content_sum(p: &Partition) -> i64 {
    p.boxes().map(|(i, j)| Partition::content(i, j)).sum()
}
