//! Partitions and `Z_n`-decorated partitions.
//!
//! A [`MultiPartition`] is an `n`-tuple of partitions. Read as a conjugacy class of
//! `Z_n ≀ S_d` it is the multiset of parts `ξ^i·d` (size `d`, twist `i`); read as an
//! irreducible representation it is the tuple `(λ_0, …, λ_{n-1})`. Both readings share
//! the text format `n:(d^i,d^i,…)`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

pub fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, x| acc * x)
}

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<u32>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Row length of row `i` (0-based), zero past the end.
    pub fn row(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Partition {
        let cols = self.row(0);
        Partition(
            (0..cols)
                .map(|j| self.0.iter().filter(|&&r| r > j).count() as u32)
                .collect(),
        )
    }

    /// Boxes as 0-based `(row, column)`, row by row.
    pub fn boxes(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| (0..r).map(move |j| (i as u32, j)))
    }

    /// Content `j − i` of a box.
    pub fn content(i: u32, j: u32) -> i64 {
        j as i64 - i as i64
    }

    /// Arm and leg of box `(i, j)`.
    pub fn arm_leg(&self, i: u32, j: u32) -> (u32, u32) {
        let arm = self.row(i as usize) - j - 1;
        let leg = self.0.iter().skip(i as usize + 1).filter(|&&r| r > j).count() as u32;
        (arm, leg)
    }

    pub fn hook_length(&self, i: u32, j: u32) -> u32 {
        let (a, l) = self.arm_leg(i, j);
        a + l + 1
    }

    /// Number of standard Young tableaux, by the hook length formula.
    pub fn dim(&self) -> BigUint {
        let hooks: BigUint = self
            .boxes()
            .map(|(i, j)| BigUint::from(self.hook_length(i, j)))
            .product();
        factorial(self.size() as u64) / hooks
    }

    /// Multiplicities of each part size.
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &p in &self.0 {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// Classical centralizer order `∏ k^{m_k} m_k!`.
    pub fn z(&self) -> BigUint {
        self.multiplicities()
            .iter()
            .map(|(&k, &m)| BigUint::from(k).pow(m) * factorial(m as u64))
            .product()
    }

    pub fn contains(&self, other: &Partition) -> bool {
        (0..other.len()).all(|i| self.row(i) >= other.row(i))
    }

    /// All partitions of `m`, in reverse lexicographic order.
    pub fn all(m: u32) -> Vec<Partition> {
        fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(m, m, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;
    /// Accepts `4,3,3,1`, `(4,3,3,1)` or `()`.
    fn from_str(s: &str) -> Result<Partition> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if body.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = body
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad part `{p}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Partition::new(parts))
    }
}

/// An `n`-tuple of partitions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiPartition {
    n: u32,
    comps: Vec<Partition>,
}

impl MultiPartition {
    pub fn new(n: u32, comps: Vec<Partition>) -> Result<MultiPartition> {
        if n == 0 || comps.len() != n as usize {
            return Err(Error::ModulusMismatch(n, comps.len() as u32));
        }
        Ok(MultiPartition { n, comps })
    }

    pub fn empty(n: u32) -> MultiPartition {
        MultiPartition {
            n,
            comps: vec![Partition::empty(); n as usize],
        }
    }

    /// From the multiset view: parts `(size, twist)`, twists taken mod `n`.
    pub fn from_parts(n: u32, parts: &[(u32, i64)]) -> MultiPartition {
        let mut comps = vec![Vec::new(); n as usize];
        for &(d, i) in parts {
            comps[i.rem_euclid(n as i64) as usize].push(d);
        }
        MultiPartition {
            n,
            comps: comps.into_iter().map(Partition::new).collect(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn components(&self) -> &[Partition] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &Partition {
        &self.comps[i]
    }

    /// Parts `(size, twist)` in canonical order: size descending, then twist ascending.
    pub fn parts(&self) -> Vec<(u32, u32)> {
        let mut v: Vec<(u32, u32)> = self
            .comps
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.parts().iter().map(move |&d| (d, i as u32)))
            .collect();
        v.sort_by_key(|&(d, i)| (Reverse(d), i));
        v
    }

    /// `|μ|`.
    pub fn size(&self) -> u32 {
        self.comps.iter().map(Partition::size).sum()
    }

    /// `l(μ)`.
    pub fn len(&self) -> usize {
        self.comps.iter().map(Partition::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(|μ^0|, …, |μ^{n-1}|)`.
    pub fn component_sizes(&self) -> Vec<u32> {
        self.comps.iter().map(Partition::size).collect()
    }

    /// `|Aut(μ)|`: permutations of equal decorated parts.
    pub fn aut(&self) -> BigUint {
        self.comps
            .iter()
            .flat_map(|p| p.multiplicities().into_values())
            .map(|m| factorial(m as u64))
            .product()
    }

    /// Centralizer order `z_μ = |Aut(μ)| ∏ n·d`.
    pub fn z(&self) -> BigUint {
        let prod: BigUint = self
            .parts()
            .iter()
            .map(|&(d, _)| BigUint::from(self.n) * d)
            .product();
        self.aut() * prod
    }

    /// `−μ`: every twist negated.
    pub fn negate(&self) -> MultiPartition {
        let parts: Vec<(u32, i64)> = self.parts().iter().map(|&(d, i)| (d, -(i as i64))).collect();
        MultiPartition::from_parts(self.n, &parts)
    }

    /// `μ^tw = (∅, μ^1, …, μ^{n-1})`.
    pub fn tw(&self) -> MultiPartition {
        let mut comps = self.comps.clone();
        comps[0] = Partition::empty();
        MultiPartition { n: self.n, comps }
    }

    /// `μ^0 = (μ^0, ∅, …, ∅)`.
    pub fn untwisted(&self) -> MultiPartition {
        let mut comps = vec![Partition::empty(); self.n as usize];
        comps[0] = self.comps[0].clone();
        MultiPartition { n: self.n, comps }
    }

    pub fn is_twisted(&self) -> bool {
        self.comps[0].is_empty()
    }

    pub fn is_untwisted(&self) -> bool {
        self.comps[1..].iter().all(Partition::is_empty)
    }

    /// The underlying partition forgetting twists.
    pub fn underlying(&self) -> Partition {
        Partition::new(self.parts().iter().map(|&(d, _)| d).collect())
    }

    /// `g_k(μ) = {ξ^{dk − i} d}`, an involution for each `k`.
    pub fn g(&self, k: i64) -> MultiPartition {
        let parts: Vec<(u32, i64)> = self
            .parts()
            .iter()
            .map(|&(d, i)| (d, d as i64 * k - i as i64))
            .collect();
        MultiPartition::from_parts(self.n, &parts)
    }

    /// Multiset union `μ ⊔ ν`.
    pub fn union(&self, other: &MultiPartition) -> Result<MultiPartition> {
        if self.n != other.n {
            return Err(Error::ModulusMismatch(self.n, other.n));
        }
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| Partition::new(a.parts().iter().chain(b.parts()).copied().collect()))
            .collect();
        Ok(MultiPartition { n: self.n, comps })
    }

    /// `μ ∪ {ξ^i d}`.
    pub fn with_part(&self, d: u32, i: i64) -> MultiPartition {
        let mut parts: Vec<(u32, i64)> = self.parts().iter().map(|&(a, b)| (a, b as i64)).collect();
        parts.push((d, i));
        MultiPartition::from_parts(self.n, &parts)
    }

    /// `Σ_j j·|λ_j|`, the exponent in the twist of characters under `g_k`.
    pub fn weighted_twist(&self) -> u64 {
        self.comps
            .iter()
            .enumerate()
            .map(|(j, p)| j as u64 * p.size() as u64)
            .sum()
    }

    /// All `n`-tuples of total size `d`, in a fixed order.
    pub fn all(n: u32, d: u32) -> Vec<MultiPartition> {
        let mut out = Vec::new();
        for sizes in compositions(d, n as usize) {
            let mut acc: Vec<Vec<Partition>> = vec![Vec::new()];
            for &s in &sizes {
                let ps = Partition::all(s);
                acc = acc
                    .into_iter()
                    .flat_map(|prefix| {
                        ps.iter().map(move |p| {
                            let mut v = prefix.clone();
                            v.push(p.clone());
                            v
                        })
                    })
                    .collect();
            }
            out.extend(acc.into_iter().map(|comps| MultiPartition { n, comps }));
        }
        out
    }
}

/// Weak compositions of `d` into `k` parts, lexicographically decreasing.
pub fn compositions(d: u32, k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if k == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in compositions(d - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl fmt::Display for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts().iter().map(|(d, i)| format!("{d}^{i}")).collect();
        write!(f, "{}:({})", self.n, s.join(","))
    }
}

impl FromStr for MultiPartition {
    type Err = Error;
    /// `n:(d^i,…)`; `,` and `|` both separate parts and a bare `d` means twist 0.
    fn from_str(s: &str) -> Result<MultiPartition> {
        let (n_str, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `n:(…)`, got `{s}`")))?;
        let n: u32 = n_str
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad modulus `{n_str}`: {e}")))?;
        if n == 0 {
            return Err(Error::Parse("modulus must be positive".into()));
        }
        let body = body.trim();
        let body = body
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("missing parentheses in `{s}`")))?;
        let mut parts = Vec::new();
        for tok in body.split([',', '|']) {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            let (d, i) = tok.split_once('^').unwrap_or((tok, "0"));
            let d: u32 = d
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad part `{tok}`: {e}")))?;
            let i: i64 = i
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad twist `{tok}`: {e}")))?;
            if d == 0 {
                return Err(Error::Parse(format!("zero part in `{s}`")));
            }
            if i < 0 || i >= n as i64 {
                return Err(Error::Parse(format!("twist {i} out of range 0..{n}")));
            }
            parts.push((d, i));
        }
        Ok(MultiPartition::from_parts(n, &parts))
    }
}

/// Bookkeeping for the invertibility argument: part order, twisting partitions,
/// and the index sets `B_d`, `C_d`.
pub mod appendix {
    use super::*;

    /// Sort key: size descending, then `i mod gcd(d, n)`, then `i`.
    pub fn part_key(n: u32, (d, i): (u32, u32)) -> (Reverse<u32>, u32, u32) {
        (Reverse(d), i % d.gcd(&n), i)
    }

    /// Parts `(size, twist)` in the appendix order.
    pub fn ordered_parts(mu: &MultiPartition) -> Vec<(u32, u32)> {
        let mut v = mu.parts();
        v.sort_by_key(|&p| part_key(mu.n(), p));
        v
    }

    /// `t(μ)`: the twists in appendix order.
    pub fn twisting_partition(mu: &MultiPartition) -> Vec<u32> {
        ordered_parts(mu).iter().map(|&(_, i)| i).collect()
    }

    /// `μ̃`: `μ` with its first part (in appendix order) removed.
    pub fn tilde(mu: &MultiPartition) -> MultiPartition {
        let parts: Vec<(u32, i64)> = ordered_parts(mu)
            .iter()
            .skip(1)
            .map(|&(d, i)| (d, i as i64))
            .collect();
        MultiPartition::from_parts(mu.n(), &parts)
    }

    /// Data attached to a twisted `η` through its first part `(η_1, h_1)`.
    #[derive(Debug, Clone, PartialEq, Eq)]
    pub struct FirstPart {
        pub eta1: u32,
        pub h1: u32,
        /// `gcd(η_1, n)`.
        pub c: u32,
        /// `h_1 mod c`.
        pub h1_bar: u32,
        /// `{k ∈ 1..n-1 : −h_1 + η_1 k ≡ −h̄_1 (mod n)}` in increasing order.
        pub sigma: Vec<u32>,
    }

    impl FirstPart {
        pub fn of(eta: &MultiPartition) -> Result<FirstPart> {
            let n = eta.n();
            let &(eta1, h1) = ordered_parts(eta)
                .first()
                .ok_or_else(|| Error::Appendix("empty multipartition".into()))?;
            if h1 == 0 || !eta.is_twisted() {
                return Err(Error::Appendix(format!("{eta} has an untwisted part")));
            }
            let c = eta1.gcd(&n);
            let h1_bar = h1 % c;
            let nn = n as i64;
            let sigma = (1..n)
                .filter(|&k| {
                    (-(h1 as i64) + eta1 as i64 * k as i64 + h1_bar as i64).rem_euclid(nn) == 0
                })
                .collect();
            Ok(FirstPart {
                eta1,
                h1,
                c,
                h1_bar,
                sigma,
            })
        }

        /// `k(η)`: `k_{h̄_1}` if `1 ≤ h_1 < c`, else `k_{h̄_1+1}` (1-indexed).
        pub fn k(&self) -> Result<u32> {
            let idx = if (1..self.c).contains(&self.h1) {
                self.h1_bar
            } else {
                self.h1_bar + 1
            } as usize;
            if idx == 0 || idx > self.sigma.len() {
                return Err(Error::Appendix(format!(
                    "index {idx} into Σ of size {} (h1 = {}, c = {})",
                    self.sigma.len(),
                    self.h1,
                    self.c
                )));
            }
            Ok(self.sigma[idx - 1])
        }
    }

    /// `B_d`: twisted `η` with `1 ≤ |η| ≤ d`.
    pub fn b_set(n: u32, d: u32) -> Vec<MultiPartition> {
        (1..=d)
            .flat_map(|e| MultiPartition::all(n, e))
            .filter(MultiPartition::is_twisted)
            .collect()
    }

    /// One row label of `C_d` with the `η` it came from.
    #[derive(Debug, Clone, PartialEq, Eq, Hash)]
    pub struct RowLabel {
        pub mu: MultiPartition,
        pub k: u32,
        pub eta: MultiPartition,
    }

    /// `C_d`: `μ = {ξ^0 η_1} ⊔ −g_k(η̃)` with `k = k(η)`, for each `η ∈ B_d`.
    ///
    /// Errors if two `η` produce the same `(μ, k)`, since then `|C_d| < |B_d|`.
    pub fn c_set(n: u32, d: u32) -> Result<Vec<RowLabel>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for eta in b_set(n, d) {
            let fp = FirstPart::of(&eta)?;
            let k = fp.k()?;
            let rest = tilde(&eta).g(k as i64).negate();
            let mu = rest.with_part(fp.eta1, 0);
            if !seen.insert((mu.clone(), k)) {
                return Err(Error::Appendix(format!(
                    "({mu}, k={k}) arises from two different eta"
                )));
            }
            out.push(RowLabel { mu, k, eta });
        }
        Ok(out)
    }
}
