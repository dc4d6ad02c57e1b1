//! Independent oracles shared by the integration tests. Nothing here goes through the
//! Fock space, the hook formulas or the Burnside sums of the library.

#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use wreath_vertex::MultiPartition;

/// Float tolerance for comparisons against the complex-valued group-algebra oracle.
pub const TOL: f64 = 1e-9;

pub fn partitions(m: u32) -> Vec<Vec<u32>> {
    fn go(m: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if m == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=m.min(max)).rev() {
            cur.push(p);
            go(m - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

/// Murnaghan-Nakayama on beta-sets: `χ^λ` of `S_m` at cycle type `mu`.
pub fn mn_char(lambda: &[u32], mu: &[u32]) -> i64 {
    let l = lambda.len();
    let beta: Vec<i64> = lambda
        .iter()
        .enumerate()
        .map(|(i, &p)| p as i64 + (l - 1 - i) as i64)
        .collect();
    mn_beta(&beta, mu)
}

fn mn_beta(beta: &[i64], mu: &[u32]) -> i64 {
    let Some((&r, rest)) = mu.split_first() else {
        return 1;
    };
    let r = r as i64;
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        let nb = b - r;
        if nb < 0 || beta.contains(&nb) {
            continue;
        }
        let jumped = beta.iter().filter(|&&x| x > nb && x < b).count();
        let mut next = beta.to_vec();
        next[i] = nb;
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        total += sign * mn_beta(&next, rest);
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C(pub f64, pub f64);

impl C {
    pub fn root(n: u32, k: i64) -> C {
        let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        C(t.cos(), t.sin())
    }
    pub fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    pub fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    pub fn scale(self, r: f64) -> C {
        C(self.0 * r, self.1 * r)
    }
    pub fn close(self, o: (f64, f64)) -> bool {
        (self.0 - o.0).abs() < TOL && (self.1 - o.1).abs() < TOL
    }
}

/// An element of `Z_n ≀ S_d` acting on `{0..d} × Z_n` by `(i, z) ↦ (perm[i], z + twist[i])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Elt {
    pub perm: Vec<usize>,
    pub twist: Vec<u32>,
}

pub struct Wreath {
    pub n: u32,
    pub d: usize,
    pub elts: Vec<Elt>,
    index: HashMap<Elt, usize>,
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(d - 1) {
        for pos in 0..d {
            let mut q = p.clone();
            q.insert(pos, d - 1);
            out.push(q);
        }
    }
    out
}

impl Wreath {
    pub fn new(n: u32, d: usize) -> Wreath {
        let mut twists = vec![vec![]];
        for _ in 0..d {
            twists = twists
                .into_iter()
                .flat_map(|t: Vec<u32>| {
                    (0..n).map(move |z| {
                        let mut t = t.clone();
                        t.push(z);
                        t
                    })
                })
                .collect();
        }
        let mut elts = Vec::new();
        for p in permutations(d) {
            for t in &twists {
                elts.push(Elt { perm: p.clone(), twist: t.clone() });
            }
        }
        let index = elts.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Wreath { n, d, elts, index }
    }

    pub fn order(&self) -> usize {
        self.elts.len()
    }

    pub fn index(&self, e: &Elt) -> usize {
        self.index[e]
    }

    /// `g ∘ h`.
    pub fn mul(&self, g: &Elt, h: &Elt) -> Elt {
        let perm = (0..self.d).map(|i| g.perm[h.perm[i]]).collect();
        let twist = (0..self.d)
            .map(|i| (h.twist[i] + g.twist[h.perm[i]]) % self.n)
            .collect();
        Elt { perm, twist }
    }

    pub fn inv(&self, g: &Elt) -> Elt {
        let mut perm = vec![0; self.d];
        let mut twist = vec![0; self.d];
        for i in 0..self.d {
            perm[g.perm[i]] = i;
            twist[g.perm[i]] = (self.n - g.twist[i]) % self.n;
        }
        Elt { perm, twist }
    }

    pub fn identity(&self) -> Elt {
        Elt { perm: (0..self.d).collect(), twist: vec![0; self.d] }
    }

    /// Cycles of the permutation with the twist accumulated around each.
    pub fn cycles(&self, g: &Elt, within: &[usize]) -> Vec<(u32, u32)> {
        let mut seen = vec![false; self.d];
        let mut out = Vec::new();
        for &s in within {
            if seen[s] {
                continue;
            }
            let (mut i, mut len, mut tw) = (s, 0, 0);
            while !seen[i] {
                seen[i] = true;
                len += 1;
                tw = (tw + g.twist[i]) % self.n;
                i = g.perm[i];
            }
            out.push((len, tw));
        }
        out
    }

    pub fn class_of(&self, g: &Elt) -> MultiPartition {
        let all: Vec<usize> = (0..self.d).collect();
        let parts: Vec<(u32, i64)> = self.cycles(g, &all).into_iter().map(|(l, t)| (l, t as i64)).collect();
        MultiPartition::from_parts(self.n, &parts)
    }

    /// Character of the irrep labelled by `lambda`, induced from the block subgroup
    /// `∏_j Z_n ≀ S_{|λ_j|}` where block `j` carries `ξ^{−j·(twist sum)} ⊗ Specht(λ_j)`.
    pub fn induced_char(&self, lambda: &MultiPartition, g: &Elt) -> C {
        let n = self.n;
        let mut blocks = Vec::new();
        let mut start = 0;
        for p in lambda.components() {
            let s = p.size() as usize;
            blocks.push((start..start + s).collect::<Vec<_>>());
            start += s;
        }
        let mut block_of = vec![0; self.d];
        for (j, b) in blocks.iter().enumerate() {
            for &i in b {
                block_of[i] = j;
            }
        }
        let mut h_order = 1usize;
        for b in &blocks {
            h_order *= (1..=b.len()).product::<usize>() * (n as usize).pow(b.len() as u32);
        }
        let mut acc = C(0.0, 0.0);
        for x in &self.elts {
            let y = self.mul(&self.mul(x, g), &self.inv(x));
            if (0..self.d).any(|i| block_of[y.perm[i]] != block_of[i]) {
                continue;
            }
            let mut v = C(1.0, 0.0);
            for (j, b) in blocks.iter().enumerate() {
                let tw: i64 = b.iter().map(|&i| y.twist[i] as i64).sum();
                let mut ct: Vec<u32> = self.cycles(&y, b).into_iter().map(|(l, _)| l).collect();
                ct.sort_unstable_by(|a, b| b.cmp(a));
                let chi = mn_char(lambda.component(j).parts(), &ct);
                v = v.mul(C::root(n, -(j as i64) * tw)).scale(chi as f64);
            }
            acc = acc.add(v);
        }
        acc.scale(1.0 / h_order as f64)
    }

    pub fn class_members(&self, mu: &MultiPartition) -> Vec<usize> {
        (0..self.order()).filter(|&i| &self.class_of(&self.elts[i]) == mu).collect()
    }

    /// `#{(g_1, …, g_k) ∈ C_1 × ⋯ × C_k : g_1⋯g_k = 1}`.
    pub fn count_products(&self, classes: &[MultiPartition]) -> u64 {
        let mut dist = vec![0u64; self.order()];
        dist[self.index(&self.identity())] = 1;
        for c in classes {
            let members = self.class_members(c);
            let mut next = vec![0u64; self.order()];
            for (i, &w) in dist.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                for &m in &members {
                    let p = self.mul(&self.elts[i], &self.elts[m]);
                    next[self.index(&p)] += w;
                }
            }
            dist = next;
        }
        dist[self.index(&self.identity())]
    }
}

/// Bernoulli numbers `B_0..=B_m` with `B_1 = −1/2`.
pub fn bernoulli(m: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(m + 1);
    for k in 0..=m {
        if k == 0 {
            b.push(BigRational::one());
            continue;
        }
        // Σ_{j<k+1} C(k+1, j) B_j = 0
        let mut s = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            s += bj * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-s / BigRational::from_integer(BigInt::from(k + 1)));
    }
    b
}

/// Coefficient of `x^e` (`e` odd, `≥ −1`) in the Laurent series of `csc x`.
pub fn csc_coeff(e: i64) -> BigRational {
    assert!(e >= -1 && e % 2 != 0);
    let k = ((e + 1) / 2) as usize;
    let b = bernoulli(2 * k);
    let two = BigInt::from(2);
    let pow = if k == 0 {
        BigRational::new(BigInt::one(), two.clone())
    } else {
        BigRational::from_integer(two.pow(2 * k as u32 - 1))
    };
    let fact: BigInt = (1..=2 * k).map(BigInt::from).product();
    let sign = if k % 2 == 0 { -1 } else { 1 };
    BigRational::from_integer(BigInt::from(2 * sign)) * (pow - BigRational::one()) * &b[2 * k]
        / BigRational::from_integer(fact)
}

/// One-variable power series over `Q`, truncated below `len`.
pub fn series_mul(a: &[BigRational], b: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `h_k(1, q, q², …) = 1/∏_{i=1}^k (1 − q^i)`.
fn principal_h(k: i64, len: usize) -> Vec<BigRational> {
    let mut s = vec![BigRational::zero(); len];
    if k < 0 {
        return s;
    }
    s[0] = BigRational::one();
    for i in 1..=k as usize {
        // divide by 1 − q^i
        for j in i..len {
            let t = s[j - i].clone();
            s[j] += t;
        }
    }
    s
}

/// `s_λ(1, q, q², …)` from the Jacobi-Trudi determinant `det h_{λ_i − i + j}`.
pub fn principal_schur(lambda: &[u32], len: usize) -> Vec<BigRational> {
    let l = lambda.len();
    let m: Vec<Vec<Vec<BigRational>>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| principal_h(lambda[i] as i64 - i as i64 + j as i64, len))
                .collect()
        })
        .collect();
    fn det(m: &[Vec<Vec<BigRational>>], rows: &[usize], cols: &mut Vec<usize>, len: usize) -> Vec<BigRational> {
        let Some((&r, rest)) = rows.split_first() else {
            let mut one = vec![BigRational::zero(); len];
            one[0] = BigRational::one();
            return one;
        };
        let mut acc = vec![BigRational::zero(); len];
        for idx in 0..cols.len() {
            let c = cols.remove(idx);
            let t = series_mul(&m[r][c], &det(m, rest, cols, len), len);
            for (a, b) in acc.iter_mut().zip(t) {
                if idx % 2 == 0 {
                    *a += b;
                } else {
                    *a -= b;
                }
            }
            cols.insert(idx, c);
        }
        acc
    }
    let rows: Vec<usize> = (0..l).collect();
    let mut cols: Vec<usize> = (0..l).collect();
    det(&m, &rows, &mut cols, len)
}

/// All partitions `σ ⊇ inner` with `|σ| = |inner| + len` whose skew shape is a border
/// strip (connected, no 2×2 square), with the strip height.
pub fn brute_force_strips(inner: &[u32], len: u32) -> Vec<(Vec<u32>, u32)> {
    let size = inner.iter().sum::<u32>() + len;
    let mut out = Vec::new();
    for sigma in partitions(size) {
        if sigma.len() < inner.len() || inner.iter().zip(&sigma).any(|(a, b)| a > b) {
            continue;
        }
        let row = |p: &[u32], i: usize| p.get(i).copied().unwrap_or(0);
        let cells: Vec<(usize, u32)> = (0..sigma.len())
            .flat_map(|i| (row(inner, i)..sigma[i]).map(move |j| (i, j)))
            .collect();
        let has = |i: usize, j: u32| cells.contains(&(i, j));
        if cells.iter().any(|&(i, j)| has(i + 1, j) && has(i, j + 1) && has(i + 1, j + 1)) {
            continue;
        }
        // connectivity by flood fill
        let mut seen = vec![cells[0]];
        let mut k = 0;
        while k < seen.len() {
            let (i, j) = seen[k];
            let nbrs = [(i + 1, j), (i.wrapping_sub(1), j), (i, j + 1), (i, j.wrapping_sub(1))];
            for c in nbrs {
                if cells.contains(&c) && !seen.contains(&c) {
                    seen.push(c);
                }
            }
            k += 1;
        }
        if seen.len() != cells.len() {
            continue;
        }
        let rows: std::collections::BTreeSet<usize> = cells.iter().map(|c| c.0).collect();
        out.push((sigma, rows.len() as u32 - 1));
    }
    out
}
