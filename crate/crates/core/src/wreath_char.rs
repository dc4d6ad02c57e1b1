//! Characters of `Z_n ≀ S_d`, computed in the `n`-fold fermionic Fock space.
//!
//! Column `μ` of the table is `∏_{parts (d, k) of μ} (Σ_j ξ_n^{−kj} α^j_{−d}) v_∅`,
//! read off in the basis `v_λ`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cyclo::{field_for_modulus, CycNum, CyclotomicField};
use crate::error::{Error, Result};
use crate::fock::{color, combine, content_sum, is_balanced, n_quotient, FockVector};
use crate::partitions::{factorial, MultiPartition, Partition};

#[derive(Debug, Clone)]
pub struct CharTable {
    n: u32,
    d: u32,
    field: &'static CyclotomicField,
    irreps: Vec<MultiPartition>,
    classes: Vec<MultiPartition>,
    z: Vec<BigUint>,
    /// `values[row][col] = χ_{irreps[row]}(classes[col])`
    values: Vec<Vec<CycNum>>,
    row_index: HashMap<MultiPartition, usize>,
    col_index: HashMap<MultiPartition, usize>,
}

/// Apply `Σ_j ξ_n^{−kj} α^j_{−d}` to `v`.
fn apply_part(v: &FockVector, d: u32, k: u32, n: u32, field: &'static CyclotomicField) -> Result<FockVector> {
    let mut out = FockVector::zero(n, field);
    for j in 0..n {
        let w = field.zeta(n, -(k as i64) * j as i64)?;
        out.add(&v.alpha_neg(d, j as usize).scale(&w));
    }
    Ok(out)
}

/// `Σ_λ χ_λ(μ) v_λ`.
pub fn character_column(mu: &MultiPartition) -> Result<FockVector> {
    let n = mu.n();
    let field = field_for_modulus(n);
    let mut v = FockVector::vacuum(n, field);
    for (d, k) in mu.parts() {
        v = apply_part(&v, d, k, n, field)?;
    }
    Ok(v)
}

fn build(n: u32, d: u32) -> Result<CharTable> {
    let field = field_for_modulus(n);
    let labels = MultiPartition::all(n, d);
    let columns: Vec<FockVector> = labels
        .par_iter()
        .map(character_column)
        .collect::<Result<_>>()?;
    let values = labels
        .iter()
        .map(|l| columns.iter().map(|c| c.coeff(l)).collect())
        .collect();
    let index: HashMap<MultiPartition, usize> =
        labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
    Ok(CharTable {
        n,
        d,
        field,
        z: labels.iter().map(MultiPartition::z).collect(),
        irreps: labels.clone(),
        classes: labels,
        values,
        row_index: index.clone(),
        col_index: index,
    })
}

/// The character table of `Z_n ≀ S_d`, memoized per `(n, d)`.
pub fn char_table(n: u32, d: u32) -> Result<Arc<CharTable>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<CharTable>>>> = OnceLock::new();
    if n == 0 {
        return Err(Error::ModulusMismatch(n, 0));
    }
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&(n, d)) {
        return Ok(t.clone());
    }
    // built outside the lock so independent sizes can proceed in parallel
    let t = Arc::new(build(n, d)?);
    Ok(cache.lock().unwrap().entry((n, d)).or_insert(t).clone())
}

/// `χ_λ(μ)` looked up in the memoized table.
pub fn chi(lambda: &MultiPartition, mu: &MultiPartition) -> Result<CycNum> {
    if lambda.n() != mu.n() {
        return Err(Error::ModulusMismatch(lambda.n(), mu.n()));
    }
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(lambda.size(), mu.size()));
    }
    char_table(lambda.n(), lambda.size())?.value(lambda, mu)
}

impl CharTable {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn field(&self) -> &'static CyclotomicField {
        self.field
    }

    pub fn irreps(&self) -> &[MultiPartition] {
        &self.irreps
    }

    pub fn classes(&self) -> &[MultiPartition] {
        &self.classes
    }

    pub fn z(&self, col: usize) -> &BigUint {
        &self.z[col]
    }

    pub fn row(&self, row: usize) -> &[CycNum] {
        &self.values[row]
    }

    pub fn entry(&self, row: usize, col: usize) -> &CycNum {
        &self.values[row][col]
    }

    pub fn row_of(&self, lambda: &MultiPartition) -> Option<usize> {
        self.row_index.get(lambda).copied()
    }

    pub fn col_of(&self, mu: &MultiPartition) -> Option<usize> {
        self.col_index.get(mu).copied()
    }

    pub fn value(&self, lambda: &MultiPartition, mu: &MultiPartition) -> Result<CycNum> {
        let r = self
            .row_of(lambda)
            .ok_or(Error::SizeMismatch(lambda.size(), self.d))?;
        let c = self.col_of(mu).ok_or(Error::SizeMismatch(mu.size(), self.d))?;
        Ok(self.values[r][c].clone())
    }

    /// `Σ_μ χ_a(μ) conj(χ_b(μ)) / z_μ`.
    pub fn row_inner(&self, a: usize, b: usize) -> CycNum {
        let mut acc = self.field.zero();
        for c in 0..self.classes.len() {
            let t = &self.values[a][c] * &self.values[b][c].conj();
            let zc = BigRational::from_integer(self.z[c].clone().into());
            acc += &t.scale(&(BigRational::one() / zc));
        }
        acc
    }

    /// `Σ_λ χ_λ(a) conj(χ_λ(b))`.
    pub fn column_inner(&self, a: usize, b: usize) -> CycNum {
        let mut acc = self.field.zero();
        for r in 0..self.irreps.len() {
            acc.add_mul(&self.values[r][a], &self.values[r][b].conj());
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        let strs = |v: &[MultiPartition]| v.iter().map(|m| m.to_string()).collect::<Vec<_>>();
        json!({
            "n": self.n,
            "d": self.d,
            "field_order": self.field.order(),
            "irreps": strs(&self.irreps),
            "classes": strs(&self.classes),
            "z": self.z.iter().map(|z| z.to_string()).collect::<Vec<_>>(),
            "values": self
                .values
                .iter()
                .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

/// `dim(λ) = d!/(d_0!⋯d_{n−1}!) ∏ dim(λ_i)`.
pub fn dimension(lambda: &MultiPartition) -> BigUint {
    let mut num = factorial(lambda.size() as u64);
    for p in lambda.components() {
        num = num / factorial(p.size() as u64) * p.dim();
    }
    num
}

/// Central characters from the combinatorial formulas.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralChars {
    /// Eigenvalue of the transposition class sum.
    pub f_t: i64,
    /// `f[i]` for `i = 0..n`; `f[0] = d`.
    pub f: Vec<CycNum>,
}

/// `f_T = n Σ_j content(λ_j)` and `f_i = Σ_j ξ_n^{−ij} |λ_j|`.
pub fn central_chars(lambda: &MultiPartition) -> Result<CentralChars> {
    let n = lambda.n();
    let field = field_for_modulus(n);
    let f_t = n as i64 * lambda.components().iter().map(content_sum).sum::<i64>();
    let mut f = Vec::with_capacity(n as usize);
    for i in 0..n {
        let mut acc = field.zero();
        for (j, p) in lambda.components().iter().enumerate() {
            acc += &field.zeta(n, -(i as i64) * j as i64)?.scale(&BigRational::from_integer(p.size().into()));
        }
        f.push(acc);
    }
    Ok(CentralChars { f_t, f })
}

/// `f_T` as the content sum over the color-0 boxes of the interlaced diagram.
pub fn f_t_from_diagram(lambda: &MultiPartition) -> i64 {
    let bar = combine(lambda);
    bar.boxes()
        .filter(|&(i, j)| color(i, j, lambda.n()) == 0)
        .map(|(i, j)| Partition::content(i, j))
        .sum()
}

/// Central characters from character ratios: `f_T = |T| χ(T)/dim` with `T` the
/// untwisted transposition class, `f_i = d χ({ξ^i 1, 1^{d−1}})/dim`.
pub fn central_chars_from_table(lambda: &MultiPartition) -> Result<CentralChars> {
    let n = lambda.n();
    let d = lambda.size();
    let field = field_for_modulus(n);
    let dim = BigRational::from_integer(dimension(lambda).into());
    let f_t = if d < 2 {
        0
    } else {
        let mut parts = vec![(2, 0)];
        parts.extend(std::iter::repeat((1, 0)).take(d as usize - 2));
        let c = chi(lambda, &MultiPartition::from_parts(n, &parts))?;
        let class_size = BigRational::from_integer((n as u64 * d as u64 * (d as u64 - 1) / 2).into());
        let v = c.scale(&(class_size / &dim));
        let r = v
            .as_rational()
            .filter(|r| r.is_integer())
            .ok_or_else(|| Error::NotAUnit(format!("f_T not an integer: {v}")))?;
        r.to_integer().to_i64().ok_or_else(|| Error::NotAUnit("f_T overflow".into()))?
    };
    let mut f = Vec::with_capacity(n as usize);
    for i in 0..n {
        if d == 0 {
            f.push(field.zero());
            continue;
        }
        let mut parts = vec![(1, i as i64)];
        parts.extend(std::iter::repeat((1, 0)).take(d as usize - 1));
        let c = chi(lambda, &MultiPartition::from_parts(n, &parts))?;
        f.push(c.scale(&(BigRational::from_integer(d.into()) / &dim)));
    }
    Ok(CentralChars { f_t, f })
}

/// `χ_{λ̄}(n^d)/dim(λ)`: the sign of one way of building `λ̄` from `∅` by `n`-strips,
/// each contributing `(−1)^{stones jumped}`.
pub fn sign_ratio(lambda: &MultiPartition) -> i64 {
    let n = lambda.n();
    let mut comps = vec![Vec::<u32>::new(); n as usize];
    let mut prev = Partition::empty();
    let mut sign = 1;
    for (c, target) in lambda.components().iter().enumerate() {
        for (i, _) in target.boxes() {
            let row = &mut comps[c];
            if row.len() <= i as usize {
                row.push(0);
            }
            row[i as usize] += 1;
            let cur = MultiPartition::new(n, comps.iter().cloned().map(Partition::new).collect())
                .expect("n components");
            let next = combine(&cur);
            let rows = (0..next.len()).filter(|&r| next.row(r) != prev.row(r)).count();
            if rows % 2 == 0 {
                sign = -sign;
            }
            prev = next;
        }
    }
    sign
}

/// [`sign_ratio`] for a diagram given directly, which must be `n`-balanced.
pub fn sign_ratio_of_diagram(p: &Partition, n: u32) -> Result<i64> {
    if !is_balanced(p, n) {
        return Err(Error::Unbalanced(n));
    }
    Ok(sign_ratio(&n_quotient(p, n)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::add_border_strips;

    fn mp(s: &str) -> MultiPartition {
        s.parse().unwrap()
    }

    #[test]
    fn symmetric_group_s2() {
        let t = char_table(1, 2).unwrap();
        let k = t.field();
        let two = mp("1:(2)");
        let ones = mp("1:(1,1)");
        assert_eq!(t.value(&two, &ones).unwrap(), k.one());
        assert_eq!(t.value(&two, &two).unwrap(), k.one());
        assert_eq!(t.value(&ones, &ones).unwrap(), k.one());
        assert_eq!(t.value(&ones, &two).unwrap(), -k.one());
    }

    #[test]
    fn z2_table() {
        let t = char_table(2, 1).unwrap();
        let k = t.field();
        let a = MultiPartition::new(2, vec![Partition::new(vec![1]), Partition::empty()]).unwrap();
        let b = MultiPartition::new(2, vec![Partition::empty(), Partition::new(vec![1])]).unwrap();
        let c0 = MultiPartition::from_parts(2, &[(1, 0)]);
        let c1 = MultiPartition::from_parts(2, &[(1, 1)]);
        assert_eq!(t.value(&a, &c0).unwrap(), k.one());
        assert_eq!(t.value(&a, &c1).unwrap(), k.one());
        assert_eq!(t.value(&b, &c0).unwrap(), k.one());
        assert_eq!(t.value(&b, &c1).unwrap(), -k.one());
    }

    #[test]
    fn orthogonality() {
        for (n, dmax) in [(1, 8), (2, 4), (3, 2)] {
            for d in 1..=dmax {
                let t = char_table(n, d).unwrap();
                let k = t.field();
                let m = t.irreps().len();
                assert_eq!(m, t.classes().len());
                for a in 0..m {
                    for b in 0..m {
                        let want = if a == b { k.one() } else { k.zero() };
                        assert_eq!(t.row_inner(a, b), want, "rows n={n} d={d}");
                        let want = if a == b {
                            k.from_rational(BigRational::from_integer(t.z(a).clone().into()))
                        } else {
                            k.zero()
                        };
                        assert_eq!(t.column_inner(a, b), want, "cols n={n} d={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn negated_class_is_conjugate() {
        for (n, d) in [(2, 3), (3, 2), (3, 3)] {
            let t = char_table(n, d).unwrap();
            for l in t.irreps() {
                for mu in t.classes() {
                    assert_eq!(t.value(l, &mu.negate()).unwrap(), t.value(l, mu).unwrap().conj());
                }
            }
        }
    }

    #[test]
    fn twisting_by_g_k() {
        for n in 1..=3u32 {
            for d in 1..=3 {
                let t = char_table(n, d).unwrap();
                let k = t.field();
                for l in t.irreps() {
                    for mu in t.classes() {
                        for kk in 0..n as i64 {
                            let lhs = t.value(l, &mu.g(kk)).unwrap();
                            let ph = k.zeta(n, -kk * l.weighted_twist() as i64).unwrap();
                            assert_eq!(lhs, &ph * &t.value(l, &mu.negate()).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dimension_is_identity_column() {
        assert_eq!(dimension(&mp("2:(1^0)")), BigUint::from(1u32));
        assert_eq!(dimension(&mp("2:(1^0,1^1)")), BigUint::from(2u32));
        for n in 1..=3 {
            for d in 1..=3 {
                let t = char_table(n, d).unwrap();
                let id = MultiPartition::from_parts(n, &vec![(1, 0); d as usize]);
                for l in t.irreps() {
                    let dim = t.field().from_rational(BigRational::from_integer(dimension(l).into()));
                    assert_eq!(t.value(l, &id).unwrap(), dim);
                }
            }
        }
    }

    #[test]
    fn central_characters_two_routes() {
        for n in 1..=3u32 {
            for d in 1..=4 {
                for l in MultiPartition::all(n, d) {
                    let a = central_chars(&l).unwrap();
                    let b = central_chars_from_table(&l).unwrap();
                    assert_eq!(a, b, "{l}");
                    assert_eq!(a.f_t, f_t_from_diagram(&l), "{l}");
                }
            }
        }
    }

    #[test]
    fn central_character_examples() {
        let c = central_chars(&mp("2:(1^1)")).unwrap();
        assert_eq!(c.f[1], -field_for_modulus(2).one());
        assert_eq!(central_chars(&mp("1:(2)")).unwrap().f_t, 1);
        assert_eq!(central_chars(&mp("3:(1^0)")).unwrap().f_t, 0);
    }

    #[test]
    fn sign_ratio_examples() {
        for n in 1..=4 {
            assert_eq!(sign_ratio_of_diagram(&Partition::new(vec![n]), n).unwrap(), 1);
        }
        assert_eq!(sign_ratio_of_diagram(&Partition::new(vec![1, 1]), 2).unwrap(), -1);
        assert!(sign_ratio_of_diagram(&Partition::new(vec![2, 1]), 2).is_err());
    }

    #[test]
    fn sign_ratio_matches_table() {
        // χ_{λ̄}(n^d) from the n = 1 table at size nd
        for (n, d) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
            let t1 = char_table(1, n * d).unwrap();
            let cls = MultiPartition::from_parts(1, &vec![(n, 0); d as usize]);
            for l in MultiPartition::all(n, d) {
                let bar = MultiPartition::new(1, vec![combine(&l)]).unwrap();
                let chi = t1.value(&bar, &cls).unwrap();
                let want = BigRational::from_integer((dimension(&l)).into()) * BigRational::from_integer(sign_ratio(&l).into());
                assert_eq!(chi, t1.field().from_rational(want), "{l}");
            }
        }
    }

    #[test]
    fn adding_strips_changes_sign_by_beta_and_height() {
        for n in 2..=3u32 {
            for d in 0..=2 {
                for l in MultiPartition::all(n, d) {
                    let bar = combine(&l);
                    for k in 1..=(3 - d) {
                        for s in add_border_strips(&bar, k * n, n) {
                            let sigma = n_quotient(&s.shape, n).unwrap();
                            let e = s.beta.unwrap() + s.height;
                            let sgn = if e % 2 == 0 { 1 } else { -1 };
                            assert_eq!(sign_ratio(&sigma), sgn * sign_ratio(&l), "{l} -> {sigma}");
                        }
                    }
                }
            }
        }
    }
}
