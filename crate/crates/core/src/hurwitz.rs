//! Wreath double Hurwitz generating functions and the bilinear relations they satisfy
//! with the GW vertex.
//!
//! Everything goes through the Burnside form
//! `H•_{ν,μ} = Σ_λ χ_λ(ν)χ_λ(μ)/(z_ν z_μ) · exp(f_T(λ) u + Σ_i f_i(λ) x_i)`.
//! `H̃(a)` rescales the exponent to `√−1 a f_T u + Σ_i a ξ_{2n}^{−i} f_i x_i`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cyclo::{field_for_modulus, CycNum, CyclotomicField};
use crate::error::{Error, Result};
use crate::partitions::appendix::{c_set, tilde, twisting_partition, FirstPart, RowLabel};
use crate::partitions::{factorial, MultiPartition, Partition};
use crate::rational::RationalTerm;
use crate::report::Report;
use crate::series::{exp_linear, Series, VarSet};
use crate::vertex::{big, csc_term, gw_family, theorem1_images, VertexFamily};
use crate::wreath_char::{central_chars, char_table, CentralChars, CharTable};

fn ratio(x: &num_bigint::BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

/// Per-irrep exponentials for one choice of exponent, ready to be paired with
/// character values.
pub struct HurwitzTable {
    table: Arc<CharTable>,
    vars: Arc<VarSet>,
    exps: Vec<Series>,
}

impl HurwitzTable {
    /// `lin(λ)` gives the linear form in `vars` whose exponential weights `λ`.
    pub fn build<F>(n: u32, d: u32, vars: &Arc<VarSet>, prec: i64, lin: F) -> Result<HurwitzTable>
    where
        F: Fn(&CentralChars) -> Result<Vec<CycNum>> + Sync,
    {
        let table = char_table(n, d)?;
        let field = table.field();
        let exps = table
            .irreps()
            .par_iter()
            .map(|l| {
                let cc = central_chars(l)?;
                Ok(exp_linear(vars, &lin(&cc)?, &field.one(), prec))
            })
            .collect::<Result<_>>()?;
        Ok(HurwitzTable {
            table,
            vars: vars.clone(),
            exps,
        })
    }

    /// `H•` itself on `(u, x_1, …)`.
    pub fn plain(n: u32, d: u32, order: i64) -> Result<HurwitzTable> {
        Self::build(n, d, &VarSet::ux_side(n), order, |cc| {
            let field = field_for_modulus(n);
            let mut v = vec![field.from_i64(cc.f_t)];
            v.extend(cc.f[1..].iter().cloned());
            Ok(v)
        })
    }

    /// `H̃(a)` on `(u, x_1, …)`.
    pub fn tilde(n: u32, d: u32, a: Rational64, order: i64) -> Result<HurwitzTable> {
        let field = field_for_modulus(n);
        let mult = tilde_multipliers(field, n, a)?;
        Self::build(n, d, &VarSet::ux_side(n), order, |cc| Ok(tilde_linear(cc, &mult)))
    }

    pub fn char_table(&self) -> &Arc<CharTable> {
        &self.table
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    /// The generating function for the pair `(ν, μ)`.
    pub fn get(&self, nu: &MultiPartition, mu: &MultiPartition) -> Result<Series> {
        let t = &self.table;
        let cn = t.col_of(nu).ok_or(Error::SizeMismatch(nu.size(), t.d()))?;
        let cm = t.col_of(mu).ok_or(Error::SizeMismatch(mu.size(), t.d()))?;
        let zz = ratio(t.z(cn)) * ratio(t.z(cm));
        let mut acc = Series::zero(&self.vars, t.field(), None);
        for (r, e) in self.exps.iter().enumerate() {
            let w = t.entry(r, cn) * t.entry(r, cm);
            if !w.is_zero() {
                acc = acc.try_add(&e.scale(&w))?;
            }
        }
        Ok(acc.scale_rational(&(BigRational::one() / zz)))
    }
}

/// `(√−1 a, a ξ_{2n}^{−1}, …, a ξ_{2n}^{1−n})`.
pub fn tilde_multipliers(field: &'static CyclotomicField, n: u32, a: Rational64) -> Result<Vec<CycNum>> {
    let ab = big(a);
    let mut v = vec![field.i()?.scale(&ab)];
    for i in 1..n as i64 {
        v.push(field.zeta(2 * n, -i)?.scale(&ab));
    }
    Ok(v)
}

fn tilde_linear(cc: &CentralChars, mult: &[CycNum]) -> Vec<CycNum> {
    let mut v = vec![mult[0].scale(&BigRational::from_integer(cc.f_t.into()))];
    for i in 1..mult.len() {
        v.push(&mult[i] * &cc.f[i]);
    }
    v
}

/// A Burnside generating function, flagged when the boundary sizes differ (no cover
/// connects them, so the series is zero).
#[derive(Debug, Clone)]
pub struct HurwitzGF {
    pub nu: MultiPartition,
    pub mu: MultiPartition,
    pub series: Series,
    pub size_mismatch: bool,
}

impl HurwitzGF {
    pub fn to_json(&self) -> Value {
        json!({
            "nu": self.nu.to_string(),
            "mu": self.mu.to_string(),
            "size_mismatch": self.size_mismatch,
            "series": self.series.to_json(),
        })
    }
}

fn mismatched(nu: &MultiPartition, mu: &MultiPartition, order: i64) -> Result<Option<HurwitzGF>> {
    if nu.n() != mu.n() {
        return Err(Error::ModulusMismatch(nu.n(), mu.n()));
    }
    if nu.size() == mu.size() {
        return Ok(None);
    }
    let n = nu.n();
    Ok(Some(HurwitzGF {
        nu: nu.clone(),
        mu: mu.clone(),
        series: Series::zero(&VarSet::ux_side(n), field_for_modulus(n), Some(order)),
        size_mismatch: true,
    }))
}

/// `H•_{ν,μ}(x, u)` to total degree `order`.
pub fn burnside(nu: &MultiPartition, mu: &MultiPartition, order: i64) -> Result<HurwitzGF> {
    if let Some(z) = mismatched(nu, mu, order)? {
        return Ok(z);
    }
    let series = HurwitzTable::plain(nu.n(), nu.size(), order)?.get(nu, mu)?;
    Ok(HurwitzGF {
        nu: nu.clone(),
        mu: mu.clone(),
        series,
        size_mismatch: false,
    })
}

/// `H̃•_{ν,μ}(a)` from the rescaled Burnside exponentials.
pub fn h_tilde(nu: &MultiPartition, mu: &MultiPartition, a: Rational64, order: i64) -> Result<HurwitzGF> {
    if let Some(z) = mismatched(nu, mu, order)? {
        return Ok(z);
    }
    let series = HurwitzTable::tilde(nu.n(), nu.size(), a, order)?.get(nu, mu)?;
    Ok(HurwitzGF {
        nu: nu.clone(),
        mu: mu.clone(),
        series,
        size_mismatch: false,
    })
}

/// Multiply the coefficient of `∏ y_j^{e_j}` by `∏ c_j^{e_j}`.
pub fn rescale_variables(s: &Series, c: &[CycNum]) -> Result<Series> {
    let vars = s.vars();
    let field = s.field();
    let mut pows: Vec<HashMap<i64, CycNum>> = vec![HashMap::new(); c.len()];
    let mut terms = Vec::new();
    for (e, x) in s.terms() {
        let mut coef = x.clone();
        for (j, &ej) in e.iter().enumerate() {
            if ej == 0 {
                continue;
            }
            let k = ej / vars.denom();
            if k * vars.denom() != ej {
                return Err(Error::OffLattice(ej.to_string(), vars.denom()));
            }
            if !pows[j].contains_key(&k) {
                pows[j].insert(k, c[j].pow(k)?);
            }
            coef = &coef * &pows[j][&k];
        }
        terms.push((e.clone(), coef));
    }
    Ok(Series::from_terms(vars, field, terms, s.prec()))
}

/// `H̃•_{ν,μ}(a)` by substituting the rescaled arguments into `H•`.
pub fn h_tilde_by_substitution(nu: &MultiPartition, mu: &MultiPartition, a: Rational64, order: i64) -> Result<Series> {
    let h = burnside(nu, mu, order)?;
    let field = field_for_modulus(nu.n());
    rescale_variables(&h.series, &tilde_multipliers(field, nu.n(), a)?)
}

/// `H^{χ,γ•}_{ν,μ}`: the coefficient of `u^r/r! · x^γ/γ!` in `H•`, where `gamma[i−1]`
/// is the number of `ξ^i` entries.
pub fn wreath_hurwitz_count(nu: &MultiPartition, mu: &MultiPartition, r: u32, gamma: &[u32]) -> Result<CycNum> {
    let n = nu.n();
    if gamma.len() + 1 != n as usize {
        return Err(Error::VarSetMismatch);
    }
    let order = (r + gamma.iter().sum::<u32>()) as i64 + 1;
    let h = burnside(nu, mu, order)?;
    let mut e = vec![Rational64::from_integer(r as i64)];
    e.extend(gamma.iter().map(|&m| Rational64::from_integer(m as i64)));
    let c = h.series.coeff(&e)?;
    let mut f = factorial(r as u64);
    for &m in gamma {
        f *= factorial(m as u64);
    }
    Ok(c.scale(&ratio(&f)))
}

/// The same count straight from the Burnside sum `Σ_λ f_T^r ∏ f_i^{m_i} χχ/(zz)`.
pub fn wreath_hurwitz_count_direct(nu: &MultiPartition, mu: &MultiPartition, r: u32, gamma: &[u32]) -> Result<CycNum> {
    let n = nu.n();
    let field = field_for_modulus(n);
    if nu.size() != mu.size() {
        return Ok(field.zero());
    }
    let t = char_table(n, nu.size())?;
    let (cn, cm) = (t.col_of(nu).unwrap(), t.col_of(mu).unwrap());
    let mut acc = field.zero();
    for (row, l) in t.irreps().iter().enumerate() {
        let cc = central_chars(l)?;
        let mut w = t.entry(row, cn) * t.entry(row, cm);
        w = w.scale(&BigRational::from_integer(BigInt::from(cc.f_t).pow(r)));
        for (i, &m) in gamma.iter().enumerate() {
            w = &w * &cc.f[i + 1].pow(m as i64)?;
        }
        acc += &w;
    }
    Ok(acc.scale(&(BigRational::one() / (ratio(t.z(cn)) * ratio(t.z(cm))))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `Ṽ_μ(0) = Σ_ν Ṽ_ν(a) z_ν H̃_{−ν,μ}(a)`.
    R1,
    /// `0 = Σ_ν Ṽ_ν(0) z_ν H̃_{g_k(ν),μ}(k/n)` for `μ` with an untwisted part.
    R2,
    /// `Ṽ_μ(a) = Σ_ν Ṽ_ν(0) z_ν H̃_{−ν,μ}(−a)`.
    Framing,
}

/// `Σ_ν V_ν z_ν H_{twist(ν), μ}`.
fn pair_sum<F>(vs: &VertexFamily, h: &HurwitzTable, mu: &MultiPartition, twist: F) -> Result<Series>
where
    F: Fn(&MultiPartition) -> MultiPartition,
{
    let t = h.char_table();
    let mut acc = Series::zero(h.vars(), t.field(), None);
    for (nu, v) in &vs.entries {
        let z = ratio(&nu.z());
        let hh = h.get(&twist(nu), mu)?;
        acc = acc.try_add(&v.try_mul(&hh)?.scale_rational(&z))?;
    }
    Ok(acc)
}

/// Check the bilinear relations between `Ṽ` (from the vertex correspondence) and `H̃`
/// for every class of size `d`. `a` is used by `R1` and `Framing`.
pub fn check_relations(which: Relation, n: u32, d: u32, a: Rational64, order: i64) -> Result<Report> {
    // Ṽ has poles of total order ≤ d, so H̃ needs that much headroom
    let h_order = order + d as i64;
    let v0 = gw_family(n, d, Rational64::zero(), order)?;
    let mut rep = Report::new(match which {
        Relation::R1 => "R1",
        Relation::R2 => "R2",
        Relation::Framing => "framing",
    });
    match which {
        Relation::R1 => {
            let va = gw_family(n, d, a, order)?;
            let h = HurwitzTable::tilde(n, d, a, h_order)?;
            for (mu, lhs) in &v0.entries {
                let rhs = pair_sum(&va, &h, mu, MultiPartition::negate)?;
                rep.series(format!("mu={mu} a={a}"), lhs, &rhs)?;
            }
        }
        Relation::Framing => {
            let va = gw_family(n, d, a, order)?;
            let h = HurwitzTable::tilde(n, d, -a, h_order)?;
            for (mu, lhs) in &va.entries {
                let rhs = pair_sum(&v0, &h, mu, MultiPartition::negate)?;
                rep.series(format!("mu={mu} a={a}"), lhs, &rhs)?;
            }
        }
        Relation::R2 => {
            let field = field_for_modulus(n);
            for k in 1..n as i64 {
                let h = HurwitzTable::tilde(n, d, Rational64::new(k, n as i64), h_order)?;
                for mu in MultiPartition::all(n, d) {
                    if mu.component(0).is_empty() {
                        continue;
                    }
                    let lhs = pair_sum(&v0, &h, &mu, |nu| nu.g(k))?;
                    let zero = Series::zero(h.vars(), field, lhs.prec());
                    rep.series(format!("mu={mu} k={k}"), &lhs, &zero)?;
                }
            }
        }
    }
    Ok(rep)
}

/// `H•_{ν,μ}(x+y, u+v) = Σ_σ H•_{ν,σ}(x,u) z_σ H•_{−σ,μ}(y,v)` for all pairs of size `d`.
pub fn check_degeneration(n: u32, d: u32, order: i64) -> Result<Report> {
    let field = field_for_modulus(n);
    let mut names: Vec<String> = vec!["u".into()];
    names.extend((1..n).map(|i| format!("x{i}")));
    names.push("v".into());
    names.extend((1..n).map(|i| format!("y{i}")));
    let vars = VarSet::new(names, 1, vec![1; 2 * n as usize]);
    let base = |cc: &CentralChars| {
        let mut v = vec![field.from_i64(cc.f_t)];
        v.extend(cc.f[1..].iter().cloned());
        v
    };
    let zeros = vec![field.zero(); n as usize];
    let left = HurwitzTable::build(n, d, &vars, order, |cc| Ok([base(cc), zeros.clone()].concat()))?;
    let right = HurwitzTable::build(n, d, &vars, order, |cc| Ok([zeros.clone(), base(cc)].concat()))?;
    let both = HurwitzTable::build(n, d, &vars, order, |cc| Ok([base(cc), base(cc)].concat()))?;
    let classes = MultiPartition::all(n, d);
    let mut rep = Report::new("degeneration");
    for nu in &classes {
        for mu in &classes {
            let lhs = both.get(nu, mu)?;
            let mut rhs = Series::zero(&vars, field, None);
            for s in &classes {
                let t = left.get(nu, s)?.try_mul(&right.get(&s.negate(), mu)?)?;
                rhs = rhs.try_add(&t.scale_rational(&ratio(&s.z())))?;
            }
            rep.series(format!("nu={nu} mu={mu}"), &lhs, &rhs)?;
        }
    }
    Ok(rep)
}

/// `H•_{ν,−μ}(0,0) = δ_{νμ}/z_μ`.
pub fn check_orthogonality(n: u32, d: u32) -> Result<Report> {
    let t = char_table(n, d)?;
    let field = t.field();
    let mut rep = Report::new("hurwitz orthogonality");
    for nu in t.classes() {
        for mu in t.classes() {
            let (cn, cm) = (t.col_of(nu).unwrap(), t.col_of(&mu.negate()).unwrap());
            let mut acc = field.zero();
            for r in 0..t.irreps().len() {
                acc.add_mul(t.entry(r, cn), t.entry(r, cm));
            }
            let lhs = acc.scale(&(BigRational::one() / (ratio(t.z(cn)) * ratio(t.z(cm)))));
            let rhs = if nu == mu {
                field.from_rational(BigRational::one() / ratio(&mu.z()))
            } else {
                field.zero()
            };
            rep.value(format!("nu={nu} mu={mu}"), &lhs, &rhs);
        }
    }
    Ok(rep)
}

/// `Ṽ_τ(0)` for purely untwisted `τ`: `(1/z_τ) ∏_j (−1)^{d_j} q^{d_j/2}/(1 − q^{d_j})`
/// after the change of variables.
pub fn untwisted_vertex(tau: &MultiPartition, order: i64) -> Result<Series> {
    let n = tau.n();
    if !tau.is_untwisted() {
        return Err(Error::Appendix(format!("{tau} has twisted parts")));
    }
    let field = field_for_modulus(n);
    let mut t = RationalTerm::new(field.one(), vec![Rational64::zero(); n as usize]);
    for &(d, _) in &tau.parts() {
        t = t.mul(&csc_term(n, d));
    }
    let t = t.scale(&field.from_rational(BigRational::one() / ratio(&tau.z())));
    t.substitute(&theorem1_images(n)?, &VarSet::ux_side(n), order)
}

/// The matrix `Φ_d` of the invertibility argument together with the system it solves.
#[derive(Debug, Clone)]
pub struct PhiMatrix {
    pub n: u32,
    pub d: u32,
    pub rows: Vec<RowLabel>,
    pub cols: Vec<MultiPartition>,
    pub entries: Vec<Vec<Series>>,
}

/// `H̃(k/n)` tables keyed by `(size, k)`.
struct TildeTables {
    n: u32,
    prec: i64,
    map: HashMap<(u32, u32), HurwitzTable>,
}

impl TildeTables {
    fn get(&mut self, size: u32, k: u32) -> Result<&HurwitzTable> {
        if !self.map.contains_key(&(size, k)) {
            let t = HurwitzTable::tilde(self.n, size, Rational64::new(k as i64, self.n as i64), self.prec)?;
            self.map.insert((size, k), t);
        }
        Ok(&self.map[&(size, k)])
    }
}

fn untwisted_of_size(n: u32, e: u32) -> Vec<MultiPartition> {
    Partition::all(e)
        .into_iter()
        .map(|p| {
            let mut comps = vec![Partition::empty(); n as usize];
            comps[0] = p;
            MultiPartition::new(n, comps).expect("n components")
        })
        .collect()
}

/// Build `Φ_d` on `(u, x)` to total degree `order`.
pub fn phi_matrix(n: u32, d: u32, order: i64) -> Result<PhiMatrix> {
    let rows = c_set(n, d)?;
    let cols: Vec<MultiPartition> = rows.iter().map(|r| r.eta.clone()).collect();
    let prec = order + d as i64;
    let mut tables = TildeTables {
        n,
        prec,
        map: HashMap::new(),
    };
    let field = field_for_modulus(n);
    let vars = VarSet::ux_side(n);
    let mut vt: HashMap<MultiPartition, Series> = HashMap::new();
    for e in 1..d {
        for tau in untwisted_of_size(n, e) {
            let s = untwisted_vertex(&tau, order)?;
            vt.insert(tau, s);
        }
    }
    let mut entries = Vec::with_capacity(rows.len());
    for row in &rows {
        let (mu, k) = (&row.mu, row.k);
        let h = tables.get(mu.size(), k)?;
        let mut line = Vec::with_capacity(cols.len());
        for eta in &cols {
            let s = if eta.size() > mu.size() {
                Series::zero(&vars, field, Some(prec))
            } else if eta.size() == mu.size() {
                h.get(&eta.g(k as i64), mu)?.scale_rational(&ratio(&eta.z()))
            } else {
                let mut acc = Series::zero(&vars, field, None);
                for tau in untwisted_of_size(n, mu.size() - eta.size()) {
                    let nu = tau.union(eta)?;
                    let hh = h.get(&nu.g(k as i64), mu)?;
                    acc = acc.try_add(&vt[&tau].try_mul(&hh)?.scale_rational(&ratio(&nu.z())))?;
                }
                acc
            };
            line.push(s);
        }
        entries.push(line);
    }
    Ok(PhiMatrix {
        n,
        d,
        rows,
        cols,
        entries,
    })
}

impl PhiMatrix {
    /// `Φ_d α_d = β_d` with `α` the twisted vertices and `β` the untwisted corrections.
    pub fn check_system(&self, order: i64) -> Result<Report> {
        let n = self.n;
        let field = field_for_modulus(n);
        let vars = VarSet::ux_side(n);
        let mut fams: BTreeMap<u32, VertexFamily> = BTreeMap::new();
        for e in 1..=self.d {
            fams.insert(e, gw_family(n, e, Rational64::zero(), order)?);
        }
        let alpha: Vec<Series> = self
            .cols
            .iter()
            .map(|eta| fams[&eta.size()].get(eta).cloned().unwrap())
            .collect();
        let mut tables = TildeTables {
            n,
            prec: order + self.d as i64,
            map: HashMap::new(),
        };
        let mut rep = Report::new("phi system");
        for (row, line) in self.rows.iter().zip(&self.entries) {
            let mut lhs = Series::zero(&vars, field, None);
            for (phi, a) in line.iter().zip(&alpha) {
                lhs = lhs.try_add(&phi.try_mul(a)?)?;
            }
            let h = tables.get(row.mu.size(), row.k)?;
            let mut beta = Series::zero(&vars, field, None);
            for tau in untwisted_of_size(n, row.mu.size()) {
                let v = fams[&row.mu.size()].get(&tau).unwrap();
                let hh = h.get(&tau.g(row.k as i64), &row.mu)?;
                beta = beta.try_sub(&v.try_mul(&hh)?.scale_rational(&ratio(&tau.z())))?;
            }
            rep.series(format!("mu={} k={}", row.mu, row.k), &lhs, &beta)?;
        }
        Ok(rep)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "d": self.d,
            "rows": self.rows.iter().map(|r| json!({
                "mu": r.mu.to_string(),
                "k": r.k,
                "eta": r.eta.to_string(),
            })).collect::<Vec<_>>(),
            "cols": self.cols.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "entries": self.entries.iter().map(|l| l.iter().map(Series::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Determinant over the field by Gaussian elimination.
pub fn det(mut m: Vec<Vec<CycNum>>, field: &'static CyclotomicField) -> Result<CycNum> {
    let size = m.len();
    let mut acc = field.one();
    for c in 0..size {
        let Some(p) = (c..size).find(|&r| !m[r][c].is_zero()) else {
            return Ok(field.zero());
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        let pivot = m[c][c].clone();
        acc = &acc * &pivot;
        let inv = pivot.inv()?;
        for r in c + 1..size {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] * &inv;
            for j in c..size {
                let t = &f * &m[c][j];
                m[r][j] -= &t;
            }
        }
    }
    Ok(acc)
}

/// Determinant of a small matrix of series by cofactor expansion.
pub fn series_det(m: &[Vec<Series>], vars: &Arc<VarSet>, field: &'static CyclotomicField) -> Result<Series> {
    fn go(m: &[Vec<Series>], rows: &[usize], cols: &mut Vec<usize>, field: &'static CyclotomicField, vars: &Arc<VarSet>) -> Result<Series> {
        let Some((&r, rest)) = rows.split_first() else {
            return Ok(Series::one(vars, field));
        };
        let mut acc = Series::zero(vars, field, None);
        for idx in 0..cols.len() {
            let c = cols.remove(idx);
            if !m[r][c].is_zero() {
                let minor = go(m, rest, cols, field, vars)?;
                let t = m[r][c].try_mul(&minor)?;
                acc = if idx % 2 == 0 { acc.try_add(&t)? } else { acc.try_sub(&t)? };
            }
            cols.insert(idx, c);
        }
        Ok(acc)
    }
    let rows: Vec<usize> = (0..m.len()).collect();
    let mut cols: Vec<usize> = (0..m.len()).collect();
    go(m, &rows, &mut cols, field, vars)
}

/// One diagonal sub-block of `Φ̃_τ` with its leading-term data.
#[derive(Debug, Clone)]
pub struct SubBlock {
    pub tau: Partition,
    pub i: u32,
    pub h: Vec<u32>,
    pub rows: Vec<RowLabel>,
    pub cols: Vec<MultiPartition>,
    pub leading: Vec<Vec<CycNum>>,
    pub det: CycNum,
    pub closed_form: CycNum,
}

/// Structure of the specialization `Φ̃` (`u = x_2 = … = 0`) of the diagonal blocks of
/// `Φ_d`, checked block by block.
pub fn check_appendix(n: u32, d: u32, order: i64) -> Result<(Report, Vec<SubBlock>)> {
    let field = field_for_modulus(n);
    let x1 = VarSet::new(vec!["x1".into()], 1, vec![1]);
    let mut rep = Report::new("appendix");
    let mut blocks = Vec::new();
    let all_rows = c_set(n, d)?;
    rep.flag(
        format!("|B_{d}| = |C_{d}| = {}", all_rows.len()),
        true,
        None,
    );
    if n < 2 {
        return Ok((rep, blocks));
    }
    let xi_inv = field.zeta(2 * n, -1)?;
    for e in 1..=d {
        let rows: Vec<&RowLabel> = all_rows.iter().filter(|r| r.mu.size() == e).collect();
        let cols: Vec<&MultiPartition> = rows.iter().map(|r| &r.eta).collect();
        // Φ̃ entries in x_1 alone
        let mut tables: HashMap<u32, HurwitzTable> = HashMap::new();
        let mut ent: Vec<Vec<Series>> = Vec::new();
        for row in &rows {
            if !tables.contains_key(&row.k) {
                let c = &xi_inv * &field.from_ratio(Rational64::new(row.k as i64, n as i64));
                let t = HurwitzTable::build(n, e, &x1, order, |cc| Ok(vec![&c * &cc.f[1]]))?;
                tables.insert(row.k, t);
            }
            let t = &tables[&row.k];
            let mut line = Vec::new();
            for eta in &cols {
                line.push(t.get(&eta.g(row.k as i64), &row.mu)?.scale_rational(&ratio(&eta.z())));
            }
            ent.push(line);
        }
        // block diagonal across underlying partitions
        let mut off_ok = true;
        for (r, row) in rows.iter().enumerate() {
            for (c, eta) in cols.iter().enumerate() {
                if row.mu.underlying() != eta.underlying() && !ent[r][c].is_zero() {
                    off_ok = false;
                }
            }
        }
        rep.flag(format!("size {e}: zero across different underlying partitions"), off_ok, None);

        let taus: BTreeSet<Partition> = cols.iter().map(|c| c.underlying()).collect();
        for tau in taus {
            let ri: Vec<usize> = (0..rows.len()).filter(|&r| rows[r].mu.underlying() == tau).collect();
            let ci: Vec<usize> = (0..cols.len()).filter(|&c| cols[c].underlying() == tau).collect();
            rep.flag(format!("tau={tau}: square block {}x{}", ri.len(), ci.len()), ri.len() == ci.len(), None);
            let c = num_integer::gcd(tau.parts()[0], n);
            let tau1 = tau.parts()[0] as i64;
            // sub-block membership
            let col_key = |eta: &MultiPartition| -> Result<(u32, Vec<u32>)> {
                let fp = FirstPart::of(eta)?;
                Ok((fp.h1 / c + 1, twisting_partition(&tilde(eta))))
            };
            let row_key = |row: &RowLabel| -> (u32, Vec<u32>) {
                let r = (tau1 * row.k as i64).rem_euclid(n as i64) as u32;
                let h = twisting_partition(&tilde(&row.mu).negate().g(row.k as i64));
                (r / c + 1, h)
            };
            let mut groups: BTreeMap<(u32, Vec<u32>), (Vec<usize>, Vec<usize>)> = BTreeMap::new();
            for &r in &ri {
                groups.entry(row_key(rows[r])).or_default().0.push(r);
            }
            for &cc in &ci {
                groups.entry(col_key(cols[cc])?).or_default().1.push(cc);
            }
            // column degree bound: nothing in a column below its h̄_1
            for &cc in &ci {
                let hb = FirstPart::of(cols[cc])?.h1_bar as i64;
                let ok = ri.iter().all(|&r| ent[r][cc].valuation().map_or(true, |v| v >= hb));
                rep.flag(format!("tau={tau} col {}: degree >= {hb}", cols[cc]), ok, None);
            }
            for ((i, h), (rs, cs)) in groups {
                let label = format!("tau={tau} i={i} h={h:?}");
                if rs.len() != cs.len() {
                    rep.flag(format!("{label}: square"), false, Some(format!("{} rows, {} cols", rs.len(), cs.len())));
                    continue;
                }
                let mut leading = Vec::new();
                let mut entries_ok = true;
                for &r in &rs {
                    let row = rows[r];
                    let kn = BigRational::new(BigInt::from(row.k), BigInt::from(n));
                    let mut line = Vec::new();
                    for &cc in &cs {
                        let eta = cols[cc];
                        let fp = FirstPart::of(eta)?;
                        let hb = fp.h1_bar;
                        let got = ent[r][cc].coeff(&[Rational64::from_integer(hb as i64)])?;
                        let base = xi_inv.scale(&(kn.clone() * BigRational::from_integer(fp.eta1.into())));
                        let want = base
                            .pow(hb as i64)?
                            .scale(&(ratio(&eta.aut()) / (ratio(&row.mu.aut()) * ratio(&factorial(hb as u64)))));
                        if got != want {
                            entries_ok = false;
                        }
                        line.push(got);
                    }
                    leading.push(line);
                }
                rep.flag(format!("{label}: leading terms"), entries_ok, None);
                let dl = det(leading.clone(), field)?;
                // closed form
                let mut cf = field.one();
                for &r in &rs {
                    cf = cf.scale(&(BigRational::one() / ratio(&rows[r].mu.aut())));
                }
                let mut vander = Vec::new();
                for &r in &rs {
                    let kn = Rational64::new(rows[r].k as i64, n as i64);
                    let mut line = Vec::new();
                    for &cc in &cs {
                        let hb = FirstPart::of(cols[cc])?.h1_bar as i32;
                        line.push(field.from_ratio(kn.pow(hb)));
                    }
                    vander.push(line);
                }
                for &cc in &cs {
                    let fp = FirstPart::of(cols[cc])?;
                    let f = xi_inv
                        .scale(&BigRational::from_integer(fp.eta1.into()))
                        .pow(fp.h1_bar as i64)?
                        .scale(&(ratio(&cols[cc].aut()) / ratio(&factorial(fp.h1_bar as u64))));
                    cf = &cf * &f;
                }
                cf = &cf * &det(vander, field)?;
                rep.value(format!("{label}: leading determinant"), &dl, &cf);
                rep.flag(format!("{label}: leading determinant nonzero"), !dl.is_zero(), None);
                blocks.push(SubBlock {
                    tau: tau.clone(),
                    i,
                    h,
                    rows: rs.iter().map(|&r| rows[r].clone()).collect(),
                    cols: cs.iter().map(|&cc| cols[cc].clone()).collect(),
                    leading,
                    det: dl,
                    closed_form: cf,
                });
            }
            // the whole τ-block is invertible over C((x_1))
            let m: Vec<Vec<Series>> = ri
                .iter()
                .map(|&r| ci.iter().map(|&cc| ent[r][cc].clone()).collect())
                .collect();
            let dt = series_det(&m, &x1, field)?;
            rep.flag(
                format!("tau={tau}: det nonzero below order {order}"),
                !dt.is_zero(),
                dt.valuation().map(|v| format!("valuation {v}")),
            );
        }
    }
    Ok((rep, blocks))
}
