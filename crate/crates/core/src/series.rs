//! Truncated multivariate Puiseux series over [`CycNum`].
//!
//! Exponents live on the lattice `(1/D)Z` and are stored scaled by `D`. Truncation is by
//! a weighted total degree `Σ w_i e_i`, also in scaled units. A series with precision
//! `Some(p)` knows every coefficient of degree `< p` and stores nothing at or above `p`;
//! `None` means the stored terms are the exact Laurent polynomial.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::cyclo::{CycNum, CyclotomicField};
use crate::error::{Error, Result};

/// Ordered formal variables with an exponent denominator and grading weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Vec<String>,
    denom: i64,
    weights: Vec<i64>,
}

impl VarSet {
    pub fn new(names: Vec<String>, denom: i64, weights: Vec<i64>) -> Arc<VarSet> {
        assert!(denom >= 1);
        assert_eq!(names.len(), weights.len());
        assert!(weights.iter().all(|&w| w > 0), "grading weights must be positive");
        Arc::new(VarSet {
            names,
            denom,
            weights,
        })
    }

    /// `q_0, …, q_{n-1}` with exponents in `(1/2n)Z`, each of weight one.
    pub fn q_side(n: u32) -> Arc<VarSet> {
        let names = (0..n).map(|i| format!("q{i}")).collect();
        VarSet::new(names, 2 * n as i64, vec![1; n as usize])
    }

    /// `u, x_1, …, x_{n-1}` with integer exponents, graded by total degree.
    pub fn ux_side(n: u32) -> Arc<VarSet> {
        let mut names = vec!["u".to_string()];
        names.extend((1..n).map(|i| format!("x{i}")));
        VarSet::new(names, 1, vec![1; n as usize])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Weighted degree of a scaled exponent vector.
    pub fn degree(&self, e: &[i64]) -> i64 {
        e.iter().zip(&self.weights).map(|(a, w)| a * w).sum()
    }

    /// Put a rational onto the scaled lattice.
    pub fn scale(&self, r: Rational64) -> Result<i64> {
        let s = r * Rational64::from_integer(self.denom);
        if !s.is_integer() {
            return Err(Error::OffLattice(r.to_string(), self.denom));
        }
        Ok(s.to_integer())
    }

    pub fn scale_all(&self, e: &[Rational64]) -> Result<Vec<i64>> {
        if e.len() != self.len() {
            return Err(Error::VarSetMismatch);
        }
        e.iter().map(|&r| self.scale(r)).collect()
    }

    pub fn unscale(&self, e: &[i64]) -> Vec<Rational64> {
        e.iter().map(|&a| Rational64::new(a, self.denom)).collect()
    }

    /// A degree in scaled units, as a rational in true units.
    pub fn degree_value(&self, scaled: i64) -> Rational64 {
        Rational64::new(scaled, self.denom)
    }
}

/// A truncated Puiseux series.
#[derive(Clone)]
pub struct Series {
    vars: Arc<VarSet>,
    field: &'static CyclotomicField,
    terms: HashMap<Vec<i64>, CycNum>,
    prec: Option<i64>,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn add_exps(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Series {
    pub fn zero(vars: &Arc<VarSet>, field: &'static CyclotomicField, prec: Option<i64>) -> Series {
        Series {
            vars: vars.clone(),
            field,
            terms: HashMap::new(),
            prec,
        }
    }

    pub fn constant(vars: &Arc<VarSet>, c: CycNum) -> Series {
        Series::monomial_scaled(vars, c, vec![0; vars.len()])
    }

    pub fn one(vars: &Arc<VarSet>, field: &'static CyclotomicField) -> Series {
        Series::constant(vars, field.one())
    }

    /// `c · x^e` with scaled exponents; exact.
    pub fn monomial_scaled(vars: &Arc<VarSet>, c: CycNum, e: Vec<i64>) -> Series {
        assert_eq!(e.len(), vars.len());
        let mut s = Series::zero(vars, c.field(), None);
        if !c.is_zero() {
            s.terms.insert(e, c);
        }
        s
    }

    /// `c · x^e` with rational exponents; exact.
    pub fn monomial(vars: &Arc<VarSet>, c: CycNum, e: &[Rational64]) -> Result<Series> {
        Ok(Series::monomial_scaled(vars, c, vars.scale_all(e)?))
    }

    /// The variable `name` to the first power.
    pub fn var(vars: &Arc<VarSet>, field: &'static CyclotomicField, name: &str) -> Result<Series> {
        let i = vars.index_of(name)?;
        let mut e = vec![0; vars.len()];
        e[i] = vars.denom;
        Ok(Series::monomial_scaled(vars, field.one(), e))
    }

    /// Build from scaled terms, dropping zeros and anything at or above `prec`.
    pub fn from_terms(
        vars: &Arc<VarSet>,
        field: &'static CyclotomicField,
        terms: impl IntoIterator<Item = (Vec<i64>, CycNum)>,
        prec: Option<i64>,
    ) -> Series {
        let mut s = Series::zero(vars, field, prec);
        for (e, c) in terms {
            s.add_term(e, &c);
        }
        s
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn field(&self) -> &'static CyclotomicField {
        self.field
    }

    /// Scaled truncation bound; `None` for an exact polynomial.
    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True if every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &CycNum)> {
        self.terms.iter()
    }

    /// Terms ordered by degree, then exponent vector.
    pub fn sorted_terms(&self) -> Vec<(&Vec<i64>, &CycNum)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            (self.vars.degree(a.0), a.0).cmp(&(self.vars.degree(b.0), b.0))
        });
        v
    }

    /// Lowest scaled degree present, or `None` for the zero series.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().map(|e| self.vars.degree(e)).min()
    }

    fn in_range(&self, e: &[i64]) -> bool {
        match self.prec {
            Some(p) => self.vars.degree(e) < p,
            None => true,
        }
    }

    fn add_term(&mut self, e: Vec<i64>, c: &CycNum) {
        if c.is_zero() || !self.in_range(&e) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
        }
    }

    fn check_compatible(&self, other: &Series) -> Result<()> {
        if !Arc::ptr_eq(&self.vars, &other.vars) && *self.vars != *other.vars {
            return Err(Error::VarSetMismatch);
        }
        if self.field.order() != other.field.order() {
            return Err(Error::FieldMismatch(self.field.order(), other.field.order()));
        }
        Ok(())
    }

    /// Lower the precision to `min(self.prec, prec)`, dropping terms.
    pub fn truncate(&self, prec: i64) -> Series {
        let p = min_prec(self.prec, Some(prec));
        let mut out = Series::zero(&self.vars, self.field, p);
        for (e, c) in &self.terms {
            if out.in_range(e) {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Coefficient at a rational exponent vector.
    pub fn coeff(&self, e: &[Rational64]) -> Result<CycNum> {
        self.coeff_scaled(&self.vars.scale_all(e)?)
    }

    /// Coefficient at a scaled exponent vector; errors at or above the precision.
    pub fn coeff_scaled(&self, e: &[i64]) -> Result<CycNum> {
        if e.len() != self.vars.len() {
            return Err(Error::VarSetMismatch);
        }
        if let Some(p) = self.prec {
            let d = self.vars.degree(e);
            if d >= p {
                return Err(Error::AbovePrecision {
                    degree: self.vars.degree_value(d).to_string(),
                    precision: self.vars.degree_value(p).to_string(),
                });
            }
        }
        Ok(self
            .terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| self.field.zero()))
    }

    pub fn try_add(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let mut out = self.truncate_to(min_prec(self.prec, other.prec));
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Series) -> Result<Series> {
        self.try_add(&-other)
    }

    fn truncate_to(&self, p: Option<i64>) -> Series {
        match p {
            Some(p) => self.truncate(p),
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: &CycNum) -> Series {
        let mut out = Series::zero(&self.vars, self.field, self.prec);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v * c);
        }
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> Series {
        self.scale(&self.field.from_rational(r.clone()))
    }

    /// Multiply by the monomial `x^shift` (scaled); precision moves with it.
    pub fn shift(&self, shift: &[i64]) -> Series {
        let d = self.vars.degree(shift);
        Series {
            vars: self.vars.clone(),
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (add_exps(e, shift), c.clone()))
                .collect(),
            prec: self.prec.map(|p| p + d),
        }
    }

    fn degree_sorted(&self) -> Vec<(i64, &Vec<i64>, &CycNum)> {
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|(e, c)| (self.vars.degree(e), e, c))
            .collect();
        v.sort_by_key(|t| t.0);
        v
    }

    pub fn try_mul(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let (vf, vg) = (self.valuation(), other.valuation());
        let prec = match (vf, vg) {
            // an exact zero annihilates everything
            (None, _) if self.prec.is_none() => return Ok(Series::zero(&self.vars, self.field, None)),
            (_, None) if other.prec.is_none() => return Ok(Series::zero(&self.vars, self.field, None)),
            _ => {
                let a = self.prec.map(|p| p + vg.unwrap_or_else(|| other.prec.unwrap()));
                let b = other.prec.map(|p| p + vf.unwrap_or_else(|| self.prec.unwrap()));
                min_prec(a, b)
            }
        };
        let mut out = Series::zero(&self.vars, self.field, prec);
        let f = self.degree_sorted();
        let g = other.degree_sorted();
        for (df, ef, cf) in &f {
            for (dg, eg, cg) in &g {
                if let Some(p) = prec {
                    if df + dg >= p {
                        break;
                    }
                }
                let e = add_exps(ef, eg);
                match out.terms.get_mut(&e) {
                    Some(acc) => acc.add_mul(cf, cg),
                    None => {
                        out.terms.insert(e, *cf * *cg);
                    }
                }
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Split `c·x^m·(1 + r)` where `c·x^m` is the unique lowest-degree term.
    fn split_unit(&self) -> Result<(CycNum, Vec<i64>, Series)> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::NotAUnit("zero series".into()))?;
        let lows: Vec<_> = self
            .terms
            .iter()
            .filter(|(e, _)| self.vars.degree(e) == v)
            .collect();
        if lows.len() != 1 {
            return Err(Error::NotAUnit(format!(
                "{} terms share the lowest degree",
                lows.len()
            )));
        }
        let (m, c) = (lows[0].0.clone(), lows[0].1.clone());
        let cinv = c.inv()?;
        let neg: Vec<i64> = m.iter().map(|x| -x).collect();
        let mut r = self.shift(&neg).scale(&cinv);
        r.terms.remove(&vec![0; self.vars.len()]);
        Ok((c, m, r))
    }

    /// Multiplicative inverse; the lowest-degree part must be a single unit monomial.
    pub fn inv(&self) -> Result<Series> {
        let (c, m, r) = self.split_unit()?;
        let cinv = c.inv()?;
        let neg: Vec<i64> = m.iter().map(|x| -x).collect();
        if r.is_zero() && self.prec.is_none() {
            return Ok(Series::monomial_scaled(&self.vars, cinv, neg));
        }
        let p = r.prec.ok_or(Error::ExactSeries)?;
        // g = 1/(1+r), built degree by degree from g = 1 - r g
        let rs: Vec<_> = r.degree_sorted().into_iter().map(|(d, e, c)| (d, e.clone(), c.clone())).collect();
        let g = layered(&self.vars, self.field, p, |d, layers| {
            let mut acc: HashMap<Vec<i64>, CycNum> = HashMap::new();
            for (dr, er, cr) in &rs {
                if *dr > d {
                    break;
                }
                for (eg, cg) in &layers[(d - dr) as usize] {
                    let e = add_exps(er, eg);
                    let entry = acc.entry(e).or_insert_with(|| self.field.zero());
                    entry.add_mul(cr, cg);
                }
            }
            acc.into_iter().map(|(e, c)| (e, -c)).collect()
        });
        Ok(g.scale(&cinv).shift(&neg))
    }

    /// `exp(f)` for `f` whose terms all have strictly positive degree.
    pub fn exp(&self) -> Result<Series> {
        if let Some(v) = self.valuation() {
            if v <= 0 {
                return Err(Error::NonzeroConstantTerm);
            }
        }
        let p = match self.prec {
            Some(p) => p,
            None if self.is_zero() => return Ok(Series::one(&self.vars, self.field)),
            None => return Err(Error::ExactSeries),
        };
        let fs = self.theta_terms();
        // deg(e) g_e = Σ deg(e') f_{e'} g_{e-e'}
        Ok(layered(&self.vars, self.field, p, |d, layers| {
            let mut acc: HashMap<Vec<i64>, CycNum> = HashMap::new();
            for (df, ef, cf) in &fs {
                if *df > d {
                    break;
                }
                for (eg, cg) in &layers[(d - df) as usize] {
                    let entry = acc.entry(add_exps(ef, eg)).or_insert_with(|| self.field.zero());
                    entry.add_mul(cf, cg);
                }
            }
            let inv_d = BigRational::new(BigInt::one(), BigInt::from(d));
            acc.into_iter().map(|(e, c)| (e, c.scale(&inv_d))).collect()
        }))
    }

    /// `log(g)` for `g = 1 + (strictly positive degree terms)`. Used as an oracle for `exp`.
    pub fn log(&self) -> Result<Series> {
        let zero_e = vec![0; self.vars.len()];
        let one_ok = self.terms.get(&zero_e).map(|c| c.is_one()).unwrap_or(false);
        if !one_ok || self.terms.keys().any(|e| e != &zero_e && self.vars.degree(e) <= 0) {
            return Err(Error::NotAUnit("log needs 1 + positive-degree terms".into()));
        }
        let p = match self.prec {
            Some(p) => p,
            None if self.terms.len() == 1 => return Ok(Series::zero(&self.vars, self.field, None)),
            None => return Err(Error::ExactSeries),
        };
        let mut by_deg: Vec<Vec<(Vec<i64>, CycNum)>> = vec![Vec::new(); p.max(0) as usize];
        for (e, c) in &self.terms {
            let d = self.vars.degree(e);
            if d > 0 {
                by_deg[d as usize].push((e.clone(), c.clone()));
            }
        }
        // h_d = g_d - (1/d) Σ_{0<d'<d} d' h_{d'} g_{d-d'}
        let mut h: Vec<Vec<(Vec<i64>, CycNum)>> = vec![Vec::new(); p.max(0) as usize];
        for d in 1..p {
            let mut acc: HashMap<Vec<i64>, CycNum> = HashMap::new();
            for dp in 1..d {
                let w = rat(dp);
                for (eh, ch) in &h[dp as usize] {
                    let ch = ch.scale(&w);
                    for (eg, cg) in &by_deg[(d - dp) as usize] {
                        let entry = acc.entry(add_exps(eh, eg)).or_insert_with(|| self.field.zero());
                        entry.add_mul(&ch, cg);
                    }
                }
            }
            let inv_d = BigRational::new(BigInt::one(), BigInt::from(d));
            let mut layer: HashMap<Vec<i64>, CycNum> =
                by_deg[d as usize].iter().cloned().collect();
            for (e, c) in acc {
                let entry = layer.entry(e).or_insert_with(|| self.field.zero());
                *entry -= &c.scale(&inv_d);
            }
            h[d as usize] = layer.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        }
        Ok(Series::from_terms(
            &self.vars,
            self.field,
            h.into_iter().flatten(),
            Some(p),
        ))
    }

    /// Terms sorted by degree with coefficients pre-multiplied by their degree.
    fn theta_terms(&self) -> Vec<(i64, Vec<i64>, CycNum)> {
        self.degree_sorted()
            .into_iter()
            .map(|(d, e, c)| (d, e.clone(), c.scale(&rat(d))))
            .collect()
    }

    /// Integer power; negative exponents go through [`Series::inv`].
    pub fn pow(&self, k: i64) -> Result<Series> {
        let mut base = if k < 0 { self.inv()? } else { self.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = Series::one(&self.vars, self.field);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `self / (1 - c·x^m)` for a monomial of positive degree, to precision `prec`
    /// when `self` is exact.
    pub fn div_one_minus(&self, c: &CycNum, m: &[i64], prec: Option<i64>) -> Result<Series> {
        let dm = self.vars.degree(m);
        if dm <= 0 {
            return Err(Error::NotAUnit("geometric ratio must have positive degree".into()));
        }
        let p = min_prec(self.prec, prec).ok_or(Error::ExactSeries)?;
        let mut out = self.truncate(p);
        let mut cur = out.clone();
        loop {
            let next = cur.shift(m).scale(c).truncate(p);
            if next.is_zero() {
                break;
            }
            for (e, v) in &next.terms {
                out.add_term(e.clone(), v);
            }
            cur = next;
        }
        Ok(out)
    }

    /// Lowest-degree term where `self` and `other` differ below their common precision.
    pub fn first_difference(&self, other: &Series) -> Result<Option<Mismatch>> {
        let diff = self.try_sub(other)?;
        Ok(diff.sorted_terms().first().map(|(e, _)| Mismatch {
            exponents: self.vars.unscale(e),
            lhs: self.terms.get(*e).cloned().unwrap_or_else(|| self.field.zero()),
            rhs: other.terms.get(*e).cloned().unwrap_or_else(|| self.field.zero()),
        }))
    }

    /// Substitute `x_v ↦ images[v]` landing in `target`.
    ///
    /// An exact source can always be substituted; the result is computed to `prec`.
    /// A truncated source is accepted only when the images are monomials whose degrees
    /// are a common positive multiple of the source weights, so the truncation carries over.
    pub fn substitute(
        &self,
        images: &[ExpImage],
        target: &Arc<VarSet>,
        prec: i64,
    ) -> Result<Series> {
        if images.len() != self.vars.len() {
            return Err(Error::VarSetMismatch);
        }
        let mut prec = prec;
        if let Some(p) = self.prec {
            let ratio = self.uniform_scaling(images, target)?;
            let carried = ratio * Rational64::from_integer(p);
            prec = prec.min(carried.ceil().to_integer());
        }
        let mut out = Series::zero(target, self.field, Some(prec));
        for (e, c) in &self.terms {
            let exps = self.vars.unscale(e);
            let img = ExpImage::combine(images, &exps, self.field)?;
            out = out.try_add(&img.to_series(target, c, prec)?)?;
        }
        Ok(out)
    }

    /// Scaled target degree per scaled source degree, if the images allow truncation transfer.
    fn uniform_scaling(&self, images: &[ExpImage], target: &Arc<VarSet>) -> Result<Rational64> {
        let mut ratio: Option<Rational64> = None;
        for (v, img) in images.iter().enumerate() {
            if img.linear.iter().any(|c| !c.is_zero()) {
                return Err(Error::PrecisionLoss(format!(
                    "image of {} has an exponential part",
                    self.vars.names[v]
                )));
            }
            let m = target.scale_all(&img.monomial)?;
            // per unit of source scaled degree
            let r = Rational64::new(target.degree(&m), self.vars.weights[v] * self.vars.denom);
            if r <= Rational64::zero() || ratio.is_some_and(|x| x != r) {
                return Err(Error::PrecisionLoss(format!(
                    "image of {} does not scale the grading uniformly",
                    self.vars.names[v]
                )));
            }
            ratio = Some(r);
        }
        Ok(ratio.unwrap_or_else(Rational64::one))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| {
                json!({
                    "exponents": self.vars.unscale(e).iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    "coeff": c.to_string(),
                })
            })
            .collect();
        json!({
            "field_order": self.field.order(),
            "variables": self.vars.names,
            "precision": self.prec.map(|p| self.vars.degree_value(p).to_string()),
            "terms": terms,
        })
    }

    /// Inverse of [`Series::to_json`]; the grading weights come from `vars`.
    pub fn from_json(v: &Value, vars: &Arc<VarSet>, field: &'static CyclotomicField) -> Result<Series> {
        let bad = |what: &str| Error::Parse(format!("series json: {what}"));
        if v["field_order"].as_u64() != Some(field.order() as u64) {
            return Err(bad("field order"));
        }
        let names: Vec<String> = v["variables"]
            .as_array()
            .ok_or_else(|| bad("variables"))?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("variable name")))
            .collect::<Result<_>>()?;
        if names != vars.names {
            return Err(Error::VarSetMismatch);
        }
        let prec = match &v["precision"] {
            Value::Null => None,
            Value::String(s) => Some(vars.scale(parse_ratio(s)?)?),
            _ => return Err(bad("precision")),
        };
        let mut out = Series::zero(vars, field, prec);
        for t in v["terms"].as_array().ok_or_else(|| bad("terms"))? {
            let exps: Vec<Rational64> = t["exponents"]
                .as_array()
                .ok_or_else(|| bad("exponents"))?
                .iter()
                .map(|x| x.as_str().ok_or_else(|| bad("exponent")).and_then(parse_ratio))
                .collect::<Result<_>>()?;
            let c = field.parse(t["coeff"].as_str().ok_or_else(|| bad("coeff"))?)?;
            out.add_term(vars.scale_all(&exps)?, &c);
        }
        Ok(out)
    }
}

/// Parse `p/q` or an integer into a `Rational64`.
pub fn parse_ratio(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let parse = |x: &str| {
        x.trim()
            .parse::<i64>()
            .map_err(|e| Error::Parse(format!("bad rational `{s}`: {e}")))
    };
    match s.split_once('/') {
        Some((a, b)) => {
            let d = parse(b)?;
            if d == 0 {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rational64::new(parse(a)?, d))
        }
        None => Ok(Rational64::from_integer(parse(s)?)),
    }
}

/// Build a series degree by degree: `step(d, layers)` returns layer `d` given layers `< d`.
fn layered<F>(
    vars: &Arc<VarSet>,
    field: &'static CyclotomicField,
    prec: i64,
    mut step: F,
) -> Series
where
    F: FnMut(i64, &[Vec<(Vec<i64>, CycNum)>]) -> Vec<(Vec<i64>, CycNum)>,
{
    let mut layers: Vec<Vec<(Vec<i64>, CycNum)>> = Vec::new();
    if prec > 0 {
        layers.push(vec![(vec![0; vars.len()], field.one())]);
    }
    for d in 1..prec.max(0) {
        let layer: Vec<_> = step(d, &layers)
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        layers.push(layer);
    }
    Series::from_terms(vars, field, layers.into_iter().flatten(), Some(prec))
}

/// The image `e^{2πi·phase} · y^monomial · exp(Σ_j linear_j y_j)` of one variable.
#[derive(Debug, Clone)]
pub struct ExpImage {
    /// Turns of the root-of-unity prefactor, kept exactly (not reduced mod 1) so that
    /// fractional powers pick a definite branch.
    pub phase: Rational64,
    pub monomial: Vec<Rational64>,
    pub linear: Vec<CycNum>,
}

impl ExpImage {
    /// Plain monomial image with no phase and no exponential part.
    pub fn monomial(field: &'static CyclotomicField, monomial: Vec<Rational64>) -> ExpImage {
        let k = monomial.len();
        ExpImage {
            phase: Rational64::zero(),
            monomial,
            linear: vec![field.zero(); k],
        }
    }

    /// `e^{2πi·phase} · exp(Σ linear_j y_j)`.
    pub fn exponential(phase: Rational64, linear: Vec<CycNum>) -> ExpImage {
        let k = linear.len();
        ExpImage {
            phase,
            monomial: vec![Rational64::zero(); k],
            linear,
        }
    }

    /// Image of the monomial `∏ x_v^{e_v}`: the exponent homomorphism applied factorwise.
    pub fn combine(
        images: &[ExpImage],
        exps: &[Rational64],
        field: &'static CyclotomicField,
    ) -> Result<ExpImage> {
        let k = images.first().map(|i| i.linear.len()).unwrap_or(0);
        let mut out = ExpImage {
            phase: Rational64::zero(),
            monomial: vec![Rational64::zero(); k],
            linear: vec![field.zero(); k],
        };
        for (img, &e) in images.iter().zip(exps) {
            if e.is_zero() {
                continue;
            }
            out.phase += img.phase * e;
            for j in 0..k {
                out.monomial[j] += img.monomial[j] * e;
            }
            let er = BigRational::new(BigInt::from(*e.numer()), BigInt::from(*e.denom()));
            for j in 0..k {
                if !img.linear[j].is_zero() {
                    out.linear[j] += &img.linear[j].scale(&er);
                }
            }
        }
        Ok(out)
    }

    /// The root-of-unity prefactor as a field element.
    pub fn root(&self, field: &'static CyclotomicField) -> Result<CycNum> {
        field.root_from_turns(self.phase)
    }

    /// The linear form `Σ linear_j y_j` as an exact series.
    pub fn linear_series(&self, target: &Arc<VarSet>) -> Result<Series> {
        let field = self.linear.first().map(|c| c.field()).ok_or(Error::VarSetMismatch)?;
        let mut s = Series::zero(target, field, None);
        for (j, c) in self.linear.iter().enumerate() {
            let mut e = vec![0; target.len()];
            e[j] = target.denom();
            s.add_term(e, c);
        }
        Ok(s)
    }

    /// `c · root · y^monomial · exp(linear)` to scaled precision `prec`.
    pub fn to_series(&self, target: &Arc<VarSet>, c: &CycNum, prec: i64) -> Result<Series> {
        if self.linear.len() != target.len() || self.monomial.len() != target.len() {
            return Err(Error::VarSetMismatch);
        }
        let field = c.field();
        let m = target.scale_all(&self.monomial)?;
        let coeff = c * &self.root(field)?;
        let inner = prec - target.degree(&m);
        Ok(exp_linear(target, &self.linear, &coeff, inner).shift(&m))
    }
}

/// `c · exp(Σ_j a_j y_j)` to scaled precision `prec`, via `∏ a_j^{e_j}/e_j!`.
pub fn exp_linear(target: &Arc<VarSet>, a: &[CycNum], c: &CycNum, prec: i64) -> Series {
    let field = c.field();
    let mut out = Series::zero(target, field, Some(prec));
    if prec <= 0 || c.is_zero() {
        return out;
    }
    let unit: Vec<i64> = target.weights().iter().map(|w| w * target.denom()).collect();
    // per-variable power tables a_j^e / e!
    let mut tables: Vec<Vec<CycNum>> = Vec::with_capacity(a.len());
    for (j, aj) in a.iter().enumerate() {
        let mut t = vec![field.one()];
        if !aj.is_zero() {
            let mut e = 1i64;
            while e * unit[j] < prec {
                let next = (&t[(e - 1) as usize] * aj).scale(&BigRational::new(BigInt::one(), BigInt::from(e)));
                t.push(next);
                e += 1;
            }
        }
        tables.push(t);
    }
    let mut stack: Vec<(usize, Vec<i64>, i64, CycNum)> = vec![(0, Vec::new(), 0, c.clone())];
    while let Some((j, exps, deg, coef)) = stack.pop() {
        if j == a.len() {
            let e: Vec<i64> = exps.iter().map(|x| x * target.denom()).collect();
            out.add_term(e, &coef);
            continue;
        }
        for (e, t) in tables[j].iter().enumerate() {
            let d = deg + e as i64 * unit[j];
            if d >= prec {
                break;
            }
            let mut ex = exps.clone();
            ex.push(e as i64);
            stack.push((j + 1, ex, d, &coef * t));
        }
    }
    out
}

/// A coefficient disagreement found by a comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub exponents: Vec<Rational64>,
    pub lhs: CycNum,
    pub rhs: CycNum,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.exponents.iter().map(|r| r.to_string()).collect();
        write!(f, "at [{}]: {} != {}", e.join(", "), self.lhs, self.rhs)
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, (e, c)) in terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (v, r) in self.vars.unscale(e).iter().enumerate() {
                if !r.is_zero() {
                    write!(f, "*{}^{}", self.vars.names[v], r)?;
                }
            }
        }
        if let Some(p) = self.prec {
            write!(f, " + O(deg {})", self.vars.degree_value(p))?;
        }
        Ok(())
    }
}

impl PartialEq for Series {
    /// Equal when they agree below the common precision.
    fn eq(&self, other: &Self) -> bool {
        matches!(self.first_difference(other), Ok(None))
    }
}

impl Add<&Series> for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.try_add(rhs).expect("incompatible series")
    }
}

impl Sub<&Series> for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self.try_sub(rhs).expect("incompatible series")
    }
}

impl Mul<&Series> for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.try_mul(rhs).expect("incompatible series")
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series {
            vars: self.vars.clone(),
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            prec: self.prec,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::field;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn setup() -> (Arc<VarSet>, &'static CyclotomicField) {
        (VarSet::q_side(2), field(4))
    }

    #[test]
    fn geometric_series() {
        let (v, k) = setup();
        let q0 = Series::var(&v, k, "q0").unwrap();
        let one = Series::one(&v, k);
        let geo = one.div_one_minus(&k.one(), &[4, 0], Some(4 * 8)).unwrap();
        let prod = &(&one - &q0) * &geo;
        assert_eq!(prod.prec(), Some(32));
        assert!(prod == Series::one(&v, k));
        assert_eq!(geo.coeff(&[r(3, 1), r(0, 1)]).unwrap(), k.one());
    }

    #[test]
    fn invert_matches_multiplication() {
        let (v, k) = setup();
        let q01 = Series::monomial(&v, k.one(), &[r(1, 1), r(1, 1)]).unwrap();
        let f = (&Series::one(&v, k) - &q01).truncate(4 * 8);
        let g = f.inv().unwrap();
        assert!(&f * &g == Series::one(&v, k));
        assert_eq!(g.coeff(&[r(3, 1), r(3, 1)]).unwrap(), k.one());
        assert!(Series::one(&v, k).inv().unwrap() == Series::one(&v, k));
    }

    #[test]
    fn invert_with_fractional_leading_term() {
        let (v, k) = setup();
        let half = Series::monomial(&v, k.one(), &[r(1, 2), r(1, 2)]).unwrap();
        let q = Series::monomial(&v, k.one(), &[r(1, 1), r(1, 1)]).unwrap();
        let f = (&half - &(&half * &q)).truncate(40);
        let g = f.inv().unwrap();
        assert_eq!(g.coeff(&[r(-1, 2), r(-1, 2)]).unwrap(), k.one());
        assert_eq!(g.coeff(&[r(3, 2), r(3, 2)]).unwrap(), k.one());
        assert!(&f * &g == Series::one(&v, k));
    }

    #[test]
    fn inverse_rejects_non_units() {
        let (v, k) = setup();
        let q0 = Series::var(&v, k, "q0").unwrap();
        let q1 = Series::var(&v, k, "q1").unwrap();
        assert!(matches!((&q0 + &q1).truncate(8).inv(), Err(Error::NotAUnit(_))));
        assert!(Series::zero(&v, k, Some(8)).inv().is_err());
    }

    #[test]
    fn exp_taylor_coefficients() {
        let v = VarSet::ux_side(1);
        let k = field(4);
        let iu = Series::var(&v, k, "u").unwrap().scale(&k.i().unwrap()).truncate(8);
        let e = iu.exp().unwrap();
        assert_eq!(e.coeff(&[r(0, 1)]).unwrap(), k.one());
        assert_eq!(e.coeff(&[r(1, 1)]).unwrap(), k.i().unwrap());
        assert_eq!(e.coeff(&[r(2, 1)]).unwrap(), k.from_ratio(r(-1, 2)));
        assert_eq!(e.coeff(&[r(4, 1)]).unwrap(), k.from_ratio(r(1, 24)));
        assert!(matches!(e.coeff(&[r(8, 1)]), Err(Error::AbovePrecision { .. })));
        assert!(Series::one(&v, k).truncate(4).exp().is_err());
        assert!(Series::zero(&v, k, Some(3)).exp().unwrap() == Series::one(&v, k));
    }

    #[test]
    fn exp_linear_matches_exp() {
        let v = VarSet::ux_side(3);
        let k = field(12);
        let a = vec![k.xi_pow(1), k.from_i64(2), k.xi_pow(5)];
        let direct = exp_linear(&v, &a, &k.one(), 6);
        let img = ExpImage::exponential(r(0, 1), a);
        let via_exp = img.linear_series(&v).unwrap().truncate(6).exp().unwrap();
        assert!(direct == via_exp);
    }

    #[test]
    fn substitution_half_power() {
        let (v, k) = (VarSet::new(vec!["q".into()], 2, vec![1]), field(4));
        let t = VarSet::ux_side(1);
        let half = Series::monomial(&v, k.one(), &[r(1, 2)]).unwrap();
        let img = ExpImage::exponential(r(0, 1), vec![k.i().unwrap()]);
        let got = half.substitute(&[img], &t, 8).unwrap();
        let i_half = k.i().unwrap().scale(&BigRational::new(1.into(), 2.into()));
        let want = exp_linear(&t, &[i_half], &k.one(), 8);
        assert!(got == want);
    }

    #[test]
    fn substitution_identity_and_precision_rules() {
        let (v, k) = setup();
        let q0 = Series::var(&v, k, "q0").unwrap();
        let ids = vec![
            ExpImage::monomial(k, vec![r(1, 1), r(0, 1)]),
            ExpImage::monomial(k, vec![r(0, 1), r(1, 1)]),
        ];
        assert!(q0.substitute(&ids, &v, 40).unwrap() == q0);
        let trunc = q0.truncate(10);
        assert_eq!(trunc.substitute(&ids, &v, 40).unwrap().prec(), Some(10));
        let expo = vec![
            ExpImage::exponential(r(0, 1), vec![k.one(), k.zero()]),
            ExpImage::monomial(k, vec![r(0, 1), r(1, 1)]),
        ];
        assert!(matches!(
            trunc.substitute(&expo, &v, 40),
            Err(Error::PrecisionLoss(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let (v, k) = setup();
        let f = Series::monomial(&v, k.xi_pow(1), &[r(1, 2), r(-1, 1)])
            .unwrap()
            .try_add(&Series::one(&v, k))
            .unwrap()
            .truncate(12);
        let js = f.to_json();
        assert_eq!(js["precision"], "3");
        let back = Series::from_json(&js, &v, k).unwrap();
        assert!(back == f);
        assert_eq!(back.prec(), f.prec());
    }

    #[test]
    fn coefficient_queries() {
        let (v, k) = setup();
        let one = Series::one(&v, k).truncate(8);
        assert!(one.coeff(&[r(1, 1), r(0, 1)]).unwrap().is_zero());
        assert!(one.coeff(&[r(1, 3), r(0, 1)]).is_err());
    }
}
