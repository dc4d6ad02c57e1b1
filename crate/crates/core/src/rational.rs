//! Rational functions of the shape `c · x^m · ∏_j 1/(1 − c_j x^{m_j})`.
//!
//! Every DT-side object here (hook products, the `csc` factor, gluing summands) has
//! this shape. Keeping it factored lets us expand natively in the `q` variables, or push
//! each factor through an exponential change of variables in closed form, which a
//! truncated `q`-series cannot survive (the images have valuation zero).

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use crate::cyclo::{CycNum, CyclotomicField};
use crate::error::{Error, Result};
use crate::series::{exp_linear, ExpImage, Series, VarSet};

/// The factor `1/(1 − coeff · x^monomial)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricFactor {
    pub coeff: CycNum,
    pub monomial: Vec<Rational64>,
}

/// `coeff · x^monomial · ∏ factors`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalTerm {
    pub coeff: CycNum,
    pub monomial: Vec<Rational64>,
    pub factors: Vec<GeometricFactor>,
}

impl RationalTerm {
    pub fn new(coeff: CycNum, monomial: Vec<Rational64>) -> RationalTerm {
        RationalTerm {
            coeff,
            monomial,
            factors: Vec::new(),
        }
    }

    pub fn field(&self) -> &'static CyclotomicField {
        self.coeff.field()
    }

    /// Append the factor `1/(1 − c·x^m)`.
    pub fn with_factor(mut self, c: CycNum, m: Vec<Rational64>) -> RationalTerm {
        self.factors.push(GeometricFactor { coeff: c, monomial: m });
        self
    }

    pub fn mul(&self, other: &RationalTerm) -> RationalTerm {
        RationalTerm {
            coeff: &self.coeff * &other.coeff,
            monomial: self
                .monomial
                .iter()
                .zip(&other.monomial)
                .map(|(a, b)| a + b)
                .collect(),
            factors: self.factors.iter().chain(&other.factors).cloned().collect(),
        }
    }

    pub fn scale(&self, c: &CycNum) -> RationalTerm {
        RationalTerm {
            coeff: &self.coeff * c,
            ..self.clone()
        }
    }

    /// Multiply by the monomial `x^m`.
    pub fn shift(&self, m: &[Rational64]) -> RationalTerm {
        RationalTerm {
            monomial: self.monomial.iter().zip(m).map(|(a, b)| a + b).collect(),
            ..self.clone()
        }
    }

    /// Expand as a series in its own variables; every factor needs positive degree.
    pub fn expand(&self, vars: &Arc<VarSet>, prec: i64) -> Result<Series> {
        let m0 = vars.scale_all(&self.monomial)?;
        let inner = prec - vars.degree(&m0);
        let mut s = Series::constant(vars, self.coeff.clone()).truncate(inner);
        for f in &self.factors {
            let m = vars.scale_all(&f.monomial)?;
            s = s.div_one_minus(&f.coeff, &m, None)?;
        }
        Ok(s.shift(&m0).truncate(prec))
    }

    /// Apply `x_v ↦ images[v]` and expand in `target` to scaled precision `prec`.
    ///
    /// Each factor becomes `1/(1 − w·exp(L))` with `L` linear. For `w ≠ 1` this is a
    /// power series in `L`; for `w = 1` it has a simple pole and `L` must be a multiple
    /// of a single target variable.
    pub fn substitute(&self, images: &[ExpImage], target: &Arc<VarSet>, prec: i64) -> Result<Series> {
        self.substitute_cached(images, target, prec, &FactorCache::default())
    }

    /// [`RationalTerm::substitute`] reusing factor expansions across calls that share
    /// `images` and `target`.
    pub fn substitute_cached(
        &self,
        images: &[ExpImage],
        target: &Arc<VarSet>,
        prec: i64,
        cache: &FactorCache,
    ) -> Result<Series> {
        let field = self.field();
        let head = ExpImage::combine(images, &self.monomial, field)?;
        let m0 = target.scale_all(&head.monomial)?;
        let mut prepared = Vec::with_capacity(self.factors.len());
        let mut pole_depth = 0;
        for f in &self.factors {
            let img = ExpImage::combine(images, &f.monomial, field)?;
            if img.monomial.iter().any(|r| !r.is_zero()) {
                return Err(Error::PrecisionLoss(
                    "geometric factor image must be a pure exponential".into(),
                ));
            }
            let w = &f.coeff * &img.root(field)?;
            if w.is_one() {
                pole_depth += pole_variable(&img.linear, target)?.1;
            }
            prepared.push((f, w, img.linear));
        }
        let inner = prec - target.degree(&m0) + pole_depth;
        let coeff = &self.coeff * &head.root(field)?;
        let mut s = exp_linear(target, &head.linear, &coeff, inner);
        for (f, w, lin) in &prepared {
            let fs = cache.get_or_compute(f, inner, || exp_geometric(w, lin, target, inner))?;
            s = s.try_mul(&fs)?;
        }
        Ok(s.shift(&m0).truncate(prec))
    }
}

/// Expanded images of geometric factors, keyed by the factor and valid for one fixed
/// choice of images and target.
#[derive(Default)]
pub struct FactorCache {
    map: Mutex<HashMap<(CycNum, Vec<Rational64>), Series>>,
}

impl FactorCache {
    fn get_or_compute<F>(&self, f: &GeometricFactor, prec: i64, compute: F) -> Result<Series>
    where
        F: FnOnce() -> Result<Series>,
    {
        let key = (f.coeff.clone(), f.monomial.clone());
        if let Some(s) = self.map.lock().unwrap().get(&key) {
            if s.prec().is_some_and(|p| p >= prec) {
                return Ok(s.truncate(prec));
            }
        }
        let s = compute()?;
        self.map.lock().unwrap().insert(key, s.clone());
        Ok(s)
    }
}

/// The single variable carrying a pole, with its scaled degree.
fn pole_variable(lin: &[CycNum], target: &Arc<VarSet>) -> Result<(usize, i64)> {
    let nz: Vec<usize> = (0..lin.len()).filter(|&j| !lin[j].is_zero()).collect();
    if nz.len() != 1 {
        return Err(Error::NotAUnit(format!(
            "pole factor 1/(1 - exp(L)) needs L in one variable, got {} variables",
            nz.len()
        )));
    }
    let j = nz[0];
    Ok((j, target.weights()[j] * target.denom()))
}

/// Bernoulli numbers `B_0..B_k` with `B_1 = -1/2`.
pub fn bernoulli(k: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(k + 1);
    for m in 0..=k {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += bj * BigRational::from_integer(binomial(BigInt::from(m + 1), BigInt::from(j)));
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `1/(1 − w·exp(Σ lin_j y_j))` to scaled precision `prec`.
pub fn exp_geometric(w: &CycNum, lin: &[CycNum], target: &Arc<VarSet>, prec: i64) -> Result<Series> {
    let field = w.field();
    if w.is_one() {
        let (j, step) = pole_variable(lin, target)?;
        let s = &lin[j];
        // 1/(1 - e^t) = -(1/t) Σ B_k t^k / k!
        let kmax = ((prec + step) / step).max(0) as usize + 1;
        let b = bernoulli(kmax);
        let sinv = s.inv()?;
        let mut out = Series::zero(target, field, Some(prec));
        let mut fact = BigRational::one();
        let mut spow = field.one();
        for (k, bk) in b.iter().enumerate() {
            if k > 0 {
                fact *= BigRational::from_integer(BigInt::from(k));
                spow = &spow * s;
            }
            let mut e = vec![0; target.len()];
            e[j] = (k as i64 - 1) * step;
            if target.degree(&e) >= prec {
                break;
            }
            let c = (&spow * &sinv).scale(&(-bk / &fact));
            out = out.try_add(&Series::monomial_scaled(target, c, e))?;
        }
        return Ok(out);
    }
    let one_minus = &field.one() - w;
    let a0 = one_minus.inv()?;
    let ratio = w * &a0;
    let lin_series = ExpImage::exponential(Rational64::zero(), lin.to_vec()).linear_series(target)?;
    let min_step = lin
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, _)| target.weights()[j] * target.denom())
        .min();
    let kmax = match min_step {
        None => 0,
        Some(st) => ((prec + st - 1) / st).max(0) as usize,
    };
    // a_m = (w/(1-w)) Σ_{k=1}^{m} a_{m-k}/k!
    let mut a: Vec<CycNum> = vec![a0];
    let mut inv_fact = vec![BigRational::one()];
    for k in 1..=kmax {
        let prev = inv_fact[k - 1].clone() / BigRational::from_integer(BigInt::from(k));
        inv_fact.push(prev);
    }
    for m in 1..=kmax {
        let mut acc = field.zero();
        for k in 1..=m {
            acc += &a[m - k].scale(&inv_fact[k]);
        }
        a.push(&ratio * &acc);
    }
    let mut s = Series::constant(target, a[kmax].clone()).truncate(prec);
    for m in (0..kmax).rev() {
        s = s.try_mul(&lin_series)?;
        s = s.try_add(&Series::constant(target, a[m].clone()))?;
    }
    Ok(s.truncate(prec))
}

/// Expand a sum of rational terms natively.
pub fn expand_sum(terms: &[RationalTerm], vars: &Arc<VarSet>, field: &'static CyclotomicField, prec: i64) -> Result<Series> {
    let mut out = Series::zero(vars, field, Some(prec));
    for t in terms {
        out = out.try_add(&t.expand(vars, prec)?)?;
    }
    Ok(out)
}

/// Substitute and expand a sum of rational terms.
pub fn substitute_sum(
    terms: &[RationalTerm],
    images: &[ExpImage],
    target: &Arc<VarSet>,
    field: &'static CyclotomicField,
    prec: i64,
) -> Result<Series> {
    let mut out = Series::zero(target, field, Some(prec));
    for t in terms {
        out = out.try_add(&t.substitute(images, target, prec)?)?;
    }
    Ok(out)
}
