//! The framed one-leg vertex on both sides of the correspondence.
//!
//! The DT side `P̃_λ(a)` is a single [`RationalTerm`] in `q_0, …, q_{n−1}`. The GW side
//! `Ṽ_μ(a) = Σ_λ P̃_λ(a) χ_λ(μ)/z_μ` is pushed through the exponential change of
//! variables into `u, x_1, …, x_{n−1}`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cyclo::{field_for_modulus, CycNum, CyclotomicField};
use crate::error::{Error, Result};
use crate::fock::combine;
use crate::loop_schur::{closed_form_diagram, content_monomial, q_prec};
use crate::partitions::MultiPartition;
use crate::rational::{FactorCache, RationalTerm};
use crate::report::Report;
use crate::series::{exp_linear, ExpImage, Series, VarSet};
use crate::wreath_char::{central_chars, char_table, sign_ratio};

pub(crate) fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// `n·a` as an integer, or an error when the framing is off the `1/n` lattice.
pub fn framing_times_n(n: u32, a: Rational64) -> Result<i64> {
    let na = a * n as i64;
    if !na.is_integer() {
        return Err(Error::FramingNotIntegral(a.to_string(), n));
    }
    Ok(na.to_integer())
}

/// The constant part of the framing monomial raised to `n·a`:
/// `((−ξ_{2n})^d ∏_l ξ_n^{l|λ_l|})^{n·a}`.
pub fn framing_constant(lambda: &MultiPartition, a: Rational64) -> Result<CycNum> {
    let n = lambda.n();
    let na = framing_times_n(n, a)?;
    let field = field_for_modulus(n);
    // −ξ_{2n} = ξ_{2n}^{1+n}, ξ_n = ξ_{2n}^2
    let e = (1 + n as i64) * lambda.size() as i64 + 2 * lambda.weighted_twist() as i64;
    field.zeta(2 * n, na * e)
}

/// The full framing factor `(constant^n · ∏_□ q_{c(□)}^{content(□)})^a`.
pub fn framing_term(lambda: &MultiPartition, a: Rational64) -> Result<RationalTerm> {
    let n = lambda.n();
    let mono = content_monomial(&combine(lambda), n)
        .into_iter()
        .map(|e| e * a)
        .collect();
    Ok(RationalTerm::new(framing_constant(lambda, a)?, mono))
}

/// `P̃_λ(a)` as a product of geometric factors.
pub fn dt_term(lambda: &MultiPartition, a: Rational64) -> Result<RationalTerm> {
    let n = lambda.n();
    let d = lambda.size() as i64;
    let field = field_for_modulus(n);
    let bar = combine(lambda);
    let frame = framing_term(lambda, -a)?;
    let mut sign = sign_ratio(lambda);
    if d % 2 == 1 {
        sign = -sign;
    }
    let half_d = vec![Rational64::new(d, 2); n as usize];
    Ok(closed_form_diagram(&bar, n)
        .mul(&frame)
        .scale(&field.from_i64(sign))
        .shift(&half_d))
}

/// `P̃_λ(a)` expanded natively to total `q`-degree `order`.
pub fn dt_vertex(lambda: &MultiPartition, a: Rational64, order: i64) -> Result<Series> {
    let n = lambda.n();
    dt_term(lambda, a)?.expand(&VarSet::q_side(n), q_prec(n, order))
}

/// `ξ_{2n}^i − ξ_{2n}^{−i}` times `−ξ_n^{−ik}/n`: coefficient of `x_i` in `log` of the
/// image of `q_k` (after removing its root of unity).
fn q_k_linear(field: &'static CyclotomicField, n: u32, k: u32) -> Result<Vec<CycNum>> {
    let mut lin = vec![field.zero()];
    for i in 1..n as i64 {
        let diff = field.zeta(2 * n, i)? - field.zeta(2 * n, -i)?;
        let c = field.zeta(n, -i * k as i64)? * diff;
        lin.push(-c.scale(&BigRational::new(BigInt::one(), BigInt::from(n))));
    }
    Ok(lin)
}

/// Images of `q_0, …, q_{n−1}` for `q ↦ e^{2πi·q_phase} e^{iu}` and
/// `q_k ↦ ξ_n^{−1} exp(L_k)`; `q_0` is whatever makes the product come out right.
pub fn images_with_q_phase(n: u32, q_phase: Rational64) -> Result<Vec<ExpImage>> {
    let field = field_for_modulus(n);
    let mut q0_lin = vec![field.zero(); n as usize];
    q0_lin[0] = field.i()?;
    let mut q0_phase = q_phase;
    let mut rest = Vec::new();
    for k in 1..n {
        let lin = q_k_linear(field, n, k)?;
        for (a, b) in q0_lin.iter_mut().zip(&lin) {
            *a -= b;
        }
        let phase = Rational64::new(-1, n as i64);
        q0_phase -= phase;
        rest.push(ExpImage::exponential(phase, lin));
    }
    let mut out = vec![ExpImage::exponential(q0_phase, q0_lin)];
    out.extend(rest);
    Ok(out)
}

/// The change of variables relating the two sides of the vertex correspondence.
pub fn theorem1_images(n: u32) -> Result<Vec<ExpImage>> {
    images_with_q_phase(n, Rational64::zero())
}

/// Substitute a `q`-side rational term into `(u, x)` at total degree `order`.
pub fn change_of_variables(term: &RationalTerm, n: u32, order: i64) -> Result<Series> {
    term.substitute(&theorem1_images(n)?, &VarSet::ux_side(n), order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Dt,
    Gw,
}

/// One side of the vertex at fixed `(n, d, a)`, labelled by irreps (DT) or classes (GW).
#[derive(Debug, Clone)]
pub struct VertexFamily {
    pub n: u32,
    pub d: u32,
    pub a: Rational64,
    pub side: Side,
    pub entries: Vec<(MultiPartition, Series)>,
}

impl VertexFamily {
    pub fn get(&self, label: &MultiPartition) -> Option<&Series> {
        self.entries.iter().find(|(l, _)| l == label).map(|(_, s)| s)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "d": self.d,
            "a": self.a.to_string(),
            "side": match self.side { Side::Dt => "dt", Side::Gw => "gw" },
            "entries": self.entries.iter().map(|(l, s)| json!({
                "label": l.to_string(),
                "series": s.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// `P̃_λ(a)` for every `λ` of size `d`, in `q`-variables.
pub fn dt_family(n: u32, d: u32, a: Rational64, order: i64) -> Result<VertexFamily> {
    let entries = MultiPartition::all(n, d)
        .into_par_iter()
        .map(|l| dt_vertex(&l, a, order).map(|s| (l, s)))
        .collect::<Result<_>>()?;
    Ok(VertexFamily {
        n,
        d,
        a,
        side: Side::Dt,
        entries,
    })
}

/// `P̃_λ(a)` for every `λ` of size `d`, after the change of variables.
pub fn dt_family_substituted(n: u32, d: u32, a: Rational64, order: i64) -> Result<VertexFamily> {
    dt_family_substituted_with(n, d, a, order, &theorem1_images(n)?)
}

pub(crate) fn dt_family_substituted_with(
    n: u32,
    d: u32,
    a: Rational64,
    order: i64,
    images: &[ExpImage],
) -> Result<VertexFamily> {
    let target = VarSet::ux_side(n);
    let cache = FactorCache::default();
    let entries = MultiPartition::all(n, d)
        .into_par_iter()
        .map(|l| {
            let t = dt_term(&l, a)?;
            t.substitute_cached(images, &target, order, &cache).map(|s| (l, s))
        })
        .collect::<Result<_>>()?;
    Ok(VertexFamily {
        n,
        d,
        a,
        side: Side::Dt,
        entries,
    })
}

/// Combine a substituted DT family into `Ṽ_μ = Σ_λ P̃_λ χ_λ(μ)/z_μ` for every class.
pub fn project_to_classes(dt: &VertexFamily) -> Result<VertexFamily> {
    let table = char_table(dt.n, dt.d)?;
    let field = table.field();
    let vars = VarSet::ux_side(dt.n);
    let entries = table
        .classes()
        .par_iter()
        .enumerate()
        .map(|(c, mu)| {
            let mut acc = Series::zero(&vars, field, None);
            for (lam, s) in &dt.entries {
                let r = table.row_of(lam).expect("irrep in table");
                let chi = table.entry(r, c);
                if !chi.is_zero() {
                    acc = acc.try_add(&s.scale(chi))?;
                }
            }
            let z = BigRational::from_integer(table.z(c).clone().into());
            Ok((mu.clone(), acc.scale_rational(&(BigRational::one() / z))))
        })
        .collect::<Result<_>>()?;
    Ok(VertexFamily {
        n: dt.n,
        d: dt.d,
        a: dt.a,
        side: Side::Gw,
        entries,
    })
}

/// `Ṽ_μ(a)` for every class of size `d`, in `(u, x)`-variables to total degree `order`.
/// Memoized, since the relation checks ask for the same families repeatedly.
pub fn gw_family(n: u32, d: u32, a: Rational64, order: i64) -> Result<VertexFamily> {
    type Key = (u32, u32, Rational64, i64);
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<VertexFamily>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (n, d, a, order);
    if let Some(f) = cache.lock().unwrap().get(&key) {
        return Ok((**f).clone());
    }
    let f = Arc::new(project_to_classes(&dt_family_substituted(n, d, a, order)?)?);
    let f = cache.lock().unwrap().entry(key).or_insert(f).clone();
    Ok((*f).clone())
}

pub fn gw_vertex(mu: &MultiPartition, a: Rational64, order: i64) -> Result<Series> {
    let fam = gw_family(mu.n(), mu.size(), a, order)?;
    fam.get(mu).cloned().ok_or(Error::SizeMismatch(mu.size(), fam.d))
}

/// `Σ_λ P̃_λ(0) χ_λ(μ) · c_λ` natively, with `c_λ` an optional extra monomial per `λ`.
fn weighted_dt_sum<F>(mu: &MultiPartition, order: i64, extra: F) -> Result<Series>
where
    F: Fn(&MultiPartition) -> Result<Option<RationalTerm>>,
{
    let n = mu.n();
    let vars = VarSet::q_side(n);
    let field = field_for_modulus(n);
    let prec = q_prec(n, order);
    let table = char_table(n, mu.size())?;
    let c = table.col_of(mu).ok_or(Error::SizeMismatch(mu.size(), table.d()))?;
    let mut acc = Series::zero(&vars, field, Some(prec));
    for (r, lam) in table.irreps().iter().enumerate() {
        let chi = table.entry(r, c);
        if chi.is_zero() {
            continue;
        }
        let mut t = dt_term(lam, Rational64::zero())?.scale(chi);
        if let Some(e) = extra(lam)? {
            t = t.mul(&e);
        }
        acc = acc.try_add(&t.expand(&vars, prec)?)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// Framing factors agree with the central-character exponentials.
    I,
    /// Untwisted parts peel off as `(−1)^k q^{k/2}/(1 − q^k)`.
    II,
    /// The shifted sums vanish for classes with an untwisted part.
    III,
}

/// Check one of the three reduction identities for every instance of total size `d`.
pub fn check_reduction(which: Identity, n: u32, d: u32, order: i64) -> Result<Report> {
    match which {
        Identity::I => check_framing(n, d, order),
        Identity::II => check_untwisted_peel(n, d, order),
        Identity::III => check_shifted_vanishing(n, d, order),
    }
}

fn check_framing(n: u32, d: u32, order: i64) -> Result<Report> {
    let field = field_for_modulus(n);
    let target = VarSet::ux_side(n);
    let images = theorem1_images(n)?;
    let i = field.i()?;
    let mut rep = Report::new("reduction I");
    for lam in MultiPartition::all(n, d) {
        let cc = central_chars(&lam)?;
        for k in 1..=n as i64 {
            let a = Rational64::new(k, n as i64);
            let lhs = framing_term(&lam, a)?.substitute(&images, &target, order)?;
            let ab = big(a);
            let mut lin = vec![i.scale(&(ab.clone() * BigRational::from_integer(cc.f_t.into())))];
            for j in 1..n as i64 {
                lin.push((field.zeta(2 * n, -j)? * &cc.f[j as usize]).scale(&ab));
            }
            let rhs = exp_linear(&target, &lin, &field.one(), order);
            rep.series(format!("{lam} a={a}"), &lhs, &rhs)?;
        }
    }
    Ok(rep)
}

/// `(−1)^k q^{k/2}/(1 − q^k)` with `q = q_0⋯q_{n−1}`.
pub fn csc_term(n: u32, k: u32) -> RationalTerm {
    let field = field_for_modulus(n);
    let sign = if k % 2 == 0 { 1 } else { -1 };
    let half = vec![Rational64::new(k as i64, 2); n as usize];
    let full = vec![Rational64::from_integer(k as i64); n as usize];
    RationalTerm::new(field.from_i64(sign), half).with_factor(field.one(), full)
}

fn check_untwisted_peel(n: u32, d: u32, order: i64) -> Result<Report> {
    let vars = VarSet::q_side(n);
    let prec = q_prec(n, order);
    let mut rep = Report::new("reduction II");
    for k in 1..=d {
        for mu in MultiPartition::all(n, d - k) {
            let big_mu = mu.with_part(k, 0);
            let lhs = weighted_dt_sum(&big_mu, order, |_| Ok(None))?;
            let inner = weighted_dt_sum(&mu, order, |_| Ok(None))?;
            let rhs = csc_term(n, k).expand(&vars, prec)?.try_mul(&inner)?;
            rep.series(format!("mu={mu} k={k}"), &lhs, &rhs)?;
        }
    }
    Ok(rep)
}

fn check_shifted_vanishing(n: u32, d: u32, order: i64) -> Result<Report> {
    let field = field_for_modulus(n);
    let vars = VarSet::q_side(n);
    let zero = Series::zero(&vars, field, Some(q_prec(n, order)));
    let mut rep = Report::new("reduction III");
    for kp in 1..=d {
        for nu in MultiPartition::all(n, d - kp) {
            let mu = nu.with_part(kp, 0);
            for k in 1..n as i64 {
                let lhs = weighted_dt_sum(&mu, order, |lam| {
                    let shift = content_monomial(&combine(lam), n)
                        .into_iter()
                        .map(|e| e * Rational64::new(k, n as i64))
                        .collect();
                    Ok(Some(RationalTerm::new(field.one(), shift)))
                })?;
                rep.series(format!("nu={nu} k'={kp} k={k}"), &lhs, &zero)?;
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn mp(s: &str) -> MultiPartition {
        s.parse().unwrap()
    }

    #[test]
    fn single_box_dt_vertex() {
        // P̃_(1)(0) = −q^{1/2}/(1 − q)
        let t = dt_term(&mp("1:(1)"), r(0, 1)).unwrap();
        assert_eq!(t, csc_term(1, 1));
    }

    #[test]
    fn framing_constant_single_box() {
        let k = field_for_modulus(1);
        assert_eq!(framing_constant(&mp("1:(1)"), r(1, 1)).unwrap(), k.one());
        assert!(framing_constant(&mp("2:(1^0)"), r(1, 3)).is_err());
    }

    #[test]
    fn two_color_single_box() {
        // λ = ((1),∅) at n = 2: λ̄ = (1,1), sign ratio −1, second-row box has color 1
        let lam = mp("2:(1^0)");
        let bar = combine(&lam);
        assert_eq!(bar.parts(), &[1, 1]);
        assert_eq!(sign_ratio(&lam), -1);
        let t = dt_term(&lam, r(0, 1)).unwrap();
        assert_eq!(t.coeff, field_for_modulus(2).one());
        assert_eq!(t.monomial, vec![r(1, 2), r(3, 2)]);
        let hooks: Vec<_> = t.factors.iter().map(|f| f.monomial.clone()).collect();
        assert_eq!(hooks, vec![vec![r(1, 1), r(1, 1)], vec![r(0, 1), r(1, 1)]]);
    }

    #[test]
    fn image_of_q1_at_n2() {
        let imgs = theorem1_images(2).unwrap();
        let k = field_for_modulus(2);
        let i = k.i().unwrap();
        assert_eq!(imgs[1].root(k).unwrap(), -k.one());
        assert_eq!(imgs[1].linear, vec![k.zero(), i.clone()]);
        // q = q_0 q_1 ↦ e^{iu}
        let q = ExpImage::combine(&imgs, &[r(1, 1), r(1, 1)], k).unwrap();
        assert!(q.root(k).unwrap().is_one());
        assert_eq!(q.linear, vec![i, k.zero()]);
    }

    #[test]
    fn csc_at_n1() {
        let s = gw_vertex(&mp("1:(1)"), r(0, 1), 4).unwrap();
        let k = field_for_modulus(1);
        let i = k.i().unwrap();
        assert_eq!(s.coeff(&[r(-1, 1)]).unwrap(), -&i);
        assert_eq!(s.coeff(&[r(1, 1)]).unwrap(), i.scale(&BigRational::new((-1).into(), 24.into())));
    }

    #[test]
    fn reductions_small() {
        for n in 1..=3 {
            for d in 1..=2 {
                for which in [Identity::I, Identity::II, Identity::III] {
                    let rep = check_reduction(which, n, d, 6).unwrap();
                    assert!(rep.passed(), "{rep}");
                }
            }
        }
    }

    #[test]
    fn projection_recovers_dt() {
        let n = 2;
        let d = 2;
        let dt = dt_family_substituted(n, d, r(0, 1), 4).unwrap();
        let gw = project_to_classes(&dt).unwrap();
        let t = char_table(n, d).unwrap();
        for (lam, p) in &dt.entries {
            let mut acc = Series::zero(&VarSet::ux_side(n), t.field(), None);
            for (mu, v) in &gw.entries {
                acc = acc.try_add(&v.scale(&t.value(lam, &mu.negate()).unwrap())).unwrap();
            }
            assert_eq!(&acc, p);
        }
    }

    #[test]
    fn pole_order_is_untwisted_length() {
        // twisted parts contribute u^{-1} only together with x's, so the total degree
        // drops by one per untwisted part
        for (n, d) in [(1, 3), (2, 2), (3, 2)] {
            let gw = gw_family(n, d, r(0, 1), 2).unwrap();
            for (mu, s) in &gw.entries {
                let l0 = mu.component(0).len() as i64;
                assert_eq!(s.valuation(), Some(-l0), "{mu}");
            }
        }
    }
}
