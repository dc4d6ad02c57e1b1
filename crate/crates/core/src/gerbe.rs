//! GW and multi-regular DT potentials of local `Z_n`-gerbes over `P¹`.
//!
//! `X_{k,b}` is the total space of `L_b ⊕ L_{−b−2}` over the gerbe with class `k`; the
//! isotropy acts on the first summand by `ξ_n`, which forces `b ∈ Z − k/n`.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cyclo::{field_for_modulus, CycNum};
use crate::error::{Error, Result};
use crate::fock::{color, combine, hook_colors, n_quotient};
use crate::partitions::{MultiPartition, Partition};
use crate::rational::{FactorCache, RationalTerm};
use crate::report::Report;
use crate::series::{ExpImage, Series, VarSet};
use crate::vertex::{dt_term, framing_times_n, gw_family, images_with_q_phase, theorem1_images};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalGerbe {
    pub n: u32,
    pub k: u32,
    pub b: Rational64,
}

impl LocalGerbe {
    pub fn new(n: u32, k: u32, b: Rational64) -> Result<LocalGerbe> {
        let bad = || Error::InvalidGerbe { n, k, b: b.to_string() };
        if n == 0 || k >= n {
            return Err(bad());
        }
        if !(b + Rational64::new(k as i64, n as i64)).is_integer() {
            return Err(bad());
        }
        Ok(LocalGerbe { n, k, b })
    }

    /// `gcd(k, n)`.
    pub fn e(&self) -> u32 {
        self.k.gcd(&self.n)
    }

    /// Degrees of the two summands; they add up to −2.
    pub fn degrees(&self) -> (Rational64, Rational64) {
        (self.b, -self.b - 2)
    }

    /// `(−1)^{db} = e^{iπdb}`.
    pub fn gluing_sign(&self, d: u32) -> Result<CycNum> {
        let nb = framing_times_n(self.n, self.b)?;
        field_for_modulus(self.n).zeta(2 * self.n, nb * d as i64)
    }
}

/// `GW_d = (−1)^{db} Σ_μ Ṽ_μ(b) z_μ Ṽ_{g_k(μ)}(0)` in `(u, x)` to total degree `order`.
pub fn gw_potential(x: &LocalGerbe, d: u32, order: i64) -> Result<Series> {
    // both factors have poles of total order ≤ d
    let inner = order + d as i64;
    let vb = gw_family(x.n, d, x.b, inner)?;
    let v0 = if x.b.is_zero() {
        vb.clone()
    } else {
        gw_family(x.n, d, Rational64::zero(), inner)?
    };
    let field = field_for_modulus(x.n);
    let vars = VarSet::ux_side(x.n);
    let terms: Vec<Series> = vb
        .entries
        .par_iter()
        .map(|(mu, s)| {
            let other = v0.get(&mu.g(x.k as i64)).ok_or(Error::SizeMismatch(mu.size(), d))?;
            let z = num_rational::BigRational::from_integer(mu.z().into());
            Ok(s.try_mul(other)?.scale_rational(&z))
        })
        .collect::<Result<_>>()?;
    let mut acc = Series::zero(&vars, field, None);
    for t in terms {
        acc = acc.try_add(&t)?;
    }
    Ok(acc.scale(&x.gluing_sign(d)?).truncate(order))
}

/// The gluing sum after orthogonality: `(−1)^{db} Σ_λ ξ_n^{−k Σ_i i|λ_i|} P̃_λ(b) P̃_λ(0)`,
/// pushed through the vertex change of variables.
pub fn gw_potential_from_characters(x: &LocalGerbe, d: u32, order: i64) -> Result<Series> {
    let n = x.n;
    let field = field_for_modulus(n);
    let sign = x.gluing_sign(d)?;
    let images = theorem1_images(n)?;
    let terms = MultiPartition::all(n, d)
        .into_iter()
        .map(|l| {
            let ph = field.zeta(n, -(x.k as i64) * l.weighted_twist() as i64)?;
            Ok(dt_term(&l, x.b)?.mul(&dt_term(&l, Rational64::zero())?).scale(&(&ph * &sign)))
        })
        .collect::<Result<Vec<_>>>()?;
    sum_substituted(&terms, &images, n, order)
}

fn sum_substituted(terms: &[RationalTerm], images: &[ExpImage], n: u32, order: i64) -> Result<Series> {
    let target = VarSet::ux_side(n);
    let cache = FactorCache::default();
    let parts: Vec<Series> = terms
        .par_iter()
        .map(|t| t.substitute_cached(images, &target, order, &cache))
        .collect::<Result<_>>()?;
    let mut acc = Series::zero(&target, field_for_modulus(n), None);
    for p in parts {
        acc = acc.try_add(&p)?;
    }
    Ok(acc)
}

/// `P_λ = 1/∏_□ (1 − ∏_c q_c^{h_c(□)})` for a diagram colored mod `n`.
pub fn hook_product(p: &Partition, n: u32) -> RationalTerm {
    let field = field_for_modulus(n);
    let mut t = RationalTerm::new(field.one(), vec![Rational64::zero(); n as usize]);
    for (i, j) in p.boxes() {
        let h = hook_colors(p, n, i, j);
        t = t.with_factor(field.one(), h.into_iter().map(|e| Rational64::from(e as i64)).collect());
    }
    t
}

/// Rename `q_c ↦ q_{−c}`.
pub fn reverse_colors(t: &RationalTerm) -> RationalTerm {
    let rev = |m: &[Rational64]| -> Vec<Rational64> {
        let n = m.len();
        (0..n).map(|c| m[(n - c) % n]).collect()
    };
    let mut out = RationalTerm::new(t.coeff.clone(), rev(&t.monomial));
    for f in &t.factors {
        out = out.with_factor(f.coeff.clone(), rev(&f.monomial));
    }
    out
}

/// `λ'`: the quotient of the transposed diagram.
pub fn conjugate(lambda: &MultiPartition) -> Result<MultiPartition> {
    n_quotient(&combine(lambda).transpose(), lambda.n())
}

/// `E_λ = (−1)^{dnb} ∏_{(i,j) ∈ λ̄} q_{j−i}^{(b+2)i − bj − 1}`, rows and columns counted from 1.
pub fn gluing_term(x: &LocalGerbe, lambda: &MultiPartition) -> Result<RationalTerm> {
    let n = x.n;
    let field = field_for_modulus(n);
    let mut e = vec![Rational64::zero(); n as usize];
    for (i, j) in combine(lambda).boxes() {
        let (r, c) = (i as i64 + 1, j as i64 + 1);
        e[color(i, j, n) as usize] += (x.b + 2) * r - x.b * c - 1;
    }
    let dnb = framing_times_n(n, x.b)? * lambda.size() as i64;
    let sign = if dnb % 2 == 0 { 1 } else { -1 };
    Ok(RationalTerm::new(field.from_i64(sign), e))
}

/// `P_λ(q_0, …, q_{n−1}) E_λ P_{λ'}(q_0, q_{n−1}, …, q_1)` in `q`-variables.
pub fn dt_summand(x: &LocalGerbe, lambda: &MultiPartition) -> Result<RationalTerm> {
    let n = x.n;
    let first = hook_product(&combine(lambda), n);
    let second = reverse_colors(&hook_product(&combine(&conjugate(lambda)?), n));
    Ok(first.mul(&gluing_term(x, lambda)?).mul(&second))
}

/// `q_0 ↦ −q_0`; every `q_0` exponent must be an integer.
pub fn flip_q0(t: &RationalTerm) -> Result<RationalTerm> {
    let parity = |e: Rational64| -> Result<bool> {
        if !e.is_integer() {
            return Err(Error::OffLattice(e.to_string(), 1));
        }
        Ok(e.to_integer() % 2 != 0)
    };
    let mut coeff = t.coeff.clone();
    if parity(t.monomial[0])? {
        coeff = -coeff;
    }
    let mut out = RationalTerm::new(coeff, t.monomial.clone());
    for f in &t.factors {
        let c = if parity(f.monomial[0])? { -f.coeff.clone() } else { f.coeff.clone() };
        out = out.with_factor(c, f.monomial.clone());
    }
    Ok(out)
}

/// `q ↦ −e^{iu}`, `q_k ↦ ξ_n^{−1} exp(L_k)` for `k > 0`.
pub fn theorem2_images(n: u32) -> Result<Vec<ExpImage>> {
    images_with_q_phase(n, Rational64::new(1, 2))
}

/// The reduced multi-regular DT potential: the gluing sum with `q_0 ↦ −q_0`, then the
/// GW/DT change of variables.
pub fn dt_potential(x: &LocalGerbe, d: u32, order: i64) -> Result<Series> {
    let terms = MultiPartition::all(x.n, d)
        .iter()
        .map(|l| flip_q0(&dt_summand(x, l)?))
        .collect::<Result<Vec<_>>>()?;
    sum_substituted(&terms, &theorem2_images(x.n)?, x.n, order)
}

/// Both potentials and how they compare.
#[derive(Debug, Clone)]
pub struct Potentials {
    pub gerbe: LocalGerbe,
    pub d: u32,
    pub gw: Series,
    pub dt: Series,
    pub report: Report,
}

impl Potentials {
    pub fn equal(&self) -> bool {
        self.report.passed()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.gerbe.n,
            "k": self.gerbe.k,
            "b": self.gerbe.b.to_string(),
            "degree": self.d,
            "gw": self.gw.to_json(),
            "dt": self.dt.to_json(),
            "equal": self.equal(),
            "first_mismatch": self.report.first_failure(),
        })
    }
}

/// Compute both sides of the GW/DT equality and compare them coefficientwise; the
/// character-sum form of the GW side is compared as well.
pub fn verify_theorem2(x: &LocalGerbe, d: u32, order: i64) -> Result<Potentials> {
    let gw = gw_potential(x, d, order)?;
    let dt = dt_potential(x, d, order)?;
    let mid = gw_potential_from_characters(x, d, order)?;
    let mut report = Report::new("gw = dt");
    let tag = format!("n={} k={} b={} d={d}", x.n, x.k, x.b);
    report.series(format!("{tag}: gw = dt"), &gw, &dt)?;
    report.series(format!("{tag}: gw = character sum"), &gw, &mid)?;
    Ok(Potentials {
        gerbe: *x,
        d,
        gw,
        dt,
        report,
    })
}
