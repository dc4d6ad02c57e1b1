//! Loop Schur functions under the principal specialization `q_{c,w} ↦ q_c^w`.
//!
//! Tableau entries start at 0, so a single box gives `1/(1 − q_0)` and the tableau sum
//! agrees with the hook closed form `∏ q_c^{n_c} / ∏_□ (1 − ∏_c q_c^{h_c(□)})`.
//! Orders are total degrees in the `q_c`.

use std::collections::{BTreeMap, HashMap};

use num_rational::Rational64;

use crate::cyclo::field_for_modulus;
use crate::error::{Error, Result};
use crate::fock::{add_border_strips, color, combine, hook_colors, n_quotient, row_weights};
use crate::partitions::{MultiPartition, Partition};
use crate::rational::RationalTerm;
use crate::report::Report;
use crate::series::{Series, VarSet};

fn ints(v: impl IntoIterator<Item = i64>) -> Vec<Rational64> {
    v.into_iter().map(Rational64::from_integer).collect()
}

/// Scaled precision on the `q` side for a total-degree order.
pub fn q_prec(n: u32, order: i64) -> i64 {
    order * VarSet::q_side(n).denom()
}

/// `∏_□ q_{c(□)}^{content(□)}` as an exponent vector indexed by color.
pub fn content_monomial(p: &Partition, n: u32) -> Vec<Rational64> {
    let mut e = vec![0i64; n as usize];
    for (i, j) in p.boxes() {
        e[color(i, j, n) as usize] += Partition::content(i, j);
    }
    ints(e)
}

/// The hook closed form for any diagram `p` colored mod `n`.
pub fn closed_form_diagram(p: &Partition, n: u32) -> RationalTerm {
    let field = field_for_modulus(n);
    let lead = ints(row_weights(p, n).into_iter().map(|w| w as i64));
    let mut t = RationalTerm::new(field.one(), lead);
    for (i, j) in p.boxes() {
        let h = hook_colors(p, n, i, j);
        t = t.with_factor(field.one(), ints(h.into_iter().map(i64::from)));
    }
    t
}

/// `S_λ` as a product of geometric factors.
pub fn closed_form(lambda: &MultiPartition) -> RationalTerm {
    closed_form_diagram(&combine(lambda), lambda.n())
}

/// `S^k_λ = S_λ · (∏_□ q_{c(□)}^{content(□)})^{k/n}`.
pub fn shifted_closed_form(lambda: &MultiPartition, k: i64) -> RationalTerm {
    shifted_closed_form_diagram(&combine(lambda), lambda.n(), k)
}

/// [`shifted_closed_form`] for any diagram colored mod `n`, balanced or not.
pub fn shifted_closed_form_diagram(p: &Partition, n: u32, k: i64) -> RationalTerm {
    let shift: Vec<Rational64> = content_monomial(p, n)
        .into_iter()
        .map(|e| e * Rational64::new(k, n as i64))
        .collect();
    closed_form_diagram(p, n).shift(&shift)
}

/// `S^k` of any diagram colored mod `n`, expanded to total degree `order`.
pub fn diagram_schur(p: &Partition, n: u32, k: i64, order: i64) -> Result<Series> {
    shifted_closed_form_diagram(p, n, k).expand(&VarSet::q_side(n), q_prec(n, order))
}

/// `S_λ` expanded to total degree `order`.
pub fn loop_schur(lambda: &MultiPartition, order: i64) -> Result<Series> {
    shifted_schur(lambda, 0, order)
}

/// `S^k_λ` expanded to total degree `order`.
pub fn shifted_schur(lambda: &MultiPartition, k: i64, order: i64) -> Result<Series> {
    let n = lambda.n();
    shifted_closed_form(lambda, k).expand(&VarSet::q_side(n), q_prec(n, order))
}

/// The tableau sum with shifted weights `w + k·content/n`, by direct enumeration.
///
/// A box in row `i` holds an entry `≥ i`, so enumeration stops once the running entry
/// sum plus those row minima exceeds the budget.
pub fn ssyt_series(p: &Partition, n: u32, k: i64, order: i64) -> Result<Series> {
    let vars = VarSet::q_side(n);
    let field = field_for_modulus(n);
    let dd = vars.denom();
    let prec = order * dd;
    let boxes: Vec<(u32, u32)> = p.boxes().collect();
    // scaled shift contributed by the content terms
    let mut base = vec![0i64; n as usize];
    for &(i, j) in &boxes {
        let s = Rational64::from_integer(k * Partition::content(i, j) * dd) / n as i64;
        if !s.is_integer() {
            return Err(Error::OffLattice(s.to_string(), dd));
        }
        base[color(i, j, n) as usize] += s.to_integer();
    }
    let shift_deg: i64 = base.iter().sum();
    // entries must satisfy dd·Σ entries + shift_deg < prec
    let budget = prec - shift_deg;
    if budget <= 0 {
        return Ok(Series::zero(&vars, field, Some(prec)));
    }
    let max_sum = (budget - 1) / dd;
    let mut min_rest = vec![0i64; boxes.len() + 1];
    for b in (0..boxes.len()).rev() {
        min_rest[b] = min_rest[b + 1] + boxes[b].0 as i64;
    }
    let mut counts: HashMap<Vec<i64>, i64> = HashMap::new();
    let mut grid: Vec<Vec<i64>> = p.parts().iter().map(|&r| vec![0; r as usize]).collect();
    let mut exps = base.clone();
    fill(
        &boxes, 0, 0, max_sum, &min_rest, n, dd, &mut grid, &mut exps, &mut counts,
    );
    Ok(Series::from_terms(
        &vars,
        field,
        counts.into_iter().map(|(e, c)| (e, field.from_i64(c))),
        Some(prec),
    ))
}

#[allow(clippy::too_many_arguments)]
fn fill(
    boxes: &[(u32, u32)],
    b: usize,
    sum: i64,
    max_sum: i64,
    min_rest: &[i64],
    n: u32,
    dd: i64,
    grid: &mut Vec<Vec<i64>>,
    exps: &mut Vec<i64>,
    counts: &mut HashMap<Vec<i64>, i64>,
) {
    if b == boxes.len() {
        *counts.entry(exps.clone()).or_insert(0) += 1;
        return;
    }
    let (i, j) = (boxes[b].0 as usize, boxes[b].1 as usize);
    let mut lo = 0;
    if j > 0 {
        lo = lo.max(grid[i][j - 1]);
    }
    if i > 0 {
        lo = lo.max(grid[i - 1][j] + 1);
    }
    let c = color(i as u32, j as u32, n) as usize;
    let mut v = lo;
    // remaining boxes need at least their row index each
    while sum + v + min_rest[b + 1] <= max_sum {
        grid[i][j] = v;
        exps[c] += v * dd;
        fill(boxes, b + 1, sum + v, max_sum, min_rest, n, dd, grid, exps, counts);
        exps[c] -= v * dd;
        v += 1;
    }
}

/// `q^T` for an explicit filling: multiplicities of `q_{color, entry}`.
pub fn tableau_monomial(p: &Partition, n: u32, entries: &[Vec<u32>]) -> Result<BTreeMap<(u32, u32), u32>> {
    let mut out = BTreeMap::new();
    for (i, j) in p.boxes() {
        let w = entries
            .get(i as usize)
            .and_then(|r| r.get(j as usize))
            .ok_or_else(|| Error::Parse(format!("filling has no entry at ({i},{j})")))?;
        *out.entry((color(i, j, n), *w)).or_insert(0) += 1;
    }
    Ok(out)
}

/// Check the border-strip identities at `l`:
/// `k = 0`: `S_λ/(1 − q^l) = Σ (−1)^{ht} S_σ`; `k ≠ 0`: `Σ (−1)^{ht} S^k_σ = 0`,
/// summing over `ln`-strips added to `λ̄`.
pub fn verify_strip_theorems(lambda: &MultiPartition, l: u32, k: i64, order: i64) -> Result<Report> {
    let n = lambda.n();
    let vars = VarSet::q_side(n);
    let field = field_for_modulus(n);
    let prec = q_prec(n, order);
    let bar = combine(lambda);
    let mut rhs = Series::zero(&vars, field, Some(prec));
    let mut count = 0;
    for s in add_border_strips(&bar, l * n, n) {
        let sigma = n_quotient(&s.shape, n)?;
        let term = shifted_schur(&sigma, k, order)?;
        rhs = if s.height % 2 == 0 {
            rhs.try_add(&term)?
        } else {
            rhs.try_sub(&term)?
        };
        count += 1;
    }
    let lhs = if k == 0 {
        let q_l = vec![l as i64 * vars.denom(); n as usize];
        loop_schur(lambda, order)?.div_one_minus(&field.one(), &q_l, None)?
    } else {
        Series::zero(&vars, field, Some(prec))
    };
    let mut r = Report::new("strips");
    r.series(format!("{lambda} l={l} k={k} ({count} strips)"), &lhs, &rhs)?;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn diag(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    fn q(n: u32, v: &[u32]) -> MultiPartition {
        n_quotient(&diag(v), n).unwrap()
    }

    #[test]
    fn empty_shape_is_one() {
        let s = loop_schur(&MultiPartition::empty(2), 5).unwrap();
        let v = VarSet::q_side(2);
        assert_eq!(s, Series::one(&v, field_for_modulus(2)).truncate(q_prec(2, 5)));
        assert_eq!(ssyt_series(&Partition::empty(), 2, 0, 5).unwrap(), s);
    }

    #[test]
    fn closed_form_examples() {
        let r = Rational64::from_integer;
        let t = closed_form(&q(1, &[1]));
        assert_eq!(t.monomial, vec![r(0)]);
        assert_eq!(t.factors.len(), 1);
        assert_eq!(t.factors[0].monomial, vec![r(1)]);

        let t = closed_form(&q(2, &[2]));
        assert_eq!(t.monomial, vec![r(0), r(0)]);
        let hooks: Vec<_> = t.factors.iter().map(|f| f.monomial.clone()).collect();
        assert_eq!(hooks, vec![vec![r(1), r(1)], vec![r(0), r(1)]]);

        // (1,1) at n = 2: the second-row box has color 1 and sits in row 1
        let t = closed_form(&q(2, &[1, 1]));
        assert_eq!(t.monomial, vec![r(0), r(1)]);
        let hooks: Vec<_> = t.factors.iter().map(|f| f.monomial.clone()).collect();
        assert_eq!(hooks, vec![vec![r(1), r(1)], vec![r(0), r(1)]]);
    }

    #[test]
    fn single_box_is_geometric() {
        let s = loop_schur(&q(1, &[1]), 8).unwrap();
        for j in 0..8 {
            assert_eq!(s.coeff(&[Rational64::from_integer(j)]).unwrap(), field_for_modulus(1).one());
        }
    }

    #[test]
    fn tableaux_agree_with_closed_form() {
        for n in 1..=3u32 {
            for size in 0..=8 / n {
                for p in Partition::all(size * n) {
                    if !crate::fock::is_balanced(&p, n) {
                        continue;
                    }
                    let lam = q(n, p.parts());
                    let order = 10;
                    assert_eq!(ssyt_series(&p, n, 0, order).unwrap(), loop_schur(&lam, order).unwrap(), "{p} n={n}");
                }
            }
        }
    }

    #[test]
    fn shifted_tableaux_agree_with_monomial_shift() {
        let p = diag(&[2, 1, 1]);
        let lam = q(2, p.parts());
        assert_eq!(ssyt_series(&p, 2, 1, 8).unwrap(), shifted_schur(&lam, 1, 8).unwrap());
        let p = diag(&[3, 2, 1]);
        let lam = q(3, p.parts());
        for k in 0..3 {
            assert_eq!(ssyt_series(&p, 3, k, 7).unwrap(), shifted_schur(&lam, k, 7).unwrap());
        }
    }

    #[test]
    fn shifted_two_box_row() {
        let lam = q(2, &[2]);
        let half = Rational64::new(1, 2);
        let t = shifted_closed_form(&lam, 1);
        assert_eq!(t.monomial, vec![Rational64::zero(), half]);
        assert_eq!(shifted_closed_form(&lam, 0), closed_form(&lam));
    }

    #[test]
    fn displayed_tableau_monomial() {
        let p = diag(&[4, 3, 3, 1]);
        let t = vec![vec![1, 1, 2, 4], vec![2, 3, 3], vec![4, 4, 6], vec![7]];
        let m = tableau_monomial(&p, 3, &t).unwrap();
        let want: BTreeMap<(u32, u32), u32> = [
            ((0, 1), 1),
            ((0, 3), 1),
            ((0, 4), 1),
            ((0, 6), 1),
            ((0, 7), 1),
            ((1, 1), 1),
            ((1, 3), 1),
            ((1, 4), 1),
            ((2, 2), 2),
            ((2, 4), 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(m, want);
    }

    #[test]
    fn strip_identity_from_empty() {
        let e = MultiPartition::empty(2);
        assert!(verify_strip_theorems(&e, 1, 0, 10).unwrap().passed());
        assert!(verify_strip_theorems(&e, 1, 1, 10).unwrap().passed());
        assert!(verify_strip_theorems(&MultiPartition::empty(1), 1, 0, 10).unwrap().passed());
    }

    #[test]
    fn strip_identities_small_shapes() {
        for n in 1..=3u32 {
            for d in 0..=(6 / n) {
                for lam in MultiPartition::all(n, d) {
                    for l in 1..=2 {
                        for k in 0..n as i64 {
                            let r = verify_strip_theorems(&lam, l, k, 6).unwrap();
                            assert!(r.passed(), "{r}");
                        }
                    }
                }
            }
        }
    }
}
