//! Bounds on relative generalized Hamming weights of nested one-point codes
//! and their duals.
//!
//! Every bound is computed two ways: as a footprint count of exponent-box
//! points dominating (or dominated by) the `iota` images of a gamma set, and
//! as a count of semigroup elements. The two must agree on this curve. An
//! exhaustive subspace enumeration gives the exact weights on small codes.

use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{evaluate_monomial, NestedCodePair};
use crate::curve::{CurveParams, PointPartition};
use crate::error::{ChainClause, Error, Result};
use crate::finite_field::FieldElement;
use crate::linalg::{dot, rank, EchelonBasis, Matrix};
use crate::semigroup::{box_pairs, h_star, in_semigroup, iota, leq_partial, ExponentPair};

/// Upper limit on the number of gamma subsets a minimization may visit.
pub const MAX_BOUND_SUBSETS: u128 = 1 << 22;

/// Sorted, distinct elements of `H*(Q)` together with their exponent pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaSet {
    #[serde(skip)]
    pub params: CurveParams,
    pub gammas: Vec<u64>,
    pub pairs: Vec<ExponentPair>,
}

impl GammaSet {
    pub fn new(params: &CurveParams, gammas: &[u64]) -> Result<Self> {
        let mut gammas = gammas.to_vec();
        gammas.sort_unstable();
        gammas.dedup();
        if gammas.is_empty() {
            return Err(Error::EmptyGammaSet);
        }
        let pairs = gammas
            .iter()
            .map(|&g| iota(params, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(GammaSet {
            params: *params,
            gammas,
            pairs,
        })
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    /// Exponent pairs sorted by their first coordinate.
    pub fn pairs_by_first(&self) -> Vec<ExponentPair> {
        let mut p = self.pairs.clone();
        p.sort_by_key(|e| (e.i, e.j));
        p
    }
}

fn box_iter(params: &CurveParams) -> impl Iterator<Item = (u64, u64)> {
    let (xb, yb) = (params.x_bound(), params.y_bound());
    (0..xb).flat_map(move |i| (0..yb).map(move |j| (i, j)))
}

/// Box points dominating some `iota(gamma_s)`, or dominating `(a+u, 0)` with
/// `a` the smallest first coordinate. Lower bound on `#Supp(D)` whenever
/// `rho(D)` is the gamma set.
pub fn footprint_count(gs: &GammaSet) -> u64 {
    let params = &gs.params;
    let a = gs.pairs.iter().map(|e| e.i).min().expect("nonempty");
    let shifted = a + params.u;
    box_iter(params)
        .filter(|&(i, j)| i >= shifted || gs.pairs.iter().any(|e| e.i <= i && e.j <= j))
        .count() as u64
}

/// `#(H* ∩ ∪_s (gamma_s + H))`, counted over pole orders.
pub fn semigroup_count(gs: &GammaSet) -> u64 {
    let params = &gs.params;
    h_star(params)
        .members
        .iter()
        .filter(|&&mu| {
            gs.gammas
                .iter()
                .any(|&g| mu >= g && in_semigroup(params, mu - g))
        })
        .count() as u64
}

/// Box points dominated by some `iota(eta_s)`, or by `(a-u, q^{s-1}-1)` with
/// `a` the largest first coordinate. Lower bound on `#Supp(D)` whenever
/// `kappa(D)` is the gamma set.
pub fn dual_footprint_count(gs: &GammaSet) -> u64 {
    let params = &gs.params;
    let a = gs.pairs.iter().map(|e| e.i).max().expect("nonempty");
    let corner = a.checked_sub(params.u);
    box_iter(params)
        .filter(|&(i, j)| {
            corner.is_some_and(|c| i <= c) || gs.pairs.iter().any(|e| i <= e.i && j <= e.j)
        })
        .count() as u64
}

/// `#(H ∩ ∪_s (eta_s - H))`, counted over pole orders.
pub fn dual_semigroup_count(gs: &GammaSet) -> u64 {
    let params = &gs.params;
    let top = *gs.gammas.last().expect("nonempty");
    (0..=top)
        .filter(|&lambda| {
            in_semigroup(params, lambda)
                && gs
                    .gammas
                    .iter()
                    .any(|&g| g >= lambda && in_semigroup(params, g - lambda))
        })
        .count() as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetCount {
    pub gammas: Vec<u64>,
    pub count: u64,
}

/// Result of minimizing a count over all `m`-subsets of a gamma pool.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub m: usize,
    pub minimizing_gammas: GammaSet,
    pub value: u64,
    /// Every subset with its count, in lexicographic order.
    pub per_subset: Vec<SubsetCount>,
}

/// `H* ∩ (lambda2, lambda1]`, or the validated override.
pub fn gamma_pool(
    params: &CurveParams,
    lambda1: u64,
    lambda2: u64,
    pool: Option<&[u64]>,
) -> Result<Vec<u64>> {
    if lambda2 >= lambda1 {
        return Err(Error::InvalidLevels { lambda1, lambda2 });
    }
    let hs = h_star(params);
    match pool {
        None => Ok(hs.between(lambda2, lambda1)),
        Some(p) => {
            let mut p = p.to_vec();
            p.sort_unstable();
            p.dedup();
            if let Some(&bad) = p
                .iter()
                .find(|&&g| !(hs.contains(g) && lambda2 < g && g <= lambda1))
            {
                return Err(Error::InvalidPool(bad));
            }
            Ok(p)
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

fn minimize(
    params: &CurveParams,
    m: usize,
    pool: &[u64],
    count: impl Fn(&GammaSet) -> u64,
) -> Result<BoundReport> {
    if m == 0 || m > pool.len() {
        return Err(Error::DimensionTooLarge {
            m,
            pool: pool.len(),
        });
    }
    let needed = binomial(pool.len(), m);
    if needed > MAX_BOUND_SUBSETS {
        return Err(Error::BudgetExceeded {
            needed,
            budget: MAX_BOUND_SUBSETS,
        });
    }
    let mut per_subset = Vec::with_capacity(needed as usize);
    let mut best: Option<(u64, GammaSet)> = None;
    for combo in pool.iter().copied().combinations(m) {
        let gs = GammaSet::new(params, &combo)?;
        let c = count(&gs);
        per_subset.push(SubsetCount {
            gammas: combo,
            count: c,
        });
        // strict comparison keeps the lexicographically first minimizer
        if best.as_ref().is_none_or(|(v, _)| c < *v) {
            best = Some((c, gs));
        }
    }
    let (value, minimizing_gammas) = best.expect("at least one subset");
    Ok(BoundReport {
        m,
        minimizing_gammas,
        value,
        per_subset,
    })
}

/// Lower bound on `M_m(C_L(G, lambda1 Q), C_L(G, lambda2 Q))`, sharp for
/// these codes.
pub fn rghw_primary_bound(
    params: &CurveParams,
    m: usize,
    lambda1: u64,
    lambda2: u64,
    pool: Option<&[u64]>,
) -> Result<BoundReport> {
    let pool = gamma_pool(params, lambda1, lambda2, pool)?;
    minimize(params, m, &pool, footprint_count)
}

/// Lower bound on `M_m(C_L(G, lambda2 Q)^⊥, C_L(G, lambda1 Q)^⊥)`.
pub fn rghw_dual_bound(
    params: &CurveParams,
    m: usize,
    lambda1: u64,
    lambda2: u64,
    pool: Option<&[u64]>,
) -> Result<BoundReport> {
    let pool = gamma_pool(params, lambda1, lambda2, pool)?;
    minimize(params, m, &pool, dual_footprint_count)
}

/// Checks the staircase hypotheses on the pairs sorted by first coordinate.
pub(crate) fn staircase_hypotheses(gs: &GammaSet, check_bound: bool) -> Result<Vec<ExponentPair>> {
    let params = &gs.params;
    let pairs = gs.pairs_by_first();
    for w in pairs.windows(2) {
        if w[0].i >= w[1].i {
            return Err(Error::Hypothesis(ChainClause::FirstIncreasing));
        }
        if w[0].j <= w[1].j {
            return Err(Error::Hypothesis(ChainClause::SecondDecreasing));
        }
    }
    let (first, last) = (pairs[0], pairs[pairs.len() - 1]);
    if last.i - first.i >= params.u {
        return Err(Error::Hypothesis(ChainClause::FirstSpread));
    }
    if check_bound && first.i > params.outside_x_count() {
        return Err(Error::Hypothesis(ChainClause::FirstBound));
    }
    Ok(pairs)
}

/// Size of the staircase left in the box once the columns below `a_1` are
/// removed: `b_w u + sum (a_{k+1} - a_k)(b_k - b_w)`.
pub(crate) fn staircase_size(params: &CurveParams, pairs: &[ExponentPair]) -> u64 {
    let bw = pairs[pairs.len() - 1].j;
    let steps: u64 = pairs
        .windows(2)
        .map(|w| (w[1].i - w[0].i) * (w[0].j - bw))
        .sum();
    bw * params.u + steps
}

/// `n - (a_1 q^{s-1} + b_w u + sum_{k<w} (a_{k+1} - a_k)(b_k - b_w))`.
pub fn staircase_closed_form(gs: &GammaSet) -> Result<u64> {
    let params = &gs.params;
    let pairs = staircase_hypotheses(gs, true)?;
    let removed = pairs[0].i * params.y_bound() + staircase_size(params, &pairs);
    Ok(params.n() as u64 - removed)
}

/// Outcome of checking the close-gamma chain conditions on a gamma list.
#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub gammas: Vec<u64>,
    /// `iota` images sorted by first coordinate.
    pub pairs: Vec<ExponentPair>,
    pub spread: u64,
    pub spread_limit: u64,
    /// `gamma_w - gamma_1 < min(u, q^{s-1})`.
    pub spread_ok: bool,
    pub first_increasing: bool,
    pub second_decreasing: bool,
    /// `a_w - a_1 < u`.
    pub first_spread_ok: bool,
    /// `gamma_1 <= (u(q-2)+w) q^{s-1}`.
    pub bound_applies: bool,
    /// `a_1 <= u(q-2)+1`.
    pub first_bound_ok: bool,
    /// The staircase conclusions hold wherever the spread hypothesis does.
    pub holds: bool,
}

pub fn chain_conditions(params: &CurveParams, gammas: &[u64]) -> Result<ChainReport> {
    let gs = GammaSet::new(params, gammas)?;
    let pairs = gs.pairs_by_first();
    let w = gs.len() as u64;
    let spread = gs.gammas[gs.len() - 1] - gs.gammas[0];
    let spread_limit = params.u.min(params.y_bound());
    let spread_ok = spread < spread_limit;
    let first_increasing = pairs.windows(2).all(|p| p[0].i < p[1].i);
    let second_decreasing = pairs.windows(2).all(|p| p[0].j > p[1].j);
    let first_spread_ok = pairs[pairs.len() - 1].i - pairs[0].i < params.u;
    let bound_applies = gs.gammas[0] <= (params.u * (params.q - 2) + w) * params.y_bound();
    let first_bound_ok = pairs[0].i <= params.outside_x_count();
    let holds = !spread_ok
        || (first_increasing
            && second_decreasing
            && first_spread_ok
            && (!bound_applies || first_bound_ok));
    Ok(ChainReport {
        gammas: gs.gammas.clone(),
        pairs,
        spread,
        spread_limit,
        spread_ok,
        first_increasing,
        second_decreasing,
        first_spread_ok,
        bound_applies,
        first_bound_ok,
        holds,
    })
}

fn check_independent(partition: &PointPartition, d: &Matrix) -> Result<()> {
    if d.cols() != partition.n() {
        return Err(Error::LengthMismatch {
            expected: partition.n(),
            got: d.cols(),
        });
    }
    if d.rows() == 0 {
        return Err(Error::EmptyGammaSet);
    }
    if rank(&partition.field, d) != d.rows() {
        return Err(Error::DependentRows);
    }
    Ok(())
}

/// `rho(D)`: pole orders where `dim(D ∩ C_L(G, lambda Q))` grows.
///
/// The rows of `D` seed an echelon basis; box monomials are then added in
/// increasing pole order and each one already in the span marks a jump.
pub fn rho_of_subspace(partition: &PointPartition, d: &Matrix) -> Result<GammaSet> {
    check_independent(partition, d)?;
    let f = &partition.field;
    let mut basis = EchelonBasis::new(partition.n());
    for row in d.iter_rows() {
        basis.insert(f, row.to_vec());
    }
    let mut jumps = Vec::with_capacity(d.rows());
    for e in box_pairs(&partition.params) {
        if !basis.insert(f, evaluate_monomial(partition, e.i, e.j)) {
            jumps.push(e.pole_order);
            if jumps.len() == d.rows() {
                break;
            }
        }
    }
    GammaSet::new(&partition.params, &jumps)
}

/// `kappa(D)`: pole orders `eta` where some word of `D` lies in
/// `C_L(G, (eta-1) Q)^⊥` but not in `C_L(G, eta Q)^⊥`.
///
/// `dim(D ∩ C_L(G, lambda Q)^⊥)` is `dim D` minus the rank of the inner
/// products of `D` with the monomials up to `lambda`; the jumps are the
/// monomials whose inner-product column raises that rank.
pub fn kappa_of_subspace(partition: &PointPartition, d: &Matrix) -> Result<GammaSet> {
    check_independent(partition, d)?;
    let f = &partition.field;
    let mut basis = EchelonBasis::new(d.rows());
    let mut jumps = Vec::with_capacity(d.rows());
    for e in box_pairs(&partition.params) {
        let ev = evaluate_monomial(partition, e.i, e.j);
        let column: Vec<FieldElement> = d.iter_rows().map(|r| dot(f, r, &ev)).collect();
        if basis.insert(f, column) {
            jumps.push(e.pole_order);
            if jumps.len() == d.rows() {
                break;
            }
        }
    }
    GammaSet::new(&partition.params, &jumps)
}

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    /// Maximum number of subspaces to visit.
    pub budget: u128,
    pub parallel: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            budget: 1 << 24,
            parallel: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub t: usize,
    pub value: u64,
    /// Support of the first minimizing subspace in enumeration order.
    pub witness_support: Vec<usize>,
    pub subspaces_visited: u128,
}

/// Number of `t`-dimensional subspaces of a `k`-dimensional space over a
/// field with `order` elements, saturating.
pub fn gaussian_binomial(k: usize, t: usize, order: u128) -> u128 {
    if t > k {
        return 0;
    }
    (0..k)
        .combinations(t)
        .map(|pivots| order.saturating_pow(free_positions(k, &pivots).len() as u32))
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// Non-pivot entries to the right of each pivot in a reduced echelon form.
fn free_positions(k: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (r, &p) in pivots.iter().enumerate() {
        for c in p + 1..k {
            if !pivots.contains(&c) {
                out.push((r, c));
            }
        }
    }
    out
}

/// Exact `M_t(C1, C2)` by visiting every `t`-dimensional subspace of `C1`
/// once through its reduced echelon coefficient matrix.
pub fn brute_force_rghw(
    pair: &NestedCodePair,
    t: usize,
    options: OracleOptions,
) -> Result<OracleResult> {
    if t == 0 || t > pair.ell {
        return Err(Error::DimensionTooLarge { m: t, pool: pair.ell });
    }
    let partition: &Arc<PointPartition> = pair.partition();
    let f = &*partition.field;
    let order = f.order() as u128;
    let k1 = pair.k1();
    let k2 = pair.k2();
    let needed = gaussian_binomial(k1, t, order);
    if needed > options.budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget: options.budget,
        });
    }
    let basis = pair.basis();
    let n = partition.n();
    let elements: Vec<FieldElement> = f.elements().collect();
    let pivot_sets: Vec<Vec<usize>> = (0..k1).combinations(t).collect();

    // best (support, pivot set index, assignment index, support set)
    let search = |(pi, pivots): (usize, &Vec<usize>)| -> Option<(u64, usize, u128, Vec<usize>)> {
        let free = free_positions(k1, pivots);
        let total = order.pow(free.len() as u32);
        let mut best: Option<(u64, usize, u128, Vec<usize>)> = None;
        let mut digits = vec![0usize; free.len()];
        for idx in 0..total {
            if idx > 0 {
                for d in digits.iter_mut() {
                    *d += 1;
                    if *d < elements.len() {
                        break;
                    }
                    *d = 0;
                }
            }
            let mut coef = Matrix::zeros(t, k1);
            for (r, &p) in pivots.iter().enumerate() {
                coef.set(r, p, FieldElement::ONE);
            }
            for (&(r, c), &d) in free.iter().zip(&digits) {
                coef.set(r, c, elements[d]);
            }
            // D ∩ C2 = 0 iff the extension coordinates have full rank
            let ext: Vec<usize> = (k2..k1).collect();
            if rank(f, &coef.select_columns(&ext)) < t {
                continue;
            }
            let words = coef.mul(f, basis);
            let support: Vec<usize> = (0..n)
                .filter(|&j| (0..t).any(|r| !words.get(r, j).is_zero()))
                .collect();
            let size = support.len() as u64;
            if best.as_ref().is_none_or(|b| size < b.0) {
                best = Some((size, pi, idx, support));
            }
        }
        best
    };

    let key = |b: &(u64, usize, u128, Vec<usize>)| (b.0, b.1, b.2);
    let best = if options.parallel {
        pivot_sets
            .par_iter()
            .enumerate()
            .filter_map(search)
            .min_by_key(key)
    } else {
        pivot_sets.iter().enumerate().filter_map(search).min_by_key(key)
    };
    let (value, _, _, witness_support) = best.ok_or(Error::DimensionTooLarge {
        m: t,
        pool: pair.ell,
    })?;
    Ok(OracleResult {
        t,
        value,
        witness_support,
        subspaces_visited: needed,
    })
}

/// Count of box points `>=_p` some pair, used as a direct cross-check.
pub fn dominated_count(params: &CurveParams, pairs: &[ExponentPair]) -> u64 {
    box_pairs(params)
        .iter()
        .filter(|e| pairs.iter().any(|p| leq_partial(p, e)))
        .count() as u64
}
