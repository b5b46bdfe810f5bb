//! Explicit maximum non-qualifying coalitions.
//!
//! For a staircase gamma set with pairs `(a_j, b_j)` the functions
//!
//! ```text
//! f_j = prod_{k < a_j} (x - xi_k) * prod_{k < b_j} (y - beta_k)
//! ```
//!
//! have pole orders `gamma_j`, where `xi` lists x-values from departments
//! other than `i'` followed by an ordering of `Gamma_{i'}^(1)` and `beta`
//! orders `Gamma_{i'}^(2)`. Their common zeros form a coalition of size
//! `n - M_w(C1, C2)` that cannot determine `w` of the secret symbols.
//!
//! When `a_1 <= u(q-2)+1` exactly `a_1` outside x-values are used. Beyond
//! that bound every outside x-value is used and the remaining factors come
//! from `Gamma_{i'}^(1)`; the resulting coalitions then have no slab.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use crate::codes::uncertainty;
use crate::curve::PointPartition;
use crate::error::{Error, Result};
use crate::finite_field::FieldElement;
use crate::ramp::Scheme;
use crate::rghw::{footprint_count, gamma_pool, rghw_primary_bound, staircase_hypotheses, GammaSet};
use crate::semigroup::ExponentPair;

/// Which roots the constructed functions use.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootChoice {
    /// Department hosting the staircase, in `1..q`.
    pub i_prime: usize,
    /// Distinct x-values from departments other than `i_prime`.
    pub alphas: Vec<FieldElement>,
    /// A permutation of `Gamma_{i'}^(1)`.
    pub gamma1_order: Vec<FieldElement>,
    /// A permutation of `Gamma_{i'}^(2)`.
    pub gamma2_order: Vec<FieldElement>,
}

impl RootChoice {
    /// Outside x-values taken department by department: `A_0` first when
    /// `include_a0`, then the large departments in index order. Both
    /// orderings inside `A_{i'}` are the enumeration order.
    pub fn canonical(
        partition: &PointPartition,
        gammas: &GammaSet,
        i_prime: usize,
        include_a0: bool,
    ) -> Result<Self> {
        let needed = alpha_count(partition, gammas);
        // using every outside x-value forces A_0 in
        let with_a0 = include_a0 || needed as u64 == partition.params.outside_x_count();
        let mut pool: Vec<FieldElement> = Vec::new();
        if with_a0 {
            pool.push(FieldElement::ZERO);
        }
        for d in 1..partition.gamma1.len() {
            if d != i_prime {
                pool.extend(&partition.gamma1[d]);
            }
        }
        if needed > pool.len() {
            return Err(Error::InvalidChoice(format!(
                "{needed} outside x-values needed, {} available",
                pool.len()
            )));
        }
        pool.truncate(needed);
        let choice = RootChoice {
            i_prime,
            alphas: pool,
            gamma1_order: partition.gamma1.get(i_prime).cloned().unwrap_or_default(),
            gamma2_order: partition.gamma2.get(i_prime).cloned().unwrap_or_default(),
        };
        validate_choice(partition, gammas, &choice)?;
        Ok(choice)
    }
}

/// Number of outside x-values a choice must supply: `a_1`, capped at
/// `u(q-2)+1`.
pub fn alpha_count(partition: &PointPartition, gammas: &GammaSet) -> usize {
    let a1 = gammas.pairs.iter().map(|e| e.i).min().expect("nonempty");
    a1.min(partition.params.outside_x_count()) as usize
}

fn staircase_pairs(partition: &PointPartition, gammas: &GammaSet) -> Result<Vec<ExponentPair>> {
    let a1 = gammas.pairs.iter().map(|e| e.i).min().expect("nonempty");
    let bounded = a1 <= partition.params.outside_x_count();
    staircase_hypotheses(gammas, bounded)
}

fn is_permutation(a: &[FieldElement], b: &[FieldElement]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort();
    b.sort();
    a == b
}

pub fn validate_choice(partition: &PointPartition, gammas: &GammaSet, choice: &RootChoice) -> Result<()> {
    let q = partition.params.q as usize;
    let ip = choice.i_prime;
    if ip == 0 || ip >= q {
        return Err(Error::InvalidChoice(format!("i' = {ip} not in 1..{q}")));
    }
    if !is_permutation(&choice.gamma1_order, &partition.gamma1[ip]) {
        return Err(Error::InvalidChoice("gamma1_order is not a permutation of Gamma_{i'}^(1)".into()));
    }
    if !is_permutation(&choice.gamma2_order, &partition.gamma2[ip]) {
        return Err(Error::InvalidChoice("gamma2_order is not a permutation of Gamma_{i'}^(2)".into()));
    }
    let distinct: BTreeSet<_> = choice.alphas.iter().collect();
    if distinct.len() != choice.alphas.len() {
        return Err(Error::InvalidChoice("alphas are not distinct".into()));
    }
    for &x in &choice.alphas {
        match partition.department_of_x(x) {
            Some(d) if d != ip => {}
            _ => {
                return Err(Error::InvalidChoice(format!(
                    "alpha {x} is not an x-value outside department {ip}"
                )))
            }
        }
    }
    let needed = alpha_count(partition, gammas);
    if choice.alphas.len() != needed {
        return Err(Error::InvalidChoice(format!(
            "{} alphas given, {needed} required",
            choice.alphas.len()
        )));
    }
    Ok(())
}

/// `f = prod (x - r) over x_roots * prod (y - r) over y_roots`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionDescription {
    pub gamma: u64,
    pub a: u64,
    pub b: u64,
    pub x_roots: Vec<FieldElement>,
    pub y_roots: Vec<FieldElement>,
}

impl FunctionDescription {
    pub fn evaluate(&self, partition: &PointPartition) -> Vec<FieldElement> {
        let f = &partition.field;
        partition
            .points
            .iter()
            .map(|pt| {
                let xs = self
                    .x_roots
                    .iter()
                    .fold(FieldElement::ONE, |acc, &r| f.mul(acc, f.sub(pt.x, r)));
                self.y_roots
                    .iter()
                    .fold(xs, |acc, &r| f.mul(acc, f.sub(pt.y, r)))
            })
            .collect()
    }
}

/// The functions `f_1..f_w`, one per gamma in increasing first coordinate.
pub fn construct_functions(
    partition: &PointPartition,
    gammas: &GammaSet,
    choice: &RootChoice,
) -> Result<Vec<FunctionDescription>> {
    let pairs = staircase_pairs(partition, gammas)?;
    validate_choice(partition, gammas, choice)?;
    let xi: Vec<FieldElement> = choice
        .alphas
        .iter()
        .chain(&choice.gamma1_order)
        .copied()
        .collect();
    pairs
        .iter()
        .map(|e| {
            let (a, b) = (e.i as usize, e.j as usize);
            if a > xi.len() || b > choice.gamma2_order.len() {
                return Err(Error::InvalidChoice(format!("too few roots for ({a}, {b})")));
            }
            Ok(FunctionDescription {
                gamma: e.pole_order,
                a: e.i,
                b: e.j,
                x_roots: xi[..a].to_vec(),
                y_roots: choice.gamma2_order[..b].to_vec(),
            })
        })
        .collect()
}

/// Indices of the points where every function vanishes.
pub fn common_zero_set(partition: &PointPartition, functions: &[FunctionDescription]) -> Vec<usize> {
    partition
        .points
        .iter()
        .enumerate()
        .filter(|(_, pt)| {
            functions
                .iter()
                .all(|f| f.x_roots.contains(&pt.x) || f.y_roots.contains(&pt.y))
        })
        .map(|(i, _)| i)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Slab {
    pub department: usize,
    pub x_values: Vec<FieldElement>,
    pub indices: Vec<usize>,
    /// `binomial(u, |S|)` ways to pick the slab's x-values in this department.
    pub choices: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Structure {
    pub i_prime: usize,
    /// Large departments contained entirely in the coalition.
    pub full_departments: Vec<usize>,
    pub a0_included: bool,
    pub slab: Option<Slab>,
    /// Points of `A_{i'}` in the coalition.
    pub staircase: Vec<usize>,
}

impl Structure {
    /// `|full| u q^{s-1} + [A_0] q^{s-1} + |S| q^{s-1} + |staircase|`.
    pub fn cardinality(&self, partition: &PointPartition) -> usize {
        let p = &partition.params;
        let qs1 = p.y_bound() as usize;
        self.full_departments.len() * p.u as usize * qs1
            + usize::from(self.a0_included) * qs1
            + self.slab.as_ref().map_or(0, |s| s.x_values.len() * qs1)
            + self.staircase.len()
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Number of slab patterns for a given department: `binomial(u, a_1 mod u)`.
pub fn slab_count(u: u64, a1: u64) -> u128 {
    binomial(u, a1 % u)
}

/// Same count with the slab size taken as `a_1 - floor(a_1/u)`.
pub fn slab_count_uncorrected(u: u64, a1: u64) -> u128 {
    binomial(u, a1 - a1 / u)
}

/// Splits a constructed coalition into full departments, an optional `A_0`,
/// at most one partial department (the slab) and the staircase in `A_{i'}`.
pub fn decompose_structure(
    partition: &PointPartition,
    set: &[usize],
    choice: &RootChoice,
    gammas: &GammaSet,
) -> Result<Structure> {
    let members: BTreeSet<usize> = set.iter().copied().collect();
    let ip = choice.i_prime;
    let qs1 = partition.params.y_bound() as usize;
    let mut full_departments = Vec::new();
    let mut a0_included = false;
    let mut slab = None;
    for (d, dept) in partition.departments.iter().enumerate() {
        if d == ip {
            continue;
        }
        let mut xs: Vec<FieldElement> = Vec::new();
        for &x in &partition.gamma1[d] {
            let column: Vec<usize> = dept
                .iter()
                .copied()
                .filter(|&i| partition.points[i].x == x)
                .collect();
            let inside = column.iter().filter(|i| members.contains(i)).count();
            if inside == qs1 {
                xs.push(x);
            } else if inside != 0 {
                return Err(Error::NotConstructedForm(format!(
                    "x = {x} of department {d} is only partly covered"
                )));
            }
        }
        if xs.is_empty() {
            continue;
        }
        if d == 0 {
            a0_included = true;
        } else if xs.len() == partition.gamma1[d].len() {
            full_departments.push(d);
        } else if slab.is_some() {
            return Err(Error::NotConstructedForm("more than one partial department".into()));
        } else {
            let indices = dept
                .iter()
                .copied()
                .filter(|i| members.contains(i))
                .collect();
            slab = Some(Slab {
                department: d,
                choices: binomial(partition.params.u, xs.len() as u64),
                x_values: xs,
                indices,
            });
        }
    }
    let staircase: Vec<usize> = partition.departments[ip]
        .iter()
        .copied()
        .filter(|i| members.contains(i))
        .collect();
    let structure = Structure {
        i_prime: ip,
        full_departments,
        a0_included,
        slab,
        staircase,
    };
    if structure.cardinality(partition) != members.len() {
        return Err(Error::NotConstructedForm("parts do not exhaust the set".into()));
    }
    let expected = local_staircase_size(partition, gammas, choice.alphas.len())?;
    if structure.staircase.len() != expected {
        return Err(Error::NotConstructedForm(format!(
            "staircase has {} points, expected {expected}",
            structure.staircase.len()
        )));
    }
    Ok(structure)
}

/// Points of `A_{i'}` killed by every function when `outside` x-values come
/// first: with `c_j = a_j - outside`, columns before `c_1` are full and
/// column `k` in `[c_m, c_{m+1})` keeps `b_m` rows.
fn local_staircase_size(partition: &PointPartition, gammas: &GammaSet, outside: usize) -> Result<usize> {
    let pairs = staircase_pairs(partition, gammas)?;
    let u = partition.params.u;
    let qs1 = partition.params.y_bound();
    let c: Vec<u64> = pairs.iter().map(|e| e.i - outside as u64).collect();
    let mut total = c[0] * qs1;
    for m in 0..pairs.len() {
        let next = c.get(m + 1).copied().unwrap_or(u);
        total += (next - c[m]) * pairs[m].j;
    }
    Ok(total as usize)
}

#[derive(Clone, Debug, Serialize)]
pub struct NonQualifyingSet {
    pub indices: Vec<usize>,
    /// The set is maximum non-`level`-qualifying.
    pub level: usize,
    pub w: usize,
    pub uncertainty: usize,
    pub choice: RootChoice,
    pub functions: Vec<FunctionDescription>,
    pub structure: Option<Structure>,
}

fn minimum_for(scheme: &Scheme, gammas: &GammaSet) -> Result<u64> {
    let levels = scheme.pair.levels.ok_or(Error::NotOnePoint)?;
    let params = &scheme.partition().params;
    let pool = gamma_pool(params, levels.lambda1, levels.lambda2, scheme.pool.as_deref())?;
    if let Some(&g) = gammas.gammas.iter().find(|g| !pool.contains(g)) {
        return Err(Error::InvalidPool(g));
    }
    let bound = rghw_primary_bound(params, gammas.len(), levels.lambda1, levels.lambda2, Some(&pool))?;
    let count = footprint_count(gammas);
    if count != bound.value {
        return Err(Error::NotMinimizing {
            count,
            minimum: bound.value,
        });
    }
    Ok(bound.value)
}

fn build_verified(
    scheme: &Scheme,
    gammas: &GammaSet,
    choice: &RootChoice,
    minimum: u64,
) -> Result<NonQualifyingSet> {
    let partition = scheme.partition();
    let w = gammas.len();
    let functions = construct_functions(partition, gammas, choice)?;
    let indices = common_zero_set(partition, &functions);
    if indices.len() as u64 != scheme.n() as u64 - minimum {
        return Err(Error::VerificationFailure(format!(
            "coalition has {} members, expected {}",
            indices.len(),
            scheme.n() as u64 - minimum
        )));
    }
    let unc = uncertainty(&scheme.pair, &indices)?;
    if unc < w {
        return Err(Error::VerificationFailure(format!(
            "uncertainty {unc} is below {w}"
        )));
    }
    let structure = decompose_structure(partition, &indices, choice, gammas).ok();
    Ok(NonQualifyingSet {
        indices,
        level: scheme.ell() + 1 - w,
        w,
        uncertainty: unc,
        choice: choice.clone(),
        functions,
        structure,
    })
}

/// Builds the common zero set for `gammas` and verifies it against the codes.
pub fn build_max_nonqualifying(
    scheme: &Scheme,
    w: usize,
    gammas: &GammaSet,
    choice: &RootChoice,
) -> Result<NonQualifyingSet> {
    if gammas.len() != w {
        return Err(Error::LengthMismatch {
            expected: w,
            got: gammas.len(),
        });
    }
    let minimum = minimum_for(scheme, gammas)?;
    build_verified(scheme, gammas, choice, minimum)
}

fn rotated(v: &[FieldElement], k: usize) -> Vec<FieldElement> {
    let mut v = v.to_vec();
    v.rotate_left(k);
    v
}

/// Outside x-value lists with the department pattern of a constructed
/// coalition: optional `A_0`, whole departments, then one partial department.
fn alpha_patterns(partition: &PointPartition, i_prime: usize, needed: usize) -> Vec<Vec<FieldElement>> {
    let q = partition.params.q as usize;
    let u = partition.params.u as usize;
    let others: Vec<usize> = (1..q).filter(|&d| d != i_prime).collect();
    let outside = partition.params.outside_x_count() as usize;
    let mut out = Vec::new();
    if needed == outside {
        let mut all = vec![FieldElement::ZERO];
        for &d in &others {
            all.extend(&partition.gamma1[d]);
        }
        out.push(all);
        return out;
    }
    for with_a0 in [false, true] {
        let Some(rest) = needed.checked_sub(usize::from(with_a0)) else {
            continue;
        };
        let (full, partial) = (rest / u, rest % u);
        if full + usize::from(partial > 0) > others.len() {
            continue;
        }
        for chosen in others.iter().copied().combinations(full) {
            let mut base = Vec::new();
            if with_a0 {
                base.push(FieldElement::ZERO);
            }
            for &d in &chosen {
                base.extend(&partition.gamma1[d]);
            }
            if partial == 0 {
                out.push(base);
                continue;
            }
            for &d in others.iter().filter(|d| !chosen.contains(d)) {
                for subset in partition.gamma1[d].iter().copied().combinations(partial) {
                    let mut alphas = base.clone();
                    alphas.extend(subset);
                    out.push(alphas);
                }
            }
        }
    }
    out
}

/// Distinct verified coalitions obtained by varying `i'`, the outside
/// departments and x-values, and the orderings inside `A_{i'}` (by rotation).
/// Stops after `limit` sets.
pub fn enumerate_variants(scheme: &Scheme, gammas: &GammaSet, limit: usize) -> Result<Vec<NonQualifyingSet>> {
    let partition = scheme.partition();
    let minimum = minimum_for(scheme, gammas)?;
    staircase_pairs(partition, gammas)?;
    let needed = alpha_count(partition, gammas);
    let q = partition.params.q as usize;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for i_prime in 1..q {
        let g1 = &partition.gamma1[i_prime];
        let g2 = &partition.gamma2[i_prime];
        for alphas in alpha_patterns(partition, i_prime, needed) {
            for r1 in 0..g1.len() {
                for r2 in 0..g2.len() {
                    if out.len() >= limit {
                        return Ok(out);
                    }
                    let choice = RootChoice {
                        i_prime,
                        alphas: alphas.clone(),
                        gamma1_order: rotated(g1, r1),
                        gamma2_order: rotated(g2, r2),
                    };
                    let functions = construct_functions(partition, gammas, &choice)?;
                    let indices = common_zero_set(partition, &functions);
                    if seen.insert(indices) {
                        out.push(build_verified(scheme, gammas, &choice, minimum)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::curve::{enumerate_points, validate_params};
    use crate::rghw::{rho_of_subspace, staircase_closed_form};
    use crate::linalg::Matrix;

    fn part(q: u64, s: u32, u: u64) -> Arc<PointPartition> {
        Arc::new(enumerate_points(&validate_params(q, s, u).unwrap()).unwrap())
    }

    #[test]
    fn smallest_case() {
        let p = part(2, 2, 3);
        let gs = GammaSet::new(&p.params, &[2]).unwrap();
        let choice = RootChoice::canonical(&p, &gs, 1, true).unwrap();
        assert_eq!(choice.alphas, vec![FieldElement::ZERO]);
        let fs = construct_functions(&p, &gs, &choice).unwrap();
        assert_eq!(fs[0].x_roots, vec![FieldElement::ZERO]);
        assert!(fs[0].y_roots.is_empty());
        assert_eq!(common_zero_set(&p, &fs), p.departments[0]);

        let scheme = Scheme::one_point(&p, 2, 0).unwrap();
        let nq = build_max_nonqualifying(&scheme, 1, &gs, &choice).unwrap();
        assert_eq!(nq.level, 1);
        assert_eq!(nq.indices, p.departments[0]);
        let vars = enumerate_variants(&scheme, &gs, 100).unwrap();
        assert_eq!(vars.len(), 1);
    }

    #[test]
    fn example_chain_zero_set() {
        let p = part(4, 3, 7);
        let gs = GammaSet::new(&p.params, &[90, 91, 92]).unwrap();
        let choice = RootChoice::canonical(&p, &gs, 1, false).unwrap();
        let fs = construct_functions(&p, &gs, &choice).unwrap();
        for f in &fs {
            assert_eq!(f.a * 16 + f.b * 7, f.gamma);
        }
        let zeros = common_zero_set(&p, &fs);
        assert_eq!(zeros.len(), 352 - 295);
        assert_eq!(staircase_closed_form(&gs).unwrap(), 295);
        // zero set by evaluation agrees with the root test
        let evals: Vec<_> = fs.iter().map(|f| f.evaluate(&p)).collect();
        let by_eval: Vec<usize> = (0..p.n())
            .filter(|&i| evals.iter().all(|e| e[i].is_zero()))
            .collect();
        assert_eq!(by_eval, zeros);
        let d = Matrix::from_rows(evals, p.n());
        assert_eq!(rho_of_subspace(&p, &d).unwrap().gammas, vec![90, 91, 92]);

        let st = decompose_structure(&p, &zeros, &choice, &gs).unwrap();
        assert!(st.slab.is_none() && st.full_departments.is_empty() && !st.a0_included);
        assert_eq!(st.staircase.len(), 57);
    }

    #[test]
    fn large_first_gamma_has_no_slab() {
        let p = part(4, 2, 5);
        let gs = GammaSet::new(&p.params, &[66, 67]).unwrap();
        let choice = RootChoice::canonical(&p, &gs, 2, true).unwrap();
        assert_eq!(choice.alphas.len(), 11);
        let fs = construct_functions(&p, &gs, &choice).unwrap();
        let zeros = common_zero_set(&p, &fs);
        assert_eq!(zeros.len(), 64 - 5);
        let st = decompose_structure(&p, &zeros, &choice, &gs).unwrap();
        assert!(st.slab.is_none());
        assert!(st.a0_included);
        assert_eq!(st.full_departments, vec![1, 3]);
        assert_eq!(st.cardinality(&p), 59);
    }

    #[test]
    fn slabs_appear_for_partial_departments() {
        let p = part(4, 3, 7);
        // iota(48) = (3, 0): three x-values from outside
        let gs = GammaSet::new(&p.params, &[48]).unwrap();
        let choice = RootChoice::canonical(&p, &gs, 1, false).unwrap();
        let zeros = common_zero_set(&p, &construct_functions(&p, &gs, &choice).unwrap());
        let st = decompose_structure(&p, &zeros, &choice, &gs).unwrap();
        let slab = st.slab.unwrap();
        assert_eq!((slab.department, slab.x_values.len()), (2, 3));
        assert_eq!(slab.choices, 35);
        assert_eq!(slab_count(7, 3), 35);
        // the two readings differ once a_1 exceeds u
        assert_eq!(slab_count_uncorrected(7, 3), 35);
        assert_eq!(slab_count(7, 10), 35);
        assert_eq!(slab_count_uncorrected(7, 10), 0);
    }

    #[test]
    fn rejects_bad_choices() {
        let p = part(4, 3, 7);
        let gs = GammaSet::new(&p.params, &[90, 91, 92]).unwrap();
        let mut choice = RootChoice::canonical(&p, &gs, 1, false).unwrap();
        choice.i_prime = 2;
        assert!(matches!(
            construct_functions(&p, &gs, &choice),
            Err(Error::InvalidChoice(_))
        ));
        let bad = GammaSet::new(&p.params, &[92, 115]).unwrap();
        let choice = RootChoice::canonical(&p, &gs, 1, false).unwrap();
        assert!(matches!(
            construct_functions(&p, &bad, &choice),
            Err(Error::Hypothesis(_))
        ));
    }
}
