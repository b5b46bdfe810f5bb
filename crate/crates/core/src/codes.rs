//! Evaluation codes on the curve points and the exact leakage of a coalition.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::curve::PointPartition;
use crate::error::{Error, Result};
use crate::finite_field::FieldElement;
use crate::linalg::{null_space, rank, EchelonBasis, Matrix};
use crate::semigroup::{box_pairs, pole_order, ExponentPair};

/// Evaluations of `x^i y^j` at every point, in point order.
pub fn evaluate_monomial(partition: &PointPartition, i: u64, j: u64) -> Vec<FieldElement> {
    let f = &partition.field;
    partition
        .points
        .iter()
        .map(|pt| f.mul(f.pow(pt.x, i), f.pow(pt.y, j)))
        .collect()
}

/// A code spanned by the evaluations of a set of box monomials.
#[derive(Clone, Debug)]
pub struct EvaluationCode {
    pub partition: Arc<PointPartition>,
    /// Defining exponents in increasing pole order.
    pub monomials: Vec<ExponentPair>,
    /// One row per monomial, in the same order.
    pub generator: Matrix,
}

impl EvaluationCode {
    fn from_monomials(partition: &Arc<PointPartition>, mut monomials: Vec<ExponentPair>) -> Self {
        monomials.sort_by_key(|e| e.pole_order);
        let n = partition.n();
        let rows = monomials
            .iter()
            .map(|e| evaluate_monomial(partition, e.i, e.j))
            .collect();
        EvaluationCode {
            partition: Arc::clone(partition),
            monomials,
            generator: Matrix::from_rows(rows, n),
        }
    }

    pub fn dimension(&self) -> usize {
        self.monomials.len()
    }

    pub fn length(&self) -> usize {
        self.partition.n()
    }
}

/// `C_L(G, lambda Q)`: all box monomials of pole order at most `lambda`.
pub fn build_one_point_code(partition: &Arc<PointPartition>, lambda: u64) -> EvaluationCode {
    let monomials = box_pairs(&partition.params)
        .into_iter()
        .filter(|e| e.pole_order <= lambda)
        .collect();
    EvaluationCode::from_monomials(partition, monomials)
}

/// A decreasing code: the exponent set must be closed under `<=_p`.
pub fn build_decreasing_code(
    partition: &Arc<PointPartition>,
    exponents: &[(u64, u64)],
) -> Result<EvaluationCode> {
    let params = &partition.params;
    let set: BTreeSet<(u64, u64)> = exponents.iter().copied().collect();
    let mut monomials = Vec::with_capacity(set.len());
    for &(i, j) in &set {
        monomials.push(ExponentPair::new(params, i, j)?);
        // closure under <=_p follows from closure under the two unit steps
        if i > 0 && !set.contains(&(i - 1, j)) {
            return Err(Error::NotDecreasing { i: i - 1, j });
        }
        if j > 0 && !set.contains(&(i, j - 1)) {
            return Err(Error::NotDecreasing { i, j: j - 1 });
        }
    }
    Ok(EvaluationCode::from_monomials(partition, monomials))
}

/// Rows spanning the dual code, `n - dim` of them.
pub fn dual_basis(code: &EvaluationCode) -> Matrix {
    null_space(&code.partition.field, &code.generator)
}

/// Dimension of the span of all ring monomials `x^i y^j` (any `i >= 0`,
/// `j < q^{s-1}`) with pole order at most `lambda`, evaluated at the points.
/// Unlike [`build_one_point_code`] this does not assume the box shape, so it
/// gives an independent view of where the filtration grows.
pub fn filtration_dimension(partition: &PointPartition, lambda: u64) -> usize {
    let params = &partition.params;
    let rows: Vec<_> = (0..params.y_bound())
        .flat_map(|j| {
            (0..)
                .take_while(move |&i| pole_order(params, i, j) <= lambda)
                .map(move |i| (i, j))
        })
        .map(|(i, j)| evaluate_monomial(partition, i, j))
        .collect();
    rank(&partition.field, &Matrix::from_rows(rows, partition.n()))
}

/// Levels `lambda <= upto` where `filtration_dimension` strictly increases,
/// computed incrementally over all ring monomials in pole order.
pub fn dimension_jumps(partition: &PointPartition, upto: u64) -> Vec<u64> {
    let params = &partition.params;
    let mut monos: Vec<(u64, u64, u64)> = Vec::new();
    for j in 0..params.y_bound() {
        let mut i = 0;
        while pole_order(params, i, j) <= upto {
            monos.push((pole_order(params, i, j), i, j));
            i += 1;
        }
    }
    monos.sort();
    let mut basis = EchelonBasis::new(partition.n());
    let mut jumps = Vec::new();
    for (pole, i, j) in monos {
        if basis.insert(&partition.field, evaluate_monomial(partition, i, j)) {
            jumps.push(pole);
        }
    }
    jumps
}

/// Levels of a pair of one-point codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OnePointLevels {
    pub lambda1: u64,
    pub lambda2: u64,
}

/// `C_2 ⊂ C_1` with co-dimension `ell`.
#[derive(Clone, Debug)]
pub struct NestedCodePair {
    pub c1: EvaluationCode,
    pub c2: EvaluationCode,
    pub ell: usize,
    /// Monomials of `c1` not in `c2`, by increasing pole order.
    pub extension_monomials: Vec<ExponentPair>,
    pub levels: Option<OnePointLevels>,
    basis: Matrix,
}

impl NestedCodePair {
    pub fn new(c1: EvaluationCode, c2: EvaluationCode) -> Result<Self> {
        if c1.partition.params != c2.partition.params {
            return Err(Error::NotNested("codes live on different curves".into()));
        }
        let inner: BTreeSet<_> = c2.monomials.iter().map(|e| (e.i, e.j)).collect();
        let outer: BTreeSet<_> = c1.monomials.iter().map(|e| (e.i, e.j)).collect();
        if !inner.is_subset(&outer) {
            return Err(Error::NotNested("C2 monomials are not all in C1".into()));
        }
        let extension_monomials: Vec<_> = c1
            .monomials
            .iter()
            .filter(|e| !inner.contains(&(e.i, e.j)))
            .copied()
            .collect();
        if extension_monomials.is_empty() {
            return Err(Error::NotNested("co-dimension is zero".into()));
        }
        let n = c1.length();
        let mut basis = c2.generator.clone();
        for e in &extension_monomials {
            basis.push_row(&evaluate_monomial(&c1.partition, e.i, e.j));
        }
        debug_assert_eq!(basis.cols(), n);
        Ok(NestedCodePair {
            ell: extension_monomials.len(),
            c1,
            c2,
            extension_monomials,
            levels: None,
            basis,
        })
    }

    pub fn one_point(partition: &Arc<PointPartition>, lambda1: u64, lambda2: u64) -> Result<Self> {
        if lambda2 >= lambda1 {
            return Err(Error::InvalidLevels { lambda1, lambda2 });
        }
        let c1 = build_one_point_code(partition, lambda1);
        let c2 = build_one_point_code(partition, lambda2);
        let mut pair = NestedCodePair::new(c1, c2)?;
        pair.levels = Some(OnePointLevels { lambda1, lambda2 });
        Ok(pair)
    }

    pub fn partition(&self) -> &Arc<PointPartition> {
        &self.c1.partition
    }

    pub fn k1(&self) -> usize {
        self.c1.dimension()
    }

    pub fn k2(&self) -> usize {
        self.c2.dimension()
    }

    /// Rows `b_1..b_{k1}`: the `c2` rows followed by the extension rows.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }
}

fn check_indices(n: usize, set: &[usize]) -> Result<()> {
    match set.iter().find(|&&i| i >= n) {
        Some(&index) => Err(Error::IndexOutOfRange { index, n }),
        None => Ok(()),
    }
}

/// Number of secret symbols determined by the shares on `set`:
/// `rank(C1|_A) - rank(C2|_A)`.
pub fn leakage(pair: &NestedCodePair, set: &[usize]) -> Result<usize> {
    check_indices(pair.c1.length(), set)?;
    let f = &pair.partition().field;
    let r1 = rank(f, &pair.c1.generator.select_columns(set));
    let r2 = rank(f, &pair.c2.generator.select_columns(set));
    Ok(r1 - r2)
}

/// Dimension of the largest subspace of `C1` meeting `C2` trivially with
/// support outside `set`, computed as `dim V - dim(V ∩ C2)` for
/// `V = {c in C1 : c|_A = 0}`.
pub fn uncertainty(pair: &NestedCodePair, set: &[usize]) -> Result<usize> {
    check_indices(pair.c1.length(), set)?;
    let f = &pair.partition().field;
    let g1 = &pair.c1.generator;
    // coefficient vectors z with z * G1|_A = 0, mapped back to codewords
    let kernel = null_space(f, &g1.select_columns(set).transpose());
    let vanishing = kernel.mul(f, g1);
    let dim_v = rank(f, &vanishing);
    let dim_sum = rank(f, &vanishing.vstack(&pair.c2.generator));
    let dim_meet = dim_v + pair.k2() - dim_sum;
    Ok(dim_v - dim_meet)
}
