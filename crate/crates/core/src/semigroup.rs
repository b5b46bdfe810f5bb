//! Pole orders at the place at infinity.
//!
//! The Weierstrass semigroup is `H(Q) = <u, q^{s-1}>` and the monomial
//! `x^i y^j` has pole order `i q^{s-1} + j u`. Restricting to the box
//! `0 <= i < u(q-1)+1`, `0 <= j < q^{s-1}` gives the `n` pole orders `H*(Q)`
//! at which the one-point code filtration grows.

use serde::Serialize;

use crate::curve::CurveParams;
use crate::error::{Error, Result};

/// A box exponent `(i, j)` of the monomial `x^i y^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ExponentPair {
    pub i: u64,
    pub j: u64,
    pub pole_order: u64,
}

impl ExponentPair {
    pub fn new(params: &CurveParams, i: u64, j: u64) -> Result<Self> {
        if i >= params.x_bound() || j >= params.y_bound() {
            return Err(Error::OutsideBox { i, j });
        }
        Ok(ExponentPair {
            i,
            j,
            pole_order: pole_order(params, i, j),
        })
    }
}

pub fn pole_order(params: &CurveParams, i: u64, j: u64) -> u64 {
    i * params.y_bound() + j * params.u
}

/// `a <=_p b` in the componentwise order.
pub fn leq_partial(a: &ExponentPair, b: &ExponentPair) -> bool {
    a.i <= b.i && a.j <= b.j
}

/// Membership of `lambda` in `<u, q^{s-1}>`, by direct search.
pub fn in_semigroup(params: &CurveParams, lambda: u64) -> bool {
    let step = params.y_bound();
    let mut rest = lambda;
    loop {
        if rest.is_multiple_of(params.u) {
            return true;
        }
        if rest < step {
            return false;
        }
        rest -= step;
    }
}

/// The box pair with pole order `lambda`.
pub fn iota(params: &CurveParams, lambda: u64) -> Result<ExponentPair> {
    for j in 0..params.y_bound() {
        let Some(rest) = lambda.checked_sub(j * params.u) else {
            break;
        };
        if rest % params.y_bound() == 0 {
            let i = rest / params.y_bound();
            if i < params.x_bound() {
                return ExponentPair::new(params, i, j);
            }
        }
    }
    Err(Error::NotInHStar(lambda))
}

/// All box exponents sorted by pole order.
pub fn box_pairs(params: &CurveParams) -> Vec<ExponentPair> {
    let mut out: Vec<_> = (0..params.x_bound())
        .flat_map(|i| (0..params.y_bound()).map(move |j| (i, j)))
        .map(|(i, j)| ExponentPair {
            i,
            j,
            pole_order: pole_order(params, i, j),
        })
        .collect();
    out.sort_by_key(|e| e.pole_order);
    out
}

/// `H*(Q)` with its exponent pairs.
#[derive(Clone, Debug, Serialize)]
pub struct HStar {
    pub params: CurveParams,
    pub members: Vec<u64>,
    #[serde(skip)]
    pairs: Vec<ExponentPair>,
}

impl HStar {
    pub fn contains(&self, lambda: u64) -> bool {
        self.members.binary_search(&lambda).is_ok()
    }

    pub fn iota(&self, lambda: u64) -> Result<ExponentPair> {
        self.members
            .binary_search(&lambda)
            .map(|k| self.pairs[k])
            .map_err(|_| Error::NotInHStar(lambda))
    }

    /// Exponent pairs in increasing pole order.
    pub fn pairs(&self) -> &[ExponentPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in the half-open range `(lo, hi]`.
    pub fn between(&self, lo: u64, hi: u64) -> Vec<u64> {
        self.members
            .iter()
            .copied()
            .filter(|&g| lo < g && g <= hi)
            .collect()
    }

    /// Number of members `<= lambda`, which is the dimension of the one-point
    /// code at level `lambda`.
    pub fn count_up_to(&self, lambda: u64) -> usize {
        self.members.partition_point(|&g| g <= lambda)
    }
}

pub fn h_star(params: &CurveParams) -> HStar {
    let pairs = box_pairs(params);
    let members = pairs.iter().map(|e| e.pole_order).collect();
    HStar {
        params: *params,
        members,
        pairs,
    }
}

/// `#(H \ (lambda + H))` counted by enumerating `H` up to
/// `lambda` plus the conductor.
pub fn gap_count(params: &CurveParams, lambda: u64) -> Result<u64> {
    if !in_semigroup(params, lambda) {
        return Err(Error::NotInSemigroup(lambda));
    }
    let (a, b) = (params.u, params.y_bound());
    // generators are coprime, so every integer >= (a-1)(b-1) is in H
    let conductor = (a - 1) * (b - 1);
    let mut count = 0;
    for mu in 0..=lambda + conductor {
        if in_semigroup(params, mu) && !(mu >= lambda && in_semigroup(params, mu - lambda)) {
            count += 1;
        }
    }
    Ok(count)
}
