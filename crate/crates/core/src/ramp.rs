//! The linear ramp secret sharing scheme on a nested code pair.
//!
//! With basis rows `b_1..b_{k1}` (the first `k2` spanning `C2`), a secret
//! `s` and randomness `r` are shared as `sum r_i b_i + sum s_j b_{k2+j}`;
//! participant `i` (0-based) receives coordinate `i`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codes::{leakage, uncertainty, NestedCodePair};
use crate::curve::{CurveParams, PointPartition};
use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FieldSpec};
use crate::linalg::{dot, null_space, solve, EchelonBasis, Matrix};
use crate::rghw::{gamma_pool, rghw_dual_bound, rghw_primary_bound, BoundReport};

#[derive(Clone, Debug)]
pub struct Scheme {
    pub pair: NestedCodePair,
    /// Replaces `H* ∩ (lambda2, lambda1]` when computing access numbers.
    pub pool: Option<Vec<u64>>,
}

impl Scheme {
    pub fn one_point(partition: &Arc<PointPartition>, lambda1: u64, lambda2: u64) -> Result<Self> {
        Ok(Scheme {
            pair: NestedCodePair::one_point(partition, lambda1, lambda2)?,
            pool: None,
        })
    }

    pub fn with_pool(mut self, pool: Vec<u64>) -> Self {
        self.pool = Some(pool);
        self
    }

    pub fn partition(&self) -> &Arc<PointPartition> {
        self.pair.partition()
    }

    pub fn field(&self) -> &FieldSpec {
        &self.pair.partition().field
    }

    pub fn n(&self) -> usize {
        self.pair.c1.length()
    }

    /// Number of secret symbols.
    pub fn ell(&self) -> usize {
        self.pair.ell
    }

    pub fn k1(&self) -> usize {
        self.pair.k1()
    }

    pub fn k2(&self) -> usize {
        self.pair.k2()
    }

    pub fn basis(&self) -> &Matrix {
        self.pair.basis()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShareVector {
    pub shares: Vec<FieldElement>,
}

impl ShareVector {
    pub fn restrict(&self, set: &[usize]) -> Vec<FieldElement> {
        set.iter().map(|&i| self.shares[i]).collect()
    }
}

pub fn deal(scheme: &Scheme, secret: &[FieldElement], randomness: &[FieldElement]) -> Result<ShareVector> {
    if secret.len() != scheme.ell() {
        return Err(Error::LengthMismatch {
            expected: scheme.ell(),
            got: secret.len(),
        });
    }
    if randomness.len() != scheme.k2() {
        return Err(Error::LengthMismatch {
            expected: scheme.k2(),
            got: randomness.len(),
        });
    }
    for e in secret.iter().chain(randomness) {
        scheme.field().element(e.index() as u64)?;
    }
    let coeffs: Vec<FieldElement> = randomness.iter().chain(secret).copied().collect();
    Ok(ShareVector {
        shares: scheme.basis().left_mul_vec(scheme.field(), &coeffs),
    })
}

/// `len` uniformly random field elements.
pub fn random_vector(field: &FieldSpec, len: usize, rng: &mut impl Rng) -> Vec<FieldElement> {
    let order = field.order() as u64;
    (0..len)
        .map(|_| field.element(rng.gen_range(0..order)).expect("in range"))
        .collect()
}

/// Deals with randomness drawn from a ChaCha8 stream seeded by `seed`.
/// Returns the shares and the randomness used.
pub fn deal_seeded(
    scheme: &Scheme,
    secret: &[FieldElement],
    seed: u64,
) -> Result<(ShareVector, Vec<FieldElement>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let randomness = random_vector(scheme.field(), scheme.k2(), &mut rng);
    let shares = deal(scheme, secret, &randomness)?;
    Ok((shares, randomness))
}

/// Where each access number came from.
#[derive(Clone, Debug, Serialize)]
pub struct AccessProvenance {
    pub m: usize,
    /// Gammas attaining `M_m` of the dual pair, giving `t_m`.
    pub t_gammas: Vec<u64>,
    /// Index `ell - m + 1` of the primary table used for `r_m`.
    pub r_index: usize,
    pub r_gammas: Vec<u64>,
}

/// The same tables combined the other way round: `t_m = M_m(C1, C2) - 1` and
/// `r_m = n - M_{ell-m+1}(C2^⊥, C1^⊥) + 1`.
#[derive(Clone, Debug, Serialize)]
pub struct SwappedAccess {
    pub t: Vec<u64>,
    pub r: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AccessReport {
    pub n: usize,
    /// Number of `m` values, equal to the pool size.
    pub ell: usize,
    pub pool: Vec<u64>,
    pub pool_overridden: bool,
    /// `t_m = M_m(C2^⊥, C1^⊥) - 1`.
    pub t: Vec<u64>,
    /// `r_m = n - M_{ell-m+1}(C1, C2) + 1`.
    pub r: Vec<u64>,
    pub m_primary: Vec<BoundReport>,
    pub m_dual: Vec<BoundReport>,
    pub provenance: Vec<AccessProvenance>,
    pub swapped: SwappedAccess,
}

impl AccessReport {
    pub fn primary_values(&self) -> Vec<u64> {
        self.m_primary.iter().map(|b| b.value).collect()
    }

    pub fn dual_values(&self) -> Vec<u64> {
        self.m_dual.iter().map(|b| b.value).collect()
    }
}

/// Privacy and reconstruction numbers from the curve parameters and levels
/// alone; no generator matrices are built.
pub fn access_numbers_for_levels(
    params: &CurveParams,
    lambda1: u64,
    lambda2: u64,
    pool: Option<&[u64]>,
) -> Result<AccessReport> {
    let resolved = gamma_pool(params, lambda1, lambda2, pool)?;
    let ell = resolved.len();
    let n = params.n() as u64;
    let mut m_primary = Vec::with_capacity(ell);
    let mut m_dual = Vec::with_capacity(ell);
    for m in 1..=ell {
        m_primary.push(rghw_primary_bound(params, m, lambda1, lambda2, Some(&resolved))?);
        m_dual.push(rghw_dual_bound(params, m, lambda1, lambda2, Some(&resolved))?);
    }
    let t = m_dual.iter().map(|b| b.value - 1).collect();
    let r = (1..=ell).map(|m| n - m_primary[ell - m].value + 1).collect();
    let swapped = SwappedAccess {
        t: m_primary.iter().map(|b| b.value - 1).collect(),
        r: (1..=ell).map(|m| n - m_dual[ell - m].value + 1).collect(),
    };
    let provenance = (1..=ell)
        .map(|m| AccessProvenance {
            m,
            t_gammas: m_dual[m - 1].minimizing_gammas.gammas.clone(),
            r_index: ell - m + 1,
            r_gammas: m_primary[ell - m].minimizing_gammas.gammas.clone(),
        })
        .collect();
    Ok(AccessReport {
        n: params.n(),
        ell,
        pool: resolved,
        pool_overridden: pool.is_some(),
        t,
        r,
        m_primary,
        m_dual,
        provenance,
        swapped,
    })
}

pub fn access_numbers(scheme: &Scheme) -> Result<AccessReport> {
    let levels = scheme.pair.levels.ok_or(Error::NotOnePoint)?;
    access_numbers_for_levels(
        &scheme.partition().params,
        levels.lambda1,
        levels.lambda2,
        scheme.pool.as_deref(),
    )
}

/// A linear functional `phi . s` of the secret known to a coalition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveredFunctional {
    pub coefficients: Vec<FieldElement>,
    pub value: Option<FieldElement>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoalitionReport {
    pub set: Vec<usize>,
    pub leakage_symbols: usize,
    pub uncertainty_symbols: usize,
    pub recovered_functionals: Vec<RecoveredFunctional>,
}

fn check_set(scheme: &Scheme, set: &[usize]) -> Result<()> {
    let n = scheme.n();
    match set.iter().find(|&&i| i >= n) {
        Some(&index) => Err(Error::IndexOutOfRange { index, n }),
        None => Ok(()),
    }
}

/// Basis of the functionals determined by the coordinates in `set`, each
/// paired with the share combination `z` realizing it.
///
/// `phi` is known exactly when some `z` on `set` kills the `C2` rows and maps
/// the extension rows to `phi`.
fn functional_basis(scheme: &Scheme, set: &[usize]) -> Vec<(Vec<FieldElement>, Vec<FieldElement>)> {
    let f = scheme.field();
    let k2 = scheme.k2();
    let restricted = scheme.basis().select_columns(set);
    let c2_rows: Vec<usize> = (0..k2).collect();
    let ext_rows: Vec<usize> = (k2..scheme.k1()).collect();
    let kernel = if k2 == 0 {
        identity(set.len())
    } else {
        null_space(f, &restricted.select_rows(&c2_rows))
    };
    let ext = restricted.select_rows(&ext_rows);
    let mut seen = EchelonBasis::new(scheme.ell());
    let mut out = Vec::new();
    for z in kernel.iter_rows() {
        let phi: Vec<FieldElement> = ext.iter_rows().map(|row| dot(f, row, z)).collect();
        if seen.insert(f, phi.clone()) {
            out.push((phi, z.to_vec()));
        }
    }
    out
}

fn identity(k: usize) -> Matrix {
    let mut m = Matrix::zeros(k, k);
    for i in 0..k {
        m.set(i, i, FieldElement::ONE);
    }
    m
}

/// Exact leakage of `set`, with the recovered functionals and, when shares
/// are given, their values.
pub fn coalition_report(
    scheme: &Scheme,
    set: &[usize],
    shares: Option<&ShareVector>,
) -> Result<CoalitionReport> {
    check_set(scheme, set)?;
    let f = scheme.field();
    let leak = leakage(&scheme.pair, set)?;
    let unc = uncertainty(&scheme.pair, set)?;
    let restricted = shares.map(|s| s.restrict(set));
    let recovered_functionals = functional_basis(scheme, set)
        .into_iter()
        .map(|(phi, z)| RecoveredFunctional {
            coefficients: phi,
            value: restricted.as_ref().map(|v| dot(f, &z, v)),
        })
        .collect::<Vec<_>>();
    debug_assert_eq!(recovered_functionals.len(), leak);
    Ok(CoalitionReport {
        set: set.to_vec(),
        leakage_symbols: leak,
        uncertainty_symbols: unc,
        recovered_functionals,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Reconstruction {
    /// The whole secret, when the coalition determines it.
    pub secret: Option<Vec<FieldElement>>,
    pub functionals: Vec<RecoveredFunctional>,
    pub leakage_symbols: usize,
    pub uncertainty_symbols: usize,
    /// `(q^s)^uncertainty` secrets agree with the shares, saturating.
    pub consistent_secrets: u128,
}

/// Recovers what the shares on `set` (given in the order of `set`) reveal.
pub fn reconstruct(scheme: &Scheme, set: &[usize], shares: &[FieldElement]) -> Result<Reconstruction> {
    check_set(scheme, set)?;
    if shares.len() != set.len() {
        return Err(Error::LengthMismatch {
            expected: set.len(),
            got: shares.len(),
        });
    }
    let f = scheme.field();
    let restricted = scheme.basis().select_columns(set);
    if solve(f, &restricted.transpose(), shares).is_none() {
        return Err(Error::InconsistentShares);
    }
    let functionals: Vec<RecoveredFunctional> = functional_basis(scheme, set)
        .into_iter()
        .map(|(phi, z)| RecoveredFunctional {
            value: Some(dot(f, &z, shares)),
            coefficients: phi,
        })
        .collect();
    let leak = functionals.len();
    let unc = uncertainty(&scheme.pair, set)?;
    let secret = if leak == scheme.ell() {
        let phis = Matrix::from_rows(
            functionals.iter().map(|r| r.coefficients.clone()).collect(),
            scheme.ell(),
        );
        let values: Vec<FieldElement> = functionals.iter().map(|r| r.value.unwrap()).collect();
        Some(solve(f, &phis, &values).expect("functionals form a basis"))
    } else {
        None
    };
    let consistent_secrets = (f.order() as u128).saturating_pow(unc as u32);
    Ok(Reconstruction {
        secret,
        functionals,
        leakage_symbols: leak,
        uncertainty_symbols: unc,
        consistent_secrets,
    })
}
