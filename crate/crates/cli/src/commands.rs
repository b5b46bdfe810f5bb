use ntramp::codes::NestedCodePair;
use ntramp::finite_field::FieldElement;
use ntramp::qualifying::{enumerate_variants, NonQualifyingSet};
use ntramp::ramp::{access_numbers_for_levels, coalition_report, deal_seeded, reconstruct, AccessReport, CoalitionReport, Reconstruction, ShareVector};
use ntramp::rghw::{brute_force_rghw, rghw_primary_bound, GammaSet, OracleOptions};
use ntramp::semigroup::h_star;
use serde::Serialize;

use crate::config::{elements, SchemeConfig, ShareFile};
use crate::CliError;

/// A command result: the JSON document and its CSV flattening.
pub struct Output {
    pub json: serde_json::Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("output types serialize")
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn indices(v: &[FieldElement]) -> Vec<u32> {
    v.iter().map(|e| e.index()).collect()
}

#[derive(Serialize)]
struct ParamsOutput<'a> {
    config: &'a SchemeConfig,
    n: usize,
    k1: usize,
    k2: usize,
    /// Co-dimension of the code pair, which may differ from the pool size.
    codimension: usize,
    access: &'a AccessReport,
}

pub fn params(config: &SchemeConfig) -> Result<Output, CliError> {
    let p = config.params()?;
    let hs = h_star(&p);
    let access = access_numbers_for_levels(&p, config.lambda1, config.lambda2, config.gamma_pool.as_deref())?;
    let (k1, k2) = (hs.count_up_to(config.lambda1), hs.count_up_to(config.lambda2));
    let out = ParamsOutput {
        config,
        n: p.n(),
        k1,
        k2,
        codimension: k1 - k2,
        access: &access,
    };
    let rows = (0..access.ell)
        .map(|m| {
            vec![
                (m + 1).to_string(),
                access.m_primary[m].value.to_string(),
                access.m_dual[m].value.to_string(),
                access.t[m].to_string(),
                access.r[m].to_string(),
                access.swapped.t[m].to_string(),
                access.swapped.r[m].to_string(),
            ]
        })
        .collect();
    Ok(Output {
        json: to_value(&out),
        header: vec!["m", "m_primary", "m_dual", "t", "r", "swapped_t", "swapped_r"],
        rows,
    })
}

#[derive(Serialize)]
struct PointRow {
    index: usize,
    department: usize,
    x: u32,
    y: u32,
}

#[derive(Serialize)]
struct CurveOutput {
    q: u64,
    s: u32,
    u: u64,
    n: usize,
    field: ntramp::finite_field::FieldSummary,
    alpha: u32,
    department_sizes: Vec<usize>,
    points: Vec<PointRow>,
}

pub fn curve(config: &SchemeConfig) -> Result<Output, CliError> {
    let part = config.partition()?;
    let points: Vec<PointRow> = part
        .departments
        .iter()
        .enumerate()
        .flat_map(|(d, members)| {
            members.iter().map(move |&i| (d, i))
        })
        .map(|(department, index)| PointRow {
            index,
            department,
            x: part.points[index].x.index(),
            y: part.points[index].y.index(),
        })
        .collect();
    let rows = points
        .iter()
        .map(|p| vec![p.index.to_string(), p.department.to_string(), p.x.to_string(), p.y.to_string()])
        .collect();
    let out = CurveOutput {
        q: config.q,
        s: config.s,
        u: config.u,
        n: part.n(),
        field: part.field.summary(),
        alpha: part.alpha.index(),
        department_sizes: part.departments.iter().map(Vec::len).collect(),
        points,
    };
    Ok(Output {
        json: to_value(&out),
        header: vec!["index", "department", "x", "y"],
        rows,
    })
}

pub fn deal(config: &SchemeConfig, secret: &[u64], seed: u64) -> Result<Output, CliError> {
    let scheme = config.scheme()?;
    let secret = elements(&scheme, secret)?;
    let (shares, _) = deal_seeded(&scheme, &secret, seed)?;
    let file = ShareFile {
        config: config.clone(),
        field_spec: scheme.field().summary(),
        shares: indices(&shares.shares),
    };
    let rows = file
        .shares
        .iter()
        .enumerate()
        .map(|(i, v)| vec![i.to_string(), v.to_string()])
        .collect();
    Ok(Output {
        json: to_value(&file),
        header: vec!["participant", "share"],
        rows,
    })
}

#[derive(Serialize)]
struct ReconstructOutput<'a> {
    subset: &'a [usize],
    #[serde(flatten)]
    result: &'a Reconstruction,
}

pub fn reconstruct_cmd(file: &ShareFile, subset: &[usize]) -> Result<Output, CliError> {
    let scheme = file.config.scheme()?;
    if scheme.field().summary() != file.field_spec {
        return Err(CliError::Domain(ntramp::Error::InvalidChoice(
            "field_spec does not match the configured field".into(),
        )));
    }
    let shares = shares_of(&scheme, file)?;
    let rec = reconstruct(&scheme, subset, &shares.restrict(check_subset(subset, shares.shares.len())?))?;
    let rows = match &rec.secret {
        Some(s) => s
            .iter()
            .enumerate()
            .map(|(i, v)| vec!["secret".into(), i.to_string(), v.to_string()])
            .collect(),
        None => rec
            .functionals
            .iter()
            .map(|f| {
                vec![
                    "functional".into(),
                    join(&indices(&f.coefficients)),
                    f.value.map_or(String::new(), |v| v.to_string()),
                ]
            })
            .collect(),
    };
    Ok(Output {
        json: to_value(&ReconstructOutput { subset, result: &rec }),
        header: vec!["kind", "position_or_coefficients", "value"],
        rows,
    })
}

fn check_subset(subset: &[usize], n: usize) -> Result<&[usize], CliError> {
    match subset.iter().find(|&&i| i >= n) {
        Some(&index) => Err(ntramp::Error::IndexOutOfRange { index, n }.into()),
        None => Ok(subset),
    }
}

fn shares_of(scheme: &ntramp::ramp::Scheme, file: &ShareFile) -> Result<ShareVector, CliError> {
    if file.shares.len() != scheme.n() {
        return Err(ntramp::Error::LengthMismatch {
            expected: scheme.n(),
            got: file.shares.len(),
        }
        .into());
    }
    let values: Vec<u64> = file.shares.iter().map(|&v| v as u64).collect();
    Ok(ShareVector {
        shares: elements(scheme, &values)?,
    })
}

#[derive(Serialize)]
struct CoalitionOutput<'a> {
    config: &'a SchemeConfig,
    #[serde(flatten)]
    report: &'a CoalitionReport,
}

pub fn coalition(config: &SchemeConfig, subset: &[usize], shares: Option<&ShareFile>) -> Result<Output, CliError> {
    let scheme = config.scheme()?;
    let shares = shares.map(|f| shares_of(&scheme, f)).transpose()?;
    let report = coalition_report(&scheme, subset, shares.as_ref())?;
    let rows = vec![vec![
        join(subset),
        report.leakage_symbols.to_string(),
        report.uncertainty_symbols.to_string(),
    ]];
    Ok(Output {
        json: to_value(&CoalitionOutput {
            config,
            report: &report,
        }),
        header: vec!["subset", "leakage", "uncertainty"],
        rows,
    })
}

#[derive(Serialize)]
struct NonQualOutput<'a> {
    config: &'a SchemeConfig,
    w: usize,
    gammas: &'a [u64],
    minimum: u64,
    variants: &'a [NonQualifyingSet],
}

pub fn nonqual(config: &SchemeConfig, w: usize, gammas: Option<&[u64]>, limit: usize) -> Result<Output, CliError> {
    let scheme = config.scheme()?;
    let p = scheme.partition().params;
    let bound = rghw_primary_bound(&p, w, config.lambda1, config.lambda2, config.gamma_pool.as_deref())?;
    let gs = match gammas {
        Some(g) => GammaSet::new(&p, g)?,
        None => bound.minimizing_gammas.clone(),
    };
    let variants = enumerate_variants(&scheme, &gs, limit)?;
    let rows = variants
        .iter()
        .enumerate()
        .map(|(k, v)| {
            vec![
                k.to_string(),
                v.level.to_string(),
                v.indices.len().to_string(),
                join(&v.indices),
            ]
        })
        .collect();
    Ok(Output {
        json: to_value(&NonQualOutput {
            config,
            w,
            gammas: &gs.gammas,
            minimum: bound.value,
            variants: &variants,
        }),
        header: vec!["variant", "level", "size", "indices"],
        rows,
    })
}

#[derive(Serialize)]
struct OracleRow {
    t: usize,
    oracle: u64,
    bound: u64,
    matches: bool,
    witness_support: Vec<usize>,
    subspaces_visited: u128,
}

#[derive(Serialize)]
struct OracleOutput<'a> {
    config: &'a SchemeConfig,
    results: Vec<OracleRow>,
}

pub fn oracle(config: &SchemeConfig, t: Option<usize>, options: OracleOptions) -> Result<Output, CliError> {
    let part = config.partition()?;
    let pair = NestedCodePair::one_point(&part, config.lambda1, config.lambda2)?;
    let ts: Vec<usize> = match t {
        Some(t) => vec![t],
        None => (1..=pair.ell).collect(),
    };
    let mut results = Vec::new();
    for t in ts {
        let exact = brute_force_rghw(&pair, t, options)?;
        let bound = rghw_primary_bound(&part.params, t, config.lambda1, config.lambda2, None)?;
        results.push(OracleRow {
            t,
            oracle: exact.value,
            bound: bound.value,
            matches: exact.value == bound.value,
            witness_support: exact.witness_support,
            subspaces_visited: exact.subspaces_visited,
        });
    }
    let rows = results
        .iter()
        .map(|r| vec![r.t.to_string(), r.oracle.to_string(), r.bound.to_string(), r.matches.to_string()])
        .collect();
    Ok(Output {
        json: to_value(&OracleOutput { config, results }),
        header: vec!["t", "oracle", "bound", "matches"],
        rows,
    })
}
