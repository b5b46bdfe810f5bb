use std::fs;
use std::path::Path;
use std::sync::Arc;

use ntramp::curve::{enumerate_points, validate_params, CurveParams, PointPartition};
use ntramp::finite_field::{FieldElement, FieldSummary};
use ntramp::ramp::Scheme;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub q: u64,
    pub s: u32,
    pub u: u64,
    pub lambda1: u64,
    pub lambda2: u64,
    #[serde(default, alias = "pool", skip_serializing_if = "Option::is_none")]
    pub gamma_pool: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl SchemeConfig {
    pub fn params(&self) -> Result<CurveParams, CliError> {
        Ok(validate_params(self.q, self.s, self.u)?)
    }

    pub fn partition(&self) -> Result<Arc<PointPartition>, CliError> {
        Ok(Arc::new(enumerate_points(&self.params()?)?))
    }

    pub fn scheme(&self) -> Result<Scheme, CliError> {
        let mut scheme = Scheme::one_point(&self.partition()?, self.lambda1, self.lambda2)?;
        scheme.pool = self.gamma_pool.clone();
        Ok(scheme)
    }
}

/// Dealt shares together with what is needed to interpret them.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShareFile {
    pub config: SchemeConfig,
    pub field_spec: FieldSummary,
    /// Share of participant `i` at position `i`, as field element indices.
    pub shares: Vec<u32>,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::File(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn elements(scheme: &Scheme, values: &[u64]) -> Result<Vec<FieldElement>, CliError> {
    values
        .iter()
        .map(|&v| scheme.field().element(v).map_err(CliError::from))
        .collect()
}
