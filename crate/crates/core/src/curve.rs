//! The extended norm-trace curve `x^u = y^{q^{s-1}} + ... + y^q + y` over
//! GF(q^s) and the department partition of its affine points.
//!
//! The right-hand side is the trace from GF(q^s) to GF(q), so a point `(a, b)`
//! with `Tr(b) = 0` must have `a = 0`; these points form department `A_0`.
//! For `i = 1..q-1` department `A_i` holds the points with
//! `a^u = Tr(b) = alpha^i`, where `alpha` is the canonical primitive element
//! of GF(q). Each `A_i` is a product `Gamma_i^(1) x Gamma_i^(2)` of an
//! x-coordinate set and a y-coordinate set.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite_field::{make_field, prime_power, FieldElement, FieldSpec, DEFAULT_ORDER_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CurveParams {
    pub q: u64,
    pub s: u32,
    pub u: u64,
}

impl CurveParams {
    /// Number of affine rational points, `(u(q-1)+1) q^{s-1}`.
    pub fn n(&self) -> usize {
        (self.x_bound() * self.y_bound()) as usize
    }

    /// Exclusive bound `u(q-1)+1` on the x-exponent of the monomial box.
    pub fn x_bound(&self) -> u64 {
        self.u * (self.q - 1) + 1
    }

    /// Exclusive bound `q^{s-1}` on the y-exponent of the monomial box; also
    /// the pole order of `x`.
    pub fn y_bound(&self) -> u64 {
        self.q.pow(self.s - 1)
    }

    pub fn field_order(&self) -> u64 {
        self.q.pow(self.s)
    }

    /// `u(q-2)+1`, the number of x-values outside a single large department.
    pub fn outside_x_count(&self) -> u64 {
        self.u * (self.q - 2) + 1
    }
}

pub fn validate_params(q: u64, s: u32, u: u64) -> Result<CurveParams> {
    prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if s < 2 {
        return Err(Error::InvalidCurve(format!("s = {s} must be at least 2")));
    }
    if u == 0 {
        return Err(Error::InvalidCurve("u must be positive".into()));
    }
    let order = (q as u128).checked_pow(s).unwrap_or(u128::MAX);
    if order > DEFAULT_ORDER_CAP as u128 {
        return Err(Error::FieldTooLarge {
            order,
            cap: DEFAULT_ORDER_CAP,
        });
    }
    let norm_exp = (q.pow(s) - 1) / (q - 1);
    if !norm_exp.is_multiple_of(u) {
        return Err(Error::InvalidCurve(format!(
            "u = {u} does not divide (q^s-1)/(q-1) = {norm_exp}"
        )));
    }
    Ok(CurveParams { q, s, u })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Point {
    pub x: FieldElement,
    pub y: FieldElement,
}

/// The enumerated affine points of a curve, grouped into departments.
#[derive(Debug, Clone, Serialize)]
pub struct PointPartition {
    pub params: CurveParams,
    #[serde(skip)]
    pub field: Arc<FieldSpec>,
    /// Primitive element of GF(q) labelling the departments.
    pub alpha: FieldElement,
    pub points: Vec<Point>,
    /// `departments[i]` lists the point indices of `A_i`.
    pub departments: Vec<Vec<usize>>,
    pub gamma1: Vec<Vec<FieldElement>>,
    pub gamma2: Vec<Vec<FieldElement>>,
}

impl PointPartition {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Department index of the point at `idx`.
    pub fn department_of(&self, idx: usize) -> usize {
        self.departments
            .iter()
            .position(|d| d.binary_search(&idx).is_ok())
            .expect("every point lies in a department")
    }

    /// Department owning the x-coordinate `x`, if any point has it.
    pub fn department_of_x(&self, x: FieldElement) -> Option<usize> {
        self.gamma1.iter().position(|g| g.contains(&x))
    }

    /// Whether `(x, y)` satisfies the curve equation.
    pub fn on_curve(&self, x: FieldElement, y: FieldElement) -> bool {
        let f = &self.field;
        let lhs = f.pow(x, self.params.u);
        let rhs = f
            .trace_to_subfield(y, self.params.q)
            .expect("GF(q) is a subfield");
        lhs == rhs
    }
}

pub fn enumerate_points(params: &CurveParams) -> Result<PointPartition> {
    let params = validate_params(params.q, params.s, params.u)?;
    let (p, a) = prime_power(params.q).ok_or(Error::NotPrimePower(params.q))?;
    let field = Arc::new(make_field(p, a * params.s)?);
    let f = &*field;
    let q = params.q;
    let alpha = f.subfield_primitive(q)?;

    // department index of each subfield value: 0 -> 0, alpha^i -> i
    let mut dept_of_value = std::collections::HashMap::new();
    dept_of_value.insert(FieldElement::ZERO, 0usize);
    for i in 1..q {
        dept_of_value.insert(f.pow(alpha, i), i as usize);
    }

    let mut gamma1: Vec<Vec<FieldElement>> = vec![Vec::new(); q as usize];
    let mut gamma2: Vec<Vec<FieldElement>> = vec![Vec::new(); q as usize];
    for y in f.elements() {
        let t = f.trace_to_subfield(y, q)?;
        gamma2[dept_of_value[&t]].push(y);
    }
    for x in f.elements() {
        let v = f.pow(x, params.u);
        if let Some(&d) = dept_of_value.get(&v) {
            // x^u lands in GF(q) exactly for the x-coordinates of the curve
            gamma1[d].push(x);
        }
    }

    let mut points = Vec::with_capacity(params.n());
    let mut departments = Vec::with_capacity(q as usize);
    for d in 0..q as usize {
        let mut members = Vec::new();
        for &x in &gamma1[d] {
            for &y in &gamma2[d] {
                members.push(points.len());
                points.push(Point { x, y });
            }
        }
        departments.push(members);
    }

    if points.len() != params.n() {
        return Err(Error::InvalidCurve(format!(
            "found {} points, expected {}",
            points.len(),
            params.n()
        )));
    }

    Ok(PointPartition {
        params,
        field,
        alpha,
        points,
        departments,
        gamma1,
        gamma2,
    })
}
