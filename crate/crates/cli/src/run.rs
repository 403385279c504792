//! Dispatch from scenarios to the analysis modules.

use std::sync::Arc;

use num_bigint::BigInt;
use polarize_core::dynamics::{
    abelian_invariant_check, deg_from_integer_matrix, interior_eigenvector, is_power_bounded, product_formula_check,
    AbelianVerdict, ConeRef, DegreeLedger, Invariance, WitnessSearch,
};
use polarize_core::exactalg::{char_poly, roots_with_multiplicity, QMatrix};
use polarize_core::nslattice::{
    example_ex1_matrix, example_ex1_report, ns_example_report, quotient_image_selfintersection, ramification_budget,
    DivisorClassVector, NsReport, NsVerdict, QuotientImage,
};
use polarize_core::singularities::{diagonal_action_report, ex_xu_verdict, AgeReport, WindowTag};
use polarize_core::{
    build_cone, decide_polarization, psd_cone_oracle, AlgebraicNumber, ConeError, ConeMap, Decision, DynamicsError,
    NsError, Rat, SingError,
};
use thiserror::Error;

use crate::report::{Fields, Report, Val};
use crate::scenario::{to_matrix, to_vec, ConeSpec, Payload, QuotientSpec, RamificationSpec, Scenario, SchemaError};

/// Size of the seeded battery of cone points whose images are re-checked.
pub const SEED_BATTERY: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Schema(_) => 2,
            RunError::Internal(_) => 3,
        }
    }
}

impl From<SchemaError> for RunError {
    fn from(e: SchemaError) -> Self {
        RunError::Schema(e.to_string())
    }
}

fn cone_error(e: ConeError) -> RunError {
    match e {
        ConeError::RoundTripFailed | ConeError::NonConvergence { .. } => RunError::Internal(e.to_string()),
        other => RunError::Schema(other.to_string()),
    }
}

fn dynamics_error(e: DynamicsError) -> RunError {
    match e {
        DynamicsError::SingularMatrix
        | DynamicsError::DimensionMismatch { .. }
        | DynamicsError::InvalidInput(_)
        | DynamicsError::ShapeMismatch(_)
        | DynamicsError::RankDeficient
        | DynamicsError::NoIntegerRoot { .. } => RunError::Schema(e.to_string()),
        DynamicsError::Cone(c) => cone_error(c),
        other => RunError::Internal(other.to_string()),
    }
}

fn ns_error(e: NsError) -> RunError {
    match e {
        NsError::SingularEndomorphism
        | NsError::NotIntegral2x2
        | NsError::NotSymmetric
        | NsError::AmbientMismatch(_)
        | NsError::InvalidInput(_) => RunError::Schema(e.to_string()),
        other => RunError::Internal(other.to_string()),
    }
}

fn sing_error(e: SingError) -> RunError {
    RunError::Schema(e.to_string())
}

pub fn run_scenario(sc: &Scenario, seed: u64) -> Result<Report, RunError> {
    let (verdict, body) = match &sc.payload {
        Payload::ConeDynamics { map, cone, q_hint } => {
            cone_dynamics(&to_matrix(map)?, cone, q_hint.as_ref().map(|q| &q.0), seed)?
        }
        Payload::NsExample { endomorphism, quotient_image, ramification } => ns_example(
            endomorphism.as_ref().map(to_matrix).transpose()?,
            quotient_image.as_ref(),
            ramification.as_ref(),
        )?,
        Payload::AgeCheck { order, abelian_weights, projective_m, scale_r } => {
            age_check(*order, abelian_weights, projective_m.is_some(), *scale_r)?
        }
        Payload::DegreeCheck { dim_x, deg_f, q, product, subvariety_dims, integer_matrix } => degree_check(
            *dim_x,
            deg_f.map(BigInt::from),
            q.map(BigInt::from),
            product.as_ref().map(|p| (p.dim_y, BigInt::from(p.deg_g))),
            subvariety_dims,
            integer_matrix.as_ref().map(to_matrix).transpose()?,
        )?,
    };
    Ok(Report::new(&sc.name, sc.payload.kind(), seed, verdict, body))
}

fn eigen_entry(a: &AlgebraicNumber, mult: usize) -> Val {
    let mut f = Fields::new();
    match a.as_rational() {
        Some(r) => {
            f.push("value", Val::exact(r));
        }
        None => {
            let (re, im) = a.approx();
            f.push("minpoly", Val::text(a.minpoly().to_string()));
            f.push("re", Val::approx(re));
            f.push("im", Val::approx(im));
        }
    }
    f.push("multiplicity", Val::int(mult));
    Val::Map(f)
}

fn spectrum(m: &QMatrix) -> Result<Val, RunError> {
    let cp = char_poly(m).map_err(|e| RunError::Internal(e.to_string()))?;
    let roots = roots_with_multiplicity(&cp).map_err(|e| RunError::Internal(e.to_string()))?;
    Ok(Val::List(roots.iter().map(|(a, k)| eigen_entry(a, *k)).collect()))
}

fn cone_dynamics(m: &QMatrix, spec: &ConeSpec, q_hint: Option<&Rat>, seed: u64) -> Result<(String, Fields), RunError> {
    let cone = match spec {
        ConeSpec::Polyhedral { generators } => {
            let gens: Vec<Vec<Rat>> = generators.iter().map(|g| to_vec(g)).collect();
            ConeRef::Polyhedral(build_cone(&gens).map_err(cone_error)?)
        }
        ConeSpec::Psd { n } => ConeRef::Oracle(Arc::new(psd_cone_oracle(*n))),
    };
    let mut body = Fields::new();
    body.push("map", Val::matrix(&m.to_rows()));
    body.push("cone", Val::text(cone.as_oracle().describe()));
    let cp = char_poly(m).map_err(|e| RunError::Internal(e.to_string()))?;
    body.push("char_poly", Val::text(cp.to_string()));
    body.push("eigenvalues", spectrum(m)?);

    let cm = match ConeMap::new(m.clone(), cone).map_err(dynamics_error)?.verified() {
        Ok(cm) => cm,
        Err(_) => {
            body.push("invariance", Val::text("fails: the map or its inverse moves a cone point outside"));
            return Ok(("NotInvariant".into(), body));
        }
    };
    body.push("invariance", Val::text(cm.invariance().to_string()));

    let oracle = cm.cone().as_oracle();
    let battery = oracle.battery(SEED_BATTERY, seed);
    let inside = battery.iter().all(|x| oracle.contains(&m.mul_vec(x)) && oracle.contains(&cm.inverse().mul_vec(x)));
    if !inside {
        return Err(RunError::Internal("invariant map sends a battery point outside the cone".into()));
    }
    body.push(
        "seeded_battery",
        Val::Map(Fields::new().with("points", Val::int(battery.len())).with("images_inside", Val::Bool(inside))),
    );

    if let Some(q) = q_hint {
        let mut h = Fields::new();
        h.push("q", Val::exact(q));
        let bounded = is_power_bounded(m, q).map_err(dynamics_error)?;
        h.push("power_bounded", Val::Bool(bounded));
        if bounded {
            let found = match interior_eigenvector(&cm, q).map_err(dynamics_error)? {
                WitnessSearch::Found(w) => Val::vector(&w),
                WitnessSearch::NotFound { conclusive, attempts } => Val::Map(
                    Fields::new().with("conclusive", Val::Bool(conclusive)).with("attempts", Val::int(attempts)),
                ),
            };
            h.push("interior_eigenvector", found);
        }
        body.push("q_hint", Val::Map(h));
    }

    let verdict = match decide_polarization(&cm) {
        Ok(Decision::Polarized(cert)) => {
            cert.reverify(&cm).map_err(RunError::Internal)?;
            let mut c = Fields::new();
            c.push("q", Val::exact(&cert.q));
            c.push("q_is_integer", Val::Bool(cert.q_is_integer));
            c.push("witness", Val::vector(&cert.witness));
            c.push("projector", Val::matrix(&cert.projector.to_rows()));
            c.push("eigenvalue_moduli_all_q", Val::Bool(cert.eigenvalue_moduli_all_q));
            c.push("semisimple", Val::Bool(cert.semisimple));
            if let Some(r) = &cert.restriction {
                c.push(
                    "span_restriction",
                    Val::Map(
                        Fields::new()
                            .with("basis", Val::matrix(&r.basis))
                            .with("restricted_map", Val::matrix(&r.restricted_map.to_rows()))
                            .with("transverse_char_poly", Val::text(r.transverse_char_poly.to_string())),
                    ),
                );
            }
            body.push("certificate", Val::Map(c));
            "Polarized"
        }
        Ok(Decision::NotPolarized { reason }) => {
            body.push("reason", Val::text(reason));
            "NotPolarized"
        }
        Ok(Decision::Inconclusive { q, reason }) => {
            body.push("candidate_q", Val::exact(&q));
            body.push("reason", Val::text(reason));
            "Inconclusive"
        }
        Err(DynamicsError::IrrationalCandidateOnly { minpoly, approx }) => {
            body.push(
                "irrational_candidate",
                Val::Map(Fields::new().with("minpoly", Val::text(minpoly)).with("value", Val::approx(approx))),
            );
            "IrrationalCandidateOnly"
        }
        Err(e) => return Err(dynamics_error(e)),
    };
    if cm.invariance() != Invariance::Exact {
        body.push("note", Val::text("invariance was spot-checked; the verdict is conditional on it"));
    }
    Ok((verdict.into(), body))
}

fn ns_report_fields(r: &NsReport) -> (String, Fields) {
    let mut f = Fields::new();
    f.push("endomorphism", Val::matrix(&r.a.to_rows()));
    f.push("ns_matrix", Val::matrix(&r.ns_matrix.to_rows()));
    f.push("rho", Val::int(r.rho));
    f.push("char_poly", Val::text(r.char_poly.to_string()));
    f.push("eigenvalues", Val::List(r.eigenvalues.iter().map(|(a, k)| eigen_entry(a, *k)).collect()));
    f.push("real_eigenvalues", Val::int(r.real_eigenvalues));
    match &r.spectral_radius {
        Some(x) => f.push("spectral_radius", Val::exact(x)),
        None => f.push("spectral_radius", Val::approx(r.spectral_radius_squared.approx().sqrt())),
    };
    f.push("invariance", Val::text(r.invariance.to_string()));
    f.push("deg_f", Val::int(&r.deg_f));
    if let Some(q) = &r.q_from_degree {
        f.push("q_from_degree", Val::int(q));
    }
    let verdict = match &r.verdict {
        NsVerdict::Polarized { q, witness, witness_ample } => {
            f.push("q", Val::exact(q));
            f.push("witness", Val::matrix(&witness.to_matrix().to_rows()));
            f.push("witness_ample", Val::Bool(*witness_ample));
            "Polarized"
        }
        NsVerdict::NotPolarizedForQGreaterThanOne { q } => {
            f.push("q", Val::exact(q));
            "NotPolarizedForQGreaterThanOne"
        }
        NsVerdict::NotPolarized { reason } => {
            f.push("reason", Val::text(reason.clone()));
            "NotPolarized"
        }
        NsVerdict::Inconclusive { reason } => {
            f.push("reason", Val::text(reason.clone()));
            "Inconclusive"
        }
    };
    (verdict.into(), f)
}

fn ns_example(
    a: Option<QMatrix>,
    quotient: Option<&QuotientSpec>,
    ram: Option<&RamificationSpec>,
) -> Result<(String, Fields), RunError> {
    let mut body = Fields::new();
    let mut verdicts = Vec::new();
    if let Some(a) = a {
        let r = if a == example_ex1_matrix() { example_ex1_report() } else { ns_example_report(&a) };
        let (v, f) = ns_report_fields(&r.map_err(ns_error)?);
        body.push("pullback", Val::Map(f));
        verdicts.push(v);
    }
    if let Some(q) = quotient {
        let mut f = Fields::new();
        f.push("e0_sq", Val::int(q.e0_sq));
        f.push("pull_coeff_positive", Val::Bool(q.pull_coeff_positive));
        let v = match quotient_image_selfintersection(&BigInt::from(q.e0_sq), q.pull_coeff_positive) {
            QuotientImage::Derived { image_sq_sign, image_sq, ample_possible } => {
                f.push("image_sq_sign", Val::int(image_sq_sign as i8));
                if let Some(x) = image_sq {
                    f.push("image_sq", Val::int(x));
                }
                f.push("ample_possible", Val::Bool(ample_possible));
                if ample_possible {
                    "ImageMayBeAmple"
                } else {
                    "ImageNotAmple"
                }
            }
            QuotientImage::Unknown => "ImageUnknown",
        };
        body.push("quotient_image", Val::Map(f));
        verdicts.push(v.into());
    }
    if let Some(r) = ram {
        let k = DivisorClassVector(to_vec(&r.k));
        let d = DivisorClassVector(to_vec(&r.d));
        let b = ramification_budget(&BigInt::from(r.q), &k, &d, r.s, r.dim_x, r.rho).map_err(ns_error)?;
        let f = Fields::new()
            .with("q", Val::int(&b.q))
            .with("delta_class", Val::vector(&b.delta_class.0))
            .with("ramification_class", Val::vector(&b.ramification_class.0))
            .with("budget", Val::text(format!("{:?}", b.verdict)))
            .with("s", Val::int(b.s))
            .with("bound", Val::int(b.dim_x + b.rho))
            .with("bound_ok", Val::Bool(b.bound_ok));
        body.push("ramification", Val::Map(f));
        verdicts.push(format!("{:?}", b.bound));
    }
    Ok((verdicts.join("; "), body))
}

fn age_fields(r: &AgeReport) -> Fields {
    let entries = r
        .entries
        .iter()
        .map(|e| {
            Val::Map(
                Fields::new()
                    .with("power", Val::int(e.power))
                    .with("component", Val::text(e.component.clone()))
                    .with("residues", Val::List(e.residues.iter().map(Val::int).collect()))
                    .with("age", Val::exact(&e.age))
                    .with("pseudo_reflection", Val::Bool(e.pseudo_reflection)),
            )
        })
        .collect();
    let mut f = Fields::new();
    f.push("order", Val::int(r.order));
    if let Some(a) = &r.min_age_nontrivial {
        f.push("min_age_nontrivial", Val::exact(a));
    }
    f.push("pseudo_reflection_found", Val::Bool(r.pseudo_reflection_found));
    f.push("entries", Val::List(entries));
    f
}

fn age_check(order: u64, weights: &[u64], projective: bool, r: Option<u64>) -> Result<(String, Fields), RunError> {
    if !projective {
        let rep = diagonal_action_report(order, weights).map_err(sing_error)?;
        return Ok((rep.verdict.to_string(), age_fields(&rep)));
    }
    let r = r.ok_or_else(|| RunError::Schema("scale_r is required with projective_m".into()))?;
    let x = ex_xu_verdict(order, weights.len() as u64, r, weights).map_err(sing_error)?;
    let mut f = age_fields(&x.ages);
    let window = match x.window {
        WindowTag::CanonicalWindow => "canonical window (m = 4 or 6)",
        WindowTag::OutsideCanonicalWindow => "outside the canonical window",
    };
    f.push("window", Val::text(window));
    f.push("q", Val::int(&x.q));
    f.push("dim_x", Val::int(x.dim_x));
    f.push("deg_f", Val::int(&x.deg_f));
    f.push("reported_not_verified", Val::List(x.reported_not_verified.iter().map(|s| Val::text(s.clone())).collect()));
    Ok((x.ages.verdict.to_string(), f))
}

fn degree_check(
    dim_x: u32,
    deg_f: Option<BigInt>,
    q: Option<BigInt>,
    product: Option<(u32, BigInt)>,
    subs: &[u32],
    integer_matrix: Option<QMatrix>,
) -> Result<(String, Fields), RunError> {
    let mut body = Fields::new();
    body.push("dim_x", Val::int(dim_x));
    let deg_f = match (deg_f, integer_matrix) {
        (Some(d), Some(a)) => {
            let from_a = deg_from_integer_matrix(&a).map_err(dynamics_error)?;
            body.push("deg_from_matrix", Val::int(&from_a));
            if from_a != d {
                body.push("reason", Val::text("deg_f disagrees with det(a)^2"));
                return Ok(("Inconsistent".into(), body));
            }
            Some(d)
        }
        (None, Some(a)) => {
            let from_a = deg_from_integer_matrix(&a).map_err(dynamics_error)?;
            body.push("deg_from_matrix", Val::int(&from_a));
            Some(from_a)
        }
        (d, None) => d,
    };
    let ledger = match (deg_f, q) {
        (Some(d), q) => match DegreeLedger::from_degree(d.clone(), dim_x) {
            Ok(l) => {
                if q.as_ref().is_some_and(|q| *q != l.q) {
                    body.push("deg_f", Val::int(&d));
                    body.push("reason", Val::text("q^dim_x differs from deg_f"));
                    return Ok(("Inconsistent".into(), body));
                }
                l
            }
            Err(DynamicsError::NoIntegerRoot { .. }) => {
                body.push("deg_f", Val::int(&d));
                body.push("reason", Val::text("deg_f is not a dim_x-th power"));
                return Ok(("Inconsistent".into(), body));
            }
            Err(e) => return Err(dynamics_error(e)),
        },
        (None, Some(q)) => DegreeLedger::from_q(q, dim_x),
        (None, None) => return Err(RunError::Schema("degree_check needs deg_f, q or integer_matrix".into())),
    };
    if !ledger.is_consistent() {
        return Err(RunError::Internal("degree ledger is inconsistent".into()));
    }
    body.push("deg_f", Val::int(&ledger.deg_f));
    body.push("q", Val::int(&ledger.q));
    let mut verdict = "Consistent";
    if let Some((dim_y, deg_g)) = product {
        let ok = product_formula_check(dim_x, &ledger.deg_f, dim_y, &deg_g);
        body.push(
            "descent",
            Val::Map(
                Fields::new()
                    .with("dim_y", Val::int(dim_y))
                    .with("deg_g", Val::int(&deg_g))
                    .with("holds", Val::Bool(ok)),
            ),
        );
        if !ok {
            verdict = "Inconsistent";
        }
    }
    if !subs.is_empty() {
        let mut rows = Vec::new();
        for &dz in subs {
            let v = abelian_invariant_check(&ledger.q, dim_x, dz).map_err(dynamics_error)?;
            rows.push(Val::Map(
                Fields::new()
                    .with("dim_z", Val::int(dz))
                    .with("restricted_degree", Val::int(polarize_core::dynamics::restricted_degree(&ledger.q, dz)))
                    .with("verdict", Val::text(format!("{v:?}"))),
            ));
            if v == AbelianVerdict::Contradiction && verdict == "Consistent" {
                verdict = "NoInvariantSubvariety";
            }
        }
        body.push("subvarieties", Val::List(rows));
    }
    Ok((verdict.into(), body))
}
