//! Sampling points of `Y_A` and the combined verification report.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::epw::geometry::{dual_point_check, local_model, DualityCheck, LocalModelJson};
use crate::epw::sextic::{corank_at, point_scalars, sextic_cross_check_20x20, sextic_equation, strata_scan};
use crate::error::{Error, Result};
use crate::exterior::DIM;
use crate::lagrangian::{perp, LagrangianSubspace};
use crate::poly::PolyJson;
use crate::rng::SplitMix64;
use crate::scalar::{Field, FieldScalar};
use crate::epw::SexticEquation;

/// Scales `v` so its first nonzero coordinate is 1.
pub fn normalize_point(v: &[FieldScalar]) -> Vec<FieldScalar> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let inv = lead.inv().unwrap();
            v.iter().map(|x| x * &inv).collect()
        }
        None => v.to_vec(),
    }
}

/// Distinct `F_p`-points of `V(f)` found on seeded random lines by testing
/// every point of each line. Needs a prime field.
pub fn points_on_sextic(sextic: &SexticEquation, seed: u64, count: usize, max_lines: usize) -> Result<Vec<Vec<FieldScalar>>> {
    let field = sextic.f.field();
    let Field::Prime(p) = field else {
        return Err(Error::Argument("point sampling needs a prime field".into()));
    };
    let mut rng = SplitMix64::new(seed);
    let mut out: Vec<Vec<FieldScalar>> = Vec::new();
    for _ in 0..max_lines {
        let u = rng.nonzero_vector(field, DIM);
        let w = rng.nonzero_vector(field, DIM);
        let mut candidates = vec![w.clone()];
        for t in 0..p {
            let t = field.from_i64(t as i64);
            candidates.push(u.iter().zip(&w).map(|(a, b)| a + &(&t * b)).collect());
        }
        for v in candidates {
            if v.iter().all(FieldScalar::is_zero) || !sextic.eval(&v)?.is_zero() {
                continue;
            }
            let v = normalize_point(&v);
            if !out.contains(&v) {
                out.push(v);
                if out.len() == count {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Run the 20x20 determinant route.
    pub cross_check: bool,
    /// Largest prime for which the full `P^5(F_p)` scan is run.
    pub max_scan_prime: u64,
    pub max_local_models: usize,
    pub duality_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            cross_check: true,
            max_scan_prime: 13,
            max_local_models: 64,
            duality_samples: 8,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub sextic: PolyJson,
    pub chart: usize,
    pub second_chart: usize,
    pub cross_check: Option<bool>,
    pub histogram: Option<BTreeMap<String, u64>>,
    pub local_models: Vec<LocalModelJson>,
    pub duality_samples: Vec<DualityCheck>,
    pub passed: bool,
}

/// Sextic by both routes, the strata histogram (small primes only), local
/// models at corank-2 points and duality at sampled corank-1 points.
pub fn verify(a: &LagrangianSubspace, opts: &VerifyOptions) -> Result<VerificationReport> {
    let sextic = sextic_equation(a)?;
    let cross_check = if opts.cross_check {
        Some(sextic_cross_check_20x20(a, sextic.chart, &sextic)?)
    } else {
        None
    };
    let field = a.field();
    let mut histogram = None;
    let mut local_models = Vec::new();
    let mut duality_samples = Vec::new();
    if let Field::Prime(p) = field {
        if p <= opts.max_scan_prime {
            let scan = strata_scan(a)?;
            histogram = Some(
                scan.histogram
                    .iter()
                    .enumerate()
                    .filter(|(c, n)| *c <= 3 || **n > 0)
                    .map(|(c, n)| (c.to_string(), *n))
                    .collect(),
            );
            for pt in scan.points_of_corank(2).take(opts.max_local_models) {
                let v = point_scalars(field, &pt.point);
                local_models.push(local_model(a, &v, &sextic)?.to_json());
            }
        }
        let perp_sextic = sextic_equation(&perp(a)?).ok();
        let candidates = points_on_sextic(&sextic, opts.seed, 4 * opts.duality_samples, 64)?;
        for v in candidates {
            if duality_samples.len() == opts.duality_samples {
                break;
            }
            if corank_at(a, &v)? == 1 {
                duality_samples.push(dual_point_check(a, &v, &sextic, perp_sextic.as_ref())?);
            }
        }
    }
    let passed = cross_check.unwrap_or(true)
        && local_models
            .iter()
            .all(|m| m.independent && m.gradient_zero && m.hessian_rank == 3 && m.quadric_match)
        && duality_samples.iter().all(|d| d.holds);
    Ok(VerificationReport {
        sextic: sextic.to_json(),
        chart: sextic.chart,
        second_chart: sextic.second_chart,
        cross_check,
        histogram,
        local_models,
        duality_samples,
        passed,
    })
}
