//! Pointwise geometry of `Y_A`: tangent hyperplanes at corank-1 points, the
//! dual point in `Y_{A-perp}`, and the quadratic cone at corank-2 points.

use serde::Serialize;

use crate::epw::psi::{first_nonzero, two_form_of, wedge_formula};
use crate::epw::sextic::{chart_vars, corank_at, intersection, SexticEquation};
use crate::error::{Error, Result};
use crate::exterior::{contract_coords, unit, DIM};
use crate::lagrangian::{perp, LagrangianSubspace};
use crate::matrix::ExactMatrix;
use crate::poly::{MultiPoly, PolyJson};
use crate::scalar::FieldScalar;

/// Gradient of the sextic at `v`.
pub fn gradient_at(sextic: &SexticEquation, v: &[FieldScalar]) -> Result<Vec<FieldScalar>> {
    sextic.f.gradient().iter().map(|g| g.eval(v)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentSpace {
    /// Row basis (echelon form) of `E0 = <v0> + J0`.
    pub e0: ExactMatrix,
    /// Two-form `alpha0` with `ker psi(l0) = <v0 ^ alpha0>`.
    pub alpha0: Vec<FieldScalar>,
    pub j0_dim: usize,
    pub gradient: Vec<FieldScalar>,
    /// The gradient hyperplane equals `E0`.
    pub gradient_matches: bool,
}

/// `E0 = <v0> + J0` at a corank-1 point, compared with the sextic's gradient.
pub fn tangent_space(a: &LagrangianSubspace, v0: &[FieldScalar], sextic: &SexticEquation) -> Result<TangentSpace> {
    let i = first_nonzero(v0)?;
    let field = a.field();
    let kernel = intersection(a, v0)?;
    if kernel.len() != 1 {
        return Err(Error::Precondition(format!(
            "tangent space needs corank 1, found corank {}",
            kernel.len()
        )));
    }
    let alpha0 = two_form_of(&kernel[0], v0, i);
    let j0: Vec<Vec<FieldScalar>> = (0..DIM).map(|k| contract_coords(field, &unit(field, k), 2, &alpha0)).collect();
    let j0_dim = ExactMatrix::from_rows(field, j0.clone())?.rank();
    let mut rows = vec![v0.to_vec()];
    rows.extend(j0);
    let e0 = ExactMatrix::from_rows(field, rows)?.row_space();
    let gradient = gradient_at(sextic, v0)?;
    if gradient.iter().all(FieldScalar::is_zero) {
        return Err(Error::Geometry(
            "sextic gradient vanishes at a corank-1 point: A contains a decomposable element".into(),
        ));
    }
    let gradient_matches = e0.rows() == DIM - 1
        && (0..e0.rows()).all(|r| crate::matrix::dot(e0.row(r), &gradient, field).is_zero());
    Ok(TangentSpace {
        e0,
        alpha0,
        j0_dim,
        gradient,
        gradient_matches,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityCheck {
    pub point: Vec<String>,
    pub phi0: Vec<String>,
    pub tangent_matches: bool,
    pub corank_in_perp: usize,
    /// Value of the sextic of `A-perp` at `phi0` is zero (when supplied).
    pub perp_sextic_vanishes: Option<bool>,
    pub holds: bool,
}

/// `phi0` spanning `E0-perp` lies on `Y_{A-perp}`.
pub fn dual_point_check(
    a: &LagrangianSubspace,
    v0: &[FieldScalar],
    sextic: &SexticEquation,
    perp_sextic: Option<&SexticEquation>,
) -> Result<DualityCheck> {
    let t = tangent_space(a, v0, sextic)?;
    let ker = t.e0.kernel();
    if ker.len() != 1 {
        return Err(Error::Geometry(format!("E0 has dimension {}", DIM - ker.len())));
    }
    let phi0 = ker.into_iter().next().unwrap();
    let ap = perp(a)?;
    let corank_in_perp = corank_at(&ap, &phi0)?;
    let perp_sextic_vanishes = perp_sextic.map(|s| s.eval(&phi0).map(|x| x.is_zero())).transpose()?;
    let holds = t.gradient_matches && corank_in_perp >= 1 && perp_sextic_vanishes.unwrap_or(true);
    Ok(DualityCheck {
        point: v0.iter().map(ToString::to_string).collect(),
        phi0: phi0.iter().map(ToString::to_string).collect(),
        tangent_matches: t.gradient_matches,
        corank_in_perp,
        perp_sextic_vanishes,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalModel {
    pub point: Vec<FieldScalar>,
    /// `(x, y, z)`: `tau -> -vol(v0 ^ tau ^ alpha_a ^ alpha_b)` for `(1,1), (1,2), (2,2)`.
    pub linear_forms: [MultiPoly; 3],
    pub independent: bool,
    pub gradient_zero: bool,
    pub hessian_rank: usize,
    pub quadratic_part: MultiPoly,
    pub quadric_match: bool,
}

impl LocalModel {
    pub fn passes(&self) -> bool {
        self.independent && self.gradient_zero && self.hessian_rank == 3 && self.quadric_match
    }

    pub fn to_json(&self) -> LocalModelJson {
        LocalModelJson {
            point: self.point.iter().map(ToString::to_string).collect(),
            linear_forms: self.linear_forms.iter().map(MultiPoly::to_json).collect(),
            independent: self.independent,
            gradient_zero: self.gradient_zero,
            hessian_rank: self.hessian_rank,
            quadric_match: self.quadric_match,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalModelJson {
    pub point: Vec<String>,
    pub linear_forms: Vec<PolyJson>,
    pub independent: bool,
    pub gradient_zero: bool,
    pub hessian_rank: usize,
    pub quadric_match: bool,
}

/// Gram matrix of a quadratic form (off-diagonal entries halved).
fn quadratic_gram(q: &MultiPoly) -> Result<ExactMatrix> {
    let field = q.field();
    let n = q.nvars();
    let half = field.from_i64(2).inv().ok_or_else(|| Error::Precondition("characteristic 2".into()))?;
    let mut g = ExactMatrix::zeros(field, n, n);
    for (e, c) in q.terms() {
        let idx: Vec<usize> = (0..n).filter(|&j| e[j] > 0).collect();
        match idx.as_slice() {
            [j] => g.set(*j, *j, c.clone()),
            [j, k] => {
                let h = c * &half;
                g.set(*j, *k, h.clone());
                g.set(*k, *j, h);
            }
            _ => return Err(Error::Degree("quadratic part has a non-quadratic term".into())),
        }
    }
    Ok(g)
}

/// Order-2 Taylor data of the sextic at a corank-2 point, in the chart
/// coordinates `tau_j`, `j != i`, of `v0 + tau`.
pub fn local_model(a: &LagrangianSubspace, v0: &[FieldScalar], sextic: &SexticEquation) -> Result<LocalModel> {
    let i = first_nonzero(v0)?;
    let field = a.field();
    let kernel = intersection(a, v0)?;
    if kernel.len() != 2 {
        return Err(Error::Precondition(format!(
            "local model needs corank 2, found corank {}",
            kernel.len()
        )));
    }
    let vars = chart_vars(i);
    let alphas: Vec<Vec<FieldScalar>> = kernel.iter().map(|k| two_form_of(k, v0, i)).collect();
    let form = |x: &[FieldScalar], y: &[FieldScalar]| {
        let coeffs: Vec<FieldScalar> = (0..DIM)
            .filter(|&j| j != i)
            .map(|j| wedge_formula(v0, &unit(field, j), x, y))
            .collect();
        MultiPoly::affine(field, &vars, field.zero(), &coeffs)
    };
    let x = form(&alphas[0], &alphas[0]);
    let y = form(&alphas[0], &alphas[1]);
    let z = form(&alphas[1], &alphas[1]);
    let coeff_rows = [&x, &y, &z]
        .iter()
        .map(|p| {
            (0..vars.len())
                .map(|j| {
                    let mut e = vec![0; vars.len()];
                    e[j] = 1;
                    p.coeff(&e)
                })
                .collect()
        })
        .collect();
    let independent = ExactMatrix::from_rows(field, coeff_rows)?.rank() == 3;

    let images: Vec<MultiPoly> = (0..DIM)
        .map(|m| {
            if m == i {
                MultiPoly::constant(field, &vars, v0[m].clone())
            } else {
                let j = if m < i { m } else { m - 1 };
                &MultiPoly::constant(field, &vars, v0[m].clone()) + &MultiPoly::var(field, &vars, j)
            }
        })
        .collect();
    let g = sextic.f.compose(&images)?;
    let gradient_zero = g.homogeneous_component(0).is_zero() && g.homogeneous_component(1).is_zero();
    let quadratic_part = g.homogeneous_component(2);
    let hessian_rank = quadratic_gram(&quadratic_part)?.rank();
    let model = &(&x * &z) - &(&y * &y);
    let quadric_match = !quadratic_part.is_zero() && quadratic_part.is_proportional(&model);
    Ok(LocalModel {
        point: v0.to_vec(),
        linear_forms: [x, y, z],
        independent,
        gradient_zero,
        hessian_rank,
        quadratic_part,
        quadric_match,
    })
}
