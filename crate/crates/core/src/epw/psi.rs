//! The symmetric form `psi(l)` on `A` whose kernel is `A cap F_l`, and the
//! exact first-order variation of `psi` along a line of points.

use crate::error::{Error, Result};
use crate::exterior::{contract_coords, unit, wedge_coords, DIM};
use crate::lagrangian::{transversal, LagrangianSubspace};
use crate::matrix::ExactMatrix;
use crate::scalar::{Field, FieldScalar};
use crate::symplectic::{fiber_frame, pairing, HALF, RANK};

/// `psi(l)` in the basis of `A`, with its kernel in `A`-coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiValue {
    pub point: Vec<FieldScalar>,
    pub matrix: ExactMatrix,
    pub kernel: Vec<Vec<FieldScalar>>,
}

pub(crate) fn first_nonzero(v: &[FieldScalar]) -> Result<usize> {
    if v.len() != DIM {
        return Err(Error::Shape(format!("vector of length {} in a 6-dimensional space", v.len())));
    }
    v.iter().position(|x| !x.is_zero()).ok_or(Error::ZeroVector)
}

/// Columns `frame(v) | C` as a 20x20 matrix.
fn frame_and_complement(v: &[FieldScalar], skip: usize, c: &LagrangianSubspace) -> Result<ExactMatrix> {
    let mut cols = fiber_frame(v, skip);
    cols.extend(c.basis().row_vecs());
    Ok(ExactMatrix::from_rows(c.field(), cols)?.transpose())
}

/// `-(C-part)` of each column of `sol`, as rows of 20 coordinates.
fn minus_c_part(sol: &ExactMatrix, c: &LagrangianSubspace) -> Result<ExactMatrix> {
    let z = sol.select_rows(&(HALF..RANK).collect::<Vec<_>>()).transpose();
    z.mul(c.basis()).map(|m| m.scale(&c.field().from_i64(-1)))
}

fn check_inputs(a: &LagrangianSubspace, c: &LagrangianSubspace, v: &[FieldScalar]) -> Result<usize> {
    if a.field() != c.field() || a.field() != v[0].field() {
        return Err(Error::FieldMismatch("psi inputs".into()));
    }
    if !transversal(a.basis(), c.basis()) {
        return Err(Error::Chart("transversal Lagrangian meets A".into()));
    }
    first_nonzero(v)
}

/// Writes `F_l` as the graph of `psi~ : A -> C` and returns
/// `psi(a, b) = sigma(psi~ a, b)`. Symmetry is asserted.
pub fn psi_at(a: &LagrangianSubspace, c: &LagrangianSubspace, v: &[FieldScalar]) -> Result<PsiValue> {
    let i = check_inputs(a, c, v)?;
    let n = frame_and_complement(v, i, c)?;
    let ninv = n
        .inverse()
        .ok_or_else(|| Error::Chart("transversal Lagrangian meets F_l".into()))?;
    let sol = ninv.mul(&a.basis().transpose())?;
    let images = minus_c_part(&sol, c)?;
    let matrix = pairing(&images, a.basis());
    if !matrix.is_symmetric() {
        return Err(Error::Invariant("psi is not symmetric".into()));
    }
    let kernel = matrix.kernel();
    Ok(PsiValue {
        point: v.to_vec(),
        matrix,
        kernel,
    })
}

/// Outcome of comparing `d psi(tau)` on `ker psi(l0)` with the wedge formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpsiComparison {
    pub kernel_dim: usize,
    /// `d psi(tau)(kappa_a, kappa_b)` from the exact expansion in `t`.
    pub derivative: ExactMatrix,
    /// `-vol(v0 ^ tau ^ alpha_a ^ alpha_b)`.
    pub formula: ExactMatrix,
}

impl DpsiComparison {
    pub fn holds(&self) -> bool {
        self.derivative == self.formula
    }
}

/// `alpha` with `kappa = v ^ alpha` and `alpha` free of `e_i`.
pub(crate) fn two_form_of(kappa: &[FieldScalar], v: &[FieldScalar], i: usize) -> Vec<FieldScalar> {
    let field = v[0].field();
    let inv = v[i].inv().unwrap();
    contract_coords(field, &unit(field, i), 3, kappa)
        .into_iter()
        .map(|x| &x * &inv)
        .collect()
}

/// `-vol(v ^ tau ^ alpha ^ beta)`.
pub(crate) fn wedge_formula(v: &[FieldScalar], tau: &[FieldScalar], alpha: &[FieldScalar], beta: &[FieldScalar]) -> FieldScalar {
    let field = v[0].field();
    let vt = wedge_coords(field, 1, v, 1, tau);
    let ab = wedge_coords(field, 2, alpha, 2, beta);
    -&wedge_coords(field, 2, &vt, 4, &ab)[0]
}

/// Differentiates `psi` along `t -> [v0 + t tau]` at `t = 0` exactly: with
/// `N(t) = N0 + t N1` the frame-plus-`C` matrix, the solution derivative is
/// `-N0^-1 N1 N0^-1 a`.
pub fn dpsi_compare(
    a: &LagrangianSubspace,
    c: &LagrangianSubspace,
    v0: &[FieldScalar],
    tau: &[FieldScalar],
) -> Result<DpsiComparison> {
    let i = check_inputs(a, c, v0)?;
    if tau.len() != DIM {
        return Err(Error::Shape("tangent direction must have 6 coordinates".into()));
    }
    if !tau[i].is_zero() {
        return Err(Error::Argument(format!(
            "tangent direction must lie in span(e_j : j != {i})"
        )));
    }
    let field = a.field();
    let psi = psi_at(a, c, v0)?;
    if psi.kernel.is_empty() {
        return Err(Error::Precondition("psi(l0) is invertible: l0 is not on Y_A".into()));
    }
    let n0 = frame_and_complement(v0, i, c)?;
    let mut n1_cols = fiber_frame(tau, i);
    // fiber_frame of tau with skip i uses tau ^ e_j ^ e_k, the t-coefficient of the frame
    n1_cols.extend(std::iter::repeat_n(vec![field.zero(); RANK], HALF));
    let n1 = ExactMatrix::from_rows(field, n1_cols)?.transpose();
    let ninv = n0.inverse().ok_or_else(|| Error::Chart("transversal Lagrangian meets F_l".into()))?;
    let sol0 = ninv.mul(&a.basis().transpose())?;
    let dsol = ninv.mul(&n1)?.mul(&sol0)?.scale(&field.from_i64(-1));
    let dimages = minus_c_part(&dsol, c)?;
    let dpsi = pairing(&dimages, a.basis());

    let k = ExactMatrix::from_rows(field, psi.kernel.clone())?;
    let derivative = k.mul(&dpsi)?.mul(&k.transpose())?;
    let kappas = k.mul(a.basis())?;
    let alphas: Vec<Vec<FieldScalar>> = (0..kappas.rows()).map(|r| two_form_of(kappas.row(r), v0, i)).collect();
    let formula_rows = alphas
        .iter()
        .map(|x| alphas.iter().map(|y| wedge_formula(v0, tau, x, y)).collect())
        .collect();
    let formula = ExactMatrix::from_rows(field, formula_rows)?;
    Ok(DpsiComparison {
        kernel_dim: k.rows(),
        derivative,
        formula,
    })
}

/// True when the exact derivative of `psi` on its kernel equals
/// `-vol(v0 ^ tau ^ alpha ^ beta)`.
pub fn dpsi_check(a: &LagrangianSubspace, c: &LagrangianSubspace, v0: &[FieldScalar], tau: &[FieldScalar]) -> Result<bool> {
    Ok(dpsi_compare(a, c, v0, tau)?.holds())
}

/// A tangent direction in `span(e_j : j != i)` drawn from `rng`, `i` the first
/// nonzero index of `v0`.
pub fn tangent_direction(rng: &mut crate::rng::SplitMix64, v0: &[FieldScalar]) -> Result<Vec<FieldScalar>> {
    let i = first_nonzero(v0)?;
    let field: Field = v0[0].field();
    let mut tau = rng.vector(field, DIM);
    tau[i] = field.zero();
    Ok(tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epw::sextic::corank_at;
    use crate::lagrangian::{chart, sample_lagrangian};
    use crate::rng::SplitMix64;

    #[test]
    fn psi_kernel_matches_corank() {
        let f = Field::prime(101).unwrap();
        let a = sample_lagrangian(2, f);
        let mut rng = SplitMix64::new(4);
        for _ in 0..5 {
            let v = rng.nonzero_vector(f, 6);
            let ch = chart(&a, &v, 1).unwrap();
            let psi = psi_at(&a, &ch.ldual, &v).unwrap();
            assert!(psi.matrix.is_symmetric());
            assert_eq!(psi.kernel.len(), corank_at(&a, &v).unwrap());
        }
    }

    #[test]
    fn derivative_formula_on_coordinate_point() {
        // the zero graph meets F_{e_1} in dimension 4
        let q = Field::Rational;
        let a = LagrangianSubspace::coordinate(q);
        let v = unit(q, 1);
        let ch = chart(&a, &v, 3).unwrap();
        let mut rng = SplitMix64::new(1);
        let tau = tangent_direction(&mut rng, &v).unwrap();
        let cmp = dpsi_compare(&a, &ch.ldual, &v, &tau).unwrap();
        assert_eq!(cmp.kernel_dim, 4);
        assert!(cmp.holds());
        let zero = vec![q.zero(); 6];
        let z = dpsi_compare(&a, &ch.ldual, &v, &zero).unwrap();
        assert!(z.derivative.is_zero() && z.formula.is_zero());
    }
}
