//! Chart matrices of `lambda_A`, the sextic equation by two determinant routes,
//! minors ideals of the corank strata and exhaustive strata scans.

use serde::Serialize;

use crate::det::{det_linear_matrix, subsets_of_size};
use crate::error::{Error, Result};
use crate::exterior::{position, wedge_sign, DIM};
use crate::lagrangian::{corank_scan, LagrangianSubspace};
use crate::matrix::ExactMatrix;
use crate::poly::{var_names, MultiPoly, PolyJson};
use crate::scalar::{Field, FieldScalar};
use crate::symplectic::{fiber_f, HALF, RANK};

/// `dim(A cap F_[v])`.
pub fn corank_at(a: &LagrangianSubspace, v: &[FieldScalar]) -> Result<usize> {
    let f = fiber_f(v)?;
    if f.field() != a.field() {
        return Err(Error::FieldMismatch("corank_at".into()));
    }
    Ok(RANK - a.basis().stack(&f)?.rank())
}

/// Basis of `A cap F_[v]` as 20-coordinate vectors.
pub fn intersection(a: &LagrangianSubspace, v: &[FieldScalar]) -> Result<Vec<Vec<FieldScalar>>> {
    let f = fiber_f(v)?;
    if f.field() != a.field() {
        return Err(Error::FieldMismatch("intersection".into()));
    }
    // columns: A rows then F rows; kernel vectors (y, z) give sum y_r a_r = -sum z_b f_b
    let m = a.basis().stack(&f)?.transpose();
    let field = a.field();
    Ok(m.kernel()
        .into_iter()
        .map(|k| {
            let mut out = vec![field.zero(); RANK];
            for (r, y) in k[..HALF].iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                for (o, x) in out.iter_mut().zip(a.basis().row(r)) {
                    *o += &(y * x);
                }
            }
            out
        })
        .collect())
}

/// Pivot columns of an echelon basis.
pub(crate) fn pivots(basis: &ExactMatrix) -> Vec<usize> {
    (0..basis.rows())
        .map(|r| basis.row(r).iter().position(|x| !x.is_zero()).unwrap())
        .collect()
}

/// Names of the chart variables `x_j`, `j != i`.
pub fn chart_vars(i: usize) -> Vec<String> {
    var_names("x", DIM).into_iter().enumerate().filter(|(j, _)| *j != i).map(|(_, s)| s).collect()
}

/// `lambda_A` on the chart `x_i = 1`: columns are `v(x) ^ e_j ^ e_k` projected
/// to `wedge^3 V / A`, with `v(x) = e_i + sum_{j != i} x_j e_j`.
#[derive(Clone, Debug)]
pub struct ChartMatrix {
    pub chart_index: usize,
    pub vars: Vec<String>,
    pub entries: Vec<Vec<MultiPoly>>,
    /// Column labels `(j, k)`.
    pub frame: Vec<(usize, usize)>,
    /// Row labels: standard positions spanning a complement of `A`.
    pub complement: Vec<usize>,
}

impl ChartMatrix {
    /// Value at the chart point `x` (5 coordinates).
    pub fn evaluate(&self, x: &[FieldScalar]) -> Result<ExactMatrix> {
        crate::det::evaluate_matrix(&self.entries, x)
    }

    /// Value at `[v]`, which must have `v_i != 0`.
    pub fn evaluate_at(&self, v: &[FieldScalar]) -> Result<ExactMatrix> {
        let vi = v[self.chart_index]
            .inv()
            .ok_or_else(|| Error::Chart(format!("point outside chart {}", self.chart_index)))?;
        let x: Vec<FieldScalar> = (0..DIM).filter(|&j| j != self.chart_index).map(|j| &v[j] * &vi).collect();
        self.evaluate(&x)
    }
}

/// Linear map `wedge^3 V -> field^10`, `w -> w_N - sum_r w_{P_r} A[r][N]`.
fn quotient_projection(a: &LagrangianSubspace) -> (Vec<usize>, Vec<Vec<FieldScalar>>) {
    let basis = a.basis();
    let field = a.field();
    let piv = pivots(basis);
    let comp: Vec<usize> = (0..RANK).filter(|c| !piv.contains(c)).collect();
    // proj[pos] = image of e_pos
    let proj = (0..RANK)
        .map(|pos| {
            if let Some(r) = piv.iter().position(|&p| p == pos) {
                comp.iter().map(|&n| -basis.get(r, n)).collect()
            } else {
                comp.iter().map(|&n| if n == pos { field.one() } else { field.zero() }).collect()
            }
        })
        .collect();
    (comp, proj)
}

pub fn chart_matrix(a: &LagrangianSubspace, i: usize) -> Result<ChartMatrix> {
    if i >= DIM {
        return Err(Error::Argument(format!("chart index {i} out of range")));
    }
    let field = a.field();
    let vars = chart_vars(i);
    let (comp, proj) = quotient_projection(a);
    let frame: Vec<(usize, usize)> = (0..DIM)
        .flat_map(|j| (j + 1..DIM).map(move |k| (j, k)))
        .filter(|&(j, k)| j != i && k != i)
        .collect();
    let var_of = |m: usize| if m < i { m } else { m - 1 };
    let mut entries: Vec<Vec<MultiPoly>> = (0..HALF).map(|_| Vec::with_capacity(HALF)).collect();
    for &(j, k) in &frame {
        // column = sum_m v_m * sign * proj(e_{m,j,k})
        let mut c0 = vec![field.zero(); HALF];
        let mut lin = vec![vec![field.zero(); DIM - 1]; HALF];
        for m in (0..DIM).filter(|&m| m != j && m != k) {
            let s = wedge_sign(1 << m, (1 << j) | (1 << k)).unwrap();
            let pos = position((1u8 << m) | (1 << j) | (1 << k));
            for n in 0..HALF {
                let mut x = proj[pos][n].clone();
                if x.is_zero() {
                    continue;
                }
                if s < 0 {
                    x = -x;
                }
                if m == i {
                    c0[n] += &x;
                } else {
                    lin[n][var_of(m)] += &x;
                }
            }
        }
        for n in 0..HALF {
            entries[n].push(MultiPoly::affine(field, &vars, c0[n].clone(), &lin[n]));
        }
    }
    Ok(ChartMatrix {
        chart_index: i,
        vars,
        entries,
        frame,
        complement: comp,
    })
}

/// The sextic `f` with `Y_A = V(f)`, homogeneous in `x0..x5` and normalized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SexticEquation {
    pub f: MultiPoly,
    /// Chart whose determinant produced `f`.
    pub chart: usize,
    /// Chart used for the proportionality re-check.
    pub second_chart: usize,
}

impl SexticEquation {
    /// `f` restricted to `x_i = 1`, in the chart variables.
    pub fn dehomogenized(&self, i: usize) -> MultiPoly {
        self.f.specialize(i, &self.f.field().one())
    }

    pub fn eval(&self, v: &[FieldScalar]) -> Result<FieldScalar> {
        self.f.eval(v)
    }

    pub fn to_json(&self) -> PolyJson {
        self.f.to_json()
    }
}

fn chart_determinant(a: &LagrangianSubspace, i: usize) -> Result<MultiPoly> {
    let d = det_linear_matrix(&chart_matrix(a, i)?.entries)?;
    assert!(
        d.degree() <= 6,
        "chart determinant of degree {} > 6: frame or projection is inconsistent",
        d.degree()
    );
    Ok(d)
}

fn homogenized(d: &MultiPoly, i: usize) -> Result<MultiPoly> {
    Ok(d.homogenize(6, i, &format!("x{i}"))?.normalized())
}

/// The sextic from the lowest chart with a nonzero determinant, re-checked in
/// the next nonzero chart.
pub fn sextic_equation(a: &LagrangianSubspace) -> Result<SexticEquation> {
    let mut found: Option<(usize, MultiPoly)> = None;
    for i in 0..DIM {
        let d = chart_determinant(a, i)?;
        if d.is_zero() {
            continue;
        }
        let h = homogenized(&d, i)?;
        match &found {
            None => found = Some((i, h)),
            Some((first, f)) => {
                if !f.is_proportional(&h) {
                    return Err(Error::CrossCheck(format!(
                        "charts {first} and {i} give non-proportional sextics"
                    )));
                }
                return Ok(SexticEquation {
                    f: f.clone(),
                    chart: *first,
                    second_chart: i,
                });
            }
        }
    }
    match found {
        None => Err(Error::DegenerateA),
        Some(_) => Err(Error::Invariant("nonzero determinant in a single chart only".into())),
    }
}

/// Independent route: the 20x20 determinant `[A rows | v ^ e_j ^ e_k]` with
/// homogeneous `v` must equal `c * x_i^4 * f`.
pub fn sextic_cross_check_20x20(a: &LagrangianSubspace, i: usize, sextic: &SexticEquation) -> Result<bool> {
    if i >= DIM {
        return Err(Error::Argument(format!("chart index {i} out of range")));
    }
    let field = a.field();
    let vars = var_names("x", DIM);
    let mut m: Vec<Vec<MultiPoly>> = (0..RANK).map(|_| Vec::with_capacity(RANK)).collect();
    for r in 0..HALF {
        for (pos, row) in m.iter_mut().enumerate() {
            row.push(MultiPoly::constant(field, &vars, a.basis().get(r, pos).clone()));
        }
    }
    for j in 0..DIM {
        for k in j + 1..DIM {
            if j == i || k == i {
                continue;
            }
            let mut lin = vec![vec![field.zero(); DIM]; RANK];
            for mm in (0..DIM).filter(|&mm| mm != j && mm != k) {
                let s = wedge_sign(1 << mm, (1 << j) | (1 << k)).unwrap();
                let pos = position((1u8 << mm) | (1 << j) | (1 << k));
                lin[pos][mm] = field.from_i64(s);
            }
            for (pos, row) in m.iter_mut().enumerate() {
                row.push(MultiPoly::affine(field, &vars, field.zero(), &lin[pos]));
            }
        }
    }
    let d = det_linear_matrix(&m)?;
    if d.is_zero() {
        return Ok(false);
    }
    let xi4 = MultiPoly::var(field, &vars, i).pow(4);
    let q = d.exact_div(&xi4).map_err(|e| Error::CrossCheck(format!("20x20 determinant / x{i}^4: {e}")))?;
    Ok(q.is_proportional(&sextic.f))
}

/// All `(11-j) x (11-j)` minors of the chart matrix: generators of the stratum
/// `dim(A cap F) >= j` on the chart.
pub fn minors_ideal(a: &LagrangianSubspace, i: usize, j: usize) -> Result<Vec<MultiPoly>> {
    if !(1..=3).contains(&j) {
        return Err(Error::Argument(format!("stratum index {j} must be 1, 2 or 3")));
    }
    let cm = chart_matrix(a, i)?;
    let size = 11 - j;
    let subsets = subsets_of_size(HALF, size);
    let idx = |mask: u32| (0..HALF).filter(|b| mask >> b & 1 == 1).collect::<Vec<_>>();
    let mut out = Vec::with_capacity(subsets.len() * subsets.len());
    for &rs in &subsets {
        let rows = idx(rs);
        for &cs in &subsets {
            let cols = idx(cs);
            let sub: Vec<Vec<MultiPoly>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| cm.entries[r][c].clone()).collect())
                .collect();
            out.push(det_linear_matrix(&sub)?);
        }
    }
    Ok(out)
}

/// A point of `P^5(F_p)` with its corank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumPoint {
    pub corank: usize,
    pub point: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrataScan {
    pub prime: u64,
    pub total: u64,
    /// `histogram[c]` = number of points of corank `c`, `c = 0..=10`.
    pub histogram: Vec<u64>,
    /// Points of corank at least 2, lex ordered.
    pub points: Vec<StratumPoint>,
}

impl StrataScan {
    pub fn count(&self, corank: usize) -> u64 {
        self.histogram.get(corank).copied().unwrap_or(0)
    }

    pub fn points_of_corank(&self, c: usize) -> impl Iterator<Item = &StratumPoint> {
        self.points.iter().filter(move |p| p.corank == c)
    }
}

/// Corank of every point of `P^5(F_p)` for `A` over `F_p`.
pub fn strata_scan(a: &LagrangianSubspace) -> Result<StrataScan> {
    let Field::Prime(p) = a.field() else {
        return Err(Error::Argument("strata scans need a prime field".into()));
    };
    let (histogram, special) = corank_scan(a, p)?;
    Ok(StrataScan {
        prime: p,
        total: histogram.iter().sum(),
        histogram,
        points: special
            .into_iter()
            .map(|(corank, point)| StratumPoint { corank, point })
            .collect(),
    })
}

/// Lifts a point of `P^5(F_p)` to field scalars.
pub fn point_scalars(field: Field, point: &[u64]) -> Vec<FieldScalar> {
    point.iter().map(|&x| field.from_i64(x as i64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::unit;
    use crate::lagrangian::sample_lagrangian;
    use crate::rng::SplitMix64;

    fn f101() -> Field {
        Field::prime(101).unwrap()
    }

    #[test]
    fn corank_on_coordinate_lagrangian() {
        let q = Field::Rational;
        let a = LagrangianSubspace::coordinate(q);
        assert_eq!(corank_at(&a, &unit(q, 0)).unwrap(), 10);
        assert_eq!(corank_at(&a, &unit(q, 1)).unwrap(), 4);
        assert_eq!(intersection(&a, &unit(q, 1)).unwrap().len(), 4);
        let cm = chart_matrix(&a, 0).unwrap();
        assert!(cm.evaluate(&vec![q.zero(); 5]).unwrap().is_zero());
        assert_eq!(sextic_equation(&a), Err(Error::DegenerateA));
    }

    #[test]
    fn chart_matrix_matches_pointwise_projection() {
        let f = f101();
        let a = sample_lagrangian(3, f);
        let mut rng = SplitMix64::new(8);
        for i in [0, 2, 5] {
            let cm = chart_matrix(&a, i).unwrap();
            for _ in 0..5 {
                let mut v = rng.vector(f, 6);
                v[i] = f.one();
                let m = cm.evaluate_at(&v).unwrap();
                assert_eq!(HALF - m.rank(), corank_at(&a, &v).unwrap());
            }
        }
    }

    #[test]
    fn generic_sextic_has_degree_six() {
        let f = f101();
        let a = sample_lagrangian(1, f);
        let s = sextic_equation(&a).unwrap();
        assert_eq!(s.f.degree(), 6);
        assert!(s.f.is_homogeneous());
        assert_eq!(s.chart, 0);
        let mut rng = SplitMix64::new(2);
        for _ in 0..20 {
            let v = rng.nonzero_vector(f, 6);
            let c = corank_at(&a, &v).unwrap();
            assert_eq!(c >= 1, s.eval(&v).unwrap().is_zero());
        }
    }

    #[test]
    fn minors_ideal_first_stratum_is_the_sextic() {
        let f = f101();
        let a = sample_lagrangian(5, f);
        let s = sextic_equation(&a).unwrap();
        let g = minors_ideal(&a, 0, 1).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g[0].normalized().is_proportional(&s.dehomogenized(0)));
        assert_eq!(minors_ideal(&a, 0, 2).unwrap().len(), 100);
        assert!(minors_ideal(&a, 0, 4).is_err());
    }
}
