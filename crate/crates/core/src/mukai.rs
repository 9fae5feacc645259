//! Quadric discriminants: the genus-6 K3 septic `Sigma = |I_S(2)| + Y` and the
//! description of `Y_A` on the chart `[e0 + w]` as `det(q_A - q_w) = 0`.

use serde::Serialize;

use crate::det::det_linear_matrix;
use crate::epw::{sextic_equation, SexticEquation};
use crate::error::{Error, Result};
use crate::exterior::position;
use crate::lagrangian::{graph_lagrangian, Decomposition, LagrangianSubspace};
use crate::matrix::ExactMatrix;
use crate::poly::{var_names, MultiPoly};
use crate::rng::{derive_seed, SplitMix64};
use crate::scalar::{Field, FieldScalar};
use crate::symplectic::{complement, complement_sign, HALF};

/// Dimension of `W`.
pub const W_DIM: usize = 5;

/// A quadric `x^T gram x` on `P^n`, `n + 1 = gram.rows()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricForm {
    pub gram: ExactMatrix,
}

impl QuadricForm {
    pub fn new(gram: ExactMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::Invariant("quadric gram matrix must be symmetric".into()));
        }
        Ok(QuadricForm { gram })
    }

    pub fn ambient_dim(&self) -> usize {
        self.gram.rows() - 1
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }

    pub fn corank(&self) -> usize {
        self.gram.rows() - self.rank()
    }

    pub fn value(&self, x: &[FieldScalar]) -> FieldScalar {
        crate::matrix::dot(x, &self.gram.mul_vec(x), self.gram.field())
    }

    /// `L^T gram L`: the restriction to the subspace spanned by the columns of `l`.
    pub fn restrict(&self, l: &ExactMatrix) -> Result<QuadricForm> {
        QuadricForm::new(l.transpose().mul(&self.gram)?.mul(l)?)
    }
}

/// A linear system of quadrics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricSystem {
    pub basis: Vec<QuadricForm>,
    pub labels: Vec<String>,
}

impl QuadricSystem {
    /// Dimension of the linear span of the gram matrices.
    pub fn span_dim(&self) -> usize {
        span_dim(&self.basis)
    }
}

fn span_dim(qs: &[QuadricForm]) -> usize {
    let Some(first) = qs.first() else {
        return 0;
    };
    let rows = qs.iter().map(|q| q.gram.entries().to_vec()).collect();
    ExactMatrix::from_rows(first.gram.field(), rows).unwrap().rank()
}

/// Parity of the permutation sorting `idx` (0 on repeats).
fn perm_sign(idx: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] == idx[j] {
                return 0;
            }
            if idx[i] > idx[j] {
                s = -s;
            }
        }
    }
    s
}

/// 2-subsets of `{0..4}` in lex order.
pub fn pairs() -> Vec<[usize; 2]> {
    (0..W_DIM).flat_map(|i| (i + 1..W_DIM).map(move |j| [i, j])).collect()
}

/// `q_w(alpha) = vol_W(w ^ alpha ^ alpha)` on `wedge^2 W`.
pub fn plucker_quadric_qw(w: &[FieldScalar]) -> Result<QuadricForm> {
    if w.len() != W_DIM {
        return Err(Error::Shape(format!("w must have {W_DIM} coordinates")));
    }
    let field = w[0].field();
    let ps = pairs();
    let mut g = ExactMatrix::zeros(field, ps.len(), ps.len());
    for (a, pa) in ps.iter().enumerate() {
        for (b, pb) in ps.iter().enumerate() {
            let mut acc = field.zero();
            for (m, wm) in w.iter().enumerate() {
                if wm.is_zero() {
                    continue;
                }
                let s = perm_sign(&[m, pa[0], pa[1], pb[0], pb[1]]);
                if s > 0 {
                    acc += wm;
                } else if s < 0 {
                    acc -= wm;
                }
            }
            g.set(a, b, acc);
        }
    }
    QuadricForm::new(g)
}

/// The five Plucker quadrics `q_{e_m}` of `Gr(2, 5)` in `P^9`.
pub fn plucker_quadrics(field: Field) -> Vec<QuadricForm> {
    (0..W_DIM)
        .map(|m| {
            let mut e = vec![field.zero(); W_DIM];
            e[m] = field.one();
            plucker_quadric_qw(&e).unwrap()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct MukaiData {
    /// Columns span the 7-dimensional subspace cutting `Gr(2,5)` down to a Fano threefold.
    pub subspace: ExactMatrix,
    /// Restricted Plucker quadrics on `P^6`.
    pub plucker: Vec<QuadricForm>,
    pub qbar: QuadricForm,
    /// `<plucker, qbar>`, the quadrics through the K3 surface.
    pub system: QuadricSystem,
}

/// Seeded Fano threefold `Gr(2,5) cap P^6` and quadric `Qbar`.
pub fn build_mukai_data(seed: u64, field: Field) -> Result<MukaiData> {
    let mut rng = SplitMix64::new(seed);
    let rows: Vec<Vec<FieldScalar>> = (0..HALF).map(|_| rng.vector(field, 7)).collect();
    let subspace = ExactMatrix::from_rows(field, rows)?;
    if subspace.rank() != 7 {
        return Err(Error::Geometry(format!("seed {seed}: subspace is not 7-dimensional; reseed")));
    }
    let plucker = plucker_quadrics(field)
        .iter()
        .map(|q| q.restrict(&subspace))
        .collect::<Result<Vec<_>>>()?;
    let mut g = ExactMatrix::zeros(field, 7, 7);
    for a in 0..7 {
        for b in a..7 {
            let x = rng.scalar(field);
            g.set(a, b, x.clone());
            g.set(b, a, x);
        }
    }
    let qbar = QuadricForm::new(g)?;
    if span_dim(&plucker) != 5 {
        return Err(Error::Geometry(format!("seed {seed}: restricted Plucker quadrics span less than 5 dimensions; reseed")));
    }
    let mut basis = plucker.clone();
    basis.push(qbar.clone());
    let system = QuadricSystem {
        labels: (0..W_DIM).map(|m| format!("q_e{m}")).chain(["qbar".to_string()]).collect(),
        basis,
    };
    if system.span_dim() != 6 {
        return Err(Error::Geometry(format!("seed {seed}: Qbar lies in the Plucker span; reseed")));
    }
    Ok(MukaiData {
        subspace,
        plucker,
        qbar,
        system,
    })
}

/// Symmetric matrix of linear forms `sum_i x_i * gram_i`.
fn pencil_matrix(grams: &[&ExactMatrix], vars: &[String]) -> Vec<Vec<MultiPoly>> {
    let field = grams[0].field();
    let n = grams[0].rows();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let coeffs: Vec<FieldScalar> = grams.iter().map(|g| g.get(r, c).clone()).collect();
                    MultiPoly::affine(field, vars, field.zero(), &coeffs)
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct DiscriminantSeptic {
    /// `det(sum lambda_i q_i)` in `l0..l5`.
    pub septic: MultiPoly,
    /// `septic / l5`.
    pub sextic: MultiPoly,
}

/// The discriminant of the system `<q_0..q_4, Qbar>` on `P^6`, which contains the
/// hyperplane `l5 = 0` of Plucker combinations exactly once.
pub fn discriminant_septic(system: &QuadricSystem) -> Result<DiscriminantSeptic> {
    if system.basis.len() != 6 {
        return Err(Error::Argument("expected 5 Plucker quadrics and Qbar".into()));
    }
    let vars = var_names("l", 6);
    let grams: Vec<&ExactMatrix> = system.basis.iter().map(|q| &q.gram).collect();
    let septic = det_linear_matrix(&pencil_matrix(&grams, &vars))?;
    if septic.degree() != 7 || !septic.is_homogeneous() {
        return Err(Error::Geometry(format!("discriminant has degree {}", septic.degree())));
    }
    let field = septic.field();
    if !septic.specialize(5, &field.zero()).is_zero() {
        return Err(Error::Geometry("a Plucker combination is nonsingular".into()));
    }
    let l5 = MultiPoly::var(field, &vars, 5);
    let sextic = septic
        .exact_div(&l5)
        .map_err(|e| Error::Geometry(format!("septic / l5: {e}")))?;
    if sextic.degree() != 6 {
        return Err(Error::Geometry(format!("quotient has degree {}", sextic.degree())));
    }
    if sextic.specialize(5, &field.zero()).is_zero() {
        return Err(Error::Geometry("l5 divides the septic twice; reseed".into()));
    }
    Ok(DiscriminantSeptic { septic, sextic })
}

/// `q_A` on `wedge^2 W`, `W = <e1..e5>`: `A` is the graph of a map
/// `e0 ^ wedge^2 W -> wedge^3 W` and `q_A(a, c) = sigma(e0 ^ alpha_c, graph(e0 ^ alpha_a))`.
pub fn qa_from_lagrangian(a: &LagrangianSubspace) -> Result<QuadricForm> {
    let basis = a.basis();
    let is_graph = (0..HALF).all(|r| {
        let lead = basis.row(r).iter().position(|x| !x.is_zero());
        lead == Some(r)
    });
    if !is_graph {
        return Err(Error::Precondition("A meets wedge^3 W: no chart with v0 = e0, W = <e1..e5>".into()));
    }
    let field = a.field();
    let mut q = ExactMatrix::zeros(field, HALF, HALF);
    for r in 0..HALF {
        for c in 0..HALF {
            let x = basis.get(r, complement(c));
            q.set(r, c, if complement_sign(c) > 0 { x.clone() } else { -x });
        }
    }
    QuadricForm::new(q).map_err(|_| Error::Invariant("q_A is not symmetric although A is Lagrangian".into()))
}

/// Variables `mu, x1..x5` of the quadric chart.
pub fn quadric_vars() -> Vec<String> {
    let mut v = vec!["mu".to_string()];
    v.extend((1..=W_DIM).map(|i| format!("x{i}")));
    v
}

#[derive(Clone, Debug)]
pub struct QuadricSextic {
    /// `D(mu, w) = det(mu q_A - q_w)`.
    pub discriminant: MultiPoly,
    /// `s = D / mu^4`.
    pub s: MultiPoly,
    /// `s(1, w)` in `x1..x5`.
    pub affine: MultiPoly,
    /// `s(1, w)` is proportional to the chart-0 sextic.
    pub proportional: bool,
}

/// `det(mu q_A - q_w) / mu^4`, compared with the sextic of `A` on the chart `x0 = 1`.
pub fn sextic_via_quadrics(a: &LagrangianSubspace, sextic: Option<&SexticEquation>) -> Result<QuadricSextic> {
    let qa = qa_from_lagrangian(a)?;
    let field = a.field();
    let vars = quadric_vars();
    let qw: Vec<ExactMatrix> = plucker_quadrics(field).into_iter().map(|q| q.gram).collect();
    let minus: Vec<ExactMatrix> = qw.iter().map(|g| g.scale(&field.from_i64(-1))).collect();
    let mut grams: Vec<&ExactMatrix> = vec![&qa.gram];
    grams.extend(minus.iter());
    let d = det_linear_matrix(&pencil_matrix(&grams, &vars))?;
    if d.is_zero() {
        return Err(Error::DegenerateA);
    }
    let mu4 = MultiPoly::var(field, &vars, 0).pow(4);
    let s = d
        .exact_div(&mu4)
        .map_err(|e| Error::CrossCheck(format!("det(mu q_A - q_w) / mu^4: {e}")))?;
    if s.specialize(0, &field.zero()).is_zero() {
        return Err(Error::CrossCheck("mu divides det(mu q_A - q_w) more than 4 times".into()));
    }
    if s.degree() != 6 {
        return Err(Error::CrossCheck(format!("quotient has degree {}", s.degree())));
    }
    let affine = s.specialize(0, &field.one());
    let owned;
    let sextic = match sextic {
        Some(x) => x,
        None => {
            owned = sextic_equation(a)?;
            &owned
        }
    };
    let proportional = affine.is_proportional(&sextic.dehomogenized(0));
    Ok(QuadricSextic {
        discriminant: d,
        s,
        affine,
        proportional,
    })
}

/// Graph Lagrangian with `q_A = P^T diag(d1..d7, 0, 0, 0) P` of rank 7.
pub fn sample_rank7_lagrangian(seed: u64, field: Field) -> Result<LagrangianSubspace> {
    for attempt in 0..64u64 {
        let mut rng = SplitMix64::new(derive_seed(seed, attempt));
        let rows: Vec<Vec<FieldScalar>> = (0..HALF).map(|_| rng.vector(field, HALF)).collect();
        let p = ExactMatrix::from_rows(field, rows)?;
        if p.rank() != HALF {
            continue;
        }
        let mut d = ExactMatrix::zeros(field, HALF, HALF);
        for i in 0..7 {
            d.set(i, i, rng.nonzero_scalar(field));
        }
        let q = p.transpose().mul(&d)?.mul(&p)?;
        return Ok(graph_lagrangian(&q, Decomposition::Standard)?
            .with_provenance(crate::lagrangian::Provenance::new(Some(seed), "rank7-graph")));
    }
    Err(Error::SearchFailure { attempts: 64 })
}

/// Multiplicity at `w = 0` (the point `[q_A]`) of `s(1, w)`.
pub fn multiplicity_at_qa(a: &LagrangianSubspace) -> Result<usize> {
    let qa = qa_from_lagrangian(a)?;
    if qa.rank() != 7 {
        return Err(Error::Precondition(format!("q_A has rank {}, expected 7", qa.rank())));
    }
    let s = sextic_via_quadrics(a, None)?;
    if s.affine.is_zero() {
        return Err(Error::DegenerateA);
    }
    Ok(s.affine.low_degree() as usize)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub wedge3_c6: u64,
    pub sym3_c3: u64,
    pub sym2_c4: u64,
    pub wedge2_c5: u64,
    /// `C(6,3) = dim Sym^3(C^3) + dim Sym^3(C^3)-dual`.
    pub sym3_split: bool,
    /// `C(6,3) = dim Sym^2(C^4) + dim Sym^2(C^4)-dual`.
    pub sym2_split: bool,
    pub holds: bool,
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn dimension_checks_66() -> DimensionReport {
    let wedge3_c6 = binomial(6, 3);
    let sym3_c3 = binomial(3 + 3 - 1, 3);
    let sym2_c4 = binomial(4 + 2 - 1, 2);
    let wedge2_c5 = binomial(5, 2);
    let sym3_split = wedge3_c6 == 2 * sym3_c3;
    let sym2_split = wedge3_c6 == 2 * sym2_c4;
    DimensionReport {
        wedge3_c6,
        sym3_c3,
        sym2_c4,
        wedge2_c5,
        sym3_split,
        sym2_split,
        holds: sym3_split && sym2_split && wedge3_c6 == 2 * wedge2_c5,
    }
}

/// Position in `wedge^3 V` of `e0 ^ e_{i+1} ^ e_{j+1}` for the pair `{i, j}` of `W`.
pub fn pair_position(p: [usize; 2]) -> usize {
    position(1 | (1 << (p[0] + 1)) | (1 << (p[1] + 1)))
}
