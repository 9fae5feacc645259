//! Lagrangian subspaces of `wedge^3 V`: graphs of symmetric maps, annihilators,
//! transversal search, chart trivializations and finite-field certificates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::{for_each_point_in_cell, grassmannian_cells, projective_points};
use crate::error::{Error, Result};
use crate::exterior::{position, subset_mask, Space};
use crate::matrix::ExactMatrix;
use crate::modp;
use crate::rng::{derive_seed, SplitMix64};
use crate::scalar::{Field, FieldScalar};
use crate::symplectic::{complement, complement_sign, fiber_f, pairing, sigma_coords, HALF, RANK};

/// Where a Lagrangian came from; carried through JSON for reproducibility.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route: Option<String>,
}

impl Provenance {
    pub fn new(seed: Option<u64>, route: &str) -> Self {
        Provenance {
            seed,
            route: Some(route.to_string()),
        }
    }
}

/// A 10-dimensional isotropic subspace, stored by its reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangianSubspace {
    basis: ExactMatrix,
    space: Space,
    provenance: Option<Provenance>,
}

/// Base of a graph construction: the graph is taken over `span{e_I : 0 in I}`
/// (`Standard`) or over `span{e_I : 0 not in I}` (`Swapped`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Standard,
    Swapped,
}

impl Decomposition {
    /// Basis positions the graph is built over, in lex order.
    pub fn base_positions(self) -> Vec<usize> {
        (0..RANK)
            .filter(|&i| (subset_mask(3, i) & 1 == 1) == (self == Decomposition::Standard))
            .collect()
    }
}

pub fn is_lagrangian(basis: &ExactMatrix) -> Result<bool> {
    if basis.rows() != HALF || basis.cols() != RANK {
        return Err(Error::Shape(format!(
            "expected a 10x20 basis, got {}x{}",
            basis.rows(),
            basis.cols()
        )));
    }
    if basis.rank() != HALF {
        return Ok(false);
    }
    for i in 0..HALF {
        for j in i + 1..HALF {
            if !sigma_coords(basis.row(i), basis.row(j)).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True when the two 10-dimensional row spaces meet only in 0.
pub fn transversal(a: &ExactMatrix, b: &ExactMatrix) -> bool {
    a.stack(b).map(|m| m.rank() == a.rows() + b.rows()).unwrap_or(false)
}

impl LagrangianSubspace {
    /// Validates isotropy and canonicalizes to reduced row echelon form.
    pub fn new(basis: ExactMatrix, space: Space) -> Result<Self> {
        if !is_lagrangian(&basis)? {
            return Err(Error::Invariant("basis does not span a Lagrangian subspace".into()));
        }
        Ok(LagrangianSubspace {
            basis: basis.row_space(),
            space,
            provenance: None,
        })
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = Some(p);
        self
    }

    /// `span{e_I : 0 in I}`, which is `F_{e_0}`.
    pub fn coordinate(field: Field) -> Self {
        let zero = ExactMatrix::zeros(field, HALF, HALF);
        graph_lagrangian(&zero, Decomposition::Standard)
            .unwrap()
            .with_provenance(Provenance::new(None, "zero-graph"))
    }

    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Membership of a 20-coordinate vector.
    pub fn contains(&self, v: &[FieldScalar]) -> bool {
        let m = ExactMatrix::from_rows(self.field(), vec![v.to_vec()]).unwrap();
        self.basis.stack(&m).unwrap().rank() == HALF
    }

    /// Reduction of an integral rational Lagrangian modulo `p >= 5`.
    pub fn reduce_mod(&self, p: u64) -> Result<Self> {
        let m = self.basis.reduce_mod(p)?;
        if m.rank() < HALF {
            return Err(Error::BadPrime { p });
        }
        let mut out = LagrangianSubspace::new(m, self.space)?;
        out.provenance = self.provenance.clone();
        Ok(out)
    }

    /// Image under `g in GL(V)` acting on `wedge^3 V` by the third wedge power.
    pub fn transform(&self, g: &ExactMatrix) -> Result<Self> {
        let w = wedge3_matrix(g)?;
        let rows = (0..HALF).map(|r| w.mul_vec(self.basis.row(r))).collect();
        let m = ExactMatrix::from_rows(self.field(), rows)?;
        LagrangianSubspace::new(m, self.space)
    }

    pub fn to_json(&self) -> LagrangianJson {
        LagrangianJson {
            field: self.field(),
            space: (self.space == Space::VDual).then_some(self.space),
            basis: (0..HALF)
                .map(|r| self.basis.row(r).iter().map(|x| x.to_string()).collect())
                .collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn from_json(j: &LagrangianJson) -> Result<Self> {
        if j.basis.len() != HALF {
            return Err(Error::parse("basis", format!("expected 10 rows, found {}", j.basis.len())));
        }
        let mut rows = Vec::with_capacity(HALF);
        for (r, row) in j.basis.iter().enumerate() {
            if row.len() != RANK {
                return Err(Error::parse(
                    format!("basis[{r}]"),
                    format!("expected 20 entries, found {}", row.len()),
                ));
            }
            let parsed = row
                .iter()
                .enumerate()
                .map(|(c, s)| {
                    j.field
                        .parse_scalar(s)
                        .map_err(|e| Error::parse(format!("basis[{r}][{c}]"), e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(parsed);
        }
        let m = ExactMatrix::from_rows(j.field, rows)?;
        let lag = LagrangianSubspace::new(m, j.space.unwrap_or(Space::V))
            .map_err(|e| Error::parse("basis", e.to_string()))?;
        Ok(match &j.provenance {
            Some(p) => lag.with_provenance(p.clone()),
            None => lag,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LagrangianJson {
    pub field: Field,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<Space>,
    pub basis: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

/// The 20x20 matrix of `wedge^3 g` in the lex basis (columns are images of `e_I`).
pub fn wedge3_matrix(g: &ExactMatrix) -> Result<ExactMatrix> {
    if g.rows() != 6 || g.cols() != 6 {
        return Err(Error::Shape("expected a 6x6 matrix".into()));
    }
    let field = g.field();
    let mut w = ExactMatrix::zeros(field, RANK, RANK);
    for (c, cols) in (0..RANK).map(|c| (c, crate::exterior::subset(3, c))) {
        let images: Vec<Vec<FieldScalar>> = cols.iter().map(|&j| g.column(j)).collect();
        let img = crate::exterior::wedge_of_vectors(field, &[&images[0], &images[1], &images[2]]);
        for (r, x) in img.into_iter().enumerate() {
            w.set(r, c, x);
        }
    }
    Ok(w)
}

/// Graph of a symmetric 10x10 `q` over the given decomposition: rows
/// `e_{I_a} + sum_b q[a][b] * sign(I_b) * e_{I_b^c}`.
pub fn graph_lagrangian(q: &ExactMatrix, decomposition: Decomposition) -> Result<LagrangianSubspace> {
    if q.rows() != HALF || q.cols() != HALF {
        return Err(Error::Shape("graph map must be 10x10".into()));
    }
    if !q.is_symmetric() {
        return Err(Error::Invariant("graph map must be symmetric".into()));
    }
    let field = q.field();
    let base = decomposition.base_positions();
    let mut m = ExactMatrix::zeros(field, HALF, RANK);
    for (a, &ia) in base.iter().enumerate() {
        m.set(a, ia, field.one());
        for (b, &ib) in base.iter().enumerate() {
            let x = q.get(a, b);
            if !x.is_zero() {
                let v = if complement_sign(ib) > 0 { x.clone() } else { -x };
                m.set(a, complement(ib), v);
            }
        }
    }
    LagrangianSubspace::new(m, Space::V)
}

fn draw_symmetric(rng: &mut SplitMix64, field: Field) -> ExactMatrix {
    let mut q = ExactMatrix::zeros(field, HALF, HALF);
    for a in 0..HALF {
        for b in a..HALF {
            let x = rng.scalar(field);
            q.set(b, a, x.clone());
            q.set(a, b, x);
        }
    }
    q
}

/// Deterministic sample: graph over the standard decomposition of a symmetric
/// matrix whose upper triangle is drawn row by row from splitmix64.
pub fn sample_lagrangian(seed: u64, field: Field) -> LagrangianSubspace {
    let mut rng = SplitMix64::new(seed);
    let q = draw_symmetric(&mut rng, field);
    graph_lagrangian(&q, Decomposition::Standard)
        .unwrap()
        .with_provenance(Provenance::new(Some(seed), "graph"))
}

/// Annihilator of `A` in the dual exterior power, itself Lagrangian for the dual form.
pub fn perp(a: &LagrangianSubspace) -> Result<LagrangianSubspace> {
    if !is_lagrangian(a.basis())? {
        return Err(Error::Invariant("perp needs a Lagrangian input".into()));
    }
    let kernel = a.basis().kernel();
    let m = ExactMatrix::from_rows(a.field(), kernel)?;
    let space = match a.space() {
        Space::V => Space::VDual,
        Space::VDual => Space::V,
    };
    let mut out = LagrangianSubspace::new(m, space)?;
    out.provenance = a.provenance.clone();
    Ok(out)
}

/// Default retry budget of [`find_transversal`].
pub const TRANSVERSAL_BUDGET: usize = 64;

/// A Lagrangian transversal to every obstacle. Attempts 0 and 1 are the two
/// coordinate Lagrangians; later attempts are seeded graphs alternating
/// between the two decompositions.
pub fn find_transversal(obstacles: &[ExactMatrix], seed: u64, budget: usize) -> Result<LagrangianSubspace> {
    let Some(first) = obstacles.first() else {
        return Err(Error::Argument("no obstacles given".into()));
    };
    let field = first.field();
    for o in obstacles {
        if o.field() != field {
            return Err(Error::FieldMismatch("transversal obstacles".into()));
        }
        if o.cols() != RANK || o.rank() != HALF {
            return Err(Error::Shape("obstacles must be 10-dimensional subspaces of wedge^3 V".into()));
        }
    }
    for attempt in 0..budget {
        let decomposition = if attempt % 2 == 0 {
            Decomposition::Standard
        } else {
            Decomposition::Swapped
        };
        let q = if attempt < 2 {
            ExactMatrix::zeros(field, HALF, HALF)
        } else {
            draw_symmetric(&mut SplitMix64::new(derive_seed(seed, attempt as u64)), field)
        };
        let c = graph_lagrangian(&q, decomposition)?;
        if obstacles.iter().all(|o| transversal(c.basis(), o)) {
            return Ok(c.with_provenance(Provenance::new(Some(seed), "transversal")));
        }
    }
    Err(Error::SearchFailure { attempts: budget })
}

/// `wedge^3 V = L + Ldual` with `A` and `F_{l0}` both transversal to `Ldual`.
#[derive(Clone, Debug)]
pub struct ChartTrivialization {
    pub l: LagrangianSubspace,
    pub ldual: LagrangianSubspace,
    /// `sigma(L rows, Ldual rows)`.
    pub pairing: ExactMatrix,
}

pub fn chart(a: &LagrangianSubspace, l0: &[FieldScalar], seed: u64) -> Result<ChartTrivialization> {
    let f = fiber_f(l0)?;
    let ldual = find_transversal(&[a.basis().clone(), f], seed, TRANSVERSAL_BUDGET)?;
    let l = find_transversal(&[ldual.basis().clone()], derive_seed(seed, u64::MAX), TRANSVERSAL_BUDGET)?;
    let pairing = pairing(l.basis(), ldual.basis());
    debug_assert!(pairing.det().map(|d| !d.is_zero()).unwrap_or(false));
    Ok(ChartTrivialization { l, ldual, pairing })
}

/// Primes used by [`lg_certificates`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificatePrimes {
    /// Prime for the exhaustive `Gr(3,6)` scan.
    pub decomposable: u64,
    /// Prime for the exhaustive `P^5` corank scan.
    pub corank: u64,
}

impl Default for CertificatePrimes {
    fn default() -> Self {
        CertificatePrimes {
            decomposable: 3,
            corank: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LgReport {
    pub lagrangian: bool,
    pub no_decomposable_mod_p: bool,
    pub corank_le2_on_fp_points: bool,
    pub primes: CertificatePrimes,
    pub grassmannian_points: u64,
    pub decomposables_found: u64,
    pub projective_points: u64,
    /// Number of `F_p`-points of each corank 0..=10.
    pub corank_histogram: Vec<u64>,
}

impl LgReport {
    /// Both certificates hold: no decomposable element (exact over `Q` via
    /// reduction) and corank at most 2 at every `F_p`-point.
    pub fn certified(&self) -> bool {
        self.lagrangian && self.no_decomposable_mod_p && self.corank_le2_on_fp_points
    }
}

fn reduce_checked(a: &ExactMatrix, p: u64) -> Result<Vec<Vec<u64>>> {
    if let Some(q) = a.field().modulus() {
        if q != p {
            return Err(Error::Argument(format!(
                "an F_{q} Lagrangian can only be certified with p = {q}"
            )));
        }
    }
    let m = modp::reduce_matrix(a, p)?;
    if modp::rank(&m, p) < a.rows() {
        return Err(Error::BadPrime { p });
    }
    Ok(m)
}

/// The 10 functionals cutting out `A mod p`.
pub(crate) fn annihilator_mod(a: &LagrangianSubspace, p: u64) -> Result<Vec<Vec<u64>>> {
    let m = reduce_checked(a.basis(), p)?;
    Ok(modp::kernel(&m, RANK, p))
}

/// `dim(A cap F_v)` modulo `p`, given `A`'s annihilator.
pub(crate) fn corank_mod(annihilator: &[Vec<u64>], v: &[u64], p: u64) -> usize {
    let skip = v.iter().position(|&x| x != 0).unwrap();
    let mut m = vec![vec![0u64; HALF]; annihilator.len()];
    let mut col = 0;
    for j in 0..6 {
        for k in j + 1..6 {
            if j == skip || k == skip {
                continue;
            }
            // coordinates of v ^ e_j ^ e_k
            let mut frame = [0u64; RANK];
            for (m_idx, &vm) in v.iter().enumerate() {
                if vm == 0 || m_idx == j || m_idx == k {
                    continue;
                }
                let mask = (1u8 << m_idx) | (1 << j) | (1 << k);
                let sign = crate::exterior::wedge_sign(1 << m_idx, (1 << j) | (1 << k)).unwrap();
                let pos = position(mask);
                frame[pos] = if sign > 0 { vm } else { (p - vm) % p };
            }
            for (r, phi) in annihilator.iter().enumerate() {
                m[r][col] = modp::dot(phi, &frame, p);
            }
            col += 1;
        }
    }
    HALF - modp::rank(&m, p)
}

/// Corank histogram and the `(corank, point)` pairs of corank at least 2.
pub(crate) type CorankScan = (Vec<u64>, Vec<(usize, Vec<u64>)>);

/// Histogram of `dim(A cap F_v)` over all of `P^5(F_p)`, with the points of
/// corank at least 2 in lex order.
pub(crate) fn corank_scan(a: &LagrangianSubspace, p: u64) -> Result<CorankScan> {
    let ann = annihilator_mod(a, p)?;
    let pts = projective_points(6, p)?;
    let coranks: Vec<usize> = pts.par_iter().map(|v| corank_mod(&ann, v, p)).collect();
    let mut hist = vec![0u64; HALF + 1];
    let mut special = Vec::new();
    for (v, c) in pts.into_iter().zip(coranks) {
        hist[c] += 1;
        if c >= 2 {
            special.push((c, v));
        }
    }
    Ok((hist, special))
}

/// Number of points of `Gr(3,6)(F_p)` whose Plucker vector lies in `A mod p`.
fn decomposable_scan(a: &LagrangianSubspace, p: u64) -> Result<(u64, u64)> {
    let ann = annihilator_mod(a, p)?;
    let cells = grassmannian_cells(3, 6);
    let counts: Vec<(u64, u64)> = cells
        .par_iter()
        .map(|pivots| {
            let (mut total, mut hits) = (0u64, 0u64);
            for_each_point_in_cell(pivots, 6, p, |m| {
                total += 1;
                let pl = plucker_mod(m, p);
                if ann.iter().all(|phi| modp::dot(phi, &pl, p) == 0) {
                    hits += 1;
                }
            });
            (total, hits)
        })
        .collect();
    Ok(counts.iter().fold((0, 0), |(t, h), (a, b)| (t + a, h + b)))
}

/// Plucker coordinates (3x3 minors) of a 3x6 matrix modulo `p`.
fn plucker_mod(m: &[Vec<u64>], p: u64) -> [u64; RANK] {
    let mut out = [0u64; RANK];
    for (pos, o) in out.iter_mut().enumerate() {
        let c = crate::exterior::subset(3, pos);
        let e = |r: usize, k: usize| m[r][c[k]] as i64;
        let d = e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
        *o = d.rem_euclid(p as i64) as u64;
    }
    out
}

/// Certificates for the open sets of Lagrangians without decomposable
/// elements and with corank at most 2, via exhaustive scans modulo primes.
/// Rational inputs must have an integral basis modulo each prime.
pub fn lg_certificates(a: &LagrangianSubspace, primes: CertificatePrimes) -> Result<LgReport> {
    modp::check_prime(primes.decomposable)?;
    modp::check_prime(primes.corank)?;
    let lagrangian = is_lagrangian(a.basis())?;
    let (gr, hits) = decomposable_scan(a, primes.decomposable)?;
    let (hist, _) = corank_scan(a, primes.corank)?;
    Ok(LgReport {
        lagrangian,
        no_decomposable_mod_p: hits == 0,
        corank_le2_on_fp_points: hist[3..].iter().all(|&n| n == 0),
        primes,
        grassmannian_points: gr,
        decomposables_found: hits,
        projective_points: hist.iter().sum(),
        corank_histogram: hist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::unit;

    const Q: Field = Field::Rational;

    #[test]
    fn coordinate_lagrangian() {
        let a = LagrangianSubspace::coordinate(Q);
        assert!(is_lagrangian(a.basis()).unwrap());
        for r in 0..10 {
            assert!(a.basis().get(r, r).is_one());
        }
        let mut m = a.basis().clone();
        for c in 0..20 {
            m.set(9, c, if c == 19 { Q.one() } else { Q.zero() });
        }
        assert!(!is_lagrangian(&m).unwrap());
        assert!(matches!(is_lagrangian(&ExactMatrix::zeros(Q, 3, 20)), Err(Error::Shape(_))));
    }

    #[test]
    fn samples_are_lagrangian_and_distinct() {
        let a1 = sample_lagrangian(1, Q);
        let a2 = sample_lagrangian(2, Q);
        assert_ne!(a1.basis(), a2.basis());
        let f = Field::prime(101).unwrap();
        assert!(is_lagrangian(sample_lagrangian(1, f).basis()).unwrap());
        assert_eq!(sample_lagrangian(1, f), sample_lagrangian(1, f));
    }

    #[test]
    fn perp_of_coordinate_and_involution() {
        let a = LagrangianSubspace::coordinate(Q);
        let p = perp(&a).unwrap();
        assert_eq!(p.space(), Space::VDual);
        let swapped = graph_lagrangian(&ExactMatrix::zeros(Q, 10, 10), Decomposition::Swapped).unwrap();
        assert_eq!(p.basis(), swapped.basis());
        let s = sample_lagrangian(9, Q);
        assert_eq!(perp(&perp(&s).unwrap()).unwrap(), s);
    }

    #[test]
    fn transversal_to_coordinate_is_complement() {
        let a = LagrangianSubspace::coordinate(Q);
        let c = find_transversal(&[a.basis().clone()], 0, TRANSVERSAL_BUDGET).unwrap();
        let swapped = graph_lagrangian(&ExactMatrix::zeros(Q, 10, 10), Decomposition::Swapped).unwrap();
        assert_eq!(c.basis(), swapped.basis());
    }

    #[test]
    fn chart_at_e1_of_zero_graph() {
        let a = LagrangianSubspace::coordinate(Q);
        let ch = chart(&a, &unit(Q, 1), 5).unwrap();
        assert!(transversal(ch.ldual.basis(), a.basis()));
        assert!(transversal(ch.ldual.basis(), &fiber_f(&unit(Q, 1)).unwrap()));
        assert!(ch.pairing.inverse().is_some());
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let a = sample_lagrangian(4, Q);
        let j = a.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: LagrangianJson = serde_json::from_str(&text).unwrap();
        assert_eq!(LagrangianSubspace::from_json(&back).unwrap(), a);
        let mut bad = j.clone();
        bad.basis[2][7] = "x".into();
        match LagrangianSubspace::from_json(&bad) {
            Err(Error::Parse { field, .. }) => assert_eq!(field, "basis[2][7]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn coordinate_contains_decomposable() {
        let a = LagrangianSubspace::coordinate(Q);
        let (total, hits) = decomposable_scan(&a, 3).unwrap();
        assert_eq!(total, 33880);
        assert!(hits > 0);
        let r = lg_certificates(&a, CertificatePrimes::default()).unwrap();
        assert!(!r.no_decomposable_mod_p);
        assert_eq!(r.projective_points, 3906);
    }
}
