//! The symplectic form `sigma(a, b) = vol(a ^ b)` on the third exterior power,
//! the Lagrangian fibers `F_v = v ^ wedge^2 V`, decomposability, and the
//! linear system showing `sigma` is the only form vanishing on every fiber.

use crate::error::{Error, Result};
use crate::exterior::{self, basis_len, subset_mask, unit, wedge_coords, wedge_sign, WedgeVector, DIM};
use crate::matrix::ExactMatrix;
use crate::scalar::{Field, FieldScalar};

/// Number of basis elements of the third exterior power.
pub const RANK: usize = 20;
/// Dimension of a Lagrangian subspace.
pub const HALF: usize = 10;

/// Position of the complementary 3-subset.
pub fn complement(pos: usize) -> usize {
    exterior::position(!subset_mask(3, pos) & 0b11_1111)
}

/// `sigma(e_I, e_{I^c})`.
pub fn complement_sign(pos: usize) -> i64 {
    let m = subset_mask(3, pos);
    wedge_sign(m, !m & 0b11_1111).unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    gram: ExactMatrix,
}

impl SymplecticForm {
    pub fn new(field: Field) -> Self {
        let mut gram = ExactMatrix::zeros(field, RANK, RANK);
        for i in 0..RANK {
            gram.set(i, complement(i), field.from_i64(complement_sign(i)));
        }
        SymplecticForm { gram }
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }
}

/// `sigma` on raw coordinates (the same formula serves `sigma^dual`).
pub fn sigma_coords(a: &[FieldScalar], b: &[FieldScalar]) -> FieldScalar {
    let field = a[0].field();
    let mut acc = field.zero();
    for i in 0..RANK {
        if a[i].is_zero() {
            continue;
        }
        let j = complement(i);
        if b[j].is_zero() {
            continue;
        }
        let t = &a[i] * &b[j];
        if complement_sign(i) > 0 {
            acc += &t;
        } else {
            acc -= &t;
        }
    }
    acc
}

/// `sigma(a, b) = vol(a ^ b)` for degree-3 elements of the same space.
pub fn sigma(a: &WedgeVector, b: &WedgeVector) -> Result<FieldScalar> {
    if a.space() != b.space() {
        return Err(Error::SpaceMismatch);
    }
    if a.degree() != 3 || b.degree() != 3 {
        return Err(Error::Degree("sigma needs two degree-3 elements".into()));
    }
    a.field().check(&b.coords()[0])?;
    Ok(sigma_coords(a.coords(), b.coords()))
}

/// Gram matrix `sigma(rows_a[i], rows_b[j])`.
pub fn pairing(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let field = a.field();
    let rows = (0..a.rows())
        .map(|i| (0..b.rows()).map(|j| sigma_coords(a.row(i), b.row(j))).collect())
        .collect();
    ExactMatrix::from_rows(field, rows).unwrap()
}

fn check_nonzero(v: &[FieldScalar]) -> Result<Field> {
    if v.len() != DIM {
        return Err(Error::Shape(format!("vector of length {} in a 6-dimensional space", v.len())));
    }
    if v.iter().all(FieldScalar::is_zero) {
        return Err(Error::ZeroVector);
    }
    let field = v[0].field();
    for x in v {
        field.check(x)?;
    }
    Ok(field)
}

/// The 10 vectors `v ^ e_j ^ e_k`, `j < k`, `j, k != skip`: a basis of `F_v`
/// whenever `v_skip != 0`.
pub fn fiber_frame(v: &[FieldScalar], skip: usize) -> Vec<Vec<FieldScalar>> {
    let field = v[0].field();
    let mut out = Vec::with_capacity(HALF);
    for j in 0..DIM {
        for k in j + 1..DIM {
            if j == skip || k == skip {
                continue;
            }
            let ejk = exterior::wedge_coords(field, 1, &unit(field, j), 1, &unit(field, k));
            out.push(wedge_coords(field, 1, v, 2, &ejk));
        }
    }
    out
}

/// Row basis (reduced echelon form) of `F_v = { v ^ beta }`; depends only on `[v]`.
pub fn fiber_f(v: &[FieldScalar]) -> Result<ExactMatrix> {
    let field = check_nonzero(v)?;
    let skip = v.iter().position(|x| !x.is_zero()).unwrap();
    let frame = fiber_frame(v, skip);
    let m = ExactMatrix::from_rows(field, frame)?;
    let basis = m.row_space();
    debug_assert_eq!(basis.rows(), HALF);
    Ok(basis)
}

/// True iff `dim { v : v ^ a = 0 } = 3`, i.e. `a = v0 ^ v1 ^ v2`.
pub fn is_decomposable_3vector(a: &WedgeVector) -> Result<bool> {
    if a.degree() != 3 {
        return Err(Error::Degree("decomposability test expects a 3-vector".into()));
    }
    if a.is_zero() {
        return Err(Error::ZeroVector);
    }
    let (rank, _) = a.annihilator_map().rank_kernel();
    Ok(DIM - rank == 3)
}

/// Result of solving for antisymmetric forms vanishing on sampled fibers.
#[derive(Clone, Debug)]
pub struct Uniqueness {
    pub kernel_dim: usize,
    pub constraints: usize,
    /// Antisymmetric 20x20 generator when the solution space is a line.
    pub generator: Option<ExactMatrix>,
}

/// The lines `e_i` and `e_i + e_j` used to pin the form down.
pub fn witness_lines(field: Field) -> Vec<Vec<FieldScalar>> {
    let mut lines: Vec<Vec<FieldScalar>> = (0..DIM).map(|i| unit(field, i)).collect();
    for i in 0..DIM {
        for j in i + 1..DIM {
            let mut v = unit(field, i);
            v[j] = field.one();
            lines.push(v);
        }
    }
    lines
}

/// Solves for antisymmetric `tau` on the 20-dimensional space with
/// `tau(a, b) = 0` for `a, b` in `F_v` for each sampled `v`.
pub fn symplectic_uniqueness(lines: &[Vec<FieldScalar>]) -> Result<Uniqueness> {
    let Some(first) = lines.first() else {
        return Err(Error::Argument("empty sample of lines".into()));
    };
    let field = check_nonzero(first)?;
    let pairs: Vec<(usize, usize)> = (0..RANK)
        .flat_map(|i| (i + 1..RANK).map(move |j| (i, j)))
        .collect();
    let mut rows: Vec<Vec<FieldScalar>> = Vec::new();
    for v in lines {
        if check_nonzero(v)? != field {
            return Err(Error::FieldMismatch("sample lines".into()));
        }
        let f = fiber_f(v)?;
        for a in 0..HALF {
            for b in a + 1..HALF {
                let (x, y) = (f.row(a), f.row(b));
                let row: Vec<FieldScalar> = pairs
                    .iter()
                    .map(|&(i, j)| &(&x[i] * &y[j]) - &(&x[j] * &y[i]))
                    .collect();
                rows.push(row);
            }
        }
    }
    let system = ExactMatrix::from_rows(field, rows)?;
    let (_, kernel) = system.rank_kernel();
    let generator = (kernel.len() == 1).then(|| {
        let mut g = ExactMatrix::zeros(field, RANK, RANK);
        for (&(i, j), c) in pairs.iter().zip(&kernel[0]) {
            g.set(i, j, c.clone());
            g.set(j, i, -c);
        }
        g
    });
    Ok(Uniqueness {
        kernel_dim: kernel.len(),
        constraints: system.rows(),
        generator,
    })
}

/// `basis_len(3)`, re-exported for callers that only need the count.
pub fn rank() -> usize {
    basis_len(3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Space;
    use crate::rng::SplitMix64;

    const Q: Field = Field::Rational;

    #[test]
    fn gram_is_antisymmetric_permutation_like() {
        let g = SymplecticForm::new(Q);
        let gram = g.gram();
        assert_eq!(gram.transpose(), gram.scale(&Q.from_i64(-1)));
        for r in 0..RANK {
            let nz: Vec<_> = gram.row(r).iter().filter(|x| !x.is_zero()).collect();
            assert_eq!(nz.len(), 1);
            assert!(nz[0] == &Q.from_i64(1) || nz[0] == &Q.from_i64(-1));
        }
    }

    #[test]
    fn sigma_examples() {
        let a = WedgeVector::basis(Q, Space::V, &[0, 1, 2]);
        let b = WedgeVector::basis(Q, Space::V, &[3, 4, 5]);
        let c = WedgeVector::basis(Q, Space::V, &[0, 3, 4]);
        assert_eq!(sigma(&a, &b).unwrap(), Q.from_i64(1));
        assert!(sigma(&a, &c).unwrap().is_zero());
        let d = WedgeVector::basis(Q, Space::VDual, &[3, 4, 5]);
        assert_eq!(sigma(&a, &d), Err(Error::SpaceMismatch));
    }

    #[test]
    fn sigma_matches_wedge_and_gram() {
        let mut rng = SplitMix64::new(3);
        let g = SymplecticForm::new(Q);
        for _ in 0..50 {
            let a = WedgeVector::new(3, Space::V, rng.vector(Q, 20)).unwrap();
            let b = WedgeVector::new(3, Space::V, rng.vector(Q, 20)).unwrap();
            let s = sigma(&a, &b).unwrap();
            assert_eq!(s, a.wedge(&b).unwrap().vol().unwrap());
            assert_eq!(s, -sigma(&b, &a).unwrap());
            assert!(sigma(&a, &a).unwrap().is_zero());
            let gb = g.gram().mul_vec(b.coords());
            assert_eq!(s, crate::matrix::dot(a.coords(), &gb, Q));
        }
    }

    #[test]
    fn fiber_of_e0() {
        let f = fiber_f(&unit(Q, 0)).unwrap();
        assert_eq!(f.rows(), 10);
        for r in 0..10 {
            // e0 ^ e_i ^ e_j occupy positions 0..10 in lex order
            for c in 0..20 {
                let expected = if c == r { Q.one() } else { Q.zero() };
                assert_eq!(f.get(r, c), &expected);
            }
        }
    }

    #[test]
    fn fibers_are_lagrangian() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..50 {
            let v = rng.nonzero_vector(Q, 6);
            let f = fiber_f(&v).unwrap();
            assert_eq!(f.rank(), 10);
            for a in 0..10 {
                for b in 0..10 {
                    assert!(sigma_coords(f.row(a), f.row(b)).is_zero());
                }
            }
            // depends only on the line
            let scaled: Vec<_> = v.iter().map(|x| x * &Q.from_i64(-3)).collect();
            assert_eq!(fiber_f(&scaled).unwrap(), f);
        }
        assert_eq!(fiber_f(&vec![Q.zero(); 6]), Err(Error::ZeroVector));
    }

    #[test]
    fn decomposability() {
        let a = WedgeVector::basis(Q, Space::V, &[0, 1, 2]);
        assert!(is_decomposable_3vector(&a).unwrap());
        let b = a.add(&WedgeVector::basis(Q, Space::V, &[3, 4, 5])).unwrap();
        assert!(!is_decomposable_3vector(&b).unwrap());
        // its annihilator is trivial
        assert_eq!(b.annihilator_map().rank(), 6);
        let mut rng = SplitMix64::new(5);
        for _ in 0..20 {
            let vs: Vec<Vec<FieldScalar>> = (0..3).map(|_| rng.vector(Q, 6)).collect();
            let c = exterior::wedge_of_vectors(Q, &[&vs[0], &vs[1], &vs[2]]);
            let w = WedgeVector::new(3, Space::V, c).unwrap();
            if !w.is_zero() {
                assert!(is_decomposable_3vector(&w).unwrap());
            }
        }
        assert_eq!(
            is_decomposable_3vector(&WedgeVector::zero(Q, 3, Space::V)),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn uniqueness_single_line() {
        let u = symplectic_uniqueness(&[unit(Q, 0)]).unwrap();
        assert_eq!(u.constraints, 45);
        assert_eq!(u.kernel_dim, 145);
        assert!(u.generator.is_none());
        assert!(matches!(symplectic_uniqueness(&[]), Err(Error::Argument(_))));
    }
}
