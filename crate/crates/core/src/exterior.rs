//! Exterior algebra of a 6-dimensional space.
//!
//! Degree-`k` elements are stored as `C(6, k)` coordinates in the basis
//! `e_I = e_{i1} ^ ... ^ e_{ik}`, `i1 < ... < ik`, with subsets `I` listed in
//! lexicographic order (for `k = 3`: `012 -> 0, 013 -> 1, ..., 345 -> 19`).
//! Reordering a wedge of basis vectors contributes the parity of the sorting
//! permutation.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::{Field, FieldScalar};

pub const DIM: usize = 6;

/// Which space an element lives in; `V` and its dual never mix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    V,
    #[serde(rename = "Vdual")]
    VDual,
}

struct Tables {
    /// `subsets[k]` = bit masks of the `k`-subsets in lex order.
    subsets: Vec<Vec<u8>>,
    /// `position[mask]` = rank of the subset among subsets of the same size.
    position: [usize; 64],
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let mut subsets = vec![Vec::new(); DIM + 1];
        fn rec(start: usize, k: usize, mask: u8, out: &mut Vec<u8>) {
            if k == 0 {
                out.push(mask);
                return;
            }
            for i in start..DIM {
                rec(i + 1, k - 1, mask | (1 << i), out);
            }
        }
        for (k, list) in subsets.iter_mut().enumerate() {
            rec(0, k, 0, list);
        }
        let mut position = [0usize; 64];
        for list in &subsets {
            for (i, &m) in list.iter().enumerate() {
                position[m as usize] = i;
            }
        }
        Tables { subsets, position }
    })
}

/// Number of basis elements in degree `k`.
pub fn basis_len(k: usize) -> usize {
    tables().subsets[k].len()
}

/// Bit mask of the `pos`-th `k`-subset.
pub fn subset_mask(k: usize, pos: usize) -> u8 {
    tables().subsets[k][pos]
}

/// Sorted indices of the `pos`-th `k`-subset.
pub fn subset(k: usize, pos: usize) -> Vec<usize> {
    let m = subset_mask(k, pos);
    (0..DIM).filter(|i| m & (1 << i) != 0).collect()
}

/// Lex position of a subset given as a bit mask.
pub fn position(mask: u8) -> usize {
    tables().position[mask as usize]
}

/// Position of the subset `{i < j < k}`-style index list (any order, no repeats).
pub fn position_of(indices: &[usize]) -> usize {
    position(indices.iter().fold(0u8, |m, &i| m | (1 << i)))
}

/// Sign of `e_I ^ e_J` relative to `e_{I u J}`, or `None` when `I` and `J` meet.
pub fn wedge_sign(a: u8, b: u8) -> Option<i64> {
    if a & b != 0 {
        return None;
    }
    // count pairs (i in a, j in b) with i > j
    let mut inv = 0;
    for j in 0..DIM {
        if b & (1 << j) != 0 {
            inv += (a >> (j + 1)).count_ones();
        }
    }
    Some(if inv % 2 == 0 { 1 } else { -1 })
}

/// Wedge product on raw coordinates.
pub fn wedge_coords(
    field: Field,
    k: usize,
    a: &[FieldScalar],
    l: usize,
    b: &[FieldScalar],
) -> Vec<FieldScalar> {
    let mut out = vec![field.zero(); basis_len(k + l)];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let mi = subset_mask(k, i);
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let mj = subset_mask(l, j);
            if let Some(s) = wedge_sign(mi, mj) {
                let t = x * y;
                let pos = position(mi | mj);
                if s > 0 {
                    out[pos] += &t;
                } else {
                    out[pos] -= &t;
                }
            }
        }
    }
    out
}

/// Contraction `iota_phi` of a degree-`k` element with a covector `phi`:
/// `iota_phi(e_{i1} ^ ... ^ e_{ik}) = sum_m (-1)^m phi(e_{im}) e_{I \ im}`.
pub fn contract_coords(field: Field, phi: &[FieldScalar], k: usize, a: &[FieldScalar]) -> Vec<FieldScalar> {
    assert!(k >= 1);
    let mut out = vec![field.zero(); basis_len(k - 1)];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let idx = subset(k, i);
        for (m, &im) in idx.iter().enumerate() {
            if phi[im].is_zero() {
                continue;
            }
            let t = x * &phi[im];
            let pos = position(subset_mask(k, i) & !(1 << im));
            if m % 2 == 0 {
                out[pos] += &t;
            } else {
                out[pos] -= &t;
            }
        }
    }
    out
}

/// Wedge of several 1-vectors.
pub fn wedge_of_vectors(field: Field, vectors: &[&[FieldScalar]]) -> Vec<FieldScalar> {
    let mut acc = vec![field.one()];
    for (k, v) in vectors.iter().enumerate() {
        acc = wedge_coords(field, k, &acc, 1, v);
    }
    acc
}

/// Unit vector `e_i` of `field^6`.
pub fn unit(field: Field, i: usize) -> Vec<FieldScalar> {
    let mut v = vec![field.zero(); DIM];
    v[i] = field.one();
    v
}

/// An element of `wedge^k V` or `wedge^k V^dual`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeVector {
    degree: usize,
    space: Space,
    coords: Vec<FieldScalar>,
}

impl WedgeVector {
    pub fn new(degree: usize, space: Space, coords: Vec<FieldScalar>) -> Result<Self> {
        if !(1..=DIM).contains(&degree) {
            return Err(Error::Degree(format!("degree {degree} outside 1..=6")));
        }
        if coords.len() != basis_len(degree) {
            return Err(Error::Shape(format!(
                "{} coordinates for degree {degree} (expected {})",
                coords.len(),
                basis_len(degree)
            )));
        }
        let field = coords[0].field();
        for c in &coords {
            field.check(c)?;
        }
        Ok(WedgeVector { degree, space, coords })
    }

    pub fn zero(field: Field, degree: usize, space: Space) -> Self {
        WedgeVector {
            degree,
            space,
            coords: vec![field.zero(); basis_len(degree)],
        }
    }

    /// The basis element `e_I` for a strictly increasing index list.
    pub fn basis(field: Field, space: Space, indices: &[usize]) -> Self {
        let mut w = Self::zero(field, indices.len(), space);
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), indices.len(), "repeated index");
        w.coords[position_of(indices)] = field.one();
        w
    }

    pub fn from_vector(space: Space, v: &[FieldScalar]) -> Result<Self> {
        Self::new(1, space, v.to_vec())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn field(&self) -> Field {
        self.coords[0].field()
    }

    pub fn coords(&self) -> &[FieldScalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<FieldScalar> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldScalar::is_zero)
    }

    pub fn scale(&self, s: &FieldScalar) -> Self {
        WedgeVector {
            degree: self.degree,
            space: self.space,
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, o: &WedgeVector) -> Result<Self> {
        if self.space != o.space {
            return Err(Error::SpaceMismatch);
        }
        if self.degree != o.degree {
            return Err(Error::Degree("sum of different degrees".into()));
        }
        self.field().check(&o.coords[0])?;
        Ok(WedgeVector {
            degree: self.degree,
            space: self.space,
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        })
    }

    /// Exterior product; bilinear, associative and graded-commutative.
    pub fn wedge(&self, o: &WedgeVector) -> Result<WedgeVector> {
        if self.space != o.space {
            return Err(Error::SpaceMismatch);
        }
        if self.degree + o.degree > DIM {
            return Err(Error::Degree(format!(
                "wedge of degrees {} and {} exceeds {DIM}",
                self.degree, o.degree
            )));
        }
        let field = self.field();
        field.check(&o.coords[0])?;
        Ok(WedgeVector {
            degree: self.degree + o.degree,
            space: self.space,
            coords: wedge_coords(field, self.degree, &self.coords, o.degree, &o.coords),
        })
    }

    /// Coefficient of `e_0 ^ ... ^ e_5` of a top-degree element.
    pub fn vol(&self) -> Result<FieldScalar> {
        if self.degree != DIM {
            return Err(Error::Degree(format!("vol of a degree-{} element", self.degree)));
        }
        Ok(self.coords[0].clone())
    }

    /// Matrix of `v -> v ^ self` from `field^6` to degree `k + 1`.
    pub fn annihilator_map(&self) -> ExactMatrix {
        let field = self.field();
        let cols: Vec<Vec<FieldScalar>> = (0..DIM)
            .map(|i| wedge_coords(field, 1, &unit(field, i), self.degree, &self.coords))
            .collect();
        ExactMatrix::from_rows(field, cols).unwrap().transpose()
    }

    pub fn to_json(&self) -> WedgeJson {
        WedgeJson {
            degree: self.degree,
            space: self.space,
            coords: self.coords.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn from_json(j: &WedgeJson, field: Field) -> Result<Self> {
        let coords = j
            .coords
            .iter()
            .enumerate()
            .map(|(i, s)| {
                field
                    .parse_scalar(s)
                    .map_err(|e| Error::parse(format!("coords[{i}]"), e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(j.degree, j.space, coords)
    }
}

/// WedgeVector JSON: `{"degree": 3, "space": "V", "coords": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeJson {
    pub degree: usize,
    pub space: Space,
    pub coords: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn lex_positions() {
        assert_eq!(basis_len(3), 20);
        assert_eq!(position_of(&[0, 1, 2]), 0);
        assert_eq!(position_of(&[0, 1, 3]), 1);
        assert_eq!(position_of(&[0, 1, 4]), 2);
        assert_eq!(position_of(&[0, 1, 5]), 3);
        assert_eq!(position_of(&[0, 2, 3]), 4);
        assert_eq!(position_of(&[3, 4, 5]), 19);
        assert_eq!(subset(3, 9), vec![0, 4, 5]);
        assert_eq!(subset(3, 10), vec![1, 2, 3]);
        assert_eq!(basis_len(2), 15);
    }

    #[test]
    fn basic_wedges() {
        let e0 = WedgeVector::basis(Q, Space::V, &[0]);
        let e12 = WedgeVector::basis(Q, Space::V, &[1, 2]);
        let w = e0.wedge(&e12).unwrap();
        assert_eq!(w, WedgeVector::basis(Q, Space::V, &[0, 1, 2]));
        assert!(w.coords()[0].is_one());

        let a = WedgeVector::basis(Q, Space::V, &[0, 1, 2]);
        let b = WedgeVector::basis(Q, Space::V, &[0, 3, 4]);
        assert!(a.wedge(&b).unwrap().is_zero());

        let c = WedgeVector::basis(Q, Space::V, &[3, 4, 5]);
        assert_eq!(a.wedge(&c).unwrap().vol().unwrap(), Q.from_i64(1));
        assert_eq!(c.wedge(&a).unwrap().vol().unwrap(), Q.from_i64(-1));
    }

    #[test]
    fn degree_overflow_and_space_mismatch() {
        let a = WedgeVector::basis(Q, Space::V, &[0, 1, 2, 3]);
        let b = WedgeVector::basis(Q, Space::V, &[4, 5, 0]);
        assert!(matches!(a.wedge(&b), Err(Error::Degree(_))));
        let d = WedgeVector::basis(Q, Space::VDual, &[4]);
        assert_eq!(a.wedge(&d), Err(Error::SpaceMismatch));
    }

    #[test]
    fn repeated_index_vanishes_for_all_basis_triples() {
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    if i == j || j == k || i == k {
                        let v = wedge_of_vectors(Q, &[&unit(Q, i), &unit(Q, j), &unit(Q, k)]);
                        assert!(v.iter().all(FieldScalar::is_zero));
                    }
                }
            }
        }
    }

    #[test]
    fn contraction_of_basis_element() {
        // iota_{e1*}(e0 ^ e1 ^ e2) = -e0 ^ e2
        let e012 = WedgeVector::basis(Q, Space::V, &[0, 1, 2]);
        let out = contract_coords(Q, &unit(Q, 1), 3, e012.coords());
        let mut expected = vec![Q.zero(); 15];
        expected[position_of(&[0, 2])] = Q.from_i64(-1);
        assert_eq!(out, expected);
    }

    #[test]
    fn json_shape() {
        let e = WedgeVector::basis(Q, Space::VDual, &[0, 1, 2]);
        let j = serde_json::to_value(e.to_json()).unwrap();
        assert_eq!(j["space"], "Vdual");
        assert_eq!(j["coords"].as_array().unwrap().len(), 20);
        let back = WedgeVector::from_json(&serde_json::from_value(j).unwrap(), Q).unwrap();
        assert_eq!(back, e);
    }
}
