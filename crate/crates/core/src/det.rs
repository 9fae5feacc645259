//! Determinants of square matrices whose entries are affine-linear polynomials.
//!
//! The default route is Laplace expansion along columns with memoized minors
//! indexed by row subsets: after `k` columns the table holds the determinant of
//! every `k`-row minor of the first `k` columns, so the whole computation costs at
//! most `n * 2^n` multiply-adds of a polynomial by a linear form. Constant
//! columns are processed first so the large middle layers stay scalar.
//!
//! [`det_by_interpolation`] is an independent route over `F_p` (evaluation on the
//! simplex lattice plus Newton forward differences) kept as a cross-check.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::poly::{Monomial, MultiPoly};
use crate::scalar::{Field, FieldScalar};

/// Largest supported matrix size (row subsets are `u32` bit masks).
pub const MAX_DET_SIZE: usize = 24;

/// Exponent vectors of total degree `<= max_deg`, listed by increasing degree, with
/// a multiplication-by-variable table.
pub(crate) struct MonomialTable {
    nvars: usize,
    monomials: Vec<Vec<u32>>,
    /// `count_upto[d]` = number of monomials of degree `<= d`.
    count_upto: Vec<usize>,
    index: HashMap<Vec<u32>, usize>,
    times: Vec<usize>,
}

impl MonomialTable {
    pub(crate) fn new(nvars: usize, max_deg: u32) -> Self {
        let mut monomials = Vec::new();
        let mut count_upto = Vec::new();
        for d in 0..=max_deg {
            let mut cur = vec![0u32; nvars];
            push_degree(&mut monomials, &mut cur, 0, d);
            count_upto.push(monomials.len());
        }
        let index: HashMap<Vec<u32>, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut times = vec![usize::MAX; monomials.len() * nvars];
        for (i, m) in monomials.iter().enumerate() {
            if m.iter().sum::<u32>() < max_deg {
                for v in 0..nvars {
                    let mut e = m.clone();
                    e[v] += 1;
                    times[i * nvars + v] = index[&e];
                }
            }
        }
        MonomialTable {
            nvars,
            monomials,
            count_upto,
            index,
            times,
        }
    }

    pub(crate) fn len_upto(&self, d: u32) -> usize {
        self.count_upto[d as usize]
    }

    pub(crate) fn monomial(&self, i: usize) -> &[u32] {
        &self.monomials[i]
    }

    pub(crate) fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub(crate) fn len(&self) -> usize {
        self.monomials.len()
    }

    #[inline]
    fn times(&self, i: usize, v: usize) -> usize {
        self.times[i * self.nvars + v]
    }
}

fn push_degree(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, left: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for k in (0..=left).rev() {
        cur[pos] = k;
        push_degree(out, cur, pos + 1, left - k);
    }
    cur[pos] = 0;
}

/// Coefficient arithmetic used by the expansion kernel.
trait Arith: Sync {
    type E: Clone + Send + Sync;
    fn zero(&self) -> Self::E;
    fn is_zero(&self, x: &Self::E) -> bool;
    /// `acc += a * b` (or `acc -= a * b` when `negate`).
    fn mul_add(&self, acc: &mut Self::E, a: &Self::E, b: &Self::E, negate: bool);
    fn embed(&self, x: &FieldScalar) -> Self::E;
    fn extract(&self, x: &Self::E) -> FieldScalar;
}

struct PrimeArith {
    p: u64,
}

impl Arith for PrimeArith {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }
    #[inline]
    fn mul_add(&self, acc: &mut u64, a: &u64, b: &u64, negate: bool) {
        let t = a * b % self.p;
        *acc = if negate {
            (*acc + self.p - t) % self.p
        } else {
            (*acc + t) % self.p
        };
    }
    fn embed(&self, x: &FieldScalar) -> u64 {
        x.residue().expect("prime-field scalar")
    }
    fn extract(&self, x: &u64) -> FieldScalar {
        Field::Prime(self.p).from_i64(*x as i64)
    }
}

struct RationalArith;

impl Arith for RationalArith {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }
    fn mul_add(&self, acc: &mut BigRational, a: &BigRational, b: &BigRational, negate: bool) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let t = a * b;
        if negate {
            *acc -= t;
        } else {
            *acc += t;
        }
    }
    fn embed(&self, x: &FieldScalar) -> BigRational {
        x.as_rational().expect("rational scalar").clone()
    }
    fn extract(&self, x: &BigRational) -> FieldScalar {
        FieldScalar::Rational(x.clone())
    }
}

/// Affine-linear entry: constant term and per-variable coefficients (nonzero only).
struct LinearEntry<E> {
    constant: Option<E>,
    linear: Vec<(usize, E)>,
}

impl<E> LinearEntry<E> {
    fn is_zero(&self) -> bool {
        self.constant.is_none() && self.linear.is_empty()
    }
}

fn validate(m: &[Vec<MultiPoly>]) -> Result<(Field, Vec<String>)> {
    let n = m.len();
    if n == 0 {
        return Err(Error::Shape("empty matrix".into()));
    }
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Shape(format!(
            "determinant needs a square matrix, got {} rows with lengths {:?}",
            n,
            m.iter().map(Vec::len).collect::<Vec<_>>()
        )));
    }
    if n > MAX_DET_SIZE {
        return Err(Error::Argument(format!("matrix size {n} exceeds {MAX_DET_SIZE}")));
    }
    let first = &m[0][0];
    for row in m {
        for e in row {
            first.compatible(e)?;
            if e.degree() > 1 {
                return Err(Error::Degree(format!(
                    "entry of degree {} in a matrix of linear forms",
                    e.degree()
                )));
            }
        }
    }
    Ok((first.field(), first.vars().to_vec()))
}

/// Exact determinant of a square matrix of polynomials of degree `<= 1`.
pub fn det_linear_matrix(m: &[Vec<MultiPoly>]) -> Result<MultiPoly> {
    let (field, vars) = validate(m)?;
    match field {
        Field::Prime(p) => expand(&PrimeArith { p }, m, field, &vars),
        Field::Rational => expand(&RationalArith, m, field, &vars),
    }
}

fn expand<A: Arith>(arith: &A, m: &[Vec<MultiPoly>], field: Field, vars: &[String]) -> Result<MultiPoly> {
    let n = m.len();
    let nvars = vars.len();
    let entries: Vec<Vec<LinearEntry<A::E>>> = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|p| {
                    let mut constant = None;
                    let mut linear = Vec::new();
                    for (e, c) in p.terms() {
                        match e.iter().position(|&k| k == 1) {
                            None => constant = Some(arith.embed(c)),
                            Some(v) => linear.push((v, arith.embed(c))),
                        }
                    }
                    LinearEntry { constant, linear }
                })
                .collect()
        })
        .collect();

    // Column order: constant columns first. Track the permutation sign.
    let is_const = |c: usize| (0..n).all(|r| entries[r][c].linear.is_empty());
    let mut order: Vec<usize> = (0..n).filter(|&c| is_const(c)).collect();
    order.extend((0..n).filter(|&c| !is_const(c)));
    let sign_negative = permutation_is_odd(&order);
    if (0..n).any(|c| (0..n).all(|r| entries[r][c].is_zero())) {
        return Ok(MultiPoly::zero(field, vars));
    }
    let n_linear = order.iter().filter(|&&c| !is_const(c)).count() as u32;
    let table = MonomialTable::new(nvars, n_linear);

    let mut level: HashMap<u32, Vec<A::E>> = HashMap::new();
    level.insert(0, vec![{
        let mut one = arith.zero();
        arith.mul_add(&mut one, &arith.embed(&field.one()), &arith.embed(&field.one()), false);
        one
    }]);
    let mut bound = 0u32;
    for (k, &col) in order.iter().enumerate() {
        let linear_col = !is_const(col);
        let new_bound = bound + linear_col as u32;
        let out_len = table.len_upto(new_bound);
        let targets = subsets_of_size(n, k + 1);
        let prev = &level;
        let step = |t: u32| -> Option<(u32, Vec<A::E>)> {
            let mut out: Option<Vec<A::E>> = None;
            for r in 0..n {
                if t & (1 << r) == 0 {
                    continue;
                }
                let entry = &entries[r][col];
                if entry.is_zero() {
                    continue;
                }
                let s = t & !(1 << r);
                let Some(minor) = prev.get(&s) else { continue };
                let negate = (s >> (r + 1)).count_ones() % 2 == 1;
                let acc = out.get_or_insert_with(|| vec![arith.zero(); out_len]);
                for (i, c) in minor.iter().enumerate() {
                    if arith.is_zero(c) {
                        continue;
                    }
                    if let Some(c0) = &entry.constant {
                        arith.mul_add(&mut acc[i], c, c0, negate);
                    }
                    for (v, cv) in &entry.linear {
                        arith.mul_add(&mut acc[table.times(i, *v)], c, cv, negate);
                    }
                }
            }
            out.filter(|v| v.iter().any(|c| !arith.is_zero(c)))
                .map(|v| (t, v))
        };
        let next: HashMap<u32, Vec<A::E>> = if targets.len() > 256 {
            targets.par_iter().filter_map(|&t| step(t)).collect()
        } else {
            targets.iter().filter_map(|&t| step(t)).collect()
        };
        level = next;
        bound = new_bound;
        if level.is_empty() {
            return Ok(MultiPoly::zero(field, vars));
        }
    }
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let coeffs = level.remove(&full).unwrap_or_default();
    let mut out = MultiPoly::zero(field, vars);
    for (i, c) in coeffs.iter().enumerate() {
        if !arith.is_zero(c) {
            let mut s = arith.extract(c);
            if sign_negative {
                s = -s;
            }
            out.add_term(Monomial(table.monomial(i).to_vec()), s);
        }
    }
    Ok(out)
}

fn permutation_is_odd(order: &[usize]) -> bool {
    let mut inversions = 0usize;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if order[i] > order[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// All `k`-subsets of `{0..n}` as bit masks, in increasing numeric order.
pub(crate) fn subsets_of_size(n: usize, k: usize) -> Vec<u32> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut s: u64 = (1u64 << k) - 1;
    let limit = 1u64 << n;
    while s < limit {
        out.push(s as u32);
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
    out
}

/// Evaluates a polynomial matrix at a point.
pub fn evaluate_matrix(m: &[Vec<MultiPoly>], point: &[FieldScalar]) -> Result<ExactMatrix> {
    let field = m
        .first()
        .and_then(|r| r.first())
        .map(MultiPoly::field)
        .ok_or_else(|| Error::Shape("empty matrix".into()))?;
    let rows = m
        .iter()
        .map(|row| row.iter().map(|e| e.eval(point)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    ExactMatrix::from_rows(field, rows)
}

/// Determinant over `F_p` by evaluation on the lattice `{a : |a| <= D}` and
/// Newton interpolation with forward differences; `D` is the number of
/// non-constant columns. Requires `p > D`.
pub fn det_by_interpolation(m: &[Vec<MultiPoly>]) -> Result<MultiPoly> {
    let (field, vars) = validate(m)?;
    let Field::Prime(p) = field else {
        return Err(Error::Argument("interpolation route is only provided over F_p".into()));
    };
    let n = m.len();
    let nvars = vars.len();
    let d = (0..n)
        .filter(|&c| (0..n).any(|r| m[r][c].degree() == 1))
        .count() as u32;
    if (d as u64) >= p {
        return Err(Error::Argument(format!("prime {p} too small for degree {d}")));
    }
    let grid = MonomialTable::new(nvars, d);
    let mut g: Vec<FieldScalar> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let pt: Vec<FieldScalar> = grid
                .monomial(i)
                .iter()
                .map(|&a| field.from_i64(a as i64))
                .collect();
            evaluate_matrix(m, &pt).and_then(|mm| mm.det())
        })
        .collect::<Result<Vec<_>>>()?;
    // Forward differences along each variable, in place.
    for v in 0..nvars {
        for t in 1..=d {
            let mut idx: Vec<usize> = (0..grid.len())
                .filter(|&i| grid.monomial(i)[v] >= t)
                .collect();
            idx.sort_by_key(|&i| std::cmp::Reverse(grid.monomial(i)[v]));
            for i in idx {
                let mut e = grid.monomial(i).to_vec();
                e[v] -= 1;
                let j = grid.index_of(&e).unwrap();
                let prev = g[j].clone();
                g[i] -= &prev;
            }
        }
    }
    // binom(x, k) as coefficient lists in x.
    let binoms: Vec<Vec<FieldScalar>> = (0..=d)
        .map(|k| {
            let mut poly = vec![field.one()];
            for j in 0..k {
                let mut next = vec![field.zero(); poly.len() + 1];
                for (i, c) in poly.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= &(c * &field.from_i64(j as i64));
                }
                poly = next;
            }
            let mut fact = field.one();
            for j in 1..=k {
                fact = &fact * &field.from_i64(j as i64);
            }
            let inv = fact.inv().unwrap();
            poly.iter().map(|c| c * &inv).collect()
        })
        .collect();
    let mut acc: Vec<FieldScalar> = vec![field.zero(); grid.len()];
    for i in 0..grid.len() {
        if g[i].is_zero() {
            continue;
        }
        let a = grid.monomial(i);
        let mut partial: Vec<(Vec<u32>, FieldScalar)> = vec![(vec![0; nvars], g[i].clone())];
        for v in 0..nvars {
            let coeffs = &binoms[a[v] as usize];
            let mut next = Vec::new();
            for (e, c) in &partial {
                for (k, b) in coeffs.iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    let mut e2 = e.clone();
                    e2[v] = k as u32;
                    next.push((e2, c * b));
                }
            }
            partial = next;
        }
        for (e, c) in partial {
            let j = grid.index_of(&e).unwrap();
            acc[j] += &c;
        }
    }
    let mut out = MultiPoly::zero(field, &vars);
    for (i, c) in acc.into_iter().enumerate() {
        out.add_term(Monomial(grid.monomial(i).to_vec()), c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::var_names;

    #[test]
    fn diagonal_product() {
        let f = Field::Rational;
        let v = vec!["x".to_string(), "y".to_string(), "z".to_string()];
        let zero = MultiPoly::zero(f, &v);
        let m: Vec<Vec<MultiPoly>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { MultiPoly::var(f, &v, i) } else { zero.clone() })
                    .collect()
            })
            .collect();
        let d = det_linear_matrix(&m).unwrap();
        assert_eq!(d.to_string(), "x*y*z");
    }

    #[test]
    fn symmetric_two_by_two_is_xz_minus_y2() {
        let f = Field::Rational;
        let v = vec!["x".to_string(), "y".to_string(), "z".to_string()];
        let x = MultiPoly::var(f, &v, 0);
        let y = MultiPoly::var(f, &v, 1);
        let z = MultiPoly::var(f, &v, 2);
        let d = det_linear_matrix(&[vec![x, y.clone()], vec![y, z]]).unwrap();
        assert_eq!(d.to_string(), "x*z - y^2");
    }

    #[test]
    fn rejects_non_square_and_quadratic_entries() {
        let f = Field::Rational;
        let v = var_names("x", 1);
        let x = MultiPoly::var(f, &v, 0);
        assert!(matches!(
            det_linear_matrix(&[vec![x.clone(), x.clone()]]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            det_linear_matrix(&[vec![&x * &x]]),
            Err(Error::Degree(_))
        ));
    }

    #[test]
    fn subset_enumeration_counts() {
        assert_eq!(subsets_of_size(5, 2).len(), 10);
        assert_eq!(subsets_of_size(20, 10).len(), 184_756);
        assert_eq!(subsets_of_size(4, 0), vec![0]);
        assert!(subsets_of_size(4, 4).contains(&0b1111));
    }

    #[test]
    fn monomial_table_sizes() {
        let t = MonomialTable::new(5, 10);
        assert_eq!(t.len(), 3003);
        assert_eq!(t.len_upto(1), 6);
        let t6 = MonomialTable::new(6, 10);
        assert_eq!(t6.len(), 8008);
    }

    #[test]
    fn permuted_columns_keep_sign() {
        // [[1, x], [0, 1]] has constant column 0 and linear column 1; [[x, 1], [1, 0]] = -1.
        let f = Field::Rational;
        let v = var_names("x", 1);
        let x = MultiPoly::var(f, &v, 0);
        let one = MultiPoly::constant(f, &v, f.one());
        let zero = MultiPoly::zero(f, &v);
        let d = det_linear_matrix(&[vec![x.clone(), one.clone()], vec![one.clone(), zero.clone()]]).unwrap();
        assert_eq!(d.to_string(), "-1");
        let d2 = det_linear_matrix(&[vec![x.clone(), one.clone()], vec![x.clone(), x.clone()]]).unwrap();
        // x*x - x
        assert_eq!(d2.to_string(), "x0^2 - x0");
    }
}
