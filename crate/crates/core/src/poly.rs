//! Sparse multivariate polynomials over a [`Field`] with graded-lex term order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Field, FieldScalar};

/// Exponent vector ordered graded-lex: total degree first, then lexicographic
/// with the first declared variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    field: Field,
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, FieldScalar>,
}

/// Names `prefix0, prefix1, ...`.
pub fn var_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

impl MultiPoly {
    pub fn zero(field: Field, vars: &[String]) -> Self {
        MultiPoly {
            field,
            vars: vars.into(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: Field, vars: &[String], c: FieldScalar) -> Self {
        let mut p = Self::zero(field, vars);
        p.add_term(Monomial(vec![0; vars.len()]), c);
        p
    }

    /// The polynomial consisting of the single variable `i`.
    pub fn var(field: Field, vars: &[String], i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = Self::zero(field, vars);
        p.add_term(Monomial(e), field.one());
        p
    }

    /// `c0 + sum_j coeffs[j] * x_j`.
    pub fn affine(field: Field, vars: &[String], c0: FieldScalar, coeffs: &[FieldScalar]) -> Self {
        assert_eq!(coeffs.len(), vars.len());
        let mut p = Self::constant(field, vars, c0);
        for (j, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[j] = 1;
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    pub fn from_terms(
        field: Field,
        vars: &[String],
        terms: impl IntoIterator<Item = (Vec<u32>, FieldScalar)>,
    ) -> Result<Self> {
        let mut p = Self::zero(field, vars);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::Shape(format!(
                    "exponent of length {} for {} variables",
                    e.len(),
                    vars.len()
                )));
            }
            field.check(&c)?;
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    /// Same polynomial with renamed variables (the count must match).
    pub fn with_vars(&self, vars: &[String]) -> Self {
        assert_eq!(vars.len(), self.vars.len());
        MultiPoly {
            field: self.field,
            vars: vars.into(),
            terms: self.terms.clone(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: FieldScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lex descending order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &FieldScalar)> {
        self.terms.iter().rev().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn coeff(&self, exp: &[u32]) -> FieldScalar {
        self.terms
            .get(&Monomial(exp.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().next_back().map_or(-1, |m| m.degree() as i64)
    }

    /// Lowest total degree of a term (order of vanishing at the origin); `-1` for zero.
    pub fn low_degree(&self) -> i64 {
        self.terms.keys().next().map_or(-1, |m| m.degree() as i64)
    }

    pub fn degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|m| m.0[var] as i64).max().unwrap_or(-1)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|m| m.degree() as i64 == d)
    }

    pub fn leading(&self) -> Option<(&Monomial, &FieldScalar)> {
        self.terms.iter().next_back()
    }

    pub fn homogeneous_component(&self, d: u32) -> MultiPoly {
        MultiPoly {
            field: self.field,
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops all terms of total degree above `d`.
    pub fn truncate_degree(&self, d: u32) -> MultiPoly {
        MultiPoly {
            field: self.field,
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Fails unless `o` has the same field and variable list.
    pub fn compatible(&self, o: &MultiPoly) -> Result<()> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, o.field)));
        }
        if self.vars != o.vars {
            return Err(Error::Argument(format!(
                "variable sets differ: {:?} vs {:?}",
                self.vars, o.vars
            )));
        }
        Ok(())
    }

    fn assert_compatible(&self, o: &MultiPoly) {
        if let Err(e) = self.compatible(o) {
            panic!("{e}");
        }
    }

    pub fn scale(&self, s: &FieldScalar) -> MultiPoly {
        if s.is_zero() {
            return Self::zero(self.field, &self.vars);
        }
        MultiPoly {
            field: self.field,
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &FieldScalar) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.field, &self.vars);
        }
        MultiPoly {
            field: self.field,
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    fn add_ref(&self, o: &MultiPoly) -> MultiPoly {
        self.assert_compatible(o);
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn mul_ref(&self, o: &MultiPoly) -> MultiPoly {
        self.assert_compatible(o);
        let mut out = Self::zero(self.field, &self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = Self::constant(self.field, &self.vars, self.field.one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[FieldScalar]) -> Result<FieldScalar> {
        if point.len() != self.nvars() {
            return Err(Error::Shape(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars()
            )));
        }
        for x in point {
            self.field.check(x)?;
        }
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Replaces every variable by a polynomial over a new variable list.
    pub fn compose(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.nvars() {
            return Err(Error::Shape(format!(
                "{} images for {} variables",
                images.len(),
                self.nvars()
            )));
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        for img in images {
            first.compatible(img)?;
            if img.field != self.field {
                return Err(Error::FieldMismatch("compose".into()));
            }
        }
        let new_vars = first.vars.clone();
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|g| vec![MultiPoly::constant(self.field, &new_vars, self.field.one()), g.clone()])
            .collect();
        let mut out = MultiPoly::zero(self.field, &new_vars);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(self.field, &new_vars, c.clone());
            for (j, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[j].len() <= e as usize {
                    let next = &powers[j][powers[j].len() - 1] * &images[j];
                    powers[j].push(next);
                }
                t = &t * &powers[j][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Substitutes variable `var` by `image` (same variable list).
    pub fn substitute(&self, var: usize, image: &MultiPoly) -> Result<MultiPoly> {
        self.compatible(image)?;
        let images: Vec<MultiPoly> = (0..self.nvars())
            .map(|j| {
                if j == var {
                    image.clone()
                } else {
                    MultiPoly::var(self.field, &self.vars, j)
                }
            })
            .collect();
        self.compose(&images)
    }

    /// Sets variable `var` to `value` and removes it from the variable list.
    pub fn specialize(&self, var: usize, value: &FieldScalar) -> MultiPoly {
        let vars: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != var)
            .map(|(_, v)| v.clone())
            .collect();
        let mut out = MultiPoly::zero(self.field, &vars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e.remove(var);
            out.add_term(Monomial(e), c * &value.pow(k));
        }
        out
    }

    /// Homogenizes to total degree `d` using a new variable named `name`
    /// inserted at position `pos`.
    pub fn homogenize(&self, d: u32, pos: usize, name: &str) -> Result<MultiPoly> {
        if self.degree() > d as i64 {
            return Err(Error::Degree(format!(
                "cannot homogenize degree {} to degree {d}",
                self.degree()
            )));
        }
        let mut vars = self.vars.to_vec();
        vars.insert(pos, name.to_string());
        let mut out = MultiPoly::zero(self.field, &vars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.insert(pos, d - m.degree());
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut out = Self::zero(self.field, &self.vars);
        for (m, c) in &self.terms {
            let k = m.0[var];
            if k == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[var] -= 1;
            out.add_term(Monomial(e), c * &self.field.from_i64(k as i64));
        }
        out
    }

    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.nvars()).map(|j| self.derivative(j)).collect()
    }

    /// Exact quotient `self / divisor`; fails with the remainder's degree otherwise.
    pub fn exact_div(&self, divisor: &MultiPoly) -> Result<MultiPoly> {
        self.compatible(divisor)?;
        let (lm, lc) = divisor
            .leading()
            .map(|(m, c)| (m.clone(), c.clone()))
            .ok_or_else(|| Error::Argument("division by the zero polynomial".into()))?;
        let lc_inv = lc.inv().unwrap();
        let mut rest = self.clone();
        let mut quotient = Self::zero(self.field, &self.vars);
        let mut remainder = Self::zero(self.field, &self.vars);
        while let Some((m, c)) = rest.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if lm.divides(&m) {
                let qm = m.div(&lm);
                let qc = &c * &lc_inv;
                rest = &rest - &divisor.mul_monomial(&qm, &qc);
                quotient.add_term(qm, qc);
            } else {
                rest.terms.remove(&m);
                remainder.add_term(m, c);
            }
        }
        if remainder.is_zero() {
            Ok(quotient)
        } else {
            Err(Error::NotDivisible {
                remainder_degree: remainder.degree(),
            })
        }
    }

    /// Over Q: integer coefficients with content 1 and positive leading coefficient.
    /// Over `F_p`: monic with respect to the graded-lex leading term.
    pub fn normalized(&self) -> MultiPoly {
        let Some((_, lc)) = self.leading() else {
            return self.clone();
        };
        match self.field {
            Field::Prime(_) => self.scale(&lc.inv().unwrap()),
            Field::Rational => {
                let mut lcm = BigInt::one();
                let mut gcd = BigInt::zero();
                for c in self.terms.values() {
                    let q = c.as_rational().unwrap();
                    lcm = lcm.lcm(q.denom());
                }
                for c in self.terms.values() {
                    let q = c.as_rational().unwrap();
                    let n = q.numer() * (&lcm / q.denom());
                    gcd = gcd.gcd(&n);
                }
                let mut factor = BigRational::new(lcm, gcd);
                if lc.as_rational().unwrap().is_negative() {
                    factor = -factor;
                }
                self.scale(&FieldScalar::Rational(factor))
            }
        }
    }

    /// True when `self = c * o` for a nonzero constant `c` (both nonzero), or both are zero.
    pub fn is_proportional(&self, o: &MultiPoly) -> bool {
        if self.field != o.field || self.nvars() != o.nvars() {
            return false;
        }
        match (self.leading(), o.leading()) {
            (None, None) => true,
            (Some((m1, c1)), Some((m2, c2))) => {
                if m1 != m2 || self.terms.len() != o.terms.len() {
                    return false;
                }
                // cross-multiplication: c2 * self == c1 * o termwise
                self.terms.iter().all(|(m, a)| match o.terms.get(m) {
                    Some(b) => a * c2 == b * c1,
                    None => false,
                })
            }
            _ => false,
        }
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            vars: self.vars.to_vec(),
            terms: self
                .terms()
                .map(|(e, c)| TermJson {
                    exp: e.to_vec(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &PolyJson, field: Field) -> Result<MultiPoly> {
        let mut p = Self::zero(field, &json.vars);
        for (i, t) in json.terms.iter().enumerate() {
            if t.exp.len() != json.vars.len() {
                return Err(Error::parse(
                    format!("terms[{i}].exp"),
                    format!("expected {} exponents", json.vars.len()),
                ));
            }
            let c = field
                .parse_scalar(&t.coeff)
                .map_err(|e| Error::parse(format!("terms[{i}].coeff"), e.to_string()))?;
            p.add_term(Monomial(t.exp.clone()), c);
        }
        Ok(p)
    }
}

/// Polynomial JSON: `{"vars": [...], "terms": [{"exp": [...], "coeff": "..."}]}`,
/// terms in graded-lex descending order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coeff: String,
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        self.add_ref(o)
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self.add_ref(&-o)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        self.mul_ref(o)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-self.field.one())
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: MultiPoly) -> MultiPoly {
        self.add_ref(&o)
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: MultiPoly) -> MultiPoly {
        &self - &o
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: MultiPoly) -> MultiPoly {
        self.mul_ref(&o)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(self.vars.iter())
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            let cs = c.to_string();
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}
