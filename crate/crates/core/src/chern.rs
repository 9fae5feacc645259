//! Chern classes in `H*(P^5) = Q[w]/(w^6)` by the splitting principle.
//!
//! Products over formal roots are expanded as polynomials in five roots
//! `a1..a5` (plus `w`), reduced to elementary symmetric functions by the
//! classical lex-leading-term algorithm, then evaluated at `e_k = c_k(Q) = w^k`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rng::SplitMix64;
use crate::scalar::{Field, FieldScalar};

/// Top degree of the truncated ring.
pub const TOP: usize = 5;
/// Rank of the tautological quotient bundle on `P^5`.
pub const ROOTS: usize = 5;

const Q: Field = Field::Rational;

/// `c_0 + c_1 w + ... + c_5 w^5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernSeries {
    coeffs: [BigRational; TOP + 1],
}

impl ChernSeries {
    pub fn from_coeffs(c: [BigRational; TOP + 1]) -> Self {
        ChernSeries { coeffs: c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        let mut coeffs: [BigRational; TOP + 1] = Default::default();
        for (k, &x) in c.iter().take(TOP + 1).enumerate() {
            coeffs[k] = BigRational::from_integer(x.into());
        }
        ChernSeries { coeffs }
    }

    pub fn one() -> Self {
        Self::from_ints(&[1])
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficients as integers, when they all are.
    pub fn as_integers(&self) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }

    /// Product truncated at `w^6`.
    pub fn mul(&self, o: &ChernSeries) -> ChernSeries {
        let mut out: [BigRational; TOP + 1] = Default::default();
        for i in 0..=TOP {
            for j in 0..=TOP - i {
                out[i + j] += &self.coeffs[i] * &o.coeffs[j];
            }
        }
        ChernSeries { coeffs: out }
    }

    /// Multiplicative inverse (requires `c_0 != 0`).
    pub fn inverse(&self) -> Option<ChernSeries> {
        if self.coeffs[0].is_zero() {
            return None;
        }
        let mut out: [BigRational; TOP + 1] = Default::default();
        out[0] = self.coeffs[0].recip();
        for k in 1..=TOP {
            let mut s = BigRational::zero();
            for j in 1..=k {
                s += &self.coeffs[j] * &out[k - j];
            }
            out[k] = -s * &out[0];
        }
        Some(ChernSeries { coeffs: out })
    }
}

impl fmt::Display for ChernSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigRational::zero();
            let abs = if neg { -c } else { c.clone() };
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let body = match (k, abs.is_one()) {
                (0, _) => abs.to_string(),
                (1, true) => "w".into(),
                (1, false) => format!("{abs}*w"),
                (_, true) => format!("w^{k}"),
                (_, false) => format!("{abs}*w^{k}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn root_vars() -> Vec<String> {
    let mut v: Vec<String> = (1..=ROOTS).map(|i| format!("a{i}")).collect();
    v.push("w".into());
    v
}

fn elementary_vars() -> Vec<String> {
    let mut v: Vec<String> = (1..=ROOTS).map(|i| format!("e{i}")).collect();
    v.push("w".into());
    v
}

/// Polynomial in `e1..e5` and `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymFuncExpr {
    pub poly: MultiPoly,
}

/// `e_k(a1..a5)` as a polynomial in the root variables.
pub fn elementary_in_roots(k: usize) -> MultiPoly {
    let vars = root_vars();
    let mut out = MultiPoly::zero(Q, &vars);
    for mask in crate::det::subsets_of_size(ROOTS, k) {
        let e: Vec<u32> = (0..=ROOTS).map(|i| (i < ROOTS && mask >> i & 1 == 1) as u32).collect();
        out.add_term(crate::poly::Monomial(e), Q.one());
    }
    out
}

impl SymFuncExpr {
    /// Expansion back into the root variables.
    pub fn to_roots(&self) -> Result<MultiPoly> {
        let vars = root_vars();
        let mut images: Vec<MultiPoly> = (1..=ROOTS).map(elementary_in_roots).collect();
        images.push(MultiPoly::var(Q, &vars, ROOTS));
        self.poly.compose(&images)
    }

    /// `e_k -> w^k`, `w -> w`, truncated at `w^6`.
    pub fn evaluate(&self) -> ChernSeries {
        let mut coeffs: [BigRational; TOP + 1] = Default::default();
        for (e, c) in self.poly.terms() {
            let deg: usize = (0..ROOTS).map(|k| (k + 1) * e[k] as usize).sum::<usize>() + e[ROOTS] as usize;
            if deg <= TOP {
                coeffs[deg] += c.as_rational().unwrap();
            }
        }
        ChernSeries { coeffs }
    }

    /// Value at explicit roots and `w`.
    pub fn eval_at_roots(&self, roots: &[FieldScalar], w: &FieldScalar) -> Result<FieldScalar> {
        let vars = root_vars();
        let mut point = roots.to_vec();
        point.push(w.clone());
        let mut values: Vec<FieldScalar> = (1..=ROOTS)
            .map(|k| elementary_in_roots(k).eval(&point))
            .collect::<Result<_>>()?;
        values.push(w.clone());
        debug_assert_eq!(vars.len(), values.len());
        self.poly.eval(&values)
    }
}

/// Rewrites a polynomial symmetric in `a1..a5` (coefficients in `Q[w]`) in the
/// elementary symmetric functions by repeatedly cancelling the lex-leading
/// `a`-monomial.
pub fn reduce_symmetric(p: &MultiPoly) -> Result<SymFuncExpr> {
    if p.vars() != root_vars().as_slice() {
        return Err(Error::Argument("expected a polynomial in a1..a5, w".into()));
    }
    let evars = elementary_vars();
    let mut rest = p.clone();
    let mut out = MultiPoly::zero(Q, &evars);
    let elementary: Vec<MultiPoly> = (1..=ROOTS).map(elementary_in_roots).collect();
    while let Some((lead, c)) = rest
        .terms()
        .max_by(|(x, _), (y, _)| x[..ROOTS].cmp(&y[..ROOTS]).then(x[ROOTS].cmp(&y[ROOTS])))
        .map(|(e, c)| (e.to_vec(), c.clone()))
    {
        if lead[..ROOTS].windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invariant("polynomial is not symmetric in the roots".into()));
        }
        // c * w^k * prod e_j^(lambda_j - lambda_{j+1})
        let mut eexp = vec![0u32; ROOTS + 1];
        let mut term = MultiPoly::constant(Q, rest.vars(), c.clone());
        for j in 0..ROOTS {
            let m = lead[j] - if j + 1 < ROOTS { lead[j + 1] } else { 0 };
            eexp[j] = m;
            if m > 0 {
                term = &term * &elementary[j].pow(m);
            }
        }
        eexp[ROOTS] = lead[ROOTS];
        term = &term * &MultiPoly::var(Q, rest.vars(), ROOTS).pow(lead[ROOTS]);
        out.add_term(crate::poly::Monomial(eexp), c);
        rest = &rest - &term;
    }
    Ok(SymFuncExpr { poly: out })
}

/// `prod (1 + r)` over the given roots, truncated at total degree 5.
fn total_chern_of_roots(roots: &[MultiPoly]) -> MultiPoly {
    let vars = root_vars();
    let one = MultiPoly::constant(Q, &vars, Q.one());
    roots
        .iter()
        .fold(one.clone(), |acc, r| (&acc * &(&one + r)).truncate_degree(TOP as u32))
}

fn root_var(i: usize) -> MultiPoly {
    MultiPoly::var(Q, &root_vars(), i)
}

fn w_var() -> MultiPoly {
    MultiPoly::var(Q, &root_vars(), ROOTS)
}

/// Roots `a_i + a_j - w` of `wedge^2 Q (-1)`.
pub fn roots_of_f() -> Vec<MultiPoly> {
    let mut out = Vec::new();
    for i in 0..ROOTS {
        for j in i + 1..ROOTS {
            out.push(&(&root_var(i) + &root_var(j)) - &w_var());
        }
    }
    out
}

/// Roots `-(b_i + b_j + b_k) + 3w` of `Omega^3(3)`, with `-b_i = -(a_i + w)` the
/// roots of `Omega^1 = Q-dual(-1)`.
pub fn roots_of_omega3() -> Vec<MultiPoly> {
    let b: Vec<MultiPoly> = (0..ROOTS).map(|i| &root_var(i) + &w_var()).collect();
    let three_w = w_var().scale(&Q.from_i64(3));
    let mut out = Vec::new();
    for i in 0..ROOTS {
        for j in i + 1..ROOTS {
            for k in j + 1..ROOTS {
                out.push(&three_w - &(&(&b[i] + &b[j]) + &b[k]));
            }
        }
    }
    out
}

/// Total Chern class of a bundle given by formal roots, as a symmetric expression.
pub fn chern_expression(roots: &[MultiPoly]) -> Result<SymFuncExpr> {
    reduce_symmetric(&total_chern_of_roots(roots))
}

/// `c(Q) = 1 / c(O(-1)) = 1 + w + ... + w^5` from the Euler sequence.
pub fn chern_of_quotient_bundle() -> ChernSeries {
    ChernSeries::from_ints(&[1, -1]).inverse().unwrap()
}

/// Published low-degree coefficients of `c(F)`.
pub const CF_LOW: [i64; 4] = [1, -6, 18, -34];

/// `c(wedge^2 Q (-1))`; the `w^0..w^3` coefficients are checked against [`CF_LOW`].
pub fn chern_of_f() -> Result<ChernSeries> {
    let c = chern_expression(&roots_of_f())?.evaluate();
    let low = ChernSeries::from_ints(&CF_LOW);
    if c.coeffs[..4] != low.coeffs[..4] {
        return Err(Error::Verification(format!("c(F) = {c} does not start 1 - 6w + 18w^2 - 34w^3")));
    }
    Ok(c)
}

/// `c(Omega^3(3))`, which must agree with [`chern_of_f`] in every degree.
pub fn chern_of_omega3() -> Result<ChernSeries> {
    let c = chern_expression(&roots_of_omega3())?.evaluate();
    let f = chern_of_f()?;
    if c != f {
        return Err(Error::Verification(format!("c(Omega^3(3)) = {c} differs from c(F) = {f}")));
    }
    Ok(c)
}

/// `2 c3(F) - c1(F) c2(F)`, required to be `40 w^3`.
pub fn class_of_wa() -> Result<ChernSeries> {
    let c = chern_of_f()?;
    let two = BigRational::from_integer(BigInt::from(2));
    let v = &two * c.coeff(3) - c.coeff(1) * c.coeff(2);
    let mut coeffs: [BigRational; TOP + 1] = Default::default();
    coeffs[3] = v.clone();
    if v != BigRational::from_integer(BigInt::from(40)) {
        return Err(Error::Verification(format!("class of W_A is {v} w^3, expected 40 w^3")));
    }
    Ok(ChernSeries { coeffs })
}

/// Expected codimension `i(i+1)/2` of the corank-`i` stratum.
pub fn expected_codimension(i: usize) -> usize {
    i * (i + 1) / 2
}

/// Checks a reduction by evaluating both sides at seeded rational roots.
pub fn verify_reduction_at_random_roots(roots: &[MultiPoly], seed: u64, trials: usize) -> Result<bool> {
    let direct = total_chern_of_roots(roots);
    let expr = reduce_symmetric(&direct)?;
    let mut rng = SplitMix64::new(seed);
    for _ in 0..trials {
        let a: Vec<FieldScalar> = (0..ROOTS)
            .map(|_| {
                let n = rng.scalar(Q);
                let d = rng.nonzero_scalar(Q);
                &n / &d
            })
            .collect();
        let w = rng.scalar(Q);
        let mut point = a.clone();
        point.push(w.clone());
        if direct.eval(&point)? != expr.eval_at_roots(&a, &w)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Report of the `chern` computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChernReport {
    #[serde(rename = "cF")]
    pub c_f: Vec<i64>,
    pub c_omega3: Vec<i64>,
    pub c_q: Vec<i64>,
    pub wa_class: i64,
    #[serde(rename = "match")]
    pub matches: bool,
}

pub fn chern_report() -> Result<ChernReport> {
    let f = chern_of_f()?;
    let o = chern_of_omega3()?;
    let wa = class_of_wa()?;
    let ints = |c: &ChernSeries| {
        c.as_integers()
            .ok_or_else(|| Error::Invariant("non-integral Chern coefficient".into()))
    };
    let wa_class = wa.coeff(3).to_integer().to_i64().unwrap();
    Ok(ChernReport {
        c_f: ints(&f)?,
        c_omega3: ints(&o)?,
        c_q: ints(&chern_of_quotient_bundle())?,
        wa_class,
        matches: wa_class == 40 && f == o,
    })
}
