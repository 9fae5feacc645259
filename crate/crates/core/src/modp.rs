//! Word-sized linear algebra modulo an arbitrary prime, including 2 and 3.
//!
//! [`crate::scalar::Field`] only admits primes `p >= 5`; point enumerations
//! and reduction certificates also need the small primes, and run hot enough
//! that plain `u64` residues are worth it.

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::{is_prime, FieldScalar};

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) && p < (1 << 31) {
        Ok(())
    } else {
        Err(Error::Argument(format!("{p} is not a prime below 2^31")))
    }
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// Residue of a scalar modulo `p`. Rationals must have denominators prime to `p`;
/// prime-field scalars must already live in `F_p`.
pub fn residue(x: &FieldScalar, p: u64) -> Result<u64> {
    match x {
        FieldScalar::Prime { residue, modulus } if *modulus == p => Ok(*residue),
        FieldScalar::Prime { modulus, .. } => Err(Error::FieldMismatch(format!(
            "cannot reduce an F_{modulus} scalar modulo {p}"
        ))),
        FieldScalar::Rational(q) => {
            let m = num_bigint::BigInt::from(p);
            let n = ((q.numer() % &m) + &m) % &m;
            let d = ((q.denom() % &m) + &m) % &m;
            let n: u64 = n.try_into().unwrap();
            let d: u64 = d.try_into().unwrap();
            if d == 0 {
                return Err(Error::BadPrime { p });
            }
            Ok(n * inv_mod(d, p) % p)
        }
    }
}

pub fn reduce_matrix(m: &ExactMatrix, p: u64) -> Result<Vec<Vec<u64>>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|x| residue(x, p)).collect())
        .collect()
}

/// In-place reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in c..cols {
                    let t = f * m[r][j] % p;
                    m[i][j] = (m[i][j] + p - t) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<u64>], p: u64) -> usize {
    let mut w = m.to_vec();
    rref(&mut w, p).len()
}

/// Basis of the right kernel.
pub fn kernel(m: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut w = m.to_vec();
    let pivots = rref(&mut w, p);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - w[r][free]) % p;
        }
        out.push(v);
    }
    out
}

pub fn dot(a: &[u64], b: &[u64], p: u64) -> u64 {
    a.iter().zip(b).fold(0, |acc, (x, y)| (acc + x * y) % p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    #[test]
    fn inverse_and_residues() {
        for p in [2, 3, 5, 101] {
            for a in 1..p {
                assert_eq!(a * inv_mod(a, p) % p, 1);
            }
        }
        let q = Field::Rational.parse_scalar("-1/2").unwrap();
        assert_eq!(residue(&q, 3).unwrap(), 1);
        let bad = Field::Rational.parse_scalar("1/3").unwrap();
        assert_eq!(residue(&bad, 3), Err(Error::BadPrime { p: 3 }));
        assert!(check_prime(4).is_err());
        assert!(check_prime(2).is_ok());
    }

    #[test]
    fn rank_and_kernel_mod_3() {
        let m = vec![vec![1, 2, 0], vec![2, 1, 0]];
        // second row is twice the first mod 3
        assert_eq!(rank(&m, 3), 1);
        let k = kernel(&m, 3, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(dot(&m[0], v, 3), 0);
        }
        assert_eq!(rank(&m, 5), 2);
    }
}
