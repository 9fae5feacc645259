//! Points of `P^n(F_p)` and `Gr(k, n)(F_p)` in a fixed deterministic order.

use crate::error::Result;
use crate::modp::check_prime;

/// `(p^(n+1) - 1) / (p - 1)`, the number of points of `P^n(F_p)`.
pub fn projective_count(n: u32, p: u64) -> u64 {
    (0..=n).map(|i| p.pow(i)).sum()
}

/// Gaussian binomial `[n choose k]_p`, the number of points of `Gr(k, n)(F_p)`.
pub fn gaussian_binomial(n: u32, k: u32, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (p as u128).pow(n - i) - 1;
        den *= (p as u128).pow(i + 1) - 1;
    }
    (num / den) as u64
}

/// Points of `P^(dim-1)(F_p)`, each normalized so its first nonzero coordinate is 1,
/// in lex order of coordinates.
pub fn projective_points(dim: usize, p: u64) -> Result<Vec<Vec<u64>>> {
    check_prime(p)?;
    let mut out = Vec::new();
    for lead in 0..dim {
        let free = dim - lead - 1;
        let total = p.pow(free as u32);
        for code in 0..total {
            let mut v = vec![0; dim];
            v[lead] = 1;
            let mut c = code;
            for j in (lead + 1..dim).rev() {
                v[j] = c % p;
                c /= p;
            }
            out.push(v);
        }
    }
    out.sort();
    Ok(out)
}

/// Pivot sets of the Schubert cells of `Gr(k, n)`, in a fixed order.
pub fn grassmannian_cells(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut cells: Vec<Vec<usize>> = crate::det::subsets_of_size(n, k).into_iter().map(mask_to_vec).collect();
    cells.sort();
    cells
}

/// Calls `f` on every reduced row echelon `k x n` matrix over `F_p` with the
/// given pivot columns, ordered lexicographically by free entries.
pub fn for_each_point_in_cell(pivots: &[usize], n: usize, p: u64, mut f: impl FnMut(&[Vec<u64>])) {
    let k = pivots.len();
    // free slots: (row r, column c) with c > pivots[r] and c not a pivot
    let slots: Vec<(usize, usize)> = (0..k)
        .flat_map(|r| (pivots[r] + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
        .collect();
    let total = p.pow(slots.len() as u32);
    let mut m = vec![vec![0u64; n]; k];
    for (r, &c) in pivots.iter().enumerate() {
        m[r][c] = 1;
    }
    for code in 0..total {
        let mut c = code;
        for &(r, col) in slots.iter().rev() {
            m[r][col] = c % p;
            c /= p;
        }
        f(&m);
    }
}

/// Calls `f` on the reduced row echelon representative of every point of
/// `Gr(k, n)(F_p)`, cell by cell.
pub fn for_each_grassmannian_point(k: usize, n: usize, p: u64, mut f: impl FnMut(&[Vec<u64>])) -> Result<()> {
    check_prime(p)?;
    for pivots in grassmannian_cells(k, n) {
        for_each_point_in_cell(&pivots, n, p, &mut f);
    }
    Ok(())
}

fn mask_to_vec(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}
