//! Linear algebra over GF(2) on vectors packed into `u64` (length <= 64).

#[inline]
pub fn parity(x: u64) -> u64 {
    (x.count_ones() & 1) as u64
}

/// Reduced row echelon form; returns the nonzero rows with their pivot columns.
pub fn rref(rows: &[u64]) -> Vec<(u64, usize)> {
    let mut basis: Vec<(u64, usize)> = Vec::new();
    for &r in rows {
        let mut r = r;
        for &(b, p) in &basis {
            if r >> p & 1 == 1 {
                r ^= b;
            }
        }
        if r != 0 {
            let p = r.trailing_zeros() as usize;
            for (b, _) in basis.iter_mut() {
                if *b >> p & 1 == 1 {
                    *b ^= r;
                }
            }
            basis.push((r, p));
        }
    }
    basis.sort_by_key(|&(_, p)| p);
    basis
}

pub fn rank(rows: &[u64]) -> usize {
    rref(rows).len()
}

/// Basis of `{x in GF(2)^len : <row, x> = 0 for every row}`.
pub fn nullspace(rows: &[u64], len: usize) -> Vec<u64> {
    let reduced = rref(rows);
    let pivots: u64 = reduced.iter().fold(0, |m, &(_, p)| m | 1 << p);
    (0..len)
        .filter(|&f| pivots >> f & 1 == 0)
        .map(|f| {
            let mut x = 1u64 << f;
            for &(r, p) in &reduced {
                if r >> f & 1 == 1 {
                    x |= 1 << p;
                }
            }
            x
        })
        .collect()
}

/// `basis` combined by the bits of `coeffs`.
#[inline]
pub fn combine(basis: &[u64], coeffs: u64) -> u64 {
    let mut acc = 0;
    let mut c = coeffs;
    while c != 0 {
        let i = c.trailing_zeros() as usize;
        c &= c - 1;
        acc ^= basis[i];
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_is_annihilated_and_has_full_dimension() {
        let rows = [0b1011, 0b0110, 0b1101];
        let ns = nullspace(&rows, 6);
        assert_eq!(ns.len(), 6 - rank(&rows));
        for &x in &ns {
            for &r in &rows {
                assert_eq!(parity(r & x), 0);
            }
        }
        assert_eq!(rank(&ns), ns.len());
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank(&[0b11, 0b01, 0b10]), 2);
        assert_eq!(rank(&[0, 0]), 0);
    }
}
