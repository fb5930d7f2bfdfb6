//! Conway polynomials for GF(p^n), p in {2, 3, 5}, n <= 12.
//!
//! Coefficients are listed in ascending degree; every entry is monic.

const TABLE: &[(u64, usize, &[u64])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (2, 9, &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1]),
    (2, 10, &[1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1]),
    (2, 11, &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 12, &[1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (3, 6, &[2, 2, 1, 0, 2, 0, 1]),
    (3, 7, &[1, 0, 2, 0, 0, 0, 0, 1]),
    (3, 8, &[2, 2, 2, 0, 1, 2, 0, 0, 1]),
    (3, 9, &[1, 1, 2, 2, 0, 0, 0, 0, 0, 1]),
    (3, 10, &[2, 1, 0, 0, 2, 2, 2, 0, 0, 0, 1]),
    (3, 11, &[1, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (3, 12, &[2, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 0, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (5, 5, &[3, 4, 0, 0, 0, 1]),
    (5, 6, &[2, 0, 1, 4, 1, 0, 1]),
    (5, 7, &[3, 3, 0, 0, 0, 0, 0, 1]),
    (5, 8, &[2, 4, 3, 0, 1, 0, 0, 0, 1]),
    (5, 9, &[3, 1, 0, 2, 0, 0, 0, 0, 0, 1]),
    (5, 10, &[2, 1, 4, 2, 3, 3, 0, 0, 0, 0, 1]),
    (5, 11, &[3, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (5, 12, &[2, 2, 3, 4, 4, 0, 1, 1, 0, 0, 0, 0, 1]),
];

/// Built-in modulus for GF(p^n) over F_p, when tabulated.
pub(crate) fn conway_polynomial(p: u64, n: usize) -> Option<&'static [u64]> {
    TABLE
        .iter()
        .find(|(tp, tn, _)| *tp == p && *tn == n)
        .map(|(_, _, c)| *c)
}

#[cfg(test)]
pub(crate) fn table() -> impl Iterator<Item = (u64, usize, &'static [u64])> {
    TABLE.iter().map(|(p, n, c)| (*p, *n, *c))
}
