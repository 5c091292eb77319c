//! Conway polynomials for the non-prime fields of order at most 64.
//!
//! Coefficients are listed constant term first. Prime fields use `x - a`
//! with `a` the least primitive root, computed on demand.

const TABLE: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 2, &[3, 6, 1]),
];

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest generator of the multiplicative group of `Z_p`.
pub(crate) fn least_primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let p64 = u64::from(p);
    (2..p)
        .find(|&a| {
            let mut x = 1u64;
            for k in 1..p64 {
                x = x * u64::from(a) % p64;
                if x == 1 {
                    return k == p64 - 1;
                }
            }
            false
        })
        .expect("every prime has a primitive root")
}

/// Conway polynomial for `GF(p^n)`, or `None` when it is not tabulated.
pub fn conway_polynomial(p: u32, n: u32) -> Option<Vec<u32>> {
    if n == 1 {
        if !is_prime(u64::from(p)) {
            return None;
        }
        let a = least_primitive_root(p);
        return Some(vec![(p - a) % p, 1]);
    }
    TABLE.iter().find(|(tp, tn, _)| *tp == p && *tn == n).map(|(_, _, c)| c.to_vec())
}
