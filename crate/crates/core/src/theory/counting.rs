//! Counting identities for the excluded hyperplane configurations and the
//! constrained trinomial maximizer.

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Largest `M` accepted by [`count_w1_bruteforce`].
pub const W1_BRUTEFORCE_MAX: u64 = 200;

fn overflow() -> Error {
    Error::Range("count overflows 128-bit integers".into())
}

/// Closed form for the number of 5-part compositions of `M` whose first part
/// is at least 9 times the sum of the next two:
/// `(f+1)(f+2)(150 f^2 - 10(4M+1) f + 3(M^2+3M+2)) / 12`, `f = floor(M/10)`.
pub fn count_w1(m: u64) -> Result<u128> {
    let big = i128::from(m);
    let f = big / 10;
    let inner = 150i128
        .checked_mul(f)
        .and_then(|v| v.checked_mul(f))
        .and_then(|v| v.checked_sub(10 * (4 * big + 1) * f))
        .and_then(|v| v.checked_add(3 * (big.checked_mul(big)? + 3 * big + 2)))
        .ok_or_else(overflow)?;
    let total = (f + 1)
        .checked_mul(f + 2)
        .and_then(|v| v.checked_mul(inner))
        .ok_or_else(overflow)?;
    debug_assert_eq!(total % 12, 0);
    u128::try_from(total / 12).map_err(|_| overflow())
}

/// Counts the same compositions as [`count_w1`] by enumeration.
pub fn count_w1_bruteforce(m: u64) -> Result<u128> {
    if m > W1_BRUTEFORCE_MAX {
        return Err(Error::Range(format!(
            "brute-force count limited to M <= {W1_BRUTEFORCE_MAX}, got {m}"
        )));
    }
    let mut count = 0u128;
    for p1 in 0..=m {
        for p2 in 0..=m - p1 {
            for p3 in 0..=m - p1 - p2 {
                for _p4 in 0..=m - p1 - p2 - p3 {
                    if p1 >= 9 * (p2 + p3) {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

/// The printed closed form for the number of summation terms,
/// `(f+1)(100 f^2 + (5 - 30m) f + 3(m^2+3m+2)) / 6`, `f = floor(m/10)`.
pub fn count_w2_formula(m: u64) -> Result<u128> {
    let big = i128::from(m);
    let f = big / 10;
    let inner = 100i128
        .checked_mul(f)
        .and_then(|v| v.checked_mul(f))
        .and_then(|v| v.checked_add((5 - 30 * big) * f))
        .and_then(|v| v.checked_add(3 * (big.checked_mul(big)? + 3 * big + 2)))
        .ok_or_else(overflow)?;
    let total = (f + 1).checked_mul(inner).ok_or_else(overflow)?;
    u128::try_from(total / 6).map_err(|_| overflow())
}

/// Largest `m` accepted by [`count_terms_equivalent`].
pub const TERMS_EQUIVALENT_MAX: u64 = 1_000_000;

/// Number of triples `(j', k, r)` with `j' + k + r = m` and `k >= 9 j'`.
pub fn count_terms_equivalent(m: u64) -> Result<u128> {
    if m > TERMS_EQUIVALENT_MAX {
        return Err(Error::Range(format!(
            "direct count limited to m <= {TERMS_EQUIVALENT_MAX}, got {m}"
        )));
    }
    let mut count = 0u128;
    for j in 0..=m {
        if 10 * j > m {
            break;
        }
        // k ranges over 9j..=m-j and fixes r
        count += u128::from(m - j - 9 * j + 1);
    }
    Ok(count)
}

/// `(a, b, c)` with `a + b + c = m` and `a >= 9b` maximizing
/// `m! / (a! b! c!)`; ties go to the lexicographically smallest triple.
pub fn max_trinomial_constrained(m: usize) -> (usize, usize, usize) {
    let mut fact = vec![BigUint::from(1u32)];
    for n in 1..=m {
        let next = &fact[n - 1] * BigUint::from(n);
        fact.push(next);
    }
    // maximizing the coefficient is minimizing a! b! c!
    let mut best: Option<(BigUint, (usize, usize, usize))> = None;
    for a in 0..=m {
        for b in 0..=(m - a).min(a / 9) {
            let c = m - a - b;
            let denom = &fact[a] * &fact[b] * &fact[c];
            if best.as_ref().is_none_or(|(d, _)| denom < *d) {
                best = Some((denom, (a, b, c)));
            }
        }
    }
    best.expect("m >= 0 always has a = m").1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w1_examples() {
        for (m, want) in [(0, 1), (9, 55), (10, 68)] {
            assert_eq!(count_w1(m).unwrap(), want);
            assert_eq!(count_w1_bruteforce(m).unwrap(), want);
        }
        assert!(count_w1_bruteforce(201).is_err());
    }

    #[test]
    fn w1_formula_matches_enumeration() {
        for m in 0..=60 {
            assert_eq!(
                count_w1(m).unwrap(),
                count_w1_bruteforce(m).unwrap(),
                "M = {m}"
            );
        }
    }

    #[test]
    fn w2_and_direct_count() {
        assert_eq!(count_w2_formula(10).unwrap(), 67);
        assert_eq!(count_w2_formula(0).unwrap(), 1);
        assert_eq!(count_terms_equivalent(10).unwrap(), 12);
        assert_eq!(count_terms_equivalent(9).unwrap(), 10);
        assert_eq!(count_terms_equivalent(0).unwrap(), 1);
        assert!(count_terms_equivalent(TERMS_EQUIVALENT_MAX + 1).is_err());
    }

    #[test]
    fn direct_count_by_triple_loop() {
        for m in 0..60u64 {
            let mut n = 0u128;
            for j in 0..=m {
                for k in 0..=m - j {
                    if k >= 9 * j {
                        n += 1;
                    }
                }
            }
            assert_eq!(count_terms_equivalent(m).unwrap(), n);
        }
    }

    #[test]
    fn trinomial_examples() {
        assert_eq!(max_trinomial_constrained(19), (9, 1, 9));
        assert_eq!(max_trinomial_constrained(38), (18, 2, 18));
        assert_eq!(max_trinomial_constrained(0), (0, 0, 0));
    }
}
