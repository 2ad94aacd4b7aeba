//! Real-root counting with Sturm sequences.

use num_traits::{Signed, Zero};

use super::Polynomial;
use crate::Rational;

/// Sturm chain `p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k)`.
pub fn sturm_sequence(p: &Polynomial) -> Vec<Polynomial> {
    let mut seq = vec![p.clone()];
    if p.is_constant() {
        return seq;
    }
    seq.push(p.derivative());
    loop {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            return seq;
        }
        seq.push(-r);
    }
}

fn sign_changes(seq: &[Polynomial], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_zero() {
            continue;
        } else if v.is_positive() {
            1
        } else {
            -1
        };
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Number of distinct real roots of `p` in the half-open interval `(a, b]`.
///
/// `p` must be nonzero and `a < b`.
pub fn count_roots(p: &Polynomial, a: &Rational, b: &Rational) -> usize {
    assert!(!p.is_zero() && a < b);
    let sq = p.squarefree();
    if sq.is_constant() {
        return 0;
    }
    let seq = sturm_sequence(&sq);
    let at_a = sign_changes(&seq, a);
    let at_b = sign_changes(&seq, b);
    // Sign changes at a root a equal those just right of a, and drop by one
    // at a root b, so the difference counts (a, b] exactly.
    at_a - at_b
}

/// Number of distinct real roots of `p` in `[a, b)`.
pub fn count_roots_half_open_right(p: &Polynomial, a: &Rational, b: &Rational) -> usize {
    let sq = p.squarefree();
    let at_a = usize::from(sq.eval(a).is_zero());
    let at_b = usize::from(sq.eval(b).is_zero());
    count_roots(p, a, b) + at_a - at_b
}
