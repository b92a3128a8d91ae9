//! Real-root isolation for rational polynomials: Sturm chains, bisection
//! refinement, and recovery of exact rational roots from isolating intervals.

use super::poly::Poly;
use super::{rat_sign, Rat, Ring};
use num_traits::Signed;

/// Sturm chain of the square-free part. Sign-variation counts therefore see
/// each real root once regardless of multiplicity.
pub struct SturmChain {
    pub chain: Vec<Poly<Rat>>,
}

impl SturmChain {
    pub fn new(p: &Poly<Rat>) -> SturmChain {
        let p0 = p.square_free_part();
        let mut chain = vec![p0.clone()];
        if p0.deg() == Some(0) {
            return SturmChain { chain };
        }
        chain.push(p0.derivative());
        loop {
            let n = chain.len();
            let (_, r) = chain[n - 2].divmod(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(-r);
        }
        SturmChain { chain }
    }

    fn variations(&self, x: &Rat) -> usize {
        let mut count = 0;
        let mut last = 0i32;
        for p in &self.chain {
            let s = rat_sign(&p.eval(x));
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in the half-open interval (a, b].
    pub fn count_in(&self, a: &Rat, b: &Rat) -> usize {
        debug_assert!(a <= b);
        self.variations(a) - self.variations(b)
    }
}

/// 1 + max |a_i / a_n|; every real root lies strictly inside (-bound, bound).
pub fn cauchy_bound(p: &Poly<Rat>) -> Rat {
    let lc = p.lc();
    assert!(!lc.is_zero(), "root bound of zero polynomial");
    let mut m = Rat::from_i64(0);
    for k in &p.c {
        let a = (k.clone() / lc.clone()).abs();
        if a > m {
            m = a;
        }
    }
    m + Rat::from_i64(1)
}

/// Disjoint intervals (a, b], each containing exactly one distinct real root,
/// ordered left to right and jointly covering all of them.
pub fn isolate_real_roots(p: &Poly<Rat>) -> Vec<(Rat, Rat)> {
    let chain = SturmChain::new(p);
    if chain.chain[0].deg() == Some(0) {
        return vec![];
    }
    let b = cauchy_bound(&chain.chain[0]);
    let mut out = vec![];
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        match chain.count_in(&lo, &hi) {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (lo.clone() + hi.clone()) / Rat::from_i64(2);
                // Right half first so the left half is popped first: output
                // stays sorted.
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out
}

/// Shrinks an isolating interval (a, b] for `chain` until b - a <= width.
pub fn refine(chain: &SturmChain, iv: &(Rat, Rat), width: &Rat) -> (Rat, Rat) {
    let (mut lo, mut hi) = iv.clone();
    debug_assert_eq!(chain.count_in(&lo, &hi), 1);
    while hi.clone() - lo.clone() > *width {
        let mid = (lo.clone() + hi.clone()) / Rat::from_i64(2);
        if chain.count_in(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Smallest-denominator rational in the closed interval [lo, hi]
/// (Stern-Brocot descent). Ties in denominator resolve toward lo.
pub fn simplest_in(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo <= hi);
    if rat_sign(lo) <= 0 && rat_sign(hi) >= 0 {
        return Rat::from_i64(0);
    }
    if rat_sign(hi) < 0 {
        return -simplest_in(&-hi.clone(), &-lo.clone());
    }
    // 0 < lo <= hi
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    if hi.floor() > fl || &hi.floor() == hi {
        return fl + Rat::from_i64(1);
    }
    // Same integer part, neither endpoint integral: recurse on reciprocals of
    // the fractional parts (order swaps).
    let one = Rat::from_i64(1);
    let inner = simplest_in(
        &(one.clone() / (hi.clone() - fl.clone())),
        &(one.clone() / (lo.clone() - fl.clone())),
    );
    fl + one / inner
}

/// Hunts for an exact rational root inside an isolating interval by testing
/// the simplest candidate and splitting on it. Returns None when the root's
/// denominator exceeds `denom_bits` binary digits (taken as irrational here).
pub fn exact_root_in(p: &Poly<Rat>, iv: &(Rat, Rat), denom_bits: u64) -> Option<Rat> {
    let chain = SturmChain::new(p);
    let sf = &chain.chain[0];
    let (mut lo, mut hi) = iv.clone();
    debug_assert_eq!(chain.count_in(&lo, &hi), 1);
    // (lo, hi] semantics: the right endpoint itself may be the root.
    if sf.eval(&hi).is_zero() {
        return Some(hi);
    }
    loop {
        let r = simplest_in(&lo, &hi);
        // The root lives in the half-open (lo, hi]; the simplest candidate
        // may land on the excluded endpoint when a neighboring root sits
        // exactly there.
        if r > lo && sf.eval(&r).is_zero() {
            return Some(r);
        }
        if r.denom().bits() > denom_bits {
            return None;
        }
        if r > lo && r < hi {
            // r is not the root, so it splits (lo, hi] cleanly.
            if chain.count_in(&lo, &r) == 1 {
                hi = r;
            } else {
                lo = r;
            }
        } else {
            // The simplest candidate sits on an endpoint; bisect instead so
            // the interval strictly shrinks.
            let mid = (lo.clone() + hi.clone()) / Rat::from_i64(2);
            if sf.eval(&mid).is_zero() {
                return Some(mid);
            }
            if chain.count_in(&lo, &mid) == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if lo.denom().bits() > denom_bits && hi.denom().bits() > denom_bits {
            return None;
        }
    }
}

/// Multiplicity of a known root by repeated exact division.
pub fn root_multiplicity(p: &Poly<Rat>, r: &Rat) -> usize {
    let factor = Poly::linear_root(r.clone());
    let mut m = 0;
    let mut q = p.clone();
    loop {
        let (qq, rem) = q.divmod(&factor);
        if !rem.is_zero() {
            return m;
        }
        m += 1;
        q = qq;
        if q.is_zero() || q.deg() == Some(0) {
            return m;
        }
    }
}

/// All roots with multiplicity, when every root of `p` is real and rational;
/// None as soon as one is not. Used for exact spectra of rational matrices.
pub fn all_rational_roots(p: &Poly<Rat>) -> Option<Vec<(Rat, usize)>> {
    let deg = p.deg().expect("roots of zero polynomial");
    if deg == 0 {
        return Some(vec![]);
    }
    let mut out = vec![];
    let mut total = 0;
    for iv in isolate_real_roots(p) {
        let r = exact_root_in(p, &iv, 256)?;
        let m = root_multiplicity(p, &r);
        total += m;
        out.push((r, m));
    }
    // Complex pairs (or a missed real root) leave total < deg.
    if total == deg {
        Some(out)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_rat, rat};

    fn p(v: &[i64]) -> Poly<Rat> {
        Poly::from_coeffs(v.iter().map(|&n| Rat::from_i64(n)).collect())
    }

    fn pr(v: &[(i64, i64)]) -> Poly<Rat> {
        Poly::from_coeffs(v.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn sqrt2_two_roots_no_rational() {
        let q = p(&[-2, 0, 1]);
        let ivs = isolate_real_roots(&q);
        assert_eq!(ivs.len(), 2);
        for iv in &ivs {
            assert_eq!(exact_root_in(&q, iv, 64), None);
        }
        let chain = SturmChain::new(&q);
        let (lo, hi) = refine(&chain, &ivs[1], &rat(1, 1_000_000_000));
        let s = parse_rat("1.41421356237309504880168872420969808").unwrap();
        assert!(lo < s && s <= hi);
    }

    #[test]
    fn root_at_zero_does_not_shadow_its_neighbor() {
        // x^2 (x - 2) (x + 1): the interval isolating 2 has 0 as its open
        // left endpoint, and the simplest rational in [0, 3] is 0 itself.
        let p = Poly::from_coeffs(vec![rat(0, 1), rat(0, 1), rat(-2, 1), rat(-1, 1), rat(1, 1)]);
        let roots = all_rational_roots(&p).expect("all roots are rational");
        assert_eq!(
            roots,
            vec![(rat(-1, 1), 1), (rat(0, 1), 2), (rat(2, 1), 1)]
        );
    }

    #[test]
    fn multiplicities_seen_once() {
        // (x-1)^3 (x+2)
        let q = p(&[-1, 1]) * p(&[-1, 1]) * p(&[-1, 1]) * p(&[2, 1]);
        let ivs = isolate_real_roots(&q);
        assert_eq!(ivs.len(), 2);
        let roots = all_rational_roots(&q).unwrap();
        assert_eq!(roots, vec![(rat(-2, 1), 1), (rat(1, 1), 3)]);
    }

    #[test]
    fn simplest_in_examples() {
        assert_eq!(simplest_in(&rat(-1, 3), &rat(1, 7)), rat(0, 1));
        assert_eq!(simplest_in(&rat(5, 2), &rat(7, 2)), rat(3, 1));
        assert_eq!(simplest_in(&rat(3, 7), &rat(4, 7)), rat(1, 2));
        assert_eq!(simplest_in(&rat(-7, 2), &rat(-5, 2)), rat(-3, 1));
        // pi-ish interval snaps to 22/7 before 355/113 shows up
        let lo = parse_rat("3.1415").unwrap();
        let hi = parse_rat("3.1429").unwrap();
        assert_eq!(simplest_in(&lo, &hi), rat(22, 7));
    }

    #[test]
    fn collinear_quintic_equal_masses() {
        // Ordering quintic at three equal masses: unique positive root is 1.
        let q = pr(&[(-2, 3), (-5, 3), (-4, 3), (4, 3), (5, 3), (2, 3)]);
        let mut pos: Vec<_> = isolate_real_roots(&q)
            .into_iter()
            .filter(|(_, hi)| rat_sign(hi) > 0)
            .collect();
        pos.retain(|iv| {
            let chain = SturmChain::new(&q);
            chain.count_in(&rat(0, 1).max(iv.0.clone()), &iv.1) == 1
        });
        assert_eq!(pos.len(), 1);
        assert_eq!(exact_root_in(&q, &pos[0], 64), Some(rat(1, 1)));
        assert_eq!(root_multiplicity(&q, &rat(1, 1)), 1);
    }

    #[test]
    fn collinear_quintic_unequal_masses() {
        // Masses (1/5, 3/10, 1/2): the positive root is irrational; pin its
        // refined interval against an independently computed 36-digit value.
        let q = pr(&[(-1, 2), (-6, 5), (-9, 10), (9, 5), (21, 10), (4, 5)]);
        let ivs: Vec<_> = isolate_real_roots(&q)
            .into_iter()
            .filter(|(_, hi)| rat_sign(hi) > 0)
            .collect();
        let chain = SturmChain::new(&q);
        let iv = ivs
            .iter()
            .find(|iv| chain.count_in(&rat(0, 1).max(iv.0.clone()), &iv.1) == 1)
            .unwrap();
        assert_eq!(exact_root_in(&q, iv, 64), None);
        let width = rat(1, 1) / parse_rat("1e30").unwrap();
        let (lo, hi) = refine(&chain, iv, &width);
        let reference =
            parse_rat("0.798826767013125404272108693415418906").unwrap();
        assert!(lo < reference && reference <= hi);
    }
}
