//! Combinatorial substrate for the closed m-loop formulas: cyclic orbits of
//! almost primitive tuples, the Moebius function and central binomial
//! coefficients. Everything here is enumerated exhaustively; this module is
//! an oracle, so clarity beats speed.

use num_bigint::BigInt;

/// A C_d-orbit of tuples, identified by its lexicographically minimal
/// representative.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclicOrbit {
    /// Lexicographically minimal element of the orbit.
    pub representative: Vec<u32>,
    /// Number of distinct cyclic rotations; divides the tuple length.
    pub size: usize,
    /// min over the orbit of deg(a) = sum_i (d - i) a_i, 1-indexed.
    pub min_degree: u64,
}

fn degree(a: &[u32]) -> u64 {
    let d = a.len() as u64;
    a.iter()
        .enumerate()
        .map(|(i, &x)| (d - (i as u64 + 1)) * x as u64)
        .sum()
}

fn rotations(a: &[u32]) -> impl Iterator<Item = Vec<u32>> + '_ {
    (0..a.len()).map(move |r| {
        let mut out = Vec::with_capacity(a.len());
        out.extend_from_slice(&a[r..]);
        out.extend_from_slice(&a[..r]);
        out
    })
}

/// Orbit size = number of distinct rotations = the minimal period.
fn orbit_size(a: &[u32]) -> usize {
    let mut seen = std::collections::BTreeSet::new();
    for r in rotations(a) {
        seen.insert(r);
    }
    seen.len()
}

fn is_lex_min(a: &[u32]) -> bool {
    rotations(a).all(|r| a <= r.as_slice())
}

/// Almost primitive: the stabilizer is trivial (orbit size d), or m is even,
/// d = 2 mod 4, and the tuple is a doubled primitive tuple of length d/2
/// (equivalently, the minimal period is exactly d/2).
fn is_almost_primitive(a: &[u32], m: u32) -> bool {
    let d = a.len();
    let size = orbit_size(a);
    size == d || (m.is_multiple_of(2) && d % 4 == 2 && size == d / 2)
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; parts];
    fn rec(cur: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for x in 0..=left {
            cur[i] = x;
            rec(cur, i + 1, left - x, out);
        }
    }
    rec(&mut cur, 0, total, &mut out);
    out
}

/// All C_d-orbits of almost primitive tuples in
/// U_d = { a in N^d : a_1 + ... + a_d = (m-1) d }, with min-degrees.
pub fn almost_primitive_orbits(m: u32, d: u32) -> Vec<CyclicOrbit> {
    assert!(d >= 1);
    let total = (m as i64 - 1).max(0) as u32 * d;
    if m == 0 {
        // U_d would need a negative sum; empty for d >= 1
        return Vec::new();
    }
    let mut out = Vec::new();
    for a in compositions(total, d as usize) {
        if !is_lex_min(&a) || !is_almost_primitive(&a, m) {
            continue;
        }
        let min_degree = rotations(&a).map(|r| degree(&r)).min().unwrap();
        out.push(CyclicOrbit {
            size: orbit_size(&a),
            representative: a,
            min_degree,
        });
    }
    out
}

/// Size of the full set U_d, for sanity checks.
pub fn u_set_size(m: u32, d: u32) -> usize {
    if m == 0 {
        return 0;
    }
    compositions((m - 1) * d, d as usize).len()
}

/// Number of almost primitive tuples (not orbits).
pub fn almost_primitive_count(m: u32, d: u32) -> usize {
    if m == 0 {
        return 0;
    }
    compositions((m - 1) * d, d as usize)
        .iter()
        .filter(|a| is_almost_primitive(a, m))
        .count()
}

/// The Moebius function.
pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1);
    let mut n = n;
    let mut factors = 0;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            factors += 1;
        }
        p += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The central binomial coefficient C(2n, n).
pub fn central_binomial(n: u64) -> BigInt {
    let mut acc = BigInt::from(1);
    for k in 1..=n {
        acc = acc * BigInt::from(n + k) / BigInt::from(k);
    }
    acc
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|k| n.is_multiple_of(*k)).collect();
    out.sort_unstable();
    out
}
