//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use codepth::ring::{Ring, RingRef};
use codepth::{Field, Polynomial, Rationals};

pub type Q = Rationals;

pub const VARS: [&str; 4] = ["x", "y", "z", "w"];

pub fn names() -> Vec<String> {
    VARS.iter().map(|s| s.to_string()).collect()
}

pub fn fine4<F: Field>(field: F) -> RingRef<F> {
    Ring::new(field, names(), codepth::grading::Grading::fine(4)).unwrap()
}

pub fn parse_all<F: Field>(ring: &RingRef<F>, srcs: &[&str]) -> Vec<Polynomial<F>> {
    srcs.iter().map(|s| ring.parse(s).unwrap()).collect()
}

pub const TC: [&str; 3] = ["x*z - y^2", "y*w - z^2", "x*w - y*z"];

/// Ring with the twisted cubic's torus grading, and the cubic's generators.
pub fn twisted_cubic<F: Field>(field: F) -> (RingRef<F>, Vec<Polynomial<F>>) {
    let raw: Vec<Polynomial<F>> = TC
        .iter()
        .map(|s| codepth::poly::parse_polynomial(&field, &names(), s).unwrap())
        .collect();
    let ring = Ring::detect(field, names(), &raw).unwrap();
    let gens = parse_all(&ring, &TC);
    (ring, gens)
}

/// Rank of an integer matrix modulo a prime, by plain Gaussian elimination.
pub fn rank_mod_p(rows: &[Vec<i64>], p: i64) -> usize {
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|v| v.rem_euclid(p)).collect()).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][c], p - 2, p);
        for v in m[rank].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..ncols {
                    m[r][k] = (m[r][k] - f * m[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// `dim H^i_I(A)_a` for a monomial ideal, straight from the combinatorics of
/// the Čech complex: the term of a generator subset `S` is one-dimensional in
/// degree `a` exactly when the union of the supports of `S` contains the
/// negative support of `a` (or `S` is empty and `a >= 0`).
pub fn monomial_lc_oracle(supports: &[Vec<usize>], a: &[i64], i: usize) -> usize {
    let n = supports.len();
    let neg: Vec<usize> = (0..a.len()).filter(|&v| a[v] < 0).collect();
    let alive = |mask: usize| -> bool {
        let mut cover = vec![false; a.len()];
        for (k, s) in supports.iter().enumerate() {
            if mask >> k & 1 == 1 {
                for &v in s {
                    cover[v] = true;
                }
            }
        }
        neg.iter().all(|&v| cover[v])
    };
    let faces = |p: usize| -> Vec<usize> {
        (0..1usize << n).filter(|m| m.count_ones() as usize == p && alive(*m)).collect()
    };
    // coboundary C^p -> C^{p+1}, sign by position of the inserted generator
    let delta = |p: usize| -> Vec<Vec<i64>> {
        let src = faces(p);
        let dst = faces(p + 1);
        dst.iter()
            .map(|&t| {
                src.iter()
                    .map(|&s| {
                        if s & t != s {
                            return 0;
                        }
                        let added = (t & !s).trailing_zeros() as usize;
                        let below = (s & ((1 << added) - 1)).count_ones();
                        if below % 2 == 0 {
                            1
                        } else {
                            -1
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let dim_i = faces(i).len();
    if dim_i == 0 {
        return 0;
    }
    let out_rank = if i < n { rank_mod_p(&delta(i), 1_000_003) } else { 0 };
    let in_rank = if i > 0 { rank_mod_p(&delta(i - 1), 1_000_003) } else { 0 };
    dim_i - out_rank - in_rank
}

/// Monomial ideal supports, from squarefree generator masks over 4 variables.
pub fn supports_of(masks: &[u8]) -> Vec<Vec<usize>> {
    masks.iter().map(|m| (0..4).filter(|v| m >> v & 1 == 1).collect()).collect()
}

pub fn monomial_from_support(s: &[usize]) -> String {
    s.iter().map(|&v| VARS[v]).collect::<Vec<_>>().join("*")
}
