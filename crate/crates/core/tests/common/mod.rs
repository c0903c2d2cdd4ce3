//! Oracles shared by the integration tests. They use only `Poly` arithmetic
//! and brute force, never the library's normal forms.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use almost::base_ring::{BaseElem, PAdicExponent, RingConfig};
use almost::linalg::PolyMatrix;
use almost::poly::Poly;
use rand::Rng;

/// Determinant by cofactor expansion along the first row.
pub fn det(m: &[Vec<Poly>], p: u32) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(p);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero(p);
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect()).collect();
        let term = &m[0][c] * &det(&minor, p);
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

pub fn rows(m: &PolyMatrix) -> Vec<Vec<Poly>> {
    (0..m.rows()).map(|i| m.row(i)).collect()
}

/// Elements of `R = F_p[s]/(s^k)` as dense coefficient vectors.
fn ring_elems(p: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|v| (0..p).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out
}

fn mul_trunc(p: u32, a: &[u32], b: &[u32], k: usize) -> Vec<u32> {
    let mut out = vec![0; k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            if i + j < k {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
    }
    out
}

/// For the cokernel `C` of `a` over `F_p[s]/(s^k)`: `|{x ∈ C : s^i x = 0}|`
/// as a power of `p`, for `i = 0..=k`, by enumerating all of `R^rows`.
pub fn cokernel_torsion_profile(a: &PolyMatrix, p: u32, k: usize) -> Vec<u32> {
    let (r, c) = (a.rows(), a.cols());
    let entries: Vec<Vec<Vec<u32>>> =
        (0..r).map(|i| (0..c).map(|j| (0..k).map(|e| a.get(i, j).coeff(e as u64)).collect()).collect()).collect();
    let elems = ring_elems(p, k);
    let vectors = |n: usize| -> Vec<Vec<Vec<u32>>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out.into_iter().flat_map(|v| elems.iter().map(move |e| [v.clone(), vec![e.clone()]].concat())).collect();
        }
        out
    };
    let image: HashSet<Vec<Vec<u32>>> = vectors(c)
        .into_iter()
        .map(|x| {
            (0..r)
                .map(|i| {
                    let mut acc = vec![0; k];
                    for j in 0..c {
                        let t = mul_trunc(p, &entries[i][j], &x[j], k);
                        for e in 0..k {
                            acc[e] = (acc[e] + t[e]) % p;
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let log_p = |n: usize| -> u32 {
        let (mut n, mut e) = (n, 0);
        while n > 1 {
            n /= p as usize;
            e += 1;
        }
        e
    };
    let all = vectors(r);
    (0..=k)
        .map(|i| {
            let mut s_i = vec![0; k];
            if i < k {
                s_i[i] = 1;
            }
            let killed = all.iter().filter(|y| image.contains(&y.iter().map(|v| mul_trunc(p, &s_i, v, k)).collect::<Vec<_>>())).count();
            log_p(killed) - log_p(image.len())
        })
        .collect()
}

/// The same profile predicted by invariant factors `s^(v_i)` (zero ↦ `v = k`).
pub fn profile_from_factors(factors: &[Poly], rows: usize, k: usize) -> Vec<u32> {
    let mut vals: Vec<usize> = factors.iter().map(|f| f.valuation().map_or(k, |v| (v as usize).min(k))).collect();
    vals.resize(rows, k);
    (0..=k).map(|i| vals.iter().map(|&v| i.min(v) as u32).sum()).collect()
}

/// A random element with exponents `a/p^e`, `e ≤ 2`, below `2`.
pub fn random_elem(rng: &mut impl Rng, ring: &RingConfig, max_terms: usize) -> BaseElem {
    let p = ring.p;
    let fine = match ring.mode {
        almost::base_ring::Mode::MixedMock { n, .. } => n.min(2),
        _ => 2,
    };
    let terms: Vec<(PAdicExponent, u64)> = (0..rng.gen_range(0..=max_terms))
        .map(|_| {
            let e = rng.gen_range(0..=fine);
            let num = rng.gen_range(0..2 * p.pow(e) as u64);
            (PAdicExponent::new(p, num, e), rng.gen_range(1..ring.coeff_modulus()))
        })
        .collect();
    BaseElem::from_terms(ring, terms).unwrap()
}

/// Product of characteristic-`p` elements by convolution on exponents
/// scaled to level `l`, truncated at `bound` (in level-`l` units).
pub fn convolve(x: &BaseElem, y: &BaseElem, l: u32, bound: Option<u64>) -> BTreeMap<u64, u64> {
    let p = x.ring().p as u64;
    let mut out = BTreeMap::new();
    for (a, c) in x.terms() {
        for (b, d) in y.terms() {
            let e = a.at_level(l).unwrap() + b.at_level(l).unwrap();
            if bound.is_some_and(|bd| e >= bd) {
                continue;
            }
            let v = out.entry(e).or_insert(0);
            *v = (*v + c * d) % p;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

pub fn scaled(x: &BaseElem, l: u32) -> BTreeMap<u64, u64> {
    x.terms().iter().map(|(e, c)| (e.at_level(l).unwrap(), *c)).collect()
}

/// Matrix product by the schoolbook rule, reduced mod `s^k` when given.
pub fn matmul(a: &[Vec<Poly>], b: &[Vec<Poly>], p: u32, k: Option<u64>) -> Vec<Vec<Poly>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = Poly::zero(p);
                    for l in 0..inner {
                        acc = &acc + &(&row[l] * &b[l][j]);
                    }
                    k.map_or(acc.clone(), |k| acc.truncate(k))
                })
                .collect()
        })
        .collect()
}

pub fn reduce(m: &[Vec<Poly>], k: Option<u64>) -> Vec<Vec<Poly>> {
    m.iter().map(|r| r.iter().map(|x| k.map_or(x.clone(), |k| x.truncate(k))).collect()).collect()
}
