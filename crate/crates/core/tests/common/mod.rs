//! Reference computations written from first principles, sharing no code with
//! the library: trial division, Hensel-style brute force for local isotropy,
//! textbook Gaussian elimination and closed-form discriminants.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use qtransfer::{FormInvariants, Place, QuadraticFormQ};

/// The real place, in oracle place sets.
pub const INF: i64 = 0;

pub fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn prime_factors(n: i64) -> Vec<i64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Signed squarefree part.
pub fn sqfree(n: i128) -> i64 {
    assert!(n != 0);
    let mut m = n.abs();
    let mut out: i128 = 1;
    let mut d: i128 = 2;
    while d * d <= m {
        let mut e = 0;
        while m % d == 0 {
            m /= d;
            e += 1;
        }
        if e % 2 == 1 {
            out *= d;
        }
        d += 1;
    }
    out *= m;
    (out * n.signum()) as i64
}

pub fn class_mul(a: i64, b: i64) -> i64 {
    sqfree(a as i128 * b as i128)
}

pub fn rat_class(r: &BigRational) -> i64 {
    let v = r.numer() * r.denom();
    sqfree(v.to_i128().expect("oracle inputs stay small"))
}

fn valuation(mut n: i64, p: i64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Whether a nonzero integer is a square in Q_p (p = INF for the reals).
pub fn is_local_square(n: i64, p: i64) -> bool {
    if p == INF {
        return n > 0;
    }
    if valuation(n, p) % 2 == 1 {
        return false;
    }
    let mut u = n;
    while u % p == 0 {
        u /= p;
    }
    if p == 2 {
        u.rem_euclid(8) == 1
    } else {
        (1..p).any(|x| (x * x - u).rem_euclid(p) == 0)
    }
}

/// Isotropy of c₀x² + c₁y² + c₂z² over Q_p by exhaustive search.
///
/// Coefficients are first scaled so at most one is divisible by p (and only
/// once). A primitive zero then has a unit coordinate on a unit coefficient,
/// where the gradient has valuation v(2), so a zero mod p (mod 8 for p = 2)
/// lifts by Hensel's lemma, and any Q_p zero reduces to one.
pub fn isotropic3(c: [i64; 3], p: i64) -> bool {
    if p == INF {
        return !(c.iter().all(|&x| x > 0) || c.iter().all(|&x| x < 0));
    }
    let mut c = c.map(|x| x as i128);
    let pp = p as i128;
    for x in c.iter_mut() {
        while *x % (pp * pp) == 0 {
            *x /= pp * pp;
        }
    }
    loop {
        let div: Vec<usize> = (0..3).filter(|&i| c[i] % pp == 0).collect();
        match div.len() {
            3 => c = c.map(|x| x / pp),
            2 => {
                for i in 0..3 {
                    c[i] = if div.contains(&i) { c[i] / pp } else { c[i] * pp };
                }
            }
            _ => break,
        }
    }
    // scaling the zero by a unit makes its unit coordinate 1
    let modulus: i128 = if p == 2 { 8 } else { pp };
    for i in (0..3).filter(|&i| c[i] % pp != 0) {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        for y in 0..modulus {
            for z in 0..modulus {
                if (c[i] + c[j] * y * y + c[k] * z * z).rem_euclid(modulus) == 0 {
                    return true;
                }
            }
        }
    }
    false
}

/// Hilbert symbol (a, b)_p additively: 0 when z² = ax² + by² has a nonzero solution.
pub fn hilbert(a: i64, b: i64, p: i64) -> u8 {
    u8::from(!isotropic3([1, -a, -b], p))
}

/// Places where some pair of the given integers can have a nontrivial symbol.
pub fn places_for(entries: &[i64]) -> Vec<i64> {
    let mut s: BTreeSet<i64> = BTreeSet::from([2]);
    for &a in entries {
        s.extend(prime_factors(a));
    }
    let mut out = vec![INF];
    out.extend(s);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inv {
    pub dim: usize,
    pub det: i64,
    pub pos: usize,
    pub neg: usize,
    pub hasse: BTreeSet<i64>,
}

/// Invariants of a diagonal integer form: Hasse invariant as Σ_{i<j} (aᵢ, aⱼ).
pub fn invariants(diag: &[i64]) -> Inv {
    let det = diag.iter().fold(1, |acc, &a| class_mul(acc, a));
    let pos = diag.iter().filter(|&&a| a > 0).count();
    let mut hasse = BTreeSet::new();
    for p in places_for(diag) {
        let mut bit = 0;
        for i in 0..diag.len() {
            for j in i + 1..diag.len() {
                bit ^= hilbert(diag[i], diag[j], p);
            }
        }
        if bit == 1 {
            hasse.insert(p);
        }
    }
    Inv { dim: diag.len(), det, pos, neg: diag.len() - pos, hasse }
}

pub fn place_code(p: &Place) -> i64 {
    match p {
        Place::Infinity => INF,
        Place::Prime(q) => q.to_i64().unwrap(),
    }
}

/// Library invariants in oracle form.
pub fn from_lib(inv: &FormInvariants) -> Inv {
    Inv {
        dim: inv.dim,
        det: inv.det.value().to_i64().unwrap(),
        pos: inv.signature.pos,
        neg: inv.signature.neg,
        hasse: inv.hasse.iter().map(place_code).collect(),
    }
}

/// Library form diagonal as integers (square class representatives).
pub fn lib_diag(f: &QuadraticFormQ) -> Vec<i64> {
    f.diagonal().iter().map(|c| c.value().to_i64().unwrap()).collect()
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn gram(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
}

/// Congruence diagonalization of a nondegenerate symmetric matrix.
pub fn diagonalize(g: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = g.len();
    let mut a = g.to_vec();
    let mut out = Vec::new();
    for k in 0..n {
        if a[k][k].is_zero() {
            // a zero pivot: borrow a later basis vector, either with a nonzero
            // diagonal entry (swap) or pairing with this one (add)
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else {
                let j = (k + 1..n).find(|&j| !a[k][j].is_zero()).expect("nondegenerate");
                for c in 0..n {
                    let t = a[j][c].clone();
                    a[k][c] += t;
                }
                for r in 0..n {
                    let t = a[r][j].clone();
                    a[r][k] += t;
                }
            }
        }
        let piv = a[k][k].clone();
        for i in k + 1..n {
            let f = &a[i][k] / &piv;
            for c in 0..n {
                let t = &f * &a[k][c];
                a[i][c] -= t;
            }
        }
        for c in k + 1..n {
            let f = &a[k][c] / &piv;
            for r in 0..n {
                let t = &f * &a[r][k];
                a[r][c] -= t;
            }
        }
        out.push(piv);
    }
    out
}

pub fn diag_classes(g: &[Vec<BigRational>]) -> Vec<i64> {
    diagonalize(g).iter().map(rat_class).collect()
}

/// The negative definite E₈ Gram matrix (Bourbaki labelling).
pub fn e8_negative() -> Vec<Vec<BigRational>> {
    let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
    let mut g = vec![vec![rat(0); 8]; 8];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = rat(-2);
    }
    for (i, j) in edges {
        g[i][j] = rat(1);
        g[j][i] = rat(1);
    }
    g
}

/// Block diagonal Gram matrix.
pub fn block_sum(blocks: &[Vec<Vec<BigRational>>]) -> Vec<Vec<BigRational>> {
    let n: usize = blocks.iter().map(|b| b.len()).sum();
    let mut g = vec![vec![rat(0); n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                g[off + i][off + j] = x.clone();
            }
        }
        off += b.len();
    }
    g
}

pub fn hyperbolic_plane() -> Vec<Vec<BigRational>> {
    gram(&[&[0, 1], &[1, 0]])
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count() as u64
}

/// Square class of disc Q(ζ_n) from (-1)^{φ/2} n^φ / ∏_{p|n} p^{φ/(p-1)}.
pub fn cyclotomic_disc_class(n: u64) -> i64 {
    let n = if n % 4 == 2 { n / 2 } else { n };
    let phi = euler_phi(n);
    let mut class: i64 = if (phi / 2) % 2 == 1 { -1 } else { 1 };
    for p in prime_factors(n as i64) {
        let v = valuation(n as i64, p) as u64;
        let e = phi * v - phi / (p as u64 - 1);
        if e % 2 == 1 {
            class *= p;
        }
    }
    class
}

/// Square class of the discriminant of Q(√-D), D squarefree.
pub fn imag_quadratic_disc_class(big_d: i64) -> i64 {
    if (-big_d).rem_euclid(4) == 1 {
        -big_d
    } else {
        sqfree(-4 * big_d as i128)
    }
}

pub fn is_sum_of_two_squares(n: i64) -> bool {
    (0..=n).take_while(|x| x * x <= n).any(|x| {
        let r = n - x * x;
        (0..=r).take_while(|y| y * y <= r).any(|y| y * y == r)
    })
}

/// Local isotropy of a diagonal integer form of any dimension.
pub fn locally_isotropic(diag: &[i64], p: i64) -> bool {
    if p == INF {
        return diag.iter().any(|&a| a > 0) && diag.iter().any(|&a| a < 0);
    }
    match diag.len() {
        0 | 1 => false,
        2 => is_local_square(-diag[0] * diag[1], p),
        3 => isotropic3([diag[0], diag[1], diag[2]], p),
        4 => {
            // ⟨a,b⟩ and ⟨-c,-d⟩ share a value, or one half is already isotropic
            let [a, b, c, d] = [diag[0], diag[1], diag[2], diag[3]];
            if is_local_square(-a * b, p) || is_local_square(-c * d, p) {
                return true;
            }
            let reps: Vec<i64> = if p == 2 {
                vec![1, 3, 5, 7, 2, 6, 10, 14]
            } else {
                let u = (2..p).find(|&u| !is_local_square(u, p)).unwrap();
                vec![1, u, p, u * p]
            };
            reps.iter().any(|&t| isotropic3([a, b, -t], p) && isotropic3([-c, -d, -t], p))
        }
        _ => true,
    }
}

/// Integer square root when exact.
pub fn exact_sqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt() as i64;
    (r.saturating_sub(2)..=r + 2).find(|&s| s >= 0 && s * s == n)
}

/// A nonzero integer vector of height ≤ h on a diagonal form of dim ≤ 4,
/// found by solving for the last coordinate.
pub fn search_zero(diag: &[i64], h: i64) -> Option<Vec<i64>> {
    let n = diag.len();
    if n < 2 {
        return None;
    }
    let last = diag[n - 1];
    let mut x = vec![-h; n - 1];
    loop {
        let s: i64 = x.iter().zip(diag).map(|(xi, a)| a * xi * xi).sum();
        if s % last == 0 {
            if let Some(y) = exact_sqrt(-s / last) {
                if y <= h && (y != 0 || x.iter().any(|&v| v != 0)) {
                    let mut v = x.clone();
                    v.push(y);
                    return Some(v);
                }
            }
        }
        let mut i = 0;
        while i < n - 1 {
            if x[i] < h {
                x[i] += 1;
                break;
            }
            x[i] = -h;
            i += 1;
        }
        if i == n - 1 {
            return None;
        }
    }
}
