//! Dense polynomials over a prime field F_p, coefficients low to high.

pub(crate) type FpPoly = Vec<u64>;

pub(crate) fn trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut r: FpPoly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut r);
    r
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    trim(&mut r);
    r
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> FpPoly {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let k = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, mi) in m.iter().enumerate() {
            r[k + i] = (r[k + i] + p - c * mi % p) % p;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> FpPoly {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn powmod(a: &[u64], mut e: u128, m: &[u64], p: u64) -> FpPoly {
    let mut base = rem(a, m, p);
    let mut r = rem(&[1], m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(&r, &base, m, p);
        }
        base = mulmod(&base, &base, m, p);
        e >>= 1;
    }
    r
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&l) = a.last() {
        let li = inv_mod(l, p);
        a.iter_mut().for_each(|c| *c = *c * li % p);
    }
    a
}

/// Extended Euclid: returns `s` with `s·a ≡ gcd(a, m) (mod m)`.
pub(crate) fn inverse_mod_poly(a: &[u64], m: &[u64], p: u64) -> Option<FpPoly> {
    let (mut r0, mut r1) = (m.to_vec(), rem(a, m, p));
    let (mut s0, mut s1): (FpPoly, FpPoly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        // one division step r0 = q·r1 + r
        let mut q = vec![0u64; r0.len().saturating_sub(r1.len()) + 1];
        let mut r = r0.clone();
        let d1 = r1.len() - 1;
        let li = inv_mod(r1[d1], p);
        while r.len() > d1 {
            let k = r.len() - 1 - d1;
            let c = r[r.len() - 1] * li % p;
            q[k] = c;
            for (i, x) in r1.iter().enumerate() {
                r[k + i] = (r[k + i] + p - c * x % p) % p;
            }
            trim(&mut r);
        }
        trim(&mut q);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if r0.len() != 1 {
        return None;
    }
    let li = inv_mod(r0[0], p);
    let mut s: FpPoly = s0.iter().map(|c| c * li % p).collect();
    trim(&mut s);
    Some(rem(&s, m, p))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// Rabin's test for a monic `f` of degree `n` over F_p.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    let frob_iter = |k: usize| {
        let mut r = x.clone();
        for _ in 0..k {
            r = powmod(&r, p as u128, f, p);
        }
        r
    };
    if frob_iter(n) != rem(&x, f, p) {
        return false;
    }
    for q in prime_factors(n as u64) {
        let h = sub(&frob_iter(n / q as usize), &x, p);
        if gcd(f, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

/// Least monic irreducible polynomial of degree `n` over F_p, ordering the
/// non-leading coefficients with the highest degree most significant.
pub(crate) fn least_irreducible(p: u64, n: usize) -> FpPoly {
    let total = (p as u128).pow(n as u32);
    for k in 0..total {
        let mut f = vec![0u64; n + 1];
        let mut rest = k;
        for c in f.iter_mut().take(n) {
            *c = (rest % p as u128) as u64;
            rest /= p as u128;
        }
        f[n] = 1;
        if f[0] == 0 && n > 1 {
            continue;
        }
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_moduli() {
        assert_eq!(least_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(least_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(least_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(least_irreducible(5, 1), vec![0, 1]);
    }

    #[test]
    fn irreducibility_by_trial_division() {
        // compare Rabin with exhaustive division by all monic polynomials of lower degree
        let p = 3;
        for k in 0..81u64 {
            let mut f = vec![k % 3, k / 3 % 3, k / 9 % 3, k / 27 % 3, 1];
            trim(&mut f);
            let n = f.len() - 1;
            let mut has_factor = false;
            for d in 1..=n / 2 {
                for j in 0..3u64.pow(d as u32) {
                    let mut g: Vec<u64> = (0..d).map(|i| j / 3u64.pow(i as u32) % 3).collect();
                    g.push(1);
                    if rem(&f, &g, p).is_empty() {
                        has_factor = true;
                    }
                }
            }
            assert_eq!(is_irreducible(&f, p), !has_factor, "{f:?}");
        }
    }

    #[test]
    fn inverse() {
        let m = vec![1, 1, 0, 1];
        for a in 1..8u64 {
            let a = vec![a & 1, a >> 1 & 1, a >> 2 & 1];
            let mut a = a.clone();
            trim(&mut a);
            let s = inverse_mod_poly(&a, &m, 2).unwrap();
            assert_eq!(mulmod(&a, &s, &m, 2), vec![1]);
        }
    }
}
