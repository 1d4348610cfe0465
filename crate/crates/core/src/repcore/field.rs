//! Arithmetic in `F_(p^t) = F_p[x]/(f)`.
//!
//! Elements are encoded as integers `sum c_i p^i` in `0..q`, where `c_i` are
//! the coefficients of the residue polynomial. Multiplication goes through
//! discrete log tables built from a primitive element found at construction.

use rand::Rng;

use crate::error::{Error, Result};
use crate::filtration::PrimeChar;

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u32 = 1 << 20;
const ADD_TABLE_LIMIT: u32 = 1 << 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq(pub u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone)]
pub struct FqContext {
    p: u32,
    t: u32,
    q: u32,
    /// Monic modulus, low degree first, length `t + 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl PartialEq for FqContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FqContext {}

impl FqContext {
    /// Field defined by the monic polynomial with the given coefficients
    /// (low degree first, leading 1 included).
    pub fn new(p: PrimeChar, modulus: Vec<u32>) -> Result<Self> {
        let pp = p.get();
        let t = modulus.len().saturating_sub(1) as u32;
        if t == 0 {
            return Err(Error::InvalidField("modulus must have positive degree".into()));
        }
        if *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= pp) {
            return Err(Error::InvalidField("modulus must be monic with coefficients below p".into()));
        }
        let q = (pp as u64).pow(t);
        if q > MAX_FIELD_SIZE as u64 {
            return Err(Error::InvalidField(format!("field size {q} too large")));
        }
        if !is_irreducible(pp, &modulus) {
            return Err(Error::InvalidField(format!("{modulus:?} is reducible mod {pp}")));
        }
        let mut ctx = FqContext {
            p: pp,
            t,
            q: q as u32,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add_table: None,
        };
        ctx.build_tables();
        Ok(ctx)
    }

    /// Field with the lexicographically first irreducible modulus.
    pub fn first(p: PrimeChar, t: u32) -> Result<Self> {
        let pp = p.get();
        Self::check_size(pp, t)?;
        let count = (pp as u64).pow(t);
        for code in 0..count {
            let modulus = monic_from_code(pp, t, code);
            if is_irreducible(pp, &modulus) {
                return Self::new(p, modulus);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// Field with a uniformly sampled irreducible modulus.
    pub fn random<R: Rng + ?Sized>(p: PrimeChar, t: u32, rng: &mut R) -> Result<Self> {
        let pp = p.get();
        Self::check_size(pp, t)?;
        let count = (pp as u64).pow(t);
        loop {
            let modulus = monic_from_code(pp, t, rng.gen_range(0..count));
            if is_irreducible(pp, &modulus) {
                return Self::new(p, modulus);
            }
        }
    }

    fn check_size(p: u32, t: u32) -> Result<()> {
        if t == 0 || (p as u64).checked_pow(t).map_or(true, |q| q > MAX_FIELD_SIZE as u64) {
            return Err(Error::InvalidField(format!("unsupported extension degree {t}")));
        }
        Ok(())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.t
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p as i64) as u32)
    }

    /// Element with the given polynomial coefficients (low degree first).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Fq {
        let mut code = 0u32;
        for &c in coeffs.iter().take(self.t as usize).rev() {
            code = code * self.p + c % self.p;
        }
        Fq(code)
    }

    pub fn coeffs(&self, a: Fq) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.t as usize);
        let mut x = a.0;
        for _ in 0..self.t {
            out.push(x % self.p);
            x /= self.p;
        }
        out
    }

    /// `x^i` in the polynomial basis.
    pub fn monomial(&self, i: u32) -> Fq {
        if i < self.t {
            let mut c = vec![0; self.t as usize];
            c[i as usize] = 1;
            return self.from_coeffs(&c);
        }
        let x = if self.t >= 2 {
            self.from_coeffs(&[0, 1])
        } else {
            // x = -m_0 modulo x + m_0
            self.from_int(-(self.modulus[0] as i64))
        };
        self.pow(x, i as u64)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Fq {
        Fq(rng.gen_range(0..self.q))
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if let Some(table) = &self.add_table {
            return Fq(table[(a.0 * self.q + b.0) as usize]);
        }
        self.add_slow(a, b)
    }

    fn add_slow(&self, a: Fq, b: Fq) -> Fq {
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.t {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        Fq(out)
    }

    pub fn neg(&self, a: Fq) -> Fq {
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.t {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        Fq(out)
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        let n = self.q - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        Fq(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.is_zero() {
            return None;
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Some(Fq(self.exp[((n - l) % n) as usize]))
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq::ONE;
        }
        if a.is_zero() {
            return Fq::ZERO;
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Fq(self.exp[((l * (e % n)) % n) as usize])
    }

    /// Schoolbook product modulo the defining polynomial; used only while
    /// the log tables are being built and as a test oracle.
    pub fn mul_poly(&self, a: Fq, b: Fq) -> Fq {
        let p = self.p as u64;
        let t = self.t as usize;
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let mut prod = vec![0u64; 2 * t];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for d in (t..2 * t).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in self.modulus.iter().take(t).enumerate() {
                let idx = d - t + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        let reduced: Vec<u32> = prod[..t].iter().map(|&c| c as u32).collect();
        self.from_coeffs(&reduced)
    }

    fn build_tables(&mut self) {
        let n = self.q - 1;
        let factors = prime_factors(n);
        let generator = (1..self.q)
            .map(Fq)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&l| self.pow_poly(g, (n / l) as u64) != Fq::ONE)
            })
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; n as usize];
        let mut log = vec![0u32; self.q as usize];
        let mut x = Fq::ONE;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x.0;
            log[x.0 as usize] = i as u32;
            x = self.mul_poly(x, generator);
        }
        self.exp = exp;
        self.log = log;
        if self.q <= ADD_TABLE_LIMIT {
            let q = self.q;
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = self.add_slow(Fq(a), Fq(b)).0;
                }
            }
            self.add_table = Some(table);
        }
    }

    fn pow_poly(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a;
        let mut acc = Fq::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }
}

fn prime_factors(mut n: u32) -> Vec<u32> {
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

/// Monic polynomial of degree `t` whose lower coefficients are the base-p digits of `code`.
fn monic_from_code(p: u32, t: u32, mut code: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(t as usize + 1);
    for _ in 0..t {
        out.push((code % p as u64) as u32);
        code /= p as u64;
    }
    out.push(1);
    out
}

/// Remainder of `f` modulo the monic `g` over `F_p`.
fn poly_rem(p: u32, f: &[u32], g: &[u32]) -> Vec<u32> {
    let p64 = p as u64;
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if lead != 0 {
            for (i, &c) in g.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + (p64 - lead) * c as u64) % p64;
            }
        }
        r.pop();
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Trial division by every monic polynomial of degree at most `deg f / 2`.
pub fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let t = f.len() - 1;
    if t == 0 {
        return false;
    }
    for d in 1..=(t / 2) as u32 {
        for code in 0..(p as u64).pow(d) {
            let g = monic_from_code(p, d, code);
            if poly_rem(p, f, &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(n: u32) -> PrimeChar {
        PrimeChar::new(n).unwrap()
    }

    #[test]
    fn irreducibility() {
        // x^2 + 1 over F_3 is irreducible, over F_5 it splits
        assert!(is_irreducible(3, &[1, 0, 1]));
        assert!(!is_irreducible(5, &[1, 0, 1]));
        assert!(is_irreducible(2, &[1, 1, 0, 1]));
        assert!(!is_irreducible(3, &[0, 0, 1]));
    }

    #[test]
    fn table_product_matches_schoolbook() {
        for (pp, t) in [(3, 2), (5, 2), (7, 2), (3, 3), (5, 1)] {
            let f = FqContext::first(p(pp), t).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul_poly(a, b));
                }
            }
        }
    }

    #[test]
    fn field_axioms_on_random_moduli() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            let f = FqContext::random(p(5), 2, &mut rng).unwrap();
            assert_eq!(f.size(), 25);
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), Fq::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fq::ONE);
                }
                assert_eq!(f.pow(a, 25), a);
            }
        }
    }

    #[test]
    fn slow_add_agrees_with_table() {
        let f = FqContext::first(p(7), 2).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.add(a, b), f.add_slow(a, b));
            }
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(FqContext::new(p(5), vec![1, 0, 1]).is_err());
        assert!(FqContext::new(p(3), vec![1, 0, 2]).is_err());
        assert!(FqContext::new(p(3), vec![1, 0, 1]).is_ok());
    }

    #[test]
    fn coefficient_round_trip() {
        let f = FqContext::first(p(5), 3).unwrap();
        for a in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(a)), a);
        }
        assert_eq!(f.coeffs(f.monomial(2)), vec![0, 0, 1]);
    }
}
