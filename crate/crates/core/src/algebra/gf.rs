//! Finite fields F_q, q = p^k, as F_p[a]/(m(a)) with a deterministic
//! irreducible modulus. Elements are encoded as integers in base p
//! (digit i is the coefficient of a^i), so F_p sits inside as 0..p.

use std::fmt;
use std::sync::Arc;

use super::field::{is_prime, Field};
use super::AlgebraError;

/// Largest field order accepted for k > 1 (log/exp tables are built).
pub const MAX_EXT_ORDER: u64 = 1 << 20;
const ADD_TABLE_LIMIT: u64 = 256;

#[derive(Clone)]
pub struct Gf {
    inner: Arc<GfInner>,
}

struct GfInner {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, low degree first, length k + 1.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl Gf {
    pub fn new(p: u64, k: u32) -> Result<Self, AlgebraError> {
        if !is_prime(p) || p >= (1 << 31) {
            return Err(AlgebraError::NotPrime(p));
        }
        if k == 0 {
            return Err(AlgebraError::InvalidParameter("extension degree must be >= 1".into()));
        }
        let q = (p as u128).pow(k);
        if k > 1 && q > MAX_EXT_ORDER as u128 {
            return Err(AlgebraError::InvalidParameter(format!("field order {p}^{k} exceeds {MAX_EXT_ORDER}")));
        }
        let p32 = p as u32;
        let k = k as usize;
        if k == 1 {
            return Ok(Self {
                inner: Arc::new(GfInner {
                    p: p32,
                    k: 1,
                    q: p32,
                    modulus: vec![0, 1],
                    exp: Vec::new(),
                    log: Vec::new(),
                    add_table: None,
                }),
            });
        }
        let q = q as u32;
        let modulus = first_irreducible(p32, k);
        let mut inner = GfInner { p: p32, k: k as u32, q, modulus, exp: Vec::new(), log: Vec::new(), add_table: None };
        inner.build_tables();
        Ok(Self { inner: Arc::new(inner) })
    }

    pub fn p(&self) -> u64 {
        self.inner.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.inner.k
    }

    pub fn q(&self) -> u64 {
        self.inner.q as u64
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.inner.q
    }

    /// The class of the polynomial variable `a` (a generator over F_p).
    pub fn gen(&self) -> u32 {
        if self.inner.k == 1 {
            // F_p = F_p[a]/(a): the class of a is 0.
            0
        } else {
            self.inner.p
        }
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        self.inner.digits(a)
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        self.inner.from_digits(d)
    }

    /// Frobenius a -> a^p, which is a bijection of F_q.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p())
    }

    /// Unique p^e-th root (Frobenius is bijective on a finite field).
    pub fn pth_power_root(&self, a: u32, e: u32) -> u32 {
        // (a^{p^{(k - e mod k)}})^{p^e} = a^{q} = a
        let k = self.inner.k;
        let shift = (k - e % k) % k;
        let mut r = a;
        for _ in 0..shift {
            r = self.frobenius(r);
        }
        r
    }

    /// A root in `self` of the modulus of `sub`, giving the embedding
    /// sub -> self. Fails unless deg(sub) divides deg(self).
    pub fn embedding_from(&self, sub: &Gf) -> Result<Embedding, AlgebraError> {
        if sub.p() != self.p() {
            return Err(AlgebraError::ModulusMismatch { left: sub.p(), right: self.p() });
        }
        if !self.degree().is_multiple_of(sub.degree()) {
            return Err(AlgebraError::InvalidParameter(format!("F_{} does not embed in F_{}", sub.q(), self.q())));
        }
        let image_of_gen = if sub.degree() == 1 {
            0
        } else {
            let m = sub.modulus();
            self.elements()
                .find(|&x| {
                    let mut acc = 0;
                    for &c in m.iter().rev() {
                        acc = self.add(self.mul(acc, x), c);
                    }
                    acc == 0
                })
                .expect("a subfield modulus splits in the extension")
        };
        Ok(Embedding { target: self.clone(), image_of_gen, source_p: sub.p() as u32 })
    }
}

/// Field embedding F_{p^j} -> F_{p^k}, determined by the image of the generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    target: Gf,
    image_of_gen: u32,
    source_p: u32,
}

impl Embedding {
    pub fn apply(&self, a: u32) -> u32 {
        let mut digits = Vec::new();
        let mut v = a;
        while v > 0 {
            digits.push(v % self.source_p);
            v /= self.source_p;
        }
        let t = &self.target;
        let mut acc = 0;
        for &c in digits.iter().rev() {
            acc = t.add(t.mul(acc, self.image_of_gen), c);
        }
        acc
    }
}

impl GfInner {
    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut d = vec![0; self.k as usize];
        for slot in d.iter_mut() {
            *slot = a % self.p;
            a /= self.p;
        }
        d
    }

    fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0u32, |acc, &c| acc * self.p + c % self.p)
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place = place.wrapping_mul(self.p);
        }
        out
    }

    /// Schoolbook product reduced by the modulus; only used to build tables.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let k = self.k as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * k - 1];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        for deg in (k..2 * k - 1).rev() {
            let c = prod[deg];
            if c != 0 {
                for (i, &m) in self.modulus.iter().enumerate().take(k) {
                    let idx = deg - k + i;
                    prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
                }
                prod[deg] = 0;
            }
        }
        let d: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        self.from_digits(&d)
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let order = (q - 1) as u64;
        let prime_factors = prime_factors(order);
        let slow_pow = |s: &GfInner, a: u32, mut e: u64| {
            let mut base = a;
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = s.slow_mul(acc, base);
                }
                base = s.slow_mul(base, base);
                e >>= 1;
            }
            acc
        };
        let generator = (2..q).find(|&g| prime_factors.iter().all(|&l| slow_pow(self, g, order / l) != 1)).unwrap_or(1);
        let mut exp = vec![0u32; q as usize - 1];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, generator);
        }
        self.exp = exp;
        self.log = log;
        if (q as u64) <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = self.add_digits(a, b);
                }
            }
            self.add_table = Some(t);
        }
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

/// First monic irreducible polynomial of degree k over F_p, scanning the
/// lower coefficients as a base-p counter (constant term least significant).
fn first_irreducible(p: u32, k: usize) -> Vec<u32> {
    let count = (p as u64).pow(k as u32);
    for code in 0..count {
        let mut poly = Vec::with_capacity(k + 1);
        let mut c = code;
        for _ in 0..k {
            poly.push((c % p as u64) as u32);
            c /= p as u64;
        }
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let k = poly.len() - 1;
    // Trial division by every monic polynomial of degree 1..=k/2.
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                div.push((c % p as u64) as u32);
                c /= p as u64;
            }
            div.push(1);
            if poly_rem_is_zero(poly, &div, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(num: &[u32], monic_div: &[u32], p: u32) -> bool {
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let d = monic_div.len() - 1;
    let p = p as u64;
    for deg in (d..r.len()).rev() {
        let c = r[deg] % p;
        if c != 0 {
            for (i, &m) in monic_div.iter().enumerate() {
                let idx = deg - d + i;
                r[idx] = (r[idx] + (p - c) * m as u64) % p;
            }
        }
    }
    r[..d].iter().all(|&c| c % p == 0)
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.inner.p, self.inner.k)
    }
}

impl Field for Gf {
    type Elt = u32;

    fn characteristic(&self) -> u64 {
        self.inner.p as u64
    }

    fn order(&self) -> u64 {
        self.inner.q as u64
    }

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.inner.p as i64) as u32
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let s = &self.inner;
        if s.k == 1 {
            return ((a as u64 + b as u64) % s.p as u64) as u32;
        }
        match &s.add_table {
            Some(t) => t[(a * s.q + b) as usize],
            None => s.add_digits(a, b),
        }
    }

    fn neg(&self, a: u32) -> u32 {
        let s = &self.inner;
        if s.k == 1 {
            return if a == 0 { 0 } else { s.p - a };
        }
        let d: Vec<u32> = s.digits(a).into_iter().map(|c| (s.p - c) % s.p).collect();
        s.from_digits(&d)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let s = &self.inner;
        if s.k == 1 {
            return ((a as u64 * b as u64) % s.p as u64) as u32;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let n = s.q - 1;
        let e = (s.log[a as usize] as u64 + s.log[b as usize] as u64) % n as u64;
        s.exp[e as usize]
    }

    fn inv(&self, a: u32) -> Option<u32> {
        let s = &self.inner;
        if a == 0 {
            return None;
        }
        if s.k == 1 {
            return Some(self.pow(a, s.p as u64 - 2));
        }
        let n = s.q - 1;
        Some(s.exp[((n - s.log[a as usize]) % n) as usize])
    }

    fn render(&self, a: u32) -> String {
        let s = &self.inner;
        if s.k == 1 || a < s.p {
            return a.to_string();
        }
        let d = s.digits(a);
        let mut parts = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            parts.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}{mono}"),
            });
        }
        format!("({})", parts.join("+"))
    }
}

/// Points of P^n(F_q), each normalised so its first nonzero coordinate is 1,
/// in lexicographic order of the normalised coordinate codes.
pub fn projective_points(field: &Gf, n: usize) -> ProjectivePoints {
    ProjectivePoints { q: field.q() as u32, dim: n, lead: 0, rest: 0, done: false }
}

pub struct ProjectivePoints {
    q: u32,
    dim: usize,
    /// Index of the leading 1.
    lead: usize,
    /// Base-q counter over the coordinates after the leading 1.
    rest: u64,
    done: bool,
}

impl Iterator for ProjectivePoints {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let free = self.dim - self.lead;
        let mut point = vec![0u32; self.dim + 1];
        point[self.lead] = 1;
        let mut c = self.rest;
        for slot in point[self.lead + 1..].iter_mut().rev() {
            *slot = (c % self.q as u64) as u32;
            c /= self.q as u64;
        }
        self.rest += 1;
        if self.rest == (self.q as u64).pow(free as u32) {
            self.rest = 0;
            if self.lead == self.dim {
                self.done = true;
            } else {
                self.lead += 1;
            }
        }
        Some(point)
    }
}
