//! Arithmetic in `F_{p^m}` realized as `F_p[t] / (modulus)`.
//!
//! Elements are stored by their canonical integer encoding
//! `enc(x) = sum coeffs[i] * p^i`, which doubles as the sort key for every
//! ordered enumeration in the crate. Multiplication goes through discrete
//! log tables built once per field; the schoolbook polynomial product is
//! kept for table construction and as a cross-check in tests.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest field order the table-driven arithmetic accepts.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Largest `p^m` for which the `tr(a*x)` product table is materialized.
const TRACE_TABLE_MAX_ORDER: u32 = 4096;

/// Parameters of a concrete realization of `F_{p^m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldParams {
    pub p: u32,
    pub m: usize,
    /// Monic irreducible polynomial, `m + 1` coefficients, low degree first.
    pub modulus: Vec<u32>,
}

/// An element of `F_{p^m}`, identified by its canonical encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps a raw encoding without range checking; see [`Field::element`].
    pub const fn from_enc(enc: u32) -> Self {
        FieldElement(enc)
    }

    pub const fn enc(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite field `F_{p^m}` together with its lookup tables.
///
/// Immutable after construction; share it by reference (or `Arc`) across
/// worker threads.
#[derive(Clone)]
pub struct Field {
    params: FieldParams,
    q: u32,
    /// `exp[i] = g^i` for `i` in `0..q-1`, doubled to avoid a reduction.
    exp: Vec<u32>,
    /// `log[x]` for `x != 0`; `log[0]` is unused.
    log: Vec<u32>,
    trace: Vec<u32>,
    /// `trace_mul[a * q + x] = tr(a * x)`, present for small fields only.
    trace_mul: Option<Vec<u8>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.params.p)
            .field("m", &self.params.m)
            .field("modulus", &self.params.modulus)
            .finish()
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
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

/// Remainder of `num` modulo the monic polynomial `den` over `F_p`.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = num.to_vec();
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    while r.len() > dd {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in den.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut cand = vec![0u32; d + 1];
            let mut rest = idx;
            for c in cand.iter_mut().take(d) {
                *c = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            cand[d] = 1;
            if poly_rem(poly, &cand, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `m`, comparing `c_0` first, then
/// `c_1`, and so on.
pub fn default_modulus(p: u32, m: usize) -> Vec<u32> {
    let count = (p as u64).pow(m as u32);
    for idx in 0..count {
        // c_0 is the most significant digit of idx.
        let mut poly = vec![0u32; m + 1];
        let mut rest = idx;
        for i in (0..m).rev() {
            poly[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        poly[m] = 1;
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldParams {
    /// Validates `p`, `m` and the optional modulus, choosing the default
    /// modulus when none is supplied.
    pub fn new(p: u32, m: usize, modulus: Option<Vec<u32>>) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::CompositeP(p));
        }
        if m == 0 {
            return Err(Error::InvalidDegree(m));
        }
        let order = (p as u64).checked_pow(m as u32);
        match order {
            Some(q) if q <= MAX_FIELD_ORDER => {}
            _ => return Err(Error::FieldTooLarge { p, m }),
        }
        let modulus = match modulus {
            Some(poly) => {
                if poly.len() != m + 1 || poly[m] != 1 || poly.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidModulus(poly));
                }
                if !is_irreducible(&poly, p) {
                    return Err(Error::ReducibleModulus(poly));
                }
                poly
            }
            None => default_modulus(p, m),
        };
        Ok(FieldParams { p, m, modulus })
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.m as u32)
    }
}

impl Field {
    /// Builds `F_{p^m}`; see [`FieldParams::new`] for the error cases.
    pub fn new(p: u32, m: usize, modulus: Option<Vec<u32>>) -> Result<Self> {
        Ok(Self::from_params(FieldParams::new(p, m, modulus)?))
    }

    pub fn from_params(params: FieldParams) -> Self {
        let q = params.order();
        let mut field = Field {
            params,
            q,
            exp: Vec::new(),
            log: Vec::new(),
            trace: Vec::new(),
            trace_mul: None,
        };
        field.build_log_tables();
        field.trace = (0..q)
            .map(|x| field.trace_by_frobenius(FieldElement(x)))
            .collect();
        if q <= TRACE_TABLE_MAX_ORDER && field.params.p <= 256 {
            let mut table = vec![0u8; (q * q) as usize];
            for a in 0..q {
                for x in 0..q {
                    let prod = field.mul(FieldElement(a), FieldElement(x));
                    table[(a * q + x) as usize] = field.trace[prod.0 as usize] as u8;
                }
            }
            field.trace_mul = Some(table);
        }
        field
    }

    fn build_log_tables(&mut self) {
        let q = self.q;
        let n = (q - 1) as u64;
        let factors = prime_factors(n);
        let generator = (1..q)
            .map(FieldElement)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| self.pow_poly(g, n / r) != FieldElement::ONE)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * (q as usize - 1)];
        let mut log = vec![0u32; q as usize];
        let mut cur = FieldElement::ONE;
        for i in 0..(q - 1) {
            exp[i as usize] = cur.0;
            exp[(i + q - 1) as usize] = cur.0;
            log[cur.0 as usize] = i;
            cur = self.mul_poly(cur, generator);
        }
        self.exp = exp;
        self.log = log;
    }

    fn pow_poly(&self, x: FieldElement, mut e: u64) -> FieldElement {
        let mut base = x;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    fn trace_by_frobenius(&self, x: FieldElement) -> u32 {
        let mut acc = FieldElement::ZERO;
        let mut cur = x;
        for _ in 0..self.params.m {
            acc = self.add(acc, cur);
            cur = self.pow(cur, self.params.p as u64);
        }
        // The trace lands in the prime subfield, i.e. a constant polynomial.
        debug_assert!(acc.0 < self.params.p);
        acc.0
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn p(&self) -> u32 {
        self.params.p
    }

    pub fn m(&self) -> usize {
        self.params.m
    }

    /// Number of elements, `p^m`.
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Range-checked constructor from an encoding.
    pub fn element(&self, enc: u32) -> Result<FieldElement> {
        if enc < self.q {
            Ok(FieldElement(enc))
        } else {
            Err(Error::ForeignElement { enc, order: self.q })
        }
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.0 < self.q
    }

    /// Embeds a prime-field scalar.
    pub fn scalar(&self, c: u32) -> FieldElement {
        FieldElement(c % self.params.p)
    }

    /// The residue class of `t`. For `m == 1` this is the root `-c_0` of the
    /// linear modulus.
    pub fn generator_t(&self) -> FieldElement {
        if self.params.m == 1 {
            self.scalar(self.params.p - self.params.modulus[0])
        } else {
            FieldElement(self.params.p)
        }
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        let p = self.params.p;
        let mut rest = x.0;
        (0..self.params.m)
            .map(|_| {
                let c = rest % p;
                rest /= p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.params.m || coeffs.iter().any(|&c| c >= self.params.p) {
            return Err(Error::InvalidCoefficients(coeffs.to_vec()));
        }
        Ok(FieldElement(
            coeffs
                .iter()
                .rev()
                .fold(0u32, |acc, &c| acc * self.params.p + c),
        ))
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let p = self.params.p;
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        let p = self.params.p;
        let mut a = x.0;
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.0 == 0 || y.0 == 0 {
            return FieldElement::ZERO;
        }
        let idx = self.log[x.0 as usize] + self.log[y.0 as usize];
        FieldElement(self.exp[idx as usize])
    }

    /// Multiplies by a prime-field scalar.
    pub fn scale(&self, c: u32, x: FieldElement) -> FieldElement {
        self.mul(self.scalar(c), x)
    }

    /// Schoolbook product reduced modulo the defining polynomial.
    pub fn mul_poly(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let p = self.params.p;
        let m = self.params.m;
        let a = self.coeffs(x);
        let b = self.coeffs(y);
        let mut prod = vec![0u32; 2 * m - 1];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
        let rem = poly_rem(&prod, &self.params.modulus, p);
        let mut coeffs = rem;
        coeffs.resize(m, 0);
        self.from_coeffs(&coeffs)
            .expect("reduced coefficients are in range")
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        let l = self.log[x.0 as usize];
        Ok(FieldElement(self.exp[((n - l) % n) as usize]))
    }

    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if x.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = (self.q - 1) as u64;
        let l = self.log[x.0 as usize] as u64;
        FieldElement(self.exp[((l * (e % n)) % n) as usize])
    }

    /// Absolute trace `x + x^p + ... + x^{p^{m-1}}`, as a scalar in `[0, p)`.
    pub fn tr(&self, x: FieldElement) -> u32 {
        self.trace[x.0 as usize]
    }

    /// `tr(a * x)`, through the product table when the field is small.
    #[inline]
    pub fn tr_mul(&self, a: FieldElement, x: FieldElement) -> u32 {
        match &self.trace_mul {
            Some(table) => table[(a.0 * self.q + x.0) as usize] as u32,
            None => self.trace[self.mul(a, x).0 as usize],
        }
    }

    /// Quadratic character: `+1` on nonzero squares, `-1` on non-squares.
    pub fn eta(&self, x: FieldElement) -> Result<i8> {
        if x.0 == 0 {
            return Err(Error::ZeroArgument);
        }
        let half = ((self.q - 1) / 2) as u64;
        Ok(if self.pow(x, half) == FieldElement::ONE {
            1
        } else {
            -1
        })
    }

    pub fn is_square(&self, x: FieldElement) -> bool {
        matches!(self.eta(x), Ok(1))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    /// Nonzero squares and non-squares, each in ascending encoding order.
    pub fn squares_and_nonsquares(&self) -> (Vec<FieldElement>, Vec<FieldElement>) {
        self.elements()
            .skip(1)
            .partition(|&x| self.eta(x).expect("nonzero") == 1)
    }

    /// `sum_x omega^{tr(z x)}` in double precision, `omega = exp(2 pi i / p)`.
    pub fn additive_character_sum(&self, z: FieldElement) -> Complex64 {
        let roots = roots_of_unity(self.params.p);
        let mut counts = vec![0u64; self.params.p as usize];
        for x in self.elements() {
            counts[self.tr_mul(z, x) as usize] += 1;
        }
        counts.iter().zip(&roots).map(|(&c, w)| w * c as f64).sum()
    }
}

/// `omega^k` for `k` in `0..p`.
pub fn roots_of_unity(p: u32) -> Vec<Complex64> {
    (0..p)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / p as f64))
        .collect()
}
