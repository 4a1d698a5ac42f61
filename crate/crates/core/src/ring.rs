//! The ring `R_m = F_{p^m}[u, v] / (u^2, v^2, uv - vu)` and its trace down
//! to `R = F_p + uF_p + vF_p + uvF_p`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};

/// `a0 + a1 u + a2 v + a3 uv` with coefficients in `F_{p^m}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingElement(pub [FieldElement; 4]);

impl RingElement {
    pub const ZERO: RingElement = RingElement([FieldElement::ZERO; 4]);
    pub const ONE: RingElement = RingElement([
        FieldElement::ONE,
        FieldElement::ZERO,
        FieldElement::ZERO,
        FieldElement::ZERO,
    ]);

    pub fn new(a0: FieldElement, a1: FieldElement, a2: FieldElement, a3: FieldElement) -> Self {
        RingElement([a0, a1, a2, a3])
    }

    /// `alpha * uv`.
    pub fn uv_multiple(alpha: FieldElement) -> Self {
        RingElement([
            FieldElement::ZERO,
            FieldElement::ZERO,
            FieldElement::ZERO,
            alpha,
        ])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// True for elements of the line `{alpha uv : alpha in F_{p^m}}`.
    pub fn is_uv_multiple(&self) -> bool {
        self.0[..3].iter().all(|c| c.is_zero())
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "{a}+{b}u+{c}v+{d}uv")
    }
}

/// `b0 + b1 u + b2 v + b3 uv` with coefficients in `F_p`; the symbol
/// alphabet of the trace codes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseRingElement(pub [u32; 4]);

impl BaseRingElement {
    pub const ZERO: BaseRingElement = BaseRingElement([0; 4]);

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn add(self, other: Self, p: u32) -> Self {
        let mut out = [0; 4];
        for (o, (x, y)) in out.iter_mut().zip(self.0.iter().zip(other.0)) {
            *o = (x + y) % p;
        }
        BaseRingElement(out)
    }

    pub fn neg(self, p: u32) -> Self {
        BaseRingElement(self.0.map(|x| (p - x) % p))
    }

    pub fn mul(self, other: Self, p: u32) -> Self {
        let [x0, x1, x2, x3] = self.0;
        let [y0, y1, y2, y3] = other.0;
        BaseRingElement([
            x0 * y0 % p,
            (x0 * y1 + x1 * y0) % p,
            (x0 * y2 + x2 * y0) % p,
            (x0 * y3 + x1 * y2 + x2 * y1 + x3 * y0) % p,
        ])
    }

    /// Image `(b3, b2 + b3, b1 + b3, b0 + b1 + b2 + b3)` under the Gray map.
    pub fn gray(self, p: u32) -> [u32; 4] {
        let [a, b, c, d] = self.0;
        [d, (c + d) % p, (b + d) % p, (a + b + c + d) % p]
    }

    /// Hamming weight of the Gray image.
    pub fn lee_weight(self, p: u32) -> u32 {
        self.gray(p).iter().filter(|&&x| x != 0).count() as u32
    }

    /// All `p^4` elements in lexicographic order of `(b0, b1, b2, b3)`.
    pub fn all(p: u32) -> impl Iterator<Item = BaseRingElement> {
        (0..p.pow(4)).map(move |mut idx| {
            let mut out = [0u32; 4];
            for slot in out.iter_mut().rev() {
                *slot = idx % p;
                idx /= p;
            }
            BaseRingElement(out)
        })
    }
}

impl fmt::Display for BaseRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "{a}+{b}u+{c}v+{d}uv")
    }
}

/// `R_m` over a fixed realization of `F_{p^m}`.
#[derive(Clone, Debug)]
pub struct Ring {
    field: Arc<Field>,
}

impl Ring {
    pub fn new(field: Field) -> Self {
        Ring {
            field: Arc::new(field),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn contains(&self, x: &RingElement) -> bool {
        x.0.iter().all(|&c| self.field.contains(c))
    }

    pub fn check(&self, x: &RingElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ParamsMismatch)
        }
    }

    /// Embeds a base-ring element coefficientwise.
    pub fn embed(&self, b: BaseRingElement) -> RingElement {
        RingElement(b.0.map(|c| self.field.scalar(c)))
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let k = &*self.field;
        RingElement([
            k.add(x.0[0], y.0[0]),
            k.add(x.0[1], y.0[1]),
            k.add(x.0[2], y.0[2]),
            k.add(x.0[3], y.0[3]),
        ])
    }

    pub fn neg(&self, x: &RingElement) -> RingElement {
        RingElement(x.0.map(|c| self.field.neg(c)))
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let k = &*self.field;
        let [x0, x1, x2, x3] = x.0;
        let [y0, y1, y2, y3] = y.0;
        let c3 = k.add(
            k.add(k.mul(x0, y3), k.mul(x1, y2)),
            k.add(k.mul(x2, y1), k.mul(x3, y0)),
        );
        RingElement([
            k.mul(x0, y0),
            k.add(k.mul(x0, y1), k.mul(x1, y0)),
            k.add(k.mul(x0, y2), k.mul(x2, y0)),
            c3,
        ])
    }

    /// Checked variant of [`Ring::mul`].
    pub fn try_mul(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    pub fn is_unit(&self, x: &RingElement) -> bool {
        !x.0[0].is_zero()
    }

    /// Inverse of a unit: `(a0 + m)^{-1} = a0^{-1} (1 - n + n^2 - n^3)` with
    /// `n = a0^{-1} m` nilpotent (`n^3 = 0` here).
    pub fn inv(&self, x: &RingElement) -> Result<RingElement> {
        let k = &*self.field;
        let a0_inv = k.inv(x.0[0])?;
        let scaled = RingElement(x.0.map(|c| k.mul(a0_inv, c)));
        let n = RingElement([FieldElement::ZERO, scaled.0[1], scaled.0[2], scaled.0[3]]);
        let n2 = self.mul(&n, &n);
        let series = self.add(&self.add(&RingElement::ONE, &self.neg(&n)), &n2);
        let a0 = RingElement([
            a0_inv,
            FieldElement::ZERO,
            FieldElement::ZERO,
            FieldElement::ZERO,
        ]);
        Ok(self.mul(&a0, &series))
    }

    /// `Tr(a + bu + cv + duv) = tr(a) + tr(b)u + tr(c)v + tr(d)uv`.
    pub fn big_trace(&self, x: &RingElement) -> BaseRingElement {
        BaseRingElement(x.0.map(|c| self.field.tr(c)))
    }

    /// `Tr(a * x)` via the field's `tr(a*x)` table, without forming `a * x`.
    #[inline]
    pub fn trace_of_product(&self, a: &RingElement, x: &RingElement) -> BaseRingElement {
        let k = &*self.field;
        let p = k.p();
        let [a0, a1, a2, a3] = a.0;
        let [x0, x1, x2, x3] = x.0;
        BaseRingElement([
            k.tr_mul(a0, x0),
            (k.tr_mul(a0, x1) + k.tr_mul(a1, x0)) % p,
            (k.tr_mul(a0, x2) + k.tr_mul(a2, x0)) % p,
            (k.tr_mul(a0, x3) + k.tr_mul(a1, x2) + k.tr_mul(a2, x1) + k.tr_mul(a3, x0)) % p,
        ])
    }

    /// The automorphism exchanging `u` and `v`.
    pub fn swap_uv(&self, x: &RingElement) -> RingElement {
        let [a, b, c, d] = x.0;
        RingElement([a, c, b, d])
    }

    /// Number of elements `p^{4m}`.
    pub fn order(&self) -> u64 {
        (self.field.order() as u64).pow(4)
    }

    /// The element with lexicographic index `idx` in `0..p^{4m}`.
    pub fn element_at(&self, idx: u64) -> RingElement {
        let q = self.field.order() as u64;
        let mut rest = idx;
        let mut out = [FieldElement::ZERO; 4];
        for slot in out.iter_mut().rev() {
            *slot = FieldElement::from_enc((rest % q) as u32);
            rest /= q;
        }
        RingElement(out)
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        (0..self.order()).map(|i| self.element_at(i))
    }

    /// The defining set `L`: all elements whose constant coefficient is a
    /// nonzero square, ordered by `(enc a0, enc a1, enc a2, enc a3)`.
    pub fn enumerate_l(&self) -> Vec<RingElement> {
        let (squares, _) = self.field.squares_and_nonsquares();
        self.with_leading(&squares)
    }

    /// The maximal ideal `M` (constant coefficient zero), same order.
    pub fn enumerate_m(&self) -> Vec<RingElement> {
        self.with_leading(&[FieldElement::ZERO])
    }

    fn with_leading(&self, leads: &[FieldElement]) -> Vec<RingElement> {
        let q = self.field.order();
        let mut out = Vec::with_capacity(leads.len() * (q as usize).pow(3));
        for &a0 in leads {
            for a1 in 0..q {
                for a2 in 0..q {
                    for a3 in 0..q {
                        out.push(RingElement([
                            a0,
                            FieldElement::from_enc(a1),
                            FieldElement::from_enc(a2),
                            FieldElement::from_enc(a3),
                        ]));
                    }
                }
            }
        }
        out
    }

    pub fn is_in_l(&self, x: &RingElement) -> bool {
        self.contains(x) && self.field.is_square(x.0[0])
    }
}
