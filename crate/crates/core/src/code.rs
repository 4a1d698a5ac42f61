//! The trace code `C(m, p) = { (Tr(a x))_{x in L} : a in R_m }`, its Gray
//! image, and exact Lee weight enumeration.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::thread;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{roots_of_unity, Field, FieldElement};
use crate::ring::{BaseRingElement, Ring, RingElement};

/// Largest defining set the constructor will materialize.
pub const MAX_RING_LENGTH: u64 = 1 << 22;

/// Default work budget, counted in coordinate evaluations.
pub const DEFAULT_BUDGET: u128 = 1 << 31;

pub const DEFAULT_SAMPLES: usize = 32;

/// Rank checks at construction are skipped above this many matrix entries.
const CONSTRUCTION_RANK_CHECK_LIMIT: u64 = 1 << 24;

const DRIFT_TOLERANCE: f64 = 1e-3;

/// The three unit multipliers whose action on `C(m, p)` mixes the four
/// Gray blocks.
pub const BLOCK_MIXING_UNITS: [BaseRingElement; 3] = [
    BaseRingElement([1, 1, 0, 0]),
    BaseRingElement([1, 0, 1, 0]),
    BaseRingElement([1, 1, 1, 1]),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    ByClass,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "by_class" | "by-class" => Ok(Mode::ByClass),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::ByClass => "by_class",
        }
    }
}

/// Knobs for the enumeration engine.
#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    pub workers: usize,
    pub budget: u128,
    pub samples: usize,
    pub seed: u64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            workers: 1,
            budget: DEFAULT_BUDGET,
            samples: DEFAULT_SAMPLES,
            seed: 0,
        }
    }
}

/// Exact weight enumerator: weight to number of codewords.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightDistribution {
    pub entries: BTreeMap<u64, u64>,
}

impl WeightDistribution {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut d = WeightDistribution::default();
        for (w, f) in pairs {
            d.add(w, f);
        }
        d
    }

    pub fn add(&mut self, weight: u64, count: u64) {
        if count > 0 {
            *self.entries.entry(weight).or_insert(0) += count;
        }
    }

    pub fn merge(&mut self, other: &WeightDistribution) {
        for (&w, &f) in &other.entries {
            self.add(w, f);
        }
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Smallest nonzero weight.
    pub fn min_distance(&self) -> Option<u64> {
        self.entries.keys().copied().find(|&w| w > 0)
    }

    pub fn max_weight(&self) -> Option<u64> {
        self.entries.keys().copied().rfind(|&w| w > 0)
    }

    /// Nonzero weights in ascending order.
    pub fn nonzero_weights(&self) -> Vec<u64> {
        self.entries.keys().copied().filter(|&w| w > 0).collect()
    }
}

/// A `K x N` matrix over `F_p`, one row per basis codeword.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    pub p: u32,
    pub rows: Vec<Vec<u8>>,
}

impl GeneratorMatrix {
    pub fn new(p: u32, rows: Vec<Vec<u8>>) -> Result<Self> {
        if let Some(first) = rows.first() {
            if rows.iter().any(|r| r.len() != first.len()) {
                return Err(Error::RaggedMatrix);
            }
        }
        Ok(GeneratorMatrix { p, rows })
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// Rank over `F_p` by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let p = self.p as u64;
        let mut rows: Vec<Vec<u8>> = self.rows.clone();
        let n = self.n();
        let mut rank = 0;
        for col in 0..n {
            if rank == rows.len() {
                break;
            }
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = mod_inverse(rows[rank][col] as u64, p);
            let pivot_row: Vec<u8> = rows[rank]
                .iter()
                .map(|&x| (x as u64 * inv % p) as u8)
                .collect();
            rows[rank] = pivot_row.clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == rank || row[col] == 0 {
                    continue;
                }
                let factor = row[col] as u64;
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = ((*x as u64 + p * p - factor * y as u64) % p) as u8;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Digit-matrix text: `K` lines of `N` digits in `[0, p)`, no separators.
    /// Symbols `>= 10` use lowercase base-36 digits.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.k() * (self.n() + 1));
        for row in &self.rows {
            for &x in row {
                out.push(char::from_digit(x as u32, 36).expect("symbol below 36"));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(p: u32, text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.is_empty())
            .map(|line| {
                line.chars()
                    .map(|c| match c.to_digit(36) {
                        Some(d) if d < p => Ok(d as u8),
                        _ => Err(Error::InvalidCoefficients(vec![])),
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GeneratorMatrix::new(p, rows)
    }
}

pub(crate) fn mod_inverse(x: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = x % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// A word of the Gray image, laid out as four contiguous blocks of length
/// `n` carrying `d`, `c + d`, `b + d` and `a + b + c + d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayWord(pub Vec<u32>);

impl GrayWord {
    pub fn hamming_weight(&self) -> usize {
        self.0.iter().filter(|&&x| x != 0).count()
    }
}

/// Applies the Gray map to a vector over `R`.
pub fn gray(codeword: &[BaseRingElement], p: u32) -> GrayWord {
    let n = codeword.len();
    let mut out = vec![0u32; 4 * n];
    for (j, sym) in codeword.iter().enumerate() {
        for (block, value) in sym.gray(p).into_iter().enumerate() {
            out[block * n + j] = value;
        }
    }
    GrayWord(out)
}

/// Lee weight of a vector over `R`.
pub fn lee_weight_vec(codeword: &[BaseRingElement], p: u32) -> u64 {
    codeword.iter().map(|b| b.lee_weight(p) as u64).sum()
}

/// `Theta(y) = sum_j omega^{y_j}`.
pub fn theta_word(y: &[u32], p: u32) -> Complex64 {
    let counts = symbol_counts(y, p);
    theta_from_counts(&counts, 1, &roots_of_unity(p))
}

/// `sum_{s=1}^{p-1} Theta(s y)`.
pub fn sum_theta_multiples(y: &[u32], p: u32) -> Complex64 {
    let counts = symbol_counts(y, p);
    let roots = roots_of_unity(p);
    (1..p).map(|s| theta_from_counts(&counts, s, &roots)).sum()
}

fn symbol_counts(y: &[u32], p: u32) -> Vec<u64> {
    let mut counts = vec![0u64; p as usize];
    for &s in y {
        counts[s as usize] += 1;
    }
    counts
}

fn theta_from_counts(counts: &[u64], s: u32, roots: &[Complex64]) -> Complex64 {
    let p = counts.len() as u32;
    counts
        .iter()
        .enumerate()
        .map(|(k, &c)| roots[((k as u32 * s) % p) as usize] * c as f64)
        .sum()
}

/// The code `C(m, p)` with its defining set materialized.
#[derive(Clone, Debug)]
pub struct TraceCode {
    ring: Ring,
    l: Vec<RingElement>,
    /// Rank of each field element among the squares, `u32::MAX` otherwise.
    square_rank: Vec<u32>,
    basis: Vec<RingElement>,
    /// Lee weight of every base-ring symbol, indexed by its base-p encoding.
    lee_table: Vec<u8>,
}

impl TraceCode {
    pub fn new(field: Field) -> Result<Self> {
        let q = field.order() as u64;
        let n = (q - 1) / 2 * q.pow(3);
        if n > MAX_RING_LENGTH {
            return Err(Error::BudgetExceeded {
                required: n as u128,
                budget: MAX_RING_LENGTH as u128,
            });
        }
        let m = field.m();
        let p = field.p();
        let (squares, _) = field.squares_and_nonsquares();
        let mut square_rank = vec![u32::MAX; q as usize];
        for (i, s) in squares.iter().enumerate() {
            square_rank[s.enc() as usize] = i as u32;
        }
        let ring = Ring::new(field);
        let l = ring.enumerate_l();
        let zero = FieldElement::ZERO;
        let mut basis = Vec::with_capacity(4 * m);
        for slot in 0..4 {
            for i in 0..m {
                let beta = FieldElement::from_enc(p.pow(i as u32));
                let mut comps = [zero; 4];
                comps[slot] = beta;
                basis.push(RingElement(comps));
            }
        }
        let lee_table = BaseRingElement::all(p)
            .map(|b| b.lee_weight(p) as u8)
            .collect();
        let code = TraceCode {
            ring,
            l,
            square_rank,
            basis,
            lee_table,
        };
        if (code.gray_length() * code.dimension()) as u64 <= CONSTRUCTION_RANK_CHECK_LIMIT {
            code.generator_matrix()?;
        }
        Ok(code)
    }

    /// Convenience constructor with the default modulus.
    pub fn with_params(p: u32, m: usize) -> Result<Self> {
        TraceCode::new(Field::new(p, m, None)?)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn p(&self) -> u32 {
        self.ring.p()
    }

    pub fn m(&self) -> usize {
        self.field().m()
    }

    /// The ordered defining set `L`.
    pub fn defining_set(&self) -> &[RingElement] {
        &self.l
    }

    /// Length over `R`, `|L|`.
    pub fn ring_length(&self) -> usize {
        self.l.len()
    }

    /// Gray length `N = 4 |L|`.
    pub fn gray_length(&self) -> usize {
        4 * self.l.len()
    }

    /// Gray dimension `K = 4m`.
    pub fn dimension(&self) -> usize {
        4 * self.m()
    }

    /// Number of codewords `p^{4m}`.
    pub fn size(&self) -> u64 {
        self.ring.order()
    }

    pub fn basis(&self) -> &[RingElement] {
        &self.basis
    }

    /// Position of `x` in `L`.
    pub fn index_in_l(&self, x: &RingElement) -> Option<usize> {
        if !self.ring.contains(x) {
            return None;
        }
        let rank = self.square_rank[x.0[0].enc() as usize];
        if rank == u32::MAX {
            return None;
        }
        let q = self.field().order() as usize;
        let [_, a1, a2, a3] = x.0;
        Some(
            ((rank as usize * q + a1.enc() as usize) * q + a2.enc() as usize) * q
                + a3.enc() as usize,
        )
    }

    /// `Ev(a) = (Tr(a x))_{x in L}`.
    pub fn evaluate(&self, a: &RingElement) -> Result<Vec<BaseRingElement>> {
        self.ring.check(a)?;
        Ok(self
            .l
            .iter()
            .map(|x| self.ring.trace_of_product(a, x))
            .collect())
    }

    pub fn gray_word(&self, a: &RingElement) -> Result<GrayWord> {
        Ok(gray(&self.evaluate(a)?, self.p()))
    }

    #[inline]
    fn symbol_lee_weight(&self, b: BaseRingElement) -> u64 {
        let p = self.p();
        let [b0, b1, b2, b3] = b.0;
        self.lee_table[(((b0 * p + b1) * p + b2) * p + b3) as usize] as u64
    }

    /// Lee weight of `Ev(a)`, computed without materializing the codeword.
    pub fn lee_weight_of(&self, a: &RingElement) -> u64 {
        self.l
            .iter()
            .map(|x| self.symbol_lee_weight(self.ring.trace_of_product(a, x)))
            .sum()
    }

    /// Rows are the Gray images of `Ev(b)` for `b` running over
    /// `beta_i`, `beta_i u`, `beta_i v`, `beta_i uv` (component-major).
    pub fn generator_matrix(&self) -> Result<GeneratorMatrix> {
        let p = self.p();
        let rows = self
            .basis
            .iter()
            .map(|b| {
                let word = self.gray_word(b)?;
                Ok(word.0.into_iter().map(|x| x as u8).collect())
            })
            .collect::<Result<Vec<Vec<u8>>>>()?;
        let g = GeneratorMatrix::new(p, rows)?;
        let rank = g.rank();
        if rank < self.dimension() {
            return Err(Error::RankDeficient {
                rank,
                expected: self.dimension(),
            });
        }
        Ok(g)
    }

    /// Coordinate evaluations needed for an exhaustive pass.
    pub fn exhaustive_work(&self) -> u128 {
        self.size() as u128 * self.ring_length() as u128
    }

    pub fn weight_distribution(
        &self,
        mode: Mode,
        opts: &EnumerationOptions,
    ) -> Result<WeightDistribution> {
        match mode {
            Mode::Exhaustive => self.weight_distribution_exhaustive(opts),
            Mode::ByClass => self.weight_distribution_by_class(opts),
        }
    }

    fn weight_distribution_exhaustive(
        &self,
        opts: &EnumerationOptions,
    ) -> Result<WeightDistribution> {
        let required = self.exhaustive_work();
        if required > opts.budget {
            return Err(Error::BudgetExceeded {
                required,
                budget: opts.budget,
            });
        }
        let total = self.size();
        let chunks = partition(total, opts.workers.max(1));
        let partial = |(start, end): (u64, u64)| {
            let mut hist = WeightDistribution::default();
            for idx in start..end {
                let a = self.ring.element_at(idx);
                hist.add(self.lee_weight_of(&a), 1);
            }
            hist
        };
        let mut merged = WeightDistribution::default();
        if chunks.len() == 1 {
            merged = partial(chunks[0]);
        } else {
            thread::scope(|s| {
                let handles: Vec<_> = chunks
                    .iter()
                    .map(|&range| s.spawn(move || partial(range)))
                    .collect();
                for h in handles {
                    merged.merge(&h.join().expect("worker panicked"));
                }
            });
        }
        Ok(merged)
    }

    /// One weight per class: `{0}`, `{alpha uv : alpha square}`,
    /// `{alpha uv : alpha non-square}`, and a seeded sample of the rest.
    /// Every evaluated member of a class must agree.
    fn weight_distribution_by_class(
        &self,
        opts: &EnumerationOptions,
    ) -> Result<WeightDistribution> {
        let q = self.field().order() as u64;
        let required = (q - 1 + opts.samples as u64) as u128 * self.ring_length() as u128;
        if required > opts.budget {
            return Err(Error::BudgetExceeded {
                required,
                budget: opts.budget,
            });
        }
        let (squares, nonsquares) = self.field().squares_and_nonsquares();
        let class_weight = |name: &'static str, reps: &mut dyn Iterator<Item = RingElement>| {
            let mut seen: Option<u64> = None;
            for a in reps {
                let w = self.lee_weight_of(&a);
                match seen {
                    None => seen = Some(w),
                    Some(first) if first != w => {
                        return Err(Error::ClassNotConstant {
                            class: name,
                            first,
                            second: w,
                        })
                    }
                    _ => {}
                }
            }
            Ok(seen)
        };
        let mut dist = WeightDistribution::default();
        dist.add(0, 1);
        let half = (q - 1) / 2;
        if let Some(w) = class_weight(
            "square multiples of uv",
            &mut squares.iter().map(|&s| RingElement::uv_multiple(s)),
        )? {
            dist.add(w, half);
        }
        if let Some(w) = class_weight(
            "non-square multiples of uv",
            &mut nonsquares.iter().map(|&s| RingElement::uv_multiple(s)),
        )? {
            dist.add(w, half);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let size = self.size();
        let mut generic =
            std::iter::repeat_with(|| self.ring.element_at(rng.random_range(0..size)))
                .filter(|a| !a.is_uv_multiple())
                .take(opts.samples.max(1));
        if let Some(w) = class_weight("generic", &mut generic)? {
            dist.add(w, size - q);
        }
        Ok(dist)
    }

    /// `theta(a) = Theta(phi(Ev(a)))`.
    pub fn theta(&self, a: &RingElement) -> Result<Complex64> {
        Ok(self.theta_multiples(a)?[1])
    }

    /// `theta(s a)` for `s` in `0..p`, from a single pass over `Ev(a)`.
    pub fn theta_multiples(&self, a: &RingElement) -> Result<Vec<Complex64>> {
        let p = self.p();
        let word = self.gray_word(a)?;
        let counts = symbol_counts(&word.0, p);
        let roots = roots_of_unity(p);
        Ok((0..p)
            .map(|s| theta_from_counts(&counts, s, &roots))
            .collect())
    }

    /// Lee weight of `Ev(a)` from `((p-1) N - sum_s theta(s a)) / p`.
    pub fn weight_via_character_sum(&self, a: &RingElement) -> Result<u64> {
        let p = self.p() as f64;
        let thetas = self.theta_multiples(a)?;
        let sum: Complex64 = thetas[1..].iter().sum();
        let n = self.gray_length() as f64;
        let w = ((p - 1.0) * n - sum.re) / p;
        let rounded = w.round();
        let residual = (w - rounded).abs().max(sum.im.abs() / p);
        if residual > DRIFT_TOLERANCE {
            return Err(Error::NumericalDrift { residual });
        }
        Ok(rounded as u64)
    }

    /// Checks that multiplying coordinates by `c in L` permutes `Ev(a)` into
    /// `Ev(a c)`: `Ev(a c)_j = Ev(a)_{index(c L[j])}`.
    pub fn abelian_action_check(&self, c: &RingElement, a: &RingElement) -> Result<bool> {
        if !self.ring.is_in_l(c) {
            return Err(Error::NotInL);
        }
        let base = self.evaluate(a)?;
        let shifted = self.evaluate(&self.ring.mul(a, c))?;
        for (j, x) in self.l.iter().enumerate() {
            let Some(target) = self.index_in_l(&self.ring.mul(c, x)) else {
                return Ok(false);
            };
            if shifted[j] != base[target] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// For a base-ring unit `e`, checks that `e * Ev(a)` (coordinatewise)
    /// is the codeword `Ev(e a)` and that its Lee weight equals that of
    /// `Ev(a)`.
    pub fn unit_multiplication_check(
        &self,
        unit: BaseRingElement,
        a: &RingElement,
    ) -> Result<bool> {
        let p = self.p();
        if unit.0[0].is_multiple_of(p) {
            return Err(Error::NotInL);
        }
        let base = self.evaluate(a)?;
        let scaled: Vec<BaseRingElement> = base.iter().map(|&b| unit.mul(b, p)).collect();
        let expected = self.evaluate(&self.ring.mul(&self.ring.embed(unit), a))?;
        Ok(scaled == expected && lee_weight_vec(&scaled, p) == lee_weight_vec(&base, p))
    }

    /// A uniformly random ring element from a caller-owned generator.
    pub fn random_element(&self, rng: &mut impl Rng) -> RingElement {
        self.ring.element_at(rng.random_range(0..self.size()))
    }

    /// A uniformly random element of `L`.
    pub fn random_l_element(&self, rng: &mut impl Rng) -> RingElement {
        self.l[rng.random_range(0..self.l.len())]
    }
}

/// Splits `0..total` into `parts` contiguous ranges of near-equal size.
pub(crate) fn partition(total: u64, parts: usize) -> Vec<(u64, u64)> {
    let parts = (parts as u64).clamp(1, total.max(1));
    let base = total / parts;
    let extra = total % parts;
    let mut out = Vec::with_capacity(parts as usize);
    let mut start = 0;
    for i in 0..parts {
        let len = base + u64::from(i < extra);
        out.push((start, start + len));
        start += len;
    }
    out
}

/// Renders a distribution as `{w:f, ...}`.
pub fn format_distribution(d: &WeightDistribution) -> String {
    let mut s = String::from("{");
    for (i, (w, f)) in d.entries.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{w}:{f}");
    }
    s.push('}');
    s
}
