//! Dual distance, minimal codewords and the secret-sharing dichotomy.
//!
//! The Hamming dual of the Gray image is probed through its generator
//! matrix: a zero column is a dual word of weight 1, two proportional
//! columns give one of weight 2. The Lee dual over `R` is searched
//! directly for vectors supported on at most two coordinates.

use std::collections::HashMap;
use std::thread;

use serde::{Serialize, Serializer};

use crate::code::{mod_inverse, partition, EnumerationOptions, GeneratorMatrix, TraceCode};
use crate::error::{Error, Result};
use crate::ring::BaseRingElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrayDualClass {
    One,
    Two,
    MoreThanTwo,
}

impl GrayDualClass {
    pub fn as_str(self) -> &'static str {
        match self {
            GrayDualClass::One => "1",
            GrayDualClass::Two => "2",
            GrayDualClass::MoreThanTwo => ">2",
        }
    }
}

impl Serialize for GrayDualClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GrayDualClass::One => s.serialize_u8(1),
            GrayDualClass::Two => s.serialize_u8(2),
            GrayDualClass::MoreThanTwo => s.serialize_str(">2"),
        }
    }
}

/// `column[i] = lambda * column[j]` over `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProportionalColumns {
    pub i: usize,
    pub j: usize,
    pub lambda: u32,
}

/// A vector over `R` orthogonal to every codeword, with its support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingDualWitness {
    pub support: Vec<usize>,
    #[serde(serialize_with = "ser_symbols")]
    pub values: Vec<BaseRingElement>,
    pub lee_weight: u32,
}

fn ser_symbols<S: Serializer>(v: &[BaseRingElement], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|b| b.0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualDistanceReport {
    pub gray_class: GrayDualClass,
    pub zero_column: Option<usize>,
    pub gray_witness: Option<ProportionalColumns>,
    /// Columns proportional to some earlier column.
    pub proportional_columns: usize,
    pub ring_low_weight_witness: Option<RingDualWitness>,
}

/// Classifies the Hamming dual distance of the code generated by `g` as
/// 1, 2 or more, with the first witness in column-index order.
pub fn gray_dual_distance_class(g: &GeneratorMatrix) -> Result<DualDistanceReport> {
    let rank = g.rank();
    if rank < g.k() {
        return Err(Error::RankDeficient {
            rank,
            expected: g.k(),
        });
    }
    let p = g.p as u64;
    let n = g.n();
    let zero_column = (0..n).find(|&j| g.rows.iter().all(|r| r[j] == 0));
    // Normalized column (first nonzero entry scaled to 1) -> first index and
    // its leading entry.
    let mut first_seen: HashMap<Vec<u8>, (usize, u64)> = HashMap::with_capacity(n);
    let mut best: Option<ProportionalColumns> = None;
    let mut proportional = 0usize;
    for j in 0..n {
        let col = g.column(j);
        let Some(&lead) = col.iter().find(|&&x| x != 0) else {
            continue;
        };
        let inv = mod_inverse(lead as u64, p);
        let normalized: Vec<u8> = col.iter().map(|&x| (x as u64 * inv % p) as u8).collect();
        match first_seen.get(&normalized) {
            Some(&(i, lead_i)) => {
                proportional += 1;
                // The earliest i with a later partner, paired with its
                // earliest partner, is the first hit of an (i, j) scan.
                let candidate = ProportionalColumns {
                    i,
                    j,
                    lambda: (lead_i * mod_inverse(lead as u64, p) % p) as u32,
                };
                if best.is_none_or(|b| (i, j) < (b.i, b.j)) {
                    best = Some(candidate);
                }
            }
            None => {
                first_seen.insert(normalized, (j, lead as u64));
            }
        }
    }
    let gray_class = if zero_column.is_some() {
        GrayDualClass::One
    } else if best.is_some() {
        GrayDualClass::Two
    } else {
        GrayDualClass::MoreThanTwo
    };
    Ok(DualDistanceReport {
        gray_class,
        zero_column,
        gray_witness: if gray_class == GrayDualClass::Two {
            best
        } else {
            None
        },
        proportional_columns: proportional,
        ring_low_weight_witness: None,
    })
}

/// Re-checks `column[i] = lambda * column[j]` entry by entry.
pub fn verify_proportional(g: &GeneratorMatrix, w: &ProportionalColumns) -> bool {
    let p = g.p;
    !w.lambda.is_multiple_of(p)
        && w.i != w.j
        && g.rows
            .iter()
            .all(|r| r[w.i] as u32 == (w.lambda * r[w.j] as u32) % p)
}

/// Searches vectors over `R` supported on at most `max_support`
/// coordinates that are orthogonal to `C(m, p)`, returning one of minimum
/// Lee weight (ties broken by support, then values).
pub fn ring_dual_low_weight_search(
    code: &TraceCode,
    max_support: usize,
    budget: u128,
) -> Result<Option<RingDualWitness>> {
    let p = code.p();
    let n = code.ring_length();
    let gens = code
        .basis()
        .iter()
        .map(|b| code.evaluate(b))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<BaseRingElement> = BaseRingElement::all(p).skip(1).collect();
    let required = n as u128 * values.len() as u128 * gens.len() as u128;
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let signature = |j: usize, gamma: BaseRingElement| -> Vec<BaseRingElement> {
        gens.iter().map(|g| gamma.mul(g[j], p)).collect()
    };
    let mut by_weight: Vec<Vec<BaseRingElement>> = vec![Vec::new(); 5];
    for &v in &values {
        by_weight[v.lee_weight(p) as usize].push(v);
    }

    // Support one: gamma * c_j = 0 for every generator.
    let mut best: Option<RingDualWitness> = None;
    if max_support >= 1 {
        'outer: for (w, class) in by_weight.iter().enumerate().skip(1) {
            for j in 0..n {
                for &gamma in class {
                    if signature(j, gamma).iter().all(BaseRingElement::is_zero) {
                        best = Some(RingDualWitness {
                            support: vec![j],
                            values: vec![gamma],
                            lee_weight: w as u32,
                        });
                        break 'outer;
                    }
                }
            }
        }
    }
    if max_support < 2 {
        return Ok(best);
    }
    let ceiling = best.as_ref().map_or(8, |b| b.lee_weight as usize - 1);
    for total in 2..=ceiling {
        let mut found: Option<RingDualWitness> = None;
        for w1 in 1..=total / 2 {
            let w2 = total - w1;
            if w2 > 4 {
                continue;
            }
            let mut table: HashMap<Vec<BaseRingElement>, Vec<(usize, BaseRingElement)>> =
                HashMap::new();
            for j in 0..n {
                for &delta in &by_weight[w2] {
                    table
                        .entry(signature(j, delta))
                        .or_default()
                        .push((j, delta));
                }
            }
            for i in 0..n {
                for &gamma in &by_weight[w1] {
                    let Some(hits) = table.get(&signature(i, gamma.neg(p))) else {
                        continue;
                    };
                    for &(j, delta) in hits {
                        if j == i {
                            continue;
                        }
                        let (support, vals) = if i < j {
                            (vec![i, j], vec![gamma, delta])
                        } else {
                            (vec![j, i], vec![delta, gamma])
                        };
                        let better = found
                            .as_ref()
                            .is_none_or(|f| (&support, &vals) < (&f.support, &f.values));
                        if better {
                            found = Some(RingDualWitness {
                                support,
                                values: vals,
                                lee_weight: total as u32,
                            });
                        }
                    }
                }
            }
        }
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(best)
}

/// Recomputes `sum_j w_j c_j` in `R` for every basis codeword from a fresh
/// evaluation and checks that each sum vanishes.
pub fn verify_ring_witness(code: &TraceCode, w: &RingDualWitness) -> Result<bool> {
    let p = code.p();
    if w.values.iter().all(BaseRingElement::is_zero) || w.support.len() != w.values.len() {
        return Ok(false);
    }
    for b in code.basis() {
        let c = code.evaluate(b)?;
        let mut acc = BaseRingElement::ZERO;
        for (&j, &v) in w.support.iter().zip(&w.values) {
            acc = acc.add(v.mul(c[j], p), p);
        }
        if !acc.is_zero() {
            return Ok(false);
        }
    }
    let lee: u32 = w.values.iter().map(|v| v.lee_weight(p)).sum();
    Ok(lee == w.lee_weight)
}

/// `w_min / w_max > (p - 1) / p`, evaluated as `p w_min > (p - 1) w_max`.
pub fn ab_ratio_criterion(w_min: u64, w_max: u64, p: u32) -> bool {
    (p as u128) * (w_min as u128) > (p as u128 - 1) * (w_max as u128)
}

/// Indices of a codeword whose support strictly contains (or equals,
/// without being an associate of) another nonzero codeword's support.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NonMinimalWitness {
    pub covering: usize,
    pub covered: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub criterion_passed: bool,
    pub brute_force_all_minimal: Option<bool>,
    pub non_minimal_witness: Option<NonMinimalWitness>,
}

impl MinimalityReport {
    /// Minimality is established by the ratio test or by brute force.
    pub fn all_minimal(&self) -> Option<bool> {
        if self.criterion_passed {
            Some(true)
        } else {
            self.brute_force_all_minimal
        }
    }
}

struct Support {
    bits: Vec<u64>,
    weight: u32,
}

fn support_of(word: &[u32]) -> Support {
    let mut bits = vec![0u64; word.len().div_ceil(64)];
    let mut weight = 0;
    for (j, &x) in word.iter().enumerate() {
        if x != 0 {
            bits[j / 64] |= 1 << (j % 64);
            weight += 1;
        }
    }
    Support { bits, weight }
}

fn is_scalar_multiple(y: &[u32], x: &[u32], p: u32) -> bool {
    let Some(j) = x.iter().position(|&v| v != 0) else {
        return false;
    };
    let s = (y[j] as u64 * mod_inverse(x[j] as u64, p as u64) % p as u64) as u32;
    s != 0 && x.iter().zip(y).all(|(&a, &b)| (a * s) % p == b)
}

/// Checks every ordered pair of nonzero codewords `(x, y)` with `y` not a
/// scalar multiple of `x` for `supp(y) subset of supp(x)`. The first hit in
/// `(x, y)` index order is reported.
pub fn minimality_of_codewords(
    codewords: &[Vec<u32>],
    p: u32,
    workers: usize,
    budget: u128,
) -> Result<(bool, Option<NonMinimalWitness>)> {
    let words = codewords.first().map_or(0, |c| c.len().div_ceil(64));
    let count = codewords.len() as u128;
    let required = count * count * words.max(1) as u128;
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let supports: Vec<Support> = codewords.iter().map(|c| support_of(c)).collect();
    let scan = |(start, end): (u64, u64)| -> Option<NonMinimalWitness> {
        for xi in start as usize..end as usize {
            let sx = &supports[xi];
            if sx.weight == 0 {
                continue;
            }
            for (yi, sy) in supports.iter().enumerate() {
                if yi == xi || sy.weight == 0 || sy.weight > sx.weight {
                    continue;
                }
                let covered = sy.bits.iter().zip(&sx.bits).all(|(&b, &a)| b & !a == 0);
                if !covered {
                    continue;
                }
                if sy.weight == sx.weight && is_scalar_multiple(&codewords[yi], &codewords[xi], p) {
                    continue;
                }
                return Some(NonMinimalWitness {
                    covering: xi,
                    covered: yi,
                });
            }
        }
        None
    };
    let chunks = partition(codewords.len() as u64, workers.max(1));
    let witness = if chunks.len() == 1 {
        scan(chunks[0])
    } else {
        thread::scope(|s| {
            let handles: Vec<_> = chunks.iter().map(|&c| s.spawn(move || scan(c))).collect();
            // Chunks are in index order, so the first chunk with a hit holds
            // the smallest covering index.
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .next()
        })
    };
    Ok((witness.is_none(), witness))
}

/// Full brute-force minimality of the Gray image, combined with the ratio
/// test on the empirical extreme weights.
pub fn brute_force_minimality(
    code: &TraceCode,
    opts: &EnumerationOptions,
) -> Result<MinimalityReport> {
    let words = code.gray_length().div_ceil(64) as u128;
    let count = code.size() as u128;
    let required = count * count * words;
    if required > opts.budget {
        return Err(Error::BudgetExceeded {
            required,
            budget: opts.budget,
        });
    }
    let codewords: Vec<Vec<u32>> = code
        .ring()
        .elements()
        .map(|a| code.gray_word(&a).map(|w| w.0))
        .collect::<Result<_>>()?;
    let weights: Vec<u64> = codewords
        .iter()
        .map(|c| c.iter().filter(|&&x| x != 0).count() as u64)
        .filter(|&w| w > 0)
        .collect();
    let w_min = weights.iter().copied().min().unwrap_or(0);
    let w_max = weights.iter().copied().max().unwrap_or(0);
    let criterion_passed = w_min > 0 && ab_ratio_criterion(w_min, w_max, code.p());
    let (all_minimal, witness) =
        minimality_of_codewords(&codewords, code.p(), opts.workers, opts.budget)?;
    Ok(MinimalityReport {
        criterion_passed,
        brute_force_all_minimal: Some(all_minimal),
        non_minimal_witness: witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SssVerdict {
    /// Dual distance 2: some coordinates take part in every coalition.
    Dictatorial { evidence: ProportionalColumns },
    /// Dual distance at least 3: every participant is in equally many
    /// minimal coalitions.
    Democratic,
}

/// Democratic/dictatorial classification of the Massey scheme. The
/// dichotomy presumes every nonzero codeword is minimal; callers establish
/// that separately.
pub fn sss_classify(report: &DualDistanceReport) -> Result<SssVerdict> {
    match report.gray_class {
        GrayDualClass::One => Err(Error::Class1Anomaly),
        GrayDualClass::Two => Ok(SssVerdict::Dictatorial {
            evidence: report.gray_witness.expect("class 2 carries a witness"),
        }),
        GrayDualClass::MoreThanTwo => Ok(SssVerdict::Democratic),
    }
}
