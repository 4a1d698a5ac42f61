//! Command implementations behind the `tracecode` binary.
//!
//! Each command returns a report that renders to JSON, CSV or a plain
//! table. JSON key order is fixed and integers that scale with `p^{4m}`
//! are written as decimal strings, so identical configurations give
//! byte-identical output whatever the worker count.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serializer;
use serde_json::{json, Map, Value};

use crate::analysis::{self, GrayDualClass, MinimalityReport, SssVerdict};
use crate::code::{
    gray, sum_theta_multiples, EnumerationOptions, Mode, TraceCode, WeightDistribution,
    BLOCK_MIXING_UNITS, DEFAULT_BUDGET, DEFAULT_SAMPLES,
};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::ring::RingElement;
use crate::theory::{self, Regime};

const COMPLEX_TOLERANCE: f64 = 1e-6;
const ORACLE_SAMPLES: usize = 1000;
const ORACLE_EXHAUSTIVE_LIMIT: u64 = 4096;
const ACTION_SAMPLES: usize = 100;
const WORD_SAMPLES: usize = 100;

pub fn ser_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Table,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "table" => Ok(OutputFormat::Table),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

/// Everything a command needs to know.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub p: u32,
    pub m: usize,
    pub modulus: Option<Vec<u32>>,
    /// `None` picks exhaustive when it fits the budget, by-class otherwise.
    pub mode: Option<Mode>,
    pub samples: usize,
    pub workers: usize,
    pub budget: u128,
    pub seed: u64,
    /// Include wall-clock timings in reports.
    pub timing: bool,
}

impl RunConfig {
    pub fn new(p: u32, m: usize) -> Self {
        RunConfig {
            p,
            m,
            modulus: None,
            mode: None,
            samples: DEFAULT_SAMPLES,
            workers: 1,
            budget: DEFAULT_BUDGET,
            seed: 0,
            timing: true,
        }
    }

    pub fn field(&self) -> Result<Field> {
        Field::new(self.p, self.m, self.modulus.clone())
    }

    pub fn code(&self) -> Result<TraceCode> {
        TraceCode::new(self.field()?)
    }

    pub fn enumeration(&self) -> EnumerationOptions {
        EnumerationOptions {
            workers: self.workers.max(1),
            budget: self.budget,
            samples: self.samples,
            seed: self.seed,
        }
    }

    fn resolve_mode(&self, code: &TraceCode) -> Mode {
        self.mode
            .unwrap_or(if code.exhaustive_work() <= self.budget {
                Mode::Exhaustive
            } else {
                Mode::ByClass
            })
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

pub trait Report {
    fn to_json(&self) -> Value;
    fn to_table(&self) -> String;

    /// Flat `key,value` rows by default.
    fn to_csv(&self) -> String {
        let mut out = String::from("key,value\n");
        if let Value::Object(map) = self.to_json() {
            for (k, v) in map {
                let cell = match v {
                    Value::String(s) => s,
                    other => other.to_string(),
                };
                let _ = writeln!(out, "{k},{}", csv_escape(&cell));
            }
        }
        out
    }

    fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("valid json");
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Table => self.to_table(),
        }
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn distribution_json(d: &WeightDistribution) -> Value {
    let map: Map<String, Value> = d
        .entries
        .iter()
        .map(|(w, f)| (w.to_string(), Value::String(f.to_string())))
        .collect();
    Value::Object(map)
}

fn table_rows(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
    out
}

/// Complex number as `re+imi`, rounded to six decimals.
pub fn format_complex(z: Complex64) -> String {
    let fmt = |x: f64| {
        let r = (x * 1e6).round() / 1e6;
        let r = if r == 0.0 { 0.0 } else { r };
        let s = format!("{r:.6}");
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if s.is_empty() || s == "-" {
            "0".to_string()
        } else {
            s
        }
    };
    let im = fmt(z.im);
    if let Some(abs) = im.strip_prefix('-') {
        format!("{}-{}i", fmt(z.re), abs)
    } else {
        format!("{}+{}i", fmt(z.re), im)
    }
}

// ---------------------------------------------------------------- spectrum

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub p: u32,
    pub m: usize,
    pub modulus: Vec<u32>,
    pub ring_length: usize,
    pub gray_length: usize,
    pub dimension: usize,
    pub distribution: WeightDistribution,
    pub mode: Mode,
    pub regime: Regime,
    pub prediction_matches: Option<bool>,
    pub elapsed_ms: Option<u128>,
}

pub fn spectrum(cfg: &RunConfig) -> Result<SpectrumReport> {
    let start = cfg.timing.then(Instant::now);
    let code = cfg.code()?;
    let mode = cfg.resolve_mode(&code);
    let distribution = code.weight_distribution(mode, &cfg.enumeration())?;
    let prediction = theory::predict_spectrum(cfg.p, cfg.m);
    let prediction_matches = prediction
        .to_u64_pairs()
        .map(|pairs| WeightDistribution::from_pairs(pairs) == distribution);
    Ok(SpectrumReport {
        p: cfg.p,
        m: cfg.m,
        modulus: code.field().params().modulus.clone(),
        ring_length: code.ring_length(),
        gray_length: code.gray_length(),
        dimension: code.dimension(),
        distribution,
        mode,
        regime: prediction.regime,
        prediction_matches,
        elapsed_ms: start.map(|t| t.elapsed().as_millis()),
    })
}

impl Report for SpectrumReport {
    fn to_json(&self) -> Value {
        let mut v = json!({
            "p": self.p,
            "m": self.m,
            "modulus": self.modulus,
            "n_ring": self.ring_length.to_string(),
            "N": self.gray_length.to_string(),
            "K": self.dimension,
            "weights": distribution_json(&self.distribution),
            "min_distance": self.distribution.min_distance().map(|d| d.to_string()),
            "mode": self.mode.as_str(),
            "regime": self.regime.as_str(),
            "prediction_matches": self.prediction_matches,
        });
        if let Some(ms) = self.elapsed_ms {
            v["elapsed_ms"] = json!(ms);
        }
        v
    }

    /// `weight,frequency`, ascending by weight.
    fn to_csv(&self) -> String {
        let mut out = String::from("weight,frequency\n");
        for (w, f) in &self.distribution.entries {
            let _ = writeln!(out, "{w},{f}");
        }
        out
    }

    fn to_table(&self) -> String {
        let mut rows = vec![
            ("p", self.p.to_string()),
            ("m", self.m.to_string()),
            ("modulus", format!("{:?}", self.modulus)),
            ("n_ring", self.ring_length.to_string()),
            ("N", self.gray_length.to_string()),
            ("K", self.dimension.to_string()),
            ("mode", self.mode.as_str().to_string()),
            ("regime", self.regime.as_str().to_string()),
            (
                "min_distance",
                self.distribution
                    .min_distance()
                    .map_or("-".into(), |d| d.to_string()),
            ),
            (
                "matches prediction",
                self.prediction_matches
                    .map_or("n/a".into(), |b| b.to_string()),
            ),
        ];
        if let Some(ms) = self.elapsed_ms {
            rows.push(("elapsed_ms", ms.to_string()));
        }
        let mut out = table_rows(&rows);
        out.push_str("\nweight      frequency\n");
        for (w, f) in &self.distribution.entries {
            let _ = writeln!(out, "{w:<10}  {f}");
        }
        out
    }
}

// ------------------------------------------------------------------ verify

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
    /// Applicable but not decidable within the work budget.
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NotApplicable => "N/A",
            Verdict::Skipped => "SKIPPED",
        }
    }

    fn of(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug)]
pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    pub predicted: String,
    pub observed: String,
    pub verdict: Verdict,
}

impl Claim {
    fn new(
        id: &'static str,
        statement: &'static str,
        predicted: impl Into<String>,
        observed: impl Into<String>,
        verdict: Verdict,
    ) -> Self {
        Claim {
            id,
            statement,
            predicted: predicted.into(),
            observed: observed.into(),
            verdict,
        }
    }

    fn not_applicable(id: &'static str, statement: &'static str, why: &str) -> Self {
        Claim::new(id, statement, why, "-", Verdict::NotApplicable)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub p: u32,
    pub m: usize,
    pub modulus: Vec<u32>,
    pub regime: Regime,
    pub mode: Mode,
    pub distribution: Option<WeightDistribution>,
    pub claims: Vec<Claim>,
}

impl VerifyReport {
    /// True when no applicable claim failed.
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }
}

fn fmt_pairs(pairs: &[(u64, u64)]) -> String {
    crate::code::format_distribution(&WeightDistribution::from_pairs(pairs.iter().copied()))
}

/// Runs the full cross-check battery for one `(p, m)`.
pub fn verify(cfg: &RunConfig) -> Result<VerifyReport> {
    let code = cfg.code()?;
    let field = code.field();
    let p = cfg.p;
    let m = cfg.m;
    let prediction = theory::predict_spectrum(p, m);
    let regime = prediction.regime;
    let mode = cfg.resolve_mode(&code);
    let opts = cfg.enumeration();
    let mut claims = Vec::new();

    // Parameters.
    let n_pred = theory::gray_length(p, m);
    claims.push(Claim::new(
        "length",
        "N = 4|L| = 2(p^{4m} - p^{3m})",
        n_pred.to_string(),
        code.gray_length().to_string(),
        Verdict::of(n_pred == BigUint::from(code.gray_length())),
    ));
    let rank = code.generator_matrix().map(|g| g.rank());
    claims.push(match rank {
        Ok(r) => Claim::new(
            "dimension",
            "Tr(ax) = 0 on L forces a = 0, so the Gray image has dimension 4m",
            (4 * m).to_string(),
            r.to_string(),
            Verdict::of(r == 4 * m),
        ),
        Err(e) => Claim::new(
            "dimension",
            "Gray image has dimension 4m",
            (4 * m).to_string(),
            e.to_string(),
            Verdict::Fail,
        ),
    });

    // Spectrum.
    let distribution = code.weight_distribution(mode, &opts);
    let predicted_pairs = prediction.to_u64_pairs();
    claims.push(match (&predicted_pairs, &distribution) {
        (None, _) => Claim::not_applicable(
            "spectrum",
            "Lee weight spectrum (three-weight for m = 2 mod 4, two-weight for m odd and p = 3 mod 4)",
            "unsupported regime",
        ),
        (Some(pred), Ok(d)) => Claim::new(
            "spectrum",
            "Lee weight spectrum matches the closed forms",
            fmt_pairs(pred),
            crate::code::format_distribution(d),
            Verdict::of(&WeightDistribution::from_pairs(pred.iter().copied()) == d),
        ),
        (Some(pred), Err(e)) => Claim::new(
            "spectrum",
            "Lee weight spectrum matches the closed forms",
            fmt_pairs(pred),
            e.to_string(),
            Verdict::Fail,
        ),
    });
    claims.push(match (&distribution, mode) {
        (Ok(ex), Mode::Exhaustive) => match code.weight_distribution(Mode::ByClass, &opts) {
            Ok(bc) => Claim::new(
                "weight_classes",
                "weight is constant on {alpha uv: alpha square}, {alpha uv: alpha non-square} and the rest",
                crate::code::format_distribution(ex),
                crate::code::format_distribution(&bc),
                Verdict::of(&bc == ex),
            ),
            Err(e) => Claim::new("weight_classes", "weight is constant on each class", "constant", e.to_string(), Verdict::Fail),
        },
        (Ok(d), Mode::ByClass) => Claim::new(
            "weight_classes",
            "weight is constant on each class (sampled)",
            "constant",
            crate::code::format_distribution(d),
            Verdict::Pass,
        ),
        (Err(Error::ClassNotConstant { .. }), _) | (Err(_), _) => Claim::new(
            "weight_classes",
            "weight is constant on each class",
            "constant",
            distribution.as_ref().err().map(|e| e.to_string()).unwrap_or_default(),
            Verdict::Fail,
        ),
    });

    // Gauss and character sums.
    let g_closed = theory::gauss_sum_closed_form(p, m);
    let g_num = theory::gauss_sum_numeric(field);
    claims.push(Claim::new(
        "gauss_sum",
        "G(eta) = (-1)^{m-1} p^{m/2} (p = 1 mod 4) or (-1)^{m-1} i^m p^{m/2} (p = 3 mod 4)",
        format_complex(g_closed),
        format_complex(g_num),
        Verdict::of((g_closed - g_num).norm() < COMPLEX_TOLERANCE),
    ));
    let (qn, nn) = theory::qbar_nbar_numeric(field);
    claims.push(Claim::new(
        "qbar_plus_nbar",
        "Qbar + Nbar = -1",
        "-1+0i",
        format_complex(qn + nn),
        Verdict::of((qn + nn + 1.0).norm() < COMPLEX_TOLERANCE),
    ));
    claims.push(if m.is_multiple_of(2) {
        let (qc, nc) = theory::qbar_nbar_closed_form(p, m);
        Claim::new(
            "qbar_nbar_closed_form",
            "Qbar = (G - 1)/2 and Nbar = -(G + 1)/2",
            format!("{}, {}", format_complex(qc), format_complex(nc)),
            format!("{}, {}", format_complex(qn), format_complex(nn)),
            Verdict::of(
                (qc - qn).norm() < COMPLEX_TOLERANCE && (nc - nn).norm() < COMPLEX_TOLERANCE,
            ),
        )
    } else {
        Claim::not_applicable(
            "qbar_nbar_closed_form",
            "closed forms for Qbar, Nbar",
            "m odd",
        )
    });
    claims.push(match theory::square_uv_weight_from_qbar(p, m) {
        Some(rebuilt) => {
            let observed =
                code.lee_weight_of(&RingElement::uv_multiple(crate::gf::FieldElement::ONE));
            let closed = &prediction.weights[if prediction.epsilon == 1 { 0 } else { 2 }].0;
            Claim::new(
                "theta_reconstruction",
                "w(alpha uv), alpha square, equals (p-1)/p (N - 4 p^{3m} Qbar)",
                format!("{rebuilt} (closed form {closed})"),
                observed.to_string(),
                Verdict::of(rebuilt == observed.into() && BigUint::from(observed) == *closed),
            )
        }
        None => Claim::not_applicable(
            "theta_reconstruction",
            "w(alpha uv) from Qbar",
            "only for m = 2 mod 4",
        ),
    });

    // Character-sum oracle and identities.
    let sample: Vec<RingElement> = if code.size() <= ORACLE_EXHAUSTIVE_LIMIT {
        code.ring().elements().collect()
    } else {
        let mut rng = cfg.rng(1);
        (0..ORACLE_SAMPLES)
            .map(|_| code.random_element(&mut rng))
            .collect()
    };
    let mut mismatches = 0usize;
    for a in &sample {
        match code.weight_via_character_sum(a) {
            Ok(w) if w == code.lee_weight_of(a) => {}
            _ => mismatches += 1,
        }
    }
    claims.push(Claim::new(
        "character_sum_oracle",
        "w_L(Ev(a)) = ((p-1)N - sum_s theta(sa)) / p",
        format!("0 mismatches over {} codewords", sample.len()),
        format!("{mismatches} mismatches"),
        Verdict::of(mismatches == 0),
    ));

    let mut rng = cfg.rng(2);
    let n = code.gray_length();
    let mut worst = 0f64;
    for _ in 0..WORD_SAMPLES {
        let y: Vec<u32> = (0..n).map(|_| rng.random_range(0..p)).collect();
        let lhs = sum_theta_multiples(&y, p);
        let weight = y.iter().filter(|&&s| s != 0).count() as f64;
        let rhs = (p as f64 - 1.0) * n as f64 - p as f64 * weight;
        worst = worst.max((lhs - Complex64::new(rhs, 0.0)).norm());
    }
    claims.push(Claim::new(
        "gray_word_character_sum",
        "sum_s Theta(s y) = (p-1)N - p w_H(y) on random words",
        format!("residual < {COMPLEX_TOLERANCE:e}"),
        format!("max residual {worst:.3e}"),
        Verdict::of(worst < COMPLEX_TOLERANCE),
    ));

    let identity_sample = &sample[..sample.len().min(ACTION_SAMPLES)];
    claims.push(if p % 4 == 3 && m % 2 == 1 {
        let mut worst = 0f64;
        for a in identity_sample {
            let t = code.theta_multiples(a)?;
            let lhs: Complex64 = t[1..].iter().sum();
            worst = worst.max((lhs - Complex64::new((p - 1) as f64 * t[1].re, 0.0)).norm());
        }
        Claim::new(
            "scalar_character_sum",
            "sum_s theta(sa) = (p-1) Re theta(a)",
            format!("residual < {COMPLEX_TOLERANCE:e}"),
            format!("max residual {worst:.3e}"),
            Verdict::of(worst < COMPLEX_TOLERANCE),
        )
    } else {
        Claim::not_applicable(
            "scalar_character_sum",
            "sum_s theta(sa) = (p-1) Re theta(a)",
            "needs p = 3 mod 4 and m odd",
        )
    });
    claims.push(if m.is_multiple_of(2) {
        let mut worst = 0f64;
        for a in identity_sample {
            let t = code.theta_multiples(a)?;
            for ts in &t[2..] {
                worst = worst.max((ts - t[1]).norm());
            }
        }
        Claim::new(
            "square_scalars",
            "theta(sa) = theta(a) for s in F_p^* when m is even",
            format!("residual < {COMPLEX_TOLERANCE:e}"),
            format!("max residual {worst:.3e}"),
            Verdict::of(worst < COMPLEX_TOLERANCE),
        )
    } else {
        Claim::not_applicable("square_scalars", "theta(sa) = theta(a)", "m odd")
    });

    let isometry_ok = identity_sample.iter().all(|a| {
        let ev = code.evaluate(a).expect("own element");
        gray(&ev, p).hamming_weight() as u64 == crate::code::lee_weight_vec(&ev, p)
    });
    claims.push(Claim::new(
        "gray_isometry",
        "Hamming weight of the Gray image equals the Lee weight",
        "equal",
        if isometry_ok { "equal" } else { "mismatch" },
        Verdict::of(isometry_ok),
    ));

    let mut rng = cfg.rng(3);
    let mut action_failures = 0;
    for _ in 0..ACTION_SAMPLES {
        let c = code.random_l_element(&mut rng);
        let a = code.random_element(&mut rng);
        if !code.abelian_action_check(&c, &a)? {
            action_failures += 1;
        }
    }
    claims.push(Claim::new(
        "abelian_action",
        "L acts on the coordinates: Ev(ac)_j = Ev(a)_{index(c L_j)}",
        format!("{ACTION_SAMPLES} random (c, a) pairs"),
        format!("{action_failures} failures"),
        Verdict::of(action_failures == 0),
    ));
    let mut unit_failures = 0;
    for a in identity_sample {
        for unit in BLOCK_MIXING_UNITS {
            if !code.unit_multiplication_check(unit, a)? {
                unit_failures += 1;
            }
        }
    }
    claims.push(Claim::new(
        "block_mixing_units",
        "(1+u), (1+v), (1+u+v+uv) map C(m,p) to itself preserving Lee weight",
        "invariant",
        format!("{unit_failures} failures"),
        Verdict::of(unit_failures == 0),
    ));

    // Dual distance.
    let dual = dual_report(&code, cfg)?;
    claims.push(Claim::new(
        "dual_distance_gray",
        "the Gray image's dual has minimum distance 2",
        "2",
        format!(
            "{}{}",
            dual.distance.gray_class.as_str(),
            dual.distance
                .gray_witness
                .map_or(String::new(), |w| format!(
                    " (col {} = {} * col {})",
                    w.i, w.lambda, w.j
                ))
        ),
        Verdict::of(dual.distance.gray_class == GrayDualClass::Two && dual.gray_witness_verified),
    ));
    claims.push(match &dual.ring_search {
        Ok(search) => Claim::new(
            "dual_distance_ring",
            "C(m,p)^perp has Lee distance 2 (no weight-1 dual word)",
            "2",
            match &search.witness {
                Some(w) => format!(
                    "support-1 words: {}; witness weight {} on {:?}",
                    if search.support_one_absent {
                        "none"
                    } else {
                        "found"
                    },
                    w.lee_weight,
                    w.support
                ),
                None => "no support-2 witness".to_string(),
            },
            Verdict::of(
                search.support_one_absent
                    && search.witness_verified
                    && search.witness.as_ref().is_some_and(|w| w.lee_weight == 2),
            ),
        ),
        Err(e) => Claim::new(
            "dual_distance_ring",
            "C(m,p)^perp has Lee distance 2",
            "2",
            e.clone(),
            Verdict::Skipped,
        ),
    });
    let sphere = theory::sphere_packing_excludes(p, m);
    claims.push(Claim::new(
        "sphere_packing",
        "p^{4m} < 1 + N(p-1), so the dual distance is below 3",
        "true",
        sphere.to_string(),
        Verdict::of(sphere),
    ));

    // Optimality.
    claims.push(match theory::is_optimal(p, m) {
        Ok(cert) => {
            let observed_d = distribution.as_ref().ok().and_then(|d| d.min_distance());
            let d_matches = observed_d.is_some_and(|d| BigUint::from(d) == cert.d);
            Claim::new(
                "griesmer_optimal",
                "the two-weight Gray image meets the Griesmer bound at d and violates it at d+1",
                format!(
                    "sum(d+1) = {} > N = {}",
                    cert.closed_form_sum_d_plus_1, cert.n
                ),
                format!(
                    "sum(d) = {}, sum(d+1) = {}, observed d = {}",
                    cert.at_d.sum,
                    cert.at_d_plus_1.sum,
                    observed_d.map_or("-".into(), |d| d.to_string())
                ),
                Verdict::of(
                    cert.optimal
                        && cert.at_d_plus_1.sum == cert.closed_form_sum_d_plus_1
                        && d_matches,
                ),
            )
        }
        Err(_) => Claim::not_applicable(
            "griesmer_optimal",
            "Griesmer optimality",
            "needs m odd and p = 3 mod 4",
        ),
    });

    // Minimal codewords and secret sharing.
    let minimality_applies =
        regime == Regime::TwoWeight || (regime == Regime::ThreeWeight && m > 2);
    let minimality = if minimality_applies {
        Some(minimal_report(&code, cfg, distribution.as_ref().ok()))
    } else {
        None
    };
    claims.push(match &minimality {
        None => Claim::not_applicable(
            "minimality",
            "all nonzero Gray codewords are minimal",
            "stated for m odd (p = 3 mod 4) or m even > 2",
        ),
        Some(Err(e)) => Claim::new(
            "minimality",
            "all nonzero Gray codewords are minimal",
            "all minimal",
            e.to_string(),
            Verdict::Skipped,
        ),
        Some(Ok(r)) => {
            let decided = r
                .minimality
                .all_minimal()
                .or(r.full_support_shortcut.then_some(false));
            Claim::new(
                "minimality",
                "all nonzero Gray codewords are minimal",
                "all minimal",
                match decided {
                    Some(true) if r.minimality.criterion_passed => {
                        "all minimal (ratio test)".to_string()
                    }
                    Some(true) => "all minimal (brute force)".to_string(),
                    Some(false) => format!(
                        "not minimal: {}",
                        r.witness_description
                            .clone()
                            .unwrap_or_else(|| "full-support codeword".into())
                    ),
                    None => "undecided within budget".to_string(),
                },
                match decided {
                    Some(b) => Verdict::of(b),
                    None => Verdict::Skipped,
                },
            )
        }
    });
    let sss = analysis::sss_classify(&dual.distance);
    claims.push(Claim::new(
        "sss_dictatorial",
        "the Massey scheme on the Gray image is dictatorial (dual distance 2)",
        "dictatorial",
        match &sss {
            Ok(SssVerdict::Dictatorial { .. }) => "dictatorial".to_string(),
            Ok(SssVerdict::Democratic) => "democratic".to_string(),
            Err(e) => e.to_string(),
        },
        Verdict::of(matches!(sss, Ok(SssVerdict::Dictatorial { .. }))),
    ));

    Ok(VerifyReport {
        p,
        m,
        modulus: field.params().modulus.clone(),
        regime,
        mode,
        distribution: distribution.ok(),
        claims,
    })
}

impl Report for VerifyReport {
    fn to_json(&self) -> Value {
        let claims: Vec<Value> = self
            .claims
            .iter()
            .map(|c| {
                json!({
                    "id": c.id,
                    "statement": c.statement,
                    "predicted": c.predicted,
                    "observed": c.observed,
                    "verdict": c.verdict.as_str(),
                })
            })
            .collect();
        json!({
            "p": self.p,
            "m": self.m,
            "modulus": self.modulus,
            "regime": self.regime.as_str(),
            "mode": self.mode.as_str(),
            "weights": self.distribution.as_ref().map(distribution_json),
            "claims": claims,
            "all_passed": self.all_passed(),
        })
    }

    fn to_csv(&self) -> String {
        let mut out = String::from("claim,predicted,observed,verdict\n");
        for c in &self.claims {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                c.id,
                csv_escape(&c.predicted),
                csv_escape(&c.observed),
                c.verdict.as_str()
            );
        }
        out
    }

    fn to_table(&self) -> String {
        let mut out = format!(
            "p = {}, m = {}, regime = {}, mode = {}\n\n",
            self.p,
            self.m,
            self.regime.as_str(),
            self.mode.as_str()
        );
        let w_id = self.claims.iter().map(|c| c.id.len()).max().unwrap_or(5);
        let w_pred = self
            .claims
            .iter()
            .map(|c| c.predicted.len())
            .max()
            .unwrap_or(9)
            .min(48);
        let _ = writeln!(
            out,
            "{:<w_id$}  {:<7}  {:<w_pred$}  observed",
            "claim", "verdict", "predicted"
        );
        for c in &self.claims {
            let _ = writeln!(
                out,
                "{:<w_id$}  {:<7}  {:<w_pred$}  {}",
                c.id,
                c.verdict.as_str(),
                c.predicted,
                c.observed
            );
        }
        let _ = writeln!(
            out,
            "\n{}",
            if self.all_passed() {
                "all applicable claims pass"
            } else {
                "SOME CLAIMS FAILED"
            }
        );
        out
    }
}

// ------------------------------------------------------------------ bounds

#[derive(Clone, Debug)]
pub struct BoundsReport {
    pub p: u32,
    pub m: usize,
    pub gray_length: BigUint,
    pub dimension: usize,
    pub certificate: Option<theory::OptimalityCertificate>,
    pub sphere_packing_excludes: bool,
}

/// Griesmer and sphere-packing checks; needs no enumeration.
pub fn bounds(cfg: &RunConfig) -> Result<BoundsReport> {
    crate::gf::FieldParams::new(cfg.p, cfg.m, cfg.modulus.clone())?;
    Ok(BoundsReport {
        p: cfg.p,
        m: cfg.m,
        gray_length: theory::gray_length(cfg.p, cfg.m),
        dimension: 4 * cfg.m,
        certificate: theory::is_optimal(cfg.p, cfg.m).ok(),
        sphere_packing_excludes: theory::sphere_packing_excludes(cfg.p, cfg.m),
    })
}

impl Report for BoundsReport {
    fn to_json(&self) -> Value {
        let c = self.certificate.as_ref();
        json!({
            "p": self.p,
            "m": self.m,
            "N": self.gray_length.to_string(),
            "K": self.dimension,
            "d": c.map(|c| c.d.to_string()),
            "griesmer_sum_d": c.map(|c| c.at_d.sum.to_string()),
            "griesmer_sum_d_plus_1": c.map(|c| c.at_d_plus_1.sum.to_string()),
            "closed_form_sum_d_plus_1": c.map(|c| c.closed_form_sum_d_plus_1.to_string()),
            "margin": c.map(|c| (&c.at_d_plus_1.sum - &c.n).to_string()),
            "optimal": c.map(|c| c.optimal),
            "sphere_packing_excludes": self.sphere_packing_excludes,
        })
    }

    fn to_table(&self) -> String {
        let mut rows = vec![
            ("p", self.p.to_string()),
            ("m", self.m.to_string()),
            ("N", self.gray_length.to_string()),
            ("K", self.dimension.to_string()),
        ];
        match &self.certificate {
            Some(c) => {
                rows.push(("d", c.d.to_string()));
                rows.push(("griesmer sum at d", c.at_d.sum.to_string()));
                rows.push(("griesmer sum at d+1", c.at_d_plus_1.sum.to_string()));
                rows.push(("closed form at d+1", c.closed_form_sum_d_plus_1.to_string()));
                rows.push(("optimal", c.optimal.to_string()));
            }
            None => rows.push(("optimal", "n/a (needs m odd, p = 3 mod 4)".into())),
        }
        rows.push((
            "sphere packing excludes d' >= 3",
            self.sphere_packing_excludes.to_string(),
        ));
        table_rows(&rows)
    }
}

// -------------------------------------------------------------------- dual

#[derive(Clone, Debug)]
pub struct RingSearch {
    pub support_one_absent: bool,
    pub witness: Option<analysis::RingDualWitness>,
    pub witness_verified: bool,
}

#[derive(Clone, Debug)]
pub struct DualReport {
    pub p: u32,
    pub m: usize,
    pub distance: analysis::DualDistanceReport,
    pub gray_witness_verified: bool,
    pub ring_search: std::result::Result<RingSearch, String>,
    pub sphere_packing_excludes: bool,
}

fn dual_report(code: &TraceCode, cfg: &RunConfig) -> Result<DualReport> {
    let g = code.generator_matrix()?;
    let mut distance = analysis::gray_dual_distance_class(&g)?;
    let gray_witness_verified = distance
        .gray_witness
        .as_ref()
        .is_some_and(|w| analysis::verify_proportional(&g, w));
    let ring_search = (|| -> Result<RingSearch> {
        let one = analysis::ring_dual_low_weight_search(code, 1, cfg.budget)?;
        let two = analysis::ring_dual_low_weight_search(code, 2, cfg.budget)?;
        let witness_verified = match &two {
            Some(w) => analysis::verify_ring_witness(code, w)?,
            None => false,
        };
        Ok(RingSearch {
            support_one_absent: one.is_none(),
            witness: two,
            witness_verified,
        })
    })()
    .map_err(|e| e.to_string());
    if let Ok(search) = &ring_search {
        distance.ring_low_weight_witness = search.witness.clone();
    }
    Ok(DualReport {
        p: cfg.p,
        m: cfg.m,
        distance,
        gray_witness_verified,
        ring_search,
        sphere_packing_excludes: theory::sphere_packing_excludes(cfg.p, cfg.m),
    })
}

pub fn dual(cfg: &RunConfig) -> Result<DualReport> {
    dual_report(&cfg.code()?, cfg)
}

impl Report for DualReport {
    fn to_json(&self) -> Value {
        let ring = match &self.ring_search {
            Ok(s) => json!({
                "support_one_absent": s.support_one_absent,
                "witness": s.witness,
                "witness_verified": s.witness_verified,
            }),
            Err(e) => json!({ "error": e }),
        };
        json!({
            "p": self.p,
            "m": self.m,
            "gray_class": self.distance.gray_class,
            "gray_witness": self.distance.gray_witness,
            "gray_witness_verified": self.gray_witness_verified,
            "proportional_columns": self.distance.proportional_columns,
            "ring_witness_weight": self.ring_search.as_ref().ok().and_then(|s| s.witness.as_ref().map(|w| w.lee_weight)),
            "ring_search": ring,
            "sphere_packing_excludes": self.sphere_packing_excludes,
        })
    }

    fn to_table(&self) -> String {
        let mut rows = vec![
            ("p", self.p.to_string()),
            ("m", self.m.to_string()),
            (
                "gray dual class",
                self.distance.gray_class.as_str().to_string(),
            ),
        ];
        if let Some(w) = self.distance.gray_witness {
            rows.push((
                "gray witness",
                format!(
                    "col {} = {} * col {} (verified: {})",
                    w.i, w.lambda, w.j, self.gray_witness_verified
                ),
            ));
        }
        rows.push((
            "proportional columns",
            self.distance.proportional_columns.to_string(),
        ));
        match &self.ring_search {
            Ok(s) => {
                rows.push((
                    "weight-1 ring dual words",
                    if s.support_one_absent {
                        "none".into()
                    } else {
                        "found".into()
                    },
                ));
                rows.push((
                    "ring witness",
                    s.witness.as_ref().map_or("none".into(), |w| {
                        let vals: Vec<String> = w.values.iter().map(|v| v.to_string()).collect();
                        format!(
                            "weight {} at {:?} = [{}] (verified: {})",
                            w.lee_weight,
                            w.support,
                            vals.join(", "),
                            s.witness_verified
                        )
                    }),
                ));
            }
            Err(e) => rows.push(("ring search", e.clone())),
        }
        rows.push((
            "sphere packing excludes d' >= 3",
            self.sphere_packing_excludes.to_string(),
        ));
        table_rows(&rows)
    }
}

// ----------------------------------------------------------------- minimal

#[derive(Clone, Debug)]
pub struct MinimalReport {
    pub p: u32,
    pub m: usize,
    pub w_min: Option<u64>,
    pub w_max: Option<u64>,
    pub minimality: MinimalityReport,
    /// Some codeword has full support while more than `p - 1` nonzero
    /// codewords exist, which already rules out minimality.
    pub full_support_shortcut: bool,
    pub witness_description: Option<String>,
    pub brute_force_note: Option<String>,
}

fn minimal_report(
    code: &TraceCode,
    cfg: &RunConfig,
    known: Option<&WeightDistribution>,
) -> Result<MinimalReport> {
    let dist = match known {
        Some(d) => d.clone(),
        None => code.weight_distribution(cfg.resolve_mode(code), &cfg.enumeration())?,
    };
    let w_min = dist.min_distance();
    let w_max = dist.max_weight();
    let criterion_passed = match (w_min, w_max) {
        (Some(a), Some(b)) => analysis::ab_ratio_criterion(a, b, cfg.p),
        _ => false,
    };
    let nonzero = dist.total() - 1;
    let full_support_shortcut =
        w_max == Some(code.gray_length() as u64) && nonzero > (cfg.p - 1) as u64;
    let (brute, brute_force_note) = match analysis::brute_force_minimality(code, &cfg.enumeration())
    {
        Ok(r) => (Some(r), None),
        Err(e @ Error::BudgetExceeded { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let minimality = MinimalityReport {
        criterion_passed,
        brute_force_all_minimal: brute.as_ref().and_then(|b| b.brute_force_all_minimal),
        non_minimal_witness: brute.as_ref().and_then(|b| b.non_minimal_witness),
    };
    let witness_description = minimality.non_minimal_witness.map(|w| {
        let x = code.ring().element_at(w.covering as u64);
        let y = code.ring().element_at(w.covered as u64);
        format!(
            "supp Ev({y}) (weight {}) inside supp Ev({x}) (weight {})",
            code.lee_weight_of(&y),
            code.lee_weight_of(&x)
        )
    });
    Ok(MinimalReport {
        p: cfg.p,
        m: cfg.m,
        w_min,
        w_max,
        minimality,
        full_support_shortcut,
        witness_description,
        brute_force_note,
    })
}

pub fn minimal(cfg: &RunConfig) -> Result<MinimalReport> {
    minimal_report(&cfg.code()?, cfg, None)
}

impl Report for MinimalReport {
    fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "m": self.m,
            "w_min": self.w_min.map(|w| w.to_string()),
            "w_max": self.w_max.map(|w| w.to_string()),
            "criterion_passed": self.minimality.criterion_passed,
            "brute_force_all_minimal": self.minimality.brute_force_all_minimal,
            "non_minimal_witness": self.minimality.non_minimal_witness,
            "witness": self.witness_description,
            "full_support_codeword": self.full_support_shortcut,
            "brute_force_note": self.brute_force_note,
        })
    }

    fn to_table(&self) -> String {
        let opt = |w: Option<u64>| w.map_or("-".to_string(), |w| w.to_string());
        let rows = vec![
            ("p", self.p.to_string()),
            ("m", self.m.to_string()),
            ("w_min", opt(self.w_min)),
            ("w_max", opt(self.w_max)),
            (
                "ratio test p*w_min > (p-1)*w_max",
                self.minimality.criterion_passed.to_string(),
            ),
            (
                "brute force all minimal",
                self.minimality.brute_force_all_minimal.map_or_else(
                    || self.brute_force_note.clone().unwrap_or("-".into()),
                    |b| b.to_string(),
                ),
            ),
            (
                "full-support codeword",
                self.full_support_shortcut.to_string(),
            ),
            (
                "witness",
                self.witness_description.clone().unwrap_or("-".into()),
            ),
        ];
        table_rows(&rows)
    }
}

// --------------------------------------------------------------------- sss

#[derive(Clone, Debug)]
pub struct SssReport {
    pub p: u32,
    pub m: usize,
    pub gray_class: GrayDualClass,
    pub verdict: std::result::Result<SssVerdict, String>,
    pub minimality: Option<bool>,
}

pub fn sss(cfg: &RunConfig) -> Result<SssReport> {
    let code = cfg.code()?;
    let g = code.generator_matrix()?;
    let distance = analysis::gray_dual_distance_class(&g)?;
    let verdict = analysis::sss_classify(&distance).map_err(|e| e.to_string());
    let minimality = minimal_report(&code, cfg, None).ok().and_then(|r| {
        r.minimality
            .all_minimal()
            .or(r.full_support_shortcut.then_some(false))
    });
    Ok(SssReport {
        p: cfg.p,
        m: cfg.m,
        gray_class: distance.gray_class,
        verdict,
        minimality,
    })
}

impl Report for SssReport {
    fn to_json(&self) -> Value {
        let (verdict, evidence) = match &self.verdict {
            Ok(SssVerdict::Dictatorial { evidence }) => (json!("dictatorial"), json!(evidence)),
            Ok(SssVerdict::Democratic) => (json!("democratic"), Value::Null),
            Err(e) => (Value::Null, json!({ "error": e })),
        };
        json!({
            "p": self.p,
            "m": self.m,
            "gray_class": self.gray_class,
            "verdict": verdict,
            "evidence": evidence,
            "all_codewords_minimal": self.minimality,
        })
    }

    fn to_table(&self) -> String {
        let verdict = match &self.verdict {
            Ok(SssVerdict::Dictatorial { evidence }) => format!(
                "dictatorial (col {} = {} * col {})",
                evidence.i, evidence.lambda, evidence.j
            ),
            Ok(SssVerdict::Democratic) => "democratic".into(),
            Err(e) => e.clone(),
        };
        table_rows(&[
            ("p", self.p.to_string()),
            ("m", self.m.to_string()),
            ("gray dual class", self.gray_class.as_str().to_string()),
            ("verdict", verdict),
            (
                "all codewords minimal",
                self.minimality
                    .map_or("undecided".into(), |b| b.to_string()),
            ),
        ])
    }
}

// ------------------------------------------------------------------- gauss

#[derive(Clone, Debug)]
pub struct GaussReport {
    pub p: u32,
    pub m: usize,
    pub closed_form: Complex64,
    pub numeric: Complex64,
    pub qbar: Complex64,
    pub nbar: Complex64,
    pub qbar_closed: Option<(Complex64, Complex64)>,
}

impl GaussReport {
    pub fn matches(&self) -> bool {
        (self.closed_form - self.numeric).norm() < COMPLEX_TOLERANCE
    }
}

pub fn gauss(cfg: &RunConfig) -> Result<GaussReport> {
    let field = cfg.field()?;
    let (qbar, nbar) = theory::qbar_nbar_numeric(&field);
    Ok(GaussReport {
        p: cfg.p,
        m: cfg.m,
        closed_form: theory::gauss_sum_closed_form(cfg.p, cfg.m),
        numeric: theory::gauss_sum_numeric(&field),
        qbar,
        nbar,
        qbar_closed: cfg
            .m
            .is_multiple_of(2)
            .then(|| theory::qbar_nbar_closed_form(cfg.p, cfg.m)),
    })
}

impl Report for GaussReport {
    fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "m": self.m,
            "closed_form": format_complex(self.closed_form),
            "numeric": format_complex(self.numeric),
            "match": self.matches(),
            "qbar": format_complex(self.qbar),
            "nbar": format_complex(self.nbar),
            "qbar_plus_nbar": format_complex(self.qbar + self.nbar),
            "qbar_closed_form": self.qbar_closed.map(|(q, _)| format_complex(q)),
            "nbar_closed_form": self.qbar_closed.map(|(_, n)| format_complex(n)),
        })
    }

    fn to_table(&self) -> String {
        table_rows(&[
            ("p", self.p.to_string()),
            ("m", self.m.to_string()),
            ("G(eta) closed form", format_complex(self.closed_form)),
            ("G(eta) numeric", format_complex(self.numeric)),
            ("match", self.matches().to_string()),
            ("Qbar", format_complex(self.qbar)),
            ("Nbar", format_complex(self.nbar)),
            ("Qbar + Nbar", format_complex(self.qbar + self.nbar)),
        ])
    }
}

// --------------------------------------------------------------- genmatrix

/// The generator matrix in digit-matrix text form.
pub fn genmatrix(cfg: &RunConfig) -> Result<String> {
    Ok(cfg.code()?.generator_matrix()?.to_text())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: u32, m: usize) -> RunConfig {
        RunConfig {
            timing: false,
            ..RunConfig::new(p, m)
        }
    }

    #[test]
    fn complex_formatting() {
        assert_eq!(format_complex(Complex64::new(3.0, 1e-12)), "3+0i");
        assert_eq!(format_complex(Complex64::new(-2.0, -0.0)), "-2+0i");
        assert_eq!(
            format_complex(Complex64::new(0.0, 3f64.sqrt())),
            "0+1.732051i"
        );
        assert_eq!(format_complex(Complex64::new(0.5, -2.0)), "0.5-2i");
    }

    #[test]
    fn spectrum_outputs() {
        let r = spectrum(&cfg(3, 1)).unwrap();
        assert_eq!(r.mode, Mode::Exhaustive);
        assert_eq!(r.prediction_matches, Some(true));
        assert_eq!(r.to_csv(), "weight,frequency\n0,1\n72,78\n108,2\n");
        let j = r.to_json();
        assert_eq!(j["N"], "108");
        assert_eq!(j["K"], 4);
        assert_eq!(j["weights"]["72"], "78");
        assert!(j.get("elapsed_ms").is_none());
        assert!(r.to_table().contains("108"));
    }

    #[test]
    fn explicit_exhaustive_over_budget_fails() {
        let mut c = cfg(5, 2);
        c.mode = Some(Mode::Exhaustive);
        assert!(matches!(spectrum(&c), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn bounds_and_gauss() {
        let b = bounds(&cfg(3, 1)).unwrap().to_json();
        assert_eq!(b["griesmer_sum_d"], "107");
        assert_eq!(b["griesmer_sum_d_plus_1"], "110");
        assert_eq!(b["N"], "108");
        assert_eq!(b["optimal"], true);
        let b = bounds(&cfg(3, 2)).unwrap().to_json();
        assert_eq!(b["optimal"], Value::Null);
        let g = gauss(&cfg(3, 2)).unwrap().to_json();
        assert_eq!(g["closed_form"], "3+0i");
        assert_eq!(g["numeric"], "3+0i");
        assert_eq!(g["match"], true);
    }

    #[test]
    fn dual_and_sss_reports() {
        let d = dual(&cfg(3, 1)).unwrap().to_json();
        assert_eq!(d["gray_class"], 2);
        assert_eq!(d["ring_witness_weight"], 2);
        let s = sss(&cfg(3, 1)).unwrap();
        assert!(matches!(s.verdict, Ok(SssVerdict::Dictatorial { .. })));
        assert_eq!(s.minimality, Some(false));
    }

    #[test]
    fn verify_unsupported_regime_still_reports_spectrum() {
        let r = verify(&cfg(5, 1)).unwrap();
        assert_eq!(r.regime, Regime::Unsupported);
        assert_eq!(r.claim("spectrum").unwrap().verdict, Verdict::NotApplicable);
        assert!(r.distribution.is_some());
        assert!(r.to_json()["weights"].is_object());
    }

    #[test]
    fn verify_csv_has_one_row_per_claim() {
        let r = verify(&cfg(3, 1)).unwrap();
        assert_eq!(r.to_csv().lines().count(), r.claims.len() + 1);
    }
}
