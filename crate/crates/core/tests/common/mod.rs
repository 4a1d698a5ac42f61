//! Independent reference computations for the integration tests. Nothing
//! here calls into the library's arithmetic.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

/// `a0 + a1 u + a2 v + a3 uv` over `F_p`.
pub type Sym = [u64; 4];

pub fn sym_mul(x: Sym, y: Sym, p: u64) -> Sym {
    [
        x[0] * y[0] % p,
        (x[0] * y[1] + x[1] * y[0]) % p,
        (x[0] * y[2] + x[2] * y[0]) % p,
        (x[0] * y[3] + x[1] * y[2] + x[2] * y[1] + x[3] * y[0]) % p,
    ]
}

pub fn sym_add(x: Sym, y: Sym, p: u64) -> Sym {
    [0, 1, 2, 3].map(|i| (x[i] + y[i]) % p)
}

/// Hamming weight of `(d, c+d, b+d, a+b+c+d)` for `a + bu + cv + duv`.
pub fn sym_lee(x: Sym, p: u64) -> u64 {
    let [a, b, c, d] = x;
    [d, (c + d) % p, (b + d) % p, (a + b + c + d) % p]
        .iter()
        .filter(|&&s| s != 0)
        .count() as u64
}

pub fn all_syms(p: u64) -> impl Iterator<Item = Sym> {
    (0..p.pow(4)).map(move |i| [i % p, i / p % p, i / (p * p) % p, i / (p * p * p)])
}

/// Lee weight distribution of the trace code over `F_p` (`m = 1`, where the
/// trace is the identity) by direct enumeration.
pub fn spectrum_m1(p: u64) -> BTreeMap<u64, u64> {
    let squares: Vec<bool> = {
        let mut s = vec![false; p as usize];
        for x in 1..p {
            s[(x * x % p) as usize] = true;
        }
        s
    };
    let l: Vec<Sym> = all_syms(p).filter(|x| squares[x[0] as usize]).collect();
    let mut dist = BTreeMap::new();
    for a in all_syms(p) {
        let w: u64 = l.iter().map(|&x| sym_lee(sym_mul(a, x, p), p)).sum();
        *dist.entry(w).or_insert(0) += 1;
    }
    dist
}

/// `F_9 = F_3[t]/(t^2 + 1)` as pairs `(a, b) = a + bt`.
type F9 = (u64, u64);

fn f9_mul(x: F9, y: F9) -> F9 {
    ((x.0 * y.0 + 2 * x.1 * y.1) % 3, (x.0 * y.1 + x.1 * y.0) % 3)
}

/// `Tr(a + bt) = (a + bt) + (a + bt)^3 = 2a`.
fn f9_tr(x: F9) -> u64 {
    2 * x.0 % 3
}

fn f9_all() -> Vec<F9> {
    (0..9).map(|i| (i % 3, i / 3)).collect()
}

/// Lee weight distribution of the trace code at `p = 3, m = 2`.
pub fn spectrum_3_2() -> BTreeMap<u64, u64> {
    let f = f9_all();
    let squares: Vec<F9> = f[1..].iter().map(|&x| f9_mul(x, x)).collect();
    type R9 = [F9; 4];
    let rmul = |x: R9, y: R9| -> R9 {
        let add = |a: F9, b: F9| ((a.0 + b.0) % 3, (a.1 + b.1) % 3);
        [
            f9_mul(x[0], y[0]),
            add(f9_mul(x[0], y[1]), f9_mul(x[1], y[0])),
            add(f9_mul(x[0], y[2]), f9_mul(x[2], y[0])),
            add(
                add(f9_mul(x[0], y[3]), f9_mul(x[1], y[2])),
                add(f9_mul(x[2], y[1]), f9_mul(x[3], y[0])),
            ),
        ]
    };
    let mut l = Vec::new();
    for &a0 in &f {
        if !squares.contains(&a0) {
            continue;
        }
        for &a1 in &f {
            for &a2 in &f {
                for &a3 in &f {
                    l.push([a0, a1, a2, a3]);
                }
            }
        }
    }
    let mut dist = BTreeMap::new();
    for &a0 in &f {
        for &a1 in &f {
            for &a2 in &f {
                for &a3 in &f {
                    let a = [a0, a1, a2, a3];
                    let w: u64 = l
                        .iter()
                        .map(|&x| {
                            let y = rmul(a, x);
                            sym_lee([f9_tr(y[0]), f9_tr(y[1]), f9_tr(y[2]), f9_tr(y[3])], 3)
                        })
                        .sum();
                    *dist.entry(w).or_insert(0) += 1;
                }
            }
        }
    }
    dist
}

/// `sum_{j<k} ceil(d / p^j)`.
pub fn griesmer(k: u32, d: u128, p: u128) -> u128 {
    (0..k).map(|j| d.div_ceil(p.pow(j))).sum()
}

/// `2 (p^{4m} - p^{3m})`.
pub fn gray_length(p: u128, m: u32) -> u128 {
    2 * (p.pow(4 * m) - p.pow(3 * m))
}

pub fn tracecode_bin() -> &'static Path {
    Path::new(env!("CARGO_BIN_EXE_tracecode"))
}

pub fn run(args: &[&str]) -> Output {
    Command::new(tracecode_bin())
        .args(args)
        .env_remove("TRACECODE_WORKERS")
        .output()
        .expect("tracecode binary runs")
}

pub fn run_json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "tracecode {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

/// The `weights` object of a spectrum report as integers.
pub fn weights_of(report: &serde_json::Value) -> BTreeMap<u64, u64> {
    report["weights"]
        .as_object()
        .expect("weights object")
        .iter()
        .map(|(w, f)| (w.parse().unwrap(), f.as_str().unwrap().parse().unwrap()))
        .collect()
}

pub fn schema_for(report: &str) -> serde_json::Value {
    let text = include_str!("../../schema/reports.schema.json");
    let mut root: serde_json::Value = serde_json::from_str(text).unwrap();
    root["$ref"] = serde_json::Value::String(format!("#/definitions/{report}"));
    root
}

pub fn validate(report: &str, instance: &serde_json::Value) -> Result<(), Vec<String>> {
    let schema = schema_for(report);
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    compiled.validate(instance).map_err(|errs| {
        errs.map(|e| format!("{} at {}", e, e.instance_path))
            .collect()
    })
}
