mod common;

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tracecode::analysis::{self, GrayDualClass};
use tracecode::code::{gray, lee_weight_vec, sum_theta_multiples};
use tracecode::theory::{self, Regime};
use tracecode::{Field, FieldElement, GeneratorMatrix, RingElement, TraceCode, WeightDistribution};

use common::*;

fn code(p: u32, m: usize) -> &'static TraceCode {
    static CODES: OnceLock<Vec<((u32, usize), TraceCode)>> = OnceLock::new();
    let codes = CODES.get_or_init(|| {
        [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3)]
            .into_iter()
            .map(|(p, m)| ((p, m), TraceCode::with_params(p, m).unwrap()))
            .collect()
    });
    &codes.iter().find(|(k, _)| *k == (p, m)).unwrap().1
}

fn small_field() -> impl Strategy<Value = (u32, usize)> {
    prop_oneof![
        Just((3, 1)),
        Just((3, 2)),
        Just((3, 3)),
        Just((5, 2)),
        Just((7, 2)),
        Just((11, 1)),
        Just((13, 3)),
    ]
}

fn ring_element(f: &Field, seeds: [u32; 4]) -> RingElement {
    RingElement(seeds.map(|s| FieldElement::from_enc(s % f.order())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_trace_and_eta((p, m) in small_field(), x in any::<u32>(), y in any::<u32>(), c in any::<u32>()) {
        let f = Field::new(p, m, None).unwrap();
        let x = FieldElement::from_enc(x % f.order());
        let y = FieldElement::from_enc(y % f.order());
        let c = c % p;
        prop_assert_eq!(f.tr(f.add(x, y)), (f.tr(x) + f.tr(y)) % p);
        prop_assert_eq!(f.tr(f.scale(c, x)), c * f.tr(x) % p);
        prop_assert_eq!(f.from_coeffs(&f.coeffs(x)).unwrap(), x);
        prop_assert_eq!(f.mul(x, y), f.mul_poly(x, y));
        if !x.is_zero() && !y.is_zero() {
            prop_assert_eq!(f.eta(f.mul(x, y)).unwrap(), f.eta(x).unwrap() * f.eta(y).unwrap());
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), FieldElement::ONE);
        }
    }

    #[test]
    fn l_is_closed_and_trace_commutes_with_swap(
        (p, m) in small_field(),
        a in any::<[u32; 4]>(),
        b in any::<[u32; 4]>(),
        c in 0u32..1000,
    ) {
        let ring = tracecode::Ring::new(Field::new(p, m, None).unwrap());
        let f = ring.field().clone();
        let x = ring_element(&f, a);
        let y = ring_element(&f, b);
        if ring.is_in_l(&x) && ring.is_in_l(&y) {
            prop_assert!(ring.is_in_l(&ring.mul(&x, &y)));
            prop_assert!(ring.is_in_l(&ring.inv(&x).unwrap()));
        }
        let c = c % p;
        let cx = RingElement(x.0.map(|e| f.scale(c, e)));
        let lhs = ring.big_trace(&ring.add(&cx, &y));
        let tx = ring.big_trace(&x);
        let ty = ring.big_trace(&y);
        let rhs = tracecode::BaseRingElement([0, 1, 2, 3].map(|i| (c * tx.0[i] + ty.0[i]) % p));
        prop_assert_eq!(lhs, rhs);
        let sx = ring.big_trace(&ring.swap_uv(&x)).0;
        prop_assert_eq!(sx, [tx.0[0], tx.0[2], tx.0[1], tx.0[3]]);
    }

    #[test]
    fn generator_matrix_text_round_trip(
        p in prop_oneof![Just(3u32), Just(5), Just(7), Just(31)],
        rows in 1usize..6,
        cols in 1usize..40,
        seed in any::<u64>(),
    ) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<Vec<u8>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.random_range(0..p) as u8).collect())
            .collect();
        let g = GeneratorMatrix::new(p, data).unwrap();
        let back = GeneratorMatrix::from_text(p, &g.to_text()).unwrap();
        prop_assert_eq!(back.rows, g.rows);
    }

    #[test]
    fn distribution_merge_is_order_independent(
        a in proptest::collection::vec((0u64..50, 1u64..10), 0..20),
        b in proptest::collection::vec((0u64..50, 1u64..10), 0..20),
    ) {
        let mut ab = WeightDistribution::from_pairs(a.clone());
        ab.merge(&WeightDistribution::from_pairs(b.clone()));
        let mut ba = WeightDistribution::from_pairs(b);
        ba.merge(&WeightDistribution::from_pairs(a));
        prop_assert_eq!(&ab, &ba);
    }

    #[test]
    fn prediction_frequencies_sum_to_code_size(p in 3u32..200, m in 1usize..12) {
        prop_assume!(tracecode::gf::is_prime(p));
        let pred = theory::predict_spectrum(p, m);
        if pred.regime != Regime::Unsupported {
            prop_assert_eq!(pred.frequency_total(), BigUint::from(p).pow(4 * m as u32) - BigUint::one());
        }
        prop_assert!(theory::sphere_packing_excludes(p, m));
    }

    #[test]
    fn griesmer_closed_form_matches_terms(p in prop_oneof![Just(3u32), Just(7), Just(11), Just(19)], k in 0usize..3) {
        let m = 2 * k + 1;
        let cert = theory::is_optimal(p, m).unwrap();
        prop_assert!(cert.optimal);
        prop_assert_eq!(&cert.at_d_plus_1.sum, &cert.closed_form_sum_d_plus_1);
        if let Some(n) = cert.n.to_u128() {
            let d = cert.d.to_u128().unwrap();
            prop_assert_eq!(griesmer(4 * m as u32, d + 1, p as u128), cert.closed_form_sum_d_plus_1.to_u128().unwrap());
            prop_assert!(griesmer(4 * m as u32, d, p as u128) <= n);
        }
    }
}

fn sampled_params() -> impl Strategy<Value = (u32, usize)> {
    prop_oneof![
        Just((3, 1)),
        Just((5, 1)),
        Just((7, 1)),
        Just((3, 2)),
        Just((5, 2))
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn codeword_oracles_agree((p, m) in sampled_params(), seed in any::<u64>()) {
        let c = code(p, m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = c.random_element(&mut rng);
        let ev = c.evaluate(&a).unwrap();
        let w = lee_weight_vec(&ev, p);
        prop_assert_eq!(gray(&ev, p).hamming_weight() as u64, w);
        prop_assert_eq!(c.lee_weight_of(&a), w);
        prop_assert_eq!(c.weight_via_character_sum(&a).unwrap(), w);
        let x = c.random_l_element(&mut rng);
        prop_assert!(c.abelian_action_check(&x, &a).unwrap());
    }

    #[test]
    fn weight_depends_only_on_class((p, m) in sampled_params(), seed in any::<u64>()) {
        prop_assume!(Regime::of(p, m) != Regime::Unsupported);
        let c = code(p, m);
        let f = c.field();
        let pred = theory::predict_spectrum(p, m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = c.random_element(&mut rng);
        let w = BigUint::from(c.lee_weight_of(&a));
        if a.is_zero() {
            prop_assert_eq!(w, BigUint::ZERO);
        } else if a.is_uv_multiple() {
            let alpha = a.0[3];
            let sq = f.is_square(alpha);
            let expected = match pred.regime {
                Regime::ThreeWeight => {
                    let (square, nonsquare) = if pred.epsilon == 1 { (0, 2) } else { (2, 0) };
                    pred.weights[if sq { square } else { nonsquare }].0.clone()
                }
                _ => BigUint::from(c.gray_length()),
            };
            prop_assert_eq!(w, expected);
        } else {
            prop_assert_eq!(w, theory::generic_weight(p, m));
        }
    }

    #[test]
    fn gray_word_character_sum_on_random_words(p in prop_oneof![Just(3u32), Just(5), Just(7), Just(11)], y in proptest::collection::vec(any::<u32>(), 1..400)) {
        let y: Vec<u32> = y.into_iter().map(|s| s % p).collect();
        let n = y.len() as f64;
        let wh = y.iter().filter(|&&s| s != 0).count() as f64;
        let rhs = (p as f64 - 1.0) * n - p as f64 * wh;
        prop_assert!((sum_theta_multiples(&y, p) - rhs).norm() < 1e-6);
    }

    #[test]
    fn character_identities((p, m) in prop_oneof![Just((3u32, 1usize)), Just((7, 1)), Just((3, 3)), Just((3, 2)), Just((5, 2))], seed in any::<u64>()) {
        let c = code(p, m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = c.random_element(&mut rng);
        let t = c.theta_multiples(&a).unwrap();
        if m % 2 == 0 {
            for ts in &t[2..] {
                prop_assert!((ts - t[1]).norm() < 1e-6);
            }
        } else {
            let sum: num_complex::Complex64 = t[1..].iter().sum();
            prop_assert!((sum.re - (p - 1) as f64 * t[1].re).abs() < 1e-6);
            prop_assert!(sum.im.abs() < 1e-6);
        }
    }
}

/// All `x` with `x G^T = 0` and `1 <= wt(x) <= 2`, by brute force.
fn naive_dual_class(rows: &[Vec<u8>], p: u32) -> GrayDualClass {
    let n = rows[0].len();
    let annihilates = |x: &[(usize, u32)]| {
        rows.iter()
            .all(|r| x.iter().map(|&(j, v)| v * r[j] as u32).sum::<u32>() % p == 0)
    };
    if (0..n).any(|j| annihilates(&[(j, 1)])) {
        return GrayDualClass::One;
    }
    for i in 0..n {
        for j in i + 1..n {
            for a in 1..p {
                if annihilates(&[(i, 1), (j, a)]) {
                    return GrayDualClass::Two;
                }
            }
        }
    }
    GrayDualClass::MoreThanTwo
}

/// Support-inclusion minimality of every nonzero codeword, by brute force.
fn naive_all_minimal(words: &[Vec<u32>], p: u32) -> bool {
    let supp = |w: &[u32]| -> Vec<bool> { w.iter().map(|&s| s != 0).collect() };
    let proportional =
        |x: &[u32], y: &[u32]| (1..p).any(|s| x.iter().zip(y).all(|(&a, &b)| s * a % p == b));
    for x in words {
        let sx = supp(x);
        if !sx.iter().any(|&b| b) {
            continue;
        }
        for y in words {
            let sy = supp(y);
            if !sy.iter().any(|&b| b) || proportional(x, y) {
                continue;
            }
            if sy.iter().zip(&sx).all(|(&b, &a)| !b || a) {
                return false;
            }
        }
    }
    true
}

fn span(rows: &[Vec<u8>], p: u32) -> Vec<Vec<u32>> {
    let k = rows.len();
    let n = rows[0].len();
    (0..(p as usize).pow(k as u32))
        .map(|mut idx| {
            let mut w = vec![0u32; n];
            for r in rows {
                let c = (idx % p as usize) as u32;
                idx /= p as usize;
                for (wj, &rj) in w.iter_mut().zip(r) {
                    *wj = (*wj + c * rj as u32) % p;
                }
            }
            w
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gray_dual_class_matches_brute_force(
        p in prop_oneof![Just(3u32), Just(5)],
        k in 1usize..4,
        n in 2usize..9,
        seed in any::<u64>(),
    ) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<u8>> = (0..k).map(|_| (0..n).map(|_| rng.random_range(0..p) as u8).collect()).collect();
        let g = GeneratorMatrix::new(p, rows.clone()).unwrap();
        match analysis::gray_dual_distance_class(&g) {
            Ok(r) => {
                prop_assert_eq!(r.gray_class, naive_dual_class(&rows, p));
                if let Some(w) = r.gray_witness {
                    prop_assert!(analysis::verify_proportional(&g, &w));
                }
            }
            Err(tracecode::Error::RankDeficient { .. }) => prop_assert!(g.rank() < k),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn minimality_matches_brute_force_and_ratio_test(
        p in prop_oneof![Just(3u32), Just(5)],
        k in 1usize..4,
        n in 2usize..8,
        seed in any::<u64>(),
    ) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<u8>> = (0..k).map(|_| (0..n).map(|_| rng.random_range(0..p) as u8).collect()).collect();
        let words = span(&rows, p);
        let (all_minimal, witness) = analysis::minimality_of_codewords(&words, p, 2, u128::MAX).unwrap();
        prop_assert_eq!(all_minimal, naive_all_minimal(&words, p));
        prop_assert_eq!(all_minimal, witness.is_none());
        let weights: Vec<u64> = words.iter().map(|w| w.iter().filter(|&&s| s != 0).count() as u64).filter(|&w| w > 0).collect();
        if let (Some(&lo), Some(&hi)) = (weights.iter().min(), weights.iter().max()) {
            if analysis::ab_ratio_criterion(lo, hi, p) {
                prop_assert!(all_minimal);
            }
        }
    }
}

#[test]
fn no_unit_valued_weight_one_dual_vector() {
    for (p, m) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
        let c = code(p, m);
        assert!(analysis::ring_dual_low_weight_search(c, 1, u128::MAX)
            .unwrap()
            .is_none());
        let w = analysis::ring_dual_low_weight_search(c, 2, u128::MAX)
            .unwrap()
            .unwrap();
        assert!(analysis::verify_ring_witness(c, &w).unwrap());
        assert_eq!(w.lee_weight, 2);
    }
}

#[test]
fn m1_spectra_match_direct_enumeration() {
    for p in [3u32, 5, 7] {
        let c = code(p, 1);
        let d = c
            .weight_distribution(tracecode::Mode::Exhaustive, &Default::default())
            .unwrap();
        let oracle = spectrum_m1(p as u64);
        assert_eq!(d.entries, oracle, "p = {p}");
    }
}
