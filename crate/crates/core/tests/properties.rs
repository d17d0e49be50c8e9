use proptest::prelude::*;

use softdec::analysis::{
    exponent_a, exponent_a_opt, exponent_b, exponent_b_opt, koetter_hamming_radius, radius_asd, radius_bm, radius_gs,
};
use softdec::asd::{list_size_bound, threshold_ok, MultiplicityMatrix};
use softdec::channel::ChannelStats;
use softdec::Elem;

fn distribution(raw: Vec<f64>) -> Vec<f64> {
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

fn typewriter(q: usize) -> Vec<f64> {
    let mut p = vec![0.0; q];
    p[0] = 0.8;
    p[1] = 0.2;
    p
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn soft_radius_decreases_with_rate(
        raw in prop::collection::vec(0.01f64..1.0, 4..=16),
        lambda in 2u32..400,
        a in 0.01f64..0.98,
        d in 0.001f64..0.5,
    ) {
        let p = distribution(raw);
        let s = ChannelStats::of(&p).unwrap();
        let b = (a + d).min(0.99);
        let lo = radius_asd(a, &s, lambda as f64).unwrap();
        let hi = radius_asd(b, &s, lambda as f64).unwrap();
        prop_assert!(hi.raw <= lo.raw + 1e-15);
        prop_assert!(hi.clipped <= lo.clipped);
        prop_assert!((0.0..=1.0).contains(&lo.clipped));
    }

    #[test]
    fn hard_radii_ordered(r in 0.001f64..0.999) {
        prop_assert!(radius_gs(r).unwrap() >= radius_bm(r).unwrap());
    }

    #[test]
    fn exponent_optimum_dominates_samples(r in 0.1f64..0.9, s in 0.01f64..20.0) {
        let p = typewriter(16);
        let a = exponent_a_opt(r, &p, 10.0).unwrap();
        if !a.infinite {
            prop_assert!(a.raw >= exponent_a(r, &p, 10.0, s).unwrap() - 1e-9);
        }
        let b = exponent_b_opt(r, &p, 10.0).unwrap();
        prop_assert!(b.raw >= exponent_b(r, &p, 10.0, s).unwrap() - 1e-9);
    }

    #[test]
    fn threshold_is_exact_integer_test(
        mults in prop::collection::vec(0u32..12, 15),
        hits in prop::collection::vec(any::<bool>(), 15),
        k in 2usize..8,
    ) {
        let cols = mults.iter().map(|&m| vec![(Elem(1), m)]).collect();
        let m = MultiplicityMatrix::from_columns(16, 12, cols).unwrap();
        let c: Vec<Elem> = hits.iter().map(|&h| if h { Elem(1) } else { Elem(0) }).collect();
        let score: i128 = mults.iter().zip(&hits).filter(|p| *p.1).map(|p| *p.0 as i128).sum();
        let cost: i128 = mults.iter().map(|&m| (m as i128) * (m as i128 + 1) / 2).sum();
        let t = threshold_ok(&m, &c, k).unwrap();
        prop_assert_eq!(t.ok, score * score > 2 * (k as i128 - 1) * cost);
        prop_assert_eq!(t.margin, score * score - 2 * (k as i128 - 1) * cost);
    }

    #[test]
    fn list_bound_is_largest_admissible(cost in 1u64..5_000_000, k in 2usize..300) {
        let l = list_size_bound(cost, k).unwrap() as u128;
        let fits = |l: u128| (k as u128 - 1) * l * l + (k as u128 + 1) * l <= 2 * cost as u128;
        prop_assert!(fits(l));
        prop_assert!(!fits(l + 1));
    }
}

#[test]
fn hamming_cost_radius_against_hard_list_decoding() {
    for r in [0.3, 0.5, 0.7] {
        let kh = koetter_hamming_radius(r, 255, 1e-4).unwrap();
        assert!(kh > radius_gs(r).unwrap(), "rate {r}");
    }
    let kh = koetter_hamming_radius(0.9, 255, 1e-4).unwrap();
    let gs = radius_gs(0.9).unwrap();
    assert!(kh < gs && gs - kh < 1e-3, "{kh} {gs}");
}

#[test]
fn selection_exponent_against_list_exponent() {
    let p = typewriter(256);
    let mut above = Vec::new();
    for i in 1..=19 {
        let r = i as f64 / 20.0;
        let a = exponent_a_opt(r, &p, 100.0).unwrap();
        let b = exponent_b_opt(r, &p, 100.0).unwrap();
        if !a.infinite && b.value > a.value + 1e-9 {
            above.push(r);
        }
    }
    println!("rates where the selection exponent exceeds the list exponent: {above:?}");
    assert!(above.iter().all(|&r| r < 0.5));
}
