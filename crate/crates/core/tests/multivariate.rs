use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use softdec::asd::{interpolate_dense, pv_threshold_ok, MultiPoint, MultiplicityMatrix, PvForm};
use softdec::codes::PvCode;
use softdec::{Elem, Field};

fn random_matrix(code: &PvCode, target: &[Elem], r: &mut ChaCha8Rng) -> MultiplicityMatrix {
    let q = code.symbol_field().order() as usize;
    let cols = target
        .iter()
        .map(|&s| {
            let mut col = vec![(s, r.gen_range(0..=3))];
            let other = Elem(r.gen_range(0..q as u16));
            if other != s {
                col.push((other, r.gen_range(0..=2)));
            }
            col
        })
        .collect();
    MultiplicityMatrix::from_columns(q, 3, cols).unwrap()
}

#[test]
fn product_threshold_guarantees_roots() {
    let f = Field::new(2, 2).unwrap();
    let code = PvCode::new(&f, 2, vec![2]).unwrap();
    let words: Vec<_> = code.codewords().unwrap().collect();
    assert_eq!(words.len(), 16);
    let mut r = ChaCha8Rng::seed_from_u64(41);
    let (mut passing, mut binomial_only, mut binomial_missed) = (0, 0, 0);
    for _ in 0..40 {
        let target = &words[r.gen_range(0..words.len())];
        let m = random_matrix(&code, &target.symbols, &mut r);
        if m.is_zero() {
            continue;
        }
        let points: Vec<MultiPoint> = m
            .entries()
            .map(|(j, s, mm)| {
                let mut coords = vec![code.points()[j]];
                coords.extend(code.decompose(s));
                MultiPoint { coords, m: mm }
            })
            .collect();
        let q = interpolate_dense(&f, &points, 2, 2, 12).unwrap().expect("solution within degree 12");
        assert!(!q.is_zero());
        for p in &points {
            assert!(q.has_multiplicity(&f, &p.coords, p.m));
        }
        for c in &words {
            let polys = code.polys(c.message.as_deref().unwrap()).unwrap();
            let root = q.substitute(&f, &polys).is_zero();
            if pv_threshold_ok(&m, &c.symbols, 2, 2, PvForm::Product).unwrap().ok {
                passing += 1;
                assert!(root, "codeword {:?} meets the threshold but is not a root", c.symbols);
            } else if pv_threshold_ok(&m, &c.symbols, 2, 2, PvForm::Binomial).unwrap().ok {
                binomial_only += 1;
                binomial_missed += usize::from(!root);
            }
        }
    }
    assert!(passing > 0);
    println!("product passes {passing}, binomial-only passes {binomial_only}, of which {binomial_missed} not roots");
}

#[test]
fn codewords_are_consistent() {
    let f = Field::new(2, 2).unwrap();
    let code = PvCode::new(&f, 2, vec![2]).unwrap();
    assert_eq!(code.vars(), 2);
    assert_eq!(code.rate_parts(), (2, 6));
    for c in code.codewords().unwrap() {
        let polys = code.polys(c.message.as_deref().unwrap()).unwrap();
        for (&x, &s) in code.points().iter().zip(&c.symbols) {
            let parts = code.decompose(s);
            assert_eq!(code.compose(&parts), s);
            for (g, v) in polys.iter().zip(&parts) {
                assert_eq!(g.eval(&f, x), *v);
            }
        }
    }
}
