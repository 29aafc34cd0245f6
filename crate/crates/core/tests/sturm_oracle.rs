use fewroots_core::rational::{int, rat, Rational};
use fewroots_core::sturm::{isolate_real_roots, SturmSequence};
use fewroots_core::UniPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Counts sign changes of `p` on the grid `k/4 + 1/8`, which never meets a
/// root in `(1/2) Z`.
fn sign_scan(p: &UniPoly, lo: i64, hi: i64) -> usize {
    let mut changes = 0;
    let mut last = 0i8;
    for k in (4 * lo)..=(4 * hi) {
        let x = rat(k, 4) + rat(1, 8);
        let s = p.sign_at(&x);
        if last != 0 && s != 0 && s != last {
            changes += 1;
        }
        if s != 0 {
            last = s;
        }
    }
    changes
}

#[test]
fn sturm_agrees_with_sign_scan_on_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..1000 {
        let real_roots = rng.gen_range(0..=6usize);
        let mut roots: Vec<i64> = Vec::new();
        while roots.len() < real_roots {
            let r = rng.gen_range(-40..=40i64);
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
        let mut p = UniPoly::constant(int(rng.gen_range(1..=9)));
        for &r in &roots {
            // root r/2
            p = &p * &UniPoly::from_ints(&[-r, 2]);
        }
        let quadratics = rng.gen_range(0..=(8 - real_roots) / 2);
        for _ in 0..quadratics {
            let c = rng.gen_range(1..=12i64);
            let b = rng.gen_range(-3..=3i64);
            // x^2 + b x + (b^2 + c): negative discriminant
            p = &p * &UniPoly::from_ints(&[b * b + c, b, 1]);
        }
        let iso = isolate_real_roots(&p).unwrap();
        let scan = sign_scan(&p, -21, 21);
        assert_eq!(iso.len(), scan, "case {case}: {p}");
        assert_eq!(iso.len(), real_roots, "case {case}");
        for w in iso.windows(2) {
            assert!(w[0].hi <= w[1].lo, "overlap in case {case}");
        }
        for i in &iso {
            if !i.is_exact() {
                assert_eq!(i.sign_lo * i.sign_hi, -1);
            }
            let s = SturmSequence::new(&i.poly).unwrap();
            if !i.is_exact() {
                assert_eq!(s.count_in(&i.lo, &i.hi), 1);
            }
        }
    }
}

#[test]
fn multiplicities_are_collapsed() {
    let a = UniPoly::from_ints(&[-3, 1]);
    let b = UniPoly::from_ints(&[5, 1]);
    let p = &a.pow(4) * &b.pow(3);
    let iso = isolate_real_roots(&p).unwrap();
    assert_eq!(iso.len(), 2);
    let pts: Vec<Rational> = iso
        .into_iter()
        .map(|mut i| {
            i.refine(&rat(1, 1 << 20));
            i.midpoint()
        })
        .collect();
    assert!((&pts[0] + int(5)) < rat(1, 1000) && (&pts[0] + int(5)) > rat(-1, 1000));
    assert!((&pts[1] - int(3)) < rat(1, 1000) && (&pts[1] - int(3)) > rat(-1, 1000));
}
