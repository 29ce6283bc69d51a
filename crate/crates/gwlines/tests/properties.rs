use std::cell::Cell;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gwlines::arith::squarefree_part;
use gwlines::config::{random_doc, Parsed, Sample};
use gwlines::crossratio::lambda_mu;
use gwlines::field::rational::rat;
use gwlines::field::{Field, FieldExtension, FiniteExt, FiniteField, QuadExt, Rationals};
use gwlines::grassmann::{Chart, Line};
use gwlines::gw::{GwClass, GwField};
use gwlines::localindex::zeros::zero_locus_bruteforce;
use gwlines::localindex::{local_index_value, CodimTwoPlane, Method};
use gwlines::transversals::{conjugate_line, lines_meeting_four, Transversals};
use gwlines::weil::EtaleAlgebra;

fn nonzero_rat() -> impl Strategy<Value = BigRational> {
    (-400i64..=400, 1i64..=60).prop_filter_map("nonzero", |(n, d)| (n != 0).then(|| rat(n, d)))
}

fn f_q() -> impl Strategy<Value = FiniteField> {
    prop::sample::select(vec![(3u32, 1u32), (5, 1), (7, 1), (3, 2), (3, 3), (13, 1), (5, 2)])
        .prop_map(|(p, m)| FiniteField::new(p, m).unwrap())
}

fn nonzero_in(f: &FiniteField) -> std::ops::Range<u32> {
    1..f.q()
}

/// A random configuration with four lines over `f`, or `None` for a degenerate draw.
fn config<F: Sample + GwField>(f: &F, seed: u64) -> Option<Parsed<F>> {
    let doc = random_doc(f, 3, &mut ChaCha8Rng::seed_from_u64(seed), 6);
    doc.build(f).ok()
}

/// `r mod p`, when the denominator is a unit.
fn reduce(fp: &FiniteField, r: &BigRational) -> Option<u32> {
    let p = fp.p() as i64;
    let residue = |x: &num_bigint::BigInt| -> i64 {
        let m = (x % p).to_string().parse::<i64>().unwrap();
        m.rem_euclid(p)
    };
    let d = residue(r.denom());
    (d != 0).then(|| fp.div(&fp.from_i64(residue(r.numer())), &fp.from_i64(d)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_square_classes_are_multiplicative(a in nonzero_rat(), b in nonzero_rat(), c in nonzero_rat()) {
        let q = Rationals;
        let ra = q.square_class_rep(&a).unwrap();
        prop_assert!(q.is_square(&q.div(&ra, &a).unwrap()).unwrap());
        let ab = q.square_class_rep(&(&a * &b)).unwrap();
        let rr = q.square_class_rep(&(&ra * q.square_class_rep(&b).unwrap())).unwrap();
        prop_assert_eq!(ab, rr);
        prop_assert_eq!(q.square_class_rep(&(&a * &c * &c)).unwrap(), ra);
    }

    #[test]
    fn finite_square_classes_are_multiplicative((f, a, b) in f_q().prop_flat_map(|f| { let s = nonzero_in(&f); (Just(f), s.clone(), s) })) {
        let ra = f.square_class_rep(&a).unwrap();
        prop_assert!(f.is_square(&f.div(&ra, &a).unwrap()).unwrap());
        let lhs = f.square_class_rep(&f.mul(&a, &b)).unwrap();
        let rhs = f.square_class_rep(&f.mul(&ra, &f.square_class_rep(&b).unwrap())).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn trace_is_linear_and_frobenius_invariant(p in prop::sample::select(vec![3u32, 5, 7]), m in 2u32..=4, seed in any::<u64>()) {
        use rand::Rng;
        let base = FiniteField::prime(p).unwrap();
        let top = FiniteField::new(p, m).unwrap();
        let ext = FiniteExt::new(&base, &top).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (rng.gen_range(0..top.q()), rng.gen_range(0..top.q()));
        let c = rng.gen_range(0..p);
        let combo = top.add(&a, &top.mul(&ext.embed(&c), &b));
        prop_assert_eq!(ext.trace(&combo), base.add(&ext.trace(&a), &base.mul(&c, &ext.trace(&b))));
        let fa = top.frobenius(&a);
        prop_assert_eq!(ext.trace(&fa), ext.trace(&a));
        prop_assert_eq!(top.frobenius(&top.mul(&a, &b)), top.mul(&fa, &top.frobenius(&b)));
        prop_assert_eq!(top.frobenius(&top.add(&a, &b)), top.add(&fa, &top.frobenius(&b)));
    }

    #[test]
    fn one_dimensional_forms_see_only_square_classes(a in nonzero_rat(), c in nonzero_rat()) {
        let q = Rationals;
        let x = GwClass::one_dim(&q, &a).unwrap();
        let y = GwClass::one_dim(&q, &(&a * &c * &c)).unwrap();
        prop_assert!(x.gw_equal(&y).unwrap());
    }

    #[test]
    fn witt_cancellation_holds_in_the_decision(
        f in prop::collection::vec(nonzero_rat(), 1..4),
        g in prop::collection::vec(nonzero_rat(), 1..4),
        h in prop::collection::vec(nonzero_rat(), 1..3),
    ) {
        prop_assume!(f.len() == g.len());
        let q = Rationals;
        let fc = GwClass::from_diagonal(&q, &f).unwrap();
        let gc = GwClass::from_diagonal(&q, &g).unwrap();
        let hc = GwClass::from_diagonal(&q, &h).unwrap();
        let plain = fc.gw_equal(&gc).unwrap();
        let padded = fc.add(&hc).unwrap().gw_equal(&gc.add(&hc).unwrap()).unwrap();
        prop_assert_eq!(plain, padded);
        let mut rev = f.clone();
        rev.reverse();
        prop_assert!(fc.gw_equal(&GwClass::from_diagonal(&q, &rev).unwrap()).unwrap());
        if plain {
            let (fi, gi) = (fc.invariants(), gc.invariants());
            prop_assert_eq!(fi.rank, gi.rank);
            prop_assert_eq!(fi.signature, gi.signature);
            prop_assert!(q.is_square(&q.div(&fi.disc, &gi.disc).unwrap()).unwrap());
        }
    }

    #[test]
    fn rank_two_forms_over_finite_fields_are_classified_by_disc(
        (f, a, b, c, d) in f_q().prop_flat_map(|f| { let s = nonzero_in(&f); (Just(f), s.clone(), s.clone(), s.clone(), s) })
    ) {
        let x = GwClass::from_diagonal(&f, &[a, b]).unwrap();
        let y = GwClass::from_diagonal(&f, &[c, d]).unwrap();
        let same_disc = f.is_square(&f.div(&x.disc(), &y.disc()).unwrap()).unwrap();
        prop_assert_eq!(x.gw_equal(&y).unwrap(), same_disc);
    }

    #[test]
    fn plucker_coordinates_scale_by_the_change_of_basis(
        p in prop::collection::vec(-6i64..=6, 5), q in prop::collection::vec(-6i64..=6, 5),
        m in prop::collection::vec(-4i64..=4, 4),
    ) {
        let f = Rationals;
        let line = Line::from_i64(&f, &p, &q);
        prop_assume!(line.is_ok());
        let line = line.unwrap();
        let det = m[0] * m[3] - m[1] * m[2];
        prop_assume!(det != 0);
        let g = [[rat(m[0], 1), rat(m[1], 1)], [rat(m[2], 1), rat(m[3], 1)]];
        let moved = line.rebased(&g).unwrap();
        let scaled: Vec<BigRational> = line.plucker().iter().map(|x| x * rat(det, 1)).collect();
        prop_assert_eq!(moved.plucker(), scaled);
        prop_assert_eq!(moved.canonical(), line.canonical());
        let plane = CodimTwoPlane::from_i64(&f, &m.iter().chain(&[1]).copied().collect::<Vec<_>>(), &p);
        if let Ok(plane) = plane {
            prop_assert_eq!(plane.meets(&f, &line), plane.meets(&f, &moved));
        }
    }

    #[test]
    fn chart_points_and_coordinates_are_inverse(x in prop::collection::vec(-9i64..=9, 4), y in prop::collection::vec(-9i64..=9, 4)) {
        let f = Rationals;
        let chart = Chart::identity(&f, 5);
        let (x, y): (Vec<_>, Vec<_>) = (x.iter().map(|&a| rat(a, 1)).collect(), y.iter().map(|&a| rat(a, 1)).collect());
        let line = chart.point(&x, &y).unwrap();
        prop_assert_eq!(chart.coords(&line), Some((x, y)));
    }

    #[test]
    fn cross_ratios_swap_between_rational_transversals(seed in any::<u64>()) {
        let f = FiniteField::prime(101).unwrap();
        let Some(parsed) = config(&f, seed) else { return Ok(()) };
        let lines = parsed.lines.unwrap();
        if let Ok(Transversals::Rational([a, b])) = lines_meeting_four(&lines) {
            let (Ok(x), Ok(y)) = (lambda_mu(&lines, &a), lambda_mu(&lines, &b)) else { return Ok(()) };
            prop_assert_eq!(&x.lambda, &y.mu);
            prop_assert_eq!(&x.mu, &y.lambda);
            prop_assert_eq!(x.difference(&f), f.neg(&y.difference(&f)));
        }
    }

    #[test]
    fn cross_ratios_are_galois_equivariant(seed in any::<u64>()) {
        let Some(parsed) = config(&Rationals, seed) else { return Ok(()) };
        let lines = parsed.lines.unwrap();
        if let Ok(Transversals::Conjugate { ext, line, .. }) = lines_meeting_four(&lines) {
            let up: Vec<_> = lines.iter().map(|l| l.embed(&ext)).collect();
            let bar = conjugate_line(&ext, &line);
            let (Ok(x), Ok(y)) = (lambda_mu(&up, &line), lambda_mu(&up, &bar)) else { return Ok(()) };
            prop_assert_eq!(y.lambda, ext.conj(&x.lambda));
            prop_assert_eq!(y.mu, ext.conj(&x.mu));
        }
    }

    #[test]
    fn jacobian_indices_commute_with_reduction(seed in any::<u64>(), p in prop::sample::select(vec![101u32, 103, 107])) {
        let q = Rationals;
        let fp = FiniteField::prime(p).unwrap();
        let Some(parsed) = config(&q, seed) else { return Ok(()) };
        let Ok(Transversals::Rational(ls)) = lines_meeting_four(parsed.lines.as_ref().unwrap()) else { return Ok(()) };
        let good = Cell::new(true);
        let red = parsed.planes.map(&fp, |r| reduce(&fp, r).unwrap_or_else(|| { good.set(false); 0 }));
        for l in &ls {
            let j = local_index_value(&parsed.planes, l, Method::Jacobian).unwrap();
            let Some(jr) = reduce(&fp, &j) else { continue };
            let line_good = Cell::new(good.get());
            let lr = l.canonical().map(&fp, |r| reduce(&fp, r).unwrap_or_else(|| { line_good.set(false); 0 }));
            if !line_good.get() || jr == 0 {
                continue;
            }
            prop_assert!(red.meets_all(&lr));
            prop_assert_eq!(local_index_value(&red, &lr, Method::Jacobian).unwrap(), jr);
        }
    }

    #[test]
    fn brute_force_zero_locus_matches_the_transversal_count(seed in any::<u64>(), p in prop::sample::select(vec![5u32, 7, 11])) {
        let f = FiniteField::prime(p).unwrap();
        let Some(parsed) = config(&f, seed) else { return Ok(()) };
        let Ok(t) = lines_meeting_four(parsed.lines.as_ref().unwrap()) else { return Ok(()) };
        let locus = zero_locus_bruteforce(&parsed.planes, 2).unwrap();
        prop_assert_eq!(locus.accounted, t.degree());
        prop_assert_eq!(locus.points.len(), t.closed_points());
    }

    #[test]
    fn squared_embedding_determinant_lies_in_the_base(a in -30i64..=30, b in -30i64..=30) {
        let q = Rationals;
        let squarefree = |x: i64| x != 0 && squarefree_part(&x.into()) == x.into();
        prop_assume!(squarefree(a) && squarefree(b) && a != b && a != 1 && b != 1);
        let alg = EtaleAlgebra::biquadratic(a, b).unwrap();
        let d2 = alg.det_a_squared().unwrap();
        prop_assert!(d2 != q.zero());
        prop_assert_eq!(alg.ext().embed(&d2), alg.ext().top().mul(&alg.det_a(), &alg.det_a()));
    }
}

#[test]
fn conjugate_pairs_share_one_closed_point() {
    // Sanity check that the Galois property above is exercised.
    let hits = (0..40u64)
        .filter_map(|s| config(&Rationals, s))
        .filter(|p| matches!(lines_meeting_four(p.lines.as_ref().unwrap()), Ok(Transversals::Conjugate { .. })))
        .count();
    assert!(hits > 10, "{hits}");
    let ext = QuadExt::rational(5).unwrap();
    assert_eq!(ext.conj(&ext.gen()), ext.neg(&ext.gen()));
}
