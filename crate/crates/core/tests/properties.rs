use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use kep_core::action::{act_edge_small, act_inf, act_path, act_path_small, restriction_interval};
use kep_core::bisection::Bisection;
use kep_core::full_group::{decompose_ha, fg_equals, kernel_factor, realize_h1, rewrite_generators, GenWord};
use kep_core::graph::{is_pseudo_free, PropertyReport, Truth};
use kep_core::groupoid::{extend_triple, Arrow, Groupoid, Triple};
use kep_core::homology::snf::determinant as determinant_of;
use kep_core::homology::{self, phi, phi_inv, smith, IntMatrix, LimitClass, Tag};
use kep_core::matrix::MatrixPair;
use kep_core::path::{paths_from, Path};
use kep_core::sample;
use kep_core::verify::{self, cylinder_point, Exec, LawSweep};

fn e1() -> MatrixPair {
    "N: 1\nA: 2\nB: 1".parse().unwrap()
}

fn e2() -> MatrixPair {
    "N: 2\nA: 2 3; 3 2\nB: 1 2; 2 1".parse().unwrap()
}

fn named(k: u64) -> MatrixPair {
    if k % 2 == 0 {
        e1()
    } else {
        e2()
    }
}

/// A point of `Z(ν)` and the arrow of `t` at it.
fn arrow_at(t: &Triple, pair: &MatrixPair, last: bool) -> Arrow {
    Arrow::new(t.clone(), cylinder_point(pair, &t.source, last)).unwrap()
}

/// The piece of `u` whose source cylinder contains `x`.
fn piece_at<'a>(u: &'a Bisection, x: &kep_core::path::InfPath) -> &'a Triple {
    u.pieces().iter().find(|t| x.starts_with(&t.source)).expect("full bisection covers x")
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn pair_text_round_trips(seed in any::<u64>()) {
        let p = sample::random_pair(&mut StdRng::seed_from_u64(seed), 5, 6, false);
        prop_assert_eq!(p.to_string().parse::<MatrixPair>().unwrap(), p);
    }

    #[test]
    fn property_report_is_consistent(seed in any::<u64>()) {
        let p = sample::random_pair(&mut StdRng::seed_from_u64(seed), 5, 5, seed % 2 == 0);
        let r = PropertyReport::compute(&p, 6);
        prop_assert_eq!(r.action.r_b, r.action.b_regular.len());
        if r.action.contracting {
            prop_assert_eq!(r.action.r, Some(2 * p.max_a()));
        }
        if r.structural.irreducible {
            prop_assert!(r.structural.cofinal);
            prop_assert_eq!(r.ah.minimal, Truth::Yes);
        }
        if r.action.pseudo_free {
            prop_assert!(r.action.b_sinks.is_empty());
            prop_assert_eq!(r.action.b_regular.len(), p.n());
        }
        let same_support = (0..p.n()).all(|i| (0..p.n()).all(|j| (p.a(i, j) == 0) == (p.b(i, j) == 0)));
        if r.action.contracting && same_support {
            prop_assert!(is_pseudo_free(&p));
        }
        if r.ah.hausdorff == Truth::No || r.ah.effective == Truth::Yes {
            prop_assert!(r.structural.condition_l);
        }
    }

    #[test]
    fn cocycle_sums_over_remainders(seed in any::<u64>()) {
        // κ_m permutes the edges i → j and Σ_n φ(m, e_{i,j,n}) = m B_ij
        let p = sample::random_pair(&mut StdRng::seed_from_u64(seed), 4, 5, false);
        for i in 0..p.n() {
            let edges: Vec<_> = p.out_edges(i).collect();
            for j in 0..p.n() {
                let block: Vec<_> = edges.iter().copied().filter(|e| e.dst as usize == j).collect();
                for m in -20i64..=20 {
                    let mut images: Vec<u32> = Vec::new();
                    let mut sum = 0;
                    for &e in &block {
                        let (f, q) = act_edge_small(&p, m, e).unwrap();
                        images.push(f.index);
                        sum += q;
                    }
                    images.sort();
                    prop_assert_eq!(images, (0..block.len() as u32).collect::<Vec<_>>());
                    prop_assert_eq!(sum, m * p.b(i, j));
                }
            }
        }
    }

    #[test]
    fn infinite_action_matches_finite_prefixes(seed in any::<u64>(), m in -30i64..=30) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = sample::random_pair(&mut rng, 3, 4, true);
        let mu = verify::random_walk(&mut rng, &p, 5);
        let x = cylinder_point(&p, &mu, seed % 2 == 0);
        let y = act_inf(&p, &BigInt::from(m), &x, None).unwrap();
        for k in [0, 3, 9, 20] {
            let (img, _) = act_path(&p, &BigInt::from(m), &x.take(k));
            prop_assert_eq!(y.take(k), img);
        }
        let back = act_inf(&p, &BigInt::from(-m), &y, None).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn big_and_small_paths_agree(seed in any::<u64>(), m in -1000i64..=1000) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = sample::random_pair(&mut rng, 4, 5, false);
        let mu = verify::random_walk(&mut rng, &p, 8);
        let (q, c) = act_path_small(&p, m, &mu).unwrap();
        prop_assert_eq!(act_path(&p, &BigInt::from(m), &mu), (q, BigInt::from(c)));
    }

    #[test]
    fn restriction_certificate_holds(seed in any::<u64>(), m in -12i64..=12) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = sample::random_pair(&mut rng, 3, 4, true);
        let (depth, r) = restriction_interval(&p, &BigInt::from(m)).unwrap();
        prop_assert_eq!(depth, BigInt::from(m.abs()));
        prop_assert!(verify::nucleus_bound(&p, m.abs(), 2, Exec::Sequential).passed());
        for _ in 0..200 {
            let len = m.unsigned_abs() as usize + rng.gen_range(0..=4);
            let mu = verify::random_walk(&mut rng, &p, len);
            let (_, c) = act_path_small(&p, m, &mu).unwrap();
            prop_assert!(c.abs() <= r);
        }
    }

    #[test]
    fn extension_partitions_the_basic_set(seed in any::<u64>(), d in 0usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = named(seed);
        let u = sample::random_full_bisection(&mut rng, &p, 2, 5);
        let t = &u.pieces()[seed as usize % u.len()];
        let parts = extend_triple(&p, t, d);
        let sources: Vec<&Path> = parts.iter().map(|s| &s.source).collect();
        let ranges: Vec<&Path> = parts.iter().map(|s| &s.range).collect();
        prop_assert_eq!(parts.len(), paths_from(&p, t.source.range(), d).len());
        for (s, r) in sources.iter().zip(&ranges) {
            prop_assert!(t.source.is_prefix_of(s) && s.len() == t.source.len() + d);
            prop_assert!(t.range.is_prefix_of(r) && r.len() == t.range.len() + d);
        }
        let mut sorted = ranges.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), parts.len());
        let piece = Bisection::from_pieces(parts);
        prop_assert!(piece.check(&p).is_bisection);
    }

    #[test]
    fn arrows_compose_along_bisections(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = Groupoid::new(named(seed));
        let p = g.pair();
        let u = sample::random_full_bisection(&mut rng, p, 3, 5);
        let v = sample::random_full_bisection(&mut rng, p, 3, 5);
        let uv = Bisection::product(p, &u, &v).unwrap();
        let mu = verify::random_walk(&mut rng, p, 4);
        let x = cylinder_point(p, &mu, seed % 3 == 0);
        let y = v.apply(p, &x).unwrap();
        prop_assert_eq!(uv.apply(p, &x).unwrap(), u.apply(p, &y).unwrap());

        let h = Arrow::new(piece_at(&v, &x).clone(), x.clone()).unwrap();
        let gg = Arrow::new(piece_at(&u, &y).clone(), y.clone()).unwrap();
        let gh = g.compose(&gg, &h).unwrap();
        prop_assert_eq!(gh.degree(), gg.degree() + h.degree());
        prop_assert_eq!(g.inverse(&h).unwrap().degree(), -h.degree());
        prop_assert_eq!(g.range(&gh).unwrap(), uv.apply(p, &x).unwrap());
        let unit = g.compose(&g.inverse(&h).unwrap(), &h).unwrap();
        prop_assert_eq!(g.arrow_eq(&unit, &Arrow::unit(x.clone())), Truth::Yes);
    }

    #[test]
    fn arrow_equality_is_an_equivalence(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = Groupoid::new(named(seed));
        let p = g.pair();
        let u = sample::random_full_bisection(&mut rng, p, 3, 5);
        let t = &u.pieces()[seed as usize % u.len()];
        let a = arrow_at(t, p, seed % 2 == 0);
        let k = t.source.len();
        let (b, c) = (a.extended_to(p, k + 1), a.extended_to(p, k + 3));
        prop_assert_eq!(g.arrow_eq(&a, &a), Truth::Yes);
        prop_assert_eq!(g.arrow_eq(&a, &b), Truth::Yes);
        prop_assert_eq!(g.arrow_eq(&b, &c), Truth::Yes);
        prop_assert_eq!(g.arrow_eq(&a, &c), Truth::Yes);
        let other = arrow_at(&Triple { shift: &t.shift + 1, ..t.clone() }, p, seed % 2 == 0);
        let ab = g.arrow_eq(&a, &other);
        prop_assert_eq!(ab, g.arrow_eq(&other, &a));
        prop_assert_eq!(ab, Truth::No);
    }

    #[test]
    fn shift_free_products_stay_shift_free(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = named(seed);
        let u = sample::random_full_bisection(&mut rng, &p, 3, 0);
        let v = sample::random_full_bisection(&mut rng, &p, 3, 0);
        let uv = Bisection::product(&p, &u, &v).unwrap();
        prop_assert!(uv.pieces().iter().all(|t| t.shift.is_zero()));
    }

    #[test]
    fn transpositions_have_zero_index(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = named(seed);
        let v = sample::random_disjoint(&mut rng, &p, 3, 3, 5);
        let h = Bisection::hat(&p, &v).unwrap();
        prop_assert!(homology::index(&p, &h).unwrap().is_zero());
        let g = Groupoid::new(p.clone());
        let sq = Bisection::product(&p, &h, &h).unwrap();
        prop_assert_eq!(fg_equals(&g, &sq, &Bisection::identity(&p)).unwrap(), Truth::Yes);
    }

    #[test]
    fn splitting_recovers_the_element(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = Groupoid::new(named(seed));
        let p = g.pair();
        let u = sample::random_full_bisection(&mut rng, p, 3, 6);
        let (h, a) = decompose_ha(&u);
        prop_assert!(h.check(p).is_full && a.check(p).is_full);
        let back = Bisection::product(p, &h, &a).unwrap();
        prop_assert_eq!(fg_equals(&g, &back, &u).unwrap(), Truth::Yes);
    }

    #[test]
    fn torsion_class_is_additive(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = named(seed);
        let n1 = 1 + (seed % 3) as usize;
        let u = sample::random_kernel_element(&mut rng, &p, n1, 4);
        let u = Bisection::product(&p, &u, &sample::rho1_image_element(&mut rng, &p, n1, 3)).unwrap();
        let v = sample::rho1_image_element(&mut rng, &p, 2, 3);
        let uv = Bisection::product(&p, &u, &v).unwrap();
        let sum = homology::ihn_class(&p, &u).unwrap().add(&p, &homology::ihn_class(&p, &v).unwrap()).unwrap();
        prop_assert!(homology::ihn_class(&p, &uv).unwrap().class_eq(&p, &sum).unwrap());
    }

    #[test]
    fn realized_classes_round_trip(seed in any::<u64>(), level in 0usize..=3, v in proptest::collection::vec(-5i64..=5, 2)) {
        let p = named(seed);
        let target = LimitClass::from_i64(Tag::B, level, &v[..p.n()]);
        let u = realize_h1(&p, &target).unwrap();
        prop_assert!(u.check(&p).is_full);
        prop_assert!(homology::ihn_class(&p, &u).unwrap().class_eq(&p, &target).unwrap());
    }

    #[test]
    fn index_is_refinement_invariant(seed in any::<u64>(), d in 1usize..=2) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = named(seed);
        let u = sample::random_full_bisection(&mut rng, &p, 3, 6);
        prop_assert_eq!(homology::index(&p, &u.refine(&p, d)).unwrap(), homology::index(&p, &u).unwrap());
    }

    #[test]
    fn phi_inverse_undoes_phi(level in 0usize..4, v in proptest::collection::vec(-9i64..=9, 2), seed in any::<u64>()) {
        let p = named(seed);
        for tag in [Tag::A, Tag::B] {
            let c = LimitClass::from_i64(tag, level, &v[..p.n()]);
            prop_assert!(phi_inv(&p, &phi(&c)).class_eq(&p, &c).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(
        rows in 1usize..=6,
        cols in 1usize..=6,
        entries in proptest::collection::vec(-9i64..=9, 36),
    ) {
        let data: Vec<Vec<i64>> = (0..rows).map(|i| entries[i * cols..(i + 1) * cols].to_vec()).collect();
        let m = IntMatrix::from_rows(&data);
        let s = smith(&m);
        prop_assert_eq!(&s.p.mul(&m).mul(&s.q), &s.d);
        prop_assert!(determinant_of(&s.p).abs().is_one());
        prop_assert!(determinant_of(&s.q).abs().is_one());
        prop_assert_eq!(s.p.mul(&s.p_inv), IntMatrix::identity(rows));
        for i in 0..rows {
            for j in 0..cols {
                let x = &s.d[(i, j)];
                if i != j || i >= s.rank {
                    prop_assert!(x.is_zero());
                } else {
                    prop_assert!(x.is_positive());
                }
            }
        }
        for i in 1..s.rank {
            prop_assert!((&s.d[(i, i)] % &s.d[(i - 1, i - 1)]).is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn factorizations_reproduce_their_input(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = Groupoid::new(named(seed));
        let p = g.pair();
        let k = sample::random_kernel_element(&mut rng, p, 1 + (seed % 2) as usize, 6);
        let word = kernel_factor(&g, &k).unwrap();
        prop_assert_eq!(fg_equals(&g, &word.evaluate(p).unwrap(), &k).unwrap(), Truth::Yes);
        prop_assert_eq!(word.to_string().parse::<GenWord>().unwrap(), word);

        let u = sample::random_full_bisection(&mut rng, p, 3, 6);
        let word = rewrite_generators(&g, &u).unwrap();
        prop_assert_eq!(fg_equals(&g, &word.evaluate(p).unwrap(), &u).unwrap(), Truth::Yes);
        prop_assert_eq!(word.to_string().parse::<GenWord>().unwrap(), word);
    }

    #[test]
    fn execution_strategy_does_not_change_results(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = sample::random_pair(&mut rng, 3, 3, true);
        let sweep = LawSweep { max_m: 4, max_len: 3, budget: 2_000, samples: 20, seed };
        prop_assert_eq!(verify::action_laws(&p, &sweep, Exec::Sequential), verify::action_laws(&p, &sweep, Exec::Parallel));
        prop_assert_eq!(verify::nucleus_bound(&p, 6, 2, Exec::Sequential), verify::nucleus_bound(&p, 6, 2, Exec::Parallel));
        let u = sample::random_full_bisection(&mut rng, &p, 2, 3);
        prop_assert_eq!(
            verify::agree_on_cylinders(&p, &u, &u, 3, Exec::Sequential).unwrap(),
            verify::agree_on_cylinders(&p, &u, &u, 3, Exec::Parallel).unwrap()
        );
    }
}

#[test]
fn psi_vanishes_on_the_kernel_groupoid() {
    let mut rng = StdRng::seed_from_u64(5);
    for k in 0..30 {
        let p = named(k);
        let u = sample::random_kernel_element(&mut rng, &p, 1 + (k % 3) as usize, 5);
        assert!(homology::psi(&p, &u).is_zero(&p));
    }
}

#[test]
fn index_zero_elements_have_classes_in_the_image_of_rho1() {
    let mut rng = StdRng::seed_from_u64(9);
    let p = e2();
    for _ in 0..10 {
        let u = sample::rho1_image_element(&mut rng, &p, 1, 3);
        let class = homology::ihn_class(&p, &u).unwrap();
        let f = homology::rho1_solve(&p, &class, 16).unwrap().expect("class lies in the image");
        assert!(homology::rho(&p, 1, &f).unwrap().class_eq(&p, &class).unwrap());
        assert!(homology::index(&p, &realize_h1(&p, &class).unwrap()).unwrap().coker_zero);
    }
}

#[test]
fn odometer_squared_is_torsion_two() {
    let p = e1();
    let g = Groupoid::new(p.clone());
    let odo: Bisection = "(1.1.1; 0; 1.1.0) + (1.1.0; 1; 1.1.1)".parse().unwrap();
    let sq = Bisection::product(&p, &odo, &odo).unwrap();
    let two = Bisection::torsion(&p, &Path::empty(0), BigInt::from(2));
    assert_eq!(fg_equals(&g, &sq, &two).unwrap(), Truth::Yes);
    let i = homology::index(&p, &odo).unwrap();
    assert_eq!(homology::index(&p, &sq).unwrap(), i.add(&p, &i));
    assert_eq!(i.coker, vec![BigInt::one()]);
}
