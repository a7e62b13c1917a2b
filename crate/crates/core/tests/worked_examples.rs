//! Small hand-checked computations on the binary odometer pair `A = [2]`,
//! `B = [1]` (edges `a = 1.1.0`, `b = 1.1.1`) and a few two-vertex pairs.

use num_bigint::BigInt;

use kep_core::action::{act_edge, act_inf, act_path, restriction_interval};
use kep_core::bisection::Bisection;
use kep_core::error::Error;
use kep_core::full_group::fg_equals;
use kep_core::graph::{action_report, ah_report, structural_report, Truth};
use kep_core::groupoid::{extend_triple, Arrow, Groupoid, Triple};
use kep_core::homology::{self, LimitClass, Tag};
use kep_core::matrix::MatrixPair;
use kep_core::path::{Edge, InfPath, Path};

fn e1() -> MatrixPair {
    "N: 1\nA: 2\nB: 1".parse().unwrap()
}

fn e2() -> MatrixPair {
    "N: 2\nA: 2 3; 3 2\nB: 1 2; 2 1".parse().unwrap()
}

fn e3() -> MatrixPair {
    "N: 2\nA: 5 2; 2 2\nB: 1 1; 1 1".parse().unwrap()
}

/// Binary words over `a`, `b` as paths of the odometer; `e` is the empty path.
fn w(word: &str) -> Path {
    if word == "e" {
        return Path::empty(0);
    }
    let edges = word.chars().map(|c| Edge::new(0, 0, u32::from(c == 'b'))).collect();
    Path::from_edges(0, edges).unwrap()
}

fn pt(s: &str) -> InfPath {
    s.parse().unwrap()
}

fn t(mu: &str, m: i64, nu: &str) -> Triple {
    Triple::new(w(mu), m, w(nu)).unwrap()
}

fn bis(ts: &[Triple]) -> Bisection {
    Bisection::from_pieces(ts.to_vec())
}

fn odometer() -> Bisection {
    bis(&[t("b", 0, "a"), t("a", 1, "b")])
}

#[test]
fn pair_files() {
    let p = e1();
    assert_eq!((p.n(), p.a(0, 0), p.b(0, 0)), (1, 2, 1));
    assert_eq!(e2().a_rows(), vec![vec![2, 3], vec![3, 2]]);
    assert!(matches!("N: 1\nA: 0\nB: 0".parse::<MatrixPair>(), Err(Error::InvalidPair(_))));
    assert!(matches!("N: 1\nA: 1\n".parse::<MatrixPair>(), Err(Error::Parse(_))));
    assert!(matches!("N: 2\nA: 1 0; 1 1\nB: 0 1; 0 0".parse::<MatrixPair>(), Err(Error::InvalidPair(_))));
}

#[test]
fn graph_reports() {
    let s = structural_report(&e1());
    assert!(s.essential && s.irreducible && s.condition_l && s.cofinal);
    assert!(!structural_report(&"N: 1\nA: 1\nB: 1".parse().unwrap()).condition_l);
    let s3 = structural_report(&e3());
    assert!(s3.irreducible && s3.essential);

    let a1 = action_report(&e1());
    assert!(a1.pseudo_free && a1.contracting && a1.b_sinks.is_empty());
    assert_eq!((a1.r_b, a1.r), (1, Some(4)));
    let sink = action_report(&"N: 1\nA: 2\nB: 0".parse().unwrap());
    assert!(!sink.pseudo_free);
    assert_eq!((sink.b_sinks, sink.r_b), (vec![0], 0));
    let a2 = action_report(&e2());
    assert!(a2.pseudo_free && a2.contracting);
    assert_eq!(a2.r, Some(6));

    let h1 = ah_report(&e1(), 6);
    assert_eq!((h1.hausdorff, h1.effective, h1.minimal, h1.ah_criteria), (Truth::Yes, Truth::Yes, Truth::Yes, Truth::Yes));
    let loop1 = ah_report(&"N: 1\nA: 1\nB: 1".parse().unwrap(), 6);
    assert_eq!((loop1.effective, loop1.ah_criteria), (Truth::No, Truth::No));
    assert_eq!(ah_report(&e2(), 6).ah_criteria, Truth::Yes);
}

#[test]
fn edge_and_path_action() {
    let p = e1();
    let (a, b) = (Edge::new(0, 0, 0), Edge::new(0, 0, 1));
    let one = BigInt::from(1);
    assert_eq!(act_edge(&p, &BigInt::from(0), a), (a, BigInt::from(0)));
    assert_eq!(act_edge(&p, &one, a), (b, BigInt::from(0)));
    assert_eq!(act_edge(&p, &one, b), (a, BigInt::from(1)));
    assert_eq!(act_edge(&p, &BigInt::from(-1), a), (b, BigInt::from(-1)));
    assert_eq!(act_path(&p, &one, &w("aa")), (w("ba"), BigInt::from(0)));
    assert_eq!(act_path(&p, &one, &w("bb")), (w("aa"), BigInt::from(1)));
    assert_eq!(act_path(&e2(), &BigInt::from(0), &"1.2.2-2.1.1".parse().unwrap()).1, BigInt::from(0));
}

#[test]
fn infinite_paths() {
    let p = e1();
    let one = BigInt::from(1);
    assert_eq!(act_inf(&p, &one, &pt("v:1|1.1.1"), None).unwrap(), pt("v:1|1.1.0"));
    assert_eq!(act_inf(&p, &one, &pt("v:1|1.1.0"), None).unwrap(), pt("1.1.1|1.1.0"));
    let x = pt("1.1.1-1.1.0|1.1.1-1.1.1-1.1.0");
    assert_eq!(act_inf(&p, &BigInt::from(0), &x, None).unwrap(), x);
}

#[test]
fn restriction_intervals() {
    assert_eq!(restriction_interval(&e1(), &BigInt::from(9)).unwrap(), (BigInt::from(9), 4));
    assert_eq!(restriction_interval(&e2(), &BigInt::from(-3)).unwrap(), (BigInt::from(3), 6));
    assert_eq!(restriction_interval(&e1(), &BigInt::from(0)).unwrap(), (BigInt::from(0), 4));
}

#[test]
fn extending_triples() {
    let p = e1();
    assert_eq!(extend_triple(&p, &t("e", 1, "e"), 1), vec![t("b", 0, "a"), t("a", 1, "b")]);
    assert_eq!(extend_triple(&p, &t("ab", 3, "ba"), 0), vec![t("ab", 3, "ba")]);
    assert_eq!(extend_triple(&p, &t("a", 0, "b"), 1), vec![t("aa", 0, "ba"), t("ab", 0, "bb")]);
}

#[test]
fn arrows() {
    let g = Groupoid::new(e1());
    let x = pt("v:1|1.1.0");
    let shift = Arrow::new(t("e", 1, "e"), x.clone()).unwrap();
    let basic = Arrow::new(t("b", 0, "a"), x.clone()).unwrap();
    assert_eq!(g.arrow_eq(&shift, &basic), Truth::Yes);
    assert_eq!(g.arrow_eq(&shift, &shift), Truth::Yes);
    assert_eq!(g.arrow_eq(&shift, &Arrow::unit(x.clone())), Truth::No);

    let inv = g.inverse(&shift).unwrap();
    assert_eq!(inv, Arrow::new(t("e", -1, "e"), pt("1.1.1|1.1.0")).unwrap());
    assert_eq!(g.arrow_eq(&g.inverse(&inv).unwrap(), &shift), Truth::Yes);
    let back = g.compose(&inv, &shift).unwrap();
    assert_eq!(g.arrow_eq(&back, &Arrow::unit(x.clone())), Truth::Yes);
    let r = g.range(&shift).unwrap();
    assert_eq!(g.compose(&Arrow::unit(r), &shift).unwrap().triple(), shift.triple());

    let y = pt("1.1.1|1.1.1-1.1.0");
    let h = Arrow::new(t("a", 0, "b"), y).unwrap();
    let gg = Arrow::new(t("b", 0, "a"), g.range(&h).unwrap()).unwrap();
    let gh = g.compose(&gg, &h).unwrap();
    assert_eq!(gh.degree(), 0);
    assert_eq!(g.arrow_eq(&gh, &Arrow::unit(h.source().clone())), Truth::Yes);
    assert_eq!(Arrow::new(t("a", 0, "a"), pt("v:1|1.1.1")), Err(Error::IncompatibleArrow));
}

#[test]
fn bisections() {
    let p = e1();
    let g = Groupoid::new(p.clone());
    assert!(bis(&[t("a", 0, "a"), t("b", 0, "b")]).check(&p).is_full);
    assert!(bis(&[t("a", 0, "a"), t("ba", 0, "ba"), t("bb", 0, "bb")]).check(&p).is_full);
    let partial = bis(&[t("a", 0, "a"), t("ba", 0, "ba")]).check(&p);
    assert!(partial.is_bisection && !partial.is_full);

    let odo = odometer();
    assert_eq!(odo.inverse(), bis(&[t("a", 0, "b"), t("b", -1, "a")]));
    let uu = Bisection::product(&p, &odo, &odo.inverse()).unwrap();
    assert_eq!(fg_equals(&g, &uu, &Bisection::identity(&p)).unwrap(), Truth::Yes);
    let ui = Bisection::product(&p, &odo, &Bisection::identity(&p)).unwrap();
    assert_eq!(fg_equals(&g, &ui, &odo).unwrap(), Truth::Yes);

    let sq = Bisection::product(&p, &odo, &odo).unwrap();
    for x in ["v:1|1.1.0", "v:1|1.1.1", "1.1.1|1.1.0", "1.1.0-1.1.1|1.1.1-1.1.0"] {
        let x = pt(x);
        assert_eq!(sq.apply(&p, &x).unwrap(), act_inf(&p, &BigInt::from(2), &x, None).unwrap());
    }
    assert_eq!(odo.apply(&p, &pt("v:1|1.1.1")).unwrap(), pt("v:1|1.1.0"));
    assert_eq!(odo.apply(&p, &pt("v:1|1.1.0")).unwrap(), pt("1.1.1|1.1.0"));
    let x = pt("1.1.0-1.1.1|1.1.0");
    assert_eq!(Bisection::identity(&p).apply(&p, &x).unwrap(), x);

    let swap = Bisection::hat(&p, &bis(&[t("a", 0, "b")])).unwrap();
    assert_eq!(swap.sorted(), bis(&[t("b", 0, "a"), t("a", 0, "b")]).sorted());
    let h = Bisection::hat(&p, &bis(&[t("aa", 0, "ab")])).unwrap();
    assert!(h.check(&p).is_full);
    let hh = Bisection::product(&p, &h, &h).unwrap();
    assert_eq!(fg_equals(&g, &hh, &Bisection::identity(&p)).unwrap(), Truth::Yes);
    assert_eq!(Bisection::hat(&p, &bis(&[t("a", 0, "ab")])), Err(Error::OverlappingSupport));
}

#[test]
fn full_group_examples() {
    let p = e1();
    let g = Groupoid::new(p.clone());
    let odo = odometer();
    assert_eq!(fg_equals(&g, &odo, &odo.refine(&p, 2)).unwrap(), Truth::Yes);
    assert_eq!(fg_equals(&g, &odo, &Bisection::identity(&p)).unwrap(), Truth::No);
    let ua = Bisection::torsion(&p, &w("a"), 1);
    assert_eq!(homology::ihn_class(&p, &ua).unwrap(), LimitClass::from_i64(Tag::B, 1, &[1]));
    let target = LimitClass::from_i64(Tag::B, 1, &[1]);
    let realized = kep_core::full_group::realize_h1(&p, &target).unwrap();
    assert_eq!(fg_equals(&g, &realized, &ua).unwrap(), Truth::Yes);
}

#[test]
fn homology_examples() {
    let show = |p: &MatrixPair| {
        let h = homology::homology_groups(p);
        (h.h0.to_string(), h.h1.to_string(), h.h2.map(|g| g.to_string()))
    };
    assert_eq!(show(&e1()), ("0".into(), "Z".into(), Some("Z".into())));
    assert_eq!(show(&e2()), ("Z/8".into(), "Z/2 (+) Z/2".into(), Some("0".into())));
    assert_eq!(show(&e3()), ("Z".into(), "Z".into(), Some("0".into())));

    let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    let c = LimitClass::from_i64(Tag::A, 0, &[1, -2]);
    assert_eq!(homology::ker_coords(&e3(), &c).unwrap(), big(&[1, -2]));
    assert_eq!(homology::ker_coords(&e1(), &LimitClass::from_i64(Tag::A, 0, &[1])), Err(Error::NotInKernel));
    let r = homology::coker_reduce(&e1(), Tag::B, &big(&[1]));
    assert!(!r.is_zero);
    let r = homology::coker_reduce(&e2(), Tag::B, &big(&[1, 1]));
    assert!(!r.is_zero);
    assert!(homology::coker_reduce(&e2(), Tag::B, &big(&[2, 2])).is_zero);

    assert_eq!(homology::rho1_solve(&e1(), &LimitClass::from_i64(Tag::B, 1, &[1]), 16).unwrap(), None);
    let target = LimitClass::from_i64(Tag::B, 1, &[2, -2]);
    let f = homology::rho1_solve(&e2(), &target, 16).unwrap().unwrap();
    assert!(homology::rho(&e2(), 1, &f).unwrap().class_eq(&e2(), &target).unwrap());

    // a three-piece full bisection with pieces of degree 1, 0 and -1
    let u = bis(&[t("a", 0, "aa"), t("ba", 0, "ab"), t("bb", 0, "b")]);
    assert!(u.check(&e1()).is_full);
    assert!(homology::psi(&e1(), &u).is_zero(&e1()));
}
