use proptest::prelude::*;

use prefcheck::axioms::{verify_witness, Checker, Universe};
use prefcheck::fuzz::Generator;
use prefcheck::representation::calibrate;
use prefcheck::{q, AxiomId, ComparisonOutcome, Label, MixtureSpace, Model, Point, Rational, RelationModel, Status};

fn lottery() -> impl Strategy<Value = Point> {
    (0i128..5, 0i128..5, 0i128..5).prop_filter("not all zero", |(a, b, c)| a + b + c > 0).prop_map(|(a, b, c)| {
        let t = a + b + c;
        Point::new(vec![q(a, t), q(b, t), q(c, t)])
    })
}

fn utilities() -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec((-3i128..=3).prop_map(Rational::integer), 3), 1..=3)
}

fn weight() -> impl Strategy<Value = Rational> {
    (0i128..=24).prop_map(|k| q(k, 24))
}

fn model(us: &[Vec<Rational>]) -> Model {
    Model::new(MixtureSpace::simplex(2), RelationModel::MultiUtility { utilities: us.to_vec() }).unwrap()
}

/// Dominance evaluated directly from the coordinates.
fn dominance(us: &[Vec<Rational>], x: &Point, y: &Point) -> Label {
    let ge = us.iter().all(|u| x.dot(u) >= y.dot(u));
    let le = us.iter().all(|u| x.dot(u) <= y.dot(u));
    match (ge, le) {
        (true, true) => Label::Indifferent,
        (true, false) => Label::StrictAbove,
        (false, true) => Label::StrictBelow,
        (false, false) => Label::Incomparable,
    }
}

fn blend(x: &Point, l: Rational, y: &Point) -> Point {
    Point::new(x.coords().iter().zip(y.coords()).map(|(a, b)| l * *a + l.complement() * *b).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn comparison_matches_dominance(us in utilities(), x in lottery(), y in lottery()) {
        let m = model(&us);
        let c = m.compare(&x, &y).unwrap();
        prop_assert_eq!(c.label(), dominance(&us, &x, &y));
        prop_assert_eq!(m.compare(&y, &x).unwrap(), c.converse());
        prop_assert_eq!(m.compare(&x, &x).unwrap(), ComparisonOutcome::Equivalent);
    }

    #[test]
    fn segment_partition_covers_the_unit_interval(us in utilities(), x in lottery(), y in lottery(), z in lottery()) {
        let p = model(&us).classify_segment(&x, &y, &z).unwrap();
        let sets = [&p.above, &p.below, &p.indifferent, &p.incomparable];
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                prop_assert!(a.intersect(b).is_empty());
            }
        }
        prop_assert!(p.above.union(&p.below).union(&p.indifferent).union(&p.incomparable).is_full());
        // Dominance sections are finite intersections of closed half-lines.
        prop_assert!(p.weak_above().is_closed() && p.weak_above().is_convex());
        prop_assert!(p.weak_below().is_closed() && p.weak_below().is_convex());
    }

    #[test]
    fn segment_oracle_matches_pointwise_dominance(us in utilities(), x in lottery(), y in lottery(), z in lottery(), l in weight()) {
        let m = model(&us);
        let p = m.classify_segment(&x, &y, &z).unwrap();
        let point = blend(&x, l, &y);
        prop_assert_eq!(m.space.mix(&x, l, &y).unwrap(), point.clone());
        prop_assert_eq!(p.label_at(l), Some(dominance(&us, &point, &z)));
    }

    #[test]
    fn order_verdicts_match_brute_force(us in utilities(), pts in prop::collection::vec(lottery(), 2..5)) {
        let m = model(&us);
        let c = Checker::new(&m, &Universe::new(pts).with_depth(0).saturating(false)).unwrap();
        let n = c.points().len();
        let lab = |i: usize, j: usize| dominance(&us, &c.points()[i], &c.points()[j]);
        let weak = |i: usize, j: usize| matches!(lab(i, j), Label::StrictAbove | Label::Indifferent);
        let complete = (0..n).all(|i| (0..n).all(|j| lab(i, j) != Label::Incomparable));
        let transitive = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(weak(i, j) && weak(j, k)) || weak(i, k))));
        let nontrivial = (0..n).any(|i| (0..n).any(|j| lab(i, j) == Label::StrictAbove));
        let holds = |b: bool| if b { Status::Holds } else { Status::Fails };
        prop_assert_eq!(c.status(AxiomId::Complete).unwrap(), holds(complete));
        prop_assert_eq!(c.status(AxiomId::Transitive).unwrap(), holds(transitive));
        prop_assert_eq!(c.status(AxiomId::Nontrivial).unwrap(), holds(nontrivial));
        prop_assert_eq!(c.status(AxiomId::Reflexive).unwrap(), Status::Holds);
        prop_assert_eq!(c.status(AxiomId::MixtureContinuous).unwrap(), Status::Holds);
    }

    #[test]
    fn single_utility_calibration_is_the_normalized_utility(u in prop::collection::vec(-3i128..=3, 3)) {
        prop_assume!(u.iter().any(|v| *v != u[0]));
        let u: Vec<Rational> = u.into_iter().map(Rational::integer).collect();
        let m = model(std::slice::from_ref(&u));
        let c = Checker::new(&m, &Universe::new((0..3).map(|i| Point::vertex(3, i)).collect())).unwrap();
        let low = (0..3).min_by_key(|&i| u[i]).unwrap();
        let high = (0..3).max_by_key(|&i| u[i]).unwrap();
        let cal = calibrate(&c, low, high).unwrap();
        for p in c.points() {
            prop_assert_eq!(cal.representation.value(p), Some((p.dot(&u) - u[low]) / (u[high] - u[low])));
        }
    }
}

/// A point is fragile-witnessed when it is strictly ordered yet every
/// neighborhood along the segment contains incomparable mixtures.
#[test]
fn fragility_witnesses_have_incomparable_points_nearby() {
    let mut g = Generator::new(42);
    let steps: Vec<Rational> = (1..=8).map(|k| q(1, 10i128.pow(k))).collect();
    for _ in 0..40 {
        let inst = g.pareto();
        let c = Checker::new(&inst.model, &inst.universe).unwrap();
        let v = c.check(AxiomId::Fragile).unwrap();
        assert_eq!(v.status, Status::Holds, "{}", inst.label);
        assert!(verify_witness(c.model(), &v).unwrap());
        let w = v.witness.as_ref().unwrap();
        let (x, y, z) = (w.get_point("x").unwrap(), w.get_point("y").unwrap(), w.get_point("z").unwrap());
        let l = w.get_weight("lambda").unwrap();
        let RelationModel::MultiUtility { utilities } = &inst.model.relation else { unreachable!() };
        let at = |t: Rational| dominance(utilities, &blend(x, t, y), z);
        assert!(matches!(at(l), Label::StrictAbove | Label::StrictBelow), "{}", inst.label);
        for h in &steps {
            let near = [l - *h, l + *h].into_iter().filter(|t| t.is_unit()).any(|t| at(t) == Label::Incomparable);
            assert!(near, "{}: no incomparable mixture within {h} of {l}", inst.label);
        }
    }
}
