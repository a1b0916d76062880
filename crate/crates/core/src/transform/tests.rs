use proptest::prelude::*;

use super::*;
use crate::chain::Grid;
use crate::fixtures::{block, square_cycle};
use crate::random;
use crate::rational::{int, ratio};
use crate::spacetime::TimeInterval;

fn plane(n: i64) -> Grid {
    Grid::unit(&[n, n]).unwrap()
}

fn sq(g: &Grid, x: i64, y: i64) -> Chain {
    block(g, [x, y], 1, 1).unwrap()
}

#[test]
fn collapsing_a_square() {
    let g = plane(2);
    let t = square_cycle(&g, [0, 0]).unwrap();
    let fill = -sq(&g, 0, 0);
    let s = sweep(&SweepPlan::single_column(t.clone(), fill.clone()).unwrap()).unwrap();
    assert_eq!(s.total_variation(), int(1));
    let time = s.time_grid();
    assert_eq!(s.chain().boundary(), -SpacetimeChain::embed_at(&time, 0, &t));
    let cone = collapse_cone(&t, &fill).unwrap();
    assert_eq!(cone.total_variation(), int(1));
    assert_eq!(cone.end_traces(), (t, Chain::zero(&g, 1)));
}

#[test]
fn translating_a_square() {
    let g = plane(3);
    let t = square_cycle(&g, [0, 0]).unwrap();
    let fill = &sq(&g, 1, 0) - &sq(&g, 0, 0);
    let plan = SweepPlan::one_flip_per_column(t.clone(), fill).unwrap();
    assert_eq!(plan.time_columns(), 2);
    let s = sweep(&plan).unwrap();
    assert_eq!(s.total_variation(), int(2));
    assert_eq!(s.slice_left(&int(1)).unwrap(), square_cycle(&g, [1, 0]).unwrap());
}

#[test]
fn empty_fill_is_a_prism() {
    let g = plane(2);
    let t = square_cycle(&g, [0, 0]).unwrap();
    let s = sweep(&SweepPlan::single_column(t.clone(), Chain::zero(&g, 2)).unwrap()).unwrap();
    assert_eq!(s, SpacetimeChain::stationary(&s.time_grid(), &t).unwrap());
    assert_eq!(s.total_variation(), int(0));
}

#[test]
fn invalid_plans() {
    let g = plane(3);
    let t = square_cycle(&g, [0, 0]).unwrap();
    let fill = &sq(&g, 1, 0) - &sq(&g, 0, 0);
    let partial = vec![(0, sq(&g, 1, 0))];
    assert!(matches!(SweepPlan::new(t.clone(), fill.clone(), partial, 2), Err(Error::Precondition(_))));
    let cancelling = vec![(0, sq(&g, 1, 0).scale(2)), (1, -sq(&g, 1, 0)), (1, -sq(&g, 0, 0))];
    assert!(matches!(SweepPlan::new(t.clone(), fill.clone(), cancelling, 2), Err(Error::Precondition(_))));
    let late = vec![(5, fill.clone())];
    assert!(SweepPlan::new(t.clone(), fill.clone(), late, 2).is_err());
    let open = Chain::cell(&g, Cell::new(vec![0, 0], vec![0]).unwrap(), 1).unwrap();
    assert!(SweepPlan::single_column(open, Chain::zero(&g, 2)).is_err());
    assert!(collapse_cone(&t, &sq(&g, 0, 0)).is_err());
}

#[test]
fn plan_json_round_trip() {
    let g = plane(3);
    let t = square_cycle(&g, [0, 0]).unwrap();
    let plan = SweepPlan::one_flip_per_column(t, &sq(&g, 1, 0) - &sq(&g, 0, 0)).unwrap();
    assert_eq!(SweepPlan::from_json(&plan.to_json()).unwrap(), plan);
}

#[test]
fn concatenating_prisms_gives_a_prism() {
    let g = plane(2);
    let t = square_cycle(&g, [0, 0]).unwrap();
    let p1 = SpacetimeChain::stationary(&crate::spacetime::unit_time_grid(1).unwrap(), &t).unwrap();
    let p2 = SpacetimeChain::stationary(&crate::spacetime::unit_time_grid(3).unwrap(), &t).unwrap();
    let c = concatenate(&p1, &p2).unwrap();
    assert_eq!(c, SpacetimeChain::stationary(&crate::spacetime::unit_time_grid(6).unwrap(), &t).unwrap());
    assert_eq!(c.total_variation(), int(0));
}

#[test]
fn concatenation_adds_variation() {
    let g = plane(4);
    let t0 = square_cycle(&g, [0, 0]).unwrap();
    // Var 2: translate right. Var 3: grow to a 2x2 block minus nothing, then one more.
    let f1 = &sq(&g, 1, 0) - &sq(&g, 0, 0);
    let s1 = sweep(&SweepPlan::one_flip_per_column(t0.clone(), f1.clone()).unwrap()).unwrap();
    let t1 = &t0 + &f1.boundary();
    let f2 = &(&sq(&g, 1, 1) + &sq(&g, 2, 1)) + &sq(&g, 2, 0);
    let s2 = sweep(&SweepPlan::one_flip_per_column(t1.clone(), f2.clone()).unwrap()).unwrap();
    assert_eq!(s1.total_variation(), int(2));
    assert_eq!(s2.total_variation(), int(3));
    let c = concatenate(&s1, &s2).unwrap();
    assert_eq!(c.total_variation(), int(5));
    let t2 = &t1 + &f2.boundary();
    assert_eq!(c.end_traces(), (t0, t2));
    assert!(c.lateral_boundary().is_zero());
    assert_eq!(c.max_slice_mass(), s1.max_slice_mass().max(s2.max_slice_mass()));
    assert!(matches!(concatenate(&s2, &s1), Err(Error::Precondition(_))));
}

#[test]
fn reversal_examples() {
    let g = plane(3);
    let t = square_cycle(&g, [0, 0]).unwrap();
    let s = sweep(&SweepPlan::one_flip_per_column(t.clone(), &sq(&g, 1, 0) - &sq(&g, 0, 0)).unwrap()).unwrap();
    let r = reverse(&s);
    assert_eq!(reverse(&r), s);
    assert_eq!(r.total_variation(), s.total_variation());
    let (a, b) = s.end_traces();
    assert_eq!(r.end_traces(), (b, a));
}

#[test]
fn rescaling_by_one_is_identity() {
    let g = plane(2);
    let s = collapse_cone(&square_cycle(&g, [0, 0]).unwrap(), &-sq(&g, 0, 0)).unwrap();
    assert_eq!(rescale_time(&s, 1).unwrap(), s);
    assert!(rescale_time(&s, 0).is_err());
}

#[test]
fn prism_of_square_cycle() {
    let g = plane(3);
    let t = square_cycle(&g, [0, 0]).unwrap();
    let w = prism(&t, 0, true).unwrap();
    assert_eq!(w, &sq(&g, 1, 0) - &sq(&g, 0, 0));
    assert_eq!(w.boundary(), &t.translate(&[1, 0]).unwrap() - &t);
    assert!(prism(&Chain::zero(&g, 1), 1, true).unwrap().is_zero());
    assert!(matches!(prism(&square_cycle(&g, [2, 0]).unwrap(), 0, true), Err(Error::OutOfBounds(_))));
    assert!(matches!(prism(&t, 0, false), Err(Error::OutOfBounds(_))));
}

#[test]
fn lipschitz_constant_of_unit_flip_sweep() {
    let g = plane(3);
    let t = square_cycle(&g, [0, 0]).unwrap();
    let s = sweep(&SweepPlan::one_flip_per_column(t, &sq(&g, 1, 0) - &sq(&g, 0, 0)).unwrap()).unwrap();
    assert_eq!(s.discrete_lipschitz_constant(), int(1) / s.time_spacing());
    let fine = rescale_time(&s, 3).unwrap();
    assert_eq!(fine.discrete_lipschitz_constant() * fine.time_spacing(), int(1));
}

#[test]
fn ragged_cone_has_variation_two() {
    for j in 1..=3 {
        let (r, s) = crate::fixtures::ragged_cone(j).unwrap();
        assert_eq!(r.mass(), int(1));
        assert_eq!(r.boundary().len() as i64, 4 * j * j);
        assert_eq!(s.total_variation(), int(2));
        assert_eq!(s.boundary_variation(&s.full_range()), int(0));
        assert_eq!(s.max_slice_mass(), int(4 * j));
    }
}

fn random_plan(seed: u64, index: u64) -> SweepPlan {
    let mut rng = random::instance_rng(seed, 1, index);
    let spatial = random::grid(&mut rng, 2, 4);
    random::sweep_plan(&mut rng, &spatial, 1, 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_sweeps_satisfy_the_contract(seed in any::<u64>()) {
        let plan = random_plan(seed, 0);
        let s = sweep(&plan).unwrap();
        prop_assert_eq!(s.total_variation(), plan.fill().mass());
        prop_assert!(SweepPlan::from_json(&plan.to_json()).unwrap() == plan);
    }

    #[test]
    fn transforms_preserve_variation(seed in any::<u64>(), m in 1i64..=3) {
        let p1 = random_plan(seed, 0);
        let s1 = sweep(&p1).unwrap();
        let end = &p1.base().clone() + &p1.fill().boundary();
        let mut rng = random::instance_rng(seed, 2, 0);
        let fill2 = random::chain(&mut rng, p1.base().grid(), 2, 5, 1);
        let s2 = sweep(&SweepPlan::one_flip_per_column(end.clone(), fill2.clone()).unwrap()).unwrap();
        let c = concatenate(&s1, &s2).unwrap();
        prop_assert_eq!(c.total_variation(), s1.total_variation() + s2.total_variation());
        prop_assert_eq!(c.end_traces(), (p1.base().clone(), &end + &fill2.boundary()));

        let r = reverse(&s1);
        prop_assert_eq!(r.total_variation(), s1.total_variation());
        prop_assert_eq!(r.end_traces(), (end.clone(), p1.base().clone()));

        let f = rescale_time(&s1, m).unwrap();
        let half = TimeInterval::right_open(int(0), ratio(1, 2)).unwrap();
        prop_assert_eq!(f.total_variation(), s1.total_variation());
        prop_assert_eq!(f.variation(&half), s1.variation(&half));
        prop_assert_eq!(f.boundary_variation(&f.full_range()), s1.boundary_variation(&s1.full_range()));
        for i in 0..s1.columns() {
            let t = s1.time_at(i) + s1.time_spacing() * ratio(1, 2 * m + 1);
            prop_assert_eq!(f.slice(&t).unwrap(), s1.slice(&t).unwrap());
        }
    }

    #[test]
    fn prism_homotopy_formula(seed in any::<u64>(), axis in 0usize..2, positive: bool, k in 0usize..=1) {
        let mut rng = random::instance_rng(seed, 3, 0);
        let g = random::grid(&mut rng, 2, 4);
        let t = random::chain(&mut rng, &g, k, 5, 2);
        let mut v = vec![0i64; 2];
        v[axis] = if positive { 1 } else { -1 };
        match t.translate(&v) {
            Ok(moved) => {
                let w = prism(&t, axis, positive).unwrap();
                let lhs = if k == 0 {
                    w.boundary()
                } else {
                    &w.boundary() + &prism(&t.boundary(), axis, positive).unwrap()
                };
                prop_assert_eq!(lhs, &moved - &t);
            }
            Err(e) => prop_assert!(matches!(prism(&t, axis, positive), Err(ref f) if *f == e)),
        }
    }

    #[test]
    fn prism_of_cycles_bounds_the_translation(seed in any::<u64>()) {
        let mut rng = random::instance_rng(seed, 4, 0);
        let g = Grid::unit(&[5, 5]).unwrap();
        let q = random::chain(&mut rng, &Grid::unit(&[4, 5]).unwrap(), 2, 5, 2).rehome(&g).unwrap();
        let t = q.boundary();
        let w = prism(&t, 0, true).unwrap();
        prop_assert_eq!(w.boundary(), &t.translate(&[1, 0]).unwrap() - &t);
    }
}
