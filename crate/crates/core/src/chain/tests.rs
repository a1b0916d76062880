use proptest::prelude::*;

use super::*;
use crate::random;
use crate::rational::{int, ratio};

fn edge(anchor: &[i64], axis: usize) -> Cell {
    Cell::new(anchor.to_vec(), vec![axis]).unwrap()
}

fn square(anchor: &[i64]) -> Cell {
    Cell::new(anchor.to_vec(), vec![0, 1]).unwrap()
}

fn unit_square_cycle(grid: &Grid, anchor: &[i64]) -> Chain {
    Chain::cell(grid, square(anchor), 1).unwrap().boundary()
}

#[test]
fn boundary_of_edge_is_endpoint_difference() {
    let g = Grid::new(vec![ratio(1, 2)], vec![int(0)], vec![3]).unwrap();
    let e = Chain::cell(&g, edge(&[1], 0), 1).unwrap();
    let expected = Chain::from_terms(&g, 0, [(Cell::vertex(vec![2]), 1), (Cell::vertex(vec![1]), -1)]).unwrap();
    assert_eq!(e.boundary(), expected);
}

#[test]
fn boundary_of_unit_square_matches_convention() {
    let g = Grid::unit(&[2, 2]).unwrap();
    let b = unit_square_cycle(&g, &[0, 0]);
    let expected = Chain::from_terms(
        &g,
        1,
        [
            (edge(&[1, 0], 1), 1),
            (edge(&[0, 0], 1), -1),
            (edge(&[0, 0], 0), 1),
            (edge(&[0, 1], 0), -1),
        ],
    )
    .unwrap();
    assert_eq!(b, expected);
    assert!(b.boundary().is_zero());
    assert_eq!(b.mass(), int(4));
}

#[test]
fn boundary_of_zero_chain_dimension_is_zero() {
    let g = Grid::unit(&[2]).unwrap();
    let p = Chain::cell(&g, Cell::vertex(vec![1]), 3).unwrap();
    assert!(p.boundary().is_zero());
}

#[test]
fn mass_examples() {
    let g = Grid::new(vec![ratio(1, 2), ratio(1, 2)], vec![int(0), int(0)], vec![2, 2]).unwrap();
    assert_eq!(Chain::cell(&g, square(&[0, 0]), 3).unwrap().mass(), ratio(3, 4));
    assert_eq!(Chain::zero(&g, 1).mass(), int(0));
}

#[test]
fn edge_times_edge_is_positive_square() {
    let g1 = Grid::unit(&[1]).unwrap();
    let e = Chain::cell(&g1, edge(&[0], 0), 1).unwrap();
    let p = e.product(&e);
    assert_eq!(p.len(), 1);
    assert_eq!(p.coeff(&square(&[0, 0])), 1);
    let lhs = p.boundary();
    let rhs = &e.boundary().product(&e) + &(-&e.product(&e.boundary()));
    assert_eq!(lhs, rhs);
}

#[test]
fn point_times_chain_embeds() {
    let g1 = Grid::unit(&[2]).unwrap();
    let g2 = Grid::unit(&[2, 2]).unwrap();
    let pt = Chain::cell(&g1, Cell::vertex(vec![1]), 1).unwrap();
    let t = unit_square_cycle(&g2, &[1, 0]);
    let p = pt.product(&t);
    assert_eq!(p.len(), t.len());
    for (c, v) in t.iter() {
        let lifted = Cell::new([vec![1], c.anchor().to_vec()].concat(), c.axes().iter().map(|a| a + 1).collect()).unwrap();
        assert_eq!(p.coeff(&lifted), v);
    }
}

#[test]
fn translate_examples() {
    let g = Grid::unit(&[3, 2]).unwrap();
    let t = unit_square_cycle(&g, &[0, 0]);
    assert_eq!(t.translate(&[1, 0]).unwrap().mass(), int(4));
    assert_eq!(t.translate(&[0, 0]).unwrap(), t);
    assert!(matches!(t.translate(&[0, 2]), Err(Error::OutOfBounds(_))));
}

#[test]
fn refine_examples() {
    let g = Grid::unit(&[1, 1]).unwrap();
    let s = Chain::cell(&g, square(&[0, 0]), 1).unwrap();
    let r = s.refine(2).unwrap();
    assert_eq!(r.len(), 4);
    assert_eq!(r.mass(), int(1));
    assert_eq!(s.refine(1).unwrap(), s);
}

/// Exhaustive check: for every 2-chain on a 2x2 grid with coefficients in
/// {-1, 0, 1}, refining commutes with taking the boundary.
#[test]
fn refine_commutes_with_boundary_exhaustive() {
    let g = Grid::unit(&[2, 2]).unwrap();
    let cells = g.cells(2);
    let n = cells.len();
    for code in 0..3i64.pow(n as u32) {
        let mut rest = code;
        let terms: Vec<(Cell, i64)> = cells
            .iter()
            .map(|c| {
                let v = rest % 3 - 1;
                rest /= 3;
                (c.clone(), v)
            })
            .collect();
        let t = Chain::from_terms(&g, 2, terms).unwrap();
        for m in 1..=3 {
            assert_eq!(t.refine(m).unwrap().boundary(), t.boundary().refine(m).unwrap());
        }
    }
}

#[test]
fn json_round_trip_and_canonical_order() {
    let g = Grid::new(vec![ratio(1, 2), int(1)], vec![int(-1), ratio(1, 3)], vec![2, 2]).unwrap();
    let t = unit_square_cycle(&g, &[1, 1]);
    let text = t.to_json();
    assert!(text.contains("\"1/2\""));
    assert_eq!(Chain::from_json(&text).unwrap(), t);
    let f: ChainFile = serde_json::from_str(&text).unwrap();
    let keys: Vec<(Vec<i64>, Vec<usize>)> = f.cells.iter().map(|e| (e.anchor.clone(), e.axes.clone())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn rejects_cells_outside_grid() {
    let g = Grid::unit(&[2, 2]).unwrap();
    assert!(Chain::cell(&g, square(&[2, 0]), 1).is_err());
    assert!(Chain::from_terms(&g, 2, [(edge(&[0, 0], 0), 1)]).is_err());
    assert!(Chain::from_json(r#"{"grid":{"dim":1,"spacing":["1"],"origin":["0"],"extents":[1]},"k":1,"cells":[],"bogus":1}"#).is_err());
}

#[test]
fn grid_mismatch_is_an_error() {
    let a = Chain::zero(&Grid::unit(&[2]).unwrap(), 0);
    let b = Chain::zero(&Grid::unit(&[3]).unwrap(), 0);
    assert!(matches!(a.try_add(&b), Err(Error::GridMismatch(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn boundary_squared_vanishes(seed in any::<u64>(), d in 1usize..=4, k in 1usize..=3) {
        let mut rng = random::instance_rng(seed, 0, 0);
        let g = random::grid(&mut rng, d, 3);
        let t = random::chain(&mut rng, &g, k.min(d), 8, 3);
        prop_assert!(t.boundary().boundary().is_zero());
    }

    #[test]
    fn product_boundary_rule(seed in any::<u64>()) {
        let mut rng = random::instance_rng(seed, 1, 0);
        let d1 = rand::Rng::random_range(&mut rng, 1..=2);
        let d2 = rand::Rng::random_range(&mut rng, 1..=2);
        let g1 = random::grid(&mut rng, d1, 2);
        let g2 = random::grid(&mut rng, d2, 2);
        let k1 = rand::Rng::random_range(&mut rng, 0..=d1);
        let k2 = rand::Rng::random_range(&mut rng, 0..=d2);
        let t1 = random::chain(&mut rng, &g1, k1, 4, 2);
        let t2 = random::chain(&mut rng, &g2, k2, 4, 2);
        let lhs = t1.product(&t2).boundary();
        let sign = if k1 % 2 == 0 { 1 } else { -1 };
        let a = t1.boundary().product(&t2);
        let b = t1.product(&t2.boundary()).scale(sign);
        if k1 + k2 == 0 {
            prop_assert!(lhs.is_zero());
        } else {
            // when one factor is a 0-chain its boundary term vanishes but keeps dimension 0
            let mut rhs = Chain::zero(lhs.grid(), lhs.dim());
            if k1 > 0 { rhs = &rhs + &a; }
            if k2 > 0 { rhs = &rhs + &b; }
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn translation_is_an_isometry_commuting_with_boundary(seed in any::<u64>()) {
        let mut rng = random::instance_rng(seed, 2, 0);
        let g = Grid::unit(&[5, 5]).unwrap();
        let inner = Grid::unit(&[3, 3]).unwrap();
        let t = random::chain(&mut rng, &inner, 1, 6, 2).rehome(&g).unwrap();
        let v = [rand::Rng::random_range(&mut rng, 0..=2), rand::Rng::random_range(&mut rng, 0..=2)];
        let moved = t.translate(&v).unwrap();
        prop_assert_eq!(moved.mass(), t.mass());
        prop_assert_eq!(moved.boundary(), t.boundary().translate(&v).unwrap());
    }

    #[test]
    fn refinement_preserves_mass(seed in any::<u64>(), m in 1i64..=3) {
        let mut rng = random::instance_rng(seed, 3, 0);
        let d = rand::Rng::random_range(&mut rng, 1..=3);
        let g = random::grid(&mut rng, d, 2);
        let k = rand::Rng::random_range(&mut rng, 0..=d);
        let t = random::chain(&mut rng, &g, k, 5, 3);
        let r = t.refine(m).unwrap();
        prop_assert_eq!(r.mass(), t.mass());
        prop_assert_eq!(Chain::from_json(&r.to_json()).unwrap(), r);
    }
}
