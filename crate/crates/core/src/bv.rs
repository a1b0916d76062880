//! Step functions on `[0, 1]` and their graph currents.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chain::{Cell, Chain, Grid};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::spacetime::{SpacetimeChain, TimeInterval};

/// Piecewise constant function: `values[i]` on `[breakpoints[i], breakpoints[i+1])`,
/// the last value also at 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepFunction {
    #[serde(with = "crate::rational::vec")]
    breakpoints: Vec<Rational>,
    #[serde(with = "crate::rational::vec")]
    values: Vec<Rational>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        let u = Self { breakpoints, values };
        u.validate()?;
        Ok(u)
    }

    fn validate(&self) -> Result<()> {
        let b = &self.breakpoints;
        if b.len() < 2 || b[0] != Rational::zero() || b[b.len() - 1] != Rational::one() {
            return Err(Error::Precondition("breakpoints must start at 0 and end at 1".into()));
        }
        if b.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition("breakpoints must be strictly increasing".into()));
        }
        if self.values.len() + 1 != b.len() {
            return Err(Error::Precondition(format!(
                "{} breakpoints need {} values, got {}",
                b.len(),
                b.len() - 1,
                self.values.len()
            )));
        }
        Ok(())
    }

    pub fn constant(v: Rational) -> Self {
        Self { breakpoints: vec![Rational::zero(), Rational::one()], values: vec![v] }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Right-continuous evaluation on `[0, 1]`.
    pub fn value_at(&self, t: &Rational) -> Result<Rational> {
        if *t < Rational::zero() || *t > Rational::one() {
            return Err(Error::OutOfBounds(format!("{} is outside [0, 1]", rational::format(t))));
        }
        let i = self.breakpoints.partition_point(|b| b <= t);
        Ok(self.values[(i - 1).min(self.values.len() - 1)].clone())
    }

    /// Finest grid spacings carrying every breakpoint and value:
    /// `(time denominator, space denominator)`.
    pub fn natural_resolution(&self) -> (i64, i64) {
        let lcm = |xs: &[Rational]| {
            xs.iter()
                .fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()))
                .to_i64()
                .expect("denominator fits in i64")
        };
        (lcm(&self.breakpoints), lcm(&self.values))
    }

    /// The (1+1)-grid used by [`graph_current`]: time `[0, 1]` with the
    /// natural time spacing, space covering the range of values.
    pub fn natural_grid(&self) -> Grid {
        let (lt, ls) = self.natural_resolution();
        let min = self.values.iter().min().expect("at least one value").clone();
        let max = self.values.iter().max().expect("at least one value").clone();
        let extent = ((max - &min) * rational::int(ls)).to_integer().to_i64().expect("extent fits").max(1);
        Grid::new(
            vec![rational::ratio(1, lt), rational::ratio(1, ls)],
            vec![Rational::zero(), min],
            vec![lt, extent],
        )
        .expect("valid natural grid")
    }
}

fn level(grid: &Grid, axis: usize, x: &Rational, what: &str) -> Result<i64> {
    let u = (x - &grid.origin()[axis]) / &grid.spacing()[axis];
    if !u.is_integer() || u.is_negative() || u > Rational::from_integer(grid.extents()[axis].into()) {
        return Err(Error::OutOfBounds(format!("{what} {} is not on the grid", rational::format(x))));
    }
    Ok(u.to_integer().to_i64().expect("grid level fits"))
}

/// Graph current on the natural grid of `u`.
pub fn graph_current(u: &StepFunction) -> SpacetimeChain {
    graph_current_on(u, &u.natural_grid()).expect("natural grid carries the function")
}

/// Forward-in-time temporal edges along the constant stretches and vertical
/// edges at the jumps, on a given (1+1)-grid over `[0, 1]`.
pub fn graph_current_on(u: &StepFunction, grid: &Grid) -> Result<SpacetimeChain> {
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: grid.dim() });
    }
    if grid.coordinate(0, 0) != Rational::zero() || grid.coordinate(0, grid.extents()[0]) != Rational::one() {
        return Err(Error::InvalidGrid("graph currents need the time range [0, 1]".into()));
    }
    let mut terms = Vec::new();
    let ys: Vec<i64> = u.values.iter().map(|v| level(grid, 1, v, "value")).collect::<Result<_>>()?;
    let ts: Vec<i64> = u.breakpoints.iter().map(|b| level(grid, 0, b, "breakpoint")).collect::<Result<_>>()?;
    for i in 0..u.values.len() {
        for col in ts[i]..ts[i + 1] {
            terms.push((Cell::new(vec![col, ys[i]], vec![0])?, 1));
        }
        if i > 0 {
            let (a, b) = (ys[i - 1], ys[i]);
            let sign = (b - a).signum();
            for y in a.min(b)..a.max(b) {
                terms.push((Cell::new(vec![ts[i], y], vec![1])?, sign));
            }
        }
    }
    SpacetimeChain::new(Chain::from_terms(grid, 1, terms)?)
}

/// Σ |jump| over breakpoints inside `interval`.
pub fn pointwise_variation(u: &StepFunction, interval: &TimeInterval) -> Rational {
    let mut total = Rational::zero();
    for i in 1..u.values.len() {
        if interval.contains(&u.breakpoints[i]) {
            total += (&u.values[i] - &u.values[i - 1]).abs();
        }
    }
    total
}

/// Stage-`n` staircase approximating the Cantor function. On each of the
/// `2^n` remaining triadic intervals the value rises by `2^{-n}`, one third
/// of the way into the interval's first subinterval; removed intervals keep
/// the dyadic value reached so far.
pub fn cantor_stage(n: u32) -> Result<StepFunction> {
    if n > 12 {
        return Err(Error::Precondition(format!("Cantor stage {n} is too fine")));
    }
    let pieces = 1i64 << n;
    let three_n = 3i64.pow(n);
    let den = 3 * three_n;
    let mut breakpoints = vec![Rational::zero()];
    let mut values = vec![Rational::zero()];
    for j in 0..pieces {
        let mut left = 0i64;
        for m in 0..n {
            if (j >> (n - 1 - m)) & 1 == 1 {
                left += 2 * 3i64.pow(n - 1 - m);
            }
        }
        breakpoints.push(rational::ratio(3 * left + 1, den));
        values.push(rational::ratio(j + 1, pieces));
    }
    breakpoints.push(Rational::one());
    StepFunction::new(breakpoints, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;
    use crate::random;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn closed(a: Rational, b: Rational) -> TimeInterval {
        TimeInterval::closed(a, b).unwrap()
    }

    #[test]
    fn single_jump() {
        let u = StepFunction::new(vec![int(0), ratio(1, 2), int(1)], vec![int(0), int(1)]).unwrap();
        let s = graph_current(&u);
        let verticals: Vec<_> = s.chain().iter().filter(|(c, _)| !c.spans(0)).collect();
        assert_eq!(verticals.len(), 1);
        assert_eq!(s.time_at(verticals[0].0.anchor()[0]), ratio(1, 2));
        assert_eq!(s.total_variation(), int(1));
        assert_eq!(pointwise_variation(&u, &closed(int(0), int(1))), int(1));
        assert_eq!(u.value_at(&ratio(1, 2)).unwrap(), int(1));
        assert_eq!(u.value_at(&ratio(1, 3)).unwrap(), int(0));
        assert_eq!(u.value_at(&int(1)).unwrap(), int(1));
    }

    #[test]
    fn constant_has_no_variation() {
        let u = StepFunction::constant(ratio(3, 2));
        let s = graph_current(&u);
        assert_eq!(s.total_variation(), int(0));
        assert_eq!(s.discrete_lipschitz_constant(), int(0));
    }

    #[test]
    fn staircase_and_zigzag() {
        let b: Vec<Rational> = (0..=4).map(|i| ratio(i, 4)).collect();
        let up = StepFunction::new(b.clone(), (0..4).map(|i| ratio(i, 3)).collect()).unwrap();
        assert_eq!(pointwise_variation(&up, &closed(int(0), int(1))), int(1));
        let zig = StepFunction::new(b, vec![int(0), int(1), int(0), int(1)]).unwrap();
        assert_eq!(pointwise_variation(&zig, &closed(int(0), int(1))), int(3));
        assert_eq!(graph_current(&zig).total_variation(), int(3));
    }

    #[test]
    fn boundary_is_endpoint_diracs() {
        let u = StepFunction::new(vec![int(0), ratio(1, 3), ratio(2, 3), int(1)], vec![int(1), int(-1), ratio(1, 2)]).unwrap();
        let s = graph_current(&u);
        let g = s.grid().clone();
        let at = |t: &Rational, y: &Rational| {
            Cell::vertex(vec![level(&g, 0, t, "t").unwrap(), level(&g, 1, y, "y").unwrap()])
        };
        let expected = Chain::from_terms(
            &g,
            0,
            [(at(&int(1), &ratio(1, 2)), 1), (at(&int(0), &int(1)), -1)],
        )
        .unwrap();
        assert_eq!(s.chain().boundary(), expected);
    }

    #[test]
    fn lipschitz_constant_is_largest_jump_over_spacing() {
        let u = StepFunction::new(vec![int(0), ratio(1, 4), ratio(1, 2), int(1)], vec![int(0), int(2), int(1)]).unwrap();
        let s = graph_current(&u);
        assert_eq!(s.discrete_lipschitz_constant(), int(2) / s.time_spacing());
    }

    #[test]
    fn off_grid_values_are_rejected() {
        let u = StepFunction::new(vec![int(0), ratio(1, 2), int(1)], vec![int(0), ratio(1, 3)]).unwrap();
        let coarse = Grid::new(vec![ratio(1, 2), int(1)], vec![int(0), int(0)], vec![2, 2]).unwrap();
        assert!(matches!(graph_current_on(&u, &coarse), Err(Error::OutOfBounds(_))));
        let fine = Grid::new(vec![ratio(1, 4), ratio(1, 3)], vec![int(0), int(-1)], vec![4, 6]).unwrap();
        assert_eq!(graph_current_on(&u, &fine).unwrap().total_variation(), ratio(1, 3));
    }

    #[test]
    fn invalid_step_functions() {
        assert!(StepFunction::new(vec![int(0), int(1)], vec![]).is_err());
        assert!(StepFunction::new(vec![int(0), ratio(1, 2), ratio(1, 2), int(1)], vec![int(0); 3]).is_err());
        assert!(StepFunction::new(vec![ratio(1, 2), int(1)], vec![int(0)]).is_err());
    }

    #[test]
    fn cantor_stages() {
        let u0 = cantor_stage(0).unwrap();
        assert_eq!(u0.breakpoints().len(), 3);
        assert_eq!(pointwise_variation(&u0, &closed(int(0), int(1))), int(1));
        for n in 0..=6 {
            let u = cantor_stage(n).unwrap();
            let s = graph_current(&u);
            assert_eq!(s.total_variation(), int(1));
            assert_eq!(u.values().last().unwrap(), &int(1));
            assert!(u.values().windows(2).all(|w| w[0] <= w[1]));
            if n >= 1 {
                assert_eq!(u.value_at(&ratio(1, 3)).unwrap(), ratio(1, 2));
                assert_eq!(s.variation(&closed(int(0), ratio(1, 3))), ratio(1, 2));
            }
        }
        let u2 = cantor_stage(2).unwrap();
        let expected: Vec<Rational> =
            [0, 1, 7, 19, 25, 27].iter().map(|&k| ratio(k, 27)).collect();
        assert_eq!(u2.breakpoints(), expected.as_slice());
    }

    #[test]
    fn json_round_trip() {
        let u = cantor_stage(2).unwrap();
        let text = serde_json::to_string(&u).unwrap();
        assert!(text.starts_with("{\"breakpoints\":[\"0\",\"1/27\""));
        let back: StepFunction = serde_json::from_str(&text).unwrap();
        assert_eq!(back, u);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn graph_variation_matches_pointwise(seed in any::<u64>(), a in 0i64..=12, b in 0i64..=12, lo_c: bool, hi_c: bool) {
            let mut rng = random::instance_rng(seed, 0, 0);
            let u = random::step_function(&mut rng, 6, 2);
            let (a, b) = (a.min(b), a.max(b));
            let i = TimeInterval::new(ratio(a, 12), ratio(b, 12), lo_c, hi_c).unwrap();
            let s = graph_current(&u);
            prop_assert_eq!(s.variation(&i), pointwise_variation(&u, &i));
            prop_assert_eq!(
                pointwise_variation(&u, &i),
                oracles::step_variation(u.breakpoints(), u.values(), |t| i.contains(t))
            );
        }
    }
}
