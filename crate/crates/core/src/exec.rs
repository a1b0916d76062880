//! Order-preserving batch execution, data-parallel when the `parallel`
//! feature is enabled.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Exec {
    /// Every available mode, sequential first.
    pub fn all() -> Vec<Exec> {
        vec![
            Exec::Sequential,
            #[cfg(feature = "parallel")]
            Exec::Parallel,
        ]
    }

    /// The other mode when there is one.
    pub fn alternate(self) -> Exec {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Sequential => Exec::Parallel,
            _ => Exec::Sequential,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Exec::Sequential => "sequential",
            #[cfg(feature = "parallel")]
            Exec::Parallel => "parallel",
        }
    }

    /// `f(0), …, f(n−1)` in index order.
    pub fn map_indices<R, F>(self, n: u64, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(u64) -> R + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
        }
    }

    /// `f` over `items`, results in input order.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match self {
            Exec::Sequential => items.into_iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.into_par_iter().map(f).collect(),
        }
    }
}

impl std::str::FromStr for Exec {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        Exec::all()
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| crate::Error::Parse(format!("unknown execution mode {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_keep_order() {
        for e in Exec::all() {
            assert_eq!(e.map_indices(100, |i| i * i), (0..100).map(|i| i * i).collect::<Vec<_>>());
            assert_eq!(e.map(vec!["a", "bb"], str::len), vec![1, 2]);
            assert_eq!(e.name().parse::<Exec>().unwrap(), e);
        }
        assert!("threads".parse::<Exec>().is_err());
        assert_eq!(Exec::Sequential.alternate().alternate(), Exec::Sequential);
    }
}
