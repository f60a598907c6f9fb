//! Execution strategy for the data-parallel loops (property sweeps, sample
//! grids, norm estimates).
//!
//! With the `parallel` feature (default) [`Execution::Parallel`] runs on the
//! rayon global pool. Without it every strategy runs sequentially, so callers
//! never need their own `cfg` switches.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Maps `f` over `0..len`, preserving index order in the output.
    pub fn map_indexed<R, F>(self, len: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..len).into_par_iter().map(f).collect();
        }
        (0..len).map(f).collect()
    }

    /// Maps `f` over a slice, preserving order.
    pub fn map_slice<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Max-reduction of `f` over a slice; `0.0` for an empty slice.
    /// NaN values propagate.
    pub fn max_over<T, F>(self, items: &[T], f: F) -> f64
    where
        T: Sync,
        F: Fn(&T) -> f64 + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).reduce(|| 0.0, nan_max);
        }
        items.iter().map(f).fold(0.0, nan_max)
    }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64).collect();
        let a = Execution::Parallel.max_over(&xs, |x| *x);
        let b = Execution::Sequential.max_over(&xs, |x| *x);
        assert_eq!(a, b);
        assert_eq!(a, 100.0);
        assert_eq!(
            Execution::Parallel.map_indexed(50, |i| i * i),
            Execution::Sequential.map_indexed(50, |i| i * i)
        );
    }

    #[test]
    fn nan_is_not_swallowed() {
        let xs = [1.0, f64::NAN, 3.0];
        assert!(Execution::Sequential.max_over(&xs, |x| *x).is_nan());
        assert!(Execution::Parallel.max_over(&xs, |x| *x).is_nan());
    }
}
