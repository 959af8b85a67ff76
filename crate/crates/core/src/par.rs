//! Parallelism switch for the data-parallel inner loops.
//!
//! Callers pick [`Parallelism::Rayon`] (the default when the `parallel`
//! feature is on) or [`Parallelism::Sequential`]; both produce identical
//! results, so the benches can compare them directly.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    Rayon,
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Rayon
        } else {
            Parallelism::Sequential
        }
    }
}

/// Maps `f` over `0..n` and collects the results in index order.
pub fn map_indexed<T, F>(par: Parallelism, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if par == Parallelism::Rayon {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    let _ = par;
    (0..n).map(f).collect()
}

/// Folds per-index contributions into an accumulator vector of length
/// `acc_len`; `f(i, acc)` adds item `i`'s contribution in place.
pub fn fold_into<F>(par: Parallelism, n: usize, acc_len: usize, f: F) -> Vec<f64>
where
    F: Fn(usize, &mut Vec<f64>) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if par == Parallelism::Rayon {
            use rayon::prelude::*;
            return (0..n)
                .into_par_iter()
                .fold(
                    || vec![0.0; acc_len],
                    |mut acc, i| {
                        f(i, &mut acc);
                        acc
                    },
                )
                .reduce(
                    || vec![0.0; acc_len],
                    |mut a, b| {
                        for (x, y) in a.iter_mut().zip(b) {
                            *x += y;
                        }
                        a
                    },
                );
        }
    }
    let _ = par;
    let mut acc = vec![0.0; acc_len];
    for i in 0..n {
        f(i, &mut acc);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_rayon_agree() {
        let seq = map_indexed(Parallelism::Sequential, 100, |i| i * i);
        let par = map_indexed(Parallelism::Rayon, 100, |i| i * i);
        assert_eq!(seq, par);

        let f = |i: usize, acc: &mut Vec<f64>| {
            acc[i % 7] += i as f64;
        };
        let a = fold_into(Parallelism::Sequential, 1000, 7, f);
        let b = fold_into(Parallelism::Rayon, 1000, 7, f);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}
