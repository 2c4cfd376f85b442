//! Execution strategy: rayon when the `parallel` feature is on, plain
//! iteration otherwise. Output order never depends on the strategy.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    #[default]
    Sequential,
    /// `jobs == 0` lets rayon pick.
    Parallel { jobs: usize },
}

impl Exec {
    /// Parallel when compiled in, else sequential.
    pub fn auto() -> Self {
        Self::with_jobs(0)
    }

    pub fn with_jobs(jobs: usize) -> Self {
        if cfg!(feature = "parallel") && jobs != 1 {
            Exec::Parallel { jobs }
        } else {
            Exec::Sequential
        }
    }

    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match *self {
            Exec::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel { jobs } => {
                use rayon::prelude::*;
                let run = || items.par_iter().map(&f).collect();
                if jobs == 0 {
                    run()
                } else {
                    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
                        Ok(pool) => pool.install(run),
                        Err(_) => items.iter().map(&f).collect(),
                    }
                }
            }
            #[cfg(not(feature = "parallel"))]
            Exec::Parallel { .. } => items.iter().map(f).collect(),
        }
    }

    /// Sum of `f` over `items`, reduced in input order.
    pub fn sum_f64<T, F>(&self, items: &[T], f: F) -> f64
    where
        T: Sync,
        F: Fn(&T) -> f64 + Sync + Send,
    {
        self.map(items, f).into_iter().sum()
    }
}
