//! Execution strategy for the data-parallel inner loops.
//!
//! With the `parallel` feature the hot loops (transform stages, kernel
//! streams, maximal sweeps) run on the rayon pool; without it, or when a
//! caller asks for [`Execution::Sequential`], the same closures run in
//! order on the current thread. Each closure writes a disjoint output
//! slot, so both strategies produce bit-identical results.

/// How a data-parallel loop is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Execution::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Execution::Sequential
        }
    }
}

/// Slices shorter than this are always processed sequentially.
#[cfg(feature = "parallel")]
const MIN_PARALLEL_LEN: usize = 1 << 10;

impl Execution {
    pub fn is_parallel(self) -> bool {
        !matches!(self, Execution::Sequential)
    }

    /// Applies `op` to every `chunk`-sized block of `data`, passing the block index.
    pub fn for_each_chunk<T, F>(self, data: &mut [T], chunk: usize, op: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        assert!(chunk > 0);
        match self {
            Execution::Sequential => {
                data.chunks_mut(chunk).enumerate().for_each(|(i, c)| op(i, c));
            }
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                if data.len() < MIN_PARALLEL_LEN {
                    data.chunks_mut(chunk).enumerate().for_each(|(i, c)| op(i, c));
                } else {
                    data.par_chunks_mut(chunk)
                        .enumerate()
                        .for_each(|(i, c)| op(i, c));
                }
            }
        }
    }

    /// Applies `op` to every element together with its index.
    pub fn for_each_indexed<T, F>(self, data: &mut [T], op: F)
    where
        T: Send,
        F: Fn(usize, &mut T) + Sync + Send,
    {
        match self {
            Execution::Sequential => {
                data.iter_mut().enumerate().for_each(|(i, v)| op(i, v));
            }
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                if data.len() < MIN_PARALLEL_LEN {
                    data.iter_mut().enumerate().for_each(|(i, v)| op(i, v));
                } else {
                    data.par_iter_mut().enumerate().for_each(|(i, v)| op(i, v));
                }
            }
        }
    }

    /// Maps `0..len` through `op`, collecting results in index order.
    pub fn map_range<R, F>(self, len: usize, op: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..len).map(op).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..len).into_par_iter().map(op).collect()
            }
        }
    }
}
