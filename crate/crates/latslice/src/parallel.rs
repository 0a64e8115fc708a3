//! Thread-pool wrappers around the core enumerators.

use latslice_core::countlab::suites::{plan, run_case, Budget, Suite, SuiteReport};
use latslice_core::countlab::{
    count_chain_fiber_from, first_steps, CountError, CountReport, FiberQuery,
};
use latslice_core::exactalg::Field;
use latslice_core::lattice::LatticeChain;
use rayon::prelude::*;

fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool")
}

/// Splits the chain enumeration by its first step; `jobs = 0` uses all cores.
pub fn count_chains<F>(
    query: &FiberQuery<F>,
    witnesses: bool,
    jobs: usize,
) -> Result<CountReport<LatticeChain<F>>, CountError>
where
    F: Field + Send + Sync,
    F::Elem: Send + Sync,
{
    let firsts = first_steps(query)?;
    let parts = pool(jobs).install(|| {
        firsts
            .par_iter()
            .map(|l| count_chain_fiber_from(query, l, witnesses))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(CountReport::merge(parts))
}

/// Runs the planned cases of a suite concurrently, keeping plan order.
pub fn verify(suite: Suite, budget: &Budget, jobs: usize) -> SuiteReport {
    let (cases, skipped) = plan(suite, budget);
    let cases = pool(jobs).install(|| cases.par_iter().map(run_case).collect());
    SuiteReport { suite, cases, skipped }
}
