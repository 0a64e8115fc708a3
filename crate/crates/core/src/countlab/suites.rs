//! Cross-model property suites. Each suite is planned into independent cases
//! so callers can run them in any order or in parallel and merge by index.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    all_configs, count_chain_fiber, count_slice_fiber_in, fmt_points, random_chain, regular_count, CountError,
    EndCondition, FiberQuery, SliceCatalog,
};
use crate::exactalg::{is_prime, Field, FieldSpec, PrimeField, Rationals};
use crate::lattice::{Lattice, LatticeChain};
use crate::reptheory::{gaussian_binomial, invariant_dim, WeightSeq};
use crate::slice::{chain_to_slice, slice_to_chain, validate_point, SliceError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Roundtrip,
    CountsEqual,
    TrivialityAgree,
    Factorization,
    ProductFibre,
    CentralLeading,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Roundtrip,
        Suite::CountsEqual,
        Suite::TrivialityAgree,
        Suite::Factorization,
        Suite::ProductFibre,
        Suite::CentralLeading,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Roundtrip => "roundtrip",
            Suite::CountsEqual => "counts-equal",
            Suite::TrivialityAgree => "triviality-agree",
            Suite::Factorization => "factorization",
            Suite::ProductFibre => "product-fibre",
            Suite::CentralLeading => "central-leading",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

/// `(m, k, π)` configurations enumerated exhaustively over small prime fields.
pub const GRID: &[(usize, usize, &[usize])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1, 1]),
    (3, 1, &[1, 2]),
    (3, 1, &[2, 1]),
    (3, 1, &[1, 1, 1]),
    (3, 2, &[1, 1, 1, 1, 1, 1]),
];

/// Extra shapes used only for random roundtrips.
pub const RANDOM_EXTRA: &[(usize, usize, &[usize])] = &[(3, 2, &[1, 2, 2, 1]), (2, 3, &[1, 1, 1, 1, 1, 1])];

/// `(m, π)` for central-fiber fits at the point `0`.
pub const CENTRAL: &[(usize, &[usize])] = &[(2, &[1, 1]), (2, &[1, 1, 1, 1]), (3, &[1, 2]), (3, &[2, 1]), (3, &[1, 1, 1])];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Prime fields for the exhaustive grid.
    pub qs: Vec<u64>,
    /// Largest rank included in any case.
    pub max_m: usize,
    /// Successful random roundtrips required per shape and field.
    pub random_chains: usize,
    pub random_fields: Vec<FieldSpec>,
    /// Largest prime a central fit may sample, held-out point included.
    pub max_fit_prime: u64,
    /// Cap on the estimated enumeration size of a single grid case.
    pub max_work: u128,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            qs: alloc::vec![2, 3],
            max_m: 3,
            random_chains: 200,
            random_fields: alloc::vec![FieldSpec::Prime(5), FieldSpec::Rationals],
            max_fit_prime: 11,
            max_work: 2_000_000,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseSpec {
    Grid { suite: Suite, m: usize, k: usize, weights: Vec<usize>, q: u64 },
    Random { m: usize, k: usize, weights: Vec<usize>, field: FieldSpec, count: usize, seed: u64 },
    Central { m: usize, weights: Vec<usize>, qs: Vec<u64>, held_out: u64 },
    TrivialNonFactor { qs: Vec<u64>, max_m: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseResult {
    pub params: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: Vec<CaseResult>,
    /// Planned cases left out by the budget, with the reason.
    pub skipped: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }
}

fn fmt_weights(w: &[usize]) -> String {
    let parts: Vec<String> = w.iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(","))
}

fn pow(q: u64, e: usize) -> u128 {
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(q as u128))
}

fn chain_work(m: usize, weights: &[usize], q: u64) -> u128 {
    weights.iter().fold(pow(q, weights.len()), |acc, &w| {
        acc.saturating_mul(gaussian_binomial(m, w, q).unwrap_or(u128::MAX))
    })
}

fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start..).filter(|&p| is_prime(p))
}

/// Cases for a suite plus the planned cases the budget leaves out.
pub fn plan(suite: Suite, budget: &Budget) -> (Vec<CaseSpec>, Vec<String>) {
    let mut cases = Vec::new();
    let mut skipped = Vec::new();
    let slice_side = matches!(suite, Suite::Roundtrip | Suite::CountsEqual);
    if suite != Suite::CentralLeading {
        for &(m, k, w) in GRID.iter().filter(|g| g.0 <= budget.max_m) {
            for &q in &budget.qs {
                let mut work = chain_work(m, w, q);
                if slice_side {
                    work = work.max(pow(q, m * m * k));
                }
                let label = format!("m={m} k={k} pi={} q={q}", fmt_weights(w));
                if work > budget.max_work {
                    skipped.push(format!("{label}: estimated work {work} exceeds budget {}", budget.max_work));
                } else {
                    cases.push(CaseSpec::Grid { suite, m, k, weights: w.to_vec(), q });
                }
            }
        }
    }
    match suite {
        Suite::Roundtrip => {
            for (i, &(m, k, w)) in GRID.iter().chain(RANDOM_EXTRA).enumerate() {
                if m > budget.max_m {
                    continue;
                }
                for field in &budget.random_fields {
                    cases.push(CaseSpec::Random {
                        m,
                        k,
                        weights: w.to_vec(),
                        field: *field,
                        count: budget.random_chains,
                        seed: budget.seed.wrapping_add(i as u64 * 1_000),
                    });
                }
            }
        }
        Suite::Factorization => cases.push(CaseSpec::TrivialNonFactor { qs: budget.qs.clone(), max_m: budget.max_m }),
        Suite::CentralLeading => {
            for &(m, w) in CENTRAL.iter().filter(|c| c.0 <= budget.max_m) {
                let deg: usize = w.iter().map(|&p| p * (m - p)).sum::<usize>() / 2;
                let mut primes = primes_from(2);
                let qs: Vec<u64> = (0..=deg).map(|_| primes.next().expect("infinite")).collect();
                let held_out = primes.next().expect("infinite");
                if held_out > budget.max_fit_prime {
                    skipped.push(format!(
                        "m={m} pi={}: needs q up to {held_out}, budget allows {}",
                        fmt_weights(w),
                        budget.max_fit_prime
                    ));
                } else {
                    cases.push(CaseSpec::Central { m, weights: w.to_vec(), qs, held_out });
                }
            }
        }
        _ => {}
    }
    (cases, skipped)
}

pub fn run_case(spec: &CaseSpec) -> CaseResult {
    let outcome = match spec {
        CaseSpec::Grid { suite, m, k, weights, q } => {
            let f = PrimeField::new(*q).expect("prime");
            let label = format!("m={m} k={k} pi={} q={q}", fmt_weights(weights));
            match suite {
                Suite::Roundtrip => grid_roundtrip(&f, *m, *k, weights, label),
                Suite::CountsEqual => counts_equal(&f, *m, *k, weights, label),
                Suite::TrivialityAgree => triviality_agree(&f, *m, *k, weights, label),
                Suite::Factorization => factorization(&f, *m, weights, label),
                Suite::ProductFibre => product_fibre(&f, *m, weights, label),
                Suite::CentralLeading => unreachable!("central cases are planned separately"),
            }
        }
        CaseSpec::Random { m, k, weights, field, count, seed } => match field {
            FieldSpec::Rationals => random_roundtrip(&Rationals, *m, *k, weights, *count, *seed),
            FieldSpec::Prime(p) => random_roundtrip(&PrimeField::new(*p).expect("prime"), *m, *k, weights, *count, *seed),
        },
        CaseSpec::Central { m, weights, qs, held_out } => central(*m, weights, qs, *held_out),
        CaseSpec::TrivialNonFactor { qs, max_m } => trivial_non_factor(qs, *max_m),
    };
    outcome.unwrap_or_else(|(params, e)| CaseResult {
        params,
        expected: String::from("case runs to completion"),
        actual: format!("error: {e}"),
        pass: false,
    })
}

pub fn verify_suite(suite: Suite, budget: &Budget) -> SuiteReport {
    let (cases, skipped) = plan(suite, budget);
    SuiteReport { suite, cases: cases.iter().map(run_case).collect(), skipped }
}

type Outcome = Result<CaseResult, (String, CountError)>;

fn query<F: Field>(f: &F, m: usize, weights: &[usize], points: Vec<F::Elem>, end: EndCondition) -> Result<FiberQuery<F>, CountError> {
    FiberQuery::new(f.clone(), WeightSeq::new(m, weights.to_vec())?, points, end)
}

fn first_failures(failures: &[String], total: usize) -> String {
    if failures.is_empty() {
        return String::from("0 failures");
    }
    let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
    format!("{} failures of {total}; first: {}", failures.len(), shown.join("; "))
}

fn grid_roundtrip<F: Field>(f: &F, m: usize, k: usize, weights: &[usize], label: String) -> Outcome {
    let run = || -> Result<CaseResult, CountError> {
        let catalog = SliceCatalog::new(f, m, k)?;
        let configs = all_configs(f, weights.len())?;
        let mut failures = Vec::new();
        let (mut chains_checked, mut points_checked) = (0usize, 0usize);
        for pts in &configs {
            let at = fmt_points(f, pts);
            let qy = query(f, m, weights, pts.clone(), EndCondition::Trivial)?;
            let chains = count_chain_fiber(&qy, true)?;
            let points = count_slice_fiber_in(&catalog, &qy, true)?;
            let (Some(cs), Some(ps)) = (chains.witnesses, points.witnesses) else {
                failures.push(format!("{at}: witness limit reached"));
                continue;
            };
            if cs.len() != ps.len() {
                failures.push(format!("{at}: {} chains vs {} slice points", cs.len(), ps.len()));
            }
            let pset: BTreeSet<_> = ps.iter().cloned().collect();
            for c in &cs {
                chains_checked += 1;
                match chain_to_slice(f, c) {
                    Ok(p) if !validate_point(f, &p).is_valid() => failures.push(format!("{at}: image point invalid")),
                    Ok(p) if !pset.contains(&p) => failures.push(format!("{at}: image point not enumerated")),
                    Ok(p) => {
                        if slice_to_chain(f, &p).as_ref() != Ok(c) {
                            failures.push(format!("{at}: chain does not roundtrip"));
                        }
                    }
                    Err(e) => failures.push(format!("{at}: {e}")),
                }
            }
            for p in &ps {
                points_checked += 1;
                match slice_to_chain(f, p) {
                    Ok(c) if chain_to_slice(f, &c).as_ref() == Ok(p) => {}
                    Ok(_) => failures.push(format!("{at}: point does not roundtrip")),
                    Err(e) => failures.push(format!("{at}: {e}")),
                }
            }
        }
        Ok(CaseResult {
            params: format!("{label} configs={}", configs.len()),
            expected: String::from("both compositions are the identity on every enumerated witness"),
            actual: format!(
                "{chains_checked} chains and {points_checked} slice points, {}",
                first_failures(&failures, chains_checked + points_checked)
            ),
            pass: failures.is_empty(),
        })
    };
    run().map_err(|e| (label.clone(), e))
}

fn counts_equal<F: Field>(f: &F, m: usize, k: usize, weights: &[usize], label: String) -> Outcome {
    let run = || -> Result<CaseResult, CountError> {
        let catalog = SliceCatalog::new(f, m, k)?;
        let configs = all_configs(f, weights.len())?;
        let mut mismatches = Vec::new();
        let mut total = 0u64;
        let mut distinct = 0usize;
        for pts in &configs {
            let qy = query(f, m, weights, pts.clone(), EndCondition::Trivial)?;
            let a = count_chain_fiber(&qy, false)?.count;
            let b = count_slice_fiber_in(&catalog, &qy, false)?.count;
            total += a;
            if pts.iter().collect::<BTreeSet<_>>().len() == pts.len() {
                distinct += 1;
            }
            if a != b {
                mismatches.push(format!("{}: chains {a}, slice {b}", fmt_points(f, pts)));
            }
        }
        Ok(CaseResult {
            params: format!("{label} configs={} distinct={distinct}", configs.len()),
            expected: String::from("chain count = slice count for every configuration"),
            actual: format!(
                "{}/{} equal, total {total}{}",
                configs.len() - mismatches.len(),
                configs.len(),
                if mismatches.is_empty() { String::new() } else { format!("; {}", mismatches.join("; ")) }
            ),
            pass: mismatches.is_empty(),
        })
    };
    run().map_err(|e| (label.clone(), e))
}

/// Distinct end lattices of all chains of the given shape.
fn endpoints<F: Field>(f: &F, m: usize, weights: &[usize]) -> Result<BTreeSet<Lattice<F>>, CountError> {
    let mut out = BTreeSet::new();
    for pts in all_configs(f, weights.len())? {
        let qy = query(f, m, weights, pts, EndCondition::Any)?;
        let r = count_chain_fiber(&qy, true)?;
        for c in r.witnesses.ok_or(CountError::Empty)? {
            out.insert(c.lattices.last().expect("nonempty").clone());
        }
    }
    Ok(out)
}

fn triviality_agree<F: Field>(f: &F, m: usize, k: usize, weights: &[usize], label: String) -> Outcome {
    let run = || -> Result<CaseResult, CountError> {
        let ends = endpoints(f, m, weights)?;
        let constant: Vec<i64> = alloc::vec![-(k as i64); m];
        let mut trivial = 0;
        let mut disagree = Vec::new();
        for l in &ends {
            let a = l.quotient_basis_trivial(k)?;
            let b = l.splitting_type() == constant;
            trivial += a as usize;
            if a != b {
                disagree.push(format!("{:?}", l.basis()));
            }
        }
        Ok(CaseResult {
            params: label.clone(),
            expected: String::from("monomial-basis test agrees with splitting type on every endpoint"),
            actual: format!("{} endpoints, {trivial} trivial, {} disagreements", ends.len(), disagree.len()),
            pass: disagree.is_empty(),
        })
    };
    run().map_err(|e| (label.clone(), e))
}

/// Splits of a set into `(S1, S2)`, both nonempty, with the first element in `S1`.
fn bipartitions<E: Clone + Ord>(items: &[E]) -> Vec<(BTreeSet<E>, BTreeSet<E>)> {
    let n = items.len();
    if n < 2 {
        return Vec::new();
    }
    (0..(1u64 << (n - 1)) - 1)
        .map(|mask| {
            let mut a = BTreeSet::new();
            let mut b = BTreeSet::new();
            a.insert(items[0].clone());
            for (i, x) in items.iter().enumerate().skip(1) {
                if mask >> (i - 1) & 1 == 1 {
                    a.insert(x.clone());
                } else {
                    b.insert(x.clone());
                }
            }
            (a, b)
        })
        .filter(|(_, b)| !b.is_empty())
        .collect()
}

/// Weights and points of the steps whose point lies in `set`.
fn sub_config<F: Field>(weights: &[usize], points: &[F::Elem], set: &BTreeSet<F::Elem>) -> (Vec<usize>, Vec<F::Elem>) {
    weights.iter().zip(points).filter(|(_, x)| set.contains(*x)).map(|(w, x)| (*w, x.clone())).unzip()
}

fn factorization<F: Field>(f: &F, m: usize, weights: &[usize], label: String) -> Outcome {
    let run = || -> Result<CaseResult, CountError> {
        let std = Lattice::standard(f, m);
        let mut failures = Vec::new();
        let mut splits = 0usize;
        let ends = endpoints(f, m, weights)?;
        for l in &ends {
            let div = std.divisor_of_pair(l)?;
            let support: Vec<F::Elem> = div.support().into_iter().collect();
            for (s1, s2) in bipartitions(&support) {
                splits += 1;
                let (a, b) = l.factorize(&s1, &s2)?;
                if a.intersect(&b)? != *l {
                    failures.push(String::from("intersection does not reconstruct the lattice"));
                }
                if std.divisor_of_pair(&a)? != div.restrict(&s1) || std.divisor_of_pair(&b)? != div.restrict(&s2) {
                    failures.push(String::from("Hecke types do not split by support"));
                }
            }
        }
        let mut products = 0usize;
        for pts in all_configs(f, weights.len())? {
            let distinct: Vec<F::Elem> = pts.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
            let whole = count_chain_fiber(&query(f, m, weights, pts.clone(), EndCondition::Any)?, false)?.count;
            for (s1, s2) in bipartitions(&distinct) {
                products += 1;
                let (w1, p1) = sub_config::<F>(weights, &pts, &s1);
                let (w2, p2) = sub_config::<F>(weights, &pts, &s2);
                let c1 = count_chain_fiber(&query(f, m, &w1, p1, EndCondition::Any)?, false)?.count;
                let c2 = count_chain_fiber(&query(f, m, &w2, p2, EndCondition::Any)?, false)?.count;
                if c1 * c2 != whole {
                    failures.push(format!("{}: {whole} != {c1} * {c2}", fmt_points(f, &pts)));
                }
            }
        }
        Ok(CaseResult {
            params: label.clone(),
            expected: String::from("factorize/intersect reconstructs, types split, any-counts multiply"),
            actual: format!(
                "{} endpoints, {splits} lattice splits, {products} count splits, {}",
                ends.len(),
                first_failures(&failures, splits * 2 + products)
            ),
            pass: failures.is_empty(),
        })
    };
    run().map_err(|e| (label.clone(), e))
}

/// Searches the grid for a configuration whose trivial count is not the
/// product of the trivial counts of a split into two rectangular pieces.
fn trivial_non_factor(qs: &[u64], max_m: usize) -> Outcome {
    let label = String::from("search over the grid for a non-factoring trivial count");
    let run = || -> Result<CaseResult, CountError> {
        for &q in qs {
            let f = PrimeField::new(q).expect("prime");
            for &(m, _, weights) in GRID.iter().filter(|g| g.0 <= max_m) {
                if chain_work(m, weights, q) > 200_000 {
                    continue;
                }
                for pts in all_configs(&f, weights.len())? {
                    let distinct: Vec<u64> = pts.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
                    for (s1, s2) in bipartitions(&distinct) {
                        let (w1, p1) = sub_config::<PrimeField>(weights, &pts, &s1);
                        let (w2, p2) = sub_config::<PrimeField>(weights, &pts, &s2);
                        if w1.iter().sum::<usize>() % m != 0 || w2.iter().sum::<usize>() % m != 0 {
                            continue;
                        }
                        let count = |w: &[usize], p: Vec<u64>, end| -> Result<u64, CountError> {
                            Ok(count_chain_fiber(&query(&f, m, w, p, end)?, false)?.count)
                        };
                        let whole = count(weights, pts.clone(), EndCondition::Trivial)?;
                        let c1 = count(&w1, p1.clone(), EndCondition::Trivial)?;
                        let c2 = count(&w2, p2.clone(), EndCondition::Trivial)?;
                        if whole != c1 * c2 {
                            let any = count(weights, pts.clone(), EndCondition::Any)?;
                            let a1 = count(&w1, p1, EndCondition::Any)?;
                            let a2 = count(&w2, p2, EndCondition::Any)?;
                            return Ok(CaseResult {
                                params: format!(
                                    "m={m} pi={} q={q} points={} split {:?} | {:?}",
                                    fmt_weights(weights),
                                    fmt_points(&f, &pts),
                                    s1,
                                    s2
                                ),
                                expected: String::from("a configuration where trivial counts do not multiply"),
                                actual: format!(
                                    "trivial {whole} vs {c1} * {c2} = {}; any {any} = {a1} * {a2}",
                                    c1 * c2
                                ),
                                pass: any == a1 * a2,
                            });
                        }
                    }
                }
            }
        }
        Ok(CaseResult {
            params: label.clone(),
            expected: String::from("a configuration where trivial counts do not multiply"),
            actual: String::from("none found"),
            pass: false,
        })
    };
    run().map_err(|e| (label.clone(), e))
}

fn product_fibre<F: Field>(f: &F, m: usize, weights: &[usize], label: String) -> Outcome {
    let run = || -> Result<CaseResult, CountError> {
        let q = f.order().ok_or(CountError::InfiniteField)?;
        let expected = regular_count(&WeightSeq::new(m, weights.to_vec())?, q)?;
        let configs = all_configs(f, weights.len())?;
        let mut distinct = 0usize;
        let mut bad = Vec::new();
        for pts in &configs {
            if pts.iter().collect::<BTreeSet<_>>().len() == pts.len() {
                distinct += 1;
            }
            let c = count_chain_fiber(&query(f, m, weights, pts.clone(), EndCondition::Any)?, false)?.count;
            if c as u128 != expected {
                bad.push(format!("{}: {c}", fmt_points(f, pts)));
            }
        }
        Ok(CaseResult {
            params: format!("{label} configs={} distinct={distinct}", configs.len()),
            expected: format!("{expected} for every configuration"),
            actual: if bad.is_empty() { format!("{expected} for all {}", configs.len()) } else { bad.join("; ") },
            pass: bad.is_empty(),
        })
    };
    run().map_err(|e| (label.clone(), e))
}

fn random_roundtrip<F: Field>(f: &F, m: usize, k: usize, weights: &[usize], count: usize, seed: u64) -> Outcome {
    let label = format!("m={m} k={k} pi={} field={} random", fmt_weights(weights), f.spec());
    let run = || -> Result<CaseResult, CountError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut done = 0usize;
        let mut nontrivial = 0usize;
        let mut failures = Vec::new();
        let mut attempts = 0usize;
        while done < count && attempts < count * 20 {
            attempts += 1;
            let points: Vec<F::Elem> = weights.iter().map(|_| f.sample(&mut rng, 3)).collect();
            let chain: LatticeChain<F> = random_chain(f, m, weights, &points, &mut rng)?;
            if !chain.validate(f).is_valid() {
                failures.push(String::from("generated chain is invalid"));
                continue;
            }
            match chain_to_slice(f, &chain) {
                Err(SliceError::NotTrivial) => {
                    nontrivial += 1;
                    if chain.end().expect("nonempty").quotient_basis_trivial(k)? {
                        failures.push(String::from("conversion refused a trivial endpoint"));
                    }
                }
                Err(e) => failures.push(format!("{e}")),
                Ok(p) => {
                    done += 1;
                    match slice_to_chain(f, &p) {
                        Ok(c) if c == chain => {
                            if chain_to_slice(f, &c).as_ref() != Ok(&p) {
                                failures.push(String::from("point does not roundtrip"));
                            }
                        }
                        Ok(_) => failures.push(String::from("chain does not roundtrip")),
                        Err(e) => failures.push(format!("{e}")),
                    }
                }
            }
        }
        Ok(CaseResult {
            params: format!("{label} seed={seed}"),
            expected: format!("{count} roundtrips, 0 failures"),
            actual: format!(
                "{done} roundtrips ({nontrivial} non-trivial endpoints skipped), {}",
                first_failures(&failures, done)
            ),
            pass: done == count && failures.is_empty(),
        })
    };
    run().map_err(|e| (label.clone(), e))
}

fn central(m: usize, weights: &[usize], qs: &[u64], held_out: u64) -> Outcome {
    let label = format!("m={m} pi={} points=0", fmt_weights(weights));
    let run = || -> Result<CaseResult, CountError> {
        let w = WeightSeq::new(m, weights.to_vec())?;
        let count_at = |q: u64| -> Result<u128, CountError> {
            let f = PrimeField::new(q).expect("prime");
            let qy = FiberQuery::new(f, w.clone(), alloc::vec![0; weights.len()], EndCondition::ExactZk)?;
            Ok(count_chain_fiber(&qy, false)?.count as u128)
        };
        let samples: Vec<(u64, u128)> = qs.iter().map(|&q| Ok((q, count_at(q)?))).collect::<Result<_, CountError>>()?;
        let extra = [(held_out, count_at(held_out)?)];
        let degree = weights.iter().map(|&p| p * (m - p)).sum::<usize>() / 2;
        let leading = invariant_dim(&w)?;
        let shown: Vec<String> = samples.iter().chain(&extra).map(|(q, c)| format!("{q}:{c}")).collect();
        let (actual, pass) = match super::fit_q_polynomial(&samples, &extra) {
            Ok(fit) => (
                format!(
                    "fit {} (counts {}), degree {:?}, leading {}",
                    fit.poly,
                    shown.join(" "),
                    fit.poly.degree(),
                    fit.poly.leading()
                ),
                fit.poly.degree() == Some(degree) && fit.poly.leading() == leading,
            ),
            Err(e) => (format!("fit failed: {e} (counts {})", shown.join(" ")), false),
        };
        Ok(CaseResult {
            params: format!("{label} qs={qs:?} held-out={held_out}"),
            expected: format!("degree {degree}, leading coefficient {leading}"),
            actual,
            pass,
        })
    };
    run().map_err(|e| (label.clone(), e))
}
