use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::suites::{plan, run_case, verify_suite, Budget, CaseSpec, Suite};
use super::*;
use crate::exactalg::{FieldSpec, PrimeField, Rationals};
use crate::reptheory::gaussian_binomial;
use crate::slice::validate_point;

fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn fq(p: u64, m: usize, w: &[usize], pts: &[u64], end: EndCondition) -> FiberQuery<PrimeField> {
    FiberQuery::new(fp(p), WeightSeq::new(m, w.to_vec()).unwrap(), pts.to_vec(), end).unwrap()
}

/// Closed walks of length `len` at the root of the `d`-regular tree, by
/// dynamic programming over an explicitly built ball of radius `len / 2`.
fn tree_closed_walks(d: usize, len: usize) -> u64 {
    let radius = len / 2;
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier = vec![0usize];
    for r in 0..radius {
        let mut next = Vec::new();
        for &v in &frontier {
            let count = if r == 0 { d } else { d - 1 };
            for _ in 0..count {
                let id = parent.len();
                parent.push(Some(v));
                children.push(Vec::new());
                children[v].push(id);
                next.push(id);
            }
        }
        frontier = next;
    }
    let n = parent.len();
    let mut ways = vec![0u64; n];
    ways[0] = 1;
    for _ in 0..len {
        let mut next = vec![0u64; n];
        for v in 0..n {
            if ways[v] == 0 {
                continue;
            }
            for &c in &children[v] {
                next[c] += ways[v];
            }
            if let Some(p) = parent[v] {
                next[p] += ways[v];
            }
        }
        ways = next;
    }
    ways[0]
}

#[test]
fn walk_oracle_matches_closed_form() {
    for q in [2u64, 3, 5, 7] {
        assert_eq!(tree_closed_walks(q as usize + 1, 4), 2 * q * q + 3 * q + 1);
    }
}

#[test]
fn subspace_enumeration_sizes() {
    for q in [2u64, 3] {
        let f = fp(q);
        for d in 0..=4 {
            for r in 0..=d {
                let subs = subspaces(&f, d, r).unwrap();
                assert_eq!(subs.len() as u128, gaussian_binomial(d, r, q).unwrap());
                let distinct: BTreeSet<_> = subs.iter().collect();
                assert_eq!(distinct.len(), subs.len());
            }
        }
    }
    assert_eq!(subspaces(&Rationals, 2, 1), Err(CountError::InfiniteField));
}

#[test]
fn step_choice_counts() {
    for q in [2u64, 3, 5] {
        let f = fp(q);
        let l = Lattice::from_basis(&f, &crate::exactalg::PolyMatrix::from_i64_rows(&f, &[&[&[1, 1], &[1]], &[&[], &[0, 1]]]))
            .unwrap();
        for x in 0..q {
            let ch = step_choices(&l, &x, 1).unwrap();
            assert_eq!(ch.len() as u64, q + 1);
            let distinct: BTreeSet<_> = ch.iter().collect();
            assert_eq!(distinct.len(), ch.len());
            for c in &ch {
                assert_eq!(l.colength(c), Ok(1));
            }
        }
    }
    let f2 = fp(2);
    assert_eq!(step_choices(&Lattice::standard(&f2, 3), &0, 2).unwrap().len(), 7);
    assert_eq!(step_choices(&Lattice::standard(&f2, 3), &1, 1).unwrap().len(), 7);
    assert_eq!(step_choices(&Lattice::standard(&f2, 2), &0, 2), Err(CountError::StepOutOfRange { j: 2, m: 2 }));
}

#[test]
fn unrestricted_fiber_is_a_product() {
    let r = count_chain_fiber(&fq(3, 2, &[1, 1, 1, 1], &[0, 1, 2, 0], EndCondition::Any), false).unwrap();
    assert_eq!(r.count, 256);
    let r = count_chain_fiber(&fq(2, 3, &[1, 2], &[0, 1], EndCondition::Any), false).unwrap();
    assert_eq!(r.count, 49);
    assert_eq!(regular_count(&WeightSeq::new(3, vec![1, 2]).unwrap(), 2), Ok(49));
}

#[test]
fn central_fiber_counts() {
    for (q, want) in [(2u64, 15u64), (3, 28)] {
        let r = count_chain_fiber(&fq(q, 2, &[1, 1, 1, 1], &[0, 0, 0, 0], EndCondition::ExactZk), true).unwrap();
        assert_eq!(r.count, want);
        assert_eq!(r.count, tree_closed_walks(q as usize + 1, 4));
        let ws = r.witnesses.unwrap();
        assert_eq!(ws.len() as u64, want);
        for c in &ws {
            assert!(c.validate(&fp(q)).is_valid());
            assert_eq!(c.end().unwrap(), &Lattice::z_power(&fp(q), 2, 2));
        }
    }
}

/// Brute force over all 2×2 matrices: those with trace 1 and determinant 0,
/// each with the number of lines on which it acts by 1.
fn two_by_two_oracle(q: u64) -> u64 {
    let mut total = 0;
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    if (a + d) % q != 1 || !(a * d + q * q - b * c).is_multiple_of(q) {
                        continue;
                    }
                    // lines spanned by (1, t) or (0, 1)
                    let mut lines = 0;
                    for t in 0..q {
                        if (a + b * t) % q == 1 && (c + d * t) % q == t {
                            lines += 1;
                        }
                    }
                    if b % q == 0 && d % q == 1 {
                        lines += 1;
                    }
                    total += lines;
                }
            }
        }
    }
    total
}

#[test]
fn small_cross_model_anchor() {
    assert_eq!(two_by_two_oracle(3), 12);
    let qy = fq(3, 2, &[1, 1], &[0, 1], EndCondition::Trivial);
    let chains = count_chain_fiber(&qy, false).unwrap();
    let points = count_slice_fiber(&qy, true).unwrap();
    assert_eq!(chains.count, 12);
    assert_eq!(points.count, 12);
    for p in points.witnesses.unwrap() {
        assert!(validate_point(&fp(3), &p).is_valid());
    }
    for q in [2u64, 5] {
        let qy = fq(q, 2, &[1, 1], &[0, 1], EndCondition::Trivial);
        assert_eq!(count_slice_fiber(&qy, false).unwrap().count, two_by_two_oracle(q));
        assert_eq!(count_chain_fiber(&qy, false).unwrap().count, two_by_two_oracle(q));
    }
}

#[test]
fn rank_one_slice_count_is_one() {
    for k in 1..=3 {
        for pts in all_configs(&fp(3), k).unwrap() {
            let qy = FiberQuery::new(fp(3), WeightSeq::new(1, vec![1; k]).unwrap(), pts, EndCondition::Trivial).unwrap();
            assert_eq!(count_slice_fiber(&qy, false).unwrap().count, 1);
            assert_eq!(count_chain_fiber(&qy, false).unwrap().count, 1);
        }
    }
}

#[test]
fn query_errors() {
    let w = WeightSeq::new(2, vec![1, 1]).unwrap();
    assert_eq!(
        FiberQuery::new(Rationals, w.clone(), vec![], EndCondition::Any).unwrap_err(),
        CountError::InfiniteField
    );
    assert_eq!(
        FiberQuery::new(fp(2), w.clone(), vec![0], EndCondition::Any).unwrap_err(),
        CountError::LengthMismatch { points: 1, weights: 2 }
    );
    let odd = WeightSeq::new(2, vec![1]).unwrap();
    assert!(FiberQuery::new(fp(2), odd.clone(), vec![0], EndCondition::Any).is_ok());
    assert_eq!(
        FiberQuery::new(fp(2), odd, vec![0], EndCondition::Trivial).unwrap_err(),
        CountError::NotRectangular { total: 1, m: 2 }
    );
    let qy = FiberQuery::new(fp(2), w, vec![0, 1], EndCondition::Any).unwrap();
    assert_eq!(count_slice_fiber(&qy, false).unwrap_err(), CountError::WrongEndCondition);
}

#[test]
fn counts_are_permutation_invariant() {
    for q in [2u64, 3] {
        for end in [EndCondition::Any, EndCondition::Trivial, EndCondition::ExactZk] {
            for pts in all_configs(&fp(q), 2).unwrap() {
                let a = count_chain_fiber(&fq(q, 3, &[1, 2], &pts, end), false).unwrap().count;
                let rev: Vec<u64> = pts.iter().rev().copied().collect();
                let b = count_chain_fiber(&fq(q, 3, &[2, 1], &rev, end), false).unwrap().count;
                assert_eq!(a, b, "q={q} end={end:?} pts={pts:?}");
            }
        }
        let f = fp(q);
        for pts in all_configs(&f, 4).unwrap() {
            let base = count_chain_fiber(&fq(q, 2, &[1, 1, 1, 1], &pts, EndCondition::Trivial), false).unwrap().count;
            let mut swapped = pts.clone();
            swapped.swap(0, 3);
            swapped.swap(1, 2);
            let c = count_chain_fiber(&fq(q, 2, &[1, 1, 1, 1], &swapped, EndCondition::Trivial), false).unwrap().count;
            assert_eq!(base, c);
        }
    }
}

#[test]
fn parallel_split_matches_sequential() {
    let qy = fq(3, 2, &[1, 1, 1, 1], &[0, 1, 1, 0], EndCondition::Trivial);
    let whole = count_chain_fiber(&qy, true).unwrap();
    let parts: Vec<_> = first_steps(&qy)
        .unwrap()
        .iter()
        .map(|l| count_chain_fiber_from(&qy, l, true).unwrap())
        .collect();
    let merged = CountReport::merge(parts);
    assert_eq!(merged, whole);
}

#[test]
fn witness_limit_drops_lists() {
    let mut c: Collector<u32> = Collector::new(true);
    for i in 0..=WITNESS_LIMIT as u32 {
        c.push(|| i);
    }
    let r = c.finish();
    assert_eq!(r.count, WITNESS_LIMIT as u64 + 1);
    assert!(r.witnesses.is_none());
    assert!(r.witnesses_dropped);
}

#[test]
fn random_chains_are_valid() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let c = random_chain(&Rationals, 3, &[1, 2, 2, 1], &vec![Rationals.from_i64(0); 4], &mut rng).unwrap();
        assert!(c.validate(&Rationals).is_valid());
    }
}

fn small_budget() -> Budget {
    Budget { qs: vec![2], random_chains: 10, random_fields: vec![FieldSpec::Prime(5)], max_fit_prime: 7, ..Budget::default() }
}

#[test]
fn small_suites_pass() {
    for suite in [Suite::CountsEqual, Suite::TrivialityAgree, Suite::ProductFibre] {
        let report = verify_suite(suite, &small_budget());
        assert!(report.passed(), "{report:?}");
        assert!(!report.cases.is_empty());
    }
}

#[test]
fn budget_skips_are_reported() {
    let (cases, skipped) = plan(Suite::CountsEqual, &small_budget());
    assert!(skipped.iter().any(|s| s.starts_with("m=3 k=2")));
    assert!(cases.iter().all(|c| matches!(c, CaseSpec::Grid { .. })));
    let (cases, skipped) = plan(Suite::CentralLeading, &small_budget());
    assert_eq!(cases.len() + skipped.len(), suites::CENTRAL.len());
}

#[test]
fn central_case_for_two_by_four() {
    let r = run_case(&CaseSpec::Central { m: 2, weights: vec![1, 1, 1, 1], qs: vec![2, 3, 5], held_out: 7 });
    assert!(r.pass, "{r:?}");
    assert!(r.actual.starts_with("fit 2q^2 + 3q + 1"));
}
