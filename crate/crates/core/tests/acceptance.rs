//! Acceptance gate: one test per criterion, each printing a single
//! [PASS] or [FAIL] line. Case counts, work budgets and wall-clock
//! tolerances are pinned here.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{exp_digit_value, tree_oracle_family};
use etr_core::error::Error;
use etr_core::probe::{check_erasure_monotone, check_fixpoint, find_descending_chain};
use etr_core::setr::SetrSession;
use etr_core::step::{
    check_monotone, Diverging, HoleAt, InductionPredicate, LengthThree, Parity, RandomMonotone,
    StepPredicate, SumWitness, TreeRecursionPredicate, DEFAULT_SEED,
};
use etr_core::wetr::prefix_bound;
use etr_core::{Order, WetrSession};

const FUEL: u64 = 1 << 20;

fn verdict(name: &str, ok: bool, detail: &str) {
    println!("[{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name}: {detail}");
}

/// Linear orders the catalog criteria sweep; each enumerates at most 200
/// elements.
fn linear_catalog() -> Vec<Order> {
    [
        "fin(0)",
        "fin(1)",
        "fin(7)",
        "fin(63)",
        "fin(200)",
        "omega",
        "rev(omega)",
        "rev(fin(6))",
        "sum(fin(3),fin(4))",
        "sum(fin(0),fin(5))",
        "sum(fin(2),omega)",
        "sum(lex(fin(2),fin(3)),rev(fin(4)))",
        "lex(fin(3),fin(5))",
        "lex(fin(4),fin(1))",
        "lex(omega,fin(3))",
        "exp(fin(2),fin(3))",
        "exp(fin(3),fin(2))",
        "exp(fin(2),fin(4))",
        "exp(sum(fin(1),fin(1)),fin(3))",
        "rev(exp(fin(2),fin(3)))",
    ]
    .iter()
    .map(|e| Order::parse(e).unwrap())
    .chain([Order::fin(10).restrict_below(7).unwrap()])
    .collect()
}

#[test]
fn criterion_01_exponentiation_cardinality() {
    let start = Instant::now();
    let mut cases = 0;
    let mut ok = true;
    for k in 1..=3u64 {
        for n in 0..=3u32 {
            let order = Order::exp(Order::fin(k), Order::fin(n as u64)).unwrap();
            let expected = k.pow(n);
            let counted = order.enumerate(usize::MAX).len() as u64;
            ok &= counted == expected && order.size() == Some(expected);
            cases += 1;
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(1);
    verdict(
        "exponentiation cardinality",
        ok,
        &format!("{cases} cases of |exp(fin(k),fin(n))| = k^n in {elapsed:?}"),
    );
}

#[test]
fn criterion_02_exponentiation_ranking() {
    let start = Instant::now();
    let order = Order::parse("exp(fin(2),fin(3))").unwrap();
    let elements = order.enumerate(usize::MAX);
    let values: Vec<u64> = elements.iter().map(|&c| exp_digit_value(c, 2)).collect();
    let ok = elements.len() == 8 && values == (0..8).collect::<Vec<u64>>();
    let elapsed = start.elapsed();
    verdict(
        "exponentiation ranking",
        ok && elapsed < Duration::from_secs(1),
        &format!("sorted enumeration hits digit values {values:?} in {elapsed:?}"),
    );
}

#[test]
fn criterion_03_linear_order_laws() {
    let start = Instant::now();
    let mut violations = 0u64;
    let mut orders = 0;
    for order in linear_catalog() {
        let elems = order.enumerate(200);
        let k = elems.len();
        let mut less = vec![vec![false; k]; k];
        for i in 0..k {
            for j in 0..k {
                match order.compare_members(elems[i], elems[j]) {
                    Some(std::cmp::Ordering::Less) => less[i][j] = true,
                    Some(std::cmp::Ordering::Equal) => {
                        // Equality only on identical codes.
                        if i != j {
                            violations += 1;
                        }
                    }
                    Some(std::cmp::Ordering::Greater) => {}
                    None => violations += 1,
                }
            }
        }
        for i in 0..k {
            // Irreflexivity.
            if less[i][i] {
                violations += 1;
            }
            for j in 0..k {
                // Totality: exactly one direction strict, or identity.
                let strict = (less[i][j] as u8) + (less[j][i] as u8);
                if (i == j && strict != 0) || (i != j && strict != 1) {
                    violations += 1;
                }
                if !less[i][j] {
                    continue;
                }
                // Transitivity.
                for l in 0..k {
                    if less[j][l] && !less[i][l] {
                        violations += 1;
                    }
                }
            }
        }
        orders += 1;
    }
    let elapsed = start.elapsed();
    verdict(
        "linear order laws",
        violations == 0,
        &format!("totality, irreflexivity, transitivity on {orders} orders in {elapsed:?}"),
    );
}

#[test]
fn criterion_04_predicate_monotonicity() {
    let start = Instant::now();
    let fin8 = Order::fin(8);
    let tree3 = Order::tree(3).unwrap();
    let predicates: Vec<(Box<dyn StepPredicate>, Order)> = vec![
        (Box::new(Parity), fin8.clone()),
        (Box::new(LengthThree), fin8.clone()),
        (Box::new(Diverging), fin8.clone()),
        (
            Box::new(InductionPredicate::new(Arc::new(SumWitness), fin8.clone())),
            fin8.clone(),
        ),
        (
            Box::new(InductionPredicate::new(Arc::new(HoleAt::new(1)), fin8.clone())),
            fin8.clone(),
        ),
        (
            Box::new(TreeRecursionPredicate::affine(tree3.clone(), 2, 1).unwrap()),
            tree3,
        ),
        (Box::new(RandomMonotone::new(DEFAULT_SEED, 10)), fin8),
    ];
    let mut violations = 0;
    let mut checked = 0;
    for (p, order) in &predicates {
        for x in order.enumerate(8) {
            for n in 0..8 {
                let report = check_monotone(p.as_ref(), n, x, 10);
                violations += usize::from(!report.ok());
                checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        "predicate monotonicity",
        violations == 0,
        &format!(
            "{} predicates, {checked} (n,x) pairs at depth 10, {violations} violations in {elapsed:?}",
            predicates.len()
        ),
    );
}

#[test]
fn criterion_05_bound_exactness() {
    let start = Instant::now();
    let mut ok = true;
    for n in 0..4 {
        for x in 0..4 {
            ok &= prefix_bound(&LengthThree, n, x, FUEL).unwrap() == 3;
            ok &= prefix_bound(&Parity, n, x, FUEL).unwrap() == 0;
        }
    }
    let diverging = matches!(
        prefix_bound(&Diverging, 0, 0, 64),
        Err(Error::FuelExhausted { .. })
    );
    let elapsed = start.elapsed();
    verdict(
        "bound exactness",
        ok && diverging,
        &format!("length3 = 3, parity = 0, diverging exhausts fuel 64 in {elapsed:?}"),
    );
}

fn fixpoint_suite() -> Vec<(Arc<dyn StepPredicate>, Order)> {
    let mut suite: Vec<(Arc<dyn StepPredicate>, Order)> = Vec::new();
    for k in 1..=5u64 {
        let order = Order::fin(k);
        suite.push((Arc::new(Parity), order.clone()));
        suite.push((
            Arc::new(InductionPredicate::new(Arc::new(SumWitness), order.clone())),
            order.clone(),
        ));
        suite.push((
            Arc::new(InductionPredicate::new(Arc::new(HoleAt::new(1)), order.clone())),
            order,
        ));
    }
    suite
}

#[test]
fn criterion_06_fixpoint_families() {
    let start = Instant::now();
    let mut families = 0;
    let mut violations = 0;
    for (p, order) in fixpoint_suite() {
        let wetr = WetrSession::new(p.as_ref(), &order, FUEL)
            .unwrap()
            .materialize_family(6, 64)
            .unwrap();
        let setr = SetrSession::new(p.as_ref(), &order, FUEL)
            .unwrap()
            .materialize_family(6, 64)
            .unwrap();
        for family in [wetr, setr] {
            violations += check_fixpoint(&family, p.as_ref(), &order, FUEL)
                .unwrap()
                .violations
                .len();
            families += 1;
        }
    }
    let elapsed = start.elapsed();
    let ok = violations == 0 && elapsed < Duration::from_secs(10);
    verdict(
        "fixpoint families",
        ok,
        &format!("{families} families checked, {violations} violations in {elapsed:?}"),
    );
}

#[test]
fn criterion_07_engine_equivalence_random() {
    let start = Instant::now();
    let mut terminated = 0;
    let mut disagreements = 0;
    for seed in 0..100u64 {
        let order = Order::fin(1 + seed % 6);
        let p = RandomMonotone::new(seed, 10);
        let wetr = WetrSession::new(&p, &order, 100_000)
            .unwrap()
            .materialize_family(8, 64);
        let setr = SetrSession::new(&p, &order, 100_000)
            .unwrap()
            .materialize_family(8, 64);
        match (wetr, setr) {
            (Ok(w), Ok(s)) => {
                terminated += 1;
                if w.members != s.members {
                    disagreements += 1;
                }
            }
            (Err(Error::FuelExhausted { .. }), _) | (_, Err(Error::FuelExhausted { .. })) => {}
            (Err(e), _) | (_, Err(e)) => panic!("unexpected engine error: {e}"),
        }
    }
    let elapsed = start.elapsed();
    let ok = terminated >= 95 && disagreements == 0 && elapsed < Duration::from_secs(60);
    verdict(
        "engine equivalence on random predicates",
        ok,
        &format!(
            "{terminated}/100 seeds terminated, {disagreements} disagreements in {elapsed:?}"
        ),
    );
}

#[test]
fn criterion_08_rank_descent() {
    let start = Instant::now();
    let mut compared = 0u64;
    let mut violations = 0;
    for (p, order) in fixpoint_suite() {
        let session = SetrSession::new(p.as_ref(), &order, FUEL).unwrap();
        for x in order.enumerate(64) {
            for n in 0..6 {
                let outcome = session.eval_full(n, x, true, false).unwrap();
                let descent = outcome.descent.unwrap();
                compared += descent.compared;
                violations += descent.violations.len();
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        "rank descent",
        violations == 0,
        &format!("{compared} consecutive rank pairs strictly descend in {elapsed:?}"),
    );
}

#[test]
fn criterion_09_tree_recursion_families() {
    let start = Instant::now();
    let order = Order::tree(4).unwrap();
    let max_code = *order.enumerate(usize::MAX).iter().max().unwrap();
    let mut ok = true;
    for &(mul, add) in &[(1u64, 0u64), (2, 0), (1, 3)] {
        let p = TreeRecursionPredicate::affine(order.clone(), mul, add).unwrap();
        let family = WetrSession::new(&p, &order, FUEL)
            .unwrap()
            .materialize_family(8, usize::MAX)
            .unwrap();
        ok &= family.members == tree_oracle_family(&order, mul, add, 8);

        // Root membership exactly up to the witness reachable from the
        // largest node code.
        let boundary = mul * max_code + add;
        let mut session = WetrSession::new(&p, &order, FUEL).unwrap();
        ok &= session.eval(boundary, 0).unwrap();
        ok &= !session.eval(boundary + 1, 0).unwrap();
    }
    let elapsed = start.elapsed();
    verdict(
        "tree recursion families",
        ok,
        &format!("tree(4) families match the oracle for three maps, boundary at code {max_code}, in {elapsed:?}"),
    );
}

#[test]
fn criterion_10_descending_chain_probe() {
    let start = Instant::now();
    let mut ok = true;
    let mut finite_orders = 0;
    for order in linear_catalog() {
        let Some(size) = order.size() else { continue };
        if size > 200 {
            continue;
        }
        let report = find_descending_chain(&order, size as usize + 1, 256);
        ok &= report.conclusive_absence && !report.found();
        finite_orders += 1;
    }
    let infinite = Order::parse("exp(sum(fin(1),rev(omega)),fin(1))").unwrap();
    let report = find_descending_chain(&infinite, 10, 10_000);
    ok &= report.found() && !report.truncated && report.chain.len() >= 10;
    let elapsed = start.elapsed();
    verdict(
        "descending chain probe",
        ok,
        &format!(
            "conclusive absence on {finite_orders} finite orders; verified length-{} chain found in {elapsed:?}",
            report.chain.len()
        ),
    );
}

#[test]
fn criterion_11_erasure_monotonicity() {
    let start = Instant::now();
    let mut ok = true;
    let mut pairs = 0;
    for expr in ["exp(fin(2),fin(3))", "exp(fin(3),fin(2))"] {
        let order = Order::parse(expr).unwrap();
        let report = check_erasure_monotone(&order, 300).unwrap();
        ok &= report.ok() && report.pairs_checked > 0;
        pairs += report.pairs_checked;
    }
    let elapsed = start.elapsed();
    verdict(
        "erasure monotonicity",
        ok,
        &format!("{pairs} erased comparisons, zero violations in {elapsed:?}"),
    );
}
