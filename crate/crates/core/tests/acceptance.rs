//! Acceptance suite. Prints one `PASS` or `FAIL` line per criterion and exits non-zero
//! if any criterion fails.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semiprod::tree::gen::{random_tree, TreeShape};
use semiprod::tree::LcaIndex;
use semiprod::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("semiprod").chain(args.iter().copied());
    let code = semiprod::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ceil_log2(x: usize) -> usize {
    let mut e = 0;
    while (1usize << e) < x {
        e += 1;
    }
    e
}

/// alpha from the thresholds A(1,1)=2, A(2,2)=4, A(3,3)=65536.
fn alpha_ref(n: usize) -> usize {
    match n {
        0..=2 => 1,
        3..=4 => 2,
        5..=65536 => 3,
        _ => 4,
    }
}

fn random_values(n: usize, seed: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(-1_000_000..=1_000_000)).collect()
}

fn verify_run(args: &[&str]) -> Outcome {
    let (code, out, err) = cli(args);
    let configs = out.lines().filter(|l| l.starts_with("PASS ")).count();
    if code != 0 {
        let fails: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL ")).collect();
        return Err(format!("exit {code}: {} {}", fails.join("; "), err.trim()));
    }
    Ok(format!("{configs} configurations agree"))
}

fn array_oracle() -> Outcome {
    verify_run(&[
        "verify",
        "--kind",
        "array",
        "--n",
        "1..200",
        "--structure",
        "one,two,k:3,k:4,k:5,alpha",
        "--semigroup",
        "min-i64,mat2-mod251",
    ])
}

fn tree_oracle() -> Outcome {
    verify_run(&[
        "verify",
        "--kind",
        "tree",
        "--n",
        "1..200",
        "--structure",
        "tree-prelim,tree-k:2,tree-k:3,tree-k:4,tree-alpha",
        "--semigroup",
        "min-i64,mat2-mod251",
        "--shape",
        "path,star,binary,random",
    ])
}

fn array_budget_sizes() -> Vec<usize> {
    let mut sizes: Vec<usize> = (1..=256).collect();
    sizes.extend([300, 511, 512, 513, 1000, 1024, 2047, 2048, 4095, 4096]);
    sizes
}

fn tree_budget_sizes() -> Vec<usize> {
    let mut sizes: Vec<usize> = (1..=128).collect();
    sizes.extend([200, 255, 256, 384, 511, 512]);
    sizes
}

fn array_worst<R: RangeStructure<MinI64>>(s: &R) -> usize {
    let n = s.len();
    let mut worst = 0;
    for i in 1..=n {
        for j in i..=n {
            worst = worst.max(s.query(i, j).unwrap().elements_used);
        }
    }
    worst
}

fn step_budgets() -> Outcome {
    let mut checked = 0usize;
    for n in array_budget_sizes() {
        let v = random_values(n, n as u64);
        let runs: Vec<(String, usize, usize)> = vec![
            ("one".into(), 1, array_worst(&OneStepTable::build(MinI64, v.clone()).unwrap())),
            ("two".into(), 2, array_worst(&TwoStepStructure::build(MinI64, v.clone()).unwrap())),
            ("k:3".into(), 3, array_worst(&KStepStructure::build(MinI64, v.clone(), 3).unwrap())),
            ("k:4".into(), 4, array_worst(&KStepStructure::build(MinI64, v.clone(), 4).unwrap())),
            ("k:5".into(), 5, array_worst(&KStepStructure::build(MinI64, v.clone(), 5).unwrap())),
            ("alpha".into(), 2 * alpha_ref(n) + 2, array_worst(&LinearAlphaStructure::build(MinI64, v).unwrap())),
        ];
        for (name, bound, worst) in runs {
            ensure(worst <= bound, || format!("array {name} n={n}: {worst} elements > {bound}"))?;
            checked += n * (n + 1) / 2;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for shape in TreeShape::ALL {
        for n in tree_budget_sizes() {
            let t = random_tree(shape, n, &mut rng, &MinI64);
            let lca = LcaIndex::build(&t);
            let check = |name: &str, s: &dyn PathStructure<MinI64>, anc: usize, gen: usize| -> Result<(), String> {
                for u in 0..n {
                    for v in 0..n {
                        let used = s.query_path(u, v).unwrap().elements_used;
                        let l = lca.lca(u, v);
                        let bound = if l == u || l == v { anc } else { gen };
                        ensure(used <= bound, || {
                            format!("{name} {} n={n} ({}, {}): {used} elements > {bound}", shape.name(), u + 1, v + 1)
                        })?;
                    }
                }
                Ok(())
            };
            for k in 2..=4 {
                check(&format!("tree-k:{k}"), &TreeKStep::build(MinI64, t.clone(), k).unwrap(), k, 2 * k)?;
            }
            let a = TreeLinearAlpha::build(MinI64, t.clone());
            check("tree-alpha", &a, a.ancestor_budget(), a.step_budget())?;
            let p = TreePreliminary::build(MinI64, t);
            check("tree-prelim", &p, p.ancestor_budget(), p.step_budget())?;
            checked += 5 * n * n;
        }
    }
    Ok(format!("{checked} queries within budget"))
}

fn linear_alpha_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut report = Vec::new();
    for (n, samples) in [(1 << 10, 100_000), (1 << 14, 100_000), (1 << 17, 100_000), (1 << 20, 1_000_000)] {
        let a = alpha_ref(n);
        let bound = (2 * a + 2).max(2 * ceil_log2(2 * a * a));
        let s = LinearAlphaStructure::build(MinI64, random_values(n, n as u64)).unwrap();
        ensure(s.step_budget() <= bound, || format!("n={n}: declared budget {} > {bound}", s.step_budget()))?;
        let mut worst = 0;
        for _ in 0..samples {
            let (x, y) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
            worst = worst.max(s.query(x.min(y), x.max(y)).unwrap().elements_used);
        }
        ensure(worst <= bound, || format!("n={n}: {worst} elements > {bound}"))?;
        report.push(format!("n={n} max={worst}/{bound}"));
    }
    Ok(report.join(", "))
}

fn ratio_spread(ratios: &[f64]) -> f64 {
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    max / min
}

fn space_bounds() -> Outcome {
    for n in [1usize, 2, 7, 64, 200, 1000] {
        let s = OneStepTable::build(MinI64, random_values(n, 1)).unwrap();
        ensure(s.stored_elements() == n * (n + 1) / 2, || format!("one-step n={n}: {}", s.stored_elements()))?;
    }
    for n in [1usize, 2, 3, 100, 1000, 1 << 10, (1 << 16) + 1, 1 << 18] {
        let s = TwoStepStructure::build(MinI64, random_values(n, 2)).unwrap();
        let bound = n * ceil_log2(n) + n;
        ensure(s.stored_elements() <= bound, || format!("two-step n={n}: {} > {bound}", s.stored_elements()))?;
    }
    for e in 10..=18 {
        let n = 1usize << e;
        let v = random_values(n, 3);
        for k in 3..=5u32 {
            let s = KStepStructure::build(MinI64, v.clone(), k as usize).unwrap();
            let bound = k as usize * n * lambda(k, n as u64).unwrap() as usize + 8 * n;
            ensure(s.stored_elements() <= bound, || format!("k={k} n=2^{e}: {} > {bound}", s.stored_elements()))?;
        }
    }
    let sizes = [1usize << 14, 1 << 17, 1 << 20];
    let ratios: Vec<f64> = sizes
        .iter()
        .map(|&n| LinearAlphaStructure::build(MinI64, random_values(n, 4)).unwrap().stored_elements() as f64 / n as f64)
        .collect();
    let spread = ratio_spread(&ratios);
    ensure(spread < 1.2, || format!("linear-alpha stored/n {ratios:?} spread {spread:.3}"))?;
    let mut report = vec![format!("alpha spread {spread:.3}")];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for shape in TreeShape::ALL {
        let ratios: Vec<f64> = sizes
            .iter()
            .map(|&n| {
                let t = random_tree(shape, n, &mut rng, &MinI64);
                TreeLinearAlpha::build(MinI64, t).stored_elements() as f64 / n as f64
            })
            .collect();
        let spread = ratio_spread(&ratios);
        ensure(spread < 1.2, || format!("tree-alpha {} stored/n {ratios:?} spread {spread:.3}", shape.name()))?;
        report.push(format!("tree-alpha {} spread {spread:.3}", shape.name()));
    }
    Ok(report.join(", "))
}

fn hierarchy_table() -> Outcome {
    let table: [(&str, u64, u64); 10] = [
        ("A(0,7)", ackermann_a(0, 7).get(), 14),
        ("A(1,5)", ackermann_a(1, 5).get(), 32),
        ("A(2,3)", ackermann_a(2, 3).get(), 16),
        ("B(0,5)", ackermann_b(0, 5).get(), 25),
        ("B(1,2)", ackermann_b(1, 2).get(), 16),
        ("lambda(0,10)", lambda(0, 10).unwrap(), 5),
        ("lambda(2,8)", lambda(2, 8).unwrap(), 3),
        ("lambda(4,65536)", lambda(4, 65536).unwrap(), 4),
        ("alpha(65536)", alpha(65536).unwrap(), 3),
        ("alpha(10^9)", alpha(1_000_000_000).unwrap(), 4),
    ];
    for (what, got, want) in table {
        ensure(got == want, || format!("{what} = {got}, expected {want}"))?;
    }
    ensure(lambda(3, 0).is_err() && alpha(0).is_err(), || "x = 0 accepted".into())?;
    for j in 1..=1_000_000u64 {
        ensure(ackermann_a(0, j).get() == 2 * j && ackermann_b(0, j).get() == j * j, || format!("base case j={j}"))?;
    }
    for i in 1..=8 {
        ensure(ackermann_a(i, 0).get() == 1 && ackermann_b(i, 0).get() == 2, || format!("base case i={i}"))?;
    }

    const X_MAX: u64 = 1 << 20;
    for i in 0..4u32 {
        // Smallest j with F(i, j) >= x, advanced monotonically as x grows.
        let (mut ja, mut jb) = (0u64, 0u64);
        for x in 1..=X_MAX {
            while ackermann_a(i as u64, ja).get() < x {
                ja += 1;
            }
            while ackermann_b(i as u64, jb).get() < x {
                jb += 1;
            }
            ensure(lambda(2 * i, x).unwrap() == ja, || format!("lambda({}, {x}) != {ja}", 2 * i))?;
            ensure(lambda(2 * i + 1, x).unwrap() == jb, || format!("lambda({}, {x}) != {jb}", 2 * i + 1))?;
        }
    }

    let log_star = |x: u64| {
        let mut y = x as f64;
        let mut c = 0;
        while y > 1.0 {
            y = y.log2();
            c += 1;
        }
        c
    };
    for x in 2..=X_MAX {
        let lg = 64 - (x - 1).leading_zeros() as u64;
        let lglg = 64 - (lg - 1).leading_zeros() as u64;
        ensure(lambda(2, x).unwrap() == lg, || format!("lambda(2, {x})"))?;
        ensure(lambda(3, x).unwrap() == lglg, || format!("lambda(3, {x})"))?;
        ensure(lambda(4, x).unwrap() == log_star(x), || format!("lambda(4, {x})"))?;
    }

    for k in 0..8u32 {
        let mut prev = 0;
        for x in 1..=X_MAX {
            let l = lambda(k, x).unwrap();
            ensure(l >= prev, || format!("lambda({k}, .) decreases at {x}"))?;
            ensure(lambda(k + 2, x).unwrap() <= l, || format!("lambda({}, {x}) > lambda({k}, {x})", k + 2))?;
            prev = l;
        }
    }
    Ok("table, base cases, inverse consistency, closed forms and monotonicity up to 2^20".into())
}

fn tradeoff() -> Outcome {
    let (code, out, err) = cli(&[
        "bench",
        "--kind",
        "array",
        "--n",
        "2^16",
        "--structure",
        "two,k:3,k:4,alpha",
        "--queries",
        "100000",
        "--no-timing",
        "--assert-tradeoff",
    ]);
    ensure(code == 0, || format!("exit {code}: {}", err.trim()))?;
    ensure(out.lines().count() == 5, || format!("unexpected CSV:\n{out}"))?;
    Ok(err.trim().trim_start_matches("trade-off holds: ").to_string())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("oracle equivalence, arrays", array_oracle),
        ("oracle equivalence, trees", tree_oracle),
        ("step budgets", step_budgets),
        ("linear-alpha step bound", linear_alpha_bound),
        ("space bounds", space_bounds),
        ("hierarchy table", hierarchy_table),
        ("trade-off monotonicity", tradeoff),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} ({secs:.1}s): {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
