use std::fs;

use semiprod::cli::{check_tradeoff, run, BenchRecord, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("semiprod").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn query_array_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.txt");
    let queries = dir.path().join("q.txt");
    fs::write(&input, "5\n5 2 7 1 9\n").unwrap();
    fs::write(&queries, "2 5\n3 3\n").unwrap();
    let (code, out, _) = cli(&[
        "query",
        "--structure",
        "k:3",
        "--input",
        input.to_str().unwrap(),
        "--queries",
        queries.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    let (value, used) = lines[0].split_once(' ').unwrap();
    assert_eq!(value, "1");
    assert!(used.parse::<usize>().unwrap() <= 3);
    assert_eq!(lines[1], "7 1");
}

#[test]
fn query_tree_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t.txt");
    let queries = dir.path().join("q.txt");
    fs::write(&input, "3 1\n0 1 2\n4 6 5\n").unwrap();
    fs::write(&queries, "1 3\n3 1\n2 2\n").unwrap();
    for structure in ["tree-prelim", "tree-k:2", "tree-k:3", "tree-alpha"] {
        let (code, out, err) = cli(&[
            "query",
            "--kind",
            "tree",
            "--structure",
            structure,
            "--input",
            input.to_str().unwrap(),
            "--queries",
            queries.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_OK, "{err}");
        let values: Vec<&str> = out.lines().map(|l| l.split(' ').next().unwrap()).collect();
        assert_eq!(values, ["4", "4", "6"]);
    }
}

#[test]
fn query_matrices_respect_direction() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t.txt");
    let queries = dir.path().join("q.txt");
    fs::write(&input, "2 1\n0 1\n1,1,0,1 1,0,1,1\n").unwrap();
    fs::write(&queries, "1 2\n2 1\n").unwrap();
    let (code, out, _) = cli(&[
        "query",
        "--kind",
        "tree",
        "--structure",
        "tree-alpha",
        "--semigroup",
        "mat2-mod251",
        "--input",
        input.to_str().unwrap(),
        "--queries",
        queries.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let values: Vec<&str> = out.lines().map(|l| l.split(' ').next().unwrap()).collect();
    assert_eq!(values, ["2,1,1,1", "1,1,1,2"]);
}

#[test]
fn query_errors_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.txt");
    let queries = dir.path().join("q.txt");
    fs::write(&input, "3\n1 2 x\n").unwrap();
    fs::write(&queries, "1 2\n").unwrap();
    let args = |s: &str| {
        vec!["query", "--structure", s, "--input", input.to_str().unwrap(), "--queries", queries.to_str().unwrap()]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>()
    };
    let run_args = |a: Vec<String>| {
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        cli(&refs)
    };
    let (code, _, err) = run_args(args("two"));
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 2"), "{err}");

    fs::write(&input, "3\n1 2 3\n").unwrap();
    fs::write(&queries, "1 2\n\n2 4\n").unwrap();
    let (code, out, err) = run_args(args("two"));
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(out.lines().count(), 1);
    assert!(err.contains("line 3"), "{err}");

    let (code, _, err) = run_args(args("tree-alpha"));
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--kind tree"), "{err}");

    let (code, _, _) = run_args(args("k:1"));
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = cli(&["query", "--structure", "two", "--input", "/nonexistent/file"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn fn_subcommand() {
    assert_eq!(cli(&["fn", "lambda", "--k", "4", "--x", "65536"]).1, "4\n");
    assert_eq!(cli(&["fn", "alpha", "--x", "1000000000"]).1, "4\n");
    assert_eq!(cli(&["fn", "ackermann", "--which", "A", "--i", "0", "--j", "7"]).1, "14\n");
    assert_eq!(cli(&["fn", "ackermann", "--which", "b", "--i", "1", "--j", "2"]).1, "16\n");
    assert_eq!(cli(&["fn", "ackermann", "--which", "A", "--i", "4", "--j", "4"]).1, ">=4611686018427387904\n");
    assert_eq!(cli(&["fn", "alpha", "--x", "0"]).0, EXIT_USAGE);
    assert_eq!(cli(&["fn", "lambda", "--k", "2", "--x", "0"]).0, EXIT_USAGE);
    assert_eq!(cli(&["fn", "lambda", "--k", "2"]).0, EXIT_USAGE);
}

#[test]
fn verify_passes_and_trivial_size() {
    let (code, out, _) = cli(&["verify", "--n", "1..40", "--structure", "one,two,k:3,k:4,alpha,simple"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 12);
    let (code, _, _) = cli(&["verify", "--kind", "tree", "--n", "1"]);
    assert_eq!(code, EXIT_OK);
    let (code, out, _) = cli(&["verify", "--kind", "tree", "--n", "600", "--samples", "500", "--shape", "random"]);
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn verify_detects_swapped_operands() {
    let (code, out, _) = cli(&[
        "verify",
        "--n",
        "1..20",
        "--structure",
        "k:3",
        "--semigroup",
        "mat2-mod251",
        "--swap-operands",
        "--seed",
        "9",
    ]);
    assert_eq!(code, EXIT_FAILURE);
    let fail = out.lines().find(|l| l.starts_with("FAIL")).unwrap();
    for field in ["seed=9", "n=", "i=", "j="] {
        assert!(fail.contains(field), "{fail}");
    }
    let (code, out, _) = cli(&[
        "verify",
        "--kind",
        "tree",
        "--n",
        "1..20",
        "--structure",
        "tree-k:3",
        "--semigroup",
        "mat2-mod251",
        "--swap-operands",
    ]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(out.contains("u=") && out.contains("shape="), "{out}");
    // min is commutative, so swapping cannot be observed.
    let (code, _, _) =
        cli(&["verify", "--n", "1..20", "--structure", "k:3", "--semigroup", "min-i64", "--swap-operands"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn binary_reads_seed_from_environment() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_semiprod"))
        .args(["verify", "--n", "3", "--structure", "two", "--semigroup", "mat2-mod251", "--swap-operands"])
        .env("RANGEPROD_SEED", "41")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_FAILURE));
    assert!(String::from_utf8_lossy(&out.stdout).contains("seed=41"));
}

#[test]
fn bench_is_deterministic_and_writes_files() {
    let args = ["bench", "--n", "2^10,3000", "--structure", "two,k:3,k:4,alpha", "--queries", "2000", "--no-timing"];
    let (code, first, _) = cli(&args);
    assert_eq!(code, EXIT_OK);
    assert_eq!(cli(&args).1, first);
    assert_eq!(
        first.lines().next().unwrap(),
        "structure,semigroup,n,k,build_millis,stored_semigroup_elements,index_overhead_bytes,queries_run,max_elements_used,mean_elements_used"
    );
    assert_eq!(first.lines().count(), 9);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bench.csv");
    let (code, out, _) =
        cli(&["bench", "--kind", "tree", "--n", "500", "--queries", "100", "--output", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 5);

    let (code, _, _) = cli(&["bench", "--n", "100", "--output", "/nonexistent/dir/out.csv"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn bench_tradeoff_assertion() {
    let (code, _, err) = cli(&["bench", "--n", "2^12", "--queries", "5000", "--assert-tradeoff"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(err.contains("trade-off holds"));
    let (code, _, err) = cli(&["bench", "--kind", "tree", "--n", "2^12", "--queries", "5000", "--assert-tradeoff"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let (code, _, err) = cli(&["bench", "--n", "2^12", "--structure", "two,alpha", "--assert-tradeoff"]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(err.contains("trade-off violated"), "{err}");
}

#[test]
fn tradeoff_rejects_flat_rows() {
    let row = |structure: &str, stored, max| BenchRecord {
        structure: structure.into(),
        semigroup: "min-i64".into(),
        n: 16,
        k: None,
        build_millis: 0,
        stored_semigroup_elements: stored,
        index_overhead_bytes: 0,
        queries_run: 1,
        max_elements_used: max,
        mean_elements_used: 1.0,
    };
    assert!(check_tradeoff(&[row("two", 80, 2), row("k:4", 60, 4), row("alpha", 40, 8)]).is_ok());
    assert!(check_tradeoff(&[row("two", 80, 2), row("k:4", 60, 4), row("alpha", 60, 8)]).is_err());
    assert!(check_tradeoff(&[row("two", 80, 2), row("k:4", 60, 8), row("alpha", 40, 8)]).is_err());
}

#[test]
fn usage_errors() {
    assert_eq!(cli(&[]).0, EXIT_USAGE);
    assert_eq!(cli(&["verify", "--n", "0"]).0, EXIT_USAGE);
    assert_eq!(cli(&["verify", "--semigroup", "nope"]).0, EXIT_USAGE);
    assert_eq!(cli(&["verify", "--structure", "k:3", "--kind", "tree"]).0, EXIT_USAGE);
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verify"));
}
