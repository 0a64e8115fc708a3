use latslice::format;
use latslice_core::countlab::random_chain;
use latslice_core::exactalg::{Field, PrimeField, Rationals};
use latslice_core::lattice::Lattice;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

struct Run {
    code: i32,
    out: String,
    err: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.out).unwrap_or_else(|e| panic!("{e}: {:?}", self.out))
    }
}

fn run_with(args: &[&str], stdin: &str) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("latslice").chain(args.iter().copied());
    let code = latslice::run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn run(args: &[&str]) -> Run {
    run_with(args, "")
}

fn z_power_record(field: &str, m: usize, k: usize) -> String {
    let mut zk = vec![json!(0); k];
    zk.push(json!(1));
    let cols: Vec<Value> = (0..m)
        .map(|j| Value::Array((0..m).map(|i| if i == j { json!(zk) } else { json!([]) }).collect()))
        .collect();
    json!({"m": m, "field": field, "basis": cols}).to_string()
}

#[test]
fn invariant_dim_example() {
    let r = run(&["rep", "invariant-dim", "--m", "2", "--weights", "1,1,1,1"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json(), json!({"dim": 2}));
    let r = run(&["rep", "invariant-dim", "--m", "3", "--weights", "1,1"]);
    assert_eq!(r.json(), json!({"dim": 0}));
    assert_eq!(run(&["rep", "dual", "--m", "3", "--j", "1"]).json(), json!({"dual": 2}));
    assert_eq!(run(&["rep", "dual", "--m", "3", "--j", "3"]).code, 2);
}

#[test]
fn z_power_lattices_are_trivial() {
    for field in ["Fp:5", "Q"] {
        for m in 1..=3 {
            for k in 1..=3 {
                let r = run(&["lattice", "trivial", "--k", &k.to_string(), &z_power_record(field, m, k)]);
                assert_eq!(r.code, 0, "{}", r.err);
                assert_eq!(r.json(), json!({"trivial": true}));
            }
        }
    }
}

#[test]
fn verify_counts_equal_example() {
    let r = run(&["verify", "counts-equal", "--max-m", "2", "--qs", "2,3"]);
    assert_eq!(r.code, 0, "{}", r.out);
    let v = r.json();
    assert_eq!(v["suite"], "counts-equal");
    assert_eq!(v["pass"], true);
    assert!(!v["cases"].as_array().unwrap().is_empty());
}

#[test]
fn parse_errors_name_their_location() {
    let r = run(&["lattice", "splitting-type", r#"{"m":2,"field":"Fp:5","basis":[[[0,1]],[[1]]]}"#]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("basis"), "{}", r.err);
    let r = run(&["lattice", "splitting-type", r#"{"m":1,"field":"Fp:6","basis":[[[1]]]}"#]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("not prime"), "{}", r.err);
    let r = run(&["lattice", "splitting-type", r#"{"m":1,"field":"Q","basis":[[[1, "2/x"]]]}"#]);
    assert!(r.err.contains("basis[0][0][1]"), "{}", r.err);
    let r = run(&["lattice", "splitting-type", r#"{"m":1,"field":"Q","basis":[[[1]]],"extra":0}"#]);
    assert!(r.err.contains("extra") && r.err.contains("unknown"), "{}", r.err);
}

#[test]
fn lattice_records_parse_to_canonical_form() {
    let f = PrimeField::new(5).unwrap();
    // columns (z, 1) and (0, z) span the same lattice as (z, 1) and (−z², 0)
    let a = format::lattice(&f, &json!({"m": 2, "field": "Fp:5", "basis": [[[0, 1], [1]], [[], [0, 1]]]}), "").unwrap();
    let b = format::lattice(&f, &json!({"m": 2, "basis": [[[0, 1], [1]], [[0, 0, 4], []]]}), "").unwrap();
    assert_eq!(a, b);
    let v = format::lattice_value(&a);
    assert_eq!(format::lattice(&f, &v, "").unwrap(), a);
    assert_eq!(v, format::lattice_value(&b));
}

#[test]
fn exit_code_matrix() {
    let lat = z_power_record("Fp:5", 2, 1);
    let cases: &[(&[&str], i32)] = &[
        (&["lattice", "splitting-type", "{not json"], 2),
        (&["lattice", "splitting-type", "[1, 2]"], 2),
        (&["lattice", "splitting-type", "/nonexistent/file.json"], 2),
        (&["lattice", "splitting-type", "--field", "Q", &lat], 2),
        (&["lattice", "splitting-type", "--field", "Fp:5", &lat], 0),
        (&["lattice", "splitting-type", r#"{"m":1,"basis":[[[1]]]}"#], 2),
        (&["lattice", "splitting-type", r#"{"m":1,"field":"Fp:5","basis":[[[0]]]}"#], 2),
        (&["lattice", "splitting-type", r#"{"m":1,"field":"F5","basis":[[[1]]]}"#], 2),
        (&["lattice", "hecke-type", "--x", "1/0", &lat], 2),
        (&["lattice", "frobnicate"], 2),
        (&["nonsense"], 2),
        (&[], 2),
        (&["count", "chain-fiber", "--field", "Q", "--m", "2", "--weights", "1,1", "--points", "0,1"], 2),
        (&["count", "chain-fiber", "--field", "Fp:4", "--m", "2", "--weights", "1,1", "--points", "0,1"], 2),
        (&["count", "chain-fiber", "--field", "Fp:3", "--m", "2", "--weights", "1,1", "--points", "0"], 2),
        (&["count", "chain-fiber", "--field", "Fp:3", "--m", "2", "--weights", "1,2", "--points", "0,1"], 2),
        (&["count", "chain-fiber", "--field", "Fp:3", "--m", "2", "--weights", "1,1", "--points", "0,1", "--end", "nope"], 2),
        (&["count", "chain-fiber", "--field", "Fp:3", "--m", "2", "--k", "2", "--weights", "1,1", "--points", "0,1"], 2),
        (&["count", "chain-fiber", "--field", "Fp:3", "--m", "2", "--weights", "1,1", "--points", "0,-1", "--end", "zk"], 0),
        (&["count", "slice-fiber", "--field", "Fp:3", "--m", "2", "--weights", "1,1", "--points", "0,1", "--end", "any"], 2),
        (&["count", "fit", "--samples", "2:3,3:4", "--held-out", "5:7"], 1),
        (&["count", "fit", "--samples", "2-3"], 2),
        (&["count", "fit", "--samples", "2:4,2:5"], 2),
        (&["verify", "no-such-suite"], 2),
        (&["verify", "product-fibre", "--qs", "4"], 2),
        (&["rep", "invariant-dim", "--m", "2", "--weights", "2"], 2),
        (&["--help"], 0),
    ];
    for (args, want) in cases {
        let r = run(args);
        assert_eq!(r.code, *want, "{args:?}: {}{}", r.out, r.err);
        if *want == 2 {
            assert!(!r.err.is_empty(), "{args:?} gave no diagnostic");
        }
    }
}

#[test]
fn hecke_types_and_divisors() {
    // diag(z, z − 1) inside the standard lattice over F5
    let inner = r#"{"m":2,"field":"Fp:5","basis":[[[0,1],[]],[[],[-1,1]]]}"#;
    let r = run(&["lattice", "hecke-type", "--x", "0", inner]);
    assert_eq!(r.json(), json!({"x": 0, "type": [1, 0]}));
    let r = run(&["lattice", "divisor", inner]);
    assert_eq!(r.json(), json!({"divisor": [{"x": 0, "type": [1, 0]}, {"x": 1, "type": [1, 0]}], "total": 2}));
    let pair = format!(r#"{{"outer": {inner}, "inner": {}}}"#, z_power_record("Fp:5", 2, 1));
    let r = run(&["lattice", "hecke-type", "--x", "1", &pair]);
    assert_eq!(r.code, 1);
    assert!(r.json()["error"].as_str().unwrap().contains("not contained"));
    let r = run(&["lattice", "factorize", "--s1", "0", "--s2", "1", inner]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v = r.json();
    let f = PrimeField::new(5).unwrap();
    let l1 = format::lattice(&f, &v["first"], "first").unwrap();
    let l2 = format::lattice(&f, &v["second"], "second").unwrap();
    let orig = format::lattice(&f, &serde_json::from_str(inner).unwrap(), "").unwrap();
    assert_eq!(l1.intersect(&l2).unwrap(), orig);
    assert_eq!(run(&["lattice", "factorize", "--s1", "0", "--s2", "0,1", inner]).code, 2);
    assert_eq!(run(&["lattice", "factorize", "--s1", "0", inner]).code, 1);
}

#[test]
fn chain_validation_exit_codes() {
    let good = json!({
        "m": 2, "field": "Fp:3", "points": [0, 1], "types": [1, 1],
        "lattices": [[[[0, 1], []], [[], [1]]], [[[0, 1], []], [[], [2, 1]]]],
    })
    .to_string();
    let r = run(&["chain", "validate", &good]);
    assert_eq!((r.code, r.json()["valid"].clone()), (0, json!(true)), "{}", r.err);
    let bad = good.replace("\"points\":[0,1]", "\"points\":[1,1]");
    assert_ne!(bad, good);
    let r = run(&["chain", "validate", &bad]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["valid"], false);
    assert!(!r.json()["failures"].as_array().unwrap().is_empty());
    assert_eq!(run(&["chain", "to-slice", &bad]).code, 1);
    let r = run(&["chain", "to-slice", &good]);
    assert_eq!(r.code, 0);
    let back = run_with(&["slice", "to-chain"], &r.out);
    assert_eq!(back.code, 0, "{}", back.err);
    assert_eq!(back.json(), serde_json::from_str::<Value>(&good).unwrap());
}

#[test]
fn witnesses_roundtrip_through_the_cli() {
    let args = ["--field", "Fp:3", "--m", "2", "--weights", "1,1,1,1", "--points", "0,1,1,0", "--end", "trivial", "--witnesses"];
    let chains = run(&[&["count", "chain-fiber"][..], &args[..]].concat()).json();
    let points = run(&[&["count", "slice-fiber"][..], &args[..]].concat()).json();
    assert_eq!(chains["count"], points["count"]);
    let f = PrimeField::new(3).unwrap();
    for c in chains["witnesses"].as_array().unwrap() {
        assert_eq!(format::chain_value(&f, &format::chain(&f, c).unwrap()), *c);
        let s = run(&["chain", "to-slice", &c.to_string()]);
        assert_eq!(s.code, 0, "{}", s.err);
        assert_eq!(run(&["slice", "validate", &s.out]).code, 0);
        assert_eq!(run(&["slice", "to-chain", &s.out]).json(), *c);
    }
    for p in points["witnesses"].as_array().unwrap() {
        assert_eq!(format::slice_value(&f, &format::slice_point(&f, p).unwrap()), *p);
        let c = run(&["slice", "to-chain", &p.to_string()]);
        assert_eq!(c.code, 0, "{}", c.err);
        assert_eq!(run(&["chain", "to-slice", &c.out]).json(), *p);
    }
}

#[test]
fn rational_chains_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = Rationals;
    let pts = vec![f.from_i64(0), f.parse_elem("1/2").unwrap(), f.from_i64(-3), f.from_i64(0)];
    let mut done = 0;
    while done < 10 {
        let c = random_chain(&f, 2, &[1, 1, 1, 1], &pts, &mut rng).unwrap();
        if !c.end().unwrap().quotient_basis_trivial(2).unwrap() {
            assert_eq!(run(&["chain", "to-slice", &format::chain_value(&f, &c).to_string()]).code, 1);
            continue;
        }
        done += 1;
        let v = format::chain_value(&f, &c);
        assert_eq!(format::chain(&f, &v).unwrap(), c);
        let s = run(&["chain", "to-slice", &v.to_string()]);
        assert_eq!(s.code, 0, "{}", s.err);
        let p = format::slice_point(&f, &s.json()).unwrap();
        assert_eq!(format::slice_value(&f, &p), s.json());
        assert_eq!(run(&["slice", "to-chain", &s.out]).json(), v);
    }
}

#[test]
fn slice_validation_reports_failures() {
    let mut p = json!({
        "m": 2, "k": 1, "field": "Fp:3",
        "Y": [[1, 0], [0, 0]],
        "flag": [[[1, 0]], [[1, 0], [0, 1]]],
        "eigenvalues": [0, 1],
    });
    let r = run(&["slice", "validate", &p.to_string()]);
    assert_eq!(r.code, 0, "{}", r.out);
    p["eigenvalues"] = json!([1, 1]);
    let r = run(&["slice", "validate", &p.to_string()]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["valid"], false);
    p["flag"] = json!([[[1, 0]], [[2, 0]]]);
    let r = run(&["slice", "validate", &p.to_string()]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("flag[1]"), "{}", r.err);
}

#[test]
fn payload_sources_and_output_file() {
    let lat = z_power_record("Q", 2, 2);
    let from_stdin = run_with(&["lattice", "splitting-type"], &lat);
    assert_eq!(from_stdin.json(), json!({"splitting_type": [-2, -2]}));
    let dir = std::env::temp_dir().join(format!("latslice-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("lat.json");
    let output = dir.join("out.json");
    std::fs::write(&input, &lat).unwrap();
    let r = run(&["lattice", "splitting-type", input.to_str().unwrap(), "--out", output.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.out.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(written, from_stdin.json());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn job_count_does_not_change_counts() {
    let base = ["count", "chain-fiber", "--field", "Fp:3", "--m", "2", "--weights", "1,1,1,1", "--points", "0,0,1,1", "--end", "trivial"];
    let one = run(&[&base[..], &["--jobs", "1"]].concat()).json();
    let four = run(&[&base[..], &["--jobs", "4", "--witnesses"]].concat()).json();
    assert_eq!(one["count"], four["count"]);
    assert_eq!(four["witnesses"].as_array().unwrap().len() as u64, four["count"].as_u64().unwrap());
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_latslice");
    let ok = std::process::Command::new(bin).args(["rep", "invariant-dim", "--m", "2", "--weights", "1,1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(serde_json::from_slice::<Value>(&ok.stdout).unwrap(), json!({"dim": 1}));
    let bad = std::process::Command::new(bin).args(["lattice", "divisor", "{"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}

#[test]
fn standard_pair_has_zero_divisor() {
    let f = Rationals;
    let std = Lattice::standard(&f, 3);
    let r = run(&["lattice", "divisor", &format::lattice_value(&std).to_string()]);
    assert_eq!(r.json(), json!({"divisor": [], "total": 0}));
}
