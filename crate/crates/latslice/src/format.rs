//! JSON records for field elements, polynomials, lattices, chains, slice
//! points and reports. Parsing is strict: unknown keys are rejected and
//! every error names the offending location, e.g. `basis[1][0]`.

use latslice_core::countlab::suites::{CaseResult, SuiteReport};
use latslice_core::countlab::{CountReport, FiberQuery};
use latslice_core::exactalg::{Field, FieldSpec, Matrix, Poly, PolyMatrix, Subspace};
use latslice_core::lattice::{Lattice, LatticeChain};
use latslice_core::reptheory::WeightSeq;
use latslice_core::slice::{Flag, SliceMatrix, SlicePoint};
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("at {path}: {msg}")]
    At { path: String, msg: String },
}

fn at(path: &str, msg: impl Into<String>) -> FormatError {
    FormatError::At { path: if path.is_empty() { "<root>".into() } else { path.into() }, msg: msg.into() }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn index(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

pub fn parse_json(text: &str) -> Result<Value, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))
}

/// Checks that `v` is an object with all `required` keys and nothing outside
/// `required ∪ optional`.
fn object<'a>(v: &'a Value, path: &str, required: &[&str], optional: &[&str]) -> Result<&'a Map<String, Value>, FormatError> {
    let obj = v.as_object().ok_or_else(|| at(path, "expected an object"))?;
    for key in obj.keys() {
        if !required.contains(&key.as_str()) && !optional.contains(&key.as_str()) {
            return Err(at(&join(path, key), "unknown field"));
        }
    }
    for key in required {
        if !obj.contains_key(*key) {
            return Err(at(&join(path, key), "missing field"));
        }
    }
    Ok(obj)
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array().ok_or_else(|| at(path, "expected an array"))
}

fn array_of_len<'a>(v: &'a Value, path: &str, len: usize, what: &str) -> Result<&'a Vec<Value>, FormatError> {
    let a = array(v, path)?;
    if a.len() != len {
        return Err(at(path, format!("expected {len} {what}, found {}", a.len())));
    }
    Ok(a)
}

fn usize_at(v: &Value, path: &str) -> Result<usize, FormatError> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| at(path, "expected a nonnegative integer"))
}

fn positive_at(v: &Value, path: &str) -> Result<usize, FormatError> {
    match usize_at(v, path)? {
        0 => Err(at(path, "must be positive")),
        n => Ok(n),
    }
}

pub fn field_spec(v: &Value, path: &str) -> Result<FieldSpec, FormatError> {
    let s = v.as_str().ok_or_else(|| at(path, "expected a field spec string \"Q\" or \"Fp:<p>\""))?;
    FieldSpec::parse(s).map_err(|e| at(path, e.to_string()))
}

/// The field a payload is over: its own `field` key (or that of its
/// `inner` record), checked against a `--field` flag when both are present.
pub fn record_field(v: &Value, flag: Option<FieldSpec>) -> Result<FieldSpec, FormatError> {
    let (found, path) = match v.get("field") {
        Some(f) => (Some(f), "field"),
        None => (v.get("inner").and_then(|i| i.get("field")), "inner.field"),
    };
    match (found.map(|f| field_spec(f, path)).transpose()?, flag) {
        (Some(a), Some(b)) if a != b => Err(at(path, format!("field mismatch: payload is over {a}, flag says {b}"))),
        (Some(a), _) => Ok(a),
        (None, Some(b)) => Ok(b),
        (None, None) => Err(at("field", "missing field and no --field flag given")),
    }
}

fn check_field<F: Field>(f: &F, obj: &Map<String, Value>, path: &str) -> Result<(), FormatError> {
    if let Some(v) = obj.get("field") {
        let p = join(path, "field");
        let spec = field_spec(v, &p)?;
        if spec != f.spec() {
            return Err(at(&p, format!("field mismatch: {spec} vs {}", f.spec())));
        }
    }
    Ok(())
}

pub fn elem<F: Field>(f: &F, v: &Value, path: &str) -> Result<F::Elem, FormatError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|x| f.from_i64(x))
            .ok_or_else(|| at(path, format!("expected an integer or \"p/q\" string, found {n}"))),
        Value::String(s) => f.parse_elem(s).map_err(|e| at(path, e.to_string())),
        _ => Err(at(path, "expected a field element")),
    }
}

pub fn elem_value<F: Field>(f: &F, e: &F::Elem) -> Value {
    match f.to_i64(e) {
        Some(x) => json!(x),
        None => json!(f.elem_string(e)),
    }
}

pub fn elems<F: Field>(f: &F, v: &Value, path: &str) -> Result<Vec<F::Elem>, FormatError> {
    array(v, path)?.iter().enumerate().map(|(i, x)| elem(f, x, &index(path, i))).collect()
}

/// A polynomial: ascending coefficient array, or the same in text form `"[1,3,1]"`.
pub fn poly<F: Field>(f: &F, v: &Value, path: &str) -> Result<Poly<F::Elem>, FormatError> {
    match v {
        Value::String(s) => Poly::parse(f, s).map_err(|e| at(path, e.to_string())),
        _ => Ok(Poly::from_coeffs(f, elems(f, v, path)?)),
    }
}

pub fn poly_value<F: Field>(f: &F, p: &Poly<F::Elem>) -> Value {
    Value::Array(p.coeffs().iter().map(|c| elem_value(f, c)).collect())
}

/// Square `m × m` matrix given as a list of `m` columns.
pub fn basis<F: Field>(f: &F, v: &Value, m: usize, path: &str) -> Result<PolyMatrix<F::Elem>, FormatError> {
    let cols = array_of_len(v, path, m, "columns")?;
    let mut out = Vec::with_capacity(m);
    for (j, col) in cols.iter().enumerate() {
        let cp = index(path, j);
        let entries = array_of_len(col, &cp, m, "polynomials")?;
        out.push(entries.iter().enumerate().map(|(i, e)| poly(f, e, &index(&cp, i))).collect::<Result<Vec<_>, _>>()?);
    }
    PolyMatrix::from_columns(m, out).map_err(|e| at(path, e.to_string()))
}

pub fn basis_value<F: Field>(f: &F, b: &PolyMatrix<F::Elem>) -> Value {
    Value::Array(
        b.columns()
            .iter()
            .map(|c| Value::Array(c.iter().map(|p| poly_value(f, p)).collect()))
            .collect(),
    )
}

fn lattice_from_basis<F: Field>(f: &F, b: &PolyMatrix<F::Elem>, path: &str) -> Result<Lattice<F>, FormatError> {
    Lattice::from_basis(f, b).map_err(|e| at(path, format!("not a lattice basis: {e}")))
}

/// `{"m", "field", "basis"}`; `field` may be omitted inside larger records.
pub fn lattice<F: Field>(f: &F, v: &Value, path: &str) -> Result<Lattice<F>, FormatError> {
    let obj = object(v, path, &["m", "basis"], &["field"])?;
    check_field(f, obj, path)?;
    let m = positive_at(&obj["m"], &join(path, "m"))?;
    let bp = join(path, "basis");
    lattice_from_basis(f, &basis(f, &obj["basis"], m, &bp)?, &bp)
}

pub fn lattice_value<F: Field>(l: &Lattice<F>) -> Value {
    json!({"m": l.m(), "field": l.field().spec().to_string(), "basis": basis_value(l.field(), l.basis())})
}

/// Either `{"outer", "inner"}` or a bare lattice record, taken as the inner
/// lattice with the standard lattice outside.
pub fn lattice_pair<F: Field>(f: &F, v: &Value) -> Result<(Lattice<F>, Lattice<F>), FormatError> {
    if v.get("inner").is_some() || v.get("outer").is_some() {
        let obj = object(v, "", &["outer", "inner"], &["field"])?;
        check_field(f, obj, "")?;
        let outer = lattice(f, &obj["outer"], "outer")?;
        let inner = lattice(f, &obj["inner"], "inner")?;
        if outer.m() != inner.m() {
            return Err(at("inner.m", format!("rank {} differs from outer rank {}", inner.m(), outer.m())));
        }
        Ok((outer, inner))
    } else {
        let inner = lattice(f, v, "")?;
        Ok((Lattice::standard(f, inner.m()), inner))
    }
}

/// `{"m", "field", "points", "types", "lattices"}` with `lattices` a list of
/// bases or lattice records.
pub fn chain<F: Field>(f: &F, v: &Value) -> Result<LatticeChain<F>, FormatError> {
    let obj = object(v, "", &["m", "points", "types", "lattices"], &["field"])?;
    check_field(f, obj, "")?;
    let m = positive_at(&obj["m"], "m")?;
    let points = elems(f, &obj["points"], "points")?;
    let types = array(&obj["types"], "types")?
        .iter()
        .enumerate()
        .map(|(i, t)| usize_at(t, &index("types", i)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut lattices = Vec::new();
    for (i, l) in array(&obj["lattices"], "lattices")?.iter().enumerate() {
        let p = index("lattices", i);
        let lat = if l.is_object() { lattice(f, l, &p)? } else { lattice_from_basis(f, &basis(f, l, m, &p)?, &p)? };
        if lat.m() != m {
            return Err(at(&p, format!("rank {} differs from m = {m}", lat.m())));
        }
        lattices.push(lat);
    }
    Ok(LatticeChain { m, points, types, lattices })
}

pub fn chain_value<F: Field>(f: &F, c: &LatticeChain<F>) -> Value {
    json!({
        "m": c.m,
        "field": f.spec().to_string(),
        "points": c.points.iter().map(|x| elem_value(f, x)).collect::<Vec<_>>(),
        "types": c.types,
        "lattices": c.lattices.iter().map(|l| basis_value(f, l.basis())).collect::<Vec<_>>(),
    })
}

/// `{"m", "k", "field"?, "Y", "flag", "eigenvalues"}`; `Y` is a list of rows
/// and each flag entry a list of spanning column vectors. The weights are
/// read off the flag: `W_i / W_{i−1}` has dimension `π_{n−i+1}`.
pub fn slice_point<F: Field>(f: &F, v: &Value) -> Result<SlicePoint<F::Elem>, FormatError> {
    let obj = object(v, "", &["m", "k", "Y", "flag", "eigenvalues"], &["field"])?;
    check_field(f, obj, "")?;
    let m = positive_at(&obj["m"], "m")?;
    let k = positive_at(&obj["k"], "k")?;
    let n = m * k;
    let rows = array_of_len(&obj["Y"], "Y", n, "rows")?
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let p = index("Y", i);
            array_of_len(r, &p, n, "entries")?;
            elems(f, r, &p)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let matrix = Matrix::from_rows(rows).map_err(|e| at("Y", e.to_string()))?;
    let y = SliceMatrix::new(m, k, matrix).map_err(|e| at("Y", e.to_string()))?;
    let mut subspaces = Vec::new();
    let mut jumps = Vec::new();
    let mut prev_dim = 0;
    for (i, w) in array(&obj["flag"], "flag")?.iter().enumerate() {
        let p = index("flag", i);
        let vectors = array(w, &p)?
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let cp = index(&p, j);
                array_of_len(c, &cp, n, "entries")?;
                elems(f, c, &cp)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let s = Subspace::span(f, n, &vectors).map_err(|e| at(&p, e.to_string()))?;
        if s.dim() <= prev_dim {
            return Err(at(&p, format!("dimension {} does not exceed the previous {prev_dim}", s.dim())));
        }
        jumps.push(s.dim() - prev_dim);
        prev_dim = s.dim();
        subspaces.push(s);
    }
    jumps.reverse();
    let jumps = WeightSeq::new(m, jumps).map_err(|e| at("flag", format!("dimension jumps are not valid weights: {e}")))?;
    let eigenvalues = elems(f, &obj["eigenvalues"], "eigenvalues")?;
    Ok(SlicePoint { y, flag: Flag { subspaces, jumps }, eigenvalues })
}

pub fn slice_value<F: Field>(f: &F, p: &SlicePoint<F::Elem>) -> Value {
    let row = |r: &Vec<F::Elem>| Value::Array(r.iter().map(|x| elem_value(f, x)).collect());
    json!({
        "m": p.y.m(),
        "k": p.y.k(),
        "field": f.spec().to_string(),
        "Y": p.y.matrix().to_rows().iter().map(row).collect::<Vec<_>>(),
        "flag": p.flag.subspaces.iter().map(|w| w.basis().iter().map(row).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "eigenvalues": p.eigenvalues.iter().map(|x| elem_value(f, x)).collect::<Vec<_>>(),
    })
}

pub fn query_value<F: Field>(q: &FiberQuery<F>) -> Value {
    let f = q.field();
    json!({
        "field": f.spec().to_string(),
        "m": q.m(),
        "k": q.k(),
        "weights": q.weights().entries(),
        "points": q.points().iter().map(|x| elem_value(f, x)).collect::<Vec<_>>(),
        "end": q.end().name(),
    })
}

pub fn count_value<W>(
    query: Value,
    report: &CountReport<W>,
    elapsed_ms: u128,
    witness: impl Fn(&W) -> Value,
) -> Value {
    let mut out = json!({"query": query, "count": report.count, "elapsed_ms": elapsed_ms as u64});
    if let Some(ws) = &report.witnesses {
        out["witnesses"] = Value::Array(ws.iter().map(witness).collect());
    }
    if report.witnesses_dropped {
        out["witnesses_dropped"] = json!(true);
    }
    out
}

fn case_value(c: &CaseResult) -> Value {
    json!({"params": c.params, "expected": c.expected, "actual": c.actual, "pass": c.pass})
}

pub fn suite_value(r: &SuiteReport) -> Value {
    json!({
        "suite": r.suite.name(),
        "pass": r.passed(),
        "cases": r.cases.iter().map(case_value).collect::<Vec<_>>(),
        "skipped": r.skipped,
    })
}
