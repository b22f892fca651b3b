//! JSON file formats. Tuple keys look like `(i|j|k)` with elements written as
//! in [`FiniteAbelianGroup::format_element`]; scalars are strings `p/q@r/s`
//! (signed rationals such as `-1` are also accepted). Entries left out of a
//! table default to `1`, and writers only emit entries different from `1`.

use serde_json::{json, Map, Value};

use crate::cohomology::{AbelianCochain3, Cochain1, Cochain2, IntertwinerCocycle, ModuleCocycle};
use crate::error::{Error, Result};
use crate::group::{ASet, FiniteAbelianGroup};
use crate::linalg::rational::Matrix;
use crate::quadratic::QuadraticForm;
use crate::scalar::{Rat, Scalar};
use crate::testbed::{GradedAlgebraData, LaurentVec};

fn parse_err(field: &str, msg: impl std::fmt::Display) -> Error {
    let msg = msg.to_string();
    Error::Parse(format!("{field}: {}", msg.strip_prefix("parse error: ").unwrap_or(&msg)))
}

/// Parses JSON text, reporting line and column on syntax errors.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

pub fn to_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

/// `p/q@r/s`, `p/q`, or a signed rational such as `-1/2`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    if let Some(r) = s.strip_prefix('-') {
        if !r.contains('@') {
            let r = parse_rational_str(s).map_err(|_| Error::Parse(format!("invalid scalar {s:?}")))?;
            return Scalar::from_rational(r);
        }
    }
    s.parse()
}

/// Signed rationals print as such; everything else as `p/q@r/s`.
pub fn format_scalar(s: Scalar) -> String {
    match s.to_rational() {
        Some(r) if r.is_integer() => r.numer().to_string(),
        Some(r) => format!("{}/{}", r.numer(), r.denom()),
        None => s.to_string(),
    }
}

fn parse_rational_str(s: &str) -> Result<Rat> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().map_err(|_| bad())?;
            let d: i128 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn parse_rational(v: &Value, field: &str) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rational_str(s).map_err(|e| parse_err(field, e)),
        Value::Number(n) => n
            .as_i64()
            .map(|x| Rat::from_integer(x as i128))
            .ok_or_else(|| parse_err(field, format!("{n} is not an integer; write fractions as \"p/q\""))),
        other => Err(parse_err(field, format!("expected a rational, got {other}"))),
    }
}

pub fn rational_to_json(r: &Rat) -> Value {
    if r.is_integer() {
        Value::String(r.numer().to_string())
    } else {
        Value::String(format!("{}/{}", r.numer(), r.denom()))
    }
}

fn scalar_value(v: &Value, field: &str) -> Result<Scalar> {
    match v {
        Value::String(s) => parse_scalar(s).map_err(|e| parse_err(field, e)),
        Value::Number(_) => Scalar::from_rational(parse_rational(v, field)?).map_err(|e| parse_err(field, e)),
        other => Err(parse_err(field, format!("expected a scalar string, got {other}"))),
    }
}

pub fn tuple_key(g: &FiniteAbelianGroup, elems: &[usize]) -> String {
    let parts: Vec<String> = elems.iter().map(|x| g.format_element(*x)).collect();
    format!("({})", parts.join("|"))
}

/// Splits `(a|b|c)` into its parts.
fn key_parts(key: &str, arity: usize) -> Result<Vec<&str>> {
    let inner = key
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("key {key:?} must look like (a|b)")))?;
    let parts: Vec<&str> = inner.split('|').collect();
    if parts.len() != arity {
        return Err(Error::Parse(format!("key {key:?} must have {arity} entries")));
    }
    Ok(parts)
}

pub fn parse_tuple_key(g: &FiniteAbelianGroup, key: &str, arity: usize) -> Result<Vec<usize>> {
    key_parts(key, arity)?.into_iter().map(|p| g.parse_element(p)).collect()
}

fn object<'a>(v: &'a Value, field: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err(field, "expected an object"))
}

fn optional_table<'a>(root: &'a Map<String, Value>, field: &str) -> Result<Option<&'a Map<String, Value>>> {
    match root.get(field) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => object(v, field).map(Some),
    }
}

pub fn group_from_json(v: &Value) -> Result<FiniteAbelianGroup> {
    let orders = v
        .as_array()
        .and_then(|a| a.iter().map(Value::as_i64).collect::<Option<Vec<i64>>>())
        .ok_or_else(|| parse_err("group", "expected a list of cyclic orders such as [4, 2]"))?;
    FiniteAbelianGroup::new(&orders).map_err(|e| parse_err("group", e))
}

pub fn group_to_json(g: &FiniteAbelianGroup) -> Value {
    json!(g.cyclic_orders())
}

/// The group of a file, reconciled with one given on the command line.
pub fn resolve_group(root: &Map<String, Value>, given: Option<&FiniteAbelianGroup>) -> Result<FiniteAbelianGroup> {
    match (root.get("group"), given) {
        (Some(v), Some(g)) => {
            let file = group_from_json(v)?;
            if file != *g {
                return Err(Error::GroupMismatch(format!("file declares {file}, command line says {g}")));
            }
            Ok(file)
        }
        (Some(v), None) => group_from_json(v),
        (None, Some(g)) => Ok(g.clone()),
        (None, None) => Err(parse_err("group", "missing; add it to the file or pass --group")),
    }
}

fn fill_table(
    g: &FiniteAbelianGroup,
    table: Option<&Map<String, Value>>,
    field: &str,
    arity: usize,
    mut set: impl FnMut(&[usize], Scalar),
) -> Result<()> {
    for (key, v) in table.into_iter().flatten() {
        let at = format!("{field}.{key}");
        let idx = parse_tuple_key(g, key, arity).map_err(|e| parse_err(&at, e))?;
        set(&idx, scalar_value(v, &at)?);
    }
    Ok(())
}

fn emit_table(g: &FiniteAbelianGroup, arity: usize, get: impl Fn(&[usize]) -> Scalar) -> Value {
    let n = g.order();
    let mut out = Map::new();
    let total = n.pow(arity as u32);
    for flat in 0..total {
        let mut idx = vec![0; arity];
        let mut r = flat;
        for slot in idx.iter_mut().rev() {
            *slot = r % n;
            r /= n;
        }
        let v = get(&idx);
        if !v.is_one() {
            out.insert(tuple_key(g, &idx), Value::String(format_scalar(v)));
        }
    }
    Value::Object(out)
}

pub fn cochain3_from_json(v: &Value, given: Option<&FiniteAbelianGroup>) -> Result<AbelianCochain3> {
    let root = object(v, "cocycle")?;
    let g = resolve_group(root, given)?;
    let mut c = AbelianCochain3::trivial(&g);
    fill_table(&g, optional_table(root, "F")?, "F", 3, |t, s| c.set_f(t[0], t[1], t[2], s))?;
    fill_table(&g, optional_table(root, "Omega")?, "Omega", 2, |t, s| c.set_omega(t[0], t[1], s))?;
    Ok(c)
}

pub fn cochain3_to_json(c: &AbelianCochain3) -> Value {
    json!({
        "group": group_to_json(&c.group),
        "F": emit_table(&c.group, 3, |t| c.f_at(t[0], t[1], t[2])),
        "Omega": emit_table(&c.group, 2, |t| c.omega_at(t[0], t[1])),
    })
}

/// 2-cochains use `{"group": [...], "values": {"(i|j)": ...}}`.
pub fn cochain2_from_json(v: &Value, given: Option<&FiniteAbelianGroup>) -> Result<Cochain2> {
    let root = object(v, "cochain")?;
    let g = resolve_group(root, given)?;
    let mut c = Cochain2::trivial(&g);
    fill_table(&g, optional_table(root, "values")?, "values", 2, |t, s| c.set(t[0], t[1], s))?;
    Ok(c)
}

pub fn cochain2_to_json(c: &Cochain2) -> Value {
    json!({ "group": group_to_json(&c.group), "values": emit_table(&c.group, 2, |t| c.get(t[0], t[1])) })
}

pub fn cochain1_from_json(v: &Value, given: Option<&FiniteAbelianGroup>) -> Result<Cochain1> {
    let root = object(v, "cochain")?;
    let g = resolve_group(root, given)?;
    let mut values = vec![Scalar::one(); g.order()];
    fill_table(&g, optional_table(root, "values")?, "values", 1, |t, s| values[t[0]] = s)?;
    Ok(Cochain1 { group: g, values })
}

pub fn cochain1_to_json(c: &Cochain1) -> Value {
    json!({ "group": group_to_json(&c.group), "values": emit_table(&c.group, 1, |t| c.get(t[0])) })
}

pub fn form_from_json(v: &Value, given: Option<&FiniteAbelianGroup>) -> Result<QuadraticForm> {
    let root = object(v, "form")?;
    let g = resolve_group(root, given)?;
    let mut q = QuadraticForm::trivial(&g);
    fill_table(&g, optional_table(root, "Q")?, "Q", 1, |t, s| q.values[t[0]] = s)?;
    Ok(q)
}

pub fn form_to_json(q: &QuadraticForm) -> Value {
    json!({ "group": group_to_json(&q.group), "Q": emit_table(&q.group, 1, |t| q.value(t[0])) })
}

/// `{"carrier": [...], "action": {"(g)": [images]}}`; missing rows act trivially.
pub fn aset_from_json(v: &Value, g: &FiniteAbelianGroup) -> Result<ASet> {
    let root = object(v, "set")?;
    let carrier: Vec<String> = root
        .get("carrier")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("set.carrier", "expected a list of labels"))?
        .iter()
        .map(|x| match x {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        })
        .collect();
    let identity: Vec<usize> = (0..carrier.len()).collect();
    let mut action = vec![identity; g.order()];
    for (key, row) in optional_table(root, "action")?.into_iter().flatten() {
        let at = format!("set.action.{key}");
        let i = parse_tuple_key(g, key, 1).map_err(|e| parse_err(&at, e))?[0];
        action[i] = row
            .as_array()
            .and_then(|a| a.iter().map(|x| x.as_u64().map(|u| u as usize)).collect::<Option<Vec<_>>>())
            .ok_or_else(|| parse_err(&at, "expected a list of carrier indices"))?;
    }
    let set = ASet { carrier, action };
    set.validate(g).map_err(|e| parse_err("set", e))?;
    Ok(set)
}

pub fn aset_to_json(s: &ASet, g: &FiniteAbelianGroup) -> Value {
    let mut action = Map::new();
    for i in g.elements() {
        action.insert(tuple_key(g, &[i]), json!(s.action[i]));
    }
    json!({ "carrier": s.carrier, "action": action })
}

fn label_index(labels: &[String], text: &str, field: &str) -> Result<usize> {
    labels.iter().position(|l| l == text.trim()).ok_or_else(|| parse_err(field, format!("unknown label {text:?}")))
}

/// `{"group", "set", "Phi": {"(i|j|s)": ...}}` with `s` a carrier label.
pub fn module_cocycle_from_json(v: &Value, given: Option<&FiniteAbelianGroup>) -> Result<ModuleCocycle> {
    let root = object(v, "module cocycle")?;
    let g = resolve_group(root, given)?;
    let set = aset_from_json(root.get("set").ok_or_else(|| parse_err("set", "missing"))?, &g)?;
    let mut phi = ModuleCocycle::trivial(&g, &set);
    for (key, val) in optional_table(root, "Phi")?.into_iter().flatten() {
        let at = format!("Phi.{key}");
        let parts = key_parts(key, 3).map_err(|e| parse_err(&at, e))?;
        let i = g.parse_element(parts[0]).map_err(|e| parse_err(&at, e))?;
        let j = g.parse_element(parts[1]).map_err(|e| parse_err(&at, e))?;
        let s = label_index(&set.carrier, parts[2], &at)?;
        phi.set_value(i, j, s, scalar_value(val, &at)?);
    }
    Ok(phi)
}

pub fn module_cocycle_to_json(phi: &ModuleCocycle) -> Value {
    let g = &phi.group;
    let mut table = Map::new();
    for i in g.elements() {
        for j in g.elements() {
            for (s, label) in phi.set.carrier.iter().enumerate() {
                let v = phi.get(i, j, s);
                if !v.is_one() {
                    let key = format!("({}|{}|{label})", g.format_element(i), g.format_element(j));
                    table.insert(key, Value::String(format_scalar(v)));
                }
            }
        }
    }
    json!({ "group": group_to_json(g), "set": aset_to_json(&phi.set, g), "Phi": table })
}

/// `{"group", "s1", "s2": [labels], "Psi": {"(i|r|s)": ...}}`.
pub fn intertwiner_cocycle_from_json(v: &Value, given: Option<&FiniteAbelianGroup>) -> Result<IntertwinerCocycle> {
    let root = object(v, "intertwiner cocycle")?;
    let g = resolve_group(root, given)?;
    let s1 = aset_from_json(root.get("s1").ok_or_else(|| parse_err("s1", "missing"))?, &g)?;
    let s2: Vec<String> = root
        .get("s2")
        .and_then(Value::as_array)
        .and_then(|a| a.iter().map(|x| x.as_str().map(str::to_string)).collect())
        .ok_or_else(|| parse_err("s2", "expected a list of labels"))?;
    let mut psi = IntertwinerCocycle::trivial(&g, &s1, &s2);
    for (key, val) in optional_table(root, "Psi")?.into_iter().flatten() {
        let at = format!("Psi.{key}");
        let parts = key_parts(key, 3).map_err(|e| parse_err(&at, e))?;
        let i = g.parse_element(parts[0]).map_err(|e| parse_err(&at, e))?;
        let r = label_index(&s1.carrier, parts[1], &at)?;
        let s = label_index(&s2, parts[2], &at)?;
        psi.set_value(i, r, s, scalar_value(val, &at)?);
    }
    Ok(psi)
}

pub fn intertwiner_cocycle_to_json(psi: &IntertwinerCocycle) -> Value {
    let g = &psi.group;
    let mut table = Map::new();
    for i in g.elements() {
        for (r, rl) in psi.s1.carrier.iter().enumerate() {
            for (s, sl) in psi.s2.iter().enumerate() {
                let v = psi.get(i, r, s);
                if !v.is_one() {
                    table.insert(format!("({}|{rl}|{sl})", g.format_element(i)), Value::String(format_scalar(v)));
                }
            }
        }
    }
    json!({ "group": group_to_json(g), "s1": aset_to_json(&psi.s1, g), "s2": psi.s2, "Psi": table })
}

fn matrix_from_json(v: &Value, dim: usize, field: &str) -> Result<Matrix> {
    let rows = v.as_array().ok_or_else(|| parse_err(field, "expected a list of rows"))?;
    if rows.len() != dim {
        return Err(parse_err(field, format!("expected {dim} rows, got {}", rows.len())));
    }
    rows.iter()
        .enumerate()
        .map(|(r, row)| {
            let at = format!("{field}[{r}]");
            let row = row.as_array().ok_or_else(|| parse_err(&at, "expected a row"))?;
            if row.len() != dim {
                return Err(parse_err(&at, format!("expected {dim} entries, got {}", row.len())));
            }
            row.iter().enumerate().map(|(c, x)| parse_rational(x, &format!("{at}[{c}]"))).collect()
        })
        .collect()
}

fn vector_from_json(v: &Value, dim: usize, field: &str) -> Result<Vec<Rat>> {
    let entries = v.as_array().ok_or_else(|| parse_err(field, "expected a vector"))?;
    if entries.len() != dim {
        return Err(parse_err(field, format!("expected {dim} entries, got {}", entries.len())));
    }
    entries.iter().enumerate().map(|(c, x)| parse_rational(x, &format!("{field}[{c}]"))).collect()
}

fn basis_key(key: &str, field: &str) -> Result<(usize, usize)> {
    let inner = key.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')'));
    let parsed = inner.and_then(|s| {
        let (a, b) = s.split_once(',')?;
        Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
    });
    parsed.ok_or_else(|| parse_err(field, format!("basis key {key:?} must look like (b1,b2)")))
}

/// Algebra files; `scale` is an optional table of prefactors, default `1`.
pub fn algebra_from_json(v: &Value) -> Result<GradedAlgebraData> {
    let root = object(v, "algebra")?;
    let g = resolve_group(root, None)?;
    let n = g.order();
    let mut dims = vec![0usize; n];
    for (key, d) in optional_table(root, "dims")?.into_iter().flatten() {
        let at = format!("dims.{key}");
        let i = parse_tuple_key(&g, key, 1).map_err(|e| parse_err(&at, e))?[0];
        dims[i] = d.as_u64().ok_or_else(|| parse_err(&at, "expected a dimension"))? as usize;
    }
    let unit = root
        .get("unit")
        .map(|u| u.as_u64().ok_or_else(|| parse_err("unit", "expected a basis index")))
        .transpose()?
        .unwrap_or(0) as usize;
    let mut lminus1: Vec<Matrix> = dims.iter().map(|&d| vec![vec![Rat::from_integer(0); d]; d]).collect();
    for (key, m) in optional_table(root, "Lminus1")?.into_iter().flatten() {
        let at = format!("Lminus1.{key}");
        let i = parse_tuple_key(&g, key, 1).map_err(|e| parse_err(&at, e))?[0];
        lminus1[i] = matrix_from_json(m, dims[i], &at)?;
    }
    let mut mult: Vec<Vec<LaurentVec>> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            mult.push(vec![LaurentVec::zero(); dims[i] * dims[j]]);
        }
    }
    for (key, table) in optional_table(root, "mult")?.into_iter().flatten() {
        let at = format!("mult.{key}");
        let t = parse_tuple_key(&g, key, 2).map_err(|e| parse_err(&at, e))?;
        let (i, j) = (t[0], t[1]);
        let target = dims[g.add(i, j)];
        for (bkey, terms) in object(table, &at)? {
            let bat = format!("{at}.{bkey}");
            let (b1, b2) = basis_key(bkey, &bat)?;
            if b1 >= dims[i] || b2 >= dims[j] {
                return Err(parse_err(&bat, format!("basis index out of range for dims {}x{}", dims[i], dims[j])));
            }
            let terms = terms.as_array().ok_or_else(|| parse_err(&bat, "expected a list of {exp, vec} terms"))?;
            let mut lv = LaurentVec::zero();
            for (k, term) in terms.iter().enumerate() {
                let tat = format!("{bat}[{k}]");
                let exp = term
                    .get("exp")
                    .and_then(Value::as_i64)
                    .ok_or_else(|| parse_err(&tat, "missing integer \"exp\""))?;
                let vec = vector_from_json(term.get("vec").unwrap_or(&Value::Null), target, &format!("{tat}.vec"))?;
                lv.add_scaled(exp as i32, &vec, Rat::from_integer(1));
            }
            mult[i * n + j][b1 * dims[j] + b2] = lv;
        }
    }
    let mut scale = vec![Scalar::one(); n * n];
    fill_table(&g, optional_table(root, "scale")?, "scale", 2, |t, s| scale[t[0] * n + t[1]] = s)?;
    GradedAlgebraData::new(g, dims, unit, lminus1, mult, scale)
}

pub fn algebra_to_json(a: &GradedAlgebraData) -> Value {
    let g = &a.group;
    let n = g.order();
    let mut dims = Map::new();
    let mut lm = Map::new();
    for i in g.elements() {
        dims.insert(tuple_key(g, &[i]), json!(a.dims[i]));
        if a.lminus1[i].iter().flatten().any(|x| *x != Rat::from_integer(0)) {
            let rows: Vec<Value> =
                a.lminus1[i].iter().map(|r| Value::Array(r.iter().map(rational_to_json).collect())).collect();
            lm.insert(tuple_key(g, &[i]), Value::Array(rows));
        }
    }
    let mut mult = Map::new();
    for i in g.elements() {
        for j in g.elements() {
            let mut table = Map::new();
            for b1 in 0..a.dims[i] {
                for b2 in 0..a.dims[j] {
                    let lv = &a.mult[i * n + j][b1 * a.dims[j] + b2];
                    if lv.is_zero() {
                        continue;
                    }
                    let terms: Vec<Value> = lv
                        .terms()
                        .map(|(e, v)| json!({ "exp": e, "vec": v.iter().map(rational_to_json).collect::<Vec<_>>() }))
                        .collect();
                    table.insert(format!("({b1},{b2})"), Value::Array(terms));
                }
            }
            if !table.is_empty() {
                mult.insert(tuple_key(g, &[i, j]), Value::Object(table));
            }
        }
    }
    let mut root = json!({
        "group": group_to_json(g),
        "dims": dims,
        "unit": a.unit,
        "Lminus1": lm,
        "mult": mult,
    });
    let scale = emit_table(g, 2, |t| a.scale[t[0] * n + t[1]]);
    if scale.as_object().is_some_and(|m| !m.is_empty()) {
        root["scale"] = scale;
    }
    root
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testbed::fixtures;

    #[test]
    fn scalars_and_keys() {
        assert_eq!(parse_scalar("-1").unwrap(), Scalar::minus_one());
        assert_eq!(parse_scalar("1/2@1/4").unwrap().to_string(), "1/2@1/4");
        assert_eq!(format_scalar(Scalar::minus_one()), "-1");
        assert_eq!(format_scalar(Scalar::root_of_unity(1, 4)), "1/1@1/4");
        let g: FiniteAbelianGroup = "4,2".parse().unwrap();
        let k = tuple_key(&g, &[1, 5, 0]);
        assert_eq!(parse_tuple_key(&g, &k, 3).unwrap(), vec![1, 5, 0]);
    }

    #[test]
    fn round_trips() {
        let g: FiniteAbelianGroup = "2,2".parse().unwrap();
        let c = AbelianCochain3::from_fns(
            &g,
            |i, j, k| Scalar::root_of_unity((i * j + k) as i64, 6),
            |i, j| Scalar::root_of_unity((i + j) as i64, 4),
        );
        assert_eq!(cochain3_from_json(&cochain3_to_json(&c), None).unwrap(), c);
        for a in [fixtures::exterior_c3(), fixtures::twisted_z5(), fixtures::truncated_polynomial()] {
            let text = to_pretty(&algebra_to_json(&a));
            assert_eq!(algebra_from_json(&parse_json(&text).unwrap()).unwrap(), a);
        }
        let set = ASet::regular(&g);
        let mut phi = ModuleCocycle::trivial(&g, &set);
        phi.set_value(1, 2, 3, Scalar::root_of_unity(1, 3));
        assert_eq!(module_cocycle_from_json(&module_cocycle_to_json(&phi), None).unwrap(), phi);
    }

    #[test]
    fn diagnostics() {
        let err = parse_json("{\n  \"group\": [2,\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let v = parse_json(r#"{"group": [2], "F": {"(1|1|1)": "x"}}"#).unwrap();
        let err = cochain3_from_json(&v, None).unwrap_err();
        assert!(err.to_string().contains("F.(1|1|1)"), "{err}");
        let v = parse_json(r#"{"group": [3]}"#).unwrap();
        assert!(matches!(cochain3_from_json(&v, Some(&FiniteAbelianGroup::cyclic(2))), Err(Error::GroupMismatch(_))));
    }
}
