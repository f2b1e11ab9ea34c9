//! Wire formats for polynomials, operators, symbols and reports.
//!
//! Objects are built as `serde_json::Value`, whose maps keep keys sorted, so
//! serialized output is byte-stable. Coefficients travel as strings: canonical
//! `p/q` in exact mode, `{:e}` decimals in float mode.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::opcore::{Band, GradedOperator, Key, OperatorReport};
use crate::scalar::{parse_rational, Scalar};
use crate::space::{MultiIndex, Polynomial, Space, SpaceParams};
use crate::toeplitz::{ClassificationReport, PluriharmonicSymbol};

fn field(path: &str, name: &str) -> String {
    if path.is_empty() {
        name.to_string()
    } else {
        format!("{path}.{name}")
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| {
        Error::parse(
            if path.is_empty() { "<root>" } else { path },
            "expected an object",
        )
    })
}

fn get<'a>(obj: &'a Map<String, Value>, path: &str, name: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| Error::parse(field(path, name), "missing field"))
}

fn get_usize(obj: &Map<String, Value>, path: &str, name: &str) -> Result<usize> {
    get(obj, path, name)?
        .as_u64()
        .and_then(|u| usize::try_from(u).ok())
        .ok_or_else(|| Error::parse(field(path, name), "expected a nonnegative integer"))
}

fn get_array<'a>(obj: &'a Map<String, Value>, path: &str, name: &str) -> Result<&'a Vec<Value>> {
    get(obj, path, name)?
        .as_array()
        .ok_or_else(|| Error::parse(field(path, name), "expected an array"))
}

fn get_multi_index(
    obj: &Map<String, Value>,
    path: &str,
    name: &str,
    n: usize,
) -> Result<MultiIndex> {
    let path = field(path, name);
    let items = obj
        .get(name)
        .ok_or_else(|| Error::parse(&path, "missing field"))?
        .as_array()
        .ok_or_else(|| Error::parse(&path, "expected an array of exponents"))?;
    if items.len() != n {
        return Err(Error::parse(
            &path,
            format!("expected {n} exponents, got {}", items.len()),
        ));
    }
    let comps = items
        .iter()
        .map(|x| x.as_u64().and_then(|u| u32::try_from(u).ok()))
        .collect::<Option<Vec<u32>>>()
        .ok_or_else(|| Error::parse(&path, "exponents must be nonnegative integers"))?;
    Ok(MultiIndex::new(comps))
}

fn get_scalar<S: Scalar>(obj: &Map<String, Value>, path: &str) -> Result<S> {
    let part = |name: &str| -> Result<_> {
        let f = field(path, name);
        match obj.get(name) {
            None if name == "im" => Ok(num_rational::BigRational::from_integer(0.into())),
            None => Err(Error::parse(&f, "missing field")),
            Some(Value::String(s)) => parse_rational(s).map_err(|m| Error::parse(&f, m)),
            Some(Value::Number(x)) => {
                parse_rational(&x.to_string()).map_err(|m| Error::parse(&f, m))
            }
            Some(_) => Err(Error::parse(&f, "expected a rational string")),
        }
    };
    Ok(S::from_parts(&part("re")?, &part("im")?))
}

fn scalar_fields<S: Scalar>(obj: &mut Map<String, Value>, c: &S) {
    let (re, im) = c.to_strings();
    obj.insert("re".into(), Value::String(re));
    obj.insert("im".into(), Value::String(im));
}

fn multi_index_json(alpha: &MultiIndex) -> Value {
    Value::from(alpha.components().to_vec())
}

pub fn polynomial_to_json<S: Scalar>(p: &Polynomial<S>) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(alpha, c)| {
            let mut t = Map::new();
            t.insert("alpha".into(), multi_index_json(alpha));
            scalar_fields(&mut t, c);
            Value::Object(t)
        })
        .collect();
    json!({ "n": p.n(), "terms": terms })
}

/// Parses a polynomial; `path` prefixes field names in diagnostics.
pub fn polynomial_from_json<S: Scalar>(v: &Value, path: &str) -> Result<Polynomial<S>> {
    let obj = object(v, path)?;
    let n = get_usize(obj, path, "n")?;
    if n == 0 {
        return Err(Error::parse(
            field(path, "n"),
            "dimension must be at least 1",
        ));
    }
    parse_terms(obj, path, n)
}

fn parse_terms<S: Scalar>(obj: &Map<String, Value>, path: &str, n: usize) -> Result<Polynomial<S>> {
    let mut p = Polynomial::zero(n);
    let mut seen = BTreeSet::new();
    for (i, t) in get_array(obj, path, "terms")?.iter().enumerate() {
        let tp = format!("{}[{i}]", field(path, "terms"));
        let to = object(t, &tp)?;
        let alpha = get_multi_index(to, &tp, "alpha", n)?;
        if !seen.insert(alpha.clone()) {
            return Err(Error::parse(field(&tp, "alpha"), "repeated multi-index"));
        }
        p.add_term(alpha, get_scalar(to, &tp)?);
    }
    Ok(p)
}

pub fn symbol_to_json<S: Scalar>(s: &PluriharmonicSymbol<S>) -> Value {
    json!({
        "n": s.n(),
        "g": polynomial_to_json(&s.g),
        "h": polynomial_to_json(&s.h),
    })
}

/// `g` and `h` may omit their own `n`; they inherit the symbol's.
pub fn symbol_from_json<S: Scalar>(v: &Value) -> Result<PluriharmonicSymbol<S>> {
    let obj = object(v, "")?;
    let n = get_usize(obj, "", "n")?;
    if n == 0 {
        return Err(Error::parse("n", "dimension must be at least 1"));
    }
    let part = |name: &str| -> Result<Polynomial<S>> {
        let po = object(get(obj, "", name)?, name)?;
        if po.contains_key("n") && get_usize(po, name, "n")? != n {
            return Err(Error::parse(
                field(name, "n"),
                format!("disagrees with symbol dimension {n}"),
            ));
        }
        parse_terms(po, name, n)
    };
    PluriharmonicSymbol::new(part("g")?, part("h")?)
}

pub fn operator_to_json<S: Scalar>(op: &GradedOperator<S>) -> Value {
    let sp = op.space();
    let entries: Vec<Value> = op
        .entries()
        .map(|(row, col, c)| {
            let mut e = Map::new();
            e.insert("row_comp".into(), row.comp.into());
            e.insert("row".into(), multi_index_json(sp.multi_index(row.idx)));
            e.insert("col_comp".into(), col.comp.into());
            e.insert("col".into(), multi_index_json(sp.multi_index(col.idx)));
            scalar_fields(&mut e, c);
            Value::Object(e)
        })
        .collect();
    json!({
        "n": sp.n(),
        "m": sp.m(),
        "arity_in": op.arity_in(),
        "arity_out": op.arity_out(),
        "d_in": op.d_in(),
        "d_out": op.d_out(),
        "entries": entries,
    })
}

/// Loads an operator on a fresh space of degree `d_out + 1`. The band is
/// inferred from the entries; an output window too small for it is rejected.
pub fn operator_from_json<S: Scalar>(v: &Value) -> Result<GradedOperator<S>> {
    let obj = object(v, "")?;
    let n = get_usize(obj, "", "n")?;
    let m = get_usize(obj, "", "m")?;
    if n == 0 {
        return Err(Error::parse("n", "dimension must be at least 1"));
    }
    if m == 0 {
        return Err(Error::parse("m", "weight parameter must be at least 1"));
    }
    let arity_in = get_usize(obj, "", "arity_in")?;
    let arity_out = get_usize(obj, "", "arity_out")?;
    if arity_in == 0 {
        return Err(Error::parse("arity_in", "arity must be at least 1"));
    }
    if arity_out == 0 {
        return Err(Error::parse("arity_out", "arity must be at least 1"));
    }
    let d_in = get_usize(obj, "", "d_in")?;
    let d_out = get_usize(obj, "", "d_out")?;
    let space: Arc<Space> = Space::new(SpaceParams::new(n, m, d_out + 1, S::MODE)?)?;

    let mut parsed = Vec::new();
    let mut seen = BTreeSet::new();
    let mut band: Option<Band> = None;
    for (i, e) in get_array(obj, "", "entries")?.iter().enumerate() {
        let ep = format!("entries[{i}]");
        let eo = object(e, &ep)?;
        let key = |comp_name: &str, idx_name: &str, arity: usize, window: usize| -> Result<Key> {
            let comp = get_usize(eo, &ep, comp_name)?;
            if comp >= arity {
                return Err(Error::parse(
                    field(&ep, comp_name),
                    format!("component {comp} outside arity {arity}"),
                ));
            }
            let alpha = get_multi_index(eo, &ep, idx_name, n)?;
            if alpha.degree() > window {
                return Err(Error::parse(
                    field(&ep, idx_name),
                    format!("degree {} outside window {window}", alpha.degree()),
                ));
            }
            Ok(Key::new(
                comp,
                space.index_of(&alpha).expect("degree within space"),
            ))
        };
        let row = key("row_comp", "row", arity_out, d_out)?;
        let col = key("col_comp", "col", arity_in, d_in)?;
        if !seen.insert((row, col)) {
            return Err(Error::parse(&ep, "repeated entry"));
        }
        let value: S = get_scalar(eo, &ep)?;
        if value.is_zero() {
            continue;
        }
        let shift = space.degree_of(row.idx) as i64 - space.degree_of(col.idx) as i64;
        let b = Band::new(shift, shift);
        band = Some(band.map_or(b, |x| x.hull(&b)));
        parsed.push((row, col, value));
    }
    let band = band.unwrap_or_else(Band::diagonal);
    if (d_in as i64) + band.hi > d_out as i64 {
        return Err(Error::WindowMismatch(format!(
            "output window {d_out} cannot hold the images of degree-{d_in} columns under a band reaching +{}",
            band.hi
        )));
    }
    let mut op = GradedOperator::new(&space, arity_in, arity_out, d_in, d_out, band)?;
    for (row, col, value) in parsed {
        op.insert(row, col, value)?;
    }
    Ok(op)
}

pub fn report_to_json<R>(r: &OperatorReport<R>, show: impl Fn(&R) -> String) -> Value {
    json!({
        "is_zero": r.is_zero,
        "frobenius_sq": show(&r.frobenius_sq),
        "max_degree_checked": r.max_degree_checked,
    })
}

pub fn operator_report_to_json<S: Scalar>(r: &OperatorReport<S::Real>) -> Value {
    report_to_json(r, S::real_to_string)
}

pub fn classification_to_json<S: Scalar>(r: &ClassificationReport<S>) -> Value {
    json!({
        "bh": operator_report_to_json::<S>(&r.bh),
        "symbol": r.symbol.as_ref().map_or(Value::Null, symbol_to_json),
        "toeplitz_match": operator_report_to_json::<S>(&r.toeplitz_match),
        "verdict": r.verdict.as_str(),
    })
}
