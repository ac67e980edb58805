//! JSON and CSV views of an intersection lattice, and JSON import.

use std::sync::Arc;

use coxstrata::{CartanType, IntersectionLattice, RootSet, RootSystem};
use serde_json::{json, Value};

use crate::CliError;

fn flat_type(lat: &IntersectionLattice, s: RootSet) -> String {
    lat.root_system()
        .classify_subsystem(s)
        .map(|t| t.to_string())
        .unwrap_or_else(|e| format!("unclassified: {e}"))
}

pub fn to_json(lat: &IntersectionLattice) -> Value {
    let rs = lat.root_system();
    let flats: Vec<Value> = lat
        .flats()
        .iter()
        .enumerate()
        .map(|(id, f)| {
            json!({
                "id": id,
                "rank": f.rank,
                "positive_roots": f.subsystem.iter().collect::<Vec<_>>(),
                "cartan_type": flat_type(lat, f.subsystem),
            })
        })
        .collect();
    let covers: Vec<Value> = lat
        .covers()
        .unwrap_or(&[])
        .iter()
        .map(|&(lo, hi)| json!([lo, hi]))
        .collect();
    json!({
        "type": rs.ctype().to_string(),
        "rank": rs.rank(),
        "d": rs.num_positive(),
        "flats": flats,
        "covers": covers,
    })
}

pub fn to_csv(lat: &IntersectionLattice) -> String {
    let mut out = String::from("id,rank,cartan_type,positive_roots\n");
    for (id, f) in lat.flats().iter().enumerate() {
        let roots: Vec<String> = f.subsystem.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!(
            "{id},{},{},{}\n",
            f.rank,
            flat_type(lat, f.subsystem),
            roots.join(" ")
        ));
    }
    out
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Usage(format!("malformed lattice JSON: {}", msg.into()))
}

fn as_index(v: &Value) -> Result<usize, CliError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| bad(format!("expected an index, found {v}")))
}

/// Rebuilds a lattice from [`to_json`] output. Flats must be listed in
/// canonical id order and be span-closed.
pub fn from_json(v: &Value) -> Result<IntersectionLattice, CliError> {
    let ctype: CartanType = v["type"]
        .as_str()
        .ok_or_else(|| bad("missing type"))?
        .parse()?;
    let rs = Arc::new(RootSystem::build(&ctype)?);
    if v["d"].as_u64() != Some(rs.num_positive() as u64) {
        return Err(bad("root count does not match the type"));
    }
    let flats = v["flats"].as_array().ok_or_else(|| bad("missing flats"))?;
    let mut keys = Vec::with_capacity(flats.len());
    for (n, f) in flats.iter().enumerate() {
        if f["id"].as_u64() != Some(n as u64) {
            return Err(bad(format!("flat {n} is out of order")));
        }
        let roots = f["positive_roots"]
            .as_array()
            .ok_or_else(|| bad("missing positive_roots"))?;
        let mut key = RootSet::EMPTY;
        for r in roots {
            let i = as_index(r)?;
            if i >= rs.num_positive() {
                return Err(bad(format!("root {i} out of range")));
            }
            key.insert(i);
        }
        if rs.closure(key) != key {
            return Err(bad(format!("flat {n} is not span-closed")));
        }
        keys.push(key);
    }
    let covers = match v["covers"].as_array() {
        Some(c) if !c.is_empty() => Some(
            c.iter()
                .map(|pair| match pair.as_array().map(Vec::as_slice) {
                    Some([a, b]) => Ok((as_index(a)?, as_index(b)?)),
                    _ => Err(bad("covers must be pairs")),
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
        _ => None,
    };
    let lat = IntersectionLattice::from_parts(rs, keys.clone(), covers)?;
    if lat.flats().iter().map(|f| f.subsystem).ne(keys) {
        return Err(bad("flats are not in canonical order"));
    }
    Ok(lat)
}
