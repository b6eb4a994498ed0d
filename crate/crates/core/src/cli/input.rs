//! Pants-complex documents (TOML).
//!
//! ```toml
//! schema_version = 1
//! [[pants]]
//! id = "P"
//! [[curves]]
//! a = { pants = "P", slot = 2 }
//! b = { pants = "P", slot = 3 }
//! length = 2.0
//! twist = 0.0
//! [[free]]
//! pants = "P"
//! slot = 1
//! length = 1.0
//! [[sequence]]          # optional, one block per term
//! lengths = [2.5]
//! twists = [0.0]
//! free = [1.0]          # optional, defaults to the target's
//! ```
//!
//! Slots are numbered 1 to 3. `free` lists every unglued slot exactly once.

use crate::error::{Error, Result};
use crate::teich::{FNPoint, Gluing, PantsComplex, Slot};
use toml::{Table, Value};

pub const SCHEMA_VERSION: i64 = 1;

#[derive(Debug, Clone)]
pub struct PantsDocument {
    pub ids: Vec<String>,
    pub complex: PantsComplex,
    pub target: FNPoint,
    pub sequence: Vec<FNPoint>,
    /// free slots in file order; `target.free` is in the complex's order
    pub free_listing: Vec<Slot>,
}

impl PantsDocument {
    pub fn slot_label(&self, s: Slot) -> String {
        format!("{}/{}", self.ids[s.pants], s.index + 1)
    }
}

fn err(path: &str, msg: impl Into<String>) -> Error {
    Error::schema(path, msg)
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn check_keys(t: &Table, path: &str, allowed: &[&str]) -> Result<()> {
    match t.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(err(&join(path, k), "unknown field")),
        None => Ok(()),
    }
}

fn field<'a>(t: &'a Table, path: &str, key: &str) -> Result<&'a Value> {
    t.get(key).ok_or_else(|| err(&join(path, key), "missing field"))
}

fn as_table<'a>(v: &'a Value, path: &str) -> Result<&'a Table> {
    v.as_table().ok_or_else(|| err(path, format!("expected a table, found {}", v.type_str())))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, format!("expected an array, found {}", v.type_str())))
}

fn as_f64(v: &Value, path: &str) -> Result<f64> {
    let x = match v {
        Value::Float(f) => *f,
        Value::Integer(i) => *i as f64,
        other => return Err(err(path, format!("expected a number, found {}", other.type_str()))),
    };
    if !x.is_finite() {
        return Err(err(path, "must be finite"));
    }
    Ok(x)
}

fn as_length(v: &Value, path: &str) -> Result<f64> {
    let x = as_f64(v, path)?;
    if x < 0.0 {
        return Err(err(path, format!("length {x} is negative")));
    }
    Ok(x)
}

fn numbers(v: &Value, path: &str, n: usize, length: bool) -> Result<Vec<f64>> {
    let a = as_array(v, path)?;
    if a.len() != n {
        return Err(err(path, format!("expected {n} entries, found {}", a.len())));
    }
    a.iter()
        .enumerate()
        .map(|(k, x)| {
            let p = format!("{path}[{k}]");
            if length {
                as_length(x, &p)
            } else {
                as_f64(x, &p)
            }
        })
        .collect()
}

fn blocks<'a>(doc: &'a Table, key: &str) -> Result<Vec<(&'a Table, String)>> {
    match doc.get(key) {
        None => Ok(Vec::new()),
        Some(v) => as_array(v, key)?
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let p = format!("{key}[{k}]");
                Ok((as_table(b, &p)?, p))
            })
            .collect(),
    }
}

fn slot_ref(t: &Table, path: &str, ids: &[String]) -> Result<Slot> {
    let pp = join(path, "pants");
    let id = field(t, path, "pants")?.as_str().ok_or_else(|| err(&pp, "expected a string pants id"))?;
    let pants = ids.iter().position(|i| i == id).ok_or_else(|| err(&pp, format!("no pants with id {id:?}")))?;
    let sp = join(path, "slot");
    let slot = match field(t, path, "slot")? {
        Value::Integer(i) if (1..=3).contains(i) => *i as usize - 1,
        Value::Integer(i) => return Err(err(&sp, format!("slot {i} outside 1..=3"))),
        other => return Err(err(&sp, format!("expected an integer, found {}", other.type_str()))),
    };
    Ok(Slot::new(pants, slot))
}

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

pub fn parse_pants_document(src: &str) -> Result<PantsDocument> {
    let doc: Table = src.parse().map_err(|e: toml::de::Error| {
        let line = e.span().map(|s| line_of(src, s.start)).unwrap_or(1);
        err(&format!("line {line}"), e.message().to_string())
    })?;
    check_keys(&doc, "", &["schema_version", "pants", "curves", "free", "sequence"])?;
    match field(&doc, "", "schema_version")? {
        Value::Integer(SCHEMA_VERSION) => {}
        Value::Integer(v) => return Err(err("schema_version", format!("unsupported version {v}"))),
        other => return Err(err("schema_version", format!("expected an integer, found {}", other.type_str()))),
    }

    let mut ids: Vec<String> = Vec::new();
    for (t, p) in blocks(&doc, "pants")? {
        check_keys(t, &p, &["id"])?;
        let ip = join(&p, "id");
        let id = field(t, &p, "id")?.as_str().ok_or_else(|| err(&ip, "expected a string"))?;
        if id.is_empty() {
            return Err(err(&ip, "empty id"));
        }
        if ids.iter().any(|i| i == id) {
            return Err(err(&ip, format!("duplicate id {id:?}")));
        }
        ids.push(id.to_string());
    }
    if ids.is_empty() {
        return Err(err("pants", "at least one pants is required"));
    }

    let mut used: Vec<[Option<String>; 3]> = vec![Default::default(); ids.len()];
    let mut claim = |s: Slot, path: String| -> Result<()> {
        if let Some(prev) = &used[s.pants][s.index] {
            return Err(err(&path, format!("slot already used at {prev}")));
        }
        used[s.pants][s.index] = Some(path);
        Ok(())
    };

    let mut gluings = Vec::new();
    let mut lengths = Vec::new();
    let mut twists = Vec::new();
    for (t, p) in blocks(&doc, "curves")? {
        check_keys(t, &p, &["a", "b", "length", "twist"])?;
        let (ap, bp) = (join(&p, "a"), join(&p, "b"));
        let (at, bt) = (as_table(field(t, &p, "a")?, &ap)?, as_table(field(t, &p, "b")?, &bp)?);
        check_keys(at, &ap, &["pants", "slot"])?;
        check_keys(bt, &bp, &["pants", "slot"])?;
        let a = slot_ref(at, &ap, &ids)?;
        let b = slot_ref(bt, &bp, &ids)?;
        claim(a, ap)?;
        claim(b, bp)?;
        gluings.push(Gluing { a, b });
        lengths.push(as_length(field(t, &p, "length")?, &join(&p, "length"))?);
        twists.push(match t.get("twist") {
            Some(v) => as_f64(v, &join(&p, "twist"))?,
            None => 0.0,
        });
    }

    let mut listing = Vec::new();
    let mut free_lengths = Vec::new();
    for (t, p) in blocks(&doc, "free")? {
        check_keys(t, &p, &["pants", "slot", "length"])?;
        let s = slot_ref(t, &p, &ids)?;
        claim(s, p.clone())?;
        listing.push(s);
        free_lengths.push(as_length(field(t, &p, "length")?, &join(&p, "length"))?);
    }
    for (pi, u) in used.iter().enumerate() {
        if let Some(k) = u.iter().position(|x| x.is_none()) {
            return Err(err("free", format!("slot {}/{} is neither glued nor listed", ids[pi], k + 1)));
        }
    }

    let complex = PantsComplex::new(ids.len(), gluings).map_err(|e| match e {
        Error::Structure(m) => err("curves", m),
        other => other,
    })?;
    // file order -> the complex's pants-major order
    let reorder = |v: &[f64]| -> Vec<f64> {
        complex.free_slots().iter().map(|s| v[listing.iter().position(|l| l == s).expect("listed")]).collect()
    };
    let target = FNPoint::new(lengths, twists, reorder(&free_lengths));

    let mut sequence = Vec::new();
    for (t, p) in blocks(&doc, "sequence")? {
        check_keys(t, &p, &["lengths", "twists", "free"])?;
        let n = complex.n_curves();
        let l = numbers(field(t, &p, "lengths")?, &join(&p, "lengths"), n, true)?;
        let tw = match t.get("twists") {
            Some(v) => numbers(v, &join(&p, "twists"), n, false)?,
            None => vec![0.0; n],
        };
        let f = match t.get("free") {
            Some(v) => reorder(&numbers(v, &join(&p, "free"), listing.len(), true)?),
            None => target.free.clone(),
        };
        sequence.push(FNPoint::new(l, tw, f));
    }

    Ok(PantsDocument { ids, complex, target, sequence, free_listing: listing })
}
