//! Finite sets with structured elements, and total maps between them.
//!
//! Elements are addressed by their position in the set's canonical order.
//! Composite sets (products, coproducts, function spaces) compute their
//! element labels on demand from their factors, so a function space is never
//! materialized element by element; its size is still bounded by [`Limits`].

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Resource bounds for function-space carriers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Hard cap on the size of any function space (and of any brute-force
    /// enumeration of map pairs).
    pub cap: u64,
    /// Sizes above this are logged as a warning before proceeding.
    pub warn_at: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            cap: 10_000,
            warn_at: 2_000,
        }
    }
}

impl Limits {
    pub const ENV_VAR: &'static str = "DIALNET_CAP";

    pub fn with_cap(cap: u64) -> Self {
        Limits {
            cap,
            ..Limits::default()
        }
    }

    /// Default limits, with the cap overridden by `DIALNET_CAP` when it is set
    /// to a valid integer.
    pub fn from_env() -> Self {
        match std::env::var(Self::ENV_VAR).ok().and_then(|v| v.trim().parse().ok()) {
            Some(cap) => Limits::with_cap(cap),
            None => Limits::default(),
        }
    }

    pub(crate) fn admit(&self, what: impl FnOnce() -> String, size: Option<u64>) -> Result<u64> {
        match size {
            Some(n) if n <= self.cap => {
                if n > self.warn_at {
                    log::warn!("{} has {} elements (cap {})", what(), n, self.cap);
                }
                Ok(n)
            }
            Some(n) => Err(Error::ResourceLimit {
                what: what(),
                requested: n.to_string(),
                cap: self.cap,
            }),
            None => Err(Error::ResourceLimit {
                what: what(),
                requested: "more than 2^64".into(),
                cap: self.cap,
            }),
        }
    }
}

/// The text used for an element when it appears as a key of a map table.
pub fn key_text(label: &Value) -> String {
    match label {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Debug)]
enum Shape {
    Listed {
        labels: Vec<Value>,
        index: HashMap<String, usize>,
    },
    Product(FinSet, FinSet),
    Coproduct(FinSet, FinSet),
    /// All total maps `exponent → base`.
    Exp {
        base: FinSet,
        exponent: FinSet,
    },
}

#[derive(Debug)]
struct Inner {
    shape: Shape,
    len: usize,
}

/// A finite set with a fixed canonical order.
#[derive(Clone)]
pub struct FinSet(Arc<Inner>);

/// Which summand a coproduct element comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left(usize),
    Right(usize),
}

impl FinSet {
    fn from_shape(shape: Shape, len: usize) -> Self {
        FinSet(Arc::new(Inner { shape, len }))
    }

    /// A set of plain labels, in the given order.
    pub fn atoms<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::listed(names.into_iter().map(|s| Value::String(s.into())).collect())
    }

    /// A set whose elements are arbitrary JSON labels, in the given order.
    pub fn listed(labels: Vec<Value>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(key_text(label), i).is_some() {
                return Err(Error::DuplicateElement(key_text(label)));
            }
        }
        let len = labels.len();
        Ok(Self::from_shape(Shape::Listed { labels, index }, len))
    }

    pub fn empty() -> Self {
        Self::listed(Vec::new()).expect("empty set has no duplicates")
    }

    /// The one-element set `{•}`.
    pub fn singleton() -> Self {
        Self::atoms(["•"]).expect("one element")
    }

    /// `S × T`, ordered lexicographically (first component major).
    pub fn product(s: &FinSet, t: &FinSet) -> Self {
        let len = s.len() * t.len();
        Self::from_shape(Shape::Product(s.clone(), t.clone()), len)
    }

    /// `S + T`: all `inl s` first, then all `inr t`.
    pub fn coproduct(s: &FinSet, t: &FinSet) -> Self {
        let len = s.len() + t.len();
        Self::from_shape(Shape::Coproduct(s.clone(), t.clone()), len)
    }

    /// `S^T`, the set of all total maps `T → S`. Maps are ordered
    /// lexicographically by their table, the image of the first element of
    /// `T` being most significant.
    pub fn exponential(base: &FinSet, exponent: &FinSet, limits: &Limits) -> Result<Self> {
        let size = (base.len() as u64).checked_pow(exponent.len().min(u32::MAX as usize) as u32);
        let size = if exponent.len() > u32::MAX as usize { None } else { size };
        let n = limits.admit(
            || format!("function space of {} elements into {}", exponent.len(), base.len()),
            size,
        )?;
        Ok(Self::from_shape(
            Shape::Exp {
                base: base.clone(),
                exponent: exponent.clone(),
            },
            n as usize,
        ))
    }

    pub fn len(&self) -> usize {
        self.0.len
    }

    pub fn is_empty(&self) -> bool {
        self.0.len == 0
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn is_listed(&self) -> bool {
        matches!(self.0.shape, Shape::Listed { .. })
    }

    pub fn factors(&self) -> Option<(&FinSet, &FinSet)> {
        match &self.0.shape {
            Shape::Product(s, t) => Some((s, t)),
            _ => None,
        }
    }

    pub fn summands(&self) -> Option<(&FinSet, &FinSet)> {
        match &self.0.shape {
            Shape::Coproduct(s, t) => Some((s, t)),
            _ => None,
        }
    }

    /// `(base, exponent)` for a function space.
    pub fn function_space(&self) -> Option<(&FinSet, &FinSet)> {
        match &self.0.shape {
            Shape::Exp { base, exponent } => Some((base, exponent)),
            _ => None,
        }
    }

    fn product_factors(&self) -> (&FinSet, &FinSet) {
        self.factors().expect("not a product set")
    }

    /// Index of the pair `(i, j)` in a product set.
    pub fn pair(&self, i: usize, j: usize) -> usize {
        let (_, t) = self.product_factors();
        i * t.len() + j
    }

    /// Components of element `k` of a product set.
    pub fn unpair(&self, k: usize) -> (usize, usize) {
        let (_, t) = self.product_factors();
        (k / t.len(), k % t.len())
    }

    pub fn inl(&self, i: usize) -> usize {
        debug_assert!(self.summands().is_some());
        i
    }

    pub fn inr(&self, j: usize) -> usize {
        let (s, _) = self.summands().expect("not a coproduct set");
        s.len() + j
    }

    pub fn side(&self, k: usize) -> Side {
        let (s, _) = self.summands().expect("not a coproduct set");
        if k < s.len() {
            Side::Left(k)
        } else {
            Side::Right(k - s.len())
        }
    }

    /// The table of element `k` of a function space `S^T`: entry `t` is the
    /// image of `t`.
    pub fn decode(&self, k: usize) -> Vec<usize> {
        let (base, exponent) = self.function_space().expect("not a function space");
        let b = base.len();
        let mut table = vec![0; exponent.len()];
        let mut rest = k;
        for slot in table.iter_mut().rev() {
            *slot = rest % b;
            rest /= b;
        }
        table
    }

    /// Inverse of [`FinSet::decode`].
    pub fn encode(&self, table: &[usize]) -> usize {
        let (base, exponent) = self.function_space().expect("not a function space");
        debug_assert_eq!(table.len(), exponent.len());
        let b = base.len();
        table.iter().fold(0, |acc, &d| acc * b + d)
    }

    /// All tables of a function space, in canonical order.
    pub fn tables(&self) -> Vec<Vec<usize>> {
        self.indices().map(|k| self.decode(k)).collect()
    }

    /// The structured label of element `i`.
    pub fn label(&self, i: usize) -> Value {
        match &self.0.shape {
            Shape::Listed { labels, .. } => labels[i].clone(),
            Shape::Product(s, t) => {
                let (a, b) = (i / t.len(), i % t.len());
                Value::Array(vec![s.label(a), t.label(b)])
            }
            Shape::Coproduct(s, t) => {
                let mut m = Map::new();
                if i < s.len() {
                    m.insert("inl".into(), s.label(i));
                } else {
                    m.insert("inr".into(), t.label(i - s.len()));
                }
                Value::Object(m)
            }
            Shape::Exp { base, exponent } => {
                let table = self.decode(i);
                let mut m = Map::new();
                for (t, &img) in table.iter().enumerate() {
                    m.insert(key_text(&exponent.label(t)), base.label(img));
                }
                Value::Object(m)
            }
        }
    }

    /// Display text of element `i` (the key form of its label).
    pub fn describe(&self, i: usize) -> String {
        key_text(&self.label(i))
    }

    pub fn labels(&self) -> Vec<Value> {
        self.indices().map(|i| self.label(i)).collect()
    }

    /// Position of the element with the given label.
    pub fn lookup(&self, label: &Value) -> Option<usize> {
        match &self.0.shape {
            Shape::Listed { index, .. } => index.get(&key_text(label)).copied(),
            Shape::Product(s, t) => match label {
                Value::Array(items) if items.len() == 2 => {
                    Some(s.lookup(&items[0])? * t.len() + t.lookup(&items[1])?)
                }
                _ => None,
            },
            Shape::Coproduct(s, t) => match label {
                Value::Object(m) if m.len() == 1 => {
                    if let Some(v) = m.get("inl") {
                        s.lookup(v)
                    } else if let Some(v) = m.get("inr") {
                        Some(s.len() + t.lookup(v)?)
                    } else {
                        None
                    }
                }
                _ => None,
            },
            Shape::Exp { base, exponent } => match label {
                Value::Object(m) if m.len() == exponent.len() => {
                    let mut table = Vec::with_capacity(exponent.len());
                    for t in exponent.indices() {
                        let v = m.get(&exponent.describe(t))?;
                        table.push(base.lookup(v)?);
                    }
                    Some(self.encode(&table))
                }
                _ => None,
            },
        }
    }

    /// Position of the element whose key text is `key`.
    pub fn lookup_key(&self, key: &str) -> Option<usize> {
        match &self.0.shape {
            Shape::Listed { index, .. } => index.get(key).copied(),
            _ => {
                let v: Value = serde_json::from_str(key).ok()?;
                self.lookup(&v)
            }
        }
    }
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.len != other.0.len {
            return false;
        }
        match (&self.0.shape, &other.0.shape) {
            (Shape::Listed { labels: a, .. }, Shape::Listed { labels: b, .. }) => a == b,
            (Shape::Product(a, b), Shape::Product(c, d))
            | (Shape::Coproduct(a, b), Shape::Coproduct(c, d)) => a == c && b == d,
            (
                Shape::Exp {
                    base: a,
                    exponent: b,
                },
                Shape::Exp {
                    base: c,
                    exponent: d,
                },
            ) => a == c && b == d,
            _ => false,
        }
    }
}

impl Eq for FinSet {}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.shape {
            Shape::Listed { labels, .. } => {
                f.debug_set().entries(labels.iter().map(key_text)).finish()
            }
            Shape::Product(s, t) => write!(f, "({s:?} × {t:?})"),
            Shape::Coproduct(s, t) => write!(f, "({s:?} + {t:?})"),
            Shape::Exp { base, exponent } => write!(f, "({base:?} ^ {exponent:?})"),
        }
    }
}

/// A total map between finite sets, stored as a table of image positions.
#[derive(Clone, PartialEq, Eq)]
pub struct FinMap {
    dom: FinSet,
    cod: FinSet,
    table: Vec<usize>,
}

impl FinMap {
    pub fn new(dom: &FinSet, cod: &FinSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.len() {
            return Err(Error::NotTotal(format!(
                "table has {} entries for a domain of {}",
                table.len(),
                dom.len()
            )));
        }
        if let Some((i, &img)) = table.iter().enumerate().find(|(_, &img)| img >= cod.len()) {
            return Err(Error::NotTotal(format!(
                "image {img} of element {} lies outside the codomain",
                dom.describe(i)
            )));
        }
        Ok(FinMap {
            dom: dom.clone(),
            cod: cod.clone(),
            table,
        })
    }

    /// Builds a map from a function on positions. The caller guarantees every
    /// image is a valid codomain position.
    pub(crate) fn from_fn(dom: &FinSet, cod: &FinSet, f: impl FnMut(usize) -> usize) -> Self {
        let table: Vec<usize> = dom.indices().map(f).collect();
        debug_assert!(table.iter().all(|&i| i < cod.len()));
        FinMap {
            dom: dom.clone(),
            cod: cod.clone(),
            table,
        }
    }

    pub fn identity(set: &FinSet) -> Self {
        Self::from_fn(set, set, |i| i)
    }

    pub fn constant(dom: &FinSet, cod: &FinSet, value: usize) -> Result<Self> {
        Self::new(dom, cod, vec![value; dom.len()])
    }

    pub fn domain(&self) -> &FinSet {
        &self.dom
    }

    pub fn codomain(&self) -> &FinSet {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Image of position `x`; `x` must be a valid domain position.
    #[inline]
    pub fn at(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn apply(&self, x: usize) -> Result<usize> {
        self.table.get(x).copied().ok_or_else(|| Error::NotInDomain {
            element: format!("position {x}"),
        })
    }

    pub fn apply_label(&self, label: &Value) -> Result<Value> {
        let x = self.dom.lookup(label).ok_or_else(|| Error::NotInDomain {
            element: key_text(label),
        })?;
        Ok(self.cod.label(self.table[x]))
    }

    /// `g ∘ f`, defined when the codomain of `f` is the domain of `g`.
    pub fn compose(g: &FinMap, f: &FinMap) -> Result<FinMap> {
        if f.cod != g.dom {
            return Err(Error::DomainMismatch(format!(
                "codomain {:?} is not domain {:?}",
                f.cod, g.dom
            )));
        }
        Ok(FinMap {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            table: f.table.iter().map(|&x| g.table[x]).collect(),
        })
    }

    /// Every total map `dom → cod`, in canonical order.
    pub fn all(dom: &FinSet, cod: &FinSet, limits: &Limits) -> Result<Vec<FinMap>> {
        let space = FinSet::exponential(cod, dom, limits)?;
        Ok(space
            .indices()
            .map(|k| FinMap {
                dom: dom.clone(),
                cod: cod.clone(),
                table: space.decode(k),
            })
            .collect())
    }

    /// The map as a JSON object from domain keys to codomain labels.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (x, &y) in self.table.iter().enumerate() {
            m.insert(self.dom.describe(x), self.cod.label(y));
        }
        Value::Object(m)
    }

    /// Reads a map table. Every domain element must appear exactly once.
    pub fn from_json(value: &Value, dom: &FinSet, cod: &FinSet, path: &str) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::schema(path, "map must be a JSON object"))?;
        let mut table = vec![usize::MAX; dom.len()];
        for (key, img) in obj {
            let x = dom.lookup_key(key).ok_or_else(|| {
                Error::schema(format!("{path}.{key}"), "key is not a domain element")
            })?;
            let y = cod.lookup(img).ok_or_else(|| {
                Error::schema(
                    format!("{path}.{key}"),
                    format!("{img} is not a codomain element"),
                )
            })?;
            table[x] = y;
        }
        if let Some(missing) = table.iter().position(|&y| y == usize::MAX) {
            return Err(Error::schema(
                path,
                format!("map is not total: no image for {}", dom.describe(missing)),
            ));
        }
        Ok(FinMap {
            dom: dom.clone(),
            cod: cod.clone(),
            table,
        })
    }
}

impl fmt::Debug for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn set(names: &[&str]) -> FinSet {
        FinSet::atoms(names.iter().copied()).unwrap()
    }

    #[test]
    fn product_examples() {
        let p = FinSet::product(&set(&["a", "b"]), &set(&["x"]));
        assert_eq!(p.labels(), vec![json!(["a", "x"]), json!(["b", "x"])]);
        assert!(FinSet::product(&FinSet::empty(), &set(&["x"])).is_empty());
        let q = FinSet::product(&set(&["a"]), &set(&["x", "y"]));
        assert_eq!(q.labels(), vec![json!(["a", "x"]), json!(["a", "y"])]);
        assert_eq!(q.unpair(q.pair(0, 1)), (0, 1));
    }

    #[test]
    fn coproduct_examples() {
        let c = FinSet::coproduct(&set(&["a"]), &set(&["a"]));
        assert_eq!(c.labels(), vec![json!({"inl": "a"}), json!({"inr": "a"})]);
        let c = FinSet::coproduct(&FinSet::empty(), &set(&["t"]));
        assert_eq!(c.labels(), vec![json!({"inr": "t"})]);
        let c = FinSet::coproduct(&set(&["a", "b"]), &set(&["x"]));
        assert_eq!(c.len(), 3);
        assert_eq!(c.side(2), Side::Right(0));
        assert_eq!(c.lookup(&json!({"inl": "b"})), Some(1));
        assert_eq!(c.lookup(&json!({"inl": "x"})), None);
    }

    #[test]
    fn exponential_examples() {
        let l = Limits::default();
        let e = FinSet::exponential(&set(&["x0", "x1"]), &set(&["v0", "v1"]), &l).unwrap();
        assert_eq!(e.len(), 4);
        assert_eq!(e.label(1), json!({"v0": "x0", "v1": "x1"}));
        assert_eq!(e.lookup(&json!({"v1": "x0", "v0": "x1"})), Some(2));
        let e = FinSet::exponential(&set(&["x0"]), &FinSet::empty(), &l).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.label(0), json!({}));
        let e = FinSet::exponential(&FinSet::empty(), &set(&["v"]), &l).unwrap();
        assert!(e.is_empty());
        let e = FinSet::exponential(&FinSet::empty(), &FinSet::empty(), &l).unwrap();
        assert_eq!(e.len(), 1);
    }

    #[test]
    fn exponential_respects_cap() {
        let big = set(&["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k"]);
        let err = FinSet::exponential(&big, &big, &Limits::default()).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
        let ok = FinSet::exponential(&big, &set(&["p", "q"]), &Limits::with_cap(121));
        assert_eq!(ok.unwrap().len(), 121);
        assert!(FinSet::exponential(&big, &set(&["p", "q"]), &Limits::with_cap(120)).is_err());
    }

    #[test]
    fn enumeration_sizes_match_arithmetic() {
        let l = Limits::default();
        for m in 0..4 {
            for n in 0..4 {
                let s: Vec<String> = (0..m).map(|i| format!("s{i}")).collect();
                let t: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
                let (s, t) = (FinSet::atoms(s).unwrap(), FinSet::atoms(t).unwrap());
                assert_eq!(FinSet::product(&s, &t).len(), m * n);
                assert_eq!(FinSet::coproduct(&s, &t).len(), m + n);
                let maps = FinMap::all(&t, &s, &l).unwrap();
                assert_eq!(maps.len(), m.pow(n as u32));
                // canonical order is strictly increasing by table
                assert!(maps.windows(2).all(|w| w[0].table() < w[1].table()));
            }
        }
    }

    #[test]
    fn duplicates_rejected() {
        assert!(matches!(
            FinSet::atoms(["a", "a"]),
            Err(Error::DuplicateElement(_))
        ));
    }

    #[test]
    fn compose_identity_and_apply() {
        let s = set(&["a", "b"]);
        let t = set(&["x", "y", "z"]);
        let f = FinMap::new(&s, &t, vec![2, 0]).unwrap();
        assert_eq!(FinMap::compose(&f, &FinMap::identity(&s)).unwrap(), f);
        assert_eq!(FinMap::compose(&FinMap::identity(&t), &f).unwrap(), f);
        assert_eq!(FinMap::identity(&t).apply(1).unwrap(), 1);
        assert!(matches!(f.apply(5), Err(Error::NotInDomain { .. })));
        assert_eq!(f.apply_label(&json!("a")).unwrap(), json!("z"));
        assert!(FinMap::compose(&f, &f).is_err());

        let c1 = FinMap::constant(&s, &t, 1).unwrap();
        let c2 = FinMap::constant(&t, &s, 0).unwrap();
        let c = FinMap::compose(&c2, &c1).unwrap();
        assert_eq!(c, FinMap::constant(&s, &s, 0).unwrap());
    }

    #[test]
    fn compose_is_associative_on_small_sets() {
        let l = Limits::default();
        let sets: Vec<FinSet> = (0..=3)
            .map(|n| FinSet::atoms((0..n).map(|i| format!("e{i}"))).unwrap())
            .collect();
        for a in &sets {
            for b in &sets {
                for c in &sets {
                    let fs = FinMap::all(a, b, &l).unwrap();
                    let gs = FinMap::all(b, c, &l).unwrap();
                    let hs = FinMap::all(c, a, &l).unwrap();
                    for f in &fs {
                        assert_eq!(FinMap::compose(&FinMap::identity(b), f).unwrap(), *f);
                        assert_eq!(FinMap::compose(f, &FinMap::identity(a)).unwrap(), *f);
                        for g in &gs {
                            let gf = FinMap::compose(g, f).unwrap();
                            for h in &hs {
                                let left = FinMap::compose(h, &gf).unwrap();
                                let right =
                                    FinMap::compose(&FinMap::compose(h, g).unwrap(), f).unwrap();
                                assert_eq!(left, right);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn map_json_round_trip_on_structured_domain() {
        let l = Limits::default();
        let u = set(&["u0", "u1"]);
        let v = set(&["v"]);
        let uv = FinSet::product(&u, &v);
        let fs = FinSet::exponential(&v, &u, &l).unwrap();
        let f = FinMap::new(&uv, &fs, vec![0, 0]).unwrap();
        let j = f.to_json();
        assert_eq!(
            j,
            json!({"[\"u0\",\"v\"]": {"u0": "v", "u1": "v"}, "[\"u1\",\"v\"]": {"u0": "v", "u1": "v"}})
        );
        assert_eq!(FinMap::from_json(&j, &uv, &fs, "f").unwrap(), f);
        assert!(FinMap::from_json(&json!({}), &uv, &fs, "f").is_err());
    }
}
