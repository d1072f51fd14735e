//! Desk-scale verification of the monoidal closed structure, products and
//! coproducts, by enumeration over small objects.
//!
//! Every law is written once against [`LawCategory`] and run on Dialectica
//! objects in both orientations and on fuzzy nets. Each law picks the largest
//! object pool whose tuples fit in the exhaustive budget (all objects, then
//! isomorphism-class representatives, then objects with carriers of size at
//! most one) and adds seeded random instances drawn from all objects.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dialectica::{self, DialMorphism, DialObject, HomRule};
use crate::error::{Error, Result};
use crate::finset::{FinSet, Limits};
use crate::fnets::{self, FuzzyNet, NetMorphism};
use crate::io;
use crate::lineale::{co_implies, implies, join, meet, Degree, Orientation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteMode {
    /// Exhaustive pools plus random supplements.
    Exhaustive,
    /// Random instances only.
    Randomized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    DialStandard,
    DialOpposite,
    Nets,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::DialStandard, Family::DialOpposite, Family::Nets];

    pub fn name(self) -> &'static str {
        match self {
            Family::DialStandard => "dial-standard",
            Family::DialOpposite => "dial-opposite",
            Family::Nets => "nets",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawSuiteConfig {
    pub max_carrier_size: usize,
    pub grid: Vec<Degree>,
    pub seed: u64,
    pub mode: SuiteMode,
    /// Random instances per law.
    pub samples: usize,
    /// Largest number of object tuples a law may check exhaustively.
    pub exhaustive_budget: u64,
    pub cap: u64,
    pub hom_rule: HomRule,
    /// Only laws whose names appear here; all laws when empty.
    pub laws: Vec<String>,
    pub families: Vec<Family>,
}

impl Default for LawSuiteConfig {
    fn default() -> Self {
        LawSuiteConfig {
            max_carrier_size: 2,
            grid: vec![Degree::ZERO, Degree::new(1, 2).expect("1/2"), Degree::ONE],
            seed: 0,
            mode: SuiteMode::Exhaustive,
            samples: 200,
            exhaustive_budget: 200_000,
            cap: Limits::default().cap,
            hom_rule: HomRule::Residual,
            laws: Vec::new(),
            families: Family::ALL.to_vec(),
        }
    }
}

impl LawSuiteConfig {
    /// The suite builds many large carriers on purpose; only the cap applies.
    fn limits(&self) -> Limits {
        Limits {
            cap: self.cap,
            warn_at: self.cap,
        }
    }

    fn wants(&self, law: &str) -> bool {
        self.laws.is_empty() || self.laws.iter().any(|l| l == law)
    }
}

pub const LAW_NAMES: [&str; 12] = [
    "identity",
    "composition",
    "tensor-functor",
    "tensor-interchange",
    "unitors",
    "symmetry",
    "associator",
    "adjunction",
    "product",
    "coproduct",
    "fibre-decomposition",
    "crisp-closure",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawResult {
    pub law: String,
    pub arity: usize,
    /// `all`, `representatives`, `tiny`, or `none`.
    pub exhaustive_pool: &'static str,
    pub exhaustive_instances: u64,
    pub sampled_instances: u64,
    /// Morphism-level assertions made.
    pub checks: u64,
    pub failures: u64,
    pub counterexample: Option<Value>,
}

impl LawResult {
    pub fn instances(&self) -> u64 {
        self.exhaustive_instances + self.sampled_instances
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub family: &'static str,
    pub objects: usize,
    pub representatives: usize,
    pub tiny: usize,
    pub laws: Vec<LawResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub config: LawSuiteConfig,
    pub families: Vec<FamilyReport>,
    pub warnings: Vec<String>,
    pub passed: bool,
}

impl LawReport {
    pub fn law(&self, family: Family, law: &str) -> Option<&LawResult> {
        self.families
            .iter()
            .find(|f| f.family == family.name())?
            .laws
            .iter()
            .find(|l| l.law == law)
    }
}

/// A law either holds on an instance, fails with a counterexample, or cannot
/// be evaluated within the resource limits.
enum Breach {
    Limit(Error),
    Counterexample(Value),
}

impl From<Error> for Breach {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit { .. } => Breach::Limit(e),
            other => Breach::Counterexample(json!({ "error": other.to_string() })),
        }
    }
}

impl Breach {
    fn with(self, key: &str, value: Value) -> Self {
        match self {
            Breach::Counterexample(Value::Object(mut m)) => {
                m.insert(key.to_string(), value);
                Breach::Counterexample(Value::Object(m))
            }
            other => other,
        }
    }
}

type Step<T> = std::result::Result<T, Breach>;

fn ensure(ok: bool, reason: impl FnOnce() -> Value) -> Step<()> {
    if ok {
        Ok(())
    } else {
        Err(Breach::Counterexample(reason()))
    }
}

/// Morphism choice: every morphism of a hom-set, or one at random.
enum Pick<'a> {
    All,
    One(&'a mut ChaCha8Rng),
}

impl Pick<'_> {
    fn choose<M>(&mut self, mut v: Vec<M>) -> Vec<M> {
        match self {
            Pick::All => v,
            Pick::One(_) if v.is_empty() => v,
            Pick::One(rng) => {
                let i = rng.random_range(0..v.len());
                vec![v.swap_remove(i)]
            }
        }
    }
}

/// The structure the law suite needs from a category.
pub trait LawCategory {
    type Obj: Clone;
    type Mor: Clone + PartialEq;

    fn obj_json(&self, a: &Self::Obj) -> Value;
    fn mor_json(&self, m: &Self::Mor) -> Value;
    fn source(&self, m: &Self::Mor) -> Self::Obj;
    fn target(&self, m: &Self::Mor) -> Self::Obj;
    /// Re-checks the defining inequality from scratch.
    fn is_valid(&self, m: &Self::Mor) -> Result<bool>;
    fn identity(&self, a: &Self::Obj) -> Self::Mor;
    fn then(&self, m: &Self::Mor, n: &Self::Mor) -> Result<Self::Mor>;
    fn hom(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Vec<Self::Mor>>;
    fn hom_count(&self, a: &Self::Obj, b: &Self::Obj) -> Result<u64>;
    fn tensor(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Self::Obj>;
    fn tensor_map(&self, m: &Self::Mor, n: &Self::Mor) -> Result<Self::Mor>;
    fn left_unitor(&self, a: &Self::Obj) -> Result<(Self::Mor, Self::Mor)>;
    fn right_unitor(&self, a: &Self::Obj) -> Result<(Self::Mor, Self::Mor)>;
    fn symmetry(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Self::Mor>;
    fn associator(&self, a: &Self::Obj, b: &Self::Obj, c: &Self::Obj) -> Result<(Self::Mor, Self::Mor)>;
    fn internal_hom(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Self::Obj>;
    fn curry(&self, m: &Self::Mor) -> Result<Self::Mor>;
    fn uncurry(&self, m: &Self::Mor) -> Result<Self::Mor>;
    fn projections(&self, a: &Self::Obj, b: &Self::Obj) -> Result<(Self::Mor, Self::Mor)>;
    fn pairing(&self, m: &Self::Mor, n: &Self::Mor) -> Result<Self::Mor>;
    fn injections(&self, a: &Self::Obj, b: &Self::Obj) -> Result<(Self::Mor, Self::Mor)>;
    fn copairing(&self, m: &Self::Mor, n: &Self::Mor) -> Result<Self::Mor>;

    /// Laws specific to this category.
    fn extra_laws(&self) -> Vec<Law<Self>>
    where
        Self: Sized,
    {
        Vec::new()
    }
}

type CheckFn<C> = fn(&C, &[<C as LawCategory>::Obj], &mut Pick) -> Step<u64>;

pub struct Law<C: LawCategory> {
    name: &'static str,
    arity: usize,
    check: CheckFn<C>,
}

fn generic_laws<C: LawCategory>() -> Vec<Law<C>> {
    vec![
        Law { name: "identity", arity: 2, check: law_identity },
        Law { name: "composition", arity: 4, check: law_composition },
        Law { name: "tensor-functor", arity: 4, check: law_tensor_functor },
        Law { name: "tensor-interchange", arity: 6, check: law_interchange },
        Law { name: "unitors", arity: 1, check: law_unitors },
        Law { name: "symmetry", arity: 2, check: law_symmetry },
        Law { name: "associator", arity: 3, check: law_associator },
        Law { name: "adjunction", arity: 3, check: law_adjunction },
        Law { name: "product", arity: 3, check: law_product },
        Law { name: "coproduct", arity: 3, check: law_coproduct },
    ]
}

fn valid<C: LawCategory>(c: &C, m: &C::Mor, what: &str) -> Step<()> {
    ensure(c.is_valid(m)?, || json!({ "reason": format!("{what} is not a valid morphism"), "morphism": c.mor_json(m) }))
}

fn inverse_pair<C: LawCategory>(c: &C, to: &C::Mor, from: &C::Mor, what: &str) -> Step<u64> {
    valid(c, to, what)?;
    valid(c, from, what)?;
    let there = c.then(to, from)?;
    ensure(there == c.identity(&c.source(to)), || json!({ "reason": format!("{what} followed by its inverse is not the identity") }))?;
    let back = c.then(from, to)?;
    ensure(back == c.identity(&c.source(from)), || json!({ "reason": format!("inverse of {what} followed by it is not the identity") }))?;
    Ok(4)
}

fn law_identity<C: LawCategory>(c: &C, t: &[C::Obj], pick: &mut Pick) -> Step<u64> {
    let (a, b) = (&t[0], &t[1]);
    let (ia, ib) = (c.identity(a), c.identity(b));
    valid(c, &ia, "identity")?;
    let mut checks = 1;
    for m in pick.choose(c.hom(a, b)?) {
        let l = c.then(&ia, &m)?;
        let r = c.then(&m, &ib)?;
        ensure(l == m && r == m, || json!({ "reason": "identity is not neutral", "morphism": c.mor_json(&m) }))?;
        checks += 1;
    }
    Ok(checks)
}

fn law_composition<C: LawCategory>(c: &C, t: &[C::Obj], pick: &mut Pick) -> Step<u64> {
    let h1 = pick.choose(c.hom(&t[0], &t[1])?);
    let h2 = pick.choose(c.hom(&t[1], &t[2])?);
    let h3 = pick.choose(c.hom(&t[2], &t[3])?);
    let mut checks = 0;
    for m1 in &h1 {
        for m2 in &h2 {
            let m12 = c.then(m1, m2)?;
            valid(c, &m12, "composite")?;
            for m3 in &h3 {
                let lhs = c.then(&m12, m3)?;
                let rhs = c.then(m1, &c.then(m2, m3)?)?;
                ensure(lhs == rhs, || {
                    json!({
                        "reason": "composition is not associative",
                        "morphisms": [c.mor_json(m1), c.mor_json(m2), c.mor_json(m3)],
                    })
                })?;
                checks += 1;
            }
        }
    }
    Ok(checks)
}

fn law_tensor_functor<C: LawCategory>(c: &C, t: &[C::Obj], pick: &mut Pick) -> Step<u64> {
    let (a, a2, b, b2) = (&t[0], &t[1], &t[2], &t[3]);
    let ids = c.tensor_map(&c.identity(a), &c.identity(b))?;
    ensure(ids == c.identity(&c.tensor(a, b)?), || json!({ "reason": "tensor of identities is not the identity" }))?;
    let mut checks = 1;
    let hn = pick.choose(c.hom(b, b2)?);
    for m in pick.choose(c.hom(a, a2)?) {
        for n in &hn {
            let tm = c.tensor_map(&m, n).map_err(|e| Breach::from(e).with("morphisms", json!([c.mor_json(&m), c.mor_json(n)])))?;
            valid(c, &tm, "tensor of morphisms")?;
            checks += 1;
        }
    }
    Ok(checks)
}

fn law_interchange<C: LawCategory>(c: &C, t: &[C::Obj], pick: &mut Pick) -> Step<u64> {
    let m1s = pick.choose(c.hom(&t[0], &t[1])?);
    let m2s = pick.choose(c.hom(&t[1], &t[2])?);
    let n1s = pick.choose(c.hom(&t[3], &t[4])?);
    let n2s = pick.choose(c.hom(&t[4], &t[5])?);
    let mut checks = 0;
    for m1 in &m1s {
        for m2 in &m2s {
            let m12 = c.then(m1, m2)?;
            for n1 in &n1s {
                for n2 in &n2s {
                    let lhs = c.tensor_map(&m12, &c.then(n1, n2)?)?;
                    let rhs = c.then(&c.tensor_map(m1, n1)?, &c.tensor_map(m2, n2)?)?;
                    ensure(lhs == rhs, || {
                        json!({
                            "reason": "tensor does not preserve composition",
                            "morphisms": [c.mor_json(m1), c.mor_json(m2), c.mor_json(n1), c.mor_json(n2)],
                        })
                    })?;
                    checks += 1;
                }
            }
        }
    }
    Ok(checks)
}

fn law_unitors<C: LawCategory>(c: &C, t: &[C::Obj], _: &mut Pick) -> Step<u64> {
    let (l, l_inv) = c.left_unitor(&t[0])?;
    let (r, r_inv) = c.right_unitor(&t[0])?;
    Ok(inverse_pair(c, &l, &l_inv, "left unitor")? + inverse_pair(c, &r, &r_inv, "right unitor")?)
}

fn law_symmetry<C: LawCategory>(c: &C, t: &[C::Obj], _: &mut Pick) -> Step<u64> {
    let s = c.symmetry(&t[0], &t[1])?;
    let s_back = c.symmetry(&t[1], &t[0])?;
    inverse_pair(c, &s, &s_back, "symmetry")
}

fn law_associator<C: LawCategory>(c: &C, t: &[C::Obj], _: &mut Pick) -> Step<u64> {
    let (fwd, back) = c.associator(&t[0], &t[1], &t[2])?;
    inverse_pair(c, &fwd, &back, "associator")
}

fn law_adjunction<C: LawCategory>(c: &C, t: &[C::Obj], pick: &mut Pick) -> Step<u64> {
    let (a, b, z) = (&t[0], &t[1], &t[2]);
    let ab = c.tensor(a, b)?;
    let bz = c.internal_hom(b, z)?;
    let lhs = c.hom(&ab, z)?;
    let rhs = c.hom_count(a, &bz)?;
    let n = lhs.len() as u64;
    ensure(n == rhs, || {
        json!({
            "reason": "|Hom(A⊗B, C)| differs from |Hom(A, B⊸C)|",
            "tensor_side": n,
            "hom_side": rhs,
        })
    })?;
    let mut checks = 1;
    for m in pick.choose(lhs) {
        let m_json = || c.mor_json(&m);
        let k = c.curry(&m).map_err(|e| Breach::from(e).with("morphism", m_json()))?;
        let back = c.uncurry(&k).map_err(|e| Breach::from(e).with("morphism", m_json()))?;
        ensure(back == m, || json!({ "reason": "uncurry(curry(m)) differs from m", "morphism": m_json() }))?;
        checks += 1;
    }
    Ok(checks)
}

fn law_product<C: LawCategory>(c: &C, t: &[C::Obj], pick: &mut Pick) -> Step<u64> {
    let (a, b, z) = (&t[0], &t[1], &t[2]);
    let (p1, p2) = c.projections(a, b)?;
    valid(c, &p1, "first projection")?;
    valid(c, &p2, "second projection")?;
    let p = c.source(&p1);
    let into = c.hom(z, &p)?;
    let pairs = c.hom_count(z, a)? * c.hom_count(z, b)?;
    ensure(into.len() as u64 == pairs, || {
        json!({ "reason": "|Hom(C, A×B)| differs from |Hom(C, A)|·|Hom(C, B)|", "product_side": into.len(), "pairs": pairs })
    })?;
    let mut checks = 1;
    for h in pick.choose(into) {
        let (x, y) = (c.then(&h, &p1)?, c.then(&h, &p2)?);
        ensure(c.pairing(&x, &y)? == h, || json!({ "reason": "pairing of projections differs", "morphism": c.mor_json(&h) }))?;
        checks += 1;
    }
    Ok(checks)
}

fn law_coproduct<C: LawCategory>(c: &C, t: &[C::Obj], pick: &mut Pick) -> Step<u64> {
    let (a, b, z) = (&t[0], &t[1], &t[2]);
    let (i1, i2) = c.injections(a, b)?;
    valid(c, &i1, "first injection")?;
    valid(c, &i2, "second injection")?;
    let s = c.target(&i1);
    let out = c.hom(&s, z)?;
    let pairs = c.hom_count(a, z)? * c.hom_count(b, z)?;
    ensure(out.len() as u64 == pairs, || {
        json!({ "reason": "|Hom(A+B, C)| differs from |Hom(A, C)|·|Hom(B, C)|", "coproduct_side": out.len(), "pairs": pairs })
    })?;
    let mut checks = 1;
    for h in pick.choose(out) {
        let (x, y) = (c.then(&i1, &h)?, c.then(&i2, &h)?);
        ensure(c.copairing(&x, &y)? == h, || json!({ "reason": "copairing of injections differs", "morphism": c.mor_json(&h) }))?;
        checks += 1;
    }
    Ok(checks)
}

/// Dialectica objects of one orientation.
pub struct DialCat {
    pub orientation: Orientation,
    pub limits: Limits,
    pub rule: HomRule,
}

impl LawCategory for DialCat {
    type Obj = DialObject;
    type Mor = DialMorphism;

    fn obj_json(&self, a: &DialObject) -> Value {
        io::object_to_json(a)
    }
    fn mor_json(&self, m: &DialMorphism) -> Value {
        io::morphism_to_json(m)
    }
    fn source(&self, m: &DialMorphism) -> DialObject {
        m.source().clone()
    }
    fn target(&self, m: &DialMorphism) -> DialObject {
        m.target().clone()
    }
    fn is_valid(&self, m: &DialMorphism) -> Result<bool> {
        Ok(dialectica::check_morphism(m.source(), m.target(), m.f(), m.g())?.is_valid())
    }
    fn identity(&self, a: &DialObject) -> DialMorphism {
        DialMorphism::identity(a)
    }
    fn then(&self, m: &DialMorphism, n: &DialMorphism) -> Result<DialMorphism> {
        dialectica::compose(m, n)
    }
    fn hom(&self, a: &DialObject, b: &DialObject) -> Result<Vec<DialMorphism>> {
        dialectica::enumerate_morphisms(a, b, &self.limits)
    }
    fn hom_count(&self, a: &DialObject, b: &DialObject) -> Result<u64> {
        dialectica::count_morphisms(a, b, &self.limits)
    }
    fn tensor(&self, a: &DialObject, b: &DialObject) -> Result<DialObject> {
        dialectica::tensor(a, b, &self.limits)
    }
    fn tensor_map(&self, m: &DialMorphism, n: &DialMorphism) -> Result<DialMorphism> {
        dialectica::tensor_map(m, n, &self.limits)
    }
    fn left_unitor(&self, a: &DialObject) -> Result<(DialMorphism, DialMorphism)> {
        dialectica::left_unitor(a, &self.limits)
    }
    fn right_unitor(&self, a: &DialObject) -> Result<(DialMorphism, DialMorphism)> {
        dialectica::right_unitor(a, &self.limits)
    }
    fn symmetry(&self, a: &DialObject, b: &DialObject) -> Result<DialMorphism> {
        dialectica::symmetry(a, b, &self.limits)
    }
    fn associator(&self, a: &DialObject, b: &DialObject, c: &DialObject) -> Result<(DialMorphism, DialMorphism)> {
        dialectica::associator(a, b, c, &self.limits)
    }
    fn internal_hom(&self, a: &DialObject, b: &DialObject) -> Result<DialObject> {
        dialectica::internal_hom_with_rule(a, b, &self.limits, self.rule)
    }
    fn curry(&self, m: &DialMorphism) -> Result<DialMorphism> {
        dialectica::curry_with_rule(m, &self.limits, self.rule)
    }
    fn uncurry(&self, m: &DialMorphism) -> Result<DialMorphism> {
        dialectica::uncurry(m, &self.limits)
    }
    fn projections(&self, a: &DialObject, b: &DialObject) -> Result<(DialMorphism, DialMorphism)> {
        dialectica::projections(a, b)
    }
    fn pairing(&self, m: &DialMorphism, n: &DialMorphism) -> Result<DialMorphism> {
        dialectica::pairing(m, n)
    }
    fn injections(&self, a: &DialObject, b: &DialObject) -> Result<(DialMorphism, DialMorphism)> {
        dialectica::injections(a, b)
    }
    fn copairing(&self, m: &DialMorphism, n: &DialMorphism) -> Result<DialMorphism> {
        dialectica::copairing(m, n)
    }
}

/// Fuzzy nets with simulations.
pub struct NetCat {
    pub limits: Limits,
    pub rule: HomRule,
}

impl LawCategory for NetCat {
    type Obj = FuzzyNet;
    type Mor = NetMorphism;

    fn obj_json(&self, n: &FuzzyNet) -> Value {
        io::net_to_json(n)
    }
    fn mor_json(&self, m: &NetMorphism) -> Value {
        io::net_morphism_to_json(m)
    }
    fn source(&self, m: &NetMorphism) -> FuzzyNet {
        m.source().clone()
    }
    fn target(&self, m: &NetMorphism) -> FuzzyNet {
        m.target().clone()
    }
    fn is_valid(&self, m: &NetMorphism) -> Result<bool> {
        Ok(fnets::check_simulation(m.source(), m.target(), m.event_map(), m.condition_map())?.is_valid())
    }
    fn identity(&self, n: &FuzzyNet) -> NetMorphism {
        NetMorphism::identity(n)
    }
    fn then(&self, m: &NetMorphism, n: &NetMorphism) -> Result<NetMorphism> {
        m.then(n)
    }
    fn hom(&self, a: &FuzzyNet, b: &FuzzyNet) -> Result<Vec<NetMorphism>> {
        fnets::enumerate_simulations(a, b, &self.limits)
    }
    fn hom_count(&self, a: &FuzzyNet, b: &FuzzyNet) -> Result<u64> {
        fnets::count_simulations(a, b, &self.limits)
    }
    fn tensor(&self, a: &FuzzyNet, b: &FuzzyNet) -> Result<FuzzyNet> {
        fnets::net_tensor(a, b, &self.limits)
    }
    fn tensor_map(&self, m: &NetMorphism, n: &NetMorphism) -> Result<NetMorphism> {
        fnets::net_tensor_map(m, n, &self.limits)
    }
    fn left_unitor(&self, a: &FuzzyNet) -> Result<(NetMorphism, NetMorphism)> {
        fnets::net_left_unitor(a, &self.limits)
    }
    fn right_unitor(&self, a: &FuzzyNet) -> Result<(NetMorphism, NetMorphism)> {
        fnets::net_right_unitor(a, &self.limits)
    }
    fn symmetry(&self, a: &FuzzyNet, b: &FuzzyNet) -> Result<NetMorphism> {
        fnets::net_symmetry(a, b, &self.limits)
    }
    fn associator(&self, a: &FuzzyNet, b: &FuzzyNet, c: &FuzzyNet) -> Result<(NetMorphism, NetMorphism)> {
        fnets::net_associator(a, b, c, &self.limits)
    }
    fn internal_hom(&self, a: &FuzzyNet, b: &FuzzyNet) -> Result<FuzzyNet> {
        fnets::net_hom_with_rule(a, b, &self.limits, self.rule)
    }
    fn curry(&self, m: &NetMorphism) -> Result<NetMorphism> {
        fnets::net_curry_with_rule(m, &self.limits, self.rule)
    }
    fn uncurry(&self, m: &NetMorphism) -> Result<NetMorphism> {
        fnets::net_uncurry(m, &self.limits)
    }
    fn projections(&self, a: &FuzzyNet, b: &FuzzyNet) -> Result<(NetMorphism, NetMorphism)> {
        fnets::net_projections(a, b)
    }
    fn pairing(&self, m: &NetMorphism, n: &NetMorphism) -> Result<NetMorphism> {
        fnets::net_pairing(m, n)
    }
    fn injections(&self, a: &FuzzyNet, b: &FuzzyNet) -> Result<(NetMorphism, NetMorphism)> {
        fnets::net_injections(a, b)
    }
    fn copairing(&self, m: &NetMorphism, n: &NetMorphism) -> Result<NetMorphism> {
        fnets::net_copairing(m, n)
    }

    fn extra_laws(&self) -> Vec<Law<Self>> {
        vec![
            Law { name: "fibre-decomposition", arity: 2, check: law_fibre_decomposition },
            Law { name: "crisp-closure", arity: 2, check: law_crisp_closure },
        ]
    }
}

/// Looks up an element by label, for the label-level formulas below.
fn at(set: &FinSet, label: &Value) -> Step<usize> {
    set.lookup(label)
        .ok_or_else(|| Breach::Counterexample(json!({ "reason": "label not found", "label": label })))
}

fn table_at(table: &Value, key: &Value) -> Value {
    table[crate::finset::key_text(key)].clone()
}

/// Recomputes net constructions entry by entry from element labels and
/// compares them with the fibre-wise construction.
fn law_fibre_decomposition(c: &NetCat, t: &[FuzzyNet], _: &mut Pick) -> Step<u64> {
    let (n, m) = (&t[0], &t[1]);
    let mut checks = 0;
    let mismatch = |what: &str, e: &Value, b: &Value| {
        Breach::Counterexample(json!({ "reason": format!("{what} entry differs from its formula"), "event": e, "condition": b }))
    };

    let tn = fnets::net_tensor(n, m, &c.limits)?;
    for k in tn.events().indices() {
        let ek = tn.events().label(k);
        let (e, e2) = (at(n.events(), &ek[0])?, at(m.events(), &ek[1])?);
        for j in tn.conditions().indices() {
            let bj = tn.conditions().label(j);
            let fb = at(n.conditions(), &table_at(&bj[0], &ek[1]))?;
            let gb = at(m.conditions(), &table_at(&bj[1], &ek[0]))?;
            let pre = join(n.pre(e, fb), m.pre(e2, gb));
            let post = meet(n.post(e, fb), m.post(e2, gb));
            if (tn.pre(k, j), tn.post(k, j)) != (pre, post) {
                return Err(mismatch("tensor", &ek, &bj));
            }
            checks += 1;
        }
    }

    let hn = fnets::net_hom(n, m, &c.limits)?;
    for k in hn.events().indices() {
        let ek = hn.events().label(k);
        for j in hn.conditions().indices() {
            let bj = hn.conditions().label(j);
            let e = at(n.events(), &bj[0])?;
            let b2 = at(m.conditions(), &bj[1])?;
            let fe = at(m.events(), &table_at(&ek[0], &bj[0]))?;
            let fb = at(n.conditions(), &table_at(&ek[1], &bj[1]))?;
            let pre = co_implies(n.pre(e, fb), m.pre(fe, b2));
            let post = implies(n.post(e, fb), m.post(fe, b2));
            if (hn.pre(k, j), hn.post(k, j)) != (pre, post) {
                return Err(mismatch("internal hom", &ek, &bj));
            }
            checks += 1;
        }
    }

    let side = |label: &Value| -> (bool, Value) {
        match (label.get("inl"), label.get("inr")) {
            (Some(v), _) => (true, v.clone()),
            (_, Some(v)) => (false, v.clone()),
            _ => (true, Value::Null),
        }
    };
    let pn = fnets::net_product(n, m)?;
    for k in pn.events().indices() {
        let ek = pn.events().label(k);
        for j in pn.conditions().indices() {
            let bj = pn.conditions().label(j);
            let (left, b) = side(&bj);
            let want = if left {
                let (e, b) = (at(n.events(), &ek[0])?, at(n.conditions(), &b)?);
                (n.pre(e, b), n.post(e, b))
            } else {
                let (e, b) = (at(m.events(), &ek[1])?, at(m.conditions(), &b)?);
                (m.pre(e, b), m.post(e, b))
            };
            if (pn.pre(k, j), pn.post(k, j)) != want {
                return Err(mismatch("product", &ek, &bj));
            }
            checks += 1;
        }
    }

    let sn = fnets::net_coproduct(n, m)?;
    for k in sn.events().indices() {
        let ek = sn.events().label(k);
        let (left, e) = side(&ek);
        for j in sn.conditions().indices() {
            let bj = sn.conditions().label(j);
            let want = if left {
                let (e, b) = (at(n.events(), &e)?, at(n.conditions(), &bj[0])?);
                (n.pre(e, b), n.post(e, b))
            } else {
                let (e, b) = (at(m.events(), &e)?, at(m.conditions(), &bj[1])?);
                (m.pre(e, b), m.post(e, b))
            };
            if (sn.pre(k, j), sn.post(k, j)) != want {
                return Err(mismatch("coproduct", &ek, &bj));
            }
            checks += 1;
        }
    }
    Ok(checks)
}

/// Crisp nets stay crisp under every construction.
fn law_crisp_closure(c: &NetCat, t: &[FuzzyNet], _: &mut Pick) -> Step<u64> {
    let (n, m) = (&t[0], &t[1]);
    if !(n.is_crisp() && m.is_crisp()) {
        return Ok(0);
    }
    let built = [
        ("tensor", fnets::net_tensor(n, m, &c.limits)?),
        ("internal hom", fnets::net_hom(n, m, &c.limits)?),
        ("product", fnets::net_product(n, m)?),
        ("coproduct", fnets::net_coproduct(n, m)?),
    ];
    for (what, net) in &built {
        ensure(net.is_crisp(), || json!({ "reason": format!("{what} of crisp nets is not crisp") }))?;
    }
    Ok(built.len() as u64)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn grid_matrices(cells: usize, grid: &[Degree]) -> Vec<Vec<Degree>> {
    let mut out = vec![Vec::with_capacity(cells)];
    for _ in 0..cells {
        out = out
            .into_iter()
            .flat_map(|m| {
                grid.iter().map(move |&d| {
                    let mut m = m.clone();
                    m.push(d);
                    m
                })
            })
            .collect();
    }
    out
}

fn named(prefix: &str, n: usize) -> FinSet {
    FinSet::atoms((0..n).map(|i| format!("{prefix}{i}"))).expect("distinct names")
}

/// The smallest relabelling of a set of matrices under simultaneous row and
/// column permutations.
fn canonical(rows: usize, cols: usize, mats: &[&[Degree]]) -> Vec<Degree> {
    let (rp, cp) = (permutations(rows), permutations(cols));
    let mut best: Option<Vec<Degree>> = None;
    for p in &rp {
        for q in &cp {
            let v: Vec<Degree> = mats
                .iter()
                .flat_map(|m| p.iter().flat_map(move |&i| q.iter().map(move |&j| m[i * cols + j])))
                .collect();
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
    }
    best.unwrap_or_default()
}

/// Objects of a family, its isomorphism-class representatives, and the
/// objects whose carriers have at most one element.
pub struct Pools<O> {
    pub all: Vec<O>,
    pub representatives: Vec<O>,
    pub tiny: Vec<O>,
}

fn sizes(max: usize) -> Vec<(usize, usize)> {
    if max == 0 {
        return Vec::new();
    }
    (0..=max).flat_map(|m| (0..=max).map(move |n| (m, n))).collect()
}

/// Dialectica objects with carriers of size at most `max` and entries from
/// `grid`. Empty when `max` is 0.
pub fn dial_pools(orientation: Orientation, max: usize, grid: &[Degree]) -> Pools<DialObject> {
    let mut pools = Pools { all: Vec::new(), representatives: Vec::new(), tiny: Vec::new() };
    for (m, n) in sizes(max) {
        let (u, x) = (named("u", m), named("x", n));
        let mut seen = HashSet::new();
        for rel in grid_matrices(m * n, grid) {
            let fresh = seen.insert(canonical(m, n, &[&rel]));
            let a = DialObject::new(u.clone(), x.clone(), rel, orientation).expect("sizes match");
            if fresh {
                pools.representatives.push(a.clone());
            }
            if m <= 1 && n <= 1 {
                pools.tiny.push(a.clone());
            }
            pools.all.push(a);
        }
    }
    pools
}

/// Nets with at most `max` events and conditions and entries from `grid`.
pub fn net_pools(max: usize, grid: &[Degree]) -> Pools<FuzzyNet> {
    let mut pools = Pools { all: Vec::new(), representatives: Vec::new(), tiny: Vec::new() };
    for (m, n) in sizes(max) {
        let (e, b) = (named("e", m), named("b", n));
        let mats = grid_matrices(m * n, grid);
        let mut seen = HashSet::new();
        for pre in &mats {
            for post in &mats {
                let fresh = seen.insert(canonical(m, n, &[pre, post]));
                let net = FuzzyNet::new(e.clone(), b.clone(), pre.clone(), post.clone()).expect("sizes match");
                if fresh {
                    pools.representatives.push(net.clone());
                }
                if m <= 1 && n <= 1 {
                    pools.tiny.push(net.clone());
                }
                pools.all.push(net);
            }
        }
    }
    pools
}

fn law_seed(seed: u64, family: Family, law: &str) -> u64 {
    // FNV-1a over the names keeps each law's stream independent of filtering.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for b in family.name().bytes().chain([0]).chain(law.bytes()) {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn tuples(pool_len: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (pool_len as u64).pow(arity as u32);
    (0..total).map(move |mut k| {
        let mut idx = vec![0; arity];
        for slot in idx.iter_mut().rev() {
            *slot = (k % pool_len as u64) as usize;
            k /= pool_len as u64;
        }
        idx
    })
}

fn run_law<C: LawCategory>(
    c: &C,
    law: &Law<C>,
    pools: &Pools<C::Obj>,
    config: &LawSuiteConfig,
    family: Family,
) -> Result<LawResult> {
    let mut result = LawResult {
        law: law.name.to_string(),
        arity: law.arity,
        exhaustive_pool: "none",
        exhaustive_instances: 0,
        sampled_instances: 0,
        checks: 0,
        failures: 0,
        counterexample: None,
    };
    let record = |result: &mut LawResult, objs: &[C::Obj], outcome: Step<u64>| -> Result<()> {
        match outcome {
            Ok(n) => result.checks += n,
            Err(Breach::Limit(e)) => return Err(e),
            Err(Breach::Counterexample(v)) => {
                result.failures += 1;
                if result.counterexample.is_none() {
                    let objects: Vec<Value> = objs.iter().map(|o| c.obj_json(o)).collect();
                    let mut v = match v {
                        Value::Object(m) => m,
                        other => [("detail".to_string(), other)].into_iter().collect(),
                    };
                    v.insert("objects".into(), Value::Array(objects));
                    result.counterexample = Some(Value::Object(v));
                }
            }
        }
        Ok(())
    };

    if config.mode == SuiteMode::Exhaustive {
        let fits = |p: &Vec<C::Obj>| {
            !p.is_empty()
                && (p.len() as u64)
                    .checked_pow(law.arity as u32)
                    .is_some_and(|n| n <= config.exhaustive_budget)
        };
        let chosen = [
            ("all", &pools.all),
            ("representatives", &pools.representatives),
            ("tiny", &pools.tiny),
        ]
        .into_iter()
        .find(|(_, p)| fits(p));
        if let Some((name, pool)) = chosen {
            result.exhaustive_pool = name;
            for idx in tuples(pool.len(), law.arity) {
                let objs: Vec<C::Obj> = idx.iter().map(|&i| pool[i].clone()).collect();
                let outcome = (law.check)(c, &objs, &mut Pick::All);
                record(&mut result, &objs, outcome)?;
                result.exhaustive_instances += 1;
            }
            if name == "all" {
                return Ok(result);
            }
        }
    }

    if !pools.all.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(law_seed(config.seed, family, law.name));
        for _ in 0..config.samples {
            let objs: Vec<C::Obj> = (0..law.arity)
                .map(|_| pools.all[rng.random_range(0..pools.all.len())].clone())
                .collect();
            let outcome = (law.check)(c, &objs, &mut Pick::One(&mut rng));
            record(&mut result, &objs, outcome)?;
            result.sampled_instances += 1;
        }
    }
    Ok(result)
}

fn run_family<C: LawCategory>(
    c: &C,
    family: Family,
    pools: &Pools<C::Obj>,
    config: &LawSuiteConfig,
) -> Result<FamilyReport> {
    let mut laws = Vec::new();
    for law in generic_laws::<C>().into_iter().chain(c.extra_laws()) {
        if config.wants(law.name) {
            log::info!("{}: checking {}", family.name(), law.name);
            laws.push(run_law(c, &law, pools, config, family)?);
        }
    }
    Ok(FamilyReport {
        family: family.name(),
        objects: pools.all.len(),
        representatives: pools.representatives.len(),
        tiny: pools.tiny.len(),
        laws,
    })
}

/// Runs the configured suite. Identical configurations give identical
/// reports.
pub fn run_suite(config: &LawSuiteConfig) -> Result<LawReport> {
    if config.grid.is_empty() {
        return Err(Error::schema("grid", "degree grid is empty"));
    }
    if let Some(unknown) = config.laws.iter().find(|l| !LAW_NAMES.contains(&l.as_str())) {
        return Err(Error::schema("laws", format!("unknown law {unknown:?}")));
    }
    let mut grid = config.grid.clone();
    grid.sort();
    grid.dedup();
    let limits = config.limits();
    let mut families = Vec::new();
    for &family in &config.families {
        let report = match family {
            Family::DialStandard | Family::DialOpposite => {
                let orientation = if family == Family::DialStandard {
                    Orientation::Standard
                } else {
                    Orientation::Opposite
                };
                let cat = DialCat { orientation, limits, rule: config.hom_rule };
                let pools = dial_pools(orientation, config.max_carrier_size, &grid);
                run_family(&cat, family, &pools, config)?
            }
            Family::Nets => {
                let cat = NetCat { limits, rule: config.hom_rule };
                let pools = net_pools(config.max_carrier_size, &grid);
                run_family(&cat, family, &pools, config)?
            }
        };
        families.push(report);
    }
    let mut warnings = Vec::new();
    for f in &families {
        for l in &f.laws {
            if l.instances() == 0 {
                warnings.push(format!("{}: law {} checked zero instances", f.family, l.law));
            }
        }
    }
    let passed = families.iter().all(|f| f.laws.iter().all(LawResult::passed));
    Ok(LawReport {
        config: config.clone(),
        families,
        warnings,
        passed,
    })
}
