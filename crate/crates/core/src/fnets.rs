//! Fuzzy Petri nets and their simulations.
//!
//! A net `(E, B, pre, post)` is kept as two Dialectica objects over the same
//! carriers: `pre` in the opposite orientation and `post` in the standard one.
//! A simulation `(f: E → E′, F: B′ → B)` is a pair of maps that is a morphism
//! in both fibres at once, i.e.
//!
//! ```text
//! pre′(f(e), b′) ≤ pre(e, F(b′))      post(e, F(b′)) ≤ post′(f(e), b′)
//! ```
//!
//! Every net construction is the Dialectica construction applied fibre-wise.

use std::fmt;

use serde::Serialize;
use serde_json::Value;

use crate::dialectica::{self, DialMorphism, DialObject, HomRule};
use crate::error::{Error, Result};
use crate::finset::{FinMap, FinSet, Limits};
use crate::lineale::{Degree, Orientation};
use crate::Verdict;

/// Which way the two simulation inequalities point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimulationConvention {
    /// `pre′(f e, b′) ≤ pre(e, F b′)` and `post′(f e, b′) ≥ post(e, F b′)`.
    Diagram,
    /// Both inequalities reversed.
    Text,
}

impl SimulationConvention {
    pub fn pre_orientation(self) -> Orientation {
        match self {
            SimulationConvention::Diagram => Orientation::Opposite,
            SimulationConvention::Text => Orientation::Standard,
        }
    }

    pub fn post_orientation(self) -> Orientation {
        match self {
            SimulationConvention::Diagram => Orientation::Standard,
            SimulationConvention::Text => Orientation::Opposite,
        }
    }
}

/// The convention every net operation in this crate uses.
pub const CONVENTION: SimulationConvention = SimulationConvention::Diagram;

/// A fuzzy Petri net: events, conditions, and two degree matrices indexed
/// `[event][condition]`.
#[derive(Clone, PartialEq, Eq)]
pub struct FuzzyNet {
    pre: DialObject,
    post: DialObject,
}

impl FuzzyNet {
    pub fn new(
        events: FinSet,
        conditions: FinSet,
        pre: Vec<Degree>,
        post: Vec<Degree>,
    ) -> Result<Self> {
        let pre = DialObject::new(
            events.clone(),
            conditions.clone(),
            pre,
            CONVENTION.pre_orientation(),
        )?;
        let post = DialObject::new(events, conditions, post, CONVENTION.post_orientation())?;
        Ok(FuzzyNet { pre, post })
    }

    /// Assembles a net from its two fibres, which must share carriers.
    pub fn from_fibres(pre: DialObject, post: DialObject) -> Result<Self> {
        if pre.orientation() != CONVENTION.pre_orientation()
            || post.orientation() != CONVENTION.post_orientation()
        {
            return Err(Error::OrientationMismatch(
                "pre and post fibres have the wrong orientations".into(),
            ));
        }
        if pre.left() != post.left() || pre.right() != post.right() {
            return Err(Error::CarrierMismatch(
                "pre and post fibres must share events and conditions".into(),
            ));
        }
        Ok(FuzzyNet { pre, post })
    }

    pub fn events(&self) -> &FinSet {
        self.pre.left()
    }

    pub fn conditions(&self) -> &FinSet {
        self.pre.right()
    }

    #[inline]
    pub fn pre(&self, e: usize, b: usize) -> Degree {
        self.pre.at(e, b)
    }

    #[inline]
    pub fn post(&self, e: usize, b: usize) -> Degree {
        self.post.at(e, b)
    }

    pub fn pre_fibre(&self) -> &DialObject {
        &self.pre
    }

    pub fn post_fibre(&self) -> &DialObject {
        &self.post
    }

    /// True when every entry of both matrices is 0 or 1.
    pub fn is_crisp(&self) -> bool {
        let binary = |d: &Degree| d.is_zero() || d.is_one();
        self.pre.relation().iter().all(binary) && self.post.relation().iter().all(binary)
    }

    pub fn event_index(&self, label: &str) -> Result<usize> {
        self.events()
            .lookup_key(label)
            .ok_or_else(|| Error::UnknownEvent(label.to_string()))
    }
}

impl fmt::Debug for FuzzyNet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FuzzyNet")
            .field("events", self.events())
            .field("conditions", self.conditions())
            .field("pre", &self.pre.rows())
            .field("post", &self.post.rows())
            .finish()
    }
}

/// An elementary net: both matrices must be 0/1.
pub fn crisp_net(
    events: FinSet,
    conditions: FinSet,
    pre: Vec<Degree>,
    post: Vec<Degree>,
) -> Result<FuzzyNet> {
    let width = conditions.len().max(1);
    for m in [&pre, &post] {
        if let Some((i, &value)) = m
            .iter()
            .enumerate()
            .find(|(_, d)| !(d.is_zero() || d.is_one()))
        {
            return Err(Error::NonBinaryEntry {
                row: i / width,
                col: i % width,
                value,
            });
        }
    }
    FuzzyNet::new(events, conditions, pre, post)
}

/// Builds an elementary net from boolean incidence rows.
pub fn crisp_net_from_bools(
    events: FinSet,
    conditions: FinSet,
    pre: &[Vec<bool>],
    post: &[Vec<bool>],
) -> Result<FuzzyNet> {
    let flatten = |m: &[Vec<bool>]| -> Result<Vec<Degree>> {
        if m.len() != events.len() || m.iter().any(|r| r.len() != conditions.len()) {
            return Err(Error::CarrierMismatch("incidence matrix has the wrong shape".into()));
        }
        Ok(m.iter()
            .flatten()
            .map(|&b| if b { Degree::ONE } else { Degree::ZERO })
            .collect())
    };
    FuzzyNet::new(events.clone(), conditions.clone(), flatten(pre)?, flatten(post)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Fibre {
    Pre,
    Post,
}

/// First `(e, b′)` where a simulation inequality fails, pre fibre checked first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimulationWitness {
    #[serde(skip)]
    pub e: usize,
    #[serde(skip)]
    pub b: usize,
    pub event: Value,
    pub condition: Value,
    pub fibre: Fibre,
    /// Entry of the source net at `(e, F(b′))`.
    pub source_degree: Degree,
    /// Entry of the target net at `(f(e), b′)`.
    pub target_degree: Degree,
}

impl fmt::Display for SimulationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(e, b′) = ({}, {}) in the {:?} fibre: source {} vs target {}",
            self.event, self.condition, self.fibre, self.source_degree, self.target_degree
        )
    }
}

/// Decides whether `(f, F)` is a simulation `n → n2`.
pub fn check_simulation(
    n: &FuzzyNet,
    n2: &FuzzyNet,
    f: &FinMap,
    big_f: &FinMap,
) -> Result<Verdict<SimulationWitness>> {
    if f.domain() != n.events() || f.codomain() != n2.events() {
        return Err(Error::CarrierMismatch("f must map events to events".into()));
    }
    if big_f.domain() != n2.conditions() || big_f.codomain() != n.conditions() {
        return Err(Error::CarrierMismatch(
            "F must map target conditions to source conditions".into(),
        ));
    }
    let (pre_o, post_o) = (CONVENTION.pre_orientation(), CONVENTION.post_orientation());
    for e in n.events().indices() {
        let fe = f.at(e);
        for b in n2.conditions().indices() {
            let fb = big_f.at(b);
            let checks = [
                (Fibre::Pre, pre_o, n.pre(e, fb), n2.pre(fe, b)),
                (Fibre::Post, post_o, n.post(e, fb), n2.post(fe, b)),
            ];
            for (fibre, ori, src, tgt) in checks {
                if !ori.le(src, tgt) {
                    return Ok(Verdict::Invalid(SimulationWitness {
                        e,
                        b,
                        event: n.events().label(e),
                        condition: n2.conditions().label(b),
                        fibre,
                        source_degree: src,
                        target_degree: tgt,
                    }));
                }
            }
        }
    }
    Ok(Verdict::Valid)
}

/// A simulation between fuzzy nets: a morphism in both fibres with the same
/// pair of maps.
#[derive(Clone, PartialEq, Eq)]
pub struct NetMorphism {
    source: FuzzyNet,
    target: FuzzyNet,
    pre: DialMorphism,
    post: DialMorphism,
}

impl NetMorphism {
    pub fn new(source: &FuzzyNet, target: &FuzzyNet, f: FinMap, big_f: FinMap) -> Result<Self> {
        if let Verdict::Invalid(w) = check_simulation(source, target, &f, &big_f)? {
            return Err(Error::InvalidMorphism(w.to_string()));
        }
        let pre = DialMorphism::new(&source.pre, &target.pre, f.clone(), big_f.clone())?;
        let post = DialMorphism::new(&source.post, &target.post, f, big_f)?;
        Ok(NetMorphism {
            source: source.clone(),
            target: target.clone(),
            pre,
            post,
        })
    }

    /// Pairs two fibre morphisms that carry the same maps.
    pub fn from_fibres(pre: DialMorphism, post: DialMorphism) -> Result<Self> {
        if pre.f() != post.f() || pre.g() != post.g() {
            return Err(Error::Internal(
                "fibre morphisms disagree on their maps".into(),
            ));
        }
        let source = FuzzyNet::from_fibres(pre.source().clone(), post.source().clone())?;
        let target = FuzzyNet::from_fibres(pre.target().clone(), post.target().clone())?;
        Ok(NetMorphism {
            source,
            target,
            pre,
            post,
        })
    }

    fn from_pairs(
        pre: (DialMorphism, DialMorphism),
        post: (DialMorphism, DialMorphism),
    ) -> Result<(Self, Self)> {
        Ok((
            Self::from_fibres(pre.0, post.0)?,
            Self::from_fibres(pre.1, post.1)?,
        ))
    }

    pub fn identity(n: &FuzzyNet) -> Self {
        NetMorphism {
            source: n.clone(),
            target: n.clone(),
            pre: DialMorphism::identity(&n.pre),
            post: DialMorphism::identity(&n.post),
        }
    }

    pub fn source(&self) -> &FuzzyNet {
        &self.source
    }

    pub fn target(&self) -> &FuzzyNet {
        &self.target
    }

    /// `f: E → E′`.
    pub fn event_map(&self) -> &FinMap {
        self.post.f()
    }

    /// `F: B′ → B`.
    pub fn condition_map(&self) -> &FinMap {
        self.post.g()
    }

    pub fn pre_fibre(&self) -> &DialMorphism {
        &self.pre
    }

    pub fn post_fibre(&self) -> &DialMorphism {
        &self.post
    }

    pub fn then(&self, next: &NetMorphism) -> Result<NetMorphism> {
        Self::from_fibres(self.pre.then(&next.pre)?, self.post.then(&next.post)?)
    }
}

impl fmt::Debug for NetMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(f = {:?}, F = {:?})",
            self.event_map(),
            self.condition_map()
        )
    }
}

/// `(E × E′, B^{E′} × B′^{E})`, pre by `max`, post by `min`.
pub fn net_tensor(n: &FuzzyNet, n2: &FuzzyNet, limits: &Limits) -> Result<FuzzyNet> {
    FuzzyNet::from_fibres(
        dialectica::tensor(&n.pre, &n2.pre, limits)?,
        dialectica::tensor(&n.post, &n2.post, limits)?,
    )
}

/// `({•}, {•}, pre = 0, post = 1)`.
pub fn net_unit() -> FuzzyNet {
    FuzzyNet {
        pre: dialectica::unit_object(CONVENTION.pre_orientation()),
        post: dialectica::unit_object(CONVENTION.post_orientation()),
    }
}

/// `(E′^E × B^{B′}, E × B′)` with the residual of each fibre.
pub fn net_hom(n: &FuzzyNet, n2: &FuzzyNet, limits: &Limits) -> Result<FuzzyNet> {
    net_hom_with_rule(n, n2, limits, HomRule::Residual)
}

pub fn net_hom_with_rule(
    n: &FuzzyNet,
    n2: &FuzzyNet,
    limits: &Limits,
    rule: HomRule,
) -> Result<FuzzyNet> {
    FuzzyNet::from_fibres(
        dialectica::internal_hom_with_rule(&n.pre, &n2.pre, limits, rule)?,
        dialectica::internal_hom_with_rule(&n.post, &n2.post, limits, rule)?,
    )
}

pub fn net_product(n: &FuzzyNet, n2: &FuzzyNet) -> Result<FuzzyNet> {
    FuzzyNet::from_fibres(
        dialectica::product(&n.pre, &n2.pre)?,
        dialectica::product(&n.post, &n2.post)?,
    )
}

pub fn net_coproduct(n: &FuzzyNet, n2: &FuzzyNet) -> Result<FuzzyNet> {
    FuzzyNet::from_fibres(
        dialectica::coproduct(&n.pre, &n2.pre)?,
        dialectica::coproduct(&n.post, &n2.post)?,
    )
}

pub fn net_projections(n: &FuzzyNet, n2: &FuzzyNet) -> Result<(NetMorphism, NetMorphism)> {
    NetMorphism::from_pairs(
        dialectica::projections(&n.pre, &n2.pre)?,
        dialectica::projections(&n.post, &n2.post)?,
    )
}

pub fn net_injections(n: &FuzzyNet, n2: &FuzzyNet) -> Result<(NetMorphism, NetMorphism)> {
    NetMorphism::from_pairs(
        dialectica::injections(&n.pre, &n2.pre)?,
        dialectica::injections(&n.post, &n2.post)?,
    )
}

pub fn net_pairing(m1: &NetMorphism, m2: &NetMorphism) -> Result<NetMorphism> {
    NetMorphism::from_fibres(
        dialectica::pairing(&m1.pre, &m2.pre)?,
        dialectica::pairing(&m1.post, &m2.post)?,
    )
}

pub fn net_copairing(m1: &NetMorphism, m2: &NetMorphism) -> Result<NetMorphism> {
    NetMorphism::from_fibres(
        dialectica::copairing(&m1.pre, &m2.pre)?,
        dialectica::copairing(&m1.post, &m2.post)?,
    )
}

pub fn net_tensor_map(m1: &NetMorphism, m2: &NetMorphism, limits: &Limits) -> Result<NetMorphism> {
    NetMorphism::from_fibres(
        dialectica::tensor_map(&m1.pre, &m2.pre, limits)?,
        dialectica::tensor_map(&m1.post, &m2.post, limits)?,
    )
}

pub fn net_left_unitor(n: &FuzzyNet, limits: &Limits) -> Result<(NetMorphism, NetMorphism)> {
    NetMorphism::from_pairs(
        dialectica::left_unitor(&n.pre, limits)?,
        dialectica::left_unitor(&n.post, limits)?,
    )
}

pub fn net_right_unitor(n: &FuzzyNet, limits: &Limits) -> Result<(NetMorphism, NetMorphism)> {
    NetMorphism::from_pairs(
        dialectica::right_unitor(&n.pre, limits)?,
        dialectica::right_unitor(&n.post, limits)?,
    )
}

pub fn net_symmetry(n: &FuzzyNet, n2: &FuzzyNet, limits: &Limits) -> Result<NetMorphism> {
    NetMorphism::from_fibres(
        dialectica::symmetry(&n.pre, &n2.pre, limits)?,
        dialectica::symmetry(&n.post, &n2.post, limits)?,
    )
}

pub fn net_associator(
    n1: &FuzzyNet,
    n2: &FuzzyNet,
    n3: &FuzzyNet,
    limits: &Limits,
) -> Result<(NetMorphism, NetMorphism)> {
    NetMorphism::from_pairs(
        dialectica::associator(&n1.pre, &n2.pre, &n3.pre, limits)?,
        dialectica::associator(&n1.post, &n2.post, &n3.post, limits)?,
    )
}

/// `N ⊗ N′ → N″` to `N → (N′ ⊸ N″)`.
pub fn net_curry(m: &NetMorphism, limits: &Limits) -> Result<NetMorphism> {
    net_curry_with_rule(m, limits, HomRule::Residual)
}

pub fn net_curry_with_rule(m: &NetMorphism, limits: &Limits, rule: HomRule) -> Result<NetMorphism> {
    NetMorphism::from_fibres(
        dialectica::curry_with_rule(&m.pre, limits, rule)?,
        dialectica::curry_with_rule(&m.post, limits, rule)?,
    )
}

pub fn net_uncurry(m: &NetMorphism, limits: &Limits) -> Result<NetMorphism> {
    NetMorphism::from_fibres(
        dialectica::uncurry(&m.pre, limits)?,
        dialectica::uncurry(&m.post, limits)?,
    )
}

fn admit_enumeration(n: &FuzzyNet, n2: &FuzzyNet, limits: &Limits) -> Result<()> {
    limits
        .admit(
            || "simulation enumeration".to_string(),
            dialectica::candidate_count(&n.post, &n2.post),
        )
        .map(|_| ())
}

fn admissible(n: &FuzzyNet, n2: &FuzzyNet, f: &[usize], b: usize, x: usize) -> bool {
    let (pre_o, post_o) = (CONVENTION.pre_orientation(), CONVENTION.post_orientation());
    n.events().indices().all(|e| {
        pre_o.le(n.pre(e, x), n2.pre(f[e], b)) && post_o.le(n.post(e, x), n2.post(f[e], b))
    })
}

/// Every simulation `n → n2`, in canonical order.
pub fn enumerate_simulations(
    n: &FuzzyNet,
    n2: &FuzzyNet,
    limits: &Limits,
) -> Result<Vec<NetMorphism>> {
    admit_enumeration(n, n2, limits)?;
    let mut pairs = Vec::new();
    dialectica::for_each_valid_pair(
        n.events(),
        n2.events(),
        n2.conditions(),
        n.conditions(),
        limits,
        |f, b, x| admissible(n, n2, f, b, x),
        |f, g| pairs.push((f.to_vec(), g.to_vec())),
    )?;
    pairs
        .into_iter()
        .map(|(f, g)| {
            NetMorphism::new(
                n,
                n2,
                FinMap::new(n.events(), n2.events(), f)?,
                FinMap::new(n2.conditions(), n.conditions(), g)?,
            )
        })
        .collect()
}

/// `|Hom(n, n2)|` in the category of nets.
pub fn count_simulations(n: &FuzzyNet, n2: &FuzzyNet, limits: &Limits) -> Result<u64> {
    admit_enumeration(n, n2, limits)?;
    let mut total = 0u64;
    for f in FinMap::all(n.events(), n2.events(), limits)? {
        let mut ways = 1u64;
        for b in n2.conditions().indices() {
            ways *= n
                .conditions()
                .indices()
                .filter(|&x| admissible(n, n2, f.table(), b, x))
                .count() as u64;
            if ways == 0 {
                break;
            }
        }
        total += ways;
    }
    Ok(total)
}
