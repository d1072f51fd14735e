//! Fuzzy token game.
//!
//! Enabledness is the Gödel residual folded over the preconditions:
//! `ε(e, M) = min_b (pre(e, b) ⇒ M(b))`. Firing consumes every condition
//! with positive `pre` and then produces `min(ε, post(e, b))`, keeping the
//! larger of the two. No contact check is made on output conditions. On 0/1
//! nets and markings this is the elementary token game.

use std::collections::{HashMap, VecDeque};

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::finset::{key_text, FinMap, FinSet, Limits};
use crate::fnets::{FuzzyNet, NetMorphism};
use crate::lineale::{implies, join, meet, Degree};

/// A degree for every condition of a net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marking {
    conditions: FinSet,
    degrees: Vec<Degree>,
}

impl Marking {
    pub fn new(conditions: &FinSet, degrees: Vec<Degree>) -> Result<Self> {
        if degrees.len() != conditions.len() {
            return Err(Error::NotTotal(format!(
                "marking has {} degrees for {} conditions",
                degrees.len(),
                conditions.len()
            )));
        }
        Ok(Marking {
            conditions: conditions.clone(),
            degrees,
        })
    }

    pub fn uniform(conditions: &FinSet, degree: Degree) -> Self {
        Marking {
            conditions: conditions.clone(),
            degrees: vec![degree; conditions.len()],
        }
    }

    pub fn conditions(&self) -> &FinSet {
        &self.conditions
    }

    pub fn degrees(&self) -> &[Degree] {
        &self.degrees
    }

    #[inline]
    pub fn at(&self, b: usize) -> Degree {
        self.degrees[b]
    }

    /// `M ∘ F`, a marking on the domain of `F`.
    pub fn pull_back(&self, big_f: &FinMap) -> Result<Marking> {
        if big_f.codomain() != &self.conditions {
            return Err(Error::CarrierMismatch(
                "condition map does not land in the marked conditions".into(),
            ));
        }
        Ok(Marking {
            conditions: big_f.domain().clone(),
            degrees: big_f.table().iter().map(|&b| self.degrees[b]).collect(),
        })
    }

    fn check_net(&self, net: &FuzzyNet) -> Result<()> {
        if &self.conditions != net.conditions() {
            return Err(Error::CarrierMismatch(
                "marking is not over the net's conditions".into(),
            ));
        }
        Ok(())
    }
}

impl Serialize for Marking {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.degrees.len()))?;
        for (b, d) in self.degrees.iter().enumerate() {
            map.serialize_entry(&key_text(&self.conditions.label(b)), d)?;
        }
        map.end()
    }
}

fn check_event(net: &FuzzyNet, e: usize) -> Result<()> {
    if e >= net.events().len() {
        return Err(Error::UnknownEvent(format!("#{e}")));
    }
    Ok(())
}

/// `ε(e, M)`; 1 when there are no conditions.
pub fn enabledness(net: &FuzzyNet, m: &Marking, e: usize) -> Result<Degree> {
    check_event(net, e)?;
    m.check_net(net)?;
    Ok(net
        .conditions()
        .indices()
        .map(|b| implies(net.pre(e, b), m.at(b)))
        .min()
        .unwrap_or(Degree::ONE))
}

fn consume(m: Degree, p: Degree) -> Degree {
    if p.is_positive() {
        Degree::ZERO
    } else {
        m
    }
}

fn fire_at(net: &FuzzyNet, m: &Marking, e: usize, eps: Degree) -> Marking {
    let degrees = net
        .conditions()
        .indices()
        .map(|b| join(consume(m.at(b), net.pre(e, b)), meet(eps, net.post(e, b))))
        .collect();
    Marking {
        conditions: m.conditions.clone(),
        degrees,
    }
}

fn not_enabled(net: &FuzzyNet, e: usize, eps: Degree, threshold: Degree, step: Option<usize>) -> Error {
    Error::NotEnabled {
        event: net.events().describe(e),
        enabledness: eps,
        threshold,
        step,
    }
}

/// Fires `e` if `ε(e, M) > threshold`.
pub fn fire(net: &FuzzyNet, m: &Marking, e: usize, threshold: Degree) -> Result<Marking> {
    let eps = enabledness(net, m, e)?;
    if eps <= threshold {
        return Err(not_enabled(net, e, eps, threshold, None));
    }
    Ok(fire_at(net, m, e, eps))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    #[serde(serialize_with = "serialize_event")]
    pub event: (usize, Value),
    pub enabledness: Degree,
    pub marking_after: Marking,
}

fn serialize_event<S: Serializer>(e: &(usize, Value), s: S) -> std::result::Result<S::Ok, S::Error> {
    e.1.serialize(s)
}

/// Fires `schedule` in order, failing with the step index of the first
/// event that is not enabled.
pub fn run(net: &FuzzyNet, m0: &Marking, schedule: &[usize], threshold: Degree) -> Result<Vec<TraceStep>> {
    m0.check_net(net)?;
    let mut m = m0.clone();
    let mut trace = Vec::with_capacity(schedule.len());
    for (step, &e) in schedule.iter().enumerate() {
        let eps = enabledness(net, &m, e)?;
        if eps <= threshold {
            return Err(not_enabled(net, e, eps, threshold, Some(step)));
        }
        m = fire_at(net, &m, e, eps);
        trace.push(TraceStep {
            step,
            event: (e, net.events().label(e)),
            enabledness: eps,
            marking_after: m.clone(),
        });
    }
    Ok(trace)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReachNode {
    pub id: usize,
    pub depth: usize,
    pub marking: Marking,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReachEdge {
    pub from: usize,
    pub event: Value,
    pub enabledness: Degree,
    pub to: usize,
}

/// Markings reachable in at most `depth` firings. Identical markings share a
/// node; node ids follow breadth-first discovery in event order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reachability {
    pub depth: usize,
    pub nodes: Vec<ReachNode>,
    pub edges: Vec<ReachEdge>,
}

pub fn explore(
    net: &FuzzyNet,
    m0: &Marking,
    depth: usize,
    threshold: Degree,
    limits: &Limits,
) -> Result<Reachability> {
    m0.check_net(net)?;
    let mut ids: HashMap<Vec<Degree>, usize> = HashMap::new();
    let mut nodes = vec![ReachNode {
        id: 0,
        depth: 0,
        marking: m0.clone(),
    }];
    let mut edges = Vec::new();
    ids.insert(m0.degrees.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        if nodes[id].depth >= depth {
            continue;
        }
        let m = nodes[id].marking.clone();
        for e in net.events().indices() {
            let eps = enabledness(net, &m, e)?;
            if eps <= threshold {
                continue;
            }
            let next = fire_at(net, &m, e, eps);
            let to = match ids.get(&next.degrees) {
                Some(&to) => to,
                None => {
                    let to = nodes.len();
                    limits.admit(|| "reachability exploration".into(), Some(to as u64 + 1))?;
                    ids.insert(next.degrees.clone(), to);
                    nodes.push(ReachNode {
                        id: to,
                        depth: nodes[id].depth + 1,
                        marking: next,
                    });
                    queue.push_back(to);
                    to
                }
            };
            edges.push(ReachEdge {
                from: id,
                event: net.events().label(e),
                enabledness: eps,
                to,
            });
        }
    }
    Ok(Reachability { depth, nodes, edges })
}

/// Enabledness of `e` in the source against `f(e)` in the target, with the
/// marking carried along `F` as `M ∘ F`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransportReport {
    pub event: Value,
    pub image_event: Value,
    pub source_enabledness: Degree,
    pub target_enabledness: Degree,
    pub target_at_least_source: bool,
}

pub fn simulation_transport_report(m: &NetMorphism, marking: &Marking, e: usize) -> Result<TransportReport> {
    let (n, n2) = (m.source(), m.target());
    marking.check_net(n)?;
    let eps = enabledness(n, marking, e)?;
    let fe = m.event_map().at(e);
    let eps2 = enabledness(n2, &marking.pull_back(m.condition_map())?, fe)?;
    Ok(TransportReport {
        event: n.events().label(e),
        image_event: n2.events().label(fe),
        source_enabledness: eps,
        target_enabledness: eps2,
        target_at_least_source: eps2 >= eps,
    })
}
