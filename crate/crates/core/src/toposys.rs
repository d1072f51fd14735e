//! Finite frames and fuzzy topological systems.
//!
//! A fuzzy topological system `(X, α, A)` pairs a set of points with a frame
//! of opens and a satisfaction degree `α(x, a)`. The axioms are read with
//! strict positivity:
//!
//! ```text
//! α(x, ⋀S) > 0  ⟺  α(x, a) > 0 for every a ∈ S
//! α(x, ⋁S) > 0  ⟺  α(x, a) > 0 for some a ∈ S
//! ```

use std::fmt;

use serde::Serialize;
use serde_json::Value;

use crate::dialectica::{check_morphism, DialObject, MorphismWitness};
use crate::error::{Error, Result};
use crate::finset::{FinMap, FinSet};
use crate::lineale::{join, meet, Degree, Orientation};
use crate::Verdict;

/// Largest frame the all-subsets axiom check accepts.
pub const ALL_SUBSETS_MAX: usize = 12;

/// A finite bounded distributive lattice, with meets and joins tabulated.
#[derive(Clone, PartialEq, Eq)]
pub struct Frame {
    elements: FinSet,
    le: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    top: usize,
    bottom: usize,
}

impl Frame {
    /// Builds a frame from its order; meets and joins are derived and every
    /// lattice law is checked exhaustively.
    pub fn new(elements: FinSet, le: Vec<Vec<bool>>, top: usize, bottom: usize) -> Result<Self> {
        let n = elements.len();
        if le.len() != n || le.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidFrame(format!("order must be a {n}×{n} matrix")));
        }
        if n == 0 {
            return Err(Error::InvalidFrame("a frame has at least one element".into()));
        }
        if top >= n || bottom >= n {
            return Err(Error::InvalidFrame("top or bottom is not an element".into()));
        }
        let le: Vec<bool> = le.into_iter().flatten().collect();
        let at = |a: usize, b: usize| le[a * n + b];
        let labels = elements.clone();
        let name = |a: usize| labels.describe(a);
        for a in 0..n {
            if !at(a, a) {
                return Err(Error::InvalidFrame(format!("order is not reflexive at {}", name(a))));
            }
            if !at(a, top) || !at(bottom, a) {
                return Err(Error::InvalidFrame(format!("{} is not between bottom and top", name(a))));
            }
            for b in 0..n {
                if a != b && at(a, b) && at(b, a) {
                    return Err(Error::InvalidFrame(format!(
                        "order is not antisymmetric at {}, {}",
                        name(a),
                        name(b)
                    )));
                }
                for c in 0..n {
                    if at(a, b) && at(b, c) && !at(a, c) {
                        return Err(Error::InvalidFrame(format!(
                            "order is not transitive at {}, {}, {}",
                            name(a),
                            name(b),
                            name(c)
                        )));
                    }
                }
            }
        }
        let bound = |a: usize, b: usize, lower: bool| -> Result<usize> {
            let below = |x: usize, y: usize| if lower { at(x, y) } else { at(y, x) };
            let bounds: Vec<usize> = (0..n).filter(|&c| below(c, a) && below(c, b)).collect();
            bounds
                .iter()
                .copied()
                .find(|&c| bounds.iter().all(|&d| below(d, c)))
                .ok_or_else(|| {
                    Error::InvalidFrame(format!(
                        "{} and {} have no {}",
                        name(a),
                        name(b),
                        if lower { "meet" } else { "join" }
                    ))
                })
        };
        let mut meet_t = vec![0; n * n];
        let mut join_t = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                meet_t[a * n + b] = bound(a, b, true)?;
                join_t[a * n + b] = bound(a, b, false)?;
            }
        }
        let frame = Frame {
            elements,
            le,
            meet: meet_t,
            join: join_t,
            top,
            bottom,
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if frame.meet(a, frame.join(b, c)) != frame.join(frame.meet(a, b), frame.meet(a, c)) {
                        return Err(Error::InvalidFrame(format!(
                            "not distributive at {}, {}, {}",
                            name(a),
                            name(b),
                            name(c)
                        )));
                    }
                }
            }
        }
        Ok(frame)
    }

    /// The lattice of down-closed subsets of a finite poset, ordered by
    /// inclusion. `order[i][j]` means `i ≤ j`.
    pub fn of_down_sets(order: &[Vec<bool>]) -> Result<Self> {
        let k = order.len();
        if k > 16 {
            return Err(Error::InvalidFrame("poset too large".into()));
        }
        let down_closed = |mask: u32| {
            (0..k).all(|j| mask >> j & 1 == 0 || (0..k).all(|i| !order[i][j] || mask >> i & 1 == 1))
        };
        let sets: Vec<u32> = (0..1u32 << k).filter(|&m| down_closed(m)).collect();
        let labels = sets
            .iter()
            .map(|&m| Value::Array((0..k).filter(|i| m >> i & 1 == 1).map(|i| Value::from(i as u64)).collect()))
            .collect();
        let le = sets
            .iter()
            .map(|&a| sets.iter().map(|&b| a & !b == 0).collect())
            .collect();
        let top = sets.len() - 1;
        Frame::new(FinSet::listed(labels)?, le, top, 0)
    }

    /// The chain `0 < 1 < … < n-1` with the given labels.
    pub fn chain<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let elements = FinSet::atoms(names)?;
        let n = elements.len();
        let le = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        Frame::new(elements, le, n.saturating_sub(1), 0)
    }

    pub fn elements(&self) -> &FinSet {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a * self.len() + b]
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn meet_all(&self, s: &[usize]) -> usize {
        s.iter().fold(self.top, |acc, &a| self.meet(acc, a))
    }

    pub fn join_all(&self, s: &[usize]) -> usize {
        s.iter().fold(self.bottom, |acc, &a| self.join(acc, a))
    }

    pub fn order_rows(&self) -> Vec<Vec<bool>> {
        self.elements
            .indices()
            .map(|a| self.elements.indices().map(|b| self.le(a, b)).collect())
            .collect()
    }

    pub fn open(&self, label: &str) -> Result<usize> {
        self.elements
            .lookup_key(label)
            .ok_or_else(|| Error::UnknownOpen(label.to_string()))
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Frame")
            .field("elements", &self.elements)
            .field("top", &self.top)
            .field("bottom", &self.bottom)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomMode {
    /// `S = ∅` and every two-element `S`.
    BinaryAndEmpty,
    /// Every subset of the frame.
    AllSubsets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Clause {
    Meet,
    Join,
}

/// A point and a subset of opens where an axiom fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomWitness {
    pub point: Value,
    pub subset: Vec<Value>,
    pub clause: Clause,
    /// `α(x, ⋀S)` or `α(x, ⋁S)`.
    pub degree: Degree,
}

impl fmt::Display for AxiomWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} clause fails at point {} for S = {}",
            self.clause,
            self.point,
            Value::Array(self.subset.clone())
        )
    }
}

fn subsets(n: usize, mode: AxiomMode) -> Vec<Vec<usize>> {
    match mode {
        AxiomMode::BinaryAndEmpty => {
            let mut out = vec![vec![]];
            for a in 0..n {
                for b in a + 1..n {
                    out.push(vec![a, b]);
                }
            }
            out
        }
        AxiomMode::AllSubsets => {
            let mut out: Vec<Vec<usize>> = (0..1u32 << n)
                .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
                .collect();
            out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            out
        }
    }
}

/// Checks both satisfaction axioms. Points are scanned in order, subsets by
/// size then lexicographically, the meet clause before the join clause.
pub fn check_axioms(
    points: &FinSet,
    frame: &Frame,
    sat: &[Degree],
    mode: AxiomMode,
) -> Result<Verdict<AxiomWitness>> {
    let n = frame.len();
    if sat.len() != points.len() * n {
        return Err(Error::NotTotal(format!(
            "satisfaction matrix needs {}×{} entries",
            points.len(),
            n
        )));
    }
    if mode == AxiomMode::AllSubsets && n > ALL_SUBSETS_MAX {
        return Err(Error::ResourceLimit {
            what: "all-subsets axiom check".into(),
            requested: format!("2^{n}"),
            cap: 1 << ALL_SUBSETS_MAX,
        });
    }
    let family = subsets(n, mode);
    for x in points.indices() {
        let pos = |a: usize| sat[x * n + a].is_positive();
        for s in &family {
            let m = frame.meet_all(s);
            let j = frame.join_all(s);
            let checks = [
                (Clause::Meet, m, s.iter().all(|&a| pos(a))),
                (Clause::Join, j, s.iter().any(|&a| pos(a))),
            ];
            for (clause, open, expected) in checks {
                if pos(open) != expected {
                    return Ok(Verdict::Invalid(AxiomWitness {
                        point: points.label(x),
                        subset: s.iter().map(|&a| frame.elements.label(a)).collect(),
                        clause,
                        degree: sat[x * n + open],
                    }));
                }
            }
        }
    }
    Ok(Verdict::Valid)
}

/// `(X, α, A)` with the axioms verified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzyTopSystem {
    points: FinSet,
    frame: Frame,
    sat: Vec<Degree>,
}

impl FuzzyTopSystem {
    /// `sat` is indexed `[point][open]`.
    pub fn new(points: FinSet, frame: Frame, sat: Vec<Degree>) -> Result<Self> {
        if let Verdict::Invalid(w) = check_axioms(&points, &frame, &sat, AxiomMode::BinaryAndEmpty)? {
            return Err(Error::InvalidSystem(w.to_string()));
        }
        Ok(FuzzyTopSystem { points, frame, sat })
    }

    pub fn points(&self) -> &FinSet {
        &self.points
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn sat(&self, x: usize, a: usize) -> Degree {
        self.sat[x * self.frame.len() + a]
    }

    pub fn sat_rows(&self) -> Vec<Vec<Degree>> {
        self.points
            .indices()
            .map(|x| self.frame.elements.indices().map(|a| self.sat(x, a)).collect())
            .collect()
    }

    /// `x ⊨ a` read off as `α(x, a) > 0`.
    pub fn supports(&self) -> Vec<bool> {
        self.sat.iter().map(Degree::is_positive).collect()
    }
}

/// A crisp topological system `(X, ⊨, A)`; `models` is indexed `[point][open]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrispTopSystem {
    pub points: FinSet,
    pub frame: Frame,
    pub models: Vec<bool>,
}

/// The system with `ι(x, a) = 1` when `x ⊨ a` and 0 otherwise.
pub fn crisp_embed(ts: &CrispTopSystem) -> Result<FuzzyTopSystem> {
    let sat: Vec<Degree> = ts
        .models
        .iter()
        .map(|&m| if m { Degree::ONE } else { Degree::ZERO })
        .collect();
    match check_axioms(&ts.points, &ts.frame, &sat, AxiomMode::BinaryAndEmpty)? {
        Verdict::Valid => Ok(FuzzyTopSystem {
            points: ts.points.clone(),
            frame: ts.frame.clone(),
            sat,
        }),
        Verdict::Invalid(w) => Err(Error::InvalidSystem(format!("crisp axioms fail: {w}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzySet {
    #[serde(skip)]
    pub carrier: FinSet,
    pub membership: Vec<Degree>,
}

impl FuzzySet {
    pub fn support(&self) -> Vec<bool> {
        self.membership.iter().map(Degree::is_positive).collect()
    }

    pub fn to_json(&self) -> Value {
        let map = self
            .carrier
            .indices()
            .map(|x| (self.carrier.describe(x), Value::from(self.membership[x].to_string())))
            .collect();
        Value::Object(map)
    }
}

/// The fuzzy set `x ↦ α(x, a)`.
pub fn extent(sys: &FuzzyTopSystem, a: usize) -> Result<FuzzySet> {
    if a >= sys.frame.len() {
        return Err(Error::UnknownOpen(format!("#{a}")));
    }
    Ok(FuzzySet {
        carrier: sys.points.clone(),
        membership: sys.points.indices().map(|x| sys.sat(x, a)).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExtentVerdict {
    #[serde(rename = "exact fuzzy topology")]
    Exact,
    #[serde(rename = "support-level only")]
    SupportLevelOnly,
    #[serde(rename = "fails")]
    Fails,
}

impl fmt::Display for ExtentVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtentVerdict::Exact => "exact fuzzy topology",
            ExtentVerdict::SupportLevelOnly => "support-level only",
            ExtentVerdict::Fails => "fails",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtentCounterexample {
    pub a: Value,
    pub b: Value,
    pub point: Value,
    pub clause: Clause,
    /// `min` or `max` of the two extents at the point.
    pub pointwise: Degree,
    /// Extent of `a ∧ b` or `a ∨ b` at the point.
    pub extent: Degree,
    pub support_level: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtentReport {
    pub verdict: ExtentVerdict,
    pub pairs_checked: usize,
    pub meet_exact: bool,
    pub meet_support: bool,
    pub join_exact: bool,
    pub join_support: bool,
    pub zero_in_family: bool,
    pub top_extent_positive: bool,
    /// First counterexamples, exact-level ones included.
    pub counterexamples: Vec<ExtentCounterexample>,
}

const MAX_COUNTEREXAMPLES: usize = 8;

/// Whether extents are closed under pointwise `min` / `max` the way a fuzzy
/// topology needs, exactly and at the level of supports.
pub fn check_extent_topology(sys: &FuzzyTopSystem) -> ExtentReport {
    let f = &sys.frame;
    let mut r = ExtentReport {
        verdict: ExtentVerdict::Exact,
        pairs_checked: 0,
        meet_exact: true,
        meet_support: true,
        join_exact: true,
        join_support: true,
        zero_in_family: false,
        top_extent_positive: true,
        counterexamples: Vec::new(),
    };
    for a in f.elements.indices() {
        for b in a..f.len() {
            r.pairs_checked += 1;
            for x in sys.points.indices() {
                let (sa, sb) = (sys.sat(x, a), sys.sat(x, b));
                let cases = [
                    (Clause::Meet, meet(sa, sb), sys.sat(x, f.meet(a, b))),
                    (Clause::Join, join(sa, sb), sys.sat(x, f.join(a, b))),
                ];
                for (clause, pointwise, ext) in cases {
                    if pointwise == ext {
                        continue;
                    }
                    let support_ok = pointwise.is_positive() == ext.is_positive();
                    let (exact, support) = match clause {
                        Clause::Meet => (&mut r.meet_exact, &mut r.meet_support),
                        Clause::Join => (&mut r.join_exact, &mut r.join_support),
                    };
                    *exact = false;
                    *support &= support_ok;
                    if r.counterexamples.len() < MAX_COUNTEREXAMPLES {
                        r.counterexamples.push(ExtentCounterexample {
                            a: f.elements.label(a),
                            b: f.elements.label(b),
                            point: sys.points.label(x),
                            clause,
                            pointwise,
                            extent: ext,
                            support_level: support_ok,
                        });
                    }
                }
            }
        }
    }
    r.zero_in_family = f
        .elements
        .indices()
        .any(|a| sys.points.indices().all(|x| sys.sat(x, a).is_zero()));
    r.top_extent_positive = sys.points.indices().all(|x| sys.sat(x, f.top).is_positive());
    let base = r.zero_in_family && r.top_extent_positive;
    r.verdict = if base && r.meet_exact && r.join_exact {
        ExtentVerdict::Exact
    } else if base && r.meet_support && r.join_support {
        ExtentVerdict::SupportLevelOnly
    } else {
        ExtentVerdict::Fails
    };
    r
}

/// Points on the left, opens on the right, `α` as the relation.
pub fn as_dial_object(sys: &FuzzyTopSystem) -> DialObject {
    DialObject::new(
        sys.points.clone(),
        sys.frame.elements.clone(),
        sys.sat.clone(),
        Orientation::Standard,
    )
    .expect("system carriers match its matrix")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrameHomWitness {
    pub property: String,
    pub opens: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportWitness {
    pub point: Value,
    pub open: Value,
    /// `α₁(x, φ(b))`.
    pub source_degree: Degree,
    /// `α₂(f(x), b)`.
    pub target_degree: Degree,
}

/// Three independent readings of continuity for `(f, φ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuityReport {
    pub dial_morphism: Verdict<MorphismWitness>,
    pub frame_homomorphism: Verdict<FrameHomWitness>,
    pub support_biconditional: Verdict<SupportWitness>,
}

impl ContinuityReport {
    pub fn all_pass(&self) -> bool {
        self.dial_morphism.is_valid()
            && self.frame_homomorphism.is_valid()
            && self.support_biconditional.is_valid()
    }
}

fn check_frame_hom(a: &Frame, b: &Frame, phi: &FinMap) -> Verdict<FrameHomWitness> {
    let label = |x: usize| b.elements.label(x);
    let fail = |property: &str, opens: Vec<Value>| {
        Verdict::Invalid(FrameHomWitness {
            property: property.to_string(),
            opens,
        })
    };
    if phi.at(b.top) != a.top {
        return fail("top", vec![label(b.top)]);
    }
    if phi.at(b.bottom) != a.bottom {
        return fail("bottom", vec![label(b.bottom)]);
    }
    for x in b.elements.indices() {
        for y in b.elements.indices() {
            if phi.at(b.meet(x, y)) != a.meet(phi.at(x), phi.at(y)) {
                return fail("meet", vec![label(x), label(y)]);
            }
            if phi.at(b.join(x, y)) != a.join(phi.at(x), phi.at(y)) {
                return fail("join", vec![label(x), label(y)]);
            }
        }
    }
    Verdict::Valid
}

/// `f: X₁ → X₂` on points, `φ: A₂ → A₁` on opens.
pub fn check_continuity(
    sys1: &FuzzyTopSystem,
    sys2: &FuzzyTopSystem,
    f: &FinMap,
    phi: &FinMap,
) -> Result<ContinuityReport> {
    if f.domain() != &sys1.points || f.codomain() != &sys2.points {
        return Err(Error::CarrierMismatch("f must map points to points".into()));
    }
    if phi.domain() != &sys2.frame.elements || phi.codomain() != &sys1.frame.elements {
        return Err(Error::CarrierMismatch(
            "phi must map opens of the target to opens of the source".into(),
        ));
    }
    let dial_morphism = check_morphism(&as_dial_object(sys1), &as_dial_object(sys2), f, phi)?;
    let frame_homomorphism = check_frame_hom(&sys1.frame, &sys2.frame, phi);
    let mut support_biconditional = Verdict::Valid;
    'scan: for x in sys1.points.indices() {
        for b in sys2.frame.elements.indices() {
            let (s, t) = (sys1.sat(x, phi.at(b)), sys2.sat(f.at(x), b));
            if s.is_positive() != t.is_positive() {
                support_biconditional = Verdict::Invalid(SupportWitness {
                    point: sys1.points.label(x),
                    open: sys2.frame.elements.label(b),
                    source_degree: s,
                    target_degree: t,
                });
                break 'scan;
            }
        }
    }
    Ok(ContinuityReport {
        dial_morphism,
        frame_homomorphism,
        support_biconditional,
    })
}
