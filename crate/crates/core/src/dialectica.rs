//! The Dialectica category over the unit-interval lineale.
//!
//! An object `(U, X, α)` is a degree-valued relation between two finite
//! carriers. A morphism `(U, X, α) → (V, Y, β)` is a pair `f: U → V`,
//! `g: Y → X` with `α(u, g(y)) ⊑ β(f(u), y)` for all `u`, `y`, where `⊑` is
//! the order of the object's [`Orientation`]. Everything here is parametric in
//! the orientation, so the same code serves both fibres of a fuzzy net.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::finset::{FinMap, FinSet, Limits, Side};
use crate::lineale::{Degree, Orientation};
use crate::Verdict;

/// How an object was built. Currying needs to see through tensors and homs.
#[derive(Clone)]
pub enum Origin {
    Given,
    Unit,
    Tensor(DialObject, DialObject),
    Hom(DialObject, DialObject),
    Product(DialObject, DialObject),
    Coproduct(DialObject, DialObject),
}

struct ObjectInner {
    left: FinSet,
    right: FinSet,
    rel: Vec<Degree>,
    orientation: Orientation,
    origin: Origin,
}

/// A degree-valued relation `α: U × X → I`, stored row-major.
#[derive(Clone)]
pub struct DialObject(Arc<ObjectInner>);

impl DialObject {
    pub fn new(
        left: FinSet,
        right: FinSet,
        rel: Vec<Degree>,
        orientation: Orientation,
    ) -> Result<Self> {
        if rel.len() != left.len() * right.len() {
            return Err(Error::CarrierMismatch(format!(
                "relation has {} entries, carriers need {}×{}",
                rel.len(),
                left.len(),
                right.len()
            )));
        }
        Ok(Self::with_origin(left, right, rel, orientation, Origin::Given))
    }

    pub fn from_fn(
        left: FinSet,
        right: FinSet,
        orientation: Orientation,
        mut alpha: impl FnMut(usize, usize) -> Degree,
    ) -> Self {
        let mut rel = Vec::with_capacity(left.len() * right.len());
        for u in left.indices() {
            for x in right.indices() {
                rel.push(alpha(u, x));
            }
        }
        Self::with_origin(left, right, rel, orientation, Origin::Given)
    }

    fn with_origin(
        left: FinSet,
        right: FinSet,
        rel: Vec<Degree>,
        orientation: Orientation,
        origin: Origin,
    ) -> Self {
        DialObject(Arc::new(ObjectInner {
            left,
            right,
            rel,
            orientation,
            origin,
        }))
    }

    fn relabel(self, origin: Origin) -> Self {
        let inner = Arc::try_unwrap(self.0).unwrap_or_else(|arc| ObjectInner {
            left: arc.left.clone(),
            right: arc.right.clone(),
            rel: arc.rel.clone(),
            orientation: arc.orientation,
            origin: arc.origin.clone(),
        });
        DialObject(Arc::new(ObjectInner { origin, ..inner }))
    }

    pub fn left(&self) -> &FinSet {
        &self.0.left
    }

    pub fn right(&self) -> &FinSet {
        &self.0.right
    }

    pub fn orientation(&self) -> Orientation {
        self.0.orientation
    }

    pub fn origin(&self) -> &Origin {
        &self.0.origin
    }

    /// `α(u, x)`.
    #[inline]
    pub fn at(&self, u: usize, x: usize) -> Degree {
        self.0.rel[u * self.0.right.len() + x]
    }

    pub fn relation(&self) -> &[Degree] {
        &self.0.rel
    }

    pub fn rows(&self) -> Vec<Vec<Degree>> {
        let w = self.right().len();
        if w == 0 {
            return vec![Vec::new(); self.left().len()];
        }
        self.0.rel.chunks(w).map(<[Degree]>::to_vec).collect()
    }

    /// Same carriers and relation, other orientation.
    pub fn reoriented(&self, orientation: Orientation) -> Self {
        Self::with_origin(
            self.left().clone(),
            self.right().clone(),
            self.0.rel.clone(),
            orientation,
            Origin::Given,
        )
    }
}

impl PartialEq for DialObject {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.orientation == other.0.orientation
                && self.0.left == other.0.left
                && self.0.right == other.0.right
                && self.0.rel == other.0.rel)
    }
}

impl Eq for DialObject {}

impl fmt::Debug for DialObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DialObject")
            .field("left", self.left())
            .field("right", self.right())
            .field("rel", &self.rows())
            .field("orientation", &self.orientation())
            .finish()
    }
}

/// First `(u, y)`, in lexicographic order, where the morphism inequality fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismWitness {
    #[serde(skip)]
    pub u: usize,
    #[serde(skip)]
    pub y: usize,
    #[serde(rename = "u")]
    pub u_label: Value,
    #[serde(rename = "y")]
    pub y_label: Value,
    /// `α(u, g(y))`
    pub source_degree: Degree,
    /// `β(f(u), y)`
    pub target_degree: Degree,
}

impl fmt::Display for MorphismWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(u, y) = ({}, {}): {} vs {}",
            self.u_label, self.y_label, self.source_degree, self.target_degree
        )
    }
}

fn check_endpoints(a: &DialObject, b: &DialObject, f: &FinMap, g: &FinMap) -> Result<()> {
    if a.orientation() != b.orientation() {
        return Err(Error::OrientationMismatch(format!(
            "{} source, {} target",
            a.orientation(),
            b.orientation()
        )));
    }
    if f.domain() != a.left() || f.codomain() != b.left() {
        return Err(Error::CarrierMismatch(
            "f must map the source's left carrier to the target's".into(),
        ));
    }
    if g.domain() != b.right() || g.codomain() != a.right() {
        return Err(Error::CarrierMismatch(
            "g must map the target's right carrier to the source's".into(),
        ));
    }
    Ok(())
}

fn first_violation(a: &DialObject, b: &DialObject, f: &FinMap, g: &FinMap) -> Option<(usize, usize)> {
    let ori = a.orientation();
    for u in a.left().indices() {
        let fu = f.at(u);
        for y in b.right().indices() {
            if !ori.le(a.at(u, g.at(y)), b.at(fu, y)) {
                return Some((u, y));
            }
        }
    }
    None
}

/// Decides whether `(f, g)` is a morphism `a → b`.
pub fn check_morphism(
    a: &DialObject,
    b: &DialObject,
    f: &FinMap,
    g: &FinMap,
) -> Result<Verdict<MorphismWitness>> {
    check_endpoints(a, b, f, g)?;
    Ok(match first_violation(a, b, f, g) {
        None => Verdict::Valid,
        Some((u, y)) => Verdict::Invalid(MorphismWitness {
            u,
            y,
            u_label: a.left().label(u),
            y_label: b.right().label(y),
            source_degree: a.at(u, g.at(y)),
            target_degree: b.at(f.at(u), y),
        }),
    })
}

/// A morphism of the Dialectica category. Only valid pairs are constructible.
#[derive(Clone, PartialEq, Eq)]
pub struct DialMorphism {
    source: DialObject,
    target: DialObject,
    f: FinMap,
    g: FinMap,
}

impl DialMorphism {
    pub fn new(source: &DialObject, target: &DialObject, f: FinMap, g: FinMap) -> Result<Self> {
        match check_morphism(source, target, &f, &g)? {
            Verdict::Valid => Ok(Self::trusted(source, target, f, g)),
            Verdict::Invalid(w) => Err(Error::InvalidMorphism(w.to_string())),
        }
    }

    fn trusted(source: &DialObject, target: &DialObject, f: FinMap, g: FinMap) -> Self {
        debug_assert!(first_violation(source, target, &f, &g).is_none());
        DialMorphism {
            source: source.clone(),
            target: target.clone(),
            f,
            g,
        }
    }

    /// Like [`DialMorphism::new`] for pairs whose validity follows from a
    /// construction; a failure is an internal error, not bad input.
    fn derived(
        source: &DialObject,
        target: &DialObject,
        f: FinMap,
        g: FinMap,
        what: &str,
    ) -> Result<Self> {
        Self::new(source, target, f, g).map_err(|e| match e {
            Error::InvalidMorphism(w) => Error::InvalidMorphism(format!("{what}: {w}")),
            other => Error::Internal(format!("{what}: {other}")),
        })
    }

    pub fn identity(a: &DialObject) -> Self {
        Self::trusted(a, a, FinMap::identity(a.left()), FinMap::identity(a.right()))
    }

    pub fn source(&self) -> &DialObject {
        &self.source
    }

    pub fn target(&self) -> &DialObject {
        &self.target
    }

    /// The forward map on left carriers.
    pub fn f(&self) -> &FinMap {
        &self.f
    }

    /// The backward map on right carriers.
    pub fn g(&self) -> &FinMap {
        &self.g
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &DialMorphism) -> Result<DialMorphism> {
        compose(self, next)
    }
}

impl fmt::Debug for DialMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(f = {:?}, g = {:?})", self.f, self.g)
    }
}

/// Composite of `first: A → B` and `second: B → C`: the pair
/// `(f₂ ∘ f₁, g₁ ∘ g₂)`. The composite is re-checked.
pub fn compose(first: &DialMorphism, second: &DialMorphism) -> Result<DialMorphism> {
    if first.target != second.source {
        return Err(Error::EndpointMismatch(
            "target of the first morphism is not the source of the second".into(),
        ));
    }
    let f = FinMap::compose(&second.f, &first.f)?;
    let g = FinMap::compose(&first.g, &second.g)?;
    DialMorphism::new(&first.source, &second.target, f, g)
        .map_err(|e| Error::Internal(format!("composite of valid morphisms failed: {e}")))
}

fn same_orientation(a: &DialObject, b: &DialObject) -> Result<Orientation> {
    if a.orientation() != b.orientation() {
        return Err(Error::OrientationMismatch(format!(
            "cannot combine {} and {} objects",
            a.orientation(),
            b.orientation()
        )));
    }
    Ok(a.orientation())
}

/// `(U×V, X^V × Y^U, ((u,v),(F,G)) ↦ α(u,F(v)) · β(v,G(u)))`, `·` being the
/// orientation's monoid.
pub fn tensor(a: &DialObject, b: &DialObject, limits: &Limits) -> Result<DialObject> {
    let ori = same_orientation(a, b)?;
    let (u_set, x_set) = (a.left(), a.right());
    let (v_set, y_set) = (b.left(), b.right());
    let fx = FinSet::exponential(x_set, v_set, limits)?;
    let gy = FinSet::exponential(y_set, u_set, limits)?;
    limits.admit(
        || "tensor right carrier".to_string(),
        (fx.len() as u64).checked_mul(gy.len() as u64),
    )?;
    let left = FinSet::product(u_set, v_set);
    let right = FinSet::product(&fx, &gy);
    let f_tables = fx.tables();
    let g_tables = gy.tables();
    let obj = DialObject::from_fn(left.clone(), right.clone(), ori, |uv, fg| {
        let (u, v) = left.unpair(uv);
        let (i, j) = right.unpair(fg);
        ori.monoid(a.at(u, f_tables[i][v]), b.at(v, g_tables[j][u]))
    });
    Ok(obj.relabel(Origin::Tensor(a.clone(), b.clone())))
}

/// `({•}, {•}, unit)`.
pub fn unit_object(orientation: Orientation) -> DialObject {
    let one = FinSet::singleton();
    DialObject::with_origin(
        one.clone(),
        one,
        vec![orientation.unit()],
        orientation,
        Origin::Unit,
    )
}

/// Which operation fills the internal-hom relation. Anything other than
/// [`HomRule::Residual`] exists only to check that the law suite notices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomRule {
    #[default]
    Residual,
    /// Mutation: the monoid operation in place of its residual.
    MonoidMutant,
}

/// `(V^U × X^Y, U × Y, ((h,H),(u,y)) ↦ α(u,H(y)) ⇒ β(h(u),y))`.
pub fn internal_hom(a: &DialObject, b: &DialObject, limits: &Limits) -> Result<DialObject> {
    internal_hom_with_rule(a, b, limits, HomRule::Residual)
}

pub fn internal_hom_with_rule(
    a: &DialObject,
    b: &DialObject,
    limits: &Limits,
    rule: HomRule,
) -> Result<DialObject> {
    let ori = same_orientation(a, b)?;
    let (u_set, x_set) = (a.left(), a.right());
    let (v_set, y_set) = (b.left(), b.right());
    let hs = FinSet::exponential(v_set, u_set, limits)?;
    let big_hs = FinSet::exponential(x_set, y_set, limits)?;
    limits.admit(
        || "internal hom left carrier".to_string(),
        (hs.len() as u64).checked_mul(big_hs.len() as u64),
    )?;
    let left = FinSet::product(&hs, &big_hs);
    let right = FinSet::product(u_set, y_set);
    let h_tables = hs.tables();
    let big_h_tables = big_hs.tables();
    let op = |p: Degree, q: Degree| match rule {
        HomRule::Residual => ori.residual(p, q),
        HomRule::MonoidMutant => ori.monoid(p, q),
    };
    let obj = DialObject::from_fn(left.clone(), right.clone(), ori, |hh, uy| {
        let (i, j) = left.unpair(hh);
        let (u, y) = right.unpair(uy);
        op(a.at(u, big_h_tables[j][y]), b.at(h_tables[i][u], y))
    });
    Ok(obj.relabel(Origin::Hom(a.clone(), b.clone())))
}

/// `(U×V, X+Y)` with `((u,v), inl x) ↦ α(u,x)` and `((u,v), inr y) ↦ β(v,y)`.
pub fn product(a: &DialObject, b: &DialObject) -> Result<DialObject> {
    let ori = same_orientation(a, b)?;
    let left = FinSet::product(a.left(), b.left());
    let right = FinSet::coproduct(a.right(), b.right());
    let obj = DialObject::from_fn(left.clone(), right.clone(), ori, |uv, s| {
        let (u, v) = left.unpair(uv);
        match right.side(s) {
            Side::Left(x) => a.at(u, x),
            Side::Right(y) => b.at(v, y),
        }
    });
    Ok(obj.relabel(Origin::Product(a.clone(), b.clone())))
}

/// `(U+V, X×Y)` with `(inl u, (x,y)) ↦ α(u,x)` and `(inr v, (x,y)) ↦ β(v,y)`.
pub fn coproduct(a: &DialObject, b: &DialObject) -> Result<DialObject> {
    let ori = same_orientation(a, b)?;
    let left = FinSet::coproduct(a.left(), b.left());
    let right = FinSet::product(a.right(), b.right());
    let obj = DialObject::from_fn(left.clone(), right.clone(), ori, |s, xy| {
        let (x, y) = right.unpair(xy);
        match left.side(s) {
            Side::Left(u) => a.at(u, x),
            Side::Right(v) => b.at(v, y),
        }
    });
    Ok(obj.relabel(Origin::Coproduct(a.clone(), b.clone())))
}

/// The two projections out of `product(a, b)`.
pub fn projections(a: &DialObject, b: &DialObject) -> Result<(DialMorphism, DialMorphism)> {
    let p = product(a, b)?;
    let (l, r) = (p.left(), p.right());
    let fst = FinMap::from_fn(l, a.left(), |k| l.unpair(k).0);
    let snd = FinMap::from_fn(l, b.left(), |k| l.unpair(k).1);
    let inl = FinMap::from_fn(a.right(), r, |x| r.inl(x));
    let inr = FinMap::from_fn(b.right(), r, |y| r.inr(y));
    Ok((
        DialMorphism::derived(&p, a, fst, inl, "first projection")?,
        DialMorphism::derived(&p, b, snd, inr, "second projection")?,
    ))
}

/// `⟨m₁, m₂⟩: C → A × B` for `m₁: C → A`, `m₂: C → B`.
pub fn pairing(m1: &DialMorphism, m2: &DialMorphism) -> Result<DialMorphism> {
    if m1.source != m2.source {
        return Err(Error::EndpointMismatch("pairing needs a common source".into()));
    }
    let (a, b, c) = (&m1.target, &m2.target, &m1.source);
    let p = product(a, b)?;
    let (l, r) = (p.left().clone(), p.right().clone());
    let f = FinMap::from_fn(c.left(), &l, |w| l.pair(m1.f.at(w), m2.f.at(w)));
    let g = FinMap::from_fn(&r, c.right(), |s| match r.side(s) {
        Side::Left(x) => m1.g.at(x),
        Side::Right(y) => m2.g.at(y),
    });
    DialMorphism::derived(c, &p, f, g, "pairing")
}

/// The two injections into `coproduct(a, b)`.
pub fn injections(a: &DialObject, b: &DialObject) -> Result<(DialMorphism, DialMorphism)> {
    let s = coproduct(a, b)?;
    let (l, r) = (s.left(), s.right());
    let inl = FinMap::from_fn(a.left(), l, |u| l.inl(u));
    let inr = FinMap::from_fn(b.left(), l, |v| l.inr(v));
    let fst = FinMap::from_fn(r, a.right(), |k| r.unpair(k).0);
    let snd = FinMap::from_fn(r, b.right(), |k| r.unpair(k).1);
    Ok((
        DialMorphism::derived(a, &s, inl, fst, "first injection")?,
        DialMorphism::derived(b, &s, inr, snd, "second injection")?,
    ))
}

/// `[m₁, m₂]: A ⊕ B → C` for `m₁: A → C`, `m₂: B → C`.
pub fn copairing(m1: &DialMorphism, m2: &DialMorphism) -> Result<DialMorphism> {
    if m1.target != m2.target {
        return Err(Error::EndpointMismatch("copairing needs a common target".into()));
    }
    let (a, b, c) = (&m1.source, &m2.source, &m1.target);
    let s = coproduct(a, b)?;
    let (l, r) = (s.left().clone(), s.right().clone());
    let f = FinMap::from_fn(&l, c.left(), |k| match l.side(k) {
        Side::Left(u) => m1.f.at(u),
        Side::Right(v) => m2.f.at(v),
    });
    let g = FinMap::from_fn(c.right(), &r, |z| r.pair(m1.g.at(z), m2.g.at(z)));
    DialMorphism::derived(&s, c, f, g, "copairing")
}

/// Index helpers for the right carrier `X^V × Y^U` of a tensor.
struct TensorRight<'a> {
    right: &'a FinSet,
    fx: &'a FinSet,
    gy: &'a FinSet,
}

impl<'a> TensorRight<'a> {
    fn of(t: &'a DialObject) -> Self {
        let right = t.right();
        let (fx, gy) = right.factors().expect("tensor right carrier is a product");
        TensorRight { right, fx, gy }
    }

    /// Tables `(F: V → X, G: U → Y)` of element `k`.
    fn split(&self, k: usize) -> (Vec<usize>, Vec<usize>) {
        let (i, j) = self.right.unpair(k);
        (self.fx.decode(i), self.gy.decode(j))
    }

    fn join(&self, f: &[usize], g: &[usize]) -> usize {
        self.right.pair(self.fx.encode(f), self.gy.encode(g))
    }
}

/// `m₁ ⊗ m₂: A ⊗ B → A′ ⊗ B′`.
pub fn tensor_map(m1: &DialMorphism, m2: &DialMorphism, limits: &Limits) -> Result<DialMorphism> {
    let src = tensor(&m1.source, &m2.source, limits)?;
    let tgt = tensor(&m1.target, &m2.target, limits)?;
    let (sl, tl) = (src.left(), tgt.left());
    let f = FinMap::from_fn(sl, tl, |k| {
        let (u, v) = sl.unpair(k);
        tl.pair(m1.f.at(u), m2.f.at(v))
    });
    let (sr, tr) = (TensorRight::of(&src), TensorRight::of(&tgt));
    let (u_set, v_set) = (m1.source.left(), m2.source.left());
    let g = FinMap::from_fn(tgt.right(), src.right(), |k| {
        let (fp, gp) = tr.split(k);
        let fv: Vec<usize> = v_set.indices().map(|v| m1.g.at(fp[m2.f.at(v)])).collect();
        let gu: Vec<usize> = u_set.indices().map(|u| m2.g.at(gp[m1.f.at(u)])).collect();
        sr.join(&fv, &gu)
    });
    DialMorphism::derived(&src, &tgt, f, g, "tensor of morphisms")
}

/// `λ: I ⊗ A → A` and its inverse.
pub fn left_unitor(a: &DialObject, limits: &Limits) -> Result<(DialMorphism, DialMorphism)> {
    let i = unit_object(a.orientation());
    let ia = tensor(&i, a, limits)?;
    let l = ia.left();
    let r = TensorRight::of(&ia);
    let to_f = FinMap::from_fn(l, a.left(), |k| l.unpair(k).1);
    let to_g = FinMap::from_fn(a.right(), ia.right(), |x| {
        r.join(&vec![0; a.left().len()], &[x])
    });
    let from_f = FinMap::from_fn(a.left(), l, |u| l.pair(0, u));
    let from_g = FinMap::from_fn(ia.right(), a.right(), |k| r.split(k).1[0]);
    Ok((
        DialMorphism::derived(&ia, a, to_f, to_g, "left unitor")?,
        DialMorphism::derived(a, &ia, from_f, from_g, "inverse left unitor")?,
    ))
}

/// `ρ: A ⊗ I → A` and its inverse.
pub fn right_unitor(a: &DialObject, limits: &Limits) -> Result<(DialMorphism, DialMorphism)> {
    let i = unit_object(a.orientation());
    let ai = tensor(a, &i, limits)?;
    let l = ai.left();
    let r = TensorRight::of(&ai);
    let to_f = FinMap::from_fn(l, a.left(), |k| l.unpair(k).0);
    let to_g = FinMap::from_fn(a.right(), ai.right(), |x| {
        r.join(&[x], &vec![0; a.left().len()])
    });
    let from_f = FinMap::from_fn(a.left(), l, |u| l.pair(u, 0));
    let from_g = FinMap::from_fn(ai.right(), a.right(), |k| r.split(k).0[0]);
    Ok((
        DialMorphism::derived(&ai, a, to_f, to_g, "right unitor")?,
        DialMorphism::derived(a, &ai, from_f, from_g, "inverse right unitor")?,
    ))
}

/// `σ: A ⊗ B → B ⊗ A`.
pub fn symmetry(a: &DialObject, b: &DialObject, limits: &Limits) -> Result<DialMorphism> {
    let ab = tensor(a, b, limits)?;
    let ba = tensor(b, a, limits)?;
    let (sl, tl) = (ab.left(), ba.left());
    let f = FinMap::from_fn(sl, tl, |k| {
        let (u, v) = sl.unpair(k);
        tl.pair(v, u)
    });
    let (sr, tr) = (TensorRight::of(&ab), TensorRight::of(&ba));
    let g = FinMap::from_fn(ba.right(), ab.right(), |k| {
        let (g_tab, f_tab) = tr.split(k);
        sr.join(&f_tab, &g_tab)
    });
    DialMorphism::derived(&ab, &ba, f, g, "symmetry")
}

/// `(A ⊗ B) ⊗ C → A ⊗ (B ⊗ C)` and its inverse.
pub fn associator(
    a: &DialObject,
    b: &DialObject,
    c: &DialObject,
    limits: &Limits,
) -> Result<(DialMorphism, DialMorphism)> {
    let ab = tensor(a, b, limits)?;
    let bc = tensor(b, c, limits)?;
    let ab_c = tensor(&ab, c, limits)?;
    let a_bc = tensor(a, &bc, limits)?;
    let (nu, nv, nw) = (a.left().len(), b.left().len(), c.left().len());

    // left carriers: ((u,v),w) and (u,(v,w))
    let (l1, l2) = (ab_c.left(), a_bc.left());
    let (abl, bcl) = (ab.left(), bc.left());
    let fwd_f = FinMap::from_fn(l1, l2, |k| {
        let (uv, w) = l1.unpair(k);
        let (u, v) = abl.unpair(uv);
        l2.pair(u, bcl.pair(v, w))
    });
    let back_f = FinMap::from_fn(l2, l1, |k| {
        let (u, vw) = l2.unpair(k);
        let (v, w) = bcl.unpair(vw);
        l1.pair(abl.pair(u, v), w)
    });

    // right carriers:
    //   (A⊗B)⊗C: (K: W → X^V × Y^U, L: U×V → Z)
    //   A⊗(B⊗C): (F: V×W → X, H: U → Y^W × Z^V)
    let (r1, r2) = (TensorRight::of(&ab_c), TensorRight::of(&a_bc));
    let (rab, rbc) = (TensorRight::of(&ab), TensorRight::of(&bc));
    let fwd_g = FinMap::from_fn(a_bc.right(), ab_c.right(), |k| {
        let (f_tab, h_tab) = r2.split(k);
        let h: Vec<(Vec<usize>, Vec<usize>)> = h_tab.iter().map(|&i| rbc.split(i)).collect();
        let k_tab: Vec<usize> = (0..nw)
            .map(|w| {
                let fv: Vec<usize> = (0..nv).map(|v| f_tab[bcl.pair(v, w)]).collect();
                let gu: Vec<usize> = (0..nu).map(|u| h[u].0[w]).collect();
                rab.join(&fv, &gu)
            })
            .collect();
        let l_tab: Vec<usize> = (0..nu * nv)
            .map(|uv| {
                let (u, v) = abl.unpair(uv);
                h[u].1[v]
            })
            .collect();
        r1.join(&k_tab, &l_tab)
    });
    let back_g = FinMap::from_fn(ab_c.right(), a_bc.right(), |k| {
        let (k_tab, l_tab) = r1.split(k);
        let kk: Vec<(Vec<usize>, Vec<usize>)> = k_tab.iter().map(|&i| rab.split(i)).collect();
        let f_tab: Vec<usize> = (0..nv * nw)
            .map(|vw| {
                let (v, w) = bcl.unpair(vw);
                kk[w].0[v]
            })
            .collect();
        let h_tab: Vec<usize> = (0..nu)
            .map(|u| {
                let yw: Vec<usize> = (0..nw).map(|w| kk[w].1[u]).collect();
                let zv: Vec<usize> = (0..nv).map(|v| l_tab[abl.pair(u, v)]).collect();
                rbc.join(&yw, &zv)
            })
            .collect();
        r2.join(&f_tab, &h_tab)
    });
    Ok((
        DialMorphism::derived(&ab_c, &a_bc, fwd_f, fwd_g, "associator")?,
        DialMorphism::derived(&a_bc, &ab_c, back_f, back_g, "inverse associator")?,
    ))
}

/// `curry(m): A → (B ⊸ C)` for `m: A ⊗ B → C`. The source of `m` must have
/// been built by [`tensor`].
pub fn curry(m: &DialMorphism, limits: &Limits) -> Result<DialMorphism> {
    curry_with_rule(m, limits, HomRule::Residual)
}

pub fn curry_with_rule(m: &DialMorphism, limits: &Limits, rule: HomRule) -> Result<DialMorphism> {
    let (a, b) = match m.source.origin() {
        Origin::Tensor(a, b) => (a.clone(), b.clone()),
        _ => {
            return Err(Error::EndpointMismatch(
                "curry needs a morphism out of a tensor".into(),
            ))
        }
    };
    let c = &m.target;
    let hom = internal_hom_with_rule(&b, c, limits, rule)?;
    let (nu, nv, nz) = (a.left().len(), b.left().len(), c.right().len());
    let src_left = m.source.left();
    let sr = TensorRight::of(&m.source);
    let g_parts: Vec<(Vec<usize>, Vec<usize>)> = (0..nz).map(|z| sr.split(m.g.at(z))).collect();

    let hl = hom.left();
    let (hs, big_hs) = hl.factors().expect("hom left carrier is a product");
    let f1 = FinMap::from_fn(a.left(), hl, |u| {
        let h: Vec<usize> = (0..nv).map(|v| m.f.at(src_left.pair(u, v))).collect();
        let big_h: Vec<usize> = (0..nz).map(|z| g_parts[z].1[u]).collect();
        hl.pair(hs.encode(&h), big_hs.encode(&big_h))
    });
    let hr = hom.right();
    let g1 = FinMap::from_fn(hr, a.right(), |vz| {
        let (v, z) = hr.unpair(vz);
        g_parts[z].0[v]
    });
    debug_assert!(nu == a.left().len());
    DialMorphism::derived(&a, &hom, f1, g1, "curried morphism")
}

/// Inverse of [`curry`]: `n: A → (B ⊸ C)` gives `A ⊗ B → C`. The target of
/// `n` must have been built by [`internal_hom`].
pub fn uncurry(n: &DialMorphism, limits: &Limits) -> Result<DialMorphism> {
    let (b, c) = match n.target.origin() {
        Origin::Hom(b, c) => (b.clone(), c.clone()),
        _ => {
            return Err(Error::EndpointMismatch(
                "uncurry needs a morphism into an internal hom".into(),
            ))
        }
    };
    let a = &n.source;
    let ab = tensor(a, &b, limits)?;
    let (nu, nv) = (a.left().len(), b.left().len());
    let hl = n.target.left();
    let hr = n.target.right();
    let (hs, big_hs) = hl.factors().expect("hom left carrier is a product");
    let parts: Vec<(Vec<usize>, Vec<usize>)> = (0..nu)
        .map(|u| {
            let (i, j) = hl.unpair(n.f.at(u));
            (hs.decode(i), big_hs.decode(j))
        })
        .collect();
    let abl = ab.left();
    let f = FinMap::from_fn(abl, c.left(), |uv| {
        let (u, v) = abl.unpair(uv);
        parts[u].0[v]
    });
    let r = TensorRight::of(&ab);
    let g = FinMap::from_fn(c.right(), ab.right(), |z| {
        let fv: Vec<usize> = (0..nv).map(|v| n.g.at(hr.pair(v, z))).collect();
        let gu: Vec<usize> = (0..nu).map(|u| parts[u].1[z]).collect();
        r.join(&fv, &gu)
    });
    DialMorphism::derived(&ab, &c, f, g, "uncurried morphism")
}

/// Number of map pairs `(f, g)` between the carriers of `a` and `b`,
/// valid or not.
pub fn candidate_count(a: &DialObject, b: &DialObject) -> Option<u64> {
    let fs = (b.left().len() as u64).checked_pow(a.left().len().try_into().ok()?)?;
    let gs = (a.right().len() as u64).checked_pow(b.right().len().try_into().ok()?)?;
    fs.checked_mul(gs)
}

/// Walks every valid pair in canonical order, deciding each `g(y)` pointwise:
/// for fixed `f`, the admissible images of `y` do not depend on the other
/// values of `g`.
///
/// `admissible(f, y, x)` says whether `g(y) = x` is allowed for the forward
/// map `f` (given as a table).
pub(crate) fn for_each_valid_pair(
    f_dom: &FinSet,
    f_cod: &FinSet,
    g_dom: &FinSet,
    g_cod: &FinSet,
    limits: &Limits,
    mut admissible: impl FnMut(&[usize], usize, usize) -> bool,
    mut visit: impl FnMut(&[usize], &[usize]),
) -> Result<()> {
    for f in FinMap::all(f_dom, f_cod, limits)? {
        let f = f.table();
        let allowed: Vec<Vec<usize>> = g_dom
            .indices()
            .map(|y| g_cod.indices().filter(|&x| admissible(f, y, x)).collect())
            .collect();
        if allowed.iter().any(Vec::is_empty) {
            continue;
        }
        // odometer over the product of the allowed lists, last slot fastest
        let mut pos = vec![0usize; allowed.len()];
        let mut g: Vec<usize> = allowed.iter().map(|l| l[0]).collect();
        'odometer: loop {
            visit(f, &g);
            let mut slot = allowed.len();
            while slot > 0 {
                slot -= 1;
                pos[slot] += 1;
                if pos[slot] < allowed[slot].len() {
                    g[slot] = allowed[slot][pos[slot]];
                    continue 'odometer;
                }
                pos[slot] = 0;
                g[slot] = allowed[slot][0];
            }
            break;
        }
    }
    Ok(())
}

fn admit_enumeration(a: &DialObject, b: &DialObject, limits: &Limits) -> Result<()> {
    limits
        .admit(|| "morphism enumeration".to_string(), candidate_count(a, b))
        .map(|_| ())
}

/// Every morphism `a → b`, ordered by `(f, g)` tables.
pub fn enumerate_morphisms(
    a: &DialObject,
    b: &DialObject,
    limits: &Limits,
) -> Result<Vec<DialMorphism>> {
    same_orientation(a, b)?;
    admit_enumeration(a, b, limits)?;
    let ori = a.orientation();
    let mut out = Vec::new();
    for_each_valid_pair(
        a.left(),
        b.left(),
        b.right(),
        a.right(),
        limits,
        |f, y, x| a.left().indices().all(|u| ori.le(a.at(u, x), b.at(f[u], y))),
        |f, g| {
            out.push(DialMorphism::trusted(
                a,
                b,
                FinMap::from_fn(a.left(), b.left(), |u| f[u]),
                FinMap::from_fn(b.right(), a.right(), |y| g[y]),
            ))
        },
    )?;
    Ok(out)
}

/// `|Hom(a, b)|`, without materializing the morphisms.
pub fn count_morphisms(a: &DialObject, b: &DialObject, limits: &Limits) -> Result<u64> {
    same_orientation(a, b)?;
    admit_enumeration(a, b, limits)?;
    let ori = a.orientation();
    let mut total = 0u64;
    for f in FinMap::all(a.left(), b.left(), limits)? {
        let mut ways = 1u64;
        for y in b.right().indices() {
            let n = a
                .right()
                .indices()
                .filter(|&x| a.left().indices().all(|u| ori.le(a.at(u, x), b.at(f.at(u), y))))
                .count() as u64;
            ways *= n;
            if ways == 0 {
                break;
            }
        }
        total += ways;
    }
    Ok(total)
}
