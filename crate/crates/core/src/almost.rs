//! Ind-modules indexed by the levels of `V`, and the almost-zero, firm and
//! closed predicates.
//!
//! An [`IndModule`] is a sequence of presented modules with transition maps
//! `M_j → M_{j+1}`. The ideal `m` is the sequence `V → V → …` with transitions
//! multiplication by `δ_j = t^(1/p^j − 1/p^(j+1))`, the `j`-th copy standing
//! for `t^(1/p^j)V`. Tensoring with `m` keeps the components and multiplies
//! each transition by `δ_j`.
//!
//! Verdicts computed from finitely many levels are reported as
//! [`Verdict::HoldsAtLevel`]; exact answers derived from closed forms
//! (monomial shapes, tagged constants) are [`Verdict::CertifiedStructural`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};

use crate::base_ring::{BaseElem, PAdicExponent, RingConfig};
use crate::error::{Error, Result};
use crate::linalg::PolyMatrix;
use crate::module::{ModuleMap, PresentedModule};
use crate::monomial::MonomialModule;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    IdealM,
    MTilde,
    Residue,
    Zero,
    FirmOf(String),
    HomMTilde(String),
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::IdealM => write!(f, "IDEAL_M"),
            Tag::MTilde => write!(f, "M_TILDE"),
            Tag::Residue => write!(f, "RESIDUE_V_MOD_M"),
            Tag::Zero => write!(f, "ZERO"),
            Tag::FirmOf(s) => write!(f, "FIRM_OF({s})"),
            Tag::HomMTilde(s) => write!(f, "HOM_M_TILDE({s})"),
        }
    }
}

/// `t^(1/p^j − 1/p^(j+1))`.
pub fn delta(ring: &RingConfig, j: u32) -> Result<BaseElem> {
    BaseElem::t_pow(ring, PAdicExponent::new(ring.p, ring.p - 1, j + 1))
}

/// `t^(1/p^j)`.
pub fn t_root(ring: &RingConfig, j: u32) -> Result<BaseElem> {
    BaseElem::t_pow(ring, PAdicExponent::unit_fraction(ring.p, j))
}

pub(crate) fn lift_matrix(m: &PolyMatrix, p: u32, from: u32, to: u32) -> PolyMatrix {
    if to <= from {
        return m.clone();
    }
    let k = (p as u64).pow(to - from);
    m.map(|x| x.substitute_power(k))
}

type ComponentFn = dyn Fn(u32) -> Result<PresentedModule> + Send + Sync;
type TransitionFn = dyn Fn(u32, &PresentedModule, &PresentedModule) -> Result<ModuleMap> + Send + Sync;
type MapFn = dyn Fn(u32, &PresentedModule, &PresentedModule) -> Result<ModuleMap> + Send + Sync;

struct IndInner {
    name: String,
    ring: RingConfig,
    tag: Option<Tag>,
    shape: Option<MonomialModule>,
    constant: bool,
    component: Box<ComponentFn>,
    transition: Box<TransitionFn>,
    components: Mutex<HashMap<u32, PresentedModule>>,
    transitions: Mutex<HashMap<u32, ModuleMap>>,
}

/// A level-indexed direct system of presented modules.
#[derive(Clone)]
pub struct IndModule {
    inner: Arc<IndInner>,
}

impl fmt::Debug for IndModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndModule({})", self.inner.name)
    }
}

impl IndModule {
    pub fn from_recipes(
        name: impl Into<String>,
        ring: &RingConfig,
        component: impl Fn(u32) -> Result<PresentedModule> + Send + Sync + 'static,
        transition: impl Fn(u32, &PresentedModule, &PresentedModule) -> Result<ModuleMap> + Send + Sync + 'static,
    ) -> Self {
        Self::build(name.into(), ring, None, None, false, Box::new(component), Box::new(transition))
    }

    fn build(
        name: String,
        ring: &RingConfig,
        tag: Option<Tag>,
        shape: Option<MonomialModule>,
        constant: bool,
        component: Box<ComponentFn>,
        transition: Box<TransitionFn>,
    ) -> Self {
        IndModule {
            inner: Arc::new(IndInner {
                name,
                ring: ring.clone(),
                tag,
                shape,
                constant,
                component,
                transition,
                components: Mutex::new(HashMap::new()),
                transitions: Mutex::new(HashMap::new()),
            }),
        }
    }

    fn with_meta(&self, name: String, tag: Option<Tag>, shape: Option<MonomialModule>) -> Self {
        let a = self.clone();
        let b = self.clone();
        Self::build(
            name,
            &self.inner.ring,
            tag,
            shape,
            self.inner.constant,
            Box::new(move |j| a.component(j)),
            Box::new(move |j, _, _| b.transition(j)),
        )
    }

    /// The constant system `M → M → …` with identity transitions.
    pub fn constant(m: &PresentedModule) -> Self {
        let shape = MonomialModule::from_presented(m).ok();
        let tag = m.is_zero().then_some(Tag::Zero);
        let mc = m.clone();
        Self::build(
            format!("{m}"),
            m.ring(),
            tag,
            shape,
            true,
            Box::new(move |_| Ok(mc.clone())),
            Box::new(|_, s, _| Ok(ModuleMap::identity(s))),
        )
    }

    pub fn zero(ring: &RingConfig) -> Result<Self> {
        Ok(Self::constant(&PresentedModule::zero(ring)?))
    }

    /// `m = ⋃ t^(1/p^j) V`.
    pub fn ideal_m(ring: &RingConfig) -> Result<Self> {
        let free = PresentedModule::free(ring, 1)?;
        let r = ring.clone();
        Ok(Self::build(
            "m".into(),
            ring,
            Some(Tag::IdealM),
            Some(MonomialModule::ideal_m(ring.p)),
            false,
            Box::new(move |_| Ok(free.clone())),
            Box::new(move |j, s, _| ModuleMap::scalar(s, &delta(&r, j)?)),
        ))
    }

    /// `m ⊗ m`, kept symbolic: transitions multiplication by `δ_j²`.
    pub fn m_tilde(ring: &RingConfig) -> Result<Self> {
        let t = Self::ideal_m(ring)?.tensor_m();
        Ok(t.with_meta("m⊗m".into(), Some(Tag::MTilde), Some(MonomialModule::ideal_m(ring.p))))
    }

    /// `V/m` as the system `V/t^(1/p^j)` with projections.
    pub fn residue(ring: &RingConfig) -> Result<Self> {
        let r = ring.clone();
        Ok(Self::build(
            "V/m".into(),
            ring,
            Some(Tag::Residue),
            Some(MonomialModule::residue(ring.p)),
            false,
            Box::new(move |j| PresentedModule::cyclic(&r, &t_root(&r, j)?)),
            Box::new(|j, s, t| ModuleMap::at_level(s, t, j + 1, PolyMatrix::identity(s.p(), 1))),
        ))
    }

    /// `m ⊗ M` through `m_j ≅ V`: same components, transitions `δ_j · τ_j`.
    pub fn tensor_m(&self) -> Self {
        let a = self.clone();
        let b = self.clone();
        let ring = self.inner.ring.clone();
        Self::build(
            format!("m⊗{}", self.inner.name),
            &self.inner.ring,
            None,
            self.inner.shape.as_ref().map(MonomialModule::firmify),
            false,
            Box::new(move |j| a.component(j)),
            Box::new(move |j, _, _| {
                let tau = b.transition(j)?;
                let d = ModuleMap::scalar(tau.target(), &delta(&ring, j)?)?;
                tau.then(&d)
            }),
        )
    }

    /// Realizes a monomial module as a level system.
    pub fn from_monomial(ring: &RingConfig, m: &MonomialModule) -> Result<Self> {
        use crate::monomial::IntervalKind::*;
        let mut acc = Self::zero(ring)?;
        for i in &m.summands {
            let piece = match (i.kind, &i.len) {
                (ClosedOpen, _) => Self::constant(&MonomialModule::new(ring.p, [Some(i.clone())]).to_presented(ring)?),
                (OpenClosed, None) => Self::ideal_m(ring)?,
                (OpenClosed, Some(_)) => {
                    let c = MonomialModule::new(ring.p, [i.closedify()]).to_presented(ring)?;
                    Self::constant(&c).tensor_m()
                }
                (ClosedClosed, Some(l)) if l.is_zero() => Self::residue(ring)?,
                (ClosedClosed, Some(l)) => {
                    let (r, l) = (ring.clone(), l.clone());
                    Self::from_recipes(
                        format!("V/t^{l}m"),
                        ring,
                        move |j| {
                            let e = l.add(&PAdicExponent::unit_fraction(r.p, j));
                            PresentedModule::monomial_quotient(&r, &e)
                        },
                        |j, s, t| ModuleMap::at_level(s, t, j + 1, PolyMatrix::identity(s.p(), 1)),
                    )
                }
                (OpenOpen, Some(l)) => Self::open_open(ring, l.clone()),
                _ => return Err(Error::InvalidConfig(format!("unnormalized interval {i}"))),
            };
            acc = acc.direct_sum(&piece)?;
        }
        Ok(acc.with_meta(format!("{m}"), if m.is_zero() { Some(Tag::Zero) } else { None }, Some(m.clone())))
    }

    /// `m/t^l V`: components `V/t^(l − 1/p^j)`, transitions `δ_j`.
    fn open_open(ring: &RingConfig, l: PAdicExponent) -> Self {
        let (r, r2) = (ring.clone(), ring.clone());
        let lc = l.clone();
        Self::from_recipes(
            format!("m/t^{l}V"),
            ring,
            move |j| {
                let e = lc.saturating_sub(&PAdicExponent::unit_fraction(r.p, j));
                PresentedModule::monomial_quotient(&r, &e)
            },
            move |j, s, t| {
                let d = delta(&r2, j)?;
                let lvl = s.level().max(t.level()).max(j + 1);
                let s = s.lift(lvl);
                let dm = PolyMatrix::scalar(r2.p, s.num_gens(), &s.elem_to_poly(&d)?);
                let dm = if t.num_gens() == 0 || s.num_gens() == 0 {
                    PolyMatrix::zero(r2.p, t.num_gens(), s.num_gens())
                } else {
                    dm
                };
                ModuleMap::at_level(&s, t, lvl, dm)
            },
        )
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.inner.ring != other.inner.ring {
            return Err(Error::ConfigMismatch(self.inner.ring.to_string(), other.inner.ring.to_string()));
        }
        let (a, b, c, d) = (self.clone(), other.clone(), self.clone(), other.clone());
        let shape = match (&self.inner.shape, &other.inner.shape) {
            (Some(x), Some(y)) => Some(x.direct_sum(y)),
            _ => None,
        };
        Ok(Self::build(
            format!("{} ⊕ {}", self.inner.name, other.inner.name),
            &self.inner.ring,
            None,
            shape,
            self.inner.constant && other.inner.constant,
            Box::new(move |j| a.component(j)?.direct_sum(&b.component(j)?)),
            Box::new(move |j, s, t| {
                let f = c.transition(j)?.direct_sum(&d.transition(j)?)?;
                ModuleMap::at_level(s, t, f.level(), f.matrix().clone())
            }),
        ))
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn ring(&self) -> &RingConfig {
        &self.inner.ring
    }

    pub fn tag(&self) -> Option<&Tag> {
        self.inner.tag.as_ref()
    }

    /// Isomorphism type of the colimit, when known in closed form.
    pub fn shape(&self) -> Option<&MonomialModule> {
        self.inner.shape.as_ref()
    }

    pub fn is_constant(&self) -> bool {
        self.inner.constant
    }

    pub fn component(&self, j: u32) -> Result<PresentedModule> {
        if let Some(m) = self.inner.components.lock().expect("component cache").get(&j) {
            return Ok(m.clone());
        }
        let m = (self.inner.component)(j)?;
        self.inner.components.lock().expect("component cache").insert(j, m.clone());
        Ok(m)
    }

    /// The transition `M_j → M_{j+1}`.
    pub fn transition(&self, j: u32) -> Result<ModuleMap> {
        if let Some(f) = self.inner.transitions.lock().expect("transition cache").get(&j) {
            return Ok(f.clone());
        }
        let (s, t) = (self.component(j)?, self.component(j + 1)?);
        let f = (self.inner.transition)(j, &s, &t)?;
        if f.source().num_gens() != s.num_gens() || f.target().num_gens() != t.num_gens() {
            return Err(Error::Dimension(format!("transition {j} of {}", self.inner.name)));
        }
        self.inner.transitions.lock().expect("transition cache").insert(j, f.clone());
        Ok(f)
    }

    /// Composite transition `M_j → M_k`.
    pub fn transition_to(&self, j: u32, k: u32) -> Result<ModuleMap> {
        let mut f = ModuleMap::identity(&self.component(j)?);
        for i in j..k {
            f = f.then(&self.transition(i)?)?;
        }
        Ok(f)
    }

    pub fn to_json(&self, levels: u32) -> Result<Value> {
        let comps: Vec<Value> = (0..=levels)
            .map(|j| self.component(j).map(|m| json!(m.decompose().to_string())))
            .collect::<Result<_>>()?;
        Ok(json!({
            "name": self.inner.name,
            "tag": self.inner.tag.as_ref().map(ToString::to_string),
            "shape": self.inner.shape.as_ref().map(ToString::to_string),
            "components": comps,
        }))
    }
}

/// A compatible family of maps `f_j: M_j → N_j`.
#[derive(Clone)]
pub struct IndMap {
    source: IndModule,
    target: IndModule,
    component: Arc<MapFn>,
    identity: bool,
}

impl fmt::Debug for IndMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndMap({} -> {})", self.source.name(), self.target.name())
    }
}

impl IndMap {
    pub fn new(
        source: &IndModule,
        target: &IndModule,
        component: impl Fn(u32, &PresentedModule, &PresentedModule) -> Result<ModuleMap> + Send + Sync + 'static,
    ) -> Self {
        IndMap { source: source.clone(), target: target.clone(), component: Arc::new(component), identity: false }
    }

    pub fn identity(m: &IndModule) -> Self {
        IndMap {
            source: m.clone(),
            target: m.clone(),
            component: Arc::new(|_, s, _| Ok(ModuleMap::identity(s))),
            identity: true,
        }
    }

    /// The constant family of a single map.
    pub fn constant(f: &ModuleMap) -> Self {
        let g = f.clone();
        IndMap {
            source: IndModule::constant(f.source()),
            target: IndModule::constant(f.target()),
            component: Arc::new(move |_, _, _| Ok(g.clone())),
            identity: false,
        }
    }

    /// `μ: m ⊗ M → M`, multiplication by `t^(1/p^j)` on `M_j`.
    pub fn mu(m: &IndModule) -> Result<Self> {
        let source = match m.shape() {
            Some(s) if m.is_constant() && *s == MonomialModule::v(m.ring().p) => IndModule::ideal_m(m.ring())?,
            _ => m.tensor_m(),
        };
        let ring = m.ring().clone();
        Ok(IndMap::new(&source, m, move |j, s, _| ModuleMap::scalar(s, &t_root(&ring, j)?)))
    }

    /// The inclusion `m → V`.
    pub fn inclusion_m(ring: &RingConfig) -> Result<Self> {
        Self::mu(&IndModule::constant(&PresentedModule::free(ring, 1)?))
    }

    /// `m ⊗ f`.
    pub fn tensor_m(&self) -> Self {
        let c = self.component.clone();
        IndMap {
            source: self.source.tensor_m(),
            target: self.target.tensor_m(),
            component: Arc::new(move |j, s, t| c(j, s, t)),
            identity: self.identity,
        }
    }

    pub fn source(&self) -> &IndModule {
        &self.source
    }

    pub fn target(&self) -> &IndModule {
        &self.target
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn component(&self, j: u32) -> Result<ModuleMap> {
        let (s, t) = (self.source.component(j)?, self.target.component(j)?);
        (self.component)(j, &s, &t)
    }

    /// Checks `τ^N_j ∘ f_j = f_{j+1} ∘ τ^M_j` for `j < levels`.
    pub fn check_compatible(&self, levels: u32) -> Result<()> {
        for j in 0..levels {
            let a = self.component(j)?.then(&self.target.transition(j)?)?;
            let b = self.source.transition(j)?.then(&self.component(j + 1)?)?;
            if !a.add(&b.neg())?.is_zero()? {
                return Err(Error::IllDefinedMap(format!("{self:?} not compatible at level {j}")));
            }
        }
        Ok(())
    }

    /// Component-wise kernel with induced transitions.
    pub fn kernel(&self) -> IndModule {
        let (a, b) = (self.clone(), self.clone());
        IndModule::from_recipes(
            format!("ker({:?})", self),
            self.source.ring(),
            move |j| Ok(a.component(j)?.kernel()?.0),
            move |j, s, t| {
                let (_, inc_j) = b.component(j)?.kernel()?;
                let (_, inc_k) = b.component(j + 1)?.kernel()?;
                let g = inc_j.then(&b.source.transition(j)?)?;
                let x = g
                    .factor_through(&inc_k)?
                    .ok_or_else(|| Error::IllDefinedMap("kernel transition does not factor".into()))?;
                let l = g.level().max(inc_k.level());
                ModuleMap::at_level(s, t, l, x)
            },
        )
    }

    /// Component-wise cokernel with induced transitions.
    pub fn cokernel(&self) -> IndModule {
        let (a, b) = (self.clone(), self.clone());
        IndModule::from_recipes(
            format!("coker({:?})", self),
            self.source.ring(),
            move |j| Ok(a.component(j)?.cokernel()?.0),
            move |j, s, t| {
                let (_, _, sec) = b.component(j)?.cokernel_with_section()?;
                let fj = b.component(j)?;
                let (_, proj) = b.component(j + 1)?.cokernel()?;
                let tau = b.target.transition(j)?;
                let l = fj.level().max(proj.level()).max(tau.level());
                let p = s.p();
                let sec = lift_matrix(&sec, p, fj.level(), l);
                let m = proj.lift(l).matrix().mul(tau.lift(l).matrix())?.mul(&sec)?;
                ModuleMap::at_level(s, t, l, m)
            },
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    HoldsAtLevel(u32),
    Fails,
    CertifiedStructural,
}

/// Per-level evidence: the level, and the smallest `e` with `t^e` killing the
/// component when that component is a sum of monomial quotients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelWitness {
    pub level: u32,
    pub annihilator: Option<PAdicExponent>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostCertificate {
    pub verdict: Verdict,
    pub witness: Vec<LevelWitness>,
}

impl AlmostCertificate {
    pub fn certified(holds: bool) -> Self {
        AlmostCertificate {
            verdict: if holds { Verdict::CertifiedStructural } else { Verdict::Fails },
            witness: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict != Verdict::Fails
    }

    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::CertifiedStructural
    }

    /// Conjunction: fails if either fails, certified if both are.
    pub fn and(self, other: AlmostCertificate) -> Self {
        let verdict = match (&self.verdict, &other.verdict) {
            (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
            (Verdict::CertifiedStructural, Verdict::CertifiedStructural) => Verdict::CertifiedStructural,
            (Verdict::HoldsAtLevel(a), Verdict::HoldsAtLevel(b)) => Verdict::HoldsAtLevel(*a.min(b)),
            (Verdict::HoldsAtLevel(a), _) | (_, Verdict::HoldsAtLevel(a)) => Verdict::HoldsAtLevel(*a),
        };
        let mut witness = self.witness;
        witness.extend(other.witness);
        AlmostCertificate { verdict, witness }
    }

    pub fn to_json(&self) -> Value {
        let verdict = match &self.verdict {
            Verdict::HoldsAtLevel(j) => json!({"holds_at_level": j}),
            Verdict::Fails => json!("fails"),
            Verdict::CertifiedStructural => json!("certified_structural"),
        };
        json!({"verdict": verdict, "levels": self.witness.iter().map(|w| json!({
            "level": w.level,
            "annihilator": w.annihilator.as_ref().map(ToString::to_string),
            "passed": w.passed,
        })).collect::<Vec<_>>()})
    }
}

fn annihilator_exponent(m: &PresentedModule) -> Option<PAdicExponent> {
    let d = m.decompose();
    if d.free_rank > 0 {
        return None;
    }
    let e = d.monomial_exponents()?;
    Some(e.into_iter().max().unwrap_or_else(|| PAdicExponent::zero(m.p())))
}

/// A finitely presented module over `V` is almost zero only when it is zero;
/// over `V/t^c` the annihilator `t^(1/p^J)` is tested.
pub fn is_almost_zero_presented(m: &PresentedModule, level: u32) -> Result<AlmostCertificate> {
    if m.is_zero() {
        return Ok(AlmostCertificate::certified(true));
    }
    if m.ring().truncation().is_none() {
        return Ok(AlmostCertificate::certified(false));
    }
    let passed = m.annihilated_by(&t_root(m.ring(), level)?)?;
    Ok(AlmostCertificate {
        verdict: if passed { Verdict::HoldsAtLevel(level) } else { Verdict::Fails },
        witness: vec![LevelWitness { level, annihilator: annihilator_exponent(m), passed }],
    })
}

/// Tests whether `t^(1/p^j)` kills the image of component `j` within
/// [`IND_WINDOW`] steps for `1 ≤ j ≤ J`, or failing that whether the whole
/// system is ind-zero.
pub fn is_almost_zero(m: &IndModule, level: u32) -> Result<AlmostCertificate> {
    if matches!(m.tag(), Some(Tag::Residue) | Some(Tag::Zero)) {
        return Ok(AlmostCertificate::certified(true));
    }
    if let Some(s) = m.shape() {
        return Ok(AlmostCertificate::certified(s.is_almost_zero()));
    }
    let level = level.max(1);
    let mut witness = Vec::new();
    let mut all = true;
    for j in 1..=level {
        let c = m.component(j)?;
        let mut passed = c.annihilated_by(&t_root(m.ring(), j)?)?;
        let mut f = ModuleMap::identity(&c);
        for k in j..j + IND_WINDOW {
            if passed {
                break;
            }
            f = f.then(&m.transition(k)?)?;
            passed = f.then(&ModuleMap::scalar(f.target(), &t_root(m.ring(), j)?)?)?.is_zero()?;
        }
        witness.push(LevelWitness { level: j, annihilator: annihilator_exponent(&c), passed });
        all &= passed;
    }
    if !all {
        all = ind_zero_through(m, level)?;
    }
    Ok(AlmostCertificate { verdict: if all { Verdict::HoldsAtLevel(level) } else { Verdict::Fails }, witness })
}

/// Steps allowed before a class must die in [`ind_zero_through`].
pub const IND_WINDOW: u32 = 3;

/// Every component up to `level` maps to zero within [`IND_WINDOW`] steps.
fn ind_zero_through(m: &IndModule, level: u32) -> Result<bool> {
    for j in 0..level {
        let mut f = ModuleMap::identity(&m.component(j)?);
        let mut dies = f.is_zero()?;
        for k in j..j + IND_WINDOW {
            if dies {
                break;
            }
            f = f.then(&m.transition(k)?)?;
            dies = f.is_zero()?;
        }
        if !dies {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact vanishing of the colimit, witnessed by composite transitions
/// through `J`.
pub fn is_ind_zero(m: &IndModule, level: u32) -> Result<AlmostCertificate> {
    if matches!(m.tag(), Some(Tag::Zero)) {
        return Ok(AlmostCertificate::certified(true));
    }
    if let Some(s) = m.shape() {
        return Ok(AlmostCertificate::certified(s.is_zero()));
    }
    let ok = ind_zero_through(m, level)?;
    Ok(AlmostCertificate { verdict: if ok { Verdict::HoldsAtLevel(level) } else { Verdict::Fails }, witness: Vec::new() })
}

pub fn is_almost_iso_presented(f: &ModuleMap, level: u32) -> Result<AlmostCertificate> {
    let k = is_almost_zero_presented(&f.kernel()?.0, level)?;
    let c = is_almost_zero_presented(&f.cokernel()?.0, level)?;
    Ok(k.and(c))
}

pub fn is_almost_iso(f: &IndMap, level: u32) -> Result<AlmostCertificate> {
    if f.is_identity() {
        return Ok(AlmostCertificate::certified(true));
    }
    f.check_compatible(level)?;
    Ok(is_almost_zero(&f.kernel(), level)?.and(is_almost_zero(&f.cokernel(), level)?))
}

/// Kernel and cokernel vanish in the colimit (zero transitions through `J`).
pub fn is_exact_iso(f: &IndMap, level: u32) -> Result<AlmostCertificate> {
    if f.is_identity() {
        return Ok(AlmostCertificate::certified(true));
    }
    f.check_compatible(level)?;
    Ok(is_ind_zero(&f.kernel(), level)?.and(is_ind_zero(&f.cokernel(), level)?))
}

/// `m̃ ⊗ M`, computed as `m ⊗ M`.
pub fn firmify(m: &IndModule) -> Result<IndModule> {
    match m.tag() {
        Some(Tag::FirmOf(_)) | Some(Tag::IdealM) | Some(Tag::MTilde) | Some(Tag::Zero) => return Ok(m.clone()),
        _ => {}
    }
    if let Some(s) = m.shape() {
        let f = s.firmify();
        if f.is_zero() {
            return IndModule::zero(m.ring());
        }
        if m.is_constant() && *s == MonomialModule::v(m.ring().p) {
            return IndModule::ideal_m(m.ring());
        }
    }
    let t = m.tensor_m();
    let shape = t.shape().cloned();
    Ok(t.with_meta(format!("m̃⊗{}", m.name()), Some(Tag::FirmOf(m.name().to_string())), shape))
}

pub fn firmify_presented(m: &PresentedModule) -> Result<IndModule> {
    firmify(&IndModule::constant(m))
}

/// `Hom(m̃, M)` on the monomial class.
pub fn closedify(m: &IndModule) -> Result<PresentedModule> {
    let s = m.shape().ok_or_else(|| Error::NonMonomialModule(m.name().to_string()))?;
    s.closedify().to_presented(m.ring())
}

pub fn closedify_presented(m: &PresentedModule) -> Result<PresentedModule> {
    MonomialModule::from_presented(m)?.closedify().to_presented(m.ring())
}

/// `Hom(m̃, M)` wrapped as a constant system.
pub fn closedify_ind(m: &IndModule) -> Result<IndModule> {
    let c = IndModule::constant(&closedify(m)?);
    let shape = c.shape().cloned();
    Ok(c.with_meta(format!("Hom(m̃, {})", m.name()), Some(Tag::HomMTilde(m.name().to_string())), shape))
}

/// `(−)_! = m̃ ⊗ Hom(m̃, −)`.
pub fn shriek(m: &IndModule) -> Result<IndModule> {
    firmify(&IndModule::constant(&closedify(m)?))
}

/// `(−)_!` on a map between closed presented modules.
pub fn shriek_map(f: &ModuleMap) -> Result<IndMap> {
    for m in [f.source(), f.target()] {
        if !MonomialModule::from_presented(m)?.is_closed() {
            return Err(Error::NonMonomialModule(m.to_string()));
        }
    }
    Ok(IndMap::constant(f).tensor_m())
}

/// Firm iff `μ: m ⊗ M → M` is an isomorphism.
pub fn is_firm(m: &IndModule, level: u32) -> Result<AlmostCertificate> {
    if let Some(s) = m.shape() {
        return Ok(AlmostCertificate::certified(s.is_firm()));
    }
    is_exact_iso(&IndMap::mu(m)?, level)
}

/// A presented module is firm iff `t` acts invertibly on it.
pub fn is_firm_presented(m: &PresentedModule) -> AlmostCertificate {
    let d = m.decompose();
    let firm = d.free_rank == 0 && d.torsion.iter().all(|x| x.valuation().is_some_and(PAdicExponent::is_zero));
    AlmostCertificate::certified(firm)
}

/// Closed iff `μ′: M → Hom(m, M)` is an isomorphism; decided on the
/// monomial class.
pub fn is_closed(m: &IndModule, _level: u32) -> Result<AlmostCertificate> {
    let s = m.shape().ok_or_else(|| Error::NonMonomialModule(m.name().to_string()))?;
    Ok(AlmostCertificate::certified(s.is_closed()))
}

pub fn is_closed_presented(_m: &PresentedModule) -> AlmostCertificate {
    AlmostCertificate::certified(true)
}

/// `μ′: M → Hom(m, M)` at level `j` is multiplication by `t^(1/p^j)` on `M`;
/// its kernels and cokernels are tested for annihilation at the same rate.
pub fn mu_prime_certificate(m: &PresentedModule, level: u32) -> Result<AlmostCertificate> {
    let mut witness = Vec::new();
    let mut all = true;
    for j in 1..=level.max(1) {
        let t = t_root(m.ring(), j)?;
        let f = ModuleMap::scalar(m, &t)?;
        for piece in [f.kernel()?.0, f.cokernel()?.0] {
            let passed = piece.annihilated_by(&t)?;
            witness.push(LevelWitness { level: j, annihilator: annihilator_exponent(&piece), passed });
            all &= passed;
        }
    }
    Ok(AlmostCertificate { verdict: if all { Verdict::HoldsAtLevel(level) } else { Verdict::Fails }, witness })
}

/// `Ext⁰` and `Ext¹` of a firm `M` into an almost zero `N` vanish.
///
/// `Ext^i(colim M_j, N)` is squeezed between `lim` and `lim¹` of the system
/// `Ext^i(M_j, N)`; both vanish when every pullback along a transition is
/// zero, which is tested for `j < J`. An ind-module `N` is evaluated at level
/// `J + 1`.
pub fn colocal_ext_vanishing(
    m: &IndModule,
    n: &IndModule,
    level: u32,
    check_preconditions: bool,
) -> Result<AlmostCertificate> {
    let level = level.max(1);
    if check_preconditions {
        if !is_firm(m, level)?.holds() {
            return Err(Error::Precondition(format!("{} is not firm", m.name())));
        }
        if !is_almost_zero(n, level)?.holds() {
            return Err(Error::Precondition(format!("{} is not almost zero", n.name())));
        }
    }
    if matches!(n.tag(), Some(Tag::Zero)) || matches!(m.tag(), Some(Tag::Zero)) {
        return Ok(AlmostCertificate::certified(true));
    }
    let ne = n.component(level + 1)?;
    let mut witness = Vec::new();
    let mut all = true;
    for j in 0..level {
        let tau = m.transition(j)?;
        let mut passed = true;
        for i in 0..=1 {
            passed &= tau.ext_pullback_is_zero(&ne, i)?;
        }
        witness.push(LevelWitness { level: j, annihilator: None, passed });
        all &= passed;
    }
    Ok(AlmostCertificate { verdict: if all { Verdict::HoldsAtLevel(level) } else { Verdict::Fails }, witness })
}

/// `Hom(m̃, colim Nᵢ) ≅ colim Hom(m̃, Nᵢ)` for a finite chain: both sides are
/// computed from closed forms, and the right side is also evaluated on
/// components at level `J`.
pub fn compactness_check(chain: &[IndModule], level: u32) -> Result<bool> {
    let Some(last) = chain.last() else {
        return Ok(true);
    };
    let lhs = closedify(last)?;
    let homs: Vec<PresentedModule> = chain.iter().map(closedify).collect::<Result<_>>()?;
    let rhs = homs.last().expect("nonempty chain");
    let level_ok = {
        let free = PresentedModule::free(last.ring(), 1)?;
        let a = free.hom_module(&last.component(level)?)?;
        let b = free.hom_module(&chain[chain.len() - 1].component(level)?)?;
        a.iso_test(&b)
    };
    Ok(lhs.iso_test(rhs) && level_ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(p: u32) -> RingConfig {
        RingConfig::perfect(p).unwrap()
    }

    #[test]
    fn almost_zero_examples() {
        let ring = v(2);
        assert!(is_almost_zero(&IndModule::residue(&ring).unwrap(), 3).unwrap().is_certified());
        assert!(!is_almost_zero(&IndModule::ideal_m(&ring).unwrap(), 3).unwrap().holds());
        let q = PresentedModule::monomial_quotient(&ring, &PAdicExponent::unit_fraction(2, 2)).unwrap();
        assert!(!is_almost_zero_presented(&q, 3).unwrap().holds());
    }

    #[test]
    fn almost_iso_examples() {
        let ring = v(3);
        let inc = IndMap::inclusion_m(&ring).unwrap();
        let c = is_almost_iso(&inc, 4).unwrap();
        assert_eq!(c.verdict, Verdict::HoldsAtLevel(4));
        let free = PresentedModule::free(&ring, 1).unwrap();
        let t = ModuleMap::scalar(&free, &BaseElem::t_pow(&ring, PAdicExponent::integer(3, 1)).unwrap()).unwrap();
        assert!(!is_almost_iso(&IndMap::constant(&t), 3).unwrap().holds());
        assert!(is_almost_iso(&IndMap::identity(&IndModule::constant(&free)), 3).unwrap().is_certified());
    }

    #[test]
    fn m_tilde_multiplication() {
        let ring = v(2);
        let mu = IndMap::mu(&IndModule::ideal_m(&ring).unwrap()).unwrap();
        assert!(is_almost_iso(&mu, 4).unwrap().holds());
        assert!(is_exact_iso(&mu.tensor_m(), 4).unwrap().holds());
    }

    #[test]
    fn firm_and_closed() {
        let ring = v(2);
        let free = PresentedModule::free(&ring, 1).unwrap();
        assert_eq!(firmify_presented(&free).unwrap().tag(), Some(&Tag::IdealM));
        assert!(is_firm(&IndModule::ideal_m(&ring).unwrap(), 3).unwrap().holds());
        assert!(!is_firm(&IndModule::constant(&free), 3).unwrap().holds());
        assert!(closedify(&IndModule::residue(&ring).unwrap()).unwrap().is_zero());
        assert!(closedify(&IndModule::ideal_m(&ring).unwrap()).unwrap().iso_test(&free));
        let raw = IndModule::constant(&free).tensor_m();
        let stripped = IndModule::from_recipes("m'", &ring, move |j| raw.component(j), {
            let raw2 = IndModule::constant(&free).tensor_m();
            move |j, _, _| raw2.transition(j)
        });
        assert!(is_firm(&stripped, 3).unwrap().holds());
    }

    #[test]
    fn ext_vanishing() {
        let ring = v(3);
        let m = IndModule::ideal_m(&ring).unwrap();
        let n = IndModule::residue(&ring).unwrap();
        assert!(colocal_ext_vanishing(&m, &n, 3, true).unwrap().holds());
        let vv = IndModule::constant(&PresentedModule::free(&ring, 1).unwrap());
        assert!(colocal_ext_vanishing(&vv, &n, 3, true).is_err());
        assert!(!colocal_ext_vanishing(&vv, &n, 3, false).unwrap().holds());
    }

    #[test]
    fn monomial_realizations_are_consistent() {
        use crate::monomial::{Interval, IntervalKind};
        let ring = v(2);
        let l = PAdicExponent::new(2, 3u32, 1);
        for k in [IntervalKind::ClosedOpen, IntervalKind::OpenClosed, IntervalKind::ClosedClosed, IntervalKind::OpenOpen] {
            let mm = MonomialModule::new(2, [Interval::new(k, Some(l.clone()))]);
            let ind = IndModule::from_monomial(&ring, &mm).unwrap();
            for j in 0..4 {
                ind.transition(j).unwrap();
            }
        }
    }
}
