//! Towers `A_n = A/ω^n`: Frobenius checks, the tilt of the mixed mock, `A_n^+`
//! against `(A_n)_!!`, the tilting zig-zag and inverse-limit round trips.

use serde_json::{json, Value};

use crate::algebra::{b_shriek_shriek_with_unit, unitalize, Algebra};
use crate::almost::{delta, is_almost_iso, is_exact_iso, lift_matrix, t_root, IndMap, IndModule};
use crate::base_ring::{BaseElem, Mode, PAdicExponent, RingConfig};
use crate::error::{Error, Result};
use crate::fp::Vector;
use crate::linalg::PolyMatrix;
use crate::module::{ModuleMap, PresentedModule};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerSpec {
    pub ring: RingConfig,
    pub omega: PAdicExponent,
    pub depth: u32,
}

impl TowerSpec {
    pub fn new(ring: RingConfig, omega: PAdicExponent, depth: u32) -> Result<Self> {
        if omega.is_zero() {
            return Err(Error::InvalidConfig("ω must be a non-unit".into()));
        }
        if depth == 0 {
            return Err(Error::InvalidConfig("depth must be positive".into()));
        }
        match &ring.mode {
            Mode::CharPTruncated(c) if omega.mul_int(depth as u64) > *c => {
                return Err(Error::InvalidConfig(format!("ω^{depth} = t^{} exceeds the truncation t^{c}", omega.mul_int(depth as u64))));
            }
            Mode::MixedMock { c, .. } if depth > *c || !omega.is_integer() => {
                return Err(Error::InvalidConfig(format!("mixed tower needs ω = p^k and depth ≤ {c}")));
            }
            _ => {}
        }
        Ok(TowerSpec { ring, omega, depth })
    }

    /// `A = V/t^(depth)`, ω = t.
    pub fn truncated(p: u32, depth: u32) -> Result<Self> {
        let c = PAdicExponent::integer(p, depth as u64);
        Self::new(RingConfig::truncated(p, c)?, PAdicExponent::integer(p, 1), depth)
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.ring.to_json();
        v["omega"] = self.omega.to_json();
        v["depth"] = json!(self.depth);
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let ring = RingConfig::from_json(v)?;
        let omega = match v.get("omega") {
            Some(o) => PAdicExponent::from_json(ring.p, o)?,
            None => PAdicExponent::integer(ring.p, 1),
        };
        let depth = v
            .get("depth")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Input("missing depth".into()))?;
        Self::new(ring, omega, depth as u32)
    }
}

fn exps_below(p: u32, level: u32, bound: &PAdicExponent) -> Vec<PAdicExponent> {
    (0u64..).map(|k| PAdicExponent::from_level(p, level, k)).take_while(|e| e < bound).collect()
}

/// `Φ: A/ω^(1/p) → A/ω` on monomial bases: level `L + 1` of the source
/// against level `L` of the target.
pub fn frobenius_iso_check(ring: &RingConfig, omega: &PAdicExponent, level: u32) -> Result<bool> {
    if !ring.is_char_p() {
        return Err(Error::UnsupportedMode { op: "frobenius_iso_check", mode: ring.mode_name() });
    }
    if omega.denom_exp() > level {
        return Err(Error::BadExponent(format!("ω = t^{omega} is finer than level {level}")));
    }
    let p = ring.p;
    let cap = |x: PAdicExponent| match ring.truncation() {
        Some(c) if *c < x => c.clone(),
        _ => x,
    };
    let (src_bound, tgt_bound) = (cap(omega.div_p()), cap(omega.clone()));
    let mut images = Vec::new();
    for e in exps_below(p, level + 1, &src_bound) {
        let y = BaseElem::t_pow(ring, e)?.frobenius()?;
        match y.terms() {
            [(f, 1)] if *f < tgt_bound => images.push(f.clone()),
            _ => return Ok(false),
        }
    }
    images.sort();
    images.dedup();
    Ok(images == exps_below(p, level, &tgt_bound))
}

/// The same check on the non-perfect subring `F_p[t^(1/p^l)]`.
pub fn frobenius_iso_check_subring(p: u32, omega: &PAdicExponent, l: u32) -> Result<bool> {
    if omega.denom_exp() > l {
        return Err(Error::BadExponent(format!("ω = t^{omega} is not in the level-{l} subring")));
    }
    let root = omega.div_p();
    if root.denom_exp() > l {
        return Ok(false);
    }
    let ring = RingConfig::perfect(p)?;
    let mut images = Vec::new();
    for e in exps_below(p, l, &root) {
        let y = BaseElem::t_pow(&ring, e)?.frobenius()?;
        images.push(y.monomial_exponent()?.clone());
    }
    Ok(images == exps_below(p, l, omega))
}

/// `x^k ↔ t^(k/p^n)` between `A/p` for the mixed mock and `V/t` at level `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TiltIso {
    pub p: u32,
    pub n: u32,
    pub basis: Vec<PAdicExponent>,
    pub pairs_checked: usize,
    pub unit_to_unit: bool,
    pub bijective: bool,
    pub multiplicative: bool,
}

impl TiltIso {
    pub fn holds(&self) -> bool {
        self.unit_to_unit && self.bijective && self.multiplicative
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p, "n": self.n, "basis_size": self.basis.len(), "pairs_checked": self.pairs_checked,
            "unit_to_unit": self.unit_to_unit, "bijective": self.bijective, "multiplicative": self.multiplicative,
        })
    }
}

/// Reduction mod `p` of a mixed-mock element, as `(exponent, coefficient)`.
fn mod_p(x: &BaseElem) -> Vec<(PAdicExponent, u64)> {
    let p = x.ring().p as u64;
    x.terms().iter().filter(|(_, c)| c % p != 0).map(|(e, c)| (e.clone(), c % p)).collect()
}

pub fn tilt_basis_iso(p: u32, n: u32, c: u32) -> Result<TiltIso> {
    let mixed = RingConfig::mixed(p, n, c)?;
    let flat = RingConfig::truncated(p, PAdicExponent::integer(p, 1))?;
    let basis = exps_below(p, n, &PAdicExponent::integer(p, 1));
    let lhs: Vec<BaseElem> = basis.iter().map(|e| BaseElem::t_pow(&mixed, e.clone())).collect::<Result<_>>()?;
    let rhs: Vec<BaseElem> = basis.iter().map(|e| BaseElem::t_pow(&flat, e.clone())).collect::<Result<_>>()?;
    let bijective = lhs.iter().zip(&rhs).all(|(a, b)| mod_p(a) == b.terms());
    let unit_to_unit = mod_p(&lhs[0]) == BaseElem::one(&flat).terms();
    let mut multiplicative = true;
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            multiplicative &= mod_p(&lhs[i].mul(&lhs[j])?) == rhs[i].mul(&rhs[j])?.terms();
        }
    }
    Ok(TiltIso { p, n, pairs_checked: basis.len() * basis.len(), basis, unit_to_unit, bijective, multiplicative })
}

/// `A/p` for the mixed mock as an algebra over `F_p[s]/(s^(p^n))`, `s = x`,
/// with structure constants read off the mixed multiplication.
pub fn mixed_residue_algebra(p: u32, n: u32, c: u32) -> Result<Algebra> {
    let mixed = RingConfig::mixed(p, n, c)?;
    let basis = exps_below(p, n, &PAdicExponent::integer(p, 1));
    let d = basis.len();
    let elems: Vec<BaseElem> = basis.iter().map(|e| BaseElem::t_pow(&mixed, e.clone())).collect::<Result<_>>()?;
    let coords = |x: &BaseElem| -> Vector {
        let mut v = vec![0; d];
        for (e, c) in mod_p(x) {
            let k = basis.iter().position(|b| *b == e).expect("reduced exponents lie in the basis");
            v[k] = c as u32;
        }
        v
    };
    let table = (0..d).map(|i| (0..d).map(|j| elems[i].mul(&elems[j]).map(|x| coords(&x))).collect()).collect::<Result<Vec<Vec<_>>>>()?;
    let s = &elems[1.min(d - 1)];
    let s_action = elems.iter().map(|x| x.mul(s).map(|y| coords(&y))).collect::<Result<_>>()?;
    Algebra::new(format!("Z[x]/(x^{}-p, p^{c}) mod p", p.pow(n)), p, d, table, s_action, Some(coords(&elems[0])))
}

/// `A = V^⊕r` with componentwise product, or `A = V[y]/(y^r)` with
/// `y^r = 0` (the truncated `V⟨x^(1/p^k)⟩/(x)`, `r = p^k`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaAlgebra {
    Product(usize),
    Truncated(usize),
}

impl LemmaAlgebra {
    fn rank(self) -> usize {
        match self {
            Self::Product(r) | Self::Truncated(r) => r,
        }
    }

    fn unit(self) -> Vec<bool> {
        match self {
            Self::Product(r) => vec![true; r],
            Self::Truncated(r) => (0..r).map(|i| i == 0).collect(),
        }
    }

    /// `A/t^n` over `R = F_p[s]/(s^N)`, `s = t^(1/p^L)`, `N = n·p^L`.
    fn shadow(self, p: u32, big_n: usize) -> Result<Algebra> {
        let r = self.rank();
        match self {
            Self::Product(_) => {
                let base = Algebra::truncated_base(p, big_n);
                let d = r * big_n;
                let idx = |k: usize, i: usize| k * big_n + i;
                let mut table = vec![vec![vec![0; d]; d]; d];
                let mut s_action = vec![vec![0; d]; d];
                for k in 0..r {
                    for i in 0..big_n {
                        if i + 1 < big_n {
                            s_action[idx(k, i)][idx(k, i + 1)] = 1;
                        }
                        for j in 0..big_n {
                            let prod = base.mul(&base.basis(i), &base.basis(j));
                            for (m, &c) in prod.iter().enumerate() {
                                table[idx(k, i)][idx(k, j)][idx(k, m)] = c;
                            }
                        }
                    }
                }
                let unit: Vector = (0..d).map(|x| u32::from(x % big_n == 0)).collect();
                Algebra::new(format!("(V/t^n)^{r}"), p, big_n, table, s_action, Some(unit))
            }
            Self::Truncated(_) => {
                let mut f = vec![vec![0; big_n]; r + 1];
                f[r][0] = 1;
                Algebra::poly_quotient(p, big_n, &f)
            }
        }
    }
}

/// Facts about `(A_n)_!! → A_n^+`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaAReport {
    pub n: u32,
    pub levels: u32,
    /// The canonical map is an almost isomorphism.
    pub almost_iso: bool,
    /// It is already an isomorphism of ind-modules.
    pub exact_iso: bool,
    /// `m̃ ⊗ −` of it is an isomorphism of ind-modules, so it becomes one
    /// after `(−)_!!`.
    pub firm_iso: bool,
    /// Level-`L` shadows: `V ⊕ B_! → A_n`, whose image is `A_n^+`, is a
    /// ring map.
    pub multiplicative: bool,
    /// `V ⊕_m (m/ω^n m) → V/ω^n` is an almost isomorphism.
    pub square1_almost: bool,
    pub square1_exact: bool,
    /// Generators of `(A_n)_!!` and `A_n^+` at the working level.
    pub basis: (String, String),
}

impl LemmaAReport {
    /// The statement in the almost category: an almost isomorphism of rings
    /// which `(−)_!!` turns into an isomorphism.
    pub fn holds(&self) -> bool {
        self.almost_iso && self.firm_iso && self.multiplicative && self.square1_almost
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n, "levels": self.levels, "almost_iso": self.almost_iso, "exact_iso": self.exact_iso,
            "firm_iso": self.firm_iso, "multiplicative": self.multiplicative,
            "square1_almost": self.square1_almost, "square1_exact": self.square1_exact,
            "a_shriek_shriek": self.basis.0, "a_plus": self.basis.1, "holds": self.holds(),
        })
    }
}

fn power_t(ring: &RingConfig, n: u32) -> Result<BaseElem> {
    BaseElem::t_pow(ring, PAdicExponent::integer(ring.p, n as u64))
}

/// `A_n^+ = coker(m/ω^n m → V/ω^n ⊕ m ⊗ A_n)`, `x ↦ (x, −x·1)`.
pub fn a_n_plus(ring: &RingConfig, a: LemmaAlgebra, n: u32) -> Result<IndModule> {
    Ok(a_plus_map(ring, a, n)?.cokernel())
}

fn a_n_module(ring: &RingConfig, a: LemmaAlgebra, n: u32) -> Result<PresentedModule> {
    let tn = power_t(ring, n)?;
    PresentedModule::from_factors(ring, &vec![tn; a.rank()], 0)
}

fn a_plus_map(ring: &RingConfig, a: LemmaAlgebra, n: u32) -> Result<IndMap> {
    let tn = power_t(ring, n)?;
    let vn = PresentedModule::cyclic(ring, &tn)?;
    let m_mod = IndModule::constant(&vn).tensor_m();
    let target = IndModule::constant(&vn).direct_sum(&IndModule::constant(&a_n_module(ring, a, n)?).tensor_m())?;
    let (r, unit, p) = (ring.clone(), a.unit(), ring.p);
    Ok(IndMap::new(&m_mod, &target, move |j, s, t| {
        let x = t_root(&r, j)?.to_poly(j)?;
        let mut col = vec![x];
        col.extend(unit.iter().map(|&on| if on { Poly::constant(p, p - 1) } else { Poly::zero(p) }));
        ModuleMap::at_level(s, t, j, PolyMatrix::column(p, col))
    }))
}

/// Compares `(A_n)_!!` from the `B_!!` construction with [`a_n_plus`]
/// through levels `0..=levels`, and the ring structure on level-`levels`
/// shadows.
pub fn verify_lemma_a(ring: &RingConfig, a: LemmaAlgebra, n: u32, levels: u32) -> Result<LemmaAReport> {
    if ring.mode != Mode::CharPPerfect {
        return Err(Error::UnsupportedMode { op: "verify_lemmaA", mode: ring.mode_name() });
    }
    if n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    let p = ring.p;
    let carrier = IndModule::constant(&a_n_module(ring, a, n)?);
    let seq = b_shriek_shriek_with_unit(&carrier, Some(a.unit()))?;
    let plus_map = a_plus_map(ring, a, n)?;
    let plus = plus_map.cokernel();

    // (v, b) ↦ (v̄, b) on V ⊕ B_! → V/ω^n ⊕ m⊗A_n, then to the cokernels.
    let (diag, pm) = (seq.diagonal.clone(), plus_map.clone());
    let canonical = IndMap::new(&seq.b_shriek_shriek, &plus, move |j, s, t| {
        let fj = diag.component(j)?;
        let (_, _, sec) = fj.cokernel_with_section()?;
        let (_, proj) = pm.component(j)?.cokernel()?;
        let l = fj.level().max(proj.level());
        let m = proj.lift(l).matrix().mul(&lift_matrix(&sec, p, fj.level(), l))?;
        ModuleMap::at_level(s, t, l, m)
    });
    canonical.check_compatible(levels)?;
    let almost_iso = is_almost_iso(&canonical, levels)?.holds();
    let exact_iso = is_exact_iso(&canonical, levels)?.holds();
    let firm_iso = is_exact_iso(&canonical.tensor_m(), levels)?.holds();

    // Square 1: V ⊕_m (m/ω^n m) against V/ω^n.
    let vn = PresentedModule::cyclic(ring, &power_t(ring, n)?)?;
    let m_mod = IndModule::constant(&vn).tensor_m();
    let r = ring.clone();
    let push = IndMap::new(
        &IndModule::ideal_m(ring)?,
        &IndModule::constant(&PresentedModule::free(ring, 1)?).direct_sum(&m_mod)?,
        move |j, s, t| {
            let x = t_root(&r, j)?.to_poly(j)?;
            ModuleMap::at_level(s, t, j, PolyMatrix::column(p, vec![x, Poly::constant(p, p - 1)]))
        },
    );
    let pushout = push.cokernel();
    let (pu, r) = (push.clone(), ring.clone());
    let compare = IndMap::new(&pushout, &IndModule::constant(&vn), move |j, s, t| {
        let fj = pu.component(j)?;
        let (_, _, sec) = fj.cokernel_with_section()?;
        let x = t_root(&r, j)?.to_poly(j)?;
        let g = PolyMatrix::from_rows(p, vec![vec![Poly::one(p), x]])?;
        let l = fj.level().max(j);
        ModuleMap::at_level(s, t, l, lift_matrix(&g, p, j, l).mul(&lift_matrix(&sec, p, fj.level(), l))?)
    });
    compare.check_compatible(levels)?;
    let square1_almost = is_almost_iso(&compare, levels)?.holds();
    let square1_exact = is_exact_iso(&compare, levels)?.holds();

    let multiplicative = shadow_ring_map(p, a, n, shadow_level(p, a, n, levels))?;
    let basis = (
        seq.b_shriek_shriek.component(levels)?.decompose().to_string(),
        plus.component(levels)?.decompose().to_string(),
    );
    Ok(LemmaAReport { n, levels, almost_iso, exact_iso, firm_iso, multiplicative, square1_almost, square1_exact, basis })
}

/// Largest `L ≤ levels` (at least 1) keeping the shadow of `A_n` at most 64
/// dimensional; multiplicativity does not depend on `L`.
fn shadow_level(p: u32, a: LemmaAlgebra, n: u32, levels: u32) -> u32 {
    (1..=levels.max(1)).rev().find(|&l| a.rank() * n as usize * (p as usize).pow(l) <= 64).unwrap_or(1)
}

/// `V ⊕ B_! → A_n`, `(v, b) ↦ v·1 + t^(1/p^L)·b`, on shadows at level `L`,
/// where `B_! = t^(1/p^L)A_n` carries `b * b′ = t^(1/p^L)·bb′`.
fn shadow_ring_map(p: u32, a: LemmaAlgebra, n: u32, level: u32) -> Result<bool> {
    let big_n = n as usize * (p as usize).pow(level);
    let an = a.shadow(p, big_n)?;
    an.check_axioms()?;
    let unit = an.unit().cloned().expect("unital");
    let s = |x: &[u32]| an.s_mul(x);
    let d = an.dim();
    let table = (0..d).map(|i| (0..d).map(|j| s(&an.mul(&an.basis(i), &an.basis(j)))).collect()).collect();
    let s_action = (0..d).map(|i| s(&an.basis(i))).collect();
    let bs = Algebra::new("t^(1/p^L)A_n", p, big_n, table, s_action, None)?;
    let src = unitalize(&bs)?;
    let mut images: Vec<Vector> = Vec::with_capacity(src.dim());
    let mut cur = unit;
    for _ in 0..big_n {
        images.push(cur.clone());
        cur = an.s_mul(&cur);
    }
    for i in 0..d {
        images.push(s(&an.basis(i)));
    }
    Ok(src.is_hom_via(&an, &images))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigzagReport {
    pub tilt: Option<TiltIso>,
    /// `A_1 ≅ A_1^♭` as algebras over `F_p[s]/(s^(p^n))`.
    pub residue_iso: bool,
    /// `(A_1)_!! → A_1^+`, computed on the characteristic-`p` side.
    pub lemma_a: LemmaAReport,
}

impl ZigzagReport {
    pub fn holds(&self) -> bool {
        self.tilt.as_ref().is_none_or(TiltIso::holds) && self.residue_iso && self.lemma_a.holds()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tilt": self.tilt.as_ref().map(TiltIso::to_json),
            "residue_iso": self.residue_iso,
            "lemma_a": self.lemma_a.to_json(),
            "holds": self.holds(),
        })
    }
}

/// `(A_1)_!! → (A_1^+)_!! ← (A_1^♭)^+_!! ← (A_1^♭)_!!` for `A = V`. On the
/// mixed mock the middle identification is the tilt at level `n`, and both
/// outer maps are the `A_1` case of [`verify_lemma_a`]; in characteristic
/// `p` the tilt is the identity.
pub fn tilting_zigzag(ring: &RingConfig, levels: u32) -> Result<ZigzagReport> {
    let flat = RingConfig::perfect(ring.p)?;
    let lemma_a = verify_lemma_a(&flat, LemmaAlgebra::Product(1), 1, levels)?;
    match ring.mode {
        Mode::MixedMock { n, c } => {
            let tilt = tilt_basis_iso(ring.p, n, c)?;
            let a1 = mixed_residue_algebra(ring.p, n, c)?;
            a1.check_axioms()?;
            let flat1 = Algebra::truncated_base(ring.p, (ring.p as usize).pow(n));
            let images: Vec<Vector> = (0..a1.dim()).map(|i| flat1.basis(i)).collect();
            let residue_iso = a1.is_iso_via(&flat1, &images);
            Ok(ZigzagReport { tilt: Some(tilt), residue_iso, lemma_a })
        }
        _ => Ok(ZigzagReport { tilt: None, residue_iso: true, lemma_a }),
    }
}

/// The limit of a tower of surjections `P_1 ← P_2 ← … ← P_c`, as the kernel
/// of `(x_n) ↦ (π(x_(n+1)) − x_n)`, with its projections.
pub fn tower_limit(levels: &[PresentedModule], transitions: &[ModuleMap]) -> Result<(PresentedModule, Vec<ModuleMap>)> {
    let c = levels.len();
    if c == 0 || transitions.len() + 1 != c {
        return Err(Error::Dimension(format!("{c} levels and {} transitions", transitions.len())));
    }
    for (i, t) in transitions.iter().enumerate() {
        if !t.is_surjective()? {
            return Err(Error::NonSurjective(format!("P_{} → P_{}", i + 2, i + 1)));
        }
    }
    let level = levels
        .iter()
        .map(PresentedModule::level)
        .chain(transitions.iter().map(ModuleMap::level))
        .max()
        .unwrap_or(0);
    let p = levels[0].p();
    let mut sum = levels[0].lift(level);
    for m in &levels[1..] {
        sum = sum.direct_sum(&m.lift(level))?;
    }
    let offsets: Vec<usize> = levels
        .iter()
        .scan(0, |acc, m| {
            let o = *acc;
            *acc += m.num_gens();
            Some(o)
        })
        .collect();
    let mut low = PresentedModule::zero(levels[0].ring())?;
    for m in &levels[..c - 1] {
        low = low.direct_sum(&m.lift(level))?;
    }
    let mut d = PolyMatrix::zero(p, low.num_gens(), sum.num_gens());
    for (i, t) in transitions.iter().enumerate() {
        let pi = t.lift(level);
        let gi = levels[i].num_gens();
        for r in 0..gi {
            d.set(offsets[i] + r, offsets[i] + r, Poly::constant(p, p - 1));
            for col in 0..levels[i + 1].num_gens() {
                d.set(offsets[i] + r, offsets[i + 1] + col, pi.matrix().get(r, col).clone());
            }
        }
    }
    let (lim, inc) = ModuleMap::new(&sum, &low, d)?.kernel()?;
    let projections = levels
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let sel = PolyMatrix::from_fn(p, m.num_gens(), sum.num_gens(), |r, col| {
                if col == offsets[i] + r {
                    Poly::one(p)
                } else {
                    Poly::zero(p)
                }
            });
            let l = inc.level().max(level);
            ModuleMap::new(&lim.lift(l), &m.lift(l), sel.mul(inc.lift(l).matrix())?)
        })
        .collect::<Result<_>>()?;
    Ok((lim, projections))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTrip {
    pub rank: usize,
    pub depth: u32,
    pub firm: bool,
    pub surjective: bool,
    /// `P → lim P_n` is an isomorphism.
    pub to_limit: bool,
    /// `lim ⊗ A_n → P_n` is an isomorphism for every `n`.
    pub from_limit: bool,
}

impl RoundTrip {
    pub fn holds(&self) -> bool {
        self.surjective && self.to_limit && self.from_limit
    }
}

fn round_trip_once(spec: &TowerSpec, p_mod: &PresentedModule) -> Result<(bool, bool)> {
    let ring = &spec.ring;
    let p = ring.p;
    let r = p_mod.num_gens();
    let level = p_mod.level().max(spec.omega.denom_exp());
    let omega = BaseElem::t_pow(ring, spec.omega.clone())?;
    let reduce = |m: &PresentedModule, n: u32| -> Result<PresentedModule> {
        let w = omega.pow(n).to_poly(level)?;
        let m = m.lift(level);
        PresentedModule::new(ring, level, m.relations().hstack(&PolyMatrix::scalar(p, m.num_gens(), &w))?)
    };
    let levels: Vec<PresentedModule> = (1..=spec.depth).map(|n| reduce(p_mod, n)).collect::<Result<_>>()?;
    let transitions: Vec<ModuleMap> = (0..levels.len() - 1)
        .map(|i| ModuleMap::new(&levels[i + 1], &levels[i], PolyMatrix::identity(p, r)))
        .collect::<Result<_>>()?;
    let (lim, projections) = tower_limit(&levels, &transitions)?;

    // P → lim through the compatible tuple (x mod ω^n)_n.
    let l = projections[0].level().max(level);
    let tuple = (1..levels.len()).fold(PolyMatrix::identity(p, r), |acc, _| acc.vstack(&PolyMatrix::identity(p, r)).expect("same width"));
    let sum = levels.iter().skip(1).try_fold(levels[0].lift(l), |acc, m| acc.direct_sum(&m.lift(l)))?;
    let to_sum = ModuleMap::new(&p_mod.lift(l), &sum, tuple)?;
    let incl = lim_inclusion(&lim, &projections, &sum)?;
    let to_limit = match to_sum.factor_through(&incl)? {
        Some(x) => {
            let lv = to_sum.level().max(incl.level());
            ModuleMap::new(&p_mod.lift(lv), &lim.lift(lv), x)?.is_iso()?
        }
        None => false,
    };

    let mut from_limit = true;
    for (n, proj) in (1..=spec.depth).zip(&projections) {
        let lim_n = reduce(&lim.lift(proj.level()), n)?;
        let lv = lim_n.level().max(proj.level());
        let f = ModuleMap::new(&lim_n.lift(lv), &proj.target().lift(lv), proj.lift(lv).matrix().clone())?;
        from_limit &= f.is_iso()?;
    }
    Ok((to_limit, from_limit))
}

fn lim_inclusion(lim: &PresentedModule, projections: &[ModuleMap], sum: &PresentedModule) -> Result<ModuleMap> {
    let l = projections.iter().map(ModuleMap::level).max().unwrap_or(0).max(sum.level());
    let mut m = projections[0].lift(l).matrix().clone();
    for pr in &projections[1..] {
        m = m.vstack(pr.lift(l).matrix())?;
    }
    ModuleMap::new(&lim.lift(l), &sum.lift(l), m)
}

/// Round trip `P → (P ⊗ A_n)_n → lim → P` for `P = A^rank`, and for the firm
/// twist `m̃ ⊗ A^rank` level by level through `levels`.
pub fn tower_roundtrip(spec: &TowerSpec, rank: usize, firm: bool, levels: u32) -> Result<RoundTrip> {
    if !spec.ring.is_char_p() {
        return Err(Error::UnsupportedMode { op: "tower_roundtrip", mode: spec.ring.mode_name() });
    }
    let free = PresentedModule::free(&spec.ring, rank)?;
    let mut ok = (true, true);
    if firm {
        let twisted = IndModule::constant(&free).tensor_m();
        for j in 0..=levels {
            // transitions δ_j commute with reduction mod ω^n
            let tau = twisted.transition(j)?;
            if tau.matrix() != &lift_matrix(&PolyMatrix::scalar(spec.ring.p, rank, &delta(&spec.ring, j)?.to_poly(j + 1)?), spec.ring.p, j + 1, tau.level()) {
                return Err(Error::Incompatible(format!("firm twist transition at level {j}")));
            }
            let r = round_trip_once(spec, &twisted.component(j)?)?;
            ok = (ok.0 && r.0, ok.1 && r.1);
        }
    } else {
        ok = round_trip_once(spec, &free)?;
    }
    Ok(RoundTrip { rank, depth: spec.depth, firm, surjective: true, to_limit: ok.0, from_limit: ok.1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_examples() {
        for p in [2, 3] {
            let v = RingConfig::perfect(p).unwrap();
            assert!(frobenius_iso_check(&v, &PAdicExponent::integer(p, 1), 2).unwrap());
            assert!(!frobenius_iso_check_subring(p, &PAdicExponent::integer(p, 1), 0).unwrap());
            assert!(!frobenius_iso_check_subring(p, &PAdicExponent::integer(p, 1), 2).unwrap());
            let a = RingConfig::truncated(p, PAdicExponent::integer(p, 2)).unwrap();
            assert!(frobenius_iso_check(&a, &PAdicExponent::integer(p, 1), 2).unwrap());
            let mixed = RingConfig::mixed(p, 1, 2).unwrap();
            assert!(frobenius_iso_check(&mixed, &PAdicExponent::integer(p, 1), 1).is_err());
        }
    }

    #[test]
    fn tilt_small() {
        let t = tilt_basis_iso(2, 2, 2).unwrap();
        assert!(t.holds());
        assert_eq!(t.pairs_checked, 16);
        let a = mixed_residue_algebra(3, 1, 2).unwrap();
        a.check_axioms().unwrap();
    }

    #[test]
    fn lemma_a_on_v() {
        let v = RingConfig::perfect(2).unwrap();
        let r = verify_lemma_a(&v, LemmaAlgebra::Product(1), 1, 3).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!(!r.exact_iso && !r.square1_exact);
        for a in [LemmaAlgebra::Product(2), LemmaAlgebra::Truncated(2)] {
            for n in 1..=3 {
                let r = verify_lemma_a(&v, a, n, 2).unwrap();
                assert!(r.holds(), "{a:?} n={n} {r:?}");
            }
        }
    }

    #[test]
    fn round_trips() {
        let spec = TowerSpec::truncated(2, 3).unwrap();
        assert!(tower_roundtrip(&spec, 2, false, 0).unwrap().holds());
        assert!(tower_roundtrip(&spec, 1, true, 2).unwrap().holds());
        let back = TowerSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
    }
}
