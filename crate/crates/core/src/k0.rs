//! Grothendieck-group classes of Perf⁺ objects on the basis `[A]`, `[m̃⊗A]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use rand::Rng;
use serde_json::{json, Value};

use crate::almost::{is_ind_zero, t_root, IndModule};
use crate::base_ring::{BaseElem, PAdicExponent, RingConfig};
use crate::complexes::{ChainComplex, ChainMap, PerfPlusObject};
use crate::error::{Error, Result};
use crate::linalg::{snf, PolyMatrix};
use crate::module::{ModuleMap, PresentedModule};
use crate::poly::Poly;

/// Coordinates `(a, b)` of `a·[A] + b·[m̃⊗A]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct K0Class {
    pub a: i64,
    pub b: i64,
}

impl K0Class {
    pub const ZERO: K0Class = K0Class { a: 0, b: 0 };

    pub fn new(a: i64, b: i64) -> Self {
        K0Class { a, b }
    }

    pub fn to_json(&self) -> Value {
        json!([self.a, self.b])
    }
}

impl Add for K0Class {
    type Output = K0Class;
    fn add(self, o: K0Class) -> K0Class {
        K0Class::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for K0Class {
    type Output = K0Class;
    fn sub(self, o: K0Class) -> K0Class {
        K0Class::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for K0Class {
    type Output = K0Class;
    fn neg(self) -> K0Class {
        K0Class::new(-self.a, -self.b)
    }
}

impl fmt::Display for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Alternating sum of generator multiplicities.
pub fn k0_class(e: &PerfPlusObject) -> K0Class {
    e.multiplicities().iter().fold(K0Class::ZERO, |acc, (i, (a, b))| {
        let c = K0Class::new(*a as i64, *b as i64);
        if i.rem_euclid(2) == 0 { acc + c } else { acc - c }
    })
}

/// `m̃ ⊗ E` and its class.
pub fn projector_firm(e: &PerfPlusObject) -> (PerfPlusObject, K0Class) {
    let f = e.firmify();
    let c = k0_class(&f);
    (f, c)
}

/// `φ(E) = cone(m̃ ⊗ E → E)` and its class.
pub fn projector_phi(e: &PerfPlusObject) -> (PerfPlusObject, K0Class) {
    let f = e.cone_mu();
    let c = k0_class(&f);
    (f, c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    pub class: K0Class,
    pub firm: K0Class,
    pub phi: K0Class,
    pub sum_is_identity: bool,
    pub phi_idempotent: bool,
    pub firm_phi_acyclic: bool,
    pub bookkeeping: bool,
}

impl SplitReport {
    pub fn passed(&self) -> bool {
        self.sum_is_identity && self.phi_idempotent && self.firm_phi_acyclic && self.bookkeeping
    }
}

/// `[m̃⊗E] + [φ(E)] = [E]`, `φ∘φ = φ` on classes, and `m̃ ⊗ φ(E)` acyclic
/// through level `J`.
pub fn split_check(e: &PerfPlusObject, levels: u32) -> Result<SplitReport> {
    let class = k0_class(e);
    let (fe, firm) = projector_firm(e);
    let (pe, phi) = projector_phi(e);
    let (_, phi2) = projector_phi(&pe);
    let acyclic = pe.firmify().complex().is_acyclic(levels)?.holds();
    let bookkeeping =
        e.verify_bookkeeping(levels.min(2))? && fe.verify_bookkeeping(levels.min(2))? && pe.verify_bookkeeping(levels.min(2))?;
    Ok(SplitReport {
        class,
        firm,
        phi,
        sum_is_identity: firm + phi == class,
        phi_idempotent: phi2 == phi,
        firm_phi_acyclic: acyclic,
        bookkeeping,
    })
}

/// `[cone] = [target] − [source]` for a distinguished triangle
/// `source → target → cone`.
#[derive(Clone, Debug)]
pub struct TriangleRelation {
    pub name: String,
    pub source: PerfPlusObject,
    pub target: PerfPlusObject,
    pub cone: PerfPlusObject,
}

impl TriangleRelation {
    pub fn holds(&self) -> bool {
        k0_class(&self.cone) == k0_class(&self.target) - k0_class(&self.source)
    }

    /// The relation after applying `m̃ ⊗ −` to the whole triangle.
    pub fn firmified(&self) -> TriangleRelation {
        TriangleRelation {
            name: format!("m̃⊗({})", self.name),
            source: self.source.firmify(),
            target: self.target.firmify(),
            cone: self.cone.firmify(),
        }
    }

    /// The relation after applying `φ` to the whole triangle.
    pub fn phi(&self) -> TriangleRelation {
        TriangleRelation {
            name: format!("φ({})", self.name),
            source: self.source.cone_mu(),
            target: self.target.cone_mu(),
            cone: self.cone.cone_mu(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RelationLedger {
    pub relations: Vec<TriangleRelation>,
}

impl RelationLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// `E → F → cone(f)` for a strict chain map.
    pub fn harvest_strict(&mut self, name: &str, f: &ChainMap) -> Result<()> {
        self.relations.push(TriangleRelation {
            name: name.to_string(),
            source: PerfPlusObject::strict(f.source())?,
            target: PerfPlusObject::strict(f.target())?,
            cone: PerfPlusObject::cone_strict(f)?,
        });
        Ok(())
    }

    /// `m̃ ⊗ E → E → φ(E)`.
    pub fn harvest_mu(&mut self, name: &str, e: &PerfPlusObject) {
        self.relations.push(TriangleRelation {
            name: name.to_string(),
            source: e.firmify(),
            target: e.clone(),
            cone: e.cone_mu(),
        });
    }

    /// `E → E → cone(id)`.
    pub fn harvest_identity(&mut self, name: &str, e: &PerfPlusObject) {
        self.relations.push(TriangleRelation {
            name: name.to_string(),
            source: e.clone(),
            target: e.clone(),
            cone: e.cone_identity(),
        });
    }

    pub fn verify_all(&self) -> bool {
        self.relations.iter().all(TriangleRelation::holds)
    }

    /// Both projectors carry every relation to a relation.
    pub fn projectors_preserve(&self) -> bool {
        self.relations.iter().all(|r| r.firmified().holds() && r.phi().holds())
    }
}

/// Generator-level report for `A → B = V ⊕ (m̃⊗A) → V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KIdealReport {
    /// `[B] ↦ [V]`.
    pub unit_maps_to_unit: bool,
    /// `(m̃⊗A) ⊗_B V = I/I²` vanishes, so the ideal generator lies in the kernel.
    pub ideal_in_kernel: bool,
    /// The kernel generator is the almost-K generator `[m̃⊗A]`.
    pub kernel_is_almost_class: bool,
    /// `m̃⊗B ≅ m̃⊗V ⊕ m̃⊗A` with explicit inclusion and retraction.
    pub kb_split: bool,
}

impl KIdealReport {
    pub fn passed(&self) -> bool {
        self.unit_maps_to_unit && self.ideal_in_kernel && self.kernel_is_almost_class && self.kb_split
    }
}

/// `I/I²` for `I = m̃ ⊗ V`: components `t^(1/p^j)V / t^(2/p^j)V ≅ V/t^(1/p^j)`
/// with transitions induced by the inclusions `t^(1/p^j)V ⊂ t^(1/p^(j+1))V`.
fn ideal_mod_square(ring: &RingConfig) -> IndModule {
    let (r1, r2) = (ring.clone(), ring.clone());
    IndModule::from_recipes(
        "I/I²",
        ring,
        move |j| PresentedModule::cyclic(&r1, &t_root(&r1, j)?),
        move |j, s, t| ModuleMap::scalar(s, &crate::almost::delta(&r2, j)?).and_then(|d| {
            ModuleMap::at_level(&d.source().clone(), t, d.level(), d.matrix().clone())
        }),
    )
}

pub fn k_ideal_check(ring: &RingConfig, levels: u32) -> Result<KIdealReport> {
    // B = V ⊕ I as a V-module at level j: generators (1, 0) and (0, t^(1/p^j)).
    // Base change along the augmentation sends (1, 0) to 1 and kills I.
    let aug = PolyMatrix::from_rows(ring.p, vec![vec![Poly::one(ring.p), Poly::zero(ring.p)]])?;
    let b_free = PresentedModule::free(ring, 2)?;
    let v = PresentedModule::free(ring, 1)?;
    let aug_map = ModuleMap::new(&b_free, &v, aug)?;
    let unit_image = aug_map.matrix().col(0);
    let unit_maps_to_unit = unit_image == vec![Poly::one(ring.p)];

    let quotient = ideal_mod_square(ring);
    let ideal_in_kernel = is_ind_zero(&quotient, levels)?.holds();

    let a_firm = PerfPlusObject::unit(ring, 0)?.firmify();
    let kernel_is_almost_class = k0_class(&a_firm) == K0Class::new(0, 1) && a_firm.aperf_member().0;

    // m̃⊗B at level j is V² with transitions diag(δ_j, δ_j·δ_j); inclusion of the
    // second summand and projection onto it compose to the identity, and the
    // augmentation kills the image of the inclusion.
    let mut kb_split = true;
    for j in 0..levels {
        let d = crate::almost::delta(ring, j)?.to_poly(j + 1)?;
        let tau = PolyMatrix::diagonal(ring.p, 2, 2, &[d.clone(), &d * &d]);
        let inc = PolyMatrix::from_rows(ring.p, vec![vec![Poly::zero(ring.p)], vec![Poly::one(ring.p)]])?;
        let ret = inc.transpose();
        kb_split &= ret.mul(&inc)? == PolyMatrix::identity(ring.p, 1);
        let aug_j = PolyMatrix::from_rows(ring.p, vec![vec![Poly::one(ring.p), Poly::zero(ring.p)]])?;
        kb_split &= aug_j.mul(&inc)?.is_zero();
        // the inclusion commutes with transitions: τ·inc = inc·(δ²)
        kb_split &= tau.mul(&inc)? == inc.scale(&(&d * &d));
    }
    Ok(KIdealReport { unit_maps_to_unit, ideal_in_kernel, kernel_is_almost_class, kb_split })
}

/// Euler characteristic of `E ⊗ F_p(s)` at level `n`, computed from ranks of
/// the differentials over the fraction field.
pub fn generic_euler_characteristic(e: &ChainComplex) -> i64 {
    let mut chi = 0i64;
    for i in e.degrees() {
        let n = e.term(i).decompose().free_rank as i64;
        let rk = |m: &PolyMatrix| -> i64 {
            if m.rows() == 0 || m.cols() == 0 {
                0
            } else {
                snf(m).invariant_factors.iter().filter(|d| !d.is_zero()).count() as i64
            }
        };
        let h = n - rk(&e.d(i)) - rk(&e.d(i + 1));
        chi += if i.rem_euclid(2) == 0 { h } else { -h };
    }
    chi
}

/// Rank of a Perf⁺ object after base change to `C = F_p(s)`, evaluated on
/// its level-`n` component (`m̃⊗V` becomes `C` there).
pub fn rank_to_fraction_field(e: &PerfPlusObject, level: u32) -> Result<i64> {
    Ok(generic_euler_characteristic(&e.complex().component(level)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GerstenReport {
    pub generator_round_trip: bool,
    pub zero_round_trip: bool,
    pub torsion_dies: bool,
    pub corpus_injective: bool,
}

impl GerstenReport {
    pub fn passed(&self) -> bool {
        self.generator_round_trip && self.zero_round_trip && self.torsion_dies && self.corpus_injective
    }
}

/// `K₀^al(V) → K₀⁺(V) → K₀(F_p(s))` with retraction `n ↦ n·[m̃⊗V]`.
pub fn gersten_check(ring: &RingConfig, level: u32, corpus: &[PerfPlusObject]) -> Result<GerstenReport> {
    if ring.truncation().is_some() || !ring.is_char_p() {
        return Err(Error::UnsupportedMode { op: "gersten_check", mode: ring.mode_name() });
    }
    let retract = |n: i64| K0Class::new(0, n);
    let gen = PerfPlusObject::unit(ring, 0)?.firmify();
    let generator_round_trip = retract(rank_to_fraction_field(&gen, level)?) == k0_class(&gen);
    let zero = PerfPlusObject::zero(ring);
    let zero_round_trip = rank_to_fraction_field(&zero, level)? == 0 && k0_class(&zero) == K0Class::ZERO;
    let free = PresentedModule::free(ring, 1)?;
    let t = ModuleMap::scalar(&free, &BaseElem::t_pow(ring, PAdicExponent::integer(ring.p, 1))?)?;
    let torsion = ChainComplex::two_term(&t, 1)?;
    let torsion_dies = generic_euler_characteristic(&torsion) == 0 && !torsion.homology(0)?.is_zero();
    let mut corpus_injective = true;
    for e in corpus {
        let (ok, _) = e.aperf_member();
        if !ok {
            continue;
        }
        corpus_injective &= retract(rank_to_fraction_field(e, level)?) == k0_class(e);
    }
    Ok(GerstenReport { generator_round_trip, zero_round_trip, torsion_dies, corpus_injective })
}

/// A random strictly perfect complex: two-term `A^a → A^b` with a random
/// matrix, shifted into degrees `[k−1, k]`.
pub fn random_strict(rng: &mut impl Rng, ring: &RingConfig, max_rank: usize) -> Result<ChainComplex> {
    let a = rng.gen_range(0..=max_rank);
    let b = rng.gen_range(0..=max_rank);
    let k = rng.gen_range(-1..=1);
    let level = 1;
    let mat = random_matrix(rng, ring.p, b, a, level, 3);
    let src = PresentedModule::free(ring, a)?;
    let tgt = PresentedModule::free(ring, b)?;
    if a == 0 && b == 0 {
        return Ok(ChainComplex::zero(ring));
    }
    ChainComplex::new(ring, k - 1, vec![tgt, src], level, vec![mat])
}

pub fn random_matrix(rng: &mut impl Rng, p: u32, rows: usize, cols: usize, _level: u32, max_deg: u64) -> PolyMatrix {
    PolyMatrix::from_fn(p, rows, cols, |_, _| {
        if rng.gen_bool(0.35) {
            Poly::zero(p)
        } else {
            let terms: Vec<(u64, u32)> = (0..rng.gen_range(1..=2)).map(|_| (rng.gen_range(0..=max_deg), rng.gen_range(1..p.max(2)))).collect();
            Poly::from_terms(p, terms)
        }
    })
}

/// A random Perf⁺ object built by a short sequence of sums, shifts,
/// firmifications and cones, recording triangles in `ledger`.
pub fn random_perf_plus(rng: &mut impl Rng, ring: &RingConfig, ledger: &mut RelationLedger) -> Result<PerfPlusObject> {
    let e = random_strict(rng, ring, 2)?;
    let mut obj = PerfPlusObject::strict(&e)?;
    if rng.gen_bool(0.5) {
        let x = BaseElem::t_pow(ring, PAdicExponent::new(ring.p, rng.gen_range(0..3u32), 1))?;
        let f = ChainMap::scalar(&e, &x)?;
        ledger.harvest_strict("scalar", &f)?;
        obj = PerfPlusObject::cone_strict(&f)?;
    }
    for _ in 0..rng.gen_range(0..3) {
        obj = match rng.gen_range(0..5) {
            0 => obj.firmify(),
            1 => obj.shift(rng.gen_range(-1..=1)),
            2 => obj.direct_sum(&PerfPlusObject::unit(ring, rng.gen_range(-1..=1))?),
            3 => {
                ledger.harvest_mu("mu", &obj);
                obj.cone_mu()
            }
            _ => {
                ledger.harvest_identity("id", &obj);
                obj.direct_sum(&obj.cone_identity())
            }
        };
    }
    Ok(obj)
}

pub fn class_report(objs: &[PerfPlusObject]) -> BTreeMap<String, Value> {
    objs.iter()
        .enumerate()
        .map(|(i, e)| (format!("{i:03}"), json!({"class": k0_class(e).to_json(), "multiplicities": format!("{:?}", e.multiplicities())})))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(p: u32) -> RingConfig {
        RingConfig::perfect(p).unwrap()
    }

    #[test]
    fn class_examples() {
        let ring = v(2);
        let a = PerfPlusObject::unit(&ring, 0).unwrap();
        assert_eq!(k0_class(&a), K0Class::new(1, 0));
        assert_eq!(k0_class(&a.firmify().shift(1)), K0Class::new(0, -1));
        assert_eq!(k0_class(&a.direct_sum(&a.cone_identity())), K0Class::new(1, 0));
        assert_eq!(projector_firm(&a).1, K0Class::new(0, 1));
        assert_eq!(projector_phi(&a).1, K0Class::new(1, -1));
        assert_eq!(projector_phi(&a.firmify()).1, K0Class::ZERO);
    }

    #[test]
    fn split_on_small_objects() {
        let ring = v(2);
        let a = PerfPlusObject::unit(&ring, 0).unwrap();
        for e in [a.clone(), a.firmify(), a.direct_sum(&a.firmify()), PerfPlusObject::zero(&ring)] {
            assert!(split_check(&e, 3).unwrap().passed(), "{e:?}");
        }
    }

    #[test]
    fn random_corpus_and_ledger() {
        let ring = v(3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut ledger = RelationLedger::new();
        for _ in 0..5 {
            let e = random_perf_plus(&mut rng, &ring, &mut ledger).unwrap();
            assert!(split_check(&e, 2).unwrap().passed());
        }
        assert!(ledger.verify_all());
        assert!(ledger.projectors_preserve());
    }

    #[test]
    fn k_ideal_and_gersten() {
        let ring = v(2);
        assert!(k_ideal_check(&ring, 4).unwrap().passed());
        let corpus = vec![PerfPlusObject::unit(&ring, 0).unwrap().firmify().shift(1)];
        assert!(gersten_check(&ring, 2, &corpus).unwrap().passed());
    }
}
