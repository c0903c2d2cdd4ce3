//! Finitely presented modules over `V = F_p[t^(1/p^∞)]` and its truncations.
//!
//! A module at level `n` is the cokernel of a relations matrix over
//! `R_n = F_p[s]`, `s = t^(1/p^n)`, base-changed to `V`. Since `V` is free over
//! every `R_n`, invariant factors computed at any sufficiently fine level are
//! the invariant factors over `V`, which makes `decompose` canonical.
//! Modules over `V/(t^c)` carry the columns `t^c·I` among their relations, so
//! all homological algebra (`Tor`, `Ext`) is computed over `V`.

use std::fmt;

use serde_json::{json, Value};

use crate::base_ring::{BaseElem, Mode, PAdicExponent, RingConfig};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, snf, solve_matrix, PolyMatrix};
use crate::poly::Poly;

/// `M ≅ V^free_rank ⊕ ⊕ V/(dᵢ)` with monic non-unit `dᵢ`, `d₁ | d₂ | …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub free_rank: usize,
    pub torsion: Vec<BaseElem>,
}

impl Decomposition {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Exponents of the torsion factors, when they are all monomials `t^e`.
    /// Over `V/t^c` a factor that reduces to zero is `t^c`.
    pub fn monomial_exponents(&self) -> Option<Vec<PAdicExponent>> {
        self.torsion
            .iter()
            .map(|d| if d.is_zero() { d.ring().truncation().cloned() } else { d.monomial_exponent().ok().cloned() })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "free_rank": self.free_rank,
            "torsion": self.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("V/({d})")).collect();
        if self.free_rank > 0 {
            parts.push(format!("V^{}", self.free_rank));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

#[derive(Clone)]
pub struct PresentedModule {
    ring: RingConfig,
    level: u32,
    gens: usize,
    relations: PolyMatrix,
    decomposition: Decomposition,
}

fn check_char_p(ring: &RingConfig) -> Result<()> {
    if ring.is_char_p() {
        Ok(())
    } else {
        Err(Error::UnsupportedMode { op: "module theory", mode: ring.mode_name() })
    }
}

impl PresentedModule {
    /// `coker(relations)`, relations given as a `gens × r` matrix over `F_p[s]`,
    /// `s = t^(1/p^level)`.
    pub fn new(ring: &RingConfig, level: u32, relations: PolyMatrix) -> Result<Self> {
        check_char_p(ring)?;
        if relations.p() != ring.p {
            return Err(Error::ConfigMismatch(format!("matrix over F_{}", relations.p()), ring.to_string()));
        }
        let mut relations = relations.without_modulus();
        let mut level = level;
        if let Some(c) = ring.truncation() {
            if c.denom_exp() > level {
                let k = (ring.p as u64).pow(c.denom_exp() - level);
                relations = relations.map(|x| x.substitute_power(k));
                level = c.denom_exp();
            }
            let tc = Poly::s_pow(ring.p, c.at_level(level).expect("truncation on level"));
            let trunc = PolyMatrix::scalar(ring.p, relations.rows(), &tc);
            relations = relations.hstack(&trunc)?;
        }
        let gens = relations.rows();
        let decomposition = decompose_relations(ring, level, &relations)?;
        Ok(PresentedModule { ring: ring.clone(), level, gens, relations, decomposition })
    }

    pub fn zero(ring: &RingConfig) -> Result<Self> {
        Self::new(ring, 0, PolyMatrix::zero(ring.p, 0, 0))
    }

    pub fn free(ring: &RingConfig, rank: usize) -> Result<Self> {
        Self::new(ring, 0, PolyMatrix::zero(ring.p, rank, 0))
    }

    /// `⊕ V/(dᵢ) ⊕ V^free`.
    pub fn from_factors(ring: &RingConfig, factors: &[BaseElem], free: usize) -> Result<Self> {
        let level = crate::base_ring::common_level(factors);
        let n = factors.len() + free;
        let mut rel = PolyMatrix::zero(ring.p, n, factors.len());
        for (i, d) in factors.iter().enumerate() {
            rel.set(i, i, d.reinterpret(ring)?.to_poly(level)?);
        }
        Self::new(ring, level, rel)
    }

    /// `V/(d)`.
    pub fn cyclic(ring: &RingConfig, d: &BaseElem) -> Result<Self> {
        Self::from_factors(ring, std::slice::from_ref(d), 0)
    }

    /// `V/(t^e)`.
    pub fn monomial_quotient(ring: &RingConfig, e: &PAdicExponent) -> Result<Self> {
        Self::cyclic(ring, &BaseElem::t_pow(ring, e.clone())?)
    }

    pub fn ring(&self) -> &RingConfig {
        &self.ring
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn num_gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &PolyMatrix {
        &self.relations
    }

    pub fn p(&self) -> u32 {
        self.ring.p
    }

    pub fn decompose(&self) -> &Decomposition {
        &self.decomposition
    }

    pub fn is_zero(&self) -> bool {
        self.decomposition.is_zero()
    }

    /// Isomorphism test by comparison of invariant factors.
    pub fn iso_test(&self, other: &Self) -> bool {
        self.ring == other.ring && self.decomposition == other.decomposition
    }

    /// Same module presented at a finer level (`s ↦ s^(p^(level − n))`).
    pub fn lift(&self, level: u32) -> Self {
        if level <= self.level {
            return self.clone();
        }
        let k = (self.ring.p as u64).pow(level - self.level);
        PresentedModule {
            ring: self.ring.clone(),
            level,
            gens: self.gens,
            relations: self.relations.map(|x| x.substitute_power(k)),
            decomposition: self.decomposition.clone(),
        }
    }

    pub fn elem_to_poly(&self, x: &BaseElem) -> Result<Poly> {
        x.reinterpret(&self.ring)?.to_poly(self.level)
    }

    /// Whether `x` annihilates the module.
    pub fn annihilated_by(&self, x: &BaseElem) -> Result<bool> {
        let level = self.level.max(crate::base_ring::common_level([x]));
        let m = self.lift(level);
        let xs = PolyMatrix::scalar(self.p(), m.gens, &m.elem_to_poly(x)?);
        Ok(solve_matrix(&m.relations, &xs)?.is_some())
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let (a, b) = align(self, other)?;
        Self::new(&a.ring, a.level, a.relations.block_diag(&b.relations))
    }

    /// `⊕` of `n` copies.
    pub fn power(&self, n: usize) -> Result<Self> {
        let rel = PolyMatrix::identity(self.p(), n).kron(&self.relations);
        Self::new(&self.ring, self.level, rel)
    }

    /// `M ⊗_V N` presented by the standard block construction.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let (a, b) = align(self, other)?;
        let p = a.p();
        let left = a.relations.kron(&PolyMatrix::identity(p, b.gens));
        let right = PolyMatrix::identity(p, a.gens).kron(&b.relations);
        Self::new(&a.ring, a.level, left.hstack(&right)?)
    }

    /// `Hom_V(M, N)` for modules whose invariant factors are monomials.
    pub fn hom_module(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::ConfigMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        let (dm, dn) = (self.decompose(), other.decompose());
        let em = dm.monomial_exponents().ok_or_else(|| Error::NonMonomialModule(dm.to_string()))?;
        let en = dn.monomial_exponents().ok_or_else(|| Error::NonMonomialModule(dn.to_string()))?;
        let mut factors = Vec::new();
        let mut free = 0;
        // Hom(V/a, V/b) = V/(t^min), Hom(V/a, V) = 0, Hom(V, V/b) = V/b, Hom(V, V) = V.
        for a in &em {
            for b in &en {
                factors.push(BaseElem::t_pow(&self.ring, a.clone().min(b.clone()))?);
            }
        }
        for _ in 0..dm.free_rank {
            for b in &en {
                factors.push(BaseElem::t_pow(&self.ring, b.clone())?);
            }
            free += dn.free_rank;
        }
        Self::from_factors(&self.ring, &factors, free)
    }

    /// Restriction of scalars along a quotient `V → V/(t^c)` (or a further
    /// truncation), or identity when the configuration is unchanged.
    pub fn base_change(&self, target: &RingConfig) -> Result<Self> {
        if *target == self.ring {
            return Ok(self.clone());
        }
        let ok = target.p == self.ring.p
            && match (&self.ring.mode, &target.mode) {
                (Mode::CharPPerfect, Mode::CharPTruncated(_)) => true,
                (Mode::CharPTruncated(c), Mode::CharPTruncated(d)) => d <= c,
                _ => false,
            };
        if !ok {
            return Err(Error::Incompatible(format!("{} -> {}", self.ring, target)));
        }
        Self::new(target, self.level, self.relations.clone())
    }

    /// Simplified presentation `⊕ V/(dᵢ) ⊕ V^r` with mutually inverse
    /// generator matrices `to: M → M'` and `from: M' → M`.
    pub fn simplified(&self) -> Result<(Self, PolyMatrix, PolyMatrix)> {
        let r = snf(&self.relations);
        let p = self.p();
        let keep: Vec<usize> = (0..self.gens)
            .filter(|&i| {
                let d = if i < self.relations.cols() { r.d.get(i, i).clone() } else { Poly::zero(p) };
                !(d.is_constant() && !d.is_zero())
            })
            .collect();
        let diag: Vec<Poly> = keep
            .iter()
            .filter(|&&i| i < self.relations.cols() && !r.d.get(i, i).is_zero())
            .map(|&i| r.d.get(i, i).clone())
            .collect();
        let mut rel = PolyMatrix::zero(p, keep.len(), diag.len());
        for (j, d) in diag.iter().enumerate() {
            rel.set(j, j, d.clone());
        }
        let to = r.left.select_rows(&keep);
        let from = r.u.select_cols(&keep);
        let m = Self::new(&self.ring, self.level, rel)?;
        Ok((m, to, from))
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<Value>> = (0..self.gens)
            .map(|i| self.relations.row(i).iter().map(poly_to_json).collect())
            .collect();
        json!({
            "ring": self.ring.to_json(),
            "level": self.level,
            "rank": self.gens,
            "relations": rows,
            "decomposition": self.decomposition.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let ring = match v.get("ring") {
            Some(r) => RingConfig::from_json(r)?,
            None => RingConfig::perfect(v.get("p").and_then(Value::as_u64).unwrap_or(2) as u32)?,
        };
        let level = v.get("level").and_then(Value::as_u64).unwrap_or(0) as u32;
        let rank = v.get("rank").and_then(Value::as_u64).ok_or_else(|| Error::Input("missing rank".into()))? as usize;
        let rows = v.get("relations").and_then(Value::as_array).cloned().unwrap_or_default();
        if rows.len() != rank {
            return Err(Error::Input(format!("relations have {} rows, rank is {rank}", rows.len())));
        }
        let mut parsed = Vec::with_capacity(rank);
        for row in rows {
            let row = row.as_array().ok_or_else(|| Error::Input("relation row must be an array".into()))?;
            parsed.push(row.iter().map(|x| poly_from_json(ring.p, x)).collect::<Result<Vec<_>>>()?);
        }
        let cols = parsed.first().map_or(0, Vec::len);
        let mat = if rank == 0 { PolyMatrix::zero(ring.p, 0, 0) } else { PolyMatrix::from_rows(ring.p, parsed)? };
        debug_assert_eq!(mat.cols(), cols);
        Self::new(&ring, level, mat)
    }
}

pub fn poly_to_json(f: &Poly) -> Value {
    Value::Array(f.terms().iter().map(|&(e, c)| json!([e, c])).collect())
}

pub fn poly_from_json(p: u32, v: &Value) -> Result<Poly> {
    let bad = || Error::Input(format!("bad polynomial {v}"));
    let arr = v.as_array().ok_or_else(bad)?;
    let mut terms = Vec::with_capacity(arr.len());
    for t in arr {
        let pair = t.as_array().ok_or_else(bad)?;
        if pair.len() != 2 {
            return Err(bad());
        }
        let e = pair[0].as_u64().ok_or_else(bad)?;
        let c = pair[1].as_u64().ok_or_else(bad)?;
        terms.push((e, (c % p as u64) as u32));
    }
    Ok(Poly::from_terms(p, terms))
}

impl fmt::Debug for PresentedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PresentedModule({} ; level {} ; {} gens)", self.decomposition, self.level, self.gens)
    }
}

impl fmt::Display for PresentedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.decomposition)
    }
}

fn decompose_relations(ring: &RingConfig, level: u32, rel: &PolyMatrix) -> Result<Decomposition> {
    let r = snf(rel);
    let mut torsion = Vec::new();
    for d in r.invariant_factors.iter().filter(|d| !d.is_zero() && !d.is_constant()) {
        let e = BaseElem::from_poly(&RingConfig::perfect(ring.p)?, level, d)?;
        torsion.push(e.reinterpret(ring)?);
    }
    Ok(Decomposition { free_rank: rel.rows() - r.rank, torsion })
}

fn align(a: &PresentedModule, b: &PresentedModule) -> Result<(PresentedModule, PresentedModule)> {
    if a.ring != b.ring {
        return Err(Error::ConfigMismatch(a.ring.to_string(), b.ring.to_string()));
    }
    let l = a.level.max(b.level);
    Ok((a.lift(l), b.lift(l)))
}

/// `span(gens) / (span(sub) + span(relations))` inside the free module of
/// rank `gens.rows()`, presented on the columns of `gens`.
pub(crate) fn subquotient(
    ring: &RingConfig,
    level: u32,
    gens: &PolyMatrix,
    sub: &PolyMatrix,
) -> Result<PresentedModule> {
    let k = gens.cols();
    let big = gens.hstack(sub)?;
    let ker = kernel_basis(&big);
    let rows: Vec<usize> = (0..k).collect();
    let rel = if k == 0 { PolyMatrix::zero(ring.p, 0, 0) } else { ker.select_rows(&rows) };
    PresentedModule::new(ring, level, rel)
}

/// A `V`-linear map given on generators: `matrix` is `target.gens × source.gens`.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: PresentedModule,
    target: PresentedModule,
    matrix: PolyMatrix,
}

impl ModuleMap {
    /// Checks well-definedness: `matrix · R_source ⊆ span(R_target)`.
    pub fn new(source: &PresentedModule, target: &PresentedModule, matrix: PolyMatrix) -> Result<Self> {
        if source.ring != target.ring {
            return Err(Error::ConfigMismatch(source.ring.to_string(), target.ring.to_string()));
        }
        if matrix.rows() != target.gens || matrix.cols() != source.gens {
            return Err(Error::Dimension(format!(
                "map matrix {}x{} for {} -> {} generators",
                matrix.rows(),
                matrix.cols(),
                source.gens,
                target.gens
            )));
        }
        let l = source.level.max(target.level);
        let src = source.lift(l);
        let tgt = target.lift(l);
        let image = matrix.mul(&src.relations)?;
        if image.cols() > 0 && solve_matrix(&tgt.relations, &image)?.is_none() {
            return Err(Error::IllDefinedMap(format!("{src} -> {tgt}")));
        }
        Ok(ModuleMap { source: src, target: tgt, matrix })
    }

    /// Constructs a map whose matrix is written at `level`, lifting all data
    /// to a common level first.
    pub fn at_level(
        source: &PresentedModule,
        target: &PresentedModule,
        level: u32,
        matrix: PolyMatrix,
    ) -> Result<Self> {
        let l = level.max(source.level).max(target.level);
        let k = (source.p() as u64).pow(l - level);
        let matrix = if k == 1 { matrix } else { matrix.map(|x| x.substitute_power(k)) };
        Self::new(&source.lift(l), &target.lift(l), matrix)
    }

    pub fn identity(m: &PresentedModule) -> Self {
        ModuleMap { source: m.clone(), target: m.clone(), matrix: PolyMatrix::identity(m.p(), m.gens) }
    }

    pub fn zero(source: &PresentedModule, target: &PresentedModule) -> Result<Self> {
        Self::new(source, target, PolyMatrix::zero(source.p(), target.gens, source.gens))
    }

    /// Multiplication by `x` on `M`.
    pub fn scalar(m: &PresentedModule, x: &BaseElem) -> Result<Self> {
        let l = m.level.max(crate::base_ring::common_level([x]));
        let m = m.lift(l);
        let mat = PolyMatrix::scalar(m.p(), m.gens, &m.elem_to_poly(x)?);
        Ok(ModuleMap { source: m.clone(), target: m, matrix: mat })
    }

    pub fn source(&self) -> &PresentedModule {
        &self.source
    }

    pub fn target(&self) -> &PresentedModule {
        &self.target
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn level(&self) -> u32 {
        self.source.level
    }

    pub fn lift(&self, level: u32) -> Self {
        if level <= self.level() {
            return self.clone();
        }
        let k = (self.source.p() as u64).pow(level - self.level());
        ModuleMap {
            source: self.source.lift(level),
            target: self.target.lift(level),
            matrix: self.matrix.map(|x| x.substitute_power(k)),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMap) -> Result<Self> {
        if !self.target.iso_test(&other.source) || self.target.gens != other.source.gens {
            return Err(Error::Dimension("composition of non-composable maps".into()));
        }
        let l = self.level().max(other.level());
        let (a, b) = (self.lift(l), other.lift(l));
        Ok(ModuleMap { source: a.source, target: b.target, matrix: b.matrix.mul(&a.matrix)? })
    }

    pub fn add(&self, other: &ModuleMap) -> Result<Self> {
        let l = self.level().max(other.level());
        let (a, b) = (self.lift(l), other.lift(l));
        Ok(ModuleMap { source: a.source, target: a.target, matrix: a.matrix.add(&b.matrix)? })
    }

    pub fn neg(&self) -> Self {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.scale(&Poly::constant(self.source.p(), self.source.p() - 1)),
        }
    }

    /// The map is zero iff every image of a generator lies in the target relations.
    pub fn is_zero(&self) -> Result<bool> {
        if self.matrix.cols() == 0 || self.matrix.is_zero() {
            return Ok(true);
        }
        Ok(solve_matrix(&self.target.relations, &self.matrix)?.is_some())
    }

    /// Generators of the preimage of `R_target` under the matrix.
    fn preimage_gens(&self) -> Result<PolyMatrix> {
        let g = self.source.gens;
        let big = self.matrix.hstack(&self.target.relations)?;
        let ker = kernel_basis(&big);
        let rows: Vec<usize> = (0..g).collect();
        Ok(if g == 0 { PolyMatrix::zero(self.source.p(), 0, ker.cols()) } else { ker.select_rows(&rows) })
    }

    /// `ker f` with its inclusion into the source.
    pub fn kernel(&self) -> Result<(PresentedModule, ModuleMap)> {
        let pre = self.preimage_gens()?;
        let k = subquotient(&self.source.ring, self.level(), &pre, &self.source.relations)?;
        let (ks, _to, from) = k.simplified()?;
        let incl = pre.mul(&from)?;
        let map = ModuleMap::new(&ks, &self.source, incl)?;
        Ok((ks, map))
    }

    /// `coker f` with the projection from the target.
    pub fn cokernel(&self) -> Result<(PresentedModule, ModuleMap)> {
        let (c, proj, _) = self.cokernel_with_section()?;
        Ok((c, proj))
    }

    /// `coker f`, the projection, and a matrix lifting generators of the
    /// cokernel back to generators of the target.
    pub fn cokernel_with_section(&self) -> Result<(PresentedModule, ModuleMap, PolyMatrix)> {
        let rel = self.target.relations.hstack(&self.matrix)?;
        let c = PresentedModule::new(&self.target.ring, self.level(), rel)?;
        let (cs, to, from) = c.simplified()?;
        let proj = ModuleMap::new(&self.target, &cs, to)?;
        Ok((cs, proj, from))
    }

    /// A matrix `X` with `other ∘ X = self` when `self` factors through
    /// `other` (both maps into the same target).
    pub fn factor_through(&self, other: &ModuleMap) -> Result<Option<PolyMatrix>> {
        let l = self.level().max(other.level());
        let (a, b) = (self.lift(l), other.lift(l));
        let big = b.matrix.hstack(&b.target.relations)?;
        let k = b.source.gens;
        Ok(solve_matrix(&big, &a.matrix)?.map(|y| {
            let rows: Vec<usize> = (0..k).collect();
            if k == 0 { PolyMatrix::zero(a.source.p(), 0, a.source.gens) } else { y.select_rows(&rows) }
        }))
    }

    /// `im f` with the inclusion into the target.
    pub fn image(&self) -> Result<(PresentedModule, ModuleMap)> {
        let pre = self.preimage_gens()?;
        let im = PresentedModule::new(&self.source.ring, self.level(), pre)?;
        let (ims, _to, from) = im.simplified()?;
        let incl = self.matrix.mul(&from)?;
        let map = ModuleMap::new(&ims, &self.target, incl)?;
        Ok((ims, map))
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.0.is_zero())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.cokernel()?.0.is_zero())
    }

    pub fn is_iso(&self) -> Result<bool> {
        Ok(self.is_injective()? && self.is_surjective()?)
    }

    /// `f ⊗ id_N`.
    pub fn tensor_right(&self, n: &PresentedModule) -> Result<Self> {
        let s = self.source.tensor(n)?;
        let t = self.target.tensor(n)?;
        let l = s.level.max(t.level).max(self.level());
        let f = self.lift(l);
        let nl = n.lift(l);
        let mat = f.matrix.kron(&PolyMatrix::identity(n.p(), nl.gens));
        ModuleMap::new(&s.lift(l), &t.lift(l), mat)
    }

    /// Direct sum `f ⊕ g`.
    pub fn direct_sum(&self, other: &ModuleMap) -> Result<Self> {
        let l = self.level().max(other.level());
        let (a, b) = (self.lift(l), other.lift(l));
        let s = a.source.direct_sum(&b.source)?;
        let t = a.target.direct_sum(&b.target)?;
        ModuleMap::new(&s, &t, a.matrix.block_diag(&b.matrix))
    }
}

/// Homology `ker g / im f` of `A →f B →g C` (matrices on generators), as a
/// subquotient of `B`, together with the matrix of its generators in `B`.
pub fn homology_at(
    b: &PresentedModule,
    f: &PolyMatrix,
    g: &PolyMatrix,
    g_target: &PresentedModule,
) -> Result<(PresentedModule, PolyMatrix)> {
    let ring = b.ring();
    let big = g.hstack(g_target.relations())?;
    let ker = kernel_basis(&big);
    let rows: Vec<usize> = (0..b.num_gens()).collect();
    let cycles = if b.num_gens() == 0 { PolyMatrix::zero(b.p(), 0, 0) } else { ker.select_rows(&rows) };
    let boundaries = f.hstack(b.relations())?;
    let h = subquotient(ring, b.level(), &cycles, &boundaries)?;
    let (hs, _to, from) = h.simplified()?;
    Ok((hs, cycles.mul(&from)?))
}

/// Free resolution `0 → V^k →K V^r →R V^g → M → 0`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub r: PolyMatrix,
    pub k: PolyMatrix,
}

impl PresentedModule {
    pub fn resolution(&self) -> Resolution {
        let r = self.relations.clone();
        let k = kernel_basis(&r);
        Resolution { r, k }
    }

    /// Cochain complex `N^g → N^r → N^k` of `Hom(F•, N)`, as the three
    /// terms and two matrices.
    fn hom_complex(&self, n: &PresentedModule) -> Result<([PresentedModule; 3], [PolyMatrix; 2])> {
        let (m, n) = align(self, n)?;
        let res = m.resolution();
        let p = m.p();
        let h = n.gens;
        let terms = [n.power(m.gens)?, n.power(res.r.cols())?, n.power(res.k.cols())?];
        let d0 = res.r.transpose().kron(&PolyMatrix::identity(p, h));
        let d1 = res.k.transpose().kron(&PolyMatrix::identity(p, h));
        Ok((terms, [d0, d1]))
    }

    /// Complex `N^k → N^r → N^g` of `F• ⊗ N`.
    fn tensor_complex(&self, n: &PresentedModule) -> Result<([PresentedModule; 3], [PolyMatrix; 2])> {
        let (m, n) = align(self, n)?;
        let res = m.resolution();
        let p = m.p();
        let h = n.gens;
        let terms = [n.power(m.gens)?, n.power(res.r.cols())?, n.power(res.k.cols())?];
        let d1 = res.r.kron(&PolyMatrix::identity(p, h));
        let d2 = res.k.kron(&PolyMatrix::identity(p, h));
        Ok((terms, [d1, d2]))
    }

    /// `Tor_i^V(M, N)` for `i ∈ {0, 1, 2}`; zero above.
    pub fn tor(&self, n: &PresentedModule, i: usize) -> Result<PresentedModule> {
        let ([t0, t1, t2], [d1, d2]) = self.tensor_complex(n)?;
        let zero = |rows: usize| PolyMatrix::zero(self.p(), rows, 0);
        let out = match i {
            0 => homology_at(&t0, &d1, &PolyMatrix::zero(self.p(), 0, t0.gens), &PresentedModule::zero(&self.ring)?)?,
            1 => homology_at(&t1, &d2, &d1, &t0)?,
            2 => homology_at(&t2, &zero(t2.gens), &d2, &t1)?,
            _ => return PresentedModule::zero(&self.ring),
        };
        Ok(out.0)
    }

    /// `Ext_V^i(M, N)` for `i ∈ {0, 1, 2}`; zero above.
    pub fn ext(&self, n: &PresentedModule, i: usize) -> Result<PresentedModule> {
        Ok(self.ext_with_cycles(n, i)?.0)
    }

    fn ext_with_cycles(&self, n: &PresentedModule, i: usize) -> Result<(PresentedModule, PolyMatrix, [PresentedModule; 3], [PolyMatrix; 2])> {
        let (terms, [d0, d1]) = self.hom_complex(n)?;
        let p = self.p();
        let none = PresentedModule::zero(&self.ring)?;
        let (h, cyc) = match i {
            0 => homology_at(&terms[0], &PolyMatrix::zero(p, terms[0].gens, 0), &d0, &terms[1])?,
            1 => homology_at(&terms[1], &d0, &d1, &terms[2])?,
            2 => homology_at(&terms[2], &d1, &PolyMatrix::zero(p, 0, terms[2].gens), &none)?,
            _ => (none.clone(), PolyMatrix::zero(p, 0, 0)),
        };
        Ok((h, cyc, terms, [d0, d1]))
    }
}

impl ModuleMap {
    /// Whether `Ext^i(f, N): Ext^i(target, N) → Ext^i(source, N)` is zero.
    ///
    /// `f` is lifted to the resolutions and the induced cochain map is
    /// applied to the cycles representing `Ext^i(target, N)`.
    pub fn ext_pullback_is_zero(&self, n: &PresentedModule, i: usize) -> Result<bool> {
        if i > 2 {
            return Ok(true);
        }
        let l = self.level().max(n.level);
        let f = self.lift(l);
        let n = n.lift(l);
        let (src, tgt) = (f.source.clone(), f.target.clone());
        let (rs, rt) = (src.resolution(), tgt.resolution());
        // f0 = matrix, f0·R_s = R_t·f1, f1·K_s = K_t·f2.
        let f0 = f.matrix.clone();
        let rhs = f0.mul(&rs.r)?;
        let f1 = if rs.r.cols() == 0 {
            PolyMatrix::zero(src.p(), rt.r.cols(), 0)
        } else {
            solve_matrix(&rt.r, &rhs)?.ok_or_else(|| Error::IllDefinedMap("cannot lift to relations".into()))?
        };
        let f1 = if rt.r.cols() == 0 { PolyMatrix::zero(src.p(), 0, rs.r.cols()) } else { f1 };
        let rhs2 = f1.mul(&rs.k)?;
        let f2 = if rs.k.cols() == 0 || rt.k.cols() == 0 {
            PolyMatrix::zero(src.p(), rt.k.cols(), rs.k.cols())
        } else {
            solve_matrix(&rt.k, &rhs2)?.ok_or_else(|| Error::IllDefinedMap("cannot lift to syzygies".into()))?
        };
        let fi = [f0, f1, f2][i].clone();
        let (h_t, cyc_t, _, _) = tgt.ext_with_cycles(&n, i)?;
        if h_t.is_zero() {
            return Ok(true);
        }
        let (_, _, terms_s, [d0, d1]) = src.ext_with_cycles(&n, i)?;
        let pull = fi.transpose().kron(&PolyMatrix::identity(n.p(), n.gens));
        let image = pull.mul(&cyc_t)?;
        let boundary = match i {
            0 => PolyMatrix::zero(n.p(), terms_s[0].gens, 0),
            1 => d0,
            _ => d1,
        };
        let allowed = boundary.hstack(terms_s[i].relations())?;
        if image.cols() == 0 {
            return Ok(true);
        }
        Ok(solve_matrix(&allowed, &image)?.is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(p: u32) -> RingConfig {
        RingConfig::perfect(p).unwrap()
    }

    fn e(p: u32, n: u64, k: u32) -> PAdicExponent {
        PAdicExponent::new(p, n, k)
    }

    #[test]
    fn decompose_examples() {
        let ring = v(2);
        let m = PresentedModule::monomial_quotient(&ring, &e(2, 1, 0)).unwrap();
        assert_eq!(m.decompose().torsion, vec![BaseElem::t_pow(&ring, e(2, 1, 0)).unwrap()]);
        let f = PresentedModule::new(&ring, 0, PolyMatrix::zero(2, 2, 0)).unwrap();
        assert_eq!(f.decompose().free_rank, 2);
        assert!(PresentedModule::zero(&ring).unwrap().is_zero());
    }

    #[test]
    fn tensor_of_cyclics_is_gcd() {
        let ring = v(3);
        let a = PresentedModule::monomial_quotient(&ring, &e(3, 1, 0)).unwrap();
        let b = PresentedModule::monomial_quotient(&ring, &e(3, 1, 1)).unwrap();
        assert!(a.tensor(&b).unwrap().iso_test(&b));
        let free = PresentedModule::free(&ring, 1).unwrap();
        assert!(free.tensor(&a).unwrap().iso_test(&a));
    }

    #[test]
    fn hom_examples() {
        let ring = v(2);
        let a = PresentedModule::monomial_quotient(&ring, &e(2, 3, 1)).unwrap();
        let b = PresentedModule::monomial_quotient(&ring, &e(2, 1, 2)).unwrap();
        assert!(a.hom_module(&b).unwrap().iso_test(&b));
        let free = PresentedModule::free(&ring, 1).unwrap();
        assert!(free.hom_module(&a).unwrap().iso_test(&a));
        let t = PresentedModule::monomial_quotient(&ring, &e(2, 1, 0)).unwrap();
        assert!(t.hom_module(&free).unwrap().is_zero());
        let one_plus_t = BaseElem::one(&ring).add(&BaseElem::t_pow(&ring, e(2, 1, 0)).unwrap()).unwrap();
        let bad = PresentedModule::cyclic(&ring, &one_plus_t).unwrap();
        assert!(matches!(bad.hom_module(&a), Err(Error::NonMonomialModule(_))));
    }

    #[test]
    fn kernel_cokernel_of_t() {
        let ring = v(2);
        let free = PresentedModule::free(&ring, 1).unwrap();
        let t = ModuleMap::scalar(&free, &BaseElem::t_pow(&ring, e(2, 1, 0)).unwrap()).unwrap();
        assert!(t.kernel().unwrap().0.is_zero());
        let c = t.cokernel().unwrap().0;
        assert!(c.iso_test(&PresentedModule::monomial_quotient(&ring, &e(2, 1, 0)).unwrap()));
        let id = ModuleMap::identity(&free);
        assert!(id.is_iso().unwrap());
    }

    #[test]
    fn ill_defined_map_rejected() {
        let ring = v(2);
        let a = PresentedModule::monomial_quotient(&ring, &e(2, 1, 0)).unwrap();
        let free = PresentedModule::free(&ring, 1).unwrap();
        let r = ModuleMap::new(&a, &free, PolyMatrix::identity(2, 1));
        assert!(matches!(r, Err(Error::IllDefinedMap(_))));
    }

    #[test]
    fn base_change_examples() {
        let ring = v(2);
        let tr = RingConfig::truncated(2, e(2, 1, 0)).unwrap();
        let m = PresentedModule::monomial_quotient(&ring, &e(2, 2, 0)).unwrap();
        let q = m.base_change(&tr).unwrap();
        assert!(q.iso_test(&PresentedModule::monomial_quotient(&tr, &e(2, 1, 0)).unwrap()));
        let half = RingConfig::truncated(2, e(2, 1, 1)).unwrap();
        let once = q.base_change(&half).unwrap();
        let twice = once.base_change(&half).unwrap();
        assert!(once.iso_test(&twice));
        assert!(q.base_change(&ring).is_err());
    }

    #[test]
    fn level_lift_keeps_module() {
        let ring = v(3);
        let m = PresentedModule::monomial_quotient(&ring, &e(3, 1, 1)).unwrap();
        let lifted = m.lift(2);
        assert_eq!(lifted.level(), 2);
        assert_eq!(*lifted.relations().get(0, 0), Poly::s_pow(3, 3));
        assert!(lifted.iso_test(&m));
    }
}
