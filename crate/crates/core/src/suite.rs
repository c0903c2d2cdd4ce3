//! Batch verification suites and single-operation dispatch.
//!
//! Every randomized corpus is drawn from one ChaCha stream per suite, seeded
//! from the configured seed, and checks are reported sorted by name, so a
//! report is a function of its configuration.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{
    almost_lift_check, almost_nakayama, b_shriek_shriek, check_sequence, ladder_step, monoidal_equiv_check, n_to_one,
    unital_carrier, unitalization_round_trip, unitalize, Algebra,
};
use crate::almost::{
    closedify, closedify_ind, closedify_presented, colocal_ext_vanishing, firmify, is_almost_iso, is_exact_iso,
    mu_prime_certificate, IndMap, IndModule,
};
use crate::base_ring::{is_prime, BaseElem, PAdicExponent, RingConfig};
use crate::complexes::{free_resolution, is_almost_qis, verify_resolution, ChainComplex, IndChainMap, IndComplex, PerfPlusObject};
use crate::corpus::{almost_zero_corpus, monomial_corpus, unital_corpus};
use crate::error::{Error, Result};
use crate::k0::{gersten_check, k0_class, k_ideal_check, random_matrix, random_perf_plus, random_strict, split_check, RelationLedger};
use crate::linalg::{snf, PolyMatrix, SnfResult};
use crate::module::{poly_from_json, poly_to_json, ModuleMap, PresentedModule};
use crate::monomial::{Interval, IntervalKind, MonomialModule};
use crate::poly::Poly;
use crate::tower::{
    a_n_plus, frobenius_iso_check, tilt_basis_iso, tilting_zigzag, tower_limit, tower_roundtrip, verify_lemma_a,
    LemmaAlgebra, TowerSpec,
};

pub const SUITES: [&str; 7] = ["quillen", "complexes", "k0", "algebra", "tilting", "tower", "all"];

/// Random SNF instances per size class.
pub const SNF_SAMPLES: usize = 500;
/// 3×3 instances over `F_p[s]/(s^k)`.
pub const CHAIN_RING_SAMPLES: usize = 100;
/// Random triples for the unitalization axioms.
pub const TRIPLE_SAMPLES: usize = 1000;
pub const NAKAYAMA_SAMPLES: usize = 500;
pub const LIFT_SAMPLES: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Config {
    pub p: u32,
    /// `perfect`, `truncated` or `mixed`.
    pub mode: String,
    /// `n` for `A_n`, the tilt and the mixed mock.
    pub level: u32,
    /// `c` in `V/t^c`, as an exponent string.
    pub truncation: String,
    /// Tower depth; also `c` in `p^c` for the mixed mock.
    pub depth: u32,
    pub working_level: u32,
    pub seed: u64,
    pub corpus_size: usize,
    #[serde(skip)]
    pub timings: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            p: 2,
            mode: "perfect".into(),
            level: 2,
            truncation: "1".into(),
            depth: 3,
            working_level: 8,
            seed: 0,
            corpus_size: 30,
            timings: false,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !is_prime(self.p) {
            return bad(format!("p = {} is not prime", self.p));
        }
        if self.level > 6 {
            return bad(format!("level {} exceeds 6", self.level));
        }
        if self.depth == 0 || self.depth > 6 {
            return bad(format!("depth {} outside 1..=6", self.depth));
        }
        if self.working_level == 0 || self.working_level > 10 {
            return bad(format!("working level {} outside 1..=10", self.working_level));
        }
        if self.corpus_size == 0 || self.corpus_size > 10_000 {
            return bad(format!("corpus size {} outside 1..=10000", self.corpus_size));
        }
        if self.mode == "mixed" && self.level == 0 {
            return bad("the mixed mock needs level ≥ 1".into());
        }
        self.ring().map(|_| ())
    }

    pub fn ring(&self) -> Result<RingConfig> {
        match self.mode.as_str() {
            "perfect" => RingConfig::perfect(self.p),
            "truncated" => RingConfig::truncated(self.p, PAdicExponent::parse(self.p, &self.truncation)?),
            "mixed" => RingConfig::mixed(self.p, self.level, self.depth),
            m => Err(Error::InvalidConfig(format!("unknown mode {m}"))),
        }
    }

    fn rng(&self, suite: &str) -> ChaCha8Rng {
        let salt = suite.bytes().fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64));
        ChaCha8Rng::seed_from_u64(self.seed ^ salt)
    }

    /// Characteristic-`p` bases for the module-level suites: the configured
    /// truncation, or `V, V/t, V/t²` otherwise.
    fn module_rings(&self) -> Result<Vec<RingConfig>> {
        if self.mode == "truncated" {
            return Ok(vec![self.ring()?]);
        }
        let p = self.p;
        Ok(vec![
            RingConfig::perfect(p)?,
            RingConfig::truncated(p, PAdicExponent::integer(p, 1))?,
            RingConfig::truncated(p, PAdicExponent::integer(p, 2))?,
        ])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: bool,
    pub working_level: u32,
    pub witness: String,
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: Config,
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.verdict)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Runner<'a> {
    cfg: &'a Config,
    prefix: &'static str,
    checks: Vec<Check>,
}

impl<'a> Runner<'a> {
    fn new(cfg: &'a Config, prefix: &'static str) -> Self {
        Runner { cfg, prefix, checks: Vec::new() }
    }

    /// Errors count as failures, with the error as witness.
    fn run(&mut self, name: impl AsRef<str>, level: u32, f: impl FnOnce() -> Result<(bool, String)>) {
        let start = Instant::now();
        let (verdict, witness) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        let elapsed_ms = self.cfg.timings.then(|| start.elapsed().as_secs_f64() * 1e3);
        self.checks.push(Check { name: format!("{}.{}", self.prefix, name.as_ref()), verdict, working_level: level, witness, elapsed_ms });
    }
}

/// Runs `f` over a corpus and summarizes as `k/N passed` with the first
/// failing item.
fn over_all<T: std::fmt::Display>(items: &[T], mut f: impl FnMut(&T) -> Result<bool>) -> Result<(bool, String)> {
    let mut passed = 0;
    let mut first = None;
    for x in items {
        if f(x)? {
            passed += 1;
        } else if first.is_none() {
            first = Some(x.to_string());
        }
    }
    let mut w = format!("{passed}/{} passed", items.len());
    if let Some(x) = first {
        w.push_str(&format!("; first failure: {x}"));
    }
    Ok((passed == items.len(), w))
}

pub fn run_suite(name: &str, cfg: &Config) -> Result<SuiteReport> {
    cfg.validate()?;
    let mut checks = match name {
        "quillen" => quillen(cfg)?,
        "complexes" => complexes(cfg)?,
        "k0" => k0(cfg)?,
        "algebra" => algebra(cfg)?,
        "tilting" => tilting(cfg)?,
        "tower" => tower(cfg)?,
        "all" => {
            let mut v = Vec::new();
            for s in &SUITES[..6] {
                v.extend(run_suite(s, cfg)?.checks);
            }
            v
        }
        other => return Err(Error::Input(format!("unknown suite {other}; expected one of {}", SUITES.join(", ")))),
    };
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let overall = checks.iter().all(|c| c.verdict);
    Ok(SuiteReport { suite: name.to_string(), config: cfg.clone(), checks, overall })
}

// ---------------------------------------------------------------------------

fn quillen(cfg: &Config) -> Result<Vec<Check>> {
    let mut r = Runner::new(cfg, "quillen");
    let mut rng = cfg.rng("quillen");
    let j = cfg.working_level;
    for ring in cfg.module_rings()? {
        let tag = ring.mode_name();
        let corpus = monomial_corpus(&mut rng, &ring, cfg.corpus_size);
        let ind = |m: &MonomialModule| IndModule::from_monomial(&ring, m);

        r.run(format!("mu_almost_iso[{tag}]"), j, || over_all(&corpus, |m| Ok(is_almost_iso(&IndMap::mu(&ind(m)?)?, j)?.holds())));
        r.run(format!("mu_prime_almost_iso[{tag}]"), j, || {
            over_all(&corpus, |m| Ok(mu_prime_certificate(&ind(m)?.component(j)?, j)?.holds()))
        });
        r.run(format!("m_tensor_mu_exact[{tag}]"), j, || {
            let mu_m = IndMap::mu(&IndModule::ideal_m(&ring)?)?.tensor_m();
            let base = is_exact_iso(&mu_m, j)?.holds();
            let (ok, w) = over_all(&corpus, |m| Ok(is_exact_iso(&IndMap::mu(&ind(m)?)?.tensor_m(), j)?.holds()))?;
            Ok((base && ok, format!("μ_m⊗m: {base}; corpus {w}")))
        });
        r.run(format!("firm_idempotent[{tag}]"), j, || {
            over_all(&corpus, |m| Ok(is_exact_iso(&IndMap::mu(&firmify(&ind(m)?)?)?, j)?.holds()))
        });
        r.run(format!("closed_idempotent[{tag}]"), j, || {
            over_all(&corpus, |m| {
                let c = closedify(&ind(m)?)?;
                Ok(closedify_presented(&c)?.iso_test(&c))
            })
        });
        r.run(format!("round_trips[{tag}]"), j, || {
            over_all(&corpus, |m| {
                let im = ind(m)?;
                let f = firmify(&im)?;
                let closed_side = closedify(&f)?.iso_test(&closedify(&im)?);
                let ff = firmify(&closedify_ind(&im)?)?;
                let firm_side = ff.shape() == f.shape() && is_exact_iso(&IndMap::mu(&ff)?, j)?.holds();
                Ok(closed_side && firm_side)
            })
        });
        r.run(format!("ext_vanishing[{tag}]"), j, || {
            let firm: Vec<MonomialModule> = corpus.iter().take(8).map(MonomialModule::firmify).filter(|m| !m.is_zero()).collect();
            let zero = almost_zero_corpus(ring.p, 2);
            let mut pairs = 0;
            let mut failed = Vec::new();
            for f in &firm {
                let fi = firmify(&ind(f)?)?;
                for z in &zero {
                    pairs += 1;
                    if !colocal_ext_vanishing(&fi, &ind(z)?, j, true)?.holds() {
                        failed.push(format!("({f}, {z})"));
                    }
                }
            }
            Ok((failed.is_empty(), format!("{}/{pairs} pairs with Ext⁰ = Ext¹ = 0{}", pairs - failed.len(), fmt_failed(&failed))))
        });
    }
    Ok(r.checks)
}

fn fmt_failed(failed: &[String]) -> String {
    failed.first().map(|x| format!("; first failure: {x}")).unwrap_or_default()
}

// ---------------------------------------------------------------------------

/// `A = U·D·W` with unimodular `U`, `W`, `left·A·right = D`, `D` diagonal
/// with each invariant factor dividing the next.
pub fn snf_certifies(a: &PolyMatrix, r: &SnfResult) -> Result<bool> {
    let reduce = |m: PolyMatrix| match a.modulus() {
        Some(k) => m.map(|x| x.truncate(k)),
        None => m,
    };
    let udw = reduce(r.u.mul(&r.d)?.mul(&r.w)?);
    let lar = reduce(r.left.mul(a)?.mul(&r.right)?);
    let diag = (0..r.d.rows()).all(|i| (0..r.d.cols()).all(|j| i == j || r.d.get(i, j).is_zero()));
    let chain = r.invariant_factors.windows(2).all(|w| w[1].is_zero() || w[0].divides(&w[1]));
    let on_diag = r.invariant_factors.iter().enumerate().all(|(i, f)| r.d.get(i, i) == f);
    Ok(udw == reduce(a.clone()) && lar == reduce(r.d.clone()) && r.u.is_unimodular() && r.w.is_unimodular() && diag && chain && on_diag)
}

fn complexes(cfg: &Config) -> Result<Vec<Check>> {
    let mut r = Runner::new(cfg, "complexes");
    let mut rng = cfg.rng("complexes");
    let p = cfg.p;
    for (rows, cols) in [(1, 1), (2, 2), (3, 3), (2, 3), (3, 2)] {
        let mats: Vec<PolyMatrix> = (0..SNF_SAMPLES).map(|_| random_matrix(&mut rng, p, rows, cols, 0, 3)).collect();
        r.run(format!("snf[{rows}x{cols}]"), 0, || {
            let mut bad = 0;
            for a in &mats {
                bad += usize::from(!snf_certifies(a, &snf(a))?);
            }
            Ok((bad == 0, format!("{}/{} certified", mats.len() - bad, mats.len())))
        });
    }
    let chain: Vec<PolyMatrix> = (0..CHAIN_RING_SAMPLES)
        .map(|i| random_matrix(&mut rng, p, 3, 3, 0, 3).with_modulus(1 + i as u64 % 3))
        .collect();
    r.run("snf[3x3 mod s^k]", 0, || {
        let mut bad = 0;
        for a in &chain {
            bad += usize::from(!snf_certifies(a, &snf(a))?);
        }
        Ok((bad == 0, format!("{}/{} certified", chain.len() - bad, chain.len())))
    });

    let ring = RingConfig::perfect(p)?;
    let modules: Vec<PresentedModule> = (0..cfg.corpus_size.min(20))
        .map(|_| {
            let (g, k) = (rng.gen_range(1..=3), rng.gen_range(0..=3));
            PresentedModule::new(&ring, 0, random_matrix(&mut rng, p, g, k, 0, 3))
        })
        .collect::<Result<_>>()?;
    r.run("free_resolution", 0, || {
        let mut bad = 0;
        for m in &modules {
            bad += usize::from(!verify_resolution(m, &free_resolution(m, 3)?)?);
        }
        Ok((bad == 0, format!("{}/{} resolutions exact", modules.len() - bad, modules.len())))
    });

    let j = cfg.working_level.min(4);
    let strict: Vec<ChainComplex> = (0..cfg.corpus_size.min(20)).map(|_| random_strict(&mut rng, &ring, 2)).collect::<Result<_>>()?;
    r.run("mu_almost_qis", j, || {
        let mut bad = 0;
        for e in &strict {
            bad += usize::from(!is_almost_qis(&IndChainMap::mu(&IndComplex::constant(e)), j)?.holds());
        }
        Ok((bad == 0, format!("{}/{} μ: m̃⊗E → E almost quasi-isomorphisms", strict.len() - bad, strict.len())))
    });
    Ok(r.checks)
}

// ---------------------------------------------------------------------------

fn k0(cfg: &Config) -> Result<Vec<Check>> {
    let mut r = Runner::new(cfg, "k0");
    let mut rng = cfg.rng("k0");
    let ring = RingConfig::perfect(cfg.p)?;
    let j = cfg.working_level.min(3);
    let mut ledger = RelationLedger::new();
    let corpus: Vec<PerfPlusObject> =
        (0..cfg.corpus_size.max(1)).map(|_| random_perf_plus(&mut rng, &ring, &mut ledger)).collect::<Result<_>>()?;
    r.run("split", j, || {
        let mut bad = Vec::new();
        for (i, e) in corpus.iter().enumerate() {
            let s = split_check(e, j)?;
            if !s.passed() {
                bad.push(format!("#{i} {s:?}"));
            }
        }
        Ok((bad.is_empty(), format!("{}/{} objects split{}", corpus.len() - bad.len(), corpus.len(), fmt_failed(&bad))))
    });
    r.run("triangle_relations", 0, || {
        let (all, kept) = (ledger.verify_all(), ledger.projectors_preserve());
        Ok((all && kept, format!("relations hold: {all}; preserved by both projectors: {kept}")))
    });
    r.run("k_ideal", cfg.working_level, || {
        let rep = k_ideal_check(&ring, cfg.working_level)?;
        Ok((rep.passed(), format!("{rep:?}")))
    });
    r.run("gersten", 2, || {
        let rep = gersten_check(&ring, 2, &corpus)?;
        Ok((rep.passed(), format!("{rep:?}")))
    });
    Ok(r.checks)
}

// ---------------------------------------------------------------------------

/// A random presented module over `V/t^c` with relations supported at level 1.
fn random_truncated_module(rng: &mut impl Rng, ring: &RingConfig) -> Result<PresentedModule> {
    let (g, k) = (rng.gen_range(1..=3), rng.gen_range(0..=3));
    PresentedModule::new(ring, 1, random_matrix(rng, ring.p, g, k, 1, 4))
}

/// A nonzero `t^e`, `e = k/p > 0`, below the truncation.
fn random_radical_monomial(rng: &mut impl Rng, ring: &RingConfig) -> Result<BaseElem> {
    let cap = ring.truncation().and_then(|c| c.at_level(1)).unwrap_or(2 * ring.p as u64);
    BaseElem::t_pow(ring, PAdicExponent::new(ring.p, rng.gen_range(1..cap.max(2)), 1))
}

/// `1 + t^e·X` on `A^r`, `X` random.
pub fn random_congruent_map(rng: &mut impl Rng, ring: &RingConfig, r: usize, e: &PAdicExponent) -> Result<ModuleMap> {
    let free = PresentedModule::free(ring, r)?;
    let level = e.denom_exp().max(1);
    let free = free.lift(level);
    let x = random_matrix(rng, ring.p, r, r, level, 3);
    let te = BaseElem::t_pow(ring, e.clone())?.to_poly(level)?;
    let m = PolyMatrix::identity(ring.p, r).add(&x.scale(&te))?;
    ModuleMap::new(&free, &free, m)
}

fn algebra(cfg: &Config) -> Result<Vec<Check>> {
    let mut r = Runner::new(cfg, "algebra");
    let mut rng = cfg.rng("algebra");
    let p = cfg.p;
    let j = cfg.working_level.min(4);

    let shadows = [Algebra::monomial_ideal(p, 1, 4, 4), Algebra::monomial_ideal(p, 1, 2 * p as usize, 2 * p as usize), Algebra::monomial_ideal(p, 2, 5, 6)];
    r.run("unitalization_axioms", 0, || {
        let mut failures = 0;
        for (i, b) in shadows.iter().enumerate() {
            let u = unitalize(b)?;
            u.check_axioms()?;
            let n = TRIPLE_SAMPLES / shadows.len() + usize::from(i < TRIPLE_SAMPLES % shadows.len());
            failures += u.check_random_triples(&mut rng, n);
            failures += usize::from(!unitalization_round_trip(b)?);
        }
        Ok((failures == 0, format!("{TRIPLE_SAMPLES} triples, {failures} failures")))
    });

    let perfect = RingConfig::perfect(p)?;
    let carriers = unital_corpus(&mut rng, &perfect, cfg.corpus_size.min(12));
    let show = |f: &Vec<Interval>| f.iter().map(ToString::to_string).collect::<Vec<_>>().join(" × ");
    let names: Vec<String> = carriers.iter().map(show).collect();
    r.run("shriek_sequence", j, || {
        let mut bad = Vec::new();
        for (f, name) in carriers.iter().zip(&names) {
            let rep = check_sequence(&b_shriek_shriek(&unital_carrier(&perfect, f)?)?, j)?;
            if !rep.passed() {
                bad.push(format!("{name}: {rep:?}"));
            }
        }
        Ok((bad.is_empty(), format!("{}/{} carriers{}", carriers.len() - bad.len(), carriers.len(), fmt_failed(&bad))))
    });
    r.run("counit_almost_iso", j, || {
        let mut bad = Vec::new();
        for (f, name) in carriers.iter().zip(&names) {
            let rep = monoidal_equiv_check(&unital_carrier(&perfect, f)?, j)?;
            if !rep.passed() {
                bad.push(format!("{name}: {rep:?}"));
            }
        }
        Ok((bad.is_empty(), format!("{}/{} carriers{}", carriers.len() - bad.len(), carriers.len(), fmt_failed(&bad))))
    });

    r.run("syntomic_ladder", 0, || {
        let mut bad = Vec::new();
        for n in 1..=3 {
            for m in 1..=3 {
                let s = ladder_step(&perfect, n, m)?;
                if !s.syntomic() {
                    bad.push(format!("(n={n}, m={m}) T/JT = {}", s.reduction));
                }
            }
        }
        Ok((bad.is_empty(), format!("{}/9 steps finite syntomic{}", 9 - bad.len(), fmt_failed(&bad))))
    });
    r.run("n_to_one", 0, || {
        let mut bad = Vec::new();
        for n in 1..=3 {
            for m in 1..=3 {
                if !n_to_one(&perfect, n, m)?.holds() {
                    bad.push(format!("(n={n}, m={m})"));
                }
            }
        }
        Ok((bad.is_empty(), format!("{}/9 rescalings{}", 9 - bad.len(), fmt_failed(&bad))))
    });

    let bases: Vec<RingConfig> =
        [1, 2].iter().map(|&c| RingConfig::truncated(p, PAdicExponent::integer(p, c))).collect::<Result<_>>()?;
    r.run("nakayama", 0, || {
        let mut nontrivial = 0;
        for i in 0..NAKAYAMA_SAMPLES {
            let ring = &bases[i % bases.len()];
            let m = random_truncated_module(&mut rng, ring)?;
            let ideal: Vec<BaseElem> = (0..rng.gen_range(1..=2)).map(|_| random_radical_monomial(&mut rng, ring)).collect::<Result<_>>()?;
            let out = almost_nakayama(&m, &ideal)?;
            nontrivial += usize::from(out.im_equals_m);
            if !out.holds() {
                return Ok((false, format!("counterexample: {m} with I = {ideal:?}")));
            }
        }
        Ok((true, format!("{NAKAYAMA_SAMPLES} instances, no counterexample ({nontrivial} with IM = M)")))
    });
    r.run("almost_lift", 0, || {
        for i in 0..LIFT_SAMPLES {
            let ring = &bases[i % bases.len()];
            let g = random_radical_monomial(&mut rng, ring)?;
            let rank = rng.gen_range(1..=3);
            let f = random_congruent_map(&mut rng, ring, rank, g.monomial_exponent()?)?;
            let out = almost_lift_check(&f, &[g])?;
            if !out.holds() || !out.iso {
                return Ok((false, format!("#{i}: {out:?}")));
            }
        }
        Ok((true, format!("{LIFT_SAMPLES} maps congruent to the identity lift to isomorphisms")))
    });
    Ok(r.checks)
}

// ---------------------------------------------------------------------------

pub fn lemma_a_corpus(p: u32) -> Vec<LemmaAlgebra> {
    vec![LemmaAlgebra::Product(1), LemmaAlgebra::Product(2), LemmaAlgebra::Truncated(p as usize)]
}

fn tilting(cfg: &Config) -> Result<Vec<Check>> {
    let mut r = Runner::new(cfg, "tilting");
    let p = cfg.p;
    let j = cfg.working_level.min(4);
    for n in 1..=3 {
        r.run(format!("tilt_basis_iso[n={n}]"), n, || {
            let t = tilt_basis_iso(p, n, 2)?;
            Ok((t.holds(), format!("{} products checked over a basis of {}", t.pairs_checked, t.basis.len())))
        });
    }
    let perfect = RingConfig::perfect(p)?;
    for a in lemma_a_corpus(p) {
        r.run(format!("lemma_a[{a:?}]"), j, || {
            let mut bad = Vec::new();
            let mut exact = 0;
            for n in 1..=3 {
                let rep = verify_lemma_a(&perfect, a, n, j)?;
                exact += usize::from(rep.exact_iso);
                if !rep.holds() {
                    bad.push(rep.to_json().to_string());
                }
            }
            Ok((bad.is_empty(), format!("n = 1..3: {}/3 hold, {exact}/3 already exact{}", 3 - bad.len(), fmt_failed(&bad))))
        });
    }
    let mixed = if cfg.mode == "mixed" { cfg.ring()? } else { RingConfig::mixed(p, cfg.level.max(1), 2)? };
    r.run(format!("zigzag[{}]", mixed.mode_name()), j, || {
        let z = tilting_zigzag(&mixed, j)?;
        Ok((z.holds(), z.to_json().to_string()))
    });
    r.run("frobenius", 3, || {
        let mut ok = true;
        for l in 1..=3 {
            ok &= frobenius_iso_check(&perfect, &PAdicExponent::integer(p, 1), l)?;
        }
        Ok((ok, "A/t^(1/p) ≅ A/t for A = V at levels 1..3".into()))
    });
    Ok(r.checks)
}

// ---------------------------------------------------------------------------

fn tower(cfg: &Config) -> Result<Vec<Check>> {
    let mut r = Runner::new(cfg, "tower");
    let j = cfg.working_level.min(3);
    for depth in 1..=cfg.depth.min(4) {
        let spec = TowerSpec::truncated(cfg.p, depth)?;
        for firm in [false, true] {
            r.run(format!("roundtrip[depth={depth},firm={firm}]"), j, || {
                let mut bad = Vec::new();
                for rank in 1..=4 {
                    let rt = tower_roundtrip(&spec, rank, firm, j)?;
                    if !rt.holds() {
                        bad.push(format!("{rt:?}"));
                    }
                }
                Ok((bad.is_empty(), format!("ranks 1..4: {}/4 round trips exact{}", 4 - bad.len(), fmt_failed(&bad))))
            });
        }
    }
    r.run("non_surjective_rejected", 0, || {
        let spec = TowerSpec::truncated(cfg.p, 2)?;
        let free = PresentedModule::free(&spec.ring, 1)?;
        let t = BaseElem::t_pow(&spec.ring, PAdicExponent::integer(cfg.p, 1))?;
        let mult = ModuleMap::scalar(&free, &t)?;
        let out = tower_limit(&[free.clone(), free], &[mult]);
        Ok((matches!(out, Err(Error::NonSurjective(_))), "multiplication by ω as a transition".into()))
    });
    Ok(r.checks)
}

// ---------------------------------------------------------------------------
// Single operations.

pub const OPS: [&str; 9] = ["snf", "decompose", "firmify", "closedify", "k0_class", "a_n_plus", "tilt", "ladder", "lemma_a"];

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Input(format!("missing field {key}")))
}

fn uint(v: &Value, key: &str) -> Result<u64> {
    field(v, key)?.as_u64().ok_or_else(|| Error::Input(format!("{key} must be a non-negative integer")))
}

fn uint_or(v: &Value, key: &str, default: u64) -> Result<u64> {
    if v.get(key).is_some() {
        uint(v, key)
    } else {
        Ok(default)
    }
}

fn prime(v: &Value) -> Result<u32> {
    let p = uint(v, "p")? as u32;
    if !is_prime(p) {
        return Err(Error::InvalidConfig(format!("{p} is not prime")));
    }
    Ok(p)
}

fn matrix_json(m: &PolyMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(poly_to_json).collect())).collect())
}

/// Parses `"V"`, `"m"`, `"V/m"`, `"0"`, or a list of intervals
/// `{"kind": "[)" | "(]" | "[]" | "()", "len": "1/2" | null}`.
fn monomial_input(p: u32, v: &Value) -> Result<MonomialModule> {
    if let Some(s) = v.as_str() {
        return match s {
            "V" => Ok(MonomialModule::v(p)),
            "m" => Ok(MonomialModule::ideal_m(p)),
            "V/m" => Ok(MonomialModule::residue(p)),
            "0" => Ok(MonomialModule::zero(p)),
            other => Err(Error::Input(format!("unrecognized module {other}"))),
        };
    }
    let items = v.as_array().ok_or_else(|| Error::Input("module must be a name or a list of intervals".into()))?;
    let mut out = Vec::new();
    for it in items {
        let kind = match field(it, "kind")?.as_str() {
            Some("[)") => IntervalKind::ClosedOpen,
            Some("(]") => IntervalKind::OpenClosed,
            Some("[]") => IntervalKind::ClosedClosed,
            Some("()") => IntervalKind::OpenOpen,
            _ => return Err(Error::Input(format!("bad interval kind in {it}"))),
        };
        let len = match it.get("len") {
            None | Some(Value::Null) => None,
            Some(Value::String(l)) => Some(PAdicExponent::parse(p, l)?),
            Some(l) => Some(PAdicExponent::from_json(p, l)?),
        };
        out.push(Some(Interval::new(kind, len).ok_or_else(|| Error::Input(format!("degenerate interval {it}")))?));
    }
    Ok(MonomialModule::new(p, out))
}

/// Names the recognized constants among firm and closed outputs.
fn constant_tag(m: &MonomialModule) -> Option<&'static str> {
    let p = m.p;
    [(MonomialModule::zero(p), "ZERO"), (MonomialModule::v(p), "V"), (MonomialModule::ideal_m(p), "IDEAL_M"), (MonomialModule::residue(p), "RESIDUE")]
        .into_iter()
        .find(|(x, _)| x == m)
        .map(|(_, t)| t)
}

fn lemma_algebra(v: &Value) -> Result<LemmaAlgebra> {
    match v.get("algebra") {
        None => Ok(LemmaAlgebra::Product(1)),
        Some(a) => {
            if let Some(r) = a.get("product").and_then(Value::as_u64) {
                Ok(LemmaAlgebra::Product(r as usize))
            } else if let Some(r) = a.get("truncated").and_then(Value::as_u64) {
                Ok(LemmaAlgebra::Truncated(r as usize))
            } else {
                Err(Error::Input("algebra must be {\"product\": r} or {\"truncated\": r}".into()))
            }
        }
    }
}

/// One operation on a JSON input; the output echoes the operation and input.
pub fn compute(op: &str, input: &Value) -> Result<Value> {
    let result = match op {
        "snf" => {
            let p = prime(input)?;
            let rows = field(input, "matrix")?.as_array().ok_or_else(|| Error::Input("matrix must be a list of rows".into()))?;
            let parsed = rows
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| Error::Input("matrix rows must be lists".into()))?
                        .iter()
                        .map(|x| poly_from_json(p, x))
                        .collect::<Result<Vec<Poly>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let mut a = PolyMatrix::from_rows(p, parsed)?;
            if let Some(k) = input.get("modulus").and_then(Value::as_u64) {
                a = a.with_modulus(k);
            }
            let r = snf(&a);
            json!({
                "invariant_factors": r.invariant_factors.iter().map(poly_to_json).collect::<Vec<_>>(),
                "rank": r.rank, "u": matrix_json(&r.u), "d": matrix_json(&r.d), "w": matrix_json(&r.w),
                "certified": snf_certifies(&a, &r)?,
            })
        }
        "decompose" => {
            let m = PresentedModule::from_json(input)?;
            json!({"decomposition": m.decompose().to_json(), "display": m.decompose().to_string()})
        }
        "firmify" | "closedify" => {
            let (p, m) = match input {
                Value::String(_) => (2, input),
                _ => (prime(input)?, field(input, "module")?),
            };
            let m = monomial_input(p, m)?;
            let out = if op == "firmify" { m.firmify() } else { m.closedify() };
            json!({"module": out.to_string(), "tag": constant_tag(&out)})
        }
        "k0_class" => {
            let p = prime(input)?;
            let ring = RingConfig::perfect(p)?;
            let gens = field(input, "generators")?.as_object().ok_or_else(|| Error::Input("generators must map degrees to [#A, #m̃⊗A]".into()))?;
            let mut e = PerfPlusObject::zero(&ring);
            for (deg, counts) in gens {
                let d: i32 = deg.parse().map_err(|_| Error::Input(format!("bad degree {deg}")))?;
                let c = counts.as_array().filter(|c| c.len() == 2).ok_or_else(|| Error::Input(format!("bad counts {counts}")))?;
                let (a, b) = (c[0].as_u64().unwrap_or(0), c[1].as_u64().unwrap_or(0));
                for _ in 0..a {
                    e = e.direct_sum(&PerfPlusObject::unit(&ring, d)?);
                }
                for _ in 0..b {
                    e = e.direct_sum(&PerfPlusObject::unit(&ring, d)?.firmify());
                }
            }
            k0_class(&e).to_json()
        }
        "a_n_plus" => {
            let p = prime(input)?;
            let ring = RingConfig::perfect(p)?;
            let n = uint_or(input, "n", 1)? as u32;
            let levels = uint_or(input, "levels", 3)?.min(10) as u32;
            let m = a_n_plus(&ring, lemma_algebra(input)?, n)?;
            let comps = (0..=levels).map(|j| Ok(m.component(j)?.decompose().to_string())).collect::<Result<Vec<_>>>()?;
            json!({"components": comps})
        }
        "lemma_a" => {
            let p = prime(input)?;
            let n = uint_or(input, "n", 1)? as u32;
            let levels = uint_or(input, "levels", 3)?.min(10) as u32;
            verify_lemma_a(&RingConfig::perfect(p)?, lemma_algebra(input)?, n, levels)?.to_json()
        }
        "tilt" => {
            let p = prime(input)?;
            tilt_basis_iso(p, uint_or(input, "n", 1)? as u32, uint_or(input, "c", 2)? as u32)?.to_json()
        }
        "ladder" => {
            let p = prime(input)?;
            ladder_step(&RingConfig::perfect(p)?, uint(input, "n")? as u32, uint(input, "m")? as u32)?.to_json()
        }
        other => return Err(Error::Input(format!("unknown operation {other}; expected one of {}", OPS.join(", ")))),
    };
    Ok(json!({"op": op, "input": input, "result": result, "version": env!("CARGO_PKG_VERSION")}))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(Config::default().validate().is_ok());
        for bad in [
            Config { p: 4, ..Config::default() },
            Config { level: 7, ..Config::default() },
            Config { working_level: 11, ..Config::default() },
            Config { mode: "weird".into(), ..Config::default() },
            Config { mode: "truncated".into(), truncation: "0".into(), ..Config::default() },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
        assert!(run_suite("nope", &Config::default()).is_err());
    }

    #[test]
    fn firmify_recognizes_v() {
        let out = compute("firmify", &json!("V")).unwrap();
        assert_eq!(out["result"]["tag"], "IDEAL_M");
        let out = compute("closedify", &json!({"p": 3, "module": [{"kind": "(]", "len": "1/3"}]})).unwrap();
        assert_eq!(out["result"]["module"], "[0,1/3)");
    }

    #[test]
    fn snf_op() {
        let out = compute("snf", &json!({"p": 2, "matrix": [[[[1, 1]], []], [[], [[2, 1]]]]})).unwrap();
        assert_eq!(out["result"]["certified"], true);
        assert_eq!(out["result"]["rank"], 2);
    }
}
