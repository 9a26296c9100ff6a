//! Decision procedures for Rickart-type properties of modules and module
//! pairs, with witnesses, and the per-module property report.
//!
//! Relative properties are stated for a pair `(M, N)` and quantify over
//! `Hom(M, N)`. They only depend on the set of kernels (submodules of `M`)
//! and the set of images (submodules of `N`) that occur, so an [`Engine`]
//! computes those two sets once per pair and caches them next to the
//! submodule lattices.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::arith::{factorize, invariant_factors_embed, invariant_factors_from_partitions};
use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::hom::{fill_image_table, find_embedding, HomSpace, ModuleHom};
use crate::lattice::{Lattice, QuotientModule, Submodule};
use crate::limits::Limits;
use crate::module::FiniteModule;

/// The property vocabulary. Names are the strings used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Rickart,
    DualRickart,
    CsRickart,
    DualCsRickart,
    Extending,
    Lifting,
    SipExtending,
    SspLifting,
    Sip,
    Ssp,
    KNonsingular,
    TNonsingular,
}

impl Property {
    pub const ALL: [Property; 12] = [
        Property::Rickart,
        Property::DualRickart,
        Property::CsRickart,
        Property::DualCsRickart,
        Property::Extending,
        Property::Lifting,
        Property::SipExtending,
        Property::SspLifting,
        Property::Sip,
        Property::Ssp,
        Property::KNonsingular,
        Property::TNonsingular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Rickart => "rickart",
            Property::DualRickart => "dual-rickart",
            Property::CsRickart => "cs-rickart",
            Property::DualCsRickart => "dual-cs-rickart",
            Property::Extending => "extending",
            Property::Lifting => "lifting",
            Property::SipExtending => "sip-extending",
            Property::SspLifting => "ssp-lifting",
            Property::Sip => "sip",
            Property::Ssp => "ssp",
            Property::KNonsingular => "k-nonsingular",
            Property::TNonsingular => "t-nonsingular",
        }
    }

    /// Accepts the canonical names plus the `ssip-extending` and
    /// `sssp-lifting` aliases.
    pub fn from_name(s: &str) -> Option<Property> {
        match s {
            "ssip-extending" => Some(Property::SipExtending),
            "sssp-lifting" => Some(Property::SspLifting),
            _ => Property::ALL.into_iter().find(|p| p.name() == s),
        }
    }

    /// Properties defined by a quantifier over a hom set.
    pub fn is_relative(self) -> bool {
        matches!(
            self,
            Property::Rickart
                | Property::DualRickart
                | Property::CsRickart
                | Property::DualCsRickart
                | Property::KNonsingular
                | Property::TNonsingular
        )
    }

    fn uses_kernels(self) -> bool {
        matches!(
            self,
            Property::Rickart | Property::CsRickart | Property::KNonsingular
        )
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How hom-quantified properties obtain the kernels and images of a hom set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HomRoute {
    /// `Classify` over Z and Z_n, `Enumerate` otherwise.
    #[default]
    Auto,
    /// Walk every homomorphism.
    Enumerate,
    /// Over Z or Z_n: `K` is a kernel iff `M/K` embeds in `N`, and `L` is an
    /// image iff `L` embeds in `M` (subgroups and quotients of a finite
    /// abelian group have the same isomorphism types).
    Classify,
}

#[derive(Debug, Clone, Default)]
pub struct EngineOptions {
    pub limits: Limits,
    pub route: HomRoute,
    /// Decide essential/superfluous/summand/lies-above from the definitions
    /// instead of the socle and radical shortcuts.
    pub brute_force: bool,
    /// Attach success certificates to verdicts.
    pub verbose: bool,
}

/// Evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub hom: Option<ModuleHom>,
    pub submodule: Option<Submodule>,
    pub note: String,
}

impl Witness {
    fn hom(hom: ModuleHom, sub: Submodule, note: impl Into<String>) -> Self {
        Witness {
            hom: Some(hom),
            submodule: Some(sub),
            note: note.into(),
        }
    }

    fn sub(sub: Submodule, note: impl Into<String>) -> Self {
        Witness {
            hom: None,
            submodule: Some(sub),
            note: note.into(),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.note)?;
        if let Some(h) = &self.hom {
            write!(f, "; hom {h}")?;
        }
        if let Some(s) = &self.submodule {
            write!(f, "; submodule {s}")?;
        }
        Ok(())
    }
}

/// A submodule paired with the summand that certifies it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub submodule: Submodule,
    pub summand: Submodule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    /// Present when the property fails.
    pub witness: Option<Witness>,
    /// Filled only in verbose mode when the property holds.
    pub certificates: Vec<Certificate>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict {
            holds: true,
            witness: None,
            certificates: Vec::new(),
        }
    }

    fn fail(w: Witness) -> Self {
        Verdict {
            holds: false,
            witness: Some(w),
            certificates: Vec::new(),
        }
    }
}

fn cached<T>(cell: &OnceLock<Arc<T>>, f: impl FnOnce() -> Result<T>) -> Result<Arc<T>> {
    if let Some(v) = cell.get() {
        return Ok(v.clone());
    }
    let v = Arc::new(f()?);
    Ok(cell.get_or_init(|| v).clone())
}

/// Per-module data derived from the lattice.
struct Analysis {
    module: FiniteModule,
    lattice: OnceLock<Arc<Lattice>>,
    ess_summand: OnceLock<Arc<Vec<Option<usize>>>>,
    above: OnceLock<Arc<Vec<Option<usize>>>>,
    summand: OnceLock<Arc<Vec<bool>>>,
    essential: OnceLock<Arc<Vec<bool>>>,
    superfluous: OnceLock<Arc<Vec<bool>>>,
    quotient_types: OnceLock<Arc<Vec<Vec<u64>>>>,
    sub_types: OnceLock<Arc<Vec<Vec<u64>>>>,
}

#[derive(Clone)]
struct Entry {
    sub: usize,
    first: Option<(u64, Vec<usize>)>,
}

#[derive(Default)]
struct HomProfile {
    kernels: OnceLock<Arc<Vec<Entry>>>,
    images: OnceLock<Arc<Vec<Entry>>>,
}

/// Property decision session with caches keyed by module structure.
#[derive(Default)]
pub struct Engine {
    opts: EngineOptions,
    analyses: Mutex<HashMap<FiniteModule, Arc<Analysis>>>,
    profiles: Mutex<HashMap<(FiniteModule, FiniteModule), Arc<HomProfile>>>,
}

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine").field("opts", &self.opts).finish()
    }
}

impl Engine {
    pub fn new(opts: EngineOptions) -> Self {
        Engine {
            opts,
            ..Default::default()
        }
    }

    pub fn options(&self) -> &EngineOptions {
        &self.opts
    }

    pub fn limits(&self) -> &Limits {
        &self.opts.limits
    }

    /// Drops all cached lattices and hom profiles.
    pub fn clear(&self) {
        self.analyses.lock().unwrap().clear();
        self.profiles.lock().unwrap().clear();
    }

    fn analysis(&self, m: &FiniteModule) -> Arc<Analysis> {
        let mut map = self.analyses.lock().unwrap();
        map.entry(m.clone())
            .or_insert_with(|| {
                Arc::new(Analysis {
                    module: m.clone(),
                    lattice: OnceLock::new(),
                    ess_summand: OnceLock::new(),
                    above: OnceLock::new(),
                    summand: OnceLock::new(),
                    essential: OnceLock::new(),
                    superfluous: OnceLock::new(),
                    quotient_types: OnceLock::new(),
                    sub_types: OnceLock::new(),
                })
            })
            .clone()
    }

    fn profile(&self, m: &FiniteModule, n: &FiniteModule) -> Arc<HomProfile> {
        let mut map = self.profiles.lock().unwrap();
        map.entry((m.clone(), n.clone())).or_default().clone()
    }

    pub fn lattice(&self, m: &FiniteModule) -> Result<Arc<Lattice>> {
        let a = self.analysis(m);
        cached(&a.lattice, || Lattice::with_limits(m, &self.opts.limits))
    }

    fn summand_flags(&self, a: &Analysis) -> Result<Arc<Vec<bool>>> {
        let lat = self.lattice(&a.module)?;
        cached(&a.summand, || {
            Ok(if self.opts.brute_force {
                lat.submodules()
                    .iter()
                    .map(|k| lat.is_direct_summand_bruteforce(k))
                    .collect()
            } else {
                (0..lat.len()).map(|i| lat.is_summand_id(i)).collect()
            })
        })
    }

    fn essential_flags(&self, a: &Analysis) -> Result<Arc<Vec<bool>>> {
        let lat = self.lattice(&a.module)?;
        cached(&a.essential, || {
            let whole = lat.get(lat.whole_id());
            lat.submodules()
                .iter()
                .map(|k| {
                    if self.opts.brute_force {
                        lat.is_essential_bruteforce(k, whole)
                    } else {
                        lat.is_essential(k, whole)
                    }
                })
                .collect()
        })
    }

    fn superfluous_flags(&self, a: &Analysis) -> Result<Arc<Vec<bool>>> {
        let lat = self.lattice(&a.module)?;
        cached(&a.superfluous, || {
            let whole = lat.get(lat.whole_id());
            lat.submodules()
                .iter()
                .map(|k| {
                    if self.opts.brute_force {
                        lat.is_superfluous_bruteforce(k, whole)
                    } else {
                        lat.is_superfluous(k, whole)
                    }
                })
                .collect()
        })
    }

    fn ess_summands(&self, a: &Analysis) -> Result<Arc<Vec<Option<usize>>>> {
        let lat = self.lattice(&a.module)?;
        cached(&a.ess_summand, || {
            if !self.opts.brute_force {
                return Ok(lat.essential_summands().to_vec());
            }
            let summand = self.summand_flags(a)?;
            let ids: Vec<usize> = (0..lat.len()).filter(|&i| summand[i]).collect();
            lat.submodules()
                .iter()
                .map(|k| {
                    for &d in &ids {
                        let ds = lat.get(d);
                        if k.is_subset(ds) && lat.is_essential_bruteforce(k, ds)? {
                            return Ok(Some(d));
                        }
                    }
                    Ok(None)
                })
                .collect()
        })
    }

    fn lying_above(&self, a: &Analysis) -> Result<Arc<Vec<Option<usize>>>> {
        let lat = self.lattice(&a.module)?;
        cached(&a.above, || {
            if !self.opts.brute_force {
                return Ok(lat.lying_above().to_vec());
            }
            lat.submodules()
                .iter()
                .map(|l| {
                    Ok(lat
                        .lies_above_summand_bruteforce(l, &self.opts.limits)?
                        .map(|k| lat.id_of(&k).expect("summand of the same module")))
                })
                .collect()
        })
    }

    /// Invariant factors of `M/K` for every submodule `K`.
    fn quotient_types(&self, a: &Analysis) -> Result<Arc<Vec<Vec<u64>>>> {
        let lat = self.lattice(&a.module)?;
        cached(&a.quotient_types, || {
            let m = &a.module;
            let mults = multiplication_tables(m);
            Ok(lat
                .submodules()
                .iter()
                .map(|k| {
                    let order = (m.size() / k.len()) as u64;
                    type_from_torsion(order, |p, j| {
                        let table = &mults[&(p, j)];
                        let hits = (0..m.size())
                            .filter(|&x| k.contains(table[x] as usize))
                            .count();
                        (hits / k.len()) as u64
                    })
                })
                .collect())
        })
    }

    /// Invariant factors of every submodule `L`.
    fn sub_types(&self, a: &Analysis) -> Result<Arc<Vec<Vec<u64>>>> {
        let lat = self.lattice(&a.module)?;
        cached(&a.sub_types, || {
            let m = &a.module;
            let mults = multiplication_tables(m);
            Ok(lat
                .submodules()
                .iter()
                .map(|l| {
                    type_from_torsion(l.len() as u64, |p, j| {
                        let table = &mults[&(p, j)];
                        l.elements()
                            .iter()
                            .filter(|&&x| table[x as usize] == 0)
                            .count() as u64
                    })
                })
                .collect())
        })
    }

    fn route(&self, m: &FiniteModule) -> Result<HomRoute> {
        let abelian = m.ring().is_abelian_group_ring();
        match self.opts.route {
            HomRoute::Auto if abelian => Ok(HomRoute::Classify),
            HomRoute::Auto => Ok(HomRoute::Enumerate),
            HomRoute::Classify if !abelian => Err(Error::NotAbelianRing),
            r => Ok(r),
        }
    }

    /// Walks `Hom(M, N)` once and records each distinct kernel and image
    /// with the first hom (in lexicographic order) that realizes it.
    fn enumerate_profile(&self, m: &FiniteModule, n: &FiniteModule, p: &HomProfile) -> Result<()> {
        let lm = self.lattice(m)?;
        let ln = self.lattice(n)?;
        let space = HomSpace::new(m, n)?;
        let mut kernels: Vec<Entry> = Vec::new();
        let mut images: Vec<Entry> = Vec::new();
        let mut seen_k: HashSet<usize> = HashSet::new();
        let mut seen_i: HashSet<usize> = HashSet::new();
        let mut kw = vec![0u64; m.size().div_ceil(64)];
        let mut iw = vec![0u64; n.size().div_ceil(64)];
        space.for_each_table(&self.opts.limits, |idx, rows, table| {
            kw.iter_mut().for_each(|w| *w = 0);
            iw.iter_mut().for_each(|w| *w = 0);
            for (x, &y) in table.iter().enumerate() {
                if y == 0 {
                    kw[x / 64] |= 1 << (x % 64);
                }
                iw[y as usize / 64] |= 1 << (y % 64);
            }
            let k = lm.id_of_words(&kw).expect("kernel is a submodule");
            let i = ln.id_of_words(&iw).expect("image is a submodule");
            if seen_k.insert(k) {
                kernels.push(Entry {
                    sub: k,
                    first: Some((idx, rows.to_vec())),
                });
            }
            if seen_i.insert(i) {
                images.push(Entry {
                    sub: i,
                    first: Some((idx, rows.to_vec())),
                });
            }
            ControlFlow::Continue(())
        })?;
        let _ = p.kernels.set(Arc::new(kernels));
        let _ = p.images.set(Arc::new(images));
        Ok(())
    }

    fn kernels(&self, m: &FiniteModule, n: &FiniteModule) -> Result<Arc<Vec<Entry>>> {
        m.same_ring(n)?;
        let p = self.profile(m, n);
        if let Some(k) = p.kernels.get() {
            return Ok(k.clone());
        }
        match self.route(m)? {
            HomRoute::Classify => {
                let target = n.canonical_form()?;
                let types = self.quotient_types(&self.analysis(m))?;
                let list = types
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| invariant_factors_embed(t, &target))
                    .map(|(sub, _)| Entry { sub, first: None })
                    .collect();
                Ok(p.kernels.get_or_init(|| Arc::new(list)).clone())
            }
            _ => {
                self.enumerate_profile(m, n, &p)?;
                Ok(p.kernels.get().expect("set by enumeration").clone())
            }
        }
    }

    fn images(&self, m: &FiniteModule, n: &FiniteModule) -> Result<Arc<Vec<Entry>>> {
        m.same_ring(n)?;
        let p = self.profile(m, n);
        if let Some(k) = p.images.get() {
            return Ok(k.clone());
        }
        match self.route(m)? {
            HomRoute::Classify => {
                let source = m.canonical_form()?;
                let types = self.sub_types(&self.analysis(n))?;
                let list = types
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| invariant_factors_embed(t, &source))
                    .map(|(sub, _)| Entry { sub, first: None })
                    .collect();
                Ok(p.images.get_or_init(|| Arc::new(list)).clone())
            }
            _ => {
                self.enumerate_profile(m, n, &p)?;
                Ok(p.images.get().expect("set by enumeration").clone())
            }
        }
    }

    /// Decides a hom-quantified property over `Hom(source, target)`.
    ///
    /// Kernel-based properties (`rickart`, `cs-rickart`, `k-nonsingular`)
    /// say "`target` is `source`-P"; image-based ones (`dual-rickart`,
    /// `dual-cs-rickart`) say "`target` is dual `source`-P", and
    /// `t-nonsingular` says "`source` is `target`-T-nonsingular".
    pub fn decide_relative(
        &self,
        prop: Property,
        source: &FiniteModule,
        target: &FiniteModule,
    ) -> Result<bool> {
        Ok(self.relative(prop, source, target, false)?.holds)
    }

    /// Same as [`Engine::decide_relative`] with witness and certificates.
    pub fn explain_relative(
        &self,
        prop: Property,
        source: &FiniteModule,
        target: &FiniteModule,
    ) -> Result<Verdict> {
        self.relative(prop, source, target, true)
    }

    fn relative(
        &self,
        prop: Property,
        m: &FiniteModule,
        n: &FiniteModule,
        explain: bool,
    ) -> Result<Verdict> {
        if !prop.is_relative() {
            return Err(Error::Malformed(format!(
                "{prop} is not a property of a module pair"
            )));
        }
        let (owner, entries) = if prop.uses_kernels() {
            (m, self.kernels(m, n)?)
        } else {
            (n, self.images(m, n)?)
        };
        let a = self.analysis(owner);
        let lat = self.lattice(owner)?;
        let whole = lat.whole_id();
        let (bad, support): (Vec<&Entry>, Vec<Option<usize>>) = match prop {
            Property::Rickart | Property::DualRickart => {
                let s = self.summand_flags(&a)?;
                let bad = entries.iter().filter(|e| !s[e.sub]).collect();
                (bad, entries.iter().map(|e| Some(e.sub)).collect())
            }
            Property::CsRickart => {
                let s = self.ess_summands(&a)?;
                let bad = entries.iter().filter(|e| s[e.sub].is_none()).collect();
                (bad, entries.iter().map(|e| s[e.sub]).collect())
            }
            Property::DualCsRickart => {
                let s = self.lying_above(&a)?;
                let bad = entries.iter().filter(|e| s[e.sub].is_none()).collect();
                (bad, entries.iter().map(|e| s[e.sub]).collect())
            }
            Property::KNonsingular => {
                let ess = self.essential_flags(&a)?;
                let bad = entries
                    .iter()
                    .filter(|e| e.sub != whole && ess[e.sub])
                    .collect();
                (bad, Vec::new())
            }
            Property::TNonsingular => {
                let sup = self.superfluous_flags(&a)?;
                let bad = entries
                    .iter()
                    .filter(|e| e.sub != 0 && sup[e.sub])
                    .collect();
                (bad, Vec::new())
            }
            _ => unreachable!(),
        };
        if bad.is_empty() {
            let mut v = Verdict::pass();
            if explain && self.opts.verbose {
                v.certificates = entries
                    .iter()
                    .zip(&support)
                    .filter_map(|(e, s)| {
                        s.map(|d| Certificate {
                            submodule: lat.get(e.sub).clone(),
                            summand: lat.get(d).clone(),
                        })
                    })
                    .collect();
            }
            return Ok(v);
        }
        if !explain {
            return Ok(Verdict {
                holds: false,
                witness: None,
                certificates: Vec::new(),
            });
        }
        let note = match prop {
            Property::Rickart => "kernel is not a direct summand",
            Property::DualRickart => "image is not a direct summand",
            Property::CsRickart => "kernel is essential in no direct summand",
            Property::DualCsRickart => "image lies above no direct summand",
            Property::KNonsingular => "nonzero hom with essential kernel",
            Property::TNonsingular => "nonzero hom with superfluous image",
            _ => unreachable!(),
        };
        Ok(Verdict::fail(
            self.first_failing(prop, m, n, &lat, &bad, note)?,
        ))
    }

    fn first_failing(
        &self,
        prop: Property,
        m: &FiniteModule,
        n: &FiniteModule,
        lat: &Lattice,
        bad: &[&Entry],
        note: &str,
    ) -> Result<Witness> {
        if let Some(e) = bad
            .iter()
            .filter(|e| e.first.is_some())
            .min_by_key(|e| e.first.as_ref().unwrap().0)
        {
            let rows = e.first.as_ref().unwrap().1.clone();
            let hom = ModuleHom::from_rows(m, n, rows)?;
            return Ok(Witness::hom(hom, lat.get(e.sub).clone(), note));
        }
        // classified route: find the first failing hom by a scan when the
        // hom set is small enough, otherwise build one with the bad kernel
        let space = HomSpace::new(m, n)?;
        let bad_sets: HashSet<&ElemSet> = bad.iter().map(|e| lat.get(e.sub).set()).collect();
        if space.candidate_count() <= self.opts.limits.max_homs {
            let mut found = None;
            let by_kernel = prop.uses_kernels();
            let mut table = vec![0u32; m.size()];
            space.for_each_rows(&self.opts.limits, |_, rows| {
                fill_image_table(m, n, rows, &mut table);
                let set = if by_kernel {
                    ElemSet::from_indices(m.size(), (0..m.size()).filter(|&x| table[x] == 0))
                } else {
                    ElemSet::from_indices(n.size(), table.iter().map(|&y| y as usize))
                };
                if bad_sets.contains(&set) {
                    found = Some((rows.to_vec(), set));
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })?;
            if let Some((rows, set)) = found {
                let owner = lat.module();
                return Ok(Witness::hom(
                    ModuleHom::from_rows(m, n, rows)?,
                    Submodule::from_set(owner, set),
                    note,
                ));
            }
        }
        let sub = lat.get(bad[0].sub).clone();
        if prop.uses_kernels() {
            let q = QuotientModule::new(m, &sub)?;
            if let Some(emb) = find_embedding(q.module(), n, &self.opts.limits)
                .ok()
                .flatten()
            {
                let rows = q
                    .projection()
                    .rows()
                    .iter()
                    .map(|&y| emb.apply(y))
                    .collect();
                let hom = ModuleHom::from_rows(m, n, rows)?;
                return Ok(Witness::hom(hom, sub, note));
            }
        }
        Ok(Witness::sub(sub, note))
    }

    /// Decides a property of a single module. Relative properties are read
    /// as self-properties (`M` relative to `M`).
    pub fn decide(&self, prop: Property, m: &FiniteModule) -> Result<bool> {
        Ok(self.unary(prop, m, false)?.holds)
    }

    pub fn explain(&self, prop: Property, m: &FiniteModule) -> Result<Verdict> {
        self.unary(prop, m, true)
    }

    fn unary(&self, prop: Property, m: &FiniteModule, explain: bool) -> Result<Verdict> {
        if prop.is_relative() {
            return self.relative(prop, m, m, explain);
        }
        let a = self.analysis(m);
        let lat = self.lattice(m)?;
        let fail = |sub: usize, note: &str| -> Verdict {
            if explain {
                Verdict::fail(Witness::sub(lat.get(sub).clone(), note))
            } else {
                Verdict {
                    holds: false,
                    witness: None,
                    certificates: Vec::new(),
                }
            }
        };
        let certify = |pairs: Vec<(usize, usize)>| -> Verdict {
            let mut v = Verdict::pass();
            if explain && self.opts.verbose {
                v.certificates = pairs
                    .into_iter()
                    .map(|(s, d)| Certificate {
                        submodule: lat.get(s).clone(),
                        summand: lat.get(d).clone(),
                    })
                    .collect();
            }
            v
        };
        match prop {
            Property::Extending | Property::Lifting => {
                let table = if prop == Property::Extending {
                    self.ess_summands(&a)?
                } else {
                    self.lying_above(&a)?
                };
                if let Some(bad) = (0..lat.len()).find(|&i| table[i].is_none()) {
                    let note = if prop == Property::Extending {
                        "submodule is essential in no direct summand"
                    } else {
                        "submodule lies above no direct summand"
                    };
                    return Ok(fail(bad, note));
                }
                Ok(certify(
                    (0..lat.len()).map(|i| (i, table[i].unwrap())).collect(),
                ))
            }
            Property::Sip | Property::Ssp | Property::SipExtending | Property::SspLifting => {
                let flags = self.summand_flags(&a)?;
                let summands: Vec<usize> = (0..lat.len()).filter(|&i| flags[i]).collect();
                let meet = matches!(prop, Property::Sip | Property::SipExtending);
                let ok: Box<dyn Fn(usize) -> Option<usize>> = match prop {
                    Property::Sip | Property::Ssp => Box::new(|s| flags[s].then_some(s)),
                    Property::SipExtending => {
                        let t = self.ess_summands(&a)?;
                        Box::new(move |s| t[s])
                    }
                    _ => {
                        let t = self.lying_above(&a)?;
                        Box::new(move |s| t[s])
                    }
                };
                let mut pairs = Vec::new();
                for (x, &i) in summands.iter().enumerate() {
                    for &j in &summands[x + 1..] {
                        let s = if meet { lat.meet(i, j) } else { lat.join(i, j) };
                        match ok(s) {
                            Some(d) => pairs.push((s, d)),
                            None => {
                                let what = if meet { "intersection" } else { "sum" };
                                let note = match prop {
                                    Property::Sip | Property::Ssp => format!(
                                        "{what} of summands {} and {} is not a direct summand",
                                        lat.get(i),
                                        lat.get(j)
                                    ),
                                    Property::SipExtending => format!(
                                        "{what} of summands {} and {} is essential in no direct summand",
                                        lat.get(i),
                                        lat.get(j)
                                    ),
                                    _ => format!(
                                        "{what} of summands {} and {} lies above no direct summand",
                                        lat.get(i),
                                        lat.get(j)
                                    ),
                                };
                                return Ok(fail(s, &note));
                            }
                        }
                    }
                }
                pairs.sort_unstable();
                pairs.dedup();
                Ok(certify(pairs))
            }
            _ => unreachable!(),
        }
    }

    /// `N` is `M`-CS-Rickart.
    pub fn is_cs_rickart(&self, n: &FiniteModule, m: &FiniteModule) -> Result<Verdict> {
        self.explain_relative(Property::CsRickart, m, n)
    }

    /// `N` is dual `M`-CS-Rickart.
    pub fn is_dual_cs_rickart(&self, n: &FiniteModule, m: &FiniteModule) -> Result<Verdict> {
        self.explain_relative(Property::DualCsRickart, m, n)
    }

    /// `N` is `M`-Rickart.
    pub fn is_rickart(&self, n: &FiniteModule, m: &FiniteModule) -> Result<Verdict> {
        self.explain_relative(Property::Rickart, m, n)
    }

    /// `N` is dual `M`-Rickart.
    pub fn is_dual_rickart(&self, n: &FiniteModule, m: &FiniteModule) -> Result<Verdict> {
        self.explain_relative(Property::DualRickart, m, n)
    }

    /// `N` is `M`-K-nonsingular.
    pub fn is_k_nonsingular(&self, n: &FiniteModule, m: &FiniteModule) -> Result<Verdict> {
        self.explain_relative(Property::KNonsingular, m, n)
    }

    /// `M` is `N`-T-nonsingular.
    pub fn is_t_nonsingular(&self, m: &FiniteModule, n: &FiniteModule) -> Result<Verdict> {
        self.explain_relative(Property::TNonsingular, m, n)
    }

    pub fn is_extending(&self, m: &FiniteModule) -> Result<Verdict> {
        self.explain(Property::Extending, m)
    }

    pub fn is_lifting(&self, m: &FiniteModule) -> Result<Verdict> {
        self.explain(Property::Lifting, m)
    }

    pub fn has_sip_extending(&self, m: &FiniteModule) -> Result<Verdict> {
        self.explain(Property::SipExtending, m)
    }

    pub fn has_ssp_lifting(&self, m: &FiniteModule) -> Result<Verdict> {
        self.explain(Property::SspLifting, m)
    }

    pub fn has_sip(&self, m: &FiniteModule) -> Result<Verdict> {
        self.explain(Property::Sip, m)
    }

    pub fn has_ssp(&self, m: &FiniteModule) -> Result<Verdict> {
        self.explain(Property::Ssp, m)
    }

    /// The direct summands of `M`, ordered by size then element list.
    pub fn summands(&self, m: &FiniteModule) -> Result<Vec<Submodule>> {
        let a = self.analysis(m);
        let lat = self.lattice(m)?;
        let flags = self.summand_flags(&a)?;
        Ok((0..lat.len())
            .filter(|&i| flags[i])
            .map(|i| lat.get(i).clone())
            .collect())
    }

    /// Invariant factors of the direct summands of `M`, one entry per
    /// isomorphism type, sorted. Over Z or Z_n only.
    pub fn summand_types(&self, m: &FiniteModule) -> Result<Vec<Vec<u64>>> {
        if !m.ring().is_abelian_group_ring() {
            return Err(Error::NotAbelianRing);
        }
        let a = self.analysis(m);
        let lat = self.lattice(m)?;
        let flags = self.summand_flags(&a)?;
        let types = self.sub_types(&a)?;
        let mut out: Vec<Vec<u64>> = (0..lat.len())
            .filter(|&i| flags[i])
            .map(|i| types[i].clone())
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Evaluates every property of `M` with witnesses.
    pub fn property_report(&self, m: &FiniteModule) -> Result<PropertyReport> {
        let mut verdicts = BTreeMap::new();
        for p in Property::ALL {
            verdicts.insert(p, self.explain(p, m)?);
        }
        let report = PropertyReport {
            module: ModuleDescription::of(m),
            verdicts,
        };
        report.check_consistency()?;
        Ok(report)
    }
}

/// `p^j x` tables for every prime power dividing the exponent of `M`.
fn multiplication_tables(m: &FiniteModule) -> HashMap<(u64, u32), Vec<u32>> {
    let mut out = HashMap::new();
    for (p, e) in factorize(m.size() as u64) {
        for j in 1..=e {
            let q = p.pow(j);
            out.insert(
                (p, j),
                (0..m.size()).map(|x| m.scale(x, q) as u32).collect(),
            );
        }
    }
    out
}

/// Invariant factors of a finite abelian group of the given order, from
/// the sizes `|G[p^j]|` of its `p^j`-torsion.
fn type_from_torsion(order: u64, torsion: impl Fn(u64, u32) -> u64) -> Vec<u64> {
    let mut parts = Vec::new();
    for (p, e) in factorize(order) {
        let full = p.pow(e);
        // parts >= j = log_p(|G[p^j]| / |G[p^(j-1)]|)
        let mut at_least = Vec::new();
        let mut prev = 1u64;
        let mut j = 1;
        loop {
            let c = torsion(p, j);
            let mut ratio = c / prev;
            let mut k = 0;
            while ratio > 1 {
                ratio /= p;
                k += 1;
            }
            at_least.push(k);
            prev = c;
            if c == full || k == 0 {
                break;
            }
            j += 1;
        }
        let first = at_least[0];
        let exps: Vec<u32> = (0..first)
            .map(|i| at_least.iter().filter(|&&c| c > i).count() as u32)
            .collect();
        parts.push((p, exps));
    }
    invariant_factors_from_partitions(&parts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleDescription {
    pub ring: String,
    pub orders: Vec<u64>,
    pub canonical_form: Option<Vec<u64>>,
}

impl ModuleDescription {
    pub fn of(m: &FiniteModule) -> Self {
        ModuleDescription {
            ring: m.ring().to_string(),
            orders: m.orders().to_vec(),
            canonical_form: m.canonical_form().ok(),
        }
    }
}

/// All properties of one module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub module: ModuleDescription,
    pub verdicts: BTreeMap<Property, Verdict>,
}

impl PropertyReport {
    pub fn get(&self, p: Property) -> bool {
        self.verdicts[&p].holds
    }

    pub fn witness(&self, p: Property) -> Option<&Witness> {
        self.verdicts[&p].witness.as_ref()
    }

    /// Name → value, in [`Property::ALL`] order, followed by the
    /// `ssip-extending` and `sssp-lifting` aliases.
    pub fn values(&self) -> Vec<(&'static str, bool)> {
        let mut v: Vec<(&'static str, bool)> = Property::ALL
            .iter()
            .map(|&p| (p.name(), self.get(p)))
            .collect();
        v.push(("ssip-extending", self.get(Property::SipExtending)));
        v.push(("sssp-lifting", self.get(Property::SspLifting)));
        v
    }

    /// Checks the implications every module must satisfy.
    pub fn check_consistency(&self) -> Result<()> {
        use Property::*;
        let rules = [
            (Rickart, CsRickart),
            (DualRickart, DualCsRickart),
            (Extending, CsRickart),
            (Lifting, DualCsRickart),
            (CsRickart, SipExtending),
            (DualCsRickart, SspLifting),
            (Sip, SipExtending),
            (Ssp, SspLifting),
        ];
        for (a, b) in rules {
            if self.get(a) && !self.get(b) {
                return Err(Error::Inconsistent(format!("{a} holds but {b} fails")));
            }
        }
        if (self.get(CsRickart) && self.get(KNonsingular)) != self.get(Rickart) {
            return Err(Error::Inconsistent(
                "cs-rickart and k-nonsingular versus rickart".into(),
            ));
        }
        if (self.get(DualCsRickart) && self.get(TNonsingular)) != self.get(DualRickart) {
            return Err(Error::Inconsistent(
                "dual-cs-rickart and t-nonsingular versus dual-rickart".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::enumerate_homs;

    fn z(orders: &[i64]) -> FiniteModule {
        FiniteModule::abelian_group(orders).unwrap()
    }

    fn engines() -> Vec<Engine> {
        [HomRoute::Enumerate, HomRoute::Classify]
            .into_iter()
            .map(|route| {
                Engine::new(EngineOptions {
                    route,
                    ..Default::default()
                })
            })
            .collect()
    }

    #[test]
    fn z4_report() {
        for e in engines() {
            let r = e.property_report(&z(&[4])).unwrap();
            assert!(r.get(Property::CsRickart));
            assert!(r.get(Property::DualCsRickart));
            assert!(!r.get(Property::Rickart));
            assert!(!r.get(Property::DualRickart));
            assert!(r.get(Property::Extending));
            assert!(r.get(Property::Lifting));
            let w = r.witness(Property::Rickart).unwrap();
            assert_eq!(w.hom.as_ref().unwrap().matrix(), vec![vec![2]]);
            assert_eq!(w.submodule.as_ref().unwrap().elements(), &[0, 2]);
            let w = r.witness(Property::DualRickart).unwrap();
            assert_eq!(w.hom.as_ref().unwrap().matrix(), vec![vec![2]]);
        }
    }

    #[test]
    fn zero_module_has_everything() {
        let e = Engine::default();
        let r = e.property_report(&z(&[])).unwrap();
        assert!(r.values().iter().all(|&(_, v)| v));
    }

    #[test]
    fn z2_z16() {
        for e in engines() {
            let m = z(&[2, 16]);
            let r = e.property_report(&m).unwrap();
            assert!(r.get(Property::SipExtending));
            assert!(!r.get(Property::Sip));
            assert!(!r.get(Property::CsRickart));
            assert!(!r.get(Property::DualCsRickart));
            assert!(!r.get(Property::Extending));
            let sip = r.witness(Property::Sip).unwrap().submodule.clone().unwrap();
            assert_eq!(sip.len(), 8);
            let w = r.witness(Property::CsRickart).unwrap();
            let k = w.submodule.as_ref().unwrap();
            assert_eq!(k.len(), 4);
            assert_eq!(&w.hom.as_ref().unwrap().kernel(), k);
        }
    }

    #[test]
    fn relative_examples() {
        for e in engines() {
            let (z2, z3, z4, z16) = (z(&[2]), z(&[3]), z(&[4]), z(&[16]));
            assert!(e.is_cs_rickart(&z16, &z2).unwrap().holds);
            assert!(e.is_rickart(&z3, &z2).unwrap().holds);
            assert!(e.is_dual_rickart(&z3, &z2).unwrap().holds);
            assert!(e.is_k_nonsingular(&z3, &z2).unwrap().holds);
            assert!(!e.is_k_nonsingular(&z4, &z4).unwrap().holds);
            assert!(e.is_k_nonsingular(&z4, &z(&[])).unwrap().holds);
            assert!(e.is_dual_cs_rickart(&z2, &z2).unwrap().holds);
        }
    }

    #[test]
    fn routes_agree_on_small_pairs() {
        let [en, cl] = <[Engine; 2]>::try_from(engines()).unwrap();
        let groups: Vec<FiniteModule> = [
            &[2][..],
            &[4],
            &[2, 2],
            &[8],
            &[2, 4],
            &[3],
            &[6],
            &[2, 2, 2],
        ]
        .iter()
        .map(|o| z(o))
        .collect();
        for m in &groups {
            for n in &groups {
                for p in Property::ALL.into_iter().filter(|p| p.is_relative()) {
                    assert_eq!(
                        en.decide_relative(p, m, n).unwrap(),
                        cl.decide_relative(p, m, n).unwrap(),
                        "{p} on ({m}, {n})"
                    );
                }
            }
        }
    }

    #[test]
    fn torsion_types() {
        // the kernel/image sets produced by both routes agree exactly
        let m = z(&[2, 8]);
        let n = z(&[4, 4]);
        let e = Engine::default();
        let lm = e.lattice(&m).unwrap();
        let kernels: HashSet<usize> = e.kernels(&m, &n).unwrap().iter().map(|x| x.sub).collect();
        let direct: HashSet<usize> = enumerate_homs(&m, &n, e.limits())
            .unwrap()
            .iter()
            .map(|f| lm.id_of(&f.kernel()).unwrap())
            .collect();
        assert_eq!(kernels, direct);
        let ln = e.lattice(&n).unwrap();
        let images: HashSet<usize> = e.images(&m, &n).unwrap().iter().map(|x| x.sub).collect();
        let direct: HashSet<usize> = enumerate_homs(&m, &n, e.limits())
            .unwrap()
            .iter()
            .map(|f| ln.id_of(&f.image()).unwrap())
            .collect();
        assert_eq!(images, direct);
    }

    #[test]
    fn names_round_trip() {
        for p in Property::ALL {
            assert_eq!(Property::from_name(p.name()), Some(p));
        }
        assert_eq!(
            Property::from_name("ssip-extending"),
            Some(Property::SipExtending)
        );
        assert_eq!(Property::from_name("baer"), None);
    }
}
