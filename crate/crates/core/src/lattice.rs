//! Submodule lattices of finite modules: enumeration, meets and joins,
//! quotients, socle and radical, direct summands, and the essential /
//! superfluous / lies-above relations.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::arith::{factorize, smith_normal_form};
use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::hom::ModuleHom;
use crate::limits::Limits;
use crate::module::{FiniteModule, ModuleSpec};
use crate::ring::{FiniteRing, RingTag};

/// A submodule, identified by its element set.
#[derive(Clone)]
pub struct Submodule {
    owner: FiniteModule,
    set: ElemSet,
    elements: Vec<u32>,
    generators: OnceLock<Vec<usize>>,
}

impl Submodule {
    /// Wraps an element set that is already known to be a submodule.
    pub fn from_set(owner: &FiniteModule, set: ElemSet) -> Self {
        let elements = set.iter().map(|x| x as u32).collect();
        Submodule {
            owner: owner.clone(),
            set,
            elements,
            generators: OnceLock::new(),
        }
    }

    /// Smallest submodule containing the given elements.
    pub fn span(owner: &FiniteModule, gens: &[usize]) -> Self {
        let mut set = ElemSet::from_indices(owner.size(), [0]);
        for &g in gens {
            if !set.contains(g) {
                set = join_cyclic(owner, &set, &owner.cyclic_span(g));
            }
        }
        Self::from_set(owner, set)
    }

    /// Checks closure under addition and the ring action.
    pub fn try_from_elements(owner: &FiniteModule, elements: &[usize]) -> Result<Self> {
        let set = ElemSet::from_indices(owner.size(), elements.iter().copied());
        if !set.contains(0) {
            return Err(Error::NotContained("a submodule must contain 0".into()));
        }
        for x in set.iter() {
            for y in set.iter() {
                if !set.contains(owner.add(x, y)) {
                    return Err(Error::NotContained(
                        "set is not closed under addition".into(),
                    ));
                }
            }
            if owner.ring().tag() == RingTag::Custom {
                for i in 0..owner.ring().generator_count() {
                    if !set.contains(owner.act_generator(x, i)) {
                        return Err(Error::NotContained(
                            "set is not closed under the ring action".into(),
                        ));
                    }
                }
            }
        }
        Ok(Self::from_set(owner, set))
    }

    pub fn zero(owner: &FiniteModule) -> Self {
        Self::from_set(owner, ElemSet::from_indices(owner.size(), [0]))
    }

    pub fn whole(owner: &FiniteModule) -> Self {
        Self::from_set(owner, ElemSet::full(owner.size()))
    }

    pub fn owner(&self) -> &FiniteModule {
        &self.owner
    }

    pub fn set(&self) -> &ElemSet {
        &self.set
    }

    /// Sorted element indices.
    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_zero(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.owner.size()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.set.contains(x)
    }

    pub fn is_subset(&self, other: &Submodule) -> bool {
        self.set.is_subset(&other.set)
    }

    /// A short generating list: greedily picks elements of largest additive
    /// order, lowest index first.
    pub fn generators(&self) -> &[usize] {
        self.generators.get_or_init(|| {
            let m = &self.owner;
            let mut order: Vec<usize> = self.set.iter().filter(|&x| x != 0).collect();
            order.sort_by_key(|&x| (std::cmp::Reverse(m.element_order(x)), x));
            let mut span = ElemSet::from_indices(m.size(), [0]);
            let mut gens = Vec::new();
            for x in order {
                if span.len() == self.elements.len() {
                    break;
                }
                if !span.contains(x) {
                    span = join_cyclic(m, &span, &m.cyclic_span(x));
                    gens.push(x);
                }
            }
            gens
        })
    }

    pub fn generator_coeffs(&self) -> Vec<Vec<u64>> {
        self.generators()
            .iter()
            .map(|&g| self.owner.coeffs(g))
            .collect()
    }

    fn check_owner(&self, other: &Submodule) -> Result<()> {
        if self.owner == other.owner {
            Ok(())
        } else {
            Err(Error::OwnerMismatch)
        }
    }

    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        self.check_owner(other)?;
        Ok(Submodule::from_set(
            &self.owner,
            self.set.intersection(&other.set),
        ))
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.check_owner(other)?;
        Ok(Submodule::from_set(
            &self.owner,
            join_sets(&self.owner, &self.set, &other.set),
        ))
    }
}

impl PartialEq for Submodule {
    fn eq(&self, other: &Self) -> bool {
        self.set == other.set && self.owner == other.owner
    }
}

impl Eq for Submodule {}

impl PartialOrd for Submodule {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Size first, then lexicographic element list.
impl Ord for Submodule {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

impl fmt::Debug for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .generator_coeffs()
            .iter()
            .map(|c| {
                format!(
                    "({})",
                    c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
                )
            })
            .collect();
        if gens.is_empty() {
            write!(f, "<0> (size 1)")
        } else {
            write!(f, "<{}> (size {})", gens.join(", "), self.len())
        }
    }
}

/// `S + C` for a submodule `S` and the element list of a submodule `C`.
fn join_cyclic(m: &FiniteModule, s: &ElemSet, c: &[usize]) -> ElemSet {
    let base: Vec<usize> = s.iter().collect();
    let mut out = s.clone();
    let n = m.size();
    let add = m.add_table();
    for &y in c {
        if out.contains(y) {
            continue;
        }
        for &x in &base {
            out.insert(add[x * n + y] as usize);
        }
    }
    out
}

pub(crate) fn join_sets(m: &FiniteModule, a: &ElemSet, b: &ElemSet) -> ElemSet {
    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let c: Vec<usize> = small.iter().collect();
    join_cyclic(m, big, &c)
}

/// The full submodule lattice of a module with cached derived relations.
pub struct Lattice {
    module: FiniteModule,
    subs: Vec<Submodule>,
    index: HashMap<ElemSet, usize>,
    socle: usize,
    radical: usize,
    minimal: Vec<usize>,
    maximal: Vec<usize>,
    complement: Vec<Option<usize>>,
    summands: Vec<usize>,
    essential_summand: OnceLock<Vec<Option<usize>>>,
    lies_above: OnceLock<Vec<Option<usize>>>,
}

impl Lattice {
    pub fn new(module: &FiniteModule) -> Result<Self> {
        Self::with_limits(module, &Limits::default())
    }

    /// Enumerates all submodules by breadth-first closure: starting from
    /// the zero submodule, every known submodule is joined with every
    /// cyclic submodule until no new element set appears.
    pub fn with_limits(module: &FiniteModule, limits: &Limits) -> Result<Self> {
        let n = module.size();
        let mut cyclics: Vec<Vec<usize>> = Vec::new();
        let mut cyclic_sets: Vec<ElemSet> = Vec::new();
        let mut seen_cyclic: HashMap<ElemSet, ()> = HashMap::new();
        for x in 1..n {
            let span = module.cyclic_span(x);
            let set = ElemSet::from_indices(n, span.iter().copied());
            if seen_cyclic.insert(set.clone(), ()).is_none() {
                cyclics.push(span);
                cyclic_sets.push(set);
            }
        }
        let full = ElemSet::full(n);
        let zero = ElemSet::from_indices(n, [0]);
        let mut sets = vec![zero.clone()];
        // a proper submodule is maximal iff joining any element outside it gives M
        let mut is_maximal = Vec::new();
        let mut index: HashMap<ElemSet, usize> = HashMap::new();
        index.insert(zero, 0);
        let mut head = 0;
        while head < sets.len() {
            let s = sets[head].clone();
            head += 1;
            let mut maximal = s != full;
            for (c, cs) in cyclics.iter().zip(&cyclic_sets) {
                if cs.is_subset(&s) {
                    continue;
                }
                let t = join_cyclic(module, &s, c);
                if t != full {
                    maximal = false;
                }
                if !index.contains_key(&t) {
                    index.insert(t.clone(), sets.len());
                    sets.push(t);
                    Limits::check(
                        "submodule lattice",
                        sets.len() as u128,
                        limits.max_submodules as u128,
                    )?;
                }
            }
            is_maximal.push(maximal);
        }
        let maximal_sets: Vec<ElemSet> = sets
            .iter()
            .zip(&is_maximal)
            .filter(|(_, &m)| m)
            .map(|(s, _)| s.clone())
            .collect();
        let mut subs: Vec<Submodule> = sets
            .into_iter()
            .map(|s| Submodule::from_set(module, s))
            .collect();
        subs.sort();
        let index: HashMap<ElemSet, usize> = subs
            .iter()
            .enumerate()
            .map(|(i, s)| (s.set.clone(), i))
            .collect();

        let count = subs.len();
        let mut maximal: Vec<usize> = maximal_sets.iter().map(|s| index[s]).collect();
        maximal.sort_unstable();
        // simple submodules are cyclic, generated by any nonzero element
        let mut minimal: Vec<usize> = cyclic_sets
            .iter()
            .filter(|c| {
                !cyclic_sets
                    .iter()
                    .any(|d| d.len() < c.len() && d.is_subset(c))
            })
            .map(|c| index[c])
            .collect();
        minimal.sort_unstable();
        let mut soc = ElemSet::from_indices(n, [0]);
        for &i in &minimal {
            soc = join_sets(module, &soc, &subs[i].set);
        }
        let mut rad = ElemSet::full(n);
        for &i in &maximal {
            rad = rad.intersection(&subs[i].set);
        }
        let socle = index[&soc];
        let radical = index[&rad];

        let mut by_size: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, sub) in subs.iter().enumerate() {
            by_size.entry(sub.len()).or_default().push(i);
        }
        let complement: Vec<Option<usize>> = (0..count)
            .map(|i| {
                by_size.get(&(n / subs[i].len())).and_then(|b| {
                    b.iter()
                        .copied()
                        .find(|&j| subs[i].set.meet_len(&subs[j].set) == 1)
                })
            })
            .collect();
        let summands = (0..count).filter(|&i| complement[i].is_some()).collect();
        Ok(Lattice {
            module: module.clone(),
            subs,
            index,
            socle,
            radical,
            minimal,
            maximal,
            complement,
            summands,
            essential_summand: OnceLock::new(),
            lies_above: OnceLock::new(),
        })
    }

    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    /// All submodules, ordered by size then element list.
    pub fn submodules(&self) -> &[Submodule] {
        &self.subs
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, id: usize) -> &Submodule {
        &self.subs[id]
    }

    pub fn id_of_set(&self, set: &ElemSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn id_of_words(&self, words: &[u64]) -> Option<usize> {
        self.index.get(&ElemSet::from_words(words)).copied()
    }

    pub fn id_of(&self, sub: &Submodule) -> Result<usize> {
        if sub.owner != self.module {
            return Err(Error::OwnerMismatch);
        }
        Ok(self.index[&sub.set])
    }

    pub fn zero_id(&self) -> usize {
        0
    }

    pub fn whole_id(&self) -> usize {
        self.subs.len() - 1
    }

    pub fn socle(&self) -> &Submodule {
        &self.subs[self.socle]
    }

    pub fn radical(&self) -> &Submodule {
        &self.subs[self.radical]
    }

    pub fn minimal(&self) -> &[usize] {
        &self.minimal
    }

    pub fn maximal(&self) -> &[usize] {
        &self.maximal
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.index[&self.subs[a].set.intersection(&self.subs[b].set)]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.index[&join_sets(&self.module, &self.subs[a].set, &self.subs[b].set)]
    }

    /// Ids of the direct summands, in lattice order.
    pub fn summand_ids(&self) -> &[usize] {
        &self.summands
    }

    pub fn direct_summands(&self) -> Vec<Submodule> {
        self.summands
            .iter()
            .map(|&i| self.subs[i].clone())
            .collect()
    }

    pub fn is_summand_id(&self, id: usize) -> bool {
        self.complement[id].is_some()
    }

    pub fn complement_of(&self, id: usize) -> Option<usize> {
        self.complement[id]
    }

    pub fn is_direct_summand(&self, k: &Submodule) -> Result<bool> {
        Ok(self.is_summand_id(self.id_of(k)?))
    }

    fn check_contained(&self, k: &Submodule, d: &Submodule) -> Result<()> {
        if k.owner != self.module || d.owner != self.module {
            return Err(Error::OwnerMismatch);
        }
        if !k.is_subset(d) {
            return Err(Error::NotContained(format!("{k} is not inside {d}")));
        }
        Ok(())
    }

    /// `K` essential in `D`: every nonzero submodule of `D` meets `K`.
    /// Uses `soc(D) = soc(M) ∩ D ⊆ K`.
    pub fn is_essential(&self, k: &Submodule, d: &Submodule) -> Result<bool> {
        self.check_contained(k, d)?;
        Ok(self.socle().set.intersection(&d.set).is_subset(&k.set))
    }

    /// Direct check over all nonzero submodules of `D`.
    pub fn is_essential_bruteforce(&self, k: &Submodule, d: &Submodule) -> Result<bool> {
        self.check_contained(k, d)?;
        Ok(self
            .subs
            .iter()
            .filter(|x| !x.is_zero() && x.is_subset(d))
            .all(|x| k.set.meet_len(&x.set) > 1))
    }

    /// Check over cyclic submodules `xR`, `x` a nonzero element of `D`.
    pub fn is_essential_cyclic(&self, k: &Submodule, d: &Submodule) -> Result<bool> {
        self.check_contained(k, d)?;
        Ok(d.set.iter().filter(|&x| x != 0).all(|x| {
            self.module
                .cyclic_span(x)
                .iter()
                .any(|&y| y != 0 && k.contains(y))
        }))
    }

    /// Radical of a submodule `D`, the meet of its maximal submodules.
    pub fn radical_of(&self, d: &Submodule) -> Result<Submodule> {
        let did = self.id_of(d)?;
        if did == self.whole_id() {
            return Ok(self.radical().clone());
        }
        let inside: Vec<usize> = (0..self.len())
            .filter(|&i| i != did && self.subs[i].is_subset(d))
            .collect();
        let mut rad = d.set.clone();
        for &i in &inside {
            let covered = inside.iter().any(|&j| {
                j != i
                    && self.subs[j].len() > self.subs[i].len()
                    && self.subs[i].is_subset(&self.subs[j])
            });
            if !covered {
                rad = rad.intersection(&self.subs[i].set);
            }
        }
        Ok(Submodule::from_set(&self.module, rad))
    }

    /// `K` superfluous in `D`: `K + X = D` forces `X = D`. Uses `K ⊆ rad(D)`.
    pub fn is_superfluous(&self, k: &Submodule, d: &Submodule) -> Result<bool> {
        self.check_contained(k, d)?;
        Ok(k.is_subset(&self.radical_of(d)?))
    }

    pub fn is_superfluous_bruteforce(&self, k: &Submodule, d: &Submodule) -> Result<bool> {
        self.check_contained(k, d)?;
        Ok(self
            .subs
            .iter()
            .filter(|x| x.is_subset(d) && x.len() < d.len())
            .all(|x| join_sets(&self.module, &k.set, &x.set) != d.set))
    }

    /// For each submodule, the smallest summand it is essential in, if any.
    ///
    /// `K` is essential in `D ⊇ K` iff `soc(D) ⊆ K`, and `soc(D) = soc(M) ∩ D`,
    /// so the candidates are the summands whose socle equals `soc(M) ∩ K`.
    pub fn essential_summands(&self) -> &[Option<usize>] {
        self.essential_summand.get_or_init(|| {
            let soc = &self.socle().set;
            let mut by_socle: HashMap<ElemSet, Vec<usize>> = HashMap::new();
            for &d in &self.summands {
                by_socle
                    .entry(self.subs[d].set.intersection(soc))
                    .or_default()
                    .push(d);
            }
            self.subs
                .iter()
                .map(|k| {
                    by_socle.get(&k.set.intersection(soc)).and_then(|ds| {
                        ds.iter()
                            .copied()
                            .find(|&d| k.set.is_subset(&self.subs[d].set))
                    })
                })
                .collect()
        })
    }

    /// Smallest summand containing submodule `id` essentially.
    pub fn essential_in_summand(&self, id: usize) -> Option<usize> {
        self.essential_summands()[id]
    }

    /// For each submodule `L`, a summand `K ⊆ L` with `L/K` superfluous in
    /// `M/K` (largest such summand first), if any.
    ///
    /// For a summand `M = K ⊕ C` the radical of `M/K ≅ C` is the image of
    /// `rad(M)`, so `L` lies above `K` iff `K ⊆ L ⊆ K + rad(M)`, that is iff
    /// `K ⊆ L` and `K + rad(M) = L + rad(M)`.
    pub fn lying_above(&self) -> &[Option<usize>] {
        self.lies_above.get_or_init(|| {
            let rad = &self.radical().set;
            let mut by_size: Vec<usize> = self.summands.clone();
            by_size.sort_by(|&a, &b| self.subs[b].cmp(&self.subs[a]));
            let mut by_cover: HashMap<ElemSet, Vec<usize>> = HashMap::new();
            for &k in &by_size {
                by_cover
                    .entry(join_sets(&self.module, &self.subs[k].set, rad))
                    .or_default()
                    .push(k);
            }
            self.subs
                .iter()
                .map(|l| {
                    by_cover
                        .get(&join_sets(&self.module, &l.set, rad))
                        .and_then(|ks| {
                            ks.iter()
                                .copied()
                                .find(|&k| self.subs[k].set.is_subset(&l.set))
                        })
                })
                .collect()
        })
    }

    pub fn lies_above_summand(&self, l: &Submodule) -> Result<Option<Submodule>> {
        let id = self.id_of(l)?;
        Ok(self.lying_above()[id].map(|k| self.subs[k].clone()))
    }

    /// Same relation decided from the definition, by building each quotient
    /// `M/K` and testing superfluity there by brute force.
    pub fn lies_above_summand_bruteforce(
        &self,
        l: &Submodule,
        limits: &Limits,
    ) -> Result<Option<Submodule>> {
        let lid = self.id_of(l)?;
        let mut cands: Vec<usize> = self
            .summands
            .iter()
            .copied()
            .filter(|&k| self.subs[k].is_subset(&self.subs[lid]))
            .collect();
        cands.sort_by(|&a, &b| self.subs[b].cmp(&self.subs[a]));
        for k in cands {
            let q = QuotientModule::new(&self.module, &self.subs[k])?;
            let ql = Lattice::with_limits(q.module(), limits)?;
            let image = q.project_submodule(l)?;
            if ql.is_superfluous_bruteforce(&image, &Submodule::whole(q.module()))? {
                return Ok(Some(self.subs[k].clone()));
            }
        }
        Ok(None)
    }

    /// Summands decided from the definition: some `C` with `K ∩ C = 0` and
    /// `K + C = M`, using the actual join.
    pub fn is_direct_summand_bruteforce(&self, k: &Submodule) -> bool {
        self.subs.iter().any(|c| {
            k.set.meet_len(&c.set) == 1
                && join_sets(&self.module, &k.set, &c.set).len() == self.module.size()
        })
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("module", &self.module)
            .field("submodules", &self.subs.len())
            .finish()
    }
}

pub fn submodules(m: &FiniteModule) -> Result<Vec<Submodule>> {
    Ok(Lattice::new(m)?.subs)
}

pub fn socle(m: &FiniteModule) -> Result<Submodule> {
    Ok(Lattice::new(m)?.socle().clone())
}

pub fn radical(m: &FiniteModule) -> Result<Submodule> {
    Ok(Lattice::new(m)?.radical().clone())
}

pub fn direct_summands(m: &FiniteModule) -> Result<Vec<Submodule>> {
    Ok(Lattice::new(m)?.direct_summands())
}

pub fn is_direct_summand(k: &Submodule) -> Result<bool> {
    Lattice::new(k.owner())?.is_direct_summand(k)
}

pub fn lies_above_summand(l: &Submodule) -> Result<Option<Submodule>> {
    Lattice::new(l.owner())?.lies_above_summand(l)
}

/// `M/K` with its canonical projection. The quotient is presented by the
/// Smith normal form of the relations of `M` together with generators of
/// `K`, so its generators are cyclic of the invariant-factor orders.
#[derive(Clone)]
pub struct QuotientModule {
    module: FiniteModule,
    projection: ModuleHom,
    kernel: Submodule,
    representatives: Vec<usize>,
    map: Vec<u32>,
}

impl QuotientModule {
    pub fn new(m: &FiniteModule, k: &Submodule) -> Result<Self> {
        if k.owner() != m {
            return Err(Error::OwnerMismatch);
        }
        let t = m.generator_count();
        let mut rows: Vec<Vec<i64>> = (0..t)
            .map(|j| {
                (0..t)
                    .map(|c| if c == j { m.orders()[j] as i64 } else { 0 })
                    .collect()
            })
            .collect();
        for &g in k.generators() {
            rows.push(m.coeffs(g).iter().map(|&c| c as i64).collect());
        }
        let snf = smith_normal_form(&rows, t);
        let keep: Vec<usize> = (0..t)
            .filter(|&i| snf.diagonal.get(i).copied().unwrap_or(0) != 1)
            .collect();
        let mut orders: Vec<i64> = keep.iter().map(|&i| snf.diagonal[i]).collect();
        debug_assert!(orders.iter().all(|&o| o > 1));
        // A zero quotient keeps one generator of order 1.
        let trivial = keep.is_empty();
        if trivial {
            orders.push(1);
        }

        let project_coeffs = |coeffs: &[u64]| -> Vec<i64> {
            if trivial {
                return vec![0];
            }
            keep.iter()
                .zip(&orders)
                .map(|(&i, &o)| {
                    let v: i64 = coeffs
                        .iter()
                        .enumerate()
                        .map(|(r, &c)| c as i64 * snf.v[r][i])
                        .sum();
                    v.rem_euclid(o)
                })
                .collect()
        };
        let new_gens: Vec<usize> = if trivial {
            vec![0]
        } else {
            keep.iter().map(|&i| m.encode(&snf.v_inv[i])).collect()
        };
        let action = match m.ring().tag() {
            RingTag::Custom => Some(
                (0..m.ring().generator_count())
                    .map(|r| {
                        new_gens
                            .iter()
                            .map(|&g| {
                                project_coeffs(&m.coeffs(m.act_generator(g, r)))
                                    .into_iter()
                                    .map(|c| c as u64)
                                    .collect()
                            })
                            .collect()
                    })
                    .collect(),
            ),
            _ => None,
        };
        let q = FiniteModule::new(
            m.ring(),
            ModuleSpec {
                orders: orders.clone(),
                action,
            },
        )?;
        let mut map = vec![0u32; m.size()];
        let mut representatives = vec![usize::MAX; q.size()];
        for x in 0..m.size() {
            let y = q.encode(&project_coeffs(&m.coeffs(x)));
            map[x] = y as u32;
            if representatives[y] == usize::MAX {
                representatives[y] = x;
            }
        }
        let proj_rows: Vec<usize> = (0..t).map(|j| map[m.generator(j)] as usize).collect();
        let projection = ModuleHom::from_rows_unchecked(m, &q, proj_rows);
        Ok(QuotientModule {
            module: q,
            projection,
            kernel: k.clone(),
            representatives,
            map,
        })
    }

    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    pub fn projection(&self) -> &ModuleHom {
        &self.projection
    }

    pub fn kernel(&self) -> &Submodule {
        &self.kernel
    }

    /// Smallest element index of each coset, indexed by quotient element.
    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn project(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    /// Image `L/K` of a submodule `L ⊇ K`.
    pub fn project_submodule(&self, l: &Submodule) -> Result<Submodule> {
        if !self.kernel.is_subset(l) {
            return Err(Error::NotContained(format!(
                "{} is not inside {l}",
                self.kernel
            )));
        }
        let set = ElemSet::from_indices(self.module.size(), l.set.iter().map(|x| self.project(x)));
        Ok(Submodule::from_set(&self.module, set))
    }
}

pub fn quotient(m: &FiniteModule, k: &Submodule) -> Result<QuotientModule> {
    QuotientModule::new(m, k)
}

/// Jacobson radical of a finite ring, as the radical of its regular module.
pub fn jacobson_radical(ring: &FiniteRing) -> Result<Submodule> {
    radical(&FiniteModule::regular(ring)?)
}

/// Whether `J(R)^2 = 0`, computed from the products of radical elements.
pub fn radical_squares_to_zero(ring: &FiniteRing) -> Result<bool> {
    let j = jacobson_radical(ring)?;
    Ok(j.elements().iter().all(|&a| {
        j.elements()
            .iter()
            .all(|&b| ring.mul(a as usize, b as usize) == 0)
    }))
}

/// Whether `J(Z_n)^2 = 0` by arithmetic: every prime exponent of `n` is at most 2.
pub fn zn_radical_squares_to_zero(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e <= 2)
}
