//! Module homomorphisms and lexicographic enumeration of hom sets.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::ControlFlow;

use crate::arith::invariant_factors_embed;
use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::lattice::{QuotientModule, Submodule};
use crate::limits::Limits;
use crate::module::{FiniteModule, ModuleSpec};
use crate::ring::RingTag;

/// A homomorphism, stored as the images of the source generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModuleHom {
    source: FiniteModule,
    target: FiniteModule,
    rows: Vec<usize>,
}

impl ModuleHom {
    /// Builds a map from a matrix whose row `j` is the coefficient vector of
    /// the image of the `j`-th source generator. Checks well-definedness and
    /// linearity.
    pub fn new(source: &FiniteModule, target: &FiniteModule, matrix: &[Vec<i64>]) -> Result<Self> {
        if matrix.len() != source.generator_count() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} rows, got {}",
                source.generator_count(),
                matrix.len()
            )));
        }
        if let Some(r) = matrix.iter().find(|r| r.len() != target.generator_count()) {
            return Err(Error::ShapeMismatch(format!(
                "expected rows of length {}, got {}",
                target.generator_count(),
                r.len()
            )));
        }
        let rows = matrix.iter().map(|r| target.encode(r)).collect();
        Self::from_rows(source, target, rows)
    }

    /// Same as [`ModuleHom::new`] with generator images given by index.
    pub fn from_rows(
        source: &FiniteModule,
        target: &FiniteModule,
        rows: Vec<usize>,
    ) -> Result<Self> {
        source.same_ring(target)?;
        if rows.len() != source.generator_count() || rows.iter().any(|&y| y >= target.size()) {
            return Err(Error::ShapeMismatch("bad generator images".into()));
        }
        for (j, &y) in rows.iter().enumerate() {
            let o = source.orders()[j];
            if target.scale(y, o) != 0 {
                return Err(Error::AxiomViolation {
                    axiom: "well-defined".into(),
                    witness: format!("{o} * f(g{j}) != 0"),
                });
            }
        }
        let f = Self::from_rows_unchecked(source, target, rows);
        if !f.is_linear_on_generators() {
            return Err(Error::AxiomViolation {
                axiom: "R-linear".into(),
                witness: "f(g e) != f(g) e for some generators".into(),
            });
        }
        Ok(f)
    }

    pub(crate) fn from_rows_unchecked(
        source: &FiniteModule,
        target: &FiniteModule,
        rows: Vec<usize>,
    ) -> Self {
        ModuleHom {
            source: source.clone(),
            target: target.clone(),
            rows,
        }
    }

    pub fn zero(source: &FiniteModule, target: &FiniteModule) -> Self {
        Self::from_rows_unchecked(source, target, vec![0; source.generator_count()])
    }

    pub fn identity(m: &FiniteModule) -> Self {
        let rows = (0..m.generator_count()).map(|j| m.generator(j)).collect();
        Self::from_rows_unchecked(m, m, rows)
    }

    pub fn source(&self) -> &FiniteModule {
        &self.source
    }

    pub fn target(&self) -> &FiniteModule {
        &self.target
    }

    /// Images of the source generators, as element indices of the target.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn matrix(&self) -> Vec<Vec<u64>> {
        self.rows.iter().map(|&y| self.target.coeffs(y)).collect()
    }

    fn is_linear_on_generators(&self) -> bool {
        if self.source.ring().tag() != RingTag::Custom {
            return true;
        }
        linear_on_generators(&self.source, &self.target, &self.rows)
    }

    pub fn apply(&self, x: usize) -> usize {
        apply_rows(&self.source, &self.target, &self.rows, x)
    }

    /// `f(x)` for every source element, by index.
    pub fn image_table(&self) -> Vec<u32> {
        let mut table = vec![0u32; self.source.size()];
        fill_image_table(&self.source, &self.target, &self.rows, &mut table);
        table
    }

    /// Exhaustive check of additivity and linearity over the whole carrier.
    pub fn validate_exhaustive(&self) -> Result<()> {
        let (m, n) = (&self.source, &self.target);
        let t = self.image_table();
        for x in 0..m.size() {
            for y in 0..m.size() {
                if t[m.add(x, y)] as usize != n.add(t[x] as usize, t[y] as usize) {
                    return Err(Error::AxiomViolation {
                        axiom: "additive".into(),
                        witness: format!("x={:?}, y={:?}", m.coeffs(x), m.coeffs(y)),
                    });
                }
            }
            if m.ring().tag() == RingTag::Custom {
                for r in 0..m.ring().size() {
                    if t[m.act(x, r)] as usize != n.act(t[x] as usize, r) {
                        return Err(Error::AxiomViolation {
                            axiom: "R-linear".into(),
                            witness: format!("x={:?}, r={:?}", m.coeffs(x), m.ring().element(r)),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn kernel_set(&self) -> ElemSet {
        let t = self.image_table();
        ElemSet::from_indices(self.source.size(), (0..t.len()).filter(|&x| t[x] == 0))
    }

    pub fn image_set(&self) -> ElemSet {
        ElemSet::from_indices(
            self.target.size(),
            self.image_table().into_iter().map(|y| y as usize),
        )
    }

    pub fn kernel(&self) -> Submodule {
        Submodule::from_set(&self.source, self.kernel_set())
    }

    pub fn image(&self) -> Submodule {
        Submodule::from_set(&self.target, self.image_set())
    }

    /// `N / Im f` with its projection.
    pub fn cokernel(&self) -> Result<QuotientModule> {
        QuotientModule::new(&self.target, &self.image())
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&y| y == 0)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_set().len() == 1
    }

    pub fn is_surjective(&self) -> bool {
        self.image_set().len() == self.target.size()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.size() == self.target.size() && self.is_injective()
    }

    pub fn is_idempotent(&self) -> bool {
        self.source == self.target && self.rows.iter().all(|&y| self.apply(y) == y)
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &ModuleHom) -> Result<ModuleHom> {
        compose(self, f)
    }
}

impl fmt::Debug for ModuleHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ModuleHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .matrix()
            .iter()
            .map(|r| {
                format!(
                    "[{}]",
                    r.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
                )
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// `g ∘ f`.
pub fn compose(g: &ModuleHom, f: &ModuleHom) -> Result<ModuleHom> {
    if f.target != g.source {
        return Err(Error::ShapeMismatch(format!(
            "cannot compose: {} is not {}",
            f.target, g.source
        )));
    }
    let rows = f.rows.iter().map(|&y| g.apply(y)).collect();
    Ok(ModuleHom::from_rows_unchecked(&f.source, &g.target, rows))
}

fn apply_rows(source: &FiniteModule, target: &FiniteModule, rows: &[usize], x: usize) -> usize {
    let mut acc = 0;
    for (j, c) in source.coeffs(x).into_iter().enumerate() {
        if c != 0 {
            acc = target.add(acc, target.scale(rows[j], c));
        }
    }
    acc
}

pub(crate) fn fill_image_table(
    source: &FiniteModule,
    target: &FiniteModule,
    rows: &[usize],
    table: &mut [u32],
) {
    let add = target.add_table();
    let n = target.size();
    table[0] = 0;
    for x in 1..source.size() {
        let (p, j) = source.predecessor(x);
        table[x] = add[table[p] as usize * n + rows[j]];
    }
}

fn linear_on_generators(source: &FiniteModule, target: &FiniteModule, rows: &[usize]) -> bool {
    (0..source.ring().generator_count()).all(|i| {
        (0..source.generator_count()).all(|j| {
            let lhs = apply_rows(
                source,
                target,
                rows,
                source.act_generator(source.generator(j), i),
            );
            lhs == target.act_generator(rows[j], i)
        })
    })
}

/// `Hom_R(M, N)` in lexicographic order of generator images.
#[derive(Clone)]
pub struct HomSpace {
    source: FiniteModule,
    target: FiniteModule,
    candidates: Vec<Vec<usize>>,
    check_linear: bool,
}

impl HomSpace {
    pub fn new(source: &FiniteModule, target: &FiniteModule) -> Result<Self> {
        source.same_ring(target)?;
        let candidates = source
            .orders()
            .iter()
            .map(|&o| {
                (0..target.size())
                    .filter(|&y| o % target.element_order(y) == 0)
                    .collect()
            })
            .collect();
        Ok(Self::with_candidates(source, target, candidates))
    }

    /// Restricts generator images to elements of the same additive order, a
    /// necessary condition for injectivity.
    pub fn injective_candidates(source: &FiniteModule, target: &FiniteModule) -> Result<Self> {
        source.same_ring(target)?;
        let candidates = source
            .orders()
            .iter()
            .map(|&o| {
                (0..target.size())
                    .filter(|&y| target.element_order(y) == o)
                    .collect()
            })
            .collect();
        Ok(Self::with_candidates(source, target, candidates))
    }

    fn with_candidates(
        source: &FiniteModule,
        target: &FiniteModule,
        candidates: Vec<Vec<usize>>,
    ) -> Self {
        HomSpace {
            source: source.clone(),
            target: target.clone(),
            candidates,
            check_linear: source.ring().tag() == RingTag::Custom,
        }
    }

    pub fn source(&self) -> &FiniteModule {
        &self.source
    }

    pub fn target(&self) -> &FiniteModule {
        &self.target
    }

    /// Size of the search space before linearity filtering.
    pub fn candidate_count(&self) -> u128 {
        self.candidates
            .iter()
            .try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128))
            .unwrap_or(u128::MAX)
    }

    /// Whether every candidate is a homomorphism, so the count is a product.
    pub fn is_product(&self) -> bool {
        !self.check_linear
    }

    /// Number of homomorphisms.
    pub fn count(&self, limits: &Limits) -> Result<u128> {
        if !self.check_linear {
            return Ok(self.candidate_count());
        }
        let mut n = 0u128;
        self.for_each_rows(limits, |_, _| {
            n += 1;
            ControlFlow::Continue(())
        })?;
        Ok(n)
    }

    /// Visits each homomorphism as `(index, generator images)`, in order.
    /// Refuses when the candidate space exceeds `limits.max_homs`.
    pub fn for_each_rows(
        &self,
        limits: &Limits,
        mut f: impl FnMut(u64, &[usize]) -> ControlFlow<()>,
    ) -> Result<()> {
        Limits::check("hom set", self.candidate_count(), limits.max_homs)?;
        let t = self.candidates.len();
        if self.candidates.iter().any(Vec::is_empty) {
            return Ok(());
        }
        let mut pos = vec![0usize; t];
        let mut rows: Vec<usize> = self.candidates.iter().map(|c| c[0]).collect();
        let mut index = 0u64;
        loop {
            if !self.check_linear || linear_on_generators(&self.source, &self.target, &rows) {
                if f(index, &rows).is_break() {
                    return Ok(());
                }
                index += 1;
            }
            let mut j = t;
            loop {
                if j == 0 {
                    return Ok(());
                }
                j -= 1;
                pos[j] += 1;
                if pos[j] < self.candidates[j].len() {
                    rows[j] = self.candidates[j][pos[j]];
                    break;
                }
                pos[j] = 0;
                rows[j] = self.candidates[j][0];
            }
        }
    }

    /// Like [`HomSpace::for_each_rows`] and also passes the image table.
    pub fn for_each_table(
        &self,
        limits: &Limits,
        mut f: impl FnMut(u64, &[usize], &[u32]) -> ControlFlow<()>,
    ) -> Result<()> {
        let mut table = vec![0u32; self.source.size()];
        self.for_each_rows(limits, |i, rows| {
            fill_image_table(&self.source, &self.target, rows, &mut table);
            f(i, rows, &table)
        })
    }

    pub fn to_vec(&self, limits: &Limits) -> Result<Vec<ModuleHom>> {
        let mut out = Vec::new();
        self.for_each_rows(limits, |_, rows| {
            out.push(ModuleHom::from_rows_unchecked(
                &self.source,
                &self.target,
                rows.to_vec(),
            ));
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    /// The homomorphism with the given lexicographic index.
    pub fn nth(&self, index: u64, limits: &Limits) -> Result<Option<ModuleHom>> {
        if !self.check_linear {
            let mut rest = index as u128;
            if rest >= self.candidate_count() {
                return Ok(None);
            }
            let mut rows = vec![0; self.candidates.len()];
            for j in (0..self.candidates.len()).rev() {
                let k = self.candidates[j].len() as u128;
                rows[j] = self.candidates[j][(rest % k) as usize];
                rest /= k;
            }
            return Ok(Some(ModuleHom::from_rows_unchecked(
                &self.source,
                &self.target,
                rows,
            )));
        }
        let mut found = None;
        self.for_each_rows(limits, |i, rows| {
            if i == index {
                found = Some(ModuleHom::from_rows_unchecked(
                    &self.source,
                    &self.target,
                    rows.to_vec(),
                ));
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(found)
    }
}

/// Histogram of `(|Ker f|, |Im f|)` over a hom set.
pub type KernelImageCensus = BTreeMap<(usize, usize), u128>;

impl HomSpace {
    /// Kernel and image sizes of every homomorphism, by direct evaluation.
    pub fn kernel_image_census_by_enumeration(&self, limits: &Limits) -> Result<KernelImageCensus> {
        let mut out = KernelImageCensus::new();
        self.for_each_table(limits, |_, _, table| {
            let mut seen = ElemSet::empty(self.target.size());
            let mut kernel = 0;
            for &y in table {
                kernel += usize::from(y == 0);
                seen.insert(y as usize);
            }
            let image = seen.len();
            *out.entry((kernel, image)).or_default() += 1;
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    /// Same histogram as [`HomSpace::kernel_image_census_by_enumeration`],
    /// walking only the images of a prefix of the generators. For each prefix
    /// the value counts `cnt` of the prefix map are tabulated, and every
    /// choice of the remaining images is resolved from them. With one
    /// remaining generator mapped to `y`, the kernel counts pairs `(c, a)`
    /// with `f(c) = -a y` and the image is `f(prefix) + <y>`. When the last
    /// two generators have order 2 both are resolved this way.
    ///
    /// Over custom rings this falls back to full enumeration. The cap applies
    /// to the number of prefixes.
    pub fn kernel_image_census(&self, limits: &Limits) -> Result<KernelImageCensus> {
        if self.check_linear {
            return self.kernel_image_census_by_enumeration(limits);
        }
        let t = self.candidates.len();
        if t == 0 {
            return Ok(KernelImageCensus::from([((1, 1), 1)]));
        }
        let orders = self.source.orders();
        let tail = if t >= 2 && orders[t - 1] == 2 && orders[t - 2] == 2 {
            2
        } else {
            1
        };
        let head = t - tail;
        let prefixes = self.candidates[..head]
            .iter()
            .try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128))
            .unwrap_or(u128::MAX);
        Limits::check("hom prefixes", prefixes, limits.max_homs)?;
        if self.candidates.iter().any(Vec::is_empty) {
            return Ok(KernelImageCensus::new());
        }
        let target = &self.target;
        let add = target.add_table();
        let n = target.size();
        // tables[k] holds the prefix map on the first k generators.
        let mut tables: Vec<Vec<u32>> = vec![vec![0]];
        for &o in &orders[..head] {
            let len = tables.last().map_or(1, Vec::len) * o as usize;
            tables.push(vec![0; len]);
        }
        let prefix_size = tables[head].len();
        let mut cnt = vec![0u32; n];
        // hist[kernel * (n + 1) + image]
        let mut hist = vec![0u64; (self.source.size() + 1) * (n + 1)];
        let mut leaf = Leaf {
            add,
            n,
            by_count: vec![0u64; 2 * prefix_size + 1],
            pending: Vec::new(),
        };
        // The contribution of a prefix depends only on its value counts.
        let mut memo: HashMap<Vec<u32>, Vec<(usize, u64)>> = HashMap::new();
        let mut pos = vec![0usize; head];
        let mut dirty = 0;
        loop {
            for k in dirty..head {
                let r = self.candidates[k][pos[k]];
                let o = orders[k] as usize;
                let (lo, hi) = tables.split_at_mut(k + 1);
                for (c, &v) in lo[k].iter().enumerate() {
                    let mut acc = v as usize;
                    for a in 0..o {
                        hi[0][c * o + a] = acc as u32;
                        acc = add[acc * n + r] as usize;
                    }
                }
            }
            let table = &tables[head];
            let mut distinct = 0usize;
            for &v in table {
                if cnt[v as usize] == 0 {
                    distinct += 1;
                }
                cnt[v as usize] += 1;
            }
            if let Some(contribution) = memo.get(&cnt) {
                for &(i, k) in contribution {
                    hist[i] += k;
                }
            } else {
                leaf.pending.clear();
                if tail == 2 {
                    leaf.two_involutions(
                        &cnt,
                        distinct,
                        &self.candidates[t - 2],
                        &self.candidates[t - 1],
                    );
                } else {
                    leaf.one(
                        &cnt,
                        distinct,
                        &self.candidates[t - 1],
                        orders[t - 1] as usize,
                        target,
                    );
                }
                for &(i, k) in &leaf.pending {
                    hist[i] += k;
                }
                if memo.len() < MEMO_CAP {
                    memo.insert(cnt.clone(), leaf.pending.clone());
                }
            }
            for &v in table {
                cnt[v as usize] = 0;
            }
            let mut j = head;
            loop {
                if j == 0 {
                    let mut out = KernelImageCensus::new();
                    for (i, &v) in hist.iter().enumerate() {
                        if v > 0 {
                            out.insert((i / (n + 1), i % (n + 1)), u128::from(v));
                        }
                    }
                    return Ok(out);
                }
                j -= 1;
                pos[j] += 1;
                if pos[j] < self.candidates[j].len() {
                    dirty = j;
                    break;
                }
                pos[j] = 0;
            }
        }
    }
}

/// Resolution of the trailing generator images for one prefix.
struct Leaf<'a> {
    add: &'a [u32],
    n: usize,
    by_count: Vec<u64>,
    /// `(histogram index, count)` pairs produced for the current prefix.
    pending: Vec<(usize, u64)>,
}

const MEMO_CAP: usize = 1 << 16;

impl Leaf<'_> {
    fn record(&mut self, kernel: usize, image: usize, count: u64) {
        self.pending.push((kernel * (self.n + 1) + image, count));
    }

    /// One remaining generator of order `o` mapped to each `y` in `last`.
    fn one(
        &mut self,
        cnt: &[u32],
        distinct: usize,
        last: &[usize],
        o: usize,
        target: &FiniteModule,
    ) {
        for &y in last {
            let mut kernel = 0usize;
            let mut least = 0usize;
            let mut ay = 0usize;
            for a in 0..o {
                kernel += cnt[target.neg(ay)] as usize;
                if a > 0 && least == 0 && cnt[ay] > 0 {
                    least = a;
                }
                ay = self.add[ay * self.n + y] as usize;
            }
            let least = if least == 0 { o } else { least };
            self.record(kernel, distinct * least, 1);
        }
    }

    /// Two remaining generators of order 2 mapped to `x` and `y`. Then
    /// `-x = x`, `-y = y`, and with `cnt1[v] = cnt[v] + cnt[v + x]` the
    /// kernel is `cnt1[0] + cnt1[y]`.
    fn two_involutions(&mut self, cnt: &[u32], distinct: usize, xs: &[usize], ys: &[usize]) {
        let n = self.n;
        if n <= 256 && self.by_count.len() <= 64 {
            // Byte-sized copies keep the inner loop in cache, and a bit mask
            // records which counts occur.
            let small: Vec<u8> = cnt.iter().map(|&c| c as u8).collect();
            let mut local = [0u32; 64];
            for &x in xs {
                let shift = &self.add[x * n..(x + 1) * n];
                let mut seen = 0u64;
                for &y in ys {
                    let c = small[y] as usize + small[shift[y] as usize] as usize;
                    local[c] += 1;
                    seen |= 1 << c;
                }
                let cx = cnt[x] as usize;
                let zero = cnt[0] as usize + cx;
                let distinct1 = if cx > 0 { distinct } else { 2 * distinct };
                while seen != 0 {
                    let c = seen.trailing_zeros() as usize;
                    seen &= seen - 1;
                    let image = if c > 0 { distinct1 } else { 2 * distinct1 };
                    self.record(zero + c, image, u64::from(std::mem::take(&mut local[c])));
                }
            }
            return;
        }
        for &x in xs {
            let shift = &self.add[x * n..(x + 1) * n];
            let mut by_count = std::mem::take(&mut self.by_count);
            for &y in ys {
                by_count[(cnt[y] + cnt[shift[y] as usize]) as usize] += 1;
            }
            self.fold_pair(cnt, distinct, x, &mut by_count);
            self.by_count = by_count;
        }
    }

    /// Records the homs with second-to-last image `x`, given
    /// `by_count[c] = #{y : cnt1[y] = c}`, and clears `by_count`.
    fn fold_pair<T: Copy + Into<u64> + Default>(
        &mut self,
        cnt: &[u32],
        distinct: usize,
        x: usize,
        by_count: &mut [T],
    ) {
        let cx = cnt[x] as usize;
        let zero = cnt[0] as usize + cx;
        let distinct1 = if cx > 0 { distinct } else { 2 * distinct };
        for (c, slot) in by_count.iter_mut().enumerate() {
            let k: u64 = std::mem::take(slot).into();
            if k > 0 {
                let image = if c > 0 { distinct1 } else { 2 * distinct1 };
                self.record(zero + c, image, k);
            }
        }
    }
}

impl fmt::Debug for HomSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hom({}, {})", self.source, self.target)
    }
}

/// All homomorphisms `M -> N`, in lexicographic order.
pub fn enumerate_homs(
    m: &FiniteModule,
    n: &FiniteModule,
    limits: &Limits,
) -> Result<Vec<ModuleHom>> {
    HomSpace::new(m, n)?.to_vec(limits)
}

/// Idempotent endomorphisms of `M`, in lexicographic order.
pub fn idempotent_endos(m: &FiniteModule, limits: &Limits) -> Result<Vec<ModuleHom>> {
    let mut out = Vec::new();
    for_each_idempotent(m, limits, |rows| {
        out.push(ModuleHom::from_rows_unchecked(m, m, rows.to_vec()));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Visits the generator images of every idempotent endomorphism of `M`, in
/// lexicographic order.
///
/// `e` is idempotent iff `e(r_j) = r_j` for every generator image `r_j`.
/// Images are chosen generator by generator, and each condition is tested
/// as soon as `r_j` lies in the span of the generators already mapped. The
/// last image is then solved from the conditions instead of searched. The
/// cap applies to the number of choices for all but the last image. Over
/// custom rings the full hom set is walked.
pub fn for_each_idempotent(
    m: &FiniteModule,
    limits: &Limits,
    mut f: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> Result<()> {
    let space = HomSpace::new(m, m)?;
    if space.check_linear {
        return space.for_each_rows(limits, |_, rows| {
            if rows.iter().all(|&y| apply_rows(m, m, rows, y) == y) {
                f(rows)
            } else {
                ControlFlow::Continue(())
            }
        });
    }
    let t = space.candidates.len();
    if t == 0 {
        let _ = f(&[]);
        return Ok(());
    }
    let prefixes = space.candidates[..t - 1]
        .iter()
        .try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128))
        .unwrap_or(u128::MAX);
    Limits::check("idempotent search prefixes", prefixes, limits.max_homs)?;
    let orders: Vec<usize> = m.orders().iter().map(|&o| o as usize).collect();
    // suffix[k] = product of orders after generator k, so x lies in the span
    // of generators 0..=k iff suffix[k] divides x.
    let mut suffix = vec![1usize; t];
    for k in (0..t - 1).rev() {
        suffix[k] = suffix[k + 1] * orders[k + 1];
    }
    let n = m.size();
    let last_order = orders[t - 1];
    // solutions[a][v] = candidates y for the last image with a*y = v.
    let mut solutions = vec![vec![Vec::new(); n]; last_order];
    for &y in &space.candidates[t - 1] {
        let mut ay = 0;
        for sols in solutions.iter_mut() {
            sols[ay].push(y);
            ay = m.add(ay, y);
        }
    }
    let mut tables: Vec<Vec<u32>> = vec![vec![0]];
    for &o in &orders[..t - 1] {
        let len = tables.last().map_or(1, Vec::len) * o;
        tables.push(vec![0; len]);
    }
    let mut search = IdempotentSearch {
        m,
        candidates: &space.candidates,
        orders: &orders,
        suffix: &suffix,
        solutions: &solutions,
        tables,
        rows: vec![0; t],
    };
    let _ = search.descend(0, &mut f);
    Ok(())
}

struct IdempotentSearch<'a> {
    m: &'a FiniteModule,
    candidates: &'a [Vec<usize>],
    orders: &'a [usize],
    suffix: &'a [usize],
    solutions: &'a [Vec<Vec<usize>>],
    /// tables[k] is the map on the span of generators 0..k.
    tables: Vec<Vec<u32>>,
    rows: Vec<usize>,
}

impl IdempotentSearch<'_> {
    fn descend(
        &mut self,
        k: usize,
        f: &mut impl FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let t = self.orders.len();
        if k == t - 1 {
            return self.solve_last(f);
        }
        let add = self.m.add_table();
        let n = self.m.size();
        let o = self.orders[k];
        for &r in &self.candidates[k] {
            self.rows[k] = r;
            let (lo, hi) = self.tables.split_at_mut(k + 1);
            for (c, &v) in lo[k].iter().enumerate() {
                let mut acc = v as usize;
                for a in 0..o {
                    hi[0][c * o + a] = acc as u32;
                    acc = add[acc * n + r] as usize;
                }
            }
            let table = &self.tables[k + 1];
            let s = self.suffix[k];
            let consistent = self.rows[..=k]
                .iter()
                .all(|&rj| rj % s != 0 || table[rj / s] as usize == rj);
            if consistent {
                self.descend(k + 1, f)?;
            }
        }
        ControlFlow::Continue(())
    }

    fn solve_last(&mut self, f: &mut impl FnMut(&[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
        let t = self.orders.len();
        let o = self.orders[t - 1];
        let table = &self.tables[t - 1];
        let m = self.m;
        // Conditions with a nonzero last coefficient: a*y = r_j - e(prefix part).
        let mut pinned: Option<&[usize]> = None;
        for &rj in &self.rows[..t - 1] {
            let a = rj % o;
            if a != 0 {
                let v = m.sub(rj, table[rj / o] as usize);
                pinned = Some(&self.solutions[a][v]);
                break;
            }
        }
        let pool: &[usize] = pinned.unwrap_or(&self.candidates[t - 1]);
        let image = |x: usize, y: usize| m.add(table[x / o] as usize, m.scale(y, (x % o) as u64));
        for &y in pool {
            let ok = self.rows[..t - 1].iter().all(|&rj| image(rj, y) == rj) && image(y, y) == y;
            if ok {
                self.rows[t - 1] = y;
                f(&self.rows)?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// An injective homomorphism `M -> N`, if one exists.
pub fn find_embedding(
    m: &FiniteModule,
    n: &FiniteModule,
    limits: &Limits,
) -> Result<Option<ModuleHom>> {
    if m.size() > n.size() {
        m.same_ring(n)?;
        return Ok(None);
    }
    let space = HomSpace::injective_candidates(m, n)?;
    let mut found = None;
    let mut table = vec![0u32; m.size()];
    space.for_each_rows(limits, |_, rows| {
        fill_image_table(m, n, rows, &mut table);
        if table[1..].iter().all(|&y| y != 0) {
            found = Some(ModuleHom::from_rows_unchecked(m, n, rows.to_vec()));
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

/// Whether `M` embeds in `N`. Over the integers and residue rings this
/// compares invariant factors; otherwise it searches.
pub fn embeds_in(m: &FiniteModule, n: &FiniteModule, limits: &Limits) -> Result<bool> {
    m.same_ring(n)?;
    if m.ring().is_abelian_group_ring() {
        return Ok(invariant_factors_embed(
            &m.canonical_form()?,
            &n.canonical_form()?,
        ));
    }
    Ok(find_embedding(m, n, limits)?.is_some())
}

pub fn is_isomorphic(m: &FiniteModule, n: &FiniteModule, limits: &Limits) -> Result<bool> {
    m.same_ring(n)?;
    if m.size() != n.size() {
        return Ok(false);
    }
    if m.ring().is_abelian_group_ring() {
        return Ok(m.canonical_form()? == n.canonical_form()?);
    }
    Ok(find_embedding(m, n, limits)?.is_some())
}

/// `M ⊕ N` with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: FiniteModule,
    pub injections: [ModuleHom; 2],
    pub projections: [ModuleHom; 2],
}

pub fn direct_sum(m: &FiniteModule, n: &FiniteModule) -> Result<DirectSum> {
    direct_sum_with_limits(m, n, &Limits::default())
}

pub fn direct_sum_with_limits(
    m: &FiniteModule,
    n: &FiniteModule,
    limits: &Limits,
) -> Result<DirectSum> {
    m.same_ring(n)?;
    let (tm, tn) = (m.generator_count(), n.generator_count());
    let orders: Vec<i64> = m
        .orders()
        .iter()
        .chain(n.orders())
        .map(|&o| o as i64)
        .collect();
    let action = match m.ring().tag() {
        RingTag::Custom => Some(
            (0..m.ring().generator_count())
                .map(|i| {
                    let mut gens = Vec::with_capacity(tm + tn);
                    for row in &m.action_constants()[i] {
                        let mut v = row.clone();
                        v.resize(tm + tn, 0);
                        gens.push(v);
                    }
                    for row in &n.action_constants()[i] {
                        let mut v = vec![0; tm];
                        v.extend_from_slice(row);
                        gens.push(v);
                    }
                    gens
                })
                .collect(),
        ),
        _ => None,
    };
    let s = FiniteModule::with_limits(m.ring(), ModuleSpec { orders, action }, limits)?;
    let inj1 = (0..tm).map(|j| s.generator(j)).collect();
    let inj2 = (0..tn).map(|j| s.generator(tm + j)).collect();
    let proj1 = (0..tm + tn)
        .map(|j| if j < tm { m.generator(j) } else { 0 })
        .collect();
    let proj2 = (0..tm + tn)
        .map(|j| if j < tm { 0 } else { n.generator(j - tm) })
        .collect();
    Ok(DirectSum {
        injections: [
            ModuleHom::from_rows_unchecked(m, &s, inj1),
            ModuleHom::from_rows_unchecked(n, &s, inj2),
        ],
        projections: [
            ModuleHom::from_rows_unchecked(&s, m, proj1),
            ModuleHom::from_rows_unchecked(&s, n, proj2),
        ],
        module: s,
    })
}
