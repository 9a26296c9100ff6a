//! Theorem checks over instance streams. Each check evaluates a stated
//! implication (or equivalence) on every instance and collects violations.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hom::{direct_sum, HomSpace};
use crate::lab::streams::{
    enumerate_abelian_groups_with_limits, enumerate_modules_over_zn_with_limits, module_of_type,
};
use crate::lattice::{radical_squares_to_zero, zn_radical_squares_to_zero};
use crate::module::FiniteModule;
use crate::properties::{Engine, Property};

/// Accepted theorem ids.
pub const THEOREM_IDS: [&str; 12] = [
    "T-nonsing-equiv",
    "L-nonsing-summand",
    "C-summand",
    "C-sip",
    "L-ab",
    "C-mm",
    "T-sum",
    "T-finite-iff",
    "P-necessary",
    "T-ssip",
    "T-orthogonal",
    "C-serial",
];

/// Stream bounds. Unset fields take per-theorem defaults.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StreamParams {
    /// Largest order of a stream member: 24 for pair theorems, 16 for
    /// triple theorems, 48 for single-module ones.
    pub max_order: Option<usize>,
    /// Largest order of a direct sum whose own submodule lattice is examined
    /// (`L-ab`, `C-mm`, `P-necessary`, `T-orthogonal`).
    pub max_sum_order: Option<usize>,
    /// `n` for `C-serial` (ring `Z_n`), default 6.
    pub ring: Option<u64>,
}

pub const DEFAULT_MULTI_ORDER: usize = 24;
/// Component bound for theorems over triples.
pub const DEFAULT_TRIPLE_ORDER: usize = 16;
pub const DEFAULT_UNARY_ORDER: usize = 48;
pub const DEFAULT_SUM_ORDER: usize = 64;
pub const DEFAULT_ORTHOGONAL_SUM_ORDER: usize = 512;
/// Component bound for the three-summand case of `T-finite-iff`.
pub const TRIPLE_SUM_COMPONENT_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub instance: String,
    pub witness: String,
}

#[derive(Debug, Clone)]
pub struct VerificationResult {
    pub theorem: String,
    /// Number of (instance, form) checks evaluated.
    pub instances: u64,
    pub violations: Vec<Violation>,
    pub elapsed: Duration,
    pub notes: Vec<String>,
}

impl VerificationResult {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs theorem `id` with its primal and dual forms.
pub fn verify_theorem(
    id: &str,
    params: &StreamParams,
    engine: &Engine,
) -> Result<VerificationResult> {
    let start = Instant::now();
    let mut out = Outcome::default();
    let multi = params.max_order.unwrap_or(DEFAULT_MULTI_ORDER);
    let triple = params.max_order.unwrap_or(DEFAULT_TRIPLE_ORDER);
    let unary = params.max_order.unwrap_or(DEFAULT_UNARY_ORDER);
    let sum_bound = params.max_sum_order.unwrap_or(DEFAULT_SUM_ORDER);
    let limits = engine.limits();
    match id {
        "T-nonsing-equiv" => nonsing_equiv(engine, &groups(multi, limits)?, &mut out)?,
        "L-nonsing-summand" => summand_pairs(engine, &groups(multi, limits)?, true, &mut out)?,
        "C-summand" => summand_pairs(engine, &groups(multi, limits)?, false, &mut out)?,
        "C-sip" => sip_corollary(engine, &groups(unary, limits)?, &mut out)?,
        "L-ab" => lemma_ab(engine, &groups(multi, limits)?, sum_bound, &mut out)?,
        "C-mm" => square_corollary(engine, &groups(multi, limits)?, sum_bound, &mut out)?,
        "T-sum" => sum_theorem(engine, &groups(triple, limits)?, &mut out)?,
        "T-finite-iff" => {
            finite_iff(engine, &groups(triple, limits)?, &mut out)?;
            let small = triple.min(TRIPLE_SUM_COMPONENT_ORDER);
            triple_iff(engine, &groups(small, limits)?, &mut out)?;
            out.notes.push(format!(
                "three summands checked with components of order <= {small}"
            ));
        }
        "P-necessary" => necessary(engine, &groups(multi, limits)?, sum_bound, &mut out)?,
        "T-ssip" => ssip(engine, &groups(triple, limits)?, &mut out)?,
        "T-orthogonal" => {
            let bound = params.max_sum_order.unwrap_or(DEFAULT_ORTHOGONAL_SUM_ORDER);
            orthogonal(engine, &groups(multi, limits)?, bound, &mut out)?
        }
        "C-serial" => serial(engine, params.ring.unwrap_or(6), unary, &mut out)?,
        _ => return Err(Error::UnknownTheorem(id.to_string())),
    }
    Ok(VerificationResult {
        theorem: id.to_string(),
        instances: out.instances,
        violations: out.violations,
        elapsed: start.elapsed(),
        notes: out.notes,
    })
}

#[derive(Default)]
struct Outcome {
    instances: u64,
    violations: Vec<Violation>,
    notes: Vec<String>,
}

impl Outcome {
    fn absorb(&mut self, checks: Vec<Check>) {
        for c in checks {
            self.instances += c.evaluated;
            self.violations.extend(c.violations);
        }
    }
}

/// Result of the checks on one instance.
#[derive(Default)]
struct Check {
    evaluated: u64,
    violations: Vec<Violation>,
}

impl Check {
    fn record(
        &mut self,
        ok: bool,
        instance: impl FnOnce() -> String,
        witness: impl FnOnce() -> String,
    ) {
        self.evaluated += 1;
        if !ok {
            self.violations.push(Violation {
                instance: instance(),
                witness: witness(),
            });
        }
    }
}

fn groups(max: usize, limits: &crate::limits::Limits) -> Result<Vec<FiniteModule>> {
    Ok(enumerate_abelian_groups_with_limits(max, limits)?.modules)
}

fn sweep<T: Sync>(
    items: &[T],
    f: impl Fn(&T) -> Result<Check> + Sync + Send,
) -> Result<Vec<Check>> {
    items.par_iter().map(f).collect()
}

fn sum_of(a: &FiniteModule, b: &FiniteModule) -> Result<FiniteModule> {
    direct_sum(a, b)?.module.canonical()
}

fn rel(e: &Engine, p: Property, m: &FiniteModule, n: &FiniteModule) -> Result<bool> {
    e.decide_relative(p, m, n)
}

fn why(e: &Engine, p: Property, m: &FiniteModule, n: &FiniteModule) -> String {
    match e.explain_relative(p, m, n) {
        Ok(v) => v
            .witness
            .map(|w| w.to_string())
            .unwrap_or_else(|| format!("{p} holds")),
        Err(err) => err.to_string(),
    }
}

fn why_self(e: &Engine, p: Property, m: &FiniteModule) -> String {
    match e.explain(p, m) {
        Ok(v) => v
            .witness
            .map(|w| w.to_string())
            .unwrap_or_else(|| format!("{p} holds")),
        Err(err) => err.to_string(),
    }
}

fn pairs(ms: &[FiniteModule]) -> Vec<(FiniteModule, FiniteModule)> {
    ms.iter()
        .flat_map(|a| ms.iter().map(move |b| (a.clone(), b.clone())))
        .collect()
}

/// `N` is `M`-CS-Rickart and `M`-K-nonsingular iff `N` is `M`-Rickart, and
/// the dual with T-nonsingularity of `M` relative to `N`.
fn nonsing_equiv(e: &Engine, ms: &[FiniteModule], out: &mut Outcome) -> Result<()> {
    let checks = sweep(&pairs(ms), |(m, n)| {
        let mut c = Check::default();
        let inst = || format!("M = {m}, N = {n}");
        let cs = rel(e, Property::CsRickart, m, n)?;
        let kn = rel(e, Property::KNonsingular, m, n)?;
        let r = rel(e, Property::Rickart, m, n)?;
        c.record((cs && kn) == r, inst, || {
            format!("cs-rickart {cs}, k-nonsingular {kn}, rickart {r}")
        });
        let dcs = rel(e, Property::DualCsRickart, m, n)?;
        let tn = rel(e, Property::TNonsingular, m, n)?;
        let dr = rel(e, Property::DualRickart, m, n)?;
        c.record(
            (dcs && tn) == dr,
            || format!("(dual) M = {m}, N = {n}"),
            || format!("dual-cs-rickart {dcs}, t-nonsingular {tn}, dual-rickart {dr}"),
        );
        Ok(c)
    })?;
    out.absorb(checks);
    Ok(())
}

/// A property of `(M, N)` passes to every pair of direct summands
/// `(M', N')`. Summands are taken once per isomorphism type.
fn summand_pairs(
    e: &Engine,
    ms: &[FiniteModule],
    nonsingular: bool,
    out: &mut Outcome,
) -> Result<()> {
    let (primal, dual) = if nonsingular {
        (Property::KNonsingular, Property::TNonsingular)
    } else {
        (Property::CsRickart, Property::DualCsRickart)
    };
    let checks = sweep(&pairs(ms), |(m, n)| {
        let mut c = Check::default();
        let hp = rel(e, primal, m, n)?;
        let hd = rel(e, dual, m, n)?;
        if !hp && !hd {
            return Ok(c);
        }
        let sm: Vec<FiniteModule> = e
            .summand_types(m)?
            .iter()
            .map(|t| module_of_type(m.ring(), t))
            .collect::<Result<_>>()?;
        let sn: Vec<FiniteModule> = e
            .summand_types(n)?
            .iter()
            .map(|t| module_of_type(n.ring(), t))
            .collect::<Result<_>>()?;
        for m2 in &sm {
            for n2 in &sn {
                if hp {
                    let ok = rel(e, primal, m2, n2)?;
                    c.record(
                        ok,
                        || format!("M = {m}, N = {n}, M' = {m2}, N' = {n2}"),
                        || why(e, primal, m2, n2),
                    );
                }
                if hd {
                    let ok = rel(e, dual, m2, n2)?;
                    c.record(
                        ok,
                        || format!("(dual) M = {m}, N = {n}, M' = {m2}, N' = {n2}"),
                        || why(e, dual, m2, n2),
                    );
                }
            }
        }
        Ok(c)
    })?;
    out.absorb(checks);
    Ok(())
}

/// Self-CS-Rickart implies SIP-extending; dual self-CS-Rickart implies
/// SSP-lifting.
fn sip_corollary(e: &Engine, ms: &[FiniteModule], out: &mut Outcome) -> Result<()> {
    let checks = sweep(ms, |m| {
        let mut c = Check::default();
        if e.decide(Property::CsRickart, m)? {
            let ok = e.decide(Property::SipExtending, m)?;
            c.record(
                ok,
                || format!("M = {m}"),
                || why_self(e, Property::SipExtending, m),
            );
        } else {
            c.evaluated += 1;
        }
        if e.decide(Property::DualCsRickart, m)? {
            let ok = e.decide(Property::SspLifting, m)?;
            c.record(
                ok,
                || format!("(dual) M = {m}"),
                || why_self(e, Property::SspLifting, m),
            );
        } else {
            c.evaluated += 1;
        }
        Ok(c)
    })?;
    out.absorb(checks);
    Ok(())
}

fn bounded_pairs(ms: &[FiniteModule], sum_bound: usize) -> Vec<(FiniteModule, FiniteModule)> {
    pairs(ms)
        .into_iter()
        .filter(|(a, b)| a.size() * b.size() <= sum_bound)
        .collect()
}

/// SIP-extending `A ⊕ B` makes `B` `A`-CS-Rickart; SSP-lifting makes it
/// dual `A`-CS-Rickart.
fn lemma_ab(e: &Engine, ms: &[FiniteModule], sum_bound: usize, out: &mut Outcome) -> Result<()> {
    let checks = sweep(&bounded_pairs(ms, sum_bound), |(a, b)| {
        let mut c = Check::default();
        let s = sum_of(a, b)?;
        let inst = |dual: bool| {
            let tag = if dual { "(dual) " } else { "" };
            format!("{tag}A = {a}, B = {b}")
        };
        if e.decide(Property::SipExtending, &s)? {
            c.record(
                rel(e, Property::CsRickart, a, b)?,
                || inst(false),
                || why(e, Property::CsRickart, a, b),
            );
        } else {
            c.evaluated += 1;
        }
        if e.decide(Property::SspLifting, &s)? {
            c.record(
                rel(e, Property::DualCsRickart, a, b)?,
                || inst(true),
                || why(e, Property::DualCsRickart, a, b),
            );
        } else {
            c.evaluated += 1;
        }
        Ok(c)
    })?;
    out.absorb(checks);
    out.notes.push(format!("pairs with |A|*|B| <= {sum_bound}"));
    Ok(())
}

/// SIP-extending `M ⊕ M` makes `M` self-CS-Rickart; dually for SSP-lifting.
fn square_corollary(
    e: &Engine,
    ms: &[FiniteModule],
    sum_bound: usize,
    out: &mut Outcome,
) -> Result<()> {
    let items: Vec<&FiniteModule> = ms
        .iter()
        .filter(|m| m.size() * m.size() <= sum_bound)
        .collect();
    let checks = sweep(&items, |m| {
        let m: &FiniteModule = m;
        let mut c = Check::default();
        let s = sum_of(m, m)?;
        if e.decide(Property::SipExtending, &s)? {
            c.record(
                e.decide(Property::CsRickart, m)?,
                || format!("M = {m}"),
                || why_self(e, Property::CsRickart, m),
            );
        } else {
            c.evaluated += 1;
        }
        if e.decide(Property::SspLifting, &s)? {
            c.record(
                e.decide(Property::DualCsRickart, m)?,
                || format!("(dual) M = {m}"),
                || why_self(e, Property::DualCsRickart, m),
            );
        } else {
            c.evaluated += 1;
        }
        Ok(c)
    })?;
    out.absorb(checks);
    out.notes.push(format!("modules with |M|^2 <= {sum_bound}"));
    Ok(())
}

/// Triples `(x, y, z)` with `y <= z` in stream order.
fn triples(ms: &[FiniteModule]) -> Vec<(FiniteModule, FiniteModule, FiniteModule)> {
    let mut out = Vec::new();
    for x in ms {
        for (i, y) in ms.iter().enumerate() {
            for z in &ms[i..] {
                out.push((x.clone(), y.clone(), z.clone()));
            }
        }
    }
    out
}

/// `N1`, `N2` both `M`-CS-Rickart gives `N1 ⊕ N2` `M`-CS-Rickart; `N` dual
/// `M1`- and `M2`-CS-Rickart gives `N` dual `M1 ⊕ M2`-CS-Rickart.
fn sum_theorem(e: &Engine, ms: &[FiniteModule], out: &mut Outcome) -> Result<()> {
    let checks = sweep(&triples(ms), |(x, y, z)| {
        let mut c = Check::default();
        let s = sum_of(y, z)?;
        // primal: M = x, N1 = y, N2 = z
        if rel(e, Property::CsRickart, x, y)? && rel(e, Property::CsRickart, x, z)? {
            c.record(
                rel(e, Property::CsRickart, x, &s)?,
                || format!("M = {x}, N1 = {y}, N2 = {z}"),
                || why(e, Property::CsRickart, x, &s),
            );
        } else {
            c.evaluated += 1;
        }
        // dual: N = x, M1 = y, M2 = z
        if rel(e, Property::DualCsRickart, y, x)? && rel(e, Property::DualCsRickart, z, x)? {
            c.record(
                rel(e, Property::DualCsRickart, &s, x)?,
                || format!("(dual) N = {x}, M1 = {y}, M2 = {z}"),
                || why(e, Property::DualCsRickart, &s, x),
            );
        } else {
            c.evaluated += 1;
        }
        Ok(c)
    })?;
    out.absorb(checks);
    Ok(())
}

fn iff_pair(e: &Engine, x: &FiniteModule, parts: &[&FiniteModule], label: &str) -> Result<Check> {
    let mut c = Check::default();
    let mut s = parts[0].clone();
    for p in &parts[1..] {
        s = sum_of(&s, p)?;
    }
    let names: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
    let each = parts
        .iter()
        .map(|p| rel(e, Property::CsRickart, x, p))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    let whole = rel(e, Property::CsRickart, x, &s)?;
    c.record(
        each == whole,
        || format!("{label}M = {x}, N_i = [{}]", names.join("; ")),
        || format!("each N_i M-CS-Rickart: {each}; sum M-CS-Rickart: {whole}"),
    );
    let each = parts
        .iter()
        .map(|p| rel(e, Property::DualCsRickart, p, x))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    let whole = rel(e, Property::DualCsRickart, &s, x)?;
    c.record(
        each == whole,
        || format!("(dual) {label}N = {x}, M_i = [{}]", names.join("; ")),
        || format!("N dual M_i-CS-Rickart for each i: {each}; for the sum: {whole}"),
    );
    Ok(c)
}

/// Finite sums: `⊕ N_i` is `M`-CS-Rickart iff every `N_i` is (and dually).
fn finite_iff(e: &Engine, ms: &[FiniteModule], out: &mut Outcome) -> Result<()> {
    let checks = sweep(&triples(ms), |(x, y, z)| iff_pair(e, x, &[y, z], ""))?;
    out.absorb(checks);
    Ok(())
}

fn triple_iff(e: &Engine, ms: &[FiniteModule], out: &mut Outcome) -> Result<()> {
    let mut items = Vec::new();
    for x in ms {
        for (i, y) in ms.iter().enumerate() {
            for (j, z) in ms.iter().enumerate().skip(i) {
                for w in &ms[j..] {
                    items.push((x.clone(), y.clone(), z.clone(), w.clone()));
                }
            }
        }
    }
    let checks = sweep(&items, |(x, y, z, w)| iff_pair(e, x, &[y, z, w], ""))?;
    out.absorb(checks);
    Ok(())
}

/// A self-CS-Rickart `M1 ⊕ M2` has `Mi` `Mj`-CS-Rickart for all `i, j`
/// (and dually). Also records pairs showing the converse fails.
fn necessary(e: &Engine, ms: &[FiniteModule], sum_bound: usize, out: &mut Outcome) -> Result<()> {
    let items = bounded_pairs(ms, sum_bound);
    let results: Vec<(Check, bool, bool)> = items
        .par_iter()
        .map(|(a, b)| {
            let mut c = Check::default();
            let s = sum_of(a, b)?;
            let ab = [(a, a), (a, b), (b, a), (b, b)];
            let mut converse = [false; 2];
            for (k, (p, sum_prop)) in [
                (Property::CsRickart, Property::CsRickart),
                (Property::DualCsRickart, Property::DualCsRickart),
            ]
            .into_iter()
            .enumerate()
            {
                let all = ab
                    .iter()
                    .map(|(x, y)| rel(e, p, x, y))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .all(|v| v);
                let whole = e.decide(sum_prop, &s)?;
                let tag = if k == 0 { "" } else { "(dual) " };
                if whole {
                    c.record(
                        all,
                        || format!("{tag}M1 = {a}, M2 = {b}"),
                        || format!("{p} fails for some pair (Mi, Mj)"),
                    );
                } else {
                    c.evaluated += 1;
                    converse[k] = all;
                }
            }
            Ok((c, converse[0], converse[1]))
        })
        .collect::<Result<_>>()?;
    let mut checks = Vec::new();
    for (k, (check, c0, c1)) in results.into_iter().enumerate() {
        let (a, b) = &items[k];
        if c0 {
            out.notes.push(format!(
                "converse fails: {a} and {b} are pairwise CS-Rickart but {a} + {b} is not self-CS-Rickart"
            ));
        }
        if c1 {
            out.notes.push(format!(
                "converse fails (dual): {a} and {b} are pairwise dual CS-Rickart but {a} + {b} is not dual self-CS-Rickart"
            ));
        }
        checks.push(check);
    }
    out.absorb(checks);
    out.notes
        .push(format!("pairs with |M1|*|M2| <= {sum_bound}"));
    Ok(())
}

/// With `M` SSIP-extending, `N1 ⊕ N2` is `M`-CS-Rickart iff both `Ni` are;
/// with `N` SSSP-lifting, `N` is dual `M1 ⊕ M2`-CS-Rickart iff dual `Mi`-CS-Rickart
/// for both.
fn ssip(e: &Engine, ms: &[FiniteModule], out: &mut Outcome) -> Result<()> {
    let checks = sweep(&triples(ms), |(x, y, z)| {
        let mut c = Check::default();
        let s = sum_of(y, z)?;
        if e.decide(Property::SipExtending, x)? {
            let each = rel(e, Property::CsRickart, x, y)? && rel(e, Property::CsRickart, x, z)?;
            let whole = rel(e, Property::CsRickart, x, &s)?;
            c.record(
                each == whole,
                || format!("M = {x}, N1 = {y}, N2 = {z}"),
                || format!("each: {each}, product: {whole}"),
            );
        }
        if e.decide(Property::SspLifting, x)? {
            let each =
                rel(e, Property::DualCsRickart, y, x)? && rel(e, Property::DualCsRickart, z, x)?;
            let whole = rel(e, Property::DualCsRickart, &s, x)?;
            c.record(
                each == whole,
                || format!("(dual) N = {x}, M1 = {y}, M2 = {z}"),
                || format!("each: {each}, coproduct: {whole}"),
            );
        }
        Ok(c)
    })?;
    out.absorb(checks);
    Ok(())
}

/// With `Hom(M1, M2) = 0 = Hom(M2, M1)`, `M1 ⊕ M2` is (dual) self-CS-Rickart
/// iff both summands are. Orthogonal pairs are detected by hom counts.
fn orthogonal(e: &Engine, ms: &[FiniteModule], sum_bound: usize, out: &mut Outcome) -> Result<()> {
    let mut items = Vec::new();
    for (i, a) in ms.iter().enumerate() {
        for b in &ms[i + 1..] {
            if a.size() * b.size() > sum_bound {
                continue;
            }
            let forward = HomSpace::new(a, b)?.count(e.limits())?;
            let back = HomSpace::new(b, a)?.count(e.limits())?;
            if forward == 1 && back == 1 {
                items.push((a.clone(), b.clone()));
            }
        }
    }
    let checks = sweep(&items, |(a, b)| {
        let mut c = Check::default();
        let s = sum_of(a, b)?;
        for (k, p) in [Property::CsRickart, Property::DualCsRickart]
            .into_iter()
            .enumerate()
        {
            let parts = e.decide(p, a)? && e.decide(p, b)?;
            let whole = e.decide(p, &s)?;
            let tag = if k == 0 { "" } else { "(dual) " };
            c.record(
                parts == whole,
                || format!("{tag}M1 = {a}, M2 = {b}"),
                || format!("{p}: summands {parts}, sum {whole}"),
            );
        }
        Ok(c)
    })?;
    out.notes.push(format!(
        "{} orthogonal pairs with |M1|*|M2| <= {sum_bound}",
        items.len()
    ));
    out.absorb(checks);
    Ok(())
}

const SERIAL_PROPERTIES: [Property; 4] = [
    Property::Extending,
    Property::Lifting,
    Property::CsRickart,
    Property::DualCsRickart,
];

/// Over `Z_n`: every module has all four properties iff `J(Z_n)^2 = 0`.
fn serial(e: &Engine, n: u64, max_order: usize, out: &mut Outcome) -> Result<()> {
    let stream = enumerate_modules_over_zn_with_limits(n, max_order, e.limits())?;
    let arithmetic = zn_radical_squares_to_zero(n);
    let computed = radical_squares_to_zero(&stream.ring)?;
    out.instances += 1;
    if arithmetic != computed {
        out.violations.push(Violation {
            instance: format!("ring Z_{n}"),
            witness: format!("prime exponents give J^2 = 0: {arithmetic}; radical of the regular module gives {computed}"),
        });
    }
    out.notes.push(format!("J(Z_{n})^2 = 0: {arithmetic}"));
    let table: Vec<Vec<bool>> = stream
        .modules
        .par_iter()
        .map(|m| {
            SERIAL_PROPERTIES
                .iter()
                .map(|&p| e.decide(p, m))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    for (k, &p) in SERIAL_PROPERTIES.iter().enumerate() {
        let failing: Vec<&FiniteModule> = stream
            .modules
            .iter()
            .zip(&table)
            .filter(|(_, row)| !row[k])
            .map(|(m, _)| m)
            .collect();
        if arithmetic {
            for m in &stream.modules {
                out.instances += 1;
                if failing.contains(&m) {
                    out.violations.push(Violation {
                        instance: format!("{m} over Z_{n}"),
                        witness: why_self(e, p, m),
                    });
                }
            }
        } else {
            out.instances += 1;
            match failing.first() {
                Some(m) => out
                    .notes
                    .push(format!("{p} fails for {m} ({})", why_self(e, p, m))),
                None => out.violations.push(Violation {
                    instance: format!("modules over Z_{n} of order <= {max_order}"),
                    witness: format!("J^2 != 0 but every module is {p}"),
                }),
            }
        }
    }
    out.notes.push(format!(
        "{} modules over Z_{n} of order <= {max_order}",
        stream.len()
    ));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(max: usize) -> StreamParams {
        StreamParams {
            max_order: Some(max),
            max_sum_order: Some(32),
            ring: None,
        }
    }

    #[test]
    fn every_id_passes_on_small_streams() {
        let e = Engine::default();
        for id in THEOREM_IDS {
            let r = verify_theorem(id, &small(8), &e).unwrap();
            assert!(r.passed(), "{id}: {:?}", r.violations);
            assert!(r.instances > 0, "{id}");
        }
    }

    #[test]
    fn unknown_id() {
        assert_eq!(
            verify_theorem("T-baer", &StreamParams::default(), &Engine::default()).unwrap_err(),
            Error::UnknownTheorem("T-baer".into())
        );
    }

    #[test]
    fn serial_branches() {
        let e = Engine::default();
        let six = StreamParams {
            max_order: Some(36),
            ring: Some(6),
            ..Default::default()
        };
        assert!(verify_theorem("C-serial", &six, &e).unwrap().passed());
        let eight = StreamParams {
            max_order: Some(64),
            ring: Some(8),
            ..Default::default()
        };
        let r = verify_theorem("C-serial", &eight, &e).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert!(r.notes.iter().any(|n| n.starts_with("cs-rickart fails")));
    }
}
