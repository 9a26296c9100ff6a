//! Counterexample search for `hypothesis ⟹ conclusion` over bounded streams.

use std::fmt;

use crate::error::Result;
use crate::hom::direct_sum;
use crate::lab::expr::{Expr, Subject};
use crate::lab::streams::{
    enumerate_abelian_groups_with_limits, enumerate_modules_over_zn_with_limits,
};
use crate::module::FiniteModule;
use crate::properties::{Engine, Property, Witness};

/// Search bounds. Single modules have order at most `max_order`; pairs have
/// `|a| * |b|` at most `max_order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_order: usize,
    /// `Some(n)` searches modules over `Z_n`, `None` abelian groups.
    pub ring: Option<u64>,
}

/// One atom evaluated on the counterexample.
#[derive(Debug, Clone)]
pub struct AtomValue {
    pub atom: String,
    pub value: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    /// The module (single search) or the pair `a`, `b`.
    pub modules: Vec<FiniteModule>,
    /// `a ⊕ b` for pair searches.
    pub sum: Option<FiniteModule>,
    /// Every atom of hypothesis and conclusion with its value and witness.
    pub chain: Vec<AtomValue>,
    /// Instances examined before and including this one.
    pub examined: usize,
}

impl Counterexample {
    /// The module in which the conclusion fails: the single module or `a ⊕ b`.
    pub fn instance(&self) -> &FiniteModule {
        self.sum.as_ref().unwrap_or(&self.modules[0])
    }

    /// The first witness in the chain attached to a false atom.
    pub fn primary_witness(&self) -> Option<&Witness> {
        self.chain
            .iter()
            .filter(|a| !a.value)
            .find_map(|a| a.witness.as_ref())
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.sum, self.modules.as_slice()) {
            (Some(s), [a, b]) => writeln!(f, "a = {a}, b = {b}, a+b = {s}")?,
            _ => writeln!(f, "M = {}", self.modules[0])?,
        }
        for a in &self.chain {
            write!(f, "  {} = {}", a.atom, a.value)?;
            if let Some(w) = &a.witness {
                write!(f, "; witness: {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

struct Instance {
    modules: Vec<FiniteModule>,
    sum: Option<FiniteModule>,
}

impl Instance {
    fn resolve(&self, s: Subject) -> &FiniteModule {
        match (s, &self.sum) {
            (Subject::A, Some(_)) => &self.modules[0],
            (Subject::B, Some(_)) => &self.modules[1],
            (_, Some(sum)) => sum,
            (_, None) => &self.modules[0],
        }
    }

    fn pair(&self, prop: Property, subjects: &[Subject]) -> (FiniteModule, FiniteModule) {
        match subjects {
            [] => {
                let m = self.resolve(Subject::Module).clone();
                (m.clone(), m)
            }
            [x] => {
                let m = self.resolve(*x).clone();
                (m.clone(), m)
            }
            [x, y] => {
                debug_assert!(prop.is_relative());
                (self.resolve(*x).clone(), self.resolve(*y).clone())
            }
            _ => unreachable!("atoms have at most two subjects"),
        }
    }
}

/// Returns the first instance satisfying `hypothesis ∧ ¬conclusion`.
///
/// Single-module searches follow stream order. When either expression
/// mentions `a`, `b` or `a+b`, ordered pairs are searched by increasing
/// `|a| * |b|`, then by stream position of `a`, then of `b`.
pub fn search_counterexample(
    hypothesis: &Expr,
    conclusion: &Expr,
    bounds: &SearchBounds,
    engine: &Engine,
) -> Result<Option<Counterexample>> {
    let limits = engine.limits();
    let pair_mode = hypothesis.mentions_pair() || conclusion.mentions_pair();
    let stream = match bounds.ring {
        Some(n) => enumerate_modules_over_zn_with_limits(n, bounds.max_order, limits)?,
        None => enumerate_abelian_groups_with_limits(bounds.max_order, limits)?,
    };
    let instances: Vec<(usize, usize)> = if pair_mode {
        let ms = &stream.modules;
        let mut v: Vec<(usize, usize)> = (0..ms.len())
            .flat_map(|i| (0..ms.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| ms[i].size() * ms[j].size() <= bounds.max_order)
            .collect();
        v.sort_by_key(|&(i, j)| (ms[i].size() * ms[j].size(), i, j));
        v
    } else {
        (0..stream.len()).map(|i| (i, i)).collect()
    };
    for (k, &(i, j)) in instances.iter().enumerate() {
        let inst = if pair_mode {
            let (a, b) = (&stream.modules[i], &stream.modules[j]);
            Instance {
                modules: vec![a.clone(), b.clone()],
                sum: Some(direct_sum(a, b)?.module.canonical()?),
            }
        } else {
            Instance {
                modules: vec![stream.modules[i].clone()],
                sum: None,
            }
        };
        let mut decide = |prop: Property, subjects: &[Subject]| {
            let (x, y) = inst.pair(prop, subjects);
            if subjects.len() == 2 {
                engine.decide_relative(prop, &x, &y)
            } else {
                engine.decide(prop, &x)
            }
        };
        if !hypothesis.eval(&mut decide)? || conclusion.eval(&mut decide)? {
            continue;
        }
        let mut chain = Vec::new();
        for (prop, subjects) in hypothesis.atoms().into_iter().chain(conclusion.atoms()) {
            let (x, y) = inst.pair(prop, &subjects);
            let verdict = if subjects.len() == 2 {
                engine.explain_relative(prop, &x, &y)?
            } else {
                engine.explain(prop, &x)?
            };
            let atom = Expr::Atom { prop, subjects }.to_string();
            if chain.iter().any(|a: &AtomValue| a.atom == atom) {
                continue;
            }
            chain.push(AtomValue {
                atom,
                value: verdict.holds,
                witness: verdict.witness,
            });
        }
        return Ok(Some(Counterexample {
            modules: inst.modules,
            sum: inst.sum,
            chain,
            examined: k + 1,
        }));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(h: &str, c: &str, max: usize) -> Option<Counterexample> {
        let bounds = SearchBounds {
            max_order: max,
            ring: None,
        };
        search_counterexample(
            &Expr::parse(h).unwrap(),
            &Expr::parse(c).unwrap(),
            &bounds,
            &Engine::default(),
        )
        .unwrap()
    }

    #[test]
    fn extending_implies_cs_rickart() {
        assert!(run("extending", "cs-rickart(self)", 32).is_none());
    }

    #[test]
    fn tautology_has_no_counterexample() {
        assert!(run("rickart", "rickart | !rickart", 16).is_none());
    }

    #[test]
    fn first_group_without_sip() {
        let c = run("cs-rickart(self)", "sip", 16).unwrap();
        assert_eq!(c.modules[0].orders(), &[2, 4]);
        assert!(c
            .chain
            .iter()
            .any(|a| a.atom == "sip" && !a.value && a.witness.is_some()));
    }

    #[test]
    fn sip_extending_without_cs_rickart() {
        let c = run("sip-extending", "cs-rickart(self)", 32).unwrap();
        assert_eq!(c.instance().orders(), &[2, 8]);
        assert!(c.primary_witness().and_then(|w| w.hom.as_ref()).is_some());
    }

    #[test]
    fn pair_sum_loses_cs_rickart() {
        let c = run("cs-rickart(a) & cs-rickart(b)", "cs-rickart(a+b)", 32).unwrap();
        let orders: Vec<&[u64]> = c.modules.iter().map(|m| m.orders()).collect();
        assert_eq!(orders, vec![&[2][..], &[8][..]]);
    }

    #[test]
    fn deterministic() {
        let a = run("sip-extending", "cs-rickart(self)", 32).map(|c| c.to_string());
        let b = run("sip-extending", "cs-rickart(self)", 32).map(|c| c.to_string());
        assert_eq!(a, b);
    }
}
