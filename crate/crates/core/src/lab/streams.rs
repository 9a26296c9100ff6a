//! Deterministic instance streams: one module per isomorphism class.

use std::cmp::Reverse;

use crate::arith::{factorize, invariant_factors_from_partitions};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::module::{FiniteModule, ModuleSpec};
use crate::ring::FiniteRing;

/// Modules over one ring, up to a size bound, in a fixed order.
#[derive(Debug, Clone)]
pub struct InstanceStream {
    pub ring: FiniteRing,
    pub max_order: usize,
    pub modules: Vec<FiniteModule>,
}

impl InstanceStream {
    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FiniteModule> {
        self.modules.iter()
    }

    /// Ordered pairs `(a, b)` of stream members.
    pub fn pairs(&self) -> Vec<(FiniteModule, FiniteModule)> {
        let mut out = Vec::new();
        for a in &self.modules {
            for b in &self.modules {
                out.push((a.clone(), b.clone()));
            }
        }
        out
    }
}

fn partitions(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=n.min(max)).rev() {
        prefix.push(part);
        partitions(n - part, part, prefix, out);
        prefix.pop();
    }
}

/// Invariant-factor lists of all abelian groups of order `n`, cyclic first.
pub fn abelian_group_types(n: u64) -> Vec<Vec<u64>> {
    let mut types: Vec<Vec<(u64, Vec<u32>)>> = vec![Vec::new()];
    for (p, e) in factorize(n) {
        let mut parts = Vec::new();
        partitions(e, e, &mut Vec::new(), &mut parts);
        types = types
            .iter()
            .flat_map(|t| {
                parts.iter().map(move |part| {
                    let mut t = t.clone();
                    t.push((p, part.clone()));
                    t
                })
            })
            .collect();
    }
    let mut out: Vec<Vec<u64>> = types
        .iter()
        .map(|t| invariant_factors_from_partitions(t))
        .collect();
    // largest factor first, compared from the top down
    out.sort_by_key(|t| Reverse(t.iter().rev().copied().collect::<Vec<_>>()));
    out
}

/// One abelian group per isomorphism class of order at most `max_order`,
/// by increasing order, presented by invariant factors.
pub fn enumerate_abelian_groups(max_order: usize) -> Result<InstanceStream> {
    enumerate_abelian_groups_with_limits(max_order, &Limits::default())
}

pub fn enumerate_abelian_groups_with_limits(
    max_order: usize,
    limits: &Limits,
) -> Result<InstanceStream> {
    let ring = FiniteRing::integers();
    let modules = typed_stream(&ring, max_order, limits, |_| true)?;
    Ok(InstanceStream {
        ring,
        max_order,
        modules,
    })
}

/// The finite `Z_n`-modules of order at most `max_order`: abelian groups
/// whose exponent divides `n`.
pub fn enumerate_modules_over_zn(n: u64, max_order: usize) -> Result<InstanceStream> {
    enumerate_modules_over_zn_with_limits(n, max_order, &Limits::default())
}

pub fn enumerate_modules_over_zn_with_limits(
    n: u64,
    max_order: usize,
    limits: &Limits,
) -> Result<InstanceStream> {
    let ring = FiniteRing::with_limits(crate::ring::RingSpec::Zn(n), limits)?;
    let modules = typed_stream(&ring, max_order, limits, |t| {
        t.last().is_none_or(|&d| n.is_multiple_of(d))
    })?;
    Ok(InstanceStream {
        ring,
        max_order,
        modules,
    })
}

fn typed_stream(
    ring: &FiniteRing,
    max_order: usize,
    limits: &Limits,
    keep: impl Fn(&[u64]) -> bool,
) -> Result<Vec<FiniteModule>> {
    Limits::check(
        "stream order bound",
        max_order as u128,
        limits.max_module_size as u128,
    )?;
    if max_order == 0 {
        return Err(Error::Malformed("max order must be at least 1".into()));
    }
    let mut out = Vec::new();
    for n in 1..=max_order as u64 {
        for t in abelian_group_types(n) {
            if keep(&t) {
                out.push(module_of_type(ring, &t)?);
            }
        }
    }
    Ok(out)
}

/// `Z_{d_1} + ... + Z_{d_k}` over the given ring.
pub fn module_of_type(ring: &FiniteRing, factors: &[u64]) -> Result<FiniteModule> {
    let orders: Vec<i64> = factors.iter().map(|&d| d as i64).collect();
    FiniteModule::new(ring, ModuleSpec::orders(&orders))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_types(n: u64) -> usize {
        abelian_group_types(n).len()
    }

    #[test]
    fn group_counts() {
        assert_eq!(enumerate_abelian_groups(4).unwrap().len(), 5);
        assert_eq!(enumerate_abelian_groups(16).unwrap().len(), 25);
        assert_eq!(enumerate_abelian_groups(1).unwrap().len(), 1);
        assert_eq!(count_types(16), 5);
        assert_eq!(count_types(64), 11);
        assert_eq!(count_types(72), 6);
        assert_eq!(
            abelian_group_types(16),
            vec![
                vec![16],
                vec![2, 8],
                vec![4, 4],
                vec![2, 2, 4],
                vec![2, 2, 2, 2]
            ]
        );
    }

    #[test]
    fn zn_modules() {
        let orders = |s: &InstanceStream| -> Vec<Vec<u64>> {
            s.iter().map(|m| m.orders().to_vec()).collect()
        };
        let s = enumerate_modules_over_zn(4, 8).unwrap();
        assert_eq!(
            orders(&s),
            vec![
                vec![],
                vec![2],
                vec![4],
                vec![2, 2],
                vec![2, 4],
                vec![2, 2, 2]
            ]
        );
        assert_eq!(enumerate_modules_over_zn(2, 8).unwrap().len(), 4);
        let one = enumerate_modules_over_zn(1, 50).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one.modules[0].is_zero());
    }

    #[test]
    fn bounds_are_checked() {
        assert!(matches!(
            enumerate_abelian_groups(513),
            Err(Error::CapExceeded { .. })
        ));
    }
}
