//! Finite right modules over a [`FiniteRing`] (or abelian groups over the
//! integers), with dense element indexing and exhaustive validation.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::arith::invariant_factors;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::radix::Radix;
use crate::ring::{FiniteRing, RingTag};

/// Description accepted by [`FiniteModule::new`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModuleSpec {
    pub orders: Vec<i64>,
    /// `action[i][j]` is the coefficient vector of `g_j * e_i`. Required for
    /// custom rings, ignored for the integers and residue rings.
    pub action: Option<Vec<Vec<Vec<u64>>>>,
}

impl ModuleSpec {
    pub fn orders(orders: &[i64]) -> Self {
        ModuleSpec {
            orders: orders.to_vec(),
            action: None,
        }
    }
}

struct ModuleData {
    ring: FiniteRing,
    radix: Radix,
    size: usize,
    action: Vec<Vec<Vec<u64>>>,
    tables: OnceLock<Tables>,
}

struct Tables {
    digits: Vec<u32>,
    add: Vec<u32>,
    neg: Vec<u32>,
    order: Vec<u64>,
    /// For `x > 0`: `x = pred.0 + g_{pred.1}`.
    pred: Vec<(u32, u32)>,
    /// `act[i][x] = x * e_i` for each ring generator.
    act: Vec<Vec<u32>>,
}

/// A validated finite module. Cloning is cheap; equality is structural.
#[derive(Clone)]
pub struct FiniteModule(Arc<ModuleData>);

impl FiniteModule {
    /// `Z_{o_1} + ... + Z_{o_t}` as a module over the integers.
    pub fn abelian_group(orders: &[i64]) -> Result<Self> {
        Self::new(&FiniteRing::integers(), ModuleSpec::orders(orders))
    }

    /// Abelian group of exponent dividing `n`, viewed as a `Z_n`-module.
    pub fn over_zn(n: u64, orders: &[i64]) -> Result<Self> {
        Self::new(&FiniteRing::zn(n)?, ModuleSpec::orders(orders))
    }

    pub fn zero(ring: &FiniteRing) -> Self {
        Self::new(ring, ModuleSpec::orders(&[])).expect("the zero module is always valid")
    }

    pub fn new(ring: &FiniteRing, spec: ModuleSpec) -> Result<Self> {
        Self::with_limits(ring, spec, &Limits::default())
    }

    pub fn with_limits(ring: &FiniteRing, spec: ModuleSpec, limits: &Limits) -> Result<Self> {
        if let Some(&o) = spec.orders.iter().find(|&&o| o <= 0) {
            return Err(Error::InvalidOrder(o));
        }
        let orders: Vec<u64> = spec.orders.iter().map(|&o| o as u64).collect();
        let radix = Radix::new(&orders);
        Limits::check(
            "module carrier",
            radix.size(),
            limits.max_module_size as u128,
        )?;
        let t = orders.len();
        let action = match ring.tag() {
            RingTag::Integers => Vec::new(),
            RingTag::Zn(n) => {
                if let Some(&o) = orders.iter().find(|&&o| n % o != 0) {
                    return Err(Error::OrderDivisibility {
                        order: o,
                        modulus: n,
                    });
                }
                vec![(0..t).map(|j| unit_vector(t, j)).collect()]
            }
            RingTag::Custom => {
                let action = spec.action.ok_or_else(|| {
                    Error::Malformed("modules over a custom ring need action constants".into())
                })?;
                if action.len() != ring.generator_count()
                    || action
                        .iter()
                        .any(|row| row.len() != t || row.iter().any(|c| c.len() != t))
                {
                    return Err(Error::ShapeMismatch(format!(
                        "action table must be {} x {} vectors of length {}",
                        ring.generator_count(),
                        t,
                        t
                    )));
                }
                action
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|c| radix.reduce(&c.iter().map(|&x| x as i64).collect::<Vec<_>>()))
                            .collect()
                    })
                    .collect()
            }
        };
        let module = FiniteModule(Arc::new(ModuleData {
            ring: ring.clone(),
            size: radix.size() as usize,
            radix,
            action,
            tables: OnceLock::new(),
        }));
        if !ring.is_integers() {
            module.validate()?;
        }
        Ok(module)
    }

    /// The ring acting on itself from the right.
    pub fn regular(ring: &FiniteRing) -> Result<Self> {
        if ring.is_integers() {
            return Err(Error::Malformed(
                "the integers have no finite regular module".into(),
            ));
        }
        let t = ring.generator_count();
        let mul = ring.structure_constants();
        // g_j * e_i = e_j e_i
        let action = (0..t)
            .map(|i| (0..t).map(|j| mul[j][i].clone()).collect())
            .collect();
        let orders = ring.orders().iter().map(|&o| o as i64).collect();
        Self::new(
            ring,
            ModuleSpec {
                orders,
                action: Some(action),
            },
        )
    }

    /// Exhaustive re-check of the module axioms on the full carrier.
    pub fn validate(&self) -> Result<()> {
        let ring = self.ring();
        if ring.is_integers() {
            return Ok(());
        }
        let t = self.generator_count();
        for (i, row) in self.0.action.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                let checks = [
                    (self.orders()[j], format!("g{}", j + 1)),
                    (ring.orders()[i], format!("e{}", i + 1)),
                ];
                for (o, who) in checks {
                    if !Radix::is_zero(&self.0.radix.scale(c, o)) {
                        return Err(Error::AxiomViolation {
                            axiom: "well-definedness".into(),
                            witness: format!(
                                "order {o} of {who} does not annihilate g{} * e{} = {c:?}",
                                j + 1,
                                i + 1
                            ),
                        });
                    }
                }
            }
        }
        let n = self.size();
        let rs = ring.size();
        let table = self.action_table();
        let at = |x: usize, r: usize| table[x * rs + r] as usize;
        let one = ring.unit_index();
        let show = |x: usize| format!("{:?}", self.coeffs(x));
        let show_r = |r: usize| format!("{:?}", ring.element(r));
        for x in 0..n {
            if at(x, one) != x {
                return Err(Error::AxiomViolation {
                    axiom: "unit action".into(),
                    witness: format!("{} * 1 = {}", show(x), show(at(x, one))),
                });
            }
        }
        for x in 0..n {
            for r in 0..rs {
                let xr = at(x, r);
                for s in 0..rs {
                    if at(xr, s) != at(x, ring.mul(r, s)) {
                        return Err(Error::AxiomViolation {
                            axiom: "action associativity".into(),
                            witness: format!(
                                "({} * {}) * {} != {} * ({} {})",
                                show(x),
                                show_r(r),
                                show_r(s),
                                show(x),
                                show_r(r),
                                show_r(s)
                            ),
                        });
                    }
                    if at(x, ring.add(r, s)) != self.add(xr, at(x, s)) {
                        return Err(Error::AxiomViolation {
                            axiom: "right distributivity".into(),
                            witness: format!("{} * ({} + {})", show(x), show_r(r), show_r(s)),
                        });
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = self.add(x, y);
                for r in 0..rs {
                    if at(xy, r) != self.add(at(x, r), at(y, r)) {
                        return Err(Error::AxiomViolation {
                            axiom: "left distributivity".into(),
                            witness: format!("({} + {}) * {}", show(x), show(y), show_r(r)),
                        });
                    }
                }
            }
        }
        let _ = t;
        Ok(())
    }

    /// `x * r` for every element and every ring element, row-major by `x`.
    fn action_table(&self) -> Vec<u32> {
        let ring = self.ring();
        let rs = ring.size();
        let mut out = vec![0u32; self.size() * rs];
        for x in 0..self.size() {
            for r in 0..rs {
                out[x * rs + r] = self.act(x, r) as u32;
            }
        }
        out
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.0.ring
    }

    pub fn orders(&self) -> &[u64] {
        self.0.radix.orders()
    }

    pub fn generator_count(&self) -> usize {
        self.orders().len()
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn is_zero(&self) -> bool {
        self.0.size == 1
    }

    pub fn radix(&self) -> &Radix {
        &self.0.radix
    }

    pub fn action_constants(&self) -> &[Vec<Vec<u64>>] {
        &self.0.action
    }

    pub fn same_ring(&self, other: &FiniteModule) -> Result<()> {
        if self.ring() == other.ring() {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn tables(&self) -> &Tables {
        self.0.tables.get_or_init(|| self.build_tables())
    }

    fn build_tables(&self) -> Tables {
        let n = self.size();
        let t = self.generator_count();
        let radix = &self.0.radix;
        let orders = radix.orders();
        let strides = radix.strides();
        let mut digits = vec![0u32; n * t];
        for x in 0..n {
            for (k, d) in radix.decode(x).into_iter().enumerate() {
                digits[x * t + k] = d as u32;
            }
        }
        let dig = |x: usize, k: usize| digits[x * t + k] as u64;
        let mut add = vec![0u32; n * n];
        let mut neg = vec![0u32; n];
        for x in 0..n {
            for y in 0..n {
                let mut s = 0u64;
                for k in 0..t {
                    s += (dig(x, k) + dig(y, k)) % orders[k] * strides[k];
                }
                add[x * n + y] = s as u32;
            }
            let mut s = 0u64;
            for k in 0..t {
                s += (orders[k] - dig(x, k)) % orders[k] * strides[k];
            }
            neg[x] = s as u32;
        }
        let mut order = vec![1u64; n];
        for (x, o) in order.iter_mut().enumerate() {
            *o = (0..t)
                .map(|k| orders[k] / crate::arith::gcd(orders[k], dig(x, k)))
                .fold(1, crate::arith::lcm);
        }
        let mut pred = vec![(0u32, 0u32); n];
        for (x, p) in pred.iter_mut().enumerate().skip(1) {
            let j = (0..t)
                .rev()
                .find(|&k| dig(x, k) != 0)
                .expect("nonzero element");
            *p = ((x as u64 - strides[j]) as u32, j as u32);
        }
        let act = self
            .0
            .action
            .iter()
            .map(|row| {
                let gens: Vec<usize> = row.iter().map(|c| radix.encode_reduced(c)).collect();
                let mut tab = vec![0u32; n];
                for x in 1..n {
                    let (p, j) = pred[x];
                    tab[x] = add[tab[p as usize] as usize * n + gens[j as usize]];
                }
                tab
            })
            .collect();
        Tables {
            digits,
            add,
            neg,
            order,
            pred,
            act,
        }
    }

    pub fn coeffs(&self, x: usize) -> Vec<u64> {
        let t = self.generator_count();
        if self.0.tables.get().is_some() {
            self.tables().digits[x * t..(x + 1) * t]
                .iter()
                .map(|&d| d as u64)
                .collect()
        } else {
            self.0.radix.decode(x)
        }
    }

    pub fn encode(&self, coeffs: &[i64]) -> usize {
        self.0.radix.encode(coeffs)
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.tables().add[x * self.size() + y] as usize
    }

    /// The dense addition table, row-major.
    pub fn add_table(&self) -> &[u32] {
        &self.tables().add
    }

    pub fn neg(&self, x: usize) -> usize {
        self.tables().neg[x] as usize
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }

    /// Additive order of an element.
    pub fn element_order(&self, x: usize) -> u64 {
        self.tables().order[x]
    }

    /// Decomposition `x = pred + g_j` used for incremental evaluation.
    pub fn predecessor(&self, x: usize) -> (usize, usize) {
        let (p, j) = self.tables().pred[x];
        (p as usize, j as usize)
    }

    /// Index of the `j`-th generator; 0 when its order is 1.
    pub fn generator(&self, j: usize) -> usize {
        if self.orders()[j] == 1 {
            0
        } else {
            self.0.radix.strides()[j] as usize
        }
    }

    /// `n * x`.
    pub fn scale(&self, x: usize, n: u64) -> usize {
        let r = &self.0.radix;
        r.encode_reduced(&r.scale(&self.coeffs(x), n))
    }

    /// `x * e_i` for a ring generator.
    pub fn act_generator(&self, x: usize, i: usize) -> usize {
        self.tables().act[i][x] as usize
    }

    /// `x * r` for a ring element given by index. Over the integers use
    /// [`FiniteModule::scale`].
    pub fn act(&self, x: usize, r: usize) -> usize {
        let ring = self.ring();
        let rc = ring.element(r);
        let mut acc = 0;
        for (i, &c) in rc.iter().enumerate() {
            if c != 0 {
                let xi = self.act_generator(x, i);
                acc = self.add(acc, self.scale(xi, c));
            }
        }
        acc
    }

    /// Elements of the cyclic submodule `xR`, sorted.
    pub fn cyclic_span(&self, x: usize) -> Vec<usize> {
        let mut out: Vec<usize> = if self.ring().tag() == RingTag::Custom {
            (0..self.ring().size()).map(|r| self.act(x, r)).collect()
        } else {
            let o = self.element_order(x);
            let mut v = Vec::with_capacity(o as usize);
            let mut cur = 0;
            for _ in 0..o {
                v.push(cur);
                cur = self.add(cur, x);
            }
            v
        };
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Invariant factors `d_1 | ... | d_k`, ascending; empty for the zero
    /// module. Two modules over Z or Z_n are isomorphic iff these agree.
    pub fn canonical_form(&self) -> Result<Vec<u64>> {
        if !self.ring().is_abelian_group_ring() {
            return Err(Error::NotAbelianRing);
        }
        Ok(invariant_factors(self.orders()))
    }

    /// The same abelian group presented by its invariant factors.
    pub fn canonical(&self) -> Result<FiniteModule> {
        let cf = self.canonical_form()?;
        FiniteModule::new(
            self.ring(),
            ModuleSpec::orders(&cf.iter().map(|&d| d as i64).collect::<Vec<_>>()),
        )
    }
}

fn unit_vector(t: usize, j: usize) -> Vec<u64> {
    (0..t).map(|k| u64::from(k == j)).collect()
}

impl PartialEq for FiniteModule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.ring == other.0.ring
                && self.0.radix == other.0.radix
                && self.0.action == other.0.action)
    }
}

impl Eq for FiniteModule {}

impl Hash for FiniteModule {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.ring.hash(state);
        self.orders().hash(state);
        self.0.action.hash(state);
    }
}

impl fmt::Debug for FiniteModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FiniteModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = if self.orders().iter().all(|&o| o == 1) {
            "0".to_string()
        } else {
            self.orders()
                .iter()
                .map(|o| format!("Z_{o}"))
                .collect::<Vec<_>>()
                .join(" ⊕ ")
        };
        match self.ring().tag() {
            RingTag::Integers => write!(f, "{body}"),
            RingTag::Zn(n) => write!(f, "{body} over Z_{n}"),
            RingTag::Custom => write!(f, "{body} over {}", self.ring()),
        }
    }
}

/// An element of a module, as a reduced coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    owner: FiniteModule,
    coeffs: Vec<u64>,
}

impl Element {
    pub fn new(owner: &FiniteModule, coeffs: &[i64]) -> Result<Self> {
        if coeffs.len() != owner.generator_count() {
            return Err(Error::ShapeMismatch(format!(
                "element has {} coefficients, module has {} generators",
                coeffs.len(),
                owner.generator_count()
            )));
        }
        Ok(Element {
            owner: owner.clone(),
            coeffs: owner.radix().reduce(coeffs),
        })
    }

    pub fn from_index(owner: &FiniteModule, index: usize) -> Self {
        Element {
            owner: owner.clone(),
            coeffs: owner.coeffs(index),
        }
    }

    pub fn owner(&self) -> &FiniteModule {
        &self.owner
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn index(&self) -> usize {
        self.owner.radix().encode_reduced(&self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    #[test]
    fn abelian_groups() {
        assert_eq!(FiniteModule::abelian_group(&[4]).unwrap().size(), 4);
        assert_eq!(FiniteModule::abelian_group(&[1]).unwrap().size(), 1);
        assert!(FiniteModule::abelian_group(&[1]).unwrap().is_zero());
        assert_eq!(FiniteModule::abelian_group(&[2, 16]).unwrap().size(), 32);
        assert_eq!(
            FiniteModule::abelian_group(&[0, 3]).unwrap_err(),
            Error::InvalidOrder(0)
        );
        assert_eq!(
            FiniteModule::abelian_group(&[-2]).unwrap_err(),
            Error::InvalidOrder(-2)
        );
    }

    #[test]
    fn zn_modules() {
        let m = FiniteModule::over_zn(4, &[4]).unwrap();
        assert_eq!(m.size(), 4);
        assert_eq!(
            m,
            FiniteModule::regular(&FiniteRing::zn(4).unwrap()).unwrap()
        );
        assert_eq!(FiniteModule::over_zn(8, &[2, 8]).unwrap().size(), 16);
        assert_eq!(
            FiniteModule::over_zn(4, &[3]).unwrap_err(),
            Error::OrderDivisibility {
                order: 3,
                modulus: 4
            }
        );
    }

    #[test]
    fn tables_and_orders() {
        let m = FiniteModule::abelian_group(&[2, 16]).unwrap();
        let x = m.encode(&[1, 4]);
        assert_eq!(m.element_order(x), 4);
        assert_eq!(m.coeffs(m.add(x, x)), vec![0, 8]);
        assert_eq!(m.neg(x), m.encode(&[1, 12]));
        assert_eq!(m.scale(x, 3), m.encode(&[1, 12]));
        assert_eq!(m.cyclic_span(x).len(), 4);
        for y in 1..m.size() {
            let (p, j) = m.predecessor(y);
            assert_eq!(m.add(p, m.generator(j)), y);
        }
    }

    #[test]
    fn canonical_forms() {
        let cf = |o: &[i64]| {
            FiniteModule::abelian_group(o)
                .unwrap()
                .canonical_form()
                .unwrap()
        };
        assert_eq!(cf(&[2, 16]), vec![2, 16]);
        assert_eq!(cf(&[4, 6]), vec![2, 12]);
        assert_eq!(cf(&[1]), Vec::<u64>::new());
    }

    #[test]
    fn custom_module_over_product_ring() {
        let ring = FiniteRing::new(RingSpec::Custom {
            orders: vec![2, 2],
            unit: vec![1, 1],
            mul: vec![vec![vec![1, 0], vec![0, 0]], vec![vec![0, 0], vec![0, 1]]],
        })
        .unwrap();
        let reg = FiniteModule::regular(&ring).unwrap();
        assert_eq!(reg.size(), 4);
        reg.validate().unwrap();
        // a single generator acted on by both idempotents violates the unit law
        let bad = FiniteModule::new(
            &ring,
            ModuleSpec {
                orders: vec![2],
                action: Some(vec![vec![vec![1]], vec![vec![1]]]),
            },
        )
        .unwrap_err();
        assert!(matches!(bad, Error::AxiomViolation { .. }));
        assert!(matches!(reg.canonical_form(), Err(Error::NotAbelianRing)));
    }

    #[test]
    fn elements() {
        let m = FiniteModule::abelian_group(&[2, 16]).unwrap();
        let e = Element::new(&m, &[3, -1]).unwrap();
        assert_eq!(e.coeffs(), &[1, 15]);
        assert_eq!(Element::from_index(&m, e.index()), e);
        assert!(Element::new(&m, &[1]).is_err());
    }
}
