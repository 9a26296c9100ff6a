//! Finite unital rings given by cyclic additive orders and structure
//! constants, plus the integers acting by repeated addition.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::radix::Radix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingTag {
    /// The initial ring; it has no finite carrier.
    Integers,
    Zn(u64),
    Custom,
}

/// Description accepted by [`FiniteRing::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingSpec {
    Integers,
    Zn(u64),
    Custom {
        orders: Vec<u64>,
        unit: Vec<u64>,
        /// `mul[i][j]` is the coefficient vector of `e_i * e_j`.
        mul: Vec<Vec<Vec<u64>>>,
    },
}

#[derive(Debug)]
struct RingData {
    tag: RingTag,
    radix: Radix,
    unit: Vec<u64>,
    mul: Vec<Vec<Vec<u64>>>,
    /// Full multiplication table on element indices (empty for the integers).
    table: Vec<u32>,
}

/// A validated finite ring. Cloning is cheap.
#[derive(Clone)]
pub struct FiniteRing(Arc<RingData>);

impl FiniteRing {
    pub fn integers() -> Self {
        FiniteRing(Arc::new(RingData {
            tag: RingTag::Integers,
            radix: Radix::new(&[]),
            unit: vec![],
            mul: vec![],
            table: vec![],
        }))
    }

    pub fn zn(n: u64) -> Result<Self> {
        Self::new(RingSpec::Zn(n))
    }

    pub fn new(spec: RingSpec) -> Result<Self> {
        Self::with_limits(spec, &Limits::default())
    }

    /// Builds and exhaustively validates a ring.
    pub fn with_limits(spec: RingSpec, limits: &Limits) -> Result<Self> {
        let (tag, orders, unit, mul) = match spec {
            RingSpec::Integers => return Ok(Self::integers()),
            RingSpec::Zn(n) => {
                if n == 0 {
                    return Err(Error::InvalidOrder(0));
                }
                let one = u64::from(n > 1);
                (RingTag::Zn(n), vec![n], vec![one], vec![vec![vec![one]]])
            }
            RingSpec::Custom { orders, unit, mul } => (RingTag::Custom, orders, unit, mul),
        };
        if let Some(&o) = orders.iter().find(|&&o| o == 0) {
            return Err(Error::InvalidOrder(o as i64));
        }
        let radix = Radix::new(&orders);
        Limits::check("ring carrier", radix.size(), limits.max_ring_size as u128)?;
        let t = orders.len();
        if unit.len() != t {
            return Err(Error::ShapeMismatch(format!(
                "unit has {} coefficients, ring has {} generators",
                unit.len(),
                t
            )));
        }
        if mul.len() != t
            || mul
                .iter()
                .any(|row| row.len() != t || row.iter().any(|c| c.len() != t))
        {
            return Err(Error::ShapeMismatch(
                "structure constants must form a t x t table of length-t vectors".into(),
            ));
        }
        let unit = radix.reduce(&unit.iter().map(|&c| c as i64).collect::<Vec<_>>());
        let mul: Vec<Vec<Vec<u64>>> = mul
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| radix.reduce(&c.iter().map(|&x| x as i64).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();

        // bilinear extension must not depend on the chosen integer lifts
        for i in 0..t {
            for j in 0..t {
                let c = &mul[i][j];
                for (k, o) in [(i, orders[i]), (j, orders[j])] {
                    if !Radix::is_zero(&radix.scale(c, o)) {
                        return Err(Error::AxiomViolation {
                            axiom: "well-definedness".into(),
                            witness: format!(
                                "order {o} of e{} does not annihilate e{} * e{} = {:?}",
                                k + 1,
                                i + 1,
                                j + 1,
                                c
                            ),
                        });
                    }
                }
            }
        }

        let size = radix.size() as usize;
        let elems: Vec<Vec<u64>> = (0..size).map(|x| radix.decode(x)).collect();
        let mut table = vec![0u32; size * size];
        for x in 0..size {
            for y in 0..size {
                table[x * size + y] =
                    radix.encode_reduced(&bilinear(&radix, &mul, &elems[x], &elems[y])) as u32;
            }
        }
        let data = RingData {
            tag,
            radix,
            unit,
            mul,
            table,
        };
        let ring = FiniteRing(Arc::new(data));
        ring.check_axioms(&elems)?;
        Ok(ring)
    }

    fn check_axioms(&self, elems: &[Vec<u64>]) -> Result<()> {
        let size = self.size();
        let one = self.unit_index();
        for x in 0..size {
            if self.mul(one, x) != x || self.mul(x, one) != x {
                return Err(Error::AxiomViolation {
                    axiom: "unit law".into(),
                    witness: format!("unit {:?} fails against {:?}", self.0.unit, elems[x]),
                });
            }
        }
        for x in 0..size {
            for y in 0..size {
                let xy = self.mul(x, y);
                for z in 0..size {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Err(Error::AxiomViolation {
                            axiom: "associativity".into(),
                            witness: format!(
                                "({:?} * {:?}) * {:?} != {:?} * ({:?} * {:?})",
                                elems[x], elems[y], elems[z], elems[x], elems[y], elems[z]
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn tag(&self) -> RingTag {
        self.0.tag
    }

    pub fn is_integers(&self) -> bool {
        self.0.tag == RingTag::Integers
    }

    /// True for the integers and residue rings, where modules are just
    /// abelian groups (of bounded exponent) and homs are additive maps.
    pub fn is_abelian_group_ring(&self) -> bool {
        matches!(self.0.tag, RingTag::Integers | RingTag::Zn(_))
    }

    pub fn orders(&self) -> &[u64] {
        self.0.radix.orders()
    }

    pub fn generator_count(&self) -> usize {
        self.orders().len()
    }

    pub fn radix(&self) -> &Radix {
        &self.0.radix
    }

    /// Carrier size; 0 for the integers, which have no finite carrier.
    pub fn size(&self) -> usize {
        if self.is_integers() {
            0
        } else {
            self.0.radix.size() as usize
        }
    }

    pub fn unit(&self) -> &[u64] {
        &self.0.unit
    }

    pub fn unit_index(&self) -> usize {
        self.0.radix.encode_reduced(&self.0.unit)
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<u64>>] {
        &self.0.mul
    }

    /// Product of two elements given by index.
    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.0.table[x * self.size() + y] as usize
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let r = &self.0.radix;
        r.encode_reduced(&r.add(&r.decode(x), &r.decode(y)))
    }

    pub fn element(&self, x: usize) -> Vec<u64> {
        self.0.radix.decode(x)
    }

    /// Generator index `i` as a ring element index.
    pub fn generator(&self, i: usize) -> usize {
        self.0.radix.strides()[i] as usize
    }
}

fn bilinear(radix: &Radix, mul: &[Vec<Vec<u64>>], x: &[u64], y: &[u64]) -> Vec<u64> {
    let t = x.len();
    let mut acc = vec![0i64; t];
    for i in 0..t {
        if x[i] == 0 {
            continue;
        }
        for j in 0..t {
            if y[j] == 0 {
                continue;
            }
            let k = (x[i] * y[j]) as i64;
            for (a, &c) in acc.iter_mut().zip(&mul[i][j]) {
                *a += k * c as i64;
            }
        }
    }
    radix.reduce(&acc)
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.tag == other.0.tag
                && self.0.radix == other.0.radix
                && self.0.unit == other.0.unit
                && self.0.mul == other.0.mul)
    }
}

impl Eq for FiniteRing {}

impl Hash for FiniteRing {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.tag.hash(state);
        self.0.radix.orders().hash(state);
        self.0.unit.hash(state);
        self.0.mul.hash(state);
    }
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.tag {
            RingTag::Integers => write!(f, "Z"),
            RingTag::Zn(n) => write!(f, "Z_{n}"),
            RingTag::Custom => write!(f, "R{:?}", self.orders()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_rings() {
        let r = FiniteRing::zn(4).unwrap();
        assert_eq!(r.size(), 4);
        assert_eq!(r.unit(), &[1]);
        assert_eq!(r.mul(3, 3), 1);
        assert_eq!(r.mul(2, 2), 0);
        assert_eq!(FiniteRing::zn(1).unwrap().size(), 1);
        assert_eq!(FiniteRing::zn(0).unwrap_err(), Error::InvalidOrder(0));
    }

    fn unit_vec(t: usize, k: usize) -> Vec<u64> {
        (0..t).map(|i| u64::from(i == k)).collect()
    }

    #[test]
    fn custom_product_ring() {
        // F2 x F2 with orthogonal idempotents e1, e2 and unit e1 + e2
        let spec = RingSpec::Custom {
            orders: vec![2, 2],
            unit: vec![1, 1],
            mul: vec![vec![vec![1, 0], vec![0, 0]], vec![vec![0, 0], vec![0, 1]]],
        };
        let r = FiniteRing::new(spec).unwrap();
        assert_eq!(r.size(), 4);
        assert_eq!(r.unit_index(), 3);
    }

    #[test]
    fn broken_associativity_is_rejected_with_triple() {
        // unit e1; e2*e2 = e3, e3*e3 = e2, e2*e3 = e3*e2 = 0, so (e2 e2) e3 = e2 but e2 (e2 e3) = 0
        let t = 3;
        let mut mul = vec![vec![vec![0; t]; t]; t];
        for j in 0..t {
            mul[0][j] = unit_vec(t, j);
            mul[j][0] = unit_vec(t, j);
        }
        mul[1][1] = unit_vec(t, 2);
        mul[2][2] = unit_vec(t, 1);
        let err = FiniteRing::new(RingSpec::Custom {
            orders: vec![2, 2, 2],
            unit: unit_vec(t, 0),
            mul,
        })
        .unwrap_err();
        match err {
            Error::AxiomViolation { axiom, witness } => {
                assert_eq!(axiom, "associativity");
                assert!(witness.contains('*'));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ill_defined_constants_are_rejected() {
        let err = FiniteRing::new(RingSpec::Custom {
            orders: vec![2, 4],
            unit: vec![1, 0],
            mul: vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 1]]],
        })
        .unwrap_err();
        assert!(
            matches!(err, Error::AxiomViolation { ref axiom, .. } if axiom == "well-definedness")
        );
    }

    #[test]
    fn oversized_ring_is_refused() {
        let err = FiniteRing::zn(65).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }
}
