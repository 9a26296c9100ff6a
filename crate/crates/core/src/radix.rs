/// Mixed-radix encoding of coefficient vectors. The first coordinate is
/// the most significant digit, so index order is lexicographic order of
/// coefficient vectors and the zero vector has index 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Radix {
    orders: Vec<u64>,
    strides: Vec<u64>,
    size: u128,
}

impl Radix {
    pub fn new(orders: &[u64]) -> Self {
        let mut strides = vec![1u64; orders.len()];
        let mut acc: u128 = 1;
        for k in (0..orders.len()).rev() {
            strides[k] = acc.min(u64::MAX as u128) as u64;
            acc = acc.saturating_mul(orders[k] as u128);
        }
        Radix {
            orders: orders.to_vec(),
            strides,
            size: acc,
        }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn strides(&self) -> &[u64] {
        &self.strides
    }

    /// Carrier size; may exceed `usize` for rejected oversized carriers.
    pub fn size(&self) -> u128 {
        self.size
    }

    /// Reduces each coefficient modulo its order, then encodes.
    pub fn encode(&self, coeffs: &[i64]) -> usize {
        debug_assert_eq!(coeffs.len(), self.orders.len());
        coeffs
            .iter()
            .zip(&self.orders)
            .zip(&self.strides)
            .map(|((&c, &o), &s)| c.rem_euclid(o as i64) as u64 * s)
            .sum::<u64>() as usize
    }

    pub fn encode_reduced(&self, coeffs: &[u64]) -> usize {
        coeffs
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c * s)
            .sum::<u64>() as usize
    }

    pub fn decode(&self, index: usize) -> Vec<u64> {
        self.orders
            .iter()
            .zip(&self.strides)
            .map(|(&o, &s)| (index as u64 / s) % o)
            .collect()
    }

    pub fn reduce(&self, coeffs: &[i64]) -> Vec<u64> {
        coeffs
            .iter()
            .zip(&self.orders)
            .map(|(&c, &o)| c.rem_euclid(o as i64) as u64)
            .collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((&x, &y), &o)| (x + y) % o)
            .collect()
    }

    pub fn scale(&self, a: &[u64], n: u64) -> Vec<u64> {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &o)| ((x as u128 * n as u128) % o as u128) as u64)
            .collect()
    }

    pub fn is_zero(coeffs: &[u64]) -> bool {
        coeffs.iter().all(|&c| c == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_is_lexicographic() {
        let r = Radix::new(&[2, 16]);
        assert_eq!(r.size(), 32);
        assert_eq!(r.encode(&[0, 0]), 0);
        assert_eq!(r.encode(&[0, 8]), 8);
        assert_eq!(r.encode(&[1, 0]), 16);
        assert_eq!(r.encode(&[-1, 17]), 17);
        assert_eq!(r.decode(25), vec![1, 9]);
        assert_eq!(Radix::new(&[]).size(), 1);
    }
}
