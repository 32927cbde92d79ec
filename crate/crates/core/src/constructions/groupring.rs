use std::any::Any;
use std::sync::Arc;

use crate::error::{Result, RingError};
use crate::group::FiniteGroup;
use crate::radix::{Digits, MixedRadix, MAX_DIGITS};
use crate::ring::{Code, FiniteRing, ResourceGuard, RingOps};

/// Group ring R[G]: one coefficient digit per group element, in the group's
/// index order.
#[derive(Debug)]
pub struct GroupRing {
    pub base: Arc<FiniteRing>,
    pub group: Arc<FiniteGroup>,
    radix: MixedRadix,
}

impl GroupRing {
    pub fn coefficients(&self, a: Code) -> Vec<Code> {
        self.radix.decode(a)[..self.group.order()].to_vec()
    }

    pub fn encode(&self, coeffs: &[Code]) -> Code {
        let mut d: Digits = [0; MAX_DIGITS];
        d[..coeffs.len()].copy_from_slice(coeffs);
        self.radix.encode(&d)
    }

    /// The basis element 1·g.
    pub fn basis(&self, g: u32) -> Code {
        let mut d: Digits = [self.base.zero(); MAX_DIGITS];
        d[g as usize] = self.base.one();
        self.radix.encode(&d)
    }

    /// Augmentation ω: sum of coefficients, as a code of the base ring.
    pub fn augmentation(&self, a: Code) -> Code {
        self.coefficients(a)
            .into_iter()
            .fold(self.base.zero(), |acc, c| self.base.add(acc, c))
    }
}

impl RingOps for GroupRing {
    fn size(&self) -> usize {
        self.radix.total() as usize
    }
    fn add(&self, a: Code, b: Code) -> Code {
        let (x, y) = (self.radix.decode(a), self.radix.decode(b));
        let mut z: Digits = [0; MAX_DIGITS];
        for i in 0..self.group.order() {
            z[i] = self.base.add(x[i], y[i]);
        }
        self.radix.encode(&z)
    }
    fn mul(&self, a: Code, b: Code) -> Code {
        let (x, y) = (self.radix.decode(a), self.radix.decode(b));
        let r = &self.base;
        let n = self.group.order();
        let mut z: Digits = [r.zero(); MAX_DIGITS];
        for g in 0..n {
            if x[g] == r.zero() {
                continue;
            }
            for h in 0..n {
                let gh = self.group.op(g as u32, h as u32) as usize;
                z[gh] = r.add(z[gh], r.mul(x[g], y[h]));
            }
        }
        self.radix.encode(&z)
    }
    fn neg(&self, a: Code) -> Code {
        let x = self.radix.decode(a);
        let mut z: Digits = [0; MAX_DIGITS];
        for i in 0..self.group.order() {
            z[i] = self.base.neg(x[i]);
        }
        self.radix.encode(&z)
    }
    fn zero(&self) -> Code {
        self.radix.encode(&[self.base.zero(); MAX_DIGITS])
    }
    fn one(&self) -> Code {
        self.basis(self.group.identity())
    }
    fn label(&self) -> String {
        format!("GR({},{})", self.base.label(), self.group.label())
    }
    fn render(&self, a: Code) -> String {
        let terms: Vec<String> = self
            .coefficients(a)
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != self.base.zero())
            .map(|(g, &c)| format!("{}*g{g}", self.base.render(c)))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}

pub fn groupring(
    base: &Arc<FiniteRing>,
    group: &FiniteGroup,
    guard: &ResourceGuard,
) -> Result<Arc<FiniteRing>> {
    if group.order() > MAX_DIGITS {
        return Err(RingError::SizeExceeded {
            projected: (base.size() as u128)
                .checked_pow(group.order() as u32)
                .unwrap_or(u128::MAX),
            limit: guard.max_ring_size,
        });
    }
    guard.check_power(base.size(), group.order() as u32)?;
    FiniteRing::new(
        GroupRing {
            base: base.clone(),
            group: Arc::new(group.clone()),
            radix: MixedRadix::uniform(base.size() as u32, group.order()),
        },
        guard,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::zmod;

    #[test]
    fn z2_c2_one_plus_g_squares_to_zero() {
        let g = ResourceGuard::default();
        let r = groupring(&zmod(2, &g).unwrap(), &FiniteGroup::cyclic(2).unwrap(), &g).unwrap();
        assert_eq!(r.size(), 4);
        let gr = r.construction::<GroupRing>().unwrap();
        let one_plus_g = r.add(gr.basis(0), gr.basis(1));
        assert_eq!(r.mul(one_plus_g, one_plus_g), r.zero());
        assert_eq!(gr.augmentation(one_plus_g), 0);
        assert!(r.verify_ring_axioms(0).holds);
    }

    #[test]
    fn trivial_group_copies_base() {
        let g = ResourceGuard::default();
        let z6 = zmod(6, &g).unwrap();
        let r = groupring(&z6, &FiniteGroup::cyclic(1).unwrap(), &g).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(r.mul(a, b), z6.mul(a, b));
            }
        }
    }

    #[test]
    fn sizes_and_noncommutative_groups() {
        let g = ResourceGuard::default();
        let z2 = zmod(2, &g).unwrap();
        assert_eq!(groupring(&z2, &FiniteGroup::cyclic(4).unwrap(), &g).unwrap().size(), 16);
        let q8 = groupring(&z2, &FiniteGroup::quaternion().unwrap(), &g).unwrap();
        assert_eq!(q8.size(), 256);
        let gr = q8.construction::<GroupRing>().unwrap();
        let (i, j) = (gr.basis(2), gr.basis(4));
        assert_ne!(q8.mul(i, j), q8.mul(j, i));
        assert!(groupring(&zmod(5, &g).unwrap(), &FiniteGroup::quaternion().unwrap(), &g).is_err());
    }
}
