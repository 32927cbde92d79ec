use std::any::Any;
use std::sync::Arc;

use crate::error::{Result, RingError};
use crate::radix::{Digits, MixedRadix, MAX_DIGITS};
use crate::ring::{Code, FiniteRing, ResourceGuard, RingOps};

/// Direct product with componentwise operations; component 0 is the least
/// significant digit.
#[derive(Debug)]
pub struct ProductRing {
    pub components: Vec<Arc<FiniteRing>>,
    radix: MixedRadix,
}

impl ProductRing {
    pub fn component_codes(&self, a: Code) -> Vec<Code> {
        self.radix.decode(a)[..self.components.len()].to_vec()
    }

    pub fn encode(&self, parts: &[Code]) -> Code {
        let mut d: Digits = [0; MAX_DIGITS];
        d[..parts.len()].copy_from_slice(parts);
        self.radix.encode(&d)
    }

    fn map2(&self, a: Code, b: Code, f: impl Fn(&FiniteRing, Code, Code) -> Code) -> Code {
        let (x, y) = (self.radix.decode(a), self.radix.decode(b));
        let mut z: Digits = [0; MAX_DIGITS];
        for (i, r) in self.components.iter().enumerate() {
            z[i] = f(r, x[i], y[i]);
        }
        self.radix.encode(&z)
    }
}

impl RingOps for ProductRing {
    fn size(&self) -> usize {
        self.radix.total() as usize
    }
    fn add(&self, a: Code, b: Code) -> Code {
        self.map2(a, b, |r, x, y| r.add(x, y))
    }
    fn mul(&self, a: Code, b: Code) -> Code {
        self.map2(a, b, |r, x, y| r.mul(x, y))
    }
    fn neg(&self, a: Code) -> Code {
        self.map2(a, a, |r, x, _| r.neg(x))
    }
    fn zero(&self) -> Code {
        let z: Vec<Code> = self.components.iter().map(|r| r.zero()).collect();
        self.encode(&z)
    }
    fn one(&self) -> Code {
        let o: Vec<Code> = self.components.iter().map(|r| r.one()).collect();
        self.encode(&o)
    }
    fn label(&self) -> String {
        let parts: Vec<&str> = self.components.iter().map(|r| r.label()).collect();
        format!("Prod({})", parts.join(","))
    }
    fn render(&self, a: Code) -> String {
        let parts: Vec<String> = self
            .component_codes(a)
            .iter()
            .zip(&self.components)
            .map(|(&c, r)| r.render(c))
            .collect();
        format!("({})", parts.join(","))
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// A single component is returned unchanged.
pub fn product(components: &[Arc<FiniteRing>], guard: &ResourceGuard) -> Result<Arc<FiniteRing>> {
    match components {
        [] => Err(RingError::InvalidParameter("empty product".into())),
        [only] => Ok(only.clone()),
        _ => {
            if components.len() > MAX_DIGITS {
                return Err(RingError::InvalidParameter("too many components".into()));
            }
            let projected = components
                .iter()
                .try_fold(1u128, |acc, r| acc.checked_mul(r.size() as u128))
                .unwrap_or(u128::MAX);
            guard.check(projected)?;
            let radix = MixedRadix::new(components.iter().map(|r| r.size() as u32).collect());
            FiniteRing::new(
                ProductRing {
                    components: components.to_vec(),
                    radix,
                },
                guard,
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::zmod;

    #[test]
    fn z2_times_z3() {
        let g = ResourceGuard::default();
        let p = product(&[zmod(2, &g).unwrap(), zmod(3, &g).unwrap()], &g).unwrap();
        assert_eq!(p.size(), 6);
        assert_eq!(p.characteristic(), 6);
        assert!(p.verify_ring_axioms(0).holds);
        // Oracle: a pair is a unit iff each coordinate is.
        let pr = p.construction::<ProductRing>().unwrap();
        let units: Vec<Code> = p
            .codes()
            .filter(|&a| {
                let c = pr.component_codes(a);
                c[0] == 1 && c[1] != 0
            })
            .collect();
        assert_eq!(units.len(), 2);
    }

    #[test]
    fn singleton_product_is_identity() {
        let g = ResourceGuard::default();
        let z5 = zmod(5, &g).unwrap();
        let p = product(&[z5.clone()], &g).unwrap();
        assert!(Arc::ptr_eq(&p, &z5));
        assert!(product(&[], &g).is_err());
    }
}
