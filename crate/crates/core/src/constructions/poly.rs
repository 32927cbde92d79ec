use std::any::Any;
use std::sync::Arc;

use crate::error::{Result, RingError};
use crate::radix::{Digits, MixedRadix, MAX_DIGITS};
use crate::ring::{Code, FiniteRing, ResourceGuard, RingOps};

/// R[x]/(x^k): coefficient vectors of length k, constant term least
/// significant.
#[derive(Debug)]
pub struct PolyQuotient {
    pub base: Arc<FiniteRing>,
    pub k: usize,
    radix: MixedRadix,
}

impl PolyQuotient {
    pub fn coefficients(&self, a: Code) -> Vec<Code> {
        self.radix.decode(a)[..self.k].to_vec()
    }

    /// Code of the generator x (zero when k = 1).
    pub fn x(&self) -> Code {
        if self.k == 1 {
            return self.base.zero();
        }
        let mut d: Digits = [self.base.zero(); MAX_DIGITS];
        d[1] = self.base.one();
        self.radix.encode(&d)
    }
}

impl RingOps for PolyQuotient {
    fn size(&self) -> usize {
        self.radix.total() as usize
    }
    fn add(&self, a: Code, b: Code) -> Code {
        let (x, y) = (self.radix.decode(a), self.radix.decode(b));
        let mut z: Digits = [0; MAX_DIGITS];
        for i in 0..self.k {
            z[i] = self.base.add(x[i], y[i]);
        }
        self.radix.encode(&z)
    }
    fn mul(&self, a: Code, b: Code) -> Code {
        let (x, y) = (self.radix.decode(a), self.radix.decode(b));
        let r = &self.base;
        let mut z: Digits = [r.zero(); MAX_DIGITS];
        for i in 0..self.k {
            for j in 0..self.k - i {
                z[i + j] = r.add(z[i + j], r.mul(x[i], y[j]));
            }
        }
        self.radix.encode(&z)
    }
    fn neg(&self, a: Code) -> Code {
        let x = self.radix.decode(a);
        let mut z: Digits = [0; MAX_DIGITS];
        for i in 0..self.k {
            z[i] = self.base.neg(x[i]);
        }
        self.radix.encode(&z)
    }
    fn zero(&self) -> Code {
        self.radix.encode(&[self.base.zero(); MAX_DIGITS])
    }
    fn one(&self) -> Code {
        let mut d: Digits = [self.base.zero(); MAX_DIGITS];
        d[0] = self.base.one();
        self.radix.encode(&d)
    }
    fn label(&self) -> String {
        format!("Poly({},{})", self.base.label(), self.k)
    }
    fn render(&self, a: Code) -> String {
        let c = self.coefficients(a);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v != self.base.zero())
            .map(|(i, &v)| match i {
                0 => self.base.render(v),
                1 => format!("{}x", self.base.render(v)),
                _ => format!("{}x^{i}", self.base.render(v)),
            })
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

pub fn polyquot(base: &Arc<FiniteRing>, k: usize, guard: &ResourceGuard) -> Result<Arc<FiniteRing>> {
    if k == 0 {
        return Err(RingError::InvalidParameter("Poly needs k >= 1".into()));
    }
    guard.check_power(base.size(), k as u32)?;
    FiniteRing::new(
        PolyQuotient {
            base: base.clone(),
            k,
            radix: MixedRadix::uniform(base.size() as u32, k),
        },
        guard,
    )
}
