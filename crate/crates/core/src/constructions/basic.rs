use std::any::Any;
use std::sync::Arc;

use crate::error::{Result, RingError};
use crate::numtheory::prime_power;
use crate::radix::{Digits, MixedRadix};
use crate::ring::{Code, FiniteRing, ResourceGuard, RingOps};

/// Residues modulo n.
#[derive(Debug, Clone)]
pub struct Zmod {
    pub modulus: u32,
    label: String,
}

impl RingOps for Zmod {
    fn size(&self) -> usize {
        self.modulus as usize
    }
    fn add(&self, a: Code, b: Code) -> Code {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    fn mul(&self, a: Code, b: Code) -> Code {
        ((a as u64 * b as u64) % self.modulus as u64) as Code
    }
    fn neg(&self, a: Code) -> Code {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }
    fn one(&self) -> Code {
        1
    }
    fn label(&self) -> String {
        self.label.clone()
    }
    fn render(&self, a: Code) -> String {
        a.to_string()
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}

pub fn zmod(n: u64, guard: &ResourceGuard) -> Result<Arc<FiniteRing>> {
    if n < 2 {
        return Err(RingError::InvalidParameter(format!("Z({n}) needs n >= 2")));
    }
    guard.check(n as u128)?;
    FiniteRing::new(
        Zmod {
            modulus: n as u32,
            label: format!("Z({n})"),
        },
        guard,
    )
}

/// GF(p^e) as polynomials of degree < e over Z_p modulo a fixed monic
/// irreducible. Codes are `Σ c_i p^i` with `c_0` the constant term.
#[derive(Debug, Clone)]
pub struct GaloisField {
    pub p: u32,
    pub degree: usize,
    /// Low coefficients `m_0..m_{e-1}` of the monic modulus.
    pub modulus: Vec<u32>,
    radix: MixedRadix,
}

impl GaloisField {
    pub fn order(&self) -> u64 {
        self.radix.total()
    }
}

impl RingOps for GaloisField {
    fn size(&self) -> usize {
        self.radix.total() as usize
    }
    fn add(&self, a: Code, b: Code) -> Code {
        let (x, y) = (self.radix.decode(a), self.radix.decode(b));
        let mut z: Digits = [0; 16];
        for i in 0..self.degree {
            z[i] = (x[i] + y[i]) % self.p;
        }
        self.radix.encode(&z)
    }
    fn mul(&self, a: Code, b: Code) -> Code {
        let (x, y) = (self.radix.decode(a), self.radix.decode(b));
        let e = self.degree;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * e - 1];
        for i in 0..e {
            for j in 0..e {
                prod[i + j] = (prod[i + j] + x[i] as u64 * y[j] as u64) % p;
            }
        }
        // x^e = -Σ m_i x^i, reduce from the top down.
        for top in (e..2 * e - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &m) in self.modulus.iter().enumerate() {
                let k = top - e + i;
                prod[k] = (prod[k] + p * p - c * m as u64) % p;
            }
        }
        let mut z: Digits = [0; 16];
        for i in 0..e {
            z[i] = prod[i] as u32;
        }
        self.radix.encode(&z)
    }
    fn neg(&self, a: Code) -> Code {
        let x = self.radix.decode(a);
        let mut z: Digits = [0; 16];
        for i in 0..self.degree {
            z[i] = (self.p - x[i]) % self.p;
        }
        self.radix.encode(&z)
    }
    fn one(&self) -> Code {
        1
    }
    fn label(&self) -> String {
        format!("GF({})", self.order())
    }
    fn render(&self, a: Code) -> String {
        let x = self.radix.decode(a);
        let terms: Vec<String> = (0..self.degree)
            .filter(|&i| x[i] != 0)
            .map(|i| match (i, x[i]) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (_, 1) => format!("x^{i}"),
                (_, c) => format!("{c}x^{i}"),
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

/// Remainder of `num` modulo the monic `den` over Z_p; coefficients low first.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let d = den.len() - 1;
    let p = p as u64;
    for top in (d..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (i, &m) in den.iter().enumerate() {
            let k = top - d + i;
            r[k] = (r[k] + p * p - c * m as u64) % p;
        }
    }
    r.truncate(d);
    r.into_iter().map(|c| c as u32).collect()
}

/// Irreducibility by trial division against every monic polynomial of
/// degree 1..=e/2. `poly` is monic of degree `e`, coefficients low first.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let e = poly.len() - 1;
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut rest = idx;
            for _ in 0..d {
                div.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree e over Z_p, where
/// the low coefficients are compared as the tuple `(m_0, m_1, ..., m_{e-1})`.
pub fn smallest_irreducible(p: u32, e: usize) -> Vec<u32> {
    let count = (p as u64).pow(e as u32);
    for idx in 0..count {
        // m_0 is the most significant position of the tuple order.
        let mut coeffs = vec![0u32; e];
        let mut rest = idx;
        for slot in coeffs.iter_mut().rev() {
            *slot = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            coeffs.pop();
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

pub fn gf(q: u64, guard: &ResourceGuard) -> Result<Arc<FiniteRing>> {
    let (p, e) = prime_power(q).ok_or(RingError::NotAPrimePower(q))?;
    guard.check(q as u128)?;
    if e == 1 {
        return FiniteRing::new(
            Zmod {
                modulus: p as u32,
                label: format!("GF({q})"),
            },
            guard,
        );
    }
    let e = e as usize;
    let modulus = smallest_irreducible(p as u32, e);
    FiniteRing::new(
        GaloisField {
            p: p as u32,
            degree: e,
            modulus,
            radix: MixedRadix::uniform(p as u32, e),
        },
        guard,
    )
}

/// Restricted handle for ℤ: only its units, nilpotents and characteristic
/// are exposed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegersOracle;

impl IntegersOracle {
    pub fn units(&self) -> [i64; 2] {
        [1, -1]
    }
    pub fn nilpotents(&self) -> [i64; 1] {
        [0]
    }
    pub fn characteristic(&self) -> u64 {
        0
    }
    /// Whether `u^n - 1` is nilpotent (i.e. zero) for a unit `u = ±1`.
    pub fn unit_power_is_unipotent(&self, u: i64, n: u64) -> bool {
        u == 1 || n % 2 == 0
    }
}

pub fn integers_oracle() -> IntegersOracle {
    IntegersOracle
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_two_and_twelve() {
        let g = ResourceGuard::default();
        let z2 = zmod(2, &g).unwrap();
        assert_eq!(z2.size(), 2);
        assert!(zmod(1, &g).is_err());
        let z12 = zmod(12, &g).unwrap();
        assert_eq!(z12.mul(7, 11), 5);
        assert_eq!(z12.neg(5), 7);
    }

    #[test]
    fn gf4_nonzero_cubes_are_one() {
        let f = gf(4, &ResourceGuard::default()).unwrap();
        for x in 1..4 {
            assert_eq!(f.pow(x, 3), 1);
        }
        assert!(f.verify_ring_axioms(0).holds);
    }

    #[test]
    fn gf_rejects_non_prime_powers() {
        let g = ResourceGuard::default();
        assert_eq!(gf(12, &g).unwrap_err(), RingError::NotAPrimePower(12));
        assert_eq!(gf(1, &g).unwrap_err(), RingError::NotAPrimePower(1));
    }

    #[test]
    fn gf8_modulus_is_smallest_irreducible_cubic() {
        // Oracle: enumerate all monic cubics over Z_2, keep those without a
        // root (degree 3 reducible iff it has a linear factor), and take the
        // smallest by (m0, m1, m2).
        let mut irreducible = Vec::new();
        for m0 in 0..2u32 {
            for m1 in 0..2u32 {
                for m2 in 0..2u32 {
                    let eval = |x: u32| (m0 + m1 * x + m2 * x * x + x * x * x) % 2;
                    if eval(0) != 0 && eval(1) != 0 {
                        irreducible.push(vec![m0, m1, m2]);
                    }
                }
            }
        }
        irreducible.sort();
        assert_eq!(smallest_irreducible(2, 3), irreducible[0]);
        assert_eq!(irreducible[0], vec![1, 0, 1]);

        let f = gf(8, &ResourceGuard::default()).unwrap();
        let field = f.construction::<GaloisField>().unwrap();
        assert_eq!(field.modulus, vec![1, 0, 1]);
        assert!(f.verify_ring_axioms(0).holds);
    }

    #[test]
    fn gf9_units() {
        let f = gf(9, &ResourceGuard::default()).unwrap();
        let units = (1..9).filter(|&x| (1..9).any(|y| f.mul(x, y) == 1)).count();
        assert_eq!(units, 8);
        assert_eq!(f.characteristic(), 3);
    }

    #[test]
    fn irreducibility_matches_root_test_for_quadratics() {
        for p in [2u32, 3, 5, 7] {
            for m0 in 0..p {
                for m1 in 0..p {
                    let has_root = (0..p).any(|x| (m0 + m1 * x + x * x) % p == 0);
                    assert_eq!(is_irreducible(&[m0, m1, 1], p), !has_root);
                }
            }
        }
    }
}
