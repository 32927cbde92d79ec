use std::any::Any;
use std::sync::Arc;

use crate::error::{Result, RingError};
use crate::radix::{Digits, MixedRadix, MAX_DIGITS};
use crate::ring::{Code, FiniteRing, ResourceGuard, RingOps};

/// Full k×k matrices over a base ring. Entries are stored row-major as a
/// mixed-radix digit vector, entry (0,0) least significant.
#[derive(Debug)]
pub struct MatrixRing {
    pub base: Arc<FiniteRing>,
    pub k: usize,
    radix: MixedRadix,
}

impl MatrixRing {
    pub fn entries(&self, a: Code) -> Vec<Code> {
        self.radix.decode(a)[..self.k * self.k].to_vec()
    }

    pub fn encode(&self, entries: &[Code]) -> Code {
        let mut d: Digits = [0; MAX_DIGITS];
        d[..entries.len()].copy_from_slice(entries);
        self.radix.encode(&d)
    }

    /// Code of the matrix unit E_ij (zero-based).
    pub fn unit(&self, i: usize, j: usize) -> Code {
        let mut e = vec![self.base.zero(); self.k * self.k];
        e[i * self.k + j] = self.base.one();
        self.encode(&e)
    }

    /// Embeds an integer matrix through `Z -> R`.
    pub fn from_ints(&self, rows: &[&[i64]]) -> Code {
        let e: Vec<Code> = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| self.base.from_int(x)))
            .collect();
        self.encode(&e)
    }
}

fn entrywise(radix: &MixedRadix, len: usize, a: Code, b: Code, f: impl Fn(Code, Code) -> Code) -> Code {
    let (x, y) = (radix.decode(a), radix.decode(b));
    let mut z: Digits = [0; MAX_DIGITS];
    for i in 0..len {
        z[i] = f(x[i], y[i]);
    }
    radix.encode(&z)
}

impl RingOps for MatrixRing {
    fn size(&self) -> usize {
        self.radix.total() as usize
    }
    fn add(&self, a: Code, b: Code) -> Code {
        entrywise(&self.radix, self.k * self.k, a, b, |x, y| self.base.add(x, y))
    }
    fn mul(&self, a: Code, b: Code) -> Code {
        let (x, y) = (self.radix.decode(a), self.radix.decode(b));
        let k = self.k;
        let r = &self.base;
        let mut z: Digits = [0; MAX_DIGITS];
        for i in 0..k {
            for j in 0..k {
                let mut acc = r.zero();
                for l in 0..k {
                    acc = r.add(acc, r.mul(x[i * k + l], y[l * k + j]));
                }
                z[i * k + j] = acc;
            }
        }
        self.radix.encode(&z)
    }
    fn neg(&self, a: Code) -> Code {
        entrywise(&self.radix, self.k * self.k, a, a, |x, _| self.base.neg(x))
    }
    fn zero(&self) -> Code {
        self.encode(&vec![self.base.zero(); self.k * self.k])
    }
    fn one(&self) -> Code {
        let mut e = vec![self.base.zero(); self.k * self.k];
        for i in 0..self.k {
            e[i * self.k + i] = self.base.one();
        }
        self.encode(&e)
    }
    fn label(&self) -> String {
        format!("M({},{})", self.k, self.base.label())
    }
    fn render(&self, a: Code) -> String {
        let e = self.entries(a);
        let rows: Vec<String> = e
            .chunks(self.k)
            .map(|row| {
                let cells: Vec<String> = row.iter().map(|&c| self.base.render(c)).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}

pub fn matrix(base: &Arc<FiniteRing>, k: usize, guard: &ResourceGuard) -> Result<Arc<FiniteRing>> {
    if k == 0 {
        return Err(RingError::InvalidParameter("matrix size must be >= 1".into()));
    }
    guard.check_power(base.size(), (k * k) as u32)?;
    FiniteRing::new(
        MatrixRing {
            base: base.clone(),
            k,
            radix: MixedRadix::uniform(base.size() as u32, k * k),
        },
        guard,
    )
}

/// Upper-triangular k×k matrices; the digits are the entries (i, j) with
/// i <= j in row-major order.
#[derive(Debug)]
pub struct TriangularRing {
    pub base: Arc<FiniteRing>,
    pub k: usize,
    positions: Vec<(usize, usize)>,
    radix: MixedRadix,
}

impl TriangularRing {
    fn full(&self, a: Code) -> [Code; MAX_DIGITS * 2] {
        let d = self.radix.decode(a);
        let mut m = [self.base.zero(); MAX_DIGITS * 2];
        for (slot, &(i, j)) in self.positions.iter().enumerate() {
            m[i * self.k + j] = d[slot];
        }
        m
    }

    /// Codes of the strictly upper-triangular matrices.
    pub fn strictly_upper(&self) -> Vec<Code> {
        let diag: Vec<usize> = (0..self.positions.len())
            .filter(|&s| self.positions[s].0 == self.positions[s].1)
            .collect();
        (0..self.radix.total() as Code)
            .filter(|&c| {
                let d = self.radix.decode(c);
                diag.iter().all(|&s| d[s] == self.base.zero())
            })
            .collect()
    }

    pub fn encode_entries(&self, entries: &[(usize, usize, Code)]) -> Code {
        let mut d: Digits = [self.base.zero(); MAX_DIGITS];
        for &(i, j, c) in entries {
            let slot = self.positions.iter().position(|&p| p == (i, j)).expect("upper position");
            d[slot] = c;
        }
        self.radix.encode(&d)
    }
}

impl RingOps for TriangularRing {
    fn size(&self) -> usize {
        self.radix.total() as usize
    }
    fn add(&self, a: Code, b: Code) -> Code {
        entrywise(&self.radix, self.positions.len(), a, b, |x, y| self.base.add(x, y))
    }
    fn mul(&self, a: Code, b: Code) -> Code {
        let (x, y) = (self.full(a), self.full(b));
        let k = self.k;
        let r = &self.base;
        let mut d: Digits = [0; MAX_DIGITS];
        for (slot, &(i, j)) in self.positions.iter().enumerate() {
            let mut acc = r.zero();
            for l in i..=j {
                acc = r.add(acc, r.mul(x[i * k + l], y[l * k + j]));
            }
            d[slot] = acc;
        }
        self.radix.encode(&d)
    }
    fn neg(&self, a: Code) -> Code {
        entrywise(&self.radix, self.positions.len(), a, a, |x, _| self.base.neg(x))
    }
    fn zero(&self) -> Code {
        self.encode_entries(&[])
    }
    fn one(&self) -> Code {
        let diag: Vec<(usize, usize, Code)> = (0..self.k).map(|i| (i, i, self.base.one())).collect();
        self.encode_entries(&diag)
    }
    fn label(&self) -> String {
        format!("T({},{})", self.k, self.base.label())
    }
    fn render(&self, a: Code) -> String {
        let m = self.full(a);
        let rows: Vec<String> = (0..self.k)
            .map(|i| {
                let cells: Vec<String> =
                    (0..self.k).map(|j| self.base.render(m[i * self.k + j])).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}

pub fn triangular(base: &Arc<FiniteRing>, k: usize, guard: &ResourceGuard) -> Result<Arc<FiniteRing>> {
    if k < 2 {
        return Err(RingError::InvalidParameter("triangular size must be >= 2".into()));
    }
    let slots = k * (k + 1) / 2;
    guard.check_power(base.size(), slots as u32)?;
    let positions = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    FiniteRing::new(
        TriangularRing {
            base: base.clone(),
            k,
            positions,
            radix: MixedRadix::uniform(base.size() as u32, slots),
        },
        guard,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::zmod;

    fn det2_mod2(e: &[Code]) -> u32 {
        (e[0] * e[3] + e[1] * e[2]) % 2
    }

    #[test]
    fn m2_z2_has_six_invertible_matrices() {
        let g = ResourceGuard::default();
        let m = matrix(&zmod(2, &g).unwrap(), 2, &g).unwrap();
        assert_eq!(m.size(), 16);
        let mr = m.construction::<MatrixRing>().unwrap();
        let by_det = m.codes().filter(|&a| det2_mod2(&mr.entries(a)) == 1).count();
        let by_inverse = m
            .codes()
            .filter(|&a| m.codes().any(|b| m.mul(a, b) == m.one()))
            .count();
        assert_eq!(by_det, 6);
        assert_eq!(by_inverse, 6);
        assert!(m.verify_ring_axioms(0).holds);
    }

    #[test]
    fn m1_copies_the_base() {
        let g = ResourceGuard::default();
        let z5 = zmod(5, &g).unwrap();
        let m = matrix(&z5, 1, &g).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(m.mul(a, b), z5.mul(a, b));
                assert_eq!(m.add(a, b), z5.add(a, b));
            }
        }
    }

    #[test]
    fn matrix_sizes_and_guard() {
        let g = ResourceGuard::default();
        let z3 = zmod(3, &g).unwrap();
        assert_eq!(matrix(&z3, 2, &g).unwrap().size(), 81);
        let z4 = zmod(4, &g).unwrap();
        assert!(matches!(
            matrix(&z4, 3, &g),
            Err(RingError::SizeExceeded { projected: 262144, .. })
        ));
    }

    #[test]
    fn unit_codes_follow_row_major_order() {
        let g = ResourceGuard::default();
        let m = matrix(&zmod(2, &g).unwrap(), 2, &g).unwrap();
        let mr = m.construction::<MatrixRing>().unwrap();
        assert_eq!(mr.unit(0, 0), 1);
        assert_eq!(mr.unit(0, 1), 2);
        assert_eq!(mr.unit(1, 0), 4);
        assert_eq!(mr.unit(1, 1), 8);
        assert_eq!(m.one(), 9);
        assert_eq!(m.render(6), "[[0,1],[1,0]]");
    }

    #[test]
    fn triangular_sizes_and_nil_upper_part() {
        let g = ResourceGuard::default();
        let z2 = zmod(2, &g).unwrap();
        let t2 = triangular(&z2, 2, &g).unwrap();
        assert_eq!(t2.size(), 8);
        assert!(t2.verify_ring_axioms(0).holds);
        let tr = t2.construction::<TriangularRing>().unwrap();
        let upper = tr.strictly_upper();
        assert_eq!(upper.len(), 2);
        for &x in &upper {
            assert_eq!(t2.mul(x, x), t2.zero());
        }
        assert_eq!(triangular(&z2, 3, &g).unwrap().size(), 64);
        assert!(triangular(&z2, 1, &g).is_err());
    }
}
