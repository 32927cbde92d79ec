use std::any::Any;
use std::sync::Arc;

use crate::constructions::bimodule::TensorBimodule;
use crate::error::Result;
use crate::ring::{Code, FiniteRing, ResourceGuard, RingOps};

/// K_s(R): 2×2 arrays (a x; y b) over R with the cross terms weighted by s.
/// Code is `a + N·x + N²·y + N³·b`.
#[derive(Debug)]
pub struct KsRing {
    pub base: Arc<FiniteRing>,
    pub s: i64,
    pub s_code: Code,
}

impl KsRing {
    /// `[a, x, y, b]`
    pub fn parts(&self, c: Code) -> [Code; 4] {
        let n = self.base.size() as Code;
        [c % n, (c / n) % n, (c / (n * n)) % n, c / (n * n * n)]
    }

    pub fn encode(&self, [a, x, y, b]: [Code; 4]) -> Code {
        let n = self.base.size() as Code;
        a + n * (x + n * (y + n * b))
    }

    /// Elements with zero diagonal.
    pub fn off_diagonal(&self) -> Vec<Code> {
        let n = self.base.size() as Code;
        let z = self.base.zero();
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .map(|(x, y)| self.encode([z, x, y, z]))
            .collect()
    }
}

impl RingOps for KsRing {
    fn size(&self) -> usize {
        self.base.size().pow(4)
    }
    fn add(&self, p: Code, q: Code) -> Code {
        let (u, v) = (self.parts(p), self.parts(q));
        let r = &self.base;
        self.encode([r.add(u[0], v[0]), r.add(u[1], v[1]), r.add(u[2], v[2]), r.add(u[3], v[3])])
    }
    fn mul(&self, p: Code, q: Code) -> Code {
        let ([a1, x1, y1, b1], [a2, x2, y2, b2]) = (self.parts(p), self.parts(q));
        let r = &self.base;
        let s = self.s_code;
        self.encode([
            r.add(r.mul(a1, a2), r.mul(s, r.mul(x1, y2))),
            r.add(r.mul(a1, x2), r.mul(x1, b2)),
            r.add(r.mul(y1, a2), r.mul(b1, y2)),
            r.add(r.mul(s, r.mul(y1, x2)), r.mul(b1, b2)),
        ])
    }
    fn neg(&self, p: Code) -> Code {
        let u = self.parts(p);
        let r = &self.base;
        self.encode([r.neg(u[0]), r.neg(u[1]), r.neg(u[2]), r.neg(u[3])])
    }
    fn zero(&self) -> Code {
        let z = self.base.zero();
        self.encode([z, z, z, z])
    }
    fn one(&self) -> Code {
        let (z, o) = (self.base.zero(), self.base.one());
        self.encode([o, z, z, o])
    }
    fn label(&self) -> String {
        format!("Ks({},{})", self.base.label(), self.s)
    }
    fn render(&self, c: Code) -> String {
        let p = self.parts(c).map(|v| self.base.render(v));
        format!("[[{},{}],[{},{}]]", p[0], p[1], p[2], p[3])
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}

pub fn ks(base: &Arc<FiniteRing>, s: i64, guard: &ResourceGuard) -> Result<Arc<FiniteRing>> {
    guard.check_power(base.size(), 4)?;
    FiniteRing::new(
        KsRing {
            base: base.clone(),
            s,
            s_code: base.from_int(s),
        },
        guard,
    )
}

/// R ∝ R: pairs (r, n) with (r,n)(r',n') = (rr', rn' + nr'). Code `r + N·n`.
#[derive(Debug)]
pub struct TrivialExtension {
    pub base: Arc<FiniteRing>,
}

impl TrivialExtension {
    pub fn parts(&self, c: Code) -> (Code, Code) {
        let n = self.base.size() as Code;
        (c % n, c / n)
    }

    pub fn encode(&self, r: Code, m: Code) -> Code {
        r + self.base.size() as Code * m
    }
}

impl RingOps for TrivialExtension {
    fn size(&self) -> usize {
        self.base.size().pow(2)
    }
    fn add(&self, p: Code, q: Code) -> Code {
        let ((r1, n1), (r2, n2)) = (self.parts(p), self.parts(q));
        self.encode(self.base.add(r1, r2), self.base.add(n1, n2))
    }
    fn mul(&self, p: Code, q: Code) -> Code {
        let ((r1, n1), (r2, n2)) = (self.parts(p), self.parts(q));
        let b = &self.base;
        self.encode(b.mul(r1, r2), b.add(b.mul(r1, n2), b.mul(n1, r2)))
    }
    fn neg(&self, p: Code) -> Code {
        let (r, n) = self.parts(p);
        self.encode(self.base.neg(r), self.base.neg(n))
    }
    fn zero(&self) -> Code {
        self.encode(self.base.zero(), self.base.zero())
    }
    fn one(&self) -> Code {
        self.encode(self.base.one(), self.base.zero())
    }
    fn label(&self) -> String {
        format!("TrivExt({})", self.base.label())
    }
    fn render(&self, c: Code) -> String {
        let (r, n) = self.parts(c);
        format!("({},{})", self.base.render(r), self.base.render(n))
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}

pub fn trivial_extension(base: &Arc<FiniteRing>, guard: &ResourceGuard) -> Result<Arc<FiniteRing>> {
    guard.check_power(base.size(), 2)?;
    FiniteRing::new(TrivialExtension { base: base.clone() }, guard)
}

/// Formal triangular ring (R M; 0 S) with M = R ⊗_Z S.
/// Code `r + |R|·(m + |M|·s)`.
#[derive(Debug)]
pub struct FormalTriangular {
    pub left: Arc<FiniteRing>,
    pub right: Arc<FiniteRing>,
    pub module: TensorBimodule,
}

impl FormalTriangular {
    pub fn parts(&self, c: Code) -> (Code, Code, Code) {
        let nr = self.left.size() as Code;
        let nm = self.module.size() as Code;
        (c % nr, (c / nr) % nm, c / (nr * nm))
    }

    pub fn encode(&self, r: Code, m: Code, s: Code) -> Code {
        let nr = self.left.size() as Code;
        let nm = self.module.size() as Code;
        r + nr * (m + nm * s)
    }

    /// Elements (0, m, 0).
    pub fn module_part(&self) -> Vec<Code> {
        (0..self.module.size() as Code)
            .map(|m| self.encode(self.left.zero(), m, self.right.zero()))
            .collect()
    }
}

impl RingOps for FormalTriangular {
    fn size(&self) -> usize {
        self.left.size() * self.module.size() * self.right.size()
    }
    fn add(&self, p: Code, q: Code) -> Code {
        let ((r1, m1, s1), (r2, m2, s2)) = (self.parts(p), self.parts(q));
        self.encode(self.left.add(r1, r2), self.module.add(m1, m2), self.right.add(s1, s2))
    }
    fn mul(&self, p: Code, q: Code) -> Code {
        let ((r1, m1, s1), (r2, m2, s2)) = (self.parts(p), self.parts(q));
        let m = self.module.add(self.module.act_left(r1, m2), self.module.act_right(m1, s2));
        self.encode(self.left.mul(r1, r2), m, self.right.mul(s1, s2))
    }
    fn neg(&self, p: Code) -> Code {
        let (r, m, s) = self.parts(p);
        self.encode(self.left.neg(r), self.module.neg(m), self.right.neg(s))
    }
    fn zero(&self) -> Code {
        self.encode(self.left.zero(), 0, self.right.zero())
    }
    fn one(&self) -> Code {
        self.encode(self.left.one(), 0, self.right.one())
    }
    fn label(&self) -> String {
        format!("FT({},{})", self.left.label(), self.right.label())
    }
    fn render(&self, c: Code) -> String {
        let (r, m, s) = self.parts(c);
        format!("[[{},m{}],[0,{}]]", self.left.render(r), m, self.right.render(s))
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}

pub fn formal_triangular(
    left: &Arc<FiniteRing>,
    right: &Arc<FiniteRing>,
    guard: &ResourceGuard,
) -> Result<Arc<FiniteRing>> {
    // |M| is only known after the tensor product is computed.
    guard.check(left.size() as u128 * right.size() as u128)?;
    let module = TensorBimodule::new(left, right, guard)?;
    guard.check(left.size() as u128 * module.size() as u128 * right.size() as u128)?;
    FiniteRing::new(
        FormalTriangular {
            left: left.clone(),
            right: right.clone(),
            module,
        },
        guard,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{polyquot, zmod};

    #[test]
    fn ks_basics() {
        let g = ResourceGuard::default();
        let z4 = zmod(4, &g).unwrap();
        let k = ks(&z4, 2, &g).unwrap();
        assert_eq!(k.size(), 256);
        let kr = k.construction::<KsRing>().unwrap();
        assert_eq!(kr.parts(k.one()), [1, 0, 0, 1]);
        assert_eq!(z4.mul(kr.s_code, kr.s_code), 0);

        let z2 = zmod(2, &g).unwrap();
        let k0 = ks(&z2, 0, &g).unwrap();
        assert!(k0.verify_ring_axioms(0).holds);
        let kr = k0.construction::<KsRing>().unwrap();
        for &p in &kr.off_diagonal() {
            for &q in &kr.off_diagonal() {
                assert_eq!(k0.mul(p, q), k0.zero());
            }
        }
    }

    #[test]
    fn ks_with_unit_scalar_is_full_matrix_arithmetic() {
        // K_1(R) = M_2(R); compare against the matrix product on parts.
        let g = ResourceGuard::default();
        let z3 = zmod(3, &g).unwrap();
        let k = ks(&z3, 1, &g).unwrap();
        let kr = k.construction::<KsRing>().unwrap();
        for p in k.codes().step_by(7) {
            for q in k.codes().step_by(5) {
                let ([a1, x1, y1, b1], [a2, x2, y2, b2]) = (kr.parts(p), kr.parts(q));
                let want = [
                    (a1 * a2 + x1 * y2) % 3,
                    (a1 * x2 + x1 * b2) % 3,
                    (y1 * a2 + b1 * y2) % 3,
                    (y1 * x2 + b1 * b2) % 3,
                ];
                assert_eq!(kr.parts(k.mul(p, q)), want);
            }
        }
    }

    #[test]
    fn trivial_extension_of_z2_matches_dual_numbers() {
        let g = ResourceGuard::default();
        let z2 = zmod(2, &g).unwrap();
        let t = trivial_extension(&z2, &g).unwrap();
        let p = polyquot(&z2, 2, &g).unwrap();
        assert_eq!(t.size(), 4);
        assert_eq!(t.one(), 1);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(t.mul(a, b), p.mul(a, b));
                assert_eq!(t.add(a, b), p.add(a, b));
            }
        }
        let te = t.construction::<TrivialExtension>().unwrap();
        let z4 = zmod(4, &g).unwrap();
        let t4 = trivial_extension(&z4, &g).unwrap();
        let te4 = t4.construction::<TrivialExtension>().unwrap();
        for n in 0..4 {
            let x = te4.encode(0, n);
            assert_eq!(t4.mul(x, x), 0);
        }
        assert_eq!(te.parts(3), (1, 1));
    }

    #[test]
    fn formal_triangular_z2_z2() {
        let g = ResourceGuard::default();
        let z2 = zmod(2, &g).unwrap();
        let ft = formal_triangular(&z2, &z2, &g).unwrap();
        // Z_2 ⊗ Z_2 = Z_2, so this is T_2(Z_2).
        assert_eq!(ft.size(), 8);
        assert!(ft.verify_ring_axioms(0).holds);
        let fr = ft.construction::<FormalTriangular>().unwrap();
        assert_eq!(ft.one(), fr.encode(1, 0, 1));
        for a in ft.codes() {
            assert_eq!(ft.mul(ft.one(), a), a);
            assert_eq!(ft.mul(a, ft.one()), a);
        }
        let m = fr.module_part();
        for &x in &m {
            for &y in &m {
                assert_eq!(ft.mul(x, y), ft.zero());
            }
        }
    }

    #[test]
    fn formal_triangular_mixed_characteristic() {
        let g = ResourceGuard::default();
        let z4 = zmod(4, &g).unwrap();
        let z2 = zmod(2, &g).unwrap();
        let ft = formal_triangular(&z4, &z2, &g).unwrap();
        assert_eq!(ft.size(), 4 * 2 * 2);
        assert!(ft.verify_ring_axioms(0).holds);
        let z3 = zmod(3, &g).unwrap();
        // Z_2 ⊗ Z_3 = 0: the ring is Z_2 × Z_3 in triangular clothing.
        let ft = formal_triangular(&z2, &z3, &g).unwrap();
        assert_eq!(ft.size(), 6);
        assert!(ft.verify_ring_axioms(0).holds);
    }
}
