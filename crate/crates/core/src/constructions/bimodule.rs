//! The (R, S)-bimodule R ⊗_Z S, computed from additive presentations.
//!
//! Each additive group is presented as Z^t modulo a relation lattice. The
//! tensor product is Z^(t·u) modulo the lattice spanned by `rel_R ⊗ e_j`,
//! `e_i ⊗ rel_S` and `g·Z^(t·u)` with `g = gcd(char R, char S)`. An upper
//! triangular basis of that lattice gives unique reduced representatives,
//! which are coded in mixed radix over the diagonal.

use num_integer::Integer;

use crate::error::Result;
use crate::ring::{Code, FiniteRing, ResourceGuard};

/// Additive group of a finite ring as Z^t / relations.
#[derive(Debug, Clone)]
pub struct AdditivePresentation {
    pub generators: Vec<Code>,
    /// Coordinates of every element, `coords[x]` has length t.
    pub coords: Vec<Vec<i64>>,
    pub relations: Vec<Vec<i64>>,
}

impl AdditivePresentation {
    pub fn of(ring: &FiniteRing) -> Self {
        let n = ring.size();
        let mut coords: Vec<Option<Vec<i64>>> = vec![None; n];
        let mut members = vec![ring.zero()];
        let mut generators = Vec::new();
        let mut relations = Vec::new();
        let mut pending_zero = true;
        for x in ring.codes() {
            if pending_zero {
                coords[ring.zero() as usize] = Some(Vec::new());
                pending_zero = false;
            }
            if coords[x as usize].is_some() {
                continue;
            }
            let t = generators.len();
            generators.push(x);
            for c in coords.iter_mut().flatten() {
                c.push(0);
            }
            // Smallest m with m·x in the old span gives the relation
            // m·e_t - coords(m·x).
            let mut multiple = x;
            let mut m = 1i64;
            while coords[multiple as usize].is_none() {
                multiple = ring.add(multiple, x);
                m += 1;
            }
            let mut rel: Vec<i64> = coords[multiple as usize].clone().unwrap().iter().map(|v| -v).collect();
            rel[t] += m;
            relations.push(rel);
            let old = members.clone();
            for &base in &old {
                let mut y = base;
                for c in 1..m {
                    y = ring.add(y, x);
                    let mut v = coords[base as usize].clone().unwrap();
                    v[t] = c;
                    coords[y as usize] = Some(v);
                    members.push(y);
                }
            }
        }
        let t = generators.len();
        let coords = coords
            .into_iter()
            .map(|c| {
                let mut c = c.expect("every element is reached");
                c.resize(t, 0);
                c
            })
            .collect();
        for r in &mut relations {
            r.resize(t, 0);
        }
        AdditivePresentation {
            generators,
            coords,
            relations,
        }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

/// Upper-triangular basis of a full-rank lattice containing `modulus·Z^dim`.
#[derive(Debug, Clone)]
pub struct TriangularLattice {
    modulus: i64,
    rows: Vec<Vec<i64>>,
}

impl TriangularLattice {
    pub fn new(dim: usize, modulus: i64) -> Self {
        let rows = (0..dim)
            .map(|k| {
                let mut r = vec![0; dim];
                r[k] = modulus;
                r
            })
            .collect();
        TriangularLattice { modulus, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.dim()).map(|k| self.rows[k][k]).collect()
    }

    pub fn insert(&mut self, v: &[i64]) {
        let d = self.modulus;
        let mut r: Vec<i64> = v.iter().map(|x| x.rem_euclid(d)).collect();
        for k in 0..self.dim() {
            if r[k] == 0 {
                continue;
            }
            let a = self.rows[k][k];
            let b = r[k];
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let (ag, bg) = (a / g, b / g);
            let row = &self.rows[k];
            let mut new_row = vec![0; self.dim()];
            let mut new_r = vec![0; self.dim()];
            for j in k..self.dim() {
                let (p, q) = (row[j] as i128, r[j] as i128);
                let nr = x as i128 * p + y as i128 * q;
                let rr = ag as i128 * q - bg as i128 * p;
                new_row[j] = if j == k { nr as i64 } else { nr.rem_euclid(d as i128) as i64 };
                new_r[j] = rr.rem_euclid(d as i128) as i64;
            }
            debug_assert_eq!(new_r[k], 0);
            debug_assert_eq!(new_row[k], g);
            self.rows[k] = new_row;
            r = new_r;
        }
    }

    /// Reduces `v` to the unique representative with `0 <= v_k < diag_k`.
    pub fn reduce(&self, v: &mut [i64]) {
        for k in 0..self.dim() {
            let h = self.rows[k][k];
            let q = v[k].div_euclid(h);
            if q != 0 {
                for j in k..self.dim() {
                    v[j] -= q * self.rows[k][j];
                }
            }
        }
    }
}

/// R ⊗_Z S with codes for its elements and tabulated actions.
#[derive(Debug, Clone)]
pub struct TensorBimodule {
    rank_left: usize,
    rank_right: usize,
    lattice: TriangularLattice,
    weights: Vec<u64>,
    size: usize,
    /// `left[r * size + m] = r·m`.
    left: Vec<Code>,
    /// `right[m * |S| + s] = m·s`.
    right: Vec<Code>,
    right_size: usize,
}

impl TensorBimodule {
    pub fn new(left_ring: &FiniteRing, right_ring: &FiniteRing, guard: &ResourceGuard) -> Result<Self> {
        let pa = AdditivePresentation::of(left_ring);
        let pb = AdditivePresentation::of(right_ring);
        let (t, u) = (pa.rank(), pb.rank());
        let dim = t * u;
        let g = left_ring.characteristic().gcd(&right_ring.characteristic()) as i64;
        let mut lattice = TriangularLattice::new(dim, g);
        for rel in &pa.relations {
            for j in 0..u {
                let mut v = vec![0; dim];
                for i in 0..t {
                    v[i * u + j] = rel[i];
                }
                lattice.insert(&v);
            }
        }
        for rel in &pb.relations {
            for i in 0..t {
                let mut v = vec![0; dim];
                for j in 0..u {
                    v[i * u + j] = rel[j];
                }
                lattice.insert(&v);
            }
        }
        let diag = lattice.diagonal();
        let mut weights = Vec::with_capacity(dim);
        let mut total: u128 = 1;
        for &h in &diag {
            weights.push(total as u64);
            total = total.saturating_mul(h as u128);
        }
        let size = guard.check(total)?;

        let mut module = TensorBimodule {
            rank_left: t,
            rank_right: u,
            lattice,
            weights,
            size,
            left: Vec::new(),
            right: Vec::new(),
            right_size: right_ring.size(),
        };
        let vectors: Vec<Vec<i64>> = (0..size as Code).map(|m| module.decode(m)).collect();

        // r·(x_i ⊗ y_j) = (r x_i) ⊗ y_j
        let mut left = Vec::with_capacity(left_ring.size() * size);
        for r in left_ring.codes() {
            let images: Vec<&Vec<i64>> = pa
                .generators
                .iter()
                .map(|&x| &pa.coords[left_ring.mul(r, x) as usize])
                .collect();
            for w in &vectors {
                let mut z = vec![0i64; dim];
                for i in 0..t {
                    for j in 0..u {
                        let c = w[i * u + j];
                        if c != 0 {
                            for (k, &a) in images[i].iter().enumerate() {
                                z[k * u + j] += c * a;
                            }
                        }
                    }
                }
                left.push(module.encode(&mut z));
            }
        }
        // (x_i ⊗ y_j)·s = x_i ⊗ (y_j s)
        let mut right = Vec::with_capacity(size * right_ring.size());
        let right_images: Vec<Vec<&Vec<i64>>> = right_ring
            .codes()
            .map(|s| {
                pb.generators
                    .iter()
                    .map(|&y| &pb.coords[right_ring.mul(y, s) as usize])
                    .collect()
            })
            .collect();
        for w in &vectors {
            for images in &right_images {
                let mut z = vec![0i64; dim];
                for i in 0..t {
                    for j in 0..u {
                        let c = w[i * u + j];
                        if c != 0 {
                            for (l, &b) in images[j].iter().enumerate() {
                                z[i * u + l] += c * b;
                            }
                        }
                    }
                }
                right.push(module.encode(&mut z));
            }
        }
        module.left = left;
        module.right = right;
        Ok(module)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ranks(&self) -> (usize, usize) {
        (self.rank_left, self.rank_right)
    }

    fn decode(&self, m: Code) -> Vec<i64> {
        let diag = self.lattice.diagonal();
        let mut rest = m as u64;
        diag.iter()
            .map(|&h| {
                let d = rest % h as u64;
                rest /= h as u64;
                d as i64
            })
            .collect()
    }

    fn encode(&self, v: &mut [i64]) -> Code {
        self.lattice.reduce(v);
        v.iter().zip(&self.weights).map(|(&d, &w)| d as u64 * w).sum::<u64>() as Code
    }

    pub fn add(&self, a: Code, b: Code) -> Code {
        let mut v: Vec<i64> = self.decode(a).iter().zip(self.decode(b)).map(|(x, y)| x + y).collect();
        self.encode(&mut v)
    }

    pub fn neg(&self, a: Code) -> Code {
        let mut v: Vec<i64> = self.decode(a).iter().map(|x| -x).collect();
        self.encode(&mut v)
    }

    #[inline]
    pub fn act_left(&self, r: Code, m: Code) -> Code {
        self.left[r as usize * self.size + m as usize]
    }

    #[inline]
    pub fn act_right(&self, m: Code, s: Code) -> Code {
        self.right[m as usize * self.right_size + s as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gf, zmod};

    fn check_bimodule(r: &FiniteRing, s: &FiniteRing, m: &TensorBimodule) {
        let n = m.size() as Code;
        for a in 0..n {
            assert_eq!(m.act_left(r.one(), a), a);
            assert_eq!(m.act_right(a, s.one()), a);
            assert_eq!(m.add(a, m.neg(a)), 0);
            for x in r.codes() {
                for y in s.codes() {
                    assert_eq!(m.act_right(m.act_left(x, a), y), m.act_left(x, m.act_right(a, y)));
                }
                for x2 in r.codes() {
                    assert_eq!(m.act_left(r.mul(x, x2), a), m.act_left(x, m.act_left(x2, a)));
                }
            }
            for b in 0..n {
                for x in r.codes() {
                    assert_eq!(m.act_left(x, m.add(a, b)), m.add(m.act_left(x, a), m.act_left(x, b)));
                }
            }
        }
    }

    #[test]
    fn tensor_sizes_match_gcd_formula() {
        // Z_a ⊗ Z_b = Z_gcd(a,b)
        let g = ResourceGuard::default();
        for (a, b) in [(2u64, 2u64), (4, 6), (2, 3), (9, 6), (8, 4)] {
            let (ra, rb) = (zmod(a, &g).unwrap(), zmod(b, &g).unwrap());
            let m = TensorBimodule::new(&ra, &rb, &g).unwrap();
            assert_eq!(m.size() as u64, a.gcd(&b), "Z({a}) ⊗ Z({b})");
            check_bimodule(&ra, &rb, &m);
        }
    }

    #[test]
    fn tensor_of_extension_fields() {
        // GF(4) ⊗ GF(4) has dimension 4 over F_2.
        let g = ResourceGuard::default();
        let f4 = gf(4, &g).unwrap();
        let m = TensorBimodule::new(&f4, &f4, &g).unwrap();
        assert_eq!(m.size(), 16);
        check_bimodule(&f4, &f4, &m);
        let z2 = zmod(2, &g).unwrap();
        let m = TensorBimodule::new(&f4, &z2, &g).unwrap();
        assert_eq!(m.size(), 4);
        check_bimodule(&f4, &z2, &m);
    }

    #[test]
    fn presentation_covers_group() {
        let g = ResourceGuard::default();
        let z12 = zmod(12, &g).unwrap();
        let p = AdditivePresentation::of(&z12);
        assert_eq!(p.generators, vec![1]);
        assert_eq!(p.relations, vec![vec![12]]);
    }
}
