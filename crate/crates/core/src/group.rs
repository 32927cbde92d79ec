//! Finite groups given by Cayley table, with a small catalog.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Result, RingError};
use crate::numtheory::prime_power;

/// Group of order `order` with elements `0..order`. The catalog and the JSON
/// loader both put the identity at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: u32,
    inverse: Vec<u32>,
    label: String,
}

#[derive(Debug, Deserialize)]
struct GroupFile {
    order: usize,
    table: Vec<Vec<u32>>,
    label: String,
}

/// Refuse to build groups whose Cayley table would be unreasonably large.
const MAX_GROUP_ORDER: usize = 4096;

impl FiniteGroup {
    /// Validates the table: Latin square, identity at index 0, associativity.
    pub fn from_table(order: usize, table: Vec<u32>, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if order == 0 || order > MAX_GROUP_ORDER {
            return Err(RingError::InvalidGroup(format!("unsupported order {order}")));
        }
        if table.len() != order * order {
            return Err(RingError::InvalidGroup(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(RingError::InvalidGroup("entry out of range".into()));
        }
        for i in 0..order {
            let mut row = vec![false; order];
            let mut col = vec![false; order];
            for j in 0..order {
                row[table[i * order + j] as usize] = true;
                col[table[j * order + i] as usize] = true;
            }
            if row.iter().chain(&col).any(|&seen| !seen) {
                return Err(RingError::InvalidGroup(format!("row/column {i} is not a permutation")));
            }
        }
        for i in 0..order {
            if table[i] as usize != i || table[i * order] as usize != i {
                return Err(RingError::InvalidGroup("index 0 is not the identity".into()));
            }
        }
        let op = |a: usize, b: usize| table[a * order + b] as usize;
        for a in 0..order {
            for b in 0..order {
                let ab = op(a, b);
                for c in 0..order {
                    if op(ab, c) != op(a, op(b, c)) {
                        return Err(RingError::InvalidGroup(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let inverse = (0..order)
            .map(|a| (0..order).find(|&b| op(a, b) == 0).unwrap() as u32)
            .collect();
        Ok(FiniteGroup {
            order,
            table,
            identity: 0,
            inverse,
            label,
        })
    }

    fn from_fn(order: usize, label: String, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let table = (0..order * order)
            .map(|ij| f(ij / order, ij % order) as u32)
            .collect();
        FiniteGroup::from_table(order, table, label)
    }

    /// Cyclic group; index i is g^i.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(RingError::InvalidParameter("C(0)".into()));
        }
        FiniteGroup::from_fn(n, format!("C({n})"), |a, b| (a + b) % n)
    }

    /// Dihedral group of order 2n; index i + n·f is r^i s^f.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(RingError::InvalidParameter("D(0)".into()));
        }
        FiniteGroup::from_fn(2 * n, format!("D({n})"), |x, y| {
            let (i, f) = (x % n, x / n);
            let (j, g) = (y % n, y / n);
            let rot = if f == 0 { (i + j) % n } else { (i + n - j) % n };
            rot + n * ((f + g) % 2)
        })
    }

    /// Quaternion group, indices 1, -1, i, -i, j, -j, k, -k.
    pub fn quaternion() -> Result<Self> {
        // Unit 0..4 = 1, i, j, k; sign bit separate.
        const UNIT_MUL: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        FiniteGroup::from_fn(8, "Q8".into(), |x, y| {
            let (u, su) = (x / 2, x % 2 == 1);
            let (v, sv) = (y / 2, y % 2 == 1);
            let (w, sw) = UNIT_MUL[u][v];
            2 * w + usize::from(su ^ sv ^ sw)
        })
    }

    /// Symmetric group on n points; permutations in lexicographic order, so
    /// index 0 is the identity. Product is composition `(στ)(x) = σ(τ(x))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 6 {
            return Err(RingError::InvalidParameter(format!("S({n}) unsupported")));
        }
        let perms = permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
        FiniteGroup::from_fn(perms.len(), format!("S({n})"), |a, b| {
            let composed: Vec<usize> = (0..n).map(|x| perms[a][perms[b][x]]).collect();
            index(&composed)
        })
    }

    /// Direct product; index a + |G|·b.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let order = g.order * h.order;
        if order > MAX_GROUP_ORDER {
            return Err(RingError::InvalidParameter("group product too large".into()));
        }
        FiniteGroup::from_fn(order, format!("GxG({},{})", g.label, h.label), |x, y| {
            let (a1, b1) = (x % g.order, x / g.order);
            let (a2, b2) = (y % g.order, y / g.order);
            g.op(a1 as u32, a2 as u32) as usize + g.order * h.op(b1 as u32, b2 as u32) as usize
        })
    }

    /// Parses the Cayley-table JSON `{"order", "table", "label"}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: GroupFile =
            serde_json::from_str(text).map_err(|e| RingError::InvalidGroup(e.to_string()))?;
        if file.table.len() != file.order || file.table.iter().any(|r| r.len() != file.order) {
            return Err(RingError::InvalidGroup("table is not order × order".into()));
        }
        FiniteGroup::from_table(file.order, file.table.concat(), file.label)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RingError::Io(format!("{}: {e}", path.display())))?;
        FiniteGroup::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<u32>> = self.table.chunks(self.order).map(<[u32]>::to_vec).collect();
        serde_json::json!({"order": self.order, "table": rows, "label": self.label}).to_string()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    #[inline]
    pub fn op(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// Order o(g) of an element.
    pub fn element_order(&self, g: u32) -> u64 {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.op(x, g);
            k += 1;
        }
        k
    }

    /// `Some(p)` when every element order is a power of the prime p.
    /// The trivial group reports `None`.
    pub fn p_group_prime(&self) -> Option<u64> {
        prime_power(self.order as u64).map(|(p, _)| p)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order as u32).all(|a| (0..self.order as u32).all(|b| self.op(a, b) == self.op(b, a)))
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}
