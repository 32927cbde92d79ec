//! Rings carved out of an existing ring: corners, unital subrings and
//! quotients, together with ideal closure.

use std::any::Any;
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Result, RingError};
use crate::ring::{Code, FiniteRing, ResourceGuard, RingId, RingOps};

/// A two-sided ideal of a specific ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSet {
    pub ring: RingId,
    pub members: BitSet,
    pub gens: Vec<Code>,
}

impl IdealSet {
    pub fn contains(&self, a: Code) -> bool {
        self.members.contains(a)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn elements(&self) -> Vec<Code> {
        self.members.to_vec()
    }

    /// Wraps an explicit subset, checking it is a two-sided ideal.
    pub fn from_members(ring: &FiniteRing, members: BitSet, gens: Vec<Code>) -> Result<Self> {
        let ideal = IdealSet {
            ring: ring.id(),
            members,
            gens,
        };
        check_ideal(ring, &ideal)?;
        Ok(ideal)
    }
}

/// Adds `y` to an additive subgroup, returning whether the span grew.
fn extend_span(ring: &FiniteRing, span: &mut BitSet, members: &mut Vec<Code>, y: Code) -> bool {
    if span.contains(y) {
        return false;
    }
    let base = members.clone();
    let mut multiple = y;
    while !span.contains(multiple) {
        for &m in &base {
            let z = ring.add(m, multiple);
            if span.insert(z) {
                members.push(z);
            }
        }
        multiple = ring.add(multiple, y);
    }
    true
}

/// Smallest two-sided ideal containing `gens`.
pub fn ideal_closure(ring: &FiniteRing, gens: &[Code]) -> IdealSet {
    let ring_gens = ring.additive_generators();
    let mut span = BitSet::new(ring.size());
    span.insert(ring.zero());
    let mut members = vec![ring.zero()];
    let mut work: Vec<Code> = gens.iter().rev().copied().collect();
    while let Some(y) = work.pop() {
        if extend_span(ring, &mut span, &mut members, y) {
            for &g in &ring_gens {
                work.push(ring.mul(g, y));
                work.push(ring.mul(y, g));
            }
        }
    }
    IdealSet {
        ring: ring.id(),
        members: span,
        gens: gens.to_vec(),
    }
}

fn check_ideal(ring: &FiniteRing, ideal: &IdealSet) -> Result<()> {
    if ideal.ring != ring.id() {
        return Err(RingError::ForeignElement);
    }
    if ideal.members.domain() != ring.size() {
        return Err(RingError::NotAnIdeal("membership set has the wrong domain".into()));
    }
    if !ideal.contains(ring.zero()) {
        return Err(RingError::NotAnIdeal("zero is missing".into()));
    }
    // Closure under adding a generating set of ⟨I⟩ forces I = ⟨I⟩.
    let mut span = BitSet::new(ring.size());
    span.insert(ring.zero());
    let mut span_members = vec![ring.zero()];
    let mut add_gens = Vec::new();
    for i in ideal.members.iter() {
        if extend_span(ring, &mut span, &mut span_members, i) {
            add_gens.push(i);
        }
    }
    let ring_gens = ring.additive_generators();
    for i in ideal.members.iter() {
        for &j in &add_gens {
            let s = ring.add(i, j);
            if !ideal.contains(s) {
                return Err(RingError::NotAnIdeal(format!("#{i} + #{j} = #{s} escapes")));
            }
        }
        for &g in &ring_gens {
            for p in [ring.mul(g, i), ring.mul(i, g)] {
                if !ideal.contains(p) {
                    return Err(RingError::NotAnIdeal(format!("a product with #{i} escapes")));
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivedKind {
    Corner { e: Code },
    Subring { gens: Vec<Code> },
    Quotient { gens: Vec<Code> },
}

/// A ring whose elements stand for parent elements (corner, subring) or
/// cosets (quotient, represented by their minimal parent code).
#[derive(Debug)]
pub struct DerivedRing {
    pub parent: Arc<FiniteRing>,
    pub kind: DerivedKind,
    /// Parent code of every element, ascending.
    reps: Vec<Code>,
    /// Parent code -> element code (`Code::MAX` when outside a subset).
    index: Vec<Code>,
    one: Code,
}

impl DerivedRing {
    pub fn lift(&self, a: Code) -> Code {
        self.reps[a as usize]
    }

    /// Image of a parent element: its coset for quotients, its position for
    /// subsets (None when outside).
    pub fn project(&self, parent_code: Code) -> Option<Code> {
        match self.index[parent_code as usize] {
            Code::MAX => None,
            c => Some(c),
        }
    }

    fn from_subset(parent: &Arc<FiniteRing>, kind: DerivedKind, mut reps: Vec<Code>, one: Code) -> Self {
        reps.sort_unstable();
        reps.dedup();
        let mut index = vec![Code::MAX; parent.size()];
        for (i, &r) in reps.iter().enumerate() {
            index[r as usize] = i as Code;
        }
        let one = index[one as usize];
        DerivedRing {
            parent: parent.clone(),
            kind,
            reps,
            index,
            one,
        }
    }

    #[inline]
    fn reduce(&self, parent_code: Code) -> Code {
        let c = self.index[parent_code as usize];
        debug_assert_ne!(c, Code::MAX, "derived ring not closed");
        c
    }
}

impl RingOps for DerivedRing {
    fn size(&self) -> usize {
        self.reps.len()
    }
    fn add(&self, a: Code, b: Code) -> Code {
        self.reduce(self.parent.add(self.lift(a), self.lift(b)))
    }
    fn mul(&self, a: Code, b: Code) -> Code {
        self.reduce(self.parent.mul(self.lift(a), self.lift(b)))
    }
    fn neg(&self, a: Code) -> Code {
        self.reduce(self.parent.neg(self.lift(a)))
    }
    fn zero(&self) -> Code {
        self.reduce(self.parent.zero())
    }
    fn one(&self) -> Code {
        self.one
    }
    fn label(&self) -> String {
        let p = self.parent.label();
        let list = |gens: &[Code]| gens.iter().map(|g| format!(",#{g}")).collect::<String>();
        match &self.kind {
            DerivedKind::Corner { e } => format!("Corner({p},#{e})"),
            DerivedKind::Subring { gens } => format!("Sub({p}{})", list(gens)),
            DerivedKind::Quotient { gens } => format!("Quot({p}{})", list(gens)),
        }
    }
    fn render(&self, a: Code) -> String {
        let inner = self.parent.render(self.lift(a));
        match self.kind {
            DerivedKind::Quotient { .. } => format!("{inner}+I"),
            _ => inner,
        }
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// eRe with identity e.
pub fn corner(ring: &Arc<FiniteRing>, e: Code, guard: &ResourceGuard) -> Result<Arc<FiniteRing>> {
    if e as usize >= ring.size() {
        return Err(RingError::CodeOutOfRange {
            code: e as u64,
            size: ring.size(),
        });
    }
    if ring.mul(e, e) != e {
        return Err(RingError::NotIdempotent(e));
    }
    if e == ring.zero() {
        return Err(RingError::InvalidParameter("corner at zero is the zero ring".into()));
    }
    let reps: Vec<Code> = ring.codes().map(|r| ring.mul(ring.mul(e, r), e)).collect();
    FiniteRing::new(
        DerivedRing::from_subset(ring, DerivedKind::Corner { e }, reps, e),
        guard,
    )
}

/// Smallest subring containing `gens`, 0 and 1.
pub fn subring_closure(ring: &Arc<FiniteRing>, gens: &[Code], guard: &ResourceGuard) -> Result<Arc<FiniteRing>> {
    if let Some(&g) = gens.iter().find(|&&g| g as usize >= ring.size()) {
        return Err(RingError::CodeOutOfRange {
            code: g as u64,
            size: ring.size(),
        });
    }
    let mut span = BitSet::new(ring.size());
    span.insert(ring.zero());
    let mut members = vec![ring.zero()];
    let mut basis: Vec<Code> = Vec::new();
    let mut work: Vec<Code> = gens.iter().rev().copied().collect();
    work.push(ring.one());
    while let Some(y) = work.pop() {
        if extend_span(ring, &mut span, &mut members, y) {
            basis.push(y);
            for &x in &basis {
                work.push(ring.mul(x, y));
                work.push(ring.mul(y, x));
            }
        }
    }
    FiniteRing::new(
        DerivedRing::from_subset(
            ring,
            DerivedKind::Subring { gens: gens.to_vec() },
            members,
            ring.one(),
        ),
        guard,
    )
}

/// R/I with minimal-code coset representatives, cosets numbered in
/// ascending order of representative.
pub fn quotient(ring: &Arc<FiniteRing>, ideal: &IdealSet, guard: &ResourceGuard) -> Result<Arc<FiniteRing>> {
    check_ideal(ring, ideal)?;
    let members = ideal.elements();
    let mut index = vec![Code::MAX; ring.size()];
    let mut reps = Vec::new();
    for x in ring.codes() {
        if index[x as usize] != Code::MAX {
            continue;
        }
        let c = reps.len() as Code;
        reps.push(x);
        for &i in &members {
            index[ring.add(x, i) as usize] = c;
        }
    }
    let one = index[ring.one() as usize];
    FiniteRing::new(
        DerivedRing {
            parent: ring.clone(),
            kind: DerivedKind::Quotient {
                gens: ideal.gens.clone(),
            },
            reps,
            index,
            one,
        },
        guard,
    )
}
