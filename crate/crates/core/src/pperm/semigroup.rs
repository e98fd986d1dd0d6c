use std::collections::VecDeque;
use std::fmt;

use indexmap::IndexSet;

use super::PartialPermutation;
use crate::error::{Error, Result};
use crate::exec::Execution;

/// A finite semigroup of partial permutations, elements in discovery order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semigroup {
    size: usize,
    elements: IndexSet<PartialPermutation>,
    generators: Vec<PartialPermutation>,
}

impl Semigroup {
    /// Breadth-first closure of `gens` under composition. Duplicated
    /// generators are kept once; element order is insertion order.
    pub fn generate(gens: &[PartialPermutation]) -> Result<Semigroup> {
        let first = gens
            .first()
            .ok_or_else(|| Error::InvalidArgument("a semigroup needs at least one generator".into()))?;
        let size = first.size();
        if let Some(bad) = gens.iter().find(|g| g.size() != size) {
            return Err(Error::SizeMismatch { left: size, right: bad.size() });
        }
        let mut elements: IndexSet<PartialPermutation> = IndexSet::new();
        let mut queue = VecDeque::new();
        for g in gens {
            if elements.insert(g.clone()) {
                queue.push_back(g.clone());
            }
        }
        let generators: Vec<PartialPermutation> = elements.iter().cloned().collect();
        // every product g1⋯gk is (g1⋯g(k−1))·gk, so right multiplication suffices
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = x.compose(g)?;
                if !elements.contains(&y) {
                    elements.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(Semigroup { size, elements, generators })
    }

    /// The size `M` of the underlying set `{1, …, M}`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = &PartialPermutation> {
        self.elements.iter()
    }

    pub fn generators(&self) -> &[PartialPermutation] {
        &self.generators
    }

    pub fn contains(&self, p: &PartialPermutation) -> bool {
        self.elements.contains(p)
    }

    /// Elements in canonical order (rank, then image array).
    pub fn sorted_elements(&self) -> Vec<PartialPermutation> {
        let mut v: Vec<_> = self.elements.iter().cloned().collect();
        v.sort();
        v
    }

    pub fn is_closed(&self) -> bool {
        self.is_closed_with(Execution::default())
    }

    pub fn is_closed_with(&self, exec: Execution) -> bool {
        let elems: Vec<&PartialPermutation> = self.elements.iter().collect();
        exec.all(&elems, |a| {
            elems
                .iter()
                .all(|b| a.compose(b).map(|c| self.elements.contains(&c)).unwrap_or(false))
        })
    }

    pub fn idempotents(&self) -> Vec<&PartialPermutation> {
        self.elements.iter().filter(|e| e.is_idempotent()).collect()
    }

    /// The two-sided identity element, if any.
    pub fn identity(&self) -> Option<&PartialPermutation> {
        self.elements.iter().find(|e| {
            self.elements
                .iter()
                .all(|x| composes_to(e, x, x) && composes_to(x, e, x))
        })
    }

    /// True when there is an identity and every element has a two-sided inverse in the set.
    pub fn is_group(&self) -> bool {
        let Some(e) = self.identity() else {
            return false;
        };
        self.elements.iter().all(|x| {
            self.elements
                .iter()
                .any(|y| composes_to(x, y, e) && composes_to(y, x, e))
        })
    }
}

fn composes_to(a: &PartialPermutation, b: &PartialPermutation, target: &PartialPermutation) -> bool {
    matches!(a.compose(b), Ok(ref c) if c == target)
}

impl fmt::Display for Semigroup {
    /// Header `semigroup M order`, then one element per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "semigroup {} {}", self.size, self.order())?;
        for e in &self.elements {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}
