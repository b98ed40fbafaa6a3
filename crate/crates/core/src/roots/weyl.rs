use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Root, RootError, RootSystem};

/// A product `s_{i_1} s_{i_2} ... s_{i_k}` of simple reflections. Acting on a
/// root applies `s_{i_k}` first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylWord(pub Vec<usize>);

impl WeylWord {
    pub fn identity() -> WeylWord {
        WeylWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn act(&self, rs: &RootSystem, r: Root) -> Root {
        self.0.iter().rev().fold(r, |acc, &i| rs.simple_reflection(i, acc))
    }

    /// The permutation of all roots.
    pub fn permutation(&self, rs: &RootSystem) -> Vec<Root> {
        rs.roots().map(|r| self.act(rs, r)).collect()
    }

    pub fn inverse(&self) -> WeylWord {
        WeylWord(self.0.iter().rev().copied().collect())
    }
}

impl RootSystem {
    /// A word `w` with `w(a) = b`, found by breadth-first search over the orbit.
    pub fn same_length_conjugator(&self, a: Root, b: Root) -> Result<WeylWord, RootError> {
        if self.norm(a) != self.norm(b) {
            return Err(RootError::DifferentLengths(
                self.vector(a).to_vec(),
                self.vector(b).to_vec(),
            ));
        }
        let mut parent: HashMap<Root, (Root, usize)> = HashMap::new();
        let mut queue = VecDeque::from([a]);
        parent.insert(a, (a, usize::MAX));
        while let Some(r) = queue.pop_front() {
            if r == b {
                break;
            }
            for i in 0..self.rank() {
                let s = self.simple_reflection(i, r);
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(s) {
                    e.insert((r, i));
                    queue.push_back(s);
                }
            }
        }
        let mut word = Vec::new();
        let mut cur = b;
        while cur != a {
            let (prev, i) = *parent
                .get(&cur)
                .ok_or_else(|| RootError::DifferentLengths(self.vector(a).to_vec(), self.vector(b).to_vec()))?;
            word.push(i);
            cur = prev;
        }
        Ok(WeylWord(word))
    }

    /// Every Weyl group element as a reduced word, in order of length, or
    /// `None` when the group has more than `cap` elements.
    pub fn weyl_elements(&self, cap: usize) -> Option<Vec<WeylWord>> {
        let ident: Vec<Root> = self.roots().collect();
        let mut seen: HashMap<Vec<Root>, ()> = HashMap::from([(ident.clone(), ())]);
        let mut out = vec![(WeylWord::identity(), ident)];
        let mut head = 0;
        while head < out.len() {
            let (w, perm) = out[head].clone();
            head += 1;
            for i in 0..self.rank() {
                // s_i w as permutation: apply w then s_i
                let next: Vec<Root> = perm.iter().map(|&r| self.simple_reflection(i, r)).collect();
                if seen.contains_key(&next) {
                    continue;
                }
                seen.insert(next.clone(), ());
                if out.len() >= cap {
                    return None;
                }
                let mut word = vec![i];
                word.extend(&w.0);
                out.push((WeylWord(word), next));
            }
        }
        Some(out.into_iter().map(|(w, _)| w).collect())
    }
}
