use std::collections::HashMap;

use super::element::GroupElement;
use super::rep::GroupError;

/// Subgroup generated by a finite set, enumerated breadth first.
#[derive(Clone, Debug)]
pub struct Closure {
    elements: Vec<GroupElement>,
    /// `(parent, generator)` for every element except the identity.
    parents: Vec<Option<(usize, usize)>>,
    index: HashMap<GroupElement, usize>,
    generators: Vec<GroupElement>,
}

impl Closure {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    /// Generator indices whose product, left to right, is `g`.
    pub fn word_for(&self, g: &GroupElement) -> Option<Vec<usize>> {
        let mut at = *self.index.get(g)?;
        let mut word = Vec::new();
        while let Some((p, s)) = self.parents[at] {
            word.push(s);
            at = p;
        }
        word.reverse();
        Some(word)
    }
}

/// Closes `generators` and their inverses under multiplication. Fails when
/// more than `cap` elements appear.
pub fn subgroup_closure(generators: &[GroupElement], cap: usize) -> Result<Closure, GroupError> {
    let first = generators.first().ok_or(GroupError::Mismatch)?;
    let identity = GroupElement::identity(first.rep(), first.ring());
    let mut gens: Vec<GroupElement> = Vec::new();
    for g in generators {
        if g.ring() != first.ring() || !std::ptr::eq(&**g.rep(), &**first.rep()) {
            return Err(GroupError::Mismatch);
        }
        for h in [g.clone(), g.inv()?] {
            if !h.is_identity() && !gens.contains(&h) {
                gens.push(h);
            }
        }
    }
    let mut closure = Closure {
        elements: vec![identity.clone()],
        parents: vec![None],
        index: HashMap::from([(identity, 0)]),
        generators: gens,
    };
    let mut head = 0;
    while head < closure.elements.len() {
        for s in 0..closure.generators.len() {
            let next = closure.elements[head].mul_unchecked(&closure.generators[s]);
            if closure.index.contains_key(&next) {
                continue;
            }
            if closure.elements.len() >= cap {
                return Err(GroupError::CapExceeded(cap));
            }
            closure.index.insert(next.clone(), closure.elements.len());
            closure.elements.push(next);
            closure.parents.push(Some((head, s)));
        }
        head += 1;
    }
    Ok(closure)
}
