use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::bigcell::big_cell_factor;
use super::{check_supported, Bounds, DecompositionError, DecompositionReport};
use crate::group::{weyl_lift_inverse_word, weyl_lift_word, ElementaryWord, GroupElement};
use crate::ring::ArtinianDecomposition;
use crate::roots::{RootSystem, WeylWord};

fn weyl_group(rs: &RootSystem) -> Arc<Vec<WeylWord>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<Vec<WeylWord>>>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(Default::default).lock().expect("cache lock");
    cache
        .entry(rs.label())
        .or_insert_with(|| Arc::new(rs.weyl_elements(usize::MAX).expect("no cap")))
        .clone()
}

/// Finds `w` with `g ŵ^{-1}` in the big cell, searching `W` by length.
pub fn bruhat_decompose(g: &GroupElement) -> Result<(WeylWord, ElementaryWord), DecompositionError> {
    let ring = g.ring();
    let rep = g.rep();
    let rs = rep.root_system();
    if !ring.is_field() {
        return Err(DecompositionError::NotField(ring.label().to_string()));
    }
    check_supported(rs)?;
    for w in weyl_group(rs).iter() {
        let lifted_inv = GroupElement::evaluate(rep, ring, &weyl_lift_inverse_word(rep, ring, w));
        match big_cell_factor(&g.mul_unchecked(&lifted_inv)) {
            Ok(f) => {
                let mut word = f.word(rs, ring);
                word.extend(&weyl_lift_word(rep, ring, w));
                return Ok((w.clone(), word));
            }
            Err(DecompositionError::NotInBigCell) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(DecompositionError::NoBruhatCell)
}

/// Reduce modulo the maximal ideal, decompose the image, lift it to `h`,
/// and factor `g h^{-1}`, which lies in the big cell.
pub fn local_decompose(g: &GroupElement) -> Result<DecompositionReport, DecompositionError> {
    let ring = g.ring();
    let rep = g.rep();
    let rs = rep.root_system();
    check_supported(rs)?;
    let bounds = Bounds::of(rs);
    let (local, maximal) = ring.is_local();
    let maximal = match maximal {
        Some(m) if local => m,
        _ => return Err(DecompositionError::NotLocal(ring.label().to_string())),
    };
    if let Ok(f) = big_cell_factor(g) {
        return DecompositionReport::new(g, f.word(rs, ring), bounds.n, "N");
    }
    if maximal.len() == 1 {
        let (_, word) = bruhat_decompose(g)?;
        return DecompositionReport::new(g, word, bounds.n, "N");
    }
    let proj = maximal.quotient();
    let (_, residue_word) = bruhat_decompose(&g.reduce(&proj))?;
    let mut lifted = ElementaryWord::new();
    for l in &residue_word.letters {
        lifted.push(l.root, proj.lift(l.t));
    }
    let h_inv = GroupElement::evaluate(rep, ring, &lifted.inverse(ring));
    let t = g.mul_unchecked(&h_inv);
    let mut word = big_cell_factor(&t)?.word(rs, ring);
    word.extend(&lifted);
    DecompositionReport::new(g, word, bounds.n, "N")
}

/// Merges aligned letters of per-factor words: position `k` becomes
/// `Π_{α∈Φ} e_α(t_α)` where `t_α` collects the factor parameters at `α`.
pub fn product_merge_words(rs: &RootSystem, ad: &ArtinianDecomposition, words: &[ElementaryWord]) -> ElementaryWord {
    let len = words.iter().map(ElementaryWord::len).max().unwrap_or(0);
    let mut out = ElementaryWord::new();
    for k in 0..len {
        for a in rs.roots() {
            let parts: Vec<_> = words
                .iter()
                .map(|w| w.letters.get(k).filter(|l| l.root == a).map_or(0, |l| l.t))
                .collect();
            if parts.iter().any(|&t| t != 0) {
                out.push(a, ad.backward(&parts));
            }
        }
    }
    out
}

/// Checks and merges per-factor words for `g` over a product of local rings.
pub fn product_merge_decompose(
    g: &GroupElement,
    ad: &ArtinianDecomposition,
    words: &[ElementaryWord],
) -> Result<DecompositionReport, DecompositionError> {
    let rs = g.rep().root_system();
    let bounds = Bounds::of(rs);
    if words.len() != ad.factors.len() {
        return Err(DecompositionError::VerificationFailed);
    }
    if let Some(w) = words.iter().find(|w| w.len() > bounds.n) {
        return Err(DecompositionError::BoundExceeded { length: w.len(), bound: bounds.n });
    }
    DecompositionReport::new(g, product_merge_words(rs, ad, words), bounds.product, "N*|Phi|")
}

/// `g` projected to factor `i` of a decomposition.
pub fn project_to_factor(g: &GroupElement, ad: &ArtinianDecomposition, i: usize) -> GroupElement {
    let codes = g.codes().iter().map(|&a| ad.forward(a)[i]).collect();
    GroupElement::from_codes(g.rep(), &ad.factors[i], codes).expect("same shape")
}

/// Local decomposition, or the factorwise merge over a product of local rings.
pub fn decompose(g: &GroupElement) -> Result<DecompositionReport, DecompositionError> {
    let ring = g.ring();
    if ring.is_local().0 {
        return local_decompose(g);
    }
    let ad = ring.artinian_decompose();
    let words = (0..ad.factors.len())
        .map(|i| local_decompose(&project_to_factor(g, &ad, i)).map(|r| r.word))
        .collect::<Result<Vec<_>, _>>()?;
    product_merge_decompose(g, &ad, &words)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{subgroup_closure, RepKind, Representation};
    use crate::ring::RingSpec;

    #[test]
    fn sl2_gf3_weyl_element() {
        let rep = Representation::sl2();
        let ring = RingSpec::gf(3).unwrap();
        let g = GroupElement::from_codes(&rep, &ring, vec![0, 1, 2, 0]).unwrap();
        let (w, word) = bruhat_decompose(&g).unwrap();
        assert_eq!(w.0, vec![0]);
        let a = rep.root_system().simple_root(0);
        let params: Vec<_> = word.letters.iter().map(|l| (l.root, l.t)).collect();
        assert_eq!(params, vec![(a, 1), (rep.root_system().neg(a), 2), (a, 1)]);
        let (w, word) = bruhat_decompose(&GroupElement::identity(&rep, &ring)).unwrap();
        assert!(w.is_empty() && word.is_empty());
    }

    #[test]
    fn every_element_of_sl3_gf2() {
        let rep = Representation::for_type("A2", RepKind::Defining).unwrap();
        let ring = RingSpec::gf(2).unwrap();
        let rs = rep.root_system().clone();
        let gens: Vec<_> = rs.roots().map(|r| GroupElement::elementary(&rep, &ring, r, 1)).collect();
        let all = subgroup_closure(&gens, 1000).unwrap();
        assert_eq!(all.len(), 168);
        let bound = Bounds::of(&rs).n2;
        for g in all.elements() {
            let (_, word) = bruhat_decompose(g).unwrap();
            assert!(word.len() <= bound);
            assert_eq!(&GroupElement::evaluate(&rep, &ring, &word), g);
        }
    }

    #[test]
    fn local_fast_paths() {
        let rep = Representation::for_type("C2", RepKind::Defining).unwrap();
        let ring = RingSpec::zmod(9).unwrap();
        let r = local_decompose(&GroupElement::identity(&rep, &ring)).unwrap();
        assert!(r.is_empty());
        let a = rep.root_system().simple_root(1);
        let r = local_decompose(&GroupElement::elementary(&rep, &ring, a, 5)).unwrap();
        assert_eq!(r.len(), 1);
        let z6 = RingSpec::zmod(6).unwrap();
        assert!(matches!(
            local_decompose(&GroupElement::identity(&rep, &z6)),
            Err(DecompositionError::NotLocal(_))
        ));
    }

    #[test]
    fn merge_of_disjoint_letters() {
        let rep = Representation::for_type("A2", RepKind::Defining).unwrap();
        let rs = rep.root_system().clone();
        let ring = RingSpec::parse("Z/2 x Z/3").unwrap();
        let ad = ring.artinian_decompose();
        let a = rs.simple_root(0);
        let b = rs.simple_root(1);
        let words = [ElementaryWord::single(a, 1), ElementaryWord::single(b, 2)];
        let merged = product_merge_words(&rs, &ad, &words);
        let shown: Vec<_> = merged.letters.iter().map(|l| (l.root, ring.format_element(l.t))).collect();
        assert_eq!(shown, vec![(a, "(1,0)".to_string()), (b, "(0,2)".to_string())]);
        assert!(product_merge_words(&rs, &ad, &[ElementaryWord::new(), ElementaryWord::new()]).is_empty());
    }
}
