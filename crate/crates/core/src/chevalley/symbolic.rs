//! Commutator coefficients from the adjoint action over `Z[s, t]`.
//!
//! The commutator `x_α(s) x_β(t) x_α(-s) x_β(-t)` is applied to a few basis
//! columns with polynomial entries. Factors `x_γ(c s^i t^j)` are then peeled
//! off from the left in the fixed order; the coefficient `c` is read from the
//! `s^i t^j` term of entry `γ` of a Cartan column, where no other remaining
//! factor can contribute.

use std::collections::BTreeMap;

use num_rational::Ratio;

use super::{ChevalleyBasis, CommutatorCoefficient};
use crate::intmat::IntMatrix;
use crate::roots::Root;

type Poly = BTreeMap<(u32, u32), i64>;

fn add_term(p: &mut Poly, mono: (u32, u32), c: i64) {
    if c == 0 {
        return;
    }
    let e = p.entry(mono).or_insert(0);
    *e += c;
    if *e == 0 {
        p.remove(&mono);
    }
}

/// `v <- exp(c s^i t^j X) v` given the divided powers of `X`.
fn apply_exp(powers: &[IntMatrix], c: i64, mono: (u32, u32), v: &[Poly]) -> Vec<Poly> {
    let mut out = v.to_vec();
    let mut ck = 1i64;
    for (k, d) in powers.iter().enumerate() {
        let k = k as u32 + 1;
        ck *= c;
        let shift = (mono.0 * k, mono.1 * k);
        for (row, entries) in d.rows.iter().enumerate() {
            for &(col, x) in entries {
                for (&(a, b), &y) in &v[col] {
                    add_term(&mut out[row], (a + shift.0, b + shift.1), ck * x * y);
                }
            }
        }
    }
    out
}

pub(super) fn commutator_coefficients(basis: &ChevalleyBasis, a: Root, b: Root) -> Vec<CommutatorCoefficient> {
    let rs = basis.root_system();
    let terms = rs.commutator_root_list(a, b).expect("β ≠ -α");
    if terms.is_empty() {
        return Vec::new();
    }
    let ad = basis.adjoint_divided_powers();
    let dim = basis.dim();
    let m = rs.len();
    let full = dim <= 60;
    let columns: Vec<usize> = if full { (0..dim).collect() } else { (m..dim).collect() };
    let mut vecs: Vec<Vec<Poly>> = columns
        .iter()
        .map(|&q| {
            let mut v = vec![Poly::new(); dim];
            v[q].insert((0, 0), 1);
            v
        })
        .collect();
    for v in vecs.iter_mut() {
        *v = apply_exp(&ad[b], -1, (0, 1), v);
        *v = apply_exp(&ad[a], -1, (1, 0), v);
        *v = apply_exp(&ad[b], 1, (0, 1), v);
        *v = apply_exp(&ad[a], 1, (1, 0), v);
    }
    let mut out = Vec::with_capacity(terms.len());
    for term in terms {
        let g = term.root;
        let i = (0..rs.rank())
            .find(|&i| rs.pairing(g, rs.simple_root(i)) != 0)
            .expect("some simple coroot pairs nontrivially");
        let col = columns.iter().position(|&q| q == m + i).unwrap();
        // x_γ(u) h_i = h_i - u <γ, α_i^∨> e_γ + ...
        let entry = vecs[col][g].get(&(term.i, term.j)).copied().unwrap_or(0);
        let c = Ratio::new(entry, -rs.pairing(g, rs.simple_root(i)));
        assert!(c.is_integer(), "non-integral commutator coefficient");
        let c = c.to_integer();
        for v in vecs.iter_mut() {
            *v = apply_exp(&ad[g], -c, (term.i, term.j), v);
        }
        out.push(CommutatorCoefficient { term, value: c });
    }
    for (v, &q) in vecs.iter().zip(&columns) {
        for (row, p) in v.iter().enumerate() {
            let expected = if row == q { Poly::from([((0, 0), 1)]) } else { Poly::new() };
            assert_eq!(*p, expected, "commutator does not factor in the fixed order");
        }
    }
    out.retain(|c| c.value != 0);
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::roots::RootSystem;

    #[test]
    fn simply_laced_coefficient_is_structure_constant() {
        for l in ["A3", "D4"] {
            let b = ChevalleyBasis::new(Arc::new(RootSystem::parse(l).unwrap()));
            let rs = b.root_system().clone();
            for x in rs.roots() {
                for y in rs.roots() {
                    if y == rs.neg(x) {
                        continue;
                    }
                    let c = b.commutator_coefficients(x, y).unwrap();
                    match rs.sum(x, y) {
                        Some(z) => {
                            assert_eq!(c.len(), 1);
                            assert_eq!(c[0].term.root, z);
                            assert_eq!(c[0].value, b.n(x, y));
                        }
                        None => assert!(c.is_empty()),
                    }
                }
            }
        }
    }

    #[test]
    fn g2_long_short_pair() {
        let b = ChevalleyBasis::new(Arc::new(RootSystem::parse("G2").unwrap()));
        let rs = b.root_system().clone();
        let k = rs.lookup(&[1, 0]).unwrap();
        let c = rs.lookup(&[0, 1]).unwrap();
        let co = b.commutator_coefficients(k, c).unwrap();
        let shape: Vec<(u32, u32, i64)> = co.iter().map(|x| (x.term.i, x.term.j, x.value.abs())).collect();
        assert_eq!(shape, vec![(1, 1, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)]);
        let ck = rs.lookup(&[1, 1]).unwrap();
        let c2k = rs.lookup(&[1, 2]).unwrap();
        let co = b.commutator_coefficients(ck, c2k).unwrap();
        assert_eq!(co.len(), 1);
        assert_eq!(co[0].value.abs(), 3);
        assert_eq!(rs.vector(co[0].term.root), &[2, 3]);
    }

    #[test]
    fn orthogonal_pair_commutes() {
        let b = ChevalleyBasis::new(Arc::new(RootSystem::parse("B2").unwrap()));
        let rs = b.root_system().clone();
        let x = rs.lookup(&[1, 1]).unwrap();
        let y = rs.lookup(&[1, -1]).unwrap();
        assert!(b.commutator_coefficients(x, y).unwrap().is_empty());
    }
}
