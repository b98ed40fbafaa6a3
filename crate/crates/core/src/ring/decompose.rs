use super::{factor_integer, Code, FpPoly, RingKind, RingSpec};

/// An isomorphism `R ≅ R_1 x ... x R_k` onto local rings, stored as lookup
/// tables in both directions.
#[derive(Clone, Debug)]
pub struct ArtinianDecomposition {
    pub ring: RingSpec,
    pub factors: Vec<RingSpec>,
    product: RingSpec,
    forward: Vec<Code>,
    backward: Vec<Code>,
}

/// Local factors with their coordinate maps out of `ring`.
fn local_pieces(ring: &RingSpec) -> Vec<(RingSpec, Box<dyn Fn(Code) -> Code>)> {
    match ring.kind() {
        RingKind::Zmod { n } => {
            let fs = factor_integer(*n);
            if fs.len() <= 1 {
                return vec![(ring.clone(), Box::new(|a| a))];
            }
            fs.into_iter()
                .map(|(p, k)| {
                    let m = p.pow(k);
                    let piece = RingSpec::zmod(m).expect("m >= 2");
                    let map: Box<dyn Fn(Code) -> Code> = Box::new(move |a| (a as u64 % m) as Code);
                    (piece, map)
                })
                .collect()
        }
        RingKind::Poly { p, modulus, degree } => {
            let fs = modulus.factor();
            if fs.len() <= 1 {
                return vec![(ring.clone(), Box::new(|a| a))];
            }
            let (p, degree) = (*p, *degree);
            fs.into_iter()
                .map(|(g, e)| {
                    let fi = g.pow(e);
                    let piece = RingSpec::poly_quotient(p, fi.clone()).expect("monic");
                    let map: Box<dyn Fn(Code) -> Code> = Box::new(move |a| {
                        FpPoly::from_code(p, a as u64, degree).rem(&fi).to_code() as Code
                    });
                    (piece, map)
                })
                .collect()
        }
        RingKind::Product { factors, .. } => {
            let mut out: Vec<(RingSpec, Box<dyn Fn(Code) -> Code>)> = Vec::new();
            for (i, f) in factors.iter().enumerate() {
                for (piece, inner) in local_pieces(f) {
                    let outer = ring.clone();
                    out.push((piece, Box::new(move |a| inner(outer.split(a)[i]))));
                }
            }
            out
        }
    }
}

impl ArtinianDecomposition {
    pub fn new(ring: &RingSpec) -> ArtinianDecomposition {
        let pieces = local_pieces(ring);
        let factors: Vec<RingSpec> = pieces.iter().map(|(f, _)| f.clone()).collect();
        let product = RingSpec::product(factors.clone()).expect("same order as ring");
        let forward: Vec<Code> = ring
            .elements()
            .map(|a| {
                let parts: Vec<Code> = pieces.iter().map(|(_, m)| m(a)).collect();
                product.join(&parts)
            })
            .collect();
        let mut backward = vec![Code::MAX; product.size() as usize];
        for (a, &b) in forward.iter().enumerate() {
            assert_eq!(backward[b as usize], Code::MAX, "coordinate map is not injective");
            backward[b as usize] = a as Code;
        }
        ArtinianDecomposition {
            ring: ring.clone(),
            factors,
            product,
            forward,
            backward,
        }
    }

    /// The ring `R_1 x ... x R_k` (equal to a factor when `k = 1`).
    pub fn product_ring(&self) -> &RingSpec {
        &self.product
    }

    /// Component codes of `a`.
    pub fn forward(&self, a: Code) -> Vec<Code> {
        self.product.split(self.forward[a as usize])
    }

    /// Element of the product ring corresponding to `a`.
    pub fn forward_joined(&self, a: Code) -> Code {
        self.forward[a as usize]
    }

    pub fn backward(&self, parts: &[Code]) -> Code {
        self.backward[self.product.join(parts) as usize]
    }

    pub fn backward_joined(&self, b: Code) -> Code {
        self.backward[b as usize]
    }

    /// Idempotent of `R` projecting onto factor `i`.
    pub fn idempotent(&self, i: usize) -> Code {
        let parts: Vec<Code> = self
            .factors
            .iter()
            .enumerate()
            .map(|(j, f)| if i == j { f.one() } else { 0 })
            .collect();
        self.backward(&parts)
    }

    /// Checks bijectivity and the ring homomorphism property on all pairs
    /// (or on pairs with a fixed second operand set when the ring is large).
    pub fn verify(&self) -> bool {
        let r = &self.ring;
        let p = &self.product;
        if self.backward.contains(&Code::MAX) {
            return false;
        }
        if !r.elements().all(|a| self.backward[self.forward[a as usize] as usize] == a) {
            return false;
        }
        if self.factors.iter().any(|f| !f.is_local().0) {
            return false;
        }
        let probes: Vec<Code> = if r.size() <= 512 {
            r.elements().collect()
        } else {
            r.elements().step_by((r.size() / 97).max(1) as usize).collect()
        };
        let f = |a: Code| self.forward[a as usize];
        r.elements().all(|a| {
            probes.iter().all(|&b| {
                f(r.add(a, b)) == p.add(f(a), f(b)) && f(r.mul(a, b)) == p.mul(f(a), f(b))
            })
        }) && f(r.one()) == p.one()
    }
}

/// Primitive idempotents by exhaustive search; `None` above `2^16` elements.
pub fn primitive_idempotents(ring: &RingSpec) -> Option<Vec<Code>> {
    if ring.size() > 1 << 16 {
        return None;
    }
    let idem: Vec<Code> = ring
        .elements()
        .filter(|&e| e != 0 && ring.mul(e, e) == e)
        .collect();
    Some(
        idem.iter()
            .copied()
            .filter(|&e| idem.iter().all(|&f| f == e || ring.mul(e, f) != f))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(d: &ArtinianDecomposition) -> Vec<String> {
        d.factors.iter().map(|f| f.to_string()).collect()
    }

    #[test]
    fn z360() {
        let d = RingSpec::zmod(360).unwrap().artinian_decompose();
        assert_eq!(labels(&d), ["Z/8", "Z/9", "Z/5"]);
        assert!(d.verify());
        assert_eq!(d.forward(17), vec![1, 8, 2]);
    }

    #[test]
    fn already_local() {
        let d = RingSpec::zmod(8).unwrap().artinian_decompose();
        assert_eq!(labels(&d), ["Z/8"]);
        assert!(d.verify());
    }

    #[test]
    fn x2_times_x_plus_1() {
        let r = RingSpec::parse("GF(2)[x]/(x^2(x+1))").unwrap();
        let d = r.artinian_decompose();
        assert_eq!(labels(&d), ["GF(2)[x]/(x^2)", "GF(2)"]);
        assert!(d.verify());
    }

    #[test]
    fn factor_count_matches_primitive_idempotents() {
        for s in [
            "Z/360",
            "Z/12 x Z/5",
            "GF(2)[x]/(x^3+x^2)",
            "GF(3)[x]/(x^2+2)",
            "GF(2)[x]/(x^4+x^2) x Z/9",
            "GF(4) x Z/2",
        ] {
            let r = RingSpec::parse(s).unwrap();
            let d = r.artinian_decompose();
            let prim = primitive_idempotents(&r).unwrap();
            assert_eq!(d.factors.len(), prim.len(), "{s}");
            let mut mine: Vec<Code> = (0..d.factors.len()).map(|i| d.idempotent(i)).collect();
            mine.sort();
            assert_eq!(mine, prim, "{s}");
            assert!(d.verify(), "{s}");
        }
    }
}
