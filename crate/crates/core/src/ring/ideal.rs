use super::{gcd, Code, FpPoly, RingKind, RingSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Shape {
    /// `(d)` with `d | n`.
    Zmod(u64),
    /// `(g)` with `g | f` monic; `g = f` is the zero ideal.
    Poly(FpPoly),
    Product(Vec<IdealHandle>),
}

/// A finitely generated ideal, materialized as an explicit element set.
#[derive(Clone, Debug)]
pub struct IdealHandle {
    ring: RingSpec,
    generators: Vec<Code>,
    shape: Shape,
    members: Vec<bool>,
    elements: Vec<Code>,
}

impl PartialEq for IdealHandle {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.elements == other.elements
    }
}
impl Eq for IdealHandle {}

impl IdealHandle {
    /// Smallest ideal containing `generators`.
    pub fn from_generators(ring: &RingSpec, generators: &[Code]) -> IdealHandle {
        let shape = match ring.kind() {
            RingKind::Zmod { n } => {
                Shape::Zmod(generators.iter().fold(*n, |d, &g| gcd(d, g as u64)))
            }
            RingKind::Poly { p, modulus, degree } => {
                let g = generators.iter().fold(modulus.clone(), |d, &g| {
                    d.gcd(&FpPoly::from_code(*p, g as u64, *degree))
                });
                Shape::Poly(g)
            }
            RingKind::Product { factors, .. } => {
                let parts: Vec<Vec<Code>> = generators.iter().map(|&g| ring.split(g)).collect();
                Shape::Product(
                    factors
                        .iter()
                        .enumerate()
                        .map(|(i, f)| {
                            let gens: Vec<Code> = parts.iter().map(|p| p[i]).collect();
                            IdealHandle::from_generators(f, &gens)
                        })
                        .collect(),
                )
            }
        };
        let members: Vec<bool> = ring.elements().map(|a| shape_contains(ring, &shape, a)).collect();
        let elements = ring.elements().filter(|&a| members[a as usize]).collect();
        IdealHandle {
            ring: ring.clone(),
            generators: generators.to_vec(),
            shape,
            members,
            elements,
        }
    }

    pub fn zero(ring: &RingSpec) -> IdealHandle {
        IdealHandle::from_generators(ring, &[])
    }

    pub fn unit(ring: &RingSpec) -> IdealHandle {
        IdealHandle::from_generators(ring, &[ring.one()])
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn generators(&self) -> &[Code] {
        &self.generators
    }

    pub fn contains(&self, a: Code) -> bool {
        self.members[a as usize]
    }

    /// Members in increasing code order.
    pub fn elements(&self) -> &[Code] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index(&self) -> u32 {
        self.ring.size() / self.len() as u32
    }

    /// A short generator description such as `(3)` or `(x+1)`.
    pub fn describe(&self) -> String {
        match &self.shape {
            Shape::Zmod(d) => format!("({})", d % self.ring.characteristic().max(1)),
            Shape::Poly(g) => {
                if let RingKind::Poly { modulus, .. } = self.ring.kind() {
                    if g == modulus {
                        return "(0)".into();
                    }
                }
                format!("({g})")
            }
            Shape::Product(parts) => {
                let inner: Vec<String> = parts.iter().map(|p| p.describe()).collect();
                format!("[{}]", inner.join(" x "))
            }
        }
    }

    /// `R / I` together with the canonical surjection.
    pub fn quotient(&self) -> Projection {
        let ring = &self.ring;
        match (&self.shape, ring.kind()) {
            (Shape::Zmod(d), _) => {
                let target = if *d == 1 {
                    RingSpec::trivial()
                } else {
                    RingSpec::zmod(*d).expect("d >= 2")
                };
                let map = ring.elements().map(|a| (a as u64 % d) as Code).collect();
                Projection::new(ring.clone(), target, map)
            }
            (Shape::Poly(g), RingKind::Poly { p, degree, .. }) => {
                if g.degree() == Some(0) {
                    let map = vec![0; ring.size() as usize];
                    return Projection::new(ring.clone(), RingSpec::trivial(), map);
                }
                let target = RingSpec::poly_quotient(*p, g.clone()).expect("monic divisor");
                let map = ring
                    .elements()
                    .map(|a| FpPoly::from_code(*p, a as u64, *degree).rem(g).to_code() as Code)
                    .collect();
                Projection::new(ring.clone(), target, map)
            }
            (Shape::Product(parts), _) => {
                let projections: Vec<Projection> = parts.iter().map(|p| p.quotient()).collect();
                let kept: Vec<RingSpec> = projections
                    .iter()
                    .map(|p| p.target.clone())
                    .filter(|t| t.size() > 1)
                    .collect();
                let target = RingSpec::product(kept).expect("quotients are smaller");
                let map = ring
                    .elements()
                    .map(|a| {
                        let images: Vec<Code> = ring
                            .split(a)
                            .iter()
                            .zip(&projections)
                            .filter(|(_, p)| p.target.size() > 1)
                            .map(|(&c, p)| p.apply(c))
                            .collect();
                        if images.is_empty() {
                            0
                        } else {
                            target.join(&images)
                        }
                    })
                    .collect();
                Projection::new(ring.clone(), target, map)
            }
            _ => unreachable!("shape matches ring kind"),
        }
    }
}

fn shape_contains(ring: &RingSpec, shape: &Shape, a: Code) -> bool {
    match (shape, ring.kind()) {
        (Shape::Zmod(d), _) => (a as u64).is_multiple_of(*d),
        (Shape::Poly(g), RingKind::Poly { p, degree, .. }) => {
            FpPoly::from_code(*p, a as u64, *degree).rem(g).is_zero()
        }
        (Shape::Product(parts), _) => ring
            .split(a)
            .iter()
            .zip(parts)
            .all(|(&c, i)| i.contains(c)),
        _ => false,
    }
}

/// A surjective ring homomorphism given by its value table.
#[derive(Clone, Debug)]
pub struct Projection {
    pub source: RingSpec,
    pub target: RingSpec,
    map: Vec<Code>,
    lifts: Vec<Code>,
}

impl Projection {
    fn new(source: RingSpec, target: RingSpec, map: Vec<Code>) -> Projection {
        let mut lifts = vec![Code::MAX; target.size() as usize];
        for (a, &b) in map.iter().enumerate() {
            if lifts[b as usize] == Code::MAX {
                lifts[b as usize] = a as Code;
            }
        }
        Projection {
            source,
            target,
            map,
            lifts,
        }
    }

    pub fn apply(&self, a: Code) -> Code {
        self.map[a as usize]
    }

    /// Smallest preimage.
    pub fn lift(&self, b: Code) -> Code {
        self.lifts[b as usize]
    }

    pub fn is_surjective(&self) -> bool {
        self.lifts.iter().all(|&l| l != Code::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_ideal(ring: &RingSpec, gens: &[Code]) -> Vec<Code> {
        let mut set = vec![false; ring.size() as usize];
        set[0] = true;
        let mut frontier = vec![0];
        let steps: Vec<Code> = gens
            .iter()
            .flat_map(|&g| ring.elements().map(move |r| (g, r)))
            .map(|(g, r)| ring.mul(g, r))
            .collect();
        while let Some(x) = frontier.pop() {
            for &s in &steps {
                let y = ring.add(x, s);
                if !set[y as usize] {
                    set[y as usize] = true;
                    frontier.push(y);
                }
            }
        }
        ring.elements().filter(|&a| set[a as usize]).collect()
    }

    #[test]
    fn z12_generated_by_8() {
        let r = RingSpec::zmod(12).unwrap();
        let i = IdealHandle::from_generators(&r, &[8]);
        assert_eq!(i.elements(), &[0, 4, 8]);
        assert_eq!(i, IdealHandle::from_generators(&r, &[4]));
    }

    #[test]
    fn z12_mod_4() {
        let r = RingSpec::zmod(12).unwrap();
        let q = IdealHandle::from_generators(&r, &[4]).quotient();
        assert_eq!(q.target.to_string(), "Z/4");
        for a in r.elements() {
            assert_eq!(q.apply(a), a % 4);
        }
    }

    #[test]
    fn z9_contains() {
        let r = RingSpec::zmod(9).unwrap();
        assert!(IdealHandle::from_generators(&r, &[3]).contains(6));
    }

    #[test]
    fn structured_ideals_match_brute_force() {
        for s in ["Z/12", "GF(2)[x]/(x^3+x^2)", "Z/4 x GF(3)", "GF(3)[x]/(x^2)"] {
            let r = RingSpec::parse(s).unwrap();
            for a in r.elements() {
                for b in [0, 1, r.size() - 1] {
                    let i = IdealHandle::from_generators(&r, &[a, b]);
                    assert_eq!(i.elements(), brute_force_ideal(&r, &[a, b]).as_slice(), "{s}");
                }
            }
        }
    }

    #[test]
    fn quotient_is_surjective_homomorphism() {
        for (s, g) in [("Z/12", "4"), ("GF(2)[x]/(x^3+x^2)", "[0,1]"), ("Z/4 x GF(3)", "(2,0)"), ("Z/4 x GF(3)", "(1,0)")] {
            let r = RingSpec::parse(s).unwrap();
            let i = IdealHandle::from_generators(&r, &[r.parse_element(g).unwrap()]);
            let q = i.quotient();
            assert!(q.is_surjective());
            assert_eq!(q.target.size() as usize * i.len(), r.size() as usize);
            let t = &q.target;
            for a in r.elements() {
                assert_eq!(q.apply(a) == 0, i.contains(a));
                for b in r.elements() {
                    assert_eq!(q.apply(r.add(a, b)), t.add(q.apply(a), q.apply(b)));
                    assert_eq!(q.apply(r.mul(a, b)), t.mul(q.apply(a), q.apply(b)));
                }
            }
        }
    }
}
