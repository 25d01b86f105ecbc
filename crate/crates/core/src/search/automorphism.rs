//! The automorphism group of `Q_n`: coordinate permutations followed by
//! coordinate complementation, `2^n · n!` elements in all.

use rand::seq::SliceRandom;
use rand::Rng;

use super::small::{SmallCube, SMALL_MAX_N};
use crate::cube::{CubeDim, Vertex, VertexSet};
use crate::error::{CubeError, Result};

/// A signed permutation acting on vertices by `v ↦ P(v) XOR flips`, where
/// `P` moves coordinate `i` to coordinate `perm[i]` (both 0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    perm: Vec<u32>,
    flips: u32,
}

impl Automorphism {
    pub fn new(perm: Vec<u32>, flips: u32) -> Result<Self> {
        let n = perm.len() as u32;
        let dim = CubeDim::new(n)?;
        let mut seen = 0u32;
        for &p in &perm {
            if p >= n || seen & (1 << p) != 0 {
                return Err(CubeError::CoordinateOutOfRange {
                    coord: p as usize + 1,
                    n,
                });
            }
            seen |= 1 << p;
        }
        if flips & !dim.coord_mask() != 0 {
            return Err(CubeError::VertexOutOfRange {
                index: flips.into(),
                n,
            });
        }
        Ok(Automorphism { perm, flips })
    }

    pub fn identity(dim: CubeDim) -> Self {
        Automorphism {
            perm: (0..dim.n()).collect(),
            flips: 0,
        }
    }

    pub fn random<R: Rng + ?Sized>(dim: CubeDim, rng: &mut R) -> Self {
        let mut perm: Vec<u32> = (0..dim.n()).collect();
        perm.shuffle(rng);
        let flips = rng.gen::<u32>() & dim.coord_mask();
        Automorphism { perm, flips }
    }

    pub fn n(&self) -> u32 {
        self.perm.len() as u32
    }

    pub fn perm(&self) -> &[u32] {
        &self.perm
    }

    pub fn flips(&self) -> u32 {
        self.flips
    }

    fn permute_bits(&self, x: u32) -> u32 {
        self.perm
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &p)| acc | (((x >> i) & 1) << p))
    }

    pub fn apply_vertex(&self, v: Vertex) -> Vertex {
        let dim = CubeDim::new(self.n()).expect("validated");
        dim.vertex(u64::from(self.permute_bits(v.index()) ^ self.flips))
            .expect("automorphisms map Q_n onto itself")
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        if self.n() != other.n() {
            return Err(CubeError::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(Automorphism {
            perm: other.perm.iter().map(|&p| self.perm[p as usize]).collect(),
            flips: self.permute_bits(other.flips) ^ self.flips,
        })
    }

    pub fn inverse(&self) -> Automorphism {
        let mut perm = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p as usize] = i as u32;
        }
        let inv = Automorphism { perm, flips: 0 };
        let flips = inv.permute_bits(self.flips);
        Automorphism { flips, ..inv }
    }

    /// The image set `g · S`.
    pub fn apply(&self, set: &VertexSet) -> Result<VertexSet> {
        let dim = set.dim();
        if dim.n() != self.n() {
            return Err(CubeError::DimensionMismatch {
                left: self.n(),
                right: dim.n(),
            });
        }
        VertexSet::from_indices(dim, set.iter().map(|v| self.apply_vertex(v).index().into()))
    }
}

/// `g · S`.
pub fn apply_automorphism(g: &Automorphism, set: &VertexSet) -> Result<VertexSet> {
    g.apply(set)
}

/// The orbit representative of `set` with the smallest bitmap, comparing
/// bitmaps as `2^n`-bit integers. Limited to `n <= 6`.
pub fn canonical_form(set: &VertexSet) -> Result<VertexSet> {
    let n = set.dim().n();
    if n > SMALL_MAX_N {
        return Err(CubeError::CapExceeded {
            n,
            cap: SMALL_MAX_N,
            what: "canonical forms",
        });
    }
    let cube = SmallCube::new(n);
    Ok(VertexSet::from_u64(set.dim(), cube.canonical(set.to_u64())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dim(n: u32) -> CubeDim {
        CubeDim::new(n).unwrap()
    }

    fn random_set(d: CubeDim, rng: &mut ChaCha8Rng) -> VertexSet {
        let density = rng.gen_range(1..8);
        VertexSet::from_indices(
            d,
            (0..d.vertex_count()).filter(|_| rng.gen_range(0..8) < density),
        )
        .unwrap()
    }

    #[test]
    fn identity_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 0..=6 {
            let d = dim(n);
            for _ in 0..50 {
                let s = random_set(d, &mut rng);
                assert_eq!(Automorphism::identity(d).apply(&s).unwrap(), s);
                let g = Automorphism::random(d, &mut rng);
                let back = g.inverse().apply(&g.apply(&s).unwrap()).unwrap();
                assert_eq!(back, s);
                let id = g.compose(&g.inverse()).unwrap();
                assert_eq!(id, Automorphism::identity(d));
            }
        }
    }

    #[test]
    fn compose_matches_sequential_application() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = dim(5);
        for _ in 0..100 {
            let g = Automorphism::random(d, &mut rng);
            let h = Automorphism::random(d, &mut rng);
            let s = random_set(d, &mut rng);
            let gh = g.compose(&h).unwrap();
            assert_eq!(
                gh.apply(&s).unwrap(),
                g.apply(&h.apply(&s).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn action_preserves_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=5);
            let d = dim(n);
            let s = random_set(d, &mut rng);
            let g = Automorphism::random(d, &mut rng);
            let t = apply_automorphism(&g, &s).unwrap();
            assert_eq!(t.len(), s.len());
            assert_eq!(t.min_degree().ok(), s.min_degree().ok());
            assert_eq!(t.is_irreducible(), s.is_irreducible());
            assert_eq!(t.as_subcube().is_some(), s.as_subcube().is_some());
            assert_eq!(canonical_form(&t).unwrap(), canonical_form(&s).unwrap());
        }
    }

    #[test]
    fn canonical_form_properties() {
        let d = dim(3);
        let single = VertexSet::from_strings(d, ["011"]).unwrap();
        let c = canonical_form(&single).unwrap();
        assert_eq!(c, VertexSet::from_strings(d, ["000"]).unwrap());
        let s = VertexSet::from_strings(d, ["011", "111", "010"]).unwrap();
        let c = canonical_form(&s).unwrap();
        assert_eq!(canonical_form(&c).unwrap(), c);
        assert!(canonical_form(&VertexSet::empty(dim(7))).is_err());
    }

    #[test]
    fn validation() {
        assert!(Automorphism::new(vec![0, 0, 1], 0).is_err());
        assert!(Automorphism::new(vec![0, 3, 1], 0).is_err());
        assert!(Automorphism::new(vec![2, 0, 1], 0b1000).is_err());
        let g = Automorphism::new(vec![1, 0], 0b01).unwrap();
        let t = g.apply(&VertexSet::full(dim(3)));
        assert!(t.is_err());
        let d2 = dim(2);
        // x = (x_1, x_2) = (1, 0) moves to (0, 1), then x_1 is flipped
        let v = d2.vertex(0b01).unwrap();
        assert_eq!(g.apply_vertex(v).render(d2), "11");
    }
}
