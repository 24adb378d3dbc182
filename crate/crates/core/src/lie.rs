//! Root data for SU(n): weights in the fundamental-weight basis, the
//! invariant form, positive roots, the Weyl group and chamber projection.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Points closer than this to a wall are treated as singular.
pub const REGULARITY_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("unsupported group: {0}")]
    Unsupported(String),
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupId {
    pub n: usize,
}

impl GroupId {
    pub const SU2: GroupId = GroupId { n: 2 };
    pub const SU3: GroupId = GroupId { n: 3 };

    pub fn parse(s: &str) -> Result<Self, LieError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t
            .strip_prefix("SU(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("SU"))
            .ok_or_else(|| LieError::Unsupported(s.to_string()))?;
        match inner.parse::<usize>() {
            Ok(n) if n == 2 || n == 3 => Ok(GroupId { n }),
            _ => Err(LieError::Unsupported(s.to_string())),
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SU({})", self.n)
    }
}

/// Integral weight in the fundamental-weight basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn new(v: &[i64]) -> Self {
        Weight(v.to_vec())
    }
    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }
    pub fn as_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&x| x as f64).collect()
    }
    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
    pub fn sub(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

/// A point of the closed positive chamber, in fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChamberPoint {
    pub coords: Vec<f64>,
    pub regular: bool,
}

impl ChamberPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        let regular = coords.iter().all(|&x| x > REGULARITY_THRESHOLD);
        ChamberPoint { coords, regular }
    }
}

/// A Weyl group element as an integer matrix acting on weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub matrix: Vec<Vec<i64>>,
    pub sign: i64,
}

impl WeylElement {
    pub fn identity(r: usize) -> Self {
        let matrix = (0..r)
            .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
            .collect();
        WeylElement { matrix, sign: 1 }
    }

    pub fn apply_int(&self, v: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(&a, b)| a as f64 * b).sum())
            .collect()
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let r = self.matrix.len();
        let matrix = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| (0..r).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum())
                    .collect()
            })
            .collect();
        WeylElement { matrix, sign: self.sign * other.sign }
    }
}

#[derive(Clone, Debug)]
pub struct GroupData {
    pub id: GroupId,
    pub rank: usize,
    /// Invariant form on weight coordinates, `<a, b> = a^T G b`.
    pub gram: Vec<Vec<f64>>,
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots in weight coordinates.
    pub positive_roots: Vec<Weight>,
    /// Positive roots in simple-root coordinates; for simply-laced groups
    /// these are also the coroot coefficients.
    pub positive_roots_simple: Vec<Vec<i64>>,
    pub rho: Weight,
    pub weyl: Vec<WeylElement>,
    simple_reflections: Vec<WeylElement>,
}

impl GroupData {
    pub fn new(id: GroupId) -> Result<Self, LieError> {
        if id.n != 2 && id.n != 3 {
            return Err(LieError::Unsupported(id.to_string()));
        }
        let r = id.n - 1;
        let cartan: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| match (i as i64 - j as i64).abs() {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        let gram = inverse_cartan(&cartan);
        let mut positive_roots = Vec::new();
        let mut positive_roots_simple = Vec::new();
        for i in 0..r {
            for j in i..r {
                let simple: Vec<i64> = (0..r).map(|k| i64::from(k >= i && k <= j)).collect();
                let w: Vec<i64> = (0..r)
                    .map(|m| (0..r).map(|k| simple[k] * cartan[k][m]).sum())
                    .collect();
                positive_roots.push(Weight(w));
                positive_roots_simple.push(simple);
            }
        }
        let simple_reflections: Vec<WeylElement> = (0..r)
            .map(|i| {
                let matrix = (0..r)
                    .map(|a| {
                        (0..r)
                            .map(|b| i64::from(a == b) - if b == i { cartan[i][a] } else { 0 })
                            .collect()
                    })
                    .collect();
                WeylElement { matrix, sign: -1 }
            })
            .collect();
        let weyl = generate_group(&simple_reflections, r);
        Ok(GroupData {
            id,
            rank: r,
            gram,
            cartan,
            positive_roots,
            positive_roots_simple,
            rho: Weight(vec![1; r]),
            weyl,
            simple_reflections,
        })
    }

    pub fn su2() -> Self {
        Self::new(GroupId::SU2).expect("SU(2) is supported")
    }

    pub fn dim(&self) -> usize {
        self.id.n * self.id.n - 1
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn pair(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += a[i] * self.gram[i][j] * b[j];
            }
        }
        s
    }

    pub fn norm_sq(&self, a: &[f64]) -> f64 {
        self.pair(a, a)
    }

    /// Exact pairing of an integral weight with a positive root.
    pub fn pair_root_int(&self, lambda: &[i64], root_index: usize) -> i64 {
        self.positive_roots_simple[root_index]
            .iter()
            .zip(lambda)
            .map(|(c, l)| c * l)
            .sum()
    }

    pub fn pair_root(&self, xi: &[f64], root_index: usize) -> f64 {
        self.positive_roots_simple[root_index]
            .iter()
            .zip(xi)
            .map(|(&c, l)| c as f64 * l)
            .sum()
    }

    /// Volume of the weight-lattice fundamental cell with respect to the form.
    pub fn covolume(&self) -> f64 {
        det_f64(&self.gram).sqrt()
    }

    /// Scale turning the invariant form into one of covolume one: the
    /// form `c <., .>` has unit covolume.
    pub fn covolume_scale(&self) -> f64 {
        (1.0 / self.covolume()).powf(2.0 / self.rank as f64)
    }

    pub fn check_dim(&self, v: usize) -> Result<(), LieError> {
        if v != self.rank {
            return Err(LieError::Dimension { expected: self.rank, got: v });
        }
        Ok(())
    }

    /// Moves `xi` into the closed positive chamber; returns the chamber point
    /// and the Weyl element `w` with `w(xi)` in the chamber.
    pub fn dominant_project(&self, xi: &[f64]) -> (ChamberPoint, WeylElement) {
        let mut v = xi.to_vec();
        let mut w = WeylElement::identity(self.rank);
        // each reflection strictly increases <v, rho>, so this terminates
        for _ in 0..(4 * self.weyl.len() + 8) {
            match (0..self.rank).find(|&i| v[i] < 0.0) {
                Some(i) => {
                    let s = &self.simple_reflections[i];
                    v = s.apply(&v);
                    w = s.compose(&w);
                }
                None => break,
            }
        }
        (ChamberPoint::new(v), w)
    }

    pub fn dominant_project_int(&self, lambda: &[i64]) -> Weight {
        let mut v = lambda.to_vec();
        while let Some(i) = (0..self.rank).find(|&i| v[i] < 0) {
            v = self.simple_reflections[i].apply_int(&v);
        }
        Weight(v)
    }

    /// Product of `<alpha, xi>` over positive roots.
    pub fn weyl_density(&self, xi: &[f64]) -> f64 {
        (0..self.positive_roots.len())
            .map(|k| self.pair_root(xi, k))
            .product()
    }

    pub fn weyl_dimension(&self, lambda: &Weight) -> Result<u64, LieError> {
        self.check_dim(lambda.0.len())?;
        if !lambda.is_dominant() {
            return Err(LieError::NotDominant(lambda.0.clone()));
        }
        let lr = lambda.add(&self.rho);
        let mut num: i128 = 1;
        let mut den: i128 = 1;
        for k in 0..self.positive_roots.len() {
            num *= self.pair_root_int(&lr.0, k) as i128;
            den *= self.pair_root_int(&self.rho.0, k) as i128;
        }
        Ok((num / den) as u64)
    }

    pub fn is_regular(&self, xi: &[f64]) -> bool {
        (0..self.positive_roots.len()).all(|k| self.pair_root(xi, k).abs() > REGULARITY_THRESHOLD)
    }
}

fn generate_group(gens: &[WeylElement], r: usize) -> Vec<WeylElement> {
    let mut elems = vec![WeylElement::identity(r)];
    let mut frontier = elems.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for e in &frontier {
            for g in gens {
                let h = g.compose(e);
                if !elems.contains(&h) {
                    elems.push(h.clone());
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    elems
}

fn inverse_cartan(a: &[Vec<i64>]) -> Vec<Vec<f64>> {
    let r = a.len();
    let m = nalgebra::DMatrix::from_fn(r, r, |i, j| a[i][j] as f64);
    let inv = m.try_inverse().expect("Cartan matrix is invertible");
    (0..r).map(|i| (0..r).map(|j| inv[(i, j)]).collect()).collect()
}

fn det_f64(g: &[Vec<f64>]) -> f64 {
    let r = g.len();
    nalgebra::DMatrix::from_fn(r, r, |i, j| g[i][j]).determinant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn su2_data() {
        let g = GroupData::su2();
        assert_eq!(g.rank, 1);
        assert_eq!(g.positive_roots, vec![Weight(vec![2])]);
        assert_eq!(g.weyl.len(), 2);
        assert!((g.pair(&[2.0], &[2.0]) - 2.0).abs() < 1e-15);
        assert!((g.covolume_scale() - 2.0).abs() < 1e-14);
        assert!((g.weyl_density(&[3.0]) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn su3_data() {
        let g = GroupData::new(GroupId::SU3).unwrap();
        assert_eq!(g.weyl.len(), 6);
        assert_eq!(g.num_positive_roots(), 3);
        assert!((g.covolume_scale() - 3f64.sqrt()).abs() < 1e-14);
        for a in &g.positive_roots {
            assert!((g.norm_sq(&a.as_f64()) - 2.0).abs() < 1e-14);
        }
        let signs: i64 = g.weyl.iter().map(|w| w.sign).sum();
        assert_eq!(signs, 0);
    }

    #[test]
    fn su2_dimensions() {
        let g = GroupData::su2();
        for l in 0..20 {
            assert_eq!(g.weyl_dimension(&Weight(vec![l])).unwrap(), (l + 1) as u64);
        }
        assert!(g.weyl_dimension(&Weight(vec![-1])).is_err());
    }

    /// Counts Gelfand–Tsetlin patterns with top row (a+b, b, 0).
    fn gt_count(a: i64, b: i64) -> u64 {
        let (m1, m2, m3) = (a + b, b, 0);
        let mut n = 0;
        for p in m2..=m1 {
            for q in m3..=m2 {
                n += (p - q + 1) as u64;
            }
        }
        n
    }

    #[test]
    fn su3_dimensions_match_pattern_count() {
        let g = GroupData::new(GroupId::SU3).unwrap();
        assert_eq!(g.weyl_dimension(&Weight(vec![1, 1])).unwrap(), 8);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(g.weyl_dimension(&Weight(vec![a, b])).unwrap(), gt_count(a, b));
            }
        }
    }

    #[test]
    fn parse_ids() {
        assert_eq!(GroupId::parse("SU(2)").unwrap(), GroupId::SU2);
        assert_eq!(GroupId::parse("SU(3)").unwrap(), GroupId::SU3);
        assert!(GroupId::parse("SU(4)").is_err());
        assert!(GroupId::parse("SO(3)").is_err());
    }

    proptest! {
        #[test]
        fn projection_lands_in_chamber_su3(x in -10.0f64..10.0, y in -10.0f64..10.0) {
            let g = GroupData::new(GroupId::SU3).unwrap();
            let (p, w) = g.dominant_project(&[x, y]);
            prop_assert!(p.coords.iter().all(|&c| c >= -1e-12));
            let img = w.apply(&[x, y]);
            prop_assert!((img[0] - p.coords[0]).abs() < 1e-12 && (img[1] - p.coords[1]).abs() < 1e-12);
            // agrees with an exhaustive search over the group
            let found = g.weyl.iter().map(|u| u.apply(&[x, y]))
                .find(|v| v.iter().all(|&c| c >= -1e-12)).unwrap();
            prop_assert!((found[0] - p.coords[0]).abs() < 1e-9 && (found[1] - p.coords[1]).abs() < 1e-9);
            // the form is Weyl invariant
            prop_assert!((g.norm_sq(&[x, y]) - g.norm_sq(&p.coords)).abs() < 1e-9);
        }

        #[test]
        fn density_is_alternating(x in -10.0f64..10.0, y in -10.0f64..10.0) {
            let g = GroupData::new(GroupId::SU3).unwrap();
            for w in &g.weyl {
                let lhs = g.weyl_density(&w.apply(&[x, y]));
                let rhs = w.sign as f64 * g.weyl_density(&[x, y]);
                prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs.abs()));
            }
        }
    }
}
