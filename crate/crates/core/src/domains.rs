//! Two-chains on the diagram: the corner equations, Euler and point
//! measures, the Maslov index, boundary degenerations, periodic domains and
//! the identification of `π₂′(x, x)/⟨Σ⟩` with second homology.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::complex::Generator;
use crate::diagram::HeegaardDiagram;
use crate::error::{HfError, Result};
use crate::lattice::{IntegerSystem, Lattice};
use crate::surface::{CurveKind, Quadrant};

/// An exact rational with denominator 4, stored as its numerator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quarter(pub i64);

impl Quarter {
    pub const ZERO: Quarter = Quarter(0);

    pub fn from_int(n: i64) -> Quarter {
        Quarter(4 * n)
    }

    pub fn to_int(self) -> Option<i64> {
        (self.0 % 4 == 0).then_some(self.0 / 4)
    }
}

impl Add for Quarter {
    type Output = Quarter;
    fn add(self, o: Quarter) -> Quarter {
        Quarter(self.0 + o.0)
    }
}

impl Sub for Quarter {
    type Output = Quarter;
    fn sub(self, o: Quarter) -> Quarter {
        Quarter(self.0 - o.0)
    }
}

impl Neg for Quarter {
    type Output = Quarter;
    fn neg(self) -> Quarter {
        Quarter(-self.0)
    }
}

impl Sum for Quarter {
    fn sum<I: Iterator<Item = Quarter>>(iter: I) -> Quarter {
        Quarter(iter.map(|q| q.0).sum())
    }
}

impl fmt::Display for Quarter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = crate::lattice::gcd(self.0, 4).max(1);
        let (num, den) = (self.0 / g, 4 / g);
        if den == 1 {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/{den}")
        }
    }
}

impl Serialize for Quarter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A 2-chain: one integer multiplicity per elementary domain (region).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Domain {
    pub mult: Vec<i64>,
}

impl Domain {
    pub fn zero(n: usize) -> Domain {
        Domain { mult: vec![0; n] }
    }

    /// The whole surface `Σ`.
    pub fn full(n: usize) -> Domain {
        Domain { mult: vec![1; n] }
    }

    pub fn indicator(n: usize, regions: impl IntoIterator<Item = usize>) -> Domain {
        let mut d = Domain::zero(n);
        for r in regions {
            d.mult[r] += 1;
        }
        d
    }

    pub fn len(&self) -> usize {
        self.mult.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.mult.iter().all(|&m| m >= 0)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.mult.len()).filter(|&i| self.mult[i] != 0).collect()
    }

    pub fn scale(&self, k: i64) -> Domain {
        Domain { mult: self.mult.iter().map(|m| m * k).collect() }
    }
}

impl Add for &Domain {
    type Output = Domain;
    fn add(self, o: &Domain) -> Domain {
        Domain { mult: self.mult.iter().zip(&o.mult).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Domain {
    type Output = Domain;
    fn sub(self, o: &Domain) -> Domain {
        Domain { mult: self.mult.iter().zip(&o.mult).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Domain {
    type Output = Domain;
    fn neg(self) -> Domain {
        Domain { mult: self.mult.iter().map(|a| -a).collect() }
    }
}

/// One equation per crossing `p`: `a_p + c_p − b_p − d_p = δ(p, y) − δ(p, x)`,
/// where `a_p … d_p` are the multiplicities in the quadrants at `p`.
#[derive(Clone, Debug)]
pub struct CornerSystem {
    /// `matrix[p][r]`: coefficient of region `r` in the equation at crossing `p`.
    pub matrix: Vec<Vec<i64>>,
    pub regions: usize,
}

impl CornerSystem {
    pub fn new(d: &HeegaardDiagram) -> CornerSystem {
        let s = d.surface();
        let n = s.regions.len();
        let matrix = (0..s.map.crossing_count())
            .map(|p| {
                let mut row = vec![0i64; n];
                for (q, r) in Quadrant::ALL.into_iter().zip(s.quadrant_regions(p)) {
                    row[r] += match q {
                        Quadrant::A | Quadrant::C => 1,
                        Quadrant::B | Quadrant::D => -1,
                    };
                }
                row
            })
            .collect();
        CornerSystem { matrix, regions: n }
    }

    pub fn rhs(&self, x: &Generator, y: &Generator) -> Vec<i64> {
        let mut v = vec![0i64; self.matrix.len()];
        for &p in y.crossings() {
            v[p] += 1;
        }
        for &p in x.crossings() {
            v[p] -= 1;
        }
        v
    }

    /// Substitutes `dom` back into every equation.
    pub fn satisfied(&self, dom: &Domain, x: &Generator, y: &Generator) -> bool {
        let rhs = self.rhs(x, y);
        self.matrix
            .iter()
            .zip(&rhs)
            .all(|(row, &r)| row.iter().zip(&dom.mult).map(|(a, b)| a * b).sum::<i64>() == r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainLattice {
    pub particular: Option<Domain>,
    /// Spans `π₂(x, x)`.
    pub kernel: Lattice,
}

/// The corner system of a diagram with its reduction cached.
pub struct DomainSolver {
    corners: CornerSystem,
    system: IntegerSystem,
    image: Lattice,
}

impl DomainSolver {
    pub fn new(d: &HeegaardDiagram) -> Result<DomainSolver> {
        let corners = CornerSystem::new(d);
        let system = IntegerSystem::new(&corners.matrix, corners.regions)?;
        let image = system.image()?;
        Ok(DomainSolver { corners, system, image })
    }

    pub fn corners(&self) -> &CornerSystem {
        &self.corners
    }

    pub fn kernel(&self) -> &Lattice {
        self.system.kernel()
    }

    pub fn solve(&self, x: &Generator, y: &Generator) -> Result<DomainLattice> {
        let particular =
            self.system.particular(&self.corners.rhs(x, y))?.map(|mult| Domain { mult });
        Ok(DomainLattice { particular, kernel: self.system.kernel().clone() })
    }

    /// A key equal for `x` and `y` exactly when `π₂(x, y)` is nonempty.
    pub fn class_key(&self, x: &Generator) -> Result<Vec<i64>> {
        let mut v = vec![0i64; self.corners.matrix.len()];
        for &p in x.crossings() {
            v[p] += 1;
        }
        self.image.reduce(&v)
    }
}

/// All integer solutions `D ∈ π₂(x, y)` of the corner system.
pub fn solve_pi2(d: &HeegaardDiagram, x: &Generator, y: &Generator) -> Result<DomainLattice> {
    DomainSolver::new(d)?.solve(x, y)
}

/// `e(D) = Σ n_i (1 − corners(D_i)/4)`, generalised to regions of any topology
/// through their Euler characteristic.
pub fn euler_measure(d: &HeegaardDiagram, dom: &Domain) -> Quarter {
    d.surface()
        .regions
        .iter()
        .map(|r| Quarter(dom.mult[r.id] * r.euler_quarters()))
        .sum()
}

fn corner_sum(d: &HeegaardDiagram, dom: &Domain, p: usize) -> i64 {
    d.surface().quadrant_regions(p).iter().map(|&r| dom.mult[r]).sum()
}

/// Sum over the coordinates of `x` and of `y` of the average multiplicity of
/// the four quadrants there.
pub fn point_measure(d: &HeegaardDiagram, dom: &Domain, x: &Generator, y: &Generator) -> Quarter {
    x.crossings()
        .iter()
        .chain(y.crossings())
        .map(|&p| Quarter(corner_sum(d, dom, p)))
        .sum()
}

pub fn maslov(d: &HeegaardDiagram, dom: &Domain, x: &Generator, y: &Generator) -> Quarter {
    euler_measure(d, dom) + point_measure(d, dom, x, y)
}

/// Multiplicity at each basepoint, in basepoint order, and their sum.
pub fn basepoint_multiplicities(d: &HeegaardDiagram, dom: &Domain) -> (Vec<i64>, i64) {
    let per: Vec<i64> = d.basepoint_regions().iter().map(|&r| dom.mult[r]).collect();
    let total = per.iter().sum();
    (per, total)
}

/// Domains constant on each component of `Σ` minus the curves of `kind`.
pub fn boundary_degenerations(d: &HeegaardDiagram, kind: CurveKind) -> Result<Lattice> {
    let n = d.region_count();
    let gens: Vec<Vec<i64>> = d
        .surface()
        .curve_complement_components(kind)
        .into_iter()
        .map(|part| Domain::indicator(n, part).mult)
        .collect();
    Lattice::span(n, &gens)
}

/// Subtracts α-boundary degenerations so every basepoint multiplicity becomes
/// zero. Each α-component carries exactly one basepoint in a valid diagram,
/// so the correction is unique.
pub fn clear_basepoints(d: &HeegaardDiagram, dom: &Domain) -> Domain {
    let labels = d.surface().complement_labels(CurveKind::Alpha);
    let (per, _) = basepoint_multiplicities(d, dom);
    let mut out = dom.clone();
    for (&w, &m) in d.basepoint_regions().iter().zip(&per) {
        if m == 0 {
            continue;
        }
        for (r, &l) in labels.iter().enumerate() {
            if l == labels[w] {
                out.mult[r] -= m;
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H2Data {
    /// Periodic domains with equal multiplicity at every basepoint.
    pub pi2prime: Lattice,
    /// Periodic domains vanishing at every basepoint; its canonical basis is
    /// the chosen basis of `H₂`.
    pub periodic: Lattice,
    pub rank: usize,
}

/// `π₂′(x, x)` and a basis of `π₂′(x, x)/⟨Σ⟩`. The periodic lattice does not
/// depend on `x`, so no generator is needed.
pub fn pi2prime_and_h2(d: &HeegaardDiagram) -> Result<H2Data> {
    let solver = DomainSolver::new(d)?;
    pi2prime_and_h2_from(d, solver.kernel())
}

pub fn pi2prime_and_h2_from(d: &HeegaardDiagram, kernel: &Lattice) -> Result<H2Data> {
    let n = d.region_count();
    let w = d.basepoint_regions();
    let equal_rows: Vec<Vec<i64>> = w
        .iter()
        .skip(1)
        .map(|&r| {
            let mut row = vec![0i64; n];
            row[w[0]] += 1;
            row[r] -= 1;
            row
        })
        .collect();
    let pi2prime = kernel.restrict_by(&equal_rows)?;
    let pointed: Vec<usize> = w.to_vec();
    let periodic = kernel.restrict_zero(&pointed)?;
    let rank = periodic.rank();
    Ok(H2Data { pi2prime, periodic, rank })
}

/// Coordinates of `D ∈ π₂′(x, x)` modulo `⟨Σ⟩` in the `H₂` basis, and the
/// total basepoint multiplicity.
pub fn h2_class(d: &HeegaardDiagram, h2: &H2Data, dom: &Domain) -> Result<(Vec<i64>, i64)> {
    if !h2.pi2prime.contains(&dom.mult)? {
        return Err(HfError::NotInLattice("domain is not in π₂′(x, x)".into()));
    }
    let (per, total) = basepoint_multiplicities(d, dom);
    let w1 = per.first().copied().unwrap_or(0);
    let periodic = dom - &Domain::full(dom.len()).scale(w1);
    let coords = h2
        .periodic
        .coordinates(&periodic.mult)?
        .ok_or_else(|| HfError::NotInLattice("periodic part outside the H₂ lattice".into()))?;
    Ok((coords, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::enumerate_generators;
    use crate::diagram::{make_lens, make_s1s2, make_s3_sphere, make_s3_torus};

    #[test]
    fn quarter_display() {
        assert_eq!(Quarter(2).to_string(), "1/2");
        assert_eq!(Quarter(-3).to_string(), "-3/4");
        assert_eq!(Quarter(8).to_string(), "2");
        assert_eq!(Quarter(0).to_string(), "0");
    }

    #[test]
    fn toric_pi2() {
        let d = make_s3_torus();
        let g = enumerate_generators(&d);
        let l = solve_pi2(&d, &g[0], &g[0]).unwrap();
        assert_eq!(l.particular, Some(Domain::zero(1)));
        assert_eq!(l.kernel.rank(), 1);
        let sigma = Domain::full(1);
        assert_eq!(euler_measure(&d, &sigma), Quarter::from_int(0));
        assert_eq!(point_measure(&d, &sigma, &g[0], &g[0]), Quarter::from_int(2));
    }

    #[test]
    fn spherical_pi2_and_bigons() {
        let d = make_s3_sphere();
        let g = enumerate_generators(&d);
        assert_eq!(g.len(), 2);
        let (x, y) = (&g[0], &g[1]);
        let l = solve_pi2(&d, x, y).unwrap();
        assert!(l.particular.is_some());
        assert_eq!(l.kernel.rank(), 3);
        let cs = CornerSystem::new(&d);
        let pointed = d.pointed_regions();
        let mut bigons = 0;
        for r in 0..4 {
            let dom = Domain::indicator(4, [r]);
            if pointed.contains(&r) || !cs.satisfied(&dom, x, y) {
                continue;
            }
            bigons += 1;
            assert_eq!(euler_measure(&d, &dom), Quarter(2));
            assert_eq!(point_measure(&d, &dom, x, y), Quarter(2));
            assert_eq!(maslov(&d, &dom, x, y), Quarter::from_int(1));
            assert_eq!(basepoint_multiplicities(&d, &dom), (vec![0, 0], 0));
        }
        assert_eq!(bigons, 2, "two unpointed bigons run from the first generator to the second");
        let sigma = Domain::full(4);
        assert_eq!(euler_measure(&d, &sigma), Quarter::from_int(2));
        assert_eq!(basepoint_multiplicities(&d, &sigma), (vec![1, 1], 2));
    }

    #[test]
    fn lens_generators_are_not_connected() {
        // the arc loop from x to y is not in the span of [α] and [β] in H₁(T²)
        let d = make_lens(3, 1).unwrap();
        let g = enumerate_generators(&d);
        assert_eq!(g.len(), 3);
        let solver = DomainSolver::new(&d).unwrap();
        let l = solver.solve(&g[0], &g[1]).unwrap();
        assert!(l.particular.is_none());
        let own = solver.solve(&g[1], &g[1]).unwrap();
        assert_eq!(own.particular, Some(Domain::zero(3)));
        assert_eq!(own.kernel.rank(), 1);
    }

    #[test]
    fn boundary_degeneration_ranks() {
        let s = make_s3_sphere();
        assert_eq!(boundary_degenerations(&s, CurveKind::Alpha).unwrap().rank(), 2);
        let t = make_s3_torus();
        assert_eq!(boundary_degenerations(&t, CurveKind::Alpha).unwrap().rank(), 1);
        let l = make_lens(3, 1).unwrap();
        assert_eq!(boundary_degenerations(&l, CurveKind::Beta).unwrap().rank(), 1);
    }

    #[test]
    fn alpha_degenerations_map_bijectively_to_basepoints() {
        let d = make_s3_sphere();
        for part in d.surface().curve_complement_components(CurveKind::Alpha) {
            let dom = Domain::indicator(4, part);
            let (per, total) = basepoint_multiplicities(&d, &dom);
            assert_eq!(total, 1);
            assert_eq!(per.iter().filter(|&&m| m == 1).count(), 1);
        }
    }

    #[test]
    fn h2_ranks() {
        assert_eq!(pi2prime_and_h2(&make_s3_sphere()).unwrap().rank, 1);
        assert_eq!(pi2prime_and_h2(&make_s3_torus()).unwrap().rank, 0);
        assert_eq!(pi2prime_and_h2(&make_s1s2()).unwrap().rank, 1);
        assert_eq!(pi2prime_and_h2(&make_lens(5, 2).unwrap()).unwrap().rank, 0);
    }

    #[test]
    fn h2_class_of_sigma_and_bigon_difference() {
        let d = make_s3_sphere();
        let h2 = pi2prime_and_h2(&d).unwrap();
        assert_eq!(h2_class(&d, &h2, &Domain::full(4)).unwrap(), (vec![0], 2));
        assert_eq!(h2_class(&d, &h2, &Domain::zero(4)).unwrap(), (vec![0], 0));

        let g = enumerate_generators(&d);
        let cs = CornerSystem::new(&d);
        let pointed = d.pointed_regions();
        let bigons: Vec<usize> = (0..4)
            .filter(|r| !pointed.contains(r))
            .filter(|&r| cs.satisfied(&Domain::indicator(4, [r]), &g[0], &g[1]))
            .collect();
        let diff = &Domain::indicator(4, [bigons[0]]) - &Domain::indicator(4, [bigons[1]]);
        let (coords, total) = h2_class(&d, &h2, &diff).unwrap();
        assert_eq!(coords[0].abs(), 1);
        assert_eq!(total, 0);

        let bad = Domain::indicator(4, [bigons[0]]);
        assert!(matches!(h2_class(&d, &h2, &bad), Err(HfError::NotInLattice(_))));
    }

    #[test]
    fn class_keys_separate_lens_generators() {
        let d = make_lens(5, 2).unwrap();
        let g = enumerate_generators(&d);
        let solver = DomainSolver::new(&d).unwrap();
        let keys: std::collections::BTreeSet<_> =
            g.iter().map(|x| solver.class_key(x).unwrap()).collect();
        assert_eq!(keys.len(), 5);
        let s = make_s3_sphere();
        let g = enumerate_generators(&s);
        let solver = DomainSolver::new(&s).unwrap();
        assert_eq!(solver.class_key(&g[0]).unwrap(), solver.class_key(&g[1]).unwrap());
    }
}
