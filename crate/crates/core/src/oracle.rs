//! Brute-force cross-checks: exhaustive polygon enumeration, the sheeted
//! surface built from a domain, and random sampling of Maslov additivity.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{empty_polygons, enumerate_generators, pi2_classes_with, Generator};
use crate::diagram::HeegaardDiagram;
use crate::domains::{basepoint_multiplicities, euler_measure, maslov, CornerSystem, Domain, DomainSolver, Quarter};
use crate::error::{HfError, Result};
use crate::par;
use crate::surface::{CrossingLabel, CurveKind};

/// Largest number of unpointed regions the exhaustive search accepts.
pub const DEFAULT_CAP: usize = 22;

fn unpointed(d: &HeegaardDiagram) -> Vec<usize> {
    (0..d.region_count()).filter(|&r| !d.is_pointed(r)).collect()
}

/// Runs `keep` on every {0,1} vector over the unpointed regions whose
/// corner sums are all in {−1, 0, 1}. Pointed regions stay at 0.
fn exhaust<R, F>(d: &HeegaardDiagram, cap: usize, keep: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&Domain, &[i64]) -> Option<R> + Sync + Send,
{
    let free = unpointed(d);
    let n = free.len();
    if n > cap {
        return Err(HfError::TooLarge { faces: n, cap });
    }
    let sys = CornerSystem::new(d);
    let cols: Vec<Vec<(usize, i64)>> = (0..d.region_count())
        .map(|r| {
            sys.matrix
                .iter()
                .enumerate()
                .filter(|(_, row)| row[r] != 0)
                .map(|(p, row)| (p, row[r]))
                .collect()
        })
        .collect();
    let high = n.min(6);
    let low = n - high;
    // high bits split the work, low bits run in Gray-code order
    let chunks = par::map_range(1 << high, |hi| {
        let mut dom = Domain::zero(d.region_count());
        let mut sums = vec![0i64; sys.matrix.len()];
        let toggle = |dom: &mut Domain, sums: &mut [i64], r: usize| {
            let delta = if dom.mult[r] == 0 { 1 } else { -1 };
            dom.mult[r] += delta;
            for &(p, c) in &cols[r] {
                sums[p] += delta * c;
            }
        };
        for b in 0..high {
            if hi >> b & 1 == 1 {
                toggle(&mut dom, &mut sums, free[low + b]);
            }
        }
        let mut out = Vec::new();
        for i in 0u64..1 << low {
            if i > 0 {
                toggle(&mut dom, &mut sums, free[i.trailing_zeros() as usize]);
            }
            if sums.iter().all(|s| s.abs() <= 1) {
                out.extend(keep(&dom, &sums));
            }
        }
        out
    });
    Ok(chunks.into_iter().flatten().collect())
}

/// Every `D ∈ π₂(x, y)` with entries in {0,1}, zero on pointed regions and
/// `μ(D) = 1`, found by exhaustion.
pub fn brute_force_polygons(d: &HeegaardDiagram, x: &Generator, y: &Generator) -> Result<Vec<Domain>> {
    brute_force_polygons_capped(d, x, y, DEFAULT_CAP)
}

pub fn brute_force_polygons_capped(
    d: &HeegaardDiagram,
    x: &Generator,
    y: &Generator,
    cap: usize,
) -> Result<Vec<Domain>> {
    let rhs = CornerSystem::new(d).rhs(x, y);
    let mut out = exhaust(d, cap, |dom, sums| {
        (sums == rhs.as_slice() && maslov(d, dom, x, y) == Quarter::from_int(1)).then(|| dom.clone())
    })?;
    out.sort();
    Ok(out)
}

/// All polygons of the diagram in one sweep: `(x index, y index, D)` over
/// the canonical generator order, sorted.
pub fn brute_force_all(d: &HeegaardDiagram) -> Result<Vec<(usize, usize, Domain)>> {
    let gens = enumerate_generators(d);
    // coordinates are stored in α-curve order; look them up as sets
    let index: HashMap<Vec<usize>, usize> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut key = g.crossings().to_vec();
            key.sort_unstable();
            (key, i)
        })
        .collect();
    let mut out: Vec<(usize, usize, Domain)> = exhaust(d, DEFAULT_CAP, |dom, sums| {
        let mut found = Vec::new();
        for (xi, x) in gens.iter().enumerate() {
            // x must contain every crossing where the sum is −1 and avoid the +1s
            let ok = sums.iter().enumerate().all(|(p, &s)| match s {
                -1 => x.contains(p),
                1 => !x.contains(p),
                _ => true,
            });
            if !ok {
                continue;
            }
            let mut ys: Vec<usize> = x.crossings().iter().copied().filter(|&p| sums[p] != -1).collect();
            ys.extend((0..sums.len()).filter(|&p| sums[p] == 1));
            ys.sort_unstable();
            let Some(&yi) = index.get(ys.as_slice()) else { continue };
            if maslov(d, dom, x, &gens[yi]) == Quarter::from_int(1) {
                found.push((xi, yi, dom.clone()));
            }
        }
        Some(found)
    })?
    .into_iter()
    .flatten()
    .collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub x: String,
    pub y: String,
    pub search_only: Vec<Domain>,
    pub oracle_only: Vec<Domain>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub generators: usize,
    pub pairs: usize,
    pub polygons: usize,
    pub discrepancies: Vec<Discrepancy>,
}

impl OracleReport {
    pub fn ok(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

fn discrepancy(
    d: &HeegaardDiagram,
    x: &Generator,
    y: &Generator,
    search: &[Domain],
    oracle: &[Domain],
) -> Option<Discrepancy> {
    let search_only: Vec<Domain> = search.iter().filter(|s| !oracle.contains(s)).cloned().collect();
    let oracle_only: Vec<Domain> = oracle.iter().filter(|s| !search.contains(s)).cloned().collect();
    (!search_only.is_empty() || !oracle_only.is_empty()).then(|| Discrepancy {
        x: x.display(d.map()),
        y: y.display(d.map()),
        search_only,
        oracle_only,
    })
}

/// Compares the polygon search with exhaustion on every pair of generators.
pub fn compare_polygons(d: &HeegaardDiagram) -> Result<OracleReport> {
    let gens = enumerate_generators(d);
    let mut oracle: BTreeMap<(usize, usize), Vec<Domain>> = BTreeMap::new();
    for (xi, yi, dom) in brute_force_all(d)? {
        oracle.entry((xi, yi)).or_default().push(dom);
    }
    let rows = par::map(&gens, |x: &Generator| empty_polygons(d, x));
    let mut search: BTreeMap<(usize, usize), Vec<Domain>> = BTreeMap::new();
    for (xi, row) in rows.into_iter().enumerate() {
        for (y, dom) in row? {
            let yi = gens.binary_search(&y).expect("polygon ends at a generator");
            search.entry((xi, yi)).or_default().push(dom);
        }
    }
    let mut discrepancies = Vec::new();
    let mut keys: Vec<(usize, usize)> = oracle.keys().chain(search.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    for &(xi, yi) in &keys {
        let mut s = search.get(&(xi, yi)).cloned().unwrap_or_default();
        s.sort();
        let o = oracle.get(&(xi, yi)).cloned().unwrap_or_default();
        discrepancies.extend(discrepancy(d, &gens[xi], &gens[yi], &s, &o));
    }
    Ok(OracleReport {
        generators: gens.len(),
        pairs: gens.len() * gens.len(),
        polygons: oracle.values().map(Vec::len).sum(),
        discrepancies,
    })
}

/// Compares one pair, running the per-pair exhaustion.
pub fn compare_pair(d: &HeegaardDiagram, x: &Generator, y: &Generator) -> Result<OracleReport> {
    let mut s: Vec<Domain> =
        empty_polygons(d, x)?.into_iter().filter(|(z, _)| z == y).map(|(_, dom)| dom).collect();
    s.sort();
    let o = brute_force_polygons(d, x, y)?;
    Ok(OracleReport {
        generators: enumerate_generators(d).len(),
        pairs: 1,
        polygons: o.len(),
        discrepancies: discrepancy(d, x, y, &s, &o).into_iter().collect(),
    })
}

/// The surface tiled by copies of the regions of a nonnegative domain, glued
/// along elementary arcs: α-arcs bottom to bottom, β-arcs top to top.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TiledSurface {
    /// `(region, copy)` for every sheet.
    pub sheets: Vec<(usize, usize)>,
    pub euler_characteristic: i64,
    pub boundary_components: usize,
    /// Boundary points where exactly one sheet corner sits (a right angle).
    pub convex_corners: Vec<CrossingLabel>,
    /// Boundary points where three sheet corners meet.
    pub concave_corners: Vec<CrossingLabel>,
    /// Sum of the Euler measures of the sheets.
    pub euler_measure: Quarter,
}

impl TiledSurface {
    pub fn corner_count(&self) -> usize {
        self.convex_corners.len() + self.concave_corners.len()
    }

    pub fn is_disk(&self) -> bool {
        self.euler_characteristic == 1 && self.boundary_components == 1
    }

    /// `χ = e + (convex − concave)/4`.
    pub fn gauss_bonnet_holds(&self) -> bool {
        4 * self.euler_characteristic
            == self.euler_measure.0 + self.convex_corners.len() as i64 - self.concave_corners.len() as i64
    }

    /// Bigon: `e = ½` with two right-angled corners. Rectangle: `e = 0` with four.
    pub fn polygon_shape(&self) -> Option<usize> {
        if !self.is_disk() || !self.concave_corners.is_empty() {
            return None;
        }
        match (self.euler_measure.0, self.convex_corners.len()) {
            (2, 2) => Some(2),
            (0, 4) => Some(4),
            _ => None,
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

pub fn build_surface(d: &HeegaardDiagram, dom: &Domain, x: &Generator, y: &Generator) -> Result<TiledSurface> {
    let fail = |m: &str| Err(HfError::PreconditionFailed(m.to_string()));
    if !dom.is_nonnegative() {
        return fail("domain has a negative multiplicity");
    }
    if basepoint_multiplicities(d, dom).1 != 0 {
        return fail("domain covers a basepoint");
    }
    let s = d.surface();
    let map = d.map();
    for &p in x.crossings().iter().chain(y.crossings()) {
        let sum: i64 = s.quadrant_regions(p).iter().map(|&r| dom.mult[r]).sum();
        if sum >= 4 {
            return fail("point measure at a coordinate is at least 1");
        }
    }
    let darts = map.dart_count();
    let copies = dom.mult.iter().copied().max().unwrap_or(0).max(0) as usize;
    let slot = |h: usize, k: usize| k * darts + h;
    let mult = |h: usize| dom.mult[s.region_of_dart(h)] as usize;
    let mut edges = UnionFind::new(darts * copies);
    let mut verts = UnionFind::new(darts * copies);
    let mut glued = vec![false; darts * copies];
    let mut gluings = 0i64;
    for h in 0..darts {
        let o = map.opposite(h);
        if h > o {
            continue;
        }
        let (ni, nj) = (mult(h), mult(o));
        let m = ni.min(nj);
        for t in 0..m {
            let (a, b) = match map.dart(h).kind.curve() {
                CurveKind::Alpha => (t, t),
                CurveKind::Beta => (ni - 1 - t, nj - 1 - t),
            };
            edges.union(slot(h, a), slot(o, b));
            glued[slot(h, a)] = true;
            glued[slot(o, b)] = true;
            gluings += 1;
            // tail of one edge is the head of the other
            verts.union(slot(h, a), slot(map.face_next(o), b));
            verts.union(slot(map.face_next(h), a), slot(o, b));
        }
    }
    let present: Vec<usize> =
        (0..darts).flat_map(|h| (0..mult(h)).map(move |k| slot(h, k))).collect();
    let mut vroots: Vec<usize> = present.iter().map(|&v| verts.find(v)).collect();
    vroots.sort_unstable();
    vroots.dedup();
    let v = vroots.len() as i64;
    let e = present.len() as i64 - gluings;
    let sheets: Vec<(usize, usize)> = s
        .regions
        .iter()
        .flat_map(|r| (0..dom.mult[r.id].max(0) as usize).map(move |k| (r.id, k)))
        .collect();
    let interior: i64 = sheets.iter().map(|&(r, _)| s.regions[r].euler_characteristic()).sum();

    // boundary circles and the angle at each boundary vertex
    let mut bd = UnionFind::new(darts * copies);
    let mut on_boundary = vec![false; darts * copies];
    for &sl in &present {
        if !glued[sl] {
            let (h, k) = (sl % darts, sl / darts);
            let a = verts.find(slot(h, k));
            let b = verts.find(slot(map.face_next(h), k));
            bd.union(a, b);
            on_boundary[a] = true;
            on_boundary[b] = true;
        }
    }
    let mut class_size: BTreeMap<usize, usize> = BTreeMap::new();
    for &sl in &present {
        *class_size.entry(verts.find(sl)).or_default() += 1;
    }
    let mut circles: Vec<usize> =
        vroots.iter().filter(|&&r| on_boundary[r]).map(|&r| bd.find(r)).collect();
    circles.sort_unstable();
    circles.dedup();
    let mut convex = Vec::new();
    let mut concave = Vec::new();
    for (&root, &size) in &class_size {
        if !on_boundary[root] {
            continue;
        }
        let label = map.label(map.dart(root % darts).crossing);
        match size {
            1 => convex.push(label),
            3 => concave.push(label),
            _ => {}
        }
    }
    convex.sort_unstable();
    concave.sort_unstable();
    Ok(TiledSurface {
        sheets,
        euler_characteristic: interior + v - e,
        boundary_components: circles.len(),
        convex_corners: convex,
        concave_corners: concave,
        euler_measure: euler_measure(d, dom),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometryFailure {
    pub x: String,
    pub y: String,
    pub domain: Domain,
    pub reason: String,
}

/// Builds the tiled surface of every differential witness and checks it is
/// a disk whose corners match the bigon/rectangle dichotomy.
pub fn check_polygon_geometry(d: &HeegaardDiagram) -> Result<(usize, Vec<GeometryFailure>)> {
    let gens = enumerate_generators(d);
    let mut checked = 0;
    let mut failures = Vec::new();
    for x in &gens {
        for (y, dom) in empty_polygons(d, x)? {
            checked += 1;
            let reason = match build_surface(d, &dom, x, &y) {
                Err(e) => Some(e.to_string()),
                Ok(t) => {
                    let moving = x.crossings().iter().filter(|p| !y.contains(**p)).count();
                    let mut expected: Vec<CrossingLabel> = x
                        .labels(d.map())
                        .into_iter()
                        .chain(y.labels(d.map()))
                        .filter(|l| !(x.labels(d.map()).contains(l) && y.labels(d.map()).contains(l)))
                        .collect();
                    expected.sort_unstable();
                    if !t.is_disk() {
                        Some(format!("χ = {}, {} boundary circles", t.euler_characteristic, t.boundary_components))
                    } else if !t.gauss_bonnet_holds() {
                        Some("corner angles disagree with χ".into())
                    } else if t.polygon_shape() != Some(2 * moving) {
                        Some(format!("{} corners with e = {}", t.corner_count(), t.euler_measure))
                    } else if t.convex_corners != expected {
                        Some("corners are not the moving coordinates".into())
                    } else {
                        None
                    }
                }
            };
            if let Some(reason) = reason {
                failures.push(GeometryFailure {
                    x: x.display(d.map()),
                    y: y.display(d.map()),
                    domain: dom,
                    reason,
                });
            }
        }
    }
    Ok((checked, failures))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdditivityReport {
    pub seed: u64,
    pub trials: usize,
    pub classes: usize,
}

/// Samples `D₁ ∈ π₂(x, y)`, `D₂ ∈ π₂(y, z)` with periodic parts drawn from
/// [−3, 3] and checks `μ(D₁ + D₂) = μ(D₁) + μ(D₂)`.
pub fn maslov_additivity_sample(d: &HeegaardDiagram, trials: usize, seed: u64) -> Result<AdditivityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let solver = DomainSolver::new(d)?;
    let gens = enumerate_generators(d);
    let classes = pi2_classes_with(&solver, &gens)?;
    let kernel = solver.kernel().basis().to_vec();
    let sample = |x: &Generator, y: &Generator, rng: &mut ChaCha8Rng| -> Result<Domain> {
        let mut dom = solver.solve(x, y)?.particular.ok_or_else(|| {
            HfError::NoConnectingDomain(x.display(d.map()), y.display(d.map()))
        })?;
        for v in &kernel {
            let c: i64 = rng.gen_range(-3..=3);
            dom = &dom + &Domain { mult: v.iter().map(|a| a * c).collect() };
        }
        Ok(dom)
    };
    for _ in 0..trials {
        let class = classes.choose(&mut rng).expect("at least one generator");
        let x = &gens[*class.choose(&mut rng).expect("nonempty")];
        let y = &gens[*class.choose(&mut rng).expect("nonempty")];
        let z = &gens[*class.choose(&mut rng).expect("nonempty")];
        let d1 = sample(x, y, &mut rng)?;
        let d2 = sample(y, z, &mut rng)?;
        let lhs = maslov(d, &(&d1 + &d2), x, z);
        let rhs = maslov(d, &d1, x, y) + maslov(d, &d2, y, z);
        if lhs != rhs {
            return Err(HfError::AdditivityViolation(format!(
                "x = {}, y = {}, z = {}: μ(D₁ + D₂) = {lhs}, μ(D₁) + μ(D₂) = {rhs}",
                x.display(d.map()),
                y.display(d.map()),
                z.display(d.map())
            )));
        }
    }
    Ok(AdditivityReport { seed, trials, classes: classes.len() })
}
