//! Combinatorial-map model of a Heegaard surface carrying the two curve
//! families.
//!
//! Every crossing owns four darts, numbered `4 * crossing + slot` with slots
//! `AlphaOut, BetaOut, AlphaIn, BetaIn`. The rotation `σ` lists the darts of a
//! crossing counterclockwise; the involution `ι` pairs an outgoing dart with
//! the incoming dart of the next crossing along the same curve. Faces are the
//! orbits of `h ↦ σ⁻¹(ι(h))`, which keeps each face on the left of its
//! boundary darts.
//!
//! A surface may consist of several graph components joined by tubes (this is
//! how connected sums and stabilizations are represented). Faces traced from
//! the map are always disks; an elementary domain ([`Region`]) is a union of
//! faces joined by tubes, possibly carrying extra handles.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HfError, Result};

pub type CrossingLabel = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Alpha,
    Beta,
}

impl CurveKind {
    pub fn other(self) -> CurveKind {
        match self {
            CurveKind::Alpha => CurveKind::Beta,
            CurveKind::Beta => CurveKind::Alpha,
        }
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveKind::Alpha => write!(f, "alpha"),
            CurveKind::Beta => write!(f, "beta"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DartKind {
    AlphaOut,
    BetaOut,
    AlphaIn,
    BetaIn,
}

impl DartKind {
    pub const ALL: [DartKind; 4] = [
        DartKind::AlphaOut,
        DartKind::BetaOut,
        DartKind::AlphaIn,
        DartKind::BetaIn,
    ];

    pub fn slot(self) -> usize {
        self as usize
    }

    pub fn from_slot(slot: usize) -> DartKind {
        DartKind::ALL[slot & 3]
    }

    pub fn curve(self) -> CurveKind {
        match self {
            DartKind::AlphaOut | DartKind::AlphaIn => CurveKind::Alpha,
            DartKind::BetaOut | DartKind::BetaIn => CurveKind::Beta,
        }
    }

    pub fn is_out(self) -> bool {
        matches!(self, DartKind::AlphaOut | DartKind::BetaOut)
    }

    pub fn reversed(self) -> DartKind {
        match self {
            DartKind::AlphaOut => DartKind::AlphaIn,
            DartKind::AlphaIn => DartKind::AlphaOut,
            DartKind::BetaOut => DartKind::BetaIn,
            DartKind::BetaIn => DartKind::BetaOut,
        }
    }
}

/// Corner label at a crossing. With the α-curve running left to right, `A`
/// and `B` lie above it, `B` and `C` lie on its outgoing side; labels run
/// clockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quadrant {
    A,
    B,
    C,
    D,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::A, Quadrant::B, Quadrant::C, Quadrant::D];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Whether the quadrant lies on the left of the α-curve.
    pub fn left_of_alpha(self) -> bool {
        matches!(self, Quadrant::A | Quadrant::B)
    }

    /// The quadrant at the same geometric position after reversing the
    /// α-orientation.
    pub fn alpha_reversed(self) -> Quadrant {
        match self {
            Quadrant::A => Quadrant::C,
            Quadrant::B => Quadrant::D,
            Quadrant::C => Quadrant::A,
            Quadrant::D => Quadrant::B,
        }
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dart {
    pub id: usize,
    pub crossing: usize,
    pub kind: DartKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialMap {
    labels: Vec<CrossingLabel>,
    index_of: BTreeMap<CrossingLabel, usize>,
    signs: Vec<i8>,
    alpha: Vec<Vec<usize>>,
    beta: Vec<Vec<usize>>,
    alpha_pos: Vec<(usize, usize)>,
    beta_pos: Vec<(usize, usize)>,
    rotation: Vec<usize>,
    rotation_inv: Vec<usize>,
    involution: Vec<usize>,
}

/// Build a connected combinatorial map from cyclic crossing sequences.
pub fn build_map(
    alpha_curves: &[Vec<CrossingLabel>],
    beta_curves: &[Vec<CrossingLabel>],
    signs: &BTreeMap<CrossingLabel, i8>,
) -> Result<CombinatorialMap> {
    let map = CombinatorialMap::from_curves(alpha_curves, beta_curves, signs)?;
    if map.component_count() != 1 {
        return Err(HfError::DisconnectedMap);
    }
    Ok(map)
}

impl CombinatorialMap {
    /// Build a map whose curve graph may have several components.
    pub fn from_curves(
        alpha_curves: &[Vec<CrossingLabel>],
        beta_curves: &[Vec<CrossingLabel>],
        signs: &BTreeMap<CrossingLabel, i8>,
    ) -> Result<CombinatorialMap> {
        if alpha_curves.is_empty() || beta_curves.is_empty() {
            return Err(HfError::MissingCrossing("empty curve family".into()));
        }
        let mut labels: Vec<CrossingLabel> = Vec::new();
        let mut index_of = BTreeMap::new();
        let mut alpha_pos_l = BTreeMap::new();
        for (i, curve) in alpha_curves.iter().enumerate() {
            if curve.is_empty() {
                return Err(HfError::MissingCrossing(format!("alpha curve {i} is empty")));
            }
            for (j, &c) in curve.iter().enumerate() {
                if alpha_pos_l.insert(c, (i, j)).is_some() {
                    return Err(HfError::DuplicateCrossing(c));
                }
            }
        }
        let mut beta_pos_l = BTreeMap::new();
        for (i, curve) in beta_curves.iter().enumerate() {
            if curve.is_empty() {
                return Err(HfError::MissingCrossing(format!("beta curve {i} is empty")));
            }
            for (j, &c) in curve.iter().enumerate() {
                if beta_pos_l.insert(c, (i, j)).is_some() {
                    return Err(HfError::DuplicateCrossing(c));
                }
            }
        }
        for c in alpha_pos_l.keys() {
            if !beta_pos_l.contains_key(c) {
                return Err(HfError::MissingCrossing(format!("crossing {c} is on no beta curve")));
            }
        }
        for c in beta_pos_l.keys() {
            if !alpha_pos_l.contains_key(c) {
                return Err(HfError::MissingCrossing(format!("crossing {c} is on no alpha curve")));
            }
        }
        for c in signs.keys() {
            if !alpha_pos_l.contains_key(c) {
                return Err(HfError::MissingCrossing(format!("sign given for unknown crossing {c}")));
            }
        }
        for &c in alpha_pos_l.keys() {
            index_of.insert(c, labels.len());
            labels.push(c);
        }
        let n = labels.len();
        let mut sign_vec = Vec::with_capacity(n);
        for &c in &labels {
            match signs.get(&c) {
                Some(&s) if s == 1 || s == -1 => sign_vec.push(s),
                Some(&s) => {
                    return Err(HfError::SchemaError {
                        location: format!("signs.{c}"),
                        message: format!("sign must be 1 or -1, got {s}"),
                    })
                }
                None => return Err(HfError::MissingCrossing(format!("no sign for crossing {c}"))),
            }
        }
        let dense = |curves: &[Vec<CrossingLabel>]| -> Vec<Vec<usize>> {
            curves.iter().map(|cv| cv.iter().map(|c| index_of[c]).collect()).collect()
        };
        let alpha = dense(alpha_curves);
        let beta = dense(beta_curves);
        let mut alpha_pos = vec![(0, 0); n];
        let mut beta_pos = vec![(0, 0); n];
        for (i, cv) in alpha.iter().enumerate() {
            for (j, &c) in cv.iter().enumerate() {
                alpha_pos[c] = (i, j);
            }
        }
        for (i, cv) in beta.iter().enumerate() {
            for (j, &c) in cv.iter().enumerate() {
                beta_pos[c] = (i, j);
            }
        }

        let mut rotation = vec![0; 4 * n];
        for c in 0..n {
            let order: [usize; 4] = if sign_vec[c] > 0 { [0, 1, 2, 3] } else { [0, 3, 2, 1] };
            for k in 0..4 {
                rotation[4 * c + order[k]] = 4 * c + order[(k + 1) % 4];
            }
        }
        let mut rotation_inv = vec![0; 4 * n];
        for (d, &r) in rotation.iter().enumerate() {
            rotation_inv[r] = d;
        }
        let mut involution = vec![0; 4 * n];
        for (curves, out_slot, in_slot) in [(&alpha, 0usize, 2usize), (&beta, 1, 3)] {
            for cv in curves.iter() {
                for j in 0..cv.len() {
                    let here = cv[j];
                    let next = cv[(j + 1) % cv.len()];
                    involution[4 * here + out_slot] = 4 * next + in_slot;
                    involution[4 * next + in_slot] = 4 * here + out_slot;
                }
            }
        }

        Ok(CombinatorialMap {
            labels,
            index_of,
            signs: sign_vec,
            alpha,
            beta,
            alpha_pos,
            beta_pos,
            rotation,
            rotation_inv,
            involution,
        })
    }

    pub fn crossing_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        2 * self.labels.len()
    }

    pub fn dart_count(&self) -> usize {
        4 * self.labels.len()
    }

    pub fn label(&self, crossing: usize) -> CrossingLabel {
        self.labels[crossing]
    }

    pub fn labels(&self) -> &[CrossingLabel] {
        &self.labels
    }

    pub fn index_of(&self, label: CrossingLabel) -> Option<usize> {
        self.index_of.get(&label).copied()
    }

    pub fn sign(&self, crossing: usize) -> i8 {
        self.signs[crossing]
    }

    pub fn curves(&self, kind: CurveKind) -> &[Vec<usize>] {
        match kind {
            CurveKind::Alpha => &self.alpha,
            CurveKind::Beta => &self.beta,
        }
    }

    /// `(curve index, position)` of a crossing on its curve of the given kind.
    pub fn position(&self, kind: CurveKind, crossing: usize) -> (usize, usize) {
        match kind {
            CurveKind::Alpha => self.alpha_pos[crossing],
            CurveKind::Beta => self.beta_pos[crossing],
        }
    }

    pub fn dart_id(crossing: usize, kind: DartKind) -> usize {
        4 * crossing + kind.slot()
    }

    pub fn dart(&self, id: usize) -> Dart {
        Dart { id, crossing: id / 4, kind: DartKind::from_slot(id % 4) }
    }

    pub fn rotate(&self, dart: usize) -> usize {
        self.rotation[dart]
    }

    pub fn rotate_back(&self, dart: usize) -> usize {
        self.rotation_inv[dart]
    }

    pub fn opposite(&self, dart: usize) -> usize {
        self.involution[dart]
    }

    /// Successor of a dart along the boundary of the face on its left.
    pub fn face_next(&self, dart: usize) -> usize {
        self.rotation_inv[self.involution[dart]]
    }

    /// The dart whose left face occupies the given quadrant.
    pub fn dart_for_quadrant(&self, crossing: usize, quadrant: Quadrant) -> usize {
        let out = Self::dart_id(crossing, DartKind::AlphaOut);
        let inn = Self::dart_id(crossing, DartKind::AlphaIn);
        match quadrant {
            Quadrant::B => out,
            Quadrant::D => inn,
            Quadrant::A => self.rotation[out],
            Quadrant::C => self.rotation[inn],
        }
    }

    /// The quadrant occupied by the face on the left of `dart`.
    pub fn quadrant_of_dart(&self, dart: usize) -> Quadrant {
        let crossing = dart / 4;
        Quadrant::ALL
            .into_iter()
            .find(|&q| self.dart_for_quadrant(crossing, q) == dart)
            .expect("every dart bounds a quadrant")
    }

    /// Graph component of every crossing, numbered by smallest crossing.
    pub fn crossing_components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.crossing_count());
        for d in 0..self.dart_count() {
            uf.union(d / 4, self.involution[d] / 4);
        }
        uf.labels()
    }

    pub fn component_count(&self) -> usize {
        self.crossing_components().iter().max().map_or(0, |m| m + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: usize,
    pub darts: Vec<usize>,
    pub corners: Vec<(usize, Quadrant)>,
}

impl Face {
    pub fn corner_count(&self) -> usize {
        self.corners.len()
    }
}

/// Faces of the map, ordered by their smallest dart.
pub fn trace_faces(map: &CombinatorialMap) -> Vec<Face> {
    let mut seen = vec![false; map.dart_count()];
    let mut faces = Vec::new();
    for start in 0..map.dart_count() {
        if seen[start] {
            continue;
        }
        let mut darts = Vec::new();
        let mut d = start;
        loop {
            seen[d] = true;
            darts.push(d);
            d = map.face_next(d);
            if d == start {
                break;
            }
        }
        let corners = darts.iter().map(|&d| (d / 4, map.quadrant_of_dart(d))).collect();
        faces.push(Face { id: faces.len(), darts, corners });
    }
    faces
}

/// Genus of a connected map from `V - E + F = 2 - 2g`.
pub fn genus(map: &CombinatorialMap) -> Result<usize> {
    let faces = trace_faces(map).len() as i64;
    let chi = map.crossing_count() as i64 - map.edge_count() as i64 + faces;
    genus_from_chi(chi)
}

fn genus_from_chi(chi: i64) -> Result<usize> {
    if chi > 2 || (2 - chi) % 2 != 0 {
        return Err(HfError::NonIntegerGenus(chi));
    }
    Ok(((2 - chi) / 2) as usize)
}

/// An elementary domain: one or more disk faces joined by tubes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub id: usize,
    pub faces: Vec<usize>,
    pub handles: usize,
    pub corners: usize,
}

impl Region {
    pub fn is_disk(&self) -> bool {
        self.faces.len() == 1 && self.handles == 0
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - self.faces.len() as i64 - 2 * self.handles as i64
    }

    /// Euler measure in units of 1/4.
    pub fn euler_quarters(&self) -> i64 {
        4 * self.euler_characteristic() - self.corners as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surface {
    pub map: CombinatorialMap,
    pub faces: Vec<Face>,
    pub face_of_dart: Vec<usize>,
    pub regions: Vec<Region>,
    pub region_of_face: Vec<usize>,
    pub genus: usize,
}

impl Surface {
    /// Assemble the surface from a map and a list of tubes, each joining the
    /// faces on the left of two darts.
    pub fn new(map: CombinatorialMap, tubes: &[(usize, usize)]) -> Result<Surface> {
        let faces = trace_faces(&map);
        let mut face_of_dart = vec![0; map.dart_count()];
        for f in &faces {
            for &d in &f.darts {
                face_of_dart[d] = f.id;
            }
        }
        let mut uf = UnionFind::new(faces.len());
        let mut extra_handles: HashMap<usize, usize> = HashMap::new();
        let mut pending_handles = Vec::new();
        for &(d1, d2) in tubes {
            let (f1, f2) = (face_of_dart[d1], face_of_dart[d2]);
            if !uf.union(f1, f2) {
                pending_handles.push(f1);
            }
        }
        for f in pending_handles {
            *extra_handles.entry(uf.find(f)).or_default() += 1;
        }
        let labels = uf.labels();
        let region_count = labels.iter().max().map_or(0, |m| m + 1);
        let mut regions: Vec<Region> = (0..region_count)
            .map(|id| Region { id, faces: Vec::new(), handles: 0, corners: 0 })
            .collect();
        for f in &faces {
            let r = &mut regions[labels[f.id]];
            r.faces.push(f.id);
            r.corners += f.corner_count();
        }
        for (root, h) in extra_handles {
            regions[labels[root]].handles += h;
        }

        // the surface is connected iff graph components are joined through tubes
        let comp = map.crossing_components();
        let ncomp = comp.iter().max().map_or(0, |m| m + 1);
        let mut cuf = UnionFind::new(ncomp);
        for &(d1, d2) in tubes {
            cuf.union(comp[d1 / 4], comp[d2 / 4]);
        }
        if (0..ncomp).any(|c| cuf.find(c) != cuf.find(0)) {
            return Err(HfError::DisconnectedMap);
        }

        let chi: i64 = map.crossing_count() as i64 - map.edge_count() as i64
            + regions.iter().map(Region::euler_characteristic).sum::<i64>();
        let genus = genus_from_chi(chi)?;
        Ok(Surface { map, faces, face_of_dart, regions, region_of_face: labels, genus })
    }

    pub fn region_of_dart(&self, dart: usize) -> usize {
        self.region_of_face[self.face_of_dart[dart]]
    }

    /// Regions in quadrants `[A, B, C, D]` of a crossing.
    pub fn quadrant_regions(&self, crossing: usize) -> [usize; 4] {
        Quadrant::ALL.map(|q| self.region_of_dart(self.map.dart_for_quadrant(crossing, q)))
    }

    pub fn region_of_corner(&self, crossing: usize, quadrant: Quadrant) -> usize {
        self.region_of_dart(self.map.dart_for_quadrant(crossing, quadrant))
    }

    /// Partition of the regions into components of Σ minus the curves of
    /// `kind`: regions are merged across every edge of the other kind.
    pub fn curve_complement_components(&self, kind: CurveKind) -> Vec<Vec<usize>> {
        let labels = self.complement_labels(kind);
        let n = labels.iter().max().map_or(0, |m| m + 1);
        let mut parts = vec![Vec::new(); n];
        for (r, &l) in labels.iter().enumerate() {
            parts[l].push(r);
        }
        parts
    }

    /// Component index (as in [`Self::curve_complement_components`]) of each region.
    pub fn complement_labels(&self, kind: CurveKind) -> Vec<usize> {
        let mut uf = UnionFind::new(self.regions.len());
        let slot = match kind.other() {
            CurveKind::Alpha => DartKind::AlphaOut,
            CurveKind::Beta => DartKind::BetaOut,
        };
        for c in 0..self.map.crossing_count() {
            let d = CombinatorialMap::dart_id(c, slot);
            uf.union(self.region_of_dart(d), self.region_of_dart(self.map.opposite(d)));
        }
        uf.labels()
    }
}

/// Union-find with path halving; `labels` numbers classes by first member.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub(crate) fn labels(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut map = HashMap::new();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let r = self.find(i);
            let next = map.len();
            out.push(*map.entry(r).or_insert(next));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signs(pairs: &[(u32, i8)]) -> BTreeMap<u32, i8> {
        pairs.iter().copied().collect()
    }

    fn lens(p: u32, q: u32) -> CombinatorialMap {
        let alpha: Vec<u32> = (0..p).collect();
        let beta: Vec<u32> = (0..p).map(|i| (i * q) % p).collect();
        let s = (0..p).map(|c| (c, 1)).collect();
        build_map(&[alpha], &[beta], &s).unwrap()
    }

    #[test]
    fn toric_fixture_has_one_square_face() {
        let m = build_map(&[vec![0]], &[vec![0]], &signs(&[(0, 1)])).unwrap();
        let faces = trace_faces(&m);
        assert_eq!((m.crossing_count(), m.edge_count(), faces.len()), (1, 2, 1));
        assert_eq!(faces[0].corner_count(), 4);
        assert_eq!(genus(&m).unwrap(), 1);
    }

    #[test]
    fn spherical_fixture_has_four_bigons() {
        let m = build_map(&[vec![1, 2]], &[vec![1, 2]], &signs(&[(1, 1), (2, -1)])).unwrap();
        let faces = trace_faces(&m);
        assert_eq!(faces.len(), 4);
        assert!(faces.iter().all(|f| f.corner_count() == 2));
        assert_eq!(genus(&m).unwrap(), 0);
    }

    #[test]
    fn lens_faces_are_squares() {
        for (p, q) in [(3, 1), (5, 1), (5, 2), (7, 3)] {
            let m = lens(p, q);
            let faces = trace_faces(&m);
            assert_eq!(faces.len(), p as usize, "L({p},{q})");
            assert!(faces.iter().all(|f| f.corner_count() == 4));
            assert_eq!(genus(&m).unwrap(), 1);
        }
    }

    #[test]
    fn empty_curve_list_is_rejected() {
        let err = build_map(&[], &[], &BTreeMap::new()).unwrap_err();
        assert!(matches!(err, HfError::MissingCrossing(_)));
    }

    #[test]
    fn duplicate_and_missing_crossings_are_rejected() {
        let err = build_map(&[vec![0, 0]], &[vec![0]], &signs(&[(0, 1)])).unwrap_err();
        assert_eq!(err, HfError::DuplicateCrossing(0));
        let err = build_map(&[vec![0, 1]], &[vec![0]], &signs(&[(0, 1), (1, 1)])).unwrap_err();
        assert!(matches!(err, HfError::MissingCrossing(_)));
    }

    #[test]
    fn disjoint_graphs_are_disconnected() {
        let err = build_map(&[vec![0], vec![1]], &[vec![0], vec![1]], &signs(&[(0, 1), (1, 1)]))
            .unwrap_err();
        assert_eq!(err, HfError::DisconnectedMap);
    }

    #[test]
    fn every_dart_on_exactly_one_face_and_quadrants_round_trip() {
        let m = lens(5, 2);
        let faces = trace_faces(&m);
        let mut count = vec![0; m.dart_count()];
        for f in &faces {
            for &d in &f.darts {
                count[d] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == 1));
        for c in 0..m.crossing_count() {
            for q in Quadrant::ALL {
                assert_eq!(m.quadrant_of_dart(m.dart_for_quadrant(c, q)), q);
            }
        }
    }

    #[test]
    fn gauss_bonnet_over_faces() {
        for m in [lens(3, 1), lens(7, 2)] {
            let s = Surface::new(m, &[]).unwrap();
            let total: i64 = s.regions.iter().map(Region::euler_quarters).sum();
            assert_eq!(total, 4 * (2 - 2 * s.genus as i64));
        }
    }

    #[test]
    fn complement_components() {
        let sphere = build_map(&[vec![1, 2]], &[vec![1, 2]], &signs(&[(1, 1), (2, -1)])).unwrap();
        let s = Surface::new(sphere, &[]).unwrap();
        let parts = s.curve_complement_components(CurveKind::Alpha);
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.len() == 2));

        let s = Surface::new(lens(3, 1), &[]).unwrap();
        assert_eq!(s.curve_complement_components(CurveKind::Beta).len(), 1);
    }

    #[test]
    fn tube_between_components_adds_genus() {
        let m = CombinatorialMap::from_curves(
            &[vec![0], vec![1]],
            &[vec![0], vec![1]],
            &signs(&[(0, 1), (1, 1)]),
        )
        .unwrap();
        assert_eq!(m.component_count(), 2);
        let s = Surface::new(m.clone(), &[(0, 4)]).unwrap();
        assert_eq!(s.genus, 2);
        assert_eq!(s.regions.len(), 1);
        assert_eq!(s.regions[0].euler_characteristic(), 0);
        assert_eq!(Surface::new(m, &[]).unwrap_err(), HfError::DisconnectedMap);
    }
}
