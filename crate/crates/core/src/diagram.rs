//! Multi-pointed Heegaard diagrams: validation, niceness, standard fixtures,
//! connected sums and the JSON file format.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HfError, Result};
use crate::surface::{CombinatorialMap, CrossingLabel, CurveKind, Quadrant, Surface};

/// A corner of a face, addressed by crossing label and quadrant. Basepoints
/// and tube feet sit just inside the corner they name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corner {
    pub crossing: CrossingLabel,
    pub quadrant: Quadrant,
}

impl Corner {
    pub fn new(crossing: CrossingLabel, quadrant: Quadrant) -> Self {
        Corner { crossing, quadrant }
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.crossing, self.quadrant)
    }
}

/// On-disk form of a diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub name: String,
    pub alpha: Vec<Vec<CrossingLabel>>,
    pub beta: Vec<Vec<CrossingLabel>>,
    pub signs: BTreeMap<CrossingLabel, i8>,
    pub basepoints: Vec<Corner>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tubes: Vec<[Corner; 2]>,
}

#[derive(Clone, Debug)]
pub struct HeegaardDiagram {
    file: DiagramFile,
    surface: Surface,
    basepoint_regions: Vec<usize>,
}

impl PartialEq for HeegaardDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.file == other.file
    }
}

impl Eq for HeegaardDiagram {}

fn canonical_curves(curves: &[Vec<CrossingLabel>]) -> Vec<Vec<CrossingLabel>> {
    let mut out: Vec<Vec<CrossingLabel>> = curves
        .iter()
        .map(|c| {
            let mut c = c.clone();
            if let Some(pos) = c.iter().enumerate().min_by_key(|(_, v)| **v).map(|(i, _)| i) {
                c.rotate_left(pos);
            }
            c
        })
        .collect();
    out.sort_by_key(|c| c.first().copied());
    out
}

impl HeegaardDiagram {
    pub fn from_file(file: DiagramFile) -> Result<HeegaardDiagram> {
        let mut file = file;
        file.alpha = canonical_curves(&file.alpha);
        file.beta = canonical_curves(&file.beta);
        file.basepoints.sort();
        for t in file.tubes.iter_mut() {
            t.sort();
        }
        file.tubes.sort();

        let map = CombinatorialMap::from_curves(&file.alpha, &file.beta, &file.signs)?;
        let corner_dart = |c: &Corner, what: &str| -> Result<usize> {
            let idx = map.index_of(c.crossing).ok_or_else(|| HfError::SchemaError {
                location: what.to_string(),
                message: format!("unknown crossing {}", c.crossing),
            })?;
            Ok(map.dart_for_quadrant(idx, c.quadrant))
        };
        let mut tube_darts = Vec::new();
        for t in &file.tubes {
            tube_darts.push((corner_dart(&t[0], "tubes")?, corner_dart(&t[1], "tubes")?));
        }
        let mut bp_darts = Vec::new();
        for b in &file.basepoints {
            bp_darts.push(corner_dart(b, "basepoints")?);
        }
        let surface = Surface::new(map, &tube_darts)?;
        let basepoint_regions = bp_darts.iter().map(|&d| surface.region_of_dart(d)).collect();
        Ok(HeegaardDiagram { file, surface, basepoint_regions })
    }

    pub fn new(
        name: impl Into<String>,
        alpha: Vec<Vec<CrossingLabel>>,
        beta: Vec<Vec<CrossingLabel>>,
        signs: BTreeMap<CrossingLabel, i8>,
        basepoints: Vec<Corner>,
    ) -> Result<HeegaardDiagram> {
        Self::from_file(DiagramFile {
            name: name.into(),
            alpha,
            beta,
            signs,
            basepoints,
            tubes: Vec::new(),
        })
    }

    pub fn file(&self) -> &DiagramFile {
        &self.file
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.file.name = name.into();
        self
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn map(&self) -> &CombinatorialMap {
        &self.surface.map
    }

    /// Number of curves in each family (`k`); `max` of the two when unbalanced.
    pub fn k(&self) -> usize {
        self.file.alpha.len().max(self.file.beta.len())
    }

    pub fn genus(&self) -> usize {
        self.surface.genus
    }

    /// Number of basepoints, `b(𝔇)`.
    pub fn b(&self) -> usize {
        self.file.basepoints.len()
    }

    pub fn basepoints(&self) -> &[Corner] {
        &self.file.basepoints
    }

    pub fn tubes(&self) -> &[[Corner; 2]] {
        &self.file.tubes
    }

    /// Region containing each basepoint, in basepoint order.
    pub fn basepoint_regions(&self) -> &[usize] {
        &self.basepoint_regions
    }

    pub fn region_count(&self) -> usize {
        self.surface.regions.len()
    }

    pub fn is_pointed(&self, region: usize) -> bool {
        self.basepoint_regions.contains(&region)
    }

    pub fn pointed_regions(&self) -> BTreeSet<usize> {
        self.basepoint_regions.iter().copied().collect()
    }

    pub fn region_of_corner(&self, corner: Corner) -> Option<usize> {
        let idx = self.map().index_of(corner.crossing)?;
        Some(self.surface.region_of_corner(idx, corner.quadrant))
    }

    pub fn max_label(&self) -> CrossingLabel {
        self.map().labels().iter().copied().max().unwrap_or(0)
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    pub fn is_nice(&self) -> NicenessReport {
        is_nice(self)
    }

    /// Validity followed by niceness, as a single precondition guard.
    pub fn require_nice(&self) -> Result<()> {
        let v = self.validate();
        if !v.valid {
            return Err(HfError::NotNice(format!("invalid diagram: {}", v.clauses.join("; "))));
        }
        let n = self.is_nice();
        if !n.is_nice {
            let list: Vec<String> = n
                .offenders
                .iter()
                .map(|o| format!("region {} ({} corners)", o.region, o.corners))
                .collect();
            return Err(HfError::NotNice(list.join(", ")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub clauses: Vec<String>,
    pub warnings: Vec<String>,
}

pub const CLAUSE_BALANCED: &str = "balanced curve families";
pub const CLAUSE_COUNT: &str = "basepoint count k - g + 1";
pub const CLAUSE_ALPHA: &str = "unique basepoint per alpha-component";
pub const CLAUSE_BETA: &str = "unique basepoint per beta-component";
pub const CLAUSE_PER_FACE: &str = "at most one basepoint per face";

pub fn validate(d: &HeegaardDiagram) -> ValidationReport {
    let mut clauses = Vec::new();
    let warnings = Vec::new();
    let (ka, kb) = (d.file.alpha.len(), d.file.beta.len());
    if ka != kb {
        clauses.push(CLAUSE_BALANCED.to_string());
    }
    let expected = ka as i64 - d.genus() as i64 + 1;
    if d.b() as i64 != expected {
        clauses.push(CLAUSE_COUNT.to_string());
    }
    for (kind, clause) in [(CurveKind::Alpha, CLAUSE_ALPHA), (CurveKind::Beta, CLAUSE_BETA)] {
        let labels = d.surface.complement_labels(kind);
        let n = labels.iter().max().map_or(0, |m| m + 1);
        let mut hits = vec![0usize; n];
        for &r in &d.basepoint_regions {
            hits[labels[r]] += 1;
        }
        if hits.iter().any(|&h| h != 1) {
            clauses.push(clause.to_string());
        }
    }
    let distinct: BTreeSet<usize> = d.basepoint_regions.iter().copied().collect();
    if distinct.len() != d.basepoint_regions.len() {
        clauses.push(CLAUSE_PER_FACE.to_string());
    }
    ValidationReport { valid: clauses.is_empty(), clauses, warnings }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Offender {
    pub region: usize,
    pub corners: usize,
    pub boundary_components: usize,
    pub handles: usize,
    pub has_basepoint: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NicenessReport {
    pub is_nice: bool,
    pub offenders: Vec<Offender>,
}

/// Every unpointed elementary domain must be a bigon or a rectangle.
pub fn is_nice(d: &HeegaardDiagram) -> NicenessReport {
    let offenders: Vec<Offender> = d
        .surface
        .regions
        .iter()
        .filter(|r| !d.is_pointed(r.id))
        .filter(|r| !(r.is_disk() && (r.corners == 2 || r.corners == 4)))
        .map(|r| Offender {
            region: r.id,
            corners: r.corners,
            boundary_components: r.faces.len(),
            handles: r.handles,
            has_basepoint: false,
        })
        .collect();
    NicenessReport { is_nice: offenders.is_empty(), offenders }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveSides {
    pub kind: CurveKind,
    pub curve: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// For every curve, the pointed regions touching it on each side. Fails if
/// some curve has no pointed region on one of its sides.
pub fn basepoints_both_sides(d: &HeegaardDiagram) -> Result<Vec<CurveSides>> {
    use crate::surface::DartKind;
    let map = d.map();
    let mut out = Vec::new();
    for kind in [CurveKind::Alpha, CurveKind::Beta] {
        let slot = match kind {
            CurveKind::Alpha => DartKind::AlphaOut,
            CurveKind::Beta => DartKind::BetaOut,
        };
        for (i, curve) in map.curves(kind).iter().enumerate() {
            let mut left = BTreeSet::new();
            let mut right = BTreeSet::new();
            for &c in curve {
                let dart = CombinatorialMap::dart_id(c, slot);
                let l = d.surface.region_of_dart(dart);
                let r = d.surface.region_of_dart(map.opposite(dart));
                if d.is_pointed(l) {
                    left.insert(l);
                }
                if d.is_pointed(r) {
                    right.insert(r);
                }
            }
            for (side, set) in [("left", &left), ("right", &right)] {
                if set.is_empty() {
                    return Err(HfError::LemmaViolation {
                        curve: format!("{kind}{i}"),
                        side: side.to_string(),
                    });
                }
            }
            out.push(CurveSides {
                kind,
                curve: i,
                left: left.into_iter().collect(),
                right: right.into_iter().collect(),
            });
        }
    }
    Ok(out)
}

fn signs_of(pairs: impl IntoIterator<Item = (CrossingLabel, i8)>) -> BTreeMap<CrossingLabel, i8> {
    pairs.into_iter().collect()
}

/// Genus-0 diagram of S³: one α and one β meeting twice, two basepoints in
/// opposite bigons.
pub fn make_s3_sphere() -> HeegaardDiagram {
    HeegaardDiagram::new(
        "s3_sphere",
        vec![vec![1, 2]],
        vec![vec![1, 2]],
        signs_of([(1, 1), (2, -1)]),
        vec![Corner::new(1, Quadrant::A), Corner::new(1, Quadrant::C)],
    )
    .expect("fixture builds")
}

/// Standard toroidal diagram of S³ with one basepoint.
pub fn make_s3_torus() -> HeegaardDiagram {
    HeegaardDiagram::new(
        "s3_torus",
        vec![vec![0]],
        vec![vec![0]],
        signs_of([(0, 1)]),
        vec![Corner::new(0, Quadrant::A)],
    )
    .expect("fixture builds")
}

/// Genus-1 diagram of S¹×S²: the spherical picture with a tube joining the
/// two pointed bigons, leaving a single basepoint.
pub fn make_s1s2() -> HeegaardDiagram {
    HeegaardDiagram::from_file(DiagramFile {
        name: "s1s2".into(),
        alpha: vec![vec![1, 2]],
        beta: vec![vec![1, 2]],
        signs: signs_of([(1, 1), (2, -1)]),
        basepoints: vec![Corner::new(1, Quadrant::A)],
        tubes: vec![[Corner::new(1, Quadrant::A), Corner::new(1, Quadrant::C)]],
    })
    .expect("fixture builds")
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Genus-1 diagram of the lens space L(p, q).
pub fn make_lens(p: u32, q: u32) -> Result<HeegaardDiagram> {
    if p == 0 || gcd(p, q) != 1 || (p > 1 && (q == 0 || q >= p)) {
        return Err(HfError::NotCoprime { p, q });
    }
    let alpha: Vec<u32> = (0..p).collect();
    let beta: Vec<u32> = (0..p).map(|i| ((i as u64 * q as u64) % p as u64) as u32).collect();
    HeegaardDiagram::new(
        format!("L({p},{q})"),
        vec![alpha],
        vec![beta],
        signs_of((0..p).map(|c| (c, 1))),
        vec![Corner::new(0, Quadrant::A)],
    )
}

/// `n` parallel α-curves and `n` parallel β-curves on a torus, with
/// basepoints on the diagonal squares. A multi-pointed diagram of S³ whose
/// unpointed squares admit nice handle slides when `n ≥ 2`.
pub fn make_grid(n: u32) -> Result<HeegaardDiagram> {
    if n == 0 {
        return Err(HfError::MissingCrossing("grid size must be positive".into()));
    }
    let label = |i: u32, j: u32| i * n + j;
    let alpha = (0..n).map(|i| (0..n).map(|j| label(i, j)).collect()).collect();
    let beta = (0..n).map(|j| (0..n).map(|i| label(i, j)).collect()).collect();
    HeegaardDiagram::new(
        format!("grid{n}"),
        alpha,
        beta,
        signs_of((0..n * n).map(|c| (c, 1))),
        (0..n).map(|i| Corner::new(label(i, i), Quadrant::A)).collect(),
    )
}

fn relabel(c: Corner, offset: CrossingLabel) -> Corner {
    Corner::new(c.crossing + offset, c.quadrant)
}

/// Connected sum of two diagrams performed inside the pointed faces at the
/// given corners. The merged face keeps the basepoint of `d1`.
pub fn connected_sum(
    d1: &HeegaardDiagram,
    d2: &HeegaardDiagram,
    face1: Corner,
    face2: Corner,
) -> Result<HeegaardDiagram> {
    let r1 = d1
        .region_of_corner(face1)
        .ok_or_else(|| HfError::MissingCrossing(format!("corner {face1}")))?;
    let r2 = d2
        .region_of_corner(face2)
        .ok_or_else(|| HfError::MissingCrossing(format!("corner {face2}")))?;
    if !d1.is_pointed(r1) {
        return Err(HfError::UnpointedFace(face1.to_string()));
    }
    if !d2.is_pointed(r2) {
        return Err(HfError::UnpointedFace(face2.to_string()));
    }
    let offset = d1.max_label() + 1;
    let f1 = d1.file();
    let f2 = d2.file();
    let shift = |curves: &[Vec<u32>]| -> Vec<Vec<u32>> {
        curves.iter().map(|c| c.iter().map(|x| x + offset).collect()).collect()
    };
    let mut alpha = f1.alpha.clone();
    alpha.extend(shift(&f2.alpha));
    let mut beta = f1.beta.clone();
    beta.extend(shift(&f2.beta));
    let mut signs = f1.signs.clone();
    signs.extend(f2.signs.iter().map(|(&c, &s)| (c + offset, s)));
    let mut basepoints = f1.basepoints.clone();
    for (b, &r) in f2.basepoints.iter().zip(d2.basepoint_regions()) {
        if r != r2 {
            basepoints.push(relabel(*b, offset));
        }
    }
    let mut tubes = f1.tubes.clone();
    tubes.extend(f2.tubes.iter().map(|t| [relabel(t[0], offset), relabel(t[1], offset)]));
    tubes.push([face1, relabel(face2, offset)]);
    HeegaardDiagram::from_file(DiagramFile {
        name: format!("{}#{}", f1.name, f2.name),
        alpha,
        beta,
        signs,
        basepoints,
        tubes,
    })
}

/// Every built-in fixture: the three basic diagrams, L(p, q) for p ≤ 7,
/// two connected sums and the 2×2 and 3×3 grids.
pub fn corpus() -> Vec<HeegaardDiagram> {
    let sphere = make_s3_sphere();
    let torus = make_s3_torus();
    let s1s2 = make_s1s2();
    let mut out = vec![sphere.clone(), torus.clone(), s1s2.clone()];
    for p in 2..=7 {
        out.extend((1..p).filter_map(|q| make_lens(p, q).ok()));
    }
    let sum = |a: &HeegaardDiagram, b: &HeegaardDiagram| {
        connected_sum(a, b, a.basepoints()[0], b.basepoints()[0]).expect("basepoint faces are pointed")
    };
    out.push(sum(&torus, &s1s2));
    out.push(sum(&sphere, &torus));
    out.extend((2..=3).map(|n| make_grid(n).expect("positive size")));
    out
}

/// Canonical JSON text of a diagram.
pub fn serialize(d: &HeegaardDiagram) -> String {
    serde_json::to_string_pretty(&d.file).expect("diagram files always serialize")
}

pub fn parse(text: &str) -> Result<HeegaardDiagram> {
    let file: DiagramFile = serde_json::from_str(text).map_err(|e| HfError::SchemaError {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    HeegaardDiagram::from_file(file)
}
