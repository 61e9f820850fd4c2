//! Nice moves as rewrites of the curve data: finger-move isotopies, handle
//! slides, both stabilizations and their inverses, plus a seeded fuzzer that
//! checks the homology after every move.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{enumerate_generators, homology, stable_class, stable_equal, StableClass};
use crate::diagram::{connected_sum, make_s3_sphere, make_s3_torus, Corner, DiagramFile, HeegaardDiagram};
use crate::error::{HfError, Result};
use crate::surface::{CombinatorialMap, CrossingLabel, CurveKind, DartKind, Quadrant};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    #[default]
    Alpha,
    Beta,
}

/// A dart named by its crossing label and kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DartRef {
    pub crossing: CrossingLabel,
    pub kind: DartKind,
}

impl DartRef {
    fn swapped(self) -> DartRef {
        DartRef { crossing: self.crossing, kind: swap_kind(self.kind) }
    }
}

/// One move. For the α family an isotopy pushes a finger of the α-curve
/// through `start`'s left face across the β-edges in `path` (each given by
/// the dart whose left face the finger enters); a handle slide slides the
/// α-curve of `from` over the α-curve of `to` across their common left
/// face. The β family swaps the roles of the curves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case", deny_unknown_fields)]
pub enum MoveSpec {
    Isotopy {
        #[serde(default)]
        family: Family,
        start: DartRef,
        path: Vec<DartRef>,
    },
    HandleSlide {
        #[serde(default)]
        family: Family,
        from: DartRef,
        to: DartRef,
    },
    StabB {
        face: Corner,
    },
    StabG {
        face: Corner,
    },
    DestabB,
    DestabG,
}

impl MoveSpec {
    /// Factor by which the move multiplies dim H̃F, as (numerator, denominator).
    pub fn homology_factor(&self) -> (usize, usize) {
        match self {
            MoveSpec::StabB { .. } => (2, 1),
            MoveSpec::DestabB => (1, 2),
            _ => (1, 1),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MoveSpec::Isotopy { .. } => "isotopy",
            MoveSpec::HandleSlide { .. } => "handle_slide",
            MoveSpec::StabB { .. } => "stab_b",
            MoveSpec::StabG { .. } => "stab_g",
            MoveSpec::DestabB => "destab_b",
            MoveSpec::DestabG => "destab_g",
        }
    }
}

fn swap_kind(k: DartKind) -> DartKind {
    match k {
        DartKind::AlphaOut => DartKind::BetaOut,
        DartKind::BetaOut => DartKind::AlphaOut,
        DartKind::AlphaIn => DartKind::BetaIn,
        DartKind::BetaIn => DartKind::AlphaIn,
    }
}

fn failed(msg: impl Into<String>) -> HfError {
    HfError::PreconditionFailed(msg.into())
}

/// The same diagram with the α and β families exchanged. Signs flip and
/// every corner keeps its geometric position.
pub fn swap_families(d: &HeegaardDiagram) -> Result<HeegaardDiagram> {
    let f = d.file();
    let signs: BTreeMap<CrossingLabel, i8> = f.signs.iter().map(|(&c, &s)| (c, -s)).collect();
    let new_map = CombinatorialMap::from_curves(&f.beta, &f.alpha, &signs)?;
    let old_map = d.map();
    let remap = |c: Corner| -> Corner {
        let idx = old_map.index_of(c.crossing).expect("corner of this diagram");
        let dart = old_map.dart_for_quadrant(idx, c.quadrant);
        let kind = swap_kind(old_map.dart(dart).kind);
        let q = new_map.quadrant_of_dart(CombinatorialMap::dart_id(idx, kind));
        Corner::new(c.crossing, q)
    };
    HeegaardDiagram::from_file(DiagramFile {
        name: f.name.clone(),
        alpha: f.beta.clone(),
        beta: f.alpha.clone(),
        signs,
        basepoints: f.basepoints.iter().map(|&c| remap(c)).collect(),
        tubes: f.tubes.iter().map(|t| [remap(t[0]), remap(t[1])]).collect(),
    })
}

fn resolve(d: &HeegaardDiagram, r: DartRef) -> Result<usize> {
    let idx = d
        .map()
        .index_of(r.crossing)
        .ok_or_else(|| failed(format!("well formed: unknown crossing {}", r.crossing)))?;
    Ok(CombinatorialMap::dart_id(idx, r.kind))
}

fn find_curve(curves: &[Vec<CrossingLabel>], c: CrossingLabel) -> (usize, usize) {
    curves
        .iter()
        .enumerate()
        .find_map(|(i, cur)| cur.iter().position(|&x| x == c).map(|j| (i, j)))
        .expect("crossing lies on a curve")
}

fn insert_after(curves: &mut [Vec<CrossingLabel>], anchor: CrossingLabel, items: &[CrossingLabel]) {
    let (i, j) = find_curve(curves, anchor);
    curves[i].splice(j + 1..j + 1, items.iter().copied());
}

fn insert_before(curves: &mut [Vec<CrossingLabel>], anchor: CrossingLabel, items: &[CrossingLabel]) {
    let (i, j) = find_curve(curves, anchor);
    curves[i].splice(j..j, items.iter().copied());
}

/// Verdict of the nice-arc conditions for an isotopy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArcVerdict {
    pub ok: bool,
    pub clause: Option<String>,
}

pub const CLAUSE_WELL_FORMED: &str = "well formed";
pub const CLAUSE_DISJOINT: &str = "disjoint from alpha";
pub const CLAUSE_END_FACE: &str = "end face";
pub const CLAUSE_START_FACE: &str = "start face";
pub const CLAUSE_SAME_FACE: &str = "start face equals end face";
pub const CLAUSE_EMBEDDED: &str = "embedded arc";
pub const CLAUSE_SPLIT: &str = "split faces";

pub fn check_nice_arc(d: &HeegaardDiagram, spec: &MoveSpec) -> ArcVerdict {
    match spec {
        MoveSpec::Isotopy { .. } => match apply(d, spec) {
            Ok(_) => ArcVerdict { ok: true, clause: None },
            Err(HfError::PreconditionFailed(m)) => {
                let clause = [
                    CLAUSE_WELL_FORMED,
                    CLAUSE_DISJOINT,
                    CLAUSE_SAME_FACE,
                    CLAUSE_END_FACE,
                    CLAUSE_START_FACE,
                    CLAUSE_EMBEDDED,
                    CLAUSE_SPLIT,
                ]
                .into_iter()
                .find(|c| m.starts_with(c))
                .unwrap_or(CLAUSE_WELL_FORMED);
                ArcVerdict { ok: false, clause: Some(clause.to_string()) }
            }
            Err(e) => ArcVerdict { ok: false, clause: Some(format!("{CLAUSE_WELL_FORMED}: {e}")) },
        },
        _ => ArcVerdict { ok: false, clause: Some(format!("{CLAUSE_WELL_FORMED}: not an isotopy")) },
    }
}

fn is_bigon_face(d: &HeegaardDiagram, face: usize) -> bool {
    let s = d.surface();
    let r = &s.regions[s.region_of_face[face]];
    r.is_disk() && r.corners == 2
}

fn face_is_pointed(d: &HeegaardDiagram, face: usize) -> bool {
    d.is_pointed(d.surface().region_of_face[face])
}

/// Whether two chords with endpoints at boundary positions cross inside a disk.
fn chords_cross(a: (usize, usize), b: (usize, usize)) -> bool {
    let inside = |x: usize, (p, q): (usize, usize)| {
        let (lo, hi) = (p.min(q), p.max(q));
        lo < x && x < hi
    };
    inside(b.0, a) != inside(b.1, a)
}

fn isotopy_alpha(d: &HeegaardDiagram, start: DartRef, path: &[DartRef]) -> Result<HeegaardDiagram> {
    if start.kind.curve() != CurveKind::Alpha {
        return Err(failed(format!("{CLAUSE_WELL_FORMED}: start must be an α-dart")));
    }
    if path.is_empty() {
        return Err(failed(format!("{CLAUSE_WELL_FORMED}: empty path")));
    }
    if path.iter().any(|p| p.kind.curve() != CurveKind::Beta) {
        return Err(failed(format!("{CLAUSE_DISJOINT}: the arc crosses an α-edge")));
    }
    let s = d.surface();
    let map = d.map();
    let a0 = resolve(d, start)?;
    let darts: Vec<usize> = path.iter().map(|&p| resolve(d, p)).collect::<Result<_>>()?;
    let mut edges = BTreeSet::new();
    for &b in &darts {
        if !edges.insert(b.min(map.opposite(b))) {
            return Err(failed(format!("{CLAUSE_WELL_FORMED}: a β-edge is crossed twice")));
        }
    }
    let mut faces = vec![s.face_of_dart[a0]];
    for &b in &darts {
        if s.face_of_dart[map.opposite(b)] != *faces.last().expect("nonempty") {
            return Err(failed(format!("{CLAUSE_WELL_FORMED}: path is not continuous")));
        }
        faces.push(s.face_of_dart[b]);
    }
    let end = *faces.last().expect("nonempty");
    let behind = s.face_of_dart[map.opposite(a0)];
    if behind == end && !face_is_pointed(d, end) {
        return Err(failed(format!("{CLAUSE_SAME_FACE}: and it carries no basepoint")));
    }
    if !(is_bigon_face(d, end) || face_is_pointed(d, end)) {
        return Err(failed(format!("{CLAUSE_END_FACE}: neither a bigon nor pointed")));
    }
    if !(is_bigon_face(d, behind) || face_is_pointed(d, behind)) {
        return Err(failed(format!("{CLAUSE_START_FACE}: neither a bigon nor pointed")));
    }
    // chords of the arc inside each face must not cross
    let mut chords: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    let pos = |face: usize, dart: usize| {
        s.faces[face].darts.iter().position(|&x| x == dart).expect("dart bounds its face")
    };
    for i in 0..darts.len() {
        let face = faces[i];
        let entry = if i == 0 { a0 } else { darts[i - 1] };
        let exit = map.opposite(darts[i]);
        chords.entry(face).or_default().push((pos(face, entry), pos(face, exit)));
    }
    for list in chords.values() {
        for (i, a) in list.iter().enumerate() {
            if list[i + 1..].iter().any(|b| chords_cross(*a, *b)) {
                return Err(failed(format!("{CLAUSE_EMBEDDED}: the arc crosses itself")));
            }
        }
    }

    let mut f = d.file().clone();
    let base = d.max_label() + 1;
    let m = path.len() as u32;
    let out_leg = |i: u32| base + 2 * i;
    let back_leg = |i: u32| base + 2 * i + 1;
    let sigma = if start.kind == DartKind::AlphaOut { 1 } else { -1 };
    let along: Vec<u32> = (0..m).map(out_leg).chain((0..m).rev().map(back_leg)).collect();
    if start.kind == DartKind::AlphaOut {
        insert_after(&mut f.alpha, start.crossing, &along);
    } else {
        insert_before(&mut f.alpha, start.crossing, &along);
    }
    for (i, p) in path.iter().enumerate() {
        let i = i as u32;
        let s_i: i8 = if p.kind == DartKind::BetaOut { 1 } else { -1 };
        f.signs.insert(out_leg(i), -s_i);
        f.signs.insert(back_leg(i), s_i);
        let pair = if s_i as i32 * sigma == 1 {
            [out_leg(i), back_leg(i)]
        } else {
            [back_leg(i), out_leg(i)]
        };
        if p.kind == DartKind::BetaOut {
            insert_after(&mut f.beta, p.crossing, &pair);
        } else {
            insert_before(&mut f.beta, p.crossing, &pair);
        }
    }
    finish(d, f, CLAUSE_SPLIT)
}

/// Post-conditions shared by the curve rewrites.
fn finish(d: &HeegaardDiagram, f: DiagramFile, clause: &str) -> Result<HeegaardDiagram> {
    let out = HeegaardDiagram::from_file(f)?;
    if out.genus() != d.genus() {
        return Err(failed(format!("{clause}: rewrite changed the genus")));
    }
    let v = out.validate();
    if !v.valid {
        return Err(failed(format!("{clause}: result invalid ({})", v.clauses.join(", "))));
    }
    if !out.is_nice().is_nice {
        return Err(failed(format!("{clause}: result is not nice")));
    }
    Ok(out)
}

fn handle_slide_alpha(d: &HeegaardDiagram, from: DartRef, to: DartRef) -> Result<HeegaardDiagram> {
    if from.kind.curve() != CurveKind::Alpha || to.kind.curve() != CurveKind::Alpha {
        return Err(failed("handle slide needs two α-darts"));
    }
    let s = d.surface();
    let map = d.map();
    let r1 = resolve(d, from)?;
    let r2 = resolve(d, to)?;
    let face = s.face_of_dart[r1];
    if s.face_of_dart[r2] != face {
        return Err(failed("the slide arc spans two faces"));
    }
    let region = &s.regions[s.region_of_face[face]];
    if !(region.is_disk() && region.corners == 4) || d.is_pointed(region.id) {
        return Err(failed("the slide face is not an unpointed rectangle"));
    }
    let (c1, _) = map.position(CurveKind::Alpha, r1 / 4);
    let (c2, _) = map.position(CurveKind::Alpha, r2 / 4);
    if c1 == c2 {
        return Err(failed("both sides of the rectangle lie on one α-curve"));
    }
    if !face_is_pointed(d, s.face_of_dart[map.opposite(r1)]) {
        return Err(failed("the face behind the slide arc carries no basepoint"));
    }

    let rho: i8 = if to.kind == DartKind::AlphaOut { 1 } else { -1 };
    let rho1: i8 = if from.kind == DartKind::AlphaOut { 1 } else { -1 };
    let kappa = rho * rho1;
    let f0 = d.file();
    let (ci, j) = find_curve(&f0.alpha, to.crossing);
    let curve = &f0.alpha[ci];
    let len = curve.len();
    // copies run in the direction of `to`, from its head back round to its origin
    let copy_of: Vec<CrossingLabel> = (1..=len)
        .map(|t| {
            let k = if rho == 1 { (j + t) % len } else { (j + len * 2 - t) % len };
            curve[k]
        })
        .collect();
    let base = d.max_label() + 1;
    let label: BTreeMap<CrossingLabel, CrossingLabel> =
        copy_of.iter().enumerate().map(|(i, &e)| (e, base + i as u32)).collect();

    let mut f = f0.clone();
    let block: Vec<CrossingLabel> = copy_of.iter().map(|e| label[e]).collect();
    if rho1 == 1 {
        insert_after(&mut f.alpha, from.crossing, &block);
    } else {
        let rev: Vec<CrossingLabel> = block.iter().rev().copied().collect();
        insert_before(&mut f.alpha, from.crossing, &rev);
    }
    for &e in &copy_of {
        let se = f0.signs[&e];
        f.signs.insert(label[&e], se * kappa);
        if se * rho == 1 {
            insert_after(&mut f.beta, e, &[label[&e]]);
        } else {
            insert_before(&mut f.beta, e, &[label[&e]]);
        }
    }
    let copy_side = |q: Quadrant| q.left_of_alpha() == (rho == 1);
    let moved = |c: Corner| -> Corner {
        match label.get(&c.crossing) {
            Some(&fe) if copy_side(c.quadrant) => {
                let q = if kappa == 1 { c.quadrant } else { c.quadrant.alpha_reversed() };
                Corner::new(fe, q)
            }
            _ => c,
        }
    };
    f.basepoints = f.basepoints.iter().map(|&c| moved(c)).collect();
    f.tubes = f.tubes.iter().map(|t| [moved(t[0]), moved(t[1])]).collect();
    finish(d, f, "handle slide")
}

fn in_beta_family(
    d: &HeegaardDiagram,
    op: impl FnOnce(&HeegaardDiagram) -> Result<HeegaardDiagram>,
) -> Result<HeegaardDiagram> {
    let swapped = swap_families(d)?;
    swap_families(&op(&swapped)?)
}

pub fn apply_isotopy(d: &HeegaardDiagram, family: Family, start: DartRef, path: &[DartRef]) -> Result<HeegaardDiagram> {
    match family {
        Family::Alpha => isotopy_alpha(d, start, path),
        Family::Beta => {
            let path: Vec<DartRef> = path.iter().map(|p| p.swapped()).collect();
            in_beta_family(d, |s| isotopy_alpha(s, start.swapped(), &path))
        }
    }
}

pub fn apply_handle_slide(d: &HeegaardDiagram, family: Family, from: DartRef, to: DartRef) -> Result<HeegaardDiagram> {
    match family {
        Family::Alpha => handle_slide_alpha(d, from, to),
        Family::Beta => in_beta_family(d, |s| handle_slide_alpha(s, from.swapped(), to.swapped())),
    }
}

/// Adds a spherical pair of curves inside a pointed face, with a new basepoint.
pub fn apply_stab_b(d: &HeegaardDiagram, face: Corner) -> Result<HeegaardDiagram> {
    let s = make_s3_sphere();
    Ok(connected_sum(d, &s, face, Corner::new(1, Quadrant::A))?.with_name(d.name()))
}

/// Adds a handle carrying a toric pair of curves inside a pointed face.
pub fn apply_stab_g(d: &HeegaardDiagram, face: Corner) -> Result<HeegaardDiagram> {
    let t = make_s3_torus();
    Ok(connected_sum(d, &t, face, Corner::new(0, Quadrant::A))?.with_name(d.name()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabKind {
    B,
    G,
}

/// Components of the curve graph that are exactly a stabilization of the
/// given kind hung off the rest of the diagram by a single tube. Returned as
/// the index of that tube, latest crossing labels first.
pub fn destabilizations(d: &HeegaardDiagram, kind: StabKind) -> Vec<usize> {
    let map = d.map();
    let comps = map.crossing_components();
    let ncomp = comps.iter().max().map_or(0, |m| m + 1);
    let comp_of = |c: CrossingLabel| comps[map.index_of(c).expect("known crossing")];
    let f = d.file();
    let mut found = Vec::new();
    for comp in 0..ncomp {
        let members: Vec<usize> = (0..map.crossing_count()).filter(|&i| comps[i] == comp).collect();
        let alphas: Vec<&Vec<usize>> =
            map.curves(CurveKind::Alpha).iter().filter(|c| comps[c[0]] == comp).collect();
        let betas: Vec<&Vec<usize>> =
            map.curves(CurveKind::Beta).iter().filter(|c| comps[c[0]] == comp).collect();
        if alphas.len() != 1 || betas.len() != 1 {
            continue;
        }
        let touching: Vec<usize> = (0..f.tubes.len())
            .filter(|&t| f.tubes[t].iter().any(|c| comp_of(c.crossing) == comp))
            .collect();
        if touching.len() != 1 {
            continue;
        }
        let t = touching[0];
        let feet: Vec<&Corner> = f.tubes[t].iter().filter(|c| comp_of(c.crossing) == comp).collect();
        if feet.len() != 1 {
            continue;
        }
        let foot = *feet[0];
        let points: Vec<&Corner> =
            f.basepoints.iter().filter(|c| comp_of(c.crossing) == comp).collect();
        let ok = match kind {
            StabKind::G => members.len() == 1 && points.is_empty(),
            StabKind::B => {
                members.len() == 2
                    && alphas[0].len() == 2
                    && map.sign(members[0]) != map.sign(members[1])
                    && points.len() == 1
                    && {
                        let c = map.index_of(foot.crossing).expect("known");
                        let regions = d.surface().quadrant_regions(c);
                        let foot_r = d.surface().region_of_corner(c, foot.quadrant);
                        let w_r = d.region_of_corner(*points[0]).expect("known");
                        let qi = Quadrant::ALL.iter().position(|&q| regions[q.index()] == foot_r);
                        let wi = Quadrant::ALL.iter().position(|&q| regions[q.index()] == w_r);
                        matches!((qi, wi), (Some(a), Some(b)) if (a + 2) % 4 == b)
                    }
            }
        };
        if ok {
            found.push((members.iter().map(|&i| map.label(i)).max().unwrap_or(0), t));
        }
    }
    found.sort_by(|a, b| b.cmp(a));
    found.into_iter().map(|(_, t)| t).collect()
}

/// Removes the most recently added stabilization of the given kind.
pub fn destabilize(d: &HeegaardDiagram, kind: StabKind) -> Result<HeegaardDiagram> {
    let t = *destabilizations(d, kind)
        .first()
        .ok_or_else(|| failed("no stabilization pattern to remove"))?;
    let f = d.file();
    let map = d.map();
    let comps = map.crossing_components();
    let comp_of = |c: CrossingLabel| comps[map.index_of(c).expect("known crossing")];
    let tube = f.tubes[t];
    let inside = |c: CrossingLabel| {
        let side: Vec<usize> = tube.iter().map(|x| comp_of(x.crossing)).collect();
        // the component on the stabilization side is the one matched above
        let comp = if destab_side(d, kind, &tube) { side[1] } else { side[0] };
        comp_of(c) == comp
    };
    let keep = |c: &CrossingLabel| !inside(*c);
    let out = DiagramFile {
        name: f.name.clone(),
        alpha: f.alpha.iter().filter(|c| keep(&c[0])).cloned().collect(),
        beta: f.beta.iter().filter(|c| keep(&c[0])).cloned().collect(),
        signs: f.signs.iter().filter(|(c, _)| keep(c)).map(|(&c, &s)| (c, s)).collect(),
        basepoints: f.basepoints.iter().filter(|c| keep(&c.crossing)).copied().collect(),
        tubes: f.tubes.iter().enumerate().filter(|&(i, _)| i != t).map(|(_, x)| *x).collect(),
    };
    HeegaardDiagram::from_file(out)
}

fn destab_side(d: &HeegaardDiagram, kind: StabKind, tube: &[Corner; 2]) -> bool {
    // true when the stabilization sits at the second foot
    let map = d.map();
    let comps = map.crossing_components();
    let size = |c: &Corner| {
        let comp = comps[map.index_of(c.crossing).expect("known")];
        comps.iter().filter(|&&x| x == comp).count()
    };
    let want = match kind {
        StabKind::G => 1,
        StabKind::B => 2,
    };
    let small = |c: &Corner| {
        let comp = comps[map.index_of(c.crossing).expect("known")];
        let alphas = map.curves(CurveKind::Alpha).iter().filter(|cv| comps[cv[0]] == comp).count();
        size(c) == want && alphas == 1
    };
    small(&tube[1]) && (!small(&tube[0]) || tube[1].crossing > tube[0].crossing)
}

pub fn apply(d: &HeegaardDiagram, spec: &MoveSpec) -> Result<HeegaardDiagram> {
    match spec {
        MoveSpec::Isotopy { family, start, path } => apply_isotopy(d, *family, *start, path),
        MoveSpec::HandleSlide { family, from, to } => apply_handle_slide(d, *family, *from, *to),
        MoveSpec::StabB { face } => apply_stab_b(d, *face),
        MoveSpec::StabG { face } => apply_stab_g(d, *face),
        MoveSpec::DestabB => destabilize(d, StabKind::B),
        MoveSpec::DestabG => destabilize(d, StabKind::G),
    }
}

pub fn apply_script(d: &HeegaardDiagram, script: &[MoveSpec]) -> Result<HeegaardDiagram> {
    let mut cur = d.clone();
    for m in script {
        cur = apply(&cur, m)?;
    }
    Ok(cur)
}

fn dart_ref(map: &CombinatorialMap, dart: usize) -> DartRef {
    let dt = map.dart(dart);
    DartRef { crossing: map.label(dt.crossing), kind: dt.kind }
}

/// A random finger-move proposal for the α family: a start dart and a walk of
/// one to three β-edges through adjacent faces.
fn random_isotopy(d: &HeegaardDiagram, rng: &mut ChaCha8Rng) -> Option<MoveSpec> {
    let s = d.surface();
    let map = d.map();
    let alpha_darts: Vec<usize> =
        (0..map.dart_count()).filter(|&h| map.dart(h).kind.curve() == CurveKind::Alpha).collect();
    let start = *alpha_darts.choose(rng)?;
    let len = rng.gen_range(1..=3);
    let mut face = s.face_of_dart[start];
    let mut used = BTreeSet::new();
    let mut path = Vec::new();
    for _ in 0..len {
        let exits: Vec<usize> = s.faces[face]
            .darts
            .iter()
            .copied()
            .filter(|&h| map.dart(h).kind.curve() == CurveKind::Beta)
            .filter(|&h| !used.contains(&h.min(map.opposite(h))))
            .collect();
        let h = *exits.choose(rng)?;
        used.insert(h.min(map.opposite(h)));
        let b = map.opposite(h);
        path.push(dart_ref(map, b));
        face = s.face_of_dart[b];
    }
    Some(MoveSpec::Isotopy { family: Family::Alpha, start: dart_ref(map, start), path })
}

/// Every valid handle slide of the α family.
pub fn handle_slide_candidates(d: &HeegaardDiagram) -> Vec<MoveSpec> {
    let s = d.surface();
    let map = d.map();
    let mut out = Vec::new();
    for face in &s.faces {
        let region = &s.regions[s.region_of_face[face.id]];
        if !(region.is_disk() && region.corners == 4) || d.is_pointed(region.id) {
            continue;
        }
        let alphas: Vec<usize> = face
            .darts
            .iter()
            .copied()
            .filter(|&h| map.dart(h).kind.curve() == CurveKind::Alpha)
            .collect();
        for &r1 in &alphas {
            for &r2 in &alphas {
                if r1 == r2 {
                    continue;
                }
                let spec = MoveSpec::HandleSlide {
                    family: Family::Alpha,
                    from: dart_ref(map, r1),
                    to: dart_ref(map, r2),
                };
                if apply(d, &spec).is_ok() {
                    out.push(spec);
                }
            }
        }
    }
    out
}

fn swap_spec(spec: MoveSpec) -> MoveSpec {
    match spec {
        MoveSpec::Isotopy { start, path, .. } => MoveSpec::Isotopy {
            family: Family::Beta,
            start: start.swapped(),
            path: path.into_iter().map(DartRef::swapped).collect(),
        },
        MoveSpec::HandleSlide { from, to, .. } => {
            MoveSpec::HandleSlide { family: Family::Beta, from: from.swapped(), to: to.swapped() }
        }
        other => other,
    }
}

/// Size limits that keep fuzzed diagrams at desk scale.
#[derive(Clone, Copy, Debug)]
pub struct FuzzLimits {
    pub max_crossings: usize,
    pub max_generators: usize,
}

impl Default for FuzzLimits {
    fn default() -> Self {
        FuzzLimits { max_crossings: 28, max_generators: 400 }
    }
}

/// Proposes and applies one random applicable move.
pub fn random_move(
    d: &HeegaardDiagram,
    rng: &mut ChaCha8Rng,
    limits: FuzzLimits,
) -> Option<(MoveSpec, HeegaardDiagram)> {
    let mut kinds = vec!["isotopy", "isotopy", "slide", "stab_b", "stab_g", "destab_b", "destab_g"];
    kinds.shuffle(rng);
    let fits = |e: &HeegaardDiagram| {
        e.map().crossing_count() <= limits.max_crossings
            && enumerate_generators(e).len() <= limits.max_generators
    };
    for kind in kinds {
        let beta = rng.gen_bool(0.5);
        let base = if beta { swap_families(d).ok()? } else { d.clone() };
        let proposal: Option<MoveSpec> = match kind {
            "isotopy" => (0..40).find_map(|_| {
                let spec = random_isotopy(&base, rng)?;
                apply(&base, &spec).is_ok().then_some(spec)
            }),
            "slide" => handle_slide_candidates(&base).choose(rng).cloned(),
            "stab_b" => d.basepoints().choose(rng).map(|&face| MoveSpec::StabB { face }),
            "stab_g" => d.basepoints().choose(rng).map(|&face| MoveSpec::StabG { face }),
            "destab_b" => (!destabilizations(d, StabKind::B).is_empty()).then_some(MoveSpec::DestabB),
            _ => (!destabilizations(d, StabKind::G).is_empty()).then_some(MoveSpec::DestabG),
        };
        let Some(spec) = proposal else { continue };
        let spec = if beta { swap_spec(spec) } else { spec };
        let Ok(next) = apply(d, &spec) else { continue };
        if fits(&next) {
            return Some((spec, next));
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzStep {
    pub step: usize,
    pub spec: MoveSpec,
    pub crossings: usize,
    pub generators: usize,
    pub b: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub initial: StableClass,
    pub steps: Vec<FuzzStep>,
    pub final_class: StableClass,
    pub final_diagram: String,
}

/// Applies `n_moves` random nice moves, checking after each that the
/// homology changes exactly as the move predicts and that the stable class
/// never changes.
pub fn fuzz_invariance(d: &HeegaardDiagram, n_moves: usize, seed: u64) -> Result<FuzzReport> {
    fuzz_with_limits(d, n_moves, seed, FuzzLimits::default())
}

pub fn fuzz_with_limits(
    d: &HeegaardDiagram,
    n_moves: usize,
    seed: u64,
    limits: FuzzLimits,
) -> Result<FuzzReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h0 = homology(d)?;
    let initial = stable_class(d, &h0);
    let mut cur = d.clone();
    let mut dim = h0.total;
    let mut steps = Vec::new();
    for step in 1..=n_moves {
        let Some((spec, next)) = random_move(&cur, &mut rng, limits) else { break };
        let h = homology(&next).map_err(|e| HfError::InvarianceViolation {
            step,
            message: format!("{} failed: {e}", spec.name()),
        })?;
        let (num, den) = spec.homology_factor();
        if h.total * den != dim * num {
            return Err(HfError::InvarianceViolation {
                step,
                message: format!(
                    "{} changed dim from {dim} to {} (expected factor {num}/{den}); move {}",
                    spec.name(),
                    h.total,
                    serde_json::to_string(&spec).unwrap_or_default()
                ),
            });
        }
        let class = stable_class(&next, &h);
        if !stable_equal(class, initial) {
            return Err(HfError::InvarianceViolation {
                step,
                message: format!("stable class {class:?} differs from {initial:?}"),
            });
        }
        dim = h.total;
        steps.push(FuzzStep {
            step,
            spec,
            crossings: next.map().crossing_count(),
            generators: enumerate_generators(&next).len(),
            b: next.b(),
            dim,
        });
        cur = next;
    }
    let final_class = stable_class(&cur, &homology(&cur)?);
    Ok(FuzzReport {
        seed,
        initial,
        steps,
        final_class,
        final_diagram: crate::diagram::serialize(&cur),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::differential;
    use crate::diagram::{make_grid, make_lens, make_s1s2};

    fn dr(crossing: u32, kind: DartKind) -> DartRef {
        DartRef { crossing, kind }
    }

    #[test]
    fn toric_finger_move() {
        let t = make_s3_torus();
        let spec = MoveSpec::Isotopy {
            family: Family::Alpha,
            start: dr(0, DartKind::AlphaOut),
            path: vec![dr(0, DartKind::BetaOut)],
        };
        assert!(check_nice_arc(&t, &spec).ok);
        let out = apply(&t, &spec).unwrap();
        assert_eq!(out.map().crossing_count(), 3);
        assert_eq!(enumerate_generators(&out).len(), 3);
        let diff = differential(&out).unwrap();
        assert_eq!(diff.matrix.rank(), 1);
        assert_eq!(homology(&out).unwrap().total, 1);
        assert_eq!(out.basepoints(), t.basepoints());
    }

    #[test]
    fn every_toric_finger_direction_is_nice() {
        let t = make_s3_torus();
        // one of the four arcs cuts the square so that the unpointed piece
        // is a hexagon; the other three are nice
        for family in [Family::Alpha, Family::Beta] {
            let mut ok = 0;
            for a in [DartKind::AlphaOut, DartKind::AlphaIn] {
                for b in [DartKind::BetaOut, DartKind::BetaIn] {
                    let (a, b) = if family == Family::Beta { (swap_kind(a), swap_kind(b)) } else { (a, b) };
                    let spec = MoveSpec::Isotopy { family, start: dr(0, a), path: vec![dr(0, b)] };
                    match apply(&t, &spec) {
                        Ok(out) => {
                            assert_eq!(homology(&out).unwrap().total, 1, "{a:?} {b:?}");
                            ok += 1;
                        }
                        Err(_) => {
                            let v = check_nice_arc(&t, &spec);
                            assert_eq!(v.clause.as_deref(), Some(CLAUSE_SPLIT));
                        }
                    }
                }
            }
            assert_eq!(ok, 3);
        }
    }

    #[test]
    fn spherical_finger_into_opposite_bigon() {
        let s = make_s3_sphere();
        // find a one-edge path from a pointed face to the other pointed face
        let map = s.map();
        let surf = s.surface();
        let mut done = false;
        for start in (0..map.dart_count()).filter(|&h| map.dart(h).kind.curve() == CurveKind::Alpha) {
            for b in (0..map.dart_count()).filter(|&h| map.dart(h).kind.curve() == CurveKind::Beta) {
                if surf.face_of_dart[map.opposite(b)] != surf.face_of_dart[start] {
                    continue;
                }
                let spec = MoveSpec::Isotopy {
                    family: Family::Alpha,
                    start: dart_ref(map, start),
                    path: vec![dart_ref(map, b)],
                };
                if let Ok(out) = apply(&s, &spec) {
                    assert_eq!(out.map().crossing_count(), 4);
                    assert_eq!(homology(&out).unwrap().total, 2);
                    done = true;
                }
            }
        }
        assert!(done);
    }

    #[test]
    fn invalid_arcs() {
        let l = make_lens(3, 1).unwrap();
        // a square face of L(3,1) is unpointed and not a bigon
        let map = l.map();
        let w = l.basepoint_regions()[0];
        let surf = l.surface();
        let start = (0..map.dart_count())
            .find(|&h| map.dart(h).kind.curve() == CurveKind::Alpha && surf.region_of_dart(h) == w)
            .unwrap();
        let b = (0..map.dart_count())
            .find(|&h| {
                map.dart(h).kind.curve() == CurveKind::Beta
                    && surf.region_of_dart(map.opposite(h)) == w
                    && surf.region_of_dart(h) != w
                    && surf.region_of_dart(h) != surf.region_of_dart(map.opposite(start))
            })
            .unwrap();
        let spec = MoveSpec::Isotopy {
            family: Family::Alpha,
            start: dart_ref(map, start),
            path: vec![dart_ref(map, b)],
        };
        assert_eq!(check_nice_arc(&l, &spec).clause.as_deref(), Some(CLAUSE_END_FACE));
        let across_alpha = MoveSpec::Isotopy {
            family: Family::Alpha,
            start: dart_ref(map, start),
            path: vec![dr(0, DartKind::AlphaIn)],
        };
        assert_eq!(check_nice_arc(&l, &across_alpha).clause.as_deref(), Some(CLAUSE_DISJOINT));
        assert!(matches!(apply(&l, &spec), Err(HfError::PreconditionFailed(_))));
    }

    #[test]
    fn grid_handle_slides_preserve_homology() {
        let g = make_grid(2).unwrap();
        let cands = handle_slide_candidates(&g);
        assert!(!cands.is_empty());
        let dim = homology(&g).unwrap().total;
        for spec in &cands {
            let out = apply(&g, spec).unwrap();
            assert_eq!(homology(&out).unwrap().total, dim, "{spec:?}");
            assert_eq!(out.b(), g.b());
        }
        let swapped = swap_families(&g).unwrap();
        for spec in handle_slide_candidates(&swapped) {
            let spec = swap_spec(spec);
            let out = apply(&g, &spec).unwrap();
            assert_eq!(homology(&out).unwrap().total, dim);
        }
    }

    #[test]
    fn handle_slide_preconditions() {
        let g = make_grid(2).unwrap();
        let map = g.map();
        // a pointed square is rejected
        let w = g.basepoint_regions()[0];
        let surf = g.surface();
        let r: Vec<usize> = surf.faces[surf.regions[w].faces[0]]
            .darts
            .iter()
            .copied()
            .filter(|&h| map.dart(h).kind.curve() == CurveKind::Alpha)
            .collect();
        let spec = MoveSpec::HandleSlide {
            family: Family::Alpha,
            from: dart_ref(map, r[0]),
            to: dart_ref(map, r[1]),
        };
        assert!(matches!(apply(&g, &spec), Err(HfError::PreconditionFailed(_))));
    }

    #[test]
    fn stabilizations() {
        let t = make_s3_torus();
        let face = t.basepoints()[0];
        let b = apply_stab_b(&t, face).unwrap();
        assert_eq!((b.k(), b.b(), b.genus()), (2, 2, 1));
        assert_eq!(enumerate_generators(&b).len(), 2);
        assert_eq!(homology(&b).unwrap().total, 2);
        let g = apply_stab_g(&t, face).unwrap();
        assert_eq!((g.k(), g.b(), g.genus()), (2, 1, 2));
        assert_eq!(enumerate_generators(&g).len(), 1);
        let l = make_lens(3, 1).unwrap();
        let bad = Corner::new(1, Quadrant::A);
        if !l.is_pointed(l.region_of_corner(bad).unwrap()) {
            assert!(matches!(apply_stab_b(&l, bad), Err(HfError::UnpointedFace(_))));
        }
        assert_eq!(destabilize(&b, StabKind::B).unwrap(), t);
        assert_eq!(destabilize(&g, StabKind::G).unwrap(), t);
        assert!(destabilize(&t, StabKind::G).is_err());
        assert!(destabilizations(&make_s1s2(), StabKind::B).is_empty());
    }

    #[test]
    fn stab_g_preserves_the_matrix() {
        let s = make_s3_sphere();
        let g = apply_stab_g(&s, s.basepoints()[0]).unwrap();
        let a = differential(&s).unwrap();
        let b = differential(&g).unwrap();
        assert_eq!(a.matrix, b.matrix);
    }

    #[test]
    fn swap_is_an_involution() {
        for d in [make_s3_sphere(), make_s1s2(), make_lens(5, 2).unwrap(), make_grid(2).unwrap()] {
            let twice = swap_families(&swap_families(&d).unwrap()).unwrap();
            assert_eq!(twice, d);
            let once = swap_families(&d).unwrap();
            assert!(once.validate().valid);
            assert_eq!(homology(&once).unwrap().total, homology(&d).unwrap().total);
        }
    }

    #[test]
    fn move_script_json() {
        let text = r#"[{"move":"isotopy","start":{"crossing":0,"kind":"alpha_out"},
            "path":[{"crossing":0,"kind":"beta_out"}]},
            {"move":"stab_b","face":{"crossing":0,"quadrant":"A"}},
            {"move":"destab_b"}]"#;
        let script: Vec<MoveSpec> = serde_json::from_str(text).unwrap();
        let out = apply_script(&make_s3_torus(), &script).unwrap();
        assert_eq!(out.map().crossing_count(), 3);
        let bad = r#"[{"move":"stab_b","face":{"crossing":0,"quadrant":"A"},"x":1}]"#;
        assert!(serde_json::from_str::<Vec<MoveSpec>>(bad).is_err());
    }

    #[test]
    fn fuzz_is_deterministic_and_invariant() {
        let t = make_s3_torus();
        let a = fuzz_invariance(&t, 5, 7).unwrap();
        let b = fuzz_invariance(&t, 5, 7).unwrap();
        assert_eq!(a, b);
        assert!(stable_equal(a.final_class, StableClass { dim: 1, b: 1 }));
        let l = make_lens(3, 1).unwrap();
        let r = fuzz_invariance(&l, 5, 11).unwrap();
        assert!(stable_equal(r.final_class, StableClass { dim: 3, b: 1 }));
    }
}
