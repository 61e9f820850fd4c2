//! The chain complex: generators, empty polygons, the differential, GF(2)
//! homology, relative gradings and the stable class.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::diagram::HeegaardDiagram;
use crate::domains::{clear_basepoints, maslov, pi2prime_and_h2_from, Domain, DomainSolver};
use crate::error::{HfError, Result};
use crate::gf2::Gf2Matrix;
use crate::lattice::gcd;
use crate::par;
use crate::surface::{CombinatorialMap, CurveKind};

/// A generator: one crossing on every α-curve, using every β-curve once.
/// `crossings()[i]` is the crossing index chosen on `α_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    crossings: Vec<usize>,
}

impl Generator {
    pub fn new(crossings: Vec<usize>) -> Generator {
        Generator { crossings }
    }

    pub fn crossings(&self) -> &[usize] {
        &self.crossings
    }

    pub fn contains(&self, crossing: usize) -> bool {
        self.crossings.contains(&crossing)
    }

    pub fn labels(&self, map: &CombinatorialMap) -> Vec<u32> {
        self.crossings.iter().map(|&c| map.label(c)).collect()
    }

    /// Crossing labels in α order, e.g. `{3,7}`.
    pub fn display(&self, map: &CombinatorialMap) -> String {
        let parts: Vec<String> = self.labels(map).iter().map(u32::to_string).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.crossings.serialize(s)
    }
}

/// All generators in lexicographic order of their crossing tuples.
pub fn enumerate_generators(d: &HeegaardDiagram) -> Vec<Generator> {
    let map = d.map();
    let alpha = map.curves(CurveKind::Alpha);
    let k = alpha.len();
    if k != map.curves(CurveKind::Beta).len() {
        return Vec::new();
    }
    let sorted: Vec<Vec<usize>> = alpha
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect();
    let mut out = Vec::new();
    let mut used = vec![false; k];
    let mut current = Vec::with_capacity(k);
    fn walk(
        i: usize,
        sorted: &[Vec<usize>],
        map: &CombinatorialMap,
        used: &mut [bool],
        current: &mut Vec<usize>,
        out: &mut Vec<Generator>,
    ) {
        if i == sorted.len() {
            out.push(Generator::new(current.clone()));
            return;
        }
        for &c in &sorted[i] {
            let (b, _) = map.position(CurveKind::Beta, c);
            if used[b] {
                continue;
            }
            used[b] = true;
            current.push(c);
            walk(i + 1, sorted, map, used, current, out);
            current.pop();
            used[b] = false;
        }
    }
    walk(0, &sorted, map, &mut used, &mut current, &mut out);
    out
}

/// Precomputed incidence data for the empty-polygon search on one diagram.
pub struct PolygonSearch<'a> {
    d: &'a HeegaardDiagram,
    pointed: Vec<bool>,
    /// per crossing: nonzero `(region, coefficient)` terms of its corner equation
    terms: Vec<Vec<(usize, i64)>>,
    /// per region: `(crossing, coefficient)` for every equation it enters
    eqs_of_region: Vec<Vec<(usize, i64)>>,
    euler: Vec<i64>,
    adjacency: Vec<Vec<usize>>,
    /// `meets[i][j]`: crossings on `α_i ∩ β_j`, ascending
    meets: Vec<Vec<Vec<usize>>>,
}

impl<'a> PolygonSearch<'a> {
    pub fn new(d: &'a HeegaardDiagram) -> PolygonSearch<'a> {
        let s = d.surface();
        let map = &s.map;
        let n = s.regions.len();
        let mut pointed = vec![false; n];
        for &r in d.basepoint_regions() {
            pointed[r] = true;
        }
        let mut terms = Vec::with_capacity(map.crossing_count());
        let mut eqs_of_region = vec![Vec::new(); n];
        for p in 0..map.crossing_count() {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (i, r) in s.quadrant_regions(p).into_iter().enumerate() {
                *acc.entry(r).or_default() += if i % 2 == 0 { 1 } else { -1 };
            }
            let row: Vec<(usize, i64)> =
                acc.into_iter().filter(|&(r, c)| c != 0 && !pointed[r]).collect();
            for &(r, c) in &row {
                eqs_of_region[r].push((p, c));
            }
            terms.push(row);
        }
        let mut adjacency = vec![Vec::new(); n];
        for dart in 0..map.dart_count() {
            let (a, b) = (s.region_of_dart(dart), s.region_of_dart(map.opposite(dart)));
            if a != b && !adjacency[a].contains(&b) {
                adjacency[a].push(b);
            }
        }
        for adj in adjacency.iter_mut() {
            adj.sort_unstable();
        }
        let k = map.curves(CurveKind::Alpha).len();
        let kb = map.curves(CurveKind::Beta).len();
        let mut meets = vec![vec![Vec::new(); kb]; k];
        for c in 0..map.crossing_count() {
            let (i, _) = map.position(CurveKind::Alpha, c);
            let (j, _) = map.position(CurveKind::Beta, c);
            meets[i][j].push(c);
        }
        let euler = s.regions.iter().map(|r| r.euler_quarters()).collect();
        PolygonSearch { d, pointed, terms, eqs_of_region, euler, adjacency, meets }
    }

    /// Generators differing from `x` in one coordinate on the same curve pair
    /// or in two coordinates swapped across two α- and two β-curves.
    pub fn candidates(&self, x: &Generator) -> Vec<Generator> {
        let map = self.d.map();
        let beta_of = |c: usize| map.position(CurveKind::Beta, c).0;
        let xs = x.crossings();
        let mut out = Vec::new();
        for i in 0..xs.len() {
            for &c in &self.meets[i][beta_of(xs[i])] {
                if c != xs[i] {
                    let mut y = xs.to_vec();
                    y[i] = c;
                    out.push(Generator::new(y));
                }
            }
            for k in i + 1..xs.len() {
                let (j, l) = (beta_of(xs[i]), beta_of(xs[k]));
                for &ci in &self.meets[i][l] {
                    for &ck in &self.meets[k][j] {
                        let mut y = xs.to_vec();
                        y[i] = ci;
                        y[k] = ck;
                        out.push(Generator::new(y));
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Every domain `D ∈ π₂(x, y)` with multiplicities in {0, 1}, zero at the
    /// basepoints, and `μ(D) = 1`.
    pub fn search(&self, x: &Generator, y: &Generator) -> Vec<Domain> {
        let s = self.d.surface();
        let n = s.regions.len();
        let m = self.terms.len();
        let mut rhs = vec![0i64; m];
        for &p in y.crossings() {
            rhs[p] += 1;
        }
        for &p in x.crossings() {
            rhs[p] -= 1;
        }
        // μ is linear with nonnegative weight on every unpointed region of a
        // nice diagram, so the running total bounds every extension.
        let mut cost = self.euler.clone();
        for &p in x.crossings().iter().chain(y.crossings()) {
            for r in s.quadrant_regions(p) {
                cost[r] += 1;
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut seen = self.pointed.clone();
        let mut queue = VecDeque::new();
        for p in (0..m).filter(|&p| rhs[p] != 0) {
            for &(r, _) in &self.terms[p] {
                if !seen[r] {
                    seen[r] = true;
                    queue.push_back(r);
                }
            }
        }
        loop {
            while let Some(r) = queue.pop_front() {
                order.push(r);
                for &nb in &self.adjacency[r] {
                    if !seen[nb] {
                        seen[nb] = true;
                        queue.push_back(nb);
                    }
                }
            }
            match (0..n).find(|&r| !seen[r]) {
                Some(r) => {
                    seen[r] = true;
                    queue.push_back(r);
                }
                None => break,
            }
        }
        let mut st = SearchState::new(self, &rhs, &cost);
        for r in 0..n {
            if self.pointed[r] {
                st.val[r] = 0;
            }
        }
        let mut found = Vec::new();
        if st.check_all() {
            st.dfs(&order, 0, &mut found);
        }
        found.sort();
        found
    }
}

struct SearchState<'s, 'a> {
    ps: &'s PolygonSearch<'a>,
    rhs: &'s [i64],
    cost: &'s [i64],
    val: Vec<i8>,
    cur: Vec<i64>,
    pos: Vec<i64>,
    neg: Vec<i64>,
    total: i64,
    trail: Vec<usize>,
}

const BUDGET: i64 = 4;

impl<'s, 'a> SearchState<'s, 'a> {
    fn new(ps: &'s PolygonSearch<'a>, rhs: &'s [i64], cost: &'s [i64]) -> Self {
        let m = ps.terms.len();
        let mut pos = vec![0; m];
        let mut neg = vec![0; m];
        for (p, row) in ps.terms.iter().enumerate() {
            for &(_, c) in row {
                if c > 0 {
                    pos[p] += c;
                } else {
                    neg[p] += c;
                }
            }
        }
        SearchState {
            ps,
            rhs,
            cost,
            val: vec![-1; cost.len()],
            cur: vec![0; m],
            pos,
            neg,
            total: 0,
            trail: Vec::new(),
        }
    }

    fn feasible(&self, p: usize) -> bool {
        let need = self.rhs[p] - self.cur[p];
        self.neg[p] <= need && need <= self.pos[p]
    }

    fn check_all(&self) -> bool {
        (0..self.rhs.len()).all(|p| self.feasible(p))
    }

    fn set(&mut self, r: usize, v: i8) {
        self.val[r] = v;
        self.trail.push(r);
        for &(p, c) in &self.ps.eqs_of_region[r] {
            self.cur[p] += c * v as i64;
            if c > 0 {
                self.pos[p] -= c;
            } else {
                self.neg[p] -= c;
            }
        }
        self.total += v as i64 * self.cost[r];
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let r = self.trail.pop().expect("trail above mark");
            let v = self.val[r] as i64;
            for &(p, c) in &self.ps.eqs_of_region[r] {
                self.cur[p] -= c * v;
                if c > 0 {
                    self.pos[p] += c;
                } else {
                    self.neg[p] += c;
                }
            }
            self.total -= v * self.cost[r];
            self.val[r] = -1;
        }
    }

    /// Assigns `r := v` and propagates forced values. Returns false on conflict.
    fn assign(&mut self, r: usize, v: i8) -> bool {
        let mut pending = vec![(r, v)];
        while let Some((r, v)) = pending.pop() {
            match self.val[r] {
                -1 => {}
                old if old == v => continue,
                _ => return false,
            }
            self.set(r, v);
            if self.total > BUDGET {
                return false;
            }
            for &(p, _) in &self.ps.eqs_of_region[r] {
                if !self.feasible(p) {
                    return false;
                }
                let need = self.rhs[p] - self.cur[p];
                if self.pos[p] == self.neg[p] {
                    continue;
                }
                let force_high = need == self.pos[p];
                let force_low = need == self.neg[p];
                if !(force_high || force_low) {
                    continue;
                }
                for &(q, c) in &self.ps.terms[p] {
                    if self.val[q] != -1 {
                        continue;
                    }
                    let one = if force_high { c > 0 } else { c < 0 };
                    pending.push((q, i8::from(one)));
                }
            }
        }
        true
    }

    fn dfs(&mut self, order: &[usize], mut at: usize, found: &mut Vec<Domain>) {
        while at < order.len() && self.val[order[at]] != -1 {
            at += 1;
        }
        if at == order.len() {
            if self.total == BUDGET && self.cur.iter().zip(self.rhs).all(|(a, b)| a == b) {
                let mult = self.val.iter().map(|&v| v as i64).collect();
                found.push(Domain { mult });
            }
            return;
        }
        let r = order[at];
        for v in [0i8, 1] {
            let mark = self.trail.len();
            if self.assign(r, v) {
                self.dfs(order, at + 1, found);
            }
            self.undo(mark);
        }
    }
}

/// All empty polygons out of `x`, as `(y, D)` pairs sorted by `y`.
pub fn empty_polygons(d: &HeegaardDiagram, x: &Generator) -> Result<Vec<(Generator, Domain)>> {
    d.require_nice()?;
    let ps = PolygonSearch::new(d);
    let mut out = Vec::new();
    for y in ps.candidates(x) {
        for dom in ps.search(x, &y) {
            out.push((y.clone(), dom));
        }
    }
    Ok(out)
}

/// The GF(2) differential with the witnessing polygons of every entry.
#[derive(Clone, Debug)]
pub struct Differential {
    pub generators: Vec<Generator>,
    /// `matrix[x][y]` is the parity of the number of empty polygons from x to y.
    pub matrix: Gf2Matrix,
    /// per x: `(y index, polygons)` for every y reached by at least one polygon
    pub witnesses: Vec<Vec<(usize, Vec<Domain>)>>,
}

impl Differential {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, g: &Generator) -> Option<usize> {
        self.generators.binary_search(g).ok()
    }

    /// Sparse text export: a `rows cols` header, then one `row col` line per
    /// nonzero entry.
    pub fn export(&self) -> String {
        let n = self.generators.len();
        let mut s = format!("{n} {n}\n");
        for (r, c) in self.matrix.entries() {
            s.push_str(&format!("{r} {c}\n"));
        }
        s
    }
}

pub fn differential(d: &HeegaardDiagram) -> Result<Differential> {
    d.require_nice()?;
    let generators = enumerate_generators(d);
    let ps = PolygonSearch::new(d);
    let rows: Vec<Vec<(usize, Vec<Domain>)>> = par::map(&generators, |x: &Generator| {
        ps.candidates(x)
            .into_iter()
            .filter_map(|y| {
                let doms = ps.search(x, &y);
                if doms.is_empty() {
                    return None;
                }
                let yi = generators.binary_search(&y).expect("candidates are generators");
                Some((yi, doms))
            })
            .collect()
    });
    let n = generators.len();
    let mut matrix = Gf2Matrix::zeros(n, n);
    for (xi, row) in rows.iter().enumerate() {
        for (yi, doms) in row {
            if doms.len() % 2 == 1 {
                matrix.set(xi, *yi, true);
            }
        }
    }
    Ok(Differential { generators, matrix, witnesses: rows })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareCheck {
    pub ok: bool,
    /// First `(x, z)` in row-major order with an odd number of two-step paths.
    pub counterexample: Option<(usize, usize)>,
}

pub fn verify_d_squared(matrix: &Gf2Matrix) -> SquareCheck {
    let sq = matrix.mul(matrix);
    let counterexample = (0..sq.rows()).find_map(|r| sq.row(r).first_one().map(|c| (r, c)));
    SquareCheck { ok: counterexample.is_none(), counterexample }
}

/// Generators grouped by π₂-equivalence; classes ordered by first member.
pub fn pi2_classes(d: &HeegaardDiagram, generators: &[Generator]) -> Result<Vec<Vec<usize>>> {
    let solver = DomainSolver::new(d)?;
    pi2_classes_with(&solver, generators)
}

pub fn pi2_classes_with(solver: &DomainSolver, generators: &[Generator]) -> Result<Vec<Vec<usize>>> {
    let mut by_key: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        let key = solver.class_key(g)?;
        match by_key.get(&key) {
            Some(&c) => classes[c].push(i),
            None => {
                by_key.insert(key, classes.len());
                classes.push(vec![i]);
            }
        }
    }
    Ok(classes)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassHomology {
    pub generators: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Homology {
    pub total: usize,
    pub classes: Vec<ClassHomology>,
}

/// GF(2) homology of a complex already known to split along `classes`.
pub fn homology_of(diff: &Differential, classes: &[Vec<usize>]) -> Result<Homology> {
    let check = verify_d_squared(&diff.matrix);
    if let Some((x, z)) = check.counterexample {
        return Err(HfError::NotAChainComplex(format!("{x}"), format!("{z}")));
    }
    let classes: Vec<ClassHomology> = classes
        .iter()
        .map(|members| {
            let sub = diff.matrix.submatrix(members);
            ClassHomology { generators: members.clone(), dim: members.len() - 2 * sub.rank() }
        })
        .collect();
    let total = classes.iter().map(|c| c.dim).sum();
    Ok(Homology { total, classes })
}

pub fn homology(d: &HeegaardDiagram) -> Result<Homology> {
    let diff = differential(d)?;
    let classes = pi2_classes(d, &diff.generators)?;
    homology_of(&diff, &classes)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Grading {
    /// Grading of each class member, in class order.
    pub values: Vec<i64>,
    /// Gradings are defined modulo this; 0 means a relative ℤ-grading.
    pub modulus: i64,
}

/// Relative Maslov grading on one π₂-class, normalised to minimum 0.
pub fn relative_grading(
    d: &HeegaardDiagram,
    solver: &DomainSolver,
    generators: &[Generator],
    class: &[usize],
) -> Result<Grading> {
    let Some(&base) = class.first() else {
        return Ok(Grading { values: Vec::new(), modulus: 0 });
    };
    let x0 = &generators[base];
    let h2 = pi2prime_and_h2_from(d, solver.kernel())?;
    let modulus = h2.periodic.basis().iter().try_fold(0i64, |g, p| {
        let mu = maslov(d, &Domain { mult: p.clone() }, x0, x0);
        mu.to_int()
            .map(|m| gcd(g, m))
            .ok_or_else(|| HfError::NotInLattice("periodic domain with fractional index".into()))
    })?;
    let mut values = Vec::with_capacity(class.len());
    for &i in class {
        let y = &generators[i];
        let sol = solver.solve(x0, y)?;
        let dom = sol.particular.ok_or_else(|| {
            HfError::NoConnectingDomain(x0.display(d.map()), y.display(d.map()))
        })?;
        let dom = clear_basepoints(d, &dom);
        let mu = maslov(d, &dom, x0, y).to_int().ok_or_else(|| {
            HfError::NotInLattice(format!("fractional index from {}", x0.display(d.map())))
        })?;
        let g = -mu;
        values.push(if modulus > 0 { g.rem_euclid(modulus) } else { g });
    }
    let min = values.iter().copied().min().unwrap_or(0);
    for v in values.iter_mut() {
        *v -= min;
    }
    Ok(Grading { values, modulus })
}

/// Homology of one class split by relative grading, as `(grading, dim)`
/// pairs. The differential lowers the grading by one.
pub fn graded_homology(diff: &Differential, class: &[usize], grading: &Grading) -> Result<Vec<(i64, usize)>> {
    let norm = |g: i64| if grading.modulus > 0 { g.rem_euclid(grading.modulus) } else { g };
    let grade: BTreeMap<usize, i64> = class.iter().copied().zip(grading.values.iter().copied()).collect();
    for (r, c) in diff.matrix.entries() {
        if let (Some(&a), Some(&b)) = (grade.get(&r), grade.get(&c)) {
            if norm(a - b - 1) != 0 {
                return Err(HfError::NotAChainComplex(
                    format!("{r}"),
                    format!("{c}"),
                ));
            }
        }
    }
    let mut by_grade: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (&i, &g) in &grade {
        by_grade.entry(g).or_default().push(i);
    }
    // rank of the block from grading g to g − 1
    let rank_from = |g: i64| -> usize {
        let rows = by_grade.get(&g).map_or(&[][..], Vec::as_slice);
        let cols = by_grade.get(&norm(g - 1)).map_or(&[][..], Vec::as_slice);
        let mut m = Gf2Matrix::zeros(rows.len(), cols.len());
        for (a, &r) in rows.iter().enumerate() {
            for (b, &c) in cols.iter().enumerate() {
                m.set(a, b, diff.matrix.get(r, c));
            }
        }
        m.rank()
    };
    Ok(by_grade
        .iter()
        .map(|(&g, members)| (g, members.len() - rank_from(g) - rank_from(norm(g + 1))))
        .collect())
}

/// The pair `[dim H̃F, b]` up to tensoring with copies of `𝔽 ⊕ 𝔽`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StableClass {
    pub dim: u64,
    pub b: u32,
}

impl StableClass {
    /// Tensor with `(𝔽 ⊕ 𝔽)^n`, as for `n` extra S¹×S² summands.
    pub fn with_summands(self, n: u32) -> StableClass {
        StableClass { dim: self.dim << n, b: self.b }
    }

    /// `dim / 2^(b−1)` and whether that division is exact.
    pub fn reduced(self) -> (u64, bool) {
        let shift = self.b.saturating_sub(1);
        let exact = self.dim.trailing_zeros() >= shift || self.dim == 0;
        (self.dim >> shift.min(63), exact)
    }
}

pub fn stable_class(d: &HeegaardDiagram, h: &Homology) -> StableClass {
    StableClass { dim: h.total as u64, b: d.b() as u32 }
}

/// `d₁ · 2^{b₂} = d₂ · 2^{b₁}`, compared without overflow.
pub fn stable_equal(a: StableClass, b: StableClass) -> bool {
    if a.dim == 0 || b.dim == 0 {
        return a.dim == b.dim;
    }
    let (va, vb) = (a.dim.trailing_zeros() as u64, b.dim.trailing_zeros() as u64);
    a.dim >> va == b.dim >> vb && va + b.b as u64 == vb + a.b as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{
        connected_sum, make_grid, make_lens, make_s1s2, make_s3_sphere, make_s3_torus, Corner,
    };
    use crate::domains::{euler_measure, point_measure, Quarter};
    use crate::surface::Quadrant;

    #[test]
    fn generator_counts() {
        assert_eq!(enumerate_generators(&make_s3_sphere()).len(), 2);
        assert_eq!(enumerate_generators(&make_s3_torus()).len(), 1);
        assert_eq!(enumerate_generators(&make_s1s2()).len(), 2);
        for p in 1..=7 {
            assert_eq!(enumerate_generators(&make_lens(p, 1).unwrap()).len(), p as usize);
        }
        // permutation matrices
        assert_eq!(enumerate_generators(&make_grid(3).unwrap()).len(), 6);
        let g = enumerate_generators(&make_grid(4).unwrap());
        assert_eq!(g.len(), 24);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn spherical_bigons_cancel() {
        let d = make_s3_sphere();
        let g = enumerate_generators(&d);
        let polys = empty_polygons(&d, &g[0]).unwrap();
        assert_eq!(polys.len(), 2);
        for (y, dom) in &polys {
            assert_eq!(y, &g[1]);
            assert_eq!(euler_measure(&d, dom), Quarter(2));
            assert_eq!(point_measure(&d, dom, &g[0], y), Quarter(2));
        }
        assert!(empty_polygons(&d, &g[1]).unwrap().is_empty());
        let diff = differential(&d).unwrap();
        assert!(diff.matrix.is_zero());
        assert_eq!(diff.witnesses[0][0].1.len(), 2);
        assert_eq!(homology(&d).unwrap().total, 2);
    }

    #[test]
    fn toric_and_lens_have_no_polygons() {
        let t = make_s3_torus();
        let g = enumerate_generators(&t);
        assert!(empty_polygons(&t, &g[0]).unwrap().is_empty());
        assert_eq!(homology(&t).unwrap().total, 1);
        for (p, q) in [(1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (5, 2), (7, 1), (7, 3)] {
            let d = make_lens(p, q).unwrap();
            let diff = differential(&d).unwrap();
            assert!(diff.matrix.is_zero());
            let h = homology(&d).unwrap();
            assert_eq!(h.total, p as usize);
            assert_eq!(h.classes.len(), p as usize);
            assert!(h.classes.iter().all(|c| c.dim == 1));
        }
    }

    #[test]
    fn s1s2_and_sums() {
        let u = make_s1s2();
        let h = homology(&u).unwrap();
        assert_eq!(h.total, 2);
        assert_eq!(h.classes.len(), 1);
        let t = make_s3_torus();
        let tu =
            connected_sum(&t, &u, Corner::new(0, Quadrant::A), Corner::new(1, Quadrant::A)).unwrap();
        assert_eq!(homology(&tu).unwrap().total, 2);
    }

    #[test]
    fn grid_complex() {
        for n in 2..=3 {
            let d = make_grid(n).unwrap();
            let diff = differential(&d).unwrap();
            assert!(verify_d_squared(&diff.matrix).ok);
            let h = homology(&d).unwrap();
            // multi-pointed S³ with b = n
            assert_eq!(h.total, 1 << (n - 1), "grid {n}");
        }
    }

    #[test]
    fn corrupted_matrix_fails_square_check() {
        let d = make_grid(3).unwrap();
        let diff = differential(&d).unwrap();
        assert!(!diff.matrix.is_zero());
        let n = diff.len();
        let broken = (0..n * n).find_map(|i| {
            let mut m = diff.matrix.clone();
            m.flip(i / n, i % n);
            let check = verify_d_squared(&m);
            (!check.ok).then_some(check)
        });
        let check = broken.expect("flipping some entry breaks the square");
        assert!(check.counterexample.is_some());
    }

    #[test]
    fn gradings() {
        let d = make_s3_sphere();
        let g = enumerate_generators(&d);
        let solver = DomainSolver::new(&d).unwrap();
        let gr = relative_grading(&d, &solver, &g, &[0, 1]).unwrap();
        assert_eq!(gr.values[0] - gr.values[1], 1);
        assert_eq!(gr.modulus, 0);
        let l = make_lens(3, 1).unwrap();
        let g = enumerate_generators(&l);
        let solver = DomainSolver::new(&l).unwrap();
        for class in pi2_classes(&l, &g).unwrap() {
            assert_eq!(relative_grading(&l, &solver, &g, &class).unwrap().values, vec![0]);
        }
    }

    #[test]
    fn graded_pieces() {
        let d = make_s3_sphere();
        let diff = differential(&d).unwrap();
        let solver = DomainSolver::new(&d).unwrap();
        let gr = relative_grading(&d, &solver, &diff.generators, &[0, 1]).unwrap();
        // the two bigons cancel mod 2, so both gradings survive
        assert_eq!(graded_homology(&diff, &[0, 1], &gr).unwrap(), vec![(0, 1), (1, 1)]);
        let g = make_grid(3).unwrap();
        let diff = differential(&g).unwrap();
        let solver = DomainSolver::new(&g).unwrap();
        let classes = pi2_classes_with(&solver, &diff.generators).unwrap();
        let h = homology_of(&diff, &classes).unwrap();
        let mut total = 0;
        for (c, ch) in classes.iter().zip(&h.classes) {
            let gr = relative_grading(&g, &solver, &diff.generators, c).unwrap();
            let pieces = graded_homology(&diff, c, &gr).unwrap();
            let sum: usize = pieces.iter().map(|p| p.1).sum();
            assert_eq!(sum, ch.dim);
            total += sum;
        }
        assert_eq!(total, 4);
    }

    #[test]
    fn stable_classes() {
        let s = StableClass { dim: 2, b: 2 };
        let t = StableClass { dim: 1, b: 1 };
        assert!(stable_equal(s, t));
        assert!(stable_equal(StableClass { dim: 0, b: 3 }, StableClass { dim: 0, b: 1 }));
        assert!(!stable_equal(StableClass { dim: 4, b: 2 }, t));
        assert!(!stable_equal(StableClass { dim: 3, b: 2 }, t));
        assert_eq!(StableClass { dim: 6, b: 2 }.reduced(), (3, true));
        assert!(!StableClass { dim: 3, b: 2 }.reduced().1);
        assert_eq!(t.with_summands(1), StableClass { dim: 2, b: 1 });
    }

    #[test]
    fn export_format() {
        let d = make_grid(2).unwrap();
        let diff = differential(&d).unwrap();
        let text = diff.export();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("2 2"));
        assert_eq!(lines.count(), diff.matrix.entries().len());
    }
}
