//! Twisted coefficients in GF(2)[H₂]: reference domains, the twisted
//! differential, its square, and homology when H₂ has rank one.

use serde::Serialize;

use crate::complex::{Differential, Generator};
use crate::diagram::HeegaardDiagram;
use crate::domains::{clear_basepoints, maslov, Domain, DomainSolver, H2Data};
use crate::error::{HfError, Result};
use crate::gf2::Gf2Matrix;
use crate::poly::{smith_divisors, GroupRingElement, Poly};

/// The twisted complex of one π₂-class.
#[derive(Clone, Debug, Serialize)]
pub struct TwistedComplex {
    /// Generator indices of the class, in canonical order.
    pub class: Vec<usize>,
    /// Position in `class` of the reference generator.
    pub base: usize,
    /// `D_y ∈ π₂(base, y)` with all basepoint multiplicities zero, per class member.
    pub ref_domains: Vec<Domain>,
    /// Exponent basis: the canonical periodic-domain basis of H₂.
    pub basis: Vec<Vec<i64>>,
    /// `matrix[i][j]`: coefficient of `class[j]` in the boundary of `class[i]`.
    pub matrix: Vec<Vec<GroupRingElement>>,
}

impl TwistedComplex {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }
}

/// Reference domains from `generators[class[base]]` to every class member,
/// reduced modulo periodic domains so the choice is canonical.
pub fn reference_domains(
    d: &HeegaardDiagram,
    solver: &DomainSolver,
    h2: &H2Data,
    generators: &[Generator],
    class: &[usize],
    base: usize,
) -> Result<Vec<Domain>> {
    let x = &generators[class[base]];
    class
        .iter()
        .map(|&i| {
            let y = &generators[i];
            let dom = solver.solve(x, y)?.particular.ok_or_else(|| {
                HfError::NoConnectingDomain(x.display(d.map()), y.display(d.map()))
            })?;
            let cleared = clear_basepoints(d, &dom);
            Ok(Domain { mult: h2.periodic.reduce(&cleared.mult)? })
        })
        .collect()
}

/// Twisted differential on one class. `base` defaults to the class's
/// smallest generator (position 0).
pub fn twisted_differential(
    d: &HeegaardDiagram,
    solver: &DomainSolver,
    h2: &H2Data,
    diff: &Differential,
    class: &[usize],
    base: Option<usize>,
) -> Result<TwistedComplex> {
    let base = base.unwrap_or(0);
    let refs = reference_domains(d, solver, h2, &diff.generators, class, base)?;
    let n = class.len();
    let mut matrix = vec![vec![GroupRingElement::zero(); n]; n];
    for (i, &y) in class.iter().enumerate() {
        for (z, doms) in &diff.witnesses[y] {
            let Ok(j) = class.binary_search(z) else {
                return Err(HfError::NotInLattice("polygon leaves its π₂-class".into()));
            };
            for dom in doms {
                let loop_dom = &(&refs[i] + dom) - &refs[j];
                let coords = h2.periodic.coordinates(&loop_dom.mult)?.ok_or_else(|| {
                    HfError::NotInLattice("polygon loop is not a periodic domain".into())
                })?;
                matrix[i][j].add_monomial(coords);
            }
        }
    }
    Ok(TwistedComplex {
        class: class.to_vec(),
        base,
        ref_domains: refs,
        basis: h2.periodic.basis().to_vec(),
        matrix,
    })
}

/// Twisted complexes of every π₂-class, each based at its smallest generator.
pub fn twisted_complexes(d: &HeegaardDiagram) -> Result<(Differential, Vec<TwistedComplex>)> {
    let diff = crate::complex::differential(d)?;
    let solver = DomainSolver::new(d)?;
    let h2 = crate::domains::pi2prime_and_h2_from(d, solver.kernel())?;
    let classes = crate::complex::pi2_classes_with(&solver, &diff.generators)?;
    let cs = classes
        .iter()
        .map(|cl| twisted_differential(d, &solver, &h2, &diff, cl, None))
        .collect::<Result<_>>()?;
    Ok((diff, cs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedSquareCheck {
    pub ok: bool,
    pub counterexample: Option<(usize, usize)>,
}

pub fn verify_twisted_d_squared(c: &TwistedComplex) -> TwistedSquareCheck {
    let n = c.len();
    for i in 0..n {
        for k in 0..n {
            let mut acc = GroupRingElement::zero();
            for j in 0..n {
                if !c.matrix[i][j].is_zero() && !c.matrix[j][k].is_zero() {
                    acc = acc.add(&c.matrix[i][j].mul(&c.matrix[j][k]));
                }
            }
            if !acc.is_zero() {
                return TwistedSquareCheck { ok: false, counterexample: Some((i, k)) };
            }
        }
    }
    TwistedSquareCheck { ok: true, counterexample: None }
}

/// Every variable set to 1: recovers the untwisted GF(2) block.
pub fn augmentation(c: &TwistedComplex) -> Gf2Matrix {
    let n = c.len();
    let mut m = Gf2Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if c.matrix[i][j].augmentation() {
                m.set(i, j, true);
            }
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnivariateHomology {
    pub free_rank: usize,
    /// Nonunit invariant factors, with powers of `t` (units) removed.
    pub divisors: Vec<Poly>,
    /// GF(2)-dimension, when finite.
    pub gf2_dim: Option<usize>,
}

/// Homology over GF(2)[t, t⁻¹]. With no variables the ring is GF(2).
pub fn univariate_homology(c: &TwistedComplex) -> Result<UnivariateHomology> {
    let n = c.len();
    match c.rank() {
        0 => {
            let dim = n - 2 * augmentation(c).rank();
            Ok(UnivariateHomology { free_rank: dim, divisors: Vec::new(), gf2_dim: Some(dim) })
        }
        1 => {
            let shift = c
                .matrix
                .iter()
                .flatten()
                .flat_map(|e| e.terms.iter().map(|v| v[0]))
                .min()
                .unwrap_or(0);
            let polys: Vec<Vec<Poly>> =
                c.matrix.iter().map(|row| row.iter().map(|e| e.to_poly(shift)).collect()).collect();
            let factors = smith_divisors(&polys);
            let r = factors.len();
            let divisors: Vec<Poly> = factors
                .into_iter()
                .map(|p| {
                    let v = p.t_valuation().unwrap_or(0);
                    p.shift_down(v)
                })
                .filter(|p| !p.is_one())
                .collect();
            let free_rank = n - 2 * r;
            let gf2_dim = (free_rank == 0)
                .then(|| divisors.iter().map(|p| p.degree().unwrap_or(0)).sum());
            Ok(UnivariateHomology { free_rank, divisors, gf2_dim })
        }
        m => Err(HfError::NotUnivariate(m)),
    }
}

/// Relative grading of `[class[i], a]`: `−μ(D_y) − Σ aⱼ μ(Pⱼ)`, with the
/// Maslov indices of periodic domains taken at the base generator.
pub fn twisted_grading(
    d: &HeegaardDiagram,
    generators: &[Generator],
    c: &TwistedComplex,
    i: usize,
    a: &[i64],
) -> Result<i64> {
    let x = &generators[c.class[c.base]];
    let y = &generators[c.class[i]];
    let to_int = |q: crate::domains::Quarter| {
        q.to_int().ok_or_else(|| HfError::NotInLattice("fractional Maslov index".into()))
    };
    let mut g = -to_int(maslov(d, &c.ref_domains[i], x, y))?;
    for (aj, p) in a.iter().zip(&c.basis) {
        g -= aj * to_int(maslov(d, &Domain { mult: p.clone() }, x, x))?;
    }
    Ok(g)
}
