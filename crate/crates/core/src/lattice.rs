//! Exact integer linear algebra: solving `A z = r` over ℤ, kernels, and
//! sublattices of ℤⁿ kept in row Hermite normal form.

use crate::error::{HfError, Result};

fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(HfError::Overflow)
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(HfError::Overflow)
}

fn narrow(v: &[i128]) -> Result<Vec<i64>> {
    v.iter().map(|&x| i64::try_from(x).map_err(|_| HfError::Overflow)).collect()
}

/// `dst += k * src`
fn axpy(dst: &mut [i128], k: i128, src: &[i128]) -> Result<()> {
    if k == 0 {
        return Ok(());
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = add(*d, mul(k, s)?)?;
    }
    Ok(())
}

/// A sublattice of ℤⁿ stored as a basis in row Hermite normal form: pivots
/// strictly increase, are positive, and entries above each pivot lie in
/// `[0, pivot)`. Equal lattices have identical bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Lattice {
        Lattice { dim, basis: Vec::new(), pivots: Vec::new() }
    }

    /// Lattice spanned by arbitrary integer vectors of length `dim`.
    pub fn span(dim: usize, gens: &[Vec<i64>]) -> Result<Lattice> {
        let mut rows: Vec<Vec<i128>> = gens
            .iter()
            .map(|g| {
                assert_eq!(g.len(), dim, "generator length");
                g.iter().map(|&x| x as i128).collect()
            })
            .filter(|g: &Vec<i128>| g.iter().any(|&x| x != 0))
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..dim {
            if r == rows.len() {
                break;
            }
            loop {
                // smallest nonzero |entry| in column c at or below row r
                let best = (r..rows.len())
                    .filter(|&i| rows[i][c] != 0)
                    .min_by_key(|&i| rows[i][c].unsigned_abs());
                let Some(best) = best else { break };
                rows.swap(r, best);
                let p = rows[r][c];
                let mut done = true;
                for i in r + 1..rows.len() {
                    if rows[i][c] != 0 {
                        let q = rows[i][c].div_euclid(p);
                        let pivot_row = rows[r].clone();
                        axpy(&mut rows[i], -q, &pivot_row)?;
                        if rows[i][c] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if rows[r][c] == 0 {
                continue;
            }
            if rows[r][c] < 0 {
                for x in rows[r].iter_mut() {
                    *x = -*x;
                }
            }
            let p = rows[r][c];
            let pivot_row = rows[r].clone();
            for row in rows.iter_mut().take(r) {
                let q = row[c].div_euclid(p);
                axpy(row, -q, &pivot_row)?;
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        let basis = rows.iter().map(|row| narrow(row)).collect::<Result<_>>()?;
        Ok(Lattice { dim, basis, pivots })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[i64]) -> Result<Vec<i64>> {
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            let p = row[c] as i128;
            let q = w[c].div_euclid(p);
            if q != 0 {
                let row128: Vec<i128> = row.iter().map(|&x| x as i128).collect();
                axpy(&mut w, -q, &row128)?;
            }
        }
        narrow(&w)
    }

    /// Coordinates of `v` in the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[i64]) -> Result<Option<Vec<i64>>> {
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        let mut coords = Vec::with_capacity(self.rank());
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            let p = row[c] as i128;
            if w[c] % p != 0 {
                return Ok(None);
            }
            let q = w[c] / p;
            let row128: Vec<i128> = row.iter().map(|&x| x as i128).collect();
            axpy(&mut w, -q, &row128)?;
            coords.push(q);
        }
        if w.iter().any(|&x| x != 0) {
            return Ok(None);
        }
        narrow(&coords).map(Some)
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// Vectors of the lattice whose entries vanish at every index in `zero_at`.
    pub fn restrict_zero(&self, zero_at: &[usize]) -> Result<Lattice> {
        let rows: Vec<Vec<i64>> = zero_at
            .iter()
            .map(|&i| (0..self.dim).map(|j| i64::from(i == j)).collect())
            .collect();
        self.restrict_by(&rows)
    }

    /// Vectors `v` of the lattice with `row · v = 0` for every given row.
    pub fn restrict_by(&self, rows: &[Vec<i64>]) -> Result<Lattice> {
        if rows.is_empty() || self.rank() == 0 {
            return Ok(self.clone());
        }
        let m: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| {
                self.basis.iter().map(|b| r.iter().zip(b).map(|(x, y)| x * y).sum()).collect()
            })
            .collect();
        let coeffs = kernel(&m, self.rank())?;
        let gens: Vec<Vec<i64>> = coeffs
            .iter()
            .map(|k| combine(&self.basis, k, self.dim))
            .collect::<Result<_>>()?;
        Lattice::span(self.dim, &gens)
    }
}

/// `Σ k_i · vecs_i`
pub fn combine(vecs: &[Vec<i64>], coeffs: &[i64], dim: usize) -> Result<Vec<i64>> {
    let mut out = vec![0i128; dim];
    for (v, &k) in vecs.iter().zip(coeffs) {
        let v128: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        axpy(&mut out, k as i128, &v128)?;
    }
    narrow(&out)
}

/// Column reduction `A U = H` with `U` unimodular. Returns the rank, `H` and
/// `U` stored column by column.
struct ColumnEchelon {
    rank: usize,
    /// pivot row of each of the first `rank` columns
    pivot_rows: Vec<usize>,
    h: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
}

fn column_echelon(a: &[Vec<i64>], n: usize) -> Result<ColumnEchelon> {
    let m = a.len();
    let mut h: Vec<Vec<i128>> =
        (0..n).map(|j| (0..m).map(|i| a[i][j] as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|j| (0..n).map(|i| i128::from(i == j)).collect())
        .collect();
    let mut rank = 0;
    let mut pivot_rows = Vec::new();
    for row in 0..m {
        if rank == n {
            break;
        }
        loop {
            let best = (rank..n)
                .filter(|&j| h[j][row] != 0)
                .min_by_key(|&j| h[j][row].unsigned_abs());
            let Some(best) = best else { break };
            h.swap(rank, best);
            u.swap(rank, best);
            let p = h[rank][row];
            let mut done = true;
            for j in rank + 1..n {
                if h[j][row] != 0 {
                    let q = h[j][row].div_euclid(p);
                    let (hp, up) = (h[rank].clone(), u[rank].clone());
                    axpy(&mut h[j], -q, &hp)?;
                    axpy(&mut u[j], -q, &up)?;
                    if h[j][row] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if rank < n && h[rank][row] != 0 {
            pivot_rows.push(row);
            rank += 1;
        }
    }
    Ok(ColumnEchelon { rank, pivot_rows, h, u })
}

/// Integer kernel of the `m × n` matrix `a` (given by rows), as a canonical
/// basis.
pub fn kernel(a: &[Vec<i64>], n: usize) -> Result<Vec<Vec<i64>>> {
    let ce = column_echelon(a, n)?;
    let gens: Vec<Vec<i64>> = ce.u[ce.rank..].iter().map(|c| narrow(c)).collect::<Result<_>>()?;
    Ok(Lattice::span(n, &gens)?.basis)
}

/// An integer linear system `a z = rhs` with the column reduction cached, so
/// that many right-hand sides can be solved against one matrix.
pub struct IntegerSystem {
    rows: usize,
    ce: ColumnEchelon,
    kernel: Lattice,
}

impl IntegerSystem {
    pub fn new(a: &[Vec<i64>], n: usize) -> Result<IntegerSystem> {
        let ce = column_echelon(a, n)?;
        let gens: Vec<Vec<i64>> =
            ce.u[ce.rank..].iter().map(|c| narrow(c)).collect::<Result<_>>()?;
        let kernel = Lattice::span(n, &gens)?;
        Ok(IntegerSystem { rows: a.len(), ce, kernel })
    }

    pub fn kernel(&self) -> &Lattice {
        &self.kernel
    }

    /// Lattice spanned by the columns of the matrix.
    pub fn image(&self) -> Result<Lattice> {
        let gens: Vec<Vec<i64>> =
            self.ce.h[..self.ce.rank].iter().map(|c| narrow(c)).collect::<Result<_>>()?;
        Lattice::span(self.rows, &gens)
    }

    /// A solution reduced modulo the kernel (hence canonical), if any exists.
    pub fn particular(&self, rhs: &[i64]) -> Result<Option<Vec<i64>>> {
        assert_eq!(rhs.len(), self.rows, "right-hand side length");
        let ce = &self.ce;
        let n = self.kernel.dim();
        let target: Vec<i128> = rhs.iter().map(|&x| x as i128).collect();
        let mut z = Vec::with_capacity(ce.rank);
        let mut acc = vec![0i128; self.rows];
        for (&r, hj) in ce.pivot_rows.iter().zip(&ce.h).take(ce.rank) {
            let need = target[r] - acc[r];
            let p = hj[r];
            if need % p != 0 {
                return Ok(None);
            }
            z.push(need / p);
            axpy(&mut acc, need / p, hj)?;
        }
        if acc != target {
            return Ok(None);
        }
        let mut x = vec![0i128; n];
        for (&zj, uj) in z.iter().zip(&ce.u) {
            axpy(&mut x, zj, uj)?;
        }
        self.kernel.reduce(&narrow(&x)?).map(Some)
    }
}

/// Integer solutions of `a z = rhs`: an optional particular solution and the
/// kernel lattice. The particular solution is reduced modulo the kernel, so it
/// is canonical for the solution set.
pub fn solve(a: &[Vec<i64>], n: usize, rhs: &[i64]) -> Result<(Option<Vec<i64>>, Lattice)> {
    let sys = IntegerSystem::new(a, n)?;
    let p = sys.particular(rhs)?;
    Ok((p, sys.kernel))
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}
