//! GF(2)[t] polynomials and the group ring GF(2)[ℤ^m].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

/// A polynomial over GF(2); bit `i` of the packed words is the coefficient of `tⁱ`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    words: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { words: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::monomial(0)
    }

    pub fn monomial(e: usize) -> Poly {
        let mut p = Poly { words: vec![0; e / 64 + 1] };
        p.words[e / 64] |= 1 << (e % 64);
        p
    }

    pub fn from_exponents(exps: impl IntoIterator<Item = usize>) -> Poly {
        let mut p = Poly::zero();
        for e in exps {
            p = &p + &Poly::monomial(e);
        }
        p
    }

    fn trim(mut self) -> Poly {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        let last = self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    pub fn exponents(&self) -> Vec<usize> {
        let top = self.degree().map_or(0, |d| d + 1);
        (0..top).filter(|&i| self.coeff(i)).collect()
    }

    /// Multiplicity of `t` as a factor (the lowest exponent).
    pub fn t_valuation(&self) -> Option<usize> {
        self.exponents().first().copied()
    }

    pub fn shift_down(&self, k: usize) -> Poly {
        Poly::from_exponents(self.exponents().into_iter().filter(|&e| e >= k).map(|e| e - k))
    }

    fn shift_up(&self, k: usize) -> Poly {
        Poly::from_exponents(self.exponents().into_iter().map(|e| e + k))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for e in self.exponents() {
            out = &out + &o.shift_up(e);
        }
        out
    }

    /// Quotient and remainder.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let k = rd - dd;
            q = &q + &Poly::monomial(k);
            r = &r + &d.shift_up(k);
        }
        (q, r)
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.words.len().max(o.words.len());
        let words = (0..n)
            .map(|i| self.words.get(i).copied().unwrap_or(0) ^ o.words.get(i).copied().unwrap_or(0))
            .collect();
        Poly { words }.trim()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "t".to_string(),
                e => format!("t^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Element of GF(2)[ℤ^m]: the set of exponent vectors with coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct GroupRingElement {
    pub terms: BTreeSet<Vec<i64>>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(exp: Vec<i64>) -> Self {
        GroupRingElement { terms: BTreeSet::from([exp]) }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_monomial(&mut self, exp: Vec<i64>) {
        if !self.terms.remove(&exp) {
            self.terms.insert(exp);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        GroupRingElement { terms: self.terms.symmetric_difference(&o.terms).cloned().collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for a in &self.terms {
            for b in &o.terms {
                out.add_monomial(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        out
    }

    /// Image under every variable ↦ 1.
    pub fn augmentation(&self) -> bool {
        self.terms.len() % 2 == 1
    }

    /// For one variable: the polynomial `t^{-shift} · self`.
    pub fn to_poly(&self, shift: i64) -> Poly {
        Poly::from_exponents(self.terms.iter().map(|e| {
            let k = e[0] - shift;
            assert!(k >= 0, "shift below lowest exponent");
            k as usize
        }))
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|e| {
                if e.iter().all(|&x| x == 0) {
                    return "1".to_string();
                }
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, &x)| {
                        let v = if e.len() == 1 { "t".to_string() } else { format!("t{}", i + 1) };
                        if x == 1 {
                            v
                        } else {
                            format!("{v}^{x}")
                        }
                    })
                    .collect();
                vars.join("*")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Smith normal form over GF(2)[t]: the nonzero invariant factors of `m`
/// (each dividing the next), in order.
#[allow(clippy::needless_range_loop)] // row operations read one row while writing another
pub fn smith_divisors(m: &[Vec<Poly>]) -> Vec<Poly> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<Poly>> = m.to_vec();
    let mut divisors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: nonzero entry of least degree in the trailing block
        let Some((pr, pc)) = (t..rows)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| !a[r][c].is_zero())
            .min_by_key(|&(r, c)| a[r][c].degree())
        else {
            break;
        };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        let mut settled = false;
        while !settled {
            settled = true;
            let p = a[t][t].clone();
            for r in t + 1..rows {
                if a[r][t].is_zero() {
                    continue;
                }
                let (q, rem) = a[r][t].divrem(&p);
                for c in t..cols {
                    let sub = q.mul(&a[t][c]);
                    a[r][c] = &a[r][c] + &sub;
                }
                if !rem.is_zero() {
                    a.swap(t, r);
                    settled = false;
                    break;
                }
            }
            if !settled {
                continue;
            }
            let p = a[t][t].clone();
            for c in t + 1..cols {
                if a[t][c].is_zero() {
                    continue;
                }
                let (q, rem) = a[t][c].divrem(&p);
                for row in a.iter_mut().skip(t) {
                    let sub = q.mul(&row[t]);
                    row[c] = &row[c] + &sub;
                }
                if !rem.is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, c);
                    }
                    settled = false;
                    break;
                }
            }
            if !settled {
                continue;
            }
            // divisibility of the rest by the pivot
            let p = a[t][t].clone();
            if let Some(r) = (t + 1..rows)
                .find(|&r| (t + 1..cols).any(|c| !a[r][c].divrem(&p).1.is_zero()))
            {
                for c in t..cols {
                    let v = a[r][c].clone();
                    a[t][c] = &a[t][c] + &v;
                }
                settled = false;
            }
        }
        divisors.push(a[t][t].clone());
        t += 1;
    }
    divisors
}
