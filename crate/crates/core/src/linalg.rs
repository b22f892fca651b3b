//! Exact integer diagonalization (Smith-style) and the linear solvers built on it.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{decompose, Phase, Rat, Scalar};

#[derive(Clone, Copy, Debug)]
enum RowOp {
    Swap(usize, usize),
    /// `row[target] += factor * row[source]`
    AddMul {
        target: usize,
        source: usize,
        factor: i128,
    },
    Negate(usize),
}

/// `U·A·V = D` with `U` recorded as a log of row operations and `V` stored densely.
#[derive(Clone, Debug)]
pub struct IntSystem {
    rows: usize,
    cols: usize,
    diag: Vec<i128>,
    log: Vec<RowOp>,
    v: Vec<Vec<i128>>,
}

fn ck(x: Option<i128>) -> Result<i128> {
    x.ok_or(Error::Overflow("integer diagonalization"))
}

impl IntSystem {
    /// Diagonalizes the matrix given as sparse rows of `(column, coefficient)`.
    pub fn new(sparse_rows: &[Vec<(usize, i128)>], cols: usize) -> Result<IntSystem> {
        let rows = sparse_rows.len();
        let mut a: Vec<Vec<i128>> = sparse_rows
            .iter()
            .map(|r| {
                let mut row = vec![0i128; cols];
                for &(c, x) in r {
                    row[c] += x;
                }
                row
            })
            .collect();
        let mut v: Vec<Vec<i128>> = (0..cols).map(|i| (0..cols).map(|j| i128::from(i == j)).collect()).collect();
        let mut log = Vec::new();
        let mut diag = Vec::new();
        let steps = rows.min(cols);
        for t in 0..steps {
            // pivot: smallest nonzero magnitude in the remaining block
            let mut best: Option<(usize, usize, i128)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.is_none_or(|(_, _, b)| x.abs() < b) {
                        best = Some((i, j, x.abs()));
                        if x.abs() == 1 {
                            break;
                        }
                    }
                }
                if matches!(best, Some((_, _, 1))) {
                    break;
                }
            }
            let Some((pi, pj, _)) = best else { break };
            if pi != t {
                a.swap(pi, t);
                log.push(RowOp::Swap(pi, t));
            }
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(pj, t);
                }
                for row in v.iter_mut() {
                    row.swap(pj, t);
                }
            }
            loop {
                let mut dirty = false;
                // clear column t below the pivot
                for i in t + 1..rows {
                    if a[i][t] == 0 {
                        continue;
                    }
                    let q = Integer::div_floor(&a[i][t], &a[t][t]);
                    if q != 0 {
                        for j in t..cols {
                            if a[t][j] != 0 {
                                a[i][j] = ck(a[i][j].checked_sub(ck(q.checked_mul(a[t][j]))?))?;
                            }
                        }
                        log.push(RowOp::AddMul { target: i, source: t, factor: -q });
                    }
                    if a[i][t] != 0 {
                        a.swap(i, t);
                        log.push(RowOp::Swap(i, t));
                        dirty = true;
                    }
                }
                // clear row t right of the pivot
                for j in t + 1..cols {
                    if a[t][j] == 0 {
                        continue;
                    }
                    let q = Integer::div_floor(&a[t][j], &a[t][t]);
                    if q != 0 {
                        for row in a.iter_mut().skip(t) {
                            if row[t] != 0 {
                                row[j] = ck(row[j].checked_sub(ck(q.checked_mul(row[t]))?))?;
                            }
                        }
                        for row in v.iter_mut() {
                            row[j] = ck(row[j].checked_sub(ck(q.checked_mul(row[t]))?))?;
                        }
                    }
                    if a[t][j] != 0 {
                        for row in a.iter_mut() {
                            row.swap(j, t);
                        }
                        for row in v.iter_mut() {
                            row.swap(j, t);
                        }
                        dirty = true;
                    }
                }
                if !dirty {
                    break;
                }
            }
            if a[t][t] < 0 {
                for x in a[t].iter_mut() {
                    *x = -*x;
                }
                log.push(RowOp::Negate(t));
            }
            diag.push(a[t][t]);
        }
        Ok(IntSystem { rows, cols, diag, log, v })
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Nonzero diagonal entries of `D`.
    pub fn diagonal(&self) -> &[i128] {
        &self.diag
    }

    /// The column transform `V`; `x ↦ x·V` carries `Z^cols` onto diagonal coordinates
    /// when the matrix is a relation matrix.
    pub fn column_transform(&self) -> &[Vec<i128>] {
        &self.v
    }

    fn apply_u(&self, b: &mut [Rat], mod_one: bool) {
        for op in &self.log {
            match *op {
                RowOp::Swap(i, j) => b.swap(i, j),
                RowOp::Negate(i) => b[i] = -b[i],
                RowOp::AddMul { target, source, factor } => {
                    let add = b[source] * Rat::from_integer(factor);
                    b[target] += add;
                    if mod_one {
                        b[target] = frac(b[target]);
                    }
                }
            }
        }
    }

    fn back_substitute(&self, y: &[Rat]) -> Vec<Rat> {
        (0..self.cols)
            .map(|j| {
                self.v[j]
                    .iter()
                    .zip(y)
                    .filter(|(_, y)| !y.is_zero())
                    .fold(Rat::zero(), |acc, (vjk, yk)| acc + Rat::from_integer(*vjk) * yk)
            })
            .collect()
    }

    /// `U·b` on residues modulo `modulus`.
    fn apply_u_mod(&self, b: &mut [i128], modulus: i128) {
        for op in &self.log {
            match *op {
                RowOp::Swap(i, j) => b.swap(i, j),
                RowOp::Negate(i) => b[i] = (-b[i]).rem_euclid(modulus),
                RowOp::AddMul { target, source, factor } => {
                    b[target] = (b[target] + b[source] * factor.rem_euclid(modulus)).rem_euclid(modulus);
                }
            }
        }
    }

    /// `U·b` over the integers; `None` on overflow.
    fn apply_u_int(&self, b: &mut [i128]) -> Option<()> {
        for op in &self.log {
            match *op {
                RowOp::Swap(i, j) => b.swap(i, j),
                RowOp::Negate(i) => b[i] = -b[i],
                RowOp::AddMul { target, source, factor } => {
                    if b[source] != 0 {
                        b[target] = b[target].checked_add(b[source].checked_mul(factor)?)?;
                    }
                }
            }
        }
        Some(())
    }

    /// Solves `A·x ≡ b / modulus (mod 1)` for integer residues `b`.
    fn solve_residues(&self, b: &[i64], modulus: i64) -> Option<Vec<Rat>> {
        let m = i128::from(modulus);
        let mut c: Vec<i128> = b.iter().map(|x| i128::from(*x).rem_euclid(m)).collect();
        self.apply_u_mod(&mut c, m);
        if c[self.rank()..].iter().any(|x| *x != 0) {
            return None;
        }
        let mut y = vec![Rat::zero(); self.cols];
        for (k, d) in self.diag.iter().enumerate() {
            y[k] = Rat::new(c[k], d * m);
        }
        Some(self.back_substitute(&y).into_iter().map(frac).collect())
    }

    /// Solves `A·x = b` over `Q` for an integer right-hand side.
    fn solve_integer(&self, b: &[i128]) -> Option<Vec<Rat>> {
        let mut c = b.to_vec();
        if self.apply_u_int(&mut c).is_none() {
            return self.solve_rational(&b.iter().map(|x| Rat::from_integer(*x)).collect::<Vec<_>>());
        }
        if c[self.rank()..].iter().any(|x| *x != 0) {
            return None;
        }
        let mut y = vec![Rat::zero(); self.cols];
        for (k, d) in self.diag.iter().enumerate() {
            y[k] = Rat::new(c[k], *d);
        }
        Some(self.back_substitute(&y))
    }

    /// Solves `A·x ≡ b (mod 1)`; free coordinates are set to zero.
    pub fn solve_mod_one(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut c: Vec<Rat> = b.iter().map(|x| frac(*x)).collect();
        self.apply_u(&mut c, true);
        if c[self.rank()..].iter().any(|x| !frac(*x).is_zero()) {
            return None;
        }
        let mut y = vec![Rat::zero(); self.cols];
        for (k, d) in self.diag.iter().enumerate() {
            y[k] = frac(c[k]) / Rat::from_integer(*d);
        }
        Some(self.back_substitute(&y).into_iter().map(frac).collect())
    }

    /// Solves `A·x = b` over `Q`; free coordinates are set to zero.
    pub fn solve_rational(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut c = b.to_vec();
        self.apply_u(&mut c, false);
        if c[self.rank()..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut y = vec![Rat::zero(); self.cols];
        for (k, d) in self.diag.iter().enumerate() {
            y[k] = c[k] / Rat::from_integer(*d);
        }
        Some(self.back_substitute(&y))
    }

    /// Solves the multiplicative system `Π_j x_j^{A_ij} = rhs_i` in the scalar group.
    ///
    /// `Ok(None)` certifies that no solution exists in `C^×`. A solution whose
    /// magnitudes would need irrational prime powers gives `IrrationalRoot`.
    pub fn solve_scalars(&self, rhs: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        let (phases, mags) = decompose(rhs);
        assert_eq!(rhs.len(), self.rows);
        let Some(theta) = self.solve_residues(&phases.residues, phases.modulus) else { return Ok(None) };
        let mut magnitude = vec![Rat::one(); self.cols];
        for (p_idx, p) in mags.primes.iter().enumerate() {
            let b: Vec<i128> = mags.exponents.iter().map(|e| i128::from(e[p_idx])).collect();
            let Some(x) = self.solve_integer(&b) else { return Ok(None) };
            for (j, e) in x.iter().enumerate() {
                if !e.is_integer() {
                    return Err(Error::IrrationalRoot { value: format!("{p}^{e}"), n: *e.denom() as u32 });
                }
                let e = e.to_integer();
                let pe = Rat::from_integer(*p).pow(i32::try_from(e).map_err(|_| Error::Overflow("prime exponent"))?);
                magnitude[j] *= pe;
            }
        }
        theta
            .iter()
            .zip(magnitude)
            .map(|(t, m)| {
                let n = i64::try_from(*t.numer()).map_err(|_| Error::Overflow("phase"))?;
                let d = i64::try_from(*t.denom()).map_err(|_| Error::Overflow("phase"))?;
                Scalar::new(m, Phase::new(n, d))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }
}

fn frac(x: Rat) -> Rat {
    x - x.floor()
}

/// Dense rational matrix helpers for the small systems of the testbed.
pub mod rational {
    use super::*;

    pub type Matrix = Vec<Vec<Rat>>;

    pub fn identity(n: usize) -> Matrix {
        (0..n).map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect()
    }

    pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
        let inner = b.len();
        let cols = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|row| (0..cols).map(|j| (0..inner).fold(Rat::zero(), |acc, k| acc + row[k] * b[k][j])).collect())
            .collect()
    }

    pub fn apply(a: &Matrix, x: &[Rat]) -> Vec<Rat> {
        a.iter().map(|row| row.iter().zip(x).fold(Rat::zero(), |acc, (r, v)| acc + r * v)).collect()
    }

    pub fn is_zero(a: &Matrix) -> bool {
        a.iter().flatten().all(|x| x.is_zero())
    }

    /// Row-reduces `a` in place and returns the pivot columns.
    pub fn row_reduce(a: &mut Matrix) -> Vec<usize> {
        let rows = a.len();
        let cols = a.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(p, r);
            let inv = a[r][c].recip();
            for x in a[r].iter_mut() {
                *x *= inv;
            }
            for i in 0..rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c];
                    let pivot_row = a[r].clone();
                    for (x, p) in a[i].iter_mut().zip(pivot_row) {
                        *x -= f * p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(a: &Matrix) -> usize {
        let mut m = a.clone();
        row_reduce(&mut m).len()
    }

    /// Solves `a·x = b`, returning one solution with free variables zero.
    pub fn solve(a: &Matrix, b: &[Rat]) -> Option<Vec<Rat>> {
        let cols = a.first().map_or(0, |r| r.len());
        let mut aug: Matrix = a
            .iter()
            .zip(b)
            .map(|(row, bi)| {
                let mut r = row.clone();
                r.push(*bi);
                r
            })
            .collect();
        let pivots = row_reduce(&mut aug);
        if pivots.last() == Some(&cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); cols];
        for (r, c) in pivots.iter().enumerate() {
            x[*c] = aug[r][cols];
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: &[&[i128]]) -> Vec<Vec<(usize, i128)>> {
        rows.iter().map(|r| r.iter().enumerate().filter(|(_, x)| **x != 0).map(|(j, x)| (j, *x)).collect()).collect()
    }

    #[test]
    fn diagonal_of_relation_matrix() {
        let sys = IntSystem::new(&dense(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), 3).unwrap();
        let mut d: Vec<i128> = sys.diagonal().to_vec();
        d.sort();
        assert_eq!(d.iter().product::<i128>(), 144);
        assert_eq!(sys.rank(), 3);
    }

    #[test]
    fn solves_mod_one() {
        // 2x = 1/2 mod 1
        let sys = IntSystem::new(&dense(&[&[2]]), 1).unwrap();
        let x = sys.solve_mod_one(&[Rat::new(1, 2)]).unwrap();
        assert_eq!(frac(x[0] * Rat::from_integer(2)), Rat::new(1, 2));
        // x - y = 1/3, y - x = 1/3 is inconsistent
        let sys = IntSystem::new(&dense(&[&[1, -1], &[-1, 1]]), 2).unwrap();
        assert!(sys.solve_mod_one(&[Rat::new(1, 3), Rat::new(1, 3)]).is_none());
        assert!(sys.solve_mod_one(&[Rat::new(1, 3), Rat::new(2, 3)]).is_some());
    }

    #[test]
    fn scalar_system_needs_rational_roots() {
        let sys = IntSystem::new(&dense(&[&[2]]), 1).unwrap();
        let x = sys.solve_scalars(&[Scalar::from_integer(9).unwrap()]).unwrap().unwrap();
        assert_eq!(x[0] * x[0], Scalar::from_integer(9).unwrap());
        assert!(matches!(sys.solve_scalars(&[Scalar::from_integer(2).unwrap()]), Err(Error::IrrationalRoot { .. })));
    }

    #[test]
    fn rational_solve() {
        let a =
            vec![vec![Rat::from_integer(1), Rat::from_integer(2)], vec![Rat::from_integer(2), Rat::from_integer(4)]];
        assert_eq!(rational::rank(&a), 1);
        let x = rational::solve(&a, &[Rat::from_integer(3), Rat::from_integer(6)]).unwrap();
        assert_eq!(rational::apply(&a, &x), vec![Rat::from_integer(3), Rat::from_integer(6)]);
        assert!(rational::solve(&a, &[Rat::from_integer(3), Rat::from_integer(7)]).is_none());
    }
}
