//! Dense exact linear algebra: Smith normal form over Z and rank over F_p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                m.data[i * cols + j] = BigInt::from(x);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= factor * row[src], on columns `from..`
    fn row_axpy(&mut self, dst: usize, src: usize, factor: &BigInt, from: usize) {
        for j in from..self.cols {
            let s = &self.data[src * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let delta = s * factor;
            self.data[dst * self.cols + j] -= delta;
        }
    }

    /// col[dst] -= factor * col[src], on rows `from..`
    fn col_axpy(&mut self, dst: usize, src: usize, factor: &BigInt, from: usize) {
        for i in from..self.rows {
            let s = &self.data[i * self.cols + src];
            if s.is_zero() {
                continue;
            }
            let delta = s * factor;
            self.data[i * self.cols + dst] -= delta;
        }
    }

    fn min_abs_entry(&self, from: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in from..self.rows {
            for j in from..self.cols {
                let x = self.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.abs() < self.get(bi, bj).abs(),
                };
                if better {
                    best = Some((i, j));
                    if x.abs() == BigInt::from(1) {
                        return best;
                    }
                }
            }
        }
        best
    }
}

/// Nonzero elementary divisors `d_1 | d_2 | ...` of an integer matrix,
/// all positive.
pub fn elementary_divisors(matrix: &IntMatrix) -> Vec<BigInt> {
    let mut m = matrix.clone();
    let steps = m.rows.min(m.cols);
    let mut divisors = Vec::new();
    for t in 0..steps {
        let Some((pi, pj)) = m.min_abs_entry(t) else {
            break;
        };
        m.swap_rows(t, pi);
        m.swap_cols(t, pj);
        loop {
            // clear column t below the pivot
            let mut dirty = false;
            for i in t + 1..m.rows {
                if m.get(i, t).is_zero() {
                    continue;
                }
                let q = m.get(i, t).div_floor(m.get(t, t));
                m.row_axpy(i, t, &q, t);
                if !m.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..m.cols {
                if m.get(t, j).is_zero() {
                    continue;
                }
                let q = m.get(t, j).div_floor(m.get(t, t));
                m.col_axpy(j, t, &q, t);
                if !m.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a smaller remainder appeared in row or column t
                let (bi, bj) = smallest_in_cross(&m, t);
                m.swap_rows(t, bi);
                m.swap_cols(t, bj);
                continue;
            }
            // pivot must divide the remaining block
            let pivot = m.get(t, t).clone();
            let offender = (t + 1..m.rows).find(|&i| {
                (t + 1..m.cols).any(|j| !m.get(i, j).is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::from(-1);
                    m.row_axpy(t, i, &one, t);
                }
                None => break,
            }
        }
        divisors.push(m.get(t, t).abs());
    }
    divisors
}

fn smallest_in_cross(m: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut best_abs = m.get(t, t).abs();
    for i in t + 1..m.rows {
        let x = m.get(i, t);
        if !x.is_zero() && (best_abs.is_zero() || x.abs() < best_abs) {
            best = (i, t);
            best_abs = x.abs();
        }
    }
    for j in t + 1..m.cols {
        let x = m.get(t, j);
        if !x.is_zero() && (best_abs.is_zero() || x.abs() < best_abs) {
            best = (t, j);
            best_abs = x.abs();
        }
    }
    best
}

/// Rank over F_p of a matrix with integer entries.
pub fn rank_mod_p(rows: &[Vec<i64>], p: u64) -> usize {
    let p = p as i128;
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| (x as i128).rem_euclid(p) as u64).collect())
        .collect();
    rank_reduced_mod_p(&mut m, p as u64)
}

/// Rank over F_p; entries must already lie in `0..p`.
pub fn rank_reduced_mod_p(m: &mut [Vec<u64>], p: u64) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..nrows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = inverse_mod(m[rank][col], p);
        for x in m[rank].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == rank || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, &y) in row[col..].iter_mut().zip(&pivot[col..]) {
                *x = (*x + p - mul_mod(f, y, p)) % p;
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inverse_mod(a: u64, p: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(p as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(p as i128) as u64
}
