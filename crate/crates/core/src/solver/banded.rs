use crate::sparse::SparseOperator;
use crate::{Error, Result};

/// LU factorisation with partial pivoting of a banded matrix.
///
/// Row `r` stores columns `r − kl ..= r + kl + ku`; the extra `kl`
/// superdiagonals hold the fill created by row interchanges. Multipliers
/// overwrite the eliminated entries and are applied together with the
/// recorded interchanges during the forward sweep.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    pub fn factor(a: &SparseOperator) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch {
                context: "LU factorisation (square matrix)",
                expected: a.nrows(),
                found: a.ncols(),
            });
        }
        let n = a.nrows();
        let (kl, ku) = a.bandwidths();
        let width = 2 * kl + ku + 1;
        let mut lu = Self {
            n,
            kl,
            ku,
            width,
            data: vec![0.0; n * width],
            pivots: vec![0; n],
        };
        for (r, c, v) in a.iter() {
            let idx = lu.index(r, c);
            lu.data[idx] = v;
        }
        lu.eliminate()?;
        Ok(lu)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    #[inline]
    fn index(&self, r: usize, c: usize) -> usize {
        debug_assert!(c + self.kl >= r && c <= r + self.kl + self.ku);
        r * self.width + (c + self.kl - r)
    }

    fn eliminate(&mut self) -> Result<()> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let upper = (k + kl + ku).min(n - 1);
            let mut p = k;
            let mut best = self.data[self.index(k, k)].abs();
            for r in k + 1..=last {
                let v = self.data[self.index(r, k)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 || best <= scale * f64::EPSILON * 1e-6 {
                return Err(Error::Singular { pivot: k });
            }
            self.pivots[k] = p;
            if p != k {
                for c in k..=upper {
                    let (i, j) = (self.index(k, c), self.index(p, c));
                    self.data.swap(i, j);
                }
            }
            let pivot = self.data[self.index(k, k)];
            let len = upper - k;
            let pivot_start = self.index(k, k) + 1;
            for r in k + 1..=last {
                let lk = self.index(r, k);
                let l = self.data[lk] / pivot;
                self.data[lk] = l;
                if l == 0.0 || len == 0 {
                    continue;
                }
                // Row k lies before row r in storage.
                let (head, tail) = self.data.split_at_mut(lk + 1);
                let source = &head[pivot_start..pivot_start + len];
                for (t, s) in tail[..len].iter_mut().zip(source) {
                    *t -= l * s;
                }
            }
        }
        Ok(())
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk != 0.0 {
                for r in k + 1..=(k + kl).min(n - 1) {
                    b[r] -= self.data[self.index(r, k)] * bk;
                }
            }
        }
        for k in (0..n).rev() {
            let upper = (k + kl + ku).min(n - 1);
            let start = self.index(k, k);
            let row = &self.data[start + 1..start + 1 + (upper - k)];
            let s: f64 = row.iter().zip(&b[k + 1..=upper]).map(|(a, x)| a * x).sum();
            b[k] = (b[k] - s) / self.data[start];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}
