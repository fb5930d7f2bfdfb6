//! Dense matrices over `F_q` with Gaussian elimination.

use crate::ff::{FieldElement, FieldTower, Level};

/// A dense `rows × cols` matrix over the constant field `F_q` of a tower.
///
/// Entries are stored as flat coordinate vectors (`s` words per entry).
#[derive(Clone, Debug)]
pub struct FqMatrix {
    tower: FieldTower,
    rows: usize,
    cols: usize,
    s: usize,
    data: Vec<u64>,
}

impl FqMatrix {
    pub fn zeros(tower: &FieldTower, rows: usize, cols: usize) -> Self {
        let s = tower.s();
        FqMatrix { tower: tower.clone(), rows, cols, s, data: vec![0; rows * cols * s] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn at(&self, i: usize, j: usize) -> &[u64] {
        let o = (i * self.cols + j) * self.s;
        &self.data[o..o + self.s]
    }

    fn is_zero_at(&self, i: usize, j: usize) -> bool {
        self.at(i, j).iter().all(|&c| c == 0)
    }

    /// Sets entry `(i, j)`; `value` must live in `F_q` (or `F_p`).
    pub fn set(&mut self, i: usize, j: usize, value: FieldElement) {
        let v = value.embed(Level::Fq).expect("matrix entries live in F_q");
        let o = (i * self.cols + j) * self.s;
        self.data[o..o + self.s].copy_from_slice(v.coeffs());
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.tower.element(Level::Fq, self.at(i, j)).expect("entry fits")
    }

    /// `row[i] ← row[i] − c · row[j]`, starting at column `from`.
    fn sub_row_multiple(&mut self, i: usize, j: usize, c: &[u64], from: usize) {
        let (s, p, cols) = (self.s, self.tower.p(), self.cols);
        for col in from..cols {
            let src = (j * cols + col) * s;
            if self.data[src..src + s].iter().all(|&x| x == 0) {
                continue;
            }
            let dst = (i * cols + col) * s;
            if s == 1 {
                let t = c[0] * self.data[src] % p;
                let d = &mut self.data[dst];
                *d = if *d >= t { *d - t } else { *d + p - t };
            } else {
                let t = self.tower.fq_mul_raw(c, &self.data[src..src + s]);
                for u in 0..s {
                    let d = &mut self.data[dst + u];
                    *d = if *d >= t[u] { *d - t[u] } else { *d + p - t[u] };
                }
            }
        }
    }

    fn scale_row(&mut self, i: usize, c: &[u64], from: usize) {
        let (s, p, cols) = (self.s, self.tower.p(), self.cols);
        for col in from..cols {
            let o = (i * cols + col) * s;
            if s == 1 {
                self.data[o] = self.data[o] * c[0] % p;
            } else {
                let t = self.tower.fq_mul_raw(c, &self.data[o..o + s]);
                self.data[o..o + s].copy_from_slice(&t);
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.cols * self.s;
        let (lo, hi) = (a.min(b), a.max(b));
        let (left, right) = self.data.split_at_mut(hi * w);
        left[lo * w..(lo + 1) * w].swap_with_slice(&mut right[..w]);
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    ///
    /// The pivot in each column is the first row (from the current one
    /// down) with a nonzero entry.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !self.is_zero_at(r, col)) else {
                continue;
            };
            self.swap_rows(row, pr);
            let inv = self.get(row, col).inv().expect("pivot is nonzero");
            self.scale_row(row, inv.coeffs(), col);
            for r in 0..self.rows {
                if r != row && !self.is_zero_at(r, col) {
                    let c: Vec<u64> = self.at(r, col).to_vec();
                    self.sub_row_multiple(r, row, &c, col);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column
    /// in increasing column order.
    pub fn kernel(&self) -> Vec<Vec<FieldElement>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        let zero = self.tower.zero(Level::Fq);
        let one = self.tower.one(Level::Fq);
        (0..self.cols)
            .filter(|&f| is_pivot[f].is_none())
            .map(|f| {
                let mut v = vec![zero.clone(); self.cols];
                v[f] = one.clone();
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = -&m.get(r, f);
                }
                v
            })
            .collect()
    }

    /// Solutions of `M x = b`: `None` when inconsistent, otherwise a
    /// particular solution and the kernel basis.
    pub fn solve(&self, b: &[FieldElement]) -> Option<(Vec<FieldElement>, Vec<Vec<FieldElement>>)> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FqMatrix::zeros(&self.tower, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let o = (i * self.cols + j) * self.s;
                let d = (i * (self.cols + 1) + j) * self.s;
                aug.data[d..d + self.s].copy_from_slice(&self.data[o..o + self.s]);
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.tower.zero(Level::Fq); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some((x, self.kernel()))
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        (0..self.rows)
            .map(|i| {
                let mut acc = self.tower.zero(Level::Fq);
                for (j, vj) in v.iter().enumerate() {
                    acc = &acc + &(&self.get(i, j) * vj);
                }
                acc
            })
            .collect()
    }
}
