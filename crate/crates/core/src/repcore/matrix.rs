use std::fmt;

use super::field::{Fq, FqContext};

/// Dense row-major matrix over `F_q`. The field context travels separately.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FqMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<u32> = self.row(r).iter().map(|x| x.0).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMatrix {
            rows,
            cols,
            data: vec![Fq::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fq::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Fq>>) -> Self {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        FqMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fq {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fq) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fq] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Fq> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &FqMatrix, f: &FqContext) -> FqMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = FqMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = f.mul(a, other.get(l, j));
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, prod));
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &FqMatrix, f: &FqContext) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FqMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u64, f: &FqContext) -> FqMatrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = FqMatrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &FqMatrix) -> FqMatrix {
        let mut out = FqMatrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, self.cols + c, other.get(r, c));
            }
        }
        out
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self, f: &FqContext) -> usize {
        let mut basis = EchelonBasis::new(self.cols);
        for r in 0..self.rows {
            basis.insert(self.row(r).to_vec(), f);
        }
        basis.rank()
    }

    pub fn kernel_dim(&self, f: &FqContext) -> usize {
        self.cols - self.rank(f)
    }
}

/// Incrementally maintained reduced row-echelon basis of a subspace of `F_q^n`.
///
/// Vectors can be streamed in one at a time, which keeps memory at
/// `rank * n` even when the spanning set is much larger than the space.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    len: usize,
    /// Rows with pivot entry 1.
    rows: Vec<Vec<Fq>>,
    pivots: Vec<usize>,
    /// `pivot_row[c]` is the index of the row whose pivot is column `c`.
    pivot_row: Vec<Option<usize>>,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        EchelonBasis {
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![None; len],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` to the spanning set; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<Fq>, f: &FqContext) -> bool {
        assert_eq!(v.len(), self.len);
        if self.rows.len() == self.len {
            return false;
        }
        for c in 0..self.len {
            let x = v[c];
            if x.is_zero() {
                continue;
            }
            match self.pivot_row[c] {
                Some(r) => {
                    let neg = f.neg(x);
                    let row = &self.rows[r];
                    for j in c..self.len {
                        let y = row[j];
                        if !y.is_zero() {
                            v[j] = f.add(v[j], f.mul(neg, y));
                        }
                    }
                }
                None => {
                    let inv = f.inv(x).expect("nonzero pivot");
                    for y in v[c..].iter_mut() {
                        *y = f.mul(*y, inv);
                    }
                    self.pivot_row[c] = Some(self.rows.len());
                    self.pivots.push(c);
                    self.rows.push(v);
                    return true;
                }
            }
        }
        false
    }
}
