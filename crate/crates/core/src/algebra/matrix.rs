
use super::rat::LaurentRat;
use super::Context;
use crate::{Error, Result};

/// Dense matrix over the Laurent rational function field.
///
/// Rectangular shapes are allowed so that blocks of a square matrix are
/// first-class values; the group-theoretic entry points all work with square
/// matrices whose size is the ambient group rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FracMatrix {
    ctx: Context,
    rows: usize,
    cols: usize,
    data: Vec<LaurentRat>,
}

impl FracMatrix {
    pub fn zeros(ctx: &Context, rows: usize, cols: usize) -> Self {
        FracMatrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![LaurentRat::zero(ctx); rows * cols],
        }
    }

    pub fn identity(ctx: &Context, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, LaurentRat::one(ctx));
        }
        m
    }

    pub fn from_fn<F>(ctx: &Context, rows: usize, cols: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> LaurentRat,
    {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        FracMatrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(ctx: &Context, rows: Vec<Vec<LaurentRat>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            for e in row {
                e.ctx().check_same(ctx)?;
                data.push(e);
            }
        }
        Ok(FracMatrix {
            ctx: ctx.clone(),
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentRat {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: LaurentRat) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(LaurentRat::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        (0..self.rows).all(|r| {
            (0..self.cols).all(|c| {
                let e = self.get(r, c);
                if r == c {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_shape(rhs, self.rows, self.cols)?;
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(FracMatrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_shape(rhs, self.rows, self.cols)?;
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(FracMatrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.ctx.check_same(&rhs.ctx)?;
        if self.cols != rhs.rows {
            return Err(Error::InvalidInput(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(&self.ctx, self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let mut acc = LaurentRat::zero(&self.ctx);
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = rhs.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.ctx, self.cols, self.rows, |r, c| {
            self.get(c, r).clone()
        })
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        assert!(r0 + h <= self.rows && c0 + w <= self.cols, "block out of bounds");
        Self::from_fn(&self.ctx, h, w, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, m: &Self) {
        assert!(
            r0 + m.rows <= self.rows && c0 + m.cols <= self.cols,
            "block out of bounds"
        );
        for r in 0..m.rows {
            for c in 0..m.cols {
                self.set(r0 + r, c0 + c, m.get(r, c).clone());
            }
        }
    }

    /// Exact determinant by fraction-field elimination.
    pub fn det(&self) -> Result<LaurentRat> {
        if !self.is_square() {
            return Err(Error::InvalidInput("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.data.clone();
        let at = |d: &Vec<LaurentRat>, r: usize, c: usize| d[r * n + c].clone();
        let mut det = LaurentRat::one(&self.ctx);
        let mut negate = false;
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !m[r * n + col].is_zero());
            let Some(p) = pivot_row else {
                return Ok(LaurentRat::zero(&self.ctx));
            };
            if p != col {
                for c in 0..n {
                    m.swap(p * n + c, col * n + c);
                }
                negate = !negate;
            }
            let pivot = at(&m, col, col);
            det = &det * &pivot;
            for r in (col + 1)..n {
                let factor = &at(&m, r, col) / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = &at(&m, r, c) - &(&factor * &at(&m, col, c));
                    m[r * n + c] = v;
                }
            }
        }
        if negate {
            det = -&det;
        }
        Ok(det)
    }

    /// Exact inverse via Gauss–Jordan; `None` for singular matrices.
    pub fn inverse(&self) -> Result<Option<FracMatrix>> {
        if !self.is_square() {
            return Err(Error::InvalidInput("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(&self.ctx, n);
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !m.get(r, col).is_zero());
            let Some(p) = pivot_row else {
                return Ok(None);
            };
            if p != col {
                for c in 0..n {
                    let a = m.get(p, c).clone();
                    let b = m.get(col, c).clone();
                    m.set(p, c, b);
                    m.set(col, c, a);
                    let a = inv.get(p, c).clone();
                    let b = inv.get(col, c).clone();
                    inv.set(p, c, b);
                    inv.set(col, c, a);
                }
            }
            let pivot = m.get(col, col).clone();
            let scale = pivot.inv().expect("pivot is nonzero");
            for c in 0..n {
                m.set(col, c, &scale * m.get(col, c));
                inv.set(col, c, &scale * inv.get(col, c));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = m.get(r, c) - &(&factor * m.get(col, c));
                    m.set(r, c, v);
                    let v = inv.get(r, c) - &(&factor * inv.get(col, c));
                    inv.set(r, c, v);
                }
            }
        }
        Ok(Some(inv))
    }

    /// Factors a square matrix as `u · d · l` relative to the block sizes
    /// `(a, n-a)`: `u` block-upper unipotent, `d` block diagonal, `l`
    /// block-lower unipotent. Requires both diagonal corner blocks and the
    /// resulting Schur complement to be invertible over the fraction field;
    /// otherwise the matrix lies outside the open cell and
    /// [`Error::DecompositionFails`] is returned.
    pub fn uml_decompose(&self, a: usize) -> Result<(FracMatrix, FracMatrix, FracMatrix)> {
        if !self.is_square() {
            return Err(Error::InvalidInput(
                "block factorisation needs a square matrix".into(),
            ));
        }
        let n = self.rows;
        if a == 0 || a >= n {
            return Err(Error::InvalidInput(format!(
                "block split {a} out of range for size {n}"
            )));
        }
        let b = n - a;
        let blk_a = self.block(0, 0, a, a);
        let blk_b = self.block(0, a, a, b);
        let blk_c = self.block(a, 0, b, a);
        let blk_d = self.block(a, a, b, b);
        if blk_a.det()?.is_zero() {
            return Err(Error::DecompositionFails(
                "top-left diagonal block is singular".into(),
            ));
        }
        let d_inv = blk_d.inverse()?.ok_or_else(|| {
            Error::DecompositionFails("bottom-right diagonal block is singular".into())
        })?;
        let b_dinv = blk_b.mul(&d_inv)?;
        let dinv_c = d_inv.mul(&blk_c)?;
        let schur = blk_a.sub(&b_dinv.mul(&blk_c)?)?;
        if schur.det()?.is_zero() {
            return Err(Error::DecompositionFails(
                "Schur complement is singular".into(),
            ));
        }
        let mut u = Self::identity(&self.ctx, n);
        u.set_block(0, a, &b_dinv);
        let mut d = Self::zeros(&self.ctx, n, n);
        d.set_block(0, 0, &schur);
        d.set_block(a, a, &blk_d);
        let mut l = Self::identity(&self.ctx, n);
        l.set_block(a, 0, &dinv_c);
        Ok((u, d, l))
    }

    /// Entrywise map, preserving shape.
    pub fn map<F>(&self, mut f: F) -> Self
    where
        F: FnMut(&LaurentRat) -> LaurentRat,
    {
        FracMatrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| f(e)).collect(),
        }
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Result<LaurentRat> {
        if !self.is_square() {
            return Err(Error::InvalidInput("trace of non-square matrix".into()));
        }
        let mut acc = LaurentRat::zero(&self.ctx);
        for i in 0..self.rows {
            acc = &acc + self.get(i, i);
        }
        Ok(acc)
    }

    fn check_shape(&self, rhs: &Self, rows: usize, cols: usize) -> Result<()> {
        self.ctx.check_same(&rhs.ctx)?;
        if rhs.rows != rows || rhs.cols != cols {
            return Err(Error::InvalidInput(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }
}

/// Builds a matrix of fresh symbols `prefix_r_c` over a context that must
/// already contain those names; see [`symbol_context`].
pub(crate) fn symbol_block(ctx: &Context, prefix: &str, rows: usize, cols: usize) -> FracMatrix {
    FracMatrix::from_fn(ctx, rows, cols, |r, c| {
        LaurentRat::var(ctx, &format!("{prefix}_{}_{}", r + 1, c + 1))
            .expect("symbol in context")
    })
}

/// Variable names for an `rows × cols` block of symbols named
/// `prefix_r_c` (1-based indices).
pub(crate) fn symbol_names(prefix: &str, rows: usize, cols: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(rows * cols);
    for r in 1..=rows {
        for c in 1..=cols {
            names.push(format!("{prefix}_{r}_{c}"));
        }
    }
    names
}
