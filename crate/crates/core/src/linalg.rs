//! Exact matrix algebra over the principal ideal domain `F_p[s]` and the chain
//! ring `F_p[s]/(s^m)`: Smith normal form, kernels, and linear solvers.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{inv_mod, Poly};

#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
    modulus: Option<u64>,
}

impl PolyMatrix {
    pub fn zero(p: u32, rows: usize, cols: usize) -> Self {
        PolyMatrix { p, rows, cols, data: vec![Poly::zero(p); rows * cols], modulus: None }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(p));
        }
        m
    }

    /// `c · I_n`.
    pub fn scalar(p: u32, n: usize, c: &Poly) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn diagonal(p: u32, rows: usize, cols: usize, diag: &[Poly]) -> Self {
        let mut m = Self::zero(p, rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn from_fn(p: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PolyMatrix { p, rows, cols, data, modulus: None }
    }

    pub fn from_rows(p: u32, rows: Vec<Vec<Poly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(PolyMatrix { p, rows: r, cols: c, data: rows.into_iter().flatten().collect(), modulus: None })
    }

    /// Column vector.
    pub fn column(p: u32, entries: Vec<Poly>) -> Self {
        let n = entries.len();
        PolyMatrix { p, rows: n, cols: 1, data: entries, modulus: None }
    }

    /// Reinterprets the matrix over `F_p[s]/(s^m)`, reducing every entry.
    pub fn with_modulus(mut self, m: u64) -> Self {
        for e in &mut self.data {
            *e = e.truncate(m);
        }
        self.modulus = Some(m);
        self
    }

    pub fn without_modulus(mut self) -> Self {
        self.modulus = None;
        self
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly) {
        let v = match self.modulus {
            Some(m) => v.truncate(m),
            None => v,
        };
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn col(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Poly> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    fn reduce(&self, x: Poly) -> Poly {
        match self.modulus {
            Some(m) => x.truncate(m),
            None => x,
        }
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        let mut out = self.clone();
        for e in &mut out.data {
            *e = self.reduce(f(e));
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::from_fn(self.p, self.cols, self.rows, |i, j| self.get(j, i).clone());
        t.modulus = self.modulus;
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.p, self.rows, other.cols);
        out.modulus = self.modulus.or(other.modulus);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        if let Some(m) = out.modulus {
            for e in &mut out.data {
                *e = e.truncate(m);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("matrix sum of different shapes".into()));
        }
        let mut out = self.clone();
        out.modulus = self.modulus.or(other.modulus);
        for (idx, e) in out.data.iter_mut().enumerate() {
            *e = &*e + &other.data[idx];
        }
        Ok(out.map(|x| x.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Poly::constant(self.p, self.p - 1)))
    }

    pub fn scale(&self, c: &Poly) -> Self {
        self.map(|x| x * c)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::Dimension("hstack row mismatch".into()));
        }
        let mut out = Self::from_fn(self.p, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        });
        out.modulus = self.modulus.or(other.modulus);
        Ok(out)
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let mut out = Self::from_fn(self.p, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        });
        out.modulus = self.modulus.or(other.modulus);
        Ok(out)
    }

    /// Block diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.p, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out.modulus = self.modulus.or(other.modulus);
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::from_fn(self.p, self.rows * other.rows, self.cols * other.cols, |i, j| {
            let (i1, i2) = (i / other.rows, i % other.rows);
            let (j1, j2) = (j / other.cols, j % other.cols);
            let a = self.get(i1, j1);
            if a.is_zero() {
                return Poly::zero(self.p);
            }
            a * other.get(i2, j2)
        });
        out.modulus = self.modulus.or(other.modulus);
        out
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut out = Self::from_fn(self.p, self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone());
        out.modulus = self.modulus;
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut out = Self::from_fn(self.p, rows.len(), self.cols, |i, j| self.get(rows[i], j).clone());
        out.modulus = self.modulus;
        out
    }

    /// Drops zero columns.
    pub fn prune_zero_cols(&self) -> Self {
        let keep: Vec<usize> = (0..self.cols).filter(|&j| (0..self.rows).any(|i| !self.get(i, j).is_zero())).collect();
        self.select_cols(&keep)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Poly::one(self.p));
        }
        let mut a = self.clone().without_modulus();
        let mut sign_neg = false;
        let mut prev = Poly::one(self.p);
        for k in 0..n.saturating_sub(1) {
            if a.get(k, k).is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !a.get(r, k).is_zero()) else {
                    return Ok(Poly::zero(self.p));
                };
                a.swap_rows(k, r);
                sign_neg = !sign_neg;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(a.get(i, j) * a.get(k, k)) - &(a.get(i, k) * a.get(k, j));
                    let v = num.exact_div(&prev).expect("Bareiss division is exact");
                    a.set(i, j, v);
                }
                a.set(i, k, Poly::zero(self.p));
            }
            prev = a.get(k, k).clone();
        }
        let d = a.get(n - 1, n - 1).clone();
        let d = if sign_neg { -&d } else { d };
        Ok(match self.modulus {
            Some(m) => d.truncate(m),
            None => d,
        })
    }

    /// Unimodular over `F_p[s]` (determinant a nonzero constant) or over the
    /// chain ring (determinant with nonzero constant term).
    pub fn is_unimodular(&self) -> bool {
        match self.det() {
            Ok(d) => match self.modulus {
                Some(_) => d.coeff(0) != 0,
                None => d.is_constant() && !d.is_zero(),
            },
            Err(_) => false,
        }
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

    /// `row[t] += q · row[s]`.
    fn row_axpy(&mut self, t: usize, s: usize, q: &Poly) {
        for j in 0..self.cols {
            let x = self.get(s, j);
            if x.is_zero() {
                continue;
            }
            let v = self.get(t, j) + &(q * x);
            self.set(t, j, v);
        }
    }

    /// `col[t] += q · col[s]`.
    fn col_axpy(&mut self, t: usize, s: usize, q: &Poly) {
        for i in 0..self.rows {
            let x = self.get(i, s);
            if x.is_zero() {
                continue;
            }
            let v = self.get(i, t) + &(q * x);
            self.set(i, t, v);
        }
    }

    fn scale_row(&mut self, i: usize, c: &Poly) {
        for j in 0..self.cols {
            let v = self.get(i, j) * c;
            self.set(i, j, v);
        }
    }

    fn scale_col(&mut self, j: usize, c: &Poly) {
        for i in 0..self.rows {
            let v = self.get(i, j) * c;
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")?;
        if let Some(m) = self.modulus {
            write!(f, " mod s^{m}")?;
        }
        Ok(())
    }
}

/// Smith normal form `A = U·D·W`, together with the forward transforms
/// `left·A·right = D` (`left = U⁻¹`, `right = W⁻¹`).
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: PolyMatrix,
    pub d: PolyMatrix,
    pub w: PolyMatrix,
    pub left: PolyMatrix,
    pub right: PolyMatrix,
    /// The `min(rows, cols)` diagonal entries of `D`, monic (or `s^v` over the
    /// chain ring), zeros last.
    pub invariant_factors: Vec<Poly>,
    pub rank: usize,
}

struct Elim {
    d: PolyMatrix,
    left: PolyMatrix,
    u: PolyMatrix,
    right: PolyMatrix,
    w: PolyMatrix,
}

impl Elim {
    fn row_axpy(&mut self, t: usize, s: usize, q: &Poly) {
        self.d.row_axpy(t, s, q);
        self.left.row_axpy(t, s, q);
        self.u.col_axpy(s, t, &-q);
    }

    fn col_axpy(&mut self, t: usize, s: usize, q: &Poly) {
        self.d.col_axpy(t, s, q);
        self.right.col_axpy(t, s, q);
        self.w.row_axpy(s, t, &-q);
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.left.swap_rows(a, b);
        self.u.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.right.swap_cols(a, b);
        self.w.swap_rows(a, b);
    }

    fn scale_row(&mut self, i: usize, c: u32) {
        let p = self.d.p;
        self.d.scale_row(i, &Poly::constant(p, c));
        self.left.scale_row(i, &Poly::constant(p, c));
        self.u.scale_col(i, &Poly::constant(p, inv_mod(c, p)));
    }
}

/// Smith normal form over `F_p[s]`, or over `F_p[s]/(s^m)` when the matrix
/// carries a modulus (computed by lifting, eliminating, and reducing).
pub fn snf(a: &PolyMatrix) -> SnfResult {
    let p = a.p;
    let (r, c) = (a.rows, a.cols);
    let mut e = Elim {
        d: a.clone().without_modulus(),
        left: PolyMatrix::identity(p, r),
        u: PolyMatrix::identity(p, r),
        right: PolyMatrix::identity(p, c),
        w: PolyMatrix::identity(p, c),
    };
    let mut k = 0;
    while k < r.min(c) {
        // Minimal-degree pivot, ties broken row-major.
        let mut best: Option<(u64, usize, usize)> = None;
        for i in k..r {
            for j in k..c {
                if let Some(deg) = e.d.get(i, j).degree() {
                    if best.is_none_or(|b| deg < b.0) {
                        best = Some((deg, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        e.swap_rows(k, pi);
        e.swap_cols(k, pj);
        loop {
            let piv = e.d.get(k, k).clone();
            for i in k + 1..r {
                if !e.d.get(i, k).is_zero() {
                    let (q, _) = e.d.get(i, k).divrem(&piv);
                    e.row_axpy(i, k, &-&q);
                }
            }
            for j in k + 1..c {
                if !e.d.get(k, j).is_zero() {
                    let (q, _) = e.d.get(k, j).divrem(&piv);
                    e.col_axpy(j, k, &-&q);
                }
            }
            // Remainders left in row/column k become the next pivot.
            let mut rem: Option<(u64, usize, usize)> = None;
            for i in k + 1..r {
                if let Some(deg) = e.d.get(i, k).degree() {
                    if rem.is_none_or(|b| deg < b.0) {
                        rem = Some((deg, i, k));
                    }
                }
            }
            for j in k + 1..c {
                if let Some(deg) = e.d.get(k, j).degree() {
                    if rem.is_none_or(|b| deg < b.0) {
                        rem = Some((deg, k, j));
                    }
                }
            }
            if let Some((_, i, j)) = rem {
                if i != k {
                    e.swap_rows(k, i);
                } else {
                    e.swap_cols(k, j);
                }
                continue;
            }
            let piv = e.d.get(k, k).clone();
            let bad_row = (k + 1..r).find(|&i| (k + 1..c).any(|j| !piv.divides(e.d.get(i, j))));
            if let Some(i) = bad_row {
                e.row_axpy(k, i, &Poly::one(p));
                continue;
            }
            break;
        }
        let lc = e.d.get(k, k).leading_coeff();
        if lc != 1 {
            e.scale_row(k, inv_mod(lc, p));
        }
        k += 1;
    }
    let Elim { mut d, mut left, mut u, mut right, mut w } = e;
    if let Some(m) = a.modulus {
        d = d.with_modulus(m);
        left = left.with_modulus(m);
        u = u.with_modulus(m);
        right = right.with_modulus(m);
        w = w.with_modulus(m);
        // Normalize each nonzero diagonal entry s^v·unit to s^v.
        for i in 0..r.min(c) {
            let x = d.get(i, i).clone();
            let Some(v) = x.valuation() else { continue };
            let unit = x.exact_div(&Poly::s_pow(p, v)).expect("valuation divides");
            let unit_inv = unit.inverse_mod_s_pow(m).expect("unit in chain ring");
            d.set(i, i, Poly::s_pow(p, v));
            u.scale_col(i, &unit);
            left.scale_row(i, &unit_inv);
        }
    }
    let invariant_factors: Vec<Poly> = (0..r.min(c)).map(|i| d.get(i, i).clone()).collect();
    let rank = invariant_factors.iter().filter(|x| !x.is_zero()).count();
    SnfResult { u, d, w, left, right, invariant_factors, rank }
}

impl SnfResult {
    /// Solves `A·X = B` column by column; `None` if some column is not in the
    /// column span.
    pub fn solve_matrix(&self, b: &PolyMatrix) -> Result<Option<PolyMatrix>> {
        let (r, c) = (self.d.rows, self.d.cols);
        if b.rows != r {
            return Err(Error::Dimension(format!("rhs has {} rows, matrix has {r}", b.rows)));
        }
        let p = self.d.p;
        let modulus = self.d.modulus;
        let pb = self.left.mul(b)?;
        let mut y = PolyMatrix::zero(p, c, b.cols);
        for col in 0..b.cols {
            for i in 0..r {
                let rhs = pb.get(i, col);
                let di = if i < c { self.d.get(i, i) } else { &Poly::zero(p) };
                if di.is_zero() {
                    if !rhs.is_zero() {
                        return Ok(None);
                    }
                    continue;
                }
                let yi = match modulus {
                    None => match rhs.exact_div(di) {
                        Some(q) => q,
                        None => return Ok(None),
                    },
                    Some(m) => {
                        // di = s^v in the chain ring.
                        let v = di.valuation().unwrap();
                        match rhs.valuation() {
                            None => Poly::zero(p),
                            Some(w) if w >= v => rhs.exact_div(&Poly::s_pow(p, v)).unwrap().truncate(m),
                            Some(_) => return Ok(None),
                        }
                    }
                };
                y.set(i, col, yi);
            }
        }
        let mut x = self.right.mul(&y)?;
        if let Some(m) = modulus {
            x = x.with_modulus(m);
        }
        Ok(Some(x))
    }

    /// Columns generating the kernel of `A`.
    pub fn kernel(&self) -> PolyMatrix {
        let p = self.d.p;
        let c = self.d.cols;
        let mut gens: Vec<Vec<Poly>> = Vec::new();
        for j in 0..c {
            let dj = if j < self.d.rows { self.d.get(j, j).clone() } else { Poly::zero(p) };
            let scale = match (self.d.modulus, dj.valuation()) {
                (_, None) => Poly::one(p),
                (None, Some(_)) => continue,
                (Some(m), Some(v)) => Poly::s_pow(p, m - v.min(m)),
            };
            let col: Vec<Poly> = self.right.col(j).iter().map(|x| x * &scale).collect();
            gens.push(col);
        }
        let mut k = PolyMatrix::zero(p, c, gens.len());
        for (j, g) in gens.into_iter().enumerate() {
            for (i, x) in g.into_iter().enumerate() {
                k.set(i, j, x);
            }
        }
        match self.d.modulus {
            Some(m) => k.with_modulus(m).prune_zero_cols(),
            None => k,
        }
    }
}

pub fn kernel_basis(a: &PolyMatrix) -> PolyMatrix {
    snf(a).kernel()
}

/// Solves `A·x = b`; `None` when `b` is not in the column span.
pub fn solve(a: &PolyMatrix, b: &[Poly]) -> Result<Option<Vec<Poly>>> {
    if b.len() != a.rows {
        return Err(Error::Dimension(format!("rhs length {} vs {} rows", b.len(), a.rows)));
    }
    let mut rhs = PolyMatrix::column(a.p, b.to_vec());
    rhs.modulus = a.modulus;
    Ok(snf(a).solve_matrix(&rhs)?.map(|x| x.col(0)))
}

pub fn solve_matrix(a: &PolyMatrix, b: &PolyMatrix) -> Result<Option<PolyMatrix>> {
    snf(a).solve_matrix(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: u32, e: u64) -> Poly {
        Poly::s_pow(p, e)
    }

    fn check_snf(a: &PolyMatrix) -> SnfResult {
        let r = snf(a);
        let prod = r.u.mul(&r.d).unwrap().mul(&r.w).unwrap();
        assert_eq!(prod, *a, "A = U D W");
        assert_eq!(r.left.mul(a).unwrap().mul(&r.right).unwrap(), r.d);
        assert!(r.u.is_unimodular() && r.w.is_unimodular());
        r
    }

    #[test]
    fn diagonal_input_is_fixed() {
        let a = PolyMatrix::diagonal(2, 2, 2, &[s(2, 1), s(2, 2)]);
        let r = check_snf(&a);
        assert_eq!(r.invariant_factors, vec![s(2, 1), s(2, 2)]);
        // Idempotence on an already-reduced matrix.
        assert_eq!(snf(&r.d).d, r.d);
    }

    #[test]
    fn rank_one_block() {
        let a = PolyMatrix::from_fn(3, 2, 2, |_, _| s(3, 1));
        let r = check_snf(&a);
        assert_eq!(r.invariant_factors, vec![s(3, 1), Poly::zero(3)]);
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn zero_matrix() {
        let a = PolyMatrix::zero(2, 2, 3);
        let r = check_snf(&a);
        assert!(r.d.is_zero());
        assert_eq!(r.u, PolyMatrix::identity(2, 2));
        assert_eq!(r.w, PolyMatrix::identity(2, 3));
    }

    #[test]
    fn kernel_examples() {
        let a = PolyMatrix::from_fn(2, 1, 1, |_, _| s(2, 1)).with_modulus(3);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 1);
        assert_eq!(*k.get(0, 0), s(2, 2));
        assert_eq!(kernel_basis(&PolyMatrix::identity(2, 3)).cols(), 0);
        let b = PolyMatrix::diagonal(2, 2, 2, &[s(2, 1), Poly::one(2)]);
        assert_eq!(kernel_basis(&b).cols(), 0);
    }

    #[test]
    fn solve_examples() {
        let a = PolyMatrix::from_fn(5, 1, 1, |_, _| s(5, 1));
        assert_eq!(solve(&a, &[s(5, 2)]).unwrap(), Some(vec![s(5, 1)]));
        assert_eq!(solve(&a, &[Poly::one(5)]).unwrap(), None);
        assert!(solve(&a, &[Poly::one(5), Poly::one(5)]).is_err());
    }

    #[test]
    fn chain_ring_snf_normalizes_units() {
        // (1 + s)·s over F_2[s]/(s^3) has invariant factor s.
        let a = PolyMatrix::from_fn(2, 1, 1, |_, _| Poly::from_dense(2, &[0, 1, 1])).with_modulus(3);
        let r = snf(&a);
        assert_eq!(r.invariant_factors, vec![s(2, 1)]);
        assert_eq!(r.u.mul(&r.d).unwrap().mul(&r.w).unwrap(), a);
    }

    #[test]
    fn determinant_small() {
        let a = PolyMatrix::from_rows(
            3,
            vec![vec![s(3, 1), Poly::one(3)], vec![Poly::one(3), Poly::zero(3)]],
        )
        .unwrap();
        assert_eq!(a.det().unwrap(), Poly::constant(3, 2));
    }
}
