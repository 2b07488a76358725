//! Exact integer linear algebra: matrices with overflow-checked arithmetic,
//! Hermite and Smith normal forms with their unimodular transforms, integer
//! linear solving, and sublattices in canonical (column Hermite) form.

use std::fmt;

use crate::arith::{self, div_floor};
use crate::error::Error;
use crate::Result;

/// Dense integer matrix, row-major. All arithmetic is overflow-checked;
/// overflow is reported as an error, never silent wraparound.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Self {
        assert_eq!(rows * cols, data.len(), "shape/data mismatch");
        Self { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![0; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(ambient: usize, cols: &[Vec<i64>]) -> Self {
        let mut m = Self::zero(ambient, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), ambient, "column length mismatch");
            for i in 0..ambient {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<i64>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0i64;
                for k in 0..self.cols {
                    acc = arith::add(
                        acc,
                        arith::mul(self[(i, k)], other[(k, j)], "matrix multiply")?,
                        "matrix multiply",
                    )?;
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        (0..self.rows)
            .map(|i| arith::dot(self.row(i), v, "matrix-vector product"))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == i64::from(i == j)))
    }

    /// Rank over the rationals, computed exactly via the Hermite form.
    pub fn rank(&self) -> Result<usize> {
        let h = hermite_normal_form(self)?;
        Ok((0..h.h.rows)
            .filter(|&i| !arith::is_zero_vec(h.h.row(i)))
            .count())
    }

    /// Determinant of a square matrix by Bareiss fraction-free elimination.
    pub fn det(&self) -> Result<i64> {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut m = self.clone();
        let mut sign = 1i64;
        let mut prev = 1i64;
        for k in 0..n - 1 {
            if m[(k, k)] == 0 {
                let swap = (k + 1..n).find(|&i| m[(i, k)] != 0);
                match swap {
                    Some(i) => {
                        for j in 0..n {
                            let t = m[(k, j)];
                            m[(k, j)] = m[(i, j)];
                            m[(i, j)] = t;
                        }
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = arith::sub(
                        arith::mul(m[(k, k)], m[(i, j)], "determinant")?,
                        arith::mul(m[(i, k)], m[(k, j)], "determinant")?,
                        "determinant",
                    )?;
                    m[(i, j)] = num / prev;
                }
            }
            for i in k + 1..n {
                m[(i, k)] = 0;
            }
            prev = m[(k, k)];
        }
        arith::mul(sign, m[(n - 1, n - 1)], "determinant")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}{:?}", self.rows, self.cols, self.row_vecs())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Row operations tracked on (m, u) with the inverse transform maintained as
/// column operations on u_inv, so that u * original = m and u * u_inv = 1.
struct RowCalc {
    m: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
}

impl RowCalc {
    fn new(m: IntMatrix) -> Self {
        let n = m.rows;
        Self {
            m,
            u: IntMatrix::identity(n),
            u_inv: IntMatrix::identity(n),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.m.cols {
            self.m.data.swap(a * self.m.cols + j, b * self.m.cols + j);
        }
        let n = self.u.cols;
        for j in 0..n {
            self.u.data.swap(a * n + j, b * n + j);
            // column swap on the inverse
            let x = self.u_inv[(j, a)];
            self.u_inv[(j, a)] = self.u_inv[(j, b)];
            self.u_inv[(j, b)] = x;
        }
    }

    fn negate_row(&mut self, i: usize) -> Result<()> {
        for j in 0..self.m.cols {
            self.m[(i, j)] = arith::neg(self.m[(i, j)], "row negate")?;
        }
        for j in 0..self.u.cols {
            self.u[(i, j)] = arith::neg(self.u[(i, j)], "row negate")?;
            self.u_inv[(j, i)] = arith::neg(self.u_inv[(j, i)], "row negate")?;
        }
        Ok(())
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, c: i64, j: usize) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        for k in 0..self.m.cols {
            self.m[(i, k)] = arith::add(
                self.m[(i, k)],
                arith::mul(c, self.m[(j, k)], "row op")?,
                "row op",
            )?;
        }
        for k in 0..self.u.cols {
            self.u[(i, k)] = arith::add(
                self.u[(i, k)],
                arith::mul(c, self.u[(j, k)], "row op")?,
                "row op",
            )?;
            // inverse: col_j -= c * col_i
            self.u_inv[(k, j)] = arith::sub(
                self.u_inv[(k, j)],
                arith::mul(c, self.u_inv[(k, i)], "row op")?,
                "row op",
            )?;
        }
        Ok(())
    }
}

/// Result of the row-style Hermite normal form: `h = u * m` with `u`
/// unimodular, `h` in row echelon form with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`.
#[derive(Debug, Clone)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    /// (row, col) of each pivot, in order.
    pub pivots: Vec<(usize, usize)>,
}

pub fn hermite_normal_form(m: &IntMatrix) -> Result<HermiteForm> {
    let mut calc = RowCalc::new(m.clone());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        // Euclid on column c, rows r.., until a single nonzero remains at r.
        loop {
            let mut best: Option<(usize, i64)> = None;
            for i in r..m.rows {
                let v = calc.m[(i, c)];
                if v != 0 && best.map_or(true, |(_, b)| v.abs() < b.abs()) {
                    best = Some((i, v));
                }
            }
            let Some((imin, _)) = best else { break };
            calc.swap_rows(r, imin);
            let mut clean = true;
            for i in r + 1..m.rows {
                let v = calc.m[(i, c)];
                if v != 0 {
                    let q = v / calc.m[(r, c)];
                    calc.add_row(i, arith::neg(q, "hnf")?, r)?;
                    if calc.m[(i, c)] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if calc.m[(r, c)] == 0 {
            continue;
        }
        if calc.m[(r, c)] < 0 {
            calc.negate_row(r)?;
        }
        let pivot = calc.m[(r, c)];
        for i in 0..r {
            let q = div_floor(calc.m[(i, c)], pivot);
            calc.add_row(i, arith::neg(q, "hnf")?, r)?;
        }
        pivots.push((r, c));
        r += 1;
    }
    Ok(HermiteForm {
        h: calc.m,
        u: calc.u,
        u_inv: calc.u_inv,
        pivots,
    })
}

/// Result of the Smith normal form: `d = u * m * v` diagonal with
/// `d₁ | d₂ | …`, all transforms unimodular and inverses included.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries d₁..d_min, including zeros.
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)])
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&d| d != 0).count()
    }
}

/// Smith normal form by alternating row and column Hermite reductions.
/// Each Hermite pass keeps entries fully reduced, which avoids the entry
/// explosion of naive pivot-by-pivot elimination; the leading pivot is a
/// positive integer that weakly decreases between passes, so the iteration
/// terminates. Once diagonal, the divisibility chain is enforced by column
/// additions followed by further reduction passes.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm> {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);
    for _ in 0..1000 {
        let hf = hermite_normal_form(&d)?;
        d = hf.h;
        u = hf.u.mul(&u)?;
        u_inv = u_inv.mul(&hf.u_inv)?;
        let hf = hermite_normal_form(&d.transpose())?;
        d = hf.h.transpose();
        v = v.mul(&hf.u.transpose())?;
        v_inv = hf.u_inv.transpose().mul(&v_inv)?;
        if !is_diagonal(&d) {
            continue;
        }
        match divisibility_violation(&d) {
            None => return Ok(SmithForm { d, u, u_inv, v, v_inv }),
            Some((i, j)) => {
                // col_i += col_j, tracked as d' = d E, V' = V E,
                // V'^{-1} = E^{-1} V^{-1}
                for k in 0..rows {
                    d[(k, i)] = arith::add(d[(k, i)], d[(k, j)], "snf")?;
                }
                for k in 0..cols {
                    v[(k, i)] = arith::add(v[(k, i)], v[(k, j)], "snf")?;
                }
                for k in 0..cols {
                    v_inv[(j, k)] = arith::sub(v_inv[(j, k)], v_inv[(i, k)], "snf")?;
                }
            }
        }
    }
    Err(Error::Overflow("snf"))
}

fn is_diagonal(m: &IntMatrix) -> bool {
    for i in 0..m.rows {
        for j in 0..m.cols {
            if i != j && m[(i, j)] != 0 {
                return false;
            }
        }
    }
    true
}

fn divisibility_violation(d: &IntMatrix) -> Option<(usize, usize)> {
    let n = d.rows.min(d.cols);
    for i in 0..n.saturating_sub(1) {
        let a = d[(i, i)];
        let b = d[(i + 1, i + 1)];
        if a == 0 && b != 0 {
            return Some((i, i + 1));
        }
        if a != 0 && b % a != 0 {
            return Some((i, i + 1));
        }
    }
    None
}

/// Solve `A x = b` over the integers via the Smith normal form. Free
/// parameters are set to zero, so the returned solution is deterministic.
/// Returns `None` when no integer solution exists.
pub fn solve_integer(a: &IntMatrix, b: &[i64]) -> Result<Option<Vec<i64>>> {
    if a.rows != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "system is {}x{} but rhs has length {}",
            a.rows,
            a.cols,
            b.len()
        )));
    }
    let snf = smith_normal_form(a)?;
    let ub = snf.u.mul_vec(b)?;
    let min = a.rows.min(a.cols);
    let mut y = vec![0i64; a.cols];
    for i in 0..a.rows {
        let d = if i < min { snf.d[(i, i)] } else { 0 };
        if d == 0 {
            if ub[i] != 0 {
                return Ok(None);
            }
        } else {
            if ub[i] % d != 0 {
                return Ok(None);
            }
            y[i] = ub[i] / d;
        }
    }
    let x = snf.v.mul_vec(&y)?;
    debug_assert_eq!(a.mul_vec(&x).unwrap(), b);
    Ok(Some(x))
}

/// Basis of the integer kernel `{x : M x = 0}`, as columns.
pub fn kernel_basis(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    let snf = smith_normal_form(m)?;
    let min = m.rows.min(m.cols);
    let mut basis = Vec::new();
    for j in 0..m.cols {
        let free = j >= min || snf.d[(j, j)] == 0;
        if free {
            basis.push(snf.v.col(j));
        }
    }
    Ok(basis)
}

/// A sublattice of `Z^ambient`, stored with its basis columns in column
/// Hermite normal form so that equal sublattices have identical
/// representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sublattice {
    ambient: usize,
    basis: IntMatrix,
}

impl Sublattice {
    /// Canonicalize the span of the given columns. Fails if the columns are
    /// linearly dependent.
    pub fn from_basis(ambient: usize, columns: &[Vec<i64>]) -> Result<Self> {
        let m = IntMatrix::from_cols(ambient, columns);
        if m.rank()? != columns.len() {
            return Err(Error::DependentBasis);
        }
        Ok(Self {
            ambient,
            basis: column_hermite(&m)?,
        })
    }

    /// The zero sublattice.
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: IntMatrix::zero(ambient, 0),
        }
    }

    /// Canonical sublattice generated by arbitrary (possibly dependent)
    /// integer vectors.
    pub fn from_generators(ambient: usize, gens: &[Vec<i64>]) -> Result<Self> {
        let m = IntMatrix::from_cols(ambient, gens);
        let h = column_hermite(&m)?;
        let cols: Vec<Vec<i64>> = h
            .col_vecs()
            .into_iter()
            .filter(|c| !arith::is_zero_vec(c))
            .collect();
        Ok(Self {
            ambient,
            basis: column_hermite(&IntMatrix::from_cols(ambient, &cols))?,
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_columns(&self) -> Vec<Vec<i64>> {
        self.basis.col_vecs()
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        Ok(solve_integer(&self.basis, v)?.is_some())
    }

    /// Saturation: the lattice `span_Q(self) ∩ Z^ambient`.
    pub fn saturation(&self) -> Result<Sublattice> {
        if self.rank() == 0 {
            return Ok(self.clone());
        }
        let snf = smith_normal_form(&self.basis)?;
        let k = snf.rank();
        debug_assert_eq!(k, self.rank());
        let cols: Vec<Vec<i64>> = (0..k).map(|j| snf.u_inv.col(j)).collect();
        Sublattice::from_basis(self.ambient, &cols)
    }

    pub fn is_saturated(&self) -> Result<bool> {
        Ok(*self == self.saturation()?)
    }

    /// Canonical representative of `v + self`: each pivot coordinate of the
    /// column-Hermite basis is reduced into `[0, pivot)`.
    pub fn reduce_mod(&self, v: &[i64]) -> Result<Vec<i64>> {
        let mut x = v.to_vec();
        for j in 0..self.basis.cols() {
            let pivot_row = (0..self.ambient)
                .find(|&i| self.basis[(i, j)] != 0)
                .expect("zero basis column");
            let pivot = self.basis[(pivot_row, j)];
            debug_assert!(pivot > 0);
            let t = div_floor(x[pivot_row], pivot);
            if t != 0 {
                for i in 0..self.ambient {
                    x[i] = arith::sub(
                        x[i],
                        arith::mul(t, self.basis[(i, j)], "coset reduce")?,
                        "coset reduce",
                    )?;
                }
            }
        }
        Ok(x)
    }
}

/// Column-style Hermite normal form `h = m * v` (the transform is not
/// returned; use the transpose of [`hermite_normal_form`] when it is
/// needed). Pivots descend the columns left to right, entries to the left
/// of each pivot are reduced into `[0, pivot)`.
pub fn column_hermite(m: &IntMatrix) -> Result<IntMatrix> {
    let hf = hermite_normal_form(&m.transpose())?;
    Ok(hf.h.transpose())
}

/// A lattice quotient `Z^ambient / K` described by its free rank, torsion
/// invariant factors, and (in the torsion-free case) a projection onto a
/// free complement together with a section of it.
#[derive(Debug, Clone)]
pub struct LatticeQuotient {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
    /// Rows span the quotient coordinates; `projection * section = 1`.
    pub projection: Option<IntMatrix>,
    pub section: Option<IntMatrix>,
}

pub fn lattice_quotient(ambient: usize, k: &Sublattice) -> Result<LatticeQuotient> {
    assert_eq!(k.ambient_rank(), ambient, "sublattice/ambient mismatch");
    let r = k.rank();
    if r == 0 {
        return Ok(LatticeQuotient {
            free_rank: ambient,
            torsion: Vec::new(),
            projection: Some(IntMatrix::identity(ambient)),
            section: Some(IntMatrix::identity(ambient)),
        });
    }
    let snf = smith_normal_form(k.basis())?;
    let torsion: Vec<i64> = snf.diagonal().into_iter().filter(|&d| d > 1).collect();
    let free_rank = ambient - r;
    if !torsion.is_empty() {
        return Ok(LatticeQuotient {
            free_rank,
            torsion,
            projection: None,
            section: None,
        });
    }
    // In u-coordinates the sublattice is the span of the first r basis
    // vectors, so the last `free_rank` rows of u project onto a complement.
    let mut proj = IntMatrix::zero(free_rank, ambient);
    for i in 0..free_rank {
        for j in 0..ambient {
            proj[(i, j)] = snf.u[(r + i, j)];
        }
    }
    let mut sect = IntMatrix::zero(ambient, free_rank);
    for i in 0..ambient {
        for j in 0..free_rank {
            sect[(i, j)] = snf.u_inv[(i, r + j)];
        }
    }
    debug_assert!(proj.mul(&sect)?.is_identity());
    Ok(LatticeQuotient {
        free_rank,
        torsion,
        projection: Some(proj),
        section: Some(sect),
    })
}

/// A left inverse of `nu` on a sublattice: returns `tau` with
/// `tau * nu * v = v` for every basis vector `v` of `domain`. The solution
/// is the Smith-normal-form one with all free parameters zero, so it is
/// deterministic; it is generally not unique.
pub fn left_inverse_on_sublattice(nu: &IntMatrix, domain: &Sublattice) -> Result<IntMatrix> {
    if nu.cols() != domain.ambient_rank() {
        return Err(Error::DimensionMismatch(format!(
            "nu has {} columns but the domain lives in Z^{}",
            nu.cols(),
            domain.ambient_rank()
        )));
    }
    let images = nu.mul(domain.basis())?;
    let images_t = images.transpose();
    let mut tau = IntMatrix::zero(nu.cols(), nu.rows());
    for i in 0..nu.cols() {
        let target = domain.basis().row(i);
        match solve_integer(&images_t, target)? {
            Some(row) => {
                for j in 0..nu.rows() {
                    tau[(i, j)] = row[j];
                }
            }
            None => return Err(Error::NoLeftInverse),
        }
    }
    debug_assert!({
        let check = tau.mul(&images)?;
        check == *domain.basis()
    });
    Ok(tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<i64>>) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn hermite_identity_is_identity() {
        let hf = hermite_normal_form(&IntMatrix::identity(2)).unwrap();
        assert!(hf.h.is_identity());
        assert!(hf.u.is_identity());
    }

    #[test]
    fn hermite_recomposes() {
        let a = m(vec![vec![4, 2, 1], vec![6, 3, 9], vec![0, 5, 5]]);
        let hf = hermite_normal_form(&a).unwrap();
        assert_eq!(hf.u.mul(&a).unwrap(), hf.h);
        assert_eq!(hf.u.det().unwrap().abs(), 1);
        assert!(hf.u.mul(&hf.u_inv).unwrap().is_identity());
    }

    #[test]
    fn smith_diag_2_3_gives_1_6() {
        let a = m(vec![vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&a).unwrap();
        assert_eq!(snf.diagonal(), vec![1, 6]);
        assert_eq!(snf.u.mul(&a).unwrap().mul(&snf.v).unwrap(), snf.d);
    }

    #[test]
    fn smith_of_zero_matrix_is_zero() {
        let a = IntMatrix::zero(2, 3);
        let snf = smith_normal_form(&a).unwrap();
        assert_eq!(snf.diagonal(), vec![0, 0]);
    }

    #[test]
    fn smith_divisibility_chain() {
        let a = m(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let snf = smith_normal_form(&a).unwrap();
        let d = snf.diagonal();
        for w in d.windows(2) {
            if w[0] != 0 {
                assert_eq!(w[1] % w[0], 0);
            } else {
                assert_eq!(w[1], 0);
            }
        }
        assert_eq!(snf.u.mul(&a).unwrap().mul(&snf.v).unwrap(), snf.d);
        assert_eq!(snf.u.det().unwrap().abs(), 1);
        assert_eq!(snf.v.det().unwrap().abs(), 1);
        assert!(snf.v.mul(&snf.v_inv).unwrap().is_identity());
    }

    #[test]
    fn solve_diagonal() {
        let a = m(vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(solve_integer(&a, &[2, 4]).unwrap(), Some(vec![1, 2]));
        assert_eq!(solve_integer(&a, &[1, 0]).unwrap(), None);
    }

    #[test]
    fn solve_triangular() {
        let a = m(vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(solve_integer(&a, &[3, 1]).unwrap(), Some(vec![2, 1]));
    }

    #[test]
    fn left_inverse_examples() {
        let nu = m(vec![vec![0, 1], vec![1, 1]]);
        let full = Sublattice::from_basis(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let tau = left_inverse_on_sublattice(&nu, &full).unwrap();
        assert!(tau.mul(&nu).unwrap().is_identity());

        let id = IntMatrix::identity(3);
        let full3 = Sublattice::from_basis(
            3,
            &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        )
        .unwrap();
        assert!(left_inverse_on_sublattice(&id, &full3)
            .unwrap()
            .is_identity());

        // Z -> Z^2 diagonal-ish embedding
        let nu = m(vec![vec![1], vec![1]]);
        let z = Sublattice::from_basis(1, &[vec![1]]).unwrap();
        let tau = left_inverse_on_sublattice(&nu, &z).unwrap();
        assert_eq!(tau.mul(&nu).unwrap(), IntMatrix::identity(1));
    }

    #[test]
    fn left_inverse_fails_on_kernel() {
        let nu = m(vec![vec![1, 0], vec![0, 0]]);
        let full = Sublattice::from_basis(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(
            left_inverse_on_sublattice(&nu, &full),
            Err(Error::NoLeftInverse)
        );
    }

    #[test]
    fn quotient_examples() {
        let k = Sublattice::from_basis(2, &[vec![1, 0]]).unwrap();
        let q = lattice_quotient(2, &k).unwrap();
        assert_eq!(q.free_rank, 1);
        assert!(q.torsion.is_empty());

        let k2 = Sublattice::from_basis(2, &[vec![2, 0]]).unwrap();
        let q2 = lattice_quotient(2, &k2).unwrap();
        assert_eq!(q2.free_rank, 1);
        assert_eq!(q2.torsion, vec![2]);

        let full = Sublattice::from_basis(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let q3 = lattice_quotient(2, &full).unwrap();
        assert_eq!(q3.free_rank, 0);
        assert!(q3.torsion.is_empty());
    }

    #[test]
    fn sublattice_canonical_equality() {
        let a = Sublattice::from_basis(2, &[vec![1, 1], vec![0, 2]]).unwrap();
        let b = Sublattice::from_basis(2, &[vec![1, 3], vec![1, 1]]).unwrap();
        // both generate the same index-2 sublattice of Z^2
        assert_eq!(a, b);
    }

    #[test]
    fn saturation_of_doubled_lattice() {
        let l = Sublattice::from_basis(2, &[vec![2, 0]]).unwrap();
        let sat = l.saturation().unwrap();
        assert_eq!(sat, Sublattice::from_basis(2, &[vec![1, 0]]).unwrap());
        assert!(sat.is_saturated().unwrap());
    }

    #[test]
    fn kernel_of_a1_generator_matrix() {
        // columns are the A1 dual generators (2,-1), (1,0), (0,1)
        let h = m(vec![vec![2, 1, 0], vec![-1, 0, 1]]);
        let ker = kernel_basis(&h).unwrap();
        assert_eq!(ker.len(), 1);
        let k = arith::primitive(&ker[0]);
        assert!(k == vec![1, -2, 1] || k == vec![-1, 2, -1]);
    }
}
