//! Dense rational matrices with exact elimination: rank, span membership
//! with witness, kernels, and linear solves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rat::{rat_zero, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![rat_zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = rat_zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc += &self[(i, j)] * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Exact rank by fraction-free (Bareiss) elimination over integers after
    /// clearing denominators row by row.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let mut lcm = BigInt::one();
                for j in 0..self.cols {
                    lcm = lcm.lcm(self[(i, j)].denom());
                }
                (0..self.cols)
                    .map(|j| {
                        let x = &self[(i, j)];
                        x.numer() * (&lcm / x.denom())
                    })
                    .collect()
            })
            .collect();
        let mut rank = 0;
        let mut prev = BigInt::one();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(p) = (row..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            for r in row + 1..self.rows {
                for c in col + 1..self.cols {
                    let t = &m[row][col] * &m[r][c] - &m[r][col] * &m[row][c];
                    m[r][c] = &t / &prev;
                }
                m[r][col] = BigInt::zero();
            }
            prev = m[row][col].clone();
            rank += 1;
            row += 1;
            if row == self.rows {
                break;
            }
        }
        rank
    }

    /// Reduced row echelon form in place; returns the pivot column of each
    /// pivot row.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self[(row, col)].recip();
            for c in col..self.cols {
                let v = &self[(row, c)] * &inv;
                self[(row, c)] = v;
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for c in col..self.cols {
                        let v = &self[(r, c)] - &factor * &self[(row, c)];
                        self[(r, c)] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Is `v` in the column span? Returns witness coefficients (one per
    /// column, zeros off the pivot columns) reproducing `v` exactly.
    pub fn in_column_span(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(v.len(), self.rows);
        // Solve self * c = v by RREF of the augmented transposed system.
        let mut aug = RatMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = v[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent: pivot in the augmented column
        }
        let mut c = vec![rat_zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            c[pc] = aug[(r, self.cols)].clone();
        }
        debug_assert_eq!(self.mul_vec(&c), v);
        Some(c)
    }

    /// Basis of `{ x : self * x = 0 }`.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_rank = pivots.len();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut x = vec![rat_zero(); self.cols];
            x[free] = Rat::one();
            for r in 0..pivot_rank {
                x[pivots[r]] = -m[(r, free)].clone();
            }
            debug_assert!(self.mul_vec(&x).iter().all(|y| y.is_zero()));
            basis.push(x);
        }
        basis
    }

    /// Basis of the left null space `{ w : wᵀ · self = 0 }`.
    pub fn left_kernel(&self) -> Vec<Vec<Rat>> {
        self.transpose().kernel()
    }

    /// Indices of a maximal linearly independent subset of columns.
    pub fn independent_columns(&self) -> Vec<usize> {
        let mut m = self.clone();
        m.rref()
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Scale a rational vector to coprime integers (for fast dot products).
pub fn to_integer_vector(v: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in &mut ints {
            *x /= &g;
        }
    }
    ints
}

/// Downcast to i64 when every entry fits.
pub fn as_i64_vector(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter()
        .map(|x| {
            if x.abs() <= BigInt::from(i64::MAX) {
                let (sign, digits) = x.to_u64_digits();
                let mag = digits.first().copied().unwrap_or(0) as i64;
                Some(if sign == num_bigint::Sign::Minus { -mag } else { mag })
            } else {
                None
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat::rat_int;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect(),
        )
    }

    #[test]
    fn rank_identity() {
        assert_eq!(RatMatrix::identity(3).rank(), 3);
    }

    #[test]
    fn rank_with_dependencies() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn span_witness_reconstructs_duplicated_column() {
        let a = m(&[&[1, 1, 0], &[0, 0, 1], &[2, 2, 0]]);
        let v = vec![rat_int(1), rat_int(0), rat_int(2)];
        let c = a.in_column_span(&v).unwrap();
        assert_eq!(a.mul_vec(&c), v);
        assert_eq!(c.iter().filter(|x| !x.is_zero()).count(), 1);
    }

    #[test]
    fn span_rejects_outside_vector() {
        let a = m(&[&[1, 0], &[0, 1], &[0, 0]]);
        let v = vec![rat_int(0), rat_int(0), rat_int(1)];
        assert!(a.in_column_span(&v).is_none());
    }

    #[test]
    fn kernel_is_annihilated() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6]]);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn inclusion_matrix_cube2_small_faces_rank() {
        // Points of the 2-cube as subsets of {(1,0),(1,1),(2,0),(2,1)};
        // columns are the empty face plus the four singleton faces.
        // Frozen expected rank computed by hand elimination: 3.
        let a = m(&[
            &[1, 1, 0, 1, 0], // 00
            &[1, 1, 0, 0, 1], // 01
            &[1, 0, 1, 1, 0], // 10
            &[1, 0, 1, 0, 1], // 11
        ]);
        assert_eq!(a.rank(), 3);
    }
}
