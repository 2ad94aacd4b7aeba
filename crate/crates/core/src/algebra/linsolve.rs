use std::ops::{Index, IndexMut};

use crate::scalar::Field;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[F]) -> Vec<F> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinearError {
    #[error("matrix is {rows}x{cols}, expected a square system")]
    NotSquare { rows: usize, cols: usize },
    #[error("right-hand side has length {got}, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("singular matrix: no pivot in column {column} at elimination step {step}")]
    Singular { step: usize, column: usize },
    #[error("back-substitution check failed at row {row}")]
    Verification { row: usize },
}

/// Solves `a * x = b` by Gaussian elimination with pivot choice driven by
/// [`Field::pivot_key`] (ties go to the lowest row). For exact fields the
/// solution is checked by substitution before it is returned.
pub fn solve_linear<F: Field>(a: &Matrix<F>, b: &[F]) -> Result<Vec<F>, LinearError> {
    let n = a.rows();
    if a.cols() != n {
        return Err(LinearError::NotSquare {
            rows: n,
            cols: a.cols(),
        });
    }
    if b.len() != n {
        return Err(LinearError::Dimension {
            expected: n,
            got: b.len(),
        });
    }
    let mut m = a.clone();
    let mut rhs = b.to_vec();

    for col in 0..n {
        let pivot_row = (col..n)
            .filter_map(|r| m[(r, col)].pivot_key().map(|k| (k, r)))
            .min()
            .map(|(_, r)| r)
            .ok_or(LinearError::Singular {
                step: col,
                column: col,
            })?;
        if pivot_row != col {
            for j in 0..n {
                m.data.swap(pivot_row * n + j, col * n + j);
            }
            rhs.swap(pivot_row, col);
        }
        let pivot = m[(col, col)].clone();
        for r in col + 1..n {
            if m[(r, col)].is_zero() {
                continue;
            }
            let factor = m[(r, col)].clone() / pivot.clone();
            m[(r, col)] = F::zero();
            for j in col + 1..n {
                if m[(col, j)].is_zero() {
                    continue;
                }
                let v = m[(r, j)].clone() - factor.clone() * m[(col, j)].clone();
                m[(r, j)] = v;
            }
            let v = rhs[r].clone() - factor * rhs[col].clone();
            rhs[r] = v;
        }
    }

    let mut x = vec![F::zero(); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i].clone();
        for j in i + 1..n {
            if !m[(i, j)].is_zero() {
                acc = acc - m[(i, j)].clone() * x[j].clone();
            }
        }
        x[i] = acc / m[(i, i)].clone();
    }

    if F::is_exact() {
        for (row, (lhs, rhs)) in a.mul_vec(&x).iter().zip(b).enumerate() {
            if lhs != rhs {
                return Err(LinearError::Verification { row });
            }
        }
    }
    Ok(x)
}
