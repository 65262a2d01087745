use std::fmt;

use super::{q_to_string, MultiPoly, Ring, VarId, Q};


/// Dense square matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    n: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zero(n: usize) -> Self {
        Matrix { n, data: vec![R::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = R::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.n + j] = v;
    }

    /// Entry at a 1-based matrix position.
    pub fn at(&self, row: u16, col: u16) -> &R {
        self.get(row as usize - 1, col as usize - 1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * n + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Matrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Matrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &R) -> Self {
        Matrix { n: self.n, data: self.data.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    /// Off-diagonal nonzero positions (1-based).
    pub fn off_diagonal_support(&self) -> Vec<(u16, u16)> {
        let mut v = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && !self.get(i, j).is_zero() {
                    v.push((i as u16 + 1, j as u16 + 1));
                }
            }
        }
        v
    }

    pub fn is_unipotent_upper(&self) -> bool {
        (0..self.n).all(|i| {
            self.get(i, i).is_one() && (0..i).all(|j| self.get(i, j).is_zero())
        })
    }

    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(i, j) != other.get(i, j) {
                    return Some((i + 1, j + 1));
                }
            }
        }
        None
    }
}

impl Matrix<Q> {
    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a.get(r, c).is_zero())?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let piv = a.get(c, c).clone();
            for j in 0..n {
                let x = a.get(c, j) / &piv;
                a.set(c, j, x);
                let y = inv.get(c, j) / &piv;
                inv.set(c, j, y);
            }
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).clone();
                for j in 0..n {
                    let x = a.get(r, j) - &f * a.get(c, j);
                    a.set(r, j, x);
                    let y = inv.get(r, j) - &f * inv.get(c, j);
                    inv.set(r, j, y);
                }
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Q {
        let n = self.n;
        let mut a = self.clone();
        let mut det = <Q as Ring>::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return <Q as Ring>::zero();
            };
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = a.get(c, c).clone();
            det *= &piv;
            for r in c + 1..n {
                if a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c) / &piv;
                for j in c..n {
                    let x = a.get(r, j) - &f * a.get(c, j);
                    a.set(r, j, x);
                }
            }
        }
        det
    }
}

impl Matrix<MultiPoly> {
    pub fn eval(
        &self,
        assign: &dyn Fn(&VarId) -> Option<Q>,
    ) -> Result<Matrix<Q>, super::EvalError> {
        let mut data = Vec::with_capacity(self.data.len());
        for x in &self.data {
            data.push(x.eval_with(assign)?);
        }
        Ok(Matrix { n: self.n, data })
    }
}

impl fmt::Debug for Matrix<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Matrix<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self
            .data
            .iter()
            .map(|x| if x.is_integer() { x.numer().to_string() } else { q_to_string(x) })
            .collect();
        let w = cells.iter().map(|c| c.len()).max().unwrap_or(1);
        for i in 0..self.n {
            let row: Vec<String> =
                (0..self.n).map(|j| format!("{:>w$}", cells[i * self.n + j], w = w)).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix<MultiPoly> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::{q, qf};

    #[test]
    fn inverse_and_det() {
        let m = Matrix::from_fn(3, |i, j| q(((i * 3 + j) as i64 * 7 + 1) % 5 + (i == j) as i64));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        assert_eq!(m.determinant() * inv.determinant(), q(1));
        let s = Matrix::from_fn(2, |i, j| q((i + j) as i64));
        assert_eq!(s.determinant(), q(-1));
        let z = Matrix::from_fn(2, |_, _| qf(1, 2));
        assert!(z.inverse().is_none());
    }
}
