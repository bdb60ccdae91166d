//! The Riordan group over truncated series: arrays `(g(x), x f(x))`, their
//! triangles, group product and inverse, A- and Z-sequences, and production
//! matrices in both directions.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fps::{Rational, Series};

/// A proper Riordan array `(g(x), x * ft(x))` with `g(0) = ft(0) = 1`.
///
/// Only `ft` is stored; the multiplier `x * ft` is derived on demand.
#[derive(Clone, Debug, PartialEq)]
pub struct RiordanArray {
    g: Series,
    ft: Series,
}

impl RiordanArray {
    /// Validates the normalization and truncates both components to the
    /// shorter order.
    pub fn new(g: Series, ft: Series) -> Result<Self> {
        if !g.c0().is_one() {
            return Err(Error::Normalization(format!(
                "g(0) must be 1, got {}",
                g.c0()
            )));
        }
        if !ft.c0().is_one() {
            return Err(Error::Normalization(format!(
                "f(0) must be 1, got {}",
                ft.c0()
            )));
        }
        let n = g.order().min(ft.order());
        Ok(RiordanArray {
            g: g.truncate(n),
            ft: ft.truncate(n),
        })
    }

    /// The identity array `(1, x)`.
    pub fn identity(order: usize) -> Self {
        RiordanArray {
            g: Series::one(order),
            ft: Series::one(order),
        }
    }

    pub fn g(&self) -> &Series {
        &self.g
    }

    /// The series `f` of the multiplier `x f(x)`.
    pub fn ft(&self) -> &Series {
        &self.ft
    }

    /// `x * ft(x)`, certified to one more coefficient than `ft`.
    pub fn multiplier(&self) -> Series {
        self.ft.mul_x()
    }

    pub fn order(&self) -> usize {
        self.g.order()
    }

    pub fn truncate(&self, order: usize) -> RiordanArray {
        RiordanArray {
            g: self.g.truncate(order),
            ft: self.ft.truncate(order),
        }
    }

    /// `g == ft`, i.e. a member of the Bell subgroup.
    pub fn is_bell(&self) -> bool {
        self.g == self.ft
    }

    /// `a_{n,k} = [x^n] g(x) (x f(x))^k`; zero above the diagonal.
    pub fn entry(&self, n: usize, k: usize) -> Result<Rational> {
        if n >= self.order() {
            return Err(Error::Precision {
                required: n + 1,
                available: self.order(),
            });
        }
        if k > n {
            return Ok(Rational::zero());
        }
        let len = n - k + 1;
        let col = &self.g.truncate(len) * &self.ft.truncate(len).powi(k as i64)?;
        Ok(col.coeff(n - k)?.clone())
    }

    /// The first `n_rows` rows, built column by column as `g * ft^k`.
    pub fn triangle(&self, n_rows: usize) -> Result<Triangle> {
        if n_rows > self.order() {
            return Err(Error::Precision {
                required: n_rows,
                available: self.order(),
            });
        }
        let mut rows: Vec<Vec<Rational>> = (0..n_rows).map(|n| Vec::with_capacity(n + 1)).collect();
        if n_rows == 0 {
            return Ok(Triangle { rows });
        }
        let mut col = self.g.truncate(n_rows);
        for k in 0..n_rows {
            for (i, c) in col.coeffs().iter().enumerate() {
                rows[k + i].push(c.clone());
            }
            if k + 1 < n_rows {
                let len = n_rows - k - 1;
                col = &col.truncate(len) * &self.ft.truncate(len);
            }
        }
        Ok(Triangle { rows })
    }

    /// Group inverse `(1 / g(vbar), vbar)` with `vbar = Rev(x f)`.
    pub fn inverse(&self) -> RiordanArray {
        let vbar = self
            .multiplier()
            .revert()
            .expect("proper arrays have a revertible multiplier");
        let g_inv = self
            .g
            .compose(&vbar)
            .and_then(|s| s.recip())
            .expect("g(vbar) has constant term 1");
        let ft_inv = vbar.div_x().expect("vbar has zero constant term");
        RiordanArray::new(g_inv, ft_inv).expect("inverse of a proper array is proper")
    }

    /// Generating function of the A-sequence, `x / Rev(x f)`.
    pub fn a_sequence(&self) -> Series {
        let vbar = self.multiplier().revert().expect("revertible multiplier");
        vbar.div_x()
            .and_then(|s| s.recip())
            .expect("Rev(x f)/x has constant term 1")
    }

    /// Generating function of the Z-sequence, `(1 - 1/g(vbar)) / vbar`.
    ///
    /// Arrays whose column 0 is `1, 0, 0, ...` (the identity, for one) give
    /// the zero series here.
    pub fn z_sequence(&self) -> Series {
        let vbar = self.multiplier().revert().expect("revertible multiplier");
        let inv_g = self
            .g
            .compose(&vbar)
            .and_then(|s| s.recip())
            .expect("g(vbar) has constant term 1");
        let numer = &Series::one(inv_g.order()) - &inv_g;
        let numer = numer.div_x().expect("1 - 1/g(vbar) vanishes at 0");
        let denom = vbar.div_x().expect("vbar has zero constant term");
        numer
            .checked_div(&denom)
            .expect("vbar/x has constant term 1")
    }

    /// Production matrix `P = A^{-1} * Abar` with `n_rows` rows.
    ///
    /// Computed twice: by exact matrix algebra on the truncated triangle, and
    /// by assembling the Z- and A-sequences into the Toeplitz-below-column-0
    /// shape. The two must agree entrywise.
    pub fn production_matrix(&self, n_rows: usize) -> Result<ProductionMatrix> {
        if n_rows + 1 > self.order() {
            return Err(Error::Precision {
                required: n_rows + 1,
                available: self.order(),
            });
        }
        let tri = self.triangle(n_rows + 1)?;
        let by_matrix = ProductionMatrix::from_triangle(&tri)?;
        let by_sequences =
            ProductionMatrix::from_sequences(&self.z_sequence(), &self.a_sequence(), n_rows)?;
        if let Some((n, j)) = by_matrix.first_mismatch(&by_sequences) {
            return Err(Error::Inconsistency(format!(
                "production matrix entry ({n},{j}): matrix algebra gives {}, A/Z assembly gives {}",
                by_matrix.get(n, j),
                by_sequences.get(n, j)
            )));
        }
        Ok(by_matrix)
    }

    /// First coefficient index where either component disagrees.
    pub fn first_mismatch(&self, other: &RiordanArray) -> Option<(&'static str, usize)> {
        if let Some(i) = self.g.first_mismatch(&other.g) {
            return Some(("g", i));
        }
        self.ft.first_mismatch(&other.ft).map(|i| ("f", i))
    }
}

impl Mul<&RiordanArray> for &RiordanArray {
    type Output = RiordanArray;

    /// `(g, x f) * (u, x v) = (g u(x f), x f v(x f))`.
    fn mul(self, rhs: &RiordanArray) -> RiordanArray {
        let v = self.multiplier();
        let u_at = rhs
            .g
            .compose(&v)
            .expect("multiplier has zero constant term");
        let v_at = rhs
            .ft
            .compose(&v)
            .expect("multiplier has zero constant term");
        RiordanArray::new(&self.g * &u_at, &self.ft * &v_at)
            .expect("product of proper arrays is proper")
    }
}

impl fmt::Display for RiordanArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, x*({}))", self.g, self.ft)
    }
}

/// A finite lower-triangular matrix; row `n` holds `n + 1` entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    rows: Vec<Vec<Rational>>,
}

impl Triangle {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some((n, r)) = rows.iter().enumerate().find(|(n, r)| r.len() != n + 1) {
            return Err(Error::Shape(format!(
                "triangle row {n} has {} entries, expected {}",
                r.len(),
                n + 1
            )));
        }
        Ok(Triangle { rows })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&c| Rational::from_integer(c.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn identity(n_rows: usize) -> Self {
        Triangle {
            rows: (0..n_rows)
                .map(|n| {
                    let mut r = vec![Rational::zero(); n + 1];
                    r[n] = Rational::one();
                    r
                })
                .collect(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn row(&self, n: usize) -> &[Rational] {
        &self.rows[n]
    }

    /// Entry `(n, k)`, zero above the diagonal.
    ///
    /// # Panics
    /// Panics if `n` is not a stored row.
    pub fn get(&self, n: usize, k: usize) -> Rational {
        self.rows[n].get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn column(&self, k: usize) -> Vec<Rational> {
        self.rows.iter().skip(k).map(|r| r[k].clone()).collect()
    }

    pub fn truncate(&self, n_rows: usize) -> Triangle {
        Triangle {
            rows: self.rows.iter().take(n_rows).cloned().collect(),
        }
    }

    /// Drops row 0 and column 0.
    pub fn without_first_column(&self) -> Triangle {
        Triangle {
            rows: self.rows.iter().skip(1).map(|r| r[1..].to_vec()).collect(),
        }
    }

    /// Exact matrix product over the common row count.
    pub fn matmul(&self, other: &Triangle) -> Triangle {
        let n = self.n_rows().min(other.n_rows());
        let rows = (0..n)
            .map(|i| {
                (0..=i)
                    .map(|j| {
                        (j..=i).fold(Rational::zero(), |acc, m| {
                            acc + &self.rows[i][m] * &other.rows[m][j]
                        })
                    })
                    .collect()
            })
            .collect();
        Triangle { rows }
    }

    /// Exact inverse by forward substitution.
    pub fn inverse(&self) -> Result<Triangle> {
        let n = self.n_rows();
        let mut inv: Vec<Vec<Rational>> = Vec::with_capacity(n);
        for i in 0..n {
            let d = &self.rows[i][i];
            if d.is_zero() {
                return Err(Error::SingularDivision);
            }
            let mut row = vec![Rational::zero(); i + 1];
            row[i] = d.recip();
            for j in (0..i).rev() {
                // sum_{m=j}^{i} L[i][m] X[m][j] = 0
                let mut acc = Rational::zero();
                for (m, inv_m) in inv.iter().enumerate().take(i).skip(j) {
                    acc += &self.rows[i][m] * &inv_m[j];
                }
                row[j] = -acc / d;
            }
            inv.push(row);
        }
        Ok(Triangle { rows: inv })
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().flatten().all(|c| c.is_integer())
    }

    pub fn to_integers(&self) -> Option<Vec<Vec<BigInt>>> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| c.is_integer().then(|| c.to_integer()))
                    .collect()
            })
            .collect()
    }

    /// First `(row, col)` where the common rows differ.
    pub fn first_mismatch(&self, other: &Triangle) -> Option<(usize, usize)> {
        self.rows
            .iter()
            .zip(&other.rows)
            .enumerate()
            .find_map(|(n, (a, b))| a.iter().zip(b).position(|(x, y)| x != y).map(|k| (n, k)))
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_aligned(f, &self.rows)
    }
}

/// A finite lower-Hessenberg matrix; row `n` holds `n + 2` entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductionMatrix {
    rows: Vec<Vec<Rational>>,
}

impl ProductionMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some((n, r)) = rows.iter().enumerate().find(|(n, r)| r.len() != n + 2) {
            return Err(Error::Shape(format!(
                "production row {n} has {} entries, expected {}",
                r.len(),
                n + 2
            )));
        }
        Ok(ProductionMatrix { rows })
    }

    /// `A^{-1} * Abar` where `Abar` is `tri` without its top row; one row
    /// fewer than `tri`.
    pub fn from_triangle(tri: &Triangle) -> Result<Self> {
        let n = tri.n_rows().saturating_sub(1);
        let inv = tri.truncate(n).inverse()?;
        let rows = (0..n)
            .map(|i| {
                (0..i + 2)
                    .map(|j| {
                        (0..=i).fold(Rational::zero(), |acc, m| {
                            let below = tri.get(m + 1, j);
                            if below.is_zero() {
                                acc
                            } else {
                                acc + &inv.rows[i][m] * below
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(ProductionMatrix { rows })
    }

    /// Column 0 from `z`, and `row[n][j] = a_{n+1-j}` for `j >= 1`.
    pub fn from_sequences(z: &Series, a: &Series, n_rows: usize) -> Result<Self> {
        let need = n_rows;
        for s in [z, a] {
            if s.order() < need {
                return Err(Error::Precision {
                    required: need,
                    available: s.order(),
                });
            }
        }
        let rows = (0..n_rows)
            .map(|n| {
                let mut r = Vec::with_capacity(n + 2);
                r.push(z.coeffs()[n].clone());
                for j in 1..n + 2 {
                    r.push(a.coeffs()[n + 1 - j].clone());
                }
                r
            })
            .collect();
        Ok(ProductionMatrix { rows })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Entry `(n, j)`, zero right of the superdiagonal.
    pub fn get(&self, n: usize, j: usize) -> Rational {
        self.rows[n].get(j).cloned().unwrap_or_else(Rational::zero)
    }

    /// Whether `row[n][j] == row[n-1][j-1]` for all `j >= 2`, the shape of a
    /// Riordan production matrix.
    pub fn is_riordan_shaped(&self) -> bool {
        (1..self.n_rows()).all(|n| (2..n + 2).all(|j| self.rows[n][j] == self.rows[n - 1][j - 1]))
    }

    /// Stacks `r_0 = (1, 0, ...)`, `r_i = r_{i-1} P` into a triangle with
    /// `n_rows` rows; needs `n_rows - 1` rows of `P`.
    pub fn generate(&self, n_rows: usize) -> Result<Triangle> {
        if n_rows > self.n_rows() + 1 {
            return Err(Error::Precision {
                required: n_rows.saturating_sub(1),
                available: self.n_rows(),
            });
        }
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n_rows);
        if n_rows == 0 {
            return Ok(Triangle { rows });
        }
        rows.push(vec![Rational::one()]);
        for i in 1..n_rows {
            let prev = &rows[i - 1];
            let next: Vec<Rational> = (0..=i)
                .map(|j| {
                    prev.iter()
                        .enumerate()
                        .fold(Rational::zero(), |acc, (k, r)| {
                            if r.is_zero() {
                                acc
                            } else {
                                acc + r * self.get(k, j)
                            }
                        })
                })
                .collect();
            rows.push(next);
        }
        Ok(Triangle { rows })
    }

    pub fn first_mismatch(&self, other: &ProductionMatrix) -> Option<(usize, usize)> {
        self.rows
            .iter()
            .zip(&other.rows)
            .enumerate()
            .find_map(|(n, (a, b))| a.iter().zip(b).position(|(x, y)| x != y).map(|k| (n, k)))
    }
}

impl fmt::Display for ProductionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_aligned(f, &self.rows)
    }
}

fn write_aligned(f: &mut fmt::Formatter<'_>, rows: &[Vec<Rational>]) -> fmt::Result {
    let width = rows
        .iter()
        .flatten()
        .map(|c| c.to_string().len())
        .max()
        .unwrap_or(1);
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .map(|c| format!("{:>width$}", c.to_string()))
            .collect();
        writeln!(f, "{}", cells.join(" "))?;
    }
    Ok(())
}
