//! Truncated formal power series with exact rational coefficients.
//!
//! A [`Series`] stores exactly the coefficients it can certify: a series of
//! order `n` knows `[x^0] .. [x^(n-1)]` and nothing else. Every operation
//! returns the longest prefix its inputs determine; unknown coefficients are
//! never filled in with zeros.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational coefficient, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand for an integral [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A formal power series known modulo `x^order`.
///
/// Equality compares only the common certified prefix, so a series of order 3
/// equals any longer series that starts with the same three coefficients.
#[derive(Clone, Debug)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    /// Builds a series from its certified coefficients. At least one
    /// coefficient is required.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Precision {
                required: 1,
                available: 0,
            });
        }
        Ok(Series { coeffs })
    }

    /// Builds a series from integer coefficients; the slice length is the order.
    ///
    /// # Panics
    /// Panics on an empty slice.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least one coefficient"
        );
        Series {
            coeffs: coeffs.iter().map(|&c| rat(c)).collect(),
        }
    }

    /// A polynomial, known exactly, truncated or zero-extended to `order`.
    pub fn polynomial(coeffs: &[i64], order: usize) -> Self {
        assert!(order >= 1, "a series needs at least one coefficient");
        let mut out: Vec<Rational> = coeffs.iter().take(order).map(|&c| rat(c)).collect();
        out.resize(order, Rational::zero());
        Series { coeffs: out }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        assert!(order >= 1, "a series needs at least one coefficient");
        let mut coeffs = vec![Rational::zero(); order];
        coeffs[0] = c;
        Series { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::constant(Rational::zero(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    /// The identity series `x`.
    pub fn x(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    /// Power series of `num / den` for integer polynomials, by exact long
    /// division.
    pub fn rational_function(num: &[BigInt], den: &[BigInt], order: usize) -> Result<Self> {
        assert!(order >= 1, "a series needs at least one coefficient");
        let lift = |p: &[BigInt]| {
            let mut v: Vec<Rational> = p
                .iter()
                .take(order)
                .map(|c| Rational::from_integer(c.clone()))
                .collect();
            v.resize(order, Rational::zero());
            Series { coeffs: v }
        };
        if den.is_empty() {
            return Err(Error::SingularDivision);
        }
        lift(num).checked_div(&lift(den))
    }

    /// Number of certified coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// `[x^n]` of the series. Asking past the order is a precision error, not zero.
    pub fn coeff(&self, n: usize) -> Result<&Rational> {
        self.coeffs.get(n).ok_or(Error::Precision {
            required: n + 1,
            available: self.order(),
        })
    }

    pub(crate) fn c0(&self) -> &Rational {
        &self.coeffs[0]
    }

    /// Keeps the first `order` coefficients (never extends).
    pub fn truncate(&self, order: usize) -> Series {
        let n = order.clamp(1, self.order());
        Series {
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    /// Index of the first coefficient where the common prefixes differ.
    pub fn first_mismatch(&self, other: &Series) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// The coefficients as integers, if every one has denominator 1.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplication by `x`; gains one certified coefficient.
    pub fn mul_x(&self) -> Series {
        let mut coeffs = Vec::with_capacity(self.order() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Series { coeffs }
    }

    /// Exact division by `x`; loses one certified coefficient.
    pub fn div_x(&self) -> Result<Series> {
        if !self.c0().is_zero() {
            return Err(Error::SingularDivision);
        }
        if self.order() < 2 {
            return Err(Error::Precision {
                required: 2,
                available: self.order(),
            });
        }
        Ok(Series {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// `self / other`, truncated to the shorter order.
    pub fn checked_div(&self, other: &Series) -> Result<Series> {
        if other.c0().is_zero() {
            return Err(Error::SingularDivision);
        }
        let n = self.order().min(other.order());
        Ok(Series {
            coeffs: divide_prefix(&self.coeffs, &other.coeffs, n),
        })
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Result<Series> {
        Series::one(self.order()).checked_div(self)
    }

    /// `self(inner)`. The inner series must have constant term exactly 0.
    ///
    /// Horner evaluation over truncated series; the accumulator for the
    /// coefficient of degree `i` only needs `order - i` terms because each step
    /// multiplies by `inner = x * w`.
    pub fn compose(&self, inner: &Series) -> Result<Series> {
        if !inner.c0().is_zero() {
            return Err(Error::Composition);
        }
        let n = self.order().min(inner.order());
        if n == 1 {
            return Ok(self.truncate(1));
        }
        let w = &inner.coeffs[1..n];
        let mut acc = vec![self.coeffs[n - 1].clone()];
        for i in (0..n - 1).rev() {
            let len = n - 1 - i;
            let tail = mul_prefix(w, &acc, len);
            let mut next = Vec::with_capacity(len + 1);
            next.push(self.coeffs[i].clone());
            next.extend(tail);
            acc = next;
        }
        Ok(Series { coeffs: acc })
    }

    /// Compositional inverse `u` with `self(u) = x` and `u(0) = 0`.
    ///
    /// Writes `self = x * w` and solves the fixed point `u = x * psi(u)` with
    /// `psi = 1/w` one coefficient at a time, keeping a table of the powers of
    /// `u` so each new coefficient costs one column of convolutions.
    pub fn revert(&self) -> Result<Series> {
        let n = self.check_revertible()?;
        let psi = Series {
            coeffs: self.coeffs[1..].to_vec(),
        }
        .recip()?;
        let coeffs = match psi.to_integers() {
            Some(ints) => fixed_point(&ints, n)
                .into_iter()
                .map(Rational::from_integer)
                .collect(),
            None => fixed_point(&psi.coeffs, n),
        };
        Ok(Series { coeffs })
    }

    /// Compositional inverse by Newton iteration `u <- u - (s(u) - x) / s'(u)`,
    /// doubling the certified precision each round. Independent of
    /// [`Series::revert`]; the two are cross-checked by the identity suite.
    pub fn revert_newton(&self) -> Result<Series> {
        let n = self.check_revertible()?;
        let mut u = vec![Rational::zero(), self.coeffs[1].recip()];
        if n == 2 {
            return Ok(Series { coeffs: u });
        }
        let ds = self.derive()?;
        let mut p = 2;
        while p < n {
            let next = (2 * p).min(n);
            u.resize(next, Rational::zero());
            let guess = Series { coeffs: u.clone() };
            let residual = self.truncate(next).compose(&guess)?;
            let e = residual.coeffs[p..].to_vec();
            debug_assert!(residual.coeffs[..p]
                .iter()
                .enumerate()
                .all(|(i, c)| if i == 1 { c.is_one() } else { c.is_zero() }));
            let m = next - p;
            let slope = ds.truncate(m).compose(&guess.truncate(m))?;
            let corr = divide_prefix(&e, &slope.coeffs, m);
            for (i, c) in corr.into_iter().enumerate() {
                u[p + i] -= c;
            }
            p = next;
        }
        Ok(Series { coeffs: u })
    }

    fn check_revertible(&self) -> Result<usize> {
        if !self.c0().is_zero() {
            return Err(Error::Reversion);
        }
        match self.coeffs.get(1) {
            None => Err(Error::Precision {
                required: 2,
                available: 1,
            }),
            Some(c) if c.is_zero() => Err(Error::Reversion),
            Some(_) => Ok(self.order()),
        }
    }

    /// Termwise derivative; the result is one coefficient shorter.
    pub fn derive(&self) -> Result<Series> {
        if self.order() < 2 {
            return Err(Error::Precision {
                required: 2,
                available: self.order(),
            });
        }
        Ok(Series {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        })
    }

    /// Integer power by repeated squaring. Negative exponents need a nonzero
    /// constant term.
    pub fn powi(&self, e: i64) -> Result<Series> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut result = Series::one(self.order());
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(result)
    }

    /// Square root with constant term 1, by Newton iteration `r <- (r + s/r)/2`.
    pub fn sqrt(&self) -> Result<Series> {
        if !self.c0().is_one() {
            return Err(Error::UnsupportedBranch);
        }
        let n = self.order();
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let mut r = vec![Rational::one()];
        let mut p = 1;
        while p < n {
            let next = (2 * p).min(n);
            r.resize(next, Rational::zero());
            let guess = Series { coeffs: r };
            let q = self.truncate(next).checked_div(&guess)?;
            r = (&guess + &q).scale(&half).coeffs;
            p = next;
        }
        let root = Series { coeffs: r };
        if (&root * &root).first_mismatch(self).is_some() {
            return Err(Error::Inconsistency(
                "square root does not square back to its argument".into(),
            ));
        }
        Ok(root)
    }
}

impl PartialEq for Series {
    fn eq(&self, other: &Series) -> bool {
        self.first_mismatch(other).is_none()
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let n = self.order().min(rhs.order());
        Series {
            coeffs: mul_prefix(&self.coeffs, &rhs.coeffs, n),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order())
    }
}

/// Solves `u = x * psi(u)` to `n` coefficients. Generic so that integral
/// `psi` runs over `BigInt` and skips rational normalization.
fn fixed_point<T>(psi: &[T], n: usize) -> Vec<T>
where
    T: Clone + Zero + for<'a> AddAssign<&'a T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    let mut u = vec![T::zero(); n];
    // pow[j][t] = [x^t] u^j for 1 <= j <= t
    let mut pow = vec![vec![T::zero(); n]; n];
    for m in 1..n {
        let t = m - 1;
        pow[1][t] = u[t].clone();
        for j in 2..=t {
            let mut acc = T::zero();
            for i in 1..=(t + 1 - j) {
                if u[i].is_zero() {
                    continue;
                }
                let p = &pow[j - 1][t - i];
                if !p.is_zero() {
                    acc += &(&u[i] * p);
                }
            }
            pow[j][t] = acc;
        }
        let mut next = if t == 0 { psi[0].clone() } else { T::zero() };
        for j in 1..=t {
            if !psi[j].is_zero() && !pow[j][t].is_zero() {
                next += &(&psi[j] * &pow[j][t]);
            }
        }
        u[m] = next;
    }
    u
}

/// An integer rational function `num / den`, written `p0,p1,...[/q0,q1,...]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: Vec<BigInt>,
    pub den: Vec<BigInt>,
}

impl RationalFunction {
    pub fn polynomial(coeffs: &[i64]) -> Self {
        RationalFunction {
            num: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            den: vec![BigInt::one()],
        }
    }

    pub fn to_series(&self, order: usize) -> Result<Series> {
        Series::rational_function(&self.num, &self.den, order)
    }
}

impl std::str::FromStr for RationalFunction {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        fn coeffs(part: &str, text: &str) -> Result<Vec<BigInt>> {
            part.split(',')
                .map(|c| {
                    c.trim()
                        .parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("bad coefficient `{c}` in `{text}`")))
                })
                .collect()
        }
        let mut parts = text.split('/');
        let num = coeffs(parts.next().unwrap_or(""), text)?;
        let den = match parts.next() {
            Some(d) => coeffs(d, text)?,
            None => vec![BigInt::one()],
        };
        if parts.next().is_some() {
            return Err(Error::Parse(format!("more than one `/` in `{text}`")));
        }
        if den[0].is_zero() {
            return Err(Error::Parse(format!(
                "denominator of `{text}` has zero constant term"
            )));
        }
        Ok(RationalFunction { num, den })
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |p: &[BigInt]| {
            p.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}", join(&self.num))?;
        if !(self.den.len() == 1 && self.den[0].is_one()) {
            write!(f, "/{}", join(&self.den))?;
        }
        Ok(())
    }
}

/// Clears denominators: returns integers `c_i * l` and the common denominator `l`.
fn scaled(c: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let l = c.iter().fold(BigInt::one(), |l, q| {
        if q.denom().is_one() {
            l
        } else {
            l.lcm(q.denom())
        }
    });
    let ints = c
        .iter()
        .map(|q| {
            if l.is_one() {
                q.numer().clone()
            } else {
                q.numer() * (&l / q.denom())
            }
        })
        .collect();
    (ints, l)
}

/// First `n` coefficients of the Cauchy product. The convolution runs over
/// integers after clearing denominators, which skips per-term gcd reductions.
pub(crate) fn mul_prefix(a: &[Rational], b: &[Rational], n: usize) -> Vec<Rational> {
    let n = n.min(a.len()).min(b.len());
    let (ia, da) = scaled(&a[..n]);
    let (ib, db) = scaled(&b[..n]);
    let nz: Vec<usize> = (0..n).filter(|&i| !ia[i].is_zero()).collect();
    let den = da * db;
    (0..n)
        .map(|k| {
            let mut acc = BigInt::zero();
            for &i in nz.iter().take_while(|&&i| i <= k) {
                let bj = &ib[k - i];
                if !bj.is_zero() {
                    acc += &ia[i] * bj;
                }
            }
            if den.is_one() {
                Rational::from_integer(acc)
            } else {
                Rational::new(acc, den.clone())
            }
        })
        .collect()
}

/// First `n` coefficients of `a / b`, `b[0] != 0`, by long division.
fn divide_prefix(a: &[Rational], b: &[Rational], n: usize) -> Vec<Rational> {
    let n = n.min(a.len()).min(b.len());
    let (ia, da) = scaled(&a[..n]);
    let (ib, db) = scaled(&b[..n]);
    // a/b = (ia/da) / (ib/db) = (db/da) * ia/ib
    let factor = Rational::new(db, da);
    if ib[0].abs().is_one() {
        // Unit leading coefficient: the quotient stays integral.
        let lead = ib[0].clone();
        let mut q: Vec<BigInt> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = ia[k].clone();
            for i in 1..=k {
                if !ib[i].is_zero() {
                    acc -= &ib[i] * &q[k - i];
                }
            }
            q.push(acc * &lead);
        }
        return q
            .into_iter()
            .map(|c| Rational::from_integer(c) * &factor)
            .collect();
    }
    let lead = Rational::from_integer(ib[0].clone());
    let mut q: Vec<Rational> = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = Rational::from_integer(ia[k].clone());
        for i in 1..=k {
            if !ib[i].is_zero() {
                acc -= Rational::from_integer(ib[i].clone()) * &q[k - i];
            }
        }
        q.push(acc / &lead);
    }
    q.into_iter().map(|c| c * &factor).collect()
}

/// Checks the Lagrange inversion consequence
/// `[x^n] F(Rev v) = (1/n) [x^(n-1)] F'(x) (x/v)^n` for one index `n`.
///
/// The left side goes through [`Series::revert`]; the right side never
/// reverts anything, so agreement is a self-test of the reversion kernel.
pub fn lagrange_check(big_f: &Series, v: &Series, n: usize) -> Result<bool> {
    v.check_revertible()?;
    let limit = big_f.order().min(v.order());
    if n == 0 || n >= limit {
        return Err(Error::Precision {
            required: n + 1,
            available: limit,
        });
    }
    let lhs = big_f.compose(&v.revert()?)?.coeff(n)?.clone();
    let x_over_v = v.div_x()?.recip()?;
    let rhs_series = &big_f.derive()? * &x_over_v.powi(n as i64)?;
    let rhs = rhs_series.coeff(n - 1)? / rat(n as i64);
    Ok(lhs == rhs)
}

/// [`lagrange_check`] for every index `1 <= n < min(order)`, sharing the
/// reversion and the powers of `x/v`. Returns the first failing index.
pub fn lagrange_first_failure(big_f: &Series, v: &Series) -> Result<Option<usize>> {
    v.check_revertible()?;
    let limit = big_f.order().min(v.order());
    if limit < 2 {
        return Ok(None);
    }
    let lhs = big_f.compose(&v.revert()?)?;
    let dbig_f = big_f.derive()?;
    let x_over_v = v.div_x()?.recip()?;
    let mut power = x_over_v.clone();
    for n in 1..limit {
        let rhs = (&dbig_f * &power).coeff(n - 1)? / rat(n as i64);
        if *lhs.coeff(n)? != rhs {
            return Ok(Some(n));
        }
        power = &power * &x_over_v;
    }
    Ok(None)
}
