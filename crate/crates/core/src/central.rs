//! Shifted central triangles and their factorization through the original
//! array.
//!
//! For a Riordan array `A = (g, x f)` and a shift `s >= 0`, the shifted
//! central triangle has entries `a_{2n+s, n+k+s}`. With
//! `phi = Rev(x / f)` it factors as
//!
//! ```text
//! c(A; s) = (phi' f(phi)^(s-1), phi) * A = (phi' g(phi) f(phi)^(s-1), phi f(phi))
//! ```
//!
//! Shift labels: the canonical parameter here is `s`. Literature that counts
//! the central triangle `a_{2n, n+k}` as `c(A;1)` and `a_{2n+1, n+k+1}` as
//! `c(A;2)` uses label `r = s + 1`; [`Shift::from_label`] converts.
//! The general-element form `a_{2n+r, n+k+r}` is read with `r = s` directly.
//!
//! Expressions written `phi(f(phi))` in some statements of the transition
//! identities are read as the product `phi * f(phi)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::fps::Series;
use crate::riordan::{RiordanArray, Triangle};

/// Canonical shift `s`: entries `a_{2n+s, n+k+s}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shift(usize);

impl Shift {
    pub const CENTRAL: Shift = Shift(0);

    pub fn new(s: usize) -> Self {
        Shift(s)
    }

    /// Label `r >= 1` of the `c(A;r)` naming where `c(A;1) = (a_{2n, n+k})`.
    pub fn from_label(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::Parse("label r must be at least 1".into()));
        }
        Ok(Shift(r - 1))
    }

    pub fn value(self) -> usize {
        self.0
    }

    pub fn label(self) -> usize {
        self.0 + 1
    }

    pub fn next(self) -> Shift {
        Shift(self.0 + 1)
    }
}

impl TryFrom<i64> for Shift {
    type Error = Error;

    fn try_from(s: i64) -> Result<Self> {
        usize::try_from(s)
            .map(Shift)
            .map_err(|_| Error::Parse(format!("shift must be non-negative, got {s}")))
    }
}

impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s={} (c(A;{}))", self.0, self.label())
    }
}

/// `phi = Rev(x / f)` and its derivative.
#[derive(Clone, Debug)]
pub struct Phi {
    pub phi: Series,
    pub dphi: Series,
}

/// Computes `phi` and `phi'` for `A`. `phi` is certified to `A.order() + 1`
/// coefficients, `phi'` to `A.order()`.
pub fn phi_of(a: &RiordanArray) -> Phi {
    let x_over_f = a.ft().recip().expect("f(0) = 1").mul_x();
    let phi = x_over_f.revert().expect("x/f is revertible");
    let dphi = phi.derive().expect("phi has order >= 2");
    Phi { phi, dphi }
}

/// The factorization `combined = left * base` of one shifted central triangle.
#[derive(Clone, Debug)]
pub struct CentralDecomposition {
    pub shift: Shift,
    pub phi: Phi,
    /// `(phi' f(phi)^(s-1), phi)`.
    pub left: RiordanArray,
    pub base: RiordanArray,
    /// `(phi' g(phi) f(phi)^(s-1), phi f(phi))`.
    pub combined: RiordanArray,
}

impl CentralDecomposition {
    /// `f(phi)` at the certified order.
    pub fn f_of_phi(&self) -> Series {
        self.base.ft().compose(&self.phi.phi).expect("phi(0) = 0")
    }
}

/// Brute-force extraction `a_{2n+s, n+k+s}` from the triangle of `A`.
pub fn central_direct(a: &RiordanArray, s: Shift, n_rows: usize) -> Result<Triangle> {
    if n_rows == 0 {
        return Triangle::new(Vec::new());
    }
    let need = 2 * n_rows - 1 + s.value();
    let tri = a.triangle(need)?;
    let rows = (0..n_rows)
        .map(|n| {
            (0..=n)
                .map(|k| tri.get(2 * n + s.value(), n + k + s.value()))
                .collect()
        })
        .collect();
    Triangle::new(rows)
}

/// Builds the factorization for shift `s` and checks `left * base == combined`.
pub fn central_array(a: &RiordanArray, s: Shift) -> Result<CentralDecomposition> {
    let phi = phi_of(a);
    central_with_phi(a, s, phi)
}

fn central_with_phi(a: &RiordanArray, s: Shift, phi: Phi) -> Result<CentralDecomposition> {
    let f_phi = a.ft().compose(&phi.phi)?;
    let g_phi = a.g().compose(&phi.phi)?;
    let weight = f_phi.powi(s.value() as i64 - 1)?;
    let left_g = &phi.dphi * &weight;
    let phi_over_x = phi.phi.div_x()?;
    let left = RiordanArray::new(left_g.clone(), phi_over_x.clone())?;
    let combined = RiordanArray::new(&left_g * &g_phi, &phi_over_x * &f_phi)?;
    let product = &left * a;
    if let Some((part, i)) = product.first_mismatch(&combined) {
        return Err(Error::IdentityViolation(format!(
            "factorization at {s}: left*base and closed form differ in {part} at coefficient {i}"
        )));
    }
    Ok(CentralDecomposition {
        shift: s,
        phi,
        left,
        base: a.clone(),
        combined,
    })
}

/// Shifted central triangle of the Bell-subgroup array `(ft, x ft)`; also
/// checks that the first component collapses to `phi' f(phi)^s`.
pub fn bell_central(ft: &Series, s: Shift) -> Result<CentralDecomposition> {
    let a = RiordanArray::new(ft.clone(), ft.clone())?;
    let d = central_array(&a, s)?;
    let simplified = &d.phi.dphi * &d.f_of_phi().powi(s.value() as i64)?;
    if let Some(i) = simplified.first_mismatch(d.combined.g()) {
        return Err(Error::IdentityViolation(format!(
            "Bell collapse phi' f(phi)^{} differs at coefficient {i}",
            s.value()
        )));
    }
    Ok(d)
}

/// Generating function of the central elements `a_{2n,n}`: `phi' g(phi) / f(phi)`.
pub fn central_column_gf(a: &RiordanArray) -> Series {
    let Phi { phi, dphi } = phi_of(a);
    let g_phi = a.g().compose(&phi).expect("phi(0) = 0");
    let f_phi = a.ft().compose(&phi).expect("phi(0) = 0");
    (&dphi * &g_phi)
        .checked_div(&f_phi)
        .expect("f(phi) has constant term 1")
}

/// Outcome of [`central_inverse`]: the group inverse plus how the two printed
/// closed forms compare with it.
#[derive(Clone, Debug)]
pub struct CentralInverse {
    /// Group inverse of the combined array; authoritative.
    pub inverse: RiordanArray,
    /// First component `1 / (g(vbar) f(vbar)^(s-1) phi'(vbar / f(vbar)))`.
    pub vbar_reading_matches: bool,
    /// First component `1 / (phi'(x / f(x)) g(vbar) f(vbar)^(s-1))`.
    pub literal_reading_matches: bool,
    /// Closed-form multiplier `vbar / f(vbar)` matches the inverse.
    pub multiplier_matches: bool,
}

/// `vbar / f(vbar)` and `vbar^2 / x` for `v = x f`; these coincide for every
/// proper array.
pub fn vbar_forms(a: &RiordanArray) -> Result<(Series, Series)> {
    let vbar = a.multiplier().revert()?;
    let f_vbar = a.ft().compose(&vbar)?;
    let lhs = (&vbar.div_x()? * &f_vbar.recip()?).mul_x();
    let rhs = (&vbar * &vbar).div_x()?;
    Ok((lhs, rhs))
}

/// Inverse of the shifted central triangle, compared with both readings of
/// the closed form.
pub fn central_inverse(a: &RiordanArray, s: Shift) -> Result<CentralInverse> {
    let d = central_array(a, s)?;
    let inverse = d.combined.inverse();
    let vbar = a.multiplier().revert()?;
    let f_vbar = a.ft().compose(&vbar)?;
    let g_vbar = a.g().compose(&vbar)?;
    // vbar / f(vbar), zero constant term
    let t = (&vbar.div_x()? * &f_vbar.recip()?).mul_x();
    let weight = &g_vbar * &f_vbar.powi(s.value() as i64 - 1)?;

    let dphi_at_t = d.phi.dphi.compose(&t)?;
    let vbar_reading = (&weight * &dphi_at_t).recip()?;

    let x_over_f = a.ft().recip()?.mul_x();
    let dphi_at_x_over_f = d.phi.dphi.compose(&x_over_f)?;
    let literal_reading = (&weight * &dphi_at_x_over_f).recip()?;

    let multiplier = t.div_x()?;
    Ok(CentralInverse {
        vbar_reading_matches: vbar_reading == *inverse.g(),
        literal_reading_matches: literal_reading == *inverse.g(),
        multiplier_matches: multiplier == *inverse.ft(),
        inverse,
    })
}

/// Z-sequence of the shifted central triangle, checked against
/// `A(x)^2 / x * (1 - G_inv)` where `A(x)` is the base A-sequence and `G_inv`
/// the closed-form first component of the inverse.
pub fn z_of_central(a: &RiordanArray, s: Shift) -> Result<Series> {
    let d = central_array(a, s)?;
    let z = d.combined.z_sequence();

    let vbar = a.multiplier().revert()?;
    let f_vbar = a.ft().compose(&vbar)?;
    let g_vbar = a.g().compose(&vbar)?;
    let t = (&vbar.div_x()? * &f_vbar.recip()?).mul_x();
    let g_inv =
        (&(&g_vbar * &f_vbar.powi(s.value() as i64 - 1)?) * &d.phi.dphi.compose(&t)?).recip()?;
    let a_sq = a.a_sequence().powi(2)?;
    let closed = &a_sq * &(&Series::one(g_inv.order()) - &g_inv).div_x()?;
    if let Some(i) = closed.first_mismatch(&z) {
        return Err(Error::IdentityViolation(format!(
            "Z-sequence of central triangle at {s}: closed form differs at coefficient {i}"
        )));
    }
    Ok(z)
}

/// A-sequence of the shifted central triangle; must equal the square of the
/// base A-sequence.
pub fn a_of_central(a: &RiordanArray, s: Shift) -> Result<Series> {
    let d = central_array(a, s)?;
    let got = d.combined.a_sequence();
    let squared = a.a_sequence().powi(2)?;
    if let Some(i) = got.first_mismatch(&squared) {
        return Err(Error::IdentityViolation(format!(
            "A-sequence of central triangle at {s} is not A(x)^2: differs at coefficient {i}"
        )));
    }
    Ok(got)
}

/// A-sequence of a product `B * A` from the A-sequences of its factors:
/// `A_inner(x) * A_outer(x / A_inner(x))`, with `A_outer` belonging to the
/// left factor `B` and `A_inner` to the right factor `A`.
pub fn product_aseq(a_outer: &Series, a_inner: &Series) -> Result<Series> {
    let arg = a_inner.recip()?.mul_x();
    let outer_at = a_outer.compose(&arg)?;
    Ok(a_inner * &outer_at)
}

fn expect_multiplier_x(t: &RiordanArray, what: &str) -> Result<()> {
    if let Some(i) = t.ft().first_mismatch(&Series::one(t.order())) {
        return Err(Error::IdentityViolation(format!(
            "{what}: multiplier is not x (coefficient {i} of f)"
        )));
    }
    Ok(())
}

/// `c(A; s+1) * c(A; s)^{-1}`; must be `(f(phi), x)`.
pub fn transition_right(a: &RiordanArray, s: Shift) -> Result<RiordanArray> {
    let lo = central_array(a, s)?;
    let hi = central_with_phi(a, s.next(), lo.phi.clone())?;
    let t = &hi.combined * &lo.combined.inverse();
    expect_multiplier_x(&t, "right transition")?;
    if let Some(i) = t.g().first_mismatch(&lo.f_of_phi()) {
        return Err(Error::IdentityViolation(format!(
            "right transition at {s}: first component is not f(phi) (coefficient {i})"
        )));
    }
    Ok(t)
}

/// `c(A; s)^{-1} * c(A; s+1)`; must be `(x / phi(Rev(phi f(phi))), x)`.
pub fn transition_left(a: &RiordanArray, s: Shift) -> Result<RiordanArray> {
    let lo = central_array(a, s)?;
    let hi = central_with_phi(a, s.next(), lo.phi.clone())?;
    let t = &lo.combined.inverse() * &hi.combined;
    expect_multiplier_x(&t, "left transition")?;
    let expected = left_transition_closed_form(&lo)?;
    if let Some(i) = t.g().first_mismatch(&expected) {
        return Err(Error::IdentityViolation(format!(
            "left transition at {s}: first component is not x/phi(Rev(phi f(phi))) (coefficient {i})"
        )));
    }
    Ok(t)
}

/// `x / phi(Rev(phi f(phi)))`, computed without any group inverse.
pub fn left_transition_closed_form(d: &CentralDecomposition) -> Result<Series> {
    let phi_f_phi = d.combined.multiplier();
    let rev = phi_f_phi.revert()?;
    let phi_at = d.phi.phi.compose(&rev)?;
    phi_at.div_x()?.recip()
}

/// `c(A;0)^{-1} * c(A;1) * c(A;0)^{-1}`, checked against the inverse of
/// `(phi' g(phi) / f(phi)^2, phi f(phi))`.
pub fn conjugation(a: &RiordanArray) -> Result<RiordanArray> {
    let c0 = central_array(a, Shift::CENTRAL)?;
    let c1 = central_with_phi(a, Shift::new(1), c0.phi.clone())?;
    let c0_inv = c0.combined.inverse();
    let triple = &(&c0_inv * &c1.combined) * &c0_inv;

    let g_phi = a.g().compose(&c0.phi.phi)?;
    let f_phi = c0.f_of_phi();
    let closed_g = (&c0.phi.dphi * &g_phi).checked_div(&f_phi.powi(2)?)?;
    let closed = RiordanArray::new(closed_g, c0.combined.ft().clone())?.inverse();
    if let Some((part, i)) = triple.first_mismatch(&closed) {
        return Err(Error::IdentityViolation(format!(
            "conjugation identity differs in {part} at coefficient {i}"
        )));
    }
    Ok(triple)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fps::rat;

    fn geometric(order: usize) -> Series {
        Series::from_ints(&vec![1; order])
    }

    fn catalan(order: usize) -> Series {
        let mut c = vec![1i64];
        for n in 1..order {
            c.push((0..n).map(|i| c[i] * c[n - 1 - i]).sum());
        }
        Series::from_ints(&c)
    }

    fn ints(s: &Series) -> Vec<i64> {
        s.to_integers()
            .unwrap()
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    fn pascal(order: usize) -> RiordanArray {
        RiordanArray::new(geometric(order), geometric(order)).unwrap()
    }

    fn binomial(n: u64, k: u64) -> i64 {
        (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1)) as i64
    }

    #[test]
    fn shift_labels() {
        assert_eq!(Shift::from_label(1).unwrap(), Shift::new(0));
        assert_eq!(Shift::from_label(2).unwrap().value(), 1);
        assert!(Shift::from_label(0).is_err());
        assert!(Shift::try_from(-1i64).is_err());
        assert_eq!(Shift::new(1).to_string(), "s=1 (c(A;2))");
    }

    #[test]
    fn phi_of_inverse_catalan() {
        let inv_c = catalan(10).recip().unwrap();
        let a = RiordanArray::new(inv_c.clone(), inv_c).unwrap();
        let phi = phi_of(&a);
        assert_eq!(ints(&phi.phi), {
            let mut v = vec![0; 11];
            v[1] = 1;
            v[2] = -1;
            v
        });
        assert_eq!(ints(&phi.dphi.truncate(3)), vec![1, -2, 0]);
    }

    #[test]
    fn phi_of_catalan_bell() {
        let a = RiordanArray::new(catalan(8), catalan(8)).unwrap();
        let phi = phi_of(&a);
        assert_eq!(ints(&phi.phi.truncate(6)), vec![0, 1, 1, 3, 12, 55]);
        let x_over_f = a.ft().recip().unwrap().mul_x();
        assert_eq!(x_over_f.compose(&phi.phi).unwrap(), Series::x(9));
    }

    #[test]
    fn identity_is_fixed() {
        let id = RiordanArray::identity(12);
        for s in 0..4 {
            let d = central_array(&id, Shift::new(s)).unwrap();
            assert_eq!(d.combined, RiordanArray::identity(12));
            assert_eq!(
                central_direct(&id, Shift::new(s), 5).unwrap(),
                Triangle::identity(5)
            );
        }
        assert_eq!(ints(&central_column_gf(&id)), {
            let mut v = vec![0; 12];
            v[0] = 1;
            v
        });
    }

    #[test]
    fn pascal_central_is_binomial() {
        let p = pascal(20);
        for s in 0..3u64 {
            let d = central_direct(&p, Shift::new(s as usize), 6).unwrap();
            for n in 0..6u64 {
                for k in 0..=n {
                    assert_eq!(
                        d.get(n as usize, k as usize),
                        rat(binomial(2 * n + s, n + k + s))
                    );
                }
            }
            let c = central_array(&p, Shift::new(s as usize)).unwrap();
            assert_eq!(c.combined.triangle(6).unwrap(), d);
        }
    }

    #[test]
    fn central_direct_needs_order() {
        let p = pascal(10);
        assert!(central_direct(&p, Shift::new(0), 5).is_ok());
        assert!(matches!(
            central_direct(&p, Shift::new(2), 5),
            Err(Error::Precision {
                required: 11,
                available: 10
            })
        ));
    }

    #[test]
    fn bell_examples() {
        let d = bell_central(&catalan(10), Shift::CENTRAL).unwrap();
        assert_eq!(ints(&d.combined.g().truncate(5)), vec![1, 2, 9, 48, 275]);
        let id = bell_central(&Series::one(8), Shift::new(2)).unwrap();
        assert_eq!(id.combined, RiordanArray::identity(8));
        let pas = bell_central(&geometric(10), Shift::CENTRAL).unwrap();
        assert_eq!(ints(&pas.combined.g().truncate(5)), vec![1, 2, 6, 20, 70]);
    }

    #[test]
    fn product_aseq_trivial_and_squaring() {
        let a_inner = Series::from_ints(&[1, 3, -1, 2, 0, 5]);
        assert_eq!(product_aseq(&Series::one(6), &a_inner).unwrap(), a_inner);
        // Left factor (phi'/f(phi), phi) has A-sequence f.
        let a = RiordanArray::new(
            geometric(10),
            Series::from_ints(&[1, 2, 0, -1, 3, 1, 1, 0, 2, 1]),
        )
        .unwrap();
        let d = central_array(&a, Shift::CENTRAL).unwrap();
        assert_eq!(d.left.a_sequence(), *a.ft());
        let got = product_aseq(a.ft(), &a.a_sequence()).unwrap();
        assert_eq!(got, a.a_sequence().powi(2).unwrap());
    }

    #[test]
    fn pascal_transitions() {
        let p = pascal(16);
        let left = transition_left(&p, Shift::CENTRAL).unwrap();
        assert_eq!(ints(&left.g().truncate(5)), vec![1, 1, 0, 0, 0]);
        let right = transition_right(&p, Shift::CENTRAL).unwrap();
        assert_eq!(ints(&right.g().truncate(6)), vec![1, 1, 2, 5, 14, 42]);
    }

    #[test]
    fn vbar_identity_holds() {
        let a = RiordanArray::new(
            geometric(10),
            Series::from_ints(&[1, -2, 3, 0, 1, 1, -1, 2, 0, 4]),
        )
        .unwrap();
        let (lhs, rhs) = vbar_forms(&a).unwrap();
        assert_eq!(lhs, rhs);
    }
}
