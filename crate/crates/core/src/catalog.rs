//! Named Riordan arrays with exact generators and embedded reference data.
//!
//! Generators avoid the series kernel where they can: Catalan numbers come
//! from the convolution recurrence `c_n = sum c_i c_{n-1-i}` and rational
//! functions from integer long division, so fixtures stay independent of the
//! code under test.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fps::{Rational, RationalFunction, Series};
use crate::riordan::RiordanArray;

/// One embedded reference sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reference {
    pub tag: &'static str,
    pub values: &'static [i64],
    pub provenance: &'static str,
}

/// A catalog array: its generator and its regression data.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    generator: fn(usize) -> RiordanArray,
    pub references: &'static [Reference],
}

impl CatalogEntry {
    /// The array at exactly `order` coefficients.
    pub fn generate(&self, order: usize) -> RiordanArray {
        (self.generator)(order.max(1))
    }

    pub fn reference(&self, tag: &str) -> Option<&'static Reference> {
        self.references.iter().find(|r| r.tag == tag)
    }
}

const fn r(tag: &'static str, values: &'static [i64], provenance: &'static str) -> Reference {
    Reference {
        tag,
        values,
        provenance,
    }
}

static ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "pascal",
        description: "binomial matrix (1/(1-x), x/(1-x)), A007318",
        generator: pascal,
        references: &[
            r("row_4", &[1, 4, 6, 4, 1], "binomial(4, k)"),
            r("central_s0", &[1, 2, 6, 20, 70, 252], "binomial(2n, n)"),
            r(
                "central_triangle_s0_row_3",
                &[20, 15, 6, 1],
                "binomial(6, 3+k)",
            ),
            r("a_seq_central", &[1, 2, 1, 0, 0, 0], "(1+x)^2"),
            r("transition_left_s0", &[1, 1, 0, 0, 0], "(1+x, x)"),
            r(
                "transition_right_s0",
                &[1, 1, 2, 5, 14, 42],
                "(c(x), x), Catalan numbers",
            ),
        ],
    },
    CatalogEntry {
        name: "delannoy",
        description: "(1/(1-x), x(1+x)/(1-x)), A008288",
        generator: delannoy,
        references: &[
            r("row_4", &[1, 7, 13, 7, 1], "A008288 row 4"),
            r("row_5", &[1, 9, 25, 25, 9, 1], "A008288 row 5"),
            r(
                "central_s0",
                &[1, 3, 13, 63, 321, 1683],
                "central Delannoy numbers",
            ),
            r(
                "central_triangle_s0_row_5",
                &[1683, 1289, 575, 145, 19, 1],
                "a(10, 5+k)",
            ),
            r("z_central_s0", &[3, 4, -4, 12], "2 + x + sqrt(1+6x+x^2)"),
            r(
                "central_triangle_s1_row_4",
                &[681, 377, 113, 17, 1],
                "a(9, 5+k)",
            ),
            r(
                "conjugation_inverse_col_0",
                &[1, 1, 5, 25, 129, 681],
                "A002002; column 0 of (phi' g(phi)/f(phi)^2, phi f(phi))",
            ),
            r(
                "conjugation_inverse_row_5",
                &[681, 681, 377, 113, 17, 1],
                "row 5 of (phi' g(phi)/f(phi)^2, phi f(phi))",
            ),
        ],
    },
    CatalogEntry {
        name: "catalan_bell",
        description: "(c(x), x c(x)), A033184",
        generator: catalan_bell,
        references: &[
            r("column_0", &[1, 1, 2, 5, 14, 42], "Catalan numbers"),
            r("row_5", &[42, 42, 28, 14, 5, 1], "A033184 row 5"),
            r(
                "central_s0",
                &[1, 2, 9, 48, 275, 1638, 9996, 62016],
                "(n+1)/(2n+1) binomial(3n, n)",
            ),
            r(
                "central_triangle_s0_row_5",
                &[1638, 637, 208, 54, 10, 1],
                "a(10, 5+k)",
            ),
            r(
                "phi",
                &[0, 1, 1, 3, 12, 55],
                "1/(2n-1) binomial(3n-3, n-1), A001764",
            ),
            r("a_seq_central", &[1, 2, 3, 4, 5, 6, 7, 8], "1/(1-x)^2"),
            r(
                "production_central_s0_col_0",
                &[2, 5, 10, 19, 36, 69],
                "Z-sequence of the central triangle",
            ),
        ],
    },
    CatalogEntry {
        name: "inv_catalan",
        description: "(1/c(x), x/c(x))",
        generator: inv_catalan,
        references: &[
            r("phi", &[0, 1, -1, 0, 0, 0], "x(1-x)"),
            r("central_g_s0", &[1, -2, 0, 0, 0, 0], "1-2x"),
            r("central_multiplier_s0", &[0, 1, -2, 1, 0, 0], "x(1-x)^2"),
        ],
    },
    CatalogEntry {
        name: "schroeder_neg",
        description: "(1/(1-x), x(1-x)/(1+x))",
        generator: schroeder_neg,
        references: &[],
    },
    CatalogEntry {
        name: "identity",
        description: "identity array (1, x)",
        generator: RiordanArray::identity,
        references: &[],
    },
];

/// All catalog entries.
pub fn entries() -> &'static [CatalogEntry] {
    ENTRIES
}

pub fn lookup(name: &str) -> Result<&'static CatalogEntry> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Lookup(name.to_string()))
}

/// The named array at exactly `order` coefficients.
pub fn get(name: &str, order: usize) -> Result<RiordanArray> {
    Ok(lookup(name)?.generate(order))
}

pub fn references(name: &str) -> Result<&'static [Reference]> {
    Ok(lookup(name)?.references)
}

/// Where an array comes from: a catalog entry or a pair of exact rational
/// functions. Either can be regenerated at any order.
#[derive(Debug, Clone)]
pub enum ArraySource {
    Catalog(&'static CatalogEntry),
    Rational {
        g: RationalFunction,
        ft: RationalFunction,
    },
}

impl ArraySource {
    pub fn named(name: &str) -> Result<Self> {
        lookup(name).map(ArraySource::Catalog)
    }

    /// Validates the normalization up front.
    pub fn rational(g: RationalFunction, ft: RationalFunction) -> Result<Self> {
        let src = ArraySource::Rational { g, ft };
        src.at_order(1)?;
        Ok(src)
    }

    pub fn label(&self) -> String {
        match self {
            ArraySource::Catalog(e) => e.name.to_string(),
            ArraySource::Rational { g, ft } => format!("g={g};f={ft}"),
        }
    }

    pub fn catalog_entry(&self) -> Option<&'static CatalogEntry> {
        match self {
            ArraySource::Catalog(e) => Some(e),
            ArraySource::Rational { .. } => None,
        }
    }

    pub fn at_order(&self, order: usize) -> Result<RiordanArray> {
        let order = order.max(1);
        match self {
            ArraySource::Catalog(e) => Ok(e.generate(order)),
            ArraySource::Rational { g, ft } => {
                RiordanArray::new(g.to_series(order)?, ft.to_series(order)?)
            }
        }
    }
}

/// Catalan numbers `c_0 .. c_{order-1}` from `c_n = sum c_i c_{n-1-i}`.
pub fn catalan_numbers(order: usize) -> Vec<BigInt> {
    let mut c: Vec<BigInt> = Vec::with_capacity(order);
    if order == 0 {
        return c;
    }
    c.push(BigInt::one());
    for n in 1..order {
        let next = (0..n).fold(BigInt::zero(), |acc, i| acc + &c[i] * &c[n - 1 - i]);
        c.push(next);
    }
    c
}

/// `num / den` by integer long division; `den[0]` must be `1`.
fn long_division(num: &[i64], den: &[i64], order: usize) -> Series {
    assert_eq!(den[0], 1, "catalog denominators are monic at 0");
    let at = |p: &[i64], i: usize| BigInt::from(p.get(i).copied().unwrap_or(0));
    let mut q: Vec<BigInt> = Vec::with_capacity(order);
    for k in 0..order {
        let mut acc = at(num, k);
        for i in 1..=k.min(den.len().saturating_sub(1)) {
            acc -= at(den, i) * &q[k - i];
        }
        q.push(acc);
    }
    series_of(q)
}

fn series_of(c: Vec<BigInt>) -> Series {
    Series::new(c.into_iter().map(Rational::from_integer).collect())
        .expect("catalog series are non-empty")
}

fn pascal(order: usize) -> RiordanArray {
    let geo = long_division(&[1], &[1, -1], order);
    RiordanArray::new(geo.clone(), geo).expect("normalized")
}

fn delannoy(order: usize) -> RiordanArray {
    RiordanArray::new(
        long_division(&[1], &[1, -1], order),
        long_division(&[1, 1], &[1, -1], order),
    )
    .expect("normalized")
}

fn schroeder_neg(order: usize) -> RiordanArray {
    RiordanArray::new(
        long_division(&[1], &[1, -1], order),
        long_division(&[1, -1], &[1, 1], order),
    )
    .expect("normalized")
}

fn catalan_bell(order: usize) -> RiordanArray {
    let c = series_of(catalan_numbers(order));
    RiordanArray::new(c.clone(), c).expect("normalized")
}

/// `1/c = 1 - x c`, from `c = 1 + x c^2`.
fn inv_catalan(order: usize) -> RiordanArray {
    let c = catalan_numbers(order);
    let mut inv: Vec<BigInt> = Vec::with_capacity(order);
    inv.push(BigInt::one());
    inv.extend(c.iter().take(order - 1).map(|v| -v));
    let s = series_of(inv);
    RiordanArray::new(s.clone(), s).expect("normalized")
}
