//! Acceptance gates. Each criterion prints one line.
//!
//! Criterion 9 is known to fail: its printed matrix is the inverse of the
//! triple product for a different array (see the supplementary check). It is
//! run literally and reported as FAIL. The process exits non-zero on any
//! other failure, or if criterion 9 unexpectedly starts passing.
//!
//! Expected values are the printed matrices and sequences, typed in here
//! rather than read from the catalog, so a regression in the catalog data
//! cannot mask a regression in the kernel.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use riordan_central::catalog::{self, catalan_numbers};
use riordan_central::central::{self, Shift};
use riordan_central::fps::{rat, Rational, Series};
use riordan_central::riordan::{ProductionMatrix, RiordanArray, Triangle};
use riordan_central::suite::{fuzz, FuzzConfig};

type Outcome = Result<String, String>;

/// Id, title, body.
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn tri(rows: &[&[i64]]) -> Triangle {
    Triangle::from_ints(rows).expect("well-formed literal")
}

fn same_triangle(what: &str, got: &Triangle, want: &Triangle) -> Result<(), String> {
    if got.n_rows() < want.n_rows() {
        return Err(format!("{what}: only {} rows", got.n_rows()));
    }
    match got.truncate(want.n_rows()).first_mismatch(want) {
        None => Ok(()),
        Some((n, k)) => Err(format!(
            "{what}: entry ({n},{k}) is {}, expected {}",
            got.get(n, k),
            want.get(n, k)
        )),
    }
}

fn same_series(what: &str, got: &Series, want: &Series, order: usize) -> Result<(), String> {
    if got.order() < order || want.order() < order {
        return Err(format!(
            "{what}: orders {} and {} below {order}",
            got.order(),
            want.order()
        ));
    }
    match got.truncate(order).first_mismatch(&want.truncate(order)) {
        None => Ok(()),
        Some(i) => Err(format!(
            "{what}: coefficient {i} is {}, expected {}",
            got.coeffs()[i],
            want.coeffs()[i]
        )),
    }
}

fn ints(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| rat(v)).collect()
}

fn get(name: &str, order: usize) -> RiordanArray {
    catalog::get(name, order).expect("catalog entry")
}

const DELANNOY_CENTRAL: &[&[i64]] = &[
    &[1],
    &[3, 1],
    &[13, 7, 1],
    &[63, 41, 11, 1],
    &[321, 231, 85, 15, 1],
    &[1683, 1289, 575, 145, 19, 1],
];

const CONJUGATION_PRINTED: &[&[i64]] = &[
    &[1],
    &[1, 1],
    &[5, 5, 1],
    &[25, 25, 9, 1],
    &[129, 129, 61, 13, 1],
    &[681, 681, 377, 113, 17, 1],
];

fn criterion_1() -> Outcome {
    let a = get("delannoy", 6);
    let want = tri(&[
        &[1],
        &[1, 1],
        &[1, 3, 1],
        &[1, 5, 5, 1],
        &[1, 7, 13, 7, 1],
        &[1, 9, 25, 25, 9, 1],
    ]);
    same_triangle(
        "triangle",
        &a.triangle(6).map_err(|e| e.to_string())?,
        &want,
    )?;
    Ok("6 rows exact".into())
}

fn criterion_2() -> Outcome {
    let a = get("delannoy", 12);
    let want = tri(DELANNOY_CENTRAL);
    let direct = central::central_direct(&a, Shift::CENTRAL, 6).map_err(|e| e.to_string())?;
    same_triangle("central_direct", &direct, &want)?;
    let d = central::central_array(&a, Shift::CENTRAL).map_err(|e| e.to_string())?;
    let factored = d.combined.triangle(6).map_err(|e| e.to_string())?;
    same_triangle("factorization", &factored, &want)?;
    Ok("central_direct and factorization agree through row 5".into())
}

fn criterion_3() -> Outcome {
    let order = 16;
    let a = get("delannoy", order);
    let gf = central::central_column_gf(&a);
    let printed = Series::new(ints(&[1, 3, 13, 63, 321, 1683])).unwrap();
    same_series("printed centrals", &gf, &printed, 6)?;
    let root = Series::polynomial(&[1, -6, 1], order)
        .sqrt()
        .and_then(|r| r.recip())
        .map_err(|e| e.to_string())?;
    same_series("1/sqrt(1-6x+x^2)", &gf, &root, order)?;
    Ok(format!(
        "1,3,13,63,321,1683 and 1/sqrt(1-6x+x^2) to order {order}"
    ))
}

fn criterion_4() -> Outcome {
    let a = get("catalan_bell", 16);
    let base = tri(&[
        &[1],
        &[1, 1],
        &[2, 2, 1],
        &[5, 5, 3, 1],
        &[14, 14, 9, 4, 1],
        &[42, 42, 28, 14, 5, 1],
    ]);
    same_triangle("base", &a.triangle(6).map_err(|e| e.to_string())?, &base)?;
    let central_want = tri(&[
        &[1],
        &[2, 1],
        &[9, 4, 1],
        &[48, 20, 6, 1],
        &[275, 110, 35, 8, 1],
        &[1638, 637, 208, 54, 10, 1],
    ]);
    let direct = central::central_direct(&a, Shift::CENTRAL, 6).map_err(|e| e.to_string())?;
    same_triangle("central_direct", &direct, &central_want)?;
    let d = central::central_array(&a, Shift::CENTRAL).map_err(|e| e.to_string())?;
    same_triangle(
        "factorization",
        &d.combined.triangle(6).map_err(|e| e.to_string())?,
        &central_want,
    )?;
    let centrals = Series::new(ints(&[1, 2, 9, 48, 275, 1638, 9996, 62016])).unwrap();
    same_series(
        "central elements",
        &central::central_column_gf(&a),
        &centrals,
        8,
    )?;
    Ok("base, central triangle and centrals through 62016".into())
}

fn production_both_ways(a: &RiordanArray, n_rows: usize) -> Result<ProductionMatrix, String> {
    let tri = a.triangle(n_rows + 1).map_err(|e| e.to_string())?;
    let by_matrix = ProductionMatrix::from_triangle(&tri).map_err(|e| e.to_string())?;
    let by_sequences = ProductionMatrix::from_sequences(&a.z_sequence(), &a.a_sequence(), n_rows)
        .map_err(|e| e.to_string())?;
    if let Some((n, j)) = by_matrix.first_mismatch(&by_sequences) {
        return Err(format!(
            "matrix algebra and A/Z assembly differ at ({n},{j})"
        ));
    }
    Ok(by_matrix)
}

fn criterion_5() -> Outcome {
    let a = get("catalan_bell", 16);
    let p = production_both_ways(&a, 6)?;
    for n in 0..6 {
        if p.rows()[n].iter().any(|c| *c != rat(1)) {
            return Err(format!("base production row {n} is not all ones"));
        }
    }
    let c = central::central_array(&a, Shift::CENTRAL)
        .map_err(|e| e.to_string())?
        .combined;
    let pc = production_both_ways(&c, 6)?;
    let want: [&[i64]; 6] = [
        &[2, 1],
        &[5, 2, 1],
        &[10, 3, 2, 1],
        &[19, 4, 3, 2, 1],
        &[36, 5, 4, 3, 2, 1],
        &[69, 6, 5, 4, 3, 2, 1],
    ];
    for (n, row) in want.iter().enumerate() {
        if pc.rows()[n] != ints(row) {
            return Err(format!("central production row {n} differs"));
        }
    }
    Ok("both constructions agree on 6 rows".into())
}

fn criterion_6() -> Outcome {
    let order = 16;
    let a = get("inv_catalan", order);
    let d = central::central_array(&a, Shift::CENTRAL).map_err(|e| e.to_string())?;
    same_series(
        "g",
        d.combined.g(),
        &Series::polynomial(&[1, -2], order),
        order,
    )?;
    same_series(
        "multiplier",
        &d.combined.multiplier(),
        &Series::polynomial(&[0, 1, -2, 1], order),
        order,
    )?;
    Ok(format!("(1-2x, x(1-x)^2) to order {order}"))
}

fn criterion_7() -> Outcome {
    let order = 16;
    for name in [
        "pascal",
        "delannoy",
        "catalan_bell",
        "inv_catalan",
        "schroeder_neg",
    ] {
        let a = get(name, order);
        let squared = a.a_sequence().powi(2).map_err(|e| e.to_string())?;
        for s in 0..=4 {
            let got =
                central::a_of_central(&a, Shift::new(s)).map_err(|e| format!("{name}: {e}"))?;
            same_series(&format!("{name} s={s}"), &got, &squared, order)?;
        }
    }
    let a = get("catalan_bell", order);
    let got = central::a_of_central(&a, Shift::CENTRAL).map_err(|e| e.to_string())?;
    let want = Series::new((1..=order as i64).map(rat).collect()).unwrap();
    same_series("catalan s=0 vs 1/(1-x)^2", &got, &want, order)?;
    Ok(format!("5 arrays, s=0..4, order {order}"))
}

fn criterion_8() -> Outcome {
    let order = 16;
    let a = get("pascal", order);
    let left = central::transition_left(&a, Shift::CENTRAL).map_err(|e| e.to_string())?;
    same_series(
        "left g",
        left.g(),
        &Series::polynomial(&[1, 1], order),
        order,
    )?;
    same_series("left f", left.ft(), &Series::one(order), order)?;
    let right = central::transition_right(&a, Shift::CENTRAL).map_err(|e| e.to_string())?;
    let c: Vec<Rational> = catalan_numbers(order)
        .into_iter()
        .map(Rational::from_integer)
        .collect();
    same_series("right g", right.g(), &Series::new(c).unwrap(), order)?;
    same_series("right f", right.ft(), &Series::one(order), order)?;
    Ok(format!("(1+x, x) and (c(x), x) to order {order}"))
}

/// The triple product `c0^-1 c1 c0^-1` as a triangle, by the group kernel
/// and by matrix algebra on directly extracted central triangles.
fn triple_product(a: &RiordanArray, rows: usize) -> Result<Triangle, String> {
    let by_group = central::conjugation(a).map_err(|e| e.to_string())?;
    let by_group = by_group.triangle(rows).map_err(|e| e.to_string())?;
    let c0 = central::central_direct(a, Shift::CENTRAL, rows).map_err(|e| e.to_string())?;
    let c1 = central::central_direct(a, Shift::new(1), rows).map_err(|e| e.to_string())?;
    let c0_inv = c0.inverse().map_err(|e| e.to_string())?;
    let by_matrix = c0_inv.matmul(&c1).matmul(&c0_inv);
    same_triangle("group kernel vs matrix algebra", &by_group, &by_matrix)?;
    Ok(by_group)
}

fn criterion_9() -> Outcome {
    let a = get("schroeder_neg", 16);
    let triple = triple_product(&a, 6)?;
    let mut problems = Vec::new();
    if let Err(e) = same_triangle("triple product", &triple, &tri(CONJUGATION_PRINTED)) {
        problems.push(e);
    }
    let c1 = central::central_array(&a, Shift::new(1))
        .map_err(|e| e.to_string())?
        .combined
        .triangle(5)
        .map_err(|e| e.to_string())?;
    if let Err(e) = same_triangle(
        "column-0 removal vs s=1 central triangle",
        &triple.without_first_column(),
        &c1,
    ) {
        problems.push(e);
    }
    if problems.is_empty() {
        Ok("printed matrix reproduced".into())
    } else {
        let first_row = |t: &Triangle, n: usize| {
            t.row(n)
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        Err(format!(
            "{}; computed rows 1..2 are [{}],[{}]",
            problems.join("; "),
            first_row(&triple, 1),
            first_row(&triple, 2)
        ))
    }
}

/// The printed conjugation matrix is the inverse of the triple product for
/// `(1/(1-x), x(1+x)/(1-x))`, and its column-0 removal is that array's
/// s=1 central triangle.
fn conjugation_printed_matrix_source() -> Outcome {
    let a = get("delannoy", 16);
    let triple = triple_product(&a, 6)?;
    let inverse = triple.inverse().map_err(|e| e.to_string())?;
    same_triangle(
        "inverse of triple product",
        &inverse,
        &tri(CONJUGATION_PRINTED),
    )?;
    let c1 = central::central_direct(&a, Shift::new(1), 5).map_err(|e| e.to_string())?;
    same_triangle("column-0 removal", &inverse.without_first_column(), &c1)?;
    Ok("inverse triple product of (1/(1-x), x(1+x)/(1-x)) matches the printed matrix".into())
}

fn criterion_10() -> Outcome {
    let order = 16;
    let a = get("delannoy", order + 2);
    let z = central::z_of_central(&a, Shift::CENTRAL).map_err(|e| e.to_string())?;
    let root = Series::polynomial(&[1, 6, 1], order)
        .sqrt()
        .map_err(|e| e.to_string())?;
    let want = &Series::polynomial(&[2, 1], order) + &root;
    same_series("Z vs 2+x+sqrt(1+6x+x^2)", &z, &want, order)?;
    let rows = 8;
    let big = get("delannoy", 2 * rows + 2);
    let t = central::central_direct(&big, Shift::CENTRAL, rows).map_err(|e| e.to_string())?;
    for n in 0..rows - 1 {
        let mut acc = rat(0);
        for j in 0..=n {
            acc += &z.coeffs()[j] * t.get(n, j);
        }
        if acc != t.get(n + 1, 0) {
            return Err(format!("column-0 rule fails at row {}", n + 1));
        }
    }
    Ok(format!(
        "to order {order}; column-0 rule holds on {rows} rows"
    ))
}

fn criterion_11() -> Outcome {
    let cfg = FuzzConfig {
        seed: 42,
        trials: 200,
        max_coeff: 3,
        order: 16,
        shift_max: 4,
    };
    let start = Instant::now();
    let report = fuzz(cfg);
    let elapsed = start.elapsed();
    let rendered = report.to_string();
    let verdict = rendered.lines().last().unwrap_or_default().to_string();
    if !report.passed() {
        return Err(rendered.trim_end().replace('\n', "; "));
    }
    if verdict != "200/200 PASS" {
        return Err(format!("unexpected verdict `{verdict}`"));
    }
    if elapsed >= Duration::from_secs(60) {
        return Err(format!("{verdict} but took {:.1}s", elapsed.as_secs_f64()));
    }
    Ok(format!("{verdict} in {:.1}s", elapsed.as_secs_f64()))
}

/// Criteria whose literal statement does not hold.
const KNOWN_FAILURES: &[&str] = &["9"];

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1", "delannoy triangle", criterion_1),
        ("2", "delannoy central s=0", criterion_2),
        ("3", "delannoy central column", criterion_3),
        ("4", "catalan triangles", criterion_4),
        ("5", "production matrices", criterion_5),
        ("6", "inverse catalan collapse", criterion_6),
        ("7", "a-sequence squaring", criterion_7),
        ("8", "pascal transitions", criterion_8),
        ("9", "conjugation example", criterion_9),
        ("10", "z-sequence example", criterion_10),
        ("11", "fuzz seed 42", criterion_11),
    ];
    let run = |body: fn() -> Outcome| {
        panic::catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|_| Err("panicked".to_string()))
    };
    let mut passed = 0;
    let mut unexpected = Vec::new();
    for (id, title, body) in criteria {
        let known = KNOWN_FAILURES.contains(&id);
        match run(body) {
            Ok(detail) => {
                passed += 1;
                println!("criterion {id} {title}: PASS ({detail})");
                if known {
                    unexpected.push(format!("{id} passed but is listed as a known failure"));
                }
            }
            Err(detail) => {
                let tag = if known { " [known defect]" } else { "" };
                println!("criterion {id} {title}: FAIL ({detail}){tag}");
                if !known {
                    unexpected.push(format!("{id} failed"));
                }
            }
        }
    }
    let supplement = run(conjugation_printed_matrix_source);
    match &supplement {
        Ok(d) => println!("supplement conjugation matrix source: PASS ({d})"),
        Err(d) => {
            println!("supplement conjugation matrix source: FAIL ({d})");
            unexpected.push("conjugation supplement failed".into());
        }
    }
    println!("acceptance: {passed}/{} criteria PASS", criteria.len());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected results: {}", unexpected.join(", "));
        ExitCode::FAILURE
    }
}
