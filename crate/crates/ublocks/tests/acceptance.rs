//! Acceptance run: one PASS/FAIL line per criterion, failing if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use ublocks::blocks::{
    box_rows, ennola_ambient, ennola_e, form_rows, jbar_t, rlg_decomposition, robinson_sweep,
    semisimple_block, series_ids, sylow_label, twin_of, BlockLabel, BlockRow,
};
use ublocks::centralizers::{borel_de_siebenthal, closure_contains};
use ublocks::esplit::{brute_force_type_a_levis, e_split_levis};
use ublocks::generic_order::{
    cyclotomic, e_of, group_order, prime_power_base, EllAdicContext, GenericOrder,
};
use ublocks::partitions::{cuspidal_partitions, effective_e, label, type_a_size};
use ublocks::rational_type::RationalType;
use ublocks::rootdata::{build_root_system, regular_orbit_size, weyl_order};
use ublocks::tables::{emit, TABLE_IDS};
use ublocks::unipotent_db::{admissible_q, default_database, single_components, Database};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Check {
    ensure(start.elapsed() <= budget, || {
        format!("took {:?}, budget {:?}", start.elapsed(), budget)
    })
}

/// A box `(ambient, ell, e, series)` in one rational form of `C`, with up to
/// two sample `q`.
struct Context {
    ambient: String,
    ell: u64,
    e: u32,
    series: String,
    qs: Vec<u64>,
    rows: Vec<BlockRow>,
}

fn contexts(db: &Database) -> Result<Vec<Context>, String> {
    let mut ambients: BTreeSet<String> = BTreeSet::new();
    for r in &db.block_rows {
        ambients.insert(r.ambient.clone());
        if let Some(d) = ennola_ambient(&r.ambient) {
            ambients.insert(d);
        }
    }
    let mut out: BTreeMap<(String, u64, u32, String, String), Context> = BTreeMap::new();
    for amb in &ambients {
        let dual = ennola_ambient(amb);
        let ells: BTreeSet<u64> = db
            .block_rows
            .iter()
            .filter(|r| &r.ambient == amb || Some(&r.ambient) == dual.as_ref())
            .map(|r| r.ell)
            .collect();
        for &ell in &ells {
            for q in (2u64..200)
                .filter(|&q| prime_power_base(q).is_some() && q % ell != 0 && admissible_q(amb, q))
            {
                let e = e_of(ell, q).map_err(|e| e.to_string())?;
                for series in series_ids(db, amb, ell, e) {
                    let rows = form_rows(db, amb, &series, ell, q)
                        .map_err(|e| format!("{amb} {series} q={q}: {e}"))?;
                    let Some(first) = rows.first() else { continue };
                    let key = (amb.clone(), ell, e, series.clone(), first.c.to_string());
                    let ctx = out.entry(key).or_insert_with(|| Context {
                        ambient: amb.clone(),
                        ell,
                        e,
                        series: series.clone(),
                        qs: Vec::new(),
                        rows: rows.clone(),
                    });
                    if ctx.qs.len() < 2 {
                        ctx.qs.push(q);
                    }
                }
            }
        }
    }
    Ok(out.into_values().collect())
}

fn golden_tables(db: &Database) -> Check {
    let start = Instant::now();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/golden");
    for id in TABLE_IDS {
        let want = std::fs::read_to_string(dir.join(format!("{id}.tsv")))
            .map_err(|e| format!("{id}: {e}"))?;
        let got = emit(db, id).map_err(|e| format!("{id}: {e}"))?.to_tsv();
        ensure(got == want, || {
            format!("{id} differs from its golden table")
        })?;
    }
    within(start, Duration::from_secs(10))
}

/// Each (Levi, C_L, character) occurs once per box and form; for type-A `C`
/// the rows with `C_L = C` list exactly the e-cuspidal unipotent characters of `C`.
fn partition_property(ctx: &Context) -> Result<bool, String> {
    let mut seen = BTreeSet::new();
    for r in &ctx.rows {
        let c_l = r.c_l_type().map_err(|e| e.to_string())?;
        let levi = r.levi_type().map_err(|e| e.to_string())?;
        for m in r.lambda.members() {
            let key = (levi.key(), c_l.key(), m.clone());
            ensure(seen.insert(key), || {
                format!("{} {}: duplicate {m:?}", ctx.ambient, ctx.series)
            })?;
        }
    }
    let c = ctx.rows[0].c.clone();
    let comps = single_components(&c);
    if comps.iter().all(|x| type_a_size(x).is_some()) {
        let mut want: Vec<Vec<String>> = vec![vec![]];
        for x in &comps {
            let n = type_a_size(x).expect("type A");
            let opts: Vec<String> = cuspidal_partitions(n, effective_e(x, ctx.e))
                .iter()
                .map(|p| label(p))
                .collect();
            want = want
                .into_iter()
                .flat_map(|pre| {
                    opts.iter()
                        .map(move |o| [pre.clone(), vec![o.clone()]].concat())
                })
                .collect();
        }
        let mut got = 0usize;
        for r in ctx
            .rows
            .iter()
            .filter(|r| r.c_l_type().map(|t| t.same_as(&c)).unwrap_or(false))
        {
            got += r.lambda.count();
        }
        ensure(got == want.len(), || {
            format!(
                "{} {} e={}: {got} characters with C_L = C, expected {}",
                ctx.ambient,
                ctx.series,
                ctx.e,
                want.len()
            )
        })?;
        return Ok(true);
    }
    Ok(false)
}

fn invariants(db: &Database, ctxs: &[Context]) -> Check {
    let start = Instant::now();
    let mut type_a = 0;
    let mut checked_rows = 0;
    for ctx in ctxs {
        type_a += usize::from(partition_property(ctx)?);
        checked_rows += ctx.rows.len() * ctx.qs.len();
        for &q in &ctx.qs {
            let ell_ctx = EllAdicContext::new(ctx.ell, q).map_err(|e| e.to_string())?;
            let rows =
                form_rows(db, &ctx.ambient, &ctx.series, ctx.ell, q).map_err(|e| e.to_string())?;
            for r in &rows {
                let central = r
                    .lambda_is_central(db, &ell_ctx)
                    .map_err(|e| e.to_string())?;
                ensure(central == r.number.is_some(), || {
                    format!(
                        "{} {} q={q}: row {:?} {} {} central={central}",
                        ctx.ambient, ctx.series, r.number, r.levi, r.lambda
                    )
                })?;
            }
            if ctx.series != "1" {
                let torus = RationalType::torus_only(&GenericOrder::phi(ctx.e, 1));
                let got = jbar_t(
                    db,
                    &ctx.ambient,
                    &ctx.series,
                    ctx.ell,
                    q,
                    &torus,
                    "1",
                    false,
                )
                .map_err(|e| e.to_string())?;
                let want = semisimple_block(db, &ctx.ambient, &ctx.series, ctx.ell, q)
                    .map_err(|e| e.to_string())?;
                ensure(got == vec![BlockLabel::Numbered(want)], || {
                    format!("{} {} q={q}: principal image", ctx.ambient, ctx.series)
                })?;
            }
        }
    }
    ensure(
        ctxs.len() == 46 && type_a == 36 && checked_rows == 208,
        || {
            format!(
                "coverage: {} contexts, {type_a} type-A boxes, {checked_rows} row checks",
                ctxs.len()
            )
        },
    )?;
    for r in db.block_rows.iter().filter(|r| r.ambient == "E6ad") {
        let de = ennola_e(r.ell, r.e);
        let twisted = r.ennola(db, "2E6ad", de).map_err(|e| e.to_string())?;
        let back = twisted.ennola(db, "E6ad", r.e).map_err(|e| e.to_string())?;
        ensure(back == *r, || {
            format!("E6ad row {:?} is not fixed by Ennola twice", r.number)
        })?;
        let generated = box_rows(db, "2E6ad", r.ell, de, &r.series).map_err(|e| e.to_string())?;
        ensure(generated.contains(&twisted), || {
            format!("2E6ad box lacks the image of E6ad row {:?}", r.number)
        })?;
    }
    let twisted_table = emit(db, "2e6ad").map_err(|e| e.to_string())?;
    let golden = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("data/golden/2e6ad.tsv"),
    )
    .map_err(|e| e.to_string())?;
    ensure(twisted_table.to_tsv() == golden, || {
        "2e6ad is not the Ennola image of e6ad".into()
    })?;
    let mut rng = 0x2545_f491_4f6c_dd1du64;
    let mut next = move |m: u64| {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        rng % m
    };
    for _ in 0..200 {
        let mut g = GenericOrder::q_pow(next(40) as u32);
        for _ in 0..next(6) {
            g = &g * &GenericOrder::phi(1 + next(30) as u32, next(9) as i32 - 4);
        }
        ensure(g.ennola().ennola() == g, || {
            format!("ennola is not an involution on {g}")
        })?;
    }
    for t in &db.twins {
        for p in [&t.a, &t.b] {
            let once = twin_of(db, (&p.0, &p.1));
            let twice = twin_of(db, (&once.0, &once.1));
            ensure(twice == *p && once != *p, || {
                format!("twin_of is not an involution at {p:?}")
            })?;
        }
    }
    for u in &db.unipotents {
        let order = group_order(&u.parent()).map_err(|e| e.to_string())?;
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13]
            .into_iter()
            .filter(|&q| admissible_q(&u.group, q))
        {
            let d = u.degree.eval(&BigInt::from(q));
            let n = order.eval(&BigInt::from(q));
            ensure(d.is_integer() && (n / d.clone()).is_integer(), || {
                format!("{} {} at q={q}", u.group, u.label)
            })?;
        }
    }
    within(start, Duration::from_secs(60))
}

fn small_oracles(db: &Database) -> Check {
    let start = Instant::now();
    // Root counts of the classical realizations: A_n has n(n+1) roots e_i - e_j,
    // B_2 and C_2 have 8, G_2 has 12.
    for (label, roots) in [
        ("A1", 2),
        ("A2", 6),
        ("A3", 12),
        ("A4", 20),
        ("B2", 8),
        ("C2", 8),
        ("G2", 12),
    ] {
        let rs = build_root_system(label).map_err(|e| e.to_string())?;
        ensure(rs.roots.len() == roots, || {
            format!("{label}: {} roots", rs.roots.len())
        })?;
        let by_degrees = weyl_order(&rs).map_err(|e| e.to_string())?;
        let by_orbit = regular_orbit_size(&rs.cartan_matrix) as u128;
        ensure(by_degrees == by_orbit, || {
            format!("{label}: |W| {by_degrees} vs orbit {by_orbit}")
        })?;
    }
    for n in 2..=4usize {
        for e in [1u32, 2] {
            let label = format!("A{}", n - 1);
            let got: BTreeSet<_> = e_split_levis(db, &label, e)
                .map_err(|x| x.to_string())?
                .into_iter()
                .map(|l| l.levi.key())
                .collect();
            ensure(got == brute_force_type_a_levis(n, e), || {
                format!("{label} e={e}: e-split Levis differ")
            })?;
        }
    }
    let c12: Vec<BigInt> = cyclotomic(12).0;
    ensure(c12 == [1, 0, -1, 0, 1].map(BigInt::from), || {
        "Phi12 coefficients".into()
    })?;
    within(start, Duration::from_secs(30))
}

fn subsystem_coverage(db: &Database) -> Check {
    let start = Instant::now();
    for amb in ["G2", "F4", "E6", "E7", "E8"] {
        let closure = borel_de_siebenthal(amb.parse().map_err(|_| amb.to_string())?);
        let mut types: BTreeSet<String> = BTreeSet::new();
        for a in [amb.to_string(), format!("{amb}ad")] {
            if let Ok(classes) = db.isolated_classes(&a) {
                for c in classes {
                    types.extend(c.forms.iter().map(|(_, t)| t.semisimple_label()));
                }
            }
        }
        for r in db
            .block_rows
            .iter()
            .filter(|r| r.ambient.trim_end_matches("ad") == amb && r.series != "1")
        {
            types.insert(r.c.semisimple_label());
        }
        for t in &types {
            ensure(closure_contains(&closure, t), || {
                format!("{amb}: {t} missing from the closure")
            })?;
        }
    }
    let e8 = borel_de_siebenthal("E8".parse().expect("E8"));
    for t in ["D8", "E7A1", "E6A2", "A8", "A4A4"] {
        ensure(closure_contains(&e8, t), || format!("E8 closure lacks {t}"))?;
    }
    within(start, Duration::from_secs(10))
}

/// `|Z(P)|` of a Sylow 2-subgroup from the centralizer structure of a 2-central involution.
fn sylow_oracle(label: &str, q: u64) -> u64 {
    let two_part = |n: u64| 1u64 << n.trailing_zeros();
    match label {
        "E6" => two_part(q - 1),
        "2E6" => two_part(q + 1),
        "E7" => 4,
        _ => 2,
    }
}

fn robinson(db: &Database) -> Check {
    let start = Instant::now();
    let mut seen_centres: BTreeMap<String, BTreeSet<u64>> = BTreeMap::new();
    let mut nonabelian = 0;
    for amb in ["G2", "3D4", "F4", "E6ad", "2E6ad", "E7", "E7ad", "E8"] {
        for q in [3u64, 5, 7, 9, 11, 13] {
            let reports = robinson_sweep(db, amb, 2, q).map_err(|e| format!("{amb} q={q}: {e}"))?;
            ensure(!reports.is_empty(), || format!("{amb} q={q}: no blocks"))?;
            for r in &reports {
                ensure(r.holds, || {
                    format!(
                        "{amb} q={q}: {} fails ({} vs {})",
                        r.block, r.min_defect, r.center_bound
                    )
                })?;
                if r.block.starts_with("principal:") {
                    let s = sylow_label(amb);
                    let want = sylow_oracle(&s, q);
                    ensure(r.center_bound == want, || {
                        format!("{amb} q={q}: |Z(P)| {} vs {want}", r.center_bound)
                    })?;
                    seen_centres
                        .entry(format!("{s}:{}", q % 4))
                        .or_default()
                        .insert(r.center_bound);
                }
                if r.block.starts_with("na:E8") {
                    nonabelian += 1;
                    ensure(r.min_defect >= 3 && r.strict == Some(true), || {
                        format!(
                            "{} q={q}: min defect {} strict {:?}",
                            r.block, r.min_defect, r.strict
                        )
                    })?;
                }
            }
        }
    }
    ensure(nonabelian == 6, || {
        format!("{nonabelian} non-abelian E8 reports, expected 6")
    })?;
    for s in ["E6", "2E6"] {
        for class in [1, 3] {
            ensure(seen_centres.contains_key(&format!("{s}:{class}")), || {
                format!("{s} not checked at q = {class} mod 4")
            })?;
        }
    }
    within(start, Duration::from_secs(30))
}

/// Levi, character, norm and signed constituents of one decomposition.
type RlgCase<'a> = (&'a str, &'a str, i64, Vec<(i64, &'a str)>);

fn lusztig_induction(db: &Database) -> Check {
    let t = |s: &str| s.parse::<RationalType>().map_err(|e| e.to_string());
    let cases: [RlgCase; 3] = [
        (
            "Phi2.2E6(q)",
            "2E6[theta]",
            2,
            vec![(1, "E6[theta],1"), (-1, "E6[theta],eps")],
        ),
        (
            "Phi2^2.2E6(q)",
            "2E6[theta]",
            8,
            vec![
                (1, "E6[theta],phi{1,0}"),
                (-1, "E6[theta],phi{1,3}'"),
                (-1, "E6[theta],phi{1,3}''"),
                (1, "E6[theta],phi{1,6}"),
                (-2, "E8[-theta]"),
                (-2, "E8[theta]"),
            ],
        ),
        (
            "Phi2.E7(q)",
            "phi{512,11}",
            2,
            vec![(1, "phi{4096,11}"), (-1, "phi{4096,26}")],
        ),
    ];
    for (levi, lambda, norm, terms) in cases {
        let r = rlg_decomposition(db, &t(levi)?, lambda).map_err(|e| e.to_string())?;
        ensure(r.norm == norm, || {
            format!("({levi}, {lambda}): norm {} vs {norm}", r.norm)
        })?;
        let want: Vec<(i64, String)> = terms.into_iter().map(|(c, l)| (c, l.to_string())).collect();
        ensure(r.terms == want, || {
            format!("({levi}, {lambda}): constituents {:?}", r.terms)
        })?;
    }
    Ok(())
}

#[test]
fn acceptance() {
    let db = default_database().expect("dataset loads");
    let ctxs = contexts(&db);
    let results: Vec<(&str, Check)> = vec![
        ("1 golden tables", golden_tables(&db)),
        (
            "2 invariants",
            ctxs.as_ref()
                .map_err(|e| e.clone())
                .and_then(|c| invariants(&db, c)),
        ),
        ("3 small-instance oracles", small_oracles(&db)),
        ("4 subsystem coverage", subsystem_coverage(&db)),
        ("5 Robinson sweep", robinson(&db)),
        ("6 Lusztig induction", lusztig_induction(&db)),
    ];
    let mut failed = Vec::new();
    for (name, r) in &results {
        match r {
            Ok(()) => println!("criterion {name}: PASS"),
            Err(msg) => {
                println!("criterion {name}: FAIL: {msg}");
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
