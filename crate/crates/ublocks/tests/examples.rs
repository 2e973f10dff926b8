//! Worked examples for every module, checked through the public API.

use num_bigint::{BigInt, BigUint};
use ublocks::blocks::{
    blocks_in_series, descend_block, jbar_t, jordan_pair_correspondence, rlg_decomposition,
    robinson_check, sylow2_center, to_t_map, twin_of, BlockLabel, Constituents, DescentCase,
};
use ublocks::centralizers::{borel_de_siebenthal, closure_contains, rational_form};
use ublocks::esplit::{e_split_levis, relative_weyl_group, sylow_e_torus_multiplicity};
use ublocks::generic_order::{
    cyclotomic, defect, e_of, ell_part, group_order, EllAdicContext, GenericOrder,
};
use ublocks::rational_type::RationalType;
use ublocks::rootdata::{build_root_system, extended_diagram, weyl_degrees, weyl_order};
use ublocks::unipotent_db::{
    central_ell_defect, default_database, parse_dataset, quasi_central_pairs, Database, Lambda,
};

fn db() -> Database {
    default_database().expect("dataset")
}

fn t(s: &str) -> RationalType {
    s.parse().expect("rational type")
}

fn g(s: &str) -> GenericOrder {
    s.parse().expect("generic order")
}

#[test]
fn root_systems() {
    let a1 = build_root_system("A1").unwrap();
    assert_eq!((a1.roots.len(), a1.num_positive()), (2, 1));
    let g2 = build_root_system("G2").unwrap();
    assert_eq!((g2.roots.len(), g2.num_positive()), (12, 6));
    let e8 = build_root_system("E8").unwrap();
    assert_eq!((e8.roots.len(), e8.num_positive()), (240, 120));
    assert_eq!(weyl_degrees(&a1).unwrap(), vec![2]);
    assert_eq!(weyl_degrees(&g2).unwrap(), vec![2, 6]);
    assert_eq!(weyl_order(&g2).unwrap(), 12);
    assert_eq!(
        weyl_degrees(&e8).unwrap(),
        vec![2, 8, 12, 14, 18, 20, 24, 30]
    );
    assert_eq!(weyl_order(&e8).unwrap(), 696_729_600);
    assert_eq!(extended_diagram(&a1).nodes.len(), 2);
    let g2x = extended_diagram(&g2);
    assert_eq!(g2x.nodes.len(), 3);
    let bonds: Vec<i64> = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| g2x.bond(i, j))
        .collect();
    assert_eq!(bonds.iter().filter(|&&b| b == 3).count(), 1);
    assert_eq!(bonds.iter().filter(|&&b| b == 1).count(), 1);
    assert_eq!(extended_diagram(&e8).nodes.len(), 9);
    assert!(build_root_system("X3").is_err());
}

#[test]
fn generic_orders() {
    let c12 = cyclotomic(12);
    let coeffs: Vec<i64> = c12.0.iter().map(|c| i64::try_from(c).unwrap()).collect();
    assert_eq!(coeffs, vec![1, 0, -1, 0, 1]);
    assert_eq!(group_order(&t("Phi1^6")).unwrap(), GenericOrder::phi(1, 6));
    assert_eq!(
        group_order(&t("G2(q)")).unwrap(),
        g("q^6*Phi1^2*Phi2^2*Phi3*Phi6")
    );
    let e6t = group_order(&t("2E6(q)")).unwrap();
    // Independent oracle: q^36 (q^2-1)(q^5+1)(q^6-1)(q^8-1)(q^9+1)(q^12-1) at q = 2.
    let q = BigInt::from(2);
    let p = |n: u32, s: i32| q.pow(n) + BigInt::from(s);
    let oracle = q.pow(36) * p(2, -1) * p(5, 1) * p(6, -1) * p(8, -1) * p(9, 1) * p(12, -1);
    assert_eq!(
        e6t.eval_positive_int(2).unwrap(),
        BigUint::try_from(oracle.clone()).unwrap()
    );
    assert_eq!(oracle / 3, BigInt::from(76_532_479_683_774_853_939_200u128));
    assert_eq!(ell_part(&BigUint::from(12u32), 2), BigUint::from(4u32));
    assert_eq!(ell_part(&BigUint::from(12u32), 5), BigUint::from(1u32));
    assert_eq!(
        ell_part(&BigUint::from(696_729_600u64), 2),
        BigUint::from(16384u32)
    );
    assert_eq!(e_of(3, 4).unwrap(), 1);
    assert_eq!(e_of(2, 7).unwrap(), 2);
    assert_eq!(e_of(5, 2).unwrap(), 4);
    assert!(e_of(3, 9).is_err());
    assert_eq!(GenericOrder::phi(1, 6).ennola(), GenericOrder::phi(2, 6));
    assert_eq!(GenericOrder::phi(4, 2).ennola(), GenericOrder::phi(4, 2));
    assert_eq!(group_order(&t("E6(q)")).unwrap().ennola(), e6t);
    let g2 = group_order(&t("G2(q)")).unwrap();
    let ctx = EllAdicContext::new(2, 5).unwrap();
    assert_eq!(defect(&GenericOrder::one(), &g2, &ctx).unwrap(), 6);
    assert_eq!(defect(&GenericOrder::q_pow(6), &g2, &ctx).unwrap(), 6);
    assert_eq!(defect(&GenericOrder::phi(1, 2), &g2, &ctx).unwrap(), 2);
}

#[test]
fn centralizers() {
    let g2 = borel_de_siebenthal("G2".parse().unwrap());
    assert!(closure_contains(&g2, "A1A1~") || closure_contains(&g2, "A1A1"));
    assert!(closure_contains(&g2, "A2"));
    assert_eq!(
        borel_de_siebenthal("A1".parse().unwrap())
            .into_iter()
            .collect::<Vec<_>>(),
        vec!["none"]
    );
    let e8 = borel_de_siebenthal("E8".parse().unwrap());
    for s in ["D8", "E7A1", "E6A2", "A8", "A4A4"] {
        assert!(closure_contains(&e8, s), "{s}");
    }
    let db = db();
    let g2c = db.isolated_classes("G2").unwrap();
    let forms: Vec<String> = g2c
        .iter()
        .flat_map(|c| c.forms.iter().map(|(_, f)| f.to_string()))
        .collect();
    assert_eq!(forms, vec!["A1(q)^2", "A2(q)", "2A2(q)"]);
    let e8c = db.isolated_classes("E8").unwrap();
    let o6 = e8c.iter().find(|c| c.order == 6).unwrap();
    assert!(rational_form(o6, 7).unwrap().same_as(&t("A5(q)A2(q)A1(q)")));
    assert!(rational_form(o6, 5)
        .unwrap()
        .same_as(&t("2A5(q).2A2(q)A1(q)")));
    let o3 = e8c.iter().find(|c| c.order == 3).unwrap();
    assert!(rational_form(o3, 7).unwrap().same_as(&t("E6(q).A2(q)")));
    assert!(rational_form(o3, 5).unwrap().same_as(&t("2E6(q).2A2(q)")));
    let a2 = g2c.iter().find(|c| c.id == "A2").unwrap();
    assert!(rational_form(a2, 7).unwrap().same_as(&t("A2(q)")));
    assert!(rational_form(a2, 5).unwrap().same_as(&t("2A2(q)")));
}

#[test]
fn e_split_levis_and_relative_weyl_groups() {
    assert_eq!(sylow_e_torus_multiplicity(&t("E8(q)"), 1).unwrap(), 8);
    assert_eq!(sylow_e_torus_multiplicity(&t("E8(q)"), 4).unwrap(), 4);
    let db = db();
    let e7: Vec<RationalType> = e_split_levis(&db, "E7ad", 1)
        .unwrap()
        .into_iter()
        .map(|l| l.levi)
        .collect();
    for want in ["Phi1^7", "Phi1^3.D4(q)", "Phi1.D6(q)", "E7(q)"] {
        assert!(e7.iter().any(|l| l.same_as(&t(want))), "{want}");
    }
    let a1: Vec<RationalType> = e_split_levis(&db, "A1", 1)
        .unwrap()
        .into_iter()
        .map(|l| l.levi)
        .collect();
    assert_eq!(a1.len(), 2);
    assert!(a1.iter().any(|l| l.same_as(&t("Phi1"))) && a1.iter().any(|l| l.same_as(&t("A1(q)"))));
    assert_eq!(
        relative_weyl_group(&db, "E6ad", "A5A1", "Phi1^6", "1")
            .unwrap()
            .label,
        "A5xA1"
    );
    assert_eq!(
        relative_weyl_group(&db, "E6ad", "A5A1", "Phi1^2Phi2^4", "1")
            .unwrap()
            .label,
        "C3xA1"
    );
    assert_eq!(
        relative_weyl_group(&db, "E8", "o6", "Phi4.2D6(q)", "6chars")
            .unwrap()
            .label,
        "Z4xA1"
    );
}

#[test]
fn dataset_records() {
    assert!(parse_dataset("").unwrap().unipotents.is_empty());
    let ok = parse_dataset("unip E6 E6[theta] 1/3*q^7*Phi3^2*Phi6^2*Phi9 theta cusp:1");
    assert!(ok.is_ok(), "{ok:?}");
    let bad = parse_dataset("unip G2 bogus q^9*Phi5 1 cusp:1");
    assert!(bad.is_err());
    let db = db();
    let theta = db.unipotent("E6", "E6[theta]").unwrap();
    let order = group_order(&t("E6(q)")).unwrap();
    let deg = theta.degree.eval_positive_int(2).unwrap();
    assert_eq!(
        order.eval_positive_int(2).unwrap() % deg,
        BigUint::from(0u32)
    );
    let d4m = db.unipotent("3D4", "3D4[-1]").unwrap();
    assert!(central_ell_defect(d4m, &EllAdicContext::new(3, 7).unwrap()).unwrap());
    let phi21 = db.unipotent("3D4", "phi{2,1}").unwrap();
    assert!(central_ell_defect(phi21, &EllAdicContext::new(3, 5).unwrap()).unwrap());
}

#[test]
fn quasi_central_pairs_are_numbered_rows() {
    let db = db();
    let ctx = EllAdicContext::new(3, 5).unwrap();
    assert_eq!(
        quasi_central_pairs(&db, "E6ad", "A5A1", &ctx)
            .unwrap()
            .len(),
        2
    );
    let ctx = EllAdicContext::new(2, 5).unwrap();
    let one = quasi_central_pairs(&db, "E6ad", "A2^3", &ctx).unwrap();
    assert_eq!(one.len(), 1);
    assert!(one[0].levi.same_as(&t("Phi1^6")) && one[0].character == Lambda::trivial());
    let torus = quasi_central_pairs(&db, "Phi1^2", "1", &ctx).unwrap();
    assert_eq!(torus.len(), 1);
}

#[test]
fn block_boxes() {
    let db = db();
    let nums = |rows: &[ublocks::blocks::BlockRow]| {
        rows.iter().filter_map(|r| r.number).collect::<Vec<_>>()
    };
    assert_eq!(
        nums(&blocks_in_series(&db, "E6ad", "A5A1", 3, 4).unwrap()),
        vec![13]
    );
    assert_eq!(
        nums(&blocks_in_series(&db, "E6ad", "A5A1", 3, 5).unwrap()),
        vec![14, 15]
    );
    let q2 = blocks_in_series(&db, "E8", "o6", 5, 2).unwrap();
    assert_eq!(nums(&q2), vec![6, 7]);
    assert_eq!(q2[0].relweyl, "Z4xA1");
    assert_eq!(
        nums(&blocks_in_series(&db, "E8", "o6", 5, 11).unwrap()),
        vec![1, 2, 3, 4, 5]
    );
}

#[test]
fn jordan_and_t_relations() {
    let db = db();
    let (l, lam) =
        jordan_pair_correspondence(&db, "E6ad", "A5A1", 3, 1, &t("Phi1^6"), &Lambda::trivial())
            .unwrap();
    assert!(l.same_as(&t("Phi1^6")));
    assert_eq!(lam, Lambda::trivial());
    let c = t("E6(q)");
    let lt = t("Phi1^2.3D4(q)");
    assert_eq!(
        to_t_map(&db, &lt, "x", &c, 1, true).unwrap(),
        (lt.clone(), "x".to_string())
    );
    let (l1, m1) = to_t_map(&db, &lt, "3D4[-1]", &c, 1, false).unwrap();
    assert!(l1.same_as(&t("Phi1^2.D4(q)")));
    assert_eq!(m1, "D4[1]");
    let (l2, m2) = to_t_map(&db, &t("Phi2^2.3D4(q)"), "phi{2,1}", &c, 2, false).unwrap();
    assert!(l2.same_as(&t("Phi2^2.D4(q)")));
    assert_eq!(m2, "phi{13,02}");
}

#[test]
fn twin_blocks() {
    let db = db();
    assert_eq!(
        twin_of(&db, ("E6", "E6[theta]")),
        ("E6".into(), "E6[theta^2]".into())
    );
    assert_eq!(
        twin_of(&db, ("E7", "phi{512,11}")),
        ("E7".into(), "phi{512,12}".into())
    );
    assert_eq!(twin_of(&db, ("D4", "D4[1]")), ("D4".into(), "D4[1]".into()));
    let lt = t("Phi2^2.2E6(q)");
    let class = jbar_t(&db, "E8", "1", 7, 13, &lt, "2E6[theta]", false).unwrap();
    let lambdas: Vec<String> = class
        .iter()
        .map(|b| match b {
            BlockLabel::Pair { lambda, .. } => lambda.clone(),
            other => other.to_string(),
        })
        .collect();
    assert_eq!(lambdas, vec!["2E6[theta]", "2E6[theta^2]"]);
    let e7 = jbar_t(
        &db,
        "E7",
        "1",
        7,
        13,
        &t("Phi2.2E6(q)"),
        "2E6[theta]",
        false,
    )
    .unwrap();
    assert_eq!(e7.len(), 1);
}

#[test]
fn descent() {
    let one = descend_block(1, true, 2, false).unwrap();
    assert_eq!(one.case, DescentCase::A);
    assert_eq!(
        (one.conjugate_block_count, one.restriction_constituents),
        (1, Constituents::Exactly(1))
    );
    let b = descend_block(3, false, 2, false).unwrap();
    assert_eq!(b.case, DescentCase::B);
    assert_eq!(
        (b.conjugate_block_count, b.restriction_constituents),
        (3, Constituents::Exactly(3))
    );
    let a = descend_block(2, true, 3, false).unwrap();
    assert_eq!(a.case, DescentCase::A);
    assert!(a.height_preserving_bijection);
    assert!(descend_block(5, true, 2, false).is_err());
}

#[test]
fn lusztig_induction() {
    let db = db();
    let a = rlg_decomposition(&db, &t("Phi2.2E6(q)"), "2E6[theta]").unwrap();
    assert_eq!(
        a.terms,
        vec![(1, "E6[theta],1".into()), (-1, "E6[theta],eps".into())]
    );
    let c = rlg_decomposition(&db, &t("Phi2.E7(q)"), "phi{512,11}").unwrap();
    assert_eq!(
        c.terms,
        vec![(1, "phi{4096,11}".into()), (-1, "phi{4096,26}".into())]
    );
    let b = rlg_decomposition(&db, &t("Phi2^2.2E6(q)"), "2E6[theta]").unwrap();
    assert_eq!(b.terms.len(), 6);
    assert!(
        b.terms.contains(&(-2, "E8[-theta]".into())) && b.terms.contains(&(-2, "E8[theta]".into()))
    );
    assert!(rlg_decomposition(&db, &t("E6(q)"), "1").is_err());
}

#[test]
fn sylow_centres_and_robinson() {
    let db = db();
    assert_eq!(sylow2_center(&db, "G2", 5).unwrap(), 2);
    assert_eq!(sylow2_center(&db, "E6", 5).unwrap(), 4);
    assert_eq!(sylow2_center(&db, "2E6", 5).unwrap(), 2);
    assert!(sylow2_center(&db, "G2", 4).is_err());
    let pick = |id: &str| {
        db.block_chars
            .iter()
            .find(|c| c.block_id == id)
            .unwrap()
            .clone()
    };
    let info = |id: &str| {
        db.defect_info
            .iter()
            .find(|d| d.block_id == id)
            .unwrap()
            .clone()
    };
    let row = db.sylow.iter().find(|r| r.group == "G2").unwrap();
    let p = robinson_check(
        &db,
        "principal:G2",
        &pick("principal:G2"),
        &row.center,
        ublocks::blocks::Abelian::Unknown,
        2,
        5,
    )
    .unwrap();
    assert_eq!(p.center_bound, 2);
    assert!(p.min_defect >= 1 && p.holds);
    let na = info("na:E8:1mod4");
    let r = robinson_check(
        &db,
        &na.block_id,
        &pick(&na.block_id),
        &na.center,
        na.abelian,
        2,
        5,
    )
    .unwrap();
    assert!(r.bound_is_upper && r.center_bound == 4);
    assert!(r.min_defect >= 3 && r.holds && r.strict == Some(true));
    let z = info("E8:5:4:o6:7");
    let r = robinson_check(
        &db,
        &z.block_id,
        &pick(&z.block_id),
        &z.center,
        z.abelian,
        5,
        2,
    )
    .unwrap();
    assert_eq!(
        (r.min_defect, r.center_bound, r.holds, r.strict),
        (0, 1, true, None)
    );
}
