use fano3_core::classifier::{
    audit_factorial_fixed_rows, classify_factorial, classify_nonfactorial, discriminant_checks, rho2_self_consistency,
    TableKind,
};
use fano3_core::invariants::SingCount;

fn assert_reproduced(kind: TableKind) {
    let diff = kind.diff().unwrap();
    assert!(
        diff.is_empty(),
        "{}:\n{}\n{}",
        kind.as_str(),
        diff.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"),
        kind.build().unwrap().to_markdown()
    );
}

#[test]
fn counts_table_reproduced() {
    assert_reproduced(TableKind::Counts);
}

#[test]
fn nonfactorial_table_reproduced() {
    assert_reproduced(TableKind::Nonfactorial);
}

#[test]
fn factorial_table_reproduced() {
    assert_reproduced(TableKind::Factorial);
}

#[test]
fn blowup_center_grid_reproduced() {
    assert_reproduced(TableKind::BlowupCenters);
}

#[test]
fn ci_table_reproduced() {
    assert_reproduced(TableKind::Ci);
}

#[test]
fn row_totals() {
    assert_eq!(classify_nonfactorial().unwrap().len(), 17);
    assert_eq!(classify_factorial().unwrap().len(), 13);
}

#[test]
fn four_n_is_infinite() {
    let rows = classify_nonfactorial().unwrap();
    let r = rows.iter().find(|r| r.type_id.as_deref() == Some("1-4-n")).unwrap();
    assert_eq!(r.sing_count, SingCount::Infinite);
}

#[test]
fn factorial_audit_findings() {
    let f = audit_factorial_fixed_rows().unwrap();
    let cells: Vec<(i64, i64)> = f.iter().map(|x| (x.iota, x.genus)).collect();
    assert!(cells.iter().all(|c| *c == (2, 13) || *c == (2, 5)), "{f:#?}");
    assert!(cells.contains(&(2, 13)) && cells.contains(&(2, 5)), "{f:#?}");
}

#[test]
fn rank_two_self_consistency() {
    assert_eq!(rho2_self_consistency().unwrap(), vec![(1, 22)]);
}

#[test]
fn discriminants() {
    let checks = discriminant_checks().unwrap();
    assert!(checks.iter().all(|c| c.matches()), "{checks:#?}");
    let flagged: Vec<_> = checks.iter().filter(|c| c.flagged).collect();
    assert_eq!(flagged.len(), 2);
    assert!(flagged.iter().all(|c| (c.fiber_degree, c.printed) == (2, 54)));
}
