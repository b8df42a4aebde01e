//! Acceptance suite: one PASS/FAIL line per criterion. All comparisons are
//! exact (zero tolerance); series orders and index ranges are pinned below.
//! Criteria that fail against the printed source material print FAIL and
//! assert the exact set of discrepancies, so any change in behaviour breaks
//! the test.

use exherm::chain::{updown_product_check, verify_drawn_diagram, verify_table, Ladder, Table};
use exherm::identity::{verify_identities, verify_power_commutators};
use exherm::report::{CheckRecord, Status};
use exherm::rodrigues::{status_by_anchor, verify_rodrigues};
use exherm::{alpha, crosscheck, gauged, heun};
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

const TABLE_RANGE: (i64, i64) = (-8, 8);
const MAX_POWER: u32 = 5;
const RODRIGUES_BOUND: i64 = 12;
const SERIES_RANGE: (i64, i64) = (-6, 8);
const RECURRENCE_ORDER: usize = 20;
const HYPERGEOMETRIC_ORDER: usize = 24;
const ALPHA_MAX_INDEX: i64 = 8;
const ALPHA_ORDER: usize = 24;
const HEUN_ORDER: usize = 20;
const DERIVATIVE_RANGE: (i64, i64) = (2, 6);
const DERIVATIVE_ORDER: usize = 14;
const EOP_RANGE: (i64, i64) = (0, 10);
const POLY_RANGE: (i64, i64) = (0, 8);
const OPERATOR_BUDGET: Duration = Duration::from_secs(60);

fn line(n: u32, title: &str, pass: bool, details: &[String]) {
    println!("criterion {n:>2}: {} {title}", if pass { "PASS" } else { "FAIL" });
    for d in details {
        println!("    {d}");
    }
}

fn non_pass(records: &[CheckRecord]) -> Vec<&CheckRecord> {
    records.iter().filter(|r| r.status != Status::Pass).collect()
}

fn all_pass(records: &[CheckRecord]) -> bool {
    !records.is_empty() && records.iter().all(|r| r.status == Status::Pass)
}

fn no_fail(records: &[CheckRecord]) -> bool {
    !records.is_empty() && records.iter().all(|r| r.status != Status::Fail)
}

fn describe(records: &[&CheckRecord]) -> Vec<String> {
    records.iter().map(|r| r.to_string()).collect()
}

fn criterion_1() {
    let start = Instant::now();
    let records: Vec<CheckRecord> = verify_identities().into_iter().filter(|r| r.group != "mixed").collect();
    let elapsed = start.elapsed();
    let pass = all_pass(&records) && elapsed < OPERATOR_BUDGET;
    line(1, &format!("operator identities reduce to zero ({} identities, {:.1}s)", records.len(), elapsed.as_secs_f64()), pass, &describe(&non_pass(&records)));
    assert!(pass);
    assert_eq!(records.len(), 21);
}

fn criterion_2() {
    let records = verify_power_commutators(MAX_POWER);
    let pass = all_pass(&records) && records.len() == 4 * MAX_POWER as usize;
    line(2, &format!("power commutators for n = 1..{MAX_POWER}"), pass, &describe(&non_pass(&records)));
    assert!(pass);
}

fn criterion_3() {
    let records: Vec<CheckRecord> = verify_identities().into_iter().filter(|r| r.group == "mixed").collect();
    let printed = ["mixed b³c†", "mixed c(b†)³"];
    let printed_records: Vec<&CheckRecord> = records.iter().filter(|r| printed.contains(&r.id.as_str())).collect();
    assert_eq!(printed_records.len(), 2);
    let pass = printed_records.iter().all(|r| r.status == Status::Pass);
    let mut details = describe(&non_pass(&records));
    details.push("c(b†)³ = (b³c†)† equals the b³c† polynomial; only the printed c(b†)³ polynomial differs".into());
    line(3, "mixed relations equal the printed degree-6 polynomials in H", pass, &details);
    assert!(!pass);
    let statuses: Vec<(String, Status)> = records.iter().map(|r| (r.id.clone(), r.status)).collect();
    for (id, status) in statuses {
        let expected = if id == "mixed c(b†)³" { Status::SoftMismatch } else { Status::Pass };
        assert_eq!(status, expected, "{id}");
    }
}

const DIAGRAM_ERRATA: [&str; 5] = [
    "b† psit(-4) -> psit(-3)",
    "b psi(-5) -> psi(-6)",
    "b psit(-5) -> psit(-6)",
    "b psit(-4) -> psit(-5)",
    "c psi(2) -> psi(-1)",
];

fn criterion_4() {
    let (lo, hi) = TABLE_RANGE;
    let tables: Vec<CheckRecord> = Table::ALL.into_iter().flat_map(|t| verify_table(t, lo, hi)).collect();
    let structure: Vec<CheckRecord> = tables.into_iter().filter(|r| r.id == "structure").collect();
    let diagrams: Vec<CheckRecord> = [Ladder::B, Ladder::C].into_iter().flat_map(verify_drawn_diagram).collect();
    let pass = all_pass(&structure) && all_pass(&diagrams);
    let mut details = vec![format!("{} table arrows over {lo}..{hi}: all structural patterns match", structure.len())];
    details.extend(describe(&non_pass(&diagrams)));
    line(4, "zero/nonzero patterns of the eight tables and both diagrams", pass, &details);
    assert!(!pass);
    assert_eq!(structure.len(), 8 * (hi - lo + 1) as usize);
    assert!(all_pass(&structure));
    let failed: BTreeSet<String> = non_pass(&diagrams)
        .iter()
        .map(|r| {
            assert_eq!(r.status, Status::Fail);
            assert!(r.note.as_deref().unwrap_or("").contains("printed table row agrees"), "{r}");
            r.id.split(':').next().unwrap().trim().to_string()
        })
        .collect();
    assert_eq!(failed, DIAGRAM_ERRATA.iter().map(|s| s.to_string()).collect());
}

fn criterion_5() {
    let (lo, hi) = TABLE_RANGE;
    let records: Vec<CheckRecord> = [Ladder::B, Ladder::C].into_iter().flat_map(|l| updown_product_check(l, lo, hi)).collect();
    let pass = all_pass(&records);
    line(5, &format!("up-down coefficient products over {lo}..{hi} ({} checks)", records.len()), pass, &describe(&non_pass(&records)));
    assert!(pass);
}

const RODRIGUES_DISCREPANCIES: [(&str, &str, Status); 29] = [
    ("b with gap states", "b psi_{-1} = -4i psi_{-2}", Status::SoftMismatch),
    ("b with second solutions", "b† psibar_{-4-n} = -4n(6+n)(1+2n) psibar_{-4-(n-1)} + psi_{-4-n}", Status::Fail),
    ("b with second solutions", "psi_{-4-n} = b^n b† psibar_{-4}", Status::Fail),
    ("b with second solutions", "psi_{n-2} = (b†)^{n+1} psibar_{-2}, n >= 1", Status::Fail),
    ("b with second solutions", "psibar_{-3} = b† psibar_{-4}", Status::Fail),
    ("c on all psi", "c psi_{3n-1} = 24(n-1)(3n-2)(3n+2) psi_{3(n-1)-1}", Status::Fail),
    ("c on all psi", "c psi_{3n-2} = 24(n-1)(3n-4)(3n+1) psi_{3(n-1)-2}", Status::Fail),
    ("c on all psi", "c psi_{3n-6} = 24(n-1)(3n-8)(3n-7) psi_{3(n-1)-6}", Status::Fail),
    ("c on all psi", "c† psi_{3n-1} = psi_{3(n+1)-1}", Status::Fail),
    ("c on all psi", "c† psi_{3n-2} = psi_{3(n+1)-2}", Status::Fail),
    ("c on all psi", "c† psi_{3n-6} = psi_{3(n+1)-6}", Status::Fail),
    ("c on all psi", "psi_{-1+3n} = (c†)^n psi_{-1}", Status::Fail),
    ("c on all psi", "psi_{-2+3n} = (c†)^n psi_{-2}", Status::Fail),
    ("c on all psi", "psi_{3n-6} = (c†)^n psi_{-6}", Status::Fail),
    ("c with second solutions", "c psi_{-1+3n} = 24(n-1)(3n-2)(3n+2) psi_{-1+3(n-1)}", Status::SoftMismatch),
    ("c with second solutions", "c psi_{3n-2} = 24n(3n-1)(4+3n) psibar_{3(n-1)-2} + psi_{3n-2}", Status::Fail),
    ("c with second solutions", "c psi_{3n-6} = psi_{3(n+1)-6}", Status::Fail),
    ("c with second solutions", "c psibar_{-3n-3} = psibar_{-3(n+1)}", Status::Fail),
    ("c with second solutions", "c psibar_{1-3n} = 24n(3n-1)(4+3n) psibar_{1-3(n-1)} + psi_{3n-2}", Status::Fail),
    ("c with second solutions", "c psibar_{2+3n} = 24n(1+3n)(5+3n) psibar_{2+3(n-1)} + psi_{-1+3n}", Status::Fail),
    ("c with second solutions", "c† psi_{-1+3n} = psi_{-1+3(n+1)}", Status::Fail),
    ("c with second solutions", "c† psi_{2-3n} = -24(n-1)(3n-8)(3n-4) psibar_{2-3(n-1)}", Status::Fail),
    ("c with second solutions", "c† psi_{3n-2} = psi_{3(n+1)-2}", Status::Fail),
    ("c with second solutions", "c† psibar_{-3n-3} = (48 - 24n(-7 + 9n^2)) psibar_{-3(n-1)-3}", Status::Fail),
    ("c with second solutions", "c† psibar_{1-3n} = psibar_{1-3(n+1)}", Status::Fail),
    ("c with second solutions", "psi_{-1+3n} = (c†)^n c psibar_2", Status::Fail),
    ("c with second solutions", "psi_{3n-2} = (c†)^n b psibar_1, n >= 0", Status::Fail),
    ("c with second solutions", "psibar_{-3n-3} = c^n psibar_{-3}", Status::Fail),
    ("c with second solutions", "psibar_{1-3n} = (c†)^n psibar_1, n >= 0", Status::Fail),
];

fn criterion_6() {
    let records = verify_rodrigues(RODRIGUES_BOUND).expect("rodrigues suite runs");
    let by_anchor = status_by_anchor(&records);
    let pass = no_fail(&records);
    let bad: Vec<(String, String, Status)> =
        by_anchor.iter().filter(|(_, s)| **s != Status::Pass).map(|((g, a), s)| (g.clone(), a.clone(), *s)).collect();
    let passing_groups: BTreeSet<&str> = by_anchor.keys().map(|(g, _)| g.as_str()).filter(|g| !bad.iter().any(|(b, _, _)| b == g)).collect();
    let mut details = vec![format!(
        "{} printed rules over |n| <= {RODRIGUES_BOUND}; fully confirmed blocks: {}",
        by_anchor.len(),
        passing_groups.into_iter().collect::<Vec<_>>().join(", ")
    )];
    details.extend(bad.iter().map(|(g, a, s)| format!("[{s}] {g}: {a}")));
    details.push("c† annihilates psi(-6), psi(-1) and psi(-2), so the c-chains seeded there vanish".into());
    line(6, "Rodrigues generation rules and coefficient formulas", pass, &details);
    assert!(!pass);
    let expected: Vec<(String, String, Status)> =
        RODRIGUES_DISCREPANCIES.iter().map(|(g, a, s)| (g.to_string(), a.to_string(), *s)).collect();
    assert_eq!(bad, expected);
    let corrected: Vec<&Status> = by_anchor.iter().filter(|((g, _), _)| g == "b with second solutions (corrected reading)").map(|(_, s)| s).collect();
    assert!(!corrected.is_empty() && corrected.iter().all(|s| **s == Status::Pass));
}

fn criterion_7() {
    let (lo, hi) = SERIES_RANGE;
    let mut records = gauged::verify_gauged_recurrences(lo..=hi, RECURRENCE_ORDER);
    records.extend(gauged::verify_ode(lo..=hi, RECURRENCE_ORDER));
    let hyper = gauged::verify_hypergeometric(lo..=hi, HYPERGEOMETRIC_ORDER);
    let pass = all_pass(&records) && all_pass(&hyper);
    let title = format!(
        "gauged recurrences and zero modes to order {RECURRENCE_ORDER}, hypergeometric forms to order {HYPERGEOMETRIC_ORDER}, n in {lo}..{hi} ({} checks)",
        records.len() + hyper.len()
    );
    let mut details = describe(&non_pass(&records));
    details.extend(describe(&non_pass(&hyper)));
    line(7, &title, pass, &details);
    assert!(pass);
}

fn criterion_8() {
    let mut records = alpha::verify_alpha_actions(ALPHA_MAX_INDEX, ALPHA_ORDER);
    records.extend(alpha::verify_alpha_forms(ALPHA_MAX_INDEX, ALPHA_ORDER));
    let pass = all_pass(&records);
    line(8, &format!("alpha actions by linearity and by direct application ({} checks, order {ALPHA_ORDER})", records.len()), pass, &describe(&non_pass(&records)));
    assert!(pass);
}

fn criterion_9() {
    let (slo, shi) = SERIES_RANGE;
    let (lo, hi) = DERIVATIVE_RANGE;
    let heun_records = heun::verify_heun(slo..=shi, HEUN_ORDER);
    let mut derivative = heun::verify_derivative_frame(lo..=hi, DERIVATIVE_ORDER);
    derivative.extend(heun::verify_frame_agreement(lo..=hi, DERIVATIVE_ORDER));
    let parameters: Vec<&CheckRecord> = heun_records.iter().filter(|r| r.group == "parameters").collect();
    let pass = no_fail(&heun_records) && no_fail(&derivative) && !parameters.is_empty();
    let soft = non_pass(&derivative);
    let mut details = vec![format!(
        "{} Heun checks (order {HEUN_ORDER}, n in {slo}..{shi}), {} derivative-frame checks (order {DERIVATIVE_ORDER}, n in {lo}..{hi})",
        heun_records.len(),
        derivative.len()
    )];
    details.push("printed-coefficient typos, identities confirmed with the corrected coefficient:".into());
    details.extend(describe(&soft));
    line(9, "Heun parameters, b-/c- pullbacks, W-equation and b^ recurrences", pass, &details);
    assert!(pass);
    assert!(all_pass(&heun_records));
    assert!(parameters.iter().all(|r| r.status == Status::Pass));
    let soft_ids: BTreeSet<(String, i64)> = soft
        .iter()
        .map(|r| {
            assert_eq!(r.status, Status::SoftMismatch, "{r}");
            (r.group.clone(), r.index.unwrap())
        })
        .collect();
    let mut expected = BTreeSet::new();
    for n in lo..=hi {
        if n != 4 {
            expected.insert(("operators".to_string(), n));
        }
        if n != 2 {
            expected.insert(("b^†".to_string(), n));
        }
    }
    assert_eq!(soft_ids, expected);
}

fn criterion_10() {
    let records = crosscheck::verify_crosscheck(EOP_RANGE.0..=EOP_RANGE.1, POLY_RANGE.0..=POLY_RANGE.1);
    let pass = all_pass(&records);
    line(
        10,
        &format!("eop states proportional to Darboux states (n = -3, {}..{}), polynomials match physical states ({}..{})", EOP_RANGE.0, EOP_RANGE.1, POLY_RANGE.0, POLY_RANGE.1),
        pass,
        &describe(&non_pass(&records)),
    );
    assert!(pass);
    assert_eq!(records.len(), 1 + 11 + 9);
}

fn criterion_11() {
    let (lo, hi) = TABLE_RANGE;
    let mut complete = true;
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for table in Table::ALL {
        let records = verify_table(table, lo, hi);
        let coefficients: Vec<&CheckRecord> = records.iter().filter(|r| r.id == "coefficient").collect();
        let indices: BTreeSet<i64> = coefficients.iter().filter_map(|r| r.index).collect();
        complete &= indices == (lo..=hi).collect();
        compared += coefficients.len();
        for r in coefficients.into_iter().filter(|r| r.status != Status::Pass) {
            complete &= r.status == Status::SoftMismatch && r.recomputed.as_deref().is_some_and(|s| !s.is_empty());
            mismatches.push(r.to_string());
        }
    }
    let mut details = vec![format!("{compared} entries compared, {} mismatches:", mismatches.len())];
    details.extend(mismatches.iter().cloned());
    line(11, "complete coefficient diff of the eight tables under Darboux normalization", complete, &details);
    assert!(complete);
    assert_eq!(compared, 8 * (hi - lo + 1) as usize);
    assert_eq!(mismatches.len(), 5);
}

#[test]
fn acceptance() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
}
