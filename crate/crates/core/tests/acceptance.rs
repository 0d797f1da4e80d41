//! One line per acceptance criterion, written past the test harness capture
//! so that it shows up in every run.

use std::io::Write;
use std::time::{Duration, Instant};

use halfline::validation::{Bound, Check, Suite};

fn describe(check: &Check) -> String {
    let relation = match check.bound {
        Bound::AtMost => "<=",
        Bound::AtLeast => ">=",
    };
    let threshold = match check.bound {
        Bound::AtMost => format!("{:.0e}", check.threshold),
        Bound::AtLeast => check.threshold.to_string(),
    };
    let mut s = format!("{}: {:.3e} {relation} {threshold}", check.name, check.value);
    if let Some(note) = &check.note {
        s.push_str(&format!(" ({note})"));
    }
    s
}

fn criterion(number: usize, title: &str, suites: &[Suite], budget: Option<Duration>) {
    let start = Instant::now();
    let checks: Vec<Check> = suites.iter().flat_map(|s| s.run(None)).collect();
    let elapsed = start.elapsed();
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    let in_budget = budget.is_none_or(|b| elapsed <= b);
    let passed = failed.is_empty() && in_budget && !checks.is_empty();
    let budget_text = budget.map_or(String::new(), |b| format!(" / {} s", b.as_secs()));
    let detail = match failed.first() {
        Some(c) => describe(c),
        None => {
            let worst = checks
                .iter()
                .filter(|c| c.bound == Bound::AtMost)
                .max_by(|a, b| (a.value / a.threshold).total_cmp(&(b.value / b.threshold)));
            worst.map_or(String::new(), |c| format!("worst {}", describe(c)))
        }
    };
    let line = format!(
        "criterion {number:>2} {title}: {} [{} checks, {:.2} s{budget_text}] {detail}",
        if passed { "PASS" } else { "FAIL" },
        checks.len(),
        elapsed.as_secs_f64(),
    );
    let _ = writeln!(std::io::stderr(), "{line}");
    for c in failed.iter().skip(1) {
        let _ = writeln!(std::io::stderr(), "    also failed: {}", describe(c));
    }
    assert!(passed, "{line}");
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

#[test]
fn criterion_01_elementary_closed_forms() {
    criterion(1, "elementary closed forms", &[Suite::Elementary], secs(1));
}

#[test]
fn criterion_02_integral_identities() {
    criterion(2, "integral identities", &[Suite::Integrals], secs(10));
}

#[test]
fn criterion_03_resolvent_identity() {
    criterion(3, "resolvent as a spectral integral", &[Suite::Resolvent], secs(30));
}

#[test]
fn criterion_04_eigenvalue_oracle() {
    criterion(4, "eigenvalues against shooting", &[Suite::Oracle], secs(60));
}

#[test]
fn criterion_05_spiral_invariant() {
    criterion(5, "spiral invariant", &[Suite::Spiral], None);
}

#[test]
fn criterion_06_transforms() {
    criterion(
        6,
        "involution and biorthogonality",
        &[Suite::Involution, Suite::Biorthogonality],
        secs(120),
    );
}

#[test]
fn criterion_07_multiplier_identities() {
    criterion(7, "multiplier identities", &[Suite::Xi], secs(5));
}

#[test]
fn criterion_08_boundary_values() {
    criterion(8, "boundary values and densities", &[Suite::Boundary], None);
}

#[test]
fn criterion_09_projections() {
    criterion(9, "projections", &[Suite::Projection], None);
}

#[test]
fn criterion_10_moller_probe() {
    criterion(10, "time-dependent wave operators", &[Suite::Moller], secs(300));
}
