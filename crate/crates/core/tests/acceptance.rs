//! Runs every acceptance criterion and prints one PASS/FAIL line each.
//!
//! Criterion 7 has a known disk-half failure: with starts uniform over the
//! disk area the r = 2 median is about 0.808, not 0.94. The 0.94 figure is
//! what a start radius uniform on [0, 1] gives. The criterion is reported as
//! FAIL, and this target only goes red if that failure changes shape.

use std::process::ExitCode;

use lost_at_sea::paper_check::{median_check, run_criterion, DISK_R2_MEDIAN, SEED};

const AREA_UNIFORM_DISK_MEDIAN: f64 = 0.808;
const MEDIAN_TOL: f64 = 0.01;

fn criterion_7_fails_as_documented() -> Result<(), String> {
    let m = median_check(1_000_000, SEED).map_err(|e| e.to_string())?;
    if !m.strip_ok() {
        return Err(format!("strip median {} left its band", m.strip.point));
    }
    if (m.disk.point - AREA_UNIFORM_DISK_MEDIAN).abs() > MEDIAN_TOL {
        return Err(format!("area-uniform disk median moved to {}", m.disk.point));
    }
    if (m.radial.point - DISK_R2_MEDIAN).abs() > MEDIAN_TOL {
        return Err(format!("radius-uniform disk median moved to {}", m.radial.point));
    }
    Ok(())
}

fn main() -> ExitCode {
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for id in 1..=10 {
        let r = run_criterion(id).expect("criterion ids 1..=10 exist");
        println!("{}", r.line());
        passed += r.passed as usize;
        match (id, r.passed) {
            (_, true) => {}
            (7, false) => match criterion_7_fails_as_documented() {
                Ok(()) => println!("    known failure: disk median under area-uniform starts (see README)"),
                Err(e) => unexpected.push(format!("criterion 7: {e}")),
            },
            _ => unexpected.push(format!("criterion {id} failed")),
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: {passed} of 10 pass");
        ExitCode::SUCCESS
    } else {
        for u in &unexpected {
            println!("unexpected: {u}");
        }
        ExitCode::FAILURE
    }
}
