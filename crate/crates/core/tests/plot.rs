use lost_at_sea::plot::{distinct_cases, figure, figure2_panels, figure4_panels, figure6_panels};
use lost_at_sea::CaseLabel;

#[test]
fn figure2_spans_three_cases() {
    let panels = figure2_panels().unwrap();
    assert_eq!(panels.len(), 4);
    assert_eq!(distinct_cases(&panels).len(), 3);
}

#[test]
fn figure6_all_second_disk_case() {
    let panels = figure6_panels().unwrap();
    assert_eq!(panels.len(), 3);
    assert!(panels.iter().all(|p| p.case == Some(CaseLabel::DiskCase2)));
    assert!(figure(6).unwrap().contains("Case 2'"));
}

#[test]
fn figure4_is_the_zalgaller_polyline() {
    let p = figure4_panels();
    assert_eq!(p.len(), 1);
    assert!(p[0].path.len() > 5);
}

#[test]
fn svg_is_byte_deterministic() {
    for f in [2, 4, 6] {
        assert_eq!(figure(f).unwrap().as_bytes(), figure(f).unwrap().as_bytes());
    }
}
