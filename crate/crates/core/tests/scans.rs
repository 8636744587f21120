use std::f64::consts::PI;

use powerbound::admissible::{
    lambda_feasibility_scan, power_constraints, sinclair_scan, FeasibilityGrid, RayClass, SinclairConfig,
};
use powerbound::reproduce::sinclair_families;

#[test]
fn sinclair_families_have_no_violations() {
    let cfg = SinclairConfig {
        theta_count: 360,
        ..SinclairConfig::default()
    };
    for spec in sinclair_families() {
        let scan = sinclair_scan(&spec, &cfg).unwrap();
        assert_eq!(scan.count(RayClass::Violation), 0, "{spec}");
        assert_eq!(scan.rays.len(), 360);
    }
}

#[test]
fn sinclair_scan_is_deterministic() {
    let cfg = SinclairConfig {
        theta_count: 90,
        ..SinclairConfig::default()
    };
    let spec = &sinclair_families()[2];
    assert_eq!(
        sinclair_scan(spec, &cfg).unwrap().to_csv(),
        sinclair_scan(spec, &cfg).unwrap().to_csv()
    );
}

#[test]
fn default_feasibility_grid_certificates() {
    let grid = FeasibilityGrid::default();
    let two = lambda_feasibility_scan(&power_constraints(2, 20, 0.99).unwrap(), &grid).unwrap();
    assert!(two.iter().any(|p| p.r == 1.0 && p.theta == 0.0));
    assert!(two.iter().all(|p| p.angle_index == 0));

    let six = lambda_feasibility_scan(&power_constraints(6, 6, 0.9).unwrap(), &grid).unwrap();
    let k = grid.angles / 7;
    assert!(six.iter().any(|p| p.angle_index == k && p.r == 1.0));
    assert!((six.iter().find(|p| p.angle_index == k).unwrap().theta - 2.0 * PI / 7.0).abs() < 1e-12);
}
