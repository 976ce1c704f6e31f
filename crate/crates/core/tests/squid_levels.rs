use busqc::squid::{
    calibrate_critical_current, epsilon_from_spectrum, extract_two_level, extract_two_level_on, solve_levels,
    tunneling_splitting, FluxGrid, SquidParams,
};

fn design(ic: f64) -> SquidParams<f64> {
    SquidParams::reference_design().with_critical_current(ic)
}

#[test]
fn splitting_converges_under_grid_refinement() {
    let p = design(2.375);
    let coarse = tunneling_splitting(&p, &FluxGrid::default()).unwrap().0;
    let fine = tunneling_splitting(&p, &FluxGrid::default().refined()).unwrap().0;
    assert!(((coarse - fine) / fine).abs() < 1e-3, "{coarse} vs {fine}");
}

#[test]
fn eigenvectors_orthonormal_with_small_residual() {
    for bias in [0.5, 0.5002, 0.47] {
        let p = design(2.6).with_flux_bias(bias);
        let sol = solve_levels(&p, &FluxGrid::default(), 4).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((sol.overlap(a, b) - want).abs() < 1e-10, "bias {bias} <{a}|{b}>");
            }
        }
        assert!(sol.max_residual(&p) < 1e-6);
        assert!(sol.energies.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn symmetric_bias_gives_parity_eigenstates() {
    let sol = solve_levels(&design(2.375), &FluxGrid::default(), 2).unwrap();
    let n = sol.grid.n_points;
    for k in 0..2 {
        let psi = &sol.wavefunctions[k];
        let sign = if k == 0 { 1.0 } else { -1.0 };
        let defect = (0..n).map(|j| (psi[j] - sign * psi[n - 1 - j]).abs()).fold(0.0, f64::max);
        let scale = psi.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!(defect < 1e-9 * scale, "level {k}: {defect}");
    }
}

#[test]
fn splitting_decreases_with_critical_current() {
    let grid = FluxGrid::default();
    let ds: Vec<f64> = [2.2, 2.3, 2.4, 2.5, 2.6]
        .iter()
        .map(|&ic| tunneling_splitting(&design(ic), &grid).unwrap().0)
        .collect();
    assert!(ds.windows(2).all(|w| w[1] < w[0]), "{ds:?}");
}

#[test]
fn reference_device_in_paper_regime() {
    let tl = extract_two_level(&design(2.375).with_flux_bias(0.5 + 0.15e-3)).unwrap();
    assert!((tl.delta - 2.6).abs() / 2.6 < 0.2, "Δ = {}", tl.delta);
    assert!(!tl.at_solver_floor);
    let deep = extract_two_level(&design(3.0)).unwrap();
    assert!(deep.at_solver_floor);
    assert!(deep.delta < 1e-6);
}

#[test]
fn epsilon_routes_agree() {
    let p = design(3.0).with_flux_bias(0.5 + 0.15e-3);
    let tl = extract_two_level(&p).unwrap();
    let spec = epsilon_from_spectrum(&p, &FluxGrid::default()).unwrap();
    assert!(((tl.epsilon - spec) / spec).abs() < 1e-3, "{} vs {spec}", tl.epsilon);
    let mirrored = extract_two_level(&p.with_flux_bias(0.5 - 0.15e-3)).unwrap();
    assert!((mirrored.epsilon + tl.epsilon).abs() < 1e-9);
}

#[test]
fn inductance_renormalization_is_a_small_correction() {
    // 1 + M²/(L·L_b) for the bus design
    let factor = 1.0 + 2.0f64.powi(2) / (150.0 * 2000.0);
    let base = extract_two_level(&design(3.0).with_flux_bias(0.50015)).unwrap();
    let renorm = extract_two_level(&design(3.0).with_flux_bias(0.50015).with_renormalization(factor)).unwrap();
    let rel = |a: f64, b: f64| ((a - b) / b).abs();
    assert!(rel(renorm.epsilon, base.epsilon) < 1e-2);
    assert!(rel(renorm.persistent_current, base.persistent_current) < 1e-2);
}

#[test]
fn calibration_round_trip() {
    let grid = FluxGrid::default();
    let target = tunneling_splitting(&design(2.45), &grid).unwrap().0;
    let cal = calibrate_critical_current(&design(2.0), target, (2.0, 3.0), &grid).unwrap();
    assert!((cal.critical_current_ua - 2.45).abs() < 5e-3, "{cal:?}");
}

#[test]
fn single_precision_runs() {
    let p = SquidParams::<f32>::reference_design().with_critical_current(2.375);
    let grid = FluxGrid::<f32>::new(-0.25, 1.25, 1025).unwrap();
    let tl = extract_two_level_on(&p, &grid).unwrap();
    assert!(tl.delta > 1.5 && tl.delta < 4.0, "{}", tl.delta);
}
