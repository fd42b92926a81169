use fekete_lab::fekete::{min_separation, pair_energy_oracle, solve_fekete};
use fekete_lab::interpolation::{lagrange_sections, lebesgue_constant};
use fekete_lab::{Model, SectionSpace, SolverOptions};

fn energy(k: u32) -> f64 {
    let c = solve_fekete(&SectionSpace::new(Model::Cp1, k), &SolverOptions::default()).unwrap();
    assert!(c.is_certified(), "k={k}: {:?}", c.certificate);
    pair_energy_oracle(&c.points).unwrap()
}

#[test]
fn platonic_optima() {
    assert!((energy(3) - 3.0 * (2.0f64 / 3.0).ln()).abs() < 1e-6);
    assert!((energy(5) + 6.0 * 2f64.ln()).abs() < 1e-6);
    assert!((energy(11) - 15.0 * 0.2f64.ln()).abs() < 1e-5);
}

#[test]
fn seeds_reproduce_configurations() {
    let space = SectionSpace::new(Model::Cp1, 9);
    let opts = SolverOptions::with_seed(123);
    let a = solve_fekete(&space, &opts).unwrap();
    let b = solve_fekete(&space, &opts).unwrap();
    assert_eq!(a.points, b.points);
    assert_eq!(a.log_vdm, b.log_vdm);
}

#[test]
fn product_model_solves_are_certified() {
    for k in 1..=3 {
        let space = SectionSpace::new(Model::Cp1xCp1, k);
        let c = solve_fekete(&space, &SolverOptions::default()).unwrap();
        assert!(c.is_certified(), "k={k}: {:?}", c.certificate);
        assert!(min_separation(&c) > 0.0);
        let l = lebesgue_constant(&lagrange_sections(&c).unwrap());
        assert!(l.value <= space.dim() as f64 * (1.0 + 1e-6));
    }
}
