use cauchy_dos::verify::{check_theorem1_charfn, check_theorem1_dos, CharfnCheck, DosCheck};

#[test]
fn small_square_lattice_density_check_passes() {
    let cfg = DosCheck {
        side: 24,
        n_samples: 60,
        ..DosCheck::two_dimensional()
    };
    let report = check_theorem1_dos(&cfg).unwrap();
    assert!(report.pass, "{report}");
}

// About 12 minutes on one core: cargo test --test checks -- --ignored
#[test]
#[ignore]
fn square_lattice_density_check_passes() {
    let report = check_theorem1_dos(&DosCheck::two_dimensional()).unwrap();
    assert!(report.pass, "{report}");
}

#[test]
fn off_diagonal_charfn_check_passes() {
    let cfg = CharfnCheck {
        psi_offset: 1,
        n_samples: 200,
        ..CharfnCheck::default()
    };
    let report = check_theorem1_charfn(&cfg).unwrap();
    assert!(report.pass, "{report}");
}
