mod common;

#[test]
fn freelie_antisymmetry() {
    common::freelie_antisymmetry().unwrap();
}

#[test]
fn freelie_jacobi() {
    common::freelie_jacobi().unwrap();
}

#[test]
fn witt_dimensions() {
    common::witt_dimensions().unwrap();
}

#[test]
fn loop_jacobi_and_form() {
    common::loop_jacobi_and_form().unwrap();
}

#[test]
fn loop_omega_automorphism() {
    common::loop_omega_automorphism().unwrap();
}

#[test]
fn finite_omega_automorphism() {
    common::finite_omega_automorphism().unwrap();
}

#[test]
fn structure_constant_laws() {
    common::structure_constant_laws().unwrap();
}

#[test]
fn exact_rank_laws() {
    common::exact_rank_laws().unwrap();
}
