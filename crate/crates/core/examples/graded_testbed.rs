// Obstructions read off from concrete multiplication tables: the exterior
// algebra is obstructed, twisted group algebras extend after a twist, and
// the Z/4 parity wedge splits into coset modules.

use std::fmt::Write;

use sc_obstruction::testbed::fixtures::{exterior_c3, exterior_pairing, twisted_z3, z4_parity_wedge};
use sc_obstruction::testbed::{
    apply_twist, classify_parity, coset_module_build, obstruction_report, pairing_parity, verify_extension,
};

fn run_example() -> String {
    let mut out = String::new();

    let ext = exterior_c3();
    let r = obstruction_report(&ext).unwrap();
    writeln!(out, "exterior algebra: Omega(1,1) = {}, extendable: {}", r.cocycle.omega_at(1, 1), r.extendable).unwrap();
    let p = classify_parity(&ext, 1).unwrap();
    let pairing = pairing_parity(&ext, &exterior_pairing()).unwrap();
    writeln!(out, "odd part is {:?}; its pairing is {:?}", p.parity, pairing.kind).unwrap();

    let z3 = twisted_z3();
    let r = obstruction_report(&z3).unwrap();
    writeln!(out, "twisted Z/3 before: {}", verify_extension(&z3).describe(&z3)).unwrap();
    let fixed = apply_twist(&z3, r.lambda.as_ref().unwrap()).unwrap();
    writeln!(out, "twisted Z/3 after: {}", verify_extension(&fixed).describe(&fixed)).unwrap();

    let z4 = z4_parity_wedge();
    let cm = coset_module_build(&z4, &[0, 2]).unwrap();
    let dims: Vec<usize> = cm.blocks.iter().map(|b| b.dimension).collect();
    writeln!(
        out,
        "Z/4 wedge over B = {{0, 2}}: coset dimensions {dims:?}, Phi trivial {}, Psi trivial {}",
        cm.phi_trivial, cm.psi_trivial
    )
    .unwrap();
    out
}

fn main() {
    print!("{}", run_example());
}
