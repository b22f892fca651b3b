// Module and intertwiner cocycles over an A-set: coboundaries and their
// trivialization.

use std::fmt::Write;

use sc_obstruction::cohomology::{
    check_module_cocycle, check_psi_cocycle, module_coboundary, psi_coboundary, trivialize_module_cocycle,
    trivialize_psi_cocycle, IntertwinerCochain, ModuleCochain,
};
use sc_obstruction::group::{quotient_group, ASet};
use sc_obstruction::{FiniteAbelianGroup, Scalar};

fn run_example() -> String {
    let mut out = String::new();
    let g = FiniteAbelianGroup::cyclic(6);
    let q = quotient_group(&g, &[0, 3]).unwrap();
    let set = ASet::cosets_of(&g, &q);
    let n = set.len();
    let lambda = ModuleCochain {
        group: g.clone(),
        set: set.clone(),
        values: (0..g.order() * n).map(|k| Scalar::root_of_unity((k * k) as i64, 9)).collect(),
    };
    let phi = module_coboundary(&lambda);
    writeln!(out, "A-set of {n} cosets; d(lambda) is a module cocycle: {}", check_module_cocycle(&phi).is_none())
        .unwrap();
    let mu = trivialize_module_cocycle(&phi).unwrap().unwrap();
    writeln!(out, "trivialized: d(mu) == d(lambda): {}", module_coboundary(&mu) == phi).unwrap();

    let labels = vec!["a".to_string(), "b".to_string()];
    let chain = IntertwinerCochain {
        s1: set.clone(),
        s2: labels,
        values: (0..n * 2).map(|k| Scalar::root_of_unity(k as i64, 5)).collect(),
    };
    let psi = psi_coboundary(&g, &chain);
    let back = trivialize_psi_cocycle(&psi).unwrap().unwrap();
    writeln!(
        out,
        "intertwiner cocycle ok: {}, trivialized: {}",
        check_psi_cocycle(&psi).is_none(),
        psi_coboundary(&g, &back) == psi
    )
    .unwrap();
    out
}

fn main() {
    print!("{}", run_example());
}
