// Low-degree abelian cohomology: coboundaries, the cocycle check, traces and
// constructive trivialization.

use std::fmt::Write;

use sc_obstruction::cohomology::{
    d1, d2, is_abelian_3_cocycle, trace, trivialize_2cocycle, trivialize_3cocycle, AbelianCochain3, Cochain1, Cochain2,
    Trivialization,
};
use sc_obstruction::{FiniteAbelianGroup, Scalar};

fn run_example() -> String {
    let mut out = String::new();
    let g: FiniteAbelianGroup = "4,2".parse().unwrap();

    let phi = Cochain1::from_fn(&g, |i| Scalar::root_of_unity(i as i64, 7));
    let lambda = Cochain2::from_fn(&g, |i, j| Scalar::root_of_unity((i * j) as i64, 16));
    writeln!(out, "d2(d1 phi) trivial: {}", d2(&d1(&phi)).is_trivial()).unwrap();
    writeln!(out, "d2(lambda) is an abelian 3-cocycle: {}", is_abelian_3_cocycle(&d2(&lambda)).ok()).unwrap();

    // A symmetric 2-cocycle on Z/2 whose trivializer needs fourth roots of unity.
    let z2 = FiniteAbelianGroup::cyclic(2);
    let f = Cochain2::from_fn(&z2, |i, j| if i == 1 && j == 1 { Scalar::minus_one() } else { Scalar::one() });
    let psi = trivialize_2cocycle(&f).unwrap();
    writeln!(out, "f(1,1) = -1 is d1 of phi with phi(1) = {}", psi.get(1)).unwrap();

    // The super vector space cocycle: F = 1, Omega(i,j) = (-1)^{ij}.
    let sup = AbelianCochain3::from_fns(&z2, |_, _, _| Scalar::one(), |i, j| Scalar::root_of_unity((i * j) as i64, 2));
    let q = trace(&sup).unwrap();
    writeln!(out, "super trace: Q(1) = {}", q.value(1)).unwrap();
    match trivialize_3cocycle(&sup).unwrap() {
        Trivialization::Trivial(_) => writeln!(out, "super cocycle is trivial").unwrap(),
        Trivialization::Obstructed { witness, .. } => writeln!(out, "super cocycle obstructed at {witness:?}").unwrap(),
    }
    match trivialize_3cocycle(&d2(&lambda)).unwrap() {
        Trivialization::Trivial(mu) => {
            writeln!(out, "recovered a twist: d2(mu) == d2(lambda): {}", d2(&mu) == d2(&lambda)).unwrap()
        }
        Trivialization::Obstructed { .. } => writeln!(out, "unexpected obstruction").unwrap(),
    }
    out
}

fn main() {
    print!("{}", run_example());
}
