// Expansions of monomials in z, w, t, z-w, z-t, w-t into towers of Laurent
// series, and the diagrams that say the routes agree.

use std::fmt::Write;

use sc_obstruction::calculus::{
    check_weird_isom, expand, taylor_shift, verify_diagram, Coord, DiagramKind, Monomial, Space,
};
use sc_obstruction::Rat;

fn run_example() -> String {
    let mut out = String::new();
    let tower = Space::tower("z;w", &[Coord::Z, Coord::W]);
    let s = expand(&Monomial::of(Coord::ZW, -1), &tower, 4).unwrap();
    writeln!(out, "(z-w)^-1 in ((z))((w)): {s}").unwrap();

    let cube = expand(&Monomial::of(Coord::W, 3), &tower, 0).unwrap();
    let shifted = taylor_shift(&cube, Coord::Z, Rat::from_integer(1), Coord::W).unwrap();
    writeln!(out, "e^(z d/dw) w^3 = {shifted}").unwrap();

    let m = Monomial::parse_exponents("1,-1,0,-1,1,-2").unwrap();
    for kind in DiagramKind::ALL {
        let r = verify_diagram(kind, &m, 8).unwrap();
        writeln!(out, "{}: {} route pairs compared, agree: {}", r.diagram, r.comparisons, r.ok()).unwrap();
    }
    let mixed =
        [Monomial::parse_exponents("2,0,0,-3,0,0").unwrap(), Monomial::parse_exponents("0,-1,0,1,0,0").unwrap()];
    writeln!(out, "weird isomorphism triangle commutes: {}", check_weird_isom(&mixed, 8).unwrap().is_none()).unwrap();
    out
}

fn main() {
    print!("{}", run_example());
}
