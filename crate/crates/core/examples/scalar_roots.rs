// Exact scalars `q·e^{2πiθ}`: products, inverses and n-th roots.

use std::fmt::Write;

use sc_obstruction::{Rat, Scalar};

fn run_example() -> String {
    let mut out = String::new();
    let i = Scalar::root_of_unity(1, 4);
    writeln!(out, "i = {i}, i^2 = {}", i.pow(2)).unwrap();
    let minus_four = Scalar::from_rational(Rat::from_integer(-4)).unwrap();
    let roots = minus_four.nth_roots(2).unwrap();
    let shown: Vec<String> = roots.iter().map(|r| r.to_string()).collect();
    writeln!(out, "square roots of -4: {}", shown.join(", ")).unwrap();
    let eighth = Scalar::root_of_unity(1, 8);
    writeln!(out, "e^(2 pi i/8) inverse = {}", eighth.inv()).unwrap();
    match Scalar::from_integer(2).unwrap().nth_roots(2) {
        Ok(_) => writeln!(out, "sqrt(2) is rational?").unwrap(),
        Err(e) => writeln!(out, "sqrt(2): {e}").unwrap(),
    }
    out
}

fn main() {
    print!("{}", run_example());
}
