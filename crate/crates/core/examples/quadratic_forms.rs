// Quadratic forms as traces: building cocycles from forms and listing the
// forms with values in {1, -1}.

use std::fmt::Write;

use sc_obstruction::cohomology::{is_abelian_3_cocycle, trace};
use sc_obstruction::quadratic::{check_pm1_structure, cocycle_from_form, enumerate_pm1_forms, QuadraticForm};
use sc_obstruction::{FiniteAbelianGroup, Scalar};

fn run_example() -> String {
    let mut out = String::new();
    let z6 = FiniteAbelianGroup::cyclic(6);
    let q = QuadraticForm::from_fn(&z6, |i| Scalar::root_of_unity((i * i) as i64, 12));
    let c = cocycle_from_form(&q).unwrap();
    writeln!(
        out,
        "Z/6, Q(i) = e^(2 pi i i^2/12): cocycle ok {}, trace round-trips {}",
        is_abelian_3_cocycle(&c).ok(),
        trace(&c).unwrap() == q
    )
    .unwrap();

    for spec in ["4", "2,2", "3", "5"] {
        let g: FiniteAbelianGroup = spec.parse().unwrap();
        let forms = enumerate_pm1_forms(&g).unwrap();
        let structured = forms.iter().all(|f| check_pm1_structure(f).unwrap().ok());
        writeln!(out, "{g}: {} forms with values +-1, all trivial on 2A and coset-constant: {structured}", forms.len())
            .unwrap();
    }
    out
}

fn main() {
    print!("{}", run_example());
}
