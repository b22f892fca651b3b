//! Acceptance suite: one line per criterion, each with its time budget.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sc_obstruction::calculus::{check_weird_isom, verify_diagram, DiagramKind, Monomial};
use sc_obstruction::cohomology::{
    check_module_cocycle, check_psi_cocycle, d1, d2, is_abelian_3_cocycle, module_coboundary, psi_coboundary, trace,
    trivialize_2cocycle, trivialize_module_cocycle, trivialize_psi_cocycle, Cochain1, Cochain2, IntertwinerCochain,
    ModuleCochain,
};
use sc_obstruction::group::{quotient_group, ASet};
use sc_obstruction::linalg::rational;
use sc_obstruction::quadratic::{
    check_pm1_structure, cocycle_from_form, enumerate_pm1_forms, is_quadratic_form, QuadraticForm,
};
use sc_obstruction::testbed::{
    apply_twist, classify_parity, coset_module_build, derive_cocycle, fixtures, obstruction_report, pairing_parity,
    rescale, verify_extension, ExtensionCheck, GradedAlgebraData, GradedPairing, PairingKind, Parity,
};
use sc_obstruction::{FiniteAbelianGroup, Rat, Scalar};

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn g(orders: &[i64]) -> FiniteAbelianGroup {
    FiniteAbelianGroup::new(orders).unwrap()
}

/// Every abelian group of order at most 16, one presentation each.
fn groups_up_to_16() -> Vec<FiniteAbelianGroup> {
    let mut out: Vec<FiniteAbelianGroup> = (1..=16).map(|n| g(&[n])).collect();
    for o in [&[2, 2][..], &[4, 2], &[2, 2, 2], &[3, 3], &[6, 2], &[8, 2], &[4, 4], &[4, 2, 2], &[2, 2, 2, 2]] {
        out.push(g(o));
    }
    out
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let den = [1i64, 2, 3, 4, 5, 6, 8, 12, 24][rng.gen_range(0..9)];
    let mag = Rat::new(rng.gen_range(1..10), rng.gen_range(1..10));
    Scalar::new(mag, num_rational::Ratio::new(rng.gen_range(0..den), den)).unwrap()
}

fn random_root(rng: &mut ChaCha8Rng, max_den: i64) -> Scalar {
    let den = rng.gen_range(1..=max_den);
    Scalar::root_of_unity(rng.gen_range(0..den), den)
}

fn criterion_1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut groups: Vec<FiniteAbelianGroup> = (1..=8).map(|n| g(&[n])).collect();
    groups.extend([g(&[2, 2]), g(&[4, 2]), g(&[2, 2, 2])]);
    let mut count = 0;
    for grp in &groups {
        let n = grp.order();
        for _ in 0..500 {
            let phi = Cochain1 { group: grp.clone(), values: (0..n).map(|_| random_scalar(&mut rng)).collect() };
            ensure!(d2(&d1(&phi)).is_trivial(), "d2(d1 phi) is not trivial on {grp}");
            let f = Cochain2 { group: grp.clone(), values: (0..n * n).map(|_| random_scalar(&mut rng)).collect() };
            let report = is_abelian_3_cocycle(&d2(&f));
            ensure!(report.ok(), "d2(f) on {grp}: {}", report.describe(grp));
            count += 1;
        }
    }
    Ok(format!("{count} cochain pairs over {} groups", groups.len()))
}

fn criterion_2() -> Check {
    let check = |q: &QuadraticForm| -> Result<(), String> {
        let c = cocycle_from_form(q).map_err(|e| e.to_string())?;
        let r = is_abelian_3_cocycle(&c);
        ensure!(r.ok(), "cocycle_from_form on {}: {}", q.group, r.describe(&q.group));
        ensure!(trace(&c).unwrap() == *q, "trace does not round-trip on {}", q.group);
        Ok(())
    };
    let mut pm1 = 0;
    for grp in groups_up_to_16() {
        for q in enumerate_pm1_forms(&grp).map_err(|e| e.to_string())? {
            check(&q)?;
            pm1 += 1;
        }
    }
    let z2 = g(&[2]);
    for k in 0..4 {
        let q = QuadraticForm::from_fn(&z2, |i| Scalar::root_of_unity(k * i as i64, 4));
        ensure!(is_quadratic_form(&q).is_none(), "Q(1) = i^{k} should be a form on Z/2");
        check(&q)?;
    }
    let mut cyclic = 0;
    for n in 1..=6i64 {
        let zn = g(&[n]);
        let mut distinct = std::collections::BTreeSet::new();
        for k in 0..2 * n {
            let q = QuadraticForm::from_fn(&zn, |i| Scalar::root_of_unity(k * (i * i) as i64, 2 * n));
            if is_quadratic_form(&q).is_none() {
                check(&q)?;
                distinct.insert(zn.elements().map(|i| q.value(i).to_string()).collect::<Vec<_>>());
            }
        }
        let forms = distinct.len() as i64;
        let expected = if n % 2 == 0 { 2 * n } else { n };
        ensure!(forms == expected, "Z/{n}: {forms} forms e^(2 pi i q i^2), expected {expected}");
        cyclic += forms;
    }
    Ok(format!("{pm1} forms with values +-1, 4 forms on Z/2, {cyclic} cyclic forms"))
}

/// A symmetric bicharacter with root-of-unity values.
fn random_bicharacter(grp: &FiniteAbelianGroup, rng: &mut ChaCha8Rng) -> Cochain2 {
    let orders = grp.cyclic_orders().to_vec();
    let r = orders.len();
    let mut m = vec![vec![0i64; r]; r];
    for s in 0..r {
        for t in s..r {
            let v = rng.gen_range(0..64);
            m[s][t] = v;
            m[t][s] = v;
        }
    }
    Cochain2::from_fn(grp, |i, j| {
        let (x, y) = (grp.coords_of(i), grp.coords_of(j));
        let mut total = num_rational::Ratio::<i64>::from_integer(0);
        for s in 0..r {
            for t in 0..r {
                let d = num_integer::gcd(orders[s], orders[t]);
                total += num_rational::Ratio::new(m[s][t] * x[s] * y[t], d);
            }
        }
        Scalar::root_of_unity(*total.numer(), *total.denom())
    })
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut count = 0;
    for grp in groups_up_to_16() {
        let n = grp.order();
        for k in 0..200 {
            let f = if k % 2 == 0 {
                let psi = Cochain1 { group: grp.clone(), values: (0..n).map(|_| random_scalar(&mut rng)).collect() };
                d1(&psi)
            } else {
                let psi = Cochain1 { group: grp.clone(), values: (0..n).map(|_| random_scalar(&mut rng)).collect() };
                random_bicharacter(&grp, &mut rng).pointwise_mul(&d1(&psi))
            };
            ensure!(d2(&f).is_trivial(), "generated 2-cochain is not an abelian 2-cocycle on {grp}");
            let phi = trivialize_2cocycle(&f).map_err(|e| e.to_string())?;
            let residual = d1(&phi).pointwise_mul(&f.inverse());
            ensure!(residual.is_trivial(), "residual d1(phi)/f is not 1 on {grp}");
            count += 1;
        }
    }
    let z2 = g(&[2]);
    let f = Cochain2::from_fn(&z2, |i, j| if i == 1 && j == 1 { Scalar::minus_one() } else { Scalar::one() });
    let phi = trivialize_2cocycle(&f).map_err(|e| e.to_string())?;
    ensure!(d1(&phi) == f, "Z/2, f(1,1) = -1 not trivialized");
    ensure!(*phi.get(1).phase().denom() == 4, "phi(1) = {} should have phase denominator 4", phi.get(1));
    Ok(format!("{count} random 2-cocycles; Z/2 f(1,1) = -1 gives phi(1) = {}", phi.get(1)))
}

fn fractions_up_to(d: i64) -> Vec<Scalar> {
    let mut set = BTreeSet::new();
    for den in 1..=d {
        for num in 0..den {
            let r = num_rational::Ratio::new(num, den);
            set.insert((*r.numer(), *r.denom()));
        }
    }
    set.into_iter().map(|(n, d)| Scalar::root_of_unity(n, d)).collect()
}

fn with_scales(a: &GradedAlgebraData, lambda: &[Scalar]) -> GradedAlgebraData {
    let mut out = a.clone();
    for (s, l) in out.scale.iter_mut().zip(lambda) {
        *s *= *l;
    }
    out
}

fn criterion_4() -> Check {
    // (a)
    let ext = fixtures::exterior_c3();
    let c = derive_cocycle(&ext).map_err(|e| e.to_string())?;
    ensure!(c.f.iter().all(Scalar::is_one), "Lambda(C^3): F is not identically 1");
    ensure!(c.omega_at(1, 1) == Scalar::minus_one(), "Lambda(C^3): Omega(1,1) = {}", c.omega_at(1, 1));
    let r = obstruction_report(&ext).map_err(|e| e.to_string())?;
    ensure!(!r.extendable, "Lambda(C^3) reported extendable");
    let phases = fractions_up_to(8);
    let composites = ExtensionCheck::new(&ext);
    let mut searched = 0;
    for a in &phases {
        for b in &phases {
            for cc in &phases {
                for d in &phases {
                    let cand = with_scales(&ext, &[*a, *b, *cc, *d]);
                    ensure!(!composites.check(&cand.scale).ok(), "twist ({a}, {b}, {cc}, {d}) extends Lambda(C^3)");
                    if searched % 997 == 0 {
                        ensure!(!verify_extension(&cand).ok(), "full check accepts twist ({a}, {b}, {cc}, {d})");
                    }
                    searched += 1;
                }
            }
        }
    }
    // (b)
    for (name, a) in [("Z/3", fixtures::twisted_z3()), ("Z/5", fixtures::twisted_z5())] {
        ensure!(!verify_extension(&a).ok(), "{name} fixture is already an extension");
        let r = obstruction_report(&a).map_err(|e| e.to_string())?;
        ensure!(r.extendable, "{name} reported obstructed");
        let fixed = apply_twist(&a, r.lambda.as_ref().unwrap()).map_err(|e| e.to_string())?;
        let check = verify_extension(&fixed);
        ensure!(check.ok(), "{name} after twist: {}", check.describe(&fixed));
    }
    // (c)
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for a in [fixtures::twisted_z3(), fixtures::twisted_z5()] {
        let lambda1 = obstruction_report(&a).map_err(|e| e.to_string())?.lambda.unwrap();
        let beta = random_bicharacter(&a.group, &mut rng);
        let lambda2 = lambda1.pointwise_mul(&beta);
        let a1 = apply_twist(&a, &lambda1).map_err(|e| e.to_string())?;
        let a2 = apply_twist(&a, &lambda2).map_err(|e| e.to_string())?;
        ensure!(verify_extension(&a2).ok(), "second trivializing twist fails on {}", a.group);
        let ratio = lambda2.pointwise_mul(&lambda1.inverse());
        let phi = trivialize_2cocycle(&ratio).map_err(|e| e.to_string())?;
        ensure!(d1(&phi) == ratio, "ratio of twists is not d1(phi) on {}", a.group);
        let inv = Cochain1 { group: phi.group.clone(), values: phi.values.iter().map(Scalar::inv).collect() };
        ensure!(rescale(&a1, &inv).map_err(|e| e.to_string())? == a2, "rescaling does not identify the extensions");
    }
    Ok(format!("{searched} twists of Lambda(C^3) rejected; Z/3, Z/5 extended; uniqueness recovered"))
}

fn brute_force_pm1_forms(grp: &FiniteAbelianGroup) -> BTreeSet<Vec<bool>> {
    let n = grp.order();
    let mut out = BTreeSet::new();
    for code in 0..(1u64 << (n - 1)) {
        let signs: Vec<bool> = std::iter::once(false).chain((0..n - 1).map(|k| code >> k & 1 == 1)).collect();
        let q = QuadraticForm::from_fn(grp, |i| if signs[i] { Scalar::minus_one() } else { Scalar::one() });
        if is_quadratic_form(&q).is_none() {
            out.insert(signs);
        }
    }
    out
}

fn as_signs(q: &QuadraticForm) -> Vec<bool> {
    q.values.iter().map(|v| !v.is_one()).collect()
}

fn criterion_5() -> Check {
    let odd = [g(&[1]), g(&[3]), g(&[5]), g(&[7]), g(&[9]), g(&[3, 3]), g(&[11]), g(&[13]), g(&[15])];
    for grp in &odd {
        let forms = enumerate_pm1_forms(grp).map_err(|e| e.to_string())?;
        ensure!(forms.len() == 1 && forms[0].is_trivial(), "{grp}: {} forms with values +-1", forms.len());
        if grp.order() <= 9 {
            ensure!(brute_force_pm1_forms(grp).len() == 1, "{grp}: brute force finds a nontrivial form");
        }
    }
    let mut checked = 0;
    for grp in [g(&[4]), g(&[2, 2])] {
        let forms = enumerate_pm1_forms(&grp).map_err(|e| e.to_string())?;
        let listed: BTreeSet<Vec<bool>> = forms.iter().map(as_signs).collect();
        ensure!(listed == brute_force_pm1_forms(&grp), "{grp}: enumeration differs from brute force");
        for q in &forms {
            let r = check_pm1_structure(q).map_err(|e| e.to_string())?;
            ensure!(r.trivial_on_2a && r.coset_constant, "{grp}: form {:?} fails the 2A structure", as_signs(q));
            checked += 1;
        }
    }
    Ok(format!("{} odd groups have only the trivial form; {checked} forms on Z/4 and Z/2+Z/2 checked", odd.len()))
}

fn random_exponents(rng: &mut ChaCha8Rng) -> [i32; 6] {
    std::array::from_fn(|_| rng.gen_range(-3..=3))
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut comparisons = 0;
    for _ in 0..200 {
        let m = Monomial::new(random_exponents(&mut rng));
        for kind in DiagramKind::ALL {
            let r = verify_diagram(kind, &m, 8).map_err(|e| format!("{m}: {e}"))?;
            if let Some(p) = &r.mismatch {
                return Err(format!(
                    "{}: {m}: {} vs {} in {} at {:?}",
                    r.diagram, p.left, p.right, p.tower, p.exponents
                ));
            }
            comparisons += r.comparisons;
        }
    }
    Ok(format!("200 monomials, {comparisons} route pairs agree"))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let terms = rng.gen_range(1..=4);
        let ms: Vec<Monomial> = (0..terms)
            .map(|_| {
                let mut e = [0i32; 6];
                e[0] = rng.gen_range(-3..=3);
                e[1] = rng.gen_range(-3..=3);
                e[3] = rng.gen_range(-3..=3);
                let mut m = Monomial::new(e);
                m.coeff = Rat::new(rng.gen_range(-9..=9), rng.gen_range(1..=9));
                m
            })
            .collect();
        if let Some(e) = check_weird_isom(&ms, 8).map_err(|e| e.to_string())? {
            return Err(format!("triangle fails at {e:?}"));
        }
    }
    Ok("100 random elements, triangle commutes below frontier 8".into())
}

fn criterion_8() -> Check {
    let all = [
        ("Lambda(C^3)", fixtures::exterior_c3()),
        ("Z/4 wedge", fixtures::z4_parity_wedge()),
        ("Z/3 twisted", fixtures::twisted_z3()),
        ("Z/5 twisted", fixtures::twisted_z5()),
        ("Q[x]/(x^5)", fixtures::truncated_polynomial()),
    ];
    let mut agreed = 0;
    for (name, a) in &all {
        let c = derive_cocycle(a).map_err(|e| format!("{name}: {e}"))?;
        for i in a.group.elements() {
            let o = c.omega_at(i, i);
            ensure!(o.is_one() || o == Scalar::minus_one(), "{name}: Omega({i},{i}) = {o}");
            let p = classify_parity(a, i).map_err(|e| format!("{name}, M_{i}: {e}"))?;
            let expected = if o.is_one() { Parity::Even } else { Parity::Odd };
            ensure!(p.parity == expected, "{name}, M_{i}: {:?} but Omega = {o}", p.parity);
            agreed += 1;
        }
    }
    let ext = fixtures::exterior_c3();
    let pr = pairing_parity(&ext, &fixtures::exterior_pairing()).map_err(|e| e.to_string())?;
    ensure!(pr.kind == PairingKind::Antisymmetric && pr.compatible, "Lambda(C^3) pairing: {pr:?}");
    ensure!(classify_parity(&ext, 1).unwrap().parity == Parity::Odd, "Lambda(C^3) odd part is not odd");

    // x·x^3 = x^4 pairs the odd part of Q[x]/(x^5) symmetrically.
    let poly = fixtures::truncated_polynomial();
    let one = Rat::from_integer(1);
    let zero = Rat::from_integer(0);
    let pairing = GradedPairing { element: 1, support: vec![0, 1], gram: vec![vec![zero, one], vec![one, zero]] };
    let pr = pairing_parity(&poly, &pairing).map_err(|e| e.to_string())?;
    ensure!(pr.kind == PairingKind::Symmetric && pr.compatible, "Q[x]/(x^5) pairing: {pr:?}");
    ensure!(classify_parity(&poly, 1).unwrap().parity == Parity::Even, "Q[x]/(x^5) odd part is not even");

    let sym = fixtures::symmetric_pair();
    let pr = pairing_parity(&sym, &GradedPairing { element: 1, support: vec![0, 1], gram: rational::identity(2) })
        .map_err(|e| e.to_string())?;
    ensure!(pr.kind == PairingKind::Symmetric && pr.compatible, "delta pairing: {pr:?}");
    let p = classify_parity(&sym, 1).map_err(|e| e.to_string())?;
    ensure!(p.parity == Parity::Even && p.omega.is_one(), "delta fixture: {p:?}");
    Ok(format!("{agreed} parity classifications match Omega(i,i); 3 pairings match"))
}

fn union(a: &ASet, b: &ASet) -> ASet {
    let shift = a.len();
    ASet {
        carrier: a.carrier.iter().chain(&b.carrier).cloned().collect(),
        action: a
            .action
            .iter()
            .zip(&b.action)
            .map(|(x, y)| x.iter().copied().chain(y.iter().map(|s| s + shift)).collect())
            .collect(),
    }
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut groups: Vec<FiniteAbelianGroup> = (1..=8).map(|n| g(&[n])).collect();
    groups.extend([g(&[2, 2]), g(&[4, 2]), g(&[2, 2, 2])]);
    let mut cases = 0;
    for grp in &groups {
        let mut sets = vec![ASet::trivial(grp, 1), ASet::trivial(grp, 3)];
        if grp.order() <= 6 {
            sets.push(ASet::regular(grp));
        }
        for x in grp.elements() {
            let b = grp.generated_subgroup(&[x]);
            let q = quotient_group(grp, &b).map_err(|e| e.to_string())?;
            if q.group.order() <= 6 && q.group.order() > 1 {
                let cs = ASet::cosets_of(grp, &q);
                if cs.len() < 6 {
                    sets.push(union(&cs, &ASet::trivial(grp, 1)));
                }
                sets.push(cs);
            }
        }
        for set in &sets {
            set.validate(grp).map_err(|e| e.to_string())?;
            let n = grp.order();
            let lambda = ModuleCochain {
                group: grp.clone(),
                set: set.clone(),
                values: (0..n * set.len()).map(|_| random_scalar(&mut rng)).collect(),
            };
            let phi = module_coboundary(&lambda);
            ensure!(check_module_cocycle(&phi).is_none(), "module coboundary is not a cocycle on {grp}");
            let mu = trivialize_module_cocycle(&phi).map_err(|e| e.to_string())?;
            let mu = mu.ok_or_else(|| format!("module coboundary on {grp} not trivialized"))?;
            ensure!(module_coboundary(&mu) == phi, "module trivialization residual on {grp}");

            let labels: Vec<String> = (0..rng.gen_range(1..=3)).map(|k| format!("t{k}")).collect();
            let chain = IntertwinerCochain {
                s1: set.clone(),
                s2: labels.clone(),
                values: (0..set.len() * labels.len()).map(|_| random_root(&mut rng, 12)).collect(),
            };
            let psi = psi_coboundary(grp, &chain);
            ensure!(check_psi_cocycle(&psi).is_none(), "intertwiner coboundary is not a cocycle on {grp}");
            let back = trivialize_psi_cocycle(&psi).map_err(|e| e.to_string())?;
            let back = back.ok_or_else(|| format!("intertwiner coboundary on {grp} not trivialized"))?;
            ensure!(psi_coboundary(grp, &back) == psi, "intertwiner trivialization residual on {grp}");
            cases += 1;
        }
    }
    let z4 = fixtures::z4_parity_wedge();
    let q = trace(&derive_cocycle(&z4).map_err(|e| e.to_string())?).unwrap();
    let signs: Vec<String> = q.values.iter().map(|v| sc_obstruction::io::format_scalar(*v)).collect();
    ensure!(signs == ["1", "-1", "1", "-1"], "Z/4 wedge trace is ({})", signs.join(", "));
    let cm = coset_module_build(&z4, &[0, 2]).map_err(|e| e.to_string())?;
    ensure!(cm.phi.iter().all(|m| m.is_trivial() && check_module_cocycle(m).is_none()), "Phi is not identically 1");
    ensure!(cm.psi.iter().all(|(_, m)| m.is_trivial() && check_psi_cocycle(m).is_none()), "Psi is not identically 1");
    Ok(format!("{cases} A-sets round-tripped; Z/4 wedge over {{0,2}}: Phi = 1, Psi = 1 on {} cosets", cm.blocks.len()))
}

type Criterion = (&'static str, fn() -> Check, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("EM complex soundness", criterion_1, 10),
        ("trace bijection instances", criterion_2, 60),
        ("constructive abelian H^2 = 0", criterion_3, 10),
        ("obstruction end-to-end", criterion_4, 30),
        ("forms on odd and 2-groups", criterion_5, 5),
        ("formal-calculus diagrams", criterion_6, 60),
        ("weird isomorphism", criterion_7, 10),
        ("evenness criteria", criterion_8, 5),
        ("module and intertwiner cocycles", criterion_9, 10),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let timely = elapsed <= Duration::from_secs(*limit);
        let (verdict, detail) = match (&outcome, timely) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the time limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("criterion {} [{name}]: {verdict} ({:.2} s, limit {limit} s): {detail}", k + 1, elapsed.as_secs_f64());
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
