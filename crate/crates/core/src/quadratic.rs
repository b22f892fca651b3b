//! Quadratic forms `Q: A → C^×`, the ±1-valued structure checks, pullback to
//! quotients, and a representative abelian 3-cocycle with prescribed trace.

use crate::cohomology::{is_abelian_3_cocycle, trace_unchecked, AbelianCochain3};
use crate::error::{Error, Result};
use crate::group::{quotient_group, FiniteAbelianGroup, Quotient};
use crate::scalar::Scalar;

/// Default bound on `|A|` for [`enumerate_pm1_forms`].
pub const ENUMERATION_BOUND: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    pub group: FiniteAbelianGroup,
    pub values: Vec<Scalar>,
}

impl QuadraticForm {
    pub fn trivial(group: &FiniteAbelianGroup) -> QuadraticForm {
        QuadraticForm { group: group.clone(), values: vec![Scalar::one(); group.order()] }
    }

    pub fn from_fn(group: &FiniteAbelianGroup, f: impl Fn(usize) -> Scalar) -> QuadraticForm {
        QuadraticForm { group: group.clone(), values: group.elements().map(f).collect() }
    }

    pub fn value(&self, i: usize) -> Scalar {
        self.values[i]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Scalar::is_one)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormFailure {
    /// `Q(i) ≠ Q(−i)`
    NotEven(usize),
    /// cube axiom fails at `(i,j,k)`
    Cube(usize, usize, usize),
}

/// First failure of the form axioms, checked exhaustively.
pub fn is_quadratic_form(q: &QuadraticForm) -> Option<FormFailure> {
    let g = &q.group;
    if let Some(i) = g.elements().find(|&i| q.value(i) != q.value(g.neg(i))) {
        return Some(FormFailure::NotEven(i));
    }
    for i in g.elements() {
        for j in g.elements() {
            let ij = g.add(i, j);
            for k in g.elements() {
                if cube(q, i, j, k, ij) != Scalar::one() {
                    return Some(FormFailure::Cube(i, j, k));
                }
            }
        }
    }
    None
}

#[inline]
fn cube(q: &QuadraticForm, i: usize, j: usize, k: usize, ij: usize) -> Scalar {
    let g = &q.group;
    q.value(g.add(ij, k)) * q.value(i) * q.value(j) * q.value(k)
        / (q.value(ij) * q.value(g.add(i, k)) * q.value(g.add(j, k)))
}

fn describe(q: &QuadraticForm, f: &FormFailure) -> String {
    let g = &q.group;
    match *f {
        FormFailure::NotEven(i) => format!("Q({0}) != Q(-{0})", g.format_element(i)),
        FormFailure::Cube(i, j, k) => {
            format!("cube axiom at ({}, {}, {})", g.format_element(i), g.format_element(j), g.format_element(k))
        }
    }
}

fn require_form(q: &QuadraticForm) -> Result<()> {
    match is_quadratic_form(q) {
        None => Ok(()),
        Some(f) => Err(Error::NotAQuadraticForm(describe(q, &f))),
    }
}

/// `b(i,j) = Q(i+j) / (Q(i)Q(j))`, row-major.
pub fn associated_bilinear(q: &QuadraticForm) -> Result<Vec<Scalar>> {
    require_form(q)?;
    let g = &q.group;
    let n = g.order();
    let mut b = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            b.push(q.value(g.add(i, j)) / (q.value(i) * q.value(j)));
        }
    }
    debug_assert!((0..n).all(|i| (0..n).all(|j| b[i * n + j] == b[j * n + i])));
    Ok(b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pm1Report {
    pub two_a: Vec<usize>,
    pub trivial_on_2a: bool,
    pub coset_constant: bool,
}

impl Pm1Report {
    pub fn ok(&self) -> bool {
        self.trivial_on_2a && self.coset_constant
    }
}

/// For a ±1-valued `Q`: is it 1 on `2A` and constant on cosets of `2A`?
pub fn check_pm1_structure(q: &QuadraticForm) -> Result<Pm1Report> {
    let g = &q.group;
    if let Some(i) = g.elements().find(|&i| q.value(i) != Scalar::one() && q.value(i) != Scalar::minus_one()) {
        return Err(Error::ValuesNotPm1(format!("Q({}) = {}", g.format_element(i), q.value(i))));
    }
    let mut two_a: Vec<usize> = g.elements().map(|i| g.mul_int(2, i)).collect();
    two_a.sort_unstable();
    two_a.dedup();
    let trivial_on_2a = two_a.iter().all(|&i| q.value(i).is_one());
    let coset_constant = g.elements().all(|i| two_a.iter().all(|&h| q.value(g.add(i, h)) == q.value(i)));
    Ok(Pm1Report { two_a, trivial_on_2a, coset_constant })
}

/// `Q̄` on `A/B` with `Q = Q̄ ∘ π`.
pub fn pullback_form(q: &QuadraticForm, subgroup: &[usize]) -> Result<(QuadraticForm, Quotient)> {
    let g = &q.group;
    let quotient = quotient_group(g, subgroup)?;
    for i in g.elements() {
        for &h in subgroup {
            if q.value(g.add(i, h)) != q.value(i) {
                return Err(Error::NotCosetConstant(format!(
                    "Q({}) != Q({})",
                    g.format_element(g.add(i, h)),
                    g.format_element(i)
                )));
            }
        }
    }
    let mut values = vec![Scalar::one(); quotient.group.order()];
    for i in g.elements() {
        values[quotient.projection[i]] = q.value(i);
    }
    let qbar = QuadraticForm { group: quotient.group.clone(), values };
    require_form(&qbar)?;
    debug_assert!(g.elements().all(|i| qbar.value(quotient.projection[i]) == q.value(i)));
    Ok((qbar, quotient))
}

/// A normalized abelian 3-cocycle with trace exactly `Q`.
///
/// Each cyclic factor `Z/n` with `q = Q(e)` contributes `Ω(a,b) = q^{ab}` and
/// `F(a,b,c) = (q^n)^{a·[b+c ≥ n]}` on the coordinate; every pair of factors
/// contributes the bicharacter `Ω = b(e_s,e_t)^{x_s y_t}` with `F ≡ 1`.
pub fn cocycle_from_form(q: &QuadraticForm) -> Result<AbelianCochain3> {
    require_form(q)?;
    let g = &q.group;
    if let Some(i) = g.elements().find(|&i| !q.value(i).is_root_of_unity()) {
        return Err(Error::UnsupportedValues(format!(
            "Q({}) = {} is not a root of unity",
            g.format_element(i),
            q.value(i)
        )));
    }
    let orders = g.cyclic_orders().to_vec();
    let rank = orders.len();
    let basis: Vec<usize> = (0..rank)
        .map(|t| {
            let mut coords = vec![0; rank];
            coords[t] = 1;
            g.index_of_coords(&coords)
        })
        .collect();
    let qs: Vec<Scalar> = basis.iter().map(|&e| q.value(e)).collect();
    let cross: Vec<Vec<Scalar>> =
        (0..rank).map(|s| (0..rank).map(|t| q.value(g.add(basis[s], basis[t])) / (qs[s] * qs[t])).collect()).collect();
    let coords: Vec<Vec<i64>> = g.elements().map(|i| g.coords_of(i)).collect();

    let c = AbelianCochain3::from_fns(
        g,
        |i, j, k| {
            let mut v = Scalar::one();
            for t in 0..rank {
                let n = orders[t];
                if coords[j][t] + coords[k][t] >= n {
                    v *= qs[t].pow(n * coords[i][t]);
                }
            }
            v
        },
        |i, j| {
            let mut v = Scalar::one();
            for t in 0..rank {
                v *= qs[t].pow(coords[i][t] * coords[j][t]);
                for s in 0..t {
                    v *= cross[s][t].pow(coords[i][s] * coords[j][t]);
                }
            }
            v
        },
    );
    let report = is_abelian_3_cocycle(&c);
    if !report.ok() {
        return Err(Error::UnsupportedValues(format!("constructed cochain fails: {}", report.describe(g))));
    }
    if trace_unchecked(&c) != *q {
        return Err(Error::UnsupportedValues("constructed cochain has the wrong trace".into()));
    }
    debug_assert!(c.is_normalized());
    Ok(c)
}

/// All ±1-valued quadratic forms on `A`, ordered lexicographically by their
/// value tables with `1 < −1`.
pub fn enumerate_pm1_forms(g: &FiniteAbelianGroup) -> Result<Vec<QuadraticForm>> {
    enumerate_pm1_forms_bounded(g, ENUMERATION_BOUND)
}

pub fn enumerate_pm1_forms_bounded(g: &FiniteAbelianGroup, bound: usize) -> Result<Vec<QuadraticForm>> {
    let n = g.order();
    if n > bound {
        return Err(Error::GroupTooLarge { order: n, bound });
    }
    // constraints[i]: cube triples whose largest involved index is i
    let mut constraints: Vec<Vec<[usize; 7]>> = vec![Vec::new(); n];
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let t = [g.add(g.add(a, b), c), a, b, c, g.add(a, b), g.add(a, c), g.add(b, c)];
                let top = *t.iter().max().expect("nonempty");
                constraints[top].push(t);
            }
        }
    }
    let mut out = Vec::new();
    let mut signs = vec![false; n];
    search(g, 0, &mut signs, &constraints, &mut out);
    Ok(out)
}

fn search(
    g: &FiniteAbelianGroup,
    i: usize,
    signs: &mut Vec<bool>,
    constraints: &[Vec<[usize; 7]>],
    out: &mut Vec<QuadraticForm>,
) {
    let n = g.order();
    if i == n {
        out.push(QuadraticForm::from_fn(g, |k| if signs[k] { Scalar::minus_one() } else { Scalar::one() }));
        return;
    }
    for sign in [false, true] {
        signs[i] = sign;
        let neg = g.neg(i);
        if neg < i && signs[neg] != sign {
            continue;
        }
        // the cube axiom for ±1 values: the seven signs have even parity
        let ok = constraints[i].iter().all(|t| t.iter().filter(|&&x| signs[x]).count() % 2 == 0);
        if ok {
            search(g, i + 1, signs, constraints, out);
        }
    }
    signs[i] = false;
}
