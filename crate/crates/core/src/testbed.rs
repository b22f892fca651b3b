//! Desk-scale graded algebras: finite-dimensional pieces `M_i`, a nilpotent
//! translation `L(−1)`, and multiplications `m^{i,j}_z` given as Laurent
//! polynomials with vector coefficients times a scalar prefactor.
//!
//! The obstruction cocycle is read off from actual compositions. The two sides
//! of every associativity relation are multiplied by a power of `z−w` large
//! enough to clear denominators and expanded in `((z))((w))`; both are then
//! finite, so proportionality is decided exactly.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::calculus::{self, Coord, Monomial, Space};
use crate::cohomology::{
    check_module_cocycle, check_psi_cocycle, is_abelian_3_cocycle, trivialize_3cocycle, AbelianCochain3, Cochain1,
    Cochain2, IntertwinerCocycle, ModuleCocycle, Trivialization,
};
use crate::error::{Error, Result};
use crate::group::{cosets, subgroup_as_group, ASet, FiniteAbelianGroup};
use crate::linalg::rational::{self, Matrix};
use crate::quadratic::{cocycle_from_form, pullback_form, QuadraticForm};
use crate::scalar::{Rat, Scalar};

pub type Vector = Vec<Rat>;

/// `Σ_n z^n v_n` with finitely many nonzero `v_n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentVec {
    terms: BTreeMap<i32, Vector>,
}

fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn unit_vector(dim: usize, k: usize) -> Vector {
    let mut v = vec![Rat::zero(); dim];
    v[k] = Rat::one();
    v
}

impl LaurentVec {
    pub fn zero() -> LaurentVec {
        LaurentVec::default()
    }

    pub fn constant(v: Vector) -> LaurentVec {
        LaurentVec::from_terms([(0, v)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, Vector)>) -> LaurentVec {
        let mut out = LaurentVec::zero();
        for (n, v) in terms {
            out.add_scaled(n, &v, Rat::one());
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Vector)> {
        self.terms.iter().map(|(n, v)| (*n, v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn lowest(&self) -> Option<(i32, &Vector)> {
        self.terms.iter().next().map(|(n, v)| (*n, v))
    }

    pub fn add_scaled(&mut self, n: i32, v: &[Rat], k: Rat) {
        if k.is_zero() || is_zero_vec(v) {
            return;
        }
        let entry = self.terms.entry(n).or_insert_with(|| vec![Rat::zero(); v.len()]);
        for (e, x) in entry.iter_mut().zip(v) {
            *e += k * x;
        }
        if is_zero_vec(entry) {
            self.terms.remove(&n);
        }
    }

    pub fn add(&self, other: &LaurentVec) -> LaurentVec {
        let mut out = self.clone();
        for (n, v) in other.terms() {
            out.add_scaled(n, v, Rat::one());
        }
        out
    }

    pub fn scaled(&self, k: Rat) -> LaurentVec {
        LaurentVec::from_terms(self.terms().map(|(n, v)| (n, v.iter().map(|x| k * x).collect())))
    }

    pub fn derivative(&self) -> LaurentVec {
        LaurentVec::from_terms(
            self.terms().map(|(n, v)| (n - 1, v.iter().map(|x| Rat::from_integer(n as i128) * x).collect())),
        )
    }

    pub fn map(&self, l: &Matrix) -> LaurentVec {
        LaurentVec::from_terms(self.terms().map(|(n, v)| (n, rational::apply(l, v))))
    }

    /// `z ↦ −z`.
    pub fn reflect(&self) -> LaurentVec {
        LaurentVec::from_terms(
            self.terms().map(|(n, v)| (n, if n % 2 == 0 { v.clone() } else { v.iter().map(|x| -x).collect() })),
        )
    }

    /// `e^{zL}` applied coefficientwise; finite because `L` is nilpotent.
    pub fn exp_shift(&self, l: &Matrix) -> LaurentVec {
        let mut out = LaurentVec::zero();
        for (n, v) in self.terms() {
            let mut power = v.clone();
            let mut k: i32 = 0;
            let mut factorial = Rat::one();
            while !is_zero_vec(&power) {
                out.add_scaled(n + k, &power, factorial.recip());
                power = rational::apply(l, &power);
                k += 1;
                factorial *= Rat::from_integer(k as i128);
                if k as usize > v.len() + 1 {
                    break;
                }
            }
        }
        out
    }
}

impl fmt::Display for LaurentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(n, v)| {
                let v: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("z^{n}[{}]", v.join(","))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A bilinear map `M_a ⊗ M_b → M_c((z))` with a scalar prefactor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    pub scale: Scalar,
    pub left_dim: usize,
    pub right_dim: usize,
    pub target_dim: usize,
    /// `table[a*right_dim + b]` is the image of `e_a ⊗ e_b`, without the prefactor.
    pub table: Vec<LaurentVec>,
}

impl Operator {
    pub fn get(&self, a: usize, b: usize) -> &LaurentVec {
        &self.table[a * self.right_dim + b]
    }

    /// Image of `u ⊗ v`, without the prefactor.
    pub fn apply(&self, u: &[Rat], v: &[Rat]) -> LaurentVec {
        let mut out = LaurentVec::zero();
        for (a, ua) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (b, vb) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for (n, w) in self.get(a, b).terms() {
                    out.add_scaled(n, w, ua * vb);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(LaurentVec::is_zero)
    }
}

/// `I*_z(u ⊗ v) = e^{zL} I_{−z}(v ⊗ u)`, where `L` acts on the target.
pub fn star(op: &Operator, l_target: &Matrix) -> Operator {
    let mut table = Vec::with_capacity(op.table.len());
    for a in 0..op.right_dim {
        for b in 0..op.left_dim {
            table.push(op.get(b, a).reflect().exp_shift(l_target));
        }
    }
    Operator { scale: op.scale, left_dim: op.right_dim, right_dim: op.left_dim, target_dim: op.target_dim, table }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebraData {
    pub group: FiniteAbelianGroup,
    pub dims: Vec<usize>,
    /// Basis index of the unit vector in `M_0`.
    pub unit: usize,
    pub lminus1: Vec<Matrix>,
    /// `mult[i*|A| + j][a*dims[j] + b]`
    pub mult: Vec<Vec<LaurentVec>>,
    /// Prefactor of `m^{i,j}`, row-major.
    pub scale: Vec<Scalar>,
}

impl GradedAlgebraData {
    /// Builds an instance, checking table shapes only.
    pub fn new(
        group: FiniteAbelianGroup,
        dims: Vec<usize>,
        unit: usize,
        lminus1: Vec<Matrix>,
        mult: Vec<Vec<LaurentVec>>,
        scale: Vec<Scalar>,
    ) -> Result<GradedAlgebraData> {
        let n = group.order();
        let bad = |msg: String| Err(Error::InvalidData(msg));
        if dims.len() != n || lminus1.len() != n || mult.len() != n * n || scale.len() != n * n {
            return bad(format!("expected {n} pieces and {} multiplication tables", n * n));
        }
        if unit >= dims[0] {
            return bad(format!("unit index {unit} out of range for M_0 of dimension {}", dims[0]));
        }
        for i in 0..n {
            if lminus1[i].len() != dims[i] || lminus1[i].iter().any(|r| r.len() != dims[i]) {
                return bad(format!("L(-1) on M_{} must be {}x{}", group.format_element(i), dims[i], dims[i]));
            }
            for j in 0..n {
                let target = dims[group.add(i, j)];
                let t = &mult[i * n + j];
                if t.len() != dims[i] * dims[j] {
                    return bad(format!(
                        "m^({}|{}) has {} entries",
                        group.format_element(i),
                        group.format_element(j),
                        t.len()
                    ));
                }
                if t.iter().any(|lv| lv.terms().any(|(_, v)| v.len() != target)) {
                    return bad(format!(
                        "m^({}|{}) has vectors of the wrong length",
                        group.format_element(i),
                        group.format_element(j)
                    ));
                }
            }
        }
        Ok(GradedAlgebraData { group, dims, unit, lminus1, mult, scale })
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn op(&self, i: usize, j: usize) -> Operator {
        let n = self.order();
        Operator {
            scale: self.scale[i * n + j],
            left_dim: self.dims[i],
            right_dim: self.dims[j],
            target_dim: self.dims[self.group.add(i, j)],
            table: self.mult[i * n + j].clone(),
        }
    }

    fn entry(&self, i: usize, j: usize, a: usize, b: usize) -> &LaurentVec {
        &self.mult[i * self.order() + j][a * self.dims[j] + b]
    }

    fn apply(&self, i: usize, j: usize, u: &[Rat], v: &[Rat]) -> LaurentVec {
        let mut out = LaurentVec::zero();
        for (a, ua) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (b, vb) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for (n, w) in self.entry(i, j, a, b).terms() {
                    out.add_scaled(n, w, ua * vb);
                }
            }
        }
        out
    }

    pub fn scale_at(&self, i: usize, j: usize) -> Scalar {
        self.scale[i * self.order() + j]
    }

    fn key(&self, elems: &[usize]) -> String {
        let parts: Vec<String> = elems.iter().map(|x| self.group.format_element(*x)).collect();
        format!("({})", parts.join("|"))
    }
}

/// `S·P = R` for a scalar `S` and rational `P`, `R`.
fn scaled_equal(s: Scalar, p: &LaurentVec, r: &LaurentVec) -> bool {
    if p.is_zero() || r.is_zero() {
        return p.is_zero() && r.is_zero();
    }
    match s.to_rational() {
        Some(k) => p.scaled(k) == *r,
        None => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub violation: Option<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// Unit axioms, translation covariance and nilpotency of `L(−1)`, checked on
/// basis vectors; the first violation is reported.
pub fn validate(a: &GradedAlgebraData) -> ValidationReport {
    let fail = |msg: String| ValidationReport { violation: Some(msg) };
    let g = &a.group;
    for i in g.elements() {
        let d = a.dims[i];
        let mut power = a.lminus1[i].clone();
        for _ in 0..d {
            power = rational::mul(&power, &a.lminus1[i]);
        }
        if d > 0 && !rational::is_zero(&power) {
            return fail(format!("L(-1) on M_{} is not nilpotent", g.format_element(i)));
        }
    }
    for i in g.elements() {
        for b in 0..a.dims[i] {
            let e = unit_vector(a.dims[i], b);
            let left = a.entry(0, i, a.unit, b);
            if !scaled_equal(a.scale_at(0, i), left, &LaurentVec::constant(e.clone())) {
                return fail(format!("unit axiom: m^{} (1 ⊗ e{b}) != e{b}", a.key(&[0, i])));
            }
            let right = a.entry(i, 0, b, a.unit);
            let lowest_ok = right.lowest().is_some_and(|(n, _)| n >= 0);
            let constant = LaurentVec::from_terms(right.terms().filter(|(n, _)| *n == 0).map(|(n, v)| (n, v.clone())));
            if !lowest_ok || !scaled_equal(a.scale_at(i, 0), &constant, &LaurentVec::constant(e)) {
                return fail(format!("unit axiom: m^{} (e{b} ⊗ 1) is not e{b} + O(z)", a.key(&[i, 0])));
            }
        }
    }
    for i in g.elements() {
        for j in g.elements() {
            let k = g.add(i, j);
            for x in 0..a.dims[i] {
                for y in 0..a.dims[j] {
                    let m = a.entry(i, j, x, y);
                    let dm = m.derivative();
                    let ex = unit_vector(a.dims[i], x);
                    let ey = unit_vector(a.dims[j], y);
                    let lu = rational::apply(&a.lminus1[i], &ex);
                    if dm != a.apply(i, j, &lu, &ey) {
                        return fail(format!(
                            "translation covariance: d/dz m^{} (e{x} ⊗ e{y}) != m(L e{x} ⊗ e{y})",
                            a.key(&[i, j])
                        ));
                    }
                    let lv = rational::apply(&a.lminus1[j], &ey);
                    let rhs = m.map(&a.lminus1[k]).add(&a.apply(i, j, &ex, &lv).scaled(-Rat::one()));
                    if dm != rhs {
                        return fail(format!(
                            "translation covariance: d/dz m^{} (e{x} ⊗ e{y}) != L m - m(e{x} ⊗ L e{y})",
                            a.key(&[i, j])
                        ));
                    }
                }
            }
        }
    }
    ValidationReport { violation: None }
}

/// The companion `(m^{j,i})*: M_i ⊗ M_j → M_{i+j}((z))`.
pub fn star_operator(a: &GradedAlgebraData, i: usize, j: usize) -> Operator {
    star(&a.op(j, i), &a.lminus1[a.group.add(i, j)])
}

/// Sparse rational vector keyed by (basis tuple, z exponent, w exponent, component).
type Flat = BTreeMap<(usize, i32, i32, usize), Rat>;

enum Ratio {
    BothZero,
    Exactly(Rat),
    Fails,
}

/// `p1 = r·p2` with `r` nonzero.
fn ratio(p1: &Flat, p2: &Flat) -> Ratio {
    match (p1.is_empty(), p2.is_empty()) {
        (true, true) => return Ratio::BothZero,
        (true, false) | (false, true) => return Ratio::Fails,
        _ => {}
    }
    let (k0, v0) = p2.iter().next().expect("nonempty");
    let Some(u0) = p1.get(k0) else { return Ratio::Fails };
    let r = u0 / v0;
    let consistent = p1.len() == p2.len() && p2.iter().all(|(k, v)| p1.get(k) == Some(&(r * v)));
    if consistent {
        Ratio::Exactly(r)
    } else {
        Ratio::Fails
    }
}

fn flatten_table(table: &[LaurentVec]) -> Flat {
    let mut out = Flat::new();
    for (t, lv) in table.iter().enumerate() {
        for (n, v) in lv.terms() {
            for (c, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    out.insert((t, n, 0, c), *x);
                }
            }
        }
    }
    out
}

/// `(z−w)^m` in `((z))((w))` for `m ≥ 0`, via the expansion calculus.
fn binomial_zw(m: i32, cache: &mut HashMap<i32, Vec<(i32, i32, Rat)>>) -> Vec<(i32, i32, Rat)> {
    cache
        .entry(m)
        .or_insert_with(|| {
            let tower = Space::tower("z;w", &[Coord::Z, Coord::W]);
            let s = calculus::expand(&Monomial::of(Coord::ZW, m), &tower, m.max(0) as i64)
                .expect("nonnegative powers of z-w expand in ((z))((w))");
            debug_assert!(s.is_exact());
            s.terms().map(|(e, c)| (e[0], e[1], *c)).collect()
        })
        .clone()
}

/// Both sides of the associativity relation for `(i,j,k)`, over every basis
/// triple, multiplied by a common power of `z−w` and expanded in `((z))((w))`:
/// `m^{i,j+k}_z(u ⊗ m^{j,k}_w(v ⊗ x))` and `m^{i+j,k}_w(m^{i,j}_{z−w}(u ⊗ v) ⊗ x)`.
fn associativity_sides(a: &GradedAlgebraData, i: usize, j: usize, k: usize) -> (Flat, Flat) {
    let g = &a.group;
    let (ij, jk) = (g.add(i, j), g.add(j, k));
    let (di, dj, dk) = (a.dims[i], a.dims[j], a.dims[k]);
    let mut cache = HashMap::new();
    let mut lhs = Flat::new();
    let mut rhs = Flat::new();
    for x in 0..di {
        for y in 0..dj {
            for w in 0..dk {
                let t = (x * dj + y) * dk + w;
                let ex = unit_vector(di, x);
                let ew = unit_vector(dk, w);
                // left: powers z^p w^n
                let mut left: BTreeMap<(i32, i32), Vector> = BTreeMap::new();
                for (n, inner) in a.entry(j, k, y, w).terms() {
                    for (p, outer) in a.apply(i, jk, &ex, inner).terms() {
                        add_vec(&mut left, (p, n), outer, Rat::one());
                    }
                }
                // right: powers (z−w)^q w^n
                let mut right: BTreeMap<(i32, i32), Vector> = BTreeMap::new();
                for (q, inner) in a.entry(i, j, x, y).terms() {
                    for (n, outer) in a.apply(ij, k, inner, &ew).terms() {
                        add_vec(&mut right, (q, n), outer, Rat::one());
                    }
                }
                let shift = right.keys().map(|(q, _)| -q).max().unwrap_or(0).max(0);
                let clear = binomial_zw(shift, &mut cache);
                for ((p, n), v) in &left {
                    for (zp, wp, c) in &clear {
                        insert_flat(&mut lhs, t, p + zp, n + wp, v, *c);
                    }
                }
                for ((q, n), v) in &right {
                    for (zp, wp, c) in binomial_zw(q + shift, &mut cache) {
                        insert_flat(&mut rhs, t, zp, n + wp, v, c);
                    }
                }
            }
        }
    }
    lhs.retain(|_, v| !v.is_zero());
    rhs.retain(|_, v| !v.is_zero());
    (lhs, rhs)
}

fn add_vec(map: &mut BTreeMap<(i32, i32), Vector>, key: (i32, i32), v: &[Rat], k: Rat) {
    let e = map.entry(key).or_insert_with(|| vec![Rat::zero(); v.len()]);
    for (a, b) in e.iter_mut().zip(v) {
        *a += k * b;
    }
}

fn insert_flat(flat: &mut Flat, t: usize, zp: i32, wp: i32, v: &[Rat], c: Rat) {
    for (comp, x) in v.iter().enumerate() {
        if !x.is_zero() {
            *flat.entry((t, zp, wp, comp)).or_insert_with(Rat::zero) += c * x;
        }
    }
}

/// The scalar relating `m^{i,j+k} ∘ (1 ⊗ m^{j,k})` to `m^{i+j,k} ∘ (m^{i,j} ⊗ 1)`.
fn prefactor_ratio(a: &GradedAlgebraData, i: usize, j: usize, k: usize) -> Scalar {
    let g = &a.group;
    a.scale_at(i, g.add(j, k)) * a.scale_at(j, k) / (a.scale_at(g.add(i, j), k) * a.scale_at(i, j))
}

fn skew_sides(a: &GradedAlgebraData, i: usize, j: usize) -> (Flat, Flat) {
    (flatten_table(&a.mult[i * a.order() + j]), flatten_table(&star_operator(a, i, j).table))
}

/// The unique `(F, Ω)` with `m^{i,j+k}_z ∘ (1 ⊗ m^{j,k}_w) = F(i,j,k) m^{i+j,k}_w ∘ (m^{i,j}_{z−w} ⊗ 1)`
/// and `m^{i,j}_z = Ω(i,j) e^{zL} m^{j,i}_{−z} ∘ τ`.
pub fn derive_cocycle(a: &GradedAlgebraData) -> Result<AbelianCochain3> {
    let g = &a.group;
    let mut c = AbelianCochain3::trivial(g);
    for i in g.elements() {
        for j in g.elements() {
            for k in g.elements() {
                let (lhs, rhs) = associativity_sides(a, i, j, k);
                let r = match ratio(&lhs, &rhs) {
                    Ratio::Exactly(r) => r,
                    Ratio::BothZero => return Err(Error::ZeroComposite(a.key(&[i, j, k]))),
                    Ratio::Fails => return Err(Error::NotProportional(a.key(&[i, j, k]))),
                };
                c.set_f(i, j, k, prefactor_ratio(a, i, j, k) * Scalar::from_rational(r)?);
            }
        }
    }
    for i in g.elements() {
        for j in g.elements() {
            let (p, q) = skew_sides(a, i, j);
            let r = match ratio(&p, &q) {
                Ratio::Exactly(r) => r,
                Ratio::BothZero => return Err(Error::ZeroOperator(a.key(&[i, j]))),
                Ratio::Fails => return Err(Error::NotProportional(a.key(&[i, j]))),
            };
            c.set_omega(i, j, a.scale_at(i, j) / a.scale_at(j, i) * Scalar::from_rational(r)?);
        }
    }
    debug_assert!(is_abelian_3_cocycle(&c).ok());
    Ok(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityReport {
    pub parity: Parity,
    /// `Ω(i,i)`, which is `1` for even and `−1` for odd operators.
    pub omega: Scalar,
    pub alternating: bool,
    /// Leading exponent used by the classification.
    pub exponent: i32,
}

/// Even or odd, from the leading exponent of `m^{i,i}(u ⊗ u)`, or of
/// `m^{i,i}(u ⊗ v)` when the operator is alternating.
pub fn classify_parity(a: &GradedAlgebraData, i: usize) -> Result<ParityReport> {
    let op = a.op(i, i);
    let key = a.key(&[i, i]);
    if op.is_zero() {
        return Err(Error::ZeroOperator(key));
    }
    let (p, q) = skew_sides(a, i, i);
    let r = match ratio(&p, &q) {
        Ratio::Exactly(r) if r == Rat::one() || r == -Rat::one() => r,
        _ => return Err(Error::NotProportional(key)),
    };
    let d = a.dims[i];
    let diag = (0..d).map(|x| op.get(x, x)).find(|lv| !lv.is_zero()).cloned();
    let symmetric_pair = || {
        (0..d)
            .flat_map(|x| (x + 1..d).map(move |y| (x, y)))
            .map(|(x, y)| op.get(x, y).add(op.get(y, x)))
            .find(|lv| !lv.is_zero())
    };
    let (alternating, exponent) = match diag.or_else(symmetric_pair) {
        Some(uu) => (false, uu.lowest().expect("nonzero").0),
        None => {
            let n = op.table.iter().filter_map(|lv| lv.lowest().map(|(n, _)| n)).min().expect("nonzero operator");
            (true, n)
        }
    };
    let even = if alternating { exponent.rem_euclid(2) == 1 } else { exponent.rem_euclid(2) == 0 };
    let parity = if even { Parity::Even } else { Parity::Odd };
    let omega = if even { Scalar::one() } else { Scalar::minus_one() };
    if Scalar::from_rational(r)? != omega {
        return Err(Error::InvalidData(format!("{key}: leading-term parity disagrees with the proportionality sign")));
    }
    Ok(ParityReport { parity, omega, alternating, exponent })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub cocycle: AbelianCochain3,
    pub trace: QuadraticForm,
    pub extendable: bool,
    /// Elements with `Q(i) ≠ 1`.
    pub witness: Vec<usize>,
    /// The twist to apply; its coboundary is the inverse of the derived cocycle.
    pub lambda: Option<Cochain2>,
    pub notes: Vec<String>,
}

pub fn obstruction_report(a: &GradedAlgebraData) -> Result<ObstructionReport> {
    let cocycle = derive_cocycle(a)?;
    let mut notes = Vec::new();
    if !cocycle.is_normalized() {
        notes.push("derived cocycle is not normalized; check the unit maps".to_string());
    }
    let trace = crate::cohomology::trace(&cocycle)?;
    if let Some(i) = trace.values.iter().position(|q| *q != Scalar::one() && *q != Scalar::minus_one()) {
        notes.push(format!("Q({}) = {} is not a sign", a.group.format_element(i), trace.values[i]));
    }
    match trivialize_3cocycle(&cocycle)? {
        Trivialization::Trivial(mu) => Ok(ObstructionReport {
            cocycle,
            trace,
            extendable: true,
            witness: Vec::new(),
            lambda: Some(mu.inverse()),
            notes,
        }),
        Trivialization::Obstructed { witness, .. } => {
            Ok(ObstructionReport { cocycle, trace, extendable: false, witness, lambda: None, notes })
        }
    }
}

/// `m^{i,j} ↦ λ(i,j) m^{i,j}`.
pub fn apply_twist(a: &GradedAlgebraData, lambda: &Cochain2) -> Result<GradedAlgebraData> {
    if lambda.group != a.group {
        return Err(Error::GroupMismatch(format!("{} vs {}", lambda.group, a.group)));
    }
    if let Some(i) = a.group.elements().find(|&i| !lambda.get(0, i).is_one() || !lambda.get(i, 0).is_one()) {
        return Err(Error::NotNormalized(a.group.format_element(i)));
    }
    let mut out = a.clone();
    for (s, l) in out.scale.iter_mut().zip(&lambda.values) {
        *s *= *l;
    }
    Ok(out)
}

/// Transport along `x ↦ c(i)·x` on each `M_i`.
pub fn rescale(a: &GradedAlgebraData, c: &Cochain1) -> Result<GradedAlgebraData> {
    if c.group != a.group {
        return Err(Error::GroupMismatch(format!("{} vs {}", c.group, a.group)));
    }
    let g = &a.group;
    let mut out = a.clone();
    for i in g.elements() {
        for j in g.elements() {
            out.scale[i * g.order() + j] *= c.get(g.add(i, j)) / (c.get(i) * c.get(j));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionFailure {
    Associativity { triple: Vec<usize>, basis: usize },
    SkewSymmetry { pair: Vec<usize>, basis: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionReport {
    pub failure: Option<ExtensionFailure>,
}

impl ExtensionReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }

    pub fn describe(&self, a: &GradedAlgebraData) -> String {
        match &self.failure {
            None => "associativity and skew-symmetry hold".into(),
            Some(ExtensionFailure::Associativity { triple, basis }) => {
                format!("associativity fails at {} on basis triple #{basis}", a.key(triple))
            }
            Some(ExtensionFailure::SkewSymmetry { pair, basis }) => {
                format!("skew-symmetry fails at {} on basis pair #{basis}", a.key(pair))
            }
        }
    }
}

/// First basis tuple where `s1·p1 ≠ s2·p2`.
fn first_unequal(s1: Scalar, p1: &Flat, s2: Scalar, p2: &Flat) -> Option<usize> {
    let rho = (s1 / s2).to_rational();
    let keys: std::collections::BTreeSet<_> = p1.keys().chain(p2.keys()).collect();
    for k in keys {
        let x = p1.get(k).copied().unwrap_or_else(Rat::zero);
        let y = p2.get(k).copied().unwrap_or_else(Rat::zero);
        let equal = match rho {
            Some(r) => r * x == y,
            None => x.is_zero() && y.is_zero(),
        };
        if !equal {
            return Some(k.0);
        }
    }
    None
}

/// Checks associativity and skew-symmetry directly on every basis tuple.
pub fn verify_extension(a: &GradedAlgebraData) -> ExtensionReport {
    ExtensionCheck::new(a).check(&a.scale)
}

/// Composites of an algebra with its scales factored out, for checking many rescalings.
#[derive(Clone, Debug)]
pub struct ExtensionCheck {
    group: FiniteAbelianGroup,
    associativity: Vec<(usize, usize, usize, Flat, Flat)>,
    skew: Vec<(usize, usize, Flat, Flat)>,
}

impl ExtensionCheck {
    pub fn new(a: &GradedAlgebraData) -> ExtensionCheck {
        let g = &a.group;
        let mut associativity = Vec::new();
        for i in g.elements() {
            for j in g.elements() {
                for k in g.elements() {
                    let (lhs, rhs) = associativity_sides(a, i, j, k);
                    associativity.push((i, j, k, lhs, rhs));
                }
            }
        }
        let skew = g
            .elements()
            .flat_map(|i| g.elements().map(move |j| (i, j)))
            .map(|(i, j)| {
                let (p, q) = skew_sides(a, i, j);
                (i, j, p, q)
            })
            .collect();
        ExtensionCheck { group: g.clone(), associativity, skew }
    }

    /// Checks the algebra with the scale table replaced by `scale`.
    pub fn check(&self, scale: &[Scalar]) -> ExtensionReport {
        let g = &self.group;
        let n = g.order();
        assert_eq!(scale.len(), n * n);
        let at = |i: usize, j: usize| scale[i * n + j];
        for (i, j, k, lhs, rhs) in &self.associativity {
            let (i, j, k) = (*i, *j, *k);
            let s1 = at(i, g.add(j, k)) * at(j, k);
            let s2 = at(g.add(i, j), k) * at(i, j);
            if let Some(basis) = first_unequal(s1, lhs, s2, rhs) {
                return ExtensionReport {
                    failure: Some(ExtensionFailure::Associativity { triple: vec![i, j, k], basis }),
                };
            }
        }
        for (i, j, p, q) in &self.skew {
            if let Some(basis) = first_unequal(at(*i, *j), p, at(*j, *i), q) {
                return ExtensionReport { failure: Some(ExtensionFailure::SkewSymmetry { pair: vec![*i, *j], basis }) };
            }
        }
        ExtensionReport { failure: None }
    }
}

/// A bilinear form on the span of `support` inside `M_element`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPairing {
    pub element: usize,
    pub support: Vec<usize>,
    pub gram: Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingKind {
    Symmetric,
    Antisymmetric,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingReport {
    pub kind: PairingKind,
    /// Whether `p(u,v) = ℓ(leading coefficient of m(u ⊗ v))` for some functional `ℓ`.
    pub compatible: bool,
}

pub fn pairing_parity(a: &GradedAlgebraData, p: &GradedPairing) -> Result<PairingReport> {
    let n = p.support.len();
    if p.gram.len() != n || p.gram.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidData("gram matrix does not match the support".into()));
    }
    if rational::rank(&p.gram) < n {
        return Err(Error::Degenerate);
    }
    let transpose_is = |sign: Rat| (0..n).all(|x| (0..n).all(|y| p.gram[x][y] == sign * p.gram[y][x]));
    let kind = if transpose_is(Rat::one()) {
        PairingKind::Symmetric
    } else if transpose_is(-Rat::one()) {
        PairingKind::Antisymmetric
    } else {
        PairingKind::Neither
    };
    let i = p.element;
    let target = a.dims[a.group.add(i, i)];
    let entries: Vec<(usize, usize, &LaurentVec)> = p
        .support
        .iter()
        .enumerate()
        .flat_map(|(x, &bx)| p.support.iter().enumerate().map(move |(y, &by)| (x, y, a.entry(i, i, bx, by))))
        .collect();
    let lead = entries.iter().filter_map(|(_, _, lv)| lv.lowest().map(|(n, _)| n)).min();
    let compatible = match lead {
        None => false,
        Some(n0) => {
            let rows: Matrix = entries
                .iter()
                .map(|(_, _, lv)| {
                    lv.terms().find(|(n, _)| *n == n0).map_or(vec![Rat::zero(); target], |(_, v)| v.clone())
                })
                .collect();
            let rhs: Vec<Rat> = entries.iter().map(|(x, y, _)| p.gram[*x][*y]).collect();
            rational::solve(&rows, &rhs).is_some()
        }
    };
    Ok(PairingReport { kind, compatible })
}

/// One coset `k + B` and the total dimension of `⊕_{x ∈ k+B} M_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetBlock {
    pub representative: usize,
    pub elements: Vec<usize>,
    pub dimension: usize,
}

#[derive(Clone, Debug)]
pub struct CosetModuleReport {
    pub subgroup: Vec<usize>,
    pub subgroup_group: FiniteAbelianGroup,
    pub blocks: Vec<CosetBlock>,
    /// Twist applied to the input to reach the new representatives.
    pub lambda: Cochain2,
    pub twisted: GradedAlgebraData,
    /// `Φ` on `B × B × (k+B)`, one per coset.
    pub phi: Vec<ModuleCocycle>,
    /// `Ψ` on `B × (i+B) × (j+B)`, one per ordered pair of cosets.
    pub psi: Vec<((usize, usize), IntertwinerCocycle)>,
    pub phi_trivial: bool,
    pub psi_trivial: bool,
}

/// Re-chooses the multiplications so that `⊕_{b∈B} M_b` acts on every coset
/// sum with trivial module and intertwiner cocycles.
pub fn coset_module_build(a: &GradedAlgebraData, subgroup: &[usize]) -> Result<CosetModuleReport> {
    let g = &a.group;
    let c = derive_cocycle(a)?;
    let q = crate::cohomology::trace(&c)?;
    let (reps, coset_of) = cosets(g, subgroup);
    if !g.is_subgroup(subgroup) {
        return Err(Error::NotASubgroup(format!("{} elements in {g}", subgroup.len())));
    }
    for &b in subgroup {
        if !q.value(b).is_one() {
            return Err(Error::TraceNotCosetConstant(format!("Q({}) = {}", g.format_element(b), q.value(b))));
        }
    }
    let (qbar, quotient) = pullback_form(&q, subgroup).map_err(|e| Error::TraceNotCosetConstant(e.to_string()))?;
    let cbar = cocycle_from_form(&qbar)?;
    let pulled = cbar.pullback(g, &quotient.projection);
    let mu = match trivialize_3cocycle(&c.pointwise_mul(&pulled.inverse()))? {
        Trivialization::Trivial(mu) => mu,
        Trivialization::Obstructed { .. } => {
            return Err(Error::NotACocycle("quotient representative has a different trace".into()))
        }
    };
    let lambda = mu.inverse();
    let twisted = apply_twist(a, &lambda)?;
    let c2 = derive_cocycle(&twisted)?;
    let (bgroup, emb) = subgroup_as_group(g, subgroup)?;

    let blocks: Vec<CosetBlock> = reps
        .iter()
        .enumerate()
        .map(|(ci, &r)| {
            let elements: Vec<usize> = g.elements().filter(|x| coset_of[*x] == ci).collect();
            let dimension = elements.iter().map(|x| a.dims[*x]).sum();
            CosetBlock { representative: r, elements, dimension }
        })
        .collect();
    let coset_set = |block: &CosetBlock| -> ASet {
        let pos = |x: usize| block.elements.iter().position(|e| *e == x).expect("coset is B-stable");
        ASet {
            carrier: block.elements.iter().map(|x| g.format_element(*x)).collect(),
            action: bgroup
                .elements()
                .map(|b| block.elements.iter().map(|&s| pos(g.add(emb[b], s))).collect())
                .collect(),
        }
    };

    let mut phi = Vec::new();
    for block in &blocks {
        let set = coset_set(block);
        let mut m = ModuleCocycle::trivial(&bgroup, &set);
        for x in bgroup.elements() {
            for y in bgroup.elements() {
                for (s, &e) in block.elements.iter().enumerate() {
                    m.set_value(x, y, s, c2.f_at(emb[x], emb[y], e));
                }
            }
        }
        phi.push(m);
    }
    let mut psi = Vec::new();
    for (bi, b1) in blocks.iter().enumerate() {
        let s1 = coset_set(b1);
        for (bj, b2) in blocks.iter().enumerate() {
            let labels: Vec<String> = b2.elements.iter().map(|x| g.format_element(*x)).collect();
            let mut m = IntertwinerCocycle::trivial(&bgroup, &s1, &labels);
            for x in bgroup.elements() {
                for (r, &er) in b1.elements.iter().enumerate() {
                    for (s, &es) in b2.elements.iter().enumerate() {
                        m.set_value(x, r, s, c2.f_at(emb[x], er, es));
                    }
                }
            }
            psi.push(((bi, bj), m));
        }
    }
    let phi_trivial = phi.iter().all(|m| check_module_cocycle(m).is_none() && m.is_trivial());
    let psi_trivial = psi.iter().all(|(_, m)| check_psi_cocycle(m).is_none() && m.is_trivial());
    Ok(CosetModuleReport {
        subgroup: subgroup.to_vec(),
        subgroup_group: bgroup,
        blocks,
        lambda,
        twisted,
        phi,
        psi,
        phi_trivial,
        psi_trivial,
    })
}

/// Ready-made instances.
pub mod fixtures {
    use super::*;

    fn rat(n: i128) -> Rat {
        Rat::from_integer(n)
    }

    fn zero_matrix(d: usize) -> Matrix {
        vec![vec![Rat::zero(); d]; d]
    }

    /// Subsets of `{0,1,2}` as bitmasks, split by parity of size.
    fn exterior_bases() -> (Vec<u8>, Vec<u8>) {
        let even = vec![0b000, 0b011, 0b101, 0b110];
        let odd = vec![0b001, 0b010, 0b100, 0b111];
        (even, odd)
    }

    /// `e_S ∧ e_T` as `(sign, S ∪ T)`, or `None` when they overlap.
    fn wedge(s: u8, t: u8) -> Option<(i128, u8)> {
        if s & t != 0 {
            return None;
        }
        let mut inversions = 0;
        for a in 0..3 {
            for b in 0..a {
                if s & (1 << a) != 0 && t & (1 << b) != 0 {
                    inversions += 1;
                }
            }
        }
        Some((if inversions % 2 == 0 { 1 } else { -1 }, s | t))
    }

    fn wedge_table(left: &[u8], right: &[u8], target: &[u8]) -> Vec<LaurentVec> {
        let mut table = Vec::new();
        for &s in left {
            for &t in right {
                table.push(match wedge(s, t) {
                    None => LaurentVec::zero(),
                    Some((sign, u)) => {
                        let pos = target.iter().position(|x| *x == u).expect("parity matches");
                        let mut v = vec![Rat::zero(); target.len()];
                        v[pos] = rat(sign);
                        LaurentVec::constant(v)
                    }
                });
            }
        }
        table
    }

    /// `Λ(C³)` graded by `A = Z/n` through the parity of `i`, for even `n`.
    fn parity_wedge(n: i64) -> GradedAlgebraData {
        let g = FiniteAbelianGroup::cyclic(n);
        let (even, odd) = exterior_bases();
        let basis = |i: usize| if i.is_multiple_of(2) { &even } else { &odd };
        let mut mult = Vec::new();
        for i in g.elements() {
            for j in g.elements() {
                mult.push(wedge_table(basis(i), basis(j), basis(g.add(i, j))));
            }
        }
        let k = g.order();
        GradedAlgebraData::new(g, vec![4; k], 0, vec![zero_matrix(4); k], mult, vec![Scalar::one(); k * k])
            .expect("well-formed")
    }

    /// The exterior algebra `Λ(C³)` as a `Z/2`-graded instance with `L(−1) = 0`:
    /// `M_0 = span(1, e12, e13, e23)`, `M_1 = span(e1, e2, e3, e123)`.
    pub fn exterior_c3() -> GradedAlgebraData {
        parity_wedge(2)
    }

    /// `Λ(C³)` graded by `Z/4`, `M_i = Λ^{i mod 2}`; its trace is `(1,−1,1,−1)`.
    pub fn z4_parity_wedge() -> GradedAlgebraData {
        parity_wedge(4)
    }

    /// The pairing `(u,v) ↦ coefficient of e12 in u ∧ v` on `span(e1, e2) ⊂ M_1`.
    pub fn exterior_pairing() -> GradedPairing {
        GradedPairing { element: 1, support: vec![0, 1], gram: vec![vec![rat(0), rat(1)], vec![rat(-1), rat(0)]] }
    }

    /// Group algebra of `A` with `m^{i,j}(e_i ⊗ e_j) = ε(i,j) e_{i+j}`.
    pub fn twisted_group_algebra(eps: &Cochain2) -> GradedAlgebraData {
        let g = eps.group.clone();
        let n = g.order();
        let mult = (0..n * n).map(|_| vec![LaurentVec::constant(vec![rat(1)])]).collect();
        GradedAlgebraData::new(g, vec![1; n], 0, vec![zero_matrix(1); n], mult, eps.values.clone())
            .expect("well-formed")
    }

    /// A fixed normalized 2-cochain mixing roots of unity and a rational magnitude.
    pub fn sample_epsilon(g: &FiniteAbelianGroup) -> Cochain2 {
        Cochain2::from_fn(g, |i, j| {
            if i == 0 || j == 0 {
                return Scalar::one();
            }
            let phase = Scalar::root_of_unity(((3 * i + 5 * j + i * j) % 12) as i64, 12);
            if (i + 2 * j) % 3 == 0 {
                phase * Scalar::from_integer(2).expect("positive")
            } else {
                phase
            }
        })
    }

    pub fn twisted_z3() -> GradedAlgebraData {
        twisted_group_algebra(&sample_epsilon(&FiniteAbelianGroup::cyclic(3)))
    }

    pub fn twisted_z5() -> GradedAlgebraData {
        twisted_group_algebra(&sample_epsilon(&FiniteAbelianGroup::cyclic(5)))
    }

    pub fn group_algebra(g: &FiniteAbelianGroup) -> GradedAlgebraData {
        twisted_group_algebra(&Cochain2::trivial(g))
    }

    /// `Q[x]/(x⁵)` graded by parity of degree, with `L(−1) = x³ d/dx` and
    /// `m_z(u ⊗ v) = (e^{zL}u) v`.
    pub fn truncated_polynomial() -> GradedAlgebraData {
        let g = FiniteAbelianGroup::cyclic(2);
        let degrees = [vec![0u32, 2, 4], vec![1u32, 3]];
        let position = |deg: u32| -> Option<(usize, usize)> {
            (0..2).find_map(|p| degrees[p].iter().position(|d| *d == deg).map(|k| (p, k)))
        };
        let derivation = |p: usize| -> Matrix {
            let d = degrees[p].len();
            let mut m = zero_matrix(d);
            for (col, &deg) in degrees[p].iter().enumerate() {
                if deg > 0 {
                    if let Some((_, row)) = position(deg + 2).filter(|(q, _)| *q == p) {
                        m[row][col] = rat(deg as i128);
                    }
                }
            }
            m
        };
        let lminus1 = vec![derivation(0), derivation(1)];
        let mut mult = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                let target = (i + j) % 2;
                let mut table = Vec::new();
                for &du in &degrees[i] {
                    for &dv in &degrees[j] {
                        // e^{zD} x^du = Σ_k z^k D^k(x^du)/k!, D x^m = m x^{m+2}
                        let mut lv = LaurentVec::zero();
                        let mut coeff = Rat::one();
                        let mut deg = du;
                        let mut k = 0;
                        while deg + dv <= 4 && !coeff.is_zero() {
                            if let Some((p, idx)) = position(deg + dv) {
                                debug_assert_eq!(p, target);
                                let mut v = vec![Rat::zero(); degrees[target].len()];
                                v[idx] = coeff;
                                lv.add_scaled(k, &v, Rat::one());
                            }
                            coeff = coeff * rat(deg as i128) / rat(k as i128 + 1);
                            deg += 2;
                            k += 1;
                        }
                        table.push(lv);
                    }
                }
                mult.push(table);
            }
        }
        GradedAlgebraData::new(g, vec![3, 2], 0, lminus1, mult, vec![Scalar::one(); 4]).expect("well-formed")
    }

    /// `Z/2`-graded, `M_1` two-dimensional with `m^{1,1}(e_a ⊗ e_b) = δ_ab 1`.
    pub fn symmetric_pair() -> GradedAlgebraData {
        let g = FiniteAbelianGroup::cyclic(2);
        let one = |d: usize, k: usize| LaurentVec::constant(unit_vector(d, k));
        let mult = vec![
            vec![one(1, 0)],
            vec![one(2, 0), one(2, 1)],
            vec![one(2, 0), one(2, 1)],
            vec![one(1, 0), LaurentVec::zero(), LaurentVec::zero(), one(1, 0)],
        ];
        GradedAlgebraData::new(g, vec![1, 2], 0, vec![zero_matrix(1), zero_matrix(2)], mult, vec![Scalar::one(); 4])
            .expect("well-formed")
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::cohomology::{d2, twist};

    #[test]
    fn fixtures_validate() {
        for a in
            [exterior_c3(), z4_parity_wedge(), twisted_z3(), twisted_z5(), truncated_polynomial(), symmetric_pair()]
        {
            assert!(validate(&a).ok(), "{:?}", validate(&a));
        }
        let mut bad = group_algebra(&FiniteAbelianGroup::cyclic(3));
        bad.mult[4][0] = LaurentVec::from_terms([(1, vec![Rat::one()])]);
        assert!(!validate(&bad).ok());
    }

    #[test]
    fn exterior_cocycle() {
        let a = exterior_c3();
        let c = derive_cocycle(&a).unwrap();
        assert!(c.f.iter().all(Scalar::is_one));
        assert_eq!(c.omega_at(1, 1), Scalar::minus_one());
        let r = obstruction_report(&a).unwrap();
        assert!(!r.extendable);
        assert_eq!(r.witness, vec![1]);
        let p = classify_parity(&a, 1).unwrap();
        assert_eq!((p.parity, p.alternating, p.exponent), (Parity::Odd, true, 0));
        let report = verify_extension(&a);
        assert!(matches!(report.failure, Some(ExtensionFailure::SkewSymmetry { ref pair, .. }) if pair == &vec![1, 1]));
        let pr = pairing_parity(&a, &exterior_pairing()).unwrap();
        assert_eq!(pr, PairingReport { kind: PairingKind::Antisymmetric, compatible: true });
    }

    #[test]
    fn twisted_group_algebras() {
        for a in [twisted_z3(), twisted_z5()] {
            let eps = Cochain2 { group: a.group.clone(), values: a.scale.clone() };
            assert_eq!(derive_cocycle(&a).unwrap(), d2(&eps));
            let r = obstruction_report(&a).unwrap();
            assert!(r.extendable);
            let fixed = apply_twist(&a, r.lambda.as_ref().unwrap()).unwrap();
            assert!(verify_extension(&fixed).ok());
        }
        let plain = group_algebra(&FiniteAbelianGroup::cyclic(2));
        assert!(verify_extension(&plain).ok());
        assert!(obstruction_report(&plain).unwrap().lambda.unwrap().is_trivial());
    }

    #[test]
    fn twist_shifts_cocycle() {
        let a = z4_parity_wedge();
        let lambda = Cochain2::from_fn(&a.group, |i, j| {
            if i == 0 || j == 0 {
                Scalar::one()
            } else {
                Scalar::root_of_unity((i + 3 * j) as i64, 8)
            }
        });
        let c = derive_cocycle(&a).unwrap();
        assert_eq!(derive_cocycle(&apply_twist(&a, &lambda).unwrap()).unwrap(), twist(&c, &lambda));
        let mut bad = Cochain2::trivial(&a.group);
        bad.set(0, 1, Scalar::minus_one());
        assert!(matches!(apply_twist(&a, &bad), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn star_involution() {
        let a = truncated_polynomial();
        for i in 0..2 {
            for j in 0..2 {
                let op = a.op(i, j);
                let l = &a.lminus1[a.group.add(i, j)];
                assert_eq!(star(&star(&op, l), l), op);
            }
        }
        let ext = exterior_c3();
        let s = star_operator(&ext, 1, 1);
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(*s.get(x, y), ext.op(1, 1).get(x, y).scaled(-Rat::one()));
            }
        }
    }

    #[test]
    fn polynomial_instance() {
        let a = truncated_polynomial();
        let c = derive_cocycle(&a).unwrap();
        assert!(c.is_trivial());
        assert_eq!(classify_parity(&a, 1).unwrap().parity, Parity::Even);
        assert!(verify_extension(&a).ok());
    }

    #[test]
    fn symmetric_parity() {
        let a = symmetric_pair();
        assert_eq!(classify_parity(&a, 1).unwrap().parity, Parity::Even);
        assert!(matches!(derive_cocycle(&a), Err(Error::NotProportional(_))));
        let id = GradedPairing { element: 1, support: vec![0, 1], gram: rational::identity(2) };
        assert_eq!(pairing_parity(&a, &id).unwrap(), PairingReport { kind: PairingKind::Symmetric, compatible: true });
        let degenerate = GradedPairing { element: 1, support: vec![0, 1], gram: vec![vec![Rat::zero(); 2]; 2] };
        assert!(matches!(pairing_parity(&a, &degenerate), Err(Error::Degenerate)));
    }

    #[test]
    fn coset_modules() {
        let a = z4_parity_wedge();
        let r = coset_module_build(&a, &[0, 2]).unwrap();
        assert_eq!(r.blocks.len(), 2);
        assert!(r.phi_trivial && r.psi_trivial);
        let ext = exterior_c3();
        let r = coset_module_build(&ext, &[0]).unwrap();
        assert!(r.phi_trivial && r.psi_trivial);
        assert!(matches!(coset_module_build(&ext, &[0, 1]), Err(Error::TraceNotCosetConstant(_))));
        let g3 = twisted_z3();
        let r = coset_module_build(&g3, &[0, 1, 2]).unwrap();
        assert_eq!(r.blocks.len(), 1);
        assert!(r.phi_trivial && r.psi_trivial);
    }

    #[test]
    fn uniqueness_by_rescaling() {
        let a = twisted_z3();
        let lambda1 = obstruction_report(&a).unwrap().lambda.unwrap();
        let psi =
            Cochain1::from_fn(&a.group, |i| if i == 0 { Scalar::one() } else { Scalar::root_of_unity(i as i64, 7) });
        let lambda2 = lambda1.pointwise_mul(&crate::cohomology::d1(&psi));
        let a1 = apply_twist(&a, &lambda1).unwrap();
        let a2 = apply_twist(&a, &lambda2).unwrap();
        assert!(verify_extension(&a2).ok());
        let phi = crate::cohomology::trivialize_2cocycle(&lambda2.pointwise_mul(&lambda1.inverse())).unwrap();
        let c = Cochain1 { group: phi.group.clone(), values: phi.values.iter().map(Scalar::inv).collect() };
        assert_eq!(rescale(&a1, &c).unwrap(), a2);
    }
}
