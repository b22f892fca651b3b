//! Low-degree Eilenberg-Mac Lane cochains of `K(A,2)` with scalar coefficients:
//! differentials, the abelian 3-cocycle conditions, normalization, trace and
//! constructive trivialization, plus the module and intertwiner cocycle layers.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::group::{ASet, FiniteAbelianGroup};
use crate::linalg::IntSystem;
use crate::quadratic::QuadraticForm;
use crate::scalar::{decompose, Scalar};

/// `φ: A → C^×`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain1 {
    pub group: FiniteAbelianGroup,
    pub values: Vec<Scalar>,
}

/// `f: A × A → C^×`, stored row-major: `values[i*|A| + j] = f(i,j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain2 {
    pub group: FiniteAbelianGroup,
    pub values: Vec<Scalar>,
}

/// The pair `(F, Ω)` on `A³ × A²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianCochain3 {
    pub group: FiniteAbelianGroup,
    pub f: Vec<Scalar>,
    pub omega: Vec<Scalar>,
}

impl Cochain1 {
    pub fn trivial(group: &FiniteAbelianGroup) -> Cochain1 {
        Cochain1 { group: group.clone(), values: vec![Scalar::one(); group.order()] }
    }

    pub fn from_fn(group: &FiniteAbelianGroup, f: impl Fn(usize) -> Scalar) -> Cochain1 {
        Cochain1 { group: group.clone(), values: group.elements().map(f).collect() }
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.values[i]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Scalar::is_one)
    }
}

impl Cochain2 {
    pub fn trivial(group: &FiniteAbelianGroup) -> Cochain2 {
        let n = group.order();
        Cochain2 { group: group.clone(), values: vec![Scalar::one(); n * n] }
    }

    pub fn from_fn(group: &FiniteAbelianGroup, f: impl Fn(usize, usize) -> Scalar) -> Cochain2 {
        let values =
            group.elements().flat_map(|i| group.elements().map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        Cochain2 { group: group.clone(), values }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.values[i * self.group.order() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        let n = self.group.order();
        self.values[i * n + j] = v;
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Scalar::is_one)
    }

    /// `f(0,i) = f(i,0) = 1` for all `i`.
    pub fn is_normalized(&self) -> bool {
        self.group.elements().all(|i| self.get(0, i).is_one() && self.get(i, 0).is_one())
    }

    pub fn inverse(&self) -> Cochain2 {
        Cochain2 { group: self.group.clone(), values: self.values.iter().map(Scalar::inv).collect() }
    }

    pub fn pointwise_mul(&self, other: &Cochain2) -> Cochain2 {
        assert_eq!(self.group, other.group);
        Cochain2 {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| *a * *b).collect(),
        }
    }
}

impl AbelianCochain3 {
    pub fn trivial(group: &FiniteAbelianGroup) -> AbelianCochain3 {
        let n = group.order();
        AbelianCochain3 { group: group.clone(), f: vec![Scalar::one(); n * n * n], omega: vec![Scalar::one(); n * n] }
    }

    pub fn from_fns(
        group: &FiniteAbelianGroup,
        f: impl Fn(usize, usize, usize) -> Scalar,
        omega: impl Fn(usize, usize) -> Scalar,
    ) -> AbelianCochain3 {
        let n = group.order();
        let mut fv = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    fv.push(f(i, j, k));
                }
            }
        }
        let ov = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| omega(i, j)).collect();
        AbelianCochain3 { group: group.clone(), f: fv, omega: ov }
    }

    #[inline]
    pub fn f_at(&self, i: usize, j: usize, k: usize) -> Scalar {
        let n = self.group.order();
        self.f[(i * n + j) * n + k]
    }

    #[inline]
    pub fn omega_at(&self, i: usize, j: usize) -> Scalar {
        self.omega[i * self.group.order() + j]
    }

    pub fn set_f(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        let n = self.group.order();
        self.f[(i * n + j) * n + k] = v;
    }

    pub fn set_omega(&mut self, i: usize, j: usize, v: Scalar) {
        let n = self.group.order();
        self.omega[i * n + j] = v;
    }

    pub fn is_trivial(&self) -> bool {
        self.f.iter().chain(&self.omega).all(Scalar::is_one)
    }

    /// `F` is 1 whenever an argument is 0 and `Ω(0,i) = Ω(i,0) = 1`.
    pub fn is_normalized(&self) -> bool {
        let g = &self.group;
        g.elements().all(|i| {
            self.omega_at(0, i).is_one()
                && self.omega_at(i, 0).is_one()
                && g.elements()
                    .all(|j| self.f_at(0, i, j).is_one() && self.f_at(i, 0, j).is_one() && self.f_at(i, j, 0).is_one())
        })
    }

    pub fn pointwise_mul(&self, other: &AbelianCochain3) -> AbelianCochain3 {
        assert_eq!(self.group, other.group);
        AbelianCochain3 {
            group: self.group.clone(),
            f: self.f.iter().zip(&other.f).map(|(a, b)| *a * *b).collect(),
            omega: self.omega.iter().zip(&other.omega).map(|(a, b)| *a * *b).collect(),
        }
    }

    pub fn inverse(&self) -> AbelianCochain3 {
        AbelianCochain3 {
            group: self.group.clone(),
            f: self.f.iter().map(Scalar::inv).collect(),
            omega: self.omega.iter().map(Scalar::inv).collect(),
        }
    }

    /// Pulls a cochain on a quotient back along `projection`.
    pub fn pullback(&self, group: &FiniteAbelianGroup, projection: &[usize]) -> AbelianCochain3 {
        AbelianCochain3::from_fns(
            group,
            |i, j, k| self.f_at(projection[i], projection[j], projection[k]),
            |i, j| self.omega_at(projection[i], projection[j]),
        )
    }
}

pub fn d1(phi: &Cochain1) -> Cochain2 {
    let g = &phi.group;
    Cochain2::from_fn(g, |i, j| phi.get(j) * phi.get(i) / phi.get(g.add(i, j)))
}

pub fn d2(f: &Cochain2) -> AbelianCochain3 {
    let g = &f.group;
    AbelianCochain3::from_fns(
        g,
        |i, j, k| f.get(j, k) * f.get(i, g.add(j, k)) / (f.get(g.add(i, j), k) * f.get(i, j)),
        |l, m| f.get(l, m) / f.get(m, l),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CocycleCondition {
    /// `F(i,j,k)F(i,j+k,l)F(j,k,l) = F(i+j,k,l)F(i,j,k+l)`
    Pentagon,
    /// `F(i,j,k)⁻¹Ω(i,j+k)F(j,k,i)⁻¹ = Ω(i,j)F(j,i,k)⁻¹Ω(i,k)`
    HexagonOne,
    /// `F(i,j,k)Ω(i+j,k)F(k,i,j) = Ω(j,k)F(i,k,j)Ω(i,k)`
    HexagonTwo,
}

impl fmt::Display for CocycleCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CocycleCondition::Pentagon => "pentagon",
            CocycleCondition::HexagonOne => "hexagon-1",
            CocycleCondition::HexagonTwo => "hexagon-2",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleFailure {
    pub condition: CocycleCondition,
    pub tuple: Vec<usize>,
}

/// Result of an exhaustive identity check; `failure` is the first violation in
/// canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    pub failure: Option<CocycleFailure>,
}

impl CocycleReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }

    pub fn describe(&self, g: &FiniteAbelianGroup) -> String {
        match &self.failure {
            None => "ok".into(),
            Some(fail) => {
                let t: Vec<String> = fail.tuple.iter().map(|x| g.format_element(*x)).collect();
                format!("{} fails at ({})", fail.condition, t.join(", "))
            }
        }
    }
}

/// Scalars as integer logarithms: a phase residue modulo a common modulus and
/// an exponent vector over the primes of the magnitudes.
struct Logs {
    modulus: i64,
    primes: usize,
    phase: Vec<i64>,
    exps: Vec<i64>,
}

impl Logs {
    fn new(values: &[Scalar]) -> Logs {
        let (ph, mag) = decompose(values);
        let primes = mag.primes.len();
        Logs { modulus: ph.modulus, primes, phase: ph.residues, exps: mag.exponents.concat() }
    }

    /// Whether the product of `plus` equals the product of `minus`.
    fn balanced(&self, plus: &[usize], minus: &[usize]) -> bool {
        let mut ph: i64 = 0;
        for &k in plus {
            ph += self.phase[k];
        }
        for &k in minus {
            ph -= self.phase[k];
        }
        if ph.rem_euclid(self.modulus) != 0 {
            return false;
        }
        (0..self.primes).all(|p| {
            let e = |k: usize| self.exps[k * self.primes + p];
            plus.iter().map(|&k| e(k)).sum::<i64>() == minus.iter().map(|&k| e(k)).sum::<i64>()
        })
    }
}

/// Pentagon over `A⁴`, then both hexagons over `A³`, each in lexicographic order.
pub fn is_abelian_3_cocycle(c: &AbelianCochain3) -> CocycleReport {
    let g = &c.group;
    let n = g.order();
    let fail = |condition, tuple: Vec<usize>| CocycleReport { failure: Some(CocycleFailure { condition, tuple }) };
    let logs = Logs::new(&[c.f.as_slice(), c.omega.as_slice()].concat());
    let f = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let o = |i: usize, j: usize| n * n * n + i * n + j;
    for i in 0..n {
        for j in 0..n {
            let ij = g.add(i, j);
            for k in 0..n {
                let jk = g.add(j, k);
                for l in 0..n {
                    if !logs.balanced(&[f(i, j, k), f(i, jk, l), f(j, k, l)], &[f(ij, k, l), f(i, j, g.add(k, l))]) {
                        return fail(CocycleCondition::Pentagon, vec![i, j, k, l]);
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let plus = [o(i, g.add(j, k)), f(j, i, k)];
                let minus = [f(i, j, k), f(j, k, i), o(i, j), o(i, k)];
                if !logs.balanced(&plus, &minus) {
                    return fail(CocycleCondition::HexagonOne, vec![i, j, k]);
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let plus = [f(i, j, k), o(g.add(i, j), k), f(k, i, j)];
                let minus = [o(j, k), f(i, k, j), o(i, k)];
                if !logs.balanced(&plus, &minus) {
                    return fail(CocycleCondition::HexagonTwo, vec![i, j, k]);
                }
            }
        }
    }
    CocycleReport { failure: None }
}

fn require_cocycle(c: &AbelianCochain3) -> Result<()> {
    let report = is_abelian_3_cocycle(c);
    if report.ok() {
        Ok(())
    } else {
        Err(Error::NotACocycle(report.describe(&c.group)))
    }
}

/// `Q(i) = Ω(i,i)`.
pub fn trace(c: &AbelianCochain3) -> Result<QuadraticForm> {
    require_cocycle(c)?;
    Ok(trace_unchecked(c))
}

pub(crate) fn trace_unchecked(c: &AbelianCochain3) -> QuadraticForm {
    QuadraticForm::from_fn(&c.group, |i| c.omega_at(i, i))
}

/// `c · d²λ`.
pub fn twist(c: &AbelianCochain3, lambda: &Cochain2) -> AbelianCochain3 {
    c.pointwise_mul(&d2(lambda))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum SystemKind {
    D1,
    D2Normalized,
    Normalization,
    Module(u64),
    Psi(u64),
}

fn cached_system(
    group: &FiniteAbelianGroup,
    kind: SystemKind,
    build: impl FnOnce() -> (Vec<Vec<(usize, i128)>>, usize),
) -> Result<Arc<IntSystem>> {
    type Cache = Mutex<HashMap<(Vec<i64>, SystemKind), Arc<IntSystem>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (group.cyclic_orders().to_vec(), kind);
    if let Some(sys) = cache.lock().expect("solver cache").get(&key) {
        return Ok(sys.clone());
    }
    let (rows, cols) = build();
    let sys = Arc::new(IntSystem::new(&rows, cols)?);
    cache.lock().expect("solver cache").insert(key, sys.clone());
    Ok(sys)
}

fn push_term(row: &mut Vec<(usize, i128)>, col: usize, coeff: i128) {
    if let Some(e) = row.iter_mut().find(|(c, _)| *c == col) {
        e.1 += coeff;
    } else {
        row.push((col, coeff));
    }
    row.retain(|(_, x)| *x != 0);
}

/// Whether `d²f` is trivial.
pub fn is_abelian_2_cocycle(f: &Cochain2) -> bool {
    let g = &f.group;
    let n = g.order();
    let logs = Logs::new(&f.values);
    let at = |i: usize, j: usize| i * n + j;
    for i in 0..n {
        for j in 0..n {
            if !logs.balanced(&[at(i, j)], &[at(j, i)]) {
                return false;
            }
            let ij = g.add(i, j);
            for k in 0..n {
                if !logs.balanced(&[at(j, k), at(i, g.add(j, k))], &[at(ij, k), at(i, j)]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Returns `φ` with `d¹φ = f`, for a symmetric group 2-cocycle `f`.
pub fn trivialize_2cocycle(f: &Cochain2) -> Result<Cochain1> {
    let g = &f.group;
    if !is_abelian_2_cocycle(f) {
        let report = d2(f);
        let bad = g
            .elements()
            .flat_map(|i| g.elements().map(move |j| (i, j)))
            .find(|&(i, j)| !report.omega_at(i, j).is_one())
            .map(|(i, j)| {
                format!(
                    "f({},{}) != f({},{})",
                    g.format_element(i),
                    g.format_element(j),
                    g.format_element(j),
                    g.format_element(i)
                )
            })
            .unwrap_or_else(|| "cocycle identity fails".into());
        return Err(Error::NotAbelian2Cocycle(bad));
    }
    let n = g.order();
    let sys = cached_system(g, SystemKind::D1, || {
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut r = Vec::new();
                push_term(&mut r, i, 1);
                push_term(&mut r, j, 1);
                push_term(&mut r, g.add(i, j), -1);
                rows.push(r);
            }
        }
        (rows, n)
    })?;
    let phi = sys
        .solve_scalars(&f.values)?
        .ok_or_else(|| Error::NotAbelian2Cocycle("coboundary system is inconsistent".into()))?;
    Ok(Cochain1 { group: g.clone(), values: phi })
}

/// Solves `c · d²λ` normalized; returns `(λ, c·d²λ)`.
pub fn normalize_cocycle(c: &AbelianCochain3) -> Result<(Cochain2, AbelianCochain3)> {
    require_cocycle(c)?;
    if c.is_normalized() {
        return Ok((Cochain2::trivial(&c.group), c.clone()));
    }
    let g = &c.group;
    let n = g.order();
    // equations d²λ(t) = c(t)⁻¹ for every tuple with a zero argument
    let tuples = normalization_tuples(g);
    let sys = cached_system(g, SystemKind::Normalization, || {
        let rows = tuples.iter().map(|t| d2_row(g, t)).collect();
        (rows, n * n)
    })?;
    let rhs: Vec<Scalar> = tuples.iter().map(|t| t.value(c).inv()).collect();
    let lambda =
        sys.solve_scalars(&rhs)?.ok_or_else(|| Error::NotACocycle("normalization system is inconsistent".into()))?;
    let lambda = Cochain2 { group: g.clone(), values: lambda };
    let normalized = twist(c, &lambda);
    debug_assert!(normalized.is_normalized());
    Ok((lambda, normalized))
}

#[derive(Clone, Copy, Debug)]
enum Tuple {
    F(usize, usize, usize),
    Omega(usize, usize),
}

impl Tuple {
    fn value(&self, c: &AbelianCochain3) -> Scalar {
        match *self {
            Tuple::F(i, j, k) => c.f_at(i, j, k),
            Tuple::Omega(i, j) => c.omega_at(i, j),
        }
    }
}

fn normalization_tuples(g: &FiniteAbelianGroup) -> Vec<Tuple> {
    let n = g.order();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == 0 || j == 0 || k == 0 {
                    out.push(Tuple::F(i, j, k));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == 0 || j == 0 {
                out.push(Tuple::Omega(i, j));
            }
        }
    }
    out
}

/// The row of the exponent matrix of `d²` at one tuple, over unknowns `λ(i,j)` at `i*n+j`.
fn d2_row(g: &FiniteAbelianGroup, t: &Tuple) -> Vec<(usize, i128)> {
    let n = g.order();
    let idx = |a: usize, b: usize| a * n + b;
    let mut r = Vec::new();
    match *t {
        Tuple::F(i, j, k) => {
            push_term(&mut r, idx(j, k), 1);
            push_term(&mut r, idx(i, g.add(j, k)), 1);
            push_term(&mut r, idx(g.add(i, j), k), -1);
            push_term(&mut r, idx(i, j), -1);
        }
        Tuple::Omega(l, m) => {
            push_term(&mut r, idx(l, m), 1);
            push_term(&mut r, idx(m, l), -1);
        }
    }
    r
}

/// Outcome of trying to write an abelian 3-cocycle as a coboundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Trivialization {
    /// `d²λ = c`; `λ` is normalized whenever `c` is.
    Trivial(Cochain2),
    /// The trace is not identically 1; `witness` lists `{i : Q(i) ≠ 1}`.
    Obstructed { witness: Vec<usize>, trace: QuadraticForm },
}

pub fn trivialize_3cocycle(c: &AbelianCochain3) -> Result<Trivialization> {
    require_cocycle(c)?;
    let q = trace_unchecked(c);
    let witness: Vec<usize> = c.group.elements().filter(|i| !q.value(*i).is_one()).collect();
    if !witness.is_empty() {
        return Ok(Trivialization::Obstructed { witness, trace: q });
    }
    let (lambda1, normalized) = normalize_cocycle(c)?;
    let lambda2 = solve_normalized_coboundary(&normalized)?;
    let lambda = lambda2.pointwise_mul(&lambda1.inverse());
    debug_assert_eq!(&d2(&lambda), c);
    Ok(Trivialization::Trivial(lambda))
}

/// Finds normalized `λ` with `d²λ = c` for normalized `c` with trivial trace.
fn solve_normalized_coboundary(c: &AbelianCochain3) -> Result<Cochain2> {
    let g = &c.group;
    let n = g.order();
    let m = n - 1;
    let var = |i: usize, j: usize| (i - 1) * m + (j - 1);
    let mut tuples = Vec::new();
    for i in 1..n {
        for j in 1..n {
            for k in 1..n {
                tuples.push(Tuple::F(i, j, k));
            }
        }
    }
    for i in 1..n {
        for j in 1..n {
            tuples.push(Tuple::Omega(i, j));
        }
    }
    let sys = cached_system(g, SystemKind::D2Normalized, || {
        let rows = tuples
            .iter()
            .map(|t| {
                let mut r = Vec::new();
                for (col, coeff) in d2_row(g, t) {
                    let (a, b) = (col / n, col % n);
                    if a != 0 && b != 0 {
                        push_term(&mut r, var(a, b), coeff);
                    }
                }
                r
            })
            .collect();
        (rows, m * m)
    })?;
    let rhs: Vec<Scalar> = tuples.iter().map(|t| t.value(c)).collect();
    let sol = sys
        .solve_scalars(&rhs)?
        .ok_or_else(|| Error::NotACocycle("coboundary system is inconsistent although the trace is trivial".into()))?;
    Ok(Cochain2::from_fn(g, |i, j| if i == 0 || j == 0 { Scalar::one() } else { sol[var(i, j)] }))
}

/// `Φ: A × A × S → C^×` over an A-set `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleCocycle {
    pub group: FiniteAbelianGroup,
    pub set: ASet,
    /// `values[(i*|A| + j)*|S| + s]`
    pub values: Vec<Scalar>,
}

/// `λ: A × S → C^×`, stored as `values[i*|S| + s]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleCochain {
    pub group: FiniteAbelianGroup,
    pub set: ASet,
    pub values: Vec<Scalar>,
}

impl ModuleCochain {
    pub fn get(&self, i: usize, s: usize) -> Scalar {
        self.values[i * self.set.len() + s]
    }
}

impl ModuleCocycle {
    pub fn trivial(group: &FiniteAbelianGroup, set: &ASet) -> ModuleCocycle {
        let len = group.order() * group.order() * set.len();
        ModuleCocycle { group: group.clone(), set: set.clone(), values: vec![Scalar::one(); len] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, s: usize) -> Scalar {
        let n = self.group.order();
        self.values[(i * n + j) * self.set.len() + s]
    }

    pub fn set_value(&mut self, i: usize, j: usize, s: usize, v: Scalar) {
        let n = self.group.order();
        let len = self.set.len();
        self.values[(i * n + j) * len + s] = v;
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Scalar::is_one)
    }
}

/// First `(i,j,k,s)` violating `Φ(i,j+k,s)Φ(j,k,s) = Φ(i+j,k,s)Φ(i,j,k+s)`.
pub fn check_module_cocycle(phi: &ModuleCocycle) -> Option<(usize, usize, usize, usize)> {
    let g = &phi.group;
    let set = &phi.set;
    for i in g.elements() {
        for j in g.elements() {
            for k in g.elements() {
                for s in 0..set.len() {
                    let lhs = phi.get(i, g.add(j, k), s) * phi.get(j, k, s);
                    let rhs = phi.get(g.add(i, j), k, s) * phi.get(i, j, set.act(k, s));
                    if lhs != rhs {
                        return Some((i, j, k, s));
                    }
                }
            }
        }
    }
    None
}

/// `dλ(i,j,s) = λ(i, j+s) λ(j, s) / λ(i+j, s)`.
pub fn module_coboundary(lambda: &ModuleCochain) -> ModuleCocycle {
    let g = &lambda.group;
    let set = &lambda.set;
    let mut out = ModuleCocycle::trivial(g, set);
    for i in g.elements() {
        for j in g.elements() {
            for s in 0..set.len() {
                let v = lambda.get(i, set.act(j, s)) * lambda.get(j, s) / lambda.get(g.add(i, j), s);
                out.set_value(i, j, s, v);
            }
        }
    }
    out
}

fn set_fingerprint(sets: &[&ASet]) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    for s in sets {
        s.action.hash(&mut h);
        s.carrier.len().hash(&mut h);
    }
    h.finish()
}

/// `λ` with `dλ = Φ`, or `None` when the linear system certifies there is none.
pub fn trivialize_module_cocycle(phi: &ModuleCocycle) -> Result<Option<ModuleCochain>> {
    let g = &phi.group;
    let set = &phi.set;
    let n = g.order();
    let len = set.len();
    let var = |i: usize, s: usize| i * len + s;
    let sys = cached_system(g, SystemKind::Module(set_fingerprint(&[set])), || {
        let mut rows = Vec::with_capacity(n * n * len);
        for i in 0..n {
            for j in 0..n {
                for s in 0..len {
                    let mut r = Vec::new();
                    push_term(&mut r, var(i, set.act(j, s)), 1);
                    push_term(&mut r, var(j, s), 1);
                    push_term(&mut r, var(g.add(i, j), s), -1);
                    rows.push(r);
                }
            }
        }
        (rows, n * len)
    })?;
    Ok(sys.solve_scalars(&phi.values)?.map(|values| ModuleCochain { group: g.clone(), set: set.clone(), values }))
}

/// `Ψ: A × S₁ × S₂ → C^×`, with `A` acting on `S₁` and trivially on `S₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntertwinerCocycle {
    pub group: FiniteAbelianGroup,
    pub s1: ASet,
    pub s2: Vec<String>,
    /// `values[(i*|S₁| + r)*|S₂| + s]`
    pub values: Vec<Scalar>,
}

/// `λ: S₁ × S₂ → C^×`, stored as `values[r*|S₂| + s]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntertwinerCochain {
    pub s1: ASet,
    pub s2: Vec<String>,
    pub values: Vec<Scalar>,
}

impl IntertwinerCochain {
    pub fn get(&self, r: usize, s: usize) -> Scalar {
        self.values[r * self.s2.len() + s]
    }
}

impl IntertwinerCocycle {
    pub fn trivial(group: &FiniteAbelianGroup, s1: &ASet, s2: &[String]) -> IntertwinerCocycle {
        let len = group.order() * s1.len() * s2.len();
        IntertwinerCocycle { group: group.clone(), s1: s1.clone(), s2: s2.to_vec(), values: vec![Scalar::one(); len] }
    }

    #[inline]
    pub fn get(&self, i: usize, r: usize, s: usize) -> Scalar {
        self.values[(i * self.s1.len() + r) * self.s2.len() + s]
    }

    pub fn set_value(&mut self, i: usize, r: usize, s: usize, v: Scalar) {
        let idx = (i * self.s1.len() + r) * self.s2.len() + s;
        self.values[idx] = v;
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Scalar::is_one)
    }
}

/// First `(i,j,r,s)` violating `Ψ(i,j+r,s)Ψ(j,r,s) = Ψ(i+j,r,s)`.
pub fn check_psi_cocycle(psi: &IntertwinerCocycle) -> Option<(usize, usize, usize, usize)> {
    let g = &psi.group;
    for i in g.elements() {
        for j in g.elements() {
            for r in 0..psi.s1.len() {
                for s in 0..psi.s2.len() {
                    let lhs = psi.get(i, psi.s1.act(j, r), s) * psi.get(j, r, s);
                    if lhs != psi.get(g.add(i, j), r, s) {
                        return Some((i, j, r, s));
                    }
                }
            }
        }
    }
    None
}

/// `dλ(i,r,s) = λ(i+r, s) / λ(r, s)`.
pub fn psi_coboundary(group: &FiniteAbelianGroup, lambda: &IntertwinerCochain) -> IntertwinerCocycle {
    let mut out = IntertwinerCocycle::trivial(group, &lambda.s1, &lambda.s2);
    for i in group.elements() {
        for r in 0..lambda.s1.len() {
            for s in 0..lambda.s2.len() {
                out.set_value(i, r, s, lambda.get(lambda.s1.act(i, r), s) / lambda.get(r, s));
            }
        }
    }
    out
}

/// `λ` with `dλ = Ψ`, or `None` when no such `λ` exists.
pub fn trivialize_psi_cocycle(psi: &IntertwinerCocycle) -> Result<Option<IntertwinerCochain>> {
    let g = &psi.group;
    let (l1, l2) = (psi.s1.len(), psi.s2.len());
    let var = |r: usize, s: usize| r * l2 + s;
    let sys = cached_system(g, SystemKind::Psi(set_fingerprint(&[&psi.s1]) ^ (l2 as u64).rotate_left(17)), || {
        let mut rows = Vec::new();
        for i in g.elements() {
            for r in 0..l1 {
                for s in 0..l2 {
                    let mut row = Vec::new();
                    push_term(&mut row, var(psi.s1.act(i, r), s), 1);
                    push_term(&mut row, var(r, s), -1);
                    rows.push(row);
                }
            }
        }
        (rows, l1 * l2)
    })?;
    Ok(sys.solve_scalars(&psi.values)?.map(|values| IntertwinerCochain {
        s1: psi.s1.clone(),
        s2: psi.s2.clone(),
        values,
    }))
}
